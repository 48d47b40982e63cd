//! The main triangle projection `T_n` and the growth of its multiplier norms.

use alloc::format;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use crate::linalg::Mat;
use crate::math::ln;
use crate::opnorm::{opnorm_estimate_with, OpnormOptions};
use crate::schur::gamma2_norm;
use crate::seqspace::SpaceSpec;
use crate::{Budget, Error, Exponent, NormBounds, Result};

/// Keeps `a_ij` for `j <= i <= n` (0-based: `j <= i < n`) and zeroes the rest.
pub fn triangle_project(a: &Mat, n: usize) -> Result<Mat> {
    let max = a.rows().min(a.cols());
    if n == 0 || n > max {
        return Err(Error::InvalidArgument(format!(
            "triangle size {n} outside 1..={max}"
        )));
    }
    Ok(Mat::from_fn(a.rows(), a.cols(), |i, j| {
        if j <= i && i < n {
            a[(i, j)]
        } else {
            0.0
        }
    }))
}

/// The `n x n` lower-triangular matrix of ones, the symbol of `T_n`.
pub fn lower_triangular_ones(n: usize) -> Mat {
    Mat::from_fn(n, n, |i, j| if j <= i { 1.0 } else { 0.0 })
}

/// `1 / (i - j)` off the diagonal and 0 on it.
pub fn hilbert_kernel(n: usize) -> Mat {
    Mat::from_fn(n, n, |i, j| {
        if i == j {
            0.0
        } else {
            1.0 / (i as f64 - j as f64)
        }
    })
}

/// `|T_n|_{(2,2)}`, the `gamma_2` norm of [`lower_triangular_ones`].
pub fn triangle_multiplier_norm(n: usize, budget: Budget) -> Result<NormBounds> {
    if n == 0 {
        return Err(Error::InvalidArgument(
            "triangle size must be positive".into(),
        ));
    }
    Ok(gamma2_norm(&lower_triangular_ones(n), budget)?.bounds)
}

/// What [`growth_experiment`] measures for each size.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "snake_case")]
pub enum GrowthMode {
    /// `gamma_2(T_n)` with both bounds.
    Gamma2,
    /// Lower bounds on `|T_n|_{(p,q)}` from `|T_n(A)|_{p,q} / |A|_{p,q}` over
    /// the Hilbert kernel and `random_signs` seeded sign matrices.
    RatioPq {
        p: Exponent,
        q: Exponent,
        #[serde(default)]
        random_signs: usize,
    },
}

/// Values per size with the least-squares fit `value ~ a + b ln n`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GrowthCurve {
    pub sizes: Vec<usize>,
    /// Lower bounds, the fitted quantity.
    pub values: Vec<f64>,
    #[serde(with = "crate::serde_ext::vec")]
    pub uppers: Vec<f64>,
    /// `(a, b)`.
    pub fit: (f64, f64),
    pub r_squared: f64,
    /// Sizes whose interval is wider than the reporting tolerance.
    #[serde(default)]
    pub under_resolved: Vec<usize>,
}

impl GrowthCurve {
    /// `value - (a + b ln n)` per size.
    pub fn residuals(&self) -> Vec<f64> {
        let (a, b) = self.fit;
        self.sizes
            .iter()
            .zip(&self.values)
            .map(|(n, v)| v - (a + b * ln(*n as f64)))
            .collect()
    }
}

/// Relative interval width above which a growth point is marked under-resolved.
pub const GROWTH_GAP_TOL: f64 = 1e-3;

/// Computes one value per size and fits `a + b ln n`.
pub fn growth_experiment(
    sizes: &[usize],
    mode: GrowthMode,
    budget: Budget,
    seed: u64,
) -> Result<GrowthCurve> {
    if sizes.is_empty() || sizes[0] == 0 || sizes.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidArgument(
            "sizes must be positive and strictly increasing".into(),
        ));
    }
    let mut values = Vec::with_capacity(sizes.len());
    let mut uppers = Vec::with_capacity(sizes.len());
    let mut under_resolved = Vec::new();
    for &n in sizes {
        let b = match mode {
            GrowthMode::Gamma2 => triangle_multiplier_norm(n, budget)?,
            GrowthMode::RatioPq { p, q, random_signs } => {
                ratio_bound(n, p, q, random_signs, budget, seed)?
            }
        };
        if b.has_flags() || (b.upper.is_finite() && b.gap() > GROWTH_GAP_TOL) {
            under_resolved.push(n);
        }
        values.push(b.lower);
        uppers.push(b.upper);
    }
    let xs: Vec<f64> = sizes.iter().map(|n| ln(*n as f64)).collect();
    let (fit, r_squared) = log_fit(&xs, &values);
    Ok(GrowthCurve {
        sizes: sizes.to_vec(),
        values,
        uppers,
        fit,
        r_squared,
        under_resolved,
    })
}

/// Least squares `y ~ a + b x`; `r^2 = 1` when `y` is constant.
pub(crate) fn log_fit(xs: &[f64], ys: &[f64]) -> ((f64, f64), f64) {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let b = if sxx > 0.0 { sxy / sxx } else { 0.0 };
    let a = my - b * mx;
    let sst: f64 = ys.iter().map(|y| (y - my) * (y - my)).sum();
    let sse: f64 = xs
        .iter()
        .zip(ys)
        .map(|(x, y)| {
            let r = y - (a + b * x);
            r * r
        })
        .sum();
    let r2 = if sst > 0.0 { 1.0 - sse / sst } else { 1.0 };
    ((a, b), r2)
}

/// Best `lower(|T_n(A)|) / upper(|A|)` over the witness family.
/// `upper` is infinite: no general upper bound on `|T_n|_{(p,q)}` is computed.
fn ratio_bound(
    n: usize,
    p: Exponent,
    q: Exponent,
    random_signs: usize,
    budget: Budget,
    seed: u64,
) -> Result<NormBounds> {
    let (e, f) = (SpaceSpec::lp_exp(p), SpaceSpec::lp_exp(q));
    let opts = OpnormOptions {
        budget,
        seed,
        force_numeric: false,
    };
    let mut rng = crate::rng::seeded(seed, 0x7472_6961);
    let mut family = Vec::with_capacity(1 + random_signs);
    if n > 1 {
        family.push(hilbert_kernel(n));
    } else {
        family.push(Mat::ones(1, 1));
    }
    for _ in 0..random_signs {
        family.push(Mat::new(n, n, crate::rng::sign_vec(&mut rng, n * n))?);
    }
    let mut best: Option<(f64, Mat, f64)> = None;
    for a in family {
        let top = opnorm_estimate_with(&triangle_project(&a, n)?, &e, &f, &opts)?;
        let bottom = opnorm_estimate_with(&a, &e, &f, &opts)?;
        if !(bottom.upper > 0.0) {
            continue;
        }
        let r = top.lower / bottom.upper;
        let width = top.gap().max(bottom.gap());
        if best.as_ref().is_none_or(|(v, _, _)| r > *v) {
            best = Some((r, a, width));
        }
    }
    let (lower, a, width) = best.unwrap_or((0.0, Mat::zeros(n, n), 0.0));
    let mut b = NormBounds {
        lower,
        upper: f64::INFINITY,
        method: crate::Method::Sampled,
        witness: a.data().to_vec(),
        certified: false,
        flags: Vec::new(),
    };
    if width > GROWTH_GAP_TOL {
        b.push_flag(crate::Flag::WideInterval { ratio: 1.0 + width });
    }
    Ok(b)
}
