//! Operator norms `|A|_{E,F} = sup_{|x|_E <= 1} |Ax|_F` of finite matrices.
//!
//! `E` measures vectors of length `cols`, `F` vectors of length `rows`.
//! Witnesses are vectors `x` of length `cols` with `|Ax|_F / |x|_E = lower`.

use alloc::vec;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use crate::ascent::maximize_ratio;
use crate::kothe::flaky_spread;
use crate::linalg::{svd, Mat};
use crate::seqspace::{kothe_dual_norm_with, norm, norm_grad, DualOptions, SpaceSpec};
use crate::{Budget, Exponent, Flag, Method, NormBounds, Result};

/// `upper / lower` above which a multistart result is flagged as wide.
pub const WIDE_RATIO: f64 = 1.01;

/// Effort and routing for [`opnorm_estimate_with`].
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct OpnormOptions {
    pub budget: Budget,
    pub seed: u64,
    /// Skip the exact routes and always run the multistart search.
    #[serde(default)]
    pub force_numeric: bool,
}

impl Default for OpnormOptions {
    fn default() -> Self {
        OpnormOptions {
            budget: Budget::OPNORM,
            seed: 0,
            force_numeric: false,
        }
    }
}

/// `Ax`.
pub fn apply(a: &Mat, x: &[f64]) -> Result<Vec<f64>> {
    a.apply(x)
}

/// `|A|_{1,E}`: the largest `E`-norm of a column.
pub fn norm_1_to_e(a: &Mat, e: &SpaceSpec) -> Result<f64> {
    Ok(column_max(a, e)?.0)
}

fn column_max(a: &Mat, e: &SpaceSpec) -> Result<(f64, usize)> {
    let mut best = (0.0, 0);
    for j in 0..a.cols() {
        let v = norm(e, &a.col(j))?;
        if v > best.0 {
            best = (v, j);
        }
    }
    Ok(best)
}

/// `|A|_{E,inf}`: the largest Köthe-dual norm of a row.
///
/// Exact when the dual norm has a closed form; otherwise the interval of the
/// worst row. The witness is the dual witness of that row.
pub fn norm_e_to_inf(a: &Mat, e: &SpaceSpec) -> Result<NormBounds> {
    norm_e_to_inf_with(a, e, &DualOptions::default())
}

fn norm_e_to_inf_with(a: &Mat, e: &SpaceSpec, opts: &DualOptions) -> Result<NormBounds> {
    e.check_dim(a.cols())?;
    let mut best: Option<NormBounds> = None;
    let mut upper: f64 = 0.0;
    let mut certified = true;
    for i in 0..a.rows() {
        let b = kothe_dual_norm_with(e, a.row(i), opts)?;
        upper = upper.max(b.upper);
        certified &= b.certified;
        if best.as_ref().is_none_or(|c| b.lower > c.lower) {
            best = Some(b);
        }
    }
    let mut b = best.unwrap_or_else(|| NormBounds::zero(a.cols()));
    if b.lower == 0.0 {
        return Ok(NormBounds::zero(a.cols()));
    }
    b.upper = upper;
    b.certified = certified;
    b.method = Method::RowDualMax;
    finish(a, e, &SpaceSpec::linf(), b)
}

/// Bounds on `|A|_{E,F}` with the default options.
pub fn opnorm_estimate(
    a: &Mat,
    e: &SpaceSpec,
    f: &SpaceSpec,
    budget: Budget,
    seed: u64,
) -> Result<NormBounds> {
    let opts = OpnormOptions {
        budget,
        seed,
        force_numeric: false,
    };
    opnorm_estimate_with(a, e, f, &opts)
}

/// Bounds on `|A|_{E,F}`.
///
/// Exact routes: `(l_2, l_2)` by the largest singular value, `E = l_1` by
/// the column maximum and `F = l_inf` by the row dual maximum. Otherwise the
/// lower bound comes from a multistart ascent of `|Ax|_F / |x|_E` and the
/// upper bound is the smaller of two triangle-inequality estimates:
///
/// * columns: `|Ax|_F <= sum |x_j| |a_j|_F <= |x|_E |(|a_j|_F)_j|_{E^x}`
/// * rows: `|Ax|_F <= |(|r_i|_{E^x} |x|_E)_i|_F` by the lattice property of `F`.
pub fn opnorm_estimate_with(
    a: &Mat,
    e: &SpaceSpec,
    f: &SpaceSpec,
    opts: &OpnormOptions,
) -> Result<NormBounds> {
    check_shape(a, e, f)?;
    if opts.budget.starts == 0 || opts.budget.iters == 0 {
        return Err(crate::Error::InvalidArgument(
            "budget must be positive".into(),
        ));
    }
    if a.is_zero() {
        return Ok(NormBounds::zero(a.cols()));
    }
    if !opts.force_numeric {
        let two = Some(Exponent::TWO);
        if e.lp_exponent() == two && f.lp_exponent() == two {
            let d = svd(a);
            let v = d.v.col(0);
            return finish(a, e, f, NormBounds::exact(d.largest(), Method::Spectral, v));
        }
        if e.is_lp(1.0) {
            let (v, j) = column_max(a, f)?;
            let mut w = vec![0.0; a.cols()];
            w[j] = 1.0;
            let mut b = NormBounds::exact(v, Method::ColumnMax, w);
            b.certified = f.is_direct();
            return finish(a, e, f, b);
        }
        if f.lp_exponent().is_some_and(Exponent::is_infinite) {
            let dual = DualOptions {
                budget: crate::Budget::DUAL,
                seed: opts.seed,
                force_numeric: false,
            };
            return norm_e_to_inf_with(a, e, &dual);
        }
    }
    multistart(a, e, f, opts)
}

/// Returns `(|A|_{E,F}, |A^T|_{F^x,E^x})`, equal for Fatou norms.
pub fn transpose_duality_pair(
    a: &Mat,
    e: &SpaceSpec,
    f: &SpaceSpec,
    budget: Budget,
    seed: u64,
) -> Result<(NormBounds, NormBounds)> {
    let direct = opnorm_estimate(a, e, f, budget, seed)?;
    let dual = opnorm_estimate(&a.transpose(), &f.dual(), &e.dual(), budget, seed)?;
    Ok((direct, dual))
}

fn check_shape(a: &Mat, e: &SpaceSpec, f: &SpaceSpec) -> Result<()> {
    e.check_dim(a.cols())?;
    f.check_dim(a.rows())
}

fn multistart(a: &Mat, e: &SpaceSpec, f: &SpaceSpec, opts: &OpnormOptions) -> Result<NormBounds> {
    let n = a.cols();
    let mut num = |x: &[f64]| -> Result<(f64, Vec<f64>)> {
        let (v, g) = norm_grad(f, &a.apply_unchecked(x))?;
        Ok((v, a.apply_transpose_unchecked(&g)))
    };
    let mut den = |x: &[f64]| norm_grad(e, x);
    let d = svd(a);
    let (_, jmax) = column_max(a, f)?;
    let row_start = best_row_start(a, e)?;
    let mut rng = crate::rng::seeded(opts.seed, 0x6f70_6e6d);
    let mut values = Vec::with_capacity(opts.budget.starts);
    let mut best: Option<(f64, Vec<f64>)> = None;
    for idx in 0..opts.budget.starts {
        let start = match idx {
            0 => d.v.col(0),
            1 => {
                let mut w = vec![0.0; n];
                w[jmax] = 1.0;
                w
            }
            2 => row_start.clone(),
            3 if n.min(a.rows()) > 1 => d.v.col(1),
            i if i % 2 == 0 => crate::rng::sign_vec(&mut rng, n),
            _ => crate::rng::gaussian_vec(&mut rng, n),
        };
        let Some(run) = maximize_ratio(&mut num, &mut den, &start, false, opts.budget.iters)?
        else {
            continue;
        };
        values.push(run.value);
        if best.as_ref().is_none_or(|(v, _)| run.value > *v) {
            best = Some((run.value, run.x));
        }
    }
    let Some((lower, witness)) = best else {
        return Ok(NormBounds::zero(n));
    };
    let (upper, certified) = decomposition_upper(a, e, f, opts.seed)?;
    let mut b = NormBounds {
        lower,
        upper,
        method: Method::Multistart,
        witness,
        certified,
        flags: Vec::new(),
    };
    if let Some(spread) = flaky_spread(&mut values) {
        b.push_flag(Flag::FlakyLandscape { spread });
    }
    finish(a, e, f, b)
}

/// The norming vector of the row with the largest dual norm when the dual
/// of `E` is evaluated directly, else the signs of the largest row.
fn best_row_start(a: &Mat, e: &SpaceSpec) -> Result<Vec<f64>> {
    let dual = e.dual();
    if dual.is_direct() {
        let mut best = (f64::MIN, Vec::new());
        for i in 0..a.rows() {
            let (v, g) = norm_grad(&dual, a.row(i))?;
            if v > best.0 {
                best = (v, g);
            }
        }
        return Ok(best.1);
    }
    let i = (0..a.rows())
        .max_by(|&p, &q| {
            crate::math::sum_abs(a.row(p))
                .partial_cmp(&crate::math::sum_abs(a.row(q)))
                .unwrap_or(core::cmp::Ordering::Equal)
        })
        .unwrap_or(0);
    Ok(a.row(i).iter().map(|v| crate::math::signum(*v)).collect())
}

/// The smaller of the column and row estimates documented on
/// [`opnorm_estimate_with`], with whether it is certified.
fn decomposition_upper(a: &Mat, e: &SpaceSpec, f: &SpaceSpec, seed: u64) -> Result<(f64, bool)> {
    let opts = DualOptions {
        budget: Budget::DUAL,
        seed,
        force_numeric: false,
    };
    let col_norms = (0..a.cols())
        .map(|j| norm(f, &a.col(j)))
        .collect::<Result<Vec<f64>>>()?;
    let by_cols = kothe_dual_norm_with(e, &col_norms, &opts)?;
    let mut row_duals = Vec::with_capacity(a.rows());
    let mut rows_certified = true;
    for i in 0..a.rows() {
        let b = kothe_dual_norm_with(e, a.row(i), &opts)?;
        rows_certified &= b.certified;
        row_duals.push(b.upper);
    }
    let by_rows = norm(f, &row_duals)?;
    let f_exact = f.is_direct();
    let cols = (by_cols.upper, by_cols.certified && f_exact);
    let rows = (by_rows, rows_certified && f_exact);
    Ok(if cols.0 <= rows.0 { cols } else { rows })
}

/// Normalizes the witness to `|x|_E = 1` and, unless the route was exact,
/// resets `lower` to the value the witness attains. Attaches width flags.
fn finish(a: &Mat, e: &SpaceSpec, f: &SpaceSpec, mut b: NormBounds) -> Result<NormBounds> {
    let nx = norm(e, &b.witness)?;
    if nx > 0.0 {
        for w in b.witness.iter_mut() {
            *w /= nx;
        }
        if !b.is_exact() {
            b.lower = norm(f, &a.apply(&b.witness)?)?;
            b.upper = b.upper.max(b.lower);
        }
    }
    if b.method == Method::Multistart && b.lower > 0.0 && b.upper / b.lower > WIDE_RATIO {
        b.push_flag(Flag::WideInterval {
            ratio: b.upper / b.lower,
        });
    }
    Ok(b)
}
