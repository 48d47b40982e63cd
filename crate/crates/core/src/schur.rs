//! Schur products, Schur-multiplier norms and the `gamma_2` factorization norm.
//!
//! `|M|_{(E,F)} = sup { |M * A|_{E,F} : |A|_{E,F} <= 1 }`. The `(2,2)` case
//! equals `gamma_2(M)`, the least `sup_i |y_i| sup_j |x_j|` over Hilbert
//! space factorizations `m_ij = <y_i, x_j>`, which [`gamma2_norm`] computes
//! with matching primal and dual certificates.

use alloc::vec;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use crate::linalg::{svd, symmetric_eigenvalues, Mat};
use crate::math::sqrt;
use crate::opnorm::{opnorm_estimate_with, OpnormOptions};
use crate::seqspace::{convexity_probe, Direction, SpaceSpec};
use crate::{Budget, Exponent, Flag, Method, NormBounds, Result};

/// Relative duality gap above which [`gamma2_norm`] flags non-convergence.
pub const GAMMA2_GAP_TOL: f64 = 1e-2;
/// Smallest eigenvalue accepted for the dual block matrix.
pub const PSD_TOL: f64 = 1e-8;
/// Fixed-point iterations used by [`gamma2_norm`] when no budget is given.
pub const GAMMA2_BUDGET: Budget = Budget::new(1, 20_000);

/// Bounds on a multiplier norm with the certificate or witness behind them.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MultiplierReport {
    pub bounds: NormBounds,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub certificate: Option<Gamma2Cert>,
    /// Matrix with `|M * A| / |A| >= bounds.lower`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness_a: Option<Mat>,
}

/// Primal factorization `m_ij = <y_i, x_j>` and dual weights for `gamma_2`.
///
/// `value = sup_i |y_i| sup_j |x_j|` is the upper bound. With row weights
/// `lambda`, column weights `mu` (summing to 1 together) and
/// `Z = D_sqrt(lambda) U V^T D_sqrt(mu)`, the block matrix
/// `[[D_lambda, -Z], [-Z^T, D_mu]]` is positive semidefinite (smallest
/// eigenvalue `min_eigenvalue`) and `dual_value = 2 <M, Z>` is a lower bound.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Gamma2Cert {
    pub x: Vec<Vec<f64>>,
    pub y: Vec<Vec<f64>>,
    pub ambient_dim: usize,
    pub value: f64,
    pub reconstruction_error: f64,
    pub row_weights: Vec<f64>,
    pub col_weights: Vec<f64>,
    pub dual_value: f64,
    pub min_eigenvalue: f64,
}

impl Gamma2Cert {
    /// Recomputes `max_ij |<y_i, x_j> - m_ij|`.
    pub fn reconstruction_against(&self, m: &Mat) -> f64 {
        let mut err: f64 = 0.0;
        for (i, y) in self.y.iter().enumerate() {
            for (j, x) in self.x.iter().enumerate() {
                err = err.max(crate::math::abs(crate::math::dot(y, x) - m[(i, j)]));
            }
        }
        err
    }

    /// Recomputes `sup_i |y_i| sup_j |x_j|`.
    pub fn recompute_value(&self) -> f64 {
        let my = self
            .y
            .iter()
            .map(|v| crate::math::norm2(v))
            .fold(0.0, f64::max);
        let mx = self
            .x
            .iter()
            .map(|v| crate::math::norm2(v))
            .fold(0.0, f64::max);
        my * mx
    }
}

/// `(a_ij b_ij)`.
pub fn schur_product(a: &Mat, b: &Mat) -> Result<Mat> {
    a.zip_map(b, |x, y| x * y)
}

/// `sup_ij |m_ij|`, the `(1, E)` and `(E, inf)` multiplier norm for every `E`.
pub fn multiplier_norm_extreme(m: &Mat) -> f64 {
    m.max_abs()
}

/// `gamma_2(M)` by a damped fixed point on the dual weights.
///
/// The dual problem maximizes `2 |D_sqrt(lambda) M D_sqrt(mu)|_*` over
/// nonnegative weights with `sum lambda + sum mu = 1`; its optimality
/// conditions say `lambda_i` is proportional to the `i`-th diagonal entry of
/// `U S U^T`, and likewise for `mu`. Every iterate yields both a dual lower
/// bound and a primal factorization `Y = D_lambda^(-1/2) U S^(1/2)`,
/// `X = D_mu^(-1/2) V S^(1/2)`; they meet at the fixed point. Only
/// `budget.iters` is used.
///
/// `bounds.witness` holds the weights `(lambda, mu)` of the dual bound.
pub fn gamma2_norm(m: &Mat, budget: Budget) -> Result<MultiplierReport> {
    let (rows, cols) = m.shape();
    let floor = m.max_abs();
    if floor == 0.0 {
        return Ok(MultiplierReport {
            bounds: NormBounds::zero(rows + cols),
            certificate: Some(Gamma2Cert {
                x: vec![vec![0.0]; cols],
                y: vec![vec![0.0]; rows],
                ambient_dim: 1,
                value: 0.0,
                reconstruction_error: 0.0,
                row_weights: vec![0.0; rows],
                col_weights: vec![0.0; cols],
                dual_value: 0.0,
                min_eigenvalue: 0.0,
            }),
            witness_a: None,
        });
    }
    // zero rows and columns carry no weight and get zero vectors
    let ri: Vec<usize> = (0..rows)
        .filter(|&i| m.row(i).iter().any(|v| *v != 0.0))
        .collect();
    let ci: Vec<usize> = (0..cols)
        .filter(|&j| (0..rows).any(|i| m[(i, j)] != 0.0))
        .collect();
    let sub = Mat::from_fn(ri.len(), ci.len(), |a, b| m[(ri[a], ci[b])]);
    let (p, q) = sub.shape();

    let mut lam = vec![0.5 / p as f64; p];
    let mut mu = vec![0.5 / q as f64; q];
    let mut best_upper: Option<(f64, Stage)> = None;
    let mut best_lower: Option<(f64, Stage)> = None;
    for _ in 0..budget.iters.max(1) {
        let st = Stage::new(&sub, &lam, &mu);
        let (lo, up) = (2.0 * st.h, st.upper());
        let (a, b) = (st.row_diag(), st.col_diag());
        if best_upper.as_ref().is_none_or(|(v, _)| up < *v) {
            best_upper = Some((up, st.clone()));
        }
        if best_lower.as_ref().is_none_or(|(v, _)| lo > *v) {
            best_lower = Some((lo, st));
        }
        let (bl, bu) = (
            best_lower.as_ref().unwrap().0,
            best_upper.as_ref().unwrap().0,
        );
        if bu <= bl * (1.0 + 1e-12) {
            break;
        }
        // geometric damping towards lambda_i = a_i / (2h)
        for (l, ai) in lam.iter_mut().zip(&a) {
            *l = sqrt(*l * ai / lo);
        }
        for (u, bj) in mu.iter_mut().zip(&b) {
            *u = sqrt(*u * bj / lo);
        }
        let total: f64 = lam.iter().sum::<f64>() + mu.iter().sum::<f64>();
        for v in lam.iter_mut().chain(mu.iter_mut()) {
            *v = (*v / total).max(f64::MIN_POSITIVE);
        }
    }
    let (_, primal) = best_upper.expect("at least one iteration");
    let (_, dual) = best_lower.expect("at least one iteration");

    // primal factorization in original indexing, balanced
    let k = primal.rank();
    let mut y = vec![vec![0.0; k.max(1)]; rows];
    let mut x = vec![vec![0.0; k.max(1)]; cols];
    for (a, &i) in ri.iter().enumerate() {
        let s = 1.0 / sqrt(primal.lam[a]);
        for (t, v) in y[i].iter_mut().enumerate().take(k) {
            *v = s * primal.svd.u[(a, t)] * sqrt(primal.svd.s[t]);
        }
    }
    for (b, &j) in ci.iter().enumerate() {
        let s = 1.0 / sqrt(primal.mu[b]);
        for (t, v) in x[j].iter_mut().enumerate().take(k) {
            *v = s * primal.svd.v[(b, t)] * sqrt(primal.svd.s[t]);
        }
    }
    let my = y.iter().map(|v| crate::math::norm2(v)).fold(0.0, f64::max);
    let mx = x.iter().map(|v| crate::math::norm2(v)).fold(0.0, f64::max);
    let c = sqrt(mx / my);
    y.iter_mut().flatten().for_each(|v| *v *= c);
    x.iter_mut().flatten().for_each(|v| *v /= c);

    // dual certificate: Z = D_sqrt(lam) U V^T D_sqrt(mu)
    let kd = dual.dual_rank();
    let z = Mat::from_fn(p, q, |a, b| {
        let uv: f64 = (0..kd)
            .map(|t| dual.svd.u[(a, t)] * dual.svd.v[(b, t)])
            .sum();
        sqrt(dual.lam[a]) * uv * sqrt(dual.mu[b])
    });
    let dual_value = 2.0 * sub.frobenius_dot(&z);
    let block = Mat::from_fn(p + q, p + q, |r, s| match (r < p, s < p) {
        (true, true) => {
            if r == s {
                dual.lam[r]
            } else {
                0.0
            }
        }
        (false, false) => {
            if r == s {
                dual.mu[r - p]
            } else {
                0.0
            }
        }
        (true, false) => -z[(r, s - p)],
        (false, true) => -z[(s, r - p)],
    });
    let min_eigenvalue = symmetric_eigenvalues(&block)?[0];

    let mut row_weights = vec![0.0; rows];
    let mut col_weights = vec![0.0; cols];
    for (a, &i) in ri.iter().enumerate() {
        row_weights[i] = dual.lam[a];
    }
    for (b, &j) in ci.iter().enumerate() {
        col_weights[j] = dual.mu[b];
    }
    let mut cert = Gamma2Cert {
        x,
        y,
        ambient_dim: k.max(1),
        value: 0.0,
        reconstruction_error: 0.0,
        row_weights,
        col_weights,
        dual_value,
        min_eigenvalue,
    };
    cert.value = cert.recompute_value();
    cert.reconstruction_error = cert.reconstruction_against(m);

    let dual_ok = min_eigenvalue >= -PSD_TOL;
    let lower = if dual_ok {
        dual_value.max(floor)
    } else {
        floor
    };
    let mut witness = cert.row_weights.clone();
    witness.extend_from_slice(&cert.col_weights);
    let mut bounds = NormBounds {
        lower,
        upper: cert.value.max(lower),
        method: Method::Gamma2FixedPoint,
        witness,
        certified: true,
        flags: Vec::new(),
    };
    if bounds.gap() > GAMMA2_GAP_TOL {
        bounds.push_flag(Flag::NotConverged { gap: bounds.gap() });
    }
    Ok(MultiplierReport {
        bounds,
        certificate: Some(cert),
        witness_a: None,
    })
}

/// One evaluation of the weighted matrix `D_sqrt(lam) M D_sqrt(mu)`.
#[derive(Clone)]
struct Stage {
    lam: Vec<f64>,
    mu: Vec<f64>,
    svd: crate::linalg::Svd,
    /// Nuclear norm of the weighted matrix.
    h: f64,
}

impl Stage {
    fn new(m: &Mat, lam: &[f64], mu: &[f64]) -> Self {
        let w = Mat::from_fn(m.rows(), m.cols(), |i, j| {
            sqrt(lam[i]) * m[(i, j)] * sqrt(mu[j])
        });
        let d = svd(&w);
        let h = d.nuclear();
        Stage {
            lam: lam.to_vec(),
            mu: mu.to_vec(),
            svd: d,
            h,
        }
    }

    fn rank(&self) -> usize {
        self.svd.s.iter().take_while(|s| **s > 0.0).count()
    }

    /// Directions kept in the dual certificate; numerically null ones are
    /// dropped so `U V^T` stays a contraction.
    fn dual_rank(&self) -> usize {
        let cut = self.svd.largest() * 1e-13;
        self.svd.s.iter().take_while(|s| **s > cut).count()
    }

    /// Diagonal of `U S U^T`.
    fn row_diag(&self) -> Vec<f64> {
        let k = self.rank();
        (0..self.lam.len())
            .map(|i| {
                (0..k)
                    .map(|t| self.svd.u[(i, t)] * self.svd.u[(i, t)] * self.svd.s[t])
                    .sum()
            })
            .collect()
    }

    fn col_diag(&self) -> Vec<f64> {
        let k = self.rank();
        (0..self.mu.len())
            .map(|j| {
                (0..k)
                    .map(|t| self.svd.v[(j, t)] * self.svd.v[(j, t)] * self.svd.s[t])
                    .sum()
            })
            .collect()
    }

    /// `sup_i |y_i| sup_j |x_j|` of the factorization built from this stage.
    fn upper(&self) -> f64 {
        let ry = self
            .row_diag()
            .iter()
            .zip(&self.lam)
            .map(|(a, l)| a / l)
            .fold(0.0, f64::max);
        let rx = self
            .col_diag()
            .iter()
            .zip(&self.mu)
            .map(|(b, u)| b / u)
            .fold(0.0, f64::max);
        sqrt(ry * rx)
    }
}

/// Empirical lower bound on `|M|_{(E,F)}` from sampled matrices `A`.
///
/// Candidates are the matrix unit at the largest entry of `M`, the sign
/// pattern of `M`, the all-ones matrix, and `trials` random rank-one and
/// sign matrices. Each ratio uses the lower bound of `|M * A|` over the
/// upper bound of `|A|`, so the result is a valid lower bound whenever the
/// upper bounds are certified. For `E = l_1` or `F = l_inf` the upper bound
/// is the exact value `sup |m_ij|`; otherwise it is infinite.
///
/// `bounds.witness` is the best `A` flattened row-major.
pub fn multiplier_lower_bound(
    m: &Mat,
    e: &SpaceSpec,
    f: &SpaceSpec,
    trials: usize,
    seed: u64,
) -> Result<MultiplierReport> {
    let (rows, cols) = m.shape();
    e.check_dim(cols)?;
    f.check_dim(rows)?;
    let floor = m.max_abs();
    if floor == 0.0 {
        return Ok(MultiplierReport {
            bounds: NormBounds::zero(rows * cols),
            certificate: None,
            witness_a: Some(Mat::unit(rows, cols, 0, 0)),
        });
    }
    let opts = OpnormOptions {
        budget: Budget::new(8, 150),
        seed,
        force_numeric: false,
    };
    let mut rng = crate::rng::seeded(seed, 0x6d75_6c74);
    let (bi, bj) = m.argmax_abs();
    let mut candidates = vec![
        Mat::unit(rows, cols, bi, bj),
        m.map(crate::math::signum),
        Mat::ones(rows, cols),
    ];
    for t in 0..trials {
        candidates.push(if t % 2 == 0 {
            Mat::outer(
                &crate::rng::gaussian_vec(&mut rng, rows),
                &crate::rng::gaussian_vec(&mut rng, cols),
            )
        } else {
            sign_mat(&mut rng, rows, cols)
        });
    }
    let mut best: Option<(f64, Mat, bool)> = None;
    for a in candidates {
        let prod = schur_product(m, &a)?;
        if a.is_zero() || prod.is_zero() {
            continue;
        }
        let top = opnorm_estimate_with(&prod, e, f, &opts)?;
        let bottom = opnorm_estimate_with(&a, e, f, &opts)?;
        if !(bottom.upper > 0.0) || !bottom.upper.is_finite() {
            continue;
        }
        let r = top.lower / bottom.upper;
        if best.as_ref().is_none_or(|(v, _, _)| r > *v) {
            best = Some((r, a, bottom.certified));
        }
    }
    let (lower, a, certified) = best.unwrap_or((0.0, Mat::unit(rows, cols, bi, bj), true));
    let extreme = e.is_lp(1.0) || f.lp_exponent().is_some_and(Exponent::is_infinite);
    let upper = if extreme {
        floor.max(lower)
    } else {
        f64::INFINITY
    };
    let bounds = NormBounds {
        lower,
        upper,
        method: Method::Sampled,
        witness: a.data().to_vec(),
        certified: certified && extreme,
        flags: Vec::new(),
    };
    Ok(MultiplierReport {
        bounds,
        certificate: None,
        witness_a: Some(a),
    })
}

fn sign_mat(rng: &mut rand_chacha::ChaCha8Rng, rows: usize, cols: usize) -> Mat {
    Mat::new(rows, cols, crate::rng::sign_vec(rng, rows * cols)).expect("nonempty finite")
}

/// Tolerance used by [`embedding_audit`] before a ratio counts as a violation.
pub const AUDIT_TOL: f64 = 1e-3;

/// Outcome of [`embedding_audit`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EmbeddingAudit {
    /// Sampled lower bound on `|M|_{(p,q)}`.
    pub lp_lower: f64,
    /// Sampled lower bound on `|M|_{(E,F)}`.
    pub ef_lower: f64,
    /// `lp_lower / ef_lower`.
    #[serde(with = "crate::serde_ext")]
    pub ratio: f64,
    /// Constant the ratio is compared against.
    pub constant: f64,
    /// Largest observed `p`-convexity constant of `E`.
    pub e_convexity: f64,
    /// Largest observed `q`-concavity constant of `F`.
    pub f_concavity: f64,
    pub violation: bool,
}

/// Compares sampled multiplier lower bounds for `(l_p, l_q)` and `(E, F)`
/// when `E` is `p`-convex and `F` is `q`-concave.
///
/// The multipliers of `(E, F)` embed continuously into those of `(p, q)`,
/// so on the same trial set the ratio must stay bounded. The constant is
/// taken as 1 (exact when `E = l_p`, `F = l_q`); the probed convexity
/// constants are reported alongside so a ratio above 1 can be judged.
#[allow(clippy::too_many_arguments)]
pub fn embedding_audit(
    m: &Mat,
    e: &SpaceSpec,
    f: &SpaceSpec,
    p: Exponent,
    q: Exponent,
    trials: usize,
    seed: u64,
) -> Result<EmbeddingAudit> {
    let lp = multiplier_lower_bound(
        m,
        &SpaceSpec::lp_exp(p),
        &SpaceSpec::lp_exp(q),
        trials,
        seed,
    )?;
    let ef = multiplier_lower_bound(m, e, f, trials, seed)?;
    let e_convexity = convexity_probe(e, p, Direction::Convex, 50, seed)?.lower_bound_on_constant;
    let f_concavity = convexity_probe(f, q, Direction::Concave, 50, seed)?.lower_bound_on_constant;
    let (lp_lower, ef_lower) = (lp.bounds.lower, ef.bounds.lower);
    let ratio = if ef_lower > 0.0 {
        lp_lower / ef_lower
    } else if lp_lower > 0.0 {
        f64::INFINITY
    } else {
        1.0
    };
    let constant = 1.0;
    Ok(EmbeddingAudit {
        lp_lower,
        ef_lower,
        ratio,
        constant,
        e_convexity,
        f_concavity,
        violation: ratio > constant * (1.0 + AUDIT_TOL),
    })
}
