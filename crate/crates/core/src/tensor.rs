//! Injective, projective and `gamma_2^*` norms of `u = sum u_ij e_i (x) e_j`
//! in `E (x) F`.
//!
//! Row indices live in `E`, column indices in `F`. The injective norm is the
//! operator norm of `u: F^x -> E`; the projective norm is dual to the
//! operator norm on `B(E, F^x)`.

use alloc::vec;
use alloc::vec::Vec;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::kothe::flaky_spread;
use crate::linalg::{invert, svd, Mat};
use crate::math::{abs, dot, ln, signum, sqrt};
use crate::opnorm::{opnorm_estimate_with, OpnormOptions, WIDE_RATIO};
use crate::seqspace::{kothe_dual_norm_with, norm, norm_grad, DualOptions, SpaceSpec};
use crate::{Budget, Error, Flag, Method, NormBounds, Result};

/// A tensor `u` with its coefficient matrix and the two factor spaces.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TensorElem {
    #[serde(rename = "E")]
    pub e: SpaceSpec,
    #[serde(rename = "F")]
    pub f: SpaceSpec,
    pub coeffs: Mat,
}

impl TensorElem {
    pub fn new(coeffs: Mat, e: SpaceSpec, f: SpaceSpec) -> Result<Self> {
        e.check_dim(coeffs.rows())?;
        f.check_dim(coeffs.cols())?;
        Ok(TensorElem { e, f, coeffs })
    }

    fn with_coeffs(&self, coeffs: Mat) -> TensorElem {
        TensorElem {
            e: self.e.clone(),
            f: self.f.clone(),
            coeffs,
        }
    }
}

fn options(budget: Budget, seed: u64) -> Result<OpnormOptions> {
    if budget.starts == 0 || budget.iters == 0 {
        return Err(Error::InvalidArgument("budget must be positive".into()));
    }
    Ok(OpnormOptions {
        budget,
        seed,
        force_numeric: false,
    })
}

/// `eps(u) = sup { |sum u_ij x_i y_j| : |x|_{E^x} <= 1, |y|_{F^x} <= 1 }`.
///
/// The lower bound comes from alternating steps (for fixed `y` the best `x`
/// is the norming functional of `Uy` in `E`, and symmetrically), started
/// from the operator-norm witness and from seeded vectors. Each pair is
/// divided by the upper bounds of its dual norms. The upper bound is that of
/// `|U|_{F^x, E}`, exact for `l_2 (x) l_2` and the other routed cases.
///
/// The witness is `(x, y)` concatenated.
pub fn injective_norm(u: &TensorElem, budget: Budget, seed: u64) -> Result<NormBounds> {
    let opts = options(budget, seed)?;
    let a = &u.coeffs;
    let (m, n) = a.shape();
    u.e.check_dim(m)?;
    u.f.check_dim(n)?;
    if a.is_zero() {
        return Ok(NormBounds::zero(m + n));
    }
    let f_dual = u.f.dual();
    let op = opnorm_estimate_with(a, &f_dual, &u.e, &opts)?;
    let d = svd(a);
    let mut rng = crate::rng::seeded(seed, 0x696e_6a65);
    let mut starts = vec![op.witness.clone(), d.v.col(0)];
    if m.min(n) > 1 {
        starts.push(d.v.col(1));
    }
    while starts.len() < budget.starts.min(8).max(starts.len()) {
        starts.push(crate::rng::gaussian_vec(&mut rng, n));
    }
    let dual_opts = DualOptions {
        budget: Budget::DUAL,
        seed,
        force_numeric: false,
    };
    let mut values = Vec::new();
    let mut best: Option<(f64, Vec<f64>, Vec<f64>)> = None;
    for y0 in starts {
        let Some((x, y)) = alternate(a, &u.e, &u.f, y0, budget.iters)? else {
            continue;
        };
        let dx = kothe_dual_norm_with(&u.e, &x, &dual_opts)?.upper;
        let dy = kothe_dual_norm_with(&u.f, &y, &dual_opts)?.upper;
        if !(dx > 0.0 && dy > 0.0) {
            continue;
        }
        let v = abs(dot(&x, &a.apply_unchecked(&y))) / (dx * dy);
        values.push(v);
        if best.as_ref().is_none_or(|(b, _, _)| v > *b) {
            let x = x.iter().map(|t| t / dx).collect();
            let y = y.iter().map(|t| t / dy).collect();
            best = Some((v, x, y));
        }
    }
    let Some((lower, x, y)) = best else {
        return Ok(op);
    };
    let mut witness = x;
    witness.extend(y);
    let exact = op.is_exact() && lower >= op.lower * (1.0 - 1e-12);
    let mut b = NormBounds {
        lower: if exact { op.lower } else { lower },
        upper: op.upper.max(lower),
        method: if exact {
            op.method
        } else {
            Method::AlternatingPower
        },
        witness,
        certified: op.certified,
        flags: Vec::new(),
    };
    if let Some(spread) = flaky_spread(&mut values) {
        b.push_flag(Flag::FlakyLandscape { spread });
    }
    Ok(b)
}

/// Alternating norming steps from `y`; returns the last pair.
fn alternate(
    a: &Mat,
    e: &SpaceSpec,
    f: &SpaceSpec,
    mut y: Vec<f64>,
    iters: usize,
) -> Result<Option<(Vec<f64>, Vec<f64>)>> {
    let mut x = vec![0.0; a.rows()];
    let mut last = 0.0;
    for _ in 0..iters {
        let (v, gx) = norm_grad(e, &a.apply_unchecked(&y))?;
        if v == 0.0 {
            return Ok(None);
        }
        x = gx;
        let (w, gy) = norm_grad(f, &a.apply_transpose_unchecked(&x))?;
        if w == 0.0 {
            return Ok(None);
        }
        y = gy;
        if w <= last * (1.0 + 1e-13) {
            break;
        }
        last = w;
    }
    Ok(Some((x, y)))
}

/// Bounds on `pi(u) = inf sum |x_k|_E |y_k|_F` over decompositions of `u`.
///
/// Upper: the best of the singular value decomposition, the row
/// decomposition `sum e_i (x) row_i` and the column decomposition. Lower:
/// `|<u, B>| / |B^T|_{E, F^x}` (upper bound of the denominator) over `B`
/// in `{u, sign(u), polar factor of u, matrix unit}` and seeded sign
/// matrices. The witness is the best `B` flattened row-major.
pub fn projective_norm_bounds(u: &TensorElem, budget: Budget, seed: u64) -> Result<NormBounds> {
    let opts = options(budget, seed)?;
    let a = &u.coeffs;
    let (m, n) = a.shape();
    u.e.check_dim(m)?;
    u.f.check_dim(n)?;
    if a.is_zero() {
        return Ok(NormBounds::zero(m * n));
    }
    let d = svd(a);

    let mut by_svd = 0.0;
    for (k, s) in d.s.iter().enumerate() {
        if *s > 0.0 {
            by_svd += s * norm(&u.e, &d.u.col(k))? * norm(&u.f, &d.v.col(k))?;
        }
    }
    let mut by_rows = 0.0;
    for i in 0..m {
        let r = norm(&u.f, a.row(i))?;
        if r > 0.0 {
            by_rows += r * norm(&u.e, &unit(m, i))?;
        }
    }
    let mut by_cols = 0.0;
    for j in 0..n {
        let c = norm(&u.e, &a.col(j))?;
        if c > 0.0 {
            by_cols += c * norm(&u.f, &unit(n, j))?;
        }
    }
    let upper = by_svd.min(by_rows).min(by_cols);

    let k = d.s.iter().take_while(|s| **s > 0.0).count();
    let polar = Mat::from_fn(m, n, |i, j| (0..k).map(|t| d.u[(i, t)] * d.v[(j, t)]).sum());
    let (bi, bj) = a.argmax_abs();
    let mut cands = vec![
        a.clone(),
        a.map(signum),
        polar,
        Mat::unit(m, n, bi, bj).scale(signum(a[(bi, bj)])),
    ];
    let mut rng = crate::rng::seeded(seed, 0x7072_6f6a);
    for _ in 0..budget.starts.min(4) {
        cands.push(Mat::new(m, n, crate::rng::sign_vec(&mut rng, m * n))?);
    }
    let f_dual = u.f.dual();
    let mut best: Option<(f64, Mat)> = None;
    for b in cands {
        let pair = abs(a.frobenius_dot(&b));
        if pair == 0.0 {
            continue;
        }
        let op = opnorm_estimate_with(&b.transpose(), &u.e, &f_dual, &opts)?;
        if !(op.upper > 0.0) || !op.upper.is_finite() {
            continue;
        }
        let v = pair / op.upper;
        if best.as_ref().is_none_or(|(bv, _)| v > *bv) {
            best = Some((v, b));
        }
    }
    let (lower, b) = best.unwrap_or((0.0, a.clone()));
    let mut out = NormBounds {
        lower: lower.min(upper),
        upper,
        method: Method::Decomposition,
        witness: b.data().to_vec(),
        certified: u.e.is_direct() && u.f.is_direct(),
        flags: Vec::new(),
    };
    if out.lower > 0.0 && out.upper / out.lower > WIDE_RATIO {
        out.push_flag(Flag::WideInterval {
            ratio: out.upper / out.lower,
        });
    }
    Ok(out)
}

fn unit(n: usize, i: usize) -> Vec<f64> {
    let mut e = vec![0.0; n];
    e[i] = 1.0;
    e
}

/// Upper bound on `gamma_2^*(u) = inf (sum |x_k|_E^2)^(1/2) (sum |xi_k|_F^2)^(1/2)`
/// over `u = sum x_k (x) xi_k`.
///
/// Decompositions are written `U = (X R)(Xi R^-T)^T` from the singular value
/// split `X = U_s S^(1/2)`, `Xi = V_s S^(1/2)`, and the invertible `R` is
/// improved by gradient descent on the log of the product, from the
/// identity and from seeded perturbations of it.
pub fn gamma2_star_upper(u: &TensorElem, budget: Budget, seed: u64) -> Result<f64> {
    options(budget, seed)?;
    let a = &u.coeffs;
    let (m, n) = a.shape();
    u.e.check_dim(m)?;
    u.f.check_dim(n)?;
    if a.is_zero() {
        return Ok(0.0);
    }
    let d = svd(a);
    let r = d.s.iter().take_while(|s| **s > 0.0).count();
    let x = Mat::from_fn(m, r, |i, k| d.u[(i, k)] * sqrt(d.s[k]));
    let xi = Mat::from_fn(n, r, |j, k| d.v[(j, k)] * sqrt(d.s[k]));
    let mut rng = crate::rng::seeded(seed, 0x6732_7374);
    let mut best = f64::INFINITY;
    for s in 0..budget.starts.min(4) {
        let start = if s == 0 {
            Mat::identity(r)
        } else {
            let noise = crate::rng::uniform_vec(&mut rng, r * r, -0.3, 0.3);
            Mat::from_fn(r, r, |i, j| {
                noise[i * r + j] + if i == j { 1.0 } else { 0.0 }
            })
        };
        if let Some(v) = descend(&x, &xi, &u.e, &u.f, start, budget.iters)? {
            best = best.min(v);
        }
    }
    Ok(best)
}

/// Returns `(ln value, gradient in R)` of the log objective at `R`.
fn log_objective(
    x: &Mat,
    xi: &Mat,
    e: &SpaceSpec,
    f: &SpaceSpec,
    r: &Mat,
) -> Result<Option<(f64, Mat)>> {
    let Some(rinv) = invert(r) else {
        return Ok(None);
    };
    let s = rinv.transpose();
    let (la, ga) = side(&x.matmul(r)?, x, e)?;
    let (lb, gb) = side(&xi.matmul(&s)?, xi, f)?;
    // d/dR of a function of S = R^-T is -S G^T S
    let corr = s.matmul(&gb.transpose())?.matmul(&s)?;
    let g = ga.zip_map(&corr, |p, q| p - q)?;
    Ok(Some((la + lb, g)))
}

/// `0.5 ln sum_k |Y e_k|^2` with `Y = B R`, and its gradient in `R`.
fn side(y: &Mat, base: &Mat, s: &SpaceSpec) -> Result<(f64, Mat)> {
    let r = y.cols();
    let mut total = 0.0;
    let mut g = Mat::zeros(base.rows(), r);
    for k in 0..r {
        let (v, gk) = norm_grad(s, &y.col(k))?;
        total += v * v;
        for i in 0..base.rows() {
            g[(i, k)] = v * gk[i];
        }
    }
    if total == 0.0 {
        return Ok((f64::NEG_INFINITY, Mat::zeros(base.cols(), r)));
    }
    let grad = base.transpose().matmul(&g)?.scale(1.0 / total);
    Ok((0.5 * ln(total), grad))
}

fn descend(
    x: &Mat,
    xi: &Mat,
    e: &SpaceSpec,
    f: &SpaceSpec,
    mut r: Mat,
    iters: usize,
) -> Result<Option<f64>> {
    let Some((mut val, mut g)) = log_objective(x, xi, e, f, &r)? else {
        return Ok(None);
    };
    let mut eta = 0.1;
    for _ in 0..iters {
        let gn = sqrt(g.frobenius_dot(&g));
        if gn == 0.0 {
            break;
        }
        let rn = sqrt(r.frobenius_dot(&r));
        let trial = r.zip_map(&g, |a, b| a - eta * rn * b / gn)?;
        match log_objective(x, xi, e, f, &trial)? {
            Some((v, gt)) if v < val => {
                r = trial;
                val = v;
                g = gt;
                eta = (eta * 2.0).min(1.0);
            }
            _ => {
                eta *= 0.5;
                if eta < 1e-10 {
                    break;
                }
            }
        }
    }
    Ok(Some(crate::math::exp(val)))
}

/// Which tensor norm [`matrix_norm_axiom_audit`] checks.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TensorNorm {
    Injective,
    Projective,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Axiom {
    Homogeneity,
    Triangle,
    UnitTensor,
    CornerContraction,
    SignConjugation,
    Permutation,
}

/// Worst relative discrepancy seen for one axiom.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AxiomCheck {
    pub axiom: Axiom,
    #[serde(with = "crate::serde_ext")]
    pub worst: f64,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AxiomAudit {
    pub norm: TensorNorm,
    pub trials: usize,
    pub checks: Vec<AxiomCheck>,
    pub pass: bool,
}

/// Relative slack of every axiom comparison.
pub const AXIOM_TOL: f64 = 1e-6;

/// Checks the matrix-norm axioms on seeded random tensors of size at most 6.
///
/// Every comparison is made between intervals: equalities require the two
/// intervals to overlap and inequalities require the lower bound of the
/// smaller side to stay below the upper bound of the larger one, each with
/// relative slack [`AXIOM_TOL`]. For exact norms this is a comparison of
/// values; for bound-valued norms it detects certified contradictions.
/// Sign unconditionality is tested as conjugation `u_ij -> s_i t_j u_ij`.
pub fn matrix_norm_axiom_audit(
    which: TensorNorm,
    e: &SpaceSpec,
    f: &SpaceSpec,
    trials: usize,
    seed: u64,
) -> Result<AxiomAudit> {
    let budget = Budget::new(8, 150);
    let eval = |u: &TensorElem| -> Result<NormBounds> {
        match which {
            TensorNorm::Injective => injective_norm(u, budget, seed),
            TensorNorm::Projective => projective_norm_bounds(u, budget, seed),
        }
    };
    let dmax_e = e.max_dim().unwrap_or(6).clamp(1, 6);
    let dmax_f = f.max_dim().unwrap_or(6).clamp(1, 6);
    let mut rng = crate::rng::seeded(seed, 0x6178_696f);
    let mut worst = [0.0f64; 6];
    for _ in 0..trials {
        let m = rng.random_range(1..=dmax_e);
        let n = rng.random_range(1..=dmax_f);
        let u = TensorElem::new(
            Mat::new(m, n, crate::rng::gaussian_vec(&mut rng, m * n))?,
            e.clone(),
            f.clone(),
        )?;
        let v = u.with_coeffs(Mat::new(m, n, crate::rng::gaussian_vec(&mut rng, m * n))?);
        let bu = eval(&u)?;
        let bv = eval(&v)?;

        let c: f64 = rng.random_range(-3.0..3.0);
        let bc = eval(&u.with_coeffs(u.coeffs.scale(c)))?;
        let scaled = scale_bounds(&bu, abs(c));
        worst[0] = worst[0].max(mismatch(&scaled, &bc));

        let sum = u.with_coeffs(u.coeffs.zip_map(&v.coeffs, |p, q| p + q)?);
        let bs = eval(&sum)?;
        worst[1] = worst[1].max(excess(bs.lower, bu.upper + bv.upper));

        let (i, j) = (rng.random_range(0..m), rng.random_range(0..n));
        let bunit = eval(&u.with_coeffs(Mat::unit(m, n, i, j)))?;
        worst[2] = worst[2].max(mismatch(
            &bunit,
            &NormBounds::exact(1.0, Method::Zero, vec![]),
        ));

        let (pn, pm) = (rng.random_range(1..=m), rng.random_range(1..=n));
        let corner = Mat::from_fn(m, n, |a, b| {
            if a < pn && b < pm {
                u.coeffs[(a, b)]
            } else {
                0.0
            }
        });
        if !corner.is_zero() {
            let bp = eval(&u.with_coeffs(corner))?;
            worst[3] = worst[3].max(excess(bp.lower, bu.upper));
        }

        let s = crate::rng::sign_vec(&mut rng, m);
        let t = crate::rng::sign_vec(&mut rng, n);
        let conj = Mat::from_fn(m, n, |a, b| s[a] * t[b] * u.coeffs[(a, b)]);
        worst[4] = worst[4].max(mismatch(&bu, &eval(&u.with_coeffs(conj))?));

        let rp = permutation(&mut rng, m);
        let cp = permutation(&mut rng, n);
        worst[5] = worst[5].max(mismatch(
            &bu,
            &eval(&u.with_coeffs(u.coeffs.permuted(&rp, &cp)))?,
        ));
    }
    let axioms = [
        Axiom::Homogeneity,
        Axiom::Triangle,
        Axiom::UnitTensor,
        Axiom::CornerContraction,
        Axiom::SignConjugation,
        Axiom::Permutation,
    ];
    let checks: Vec<AxiomCheck> = axioms
        .iter()
        .zip(worst)
        .map(|(a, w)| AxiomCheck {
            axiom: *a,
            worst: w,
            pass: w <= AXIOM_TOL,
        })
        .collect();
    let pass = checks.iter().all(|c| c.pass);
    Ok(AxiomAudit {
        norm: which,
        trials,
        checks,
        pass,
    })
}

fn scale_bounds(b: &NormBounds, c: f64) -> NormBounds {
    let mut out = b.clone();
    out.lower *= c;
    out.upper *= c;
    out
}

/// Relative distance between two intervals (0 when they overlap).
fn mismatch(a: &NormBounds, b: &NormBounds) -> f64 {
    let scale = a.upper.max(b.upper).max(1e-300);
    ((a.lower - b.upper).max(b.lower - a.upper).max(0.0)) / scale
}

/// Relative amount by which `small` exceeds `big`.
fn excess(small: f64, big: f64) -> f64 {
    ((small - big) / big.max(1e-300)).max(0.0)
}

fn permutation(rng: &mut rand_chacha::ChaCha8Rng, n: usize) -> Vec<usize> {
    let mut p: Vec<usize> = (0..n).collect();
    for i in (1..n).rev() {
        let j = rng.random_range(0..=i);
        p.swap(i, j);
    }
    p
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::schur::{gamma2_norm, GAMMA2_BUDGET};
    use approx::assert_relative_eq;

    fn t(a: Mat, e: SpaceSpec, f: SpaceSpec) -> TensorElem {
        TensorElem::new(a, e, f).unwrap()
    }

    fn l2() -> SpaceSpec {
        SpaceSpec::l2()
    }

    const B: Budget = Budget::new(8, 200);

    #[test]
    fn injective_examples() {
        let b = injective_norm(&t(Mat::unit(2, 2, 0, 0), l2(), l2()), B, 0).unwrap();
        assert_relative_eq!(b.lower, 1.0, epsilon = 1e-12);
        let b = injective_norm(&t(Mat::identity(2), l2(), l2()), B, 0).unwrap();
        assert_relative_eq!(b.lower, 1.0, epsilon = 1e-12);
        assert_relative_eq!(b.upper, 1.0, epsilon = 1e-12);
        let b = injective_norm(&t(Mat::zeros(2, 3), l2(), l2()), B, 0).unwrap();
        assert_eq!(b.upper, 0.0);
    }

    #[test]
    fn projective_examples() {
        let lp3 = SpaceSpec::lp(3.0).unwrap();
        let b = projective_norm_bounds(
            &t(Mat::unit(2, 2, 0, 0), lp3.clone(), SpaceSpec::l1()),
            B,
            0,
        )
        .unwrap();
        assert_relative_eq!(b.lower, 1.0, epsilon = 1e-9);
        assert_relative_eq!(b.upper, 1.0, epsilon = 1e-12);
        let b = projective_norm_bounds(&t(Mat::identity(2), l2(), l2()), B, 0).unwrap();
        assert_relative_eq!(b.lower, 2.0, epsilon = 1e-9);
        assert_relative_eq!(b.upper, 2.0, epsilon = 1e-9);
        let b = projective_norm_bounds(&t(Mat::zeros(2, 2), lp3, l2()), B, 0).unwrap();
        assert_eq!(b.upper, 0.0);
    }

    #[test]
    fn hilbert_oracles_and_ordering() {
        let a =
            Mat::from_rows(&[alloc::vec![1.0, -0.5, 2.0], alloc::vec![0.3, 1.2, -1.0]]).unwrap();
        let d = svd(&a);
        let u = t(a, l2(), l2());
        let eps = injective_norm(&u, B, 1).unwrap();
        let pi = projective_norm_bounds(&u, B, 1).unwrap();
        assert_relative_eq!(eps.lower, d.largest(), max_relative = 1e-9);
        assert_relative_eq!(pi.lower, d.nuclear(), max_relative = 1e-9);
        assert_relative_eq!(pi.upper, d.nuclear(), max_relative = 1e-9);
        assert!(eps.lower <= pi.upper + 1e-6);
    }

    #[test]
    fn gamma2_star_examples() {
        let l1 = SpaceSpec::l1();
        let v = gamma2_star_upper(&t(Mat::unit(2, 2, 0, 0), l1.clone(), l1.clone()), B, 0).unwrap();
        assert!(v <= 1.0 + 1e-12);
        let id = Mat::identity(2);
        let v = gamma2_star_upper(&t(id.clone(), l1.clone(), l1.clone()), B, 0).unwrap();
        assert!(v >= 1.0);
        // pairing floor |<u, M>| <= gamma2*(u) gamma2(M)
        let g = gamma2_norm(&id, GAMMA2_BUDGET).unwrap().bounds.upper;
        assert!(id.frobenius_dot(&id) <= v * g + 1e-6);
        assert_eq!(
            gamma2_star_upper(&t(Mat::zeros(2, 2), l1.clone(), l1), B, 0).unwrap(),
            0.0
        );
    }

    #[test]
    fn injective_is_invariant_under_conjugation_and_permutation() {
        let a = Mat::from_rows(&[
            alloc::vec![1.0, -0.5, 2.0],
            alloc::vec![0.3, 1.2, -1.0],
            alloc::vec![0.0, 0.7, 0.4],
        ])
        .unwrap();
        let base = injective_norm(&t(a.clone(), l2(), l2()), B, 0)
            .unwrap()
            .lower;
        let s = [1.0, -1.0, 1.0];
        let tt = [-1.0, -1.0, 1.0];
        let conj = Mat::from_fn(3, 3, |i, j| s[i] * tt[j] * a[(i, j)]);
        let v = injective_norm(&t(conj, l2(), l2()), B, 0).unwrap().lower;
        assert_relative_eq!(v, base, max_relative = 1e-9);
        let p = injective_norm(&t(a.permuted(&[2, 0, 1], &[1, 2, 0]), l2(), l2()), B, 0)
            .unwrap()
            .lower;
        assert_relative_eq!(p, base, max_relative = 1e-6);
        let b = injective_norm(&t(Mat::unit(3, 3, 1, 2), l2(), l2()), B, 0).unwrap();
        assert_relative_eq!(b.lower, 1.0, epsilon = 1e-12);
    }

    #[test]
    fn non_hilbert_injective_brackets() {
        let a = Mat::from_rows(&[alloc::vec![1.0, -0.5], alloc::vec![0.3, 1.2]]).unwrap();
        let u = t(a, SpaceSpec::lp(3.0).unwrap(), SpaceSpec::lp(1.5).unwrap());
        let b = injective_norm(&u, B, 0).unwrap();
        assert!(b.lower > 0.0 && b.lower <= b.upper * (1.0 + 1e-12));
        let pi = projective_norm_bounds(&u, B, 0).unwrap();
        assert!(b.lower <= pi.upper + 1e-6);
        assert!(pi.lower <= pi.upper);
    }

    #[test]
    fn axiom_audit_hilbert() {
        let a = matrix_norm_axiom_audit(TensorNorm::Injective, &l2(), &l2(), 6, 0).unwrap();
        assert!(a.pass, "{a:?}");
        let a = matrix_norm_axiom_audit(TensorNorm::Projective, &l2(), &l2(), 4, 0).unwrap();
        assert!(a.pass, "{a:?}");
    }
}
