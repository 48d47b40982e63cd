//! Generalized Köthe duals `E^F` and constructive factorizations
//! `E * E^x = l_1`, `E * E^{l_p} = l_p`.

use alloc::string::ToString;
use alloc::vec;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use crate::ascent::maximize_ratio;
use crate::error::check_finite;
use crate::math::{abs, ln, powf, signum, sqrt, sum_abs};
use crate::seqspace::{self, kothe_dual_norm_with, norm, norm_grad, DualOptions, SpaceSpec};
use crate::{Budget, Error, Exponent, Flag, Method, NormBounds, Result};

/// Relative spread among the best quarter of starts that marks a flaky landscape.
pub const FLAKY_SPREAD: f64 = 0.05;

/// Input of [`generalized_dual_norm`]: bounds on `|x|_{E^F} = sup_{|y|_E <= 1} |x * y|_F`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DualNormQuery {
    pub e: SpaceSpec,
    pub f: SpaceSpec,
    pub x: Vec<f64>,
    pub budget: Budget,
    pub seed: u64,
    /// Skip closed forms.
    #[serde(default)]
    pub force_numeric: bool,
}

impl DualNormQuery {
    pub fn new(e: SpaceSpec, f: SpaceSpec, x: Vec<f64>) -> Self {
        DualNormQuery {
            e,
            f,
            x,
            budget: Budget::DUAL,
            seed: 0,
            force_numeric: false,
        }
    }
}

/// A pair `y1 * y2 = target` with the product of their norms.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FactorizationCert {
    pub y1: Vec<f64>,
    pub y2: Vec<f64>,
    pub target: Vec<f64>,
    pub product_error: f64,
    pub norm_product: f64,
    pub reference_norm: f64,
}

impl FactorizationCert {
    /// `norm_product / reference_norm`.
    pub fn ratio(&self) -> f64 {
        if self.reference_norm == 0.0 {
            1.0
        } else {
            self.norm_product / self.reference_norm
        }
    }
}

/// The exponent `q` with `l_p^{l_r} = l_q`: `1/q = 1/r - 1/p` for `r <= p`, else infinity.
pub fn closed_form_dual_exponent(p: Exponent, r: Exponent) -> Exponent {
    if p < r {
        return Exponent::INFINITY;
    }
    let recip = (r.recip() - p.recip()).max(0.0);
    Exponent::from_recip(recip).unwrap_or(Exponent::INFINITY)
}

/// Bounds on `|x|_{E^F}`.
///
/// The witness is a maximizing `y` with `|y|_E = 1`. Closed forms cover
/// `E = l_inf` (`E^F = F`), `E = l_p, F = l_r` and `F = l_1` (`E^{l_1} = E^x`);
/// everything else is a multistart ascent whose upper bound equals the best
/// value found and is not certified.
pub fn generalized_dual_norm(q: &DualNormQuery) -> Result<NormBounds> {
    let x = &q.x;
    check_finite(x)?;
    q.e.check_dim(x.len())?;
    q.f.check_dim(x.len())?;
    if q.budget.starts == 0 || q.budget.iters == 0 {
        return Err(Error::InvalidArgument(
            "budget must be positive".to_string(),
        ));
    }
    if crate::math::is_zero(x) {
        return Ok(NormBounds::zero(x.len()));
    }
    if !q.force_numeric {
        let pe = q.e.lp_exponent();
        if pe.is_some_and(Exponent::is_infinite) {
            let v = norm(&q.f, x)?;
            let mut b = NormBounds::exact(v, Method::ClosedForm, vec![1.0; x.len()]);
            b.certified = q.f.is_direct();
            return Ok(b);
        }
        if let (Some(p), Some(r)) = (pe, q.f.lp_exponent()) {
            return Ok(lp_closed_form(p, r, x));
        }
        if q.f.is_lp(1.0) {
            let opts = DualOptions {
                budget: q.budget,
                seed: q.seed,
                force_numeric: false,
            };
            let mut b = kothe_dual_norm_with(&q.e, x, &opts)?;
            for w in b.witness.iter_mut() {
                *w = abs(*w);
            }
            return Ok(b);
        }
    }
    numeric_generalized_dual(q)
}

fn lp_closed_form(p: Exponent, r: Exponent, x: &[f64]) -> NormBounds {
    let q = closed_form_dual_exponent(p, r);
    let value = seqspace_lp(q, x);
    let n = x.len();
    let y = if q.is_infinite() {
        let k = seqspace::rearrangement_order(x)[0];
        let mut e = vec![0.0; n];
        e[k] = 1.0;
        e
    } else {
        // Hölder equality: |y|^p proportional to |x|^q
        let t = q.value() / p.value();
        let raw: Vec<f64> = x.iter().map(|v| powf(abs(*v), t)).collect();
        let s = seqspace_lp(p, &raw);
        raw.into_iter().map(|v| v / s).collect()
    };
    NormBounds::exact(value, Method::ClosedForm, y)
}

fn seqspace_lp(p: Exponent, x: &[f64]) -> f64 {
    norm(&SpaceSpec::lp_exp(p), x).unwrap_or(f64::NAN)
}

/// Multistart ascent of `y -> |x * y|_F / |y|_E` over `y >= 0` supported
/// where `x` is. Both reductions are safe: the objective depends on `|y|`
/// only through the entrywise monotone `|x * y|`, and mass of `y` off the
/// support of `x` only increases `|y|_E`.
fn numeric_generalized_dual(q: &DualNormQuery) -> Result<NormBounds> {
    let x = &q.x;
    let support: Vec<usize> = (0..x.len()).filter(|&i| x[i] != 0.0).collect();
    let xs: Vec<f64> = support.iter().map(|&i| abs(x[i])).collect();
    let mut num = |y: &[f64]| -> Result<(f64, Vec<f64>)> {
        let xy: Vec<f64> = xs.iter().zip(y).map(|(a, b)| a * b).collect();
        let (v, g) = norm_grad(&q.f, &xy)?;
        Ok((v, g.iter().zip(&xs).map(|(gi, xi)| gi * xi).collect()))
    };
    let mut den = |y: &[f64]| norm_grad(&q.e, y);
    let mut rng = crate::rng::seeded(q.seed, 0x6764_7561);
    let order = seqspace::rearrangement_order(&xs);
    let mut values = Vec::with_capacity(q.budget.starts);
    let mut best: Option<(f64, Vec<f64>)> = None;
    for idx in 0..q.budget.starts {
        let start = gen_dual_start(&xs, &order, idx, &mut rng);
        let Some(run) = maximize_ratio(&mut num, &mut den, &start, true, q.budget.iters)? else {
            continue;
        };
        values.push(run.value);
        if best.as_ref().is_none_or(|(v, _)| run.value > *v) {
            best = Some((run.value, run.x));
        }
    }
    let Some((_, ys)) = best else {
        return Ok(NormBounds::zero(x.len()));
    };
    let ny = norm(&q.e, &ys)?;
    let xy: Vec<f64> = xs.iter().zip(&ys).map(|(a, b)| a * b).collect();
    let lower = norm(&q.f, &xy)? / ny;
    let mut witness = vec![0.0; x.len()];
    for (r, &i) in support.iter().enumerate() {
        witness[i] = ys[r] / ny;
    }
    let mut b = NormBounds {
        lower,
        upper: lower,
        method: Method::Multistart,
        witness,
        certified: false,
        flags: Vec::new(),
    };
    if let Some(spread) = flaky_spread(&mut values) {
        b.push_flag(Flag::FlakyLandscape { spread });
    }
    Ok(b)
}

fn gen_dual_start(
    xs: &[f64],
    order: &[usize],
    idx: usize,
    rng: &mut rand_chacha::ChaCha8Rng,
) -> Vec<f64> {
    let k = xs.len();
    match idx {
        0 => vec![1.0; k],
        1 => xs.to_vec(),
        2 => xs.iter().map(|v| sqrt(*v)).collect(),
        3 => xs.iter().map(|v| v * v).collect(),
        i if i - 4 < k.min(4) => {
            let mut e = vec![0.0; k];
            e[order[i - 4]] = 1.0;
            e
        }
        _ => crate::rng::uniform_vec(rng, k, 0.0, 1.0),
    }
}

/// Flags a landscape where only one start reached the best value while the
/// best quarter of starts still spreads by more than [`FLAKY_SPREAD`].
pub(crate) fn flaky_spread(values: &mut [f64]) -> Option<f64> {
    if values.len() < 4 {
        return None;
    }
    values.sort_by(|a, b| b.partial_cmp(a).unwrap_or(core::cmp::Ordering::Equal));
    let best = values[0];
    if best <= 0.0 {
        return None;
    }
    let hits = values.iter().filter(|v| **v >= best * (1.0 - 1e-6)).count();
    let quart = values[(values.len() / 4).max(1)];
    let spread = (best - quart) / best;
    (hits == 1 && spread > FLAKY_SPREAD).then_some(spread)
}

/// Splits `u` as `y1 * y2` with `y1` in `E`, `y2` in `E^x` and
/// `|y1|_E |y2|_{E^x} <= (1 + eps) |u|_1`.
///
/// `y1` maximizes `sum |u_i| log y_i` on the unit ball of `E` (seeded by the
/// best power split `|u|^theta`); then `y2 = |u| / y1` attains the Hölder
/// bound. Signs go to `y1`, and the pair is rescaled to equal norms.
pub fn lozanovskii_factorize(
    e: &SpaceSpec,
    u: &[f64],
    eps: f64,
    seed: u64,
) -> Result<FactorizationCert> {
    check_factor_input(e, u, eps)?;
    let opts = DualOptions {
        budget: Budget::DUAL,
        seed,
        force_numeric: false,
    };
    let dual_norm = |y: &[f64]| -> Result<f64> { Ok(kothe_dual_norm_with(e, y, &opts)?.upper) };
    let weights: Vec<f64> = u.iter().map(|v| abs(*v)).collect();
    let reference = sum_abs(u);
    factorize(e, u, &weights, reference, eps, &dual_norm)
}

/// Splits `z` as `x1 * x2` with `x1` in `E`, `x2` in `E^{l_p}` and
/// `|x1|_E |x2|_{E^{l_p}} <= (1 + eps) |z|_p`.
///
/// This is the Lozanovskii split of `|z|^p` in the `p`-concavification of
/// `E`, pulled back by `p`-th roots: `x1` maximizes `sum |z_i|^p log x_i` on
/// the unit ball of `E` and `x2 = |z| / x1`. Requires `E` to be `p`-convex;
/// for `E` outside `l_p` the `E^{l_p}` norm is a multistart lower bound.
pub fn lp_factorize(
    e: &SpaceSpec,
    p: Exponent,
    z: &[f64],
    eps: f64,
    seed: u64,
) -> Result<FactorizationCert> {
    check_factor_input(e, z, eps)?;
    if p.is_infinite() {
        return Err(Error::InvalidArgument("p must be finite".to_string()));
    }
    let lp = SpaceSpec::lp_exp(p);
    let gen_norm = |y: &[f64]| -> Result<f64> {
        let mut q = DualNormQuery::new(e.clone(), lp.clone(), y.to_vec());
        q.seed = seed;
        Ok(generalized_dual_norm(&q)?.upper)
    };
    let weights: Vec<f64> = z.iter().map(|v| powf(abs(*v), p.value())).collect();
    let reference = norm(&lp, z)?;
    factorize(e, z, &weights, reference, eps, &gen_norm)
}

fn check_factor_input(e: &SpaceSpec, u: &[f64], eps: f64) -> Result<()> {
    check_finite(u)?;
    e.check_dim(u.len())?;
    if crate::math::is_zero(u) {
        return Err(Error::InvalidArgument(
            "cannot factor the zero vector".to_string(),
        ));
    }
    if !(eps > 0.0 && eps <= 0.5) {
        return Err(Error::InvalidArgument(
            "eps must lie in (0, 0.5]".to_string(),
        ));
    }
    Ok(())
}

fn factorize(
    e: &SpaceSpec,
    target: &[f64],
    weights: &[f64],
    reference: f64,
    eps: f64,
    second_norm: &dyn Fn(&[f64]) -> Result<f64>,
) -> Result<FactorizationCert> {
    let support: Vec<usize> = (0..target.len()).filter(|&i| target[i] != 0.0).collect();
    let t: Vec<f64> = support.iter().map(|&i| abs(target[i])).collect();
    let a: Vec<f64> = support.iter().map(|&i| weights[i]).collect();
    let a_sum: f64 = a.iter().sum();
    let a: Vec<f64> = a.iter().map(|v| v / a_sum).collect();

    let expand = |ys: &[f64]| -> Vec<f64> {
        let mut full = vec![0.0; target.len()];
        for (r, &i) in support.iter().enumerate() {
            full[i] = ys[r];
        }
        full
    };
    let product = |y1s: &[f64]| -> Result<f64> {
        let y2s: Vec<f64> = t.iter().zip(y1s).map(|(ti, yi)| ti / yi).collect();
        Ok(norm(e, &expand(y1s))? * second_norm(&expand(&y2s))?)
    };

    // power split |y1| = |target|^theta, golden section on theta
    let split = |theta: f64| -> Vec<f64> { t.iter().map(|v| powf(*v, theta)).collect() };
    let phi = 0.5 * (sqrt(5.0) - 1.0);
    let (mut lo, mut hi) = (0.0, 1.0);
    let mut c = hi - phi * (hi - lo);
    let mut d = lo + phi * (hi - lo);
    let mut fc = product(&split(c))?;
    let mut fd = product(&split(d))?;
    for _ in 0..40 {
        if fc <= fd {
            hi = d;
            d = c;
            fd = fc;
            c = hi - phi * (hi - lo);
            fc = product(&split(c))?;
        } else {
            lo = c;
            c = d;
            fc = fd;
            d = lo + phi * (hi - lo);
            fd = product(&split(d))?;
        }
    }
    let theta = 0.5 * (lo + hi);
    let mut y1s = split(theta);
    let best = product(&y1s)?;
    if best > reference * (1.0 + 1e-9) {
        let refined = log_ascent(e, &support, target.len(), &a, &y1s, 4000)?;
        if product(&refined)? < best {
            y1s = refined;
        }
    }

    let y1_norm = norm(e, &expand(&y1s))?;
    let y2s: Vec<f64> = t.iter().zip(&y1s).map(|(ti, yi)| ti / yi).collect();
    let y2_norm = second_norm(&expand(&y2s))?;
    let c = sqrt(y2_norm / y1_norm);
    let mut y1 = vec![0.0; target.len()];
    let mut y2 = vec![0.0; target.len()];
    for (r, &i) in support.iter().enumerate() {
        y1[i] = signum(target[i]) * y1s[r] * c;
        y2[i] = y2s[r] / c;
    }
    let product_error = y1
        .iter()
        .zip(&y2)
        .zip(target)
        .map(|((a, b), t)| abs(a * b - t))
        .fold(0.0, f64::max);
    let norm_product = norm(e, &y1)? * second_norm(&y2)?;
    let cert = FactorizationCert {
        y1,
        y2,
        target: target.to_vec(),
        product_error,
        norm_product,
        reference_norm: reference,
    };
    if cert.ratio() > 1.0 + eps {
        return Err(Error::FactorizationTolerance {
            achieved: cert.ratio(),
            allowed: 1.0 + eps,
        });
    }
    Ok(cert)
}

/// Maximizes `sum a_i log y_i - log |y|_E` (with `sum a_i = 1`) over `y > 0`
/// by damped multiplicative updates `y_i <- y_i (a_i / (y_i g_i / |y|))^w`,
/// whose fixed points are the stationary points.
fn log_ascent(
    e: &SpaceSpec,
    support: &[usize],
    dim: usize,
    a: &[f64],
    start: &[f64],
    iters: usize,
) -> Result<Vec<f64>> {
    let expand = |ys: &[f64]| -> Vec<f64> {
        let mut full = vec![0.0; dim];
        for (r, &i) in support.iter().enumerate() {
            full[i] = ys[r];
        }
        full
    };
    let objective = |ys: &[f64]| -> Result<(f64, Vec<f64>, f64)> {
        let (n, g) = norm_grad(e, &expand(ys))?;
        let v: f64 = a.iter().zip(ys).map(|(ai, yi)| ai * ln(*yi)).sum::<f64>() - ln(n);
        let gs: Vec<f64> = support.iter().map(|&i| g[i]).collect();
        Ok((v, gs, n))
    };
    let mut y = start.to_vec();
    let (mut val, mut g, mut n) = objective(&y)?;
    let mut w = 0.5;
    for _ in 0..iters {
        let step: Vec<f64> = a
            .iter()
            .zip(&y)
            .zip(&g)
            .map(|((ai, yi), gi)| {
                let r = yi * gi / n;
                if r > 0.0 {
                    ln(ai / r).clamp(-5.0, 5.0)
                } else {
                    5.0
                }
            })
            .collect();
        if step.iter().all(|s| abs(*s) < 1e-13) {
            break;
        }
        let trial: Vec<f64> = y
            .iter()
            .zip(&step)
            .map(|(yi, si)| yi * crate::math::exp(w * si))
            .collect();
        let (tv, tg, tn) = objective(&trial)?;
        if tv > val {
            y = trial;
            val = tv;
            g = tg;
            n = tn;
            w = (w * 1.5).min(1.0);
        } else {
            w *= 0.5;
            if w < 1e-12 {
                break;
            }
        }
    }
    Ok(y)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn lp(p: f64) -> SpaceSpec {
        SpaceSpec::lp(p).unwrap()
    }

    fn ex(p: f64) -> Exponent {
        Exponent::new(p).unwrap()
    }

    #[test]
    fn closed_form_exponents() {
        assert_eq!(closed_form_dual_exponent(ex(4.0), ex(2.0)).value(), 4.0);
        assert!(closed_form_dual_exponent(ex(2.0), ex(2.0)).is_infinite());
        assert!(closed_form_dual_exponent(ex(2.0), ex(3.0)).is_infinite());
        assert_eq!(
            closed_form_dual_exponent(Exponent::INFINITY, ex(2.0)).value(),
            2.0
        );
        assert!((closed_form_dual_exponent(ex(3.0), Exponent::ONE).value() - 1.5).abs() < 1e-14);
    }

    #[test]
    fn generalized_dual_examples() {
        let b = generalized_dual_norm(&DualNormQuery::new(
            SpaceSpec::linf(),
            SpaceSpec::l2(),
            vec![1.0, 0.0],
        ))
        .unwrap();
        assert_eq!(b.lower, 1.0);
        let mut q = DualNormQuery::new(SpaceSpec::l2(), SpaceSpec::l2(), vec![5.0, 1.0]);
        assert_eq!(generalized_dual_norm(&q).unwrap().lower, 5.0);
        q.force_numeric = true;
        assert_relative_eq!(
            generalized_dual_norm(&q).unwrap().lower,
            5.0,
            max_relative = 1e-9
        );
        let mut q = DualNormQuery::new(lp(4.0), SpaceSpec::l2(), vec![1.0, 1.0]);
        let closed = generalized_dual_norm(&q).unwrap();
        assert_relative_eq!(closed.lower, powf(2.0, 0.25), epsilon = 1e-14);
        q.force_numeric = true;
        let numeric = generalized_dual_norm(&q).unwrap();
        assert_relative_eq!(numeric.lower, powf(2.0, 0.25), max_relative = 1e-6);
    }

    #[test]
    fn closed_form_witness_reproduces_value() {
        let x = vec![0.5, -2.0, 1.0];
        for (p, r) in [(4.0, 2.0), (3.0, 1.5), (2.0, 3.0), (2.0, 2.0)] {
            let q = DualNormQuery::new(lp(p), lp(r), x.clone());
            let b = generalized_dual_norm(&q).unwrap();
            let y = &b.witness;
            let xy: Vec<f64> = x.iter().zip(y).map(|(a, b)| a * b).collect();
            let v = norm(&lp(r), &xy).unwrap() / norm(&lp(p), y).unwrap();
            assert_relative_eq!(v, b.lower, max_relative = 1e-12);
        }
    }

    #[test]
    fn lozanovskii_examples() {
        let c = lozanovskii_factorize(&SpaceSpec::l2(), &[1.0, 0.0], 0.05, 0).unwrap();
        assert_eq!(c.y1, [1.0, 0.0]);
        assert_eq!(c.y2, [1.0, 0.0]);
        assert_relative_eq!(c.norm_product, 1.0, epsilon = 1e-14);
        let c = lozanovskii_factorize(&SpaceSpec::l2(), &[1.0, 1.0], 0.05, 0).unwrap();
        for v in c.y1.iter().chain(&c.y2) {
            assert_relative_eq!(*v, 1.0, epsilon = 1e-9);
        }
        let c = lozanovskii_factorize(&lp(3.0), &[1.0, 0.5], 0.05, 0).unwrap();
        assert!(c.norm_product <= 1.05 * 1.5);
        assert!(c.norm_product >= 1.5 - 1e-10);
        assert!(c.product_error <= 1e-8);
    }

    #[test]
    fn lozanovskii_rejects_bad_input() {
        assert!(lozanovskii_factorize(&SpaceSpec::l2(), &[0.0, 0.0], 0.05, 0).is_err());
        assert!(lozanovskii_factorize(&SpaceSpec::l2(), &[1.0], 0.0, 0).is_err());
        assert!(lozanovskii_factorize(&SpaceSpec::l2(), &[1.0], 0.7, 0).is_err());
    }

    #[test]
    fn lp_factorize_examples() {
        let c = lp_factorize(&SpaceSpec::l2(), Exponent::TWO, &[1.0, 0.0], 0.05, 0).unwrap();
        assert_eq!(c.y1, [1.0, 0.0]);
        assert_eq!(c.y2, [1.0, 0.0]);
        let c = lp_factorize(&lp(4.0), Exponent::TWO, &[1.0, 1.0], 0.05, 0).unwrap();
        assert!(c.norm_product <= 1.05 * sqrt(2.0));
        assert!(c.norm_product >= sqrt(2.0) - 1e-10);
        let c = lp_factorize(&lp(3.0), Exponent::TWO, &[0.0, -2.0, 0.0], 0.05, 0).unwrap();
        assert_relative_eq!(c.norm_product, 2.0, epsilon = 1e-12);
        assert_relative_eq!(c.y1[1] * c.y2[1], -2.0, epsilon = 1e-14);
    }

    #[test]
    fn orlicz_lorentz_factorization() {
        let e = SpaceSpec::orlicz_lorentz(
            seqspace::OrliczFn::power(3.0).unwrap(),
            seqspace::WeightSeq::harmonic(6).unwrap(),
        )
        .unwrap();
        let u = [0.7, -0.2, 1.3, 0.05, 0.0, 0.4];
        let c = lozanovskii_factorize(&e, &u, 0.01, 1).unwrap();
        assert!(c.product_error <= 1e-8);
        assert!(c.norm_product >= c.reference_norm * (1.0 - 1e-8));
        assert!(c.ratio() <= 1.01);
    }

    #[test]
    fn flaky_detection() {
        assert_eq!(flaky_spread(&mut [1.0, 1.0, 0.5, 0.5]), None);
        assert!(flaky_spread(&mut [1.0, 0.8, 0.8, 0.8]).is_some());
        assert_eq!(flaky_spread(&mut [1.0, 0.99, 0.99, 0.99]), None);
    }
}
