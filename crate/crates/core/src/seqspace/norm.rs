use alloc::vec;
use alloc::vec::Vec;

use super::{OrliczLorentz, SpaceSpec};
use crate::ascent::Eval;
use crate::error::check_finite;
use crate::math::{abs, max_abs, norm2, powf, signum, sum_abs};
use crate::{Error, Exponent, Result};

const GAUGE_STEPS: usize = 200;

/// Indices of `x` ordered by decreasing modulus; ties keep their original order.
pub fn rearrangement_order(x: &[f64]) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..x.len()).collect();
    idx.sort_by(|&i, &j| {
        abs(x[j])
            .partial_cmp(&abs(x[i]))
            .unwrap_or(core::cmp::Ordering::Equal)
    });
    idx
}

/// The nonincreasing rearrangement `x*` of `|x|`.
pub fn rearrange(x: &[f64]) -> Vec<f64> {
    rearrangement_order(x)
        .into_iter()
        .map(|i| abs(x[i]))
        .collect()
}

/// `|x|_S`.
pub fn norm(s: &SpaceSpec, x: &[f64]) -> Result<f64> {
    check_finite(x)?;
    s.check_dim(x.len())?;
    if let Some(p) = s.lp_exponent() {
        return Ok(lp_norm(p, x));
    }
    match s {
        SpaceSpec::Lp { p } => Ok(lp_norm(*p, x)),
        SpaceSpec::OrliczLorentz(ol) => Ok(ol.scale * luxemburg_gauge(ol, x)?),
        SpaceSpec::Convexification { base, p } => {
            let y: Vec<f64> = x.iter().map(|v| powf(abs(*v), p.value())).collect();
            Ok(powf(norm(base, &y)?, p.recip()))
        }
        SpaceSpec::KotheDual { .. } | SpaceSpec::GeneralizedDual { .. } => Ok(norm_grad(s, x)?.0),
    }
}

/// `|x|_S` together with a subgradient.
pub fn norm_grad(s: &SpaceSpec, x: &[f64]) -> Result<(f64, Vec<f64>)> {
    check_finite(x)?;
    s.check_dim(x.len())?;
    if crate::math::is_zero(x) {
        return Ok((0.0, vec![0.0; x.len()]));
    }
    if let Some(p) = s.lp_exponent() {
        return Ok(lp_norm_grad(p, x));
    }
    match s {
        SpaceSpec::Lp { p } => Ok(lp_norm_grad(*p, x)),
        SpaceSpec::OrliczLorentz(ol) => {
            let (v, mut g) = luxemburg_gauge_grad(ol, x)?;
            for gi in g.iter_mut() {
                *gi *= ol.scale;
            }
            Ok((ol.scale * v, g))
        }
        SpaceSpec::Convexification { base, p } => {
            let p = p.value();
            let y: Vec<f64> = x.iter().map(|v| powf(abs(*v), p)).collect();
            let (b, gb) = norm_grad(base, &y)?;
            let n = powf(b, 1.0 / p);
            if n == 0.0 {
                return Ok((0.0, vec![0.0; x.len()]));
            }
            let lead = powf(n, 1.0 - p);
            let g = x
                .iter()
                .zip(&gb)
                .map(|(xi, gi)| lead * gi * powf(abs(*xi), p - 1.0) * signum(*xi))
                .collect();
            Ok((n, g))
        }
        SpaceSpec::KotheDual {
            base,
            numeric,
            budget,
        } => {
            let opts = super::DualOptions {
                budget: *budget,
                seed: 0,
                force_numeric: *numeric,
            };
            let b = super::kothe_dual_norm_with(base, x, &opts)?;
            // Danskin: the maximizing x gives the subgradient sgn(y) |x|
            let g = x
                .iter()
                .zip(&b.witness)
                .map(|(yi, wi)| signum(*yi) * abs(*wi))
                .collect();
            Ok((b.lower, g))
        }
        SpaceSpec::GeneralizedDual {
            e,
            f,
            numeric,
            budget,
        } => {
            let q = crate::kothe::DualNormQuery {
                e: (**e).clone(),
                f: (**f).clone(),
                x: x.to_vec(),
                budget: *budget,
                seed: 0,
                force_numeric: *numeric,
            };
            let b = crate::kothe::generalized_dual_norm(&q)?;
            let y = &b.witness;
            let xy: Vec<f64> = x.iter().zip(y).map(|(a, b)| a * b).collect();
            let (_, gf) = norm_grad(f, &xy)?;
            let ny = norm(e, y)?;
            let g = gf
                .iter()
                .zip(y)
                .map(|(gi, yi)| if ny > 0.0 { gi * yi / ny } else { 0.0 })
                .collect();
            Ok((b.lower, g))
        }
    }
}

/// Radial projection onto the unit ball of `S`.
pub fn ball_project(s: &SpaceSpec, x: &[f64]) -> Result<Vec<f64>> {
    let n = norm(s, x)?;
    if n <= 1.0 {
        Ok(x.to_vec())
    } else {
        Ok(x.iter().map(|v| v / n).collect())
    }
}

pub(crate) fn lp_norm(p: Exponent, x: &[f64]) -> f64 {
    let p = p.value();
    if p == 1.0 {
        sum_abs(x)
    } else if p == 2.0 {
        norm2(x)
    } else if p.is_infinite() {
        max_abs(x)
    } else {
        let m = max_abs(x);
        if m == 0.0 {
            return 0.0;
        }
        let s: f64 = x.iter().map(|v| powf(abs(*v) / m, p)).sum();
        m * powf(s, 1.0 / p)
    }
}

pub(crate) fn lp_norm_grad(p: Exponent, x: &[f64]) -> Eval {
    let n = lp_norm(p, x);
    let pv = p.value();
    if n == 0.0 {
        return (0.0, vec![0.0; x.len()]);
    }
    let g = if pv == 1.0 {
        x.iter().map(|v| signum(*v)).collect()
    } else if pv.is_infinite() {
        let k = rearrangement_order(x)[0];
        let mut g = vec![0.0; x.len()];
        g[k] = signum(x[k]);
        g
    } else {
        x.iter()
            .map(|v| signum(*v) * powf(abs(*v) / n, pv - 1.0))
            .collect()
    };
    (n, g)
}

fn gauge_sum(ol: &OrliczLorentz, xs: &[f64], lambda: f64) -> f64 {
    xs.iter()
        .zip(ol.w.weights())
        .map(|(x, w)| ol.g.eval(x / lambda) * w)
        .sum()
}

/// Unnormalized Luxemburg gauge `inf { l > 0 : sum G(x*_k / l) w_k <= 1 }`.
pub(crate) fn luxemburg_gauge(ol: &OrliczLorentz, x: &[f64]) -> Result<f64> {
    if x.len() > ol.w.len() {
        return Err(Error::TooLong {
            len: x.len(),
            max: ol.w.len(),
        });
    }
    let xs = rearrange(x);
    let m = xs[0];
    if m == 0.0 {
        return Ok(0.0);
    }
    let mut lo = m;
    let mut steps = 0;
    while gauge_sum(ol, &xs, lo) <= 1.0 {
        lo *= 0.5;
        steps += 1;
        if steps > GAUGE_STEPS || lo == 0.0 {
            return Err(Error::Bracket(GAUGE_STEPS));
        }
    }
    let mut hi = sum_abs(&xs).max(m);
    steps = 0;
    while gauge_sum(ol, &xs, hi) > 1.0 {
        hi *= 2.0;
        steps += 1;
        if steps > GAUGE_STEPS || !hi.is_finite() {
            return Err(Error::Bracket(GAUGE_STEPS));
        }
    }
    for _ in 0..GAUGE_STEPS {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if gauge_sum(ol, &xs, mid) > 1.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(hi)
}

/// Gauge with its gradient by implicit differentiation of `sum G(x*_k/l) w_k = 1`.
fn luxemburg_gauge_grad(ol: &OrliczLorentz, x: &[f64]) -> Result<Eval> {
    let lambda = luxemburg_gauge(ol, x)?;
    let order = rearrangement_order(x);
    let w = ol.w.weights();
    let mut denom = 0.0;
    let mut dk = vec![0.0; x.len()];
    for (k, &i) in order.iter().enumerate() {
        let t = abs(x[i]) / lambda;
        let gp = ol.g.derivative(t) * w[k];
        dk[k] = gp / lambda;
        denom += gp * t / lambda;
    }
    let mut g = vec![0.0; x.len()];
    if denom > 0.0 {
        for (k, &i) in order.iter().enumerate() {
            g[i] = signum(x[i]) * dk[k] / denom;
        }
    }
    Ok((lambda, g))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::seqspace::{OrliczFn, WeightSeq};
    use approx::assert_relative_eq;

    fn ol(k: f64, w: WeightSeq) -> SpaceSpec {
        SpaceSpec::orlicz_lorentz(OrliczFn::power(k).unwrap(), w).unwrap()
    }

    #[test]
    fn rearrangement_examples() {
        assert_eq!(rearrange(&[3.0, -1.0, 2.0]), [3.0, 2.0, 1.0]);
        assert_eq!(rearrange(&[0.0, 0.0, 0.0]), [0.0, 0.0, 0.0]);
        assert_eq!(rearrange(&[-5.0, 5.0]), [5.0, 5.0]);
        assert_eq!(rearrangement_order(&[-5.0, 5.0]), [0, 1]);
    }

    #[test]
    fn lp_examples() {
        assert_eq!(norm(&SpaceSpec::l2(), &[3.0, 4.0]).unwrap(), 5.0);
        assert_eq!(norm(&SpaceSpec::linf(), &[3.0, -4.0]).unwrap(), 4.0);
        assert_relative_eq!(
            norm(&SpaceSpec::lp(3.0).unwrap(), &[1.0, 1.0]).unwrap(),
            powf(2.0, 1.0 / 3.0),
            epsilon = 1e-15
        );
    }

    #[test]
    fn orlicz_lorentz_matches_closed_forms() {
        let s = ol(2.0, WeightSeq::ones(4).unwrap());
        assert_relative_eq!(norm(&s, &[3.0, 4.0]).unwrap(), 5.0, epsilon = 1e-9);
        // G(t) = t reduces to sum x*_k w_k
        let w = WeightSeq::explicit(alloc::vec![1.0, 0.5]).unwrap();
        let s = ol(1.0, w);
        assert_relative_eq!(norm(&s, &[1.0, 1.0]).unwrap(), 1.5, epsilon = 1e-12);
        assert_relative_eq!(norm(&s, &[1.0, 0.0]).unwrap(), 1.0, epsilon = 1e-12);
    }

    #[test]
    fn orlicz_lorentz_rejects_long_vectors() {
        let s = ol(2.0, WeightSeq::harmonic(2).unwrap());
        assert_eq!(
            norm(&s, &[1.0, 1.0, 1.0]),
            Err(Error::TooLong { len: 3, max: 2 })
        );
    }

    #[test]
    fn rejects_nan() {
        assert_eq!(
            norm(&SpaceSpec::l2(), &[f64::NAN]),
            Err(Error::NonFinite(0))
        );
    }

    #[test]
    fn e1_has_unit_norm() {
        let exp = SpaceSpec::orlicz_lorentz(OrliczFn::ExpMinusOne, WeightSeq::harmonic(5).unwrap())
            .unwrap();
        for s in [
            ol(3.0, WeightSeq::harmonic(5).unwrap()),
            ol(1.5, WeightSeq::geometric(0.7, 5).unwrap()),
            exp.clone(),
            SpaceSpec::convexify(exp, 2.0).unwrap(),
        ] {
            assert_relative_eq!(norm(&s, &[1.0]).unwrap(), 1.0, epsilon = 1e-12);
            assert_relative_eq!(norm(&s, &[0.0, -1.0]).unwrap(), 1.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn convexification_of_lp_is_lpq() {
        let base = ol(1.5, WeightSeq::ones(4).unwrap());
        let c = SpaceSpec::convexify(base, 2.0).unwrap();
        let x = [0.3, -1.2, 0.7, 2.0];
        assert_relative_eq!(
            norm(&c, &x).unwrap(),
            lp_norm(Exponent::new(3.0).unwrap(), &x),
            epsilon = 1e-9
        );
    }

    #[test]
    fn gradients_match_finite_differences() {
        let exp = SpaceSpec::orlicz_lorentz(OrliczFn::ExpMinusOne, WeightSeq::harmonic(4).unwrap())
            .unwrap();
        let specs = [
            SpaceSpec::lp(3.0).unwrap(),
            ol(2.5, WeightSeq::harmonic(4).unwrap()),
            exp.clone(),
            SpaceSpec::convexify(exp, 1.5).unwrap(),
        ];
        let x = [0.4, -1.1, 0.25, 0.8];
        for s in &specs {
            let (v, g) = norm_grad(s, &x).unwrap();
            assert_relative_eq!(v, norm(s, &x).unwrap(), epsilon = 1e-12);
            for i in 0..x.len() {
                let h = 1e-6;
                let mut xp = x;
                let mut xm = x;
                xp[i] += h;
                xm[i] -= h;
                let fd = (norm(s, &xp).unwrap() - norm(s, &xm).unwrap()) / (2.0 * h);
                assert_relative_eq!(g[i], fd, epsilon = 1e-5);
            }
        }
    }

    #[test]
    fn ball_projection() {
        assert_eq!(
            ball_project(&SpaceSpec::l2(), &[3.0, 4.0]).unwrap(),
            [0.6, 0.8]
        );
        assert_eq!(
            ball_project(&SpaceSpec::linf(), &[0.5, -0.5]).unwrap(),
            [0.5, -0.5]
        );
        assert_eq!(
            ball_project(&SpaceSpec::l1(), &[2.0, 0.0]).unwrap(),
            [1.0, 0.0]
        );
    }
}
