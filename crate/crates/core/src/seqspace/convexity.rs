use alloc::vec;
use alloc::vec::Vec;

use rand::Rng;
use serde::{Deserialize, Serialize};

use super::{log_grid, norm, OrliczFn, SpaceSpec, WeightSeq};
use crate::math::{abs, powf};
use crate::{Exponent, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Direction {
    Convex,
    Concave,
}

/// Largest observed ratio in the `p`-convexity (or `q`-concavity) inequality.
///
/// `witness` is the family of vectors attaining `lower_bound_on_constant`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConvexityReport {
    pub p: Exponent,
    pub direction: Direction,
    pub lower_bound_on_constant: f64,
    pub witness: Vec<Vec<f64>>,
}

/// Evaluates `|(sum |x_k|^p)^(1/p)| / (sum |x_k|^p)^(1/p)` for a convex probe,
/// or the reciprocal arrangement for a concave one (max-forms at infinity).
pub fn family_ratio(
    s: &SpaceSpec,
    p: Exponent,
    direction: Direction,
    family: &[Vec<f64>],
) -> Result<f64> {
    let d = family.iter().map(Vec::len).max().unwrap_or(0);
    let mut lattice: Vec<f64> = vec![0.0; d.max(1)];
    let mut norms = Vec::with_capacity(family.len());
    for x in family {
        norms.push(norm(s, x)?);
        for (l, v) in lattice.iter_mut().zip(x) {
            if p.is_infinite() {
                *l = (*l).max(abs(*v));
            } else {
                *l += powf(abs(*v), p.value());
            }
        }
    }
    let (lat, avg) = if p.is_infinite() {
        (
            norm(s, &lattice)?,
            norms.iter().copied().fold(0.0, f64::max),
        )
    } else {
        let r = p.recip();
        for l in lattice.iter_mut() {
            *l = powf(*l, r);
        }
        let sum: f64 = norms.iter().map(|n| powf(*n, p.value())).sum();
        (norm(s, &lattice)?, powf(sum, r))
    };
    let (num, den) = match direction {
        Direction::Convex => (lat, avg),
        Direction::Concave => (avg, lat),
    };
    Ok(if den == 0.0 { 0.0 } else { num / den })
}

/// Samples vector families and reports the worst ratio seen (at least 1,
/// attained by a one-vector family).
pub fn convexity_probe(
    s: &SpaceSpec,
    p: Exponent,
    direction: Direction,
    trials: usize,
    seed: u64,
) -> Result<ConvexityReport> {
    let max_d = s.max_dim().unwrap_or(6).clamp(1, 6);
    let mut rng = crate::rng::seeded(seed, 0x636f_6e76);
    let mut best_ratio = -1.0;
    let mut best = Vec::new();
    let mut consider = |family: Vec<Vec<f64>>| -> Result<()> {
        let r = family_ratio(s, p, direction, &family)?;
        if r > best_ratio {
            best_ratio = r;
            best = family;
        }
        Ok(())
    };
    consider(vec![unit(max_d, 0)])?;
    if max_d >= 2 {
        consider(vec![unit(max_d, 0), unit(max_d, 1)])?;
        consider(vec![vec![1.0; max_d]; 2])?;
    }
    for _ in 0..trials {
        let d = rng.random_range(1..=max_d);
        let count = rng.random_range(2..=4);
        let family: Vec<Vec<f64>> = match rng.random_range(0..3u8) {
            // disjointly supported blocks
            0 => (0..count)
                .map(|k| {
                    let mut v = vec![0.0; d];
                    for (i, vi) in v.iter_mut().enumerate() {
                        if i % count == k {
                            *vi = rng.random_range(0.1..1.0);
                        }
                    }
                    v
                })
                .collect(),
            1 => (0..count)
                .map(|_| crate::rng::uniform_vec(&mut rng, d, 0.0, 1.0))
                .collect(),
            _ => (0..count)
                .map(|_| crate::rng::gaussian_vec(&mut rng, d))
                .collect(),
        };
        let family: Vec<Vec<f64>> = family
            .into_iter()
            .filter(|v: &Vec<f64>| !crate::math::is_zero(v))
            .collect();
        if !family.is_empty() {
            consider(family)?;
        }
    }
    Ok(ConvexityReport {
        p,
        direction,
        lower_bound_on_constant: best_ratio,
        witness: best,
    })
}

fn unit(d: usize, k: usize) -> Vec<f64> {
    let mut v = vec![0.0; d];
    v[k] = 1.0;
    v
}

/// Which sufficient condition [`orlicz_condition_check`] tests.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ConditionMode {
    /// `G(t^(1/p))` convex and partial sums of `w` concave.
    Convexity,
    /// `G(t^(1/p))` concave and partial sums of `w` convex.
    Concavity,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "part", rename_all = "snake_case")]
pub enum Violation {
    /// Slope test failed on the grid triple `t`.
    Function { t: [f64; 3] },
    /// Second difference of the partial sums has the wrong sign at index `k`.
    Weights { k: usize },
}

/// Outcome of [`orlicz_condition_check`] with the sampled `(t, G(t^(1/p)))` grid.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GridCheck {
    pub pass: bool,
    pub function_pass: bool,
    pub weights_pass: bool,
    pub violation: Option<Violation>,
    pub grid: Vec<(f64, f64)>,
}

/// Grid test of the shape conditions on `t -> G(t^(1/p))` and on the partial
/// sums of `w`. Convexity of the function itself is tested; equivalence to a
/// convex function up to a constant is not decidable on a grid.
pub fn orlicz_condition_check(
    g: &OrliczFn,
    w: &WeightSeq,
    p: Exponent,
    mode: ConditionMode,
) -> GridCheck {
    let r = p.recip();
    let grid: Vec<(f64, f64)> = log_grid(1e-3, 1e3, 121)
        .into_iter()
        .map(|t| (t, g.eval(powf(t, r))))
        .take_while(|(_, v)| v.is_finite())
        .collect();
    let sign = match mode {
        ConditionMode::Convexity => 1.0,
        ConditionMode::Concavity => -1.0,
    };
    let mut violation = None;
    for tri in grid.windows(3) {
        let s1 = (tri[1].1 - tri[0].1) / (tri[1].0 - tri[0].0);
        let s2 = (tri[2].1 - tri[1].1) / (tri[2].0 - tri[1].0);
        let tol = 1e-9 * (abs(s1) + abs(s2));
        if sign * (s2 - s1) < -tol {
            violation = Some(Violation::Function {
                t: [tri[0].0, tri[1].0, tri[2].0],
            });
            break;
        }
    }
    let function_pass = violation.is_none();
    // second difference of W_k = sum_{j<=k} w_j is w_{k+1} - w_k
    let ws = w.weights();
    let mut weights_pass = true;
    for k in 1..ws.len() {
        let d2 = ws[k] - ws[k - 1];
        if -sign * d2 < -1e-12 * ws[k - 1] {
            weights_pass = false;
            if violation.is_none() {
                violation = Some(Violation::Weights { k });
            }
            break;
        }
    }
    GridCheck {
        pass: function_pass && weights_pass,
        function_pass,
        weights_pass,
        violation,
        grid,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn exp(p: f64) -> Exponent {
        Exponent::new(p).unwrap()
    }

    #[test]
    fn l2_is_two_convex_with_constant_one() {
        let r = convexity_probe(&SpaceSpec::l2(), exp(2.0), Direction::Convex, 200, 7).unwrap();
        assert_relative_eq!(r.lower_bound_on_constant, 1.0, epsilon = 1e-12);
    }

    #[test]
    fn every_space_is_one_convex() {
        let s = SpaceSpec::lp(3.0).unwrap();
        let r = convexity_probe(&s, Exponent::ONE, Direction::Convex, 200, 1).unwrap();
        assert_relative_eq!(r.lower_bound_on_constant, 1.0, epsilon = 1e-12);
        let r = convexity_probe(&s, Exponent::INFINITY, Direction::Concave, 200, 1).unwrap();
        assert_relative_eq!(r.lower_bound_on_constant, 1.0, epsilon = 1e-12);
    }

    #[test]
    fn l1_is_not_two_convex_with_constant_one() {
        let r = convexity_probe(&SpaceSpec::l1(), exp(2.0), Direction::Convex, 50, 3).unwrap();
        assert!(r.lower_bound_on_constant >= 2f64.sqrt() - 1e-12);
        let again =
            family_ratio(&SpaceSpec::l1(), exp(2.0), Direction::Convex, &r.witness).unwrap();
        assert_eq!(again, r.lower_bound_on_constant);
        let hand = family_ratio(
            &SpaceSpec::l1(),
            exp(2.0),
            Direction::Convex,
            &[alloc::vec![1.0, 0.0], alloc::vec![0.0, 1.0]],
        )
        .unwrap();
        assert_relative_eq!(hand, 2f64.sqrt(), epsilon = 1e-15);
    }

    #[test]
    fn probe_is_deterministic() {
        let s = SpaceSpec::lp(1.5).unwrap();
        let a = convexity_probe(&s, exp(2.0), Direction::Concave, 40, 9).unwrap();
        let b = convexity_probe(&s, exp(2.0), Direction::Concave, 40, 9).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn orlicz_conditions() {
        let ones = WeightSeq::ones(8).unwrap();
        let t4 = OrliczFn::power(4.0).unwrap();
        let t1 = OrliczFn::power(1.0).unwrap();
        let t2 = OrliczFn::power(2.0).unwrap();
        assert!(orlicz_condition_check(&t4, &ones, exp(2.0), ConditionMode::Convexity).pass);
        let c = orlicz_condition_check(&t1, &ones, exp(2.0), ConditionMode::Convexity);
        assert!(!c.pass);
        assert!(matches!(c.violation, Some(Violation::Function { .. })));
        assert!(orlicz_condition_check(&t2, &ones, exp(2.0), ConditionMode::Concavity).pass);
        let harm = WeightSeq::harmonic(8).unwrap();
        let c = orlicz_condition_check(&t2, &harm, exp(2.0), ConditionMode::Concavity);
        assert!(c.function_pass && !c.weights_pass);
    }
}
