use alloc::vec;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use super::norm::{lp_norm_grad, norm, norm_grad, rearrangement_order};
use super::SpaceSpec;
use crate::ascent::maximize_ratio;
use crate::error::check_finite;
use crate::math::{abs, dot, powf, signum, sum_abs};
use crate::{Budget, Flag, Method, NormBounds, Result};

/// Relative gap above which a numerical dual norm is flagged.
pub(crate) const DUAL_GAP_TOL: f64 = 1e-4;

/// Effort and routing for [`kothe_dual_norm_with`].
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DualOptions {
    pub budget: Budget,
    pub seed: u64,
    /// Skip closed forms and the bidual shortcut.
    pub force_numeric: bool,
}

impl Default for DualOptions {
    fn default() -> Self {
        DualOptions {
            budget: Budget::DUAL,
            seed: 0,
            force_numeric: false,
        }
    }
}

/// Bounds on `|y|_{S^x} = sup { sum |x_i y_i| : |x|_S <= 1 }`.
///
/// The witness is a maximizing `x` with `|x|_S = 1` and `sum x_i y_i = lower`.
pub fn kothe_dual_norm(s: &SpaceSpec, y: &[f64]) -> Result<NormBounds> {
    kothe_dual_norm_with(s, y, &DualOptions::default())
}

pub fn kothe_dual_norm_with(s: &SpaceSpec, y: &[f64], opts: &DualOptions) -> Result<NormBounds> {
    check_finite(y)?;
    s.check_dim(y.len())?;
    if crate::math::is_zero(y) {
        return Ok(NormBounds::zero(y.len()));
    }
    if !opts.force_numeric {
        if let Some(p) = s.lp_exponent() {
            let q = p.conjugate();
            let (v, w) = lp_norm_grad(q, y);
            return Ok(NormBounds::exact(v, Method::ClosedForm, w));
        }
        if let SpaceSpec::KotheDual {
            base,
            numeric: false,
            ..
        } = s
        {
            let (v, w) = norm_grad(base, y)?;
            let mut b = NormBounds::exact(v, Method::Bidual, w);
            b.certified = base.is_direct();
            return Ok(b);
        }
    }
    numeric_dual(s, y, opts)
}

/// Maximizes `<x, y*>` over the nonnegative part of the unit ball, arranged
/// like `y*`. This loses nothing: `S` is symmetric and the pairing only
/// grows when `x` is replaced by `|x|` arranged like `|y|`.
fn numeric_dual(s: &SpaceSpec, y: &[f64], opts: &DualOptions) -> Result<NormBounds> {
    let order = rearrangement_order(y);
    let k = order.iter().take_while(|&&i| y[i] != 0.0).count();
    let a: Vec<f64> = order[..k].iter().map(|&i| abs(y[i])).collect();

    // search over the cone of nonincreasing x >= 0, written as tail sums
    // x_k = sum_{j >= k} c_j of c >= 0; ties of x are faces c_j = 0
    let prefix = |v: &[f64]| -> Vec<f64> {
        let mut acc = 0.0;
        v.iter()
            .map(|t| {
                acc += t;
                acc
            })
            .collect()
    };
    let a_prefix = prefix(&a);
    let mut num =
        |c: &[f64]| -> Result<(f64, Vec<f64>)> { Ok((dot(&a, &tail_sums(c)), a_prefix.clone())) };
    let mut den = |c: &[f64]| -> Result<(f64, Vec<f64>)> {
        let (v, g) = norm_grad(s, &tail_sums(c))?;
        Ok((v, prefix(&g)))
    };
    let mut best: Option<(f64, Vec<f64>)> = None;
    let mut best_upper = sum_abs(&a);
    let certified = s.is_direct();
    let mut rng = crate::rng::seeded(opts.seed, 0x6b6f_7468);
    let starts = opts.budget.starts.max(1);
    let mut stalled = 0;
    for start_idx in 0..starts {
        let start = differences(&dual_start(&a, start_idx, &mut rng));
        let Some(run) = maximize_ratio(&mut num, &mut den, &start, true, opts.budget.iters)? else {
            continue;
        };
        let prev = best.as_ref().map_or(0.0, |b| b.0);
        if run.value > prev {
            let (v, x, up) = polish(s, &a, tail_sums(&run.x), run.value)?;
            best_upper = best_upper.min(up);
            best = Some((v, x));
        }
        let lo = best.as_ref().map_or(0.0, |b| b.0);
        if lo > 0.0 && best_upper <= lo * (1.0 + 1e-10) {
            break;
        }
        // the ratio is quasi-concave on the cone, so agreeing restarts settle it
        if lo <= prev * (1.0 + 1e-9) {
            stalled += 1;
        } else {
            stalled = 0;
        }
        if stalled >= 3 && start_idx >= 5 {
            break;
        }
    }
    let Some((_, xs)) = best else {
        return Ok(NormBounds::zero(y.len()));
    };
    let nx = norm(s, &xs)?;
    let lower = dot(&a, &xs) / nx;
    let mut witness = vec![0.0; y.len()];
    for (r, &i) in order[..k].iter().enumerate() {
        witness[i] = signum(y[i]) * xs[r] / nx;
    }
    let upper = best_upper.max(lower);
    let mut b = NormBounds {
        lower,
        upper,
        method: Method::DualAscent,
        witness,
        certified,
        flags: Vec::new(),
    };
    if b.gap() > DUAL_GAP_TOL {
        b.push_flag(Flag::NotConverged { gap: b.gap() });
    }
    Ok(b)
}

/// Snaps near-equal blocks of an ascent result and returns the best
/// `(value, x, upper)` found along the way.
fn polish(s: &SpaceSpec, a: &[f64], mut xs: Vec<f64>, value: f64) -> Result<(f64, Vec<f64>, f64)> {
    // optima of symmetric norms often sit on ties
    let mut lower = value;
    let (_, g) = norm_grad(s, &xs)?;
    let mut upper = dual_upper(a, &g);
    for tol in [1e-9, 1e-7, 1e-5, 1e-3] {
        let (snapped, blocks) = snap_blocks(&xs, tol);
        let n = norm(s, &snapped)?;
        if n <= 0.0 {
            continue;
        }
        let (_, g) = norm_grad(s, &snapped)?;
        upper = upper.min(dual_upper(a, &g));
        upper = upper.min(dual_upper(a, &permutohedron_adjust(a, &g, &blocks)));
        let v = dot(a, &snapped) / n;
        if v > lower {
            lower = v;
            xs = snapped;
        }
    }
    Ok((lower, xs, upper))
}

fn tail_sums(c: &[f64]) -> Vec<f64> {
    let mut out = vec![0.0; c.len()];
    let mut acc = 0.0;
    for k in (0..c.len()).rev() {
        acc += c[k];
        out[k] = acc;
    }
    out
}

/// Inverse of [`tail_sums`] for a nonincreasing vector.
fn differences(x: &[f64]) -> Vec<f64> {
    (0..x.len())
        .map(|k| x[k] - x.get(k + 1).copied().unwrap_or(0.0))
        .collect()
}

fn dual_start(a: &[f64], idx: usize, rng: &mut rand_chacha::ChaCha8Rng) -> Vec<f64> {
    let k = a.len();
    match idx {
        0 => a.to_vec(),
        1 => vec![1.0; k],
        2 => a.iter().map(|v| powf(*v, 0.5)).collect(),
        3 => a.iter().map(|v| v * v).collect(),
        4 => {
            let mut e = vec![0.0; k];
            e[0] = 1.0;
            e
        }
        _ => {
            let mut v = crate::rng::uniform_vec(rng, k, 0.0, 1.0);
            v.sort_by(|x, y| y.partial_cmp(x).unwrap_or(core::cmp::Ordering::Equal));
            v
        }
    }
}

/// Replaces runs of entries within relative `tol` of their neighbours by the
/// run mean. Returns the snapped vector and the runs as index ranges.
fn snap_blocks(x: &[f64], tol: f64) -> (Vec<f64>, Vec<core::ops::Range<usize>>) {
    let scale = crate::math::max_abs(x);
    let mut out = x.to_vec();
    let mut blocks = Vec::new();
    let mut start = 0;
    for i in 1..=x.len() {
        if i == x.len() || abs(x[i] - x[i - 1]) > tol * scale {
            if i - start > 1 {
                let mean = x[start..i].iter().sum::<f64>() / (i - start) as f64;
                for v in &mut out[start..i] {
                    *v = mean;
                }
                blocks.push(start..i);
            }
            start = i;
        }
    }
    (out, blocks)
}

/// Moves `g` inside each tied block towards the shape of `a`.
///
/// At a point whose entries tie on a block, every vector majorized by the
/// block of `g` (its permutohedron) is again a subgradient. With both
/// sequences nonincreasing, the pointwise minimum of their prefix-sum curves
/// is concave, so its increments stay nonincreasing and majorized by `g`.
fn permutohedron_adjust(a: &[f64], g: &[f64], blocks: &[core::ops::Range<usize>]) -> Vec<f64> {
    let mut out = g.to_vec();
    for b in blocks {
        let gb = &g[b.clone()];
        let ab = &a[b.clone()];
        let (gs, as_): (f64, f64) = (gb.iter().sum(), ab.iter().sum());
        if as_ <= 0.0 || gb.windows(2).any(|w| w[0] < w[1]) || ab.windows(2).any(|w| w[0] < w[1]) {
            continue;
        }
        let (mut pg, mut pt, mut prev) = (0.0, 0.0, 0.0);
        for (k, i) in b.clone().enumerate() {
            pg += gb[k];
            pt += ab[k] * gs / as_;
            let m = if pg < pt { pg } else { pt };
            out[i] = m - prev;
            prev = m;
        }
    }
    out
}

/// `min_t |t| + |a - t g|_1`, an upper bound on the dual norm of `a` when `g`
/// is a subgradient of the norm at a unit vector.
///
/// `|g|_* = 1` for such `g`, and `|v|_* <= |v|_1` because the unit ball of a
/// normalized symmetric norm sits inside the `l_inf` ball.
pub(crate) fn dual_upper(a: &[f64], g: &[f64]) -> f64 {
    let f = |t: f64| {
        abs(t)
            + a.iter()
                .zip(g)
                .map(|(ai, gi)| abs(ai - t * gi))
                .sum::<f64>()
    };
    let mut best = f(0.0);
    for (ai, gi) in a.iter().zip(g) {
        if *gi != 0.0 {
            best = best.min(f(ai / gi));
        }
    }
    best
}

#[cfg(test)]
fn conjugate_closed_form(p: crate::Exponent, y: &[f64]) -> f64 {
    super::norm::lp_norm(p.conjugate(), y)
}
