//! Normalized gradient ascent for ratios of positively homogeneous functions.
//!
//! Every norm-type supremum in the crate has the form
//! `sup num(x) / den(x)` with both sides homogeneous of degree one, so the
//! search runs on rays: steps are measured relative to `|x|_2` and the
//! iterate is renormalized to `den(x) = 1` after each accepted step.

use alloc::vec::Vec;

#[cfg(test)]
use crate::math::dot;
use crate::math::norm2;
use crate::Result;

/// A value together with its (sub)gradient.
pub(crate) type Eval = (f64, Vec<f64>);

#[derive(Clone, Debug)]
pub(crate) struct Ascent {
    pub value: f64,
    /// Maximizer scaled so that `den(x) = 1`.
    pub x: Vec<f64>,
}

/// Locally maximizes `num(x) / den(x)` starting from `start`.
///
/// With `nonneg` the iterate is clipped to the nonnegative orthant. Returns
/// `None` when the start is degenerate (`den = 0` or a zero vector).
pub(crate) fn maximize_ratio<N, D>(
    num: &mut N,
    den: &mut D,
    start: &[f64],
    nonneg: bool,
    iters: usize,
) -> Result<Option<Ascent>>
where
    N: FnMut(&[f64]) -> Result<Eval>,
    D: FnMut(&[f64]) -> Result<Eval>,
{
    let mut x: Vec<f64> = if nonneg {
        start.iter().map(|v| v.max(0.0)).collect()
    } else {
        start.to_vec()
    };
    let Some((mut r, mut gn, mut gd, mut d)) = ratio_at(num, den, &mut x)? else {
        return Ok(None);
    };
    let mut eta: f64 = 0.25;
    let mut trial = Vec::with_capacity(x.len());
    for _ in 0..iters {
        // gradient of num/den at den(x) = 1
        let mut g: Vec<f64> = gn.iter().zip(&gd).map(|(a, b)| (a - r * b) / d).collect();
        if nonneg {
            // projected direction: drop components pushing through the boundary
            for (gi, xi) in g.iter_mut().zip(&x) {
                if *xi <= 0.0 && *gi < 0.0 {
                    *gi = 0.0;
                }
            }
        }
        let gnorm = norm2(&g);
        if gnorm == 0.0 {
            break;
        }
        let scale = eta * norm2(&x) / gnorm;
        trial.clear();
        trial.extend(x.iter().zip(&g).map(|(xi, gi)| xi + scale * gi));
        if nonneg {
            for v in trial.iter_mut() {
                *v = v.max(0.0);
            }
        }
        match ratio_at(num, den, &mut trial)? {
            Some((rt, gnt, gdt, dt)) if rt > r => {
                core::mem::swap(&mut x, &mut trial);
                r = rt;
                gn = gnt;
                gd = gdt;
                d = dt;
                eta = (eta * 2.0).min(1.0);
            }
            _ => {
                eta *= 0.5;
                if eta < 1e-12 {
                    break;
                }
            }
        }
    }
    Ok(Some(Ascent { value: r, x }))
}

/// Evaluates the ratio at `x` and rescales `x` in place so that `den(x) = 1`.
#[allow(clippy::type_complexity)]
fn ratio_at<N, D>(
    num: &mut N,
    den: &mut D,
    x: &mut [f64],
) -> Result<Option<(f64, Vec<f64>, Vec<f64>, f64)>>
where
    N: FnMut(&[f64]) -> Result<Eval>,
    D: FnMut(&[f64]) -> Result<Eval>,
{
    if crate::math::is_zero(x) {
        return Ok(None);
    }
    let (d0, _) = den(x)?;
    if !(d0 > 0.0) || !d0.is_finite() {
        return Ok(None);
    }
    for v in x.iter_mut() {
        *v /= d0;
    }
    let (n, gn) = num(x)?;
    let (d, gd) = den(x)?;
    if !(d > 0.0) || !n.is_finite() {
        return Ok(None);
    }
    Ok(Some((n / d, gn, gd, d)))
}

/// `<a, x>` with gradient `a`, used for linear numerators.
#[cfg(test)]
pub(crate) fn linear(a: &[f64]) -> impl FnMut(&[f64]) -> Result<Eval> + '_ {
    move |x: &[f64]| Ok((dot(a, x), a.to_vec()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn l2(x: &[f64]) -> Result<Eval> {
        let n = norm2(x);
        Ok((n, x.iter().map(|v| v / n).collect()))
    }

    #[test]
    fn linear_over_l2_ball_reaches_dual_norm() {
        let a = [3.0, 4.0];
        let mut num = linear(&a);
        let mut den = l2;
        let out = maximize_ratio(&mut num, &mut den, &[1.0, 0.0], false, 200)
            .unwrap()
            .unwrap();
        assert!((out.value - 5.0).abs() < 1e-9);
        assert!((norm2(&out.x) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn nonneg_clip_is_respected() {
        let a = [-1.0, 1.0];
        let mut num = linear(&a);
        let mut den = l2;
        let out = maximize_ratio(&mut num, &mut den, &[1.0, 1.0], true, 200)
            .unwrap()
            .unwrap();
        assert!(out.x.iter().all(|v| *v >= 0.0));
        assert!((out.value - 1.0).abs() < 1e-9);
    }

    #[test]
    fn degenerate_start_is_skipped() {
        let a = [1.0];
        let mut num = linear(&a);
        let mut den = l2;
        assert!(maximize_ratio(&mut num, &mut den, &[0.0], false, 10)
            .unwrap()
            .is_none());
    }
}
