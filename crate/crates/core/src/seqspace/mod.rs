//! Symmetric sequence spaces on finitely supported vectors.
//!
//! A [`SpaceSpec`] is a symbolic description; its norm is evaluated on a
//! plain `&[f64]`, read as a sequence padded with zeros. Every space is
//! normalized so that the first unit vector has norm one.

mod convexity;
mod dual;
mod norm;

use alloc::boxed::Box;
use alloc::format;
use alloc::vec::Vec;
use core::fmt;

use serde::{Deserialize, Serialize};

use crate::math::{expm1, powf};
use crate::{Budget, Error, Exponent, Result};

pub use convexity::{
    convexity_probe, family_ratio, orlicz_condition_check, ConditionMode, ConvexityReport,
    Direction, GridCheck, Violation,
};
pub use dual::{kothe_dual_norm, kothe_dual_norm_with, DualOptions};
pub use norm::{ball_project, norm, norm_grad, rearrange, rearrangement_order};

/// An Orlicz function `G`: convex, nondecreasing, `G(0) = 0`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum OrliczFn {
    /// `t^k` with `k >= 1`.
    Power { k: f64 },
    /// `e^t - 1`.
    ExpMinusOne,
}

impl OrliczFn {
    pub fn power(k: f64) -> Result<Self> {
        let g = OrliczFn::Power { k };
        g.validate()?;
        Ok(g)
    }

    pub fn eval(&self, t: f64) -> f64 {
        match *self {
            OrliczFn::Power { k } => {
                if t == 0.0 {
                    0.0
                } else {
                    powf(t, k)
                }
            }
            OrliczFn::ExpMinusOne => expm1(t),
        }
    }

    pub fn derivative(&self, t: f64) -> f64 {
        match *self {
            OrliczFn::Power { k } => {
                if k == 1.0 {
                    1.0
                } else if t == 0.0 {
                    0.0
                } else {
                    k * powf(t, k - 1.0)
                }
            }
            OrliczFn::ExpMinusOne => crate::math::exp(t),
        }
    }

    /// Checks `G(0) = 0`, monotonicity and convexity on a log-spaced grid.
    pub fn validate(&self) -> Result<()> {
        if let OrliczFn::Power { k } = *self {
            if !(k >= 1.0) || !k.is_finite() {
                return Err(Error::InvalidOrlicz(format!(
                    "power {k} must be finite and >= 1"
                )));
            }
        }
        if self.eval(0.0) != 0.0 {
            return Err(Error::InvalidOrlicz(format!("G(0) = {}", self.eval(0.0))));
        }
        let grid = log_grid(1e-3, 1e2, 97);
        let vals: Vec<f64> = grid.iter().map(|t| self.eval(*t)).collect();
        let mut prev_slope = 0.0;
        let mut prev_t = 0.0;
        let mut prev_v = 0.0;
        for (t, v) in grid.iter().zip(&vals) {
            let slope = (v - prev_v) / (t - prev_t);
            if slope < 0.0 {
                return Err(Error::InvalidOrlicz(format!("decreasing near t = {t}")));
            }
            if slope < prev_slope * (1.0 - 1e-9) - 1e-12 {
                return Err(Error::InvalidOrlicz(format!("not convex near t = {t}")));
            }
            prev_slope = slope;
            prev_t = *t;
            prev_v = *v;
        }
        Ok(())
    }
}

impl fmt::Display for OrliczFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OrliczFn::Power { k } => write!(f, "pow{k}"),
            OrliczFn::ExpMinusOne => f.write_str("exp"),
        }
    }
}

pub(crate) fn log_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    let (a, b) = (crate::math::ln(lo), crate::math::ln(hi));
    (0..n)
        .map(|i| crate::math::exp(a + (b - a) * i as f64 / (n - 1) as f64))
        .collect()
}

/// How a [`WeightSeq`] was generated.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum WeightFamily {
    /// `w_k = 1/k`
    Harmonic,
    /// `w_k = 1`
    Ones,
    /// `w_k = r^(k-1)`, `0 < r <= 1`
    Geometric {
        r: f64,
    },
    Explicit,
}

/// A truncated weight sequence `w_1 >= w_2 >= ... > 0`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "WeightSeqRaw")]
pub struct WeightSeq {
    #[serde(flatten)]
    family: WeightFamily,
    weights: Vec<f64>,
}

#[derive(Deserialize)]
struct WeightSeqRaw {
    #[serde(flatten)]
    family: WeightFamily,
    weights: Vec<f64>,
}

impl TryFrom<WeightSeqRaw> for WeightSeq {
    type Error = Error;

    fn try_from(raw: WeightSeqRaw) -> Result<Self> {
        let mut w = WeightSeq::explicit(raw.weights)?;
        w.family = raw.family;
        Ok(w)
    }
}

impl WeightSeq {
    pub fn harmonic(n: usize) -> Result<Self> {
        Self::generated(WeightFamily::Harmonic, n, |k| 1.0 / (k + 1) as f64)
    }

    pub fn ones(n: usize) -> Result<Self> {
        Self::generated(WeightFamily::Ones, n, |_| 1.0)
    }

    pub fn geometric(r: f64, n: usize) -> Result<Self> {
        if !(r > 0.0 && r <= 1.0) {
            return Err(Error::InvalidWeights(format!(
                "geometric ratio {r} outside (0, 1]"
            )));
        }
        Self::generated(WeightFamily::Geometric { r }, n, |k| powf(r, k as f64))
    }

    pub fn explicit(weights: Vec<f64>) -> Result<Self> {
        if weights.is_empty() {
            return Err(Error::InvalidWeights("empty".into()));
        }
        for (k, w) in weights.iter().enumerate() {
            if !(w.is_finite() && *w > 0.0) {
                return Err(Error::InvalidWeights(format!(
                    "w[{k}] = {w} is not positive"
                )));
            }
            if k > 0 && *w > weights[k - 1] {
                return Err(Error::InvalidWeights(format!("increase at index {k}")));
            }
        }
        Ok(WeightSeq {
            family: WeightFamily::Explicit,
            weights,
        })
    }

    fn generated(family: WeightFamily, n: usize, f: impl Fn(usize) -> f64) -> Result<Self> {
        let mut w = Self::explicit((0..n).map(f).collect())?;
        w.family = family;
        Ok(w)
    }

    pub fn family(&self) -> WeightFamily {
        self.family
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }
}

impl fmt::Display for WeightSeq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.family {
            WeightFamily::Harmonic => f.write_str("harmonic"),
            WeightFamily::Ones => f.write_str("ones"),
            WeightFamily::Geometric { r } => write!(f, "geom({r})"),
            WeightFamily::Explicit => f.write_str("explicit"),
        }
    }
}

/// The Orlicz-Lorentz space `lambda_{w,G}` with its Luxemburg gauge.
///
/// `scale` is the reciprocal gauge of the first unit vector, fixed at
/// construction so that `|e_1| = 1`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "OrliczLorentzRaw")]
pub struct OrliczLorentz {
    g: OrliczFn,
    w: WeightSeq,
    #[serde(skip_serializing)]
    scale: f64,
}

#[derive(Deserialize)]
struct OrliczLorentzRaw {
    g: OrliczFn,
    w: WeightSeq,
}

impl TryFrom<OrliczLorentzRaw> for OrliczLorentz {
    type Error = Error;

    fn try_from(raw: OrliczLorentzRaw) -> Result<Self> {
        OrliczLorentz::new(raw.g, raw.w)
    }
}

impl OrliczLorentz {
    pub fn new(g: OrliczFn, w: WeightSeq) -> Result<Self> {
        g.validate()?;
        let mut s = OrliczLorentz { g, w, scale: 1.0 };
        let e1 = norm::luxemburg_gauge(&s, &[1.0])?;
        s.scale = 1.0 / e1;
        Ok(s)
    }

    pub fn g(&self) -> OrliczFn {
        self.g
    }

    pub fn w(&self) -> &WeightSeq {
        &self.w
    }

    pub fn scale(&self) -> f64 {
        self.scale
    }
}

/// A symmetric sequence space.
///
/// `KotheDual` and `GeneralizedDual` are evaluated by optimization unless
/// they reduce to a known `l_p` space; `numeric` disables that reduction
/// and `budget` sets the effort of each nested evaluation.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SpaceSpec {
    Lp {
        p: Exponent,
    },
    OrliczLorentz(OrliczLorentz),
    /// `E^p` with `|x|_{E^p} = | |x|^p |_E^(1/p)`.
    Convexification {
        base: Box<SpaceSpec>,
        p: Exponent,
    },
    /// `E^x`.
    KotheDual {
        base: Box<SpaceSpec>,
        #[serde(default)]
        numeric: bool,
        #[serde(default = "nested_budget")]
        budget: Budget,
    },
    /// `E^F = { x : x * y in F for all y in E }`.
    GeneralizedDual {
        e: Box<SpaceSpec>,
        f: Box<SpaceSpec>,
        #[serde(default)]
        numeric: bool,
        #[serde(default = "nested_budget")]
        budget: Budget,
    },
}

fn nested_budget() -> Budget {
    Budget::NESTED
}

impl SpaceSpec {
    pub fn lp(p: f64) -> Result<Self> {
        Ok(SpaceSpec::Lp {
            p: Exponent::new(p)?,
        })
    }

    pub fn lp_exp(p: Exponent) -> Self {
        SpaceSpec::Lp { p }
    }

    pub fn l1() -> Self {
        SpaceSpec::lp_exp(Exponent::ONE)
    }

    pub fn l2() -> Self {
        SpaceSpec::lp_exp(Exponent::TWO)
    }

    pub fn linf() -> Self {
        SpaceSpec::lp_exp(Exponent::INFINITY)
    }

    pub fn orlicz_lorentz(g: OrliczFn, w: WeightSeq) -> Result<Self> {
        Ok(SpaceSpec::OrliczLorentz(OrliczLorentz::new(g, w)?))
    }

    pub fn convexify(base: SpaceSpec, p: f64) -> Result<Self> {
        let p = Exponent::new(p)?;
        if p.is_infinite() {
            return Err(Error::InvalidArgument(
                "convexification needs a finite exponent".into(),
            ));
        }
        Ok(SpaceSpec::Convexification {
            base: Box::new(base),
            p,
        })
    }

    /// The Köthe dual `E^x` as a space of its own (no simplification).
    pub fn kothe_dual(base: SpaceSpec) -> Self {
        SpaceSpec::KotheDual {
            base: Box::new(base),
            numeric: false,
            budget: Budget::NESTED,
        }
    }

    pub fn generalized_dual(e: SpaceSpec, f: SpaceSpec) -> Self {
        SpaceSpec::GeneralizedDual {
            e: Box::new(e),
            f: Box::new(f),
            numeric: false,
            budget: Budget::NESTED,
        }
    }

    /// Forces numerical evaluation of a dual space, ignoring closed forms.
    pub fn numeric(self, budget: Budget) -> Self {
        match self {
            SpaceSpec::KotheDual { base, .. } => SpaceSpec::KotheDual {
                base,
                numeric: true,
                budget,
            },
            SpaceSpec::GeneralizedDual { e, f, .. } => SpaceSpec::GeneralizedDual {
                e,
                f,
                numeric: true,
                budget,
            },
            other => other,
        }
    }

    /// The exponent `p` when this space is isometrically `l_p` by a closed form.
    pub fn lp_exponent(&self) -> Option<Exponent> {
        match self {
            SpaceSpec::Lp { p } => Some(*p),
            SpaceSpec::OrliczLorentz(_) => None,
            SpaceSpec::Convexification { base, p } => {
                let q = base.lp_exponent()?;
                Exponent::new(q.value() * p.value()).ok()
            }
            SpaceSpec::KotheDual { base, numeric, .. } => {
                if *numeric {
                    return None;
                }
                base.lp_exponent().map(Exponent::conjugate)
            }
            SpaceSpec::GeneralizedDual { e, f, numeric, .. } => {
                if *numeric {
                    return None;
                }
                let pe = e.lp_exponent();
                let pf = f.lp_exponent();
                match (pe, pf) {
                    (Some(p), Some(r)) => Some(crate::kothe::closed_form_dual_exponent(p, r)),
                    _ => None,
                }
            }
        }
    }

    pub fn is_lp(&self, p: f64) -> bool {
        self.lp_exponent().is_some_and(|e| e.value() == p)
    }

    /// The Köthe dual, simplified through closed forms and `E^xx = E`.
    pub fn dual(&self) -> SpaceSpec {
        if let Some(p) = self.lp_exponent() {
            return SpaceSpec::lp_exp(p.conjugate());
        }
        match self {
            SpaceSpec::KotheDual {
                base,
                numeric: false,
                ..
            } => (**base).clone(),
            _ => SpaceSpec::kothe_dual(self.clone()),
        }
    }

    /// Longest vector the space can evaluate (weight length for Orlicz-Lorentz).
    pub fn max_dim(&self) -> Option<usize> {
        match self {
            SpaceSpec::Lp { .. } => None,
            SpaceSpec::OrliczLorentz(ol) => Some(ol.w.len()),
            SpaceSpec::Convexification { base, .. } | SpaceSpec::KotheDual { base, .. } => {
                base.max_dim()
            }
            SpaceSpec::GeneralizedDual { e, f, .. } => match (e.max_dim(), f.max_dim()) {
                (Some(a), Some(b)) => Some(a.min(b)),
                (a, b) => a.or(b),
            },
        }
    }

    pub(crate) fn check_dim(&self, n: usize) -> Result<()> {
        match self.max_dim() {
            Some(max) if n > max => Err(Error::TooLong { len: n, max }),
            _ => Ok(()),
        }
    }

    /// True when the norm (and its gradient) is computed by a closed form or a
    /// bisection, not by a nested optimization.
    pub fn is_direct(&self) -> bool {
        match self {
            SpaceSpec::Lp { .. } | SpaceSpec::OrliczLorentz(_) => true,
            SpaceSpec::Convexification { base, .. } => base.is_direct(),
            SpaceSpec::KotheDual { .. } | SpaceSpec::GeneralizedDual { .. } => {
                self.lp_exponent().is_some()
            }
        }
    }

    pub fn norm(&self, x: &[f64]) -> Result<f64> {
        norm::norm(self, x)
    }
}

impl fmt::Display for SpaceSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SpaceSpec::Lp { p } => write!(f, "lp:{p}"),
            SpaceSpec::OrliczLorentz(ol) => {
                write!(f, "lorentz:G={},w={},n={}", ol.g, ol.w, ol.w.len())
            }
            SpaceSpec::Convexification { base, p } => write!(f, "convexify({base},p={p})"),
            SpaceSpec::KotheDual { base, .. } => write!(f, "dual({base})"),
            SpaceSpec::GeneralizedDual { e, f: ff, .. } => write!(f, "gdual({e},{ff})"),
        }
    }
}
