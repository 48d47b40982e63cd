use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

/// Iteration budget for multistart local searches.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Budget {
    pub starts: usize,
    pub iters: usize,
}

impl Budget {
    pub const fn new(starts: usize, iters: usize) -> Self {
        Budget { starts, iters }
    }

    /// 32 starts x 500 steps, used for generalized Köthe dual norms.
    pub const DUAL: Budget = Budget::new(32, 500);
    /// 64 starts x 300 steps, used for operator norms.
    pub const OPNORM: Budget = Budget::new(64, 300);
    /// Budget used when a dual space appears nested inside another computation.
    pub const NESTED: Budget = Budget::new(8, 150);
}

impl Default for Budget {
    fn default() -> Self {
        Budget::DUAL
    }
}

/// Which route produced a [`NormBounds`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    Zero,
    ClosedForm,
    /// Fatou identity `E^xx = E`.
    Bidual,
    ColumnMax,
    RowDualMax,
    Spectral,
    Multistart,
    DualAscent,
    AlternatingPower,
    Decomposition,
    Gamma2FixedPoint,
    EntryFloor,
    Sampled,
}

/// Numerical warnings attached to a result.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "flag", rename_all = "snake_case")]
pub enum Flag {
    /// Relative gap `upper/lower - 1` is above the acceptance threshold.
    NotConverged { gap: f64 },
    /// Best value reached by a single start while the runners-up differ by `spread`.
    FlakyLandscape { spread: f64 },
    /// Upper bound is far from the lower bound (ratio `upper/lower`).
    WideInterval {
        #[serde(with = "crate::serde_ext")]
        ratio: f64,
    },
}

/// An interval `[lower, upper]` enclosing a norm, with the witness attaining `lower`.
///
/// The meaning of `witness` depends on the producing operation (a vector
/// of the unit ball, a concatenated pair, a flattened matrix); each operation
/// documents it. `certified` is true when `upper` follows from an inequality
/// rather than from the best value of a local search.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NormBounds {
    pub lower: f64,
    #[serde(with = "crate::serde_ext")]
    pub upper: f64,
    pub method: Method,
    pub witness: Vec<f64>,
    pub certified: bool,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub flags: Vec<Flag>,
}

impl NormBounds {
    pub fn exact(value: f64, method: Method, witness: Vec<f64>) -> Self {
        NormBounds {
            lower: value,
            upper: value,
            method,
            witness,
            certified: true,
            flags: Vec::new(),
        }
    }

    pub fn zero(dim: usize) -> Self {
        let mut w = alloc::vec![0.0; dim.max(1)];
        w[0] = 1.0;
        Self::exact(0.0, Method::Zero, w)
    }

    /// Midpoint of the interval, or `lower` if the interval is unbounded.
    pub fn value(&self) -> f64 {
        if self.upper.is_finite() {
            0.5 * (self.lower + self.upper)
        } else {
            self.lower
        }
    }

    /// Relative gap `upper / lower - 1` (0 for the zero norm).
    pub fn gap(&self) -> f64 {
        if self.upper == self.lower {
            0.0
        } else if self.lower <= 0.0 {
            f64::INFINITY
        } else {
            self.upper / self.lower - 1.0
        }
    }

    pub fn is_exact(&self) -> bool {
        self.certified && self.lower == self.upper
    }

    /// True when both intervals intersect after widening each by `rel` (relative).
    pub fn overlaps(&self, other: &NormBounds, rel: f64) -> bool {
        let (a_lo, a_hi) = (self.lower * (1.0 - rel), self.upper * (1.0 + rel));
        let (b_lo, b_hi) = (other.lower * (1.0 - rel), other.upper * (1.0 + rel));
        a_lo <= b_hi && b_lo <= a_hi
    }

    pub fn has_flags(&self) -> bool {
        !self.flags.is_empty()
    }

    pub(crate) fn push_flag(&mut self, flag: Flag) {
        if !self.flags.contains(&flag) {
            self.flags.push(flag);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn overlap_with_widening() {
        let a = NormBounds::exact(1.0, Method::ClosedForm, alloc::vec![1.0]);
        let b = NormBounds::exact(1.0005, Method::ClosedForm, alloc::vec![1.0]);
        assert!(!a.overlaps(&b, 0.0));
        assert!(a.overlaps(&b, 1e-3));
    }

    #[test]
    fn infinite_upper_round_trips_through_json() {
        let mut b = NormBounds::exact(2.0, Method::Sampled, alloc::vec![0.5, 0.5]);
        b.upper = f64::INFINITY;
        b.certified = false;
        let s = serde_json::to_string(&b).unwrap();
        assert!(s.contains("\"inf\""));
        let back: NormBounds = serde_json::from_str(&s).unwrap();
        assert_eq!(back, b);
    }
}
