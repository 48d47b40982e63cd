use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// An exponent `p` in `[1, inf]`; infinity is a distinguished value.
#[derive(Clone, Copy, Debug, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(
    try_from = "crate::serde_ext::ExtF64",
    into = "crate::serde_ext::ExtF64"
)]
pub struct Exponent(f64);

impl Exponent {
    pub const ONE: Exponent = Exponent(1.0);
    pub const TWO: Exponent = Exponent(2.0);
    pub const INFINITY: Exponent = Exponent(f64::INFINITY);

    pub fn new(p: f64) -> Result<Self> {
        if p.is_nan() || p < 1.0 {
            return Err(Error::ExponentRange(p));
        }
        Ok(Exponent(p))
    }

    /// Builds the exponent whose reciprocal is `r` (`r = 0` gives infinity).
    pub fn from_recip(r: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&r) {
            return Err(Error::ExponentRange(1.0 / r));
        }
        if r == 0.0 {
            Ok(Self::INFINITY)
        } else {
            Self::new(1.0 / r)
        }
    }

    pub fn value(self) -> f64 {
        self.0
    }

    pub fn is_infinite(self) -> bool {
        self.0.is_infinite()
    }

    /// `1/p`, with `1/inf = 0`.
    pub fn recip(self) -> f64 {
        if self.is_infinite() {
            0.0
        } else {
            1.0 / self.0
        }
    }

    /// The conjugate exponent `p*` with `1/p + 1/p* = 1`.
    pub fn conjugate(self) -> Exponent {
        if self.0 == 1.0 {
            Self::INFINITY
        } else if self.is_infinite() {
            Self::ONE
        } else {
            Exponent(self.0 / (self.0 - 1.0))
        }
    }
}

impl TryFrom<crate::serde_ext::ExtF64> for Exponent {
    type Error = Error;

    fn try_from(v: crate::serde_ext::ExtF64) -> Result<Self> {
        Exponent::new(v.0)
    }
}

impl From<Exponent> for crate::serde_ext::ExtF64 {
    fn from(p: Exponent) -> Self {
        crate::serde_ext::ExtF64(p.0)
    }
}

impl core::fmt::Display for Exponent {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        if self.is_infinite() {
            f.write_str("inf")
        } else {
            write!(f, "{}", self.0)
        }
    }
}
