use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Interpolation parameter `p` of the weighted means, restricted to `[0, 1]`.
#[derive(Clone, Copy, Debug, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(try_from = "f64", into = "f64")]
pub struct Weight(f64);

impl Weight {
    pub const ZERO: Weight = Weight(0.0);
    pub const HALF: Weight = Weight(0.5);
    pub const ONE: Weight = Weight(1.0);

    pub fn new(p: f64) -> Result<Self> {
        if (0.0..=1.0).contains(&p) {
            Ok(Weight(p))
        } else {
            Err(Error::InvalidWeight(p))
        }
    }

    #[inline]
    pub fn value(self) -> f64 {
        self.0
    }

    /// `1 - p`, the weight of the swapped pair.
    #[inline]
    pub fn complement(self) -> Weight {
        Weight(1.0 - self.0)
    }

    #[inline]
    pub fn is_zero(self) -> bool {
        self.0 == 0.0
    }

    #[inline]
    pub fn is_one(self) -> bool {
        self.0 == 1.0
    }

    /// True for `p` strictly inside `(0, 1)`.
    #[inline]
    pub fn is_interior(self) -> bool {
        self.0 > 0.0 && self.0 < 1.0
    }

    pub(crate) fn require_interior(self, what: &str) -> Result<()> {
        if self.is_interior() {
            Ok(())
        } else {
            Err(Error::Precondition(format!(
                "{what} requires p in (0, 1), got {}",
                self.0
            )))
        }
    }

    pub(crate) fn require_nonzero(self, what: &str) -> Result<()> {
        if self.is_zero() {
            Err(Error::Domain(format!(
                "{what} is undefined at p = 0; use the relative entropy instead"
            )))
        } else {
            Ok(())
        }
    }
}

impl TryFrom<f64> for Weight {
    type Error = Error;

    fn try_from(p: f64) -> Result<Self> {
        Weight::new(p)
    }
}

impl From<Weight> for f64 {
    fn from(w: Weight) -> f64 {
        w.0
    }
}

/// The grid `{0.1, 0.2, ..., 0.9}` used by the randomized suites.
pub fn interior_grid() -> Vec<Weight> {
    (1..=9).map(|k| Weight(k as f64 / 10.0)).collect()
}
