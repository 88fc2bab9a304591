//! Values in `ℝ ∪ {+∞}` with the conventions
//! `0·(+∞) = (+∞) − (+∞) = +∞`. There is no `−∞`: subtracting `+∞` yields
//! `+∞`, and so does negating it.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use serde::de::{self, Visitor};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum ExtendedReal {
    Finite(f64),
    Infinity,
}

pub use ExtendedReal::{Finite, Infinity};

impl ExtendedReal {
    pub const ZERO: ExtendedReal = Finite(0.0);

    /// Maps `f64::INFINITY` to `+∞`; `NaN` and `−∞` have no counterpart.
    pub fn from_f64(v: f64) -> Option<Self> {
        if v.is_finite() {
            Some(Finite(v))
        } else if v == f64::INFINITY {
            Some(Infinity)
        } else {
            None
        }
    }

    pub fn to_f64(self) -> f64 {
        match self {
            Finite(v) => v,
            Infinity => f64::INFINITY,
        }
    }

    pub fn is_finite(self) -> bool {
        matches!(self, Finite(_))
    }

    pub fn finite(self) -> Option<f64> {
        match self {
            Finite(v) => Some(v),
            Infinity => None,
        }
    }

    pub fn min(self, other: Self) -> Self {
        if other < self {
            other
        } else {
            self
        }
    }

    pub fn max(self, other: Self) -> Self {
        if other > self {
            other
        } else {
            self
        }
    }
}

impl From<f64> for ExtendedReal {
    /// Panics on `NaN` or `−∞`.
    fn from(v: f64) -> Self {
        ExtendedReal::from_f64(v).unwrap_or_else(|| panic!("{v} is not in ℝ ∪ {{+∞}}"))
    }
}

impl PartialOrd for ExtendedReal {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        match (self, other) {
            (Finite(a), Finite(b)) => a.partial_cmp(b),
            (Finite(_), Infinity) => Some(Ordering::Less),
            (Infinity, Finite(_)) => Some(Ordering::Greater),
            (Infinity, Infinity) => Some(Ordering::Equal),
        }
    }
}

impl Add for ExtendedReal {
    type Output = ExtendedReal;
    fn add(self, rhs: Self) -> Self {
        match (self, rhs) {
            (Finite(a), Finite(b)) => Finite(a + b),
            _ => Infinity,
        }
    }
}

impl Sub for ExtendedReal {
    type Output = ExtendedReal;
    /// `a − (+∞) = (+∞) − a = (+∞) − (+∞) = +∞`.
    fn sub(self, rhs: Self) -> Self {
        match (self, rhs) {
            (Finite(a), Finite(b)) => Finite(a - b),
            _ => Infinity,
        }
    }
}

impl Neg for ExtendedReal {
    type Output = ExtendedReal;
    /// `0 − x`.
    fn neg(self) -> Self {
        ExtendedReal::ZERO - self
    }
}

impl Mul<f64> for ExtendedReal {
    type Output = ExtendedReal;
    /// `c·(+∞) = +∞` for every real `c`, including `0`.
    fn mul(self, c: f64) -> Self {
        match self {
            Finite(a) => Finite(a * c),
            Infinity => Infinity,
        }
    }
}

impl Div<f64> for ExtendedReal {
    type Output = ExtendedReal;
    fn div(self, c: f64) -> Self {
        match self {
            Finite(a) => Finite(a / c),
            Infinity => Infinity,
        }
    }
}

impl fmt::Display for ExtendedReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Finite(v) => write!(f, "{v}"),
            Infinity => f.write_str("inf"),
        }
    }
}

impl Serialize for ExtendedReal {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            Finite(v) => s.serialize_f64(*v),
            Infinity => s.serialize_str("inf"),
        }
    }
}

impl<'de> Deserialize<'de> for ExtendedReal {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        struct V;
        impl Visitor<'_> for V {
            type Value = ExtendedReal;
            fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str("a finite number or \"inf\"")
            }
            fn visit_f64<E: de::Error>(self, v: f64) -> Result<ExtendedReal, E> {
                ExtendedReal::from_f64(v).ok_or_else(|| E::custom(format!("{v} is not allowed")))
            }
            fn visit_i64<E: de::Error>(self, v: i64) -> Result<ExtendedReal, E> {
                Ok(Finite(v as f64))
            }
            fn visit_u64<E: de::Error>(self, v: u64) -> Result<ExtendedReal, E> {
                Ok(Finite(v as f64))
            }
            fn visit_str<E: de::Error>(self, v: &str) -> Result<ExtendedReal, E> {
                match v {
                    "inf" | "+inf" => Ok(Infinity),
                    _ => Err(E::custom(format!("unexpected string {v:?}"))),
                }
            }
        }
        d.deserialize_any(V)
    }
}
