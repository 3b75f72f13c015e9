use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::Rational;

/// A closed rational interval `[lo, hi]` enclosing an unknown value.
///
/// Every operation returns an interval containing all results obtainable
/// from values inside the operands.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct MeasureBounds {
    pub lo: Rational,
    pub hi: Rational,
}

impl MeasureBounds {
    pub fn new(lo: Rational, hi: Rational) -> Result<Self> {
        if lo > hi {
            return Err(Error::pre(
                "MeasureBounds::new",
                format!("lo {lo} > hi {hi}"),
            ));
        }
        Ok(MeasureBounds { lo, hi })
    }

    pub fn exact(x: Rational) -> Self {
        MeasureBounds {
            lo: x.clone(),
            hi: x,
        }
    }

    pub fn zero() -> Self {
        Self::exact(Rational::zero())
    }

    pub fn is_exact(&self) -> bool {
        self.lo == self.hi
    }

    pub fn width(&self) -> Rational {
        &self.hi - &self.lo
    }

    pub fn center(&self) -> Rational {
        (&self.lo + &self.hi) / Rational::integer(2)
    }

    pub fn contains(&self, x: &Rational) -> bool {
        &self.lo <= x && x <= &self.hi
    }

    pub fn contains_bounds(&self, other: &MeasureBounds) -> bool {
        self.lo <= other.lo && other.hi <= self.hi
    }

    pub fn add(&self, other: &MeasureBounds) -> MeasureBounds {
        MeasureBounds {
            lo: &self.lo + &other.lo,
            hi: &self.hi + &other.hi,
        }
    }

    pub fn sub(&self, other: &MeasureBounds) -> MeasureBounds {
        MeasureBounds {
            lo: &self.lo - &other.hi,
            hi: &self.hi - &other.lo,
        }
    }

    pub fn shift(&self, c: &Rational) -> MeasureBounds {
        MeasureBounds {
            lo: &self.lo + c,
            hi: &self.hi + c,
        }
    }

    /// Multiplication by a scalar of either sign.
    pub fn scale(&self, c: &Rational) -> MeasureBounds {
        let a = &self.lo * c;
        let b = &self.hi * c;
        if a <= b {
            MeasureBounds { lo: a, hi: b }
        } else {
            MeasureBounds { lo: b, hi: a }
        }
    }

    /// Intersection with `[lo, hi]`; values known to lie in that range stay
    /// enclosed.
    pub fn clamp(&self, lo: &Rational, hi: &Rational) -> MeasureBounds {
        let l = self.lo.clone().max(lo.clone()).min(hi.clone());
        let h = self.hi.clone().min(hi.clone()).max(l.clone());
        MeasureBounds { lo: l, hi: h }
    }

    pub fn hull(&self, other: &MeasureBounds) -> MeasureBounds {
        MeasureBounds {
            lo: self.lo.clone().min(other.lo.clone()),
            hi: self.hi.clone().max(other.hi.clone()),
        }
    }

    /// Enclosure of `|x - r|` for `x` in `self`.
    pub fn abs_diff(&self, r: &Rational) -> MeasureBounds {
        if &self.hi < r {
            MeasureBounds {
                lo: r - &self.hi,
                hi: r - &self.lo,
            }
        } else if &self.lo > r {
            MeasureBounds {
                lo: &self.lo - r,
                hi: &self.hi - r,
            }
        } else {
            let a = r - &self.lo;
            let b = &self.hi - r;
            MeasureBounds {
                lo: Rational::zero(),
                hi: a.max(b),
            }
        }
    }
}

impl fmt::Debug for MeasureBounds {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", self.lo, self.hi)
    }
}

impl fmt::Display for MeasureBounds {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", self.lo, self.hi)
    }
}
