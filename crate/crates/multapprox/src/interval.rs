//! Certified enclosures `[lo, hi]` with dyadic endpoints.
//!
//! Ring operations are exact; widths only ever grow through genuinely
//! uncertain inputs or explicit compression. Every comparison either decides
//! from disjointness or reports that it cannot.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Signed;

use crate::dyadic::{Dyadic, Round};

/// A closed interval guaranteed to contain the represented real value.
#[derive(Clone, Debug, PartialEq)]
pub struct IntervalValue {
    lo: Dyadic,
    hi: Dyadic,
}

impl IntervalValue {
    pub fn new(lo: Dyadic, hi: Dyadic) -> IntervalValue {
        debug_assert!(lo <= hi, "interval endpoints out of order");
        IntervalValue { lo, hi }
    }

    pub fn point(v: Dyadic) -> IntervalValue {
        IntervalValue {
            lo: v.clone(),
            hi: v,
        }
    }

    pub fn from_int(n: impl Into<BigInt>) -> IntervalValue {
        IntervalValue::point(Dyadic::from_int(n))
    }

    /// Tightest dyadic enclosure of a rational at `bits` precision
    /// (exact when the rational is dyadic).
    pub fn from_ratio(r: &BigRational, bits: u32) -> IntervalValue {
        if let Some(d) = Dyadic::from_ratio_exact(r) {
            return IntervalValue::point(d);
        }
        IntervalValue {
            lo: Dyadic::from_ratio(r, bits, Round::Down),
            hi: Dyadic::from_ratio(r, bits, Round::Up),
        }
    }

    pub fn zero() -> IntervalValue {
        IntervalValue::point(Dyadic::zero())
    }

    pub fn lo(&self) -> &Dyadic {
        &self.lo
    }

    pub fn hi(&self) -> &Dyadic {
        &self.hi
    }

    pub fn width(&self) -> Dyadic {
        self.hi.sub(&self.lo)
    }

    pub fn mid(&self) -> Dyadic {
        self.lo.add(&self.hi).shift(-1)
    }

    pub fn is_point(&self) -> bool {
        self.lo == self.hi
    }

    pub fn contains(&self, v: &Dyadic) -> bool {
        &self.lo <= v && v <= &self.hi
    }

    pub fn contains_ratio(&self, r: &BigRational) -> bool {
        self.lo.to_ratio() <= *r && *r <= self.hi.to_ratio()
    }

    pub fn contains_interval(&self, other: &IntervalValue) -> bool {
        self.lo <= other.lo && other.hi <= self.hi
    }

    pub fn intersects(&self, other: &IntervalValue) -> bool {
        self.lo <= other.hi && other.lo <= self.hi
    }

    pub fn neg(&self) -> IntervalValue {
        IntervalValue {
            lo: self.hi.neg(),
            hi: self.lo.neg(),
        }
    }

    pub fn add(&self, other: &IntervalValue) -> IntervalValue {
        IntervalValue {
            lo: self.lo.add(&other.lo),
            hi: self.hi.add(&other.hi),
        }
    }

    pub fn sub(&self, other: &IntervalValue) -> IntervalValue {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &IntervalValue) -> IntervalValue {
        let cands = [
            self.lo.mul(&other.lo),
            self.lo.mul(&other.hi),
            self.hi.mul(&other.lo),
            self.hi.mul(&other.hi),
        ];
        let mut lo = cands[0].clone();
        let mut hi = cands[0].clone();
        for c in &cands[1..] {
            if *c < lo {
                lo = c.clone();
            }
            if *c > hi {
                hi = c.clone();
            }
        }
        IntervalValue { lo, hi }
    }

    pub fn mul_int(&self, k: &BigInt) -> IntervalValue {
        let a = self.lo.mul_int(k);
        let b = self.hi.mul_int(k);
        if k.is_negative() {
            IntervalValue { lo: b, hi: a }
        } else {
            IntervalValue { lo: a, hi: b }
        }
    }

    /// Exact product with 2^e.
    pub fn shift(&self, e: i64) -> IntervalValue {
        IntervalValue {
            lo: self.lo.shift(e),
            hi: self.hi.shift(e),
        }
    }

    /// Image of |x| over the interval.
    pub fn abs(&self) -> IntervalValue {
        if !self.lo.is_negative() {
            self.clone()
        } else if !self.hi.is_positive() {
            self.neg()
        } else {
            IntervalValue {
                lo: Dyadic::zero(),
                hi: self.lo.neg().max(self.hi.clone()),
            }
        }
    }

    /// Image of x^2 (tighter than `mul(self, self)` across zero).
    pub fn square(&self) -> IntervalValue {
        let a = self.abs();
        IntervalValue {
            lo: a.lo.square(),
            hi: a.hi.square(),
        }
    }

    /// Integer power by repeated squaring; exact. `n >= 1`.
    pub fn powi(&self, n: u32) -> IntervalValue {
        assert!(n >= 1);
        let mut acc: Option<IntervalValue> = None;
        let mut base = self.clone();
        let mut k = n;
        loop {
            if k & 1 == 1 {
                acc = Some(match acc {
                    None => base.clone(),
                    Some(a) => a.mul(&base),
                });
            }
            k >>= 1;
            if k == 0 {
                break;
            }
            base = base.square();
        }
        acc.unwrap()
    }

    /// Quotient; `other` must be bounded away from zero. Rounded outward
    /// to `bits` significant bits per endpoint.
    pub fn div(&self, other: &IntervalValue, bits: u32) -> IntervalValue {
        assert!(
            other.lo.is_positive() || other.hi.is_negative(),
            "interval division by a range containing zero"
        );
        let cands = [
            self.lo.div(&other.lo, bits, Round::Down),
            self.lo.div(&other.hi, bits, Round::Down),
            self.hi.div(&other.lo, bits, Round::Down),
            self.hi.div(&other.hi, bits, Round::Down),
        ];
        let lo = cands.iter().min().unwrap().clone();
        let cands = [
            self.lo.div(&other.lo, bits, Round::Up),
            self.lo.div(&other.hi, bits, Round::Up),
            self.hi.div(&other.lo, bits, Round::Up),
            self.hi.div(&other.hi, bits, Round::Up),
        ];
        let hi = cands.iter().max().unwrap().clone();
        IntervalValue { lo, hi }
    }

    /// Reciprocal at `bits` precision.
    pub fn recip(&self, bits: u32) -> IntervalValue {
        IntervalValue::from_int(1).div(self, bits)
    }

    /// Outward rounding of both endpoints to `bits` significant bits.
    pub fn compress(&self, bits: u32) -> IntervalValue {
        IntervalValue {
            lo: self.lo.round_to_bits(bits, Round::Down),
            hi: self.hi.round_to_bits(bits, Round::Up),
        }
    }

    /// Smallest interval containing both.
    pub fn hull(&self, other: &IntervalValue) -> IntervalValue {
        IntervalValue {
            lo: self.lo.clone().min(other.lo.clone()),
            hi: self.hi.clone().max(other.hi.clone()),
        }
    }

    /// Enclosure of min(x, y) for x in self, y in other.
    pub fn min_val(&self, other: &IntervalValue) -> IntervalValue {
        IntervalValue {
            lo: self.lo.clone().min(other.lo.clone()),
            hi: self.hi.clone().min(other.hi.clone()),
        }
    }

    /// Enclosure of max(x, y).
    pub fn max_val(&self, other: &IntervalValue) -> IntervalValue {
        IntervalValue {
            lo: self.lo.clone().max(other.lo.clone()),
            hi: self.hi.clone().max(other.hi.clone()),
        }
    }

    /// Certified strict comparison: `Some(true)` iff every x < every y,
    /// `Some(false)` iff every x >= every y, otherwise undecided.
    pub fn lt(&self, other: &IntervalValue) -> Option<bool> {
        if self.hi < other.lo {
            Some(true)
        } else if self.lo >= other.hi {
            Some(false)
        } else {
            None
        }
    }

    /// Certified non-strict comparison: `Some(true)` iff every x <= every y.
    pub fn le(&self, other: &IntervalValue) -> Option<bool> {
        if self.hi <= other.lo {
            Some(true)
        } else if self.lo > other.hi {
            Some(false)
        } else {
            None
        }
    }

    /// Certified comparison against an exact rational.
    pub fn cmp_ratio(&self, r: &BigRational) -> Option<Ordering> {
        if self.lo.to_ratio() > *r {
            Some(Ordering::Greater)
        } else if self.hi.to_ratio() < *r {
            Some(Ordering::Less)
        } else if self.is_point() && self.lo.to_ratio() == *r {
            Some(Ordering::Equal)
        } else {
            None
        }
    }
}

impl fmt::Display for IntervalValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", self.lo, self.hi)
    }
}
