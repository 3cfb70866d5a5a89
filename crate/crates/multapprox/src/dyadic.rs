//! Dyadic rationals `m * 2^e` with exact arithmetic and directed rounding.
//!
//! These are the endpoints of every certified interval in the crate. Addition,
//! multiplication and comparison are exact; precision is lost only through the
//! explicit directed-rounding operations, which round outward under the
//! caller's control.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Rounding direction for operations that cannot stay exact.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Round {
    /// Toward negative infinity.
    Down,
    /// Toward positive infinity.
    Up,
}

impl Round {
    pub fn flip(self) -> Round {
        match self {
            Round::Down => Round::Up,
            Round::Up => Round::Down,
        }
    }
}

/// A dyadic rational `mant * 2^exp`, kept canonical (`mant` odd or zero).
#[derive(Clone, Debug)]
pub struct Dyadic {
    mant: BigInt,
    exp: i64,
}

impl Dyadic {
    pub fn new(mant: BigInt, exp: i64) -> Dyadic {
        let mut d = Dyadic { mant, exp };
        d.normalize();
        d
    }

    pub fn zero() -> Dyadic {
        Dyadic {
            mant: BigInt::zero(),
            exp: 0,
        }
    }

    pub fn one() -> Dyadic {
        Dyadic {
            mant: BigInt::one(),
            exp: 0,
        }
    }

    pub fn from_int(n: impl Into<BigInt>) -> Dyadic {
        Dyadic::new(n.into(), 0)
    }

    /// 2^e.
    pub fn pow2(e: i64) -> Dyadic {
        Dyadic {
            mant: BigInt::one(),
            exp: e,
        }
    }

    fn normalize(&mut self) {
        if self.mant.is_zero() {
            self.exp = 0;
            return;
        }
        if let Some(tz) = self.mant.trailing_zeros() {
            if tz > 0 {
                self.mant >>= tz;
                self.exp += tz as i64;
            }
        }
    }

    pub fn mant(&self) -> &BigInt {
        &self.mant
    }

    pub fn exp(&self) -> i64 {
        self.exp
    }

    pub fn is_zero(&self) -> bool {
        self.mant.is_zero()
    }

    pub fn is_negative(&self) -> bool {
        self.mant.is_negative()
    }

    pub fn is_positive(&self) -> bool {
        self.mant.is_positive()
    }

    /// Number of significant bits of the mantissa.
    pub fn mant_bits(&self) -> u64 {
        self.mant.bits()
    }

    /// Exponent `k` with `2^(k-1) <= |self| < 2^k`, i.e. `k = floor(log2 |self|) + 1`.
    /// Zero has no magnitude; returns `None`.
    pub fn magnitude_exp(&self) -> Option<i64> {
        if self.mant.is_zero() {
            None
        } else {
            Some(self.mant.bits() as i64 + self.exp)
        }
    }

    pub fn neg(&self) -> Dyadic {
        Dyadic {
            mant: -&self.mant,
            exp: self.exp,
        }
    }

    pub fn abs(&self) -> Dyadic {
        Dyadic {
            mant: self.mant.abs(),
            exp: self.exp,
        }
    }

    pub fn add(&self, other: &Dyadic) -> Dyadic {
        if self.mant.is_zero() {
            return other.clone();
        }
        if other.mant.is_zero() {
            return self.clone();
        }
        let exp = self.exp.min(other.exp);
        let a = &self.mant << (self.exp - exp) as u64;
        let b = &other.mant << (other.exp - exp) as u64;
        Dyadic::new(a + b, exp)
    }

    pub fn sub(&self, other: &Dyadic) -> Dyadic {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Dyadic) -> Dyadic {
        Dyadic {
            mant: &self.mant * &other.mant,
            exp: self.exp + other.exp,
        }
    }

    pub fn mul_int(&self, k: &BigInt) -> Dyadic {
        Dyadic::new(&self.mant * k, self.exp)
    }

    pub fn square(&self) -> Dyadic {
        self.mul(self)
    }

    /// Exact product with 2^e.
    pub fn shift(&self, e: i64) -> Dyadic {
        if self.mant.is_zero() {
            return Dyadic::zero();
        }
        Dyadic {
            mant: self.mant.clone(),
            exp: self.exp + e,
        }
    }

    /// Rounds onto the grid `2^target_exp`, in the given direction.
    pub fn round_to_exp(&self, target_exp: i64, dir: Round) -> Dyadic {
        if self.exp >= target_exp || self.mant.is_zero() {
            return self.clone();
        }
        let shift = (target_exp - self.exp) as u64;
        let mant = match dir {
            // BigInt shr rounds toward negative infinity, matching primitives.
            Round::Down => &self.mant >> shift,
            Round::Up => -((-&self.mant) >> shift),
        };
        Dyadic::new(mant, target_exp)
    }

    /// Keeps at most `bits` significant mantissa bits, rounding in `dir`.
    pub fn round_to_bits(&self, bits: u32, dir: Round) -> Dyadic {
        let nbits = self.mant.bits();
        if nbits <= bits as u64 {
            return self.clone();
        }
        let target = self.exp + (nbits - bits as u64) as i64;
        self.round_to_exp(target, dir)
    }

    /// Quotient `self / other` rounded in `dir` to roughly `bits` significant bits.
    pub fn div(&self, other: &Dyadic, bits: u32, dir: Round) -> Dyadic {
        assert!(!other.mant.is_zero(), "division by zero dyadic");
        if self.mant.is_zero() {
            return Dyadic::zero();
        }
        // Scale the numerator so the integer quotient carries `bits + 2` bits.
        let extra = (bits as i64 + 2) - (self.mant.bits() as i64 - other.mant.bits() as i64);
        let extra = extra.max(0) as u64;
        let num = &self.mant << extra;
        let q = div_dir(&num, &other.mant, dir);
        Dyadic::new(q, self.exp - other.exp - extra as i64)
    }

    /// Converts an exact rational to a dyadic with `bits` significant bits.
    pub fn from_ratio(r: &BigRational, bits: u32, dir: Round) -> Dyadic {
        if r.numer().is_zero() {
            return Dyadic::zero();
        }
        let shift = (bits as i64 + 2) - (r.numer().bits() as i64 - r.denom().bits() as i64);
        let shift = shift.max(0) as u64;
        let num = r.numer() << shift;
        let q = div_dir(&num, r.denom(), dir);
        Dyadic::new(q, -(shift as i64))
    }

    /// Exact conversion when the rational is dyadic; `None` otherwise.
    pub fn from_ratio_exact(r: &BigRational) -> Option<Dyadic> {
        let den = r.denom();
        if den.is_one() {
            return Some(Dyadic::from_int(r.numer().clone()));
        }
        let tz = den.trailing_zeros()?;
        if (den >> tz).is_one() {
            Some(Dyadic::new(r.numer().clone(), -(tz as i64)))
        } else {
            None
        }
    }

    pub fn to_ratio(&self) -> BigRational {
        if self.exp >= 0 {
            BigRational::from_integer(&self.mant << self.exp as u64)
        } else {
            BigRational::new(self.mant.clone(), BigInt::one() << (-self.exp) as u64)
        }
    }

    /// Closest f64 (round direction unspecified); for reports and heuristics only.
    pub fn to_f64(&self) -> f64 {
        let bits = self.mant.bits() as i64;
        if bits <= 64 {
            return self.mant.to_f64().unwrap_or(f64::NAN) * pow2_f64(self.exp);
        }
        // Top 64 bits are enough for a double.
        let shift = bits - 64;
        let top = (&self.mant >> shift as u64).to_f64().unwrap_or(f64::NAN);
        top * pow2_f64(self.exp + shift)
    }

    /// Largest integer <= self.
    pub fn floor_int(&self) -> BigInt {
        if self.exp >= 0 {
            &self.mant << self.exp as u64
        } else {
            &self.mant >> (-self.exp) as u64
        }
    }

    /// Smallest integer >= self.
    pub fn ceil_int(&self) -> BigInt {
        -self.neg().floor_int()
    }

    pub fn is_integer(&self) -> bool {
        self.exp >= 0
    }

    pub fn min(self, other: Dyadic) -> Dyadic {
        if self <= other {
            self
        } else {
            other
        }
    }

    pub fn max(self, other: Dyadic) -> Dyadic {
        if self >= other {
            self
        } else {
            other
        }
    }

    /// Decimal rendering with `sig` significant digits, round-half-away.
    /// Deterministic; used for report cells.
    pub fn to_decimal(&self, sig: usize) -> String {
        if self.mant.is_zero() {
            return "0".to_string();
        }
        let neg = self.mant.is_negative();
        // dec_exp = floor(log10 |self|): start from the binary magnitude and correct.
        let mag2 = self.magnitude_exp().unwrap();
        let mut dec_exp = ((mag2 as f64 - 0.5) * std::f64::consts::LOG10_2).floor() as i64;
        let abs = self.abs();
        loop {
            if pow10_cmp(&abs, dec_exp + 1) != Ordering::Less {
                dec_exp += 1;
            } else if pow10_cmp(&abs, dec_exp) == Ordering::Less {
                dec_exp -= 1;
            } else {
                break;
            }
        }
        // digits = round(|self| * 10^(sig - 1 - dec_exp))
        let scale = sig as i64 - 1 - dec_exp;
        let mut scaled = abs.to_ratio();
        if scale >= 0 {
            scaled *= BigRational::from_integer(BigInt::from(10).pow(scale as u32));
        } else {
            scaled /= BigRational::from_integer(BigInt::from(10).pow((-scale) as u32));
        }
        let twice = &scaled + &scaled;
        let mut digits = (twice.numer() + twice.denom()).div_floor(&(twice.denom() << 1));
        let mut dstr = digits.to_string();
        if dstr.len() > sig {
            // rounding carried into an extra digit (e.g. 999.6 -> 1000)
            dec_exp += 1;
            digits = digits.div_floor(&BigInt::from(10));
            dstr = digits.to_string();
        }
        while dstr.len() < sig {
            dstr.insert(0, '0');
        }
        let sign = if neg { "-" } else { "" };
        if dec_exp >= -4 && dec_exp < sig as i64 + 4 {
            // plain notation
            if dec_exp >= 0 {
                let ip = dec_exp as usize + 1;
                if ip >= dstr.len() {
                    let zeros = "0".repeat(ip - dstr.len());
                    format!("{sign}{dstr}{zeros}")
                } else {
                    format!("{sign}{}.{}", &dstr[..ip], &dstr[ip..])
                }
            } else {
                let zeros = "0".repeat((-dec_exp - 1) as usize);
                format!("{sign}0.{zeros}{dstr}")
            }
        } else if dstr.len() == 1 {
            format!("{sign}{dstr}e{dec_exp}")
        } else {
            format!("{sign}{}.{}e{}", &dstr[..1], &dstr[1..], dec_exp)
        }
    }
}

/// Compares |d| with 10^k.
fn pow10_cmp(d: &Dyadic, k: i64) -> Ordering {
    let r = d.to_ratio();
    let p = if k >= 0 {
        BigRational::from_integer(BigInt::from(10).pow(k as u32))
    } else {
        BigRational::new(BigInt::one(), BigInt::from(10).pow((-k) as u32))
    };
    r.cmp(&p)
}

fn pow2_f64(e: i64) -> f64 {
    if e >= -1022 && e <= 1023 {
        f64::from_bits(((e + 1023) as u64) << 52)
    } else {
        (e as f64 * std::f64::consts::LN_2).exp()
    }
}

/// Integer quotient with directed rounding.
pub(crate) fn div_dir(num: &BigInt, den: &BigInt, dir: Round) -> BigInt {
    match dir {
        Round::Down => num.div_floor(den),
        Round::Up => num.div_ceil(den),
    }
}

impl PartialEq for Dyadic {
    fn eq(&self, other: &Self) -> bool {
        // canonical form makes this structural
        self.exp == other.exp && self.mant == other.mant
    }
}

impl Eq for Dyadic {}

impl PartialOrd for Dyadic {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Dyadic {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self.mant.sign(), other.mant.sign()) {
            (Sign::Minus, Sign::NoSign) | (Sign::Minus, Sign::Plus) | (Sign::NoSign, Sign::Plus) => {
                return Ordering::Less;
            }
            (Sign::Plus, Sign::NoSign) | (Sign::Plus, Sign::Minus) | (Sign::NoSign, Sign::Minus) => {
                return Ordering::Greater;
            }
            (Sign::NoSign, Sign::NoSign) => return Ordering::Equal,
            _ => {}
        }
        // Same nonzero sign: compare magnitudes cheaply before shifting.
        let ma = self.magnitude_exp().unwrap();
        let mb = other.magnitude_exp().unwrap();
        if ma != mb {
            let sign_pos = self.mant.is_positive();
            return if (ma < mb) == sign_pos {
                Ordering::Less
            } else {
                Ordering::Greater
            };
        }
        let exp = self.exp.min(other.exp);
        let a = &self.mant << (self.exp - exp) as u64;
        let b = &other.mant << (other.exp - exp) as u64;
        a.cmp(&b)
    }
}

impl fmt::Display for Dyadic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_decimal(17))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn d(m: i64, e: i64) -> Dyadic {
        Dyadic::new(BigInt::from(m), e)
    }

    #[test]
    fn canonical_form() {
        let x = d(12, -2); // 3
        assert_eq!(x.mant(), &BigInt::from(3));
        assert_eq!(x.exp(), 0);
        assert_eq!(x, d(3, 0));
    }

    #[test]
    fn arithmetic_exact() {
        let a = d(3, -2); // 0.75
        let b = d(1, -1); // 0.5
        assert_eq!(a.add(&b), d(5, -2));
        assert_eq!(a.sub(&b), d(1, -2));
        assert_eq!(a.mul(&b), d(3, -3));
    }

    #[test]
    fn rounding_directions() {
        let x = d(5, -2); // 1.25
        assert_eq!(x.round_to_exp(0, Round::Down), d(1, 0));
        assert_eq!(x.round_to_exp(0, Round::Up), d(2, 0));
        let y = d(-5, -2); // -1.25
        assert_eq!(y.round_to_exp(0, Round::Down), d(-2, 0));
        assert_eq!(y.round_to_exp(0, Round::Up), d(-1, 0));
    }

    #[test]
    fn div_directed() {
        let a = d(1, 0);
        let b = d(3, 0);
        let lo = a.div(&b, 20, Round::Down);
        let hi = a.div(&b, 20, Round::Up);
        assert!(lo < hi);
        let third = BigRational::new(BigInt::one(), BigInt::from(3));
        assert!(lo.to_ratio() < third && third < hi.to_ratio());
        let gap = hi.sub(&lo);
        assert!(gap <= Dyadic::pow2(-20));
    }

    #[test]
    fn ratio_round_trip() {
        let r = BigRational::new(BigInt::from(1), BigInt::from(10));
        let lo = Dyadic::from_ratio(&r, 40, Round::Down);
        let hi = Dyadic::from_ratio(&r, 40, Round::Up);
        assert!(lo.to_ratio() <= r && r <= hi.to_ratio());
        assert!(Dyadic::from_ratio_exact(&r).is_none());
        let q = BigRational::new(BigInt::from(9), BigInt::from(4));
        assert_eq!(Dyadic::from_ratio_exact(&q).unwrap(), d(9, -2));
    }

    #[test]
    fn floor_ceil() {
        assert_eq!(d(7, -1).floor_int(), BigInt::from(3)); // 3.5
        assert_eq!(d(7, -1).ceil_int(), BigInt::from(4));
        assert_eq!(d(-7, -1).floor_int(), BigInt::from(-4));
        assert_eq!(d(-7, -1).ceil_int(), BigInt::from(-3));
        assert_eq!(d(6, 0).floor_int(), BigInt::from(6));
    }

    #[test]
    fn decimal_rendering() {
        assert_eq!(d(9, -2).to_decimal(4), "2.250");
        assert_eq!(d(1, -1).to_decimal(3), "0.500");
        assert_eq!(d(-3, 2).to_decimal(2), "-12");
        assert_eq!(d(1, 10).to_decimal(4), "1024");
        assert_eq!(d(1, -30).to_decimal(3), "9.31e-10");
    }
}
