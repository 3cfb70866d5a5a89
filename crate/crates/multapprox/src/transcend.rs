//! Certified logarithms, roots and rational powers on intervals.
//!
//! `ln` is computed from the atanh series after range reduction to [1, 2);
//! the series runs in interval arithmetic with an explicit tail bound, so the
//! result encloses the true value by construction. Roots go through integer
//! nth roots of scaled mantissas.

use std::sync::OnceLock;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed};

use crate::dyadic::{Dyadic, Round};
use crate::interval::IntervalValue;

/// ln of a positive interval, outward-rounded at `bits` precision.
pub fn ln(x: &IntervalValue, bits: u32) -> IntervalValue {
    assert!(x.lo().is_positive(), "ln requires a positive interval");
    IntervalValue::new(ln_dyadic(x.lo(), bits, Round::Down), ln_dyadic(x.hi(), bits, Round::Up))
}

/// ln of a positive rational.
pub fn ln_ratio(r: &BigRational, bits: u32) -> IntervalValue {
    assert!(r.is_positive());
    ln(&IntervalValue::from_ratio(r, bits + 8), bits)
}

fn ln_dyadic(d: &Dyadic, bits: u32, dir: Round) -> Dyadic {
    let enc = ln_enclosure(d, bits + 8);
    match dir {
        Round::Down => enc.lo().round_to_bits(bits + 4, Round::Down),
        Round::Up => enc.hi().round_to_bits(bits + 4, Round::Up),
    }
}

/// Enclosure of ln(d) for a positive dyadic, working precision `w` bits.
fn ln_enclosure(d: &Dyadic, w: u32) -> IntervalValue {
    // d = m * 2^k with m in [1, 2)
    let k = d.magnitude_exp().unwrap() - 1;
    let m = d.shift(-k);
    debug_assert!(m >= Dyadic::one() && m < Dyadic::from_int(2));
    let ln_m = atanh_ln(&IntervalValue::point(m), w);
    if k == 0 {
        return ln_m;
    }
    let ln2 = ln2_interval(w);
    ln_m.add(&ln2.mul_int(&BigInt::from(k))).compress(w)
}

/// ln(m) = 2*atanh((m-1)/(m+1)) for m in an interval within [1, 2).
fn atanh_ln(m: &IntervalValue, w: u32) -> IntervalValue {
    let one = IntervalValue::from_int(1);
    let num = m.sub(&one);
    if num.hi().is_zero() && num.lo().is_zero() {
        return IntervalValue::zero();
    }
    let den = m.add(&one);
    let t = num.div(&den, w + 8); // in [0, 1/3 + eps)
    let t2 = t.square().compress(w + 8);
    // sum_{j>=0} t^(2j+1)/(2j+1), tail after K terms bounded by
    // t^(2K+1) / ((2K+1)(1-t^2)).
    let mut term = t.clone(); // t^(2j+1)
    let mut sum = IntervalValue::zero();
    let mut j: u32 = 0;
    loop {
        let contrib = term.div(&IntervalValue::from_int(2 * j as i64 + 1), w + 8);
        sum = sum.add(&contrib).compress(w + 8);
        term = term.mul(&t2).compress(w + 8);
        j += 1;
        // term now holds an enclosure of t^(2j+1); stop once the tail is negligible.
        if term.hi() < &Dyadic::pow2(-(w as i64 + 6)) || term.hi().is_zero() {
            break;
        }
        assert!(j < 4 * w, "atanh series failed to converge");
    }
    // tail bound: term.hi / ((2j+1)(1 - t2.hi)) , and 1 - t2 >= 1/2 here
    let tail_hi = term.hi().shift(1); // term.hi * 2 >= term.hi/(1 - t2)
    let tail = IntervalValue::new(Dyadic::zero(), tail_hi);
    sum.add(&tail).shift(1).compress(w)
}

/// Cached high-precision enclosure of ln 2 (from 2*atanh(1/3)).
fn ln2_interval(bits: u32) -> IntervalValue {
    static LN2: OnceLock<IntervalValue> = OnceLock::new();
    const CACHE_BITS: u32 = 1200;
    let cached = LN2.get_or_init(|| atanh_ln(&IntervalValue::from_int(2), CACHE_BITS));
    if bits <= CACHE_BITS {
        cached.compress(bits.max(16))
    } else {
        atanh_ln(&IntervalValue::from_int(2), bits)
    }
}

/// n-th root of a nonnegative interval, outward at `bits` precision.
pub fn nth_root(x: &IntervalValue, n: u32, bits: u32) -> IntervalValue {
    assert!(n >= 1);
    assert!(!x.lo().is_negative(), "nth_root requires a nonnegative interval");
    IntervalValue::new(
        nth_root_dyadic(x.lo(), n, bits, Round::Down),
        nth_root_dyadic(x.hi(), n, bits, Round::Up),
    )
}

fn nth_root_dyadic(d: &Dyadic, n: u32, bits: u32, dir: Round) -> Dyadic {
    if d.is_zero() {
        return Dyadic::zero();
    }
    if n == 1 {
        return d.clone();
    }
    // Scale so the integer root keeps bits+2 significant bits and the
    // remaining exponent is divisible by n.
    let target_bits = (bits as i64 + 2) * n as i64 - (d.mant_bits() as i64);
    let mut s = target_bits.max(0);
    s += (d.exp() - s).rem_euclid(n as i64);
    let scaled: BigInt = d.mant() << s as u64;
    debug_assert!((d.exp() - s) % n as i64 == 0);
    let out_exp = (d.exp() - s) / n as i64;
    let root = scaled.nth_root(n);
    let mant = match dir {
        Round::Down => root,
        Round::Up => {
            if num_traits::Pow::pow(&root, n) == scaled {
                root
            } else {
                root + BigInt::one()
            }
        }
    };
    Dyadic::new(mant, out_exp)
}

/// x^(num/den) for a positive interval, outward at `bits` precision.
pub fn pow_ratio(x: &IntervalValue, num: i64, den: u32, bits: u32) -> IntervalValue {
    assert!(den >= 1);
    assert!(x.lo().is_positive(), "pow_ratio requires a positive interval");
    if num == 0 {
        return IntervalValue::from_int(1);
    }
    let p = num.unsigned_abs() as u32;
    let powed = x.powi(p).compress(bits + 16);
    let rooted = nth_root(&powed, den, bits + 8);
    if num > 0 {
        rooted.compress(bits)
    } else {
        rooted.recip(bits)
    }
}

/// Square root shorthand.
pub fn sqrt(x: &IntervalValue, bits: u32) -> IntervalValue {
    nth_root(x, 2, bits)
}

/// Exact floor(log2 r) for a positive rational.
pub fn log2_floor_ratio(r: &BigRational) -> i64 {
    assert!(r.is_positive());
    let mut k = r.numer().bits() as i64 - r.denom().bits() as i64;
    // 2^k <= r < 2^(k+1) after at most two corrections
    loop {
        let cmp_lo = cmp_pow2(r, k);
        if cmp_lo == std::cmp::Ordering::Less {
            k -= 1;
            continue;
        }
        if cmp_pow2(r, k + 1) != std::cmp::Ordering::Less {
            k += 1;
            continue;
        }
        return k;
    }
}

/// Compares r with 2^k exactly.
fn cmp_pow2(r: &BigRational, k: i64) -> std::cmp::Ordering {
    if k >= 0 {
        r.numer().cmp(&(r.denom() << k as u64))
    } else {
        (r.numer() << (-k) as u64).cmp(r.denom())
    }
}

/// Exact log2 of a positive rational when it is a power of two.
pub fn log2_exact_ratio(r: &BigRational) -> Option<i64> {
    let k = log2_floor_ratio(r);
    if cmp_pow2(r, k) == std::cmp::Ordering::Equal {
        Some(k)
    } else {
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ratio(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    // 50-digit reference values
    const LN2: &str = "0.69314718055994530941723212145817656807550013436026";
    const LN10: &str = "2.30258509299404568401799145468436420760110148862877";

    fn assert_encloses_decimal(iv: &IntervalValue, dec: &str, tol_exp: i64) {
        let neg = dec.starts_with('-');
        let s = dec.trim_start_matches('-');
        let (ip, fp) = s.split_once('.').unwrap_or((s, ""));
        let digits: BigInt = format!("{ip}{fp}").parse().unwrap();
        let digits = if neg { -digits } else { digits };
        let denom = BigInt::from(10).pow(fp.len() as u32);
        let val = BigRational::new(digits, denom);
        assert!(
            iv.contains_ratio(&val),
            "interval {iv} does not contain {dec}"
        );
        assert!(
            iv.width() <= Dyadic::pow2(tol_exp),
            "interval too wide: {}",
            iv.width()
        );
    }

    #[test]
    fn ln_of_two_and_ten() {
        let two = ln_ratio(&ratio(2, 1), 128);
        assert_encloses_decimal(&two, LN2, -120);
        let ten = ln_ratio(&ratio(10, 1), 128);
        assert_encloses_decimal(&ten, LN10, -120);
    }

    #[test]
    fn ln_small_argument() {
        // ln(1/250) = -(3 ln 10 - 2 ln 2)
        let x = ln_ratio(&ratio(1, 250), 96);
        let expect = "-5.52146091786224643321951012113673948665230419716579";
        assert_encloses_decimal(&x, expect, -80);
    }

    #[test]
    fn ln_one_is_zero() {
        let x = ln_ratio(&ratio(1, 1), 64);
        assert!(x.contains(&Dyadic::zero()));
        assert!(x.width() <= Dyadic::pow2(-60));
    }

    #[test]
    fn roots() {
        let two = IntervalValue::from_int(2);
        let r = sqrt(&two, 100);
        assert_encloses_decimal(&r, "1.41421356237309504880168872420969807856967187537694", -90);
        let c = nth_root(&IntervalValue::from_int(27), 3, 64);
        assert!(c.contains(&Dyadic::from_int(3)));
        assert!(c.width() <= Dyadic::pow2(-50));
    }

    #[test]
    fn rational_powers() {
        // 4^(3/2) = 8
        let four = IntervalValue::from_int(4);
        let p = pow_ratio(&four, 3, 2, 64);
        assert!(p.contains(&Dyadic::from_int(8)));
        // 8^(-2/3) = 1/4
        let eight = IntervalValue::from_int(8);
        let q = pow_ratio(&eight, -2, 3, 64);
        assert!(q.contains(&Dyadic::new(BigInt::one(), -2)));
        assert!(q.width() <= Dyadic::pow2(-50));
    }

    #[test]
    fn log2_floor_exactness() {
        assert_eq!(log2_floor_ratio(&ratio(1, 1)), 0);
        assert_eq!(log2_floor_ratio(&ratio(7, 1)), 2);
        assert_eq!(log2_floor_ratio(&ratio(8, 1)), 3);
        assert_eq!(log2_floor_ratio(&ratio(1, 3)), -2);
        assert_eq!(log2_floor_ratio(&ratio(1, 4)), -2);
        assert_eq!(log2_exact_ratio(&ratio(16, 1)), Some(4));
        assert_eq!(log2_exact_ratio(&ratio(1, 32)), Some(-5));
        assert_eq!(log2_exact_ratio(&ratio(3, 1)), None);
    }
}
