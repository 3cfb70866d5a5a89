//! Exact descriptions of real numbers and certified operations on them.
//!
//! A [`RealSpec`] is either a quadratic surd `(a + b*sqrt(d))/c` (guaranteed
//! irrational) or a decimal ball `center +- radius` (a desk-tool input that
//! may be rational). Both evaluate to arbitrarily tight [`IntervalValue`]s;
//! surd evaluation goes through integer square roots, so enclosures shrink
//! geometrically with the requested precision.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::dyadic::Dyadic;
use crate::interval::IntervalValue;
use crate::precision_ladder;
use crate::{Error, Result};

/// Exact, evaluable description of a real number.
#[derive(Clone, Debug, PartialEq)]
pub enum RealSpec {
    /// `(a + b*sqrt(d)) / c` with `d >= 2` squarefree-checked (not a perfect
    /// square) and `b != 0`, so the value is irrational.
    QuadraticSurd {
        a: BigInt,
        b: BigInt,
        c: BigInt,
        d: BigInt,
    },
    /// `center +- radius`; radius zero denotes an exactly known value.
    DecimalBall {
        center: BigRational,
        radius: BigRational,
    },
}

impl RealSpec {
    /// sqrt(d), for d >= 2 and not a perfect square.
    pub fn sqrt(d: u64) -> Result<RealSpec> {
        RealSpec::surd(0, 1, 1, d as i64)
    }

    /// `(a + b*sqrt(d)) / c`.
    pub fn surd(a: i64, b: i64, c: i64, d: i64) -> Result<RealSpec> {
        let spec = RealSpec::QuadraticSurd {
            a: BigInt::from(a),
            b: BigInt::from(b),
            c: BigInt::from(c),
            d: BigInt::from(d),
        };
        spec.validate()?;
        Ok(spec)
    }

    /// Exact rational given as a ball of radius zero.
    pub fn exact(center: BigRational) -> RealSpec {
        RealSpec::DecimalBall {
            center,
            radius: BigRational::zero(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            RealSpec::QuadraticSurd { b, c, d, .. } => {
                if c.is_zero() {
                    return Err(Error::InvalidSpec("surd denominator c must be nonzero".into()));
                }
                if d < &BigInt::from(2) {
                    return Err(Error::InvalidSpec("surd radicand d must be >= 2".into()));
                }
                if b.is_zero() {
                    return Err(Error::InvalidSpec(
                        "surd coefficient b must be nonzero (value would be rational)".into(),
                    ));
                }
                let r = d.sqrt();
                if &(&r * &r) == d {
                    return Err(Error::InvalidSpec(format!(
                        "radicand {d} is a perfect square (value would be rational)"
                    )));
                }
                Ok(())
            }
            RealSpec::DecimalBall { radius, .. } => {
                if radius.is_negative() {
                    return Err(Error::InvalidSpec("ball radius must be nonnegative".into()));
                }
                Ok(())
            }
        }
    }

    /// The exact rational value, when there is one (zero-radius ball).
    pub fn as_exact_ratio(&self) -> Option<&BigRational> {
        match self {
            RealSpec::DecimalBall { center, radius } if radius.is_zero() => Some(center),
            _ => None,
        }
    }

    /// Whether the spec is guaranteed irrational.
    pub fn is_certainly_irrational(&self) -> bool {
        matches!(self, RealSpec::QuadraticSurd { .. })
    }

    /// Evaluates to an interval of relative width at most `2^(1-precision)`.
    ///
    /// For a ball the width floors at `2*radius`: once the target falls below
    /// that, the ball itself (tightly rounded) is returned.
    pub fn eval(&self, precision: u32) -> IntervalValue {
        match self {
            RealSpec::QuadraticSurd { a, b, c, d } => eval_surd(a, b, c, d, precision),
            RealSpec::DecimalBall { center, radius } => {
                let lo = center - radius;
                let hi = center + radius;
                IntervalValue::new(
                    IntervalValue::from_ratio(&lo, precision + 4).lo().clone(),
                    IntervalValue::from_ratio(&hi, precision + 4).hi().clone(),
                )
            }
        }
    }

    /// Enclosure of `q * value` with absolute width below
    /// `2^-precision * q` (plus the irreducible ball width).
    pub fn eval_times(&self, q: u64, precision: u32) -> IntervalValue {
        let guard = 64 - (q.leading_zeros());
        self.eval(precision + guard).mul_int(&BigInt::from(q))
    }
}

fn eval_surd(a: &BigInt, b: &BigInt, c: &BigInt, d: &BigInt, precision: u32) -> IntervalValue {
    // sqrt(d) in [s, s+1] * 2^-k with k generous enough to cover the division
    // by c and the magnitude of b.
    let guard = 8 + b.bits() as u32 + c.bits() as u32;
    let k = precision + guard;
    let scaled: BigInt = d << (2 * k as u64);
    let s = scaled.sqrt();
    let root = IntervalValue::new(
        Dyadic::new(s.clone(), -(k as i64)),
        Dyadic::new(s + BigInt::one(), -(k as i64)),
    );
    let num = root
        .mul_int(b)
        .add(&IntervalValue::from_int(a.clone()));
    num.div(&IntervalValue::from_int(c.clone()), precision + 8)
}

/// The distance-to-nearest-integer image of an enclosure of `x`.
///
/// Total and exact: the result is the pointwise image of `||.||` over the
/// interval, always contained in `[0, 1/2]`.
pub(crate) fn dist_interval(x: &IntervalValue) -> IntervalValue {
    let one = Dyadic::one();
    let half = Dyadic::pow2(-1);
    if x.width() >= one {
        return IntervalValue::new(Dyadic::zero(), half);
    }
    // Shift so the interval starts in [0, 1): subtract floor(lo).
    let base = x.lo().floor_int();
    let lo = x.lo().sub(&Dyadic::from_int(base.clone()));
    let hi = x.hi().sub(&Dyadic::from_int(base));
    // Now 0 <= lo < 1 and lo <= hi < 2.
    debug_assert!(!lo.is_negative() && lo < one && hi < Dyadic::from_int(2));
    let dist = |t: &Dyadic| -> Dyadic {
        // distance of t in [0,2) to {0,1,2}
        let d0 = t.clone().min(Dyadic::one().sub(t).abs());
        d0.min(Dyadic::from_int(2).sub(t))
    };
    let dlo = dist(&lo);
    let dhi = dist(&hi);
    let crosses_int = hi >= one; // 1 in [lo, hi]
    let crosses_half = (lo <= half && half <= hi)
        || (lo <= Dyadic::new(BigInt::from(3), -1) && Dyadic::new(BigInt::from(3), -1) <= hi);
    let min = if crosses_int {
        Dyadic::zero()
    } else {
        dlo.clone().min(dhi.clone())
    };
    let max = if crosses_half {
        half
    } else {
        dlo.max(dhi)
    };
    IntervalValue::new(min, max)
}

/// `||q * value||` as a certified interval in `[0, 1/2]`.
///
/// For a surd the enclosure tightens with `precision`. For a ball the value
/// set itself may straddle a half-integer; when that happens in the interior
/// the nearest integer is genuinely ambiguous and the spec's error is
/// returned (possible only for nonzero radius).
pub fn dist_nearest_int(spec: &RealSpec, q: u64, precision: u32) -> Result<IntervalValue> {
    assert!(q >= 1, "q must be positive");
    if let RealSpec::DecimalBall { center, radius } = spec {
        // Exact rational path: decide everything in Q.
        let qc = center * BigRational::from_integer(BigInt::from(q));
        let qr = radius * BigRational::from_integer(BigInt::from(q));
        let lo = &qc - &qr;
        let hi = &qc + &qr;
        if !radius.is_zero() && strictly_straddles_half_integer(&lo, &hi) {
            return Err(Error::AmbiguousNearestInteger { q });
        }
        let dlo = rational_dist_to_int(&lo);
        let dhi = rational_dist_to_int(&hi);
        let crosses_int = lo.floor() != hi.floor() || lo.is_integer() || hi.is_integer();
        let half = BigRational::new(BigInt::one(), BigInt::from(2));
        let crosses_half = contains_half_integer(&lo, &hi);
        let dmin = if crosses_int {
            BigRational::zero()
        } else {
            dlo.clone().min(dhi.clone())
        };
        let dmax = if crosses_half { half } else { dlo.max(dhi) };
        let lo_d = IntervalValue::from_ratio(&dmin, precision + 4);
        let hi_d = IntervalValue::from_ratio(&dmax, precision + 4);
        return Ok(IntervalValue::new(lo_d.lo().clone(), hi_d.hi().clone()));
    }
    Ok(dist_interval(&spec.eval_times(q, precision + 4)))
}

fn rational_dist_to_int(x: &BigRational) -> BigRational {
    let f = x - x.floor();
    let one = BigRational::one();
    f.clone().min(&one - &f)
}

/// True iff some half-integer lies in the open interval (lo, hi).
fn strictly_straddles_half_integer(lo: &BigRational, hi: &BigRational) -> bool {
    if lo >= hi {
        return false;
    }
    // half-integers are k/2 with k odd; look at 2x
    let lo2 = lo * BigRational::from_integer(BigInt::from(2));
    let hi2 = hi * BigRational::from_integer(BigInt::from(2));
    let mut k: BigInt = lo2.floor().to_integer() + 1;
    while BigRational::from_integer(k.clone()) < hi2 {
        if k.is_odd() {
            return true;
        }
        k += 1;
    }
    false
}

/// True iff some half-integer lies in the closed interval [lo, hi].
fn contains_half_integer(lo: &BigRational, hi: &BigRational) -> bool {
    let lo2 = lo * BigRational::from_integer(BigInt::from(2));
    let hi2 = hi * BigRational::from_integer(BigInt::from(2));
    let mut k: BigInt = lo2.ceil().to_integer();
    while BigRational::from_integer(k.clone()) <= hi2 {
        if k.is_odd() {
            return true;
        }
        k += 1;
    }
    false
}

/// `||q*alpha|| * ||q*beta||` as a certified interval in `[0, 1/4]`.
pub fn product_norm(
    alpha: &RealSpec,
    beta: &RealSpec,
    q: u64,
    precision: u32,
) -> Result<IntervalValue> {
    let da = dist_nearest_int(alpha, q, precision)?;
    let db = dist_nearest_int(beta, q, precision)?;
    let p = da.mul(&db);
    // each factor is in [0, 1/2] so the product stays in [0, 1/4]
    let quarter = Dyadic::pow2(-2);
    Ok(IntervalValue::new(
        p.lo().clone().max(Dyadic::zero()),
        p.hi().clone().min(quarter),
    ))
}

/// The certified expressions the toolkit needs: spec values, their integer
/// multiples' distances to Z, products of two such distances, and exact
/// rational constants. Deliberately not a general expression tree.
#[derive(Clone, Debug)]
pub enum RealExpr {
    Const(BigRational),
    Value(RealSpec),
    DistNearest { spec: RealSpec, q: u64 },
    ProductNorm { alpha: RealSpec, beta: RealSpec, q: u64 },
}

impl RealExpr {
    pub fn eval(&self, precision: u32) -> Result<IntervalValue> {
        match self {
            RealExpr::Const(r) => Ok(IntervalValue::from_ratio(r, precision)),
            RealExpr::Value(spec) => Ok(spec.eval(precision)),
            RealExpr::DistNearest { spec, q } => dist_nearest_int(spec, *q, precision),
            RealExpr::ProductNorm { alpha, beta, q } => product_norm(alpha, beta, *q, precision),
        }
    }
}

/// Decides `x < y` by widening precision until the enclosures are disjoint.
///
/// Never guesses: overlapping enclosures at `max_precision` produce
/// [`Error::UndecidablePredicate`].
pub fn decide_less(x: &RealExpr, y: &RealExpr, max_precision: u32) -> Result<bool> {
    for prec in precision_ladder(max_precision) {
        let xv = x.eval(prec)?;
        let yv = y.eval(prec)?;
        if let Some(ans) = xv.lt(&yv) {
            return Ok(ans);
        }
    }
    Err(Error::undecidable(max_precision, "decide_less"))
}

// ---- text grammar -------------------------------------------------------

impl RealSpec {
    /// Parses the CLI grammar: `sqrt:D`, `quad:A,B,C,D`, `dec:CENTER:RADIUS`.
    pub fn parse(text: &str) -> Result<RealSpec> {
        let err = |m: String| Error::InvalidSpec(m);
        if let Some(rest) = text.strip_prefix("sqrt:") {
            let d: i64 = rest
                .parse()
                .map_err(|_| err(format!("bad radicand in {text:?}")))?;
            return RealSpec::surd(0, 1, 1, d);
        }
        if let Some(rest) = text.strip_prefix("quad:") {
            let parts: Vec<&str> = rest.split(',').collect();
            if parts.len() != 4 {
                return Err(err(format!("quad takes A,B,C,D: {text:?}")));
            }
            let nums: Vec<i64> = parts
                .iter()
                .map(|p| p.parse().map_err(|_| err(format!("bad integer in {text:?}"))))
                .collect::<Result<_>>()?;
            return RealSpec::surd(nums[0], nums[1], nums[2], nums[3]);
        }
        if let Some(rest) = text.strip_prefix("dec:") {
            let (center, radius) = rest
                .split_once(':')
                .ok_or_else(|| err(format!("dec takes CENTER:RADIUS: {text:?}")))?;
            let center = parse_decimal(center)
                .ok_or_else(|| err(format!("bad decimal center {center:?}")))?;
            let radius = parse_decimal(radius)
                .ok_or_else(|| err(format!("bad decimal radius {radius:?}")))?;
            let spec = RealSpec::DecimalBall { center, radius };
            spec.validate()?;
            return Ok(spec);
        }
        Err(err(format!(
            "unknown real spec {text:?} (expected sqrt:D, quad:A,B,C,D or dec:CENTER:RADIUS)"
        )))
    }
}

/// Parses decimal or scientific notation into an exact rational.
pub fn parse_decimal(text: &str) -> Option<BigRational> {
    let t = text.trim();
    if t.is_empty() {
        return None;
    }
    let (mant, exp) = match t.split_once(['e', 'E']) {
        Some((m, e)) => (m, e.parse::<i64>().ok()?),
        None => (t, 0),
    };
    let neg = mant.starts_with('-');
    let mant = mant.trim_start_matches(['+', '-']);
    let (ip, fp) = match mant.split_once('.') {
        Some((i, f)) => (i, f),
        None => (mant, ""),
    };
    if ip.is_empty() && fp.is_empty() {
        return None;
    }
    if !ip.chars().all(|c| c.is_ascii_digit()) || !fp.chars().all(|c| c.is_ascii_digit()) {
        return None;
    }
    let digits: BigInt = format!("{ip}{fp}").parse().ok()?;
    let digits = if neg { -digits } else { digits };
    let scale = exp - fp.len() as i64;
    let ten = BigInt::from(10);
    Some(if scale >= 0 {
        BigRational::from_integer(digits * ten.pow(scale as u32))
    } else {
        BigRational::new(digits, ten.pow((-scale) as u32))
    })
}

impl fmt::Display for RealSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RealSpec::QuadraticSurd { a, b, c, d } => {
                if a.is_zero() && b.is_one() && c.is_one() {
                    write!(f, "sqrt:{d}")
                } else {
                    write!(f, "quad:{a},{b},{c},{d}")
                }
            }
            RealSpec::DecimalBall { center, radius } => write!(f, "dec:{center}:{radius}"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const SQRT2: &str = "1.41421356237309504880168872420969807856967187537694";
    const SQRT3: &str = "1.73205080756887729352744634150587236694280525381038";
    const GOLDEN: &str = "1.61803398874989484820458683436563811772030917980576";

    fn dec(s: &str) -> BigRational {
        parse_decimal(s).unwrap()
    }

    /// The enclosure must meet the literal within one ulp of its last digit.
    fn assert_contains(iv: &IntervalValue, s: &str) {
        let val = dec(s);
        let frac_digits = s.split('.').nth(1).map_or(0, |f| f.len()) as u32;
        let ulp = BigRational::new(BigInt::one(), BigInt::from(10).pow(frac_digits));
        let lo = &val - &ulp;
        let hi = &val + &ulp;
        let ball = IntervalValue::new(
            IntervalValue::from_ratio(&lo, 256).lo().clone(),
            IntervalValue::from_ratio(&hi, 256).hi().clone(),
        );
        assert!(iv.intersects(&ball), "{iv} should meet {s} within 1e-{frac_digits}");
    }

    #[test]
    fn eval_sqrt2() {
        let s = RealSpec::sqrt(2).unwrap();
        let iv = s.eval(30);
        assert_contains(&iv, SQRT2);
        assert!(iv.width() <= Dyadic::pow2(-29).mul(&Dyadic::from_int(2)));
        let tight = s.eval(200);
        assert_contains(&tight, SQRT2);
    }

    #[test]
    fn eval_golden_ratio() {
        let g = RealSpec::surd(1, 1, 2, 5).unwrap();
        let iv = g.eval(64);
        assert_contains(&iv, GOLDEN);
    }

    #[test]
    fn eval_exact_ball() {
        let b = RealSpec::parse("dec:2.25:0").unwrap();
        let iv = b.eval(10);
        assert!(iv.is_point());
        assert_eq!(iv.lo(), &Dyadic::new(BigInt::from(9), -2));
    }

    #[test]
    fn monotone_refinement() {
        let s = RealSpec::sqrt(7).unwrap();
        let coarse = s.eval(40);
        let fine = s.eval(41);
        assert!(coarse.contains_interval(&fine));
    }

    #[test]
    fn validation_rejects_rationals() {
        assert!(RealSpec::surd(1, 1, 1, 4).is_err()); // perfect square
        assert!(RealSpec::surd(1, 0, 1, 2).is_err()); // b = 0
        assert!(RealSpec::surd(1, 1, 0, 2).is_err()); // c = 0
        assert!(RealSpec::surd(1, 1, 1, 1).is_err()); // d < 2
    }

    #[test]
    fn dist_examples() {
        let s2 = RealSpec::sqrt(2).unwrap();
        let d1 = dist_nearest_int(&s2, 1, 64).unwrap();
        assert_contains(&d1, "0.41421356237309504880168872420969807856967187537694");
        let d2 = dist_nearest_int(&s2, 2, 64).unwrap();
        assert_contains(&d2, "0.17157287525380990239662255158060384286065624924612");
        let ball = RealSpec::parse("dec:2.25:0").unwrap();
        let db = dist_nearest_int(&ball, 1, 64).unwrap();
        assert!(db.is_point());
        assert_eq!(db.lo(), &Dyadic::pow2(-2));
    }

    #[test]
    fn dist_stays_in_half_unit() {
        let s3 = RealSpec::sqrt(3).unwrap();
        for q in 1..200u64 {
            let d = dist_nearest_int(&s3, q, 64).unwrap();
            assert!(!d.lo().is_negative());
            assert!(d.hi() <= &Dyadic::pow2(-1));
        }
    }

    #[test]
    fn exact_ball_half_integer_is_fine() {
        // 2 * 2.25 = 4.5: distance exactly 1/2, no ambiguity for radius zero
        let ball = RealSpec::parse("dec:2.25:0").unwrap();
        let d = dist_nearest_int(&ball, 2, 64).unwrap();
        assert!(d.is_point());
        assert_eq!(d.lo(), &Dyadic::pow2(-1));
        // 0.1 * 5 = 0.5 exactly as well, through non-dyadic rationals
        let tenth = RealSpec::parse("dec:0.1:0").unwrap();
        let d = dist_nearest_int(&tenth, 5, 64).unwrap();
        assert!(d.contains(&Dyadic::pow2(-1)));
        assert!(d.width() <= Dyadic::pow2(-60));
    }

    #[test]
    fn fuzzy_ball_straddle_is_ambiguous() {
        let ball = RealSpec::parse("dec:0.5:0.001").unwrap();
        match dist_nearest_int(&ball, 1, 64) {
            Err(Error::AmbiguousNearestInteger { q: 1 }) => {}
            other => panic!("expected ambiguity, got {other:?}"),
        }
        // endpoint contact is not a straddle
        let edge = RealSpec::parse("dec:0.4:0.1").unwrap();
        assert!(dist_nearest_int(&edge, 1, 64).is_ok());
    }

    #[test]
    fn product_norm_examples() {
        let s2 = RealSpec::sqrt(2).unwrap();
        let s3 = RealSpec::sqrt(3).unwrap();
        let p1 = product_norm(&s2, &s3, 1, 64).unwrap();
        assert_contains(&p1, "0.110988");
        let p7 = product_norm(&s2, &s3, 7, 64).unwrap();
        assert_contains(&p7, "0.0124984");
        let p2 = product_norm(&s2, &s3, 2, 64).unwrap();
        assert_contains(&p2, "0.0796272");
        assert!(p2.hi() <= &Dyadic::pow2(-2));
    }

    #[test]
    fn decide_less_examples() {
        let s2 = RealSpec::sqrt(2).unwrap();
        let s3 = RealSpec::sqrt(3).unwrap();
        let tenth = RealExpr::Const(dec("0.1"));
        let p1 = RealExpr::ProductNorm {
            alpha: s2.clone(),
            beta: s3.clone(),
            q: 1,
        };
        let p2 = RealExpr::ProductNorm {
            alpha: s2,
            beta: s3,
            q: 2,
        };
        assert!(!decide_less(&p1, &tenth, 256).unwrap());
        assert!(decide_less(&p2, &tenth, 256).unwrap());
    }

    #[test]
    fn decide_less_overlapping_balls_undecidable() {
        let ball = RealSpec::parse("dec:1.0:0.000000001").unwrap();
        let x = RealExpr::Value(ball.clone());
        let y = RealExpr::Value(ball);
        match decide_less(&x, &y, 256) {
            Err(Error::UndecidablePredicate { .. }) => {}
            other => panic!("expected undecidable, got {other:?}"),
        }
    }

    #[test]
    fn decide_less_consistency() {
        let s2 = RealSpec::sqrt(2).unwrap();
        let s5 = RealSpec::sqrt(5).unwrap();
        for q in 1..40u64 {
            let x = RealExpr::DistNearest {
                spec: s2.clone(),
                q,
            };
            let y = RealExpr::DistNearest {
                spec: s5.clone(),
                q,
            };
            let xy = decide_less(&x, &y, 256).unwrap();
            let yx = decide_less(&y, &x, 256).unwrap();
            assert!(!(xy && yx), "both orders claimed strictly less at q={q}");
        }
    }

    #[test]
    fn parse_grammar() {
        assert_eq!(RealSpec::parse("sqrt:2").unwrap(), RealSpec::sqrt(2).unwrap());
        assert_eq!(
            RealSpec::parse("quad:1,1,2,5").unwrap(),
            RealSpec::surd(1, 1, 2, 5).unwrap()
        );
        let b = RealSpec::parse("dec:2.25:1e-9").unwrap();
        match &b {
            RealSpec::DecimalBall { center, radius } => {
                assert_eq!(center, &dec("2.25"));
                assert_eq!(radius, &dec("1e-9"));
            }
            _ => panic!(),
        }
        assert!(RealSpec::parse("sqrt:4").is_err());
        assert!(RealSpec::parse("foo:1").is_err());
        assert!(RealSpec::parse("dec:1..2:0").is_err());
    }

    #[test]
    fn parse_decimal_forms() {
        assert_eq!(dec("1e6"), BigRational::from_integer(BigInt::from(1000000)));
        assert_eq!(dec("2.5e-3"), BigRational::new(BigInt::from(1), BigInt::from(400)));
        assert_eq!(dec("-0.25"), BigRational::new(BigInt::from(-1), BigInt::from(4)));
        assert!(parse_decimal("abc").is_none());
        assert!(parse_decimal("").is_none());
    }
}
