//! Fixed-point fast path for the q-loops.
//!
//! An irrational is frozen once as an integer mantissa interval at scale
//! `2^-P`; every derived quantity for a given q is then exact integer
//! arithmetic in u128/i128, so the loop over q <= 10^7 allocates nothing.
//! Every decision is certified: the fast path answers only when the scaled
//! enclosures are disjoint and otherwise defers to the caller's slow path.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive};

use crate::realnum::RealSpec;

/// Fractional-part scanner for one real: `value mod 1` at scale `2^-p`.
///
/// Invariant: `value mod 1` lies in `[a_mod, a_mod + w] * 2^-p  (mod 1)`.
#[derive(Clone, Debug)]
pub(crate) struct SpecFixed {
    a_mod: u128,
    w: u128,
    p: u32,
}

impl SpecFixed {
    /// Freezes `spec` for q up to `q_max`. Returns `None` when the fast path
    /// cannot hold the numbers (huge magnitudes or an irreducible ball width).
    pub fn new(spec: &RealSpec, q_max: u64) -> Option<SpecFixed> {
        let q_bits = 64 - q_max.leading_zeros();
        // q * a_mod must fit: p + q_bits <= 127; keep p generous.
        if q_bits > 27 {
            return None;
        }
        let p = 100u32;
        let iv = spec.eval(p + 8);
        let m: BigInt = BigInt::from(1) << p;
        let lo_scaled = iv.lo().mul_int(&m).floor_int();
        let hi_scaled = iv.hi().mul_int(&m).ceil_int();
        let w = (&hi_scaled - &lo_scaled).to_u128()?;
        if w > 1 << 16 {
            return None; // ball too wide for the fast path
        }
        let a_mod = lo_scaled.mod_floor(&m).to_u128()?;
        Some(SpecFixed { a_mod, w, p })
    }

    pub fn scale(&self) -> u32 {
        self.p
    }

    /// Enclosure of `frac(q * value)` as `[lo, lo + q*w] * 2^-p`, not reduced
    /// mod 2^p (the upper end may run past one period).
    #[inline]
    pub fn frac(&self, q: u64) -> (u128, u128) {
        let m = 1u128 << self.p;
        let lo = (q as u128 * self.a_mod) & (m - 1);
        (lo, lo + q as u128 * self.w)
    }

    /// Enclosure of `||q * value||` at scale `2^-p`; the upper bound never
    /// exceeds `2^(p-1)`.
    #[inline]
    pub fn dist(&self, q: u64) -> (u128, u128) {
        let m = 1u128 << self.p;
        let half = m >> 1;
        let (lo, hi) = self.frac(q);
        if hi - lo >= m {
            return (0, half);
        }
        if hi < m {
            // no wrap: tent map on [0, 1)
            if hi <= half {
                (lo, hi)
            } else if lo >= half {
                (m - hi, m - lo)
            } else {
                ((m - hi).min(lo), half)
            }
        } else {
            // interval crosses the next integer
            let over = hi - m;
            (0, (m - lo).max(over).min(half))
        }
    }
}

/// Floor/ceil of `r * 2^scale` as u128; `None` if out of range or negative.
pub(crate) fn ratio_bounds_u128(r: &BigRational, scale: u32) -> Option<(u128, u128)> {
    if r.is_negative() {
        return None;
    }
    let num = r.numer() << scale;
    let lo = num.div_floor(r.denom()).to_u128()?;
    let hi = num.div_ceil(r.denom()).to_u128()?;
    Some((lo, hi))
}

/// Fast-path product scanner for a pair, independent of `eps` and `T`.
pub(crate) struct ProductCtx {
    pub alpha: SpecFixed,
    pub beta: SpecFixed,
    p: u32,
}

impl ProductCtx {
    pub fn new(alpha: &RealSpec, beta: &RealSpec, q_max: u64) -> Option<ProductCtx> {
        let a = SpecFixed::new(alpha, q_max)?;
        let b = SpecFixed::new(beta, q_max)?;
        let p = a.scale();
        Some(ProductCtx { alpha: a, beta: b, p })
    }

    /// Product `||q a|| * ||q b||` enclosure at scale 124.
    #[inline]
    pub fn product124(&self, q: u64) -> (u128, u128) {
        let (alo, ahi) = self.alpha.dist(q);
        let (blo, bhi) = self.beta.dist(q);
        let sh = self.p - 62;
        let alo = alo >> sh;
        let ahi = (ahi >> sh) + 1;
        let blo = blo >> sh;
        let bhi = (bhi >> sh) + 1;
        (alo * blo, ahi * bhi)
    }

    /// `q * ||q a|| * ||q b||` enclosure at scale 96.
    #[inline]
    pub fn value96(&self, q: u64) -> (u128, u128) {
        let (plo, phi) = self.product124(q);
        ((plo >> 28) * q as u128, ((phi >> 28) + 1) * q as u128)
    }

    /// Dyadic layer: the k with `2^-k-1 <= product < 2^-k`; `None` on boundary
    /// doubt. The bit length of the scaled product decides it exactly.
    #[inline]
    pub fn product_layer(&self, q: u64) -> Option<u32> {
        let (plo, phi) = self.product124(q);
        if plo == 0 {
            return None;
        }
        let k_lo = 124 - bits_u128(phi);
        let k_hi = 124 - bits_u128(plo);
        if k_lo == k_hi {
            Some(k_lo)
        } else {
            None
        }
    }

    /// Reciprocal of the product at scale 40, directed outward.
    /// `None` when the enclosure is too close to zero.
    #[inline]
    pub fn recip40(&self, q: u64) -> Option<(u128, u128)> {
        let (plo, phi) = self.product124(q);
        if plo < 1 << 37 {
            // product below 2^-87: defer, the shifted quotient would overflow
            return None;
        }
        // 1/product at scale 40 is 2^164/p; stage it as (2^127/p) << 37
        // with one-ulp slack on each side to keep the direction certified.
        let lo = ((1u128 << 127) / phi) << 37;
        let hi = (((1u128 << 127) / plo) << 37) + (1 << 37);
        Some((lo, hi))
    }
}

/// Shared fast-path state for a pair and fixed `eps`, `T`.
pub(crate) struct PairCtx {
    pub prod: ProductCtx,
    /// eps at scale 124 (product compare) and 122 (division numerator)
    eps_lo124: u128,
    eps_hi124: u128,
    eps_lo122: u128,
    eps_hi122: u128,
    /// T at scale p (x window) and 62 (product with x)
    t_lo_p: u128,
    t_hi_p: u128,
    t_lo62: u128,
    t_hi62: u128,
    /// ceil(T): x candidates j run in [-t_int-1, t_int+1]
    t_int: i64,
    p: u32,
}

impl PairCtx {
    pub fn new(
        alpha: &RealSpec,
        beta: &RealSpec,
        eps: &BigRational,
        t: &BigRational,
        q_max: u64,
    ) -> Option<PairCtx> {
        let prod = ProductCtx::new(alpha, beta, q_max)?;
        let p = prod.p;
        if *t > BigRational::from_integer(BigInt::from(64)) {
            return None;
        }
        if *eps > BigRational::from_integer(BigInt::from(1)) {
            return None;
        }
        let (eps_lo124, eps_hi124) = ratio_bounds_u128(eps, 124)?;
        let (eps_lo122, eps_hi122) = ratio_bounds_u128(eps, 122)?;
        let (t_lo_p, t_hi_p) = ratio_bounds_u128(t, p)?;
        let (t_lo62, t_hi62) = ratio_bounds_u128(t, 62)?;
        let t_int = t.ceil().to_integer().to_i64()?;
        Some(PairCtx {
            prod,
            eps_lo124,
            eps_hi124,
            eps_lo122,
            eps_hi122,
            t_lo_p,
            t_hi_p,
            t_lo62,
            t_hi62,
            t_int,
            p,
        })
    }

    /// Certified strict test `product < eps`; `None` requests escalation.
    #[inline]
    pub fn product_lt_eps(&self, q: u64) -> Option<bool> {
        let (plo, phi) = self.prod.product124(q);
        if phi < self.eps_lo124 {
            Some(true)
        } else if plo >= self.eps_hi124 {
            Some(false)
        } else {
            None
        }
    }

    /// Exact count, for this q, of pairs `(p1, p2)` with
    /// `|p1 + q a| * |p2 + q b| < eps` and both magnitudes `<= T`.
    /// `None` requests the slow path for this q.
    pub fn count_for_q(&self, q: u64) -> Option<u64> {
        let m = 1i128 << self.p;
        let (flo, fhi) = self.prod.alpha.frac(q);
        let (glo, ghi) = self.prod.beta.frac(q);
        let mut total = 0u64;
        for j in -(self.t_int as i128 + 1)..=(self.t_int as i128 + 1) {
            // x = |j + frac_a| at scale p
            let xlo_raw = j * m + flo as i128;
            let xhi_raw = j * m + fhi as i128;
            let (xlo, xhi) = abs_interval(xlo_raw, xhi_raw);
            // closed window test x <= T
            if xlo as u128 > self.t_hi_p {
                continue; // certainly outside
            }
            if xhi as u128 > self.t_lo_p {
                return None; // x vs T boundary unresolved
            }
            // decide which bound governs: compare x*T with eps at scale 124
            let x62_lo = (xlo >> (self.p - 62)) as u128;
            let x62_hi = ((xhi >> (self.p - 62)) + 1) as u128;
            let xt_lo = x62_lo * self.t_lo62;
            let xt_hi = x62_hi * self.t_hi62;
            let n = if xt_hi < self.eps_lo124 {
                // eps/x > T: the closed bound T governs, and every y <= T
                // keeps the product strictly under eps.
                self.count_closed(glo, ghi)?
            } else if xt_lo >= self.eps_hi124 {
                // strict bound u = eps/x < T governs
                if x62_lo == 0 {
                    return None;
                }
                let u60_lo = self.eps_lo122 / x62_hi;
                let u60_hi = self.eps_hi122 / x62_lo + 1;
                self.count_strict(glo, ghi, u60_lo, u60_hi)?
            } else {
                return None; // xT vs eps tie region
            };
            total += n;
        }
        Some(total)
    }

    /// #{ p2 : |p2 + q b| <= T } from the frac interval at scale p.
    fn count_closed(&self, glo: u128, ghi: u128) -> Option<u64> {
        // integers in [-g - T, -g + T]
        let lo_a = -(ghi as i128) - self.t_hi_p as i128;
        let lo_b = -(glo as i128) - self.t_lo_p as i128;
        let hi_a = -(ghi as i128) + self.t_lo_p as i128;
        let hi_b = -(glo as i128) + self.t_hi_p as i128;
        let start = ceil_certain(lo_a, lo_b, self.p)?;
        let end = floor_certain(hi_a, hi_b, self.p)?;
        Some((end - start + 1).max(0) as u64)
    }

    /// #{ p2 : |p2 + q b| < u } with u given at scale 60.
    fn count_strict(&self, glo: u128, ghi: u128, u60_lo: u128, u60_hi: u128) -> Option<u64> {
        let g60_lo = (glo >> (self.p - 60)) as i128;
        let g60_hi = ((ghi >> (self.p - 60)) + 1) as i128;
        let lo_a = -g60_hi - u60_hi as i128;
        let lo_b = -g60_lo - u60_lo as i128;
        let hi_a = -g60_hi + u60_lo as i128;
        let hi_b = -g60_lo + u60_hi as i128;
        let start = strict_ceil_certain(lo_a, lo_b, 60)?;
        let end = strict_floor_certain(hi_a, hi_b, 60)?;
        Some((end - start + 1).max(0) as u64)
    }
}

#[inline]
pub(crate) fn bits_u128(x: u128) -> u32 {
    128 - x.leading_zeros()
}

/// |.| image of a scaled interval.
#[inline]
fn abs_interval(lo: i128, hi: i128) -> (i128, i128) {
    if lo >= 0 {
        (lo, hi)
    } else if hi <= 0 {
        (-hi, -lo)
    } else {
        (0, (-lo).max(hi))
    }
}

/// floor of a value enclosed in [a, b] * 2^-scale, when certain.
/// An endpoint exactly on the grid leaves the floor of a nearby irrational
/// ambiguous, so certainty additionally requires interior placement.
#[inline]
fn floor_certain(a: i128, b: i128, scale: u32) -> Option<i128> {
    let fa = a >> scale;
    let fb = b >> scale;
    if fa == fb && (a & ((1i128 << scale) - 1)) != 0 {
        Some(fa)
    } else {
        None
    }
}

/// ceil counterpart of [`floor_certain`].
#[inline]
fn ceil_certain(a: i128, b: i128, scale: u32) -> Option<i128> {
    floor_certain(-b, -a, scale).map(|f| -f)
}

/// Greatest integer strictly below the enclosed value, when certain.
/// Equals the floor for a value certainly off the integer grid.
#[inline]
fn strict_floor_certain(a: i128, b: i128, scale: u32) -> Option<i128> {
    floor_certain(a, b, scale)
}

/// Least integer strictly above the enclosed value, when certain.
#[inline]
fn strict_ceil_certain(a: i128, b: i128, scale: u32) -> Option<i128> {
    ceil_certain(a, b, scale)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sqrt2() -> RealSpec {
        RealSpec::sqrt(2).unwrap()
    }

    fn sqrt3() -> RealSpec {
        RealSpec::sqrt(3).unwrap()
    }

    #[test]
    fn dist_matches_slow_path() {
        let s = sqrt2();
        let fixed = SpecFixed::new(&s, 1 << 20).unwrap();
        for q in [1u64, 2, 7, 29, 169, 12345, 1000003] {
            let (dlo, dhi) = fixed.dist(q);
            let slow = crate::realnum::dist_nearest_int(&s, q, 120).unwrap();
            let p = fixed.scale() as i64;
            let lo = crate::dyadic::Dyadic::new(BigInt::from(dlo), -p);
            let hi = crate::dyadic::Dyadic::new(BigInt::from(dhi), -p);
            // the fast enclosure and the slow enclosure must overlap
            assert!(slow.lo() <= &hi && &lo <= slow.hi(), "q={q}");
            assert!(dhi <= 1 << (fixed.scale() - 1));
        }
    }

    #[test]
    fn product_decision_agrees_with_certified() {
        let a = sqrt2();
        let b = sqrt3();
        let eps = BigRational::new(BigInt::from(1), BigInt::from(10));
        let t = BigRational::new(BigInt::from(1), BigInt::from(2));
        let ctx = PairCtx::new(&a, &b, &eps, &t, 1 << 20).unwrap();
        let mut decided = 0;
        for q in 1..=2000u64 {
            if let Some(ans) = ctx.product_lt_eps(q) {
                decided += 1;
                let pn = crate::realnum::product_norm(&a, &b, q, 160).unwrap();
                if ans {
                    assert!(pn.hi().to_ratio() < eps, "q={q} claimed < eps");
                } else {
                    assert!(pn.lo().to_ratio() >= eps, "q={q} claimed >= eps");
                }
            }
        }
        assert!(decided >= 1990, "fast path decided only {decided}/2000");
    }

    #[test]
    fn layer_from_bits() {
        let a = sqrt2();
        let b = sqrt3();
        let eps = BigRational::new(BigInt::from(1), BigInt::from(10));
        let t = BigRational::new(BigInt::from(1), BigInt::from(2));
        let ctx = PairCtx::new(&a, &b, &eps, &t, 1 << 20).unwrap();
        for q in 1..=500u64 {
            if let Some(k) = ctx.prod.product_layer(q) {
                let pn = crate::realnum::product_norm(&a, &b, q, 160).unwrap();
                let v = pn.lo().to_ratio();
                let lower = BigRational::new(BigInt::from(1), BigInt::from(1) << (k as u64 + 1));
                let upper = BigRational::new(BigInt::from(1), BigInt::from(1) << (k as u64));
                assert!(v >= lower && v < upper, "q={q} layer {k} wrong");
            }
        }
    }
}
