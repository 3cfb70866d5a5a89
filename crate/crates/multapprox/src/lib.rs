//! Certified computation for multiplicative Diophantine approximation.
//!
//! The crate counts the solutions `(p1, p2, q)` of
//! `|p1 + q*alpha| * |p2 + q*beta| < eps`, `max(|p1 + q*alpha|, |p2 + q*beta|) <= T`,
//! `0 < q <= Q`, and verifies the explicit main term and error bound that
//! control that count, together with every geometric ingredient behind the
//! estimate: the empirical Diophantine-type function, the counting-domain
//! partition, diagonal flows, rank-3 lattice minima, and reciprocal sums of
//! products of fractional parts.
//!
//! All number-theoretic decisions run in interval arithmetic over dyadic
//! rationals: a strict inequality is reported only once the enclosures are
//! disjoint, and ambiguous boundary cases surface as errors instead of silent
//! guesses.

pub mod counting;
pub mod domain;
pub mod dyadic;
pub mod interval;
pub mod lattice;
pub mod phi;
pub mod realnum;
pub mod recsum;
mod scan;
pub mod transcend;

mod error;

pub use error::Error;
pub use interval::IntervalValue;
pub use realnum::{RealExpr, RealSpec};

/// Result alias used throughout the crate.
pub type Result<T> = std::result::Result<T, Error>;

/// Default cap for precision escalation, in bits.
pub const MAX_PRECISION: u32 = 256;

/// Starting precision for escalation ladders, in bits.
pub const START_PRECISION: u32 = 64;

/// Escalation schedule: doubling precisions from the start value up to `max`.
pub(crate) fn precision_ladder(max: u32) -> impl Iterator<Item = u32> {
    let mut p = START_PRECISION.min(max);
    let mut done = false;
    std::iter::from_fn(move || {
        if done {
            return None;
        }
        let cur = p;
        if cur >= max {
            done = true;
        }
        p = (p * 2).min(max);
        Some(cur)
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ladder_reaches_max() {
        let v: Vec<u32> = precision_ladder(256).collect();
        assert_eq!(v, vec![64, 128, 256]);
        let v: Vec<u32> = precision_ladder(96).collect();
        assert_eq!(v, vec![64, 96]);
        let v: Vec<u32> = precision_ladder(64).collect();
        assert_eq!(v, vec![64]);
    }
}
