//! Scalar types usable as query costs.
//!
//! Every algorithm in this crate is generic over [`CostScalar`]. The exact
//! [`Rational`] implementation is the one the verification suite relies on;
//! the float implementations exist for quick experiments where rounding is
//! acceptable.

use std::fmt::{Debug, Display};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Num, One, Signed, ToPrimitive, Zero};

/// Arbitrary precision rational, the default cost carrier.
pub type Rational = BigRational;

pub trait CostScalar: Num + Clone + PartialOrd + Debug + Display + Send + Sync + 'static {
    /// The exact value of a binary64 number in this scalar type.
    ///
    /// Cost-level thresholds are binary64 dyadics, so for the rational type
    /// this conversion is lossless and comparisons against it are exact.
    fn from_dyadic(x: f64) -> Self;

    /// Parses `"p/q"` or a plain number.
    fn parse_cost(s: &str) -> Option<Self>;

    fn to_f64_lossy(&self) -> f64;

    /// Rewrites `values` as integers over one common denominator, if that can
    /// be done exactly with every integer fitting in a `u64`. Order and sums
    /// are preserved, which lets hot loops run on machine integers.
    fn common_integers(_values: &[Self]) -> Option<Vec<u64>> {
        None
    }

    fn from_ratio(num: i64, den: i64) -> Self {
        Self::from_i64(num) / Self::from_i64(den)
    }

    fn from_i64(v: i64) -> Self;
}

impl CostScalar for BigRational {
    fn from_dyadic(x: f64) -> Self {
        BigRational::from_float(x).expect("threshold must be finite")
    }

    fn parse_cost(s: &str) -> Option<Self> {
        let s = s.trim();
        let (num, den) = match s.split_once('/') {
            Some((p, q)) => (p.trim().parse::<BigInt>().ok()?, q.trim().parse::<BigInt>().ok()?),
            None => match s.split_once('.') {
                // Exact decimal: "0.25" is 25/100.
                Some((int, frac)) if !frac.is_empty() && frac.bytes().all(|b| b.is_ascii_digit()) => {
                    let digits = format!("{int}{frac}");
                    (digits.parse::<BigInt>().ok()?, num_traits::pow(BigInt::from(10), frac.len()))
                }
                Some(_) => return None,
                None => (s.parse::<BigInt>().ok()?, BigInt::one()),
            },
        };
        if den.is_zero() {
            return None;
        }
        Some(BigRational::new(num, den))
    }

    fn to_f64_lossy(&self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }

    fn common_integers(values: &[Self]) -> Option<Vec<u64>> {
        let mut lcm = BigInt::one();
        for v in values {
            if v.is_negative() {
                return None;
            }
            lcm = lcm.lcm(v.denom());
            if lcm.bits() > 64 {
                return None;
            }
        }
        values
            .iter()
            .map(|v| (v.numer() * (&lcm / v.denom())).to_u64())
            .collect()
    }

    fn from_i64(v: i64) -> Self {
        BigRational::from_integer(BigInt::from(v))
    }
}

macro_rules! float_cost {
    ($t:ty) => {
        impl CostScalar for $t {
            fn from_dyadic(x: f64) -> Self {
                x as $t
            }

            fn parse_cost(s: &str) -> Option<Self> {
                match s.trim().split_once('/') {
                    Some((p, q)) => {
                        let p: $t = p.trim().parse().ok()?;
                        let q: $t = q.trim().parse().ok()?;
                        (q != 0.0).then(|| p / q)
                    }
                    None => s.trim().parse().ok(),
                }
            }

            fn to_f64_lossy(&self) -> f64 {
                *self as f64
            }

            fn from_i64(v: i64) -> Self {
                v as $t
            }
        }
    };
}

float_cost!(f64);
float_cost!(f32);

/// Largest element under `PartialOrd`; `None` for an empty iterator.
pub(crate) fn max_cost<'a, C: CostScalar>(it: impl IntoIterator<Item = &'a C>) -> Option<&'a C> {
    it.into_iter().fold(None, |best, c| match best {
        Some(b) if b >= c => Some(b),
        _ => Some(c),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_rational_forms() {
        assert_eq!(Rational::parse_cost("2/4"), Some(Rational::from_ratio(1, 2)));
        assert_eq!(Rational::parse_cost(" 3 "), Some(Rational::from_i64(3)));
        assert_eq!(Rational::parse_cost("1/0"), None);
        assert_eq!(Rational::parse_cost("0.25"), Some(Rational::from_ratio(1, 4)));
        assert_eq!(Rational::parse_cost("1.5e3"), None);
        assert_eq!(f64::parse_cost("1/4"), Some(0.25));
        assert_eq!(f64::parse_cost("0.5"), Some(0.5));
    }

    #[test]
    fn dyadic_conversion_is_exact() {
        let x = 0.1f64;
        let r = Rational::from_dyadic(x);
        // 0.1 is not representable, so the exact image differs from 1/10.
        assert_ne!(r, Rational::from_ratio(1, 10));
        assert_eq!(r.to_f64_lossy(), x);
        assert_eq!(Rational::from_dyadic(0.25), Rational::from_ratio(1, 4));
    }

    #[test]
    fn common_integers_scale_by_lcm() {
        let vals = [Rational::from_ratio(1, 5), Rational::from_ratio(2, 3), Rational::from_i64(1)];
        assert_eq!(Rational::common_integers(&vals), Some(vec![3, 10, 15]));
        assert_eq!(f64::common_integers(&[0.5]), None);
    }
}
