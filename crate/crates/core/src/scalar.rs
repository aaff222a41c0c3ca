//! Scalar types for lengths and distances.
//!
//! Every algorithm in this crate is generic over [`Scalar`]. Verdicts hinge on
//! exact equalities such as `ℓ(gh) = ℓ(gh⁻¹)`, so the rational implementations
//! are the ones to use for anything that claims a result; `f64` is provided for
//! quick exploration on integer-valued inputs only.

use std::fmt::{Debug, Display};

use num_bigint::BigInt;
use num_rational::{BigRational, Ratio};
use num_traits::{FromPrimitive, Num, One, Signed, ToPrimitive, Zero};

pub trait Scalar:
    Clone + Debug + Display + PartialOrd + Num + Signed + FromPrimitive + Send + Sync + 'static
{
    /// Parses `p`, `-p`, or `p/q`.
    fn parse_fraction(s: &str) -> Option<Self>;

    /// Formats as `p/q`, always with an explicit denominator.
    fn to_fraction(&self) -> String;

    /// Smallest integer `n ≥ self`, saturating at `u64::MAX`; `None` for NaN.
    fn ceil_u64(&self) -> Option<u64>;

    /// Exact `(numerator, denominator)` when it fits in `i128`.
    fn as_ratio_i128(&self) -> Option<(i128, i128)> {
        None
    }

    fn half(&self) -> Self {
        self.clone() / Self::from_u8(2).expect("2 is representable")
    }
}

fn split_fraction(s: &str) -> Option<(&str, Option<&str>)> {
    let s = s.trim();
    if s.is_empty() {
        return None;
    }
    match s.split_once('/') {
        Some((p, q)) => Some((p.trim(), Some(q.trim()))),
        None => Some((s, None)),
    }
}

macro_rules! impl_ratio_scalar {
    ($int:ty) => {
        impl Scalar for Ratio<$int> {
            fn parse_fraction(s: &str) -> Option<Self> {
                let (p, q) = split_fraction(s)?;
                let p: $int = p.parse().ok()?;
                let q: $int = match q {
                    Some(q) => q.parse().ok()?,
                    None => 1,
                };
                if q == 0 {
                    return None;
                }
                Some(Ratio::new(p, q))
            }

            fn to_fraction(&self) -> String {
                format!("{}/{}", self.numer(), self.denom())
            }

            fn ceil_u64(&self) -> Option<u64> {
                let c = self.ceil().to_integer();
                if c <= 0 {
                    Some(0)
                } else {
                    Some(c.to_u64().unwrap_or(u64::MAX))
                }
            }

            fn as_ratio_i128(&self) -> Option<(i128, i128)> {
                Some((i128::from(*self.numer()), i128::from(*self.denom())))
            }
        }
    };
}

impl_ratio_scalar!(i32);
impl_ratio_scalar!(i64);

impl Scalar for Ratio<i128> {
    fn parse_fraction(s: &str) -> Option<Self> {
        let (p, q) = split_fraction(s)?;
        let p: i128 = p.parse().ok()?;
        let q: i128 = match q {
            Some(q) => q.parse().ok()?,
            None => 1,
        };
        if q == 0 {
            return None;
        }
        Some(Ratio::new(p, q))
    }

    fn to_fraction(&self) -> String {
        format!("{}/{}", self.numer(), self.denom())
    }

    fn ceil_u64(&self) -> Option<u64> {
        let c = self.ceil().to_integer();
        if c <= 0 {
            Some(0)
        } else {
            Some(c.to_u64().unwrap_or(u64::MAX))
        }
    }

    fn as_ratio_i128(&self) -> Option<(i128, i128)> {
        Some((*self.numer(), *self.denom()))
    }
}

impl Scalar for BigRational {
    fn parse_fraction(s: &str) -> Option<Self> {
        let (p, q) = split_fraction(s)?;
        let p: BigInt = p.parse().ok()?;
        let q: BigInt = match q {
            Some(q) => q.parse().ok()?,
            None => BigInt::one(),
        };
        if q.is_zero() {
            return None;
        }
        Some(Ratio::new(p, q))
    }

    fn to_fraction(&self) -> String {
        format!("{}/{}", self.numer(), self.denom())
    }

    fn ceil_u64(&self) -> Option<u64> {
        let c = self.ceil().to_integer();
        if c.is_negative() || c.is_zero() {
            Some(0)
        } else {
            Some(c.to_u64().unwrap_or(u64::MAX))
        }
    }

    fn as_ratio_i128(&self) -> Option<(i128, i128)> {
        Some((self.numer().to_i128()?, self.denom().to_i128()?))
    }
}

impl Scalar for f64 {
    fn parse_fraction(s: &str) -> Option<Self> {
        let (p, q) = split_fraction(s)?;
        let p: f64 = p.parse().ok()?;
        match q {
            Some(q) => {
                let q: f64 = q.parse().ok()?;
                (q != 0.0).then(|| p / q)
            }
            None => Some(p),
        }
    }

    fn to_fraction(&self) -> String {
        match BigRational::from_float(*self) {
            Some(r) => r.to_fraction(),
            None => format!("{self}"),
        }
    }

    fn ceil_u64(&self) -> Option<u64> {
        if self.is_nan() {
            None
        } else if *self <= 0.0 {
            Some(0)
        } else {
            Some(self.ceil().to_u64().unwrap_or(u64::MAX))
        }
    }
}

pub(crate) fn max_of<S: Scalar>(a: S, b: S) -> S {
    if b > a {
        b
    } else {
        a
    }
}

pub(crate) fn min_of<S: Scalar>(a: S, b: S) -> S {
    if b < a {
        b
    } else {
        a
    }
}

pub(crate) fn from_usize<S: Scalar>(n: usize) -> S {
    S::from_usize(n).expect("small integers are representable")
}

/// Rescales `values` to integers over a common denominator, if everything fits.
pub(crate) fn common_denominator<S: Scalar>(values: &[S]) -> Option<Vec<i128>> {
    let mut ratios = Vec::with_capacity(values.len());
    let mut lcm: i128 = 1;
    for v in values {
        let (p, q) = v.as_ratio_i128()?;
        lcm = num_integer::lcm(lcm, q);
        if lcm > (1 << 40) {
            return None;
        }
        ratios.push((p, q));
    }
    ratios
        .into_iter()
        .map(|(p, q)| p.checked_mul(lcm / q))
        .collect()
}
