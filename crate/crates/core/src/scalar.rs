//! Exact scalar fields used for rational vectors in `V = Y ⊗ Q`.

use std::fmt::{Debug, Display};
use std::hash::Hash;

use num_bigint::BigInt;
use num_rational::Ratio;
use num_traits::{Signed, ToPrimitive};

/// An exact ordered field. Floating point types deliberately do not implement this.
pub trait Exact:
    Clone + Debug + Display + Ord + Hash + Signed + Send + Sync + 'static
{
    fn from_int(n: i64) -> Self;
    fn from_frac(num: i64, den: i64) -> Self;
    fn is_integer(&self) -> bool;
    /// The value as an integer, if it is one and fits.
    fn to_int(&self) -> Option<i64>;
    /// Numerator and denominator in lowest terms, as decimal strings.
    fn parts(&self) -> (String, String);
}

macro_rules! exact_ratio {
    ($int:ty) => {
        impl Exact for Ratio<$int> {
            fn from_int(n: i64) -> Self {
                Ratio::from_integer(n as $int)
            }
            fn from_frac(num: i64, den: i64) -> Self {
                Ratio::new(num as $int, den as $int)
            }
            fn is_integer(&self) -> bool {
                Ratio::is_integer(self)
            }
            fn to_int(&self) -> Option<i64> {
                if Ratio::is_integer(self) {
                    self.numer().to_i64()
                } else {
                    None
                }
            }
            fn parts(&self) -> (String, String) {
                (self.numer().to_string(), self.denom().to_string())
            }
        }
    };
}

exact_ratio!(i64);
exact_ratio!(i128);

impl Exact for Ratio<BigInt> {
    fn from_int(n: i64) -> Self {
        Ratio::from_integer(BigInt::from(n))
    }
    fn from_frac(num: i64, den: i64) -> Self {
        Ratio::new(BigInt::from(num), BigInt::from(den))
    }
    fn is_integer(&self) -> bool {
        Ratio::is_integer(self)
    }
    fn to_int(&self) -> Option<i64> {
        if Ratio::is_integer(self) {
            self.numer().to_i64()
        } else {
            None
        }
    }
    fn parts(&self) -> (String, String) {
        (self.numer().to_string(), self.denom().to_string())
    }
}

/// Formats a value as `n` or `n/d`.
pub fn fmt_exact<T: Exact>(x: &T) -> String {
    let (n, d) = x.parts();
    if d == "1" {
        n
    } else {
        format!("{n}/{d}")
    }
}

/// Parses `n` or `n/d`.
pub fn parse_exact<T: Exact>(s: &str) -> Option<T> {
    let s = s.trim();
    match s.split_once('/') {
        Some((n, d)) => {
            let n: i64 = n.trim().parse().ok()?;
            let d: i64 = d.trim().parse().ok()?;
            if d == 0 {
                return None;
            }
            Some(T::from_frac(n, d))
        }
        None => Some(T::from_int(s.parse().ok()?)),
    }
}
