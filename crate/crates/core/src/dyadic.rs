//! Exact dyadic rationals `m / 2^e`.
//!
//! Kraft sums, universal-probability and halting-probability bounds are sums
//! of terms `2^-|p|`, which are exactly representable here. No floating point
//! is involved anywhere except [`DyadicRational::to_f64`], which is for
//! display only.

use std::cmp::Ordering;
use std::fmt;
use std::iter::Sum;
use std::ops::{Add, AddAssign, Sub};

use num_bigint::{BigInt, Sign};
use num_traits::{One, Signed, Zero};

/// `numerator / 2^exponent`, always in lowest terms: the numerator is odd,
/// or it is zero and the exponent is zero.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct DyadicRational {
    numerator: BigInt,
    exponent: u32,
}

impl DyadicRational {
    pub fn zero() -> Self {
        DyadicRational {
            numerator: BigInt::zero(),
            exponent: 0,
        }
    }

    pub fn one() -> Self {
        DyadicRational {
            numerator: BigInt::one(),
            exponent: 0,
        }
    }

    /// `2^-k`.
    pub fn pow2_neg(k: u32) -> Self {
        DyadicRational {
            numerator: BigInt::one(),
            exponent: k,
        }
    }

    pub fn new(numerator: impl Into<BigInt>, exponent: u32) -> Self {
        let mut d = DyadicRational {
            numerator: numerator.into(),
            exponent,
        };
        d.normalize();
        d
    }

    pub fn numerator(&self) -> &BigInt {
        &self.numerator
    }

    pub fn exponent(&self) -> u32 {
        self.exponent
    }

    pub fn is_zero(&self) -> bool {
        self.numerator.is_zero()
    }

    fn normalize(&mut self) {
        if self.numerator.is_zero() {
            self.exponent = 0;
            return;
        }
        let tz = self.numerator.trailing_zeros().unwrap_or(0);
        let shift = tz.min(self.exponent as u64) as u32;
        if shift > 0 {
            self.numerator >>= shift as usize;
            self.exponent -= shift;
        }
    }

    /// Numerator rescaled to the common exponent `e >= self.exponent`.
    fn scaled(&self, e: u32) -> BigInt {
        &self.numerator << (e - self.exponent) as usize
    }

    /// Lossy conversion for display.
    pub fn to_f64(&self) -> f64 {
        let (_, digits) = self.numerator.to_u64_digits();
        let mut value = 0.0f64;
        for d in digits.iter().rev() {
            value = value * 18446744073709551616.0 + *d as f64;
        }
        if self.numerator.sign() == Sign::Minus {
            value = -value;
        }
        value * 2f64.powi(-(self.exponent as i32))
    }

    /// Decimal expansion truncated toward zero at `places` digits, computed
    /// exactly so that the text is platform independent.
    pub fn to_decimal(&self, places: usize) -> String {
        let scaled: BigInt =
            (self.numerator.abs() * BigInt::from(10u32).pow(places as u32)) >> self.exponent as usize;
        let digits = scaled.to_string();
        let sign = if self.numerator.is_negative() { "-" } else { "" };
        if places == 0 {
            return format!("{sign}{digits}");
        }
        let padded = format!("{:0>width$}", digits, width = places + 1);
        let (int, frac) = padded.split_at(padded.len() - places);
        format!("{sign}{int}.{frac}")
    }
}

impl Default for DyadicRational {
    fn default() -> Self {
        Self::zero()
    }
}

impl Ord for DyadicRational {
    fn cmp(&self, other: &Self) -> Ordering {
        let e = self.exponent.max(other.exponent);
        self.scaled(e).cmp(&other.scaled(e))
    }
}

impl PartialOrd for DyadicRational {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Add<&DyadicRational> for &DyadicRational {
    type Output = DyadicRational;

    fn add(self, rhs: &DyadicRational) -> DyadicRational {
        let e = self.exponent.max(rhs.exponent);
        DyadicRational::new(self.scaled(e) + rhs.scaled(e), e)
    }
}

impl Add for DyadicRational {
    type Output = DyadicRational;

    fn add(self, rhs: DyadicRational) -> DyadicRational {
        &self + &rhs
    }
}

impl AddAssign<&DyadicRational> for DyadicRational {
    fn add_assign(&mut self, rhs: &DyadicRational) {
        *self = &*self + rhs;
    }
}

impl Sub<&DyadicRational> for &DyadicRational {
    type Output = DyadicRational;

    fn sub(self, rhs: &DyadicRational) -> DyadicRational {
        let e = self.exponent.max(rhs.exponent);
        DyadicRational::new(self.scaled(e) - rhs.scaled(e), e)
    }
}

impl Sum for DyadicRational {
    fn sum<I: Iterator<Item = DyadicRational>>(iter: I) -> Self {
        iter.fold(DyadicRational::zero(), |acc, x| &acc + &x)
    }
}

impl<'a> Sum<&'a DyadicRational> for DyadicRational {
    fn sum<I: Iterator<Item = &'a DyadicRational>>(iter: I) -> Self {
        iter.fold(DyadicRational::zero(), |acc, x| &acc + x)
    }
}

/// Prints `m/2^e`.
impl fmt::Display for DyadicRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/2^{}", self.numerator, self.exponent)
    }
}

impl fmt::Debug for DyadicRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Sum of `2^-len` over the given lengths, accumulated with one final
/// normalization. Much cheaper than folding `Add` for large sets.
pub fn sum_pow2_neg(lengths: impl IntoIterator<Item = usize>) -> DyadicRational {
    let mut counts: Vec<u64> = Vec::new();
    for len in lengths {
        if counts.len() <= len {
            counts.resize(len + 1, 0);
        }
        counts[len] += 1;
    }
    if counts.is_empty() {
        return DyadicRational::zero();
    }
    let e = (counts.len() - 1) as u32;
    let numerator: BigInt = counts
        .iter()
        .enumerate()
        .map(|(len, &c)| BigInt::from(c) << (e as usize - len))
        .sum();
    DyadicRational::new(numerator, e)
}
