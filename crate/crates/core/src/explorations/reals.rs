//! Rational brackets `(k − 1)/n < x < (k + 1)/n` from an approximator
//! `n ↦ k(n)` of a computable real.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::One;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RealBoundsError {
    #[error("the denominator n must be at least 1")]
    ZeroDenominator,
}

/// `((k(n) − 1)/n, (k(n) + 1)/n)`; the width is exactly `2/n`.
pub fn computable_real_bounds(
    approximator: impl Fn(&BigUint) -> BigInt,
    n: &BigUint,
) -> Result<(BigRational, BigRational), RealBoundsError> {
    if *n == BigUint::ZERO {
        return Err(RealBoundsError::ZeroDenominator);
    }
    let k = approximator(n);
    let den = BigInt::from(n.clone());
    let lo = BigRational::new(&k - BigInt::one(), den.clone());
    let hi = BigRational::new(k + BigInt::one(), den);
    Ok((lo, hi))
}

/// `k(n) = ⌊n√2⌋ = isqrt(2n²)`.
pub fn sqrt2_approximator(n: &BigUint) -> BigInt {
    BigInt::from((n * n * 2u8).sqrt())
}
