//! Arbitrary-precision rationals.
//!
//! All constant coefficients in the engine (curvature constants, structure
//! constants, flat-metric entries) live here. `BigRational` already keeps
//! the invariants we need: positive denominator, gcd-normalized, exact ring
//! operations.

use num_bigint::BigInt;

pub type Rational = num_rational::BigRational;

/// Integer as a rational.
pub fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Exact fraction `n/d`. Panics if `d == 0`.
pub fn ratio(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::Zero;

    #[test]
    fn normalization() {
        assert_eq!(ratio(2, 4), ratio(1, 2));
        assert_eq!(ratio(1, -2), ratio(-1, 2));
        assert!(ratio(-1, 2).denom() > &BigInt::from(0));
    }

    #[test]
    fn exact_sum() {
        assert_eq!(ratio(1, 3) + ratio(1, 6), ratio(1, 2));
        assert!((ratio(1, 3) - ratio(2, 6)).is_zero());
    }
}
