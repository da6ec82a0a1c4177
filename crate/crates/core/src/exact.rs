//! Exact comparisons of the form `|x| <= lambda * sqrt(r)` with `lambda^2` rational.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

/// A nonnegative bound held through its square: `lambda^2 = num / den`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct LambdaBound {
    pub num: u64,
    pub den: u64,
}

impl LambdaBound {
    pub fn new(num: u64, den: u64) -> Self {
        assert!(den > 0);
        LambdaBound { num, den }
    }

    /// Bound whose square is the given integer.
    pub fn from_square(sq: u64) -> Self {
        LambdaBound { num: sq, den: 1 }
    }

    pub fn halved(self) -> Self {
        LambdaBound { num: self.num, den: self.den * 4 }
    }

    pub fn value(self) -> f64 {
        (self.num as f64 / self.den as f64).sqrt()
    }

    pub fn square(self) -> BigRational {
        BigRational::new(BigInt::from(self.num), BigInt::from(self.den))
    }
}

pub fn int(x: impl Into<BigInt>) -> BigRational {
    BigRational::from_integer(x.into())
}

pub fn ratio(num: impl Into<BigInt>, den: impl Into<BigInt>) -> BigRational {
    BigRational::new(num.into(), den.into())
}

/// `|x| <= lambda * sqrt(r)`, with `r >= 0`.
pub fn within(x: &BigRational, lambda: LambdaBound, r: &BigRational) -> bool {
    x * x <= lambda.square() * r
}

/// `|x| <= a + c * sqrt(r)` for nonnegative `a`, `c`, `r`.
pub fn within_affine(x: &BigRational, a: &BigRational, c: &BigRational, r: &BigRational) -> bool {
    let slack = x.abs() - a;
    if slack <= BigRational::zero() {
        return true;
    }
    &slack * &slack <= c * c * r
}

/// `sqrt(a) <= b` for `a >= 0`.
pub fn sqrt_le(a: &BigRational, b: &BigRational) -> bool {
    !b.is_negative() && a <= &(b * b)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bounds() {
        let l = LambdaBound::from_square(6);
        assert!((l.value() - 6f64.sqrt()).abs() < 1e-12);
        assert!((l.halved().value() - 6f64.sqrt() / 2.0).abs() < 1e-12);
        // 2 <= sqrt(6) * sqrt(1), 3 > sqrt(6)
        assert!(within(&int(2), l, &int(1)));
        assert!(within(&int(-2), l, &int(1)));
        assert!(!within(&int(3), l, &int(1)));
        // |5| <= 1 + 2 sqrt(4) = 5
        assert!(within_affine(&int(5), &int(1), &int(2), &int(4)));
        assert!(!within_affine(&ratio(51, 10), &int(1), &int(2), &int(4)));
        assert!(sqrt_le(&int(9), &int(3)));
        assert!(!sqrt_le(&int(10), &int(3)));
    }
}
