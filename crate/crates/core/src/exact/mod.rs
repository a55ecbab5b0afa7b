//! Exact scalars and linear algebra: rationals, integer matrices, Bareiss
//! determinants, Smith normal form and a rational simplex solver.

mod lp;
mod matrix;
mod snf;

pub use lp::{lp_solve, LpProblem, LpResult};
pub use matrix::{det_exact, rank, IntMatrix};
pub use snf::{smith_normal_form, SnfResult};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::One;

use crate::error::{Error, Result};

/// Exact rational in lowest terms with positive denominator.
pub type Rational = BigRational;

pub fn rational(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn integer(v: i64) -> Rational {
    Rational::from_integer(BigInt::from(v))
}

/// Least common multiple of the reduced denominators.
pub fn lcm_of_denominators(xs: &[Rational]) -> Result<BigInt> {
    if xs.is_empty() {
        return Err(Error::Empty("lcm of denominators"));
    }
    Ok(xs.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom())))
}

/// Binomial coefficient with the convention C(a, b) = 0 outside 0 <= b <= a.
pub fn binomial(a: i64, b: i64) -> BigInt {
    if b < 0 || a < 0 || b > a {
        return BigInt::from(0);
    }
    let b = b.min(a - b);
    let mut r = BigInt::one();
    for i in 0..b {
        r = r * BigInt::from(a - i) / BigInt::from(i + 1);
    }
    r
}

/// Trial-division primality test, adequate for the small moduli used here.
pub fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// `Ok(p)` when `p` is prime.
pub fn require_prime(p: u64) -> Result<u64> {
    if is_prime(p) {
        Ok(p)
    } else {
        Err(Error::NotPrime(p))
    }
}
