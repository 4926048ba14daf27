//! Exact linear algebra over the rationals.
//!
//! Every cohomology computation in this crate reduces to ranks, kernels and
//! preimages of sparse matrices with small integer entries. Elimination is
//! fraction free: rows are kept as primitive integer vectors and only turned
//! back into rationals for back substitution.

mod sparse;

pub use sparse::{EliminationStats, SparseMatrix};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Arbitrary precision rational, always kept in lowest terms with a positive denominator.
pub type Rational = BigRational;

/// Dense rational vector.
pub type RationalVector = Vec<Rational>;

pub fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn ratio(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// Serializes a rational as `p/q` (or `p` for integers).
pub fn rational_to_string(r: &Rational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Parses the `p/q` form produced by [`rational_to_string`].
pub fn parse_rational(s: &str) -> Option<Rational> {
    let s = s.trim();
    match s.split_once('/') {
        Some((p, q)) => {
            let p: BigInt = p.trim().parse().ok()?;
            let q: BigInt = q.trim().parse().ok()?;
            if q.is_zero() {
                None
            } else {
                Some(Rational::new(p, q))
            }
        }
        None => s.parse::<BigInt>().ok().map(Rational::from_integer),
    }
}

/// Number of bits in the larger of numerator and denominator.
pub fn bit_size(r: &Rational) -> u64 {
    r.numer().abs().bits().max(r.denom().bits())
}

/// Finds `c` with `lhs = c * rhs` componentwise, if such a scalar exists.
///
/// Returns `None` when the vectors are not proportional, or when `rhs` is zero
/// but `lhs` is not. Two zero vectors are proportional with `c = 0`.
pub fn proportionality(lhs: &[Rational], rhs: &[Rational]) -> Option<Rational> {
    if lhs.len() != rhs.len() {
        return None;
    }
    let mut scalar: Option<Rational> = None;
    for (a, b) in lhs.iter().zip(rhs) {
        if b.is_zero() {
            if !a.is_zero() {
                return None;
            }
            continue;
        }
        let c = a / b;
        match &scalar {
            None => scalar = Some(c),
            Some(s) if *s == c => {}
            Some(_) => return None,
        }
    }
    Some(scalar.unwrap_or_else(Rational::zero))
}
