use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};

use super::accumulate;
use crate::linalg::{rat, Rational};

/// Exponent vector of a monomial `x^alpha` in `n` variables.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MultiIndex(pub Vec<u32>);

impl MultiIndex {
    pub fn zero(n: usize) -> Self {
        MultiIndex(vec![0; n])
    }

    pub fn unit(n: usize, i: usize) -> Self {
        let mut v = vec![0; n];
        v[i] = 1;
        MultiIndex(v)
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    /// Total degree `|alpha|`.
    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn add(&self, other: &MultiIndex) -> MultiIndex {
        MultiIndex(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    /// `alpha - e_i`, or `None` when `alpha_i = 0`.
    /// Componentwise difference; `other` must lie below `self`.
    pub fn sub(&self, other: &MultiIndex) -> MultiIndex {
        MultiIndex(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }

    pub fn lower(&self, i: usize) -> Option<MultiIndex> {
        if self.0[i] == 0 {
            return None;
        }
        let mut v = self.0.clone();
        v[i] -= 1;
        Some(MultiIndex(v))
    }

    pub fn raise(&self, i: usize) -> MultiIndex {
        let mut v = self.0.clone();
        v[i] += 1;
        MultiIndex(v)
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&a| a == 0)
    }

    /// All multi-indices in `n` variables of total degree exactly `d`, lexicographically.
    pub fn all_of_degree(n: usize, d: u32) -> Vec<MultiIndex> {
        fn rec(n: usize, d: u32, prefix: &mut Vec<u32>, out: &mut Vec<MultiIndex>) {
            if prefix.len() + 1 == n {
                prefix.push(d);
                out.push(MultiIndex(prefix.clone()));
                prefix.pop();
                return;
            }
            for k in (0..=d).rev() {
                prefix.push(k);
                rec(n, d - k, prefix, out);
                prefix.pop();
            }
        }
        let mut out = Vec::new();
        if n == 0 {
            if d == 0 {
                out.push(MultiIndex(Vec::new()));
            }
            return out;
        }
        rec(n, d, &mut Vec::with_capacity(n), &mut out);
        out.sort();
        out
    }

    /// `alpha!` as a rational.
    pub fn factorial(&self) -> Rational {
        let mut f = Rational::one();
        for &a in &self.0 {
            for k in 2..=a {
                f *= rat(k as i64);
            }
        }
        f
    }
}

impl Ord for MultiIndex {
    /// Graded lexicographic: total degree first, then lexicographic.
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for MultiIndex {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, &a) in self.0.iter().enumerate() {
            if a == 0 {
                continue;
            }
            if !first {
                write!(f, "*")?;
            }
            first = false;
            if a == 1 {
                write!(f, "x{}", i + 1)?;
            } else {
                write!(f, "x{}^{}", i + 1, a)?;
            }
        }
        if first {
            write!(f, "1")?;
        }
        Ok(())
    }
}

/// Polynomial in `n` variables with rational coefficients; a truncation of a formal power series.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Polynomial {
    n: usize,
    terms: BTreeMap<MultiIndex, Rational>,
}

impl Polynomial {
    pub fn zero(n: usize) -> Self {
        Polynomial {
            n,
            terms: BTreeMap::new(),
        }
    }

    pub fn monomial(exp: MultiIndex, coeff: Rational) -> Self {
        let n = exp.dim();
        let mut p = Polynomial::zero(n);
        p.add_term(exp, coeff);
        p
    }

    pub fn constant(n: usize, c: Rational) -> Self {
        Self::monomial(MultiIndex::zero(n), c)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn terms(&self) -> impl Iterator<Item = (&MultiIndex, &Rational)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, exp: MultiIndex, coeff: Rational) {
        if coeff.is_zero() {
            return;
        }
        accumulate(&mut self.terms, exp, coeff);
    }

    pub fn coefficient(&self, exp: &MultiIndex) -> Rational {
        self.terms.get(exp).cloned().unwrap_or_else(Rational::zero)
    }

    /// Value at the origin (the constant term).
    pub fn at_zero(&self) -> Rational {
        self.coefficient(&MultiIndex::zero(self.n))
    }

    pub fn derivative(&self, i: usize) -> Polynomial {
        let mut out = Polynomial::zero(self.n);
        for (e, c) in &self.terms {
            if let Some(lower) = e.lower(i) {
                out.add_term(lower, c * rat(e.0[i] as i64));
            }
        }
        out
    }

    pub fn scale(&self, s: &Rational) -> Polynomial {
        let mut out = Polynomial::zero(self.n);
        if s.is_zero() {
            return out;
        }
        for (e, c) in &self.terms {
            out.terms.insert(e.clone(), c * s);
        }
        out
    }

    pub fn add(&self, other: &Polynomial) -> Polynomial {
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Polynomial) -> Polynomial {
        self.add(&other.scale(&rat(-1)))
    }

    pub fn mul(&self, other: &Polynomial) -> Polynomial {
        let mut out = Polynomial::zero(self.n);
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                out.add_term(e1.add(e2), c1 * c2);
            }
        }
        out
    }

    /// Drops every term of total degree above `order`.
    pub fn truncate(&self, order: u32) -> Polynomial {
        Polynomial {
            n: self.n,
            terms: self
                .terms
                .iter()
                .filter(|(e, _)| e.degree() <= order)
                .map(|(e, c)| (e.clone(), c.clone()))
                .collect(),
        }
    }

    /// Lowest total degree among the terms, `None` for zero.
    pub fn order(&self) -> Option<u32> {
        self.terms.keys().map(MultiIndex::degree).min()
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (e, c)) in self.terms.iter().enumerate() {
            if k > 0 {
                write!(f, " + ")?;
            }
            write!(f, "({})*{}", crate::linalg::rational_to_string(c), e)?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn graded_lex_order() {
        let a = MultiIndex(vec![2, 0]);
        let b = MultiIndex(vec![0, 3]);
        let c = MultiIndex(vec![1, 1]);
        assert!(a > c);
        assert!(b > a);
        assert_eq!(MultiIndex::all_of_degree(2, 2).len(), 3);
        assert_eq!(MultiIndex::all_of_degree(3, 2).len(), 6);
    }

    #[test]
    fn derivative_of_monomial() {
        let p = Polynomial::monomial(MultiIndex(vec![3, 1]), rat(2));
        let d = p.derivative(0);
        assert_eq!(d.coefficient(&MultiIndex(vec![2, 1])), rat(6));
        assert!(p.derivative(0).derivative(0).derivative(0).derivative(0).is_zero());
    }

    #[test]
    fn cancellation_removes_terms() {
        let mut p = Polynomial::monomial(MultiIndex(vec![1]), rat(1));
        p.add_term(MultiIndex(vec![1]), rat(-1));
        assert!(p.is_zero());
    }
}
