use std::collections::BTreeMap;
use std::fmt;

use num_traits::Zero;

use super::{accumulate, insert_front, wedge_sign, FormalVectorField, MultiIndex, Polynomial};
use crate::error::{Error, Result};
use crate::linalg::{rat, rational_to_string, Rational};

/// Basis element `x^exponent dx_I`, with `I` stored as a bitmask.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FormTerm {
    pub dx: u32,
    pub exponent: MultiIndex,
}

impl FormTerm {
    pub fn new(exponent: MultiIndex, dx: u32) -> Self {
        FormTerm { dx, exponent }
    }

    pub fn degree(&self) -> usize {
        self.dx.count_ones() as usize
    }

    /// Euler weight `|beta| + p`.
    pub fn weight(&self) -> i64 {
        self.exponent.degree() as i64 + self.degree() as i64
    }
}

/// Polynomial differential form on the formal n-disk (possibly of mixed degree).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FormalForm {
    n: usize,
    terms: BTreeMap<FormTerm, Rational>,
}

/// Sign and remaining mask of `iota_{d_i} dx_I`, or `None` if `i` is not in `I`.
pub(crate) fn contract_slot(i: usize, mask: u32) -> Option<(i32, u32)> {
    let bit = 1u32 << i;
    if mask & bit == 0 {
        return None;
    }
    let below = (mask & (bit - 1)).count_ones();
    Some((if below % 2 == 0 { 1 } else { -1 }, mask & !bit))
}

impl FormalForm {
    pub fn zero(n: usize) -> Self {
        FormalForm {
            n,
            terms: BTreeMap::new(),
        }
    }

    pub fn term(exponent: MultiIndex, dx: u32, c: Rational) -> Self {
        let mut f = Self::zero(exponent.dim());
        f.add_term(FormTerm::new(exponent, dx), c);
        f
    }

    /// Zero-form from a polynomial.
    pub fn function(p: &Polynomial) -> Self {
        let mut f = Self::zero(p.n());
        for (e, c) in p.terms() {
            f.add_term(FormTerm::new(e.clone(), 0), c.clone());
        }
        f
    }

    /// Constant form `dx_{i1} ^ ... ^ dx_{ip}` for increasing indices.
    pub fn dx(n: usize, indices: &[usize]) -> Self {
        let mut mask = 0u32;
        let mut sign = 1;
        for &i in indices.iter().rev() {
            match insert_front(i, mask) {
                Some((s, m)) => {
                    sign *= s;
                    mask = m;
                }
                None => return Self::zero(n),
            }
        }
        Self::term(MultiIndex::zero(n), mask, rat(sign as i64))
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn add_term(&mut self, t: FormTerm, c: Rational) {
        accumulate(&mut self.terms, t, c);
    }

    pub fn terms(&self) -> impl Iterator<Item = (&FormTerm, &Rational)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, t: &FormTerm) -> Rational {
        self.terms.get(t).cloned().unwrap_or_else(Rational::zero)
    }

    /// Form degree if homogeneous (zero counts as degree 0).
    pub fn degree(&self) -> Option<usize> {
        let mut d = None;
        for t in self.terms.keys() {
            match d {
                None => d = Some(t.degree()),
                Some(x) if x == t.degree() => {}
                Some(_) => return None,
            }
        }
        Some(d.unwrap_or(0))
    }

    pub fn weight(&self) -> Option<i64> {
        let mut w = None;
        for t in self.terms.keys() {
            match w {
                None => w = Some(t.weight()),
                Some(x) if x == t.weight() => {}
                Some(_) => return None,
            }
        }
        w
    }

    pub fn scale(&self, s: &Rational) -> Self {
        let mut out = Self::zero(self.n);
        for (t, c) in &self.terms {
            out.add_term(t.clone(), c * s);
        }
        out
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (t, c) in &other.terms {
            out.add_term(t.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&rat(-1)))
    }

    /// The part of form degree `p`.
    pub fn component(&self, p: usize) -> Self {
        FormalForm {
            n: self.n,
            terms: self
                .terms
                .iter()
                .filter(|(t, _)| t.degree() == p)
                .map(|(t, c)| (t.clone(), c.clone()))
                .collect(),
        }
    }

    /// Value at the origin: the constant term of the degree-zero part.
    pub fn at_zero(&self) -> Rational {
        self.coefficient(&FormTerm::new(MultiIndex::zero(self.n), 0))
    }

    pub fn wedge(&self, other: &Self) -> Self {
        let mut out = Self::zero(self.n);
        for (a, ca) in &self.terms {
            for (b, cb) in &other.terms {
                if let Some(s) = wedge_sign(a.dx, b.dx) {
                    out.add_term(
                        FormTerm::new(a.exponent.add(&b.exponent), a.dx | b.dx),
                        ca * cb * rat(s as i64),
                    );
                }
            }
        }
        out
    }

    /// Formal de Rham differential.
    pub fn de_rham(&self) -> Self {
        let mut out = Self::zero(self.n);
        for (t, c) in &self.terms {
            for i in 0..self.n {
                let Some(lower) = t.exponent.lower(i) else {
                    continue;
                };
                if let Some((s, mask)) = insert_front(i, t.dx) {
                    out.add_term(
                        FormTerm::new(lower, mask),
                        c * rat(s as i64 * t.exponent.0[i] as i64),
                    );
                }
            }
        }
        out
    }

    /// Interior product with a vector field.
    pub fn contract(&self, x: &FormalVectorField) -> Result<Self> {
        if x.n() != self.n {
            return Err(Error::DimensionMismatch(format!(
                "contracting a form on the {}-disk with a field on the {}-disk",
                self.n,
                x.n()
            )));
        }
        let mut out = Self::zero(self.n);
        for (m, cm) in x.terms() {
            for (t, c) in &self.terms {
                if let Some((s, mask)) = contract_slot(m.direction, t.dx) {
                    out.add_term(
                        FormTerm::new(t.exponent.add(&m.exponent), mask),
                        c * cm * rat(s as i64),
                    );
                }
            }
        }
        Ok(out)
    }

    /// `L_X = d iota_X + iota_X d`.
    pub fn lie_derivative(&self, x: &FormalVectorField) -> Result<Self> {
        Ok(self
            .contract(x)?
            .de_rham()
            .add(&self.de_rham().contract(x)?))
    }
}

impl fmt::Display for FormalForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (t, c)) in self.terms.iter().enumerate() {
            if k > 0 {
                write!(f, " + ")?;
            }
            write!(f, "({})*{}", rational_to_string(c), t.exponent)?;
            for i in 0..self.n {
                if t.dx & (1 << i) != 0 {
                    write!(f, " dx{}", i + 1)?;
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::calculus::MonomialField;

    fn mono(e: &[u32], dx: &[usize], c: i64) -> FormalForm {
        let n = e.len();
        let mut f = FormalForm::dx(n, dx);
        f = FormalForm::function(&Polynomial::monomial(MultiIndex(e.to_vec()), rat(c)))
            .wedge(&f);
        f
    }

    fn field(e: &[u32], dir: usize) -> FormalVectorField {
        FormalVectorField::from_monomial(MonomialField::new(MultiIndex(e.to_vec()), dir), rat(1))
    }

    #[test]
    fn de_rham_examples() {
        assert_eq!(mono(&[1, 0], &[], 1).de_rham(), mono(&[0, 0], &[0], 1));
        assert_eq!(mono(&[1, 0], &[1], 1).de_rham(), mono(&[0, 0], &[0, 1], 1));
        assert_eq!(mono(&[1, 1], &[0], 1).de_rham(), mono(&[1, 0], &[0, 1], -1));
    }

    #[test]
    fn contraction_examples() {
        let d1 = field(&[0, 0], 0);
        assert_eq!(mono(&[0, 0], &[0], 1).contract(&d1).unwrap(), mono(&[0, 0], &[], 1));
        assert!(mono(&[0, 0], &[1], 1).contract(&d1).unwrap().is_zero());
        let x2d1 = field(&[0, 1], 0);
        assert_eq!(
            mono(&[0, 0], &[0, 1], 1).contract(&x2d1).unwrap(),
            mono(&[0, 1], &[1], 1)
        );
        assert!(mono(&[3, 0], &[], 1).contract(&d1).unwrap().is_zero());
    }

    #[test]
    fn lie_derivative_examples() {
        let d1 = field(&[0], 0);
        assert_eq!(mono(&[1], &[], 1).lie_derivative(&d1).unwrap(), mono(&[0], &[], 1));
        let x1d1 = field(&[1], 0);
        assert_eq!(mono(&[0], &[0], 1).lie_derivative(&x1d1).unwrap(), mono(&[0], &[0], 1));
        let e = FormalVectorField::euler(3);
        let w = mono(&[2, 0, 1], &[0, 2], 5);
        assert_eq!(w.lie_derivative(&e).unwrap(), w.scale(&rat(5)));
    }

    #[test]
    fn wedge_is_graded_commutative() {
        let a = FormalForm::dx(3, &[0]);
        let b = FormalForm::dx(3, &[2]);
        assert_eq!(a.wedge(&b), b.wedge(&a).scale(&rat(-1)));
        assert!(a.wedge(&a).is_zero());
    }
}
