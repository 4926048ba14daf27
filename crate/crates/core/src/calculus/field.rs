use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use num_traits::Zero;

use super::{accumulate, MultiIndex, Polynomial};
use crate::error::{Error, Result};
use crate::linalg::{rat, rational_to_string, Rational};

/// The basis field `x^alpha d_direction` of `vect(n)` (direction is 0-based).
///
/// Ordered canonically by `(|alpha|, alpha, direction)`; the same order is
/// used for the dual covectors that index cochains.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MonomialField {
    pub exponent: MultiIndex,
    pub direction: usize,
}

impl MonomialField {
    pub fn new(exponent: MultiIndex, direction: usize) -> Self {
        debug_assert!(direction < exponent.dim());
        MonomialField {
            exponent,
            direction,
        }
    }

    pub fn n(&self) -> usize {
        self.exponent.dim()
    }

    /// Jet order `|alpha|`.
    pub fn order(&self) -> u32 {
        self.exponent.degree()
    }

    /// Euler weight `|alpha| - 1`.
    pub fn weight(&self) -> i64 {
        self.order() as i64 - 1
    }

    /// Weight under the diagonal torus: `alpha - e_direction`.
    pub fn multi_weight(&self) -> Vec<i64> {
        let mut w: Vec<i64> = self.exponent.0.iter().map(|&a| a as i64).collect();
        w[self.direction] -= 1;
        w
    }

    /// Every basis field of `vect(n)` with jet order exactly `order`, in canonical order.
    pub fn all_of_order(n: usize, order: u32) -> Vec<MonomialField> {
        let mut out: Vec<MonomialField> = MultiIndex::all_of_degree(n, order)
            .into_iter()
            .flat_map(|e| (0..n).map(move |i| MonomialField::new(e.clone(), i)))
            .collect();
        out.sort();
        out
    }

    /// Every basis field with jet order at most `max_order`, in canonical order.
    pub fn all_up_to(n: usize, max_order: u32) -> Vec<MonomialField> {
        (0..=max_order)
            .flat_map(|d| Self::all_of_order(n, d))
            .collect()
    }

    /// `[self, other]` expanded in the monomial basis.
    pub fn bracket(&self, other: &MonomialField) -> Vec<(MonomialField, Rational)> {
        // [x^a d_i, x^b d_j] = b_i x^(a+b-e_i) d_j - a_j x^(a+b-e_j) d_i
        let mut out = Vec::with_capacity(2);
        let sum = self.exponent.add(&other.exponent);
        let bi = other.exponent.0[self.direction];
        if bi > 0 {
            out.push((
                MonomialField::new(sum.lower(self.direction).unwrap(), other.direction),
                rat(bi as i64),
            ));
        }
        let aj = self.exponent.0[other.direction];
        if aj > 0 {
            out.push((
                MonomialField::new(sum.lower(other.direction).unwrap(), self.direction),
                rat(-(aj as i64)),
            ));
        }
        if out.len() == 2 && out[0].0 == out[1].0 {
            let c = &out[0].1 + &out[1].1;
            let f = out[0].0.clone();
            out.clear();
            if !c.is_zero() {
                out.push((f, c));
            }
        }
        out
    }
}

impl Ord for MonomialField {
    fn cmp(&self, other: &Self) -> Ordering {
        self.exponent
            .cmp(&other.exponent)
            .then_with(|| self.direction.cmp(&other.direction))
    }
}

impl PartialOrd for MonomialField {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for MonomialField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}*d{}", self.exponent, self.direction + 1)
    }
}

/// A finite linear combination of monomial fields: a polynomial truncation of a formal vector field.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FormalVectorField {
    n: usize,
    terms: BTreeMap<MonomialField, Rational>,
}

impl FormalVectorField {
    pub fn zero(n: usize) -> Self {
        FormalVectorField {
            n,
            terms: BTreeMap::new(),
        }
    }

    pub fn from_monomial(m: MonomialField, c: Rational) -> Self {
        let mut f = Self::zero(m.n());
        f.add_term(m, c);
        f
    }

    /// `sum_j components[j] d_j`.
    pub fn from_components(components: &[Polynomial]) -> Self {
        let n = components.len();
        let mut f = Self::zero(n);
        for (j, p) in components.iter().enumerate() {
            for (e, c) in p.terms() {
                f.add_term(MonomialField::new(e.clone(), j), c.clone());
            }
        }
        f
    }

    /// The Euler field `sum_i x_i d_i`.
    pub fn euler(n: usize) -> Self {
        let mut f = Self::zero(n);
        for i in 0..n {
            f.add_term(MonomialField::new(MultiIndex::unit(n, i), i), rat(1));
        }
        f
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn add_term(&mut self, m: MonomialField, c: Rational) {
        assert_eq!(m.n(), self.n, "monomial field dimension");
        accumulate(&mut self.terms, m, c);
    }

    pub fn terms(&self) -> impl Iterator<Item = (&MonomialField, &Rational)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, m: &MonomialField) -> Rational {
        self.terms.get(m).cloned().unwrap_or_else(Rational::zero)
    }

    /// The coefficient function `f_j` of `d_j`.
    pub fn component(&self, j: usize) -> Polynomial {
        let mut p = Polynomial::zero(self.n);
        for (m, c) in &self.terms {
            if m.direction == j {
                p.add_term(m.exponent.clone(), c.clone());
            }
        }
        p
    }

    pub fn scale(&self, s: &Rational) -> Self {
        let mut out = Self::zero(self.n);
        for (m, c) in &self.terms {
            out.add_term(m.clone(), c * s);
        }
        out
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_dim(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        Ok(out)
    }

    fn check_dim(&self, other: &Self) -> Result<()> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch(format!(
                "fields on the {}-disk and the {}-disk",
                self.n, other.n
            )));
        }
        Ok(())
    }

    /// Lie bracket (commutator of derivations).
    pub fn bracket(&self, other: &Self) -> Result<Self> {
        self.check_dim(other)?;
        let mut out = Self::zero(self.n);
        for (a, ca) in &self.terms {
            for (b, cb) in &other.terms {
                let cab = ca * cb;
                for (m, c) in a.bracket(b) {
                    out.add_term(m, c * &cab);
                }
            }
        }
        Ok(out)
    }

    /// Applies the field as a derivation to a function.
    pub fn apply(&self, f: &Polynomial) -> Polynomial {
        let mut out = Polynomial::zero(self.n);
        for j in 0..self.n {
            let fj = self.component(j);
            if !fj.is_zero() {
                out = out.add(&fj.mul(&f.derivative(j)));
            }
        }
        out
    }

    /// The largest `k` with the field in `vect(n)_k`, i.e. all coefficients
    /// vanish to order `k + 1`. `None` for the zero field.
    pub fn filtration_level(&self) -> Option<i64> {
        self.terms.keys().map(|m| m.order() as i64 - 1).min()
    }

    /// Euler weight if every term has the same weight.
    pub fn weight(&self) -> Option<i64> {
        let mut w = None;
        for m in self.terms.keys() {
            match w {
                None => w = Some(m.weight()),
                Some(x) if x == m.weight() => {}
                Some(_) => return None,
            }
        }
        w
    }
}

impl fmt::Display for FormalVectorField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (m, c)) in self.terms.iter().enumerate() {
            if k > 0 {
                write!(f, " + ")?;
            }
            write!(f, "({})*{}", rational_to_string(c), m)?;
        }
        Ok(())
    }
}
