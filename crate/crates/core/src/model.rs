//! The finite commutative dg algebra `Q[xi_1..xi_n, c_1..c_n] / (c^l : sum i l_i > n)`
//! with `d xi_i = c_i`, `|xi_i| = 2i - 1`, `|c_i| = 2i`.
//!
//! Its cohomology agrees with that of `vect(n)`; it serves as an independent
//! oracle for the Betti tables of the cochain engine.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::One;

use crate::calculus::accumulate;
use crate::ce::BettiTable;
use crate::linalg::{rat, rational_to_string, Rational, SparseMatrix};

/// Basis monomial `xi^S c^l`, with `S` a bitmask (bit `i - 1` for `xi_i`).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ModelMonomial {
    pub xi: u32,
    pub c: Vec<u32>,
}

impl ModelMonomial {
    pub fn n(&self) -> usize {
        self.c.len()
    }

    /// `sum i l_i`.
    pub fn chern_weight(&self) -> usize {
        self.c.iter().enumerate().map(|(i, &l)| (i + 1) * l as usize).sum()
    }

    pub fn degree(&self) -> usize {
        let odd: usize = (0..self.n()).filter(|i| self.xi & (1 << i) != 0).map(|i| 2 * i + 1).sum();
        odd + 2 * self.chern_weight()
    }
}

impl Ord for ModelMonomial {
    /// Degree first, then `(S, l)` lexicographically.
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.xi.cmp(&other.xi))
            .then_with(|| self.c.cmp(&other.c))
    }
}

impl PartialOrd for ModelMonomial {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for ModelMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        for i in 0..self.n() {
            if self.xi & (1 << i) != 0 {
                parts.push(format!("xi{}", i + 1));
            }
        }
        for (i, &l) in self.c.iter().enumerate() {
            match l {
                0 => {}
                1 => parts.push(format!("c{}", i + 1)),
                _ => parts.push(format!("c{}^{}", i + 1, l)),
            }
        }
        if parts.is_empty() {
            f.write_str("1")
        } else {
            f.write_str(&parts.join("*"))
        }
    }
}

/// Element of the model; monomials above Chern weight `n` are never stored.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CdgaElement {
    n: usize,
    terms: BTreeMap<ModelMonomial, Rational>,
}

impl CdgaElement {
    pub fn zero(n: usize) -> Self {
        CdgaElement {
            n,
            terms: BTreeMap::new(),
        }
    }

    pub fn monomial(m: ModelMonomial, coeff: Rational) -> Self {
        let mut e = Self::zero(m.n());
        e.add_term(m, coeff);
        e
    }

    pub fn xi(n: usize, i: usize) -> Self {
        Self::monomial(ModelMonomial { xi: 1 << (i - 1), c: vec![0; n] }, Rational::one())
    }

    pub fn c(n: usize, i: usize) -> Self {
        let mut c = vec![0; n];
        c[i - 1] = 1;
        Self::monomial(ModelMonomial { xi: 0, c }, Rational::one())
    }

    pub fn add_term(&mut self, m: ModelMonomial, coeff: Rational) {
        if m.chern_weight() <= self.n {
            accumulate(&mut self.terms, m, coeff);
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&ModelMonomial, &Rational)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero(self.n);
        for (a, ca) in &self.terms {
            for (b, cb) in &other.terms {
                if a.xi & b.xi != 0 {
                    continue;
                }
                // Move each xi of b past the xi of a above it.
                let mut swaps = 0;
                let mut bits = b.xi;
                while bits != 0 {
                    let j = bits.trailing_zeros();
                    bits &= bits - 1;
                    swaps += (a.xi >> (j + 1)).count_ones();
                }
                let sign = if swaps % 2 == 0 { rat(1) } else { rat(-1) };
                let c = a.c.iter().zip(&b.c).map(|(x, y)| x + y).collect();
                out.add_term(ModelMonomial { xi: a.xi | b.xi, c }, ca * cb * sign);
            }
        }
        out
    }
}

impl fmt::Display for CdgaElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(m, c)| format!("({}){}", rational_to_string(c), m))
            .collect();
        f.write_str(&parts.join(" + "))
    }
}

/// `d = sum_i c_i d/d xi_i`, removing `xi_i` with the sign of its position.
pub fn model_differential(e: &CdgaElement) -> CdgaElement {
    let mut out = CdgaElement::zero(e.n);
    for (m, coeff) in &e.terms {
        for i in 0..e.n {
            let bit = 1u32 << i;
            if m.xi & bit == 0 {
                continue;
            }
            let below = (m.xi & (bit - 1)).count_ones();
            let sign = if below % 2 == 0 { rat(1) } else { rat(-1) };
            let mut c = m.c.clone();
            c[i] += 1;
            out.add_term(ModelMonomial { xi: m.xi & !bit, c }, coeff * sign);
        }
    }
    out
}

/// Every nonzero basis monomial, in the model's canonical order.
pub fn model_basis(n: usize) -> Vec<ModelMonomial> {
    fn chern(i: usize, n: usize, rem: usize, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if i == n {
            out.push(cur.clone());
            return;
        }
        for l in 0..=(rem / (i + 1)) {
            cur.push(l as u32);
            chern(i + 1, n, rem - (i + 1) * l, cur, out);
            cur.pop();
        }
    }
    let mut cs = Vec::new();
    chern(0, n, n, &mut Vec::new(), &mut cs);
    let mut out: Vec<ModelMonomial> = (0u32..1 << n)
        .flat_map(|xi| cs.iter().map(move |c| ModelMonomial { xi, c: c.clone() }))
        .collect();
    out.sort();
    out
}

/// Unreduced Betti numbers of the model in degrees `0..=q_max`.
pub fn model_betti(n: usize, q_max: usize) -> BettiTable {
    model_betti_with_fault(n, q_max, None)
}

/// [`model_betti`] with the differential out of degree `fault` replaced by
/// zero, for exercising mismatch reporting.
pub fn model_betti_with_fault(n: usize, q_max: usize, fault: Option<usize>) -> BettiTable {
    let basis = model_basis(n);
    let by_degree = |q: usize| -> Vec<&ModelMonomial> { basis.iter().filter(|m| m.degree() == q).collect() };
    let mut table = BettiTable {
        n,
        coefficients: "model".into(),
        reduced: false,
        entries: BTreeMap::new(),
        slice_dims: BTreeMap::new(),
        ranks: BTreeMap::new(),
        max_bits: 0,
        capped_at: None,
    };
    for q in 0..=q_max {
        let src = by_degree(q);
        let dst = by_degree(q + 1);
        let index: BTreeMap<&ModelMonomial, usize> = dst.iter().enumerate().map(|(i, m)| (*m, i)).collect();
        let mut triplets = Vec::new();
        for (col, m) in src.iter().enumerate() {
            if fault == Some(q) {
                break;
            }
            let image = model_differential(&CdgaElement::monomial((*m).clone(), Rational::one()));
            for (t, v) in image.terms() {
                triplets.push((index[t], col, v.clone()));
            }
        }
        let d = SparseMatrix::from_triplets(dst.len(), src.len(), triplets).expect("indices from the basis");
        let (rank, stats) = d.rank_with_stats();
        table.slice_dims.insert(q, src.len());
        table.ranks.insert(q, rank);
        table.max_bits = table.max_bits.max(stats.max_bits);
    }
    for q in 0..=q_max {
        let before = if q == 0 { 0 } else { table.ranks[&(q - 1)] };
        table.entries.insert(q, table.slice_dims[&q] - table.ranks[&q] - before);
    }
    table
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn differential_examples() {
        assert_eq!(model_differential(&CdgaElement::xi(1, 1)), CdgaElement::c(1, 1));
        assert!(model_differential(&CdgaElement::xi(1, 1).mul(&CdgaElement::c(1, 1))).is_zero());
        let x1x2 = CdgaElement::xi(2, 1).mul(&CdgaElement::xi(2, 2));
        let expected = CdgaElement::c(2, 1)
            .mul(&CdgaElement::xi(2, 2))
            .add(&CdgaElement::xi(2, 1).mul(&CdgaElement::c(2, 2)).mul(&CdgaElement::monomial(
                ModelMonomial { xi: 0, c: vec![0, 0] },
                rat(-1),
            )));
        assert_eq!(model_differential(&x1x2), expected);
    }

    #[test]
    fn basis_count_and_d_squared() {
        for n in 1..=3 {
            let basis = model_basis(n);
            let chern = basis.iter().filter(|m| m.xi == 0).count();
            assert_eq!(basis.len(), (1 << n) * chern);
            for m in &basis {
                let e = CdgaElement::monomial(m.clone(), Rational::one());
                assert!(model_differential(&model_differential(&e)).is_zero());
            }
        }
        assert!(CdgaElement::c(1, 1).mul(&CdgaElement::c(1, 1)).is_zero());
    }

    #[test]
    fn betti_tables() {
        assert_eq!(model_betti(1, 3).dims(), vec![1, 0, 0, 1]);
        let t = model_betti(2, 8);
        assert_eq!(t.get(0), Some(1));
        assert_eq!(t.get(5), Some(2));
    }
}
