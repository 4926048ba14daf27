use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};

use super::jet::{JetPoly, JetVar};
use crate::calculus::{accumulate, MultiIndex, Polynomial};
use crate::linalg::{rat, rational_to_string, Rational};

/// Monomial `z^hol zbar^anti dzbar_J d/dz_i`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct DolbeaultTerm {
    pub direction: usize,
    pub forms: u32,
    pub hol: MultiIndex,
    pub anti: MultiIndex,
}

impl DolbeaultTerm {
    pub fn n(&self) -> usize {
        self.hol.dim()
    }

    /// Degree `|J|` in `Omega^{0,*}(C^n, T^{1,0})`.
    pub fn ghost_degree(&self) -> usize {
        self.forms.count_ones() as usize
    }

    /// Parity after the shift by one, matching the coordinates that read it.
    pub fn is_odd(&self) -> bool {
        self.forms.count_ones() % 2 == 0
    }

    pub fn polynomial_degree(&self) -> u32 {
        self.hol.degree() + self.anti.degree()
    }
}

/// Element of `Omega^{0,*}(C^n, T^{1,0})` with polynomial coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DolbeaultField {
    n: usize,
    terms: BTreeMap<DolbeaultTerm, Rational>,
}

impl DolbeaultField {
    pub fn zero(n: usize) -> Self {
        DolbeaultField {
            n,
            terms: BTreeMap::new(),
        }
    }

    pub fn monomial(direction: usize, forms: u32, hol: MultiIndex, anti: MultiIndex) -> Self {
        let n = hol.dim();
        let mut f = Self::zero(n);
        f.add_term(
            DolbeaultTerm {
                direction,
                forms,
                hol,
                anti,
            },
            Rational::one(),
        );
        f
    }

    pub fn add_term(&mut self, t: DolbeaultTerm, c: Rational) {
        accumulate(&mut self.terms, t, c);
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (t, c) in &other.terms {
            out.add_term(t.clone(), c.clone());
        }
        out
    }

    pub fn scale(&self, s: &Rational) -> Self {
        let mut out = Self::zero(self.n);
        for (t, c) in &self.terms {
            out.add_term(t.clone(), c * s);
        }
        out
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn terms(&self) -> impl Iterator<Item = (&DolbeaultTerm, &Rational)> {
        self.terms.iter()
    }

    /// `|J|` when every term shares it.
    pub fn ghost_degree(&self) -> Option<usize> {
        let mut it = self.terms.keys().map(DolbeaultTerm::ghost_degree);
        let first = it.next()?;
        it.all(|d| d == first).then_some(first)
    }

    /// Every monomial field with polynomial degree at most `max_degree`.
    pub fn monomials_up_to(n: usize, max_degree: u32) -> Vec<DolbeaultTerm> {
        let mut out = Vec::new();
        for d in 0..=max_degree {
            for e in MultiIndex::all_of_degree(2 * n, d) {
                for direction in 0..n {
                    for forms in 0..(1u32 << n) {
                        out.push(DolbeaultTerm {
                            direction,
                            forms,
                            hol: MultiIndex(e.0[..n].to_vec()),
                            anti: MultiIndex(e.0[n..].to_vec()),
                        });
                    }
                }
            }
        }
        out
    }
}

impl fmt::Display for DolbeaultField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(t, c)| {
                let forms: String = (0..self.n)
                    .filter(|l| t.forms & (1 << l) != 0)
                    .map(|l| format!(" dzbar{}", l + 1))
                    .collect();
                format!("({}) z^{} zbar^{}{} d{}", rational_to_string(c), t.hol, t.anti, forms, t.direction + 1)
            })
            .collect();
        f.write_str(&parts.join(" + "))
    }
}

/// `c(t)` at the base point: a monomial in `(z0, zbar0)`, or `None` if zero.
pub fn pair(v: &JetVar, t: &DolbeaultTerm) -> Option<(Rational, MultiIndex)> {
    if v.direction != t.direction || v.forms != t.forms {
        return None;
    }
    let n = t.n();
    let mut coeff = Rational::one();
    let mut exponent = Vec::with_capacity(2 * n);
    for (have, want) in t.hol.0.iter().chain(&t.anti.0).zip(v.hol.0.iter().chain(&v.anti.0)) {
        if want > have {
            return None;
        }
        for k in (have - want + 1)..=*have {
            coeff *= rat(k as i64);
        }
        exponent.push(have - want);
    }
    Some((coeff, MultiIndex(exponent)))
}

/// Value of a jet cochain: de Rham form `(dzbar, dz)` to a polynomial in `(z0, zbar0)`.
pub type JetValue = BTreeMap<(u32, u32), Polynomial>;

/// `sum_sigma kappa(sigma) prod_r c_r(t_sigma(r))`, where `kappa` is the
/// Koszul sign of reordering the inputs into `t_sigma(1), ..., t_sigma(k)`.
fn pair_monomial(vars: &[JetVar], inputs: &[&DolbeaultTerm]) -> Option<(Rational, MultiIndex)> {
    fn rec(
        r: usize,
        vars: &[JetVar],
        inputs: &[&DolbeaultTerm],
        used: &mut Vec<usize>,
        acc: (Rational, MultiIndex),
        out: &mut Option<(Rational, MultiIndex)>,
    ) {
        if r == vars.len() {
            let mut s = 1;
            for p in 0..used.len() {
                for q in (p + 1)..used.len() {
                    if used[p] > used[q] && inputs[used[p]].is_odd() && inputs[used[q]].is_odd() {
                        s = -s;
                    }
                }
            }
            let value = acc.0 * rat(s);
            // Every assignment yields the same base-point monomial.
            match out {
                Some((c, _)) => *c += value,
                None => *out = Some((value, acc.1)),
            }
            return;
        }
        for (idx, t) in inputs.iter().enumerate() {
            if used.contains(&idx) {
                continue;
            }
            let Some((c, e)) = pair(&vars[r], t) else {
                continue;
            };
            used.push(idx);
            rec(r + 1, vars, inputs, used, (&acc.0 * c, acc.1.add(&e)), out);
            used.pop();
        }
    }
    let n2 = inputs.first().map_or(0, |t| 2 * t.n());
    let mut out = None;
    rec(0, vars, inputs, &mut Vec::new(), (Rational::one(), MultiIndex::zero(n2)), &mut out);
    out.filter(|(c, _)| !c.is_zero())
}

impl JetPoly {
    /// Evaluates the body on monomial inputs; terms of other arities are ignored.
    pub fn evaluate_terms(&self, inputs: &[&DolbeaultTerm]) -> JetValue {
        let mut out: JetValue = BTreeMap::new();
        let k = inputs.len();
        for (key, c) in self.terms() {
            if key.arity() != k {
                continue;
            }
            if k == 0 {
                let p = Polynomial::monomial(key.base.clone(), c.clone());
                let slot = out.entry((key.dzbar, key.dz)).or_insert_with(|| Polynomial::zero(2 * self.n()));
                *slot = slot.add(&p);
                continue;
            }
            if let Some((v, e)) = pair_monomial(&key.vars, inputs) {
                let p = Polynomial::monomial(e.add(&key.base), c * v);
                let slot = out.entry((key.dzbar, key.dz)).or_insert_with(|| Polynomial::zero(2 * self.n()));
                *slot = slot.add(&p);
            }
        }
        out.retain(|_, p| !p.is_zero());
        out
    }

    /// Evaluates the body on arbitrary inputs by multilinear expansion.
    pub fn evaluate(&self, inputs: &[DolbeaultField]) -> JetValue {
        fn rec<'a>(
            p: &JetPoly,
            inputs: &'a [DolbeaultField],
            cur: &mut Vec<&'a DolbeaultTerm>,
            coeff: Rational,
            out: &mut JetValue,
        ) {
            if cur.len() == inputs.len() {
                for (form, v) in p.evaluate_terms(cur) {
                    let slot = out.entry(form).or_insert_with(|| Polynomial::zero(2 * p.n()));
                    *slot = slot.add(&v.scale(&coeff));
                }
                return;
            }
            for (t, c) in inputs[cur.len()].terms() {
                cur.push(t);
                rec(p, inputs, cur, &coeff * c, out);
                cur.pop();
            }
        }
        let mut out = BTreeMap::new();
        rec(self, inputs, &mut Vec::new(), Rational::one(), &mut out);
        out.retain(|_, p: &mut Polynomial| !p.is_zero());
        out
    }
}
