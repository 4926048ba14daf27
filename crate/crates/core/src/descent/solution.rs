use rayon::prelude::*;

use super::dolbeault::{DolbeaultField, DolbeaultTerm};
use super::jet::{JetKey, JetPoly, JetVar};
use super::operators::{d_ce, dbar_t, de_rham, del, del_bar, descent_exponential};
use crate::calculus::MultiIndex;
use crate::ce::ModuleCochain;
use crate::error::{Error, Result};
use crate::linalg::{rat, Rational};

/// Taylor pullback `j^*`: `theta_{x^a d_i} -> c^i_{emptyset;a,0} / a!`, extended multiplicatively.
///
/// The result has bidegree `(0, 0)` and constant coefficients.
pub fn j_pullback(phi: &ModuleCochain) -> Result<JetPoly> {
    if !phi.is_trivial() {
        return Err(Error::IncompatibleCoefficients(
            "the Taylor pullback takes trivial-coefficient cochains".into(),
        ));
    }
    let n = phi.n();
    let mut out = JetPoly::zero(n);
    for (key, c) in phi.terms() {
        let mut vars = Vec::with_capacity(key.fields.len());
        let mut scale = c.clone();
        for f in &key.fields {
            scale /= f.exponent.factorial();
            vars.push(JetVar::holomorphic(f.direction, f.exponent.clone()));
        }
        out.add_term(
            JetKey {
                dzbar: 0,
                dz: 0,
                base: MultiIndex::zero(2 * n),
                vars,
            },
            scale,
        );
    }
    Ok(out)
}

/// `Phi = exp(sum dzbar_l etabar_l + dz_l eta_l) j^* phi` and its components.
#[derive(Clone, Debug)]
pub struct DescentSolution {
    pub n: usize,
    pub phi0: JetPoly,
    pub total: JetPoly,
}

impl DescentSolution {
    /// `phi^{i,j}`: `i` factors `dz`, `j` factors `dzbar`.
    pub fn component(&self, i: usize, j: usize) -> JetPoly {
        self.total.bidegree_component(i, j)
    }

    /// Nonzero bidegrees, in increasing order.
    pub fn bidegrees(&self) -> Vec<(usize, usize)> {
        let mut out: Vec<(usize, usize)> = self
            .total
            .terms()
            .map(|(k, _)| (k.dz.count_ones() as usize, k.dzbar.count_ones() as usize))
            .collect();
        out.sort_unstable();
        out.dedup();
        out
    }

    pub fn integrand(&self) -> LocalFunctionalIntegrand {
        LocalFunctionalIntegrand::from_top_form(&self.component(self.n, self.n))
    }
}

/// Builds the descent solution of a closed trivial-coefficient cochain.
///
/// Closedness is tested after the pullback: `j^*` is injective and commutes
/// with the differentials.
pub fn descent_solution(phi: &ModuleCochain) -> Result<DescentSolution> {
    let phi0 = j_pullback(phi)?;
    if !d_ce(&phi0).is_zero() {
        return Err(Error::NotClosed("descent needs a cocycle of vect(n)".into()));
    }
    let total = descent_exponential(&phi0);
    Ok(DescentSolution {
        n: phi.n(),
        phi0,
        total,
    })
}

/// The body of a `(n, n)` component against `vol = dz_1 ... dz_n dzbar_1 ... dzbar_n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LocalFunctionalIntegrand {
    pub n: usize,
    pub density: JetPoly,
}

impl LocalFunctionalIntegrand {
    pub fn from_top_form(p: &JetPoly) -> Self {
        let n = p.n();
        let all = (1u32 << n) - 1;
        // dz_all dzbar_all = (-1)^{n n} dzbar_all dz_all.
        let s = if n % 2 == 0 { rat(1) } else { rat(-1) };
        LocalFunctionalIntegrand {
            n,
            density: p.form_coefficient(all, all).scale(&s),
        }
    }

    /// `density * vol`.
    pub fn top_form(&self) -> JetPoly {
        let all = (1u32 << self.n) - 1;
        let s = if self.n % 2 == 0 { rat(1) } else { rat(-1) };
        JetPoly::form(self.n, all, all).mul(&self.density).scale(&s)
    }
}

pub fn delta_integrand(phi: &ModuleCochain) -> Result<LocalFunctionalIntegrand> {
    Ok(descent_solution(phi)?.integrand())
}

/// One descent equation at one bidegree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EquationCheck {
    /// `"holomorphic"` or `"cartan"`.
    pub equation: &'static str,
    pub bidegree: (usize, usize),
    pub holds: bool,
}

/// Exact verification of the descent equations.
#[derive(Clone, Debug)]
pub struct DescentCertificate {
    pub checks: Vec<EquationCheck>,
    /// Symbolic identity `(del + delbar + d_T) Phi = 0`.
    pub total_vanishes: bool,
    pub inputs: Option<InputCheck>,
}

impl DescentCertificate {
    pub fn passed(&self) -> bool {
        self.total_vanishes && self.checks.iter().all(|c| c.holds) && self.inputs.as_ref().is_none_or(|i| i.passed())
    }
}

/// Evaluation of both sides of every descent equation on monomial inputs.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InputCheck {
    pub bound: u32,
    pub margin: u32,
    pub tuples: usize,
    /// Tuples on which some term of an equation was nonzero.
    pub nonvacuous: usize,
    pub failures: usize,
    /// Same verdict at `bound` and `bound + margin`.
    pub stabilized: bool,
}

impl InputCheck {
    pub fn passed(&self) -> bool {
        self.failures == 0 && self.stabilized && self.nonvacuous > 0
    }
}

/// The pairs `(A, B)` with `A + B = 0` required at each bidegree.
fn equation_terms(sol: &DescentSolution) -> Vec<(&'static str, (usize, usize), JetPoly, JetPoly)> {
    let n = sol.n;
    let mut out = Vec::new();
    for i in 0..=n {
        for j in 0..=n {
            let c = sol.component(i, j);
            // delbar phi^{i,j-1} + dbar_T phi^{i,j} lands in bidegree (i, j).
            let prev_bar = if j > 0 { del_bar(&sol.component(i, j - 1)) } else { JetPoly::zero(n) };
            out.push(("holomorphic", (i, j), prev_bar, dbar_t(&c)));
            let prev = if i > 0 { del(&sol.component(i - 1, j)) } else { JetPoly::zero(n) };
            out.push(("cartan", (i, j), prev, d_ce(&c)));
        }
    }
    out
}

/// Checks both descent equations symbolically, and optionally on monomial
/// inputs of polynomial degree up to `bound` (default: jet order of `phi^0`
/// plus one) and again at `bound + margin`.
pub fn verify_descent(sol: &DescentSolution, inputs: Option<(Option<u32>, u32)>) -> DescentCertificate {
    let eqs = equation_terms(sol);
    let checks = eqs
        .iter()
        .map(|(name, bd, a, b)| EquationCheck {
            equation: name,
            bidegree: *bd,
            holds: a.add(b).is_zero(),
        })
        .collect();
    let residual = de_rham(&sol.total).add(&d_ce(&sol.total)).add(&dbar_t(&sol.total));
    let inputs = inputs.map(|(bound, margin)| {
        let bound = bound.unwrap_or(sol.phi0.jet_order() + 1);
        let at = |b: u32| check_on_inputs(sol.n, &eqs, b);
        let (tuples, nonvacuous, failures) = at(bound);
        let (_, _, failures_next) = at(bound + margin);
        InputCheck {
            bound,
            margin,
            tuples,
            nonvacuous,
            failures,
            stabilized: (failures == 0) == (failures_next == 0),
        }
    });
    DescentCertificate {
        checks,
        total_vanishes: residual.is_zero(),
        inputs,
    }
}

/// Multisets of `k` indices; odd inputs are not repeated.
fn tuples(terms: &[DolbeaultTerm], k: usize) -> Vec<Vec<usize>> {
    fn rec(terms: &[DolbeaultTerm], k: usize, start: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..terms.len() {
            let next = if terms[i].is_odd() { i + 1 } else { i };
            cur.push(i);
            rec(terms, k, next, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(terms, k, 0, &mut Vec::new(), &mut out);
    out
}

fn check_on_inputs(n: usize, eqs: &[(&'static str, (usize, usize), JetPoly, JetPoly)], bound: u32) -> (usize, usize, usize) {
    let terms = DolbeaultField::monomials_up_to(n, bound);
    let max_arity = eqs
        .iter()
        .flat_map(|(_, _, a, b)| a.terms().chain(b.terms()).map(|(k, _)| k.arity()))
        .max()
        .unwrap_or(0);
    let mut total = (0, 0, 0);
    for k in 1..=max_arity {
        let all = tuples(&terms, k);
        let (nonvacuous, failures) = all
            .par_iter()
            .map(|idx| {
                let args: Vec<&DolbeaultTerm> = idx.iter().map(|&i| &terms[i]).collect();
                let mut seen = false;
                let mut failed = false;
                for (_, _, a, b) in eqs {
                    let va = a.evaluate_terms(&args);
                    let vb = b.evaluate_terms(&args);
                    seen |= !va.is_empty() || !vb.is_empty();
                    let neg: super::dolbeault::JetValue = vb.into_iter().map(|(f, p)| (f, p.scale(&rat(-1)))).collect();
                    failed |= va != neg;
                }
                (usize::from(seen), usize::from(failed))
            })
            .reduce(|| (0, 0), |x, y| (x.0 + y.0, x.1 + y.1));
        total.0 += all.len();
        total.1 += nonvacuous;
        total.2 += failures;
    }
    total
}

/// Scalar `lambda` with `lhs = lambda * rhs`, if any.
pub fn jet_proportionality(lhs: &JetPoly, rhs: &JetPoly) -> Option<Rational> {
    let keys: std::collections::BTreeSet<&JetKey> = lhs.terms().chain(rhs.terms()).map(|(k, _)| k).collect();
    let l: Vec<Rational> = keys.iter().map(|k| lhs.coefficient(k)).collect();
    let r: Vec<Rational> = keys.iter().map(|k| rhs.coefficient(k)).collect();
    crate::linalg::proportionality(&l, &r)
}

/// A field with a single monomial term, for spot evaluations.
pub fn monomial_field(direction: usize, forms: u32, hol: &[u32], anti: &[u32]) -> DolbeaultField {
    DolbeaultField::monomial(direction, forms, MultiIndex(hol.to_vec()), MultiIndex(anti.to_vec()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::calculus::{MonomialField, Polynomial};
    use crate::classes::wronskian_cocycle;

    fn c(a: u32) -> JetPoly {
        JetPoly::var(JetVar::holomorphic(0, MultiIndex(vec![a])))
    }

    fn cbar(a: u32) -> JetPoly {
        JetPoly::var(JetVar::new(0, 1, MultiIndex(vec![a]), MultiIndex(vec![0])))
    }

    #[test]
    fn pullback_of_first_derivative() {
        let phi = ModuleCochain::trivial_from_terms(1, [(vec![MonomialField::new(MultiIndex(vec![1]), 0)], rat(1))]).unwrap();
        let phi0 = j_pullback(&phi).unwrap();
        let a = monomial_field(0, 0, &[3], &[1]);
        let b = monomial_field(0, 1, &[2], &[0]);
        let v = phi0.evaluate(&[a.add(&b)]);
        // d_z (z^3 zbar) = 3 z^2 zbar at the base point.
        assert_eq!(v[&(0, 0)], Polynomial::monomial(MultiIndex(vec![2, 1]), rat(3)));
        assert!(phi0.evaluate(&[b]).is_empty());
    }

    #[test]
    fn wronskian_descent_matches_displayed_formulas() {
        let sol = descent_solution(&wronskian_cocycle().unwrap()).unwrap();
        assert_eq!(sol.phi0, c(0).mul(&c(1)).mul(&c(2)));
        let psi01 = cbar(0).mul(&c(1)).mul(&c(2)).sub(&c(0).mul(&cbar(1)).mul(&c(2))).add(&c(0).mul(&c(1)).mul(&cbar(2)));
        assert_eq!(sol.component(0, 1), JetPoly::form(1, 1, 0).mul(&psi01));
        let psi11 = cbar(1).mul(&c(2)).sub(&cbar(2).mul(&c(1)));
        assert_eq!(sol.component(1, 1), JetPoly::form(1, 0, 1).mul(&JetPoly::form(1, 1, 0)).mul(&psi11));
        assert_eq!(sol.integrand().density, psi11);
        let cert = verify_descent(&sol, None);
        assert!(cert.passed(), "{cert:?}");
    }

    #[test]
    fn zero_cochain_descends_to_zero() {
        let sol = descent_solution(&ModuleCochain::trivial_from_terms(1, []).unwrap()).unwrap();
        assert!(sol.total.is_zero());
    }

    #[test]
    fn open_cochain_is_rejected() {
        let phi = ModuleCochain::trivial_from_terms(1, [(vec![MonomialField::new(MultiIndex(vec![1]), 0)], rat(1))]).unwrap();
        assert!(matches!(descent_solution(&phi), Err(Error::NotClosed(_))));
    }

    #[test]
    fn input_check_on_wronskian() {
        let sol = descent_solution(&wronskian_cocycle().unwrap()).unwrap();
        let cert = verify_descent(&sol, Some((None, 1)));
        let inputs = cert.inputs.clone().unwrap();
        assert!(cert.passed(), "{inputs:?}");
        assert_eq!(inputs.bound, 3);
    }

    #[test]
    fn pullback_is_a_chain_map() {
        use crate::ce::{ce_differential, slice_basis, SliceKind};
        for (n, q_max) in [(1, 4), (2, 3)] {
            for q in 1..=q_max {
                let kind = SliceKind::Trivial { weight: 0 };
                for key in slice_basis(n, q, kind) {
                    let phi = kind.cochain(n, &key);
                    let lhs = j_pullback(&ce_differential(&phi).unwrap()).unwrap();
                    assert_eq!(lhs, d_ce(&j_pullback(&phi).unwrap()), "n = {n}, {key}");
                }
            }
        }
    }
}
