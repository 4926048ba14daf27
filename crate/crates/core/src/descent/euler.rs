//! Local functionals modulo total derivatives, decided by the Euler operator.
//!
//! A translation-invariant polynomial density without constant term is a
//! total divergence exactly when its variational derivative vanishes for
//! every field component.

use std::collections::{BTreeMap, BTreeSet};

use super::jet::{JetKey, JetPoly, JetVar};
use super::operators::{del, eta_bar, total_derivative};
use crate::calculus::MultiIndex;
use crate::error::{Error, Result};
use crate::linalg::{proportionality, rat, Rational};

/// A field component `mu^i_J`, the variable family the Euler operator varies.
pub type FieldSlot = (usize, u32);

/// Left partial derivative `d/dv`, a derivation of the parity of `v`.
pub fn partial(p: &JetPoly, v: &JetVar) -> JetPoly {
    all_partials(p).remove(v).unwrap_or_else(|| JetPoly::zero(p.n()))
}

/// Every nonzero `d/dv p`, in one pass over the terms.
fn all_partials(p: &JetPoly) -> BTreeMap<JetVar, JetPoly> {
    let mut out: BTreeMap<JetVar, JetPoly> = BTreeMap::new();
    for (k, c) in p.terms() {
        let mut passed = k.form_degree();
        for (r, v) in k.vars.iter().enumerate() {
            let odd = v.is_odd() && passed % 2 == 1;
            let mut vars = k.vars.clone();
            vars.remove(r);
            let key = JetKey { vars, ..k.clone() };
            let coeff = if odd { -c.clone() } else { c.clone() };
            out.entry(v.clone()).or_insert_with(|| JetPoly::zero(p.n())).add_term(key, coeff);
            if v.is_odd() {
                passed += 1;
            }
        }
    }
    out
}

/// `E_{i,J}(F) = sum_{a,b} (-D)^a (-Dbar)^b dF/dc^i_{J;a,b}` for every slot of `F`.
pub fn euler_operator(density: &JetPoly) -> Result<BTreeMap<FieldSlot, JetPoly>> {
    if !density.is_translation_invariant() {
        return Err(Error::NotTranslationInvariant);
    }
    let n = density.n();
    let mut out: BTreeMap<FieldSlot, JetPoly> = BTreeMap::new();
    for (v, mut e) in all_partials(density) {
        for (l, &k) in v.hol.0.iter().enumerate() {
            for _ in 0..k {
                e = total_derivative(l, true, &e).scale(&rat(-1));
            }
        }
        for (l, &k) in v.anti.0.iter().enumerate() {
            for _ in 0..k {
                e = total_derivative(l, false, &e).scale(&rat(-1));
            }
        }
        let slot = out.entry((v.direction, v.forms)).or_insert_with(|| JetPoly::zero(n));
        *slot = slot.add(&e);
    }
    out.retain(|_, e| !e.is_zero());
    Ok(out)
}

fn has_constant_term(p: &JetPoly) -> bool {
    p.terms().any(|(k, _)| k.vars.is_empty())
}

/// Whether `density` is `sum_l D_l(F_l) + Dbar_l(G_l)` for jet polynomials `F`, `G`.
pub fn is_total_divergence(density: &JetPoly) -> Result<bool> {
    Ok(euler_operator(density)?.is_empty() && !has_constant_term(density))
}

/// `lambda` with `lhs - lambda rhs` a total divergence, if one exists.
///
/// When `rhs` is itself a divergence the scalar is not determined; the
/// result is then `Some(0)` exactly when `lhs` is a divergence too.
pub fn divergence_scalar(lhs: &JetPoly, rhs: &JetPoly) -> Result<Option<Rational>> {
    let el = euler_operator(lhs)?;
    let er = euler_operator(rhs)?;
    let mut keys: BTreeSet<(FieldSlot, JetKey)> = BTreeSet::new();
    for (s, p) in el.iter().chain(er.iter()) {
        keys.extend(p.terms().map(|(k, _)| (*s, k.clone())));
    }
    let coeff = |m: &BTreeMap<FieldSlot, JetPoly>, s: &FieldSlot, k: &JetKey| {
        m.get(s).map(|p| p.coefficient(k)).unwrap_or_else(|| rat(0))
    };
    let l: Vec<Rational> = keys.iter().map(|(s, k)| coeff(&el, s, k)).collect();
    let r: Vec<Rational> = keys.iter().map(|(s, k)| coeff(&er, s, k)).collect();
    let constant = |p: &JetPoly| p.filter(|k| k.vars.is_empty());
    let Some(lambda) = proportionality(&l, &r) else {
        return Ok(None);
    };
    let rest = constant(lhs).sub(&constant(rhs).scale(&lambda));
    Ok(rest.is_zero().then_some(lambda))
}

/// A matrix entry of `J(mu)` or `del J(mu)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum JetFactor {
    /// `J(mu)_{ij} = d mu_i / d z_j`.
    J,
    /// `del J(mu)`, the entrywise holomorphic de Rham differential.
    DelJ,
}

/// `mu^i` with its antiholomorphic form parts moved onto base-point `dzbar`s:
/// `exp(sum_l dzbar_l etabar_l) c^i_{emptyset; a, 0}`.
pub fn field_jet(n: usize, direction: usize, hol: MultiIndex) -> JetPoly {
    let mut out = JetPoly::var(JetVar::holomorphic(direction, hol));
    let mut term = out.clone();
    let mut factorial = rat(1);
    for k in 1..=n {
        term = (0..n).fold(JetPoly::zero(n), |acc, l| acc.add(&eta_bar(l, &term).wedge_form(l, false)));
        factorial *= rat(k as i64);
        out = out.add(&term.scale(&(rat(1) / &factorial)));
    }
    out
}

fn matrix(n: usize, f: JetFactor) -> Vec<JetPoly> {
    let mut out = Vec::with_capacity(n * n);
    for i in 0..n {
        for j in 0..n {
            let entry = field_jet(n, i, MultiIndex::unit(n, j));
            out.push(match f {
                JetFactor::J => entry,
                JetFactor::DelJ => del(&entry),
            });
        }
    }
    out
}

/// `Tr(F_1 ... F_k)` of a word in `J` and `del J`.
pub fn trace_word(n: usize, word: &[JetFactor]) -> JetPoly {
    let mut acc: Option<Vec<JetPoly>> = None;
    for &f in word {
        let m = matrix(n, f);
        acc = Some(match acc {
            None => m,
            Some(a) => {
                let mut out = vec![JetPoly::zero(n); n * n];
                for i in 0..n {
                    for k in 0..n {
                        for j in 0..n {
                            out[i * n + j] = out[i * n + j].add(&a[i * n + k].mul(&m[k * n + j]));
                        }
                    }
                }
                out
            }
        });
    }
    match acc {
        None => JetPoly::constant(n, rat(n as i64)),
        Some(m) => (0..n).fold(JetPoly::zero(n), |t, i| t.add(&m[i * n + i])),
    }
}

/// Product of traces, e.g. `Tr(J) Tr(del J del J)`, as a top-form body.
///
/// Returns the coefficient of `dz_1 ... dz_n dzbar_1 ... dzbar_n`.
pub fn trace_density(n: usize, words: &[&[JetFactor]]) -> JetPoly {
    let form = words.iter().fold(JetPoly::one(n), |acc, w| acc.mul(&trace_word(n, w)));
    super::solution::LocalFunctionalIntegrand::from_top_form(&form).density
}

/// Parses `Tr(J)Tr(dJ dJ)`-style expressions; `dJ` stands for `del J`.
pub fn parse_trace_density(n: usize, s: &str) -> Result<JetPoly> {
    let mut words: Vec<Vec<JetFactor>> = Vec::new();
    let mut rest = s.trim();
    while !rest.is_empty() {
        let inner = rest
            .strip_prefix("Tr(")
            .ok_or_else(|| Error::Parse(format!("expected `Tr(` at `{rest}`")))?;
        let close = inner.find(')').ok_or_else(|| Error::Parse("unclosed `Tr(`".into()))?;
        let word = inner[..close]
            .split_whitespace()
            .map(|t| match t {
                "J" => Ok(JetFactor::J),
                "dJ" => Ok(JetFactor::DelJ),
                _ => Err(Error::Parse(format!("unknown factor `{t}`"))),
            })
            .collect::<Result<Vec<_>>>()?;
        words.push(word);
        rest = inner[close + 1..].trim_start();
    }
    let refs: Vec<&[JetFactor]> = words.iter().map(Vec::as_slice).collect();
    Ok(trace_density(n, &refs))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::descent::operators::{d_ce, d_t, dbar_t};

    fn c(a: u32) -> JetPoly {
        JetPoly::var(JetVar::holomorphic(0, MultiIndex(vec![a])))
    }

    fn cbar(a: u32) -> JetPoly {
        JetPoly::var(JetVar::new(0, 1, MultiIndex(vec![a]), MultiIndex(vec![0])))
    }

    #[test]
    fn derivatives_are_divergences() {
        let f = cbar(0).mul(&c(1)).mul(&cbar(2)).add(&c(0).mul(&c(3)));
        assert!(is_total_divergence(&total_derivative(0, true, &f)).unwrap());
        assert!(is_total_divergence(&total_derivative(0, false, &f)).unwrap());
        assert!(!is_total_divergence(&f).unwrap());
    }

    #[test]
    fn product_of_two_slots_is_not_a_divergence() {
        let alpha = JetPoly::var(JetVar::new(0, 1, MultiIndex(vec![0, 0]), MultiIndex(vec![0, 0])));
        let beta = JetPoly::var(JetVar::new(1, 1, MultiIndex(vec![0, 0]), MultiIndex(vec![0, 0])));
        let e = euler_operator(&alpha.mul(&beta)).unwrap();
        assert_eq!(e[&(0, 1)], beta);
        assert_eq!(e[&(1, 1)], alpha);
    }

    #[test]
    fn explicit_base_point_is_rejected() {
        let p = c(1).mul(&JetPoly::base_monomial(MultiIndex(vec![1, 0])));
        assert_eq!(is_total_divergence(&p).unwrap_err(), Error::NotTranslationInvariant);
    }

    #[test]
    fn one_dimensional_density() {
        let rho = parse_trace_density(1, "Tr(J)Tr(dJ)").unwrap();
        // J del J = -(cbar_1 c_2 - cbar_2 c_1) against dz dzbar.
        assert_eq!(rho, cbar(2).mul(&c(1)).sub(&cbar(1).mul(&c(2))));
        assert!(!is_total_divergence(&rho).unwrap());
        assert!(is_total_divergence(&d_ce(&rho)).unwrap());
        assert!(is_total_divergence(&dbar_t(&rho)).unwrap());
        assert!(is_total_divergence(&d_t(&rho)).unwrap());
        // cbar_1 c_2 + cbar_2 c_1 = D(cbar_1 c_1).
        let trivial = cbar(1).mul(&c(2)).add(&cbar(2).mul(&c(1)));
        assert_eq!(divergence_scalar(&trivial, &rho).unwrap(), Some(rat(0)));
        assert_eq!(divergence_scalar(&cbar(1).mul(&c(2)).scale(&rat(4)), &rho).unwrap(), Some(rat(-2)));
    }
}
