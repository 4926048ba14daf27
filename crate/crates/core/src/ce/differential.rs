use std::collections::BTreeMap;

use num_traits::Zero;

use super::cochain::{insert_field, sort_with_sign, CochainKey, ModuleCochain, Window};
use crate::calculus::{FormalForm, FormalVectorField, MonomialField, MultiIndex};
use crate::error::{Error, Result};
use crate::linalg::{rat, Rational};

/// The Lie algebra whose cochains are being differentiated.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LieAlgebra {
    /// Formal vector fields `vect(n)`.
    Vect,
    /// `gl(n)`, realized as the linear fields `x_i d_j`.
    Gl,
}

impl LieAlgebra {
    pub fn contains(self, f: &MonomialField) -> bool {
        match self {
            LieAlgebra::Vect => true,
            LieAlgebra::Gl => f.order() == 1,
        }
    }
}

/// All pairs `a < b` of basis fields with `[a, b]` having a nonzero
/// `target` component, together with that component.
///
/// These are the structure constants in `d theta^c = sum_{a<b} c^c_ab theta^a theta^b`.
pub fn bracket_preimages(target: &MonomialField, algebra: LieAlgebra) -> Vec<(MonomialField, MonomialField, Rational)> {
    let n = target.n();
    let mut found: BTreeMap<(MonomialField, MonomialField), Rational> = BTreeMap::new();
    for l in 0..n {
        let delta = target.exponent.raise(l);
        for alpha in sub_indices(&delta) {
            let beta = MultiIndex(delta.0.iter().zip(&alpha.0).map(|(d, a)| d - a).collect());
            for i in 0..n {
                for j in 0..n {
                    let a = MonomialField::new(alpha.clone(), i);
                    let b = MonomialField::new(beta.clone(), j);
                    if a >= b || !algebra.contains(&a) || !algebra.contains(&b) {
                        continue;
                    }
                    if found.contains_key(&(a.clone(), b.clone())) {
                        continue;
                    }
                    let c: Rational = a
                        .bracket(&b)
                        .into_iter()
                        .filter(|(m, _)| m == target)
                        .map(|(_, c)| c)
                        .sum();
                    if !c.is_zero() {
                        found.insert((a, b), c);
                    }
                }
            }
        }
    }
    found.into_iter().map(|((a, b), c)| (a, b, c)).collect()
}

fn sub_indices(delta: &MultiIndex) -> Vec<MultiIndex> {
    let mut out = vec![Vec::new()];
    for &d in &delta.0 {
        out = out
            .into_iter()
            .flat_map(|v: Vec<u32>| {
                (0..=d).map(move |k| {
                    let mut w = v.clone();
                    w.push(k);
                    w
                })
            })
            .collect();
    }
    out.into_iter().map(MultiIndex).collect()
}

fn sign_of(q: usize) -> i64 {
    if q % 2 == 0 {
        1
    } else {
        -1
    }
}

/// `L_a (x^beta dx_I)` for a single basis field.
pub(crate) fn lie_on_term(a: &MonomialField, form: &crate::calculus::FormTerm) -> FormalForm {
    let x = FormalVectorField::from_monomial(a.clone(), rat(1));
    FormalForm::term(form.exponent.clone(), form.dx, rat(1))
        .lie_derivative(&x)
        .expect("same dimension")
}

/// Chevalley–Eilenberg differential of `vect(n)`.
///
/// On generators: `d theta^c = sum_{a<b} c^c_ab theta^a theta^b`, so that
/// `(d phi)(X, Y) = phi([X, Y])` on 1-cochains, and `d w = -sum_a theta^a L_{e_a} w`
/// on coefficients, so that `(d f)(X) = -L_X f`. Extended as an odd derivation.
pub fn ce_differential(phi: &ModuleCochain) -> Result<ModuleCochain> {
    ce_differential_in(phi, LieAlgebra::Vect)
}

/// As [`ce_differential`] for cochains of the chosen Lie algebra.
pub fn ce_differential_in(phi: &ModuleCochain, algebra: LieAlgebra) -> Result<ModuleCochain> {
    let n = phi.n();
    let window = phi.window();
    let mut out = ModuleCochain::zero(n, phi.is_trivial(), window);
    let module_fields: Vec<MonomialField> = match (algebra, window) {
        (LieAlgebra::Gl, _) => MonomialField::all_of_order(n, 1),
        (LieAlgebra::Vect, Window::UpTo(bound)) => MonomialField::all_up_to(n, bound),
        (LieAlgebra::Vect, Window::Complete) => Vec::new(),
    };
    for (key, c) in phi.terms() {
        let total = key.jet_total();
        // Bracket part: replace theta_{s_j} by d theta_{s_j}.
        if window.contains(total + 1) {
            for (j, s) in key.fields.iter().enumerate() {
                for (a, b, cab) in bracket_preimages(s, algebra) {
                    let mut v = Vec::with_capacity(key.fields.len() + 1);
                    v.extend_from_slice(&key.fields[..j]);
                    v.push(a);
                    v.push(b);
                    v.extend_from_slice(&key.fields[j + 1..]);
                    if let Some(sign) = sort_with_sign(&mut v) {
                        out.add_term_unchecked(
                            CochainKey::new(v, key.form.clone()),
                            c * &cab * rat(sign as i64 * sign_of(j)),
                        );
                    }
                }
            }
        }
        // Module part: (-1)^q theta_S d w = -sum_a theta_a theta_S L_a w.
        if phi.is_trivial() || (key.form.dx == 0 && key.form.exponent.is_zero()) {
            continue;
        }
        if algebra == LieAlgebra::Vect && window == Window::Complete {
            return Err(Error::OutsideWindow {
                needed: total + 1,
                window: total,
            });
        }
        for a in &module_fields {
            if !window.contains(total + a.order()) {
                continue;
            }
            let Some((sign, fields)) = insert_field(a, &key.fields) else {
                continue;
            };
            for (t, v) in lie_on_term(a, &key.form).terms() {
                out.add_term_unchecked(
                    CochainKey::new(fields.clone(), t.clone()),
                    -(c * v * rat(sign as i64)),
                );
            }
        }
    }
    Ok(out)
}

/// De Rham differential on the coefficients: `theta_S w -> (-1)^q theta_S dw`.
pub fn de_rham_differential(phi: &ModuleCochain) -> ModuleCochain {
    let mut out = ModuleCochain::zero(phi.n(), phi.is_trivial(), phi.window());
    for (key, c) in phi.terms() {
        let w = FormalForm::term(key.form.exponent.clone(), key.form.dx, c.clone());
        let s = rat(sign_of(key.degree()));
        for (t, v) in w.de_rham().terms() {
            out.add_term_unchecked(CochainKey::new(key.fields.clone(), t.clone()), v * &s);
        }
    }
    out
}

/// The total differential `D = d_CE + d_dR`.
pub fn total_differential(phi: &ModuleCochain) -> Result<ModuleCochain> {
    Ok(ce_differential(phi)?.add(&de_rham_differential(phi)))
}
