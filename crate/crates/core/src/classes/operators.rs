use num_traits::One;

use crate::calculus::{contract_slot, FormTerm, MonomialField, MultiIndex};
use crate::ce::{insert_field, CoefficientKind, sort_with_sign, CochainKey, ModuleCochain, Window};
use crate::error::{Error, Result};
use crate::linalg::{rat, Rational};

fn koszul(q: usize) -> i64 {
    if q % 2 == 0 {
        1
    } else {
        -1
    }
}

/// Cup product `(theta_S w)(theta_T h) = (-1)^{|w||T|} theta_S theta_T (w ^ h)`.
///
/// On lowest arity this is `(phi psi)(X, Y) = phi(X) psi(Y) - phi(Y) psi(X)`.
pub fn cup_product(phi: &ModuleCochain, psi: &ModuleCochain) -> Result<ModuleCochain> {
    if phi.n() != psi.n() {
        return Err(Error::DimensionMismatch(format!(
            "cochains on vect({}) and vect({})",
            phi.n(),
            psi.n()
        )));
    }
    if phi.is_trivial() != psi.is_trivial() {
        return Err(Error::IncompatibleCoefficients(
            "trivial coefficients multiply only with trivial coefficients".into(),
        ));
    }
    let window = phi.window().meet(psi.window());
    let mut out = ModuleCochain::zero(phi.n(), phi.is_trivial(), window);
    for (k1, c1) in phi.terms() {
        for (k2, c2) in psi.terms() {
            if !window.contains(k1.jet_total() + k2.jet_total()) {
                continue;
            }
            let Some(form_sign) = crate::calculus::wedge_sign(k1.form.dx, k2.form.dx) else {
                continue;
            };
            let mut fields = k1.fields.clone();
            fields.extend_from_slice(&k2.fields);
            let Some(theta_sign) = sort_with_sign(&mut fields) else {
                continue;
            };
            let sign = form_sign as i64 * theta_sign as i64 * koszul(k1.form_degree() * k2.degree());
            let form = FormTerm::new(k1.form.exponent.add(&k2.form.exponent), k1.form.dx | k2.form.dx);
            out.add_term_unchecked(CochainKey::new(fields, form), c1 * c2 * rat(sign));
        }
    }
    Ok(out)
}

/// `iota_a (x^beta dx_I)` for a basis field `a = x^alpha d_i`.
fn contract_term(a: &MonomialField, form: &FormTerm) -> Option<(i64, FormTerm)> {
    let (s, dx) = contract_slot(a.direction, form.dx)?;
    Some((s as i64, FormTerm::new(form.exponent.add(&a.exponent), dx)))
}

/// `sum_a theta_a iota_{e_a}` over the given fields, with `iota_a` passing
/// `theta_S` with the sign `(-1)^q`. An even derivation of the cochain algebra.
fn iota_over(phi: &ModuleCochain, fields: &[MonomialField]) -> ModuleCochain {
    let window = phi.window();
    let mut out = ModuleCochain::zero(phi.n(), false, window);
    for (key, c) in phi.terms() {
        let total = key.jet_total();
        for a in fields {
            if !window.contains(total + a.order()) {
                continue;
            }
            let Some((s1, form)) = contract_term(a, &key.form) else {
                continue;
            };
            let Some((s2, theta)) = insert_field(a, &key.fields) else {
                continue;
            };
            out.add_term_unchecked(
                CochainKey::new(theta, form),
                c * rat(s1 * s2 as i64 * koszul(key.degree())),
            );
        }
    }
    out
}

/// The contraction `iota`: inserts one more input into the form slot.
///
/// As a function of the inputs, `(iota phi)(X_1, ..., X_{q+1})` is the
/// alternating sum of `iota_{X_k} phi(..., X_k omitted, ...)`, up to the sign
/// `(-1)^q` fixed by the algebra convention above.
pub fn iota_operator(phi: &ModuleCochain) -> Result<ModuleCochain> {
    if matches!(phi.kind(), CoefficientKind::Trivial | CoefficientKind::Functions) {
        return Err(Error::ZeroFormDegree);
    }
    let Window::UpTo(bound) = phi.window() else {
        return Err(Error::OutsideWindow {
            needed: phi.max_jet_total() + 1,
            window: phi.max_jet_total(),
        });
    };
    let fields = MonomialField::all_up_to(phi.n(), bound);
    Ok(iota_over(phi, &fields))
}

/// The part of `iota` that survives evaluation at the origin: contraction with constant fields.
pub fn iota_at_origin(phi: &ModuleCochain) -> ModuleCochain {
    let n = phi.n();
    let constants: Vec<MonomialField> = (0..n).map(|i| MonomialField::new(MultiIndex::zero(n), i)).collect();
    iota_over(phi, &constants)
}

/// Evaluation at the origin: keep the constant terms of the function part.
pub fn evaluate_at_origin(phi: &ModuleCochain) -> ModuleCochain {
    let n = phi.n();
    let mut out = ModuleCochain::zero(n, true, phi.window());
    for (k, c) in phi.terms() {
        if k.form.dx == 0 && k.form.exponent.is_zero() {
            out.add_term_unchecked(k.clone(), c.clone());
        }
    }
    out
}

/// `Phi(alpha) = (e^iota alpha)|_0`, a trivial-coefficient cochain.
///
/// Only `iota^p / p!` can reach form degree zero from the `Omega^p` part, and
/// only contractions with constant fields survive evaluation at the origin.
pub fn phi_map(alpha: &ModuleCochain) -> ModuleCochain {
    let n = alpha.n();
    let mut out = ModuleCochain::zero(n, true, alpha.window());
    let mut factorial = Rational::one();
    for p in 0..=n {
        if p > 0 {
            factorial *= rat(p as i64);
        }
        let mut part = alpha.form_component(p);
        if part.is_zero() {
            continue;
        }
        for _ in 0..p {
            part = iota_at_origin(&part);
        }
        out = out.add(&evaluate_at_origin(&part).scale(&(Rational::one() / &factorial)));
    }
    out
}

/// `Psi(theta_S x^beta dx_I) = (-1)^(q+1) theta_S x^beta iota_E(dx_I) / (|beta| + p)`.
///
/// The radial homotopy of the formal Poincaré lemma, pulled through the
/// cochain factor; it vanishes on function-valued cochains.
pub fn psi_homotopy(alpha: &ModuleCochain) -> ModuleCochain {
    let n = alpha.n();
    let mut out = ModuleCochain::zero(n, false, alpha.window());
    for (key, c) in alpha.terms() {
        let p = key.form_degree();
        if p == 0 {
            continue;
        }
        let w = rat(key.form.weight());
        for l in 0..n {
            let Some((s, dx)) = contract_slot(l, key.form.dx) else {
                continue;
            };
            let form = FormTerm::new(key.form.exponent.raise(l), dx);
            out.add_term_unchecked(
                CochainKey::new(key.fields.clone(), form),
                c * rat(s as i64 * -koszul(key.degree())) / &w,
            );
        }
    }
    out
}

/// The inclusion of trivial coefficients as constant functions.
pub fn inclusion(phi: &ModuleCochain) -> ModuleCochain {
    phi.include()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::calculus::{FormalForm, FormalVectorField};

    fn f1(k: u32) -> MonomialField {
        MonomialField::new(MultiIndex(vec![k]), 0)
    }

    #[test]
    fn cup_product_on_one_cochains() {
        let a = ModuleCochain::trivial_from_terms(1, [(vec![f1(0)], rat(1))]).unwrap();
        let b = ModuleCochain::trivial_from_terms(1, [(vec![f1(1)], rat(1))]).unwrap();
        let ab = cup_product(&a, &b).unwrap();
        let x = FormalVectorField::from_monomial(f1(0), rat(1));
        let y = FormalVectorField::from_monomial(f1(1), rat(1));
        assert_eq!(ab.evaluate_scalar(&[x.clone(), y.clone()]).unwrap(), rat(1));
        assert_eq!(ab.evaluate_scalar(&[y, x]).unwrap(), rat(-1));
    }

    #[test]
    fn iota_rejects_function_values() {
        let c = ModuleCochain::zero(1, false, Window::UpTo(3));
        assert_eq!(iota_operator(&c).unwrap_err(), Error::ZeroFormDegree);
    }

    #[test]
    fn psi_of_dx_is_radial_primitive() {
        let mut c = ModuleCochain::zero(1, false, Window::UpTo(2));
        c.add_term(CochainKey::new(vec![], FormTerm::new(MultiIndex(vec![0]), 1)), rat(1))
            .unwrap();
        let psi = psi_homotopy(&c);
        assert_eq!(psi.evaluate(&[]).unwrap(), FormalForm::term(MultiIndex(vec![1]), 0, rat(-1)));
    }
}
