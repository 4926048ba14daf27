use std::fmt;

use crate::calculus::{FormalForm, MonomialField, MultiIndex, Polynomial};
use crate::ce::{sorted_tuples_bounded, ModuleCochain};
use crate::error::{Error, Result};
use crate::linalg::{rat, Rational};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum GeneratorKind {
    /// `a_i`: function-valued, cochain degree `2i - 1`.
    A,
    /// `tau_i`: `Omega^i`-valued, cochain degree `i`.
    Tau,
}

/// One of the generators `a_i`, `tau_i`, realized on a window.
#[derive(Clone, Debug)]
pub struct GeneratorClass {
    pub kind: GeneratorKind,
    pub index: usize,
    pub n: usize,
    pub cochain: ModuleCochain,
}

impl GeneratorClass {
    pub fn cochain_degree(&self) -> usize {
        match self.kind {
            GeneratorKind::A => 2 * self.index - 1,
            GeneratorKind::Tau => self.index,
        }
    }

    pub fn form_degree(&self) -> usize {
        match self.kind {
            GeneratorKind::A => 0,
            GeneratorKind::Tau => self.index,
        }
    }
}

impl fmt::Display for GeneratorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            GeneratorKind::A => "a",
            GeneratorKind::Tau => "t",
        })
    }
}

/// `n x n` matrix of forms, row-major.
pub(crate) type FormMatrix = Vec<FormalForm>;

/// `J(X)` for `X = x^alpha d_j`: column `j` holds `d_i x^alpha`.
pub(crate) fn jacobian_matrix(m: &MonomialField) -> FormMatrix {
    let n = m.n();
    let mono = Polynomial::monomial(m.exponent.clone(), rat(1));
    let mut out = vec![FormalForm::zero(n); n * n];
    for i in 0..n {
        out[i * n + m.direction] = FormalForm::function(&mono.derivative(i));
    }
    out
}

/// `dJ(X)`, entrywise de Rham differential.
pub(crate) fn jacobian_differential(m: &MonomialField) -> FormMatrix {
    jacobian_matrix(m).iter().map(FormalForm::de_rham).collect()
}

pub(crate) fn mat_mul(a: &FormMatrix, b: &FormMatrix, n: usize) -> FormMatrix {
    let mut out = vec![FormalForm::zero(n); n * n];
    for i in 0..n {
        for k in 0..n {
            let aik = &a[i * n + k];
            if aik.is_zero() {
                continue;
            }
            for j in 0..n {
                let bkj = &b[k * n + j];
                if !bkj.is_zero() {
                    out[i * n + j] = out[i * n + j].add(&aik.wedge(bkj));
                }
            }
        }
    }
    out
}

pub(crate) fn trace(a: &FormMatrix, n: usize) -> FormalForm {
    (0..n).fold(FormalForm::zero(n), |acc, i| acc.add(&a[i * n + i]))
}

/// `Tr(M(X_1) ... M(X_k))` for a matrix-valued function `M` of a field.
pub(crate) fn trace_of_product(args: &[MonomialField], n: usize, m: impl Fn(&MonomialField) -> FormMatrix) -> FormalForm {
    let mut iter = args.iter();
    let Some(first) = iter.next() else {
        return FormalForm::term(MultiIndex::zero(n), 0, rat(n as i64));
    };
    let prod = iter.fold(m(first), |acc, x| mat_mul(&acc, &m(x), n));
    trace(&prod, n)
}

fn check_index(n: usize, i: usize) -> Result<()> {
    if i == 0 || i > n {
        return Err(Error::GeneratorIndex { index: i, n });
    }
    Ok(())
}

/// `a_i`: antisymmetrization of `Tr(JX_1 ... JX_{2i-1})`, as a function-valued
/// cochain known up to jet total `window`.
pub fn a_class(n: usize, i: usize, window: u32) -> Result<GeneratorClass> {
    check_index(n, i)?;
    let q = 2 * i - 1;
    let cochain = ModuleCochain::from_alternating_fn(n, q, window, false, |args| {
        trace_of_product(args, n, jacobian_matrix)
    })?;
    Ok(GeneratorClass {
        kind: GeneratorKind::A,
        index: i,
        n,
        cochain,
    })
}

/// `tau_i`: antisymmetrization of `Tr(dJX_1 ^ ... ^ dJX_i)`, an `Omega^i`-valued
/// cochain known up to jet total `window`.
pub fn tau_class(n: usize, i: usize, window: u32) -> Result<GeneratorClass> {
    check_index(n, i)?;
    let cochain = ModuleCochain::from_alternating_fn(n, i, window, false, |args| {
        trace_of_product(args, n, jacobian_differential)
    })?;
    Ok(GeneratorClass {
        kind: GeneratorKind::Tau,
        index: i,
        n,
        cochain,
    })
}

/// `k`-th derivative of `x^a` in one variable at the origin.
fn derivative_at_zero(m: &MonomialField, k: u32) -> Rational {
    if m.exponent.0[0] == k {
        m.exponent.factorial()
    } else {
        rat(0)
    }
}

/// The Wronskian 3-cocycle of `vect(1)`:
/// `(f d, g d, h d) -> det [[f, g, h], [f', g', h'], [f'', g'', h'']](0)`.
pub fn wronskian_cocycle() -> Result<ModuleCochain> {
    let tuples = sorted_tuples_bounded(1, 3, 3, 2);
    ModuleCochain::from_alternating_fn_on(1, tuples, true, |args| {
        let v: Rational = (0..3).map(|k| derivative_at_zero(&args[k], k as u32)).product();
        FormalForm::term(MultiIndex::zero(1), 0, v)
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::calculus::FormalVectorField;

    fn field(k: u32) -> FormalVectorField {
        FormalVectorField::from_monomial(MonomialField::new(MultiIndex(vec![k]), 0), rat(1))
    }

    #[test]
    fn a1_is_the_divergence() {
        let a1 = a_class(1, 1, 4).unwrap().cochain;
        assert_eq!(a1.evaluate(&[field(1)]).unwrap(), FormalForm::term(MultiIndex(vec![0]), 0, rat(1)));
        assert!(a1.evaluate(&[field(0)]).unwrap().is_zero());
        assert_eq!(a1.evaluate(&[field(3)]).unwrap(), FormalForm::term(MultiIndex(vec![2]), 0, rat(3)));
    }

    #[test]
    fn tau1_is_second_derivative() {
        let t1 = tau_class(1, 1, 4).unwrap().cochain;
        assert_eq!(t1.evaluate(&[field(2)]).unwrap(), FormalForm::term(MultiIndex(vec![0]), 1, rat(2)));
    }

    #[test]
    fn index_range() {
        assert!(a_class(2, 3, 3).is_err());
        assert!(tau_class(1, 0, 3).is_err());
    }

    #[test]
    fn wronskian_value() {
        let w = wronskian_cocycle().unwrap();
        assert_eq!(w.len(), 1);
        assert_eq!(w.evaluate_scalar(&[field(0), field(1), field(2)]).unwrap(), rat(2));
    }
}
