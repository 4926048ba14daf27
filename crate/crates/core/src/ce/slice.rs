use std::collections::HashMap;

use rayon::prelude::*;

use super::cochain::{remove_field, sorted_tuples, CochainKey, ModuleCochain, Window};
use super::differential::{ce_differential_in, total_differential, LieAlgebra};
use crate::calculus::{FormTerm, MonomialField, MultiIndex};
use crate::error::{Error, Result};
use crate::linalg::{rat, Rational, SparseMatrix};

/// Which finite piece of which complex a slice is cut from.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SliceKind {
    /// Reduced trivial-coefficient cochains of `vect(n)` of one Euler weight.
    Trivial { weight: i64 },
    /// Weight-zero elements of the total complex `C(vect(n); Omega)` of one
    /// total degree `q + p`, modulo terms of jet total above `window`.
    Total { window: u32 },
    /// `C(gl(n); Lambda^p (C^n)^*)` with constant forms.
    Gl { form_degree: usize },
}

/// Basis of one degree of a finite complex and the differential out of it.
#[derive(Clone, Debug)]
pub struct ComplexSlice {
    pub n: usize,
    pub degree: usize,
    pub kind: SliceKind,
    pub basis: Vec<CochainKey>,
    pub target_basis: Vec<CochainKey>,
    /// `target_basis.len() x basis.len()`.
    pub differential: SparseMatrix,
}

fn masks_of_size(n: usize, p: usize) -> Vec<u32> {
    (0u32..1 << n).filter(|m| m.count_ones() as usize == p).collect()
}

/// Ordered basis of the given degree, without building any matrix.
pub fn slice_basis(n: usize, degree: usize, kind: SliceKind) -> Vec<CochainKey> {
    let mut basis: Vec<CochainKey> = match kind {
        SliceKind::Trivial { weight } => {
            let total = degree as i64 - weight;
            if total < 0 || (degree == 0 && weight == 0) {
                Vec::new()
            } else {
                sorted_tuples(n, degree, total as u32)
                    .into_iter()
                    .map(|s| CochainKey::scalar(n, s))
                    .collect()
            }
        }
        SliceKind::Total { window } => {
            let mut out = Vec::new();
            for p in 0..=n.min(degree) {
                let q = degree - p;
                for total in (degree as u32)..=window {
                    let beta_deg = total - degree as u32;
                    let tuples = sorted_tuples(n, q, total);
                    for beta in MultiIndex::all_of_degree(n, beta_deg) {
                        for mask in masks_of_size(n, p) {
                            for s in &tuples {
                                out.push(CochainKey::new(s.clone(), FormTerm::new(beta.clone(), mask)));
                            }
                        }
                    }
                }
            }
            out
        }
        SliceKind::Gl { form_degree } => {
            let linear = MonomialField::all_of_order(n, 1);
            let mut out = Vec::new();
            for s in subsets(&linear, degree) {
                for mask in masks_of_size(n, form_degree) {
                    out.push(CochainKey::new(s.clone(), FormTerm::new(MultiIndex::zero(n), mask)));
                }
            }
            out
        }
    };
    basis.sort();
    basis
}

fn subsets(items: &[MonomialField], k: usize) -> Vec<Vec<MonomialField>> {
    if k == 0 {
        return vec![Vec::new()];
    }
    if items.len() < k {
        return Vec::new();
    }
    let mut out = Vec::new();
    for (i, x) in items.iter().enumerate() {
        for mut rest in subsets(&items[i + 1..], k - 1) {
            rest.insert(0, x.clone());
            out.push(rest);
        }
    }
    out
}

impl SliceKind {
    fn is_trivial(self) -> bool {
        matches!(self, SliceKind::Trivial { .. })
    }

    fn window(self) -> Window {
        match self {
            SliceKind::Total { window } => Window::UpTo(window),
            _ => Window::Complete,
        }
    }

    /// The differential of the complex this slice belongs to.
    pub fn apply_differential(self, phi: &ModuleCochain) -> Result<ModuleCochain> {
        match self {
            SliceKind::Trivial { .. } => ce_differential_in(phi, LieAlgebra::Vect),
            SliceKind::Total { .. } => total_differential(phi),
            SliceKind::Gl { .. } => ce_differential_in(phi, LieAlgebra::Gl),
        }
    }

    /// The basis element as a cochain.
    pub fn cochain(self, n: usize, key: &CochainKey) -> ModuleCochain {
        ModuleCochain::basis(n, key.clone(), self.is_trivial(), self.window())
            .expect("slice keys match the slice coefficients")
    }
}

/// Coordinates of `phi` in `basis`; errors if `phi` has a term outside it.
pub fn coordinates(phi: &ModuleCochain, basis: &[CochainKey]) -> Result<Vec<Rational>> {
    let index: HashMap<&CochainKey, usize> = basis.iter().enumerate().map(|(i, k)| (k, i)).collect();
    let mut v = vec![rat(0); basis.len()];
    for (k, c) in phi.terms() {
        match index.get(k) {
            Some(&i) => v[i] = c.clone(),
            None => return Err(Error::NotInSlice(k.to_string())),
        }
    }
    Ok(v)
}

/// Matrix of a linear map given on basis elements.
pub(crate) fn matrix_of<F>(source: &[CochainKey], target: &[CochainKey], f: F) -> Result<SparseMatrix>
where
    F: Fn(&CochainKey) -> Result<ModuleCochain> + Sync,
{
    let index: HashMap<&CochainKey, usize> = target.iter().enumerate().map(|(i, k)| (k, i)).collect();
    let columns: Vec<Vec<(usize, usize, Rational)>> = source
        .par_iter()
        .enumerate()
        .map(|(col, key)| {
            let image = f(key)?;
            image
                .terms()
                .map(|(k, c)| match index.get(k) {
                    Some(&row) => Ok((row, col, c.clone())),
                    None => Err(Error::NotInSlice(format!("image term {k} of {key}"))),
                })
                .collect()
        })
        .collect::<Result<_>>()?;
    SparseMatrix::from_triplets(target.len(), source.len(), columns.into_iter().flatten())
}

impl ComplexSlice {
    /// Builds the slice of the given degree, refusing if either basis exceeds `max_dim`.
    pub fn build(n: usize, degree: usize, kind: SliceKind, max_dim: usize) -> Result<Self> {
        let basis = slice_basis(n, degree, kind);
        let target_basis = slice_basis(n, degree + 1, kind);
        let largest = basis.len().max(target_basis.len());
        if largest > max_dim {
            return Err(Error::ResourceLimit(format!(
                "slice of degree {} has dimension {} > {}",
                if basis.len() > max_dim { degree } else { degree + 1 },
                largest,
                max_dim
            )));
        }
        let differential = matrix_of(&basis, &target_basis, |key| {
            kind.apply_differential(&kind.cochain(n, key))
        })?;
        Ok(ComplexSlice {
            n,
            degree,
            kind,
            basis,
            target_basis,
            differential,
        })
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn weight(&self) -> i64 {
        match self.kind {
            SliceKind::Trivial { weight } => weight,
            _ => 0,
        }
    }

    pub fn coordinates(&self, phi: &ModuleCochain) -> Result<Vec<Rational>> {
        coordinates(phi, &self.basis)
    }

    pub fn target_coordinates(&self, phi: &ModuleCochain) -> Result<Vec<Rational>> {
        coordinates(phi, &self.target_basis)
    }

    /// Cochain with the given coordinates in the source basis.
    pub fn cochain_from(&self, v: &[Rational]) -> ModuleCochain {
        let mut out = ModuleCochain::zero(self.n, self.kind.is_trivial(), self.kind.window());
        for (k, c) in self.basis.iter().zip(v) {
            out.add_term_unchecked(k.clone(), c.clone());
        }
        out
    }
}

/// The weight-zero reduced trivial-coefficient slice of degree `q`.
pub fn build_weight_zero_slice(n: usize, q: usize) -> Result<ComplexSlice> {
    ComplexSlice::build(n, q, SliceKind::Trivial { weight: 0 }, usize::MAX)
}

/// Contraction with the Euler field, `theta_S -> sum_i d/d theta_{x_i d_i} theta_S`.
pub fn euler_contraction(phi: &ModuleCochain) -> ModuleCochain {
    let n = phi.n();
    let mut out = ModuleCochain::zero(n, phi.is_trivial(), phi.window());
    for i in 0..n {
        let e = MonomialField::new(MultiIndex::unit(n, i), i);
        for (k, c) in phi.terms() {
            if let Some((sign, fields)) = remove_field(&e, &k.fields) {
                out.add_term_unchecked(CochainKey::new(fields, k.form.clone()), c * rat(sign as i64));
            }
        }
    }
    out
}

/// Checks that `h = -(1/w) iota_E` satisfies `dh + hd = id` on the weight-`w`
/// trivial slice of degree `q` (`w != 0`).
///
/// With `d` normalized so that `(d phi)(X, Y) = phi([X, Y])`, Cartan's formula
/// reads `d iota_E + iota_E d = -L_E`, and `L_E` acts on weight `w` by `w`.
pub fn check_weight_homotopy(n: usize, q: usize, weight: i64) -> Result<bool> {
    assert!(weight != 0, "weight-zero slices are not contractible");
    let kind = SliceKind::Trivial { weight };
    let scale = Rational::new((-1).into(), weight.into());
    let basis = slice_basis(n, q, kind);
    let ok = basis.par_iter().map(|key| -> Result<bool> {
        let phi = kind.cochain(n, key);
        let dh = ce_differential_in(&euler_contraction(&phi), LieAlgebra::Vect)?;
        let hd = euler_contraction(&ce_differential_in(&phi, LieAlgebra::Vect)?);
        Ok(dh.add(&hd).scale(&scale) == phi)
    });
    let results: Vec<bool> = ok.collect::<Result<_>>()?;
    Ok(results.into_iter().all(|b| b))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_weight_zero_slices() {
        let s1 = build_weight_zero_slice(1, 1).unwrap();
        assert_eq!(s1.dim(), 1);
        assert_eq!(s1.basis[0].fields, vec![MonomialField::new(MultiIndex(vec![1]), 0)]);
        assert_eq!(build_weight_zero_slice(1, 0).unwrap().dim(), 0);
        let dims: Vec<usize> = (1..=7).map(|q| slice_basis(2, q, SliceKind::Trivial { weight: 0 }).len()).collect();
        assert_eq!(dims, vec![4, 18, 60, 120, 156, 134, 68]);
    }

    #[test]
    fn consecutive_differentials_compose_to_zero() {
        for n in 1..=2 {
            for q in 1..=4 {
                let a = build_weight_zero_slice(n, q).unwrap();
                let b = build_weight_zero_slice(n, q + 1).unwrap();
                assert!(b.differential.mul(&a.differential).unwrap().is_zero());
            }
        }
    }

    #[test]
    fn nonzero_weights_are_contractible() {
        for w in [-2, -1, 1] {
            for q in 1..=3 {
                assert!(check_weight_homotopy(1, q, w).unwrap(), "n=1 q={q} w={w}");
            }
        }
        assert!(check_weight_homotopy(2, 2, -1).unwrap());
    }
}
