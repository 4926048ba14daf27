use num_traits::Zero;

use super::{FormalVectorField, MonomialField, MultiIndex, Polynomial};
use crate::linalg::Rational;

/// Matrix of truncated power series `J(X)_ij = d_i f_j`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JacobianSeries {
    pub n: usize,
    /// Row-major `n x n` entries.
    pub entries: Vec<Polynomial>,
    pub truncation_order: u32,
}

impl JacobianSeries {
    pub fn entry(&self, i: usize, j: usize) -> &Polynomial {
        &self.entries[i * self.n + j]
    }

    /// `J(X)(0)`.
    pub fn at_zero(&self) -> Vec<Vec<Rational>> {
        (0..self.n)
            .map(|i| (0..self.n).map(|j| self.entry(i, j).at_zero()).collect())
            .collect()
    }

    pub fn trace(&self) -> Polynomial {
        (0..self.n).fold(Polynomial::zero(self.n), |acc, i| acc.add(self.entry(i, i)))
    }
}

/// Formal Jacobian of `X`, keeping terms of degree at most `truncation_order`.
pub fn jacobian(x: &FormalVectorField, truncation_order: u32) -> JacobianSeries {
    let n = x.n();
    let components: Vec<Polynomial> = (0..n).map(|j| x.component(j)).collect();
    let mut entries = Vec::with_capacity(n * n);
    for i in 0..n {
        for fj in &components {
            entries.push(fj.derivative(i).truncate(truncation_order));
        }
    }
    JacobianSeries {
        n,
        entries,
        truncation_order,
    }
}

/// `A -> sum_ij A_ij x_i d_j`, the inverse of `J(0)` on linear fields.
pub fn gl_embedding(a: &[Vec<Rational>]) -> FormalVectorField {
    let n = a.len();
    let mut x = FormalVectorField::zero(n);
    for (i, row) in a.iter().enumerate() {
        for (j, v) in row.iter().enumerate() {
            if !v.is_zero() {
                x.add_term(MonomialField::new(MultiIndex::unit(n, i), j), v.clone());
            }
        }
    }
    x
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::rat;

    fn elementary(n: usize, i: usize, j: usize) -> Vec<Vec<Rational>> {
        let mut a = vec![vec![rat(0); n]; n];
        a[i][j] = rat(1);
        a
    }

    fn commutator(a: &[Vec<Rational>], b: &[Vec<Rational>]) -> Vec<Vec<Rational>> {
        let n = a.len();
        (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        (0..n).fold(rat(0), |acc, k| {
                            acc + &a[i][k] * &b[k][j] - &b[i][k] * &a[k][j]
                        })
                    })
                    .collect()
            })
            .collect()
    }

    #[test]
    fn jacobian_examples() {
        let d = FormalVectorField::from_monomial(MonomialField::new(MultiIndex(vec![0]), 0), rat(1));
        assert!(jacobian(&d, 5).entry(0, 0).is_zero());
        let x2 = FormalVectorField::from_monomial(MonomialField::new(MultiIndex(vec![2]), 0), rat(1));
        assert_eq!(
            jacobian(&x2, 5).entry(0, 0),
            &Polynomial::monomial(MultiIndex(vec![1]), rat(2))
        );
        assert!(jacobian(&x2, 0).entry(0, 0).is_zero());
    }

    #[test]
    fn embedding_inverts_jacobian_at_zero() {
        let a = vec![vec![rat(1), rat(2)], vec![rat(-3), rat(5)]];
        assert_eq!(jacobian(&gl_embedding(&a), 3).at_zero(), a);
        assert_eq!(
            gl_embedding(&[vec![rat(1)]]),
            FormalVectorField::euler(1)
        );
    }

    #[test]
    fn embedding_is_a_homomorphism() {
        for (i, j, k, l) in [(0, 1, 1, 0), (0, 0, 0, 1), (1, 0, 0, 1), (1, 1, 1, 0)] {
            let a = elementary(2, i, j);
            let b = elementary(2, k, l);
            let lhs = gl_embedding(&a).bracket(&gl_embedding(&b)).unwrap();
            assert_eq!(lhs, gl_embedding(&commutator(&a, &b)));
        }
    }
}
