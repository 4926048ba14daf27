use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::cochain::{CochainKey, ModuleCochain, Window};
use super::differential::{ce_differential, total_differential};
use super::slice::ComplexSlice;
use crate::calculus::{FormalForm, FormalVectorField, MonomialField, MultiIndex};
use crate::error::{Error, Result};
use crate::linalg::{rat, Rational};

/// Outcome of a closedness check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CocycleCertificate {
    pub closed: bool,
    /// Every monomial input tuple of total jet order at most `bound` was checked.
    pub bound: u32,
    pub margin: u32,
    /// The verdict at `bound - 1` agrees with the verdict at `bound`.
    pub stabilized: bool,
    /// Lowest term of the differential when it does not vanish.
    pub witness: Option<(CochainKey, Rational)>,
}

/// Checks `d phi = 0` (or `(d_CE + d_dR) phi = 0` when `total` is set).
///
/// A finite cochain whose covectors have jet total at most `s` has a
/// differential supported on jet total at most `s + 1`; the check runs to
/// `s + 1 + margin`. A windowed cochain is checked on its whole window, which
/// must then exceed `margin`.
pub fn is_cocycle(phi: &ModuleCochain, total: bool, margin: u32) -> Result<CocycleCertificate> {
    let d = if total {
        total_differential(phi)?
    } else {
        ce_differential(phi)?
    };
    let bound = match phi.window() {
        Window::Complete => phi.max_jet_total() + 1 + margin,
        Window::UpTo(w) => {
            if w <= margin {
                return Err(Error::OutsideWindow {
                    needed: margin + 1,
                    window: w,
                });
            }
            w
        }
    };
    let closed_up_to = |b: u32| d.terms().all(|(k, _)| k.jet_total() > b);
    let closed = closed_up_to(bound);
    let stabilized = closed_up_to(bound - 1) == closed;
    let witness = d
        .terms()
        .filter(|(k, _)| k.jet_total() <= bound)
        .min_by_key(|(k, _)| k.jet_total())
        .map(|(k, c)| (k.clone(), c.clone()));
    Ok(CocycleCertificate {
        closed,
        bound,
        margin,
        stabilized,
        witness,
    })
}

/// Finds `psi` in the source of `slice` with `d psi = phi`.
///
/// `phi` must lie in the span of `slice.target_basis`. Returns `None` when
/// `phi` is not a coboundary in this slice.
pub fn coboundary_witness(phi: &ModuleCochain, slice: &ComplexSlice) -> Result<Option<ModuleCochain>> {
    let b = slice.target_coordinates(phi)?;
    Ok(slice
        .differential
        .solve_preimage(&b)?
        .map(|x| slice.cochain_from(&x)))
}

/// `d phi` evaluated through the explicit formula
/// `-(sum_i (-1)^i X_i . phi(.., X_i omitted, ..) + sum_{i<j} (-1)^{i+j} phi([X_i, X_j], ..))`,
/// plus `(-1)^k d(phi(X_1, ..., X_k))` when `total` is set.
pub fn differential_by_formula(phi: &ModuleCochain, inputs: &[FormalVectorField], total: bool) -> Result<FormalForm> {
    let k = inputs.len();
    let n = phi.n();
    let mut acc = FormalForm::zero(n);
    if k > 0 {
        let part = phi.degree_component(k - 1);
        let omit = |skip: &[usize]| -> Vec<FormalVectorField> {
            (0..k).filter(|i| !skip.contains(i)).map(|i| inputs[i].clone()).collect()
        };
        for i in 0..k {
            if phi.is_trivial() {
                break;
            }
            let v = part.evaluate(&omit(&[i]))?.lie_derivative(&inputs[i])?;
            acc = if i % 2 == 0 { acc.add(&v) } else { acc.sub(&v) };
        }
        for i in 0..k {
            for j in (i + 1)..k {
                let mut args = vec![inputs[i].bracket(&inputs[j])?];
                args.extend(omit(&[i, j]));
                let v = part.evaluate(&args)?;
                acc = if (i + j) % 2 == 0 { acc.add(&v) } else { acc.sub(&v) };
            }
        }
        acc = acc.scale(&rat(-1));
    }
    if total && !phi.is_trivial() {
        let v = phi.degree_component(k).evaluate(inputs)?.de_rham();
        acc = if k % 2 == 0 { acc.add(&v) } else { acc.sub(&v) };
    }
    Ok(acc)
}

/// Randomized spot check of closedness on monomial inputs.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SampleCheck {
    pub seed: u64,
    pub samples: usize,
    /// Samples on which `d phi` did not vanish.
    pub failures: usize,
}

/// Evaluates `d phi` on `samples` random tuples of monomial fields with
/// integer coefficients, drawn from a seeded generator, whose jet total
/// stays inside the window of `phi`.
pub fn sample_closedness(phi: &ModuleCochain, total: bool, samples: usize, seed: u64) -> Result<SampleCheck> {
    let n = phi.n();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let arities: Vec<usize> = {
        let mut v: Vec<usize> = phi.terms().map(|(k, _)| k.degree() + 1).collect();
        if total {
            v.extend(phi.terms().map(|(k, _)| k.degree()));
        }
        v.sort_unstable();
        v.dedup();
        v.retain(|&a| a > 0);
        v
    };
    let bound = match phi.window() {
        Window::Complete => phi.max_jet_total() + 1,
        Window::UpTo(w) => w,
    };
    let mut failures = 0;
    for s in 0..samples {
        let Some(&k) = arities.get(s % arities.len().max(1)) else {
            break;
        };
        let mut budget = bound;
        let mut inputs = Vec::with_capacity(k);
        for _ in 0..k {
            let order = rng.gen_range(0..=budget.min(3));
            budget -= order;
            let mut exponent = MultiIndex::zero(n);
            for _ in 0..order {
                exponent = exponent.raise(rng.gen_range(0..n));
            }
            let m = MonomialField::new(exponent, rng.gen_range(0..n));
            inputs.push(FormalVectorField::from_monomial(m, rat(rng.gen_range(1..=5))));
        }
        if !differential_by_formula(phi, &inputs, total)?.is_zero() {
            failures += 1;
        }
    }
    Ok(SampleCheck { seed, samples, failures })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ce::{build_weight_zero_slice, slice_basis, SliceKind};

    fn f1(k: u32) -> MonomialField {
        MonomialField::new(MultiIndex(vec![k]), 0)
    }

    #[test]
    fn wronskian_class_is_closed_and_not_exact() {
        let w = ModuleCochain::trivial_from_terms(1, [(vec![f1(0), f1(1), f1(2)], rat(2))]).unwrap();
        let cert = is_cocycle(&w, false, 1).unwrap();
        assert!(cert.closed && cert.stabilized);
        let s = build_weight_zero_slice(1, 2).unwrap();
        assert_eq!(coboundary_witness(&w, &s).unwrap(), None);
    }

    #[test]
    fn exact_cochains_have_witnesses() {
        let s = build_weight_zero_slice(1, 1).unwrap();
        let psi = SliceKind::Trivial { weight: 0 }.cochain(1, &s.basis[0]);
        let phi = ce_differential(&psi).unwrap();
        let found = coboundary_witness(&phi, &s).unwrap().unwrap();
        assert_eq!(ce_differential(&found).unwrap(), phi);
        let zero = ModuleCochain::zero(1, true, Window::Complete);
        assert!(coboundary_witness(&zero, &s).unwrap().unwrap().is_zero());
    }

    #[test]
    fn non_closed_cochain_reports_witness() {
        let c = ModuleCochain::trivial_from_terms(1, [(vec![f1(1)], rat(1))]).unwrap();
        let cert = is_cocycle(&c, false, 1).unwrap();
        assert!(!cert.closed);
        assert!(cert.witness.is_some());
    }

    #[test]
    fn formula_agrees_with_the_engine() {
        let fields = |ks: &[(u32, u32)]| -> Vec<FormalVectorField> {
            ks.iter()
                .map(|&(a, b)| FormalVectorField::from_monomial(MonomialField::new(MultiIndex(vec![a, b]), 0), rat(1)))
                .collect()
        };
        let mut nonzero = 0;
        for q in 0..=2 {
            let kind = SliceKind::Total { window: 4 };
            for key in slice_basis(2, q, kind).iter().step_by(7) {
                let a = kind.cochain(2, key);
                let d = total_differential(&a).unwrap();
                for args in [fields(&[(1, 0), (0, 1), (2, 0)]), fields(&[(0, 0), (1, 1), (0, 1)])] {
                    let k = key.degree() + 1;
                    let args = &args[..k.min(3)];
                    let v = differential_by_formula(&a, args, true).unwrap();
                    nonzero += usize::from(!v.is_zero());
                    assert_eq!(v, d.evaluate(args).unwrap(), "{key}");
                }
            }
        }
        assert!(nonzero > 0);
        let w = ModuleCochain::trivial_from_terms(1, [(vec![f1(0), f1(2)], rat(1))]).unwrap();
        let args: Vec<FormalVectorField> =
            [0, 1, 3].iter().map(|&k| FormalVectorField::from_monomial(f1(k), rat(1))).collect();
        assert_eq!(
            differential_by_formula(&w, &args, false).unwrap(),
            ce_differential(&w).unwrap().evaluate(&args).unwrap()
        );
    }

    #[test]
    fn sampling_separates_cocycles() {
        let w = ModuleCochain::trivial_from_terms(1, [(vec![f1(0), f1(1), f1(2)], rat(2))]).unwrap();
        assert_eq!(sample_closedness(&w, false, 50, 7).unwrap().failures, 0);
        let open = ModuleCochain::trivial_from_terms(1, [(vec![f1(1)], rat(1))]).unwrap();
        assert!(sample_closedness(&open, false, 50, 7).unwrap().failures > 0);
    }
}
