//! Derivations of `Omega(C^n) (x) C(jet T)`.
//!
//! With the tautological element `Xi = sum c^i_{J;a,b} (x) z^a zbar^b / (a! b!) dzbar_J d_i`,
//! every operator is fixed by its action on `Xi`:
//!
//! * `d_T Xi = 1/2 [Xi, Xi] - dbar Xi`, split as `d_CE` (bracket) and `dbar_T`;
//! * `eta_l Xi = d_l` and `etabar_l Xi = iota_{d/dzbar_l} Xi`;
//! * `D_l`, `Dbar_l` differentiate the polynomial factor of `Xi`.
//!
//! These give `[d_CE, eta_l] = D_l`, `[dbar_T, etabar_l] = Dbar_l`, and the
//! two other mixed brackets vanish.

use num_traits::One;

use super::jet::{JetKey, JetPoly, JetVar};
use crate::calculus::MultiIndex;
use crate::linalg::{rat, Rational};

/// `(-1)^{#{k in K : k < l}}`.
fn position_sign(l: usize, mask: u32) -> i64 {
    if (mask & ((1u32 << l) - 1)).count_ones() % 2 == 0 {
        1
    } else {
        -1
    }
}

fn binomial_multi(total: &MultiIndex, part: &MultiIndex) -> Rational {
    total.factorial() / (part.factorial() * total.sub(part).factorial())
}

/// Every `m <= bound` componentwise.
fn below(bound: &MultiIndex) -> Vec<MultiIndex> {
    let mut out = vec![MultiIndex(Vec::new())];
    for &b in &bound.0 {
        out = out
            .into_iter()
            .flat_map(|m| {
                (0..=b).map(move |k| {
                    let mut v = m.0.clone();
                    v.push(k);
                    MultiIndex(v)
                })
            })
            .collect();
    }
    out
}

fn submasks(mask: u32) -> Vec<u32> {
    let mut out = Vec::new();
    let mut s = mask;
    loop {
        out.push(s);
        if s == 0 {
            break;
        }
        s = (s - 1) & mask;
    }
    out
}

fn product(n: usize, a: JetVar, b: JetVar, coeff: Rational) -> JetPoly {
    let mut p = JetPoly::zero(n);
    p.add_term(
        JetKey {
            dzbar: 0,
            dz: 0,
            base: MultiIndex::zero(2 * n),
            vars: vec![a, b],
        },
        coeff,
    );
    p
}

/// `d_CE` on one generator: the `e^k_{L;a,b}` coefficient of `1/2 [Xi, Xi]`.
pub fn d_ce_var(v: &JetVar) -> JetPoly {
    let n = v.n();
    let (k, l_mask, a, b) = (v.direction, v.forms, &v.hol, &v.anti);
    let half = rat(1) / rat(2);
    let mut out = JetPoly::zero(n);
    for j_mask in submasks(l_mask) {
        let k_mask = l_mask & !j_mask;
        let eps = crate::calculus::wedge_sign(j_mask, k_mask).expect("disjoint") as i64;
        let j_odd = j_mask.count_ones() % 2 == 1;
        for b1 in below(b) {
            let b2 = b.sub(&b1);
            let bin_b = binomial_multi(b, &b1);
            for i in 0..n {
                // f d_i(g) d_k with e1 = (i, J, a1, b1), e2 = (k, K, a2, b2).
                for a1 in below(a) {
                    let a2 = a.raise(i).sub(&a1);
                    let c1 = JetVar::new(i, j_mask, a1.clone(), b1.clone());
                    let c2 = JetVar::new(k, k_mask, a2.clone(), b2.clone());
                    let koszul = if j_odd && c2.is_odd() { -1 } else { 1 };
                    let coeff = &half * rat(koszul * eps) * binomial_multi(a, &a1) * &bin_b;
                    out = out.add(&product(n, c1, c2, coeff));
                }
                // -g d_i(f) d_k with e1 = (k, J, a1, b1), e2 = (i, K, a2, b2).
                for a2 in below(a) {
                    let a1 = a.raise(i).sub(&a2);
                    let c1 = JetVar::new(k, j_mask, a1.clone(), b1.clone());
                    let c2 = JetVar::new(i, k_mask, a2.clone(), b2.clone());
                    let koszul = if j_odd && c2.is_odd() { -1 } else { 1 };
                    let coeff = -&half * rat(koszul * eps) * binomial_multi(a, &a2) * &bin_b;
                    out = out.add(&product(n, c1, c2, coeff));
                }
            }
        }
    }
    out
}

/// `dbar_T` on one generator: `c^k_{L;a,b} -> (-1)^{|L|+1} sum_{m in L} eps c^k_{L-m; a, b+e_m}`.
pub fn dbar_t_var(v: &JetVar) -> JetPoly {
    let n = v.n();
    let mut out = JetPoly::zero(n);
    let outer = if v.forms.count_ones() % 2 == 0 { -1 } else { 1 };
    for m in 0..n {
        let bit = 1u32 << m;
        if v.forms & bit == 0 {
            continue;
        }
        let rest = v.forms & !bit;
        let w = JetVar::new(v.direction, rest, v.hol.clone(), v.anti.raise(m));
        out = out.add(&JetPoly::var(w).scale(&rat(outer * position_sign(m, rest))));
    }
    out
}

/// `eta_l` on one generator: insertion of the constant field `d/dz_l`.
pub fn eta_var(l: usize, v: &JetVar) -> JetPoly {
    let n = v.n();
    if v.direction == l && v.forms == 0 && v.hol.is_zero() && v.anti.is_zero() {
        JetPoly::one(n)
    } else {
        JetPoly::zero(n)
    }
}

/// `etabar_l` on one generator: `c^i_{K} -> (-1)^{|K|} eps(l, K) c^i_{K+l}`.
pub fn etabar_var(l: usize, v: &JetVar) -> JetPoly {
    let n = v.n();
    let bit = 1u32 << l;
    if v.forms & bit != 0 {
        return JetPoly::zero(n);
    }
    let s = position_sign(l, v.forms) * if v.forms.count_ones() % 2 == 0 { 1 } else { -1 };
    let w = JetVar::new(v.direction, v.forms | bit, v.hol.clone(), v.anti.clone());
    JetPoly::var(w).scale(&rat(s))
}

pub fn d_ce(p: &JetPoly) -> JetPoly {
    p.apply_derivation(true, d_ce_var)
}

pub fn dbar_t(p: &JetPoly) -> JetPoly {
    p.apply_derivation(true, dbar_t_var)
}

/// The internal differential `d_T = dbar_T + d_CE`.
pub fn d_t(p: &JetPoly) -> JetPoly {
    d_ce(p).add(&dbar_t(p))
}

pub fn eta(l: usize, p: &JetPoly) -> JetPoly {
    p.apply_derivation(true, |v| eta_var(l, v))
}

pub fn eta_bar(l: usize, p: &JetPoly) -> JetPoly {
    p.apply_derivation(true, |v| etabar_var(l, v))
}

/// Total derivative along `z_l` (`holomorphic`) or `zbar_l`, including any
/// explicit base-point dependence.
pub fn total_derivative(l: usize, holomorphic: bool, p: &JetPoly) -> JetPoly {
    let n = p.n();
    // An even derivation sending each variable to one variable of the same
    // parity: substitute in place and let normalization sort.
    let mut out = JetPoly::zero(n);
    for (k, c) in p.terms() {
        for r in 0..k.vars.len() {
            let v = &k.vars[r];
            let mut vars = k.vars.clone();
            vars[r] = if holomorphic {
                JetVar::new(v.direction, v.forms, v.hol.raise(l), v.anti.clone())
            } else {
                JetVar::new(v.direction, v.forms, v.hol.clone(), v.anti.raise(l))
            };
            out.add_term(JetKey { vars, ..k.clone() }, c.clone());
        }
    }
    let slot = if holomorphic { l } else { n + l };
    for (k, c) in p.terms() {
        if let Some(lower) = k.base.lower(slot) {
            let e = k.base.0[slot];
            out.add_term(JetKey { base: lower, ..k.clone() }, c * rat(e as i64));
        }
    }
    out
}

/// `del = sum_l dz_l D_l`.
pub fn del(p: &JetPoly) -> JetPoly {
    (0..p.n()).fold(JetPoly::zero(p.n()), |acc, l| acc.add(&total_derivative(l, true, p).wedge_form(l, true)))
}

/// `delbar = sum_l dzbar_l Dbar_l`.
pub fn del_bar(p: &JetPoly) -> JetPoly {
    (0..p.n()).fold(JetPoly::zero(p.n()), |acc, l| acc.add(&total_derivative(l, false, p).wedge_form(l, false)))
}

/// The de Rham differential of the jet bundle's flat connection.
pub fn de_rham(p: &JetPoly) -> JetPoly {
    del(p).add(&del_bar(p))
}

/// `exp(sum_l dzbar_l etabar_l + dz_l eta_l)`, a finite sum since forms are nilpotent.
pub fn descent_exponential(p: &JetPoly) -> JetPoly {
    let n = p.n();
    let step = |x: &JetPoly| -> JetPoly {
        let mut acc = JetPoly::zero(n);
        for l in 0..n {
            acc = acc.add(&eta_bar(l, x).wedge_form(l, false));
            acc = acc.add(&eta(l, x).wedge_form(l, true));
        }
        acc
    };
    let mut out = p.clone();
    let mut term = p.clone();
    let mut factorial = Rational::one();
    for k in 1..=2 * n {
        term = step(&term);
        if term.is_zero() {
            break;
        }
        factorial *= rat(k as i64);
        out = out.add(&term.scale(&(Rational::one() / &factorial)));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gens(n: usize, max_order: u32) -> Vec<JetVar> {
        let mut out = Vec::new();
        for i in 0..n {
            for forms in 0..(1u32 << n) {
                for d in 0..=max_order {
                    for ab in MultiIndex::all_of_degree(2 * n, d) {
                        let hol = MultiIndex(ab.0[..n].to_vec());
                        let anti = MultiIndex(ab.0[n..].to_vec());
                        out.push(JetVar::new(i, forms, hol, anti));
                    }
                }
            }
        }
        out
    }

    fn graded_commutator(x: impl Fn(&JetPoly) -> JetPoly, y: impl Fn(&JetPoly) -> JetPoly, p: &JetPoly) -> JetPoly {
        // Both odd: anticommutator.
        x(&y(p)).add(&y(&x(p)))
    }

    #[test]
    fn differentials_square_to_zero() {
        for n in 1..=2 {
            for v in gens(n, 2) {
                let p = JetPoly::var(v.clone());
                assert!(d_ce(&d_ce(&p)).is_zero(), "d_CE^2 on {v}");
                assert!(dbar_t(&dbar_t(&p)).is_zero(), "dbar_T^2 on {v}");
                assert!(graded_commutator(d_ce, dbar_t, &p).is_zero(), "[d_CE, dbar_T] on {v}");
            }
        }
    }

    #[test]
    fn cartan_relations_on_generators() {
        for n in 1..=2 {
            for v in gens(n, 2) {
                let p = JetPoly::var(v.clone());
                for l in 0..n {
                    let dl = total_derivative(l, true, &p);
                    let dbl = total_derivative(l, false, &p);
                    assert_eq!(graded_commutator(d_ce, |x| eta(l, x), &p), dl, "[d_CE, eta] on {v}");
                    assert_eq!(graded_commutator(dbar_t, |x| eta_bar(l, x), &p), dbl, "[dbar_T, etabar] on {v}");
                    assert!(graded_commutator(d_ce, |x| eta_bar(l, x), &p).is_zero(), "[d_CE, etabar] on {v}");
                    assert!(graded_commutator(dbar_t, |x| eta(l, x), &p).is_zero(), "[dbar_T, eta] on {v}");
                    for m in 0..n {
                        assert!(graded_commutator(|x| eta(l, x), |x| eta_bar(m, x), &p).is_zero());
                        assert!(graded_commutator(|x| eta_bar(l, x), |x| eta_bar(m, x), &p).is_zero());
                    }
                }
            }
        }
    }

    #[test]
    fn total_derivatives_commute_with_d_t() {
        for v in gens(2, 1) {
            let p = JetPoly::var(v).mul(&JetPoly::var(JetVar::holomorphic(1, MultiIndex(vec![1, 0]))));
            for l in 0..2 {
                for hol in [true, false] {
                    assert_eq!(d_t(&total_derivative(l, hol, &p)), total_derivative(l, hol, &d_t(&p)));
                }
            }
        }
    }

    #[test]
    fn de_rham_squares_to_zero_and_anticommutes() {
        let p = JetPoly::var(JetVar::holomorphic(0, MultiIndex(vec![1, 0])))
            .mul(&JetPoly::var(JetVar::new(1, 2, MultiIndex(vec![0, 1]), MultiIndex(vec![1, 0]))))
            .mul(&JetPoly::base_monomial(MultiIndex(vec![1, 0, 0, 2])));
        assert!(de_rham(&de_rham(&p)).is_zero());
        assert!(de_rham(&d_t(&p)).add(&d_t(&de_rham(&p))).is_zero());
    }
}
