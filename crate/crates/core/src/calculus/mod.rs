//! Formal Cartan calculus on the formal n-disk.
//!
//! Conventions used throughout the crate:
//!
//! * `x^alpha d_i` has Euler weight `|alpha| - 1`; `x^beta dx_I` has weight `|beta| + |I|`.
//! * `dx_I` is stored with strictly increasing `I`. The de Rham differential
//!   inserts `dx_i` in front and reorders with the Koszul sign; contraction
//!   removes a slot with sign `(-1)^(position)` counted from the left.
//! * The bracket is the commutator of derivations,
//!   `[f d_i, g d_j] = f d_i(g) d_j - g d_j(f) d_i`. With the Jacobian
//!   `J(X)_ij = d_i f_j`, the embedding `A -> sum A_ij x_i d_j` is a Lie
//!   algebra homomorphism `gl(n) -> vect(n)_0` and `J(0)` is a left inverse.

mod field;
mod form;
mod jacobian;
mod poly;

pub use field::{FormalVectorField, MonomialField};
pub use form::{FormTerm, FormalForm};
pub(crate) use form::contract_slot;
pub use jacobian::{gl_embedding, jacobian, JacobianSeries};
pub use poly::{MultiIndex, Polynomial};

use std::collections::btree_map::Entry;
use std::collections::BTreeMap;

use num_traits::Zero;

use crate::linalg::Rational;

/// Adds `coeff` to `map[key]`, dropping the entry if it cancels to zero.
pub(crate) fn accumulate<K: Ord>(map: &mut BTreeMap<K, Rational>, key: K, coeff: Rational) {
    if coeff.is_zero() {
        return;
    }
    match map.entry(key) {
        Entry::Vacant(v) => {
            v.insert(coeff);
        }
        Entry::Occupied(mut o) => {
            *o.get_mut() += coeff;
            if o.get().is_zero() {
                o.remove();
            }
        }
    }
}

/// Sign and mask of `dx_i ^ dx_I`, or `None` if `i` is already in `I`.
pub(crate) fn insert_front(i: usize, mask: u32) -> Option<(i32, u32)> {
    let bit = 1u32 << i;
    if mask & bit != 0 {
        return None;
    }
    let below = (mask & (bit - 1)).count_ones();
    let sign = if below % 2 == 0 { 1 } else { -1 };
    Some((sign, mask | bit))
}

/// Sign of `dx_I ^ dx_J` reordered to increasing order, or `None` if they overlap.
pub(crate) fn wedge_sign(left: u32, right: u32) -> Option<i32> {
    if left & right != 0 {
        return None;
    }
    // Count pairs (a in left, b in right) with a > b.
    let mut inversions = 0u32;
    let mut r = right;
    while r != 0 {
        let b = r.trailing_zeros();
        r &= r - 1;
        inversions += (left >> (b + 1)).count_ones();
    }
    Some(if inversions % 2 == 0 { 1 } else { -1 })
}
