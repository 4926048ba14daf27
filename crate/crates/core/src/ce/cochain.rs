use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};

use crate::calculus::{FormTerm, FormalForm, FormalVectorField, MonomialField, MultiIndex};
use crate::error::{Error, Result};
use crate::linalg::{rat, rational_to_string, Rational};

/// Which coefficient module a cochain takes values in.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CoefficientKind {
    Trivial,
    Functions,
    Forms(usize),
    /// Several form degrees at once (an element of the total complex).
    Mixed,
}

/// Range of jet totals on which a cochain is known.
///
/// The jet total of a term `theta_S x^beta dx_I` is `M = sum_{s in S} |alpha_s|`.
/// Every operator in this crate only raises `M`, so a cochain known on
/// `M <= N` determines the result on `M <= N` exactly.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Window {
    UpTo(u32),
    Complete,
}

impl Window {
    pub fn contains(self, total: u32) -> bool {
        match self {
            Window::UpTo(n) => total <= n,
            Window::Complete => true,
        }
    }

    pub fn bound(self) -> Option<u32> {
        match self {
            Window::UpTo(n) => Some(n),
            Window::Complete => None,
        }
    }

    pub fn meet(self, other: Window) -> Window {
        self.min(other)
    }
}

impl fmt::Display for Window {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Window::UpTo(n) => write!(f, "jet total <= {n}"),
            Window::Complete => write!(f, "complete"),
        }
    }
}

/// Basis cochain `theta_S x^beta dx_I`: the covectors dual to the strictly
/// increasing tuple `S`, times a form.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CochainKey {
    pub fields: Vec<MonomialField>,
    pub form: FormTerm,
}

impl CochainKey {
    pub fn new(fields: Vec<MonomialField>, form: FormTerm) -> Self {
        debug_assert!(fields.windows(2).all(|w| w[0] < w[1]));
        CochainKey { fields, form }
    }

    /// Trivial-coefficient basis cochain.
    pub fn scalar(n: usize, fields: Vec<MonomialField>) -> Self {
        Self::new(fields, FormTerm::new(MultiIndex::zero(n), 0))
    }

    pub fn degree(&self) -> usize {
        self.fields.len()
    }

    pub fn form_degree(&self) -> usize {
        self.form.degree()
    }

    pub fn jet_total(&self) -> u32 {
        self.fields.iter().map(MonomialField::order).sum()
    }

    /// Euler weight `|beta| + p + q - M`.
    pub fn weight(&self) -> i64 {
        self.form.weight() + self.degree() as i64 - self.jet_total() as i64
    }

    pub fn max_field_order(&self) -> u32 {
        self.fields.iter().map(MonomialField::order).max().unwrap_or(0)
    }
}

impl fmt::Display for CochainKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (k, s) in self.fields.iter().enumerate() {
            if k > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{s}")?;
        }
        write!(f, "]")?;
        if !(self.form.dx == 0 && self.form.exponent.is_zero()) {
            write!(f, " {}", self.form.exponent)?;
            for i in 0..self.form.exponent.dim() {
                if self.form.dx & (1 << i) != 0 {
                    write!(f, " dx{}", i + 1)?;
                }
            }
        }
        Ok(())
    }
}

/// Sorts `v` into canonical order, returning the permutation sign, or `None`
/// if two entries coincide (the wedge vanishes).
pub(crate) fn sort_with_sign(v: &mut [MonomialField]) -> Option<i32> {
    let mut sign = 1;
    for i in 1..v.len() {
        let mut j = i;
        while j > 0 && v[j - 1] > v[j] {
            v.swap(j - 1, j);
            sign = -sign;
            j -= 1;
        }
        if j > 0 && v[j - 1] == v[j] {
            return None;
        }
    }
    Some(sign)
}

/// `theta_a theta_S`: sign and merged tuple, or `None` if `a` is in `S`.
pub(crate) fn insert_field(a: &MonomialField, s: &[MonomialField]) -> Option<(i32, Vec<MonomialField>)> {
    let pos = match s.binary_search(a) {
        Ok(_) => return None,
        Err(p) => p,
    };
    let mut v = Vec::with_capacity(s.len() + 1);
    v.extend_from_slice(&s[..pos]);
    v.push(a.clone());
    v.extend_from_slice(&s[pos..]);
    Some((if pos % 2 == 0 { 1 } else { -1 }, v))
}

/// `d/d theta_a` applied to `theta_S` from the left.
pub(crate) fn remove_field(a: &MonomialField, s: &[MonomialField]) -> Option<(i32, Vec<MonomialField>)> {
    let pos = s.binary_search(a).ok()?;
    let mut v = s.to_vec();
    v.remove(pos);
    Some((if pos % 2 == 0 { 1 } else { -1 }, v))
}

/// All strictly increasing `q`-tuples of basis fields whose orders sum to `total`.
pub fn sorted_tuples(n: usize, q: usize, total: u32) -> Vec<Vec<MonomialField>> {
    sorted_tuples_bounded(n, q, total, total)
}

/// As [`sorted_tuples`], with every field of order at most `max_order`.
pub fn sorted_tuples_bounded(n: usize, q: usize, total: u32, max_order: u32) -> Vec<Vec<MonomialField>> {
    fn rec(
        fields: &[MonomialField],
        start: usize,
        q: usize,
        rem: u32,
        cur: &mut Vec<MonomialField>,
        out: &mut Vec<Vec<MonomialField>>,
    ) {
        if q == 0 {
            if rem == 0 {
                out.push(cur.clone());
            }
            return;
        }
        for k in start..fields.len() {
            let o = fields[k].order();
            // Fields are sorted by order, so the remaining picks cost at least o each.
            if o * q as u32 > rem {
                break;
            }
            cur.push(fields[k].clone());
            rec(fields, k + 1, q - 1, rem - o, cur, out);
            cur.pop();
        }
    }
    let fields = MonomialField::all_up_to(n, total.min(max_order));
    let mut out = Vec::new();
    rec(&fields, 0, q, total, &mut Vec::with_capacity(q), &mut out);
    out
}

/// A cochain on `vect(n)` with values in the trivial module, in functions, or in forms.
///
/// Stored in the super-commutative model `Lambda(theta) (x) Omega`: the term
/// `theta_S w` evaluates on the sorted basis tuple `e_S` to `w` (determinant
/// convention, no `1/k!`), and on arbitrary inputs by alternating multilinear
/// extension.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModuleCochain {
    n: usize,
    trivial: bool,
    window: Window,
    terms: BTreeMap<CochainKey, Rational>,
}

impl ModuleCochain {
    pub fn zero(n: usize, trivial: bool, window: Window) -> Self {
        ModuleCochain {
            n,
            trivial,
            window,
            terms: BTreeMap::new(),
        }
    }

    /// Finite trivial-coefficient cochain from basis tuples.
    pub fn trivial_from_terms(n: usize, terms: impl IntoIterator<Item = (Vec<MonomialField>, Rational)>) -> Result<Self> {
        let mut c = Self::zero(n, true, Window::Complete);
        for (mut fields, coeff) in terms {
            if let Some(s) = sort_with_sign(&mut fields) {
                c.add_term(CochainKey::scalar(n, fields), coeff * rat(s as i64))?;
            }
        }
        Ok(c)
    }

    /// The single basis cochain `theta_S x^beta dx_I`.
    pub fn basis(n: usize, key: CochainKey, trivial: bool, window: Window) -> Result<Self> {
        let mut c = Self::zero(n, trivial, window);
        c.add_term(key, Rational::one())?;
        Ok(c)
    }

    /// Builds the cochain whose value on sorted basis tuples is the signed sum
    /// of `f` over all orderings of the tuple.
    ///
    /// Every tuple with jet total at most `max_total` is sampled; the result
    /// carries the window `UpTo(max_total)`.
    pub fn from_alternating_fn<F>(n: usize, q: usize, max_total: u32, trivial: bool, f: F) -> Result<Self>
    where
        F: Fn(&[MonomialField]) -> FormalForm,
    {
        let mut c = Self::zero(n, trivial, Window::UpTo(max_total));
        for total in 0..=max_total {
            for s in sorted_tuples(n, q, total) {
                c.add_value(&s, &antisymmetrize(&s, &f))?;
            }
        }
        Ok(c)
    }

    /// As [`from_alternating_fn`](Self::from_alternating_fn) for a function that
    /// vanishes once any input has order above `max_order`; the result is complete.
    pub fn from_alternating_fn_bounded<F>(n: usize, q: usize, max_order: u32, trivial: bool, f: F) -> Result<Self>
    where
        F: Fn(&[MonomialField]) -> FormalForm,
    {
        let mut c = Self::zero(n, trivial, Window::Complete);
        for total in 0..=max_order * q as u32 {
            for s in sorted_tuples_bounded(n, q, total, max_order) {
                c.add_value(&s, &antisymmetrize(&s, &f))?;
            }
        }
        Ok(c)
    }

    /// Complete cochain supported on the given sorted tuples; `f` must vanish on all others.
    pub fn from_alternating_fn_on<F>(
        n: usize,
        tuples: impl IntoIterator<Item = Vec<MonomialField>>,
        trivial: bool,
        f: F,
    ) -> Result<Self>
    where
        F: Fn(&[MonomialField]) -> FormalForm,
    {
        let mut c = Self::zero(n, trivial, Window::Complete);
        for s in tuples {
            c.add_value(&s, &antisymmetrize(&s, &f))?;
        }
        Ok(c)
    }

    fn add_value(&mut self, s: &[MonomialField], value: &FormalForm) -> Result<()> {
        for (t, v) in value.terms() {
            self.add_term(CochainKey::new(s.to_vec(), t.clone()), v.clone())?;
        }
        Ok(())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn is_trivial(&self) -> bool {
        self.trivial
    }

    pub fn window(&self) -> Window {
        self.window
    }

    /// Adds a term; terms outside the window are dropped.
    pub fn add_term(&mut self, key: CochainKey, coeff: Rational) -> Result<()> {
        if self.trivial && (key.form.dx != 0 || !key.form.exponent.is_zero()) {
            return Err(Error::IncompatibleCoefficients(format!(
                "form-valued term {key} in a trivial-coefficient cochain"
            )));
        }
        if self.window.contains(key.jet_total()) {
            crate::calculus::accumulate(&mut self.terms, key, coeff);
        }
        Ok(())
    }

    pub(crate) fn add_term_unchecked(&mut self, key: CochainKey, coeff: Rational) {
        if self.window.contains(key.jet_total()) {
            crate::calculus::accumulate(&mut self.terms, key, coeff);
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&CochainKey, &Rational)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, key: &CochainKey) -> Rational {
        self.terms.get(key).cloned().unwrap_or_else(Rational::zero)
    }

    /// Cochain degree `q`, if homogeneous (zero cochains report `None`).
    pub fn degree(&self) -> Option<usize> {
        homogeneous(self.terms.keys().map(CochainKey::degree))
    }

    pub fn form_degree(&self) -> Option<usize> {
        homogeneous(self.terms.keys().map(CochainKey::form_degree))
    }

    /// Total degree `q + p`, if homogeneous.
    pub fn total_degree(&self) -> Option<usize> {
        homogeneous(self.terms.keys().map(|k| k.degree() + k.form_degree()))
    }

    pub fn weight(&self) -> Option<i64> {
        homogeneous(self.terms.keys().map(CochainKey::weight))
    }

    pub fn kind(&self) -> CoefficientKind {
        if self.trivial {
            return CoefficientKind::Trivial;
        }
        match self.form_degree() {
            Some(0) | None if self.terms.is_empty() => CoefficientKind::Functions,
            Some(0) => CoefficientKind::Functions,
            Some(p) => CoefficientKind::Forms(p),
            None => CoefficientKind::Mixed,
        }
    }

    /// Largest jet order among the covectors in the support.
    pub fn max_field_order(&self) -> u32 {
        self.terms.keys().map(CochainKey::max_field_order).max().unwrap_or(0)
    }

    pub fn max_jet_total(&self) -> u32 {
        self.terms.keys().map(CochainKey::jet_total).max().unwrap_or(0)
    }

    pub fn scale(&self, s: &Rational) -> Self {
        let mut out = Self::zero(self.n, self.trivial, self.window);
        for (k, c) in &self.terms {
            out.add_term_unchecked(k.clone(), c * s);
        }
        out
    }

    /// Sum; the window of the result is the smaller of the two.
    pub fn add(&self, other: &Self) -> Self {
        let mut out = Self::zero(self.n, self.trivial && other.trivial, self.window.meet(other.window));
        for (k, c) in self.terms.iter().chain(other.terms.iter()) {
            out.add_term_unchecked(k.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&rat(-1)))
    }

    /// Restricts to a smaller window.
    pub fn truncate(&self, window: Window) -> Self {
        let mut out = Self::zero(self.n, self.trivial, self.window.meet(window));
        for (k, c) in &self.terms {
            out.add_term_unchecked(k.clone(), c.clone());
        }
        out
    }

    /// Reinterprets a trivial-coefficient cochain as a function-valued one (constants).
    pub fn include(&self) -> Self {
        let mut out = self.clone();
        out.trivial = false;
        out
    }

    /// Reinterprets constant-function values as a trivial-coefficient cochain.
    pub fn as_trivial(&self) -> Result<Self> {
        let mut out = Self::zero(self.n, true, self.window);
        for (k, c) in &self.terms {
            out.add_term(k.clone(), c.clone())?;
        }
        Ok(out)
    }

    /// Part of form degree `p`.
    pub fn form_component(&self, p: usize) -> Self {
        let mut out = Self::zero(self.n, self.trivial, self.window);
        for (k, c) in self.terms.iter().filter(|(k, _)| k.form_degree() == p) {
            out.add_term_unchecked(k.clone(), c.clone());
        }
        out
    }

    /// Part of cochain degree `q`.
    pub fn degree_component(&self, q: usize) -> Self {
        let mut out = Self::zero(self.n, self.trivial, self.window);
        for (k, c) in self.terms.iter().filter(|(k, _)| k.degree() == q) {
            out.add_term_unchecked(k.clone(), c.clone());
        }
        out
    }

    /// Value on a tuple of basis fields (in any order).
    pub fn evaluate_monomials(&self, inputs: &[MonomialField]) -> Result<FormalForm> {
        let total: u32 = inputs.iter().map(MonomialField::order).sum();
        if !self.window.contains(total) {
            return Err(Error::OutsideWindow {
                needed: total,
                window: self.window.bound().unwrap_or(0),
            });
        }
        let mut sorted = inputs.to_vec();
        let mut out = FormalForm::zero(self.n);
        let Some(sign) = sort_with_sign(&mut sorted) else {
            return Ok(out);
        };
        let lo = CochainKey::new(sorted.clone(), FormTerm::new(MultiIndex::zero(0), 0));
        for (k, c) in self.terms.range(lo..) {
            if k.fields != sorted {
                break;
            }
            out.add_term(k.form.clone(), c * rat(sign as i64));
        }
        Ok(out)
    }

    /// Value on arbitrary (finite) fields by multilinear expansion.
    pub fn evaluate(&self, inputs: &[FormalVectorField]) -> Result<FormalForm> {
        fn rec(
            c: &ModuleCochain,
            inputs: &[FormalVectorField],
            cur: &mut Vec<MonomialField>,
            coeff: Rational,
            out: &mut FormalForm,
        ) -> Result<()> {
            if cur.len() == inputs.len() {
                *out = out.add(&c.evaluate_monomials(cur)?.scale(&coeff));
                return Ok(());
            }
            for (m, v) in inputs[cur.len()].terms() {
                cur.push(m.clone());
                rec(c, inputs, cur, &coeff * v, out)?;
                cur.pop();
            }
            Ok(())
        }
        let mut out = FormalForm::zero(self.n);
        rec(self, inputs, &mut Vec::with_capacity(inputs.len()), Rational::one(), &mut out)?;
        Ok(out)
    }

    /// Value of a trivial-coefficient cochain.
    pub fn evaluate_scalar(&self, inputs: &[FormalVectorField]) -> Result<Rational> {
        Ok(self.evaluate(inputs)?.at_zero())
    }
}

fn homogeneous<T: PartialEq + Copy>(mut it: impl Iterator<Item = T>) -> Option<T> {
    let first = it.next()?;
    it.all(|x| x == first).then_some(first)
}

/// `sum_sigma sign(sigma) f(s_sigma(1), ..., s_sigma(k))`.
pub(crate) fn antisymmetrize<F>(s: &[MonomialField], f: &F) -> FormalForm
where
    F: Fn(&[MonomialField]) -> FormalForm,
{
    let mut out: Option<FormalForm> = None;
    for (perm, sign) in permutations(s.len()) {
        let args: Vec<MonomialField> = perm.iter().map(|&i| s[i].clone()).collect();
        let v = f(&args);
        let v = if sign > 0 { v } else { v.scale(&rat(-1)) };
        out = Some(match out {
            None => v,
            Some(acc) => acc.add(&v),
        });
    }
    out.expect("at least one permutation")
}

/// All permutations of `0..k` with their signs (Heap's algorithm).
pub(crate) fn permutations(k: usize) -> Vec<(Vec<usize>, i32)> {
    let mut a: Vec<usize> = (0..k).collect();
    let mut c = vec![0usize; k];
    let mut sign = 1;
    let mut out = vec![(a.clone(), sign)];
    let mut i = 0;
    while i < k {
        if c[i] < i {
            if i % 2 == 0 {
                a.swap(0, i);
            } else {
                a.swap(c[i], i);
            }
            sign = -sign;
            out.push((a.clone(), sign));
            c[i] += 1;
            i = 0;
        } else {
            c[i] = 0;
            i += 1;
        }
    }
    out
}

impl fmt::Display for ModuleCochain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (key, c)) in self.terms.iter().enumerate() {
            if k > 0 {
                write!(f, " + ")?;
            }
            write!(f, "({}) {}", rational_to_string(c), key)?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f1(k: u32) -> MonomialField {
        MonomialField::new(MultiIndex(vec![k]), 0)
    }

    #[test]
    fn permutation_signs() {
        let p = permutations(3);
        assert_eq!(p.len(), 6);
        assert_eq!(p.iter().map(|x| x.1).sum::<i32>(), 0);
        assert_eq!(permutations(0).len(), 1);
    }

    #[test]
    fn tuples_are_counted() {
        // Weight-zero trivial slices for n = 1 have dimension 1, 1, 1, 0.
        for (q, dim) in [(1, 1), (2, 1), (3, 1), (4, 0)] {
            assert_eq!(sorted_tuples(1, q, q as u32).len(), dim);
        }
    }

    #[test]
    fn evaluation_is_alternating() {
        let c = ModuleCochain::trivial_from_terms(1, [(vec![f1(0), f1(2)], rat(3))]).unwrap();
        assert_eq!(c.evaluate_monomials(&[f1(0), f1(2)]).unwrap().at_zero(), rat(3));
        assert_eq!(c.evaluate_monomials(&[f1(2), f1(0)]).unwrap().at_zero(), rat(-3));
        assert!(c.evaluate_monomials(&[f1(2), f1(2)]).unwrap().is_zero());
    }

    #[test]
    fn window_is_enforced() {
        let c = ModuleCochain::zero(1, false, Window::UpTo(2));
        assert!(c.evaluate_monomials(&[f1(3)]).is_err());
    }
}
