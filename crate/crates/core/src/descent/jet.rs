use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};

use crate::calculus::{accumulate, wedge_sign, MultiIndex};
use crate::linalg::{rat, rational_to_string, Rational};

/// Jet coordinate `c^i_{J;a,b}`: the functional
/// `mu -> (d_z^a d_zbar^b mu^i_J)(z0)` on `Omega^{0,*}(C^n, T^{1,0})`.
///
/// `J` is the antiholomorphic form slot of the input. The coordinate has
/// ghost degree `1 - |J|`, so it is odd exactly when `|J|` is even.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct JetVar {
    pub direction: usize,
    pub forms: u32,
    pub hol: MultiIndex,
    pub anti: MultiIndex,
}

impl JetVar {
    pub fn new(direction: usize, forms: u32, hol: MultiIndex, anti: MultiIndex) -> Self {
        debug_assert_eq!(hol.dim(), anti.dim());
        JetVar {
            direction,
            forms,
            hol,
            anti,
        }
    }

    /// `c^i_{emptyset; a, 0}`, the Taylor coefficient coordinate of the 0-form part.
    pub fn holomorphic(direction: usize, hol: MultiIndex) -> Self {
        let n = hol.dim();
        JetVar::new(direction, 0, hol, MultiIndex::zero(n))
    }

    pub fn n(&self) -> usize {
        self.hol.dim()
    }

    pub fn is_odd(&self) -> bool {
        self.forms.count_ones() % 2 == 0
    }

    pub fn ghost_degree(&self) -> i64 {
        1 - self.forms.count_ones() as i64
    }

    /// Total number of derivatives.
    pub fn order(&self) -> u32 {
        self.hol.degree() + self.anti.degree()
    }
}

impl fmt::Display for JetVar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "c{}", self.direction + 1)?;
        if self.forms != 0 {
            let j: Vec<String> = (0..32).filter(|l| self.forms & (1 << l) != 0).map(|l| (l + 1).to_string()).collect();
            write!(f, "[{}]", j.join(""))?;
        }
        write!(f, "_{}", self.hol)?;
        if !self.anti.is_zero() {
            write!(f, ";{}", self.anti)?;
        }
        Ok(())
    }
}

/// Basis monomial `dzbar_K dz_I z0^p c_1 ... c_k` of `Omega(C^n) (x) C(jet T)`.
///
/// Form factors stand to the left with `dzbar` before `dz`. `base` holds the
/// exponents of an explicit base-point dependence `(z0, zbar0)`, length `2n`.
/// Variables are sorted; odd variables appear at most once.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct JetKey {
    pub dzbar: u32,
    pub dz: u32,
    pub base: MultiIndex,
    pub vars: Vec<JetVar>,
}

impl JetKey {
    pub fn form_degree(&self) -> usize {
        (self.dzbar.count_ones() + self.dz.count_ones()) as usize
    }

    pub fn odd_vars(&self) -> usize {
        self.vars.iter().filter(|v| v.is_odd()).count()
    }

    /// Parity of the whole monomial.
    pub fn is_odd(&self) -> bool {
        (self.form_degree() + self.odd_vars()) % 2 == 1
    }

    /// Number of inputs the body consumes.
    pub fn arity(&self) -> usize {
        self.vars.len()
    }

    pub fn ghost_degree(&self) -> i64 {
        self.vars.iter().map(JetVar::ghost_degree).sum()
    }
}

fn sign(odd: bool) -> i32 {
    if odd {
        -1
    } else {
        1
    }
}

/// Sorts variables with the Koszul sign; `None` if an odd variable repeats.
pub(crate) fn normalize_vars(vars: &mut [JetVar]) -> Option<i32> {
    let mut s = 1;
    for i in 1..vars.len() {
        let mut j = i;
        while j > 0 && vars[j - 1] > vars[j] {
            if vars[j - 1].is_odd() && vars[j].is_odd() {
                s = -s;
            }
            vars.swap(j - 1, j);
            j -= 1;
        }
    }
    if vars.windows(2).any(|w| w[0] == w[1] && w[0].is_odd()) {
        return None;
    }
    Some(s)
}

/// Element of `Omega(C^n) (x) C(jet T)` with rational coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JetPoly {
    n: usize,
    terms: BTreeMap<JetKey, Rational>,
}

impl JetPoly {
    pub fn zero(n: usize) -> Self {
        JetPoly {
            n,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(n: usize, c: Rational) -> Self {
        let mut p = Self::zero(n);
        p.add_term(
            JetKey {
                dzbar: 0,
                dz: 0,
                base: MultiIndex::zero(2 * n),
                vars: Vec::new(),
            },
            c,
        );
        p
    }

    pub fn one(n: usize) -> Self {
        Self::constant(n, Rational::one())
    }

    pub fn var(v: JetVar) -> Self {
        let n = v.n();
        let mut p = Self::zero(n);
        p.add_term(
            JetKey {
                dzbar: 0,
                dz: 0,
                base: MultiIndex::zero(2 * n),
                vars: vec![v],
            },
            Rational::one(),
        );
        p
    }

    /// The de Rham form `dzbar_K dz_I`.
    pub fn form(n: usize, dzbar: u32, dz: u32) -> Self {
        let mut p = Self::zero(n);
        p.add_term(
            JetKey {
                dzbar,
                dz,
                base: MultiIndex::zero(2 * n),
                vars: Vec::new(),
            },
            Rational::one(),
        );
        p
    }

    /// Explicit base-point monomial `z0^p zbar0^q`, `exponent = (p, q)`.
    pub fn base_monomial(exponent: MultiIndex) -> Self {
        let n = exponent.dim() / 2;
        let mut p = Self::zero(n);
        p.add_term(
            JetKey {
                dzbar: 0,
                dz: 0,
                base: exponent,
                vars: Vec::new(),
            },
            Rational::one(),
        );
        p
    }

    /// Adds a term whose variables may be unsorted.
    pub fn add_term(&mut self, mut key: JetKey, coeff: Rational) {
        let Some(s) = normalize_vars(&mut key.vars) else {
            return;
        };
        accumulate(&mut self.terms, key, coeff * rat(s as i64));
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn terms(&self) -> impl Iterator<Item = (&JetKey, &Rational)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, key: &JetKey) -> Rational {
        self.terms.get(key).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn scale(&self, s: &Rational) -> Self {
        let mut out = Self::zero(self.n);
        for (k, c) in &self.terms {
            accumulate(&mut out.terms, k.clone(), c * s);
        }
        out
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (k, c) in &other.terms {
            accumulate(&mut out.terms, k.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&rat(-1)))
    }

    /// Super-commutative product.
    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero(self.n);
        for (k1, c1) in &self.terms {
            for (k2, c2) in &other.terms {
                if let Some((s, key)) = mul_keys(k1, k2) {
                    out.add_term(key, c1 * c2 * rat(s as i64));
                }
            }
        }
        out
    }

    /// Component of de Rham bidegree `(p, q)`: `p` factors `dz`, `q` factors `dzbar`.
    pub fn bidegree_component(&self, p: usize, q: usize) -> Self {
        self.filter(|k| k.dz.count_ones() as usize == p && k.dzbar.count_ones() as usize == q)
    }

    pub fn filter(&self, keep: impl Fn(&JetKey) -> bool) -> Self {
        JetPoly {
            n: self.n,
            terms: self.terms.iter().filter(|(k, _)| keep(k)).map(|(k, c)| (k.clone(), c.clone())).collect(),
        }
    }

    /// Coefficient of the form `dzbar_K dz_I`, as a form-free polynomial.
    pub fn form_coefficient(&self, dzbar: u32, dz: u32) -> Self {
        let mut out = Self::zero(self.n);
        for (k, c) in &self.terms {
            if k.dzbar == dzbar && k.dz == dz {
                let key = JetKey {
                    dzbar: 0,
                    dz: 0,
                    ..k.clone()
                };
                accumulate(&mut out.terms, key, c.clone());
            }
        }
        out
    }

    /// Largest number of derivatives on any variable.
    pub fn jet_order(&self) -> u32 {
        self.terms.keys().flat_map(|k| k.vars.iter().map(JetVar::order)).max().unwrap_or(0)
    }

    pub fn is_translation_invariant(&self) -> bool {
        self.terms.keys().all(|k| k.base.is_zero())
    }

    /// Applies a derivation of parity `odd`, given on generators.
    ///
    /// Forms and base-point factors are constants for the derivation; it
    /// passes them and earlier variables with the Koszul sign.
    pub fn apply_derivation(&self, odd: bool, on_var: impl Fn(&JetVar) -> JetPoly) -> JetPoly {
        let mut cache: BTreeMap<JetVar, JetPoly> = BTreeMap::new();
        let mut out = Self::zero(self.n);
        for (key, c) in &self.terms {
            let mut passed = key.form_degree();
            for (r, v) in key.vars.iter().enumerate() {
                let image = cache.entry(v.clone()).or_insert_with(|| on_var(v));
                if !image.is_zero() {
                    let s = if odd { sign(passed % 2 == 1) } else { 1 };
                    let prefix = JetKey {
                        vars: key.vars[..r].to_vec(),
                        ..key.clone()
                    };
                    let suffix = JetKey {
                        dzbar: 0,
                        dz: 0,
                        base: MultiIndex::zero(2 * self.n),
                        vars: key.vars[r + 1..].to_vec(),
                    };
                    for (k_img, c_img) in &image.terms {
                        let Some((s1, left)) = mul_keys(&prefix, k_img) else {
                            continue;
                        };
                        let Some((s2, full)) = mul_keys(&left, &suffix) else {
                            continue;
                        };
                        out.add_term(full, c * c_img * rat((s * s1 * s2) as i64));
                    }
                }
                if v.is_odd() {
                    passed += 1;
                }
            }
        }
        out
    }

    /// Left multiplication by `dz_l` (`holomorphic`) or `dzbar_l`.
    pub fn wedge_form(&self, l: usize, holomorphic: bool) -> JetPoly {
        let (dzbar, dz) = if holomorphic { (0, 1 << l) } else { (1 << l, 0) };
        JetPoly::form(self.n, dzbar, dz).mul(self)
    }
}

/// Product of two basis monomials with its sign.
pub(crate) fn mul_keys(a: &JetKey, b: &JetKey) -> Option<(i32, JetKey)> {
    // dzbar_A dz_A P_A dzbar_B dz_B P_B
    let mut s = 1;
    // P_A past the forms of b.
    if a.odd_vars() % 2 == 1 && (b.dzbar.count_ones() + b.dz.count_ones()) % 2 == 1 {
        s = -s;
    }
    // dz_A past dzbar_B.
    if (a.dz.count_ones() * b.dzbar.count_ones()) % 2 == 1 {
        s = -s;
    }
    s *= wedge_sign(a.dzbar, b.dzbar)?;
    s *= wedge_sign(a.dz, b.dz)?;
    let mut vars = a.vars.clone();
    vars.extend_from_slice(&b.vars);
    s *= normalize_vars(&mut vars)?;
    Some((
        s,
        JetKey {
            dzbar: a.dzbar | b.dzbar,
            dz: a.dz | b.dz,
            base: a.base.add(&b.base),
            vars,
        },
    ))
}

impl fmt::Display for JetPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let mut first = true;
        for (k, c) in &self.terms {
            if !first {
                f.write_str(" + ")?;
            }
            first = false;
            write!(f, "({})", rational_to_string(c))?;
            for l in 0..self.n {
                if k.dzbar & (1 << l) != 0 {
                    write!(f, " dzbar{}", l + 1)?;
                }
            }
            for l in 0..self.n {
                if k.dz & (1 << l) != 0 {
                    write!(f, " dz{}", l + 1)?;
                }
            }
            if !k.base.is_zero() {
                write!(f, " z0^{}", k.base)?;
            }
            for v in &k.vars {
                write!(f, " {v}")?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(a: u32) -> JetPoly {
        JetPoly::var(JetVar::holomorphic(0, MultiIndex(vec![a])))
    }

    fn cbar(a: u32) -> JetPoly {
        JetPoly::var(JetVar::new(0, 1, MultiIndex(vec![a]), MultiIndex(vec![0])))
    }

    #[test]
    fn odd_variables_anticommute() {
        assert_eq!(c(0).mul(&c(1)), c(1).mul(&c(0)).scale(&rat(-1)));
        assert!(c(1).mul(&c(1)).is_zero());
        assert_eq!(cbar(0).mul(&c(1)), c(1).mul(&cbar(0)));
        assert!(!cbar(0).mul(&cbar(0)).is_zero());
    }

    #[test]
    fn forms_pass_odd_variables_with_sign() {
        let dz = JetPoly::form(1, 0, 1);
        assert_eq!(c(0).mul(&dz), dz.mul(&c(0)).scale(&rat(-1)));
        assert_eq!(cbar(0).mul(&dz), dz.mul(&cbar(0)));
        let dzbar = JetPoly::form(1, 1, 0);
        assert_eq!(dz.mul(&dzbar), dzbar.mul(&dz).scale(&rat(-1)));
    }

    #[test]
    fn product_is_associative() {
        let dz = JetPoly::form(1, 0, 1);
        let dzbar = JetPoly::form(1, 1, 0);
        let xs = [c(0).add(&dz), cbar(2).add(&c(1)), dzbar.add(&cbar(0).mul(&c(3)))];
        let l = xs[0].mul(&xs[1]).mul(&xs[2]);
        let r = xs[0].mul(&xs[1].mul(&xs[2]));
        assert_eq!(l, r);
    }
}
