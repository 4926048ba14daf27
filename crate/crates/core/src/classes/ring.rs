use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use super::generators::{a_class, tau_class};
use super::operators::{cup_product, phi_map};
use crate::ce::{
    coboundary_witness, coordinates, is_cocycle, slice_basis, ComplexSlice, CocycleCertificate,
    ModuleCochain, SliceKind, Window,
};
use crate::error::{Error, Result};
use crate::linalg::SparseMatrix;

/// A monomial `a_{i_1} ... a_{i_k} tau_1^{l_1} ... tau_n^{l_n}` with each `a_i` at most once.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ClassExpression {
    /// Increasing indices of the `a` factors.
    pub a: Vec<usize>,
    /// `tau` index to exponent (no zero exponents).
    pub tau: BTreeMap<usize, u32>,
}

impl ClassExpression {
    pub fn a(i: usize) -> Self {
        ClassExpression {
            a: vec![i],
            tau: BTreeMap::new(),
        }
    }

    pub fn tau(i: usize, exp: u32) -> Self {
        ClassExpression {
            a: Vec::new(),
            tau: [(i, exp)].into_iter().collect(),
        }
    }

    pub fn times(&self, other: &Self) -> Result<Self> {
        let mut a = self.a.clone();
        for &i in &other.a {
            if a.contains(&i) {
                return Err(Error::Parse(format!("a{i} appears twice")));
            }
            a.push(i);
        }
        a.sort_unstable();
        let mut tau = self.tau.clone();
        for (&i, &e) in &other.tau {
            *tau.entry(i).or_insert(0) += e;
        }
        Ok(ClassExpression { a, tau })
    }

    /// Form degree `p`.
    pub fn form_degree(&self) -> usize {
        self.tau.iter().map(|(&i, &e)| i * e as usize).sum()
    }

    /// Cochain degree `q`.
    pub fn cochain_degree(&self) -> usize {
        self.a.iter().map(|i| 2 * i - 1).sum::<usize>() + self.form_degree()
    }

    pub fn total_degree(&self) -> usize {
        self.form_degree() + self.cochain_degree()
    }

    pub fn max_index(&self) -> usize {
        self.a.iter().chain(self.tau.keys()).copied().max().unwrap_or(0)
    }

    /// The cochain `a_{i_1} ... tau^l`, known up to jet total `window`.
    pub fn realize(&self, n: usize, window: u32) -> Result<ModuleCochain> {
        let mut acc = ModuleCochain::zero(n, false, Window::UpTo(window));
        acc.add_term(
            crate::ce::CochainKey::new(vec![], crate::calculus::FormTerm::new(crate::calculus::MultiIndex::zero(n), 0)),
            crate::linalg::rat(1),
        )?;
        for &i in &self.a {
            acc = cup_product(&acc, &a_class(n, i, window)?.cochain)?;
        }
        for (&i, &e) in &self.tau {
            let t = tau_class(n, i, window)?.cochain;
            for _ in 0..e {
                acc = cup_product(&acc, &t)?;
            }
        }
        Ok(acc)
    }
}

impl fmt::Display for ClassExpression {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> = self.a.iter().map(|i| format!("a{i}")).collect();
        for (i, e) in &self.tau {
            parts.push(if *e == 1 { format!("t{i}") } else { format!("t{i}^{e}") });
        }
        if parts.is_empty() {
            return f.write_str("1");
        }
        f.write_str(&parts.join("*"))
    }
}

impl FromStr for ClassExpression {
    type Err = Error;

    /// Grammar: factors `a<i>` or `t<i>`, optionally `^<k>`, joined by `*`; whitespace ignored.
    fn from_str(s: &str) -> Result<Self> {
        let s: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if s.is_empty() {
            return Err(Error::Parse("empty class expression".into()));
        }
        let mut out = ClassExpression::default();
        for factor in s.split('*') {
            let (base, exp) = match factor.split_once('^') {
                Some((b, e)) => (
                    b,
                    e.parse::<u32>()
                        .map_err(|_| Error::Parse(format!("bad exponent in `{factor}`")))?,
                ),
                None => (factor, 1),
            };
            let mut chars = base.chars();
            let kind = chars.next();
            let index: usize = chars
                .as_str()
                .parse()
                .map_err(|_| Error::Parse(format!("bad generator `{base}`")))?;
            if index == 0 || exp == 0 {
                return Err(Error::Parse(format!("bad factor `{factor}`")));
            }
            let term = match kind {
                Some('a') if exp == 1 => ClassExpression::a(index),
                Some('a') => return Err(Error::Parse(format!("odd generator `{base}` raised to a power"))),
                Some('t') => ClassExpression::tau(index, exp),
                _ => return Err(Error::Parse(format!("unknown generator `{base}`"))),
            };
            out = out.times(&term)?;
        }
        Ok(out)
    }
}

/// Closedness of a product of generators under `d_CE` (each `Omega^p` separately).
#[derive(Clone, Debug)]
pub struct ProductCheck {
    pub expression: ClassExpression,
    pub certificate: CocycleCertificate,
}

/// A relation `tau^l = 0` with `sum i l_i > n`.
#[derive(Clone, Debug)]
pub struct RelationCheck {
    pub expression: ClassExpression,
    /// The product already vanishes as a cochain (form degree above `n`).
    pub vanishes_identically: bool,
    /// A cochain `psi` with `d_CE psi` equal to the product was found.
    pub witness_found: bool,
}

/// A class expected to survive to `H(vect(n))`.
#[derive(Clone, Debug)]
pub struct SurvivorCheck {
    pub expression: ClassExpression,
    /// `(d_CE + d_dR)`-closedness.
    pub certificate: CocycleCertificate,
    /// `Phi` of the class is a coboundary in the trivial weight-zero complex.
    pub phi_exact: bool,
}

#[derive(Clone, Debug)]
pub struct RingReport {
    pub n: usize,
    pub window: u32,
    pub products: Vec<ProductCheck>,
    pub relations: Vec<RelationCheck>,
    pub survivors: Vec<SurvivorCheck>,
    /// Dimension of the span of the survivors' `Phi` images in cohomology.
    pub survivor_rank: usize,
}

impl RingReport {
    pub fn passed(&self) -> bool {
        self.products.iter().all(|p| p.certificate.closed)
            && self.relations.iter().all(|r| r.witness_found)
            && self.survivors.iter().all(|s| s.certificate.closed && !s.phi_exact)
            && self.survivor_rank == self.survivors.len()
    }
}

fn tau_monomials(n: usize, weight: usize) -> Vec<BTreeMap<usize, u32>> {
    // All l with sum i l_i == weight.
    fn rec(i: usize, n: usize, rem: usize, cur: &mut BTreeMap<usize, u32>, out: &mut Vec<BTreeMap<usize, u32>>) {
        if rem == 0 {
            out.push(cur.clone());
            return;
        }
        if i > n {
            return;
        }
        for e in 0..=(rem / i) {
            if e > 0 {
                cur.insert(i, e as u32);
            }
            rec(i + 1, n, rem - i * e, cur, out);
            cur.remove(&i);
        }
    }
    let mut out = Vec::new();
    rec(1, n, weight, &mut BTreeMap::new(), &mut out);
    out
}

fn a_subsets(n: usize) -> Vec<Vec<usize>> {
    (0u32..1 << n)
        .map(|m| (1..=n).filter(|i| m & (1 << (i - 1)) != 0).collect())
        .collect()
}

/// Exactness of a trivial-coefficient weight-zero cocycle.
fn trivial_witness(phi: &ModuleCochain, n: usize, q: usize) -> Result<bool> {
    if q == 0 {
        return Ok(phi.is_zero());
    }
    let slice = ComplexSlice::build(n, q - 1, SliceKind::Trivial { weight: 0 }, usize::MAX)?;
    Ok(coboundary_witness(phi, &slice)?.is_some())
}

/// Rank, modulo coboundaries, of the span of weight-zero degree-`q` cocycles.
pub fn rank_modulo_coboundaries(cocycles: &[ModuleCochain], n: usize, q: usize) -> Result<usize> {
    let target = slice_basis(n, q, SliceKind::Trivial { weight: 0 });
    let image = if q >= 2 {
        ComplexSlice::build(n, q - 1, SliceKind::Trivial { weight: 0 }, usize::MAX)?.differential
    } else {
        SparseMatrix::zero(target.len(), 0)
    };
    let mut triplets: Vec<(usize, usize, crate::linalg::Rational)> =
        image.entries().map(|(r, c, v)| (r, c, v.clone())).collect();
    for (j, phi) in cocycles.iter().enumerate() {
        for (r, v) in coordinates(phi, &target)?.into_iter().enumerate() {
            triplets.push((r, image.cols() + j, v));
        }
    }
    let augmented = SparseMatrix::from_triplets(target.len(), image.cols() + cocycles.len(), triplets)?;
    Ok(augmented.rank() - image.rank())
}

/// A generator product, its total-differential certificate and its `Phi` image.
#[derive(Clone, Debug)]
pub struct ClassImage {
    /// The product, realized on jet totals up to its total degree plus `margin`.
    pub cochain: ModuleCochain,
    pub certificate: CocycleCertificate,
    /// `Phi` of the product: a complete trivial-coefficient cochain of degree `p + q`.
    pub image: ModuleCochain,
}

/// Realizes `e` and maps it through `Phi`.
///
/// All generators have weight zero, so the image is complete once realized
/// on jet totals up to its degree.
pub fn class_image(e: &ClassExpression, n: usize, margin: u32) -> Result<ClassImage> {
    let q = e.total_degree() as u32;
    let cochain = e.realize(n, q + margin.max(1))?;
    let certificate = is_cocycle(&cochain, true, margin)?;
    let image = phi_map(&cochain.truncate(Window::UpTo(q)));
    let image = complete(&image.as_trivial()?.truncate(Window::UpTo(q)));
    Ok(ClassImage {
        cochain,
        certificate,
        image,
    })
}

/// Checks the presentation of `H(vect(n); Omega)` by `a_i`, `tau_i`.
///
/// * every product of generators of total degree at most `2n + 1` with
///   `sum i l_i <= n` is `d_CE`-closed;
/// * every `tau` monomial with `n < sum i l_i <= 2n` has a coboundary witness;
/// * the classes `a_1 tau^l` with `sum i l_i = n` are closed for the total
///   differential, their `Phi` images are not exact, and they are linearly
///   independent in cohomology.
pub fn verify_ring_presentation(n: usize, max_n: usize) -> Result<RingReport> {
    if n > max_n {
        return Err(Error::ResourceLimit(format!("ring presentation for n = {n} exceeds the cap {max_n}")));
    }
    let top = 2 * n + 1;
    let window = top as u32 + 1;
    let mut products = Vec::new();
    for weight in 0..=n {
        for tau in tau_monomials(n, weight) {
            for a in a_subsets(n) {
                let e = ClassExpression { a, tau: tau.clone() };
                if e.total_degree() == 0 || e.total_degree() > top {
                    continue;
                }
                let w = window.max(e.total_degree() as u32 + 1);
                let certificate = is_cocycle(&e.realize(n, w)?, false, 1)?;
                products.push(ProductCheck { expression: e, certificate });
            }
        }
    }
    let mut relations = Vec::new();
    for weight in (n + 1)..=(2 * n) {
        for tau in tau_monomials(n, weight) {
            let e = ClassExpression { a: Vec::new(), tau };
            let c = e.realize(n, window)?;
            let vanishes_identically = c.is_zero();
            // A nonzero relation would need a witness search in the function-valued
            // complex; with Omega^p = 0 for p > n the zero cochain is the witness.
            relations.push(RelationCheck {
                expression: e,
                vanishes_identically,
                witness_found: vanishes_identically,
            });
        }
    }
    let mut survivors = Vec::new();
    let mut images = Vec::new();
    for tau in tau_monomials(n, n) {
        let e = ClassExpression { a: vec![1], tau };
        let q = e.total_degree();
        let ClassImage { certificate, image, .. } = class_image(&e, n, 1)?;
        let phi_exact = trivial_witness(&image, n, q)?;
        images.push(image);
        survivors.push(SurvivorCheck {
            expression: e,
            certificate,
            phi_exact,
        });
    }
    let survivor_rank = rank_modulo_coboundaries(&images, n, top)?;
    Ok(RingReport {
        n,
        window,
        products,
        relations,
        survivors,
        survivor_rank,
    })
}

/// A weight-zero trivial cochain of degree `q` has jet total exactly `q`, so
/// a window of at least `q` already holds all of it.
pub(crate) fn complete(phi: &ModuleCochain) -> ModuleCochain {
    let mut out = ModuleCochain::zero(phi.n(), true, Window::Complete);
    for (k, c) in phi.terms() {
        out.add_term(k.clone(), c.clone()).expect("trivial terms");
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_print() {
        let e: ClassExpression = " a1 * t1^2 ".parse().unwrap();
        assert_eq!(e.to_string(), "a1*t1^2");
        assert_eq!(e.cochain_degree(), 3);
        assert_eq!(e.form_degree(), 2);
        assert!("bogus".parse::<ClassExpression>().is_err());
        assert!("a1^2".parse::<ClassExpression>().is_err());
        assert!("t1*t1".parse::<ClassExpression>().unwrap() == "t1^2".parse().unwrap());
    }

    #[test]
    fn ring_in_one_variable() {
        let r = verify_ring_presentation(1, 2).unwrap();
        assert!(r.passed(), "{r:?}");
        assert_eq!(r.survivors.len(), 1);
    }
}
