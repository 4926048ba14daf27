use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::{Rational, RationalVector};
use crate::error::{Error, Result};

/// Immutable sparse matrix over the rationals. Zero entries are never stored.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SparseMatrix {
    rows: usize,
    cols: usize,
    entries: BTreeMap<(usize, usize), Rational>,
}

/// Size statistics gathered during an elimination run.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct EliminationStats {
    /// Largest integer bit length seen in any intermediate row.
    pub max_bits: u64,
    pub pivots: usize,
}

// Integer row: (column, nonzero coefficient), sorted by column.
type IntRow = Vec<(usize, BigInt)>;

impl SparseMatrix {
    pub fn zero(rows: usize, cols: usize) -> Self {
        SparseMatrix {
            rows,
            cols,
            entries: BTreeMap::new(),
        }
    }

    pub fn identity(size: usize) -> Self {
        Self::from_triplets(size, size, (0..size).map(|i| (i, i, Rational::one())))
            .expect("diagonal indices are in range")
    }

    /// Builds a matrix from `(row, col, value)` triplets. Repeated positions are summed.
    pub fn from_triplets(
        rows: usize,
        cols: usize,
        triplets: impl IntoIterator<Item = (usize, usize, Rational)>,
    ) -> Result<Self> {
        let mut entries: BTreeMap<(usize, usize), Rational> = BTreeMap::new();
        for (r, c, v) in triplets {
            if r >= rows || c >= cols {
                return Err(Error::IndexOutOfRange {
                    row: r,
                    col: c,
                    rows,
                    cols,
                });
            }
            *entries.entry((r, c)).or_insert_with(Rational::zero) += v;
        }
        entries.retain(|_, v| !v.is_zero());
        Ok(SparseMatrix {
            rows,
            cols,
            entries,
        })
    }

    pub fn from_dense(rows: &[Vec<Rational>]) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != cols) {
            return Err(Error::DimensionMismatch(
                "ragged rows in dense matrix".into(),
            ));
        }
        Self::from_triplets(
            rows.len(),
            cols,
            rows.iter().enumerate().flat_map(|(i, row)| {
                row.iter()
                    .enumerate()
                    .filter(|(_, v)| !v.is_zero())
                    .map(move |(j, v)| (i, j, v.clone()))
            }),
        )
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    pub fn get(&self, row: usize, col: usize) -> Rational {
        self.entries
            .get(&(row, col))
            .cloned()
            .unwrap_or_else(Rational::zero)
    }

    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, &Rational)> {
        self.entries.iter().map(|(&(r, c), v)| (r, c, v))
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn transpose(&self) -> Self {
        SparseMatrix {
            rows: self.cols,
            cols: self.rows,
            entries: self
                .entries
                .iter()
                .map(|(&(r, c), v)| ((c, r), v.clone()))
                .collect(),
        }
    }

    /// Reorders rows and columns: entry `(r, c)` moves to `(row_perm[r], col_perm[c])`.
    pub fn permuted(&self, row_perm: &[usize], col_perm: &[usize]) -> Result<Self> {
        if row_perm.len() != self.rows || col_perm.len() != self.cols {
            return Err(Error::DimensionMismatch("permutation length".into()));
        }
        Self::from_triplets(
            self.rows,
            self.cols,
            self.entries
                .iter()
                .map(|(&(r, c), v)| (row_perm[r], col_perm[c], v.clone())),
        )
    }

    pub fn mul_vec(&self, v: &[Rational]) -> Result<RationalVector> {
        if v.len() != self.cols {
            return Err(Error::DimensionMismatch(format!(
                "vector of length {} against {} columns",
                v.len(),
                self.cols
            )));
        }
        let mut out = vec![Rational::zero(); self.rows];
        for (&(r, c), x) in &self.entries {
            if !v[c].is_zero() {
                out[r] += x * &v[c];
            }
        }
        Ok(out)
    }

    pub fn mul(&self, other: &SparseMatrix) -> Result<SparseMatrix> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut by_row: BTreeMap<usize, Vec<(usize, &Rational)>> = BTreeMap::new();
        for (&(r, c), v) in &other.entries {
            by_row.entry(r).or_default().push((c, v));
        }
        let mut triplets = Vec::new();
        for (&(r, k), a) in &self.entries {
            if let Some(row) = by_row.get(&k) {
                for &(c, b) in row {
                    triplets.push((r, c, a * b));
                }
            }
        }
        Self::from_triplets(self.rows, other.cols, triplets)
    }

    pub fn sub(&self, other: &SparseMatrix) -> Result<SparseMatrix> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::DimensionMismatch("matrix difference".into()));
        }
        Self::from_triplets(
            self.rows,
            self.cols,
            self.entries
                .iter()
                .map(|(&(r, c), v)| (r, c, v.clone()))
                .chain(other.entries.iter().map(|(&(r, c), v)| (r, c, -v.clone()))),
        )
    }

    fn integer_rows(&self) -> Vec<IntRow> {
        let mut rows: Vec<Vec<(usize, Rational)>> = vec![Vec::new(); self.rows];
        for (&(r, c), v) in &self.entries {
            rows[r].push((c, v.clone()));
        }
        rows.into_iter()
            .filter(|r| !r.is_empty())
            .map(|r| {
                let lcm = r
                    .iter()
                    .fold(BigInt::one(), |acc, (_, v)| acc.lcm(v.denom()));
                let row: IntRow = r
                    .into_iter()
                    .map(|(c, v)| (c, v.numer() * (&lcm / v.denom())))
                    .collect();
                make_primitive(row)
            })
            .collect()
    }

    /// Exact rank over the rationals.
    pub fn rank(&self) -> usize {
        self.rank_with_stats().0
    }

    pub fn rank_with_stats(&self) -> (usize, EliminationStats) {
        let (pivots, stats) = echelon(self.integer_rows());
        (pivots.len(), stats)
    }

    /// A basis of the right kernel. Each vector `v` satisfies `self * v = 0` exactly.
    pub fn kernel_basis(&self) -> Vec<RationalVector> {
        let reduced = rref(self.integer_rows(), self.cols);
        let pivot_cols: Vec<usize> = reduced.iter().map(|(c, _)| *c).collect();
        let mut is_pivot = vec![false; self.cols];
        for &c in &pivot_cols {
            is_pivot[c] = true;
        }
        let mut basis = Vec::new();
        for free in (0..self.cols).filter(|&c| !is_pivot[c]) {
            let mut v = vec![Rational::zero(); self.cols];
            v[free] = Rational::one();
            for (pc, row) in &reduced {
                if let Some(x) = row.get(&free) {
                    v[*pc] = -x.clone();
                }
            }
            basis.push(v);
        }
        basis
    }

    /// Finds `x` with `self * x = b`, or `None` when `b` is not in the image.
    pub fn solve_preimage(&self, b: &[Rational]) -> Result<Option<RationalVector>> {
        if b.len() != self.rows {
            return Err(Error::DimensionMismatch(format!(
                "right-hand side of length {} against {} rows",
                b.len(),
                self.rows
            )));
        }
        // Augment with b as an extra column; a pivot there means inconsistency.
        let augmented = Self::from_triplets(
            self.rows,
            self.cols + 1,
            self.entries
                .iter()
                .map(|(&(r, c), v)| (r, c, v.clone()))
                .chain(
                    b.iter()
                        .enumerate()
                        .filter(|(_, v)| !v.is_zero())
                        .map(|(r, v)| (r, self.cols, v.clone())),
                ),
        )?;
        let reduced = rref(augmented.integer_rows(), self.cols + 1);
        if reduced.iter().any(|(c, _)| *c == self.cols) {
            return Ok(None);
        }
        let mut x = vec![Rational::zero(); self.cols];
        for (pc, row) in &reduced {
            if let Some(v) = row.get(&self.cols) {
                x[*pc] = v.clone();
            }
        }
        debug_assert_eq!(self.mul_vec(&x)?, b);
        Ok(Some(x))
    }
}

fn make_primitive(mut row: IntRow) -> IntRow {
    let g = row
        .iter()
        .fold(BigInt::zero(), |acc, (_, v)| acc.gcd(v));
    let negate = row.first().is_some_and(|(_, v)| v.is_negative());
    if !g.is_zero() && (!g.is_one() || negate) {
        let g = if negate { -g } else { g };
        for (_, v) in row.iter_mut() {
            *v = &*v / &g;
        }
    }
    row
}

fn row_bits(row: &IntRow) -> u64 {
    row.iter().map(|(_, v)| v.bits()).max().unwrap_or(0)
}

// `row <- p * row - r * pivot`, where p and r are the leading entries, divided by
// gcd(p, r) first so the multipliers stay small.
fn eliminate(row: &IntRow, pivot: &IntRow) -> IntRow {
    let lead = &row[0].1;
    let plead = &pivot[0].1;
    let g = lead.gcd(plead);
    let a = plead / &g;
    let b = lead / &g;
    let mut out = Vec::with_capacity(row.len() + pivot.len());
    let (mut i, mut j) = (0, 0);
    while i < row.len() || j < pivot.len() {
        let take_row = j >= pivot.len() || (i < row.len() && row[i].0 < pivot[j].0);
        let take_piv = i >= row.len() || (j < pivot.len() && pivot[j].0 < row[i].0);
        if take_row {
            out.push((row[i].0, &a * &row[i].1));
            i += 1;
        } else if take_piv {
            out.push((pivot[j].0, -(&b * &pivot[j].1)));
            j += 1;
        } else {
            let v = &a * &row[i].1 - &b * &pivot[j].1;
            if !v.is_zero() {
                out.push((row[i].0, v));
            }
            i += 1;
            j += 1;
        }
    }
    make_primitive(out)
}

// Fraction-free row echelon form. Rows are fed shortest first so that sparse
// pivots are chosen before dense ones. Returns pivot rows keyed by leading column.
fn echelon(mut rows: Vec<IntRow>) -> (BTreeMap<usize, IntRow>, EliminationStats) {
    rows.sort_by_key(|r| (r.len(), r.first().map(|(c, _)| *c)));
    let mut pivots: BTreeMap<usize, IntRow> = BTreeMap::new();
    let mut stats = EliminationStats::default();
    for mut row in rows {
        stats.max_bits = stats.max_bits.max(row_bits(&row));
        while let Some(&(lead, _)) = row.first() {
            match pivots.get(&lead) {
                Some(p) => {
                    row = eliminate(&row, p);
                    stats.max_bits = stats.max_bits.max(row_bits(&row));
                }
                None => break,
            }
        }
        if let Some(&(lead, _)) = row.first() {
            pivots.insert(lead, row);
        }
    }
    stats.pivots = pivots.len();
    (pivots, stats)
}

// Reduced row echelon form over the rationals: pivot entries are 1 and every
// pivot column is zero in all other rows.
fn rref(rows: Vec<IntRow>, _cols: usize) -> Vec<(usize, BTreeMap<usize, Rational>)> {
    let (pivots, _) = echelon(rows);
    let mut reduced: Vec<(usize, BTreeMap<usize, Rational>)> = Vec::new();
    // Back substitution from the last pivot upwards.
    for (&lead, row) in pivots.iter().rev() {
        let scale = Rational::from_integer(row[0].1.clone());
        let mut r: BTreeMap<usize, Rational> = row
            .iter()
            .map(|(c, v)| (*c, Rational::from_integer(v.clone()) / &scale))
            .collect();
        for (pc, prow) in &reduced {
            if let Some(f) = r.get(pc).cloned() {
                for (c, v) in prow {
                    let e = r.entry(*c).or_insert_with(Rational::zero);
                    *e -= &f * v;
                }
                r.retain(|_, v| !v.is_zero());
            }
        }
        reduced.push((lead, r));
    }
    reduced.reverse();
    reduced
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{rat, ratio};

    fn dense(rows: &[&[i64]]) -> SparseMatrix {
        SparseMatrix::from_dense(
            &rows
                .iter()
                .map(|r| r.iter().map(|&x| rat(x)).collect())
                .collect::<Vec<_>>(),
        )
        .unwrap()
    }

    #[test]
    fn rank_small_cases() {
        assert_eq!(SparseMatrix::identity(3).rank(), 3);
        assert_eq!(SparseMatrix::zero(4, 7).rank(), 0);
        assert_eq!(dense(&[&[1, 2], &[2, 4]]).rank(), 1);
    }

    #[test]
    fn kernel_small_cases() {
        assert!(SparseMatrix::identity(2).kernel_basis().is_empty());
        let k = SparseMatrix::zero(2, 2).kernel_basis();
        assert_eq!(k.len(), 2);
        assert_eq!(SparseMatrix::from_dense(&k).unwrap().rank(), 2);
        let k = dense(&[&[1, 1]]).kernel_basis();
        assert_eq!(k.len(), 1);
        assert_eq!(k[0][0], -k[0][1].clone());
        assert!(!k[0][0].is_zero());
    }

    #[test]
    fn preimage_small_cases() {
        let b = vec![ratio(3, 7), rat(-2)];
        assert_eq!(
            SparseMatrix::identity(2).solve_preimage(&b).unwrap(),
            Some(b.clone())
        );
        assert_eq!(SparseMatrix::zero(2, 2).solve_preimage(&b).unwrap(), None);
        assert_eq!(
            dense(&[&[2]]).solve_preimage(&[rat(1)]).unwrap(),
            Some(vec![ratio(1, 2)])
        );
        assert!(matches!(
            SparseMatrix::identity(2).solve_preimage(&[rat(1)]),
            Err(Error::DimensionMismatch(_))
        ));
    }

    #[test]
    fn rejects_out_of_range_entries() {
        assert!(SparseMatrix::from_triplets(2, 2, [(2, 0, rat(1))]).is_err());
    }

    #[test]
    fn cancelling_triplets_store_nothing() {
        let m = SparseMatrix::from_triplets(1, 1, [(0, 0, rat(1)), (0, 0, rat(-1))]).unwrap();
        assert_eq!(m.nnz(), 0);
    }
}
