use std::collections::BTreeMap;

use rayon::prelude::*;

use super::slice::{ComplexSlice, SliceKind};
use crate::error::{Error, Result};

/// Default cap on the dimension of any single slice.
pub const DEFAULT_MAX_SLICE_DIM: usize = 200_000;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BettiTable {
    pub n: usize,
    /// `"trivial"` or `"gl(n); Lambda^p"`.
    pub coefficients: String,
    /// Whether degree 0 was excluded from the complex.
    pub reduced: bool,
    /// Degree to cohomology dimension.
    pub entries: BTreeMap<usize, usize>,
    /// Degree to cochain-space dimension.
    pub slice_dims: BTreeMap<usize, usize>,
    /// Degree `q` to the rank of `d: C^q -> C^(q+1)`.
    pub ranks: BTreeMap<usize, usize>,
    /// Largest integer bit length met during elimination.
    pub max_bits: u64,
    /// First degree whose slice exceeded the cap, if any.
    pub capped_at: Option<usize>,
}

impl BettiTable {
    pub fn get(&self, q: usize) -> Option<usize> {
        self.entries.get(&q).copied()
    }

    /// Dimensions in degree order.
    pub fn dims(&self) -> Vec<usize> {
        self.entries.values().copied().collect()
    }
}

struct Cell {
    degree: usize,
    dim: usize,
    rank: usize,
    bits: u64,
}

fn cells(n: usize, degrees: &[usize], kind: SliceKind, cap: usize) -> Vec<Result<Cell>> {
    degrees
        .par_iter()
        .map(|&q| {
            let s = ComplexSlice::build(n, q, kind, cap)?;
            let (rank, stats) = s.differential.rank_with_stats();
            Ok(Cell {
                degree: q,
                dim: s.dim(),
                rank,
                bits: stats.max_bits,
            })
        })
        .collect()
}

fn assemble(n: usize, coefficients: String, reduced: bool, lo: usize, hi: usize, results: Vec<Result<Cell>>) -> (BettiTable, Option<Error>) {
    let mut table = BettiTable {
        n,
        coefficients,
        reduced,
        entries: BTreeMap::new(),
        slice_dims: BTreeMap::new(),
        ranks: BTreeMap::new(),
        max_bits: 0,
        capped_at: None,
    };
    let mut error = None;
    for r in results {
        match r {
            Ok(c) => {
                table.slice_dims.insert(c.degree, c.dim);
                table.ranks.insert(c.degree, c.rank);
                table.max_bits = table.max_bits.max(c.bits);
            }
            Err(e) => {
                if error.is_none() {
                    error = Some(e);
                }
            }
        }
    }
    for q in lo..=hi {
        let (Some(&dim), Some(&rank)) = (table.slice_dims.get(&q), table.ranks.get(&q)) else {
            table.capped_at = Some(q);
            break;
        };
        let before = if q == lo { 0 } else { table.ranks[&(q - 1)] };
        table.entries.insert(q, dim - rank - before);
    }
    (table, error)
}

/// Reduced Betti numbers of `vect(n)` in degrees `1..=q_max`, together with
/// the first error met (typically the slice cap). The table holds every
/// degree below the first failure.
pub fn betti_partial(n: usize, q_max: usize, max_slice_dim: usize) -> (BettiTable, Option<Error>) {
    let degrees: Vec<usize> = (1..=q_max).collect();
    let results = cells(n, &degrees, SliceKind::Trivial { weight: 0 }, max_slice_dim);
    assemble(n, "trivial".into(), true, 1, q_max, results)
}

/// Reduced Betti numbers of `vect(n)` with trivial coefficients in degrees `1..=q_max`.
///
/// Only weight-zero slices are built: every other weight is contractible.
/// `H^0 = 1` is not part of the table.
pub fn betti(n: usize, q_max: usize, max_slice_dim: usize) -> Result<BettiTable> {
    if q_max == 0 {
        return Err(Error::DimensionMismatch("q_max must be at least 1".into()));
    }
    match betti_partial(n, q_max, max_slice_dim) {
        (table, None) => Ok(table),
        (_, Some(e)) => Err(e),
    }
}

/// Unreduced Betti numbers of `gl(n)` with coefficients in `Lambda^p (C^n)^*`,
/// degrees `0..=q_max`.
pub fn gl_complex_betti(n: usize, p: usize, q_max: usize) -> Result<BettiTable> {
    let degrees: Vec<usize> = (0..=q_max).collect();
    let results = cells(n, &degrees, SliceKind::Gl { form_degree: p }, usize::MAX);
    match assemble(n, format!("gl({n}); Lambda^{p}"), false, 0, q_max, results) {
        (table, None) => Ok(table),
        (_, Some(e)) => Err(e),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn vect1() {
        assert_eq!(betti(1, 4, 1000).unwrap().dims(), vec![0, 0, 1, 0]);
    }

    #[test]
    fn gl_tables() {
        assert_eq!(gl_complex_betti(1, 0, 1).unwrap().dims(), vec![1, 1]);
        assert_eq!(gl_complex_betti(2, 0, 4).unwrap().dims(), vec![1, 1, 0, 1, 1]);
        assert_eq!(gl_complex_betti(1, 1, 1).unwrap().dims(), vec![0, 0]);
    }

    #[test]
    fn cap_reports_partial_table() {
        let (table, err) = betti_partial(2, 5, 100);
        assert!(matches!(err, Some(Error::ResourceLimit(_))));
        assert_eq!(table.capped_at, Some(3));
        assert_eq!(table.entries.len(), 2);
    }
}
