//! Reduced Betti numbers of vect(n) from weight-zero slices.

use gfcohom::ce::{betti, DEFAULT_MAX_SLICE_DIM};

fn main() -> gfcohom::Result<()> {
    for (n, q_max) in [(1, 4), (2, 7)] {
        let table = betti(n, q_max, DEFAULT_MAX_SLICE_DIM)?;
        println!("vect({n}), H^0 = 1 omitted");
        for (q, dim) in &table.entries {
            println!("  H^{q}: {dim}   (slice dim {}, rank {})", table.slice_dims[q], table.ranks[q]);
        }
    }
    Ok(())
}
