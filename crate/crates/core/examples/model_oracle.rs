//! Betti numbers from the finite model against the Chevalley-Eilenberg engine.

use gfcohom::ce::{betti, DEFAULT_MAX_SLICE_DIM};
use gfcohom::model::{model_basis, model_betti};

fn main() -> gfcohom::Result<()> {
    for (n, q_max) in [(1, 4), (2, 6)] {
        let model = model_betti(n, q_max);
        let engine = betti(n, q_max, DEFAULT_MAX_SLICE_DIM)?;
        println!("n = {n}: model has {} basis monomials", model_basis(n).len());
        for q in 0..=q_max {
            // The engine's reduced complex leaves H^0 = 1 to the constants.
            let ours = if q == 0 { Some(1) } else { engine.get(q) };
            println!("  H^{q}: model {:?} engine {:?}", model.get(q), ours);
        }
    }
    Ok(())
}
