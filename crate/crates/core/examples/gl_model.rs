//! Cohomology of gl(n) with constant coefficients: an exterior algebra on
//! generators of degrees 1, 3, ..., 2n - 1.

use gfcohom::ce::gl_complex_betti;

fn main() -> gfcohom::Result<()> {
    for n in 1..=2 {
        let top = n * n;
        let table = gl_complex_betti(n, 0, top)?;
        println!("gl({n}) degrees 0..{top}: {:?}", table.dims());
        for p in 1..=n {
            let t = gl_complex_betti(n, p, top)?;
            println!("  with Lambda^{p} coefficients: {:?}", t.dims());
        }
    }
    Ok(())
}
