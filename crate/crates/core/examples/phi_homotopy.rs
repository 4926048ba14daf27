//! The map Phi = exp(iota)|_0 and the radial homotopy Psi on small slices.

use gfcohom::ce::{ce_differential, slice_basis, total_differential, SliceKind, Window};
use gfcohom::classes::{inclusion, phi_map, psi_homotopy};

fn main() -> gfcohom::Result<()> {
    let n = 1;
    for k in 0..=3usize {
        let window = k as u32 + 2;
        let kind = SliceKind::Total { window };
        let w = Window::UpTo(window);
        let mut chain = true;
        let mut homotopy = true;
        let basis = slice_basis(n, k, kind);
        for key in &basis {
            let e = kind.cochain(n, key);
            chain &= phi_map(&total_differential(&e)?).truncate(w) == ce_differential(&phi_map(&e))?.truncate(w);
            let lhs = inclusion(&phi_map(&e)).sub(&e).truncate(w);
            let rhs = total_differential(&psi_homotopy(&e))?.add(&psi_homotopy(&total_differential(&e)?)).truncate(w);
            homotopy &= lhs == rhs;
        }
        println!("degree {k}: {} basis elements, Phi D = d Phi {chain}, i Phi - id = D Psi + Psi D {homotopy}", basis.len());
    }
    Ok(())
}
