//! Phi(a_1 tau_1) in one variable is the Wronskian cocycle.

use gfcohom::ce::{build_weight_zero_slice, coboundary_witness};
use gfcohom::classes::{class_image, wronskian_cocycle, ClassExpression};

fn main() -> gfcohom::Result<()> {
    let e: ClassExpression = "a1*t1".parse()?;
    let img = class_image(&e, 1, 1)?;
    let w = wronskian_cocycle()?;
    println!("a1 t1 is a total cocycle: {}", img.certificate.closed);
    println!("Phi(a1 t1) = {}", img.image);
    println!("Wronskian  = {w}");
    println!("equal: {}", img.image == w);
    let slice = build_weight_zero_slice(1, 2)?;
    println!("exact in H^3(vect(1)): {}", coboundary_witness(&w, &slice)?.is_some());
    Ok(())
}
