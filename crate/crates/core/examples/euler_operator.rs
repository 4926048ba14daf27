//! Deciding equality of local functionals modulo total derivatives.

use gfcohom::descent::{euler_operator, is_total_divergence, parse_trace_density, total_derivative, JetPoly, JetVar};
use gfcohom::calculus::MultiIndex;

fn main() -> gfcohom::Result<()> {
    let c = |a: u32| JetPoly::var(JetVar::holomorphic(0, MultiIndex(vec![a])));
    let cbar = |a: u32| JetPoly::var(JetVar::new(0, 1, MultiIndex(vec![a]), MultiIndex(vec![0])));

    let f = cbar(1).mul(&c(2));
    println!("F = {f}");
    println!("F is a divergence: {}", is_total_divergence(&f)?);
    println!("D F = {}\nD F is a divergence: {}", total_derivative(0, true, &f), is_total_divergence(&total_derivative(0, true, &f))?);
    for (slot, e) in euler_operator(&f)? {
        println!("E_{slot:?} F = {e}");
    }
    let rho = parse_trace_density(1, "Tr(J)Tr(dJ)")?;
    println!("J dJ on C: {rho}, a divergence: {}", is_total_divergence(&rho)?);
    Ok(())
}
