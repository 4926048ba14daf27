//! The two local cocycles on C^2 from a_1 tau_2 and a_1 tau_1^2.

use gfcohom::classes::{class_image, ClassExpression};
use gfcohom::descent::{
    d_ce, dbar_t, descent_solution, divergence_scalar, is_total_divergence, parse_trace_density, verify_descent,
};
use gfcohom::linalg::rational_to_string;

fn main() -> gfcohom::Result<()> {
    let mut densities = Vec::new();
    for (class, reference) in [("a1*t2", "Tr(J)Tr(dJ dJ)"), ("a1*t1^2", "Tr(J)Tr(dJ)Tr(dJ)")] {
        let e: ClassExpression = class.parse()?;
        let sol = descent_solution(&class_image(&e, 2, 1)?.image)?;
        let cert = verify_descent(&sol, None);
        let rho = sol.integrand().density;
        let scalar = divergence_scalar(&rho, &parse_trace_density(2, reference)?)?;
        println!("{class}: {} components, descent certificate {}", sol.bidegrees().len(), cert.passed());
        println!(
            "  integrand: {} terms, = {} * {reference} modulo divergence",
            rho.len(),
            scalar.as_ref().map_or("none".into(), rational_to_string)
        );
        println!(
            "  d_CE and dbar_T images are divergences: {} {}",
            is_total_divergence(&d_ce(&rho))?,
            is_total_divergence(&dbar_t(&rho))?
        );
        densities.push(rho);
    }
    // Independent modulo divergence: neither is a multiple of the other.
    println!("independent: {}", divergence_scalar(&densities[0], &densities[1])?.is_none());
    Ok(())
}
