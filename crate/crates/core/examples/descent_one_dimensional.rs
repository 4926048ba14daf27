//! Descent of the Wronskian class to C and its local cocycle.

use gfcohom::classes::{class_image, ClassExpression};
use gfcohom::descent::{descent_solution, divergence_scalar, parse_trace_density, verify_descent};
use gfcohom::linalg::rational_to_string;

fn main() -> gfcohom::Result<()> {
    let e: ClassExpression = "a1*t1".parse()?;
    let sol = descent_solution(&class_image(&e, 1, 1)?.image)?;
    for (i, j) in sol.bidegrees() {
        println!("phi^{{{i},{j}}} = {}", sol.component(i, j));
    }
    let cert = verify_descent(&sol, Some((None, 1)));
    println!("descent equations hold: {}", cert.checks.iter().all(|c| c.holds));
    if let Some(i) = &cert.inputs {
        println!("checked on {} monomial input tuples up to degree {}: {} failures", i.tuples, i.bound, i.failures);
    }
    let rho = sol.integrand().density;
    let reference = parse_trace_density(1, "Tr(J)Tr(dJ)")?;
    match divergence_scalar(&rho, &reference)? {
        Some(s) => println!("integrand {rho} = {} * J dJ modulo divergence", rational_to_string(&s)),
        None => println!("integrand {rho} is not a multiple of J dJ"),
    }
    Ok(())
}
