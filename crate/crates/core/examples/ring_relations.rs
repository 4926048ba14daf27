//! The generators a_i, tau_i: closedness of products, the relations above
//! Chern weight n, and the classes a_1 tau^l that survive.

use gfcohom::classes::verify_ring_presentation;

fn main() -> gfcohom::Result<()> {
    for n in 1..=2 {
        let r = verify_ring_presentation(n, 2)?;
        println!("n = {n}");
        let open: Vec<String> = r.products.iter().filter(|p| !p.certificate.closed).map(|p| p.expression.to_string()).collect();
        println!("  {} products checked, not closed: {open:?}", r.products.len());
        for rel in &r.relations {
            println!("  {} = 0 (vanishes identically: {})", rel.expression, rel.vanishes_identically);
        }
        for s in &r.survivors {
            println!("  {} total cocycle {}, Phi image exact {}", s.expression, s.certificate.closed, s.phi_exact);
        }
        println!("  survivors independent: {} of {}", r.survivor_rank, r.survivors.len());
    }
    Ok(())
}
