//! The generators `a_i`, `tau_i` of `H(vect(n); Omega)` and the map to trivial coefficients.
//!
//! `Phi = (e^iota .)|_0` sends the total complex `(C(vect(n); Omega), d_CE + d_dR)`
//! to `(C(vect(n)), d)`; `Psi` is the homotopy with `i Phi - id = D Psi + Psi D`.

mod generators;
mod operators;
mod ring;

pub use generators::{a_class, tau_class, wronskian_cocycle, GeneratorClass, GeneratorKind};
pub use operators::{
    cup_product, evaluate_at_origin, inclusion, iota_at_origin, iota_operator, phi_map,
    psi_homotopy,
};
pub use ring::{
    class_image, rank_modulo_coboundaries, verify_ring_presentation, ClassExpression, ClassImage, ProductCheck,
    RelationCheck, RingReport, SurvivorCheck,
};

