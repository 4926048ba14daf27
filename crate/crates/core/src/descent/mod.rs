//! Descent on `C^n`: cochains on the Dolbeault jets of holomorphic vector
//! fields, the Taylor pullback, the descent solution and its local cocycle.

mod dolbeault;
mod euler;
mod jet;
mod operators;
mod solution;

pub use dolbeault::{pair, DolbeaultField, DolbeaultTerm, JetValue};
pub use euler::{
    divergence_scalar, euler_operator, field_jet, is_total_divergence, parse_trace_density, partial, trace_density,
    trace_word, FieldSlot, JetFactor,
};
pub use jet::{JetKey, JetPoly, JetVar};
pub use operators::{
    d_ce, d_ce_var, d_t, dbar_t, dbar_t_var, de_rham, del, del_bar, descent_exponential, eta, eta_bar, eta_var,
    etabar_var, total_derivative,
};
pub use solution::{
    delta_integrand, descent_solution, j_pullback, jet_proportionality, monomial_field, verify_descent,
    DescentCertificate, DescentSolution, EquationCheck, InputCheck, LocalFunctionalIntegrand,
};
