//! Chevalley–Eilenberg cochains of `vect(n)` and `gl(n)`.

mod betti;
mod cochain;
mod cocycle;
mod differential;
mod slice;

pub use betti::{betti, betti_partial, gl_complex_betti, BettiTable, DEFAULT_MAX_SLICE_DIM};
pub use cochain::{
    sorted_tuples, sorted_tuples_bounded, CochainKey, CoefficientKind, ModuleCochain, Window,
};
pub use cocycle::{
    coboundary_witness, differential_by_formula, is_cocycle, sample_closedness, CocycleCertificate, SampleCheck,
};
pub use differential::{
    bracket_preimages, ce_differential, ce_differential_in, de_rham_differential,
    total_differential, LieAlgebra,
};
pub use slice::{
    build_weight_zero_slice, check_weight_homotopy, coordinates, euler_contraction, slice_basis,
    ComplexSlice, SliceKind,
};

pub(crate) use cochain::{insert_field, sort_with_sign};
