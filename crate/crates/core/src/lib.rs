//! Exact computations in the continuous cohomology of formal vector fields.
//!
//! The crate is organised bottom-up:
//!
//! * [`linalg`]: exact rational sparse matrices (rank, kernel, preimage).
//! * [`calculus`]: the formal Cartan calculus on the formal n-disk.
//! * [`ce`]: Chevalley–Eilenberg cochains of `vect(n)` with trivial, function
//!   and form coefficients, weight-zero slices and Betti numbers.
//! * [`classes`]: the generators `a_i`, `tau_i`, the cup product, the
//!   contraction `iota`, the map `Phi = exp(iota)|_0` and its homotopy `Psi`.
//! * [`model`]: the finite commutative dg algebra model used as an oracle.
//! * [`descent`]: descent on `C^n` through the Dolbeault jet model, local
//!   cocycles and the variational Euler operator.
//! * [`cli`]: reports and command drivers behind the `gfcohom` binary.
//!
//! The runnable programs under `examples/` walk through each of these.

pub mod calculus;
pub mod ce;
pub mod classes;
pub mod cli;
pub mod descent;
pub mod error;
pub mod linalg;
pub mod model;

pub use error::{Error, Result};
pub use linalg::{Rational, SparseMatrix};
