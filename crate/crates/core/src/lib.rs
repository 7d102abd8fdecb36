//! Nonlocal sets of orthogonal multipartite product states.
//!
//! The crate builds small sets of orthogonal product states that cannot be
//! perfectly distinguished by local operations and classical communication,
//! and checks that claim exactly: for each party it solves the linear system
//! an orthogonality-preserving first measurement must satisfy, over the
//! rationals, and reports whether only multiples of the identity survive.

pub mod cli;
pub mod compare;
pub mod constructions;
pub mod error;
pub mod linalg;
pub mod state;
pub mod verifier;

pub use error::{Error, Result};
pub use state::{Ket, ProductState, StateSet, SystemShape};
