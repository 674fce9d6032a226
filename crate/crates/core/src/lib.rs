//! Exact resistance distance between the end vertices of straight and bent
//! linear 2-trees.
//!
//! Three independent routes compute the same rational number:
//!
//! * [`delta_y`] replays a Δ–Y / series / parallel reduction of the circuit,
//! * [`closed_form`] evaluates Fibonacci–Lucas formulas,
//! * [`resistance`] solves the grounded Laplacian exactly (and, as a float
//!   cross-check, through the pseudoinverse).
//!
//! [`identities`] machine-checks the Fibonacci and Lucas identities those
//! formulas rest on.

pub mod closed_form;
pub mod delta_y;
pub mod error;
pub mod graph;
pub mod identities;
pub mod numeric;
pub mod resistance;
pub mod sequences;

pub use error::{Error, Result};
pub use numeric::Rational;
