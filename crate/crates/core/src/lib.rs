//! Plane-geometry theorem proving by deductive saturation and exact linear
//! algebra.
//!
//! A [`Problem`](geometry::Problem) is a sequence of ruler-and-compass style
//! constructions plus a goal. The solver samples a random numerical
//! [diagram], lets the [matcher] enumerate every catalog rule instance that is
//! numerically true in that diagram, then runs a forward-chaining
//! [engine] whose algebraic side keeps three exact rational tables
//! ([ar]) over segment lengths, their logarithms and their squares. Proofs are
//! DAGs of justified steps that [`verify_proof`](engine::verify_proof)
//! rechecks independently.
//!
//! See `examples/` for one runnable program per capability.

pub mod ar;
pub mod cli;
pub mod diagram;
pub mod engine;
pub mod geometry;
pub mod matcher;
