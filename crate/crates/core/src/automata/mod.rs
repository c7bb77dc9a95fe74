//! Finite-automaton machinery shared by every decision procedure.

pub mod dfa;
pub mod graph;
pub mod monoid;

pub use dfa::Dfa;
pub use graph::Graph;
pub use monoid::{Elem, FiniteMonoid};
