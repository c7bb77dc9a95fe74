//! Executable category theory of subshifts: finite presentations of SFTs and
//! sofic shifts, block maps between them, limits and colimits, and decision
//! procedures for the morphism classes of the twelve categories
//! (K/T/M/P)×(1/2/3).

pub mod alphabet;
pub mod analysis;
pub mod automata;
pub mod category;
pub mod colimits;
pub mod classify;
pub mod error;
pub mod dynamics;
pub mod limits;
pub mod oracle;
pub mod shift;
pub mod verdict;

pub use alphabet::{Alphabet, Sym, Word};
pub use error::{Error, Result};
pub use category::CategoryTag;
pub use shift::{BlockMap, EventuallyPeriodicPoint, PeriodicPoint, Presentation};
pub use verdict::{Answer, Caps, Evidence, Verdict};

/// Default cap on the size of any single enumeration.
pub const DEFAULT_BUDGET: usize = 1 << 22;
