//! Subshifts, points, and block maps.

pub mod blockmap;
pub mod format;
pub mod point;
pub mod presentation;
pub mod window;

pub use blockmap::{BlockMap, Recoded};
pub use point::{EventuallyPeriodicPoint, PeriodicPoint};
pub use presentation::{Presentation, Source};
pub use window::WindowGraph;
