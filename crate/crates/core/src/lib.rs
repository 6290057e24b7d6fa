//! Metric ribbon graphs with the tete-a-tete property.
//!
//! Lengths are exact rationals in units of pi. Darts are numbered from 0
//! internally, with edge `k` owning darts `2k` and `2k + 1`; files and the
//! CLI use 1-based ids (`rev(2k-1) = 2k`).

pub mod error;
pub mod q;
pub mod perm;
pub mod ribbon;
pub mod build;
pub mod metric;
pub mod walk;
pub mod tat;
pub mod construct;
pub mod mixed;
pub mod twist;
pub mod attach;
pub mod format;

pub use error::{Error, Result};
pub use q::Q;
pub use ribbon::{RibbonGraph, Relative};
pub use metric::Metric;
