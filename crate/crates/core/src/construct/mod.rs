//! Generators, blow-ups, metric fitting and periodic realizations.

pub mod basic;
pub mod blowup;
pub mod fit;
pub mod spine;
pub mod cover;
pub mod realize;

pub use basic::{make_circle, make_counterexample, make_kpq};
pub use blowup::blow_up;
pub use fit::{fit_metric, FitOutcome};
pub use realize::{realize_periodic, relative_from_capped, OrbitSpec, Realized};
