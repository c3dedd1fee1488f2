//! Solver toolkit for the pursuit-escape game on simple polygons.
//!
//! An escaper with unit speed moves inside a region while a pursuer, `r`
//! times faster, moves on its boundary (or outside it). The escaper wins by
//! reaching the boundary a positive pursuer-metric distance away from the
//! pursuer. The crate computes bounds on the critical speed ratio `r*`,
//! closed-form values for canonical shapes, solves the discretized game, and
//! simulates continuous play.

pub mod discrete;
pub mod exact;
pub mod geometry;
pub mod ratio;
pub mod scheme;
pub mod sim;

pub use geometry::{MetricContext, Point2, Polygon, PursuerModel};
