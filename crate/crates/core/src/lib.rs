//! Exact computations around de Jonquières divisors on algebraic curves.
//!
//! The crate is layered bottom-up:
//!
//! - [`series`]: truncated multivariate power series over big integers;
//! - [`counts`]: the counting formula, dimensions and the diagonal class;
//! - [`llseries`]: vanishing sequences and limit linear series data;
//! - [`graph`], [`lattice`], [`twists`]: dual graphs and twist systems;
//! - [`degen`]: two-component degenerations and the numeric inequality chains;
//! - [`verify`]: self-checks used by the command line `check` suites.

pub mod counts;
pub mod degen;
pub mod graph;
pub mod lattice;
pub mod llseries;
pub mod partitions;
pub mod series;
pub mod twists;
pub mod verify;

pub use counts::{
    brill_noether, dejonquieres_count, dejonquieres_count_ordered, diagonal_class,
    existence_check, expected_dimension, symmetry_factor, CountError, DJProblem, FormalClass,
};
pub use series::{MultiIndex, SeriesError, TruncatedSeries};
pub use graph::{DualGraph, GraphError};
pub use llseries::{Compatibility, RamificationSequence, VanishingSequence};
pub use twists::{solve_twists, Twist, TwistSolution};
