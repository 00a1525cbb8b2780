//! Pair densities, ensemble samplers and structural checks.

mod density;
mod ensemble;
mod structure;

pub use density::{pair_moments, sample_pair, PairDensity, PairMoments, ScalarDensity};
pub use ensemble::{sample_matrix, Composition, EnsembleSpec};
pub use structure::{closure_transform, haar_orthogonal, is_antagonistic, Transform};
