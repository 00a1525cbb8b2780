//! Random antagonistic matrices and their companions.
//!
//! An antagonistic matrix is a real square matrix with zero diagonal whose
//! off-diagonal pairs `(a[i][j], a[j][i])` have opposite signs or are both
//! zero. This crate samples such ensembles together with antisymmetric,
//! elliptic, dilute and diagonally shifted relatives, computes their spectra,
//! and evaluates exact expectations (determinant, characteristic polynomial)
//! through perfect-matching sums.
//!
//! Module map:
//!
//! * [`matgen`]: pair and scalar densities, ensemble specs, samplers, structural checks.
//! * [`spectral`]: dense non-symmetric eigensolver, Bendixson box, stability report, histograms.
//! * [`exact`]: Pfaffians, matching sums, expected characteristic polynomial, Monte Carlo estimates.
//! * [`perturb`]: second-order eigenvalue predictions for `D + eps * A`.
//! * [`laws`]: elliptic-law and circular-law checks, strip-width trends.

pub mod error;
pub mod exact;
pub mod export;
pub mod laws;
pub mod matgen;
pub mod matrix;
mod numeric;
pub mod perturb;
pub mod rng;
pub mod spectral;

pub use error::{Error, Result};
pub use matrix::RealMatrix;
