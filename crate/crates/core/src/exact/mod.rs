//! Exact expectations for antagonistic ensembles and their Monte Carlo
//! counterparts.
//!
//! For independent zero-mean pairs only permutations made of 2-cycles
//! survive the average of `det(z I - A)`, so every expected coefficient is a
//! matching sum over the complete graph weighted by
//! `theta[i][j] = -E[a_ij a_ji]`.

mod determinant;
mod matching;
mod montecarlo;
mod pfaffian;
mod polynomial;

pub use determinant::determinant;
pub use matching::{
    matching_count, matching_sums, matching_sums_by_enumeration, ThetaArray, DP_CAP,
    ENUMERATION_CAP as MATCHING_ENUMERATION_CAP,
};
pub use montecarlo::{mc_expect, pfaffian_sign, theta_for, Estimate, Functional};
pub use pfaffian::{pfaffian, pfaffian_by_matchings, ENUMERATION_CAP as PFAFFIAN_ENUMERATION_CAP};
pub use polynomial::{expected_char_poly, expected_det, expected_trace_square, PolynomialInZ};
