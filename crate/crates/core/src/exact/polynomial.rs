use serde::{Deserialize, Serialize};

use super::matching::{matching_sums, ThetaArray};
use crate::error::Result;

/// Real polynomial in `z`; `coefficients[k]` multiplies `z^k`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PolynomialInZ {
    pub coefficients: Vec<f64>,
}

impl PolynomialInZ {
    pub fn degree(&self) -> usize {
        self.coefficients.len().saturating_sub(1)
    }

    pub fn coefficient(&self, power: usize) -> f64 {
        self.coefficients.get(power).copied().unwrap_or(0.0)
    }

    pub fn eval(&self, z: f64) -> f64 {
        self.coefficients.iter().rev().fold(0.0, |acc, c| acc * z + c)
    }
}

/// `E[det(z I - A)] = z^n + z^(n-2) sum theta + z^(n-4) sum' theta theta + ...`
/// where the primed sums run over matchings (all indices distinct).
pub fn expected_char_poly(t: &ThetaArray) -> Result<PolynomialInZ> {
    let n = t.n();
    let sums = matching_sums(t)?;
    let mut coefficients = vec![0.0; n + 1];
    for (k, s) in sums.into_iter().enumerate() {
        coefficients[n - 2 * k] = s;
    }
    Ok(PolynomialInZ { coefficients })
}

/// `E[det A]`: zero for odd `n`, the perfect-matching sum for even `n`.
pub fn expected_det(t: &ThetaArray) -> Result<f64> {
    let n = t.n();
    if n % 2 == 1 {
        return Ok(0.0);
    }
    Ok(matching_sums(t)?[n / 2])
}

/// `E[tr A^2] = -sum theta`.
pub fn expected_trace_square(t: &ThetaArray) -> f64 {
    -t.sum()
}
