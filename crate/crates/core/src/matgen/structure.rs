//! Structural predicates and transforms that preserve antagonism.

use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::RealMatrix;

/// Zero diagonal, and every pair `i < j` has strictly opposite signs or is `(0, 0)`.
pub fn is_antagonistic(m: &RealMatrix) -> bool {
    let n = m.n();
    for i in 0..n {
        if m[(i, i)] != 0.0 {
            return false;
        }
        for j in i + 1..n {
            let (x, y) = (m[(i, j)], m[(j, i)]);
            let opposite = x * y < 0.0;
            let both_zero = x == 0.0 && y == 0.0;
            if !(opposite || both_zero) {
                return false;
            }
        }
    }
    true
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum Transform {
    Negate,
    Transpose,
    /// `D M D^{-1}` for `D = diag(scale)`.
    DiagConjugate { scale: Vec<f64> },
    /// `P^T M P`, entry `(i, j)` of the result is `M[perm[i]][perm[j]]`.
    Permute { perm: Vec<usize> },
}

pub fn closure_transform(m: &RealMatrix, t: &Transform) -> Result<RealMatrix> {
    let n = m.n();
    match t {
        Transform::Negate => Ok(m.scaled(-1.0)),
        Transform::Transpose => Ok(m.transpose()),
        Transform::DiagConjugate { scale } => {
            if scale.len() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    found: scale.len(),
                });
            }
            if let Some(index) = scale.iter().position(|&s| s == 0.0 || !s.is_finite()) {
                return Err(Error::SingularDiagonal { index });
            }
            Ok(RealMatrix::from_fn(n, |i, j| scale[i] * m[(i, j)] / scale[j]))
        }
        Transform::Permute { perm } => {
            let mut seen = vec![false; n];
            if perm.len() != n || perm.iter().any(|&p| p >= n || std::mem::replace(&mut seen[p], true)) {
                return Err(Error::InvalidPermutation(n));
            }
            Ok(RealMatrix::from_fn(n, |i, j| m[(perm[i], perm[j])]))
        }
    }
}

/// Haar-distributed orthogonal matrix: Gram-Schmidt (with one
/// reorthogonalization pass) on the columns of a standard Gaussian matrix.
/// Keeping the positive diagonal of `R` makes the law exactly Haar.
pub fn haar_orthogonal<R: Rng + ?Sized>(n: usize, rng: &mut R) -> RealMatrix {
    // Columns stored contiguously.
    let mut cols: Vec<Vec<f64>> = (0..n)
        .map(|_| (0..n).map(|_| rng.sample::<f64, _>(StandardNormal)).collect())
        .collect();
    for k in 0..n {
        for _pass in 0..2 {
            for j in 0..k {
                let (done, rest) = cols.split_at_mut(k);
                let q = &done[j];
                let v = &mut rest[0];
                let dot: f64 = q.iter().zip(v.iter()).map(|(a, b)| a * b).sum();
                for (vi, qi) in v.iter_mut().zip(q) {
                    *vi -= dot * qi;
                }
            }
        }
        let norm = cols[k].iter().map(|v| v * v).sum::<f64>().sqrt();
        for v in &mut cols[k] {
            *v /= norm;
        }
    }
    RealMatrix::from_fn(n, |i, j| cols[j][i])
}
