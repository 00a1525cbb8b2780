//! Weighted matching sums on the complete graph.
//!
//! With edge weights `theta[i][j] = -E[a_ij a_ji]`, the sum over all
//! `k`-edge matchings of the product of their weights is the coefficient of
//! `z^(n-2k)` in the expected characteristic polynomial of an antagonistic
//! ensemble with independent zero-mean pairs. The perfect-matching sum is the
//! expected determinant.

use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::matgen::PairDensity;
use crate::numeric::CompensatedSum;

/// Largest dimension handled by the subset dynamic program.
pub const DP_CAP: usize = 24;
/// Largest dimension handled by explicit matching enumeration.
pub const ENUMERATION_CAP: usize = 12;

/// Upper-triangular array `theta[i][j]`, `i < j`, of nonnegative weights.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ThetaArray {
    n: usize,
    /// Row-major strict upper triangle.
    values: Vec<f64>,
}

impl ThetaArray {
    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> f64) -> Result<Self> {
        let mut values = Vec::with_capacity(n * n.saturating_sub(1) / 2);
        for i in 0..n {
            for j in i + 1..n {
                values.push(f(i, j));
            }
        }
        Self::from_upper(n, values)
    }

    pub fn constant(n: usize, theta: f64) -> Result<Self> {
        Self::from_fn(n, |_, _| theta)
    }

    /// `theta[i][k]` from the closed-form pair moments of `d`.
    pub fn from_density(d: &PairDensity, n: usize) -> Result<Self> {
        Self::from_fn(n, |i, k| d.moments(i, k).theta)
    }

    pub fn from_upper(n: usize, values: Vec<f64>) -> Result<Self> {
        let want = n * n.saturating_sub(1) / 2;
        if values.len() != want {
            return Err(Error::DimensionMismatch {
                expected: want,
                found: values.len(),
            });
        }
        if let Some(v) = values.iter().find(|v| !(v.is_finite() && **v >= 0.0)) {
            return Err(Error::InvalidArgument(format!("theta entries must be finite and >= 0, got {v}")));
        }
        Ok(ThetaArray { n, values })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Weight of the edge `{i, j}`; `i != j` in either order.
    pub fn get(&self, i: usize, j: usize) -> f64 {
        let (i, j) = if i < j { (i, j) } else { (j, i) };
        debug_assert!(i < j && j < self.n);
        // Offset of row i in the packed upper triangle.
        let row = i * (2 * self.n - i - 1) / 2;
        self.values[row + (j - i - 1)]
    }

    pub fn sum(&self) -> f64 {
        self.values.iter().copied().collect::<CompensatedSum>().value()
    }
}

/// `sums[k]` is the total weight of all `k`-edge matchings, `k = 0..=n/2`.
///
/// Vertices are decided in increasing order; the state is the set of
/// higher-numbered vertices already claimed by an earlier vertex. Each layer
/// accumulates with compensated sums in a fixed key order, so the result is
/// deterministic.
pub fn matching_sums(t: &ThetaArray) -> Result<Vec<f64>> {
    let n = t.n();
    if n > DP_CAP {
        return Err(Error::DimensionTooLarge { n, cap: DP_CAP });
    }
    let kmax = n / 2;
    let mut layer: BTreeMap<u32, Vec<f64>> = BTreeMap::new();
    let mut start = vec![0.0; kmax + 1];
    start[0] = 1.0;
    layer.insert(0, start);
    for i in 0..n {
        let bit_i = 1u32 << i;
        let mut next: BTreeMap<u32, Vec<CompensatedSum>> = BTreeMap::new();
        let mut push = |mask: u32, shift: usize, weight: f64, poly: &[f64]| {
            let acc = next
                .entry(mask)
                .or_insert_with(|| vec![CompensatedSum::default(); kmax + 1]);
            for (k, &c) in poly.iter().enumerate() {
                if c != 0.0 && k + shift <= kmax {
                    acc[k + shift].add(weight * c);
                }
            }
        };
        for (&mask, poly) in &layer {
            if mask & bit_i != 0 {
                push(mask & !bit_i, 0, 1.0, poly);
                continue;
            }
            push(mask, 0, 1.0, poly);
            for j in i + 1..n {
                let bit_j = 1u32 << j;
                if mask & bit_j == 0 {
                    let w = t.get(i, j);
                    if w != 0.0 {
                        push(mask | bit_j, 1, w, poly);
                    }
                }
            }
        }
        layer = next
            .into_iter()
            .map(|(m, acc)| (m, acc.iter().map(CompensatedSum::value).collect()))
            .collect();
    }
    Ok(layer.remove(&0).unwrap_or_else(|| {
        let mut v = vec![0.0; kmax + 1];
        v[0] = 1.0;
        v
    }))
}

/// Same sums as [`matching_sums`] by listing every matching explicitly.
/// Exponential; capped at [`ENUMERATION_CAP`].
pub fn matching_sums_by_enumeration(t: &ThetaArray) -> Result<Vec<f64>> {
    let n = t.n();
    if n > ENUMERATION_CAP {
        return Err(Error::DimensionTooLarge {
            n,
            cap: ENUMERATION_CAP,
        });
    }
    fn walk(t: &ThetaArray, used: &mut [bool], from: usize, k: usize, weight: f64, out: &mut [f64]) {
        let n = used.len();
        let Some(i) = (from..n).find(|&i| !used[i]) else {
            out[k] += weight;
            return;
        };
        used[i] = true;
        // i stays unmatched.
        walk(t, used, i + 1, k, weight, out);
        for j in i + 1..n {
            if !used[j] {
                used[j] = true;
                walk(t, used, i + 1, k + 1, weight * t.get(i, j), out);
                used[j] = false;
            }
        }
        used[i] = false;
    }
    let mut out = vec![0.0; n / 2 + 1];
    walk(t, &mut vec![false; n], 0, 0, 1.0, &mut out);
    Ok(out)
}

/// Number of perfect matchings of `n` points, `(n-1)!!`.
pub fn matching_count(n: usize) -> Result<u128> {
    if n % 2 == 1 {
        return Err(Error::OddDimension(n));
    }
    if n == 0 {
        return Err(Error::InvalidArgument("matching count needs n >= 2".into()));
    }
    (1..n as u128)
        .step_by(2)
        .try_fold(1u128, |acc, k| acc.checked_mul(k))
        .ok_or_else(|| Error::InvalidArgument(format!("(n-1)!! overflows u128 for n = {n}")))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn packed_indexing() {
        let t = ThetaArray::from_fn(5, |i, j| (10 * i + j) as f64).unwrap();
        for i in 0..5 {
            for j in i + 1..5 {
                assert_eq!(t.get(i, j), (10 * i + j) as f64);
                assert_eq!(t.get(j, i), (10 * i + j) as f64);
            }
        }
    }

    #[test]
    fn counts() {
        assert_eq!(matching_count(2).unwrap(), 1);
        assert_eq!(matching_count(4).unwrap(), 3);
        assert_eq!(matching_count(8).unwrap(), 105);
        assert_eq!(matching_count(3), Err(Error::OddDimension(3)));
    }

    #[test]
    fn complete_graph_k4() {
        let t = ThetaArray::constant(4, 1.0).unwrap();
        assert_eq!(matching_sums(&t).unwrap(), vec![1.0, 6.0, 3.0]);
        assert_eq!(matching_sums_by_enumeration(&t).unwrap(), vec![1.0, 6.0, 3.0]);
    }

    #[test]
    fn rejects_negative_theta_and_large_n() {
        assert!(ThetaArray::from_upper(2, vec![-1.0]).is_err());
        assert!(ThetaArray::from_upper(3, vec![1.0]).is_err());
        let big = ThetaArray::constant(25, 1.0).unwrap();
        assert_eq!(matching_sums(&big), Err(Error::DimensionTooLarge { n: 25, cap: 24 }));
    }

    #[test]
    fn perfect_matching_counts_on_unit_weights() {
        for n in (2..=16).step_by(2) {
            let sums = matching_sums(&ThetaArray::constant(n, 1.0).unwrap()).unwrap();
            assert_eq!(sums[n / 2], matching_count(n).unwrap() as f64, "n = {n}");
        }
    }
}
