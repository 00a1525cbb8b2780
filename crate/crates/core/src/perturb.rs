//! Second-order eigenvalue predictions for `M(eps) = D + eps * A`, with `D`
//! diagonal and `A` antagonistic, and their order-of-accuracy check.
//!
//! Because `A` has zero diagonal the first-order shift of every simple
//! eigenvalue vanishes and the extreme eigenvalues move inward at order
//! `eps^2`. A doubly degenerate extreme splits into a complex pair at
//! order `eps`.

use num_complex::Complex64;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matgen::{is_antagonistic, PairDensity};
use crate::matrix::RealMatrix;
use crate::rng;
use crate::spectral::eigenvalues;

/// `D + eps * A` with `A` antagonistic.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PerturbationInput {
    pub d: Vec<f64>,
    pub a: RealMatrix,
    pub eps: f64,
}

impl PerturbationInput {
    pub fn new(d: Vec<f64>, a: RealMatrix, eps: f64) -> Result<Self> {
        let input = PerturbationInput { d, a, eps };
        input.validate()?;
        Ok(input)
    }

    pub fn validate(&self) -> Result<()> {
        if self.d.is_empty() {
            return Err(Error::InvalidArgument("diagonal must be non-empty".into()));
        }
        if self.d.len() != self.a.n() {
            return Err(Error::DimensionMismatch {
                expected: self.d.len(),
                found: self.a.n(),
            });
        }
        if self.d.iter().any(|v| !v.is_finite()) || !self.eps.is_finite() {
            return Err(Error::InvalidArgument("diagonal and eps must be finite".into()));
        }
        if !is_antagonistic(&self.a) {
            return Err(Error::InvalidArgument("perturbation matrix is not antagonistic".into()));
        }
        Ok(())
    }

    pub fn with_eps(&self, eps: f64) -> Self {
        PerturbationInput {
            eps,
            ..self.clone()
        }
    }

    /// The full matrix `D + eps * A`.
    pub fn matrix(&self) -> RealMatrix {
        let n = self.d.len();
        RealMatrix::from_fn(n, |i, j| if i == j { self.d[i] } else { self.eps * self.a[(i, j)] })
    }

    /// Values closer than `1e-9 (1 + max |d|)` are treated as equal.
    pub fn tie_tolerance(&self) -> f64 {
        1e-9 * (1.0 + self.d.iter().fold(0.0f64, |m, v| m.max(v.abs())))
    }

    fn cluster(&self, target: f64) -> Vec<usize> {
        let tol = self.tie_tolerance();
        (0..self.d.len()).filter(|&j| (self.d[j] - target).abs() <= tol).collect()
    }

    fn extremes(&self) -> (f64, f64) {
        let lo = self.d.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = self.d.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        (lo, hi)
    }

    /// `|a_ij a_ji|`.
    fn pair_weight(&self, i: usize, j: usize) -> f64 {
        (self.a[(i, j)] * self.a[(j, i)]).abs()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ClusterEnd {
    Lowest,
    Highest,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum PredictionKind {
    NonDegenerate,
    /// `size` equal extreme diagonal values at `end`; `size - 2` stay put at order `eps`.
    Degenerate { end: ClusterEnd, size: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PerturbationPrediction {
    pub kind: PredictionKind,
    /// Largest predicted eigenvalue, or the `+i` member of the degenerate pair.
    pub lambda_max: Complex64,
    /// Smallest predicted eigenvalue, or the `-i` member of the degenerate pair.
    pub lambda_min: Complex64,
    /// Bounds on the real parts. Non-degenerate: the strip
    /// `d_m + eps^2 |(A^2)_mm| / (d_M - d_m) < Re z < d_M - eps^2 |(A^2)_MM| / (d_M - d_m)`;
    /// degenerate: `[min d, max d]`.
    pub strip: (f64, f64),
    /// Highest power of `eps` resolved by the prediction.
    pub order: u32,
}

/// Extreme eigenvalues to second order in `eps`:
/// `lambda_max = d_M - eps^2 sum_j |a_Mj a_jM| / (d_M - d_j)` and
/// `lambda_min = d_m + eps^2 sum_j |a_mj a_jm| / (d_j - d_m)`.
pub fn predict_extremes(input: &PerturbationInput) -> Result<PerturbationPrediction> {
    input.validate()?;
    let (lo, hi) = input.extremes();
    let n = input.d.len();
    let eps2 = input.eps * input.eps;
    if n == 1 {
        let z = Complex64::new(lo, 0.0);
        return Ok(PerturbationPrediction {
            kind: PredictionKind::NonDegenerate,
            lambda_max: z,
            lambda_min: z,
            strip: (lo, hi),
            order: 2,
        });
    }
    let top = input.cluster(hi);
    let bottom = input.cluster(lo);
    for c in [&top, &bottom] {
        if c.len() > 1 {
            return Err(Error::DegenerateExtremes { size: c.len() });
        }
    }
    let (big, small) = (top[0], bottom[0]);
    let shift = |at: usize| -> f64 {
        (0..n)
            .filter(|&j| j != at)
            .map(|j| input.pair_weight(at, j) / (input.d[at] - input.d[j]).abs())
            .sum()
    };
    let spread = hi - lo;
    // |(A^2)_kk| = sum_j |a_kj a_jk| since every product is <= 0.
    let diag_sq = |k: usize| -> f64 { (0..n).map(|j| input.pair_weight(k, j)).sum() };
    Ok(PerturbationPrediction {
        kind: PredictionKind::NonDegenerate,
        lambda_max: Complex64::new(hi - eps2 * shift(big), 0.0),
        lambda_min: Complex64::new(lo + eps2 * shift(small), 0.0),
        strip: (lo + eps2 * diag_sq(small) / spread, hi - eps2 * diag_sq(big) / spread),
        order: 2,
    })
}

/// Complex pair born from a degenerate extreme value `d*` with index set `s`:
/// `d* +- i (|eps|/sqrt 2) sqrt(sum_{i,j in s} |a_ij a_ji|)
///   + (eps^2/2) sum_{i in s, j not in s} a_ij a_ji / (d* - d_j)`.
///
/// The lowest cluster is used when it is degenerate, otherwise the highest.
pub fn predict_degenerate(input: &PerturbationInput) -> Result<PerturbationPrediction> {
    input.validate()?;
    let (lo, hi) = input.extremes();
    let low = input.cluster(lo);
    let (end, sigma, value) = if low.len() >= 2 {
        (ClusterEnd::Lowest, low, lo)
    } else {
        let high = input.cluster(hi);
        if high.len() < 2 {
            return Err(Error::NotDegenerate);
        }
        (ClusterEnd::Highest, high, hi)
    };
    let n = input.d.len();
    let inside: f64 = sigma
        .iter()
        .flat_map(|&i| sigma.iter().map(move |&j| (i, j)))
        .filter(|(i, j)| i != j)
        .map(|(i, j)| input.pair_weight(i, j))
        .sum();
    let cross: f64 = sigma
        .iter()
        .flat_map(|&i| (0..n).filter(|j| !sigma.contains(j)).map(move |j| (i, j)))
        .map(|(i, j)| input.a[(i, j)] * input.a[(j, i)] / (value - input.d[j]))
        .sum();
    let im = input.eps.abs() / std::f64::consts::SQRT_2 * inside.sqrt();
    let re = value + 0.5 * input.eps * input.eps * cross;
    Ok(PerturbationPrediction {
        kind: PredictionKind::Degenerate {
            end,
            size: sigma.len(),
        },
        lambda_max: Complex64::new(re, im),
        lambda_min: Complex64::new(re, -im),
        strip: (lo, hi),
        order: 1,
    })
}

/// Non-degenerate prediction when possible, degenerate otherwise.
pub fn predict(input: &PerturbationInput) -> Result<PerturbationPrediction> {
    match predict_extremes(input) {
        Err(Error::DegenerateExtremes { .. }) => predict_degenerate(input),
        other => other,
    }
}

/// `eps^2` coefficient of `det(z - D - eps A)`:
/// `-(1/2) sum_{i != j} a_ij a_ji prod_{k != i, j} (z - d_k)`.
pub fn char_poly_eps2_coefficient(d: &[f64], a: &RealMatrix, z: f64) -> f64 {
    let n = d.len();
    let mut total = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i == j {
                continue;
            }
            let rest: f64 = (0..n).filter(|&k| k != i && k != j).map(|k| z - d[k]).product();
            total += a[(i, j)] * a[(j, i)] * rest;
        }
    }
    -0.5 * total
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ResidualRow {
    pub eps: f64,
    pub residual_max: f64,
    pub residual_min: f64,
}

/// Residuals of a prediction over a grid of couplings.
///
/// Non-degenerate inputs compare both extremes (full complex distance to the
/// matched eigenvalue; the error is `O(eps^3)`). Degenerate inputs compare
/// the imaginary parts of the predicted pair (error `O(eps^2)`).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResidualReport {
    pub kind: PredictionKind,
    pub rows: Vec<ResidualRow>,
    /// Least-squares slope of `log residual` against `log eps`, per column;
    /// `None` when fewer than two residuals are nonzero (exact prediction).
    pub slope_max: Option<f64>,
    pub slope_min: Option<f64>,
    /// The smaller of the two column slopes.
    pub slope: Option<f64>,
}

impl ResidualReport {
    /// Minimum slope required by the order of the prediction, less 0.3.
    pub fn required_slope(&self) -> f64 {
        match self.kind {
            PredictionKind::NonDegenerate => 3.0 - 0.3,
            PredictionKind::Degenerate { .. } => 2.0 - 0.3,
        }
    }

    /// Exact predictions pass trivially.
    pub fn passes(&self, required: f64) -> bool {
        self.slope.is_none_or(|s| s >= required)
    }
}

pub fn verify_prediction(input: &PerturbationInput, eps_grid: &[f64]) -> Result<ResidualReport> {
    if eps_grid.len() < 2 {
        return Err(Error::InvalidArgument("eps grid needs at least two values".into()));
    }
    if eps_grid.iter().any(|e| !(*e > 0.0 && e.is_finite())) || eps_grid.windows(2).any(|w| w[1] >= w[0]) {
        return Err(Error::InvalidArgument("eps grid must be positive and strictly decreasing".into()));
    }
    let mut kind = None;
    let mut rows = Vec::with_capacity(eps_grid.len());
    for &eps in eps_grid {
        let at = input.with_eps(eps);
        let pred = predict(&at)?;
        kind = Some(pred.kind);
        let spectrum = eigenvalues(&at.matrix())?;
        let (hit_max, hit_min) = match_two(pred.lambda_max, pred.lambda_min, &spectrum.eigenvalues);
        let (residual_max, residual_min) = match pred.kind {
            PredictionKind::NonDegenerate => ((pred.lambda_max - hit_max).norm(), (pred.lambda_min - hit_min).norm()),
            PredictionKind::Degenerate { .. } => (
                (pred.lambda_max.im - hit_max.im).abs(),
                (pred.lambda_min.im - hit_min.im).abs(),
            ),
        };
        rows.push(ResidualRow {
            eps,
            residual_max,
            residual_min,
        });
    }
    let slope_max = log_slope(rows.iter().map(|r| (r.eps, r.residual_max)));
    let slope_min = log_slope(rows.iter().map(|r| (r.eps, r.residual_min)));
    let slope = match (slope_max, slope_min) {
        (Some(a), Some(b)) => Some(a.min(b)),
        (a, b) => a.or(b),
    };
    Ok(ResidualReport {
        kind: kind.expect("grid is non-empty"),
        rows,
        slope_max,
        slope_min,
        slope,
    })
}

/// Greedy nearest-eigenvalue assignment of two predictions to distinct eigenvalues.
fn match_two(p: Complex64, q: Complex64, eig: &[Complex64]) -> (Complex64, Complex64) {
    let nearest = |target: Complex64, skip: Option<usize>| -> (usize, f64) {
        eig.iter()
            .enumerate()
            .filter(|(k, _)| Some(*k) != skip)
            .map(|(k, z)| (k, (z - target).norm()))
            .min_by(|a, b| a.1.total_cmp(&b.1))
            .unwrap_or((0, f64::INFINITY))
    };
    if eig.len() < 2 {
        return (eig[0], eig[0]);
    }
    let (kp, dp) = nearest(p, None);
    let (kq, dq) = nearest(q, None);
    if dp <= dq {
        (eig[kp], eig[nearest(q, Some(kp)).0])
    } else {
        (eig[nearest(p, Some(kq)).0], eig[kq])
    }
}

fn log_slope(points: impl Iterator<Item = (f64, f64)>) -> Option<f64> {
    let pts: Vec<(f64, f64)> = points.filter(|(_, r)| *r > 0.0).map(|(e, r)| (e.ln(), r.ln())).collect();
    if pts.len() < 2 {
        return None;
    }
    let m = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / m;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / m;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx) * (p.0 - mx)).sum();
    Some(sxy / sxx)
}

/// Random test instance of size `n >= 3` with uniform-antagonistic pairs.
///
/// Interior diagonal values are uniform on `(-1, 1)`. Non-degenerate
/// instances put the extremes at `+-(2 + u)`, `u` uniform on `(0, 1)`.
/// Degenerate instances place two equal minima at `-2.5` and a simple
/// maximum at `2 + u`.
pub fn random_instance(n: usize, seed: u64, index: u64, degenerate: bool) -> Result<PerturbationInput> {
    if n < 3 {
        return Err(Error::InvalidArgument("random instances need n >= 3".into()));
    }
    let mut rng = rng::stream(seed, index);
    let mut d: Vec<f64> = (0..n).map(|_| 2.0 * rng.random::<f64>() - 1.0).collect();
    // Distinct random positions for the extremes.
    let mut slots: Vec<usize> = (0..n).collect();
    for k in 0..3 {
        let pick = rng.random_range(k..n);
        slots.swap(k, pick);
    }
    d[slots[0]] = 2.0 + rng.random::<f64>();
    if degenerate {
        d[slots[1]] = -2.5;
        d[slots[2]] = -2.5;
    } else {
        d[slots[1]] = -2.0 - rng.random::<f64>();
    }
    let pairs = PairDensity::UniformAntagonistic;
    let mut a = RealMatrix::zeros(n);
    for i in 0..n {
        for k in i + 1..n {
            let (x, y) = pairs.sample(i, k, &mut rng);
            a[(i, k)] = x;
            a[(k, i)] = y;
        }
    }
    PerturbationInput::new(d, a, 0.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn two_by_two(eps: f64) -> PerturbationInput {
        let a = RealMatrix::from_rows(&[[0.0, 2.0], [-3.0, 0.0]]).unwrap();
        PerturbationInput::new(vec![-1.0, -4.0], a, eps).unwrap()
    }

    #[test]
    fn zero_perturbation_keeps_the_diagonal() {
        let p = predict_extremes(&PerturbationInput::new(vec![1.0, -2.0, 0.5], RealMatrix::zeros(3), 0.1).unwrap()).unwrap();
        assert_eq!(p.lambda_max, Complex64::new(1.0, 0.0));
        assert_eq!(p.lambda_min, Complex64::new(-2.0, 0.0));
    }

    #[test]
    fn two_by_two_expansion() {
        let p = predict_extremes(&two_by_two(0.01)).unwrap();
        assert!((p.lambda_max.re - (-1.0002)).abs() < 1e-15);
        assert!((p.lambda_min.re - (-3.9998)).abs() < 1e-15);
        assert!(p.strip.0 <= p.lambda_min.re && p.lambda_max.re <= p.strip.1);
    }

    #[test]
    fn degenerate_antisymmetric_pair_is_exact() {
        let a = RealMatrix::from_rows(&[[0.0, 1.0], [-1.0, 0.0]]).unwrap();
        let eps = 0.3;
        let p = predict_degenerate(&PerturbationInput::new(vec![0.0, 0.0], a, eps).unwrap()).unwrap();
        assert!((p.lambda_max - Complex64::new(0.0, eps)).norm() < 1e-15);
        assert!((p.lambda_min - Complex64::new(0.0, -eps)).norm() < 1e-15);
    }

    #[test]
    fn degenerate_block_with_outside_level() {
        let mut a = RealMatrix::zeros(3);
        a[(0, 1)] = 2.0;
        a[(1, 0)] = -3.0;
        let eps = 1e-3;
        let p = predict_degenerate(&PerturbationInput::new(vec![0.0, 0.0, -5.0], a, eps).unwrap()).unwrap();
        // The cluster {0, 1} sits at the top here.
        assert_eq!(
            p.kind,
            PredictionKind::Degenerate {
                end: ClusterEnd::Highest,
                size: 2
            }
        );
        assert!((p.lambda_max.im - eps * 6f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn zero_block_stays_unshifted() {
        let p = predict_degenerate(&PerturbationInput::new(vec![-1.0, -1.0, -1.0, 4.0], RealMatrix::zeros(4), 0.1).unwrap())
            .unwrap();
        assert_eq!(p.lambda_max, Complex64::new(-1.0, 0.0));
        assert_eq!(
            p.kind,
            PredictionKind::Degenerate {
                end: ClusterEnd::Lowest,
                size: 3
            }
        );
    }

    #[test]
    fn errors() {
        let a = RealMatrix::zeros(2);
        assert_eq!(
            predict_extremes(&PerturbationInput::new(vec![1.0, 1.0], a.clone(), 0.1).unwrap()),
            Err(Error::DegenerateExtremes { size: 2 })
        );
        assert_eq!(
            predict_degenerate(&PerturbationInput::new(vec![1.0, 2.0], a.clone(), 0.1).unwrap()),
            Err(Error::NotDegenerate)
        );
        assert!(PerturbationInput::new(vec![1.0, 2.0], RealMatrix::identity(2), 0.1).is_err());
        assert!(verify_prediction(&two_by_two(0.0), &[1e-3, 1e-2]).is_err());
    }

    #[test]
    fn exact_when_unperturbed() {
        let input = PerturbationInput::new(vec![3.0, -1.0, 0.0], RealMatrix::zeros(3), 0.0).unwrap();
        let r = verify_prediction(&input, &[1e-2, 1e-3]).unwrap();
        assert!(r.rows.iter().all(|row| row.residual_max == 0.0 && row.residual_min == 0.0));
        assert_eq!(r.slope, None);
        assert!(r.passes(r.required_slope()));
    }

    #[test]
    fn random_instances_have_the_requested_structure() {
        let plain = random_instance(10, 1, 0, false).unwrap();
        assert!(predict_extremes(&plain).is_ok());
        let degen = random_instance(10, 1, 0, true).unwrap();
        assert!(matches!(
            predict(&degen).unwrap().kind,
            PredictionKind::Degenerate {
                end: ClusterEnd::Lowest,
                size: 2
            }
        ));
    }
}
