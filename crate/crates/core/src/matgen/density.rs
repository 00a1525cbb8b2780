//! Scalar entry laws and joint laws of off-diagonal pairs.

use std::f64::consts::PI;

use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Law of a single matrix entry (diagonal, symmetric or antisymmetric part).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum ScalarDensity {
    /// Uniform on `(lo, hi)`.
    Uniform { lo: f64, hi: f64 },
    Gaussian { mean: f64, variance: f64 },
    /// Equal mixture of uniforms on `(-1-w, -1+w)` and `(1-w, 1+w)`.
    TwoInterval { w: f64 },
    /// Uniform on `(-hi, -lo) U (lo, hi)`.
    GapUniform { lo: f64, hi: f64 },
    Point { value: f64 },
}

impl ScalarDensity {
    pub fn validate(&self, field: &str) -> Result<()> {
        let bad = |reason: &str| Err(Error::spec(field, reason));
        match *self {
            ScalarDensity::Uniform { lo, hi } => {
                if !(lo.is_finite() && hi.is_finite() && lo < hi) {
                    return bad("uniform needs finite lo < hi");
                }
            }
            ScalarDensity::Gaussian { mean, variance } => {
                if !(mean.is_finite() && variance.is_finite() && variance >= 0.0) {
                    return bad("gaussian needs finite mean and variance >= 0");
                }
            }
            ScalarDensity::TwoInterval { w } => {
                if !(w > 0.0 && w < 1.0) {
                    return bad("two-interval needs 0 < w < 1");
                }
            }
            ScalarDensity::GapUniform { lo, hi } => {
                if !(lo.is_finite() && hi.is_finite() && 0.0 < lo && lo < hi) {
                    return bad("gap-uniform needs 0 < lo < hi");
                }
            }
            ScalarDensity::Point { value } => {
                if !value.is_finite() {
                    return bad("point value must be finite");
                }
            }
        }
        Ok(())
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        match *self {
            ScalarDensity::Uniform { lo, hi } => lo + (hi - lo) * rng.random::<f64>(),
            ScalarDensity::Gaussian { mean, variance } => {
                let z: f64 = rng.sample(StandardNormal);
                mean + variance.sqrt() * z
            }
            ScalarDensity::TwoInterval { w } => {
                let v = 1.0 + w * (2.0 * rng.random::<f64>() - 1.0);
                if rng.random::<bool>() {
                    v
                } else {
                    -v
                }
            }
            ScalarDensity::GapUniform { lo, hi } => {
                let v = lo + (hi - lo) * rng.random::<f64>();
                if rng.random::<bool>() {
                    v
                } else {
                    -v
                }
            }
            ScalarDensity::Point { value } => value,
        }
    }

    pub fn mean(&self) -> f64 {
        match *self {
            ScalarDensity::Uniform { lo, hi } => 0.5 * (lo + hi),
            ScalarDensity::Gaussian { mean, .. } => mean,
            ScalarDensity::TwoInterval { .. } | ScalarDensity::GapUniform { .. } => 0.0,
            ScalarDensity::Point { value } => value,
        }
    }

    pub fn variance(&self) -> f64 {
        match *self {
            ScalarDensity::Uniform { lo, hi } => (hi - lo).powi(2) / 12.0,
            ScalarDensity::Gaussian { variance, .. } => variance,
            ScalarDensity::TwoInterval { w } => 1.0 + w * w / 3.0,
            ScalarDensity::GapUniform { lo, hi } => (lo * lo + lo * hi + hi * hi) / 3.0,
            ScalarDensity::Point { .. } => 0.0,
        }
    }

    /// Closed support bounds; infinite for the Gaussian.
    pub fn support(&self) -> (f64, f64) {
        match *self {
            ScalarDensity::Uniform { lo, hi } => (lo, hi),
            ScalarDensity::Gaussian { variance, mean } if variance == 0.0 => (mean, mean),
            ScalarDensity::Gaussian { .. } => (f64::NEG_INFINITY, f64::INFINITY),
            ScalarDensity::TwoInterval { w } => (-1.0 - w, 1.0 + w),
            ScalarDensity::GapUniform { hi, .. } => (-hi, hi),
            ScalarDensity::Point { value } => (value, value),
        }
    }
}

/// Joint law of an off-diagonal pair `(a[i][k], a[k][i])`, `i < k`.
///
/// Every variant is supported on `{x * y <= 0}` and is symmetric under
/// `(x, y) -> (y, x)`, so both marginals coincide and have zero mean.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum PairDensity {
    /// `(1/pi) exp(-(x^2 + y^2)/2)` on `x * y < 0`; standard normal marginals.
    GaussianAntagonistic,
    /// Density 1/2 on `(0,1) x (-1,0)` and on `(-1,0) x (0,1)`; uniform marginals on `(-1, 1)`.
    UniformAntagonistic,
    /// Mass split between two `2w x 2w` squares centred on `(-1, 1)` and `(1, -1)`.
    TwoInterval { w: f64 },
    /// Two `delta x delta` squares at `(1, -1-delta)` and `(-1-delta, 1)`
    /// with `delta = c / (1 + (k - i)^p)`.
    DecayingSquares { c: f64, p: f64 },
    /// Magnitudes independent uniform on `(lo, hi)`, opposite signs.
    GapUniform { lo: f64, hi: f64 },
}

/// Closed-form moments of a pair law: marginal mean, variance and fourth
/// moment, and `theta = -E[x y]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PairMoments {
    pub mean: f64,
    pub var: f64,
    pub fourth: f64,
    pub theta: f64,
}

impl PairDensity {
    pub fn validate(&self, field: &str) -> Result<()> {
        let bad = |reason: &str| Err(Error::spec(field, reason));
        match *self {
            PairDensity::GaussianAntagonistic | PairDensity::UniformAntagonistic => Ok(()),
            PairDensity::TwoInterval { w } if !(w > 0.0 && w < 1.0) => bad("two-interval needs 0 < w < 1"),
            PairDensity::DecayingSquares { c, p } if !(c > 0.0 && c.is_finite() && p > 0.0 && p.is_finite()) => {
                bad("decaying-squares needs c > 0 and p > 0")
            }
            PairDensity::GapUniform { lo, hi } if !(lo.is_finite() && hi.is_finite() && 0.0 < lo && lo < hi) => {
                bad("gap-uniform needs 0 < lo < hi")
            }
            _ => Ok(()),
        }
    }

    /// True when every pair of the ensemble has the same law.
    pub fn is_identical(&self) -> bool {
        !matches!(self, PairDensity::DecayingSquares { .. })
    }

    /// Square side of the decaying-squares law for the pair `(i, k)`.
    pub fn delta(c: f64, p: f64, i: usize, k: usize) -> f64 {
        let gap = i.abs_diff(k) as f64;
        c / (1.0 + gap.powf(p))
    }

    /// Draws `(a[i][k], a[k][i])`. Only the decaying-squares law reads `(i, k)`.
    pub fn sample<R: Rng + ?Sized>(&self, i: usize, k: usize, rng: &mut R) -> (f64, f64) {
        // Magnitudes of the positive and the negative entry.
        let (pos, neg) = match *self {
            PairDensity::GaussianAntagonistic => {
                let a: f64 = rng.sample(StandardNormal);
                let b: f64 = rng.sample(StandardNormal);
                (a.abs(), b.abs())
            }
            PairDensity::UniformAntagonistic => (rng.random::<f64>(), rng.random::<f64>()),
            PairDensity::TwoInterval { w } => (
                1.0 + w * (2.0 * rng.random::<f64>() - 1.0),
                1.0 + w * (2.0 * rng.random::<f64>() - 1.0),
            ),
            PairDensity::DecayingSquares { c, p } => {
                let delta = Self::delta(c, p, i, k);
                (1.0 + delta * rng.random::<f64>(), 1.0 + delta * rng.random::<f64>())
            }
            PairDensity::GapUniform { lo, hi } => (
                lo + (hi - lo) * rng.random::<f64>(),
                lo + (hi - lo) * rng.random::<f64>(),
            ),
        };
        if rng.random::<bool>() {
            (pos, -neg)
        } else {
            (-neg, pos)
        }
    }

    /// Closed-form moments for the pair `(i, k)`.
    pub fn moments(&self, i: usize, k: usize) -> PairMoments {
        let (var, fourth, theta) = match *self {
            PairDensity::GaussianAntagonistic => (1.0, 3.0, 2.0 / PI),
            PairDensity::UniformAntagonistic => (1.0 / 3.0, 1.0 / 5.0, 1.0 / 4.0),
            PairDensity::TwoInterval { w } => {
                let w2 = w * w;
                (1.0 + w2 / 3.0, 1.0 + 2.0 * w2 + w2 * w2 / 5.0, 1.0)
            }
            PairDensity::DecayingSquares { c, p } => {
                let d = Self::delta(c, p, i, k);
                let var = 1.0 + d + d * d / 3.0;
                let fourth = 1.0 + 2.0 * d + 2.0 * d * d + d.powi(3) + d.powi(4) / 5.0;
                (var, fourth, (1.0 + 0.5 * d).powi(2))
            }
            PairDensity::GapUniform { lo, hi } => {
                let raw = |k: i32| (hi.powi(k + 1) - lo.powi(k + 1)) / ((k + 1) as f64 * (hi - lo));
                (raw(2), raw(4), raw(1).powi(2))
            }
        };
        PairMoments {
            mean: 0.0,
            var,
            fourth,
            theta,
        }
    }
}

/// Draws one pair from an identically distributed law (decaying squares are
/// read at unit distance from the diagonal).
pub fn sample_pair<R: Rng + ?Sized>(d: &PairDensity, rng: &mut R) -> (f64, f64) {
    d.sample(0, 1, rng)
}

pub fn pair_moments(d: &PairDensity, i: usize, k: usize) -> PairMoments {
    d.moments(i, k)
}
