use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::fmt;
use std::str::FromStr;

use super::determinant::determinant;
use super::matching::ThetaArray;
use super::pfaffian::pfaffian;
use super::polynomial::{expected_char_poly, expected_det, expected_trace_square};
use crate::error::{Error, Result};
use crate::matgen::{Composition, EnsembleSpec};
use crate::matrix::RealMatrix;
use crate::numeric::mean_and_stderr;

/// Matrix functional averaged by [`mc_expect`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum Functional {
    Det,
    /// `pf[A] * pf[A^T]`, without the `(-1)^(n/2)` sign.
    PfPfT,
    /// `det(z I - A)`.
    CharPolyAt { z: f64 },
    /// `tr(A^2)`.
    TraceSquare,
}

impl Functional {
    pub fn evaluate(&self, m: &RealMatrix) -> f64 {
        match *self {
            Functional::Det => determinant(m),
            Functional::PfPfT => pfaffian(m) * pfaffian(&m.transpose()),
            Functional::CharPolyAt { z } => {
                let shifted = RealMatrix::from_fn(m.n(), |i, j| if i == j { z - m[(i, j)] } else { -m[(i, j)] });
                determinant(&shifted)
            }
            Functional::TraceSquare => {
                let n = m.n();
                let mut s = 0.0;
                for i in 0..n {
                    for j in 0..n {
                        s += m[(i, j)] * m[(j, i)];
                    }
                }
                s
            }
        }
    }

    /// Exact expectation from the matching sums over `theta`.
    pub fn exact(&self, theta: &ThetaArray) -> Result<f64> {
        let n = theta.n();
        match *self {
            Functional::Det => expected_det(theta),
            Functional::PfPfT => Ok(pfaffian_sign(n) * expected_det(theta)?),
            Functional::CharPolyAt { z } => Ok(expected_char_poly(theta)?.eval(z)),
            Functional::TraceSquare => Ok(expected_trace_square(theta)),
        }
    }
}

impl fmt::Display for Functional {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Functional::Det => write!(f, "det"),
            Functional::PfPfT => write!(f, "pf-pft"),
            Functional::CharPolyAt { z } => write!(f, "char-poly-at:{z}"),
            Functional::TraceSquare => write!(f, "trace-square"),
        }
    }
}

impl FromStr for Functional {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "det" => Ok(Functional::Det),
            "pf-pft" => Ok(Functional::PfPfT),
            "trace-square" => Ok(Functional::TraceSquare),
            _ => {
                let z = s
                    .strip_prefix("char-poly-at:")
                    .and_then(|z| z.parse::<f64>().ok())
                    .filter(|z| z.is_finite());
                z.map(|z| Functional::CharPolyAt { z }).ok_or_else(|| {
                    Error::InvalidArgument(format!(
                        "unknown functional `{s}` (expected det, pf-pft, trace-square or char-poly-at:<z>)"
                    ))
                })
            }
        }
    }
}

/// `(-1)^(n/2)`: `E[det A] = (-1)^(n/2) E[pf[A] pf[A^T]]` for even `n`.
pub fn pfaffian_sign(n: usize) -> f64 {
    if (n / 2) % 2 == 0 {
        1.0
    } else {
        -1.0
    }
}

/// Monte Carlo value with its standard error and provenance.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Estimate {
    pub value: f64,
    pub stderr: f64,
    pub trials: usize,
    pub seed: u64,
}

impl Estimate {
    /// `(value - reference) / stderr`; infinite when the error is zero but
    /// the values differ.
    pub fn z_score(&self, reference: f64) -> f64 {
        let diff = self.value - reference;
        if self.stderr > 0.0 {
            diff / self.stderr
        } else if diff == 0.0 {
            0.0
        } else {
            diff.signum() * f64::INFINITY
        }
    }
}

/// Sample mean of `functional` over members `0..trials` of the ensemble.
///
/// Trials run on the current rayon pool; each reads its own stream and the
/// values are reduced in trial order, so the estimate does not depend on the
/// number of threads.
pub fn mc_expect(spec: &EnsembleSpec, functional: Functional, trials: usize) -> Result<Estimate> {
    spec.validate()?;
    if !spec.is_antagonistic() {
        return Err(Error::spec("composition", "Monte Carlo expectations need an antagonistic composition"));
    }
    if trials < 2 {
        return Err(Error::InvalidArgument("at least 2 trials are required".into()));
    }
    let values = (0..trials as u64)
        .into_par_iter()
        .map(|t| spec.sample_nth(t).map(|m| functional.evaluate(&m)))
        .collect::<Result<Vec<f64>>>()?;
    let (value, stderr) = mean_and_stderr(&values);
    Ok(Estimate {
        value,
        stderr,
        trials,
        seed: spec.seed,
    })
}

/// `theta[i][j] = -E[a_ij a_ji]` for antagonistic compositions with zero-mean
/// entries; `None` otherwise.
pub fn theta_for(spec: &EnsembleSpec) -> Result<Option<ThetaArray>> {
    match spec.composition {
        Composition::Antagonistic { pairs } => ThetaArray::from_density(&pairs, spec.n).map(Some),
        Composition::Antisymmetric { entry } if entry.mean() == 0.0 => {
            ThetaArray::constant(spec.n, entry.variance()).map(Some)
        }
        _ => Ok(None),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matgen::PairDensity;

    #[test]
    fn functional_names_round_trip() {
        for f in [
            Functional::Det,
            Functional::PfPfT,
            Functional::TraceSquare,
            Functional::CharPolyAt { z: -1.5 },
        ] {
            assert_eq!(f.to_string().parse::<Functional>().unwrap(), f);
        }
        assert!("char-poly-at:x".parse::<Functional>().is_err());
        assert!("trace".parse::<Functional>().is_err());
    }

    #[test]
    fn rejects_bad_requests() {
        let spec = EnsembleSpec::new(
            4,
            0,
            Composition::Antagonistic {
                pairs: PairDensity::GaussianAntagonistic,
            },
        );
        assert!(mc_expect(&spec, Functional::Det, 1).is_err());
        let elliptic = EnsembleSpec::new(4, 0, Composition::EllipticGaussian { tau: 0.0 });
        assert!(matches!(
            mc_expect(&elliptic, Functional::Det, 10),
            Err(Error::InvalidSpec { .. })
        ));
    }

    #[test]
    fn estimates_are_reproducible() {
        let spec = EnsembleSpec::new(
            4,
            42,
            Composition::Antagonistic {
                pairs: PairDensity::UniformAntagonistic,
            },
        );
        let a = mc_expect(&spec, Functional::Det, 500).unwrap();
        let b = mc_expect(&spec, Functional::Det, 500).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.seed, 42);
        assert!(a.stderr > 0.0);
    }

    #[test]
    fn pfaffian_sign_alternates() {
        assert_eq!(pfaffian_sign(2), -1.0);
        assert_eq!(pfaffian_sign(4), 1.0);
        assert_eq!(pfaffian_sign(6), -1.0);
    }
}
