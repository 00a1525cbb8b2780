//! Ensemble recipes and the matrix sampler.

use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use super::density::{PairDensity, ScalarDensity};
use crate::error::{Error, Result};
use crate::matrix::RealMatrix;
use crate::rng::{self, Stream};

/// How the entries of one ensemble member are assembled.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum Composition {
    /// Zero diagonal, independent pairs drawn from `pairs`.
    Antagonistic { pairs: PairDensity },
    /// `A[i][j] ~ entry` for `i < j`, `A[j][i] = -A[i][j]`.
    Antisymmetric { entry: ScalarDensity },
    /// `D + g A` with `A` antisymmetric.
    DiagPlusAntisym {
        diag: ScalarDensity,
        entry: ScalarDensity,
        g: f64,
    },
    /// `D + A` with `A` antagonistic.
    DiagPlusAntagonistic { diag: ScalarDensity, pairs: PairDensity },
    /// Real elliptic Gaussian ensemble, `E[J_ik J_ki] = tau / n`, `E[J_ik^2] = 1 / n`.
    EllipticGaussian { tau: f64 },
    /// Every entry is kept with probability `keep` and drawn from `entry`, else zero.
    Dilute { entry: ScalarDensity, keep: f64 },
    /// `D + S / sqrt(n) + A`, `S` symmetric with zero diagonal, `A` antisymmetric.
    SmallSymBigAntisym {
        diag: ScalarDensity,
        sym: ScalarDensity,
        antisym: ScalarDensity,
    },
}

/// Full recipe for one random-matrix ensemble.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EnsembleSpec {
    pub n: usize,
    pub seed: u64,
    pub composition: Composition,
}

impl EnsembleSpec {
    pub fn new(n: usize, seed: u64, composition: Composition) -> Self {
        EnsembleSpec { n, seed, composition }
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn with_n(mut self, n: usize) -> Self {
        self.n = n;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.n == 0 {
            return Err(Error::spec("n", "must be at least 1"));
        }
        match &self.composition {
            Composition::Antagonistic { pairs } => pairs.validate("composition.pairs"),
            Composition::Antisymmetric { entry } => entry.validate("composition.entry"),
            Composition::DiagPlusAntisym { diag, entry, g } => {
                diag.validate("composition.diag")?;
                entry.validate("composition.entry")?;
                if !g.is_finite() {
                    return Err(Error::spec("composition.g", "must be finite"));
                }
                Ok(())
            }
            Composition::DiagPlusAntagonistic { diag, pairs } => {
                diag.validate("composition.diag")?;
                pairs.validate("composition.pairs")
            }
            Composition::EllipticGaussian { tau } => {
                if !(tau.abs() <= 1.0) {
                    return Err(Error::spec("composition.tau", "must satisfy |tau| <= 1"));
                }
                Ok(())
            }
            Composition::Dilute { entry, keep } => {
                entry.validate("composition.entry")?;
                if !(0.0..=1.0).contains(keep) {
                    return Err(Error::spec("composition.keep", "must lie in [0, 1]"));
                }
                Ok(())
            }
            Composition::SmallSymBigAntisym { diag, sym, antisym } => {
                diag.validate("composition.diag")?;
                sym.validate("composition.sym")?;
                antisym.validate("composition.antisym")
            }
        }
    }

    /// True for compositions whose members are antagonistic matrices.
    pub fn is_antagonistic(&self) -> bool {
        matches!(
            self.composition,
            Composition::Antagonistic { .. } | Composition::Antisymmetric { .. }
        )
    }

    /// Member 0 of the ensemble.
    pub fn sample(&self) -> Result<RealMatrix> {
        self.sample_nth(0)
    }

    /// Member `index` of the ensemble, drawn from stream `index` of `seed`.
    pub fn sample_nth(&self, index: u64) -> Result<RealMatrix> {
        self.validate()?;
        let mut rng = rng::stream(self.seed, index);
        Ok(self.draw(&mut rng))
    }

    fn draw(&self, rng: &mut Stream) -> RealMatrix {
        let n = self.n;
        let mut m = RealMatrix::zeros(n);
        match self.composition {
            Composition::Antagonistic { pairs } => fill_pairs(&mut m, &pairs, rng),
            Composition::Antisymmetric { entry } => fill_antisym(&mut m, &entry, 1.0, rng),
            Composition::DiagPlusAntisym { diag, entry, g } => {
                fill_diag(&mut m, &diag, rng);
                fill_antisym(&mut m, &entry, g, rng);
            }
            Composition::DiagPlusAntagonistic { diag, pairs } => {
                fill_diag(&mut m, &diag, rng);
                fill_pairs(&mut m, &pairs, rng);
            }
            Composition::EllipticGaussian { tau } => {
                let nf = n as f64;
                let sd_diag = ((1.0 + tau) / nf).sqrt();
                let sd_sym = ((1.0 + tau) / (2.0 * nf)).sqrt();
                let sd_anti = ((1.0 - tau) / (2.0 * nf)).sqrt();
                for i in 0..n {
                    let z: f64 = rng.sample(StandardNormal);
                    m[(i, i)] = sd_diag * z;
                }
                for i in 0..n {
                    for j in i + 1..n {
                        let zs: f64 = rng.sample(StandardNormal);
                        let za: f64 = rng.sample(StandardNormal);
                        let (s, a) = (sd_sym * zs, sd_anti * za);
                        m[(i, j)] = s + a;
                        m[(j, i)] = s - a;
                    }
                }
            }
            Composition::Dilute { entry, keep } => {
                for v in m.as_mut_slice() {
                    if rng.random::<f64>() < keep {
                        *v = entry.sample(rng);
                    }
                }
            }
            Composition::SmallSymBigAntisym { diag, sym, antisym } => {
                fill_diag(&mut m, &diag, rng);
                let scale = 1.0 / (n as f64).sqrt();
                for i in 0..n {
                    for j in i + 1..n {
                        let s = scale * sym.sample(rng);
                        let a = antisym.sample(rng);
                        m[(i, j)] = s + a;
                        m[(j, i)] = s - a;
                    }
                }
            }
        }
        m
    }
}

fn fill_diag(m: &mut RealMatrix, diag: &ScalarDensity, rng: &mut Stream) {
    for i in 0..m.n() {
        m[(i, i)] = diag.sample(rng);
    }
}

fn fill_pairs(m: &mut RealMatrix, pairs: &PairDensity, rng: &mut Stream) {
    let n = m.n();
    for i in 0..n {
        for k in i + 1..n {
            let (x, y) = pairs.sample(i, k, rng);
            m[(i, k)] = x;
            m[(k, i)] = y;
        }
    }
}

fn fill_antisym(m: &mut RealMatrix, entry: &ScalarDensity, g: f64, rng: &mut Stream) {
    let n = m.n();
    for i in 0..n {
        for j in i + 1..n {
            let a = g * entry.sample(rng);
            m[(i, j)] = a;
            m[(j, i)] = -a;
        }
    }
}

/// Samples member 0 of `spec`.
pub fn sample_matrix(spec: &EnsembleSpec) -> Result<RealMatrix> {
    spec.sample()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(json: &str) -> EnsembleSpec {
        serde_json::from_str(json).unwrap()
    }

    #[test]
    fn json_schema_round_trips_and_rejects_unknown_fields() {
        let s = spec(
            r#"{"n":5,"seed":9,"composition":{"kind":"small-sym-big-antisym",
                "diag":{"kind":"uniform","lo":-10,"hi":-5},
                "sym":{"kind":"uniform","lo":-30,"hi":30},
                "antisym":{"kind":"gap-uniform","lo":1.5,"hi":10}}}"#,
        );
        let back: EnsembleSpec = serde_json::from_str(&serde_json::to_string(&s).unwrap()).unwrap();
        assert_eq!(back, s);
        assert!(serde_json::from_str::<EnsembleSpec>(
            r#"{"n":5,"seed":9,"extra":1,"composition":{"kind":"elliptic-gaussian","tau":0}}"#
        )
        .is_err());
        assert!(serde_json::from_str::<EnsembleSpec>(
            r#"{"n":5,"seed":9,"composition":{"kind":"elliptic-gaussian","tau":0,"rho":1}}"#
        )
        .is_err());
    }

    #[test]
    fn invalid_specs_report_the_field() {
        let bad = [
            (EnsembleSpec::new(0, 0, Composition::EllipticGaussian { tau: 0.0 }), "n"),
            (EnsembleSpec::new(3, 0, Composition::EllipticGaussian { tau: 1.5 }), "composition.tau"),
            (
                EnsembleSpec::new(
                    3,
                    0,
                    Composition::Dilute {
                        entry: ScalarDensity::Point { value: 1.0 },
                        keep: 1.2,
                    },
                ),
                "composition.keep",
            ),
        ];
        for (s, field) in bad {
            match s.sample() {
                Err(Error::InvalidSpec { field: f, .. }) => assert_eq!(f, field),
                other => panic!("expected invalid spec, got {other:?}"),
            }
        }
    }

    #[test]
    fn antisymmetric_members_are_exactly_antisymmetric() {
        let s = EnsembleSpec::new(
            3,
            4,
            Composition::Antisymmetric {
                entry: ScalarDensity::Gaussian { mean: 0.3, variance: 2.0 },
            },
        );
        let m = s.sample().unwrap();
        assert_eq!(m.add(&m.transpose()).unwrap(), RealMatrix::zeros(3));
    }

    #[test]
    fn members_are_pure_functions_of_spec_and_index() {
        let s = EnsembleSpec::new(
            30,
            123,
            Composition::DiagPlusAntagonistic {
                diag: ScalarDensity::Uniform { lo: -6.0, hi: -4.0 },
                pairs: PairDensity::DecayingSquares { c: 50.0, p: 8.0 },
            },
        );
        assert_eq!(s.sample_nth(3).unwrap(), s.sample_nth(3).unwrap());
        assert_ne!(s.sample_nth(3).unwrap(), s.sample_nth(4).unwrap());
        assert_ne!(s.sample().unwrap(), s.with_seed(124).sample().unwrap());
    }
}
