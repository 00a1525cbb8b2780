//! Experiment configuration files and the shorthand ensemble syntax.

use std::path::{Path, PathBuf};

use antagonistic_core::matgen::{Composition, EnsembleSpec, PairDensity, ScalarDensity};
use serde::{Deserialize, Serialize};

use crate::error::{CliError, CliResult};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

/// Every command-specific knob, all optional. Command-line flags take
/// precedence over these values, which take precedence over presets.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentConfig {
    pub ensemble: Option<EnsembleSpec>,
    pub n: Option<usize>,
    pub n_list: Option<Vec<usize>>,
    pub g_list: Option<Vec<f64>>,
    pub eps_grid: Option<Vec<f64>>,
    pub trials: Option<usize>,
    pub seed: Option<u64>,
    pub out: Option<PathBuf>,
    pub format: Option<Format>,
    pub functional: Option<String>,
    pub instances: Option<usize>,
    pub degenerate: Option<bool>,
    pub rho: Option<f64>,
    pub eta: Option<f64>,
}

impl ExperimentConfig {
    pub fn load(path: &Path) -> CliResult<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        serde_json::from_str(&text).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))
    }
}

/// Parses `--ensemble`: either a JSON composition object or one of
/// `gaussian`, `uniform`, `two-interval[:w]`, `decaying-squares[:c,p]`,
/// `antisymmetric`, `elliptic[:tau]`, `dilute[:keep]`.
pub fn parse_composition(text: &str) -> CliResult<Composition> {
    let text = text.trim();
    if text.starts_with('{') {
        return serde_json::from_str(text).map_err(|e| CliError::Usage(format!("ensemble JSON: {e}")));
    }
    let (name, args) = match text.split_once(':') {
        Some((name, args)) => (name, Some(args)),
        None => (text, None),
    };
    let nums = |want: usize, defaults: &[f64]| -> CliResult<Vec<f64>> {
        let Some(args) = args else { return Ok(defaults.to_vec()) };
        let v = args
            .split(',')
            .map(|s| s.trim().parse::<f64>())
            .collect::<Result<Vec<_>, _>>()
            .map_err(|e| CliError::Usage(format!("ensemble `{text}`: {e}")))?;
        if v.len() != want {
            return Err(CliError::Usage(format!("ensemble `{text}` takes {want} parameter(s)")));
        }
        Ok(v)
    };
    let pairs = |pairs| Composition::Antagonistic { pairs };
    Ok(match name {
        "gaussian" | "gaussian-antagonistic" => pairs(PairDensity::GaussianAntagonistic),
        "uniform" | "uniform-antagonistic" => pairs(PairDensity::UniformAntagonistic),
        "two-interval" => pairs(PairDensity::TwoInterval { w: nums(1, &[0.5])?[0] }),
        "decaying-squares" => {
            let v = nums(2, &[50.0, 8.0])?;
            pairs(PairDensity::DecayingSquares { c: v[0], p: v[1] })
        }
        "antisymmetric" => Composition::Antisymmetric {
            entry: ScalarDensity::Gaussian { mean: 0.0, variance: 1.0 },
        },
        "elliptic" | "elliptic-gaussian" => Composition::EllipticGaussian { tau: nums(1, &[0.0])?[0] },
        "dilute" => Composition::Dilute {
            entry: ScalarDensity::Uniform { lo: -1.0, hi: 1.0 },
            keep: nums(1, &[0.3])?[0],
        },
        other => return Err(CliError::Usage(format!("unknown ensemble `{other}`"))),
    })
}

/// Splits `0.1,0.05` style lists.
pub fn parse_list<T: std::str::FromStr>(text: &str) -> CliResult<Vec<T>>
where
    T::Err: std::fmt::Display,
{
    text.split(',')
        .map(|s| s.trim().parse::<T>().map_err(|e| CliError::Usage(format!("list `{text}`: {e}"))))
        .collect()
}

/// Ensemble from flags, then config, then `default`.
pub fn resolve_ensemble(
    flag: Option<&str>,
    n_flag: Option<usize>,
    seed: u64,
    config: &ExperimentConfig,
    default: (usize, Composition),
) -> CliResult<EnsembleSpec> {
    let composition = match flag {
        Some(text) => parse_composition(text)?,
        None => config.ensemble.map(|e| e.composition).unwrap_or(default.1),
    };
    let n = n_flag
        .or(config.n)
        .or(config.ensemble.map(|e| e.n))
        .unwrap_or(default.0);
    let spec = EnsembleSpec::new(n, seed, composition);
    spec.validate()?;
    Ok(spec)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shorthand_and_json_agree() {
        let a = parse_composition("two-interval:0.25").unwrap();
        let b = parse_composition(r#"{"kind":"antagonistic","pairs":{"kind":"two-interval","w":0.25}}"#).unwrap();
        assert_eq!(a, b);
        assert!(parse_composition("two-interval:1,2").is_err());
        assert!(parse_composition("bogus").is_err());
    }

    #[test]
    fn config_rejects_unknown_keys() {
        assert!(serde_json::from_str::<ExperimentConfig>(r#"{"seed": 3, "colour": 1}"#).is_err());
        let c: ExperimentConfig = serde_json::from_str(r#"{"seed": 3, "format": "json"}"#).unwrap();
        assert_eq!(c.seed, Some(3));
        assert_eq!(c.format, Some(Format::Json));
    }

    #[test]
    fn flags_override_config() {
        let config = ExperimentConfig {
            n: Some(7),
            ensemble: Some(EnsembleSpec::new(3, 1, Composition::EllipticGaussian { tau: 0.5 })),
            ..Default::default()
        };
        let default = (4, Composition::Antagonistic { pairs: PairDensity::GaussianAntagonistic });
        let s = resolve_ensemble(None, None, 9, &config, default).unwrap();
        assert_eq!((s.n, s.seed, s.composition), (7, 9, Composition::EllipticGaussian { tau: 0.5 }));
        let s = resolve_ensemble(Some("uniform"), Some(5), 9, &config, default).unwrap();
        assert_eq!(s.n, 5);
        assert_eq!(s.composition, Composition::Antagonistic { pairs: PairDensity::UniformAntagonistic });
    }
}
