//! Figure presets. Panel `k` of a figure is member `k` of its ensemble under
//! the master seed, so every panel has its own random stream.

use std::io::Write;

use antagonistic_core::matgen::{Composition, EnsembleSpec, PairDensity, ScalarDensity};
use antagonistic_core::spectral::{bendixson_box, eigenvalues, stability_report, BendixsonBox, StabilityReport, Spectrum};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::config::ExperimentConfig;
use crate::error::CliResult;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum FigureId {
    Fig1,
    Fig2,
    Fig3,
    Fig4,
    Fig5,
}

impl FigureId {
    pub const ALL: [FigureId; 5] = [FigureId::Fig1, FigureId::Fig2, FigureId::Fig3, FigureId::Fig4, FigureId::Fig5];

    pub fn name(self) -> &'static str {
        match self {
            FigureId::Fig1 => "fig1",
            FigureId::Fig2 => "fig2",
            FigureId::Fig3 => "fig3",
            FigureId::Fig4 => "fig4",
            FigureId::Fig5 => "fig5",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Panel {
    pub label: String,
    /// Index of the random stream under the master seed.
    pub stream: u64,
    pub ensemble: EnsembleSpec,
}

const DECAYING: PairDensity = PairDensity::DecayingSquares { c: 50.0, p: 8.0 };

fn diag_plus_antisym(g: f64) -> Composition {
    Composition::DiagPlusAntisym {
        diag: ScalarDensity::Uniform { lo: -10.0, hi: -2.0 },
        entry: ScalarDensity::Uniform { lo: -4.0, hi: 4.0 },
        g,
    }
}

pub fn fig5_composition() -> Composition {
    Composition::SmallSymBigAntisym {
        diag: ScalarDensity::Uniform { lo: -10.0, hi: -5.0 },
        sym: ScalarDensity::Uniform { lo: -30.0, hi: 30.0 },
        antisym: ScalarDensity::Uniform { lo: -10.0, hi: 10.0 },
    }
}

/// Caption parameters, with `g_list`, `n_list` and `n` overridable from a config.
pub fn panels(id: FigureId, seed: u64, config: &ExperimentConfig) -> Vec<Panel> {
    let n_list = |default: &[usize]| config.n_list.clone().unwrap_or_else(|| default.to_vec());
    let specs: Vec<(String, EnsembleSpec)> = match id {
        FigureId::Fig1 => {
            let n = config.n.unwrap_or(500);
            config
                .g_list
                .clone()
                .unwrap_or_else(|| vec![0.01, 0.08, 0.5])
                .into_iter()
                .map(|g| (format!("g={g}"), EnsembleSpec::new(n, seed, diag_plus_antisym(g))))
                .collect()
        }
        FigureId::Fig2 => n_list(&[250, 500, 750])
            .into_iter()
            .map(|n| (format!("n={n}"), EnsembleSpec::new(n, seed, diag_plus_antisym(1.0))))
            .collect(),
        FigureId::Fig3 => n_list(&[400, 600, 800])
            .into_iter()
            .map(|n| (format!("n={n}"), EnsembleSpec::new(n, seed, Composition::Antagonistic { pairs: DECAYING })))
            .collect(),
        FigureId::Fig4 => n_list(&[400, 600, 800])
            .into_iter()
            .map(|n| {
                let comp = Composition::DiagPlusAntagonistic {
                    diag: ScalarDensity::Uniform { lo: -6.0, hi: -4.0 },
                    pairs: DECAYING,
                };
                (format!("n={n}"), EnsembleSpec::new(n, seed, comp))
            })
            .collect(),
        FigureId::Fig5 => {
            let n = config.n.unwrap_or(800);
            vec![(format!("n={n}"), EnsembleSpec::new(n, seed, fig5_composition()))]
        }
    };
    specs
        .into_iter()
        .enumerate()
        .map(|(k, (label, ensemble))| Panel { label, stream: k as u64, ensemble })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PanelReport {
    #[serde(flatten)]
    pub panel: Panel,
    pub stability: StabilityReport,
    pub bendixson: BendixsonBox,
    pub mean_real_part: f64,
}

/// JSON sidecar written next to the point cloud.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FigureReport {
    pub figure: FigureId,
    pub master_seed: u64,
    pub panels: Vec<PanelReport>,
}

pub struct FigureData {
    pub report: FigureReport,
    pub spectra: Vec<Spectrum>,
}

impl FigureData {
    pub fn rows(&self) -> usize {
        self.spectra.iter().map(Spectrum::len).sum()
    }

    /// `re,im,label`, panels in order.
    pub fn write_csv<W: Write>(&self, w: W) -> std::io::Result<()> {
        let panels = self.report.panels.iter().zip(&self.spectra).map(|(p, s)| (p.panel.label.as_str(), s));
        antagonistic_core::export::write_labelled_points_csv(w, panels)
    }
}

/// Panels run in parallel and are merged in panel order.
pub fn run_figure(id: FigureId, seed: u64, config: &ExperimentConfig) -> CliResult<FigureData> {
    let results = panels(id, seed, config)
        .into_par_iter()
        .map(|panel| -> CliResult<(PanelReport, Spectrum)> {
            let m = panel.ensemble.sample_nth(panel.stream)?;
            let s = eigenvalues(&m)?;
            let report = PanelReport {
                stability: stability_report(&s)?,
                bendixson: bendixson_box(&m)?,
                mean_real_part: s.sum().re / s.len() as f64,
                panel,
            };
            Ok((report, s))
        })
        .collect::<CliResult<Vec<_>>>()?;
    let (panels, spectra) = results.into_iter().unzip();
    Ok(FigureData {
        report: FigureReport { figure: id, master_seed: seed, panels },
        spectra,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn presets_follow_the_captions() {
        let c = ExperimentConfig::default();
        let f1 = panels(FigureId::Fig1, 0, &c);
        assert_eq!(f1.len(), 3);
        assert!(f1.iter().all(|p| p.ensemble.n == 500));
        assert_eq!(panels(FigureId::Fig2, 0, &c).iter().map(|p| p.ensemble.n).collect::<Vec<_>>(), [250, 500, 750]);
        assert_eq!(panels(FigureId::Fig4, 0, &c).iter().map(|p| p.stream).collect::<Vec<_>>(), [0, 1, 2]);
        assert_eq!(panels(FigureId::Fig5, 0, &c)[0].ensemble.n, 800);
    }

    #[test]
    fn config_overrides_presets() {
        let c = ExperimentConfig {
            g_list: Some(vec![2.0]),
            n: Some(20),
            ..Default::default()
        };
        let f1 = panels(FigureId::Fig1, 3, &c);
        assert_eq!(f1.len(), 1);
        assert_eq!((f1[0].ensemble.n, f1[0].ensemble.seed, f1[0].label.as_str()), (20, 3, "g=2"));
    }
}
