//! Finite-size checks of the elliptic law, the dilute circular law, and the
//! strip-width behaviour of decaying-square ensembles.

use std::f64::consts::PI;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matgen::{Composition, EnsembleSpec, PairDensity, ScalarDensity};
use crate::spectral::{eigenvalues, Spectrum};

/// Ellipse inflation used by the inside-fraction test.
pub const DEFAULT_ETA: f64 = 0.05;
/// Minimum inside fraction for a spectrum to count as elliptic.
pub const INSIDE_THRESHOLD: f64 = 0.97;
/// Asymptotic 1% critical value of the Kolmogorov-Smirnov statistic times `sqrt(n)`.
pub const KS_CRITICAL_1PCT: f64 = 1.63;
pub const KS_SLACK: f64 = 2.0;

/// Pair correlation after normalizing the marginal variance to one,
/// `E[xy] / E[x^2]`, in closed form.
pub fn rho_from_density(d: &PairDensity) -> Result<f64> {
    match *d {
        PairDensity::GaussianAntagonistic => Ok(-2.0 / PI),
        PairDensity::UniformAntagonistic => Ok(-3.0 / 4.0),
        PairDensity::TwoInterval { w } => Ok(-3.0 / (3.0 + w * w)),
        PairDensity::GapUniform { lo, hi } => {
            let m = d.moments(0, 1);
            if m.var == 0.0 || lo == hi {
                return Err(Error::ZeroVariance);
            }
            Ok(-m.theta / m.var)
        }
        PairDensity::DecayingSquares { .. } => Err(Error::IndexDependentDensity),
    }
}

/// Limiting support `x^2/(1+rho)^2 + y^2/(1-rho)^2 <= 1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EllipseModel {
    pub rho: f64,
}

impl EllipseModel {
    pub fn new(rho: f64) -> Result<Self> {
        if !(rho.abs() <= 1.0) {
            return Err(Error::InvalidArgument(format!("|rho| must be <= 1, got {rho}")));
        }
        Ok(EllipseModel { rho })
    }

    pub fn semi_axes(&self) -> (f64, f64) {
        (1.0 + self.rho, 1.0 - self.rho)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FitReport {
    pub rho: f64,
    pub eta: f64,
    pub n: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    /// Fraction of eigenvalues inside the ellipse inflated by `1 + eta`.
    pub inside_fraction: f64,
    /// KS distance between the normalized squared radii and uniform `[0, 1]`
    /// (or, for a collapsed ellipse, between the projected coordinate and the
    /// semicircle law).
    pub radial_ks: f64,
    pub ks_threshold: f64,
}

impl FitReport {
    pub fn passes(&self) -> bool {
        self.inside_fraction >= INSIDE_THRESHOLD && self.radial_ks <= self.ks_threshold
    }
}

/// Compares a spectrum, already scaled to unit entry variance and `1/sqrt(n)`,
/// with the uniform law on the ellipse of `model`.
pub fn elliptic_fit(s: &Spectrum, model: &EllipseModel, eta: f64) -> Result<FitReport> {
    if s.is_empty() {
        return Err(Error::EmptySpectrum);
    }
    if !(eta >= 0.0 && eta.is_finite()) {
        return Err(Error::InvalidArgument("eta must be finite and >= 0".into()));
    }
    let (a, b) = model.semi_axes();
    let grow = 1.0 + eta;
    let inside;
    let mut stats: Vec<f64>;
    let cdf: fn(f64) -> f64;
    if a > 0.0 && b > 0.0 {
        inside = s
            .eigenvalues
            .iter()
            .filter(|z| (z.re / (a * grow)).powi(2) + (z.im / (b * grow)).powi(2) <= 1.0)
            .count();
        stats = s.eigenvalues.iter().map(|z| (z.re / a).powi(2) + (z.im / b).powi(2)).collect();
        cdf = |u| u.clamp(0.0, 1.0);
    } else {
        // Collapsed ellipse: project onto the surviving axis.
        let project = |z: &num_complex::Complex64| if a > 0.0 { z.re / a } else { z.im / b };
        inside = s.eigenvalues.iter().filter(|z| project(z).abs() <= grow).count();
        stats = s.eigenvalues.iter().map(project).collect();
        cdf = semicircle_cdf;
    }
    stats.sort_by(f64::total_cmp);
    let n = stats.len();
    let nf = n as f64;
    let radial_ks = stats.iter().enumerate().fold(0.0f64, |d, (k, &u)| {
        let f = cdf(u);
        d.max((k + 1) as f64 / nf - f).max(f - k as f64 / nf)
    });
    Ok(FitReport {
        rho: model.rho,
        eta,
        n,
        seed: None,
        inside_fraction: inside as f64 / nf,
        radial_ks,
        ks_threshold: KS_SLACK * KS_CRITICAL_1PCT / nf.sqrt(),
    })
}

fn semicircle_cdf(t: f64) -> f64 {
    let t = t.clamp(-1.0, 1.0);
    0.5 + (t * (1.0 - t * t).sqrt() + t.asin()) / PI
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CircleCheck {
    /// 0.99 quantile of `|lambda|`.
    pub empirical_radius: f64,
    /// `sigma sqrt(n Q)`.
    pub predicted_radius: f64,
    /// `None` when the predicted radius is zero.
    pub ratio: Option<f64>,
}

/// Nearest-rank quantile of the eigenvalue moduli.
pub fn modulus_quantile(s: &Spectrum, q: f64) -> f64 {
    let mut r: Vec<f64> = s.eigenvalues.iter().map(|z| z.norm()).collect();
    if r.is_empty() {
        return 0.0;
    }
    r.sort_by(f64::total_cmp);
    let k = ((q * r.len() as f64).ceil() as usize).clamp(1, r.len());
    r[k - 1]
}

/// Compares the spectral radius of member 0 of a dilute ensemble with the
/// circular-law radius `sigma sqrt(n Q)`.
pub fn circular_radius_check(spec: &EnsembleSpec) -> Result<CircleCheck> {
    spec.validate()?;
    let Composition::Dilute { entry, keep } = spec.composition else {
        return Err(Error::spec("composition", "circular radius check needs a dilute ensemble"));
    };
    let s = eigenvalues(&spec.sample()?)?;
    let empirical_radius = modulus_quantile(&s, 0.99);
    let predicted_radius = entry.variance().sqrt() * (spec.n as f64 * keep).sqrt();
    Ok(CircleCheck {
        empirical_radius,
        predicted_radius,
        ratio: (predicted_radius > 0.0).then(|| empirical_radius / predicted_radius),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WidthRow {
    pub n: usize,
    pub seed: u64,
    /// `max Re lambda - min Re lambda`.
    pub width: f64,
    pub mean_re: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WidthTrend {
    pub rows: Vec<WidthRow>,
}

impl WidthTrend {
    /// `(n, mean width over seeds)` in the order of the n-list.
    pub fn mean_widths(&self) -> Vec<(usize, f64)> {
        let mut out: Vec<(usize, f64, usize)> = Vec::new();
        for r in &self.rows {
            match out.iter_mut().find(|(n, _, _)| *n == r.n) {
                Some(e) => {
                    e.1 += r.width;
                    e.2 += 1;
                }
                None => out.push((r.n, r.width, 1)),
            }
        }
        out.into_iter().map(|(n, w, c)| (n, w / c as f64)).collect()
    }

    /// Each mean width is at most `1 + slack` times the previous one.
    pub fn non_increasing(&self, slack: f64) -> bool {
        self.mean_widths().windows(2).all(|w| w[1].1 <= w[0].1 * (1.0 + slack))
    }

    pub fn mean_real_part(&self) -> f64 {
        self.rows.iter().map(|r| r.mean_re).sum::<f64>() / self.rows.len() as f64
    }
}

/// Real-part width of member 0 of `base` resized to each `n`, for each seed.
pub fn width_trend(base: &EnsembleSpec, n_list: &[usize], seeds: &[u64]) -> Result<WidthTrend> {
    if n_list.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::InvalidArgument("n-list must be strictly increasing".into()));
    }
    let jobs: Vec<(usize, u64)> = n_list.iter().flat_map(|&n| seeds.iter().map(move |&s| (n, s))).collect();
    let rows = jobs
        .par_iter()
        .map(|&(n, seed)| {
            let s = eigenvalues(&base.with_n(n).with_seed(seed).sample()?)?;
            let (lo, hi) = s.real_range().ok_or(Error::EmptySpectrum)?;
            Ok(WidthRow {
                n,
                seed,
                width: hi - lo,
                mean_re: s.sum().re / n as f64,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(WidthTrend { rows })
}

/// Width trend of the decaying-squares antagonistic ensemble, optionally
/// shifted by a random diagonal.
pub fn strip_width_trend(
    c: f64,
    p: f64,
    diag: Option<ScalarDensity>,
    n_list: &[usize],
    seeds: &[u64],
) -> Result<WidthTrend> {
    let pairs = PairDensity::DecayingSquares { c, p };
    let composition = match diag {
        Some(diag) => Composition::DiagPlusAntagonistic { diag, pairs },
        None => Composition::Antagonistic { pairs },
    };
    let first = n_list.first().copied().unwrap_or(1);
    width_trend(&EnsembleSpec::new(first, 0, composition), n_list, seeds)
}
