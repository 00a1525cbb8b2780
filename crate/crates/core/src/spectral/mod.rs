//! Spectra of real matrices and the regions that contain them.

mod eigen;
mod symmetric;

pub use symmetric::symmetric_eigenvalues;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::RealMatrix;

/// Eigenvalue multiset, sorted by real part then imaginary part.
///
/// `residual` is the largest subdiagonal entry dropped during QR deflation,
/// relative to the norm of the reduced matrix: a backward-error estimate.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Spectrum {
    pub eigenvalues: Vec<Complex64>,
    pub residual: f64,
}

impl Spectrum {
    /// Wraps a list of values, sorting them into canonical order.
    pub fn from_values(mut eigenvalues: Vec<Complex64>) -> Self {
        sort_eigenvalues(&mut eigenvalues);
        Spectrum {
            eigenvalues,
            residual: 0.0,
        }
    }

    pub fn len(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn is_empty(&self) -> bool {
        self.eigenvalues.is_empty()
    }

    pub fn sum(&self) -> Complex64 {
        self.eigenvalues.iter().sum()
    }

    pub fn product(&self) -> Complex64 {
        self.eigenvalues.iter().product()
    }

    /// `(min Re, max Re)`; `None` when empty.
    pub fn real_range(&self) -> Option<(f64, f64)> {
        range(self.eigenvalues.iter().map(|z| z.re))
    }

    pub fn imag_range(&self) -> Option<(f64, f64)> {
        range(self.eigenvalues.iter().map(|z| z.im))
    }

    /// Multiplies every eigenvalue by `s`, e.g. to normalize a `1/sqrt(n)` scaling.
    pub fn scaled(&self, s: f64) -> Self {
        let mut out = self.clone();
        for z in &mut out.eigenvalues {
            *z *= s;
        }
        if s < 0.0 {
            sort_eigenvalues(&mut out.eigenvalues);
        }
        out
    }
}

fn range(it: impl Iterator<Item = f64>) -> Option<(f64, f64)> {
    it.fold(None, |acc, v| match acc {
        None => Some((v, v)),
        Some((lo, hi)) => Some((lo.min(v), hi.max(v))),
    })
}

fn sort_eigenvalues(v: &mut [Complex64]) {
    v.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
}

/// Eigenvalues of a real square matrix.
pub fn eigenvalues(m: &RealMatrix) -> Result<Spectrum> {
    let raw = eigen::eigenvalues_raw(m)?;
    let mut values = raw.values;
    sort_eigenvalues(&mut values);
    Ok(Spectrum {
        eigenvalues: values,
        residual: raw.neglected,
    })
}

/// Containment tolerance used by the strip and box checks: `1e-8 (1 + |M|_F)`.
pub fn containment_tolerance(m: &RealMatrix) -> f64 {
    1e-8 * (1.0 + m.frobenius_norm())
}

/// Rectangle `[re_lo, re_hi] x [im_lo, im_hi]` containing every eigenvalue:
/// the real side is the range of `(M + M^T)/2`, the imaginary side the range
/// of `(M - M^T)/(2i)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BendixsonBox {
    pub re_lo: f64,
    pub re_hi: f64,
    pub im_lo: f64,
    pub im_hi: f64,
}

impl BendixsonBox {
    pub fn contains(&self, z: Complex64, tol: f64) -> bool {
        self.re_lo - tol <= z.re && z.re <= self.re_hi + tol && self.im_lo - tol <= z.im && z.im <= self.im_hi + tol
    }

    pub fn width(&self) -> f64 {
        self.re_hi - self.re_lo
    }
}

pub fn bendixson_box(m: &RealMatrix) -> Result<BendixsonBox> {
    if m.n() == 0 {
        return Err(Error::EmptySpectrum);
    }
    let sym = symmetric_eigenvalues(&m.symmetric_part())?;
    // (K/i) is Hermitian with spectrum +-sigma_k, the singular values of K.
    let k = m.antisymmetric_part();
    let gram = k.transpose().matmul(&k)?;
    let top = symmetric_eigenvalues(&gram)?.last().copied().unwrap_or(0.0);
    let beta = top.max(0.0).sqrt();
    Ok(BendixsonBox {
        re_lo: sym[0],
        re_hi: sym[sym.len() - 1],
        im_lo: -beta,
        im_hi: beta,
    })
}

/// Linear-stability summary of a spectrum.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StabilityReport {
    /// `max Re lambda`.
    pub spectral_abscissa: f64,
    /// Every eigenvalue has negative real part.
    pub stable: bool,
    pub fraction_stable: f64,
    /// `(min Re, max Re)`.
    pub extreme_real: (f64, f64),
}

pub fn stability_report(s: &Spectrum) -> Result<StabilityReport> {
    let (lo, hi) = s.real_range().ok_or(Error::EmptySpectrum)?;
    let negative = s.eigenvalues.iter().filter(|z| z.re < 0.0).count();
    Ok(StabilityReport {
        spectral_abscissa: hi,
        stable: hi < 0.0,
        fraction_stable: negative as f64 / s.len() as f64,
        extreme_real: (lo, hi),
    })
}

/// Two-dimensional eigenvalue counts on a regular grid spanning the
/// bounding box of the spectrum. A degenerate side is widened to unit length.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EsdHistogram {
    pub re_range: (f64, f64),
    pub im_range: (f64, f64),
    pub re_bins: usize,
    pub im_bins: usize,
    /// Row-major `[re_bin][im_bin]`.
    pub counts: Vec<u64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct HistogramCell {
    pub re_center: f64,
    pub im_center: f64,
    pub count: u64,
}

impl EsdHistogram {
    pub fn count(&self, re_bin: usize, im_bin: usize) -> u64 {
        self.counts[re_bin * self.im_bins + im_bin]
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().sum()
    }

    pub fn cells(&self) -> impl Iterator<Item = HistogramCell> + '_ {
        let dre = (self.re_range.1 - self.re_range.0) / self.re_bins as f64;
        let dim = (self.im_range.1 - self.im_range.0) / self.im_bins as f64;
        (0..self.re_bins).flat_map(move |a| {
            (0..self.im_bins).map(move |b| HistogramCell {
                re_center: self.re_range.0 + (a as f64 + 0.5) * dre,
                im_center: self.im_range.0 + (b as f64 + 0.5) * dim,
                count: self.count(a, b),
            })
        })
    }
}

pub fn esd_histogram(s: &Spectrum, re_bins: usize, im_bins: usize) -> Result<EsdHistogram> {
    if re_bins == 0 || im_bins == 0 {
        return Err(Error::InvalidArgument("histogram bin counts must be at least 1".into()));
    }
    let widen = |(lo, hi): (f64, f64)| if hi > lo { (lo, hi) } else { (lo - 0.5, hi + 0.5) };
    let re_range = widen(s.real_range().unwrap_or((0.0, 0.0)));
    let im_range = widen(s.imag_range().unwrap_or((0.0, 0.0)));
    let bin = |v: f64, (lo, hi): (f64, f64), bins: usize| {
        let k = ((v - lo) / (hi - lo) * bins as f64).floor();
        (k.max(0.0) as usize).min(bins - 1)
    };
    let mut counts = vec![0u64; re_bins * im_bins];
    for z in &s.eigenvalues {
        counts[bin(z.re, re_range, re_bins) * im_bins + bin(z.im, im_range, im_bins)] += 1;
    }
    Ok(EsdHistogram {
        re_range,
        im_range,
        re_bins,
        im_bins,
        counts,
    })
}
