//! Plain CSV writers for spectra, histograms, polynomials and reports.
//!
//! Floats are written with Rust's shortest round-trip formatting, so equal
//! values always produce identical bytes.

use std::io::{self, Write};

use crate::exact::PolynomialInZ;
use crate::laws::WidthTrend;
use crate::perturb::ResidualReport;
use crate::spectral::{EsdHistogram, Spectrum};

/// `index,re,im`
pub fn write_spectrum_csv<W: Write>(mut w: W, s: &Spectrum) -> io::Result<()> {
    writeln!(w, "index,re,im")?;
    for (k, z) in s.eigenvalues.iter().enumerate() {
        writeln!(w, "{k},{},{}", z.re, z.im)?;
    }
    Ok(())
}

/// `re,im,label` for several labelled spectra in order.
pub fn write_labelled_points_csv<'a, W: Write>(
    mut w: W,
    panels: impl IntoIterator<Item = (&'a str, &'a Spectrum)>,
) -> io::Result<()> {
    writeln!(w, "re,im,label")?;
    for (label, s) in panels {
        for z in &s.eigenvalues {
            writeln!(w, "{},{},{label}", z.re, z.im)?;
        }
    }
    Ok(())
}

/// `re_center,im_center,count`
pub fn write_histogram_csv<W: Write>(mut w: W, h: &EsdHistogram) -> io::Result<()> {
    writeln!(w, "re_center,im_center,count")?;
    for c in h.cells() {
        writeln!(w, "{},{},{}", c.re_center, c.im_center, c.count)?;
    }
    Ok(())
}

/// `power,coefficient`
pub fn write_polynomial_csv<W: Write>(mut w: W, p: &PolynomialInZ) -> io::Result<()> {
    writeln!(w, "power,coefficient")?;
    for (k, c) in p.coefficients.iter().enumerate() {
        writeln!(w, "{k},{c}")?;
    }
    Ok(())
}

/// `eps,residual_max,residual_min,slope`; the overall slope is repeated on
/// every row and left empty for exact predictions.
pub fn write_residual_csv<W: Write>(mut w: W, r: &ResidualReport) -> io::Result<()> {
    writeln!(w, "eps,residual_max,residual_min,slope")?;
    let slope = r.slope.map(|s| s.to_string()).unwrap_or_default();
    for row in &r.rows {
        writeln!(w, "{},{},{},{slope}", row.eps, row.residual_max, row.residual_min)?;
    }
    Ok(())
}

/// `n,seed,width`
pub fn write_width_csv<W: Write>(mut w: W, t: &WidthTrend) -> io::Result<()> {
    writeln!(w, "n,seed,width")?;
    for r in &t.rows {
        writeln!(w, "{},{},{}", r.n, r.seed, r.width)?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;

    #[test]
    fn spectrum_and_polynomial_layout() {
        let s = Spectrum::from_values(vec![Complex64::new(0.5, -1.0), Complex64::new(-2.0, 0.0)]);
        let mut out = Vec::new();
        write_spectrum_csv(&mut out, &s).unwrap();
        assert_eq!(String::from_utf8(out).unwrap(), "index,re,im\n0,-2,0\n1,0.5,-1\n");

        let mut out = Vec::new();
        write_polynomial_csv(&mut out, &PolynomialInZ { coefficients: vec![3.0, 0.0, 1.0] }).unwrap();
        assert_eq!(String::from_utf8(out).unwrap(), "power,coefficient\n0,3\n1,0\n2,1\n");
    }
}
