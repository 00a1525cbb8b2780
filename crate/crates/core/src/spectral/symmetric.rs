//! Eigenvalues of real symmetric matrices: Householder tridiagonalization
//! followed by implicit QL with Wilkinson-type shifts.

use crate::error::{Error, Result};
use crate::matrix::RealMatrix;

const MAX_QL_ITERATIONS: usize = 30;

/// Ascending eigenvalues of the symmetric matrix `m`. Only the lower
/// triangle is read.
pub fn symmetric_eigenvalues(m: &RealMatrix) -> Result<Vec<f64>> {
    let n = m.n();
    let mut z = m.rows();
    let mut d = vec![0.0; n];
    let mut e = vec![0.0; n];
    tridiagonalize(&mut z, &mut d, &mut e);
    ql_implicit(&mut d, &mut e, m.frobenius_norm())?;
    d.sort_by(f64::total_cmp);
    Ok(d)
}

fn tridiagonalize(z: &mut [Vec<f64>], d: &mut [f64], e: &mut [f64]) {
    let n = z.len();
    for i in (1..n).rev() {
        let l = i - 1;
        let mut h = 0.0;
        if l > 0 {
            let scale: f64 = z[i][..i].iter().map(|v| v.abs()).sum();
            if scale == 0.0 {
                e[i] = z[i][l];
            } else {
                for k in 0..i {
                    z[i][k] /= scale;
                    h += z[i][k] * z[i][k];
                }
                let f = z[i][l];
                let g = if f >= 0.0 { -h.sqrt() } else { h.sqrt() };
                e[i] = scale * g;
                h -= f * g;
                z[i][l] = f - g;
                let mut f = 0.0;
                for j in 0..i {
                    let mut g = 0.0;
                    for k in 0..=j {
                        g += z[j][k] * z[i][k];
                    }
                    for k in j + 1..i {
                        g += z[k][j] * z[i][k];
                    }
                    e[j] = g / h;
                    f += e[j] * z[i][j];
                }
                let hh = f / (h + h);
                for j in 0..i {
                    let f = z[i][j];
                    let g = e[j] - hh * f;
                    e[j] = g;
                    for k in 0..=j {
                        z[j][k] -= f * e[k] + g * z[i][k];
                    }
                }
            }
        } else {
            e[i] = z[i][l];
        }
    }
    if n > 0 {
        e[0] = 0.0;
    }
    for (i, di) in d.iter_mut().enumerate() {
        *di = z[i][i];
    }
}

fn ql_implicit(d: &mut [f64], e: &mut [f64], norm: f64) -> Result<()> {
    let n = d.len();
    if n == 0 {
        return Ok(());
    }
    let eps = f64::EPSILON;
    for i in 1..n {
        e[i - 1] = e[i];
    }
    e[n - 1] = 0.0;
    for l in 0..n {
        let mut iter = 0;
        loop {
            let mut m = l;
            while m < n - 1 {
                let dd = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= eps * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            if iter == MAX_QL_ITERATIONS {
                return Err(Error::NoConvergence {
                    iterations: iter,
                    n,
                    norm,
                });
            }
            iter += 1;
            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = g.hypot(1.0);
            g = d[m] - d[l] + e[l] / (g + r.copysign(g));
            let (mut s, mut c, mut p) = (1.0, 1.0, 0.0);
            let mut underflow = false;
            let mut i = m;
            while i > l {
                i -= 1;
                let f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == 0.0 {
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    underflow = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
            }
            if underflow {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_cases() {
        assert_eq!(symmetric_eigenvalues(&RealMatrix::zeros(3)).unwrap(), vec![0.0; 3]);
        let d = symmetric_eigenvalues(&RealMatrix::from_diagonal(&[3.0, -1.0, 2.0])).unwrap();
        assert_eq!(d, vec![-1.0, 2.0, 3.0]);
        let m = RealMatrix::from_rows(&[[2.0, 1.0], [1.0, 2.0]]).unwrap();
        let d = symmetric_eigenvalues(&m).unwrap();
        assert!((d[0] - 1.0).abs() < 1e-14 && (d[1] - 3.0).abs() < 1e-14);
    }

    #[test]
    fn path_graph_laplacian_matches_closed_form() {
        // Eigenvalues of the n x n tridiagonal (-1, 2, -1): 2 - 2 cos(k pi / (n + 1)).
        let n = 40;
        let m = RealMatrix::from_fn(n, |i, j| match i.abs_diff(j) {
            0 => 2.0,
            1 => -1.0,
            _ => 0.0,
        });
        let got = symmetric_eigenvalues(&m).unwrap();
        for (k, v) in got.iter().enumerate() {
            let want = 2.0 - 2.0 * ((k + 1) as f64 * std::f64::consts::PI / (n + 1) as f64).cos();
            assert!((v - want).abs() < 1e-12, "{k}: {v} vs {want}");
        }
    }
}
