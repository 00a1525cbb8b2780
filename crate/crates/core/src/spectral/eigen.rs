//! Eigenvalues of dense real non-symmetric matrices.
//!
//! Balancing by powers of two, Householder reduction to upper Hessenberg
//! form, then the Francis implicit double-shift QR iteration with
//! small-subdiagonal deflation. Eigenvectors are never formed.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::matrix::RealMatrix;

/// Total QR sweeps allowed per unit of dimension.
const SWEEPS_PER_ROW: usize = 50;

pub(crate) struct RawEigen {
    pub values: Vec<Complex64>,
    /// Largest subdiagonal entry set to zero at deflation, relative to the
    /// norm of the Hessenberg matrix.
    pub neglected: f64,
}

pub(crate) fn eigenvalues_raw(m: &RealMatrix) -> Result<RawEigen> {
    let n = m.n();
    if n == 0 {
        return Ok(RawEigen {
            values: Vec::new(),
            neglected: 0.0,
        });
    }
    let mut a: Vec<Vec<f64>> = m.rows();
    balance(&mut a);
    hessenberg(&mut a);
    hqr(&mut a, m.frobenius_norm())
}

fn balance(a: &mut [Vec<f64>]) {
    const RADIX: f64 = 2.0;
    const SQRDX: f64 = RADIX * RADIX;
    let n = a.len();
    let mut done = false;
    while !done {
        done = true;
        for i in 0..n {
            let mut r = 0.0;
            let mut c = 0.0;
            for j in 0..n {
                if j != i {
                    c += a[j][i].abs();
                    r += a[i][j].abs();
                }
            }
            if c != 0.0 && r != 0.0 {
                let mut g = r / RADIX;
                let mut f = 1.0;
                let s = c + r;
                while c < g {
                    f *= RADIX;
                    c *= SQRDX;
                }
                g = r * RADIX;
                while c > g {
                    f /= RADIX;
                    c /= SQRDX;
                }
                if (c + r) / f < 0.95 * s {
                    done = false;
                    let g = 1.0 / f;
                    for v in a[i].iter_mut() {
                        *v *= g;
                    }
                    for row in a.iter_mut() {
                        row[i] *= f;
                    }
                }
            }
        }
    }
}

/// Orthogonal similarity to upper Hessenberg form.
fn hessenberg(a: &mut [Vec<f64>]) {
    let n = a.len();
    if n < 3 {
        return;
    }
    let high = n - 1;
    let mut ort = vec![0.0; n];
    let mut f = vec![0.0; n];
    for m in 1..high {
        let scale: f64 = (m..=high).map(|i| a[i][m - 1].abs()).sum();
        if scale == 0.0 {
            continue;
        }
        let mut h = 0.0;
        for i in (m..=high).rev() {
            ort[i] = a[i][m - 1] / scale;
            h += ort[i] * ort[i];
        }
        let mut g = h.sqrt();
        if ort[m] > 0.0 {
            g = -g;
        }
        h -= ort[m] * g;
        ort[m] -= g;

        // Left update (I - u u^T / h) A, accumulated row by row for locality.
        f.iter_mut().for_each(|v| *v = 0.0);
        for i in (m..=high).rev() {
            let oi = ort[i];
            for (fj, aij) in f[m..].iter_mut().zip(&a[i][m..]) {
                *fj += oi * aij;
            }
        }
        for fj in f[m..].iter_mut() {
            *fj /= h;
        }
        for i in m..=high {
            let oi = ort[i];
            for (aij, fj) in a[i][m..].iter_mut().zip(&f[m..]) {
                *aij -= fj * oi;
            }
        }
        for row in a.iter_mut() {
            let mut f = 0.0;
            for j in (m..=high).rev() {
                f += ort[j] * row[j];
            }
            f /= h;
            for j in m..=high {
                row[j] -= f * ort[j];
            }
        }
        a[m][m - 1] = scale * g;
        for row in a.iter_mut().skip(m + 1) {
            row[m - 1] = 0.0;
        }
    }
}

fn hqr(a: &mut [Vec<f64>], input_norm: f64) -> Result<RawEigen> {
    let n = a.len();
    let eps = f64::EPSILON;
    let mut wri = vec![Complex64::new(0.0, 0.0); n];
    let mut anorm = 0.0;
    for (i, row) in a.iter().enumerate() {
        for v in &row[i.saturating_sub(1)..] {
            anorm += v.abs();
        }
    }
    let cap = SWEEPS_PER_ROW * n;
    let mut total = 0usize;
    let mut neglected: f64 = 0.0;

    let mut nn = n as isize - 1;
    let mut t = 0.0;
    while nn >= 0 {
        let mut its = 0usize;
        loop {
            let nu = nn as usize;
            // Look for a single small subdiagonal element.
            let mut l = nu;
            while l > 0 {
                let mut s = a[l - 1][l - 1].abs() + a[l][l].abs();
                if s == 0.0 {
                    s = anorm;
                }
                if a[l][l - 1].abs() <= eps * s {
                    neglected = neglected.max(a[l][l - 1].abs());
                    a[l][l - 1] = 0.0;
                    break;
                }
                l -= 1;
            }
            let mut x = a[nu][nu];
            if l == nu {
                wri[nu] = Complex64::new(x + t, 0.0);
                nn -= 1;
            } else {
                let mut y = a[nu - 1][nu - 1];
                let mut w = a[nu][nu - 1] * a[nu - 1][nu];
                if l == nu - 1 {
                    let p = 0.5 * (y - x);
                    let q = p * p + w;
                    let mut z = q.abs().sqrt();
                    x += t;
                    if q >= 0.0 {
                        z = p + z.copysign(p);
                        wri[nu - 1] = Complex64::new(x + z, 0.0);
                        wri[nu] = Complex64::new(if z != 0.0 { x - w / z } else { x + z }, 0.0);
                    } else {
                        wri[nu] = Complex64::new(x + p, -z);
                        wri[nu - 1] = wri[nu].conj();
                    }
                    nn -= 2;
                } else {
                    if total >= cap {
                        return Err(Error::NoConvergence {
                            iterations: total,
                            n,
                            norm: input_norm,
                        });
                    }
                    if its > 0 && its % 10 == 0 {
                        // Exceptional shift.
                        t += x;
                        for (i, row) in a.iter_mut().enumerate().take(nu + 1) {
                            row[i] -= x;
                        }
                        let s = a[nu][nu - 1].abs() + a[nu - 1][nu - 2].abs();
                        x = 0.75 * s;
                        y = x;
                        w = -0.4375 * s * s;
                    }
                    its += 1;
                    total += 1;
                    francis_step(a, l, nu, x, y, w);
                }
            }
            if !((l as isize) < nn - 1) {
                break;
            }
        }
    }
    let scale = if anorm > 0.0 { anorm } else { 1.0 };
    Ok(RawEigen {
        values: wri,
        neglected: neglected / scale,
    })
}

/// One implicit double-shift QR sweep on the active block `l..=nn`.
fn francis_step(a: &mut [Vec<f64>], l: usize, nn: usize, x: f64, y: f64, w: f64) {
    let eps = f64::EPSILON;
    let (mut p, mut q, mut r);
    // Find two consecutive small subdiagonal elements.
    let mut m = nn - 2;
    loop {
        let z = a[m][m];
        let r0 = x - z;
        let s0 = y - z;
        p = (r0 * s0 - w) / a[m + 1][m] + a[m][m + 1];
        q = a[m + 1][m + 1] - z - r0 - s0;
        r = a[m + 2][m + 1];
        let s = p.abs() + q.abs() + r.abs();
        p /= s;
        q /= s;
        r /= s;
        if m == l {
            break;
        }
        let u = a[m][m - 1].abs() * (q.abs() + r.abs());
        let v = p.abs() * (a[m - 1][m - 1].abs() + z.abs() + a[m + 1][m + 1].abs());
        if u <= eps * v {
            break;
        }
        m -= 1;
    }
    for i in m..nn - 1 {
        a[i + 2][i] = 0.0;
        if i != m {
            a[i + 2][i - 1] = 0.0;
        }
    }
    let mut xs = 0.0;
    for k in m..nn {
        if k != m {
            p = a[k][k - 1];
            q = a[k + 1][k - 1];
            r = if k + 1 != nn { a[k + 2][k - 1] } else { 0.0 };
            xs = p.abs() + q.abs() + r.abs();
            if xs != 0.0 {
                p /= xs;
                q /= xs;
                r /= xs;
            }
        }
        let s = (p * p + q * q + r * r).sqrt().copysign(p);
        if s == 0.0 {
            continue;
        }
        if k == m {
            if l != m {
                a[k][k - 1] = -a[k][k - 1];
            }
        } else {
            a[k][k - 1] = -s * xs;
        }
        p += s;
        let xk = p / s;
        let yk = q / s;
        let zk = r / s;
        q /= p;
        r /= p;
        for j in k..=nn {
            let mut pj = a[k][j] + q * a[k + 1][j];
            if k + 1 != nn {
                pj += r * a[k + 2][j];
                a[k + 2][j] -= pj * zk;
            }
            a[k + 1][j] -= pj * yk;
            a[k][j] -= pj * xk;
        }
        let mmin = nn.min(k + 3);
        for row in a.iter_mut().take(mmin + 1).skip(l) {
            let mut pi = xk * row[k] + yk * row[k + 1];
            if k + 1 != nn {
                pi += zk * row[k + 2];
                row[k + 2] -= pi * r;
            }
            row[k + 1] -= pi * q;
            row[k] -= pi;
        }
    }
}
