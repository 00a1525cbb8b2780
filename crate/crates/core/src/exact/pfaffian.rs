use crate::error::{Error, Result};
use crate::matrix::RealMatrix;

/// Largest dimension accepted by the matching-enumeration Pfaffian.
pub const ENUMERATION_CAP: usize = 12;

/// Pfaffian of the strict upper-triangular array of `m`.
///
/// Only entries `m[i][j]` with `i < j` are read, so for a general square
/// matrix this is the Pfaffian of `U - U^T` where `U` is the strict upper
/// triangle. Odd dimensions give exactly 0. Computed by skew-symmetric
/// Gaussian elimination with pivoting (Parlett-Reid), `O(n^3)`.
pub fn pfaffian(m: &RealMatrix) -> f64 {
    let n = m.n();
    if n % 2 == 1 {
        return 0.0;
    }
    let mut a: Vec<Vec<f64>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| match i.cmp(&j) {
                    std::cmp::Ordering::Less => m[(i, j)],
                    std::cmp::Ordering::Greater => -m[(j, i)],
                    std::cmp::Ordering::Equal => 0.0,
                })
                .collect()
        })
        .collect();
    let mut pf = 1.0;
    for k in (0..n.saturating_sub(1)).step_by(2) {
        let kp = (k + 1..n)
            .max_by(|&x, &y| a[x][k].abs().total_cmp(&a[y][k].abs()).then(y.cmp(&x)))
            .unwrap();
        if kp != k + 1 {
            a.swap(k + 1, kp);
            for row in a.iter_mut() {
                row.swap(k + 1, kp);
            }
            pf = -pf;
        }
        let pivot = a[k][k + 1];
        if pivot == 0.0 {
            return 0.0;
        }
        pf *= pivot;
        if k + 2 < n {
            let tau: Vec<f64> = (k + 2..n).map(|j| a[k][j] / pivot).collect();
            let col: Vec<f64> = (k + 2..n).map(|i| a[i][k + 1]).collect();
            for (ii, i) in (k + 2..n).enumerate() {
                for (jj, j) in (k + 2..n).enumerate() {
                    a[i][j] += tau[ii] * col[jj] - col[ii] * tau[jj];
                }
            }
        }
    }
    pf
}

/// Pfaffian as the signed sum over all `(n-1)!!` perfect matchings of the
/// upper-triangular array. Exponential; capped at [`ENUMERATION_CAP`].
pub fn pfaffian_by_matchings(m: &RealMatrix) -> Result<f64> {
    let n = m.n();
    if n > ENUMERATION_CAP {
        return Err(Error::DimensionTooLarge {
            n,
            cap: ENUMERATION_CAP,
        });
    }
    if n % 2 == 1 {
        return Ok(0.0);
    }
    let upper = |i: usize, j: usize| if i < j { m[(i, j)] } else { -m[(j, i)] };
    fn expand(rest: &[usize], upper: &dyn Fn(usize, usize) -> f64) -> f64 {
        let Some((&first, tail)) = rest.split_first() else {
            return 1.0;
        };
        let mut total = 0.0;
        for (pos, &j) in tail.iter().enumerate() {
            let remaining: Vec<usize> = tail.iter().copied().filter(|&v| v != j).collect();
            let sign = if pos % 2 == 0 { 1.0 } else { -1.0 };
            total += sign * upper(first, j) * expand(&remaining, upper);
        }
        total
    }
    let all: Vec<usize> = (0..n).collect();
    Ok(expand(&all, &upper))
}
