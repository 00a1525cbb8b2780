use crate::matrix::RealMatrix;

/// Determinant by LU factorization with partial pivoting.
pub fn determinant(m: &RealMatrix) -> f64 {
    let n = m.n();
    let mut a = m.rows();
    let mut det = 1.0;
    for k in 0..n {
        let p = (k..n).max_by(|&x, &y| a[x][k].abs().total_cmp(&a[y][k].abs()).then(y.cmp(&x))).unwrap();
        if a[p][k] == 0.0 {
            return 0.0;
        }
        if p != k {
            a.swap(p, k);
            det = -det;
        }
        let pivot = a[k][k];
        det *= pivot;
        let (top, bottom) = a.split_at_mut(k + 1);
        let prow = &top[k];
        for row in bottom.iter_mut() {
            let f = row[k] / pivot;
            if f != 0.0 {
                for (r, p) in row[k + 1..].iter_mut().zip(&prow[k + 1..]) {
                    *r -= f * p;
                }
            }
        }
    }
    det
}
