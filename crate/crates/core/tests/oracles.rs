//! Independent reference implementations checked against the fast paths.

use antagonistic_core::exact::{
    determinant, expected_char_poly, matching_sums, matching_sums_by_enumeration, pfaffian,
    pfaffian_by_matchings, ThetaArray,
};
use antagonistic_core::matgen::{Composition, EnsembleSpec, PairDensity, ScalarDensity};
use antagonistic_core::perturb::char_poly_eps2_coefficient;
use antagonistic_core::rng;
use antagonistic_core::RealMatrix;
use rand::Rng;

fn cofactor_det(m: &[Vec<f64>]) -> f64 {
    let n = m.len();
    if n == 0 {
        return 1.0;
    }
    if n == 1 {
        return m[0][0];
    }
    (0..n)
        .map(|col| {
            let minor: Vec<Vec<f64>> = m[1..]
                .iter()
                .map(|row| row.iter().enumerate().filter(|&(j, _)| j != col).map(|(_, &v)| v).collect())
                .collect();
            let sign = if col % 2 == 0 { 1.0 } else { -1.0 };
            sign * m[0][col] * cofactor_det(&minor)
        })
        .sum()
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    fn rec(prefix: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Vec<usize>>) {
        if prefix.len() == used.len() {
            out.push(prefix.clone());
            return;
        }
        for v in 0..used.len() {
            if !used[v] {
                used[v] = true;
                prefix.push(v);
                rec(prefix, used, out);
                prefix.pop();
                used[v] = false;
            }
        }
    }
    let mut out = Vec::new();
    rec(&mut Vec::new(), &mut vec![false; n], &mut out);
    out
}

fn sign(perm: &[usize]) -> f64 {
    let mut inversions = 0;
    for i in 0..perm.len() {
        for j in i + 1..perm.len() {
            if perm[i] > perm[j] {
                inversions += 1;
            }
        }
    }
    if inversions % 2 == 0 {
        1.0
    } else {
        -1.0
    }
}

/// `E[det(z I - A)]` coefficients by the Leibniz expansion, using only that pairs are
/// independent, zero-mean, with `E[a_ij a_ji] = -theta_ij`.
fn leibniz_expected_char_poly(theta: &ThetaArray) -> Vec<f64> {
    let n = theta.n();
    let mut coeffs = vec![0.0; n + 1];
    for perm in permutations(n) {
        let mut fixed = 0;
        let mut weight = 1.0;
        for i in 0..n {
            let j = perm[i];
            if j == i {
                fixed += 1;
            } else if perm[j] == i {
                // transposition (i j): (-a_ij)(-a_ji) has mean -theta_ij; count it once
                if i < j {
                    weight *= -theta.get(i, j);
                }
            } else {
                // a pair appears with a single entry, which has zero mean
                weight = 0.0;
                break;
            }
        }
        coeffs[fixed] += sign(&perm) * weight;
    }
    coeffs
}

#[test]
fn lu_determinant_matches_cofactor_expansion() {
    let mut r = rng::stream(11, 0);
    for n in 1..=7 {
        for _ in 0..5 {
            let rows: Vec<Vec<f64>> = (0..n).map(|_| (0..n).map(|_| r.random_range(-3.0..3.0)).collect()).collect();
            let m = RealMatrix::from_rows(&rows).unwrap();
            let reference = cofactor_det(&rows);
            let got = determinant(&m);
            assert!((got - reference).abs() <= 1e-10 * (1.0 + reference.abs()), "n={n}: {got} vs {reference}");
        }
    }
}

#[test]
fn expected_char_poly_matches_leibniz_expansion() {
    let mut r = rng::stream(12, 0);
    for n in 1..=6 {
        let theta = ThetaArray::from_fn(n, |_, _| r.random_range(0.0..2.0)).unwrap();
        let reference = leibniz_expected_char_poly(&theta);
        let poly = expected_char_poly(&theta).unwrap();
        assert_eq!(poly.degree(), n);
        for (k, want) in reference.iter().enumerate() {
            let got = poly.coefficient(k);
            assert!((got - want).abs() <= 1e-12 * (1.0 + want.abs()), "n={n} z^{k}: {got} vs {want}");
        }
    }
}

#[test]
fn unit_theta_n4_polynomial() {
    let poly = expected_char_poly(&ThetaArray::constant(4, 1.0).unwrap()).unwrap();
    let want = [3.0, 0.0, 6.0, 0.0, 1.0];
    for (k, w) in want.iter().enumerate() {
        assert_eq!(poly.coefficient(k), *w);
    }
}

#[test]
fn dp_and_enumeration_agree() {
    // integer weights: sums are exact in both paths
    for n in 0..=10 {
        let t = ThetaArray::from_fn(n, |i, j| ((i * 7 + j * 3) % 5) as f64).unwrap();
        assert_eq!(matching_sums(&t).unwrap(), matching_sums_by_enumeration(&t).unwrap(), "n={n}");
    }
    let mut r = rng::stream(13, 0);
    for n in 2..=10 {
        let t = ThetaArray::from_fn(n, |_, _| r.random_range(0.0..1.5)).unwrap();
        let dp = matching_sums(&t).unwrap();
        let brute = matching_sums_by_enumeration(&t).unwrap();
        for (a, b) in dp.iter().zip(&brute) {
            assert!((a - b).abs() <= 1e-12 * (1.0 + b.abs()), "n={n}: {a} vs {b}");
        }
    }
}

#[test]
fn pfaffian_elimination_matches_matching_expansion() {
    let spec = EnsembleSpec::new(
        2,
        14,
        Composition::Antisymmetric { entry: ScalarDensity::Gaussian { mean: 0.0, variance: 1.0 } },
    );
    for n in (2..=10).step_by(2) {
        for idx in 0..10 {
            let a = spec.with_n(n).sample_nth(idx).unwrap();
            let fast = pfaffian(&a);
            let slow = pfaffian_by_matchings(&a).unwrap();
            assert!((fast - slow).abs() <= 1e-10 * (1.0 + slow.abs()), "n={n}: {fast} vs {slow}");
        }
    }
}

/// `det(z I - D - eps A)` sampled on an eps stencil isolates the eps and eps^2 coefficients.
#[test]
fn eps_expansion_of_the_characteristic_polynomial() {
    let mut r = rng::stream(15, 0);
    let pairs = PairDensity::UniformAntagonistic;
    for n in 2..=6 {
        let spec = EnsembleSpec::new(n, 15, Composition::Antagonistic { pairs });
        let a = spec.sample_nth(n as u64).unwrap();
        let d: Vec<f64> = (0..n).map(|_| r.random_range(-2.0..2.0)).collect();
        let z: f64 = r.random_range(-3.0..3.0);
        let p = |eps: f64| {
            let rows: Vec<Vec<f64>> = (0..n)
                .map(|i| {
                    (0..n)
                        .map(|j| (if i == j { z - d[i] } else { 0.0 }) - eps * a[(i, j)])
                        .collect()
                })
                .collect();
            cofactor_det(&rows)
        };
        // p is a polynomial of degree n in eps; the centred stencils cancel odd/even parts.
        let h: f64 = 1e-2;
        let p0 = p(0.0);
        let linear = (8.0 * (p(h) - p(-h)) - (p(2.0 * h) - p(-2.0 * h))) / (12.0 * h);
        let quad = (-p(2.0 * h) + 16.0 * p(h) - 30.0 * p0 + 16.0 * p(-h) - p(-2.0 * h)) / (24.0 * h * h);
        let want = char_poly_eps2_coefficient(&d, &a, z);
        let scale = 1.0 + want.abs() + p0.abs();
        assert!(linear.abs() <= 1e-6 * scale, "n={n}: linear term {linear}");
        assert!((quad - want).abs() <= 1e-5 * scale, "n={n}: {quad} vs {want}");
    }
}
