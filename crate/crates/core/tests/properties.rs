use antagonistic_core::exact::{determinant, pfaffian};
use antagonistic_core::matgen::{
    closure_transform, haar_orthogonal, is_antagonistic, Composition, EnsembleSpec, PairDensity, ScalarDensity,
    Transform,
};
use antagonistic_core::rng;
use antagonistic_core::spectral::{bendixson_box, containment_tolerance, eigenvalues};
use num_complex::Complex64;
use proptest::prelude::*;

fn pair_density() -> impl Strategy<Value = PairDensity> {
    prop_oneof![
        Just(PairDensity::GaussianAntagonistic),
        Just(PairDensity::UniformAntagonistic),
        (0.05f64..0.95).prop_map(|w| PairDensity::TwoInterval { w }),
        (0.5f64..60.0, 1.0f64..9.0).prop_map(|(c, p)| PairDensity::DecayingSquares { c, p }),
        (0.1f64..1.0, 1.5f64..4.0).prop_map(|(lo, hi)| PairDensity::GapUniform { lo, hi }),
    ]
}

fn composition() -> impl Strategy<Value = Composition> {
    let scalar = prop_oneof![
        (-5.0f64..0.0, 0.1f64..5.0).prop_map(|(lo, w)| ScalarDensity::Uniform { lo, hi: lo + w }),
        (0.1f64..3.0).prop_map(|v| ScalarDensity::Gaussian { mean: 0.0, variance: v }),
    ];
    prop_oneof![
        pair_density().prop_map(|pairs| Composition::Antagonistic { pairs }),
        scalar.clone().prop_map(|entry| Composition::Antisymmetric { entry }),
        (scalar.clone(), scalar.clone(), 0.0f64..2.0)
            .prop_map(|(diag, entry, g)| Composition::DiagPlusAntisym { diag, entry, g }),
        (scalar.clone(), pair_density()).prop_map(|(diag, pairs)| Composition::DiagPlusAntagonistic { diag, pairs }),
        (-1.0f64..=1.0).prop_map(|tau| Composition::EllipticGaussian { tau }),
        (scalar.clone(), 0.05f64..1.0).prop_map(|(entry, keep)| Composition::Dilute { entry, keep }),
        (scalar.clone(), scalar.clone(), scalar)
            .prop_map(|(diag, sym, antisym)| Composition::SmallSymBigAntisym { diag, sym, antisym }),
    ]
}

fn distance(a: &[Complex64], b: &[Complex64]) -> f64 {
    let mut used = vec![false; b.len()];
    a.iter()
        .map(|x| {
            let (k, d) = b
                .iter()
                .enumerate()
                .filter(|(k, _)| !used[*k])
                .map(|(k, y)| (k, (x - y).norm()))
                .min_by(|p, q| p.1.total_cmp(&q.1))
                .unwrap();
            used[k] = true;
            d
        })
        .fold(0.0, f64::max)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn spectra_are_closed_under_conjugation_and_sum_to_the_trace(
        comp in composition(), n in 1usize..40, seed in any::<u64>()
    ) {
        let m = EnsembleSpec::new(n, seed, comp).sample().unwrap();
        let s = eigenvalues(&m).unwrap();
        let tol = containment_tolerance(&m);
        prop_assert_eq!(s.len(), n);
        let conj: Vec<Complex64> = s.eigenvalues.iter().map(|z| z.conj()).collect();
        prop_assert!(distance(&s.eigenvalues, &conj) <= tol);
        let sum = s.sum();
        prop_assert!((sum.re - m.trace()).abs() <= tol * n as f64, "{} vs {}", sum.re, m.trace());
        prop_assert!(sum.im.abs() <= tol * n as f64);
    }

    #[test]
    fn bendixson_box_contains_every_eigenvalue(comp in composition(), n in 1usize..40, seed in any::<u64>()) {
        let m = EnsembleSpec::new(n, seed, comp).sample().unwrap();
        let b = bendixson_box(&m).unwrap();
        let tol = containment_tolerance(&m);
        for z in eigenvalues(&m).unwrap().eigenvalues {
            prop_assert!(b.contains(z, tol), "{z} outside {b:?}");
        }
    }

    #[test]
    fn diagonal_plus_antisymmetric_stays_in_the_strip(
        lo in -10.0f64..0.0, w in 0.1f64..8.0, g in 0.0f64..3.0, n in 1usize..60, seed in any::<u64>()
    ) {
        let hi = lo + w;
        let comp = Composition::DiagPlusAntisym {
            diag: ScalarDensity::Uniform { lo, hi },
            entry: ScalarDensity::Uniform { lo: -4.0, hi: 4.0 },
            g,
        };
        let m = EnsembleSpec::new(n, seed, comp).sample().unwrap();
        let tol = containment_tolerance(&m);
        for z in eigenvalues(&m).unwrap().eigenvalues {
            prop_assert!(z.re >= lo - tol && z.re <= hi + tol, "{z} outside ({lo}, {hi})");
        }
    }

    #[test]
    fn orthogonal_similarity_preserves_the_spectrum(pairs in pair_density(), n in 1usize..25, seed in any::<u64>()) {
        let a = EnsembleSpec::new(n, seed, Composition::Antagonistic { pairs }).sample().unwrap();
        let p = haar_orthogonal(n, &mut rng::stream(seed, 1));
        let b = p.transpose().matmul(&a).unwrap().matmul(&p).unwrap();
        let sa = eigenvalues(&a).unwrap();
        let sb = eigenvalues(&b).unwrap();
        // non-normal matrices amplify rounding; allow the eigenvalue condition slack
        let tol = 1e-6 * (1.0 + a.frobenius_norm());
        prop_assert!(distance(&sa.eigenvalues, &sb.eigenvalues) <= tol);
    }

    #[test]
    fn closure_transforms_preserve_antagonism(
        pairs in pair_density(), n in 2usize..15, seed in any::<u64>(), scale in prop::collection::vec(0.2f64..5.0, 15)
    ) {
        let a = EnsembleSpec::new(n, seed, Composition::Antagonistic { pairs }).sample().unwrap();
        prop_assert!(is_antagonistic(&a));
        let mut perm: Vec<usize> = (0..n).collect();
        perm.rotate_left(seed as usize % n);
        let transforms = [
            Transform::Negate,
            Transform::Transpose,
            Transform::DiagConjugate { scale: scale[..n].to_vec() },
            Transform::Permute { perm },
        ];
        for t in &transforms {
            let b = closure_transform(&a, t).unwrap();
            prop_assert!(is_antagonistic(&b), "{t:?}");
        }
    }

    #[test]
    fn pfaffian_squares_to_the_determinant(half in 1usize..6, seed in any::<u64>()) {
        let n = 2 * half;
        let comp = Composition::Antisymmetric { entry: ScalarDensity::Gaussian { mean: 0.0, variance: 1.0 } };
        let a = EnsembleSpec::new(n, seed, comp).sample().unwrap();
        let pf = pfaffian(&a);
        let det = determinant(&a);
        prop_assert!((pf * pf - det).abs() <= 1e-10 * (1.0 + det.abs()));
        // A^T negates the upper triangle and pf is homogeneous of degree n/2
        let sign = if half % 2 == 0 { 1.0 } else { -1.0 };
        prop_assert!((pfaffian(&a.transpose()) - sign * pf).abs() <= 1e-10 * (1.0 + pf.abs()));
    }

    #[test]
    fn sampling_is_a_pure_function_of_the_spec(comp in composition(), n in 1usize..30, seed in any::<u64>(), idx in 0u64..100) {
        let spec = EnsembleSpec::new(n, seed, comp);
        prop_assert_eq!(spec.sample_nth(idx).unwrap(), spec.sample_nth(idx).unwrap());
    }
}

#[test]
fn antisymmetric_spectra_have_the_expected_determinant_sign_and_zero_mode() {
    let comp = Composition::Antisymmetric { entry: ScalarDensity::Uniform { lo: -1.0, hi: 1.0 } };
    for n in 2..30 {
        let m = EnsembleSpec::new(n, 77, comp).sample().unwrap();
        if n % 2 == 0 {
            assert!(determinant(&m) > 0.0);
        } else {
            let s = eigenvalues(&m).unwrap();
            let nearest = s.eigenvalues.iter().map(|z| z.norm()).fold(f64::INFINITY, f64::min);
            assert!(nearest <= containment_tolerance(&m), "n={n}: {nearest}");
        }
    }
}
