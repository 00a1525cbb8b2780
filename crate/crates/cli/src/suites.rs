//! `verify` suites. Every check reports a verdict and its evidence; failures
//! are data, not errors.

use antagonistic_core::exact::{
    determinant, expected_char_poly, expected_det, matching_sums, matching_sums_by_enumeration, mc_expect,
    pfaffian, pfaffian_sign, Functional, ThetaArray,
};
use antagonistic_core::laws::{circular_radius_check, elliptic_fit, rho_from_density, EllipseModel, DEFAULT_ETA};
use antagonistic_core::matgen::{
    closure_transform, is_antagonistic, pair_moments, Composition, EnsembleSpec, PairDensity, ScalarDensity,
    Transform,
};
use antagonistic_core::perturb::{predict_extremes, random_instance, verify_prediction, PerturbationInput};
use antagonistic_core::rng;
use antagonistic_core::spectral::{bendixson_box, containment_tolerance, eigenvalues, Spectrum};
use antagonistic_core::RealMatrix;
use num_complex::Complex64;
use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::error::CliResult;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    Strip,
    Bendixson,
    Perturb,
    Elliptic,
    Dilute,
    Closure,
    ExactCombinatorics,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: Value,
}

impl Check {
    fn new(name: impl Into<String>, passed: bool, detail: Value) -> Self {
        Check {
            name: name.into(),
            passed,
            detail,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub suite: Suite,
    pub seed: u64,
    pub passed: bool,
    pub checks: Vec<Check>,
}

/// Couplings and dimensions of the strip suite: the fig1/fig2 regime, n <= 500.
pub const STRIP_G: [f64; 4] = [0.01, 0.08, 0.5, 1.0];
pub const STRIP_N: [usize; 4] = [100, 200, 300, 500];

pub fn run_suite(suite: Suite, seed: u64) -> CliResult<VerifyReport> {
    let checks = match suite {
        Suite::Strip => strip(seed, &STRIP_G, &STRIP_N, 100)?,
        Suite::Bendixson => bendixson(seed)?,
        Suite::Perturb => perturb(seed, 20)?,
        Suite::Elliptic => elliptic(seed, 1000)?,
        Suite::Dilute => dilute(seed, 1024)?,
        Suite::Closure => closure(seed)?,
        Suite::ExactCombinatorics => exact_combinatorics(seed)?,
    };
    Ok(VerifyReport {
        suite,
        seed,
        passed: checks.iter().all(|c| c.passed),
        checks,
    })
}

/// Worst violation of `lo - tol <= Re z <= hi + tol`, as a nonnegative excess.
fn strip_excess(s: &Spectrum, lo: f64, hi: f64, tol: f64) -> f64 {
    s.eigenvalues
        .iter()
        .map(|z| (lo - tol - z.re).max(z.re - hi - tol))
        .fold(0.0, f64::max)
}

/// `draws` members of `D + g A` with `D ~ U(-10, -2)`, `A` antisymmetric
/// `U(-4, 4)`; draw `k` uses `g_list[k % len]` and `n_list[(k / len) % len]`.
pub fn strip(seed: u64, g_list: &[f64], n_list: &[usize], draws: usize) -> CliResult<Vec<Check>> {
    let (lo, hi) = (-10.0, -2.0);
    let outcomes = (0..draws)
        .into_par_iter()
        .map(|k| -> CliResult<(usize, f64)> {
            let g = g_list[k % g_list.len()];
            let n = n_list[(k / g_list.len()) % n_list.len()];
            let comp = Composition::DiagPlusAntisym {
                diag: ScalarDensity::Uniform { lo, hi },
                entry: ScalarDensity::Uniform { lo: -4.0, hi: 4.0 },
                g,
            };
            let m = EnsembleSpec::new(n, seed, comp).sample_nth(k as u64)?;
            let s = eigenvalues(&m)?;
            Ok((k, strip_excess(&s, lo, hi, containment_tolerance(&m))))
        })
        .collect::<CliResult<Vec<_>>>()?;
    Ok(g_list
        .iter()
        .enumerate()
        .map(|(gi, &g)| {
            let mine: Vec<&(usize, f64)> = outcomes.iter().filter(|(k, _)| k % g_list.len() == gi).collect();
            let violations = mine.iter().filter(|(_, e)| *e > 0.0).count();
            let worst = mine.iter().map(|(_, e)| *e).fold(0.0, f64::max);
            Check::new(
                format!("strip g={g}"),
                violations == 0,
                json!({"draws": mine.len(), "violations": violations, "worst_excess": worst, "strip": [lo, hi]}),
            )
        })
        .collect())
}

fn bendixson(seed: u64) -> CliResult<Vec<Check>> {
    let uni = ScalarDensity::Uniform { lo: -1.0, hi: 1.0 };
    let compositions = [
        ("antagonistic", Composition::Antagonistic { pairs: PairDensity::GaussianAntagonistic }),
        ("antisymmetric", Composition::Antisymmetric { entry: uni }),
        ("diag-plus-antisym", Composition::DiagPlusAntisym { diag: uni, entry: uni, g: 0.7 }),
        (
            "diag-plus-antagonistic",
            Composition::DiagPlusAntagonistic { diag: uni, pairs: PairDensity::TwoInterval { w: 0.5 } },
        ),
        ("elliptic-gaussian", Composition::EllipticGaussian { tau: 0.4 }),
        ("dilute", Composition::Dilute { entry: uni, keep: 0.3 }),
        ("small-sym-big-antisym", Composition::SmallSymBigAntisym { diag: uni, sym: uni, antisym: uni }),
    ];
    compositions
        .par_iter()
        .enumerate()
        .map(|(c, (name, comp))| {
            let mut worst: f64 = 0.0;
            let mut draws = 0;
            for (k, n) in [5usize, 20, 60, 150].into_iter().enumerate() {
                let m = EnsembleSpec::new(n, seed, *comp).sample_nth((c * 4 + k) as u64)?;
                let b = bendixson_box(&m)?;
                let tol = containment_tolerance(&m);
                for z in eigenvalues(&m)?.eigenvalues {
                    let excess = (b.re_lo - tol - z.re)
                        .max(z.re - b.re_hi - tol)
                        .max(b.im_lo - tol - z.im)
                        .max(z.im - b.im_hi - tol);
                    worst = worst.max(excess);
                }
                draws += 1;
            }
            Ok(Check::new(
                format!("bendixson {name}"),
                worst <= 0.0,
                json!({"draws": draws, "worst_excess": worst}),
            ))
        })
        .collect()
}

/// Default coupling grid: geometric from 0.01 down by factors of two. Larger
/// couplings are pre-asymptotic for n near 20 (eps ||A|| comparable to the gap).
pub fn default_eps_grid() -> Vec<f64> {
    (0..6).map(|k| 0.01 / f64::powi(2.0, k)).collect()
}

/// Eigenvalues of `[[d1, eps a12], [eps a21, d2]]` in closed form.
pub fn two_by_two_exact(d: [f64; 2], a12: f64, a21: f64, eps: f64) -> [f64; 2] {
    let mean = 0.5 * (d[0] + d[1]);
    let half = 0.5 * (d[0] - d[1]);
    let disc = (half * half + eps * eps * a12 * a21).sqrt();
    [mean + disc, mean - disc]
}

/// Slope fits on `instances` non-degenerate and degenerate random instances,
/// plus the closed-form 2x2 case at `eps = 1e-4`.
pub fn perturb(seed: u64, instances: usize) -> CliResult<Vec<Check>> {
    let grid = default_eps_grid();
    let mut checks = Vec::new();
    for degenerate in [false, true] {
        let reports = (0..instances)
            .into_par_iter()
            .map(|k| -> CliResult<Value> {
                let n = 3 + k % 18;
                let input = random_instance(n, seed, k as u64 + if degenerate { 1000 } else { 0 }, degenerate)?;
                let r = verify_prediction(&input, &grid)?;
                let required = r.required_slope();
                Ok(json!({"n": n, "slope": r.slope, "required": required, "passed": r.passes(required)}))
            })
            .collect::<CliResult<Vec<_>>>()?;
        let passed = reports.iter().all(|r| r["passed"] == Value::Bool(true));
        let min_slope = reports.iter().filter_map(|r| r["slope"].as_f64()).fold(f64::INFINITY, f64::min);
        let name = if degenerate { "degenerate imaginary part" } else { "non-degenerate extremes" };
        checks.push(Check::new(
            format!("perturb {name}"),
            passed,
            json!({"instances": instances, "min_slope": min_slope, "eps_grid": grid, "runs": reports}),
        ));
    }
    let eps = 1e-4;
    let (d, a12, a21) = ([-1.0, -4.0], 2.0, -3.0);
    let a = RealMatrix::from_rows(&[[0.0, a12], [a21, 0.0]])?;
    let input = PerturbationInput::new(d.to_vec(), a, eps)?;
    let p = predict_extremes(&input)?;
    let exact = two_by_two_exact(d, a12, a21, eps);
    // Analytic expansion: d1 - eps^2 |a12 a21| / (d1 - d2) + O(eps^4).
    let expansion = d[0] - eps * eps * (a12 * a21).abs() / (d[0] - d[1]);
    let err = (p.lambda_max.re - exact[0])
        .abs()
        .max((p.lambda_min.re - exact[1]).abs())
        .max((p.lambda_max.re - expansion).abs());
    checks.push(Check::new(
        "perturb 2x2 closed form",
        err <= 1e-14,
        json!({"eps": eps, "predicted": [p.lambda_max.re, p.lambda_min.re], "exact": exact, "max_error": err}),
    ));
    Ok(checks)
}

/// Eigenvalues of member `index`, scaled to unit entry variance and `1/sqrt(n)`.
pub fn scaled_antagonistic_spectrum(pairs: PairDensity, n: usize, seed: u64, index: u64) -> CliResult<Spectrum> {
    let m = EnsembleSpec::new(n, seed, Composition::Antagonistic { pairs }).sample_nth(index)?;
    let var = pair_moments(&pairs, 0, 1).var;
    Ok(eigenvalues(&m)?.scaled(1.0 / (n as f64 * var).sqrt()))
}

fn elliptic(seed: u64, n: usize) -> CliResult<Vec<Check>> {
    let densities = [
        ("gaussian-antagonistic", PairDensity::GaussianAntagonistic),
        ("uniform-antagonistic", PairDensity::UniformAntagonistic),
        ("two-interval(0.5)", PairDensity::TwoInterval { w: 0.5 }),
    ];
    let mut jobs: Vec<(String, f64, Option<f64>, usize)> = Vec::new();
    let mut checks = densities
        .par_iter()
        .enumerate()
        .map(|(k, (name, d))| -> CliResult<Check> {
            let rho = rho_from_density(d)?;
            let s = scaled_antagonistic_spectrum(*d, n, seed, k as u64)?;
            let r = elliptic_fit(&s, &EllipseModel::new(rho)?, DEFAULT_ETA)?;
            Ok(Check::new(format!("ellipse {name}"), r.passes(), serde_json::to_value(r).unwrap_or(Value::Null)))
        })
        .collect::<CliResult<Vec<_>>>()?;
    for (k, tau) in [-0.5, 0.0, 0.5].into_iter().enumerate() {
        jobs.push((format!("ellipse elliptic-gaussian tau={tau}"), tau, None, k));
    }
    jobs.push(("mismatch elliptic-gaussian tau=0.5 vs rho=-0.5".into(), 0.5, Some(-0.5), 2));
    let more = jobs
        .par_iter()
        .map(|(name, tau, wrong_rho, k)| -> CliResult<Check> {
            let m = EnsembleSpec::new(n, seed, Composition::EllipticGaussian { tau: *tau }).sample_nth(10 + *k as u64)?;
            let s = eigenvalues(&m)?;
            let rho = wrong_rho.unwrap_or(*tau);
            let r = elliptic_fit(&s, &EllipseModel::new(rho)?, DEFAULT_ETA)?;
            // The mismatched model must be rejected decisively.
            let passed = match wrong_rho {
                None => r.passes(),
                Some(_) => r.inside_fraction < 0.9,
            };
            Ok(Check::new(name.clone(), passed, serde_json::to_value(r).unwrap_or(Value::Null)))
        })
        .collect::<CliResult<Vec<_>>>()?;
    checks.extend(more);
    Ok(checks)
}

/// Radius ratio for `keep` in `{1, n^-1/2}` with `U(-1, 1)` entries, and the point-mass case.
pub fn dilute(seed: u64, n: usize) -> CliResult<Vec<Check>> {
    let uni = ScalarDensity::Uniform { lo: -1.0, hi: 1.0 };
    let cases = [("keep=1", 1.0), ("keep=n^-1/2", 1.0 / (n as f64).sqrt())];
    let mut checks = cases
        .par_iter()
        .enumerate()
        .map(|(k, (name, keep))| -> CliResult<Check> {
            let spec = EnsembleSpec::new(n, seed.wrapping_add(k as u64), Composition::Dilute { entry: uni, keep: *keep });
            let c = circular_radius_check(&spec)?;
            let passed = c.ratio.is_some_and(|r| (0.85..=1.15).contains(&r));
            Ok(Check::new(
                format!("dilute radius {name}"),
                passed,
                json!({"n": n, "keep": keep, "report": c}),
            ))
        })
        .collect::<CliResult<Vec<_>>>()?;
    let spec = EnsembleSpec::new(50, seed, Composition::Dilute { entry: ScalarDensity::Point { value: 0.0 }, keep: 0.5 });
    let c = circular_radius_check(&spec)?;
    checks.push(Check::new(
        "dilute point mass",
        c.empirical_radius == 0.0 && c.predicted_radius == 0.0,
        json!({"report": c}),
    ));
    Ok(checks)
}

fn multiset_distance(a: &[Complex64], b: &[Complex64]) -> f64 {
    let mut used = vec![false; b.len()];
    a.iter()
        .map(|x| {
            let mut best = (usize::MAX, f64::INFINITY);
            for (k, y) in b.iter().enumerate() {
                let d = (x - y).norm();
                if !used[k] && d < best.1 {
                    best = (k, d);
                }
            }
            if best.0 != usize::MAX {
                used[best.0] = true;
            }
            best.1
        })
        .fold(0.0, f64::max)
}

/// The displayed 4x4 antagonistic example.
pub fn example_matrix() -> RealMatrix {
    RealMatrix::from_rows(&[
        [0.0, 5.3, 0.0, -1.7],
        [-3.2, 0.0, 2.3, 2.0],
        [0.0, -8.7, 0.0, -6.3],
        [1.1, -1.8, 1.9, 0.0],
    ])
    .expect("constant matrix is well formed")
}

fn closure(seed: u64) -> CliResult<Vec<Check>> {
    let mut checks = Vec::new();
    let mut subjects = vec![("example".to_string(), example_matrix())];
    let densities = [
        PairDensity::GaussianAntagonistic,
        PairDensity::UniformAntagonistic,
        PairDensity::TwoInterval { w: 0.5 },
        PairDensity::DecayingSquares { c: 50.0, p: 8.0 },
        PairDensity::GapUniform { lo: 0.5, hi: 2.0 },
    ];
    for (k, pairs) in densities.iter().enumerate() {
        let m = EnsembleSpec::new(30, seed, Composition::Antagonistic { pairs: *pairs }).sample_nth(k as u64)?;
        subjects.push((format!("{pairs:?}"), m));
    }
    for (name, m) in subjects {
        let n = m.n();
        let original = eigenvalues(&m)?;
        let tol = 1e-8 * (1.0 + m.frobenius_norm());
        let transforms = [
            ("negate", Transform::Negate),
            ("transpose", Transform::Transpose),
            ("diag-conjugate", Transform::DiagConjugate { scale: (1..=n).map(|k| k as f64).collect() }),
            ("permute-reversal", Transform::Permute { perm: (0..n).rev().collect() }),
        ];
        for (tname, t) in transforms {
            let b = closure_transform(&m, &t)?;
            let antagonistic = is_antagonistic(&b);
            // Negation flips the spectrum; the others are similarities or transposes.
            let mut spectrum_ok = true;
            let mut distance = 0.0;
            if tname != "negate" {
                distance = multiset_distance(&original.eigenvalues, &eigenvalues(&b)?.eigenvalues);
                spectrum_ok = distance <= tol;
            }
            checks.push(Check::new(
                format!("closure {tname} {name}"),
                antagonistic && spectrum_ok,
                json!({"antagonistic": antagonistic, "spectrum_distance": distance}),
            ));
        }
    }
    Ok(checks)
}

/// Matching-sum, Pfaffian and expected-determinant identities.
pub fn exact_combinatorics(seed: u64) -> CliResult<Vec<Check>> {
    let mut checks = Vec::new();
    let antisym = Composition::Antisymmetric { entry: ScalarDensity::Gaussian { mean: 0.0, variance: 1.0 } };
    for n in (2..=10).step_by(2) {
        let spec = EnsembleSpec::new(n, seed, antisym);
        let mut worst_sq: f64 = 0.0;
        let mut worst_t: f64 = 0.0;
        for k in 0..100 {
            let a = spec.sample_nth(k)?;
            let pf = pfaffian(&a);
            let det = determinant(&a);
            worst_sq = worst_sq.max((pf * pf - det).abs() / det.abs().max(f64::MIN_POSITIVE));
            let t = pfaffian(&a.transpose());
            worst_t = worst_t.max((t - pfaffian_sign(n) * pf).abs() / pf.abs().max(f64::MIN_POSITIVE));
        }
        checks.push(Check::new(
            format!("pf^2 = det n={n}"),
            worst_sq <= 1e-10,
            json!({"draws": 100, "max_relative_error": worst_sq}),
        ));
        checks.push(Check::new(
            format!("pf[A^T] = (-1)^(n/2) pf[A] n={n}"),
            worst_t <= 1e-10,
            json!({"draws": 100, "max_relative_error": worst_t}),
        ));
    }
    let mut r = rng::stream(seed, 0);
    let mut dp_ok = true;
    for n in 0..=10 {
        let t = ThetaArray::from_fn(n, |_, _| r.random_range(0..4u8) as f64)?;
        dp_ok &= matching_sums(&t)? == matching_sums_by_enumeration(&t)?;
    }
    checks.push(Check::new("matching DP = enumeration n<=10", dp_ok, json!({"weights": "integers 0..3"})));

    let p4 = expected_char_poly(&ThetaArray::constant(4, 1.0)?)?;
    let want = [3.0, 0.0, 6.0, 0.0, 1.0];
    checks.push(Check::new(
        "E[det(z - A)] n=4 theta=1 is z^4 + 6z^2 + 3",
        (0..=4).all(|k| p4.coefficient(k) == want[k]),
        json!({"coefficients": (0..=4).map(|k| p4.coefficient(k)).collect::<Vec<_>>()}),
    ));

    let mut parity_ok = true;
    for n in 1..=12 {
        let t = ThetaArray::from_density(&PairDensity::DecayingSquares { c: 2.0, p: 1.0 }, n)?;
        let p = expected_char_poly(&t)?;
        for k in 0..=n {
            let c = p.coefficient(k);
            parity_ok &= if (n - k) % 2 == 1 { c == 0.0 } else { c >= 0.0 };
        }
    }
    checks.push(Check::new("odd coefficients vanish, even are >= 0", parity_ok, json!({"n_max": 12})));

    let g4 = expected_det(&ThetaArray::from_density(&PairDensity::GaussianAntagonistic, 4)?)?;
    let oracle = 12.0 / (std::f64::consts::PI * std::f64::consts::PI);
    checks.push(Check::new(
        "E[det] n=4 gaussian = 12/pi^2",
        (g4 - oracle).abs() <= 1e-14,
        json!({"value": g4, "oracle": oracle}),
    ));

    let spec = EnsembleSpec::new(4, seed, Composition::Antagonistic { pairs: PairDensity::GaussianAntagonistic });
    let theta = ThetaArray::from_density(&PairDensity::GaussianAntagonistic, 4)?;
    let exact_pf = Functional::PfPfT.exact(&theta)?;
    let exact_det = Functional::Det.exact(&theta)?;
    let trials = 40_000;
    let mc_pf = mc_expect(&spec, Functional::PfPfT, trials)?;
    let mc_det = mc_expect(&spec, Functional::Det, trials)?;
    let z_pf = mc_pf.z_score(exact_pf);
    let z_det = mc_det.z_score(exact_det);
    checks.push(Check::new(
        "(-1)^(n/2) E[pf pf^T] = E[det] n=4",
        (pfaffian_sign(4) * exact_pf - exact_det).abs() <= 1e-14 && z_pf.abs() <= 4.0 && z_det.abs() <= 4.0,
        json!({"exact_pf_pft": exact_pf, "exact_det": exact_det, "mc_pf_pft": mc_pf, "mc_det": mc_det,
               "z_pf_pft": z_pf, "z_det": z_det}),
    ));
    Ok(checks)
}
