use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

use antagonistic_core::exact::{mc_expect, theta_for, Functional};
use antagonistic_core::export;
use antagonistic_core::laws::{circular_radius_check, elliptic_fit, rho_from_density, EllipseModel, DEFAULT_ETA};
use antagonistic_core::matgen::{pair_moments, Composition, EnsembleSpec, PairDensity};
use antagonistic_core::perturb::{predict, random_instance, verify_prediction};
use antagonistic_core::spectral::{bendixson_box, eigenvalues, stability_report};
use antagonistic_core::Error as CoreError;
use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::json;

use crate::config::{parse_list, resolve_ensemble, ExperimentConfig, Format};
use crate::error::{CliError, CliResult, Outcome};
use crate::figures::{run_figure, FigureId};
use crate::suites::{default_eps_grid, run_suite, Suite};

#[derive(Debug, Parser)]
#[command(name = "antagonistic", version, about = "Seeded spectra of antagonistic random matrices")]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct GlobalArgs {
    /// Master seed (default 0).
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Output file; stdout when omitted (figures default to `<id>.csv`).
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// JSON experiment config; flags override its values.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Monte Carlo trials.
    #[arg(long, global = true)]
    pub trials: Option<usize>,
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// Worker threads; results do not depend on this.
    #[arg(long, global = true)]
    pub threads: Option<usize>,
}

#[derive(Debug, Args, Clone, Default)]
pub struct EnsembleArgs {
    /// Composition: JSON object or shorthand such as `gaussian`, `two-interval:0.5`, `elliptic:0.3`.
    #[arg(long)]
    pub ensemble: Option<String>,
    /// Dimension.
    #[arg(long)]
    pub n: Option<usize>,
    /// Ensemble member (random stream) index.
    #[arg(long, default_value_t = 0)]
    pub index: u64,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Eigenvalue point cloud of a figure preset plus a JSON sidecar.
    Figure {
        #[arg(value_enum)]
        id: FigureId,
    },
    /// One ensemble member as a matrix.
    Sample(EnsembleArgs),
    /// Eigenvalues of one ensemble member.
    Spectrum(EnsembleArgs),
    /// Monte Carlo expectation against the exact matching-sum value.
    Expect {
        #[command(flatten)]
        ensemble: EnsembleArgs,
        /// det, pf-pft, trace-square or char-poly-at:<z>.
        #[arg(long)]
        functional: Option<String>,
        /// Skip the exact value (needed above the matching-sum dimension cap).
        #[arg(long)]
        mc_only: bool,
    },
    /// Perturbative extreme-eigenvalue predictions and residual slopes.
    Perturb {
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        degenerate: bool,
        #[arg(long)]
        instances: Option<usize>,
        /// Decreasing comma-separated couplings.
        #[arg(long)]
        eps_grid: Option<String>,
    },
    /// Elliptic-law fit, or the circular radius check for dilute ensembles.
    Lawfit {
        #[command(flatten)]
        ensemble: EnsembleArgs,
        /// Model parameter; defaults to the ensemble's own value.
        #[arg(long, allow_hyphen_values = true)]
        rho: Option<f64>,
        #[arg(long)]
        eta: Option<f64>,
    },
    /// Run an invariant suite.
    Verify {
        #[arg(value_enum)]
        suite: Suite,
    },
}

/// Resolved global settings.
pub struct Context {
    pub seed: u64,
    pub out: Option<PathBuf>,
    pub format: Option<Format>,
    pub trials: Option<usize>,
    pub config: ExperimentConfig,
}

impl Context {
    pub fn new(global: &GlobalArgs) -> CliResult<Self> {
        let config = match &global.config {
            Some(path) => ExperimentConfig::load(path)?,
            None => ExperimentConfig::default(),
        };
        Ok(Context {
            seed: global.seed.or(config.seed).or(config.ensemble.map(|e| e.seed)).unwrap_or(0),
            out: global.out.clone().or_else(|| config.out.clone()),
            format: global.format.or(config.format),
            trials: global.trials.or(config.trials),
            config,
        })
    }

    fn format(&self, default: Format) -> Format {
        self.format.unwrap_or(default)
    }

    fn ensemble(&self, args: &EnsembleArgs, default_n: usize) -> CliResult<EnsembleSpec> {
        let default = (default_n, Composition::Antagonistic { pairs: PairDensity::GaussianAntagonistic });
        resolve_ensemble(args.ensemble.as_deref(), args.n, self.seed, &self.config, default)
    }
}

fn create(path: &Path) -> CliResult<BufWriter<File>> {
    File::create(path).map(BufWriter::new).map_err(|e| CliError::io(path, e))
}

/// Writes to `--out` or stdout.
fn emit(out: Option<&Path>, f: impl FnOnce(&mut dyn Write) -> io::Result<()>) -> CliResult<()> {
    match out {
        Some(path) => {
            let mut w = create(path)?;
            f(&mut w).and_then(|_| w.flush()).map_err(|e| CliError::io(path, e))
        }
        None => {
            let stdout = io::stdout();
            let mut w = stdout.lock();
            f(&mut w).and_then(|_| w.flush()).map_err(|e| CliError::io(Path::new("<stdout>"), e))
        }
    }
}

fn write_json<T: Serialize>(w: &mut dyn Write, value: &T) -> io::Result<()> {
    serde_json::to_writer_pretty(&mut *w, value)?;
    writeln!(w)
}

pub fn run(cli: &Cli) -> CliResult<Outcome> {
    let ctx = Context::new(&cli.global)?;
    match &cli.command {
        Command::Figure { id } => figure(&ctx, *id),
        Command::Sample(args) => sample(&ctx, args),
        Command::Spectrum(args) => spectrum(&ctx, args),
        Command::Expect {
            ensemble,
            functional,
            mc_only,
        } => expect(&ctx, ensemble, functional.as_deref(), *mc_only),
        Command::Perturb {
            n,
            degenerate,
            instances,
            eps_grid,
        } => perturb(&ctx, *n, *degenerate, *instances, eps_grid.as_deref()),
        Command::Lawfit { ensemble, rho, eta } => lawfit(&ctx, ensemble, *rho, *eta),
        Command::Verify { suite } => verify(&ctx, *suite),
    }
}

fn figure(ctx: &Context, id: FigureId) -> CliResult<Outcome> {
    let data = run_figure(id, ctx.seed, &ctx.config)?;
    let format = ctx.format(Format::Csv);
    let ext = match format {
        Format::Csv => "csv",
        Format::Json => "json",
    };
    let out = ctx.out.clone().unwrap_or_else(|| PathBuf::from(format!("{}.{ext}", id.name())));
    match format {
        Format::Csv => {
            emit(Some(&out), |w| data.write_csv(w))?;
            let sidecar = out.with_extension("json");
            emit(Some(&sidecar), |w| write_json(w, &data.report))?;
        }
        Format::Json => {
            let points: Vec<_> = data
                .report
                .panels
                .iter()
                .zip(&data.spectra)
                .flat_map(|(p, s)| s.eigenvalues.iter().map(move |z| (z.re, z.im, p.panel.label.clone())))
                .collect();
            emit(Some(&out), |w| write_json(w, &json!({"report": data.report, "points": points})))?;
        }
    }
    Ok(Outcome::Pass)
}

fn sample(ctx: &Context, args: &EnsembleArgs) -> CliResult<Outcome> {
    let spec = ctx.ensemble(args, 10)?;
    let m = spec.sample_nth(args.index)?;
    emit(ctx.out.as_deref(), |w| match ctx.format(Format::Json) {
        Format::Json => write_json(w, &m),
        Format::Csv => {
            for row in m.rows() {
                let cells: Vec<String> = row.iter().map(f64::to_string).collect();
                writeln!(w, "{}", cells.join(","))?;
            }
            Ok(())
        }
    })?;
    Ok(Outcome::Pass)
}

fn spectrum(ctx: &Context, args: &EnsembleArgs) -> CliResult<Outcome> {
    let spec = ctx.ensemble(args, 100)?;
    let m = spec.sample_nth(args.index)?;
    let s = eigenvalues(&m)?;
    match ctx.format(Format::Csv) {
        Format::Csv => emit(ctx.out.as_deref(), |w| export::write_spectrum_csv(w, &s))?,
        Format::Json => {
            let report = json!({
                "ensemble": spec,
                "index": args.index,
                "spectrum": s,
                "stability": stability_report(&s)?,
                "bendixson": bendixson_box(&m)?,
            });
            emit(ctx.out.as_deref(), |w| write_json(w, &report))?
        }
    }
    Ok(Outcome::Pass)
}

#[derive(Debug, Serialize)]
struct ExpectReport {
    ensemble: EnsembleSpec,
    functional: String,
    mc: antagonistic_core::exact::Estimate,
    exact: Option<f64>,
    z_score: Option<f64>,
}

fn expect(ctx: &Context, args: &EnsembleArgs, functional: Option<&str>, mc_only: bool) -> CliResult<Outcome> {
    let spec = ctx.ensemble(args, 4)?;
    let functional: Functional = functional
        .or(ctx.config.functional.as_deref())
        .unwrap_or("det")
        .parse()
        .map_err(|e: CoreError| CliError::Usage(e.to_string()))?;
    let trials = ctx.trials.unwrap_or(100_000);
    let exact = if mc_only {
        None
    } else {
        let theta = theta_for(&spec)?
            .ok_or_else(|| CliError::Usage("no exact value for this ensemble; pass --mc-only".into()))?;
        match functional.exact(&theta) {
            Ok(v) => Some(v),
            Err(e @ CoreError::DimensionTooLarge { .. }) => {
                return Err(CliError::Usage(format!("{e}; reduce --n or pass --mc-only")));
            }
            Err(e) => return Err(e.into()),
        }
    };
    let mc = mc_expect(&spec, functional, trials)?;
    let z_score = exact.map(|v| mc.z_score(v));
    let report = ExpectReport {
        ensemble: spec,
        functional: functional.to_string(),
        mc,
        exact,
        z_score,
    };
    emit(ctx.out.as_deref(), |w| write_json(w, &report))?;
    Ok(Outcome::from_pass(z_score.is_none_or(|z| z.abs() <= 4.0)))
}

fn perturb(
    ctx: &Context,
    n: Option<usize>,
    degenerate: bool,
    instances: Option<usize>,
    grid: Option<&str>,
) -> CliResult<Outcome> {
    let n = n.or(ctx.config.n).unwrap_or(10);
    let degenerate = degenerate || ctx.config.degenerate.unwrap_or(false);
    let instances = instances.or(ctx.config.instances).unwrap_or(1);
    let grid = match grid {
        Some(text) => parse_list(text)?,
        None => ctx.config.eps_grid.clone().unwrap_or_else(default_eps_grid),
    };
    let mut runs = Vec::with_capacity(instances);
    for k in 0..instances as u64 {
        let input = random_instance(n, ctx.seed, k, degenerate)?;
        let prediction = predict(&input.with_eps(grid[0]))?;
        let report = verify_prediction(&input, &grid)?;
        runs.push((k, prediction, report));
    }
    let passed = runs.iter().all(|(_, _, r)| r.passes(r.required_slope()));
    emit(ctx.out.as_deref(), |w| match ctx.format(Format::Json) {
        Format::Json => {
            let docs: Vec<_> = runs
                .iter()
                .map(|(k, p, r)| {
                    json!({"instance": k, "prediction_at_first_eps": p, "report": r,
                           "required_slope": r.required_slope(), "passed": r.passes(r.required_slope())})
                })
                .collect();
            write_json(w, &json!({"n": n, "seed": ctx.seed, "degenerate": degenerate, "passed": passed, "instances": docs}))
        }
        Format::Csv => {
            writeln!(w, "instance,eps,residual_max,residual_min,slope")?;
            for (k, _, r) in &runs {
                let slope = r.slope.map(|s| s.to_string()).unwrap_or_default();
                for row in &r.rows {
                    writeln!(w, "{k},{},{},{},{slope}", row.eps, row.residual_max, row.residual_min)?;
                }
            }
            Ok(())
        }
    })?;
    Ok(Outcome::from_pass(passed))
}

fn lawfit(ctx: &Context, args: &EnsembleArgs, rho: Option<f64>, eta: Option<f64>) -> CliResult<Outcome> {
    let spec = ctx.ensemble(args, 1000)?;
    let eta = eta.or(ctx.config.eta).unwrap_or(DEFAULT_ETA);
    let rho_override = rho.or(ctx.config.rho);
    let (passed, doc) = match spec.composition {
        Composition::Dilute { .. } => {
            let c = circular_radius_check(&spec)?;
            let passed = c.ratio.is_some_and(|r| (0.85..=1.15).contains(&r));
            (passed, json!({"ensemble": spec, "circle": c, "passed": passed}))
        }
        Composition::Antagonistic { pairs } => {
            let var = pair_moments(&pairs, 0, 1).var;
            let rho = match rho_override {
                Some(r) => r,
                None => rho_from_density(&pairs)?,
            };
            let s = eigenvalues(&spec.sample_nth(args.index)?)?.scaled(1.0 / (spec.n as f64 * var).sqrt());
            let mut r = elliptic_fit(&s, &EllipseModel::new(rho)?, eta)?;
            r.seed = Some(spec.seed);
            (r.passes(), json!({"ensemble": spec, "fit": r, "passed": r.passes()}))
        }
        Composition::EllipticGaussian { tau } => {
            let s = eigenvalues(&spec.sample_nth(args.index)?)?;
            let mut r = elliptic_fit(&s, &EllipseModel::new(rho_override.unwrap_or(tau))?, eta)?;
            r.seed = Some(spec.seed);
            (r.passes(), json!({"ensemble": spec, "fit": r, "passed": r.passes()}))
        }
        _ => {
            return Err(CliError::Usage(
                "lawfit needs an antagonistic, elliptic-gaussian or dilute ensemble".into(),
            ))
        }
    };
    emit(ctx.out.as_deref(), |w| write_json(w, &doc))?;
    Ok(Outcome::from_pass(passed))
}

fn verify(ctx: &Context, suite: Suite) -> CliResult<Outcome> {
    let report = run_suite(suite, ctx.seed)?;
    emit(ctx.out.as_deref(), |w| write_json(w, &report))?;
    Ok(Outcome::from_pass(report.passed))
}
