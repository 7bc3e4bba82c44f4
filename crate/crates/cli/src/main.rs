//! `km-lab`: compute, decompose, sweep and oracle-check Kubo-Mori curvature
//! from the command line.
//!
//! Exit codes: 0 when the checked statement behaves as its claim class says
//! (holds for proven and evidenced statements, fails for disproven ones),
//! 1 when it does not or a run cannot finish, 2 on malformed input.

use std::fmt::Write as _;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use km_core::conjecture::{
    check_beta2_conditions, check_conjecture, check_gamma_conditions, check_inequality,
    check_term_monotonicity, find_counterexample, log_grid, InequalityName, SearchConfig, Term,
};
use km_core::curvature::{decompose, kubo_mori, scal, scal_real, scal_real_offdiagonal, slice_offset};
use km_core::kernels::kappa_fn;
use km_core::linalg::random_unitary;
use km_core::oracle::{metric_fd_richardson, scal_fd};
use km_core::report::{fmt17, ReportBuilder};
use km_core::states::{eigvalsh, pair_chain, sample_spectrum, von_neumann_entropy};
use km_core::{
    CMatrix, Chart, ChartKind, ClaimClass, DensityMatrix, EvalPolicy, GibbsPath, GroupedTermTask, InequalitySpec,
    Spectrum, SubtermName, SweepReport, TangentVector,
};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};

const TOL_RANGE: (f64, f64) = (1e-15, 1e-2);
/// Ratio used for `gamma-star` searches when none is given.
const GAMMA_STAR_RATIO: f64 = 1.5e4;

#[derive(Parser, Serialize)]
#[command(name = "km-lab", version, about = "Kubo-Mori curvature lab")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Seed for every random draw; always echoed in the output.
    #[arg(long, global = true, default_value_t = 1)]
    seed: u64,
    /// Tolerance override, within [1e-15, 1e-2].
    #[arg(long, global = true)]
    tol: Option<f64>,
    /// Output file, written atomically. Standard output when absent.
    #[arg(long, global = true)]
    #[serde(skip)]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
enum Format {
    Json,
    Csv,
}

/// Comma-separated reals.
#[derive(Clone, Debug, Serialize)]
#[serde(transparent)]
struct List(Vec<f64>);

fn parse_list(s: &str) -> Result<List, String> {
    s.split(',')
        .map(|t| t.trim().parse::<f64>().map_err(|e| format!("bad number {t:?}: {e}")))
        .collect::<Result<Vec<_>, _>>()
        .map(List)
}

fn parse_pair(s: &str) -> Result<(usize, usize), String> {
    let (a, b) = s.split_once(',').ok_or("expected i,j")?;
    let p = |t: &str| t.trim().parse::<usize>().map_err(|e| format!("bad index {t:?}: {e}"));
    Ok((p(a)?, p(b)?))
}

fn parse_term(s: &str) -> Result<Term, String> {
    s.parse().map_err(|e: km_core::Error| e.to_string())
}

fn parse_subterm(s: &str) -> Result<SubtermName, String> {
    s.parse().map_err(|e: km_core::Error| e.to_string())
}

#[derive(Args, Serialize)]
#[group(required = true, multiple = false)]
struct Source {
    /// Eigenvalues, comma-separated; must sum to 1.
    #[arg(long, value_parser = parse_list)]
    spectrum: Option<List>,
    /// JSON density matrix: rows of reals or [re, im] pairs.
    #[arg(long)]
    matrix: Option<PathBuf>,
}

#[derive(Subcommand, Serialize)]
#[serde(tag = "command", rename_all = "kebab-case")]
enum Command {
    /// Scal and Scal_R of a state.
    Scal(Source),
    /// Summand groups of Scal around an eigenvalue pair.
    Decompose {
        #[command(flatten)]
        source: Source,
        /// 0-based positions in the descending spectrum; default first,last.
        #[arg(long, value_parser = parse_pair)]
        pair: Option<(usize, usize)>,
    },
    /// Monotonicity and sign sweeps.
    Sweep {
        #[command(subcommand)]
        kind: Sweep,
    },
    /// Finite-difference cross-checks.
    Oracle {
        #[command(subcommand)]
        kind: Oracle,
    },
    /// Two-entry majorisation chain from a more mixed spectrum up to a less
    /// mixed one.
    Chain {
        #[arg(long, value_parser = parse_list)]
        from: List,
        #[arg(long, value_parser = parse_list)]
        to: List,
    },
    /// Gibbs states along increasing inverse temperature.
    GibbsPath {
        /// Hamiltonian eigenvalues.
        #[arg(long, value_parser = parse_list)]
        hamiltonian: List,
        /// Inverse temperatures; default a uniform grid on (0, beta-max].
        #[arg(long, value_parser = parse_list)]
        betas: Option<List>,
        #[arg(long, default_value_t = 20)]
        grid: usize,
        #[arg(long, default_value_t = 5.0)]
        beta_max: f64,
    },
}

#[derive(Subcommand, Serialize)]
#[serde(tag = "sweep", rename_all = "kebab-case")]
enum Sweep {
    /// Scal rises along random T-transform chains.
    Conjecture {
        #[arg(long, default_value_t = 4)]
        n: usize,
        #[arg(long, default_value_t = 1000)]
        trials: usize,
        #[arg(long, default_value_t = 5)]
        steps: usize,
    },
    /// A grouped term or named pair-sum along (a - x, b + x).
    Term {
        #[arg(long, value_parser = parse_term)]
        term: Term,
        #[arg(long)]
        a: f64,
        #[arg(long)]
        b: f64,
        #[arg(long)]
        lam_k: Option<f64>,
        #[arg(long)]
        lam_l: Option<f64>,
        #[arg(long, default_value_t = 1000)]
        grid: usize,
    },
    /// The four beta2 conditions and their sum on a (c, x) grid.
    Beta2Conditions {
        /// Number of c values, log-spaced on [c-min, c-max].
        #[arg(long, default_value_t = 200)]
        grid: usize,
        #[arg(long, default_value_t = 200)]
        x_res: usize,
        #[arg(long, default_value_t = 1e-3)]
        c_min: f64,
        #[arg(long, default_value_t = 1e2)]
        c_max: f64,
    },
    /// The two gamma conditions and their sum on a log-spaced square grid.
    GammaConditions {
        #[arg(long, default_value_t = 100)]
        grid: usize,
        #[arg(long, default_value_t = 1e-3)]
        min: f64,
        #[arg(long, default_value_t = 1e7)]
        max: f64,
    },
    /// Sign and shape of the scalar auxiliary functions.
    Inequality {
        /// A function name or `all`.
        #[arg(long, default_value = "all")]
        name: String,
        #[arg(long, default_value_t = 1000)]
        grid: usize,
    },
    /// Seeded search for a decreasing step of a named pair-sum.
    Counterexample {
        #[arg(long, value_parser = parse_subterm)]
        name: SubtermName,
        #[arg(long, default_value_t = 100_000)]
        samples: usize,
        /// Points per x path.
        #[arg(long, default_value_t = 21)]
        grid: usize,
        /// Fixes lam_l = lam_k / ratio; gamma-star defaults to 1.5e4.
        #[arg(long)]
        ratio: Option<f64>,
    },
}

#[derive(Subcommand, Serialize)]
#[serde(tag = "oracle", rename_all = "kebab-case")]
enum Oracle {
    /// Relative-entropy Hessian against the metric at random (D, X, Y).
    MetricFd {
        #[arg(long, default_value_t = 3)]
        n: usize,
        #[arg(long, default_value_t = 100)]
        trials: usize,
        #[arg(long, default_value_t = 1e-4)]
        step: f64,
    },
    /// Intrinsic curvature of a chart against the closed formula.
    ScalFd {
        #[arg(long, default_value_t = 2)]
        n: usize,
        /// Base spectrum; random seeded spectra when absent.
        #[arg(long, value_parser = parse_list)]
        spectrum: Option<List>,
        #[arg(long, default_value_t = 20)]
        trials: usize,
        /// Real symmetric states and directions.
        #[arg(long)]
        real: bool,
        #[arg(long, value_enum, default_value_t = ChartArg::Cone)]
        chart: ChartArg,
        #[arg(long, default_value_t = km_core::oracle::DEFAULT_CURVATURE_STEP)]
        step: f64,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
enum ChartArg {
    /// Trace-one slice plus the radial direction; measures Scal itself.
    Cone,
    /// Trace-one slice only; measures Scal + d(d-1)/4.
    StateSpace,
}

enum Failure {
    Usage(String),
    Runtime(String),
}

impl From<km_core::Error> for Failure {
    fn from(e: km_core::Error) -> Self {
        match e {
            km_core::Error::Numerical(_) => Failure::Runtime(e.to_string()),
            _ => Failure::Usage(e.to_string()),
        }
    }
}

type Res<T> = std::result::Result<T, Failure>;

/// What a command produced: the JSON body (metadata is added later), a
/// CSV table, the claim class of the checked statement and whether the
/// outcome matches it.
struct Output {
    body: Value,
    csv: String,
    claim: Value,
    ok: bool,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => e.exit(),
    };
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(Failure::Usage(m)) => {
            eprintln!("km-lab: {m}");
            ExitCode::from(2)
        }
        Err(Failure::Runtime(m)) => {
            eprintln!("km-lab: {m}");
            ExitCode::from(1)
        }
    }
}

fn run(cli: &Cli) -> Res<bool> {
    configure_threads()?;
    if let Some(t) = cli.tol {
        if !(TOL_RANGE.0..=TOL_RANGE.1).contains(&t) {
            return Err(Failure::Usage(format!("--tol {t} outside [1e-15, 1e-2]")));
        }
    }
    let out = match &cli.command {
        Command::Scal(src) => cmd_scal(src, cli.tol)?,
        Command::Decompose { source, pair } => cmd_decompose(source, *pair, cli.tol)?,
        Command::Sweep { kind } => {
            if cli.tol.is_some() {
                return Err(Failure::Usage(format!(
                    "--tol does not apply to sweeps; they use the fixed strictness tolerance {:e}",
                    km_core::report::STRICT_TOL
                )));
            }
            cmd_sweep(kind, cli.seed)?
        }
        Command::Oracle { kind } => cmd_oracle(kind, cli.seed, cli.tol)?,
        Command::Chain { from, to } => cmd_chain(from, to, cli.tol)?,
        Command::GibbsPath {
            hamiltonian,
            betas,
            grid,
            beta_max,
        } => cmd_gibbs(hamiltonian, betas.as_ref(), *grid, *beta_max, cli.tol)?,
    };
    let config = serde_json::to_value(cli).expect("config serialises");
    let text = match cli.format {
        Format::Json => {
            let mut doc = json!({
                "tool": "km-lab",
                "version": env!("CARGO_PKG_VERSION"),
                "seed": cli.seed,
                "config": config,
                "claim": out.claim,
                "claim_matched": out.ok,
            });
            if let (Value::Object(m), Value::Object(b)) = (&mut doc, out.body) {
                m.extend(b);
            }
            let mut s = serde_json::to_string_pretty(&doc).expect("output serialises");
            s.push('\n');
            s
        }
        Format::Csv => {
            let mut s = String::new();
            let claim = match &out.claim {
                Value::String(c) => c.clone(),
                other => other.to_string(),
            };
            let _ = writeln!(s, "# km-lab {} seed={} claim={claim}", env!("CARGO_PKG_VERSION"), cli.seed);
            let _ = writeln!(s, "# config {config}");
            s.push_str(&out.csv);
            s
        }
    };
    emit(cli.out.as_deref(), &text)?;
    Ok(out.ok)
}

fn configure_threads() -> Res<()> {
    let Ok(v) = std::env::var("KM_LAB_THREADS") else {
        return Ok(());
    };
    let n: usize = v
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| Failure::Usage(format!("KM_LAB_THREADS={v:?} is not a positive integer")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| Failure::Runtime(format!("thread pool: {e}")))
}

/// Temp file in the target directory, then rename.
fn emit(path: Option<&Path>, text: &str) -> Res<()> {
    let io = |e: std::io::Error| Failure::Runtime(format!("write failed: {e}"));
    let Some(path) = path else {
        std::io::stdout().write_all(text.as_bytes()).map_err(io)?;
        return Ok(());
    };
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(io)?;
    tmp.write_all(text.as_bytes()).map_err(io)?;
    tmp.persist(path).map_err(|e| io(e.error))?;
    Ok(())
}

fn load_spectrum(src: &Source) -> Res<Spectrum> {
    if let Some(List(v)) = &src.spectrum {
        return Ok(Spectrum::new(v.clone())?);
    }
    let path = src.matrix.as_ref().expect("clap enforces one source");
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure::Usage(format!("cannot read {}: {e}", path.display())))?;
    let m: CMatrix =
        serde_json::from_str(&text).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
    Ok(eigvalsh(&DensityMatrix::new(m)?)?)
}

/// Pair sum of `v` through the `kappa` representation, independent of the
/// direct sum inside `scal_real`.
fn v_sum_via_kappa(s: &Spectrum) -> Res<f64> {
    let p = EvalPolicy::default();
    let l = s.values();
    let mut acc: f64 = l.iter().map(|x| -1.0 / (8.0 * x)).sum();
    for i in 0..l.len() {
        for j in (i + 1)..l.len() {
            let c = l[i] / l[j];
            acc += ((1.0 + c) * kappa_fn(c, &p)? + (1.0 + 1.0 / c) * kappa_fn(1.0 / c, &p)?) / (l[i] + l[j]);
        }
    }
    Ok(acc)
}

fn cmd_scal(src: &Source, tol: Option<f64>) -> Res<Output> {
    let s = load_spectrum(src)?;
    let tol = tol.unwrap_or(1e-10);
    let sc = scal(&s);
    let sr = scal_real(&s);
    let vs = v_sum_via_kappa(&s)?;
    let residual = (sr - (0.25 * sc + 0.25 * vs)).abs();
    let ok = residual <= tol * sr.abs().max(1.0);
    let csv = format!(
        "quantity,value\nscal,{}\nscal_real,{}\nv_sum,{}\nrelation_residual,{}\n",
        fmt17(sc),
        fmt17(sr),
        fmt17(vs),
        fmt17(residual)
    );
    Ok(Output {
        body: json!({
            "spectrum": s,
            "scal": sc,
            "scal_real": sr,
            "v_sum": vs,
            "relation_residual": residual,
            "tolerance": tol,
        }),
        csv,
        claim: json!(ClaimClass::Proven),
        ok,
    })
}

fn cmd_decompose(src: &Source, pair: Option<(usize, usize)>, tol: Option<f64>) -> Res<Output> {
    let s = load_spectrum(src)?;
    let n = s.len();
    if n < 2 {
        return Err(Failure::Usage("decompose needs at least two eigenvalues".into()));
    }
    let (i, j) = pair.unwrap_or((0, n - 1));
    let tol = tol.unwrap_or(1e-9);
    let b = decompose(&s, i, j)?;
    let sc = scal(&s);
    let residual = (b.total - sc).abs();
    let ok = residual <= tol * sc.abs();
    let mut csv = String::from("group,k,l,value\n");
    let _ = writeln!(csv, "alpha,,,{}", fmt17(b.alpha));
    for (k, v) in &b.beta1 {
        let _ = writeln!(csv, "beta1,{k},,{}", fmt17(*v));
    }
    for (k, v) in &b.beta2 {
        let _ = writeln!(csv, "beta2,{k},,{}", fmt17(*v));
    }
    for g in &b.gamma {
        let _ = writeln!(csv, "gamma,{},{},{}", g.k, g.l, fmt17(g.value));
    }
    let _ = writeln!(csv, "delta,,,{}", fmt17(b.delta_total));
    let _ = writeln!(csv, "total,,,{}", fmt17(b.total));
    Ok(Output {
        body: json!({
            "spectrum": s,
            "breakdown": b,
            "scal": sc,
            "residual": residual,
            "tolerance": tol,
        }),
        csv,
        claim: json!(ClaimClass::Proven),
        ok,
    })
}

fn reports_output(reports: Vec<SweepReport>) -> Output {
    let ok = reports.iter().all(SweepReport::matches_claim);
    let claims: Vec<ClaimClass> = reports.iter().map(|r| r.claim).collect();
    let claim = if claims.len() == 1 { json!(claims[0]) } else { json!(claims) };
    let csv = if reports.len() == 1 {
        reports[0].to_csv()
    } else {
        // gnuplot index blocks: two blank lines between reports.
        reports
            .iter()
            .map(|r| format!("# {}\n{}", r.description, r.to_csv()))
            .collect::<Vec<_>>()
            .join("\n\n")
    };
    Output {
        body: json!({ "reports": reports }),
        csv,
        claim,
        ok,
    }
}

fn cmd_sweep(kind: &Sweep, seed: u64) -> Res<Output> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let reports = match kind {
        Sweep::Conjecture { n, trials, steps } => {
            let mut r = check_conjecture(*n, *trials, &mut rng, *steps)?;
            r.seed = Some(seed);
            vec![r]
        }
        Sweep::Term {
            term,
            a,
            b,
            lam_k,
            lam_l,
            grid,
        } => {
            let task = GroupedTermTask::uniform(*term, *a, *b, *lam_k, *lam_l, *grid)?;
            vec![check_term_monotonicity(&task)]
        }
        Sweep::Beta2Conditions {
            grid,
            x_res,
            c_min,
            c_max,
        } => {
            check_range(*c_min, *c_max, *grid)?;
            if *x_res < 1 {
                return Err(Failure::Usage("--x-res must be positive".into()));
            }
            check_beta2_conditions(&log_grid(*c_min, *c_max, *grid), *x_res)
        }
        Sweep::GammaConditions { grid, min, max } => {
            check_range(*min, *max, *grid)?;
            let g = log_grid(*min, *max, *grid);
            check_gamma_conditions(&g, &g)
        }
        Sweep::Inequality { name, grid } => {
            let names: Vec<InequalityName> = if name == "all" {
                InequalityName::ALL.to_vec()
            } else {
                vec![name.parse()?]
            };
            if *grid < 3 {
                return Err(Failure::Usage("--grid must be at least 3".into()));
            }
            names
                .into_iter()
                .map(|n| {
                    let spec = InequalitySpec::standard(n);
                    check_inequality(&spec, &spec.grid(*grid))
                })
                .collect()
        }
        Sweep::Counterexample {
            name,
            samples,
            grid,
            ratio,
        } => {
            let ratio = ratio.or((*name == SubtermName::GammaStar).then_some(GAMMA_STAR_RATIO));
            let cfg = SearchConfig {
                seed,
                samples: *samples,
                grid_points: *grid,
                ratio,
                ..SearchConfig::default()
            };
            vec![find_counterexample(*name, &cfg)?]
        }
    };
    Ok(reports_output(reports))
}

fn check_range(lo: f64, hi: f64, points: usize) -> Res<()> {
    if !(lo > 0.0 && hi > lo && hi.is_finite()) {
        return Err(Failure::Usage(format!("need 0 < min < max, got [{lo}, {hi}]")));
    }
    if points < 2 {
        return Err(Failure::Usage("--grid must be at least 2".into()));
    }
    Ok(())
}

/// Seeded interior spectrum with every entry at least `0.2 / n`.
fn interior_spectrum(n: usize, rng: &mut ChaCha8Rng) -> Res<Spectrum> {
    let s = sample_spectrum(n, rng)?;
    let w: Vec<f64> = s.values().iter().map(|x| 0.8 * x + 0.2 / n as f64).collect();
    Ok(Spectrum::from_weights(&w)?)
}

/// Random self-adjoint direction of unit Frobenius norm.
fn random_direction(n: usize, real: bool, rng: &mut ChaCha8Rng) -> Res<TangentVector> {
    let mut m = CMatrix::zeros(n);
    for i in 0..n {
        m[(i, i)] = Complex64::new(rng.gen_range(-1.0..1.0), 0.0);
        for j in (i + 1)..n {
            let im = if real { 0.0 } else { rng.gen_range(-1.0..1.0) };
            let z = Complex64::new(rng.gen_range(-1.0..1.0), im);
            m[(i, j)] = z;
            m[(j, i)] = z.conj();
        }
    }
    let norm = m.frobenius();
    Ok(TangentVector::new(m.scale(1.0 / norm), false)?)
}

fn cmd_oracle(kind: &Oracle, seed: u64, tol: Option<f64>) -> Res<Output> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    match kind {
        Oracle::MetricFd { n, trials, step } => {
            if !(2..=8).contains(n) {
                return Err(Failure::Usage("metric-fd needs 2 <= n <= 8".into()));
            }
            let tol = tol.unwrap_or(1e-6);
            let mut b = ReportBuilder::new(
                format!("metric_fd with one Richardson step against kubo_mori, n = {n}, h = {step}"),
                ClaimClass::Proven,
                &["trial"],
            )
            .seed(seed);
            let mut worst: f64 = 0.0;
            for t in 0..*trials {
                let s = interior_spectrum(*n, &mut rng)?;
                let d = DensityMatrix::conjugated(&s, &random_unitary(*n, false, &mut rng))?;
                let x = random_direction(*n, false, &mut rng)?;
                let y = random_direction(*n, false, &mut rng)?;
                let fd = metric_fd_richardson(&d, &x, &y, *step)?;
                let err = (fd - kubo_mori(&d, &x, &y)?).abs();
                worst = worst.max(err);
                b.push(vec![t as f64], err, tol - err, 0.0);
            }
            b.diagnostic("max_abs_error", worst);
            b.diagnostic("tolerance", tol);
            Ok(reports_output(vec![b.finish()]))
        }
        Oracle::ScalFd {
            n,
            spectrum,
            trials,
            real,
            chart,
            step,
        } => {
            let tol = tol.unwrap_or(1e-3);
            let kind = match chart {
                ChartArg::Cone => ChartKind::Cone,
                ChartArg::StateSpace => ChartKind::StateSpace,
            };
            let bases: Vec<Spectrum> = match spectrum {
                Some(List(v)) => vec![Spectrum::new(v.clone())?],
                None => (0..*trials).map(|_| interior_spectrum(*n, &mut rng)).collect::<Res<_>>()?,
            };
            let offset = match kind {
                ChartKind::Cone => 0.0,
                ChartKind::StateSpace => slice_offset(bases[0].len(), *real),
            };
            let mut b = ReportBuilder::new(
                format!(
                    "scal_fd on the {} {} chart against {}{}",
                    if *real { "real" } else { "complex" },
                    match kind {
                        ChartKind::Cone => "cone",
                        ChartKind::StateSpace => "state-space",
                    },
                    if *real { "scal_real_offdiagonal" } else { "scal" },
                    if offset != 0.0 { format!(" + {offset}") } else { String::new() },
                ),
                ClaimClass::Proven,
                &["trial"],
            )
            .seed(seed);
            let mut fd_vals = Vec::new();
            let mut raw_worst: f64 = 0.0;
            for (t, s) in bases.iter().enumerate() {
                let u = random_unitary(s.len(), *real, &mut rng);
                let d = DensityMatrix::conjugated(s, &u)?;
                let c = match kind {
                    ChartKind::Cone => Chart::cone(d, *real, *step)?,
                    ChartKind::StateSpace => Chart::state_space(d, *real, *step)?,
                };
                let fd = scal_fd(&c)?;
                let (want, literal) = if *real {
                    (scal_real_offdiagonal(s), scal_real(s))
                } else {
                    (scal(s), scal(s))
                };
                let want = want + offset;
                let err = (fd - want).abs() / want.abs();
                raw_worst = raw_worst.max((fd - literal).abs() / literal.abs());
                b.push(vec![t as f64], fd, tol - err, 0.0);
                fd_vals.push(fd);
            }
            // The uncorrected comparison against the formula as printed.
            b.diagnostic(
                if *real { "max_rel_error_vs_scal_real" } else { "max_rel_error_vs_scal" },
                raw_worst,
            );
            b.diagnostic("offset", offset);
            b.diagnostic("tolerance", tol);
            Ok(reports_output(vec![b.finish()]))
        }
    }
}

fn cmd_chain(from: &List, to: &List, tol: Option<f64>) -> Res<Output> {
    let a = Spectrum::new(from.0.clone())?;
    let b = Spectrum::new(to.0.clone())?;
    let tol = tol.unwrap_or(1e-12);
    let chain = pair_chain(&a, &b)?;
    let members = chain.members();
    let entropy: Vec<f64> = members.iter().map(von_neumann_entropy).collect();
    let ok = entropy.windows(2).all(|w| w[1] <= w[0] + tol);
    let mut csv = String::from("member,entropy");
    for i in 0..a.len() {
        let _ = write!(csv, ",l{i}");
    }
    csv.push('\n');
    for (i, (m, e)) in members.iter().zip(&entropy).enumerate() {
        let _ = write!(csv, "{i},{}", fmt17(*e));
        for v in m.values() {
            let _ = write!(csv, ",{}", fmt17(*v));
        }
        csv.push('\n');
    }
    Ok(Output {
        body: json!({ "members": members, "entropy": entropy, "tolerance": tol }),
        csv,
        claim: json!(ClaimClass::Proven),
        ok,
    })
}

fn cmd_gibbs(h: &List, betas: Option<&List>, grid: usize, beta_max: f64, tol: Option<f64>) -> Res<Output> {
    let betas = match betas {
        Some(List(b)) => b.clone(),
        None => {
            if grid < 1 || !(beta_max > 0.0) {
                return Err(Failure::Usage("need --grid >= 1 and --beta-max > 0".into()));
            }
            (1..=grid).map(|i| beta_max * i as f64 / grid as f64).collect()
        }
    };
    let tol = tol.unwrap_or(1e-12);
    let path = GibbsPath::new(h.0.clone(), betas)?;
    let states = path.states()?;
    let entropy: Vec<f64> = states.iter().map(von_neumann_entropy).collect();
    let chain = path.is_majorisation_chain()?;
    let ok = chain && entropy.windows(2).all(|w| w[1] <= w[0] + tol);
    let mut csv = String::from("beta,entropy");
    for i in 0..h.0.len() {
        let _ = write!(csv, ",l{i}");
    }
    csv.push('\n');
    for ((beta, s), e) in path.betas().iter().zip(&states).zip(&entropy) {
        let _ = write!(csv, "{},{}", fmt17(*beta), fmt17(*e));
        for v in s.values() {
            let _ = write!(csv, ",{}", fmt17(*v));
        }
        csv.push('\n');
    }
    Ok(Output {
        body: json!({
            "betas": path.betas(),
            "states": states,
            "entropy": entropy,
            "majorisation_chain": chain,
        }),
        csv,
        claim: json!(ClaimClass::Proven),
        ok,
    })
}
