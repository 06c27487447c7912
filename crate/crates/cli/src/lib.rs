//! Command-line front end for the `qchernoff` library.
//!
//! Single results are printed as JSON records; sweeps are CSV tables written
//! to `--out` (or standard output). Exit status is 0 on success, 2 for
//! invalid input and 3 when the quantity is undefined for valid input.

pub mod report;
pub mod spec;

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde_json::{Map, Value};

use qchernoff::chernoff::{
    bounds_report, classical_chernoff, fidelity, helstrom_error, quantum_chernoff, ChernoffResult,
};
use qchernoff::gaussian::{
    ds2_gaussian, gaussian_chernoff, jeffreys_qc_gaussian, overlap, GaussianDifferentials, GaussianMetric,
};
use qchernoff::geometry::{cd_constant, ds2_bures, ds2_cc, ds2_qc, geodesic_qc_qubit, QcSampler, TangentDirection};
use qchernoff::localdisc::{d_cc_pure, d_cc_qubit_with_starts, DEFAULT_STARTS};
use qchernoff::multicopy::{helstrom_ncopy_qubit, pure_ncopy_error, rate_extrapolate};
use qchernoff::states::{tensor_power_small, DensityMatrix, QubitState};

use report::{field, num, record, InputDigest, Table};
use spec::{Loaded, StateSpecFile};

/// Environment variable that caps the worker threads used by sweeps.
pub const THREADS_ENV: &str = "QCHERNOFF_THREADS";

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Validation(String),
    #[error("{0}")]
    Domain(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Validation(_) => 2,
            CliError::Domain(_) => 3,
        }
    }
}

impl From<qchernoff::Error> for CliError {
    fn from(e: qchernoff::Error) -> Self {
        if e.is_validation() {
            CliError::Validation(e.to_string())
        } else {
            CliError::Domain(e.to_string())
        }
    }
}

#[derive(Parser, Debug)]
#[command(name = "qchernoff", version, about = "Distinguishability of quantum states")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct Pair {
    /// First state file (hypothesis 0).
    #[arg(long)]
    a: PathBuf,
    /// Second state file (hypothesis 1).
    #[arg(long)]
    b: PathBuf,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum MetricKind {
    Qc,
    Bures,
    Cc,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum GaussianMetricKind {
    Qc,
    Cc,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Prior {
    Qc,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Chernoff bound; classical for two distributions, Gaussian for two Gaussian states.
    Chernoff(Pair),
    /// Minimum error probability of a single measurement.
    Helstrom {
        #[command(flatten)]
        pair: Pair,
        #[arg(long, default_value_t = 0.5)]
        pi0: f64,
    },
    /// Helstrom error, Chernoff and fidelity bounds in their chain order.
    Bounds(Pair),
    /// Best exponent of identical two-outcome measurements on qubits.
    Dcc {
        #[command(flatten)]
        pair: Pair,
        #[arg(long, default_value_t = DEFAULT_STARTS)]
        starts: usize,
    },
    /// Collective error probability for n copies.
    Multicopy {
        #[command(flatten)]
        pair: Pair,
        #[arg(long)]
        n: Option<u32>,
        #[arg(long)]
        n_min: Option<u32>,
        #[arg(long)]
        n_max: Option<u32>,
        /// Fit the error rate over the range and compare it with the Chernoff exponent.
        #[arg(long)]
        extrapolate: bool,
        #[arg(long, default_value_t = 0.5)]
        pi0: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Volume constants of the Chernoff-metric eigenvalue density.
    Constants {
        #[arg(long)]
        cd: usize,
    },
    /// Squared line element at a state along a direction.
    Metric {
        #[arg(long, value_enum)]
        which: MetricKind,
        #[arg(long)]
        rho: PathBuf,
        /// Traceless matrix, or a Bloch vector `v` meaning `v·σ/2`.
        #[arg(long)]
        direction: PathBuf,
    },
    /// Chernoff-metric geodesic distance between two qubits.
    Geodesic(Pair),
    /// Random density matrices from the Chernoff-metric prior.
    Sample {
        #[arg(long, value_enum)]
        prior: Prior,
        #[arg(long)]
        d: usize,
        #[arg(long)]
        count: usize,
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Single-mode Gaussian states.
    Gaussian {
        #[command(subcommand)]
        command: GaussianCommand,
    },
    /// Exponent curves of two equal-purity qubits against their Bloch radius.
    Figure1 {
        /// Angle between the Bloch vectors.
        #[arg(long)]
        theta: f64,
        #[arg(long)]
        steps: usize,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, default_value_t = DEFAULT_STARTS)]
        starts: usize,
    },
}

#[derive(Subcommand, Debug)]
enum GaussianCommand {
    Chernoff(Pair),
    Overlap(Pair),
    Metric {
        #[arg(long, value_enum)]
        which: GaussianMetricKind,
        #[arg(long)]
        state: PathBuf,
        #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
        dbeta: f64,
        #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
        dq: f64,
        #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
        dp: f64,
        #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
        dr: f64,
        #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
        dphi: f64,
    },
    /// Unnormalized Jeffreys prior of the Chernoff metric.
    Prior {
        #[arg(long)]
        beta: f64,
        #[arg(long)]
        r: f64,
    },
}

/// What a command produced.
enum Output {
    Json(Map<String, Value>, Option<u64>),
    Csv(Table, Option<PathBuf>, Option<u64>),
    /// A JSON summary plus a table that goes only to a file.
    Both(Map<String, Value>, Table, Option<PathBuf>),
}

struct Ctx {
    digest: InputDigest,
}

impl Ctx {
    fn load(&mut self, path: &Path) -> Result<StateSpecFile, CliError> {
        let bytes = std::fs::read(path)
            .map_err(|e| CliError::Validation(format!("cannot read {}: {e}", path.display())))?;
        self.digest.add_file(&bytes);
        serde_json::from_slice(&bytes)
            .map_err(|e| CliError::Validation(format!("malformed state file {}: {e}", path.display())))
    }

    fn state(&mut self, path: &Path) -> Result<Loaded, CliError> {
        self.load(path)?.load()
    }

    fn pair(&mut self, p: &Pair) -> Result<(Loaded, Loaded), CliError> {
        Ok((self.state(&p.a)?, self.state(&p.b)?))
    }
}

/// Runs the command line `argv` (program name first), writing reports to `out`
/// and diagnostics to `err`. Returns the exit status.
pub fn run<O: Write, E: Write>(argv: &[String], out: &mut O, err: &mut E) -> i32 {
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = out.write_all(text.as_bytes());
                    0
                }
                _ => {
                    let _ = err.write_all(text.as_bytes());
                    2
                }
            };
        }
    };
    let echo = &argv[1.min(argv.len())..];
    let mut ctx = Ctx { digest: InputDigest::new(echo) };
    let result = with_thread_override(|| execute(cli.command, &mut ctx));
    let emitted = result.and_then(|output| emit(output, echo, &ctx.digest, out));
    match emitted {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}

fn with_thread_override<T: Send>(f: impl FnOnce() -> T + Send) -> T {
    match std::env::var(THREADS_ENV).ok().and_then(|v| v.parse::<usize>().ok()) {
        Some(n) if n > 0 => match rayon::ThreadPoolBuilder::new().num_threads(n).build() {
            Ok(pool) => pool.install(f),
            Err(_) => f(),
        },
        _ => f(),
    }
}

fn emit<O: Write>(output: Output, echo: &[String], digest: &InputDigest, out: &mut O) -> Result<(), CliError> {
    let io = |e: std::io::Error| CliError::Validation(format!("write failed: {e}"));
    let write_table = |table: &Table, path: &Path| {
        std::fs::write(path, table.render())
            .map_err(|e| CliError::Validation(format!("cannot write {}: {e}", path.display())))
    };
    let file_summary = |table: &Table, path: &Path| {
        let mut m = Map::new();
        m.insert("output".into(), Value::String(path.display().to_string()));
        m.insert("rows".into(), Value::from(table.rows.len()));
        m
    };
    match output {
        Output::Json(m, seed) => out.write_all(record(echo, digest, seed, m).as_bytes()).map_err(io),
        Output::Csv(table, None, _) => out.write_all(table.render().as_bytes()).map_err(io),
        Output::Csv(table, Some(path), seed) => {
            write_table(&table, &path)?;
            out.write_all(record(echo, digest, seed, file_summary(&table, &path)).as_bytes()).map_err(io)
        }
        Output::Both(mut m, table, path) => {
            if let Some(path) = path {
                write_table(&table, &path)?;
                m.extend(file_summary(&table, &path));
            }
            out.write_all(record(echo, digest, None, m).as_bytes()).map_err(io)
        }
    }
}

fn obj<const N: usize>(entries: [(&str, Value); N]) -> Map<String, Value> {
    entries.into_iter().map(|(k, v)| (k.to_string(), v)).collect()
}

fn chernoff_fields(kind: &str, r: &ChernoffResult) -> Map<String, Value> {
    obj([
        ("kind", Value::String(kind.into())),
        ("q", num(r.q)),
        ("s_star", num(r.s_star)),
        ("exponent", num(r.exponent.value())),
    ])
}

fn execute(command: Command, ctx: &mut Ctx) -> Result<Output, CliError> {
    match command {
        Command::Chernoff(pair) => {
            let (a, b) = ctx.pair(&pair)?;
            let result = match (&a, &b) {
                (Loaded::Distribution(p0), Loaded::Distribution(p1)) => classical_chernoff(p0, p1)?,
                (Loaded::Gaussian(g0), Loaded::Gaussian(g1)) => gaussian_chernoff(g0, g1),
                (Loaded::Density(r0), Loaded::Density(r1)) => quantum_chernoff(r0, r1)?,
                _ => {
                    return Err(CliError::Validation(format!("cannot compare a {} input with a {} input", a.kind(), b.kind())))
                }
            };
            Ok(Output::Json(chernoff_fields(a.kind(), &result), None))
        }
        Command::Helstrom { pair, pi0 } => {
            let (a, b) = ctx.pair(&pair)?;
            let pe = helstrom_error(&a.density()?, &b.density()?, pi0)?;
            Ok(Output::Json(obj([("pi0", num(pi0)), ("helstrom_pe", num(pe))]), None))
        }
        Command::Bounds(pair) => {
            let (a, b) = ctx.pair(&pair)?;
            let rep = bounds_report(&a.density()?, &b.density()?)?;
            let mut m: Map<String, Value> = rep.chain().iter().map(|(k, v)| (k.to_string(), num(*v))).collect();
            m.insert("fidelity".into(), num(rep.fidelity));
            m.insert("min_slack".into(), num(rep.min_slack()));
            Ok(Output::Json(m, None))
        }
        Command::Dcc { pair, starts } => {
            let (a, b) = ctx.pair(&pair)?;
            let (q0, q1) = (a.qubit()?, b.qubit()?);
            if q0.is_pure() && q1.is_pure() {
                let d = d_cc_pure(&q0.density(), &q1.density())?;
                return Ok(Output::Json(obj([("d_cc", num(d.value())), ("regime", Value::String("pure".into()))]), None));
            }
            let res = d_cc_qubit_with_starts(&q0, &q1, starts)?;
            let e0 = res.povm.e0().as_matrix();
            let povm: Vec<Value> = (0..2)
                .map(|i| Value::Array((0..2).map(|j| Value::Array(vec![num(e0[(i, j)].re), num(e0[(i, j)].im)])).collect()))
                .collect();
            Ok(Output::Json(
                obj([
                    ("d_cc", num(res.d_cc)),
                    ("s_star", num(res.s_star)),
                    ("regime", Value::String(res.regime.name().into())),
                    ("e0", Value::Array(povm)),
                    ("starts", Value::from(starts)),
                ]),
                None,
            ))
        }
        Command::Multicopy { pair, n, n_min, n_max, extrapolate, pi0, out } => {
            let (a, b) = ctx.pair(&pair)?;
            let range: Vec<u32> = match (n, n_min, n_max) {
                (Some(n), None, None) if !extrapolate => vec![n],
                (None, Some(lo), Some(hi)) if lo <= hi => (lo..=hi).collect(),
                _ => {
                    return Err(CliError::Validation(
                        "give either --n, or --n-min and --n-max with n-min ≤ n-max (required for --extrapolate)".into(),
                    ))
                }
            };
            let (r0, r1) = (a.density()?, b.density()?);
            let pes: Vec<f64> = range
                .par_iter()
                .map(|&n| ncopy_error(&r0, &r1, n, pi0))
                .collect::<Result<_, _>>()?;
            if range.len() == 1 {
                return Ok(Output::Json(obj([("n", Value::from(range[0])), ("pi0", num(pi0)), ("pe", num(pes[0]))]), None));
            }
            let mut table = Table::new(["n", "pe", "neg_log_pe_per_n"]);
            for (&n, &pe) in range.iter().zip(&pes) {
                table.rows.push(vec![n.to_string(), field(pe), field(-pe.ln() / n as f64)]);
            }
            if !extrapolate {
                return Ok(Output::Csv(table, out, None));
            }
            let fit = rate_extrapolate(&range.iter().copied().zip(pes.iter().copied()).collect::<Vec<_>>())?;
            let d_qc = quantum_chernoff(&r0, &r1)?.exponent.value();
            let m = obj([
                ("slope", num(fit.slope)),
                ("intercept", num(fit.intercept)),
                ("residual", num(fit.residual)),
                ("d_qc", num(d_qc)),
                ("relative_deviation", num((fit.slope - d_qc) / d_qc)),
                ("n_min", Value::from(range[0])),
                ("n_max", Value::from(*range.last().unwrap())),
            ]);
            Ok(Output::Both(m, table, out))
        }
        Command::Constants { cd } => Ok(Output::Json(obj([("d", Value::from(cd)), ("cd", num(cd_constant(cd)?))]), None)),
        Command::Metric { which, rho, direction } => {
            let rho = ctx.state(&rho)?.density()?;
            let dir = TangentDirection::new(ctx.load(&direction)?.direction()?)?;
            let v = match which {
                MetricKind::Qc => ds2_qc(&rho, &dir)?,
                MetricKind::Bures => ds2_bures(&rho, &dir)?,
                MetricKind::Cc => ds2_cc(&rho, &dir)?,
            };
            Ok(Output::Json(obj([("ds2", num(v))]), None))
        }
        Command::Geodesic(pair) => {
            let (a, b) = ctx.pair(&pair)?;
            Ok(Output::Json(obj([("distance", num(geodesic_qc_qubit(&a.qubit()?, &b.qubit()?)))]), None))
        }
        Command::Sample { prior: Prior::Qc, d, count, seed, out } => {
            let sampler = QcSampler::new(d)?;
            let rows: Vec<Vec<String>> = (0..count)
                .into_par_iter()
                .map(|i| {
                    let mut rng = ChaCha8Rng::seed_from_u64(seed);
                    rng.set_stream(i as u64);
                    let rho = sampler.sample(&mut rng)?;
                    let mut row = vec![i.to_string()];
                    row.extend(rho.spectrum().iter().map(|&l| field(l.max(0.0))));
                    row.push(field(rho.purity()));
                    Ok(row)
                })
                .collect::<Result<_, qchernoff::Error>>()?;
            let mut header = vec!["index".to_string()];
            header.extend((1..=d).map(|k| format!("lambda_{k}")));
            header.push("purity".into());
            let mut table = Table::new(header);
            table.rows = rows;
            Ok(Output::Csv(table, out, Some(seed)))
        }
        Command::Gaussian { command } => gaussian(command, ctx),
        Command::Figure1 { theta, steps, out, starts } => {
            if steps == 0 {
                return Err(CliError::Validation("--steps must be positive".into()));
            }
            let rows: Vec<Vec<String>> = (1..=steps)
                .into_par_iter()
                .map(|k| figure1_row(k as f64 / steps as f64, theta, starts))
                .collect::<Result<_, CliError>>()?;
            let mut table = Table::new(["r", "d_qc", "d_cc", "fid_lower", "fid_upper"]);
            table.rows = rows;
            Ok(Output::Csv(table, out, None))
        }
    }
}

fn ncopy_error(r0: &DensityMatrix, r1: &DensityMatrix, n: u32, pi0: f64) -> Result<f64, CliError> {
    if r0.dim() == 2 && r1.dim() == 2 {
        let (q0, q1) = (qchernoff::states::to_bloch(r0)?, qchernoff::states::to_bloch(r1)?);
        if q0.is_pure() && q1.is_pure() {
            return Ok(pure_ncopy_error(&q0, &q1, n, pi0)?);
        }
        if !q0.is_pure() && !q1.is_pure() {
            return Ok(helstrom_ncopy_qubit(&q0, &q1, n, pi0)?);
        }
    }
    Ok(helstrom_error(&tensor_power_small(r0, n)?, &tensor_power_small(r1, n)?, pi0)?)
}

fn figure1_row(r: f64, theta: f64, starts: usize) -> Result<Vec<String>, CliError> {
    let q0 = QubitState::in_xz_plane(r, 0.0)?;
    let q1 = QubitState::in_xz_plane(r, theta)?;
    let (r0, r1) = (q0.density(), q1.density());
    let d_qc = quantum_chernoff(&r0, &r1)?.exponent.value();
    let f = fidelity(&r0, &r1)?;
    let d_cc = if q0.is_pure() && q1.is_pure() {
        d_cc_pure(&r0, &r1)?.value()
    } else {
        d_cc_qubit_with_starts(&q0, &q1, starts)?.d_cc
    };
    Ok(vec![field(r), field(d_qc), field(d_cc), field(-0.5 * f.ln()), field(-f.ln())])
}

fn gaussian(command: GaussianCommand, ctx: &mut Ctx) -> Result<Output, CliError> {
    match command {
        GaussianCommand::Chernoff(pair) => {
            let (a, b) = ctx.pair(&pair)?;
            let res = gaussian_chernoff(&a.gaussian()?, &b.gaussian()?);
            Ok(Output::Json(chernoff_fields("gaussian", &res), None))
        }
        GaussianCommand::Overlap(pair) => {
            let (a, b) = ctx.pair(&pair)?;
            Ok(Output::Json(obj([("overlap", num(overlap(&a.gaussian()?, &b.gaussian()?)))]), None))
        }
        GaussianCommand::Metric { which, state, dbeta, dq, dp, dr, dphi } => {
            let g = ctx.state(&state)?.gaussian()?;
            let which = match which {
                GaussianMetricKind::Qc => GaussianMetric::Qc,
                GaussianMetricKind::Cc => GaussianMetric::Cc,
            };
            let d = GaussianDifferentials { dbeta, dq, dp, dr, dphi };
            Ok(Output::Json(obj([("ds2", num(ds2_gaussian(which, &g, &d)?))]), None))
        }
        GaussianCommand::Prior { beta, r } => {
            Ok(Output::Json(obj([("jeffreys_qc", num(jeffreys_qc_gaussian(beta, r)?))]), None))
        }
    }
}
