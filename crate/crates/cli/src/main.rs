//! `ffwaring`: threshold tables, exact counts, predictions, verification
//! suites and arc reports over `F_q[t]`.
//!
//! Exit codes: 0 success, 1 user error, 2 internal invariant violation.

mod output;

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Duration;

use anyhow::Context;
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use ffwaring::algebra::{Field, FieldConfig, FieldSpec, Poly};
use ffwaring::arcs::{arc_reports, major_measure, sup_minor_scan, ArcParams};
use ffwaring::counting::{count_reps_bruteforce, count_reps_mitm, CountReport, StrictProblem};
use ffwaring::prediction::{
    compare_report, exceptional_scan, exceptional_scan_targets, predict_report, Psi,
};
use ffwaring::thresholds::{bounds_table, inject_lucas_fault};
use ffwaring::verify::{run_suite, Suite};
use ffwaring::{Error, WaringInstance, DEFAULT_BUDGET};

use output::{Envelope, Format, Table};

#[derive(Parser, Debug)]
#[command(name = "ffwaring", version, about = "Waring's problem over F_q[t]")]
struct Cli {
    /// Output format.
    #[arg(long, value_enum, global = true)]
    format: Option<Format>,
    /// JSON run configuration; command-line flags take precedence.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Worker threads (0 = all cores).
    #[arg(long, global = true, env = "FFWARING_THREADS")]
    threads: Option<usize>,
    /// Seed for every sampled quantity.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Cap on enumeration steps.
    #[arg(long, global = true)]
    budget: Option<u64>,
    /// Wall-clock cap in seconds.
    #[arg(long, global = true)]
    time_limit: Option<u64>,
    #[command(subcommand)]
    cmd: Command,
}

#[derive(Args, Debug, Clone)]
struct FieldArgs {
    /// Field order q, using the built-in modulus for extensions.
    #[arg(long, conflicts_with_all = ["p", "modulus"])]
    q: Option<u32>,
    /// Characteristic, with --e and --modulus for an explicit extension.
    #[arg(long)]
    p: Option<u32>,
    #[arg(long, requires = "p")]
    e: Option<u32>,
    /// Irreducible modulus over F_p, e.g. "t^2+1".
    #[arg(long, requires = "p")]
    modulus: Option<String>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Table of s_1, u_2, delta_0 and the sets behind them.
    Thresholds {
        /// Characteristics, comma separated.
        #[arg(long, value_delimiter = ',', required = true)]
        p: Vec<u64>,
        #[arg(long)]
        kmin: u64,
        #[arg(long)]
        kmax: u64,
    },
    /// Exact number of strict representations of n.
    Count {
        #[command(flatten)]
        field: FieldArgs,
        #[arg(long)]
        k: u32,
        #[arg(long)]
        s: u32,
        #[arg(long)]
        n: String,
        #[arg(long, value_enum, default_value = "mitm")]
        method: MethodArg,
    },
    /// Truncated singular series and main term for n.
    Predict {
        #[command(flatten)]
        field: FieldArgs,
        #[arg(long)]
        k: u32,
        #[arg(long)]
        s: u32,
        #[arg(long)]
        n: String,
        /// Truncation degree.
        #[arg(long = "G")]
        g: Option<u32>,
    },
    /// Main term against the exact count.
    Compare {
        #[command(flatten)]
        field: FieldArgs,
        #[arg(long)]
        k: u32,
        #[arg(long)]
        s: u32,
        #[arg(long)]
        n: String,
        #[arg(long = "G")]
        g: Option<u32>,
    },
    /// Run invariant suites.
    Verify {
        #[arg(long, value_enum, default_value = "all")]
        suite: SuiteArg,
        #[arg(long, hide = true)]
        inject_lucas_fault: bool,
    },
    /// Targets n with deg n < N whose count misses the prediction.
    ScanExceptional {
        #[command(flatten)]
        field: FieldArgs,
        #[arg(long = "N")]
        n_bound: Option<u32>,
        /// JSON list of target polynomials instead of all of I_N.
        #[arg(long, conflicts_with = "n_bound")]
        targets: Option<PathBuf>,
        #[arg(long)]
        k: u32,
        #[arg(long)]
        s: u32,
        #[arg(long = "G")]
        g: Option<u32>,
        /// "p+1" (default), "inf" or a positive number.
        #[arg(long, default_value = "p+1")]
        psi: String,
    },
    /// Major-arc centers and measure; optionally a minor-arc sup scan.
    Arcs {
        #[command(flatten)]
        field: FieldArgs,
        #[arg(long)]
        k: u32,
        #[arg(long = "X")]
        x: u32,
        /// Also sample |g| over minor-arc windows.
        #[arg(long)]
        minor_scan: bool,
    },
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum MethodArg {
    Brute,
    Mitm,
    Both,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum SuiteArg {
    Algebra,
    Sums,
    Arcs,
    Counts,
    Thresholds,
    All,
}

impl From<SuiteArg> for Suite {
    fn from(s: SuiteArg) -> Suite {
        match s {
            SuiteArg::Algebra => Suite::Algebra,
            SuiteArg::Sums => Suite::Sums,
            SuiteArg::Arcs => Suite::Arcs,
            SuiteArg::Counts => Suite::Counts,
            SuiteArg::Thresholds => Suite::Thresholds,
            SuiteArg::All => Suite::All,
        }
    }
}

/// Settings shared by every command, from the config file and flags.
#[derive(Clone, Debug, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RunConfig {
    field: Option<FieldConfig>,
    budget: Option<u64>,
    time_limit: Option<u64>,
    format: Option<Format>,
    seed: Option<u64>,
    #[serde(rename = "G")]
    g: Option<u32>,
    threads: Option<usize>,
}

/// What a command needs after merging config and flags.
struct Resolved {
    budget: u64,
    time_limit: Option<u64>,
    format: Format,
    seed: u64,
    g: u32,
    file_field: Option<FieldConfig>,
}

const DEFAULT_G: u32 = 2;

/// Failure classes mapped onto exit codes.
enum Failure {
    User(anyhow::Error),
    Internal(anyhow::Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Failure {
        if e.is_internal() {
            Failure::Internal(e.into())
        } else {
            Failure::User(e.into())
        }
    }
}

impl From<anyhow::Error> for Failure {
    fn from(e: anyhow::Error) -> Failure {
        match e.downcast_ref::<Error>() {
            Some(inner) if inner.is_internal() => Failure::Internal(e),
            _ => Failure::User(e),
        }
    }
}

type CmdResult = Result<ExitCode, Failure>;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(code) => code,
        Err(Failure::User(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
        Err(Failure::Internal(e)) => {
            eprintln!("internal error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn load_config(path: &Option<PathBuf>) -> anyhow::Result<RunConfig> {
    let Some(path) = path else {
        return Ok(RunConfig::default());
    };
    let text =
        std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))
}

fn run(cli: Cli) -> CmdResult {
    let cfg = load_config(&cli.config)?;
    let res = Resolved {
        budget: cli.budget.or(cfg.budget).unwrap_or(DEFAULT_BUDGET),
        time_limit: cli.time_limit.or(cfg.time_limit),
        format: cli.format.or(cfg.format).unwrap_or(Format::Json),
        seed: cli.seed.or(cfg.seed).unwrap_or(0),
        g: cfg.g.unwrap_or(DEFAULT_G),
        file_field: cfg.field.clone(),
    };
    if res.budget == 0 || res.time_limit == Some(0) {
        return Err(Failure::User(anyhow::anyhow!("budgets must be positive")));
    }
    if let Some(n) = cli.threads.or(cfg.threads) {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .context("configuring the thread pool")?;
    }
    if let Some(secs) = res.time_limit {
        std::thread::spawn(move || {
            std::thread::sleep(Duration::from_secs(secs));
            eprintln!("error: time limit of {secs}s exceeded");
            std::process::exit(1);
        });
    }

    match cli.cmd {
        Command::Thresholds { p, kmin, kmax } => cmd_thresholds(&res, &p, kmin, kmax),
        Command::Count {
            field,
            k,
            s,
            n,
            method,
        } => cmd_count(&res, &field, k, s, &n, method),
        Command::Predict { field, k, s, n, g } => cmd_predict(&res, &field, k, s, &n, g, false),
        Command::Compare { field, k, s, n, g } => cmd_predict(&res, &field, k, s, &n, g, true),
        Command::Verify {
            suite,
            inject_lucas_fault: fault,
        } => cmd_verify(&res, suite.into(), fault),
        Command::ScanExceptional {
            field,
            n_bound,
            targets,
            k,
            s,
            g,
            psi,
        } => cmd_scan(&res, &field, n_bound, targets, k, s, g, &psi),
        Command::Arcs {
            field,
            k,
            x,
            minor_scan,
        } => cmd_arcs(&res, &field, k, x, minor_scan),
    }
}

fn field_spec(res: &Resolved, a: &FieldArgs) -> Result<FieldSpec, Failure> {
    let cfg = match (a.q, a.p) {
        (Some(q), _) => return Ok(FieldSpec::canonical(q)?),
        (None, Some(p)) => FieldConfig {
            p,
            e: a.e.unwrap_or(1),
            modulus: a.modulus.clone(),
        },
        (None, None) => res.file_field.clone().ok_or_else(|| {
            Failure::User(anyhow::anyhow!(
                "no field given: pass --q, --p or a config field"
            ))
        })?,
    };
    Ok(cfg.to_spec()?)
}

fn envelope<'a>(res: &Resolved, command: &'a str, field: Option<&'a FieldSpec>) -> Envelope<'a> {
    Envelope::new(command, field, res.budget, res.time_limit, res.seed)
}

fn cmd_thresholds(res: &Resolved, ps: &[u64], kmin: u64, kmax: u64) -> CmdResult {
    let rows = bounds_table(ps, kmin, kmax)?;
    let table = Table::new(
        ffwaring::thresholds::TABLE_COLUMNS
            .iter()
            .map(|s| s.to_string())
            .collect(),
        rows.iter().map(|r| r.table_row()).collect(),
    );
    envelope(res, "thresholds", None).emit(res.format, &rows, &table)?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_count(
    res: &Resolved,
    fa: &FieldArgs,
    k: u32,
    s: u32,
    n: &str,
    method: MethodArg,
) -> CmdResult {
    let spec = field_spec(res, fa)?;
    let f = Field::new(spec.clone());
    let n = Poly::parse(n, &f)?;
    let prob = StrictProblem::new(WaringInstance::new(f, k, s)?, n)?;
    let mut reports = Vec::new();
    if matches!(method, MethodArg::Brute | MethodArg::Both) {
        reports.push(CountReport::new(
            &prob,
            count_reps_bruteforce(&prob, res.budget)?,
            "brute",
        )?);
    }
    if matches!(method, MethodArg::Mitm | MethodArg::Both) {
        reports.push(CountReport::new(
            &prob,
            count_reps_mitm(&prob, res.budget)?,
            "mitm",
        )?);
    }
    if reports.windows(2).any(|w| w[0].count != w[1].count) {
        return Err(Error::InvariantViolation(format!(
            "brute force {} and meet in the middle {} disagree",
            reports[0].count, reports[1].count
        ))
        .into());
    }
    let table = Table::new(
        [
            "n",
            "k",
            "s",
            "q",
            "P",
            "X",
            "exceptional",
            "count",
            "method",
        ]
        .map(String::from)
        .to_vec(),
        reports
            .iter()
            .map(|r| {
                vec![
                    r.n.clone(),
                    r.k.to_string(),
                    r.s.to_string(),
                    r.q.to_string(),
                    r.p.to_string(),
                    r.x.to_string(),
                    r.exceptional.to_string(),
                    r.count.clone(),
                    r.method.clone(),
                ]
            })
            .collect(),
    );
    envelope(res, "count", Some(&spec)).emit(res.format, &reports, &table)?;
    Ok(ExitCode::SUCCESS)
}

const PREDICTION_COLUMNS: [&str; 8] = [
    "n",
    "deg_n",
    "P",
    "count",
    "main_term",
    "ratio",
    "discrepancy_scaled",
    "stabilization",
];

#[allow(clippy::too_many_arguments)]
fn cmd_predict(
    res: &Resolved,
    fa: &FieldArgs,
    k: u32,
    s: u32,
    n: &str,
    g: Option<u32>,
    with_count: bool,
) -> CmdResult {
    let spec = field_spec(res, fa)?;
    let f = Field::new(spec.clone());
    let n = Poly::parse(n, &f)?;
    let inst = WaringInstance::new(f, k, s)?;
    let g = g.unwrap_or(res.g);
    let rep = if with_count {
        compare_report(&n, &inst, g, res.budget)?
    } else {
        predict_report(&n, &inst, g, res.budget)?
    };
    let opt = |x: Option<f64>| x.map(|v| v.to_string()).unwrap_or_default();
    let table = Table::new(
        PREDICTION_COLUMNS.map(String::from).to_vec(),
        vec![vec![
            rep.n.clone(),
            rep.deg_n.to_string(),
            rep.p.to_string(),
            rep.exact_count.clone().unwrap_or_default(),
            rep.main_term.to_string(),
            opt(rep.ratio),
            opt(rep.discrepancy_scaled),
            opt(rep.stabilization),
        ]],
    );
    let name = if with_count { "compare" } else { "predict" };
    envelope(res, name, Some(&spec)).emit(res.format, &rep, &table)?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_verify(res: &Resolved, suite: Suite, fault: bool) -> CmdResult {
    if fault {
        inject_lucas_fault(true);
    }
    let rep = run_suite(suite, res.seed);
    let table = Table::new(
        ["check", "passed", "detail"].map(String::from).to_vec(),
        rep.checks
            .iter()
            .map(|c| vec![c.name.clone(), c.passed.to_string(), c.detail.clone()])
            .collect(),
    );
    envelope(res, "verify", None).emit(res.format, &rep, &table)?;
    if rep.passed {
        Ok(ExitCode::SUCCESS)
    } else {
        eprintln!("failed invariants: {}", rep.failures.join(", "));
        Ok(ExitCode::from(2))
    }
}

fn parse_psi(s: &str) -> Result<Psi, Failure> {
    match s {
        "p+1" | "P+1" => Ok(Psi::PPlusOne),
        "inf" | "infinite" => Ok(Psi::Infinite),
        other => match other.parse::<f64>() {
            Ok(c) if c > 0.0 && c.is_finite() => Ok(Psi::Constant(c)),
            _ => Err(Failure::User(anyhow::anyhow!(
                "psi must be p+1, inf or a positive number, got {other:?}"
            ))),
        },
    }
}

#[allow(clippy::too_many_arguments)]
fn cmd_scan(
    res: &Resolved,
    fa: &FieldArgs,
    n_bound: Option<u32>,
    targets: Option<PathBuf>,
    k: u32,
    s: u32,
    g: Option<u32>,
    psi: &str,
) -> CmdResult {
    let spec = field_spec(res, fa)?;
    let f = Field::new(spec.clone());
    let inst = WaringInstance::new(f.clone(), k, s)?;
    let psi = parse_psi(psi)?;
    let g = g.unwrap_or(res.g);
    let rep = match (n_bound, targets) {
        (Some(nb), None) => exceptional_scan(nb, &inst, g, psi, res.budget)?,
        (None, Some(path)) => {
            let text = std::fs::read_to_string(&path)
                .with_context(|| format!("reading {}", path.display()))?;
            let list: Vec<String> =
                serde_json::from_str(&text).context("targets must be a JSON list of strings")?;
            let polys = list
                .iter()
                .map(|t| Poly::parse(t, &f))
                .collect::<Result<Vec<_>, _>>()?;
            exceptional_scan_targets(&polys, &inst, g, psi, res.budget)?
        }
        _ => {
            return Err(Failure::User(anyhow::anyhow!(
                "give exactly one of --N or --targets"
            )))
        }
    };
    let table = Table::new(
        ffwaring::prediction::SCAN_COLUMNS
            .map(String::from)
            .to_vec(),
        rep.rows.iter().map(|r| r.table_row()).collect(),
    );
    envelope(res, "scan-exceptional", Some(&spec)).emit(res.format, &rep, &table)?;
    Ok(ExitCode::SUCCESS)
}

#[derive(Serialize)]
struct ArcsOutput {
    params: ArcParams,
    measure: String,
    arcs: Vec<ffwaring::arcs::ArcReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    minor_scan: Option<ffwaring::arcs::MinorScanReport>,
}

fn cmd_arcs(res: &Resolved, fa: &FieldArgs, k: u32, x: u32, minor: bool) -> CmdResult {
    let spec = field_spec(res, fa)?;
    let f = Field::new(spec.clone());
    let params = ArcParams::new(k, x)?;
    let arcs = arc_reports(&params, &f);
    let measure = major_measure(&params, f.q()).to_string();
    let minor_scan = if minor {
        Some(sup_minor_scan(&f, k, x, res.budget, res.seed)?)
    } else {
        None
    };
    let table = Table::new(
        ["a", "g", "measure"].map(String::from).to_vec(),
        arcs.iter()
            .map(|r| {
                vec![
                    r.center.a.clone(),
                    r.center.g.clone(),
                    format!("{}/{}", r.measure_num, r.measure_den),
                ]
            })
            .collect(),
    );
    let out = ArcsOutput {
        params,
        measure,
        arcs,
        minor_scan,
    };
    envelope(res, "arcs", Some(&spec)).emit(res.format, &out, &table)?;
    Ok(ExitCode::SUCCESS)
}
