mod config;
mod output;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use leraykit::certificate::Certificate;
use leraykit::specialfn::{phi, phi_sandwich, precision_bits, SpecialFnError};
use leraykit::symbol::{
    boundedness_interval, leray_norm, monotonicity_scan, symbol_value, MeasureTag, Monotonicity, NormMethod,
    SymbolError, SymbolQuery,
};
use rayon::prelude::*;

use config::{parse_number, Format, Overrides, RunConfig};
use output::{bundle_json, col, emit, emit_table, fmt_num, Cell, Table};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Domain(String),
    #[error("{0}")]
    Io(String),
    #[error("certificate failure: {0}")]
    Certificate(String),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Certificate(_) => 1,
            _ => 2,
        }
    }
}

impl From<SymbolError> for CliError {
    fn from(e: SymbolError) -> Self {
        match e {
            SymbolError::UnboundedMode { gamma, d, k, interval } => {
                CliError::Domain(format!("d ∉ I_{k}({gamma}) = {interval} (d = {d}); the mode-{k} operator is unbounded"))
            }
            SymbolError::Unbounded { gamma, d, interval } => {
                CliError::Domain(format!("d ∉ I_0({gamma}) = {interval} (d = {d}); the transform is unbounded"))
            }
            other => CliError::Domain(other.to_string()),
        }
    }
}

impl From<SpecialFnError> for CliError {
    fn from(e: SpecialFnError) -> Self {
        CliError::Domain(e.to_string())
    }
}

#[derive(Parser)]
#[command(name = "leraykit", version, about = "Leray symbol functions, norms and certificate suites")]
struct Cli {
    #[command(flatten)]
    common: Common,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args, Default)]
struct Common {
    /// Config file of `key = value` lines; flags take precedence.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[arg(long, global = true)]
    tol: Option<f64>,
    #[arg(long, global = true)]
    k_max: Option<u64>,
    /// csv or json
    #[arg(long, global = true)]
    format: Option<String>,
    /// Output file (a directory for `figures`).
    #[arg(long, short, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, allow_hyphen_values = true)]
    grid_min: Option<f64>,
    #[arg(long, global = true)]
    grid_max: Option<f64>,
    #[arg(long, global = true)]
    grid_count: Option<usize>,
    /// log or linear
    #[arg(long, global = true)]
    grid_scale: Option<String>,
    /// Comma-separated d values for `figures j-sweep`.
    #[arg(long, global = true, allow_hyphen_values = true)]
    d_values: Option<String>,
    /// Comma-separated q values for `figures phi-sweep`; fractions allowed.
    #[arg(long, global = true, allow_hyphen_values = true)]
    q_values: Option<String>,
}

#[derive(Args)]
struct MeasureArgs {
    #[arg(long, allow_hyphen_values = true)]
    gamma: String,
    /// Exponent of the measure; fractions allowed.
    #[arg(long, allow_hyphen_values = true, conflicts_with = "measure")]
    d: Option<String>,
    /// pairing, preferred, dual-preferred or lebesgue
    #[arg(long)]
    measure: Option<String>,
}

#[derive(Subcommand)]
enum Cmd {
    /// J(d, γ, k) for one mode or a range `a..b` (inclusive).
    Symbol {
        #[command(flatten)]
        m: MeasureArgs,
        #[arg(long, default_value = "0")]
        k: String,
    },
    /// Norm of the full transform.
    Norm {
        #[command(flatten)]
        m: MeasureArgs,
    },
    /// Monotonicity of k ↦ J(d, γ, k) on 0..=k_max.
    Scan {
        #[command(flatten)]
        m: MeasureArgs,
    },
    /// Data behind the two figures, one CSV per parameter value.
    Figures {
        figure: Figure,
        /// γ for the j-sweep.
        #[arg(long, default_value = "5")]
        gamma: String,
    },
    /// Run certificate suites and write a JSON report.
    Certify { suite: Suite },
    /// Φ(r, q) at one r or over the configured grid.
    Phi {
        #[arg(long, allow_hyphen_values = true)]
        q: String,
        #[arg(long, allow_hyphen_values = true)]
        r: Option<String>,
    },
    Version,
}

#[derive(Clone, Copy, ValueEnum)]
enum Figure {
    JSweep,
    PhiSweep,
}

#[derive(Clone, Copy, ValueEnum)]
enum Suite {
    Bw,
    Em,
    All,
}

fn number(name: &str, v: &str) -> Result<f64, CliError> {
    parse_number(v).ok_or_else(|| CliError::Usage(format!("--{name}: cannot parse {v:?} as a number")))
}

impl MeasureArgs {
    fn resolve(&self) -> Result<(f64, MeasureTag), CliError> {
        let gamma = number("gamma", &self.gamma)?;
        let tag = match (&self.d, &self.measure) {
            (Some(d), None) => MeasureTag::Generic(number("d", d)?),
            (None, Some(name)) => MeasureTag::from_name(name)
                .ok_or_else(|| CliError::Usage(format!("unknown measure {name:?}")))?,
            _ => return Err(CliError::Usage("give exactly one of --d or --measure".into())),
        };
        Ok((gamma, tag))
    }
}

fn parse_k_range(s: &str) -> Result<(u64, u64), CliError> {
    let bad = || CliError::Usage(format!("--k: expected an integer or a range a..b, got {s:?}"));
    match s.split_once("..") {
        Some((a, b)) => {
            let a: u64 = a.trim().parse().map_err(|_| bad())?;
            let b: u64 = b.trim().trim_start_matches('=').parse().map_err(|_| bad())?;
            if a > b {
                return Err(bad());
            }
            Ok((a, b))
        }
        None => {
            let k = s.trim().parse().map_err(|_| bad())?;
            Ok((k, k))
        }
    }
}

fn symbol_table(gamma: f64, d: f64, ks: (u64, u64), tol: f64, name: String) -> Result<Table, CliError> {
    for k in ks.0..=ks.1 {
        let interval = boundedness_interval(gamma, k)?;
        if !interval.contains(d) {
            return Err(SymbolError::UnboundedMode { gamma, d, k, interval }.into());
        }
    }
    let values: Vec<_> = (ks.0..=ks.1)
        .into_par_iter()
        .map(|k| symbol_value(&SymbolQuery::new(gamma, d, k), tol).map(|v| (k, v)))
        .collect::<Result<_, _>>()?;
    let mut t = Table::new(
        name,
        vec![
            col("k", "Fourier mode"),
            col("J", "symbol J(d, gamma, k)"),
            col("sqrt_J", "norm of the mode-k operator"),
            col("bounded", "d lies in I_k(gamma)"),
            col("error_radius", "rigorous bound on |J - computed J|"),
        ],
    );
    for (k, v) in values {
        let s = v.sqrt();
        t.push(vec![
            Cell::Int(k as i64),
            Cell::Num(v.value_f64()),
            Cell::Num(s.value_f64()),
            Cell::Bool(true),
            Cell::Num(v.radius()),
        ]);
    }
    Ok(t)
}

fn cmd_symbol(cfg: &RunConfig, m: &MeasureArgs, k: &str) -> Result<(), CliError> {
    let (gamma, tag) = m.resolve()?;
    let d = tag.d(gamma);
    let ks = parse_k_range(k)?;
    let t = symbol_table(gamma, d, ks, cfg.tolerance, "symbol".into())?;
    emit_table(cfg, &t)
}

fn cmd_norm(cfg: &RunConfig, m: &MeasureArgs) -> Result<(), CliError> {
    let (gamma, tag) = m.resolve()?;
    let r = leray_norm(gamma, tag, cfg.tolerance)?;
    let detail = match &r.method {
        NormMethod::ClosedForm { formula } => formula.to_string(),
        NormMethod::SupSearch { argmax_k, cutoff_k, limit_dominates, .. } => match argmax_k {
            Some(k) => format!("argmax_k={k};cutoff_k={cutoff_k}"),
            None => format!("limit_dominates={limit_dominates};cutoff_k={cutoff_k}"),
        },
    };
    let mut t = Table::new(
        "norm",
        vec![
            col("gamma", "hypersurface exponent"),
            col("d", "measure exponent"),
            col("measure", "measure name"),
            col("norm", "operator norm"),
            col("error_radius", "error bound on the norm"),
            col("method", "closed-form or sup-search"),
            col("detail", "formula or search summary"),
        ],
    );
    t.push(vec![
        Cell::Num(gamma),
        Cell::Num(r.d),
        Cell::Text(tag.name().into()),
        Cell::Num(r.value.value_f64()),
        Cell::Num(r.value.radius()),
        Cell::Text(r.method.tag().into()),
        Cell::Text(detail),
    ]);
    emit_table(cfg, &t)
}

fn cmd_scan(cfg: &RunConfig, m: &MeasureArgs) -> Result<(), CliError> {
    let (gamma, tag) = m.resolve()?;
    let d = tag.d(gamma);
    let mono = monotonicity_scan(gamma, d, cfg.k_max, cfg.tolerance)?;
    let (label, turning) = match mono {
        Monotonicity::StrictlyDecreasing => ("strictly-decreasing", Cell::Empty),
        Monotonicity::StrictlyIncreasing => ("strictly-increasing", Cell::Empty),
        Monotonicity::Constant => ("constant", Cell::Empty),
        Monotonicity::NonMonotone { turning_k } => ("non-monotone", Cell::Int(turning_k as i64)),
    };
    let mut t = Table::new(
        "scan",
        vec![
            col("gamma", "hypersurface exponent"),
            col("d", "measure exponent"),
            col("k_max", "last mode scanned"),
            col("monotonicity", "shape of k -> J(d, gamma, k)"),
            col("turning_k", "first interior extremum, if any"),
        ],
    );
    t.push(vec![Cell::Num(gamma), Cell::Num(d), Cell::Int(cfg.k_max as i64), Cell::Text(label.into()), turning]);
    emit_table(cfg, &t)
}

fn phi_table(name: String, q: f64, rs: &[f64], tol: f64) -> Result<Table, CliError> {
    let rows: Vec<_> = rs
        .par_iter()
        .map(|&r| phi(r, q, tol).map(|v| (r, v, phi_sandwich(r, q).ok())))
        .collect::<Result<_, _>>()?;
    let mut t = Table::new(
        name,
        vec![
            col("r", "first argument"),
            col("q", "shift"),
            col("phi", "Phi(r, q)"),
            col("error_radius", "rigorous bound on |Phi - computed Phi|"),
            col("sandwich_lo", "elementary lower bound"),
            col("sandwich_hi", "elementary upper bound"),
        ],
    );
    for (r, v, s) in rows {
        let (lo, hi) = match s {
            Some((lo, hi)) => (Cell::Num(lo), Cell::Num(hi)),
            None => (Cell::Empty, Cell::Empty),
        };
        t.push(vec![Cell::Num(r), Cell::Num(q), Cell::Num(v.value_f64()), Cell::Num(v.radius()), lo, hi]);
    }
    Ok(t)
}

fn cmd_phi(cfg: &RunConfig, q: &str, r: Option<&str>) -> Result<(), CliError> {
    let q = number("q", q)?;
    let rs = match r {
        Some(r) => vec![number("r", r)?],
        None => {
            let g = cfg.grid_for(q);
            g.validate()?;
            g.points()
        }
    };
    let t = phi_table("phi".into(), q, &rs, cfg.tolerance)?;
    emit_table(cfg, &t)
}

fn value_tag(x: f64) -> String {
    fmt_num(x).replace('-', "m")
}

fn cmd_figures(cfg: &RunConfig, figure: Figure, gamma: &str) -> Result<(), CliError> {
    let dir = cfg.out.clone().unwrap_or_else(|| PathBuf::from("figures"));
    let tables: Vec<Table> = match figure {
        Figure::JSweep => {
            let gamma = number("gamma", gamma)?;
            cfg.d_values
                .iter()
                .map(|&d| symbol_table(gamma, d, (0, cfg.k_max), cfg.tolerance, format!("j-sweep_d_{}", value_tag(d))))
                .collect::<Result<_, _>>()?
        }
        Figure::PhiSweep => cfg
            .q_values
            .iter()
            .map(|&q| {
                let g = cfg.grid_for(q);
                g.validate()?;
                phi_table(format!("phi-sweep_q_{}", value_tag(q)), q, &g.points(), cfg.tolerance)
            })
            .collect::<Result<_, _>>()?,
    };
    match cfg.format {
        Format::Csv => {
            for t in &tables {
                emit(Some(&dir.join(format!("{}.csv", t.name))), &t.to_csv())?;
            }
        }
        Format::Json => {
            let name = match figure {
                Figure::JSweep => "j-sweep.json",
                Figure::PhiSweep => "phi-sweep.json",
            };
            emit(Some(&dir.join(name)), &bundle_json(cfg, &[], &tables))?;
        }
    }
    Ok(())
}

fn certificate_summary(certs: &[Certificate]) -> Table {
    let mut t = Table::new(
        "certificates",
        vec![
            col("claim_id", "certificate identifier"),
            col("method", "exact, bounded-numeric or numeric-evidence"),
            col("verdict", "verified, supports, refutes, failed or inconclusive"),
            col("witnesses", "number of recorded checks"),
            col("anchor", "claim being checked"),
        ],
    );
    for c in certs {
        let method = serde_json::to_value(c.method).ok().and_then(|v| v.as_str().map(String::from)).unwrap_or_default();
        let verdict = serde_json::to_value(c.verdict).ok().and_then(|v| v.as_str().map(String::from)).unwrap_or_default();
        t.push(vec![
            Cell::Text(c.claim_id.clone()),
            Cell::Text(method),
            Cell::Text(verdict),
            Cell::Int(c.witnesses.len() as i64),
            Cell::Text(c.anchor.clone()),
        ]);
    }
    t
}

fn cmd_certify(cfg: &RunConfig, suite: Suite) -> Result<(), CliError> {
    let mut certs = Vec::new();
    if matches!(suite, Suite::Bw | Suite::All) {
        certs.extend(leraykit::bwcert::bw_suite());
    }
    if matches!(suite, Suite::Em | Suite::All) {
        certs.extend(leraykit::emcert::em_suite());
    }
    let bundle = bundle_json(cfg, &certs, &[]);
    match (&cfg.out, cfg.format) {
        (Some(path), _) => {
            emit(Some(path), &bundle)?;
            emit(None, &certificate_summary(&certs).to_csv())?;
        }
        (None, Format::Json) => emit(None, &bundle)?,
        (None, Format::Csv) => emit(None, &certificate_summary(&certs).to_csv())?,
    }
    if let Some(bad) = certs.iter().find(|c| !c.verdict.is_success()) {
        let detail = leraykit::certificate::CertificateFailure::from_certificate(bad)
            .map(|f| f.detail)
            .unwrap_or_default();
        return Err(CliError::Certificate(format!("{} ({detail})", bad.claim_id)));
    }
    Ok(())
}

fn run(cli: Cli) -> Result<(), CliError> {
    let c = &cli.common;
    let flags = Overrides {
        tolerance: c.tol,
        k_max: c.k_max,
        grid_min: c.grid_min,
        grid_max: c.grid_max,
        grid_count: c.grid_count,
        grid_scale: c.grid_scale.clone(),
        format: c.format.clone(),
        out: c.out.clone(),
        d_values: c.d_values.clone(),
        q_values: c.q_values.clone(),
    };
    let cfg = RunConfig::load(c.config.as_deref().map(Path::new), &flags)?;
    match &cli.cmd {
        Cmd::Symbol { m, k } => cmd_symbol(&cfg, m, k),
        Cmd::Norm { m } => cmd_norm(&cfg, m),
        Cmd::Scan { m } => cmd_scan(&cfg, m),
        Cmd::Figures { figure, gamma } => cmd_figures(&cfg, *figure, gamma),
        Cmd::Certify { suite } => cmd_certify(&cfg, *suite),
        Cmd::Phi { q, r } => cmd_phi(&cfg, q, r.as_deref()),
        Cmd::Version => emit(
            None,
            &format!("leraykit {} (working precision {} bits)\n", env!("CARGO_PKG_VERSION"), precision_bits()),
        ),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
