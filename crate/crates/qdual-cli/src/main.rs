//! `qdual` command-line front end.
//!
//! Exit codes: 0 when every requested check passes, 1 when a check fails,
//! 2 on usage or domain errors.

mod config;
mod output;

use std::collections::BTreeMap;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use qdual::families::{eval_rec, eval_series, eval_series_at, lattice, qdiff_residual, registry, Branch, FamilyId, Params, Point};
use qdual::identities::{self, default_grid, registry_list, IdentityCheck, IdentityId, ParamMap};
use qdual::jacobi::{spectrum_match, OperatorKind, OperatorTag, SpectrumReport};
use qdual::ortho_duality::{biortho_check, relation_report, unitarity_check, OrthoSpec, Perturbation, RelationId, ResidualReport};
use qdual::qkernel::QContext;
use qdual::QError;

use config::RunConfig;
use output::{emit, point};

#[derive(Debug)]
pub enum CliError {
    /// Bad flags or parameters outside a domain: exit 2.
    Usage(String),
    /// A numerical routine could not produce a certified value: exit 1.
    Failed(String),
    Io(String),
}

impl From<QError> for CliError {
    fn from(e: QError) -> Self {
        match e {
            QError::DivergentSeries { .. }
            | QError::TermCapExceeded { .. }
            | QError::NoConvergence { .. }
            | QError::TailNotBounded { .. }
            | QError::InputNotOrthogonal { .. } => CliError::Failed(e.to_string()),
            _ => CliError::Usage(e.to_string()),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
}

#[derive(Parser)]
#[command(name = "qdual", version, about = "Evaluate and verify q-orthogonal polynomial families and their duals")]
struct Cli {
    #[command(flatten)]
    global: GlobalArgs,
    #[command(subcommand)]
    command: Command,
}

/// Run settings. Unset flags fall back to the file named by `QDUAL_CONFIG`, then to built-ins.
#[derive(Args)]
pub struct GlobalArgs {
    /// Base q in (0,1) [default: 0.5]
    #[arg(long, global = true)]
    q: Option<f64>,
    /// Series tail target [default: 1e-12]
    #[arg(long, global = true)]
    eps: Option<f64>,
    /// Pass threshold for residuals [default: 1e-9]
    #[arg(long, global = true)]
    tol: Option<f64>,
    /// Term cap for infinite sums [default: 10000]
    #[arg(long, global = true)]
    max_terms: Option<usize>,
    /// Write output to a file instead of stdout
    #[arg(long, short = 'o', global = true)]
    output: Option<PathBuf>,
    /// Output format [default: json]
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
}

#[derive(Args, Default, Clone, Copy)]
struct ParamArgs {
    #[arg(short = 'a', allow_hyphen_values = true)]
    a: Option<f64>,
    #[arg(short = 'b', allow_hyphen_values = true)]
    b: Option<f64>,
    #[arg(short = 'c', allow_hyphen_values = true)]
    c: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    t1: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    t2: Option<f64>,
    #[arg(short = 'd', allow_hyphen_values = true)]
    d: Option<f64>,
}

impl ParamArgs {
    fn over(self, base: Params) -> Params {
        Params {
            a: self.a.unwrap_or(base.a),
            b: self.b.unwrap_or(base.b),
            c: self.c.unwrap_or(base.c),
            t1: self.t1.unwrap_or(base.t1),
            t2: self.t2.unwrap_or(base.t2),
            d: self.d.unwrap_or(base.d),
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate a family by its series and by its recurrence
    Eval {
        #[arg(long)]
        family: String,
        #[command(flatten)]
        params: ParamArgs,
        #[arg(short = 'n')]
        n: usize,
        /// Evaluation point
        #[arg(long, allow_hyphen_values = true, conflicts_with = "x_lattice", required_unless_present = "x_lattice")]
        x: Option<f64>,
        /// Evaluate at the m-th point of the family's lattice
        #[arg(long, allow_hyphen_values = true)]
        x_lattice: Option<i64>,
        #[arg(long, requires = "x_lattice")]
        branch: Option<String>,
    },
    /// Check an orthogonality relation on its leading block
    Ortho {
        #[arg(long)]
        relation: String,
        #[command(flatten)]
        params: ParamArgs,
        #[arg(long, default_value_t = 8)]
        max_index: usize,
        /// Support points per branch
        #[arg(long, default_value_t = 400)]
        trunc: usize,
        #[arg(long, value_enum, default_value_t = PerturbArg::None)]
        perturb: PerturbArg,
    },
    /// Check unitarity of a connection matrix block
    Dual {
        #[arg(long)]
        op: String,
        #[command(flatten)]
        params: ParamArgs,
        #[arg(short = 'K', long = "size", default_value_t = 10)]
        k: usize,
        #[arg(long, default_value_t = 400)]
        trunc: usize,
        /// Also check the bilateral biorthogonality (operator A only)
        #[arg(long)]
        biortho: bool,
    },
    /// Compare truncated eigenvalues with the predicted spectrum
    Spectrum {
        #[arg(long)]
        op: String,
        #[command(flatten)]
        params: ParamArgs,
        #[arg(short = 'N', long = "size", default_value_t = 80)]
        n: usize,
        #[arg(long, default_value_t = 10)]
        count: usize,
    },
    /// Check summation and transformation identities
    Identity {
        #[arg(long, required_unless_present = "list")]
        id: Option<String>,
        /// Parameter override, repeatable
        #[arg(long = "param", value_name = "NAME=VALUE", allow_hyphen_values = true)]
        param: Vec<String>,
        /// Run the identity's default grid instead of one point
        #[arg(long, conflicts_with = "param")]
        sweep: bool,
        /// List identities, optionally filtered by group
        #[arg(long, num_args = 0..=1, default_missing_value = "", value_name = "GROUP")]
        list: Option<String>,
    },
    /// Print the family registry
    ListFamilies,
    /// Run every default check
    ReportAll,
}

#[derive(Clone, Copy, ValueEnum)]
enum PerturbArg {
    None,
    ConstantExponent,
    IndexExponent,
}

impl From<PerturbArg> for Perturbation {
    fn from(p: PerturbArg) -> Self {
        match p {
            PerturbArg::None => Perturbation::None,
            PerturbArg::ConstantExponent => Perturbation::ConstantExponent,
            PerturbArg::IndexExponent => Perturbation::IndexExponent,
        }
    }
}

fn parse<T: std::str::FromStr<Err = QError>>(s: &str) -> Result<T, CliError> {
    Ok(s.parse::<T>()?)
}

fn context(cfg: &RunConfig) -> Result<QContext, CliError> {
    Ok(QContext::with_settings(cfg.q, cfg.eps, cfg.max_terms, QContext::DEFAULT_GUARD)?)
}

fn params_cell(p: &Params) -> String {
    let all = [("a", p.a), ("b", p.b), ("c", p.c), ("t1", p.t1), ("t2", p.t2), ("d", p.d)];
    point(all.into_iter().filter(|(_, v)| *v != 0.0))
}

fn status(pass: bool) -> ExitCode {
    ExitCode::from(if pass { 0 } else { 1 })
}

#[derive(Serialize)]
struct EvalRecord {
    family: String,
    params: Params,
    q: f64,
    n: usize,
    x: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    lattice_index: Option<i64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    branch: Option<Branch>,
    value: f64,
    series: f64,
    recurrence: f64,
    diff: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    qdiff_residual: Option<f64>,
    tolerance: f64,
    pass: bool,
}

#[derive(Serialize)]
struct EvalRow {
    family: String,
    params: String,
    q: f64,
    n: usize,
    x: f64,
    series: f64,
    recurrence: f64,
    diff: f64,
    pass: bool,
}

#[allow(clippy::too_many_arguments)]
fn cmd_eval(
    cfg: &RunConfig,
    family: &str,
    params: ParamArgs,
    n: usize,
    x: Option<f64>,
    m: Option<i64>,
    branch: Option<&str>,
) -> Result<ExitCode, CliError> {
    let fid: FamilyId = parse(family)?;
    let ctx = context(cfg)?;
    let p = params.over(Params::default());
    fid.validate(&p, cfg.q)?;
    let (x, series, branch) = match (x, m) {
        (Some(x), _) => (x, eval_series(fid, &p, n, x, &ctx)?, None),
        (None, Some(m)) => {
            let branch = match branch {
                Some(b) => parse::<Branch>(b)?,
                None => fid.branches()[0],
            };
            if !fid.branches().contains(&branch) {
                return Err(CliError::Usage(format!("family {fid} has no {branch} branch")));
            }
            let x = lattice(fid.lattice_kind(), &p, m, branch, cfg.q)?;
            let s = eval_series_at(fid, &p, n, Point::Lattice { m, branch }, &ctx)?.to_f64();
            (x, s, Some(branch))
        }
        (None, None) => return Err(CliError::Usage("one of --x or --x-lattice is required".into())),
    };
    let recurrence = eval_rec(fid, &p, n, x, &ctx)?;
    let diff = (series - recurrence).abs();
    let qdiff = qdiff_residual(fid, &p, n, x, &ctx).ok();
    let pass = diff <= cfg.tolerance * series.abs().max(1.0);
    let rec = EvalRecord {
        family: fid.slug().to_string(),
        params: p,
        q: cfg.q,
        n,
        x,
        lattice_index: m,
        branch,
        value: series,
        series,
        recurrence,
        diff,
        qdiff_residual: qdiff,
        tolerance: cfg.tolerance,
        pass,
    };
    let row = EvalRow {
        family: rec.family.clone(),
        params: params_cell(&p),
        q: cfg.q,
        n,
        x,
        series,
        recurrence,
        diff,
        pass,
    };
    emit(cfg, &rec, &[row])?;
    Ok(status(pass))
}

#[derive(Serialize)]
struct ResidualRow {
    check_id: String,
    citation: String,
    params: String,
    q: f64,
    truncation: String,
    max_offdiag: f64,
    max_diag_dev: f64,
    residual: f64,
    tail_bound: f64,
    tolerance: f64,
    pass: bool,
}

impl From<&ResidualReport> for ResidualRow {
    fn from(r: &ResidualReport) -> Self {
        Self {
            check_id: r.check_id.clone(),
            citation: r.citation.clone(),
            params: params_cell(&r.params),
            q: r.q,
            truncation: r.truncation.iter().map(|t| t.to_string()).collect::<Vec<_>>().join(";"),
            max_offdiag: r.max_offdiag,
            max_diag_dev: r.max_diag_dev,
            residual: r.residual,
            tail_bound: r.tail_bound,
            tolerance: r.tolerance,
            pass: r.pass,
        }
    }
}

fn ortho_report(cfg: &RunConfig, rel: RelationId, p: Params, max_index: usize, trunc: usize, perturb: Perturbation) -> Result<ResidualReport, CliError> {
    let spec = OrthoSpec::with_context(rel, p, context(cfg)?)?.perturbed(perturb);
    Ok(relation_report(&spec, max_index, trunc, cfg.tolerance)?)
}

#[derive(Serialize)]
struct OrthoDoc<'a> {
    #[serde(flatten)]
    report: &'a ResidualReport,
    #[serde(skip_serializing_if = "Option::is_none")]
    caveat: Option<&'static str>,
}

fn cmd_ortho(cfg: &RunConfig, relation: &str, params: ParamArgs, max_index: usize, trunc: usize, perturb: PerturbArg) -> Result<ExitCode, CliError> {
    let rel: RelationId = parse(relation)?;
    let rep = ortho_report(cfg, rel, params.over(rel.default_params()), max_index, trunc, perturb.into())?;
    emit(cfg, &OrthoDoc { report: &rep, caveat: rel.caveat() }, &[ResidualRow::from(&rep)])?;
    Ok(status(rep.pass))
}

fn cmd_dual(cfg: &RunConfig, op: &str, params: ParamArgs, k: usize, trunc: usize, biortho: bool) -> Result<ExitCode, CliError> {
    let tag: OperatorTag = parse(op)?;
    let kind = OperatorKind::new(tag, params.over(tag.default_params()), cfg.q)?;
    let mut reports = vec![unitarity_check(&kind, k, trunc, cfg.tolerance)?];
    if biortho {
        if tag != OperatorTag::A {
            return Err(CliError::Usage("--biortho applies to operator A only".into()));
        }
        reports.push(biortho_check(kind.params.a, kind.params.b, cfg.q, k, trunc, cfg.tolerance)?);
    }
    let rows: Vec<ResidualRow> = reports.iter().map(ResidualRow::from).collect();
    let pass = reports.iter().all(|r| r.pass);
    if reports.len() == 1 {
        emit(cfg, &reports[0], &rows)?;
    } else {
        emit(cfg, &reports, &rows)?;
    }
    Ok(status(pass))
}

#[derive(Serialize)]
struct SpectrumDoc<'a> {
    #[serde(flatten)]
    report: &'a SpectrumReport,
    tolerance: f64,
    pass: bool,
}

#[derive(Serialize)]
struct SpectrumRow {
    index: usize,
    computed: f64,
    predicted: f64,
    abs_err: f64,
}

fn spectrum_report(cfg: &RunConfig, tag: OperatorTag, p: Params, size: usize, count: usize) -> Result<SpectrumReport, CliError> {
    let kind = OperatorKind::new(tag, p, cfg.q)?;
    Ok(spectrum_match(&kind, size, count)?)
}

fn cmd_spectrum(cfg: &RunConfig, op: &str, params: ParamArgs, size: usize, count: usize) -> Result<ExitCode, CliError> {
    let tag: OperatorTag = parse(op)?;
    let rep = spectrum_report(cfg, tag, params.over(tag.default_params()), size, count)?;
    let pass = rep.max_abs_err <= cfg.tolerance;
    let rows: Vec<SpectrumRow> = rep
        .pairs
        .iter()
        .enumerate()
        .map(|(index, &(computed, predicted))| SpectrumRow { index, computed, predicted, abs_err: (computed - predicted).abs() })
        .collect();
    emit(cfg, &SpectrumDoc { report: &rep, tolerance: cfg.tolerance, pass }, &rows)?;
    Ok(status(pass))
}

#[derive(Serialize)]
struct IdentityRow {
    id: String,
    citation: String,
    #[serde(rename = "param-point")]
    param_point: String,
    lhs: f64,
    rhs: f64,
    residual: f64,
    pass: bool,
}

impl From<&IdentityCheck> for IdentityRow {
    fn from(c: &IdentityCheck) -> Self {
        Self {
            id: c.id.slug().to_string(),
            citation: c.citation.to_string(),
            param_point: point(c.params.iter().map(|(k, v)| (k.as_str(), *v))),
            lhs: c.lhs,
            rhs: c.rhs,
            residual: c.residual,
            pass: c.pass,
        }
    }
}

fn parse_param(s: &str) -> Result<(String, f64), CliError> {
    let (name, value) = s
        .split_once('=')
        .ok_or_else(|| CliError::Usage(format!("expected NAME=VALUE, got {s:?}")))?;
    let value: f64 = value
        .trim()
        .parse()
        .map_err(|_| CliError::Usage(format!("parameter {name} is not a number: {value:?}")))?;
    Ok((name.trim().to_string(), value))
}

#[derive(Serialize)]
struct ListRow {
    slug: &'static str,
    group: &'static str,
    citation: &'static str,
    params: String,
}

fn identity_checks(cfg: &RunConfig, id: IdentityId, grid: &[ParamMap]) -> Result<Vec<IdentityCheck>, CliError> {
    let ctx = context(cfg)?;
    grid.iter()
        .map(|p| identities::check_with_tolerance(id, p, &ctx, cfg.tolerance).map_err(CliError::from))
        .collect()
}

fn cmd_identity(cfg: &RunConfig, id: Option<&str>, param: &[String], sweep: bool, list: Option<&str>) -> Result<ExitCode, CliError> {
    if let Some(group) = list {
        let entries = registry_list(Some(group).filter(|g| !g.is_empty()));
        let rows: Vec<ListRow> = entries
            .iter()
            .map(|e| ListRow { slug: e.slug, group: e.group, citation: e.citation, params: point(e.params.iter().copied()) })
            .collect();
        emit(cfg, &entries, &rows)?;
        return Ok(ExitCode::SUCCESS);
    }
    let id: IdentityId = parse(id.unwrap_or_default())?;
    let grid = if sweep {
        default_grid(id)
    } else {
        vec![param.iter().map(|s| parse_param(s)).collect::<Result<ParamMap, _>>()?]
    };
    let checks = identity_checks(cfg, id, &grid)?;
    let rows: Vec<IdentityRow> = checks.iter().map(IdentityRow::from).collect();
    let pass = checks.iter().all(|c| c.pass);
    if sweep {
        emit(cfg, &checks, &rows)?;
    } else {
        emit(cfg, &checks[0], &rows)?;
    }
    Ok(status(pass))
}

#[derive(Serialize)]
struct FamilyRow {
    slug: &'static str,
    params: String,
    constraints: String,
    description: &'static str,
}

fn cmd_list_families(cfg: &RunConfig) -> Result<ExitCode, CliError> {
    let reg = registry();
    let rows: Vec<FamilyRow> = reg
        .iter()
        .map(|f| FamilyRow {
            slug: f.slug,
            params: f.params.join(";"),
            constraints: f.constraints.join("; "),
            description: f.description,
        })
        .collect();
    emit(cfg, &reg, &rows)?;
    Ok(ExitCode::SUCCESS)
}

/// One row of the aggregate report.
#[derive(Debug, Clone, Serialize)]
struct CheckRow {
    category: &'static str,
    check: String,
    params: String,
    residual: f64,
    tolerance: f64,
    pass: bool,
    error: String,
}

#[derive(Serialize)]
struct Metadata {
    q: f64,
    eps: f64,
    tolerance: f64,
    max_terms: usize,
    total: usize,
    passed: usize,
    failed: usize,
    wall_time_ms: BTreeMap<String, f64>,
}

#[derive(Serialize)]
struct Aggregate {
    metadata: Metadata,
    pass: bool,
    checks: Vec<CheckRow>,
}

fn row(category: &'static str, check: String, params: String, tol: f64, outcome: Result<f64, CliError>) -> CheckRow {
    let (residual, error) = match outcome {
        Ok(r) => (r, String::new()),
        Err(CliError::Usage(e) | CliError::Failed(e) | CliError::Io(e)) => (f64::INFINITY, e),
    };
    CheckRow { category, check, params, residual, tolerance: tol, pass: residual <= tol, error }
}

fn report_all(cfg: &RunConfig) -> Aggregate {
    let tol = cfg.tolerance;
    let mut rows = Vec::new();
    let mut times = BTreeMap::new();
    let mut timed = |key: String, f: &mut dyn FnMut() -> Vec<CheckRow>| {
        let start = Instant::now();
        let out = f();
        times.insert(key, start.elapsed().as_secs_f64() * 1e3);
        out
    };

    for rel in RelationId::ALL {
        let p = rel.default_params();
        rows.extend(timed(format!("ortho/{rel}"), &mut || {
            let rep = ortho_report(cfg, rel, p, 8, 400, Perturbation::None);
            vec![row("ortho", rel.slug().to_string(), params_cell(&p), tol, rep.map(|r| r.residual))]
        }));
    }
    for tag in OperatorTag::ALL {
        let p = tag.default_params();
        rows.extend(timed(format!("dual/{tag}"), &mut || {
            let rep = OperatorKind::new(tag, p, cfg.q)
                .map_err(CliError::from)
                .and_then(|k| Ok(unitarity_check(&k, 10, 400, tol)?));
            vec![row("dual", format!("unitarity-{tag}"), params_cell(&p), tol, rep.map(|r| r.residual))]
        }));
    }
    let bp = OperatorTag::A.default_params();
    rows.extend(timed("dual/biorthogonality".into(), &mut || {
        let rep = biortho_check(bp.a, bp.b, cfg.q, 4, 400, tol).map_err(CliError::from);
        vec![row("dual", "biorthogonality".into(), params_cell(&bp), tol, rep.map(|r| r.residual))]
    }));
    for tag in OperatorTag::ALL {
        let p = tag.default_params();
        rows.extend(timed(format!("spectrum/{tag}"), &mut || {
            let rep = spectrum_report(cfg, tag, p, 80, 10);
            vec![row("spectrum", format!("spectrum-{tag}"), params_cell(&p), tol, rep.map(|r| r.max_abs_err))]
        }));
    }
    for &id in IdentityId::ALL {
        rows.extend(timed(format!("identity/{id}"), &mut || {
            default_grid(id)
                .iter()
                .map(|p| {
                    let cell = point(p.iter().map(|(k, v)| (k.as_str(), *v)));
                    let out = context(cfg)
                        .and_then(|c| Ok(identities::check_with_tolerance(id, p, &c, tol)?))
                        .map(|c| c.residual);
                    row("identity", id.slug().to_string(), cell, tol, out)
                })
                .collect()
        }));
    }

    let passed = rows.iter().filter(|r| r.pass).count();
    Aggregate {
        metadata: Metadata {
            q: cfg.q,
            eps: cfg.eps,
            tolerance: tol,
            max_terms: cfg.max_terms,
            total: rows.len(),
            passed,
            failed: rows.len() - passed,
            wall_time_ms: times,
        },
        pass: passed == rows.len(),
        checks: rows,
    }
}

fn cmd_report_all(cfg: &RunConfig) -> Result<ExitCode, CliError> {
    context(cfg)?;
    let agg = report_all(cfg);
    emit(cfg, &agg, &agg.checks)?;
    Ok(status(agg.pass))
}

fn run(cli: Cli) -> Result<ExitCode, CliError> {
    let cfg = RunConfig::resolve(&cli.global)?;
    match cli.command {
        Command::Eval { family, params, n, x, x_lattice, branch } => {
            cmd_eval(&cfg, &family, params, n, x, x_lattice, branch.as_deref())
        }
        Command::Ortho { relation, params, max_index, trunc, perturb } => {
            cmd_ortho(&cfg, &relation, params, max_index, trunc, perturb)
        }
        Command::Dual { op, params, k, trunc, biortho } => cmd_dual(&cfg, &op, params, k, trunc, biortho),
        Command::Spectrum { op, params, n, count } => cmd_spectrum(&cfg, &op, params, n, count),
        Command::Identity { id, param, sweep, list } => {
            cmd_identity(&cfg, id.as_deref(), &param, sweep, list.as_deref())
        }
        Command::ListFamilies => cmd_list_families(&cfg),
        Command::ReportAll => cmd_report_all(&cfg),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(cli) {
        Ok(code) => code,
        Err(CliError::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(CliError::Failed(msg)) => {
            eprintln!("check failed: {msg}");
            ExitCode::from(1)
        }
        Err(CliError::Io(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
