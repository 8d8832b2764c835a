//! Command-line front end. [`run`] parses arguments and returns the exit code and
//! the text to print; `main` only forwards them.
//!
//! Exit codes: 0 on success, 1 when a relation check fails, 2 on structural,
//! parse or validation errors.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::path::PathBuf;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex;
use serde_json::{json, Value};

use crate::catalog::{get_system, resolve_label, CatalogEntry, CatalogKey};
use crate::error::{Error, Result};
use crate::io::{load_system, SystemFile};
use crate::path_space::{enumerate_basis, projector, projector_family_check, ChainOperators, ChainSpec, PathBasis};
use crate::relations::{
    attach_matrix_residual, build_bmw, build_tl_chain_on, check_homogeneity, tl_condition, verify_tl_relations,
    Direction, RelationReport,
};
use crate::scalar::{fmt_real, fmt_scalar};
use crate::tensor_system::{BraidedTensorSystem, GaugeTransform, TensorSystem, ValidationReport};

pub const EXIT_OK: i32 = 0;
pub const EXIT_RELATION: i32 = 1;
pub const EXIT_STRUCTURAL: i32 = 2;

const DEFAULT_TOL: f64 = 1e-9;

#[derive(Parser, Debug)]
#[command(name = "fusionchain", version, about = "Tensor-system validation and TL/BMW certification on fusion chains")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
#[group(required = true, multiple = false)]
pub struct Source {
    /// Catalog key: fibonacci, ising, su2k:<k>, cyclic:<n>, fib_x_fib, section33_rules
    #[arg(long)]
    pub catalog: Option<String>,
    /// Tensor-system JSON file
    #[arg(long)]
    pub file: Option<PathBuf>,
}

#[derive(Args, Debug, Clone)]
pub struct Common {
    #[command(flatten)]
    pub source: Source,
    /// Residual tolerance for every check in this invocation
    #[arg(long)]
    pub tol: Option<f64>,
    /// Emit JSON instead of text
    #[arg(long)]
    pub json: bool,
}

#[derive(Args, Debug, Clone)]
pub struct Chain {
    /// Label repeated along a homogeneous chain
    #[arg(long, conflicts_with = "lambdas")]
    pub lambda: Option<String>,
    /// Comma-separated chain labels λ_1,…,λ_L
    #[arg(long, value_delimiter = ',')]
    pub lambdas: Option<Vec<String>>,
    /// Chain length (with --lambda)
    #[arg(long = "L", alias = "len")]
    pub len: Option<usize>,
    /// Comma-separated starting labels μ_0 (default: all labels)
    #[arg(long, value_delimiter = ',')]
    pub seeds: Option<Vec<String>>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum DirectionArg {
    Next,
    Prev,
}

impl From<DirectionArg> for Direction {
    fn from(d: DirectionArg) -> Self {
        match d {
            DirectionArg::Next => Direction::Next,
            DirectionArg::Prev => Direction::Prev,
        }
    }
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Check the fusion, associator and braiding axioms
    Validate {
        #[command(flatten)]
        common: Common,
    },
    /// Enumerate the fusion-path basis of a chain
    Basis {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        chain: Chain,
        /// Print every path
        #[arg(long)]
        list: bool,
        /// Write the projector onto this channel in coordinate text format
        #[arg(long, requires = "site")]
        projector: Option<String>,
        /// Bond of the projector
        #[arg(long)]
        site: Option<usize>,
        /// Output file for --projector (default: standard output)
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Certify Temperley-Lieb relations for two-site projectors
    CheckTl {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        chain: Chain,
        /// Projector channel ν
        #[arg(long)]
        nu: String,
        /// Channel ν' of the neighbouring projector (single-bond certificate mode)
        #[arg(long)]
        nu_prime: Option<String>,
        /// Bond i for the single-bond certificate
        #[arg(long)]
        site: Option<usize>,
        #[arg(long, value_enum, default_value = "next")]
        direction: DirectionArg,
    },
    /// Certify the BMW relations on a homogeneous chain
    CheckBmw {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        lambda: String,
        #[arg(long)]
        nu: String,
        #[arg(long = "L", alias = "len", default_value_t = 4)]
        len: usize,
    },
    /// Print gauge-invariant data
    Invariants {
        #[command(flatten)]
        common: Common,
    },
    /// Write a system in the JSON file format
    Export {
        #[command(flatten)]
        common: Common,
        /// Output path (default: standard output)
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Re-run certificates after a seeded random gauge and compare
    GaugeTest {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Restrict to one chain label (default: every label)
        #[arg(long)]
        lambda: Option<String>,
        /// Restrict to one channel (default: every channel)
        #[arg(long)]
        nu: Option<String>,
        #[arg(long = "L", alias = "len", default_value_t = 4)]
        len: usize,
    },
}

/// Parses `args` (including the program name) and executes the command.
pub fn run<I, S>(args: I) -> (i32, String)
where
    I: IntoIterator<Item = S>,
    S: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_STRUCTURAL } else { EXIT_OK };
            return (code, e.render().to_string());
        }
    };
    match execute(&cli.command) {
        Ok(r) => r,
        Err(e) => (EXIT_STRUCTURAL, format!("error: {e}\n")),
    }
}

fn tol_of(common: &Common) -> f64 {
    common.tol.unwrap_or(DEFAULT_TOL)
}

fn load(common: &Common) -> Result<CatalogEntry<f64>> {
    let tol = tol_of(common);
    match (&common.source.catalog, &common.source.file) {
        (Some(key), _) => get_system(key.parse::<CatalogKey>()?),
        (None, Some(path)) => load_system(path, tol),
        (None, None) => Err(Error::Precondition("either --catalog or --file is required".into())),
    }
}

/// Loads the system and insists that it validated.
fn load_validated(common: &Common) -> Result<CatalogEntry<f64>> {
    let tol = tol_of(common);
    Ok(match load(common)? {
        CatalogEntry::Braided(b) if !b.is_validated() => CatalogEntry::Braided(b.into_validated(tol)?),
        CatalogEntry::Plain(s) if !s.is_validated() => CatalogEntry::Plain(s.into_validated(tol)?),
        e => e,
    })
}

fn label(sys: &TensorSystem<f64>, token: &str) -> Result<usize> {
    resolve_label(sys.labels(), token)
}

fn spec_of(sys: &TensorSystem<f64>, chain: &Chain, default_len: Option<usize>) -> Result<ChainSpec> {
    let seeds = chain
        .seeds
        .as_ref()
        .map(|s| s.iter().map(|t| label(sys, t)).collect::<Result<Vec<_>>>())
        .transpose()?;
    let lambdas = match (&chain.lambda, &chain.lambdas) {
        (Some(l), None) => {
            let len = chain
                .len
                .or(default_len)
                .ok_or_else(|| Error::Precondition("--lambda needs --L".into()))?;
            vec![label(sys, l)?; len]
        }
        (None, Some(ls)) => {
            if chain.len.is_some_and(|n| n != ls.len()) {
                return Err(Error::Precondition("--L disagrees with the length of --lambdas".into()));
            }
            ls.iter().map(|t| label(sys, t)).collect::<Result<Vec<_>>>()?
        }
        _ => return Err(Error::Precondition("give exactly one of --lambda or --lambdas".into())),
    };
    ChainSpec::new(sys.rules(), lambdas, seeds)
}

fn exit_for(ok: bool) -> i32 {
    if ok {
        EXIT_OK
    } else {
        EXIT_RELATION
    }
}

fn emit(json_mode: bool, text: String, value: Value) -> String {
    if json_mode {
        let mut s = serde_json::to_string_pretty(&value).unwrap_or_default();
        s.push('\n');
        s
    } else {
        text
    }
}

fn execute(cmd: &Command) -> Result<(i32, String)> {
    match cmd {
        Command::Validate { common } => validate(common),
        Command::Basis { common, chain, list, projector, site, out } => {
            basis(common, chain, *list, projector.as_deref(), *site, out.as_ref())
        }
        Command::CheckTl { common, chain, nu, nu_prime, site, direction } => {
            check_tl(common, chain, nu, nu_prime.as_deref(), *site, (*direction).into())
        }
        Command::CheckBmw { common, lambda, nu, len } => check_bmw(common, lambda, nu, *len),
        Command::Invariants { common } => invariants(common),
        Command::Export { common, out } => export(common, out.as_ref()),
        Command::GaugeTest { common, seed, lambda, nu, len } => {
            gauge_test(common, *seed, lambda.as_deref(), nu.as_deref(), *len)
        }
    }
}

fn validation_reports(entry: &CatalogEntry<f64>, tol: f64) -> Result<Vec<(&'static str, ValidationReport)>> {
    let mut out = Vec::new();
    match entry {
        CatalogEntry::RulesOnly(_) => {
            return Err(Error::Unsupported("this entry has fusion rules only; nothing to validate against".into()))
        }
        CatalogEntry::Plain(s) => out.push(("tensor system", s.validate(tol))),
        CatalogEntry::Braided(b) => {
            let base = b.base().validate(tol);
            let passed = base.passed;
            out.push(("tensor system", base));
            if passed {
                let mut checked = b.clone();
                if !checked.base().is_validated() {
                    let v = b.base().clone().into_validated(tol)?;
                    checked = BraidedTensorSystem::new(v, b.r_table().clone(), b.rbar_table().clone())?;
                }
                out.push(("braiding", checked.validate_braiding(tol)?));
            }
        }
    }
    Ok(out)
}

fn validate(common: &Common) -> Result<(i32, String)> {
    let tol = tol_of(common);
    let entry = load(common)?;
    let reports = validation_reports(&entry, tol)?;
    let passed = reports.iter().all(|(_, r)| r.passed) && !matches!(&entry, CatalogEntry::Braided(_) if reports.len() < 2);
    let sys = entry.tensor_system()?;
    let mut text = format!(
        "labels: {}\nfusion triples: {}\n",
        sys.labels().labels().iter().map(|l| l.as_str()).collect::<Vec<_>>().join(" "),
        sys.rules().support().len()
    );
    for (name, r) in &reports {
        let _ = writeln!(text, "[{name}]\n{r}");
    }
    if let Some(w) = reports.iter().filter_map(|(_, r)| r.worst_failure()).next() {
        let _ = writeln!(
            text,
            "max residual {} in {} at {}",
            fmt_real(w.max_residual),
            w.axiom,
            w.location.as_deref().unwrap_or("?")
        );
    }
    let _ = writeln!(text, "result: {}", if passed { "valid" } else { "INVALID" });
    let value = json!({
        "valid": passed,
        "reports": reports.iter().map(|(n, r)| json!({"part": n, "report": r})).collect::<Vec<_>>(),
    });
    let code = if passed { EXIT_OK } else { EXIT_STRUCTURAL };
    Ok((code, emit(common.json, text, value)))
}

fn basis(
    common: &Common,
    chain: &Chain,
    list: bool,
    proj: Option<&str>,
    site: Option<usize>,
    out: Option<&PathBuf>,
) -> Result<(i32, String)> {
    let entry = load_validated(common)?;
    let sys = entry.tensor_system()?;
    let spec = spec_of(sys, chain, None)?;
    let basis = enumerate_basis(sys, &spec)?;
    let mut text = format!("dimension: {}\n", basis.dim());
    let paths: Vec<String> = (0..basis.dim()).map(|i| basis.format_path(sys, i)).collect();
    if list {
        for (i, p) in paths.iter().enumerate() {
            let _ = writeln!(text, "{i:>6}  {p}");
        }
    }
    let mut value = json!({"dimension": basis.dim()});
    if list {
        value["paths"] = json!(paths);
    }
    if let Some(nu) = proj {
        let site = site.ok_or_else(|| Error::Precondition("--projector needs --site".into()))?;
        let p = projector(sys, &basis, site, label(sys, nu)?)?;
        let coord = p.to_coordinate_text();
        match out {
            Some(path) => {
                std::fs::write(path, &coord)?;
                let _ = writeln!(text, "projector written to {}", path.display());
            }
            None => text.push_str(&coord),
        }
        value["projector_nnz"] = json!(p.nnz());
    }
    Ok((EXIT_OK, emit(common.json, text, value)))
}

fn check_tl(
    common: &Common,
    chain: &Chain,
    nu: &str,
    nu_prime: Option<&str>,
    site: Option<usize>,
    direction: Direction,
) -> Result<(i32, String)> {
    let tol = tol_of(common);
    let entry = load_validated(common)?;
    let sys = entry.tensor_system()?;
    let spec = spec_of(sys, chain, Some(6))?;
    let nu_id = label(sys, nu)?;
    let basis = enumerate_basis(sys, &spec)?;

    if nu_prime.is_some() || site.is_some() {
        let site = site.ok_or_else(|| Error::Precondition("single-bond mode needs --site".into()))?;
        let nu2 = nu_prime.map_or(Ok(nu_id), |t| label(sys, t))?;
        let mut cert = tl_condition(sys, &spec, site, nu_id, nu2, direction, tol)?;
        let ops = ChainOperators::new(sys, &basis)?;
        attach_matrix_residual(&mut cert, &ops)?;
        let j = direction.neighbour(site);
        let name = format!("p_{site}^({nu}) p_{j}^({}) p_{site}^({nu}) = c p_{site}^({nu})", nu_prime.unwrap_or(nu));
        let matrix = cert.matrix_residual.unwrap_or(f64::INFINITY);
        let mut report = RelationReport::from_residual(name, matrix, tol);
        report.satisfied = cert.holds() && report.satisfied;
        report.vacuous = cert.vacuous;
        if let Some(c) = cert.constant {
            report = report.with_constant("c", c);
        }
        for (u, v) in cert.upsilons.iter().zip(&cert.condition_set) {
            report = report.with_note(format!("condition υ = {}: {}", sys.name(*u), fmt_scalar(*v)));
        }
        if !cert.singleton && !cert.vacuous {
            report = report.with_note("condition set is not a singleton");
        }
        if let Some(n) = cert.complex_note(tol) {
            report = report.with_note(n);
        }
        let text = format!("dimension: {}\n{report}", basis.dim());
        return Ok((exit_for(report.satisfied), emit(common.json, text, report.to_json())));
    }

    if spec.homogeneous_label().is_some() {
        let chain = build_tl_chain_on(sys, &basis, nu_id)?;
        let report = verify_tl_relations(&chain, tol)?;
        let mut text = format!("dimension: {}\n", basis.dim());
        let _ = writeln!(text, "c = {}\nd = {}", fmt_scalar(chain.c), fmt_scalar(chain.d));
        let _ = write!(text, "{report}");
        let mut v = report.to_json();
        v["d"] = json!({"re": chain.d.re, "im": chain.d.im});
        v["dimension"] = json!(basis.dim());
        return Ok((exit_for(report.satisfied), emit(common.json, text, v)));
    }

    let nus = vec![nu_id; spec.len().saturating_sub(1)];
    let report = check_homogeneity(sys, spec.lambdas(), &nus, tol)?;
    let text = format!("dimension: {}\n{report}", basis.dim());
    Ok((exit_for(report.satisfied), emit(common.json, text, report.to_json())))
}

fn braided_of(entry: &CatalogEntry<f64>) -> Result<&BraidedTensorSystem<f64>> {
    entry
        .braided()
        .ok_or_else(|| Error::MissingBraiding("this system has no R data".into()))
}

fn check_bmw(common: &Common, lambda: &str, nu: &str, len: usize) -> Result<(i32, String)> {
    let tol = tol_of(common);
    let entry = load_validated(common)?;
    let b = braided_of(&entry)?;
    let sys = b.base();
    let cert = build_bmw(b, label(sys, lambda)?, label(sys, nu)?, len, tol)?;
    let report = cert.report(tol);
    let mut text = String::new();
    let _ = writeln!(text, "d = {}", fmt_scalar(cert.d));
    for root in &cert.roots {
        let _ = writeln!(text, "root g = {}", fmt_scalar(root.g));
        let _ = write!(text, "{}", root.report);
        if let Some(sk) = &root.skein {
            let _ = write!(text, "{}", sk.report);
        }
    }
    let _ = write!(text, "summary\n{report}");
    let mut v = report.to_json();
    v["roots"] = Value::Array(
        cert.roots
            .iter()
            .map(|r| {
                let mut x = r.report.to_json();
                if let Some(sk) = &r.skein {
                    x["skein"] = sk.report.to_json();
                }
                x
            })
            .collect(),
    );
    Ok((exit_for(cert.relations_hold()), emit(common.json, text, v)))
}

fn invariants(common: &Common) -> Result<(i32, String)> {
    let entry = load_validated(common)?;
    let sys = entry.tensor_system()?;
    let mut text = String::from("diagonal associator entries (F^{aaa}_d)^e_e, unchanged by symmetric gauges:\n");
    let mut diag = Vec::new();
    for a in sys.labels().ids() {
        for d in sys.labels().ids() {
            let (es, fs) = sys.block_channels(a, a, a, d);
            for &e in es.iter().filter(|e| fs.contains(e)) {
                let z = sys.gauge_invariant_diagonal(a, d, e)?;
                let _ = writeln!(text, "  a={} d={} e={}: {}", sys.name(a), sys.name(d), sys.name(e), fmt_scalar(z));
                diag.push(json!({"a": sys.name(a), "d": sys.name(d), "e": sys.name(e), "re": z.re, "im": z.im}));
            }
        }
    }
    let onedim: Vec<&str> = sys
        .labels()
        .ids()
        .filter(|&x| sys.one_dim_profile(x).is_ok_and(|p| p.is_one_dimensional))
        .map(|x| sys.name(x))
        .collect();
    let _ = writeln!(text, "one-dimensional labels: {}", onedim.join(" "));
    let mut value = json!({"diagonal": diag, "one_dimensional": onedim});
    if let Some(b) = entry.braided() {
        let _ = writeln!(text, "self-braiding eigenvalues R^{{aa}}_c:");
        let mut rs = Vec::new();
        for a in sys.labels().ids() {
            for &c in sys.outcomes(a, a) {
                let z = b.r(a, a, c);
                let _ = writeln!(text, "  a={} c={}: {}", sys.name(a), sys.name(c), fmt_scalar(z));
                rs.push(json!({"a": sys.name(a), "c": sys.name(c), "re": z.re, "im": z.im}));
            }
        }
        value["self_braiding"] = json!(rs);
    }
    Ok((EXIT_OK, emit(common.json, text, value)))
}

fn export(common: &Common, out: Option<&PathBuf>) -> Result<(i32, String)> {
    let entry = load(common)?;
    let text = SystemFile::from_entry(&entry)?.to_json()?;
    match out {
        Some(path) => {
            std::fs::write(path, &text)?;
            Ok((EXIT_OK, format!("written to {}\n", path.display())))
        }
        None => Ok((EXIT_OK, text + "\n")),
    }
}

type Certificate = (String, Vec<(String, Complex<f64>)>);

/// Named constants of every certificate that passes on `b` (or `sys` when unbraided).
fn certificate_constants(
    sys: &TensorSystem<f64>,
    b: Option<&BraidedTensorSystem<f64>>,
    lambdas: &[usize],
    nus: &[usize],
    len: usize,
    tol: f64,
) -> Result<Vec<Certificate>> {
    let mut out = Vec::new();
    for &l in lambdas {
        let spec = ChainSpec::homogeneous(sys.rules(), l, len, None)?;
        let basis: Arc<PathBasis> = enumerate_basis(sys, &spec)?;
        let fam = projector_family_check(sys, &basis, tol)?;
        out.push((format!("projector family λ={}", sys.name(l)), if fam.satisfied { vec![] } else { vec![("failed".into(), Complex::new(fam.residual, 0.0))] }));
        for &nu in nus {
            if !sys.has(l, l, nu) {
                continue;
            }
            if let Ok(chain) = build_tl_chain_on(sys, &basis, nu) {
                if verify_tl_relations(&chain, tol)?.satisfied {
                    out.push((
                        format!("TL λ={} ν={}", sys.name(l), sys.name(nu)),
                        vec![("c".into(), chain.c), ("d".into(), chain.d)],
                    ));
                }
            }
            if let Some(b) = b {
                if let Ok(cert) = build_bmw(b, l, nu, len, tol) {
                    for root in cert.roots.iter().filter(|r| r.report.satisfied) {
                        let mut consts = vec![("d".to_string(), cert.d), ("g^2".to_string(), root.g * root.g)];
                        if let Some(sk) = &root.skein {
                            consts.push(("m".into(), sk.m_value));
                        }
                        out.push((format!("BMW λ={} ν={} g={}", sys.name(l), sys.name(nu), fmt_scalar(root.g)), consts));
                    }
                }
            }
        }
    }
    Ok(out)
}

fn gauge_test(
    common: &Common,
    seed: u64,
    lambda: Option<&str>,
    nu: Option<&str>,
    len: usize,
) -> Result<(i32, String)> {
    let tol = tol_of(common);
    let entry = load_validated(common)?;
    let sys = entry.tensor_system()?;
    let all: Vec<usize> = sys.labels().ids().collect();
    let lambdas = lambda.map_or(Ok(all.clone()), |t| label(sys, t).map(|x| vec![x]))?;
    let nus = nu.map_or(Ok(all), |t| label(sys, t).map(|x| vec![x]))?;

    let gauge = GaugeTransform::random_general(sys, seed);
    let gauged = match &entry {
        CatalogEntry::Braided(b) => CatalogEntry::Braided(gauge.apply_braided(b)?),
        CatalogEntry::Plain(s) => CatalogEntry::Plain(gauge.apply(s)?),
        CatalogEntry::RulesOnly(_) => unreachable!("tensor_system() succeeded"),
    };
    let mut text = format!("random gauge seed {seed}\n");
    let validated = validation_reports(&gauged, tol)?;
    let valid = validated.iter().all(|(_, r)| r.passed);
    let _ = writeln!(text, "gauged system validates: {}", if valid { "yes" } else { "NO" });
    if !valid {
        return Ok((EXIT_RELATION, text));
    }
    let gauged = match gauged {
        CatalogEntry::Braided(b) => CatalogEntry::Braided(b.into_validated(tol)?),
        CatalogEntry::Plain(s) => CatalogEntry::Plain(s.into_validated(tol)?),
        e => e,
    };
    let before = certificate_constants(sys, entry.braided(), &lambdas, &nus, len, tol)?;
    let after = certificate_constants(gauged.tensor_system()?, gauged.braided(), &lambdas, &nus, len, tol)?;

    let mut ok = true;
    let mut rows = Vec::new();
    for (name, consts) in &before {
        let twin = after.iter().find(|(n, _)| n == name);
        let (status, worst) = match twin {
            None => ("lost", f64::INFINITY),
            Some((_, c2)) => {
                let worst = consts
                    .iter()
                    .zip(c2)
                    .map(|((_, a), (_, b))| (a - b).norm())
                    .fold(0.0, f64::max);
                (if worst <= tol { "same" } else { "changed" }, worst)
            }
        };
        ok &= status == "same";
        let _ = writeln!(text, "{name}: {status} (max change {})", fmt_real(worst));
        rows.push(json!({"certificate": name, "status": status, "max_change": worst}));
    }
    let _ = writeln!(text, "result: {}", if ok { "pass" } else { "FAIL" });
    let value = json!({"seed": seed, "passed": ok, "certificates": rows});
    Ok((exit_for(ok), emit(common.json, text, value)))
}
