//! The `quiver-forms` command line: argument parsing, report assembly and
//! the exit-code taxonomy.

use std::path::{Path, PathBuf};
use std::sync::Arc;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use crate::arith::{FiniteGaloisPair, GaloisPair, QuadraticPair};
use crate::census::{census_polynomiality, verify_descent_census};
use crate::config::{JobConfig, OutputFormat, CONFIG_ENV};
use crate::descent::{division_form, hilbert90_descend, type_map, DescentDatum};
use crate::error::{Error, Result};
use crate::io::{self, AnyRep, AnyTwisted, JsonRing};
use crate::quiver::certificate::{geom_stability_certificate, CertificateReport};
use crate::quiver::stability::{hn_filtration, stability_verdict, StabilityVerdict, Verdict};
use crate::quiver::{end_dim, DimVector, Quiver, Representation};
use crate::twisted::{drep_is_geom_stable, twisted_dim, validate_twisted, TwistedRep};

pub mod exit {
    pub const OK: i32 = 0;
    pub const PARSE: i32 = 2;
    pub const BUDGET: i32 = 3;
    pub const INCONCLUSIVE: i32 = 4;
    pub const INTERNAL: i32 = 5;
    /// Requests outside what the library can decide.
    pub const UNSUPPORTED: i32 = 1;
}

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Parse(_) | Error::Argument(_) | Error::Domain(_) | Error::NotInvertible => exit::PARSE,
        Error::Budget { .. } => exit::BUDGET,
        Error::Inconclusive { .. } => exit::INCONCLUSIVE,
        Error::Invariant(_) => exit::INTERNAL,
        Error::NotDecidable(_) | Error::NotGaloisFixed => exit::UNSUPPORTED,
    }
}

#[derive(Debug, Parser)]
#[command(name = "quiver-forms", version, about = "Stability, descent and Brauer types of quiver representations")]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct GlobalArgs {
    /// Output format; defaults to the configured one.
    #[arg(long, global = true, value_parser = ["json", "table"])]
    pub format: Option<String>,
    /// JSON configuration file.
    #[arg(long, global = true, env = CONFIG_ENV)]
    pub config: Option<PathBuf>,
    /// Overrides the configured seed.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Stability verdict, with geometric stability or a certificate.
    Stability {
        rep: PathBuf,
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        theta: Vec<i64>,
        /// Also compute the Harder-Narasimhan filtration.
        #[arg(long)]
        hn: bool,
    },
    /// Harder-Narasimhan filtration over a finite field.
    Hn {
        rep: PathBuf,
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        theta: Vec<i64>,
    },
    /// Galois-fixedness, modifying element and Brauer type of an orbit.
    Typemap {
        rep: PathBuf,
        /// For finite fields: degree of the base field over F_p.
        #[arg(long, default_value_t = 1)]
        base_degree: u32,
        /// Compute the form (a base-field or a quaternionic representation).
        #[arg(long)]
        descend: bool,
        /// Write the descended form to this file.
        #[arg(long, requires = "descend")]
        out: Option<PathBuf>,
    },
    /// Hilbert 90 descent of a descent datum with trivial class.
    Descend {
        datum: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Quaternionic form of a descent datum over Q(sqrt(m)).
    Divform {
        datum: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Checks the identities of a twisted representation.
    TwistedValidate { twisted: PathBuf },
    /// Orbit counts of geometrically stable points over finite fields.
    Census {
        /// A quiver file, or one of kronecker[:m], jordan, loops:k, a2.
        quiver: String,
        #[arg(long, value_delimiter = ',')]
        dims: Vec<usize>,
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        theta: Vec<i64>,
        #[arg(long, value_delimiter = ',', default_value = "2,3,5")]
        q: Vec<u64>,
        /// Also verify descent from F_{q^n} to F_q for every q.
        #[arg(long)]
        verify_descent: Option<u32>,
    },
}

/// A finished command: the report, and the exit code it implies.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub report: Value,
    pub table: String,
    pub code: i32,
}

pub fn resolve_config(global: &GlobalArgs) -> Result<JobConfig> {
    let mut cfg = JobConfig::resolve(global.config.as_deref())?;
    if let Some(s) = global.seed {
        cfg.seed = s;
    }
    match global.format.as_deref() {
        Some("json") => cfg.format = OutputFormat::Json,
        Some("table") => cfg.format = OutputFormat::Table,
        _ => {}
    }
    Ok(cfg)
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))
}

fn write(path: &Path, v: &Value) -> Result<()> {
    std::fs::write(path, io::to_pretty(v))
        .map_err(|e| Error::Argument(format!("{}: {e}", path.display())))
}

/// Wraps a command result with the configuration needed to reproduce it.
fn envelope(command: &str, cfg: &JobConfig, result: Value) -> Value {
    json!({
        "command": command,
        "version": env!("CARGO_PKG_VERSION"),
        "seed": cfg.seed,
        "config": serde_json::to_value(cfg).expect("config serializes"),
        "result": result,
    })
}

pub fn error_report(e: &Error) -> Value {
    let kind = match e {
        Error::Parse(_) => "parse",
        Error::Argument(_) | Error::Domain(_) | Error::NotInvertible => "input",
        Error::Budget { .. } => "budget",
        Error::Inconclusive { .. } => "inconclusive",
        Error::Invariant(_) => "internal",
        Error::NotDecidable(_) => "not_decidable",
        Error::NotGaloisFixed => "not_galois_fixed",
    };
    let mut v = json!({"status": "error", "kind": kind, "message": e.to_string(), "exit_code": exit_code(e)});
    match e {
        Error::Budget { required, limit, .. } => {
            v["estimate"] = json!(required.to_string());
            v["limit"] = json!(limit.to_string());
        }
        Error::Inconclusive { seed, .. } => v["seed"] = json!(seed),
        _ => {}
    }
    v
}

fn rat(x: &num_rational::BigRational) -> Value {
    json!(crate::arith::rational_to_string(x))
}

fn verdict_json<F: JsonRing>(w: &Representation<F>, v: &StabilityVerdict<F::Elem>) -> Value {
    json!({
        "verdict": v.verdict.to_string(),
        "slope": rat(&v.slope),
        "witness": v.witness.as_ref().map(|x| io::witness_to_json(w.field(), w.quiver(), x)),
        "witness_slope": v.witness_slope.as_ref().map(rat),
        "notes": v.notes,
    })
}

fn verdict_phrase(v: Verdict) -> &'static str {
    match v {
        Verdict::Stable => "Stable",
        Verdict::StrictlySemistable => "Strictly semistable",
        Verdict::Unstable => "Unstable",
        Verdict::Unknown => "Unknown",
    }
}

fn witness_phrase<E>(v: &StabilityVerdict<E>) -> String {
    match (&v.witness, &v.witness_slope) {
        (Some(w), Some(s)) => format!(
            "; witness e={}, slope {}",
            w.dims,
            crate::arith::rational_to_string(s)
        ),
        _ => String::new(),
    }
}

fn hn_json<F: JsonRing>(w: &Representation<F>, theta: &[i64], budget: u128) -> Result<Value> {
    let hn = hn_filtration(w, theta, budget)?;
    hn.check(w, theta, budget)?;
    Ok(json!({
        "length": hn.len(),
        "steps": hn.steps.iter().map(|s| io::witness_to_json(w.field(), w.quiver(), s)).collect::<Vec<_>>(),
        "slopes": hn.slopes.iter().map(rat).collect::<Vec<_>>(),
        "subquotient_dims": hn.subquotient_dims().iter().map(|d| json!(d.0)).collect::<Vec<_>>(),
        "verified": true,
    }))
}

fn certificate_json<F: JsonRing>(w: &Representation<F>, c: &CertificateReport<F::Elem>) -> Value {
    json!({
        "stability": verdict_json(w, &c.verdict),
        "certificate_prime": c.prime,
        "end_dim": c.end_dim,
        "attempts": c.attempts,
    })
}

fn certificate_summary<E>(c: &CertificateReport<E>) -> String {
    let v = &c.verdict;
    match (v.verdict, c.prime) {
        (Verdict::Stable, Some(p)) => format!("Stable; geometrically stable (certified at p = {p})"),
        (x, _) => format!("{}{}", verdict_phrase(x), witness_phrase(v)),
    }
}

fn theta_for(theta: &[i64], d: &DimVector) -> Result<Vec<i64>> {
    if theta.is_empty() {
        return Ok(vec![0; d.len()]);
    }
    if theta.len() != d.len() {
        return Err(Error::Argument(format!("theta has {} entries for {} vertices", theta.len(), d.len())));
    }
    Ok(theta.to_vec())
}

fn cmd_stability(path: &Path, theta: &[i64], hn: bool, cfg: &JobConfig) -> Result<Value> {
    let rep = io::parse_rep(&read(path)?)?;
    let budget = cfg.max_subspace_checks;
    let (mut result, summary) = match &rep {
        AnyRep::Finite(w) => {
            let theta = theta_for(theta, w.dims())?;
            let v = stability_verdict(w, &theta, budget)?;
            let mut summary = format!("{}{}", verdict_phrase(v.verdict), witness_phrase(&v));
            let mut r = json!({"stability": verdict_json(w, &v)});
            if v.verdict == Verdict::Stable {
                let e = end_dim(w)?;
                r["end_dim"] = json!(e);
                r["geometrically_stable"] = json!(e == 1);
                summary = if e == 1 {
                    "Stable; geometrically stable (End dim 1)".to_string()
                } else {
                    format!("Stable; not geometrically stable (End dim {e})")
                };
            } else {
                r["geometrically_stable"] = json!(false);
            }
            if hn {
                r["hn"] = hn_json(w, &theta, budget)?;
            }
            (r, summary)
        }
        AnyRep::Rational(w) => {
            let theta = theta_for(theta, w.dims())?;
            let c = geom_stability_certificate(w, &theta, &cfg.primes, budget)?;
            let mut r = certificate_json(w, &c);
            r["geometrically_stable"] = certified(&c);
            if hn {
                return Err(Error::Domain("Harder-Narasimhan filtrations need a finite field".into()));
            }
            (r, certificate_summary(&c))
        }
        AnyRep::Quadratic(w) => {
            let theta = theta_for(theta, w.dims())?;
            let c = geom_stability_certificate(w, &theta, &cfg.primes, budget)?;
            let mut r = certificate_json(w, &c);
            r["geometrically_stable"] = certified(&c);
            if hn {
                return Err(Error::Domain("Harder-Narasimhan filtrations need a finite field".into()));
            }
            (r, certificate_summary(&c))
        }
        AnyRep::Quaternion(d) => {
            let theta = theta_for(theta, &d.dims)?;
            let c = drep_is_geom_stable(d, &theta, &cfg.primes, budget)?;
            let split = crate::twisted::drep_to_twisted(d)?.rep;
            let mut r = certificate_json(&split, &c);
            r["geometrically_stable"] = certified(&c);
            r["note"] = json!("decided on the split representation over the maximal subfield");
            (r, certificate_summary(&c))
        }
    };
    result["summary"] = json!(summary);
    Ok(result)
}

fn certified<E>(c: &CertificateReport<E>) -> Value {
    match c.verdict.verdict {
        Verdict::Stable => json!(true),
        Verdict::Unknown => Value::Null,
        _ => json!(false),
    }
}

fn cmd_hn(path: &Path, theta: &[i64], cfg: &JobConfig) -> Result<Value> {
    let w = io::parse_rep(&read(path)?)?.into_finite()?;
    let theta = theta_for(theta, w.dims())?;
    let mut r = hn_json(&w, &theta, cfg.max_subspace_checks)?;
    let dims: Vec<String> = hn_filtration(&w, &theta, cfg.max_subspace_checks)?
        .subquotient_dims()
        .iter()
        .map(|d| d.to_string())
        .collect();
    r["summary"] = json!(format!("HN type {}", dims.join(" ")));
    Ok(r)
}

fn typemap_for<P>(
    pair: P,
    w: &Representation<P::Ext>,
    cfg: &JobConfig,
    descend: bool,
    quaternionic_form: impl Fn(&DescentDatum<P>) -> Result<Value>,
) -> Result<(Value, Option<Value>)>
where
    P: GaloisPair,
    P::Ext: JsonRing,
    P::Base: JsonRing,
{
    let search = cfg.iso_search();
    let t = match type_map(&pair, w, &search) {
        Err(Error::NotGaloisFixed) => {
            return Ok((
                json!({"status": "not_fixed", "summary": "orbit not Galois-fixed", "pair": io::pair_to_json(&pair)}),
                None,
            ))
        }
        other => other?,
    };
    let mut r = json!({
        "status": "fixed",
        "pair": io::pair_to_json(&pair),
        "datum": io::datum_to_json(&t.datum),
        "lambda": pair.base().elem_to_json(&t.datum.lambda),
        "class": serde_json::to_value(&t.class).expect("class serializes"),
        "class_display": t.class.to_string(),
        "index": t.class.index(),
        "log": t.log,
    });
    let mut summary = format!("class {}", t.class);
    let mut form = None;
    if descend {
        if t.class.is_trivial() {
            let d = hilbert90_descend(&t.datum, cfg.seed, cfg.descent_attempts)?;
            r["descent_attempts"] = json!(d.attempts);
            r["descent_seed"] = json!(d.seed);
            form = Some(io::rep_to_json(&d.form));
            summary.push_str("; form over the base field computed");
        } else {
            form = Some(quaternionic_form(&t.datum)?);
            summary.push_str("; D-form computed");
        }
        r["form"] = form.clone().expect("set above");
    }
    r["summary"] = json!(summary);
    Ok((r, form))
}

fn cmd_typemap(
    path: &Path,
    base_degree: u32,
    descend: bool,
    out: Option<&Path>,
    cfg: &JobConfig,
) -> Result<Value> {
    let rep = io::parse_rep(&read(path)?)?;
    let (mut r, form) = match rep {
        AnyRep::Quadratic(w) => {
            let pair = QuadraticPair::new(w.field().m())?;
            typemap_for(pair, &w, cfg, descend, |d| {
                Ok(io::drep_to_json(&division_form(d, cfg.seed, cfg.descent_attempts)?.drep))
            })?
        }
        AnyRep::Finite(w) => {
            let f = w.field();
            if base_degree == 0 || f.degree() % base_degree != 0 || f.degree() == base_degree {
                return Err(Error::Argument(format!(
                    "base degree {base_degree} does not give a proper subfield of F_{}",
                    f.size()
                )));
            }
            let pair = FiniteGaloisPair::standard(f.characteristic(), base_degree, f.degree() / base_degree)?;
            if pair.ext() != f {
                return Err(Error::Domain("the field modulus is not the default one".into()));
            }
            typemap_for(pair, &w, cfg, descend, |_| {
                Err(Error::Invariant("nontrivial class over a finite field".into()))
            })?
        }
        _ => return Err(Error::Domain("type maps need a representation over L".into())),
    };
    if let (Some(out), Some(form)) = (out, form) {
        write(out, &form)?;
        r["written"] = json!(out.display().to_string());
        let s = r["summary"].as_str().unwrap_or_default().replace("computed", "written");
        r["summary"] = json!(s);
    }
    Ok(r)
}

fn descend_any<P>(t: &TwistedRep<P>, cfg: &JobConfig) -> Result<Value>
where
    P: GaloisPair,
    P::Ext: JsonRing,
    P::Base: JsonRing,
{
    let datum = t.datum();
    let d = hilbert90_descend(&datum, cfg.seed, cfg.descent_attempts)?;
    let l = datum.pair.ext();
    Ok(json!({
        "form": io::rep_to_json(&d.form),
        "g": d.g.iter().map(|m| io::matrix_to_json(m, |x| l.elem_to_json(x))).collect::<Vec<_>>(),
        "attempts": d.attempts,
        "descent_seed": d.seed,
        "summary": "form over the base field computed",
    }))
}

fn cmd_descend(path: &Path, out: Option<&Path>, cfg: &JobConfig) -> Result<Value> {
    let mut r = match io::parse_datum(&read(path)?)? {
        AnyTwisted::Finite(t) => descend_any(&t, cfg)?,
        AnyTwisted::Quadratic(t) => descend_any(&t, cfg)?,
    };
    if let Some(out) = out {
        write(out, &r["form"])?;
        r["written"] = json!(out.display().to_string());
    }
    Ok(r)
}

fn cmd_divform(path: &Path, out: Option<&Path>, cfg: &JobConfig) -> Result<Value> {
    let t = match io::parse_datum(&read(path)?)? {
        AnyTwisted::Quadratic(t) => t,
        AnyTwisted::Finite(_) => {
            return Err(Error::Domain("division forms need a quadratic pair over Q".into()))
        }
    };
    let f = division_form(&t.datum(), cfg.seed, cfg.descent_attempts)?;
    let l = t.pair.ext();
    let drep = io::drep_to_json(&f.drep);
    let mut r = json!({
        "drep": drep,
        "dims": f.drep.dims.0,
        "lambda": f.lambda.to_string(),
        "algebra": format!("({},{})_Q", t.pair.m(), f.lambda),
        "h": f.h.iter().map(|m| io::matrix_to_json(m, |x| l.elem_to_json(x))).collect::<Vec<_>>(),
        "summary": format!("D-representation over ({},{})_Q of dimension {}", t.pair.m(), f.lambda, f.drep.dims),
    });
    if let Some(out) = out {
        write(out, &r["drep"])?;
        r["written"] = json!(out.display().to_string());
    }
    Ok(r)
}

fn validate_any<P: GaloisPair>(t: &TwistedRep<P>) -> Value {
    let v = validate_twisted(t);
    let mut problems = v.problems.clone();
    let mut r = json!({});
    if v.ok {
        match t.pair.brauer_class(&t.lambda) {
            Ok(c) => {
                if c.index() != t.index {
                    problems.push(format!("declared index {} but the class has index {}", t.index, c.index()));
                }
                r["class"] = json!(c.to_string());
            }
            Err(e) => r["class_note"] = json!(e.to_string()),
        }
        if let Ok(d) = twisted_dim(t) {
            r["twisted_dims"] = json!(d.0);
        }
    }
    r["ok"] = json!(problems.is_empty());
    r["summary"] = json!(if problems.is_empty() { "valid twisted representation".to_string() } else { problems.join("; ") });
    r["problems"] = json!(problems);
    r
}

fn cmd_twisted_validate(path: &Path) -> Result<Value> {
    Ok(match io::parse_twisted(&read(path)?)? {
        AnyTwisted::Finite(t) => validate_any(&t),
        AnyTwisted::Quadratic(t) => validate_any(&t),
    })
}

/// A built-in quiver by name, or a quiver file.
pub fn quiver_by_name(name_or_path: &str) -> Result<Arc<Quiver>> {
    let (name, arg) = match name_or_path.split_once(':') {
        Some((n, a)) => (n, Some(a)),
        None => (name_or_path, None),
    };
    let count = |default: usize| -> Result<usize> {
        arg.map_or(Ok(default), |a| {
            a.parse().map_err(|_| Error::Argument(format!("bad quiver parameter {a:?}")))
        })
    };
    match name {
        "kronecker" => Ok(Quiver::kronecker(count(2)?)),
        "jordan" => Ok(Quiver::jordan()),
        "loops" => Ok(Quiver::loops(count(1)?)),
        "a2" => Ok(Quiver::a2()),
        _ => {
            let v = io::read_json(Path::new(name_or_path))?;
            Ok(Arc::new(io::quiver_from_json(&v, "$")?))
        }
    }
}

fn cmd_census(
    quiver: &str,
    dims: &[usize],
    theta: &[i64],
    qs: &[u64],
    verify: Option<u32>,
    cfg: &JobConfig,
) -> Result<Value> {
    let q = quiver_by_name(quiver)?;
    let d = DimVector(dims.to_vec());
    if d.len() != q.vertex_count() {
        return Err(Error::Argument(format!("--dims needs {} entries", q.vertex_count())));
    }
    let theta = theta_for(theta, &d)?;
    let census = census_polynomiality(&q, &d, &theta, qs, cfg)?;
    let mut r = json!({
        "quiver": io::quiver_to_json(&q),
        "quiver_hash": q.fingerprint(),
        "dims": d.0,
        "theta": theta,
        "counts": census.counts,
        "fit": census.fit,
        "summary": format!("counts {}; fit {}",
            census.counts.iter().map(|c| c.geom_stable_orbits.to_string()).collect::<Vec<_>>().join(","),
            census.fit.display),
    });
    if let Some(n) = verify {
        let mut reports = Vec::new();
        let mut records = Vec::new();
        for &qq in qs {
            let (rep, recs) = verify_descent_census(&q, &d, &theta, qq, n, cfg)?;
            records.extend(recs);
            reports.push(rep);
        }
        let audit = crate::census::index_divisibility_audit(&crate::census::audit_entries(&records));
        r["descent"] = json!(reports);
        r["index_audit"] = json!(audit);
    }
    Ok(r)
}

/// Runs a parsed command line.
pub fn run(cli: &Cli) -> Result<(Value, JobConfig)> {
    let cfg = resolve_config(&cli.global)?;
    cfg.validate()?;
    let (name, result) = match &cli.command {
        Command::Stability { rep, theta, hn } => ("stability", cmd_stability(rep, theta, *hn, &cfg)?),
        Command::Hn { rep, theta } => ("hn", cmd_hn(rep, theta, &cfg)?),
        Command::Typemap { rep, base_degree, descend, out } => {
            ("typemap", cmd_typemap(rep, *base_degree, *descend, out.as_deref(), &cfg)?)
        }
        Command::Descend { datum, out } => ("descend", cmd_descend(datum, out.as_deref(), &cfg)?),
        Command::Divform { datum, out } => ("divform", cmd_divform(datum, out.as_deref(), &cfg)?),
        Command::TwistedValidate { twisted } => ("twisted-validate", cmd_twisted_validate(twisted)?),
        Command::Census { quiver, dims, theta, q, verify_descent } => {
            ("census", cmd_census(quiver, dims, theta, q, *verify_descent, &cfg)?)
        }
    };
    Ok((envelope(name, &cfg, result), cfg))
}

/// Runs the command line and renders the report; errors become an error
/// report with the matching exit code.
pub fn execute(cli: &Cli) -> Outcome {
    match run(cli) {
        Ok((report, _)) => {
            let table = render_table(&report);
            Outcome { report, table, code: exit::OK }
        }
        Err(e) => {
            let report = error_report(&e);
            let table = format!("error: {e}\n");
            Outcome { report, table, code: exit_code(&e) }
        }
    }
}

fn scalar(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Null => "-".into(),
        other => other.to_string(),
    }
}

/// Aligned columns; the first row is the header.
pub fn align(rows: &[Vec<String>]) -> String {
    let cols = rows.iter().map(|r| r.len()).max().unwrap_or(0);
    let widths: Vec<usize> = (0..cols)
        .map(|c| rows.iter().filter_map(|r| r.get(c)).map(|s| s.chars().count()).max().unwrap_or(0))
        .collect();
    let mut out = String::new();
    for r in rows {
        let line: Vec<String> = r
            .iter()
            .enumerate()
            .map(|(i, s)| format!("{s:<w$}", w = widths[i]))
            .collect();
        out.push_str(line.join("  ").trim_end());
        out.push('\n');
    }
    out
}

/// Human-readable rendering of a report.
pub fn render_table(report: &Value) -> String {
    let result = &report["result"];
    let mut out = String::new();
    if let Some(s) = result["summary"].as_str() {
        out.push_str(s);
        out.push('\n');
    }
    if report["command"] == "census" {
        let mut rows = vec![vec!["q".into(), "geom. stable".into(), "stable, not geom.".into(), "points".into(), "method".into()]];
        for c in result["counts"].as_array().into_iter().flatten() {
            rows.push(vec![
                scalar(&c["q"]),
                scalar(&c["geom_stable_orbits"]),
                scalar(&c["stable_not_geom_orbits"]),
                scalar(&c["geom_stable_points"]),
                scalar(&c["method"]),
            ]);
        }
        out.push_str(&align(&rows));
        if let Some(ds) = result["descent"].as_array() {
            let mut rows = vec![vec!["q".into(), "n".into(), "orbits over L".into(), "fixed".into(), "over k".into(), "descended".into(), "violations".into()]];
            for d in ds {
                rows.push(vec![
                    scalar(&d["q"]),
                    scalar(&d["n"]),
                    scalar(&d["orbits_over_extension"]),
                    scalar(&d["fixed_orbits"]),
                    scalar(&d["base_count"]),
                    scalar(&d["descended"]),
                    d["violations"].as_array().map_or(0, |v| v.len()).to_string(),
                ]);
            }
            out.push_str(&align(&rows));
        }
    } else {
        let mut rows = Vec::new();
        if let Some(obj) = result.as_object() {
            for (k, v) in obj {
                if k == "summary" {
                    continue;
                }
                let text = match v {
                    Value::Object(_) | Value::Array(_) => serde_json::to_string(v).expect("serializes"),
                    other => scalar(other),
                };
                rows.push(vec![k.clone(), text]);
            }
        }
        out.push_str(&align(&rows));
    }
    out.push_str(&format!("seed {}\n", scalar(&report["seed"])));
    out
}

/// Entry point for the binary; returns the process exit code.
pub fn main_with<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { exit::PARSE } else { exit::OK };
        }
    };
    let format = resolve_config(&cli.global).map(|c| c.format).unwrap_or_default();
    let out = execute(&cli);
    if out.code != exit::OK && format == OutputFormat::Json {
        eprintln!("error: {}", out.report["message"].as_str().unwrap_or_default());
    }
    match format {
        OutputFormat::Json => print!("{}", io::to_pretty(&out.report)),
        OutputFormat::Table => print!("{}", out.table),
    }
    out.code
}
