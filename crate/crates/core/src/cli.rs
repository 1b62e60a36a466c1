//! Command-line driver: `verify <suite>` and `compute <object>`.
//!
//! Reports are JSON (see `docs/report-schema.md`). Exit codes: 0 all asserted
//! claims pass, 1 some claim failed, 2 usage error, 3 unsupported request.

use std::collections::BTreeMap;
use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::diffop::{self, Model};
use crate::exact::{Q, Scalar, Var};
use crate::hc::{self, HcError, HcFamily};
use crate::integrals::{self, IntegralError, IntegralFamily};
use crate::lambda::{self, KMode, Partition};
use crate::macdiff::{self, MacError};
use crate::par;
use crate::rootsys::{Family, GRS};

pub const SCHEMA_VERSION: &str = "defcms-report/1";

#[derive(Parser, Debug)]
#[command(name = "defcms", version, about = "Deformed CMS operators for generalized root systems")]
pub struct Cli {
    #[command(subcommand)]
    pub cmd: Cmd,
}

#[derive(Subcommand, Debug)]
pub enum Cmd {
    /// Run a verification suite and emit a JSON report.
    Verify {
        #[arg(value_enum)]
        suite: Suite,
        #[command(flatten)]
        opts: Opts,
    },
    /// Compute and print a single object.
    Compute {
        #[arg(value_enum)]
        object: Object,
        #[command(flatten)]
        opts: Opts,
    },
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Suite {
    MainIdentity,
    Gauge,
    Commute,
    Prop1,
    QuasiInvariance,
    Bernoulli,
    Dimensions,
    Poincare,
    SuperJack,
    Prop4,
    Macdonald,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Object {
    RootSystem,
    Schrodinger,
    Radial,
    Integral,
    HcImage,
    Bernoulli,
    Newton,
    Jack,
    SuperJack,
    Poincare,
    DefMr,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq, Default, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Json,
    Text,
}

#[derive(Args, Clone, Debug, Default, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Opts {
    /// Root system family: A, BC, B, C, C0, D, AB13, G12, D21.
    #[arg(long)]
    pub system: Option<String>,
    /// First block size.
    #[arg(long)]
    pub n: Option<usize>,
    /// Second block size.
    #[arg(long)]
    pub m: Option<usize>,
    #[arg(long)]
    pub p: Option<usize>,
    #[arg(long)]
    pub r: Option<u32>,
    #[arg(long)]
    pub pmax: Option<usize>,
    #[arg(long)]
    pub qmax: Option<usize>,
    /// Maximal degree (or weight).
    #[arg(long = "N")]
    #[serde(rename = "N")]
    pub big_n: Option<u32>,
    /// Partition, e.g. "3,1,1".
    #[arg(long)]
    pub lambda: Option<String>,
    /// trig or rational.
    #[arg(long)]
    pub model: Option<String>,
    /// Pin the parameter k to a rational value a/b.
    #[arg(long = "pin-k")]
    #[serde(rename = "pin-k", alias = "pin_k")]
    pub pin_k: Option<String>,
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Worker threads; 1 runs sequentially.
    #[arg(long)]
    pub jobs: Option<usize>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// Record wall time per claim (makes output nondeterministic).
    #[arg(long)]
    #[serde(skip)]
    pub timing: bool,
    /// JSON file with defaults for any of the keys above.
    #[arg(long)]
    #[serde(skip)]
    pub config: Option<PathBuf>,
}

impl Opts {
    /// Fills unset fields from `base`.
    fn merged_over(self, base: Opts) -> Opts {
        Opts {
            system: self.system.or(base.system),
            n: self.n.or(base.n),
            m: self.m.or(base.m),
            p: self.p.or(base.p),
            r: self.r.or(base.r),
            pmax: self.pmax.or(base.pmax),
            qmax: self.qmax.or(base.qmax),
            big_n: self.big_n.or(base.big_n),
            lambda: self.lambda.or(base.lambda),
            model: self.model.or(base.model),
            pin_k: self.pin_k.or(base.pin_k),
            out: self.out.or(base.out),
            jobs: self.jobs.or(base.jobs),
            format: self.format.or(base.format),
            timing: self.timing,
            config: self.config,
        }
    }
}

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Unsupported(String),
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) | CliError::Io(_) => 2,
            CliError::Unsupported(_) => 3,
        }
    }

    pub fn message(&self) -> String {
        match self {
            CliError::Usage(s) => format!("error: {s}"),
            CliError::Io(s) => format!("error: {s}"),
            CliError::Unsupported(s) => format!("unsupported: {s}"),
        }
    }
}

const CONJECTURAL: &str = "conjectural in source paper";

impl From<IntegralError> for CliError {
    fn from(e: IntegralError) -> Self {
        match e {
            IntegralError::Unsupported => CliError::Unsupported(CONJECTURAL.into()),
            other => CliError::Usage(other.to_string()),
        }
    }
}

impl From<HcError> for CliError {
    fn from(e: HcError) -> Self {
        match e {
            HcError::Unsupported => CliError::Unsupported(CONJECTURAL.into()),
            HcError::NotTypeA => CliError::Unsupported(e.to_string()),
            other => CliError::Usage(other.to_string()),
        }
    }
}

impl From<MacError> for CliError {
    fn from(e: MacError) -> Self {
        match e {
            MacError::Unsupported(s) => CliError::Unsupported(s),
            other => CliError::Usage(other.to_string()),
        }
    }
}

impl From<lambda::LambdaError> for CliError {
    fn from(e: lambda::LambdaError) -> Self {
        match e {
            lambda::LambdaError::Unsupported(s) => CliError::Unsupported(s),
            other => CliError::Usage(other.to_string()),
        }
    }
}

#[derive(Serialize, Clone, Copy, Debug, PartialEq, Eq)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Reported,
}

impl Status {
    fn label(self) -> &'static str {
        match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::Reported => "reported",
        }
    }
}

#[derive(Serialize, Clone, Debug)]
pub struct Claim {
    pub id: String,
    pub anchor: String,
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<Value>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub wall_time_ms: Option<u128>,
}

#[derive(Serialize, Clone, Debug)]
pub struct SystemDesc {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub family: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub m: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub model: Option<String>,
    pub k: String,
}

#[derive(Serialize, Clone, Debug)]
pub struct SuiteReport {
    pub schema: &'static str,
    pub version: &'static str,
    pub suite: String,
    pub system: SystemDesc,
    pub claims: Vec<Claim>,
    #[serde(skip_serializing_if = "BTreeMap::is_empty")]
    pub tables: BTreeMap<String, Value>,
    pub status: Status,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }

    pub fn render_text(&self) -> String {
        let w = self.claims.iter().map(|c| c.id.len()).max().unwrap_or(0).max(5);
        let mut out = format!("{} {} [{}]\n", self.suite, self.system.name.clone().unwrap_or_default(), self.status.label());
        for c in &self.claims {
            out.push_str(&format!("{:<w$}  {:<8}  {}\n", c.id, c.status.label(), c.witness.clone().unwrap_or_default()));
        }
        for (name, table) in &self.tables {
            out.push_str(&format!("\n{name}\n"));
            out.push_str(&render_table(table));
        }
        out
    }
}

/// A table is `{"columns": [...], "rows": [[...], ...]}`.
fn table(columns: &[&str], rows: Vec<Vec<Value>>) -> Value {
    json!({"columns": columns, "rows": rows})
}

fn render_table(t: &Value) -> String {
    let cell = |v: &Value| match v {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    };
    let cols: Vec<String> = t["columns"].as_array().map(|c| c.iter().map(cell).collect()).unwrap_or_default();
    let rows: Vec<Vec<String>> = t["rows"]
        .as_array()
        .map(|rs| rs.iter().map(|r| r.as_array().map(|r| r.iter().map(cell).collect()).unwrap_or_default()).collect())
        .unwrap_or_default();
    let widths: Vec<usize> = (0..cols.len())
        .map(|i| rows.iter().map(|r| r.get(i).map_or(0, |c| c.len())).max().unwrap_or(0).max(cols[i].len()))
        .collect();
    let line = |cells: &[String]| {
        cells.iter().zip(&widths).map(|(c, w)| format!("{c:>w$}")).collect::<Vec<_>>().join("  ") + "\n"
    };
    let mut out = line(&cols);
    for r in &rows {
        out.push_str(&line(r));
    }
    out
}

/// Collects claims in submission order.
struct Claims {
    timing: bool,
    items: Vec<Claim>,
}

impl Claims {
    fn new(timing: bool) -> Claims {
        Claims { timing, items: Vec::new() }
    }

    /// Runs `f`, which returns (holds, witness when failing, detail).
    fn check<F>(&mut self, id: impl Into<String>, anchor: &str, f: F)
    where
        F: FnOnce() -> (bool, Option<String>, Option<Value>),
    {
        let t = Instant::now();
        let (ok, witness, detail) = f();
        let ms = t.elapsed().as_millis();
        self.push(id.into(), anchor, ok, witness, detail, ms);
    }

    fn push(&mut self, id: String, anchor: &str, ok: bool, witness: Option<String>, detail: Option<Value>, ms: u128) {
        let status = if ok { Status::Pass } else { Status::Fail };
        let witness = match (ok, witness) {
            (false, None) => Some("identity does not hold".into()),
            (_, w) => w,
        };
        self.items.push(Claim {
            id,
            anchor: anchor.into(),
            status,
            witness,
            detail,
            wall_time_ms: self.timing.then_some(ms),
        });
    }

    fn report(&mut self, id: impl Into<String>, anchor: &str, witness: Option<String>, detail: Value) {
        self.items.push(Claim {
            id: id.into(),
            anchor: anchor.into(),
            status: Status::Reported,
            witness,
            detail: Some(detail),
            wall_time_ms: None,
        });
    }
}

/// Parses arguments, runs the command and prints the result. Returns the
/// process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = e.exit_code();
            let _ = e.print();
            return code;
        }
    };
    match execute(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("{}", e.message());
            e.exit_code()
        }
    }
}

fn load_opts(opts: Opts) -> Result<Opts, CliError> {
    let Some(path) = opts.config.clone() else { return Ok(opts) };
    let text = std::fs::read_to_string(&path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    let base: Opts = serde_json::from_str(&text).map_err(|e| CliError::Usage(format!("config {}: {e}", path.display())))?;
    Ok(opts.merged_over(base))
}

fn apply_jobs(opts: &Opts) {
    if let Some(j) = opts.jobs {
        if j == 0 {
            return;
        }
        par::set_jobs(j);
    }
}

fn emit(opts: &Opts, text: &str) -> Result<(), CliError> {
    match &opts.out {
        Some(path) => std::fs::write(path, text).map_err(|e| CliError::Io(format!("{}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn execute(cli: Cli) -> Result<i32, CliError> {
    match cli.cmd {
        Cmd::Verify { suite, opts } => {
            let opts = load_opts(opts)?;
            apply_jobs(&opts);
            let report = verify(suite, &opts)?;
            let text = match opts.format.unwrap_or_default() {
                Format::Json => serde_json::to_string_pretty(&report).expect("report serializes") + "\n",
                Format::Text => report.render_text(),
            };
            emit(&opts, &text)?;
            Ok(if report.passed() { 0 } else { 1 })
        }
        Cmd::Compute { object, opts } => {
            let opts = load_opts(opts)?;
            apply_jobs(&opts);
            let text = compute(object, &opts)?;
            emit(&opts, &(text + "\n"))?;
            Ok(0)
        }
    }
}

fn pinned_k(opts: &Opts) -> Result<Option<Q>, CliError> {
    match &opts.pin_k {
        None => Ok(None),
        Some(s) => {
            let q = Q::parse(s.trim()).ok_or_else(|| CliError::Usage(format!("--pin-k: cannot parse {s:?} as a rational")))?;
            if q.is_zero() {
                return Err(CliError::Usage("--pin-k: k must be nonzero".into()));
            }
            Ok(Some(q))
        }
    }
}

fn k_label(opts: &Opts) -> Result<String, CliError> {
    Ok(match pinned_k(opts)? {
        Some(q) => q.to_string(),
        None => "symbolic".into(),
    })
}

fn family(opts: &Opts) -> Result<Family, CliError> {
    let s = opts.system.as_deref().unwrap_or("A");
    Family::parse(s).ok_or_else(|| CliError::Usage(format!("unknown system {s:?}")))
}

fn sizes(opts: &Opts) -> (usize, usize) {
    (opts.n.unwrap_or(1), opts.m.unwrap_or(1))
}

fn system(opts: &Opts) -> Result<GRS, CliError> {
    let fam = family(opts)?;
    let (n, m) = sizes(opts);
    let g = GRS::build(fam, n, m).map_err(|e| CliError::Usage(e.to_string()))?;
    match pinned_k(opts)? {
        None => Ok(g),
        Some(q) => g
            .specialize(&[(Var::param("k"), Scalar::from_q(q))])
            .map_err(|e| CliError::Usage(format!("--pin-k: {e}"))),
    }
}

fn models(opts: &Opts) -> Result<Vec<Model>, CliError> {
    match &opts.model {
        None => Ok(vec![Model::Geometric, Model::Affine]),
        Some(s) => Model::parse(s).map(|m| vec![m]).ok_or_else(|| CliError::Usage(format!("unknown model {s:?}"))),
    }
}

fn one_model(opts: &Opts) -> Result<Model, CliError> {
    Ok(models(opts)?.into_iter().next().expect("nonempty"))
}

fn kmode(opts: &Opts) -> Result<KMode, CliError> {
    Ok(match pinned_k(opts)? {
        Some(q) => KMode::pinned(q),
        None => KMode::Symbolic,
    })
}

fn grs_desc(g: &GRS, opts: &Opts, model: Option<String>) -> Result<SystemDesc, CliError> {
    Ok(SystemDesc {
        family: Some(format!("{:?}", g.family)),
        name: Some(g.name()),
        n: Some(g.n),
        m: Some(g.m),
        model,
        k: k_label(opts)?,
    })
}

fn block_desc(name: &str, n: usize, m: usize, opts: &Opts) -> Result<SystemDesc, CliError> {
    Ok(SystemDesc { family: None, name: Some(name.into()), n: Some(n), m: Some(m), model: None, k: k_label(opts)? })
}

fn check_of(c: &integrals::Check) -> (bool, Option<String>, Option<Value>) {
    (c.holds, c.residue.clone(), None)
}

fn finish(suite: Suite, system: SystemDesc, claims: Claims, tables: BTreeMap<String, Value>) -> SuiteReport {
    let status = if claims.items.iter().all(|c| c.status != Status::Fail) { Status::Pass } else { Status::Fail };
    SuiteReport {
        schema: SCHEMA_VERSION,
        version: env!("CARGO_PKG_VERSION"),
        suite: suite.to_possible_value().expect("named suite").get_name().to_string(),
        system,
        claims: claims.items,
        tables,
        status,
    }
}

/// Runs one suite. Errors map to exit codes 2 and 3.
pub fn verify(suite: Suite, opts: &Opts) -> Result<SuiteReport, CliError> {
    let mut claims = Claims::new(opts.timing);
    let mut tables = BTreeMap::new();
    let desc = match suite {
        Suite::MainIdentity => {
            let g = system(opts)?;
            let ms = models(opts)?;
            for &model in &ms {
                let label = model.label();
                claims.check(format!("main-identity/{label}"), "admissibility identity", || {
                    check_of(&integrals::main_identity_check(&g, model))
                });
                for p in integrals::perturbation_checks(&g, model) {
                    // A perturbed multiplicity must break the identity.
                    let witness = p.check.holds.then(|| "identity survives the perturbation".to_string());
                    claims.push(
                        format!("perturbation/{label}/{}", p.label),
                        "admissibility is sharp",
                        !p.check.holds,
                        witness,
                        None,
                        0,
                    );
                }
            }
            grs_desc(&g, opts, opts.model.clone())?
        }
        Suite::Gauge => {
            let g = system(opts)?;
            for model in models(opts)? {
                let label = model.label();
                let res = diffop::gauge_check(&g, model);
                let detail = json!({
                    "constant": res.constant.as_ref().map(|c| c.render()),
                    "rho_norm2": res.rho_norm2.render(),
                    "sign": res.sign,
                });
                claims.check(format!("gauge-constant/{label}"), "ground state gauge", || {
                    let ok = res.constant.is_some();
                    (ok, (!ok).then(|| "conjugated operator has a nonconstant remainder".into()), Some(detail.clone()))
                });
                match model {
                    Model::Geometric => claims.check(format!("gauge-magnitude/{label}"), "ground state energy", || {
                        let ok = matches!(res.sign, Some(1) | Some(-1));
                        (ok, (!ok).then(|| format!("constant {:?} is not ±|rho|^2", detail["constant"])), None)
                    }),
                    Model::Affine => claims.check(format!("gauge-value/{label}"), "ground state energy", || {
                        let ok = res.sign == Some(0);
                        (ok, (!ok).then(|| format!("constant {:?} is nonzero", detail["constant"])), None)
                    }),
                }
            }
            grs_desc(&g, opts, opts.model.clone())?
        }
        Suite::Commute => {
            let g = system(opts)?;
            let model = one_model(opts)?;
            let fam = IntegralFamily::new(&g, model)?;
            let pmax = opts.pmax.unwrap_or(3);
            let qmax = opts.qmax.unwrap_or(pmax);
            let orders = fam.integrability_orders();
            let mut pairs = Vec::new();
            for &p in orders.iter().filter(|&&p| p <= pmax) {
                for &q in orders.iter().filter(|&&q| q > p && q <= qmax.max(pmax)) {
                    pairs.push((p, q));
                }
            }
            let t = Instant::now();
            let results = fam.commute_checks(&pairs)?;
            let ms = t.elapsed().as_millis() / (pairs.len().max(1) as u128);
            for ((p, q), c) in pairs.iter().zip(&results) {
                claims.push(format!("commute/L{p},L{q}"), "commuting integrals", c.holds, c.residue.clone(), None, ms);
            }
            if g.family.is_bc_type() {
                for p in (1..=pmax).filter(|p| p % 2 == 1) {
                    claims.check(format!("odd-vanishing/L{p}"), "odd integrals vanish", || {
                        match fam.integral(p) {
                            Ok(op) => (op.is_zero(), (!op.is_zero()).then(|| format!("{} terms", op.len())), None),
                            Err(e) => (false, Some(e.to_string()), None),
                        }
                    });
                }
            }
            claims.check("independence", "algebraic independence", || {
                let ok = fam.independence();
                (ok, (!ok).then(|| "leading symbols are dependent".into()), None)
            });
            grs_desc(&g, opts, Some(model.label().into()))?
        }
        Suite::Prop1 => {
            let g = system(opts)?;
            let model = one_model(opts)?;
            let fam = IntegralFamily::new(&g, model)?;
            let l2 = diffop::build_l2_display(&g, model);
            let pmax = opts.pmax.unwrap_or(3);
            let items: Vec<(usize, usize)> =
                (0..fam.orbit.len()).flat_map(|vi| (1..=pmax).map(move |p| (vi, p))).collect();
            let t = Instant::now();
            let results = par::map(&items, |&(vi, p)| fam.prop1_check_with(&l2, vi, p));
            let ms = t.elapsed().as_millis() / (items.len().max(1) as u128);
            for ((vi, p), r) in items.iter().zip(results) {
                let c = r?;
                let v: Vec<String> = fam.orbit[*vi].iter().map(|x| x.to_string()).collect();
                claims.push(
                    format!("prop1/v=({})/p{p}", v.join(",")),
                    "commutator with the Hamiltonian",
                    c.holds,
                    c.residue,
                    None,
                    ms,
                );
            }
            grs_desc(&g, opts, Some(model.label().into()))?
        }
        Suite::QuasiInvariance => {
            let g = system(opts)?;
            let mut fam = HcFamily::new(&g)?;
            let pmax = opts.pmax.unwrap_or(5);
            for p in 1..=pmax {
                let z = fam.hc_image(p);
                if g.family.is_bc_type() && p % 2 == 1 {
                    claims.check(format!("vanishes/Z{p}"), "odd images vanish", || {
                        (z.is_zero(), (!z.is_zero()).then(|| hc::render(&z)), None)
                    });
                    continue;
                }
                claims.check(format!("quasi-invariance/Z{p}"), "Harish-Chandra image is quasi-invariant", || {
                    let qi = hc::quasi_invariance_check(&g, &z);
                    let w = (!qi.holds()).then(|| {
                        format!("imaginary_ok={} w0_ok={}: {}", qi.imaginary_ok, qi.w0_ok, hc::render(&z))
                    });
                    (qi.holds(), w, None)
                });
                claims.check(format!("highest-term/Z{p}"), "highest term is the power sum", || {
                    let ok = hc::highest_term_ok(&g, &z, p as u32);
                    (ok, (!ok).then(|| hc::render(&z)), None)
                });
            }
            grs_desc(&g, opts, None)?
        }
        Suite::Bernoulli => {
            let g = system(opts)?;
            let rmax = opts.r.map(|r| r as usize).unwrap_or(6);
            for r in 1..=rmax {
                let y = hc::bernoulli_generator(&g, r)?;
                claims.check(format!("quasi-invariance/Y{r}"), "Bernoulli generators are quasi-invariant", || {
                    let qi = hc::quasi_invariance_check(&g, &y);
                    (qi.holds(), (!qi.holds()).then(|| hc::render(&y)), None)
                });
            }
            let pmax = opts.pmax.unwrap_or(4);
            let mut fam = HcFamily::new(&g)?;
            for p in 1..=pmax {
                let z = fam.hc_image(p);
                let sol = hc::express_in_generators(&g, &z, p)?;
                claims.check(format!("generated/Z{p}"), "images lie in the generated algebra", || match sol {
                    Some(coeffs) => {
                        let d: Vec<Value> = coeffs
                            .iter()
                            .map(|(a, c)| json!({"exponents": a, "coefficient": c.render()}))
                            .collect();
                        (true, None, Some(Value::Array(d)))
                    }
                    None => (false, Some(format!("no solution for {}", hc::render(&z))), None),
                });
            }
            grs_desc(&g, opts, None)?
        }
        Suite::Dimensions => {
            let (n, m) = sizes(opts);
            let nmax = opts.big_n.unwrap_or(6);
            let mode = kmode(opts)?;
            let rows: Vec<lambda::DimensionRow> = match &mode {
                KMode::Symbolic => lambda::dimension_table(n, m, nmax),
                pinned => {
                    let degrees: Vec<u32> = (0..=nmax).collect();
                    let series = lambda::poincare_series(n, m, nmax as usize);
                    par::map(&degrees, |&d| {
                        let dim = lambda::component_dimension(n, m, d, pinned);
                        let span = lambda::newton_span_rank_at(n, m, d, pinned);
                        let d_n = series.closed_form[d as usize];
                        lambda::DimensionRow { degree: d, d_n, component_dim: dim, span_rank: span, ok: dim as u64 == d_n && span == dim }
                    })
                }
            };
            for row in &rows {
                claims.push(
                    format!("dimension/N{}", row.degree),
                    "Newton sums generate; dimension matches the series",
                    row.ok,
                    (!row.ok).then(|| format!("D_N={} dim={} span={}", row.d_n, row.component_dim, row.span_rank)),
                    None,
                    0,
                );
            }
            let body = rows
                .iter()
                .map(|r| {
                    let st = if r.ok { "pass" } else { "fail" };
                    vec![json!(r.degree), json!(r.d_n), json!(r.component_dim), json!(r.span_rank), json!(st)]
                })
                .collect();
            tables.insert("dimensions".into(), table(&["degree", "D_N", "dim", "span", "status"], body));
            block_desc(&format!("Lambda0({n},{m})"), n, m, opts)?
        }
        Suite::Poincare => {
            let (n, m) = sizes(opts);
            let nmax = opts.big_n.unwrap_or(10) as usize;
            let s = lambda::poincare_series(n, m, nmax);
            claims.check("series-agree", "Poincare series closed form", || {
                let w = (!s.agree).then(|| format!("enumerated {:?} vs closed form {:?}", s.enumerated, s.closed_form));
                (s.agree, w, None)
            });
            claims.check("series-symmetric", "symmetry in (n,m)", || {
                (s.symmetric, (!s.symmetric).then(|| "P(n,m) differs from P(m,n)".into()), None)
            });
            let numer = lambda::hilbert_numerator(n, m, nmax);
            if m == 1 && nmax >= 2 * n + 1 {
                claims.check("numerator-degrees", "generator degrees 0, n+2, ..., 2n+1", || {
                    let expect: Vec<i64> =
                        (0..=nmax).map(|d| i64::from(d == 0 || (n + 2..=2 * n + 1).contains(&d))).collect();
                    let ok = numer == expect;
                    (ok, (!ok).then(|| format!("{numer:?}")), None)
                });
            }
            claims.report("hilbert-numerator", "numerator over prod (1-t^i), i <= n+m", None, json!(numer));
            let bc = lambda::bc_poincare_series(n, m, nmax);
            claims.check("bc-series", "BC series is P(t^2)", || {
                let ok = (0..=nmax).all(|d| bc[d] == if d % 2 == 0 { s.closed_form[d / 2] } else { 0 });
                (ok, (!ok).then(|| format!("{bc:?}")), None)
            });
            let body = (0..=nmax)
                .map(|d| {
                    let st = if s.enumerated[d] == s.closed_form[d] { "pass" } else { "fail" };
                    vec![json!(d), json!(s.closed_form[d]), json!(s.enumerated[d]), json!(bc[d]), json!(st)]
                })
                .collect();
            tables.insert("poincare".into(), table(&["degree", "D_N", "enumerated", "BC", "status"], body));
            block_desc(&format!("Lambda0({n},{m})"), n, m, opts)?
        }
        Suite::SuperJack => {
            let (n, m) = sizes(opts);
            let maxw = opts.big_n.unwrap_or(4);
            let (reports, indep) = lambda::super_jack_checks(n, m, maxw)?;
            for r in &reports {
                claims.check(format!("membership/{}", r.partition), "super-Jack lies in Lambda0", || {
                    (r.membership, None, None)
                });
                claims.check(format!("leading/{}", r.partition), "leading monomial", || {
                    (r.leading_ok, (!r.leading_ok).then(|| r.leading.clone()), None)
                });
            }
            for (w, ok) in indep {
                claims.check(format!("independence/N{w}"), "super-Jacks form a basis", || {
                    (ok, (!ok).then(|| "hook super-Jacks are dependent".into()), None)
                });
            }
            block_desc(&format!("SJ({n},{m})"), n, m, opts)?
        }
        Suite::Prop4 => {
            let mut instances: Vec<(usize, usize, Option<Q>)> = Vec::new();
            match (pinned_k(opts)?, opts.n, opts.m) {
                (Some(k), _, _) => {
                    let (n, m) = sizes(opts);
                    instances.push((n, m, Some(k)));
                }
                (None, Some(n), Some(m)) => instances.push((n, m, None)),
                _ => {
                    instances.push((1, 1, None));
                    instances.push((1, 1, Some(Q::int(-1))));
                    instances.push((2, 1, Some(Q::frac(-1, 2))));
                    instances.push((2, 2, Some(Q::frac(-1, 2))));
                    instances.push((2, 2, Some(Q::int(-2))));
                }
            }
            for (n, m, k) in instances {
                let v = lambda::prop4_check(n, m, k.clone())?;
                let fams: Vec<Value> =
                    v.families.iter().map(|&(r, s, ok)| json!({"r": r, "s": s, "solves": ok})).collect();
                // x_1..x_r = y_1..y_s = w is a common zero exactly when k = -s/r.
                let expected = match &k {
                    None => false,
                    Some(q) => (1..=n).any(|r| (1..=m).any(|s| *q == Q::frac(-(s as i64), r as i64))),
                };
                claims.check(format!("prop4/({n},{m})/k={}", v.k), "Newton sums and common zeros", || {
                    let ok = v.nontrivial == expected;
                    let w = (!ok).then(|| format!("nontrivial={} expected={}", v.nontrivial, expected));
                    (ok, w, Some(json!({"families": fams, "eliminant": v.eliminant})))
                });
            }
            SystemDesc { family: None, name: Some("Lambda0".into()), n: opts.n, m: opts.m, model: None, k: k_label(opts)? }
        }
        Suite::Macdonald => {
            let (n, m) = sizes(opts);
            let total = (n + m).max(3);
            for a in 0..=total {
                for b in 0..=(total - a) {
                    if a + b == 0 {
                        continue;
                    }
                    claims.check(format!("duality/({a},{b})"), "duality under q <-> t^-1 swap", || {
                        (macdiff::duality_check(a, b), None, None)
                    });
                }
            }
            for c in 1..=3 {
                claims.check(format!("m0-reduction/n{c}"), "reduces to the Macdonald operator", || {
                    (macdiff::m0_reduction_check(c), None, None)
                });
            }
            for &(a, b) in &[(1usize, 0usize), (1, 1), (2, 1)] {
                let r = macdiff::rootsystem_form_check(a, b)?;
                claims.check(format!("root-form/({a},{b})"), "root system form of the operator", || (r, None, None));
            }
            let lim = macdiff::differential_limit(n, m);
            claims.report(
                format!("differential-limit/({n},{m})"),
                "q -> 1 limit (diagnostic)",
                Some(format!("matches={}", lim.matches)),
                serde_json::to_value(&lim).expect("serializable"),
            );
            if let Some(c) = macdiff::polynomial_p1_coefficient(n, m) {
                claims.report(
                    format!("polynomial-image/({n},{m})"),
                    "action on p1 (exploratory)",
                    Some(c.render()),
                    json!({"p1_coefficient": c.render()}),
                );
            }
            block_desc(&format!("D({n},{m})"), n, m, opts)?
        }
    };
    Ok(finish(suite, desc, claims, tables))
}

fn need<T: Clone>(v: &Option<T>, flag: &str) -> Result<T, CliError> {
    v.clone().ok_or_else(|| CliError::Usage(format!("missing {flag}")))
}

/// Computes one object and returns its canonical rendering.
pub fn compute(object: Object, opts: &Opts) -> Result<String, CliError> {
    Ok(match object {
        Object::RootSystem => {
            let g = system(opts)?;
            serde_json::to_string_pretty(&g.to_json()).expect("serializable")
        }
        Object::Schrodinger => diffop::build_schrodinger(&system(opts)?, one_model(opts)?).render(),
        Object::Radial => diffop::build_radial(&system(opts)?, one_model(opts)?).render(),
        Object::Integral => {
            let fam = family(opts)?;
            if !fam.is_classical() {
                return Err(CliError::Unsupported(CONJECTURAL.into()));
            }
            let g = system(opts)?;
            let f = IntegralFamily::new(&g, one_model(opts)?)?;
            f.integral(need(&opts.p, "--p")?)?.render()
        }
        Object::HcImage => {
            let g = system(opts)?;
            let mut f = HcFamily::new(&g)?;
            hc::render(&f.hc_image(need(&opts.p, "--p")?))
        }
        Object::Bernoulli => {
            let g = system(opts)?;
            let r = opts.r.map(|r| r as usize).or(opts.p).ok_or_else(|| CliError::Usage("missing --r".into()))?;
            hc::render(&hc::bernoulli_generator(&g, r)?)
        }
        Object::Newton => {
            let (n, m) = sizes(opts);
            let r = opts.r.ok_or_else(|| CliError::Usage("missing --r".into()))?;
            match pinned_k(opts)? {
                Some(k) => lambda::newton_deformed_at(n, m, r, &Scalar::from_q(k)).render(),
                None => lambda::newton_deformed(n, m, r).render(),
            }
        }
        Object::Jack => {
            let lam = Partition::parse(&need(&opts.lambda, "--lambda")?)?;
            let theta = match pinned_k(opts)? {
                Some(k) => Scalar::from_q(-k),
                None => Scalar::param("theta"),
            };
            lambda::jack_polynomial(&lam, &theta, lam.weight() as usize)?.render()
        }
        Object::SuperJack => {
            let (n, m) = sizes(opts);
            let lam = Partition::parse(&need(&opts.lambda, "--lambda")?)?;
            let sj = lambda::super_jack(&lam, n, m)?;
            match pinned_k(opts)? {
                Some(k) => {
                    let b = [(Var::param("k"), Scalar::from_q(k))];
                    let terms = sj
                        .poly
                        .terms()
                        .iter()
                        .map(|(mo, c)| c.substitute(&b).map(|c| (mo.clone(), c)))
                        .collect::<Result<Vec<_>, _>>()
                        .map_err(|e| CliError::Usage(e.to_string()))?;
                    crate::exact::SPoly::from_terms(terms).render()
                }
                None => sj.poly.render(),
            }
        }
        Object::Poincare => {
            let (n, m) = sizes(opts);
            let s = lambda::poincare_series(n, m, opts.big_n.unwrap_or(10) as usize);
            s.closed_form.iter().enumerate().map(|(d, c)| format!("{d}: {c}")).collect::<Vec<_>>().join("\n")
        }
        Object::DefMr => {
            let (n, m) = sizes(opts);
            macdiff::build_def_mr(n, m).render()
        }
    })
}
