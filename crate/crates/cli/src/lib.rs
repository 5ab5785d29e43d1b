//! Front end for the `flarl` binary. [`run`] takes the argument list and
//! returns the exit code together with everything that would be printed, so
//! tests can drive the exact code path of the binary.

pub mod expr;

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use flarl::linalg::{self, projection};
use flarl::ordinal::{self, chain_lattice_check, ord_mat_op, ord_poly_add, ord_poly_meet_product};
use flarl::poly::{poly_gcd, root_multiplicity, taylor};
use flarl::rational::render;
use flarl::spectral::spectral_report;
use flarl::structure::{closure_check, family_intersection_report, pairwise_dependent, FamilyDoc};
use flarl::{
    AnyLabel, ExactLabel, FlarlError, LabelMatrix, LabelPoly, LatticeOp, LinearMap, OrdMatrix, OrdPoly, Rational,
    Resolution, ScalarDomain, Subspace, DEFAULT_TOL,
};
use serde_json::{json, Value};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_DOMAIN: i32 = 2;
pub const EXIT_PARSE: i32 = 3;

#[derive(Parser, Debug)]
#[command(name = "flarl", version, about = "Exact refined-label arithmetic")]
struct Cli {
    /// Machine-readable JSON output
    #[arg(long, global = true)]
    json: bool,
    /// Tolerance attached to approximate labels (default: FLARL_TOL or 1e-9)
    #[arg(long, global = true, value_name = "FLOAT")]
    tol: Option<f64>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Evaluate a label expression
    Eval {
        #[arg(long)]
        m: i64,
        #[arg(allow_hyphen_values = true)]
        expr: String,
    },
    /// Label matrix files
    #[command(subcommand)]
    Mat(MatCmd),
    /// Label polynomial files
    #[command(subcommand)]
    Poly(PolyCmd),
    /// Ordinary labels and their chain lattice
    #[command(subcommand)]
    Ord(OrdCmd),
    /// Structure checks on family files
    #[command(subcommand)]
    Check(CheckCmd),
}

#[derive(Subcommand, Debug)]
enum MatCmd {
    /// Characteristic polynomial, real characteristic values, minimal polynomial
    Charpoly { file: PathBuf },
    Rank { file: PathBuf },
    /// Basis of the null space, as columns
    Null { file: PathBuf },
    Det { file: PathBuf },
    /// Product of two or more matrices, left to right
    Mul {
        #[arg(num_args = 2.., required = true)]
        files: Vec<PathBuf>,
    },
    /// Projection onto the column span of RANGE along the column span of NULL
    Project { range: PathBuf, null: PathBuf },
    /// Whether the column span of W is invariant under T
    Invariant { t: PathBuf, w: PathBuf },
}

#[derive(Args, Debug)]
struct AtArg {
    /// Label to evaluate or expand at, e.g. L3
    #[arg(long, allow_hyphen_values = true)]
    at: String,
}

#[derive(Subcommand, Debug)]
enum PolyCmd {
    Divmod { f: PathBuf, d: PathBuf },
    Gcd {
        #[arg(required = true)]
        files: Vec<PathBuf>,
    },
    Deriv { file: PathBuf },
    Taylor {
        file: PathBuf,
        #[command(flatten)]
        at: AtArg,
    },
    Eval {
        file: PathBuf,
        #[command(flatten)]
        at: AtArg,
    },
    Multiplicity {
        file: PathBuf,
        #[command(flatten)]
        at: AtArg,
    },
}

#[derive(Subcommand, Debug)]
enum OrdCmd {
    Join { a: PathBuf, b: PathBuf },
    Meet { a: PathBuf, b: PathBuf },
    Polyadd { p: PathBuf, q: PathBuf },
    Polymeet { p: PathBuf, q: PathBuf },
    /// Generating-set sizes for n-component vectors
    BasisCount {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        m: i64,
    },
    /// Exhaustive chain-lattice axiom check
    LatticeCheck {
        #[arg(long)]
        m: i64,
    },
}

#[derive(Subcommand, Debug)]
enum CheckCmd {
    Closure {
        file: PathBuf,
        #[arg(long)]
        domain: String,
        #[arg(long, default_value_t = 16)]
        samples: usize,
    },
    Independent {
        file: PathBuf,
        #[arg(long)]
        domain: String,
    },
    /// Pairwise intersections of the parts and coverage of the ambient
    Family {
        file: PathBuf,
        #[arg(long)]
        domain: Option<String>,
    },
}

enum Failure {
    Usage(String),
    Lib(FlarlError),
}

impl From<FlarlError> for Failure {
    fn from(e: FlarlError) -> Self {
        Failure::Lib(e)
    }
}

type Res<T> = std::result::Result<T, Failure>;

/// Human text and the equivalent JSON document.
struct Output {
    text: String,
    json: Value,
}

impl Output {
    fn new(text: impl Into<String>, json: Value) -> Self {
        Output { text: text.into(), json }
    }
}

/// Runs one invocation. `args` excludes the program name; the tolerance
/// default comes from `FLARL_TOL`.
pub fn run<I, S>(args: I) -> Outcome
where
    I: IntoIterator<Item = S>,
    S: Into<String>,
{
    let env = std::env::var("FLARL_TOL").ok();
    run_with_env(args, env.as_deref())
}

pub fn run_with_env<I, S>(args: I, env_tol: Option<&str>) -> Outcome
where
    I: IntoIterator<Item = S>,
    S: Into<String>,
{
    let argv: Vec<String> = std::iter::once("flarl".to_string()).chain(args.into_iter().map(Into::into)).collect();
    let cli = match Cli::try_parse_from(&argv) {
        Ok(c) => c,
        Err(e) => {
            let text = e.render().to_string();
            return match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => {
                    Outcome { code: EXIT_OK, stdout: text, stderr: String::new() }
                }
                _ => Outcome { code: EXIT_USAGE, stdout: String::new(), stderr: text },
            };
        }
    };
    let json = cli.json;
    match execute(cli, env_tol) {
        Ok(out) => {
            let stdout = if json { format!("{}\n", out.json) } else { ensure_newline(out.text) };
            Outcome { code: EXIT_OK, stdout, stderr: String::new() }
        }
        Err(Failure::Usage(msg)) => Outcome { code: EXIT_USAGE, stdout: String::new(), stderr: format!("error: {msg}\n") },
        Err(Failure::Lib(e)) => {
            let code = if e.is_parse_error() { EXIT_PARSE } else { EXIT_DOMAIN };
            let stdout = if json {
                let mut doc = json!({ "error": e.name(), "message": e.to_string() });
                if let FlarlError::ParseError { pos, .. } = &e {
                    doc["position"] = json!(pos);
                }
                format!("{doc}\n")
            } else {
                String::new()
            };
            Outcome { code, stdout, stderr: format!("error: {}\n", e.name()) }
        }
    }
}

fn ensure_newline(mut s: String) -> String {
    if !s.ends_with('\n') {
        s.push('\n');
    }
    s
}

fn resolve_tol(flag: Option<f64>, env: Option<&str>) -> Res<f64> {
    let tol = match (flag, env) {
        (Some(t), _) => t,
        (None, Some(text)) => text
            .trim()
            .parse::<f64>()
            .map_err(|_| Failure::Usage(format!("FLARL_TOL must be a number, got `{text}`")))?,
        (None, None) => DEFAULT_TOL,
    };
    if !(tol.is_finite() && tol > 0.0) {
        return Err(Failure::Usage(format!("tolerance must be positive, got {tol}")));
    }
    Ok(tol)
}

fn read(path: &PathBuf) -> Res<String> {
    std::fs::read_to_string(path).map_err(|e| Failure::Usage(format!("cannot read {}: {e}", path.display())))
}

fn execute(cli: Cli, env_tol: Option<&str>) -> Res<Output> {
    let tol = resolve_tol(cli.tol, env_tol)?;
    match cli.cmd {
        Cmd::Eval { m, expr } => eval(m, &expr, tol),
        Cmd::Mat(c) => mat(c, tol),
        Cmd::Poly(c) => poly(c),
        Cmd::Ord(c) => ord(c),
        Cmd::Check(c) => check(c),
    }
}

fn label_json(l: &AnyLabel) -> Value {
    let mut doc = json!({ "label": l.to_string(), "real": l.render_real(), "exact": l.is_exact() });
    if let AnyLabel::Approx(a) = l {
        doc["tol"] = json!(a.tol());
    }
    doc
}

fn label_line(l: &AnyLabel) -> String {
    match l {
        AnyLabel::Exact(_) => format!("{l} real={}", l.render_real()),
        AnyLabel::Approx(a) => format!("{l} real={} tol={:e}", l.render_real(), a.tol()),
    }
}

fn exact_output(l: &ExactLabel) -> Output {
    let l = AnyLabel::Exact(l.clone());
    Output::new(label_line(&l), label_json(&l))
}

fn eval(m: i64, text: &str, tol: f64) -> Res<Output> {
    let res = Resolution::new(m)?;
    let e = expr::parse_expression(text, res)?;
    let value = match expr::evaluate(&e)?.into_label(res) {
        AnyLabel::Approx(a) => AnyLabel::Approx(a.with_tol(tol)),
        v => v,
    };
    let mut text = label_line(&value);
    let mut doc = label_json(&value);
    doc["m"] = json!(m);
    doc["expr"] = json!(e.to_string());
    if let AnyLabel::Approx(a) = &value {
        if let Some(near) = a.snap(1000) {
            text.push_str(&format!(" near={near}"));
            doc["near"] = json!(near.to_string());
        }
    }
    Ok(Output::new(text, doc))
}

fn matrix_json(a: &LabelMatrix) -> Value {
    let rows: Vec<Vec<String>> = (0..a.rows()).map(|i| (0..a.cols()).map(|j| a.get(i, j).to_string()).collect()).collect();
    let real: Vec<Vec<String>> =
        (0..a.rows()).map(|i| (0..a.cols()).map(|j| a.get(i, j).to_real().to_string()).collect()).collect();
    json!({ "m": a.resolution().m(), "rows": a.rows(), "cols": a.cols(), "entries": rows, "real": real })
}

fn real_rows(rows: usize, cols: usize, cell: impl Fn(usize, usize) -> String) -> String {
    let body: Vec<String> =
        (0..rows).map(|i| format!("[{}]", (0..cols).map(|j| cell(i, j)).collect::<Vec<_>>().join(", "))).collect();
    format!("real=[{}]", body.join(", "))
}

fn matrix_output(a: &LabelMatrix) -> Output {
    let text = format!("{}{}", a.to_file_string(), real_rows(a.rows(), a.cols(), |i, j| a.get(i, j).to_real().to_string()));
    Output::new(text, matrix_json(a))
}

fn load_matrix(path: &PathBuf) -> Res<LabelMatrix> {
    Ok(LabelMatrix::parse_file(&read(path)?)?)
}

fn mat(c: MatCmd, tol: f64) -> Res<Output> {
    Ok(match c {
        MatCmd::Charpoly { file } => {
            let report = spectral_report(&load_matrix(&file)?)?.with_tol(tol);
            Output::new(report.to_text(), report.to_json())
        }
        MatCmd::Rank { file } => {
            let a = load_matrix(&file)?;
            let r = linalg::rank(&a);
            let n = a.cols() - r;
            Output::new(format!("rank={r} nullity={n}"), json!({ "rank": r, "nullity": n }))
        }
        MatCmd::Null { file } => {
            let ns = linalg::null_space(&load_matrix(&file)?);
            let mut out = if ns.dim() > 0 { matrix_output(ns.basis()) } else { Output::new("", json!(null)) };
            out.text = format!("dim={}\n{}", ns.dim(), out.text);
            out.json = json!({ "dim": ns.dim(), "basis": out.json });
            out
        }
        MatCmd::Det { file } => exact_output(&load_matrix(&file)?.determinant()?),
        MatCmd::Mul { files } => {
            let mut acc = load_matrix(&files[0])?;
            for f in &files[1..] {
                acc = acc.mul(&load_matrix(f)?)?;
            }
            matrix_output(&acc)
        }
        MatCmd::Project { range, null } => {
            let r = Subspace::span(&load_matrix(&range)?);
            let n = Subspace::span(&load_matrix(&null)?);
            matrix_output(projection(&r, &n)?.matrix())
        }
        MatCmd::Invariant { t, w } => {
            let t = LinearMap::new(load_matrix(&t)?);
            let inv = t.is_invariant(&Subspace::span(&load_matrix(&w)?))?;
            Output::new(inv.to_string(), json!({ "invariant": inv }))
        }
    })
}

fn poly_json(p: &LabelPoly) -> Value {
    json!({ "m": p.resolution().m(), "poly": p.render(), "real": p.render_real() })
}

fn poly_line(p: &LabelPoly) -> String {
    format!("{} real={}", p.render(), p.render_real())
}

fn poly_output(p: &LabelPoly) -> Output {
    Output::new(poly_line(p), poly_json(p))
}

fn load_poly(path: &PathBuf) -> Res<LabelPoly> {
    Ok(LabelPoly::parse_file(&read(path)?)?)
}

fn at_label(p: &LabelPoly, at: &AtArg) -> Res<ExactLabel> {
    Ok(ExactLabel::parse(&at.at, p.resolution())?)
}

fn poly(c: PolyCmd) -> Res<Output> {
    Ok(match c {
        PolyCmd::Divmod { f, d } => {
            let (q, r) = load_poly(&f)?.divmod(&load_poly(&d)?)?;
            Output::new(
                format!("q: {}\nr: {}", poly_line(&q), poly_line(&r)),
                json!({ "quotient": poly_json(&q), "remainder": poly_json(&r) }),
            )
        }
        PolyCmd::Gcd { files } => {
            let ps = files.iter().map(load_poly).collect::<Res<Vec<_>>>()?;
            poly_output(&poly_gcd(&ps)?)
        }
        PolyCmd::Deriv { file } => poly_output(&load_poly(&file)?.derivative()),
        PolyCmd::Taylor { file, at } => {
            let f = load_poly(&file)?;
            let terms = taylor(&f, &at_label(&f, &at)?)?;
            let lines: Vec<String> =
                terms.iter().enumerate().map(|(k, t)| format!("t{k}: {t} real={}", t.to_real())).collect();
            let docs: Vec<Value> = terms.iter().map(|t| label_json(&AnyLabel::Exact(t.clone()))).collect();
            Output::new(lines.join("\n"), json!({ "at": at.at, "terms": docs }))
        }
        PolyCmd::Eval { file, at } => {
            let f = load_poly(&file)?;
            exact_output(&f.eval(&at_label(&f, &at)?)?)
        }
        PolyCmd::Multiplicity { file, at } => {
            let f = load_poly(&file)?;
            let k = root_multiplicity(&f, &at_label(&f, &at)?)?;
            Output::new(format!("multiplicity={k}"), json!({ "multiplicity": k }))
        }
    })
}

fn ord_real(i: u32, res: Resolution) -> String {
    render(&(Rational::from_integer(i.into()) / res.scale()))
}

fn ord_matrix_output(a: &OrdMatrix) -> Output {
    let res = a.resolution();
    let text = format!("{}{}", a.to_file_string(), real_rows(a.rows(), a.cols(), |i, j| ord_real(a.get(i, j).index(), res)));
    let rows: Vec<Vec<String>> = (0..a.rows()).map(|i| (0..a.cols()).map(|j| a.get(i, j).to_string()).collect()).collect();
    let real: Vec<Vec<String>> =
        (0..a.rows()).map(|i| (0..a.cols()).map(|j| ord_real(a.get(i, j).index(), res)).collect()).collect();
    Output::new(text, json!({ "m": res.m(), "rows": a.rows(), "cols": a.cols(), "entries": rows, "real": real }))
}

fn ord_poly_output(p: &OrdPoly) -> Output {
    let res = p.resolution();
    let real: Vec<String> = p.coeffs().iter().map(|c| ord_real(c.index(), res)).collect();
    let text = format!("{} real=[{}]", p.render(), real.join(", "));
    Output::new(text, json!({ "m": res.m(), "poly": p.render(), "real": real }))
}

fn ord(c: OrdCmd) -> Res<Output> {
    let ord_mat = |p: &PathBuf| -> Res<OrdMatrix> { Ok(OrdMatrix::parse_file(&read(p)?)?) };
    let ord_poly = |p: &PathBuf| -> Res<OrdPoly> { Ok(OrdPoly::parse_file(&read(p)?)?) };
    Ok(match c {
        OrdCmd::Join { a, b } => ord_matrix_output(&ord_mat_op(LatticeOp::Join, &ord_mat(&a)?, &ord_mat(&b)?)?),
        OrdCmd::Meet { a, b } => ord_matrix_output(&ord_mat_op(LatticeOp::Meet, &ord_mat(&a)?, &ord_mat(&b)?)?),
        OrdCmd::Polyadd { p, q } => ord_poly_output(&ord_poly_add(&ord_poly(&p)?, &ord_poly(&q)?)?),
        OrdCmd::Polymeet { p, q } => ord_poly_output(&ord_poly_meet_product(&ord_poly(&p)?, &ord_poly(&q)?)?),
        OrdCmd::BasisCount { n, m } => {
            let res = Resolution::new(m)?;
            let minimal = ordinal::minimal_generating_set(n, res).len();
            let paper = ordinal::paper_basis_count(n, res);
            Output::new(format!("minimal={minimal} paper={paper}"), json!({ "n": n, "m": m, "minimal": minimal, "paper": paper }))
        }
        OrdCmd::LatticeCheck { m } => {
            let ok = chain_lattice_check(Resolution::new(m)?);
            Output::new(ok.to_string(), json!({ "m": m, "chain_lattice": ok }))
        }
    })
}

fn load_domain(text: &str) -> Res<(ScalarDomain, Option<String>)> {
    let spec = ScalarDomain::parse(text)?;
    let note = spec.reals_as_rationals.then(|| "R is modelled by Q".to_string());
    Ok((spec.domain, note))
}

fn with_note(mut out: Output, note: Option<String>) -> Output {
    if let Some(n) = note {
        out.text = format!("note: {n}\n{}", out.text);
        out.json["note"] = json!(n);
    }
    out
}

fn check(c: CheckCmd) -> Res<Output> {
    Ok(match c {
        CheckCmd::Closure { file, domain, samples } => {
            let doc = FamilyDoc::parse(&read(&file)?)?;
            let (s, note) = load_domain(&domain)?;
            let report = closure_check(&doc.merged(), &s, samples);
            let counts = format!("scalars={} vectors={}", report.scalars_checked, report.vectors_checked);
            let out = match &report.violation {
                None => Output::new(
                    format!("closed {counts}"),
                    json!({ "closed": true, "scalars": report.scalars_checked, "vectors": report.vectors_checked }),
                ),
                Some(v) => Output::new(
                    format!("violation s={} v={} image={}", render(&v.scalar), v.vector.render(), v.image.render()),
                    json!({
                        "closed": false,
                        "scalar": render(&v.scalar),
                        "vector": v.vector.render(),
                        "image": v.image.render(),
                    }),
                ),
            };
            with_note(out, note)
        }
        CheckCmd::Independent { file, domain } => {
            let doc = FamilyDoc::parse(&read(&file)?)?;
            let (s, note) = load_domain(&domain)?;
            let members = doc.merged().elements;
            let mut found = None;
            'outer: for i in 0..members.len() {
                for j in i + 1..members.len() {
                    if let Some(w) = pairwise_dependent(&members[i], &members[j], &s) {
                        found = Some((i, j, w));
                        break 'outer;
                    }
                }
            }
            let out = match found {
                None => Output::new("independent", json!({ "independent": true, "members": members.len() })),
                Some((i, j, w)) => Output::new(
                    format!("dependent members={i},{j} s={}", render(&w)),
                    json!({ "independent": false, "pair": [i, j], "scalar": render(&w) }),
                ),
            };
            with_note(out, note)
        }
        CheckCmd::Family { file, domain } => {
            let doc = FamilyDoc::parse(&read(&file)?)?;
            let note = match domain {
                Some(d) => load_domain(&d)?.1,
                None => None,
            };
            let ambient = doc
                .ambient
                .as_ref()
                .ok_or_else(|| FlarlError::ParseError { pos: 0, msg: "family file needs an `ambient` section".into() })?;
            let report = family_intersection_report(&doc.parts, ambient)?;
            let mut lines: Vec<String> =
                report.pairs.iter().map(|(i, j, k)| format!("parts {i},{j}: {k}")).collect();
            lines.push(format!("covers: {}", report.covers));
            lines.push(format!("class: {}", report.class));
            let pairs: Vec<Value> =
                report.pairs.iter().map(|(i, j, k)| json!({ "parts": [i, j], "intersection": k.to_string() })).collect();
            let out = Output::new(
                lines.join("\n"),
                json!({ "pairs": pairs, "covers": report.covers, "class": report.class.to_string() }),
            );
            with_note(out, note)
        }
    })
}
