use std::process::ExitCode;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};
use hesslab::calculus::{hessian, poly_determinant, PolyMap, PolyMatrix};
use hesslab::fixtures::{verify_fixture, FixtureOptions, FixtureReport, FIXTURE_NAMES, QI_SEARCH_HEIGHT};
use hesslab::gradmap::{invert_antitriangular, keller_check, transformed_gradient};
use hesslab::quadform::{isotropy_search_with_budget, IsotropyResult, QuadraticForm, DEFAULT_HEIGHT, SEARCH_BUDGET};
use hesslab::triangulate::{
    classify, dillen_pipeline_with, PipelineOptions, PipelineOutcome, WitnessRecord, DEFAULT_BUDGET,
};
use hesslab::weights::{w_leading_part, WeightFn};
use hesslab::{parse_poly, Error, Field, Poly, Ring, Scalar};
use serde::Serialize;
use serde_json::{json, Value};

#[derive(Parser)]
#[command(name = "hesslab", version, about = "Exact Hessian computations over Q and Q(i)")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Hessian matrix of a polynomial.
    Hessian(Input),
    /// Hessian determinant.
    Det(Input),
    /// Leading part for a weight function (uniform weights by default).
    Leadpart {
        #[command(flatten)]
        input: Input,
        /// Comma-separated weights, one per variable.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        weights: Option<Vec<String>>,
    },
    /// Classification of a polynomial with zero Hessian determinant.
    Classify(Input),
    /// Linear transform making the Hessian zero below the anti-diagonal.
    Antitri {
        #[command(flatten)]
        input: Input,
        #[command(flatten)]
        search: SearchArgs,
    },
    /// Inverse of a map with anti-triangular Jacobian. Components are
    /// separated by `;`. With `--gradient` the input is a polynomial `f` and
    /// the inverted map is the gradient of `f(Tx)` for `T` from `antitri`.
    Invert {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        gradient: bool,
        #[command(flatten)]
        search: SearchArgs,
    },
    /// Isotropy of the quadratic part of a polynomial.
    Isotropy {
        #[command(flatten)]
        input: Input,
        #[arg(long, default_value_t = DEFAULT_HEIGHT)]
        height: u32,
    },
    /// Replays a named reference instance.
    Verify {
        /// One of gn-counterexample, dillen4, qi-form.
        name: Option<String>,
        #[arg(long, conflicts_with = "name")]
        all: bool,
        /// Dimension for gn-counterexample (default: 4 and 5).
        #[arg(long)]
        n: Option<usize>,
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: usize,
        #[arg(long, default_value_t = QI_SEARCH_HEIGHT)]
        height: u32,
        #[arg(long, value_enum, default_value_t = Out::Text)]
        out: Out,
    },
}

#[derive(Args)]
struct Input {
    /// Polynomial in x1, ..., xn.
    poly: Option<String>,
    /// Read the input from a file instead.
    #[arg(long, conflicts_with = "poly")]
    file: Option<std::path::PathBuf>,
    /// Number of variables; inferred from the largest index when omitted.
    #[arg(long)]
    n: Option<usize>,
    #[arg(long, value_enum, default_value_t = FieldArg::Q)]
    field: FieldArg,
    /// Comma-separated parameter names.
    #[arg(long, value_delimiter = ',')]
    params: Vec<String>,
    #[arg(long, value_enum, default_value_t = Out::Text)]
    out: Out,
}

#[derive(Args)]
struct SearchArgs {
    /// Weight-search budget.
    #[arg(long, default_value_t = DEFAULT_BUDGET)]
    budget: usize,
    /// Witness-search height for quadratic polynomials.
    #[arg(long, default_value_t = DEFAULT_HEIGHT)]
    height: u32,
}

impl SearchArgs {
    fn options(&self) -> PipelineOptions {
        PipelineOptions { budget: self.budget, height: self.height }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum FieldArg {
    #[value(name = "Q")]
    Q,
    #[value(name = "Qi")]
    Qi,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Out {
    Text,
    Json,
}

/// Failures that end the run with exit status 2.
enum Failure {
    Usage(String),
    Module(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Module(e)
    }
}

/// A finished run: the text and structured renderings, and whether the
/// outcome is a verified negative.
struct Report {
    text: String,
    json: Value,
    negative: bool,
}

impl Report {
    fn new(text: String, json: Value) -> Self {
        Report { text, json, negative: false }
    }
}

fn to_json<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("records serialize")
}

impl Input {
    fn text(&self) -> Result<String, Failure> {
        match (&self.poly, &self.file) {
            (Some(p), None) => Ok(p.clone()),
            (None, Some(path)) => std::fs::read_to_string(path)
                .map(|s| s.trim().to_string())
                .map_err(|e| Failure::Usage(format!("cannot read {}: {e}", path.display()))),
            _ => Err(Failure::Usage("expected a polynomial argument or --file".into())),
        }
    }

    fn ring(&self, text: &str) -> Arc<Ring> {
        let n = self.n.unwrap_or_else(|| largest_index(text).max(1));
        let field = match self.field {
            FieldArg::Q => Field::Rational,
            FieldArg::Qi => Field::Gaussian,
        };
        let params: Vec<&str> = self.params.iter().map(String::as_str).collect();
        Ring::with_params(n, &params, field)
    }

    fn poly(&self) -> Result<Poly, Failure> {
        let text = self.text()?;
        Ok(parse_poly(&text, &self.ring(&text))?)
    }

    fn map(&self) -> Result<PolyMap, Failure> {
        let text = self.text()?;
        let ring = self.ring(&text);
        let parts = text.split(';').map(|s| parse_poly(s.trim(), &ring)).collect::<Result<Vec<_>, _>>()?;
        Ok(PolyMap::new(parts))
    }
}

/// Largest `k` appearing as an identifier `xk`.
fn largest_index(text: &str) -> usize {
    let bytes = text.as_bytes();
    let mut best = 0;
    let mut i = 0;
    while i < bytes.len() {
        let starts_ident = i == 0 || !(bytes[i - 1].is_ascii_alphanumeric() || bytes[i - 1] == b'_');
        if bytes[i] == b'x' && starts_ident {
            let j = bytes[i + 1..].iter().take_while(|b| b.is_ascii_digit()).count();
            let end = i + 1 + j;
            let ends_ident = end == bytes.len() || !(bytes[end].is_ascii_alphanumeric() || bytes[end] == b'_');
            if j > 0 && ends_ident {
                best = best.max(text[i + 1..end].parse().unwrap_or(0));
            }
            i = end.max(i + 1);
        } else {
            i += 1;
        }
    }
    best
}

fn matrix_lines(m: &PolyMatrix) -> String {
    m.to_strings().iter().map(|row| format!("[{}]", row.join(", "))).collect::<Vec<_>>().join("\n")
}

fn run(cmd: &Command) -> Result<Report, Failure> {
    match cmd {
        Command::Hessian(input) => {
            let h = hessian(&input.poly()?);
            Ok(Report::new(matrix_lines(&h), json!({ "hessian": to_json(&h) })))
        }
        Command::Det(input) => {
            let d = poly_determinant(&hessian(&input.poly()?))?;
            Ok(Report::new(d.to_string(), json!({ "det": d.to_string() })))
        }
        Command::Leadpart { input, weights } => {
            let f = input.poly()?;
            let w = match weights {
                None => WeightFn::uniform(f.nvars()),
                Some(ws) => {
                    let vals = ws
                        .iter()
                        .map(|s| {
                            let v: Scalar = s.trim().parse()?;
                            if v.is_rational() {
                                Ok(v.re().clone())
                            } else {
                                Err(Error::InvalidArgument(format!("weight `{s}` is not rational")))
                            }
                        })
                        .collect::<Result<Vec<_>, Error>>()?;
                    WeightFn::new(vals)
                }
            };
            let lead = w_leading_part(&f, &w)?;
            let text = format!("w = {w}\nweight: {}\nleading part: {}", lead.value, lead.part);
            let rec = json!({ "w": to_json(&w), "weight": lead.value.to_string(), "leading": lead.part.to_string() });
            Ok(Report::new(text, rec))
        }
        Command::Classify(input) => {
            let c = classify(&input.poly()?)?;
            let rec = c.record();
            let mut text = format!("class: {}\n", c.tag.name());
            if !rec.forms.is_empty() {
                text.push_str(&format!("forms: {}\n", rec.forms.join(", ")));
            }
            if !rec.family.is_empty() {
                text.push_str(&format!("family: {}\n", rec.family.join(", ")));
            }
            text.push_str(&format!("reduced: {}\nT:\n{}", rec.reduced, c.transform.matrix().to_string().trim_end()));
            Ok(Report::new(text, to_json(&rec)))
        }
        Command::Antitri { input, search } => antitri(&input.poly()?, search.options()),
        Command::Invert { input, gradient, search } => {
            let map = if *gradient {
                let f = input.poly()?;
                match dillen_pipeline_with(&f, search.options())? {
                    PipelineOutcome::Witness(w) => transformed_gradient(&f, &w.transform)?,
                    PipelineOutcome::IsotropyObstruction(_) => {
                        return Err(Error::HypothesesUnmet("quadratic part is anisotropic".into()).into())
                    }
                }
            } else {
                input.map()?
            };
            let keller = keller_check(&map)?;
            let inv = invert_antitriangular(&map)?;
            let text = format!(
                "F = {map}\ndet JF = {}\nG = {}\nconstants: {}",
                keller.det,
                inv.g,
                inv.constants.iter().map(ToString::to_string).collect::<Vec<_>>().join(", ")
            );
            let rec = json!({ "F": to_json(&map), "keller": to_json(&keller), "G": to_json(&inv.g), "constants": to_json(&inv.constants) });
            Ok(Report::new(text, rec))
        }
        Command::Isotropy { input, height } => {
            let q = QuadraticForm::from_poly(&input.poly()?)?;
            let res = isotropy_search_with_budget(&q, *height, SEARCH_BUDGET);
            let (text, negative) = match &res {
                IsotropyResult::Witness { vector } => (format!("isotropic: ({})", join(vector)), false),
                IsotropyResult::Anisotropic { certificate } => {
                    let moduli: Vec<String> = certificate.steps.iter().map(|s| s.modulus.to_string()).collect();
                    (format!("anisotropic: certificate with moduli [{}]", moduli.join(", ")), true)
                }
                IsotropyResult::Unknown { height } => (format!("unknown: no witness of height <= {height}"), false),
            };
            Ok(Report { text, json: to_json(&res), negative })
        }
        Command::Verify { name, all, n, budget, height, .. } => {
            let opts = FixtureOptions { dims: n.iter().copied().collect(), budget: *budget, height: *height };
            let names: Vec<String> = match (name, all) {
                (_, true) => FIXTURE_NAMES.iter().map(|s| s.to_string()).collect(),
                (Some(name), false) => vec![name.clone()],
                (None, false) => return Err(Failure::Usage("expected a fixture name or --all".into())),
            };
            let reports = verify_all(&names, &opts)?;
            let negative = reports.iter().any(|r| !r.pass);
            let text = reports.iter().map(fixture_text).collect::<Vec<_>>().join("\n");
            let json = if *all { to_json(&reports) } else { to_json(&reports[0]) };
            Ok(Report { text, json, negative })
        }
    }
}

fn join(v: &[Scalar]) -> String {
    v.iter().map(ToString::to_string).collect::<Vec<_>>().join(", ")
}

fn antitri(f: &Poly, opts: PipelineOptions) -> Result<Report, Failure> {
    match dillen_pipeline_with(f, opts)? {
        PipelineOutcome::Witness(w) => {
            let h = w.transformed_hessian(f)?;
            Ok(witness_report(&w.record(), &h))
        }
        PipelineOutcome::IsotropyObstruction(cert) => {
            let moduli: Vec<String> = cert.steps.iter().map(|s| s.modulus.to_string()).collect();
            let text = format!("obstruction: quadratic part is anisotropic (moduli [{}])", moduli.join(", "));
            let json = to_json(&PipelineOutcome::IsotropyObstruction(cert));
            Ok(Report { text, json, negative: true })
        }
    }
}

fn witness_report(rec: &WitnessRecord, h: &PolyMatrix) -> Report {
    let mut text = format!("T:\n{}\n", rec.t.to_string().trim_end());
    match &rec.w {
        Some(w) => text.push_str(&format!("w = {w}\n")),
        None => text.push_str("w = none\n"),
    }
    text.push_str(&format!("case: {}\nHessian of f(Tx):\n{}", rec.case_tag, matrix_lines(h)));
    let mut json = to_json(rec);
    json["hessian"] = to_json(h);
    Report::new(text, json)
}

fn verify_all(names: &[String], opts: &FixtureOptions) -> Result<Vec<FixtureReport>, Failure> {
    if names.len() == 1 {
        return Ok(vec![verify_fixture(&names[0], opts)?]);
    }
    let results: Vec<_> = std::thread::scope(|s| {
        let handles: Vec<_> = names.iter().map(|name| s.spawn(move || verify_fixture(name, opts))).collect();
        handles.into_iter().map(|h| h.join().expect("fixture thread panicked")).collect()
    });
    Ok(results.into_iter().collect::<Result<Vec<_>, _>>()?)
}

fn fixture_text(r: &FixtureReport) -> String {
    let mut lines = vec![format!("{} {}", if r.pass { "PASS" } else { "FAIL" }, r.fixture)];
    for c in &r.checks {
        let mark = if c.pass { "ok" } else { "FAILED" };
        if c.detail.is_empty() {
            lines.push(format!("  {mark}: {}", c.name));
        } else {
            lines.push(format!("  {mark}: {} ({})", c.name, c.detail));
        }
    }
    lines.join("\n")
}

fn out_mode(cmd: &Command) -> Out {
    match cmd {
        Command::Hessian(i) | Command::Det(i) | Command::Classify(i) => i.out,
        Command::Leadpart { input, .. }
        | Command::Antitri { input, .. }
        | Command::Invert { input, .. }
        | Command::Isotropy { input, .. } => input.out,
        Command::Verify { out, .. } => *out,
    }
}

fn is_parse_error(e: &Error) -> bool {
    matches!(e, Error::Syntax { .. } | Error::UnknownVariable { .. } | Error::UnknownFixture(_))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli.command) {
        Ok(report) => {
            match out_mode(&cli.command) {
                Out::Text => println!("{}", report.text),
                Out::Json => println!("{}", serde_json::to_string_pretty(&report.json).expect("json")),
            }
            ExitCode::from(if report.negative { 1 } else { 0 })
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error[cli.usage]: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Module(e)) => {
            let kind = if is_parse_error(&e) { "parse" } else { "failed" };
            eprintln!("error[{}]: {kind}: {e}", e.code());
            ExitCode::from(2)
        }
    }
}
