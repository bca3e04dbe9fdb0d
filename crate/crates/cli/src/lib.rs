//! Command-line front end for natframe-core: presentations, certificates,
//! torus potentials, framing windows and the experiment ledger.

mod ledger;
mod report;
mod resolve;

use std::path::Path;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use natframe_core::framing::{
    convolve, full_table_in, knottedness, natural_framing, table_in, tighten, torus_window, FramingWindow,
    SourceError, WindowError, DEFAULT_RANGE,
};
use natframe_core::freeprod::{
    angle_report, c_potential, negative_conjugate_product, negative_conjugates, negative_decomposition,
    torus_certificate, torus_framing_function, torus_natural_framing, FreeProdParams,
};
use natframe_core::group::{
    check_certificate, free_reduce, search_certificate, Budget, CertificateFailure, CertificateFile,
    CertificateReport, DeletionCertificate, SearchBudget,
};
use natframe_core::notation::{
    knot_determinant, longitude_word, torus_presentation, Presentation, PresentationFile, TorusParams,
};
use serde_json::{json, Value};

pub use ledger::{read_ledger, LedgerError, LedgerRecord};
pub use report::{canonical, sha256_hex, RunReport};
use resolve::{presentation, read_file, usage, window_range, UsageError};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_UNKNOWN: i32 = 3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Text,
}

#[derive(Debug, Parser)]
#[command(name = "natframe", version, about = "Certified bounds on knot framing functions")]
struct Cli {
    /// Report format.
    #[arg(long, global = true, value_enum, default_value = "json")]
    format: Format,
    /// Word-problem states per triviality check.
    #[arg(long, global = true)]
    budget_states: Option<usize>,
    /// Longest intermediate word in a triviality check.
    #[arg(long, global = true)]
    budget_len: Option<usize>,
    /// Seed for randomized property suites.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Framing window range as LO,HI.
    #[arg(long, global = true, value_parser = window_range, allow_hyphen_values = true)]
    window: Option<(i64, i64)>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Build a presentation and print it with its longitude.
    Present {
        /// Presentation file, knot id, `torus:P,Q`, `two-bridge:P/Q`, `braid:<word>` or `unknot`.
        spec: Option<String>,
        #[arg(long, value_name = "P,Q")]
        torus: Option<String>,
        #[arg(long, value_name = "P/Q")]
        two_bridge: Option<String>,
        #[arg(long, value_name = "WORD")]
        braid: Option<String>,
        /// Framing of the longitude to print.
        #[arg(long, allow_hyphen_values = true)]
        k: Option<i64>,
        /// Write the presentation file here.
        #[arg(long)]
        out: Option<String>,
    },
    /// Verify a deletion certificate (JSON or underlined-letter text).
    Certify { presentation: String, certificate: String },
    /// Search for a deletion certificate for l_k.
    Search {
        presentation: String,
        #[arg(long, allow_hyphen_values = true)]
        k: i64,
        /// Largest deletion count tried; defaults to |k| + 4.
        #[arg(long)]
        max_m: Option<usize>,
        #[arg(long)]
        max_candidates: Option<usize>,
        /// Write the certificate file here.
        #[arg(long)]
        out: Option<String>,
    },
    /// Torus knot framing function, negative decomposition and potentials.
    Torus {
        #[arg(long)]
        p: i64,
        #[arg(long)]
        q: i64,
        #[arg(long, allow_hyphen_values = true)]
        k: Option<i64>,
    },
    /// Recompute the natural framing table, or one row of it.
    Table { knot: Option<String> },
    /// Natural framing and knottedness of a window file.
    Nu {
        #[arg(value_name = "WINDOW")]
        file: String,
    },
    /// Min-plus convolution of two windows (connected sum).
    Convolve {
        w1: String,
        w2: String,
        #[arg(long)]
        out: Option<String>,
    },
    /// Run an experiment spec, appending results to its ledger.
    Experiment {
        spec: String,
        /// Ledger path; defaults to SPEC.ledger.jsonl.
        #[arg(long)]
        ledger: Option<String>,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RunOutput {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

struct Ctx {
    budget: Budget,
    states_flag: Option<usize>,
    seed: u64,
    window: Option<(i64, i64)>,
}

impl Ctx {
    fn budget_value(&self) -> Value {
        json!({"states": self.budget.max_states, "len": self.budget.max_len, "seed": self.seed, "window": self.window})
    }

    fn range(&self) -> (i64, i64) {
        self.window.unwrap_or(DEFAULT_RANGE)
    }
}

enum Failure {
    Usage(UsageError),
    Other { code: i32, message: String },
}

impl From<UsageError> for Failure {
    fn from(e: UsageError) -> Failure {
        Failure::Usage(e)
    }
}

type Outcome = Result<(i32, Value), Failure>;

/// Hash of the arguments and the contents of every argument naming an
/// existing file, except output paths.
fn inputs_digest(argv: &[String]) -> String {
    let mut files = serde_json::Map::new();
    let mut skip = false;
    for a in argv {
        if skip {
            skip = false;
            continue;
        }
        if a == "--out" || a == "--ledger" {
            skip = true;
            continue;
        }
        if Path::new(a).is_file() {
            if let Ok(bytes) = std::fs::read(a) {
                files.insert(a.clone(), json!(sha256_hex(&bytes)));
            }
        }
    }
    sha256_hex(canonical(&json!({"argv": argv, "files": files})).as_bytes())
}

/// Runs one invocation. `argv` excludes the program name.
pub fn run(argv: &[String]) -> RunOutput {
    let started = Instant::now();
    let cli = match Cli::try_parse_from(std::iter::once("natframe".to_string()).chain(argv.iter().cloned())) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion | ErrorKind::DisplayHelpOnMissingArgumentOrSubcommand
                    if e.exit_code() == 0 =>
                {
                    RunOutput { code: EXIT_OK, stdout: e.to_string(), stderr: String::new() }
                }
                _ => RunOutput { code: EXIT_USAGE, stdout: String::new(), stderr: e.to_string() },
            };
        }
    };
    let mut budget = Budget::default();
    if let Some(s) = cli.budget_states {
        budget.max_states = s;
    }
    budget.max_len = cli.budget_len;
    let ctx = Ctx { budget, states_flag: cli.budget_states, seed: cli.seed, window: cli.window };
    let result = match &cli.command {
        Command::Present { spec, torus, two_bridge, braid, k, out } => {
            cmd_present(spec.as_deref(), torus.as_deref(), two_bridge.as_deref(), braid.as_deref(), *k, out.as_deref())
        }
        Command::Certify { presentation, certificate } => cmd_certify(&ctx, presentation, certificate),
        Command::Search { presentation, k, max_m, max_candidates, out } => {
            cmd_search(&ctx, presentation, *k, *max_m, *max_candidates, out.as_deref())
        }
        Command::Torus { p, q, k } => cmd_torus(&ctx, *p, *q, *k),
        Command::Table { knot } => cmd_table(&ctx, knot.as_deref()),
        Command::Nu { file } => cmd_nu(file),
        Command::Convolve { w1, w2, out } => cmd_convolve(w1, w2, out.as_deref()),
        Command::Experiment { spec, ledger } => cmd_experiment(&ctx, spec, ledger.as_deref()),
    };
    let (code, results) = match result {
        Ok(r) => r,
        Err(Failure::Usage(e)) => {
            return RunOutput { code: EXIT_USAGE, stdout: String::new(), stderr: format!("error: {e}\n") }
        }
        Err(Failure::Other { code, message }) => (code, json!({"error": message})),
    };
    let report = RunReport {
        command: argv.to_vec(),
        inputs_digest: inputs_digest(argv),
        results,
        budget: ctx.budget_value(),
        exit_code: code,
        timing_ms: started.elapsed().as_millis() as u64,
    };
    let stdout = match cli.format {
        Format::Json => report.to_json(),
        Format::Text => report.to_text(),
    };
    RunOutput { code, stdout, stderr: String::new() }
}

fn write_file(path: &str, text: &str) -> Result<(), Failure> {
    std::fs::write(path, text).map_err(|e| Failure::Other { code: EXIT_FAILED, message: format!("cannot write {path}: {e}") })
}

fn cmd_present(
    spec: Option<&str>,
    torus: Option<&str>,
    two_bridge: Option<&str>,
    braid: Option<&str>,
    k: Option<i64>,
    out: Option<&str>,
) -> Outcome {
    let given: Vec<String> = [
        spec.map(str::to_string),
        torus.map(|t| format!("torus:{t}")),
        two_bridge.map(|t| format!("two-bridge:{t}")),
        braid.map(|t| format!("braid:{t}")),
    ]
    .into_iter()
    .flatten()
    .collect();
    let [one] = given.as_slice() else {
        return Err(usage("present takes exactly one of SPEC, --torus, --two-bridge, --braid").into());
    };
    let pres = presentation(one)?;
    let longitude = match (pres.template(), k) {
        (Err(_), _) => Value::Null,
        (Ok(t), None) => json!({"k": t.fixture_k, "word": pres.render(&t.fixture)}),
        (Ok(_), Some(k)) => {
            let w = longitude_word(&pres, k).map_err(|e| usage(e.to_string()))?;
            json!({"k": k, "word": pres.render(&w)})
        }
    };
    let file = pres.to_json();
    if let Some(path) = out {
        write_file(path, &file)?;
    }
    Ok((
        EXIT_OK,
        json!({
            "kind": pres.kind.name(),
            "generators": pres.generators,
            "relators": pres.relators.iter().map(|r| pres.render(r)).collect::<Vec<_>>(),
            "padding": pres.padding,
            "longitude": longitude,
            "determinant": knot_determinant(&pres),
            "file": serde_json::to_value(PresentationFile::from_presentation(&pres)).expect("file serializes"),
        }),
    ))
}

fn parse_certificate(text: &str, pres: &Presentation) -> Result<DeletionCertificate, UsageError> {
    let n = pres.generator_count();
    if text.trim_start().starts_with('{') {
        DeletionCertificate::from_json(text, n).map_err(|e| usage(format!("certificate: {e}")))
    } else {
        DeletionCertificate::from_marked(text.trim(), n).map_err(|e| usage(format!("certificate: {e}")))
    }
}

fn report_value(r: &CertificateReport) -> Value {
    let failure = r.failure.as_ref().map(|f| json!({"category": f.category(), "message": f.to_string()}));
    json!({
        "ok": r.ok,
        "m": r.m,
        "k": r.k,
        "longitude": r.longitude,
        "failure": failure,
        "trace_steps": r.trace.as_ref().map(|t| t.steps.len()),
    })
}

fn report_code(r: &CertificateReport) -> i32 {
    match &r.failure {
        None => EXIT_OK,
        Some(CertificateFailure::Undecided(_)) => EXIT_UNKNOWN,
        Some(_) => EXIT_FAILED,
    }
}

fn cmd_certify(ctx: &Ctx, pres_spec: &str, cert_path: &str) -> Outcome {
    let pres = presentation(pres_spec)?;
    let cert = parse_certificate(&read_file(cert_path)?, &pres)?;
    let r = check_certificate(&cert, &pres, ctx.budget);
    let mut v = report_value(&r);
    v["marked"] = json!(cert.to_marked(pres.generator_count()));
    Ok((report_code(&r), v))
}

fn cmd_search(ctx: &Ctx, pres_spec: &str, k: i64, max_m: Option<usize>, max_candidates: Option<usize>, out: Option<&str>) -> Outcome {
    let pres = presentation(pres_spec)?;
    pres.template().map_err(|e| usage(e.to_string()))?;
    let max_m = max_m.unwrap_or(k.unsigned_abs() as usize + 4);
    let mut budget = SearchBudget::default();
    if let Some(s) = ctx.states_flag {
        budget.triviality.max_states = s;
    }
    budget.triviality.max_len = ctx.budget.max_len;
    if let Some(c) = max_candidates {
        budget.max_candidates = c;
    }
    let outcome = search_certificate(&pres, k, max_m, budget);
    let stats = serde_json::to_value(&outcome.stats).expect("stats serialize");
    let Some(cert) = outcome.certificate else {
        return Ok((
            EXIT_UNKNOWN,
            json!({"found": false, "k": k, "max_m": max_m, "undecided": outcome.stats.unknowns > 0 || outcome.stats.skipped_placements > 0, "stats": stats}),
        ));
    };
    let n = pres.generator_count();
    let check = check_certificate(&cert, &pres, ctx.budget);
    let file: CertificateFile = cert.to_file(n);
    if let Some(path) = out {
        write_file(path, &cert.to_json(n))?;
    }
    Ok((
        report_code(&check),
        json!({
            "found": true,
            "k": k,
            "m": cert.m(),
            "max_m": max_m,
            "certificate": file,
            "marked": cert.to_marked(n),
            "check": report_value(&check),
            "stats": stats,
        }),
    ))
}

fn cmd_torus(ctx: &Ctx, p: i64, q: i64, k: Option<i64>) -> Outcome {
    let params = TorusParams::new(p, q).map_err(|e| usage(format!("--p/--q: {e}")))?;
    let fp = FreeProdParams::new(params.p(), params.q()).map_err(|e| usage(e.to_string()))?;
    let pres = torus_presentation(params);
    let n = pres.generator_count();
    let m0 = params.genus_term();
    let mut code = EXIT_OK;

    let neg = negative_decomposition(params);
    let neg_check = check_certificate(&neg, &pres, ctx.budget);
    code = code.max(report_code(&neg_check));
    let product = negative_conjugate_product(params);
    let lk = longitude_word(&pres, -m0).expect("torus longitude");
    let product_matches = free_reduce(&product) == free_reduce(&lk);
    if !product_matches {
        code = EXIT_FAILED;
    }

    let ks: Vec<i64> = match k {
        Some(k) => vec![k],
        None => (0..4).map(|i| i * params.p() as i64).collect(),
    };
    let mut values = Vec::new();
    for &k in &ks {
        let cert = torus_certificate(params, k);
        let r = check_certificate(&cert, &pres, ctx.budget);
        code = code.max(report_code(&r));
        let w = longitude_word(&pres, k).expect("torus longitude");
        let a = angle_report(&w, fp).map_err(|e| Failure::Other { code: EXIT_FAILED, message: e.to_string() })?;
        values.push(json!({
            "k": k,
            "n": torus_framing_function(params, k),
            "certificate": {"m": r.m, "ok": r.ok, "marked": cert.to_marked(n)},
            "theta": a.form.render(),
            "angle": a.a,
            "internal_angle": a.iota,
            "excess": a.e,
            "exponent_sum": a.esum,
            "a_prime": a.a_prime.to_string(),
            "c": c_potential(&w, fp).ok(),
        }));
    }

    let mut results = json!({
        "p": p,
        "q": q,
        "genus_term": m0,
        "nu": torus_natural_framing(params),
        "negative_decomposition": {
            "m": neg.m(),
            "k": neg.k(),
            "marked": neg.to_marked(n),
            "check": report_value(&neg_check),
            "conjugates": negative_conjugates(params)
                .into_iter()
                .map(|(c, i)| json!({"power": c, "generator": i}))
                .collect::<Vec<_>>(),
            "product": pres.render(&product),
            "product_is_longitude": product_matches,
        },
        "values": values,
    });
    if let Some((lo, hi)) = ctx.window {
        let w = torus_window(params, lo, hi).map_err(source_failure)?;
        let nu = natural_framing(&w).map_err(window_failure)?;
        results["window"] = serde_json::from_str(&w.to_json()).expect("window json");
        results["window_nu"] = json!(nu.render());
    }
    Ok((code, results))
}

fn source_failure(e: SourceError) -> Failure {
    Failure::Other { code: EXIT_FAILED, message: e.to_string() }
}

fn window_failure(e: WindowError) -> Failure {
    Failure::Other { code: EXIT_FAILED, message: e.to_string() }
}

fn cmd_table(ctx: &Ctx, knot: Option<&str>) -> Outcome {
    let (lo, hi) = ctx.range();
    let rows = match knot {
        Some(id) => vec![table_in(id, lo, hi).map_err(|e| match e {
            SourceError::UnknownKnot(_) => Failure::Usage(usage(e.to_string())),
            other => source_failure(other),
        })?],
        None => full_table_in(lo, hi).map_err(source_failure)?,
    };
    let code = if rows.iter().any(|r| r.agreement == natframe_core::framing::Agreement::Disagrees) {
        EXIT_FAILED
    } else {
        EXIT_OK
    };
    let rows: Vec<Value> = rows
        .iter()
        .map(|r| {
            let mut v = serde_json::to_value(r).expect("row serializes");
            v["computed"] = json!(r.natural_framing.render());
            v["compared"] = json!(r.oriented().render());
            v
        })
        .collect();
    let mut results = json!({"rows": rows});
    if let [row] = rows.as_slice() {
        results["natural_framing"] = row["computed"].clone();
    }
    Ok((code, results))
}

fn load_window(path: &str) -> Result<FramingWindow, Failure> {
    FramingWindow::from_json(&read_file(path)?).map_err(|e| Failure::Usage(usage(format!("{path}: {e}"))))
}

fn window_summary(w: &FramingWindow) -> Result<Value, Failure> {
    let t = tighten(w).map_err(window_failure)?;
    let nu = natural_framing(&t).map_err(window_failure)?;
    let knot = knottedness(&t).ok();
    Ok(json!({
        "k_range": [t.k_min(), t.k_max()],
        "natural_framing": nu.render(),
        "estimate": nu,
        "knottedness": knot.map(|(lo, hi)| json!([lo, hi])),
        "rule_violations": w.rule_violations().iter().map(|(k, r)| json!({"k": k, "rule": r})).collect::<Vec<_>>(),
    }))
}

fn cmd_nu(path: &str) -> Outcome {
    let w = load_window(path)?;
    Ok((EXIT_OK, window_summary(&w)?))
}

fn cmd_convolve(p1: &str, p2: &str, out: Option<&str>) -> Outcome {
    let w1 = load_window(p1)?;
    let w2 = load_window(p2)?;
    let w = convolve(&w1, &w2).map_err(window_failure)?;
    let text = w.to_json();
    if let Some(path) = out {
        write_file(path, &text)?;
    }
    let mut results = window_summary(&w)?;
    results["window"] = serde_json::from_str(&text).expect("window json");
    Ok((EXIT_OK, results))
}

fn cmd_experiment(ctx: &Ctx, spec_path: &str, ledger: Option<&str>) -> Outcome {
    let text = read_file(spec_path)?;
    let ledger_path = ledger.map(str::to_string).unwrap_or_else(|| format!("{spec_path}.ledger.jsonl"));
    match ledger::run_experiment(&text, &ledger_path, ctx.seed) {
        Ok(mut v) => {
            v["ledger"] = json!(ledger_path);
            Ok((EXIT_OK, v))
        }
        Err(ledger::ExperimentError::Usage(e)) => Err(e.into()),
        Err(ledger::ExperimentError::Corrupt(e)) => Err(Failure::Other {
            code: EXIT_FAILED,
            message: format!("corrupt ledger {ledger_path} line {}: {}", e.line, e.reason),
        }),
        Err(ledger::ExperimentError::Io(e)) => Err(Failure::Other { code: EXIT_FAILED, message: e }),
    }
}
