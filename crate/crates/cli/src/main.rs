//! `kcomm` command-line front end. Every subcommand reads JSON from `--input`
//! (or stdin), writes canonical JSON to `--output` (or stdout) and exits with
//! 0 on success, 1 when a property is falsified or a map is rejected, and 2 on
//! bad input.

use std::fs;
use std::io::{self, Read};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use kcomm_core::classify::{scalar_plus_nilpotent_kcomm, scalar_plus_nilpotent_spectral, scalar_witness_test};
use kcomm_core::json::*;
use kcomm_core::kcomm::fixtures::unit_identities;
use kcomm_core::preserver::all_pairs;
use kcomm_core::{
    decompose, generate_map, kcomm, probe_campaign, probe_set, rank_one_identity_solve, verify_preserving, Error,
    FieldKind, FieldTag, IdentityOutcome, Mat2, Method, SolveMode,
};

#[derive(Parser, Debug)]
#[command(name = "kcomm", version, about = "Exact k-commutator calculus on 2x2 matrices")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Scalar field: Q, Qi, R64 or C64. Overrides the field named in the input.
    #[arg(long, global = true)]
    field: Option<FieldKind>,

    /// Comparison tolerance for the float fields.
    #[arg(long, global = true)]
    tolerance: Option<f64>,

    #[arg(long, global = true)]
    k: Option<u32>,

    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    #[arg(long, global = true)]
    trials: Option<u32>,

    /// Input JSON file; stdin when absent.
    #[arg(long, global = true)]
    input: Option<PathBuf>,

    /// Output file; stdout when absent.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Classifier {
    /// Z is scalar iff [Z, P]_k = 0 for the idempotent witnesses
    #[value(name = "scalar", alias = "2.2")]
    Scalar,
    /// S = cI + N decided from the discriminant
    #[value(name = "spectral", alias = "2.3-spectral")]
    Spectral,
    /// S = cI + N decided by sampled k-commutators
    #[value(name = "kcomm", alias = "2.3-kcomm")]
    Kcomm,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Evaluate [A, B]_k. Input: {"a": matrix, "b": matrix}.
    Kcomm {
        #[arg(long, default_value = "auto")]
        method: Method,
    },
    /// Classify a matrix. Input: a matrix or {"matrix": matrix}.
    Classify {
        #[arg(long)]
        lemma: Classifier,
    },
    /// Solve a sandwich identity. Input: {"left": [[A, B], ...], "right": [[C, D], ...]}.
    Sandwich {
        #[arg(long, default_value = "auto")]
        mode: SolveMode,
    },
    /// Tabulate A -> lambda A + h(A) I. Input: {"lambda": s, "h": rule, "inputs"?: [matrix, ...]}.
    GenMap,
    /// Check [F(A), F(B)]_k = [A, B]_k over pairs. Input: a map table or {"table": t, "pairs": [[A, B], ...]}.
    VerifyMap,
    /// Recover (lambda, h) from a map table.
    DecomposeMap,
    /// Round-trip and perturbation campaign.
    Campaign,
    /// Emit the unit-matrix bracket identities as golden files.
    Fixtures,
}

/// Result of a command: the JSON document and whether the property held.
struct Outcome {
    doc: Value,
    holds: bool,
}

impl Outcome {
    fn ok(doc: Value) -> Self {
        Outcome { doc, holds: true }
    }

    fn verdict(doc: Value, holds: bool) -> Self {
        Outcome { doc, holds }
    }
}

enum Failure {
    /// Structural rejection with a JSON diagnostic (exit 1).
    Rejected(Error),
    /// Bad flags or input (exit 2).
    Input(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::NotTheoremForm { .. } | Error::LambdaNotRootOfUnity { .. } | Error::PreservationFailed(_) => {
                Failure::Rejected(e)
            }
            other => Failure::Input(other),
        }
    }
}

fn input_error(msg: impl Into<String>) -> Failure {
    Failure::Input(Error::Parse(msg.into()))
}

fn read_input(cli: &Cli) -> Result<Value, Failure> {
    let text = match &cli.input {
        Some(path) => fs::read_to_string(path).map_err(|e| input_error(format!("cannot read {}: {e}", path.display())))?,
        None => {
            let mut s = String::new();
            io::stdin()
                .read_to_string(&mut s)
                .map_err(|e| input_error(format!("cannot read stdin: {e}")))?;
            s
        }
    };
    Ok(parse(&text)?)
}

/// Field from `--field`, else the document's `field`, else Q; `--tolerance` applies to either.
fn field_for(cli: &Cli, doc: Option<&Value>) -> Result<FieldTag, Failure> {
    let kind = match (cli.field, doc.and_then(|d| d.get("field"))) {
        (Some(kind), _) => kind,
        (None, Some(f)) => field_from_json(f)?,
        (None, None) => FieldKind::RationalQ,
    };
    let mut field = FieldTag::new(kind);
    let doc_tol = doc.and_then(|d| d.get("tolerance")).and_then(Value::as_f64);
    if let Some(t) = cli.tolerance.or(doc_tol) {
        field = field.with_tolerance(t);
    }
    Ok(field)
}

fn k_for(cli: &Cli, doc: Option<&Value>) -> Result<u32, Failure> {
    if let Some(k) = cli.k {
        return Ok(k);
    }
    match doc.and_then(|d| d.get("k")) {
        Some(k) => k
            .as_u64()
            .and_then(|k| u32::try_from(k).ok())
            .ok_or_else(|| input_error("k must be a nonnegative integer")),
        None => Err(input_error("missing k: pass --k or put \"k\" in the input")),
    }
}

fn matrix(doc: &Value, key: &str, field: FieldTag) -> Result<Mat2, Failure> {
    let v = doc.get(key).ok_or_else(|| input_error(format!("input has no `{key}` matrix")))?;
    Ok(mat_from_json(v, Some(field))?.with_field(field)?)
}

/// Table documents are either the table itself or `{"table": ...}`.
fn table_doc(doc: &Value) -> &Value {
    doc.get("table").unwrap_or(doc)
}

fn run(cli: &Cli) -> Result<Outcome, Failure> {
    match &cli.command {
        Command::Kcomm { method } => {
            let doc = read_input(cli)?;
            let field = field_for(cli, Some(&doc))?;
            let k = k_for(cli, Some(&doc))?;
            let a = matrix(&doc, "a", field)?;
            let b = matrix(&doc, "b", field)?;
            let bracket = kcomm(&a, &b, k, *method)?;
            Ok(Outcome::ok(json!({
                "k": k,
                "a": mat_to_json(&a),
                "b": mat_to_json(&b),
                "bracket": mat_to_json(&bracket),
            })))
        }
        Command::Classify { lemma } => {
            let doc = read_input(cli)?;
            let field = field_for(cli, Some(&doc))?;
            let m = if doc.get("matrix").is_some() {
                matrix(&doc, "matrix", field)?
            } else {
                mat_from_json(&doc, Some(field))?.with_field(field)?
            };
            match lemma {
                Classifier::Scalar => {
                    let v = scalar_witness_test(&m, k_for(cli, Some(&doc))?)?;
                    Ok(Outcome::verdict(verdict_to_json(&v), v.holds))
                }
                Classifier::Spectral => {
                    let v = scalar_plus_nilpotent_spectral(&m);
                    Ok(Outcome::verdict(spectral_verdict_to_json(&v), v.verdict.holds))
                }
                Classifier::Kcomm => {
                    let trials = cli.trials.unwrap_or(kcomm_core::classify::DEFAULT_TRIALS);
                    let v = scalar_plus_nilpotent_kcomm(&m, k_for(cli, Some(&doc))?, trials, cli.seed)?;
                    Ok(Outcome::verdict(verdict_to_json(&v), v.holds))
                }
            }
        }
        Command::Sandwich { mode } => {
            let doc = read_input(cli)?;
            let field = field_for(cli, Some(&doc))?;
            let system = system_from_json(&doc, Some(field))?;
            let outcome = rank_one_identity_solve(&system, *mode)?;
            let holds = matches!(outcome, IdentityOutcome::Coefficients { .. });
            Ok(Outcome::verdict(identity_outcome_to_json(&outcome), holds))
        }
        Command::GenMap => {
            let doc = read_input(cli)?;
            let field = field_for(cli, Some(&doc))?;
            let k = k_for(cli, Some(&doc))?;
            let lambda = doc.get("lambda").ok_or_else(|| input_error("gen-map needs `lambda`"))?;
            let lambda = scalar_from_json(lambda, field.kind)?;
            let h = hspec_from_json(doc.get("h").unwrap_or(&json!("zero")), field, cli.seed)?;
            let inputs = match doc.get("inputs") {
                Some(Value::Array(ms)) => ms
                    .iter()
                    .map(|m| Ok(mat_from_json(m, Some(field))?.with_field(field)?))
                    .collect::<Result<Vec<_>, Failure>>()?,
                Some(_) => return Err(input_error("`inputs` must be an array of matrices")),
                None => probe_set(field),
            };
            let mut table = generate_map(field, &lambda, &h, &inputs, k).map_err(Failure::Input)?;
            if let Some(label) = doc.get("label").and_then(Value::as_str) {
                table.label = label.to_string();
            }
            Ok(Outcome::ok(table_to_json(&table)))
        }
        Command::VerifyMap => {
            let doc = read_input(cli)?;
            let field = field_for(cli, Some(table_doc(&doc)))?;
            let table = table_from_json(table_doc(&doc), Some(field), cli.k)?;
            let pairs = match doc.get("pairs") {
                Some(Value::Array(ps)) => ps
                    .iter()
                    .map(|p| match p.as_array().map(Vec::as_slice) {
                        Some([a, b]) => Ok((mat_from_json(a, Some(table.field))?, mat_from_json(b, Some(table.field))?)),
                        _ => Err(input_error("each pair is [A, B]")),
                    })
                    .collect::<Result<Vec<_>, Failure>>()?,
                Some(_) => return Err(input_error("`pairs` must be an array")),
                None => all_pairs(&table.inputs()),
            };
            let v = verify_preserving(&table, &pairs)?;
            Ok(Outcome::verdict(pair_verdict_to_json(&v), v.holds))
        }
        Command::DecomposeMap => {
            let doc = read_input(cli)?;
            let field = field_for(cli, Some(table_doc(&doc)))?;
            let table = table_from_json(table_doc(&doc), Some(field), cli.k)?;
            Ok(Outcome::ok(decomposition_to_json(&decompose(&table)?)))
        }
        Command::Campaign => {
            let field = field_for(cli, None)?;
            let k = cli.k.ok_or_else(|| input_error("campaign needs --k"))?;
            let report = probe_campaign(k, field, cli.trials.unwrap_or(100), cli.seed)?;
            Ok(Outcome::verdict(report_to_json(&report), report.is_clean()))
        }
        Command::Fixtures => {
            let field = field_for(cli, None)?;
            let k_max = cli.k.unwrap_or(10);
            let fixtures: Vec<Value> = unit_identities(field, k_max).iter().map(fixture_to_json).collect();
            Ok(Outcome::ok(json!({
                "field": field.kind.code(),
                "k_max": k_max,
                "fixtures": fixtures,
            })))
        }
    }
}

fn emit(doc: &Value, output: Option<&PathBuf>) -> io::Result<()> {
    let mut text = to_canonical_string(doc);
    text.push('\n');
    match output {
        Some(path) => fs::write(path, text),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn input_failure(e: &Error) -> ExitCode {
    println!("{}", to_canonical_string(&json!({"error": e.code(), "message": e.to_string()})));
    ExitCode::from(2)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            // --help / --version
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let msg = e.render().to_string();
            println!("{}", to_canonical_string(&json!({"error": "UsageError", "message": msg.trim()})));
            return ExitCode::from(2);
        }
    };
    let (doc, code) = match run(&cli) {
        Ok(out) => (out.doc, if out.holds { 0 } else { 1 }),
        Err(Failure::Rejected(e)) => (error_to_json(&e), 1),
        Err(Failure::Input(e)) => return input_failure(&e),
    };
    if let Err(e) = emit(&doc, cli.output.as_ref()) {
        return input_failure(&Error::Parse(format!("cannot write output: {e}")));
    }
    ExitCode::from(code)
}
