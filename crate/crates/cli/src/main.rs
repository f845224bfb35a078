use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use boxlogic::compat::single_box_logic;
use boxlogic::error::ErrorClass;
use boxlogic::formats;
use boxlogic::states::{enumerate_vertices, ns_polytope, state_from_pr, validate_pr_state, VertexClass};
use boxlogic::verify::{fixture_report, run_suite, LogicSummary, SuiteOptions};
use boxlogic::{BoxLogic, BoxWorldSpec, Limits, Side};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

#[derive(Parser)]
#[command(name = "boxlogic", version, about = "Build and verify logics of two-box scenarios")]
struct Cli {
    #[command(flatten)]
    run: RunConfig,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct RunConfig {
    /// Maximum number of sample points
    #[arg(long, global = true, default_value_t = Limits::default().gamma, value_parser = positive)]
    cap_gamma: usize,
    /// Maximum number of logic elements
    #[arg(long, global = true, default_value_t = Limits::default().closure, value_parser = positive)]
    cap_closure: usize,
    /// Maximum number of polytope variables
    #[arg(long, global = true, default_value_t = Limits::default().vars, value_parser = positive)]
    cap_vars: usize,
    /// Seed for sampled states
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Write artifacts into this directory instead of standard output
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

fn positive(s: &str) -> Result<usize, String> {
    match s.parse::<usize>() {
        Ok(0) => Err("must be positive".into()),
        Ok(n) => Ok(n),
        Err(e) => Err(e.to_string()),
    }
}

#[derive(Subcommand)]
enum Command {
    /// Build the logic of a scenario and summarize it
    Build { scenario: PathBuf },
    /// Run the full verification suite on a scenario
    Verify { scenario: PathBuf },
    /// Non-signalling polytope and probability tables
    #[command(subcommand)]
    States(StatesCommand),
    /// Export a built logic or its polytope
    Export { format: ExportFormat, scenario: PathBuf },
    /// Built-in example logics
    #[command(subcommand)]
    Fixtures(FixtureCommand),
}

#[derive(Subcommand)]
enum StatesCommand {
    /// Enumerate the vertices of the non-signalling polytope as CSV
    Vertices { scenario: PathBuf },
    /// Validate a probability table and its induced state
    Check {
        table: PathBuf,
        /// Scenario the table belongs to; inferred from the table if omitted
        #[arg(long)]
        scenario: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum FixtureCommand {
    /// Even-size subsets of a set of 2k points
    EvenSet {
        #[arg(long)]
        k: usize,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum ExportFormat {
    /// Elements, complements, atoms and covers
    Json,
    /// Hasse diagram and single-box block diagrams
    Dot,
    /// Polytope vertices and H-representation
    Csv,
}

enum Failure {
    Invalid(String),
    Cap(String),
    Violation(String),
}

impl From<boxlogic::Error> for Failure {
    fn from(e: boxlogic::Error) -> Self {
        match e.class() {
            ErrorClass::Invalid => Failure::Invalid(e.to_string()),
            ErrorClass::Cap => Failure::Cap(e.to_string()),
            ErrorClass::Violation => Failure::Violation(e.to_string()),
        }
    }
}

macro_rules! lib_err {
    ($($t:ty),*) => {$(
        impl From<$t> for Failure {
            fn from(e: $t) -> Self {
                boxlogic::Error::from(e).into()
            }
        }
    )*};
}
lib_err!(
    boxlogic::error::StateError,
    boxlogic::error::ScenarioError,
    boxlogic::error::LogicError
);

type Outcome = Result<ExitCode, Failure>;

impl RunConfig {
    fn limits(&self) -> Limits {
        Limits {
            gamma: self.cap_gamma,
            closure: self.cap_closure,
            vars: self.cap_vars,
            ..Limits::default()
        }
    }

    /// Common report header.
    fn header(&self, spec: Option<&BoxWorldSpec>) -> Value {
        let limits = self.limits();
        json!({
            "tool": { "name": "boxlogic", "version": env!("CARGO_PKG_VERSION") },
            "scenario": spec.map(|s| json!({
                "sha256": scenario_hash(s),
                "left": s.inputs(Side::Left),
                "right": s.inputs(Side::Right),
            })),
            "caps": { "gamma": limits.gamma, "closure": limits.closure, "vars": limits.vars },
            "seed": self.seed,
        })
    }

    /// Writes `name` into the output directory, or prints it.
    fn emit(&self, name: &str, body: &str) -> Result<(), Failure> {
        match &self.out {
            Some(dir) => {
                fs::create_dir_all(dir).map_err(|e| Failure::Invalid(format!("{}: {e}", dir.display())))?;
                let path = dir.join(name);
                fs::write(&path, body).map_err(|e| Failure::Invalid(format!("{}: {e}", path.display())))?;
                println!("wrote {}", path.display());
            }
            None => print!("{body}"),
        }
        Ok(())
    }
}

fn scenario_hash(spec: &BoxWorldSpec) -> String {
    hex::encode(Sha256::digest(spec.to_json().as_bytes()))
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Invalid(format!("{}: {e}", path.display())))
}

fn load_spec(path: &Path) -> Result<BoxWorldSpec, Failure> {
    Ok(BoxWorldSpec::from_json(&read(path)?)?)
}

fn report(header: Value, body: impl Serialize) -> String {
    let mut v = header;
    let body = serde_json::to_value(body).expect("plain data serializes");
    if let (Some(h), Value::Object(b)) = (v.as_object_mut(), body) {
        h.extend(b);
    }
    let mut s = serde_json::to_string_pretty(&v).expect("plain data serializes");
    s.push('\n');
    s
}

fn build(run: &RunConfig, path: &Path) -> Outcome {
    let spec = load_spec(path)?;
    let bl = BoxLogic::build(&spec, &run.limits())?;
    let summary = LogicSummary::of(bl.logic());
    run.emit(
        "build.json",
        &report(run.header(Some(&spec)), json!({ "logic": summary })),
    )?;
    if run.out.is_some() {
        run.emit("logic.json", &formats::logic_json(bl.logic()))?;
    }
    Ok(ExitCode::SUCCESS)
}

fn verify(run: &RunConfig, path: &Path) -> Outcome {
    let spec = load_spec(path)?;
    let opts = SuiteOptions {
        limits: run.limits(),
        seed: run.seed,
        ..SuiteOptions::default()
    };
    let suite = run_suite(&spec, &opts)?;
    let passed = suite.passed();
    run.emit(
        "verify.json",
        &report(run.header(Some(&spec)), json!({ "passed": passed, "report": suite })),
    )?;
    if passed {
        Ok(ExitCode::SUCCESS)
    } else {
        let failed: Vec<&str> = suite
            .checks
            .iter()
            .filter(|c| !c.passed)
            .map(|c| c.name.as_str())
            .collect();
        Err(Failure::Violation(format!("failed checks: {}", failed.join(", "))))
    }
}

fn vertices(run: &RunConfig, path: &Path) -> Outcome {
    let spec = load_spec(path)?;
    let h = ns_polytope(&spec, &run.limits())?;
    let v = enumerate_vertices(&h);
    run.emit("vertices.csv", &formats::vertices_csv(&spec, &v))?;
    if run.out.is_some() {
        let summary = json!({
            "polytope": {
                "variables": h.variables.len(),
                "vertices": v.vertices.len(),
                "deterministic": v.count(VertexClass::Deterministic),
                "nondeterministic": v.count(VertexClass::Nondeterministic),
                "affine_dimension": v.affine_dimension,
            }
        });
        run.emit("polytope.json", &report(run.header(Some(&spec)), summary))?;
    }
    Ok(ExitCode::SUCCESS)
}

fn check_table(run: &RunConfig, table: &Path, scenario: Option<&Path>) -> Outcome {
    let spec = scenario.map(load_spec).transpose()?;
    let p = formats::parse_pr_state(&read(table)?, spec.as_ref())?;
    let violations: Vec<Value> = validate_pr_state(&p)
        .iter()
        .map(|v| {
            json!({
                "kind": v.kind,
                "at": v.at,
                "residual": v.residual,
            })
        })
        .collect();
    let valid = violations.is_empty();
    let mut body = json!({ "valid": valid, "violations": violations });
    if valid {
        let bl = BoxLogic::build(p.spec(), &run.limits())?;
        let rho = state_from_pr(&bl, &p)?;
        body["state"] = json!({
            "elements": bl.logic().len(),
            "well_defined": true,
            "two_valued": rho.is_two_valued(),
        });
    }
    run.emit("check.json", &report(run.header(Some(p.spec())), body))?;
    if valid {
        Ok(ExitCode::SUCCESS)
    } else {
        Err(Failure::Invalid(format!("{} constraint violations", violations.len())))
    }
}

fn export(run: &RunConfig, format: ExportFormat, path: &Path) -> Outcome {
    let spec = load_spec(path)?;
    match format {
        ExportFormat::Json => {
            let bl = BoxLogic::build(&spec, &run.limits())?;
            run.emit("logic.json", &formats::logic_json(bl.logic()))?;
        }
        ExportFormat::Dot => {
            let bl = BoxLogic::build(&spec, &run.limits())?;
            run.emit("hasse.dot", &formats::logic_dot(bl.logic()))?;
            if run.out.is_some() {
                for side in [Side::Left, Side::Right] {
                    let single = single_box_logic(&spec, side, &run.limits())?;
                    run.emit(&format!("pasting-{side}.dot"), &formats::pasting_dot(&spec, &single))?;
                    run.emit(&format!("pasting-{side}.json"), &formats::pasting_json(&single))?;
                }
            }
        }
        ExportFormat::Csv => {
            let h = ns_polytope(&spec, &run.limits())?;
            run.emit("vertices.csv", &formats::vertices_csv(&spec, &enumerate_vertices(&h)))?;
            if run.out.is_some() {
                let text = serde_json::to_string_pretty(&h).expect("plain data serializes");
                run.emit("hrep.json", &text)?;
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn even_set(run: &RunConfig, k: usize) -> Outcome {
    let r = fixture_report(k)?;
    let passed = r.passed();
    run.emit(
        &format!("even-set-{k}.json"),
        &report(run.header(None), json!({ "passed": passed, "report": r })),
    )?;
    if passed {
        Ok(ExitCode::SUCCESS)
    } else {
        Err(Failure::Violation(format!(
            "even-set fixture k={k} does not match its classification"
        )))
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let run = &cli.run;
    let outcome = match &cli.command {
        Command::Build { scenario } => build(run, scenario),
        Command::Verify { scenario } => verify(run, scenario),
        Command::States(StatesCommand::Vertices { scenario }) => vertices(run, scenario),
        Command::States(StatesCommand::Check { table, scenario }) => check_table(run, table, scenario.as_deref()),
        Command::Export { format, scenario } => export(run, *format, scenario),
        Command::Fixtures(FixtureCommand::EvenSet { k }) => even_set(run, *k),
    };
    match outcome {
        Ok(code) => code,
        Err(Failure::Invalid(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
        Err(Failure::Cap(m)) => {
            eprintln!("error: resource cap exceeded: {m}");
            ExitCode::from(3)
        }
        Err(Failure::Violation(m)) => {
            eprintln!("error: verification failed: {m}");
            ExitCode::from(4)
        }
    }
}
