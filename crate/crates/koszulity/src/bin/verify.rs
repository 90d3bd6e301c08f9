//! Run the verification suite against a scenario file.
//!
//! Exit codes: 0 all selected checks pass, 1 at least one check failed,
//! 2 no failures but at least one check was inconclusive, 3 input error.

use clap::Parser;
use koszulity::grading::Window;
use koszulity::pipeline::run_scenario;
use koszulity::report;
use koszulity::scenario::{parse_field, Scenario, ALL_CHECKS};
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser, Debug)]
#[command(
    name = "verify",
    about = "Exact verification of linear duality constructions on a windowed scenario",
    version
)]
struct Args {
    /// Scenario JSON file
    #[arg(long)]
    scenario: PathBuf,

    /// Override window axes, e.g. "h:-4..3,w:-6..6,d:0..8"
    #[arg(long)]
    window: Option<String>,

    /// Override coefficient field: "rational" or "fp:<prime>"
    #[arg(long)]
    field: Option<String>,

    /// Comma-separated subset of C1..C10 to run (overrides the scenario)
    #[arg(long)]
    checks: Option<String>,

    /// Worker threads for slice materialization (default: all cores)
    #[arg(long)]
    parallel: Option<usize>,

    /// Write the JSON report to this path
    #[arg(long)]
    report: Option<PathBuf>,

    /// Output format on stdout
    #[arg(long, default_value = "text", value_parser = ["text", "json"])]
    format: String,
}

fn load(args: &Args) -> koszulity::Result<Scenario> {
    let mut sc = Scenario::load(&args.scenario)?;
    if let Some(spec) = &args.window {
        sc.window = Window::parse_override(spec, sc.window)?;
    }
    if let Some(f) = &args.field {
        sc.field = parse_field(f)?;
    }
    if let Some(list) = &args.checks {
        let mut checks = Vec::new();
        for c in list.split(',') {
            let c = c.trim().to_ascii_uppercase();
            if c.is_empty() {
                continue;
            }
            if !ALL_CHECKS.contains(&c.as_str()) {
                return Err(koszulity::Error::Scenario(format!(
                    "unknown check {c:?}; expected C1..C10"
                )));
            }
            if !checks.contains(&c) {
                checks.push(c);
            }
        }
        if checks.is_empty() {
            return Err(koszulity::Error::Scenario("empty check list".into()));
        }
        sc.checks = checks;
    }
    Ok(sc)
}

fn main() -> ExitCode {
    let args = Args::parse();
    if let Some(n) = args.parallel {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("error: could not configure {n} worker threads: {e}");
            return ExitCode::from(3);
        }
    }
    let sc = match load(&args) {
        Ok(sc) => sc,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(3);
        }
    };
    let res = match run_scenario(&sc) {
        Ok(res) => res,
        Err(e) => {
            // run_scenario only errors on malformed inputs; per-check errors
            // are folded into verdicts
            eprintln!("error: {e}");
            return ExitCode::from(3);
        }
    };
    if let Some(path) = &args.report {
        if let Err(e) = report::write_json(&res, &sc.window, path) {
            eprintln!("error: could not write report: {e}");
            return ExitCode::from(3);
        }
    }
    match args.format.as_str() {
        "json" => println!(
            "{}",
            serde_json::to_string_pretty(&report::build_json(&res, &sc.window))
                .expect("report serialization")
        ),
        _ => print!("{}", report::render_text(&res)),
    }
    ExitCode::from(res.exit_code() as u8)
}
