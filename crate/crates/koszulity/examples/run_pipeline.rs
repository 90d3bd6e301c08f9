//! Run the full check suite on an inline scenario and print the text
//! report — the same pipeline the `verify` binary drives from a scenario
//! file. Run with `cargo run --example run_pipeline`.

use koszulity::field::FieldKind;
use koszulity::grading::Window;
use koszulity::pipeline::run_scenario;
use koszulity::report::render_text;
use koszulity::scenario::{parse_poly, Scenario, ALL_CHECKS};

fn main() -> koszulity::Result<()> {
    let weights = vec![1, 1];
    let sources = vec!["x1".to_string(), "x2".to_string()];
    let sections = sources
        .iter()
        .map(|s| parse_poly(s, weights.len()))
        .collect::<koszulity::Result<Vec<_>>>()?;
    let sc = Scenario {
        id: "inline-ci".into(),
        description: "complete intersection of the two coordinate axes".into(),
        weights,
        section_sources: sources,
        sections,
        window: Window::new((-6, 4), (-8, 8), (0, 10))?,
        field: FieldKind::Rational,
        checks: ALL_CHECKS.iter().map(|s| s.to_string()).collect(),
        max_slice_dim: 20_000,
        localize_extra_depth: 3,
    };

    let res = run_scenario(&sc)?;
    print!("{}", render_text(&res));
    std::process::exit(res.exit_code());
}
