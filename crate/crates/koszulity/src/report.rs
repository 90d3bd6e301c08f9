//! Deterministic report rendering: JSON with a fixed schema, or plain text
//! with one line per check.

use crate::error::Result;
use crate::grading::Window;
use crate::pipeline::{PipelineResult, Verdict};
use serde_json::{json, Value};
use std::path::Path;

pub const SCHEMA_VERSION: u32 = 1;

/// Builds the JSON report.  Timing is deliberately omitted here — two runs of
/// the same scenario must produce byte-identical JSON regardless of machine
/// load or thread count; the text renderer is where per-check wall clock goes.
pub fn build_json(res: &PipelineResult, window: &Window) -> Value {
    let checks: Vec<Value> = res
        .checks
        .iter()
        .map(|c| {
            let mut obj = json!({
                "name": c.name,
                "verdict": c.verdict.as_str(),
                "detail": c.detail,
            });
            if let Some(w) = &c.witness {
                obj["witness"] = w.clone();
            }
            obj
        })
        .collect();
    let count = |v: Verdict| res.checks.iter().filter(|c| c.verdict == v).count();
    json!({
        "schema_version": SCHEMA_VERSION,
        "engine_version": env!("CARGO_PKG_VERSION"),
        "scenario_id": res.scenario_id,
        "field": res.field,
        "window": {
            "h": [window.h_min, window.h_max],
            "w": [window.w_min, window.w_max],
            "d": [window.d_min, window.d_max],
        },
        "checks": checks,
        "tables": res.tables,
        "summary": {
            "pass": count(Verdict::Pass),
            "fail": count(Verdict::Fail),
            "inconclusive": count(Verdict::Inconclusive),
            "skipped": count(Verdict::Skipped),
            "exit_code": res.exit_code(),
        },
    })
}

pub fn render_text(res: &PipelineResult) -> String {
    let mut out = String::new();
    out.push_str(&format!(
        "scenario {} over {}\n",
        res.scenario_id, res.field
    ));
    for c in &res.checks {
        out.push_str(&format!(
            "{:<4} {:<12} {:>6}ms  {}\n",
            c.name,
            c.verdict.as_str(),
            c.runtime_ms,
            c.detail
        ));
    }
    let code = res.exit_code();
    out.push_str(&format!(
        "result: {} (exit {code})\n",
        match code {
            0 => "all checks pass",
            1 => "FAILURES",
            _ => "inconclusive",
        }
    ));
    out
}

pub fn write_json(res: &PipelineResult, window: &Window, path: &Path) -> Result<()> {
    let v = build_json(res, window);
    std::fs::write(path, serde_json::to_string_pretty(&v)? + "\n")?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pipeline::CheckOutcome;

    fn sample() -> PipelineResult {
        PipelineResult {
            scenario_id: "sample".into(),
            field: "rational".into(),
            checks: vec![
                CheckOutcome {
                    name: "C1",
                    verdict: Verdict::Pass,
                    detail: "ok".into(),
                    witness: None,
                    runtime_ms: 3,
                },
                CheckOutcome {
                    name: "C2",
                    verdict: Verdict::Skipped,
                    detail: "not selected".into(),
                    witness: None,
                    runtime_ms: 0,
                },
            ],
            tables: Default::default(),
        }
    }

    #[test]
    fn json_schema_fields_present() {
        let win = Window::new((-1, 1), (-1, 1), (0, 1)).unwrap();
        let v = build_json(&sample(), &win);
        assert_eq!(v["schema_version"], 1);
        assert_eq!(v["scenario_id"], "sample");
        assert_eq!(v["checks"][0]["name"], "C1");
        assert_eq!(v["checks"][0]["verdict"], "pass");
        assert!(v["checks"][0].get("runtime_ms").is_none());
        assert_eq!(v["summary"]["pass"], 1);
        assert_eq!(v["summary"]["skipped"], 1);
        assert_eq!(v["summary"]["exit_code"], 0);
    }

    #[test]
    fn text_has_one_line_per_check() {
        let txt = render_text(&sample());
        assert_eq!(txt.lines().count(), 4); // header + 2 checks + result
        assert!(txt.contains("C1"));
        assert!(txt.contains("skipped"));
        assert!(txt.lines().last().unwrap().contains("exit 0"));
    }
}
