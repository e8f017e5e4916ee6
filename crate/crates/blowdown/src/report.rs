//! Rendering of computation results: human-readable text and a stable
//! JSON mirror.
//!
//! The JSON side is deterministic — object keys are emitted in sorted
//! order and arbitrary-precision integers that fit in an `i64` are plain
//! numbers, anything larger a decimal string — so outputs can be diffed
//! and pinned in tests.

use serde_json::{json, Value};

use crate::kirbytrace::ReplayOutcome;
use crate::lattice::ClassVector;
use crate::manifest::big_to_json;
use crate::rbd::LiftAssessment;
use crate::swchamber::SwReport;
use crate::verify::Section;

fn class_json(v: &ClassVector) -> Value {
    Value::Array(v.coords().iter().map(big_to_json).collect())
}

/// Text table for an SW report: one line per entry, then the search
/// diagnostics.
pub fn sw_report_text(report: &SwReport) -> String {
    let mut out = String::new();
    out.push_str(&format!(
        "manifold {}  chamber {}{}\n",
        report.manifold,
        report.chamber.format_he(),
        if report.derived { "  (derived)" } else { "" }
    ));
    if report.entries.is_empty() {
        out.push_str("no basic classes\n");
    }
    for entry in &report.entries {
        out.push_str(&format!(
            "class {}  d {}  value {}\n",
            entry.class.format_he(),
            entry.d,
            entry.value
        ));
    }
    out.push_str(&format!(
        "candidates examined {}  on-wall skipped {}\n",
        report.candidates_examined, report.on_wall_skipped
    ));
    out
}

/// JSON mirror of an SW report.
pub fn sw_report_json(report: &SwReport) -> Value {
    json!({
        "manifold": report.manifold,
        "chamber": class_json(&report.chamber),
        "orientation": class_json(&report.orientation),
        "entries": report
            .entries
            .iter()
            .map(|e| json!({
                "class": class_json(&e.class),
                "d": big_to_json(&e.d),
                "value": big_to_json(&e.value),
            }))
            .collect::<Vec<_>>(),
        "candidates_examined": report.candidates_examined,
        "on_wall_skipped": report.on_wall_skipped,
        "derived": report.derived,
    })
}

/// Text summary of a replayed handle script.
pub fn replay_text(outcome: &ReplayOutcome) -> String {
    let counts = outcome.ledger.counts();
    let mut out = String::new();
    out.push_str(&format!(
        "script {}: {} moves applied, {} expectations checked\n",
        outcome.name, outcome.moves_applied, outcome.expects_checked
    ));
    out.push_str(&format!(
        "handle counts [{}, {}, {}, {}, {}]  euler {}  ambient rank {}\n",
        counts[0],
        counts[1],
        counts[2],
        counts[3],
        counts[4],
        outcome.ledger.euler(),
        outcome.ledger.ambient_n() + 1
    ));
    for class in outcome.ledger.classes() {
        out.push_str(&format!("handle {}\n", class.format_he()));
    }
    out
}

/// JSON mirror of a replayed handle script.
pub fn replay_json(outcome: &ReplayOutcome) -> Value {
    json!({
        "script": outcome.name,
        "moves_applied": outcome.moves_applied,
        "expects_checked": outcome.expects_checked,
        "counts": outcome.ledger.counts().to_vec(),
        "euler": outcome.ledger.euler(),
        "ambient_rank": outcome.ledger.ambient_n() + 1,
        "handles": outcome
            .ledger
            .classes()
            .iter()
            .map(class_json)
            .collect::<Vec<_>>(),
    })
}

/// Text rendering of a descent assessment.
pub fn lift_text(assessment: &LiftAssessment) -> String {
    let mut out = String::new();
    out.push_str(&format!("liftable {}\n", assessment.liftable));
    let pairings: Vec<String> = assessment.pairings.iter().map(|p| p.to_string()).collect();
    out.push_str(&format!("pairings [{}]\n", pairings.join(", ")));
    out.push_str(&format!(
        "projection square {} (required {})\n",
        assessment.projection_square, assessment.required_square
    ));
    out.push_str(&format!("boundary class {}\n", assessment.boundary_class));
    match (&assessment.witness_m_mod_p, &assessment.witness_m_mod_p2) {
        (Some(mp), Some(mp2)) => {
            out.push_str(&format!("witness m {mp} (mod p), {mp2} (mod p^2)\n"));
        }
        _ => out.push_str("no admissible witness m\n"),
    }
    out
}

/// JSON mirror of a descent assessment.
pub fn lift_json(assessment: &LiftAssessment) -> Value {
    json!({
        "liftable": assessment.liftable,
        "pairings": assessment
            .pairings
            .iter()
            .map(big_to_json)
            .collect::<Vec<_>>(),
        "projection_square": assessment.projection_square.to_string(),
        "required_square": big_to_json(&assessment.required_square),
        "boundary_class": big_to_json(&assessment.boundary_class),
        "witness_m_mod_p": assessment
            .witness_m_mod_p
            .as_ref()
            .map(|m| big_to_json(m))
            .unwrap_or(Value::Null),
        "witness_m_mod_p2": assessment
            .witness_m_mod_p2
            .as_ref()
            .map(|m| big_to_json(m))
            .unwrap_or(Value::Null),
    })
}

/// Per-check pass/fail lines for verification sections, one section block
/// at a time, followed by a one-line summary.
pub fn sections_text(sections: &[Section]) -> String {
    let mut out = String::new();
    let mut checks = 0usize;
    let mut failed = 0usize;
    for section in sections {
        out.push_str(&format!(
            "section {}{}\n",
            section.name,
            if section.derived { " (derived)" } else { "" }
        ));
        for check in &section.checks {
            checks += 1;
            if check.passed {
                out.push_str(&format!("  pass {} ({})\n", check.name, check.detail));
            } else {
                failed += 1;
                out.push_str(&format!("  FAIL {}: {}\n", check.name, check.detail));
            }
        }
    }
    let sections_passed = sections.iter().filter(|s| s.passed()).count();
    out.push_str(&format!(
        "summary: {}/{} sections passed, {} checks, {} failed\n",
        sections_passed,
        sections.len(),
        checks,
        failed
    ));
    out
}

/// JSON mirror of verification sections.
pub fn sections_json(sections: &[Section]) -> Value {
    json!({
        "sections": sections
            .iter()
            .map(|s| json!({
                "name": s.name,
                "derived": s.derived,
                "passed": s.passed(),
                "checks": s
                    .checks
                    .iter()
                    .map(|c| json!({
                        "name": c.name,
                        "passed": c.passed,
                        "detail": c.detail,
                    }))
                    .collect::<Vec<_>>(),
            }))
            .collect::<Vec<_>>(),
        "passed": sections.iter().all(|s| s.passed()),
    })
}

/// True when every section passed.
pub fn all_passed(sections: &[Section]) -> bool {
    sections.iter().all(|s| s.passed())
}
