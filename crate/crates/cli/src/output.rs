use std::fmt::Write as _;

use qbe_core::{AttackReport, Verdict};
use serde::Serialize;
use serde_json::Value;

use crate::commands::Outcome;

#[derive(Serialize)]
struct Document<'a> {
    tool: &'static str,
    version: &'static str,
    command: &'static str,
    config: &'a Value,
    verdict: Verdict,
    reports: &'a [AttackReport],
}

/// Pretty JSON with a trailing newline; identical outcomes give identical bytes.
pub fn to_json(outcome: &Outcome) -> String {
    let doc = Document {
        tool: "qbe",
        version: env!("CARGO_PKG_VERSION"),
        command: outcome.command,
        config: &outcome.config,
        verdict: outcome.verdict(),
        reports: &outcome.reports,
    };
    let mut s = serde_json::to_string_pretty(&doc).expect("report is plain data");
    s.push('\n');
    s
}

fn cell(v: Option<f64>) -> String {
    v.map_or_else(|| "-".to_owned(), |v| format!("{v:.12}"))
}

/// Family kind, scheme variant or adversary the report is about.
fn subject(r: &AttackReport) -> String {
    let d = &r.details;
    let found = [("family", "kind"), ("scheme", "variant"), ("f", "kind")]
        .iter()
        .find_map(|(k, field)| d.get(*k).and_then(|v| v.get(*field)))
        .or_else(|| d.get("adversary"));
    match found {
        Some(Value::String(s)) => s.clone(),
        _ => "-".to_owned(),
    }
}

pub fn to_table(outcome: &Outcome) -> String {
    let header = [
        "experiment",
        "subject",
        "n",
        "verdict",
        "trace_distance",
        "success",
        "bound",
    ];
    let rows: Vec<[String; 7]> = outcome
        .reports
        .iter()
        .map(|r| {
            [
                r.experiment.clone(),
                subject(r),
                r.n.to_string(),
                r.verdict.to_string(),
                cell(r.trace_distance),
                cell(r.success_probability),
                cell(r.claimed_bound),
            ]
        })
        .collect();
    let mut widths = header.map(str::len);
    for row in &rows {
        for (w, c) in widths.iter_mut().zip(row) {
            *w = (*w).max(c.len());
        }
    }
    let mut out = String::new();
    let mut line = |cells: &[&str]| {
        let joined: Vec<String> = cells
            .iter()
            .zip(widths)
            .map(|(c, w)| format!("{c:<w$}"))
            .collect();
        writeln!(out, "{}", joined.join("  ").trim_end()).expect("writing to a string");
    };
    line(&header);
    for row in &rows {
        line(&row.each_ref().map(String::as_str));
    }
    writeln!(out, "overall: {}", outcome.verdict()).expect("writing to a string");
    out
}
