//! Report documents shared by the text and JSON renderers.
//!
//! Both renderers read the same structs, so the two output modes cannot
//! disagree. Numbers print with the shortest representation that round-trips.

use std::fmt::Write as _;

use serde::Serialize;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NamedValues {
    pub label: String,
    pub values: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InputEvent {
    pub label: String,
    pub name: String,
    pub values: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ClassifyReport {
    pub command: &'static str,
    pub verdict: String,
    pub container: Option<String>,
    pub boolean_container: Option<String>,
    pub states: Vec<String>,
    pub events: Vec<InputEvent>,
    pub reasons: Vec<String>,
    pub witnesses: Vec<NamedValues>,
    pub exit_code: i32,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RelationRow {
    pub witness: String,
    pub f: String,
    pub g: String,
    pub holds: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OracleSummary {
    pub boolean: Option<bool>,
    pub nodes: Option<u64>,
    pub agrees: Option<bool>,
    pub note: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BooleanReport {
    pub command: &'static str,
    pub verdict: String,
    pub states: Vec<String>,
    pub logic_size: usize,
    pub family: Vec<InputEvent>,
    pub missing_minimum: Option<String>,
    pub missing_event: Option<Vec<f64>>,
    pub witnesses: Vec<NamedValues>,
    pub relations: Vec<RelationRow>,
    pub oracle: OracleSummary,
    pub exit_code: i32,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InequalityRow {
    pub kind: &'static str,
    pub inequality: String,
    /// Coefficients in bitmask order of the subsets.
    pub coefficients: Vec<f64>,
    pub min_value: f64,
    pub max_value: f64,
    pub violated: bool,
    pub violating_state: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BellReport {
    pub command: &'static str,
    pub n: usize,
    pub mode: &'static str,
    pub states: Vec<String>,
    pub subsets: Vec<String>,
    pub rows: Vec<InequalityRow>,
    pub violations: usize,
    /// Set when valuation rows were not all listed: how many were checked.
    pub valuations_checked: Option<u64>,
    pub verdict: String,
    pub note: String,
    pub exit_code: i32,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(untagged)]
pub enum Report {
    Classify(ClassifyReport),
    Boolean(BooleanReport),
    Bell(BellReport),
}

impl Report {
    pub fn exit_code(&self) -> i32 {
        match self {
            Report::Classify(r) => r.exit_code,
            Report::Boolean(r) => r.exit_code,
            Report::Bell(r) => r.exit_code,
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("reports serialize");
        s.push('\n');
        s
    }

    pub fn to_text(&self) -> String {
        match self {
            Report::Classify(r) => classify_text(r),
            Report::Boolean(r) => boolean_text(r),
            Report::Bell(r) => bell_text(r),
        }
    }
}

/// Rounds to 12 decimals so that float noise such as `0.30000000000000004`
/// does not leak into reports. Presentation only.
pub fn tidy(v: f64) -> f64 {
    let r = (v * 1e12).round() / 1e12;
    if r == 0.0 {
        0.0
    } else {
        r
    }
}

pub fn tidy_all(values: &[f64]) -> Vec<f64> {
    values.iter().copied().map(tidy).collect()
}

pub fn format_values(values: &[f64]) -> String {
    let parts: Vec<String> = values.iter().map(|v| v.to_string()).collect();
    format!("({})", parts.join(", "))
}

fn classify_text(r: &ClassifyReport) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "verdict: {}", r.verdict);
    if let Some(c) = &r.container {
        let _ = writeln!(s, "container: {c}");
    }
    if let Some(c) = &r.boolean_container {
        let _ = writeln!(s, "boolean container: {c}");
    }
    let _ = writeln!(s, "states: {}", r.states.join(", "));
    let _ = writeln!(s, "events:");
    for e in &r.events {
        let _ = writeln!(
            s,
            "  {} ({}) = {}",
            e.label,
            e.name,
            format_values(&e.values)
        );
    }
    let _ = writeln!(s, "reasons:");
    for reason in &r.reasons {
        let _ = writeln!(s, "  - {reason}");
    }
    if !r.witnesses.is_empty() {
        let _ = writeln!(s, "witnesses:");
        for w in &r.witnesses {
            let _ = writeln!(s, "  {} = {}", w.label, format_values(&w.values));
        }
    }
    s
}

fn boolean_text(r: &BooleanReport) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "verdict: {}", r.verdict);
    let _ = writeln!(s, "states: {}", r.states.join(", "));
    let _ = writeln!(s, "logic size: {}", r.logic_size);
    let _ = writeln!(s, "family:");
    for e in &r.family {
        let _ = writeln!(
            s,
            "  {} ({}) = {}",
            e.label,
            e.name,
            format_values(&e.values)
        );
    }
    if let Some(m) = &r.missing_minimum {
        let _ = writeln!(s, "missing minimum: {m}");
    }
    if let Some(v) = &r.missing_event {
        let _ = writeln!(s, "missing event: {}", format_values(v));
    }
    if !r.witnesses.is_empty() {
        let _ = writeln!(s, "witnesses:");
        for w in &r.witnesses {
            let _ = writeln!(s, "  {} = {}", w.label, format_values(&w.values));
        }
    }
    if !r.relations.is_empty() {
        let _ = writeln!(s, "relations:");
        for rel in &r.relations {
            let mark = if rel.holds { "ok" } else { "FAILS" };
            let _ = writeln!(
                s,
                "  [{mark}] {} C({}) {}",
                grouped(&rel.f),
                rel.witness,
                grouped(&rel.g)
            );
        }
    }
    let o = &r.oracle;
    match (o.boolean, o.agrees) {
        (Some(b), Some(a)) => {
            let _ = writeln!(
                s,
                "oracle: {} after {} nodes ({})",
                if b { "BOOLEAN" } else { "NOT_BOOLEAN" },
                o.nodes.unwrap_or(0),
                if a { "agrees" } else { "DISAGREES" }
            );
        }
        _ => {
            let _ = writeln!(s, "oracle: {}", o.note.as_deref().unwrap_or("not run"));
        }
    }
    s
}

fn grouped(term: &str) -> String {
    if term.contains(' ') {
        format!("({term})")
    } else {
        term.to_string()
    }
}

fn bell_text(r: &BellReport) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "n: {}", r.n);
    let _ = writeln!(s, "mode: {}", r.mode);
    let _ = writeln!(s, "states: {}", r.states.join(", "));
    let _ = writeln!(s, "inequalities: {}", r.rows.len());
    for row in &r.rows {
        let mark = if row.violated { "[FAIL]" } else { "[ok]" };
        let _ = write!(
            s,
            "  {mark:<6} {:<9} {}  min={} max={}",
            row.kind, row.inequality, row.min_value, row.max_value
        );
        if let Some(state) = &row.violating_state {
            let _ = write!(s, " violated at {state}");
        }
        s.push('\n');
    }
    if let Some(k) = r.valuations_checked {
        let _ = writeln!(s, "valuations checked: {k} (only violated ones listed)");
    }
    let _ = writeln!(s, "violations: {}", r.violations);
    let _ = writeln!(s, "verdict: {}", r.verdict);
    let _ = writeln!(s, "note: {}", r.note);
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn values_use_shortest_round_trip() {
        assert_eq!(
            format_values(&[0.1, 1.0, 0.0, 1.0 / 3.0]),
            "(0.1, 1, 0, 0.3333333333333333)"
        );
        assert_eq!(tidy(0.30000000000000004), 0.3);
        assert_eq!(tidy(-1e-17).to_string(), "0");
        assert_eq!(tidy(1.5), 1.5);
    }
}
