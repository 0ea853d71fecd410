//! Command-line front end.
//!
//! Exit codes: 0 when the data passes (embeddable, Boolean, no violation),
//! 1 for input or usage errors, 2 for a negative verdict, 3 for undecided.

use std::ffi::OsString;
use std::fs::File;
use std::io::{BufReader, Write};
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};

use crate::bell::{
    bell_like_pairs, bell_like_requirements, enumerate_01_valuations, evaluate_inequality,
    pair_inequality, sum_all_elementary, valuation_count, CorrelationTable, InequalityResult,
    SetFunction, SubsetIndex, ENUMERATION_CAP,
};
use crate::concrete_logic::{boolean_by_minima, boolean_oracle, ConcreteLogic};
use crate::embeddability::{classify_embedding, Verdict};
use crate::error::Error;
use crate::events::{Event, DEFAULT_EPS};
use crate::io::{read_correlation_csv, read_events_csv, read_logic_json};
use crate::report::{
    tidy, tidy_all, BellReport, BooleanReport, ClassifyReport, InequalityRow, InputEvent,
    NamedValues, OracleSummary, RelationRow, Report,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 1;
pub const EXIT_NEGATIVE: i32 = 2;
pub const EXIT_UNDECIDED: i32 = 3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Debug, Parser)]
#[command(
    name = "numevent",
    version,
    about = "Classicality checks for numerical events"
)]
struct Cli {
    /// Comparison tolerance.
    #[arg(long, global = true, env = "NUMEVENT_EPS")]
    eps: Option<f64>,
    #[arg(long, global = true, value_enum, default_value = "text")]
    format: Format,
    /// Node cap for the Boolean search oracle.
    #[arg(long, global = true, default_value_t = crate::concrete_logic::DEFAULT_ORACLE_BUDGET,
          value_parser = clap::value_parser!(u64).range(1..))]
    budget: u64,
    /// Check every 0/1 Bell valuation for the table's n.
    #[arg(long, global = true, conflicts_with = "pairs_only")]
    all_valuations: bool,
    /// Check only the pair inequalities characterising n from 2 to 4.
    #[arg(long, global = true)]
    pairs_only: bool,
    /// Allow valuation enumeration beyond n = 4.
    #[arg(long, global = true)]
    override_enumeration_cap: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Decide embeddability of an events CSV (`state,event,value`).
    Classify { input: PathBuf },
    /// Test a family inside a concrete logic given as JSON.
    Boolean { input: PathBuf },
    /// Evaluate Bell-type inequalities on a correlation CSV (`state,subset,value`).
    Bell { input: PathBuf },
    /// List all 0/1 Bell valuations for n.
    Enumerate { n: usize },
}

/// Settings shared by every subcommand.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RunConfig {
    pub eps: f64,
    pub format: Format,
    pub budget: u64,
    pub all_valuations: bool,
    pub pairs_only: bool,
    pub override_enumeration_cap: bool,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            eps: DEFAULT_EPS,
            format: Format::Text,
            budget: crate::concrete_logic::DEFAULT_ORACLE_BUDGET,
            all_valuations: false,
            pairs_only: false,
            override_enumeration_cap: false,
        }
    }
}

/// A failure that ends the run with exit code 1.
#[derive(Debug)]
pub struct Failure(pub String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure(e.to_string())
    }
}

pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = out.write_all(text.as_bytes());
                    EXIT_OK
                }
                _ => {
                    let _ = err.write_all(text.as_bytes());
                    EXIT_INPUT
                }
            };
        }
    };
    let config = RunConfig {
        eps: cli.eps.unwrap_or(DEFAULT_EPS),
        format: cli.format,
        budget: cli.budget,
        all_valuations: cli.all_valuations,
        pairs_only: cli.pairs_only,
        override_enumeration_cap: cli.override_enumeration_cap,
    };
    if !(config.eps.is_finite() && config.eps > 0.0) {
        let _ = writeln!(
            err,
            "error: --eps must be positive and finite, got {}",
            config.eps
        );
        return EXIT_INPUT;
    }

    let result = match &cli.command {
        Command::Classify { input } => cmd_classify(input, &config).map(Report::Classify),
        Command::Boolean { input } => cmd_boolean(input, &config).map(Report::Boolean),
        Command::Bell { input } => cmd_bell(input, &config).map(Report::Bell),
        Command::Enumerate { n } => {
            return match cmd_enumerate(*n, &config, out) {
                Ok(()) => EXIT_OK,
                Err(Failure(msg)) => {
                    let _ = writeln!(err, "error: {msg}");
                    EXIT_INPUT
                }
            };
        }
    };
    match result {
        Ok(report) => {
            let body = match config.format {
                Format::Text => report.to_text(),
                Format::Json => report.to_json(),
            };
            if out
                .write_all(body.as_bytes())
                .and_then(|()| out.flush())
                .is_err()
            {
                return EXIT_INPUT;
            }
            report.exit_code()
        }
        Err(Failure(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            EXIT_INPUT
        }
    }
}

fn open(path: &Path) -> Result<BufReader<File>, Failure> {
    File::open(path)
        .map(BufReader::new)
        .map_err(|e| Failure(format!("{}: {e}", path.display())))
}

fn ingest<T>(path: &Path, r: Result<T, crate::io::IngestError>) -> Result<T, Failure> {
    r.map_err(|e| Failure(format!("{}: {e}", path.display())))
}

fn label(k: usize) -> String {
    format!("p{}", k + 1)
}

fn named(label: impl Into<String>, e: &Event) -> NamedValues {
    NamedValues {
        label: label.into(),
        values: tidy_all(e.values()),
    }
}

pub fn cmd_classify(path: &Path, config: &RunConfig) -> Result<ClassifyReport, Failure> {
    let input = ingest(path, read_events_csv(open(path)?, config.eps))?;
    let family = &input.family;
    let events = input
        .names
        .iter()
        .zip(family.events())
        .enumerate()
        .map(|(k, (name, e))| InputEvent {
            label: label(k),
            name: name.clone(),
            values: e.values().to_vec(),
        })
        .collect();
    let states = family.space().labels().to_vec();

    let report = match classify_embedding(family) {
        Ok(r) => r,
        Err(Error::ImproperEvent(k)) => {
            return Ok(ClassifyReport {
                command: "classify",
                verdict: Verdict::NotEmbeddable.to_string(),
                container: None,
                boolean_container: None,
                states,
                events,
                reasons: vec![format!(
                    "{} is not proper (it is comparable to its complement); every element other than 0 and 1 of an algebra of S-probabilities is proper",
                    label(k)
                )],
                witnesses: vec![named(label(k), family.get(k))],
                exit_code: EXIT_NEGATIVE,
            })
        }
        Err(e) => return Err(e.into()),
    };
    let exit_code = match report.verdict {
        Verdict::Embeddable => EXIT_OK,
        Verdict::NotEmbeddable => EXIT_NEGATIVE,
        Verdict::Undecided => EXIT_UNDECIDED,
    };
    Ok(ClassifyReport {
        command: "classify",
        verdict: report.verdict.to_string(),
        container: report.container.map(|c| c.to_string()),
        boolean_container: report.boolean_container.map(|c| c.to_string()),
        states,
        events,
        reasons: report.reasons,
        witnesses: report
            .witnesses
            .iter()
            .map(|w| named(w.label.clone(), &w.event))
            .collect(),
        exit_code,
    })
}

pub fn cmd_boolean(path: &Path, config: &RunConfig) -> Result<BooleanReport, Failure> {
    let input = ingest(path, read_logic_json(open(path)?, config.eps))?;
    let logic = ConcreteLogic::new(input.members.clone()).map_err(|e| match e {
        Error::InvalidLogic(defect) => Failure(format!("not a concrete logic: {defect}")),
        other => other.into(),
    })?;
    let family = &input.family;
    let verdict = boolean_by_minima(&logic, family)?;

    let oracle = match boolean_oracle(logic.members(), family, config.budget) {
        Ok(o) => OracleSummary {
            boolean: Some(o.boolean),
            nodes: Some(o.nodes),
            agrees: Some(o.boolean == verdict.boolean),
            note: None,
        },
        Err(Error::BudgetExceeded(b)) => OracleSummary {
            boolean: None,
            nodes: None,
            agrees: None,
            note: Some(format!("inconclusive, budget of {b} nodes exceeded")),
        },
        Err(e) => return Err(e.into()),
    };

    let (witnesses, relations) = match &verdict.witnesses {
        Some(w) => {
            let failing = w.failing_relations();
            (
                w.witnesses
                    .iter()
                    .map(|(n, e)| named(n.clone(), e))
                    .collect(),
                w.relations
                    .iter()
                    .enumerate()
                    .map(|(k, r)| RelationRow {
                        witness: r.witness.clone(),
                        f: r.f_label.clone(),
                        g: r.g_label.clone(),
                        holds: !failing.contains(&k),
                    })
                    .collect(),
            )
        }
        None => (Vec::new(), Vec::new()),
    };

    Ok(BooleanReport {
        command: "boolean",
        verdict: if verdict.boolean {
            "BOOLEAN"
        } else {
            "NOT_BOOLEAN"
        }
        .to_string(),
        states: input.space.labels().to_vec(),
        logic_size: logic.len(),
        family: input
            .family_indices
            .iter()
            .zip(family.events())
            .enumerate()
            .map(|(k, (idx, e))| InputEvent {
                label: label(k),
                name: format!("logic[{idx}]"),
                values: e.values().to_vec(),
            })
            .collect(),
        missing_minimum: verdict.missing_minimum.map(|s| s.to_string()),
        missing_event: verdict.missing_event.as_ref().map(|e| tidy_all(e.values())),
        witnesses,
        relations,
        oracle,
        exit_code: if verdict.boolean {
            EXIT_OK
        } else {
            EXIT_NEGATIVE
        },
    })
}

fn row(kind: &'static str, r: InequalityResult) -> InequalityRow {
    InequalityRow {
        kind,
        inequality: r.label(),
        coefficients: r.coefficients.values().to_vec(),
        min_value: tidy(r.min_value),
        max_value: tidy(r.max_value),
        violated: r.violated,
        violating_state: r.violating_state,
    }
}

pub fn cmd_bell(path: &Path, config: &RunConfig) -> Result<BellReport, Failure> {
    let table = ingest(path, read_correlation_csv(open(path)?, config.eps))?;
    bell_report(&table, config)
}

/// The bell subcommand on an already loaded table.
pub fn bell_report(table: &CorrelationTable, config: &RunConfig) -> Result<BellReport, Failure> {
    let n = table.n();
    let pairs_apply = (2..=4).contains(&n);
    if config.pairs_only && !pairs_apply {
        return Err(Failure(format!(
            "--pairs-only needs a table over n = 2, 3 or 4 events, this one has n = {n}"
        )));
    }
    let mode = if config.pairs_only {
        "pairs-only"
    } else if config.all_valuations {
        "all-valuations"
    } else {
        "default"
    };
    if config.all_valuations {
        // fail fast, before any evaluation
        enumerate_01_valuations(n, config.override_enumeration_cap)?;
    }

    let mut required: Vec<SubsetIndex> = if config.pairs_only {
        bell_like_requirements(n)?
    } else {
        SubsetIndex::all(n).collect()
    };
    required.sort();
    required.dedup();
    let missing: Vec<SubsetIndex> = required
        .into_iter()
        .filter(|s| table.get(*s).is_none())
        .collect();
    if !missing.is_empty() {
        return Err(Error::MissingCorrelations(missing).into());
    }

    let mut rows = Vec::new();
    if pairs_apply {
        for (i, j) in bell_like_pairs(n)? {
            rows.push(row(
                "pair",
                evaluate_inequality(&pair_inequality(i, j)?, table)?,
            ));
        }
    }
    let mut valuations_checked = None;
    if config.all_valuations {
        let list_all = n <= ENUMERATION_CAP;
        for f in enumerate_01_valuations(n, config.override_enumeration_cap)? {
            let r = evaluate_inequality(&f, table)?;
            if list_all || r.violated {
                rows.push(row("valuation", r));
            }
        }
        if !list_all {
            valuations_checked = Some(valuation_count(n)?);
        }
    } else if !config.pairs_only {
        rows.push(row(
            "sum-all",
            evaluate_inequality(&sum_all_elementary(n)?, table)?,
        ));
    }

    let violations = rows.iter().filter(|r| r.violated).count();
    let (verdict, note, exit_code) = if violations > 0 {
        (
            "VIOLATION",
            "a Bell-type inequality is violated: the system is not classical",
            EXIT_NEGATIVE,
        )
    } else {
        (
            "NO_VIOLATION",
            "no violation found; this rules out the checked obstructions only and does not prove the system classical",
            EXIT_OK,
        )
    };
    Ok(BellReport {
        command: "bell",
        n,
        mode,
        states: table.space().labels().to_vec(),
        subsets: SubsetIndex::all(n).map(|s| s.to_string()).collect(),
        rows,
        violations,
        valuations_checked,
        verdict: verdict.to_string(),
        note: note.to_string(),
        exit_code,
    })
}

fn integral(f: &SetFunction) -> Vec<i64> {
    f.values().iter().map(|v| v.round() as i64).collect()
}

/// Streams the listing: the valuation count first, then one coefficient
/// vector per line in bitmask order of the subsets. A reader that closes the
/// pipe early is not an error.
pub fn cmd_enumerate(n: usize, config: &RunConfig, out: &mut dyn Write) -> Result<(), Failure> {
    let iter = enumerate_01_valuations(n, config.override_enumeration_cap)?;
    let count = valuation_count(n)?;
    match write_listing(n, count, iter, config.format, out) {
        Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => {
            Err(Failure(format!("cannot write output: {e}")))
        }
        _ => Ok(()),
    }
}

fn write_listing(
    n: usize,
    count: u64,
    iter: impl Iterator<Item = SetFunction>,
    format: Format,
    out: &mut dyn Write,
) -> std::io::Result<()> {
    let subsets: Vec<String> = SubsetIndex::all(n).map(|s| s.to_string()).collect();
    match format {
        Format::Text => {
            writeln!(out, "{count}")?;
            writeln!(out, "# {}", subsets.join(" "))?;
            for f in iter {
                let parts: Vec<String> = integral(&f).iter().map(i64::to_string).collect();
                writeln!(out, "{}", parts.join(" "))?;
            }
        }
        Format::Json => {
            let subsets_json = serde_json::to_string(&subsets).expect("strings serialize");
            write!(
                out,
                "{{\n  \"command\": \"enumerate\",\n  \"n\": {n},\n  \"count\": {count},\n  \"subsets\": {subsets_json},\n  \"valuations\": ["
            )?;
            for (k, f) in iter.enumerate() {
                let sep = if k == 0 { "\n" } else { ",\n" };
                let body = serde_json::to_string(&integral(&f)).expect("integers serialize");
                write!(out, "{sep}    {body}")?;
            }
            writeln!(out, "\n  ]\n}}")?;
        }
    }
    out.flush()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_args(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let code = run(
            std::iter::once("numevent").chain(args.iter().copied()),
            &mut out,
            &mut err,
        );
        (
            code,
            String::from_utf8(out).unwrap(),
            String::from_utf8(err).unwrap(),
        )
    }

    #[test]
    fn enumerate_counts() {
        let (code, out, _) = run_args(&["enumerate", "2"]);
        assert_eq!(code, 0);
        assert_eq!(out.lines().next(), Some("7"));
        assert_eq!(out.lines().count(), 2 + 7);
        let (code, out, _) = run_args(&["enumerate", "3"]);
        assert_eq!(code, 0);
        assert_eq!(out.lines().next(), Some("127"));
    }

    #[test]
    fn enumerate_json_parses() {
        let (code, out, _) = run_args(&["--format", "json", "enumerate", "2"]);
        assert_eq!(code, 0);
        let v: serde_json::Value = serde_json::from_str(&out).unwrap();
        assert_eq!(v["count"], 7);
        assert_eq!(v["valuations"].as_array().unwrap().len(), 7);
        assert_eq!(v["valuations"][0], serde_json::json!([1, 0, -1]));
    }

    #[test]
    fn enumerate_cap() {
        let (code, _, err) = run_args(&["enumerate", "5"]);
        assert_eq!(code, 1);
        assert!(err.contains("override"), "{err}");
        assert_eq!(run_args(&["enumerate", "0"]).0, 1);
    }

    #[test]
    fn usage_errors_exit_1() {
        assert_eq!(run_args(&[]).0, 1);
        assert_eq!(run_args(&["frobnicate"]).0, 1);
        assert_eq!(run_args(&["--budget", "0", "enumerate", "2"]).0, 1);
        assert_eq!(run_args(&["--eps", "-1", "enumerate", "2"]).0, 1);
        assert_eq!(run_args(&["--help"]).0, 0);
        assert_eq!(run_args(&["classify", "/nonexistent/file.csv"]).0, 1);
    }
}
