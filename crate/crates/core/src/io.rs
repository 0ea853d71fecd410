//! Input formats.
//!
//! - events CSV, header `state,event,value`, one row per (state, event);
//! - correlation CSV, header `state,subset,value`, subsets written `{1,3}`
//!   (quoted, since they contain commas) or comma-free as `{13}`;
//! - concrete-logic JSON, `{"states": [...], "logic": [[0,1,...], ...],
//!   "family": [indices]}` with 0-based family indices into `logic`.
//!
//! States and events keep their order of first appearance.

use std::collections::HashMap;
use std::fmt;
use std::io::{Read, Write};
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::bell::{CorrelationTable, SubsetIndex, MAX_N};
use crate::error::Error;
use crate::events::{Event, EventFamily, StateSpace};

#[derive(Debug, Clone, PartialEq)]
pub struct IngestError {
    pub line: Option<u64>,
    pub column: Option<u64>,
    pub message: String,
}

impl IngestError {
    fn at(line: u64, column: Option<u64>, message: impl Into<String>) -> Self {
        Self {
            line: Some(line),
            column,
            message: message.into(),
        }
    }

    fn whole(message: impl Into<String>) -> Self {
        Self {
            line: None,
            column: None,
            message: message.into(),
        }
    }
}

impl fmt::Display for IngestError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.line, self.column) {
            (Some(l), Some(c)) => write!(f, "line {l}, column {c}: {}", self.message),
            (Some(l), None) => write!(f, "line {l}: {}", self.message),
            _ => f.write_str(&self.message),
        }
    }
}

impl std::error::Error for IngestError {}

impl From<Error> for IngestError {
    fn from(e: Error) -> Self {
        Self::whole(e.to_string())
    }
}

fn csv_error(e: csv::Error) -> IngestError {
    let line = e.position().map(|p| p.line());
    IngestError {
        line,
        column: None,
        message: match e.kind() {
            csv::ErrorKind::Utf8 { .. } => "invalid UTF-8".into(),
            _ => e.to_string(),
        },
    }
}

struct Row {
    line: u64,
    fields: Vec<String>,
}

/// Reads rows after checking the header. Rows may have more than three
/// fields; callers decide what that means.
fn read_rows<R: Read>(reader: R, header: [&str; 3]) -> Result<Vec<Row>, IngestError> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(reader);
    let mut records = rdr.records();
    let expected = header.join(",");
    let first = match records.next() {
        None => {
            return Err(IngestError::at(
                1,
                None,
                format!("empty input; expected header `{expected}`"),
            ))
        }
        Some(r) => r.map_err(csv_error)?,
    };
    let got: Vec<&str> = first.iter().collect();
    if got != header {
        return Err(IngestError::at(
            1,
            None,
            format!("expected header `{expected}`, found `{}`", got.join(",")),
        ));
    }
    let mut rows = Vec::new();
    for rec in records {
        let rec = rec.map_err(csv_error)?;
        let line = rec.position().map_or(0, |p| p.line());
        if rec.len() == 1 && rec[0].is_empty() {
            continue;
        }
        if rec.len() < 3 {
            return Err(IngestError::at(
                line,
                None,
                format!("expected 3 fields, found {}", rec.len()),
            ));
        }
        rows.push(Row {
            line,
            fields: rec.iter().map(str::to_string).collect(),
        });
    }
    if rows.is_empty() {
        return Err(IngestError::at(2, None, "no data rows"));
    }
    Ok(rows)
}

fn parse_value(text: &str, line: u64, column: u64, eps: f64) -> Result<f64, IngestError> {
    let v: f64 = text
        .parse()
        .map_err(|_| IngestError::at(line, Some(column), format!("`{text}` is not a number")))?;
    if !v.is_finite() || v < -eps || v > 1.0 + eps {
        return Err(IngestError::at(
            line,
            Some(column),
            format!("value {text} lies outside [0, 1]"),
        ));
    }
    Ok(v)
}

fn intern(order: &mut Vec<String>, lookup: &mut HashMap<String, usize>, key: &str) -> usize {
    if let Some(&k) = lookup.get(key) {
        return k;
    }
    order.push(key.to_string());
    lookup.insert(key.to_string(), order.len() - 1);
    order.len() - 1
}

#[derive(Debug, Clone)]
pub struct EventsInput {
    pub names: Vec<String>,
    pub family: EventFamily,
}

pub fn read_events_csv<R: Read>(reader: R, eps: f64) -> Result<EventsInput, IngestError> {
    let rows = read_rows(reader, ["state", "event", "value"])?;
    let (mut states, mut state_ix) = (Vec::new(), HashMap::new());
    let (mut names, mut name_ix) = (Vec::new(), HashMap::new());
    let mut cells: HashMap<(usize, usize), f64> = HashMap::new();
    for row in &rows {
        if row.fields.len() != 3 {
            return Err(IngestError::at(
                row.line,
                None,
                format!("expected 3 fields, found {}", row.fields.len()),
            ));
        }
        for (col, f) in row.fields[..2].iter().enumerate() {
            if f.is_empty() {
                return Err(IngestError::at(
                    row.line,
                    Some(col as u64 + 1),
                    "empty field",
                ));
            }
        }
        let s = intern(&mut states, &mut state_ix, &row.fields[0]);
        let e = intern(&mut names, &mut name_ix, &row.fields[1]);
        let v = parse_value(&row.fields[2], row.line, 3, eps)?;
        if cells.insert((s, e), v).is_some() {
            return Err(IngestError::at(
                row.line,
                None,
                format!(
                    "duplicate row for state `{}` and event `{}`",
                    states[s], names[e]
                ),
            ));
        }
    }
    let space = StateSpace::with_eps(states.clone(), eps)?;
    let mut events = Vec::with_capacity(names.len());
    for (e, name) in names.iter().enumerate() {
        let mut values = Vec::with_capacity(states.len());
        for (s, state) in states.iter().enumerate() {
            let v = cells.get(&(s, e)).ok_or_else(|| {
                IngestError::whole(format!("event `{name}` has no value for state `{state}`"))
            })?;
            values.push(*v);
        }
        events.push(Event::new(&space, values)?);
    }
    let family = EventFamily::new(events).map_err(|err| match err {
        Error::DuplicateEvent { first, second } => IngestError::whole(format!(
            "events `{}` and `{}` coincide within tolerance",
            names[first], names[second]
        )),
        other => other.into(),
    })?;
    Ok(EventsInput { names, family })
}

pub fn write_events_csv<W: Write>(
    writer: W,
    names: &[String],
    family: &EventFamily,
) -> Result<(), IngestError> {
    let mut w = csv::Writer::from_writer(writer);
    let io = |e: csv::Error| IngestError::whole(e.to_string());
    w.write_record(["state", "event", "value"]).map_err(io)?;
    for (s, state) in family.space().labels().iter().enumerate() {
        for (name, e) in names.iter().zip(family.events()) {
            w.write_record([state.as_str(), name, &e.value(s).to_string()])
                .map_err(io)?;
        }
    }
    w.flush().map_err(|e| IngestError::whole(e.to_string()))
}

/// Parses `{1,3}` or `{13}` into sorted 1-based indices.
pub fn parse_subset(text: &str) -> Result<Vec<usize>, String> {
    let inner = text
        .strip_prefix('{')
        .and_then(|t| t.strip_suffix('}'))
        .ok_or_else(|| format!("subset `{text}` must be written in braces, e.g. {{1,3}}"))?
        .trim();
    if inner.is_empty() {
        return Err("subset must be non-empty".into());
    }
    let parts: Vec<usize> = if inner.contains(',') {
        inner
            .split(',')
            .map(|p| {
                p.trim()
                    .parse::<usize>()
                    .map_err(|_| format!("`{p}` is not an index"))
            })
            .collect::<Result<_, _>>()?
    } else {
        inner
            .chars()
            .map(|c| {
                c.to_digit(10)
                    .map(|d| d as usize)
                    .ok_or_else(|| format!("`{c}` is not an index"))
            })
            .collect::<Result<_, _>>()?
    };
    if parts.contains(&0) {
        return Err("indices start at 1".into());
    }
    if parts.windows(2).any(|w| w[0] >= w[1]) {
        return Err(format!("subset `{text}` is not strictly increasing"));
    }
    Ok(parts)
}

pub fn read_correlation_csv<R: Read>(reader: R, eps: f64) -> Result<CorrelationTable, IngestError> {
    let rows = read_rows(reader, ["state", "subset", "value"])?;
    let (mut states, mut state_ix) = (Vec::new(), HashMap::new());
    let mut subsets: Vec<Vec<usize>> = Vec::new();
    let mut subset_ix: HashMap<Vec<usize>, usize> = HashMap::new();
    let mut cells: HashMap<(usize, usize), f64> = HashMap::new();
    let mut n = 0;
    for row in &rows {
        let last = row.fields.len() - 1;
        if row.fields[0].is_empty() {
            return Err(IngestError::at(row.line, Some(1), "empty field"));
        }
        // An unquoted `{1,3}` spills over several fields; glue it back.
        let subset_text = row.fields[1..last].join(",");
        let indices =
            parse_subset(&subset_text).map_err(|m| IngestError::at(row.line, Some(2), m))?;
        let top = *indices.last().expect("non-empty");
        if top > MAX_N {
            return Err(IngestError::at(
                row.line,
                Some(2),
                format!("index {top} exceeds the maximum of {MAX_N}"),
            ));
        }
        n = n.max(top);
        let s = intern(&mut states, &mut state_ix, &row.fields[0]);
        let k = match subset_ix.get(&indices) {
            Some(&k) => k,
            None => {
                subsets.push(indices.clone());
                subset_ix.insert(indices, subsets.len() - 1);
                subsets.len() - 1
            }
        };
        let v = parse_value(&row.fields[last], row.line, last as u64 + 1, eps)?;
        if cells.insert((s, k), v).is_some() {
            return Err(IngestError::at(
                row.line,
                None,
                format!(
                    "duplicate row for state `{}` and subset {}",
                    states[s], subset_text
                ),
            ));
        }
    }
    let space = StateSpace::with_eps(states.clone(), eps)?;
    let mut entries = Vec::with_capacity(subsets.len());
    for (k, idx) in subsets.iter().enumerate() {
        let subset = SubsetIndex::from_indices(idx, n)?;
        let mut values = Vec::with_capacity(states.len());
        for (s, state) in states.iter().enumerate() {
            let v = cells.get(&(s, k)).ok_or_else(|| {
                IngestError::whole(format!("subset {subset} has no value for state `{state}`"))
            })?;
            values.push(*v);
        }
        entries.push((subset, Event::new(&space, values)?));
    }
    Ok(CorrelationTable::new(&space, n, entries)?)
}

/// Present entries in bitmask order, states outermost.
pub fn write_correlation_csv<W: Write>(
    writer: W,
    table: &CorrelationTable,
) -> Result<(), IngestError> {
    let mut w = csv::Writer::from_writer(writer);
    let io = |e: csv::Error| IngestError::whole(e.to_string());
    w.write_record(["state", "subset", "value"]).map_err(io)?;
    for (s, state) in table.space().labels().iter().enumerate() {
        for (subset, e) in table.entries() {
            w.write_record([state.as_str(), &subset.to_string(), &e.value(s).to_string()])
                .map_err(io)?;
        }
    }
    w.flush().map_err(|e| IngestError::whole(e.to_string()))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LogicDocument {
    pub states: Vec<String>,
    pub logic: Vec<Vec<f64>>,
    pub family: Vec<usize>,
}

/// Raw logic file contents; the members are not yet checked to form a
/// concrete logic.
#[derive(Debug, Clone)]
pub struct LogicInput {
    pub space: Arc<StateSpace>,
    pub members: Vec<Event>,
    pub family_indices: Vec<usize>,
    pub family: EventFamily,
}

pub fn read_logic_json<R: Read>(reader: R, eps: f64) -> Result<LogicInput, IngestError> {
    let doc: LogicDocument = serde_json::from_reader(reader).map_err(|e| {
        if e.line() == 0 {
            IngestError::whole(e.to_string())
        } else {
            IngestError::at(e.line() as u64, Some(e.column() as u64), strip_position(&e))
        }
    })?;
    let space = StateSpace::with_eps(doc.states.clone(), eps)?;
    let members = doc
        .logic
        .into_iter()
        .enumerate()
        .map(|(k, values)| {
            if values.len() != space.len() {
                return Err(IngestError::whole(format!(
                    "logic member #{k} has {} values for {} states",
                    values.len(),
                    space.len()
                )));
            }
            Event::new(&space, values)
                .map_err(|e| IngestError::whole(format!("logic member #{k}: {e}")))
        })
        .collect::<Result<Vec<_>, _>>()?;
    if members.is_empty() {
        return Err(IngestError::whole("`logic` must list at least one member"));
    }
    let picked = doc
        .family
        .iter()
        .map(|&i| {
            members.get(i).cloned().ok_or_else(|| {
                IngestError::whole(format!(
                    "family index {i} is out of range for {} logic members",
                    members.len()
                ))
            })
        })
        .collect::<Result<Vec<_>, _>>()?;
    let family = EventFamily::new(picked).map_err(|err| match err {
        Error::DuplicateEvent { first, second } => IngestError::whole(format!(
            "family entries {} and {} name the same event",
            doc.family[first], doc.family[second]
        )),
        other => other.into(),
    })?;
    Ok(LogicInput {
        space,
        members,
        family_indices: doc.family,
        family,
    })
}

fn strip_position(e: &serde_json::Error) -> String {
    let full = e.to_string();
    match full.rfind(" at line ") {
        Some(k) => full[..k].to_string(),
        None => full,
    }
}

pub fn write_logic_json<W: Write>(
    mut writer: W,
    members: &[Event],
    family_indices: &[usize],
) -> Result<(), IngestError> {
    let space = members
        .first()
        .ok_or_else(|| IngestError::whole("no members to write"))?
        .space();
    let doc = LogicDocument {
        states: space.labels().to_vec(),
        logic: members.iter().map(|e| e.values().to_vec()).collect(),
        family: family_indices.to_vec(),
    };
    serde_json::to_writer(&mut writer, &doc).map_err(|e| IngestError::whole(e.to_string()))?;
    writeln!(writer).map_err(|e| IngestError::whole(e.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::DEFAULT_EPS;

    #[test]
    fn subset_spellings() {
        assert_eq!(parse_subset("{1,3}").unwrap(), vec![1, 3]);
        assert_eq!(parse_subset("{13}").unwrap(), vec![1, 3]);
        assert_eq!(parse_subset("{ 2 , 11 }").unwrap(), vec![2, 11]);
        assert!(parse_subset("{3,1}").is_err());
        assert!(parse_subset("{}").is_err());
        assert!(parse_subset("1,3").is_err());
        assert!(parse_subset("{0}").is_err());
        assert!(parse_subset("{1,1}").is_err());
    }

    #[test]
    fn events_csv_orders_by_first_appearance() {
        let text = "state,event,value\nb,q,0.4\nb,p,0.7\na,q,0.6\na,p,0.3\n";
        let input = read_events_csv(text.as_bytes(), DEFAULT_EPS).unwrap();
        assert_eq!(input.names, ["q", "p"]);
        assert_eq!(input.family.space().labels(), ["b", "a"]);
        assert_eq!(input.family.get(1).values(), [0.7, 0.3]);
    }

    #[test]
    fn events_csv_diagnostics() {
        let bad_value = "state,event,value\ns1,p,0.3\ns1,q,abc\n";
        let err = read_events_csv(bad_value.as_bytes(), DEFAULT_EPS).unwrap_err();
        assert_eq!((err.line, err.column), (Some(3), Some(3)));

        let range = "state,event,value\ns1,p,1.3\n";
        let err = read_events_csv(range.as_bytes(), DEFAULT_EPS).unwrap_err();
        assert_eq!(
            err.to_string(),
            "line 2, column 3: value 1.3 lies outside [0, 1]"
        );

        let header = "foo,bar\n1,2\n";
        assert_eq!(
            read_events_csv(header.as_bytes(), DEFAULT_EPS)
                .unwrap_err()
                .line,
            Some(1)
        );

        let missing = "state,event,value\ns1,p,0.3\ns2,q,0.4\n";
        let err = read_events_csv(missing.as_bytes(), DEFAULT_EPS).unwrap_err();
        assert!(err.message.contains("no value"));

        let dup = "state,event,value\ns1,p,0.3\ns1,p,0.4\n";
        assert_eq!(
            read_events_csv(dup.as_bytes(), DEFAULT_EPS)
                .unwrap_err()
                .line,
            Some(3)
        );

        assert!(read_events_csv(&[0xff, 0xfe, 0x00][..], DEFAULT_EPS).is_err());
        assert!(read_events_csv("".as_bytes(), DEFAULT_EPS).is_err());
    }

    #[test]
    fn correlation_csv_quoted_unquoted_and_compact() {
        let quoted = "state,subset,value\ns1,{1},0.5\ns1,{2},0.4\ns1,\"{1,2}\",0.1\n";
        let unquoted = "state,subset,value\ns1,{1},0.5\ns1,{2},0.4\ns1,{1,2},0.1\n";
        let compact = "state,subset,value\ns1,{1},0.5\ns1,{2},0.4\ns1,{12},0.1\n";
        let tables: Vec<CorrelationTable> = [quoted, unquoted, compact]
            .iter()
            .map(|t| read_correlation_csv(t.as_bytes(), DEFAULT_EPS).unwrap())
            .collect();
        for t in &tables {
            assert_eq!(t.n(), 2);
            let full = SubsetIndex::full(2).unwrap();
            assert_eq!(t.get(full).unwrap().values(), [0.1]);
        }
    }

    #[test]
    fn correlation_csv_errors() {
        let missing_base = "state,subset,value\ns1,{1},0.5\ns1,\"{1,2}\",0.1\n";
        let err = read_correlation_csv(missing_base.as_bytes(), DEFAULT_EPS).unwrap_err();
        assert!(err.message.contains("{2}"), "{err}");

        let bad_subset = "state,subset,value\ns1,{1},0.5\ns1,(2),0.4\n";
        let err = read_correlation_csv(bad_subset.as_bytes(), DEFAULT_EPS).unwrap_err();
        assert_eq!((err.line, err.column), (Some(3), Some(2)));
    }

    #[test]
    fn round_trips() {
        let space = StateSpace::numbered(3).unwrap();
        let fam = EventFamily::new(vec![
            Event::new(&space, vec![0.1, 0.2, 0.123456789]).unwrap(),
            Event::new(&space, vec![1.0 / 3.0, 0.0, 1.0]).unwrap(),
        ])
        .unwrap();
        let names = vec!["a".to_string(), "b,c".to_string()];
        let mut buf = Vec::new();
        write_events_csv(&mut buf, &names, &fam).unwrap();
        let back = read_events_csv(&buf[..], DEFAULT_EPS).unwrap();
        assert_eq!(back.names, names);
        assert_eq!(back.family, fam);
    }

    #[test]
    fn logic_json_errors_carry_positions() {
        let text = "{\"states\": [\"a\"],\n \"logic\": [[0], [1]],\n \"family\": [0,, 1]}";
        let err = read_logic_json(text.as_bytes(), DEFAULT_EPS).unwrap_err();
        assert_eq!(err.line, Some(3));
        assert!(err.column.is_some());

        let out_of_range = r#"{"states":["a","b"],"logic":[[0,0],[1,1]],"family":[0,5]}"#;
        let err = read_logic_json(out_of_range.as_bytes(), DEFAULT_EPS).unwrap_err();
        assert!(err.message.contains("out of range"));
    }
}
