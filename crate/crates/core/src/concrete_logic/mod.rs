//! Boolean-embeddability inside a concrete logic.
//!
//! In a concrete logic (two-valued events closed under 0, complement and
//! orthogonal sums) the commutation witness for `f C g` is forced to be the
//! pointwise minimum `f ⊼ g'`, which turns the Boolean test for up to four
//! events into membership checks for pointwise minima.

mod oracle;

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use crate::bell::{witnesses_from_correlations, CorrelationTable, SubsetIndex, WitnessSet};
use crate::error::{Error, Result};
use crate::events::{pointwise_min, Event, EventFamily, StateSpace};

pub use oracle::{boolean_oracle, OracleOutcome, DEFAULT_ORACLE_BUDGET, MAX_ORACLE_MEMBERS};

/// Why a set of events fails to be a concrete logic.
#[derive(Debug, Clone, PartialEq)]
pub enum LogicDefect {
    Empty,
    SpaceMismatch {
        member: usize,
    },
    NotTwoValued {
        member: usize,
    },
    /// 0 is not a member.
    MissingZero,
    /// The complement of a member is absent.
    MissingComplement {
        member: usize,
        complement: Event,
    },
    /// Two members are orthogonal but their sum is absent.
    MissingSum {
        left: usize,
        right: usize,
        sum: Event,
    },
}

impl LogicDefect {
    /// The violated closure axiom, if the defect is one.
    pub fn axiom(&self) -> Option<&'static str> {
        match self {
            LogicDefect::Empty | LogicDefect::MissingZero => Some("A1"),
            LogicDefect::MissingComplement { .. } => Some("A2"),
            LogicDefect::MissingSum { .. } => Some("A3"),
            _ => None,
        }
    }
}

impl fmt::Display for LogicDefect {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LogicDefect::Empty => write!(f, "A1 violated: the logic is empty"),
            LogicDefect::SpaceMismatch { member } => {
                write!(f, "member #{member} is defined over a different state space")
            }
            LogicDefect::NotTwoValued { member } => {
                write!(f, "member #{member} is not two-valued")
            }
            LogicDefect::MissingZero => write!(f, "A1 violated: 0 is not a member"),
            LogicDefect::MissingComplement { member, complement } => write!(
                f,
                "A2 violated: complement {complement} of member #{member} is missing"
            ),
            LogicDefect::MissingSum { left, right, sum } => write!(
                f,
                "A3 violated: members #{left} and #{right} are orthogonal but their sum {sum} is missing"
            ),
        }
    }
}

/// Checks the concrete-logic axioms: two-valued members, `0` present, and
/// closure under complement and orthogonal sums.
pub fn is_concrete_logic(events: &[Event]) -> std::result::Result<(), LogicDefect> {
    let first = events.first().ok_or(LogicDefect::Empty)?;
    let mut patterns = Vec::with_capacity(events.len());
    for (k, e) in events.iter().enumerate() {
        if !e.same_space(first) {
            return Err(LogicDefect::SpaceMismatch { member: k });
        }
        patterns.push(
            e.two_valued_pattern()
                .ok_or(LogicDefect::NotTwoValued { member: k })?,
        );
    }
    let present: HashMap<&[bool], usize> = patterns
        .iter()
        .enumerate()
        .map(|(k, p)| (p.as_slice(), k))
        .collect();
    if !patterns.iter().any(|p| p.iter().all(|b| !b)) {
        return Err(LogicDefect::MissingZero);
    }
    let space = first.space();
    for (k, p) in patterns.iter().enumerate() {
        let c: Vec<bool> = p.iter().map(|b| !b).collect();
        if !present.contains_key(c.as_slice()) {
            return Err(LogicDefect::MissingComplement {
                member: k,
                complement: Event::indicator(space, &c).expect("0/1 values"),
            });
        }
    }
    for i in 0..patterns.len() {
        for j in i + 1..patterns.len() {
            let (a, b) = (&patterns[i], &patterns[j]);
            if a.iter().zip(b).any(|(x, y)| *x && *y) {
                continue;
            }
            let sum: Vec<bool> = a.iter().zip(b).map(|(x, y)| *x || *y).collect();
            if !present.contains_key(sum.as_slice()) {
                return Err(LogicDefect::MissingSum {
                    left: i,
                    right: j,
                    sum: Event::indicator(space, &sum).expect("0/1 values"),
                });
            }
        }
    }
    Ok(())
}

/// A validated concrete logic. Members are deduplicated by 0/1 pattern and
/// keep their first-seen order.
#[derive(Debug, Clone)]
pub struct ConcreteLogic {
    space: Arc<StateSpace>,
    members: Vec<Event>,
    index: HashMap<Vec<bool>, usize>,
}

impl ConcreteLogic {
    pub fn new(events: Vec<Event>) -> Result<Self> {
        is_concrete_logic(&events).map_err(Error::InvalidLogic)?;
        let space = Arc::clone(events[0].space());
        Ok(Self::from_patterns(
            &space,
            events
                .iter()
                .map(|e| e.two_valued_pattern().expect("validated")),
        ))
    }

    /// Assumes the patterns are already closed.
    pub(crate) fn from_patterns(
        space: &Arc<StateSpace>,
        patterns: impl IntoIterator<Item = Vec<bool>>,
    ) -> Self {
        let mut members = Vec::new();
        let mut index = HashMap::new();
        for p in patterns {
            if index.contains_key(&p) {
                continue;
            }
            members.push(Event::indicator(space, &p).expect("0/1 values"));
            index.insert(p, members.len() - 1);
        }
        Self {
            space: Arc::clone(space),
            members,
            index,
        }
    }

    pub fn members(&self) -> &[Event] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn space(&self) -> &Arc<StateSpace> {
        &self.space
    }

    pub fn position(&self, event: &Event) -> Option<usize> {
        if !event.same_space(&self.members[0]) {
            return None;
        }
        event
            .two_valued_pattern()
            .and_then(|p| self.index.get(&p).copied())
    }

    pub fn contains(&self, event: &Event) -> bool {
        self.position(event).is_some()
    }
}

/// `f C(a) g`: `a <= f <= a + g <= 1`, pointwise within tolerance.
pub fn commutes_via(a: &Event, f: &Event, g: &Event) -> bool {
    let eps = a.space().eps();
    (0..a.len()).all(|k| {
        let (a, f, g) = (a.value(k), f.value(k), g.value(k));
        a <= f + eps && f <= a + g + eps && a + g <= 1.0 + eps
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct CommuteWitness {
    pub a: Event,
    pub f: Event,
    pub g: Event,
}

fn member_of(members: &[Event], e: &Event) -> bool {
    members.iter().any(|m| m.approx_eq(e))
}

/// Finds `a` in `members` with `f C(a) g`.
///
/// For two-valued members the only candidate is `f ⊼ g'`; otherwise every
/// member is tried in order.
pub fn commute_witness(members: &[Event], f: &Event, g: &Event) -> Result<Option<CommuteWitness>> {
    if !member_of(members, f) {
        return Err(Error::Precondition("f is not a member".into()));
    }
    if !member_of(members, g) {
        return Err(Error::Precondition("g is not a member".into()));
    }
    let witness = |a: &Event| CommuteWitness {
        a: a.clone(),
        f: f.clone(),
        g: g.clone(),
    };
    if members.iter().all(Event::is_two_valued) {
        let candidate = pointwise_min(&[f.clone(), g.complement()])?;
        return Ok(members
            .iter()
            .find(|m| m.approx_eq(&candidate))
            .map(witness));
    }
    Ok(members.iter().find(|a| commutes_via(a, f, g)).map(witness))
}

#[derive(Debug, Clone, PartialEq)]
pub struct BooleanVerdict {
    pub boolean: bool,
    /// First index set, in lexicographic order, whose pointwise minimum is
    /// not a member.
    pub missing_minimum: Option<SubsetIndex>,
    pub missing_event: Option<Event>,
    pub witnesses: Option<WitnessSet>,
}

/// Decides whether a family of 2 to 4 members of a concrete logic lies in a
/// Boolean subalgebra: it does iff the pointwise minimum of every non-empty
/// subfamily is again a member.
pub fn boolean_by_minima(logic: &ConcreteLogic, family: &EventFamily) -> Result<BooleanVerdict> {
    let n = family.len();
    if !(2..=4).contains(&n) {
        return Err(Error::UnsupportedN {
            n,
            allowed: "2..=4",
        });
    }
    for (k, e) in family.events().iter().enumerate() {
        if !logic.contains(e) {
            return Err(Error::NotInLogic(k));
        }
    }
    let mut minima = Vec::with_capacity((1 << n) - 1);
    for subset in SubsetIndex::all_lexicographic(n) {
        let selected: Vec<Event> = subset
            .indices()
            .into_iter()
            .map(|i| family.get(i - 1).clone())
            .collect();
        let m = pointwise_min(&selected)?;
        if !logic.contains(&m) {
            return Ok(BooleanVerdict {
                boolean: false,
                missing_minimum: Some(subset),
                missing_event: Some(m),
                witnesses: None,
            });
        }
        minima.push((subset, m));
    }
    let table = CorrelationTable::new(logic.space(), n, minima)?;
    let witnesses = witnesses_from_correlations(&table)?;
    Ok(BooleanVerdict {
        boolean: true,
        missing_minimum: None,
        missing_event: None,
        witnesses: Some(witnesses),
    })
}
