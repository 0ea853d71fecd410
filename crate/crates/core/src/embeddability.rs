//! Can a measured family live inside some algebra of S-probabilities at all?
//!
//! Decisions come from a handful of sufficient (and, for two states, exact)
//! order-theoretic conditions. Anything they do not cover is reported as
//! [`Verdict::Undecided`] rather than guessed.

use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use crate::concrete_logic::ConcreteLogic;
use crate::error::{Error, Result};
use crate::events::{Event, EventFamily, StateSpace};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Embeddable,
    NotEmbeddable,
    Undecided,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Embeddable => "EMBEDDABLE",
            Verdict::NotEmbeddable => "NOT_EMBEDDABLE",
            Verdict::Undecided => "UNDECIDED",
        })
    }
}

/// Smallest known algebra containing the family.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Container {
    /// `0`, `1` and an antichain `a_1..a_n, a_1'..a_n'`.
    Mo(usize),
    Boolean8,
    Boolean16,
    GfeClosure(usize),
}

impl fmt::Display for Container {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Container::Mo(n) => write!(f, "MO_{n}"),
            Container::Boolean8 => f.write_str("BOOLEAN_8"),
            Container::Boolean16 => f.write_str("BOOLEAN_16"),
            Container::GfeClosure(size) => write!(f, "GFE_CLOSURE({size})"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct NamedEvent {
    pub label: String,
    pub event: Event,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EmbeddingReport {
    pub verdict: Verdict,
    pub container: Option<Container>,
    /// Smallest Boolean algebra containing the family, when known but not
    /// constructed.
    pub boolean_container: Option<Container>,
    pub reasons: Vec<String>,
    pub witnesses: Vec<NamedEvent>,
}

/// Closure of `generators ∪ {0, 1}` under complement and orthogonal sums.
/// Members are ordered by their 0/1 pattern.
pub fn gfe_closure(space: &Arc<StateSpace>, generators: &[Event]) -> Result<ConcreteLogic> {
    let mut set: BTreeSet<Vec<bool>> = BTreeSet::new();
    set.insert(vec![false; space.len()]);
    set.insert(vec![true; space.len()]);
    for (k, g) in generators.iter().enumerate() {
        if !(Arc::ptr_eq(g.space(), space) || **g.space() == **space) {
            return Err(Error::SpaceMismatch);
        }
        set.insert(g.two_valued_pattern().ok_or(Error::NotTwoValued(k))?);
    }
    loop {
        let current: Vec<Vec<bool>> = set.iter().cloned().collect();
        let before = set.len();
        for p in &current {
            set.insert(p.iter().map(|b| !b).collect());
        }
        for (i, a) in current.iter().enumerate() {
            for b in &current[i + 1..] {
                if a.iter().zip(b).all(|(x, y)| !(*x && *y)) {
                    set.insert(a.iter().zip(b).map(|(x, y)| *x || *y).collect());
                }
            }
        }
        if set.len() == before {
            break;
        }
    }
    Ok(ConcreteLogic::from_patterns(space, set))
}

#[derive(Debug, Clone, PartialEq)]
pub struct AntichainCheck {
    pub holds: bool,
    /// A comparable pair `(lower, upper)` when the check fails.
    pub witness: Option<(Event, Event)>,
}

fn first_comparable(events: &[Event]) -> Option<(usize, usize)> {
    for i in 0..events.len() {
        for j in i + 1..events.len() {
            if events[i].leq_unchecked(&events[j]) {
                return Some((i, j));
            }
            if events[j].leq_unchecked(&events[i]) {
                return Some((j, i));
            }
        }
    }
    None
}

/// No two members (of the family, or of the family with complements) are
/// comparable.
pub fn is_antichain(family: &EventFamily, include_complements: bool) -> AntichainCheck {
    let events = if include_complements {
        family.with_complements()
    } else {
        family.events().to_vec()
    };
    match first_comparable(&events) {
        None => AntichainCheck {
            holds: true,
            witness: None,
        },
        Some((lo, hi)) => AntichainCheck {
            holds: false,
            witness: Some((events[lo].clone(), events[hi].clone())),
        },
    }
}

/// `{0, 1, p1, p1', p2, p2', p2 - p1, (p2 - p1)'}` for proper `p1 < p2` with a
/// proper difference.
pub fn boolean8_container(p1: &Event, p2: &Event) -> Result<Vec<Event>> {
    if !p1.is_proper() || !p2.is_proper() {
        return Err(Error::Precondition("both events must be proper".into()));
    }
    if !p1.leq(p2)? || p1.approx_eq(p2) {
        return Err(Error::Precondition("p1 must lie strictly below p2".into()));
    }
    let d = p2.difference(p1)?;
    if !d.is_proper() {
        return Err(Error::Precondition("p2 - p1 is not proper".into()));
    }
    let space = p1.space();
    let out = vec![
        Event::zero(space),
        Event::one(space),
        p1.clone(),
        p1.complement(),
        p2.clone(),
        p2.complement(),
        d.complement(),
        d,
    ];
    for i in 0..out.len() {
        for j in i + 1..out.len() {
            if out[i].approx_eq(&out[j]) {
                return Err(Error::Precondition(
                    "container elements are not pairwise distinct".into(),
                ));
            }
        }
    }
    Ok(out)
}

fn label(index: usize, complemented: bool) -> String {
    if complemented {
        format!("p{}'", index + 1)
    } else {
        format!("p{}", index + 1)
    }
}

fn named(label: String, event: &Event) -> NamedEvent {
    NamedEvent {
        label,
        event: event.clone(),
    }
}

/// Runs the embeddability rules in a fixed order:
/// two-valued data, antichain `P̄_n`, two states, a comparable pair with
/// `n = 2`, and otherwise undecided.
pub fn classify_embedding(family: &EventFamily) -> Result<EmbeddingReport> {
    for (k, e) in family.events().iter().enumerate() {
        if !e.is_proper() {
            return Err(Error::ImproperEvent(k));
        }
    }
    let space = family.space();
    let events = family.events();
    let mut reasons = Vec::new();

    // Members equal to the complement of an earlier member add nothing to P̄_n.
    let mut kept: Vec<usize> = Vec::new();
    for (k, e) in events.iter().enumerate() {
        match kept.iter().find(|&&i| events[i].complement().approx_eq(e)) {
            Some(&i) => reasons.push(format!(
                "{} equals {}; treated as one complementary pair",
                label(k, false),
                label(i, true)
            )),
            None => kept.push(k),
        }
    }
    let closed: Vec<(String, Event)> = kept
        .iter()
        .map(|&k| (label(k, false), events[k].clone()))
        .chain(
            kept.iter()
                .map(|&k| (label(k, true), events[k].complement())),
        )
        .collect();
    let closed_events: Vec<Event> = closed.iter().map(|(_, e)| e.clone()).collect();
    let comparable = first_comparable(&closed_events);

    if events.iter().all(Event::is_two_valued) {
        let logic = crate::embeddability::gfe_closure(space, events)?;
        reasons.push(format!(
            "all members are two-valued; they generate a concrete logic of {} elements that preserves their order",
            logic.len()
        ));
        if comparable.is_none() {
            reasons.push(format!(
                "P̄_n is also an antichain, so MO_{} would contain the family as well",
                kept.len()
            ));
        }
        return Ok(EmbeddingReport {
            verdict: Verdict::Embeddable,
            container: Some(Container::GfeClosure(logic.len())),
            boolean_container: None,
            reasons,
            witnesses: Vec::new(),
        });
    }

    let Some((lo, hi)) = comparable else {
        let n = kept.len();
        reasons.push(format!(
            "the {} elements of P̄_n are pairwise incomparable; MO_{n} is the smallest container",
            2 * n
        ));
        let boolean_container = (n == 2).then(|| {
            reasons.push("the smallest Boolean algebra containing the pair has 16 elements".into());
            Container::Boolean16
        });
        return Ok(EmbeddingReport {
            verdict: Verdict::Embeddable,
            container: Some(Container::Mo(n)),
            boolean_container,
            reasons,
            witnesses: Vec::new(),
        });
    };
    let (lo_label, lo_event) = &closed[lo];
    let (hi_label, hi_event) = &closed[hi];
    let pair = vec![
        named(lo_label.clone(), lo_event),
        named(hi_label.clone(), hi_event),
    ];
    reasons.push(format!(
        "{lo_label} <= {hi_label}, so P̄_n is not an antichain"
    ));

    if space.len() == 2 {
        reasons.push("with two states a family embeds only if P̄_n is an antichain".into());
        let mut witnesses = pair;
        witnesses.push(named(
            format!("{hi_label} - {lo_label}"),
            &hi_event.difference(lo_event)?,
        ));
        return Ok(EmbeddingReport {
            verdict: Verdict::NotEmbeddable,
            container: None,
            boolean_container: None,
            reasons,
            witnesses,
        });
    }

    if kept.len() == 2 {
        let d = hi_event.difference(lo_event)?;
        let d_label = format!("{hi_label} - {lo_label}");
        if d.is_proper() {
            reasons.push(format!(
                "{d_label} is proper; 0, 1, the pair, their complements, the difference and its complement form an eight-element Boolean algebra"
            ));
            return Ok(EmbeddingReport {
                verdict: Verdict::Embeddable,
                container: Some(Container::Boolean8),
                boolean_container: Some(Container::Boolean8),
                reasons,
                witnesses: Vec::new(),
            });
        }
        reasons.push(format!(
            "{d_label} is not proper, but every element other than 0 and 1 of an algebra of S-probabilities must be (inferred for {} states)",
            space.len()
        ));
        let mut witnesses = pair;
        witnesses.push(named(d_label, &d));
        return Ok(EmbeddingReport {
            verdict: Verdict::NotEmbeddable,
            container: None,
            boolean_container: None,
            reasons,
            witnesses,
        });
    }

    reasons.push(format!(
        "no criterion applies to {} non-two-valued events with comparable elements over {} states",
        kept.len(),
        space.len()
    ));
    Ok(EmbeddingReport {
        verdict: Verdict::Undecided,
        container: None,
        boolean_container: None,
        reasons,
        witnesses: pair,
    })
}
