use std::collections::BTreeMap;

use super::inequality::check_bell_like;
use super::subset::SubsetIndex;
use super::table::CorrelationTable;
use crate::concrete_logic::commutes_via;
use crate::error::{Error, Result};
use crate::events::Event;

/// One required relation `f C(a) g`, i.e. `a <= f <= a + g <= 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct CommuteRelation {
    pub witness: String,
    pub f_label: String,
    pub g_label: String,
    pub f: Event,
    pub g: Event,
}

/// Named witness events together with the commutation relations they must
/// satisfy for the family to be Boolean.
#[derive(Debug, Clone, PartialEq)]
pub struct WitnessSet {
    pub witnesses: Vec<(String, Event)>,
    pub relations: Vec<CommuteRelation>,
}

impl WitnessSet {
    pub fn get(&self, name: &str) -> Option<&Event> {
        self.witnesses
            .iter()
            .find(|(n, _)| n == name)
            .map(|(_, e)| e)
    }

    pub fn as_map(&self) -> BTreeMap<String, Event> {
        self.witnesses.iter().cloned().collect()
    }

    /// Relations whose chain fails, by position.
    pub fn failing_relations(&self) -> Vec<usize> {
        self.relations
            .iter()
            .enumerate()
            .filter(|(_, r)| {
                let a = self
                    .get(&r.witness)
                    .expect("relation names a known witness");
                !commutes_via(a, &r.f, &r.g)
            })
            .map(|(k, _)| k)
            .collect()
    }

    pub fn all_hold(&self) -> bool {
        self.failing_relations().is_empty()
    }
}

/// A named event expression, so relation sides keep readable labels.
#[derive(Clone)]
struct Term {
    label: String,
    event: Event,
}

impl Term {
    fn minus(&self, witness: &Term) -> Result<Term> {
        let label = if self.label.contains(' ') {
            format!("({}) - {}", self.label, witness.label)
        } else {
            format!("{} - {}", self.label, witness.label)
        };
        Ok(Term {
            label,
            event: self.event.difference(&witness.event)?,
        })
    }
}

struct Builder<'a> {
    table: &'a CorrelationTable,
    set: WitnessSet,
}

impl<'a> Builder<'a> {
    fn p(&self, idx: &[usize]) -> Result<Term> {
        let s = SubsetIndex::from_indices(idx, self.table.n())?;
        Ok(Term {
            label: format!("p{}", s.compact()),
            event: self.table.require(s)?.clone(),
        })
    }

    /// Defines `name := p_upper - p_lower`.
    fn define(&mut self, name: &str, upper: &[usize], lower: &[usize]) -> Result<Term> {
        let event = self.p(upper)?.event.difference(&self.p(lower)?.event)?;
        self.set.witnesses.push((name.to_string(), event.clone()));
        Ok(Term {
            label: name.to_string(),
            event,
        })
    }

    fn witness(&self, name: &str) -> Term {
        Term {
            label: name.to_string(),
            event: self.set.get(name).expect("defined earlier").clone(),
        }
    }

    fn relate(&mut self, f: Term, witness: &str, g: Term) {
        self.set.relations.push(CommuteRelation {
            witness: witness.to_string(),
            f_label: f.label,
            g_label: g.label,
            f: f.event,
            g: g.event,
        });
    }

    /// `p_i - a_ij`.
    fn reduced(&self, i: usize, j: usize) -> Result<Term> {
        self.p(&[i])?.minus(&self.witness(&format!("a_{i}{j}")))
    }
}

/// Witnesses built from a consistent correlation table by the differences
/// `a_ij = p_i - p_ij`, `a_ijik = p_ij - p_ijk`, ..., for `n` in `2..=4`.
pub fn witnesses_from_correlations(table: &CorrelationTable) -> Result<WitnessSet> {
    let n = table.n();
    let report = check_bell_like(table)?;
    if !report.consistent {
        return Err(Error::ViolatedTable);
    }
    let mut b = Builder {
        table,
        set: WitnessSet {
            witnesses: Vec::new(),
            relations: Vec::new(),
        },
    };

    for i in 1..=n {
        for j in i + 1..=n {
            b.define(&format!("a_{i}{j}"), &[i], &[i, j])?;
        }
    }
    for i in 1..=n {
        for j in i + 1..=n {
            let (pi, pj) = (b.p(&[i])?, b.p(&[j])?);
            b.relate(pi, &format!("a_{i}{j}"), pj);
        }
    }

    match n {
        2 => {}
        3 => {
            b.define("a_1213", &[1, 2], &[1, 2, 3])?;
            for i in 1..=2 {
                let f = b.reduced(1, 2)?;
                let g = b.reduced(i, 3)?;
                b.relate(f, "a_1213", g);
            }
        }
        4 => {
            let triples = [(1, 2, 3), (1, 2, 4), (1, 3, 4), (2, 3, 4)];
            for (i, j, k) in triples {
                b.define(&format!("a_{i}{j}{i}{k}"), &[i, j], &[i, j, k])?;
            }
            for (i, j, k) in triples {
                let name = format!("a_{i}{j}{i}{k}");
                let (f, g) = (b.reduced(i, j)?, b.reduced(i, k)?);
                b.relate(f, &name, g);
                let (f, g) = (b.reduced(i, j)?, b.reduced(j, k)?);
                b.relate(f, &name, g);
            }

            let all = [1, 2, 3, 4];
            for (name, first, second) in [
                ("a_1234", (1, 2), (3, 4)),
                ("a_1324", (1, 3), (2, 4)),
                ("a_1423", (1, 4), (2, 3)),
            ] {
                b.define(name, &[first.0, first.1], &all)?;
                let f = b.reduced(first.0, first.1)?;
                let g = b.reduced(second.0, second.1)?;
                b.relate(f, name, g);
            }

            // ((p_i - a_ij) - a_ijik) = p_ijk
            let triple = |b: &Builder, i: usize, j: usize, k: usize| -> Result<Term> {
                b.reduced(i, j)?
                    .minus(&b.witness(&format!("a_{i}{j}{i}{k}")))
            };
            b.define("a_123124", &[1, 2, 3], &all)?;
            for (i, j) in [(1, 2), (1, 3), (2, 3)] {
                let f = triple(&b, 1, 2, 3)?;
                let g = triple(&b, i, j, 4)?;
                b.relate(f, "a_123124", g);
            }
            b.define("a_124134", &[1, 2, 4], &all)?;
            for i in 1..=2 {
                let f = triple(&b, 1, 2, 4)?;
                let g = triple(&b, i, 3, 4)?;
                b.relate(f, "a_124134", g);
            }
            b.define("a_134234", &[1, 3, 4], &all)?;
            let f = triple(&b, 1, 3, 4)?;
            let g = triple(&b, 2, 3, 4)?;
            b.relate(f, "a_134234", g);
        }
        _ => unreachable!("check_bell_like rejects other n"),
    }
    Ok(b.set)
}
