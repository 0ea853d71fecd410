use std::sync::Arc;

use super::set_function::SetFunction;
use super::subset::{SubsetIndex, MAX_N};
use crate::error::{Error, Result};
use crate::events::{Event, StateSpace};

/// Measured correlations `p_I` for non-empty `I ⊆ {1..n}`.
///
/// Singletons are mandatory; larger subsets may be absent. Present entries
/// must be antitone: `p_I <= p_J` whenever `J ⊆ I`.
#[derive(Debug, Clone)]
pub struct CorrelationTable {
    n: usize,
    space: Arc<StateSpace>,
    entries: Vec<Option<Event>>,
}

impl CorrelationTable {
    pub fn new(
        space: &Arc<StateSpace>,
        n: usize,
        entries: impl IntoIterator<Item = (SubsetIndex, Event)>,
    ) -> Result<Self> {
        if n == 0 || n > MAX_N {
            return Err(Error::UnsupportedN {
                n,
                allowed: "1..=20",
            });
        }
        let mut slots: Vec<Option<Event>> = vec![None; (1 << n) - 1];
        for (subset, event) in entries {
            if subset.n() != n {
                return Err(Error::ArityMismatch {
                    function: subset.n(),
                    table: n,
                });
            }
            if !(Arc::ptr_eq(event.space(), space) || **event.space() == **space) {
                return Err(Error::SpaceMismatch);
            }
            slots[subset.offset()] = Some(event);
        }
        let missing: Vec<SubsetIndex> = (1..=n)
            .map(|i| SubsetIndex::from_bits_unchecked(1 << (i - 1), n))
            .filter(|s| slots[s.offset()].is_none())
            .collect();
        if !missing.is_empty() {
            return Err(Error::MissingCorrelations(missing));
        }
        let table = Self {
            n,
            space: Arc::clone(space),
            entries: slots,
        };
        table.check_monotone()?;
        Ok(table)
    }

    fn check_monotone(&self) -> Result<()> {
        let eps = self.space.eps();
        for larger in SubsetIndex::all(self.n) {
            let Some(big) = self.get(larger) else {
                continue;
            };
            for smaller in SubsetIndex::all(self.n) {
                if smaller == larger || !smaller.is_subset_of(larger) {
                    continue;
                }
                let Some(small) = self.get(smaller) else {
                    continue;
                };
                if let Some(k) =
                    (0..self.space.len()).find(|&k| big.value(k) > small.value(k) + eps)
                {
                    return Err(Error::NonMonotone {
                        larger,
                        smaller,
                        state: self.space.label(k).to_string(),
                    });
                }
            }
        }
        Ok(())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn space(&self) -> &Arc<StateSpace> {
        &self.space
    }

    pub fn get(&self, subset: SubsetIndex) -> Option<&Event> {
        self.entries.get(subset.offset()).and_then(Option::as_ref)
    }

    /// Base event `p_i` (1-based).
    pub fn base(&self, i: usize) -> &Event {
        self.entries[(1 << (i - 1)) - 1]
            .as_ref()
            .expect("singletons are validated at construction")
    }

    pub(crate) fn require(&self, subset: SubsetIndex) -> Result<&Event> {
        self.get(subset)
            .ok_or_else(|| Error::MissingCorrelations(vec![subset]))
    }

    /// Present entries in bitmask order.
    pub fn entries(&self) -> impl Iterator<Item = (SubsetIndex, &Event)> + '_ {
        SubsetIndex::all(self.n).filter_map(|s| self.get(s).map(|e| (s, e)))
    }

    pub fn is_complete(&self) -> bool {
        self.entries.iter().all(Option::is_some)
    }

    /// Subsets in the support of `f` with no entry.
    pub fn missing_for(&self, f: &SetFunction) -> Vec<SubsetIndex> {
        f.support().filter(|s| self.get(*s).is_none()).collect()
    }
}
