//! Brute-force Boolean test used to cross-check the minima criterion.
//!
//! A family is Boolean iff some finite set of pairwise orthogonal, non-zero
//! members sums to 1 and every family member is the sum of a subset of them
//! (the atoms of a finite Boolean subalgebra). The search looks for such a
//! decomposition directly and never consults pointwise minima.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::events::{Event, EventFamily};

pub const DEFAULT_ORACLE_BUDGET: u64 = 1_000_000;
pub const MAX_ORACLE_MEMBERS: usize = 4096;

#[derive(Debug, Clone, PartialEq)]
pub struct OracleOutcome {
    pub boolean: bool,
    pub atoms: Option<Vec<Event>>,
    pub nodes: u64,
}

struct Budget {
    limit: u64,
    used: u64,
}

impl Budget {
    fn tick(&mut self) -> Result<()> {
        self.used += 1;
        if self.used > self.limit {
            Err(Error::BudgetExceeded(self.limit))
        } else {
            Ok(())
        }
    }
}

pub fn boolean_oracle(
    members: &[Event],
    family: &EventFamily,
    budget: u64,
) -> Result<OracleOutcome> {
    if members.len() > MAX_ORACLE_MEMBERS {
        return Err(Error::Precondition(format!(
            "oracle accepts at most {MAX_ORACLE_MEMBERS} members, got {}",
            members.len()
        )));
    }
    for (k, e) in family.events().iter().enumerate() {
        if !members.iter().any(|m| m.approx_eq(e)) {
            return Err(Error::NotInLogic(k));
        }
    }
    let mut budget = Budget {
        limit: budget,
        used: 0,
    };
    let atoms = if members.iter().all(Event::is_two_valued) {
        partition_search(members, family, &mut budget)?
    } else {
        orthogonal_search(members, family, &mut budget)?
    };
    Ok(OracleOutcome {
        boolean: atoms.is_some(),
        atoms,
        nodes: budget.used,
    })
}

/// Two-valued case: atoms must refine the partition of states by their
/// membership pattern across the family, so each candidate block lies in one
/// cell. Backtrack over exact covers of the states by such blocks.
fn partition_search(
    members: &[Event],
    family: &EventFamily,
    budget: &mut Budget,
) -> Result<Option<Vec<Event>>> {
    let states = family.space().len();
    let fam: Vec<Vec<bool>> = family
        .events()
        .iter()
        .map(|e| e.two_valued_pattern().expect("family members are members"))
        .collect();
    let mut cells: BTreeMap<Vec<bool>, usize> = BTreeMap::new();
    let cell_of: Vec<usize> = (0..states)
        .map(|s| {
            let signature: Vec<bool> = fam.iter().map(|p| p[s]).collect();
            let next = cells.len();
            *cells.entry(signature).or_insert(next)
        })
        .collect();

    let mut blocks: Vec<(Vec<usize>, &Event)> = Vec::new();
    let mut seen: Vec<Vec<bool>> = Vec::new();
    for m in members {
        let p = m.two_valued_pattern().expect("checked two-valued");
        if seen.contains(&p) {
            continue;
        }
        seen.push(p.clone());
        let support: Vec<usize> = (0..states).filter(|&s| p[s]).collect();
        let Some(&first) = support.first() else {
            continue;
        };
        if support.iter().all(|&s| cell_of[s] == cell_of[first]) {
            blocks.push((support, m));
        }
    }
    let by_state: Vec<Vec<usize>> = (0..states)
        .map(|s| {
            (0..blocks.len())
                .filter(|&b| blocks[b].0.contains(&s))
                .collect()
        })
        .collect();

    let mut covered = vec![false; states];
    let mut chosen = Vec::new();
    if cover(&blocks, &by_state, &mut covered, &mut chosen, budget)? {
        Ok(Some(chosen.iter().map(|&b| blocks[b].1.clone()).collect()))
    } else {
        Ok(None)
    }
}

fn cover(
    blocks: &[(Vec<usize>, &Event)],
    by_state: &[Vec<usize>],
    covered: &mut [bool],
    chosen: &mut Vec<usize>,
    budget: &mut Budget,
) -> Result<bool> {
    budget.tick()?;
    let Some(s) = covered.iter().position(|c| !c) else {
        return Ok(true);
    };
    for &b in &by_state[s] {
        let support = &blocks[b].0;
        if support.iter().any(|&t| covered[t]) {
            continue;
        }
        for &t in support {
            covered[t] = true;
        }
        chosen.push(b);
        if cover(blocks, by_state, covered, chosen, budget)? {
            return Ok(true);
        }
        chosen.pop();
        for &t in support {
            covered[t] = false;
        }
    }
    Ok(false)
}

/// General case: enumerate sets of pairwise orthogonal non-zero members in
/// index order until one sums to 1 and represents every family member.
fn orthogonal_search(
    members: &[Event],
    family: &EventFamily,
    budget: &mut Budget,
) -> Result<Option<Vec<Event>>> {
    let mut candidates: Vec<&Event> = Vec::new();
    for m in members {
        if !m.is_zero() && !candidates.iter().any(|c| c.approx_eq(m)) {
            candidates.push(m);
        }
    }
    let states = family.space().len();
    let mut chosen = Vec::new();
    let mut sum = vec![0.0; states];
    extend(&candidates, 0, &mut chosen, &mut sum, family, budget)
        .map(|found| found.then(|| chosen.iter().map(|&k| candidates[k].clone()).collect()))
}

fn extend(
    candidates: &[&Event],
    start: usize,
    chosen: &mut Vec<usize>,
    sum: &mut Vec<f64>,
    family: &EventFamily,
    budget: &mut Budget,
) -> Result<bool> {
    budget.tick()?;
    let eps = family.space().eps();
    let slack = eps * (chosen.len().max(1) as f64);
    if sum.iter().all(|v| (v - 1.0).abs() <= slack) {
        return represents_family(candidates, chosen, family, budget);
    }
    for k in start..candidates.len() {
        let a = candidates[k];
        if !(0..sum.len()).all(|s| a.value(s) + sum[s] <= 1.0 + slack) {
            continue;
        }
        let pairwise = chosen
            .iter()
            .all(|&c| candidates[c].orthogonal_unchecked(a));
        if !pairwise {
            continue;
        }
        for (s, v) in sum.iter_mut().enumerate() {
            *v += a.value(s);
        }
        chosen.push(k);
        if extend(candidates, k + 1, chosen, sum, family, budget)? {
            return Ok(true);
        }
        chosen.pop();
        for (s, v) in sum.iter_mut().enumerate() {
            *v -= a.value(s);
        }
    }
    Ok(false)
}

fn represents_family(
    candidates: &[&Event],
    chosen: &[usize],
    family: &EventFamily,
    budget: &mut Budget,
) -> Result<bool> {
    let eps = family.space().eps() * (chosen.len().max(1) as f64);
    for target in family.events() {
        let mut found = false;
        for mask in 0u64..(1u64 << chosen.len().min(63)) {
            budget.tick()?;
            let ok = (0..target.len()).all(|s| {
                let v: f64 = chosen
                    .iter()
                    .enumerate()
                    .filter(|(bit, _)| mask >> bit & 1 == 1)
                    .map(|(_, &c)| candidates[c].value(s))
                    .sum();
                (v - target.value(s)).abs() <= eps
            });
            if ok {
                found = true;
                break;
            }
        }
        if !found {
            return Ok(false);
        }
    }
    Ok(true)
}
