use super::set_function::{is_bell_valuation, pair_inequality, SetFunction};
use super::subset::SubsetIndex;
use super::table::CorrelationTable;
use crate::error::{Error, Result};

/// Outcome of evaluating `0 <= Σ f(I) p_I(s) <= 1` at every state.
#[derive(Debug, Clone, PartialEq)]
pub struct InequalityResult {
    pub coefficients: SetFunction,
    pub per_state_value: Vec<f64>,
    pub min_value: f64,
    pub max_value: f64,
    pub violated: bool,
    /// State with the largest excursion outside `[0, 1]`, if any.
    pub violating_state: Option<String>,
}

impl InequalityResult {
    pub fn label(&self) -> String {
        format!("0 <= {} <= 1", self.coefficients.linear_form())
    }
}

pub fn evaluate_inequality(f: &SetFunction, table: &CorrelationTable) -> Result<InequalityResult> {
    if f.n() != table.n() {
        return Err(Error::ArityMismatch {
            function: f.n(),
            table: table.n(),
        });
    }
    let missing = table.missing_for(f);
    if !missing.is_empty() {
        return Err(Error::MissingCorrelations(missing));
    }
    let space = table.space();
    let eps = space.eps();
    let mut per_state_value = vec![0.0; space.len()];
    for (subset, c) in f.iter().filter(|(_, c)| *c != 0.0) {
        let p = table.require(subset)?;
        for (acc, v) in per_state_value.iter_mut().zip(p.values()) {
            *acc += c * v;
        }
    }
    let min_value = per_state_value
        .iter()
        .copied()
        .fold(f64::INFINITY, f64::min);
    let max_value = per_state_value
        .iter()
        .copied()
        .fold(f64::NEG_INFINITY, f64::max);
    let mut worst: Option<(usize, f64)> = None;
    for (k, v) in per_state_value.iter().enumerate() {
        let excess = (v - 1.0).max(-v);
        let out_of_band = *v > 1.0 + eps || *v < -eps;
        if out_of_band && worst.is_none_or(|(_, w)| excess > w) {
            worst = Some((k, excess));
        }
    }
    Ok(InequalityResult {
        coefficients: f.clone(),
        per_state_value,
        min_value,
        max_value,
        violated: worst.is_some(),
        violating_state: worst.map(|(k, _)| space.label(k).to_string()),
    })
}

fn sets(n: usize, pairs: &[(&[usize], &[usize])]) -> Vec<(SubsetIndex, SubsetIndex)> {
    pairs
        .iter()
        .map(|(i, j)| {
            (
                SubsetIndex::from_indices(i, n).expect("static index set"),
                SubsetIndex::from_indices(j, n).expect("static index set"),
            )
        })
        .collect()
}

/// The index pairs `(I, J)` of the inequalities `p_I + p_J - p_{I∪J} <= 1`
/// that characterise Boolean families of 2 to 4 correlated events, in the
/// order of their families.
pub fn bell_like_pairs(n: usize) -> Result<Vec<(SubsetIndex, SubsetIndex)>> {
    let pairs: &[(&[usize], &[usize])] = match n {
        2 => &[(&[1], &[2])],
        3 => &[
            (&[1], &[2]),
            (&[1], &[3]),
            (&[2], &[3]),
            (&[1, 2], &[1, 3]),
            (&[1, 2], &[2, 3]),
        ],
        4 => &[
            // p_i + p_j - p_ij
            (&[1], &[2]),
            (&[1], &[3]),
            (&[1], &[4]),
            (&[2], &[3]),
            (&[2], &[4]),
            (&[3], &[4]),
            // p_ij + p_ik - p_ijk
            (&[1, 2], &[1, 3]),
            (&[1, 2], &[1, 4]),
            (&[1, 3], &[1, 4]),
            (&[2, 3], &[2, 4]),
            // p_ij + p_jk - p_ijk
            (&[1, 2], &[2, 3]),
            (&[1, 2], &[2, 4]),
            (&[1, 3], &[3, 4]),
            (&[2, 3], &[3, 4]),
            // complementary pairs against p_1234
            (&[1, 2], &[3, 4]),
            (&[1, 3], &[2, 4]),
            (&[1, 4], &[2, 3]),
            // p_123 + p_ij4 - p_1234
            (&[1, 2, 3], &[1, 2, 4]),
            (&[1, 2, 3], &[1, 3, 4]),
            (&[1, 2, 3], &[2, 3, 4]),
            // p_124 + p_i34 - p_1234
            (&[1, 2, 4], &[1, 3, 4]),
            (&[1, 2, 4], &[2, 3, 4]),
            (&[1, 3, 4], &[2, 3, 4]),
        ],
        _ => {
            return Err(Error::UnsupportedN {
                n,
                allowed: "2..=4",
            })
        }
    };
    Ok(sets(n, pairs))
}

/// Subsets a table must supply for [`check_bell_like`].
pub fn bell_like_requirements(n: usize) -> Result<Vec<SubsetIndex>> {
    let mut needed: Vec<SubsetIndex> = bell_like_pairs(n)?
        .into_iter()
        .flat_map(|(i, j)| [i, j, i.union(j)])
        .collect();
    needed.sort();
    needed.dedup();
    Ok(needed)
}

#[derive(Debug, Clone, PartialEq)]
pub struct BellLikeReport {
    pub results: Vec<InequalityResult>,
    /// No inequality violated. This certifies only the absence of an
    /// obstruction; the characterisation is exact when the table entries are
    /// genuine infima.
    pub consistent: bool,
}

pub fn check_bell_like(table: &CorrelationTable) -> Result<BellLikeReport> {
    let pairs = bell_like_pairs(table.n())?;
    let missing: Vec<SubsetIndex> = bell_like_requirements(table.n())?
        .into_iter()
        .filter(|s| table.get(*s).is_none())
        .collect();
    if !missing.is_empty() {
        return Err(Error::MissingCorrelations(missing));
    }
    let mut results = Vec::with_capacity(pairs.len());
    for (i, j) in pairs {
        let f = pair_inequality(i, j)?;
        debug_assert!(is_bell_valuation(&f));
        results.push(evaluate_inequality(&f, table)?);
    }
    let consistent = results.iter().all(|r| !r.violated);
    Ok(BellLikeReport {
        results,
        consistent,
    })
}
