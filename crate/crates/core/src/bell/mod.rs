//! Bell-type inequalities on correlation tables.
//!
//! Coefficient functions on the non-empty subsets of `{1..n}` generate
//! inequalities `0 <= Σ f(I) p_I <= 1`. Such an inequality holds in every
//! classical (Boolean) model exactly when `f` is a Bell valuation, i.e. all of
//! its subset sums lie in `[0, 1]`. The subset-sum transform and its Möbius
//! inverse give a bijection between valuations and their `[0, 1]`-valued
//! generators.

mod inequality;
mod set_function;
mod subset;
mod table;
mod witness;

pub use inequality::{
    bell_like_pairs, bell_like_requirements, check_bell_like, evaluate_inequality, BellLikeReport,
    InequalityResult,
};
pub use set_function::{
    complement_of_full, elementary_valuation, enumerate_01_valuations, f_transform, g_transform,
    is_bell_valuation, is_bell_valuation_with_eps, pair_inequality, satisfies_bell_definition,
    sum_all_elementary, valuation_count, SetFunction, ValuationIter, ENUMERATION_CAP,
    ENUMERATION_MAX,
};
pub use subset::{SubsetIndex, MAX_N};
pub use table::CorrelationTable;
pub use witness::{witnesses_from_correlations, CommuteRelation, WitnessSet};
