use std::ops::Index;

use super::subset::{SubsetIndex, MAX_N};
use crate::error::{Error, Result};
use crate::events::DEFAULT_EPS;

/// A real-valued function on the non-empty subsets of `{1..n}`, stored densely
/// in increasing bitmask order.
#[derive(Debug, Clone, PartialEq)]
pub struct SetFunction {
    n: usize,
    values: Vec<f64>,
}

fn check_n(n: usize) -> Result<()> {
    if n == 0 || n > MAX_N {
        Err(Error::UnsupportedN {
            n,
            allowed: "1..=20",
        })
    } else {
        Ok(())
    }
}

impl SetFunction {
    pub fn new(n: usize, values: Vec<f64>) -> Result<Self> {
        check_n(n)?;
        let expected = (1usize << n) - 1;
        if values.len() != expected {
            return Err(Error::SetFunctionLength {
                n,
                expected,
                got: values.len(),
            });
        }
        Ok(Self { n, values })
    }

    pub fn zeros(n: usize) -> Result<Self> {
        check_n(n)?;
        Ok(Self {
            n,
            values: vec![0.0; (1 << n) - 1],
        })
    }

    pub fn from_fn(n: usize, mut f: impl FnMut(SubsetIndex) -> f64) -> Result<Self> {
        check_n(n)?;
        Ok(Self {
            n,
            values: SubsetIndex::all(n).map(&mut f).collect(),
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn get(&self, subset: SubsetIndex) -> f64 {
        self.values[subset.offset()]
    }

    pub fn set(&mut self, subset: SubsetIndex, value: f64) {
        self.values[subset.offset()] = value;
    }

    pub fn iter(&self) -> impl Iterator<Item = (SubsetIndex, f64)> + '_ {
        SubsetIndex::all(self.n).zip(self.values.iter().copied())
    }

    /// Subsets with a non-zero coefficient, in bitmask order.
    pub fn support(&self) -> impl Iterator<Item = SubsetIndex> + '_ {
        self.iter().filter(|(_, v)| *v != 0.0).map(|(s, _)| s)
    }

    pub fn is_integral(&self) -> bool {
        self.values.iter().all(|v| v.fract() == 0.0)
    }

    pub fn max_abs_diff(&self, other: &SetFunction) -> f64 {
        self.values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }

    /// Human-readable linear form, e.g. `p1 + p2 - p12`.
    pub fn linear_form(&self) -> String {
        let mut out = String::new();
        for (subset, c) in self.iter().filter(|(_, c)| *c != 0.0) {
            let sign = if c < 0.0 { "-" } else { "+" };
            if out.is_empty() {
                if c < 0.0 {
                    out.push('-');
                }
            } else {
                out.push(' ');
                out.push_str(sign);
                out.push(' ');
            }
            let mag = c.abs();
            if mag != 1.0 {
                out.push_str(&format!("{mag}*"));
            }
            out.push('p');
            out.push_str(&subset.compact());
        }
        if out.is_empty() {
            out.push('0');
        }
        out
    }
}

impl Index<SubsetIndex> for SetFunction {
    type Output = f64;

    fn index(&self, subset: SubsetIndex) -> &f64 {
        &self.values[subset.offset()]
    }
}

/// Extends to a `2^n` array with a zero at the empty set.
fn padded(h: &SetFunction) -> Vec<f64> {
    let mut a = Vec::with_capacity(1 << h.n);
    a.push(0.0);
    a.extend_from_slice(&h.values);
    a
}

fn unpadded(n: usize, mut a: Vec<f64>) -> SetFunction {
    a.remove(0);
    SetFunction { n, values: a }
}

/// Subset-sum (zeta) transform: `g(I) = sum of h(J) over non-empty J ⊆ I`.
pub fn g_transform(h: &SetFunction) -> SetFunction {
    let mut a = padded(h);
    for bit in 0..h.n {
        let step = 1 << bit;
        for mask in 0..a.len() {
            if mask & step != 0 {
                a[mask] += a[mask ^ step];
            }
        }
    }
    unpadded(h.n, a)
}

/// Inverse of [`g_transform`]:
/// `f(I) = sum of h(J) * (-1)^|I \ J| over non-empty J ⊆ I`.
pub fn f_transform(h: &SetFunction) -> SetFunction {
    let mut a = padded(h);
    for bit in 0..h.n {
        let step = 1 << bit;
        for mask in 0..a.len() {
            if mask & step != 0 {
                a[mask] -= a[mask ^ step];
            }
        }
    }
    unpadded(h.n, a)
}

/// `f_I(J) = (-1)^|J \ I|` for `J ⊇ I`, zero otherwise.
pub fn elementary_valuation(subset: SubsetIndex) -> SetFunction {
    let n = subset.n();
    let i = subset.bits();
    SetFunction {
        n,
        values: SubsetIndex::all(n)
            .map(|j| {
                let j = j.bits();
                if i & !j == 0 {
                    sign((j & !i).count_ones())
                } else {
                    0.0
                }
            })
            .collect(),
    }
}

fn sign(exp: u32) -> f64 {
    if exp.is_multiple_of(2) {
        1.0
    } else {
        -1.0
    }
}

pub fn is_bell_valuation(f: &SetFunction) -> bool {
    is_bell_valuation_with_eps(f, DEFAULT_EPS)
}

/// A set function is a Bell valuation iff its subset sums all lie in `[0, 1]`.
pub fn is_bell_valuation_with_eps(f: &SetFunction, eps: f64) -> bool {
    g_transform(f)
        .values
        .iter()
        .all(|g| *g >= -eps && *g <= 1.0 + eps)
}

/// The defining condition checked literally: for each non-empty `I`, the sum
/// of `f(J)` over the non-empty `J ⊆ I` lies in `[0, 1]`. Quadratic in the
/// number of subsets; kept as a cross-check of [`is_bell_valuation`].
pub fn satisfies_bell_definition(f: &SetFunction, eps: f64) -> bool {
    SubsetIndex::all(f.n).all(|i| {
        let total: f64 = SubsetIndex::all(f.n)
            .filter(|j| j.is_subset_of(i))
            .map(|j| f.get(j))
            .sum();
        total >= -eps && total <= 1.0 + eps
    })
}

/// Sum of all elementary valuations: `f(I) = (-1)^(|I|+1)`.
pub fn sum_all_elementary(n: usize) -> Result<SetFunction> {
    SetFunction::from_fn(n, |i| sign(i.len() as u32 + 1))
}

/// Valuation generated by `h = 1 - δ_N`: `(-1)^(|J|+1)` off `N` and
/// `-1 - (-1)^n` at `N`.
pub fn complement_of_full(n: usize) -> Result<SetFunction> {
    let full = SubsetIndex::full(n)?;
    SetFunction::from_fn(n, |j| {
        if j == full {
            -1.0 - sign(n as u32)
        } else {
            sign(j.len() as u32 + 1)
        }
    })
}

/// Coefficients of `p_I + p_J - p_{I∪J}` for non-nested `I`, `J`.
pub fn pair_inequality(i: SubsetIndex, j: SubsetIndex) -> Result<SetFunction> {
    if i.n() != j.n() {
        return Err(Error::Precondition(format!(
            "subsets {i} and {j} are over different ground sets"
        )));
    }
    if i.is_subset_of(j) || j.is_subset_of(i) {
        return Err(Error::NestedSubsets(i, j));
    }
    let mut f = SetFunction::zeros(i.n())?;
    f.set(i, 1.0);
    f.set(j, 1.0);
    f.set(i.union(j), -1.0);
    Ok(f)
}

/// Default ceiling on `n` for 0/1 valuation enumeration.
pub const ENUMERATION_CAP: usize = 4;
/// Hard ceiling, even with the override (`2^63 - 1` valuations).
pub const ENUMERATION_MAX: usize = 6;

/// The integer Bell valuations `f_g` for every non-zero `g ∈ {0,1}^(2^n - 1)`,
/// in increasing order of `g` read as a binary number (bit `I - 1` is `g(I)`).
pub fn enumerate_01_valuations(n: usize, allow_override: bool) -> Result<ValuationIter> {
    if n == 0 || n > ENUMERATION_MAX {
        return Err(Error::UnsupportedN {
            n,
            allowed: "1..=6",
        });
    }
    if n > ENUMERATION_CAP && !allow_override {
        return Err(Error::EnumerationCap(n));
    }
    Ok(ValuationIter {
        n,
        next: 1,
        end: 1u64 << ((1u32 << n) - 1),
    })
}

/// Number of non-zero 0/1 valuations: `2^(2^n - 1) - 1`.
pub fn valuation_count(n: usize) -> Result<u64> {
    if n == 0 || n > ENUMERATION_MAX {
        return Err(Error::UnsupportedN {
            n,
            allowed: "1..=6",
        });
    }
    Ok((1u64 << ((1u32 << n) - 1)) - 1)
}

#[derive(Debug, Clone)]
pub struct ValuationIter {
    n: usize,
    next: u64,
    end: u64,
}

impl ValuationIter {
    /// The `g` that generates the valuation with the given 0-based position.
    pub fn generator(n: usize, position: u64) -> SetFunction {
        let code = position + 1;
        SetFunction {
            n,
            values: (0..(1usize << n) - 1)
                .map(|k| (code >> k & 1) as f64)
                .collect(),
        }
    }
}

impl Iterator for ValuationIter {
    type Item = SetFunction;

    fn next(&mut self) -> Option<SetFunction> {
        if self.next >= self.end {
            return None;
        }
        let g = Self::generator(self.n, self.next - 1);
        self.next += 1;
        Some(f_transform(&g))
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let left = usize::try_from(self.end - self.next).ok();
        (left.unwrap_or(usize::MAX), left)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn s(idx: &[usize], n: usize) -> SubsetIndex {
        SubsetIndex::from_indices(idx, n).unwrap()
    }

    // Direct transcriptions of the sums, independent of the in-place passes.
    fn g_direct(h: &SetFunction) -> SetFunction {
        SetFunction::from_fn(h.n(), |i| {
            SubsetIndex::all(h.n())
                .filter(|j| j.is_subset_of(i))
                .map(|j| h.get(j))
                .sum()
        })
        .unwrap()
    }

    fn f_direct(h: &SetFunction) -> SetFunction {
        // f_h = sum over J of h(J) * f_J
        let mut out = SetFunction::zeros(h.n()).unwrap();
        for (j, hj) in h.iter() {
            let fj = elementary_valuation(j);
            for (i, v) in fj.iter() {
                let cur = out.get(i);
                out.set(i, cur + hj * v);
            }
        }
        out
    }

    #[test]
    fn elementary_valuation_examples() {
        let f = elementary_valuation(s(&[1], 2));
        assert_eq!(f.values(), &[1.0, 0.0, -1.0]);
        let f = elementary_valuation(s(&[1, 2, 3], 3));
        assert_eq!(f.values(), &[0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 1.0]);
        for n in 1..=5 {
            for i in SubsetIndex::all(n) {
                assert!(is_bell_valuation(&elementary_valuation(i)));
            }
        }
    }

    #[test]
    fn g_transform_examples() {
        let mut h = SetFunction::zeros(2).unwrap();
        h.set(s(&[1], 2), 1.0);
        assert_eq!(g_transform(&h).values(), &[1.0, 0.0, 1.0]);
        let zero = SetFunction::zeros(3).unwrap();
        assert_eq!(g_transform(&zero), zero);
    }

    #[test]
    fn worked_example_n3() {
        // f = 1 on {1}, {2,3}; -1 on {1,2}, {1,3}
        let mut f = SetFunction::zeros(3).unwrap();
        f.set(s(&[1], 3), 1.0);
        f.set(s(&[2, 3], 3), 1.0);
        f.set(s(&[1, 2], 3), -1.0);
        f.set(s(&[1, 3], 3), -1.0);
        let g = g_transform(&f);
        for i in SubsetIndex::all(3) {
            let expected = if i == s(&[1], 3) || i == s(&[2, 3], 3) {
                1.0
            } else {
                0.0
            };
            assert_eq!(g.get(i), expected, "g at {i}");
        }
        assert_eq!(g, g_direct(&f));
        assert!(is_bell_valuation(&f));
    }

    #[test]
    fn f_transform_examples() {
        let mut h = SetFunction::zeros(2).unwrap();
        h.set(s(&[1], 2), 1.0);
        assert_eq!(f_transform(&h), elementary_valuation(s(&[1], 2)));
        for n in 1..=6 {
            let ones = SetFunction::from_fn(n, |_| 1.0).unwrap();
            assert_eq!(f_transform(&ones), sum_all_elementary(n).unwrap());
        }
    }

    #[test]
    fn bell_valuation_rejects_large_coefficient() {
        let mut f = SetFunction::zeros(2).unwrap();
        f.set(s(&[1], 2), 2.0);
        assert!(!is_bell_valuation(&f));
        assert!(!satisfies_bell_definition(&f, DEFAULT_EPS));
    }

    #[test]
    fn sum_all_elementary_examples() {
        assert_eq!(sum_all_elementary(1).unwrap().values(), &[1.0]);
        assert_eq!(sum_all_elementary(2).unwrap().values(), &[1.0, 1.0, -1.0]);
        let f3 = sum_all_elementary(3).unwrap();
        assert_eq!(f3.linear_form(), "p1 + p2 - p12 + p3 - p13 - p23 + p123");
    }

    #[test]
    fn complement_of_full_examples() {
        assert_eq!(complement_of_full(2).unwrap().values(), &[1.0, 1.0, -2.0]);
        let f3 = complement_of_full(3).unwrap();
        assert_eq!(f3.get(SubsetIndex::full(3).unwrap()), 0.0);
        for n in 1..=6 {
            let full = SubsetIndex::full(n).unwrap();
            let h = SetFunction::from_fn(n, |i| if i == full { 0.0 } else { 1.0 }).unwrap();
            assert_eq!(f_transform(&h), complement_of_full(n).unwrap());
            assert_eq!(f_direct(&h), complement_of_full(n).unwrap());
        }
    }

    #[test]
    fn pair_inequality_examples() {
        let f = pair_inequality(s(&[1], 2), s(&[2], 2)).unwrap();
        assert_eq!(f, sum_all_elementary(2).unwrap());
        let f = pair_inequality(s(&[1, 2], 4), s(&[3, 4], 4)).unwrap();
        assert_eq!(f.linear_form(), "p12 + p34 - p1234");
        assert!(matches!(
            pair_inequality(s(&[1], 2), s(&[1, 2], 2)),
            Err(Error::NestedSubsets(..))
        ));
    }

    #[test]
    fn pair_inequality_g_is_indicator_of_covering_sets() {
        for n in 2..=5 {
            for i in SubsetIndex::all(n) {
                for j in SubsetIndex::all(n) {
                    let Ok(f) = pair_inequality(i, j) else {
                        continue;
                    };
                    let g = g_transform(&f);
                    for k in SubsetIndex::all(n) {
                        let covers = i.is_subset_of(k) || j.is_subset_of(k);
                        assert_eq!(g.get(k), if covers { 1.0 } else { 0.0 });
                    }
                    assert!(is_bell_valuation(&f));
                }
            }
        }
    }

    #[test]
    fn enumeration_counts_and_validity() {
        assert_eq!(enumerate_01_valuations(1, false).unwrap().count(), 1);
        assert_eq!(enumerate_01_valuations(2, false).unwrap().count(), 7);
        assert_eq!(enumerate_01_valuations(3, false).unwrap().count(), 127);
        assert_eq!(valuation_count(4).unwrap(), 32_767);
        for f in enumerate_01_valuations(3, false).unwrap() {
            assert!(f.is_integral());
            assert!(is_bell_valuation(&f));
            assert!(satisfies_bell_definition(&f, DEFAULT_EPS));
        }
        assert_eq!(
            enumerate_01_valuations(5, false).unwrap_err(),
            Error::EnumerationCap(5)
        );
        assert!(enumerate_01_valuations(5, true).is_ok());
        assert!(enumerate_01_valuations(0, true).is_err());
        assert!(enumerate_01_valuations(7, true).is_err());
    }

    #[test]
    fn enumeration_order_starts_with_singleton_indicator() {
        let first = enumerate_01_valuations(2, false).unwrap().next().unwrap();
        // g = indicator of {1}
        assert_eq!(first, elementary_valuation(s(&[1], 2)));
        let last = enumerate_01_valuations(2, false).unwrap().last().unwrap();
        assert_eq!(last, sum_all_elementary(2).unwrap());
    }

    #[test]
    fn alternating_sum_is_delta() {
        for n in 0..=10u32 {
            let total: i64 = (0u32..1 << n)
                .map(|j| if j.count_ones() % 2 == 0 { 1 } else { -1 })
                .sum();
            assert_eq!(total, if n == 0 { 1 } else { 0 });
            if n > 0 {
                let even = (0u32..1 << n).filter(|j| j.count_ones() % 2 == 0).count();
                assert_eq!(even * 2, 1 << n);
            }
        }
    }

    fn arb_h(n: usize) -> impl Strategy<Value = SetFunction> {
        prop::collection::vec(-3.0f64..3.0, (1 << n) - 1)
            .prop_map(move |v| SetFunction::new(n, v).unwrap())
    }

    proptest! {
        #[test]
        fn transforms_match_direct_sums(h in (1usize..=4).prop_flat_map(arb_h)) {
            prop_assert!(g_transform(&h).max_abs_diff(&g_direct(&h)) <= 1e-12);
            prop_assert!(f_transform(&h).max_abs_diff(&f_direct(&h)) <= 1e-12);
        }

        #[test]
        fn transforms_are_mutually_inverse(h in (1usize..=4).prop_flat_map(arb_h)) {
            prop_assert!(g_transform(&f_transform(&h)).max_abs_diff(&h) <= 1e-9);
            prop_assert!(f_transform(&g_transform(&h)).max_abs_diff(&h) <= 1e-9);
        }

        #[test]
        fn bell_check_paths_agree(h in (1usize..=4).prop_flat_map(|n|
            prop::collection::vec(-1i32..=1, (1 << n) - 1)
                .prop_map(move |v| SetFunction::new(n, v.into_iter().map(f64::from).collect()).unwrap()))) {
            prop_assert_eq!(is_bell_valuation(&h), satisfies_bell_definition(&h, DEFAULT_EPS));
        }

        #[test]
        fn integrality_is_preserved_both_ways(
            v in (1usize..=4).prop_flat_map(|n| prop::collection::vec(-4i32..=4, (1 << n) - 1)),
            frac in 0.1f64..0.9,
            at in 0usize..15,
        ) {
            let n = ((v.len() + 1) as f64).log2() as usize;
            let h = SetFunction::new(n, v.iter().map(|x| f64::from(*x)).collect()).unwrap();
            prop_assert!(g_transform(&h).is_integral());
            prop_assert!(f_transform(&h).is_integral());
            let mut broken = h.clone();
            let k = SubsetIndex::all(n).nth(at % v.len()).unwrap();
            broken.set(k, h.get(k) + frac);
            prop_assert!(!g_transform(&broken).is_integral());
            prop_assert!(!f_transform(&broken).is_integral());
        }
    }
}
