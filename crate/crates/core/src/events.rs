//! Numerical events over a finite, ordered state space.
//!
//! An [`Event`] is a function `S -> [0, 1]`, stored as one value per state in
//! the order fixed by its [`StateSpace`]. All order relations and partial
//! operations are pointwise and use the tolerance carried by the state space.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

/// Default comparison tolerance for measured values.
pub const DEFAULT_EPS: f64 = 1e-9;

/// Ordered, labelled set of states together with the comparison tolerance
/// used by every event defined over it.
#[derive(Debug, Clone, PartialEq)]
pub struct StateSpace {
    labels: Vec<String>,
    eps: f64,
}

impl StateSpace {
    pub fn new<I, S>(labels: I) -> Result<Arc<Self>>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        Self::with_eps(labels, DEFAULT_EPS)
    }

    pub fn with_eps<I, S>(labels: I, eps: f64) -> Result<Arc<Self>>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        if !(eps.is_finite() && eps > 0.0) {
            return Err(Error::InvalidTolerance(eps));
        }
        let labels: Vec<String> = labels.into_iter().map(Into::into).collect();
        if labels.is_empty() {
            return Err(Error::EmptyStateSpace);
        }
        for (k, label) in labels.iter().enumerate() {
            if labels[..k].contains(label) {
                return Err(Error::DuplicateState(label.clone()));
            }
        }
        Ok(Arc::new(Self { labels, eps }))
    }

    /// States labelled `s1, s2, ...`.
    pub fn numbered(size: usize) -> Result<Arc<Self>> {
        Self::new((1..=size).map(|k| format!("s{k}")))
    }

    pub fn numbered_with_eps(size: usize, eps: f64) -> Result<Arc<Self>> {
        Self::with_eps((1..=size).map(|k| format!("s{k}")), eps)
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, state: usize) -> &str {
        &self.labels[state]
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    pub fn eps(&self) -> f64 {
        self.eps
    }
}

/// A numerical event: one probability per state.
///
/// The complement is precomputed and shared, so `complement` is an exact
/// involution regardless of floating-point rounding.
#[derive(Clone)]
pub struct Event {
    values: Arc<[f64]>,
    complement: Arc<[f64]>,
    space: Arc<StateSpace>,
}

impl Event {
    /// Ingests measured values. Values within `eps` outside `[0, 1]` are
    /// clamped; anything further out (or NaN) is rejected.
    pub fn new(space: &Arc<StateSpace>, values: Vec<f64>) -> Result<Self> {
        if values.len() != space.len() {
            return Err(Error::LengthMismatch {
                expected: space.len(),
                got: values.len(),
            });
        }
        let eps = space.eps();
        let mut values = values;
        for (k, v) in values.iter_mut().enumerate() {
            if !(*v >= -eps && *v <= 1.0 + eps) {
                return Err(Error::ValueOutOfRange {
                    state: space.label(k).to_string(),
                    value: *v,
                });
            }
            *v = v.clamp(0.0, 1.0);
        }
        Ok(Self::from_clamped(space, values))
    }

    fn from_clamped(space: &Arc<StateSpace>, values: Vec<f64>) -> Self {
        let complement: Vec<f64> = values.iter().map(|v| 1.0 - v).collect();
        Self {
            values: values.into(),
            complement: complement.into(),
            space: Arc::clone(space),
        }
    }

    fn clamped(space: &Arc<StateSpace>, values: impl Iterator<Item = f64>) -> Self {
        Self::from_clamped(space, values.map(|v| v.clamp(0.0, 1.0)).collect())
    }

    pub fn zero(space: &Arc<StateSpace>) -> Self {
        Self::from_clamped(space, vec![0.0; space.len()])
    }

    pub fn one(space: &Arc<StateSpace>) -> Self {
        Self::from_clamped(space, vec![1.0; space.len()])
    }

    /// Two-valued event from a 0/1 pattern.
    pub fn indicator(space: &Arc<StateSpace>, pattern: &[bool]) -> Result<Self> {
        Self::new(
            space,
            pattern.iter().map(|&b| if b { 1.0 } else { 0.0 }).collect(),
        )
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn value(&self, state: usize) -> f64 {
        self.values[state]
    }

    pub fn space(&self) -> &Arc<StateSpace> {
        &self.space
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    fn eps(&self) -> f64 {
        self.space.eps()
    }

    pub fn same_space(&self, other: &Event) -> bool {
        Arc::ptr_eq(&self.space, &other.space) || *self.space == *other.space
    }

    fn check_space(&self, other: &Event) -> Result<()> {
        if self.same_space(other) {
            Ok(())
        } else {
            Err(Error::SpaceMismatch)
        }
    }

    /// `1 - p`.
    pub fn complement(&self) -> Event {
        Event {
            values: Arc::clone(&self.complement),
            complement: Arc::clone(&self.values),
            space: Arc::clone(&self.space),
        }
    }

    pub(crate) fn leq_unchecked(&self, other: &Event) -> bool {
        let eps = self.eps();
        self.values
            .iter()
            .zip(other.values.iter())
            .all(|(p, q)| *p <= q + eps)
    }

    /// Pointwise order `p(s) <= q(s)` for every state.
    pub fn leq(&self, other: &Event) -> Result<bool> {
        self.check_space(other)?;
        Ok(self.leq_unchecked(other))
    }

    pub(crate) fn orthogonal_unchecked(&self, other: &Event) -> bool {
        self.leq_unchecked(&other.complement())
    }

    /// `p <= 1 - q`.
    pub fn orthogonal(&self, other: &Event) -> Result<bool> {
        self.check_space(other)?;
        Ok(self.orthogonal_unchecked(other))
    }

    /// Sum of two orthogonal events.
    pub fn ortho_sum(&self, other: &Event) -> Result<Event> {
        if !self.orthogonal(other)? {
            return Err(Error::NotOrthogonal);
        }
        Ok(Self::clamped(
            &self.space,
            self.values
                .iter()
                .zip(other.values.iter())
                .map(|(p, q)| p + q),
        ))
    }

    /// `self - lower`, defined when `lower <= self`.
    pub fn difference(&self, lower: &Event) -> Result<Event> {
        if !lower.leq(self)? {
            return Err(Error::NotComparable);
        }
        Ok(Self::clamped(
            &self.space,
            self.values
                .iter()
                .zip(lower.values.iter())
                .map(|(q, p)| q - p),
        ))
    }

    /// Neither `p <= p'` nor `p' <= p`.
    pub fn is_proper(&self) -> bool {
        let c = self.complement();
        !self.leq_unchecked(&c) && !c.leq_unchecked(self)
    }

    pub fn is_two_valued(&self) -> bool {
        self.two_valued_pattern().is_some()
    }

    /// The 0/1 pattern of a two-valued event, rounding within tolerance.
    pub fn two_valued_pattern(&self) -> Option<Vec<bool>> {
        let eps = self.eps();
        self.values
            .iter()
            .map(|&v| {
                if v <= eps {
                    Some(false)
                } else if v >= 1.0 - eps {
                    Some(true)
                } else {
                    None
                }
            })
            .collect()
    }

    /// Pointwise agreement within tolerance.
    pub fn approx_eq(&self, other: &Event) -> bool {
        let eps = self.eps();
        self.same_space(other)
            && self
                .values
                .iter()
                .zip(other.values.iter())
                .all(|(p, q)| (p - q).abs() <= eps)
    }

    pub fn is_zero(&self) -> bool {
        let eps = self.eps();
        self.values.iter().all(|v| *v <= eps)
    }

    pub fn is_one(&self) -> bool {
        let eps = self.eps();
        self.values.iter().all(|v| *v >= 1.0 - eps)
    }
}

impl PartialEq for Event {
    fn eq(&self, other: &Self) -> bool {
        self.same_space(other) && self.values == other.values
    }
}

impl fmt::Debug for Event {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_tuple("Event").field(&&*self.values).finish()
    }
}

impl fmt::Display for Event {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (k, v) in self.values.iter().enumerate() {
            if k > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, ")")
    }
}

/// Coordinatewise minimum of one or more events.
pub fn pointwise_min(events: &[Event]) -> Result<Event> {
    let (first, rest) = events.split_first().ok_or(Error::EmptyMinimum)?;
    let mut values = first.values.to_vec();
    for e in rest {
        first.check_space(e)?;
        for (m, v) in values.iter_mut().zip(e.values.iter()) {
            *m = m.min(*v);
        }
    }
    Ok(Event::from_clamped(&first.space, values))
}

/// The family `P_n` under test: at least one event, pairwise distinct, over a
/// single state space, in input order.
#[derive(Debug, Clone, PartialEq)]
pub struct EventFamily {
    events: Vec<Event>,
}

impl EventFamily {
    pub fn new(events: Vec<Event>) -> Result<Self> {
        let first = events.first().ok_or(Error::EmptyFamily)?;
        for e in &events[1..] {
            first.check_space(e)?;
        }
        for j in 1..events.len() {
            for i in 0..j {
                if events[i].approx_eq(&events[j]) {
                    return Err(Error::DuplicateEvent {
                        first: i,
                        second: j,
                    });
                }
            }
        }
        Ok(Self { events })
    }

    pub fn events(&self) -> &[Event] {
        &self.events
    }

    pub fn get(&self, index: usize) -> &Event {
        &self.events[index]
    }

    pub fn len(&self) -> usize {
        self.events.len()
    }

    pub fn is_empty(&self) -> bool {
        self.events.is_empty()
    }

    pub fn space(&self) -> &Arc<StateSpace> {
        self.events[0].space()
    }

    /// `P̄_n`: the members followed by their complements.
    pub fn with_complements(&self) -> Vec<Event> {
        self.events
            .iter()
            .cloned()
            .chain(self.events.iter().map(Event::complement))
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn space(n: usize) -> Arc<StateSpace> {
        StateSpace::numbered(n).unwrap()
    }

    fn ev(s: &Arc<StateSpace>, v: &[f64]) -> Event {
        Event::new(s, v.to_vec()).unwrap()
    }

    #[test]
    fn state_space_rejects_duplicates_and_empty() {
        assert_eq!(
            StateSpace::new(["a", "b", "a"]).unwrap_err(),
            Error::DuplicateState("a".into())
        );
        assert_eq!(
            StateSpace::new(Vec::<String>::new()).unwrap_err(),
            Error::EmptyStateSpace
        );
        assert!(StateSpace::with_eps(["a"], 0.0).is_err());
    }

    #[test]
    fn ingestion_clamps_within_eps_and_rejects_beyond() {
        let s = space(2);
        let e = Event::new(&s, vec![-5e-10, 1.0 + 5e-10]).unwrap();
        assert_eq!(e.values(), &[0.0, 1.0]);
        assert!(matches!(
            Event::new(&s, vec![-1e-6, 0.5]),
            Err(Error::ValueOutOfRange { .. })
        ));
        assert!(Event::new(&s, vec![f64::NAN, 0.5]).is_err());
        assert!(matches!(
            Event::new(&s, vec![0.5]),
            Err(Error::LengthMismatch {
                expected: 2,
                got: 1
            })
        ));
    }

    #[test]
    fn complement_examples() {
        let s = space(3);
        assert_eq!(
            ev(&s, &[0.0, 1.0, 0.5]).complement(),
            ev(&s, &[1.0, 0.0, 0.5])
        );
        assert_eq!(Event::zero(&s).complement(), Event::one(&s));
    }

    #[test]
    fn leq_examples() {
        let s = space(2);
        assert!(ev(&s, &[0.2, 0.3]).leq(&ev(&s, &[0.2, 0.9])).unwrap());
        assert!(!ev(&s, &[0.2, 0.9]).leq(&ev(&s, &[0.3, 0.8])).unwrap());
        let p = ev(&s, &[0.4, 0.6]);
        assert!(p.leq(&p).unwrap());
        let other = space(3);
        assert_eq!(
            p.leq(&Event::zero(&other)).unwrap_err(),
            Error::SpaceMismatch
        );
    }

    #[test]
    fn orthogonal_examples() {
        let s3 = space(3);
        assert!(ev(&s3, &[1., 0., 0.])
            .orthogonal(&ev(&s3, &[0., 1., 0.]))
            .unwrap());
        let s2 = space(2);
        assert!(!ev(&s2, &[0.6, 0.])
            .orthogonal(&ev(&s2, &[0.5, 0.]))
            .unwrap());
        let p = ev(&s2, &[0.3, 0.8]);
        assert!(p.orthogonal(&p.complement()).unwrap());
    }

    #[test]
    fn ortho_sum_examples() {
        let s3 = space(3);
        assert_eq!(
            ev(&s3, &[1., 0., 0.])
                .ortho_sum(&ev(&s3, &[0., 1., 0.]))
                .unwrap(),
            ev(&s3, &[1., 1., 0.])
        );
        let p = ev(&s3, &[0.1, 0.5, 0.9]);
        assert_eq!(p.ortho_sum(&Event::zero(&s3)).unwrap(), p);
        let s2 = space(2);
        let sum = ev(&s2, &[0.3, 0.2])
            .ortho_sum(&ev(&s2, &[0.5, 0.1]))
            .unwrap();
        assert!(sum.approx_eq(&ev(&s2, &[0.8, 0.3])));
        assert_eq!(
            ev(&s2, &[0.6, 0.])
                .ortho_sum(&ev(&s2, &[0.5, 0.]))
                .unwrap_err(),
            Error::NotOrthogonal
        );
    }

    #[test]
    fn difference_examples() {
        let s = space(2);
        let q = ev(&s, &[0.9, 0.5]);
        assert!(q
            .difference(&ev(&s, &[0.4, 0.5]))
            .unwrap()
            .approx_eq(&ev(&s, &[0.5, 0.0])));
        assert_eq!(q.difference(&Event::zero(&s)).unwrap(), q);
        assert!(q.difference(&q).unwrap().is_zero());
        assert_eq!(
            q.difference(&ev(&s, &[0.95, 0.1])).unwrap_err(),
            Error::NotComparable
        );
    }

    #[test]
    fn pointwise_min_examples() {
        let s = space(4);
        let a = ev(&s, &[1., 1., 0., 0.]);
        let b = ev(&s, &[1., 0., 1., 0.]);
        assert_eq!(
            pointwise_min(&[a.clone(), b]).unwrap(),
            ev(&s, &[1., 0., 0., 0.])
        );
        assert_eq!(pointwise_min(std::slice::from_ref(&a)).unwrap(), a);
        assert_eq!(pointwise_min(&[a.clone(), Event::one(&s)]).unwrap(), a);
        assert_eq!(pointwise_min(&[]).unwrap_err(), Error::EmptyMinimum);
    }

    #[test]
    fn properness_examples() {
        let s = space(2);
        assert!(ev(&s, &[0.3, 0.8]).is_proper());
        assert!(!ev(&s, &[0.2, 0.4]).is_proper());
        assert!(!Event::zero(&s).is_proper());
        assert!(!Event::one(&s).is_proper());
        let s4 = space(4);
        for bits in 1u32..15 {
            let pattern: Vec<bool> = (0..4).map(|k| bits >> k & 1 == 1).collect();
            assert!(Event::indicator(&s4, &pattern).unwrap().is_proper());
        }
    }

    #[test]
    fn family_rejects_duplicates_within_eps() {
        let s = space(2);
        let err = EventFamily::new(vec![ev(&s, &[0.3, 0.7]), ev(&s, &[0.3 + 1e-12, 0.7])]);
        assert_eq!(
            err.unwrap_err(),
            Error::DuplicateEvent {
                first: 0,
                second: 1
            }
        );
        assert_eq!(EventFamily::new(vec![]).unwrap_err(), Error::EmptyFamily);
        let fam = EventFamily::new(vec![ev(&s, &[0.3, 0.7]), ev(&s, &[0.6, 0.4])]).unwrap();
        assert_eq!(fam.with_complements().len(), 4);
    }

    fn arb_values(n: usize) -> impl Strategy<Value = Vec<f64>> {
        prop::collection::vec(0.0f64..=1.0, n)
    }

    proptest! {
        #[test]
        fn complement_is_exact_involution(v in arb_values(5)) {
            let s = space(5);
            let p = ev(&s, &v);
            prop_assert_eq!(p.complement().complement(), p);
        }

        #[test]
        fn leq_is_transitive(a in arb_values(3), b in arb_values(3), c in arb_values(3)) {
            let s = space(3);
            let (p, q, r) = (ev(&s, &a), ev(&s, &b), ev(&s, &c));
            if p.leq(&q).unwrap() && q.leq(&r).unwrap() {
                prop_assert!(p.leq(&r).unwrap());
            }
            if p.leq(&q).unwrap() && q.leq(&p).unwrap() {
                prop_assert!(p.approx_eq(&q));
            }
        }

        #[test]
        fn orthogonality_is_pointwise_sum_bound(a in arb_values(4), b in arb_values(4)) {
            let s = space(4);
            let (p, q) = (ev(&s, &a), ev(&s, &b));
            let bound = a.iter().zip(&b).all(|(x, y)| x + y <= 1.0 + DEFAULT_EPS);
            prop_assert_eq!(p.orthogonal(&q).unwrap(), bound);
            prop_assert_eq!(p.orthogonal(&q).unwrap(), q.orthogonal(&p).unwrap());
            if bound {
                let sum = p.ortho_sum(&q).unwrap();
                prop_assert!(sum.values().iter().all(|v| *v <= 1.0 + DEFAULT_EPS));
            }
        }

        #[test]
        fn difference_undoes_sum(a in arb_values(4), b in arb_values(4)) {
            let s = space(4);
            let lo: Vec<f64> = a.iter().zip(&b).map(|(x, y)| x.min(*y)).collect();
            let hi: Vec<f64> = a.iter().zip(&b).map(|(x, y)| x.max(*y)).collect();
            let (p, q) = (ev(&s, &lo), ev(&s, &hi));
            let d = q.difference(&p).unwrap();
            prop_assert!(p.ortho_sum(&d).unwrap().approx_eq(&q));
        }

        #[test]
        fn properness_straddles_one_half(v in prop::collection::vec(
            prop_oneof![0.0f64..0.49, 0.51f64..=1.0], 4)) {
            let s = space(4);
            let p = ev(&s, &v);
            let expected = v.iter().any(|x| *x > 0.5) && v.iter().any(|x| *x < 0.5);
            prop_assert_eq!(p.is_proper(), expected);
        }
    }
}
