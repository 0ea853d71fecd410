//! Fixture factories with known classical status.

use std::sync::Arc;

use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::bell::{CorrelationTable, SubsetIndex};
use crate::concrete_logic::ConcreteLogic;
use crate::embeddability::gfe_closure;
use crate::error::{Error, Result};
use crate::events::{Event, EventFamily, StateSpace};

pub const MAX_ATOMS: usize = 10;
const HILBERT_TOL: f64 = 1e-9;

/// Classical event system: `k` atoms, one probability measure per state. The
/// event of an atom set `A` (a bitmask) is `s -> Σ_{a ∈ A} measure_s(a)`.
#[derive(Debug, Clone)]
pub struct BooleanMeasureAlgebra {
    space: Arc<StateSpace>,
    k: usize,
    measures: Vec<Vec<f64>>,
}

/// Random measures from `seed`. Roughly one weight in five is zero, so
/// some events come out two-valued on some states.
pub fn gen_boolean_algebra(
    k: usize,
    num_states: usize,
    seed: u64,
) -> Result<BooleanMeasureAlgebra> {
    if !(1..=MAX_ATOMS).contains(&k) {
        return Err(Error::Precondition(format!(
            "atom count must be in 1..={MAX_ATOMS}, got {k}"
        )));
    }
    let space = StateSpace::numbered(num_states)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let measures = (0..num_states)
        .map(|_| {
            let mut w: Vec<f64> = (0..k)
                .map(|_| {
                    if rng.gen_bool(0.2) {
                        0.0
                    } else {
                        rng.gen_range(0.05..1.0)
                    }
                })
                .collect();
            if w.iter().all(|&x| x == 0.0) {
                w[rng.gen_range(0..k)] = 1.0;
            }
            let total: f64 = w.iter().sum();
            w.iter().map(|x| x / total).collect()
        })
        .collect();
    BooleanMeasureAlgebra::from_measures(&space, measures)
}

impl BooleanMeasureAlgebra {
    pub fn from_measures(space: &Arc<StateSpace>, measures: Vec<Vec<f64>>) -> Result<Self> {
        if measures.len() != space.len() {
            return Err(Error::LengthMismatch {
                expected: space.len(),
                got: measures.len(),
            });
        }
        let k = measures[0].len();
        if !(1..=MAX_ATOMS).contains(&k) {
            return Err(Error::Precondition(format!(
                "atom count must be in 1..={MAX_ATOMS}, got {k}"
            )));
        }
        for (s, row) in measures.iter().enumerate() {
            if row.len() != k {
                return Err(Error::LengthMismatch {
                    expected: k,
                    got: row.len(),
                });
            }
            let total: f64 = row.iter().sum();
            if row.iter().any(|&x| x.is_nan() || x < 0.0) || (total - 1.0).abs() > space.eps() {
                return Err(Error::Precondition(format!(
                    "measure for state {} is not a probability vector",
                    space.label(s)
                )));
            }
        }
        Ok(Self {
            space: Arc::clone(space),
            k,
            measures,
        })
    }

    pub fn atoms(&self) -> usize {
        self.k
    }

    pub fn space(&self) -> &Arc<StateSpace> {
        &self.space
    }

    pub fn measures(&self) -> &[Vec<f64>] {
        &self.measures
    }

    pub fn full_mask(&self) -> u32 {
        ((1u64 << self.k) - 1) as u32
    }

    pub fn event(&self, mask: u32) -> Event {
        let values = self
            .measures
            .iter()
            .map(|row| {
                (0..self.k)
                    .filter(|a| mask >> a & 1 == 1)
                    .map(|a| row[a])
                    .sum::<f64>()
                    .min(1.0)
            })
            .collect();
        Event::new(&self.space, values).expect("sums of a probability vector")
    }

    /// All `2^k` events, indexed by atom mask.
    pub fn events(&self) -> Vec<Event> {
        (0..=self.full_mask()).map(|m| self.event(m)).collect()
    }

    /// Table for generators `p_{A_1}, ..., p_{A_n}` with `p_I := p_{∩ A_i}`.
    pub fn correlation_table(&self, generators: &[u32]) -> Result<CorrelationTable> {
        let n = generators.len();
        let entries = SubsetIndex::all(n)
            .map(|s| {
                let mask = s
                    .indices()
                    .iter()
                    .fold(self.full_mask(), |acc, &i| acc & generators[i - 1]);
                (s, self.event(mask))
            })
            .collect::<Vec<_>>();
        CorrelationTable::new(&self.space, n, entries)
    }

    /// `count` random atom masks for use as generators.
    pub fn random_generators(&self, count: usize, seed: u64) -> Vec<u32> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (0..count)
            .map(|_| rng.gen_range(0..=self.full_mask()))
            .collect()
    }
}

/// Random 0/1 events; repeats are possible.
pub fn random_two_valued_events(space: &Arc<StateSpace>, count: usize, seed: u64) -> Vec<Event> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let pattern: Vec<bool> = (0..space.len()).map(|_| rng.gen_bool(0.5)).collect();
            Event::indicator(space, &pattern).expect("0/1 values")
        })
        .collect()
}

/// Closure of two-valued seeds into a concrete logic.
pub fn gen_concrete_logic(seed_events: &EventFamily) -> Result<ConcreteLogic> {
    gfe_closure(seed_events.space(), seed_events.events())
}

/// Real projectors and unit state vectors; each projector `A` yields the
/// event `s -> <A v_s, v_s>`.
#[derive(Debug, Clone)]
pub struct HilbertFixture {
    dim: usize,
    projectors: Vec<DMatrix<f64>>,
    state_vectors: Vec<DVector<f64>>,
}

impl HilbertFixture {
    pub fn new(
        dim: usize,
        projectors: Vec<DMatrix<f64>>,
        state_vectors: Vec<DVector<f64>>,
    ) -> Result<Self> {
        if dim == 0 {
            return Err(Error::Precondition("dimension must be at least 1".into()));
        }
        if state_vectors.is_empty() {
            return Err(Error::EmptyStateSpace);
        }
        for (k, a) in projectors.iter().enumerate() {
            if a.nrows() != dim || a.ncols() != dim {
                return Err(Error::Precondition(format!(
                    "projector {k} is not {dim}x{dim}"
                )));
            }
            let symmetric = (a - a.transpose()).amax() <= HILBERT_TOL;
            let idempotent = (a * a - a).amax() <= HILBERT_TOL;
            if !symmetric || !idempotent {
                return Err(Error::Precondition(format!(
                    "projector {k} is not symmetric and idempotent"
                )));
            }
        }
        for (s, v) in state_vectors.iter().enumerate() {
            if v.len() != dim || (v.norm() - 1.0).abs() > HILBERT_TOL {
                return Err(Error::Precondition(format!(
                    "state vector {s} is not a unit vector of length {dim}"
                )));
            }
        }
        Ok(Self {
            dim,
            projectors,
            state_vectors,
        })
    }

    /// Projectors onto spans of random orthonormal columns (ranks vary,
    /// including 0 and `dim`), and random unit state vectors.
    pub fn random(dim: usize, projectors: usize, states: usize, seed: u64) -> Result<Self> {
        if dim == 0 {
            return Err(Error::Precondition("dimension must be at least 1".into()));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut out = Vec::with_capacity(projectors);
        for _ in 0..projectors {
            let q = DMatrix::from_fn(dim, dim, |_, _| rng.gen_range(-1.0..1.0))
                .qr()
                .q();
            let r = rng.gen_range(0..=dim);
            let cols = q.columns(0, r);
            out.push(cols * cols.transpose());
        }
        let vectors = (0..states)
            .map(|_| loop {
                let v = DVector::from_fn(dim, |_, _| rng.gen_range(-1.0..1.0));
                let norm = v.norm();
                if norm > 1e-3 {
                    break v / norm;
                }
            })
            .collect();
        Self::new(dim, out, vectors)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn projectors(&self) -> &[DMatrix<f64>] {
        &self.projectors
    }

    pub fn state_vectors(&self) -> &[DVector<f64>] {
        &self.state_vectors
    }

    pub fn space(&self) -> Result<Arc<StateSpace>> {
        StateSpace::numbered(self.state_vectors.len())
    }

    /// One event per projector, in order. Unlike [`hilbert_events`] this
    /// keeps repeated events.
    pub fn events(&self, space: &Arc<StateSpace>) -> Result<Vec<Event>> {
        if space.len() != self.state_vectors.len() {
            return Err(Error::LengthMismatch {
                expected: self.state_vectors.len(),
                got: space.len(),
            });
        }
        self.projectors
            .iter()
            .map(|a| {
                let values = self.state_vectors.iter().map(|v| (a * v).dot(v)).collect();
                Event::new(space, values)
            })
            .collect()
    }
}

pub fn hilbert_events(fx: &HilbertFixture) -> Result<EventFamily> {
    let space = fx.space()?;
    EventFamily::new(fx.events(&space)?)
}
