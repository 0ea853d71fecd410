//! C ABI for `numevent`.
//!
//! Every function returns a [`NumeventStatus`]. On failure a description is
//! kept per thread and can be read with [`numevent_last_error`]. Families and
//! correlation tables live behind opaque handles that must be released with
//! their `_free` function.
//!
//! Set functions cross the boundary as arrays of `2^n - 1` doubles in bitmask
//! order: entry `k` belongs to the subset whose bit mask is `k + 1`.

use std::cell::RefCell;
use std::ffi::{c_char, CString};
use std::panic::{catch_unwind, UnwindSafe};
use std::slice;

use numevent::bell::{
    self, check_bell_like, evaluate_inequality, CorrelationTable, SetFunction, SubsetIndex,
};
use numevent::concrete_logic::{boolean_by_minima, ConcreteLogic};
use numevent::embeddability::{classify_embedding, Container, Verdict};
use numevent::{Error, Event, EventFamily, StateSpace};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NumeventStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    /// An event of the family is comparable to its complement.
    ImproperEvent = 3,
    /// The request exceeds an enumeration cap or supported size.
    Unsupported = 4,
    Panic = 5,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NumeventVerdict {
    Embeddable = 0,
    NotEmbeddable = 1,
    Undecided = 2,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NumeventContainerKind {
    None = 0,
    /// `size` holds `n` of `MO_n`.
    Mo = 1,
    Boolean8 = 2,
    Boolean16 = 3,
    /// `size` holds the number of elements of the closure.
    GfeClosure = 4,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct NumeventContainer {
    pub kind: NumeventContainerKind,
    pub size: usize,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct NumeventClassification {
    pub verdict: NumeventVerdict,
    pub container: NumeventContainer,
    /// Smallest Boolean algebra around the family when reported alongside
    /// `container`, otherwise `None`.
    pub boolean_container: NumeventContainer,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NumeventInequality {
    pub min_value: f64,
    pub max_value: f64,
    pub violated: bool,
}

/// Opaque family of events over a numbered state space.
pub struct NumeventFamily {
    family: EventFamily,
}

/// Opaque complete correlation table.
pub struct NumeventTable {
    table: CorrelationTable,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_last_error(message: String) {
    let c = CString::new(message.replace('\0', " ")).expect("no interior NUL");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(err: &Error) -> NumeventStatus {
    match err {
        Error::ImproperEvent(_) => NumeventStatus::ImproperEvent,
        Error::UnsupportedN { .. } | Error::EnumerationCap(_) | Error::BudgetExceeded(_) => {
            NumeventStatus::Unsupported
        }
        _ => NumeventStatus::InvalidArgument,
    }
}

struct Failure(NumeventStatus, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure(status_of(&e), e.to_string())
    }
}

fn null(what: &str) -> Failure {
    Failure(NumeventStatus::NullPointer, format!("{what} is null"))
}

/// Runs `body`, recording any error and converting panics into a status.
fn guard(body: impl FnOnce() -> Result<(), Failure> + UnwindSafe) -> NumeventStatus {
    match catch_unwind(body) {
        Ok(Ok(())) => {
            LAST_ERROR.with(|e| *e.borrow_mut() = None);
            NumeventStatus::Ok
        }
        Ok(Err(Failure(status, message))) => {
            set_last_error(message);
            status
        }
        Err(_) => {
            set_last_error("internal panic".into());
            NumeventStatus::Panic
        }
    }
}

unsafe fn input<'a>(ptr: *const f64, len: usize, what: &str) -> Result<&'a [f64], Failure> {
    if len == 0 {
        return Ok(&[]);
    }
    if ptr.is_null() {
        return Err(null(what));
    }
    Ok(slice::from_raw_parts(ptr, len))
}

unsafe fn output<'a, T>(ptr: *mut T, what: &str) -> Result<&'a mut T, Failure> {
    ptr.as_mut().ok_or_else(|| null(what))
}

fn set_function_len(n: usize) -> Result<usize, Failure> {
    if n == 0 || n > bell::MAX_N {
        return Err(Error::UnsupportedN {
            n,
            allowed: "1..=20",
        }
        .into());
    }
    Ok((1usize << n) - 1)
}

fn space(num_states: usize, eps: f64) -> Result<std::sync::Arc<StateSpace>, Failure> {
    Ok(StateSpace::numbered_with_eps(num_states, eps)?)
}

/// Message for the most recent failure on this thread, or null after a
/// success. Valid until the next call into the library on the same thread.
#[no_mangle]
pub extern "C" fn numevent_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(std::ptr::null(), |c| c.as_ptr()))
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn numevent_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Builds a family from `num_events * num_states` values, one event per row.
///
/// # Safety
/// `values` must point to that many doubles and `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn numevent_family_new(
    values: *const f64,
    num_events: usize,
    num_states: usize,
    eps: f64,
    out: *mut *mut NumeventFamily,
) -> NumeventStatus {
    guard(|| {
        let out = output(out, "out")?;
        let len = num_events
            .checked_mul(num_states)
            .ok_or_else(|| Failure(NumeventStatus::InvalidArgument, "size overflow".into()))?;
        let values = input(values, len, "values")?;
        let space = space(num_states, eps)?;
        let events = values
            .chunks(num_states.max(1))
            .take(num_events)
            .map(|row| Event::new(&space, row.to_vec()))
            .collect::<numevent::Result<Vec<_>>>()?;
        let family = EventFamily::new(events)?;
        *out = Box::into_raw(Box::new(NumeventFamily { family }));
        Ok(())
    })
}

/// # Safety
/// `family` must come from [`numevent_family_new`] and not be used again.
#[no_mangle]
pub unsafe extern "C" fn numevent_family_free(family: *mut NumeventFamily) {
    if !family.is_null() {
        drop(Box::from_raw(family));
    }
}

fn container(c: Option<Container>) -> NumeventContainer {
    let (kind, size) = match c {
        None => (NumeventContainerKind::None, 0),
        Some(Container::Mo(n)) => (NumeventContainerKind::Mo, n),
        Some(Container::Boolean8) => (NumeventContainerKind::Boolean8, 8),
        Some(Container::Boolean16) => (NumeventContainerKind::Boolean16, 16),
        Some(Container::GfeClosure(n)) => (NumeventContainerKind::GfeClosure, n),
    };
    NumeventContainer { kind, size }
}

/// Decides whether the family embeds into a classical model.
///
/// # Safety
/// `family` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn numevent_classify(
    family: *const NumeventFamily,
    out: *mut NumeventClassification,
) -> NumeventStatus {
    guard(|| {
        let family = family.as_ref().ok_or_else(|| null("family"))?;
        let out = output(out, "out")?;
        let report = classify_embedding(&family.family)?;
        *out = NumeventClassification {
            verdict: match report.verdict {
                Verdict::Embeddable => NumeventVerdict::Embeddable,
                Verdict::NotEmbeddable => NumeventVerdict::NotEmbeddable,
                Verdict::Undecided => NumeventVerdict::Undecided,
            },
            container: container(report.container),
            boolean_container: container(report.boolean_container),
        };
        Ok(())
    })
}

/// Whether the family members at `family_indices` (2 to 4 of them) lie in a
/// Boolean subalgebra of the concrete logic whose members are the rows of
/// `logic`.
///
/// # Safety
/// `logic` must hold `num_members * num_states` doubles, `family_indices`
/// `family_len` indices, and `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn numevent_logic_is_boolean(
    logic: *const f64,
    num_members: usize,
    num_states: usize,
    eps: f64,
    family_indices: *const usize,
    family_len: usize,
    out: *mut bool,
) -> NumeventStatus {
    guard(|| {
        let out = output(out, "out")?;
        let len = num_members
            .checked_mul(num_states)
            .ok_or_else(|| Failure(NumeventStatus::InvalidArgument, "size overflow".into()))?;
        let values = input(logic, len, "logic")?;
        if family_len > 0 && family_indices.is_null() {
            return Err(null("family_indices"));
        }
        let indices = if family_len == 0 {
            &[][..]
        } else {
            slice::from_raw_parts(family_indices, family_len)
        };
        let space = space(num_states, eps)?;
        let members = values
            .chunks(num_states.max(1))
            .take(num_members)
            .map(|row| Event::new(&space, row.to_vec()))
            .collect::<numevent::Result<Vec<_>>>()?;
        let logic = ConcreteLogic::new(members)?;
        let picked = indices
            .iter()
            .map(|&i| {
                logic.members().get(i).cloned().ok_or_else(|| {
                    Failure(
                        NumeventStatus::InvalidArgument,
                        format!("family index {i} out of range"),
                    )
                })
            })
            .collect::<Result<Vec<_>, _>>()?;
        let family = EventFamily::new(picked)?;
        *out = boolean_by_minima(&logic, &family)?.boolean;
        Ok(())
    })
}

unsafe fn set_function(n: usize, values: *const f64) -> Result<SetFunction, Failure> {
    let len = set_function_len(n)?;
    Ok(SetFunction::new(n, input(values, len, "values")?.to_vec())?)
}

unsafe fn write_set_function(f: &SetFunction, out: *mut f64) -> Result<(), Failure> {
    if out.is_null() {
        return Err(null("out"));
    }
    slice::from_raw_parts_mut(out, f.values().len()).copy_from_slice(f.values());
    Ok(())
}

/// Subset sums: `out[I] = Σ_{J ⊆ I} h(J)`.
///
/// # Safety
/// `values` and `out` must each hold `2^n - 1` doubles.
#[no_mangle]
pub unsafe extern "C" fn numevent_g_transform(
    n: usize,
    values: *const f64,
    out: *mut f64,
) -> NumeventStatus {
    guard(|| write_set_function(&bell::g_transform(&set_function(n, values)?), out))
}

/// Inverse of [`numevent_g_transform`].
///
/// # Safety
/// `values` and `out` must each hold `2^n - 1` doubles.
#[no_mangle]
pub unsafe extern "C" fn numevent_f_transform(
    n: usize,
    values: *const f64,
    out: *mut f64,
) -> NumeventStatus {
    guard(|| write_set_function(&bell::f_transform(&set_function(n, values)?), out))
}

/// Whether every subset sum of the coefficients lies in `[0, 1]`.
///
/// # Safety
/// `values` must hold `2^n - 1` doubles and `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn numevent_is_bell_valuation(
    n: usize,
    values: *const f64,
    out: *mut bool,
) -> NumeventStatus {
    guard(|| {
        let f = set_function(n, values)?;
        *output(out, "out")? = bell::is_bell_valuation(&f);
        Ok(())
    })
}

/// Number of integer Bell valuations for `n`, `2^(2^n - 1) - 1`.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn numevent_valuation_count(n: usize, out: *mut u64) -> NumeventStatus {
    guard(|| {
        *output(out, "out")? = bell::valuation_count(n)?;
        Ok(())
    })
}

/// Builds a complete table from `(2^n - 1) * num_states` values: row `k`
/// holds the correlation of the subset with mask `k + 1` at every state.
///
/// # Safety
/// `values` must point to that many doubles and `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn numevent_table_new(
    n: usize,
    values: *const f64,
    num_states: usize,
    eps: f64,
    out: *mut *mut NumeventTable,
) -> NumeventStatus {
    guard(|| {
        let out = output(out, "out")?;
        let rows = set_function_len(n)?;
        let values = input(values, rows * num_states, "values")?;
        let space = space(num_states, eps)?;
        let mut entries = Vec::with_capacity(rows);
        for (k, row) in values.chunks(num_states).enumerate() {
            let subset = SubsetIndex::new(k as u32 + 1, n)?;
            entries.push((subset, Event::new(&space, row.to_vec())?));
        }
        let table = CorrelationTable::new(&space, n, entries)?;
        *out = Box::into_raw(Box::new(NumeventTable { table }));
        Ok(())
    })
}

/// # Safety
/// `table` must come from [`numevent_table_new`] and not be used again.
#[no_mangle]
pub unsafe extern "C" fn numevent_table_free(table: *mut NumeventTable) {
    if !table.is_null() {
        drop(Box::from_raw(table));
    }
}

/// Checks the pairwise Bell-like inequalities; `violations` receives how many
/// fail.
///
/// # Safety
/// `table` must be a live handle and both outputs writable.
#[no_mangle]
pub unsafe extern "C" fn numevent_table_check_pairs(
    table: *const NumeventTable,
    consistent: *mut bool,
    violations: *mut usize,
) -> NumeventStatus {
    guard(|| {
        let table = table.as_ref().ok_or_else(|| null("table"))?;
        let consistent = output(consistent, "consistent")?;
        let violations = output(violations, "violations")?;
        let report = check_bell_like(&table.table)?;
        *consistent = report.consistent;
        *violations = report.results.iter().filter(|r| r.violated).count();
        Ok(())
    })
}

/// Evaluates `0 <= Σ f(I) p_I <= 1` at every state.
///
/// # Safety
/// `coefficients` must hold `2^n - 1` doubles for the table's `n`.
#[no_mangle]
pub unsafe extern "C" fn numevent_table_evaluate(
    table: *const NumeventTable,
    coefficients: *const f64,
    out: *mut NumeventInequality,
) -> NumeventStatus {
    guard(|| {
        let table = table.as_ref().ok_or_else(|| null("table"))?;
        let out = output(out, "out")?;
        let f = set_function(table.table.n(), coefficients)?;
        let r = evaluate_inequality(&f, &table.table)?;
        *out = NumeventInequality {
            min_value: r.min_value,
            max_value: r.max_value,
            violated: r.violated,
        };
        Ok(())
    })
}
