//! Classicality checks for finite families of numerical events.
//!
//! A numerical event is a function `p: S -> [0, 1]` giving, for every state
//! of a physical system, the probability that the event occurs. Given finitely
//! many measured events (and optionally their measured correlations) this
//! crate decides, where it can, whether the data is compatible with a
//! classical Boolean event system:
//!
//! - [`embeddability`] asks whether the family fits into any algebra of
//!   S-probabilities at all;
//! - [`concrete_logic`] tests families of 0/1-valued events for Booleanity via
//!   pointwise minima, with an independent search oracle;
//! - [`bell`] generates and evaluates Bell-type inequalities on correlation
//!   tables.

pub mod bell;
pub mod cli;
pub mod concrete_logic;
pub mod embeddability;
mod error;
pub mod events;
pub mod generators;
pub mod io;
pub mod report;

pub use error::{Error, Result};
pub use events::{pointwise_min, Event, EventFamily, StateSpace, DEFAULT_EPS};
