//! Descent search over existentially well-founded structures.
//!
//! The [`engine`] runs a descent from a starting witness under a step oracle
//! that either finds the target or names a strictly smaller witness. The
//! other modules instantiate it: [`nat`] for ℕ, [`complemented`] for least
//! elements of complemented subsets, [`arithmetic`] for prime divisors,
//! [`combinators`] for building new structures from old ones, and [`dsl`]
//! for describing subsets and step rules as text.

pub mod engine;
pub mod nat;
pub mod complemented;
pub mod arithmetic;
pub mod combinators;
pub mod dsl;
pub mod dynamic;
pub mod checks;

pub use engine::{
    search, search_traced, try_search_traced, verify_trace, Descent, DescentTrace, Flags, Move,
    RawStructure, SearchError, StepOutcome, Structure, TraceOutcome, TraceRecord, WellFounded,
};
pub use nat::{nat_search, Nat};
