//! The descent engine.
//!
//! A structure is existentially well-founded when the following search always
//! terminates: start from a witness `x0`, ask a step oracle about the current
//! witness, and either stop with evidence or move to a strictly smaller
//! witness. Every structure in this crate carries such a search as its
//! [`WellFounded::run`] method. Composite structures implement `run` by
//! delegating to the searches of their parts, so termination of a composite
//! search is inherited from the base structures rather than re-proved.
//!
//! `run` is evidence-carrying: alongside the current element the oracle
//! receives a value `W` (the evidence that the element is a legitimate
//! witness) and either finishes with a result `R` or hands back a smaller
//! element together with fresh evidence. Top-level callers rarely need that
//! generality; [`search`] wraps it for plain `element -> StepOutcome` oracles
//! and records a [`DescentTrace`].

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// The answer of a top-level step oracle at the current element.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum StepOutcome<E> {
    /// The target property holds at the carried element (which must equal the
    /// element the oracle was asked about).
    Found(E),
    /// A strictly smaller witness.
    Descend(E),
}

/// The answer of an evidence-carrying step oracle.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Move<E, W, R> {
    Done(R),
    Descend(E, W),
}

/// Evidence-carrying step oracle as seen by [`WellFounded::run`].
pub type StepFn<'a, E, W, R> = dyn FnMut(&E, W) -> Result<Move<E, W, R>, SearchError> + 'a;

/// Claimed order-theoretic properties of a structure.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Flags {
    /// `x < y` implies `x` apart from `y`.
    pub strong: bool,
    /// `x` apart from `y` implies `x < y` or `y < x`.
    pub dichotomous: bool,
}

impl Flags {
    pub const NONE: Flags = Flags {
        strong: false,
        dichotomous: false,
    };
    pub const BOTH: Flags = Flags {
        strong: true,
        dichotomous: true,
    };
}

/// A carrier with an equality, an apartness relation, and a strict relation.
///
/// Elements are opaque: the engine compares them only through these oracles.
pub trait Structure: Send + Sync {
    type Elem: Clone + fmt::Debug + Send + Sync + 'static;

    fn carrier_name(&self) -> String;
    fn equal(&self, a: &Self::Elem, b: &Self::Elem) -> bool;
    fn apart(&self, a: &Self::Elem, b: &Self::Elem) -> bool;
    fn less(&self, a: &Self::Elem, b: &Self::Elem) -> bool;
    fn render(&self, a: &Self::Elem) -> String;

    fn flags(&self) -> Flags {
        Flags::NONE
    }
}

/// A structure together with its descent search.
pub trait WellFounded: Structure {
    /// Runs the descent from `start`.
    ///
    /// Implementations must reject any `Descend(y, _)` answered at `x` unless
    /// `y < x`, and must only call `step` at elements reached by such moves
    /// (up to the structure's equality).
    fn run<W: 'static, R: 'static>(
        &self,
        start: Self::Elem,
        evidence: W,
        step: &mut StepFn<'_, Self::Elem, W, R>,
    ) -> Result<R, SearchError>;
}

#[derive(Debug, Clone, PartialEq, Eq, Error, Serialize, Deserialize)]
pub enum SearchError {
    #[error("non-decreasing step from {current} to {proposed}")]
    NonDecreasingStep { current: String, proposed: String },
    #[error("step budget of {fuel} exhausted")]
    FuelExhausted { fuel: u64 },
    #[error("descent from {start} used {steps} steps, more than start+1")]
    BoundExceeded { start: u64, steps: u64 },
    #[error("oracle at {current} answered Found({claimed})")]
    WitnessMismatch { current: String, claimed: String },
    #[error("map contract violated: {0}")]
    ContractViolated(String),
    #[error("step escaped the subset at {element}")]
    EscapedSubset { element: String },
    #[error("element {element} has the wrong shape for {carrier}")]
    IllShaped { element: String, carrier: String },
    #[error("search aborted: {0}")]
    Aborted(String),
}

impl SearchError {
    pub fn non_decreasing<S: Structure + ?Sized>(s: &S, current: &S::Elem, proposed: &S::Elem) -> Self {
        SearchError::NonDecreasingStep {
            current: s.render(current),
            proposed: s.render(proposed),
        }
    }

    /// Short machine-readable tag.
    pub fn tag(&self) -> &'static str {
        match self {
            SearchError::NonDecreasingStep { .. } => "non-decreasing-step",
            SearchError::FuelExhausted { .. } => "fuel-exhausted",
            SearchError::BoundExceeded { .. } => "bound-exceeded",
            SearchError::WitnessMismatch { .. } => "witness-mismatch",
            SearchError::ContractViolated(_) => "contract-violated",
            SearchError::EscapedSubset { .. } => "escaped-subset",
            SearchError::IllShaped { .. } => "ill-shaped",
            SearchError::Aborted(_) => "aborted",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TraceOutcome<E> {
    Found(E),
    Error(SearchError),
}

/// Record of one top-level search: every element at which the step oracle
/// was invoked, in order.
#[derive(Debug, Clone)]
pub struct DescentTrace<E> {
    pub carrier: String,
    pub visited: Vec<E>,
    pub outcome: TraceOutcome<E>,
    pub steps: usize,
}

impl<E> DescentTrace<E> {
    pub fn new(carrier: impl Into<String>, visited: Vec<E>, outcome: TraceOutcome<E>) -> Self {
        let steps = visited.len();
        DescentTrace {
            carrier: carrier.into(),
            visited,
            outcome,
            steps,
        }
    }

    pub fn found(&self) -> Option<&E> {
        match &self.outcome {
            TraceOutcome::Found(e) => Some(e),
            TraceOutcome::Error(_) => None,
        }
    }

    /// Number of descents taken (edges of the walk).
    pub fn descents(&self) -> usize {
        self.visited.len().saturating_sub(1)
    }

    pub fn record(&self, render: impl Fn(&E) -> String) -> TraceRecord {
        TraceRecord {
            carrier: self.carrier.clone(),
            visited: self.visited.iter().map(&render).collect(),
            outcome: match &self.outcome {
                TraceOutcome::Found(e) => RecordOutcome::Found(render(e)),
                TraceOutcome::Error(err) => RecordOutcome::Error(err.to_string()),
            },
            steps: self.steps,
        }
    }

    pub fn record_in<S>(&self, s: &S) -> TraceRecord
    where
        S: Structure<Elem = E> + ?Sized,
    {
        self.record(|e| s.render(e))
    }
}

/// Serialized form of a [`DescentTrace`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceRecord {
    pub carrier: String,
    pub visited: Vec<String>,
    pub outcome: RecordOutcome,
    pub steps: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RecordOutcome {
    Found(String),
    Error(String),
}

impl TraceRecord {
    /// One line of line-delimited JSON, without the trailing newline.
    pub fn to_json_line(&self) -> String {
        serde_json::to_string(self).expect("trace records always serialize")
    }
}

/// A completed search.
#[derive(Debug, Clone)]
pub struct Descent<E> {
    pub found: E,
    pub trace: DescentTrace<E>,
}

/// Searches `s` from `start`, recording the walk even when it fails.
pub fn search_traced<S, F>(s: &S, start: S::Elem, oracle: F) -> DescentTrace<S::Elem>
where
    S: WellFounded + ?Sized,
    F: Fn(&S::Elem) -> StepOutcome<S::Elem>,
{
    try_search_traced(s, start, |x| Ok(oracle(x)))
}

/// Like [`search_traced`], for oracles that can fail.
pub fn try_search_traced<S, F>(s: &S, start: S::Elem, oracle: F) -> DescentTrace<S::Elem>
where
    S: WellFounded + ?Sized,
    F: Fn(&S::Elem) -> Result<StepOutcome<S::Elem>, SearchError>,
{
    let mut visited = Vec::new();
    let result = s.run::<(), S::Elem>(start, (), &mut |x, ()| {
        visited.push(x.clone());
        match oracle(x)? {
            StepOutcome::Found(w) => {
                if s.equal(&w, x) {
                    Ok(Move::Done(w))
                } else {
                    Err(SearchError::WitnessMismatch {
                        current: s.render(x),
                        claimed: s.render(&w),
                    })
                }
            }
            StepOutcome::Descend(y) => {
                if s.less(&y, x) {
                    Ok(Move::Descend(y, ()))
                } else {
                    Err(SearchError::non_decreasing(s, x, &y))
                }
            }
        }
    });
    let outcome = match result {
        Ok(found) => TraceOutcome::Found(found),
        Err(err) => TraceOutcome::Error(err),
    };
    DescentTrace::new(s.carrier_name(), visited, outcome)
}

/// Searches `s` from `start` for an element at which `oracle` answers `Found`.
pub fn search<S, F>(s: &S, start: S::Elem, oracle: F) -> Result<Descent<S::Elem>, SearchError>
where
    S: WellFounded + ?Sized,
    F: Fn(&S::Elem) -> StepOutcome<S::Elem>,
{
    let trace = search_traced(s, start, oracle);
    match &trace.outcome {
        TraceOutcome::Found(found) => Ok(Descent {
            found: found.clone(),
            trace,
        }),
        TraceOutcome::Error(err) => Err(err.clone()),
    }
}

/// Audits a trace: strictly decreasing walk, step count matching the walk,
/// and a found element equal to the last visited one.
pub fn verify_trace<S>(s: &S, trace: &DescentTrace<S::Elem>) -> bool
where
    S: Structure + ?Sized,
{
    if trace.steps != trace.visited.len() {
        return false;
    }
    let descending = trace
        .visited
        .windows(2)
        .all(|pair| s.less(&pair[1], &pair[0]));
    if !descending {
        return false;
    }
    match &trace.outcome {
        TraceOutcome::Found(found) => trace
            .visited
            .last()
            .is_some_and(|last| s.equal(found, last)),
        TraceOutcome::Error(_) => true,
    }
}

type Relation<E> = std::sync::Arc<dyn Fn(&E, &E) -> bool + Send + Sync>;

/// A caller-assembled structure with no derived search.
///
/// Its search is a plain descent loop that checks every step and gives up
/// after `fuel` oracle calls, since nothing is known about its order.
#[derive(Clone)]
pub struct RawStructure<E> {
    name: String,
    equal: Relation<E>,
    apart: Relation<E>,
    less: Relation<E>,
    render: std::sync::Arc<dyn Fn(&E) -> String + Send + Sync>,
    flags: Flags,
    fuel: u64,
}

impl<E> RawStructure<E>
where
    E: Clone + fmt::Debug + Send + Sync + 'static,
{
    pub fn new(
        name: impl Into<String>,
        equal: impl Fn(&E, &E) -> bool + Send + Sync + 'static,
        apart: impl Fn(&E, &E) -> bool + Send + Sync + 'static,
        less: impl Fn(&E, &E) -> bool + Send + Sync + 'static,
    ) -> Self {
        RawStructure {
            name: name.into(),
            equal: std::sync::Arc::new(equal),
            apart: std::sync::Arc::new(apart),
            less: std::sync::Arc::new(less),
            render: std::sync::Arc::new(|e: &E| format!("{e:?}")),
            flags: Flags::NONE,
            fuel: 10_000,
        }
    }

    pub fn with_render(mut self, render: impl Fn(&E) -> String + Send + Sync + 'static) -> Self {
        self.render = std::sync::Arc::new(render);
        self
    }

    pub fn with_fuel(mut self, fuel: u64) -> Self {
        self.fuel = fuel;
        self
    }

    pub fn with_flags(mut self, flags: Flags) -> Self {
        self.flags = flags;
        self
    }
}

impl<E> fmt::Debug for RawStructure<E> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("RawStructure")
            .field("name", &self.name)
            .field("fuel", &self.fuel)
            .finish_non_exhaustive()
    }
}

impl<E> Structure for RawStructure<E>
where
    E: Clone + fmt::Debug + Send + Sync + 'static,
{
    type Elem = E;

    fn carrier_name(&self) -> String {
        self.name.clone()
    }
    fn equal(&self, a: &E, b: &E) -> bool {
        (self.equal)(a, b)
    }
    fn apart(&self, a: &E, b: &E) -> bool {
        (self.apart)(a, b)
    }
    fn less(&self, a: &E, b: &E) -> bool {
        (self.less)(a, b)
    }
    fn render(&self, a: &E) -> String {
        (self.render)(a)
    }
    fn flags(&self) -> Flags {
        self.flags
    }
}

impl<E> WellFounded for RawStructure<E>
where
    E: Clone + fmt::Debug + Send + Sync + 'static,
{
    fn run<W: 'static, R: 'static>(
        &self,
        start: E,
        evidence: W,
        step: &mut StepFn<'_, E, W, R>,
    ) -> Result<R, SearchError> {
        let mut current = start;
        let mut evidence = evidence;
        let mut calls = 0u64;
        loop {
            if calls == self.fuel {
                return Err(SearchError::FuelExhausted { fuel: self.fuel });
            }
            calls += 1;
            match step(&current, evidence)? {
                Move::Done(r) => return Ok(r),
                Move::Descend(next, w) => {
                    if !self.less(&next, &current) {
                        return Err(SearchError::non_decreasing(self, &current, &next));
                    }
                    current = next;
                    evidence = w;
                }
            }
        }
    }
}
