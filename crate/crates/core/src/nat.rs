//! The natural numbers as a strong, dichotomous descent structure, plus
//! exhaustive checkers for the apartness and order laws.
//!
//! Apartness on ℕ is negated equality. The order laws are checked rather than
//! assumed, and the checkers take their oracles as parameters so that
//! deliberately broken oracles can be fed through them.

use serde::{Deserialize, Serialize};

use crate::engine::{
    search, Descent, DescentTrace, Flags, Move, SearchError, StepFn, StepOutcome, Structure,
    WellFounded,
};

/// The canonical structure `(ℕ, =, ≠, <)`.
#[derive(Debug, Clone, Copy, Default)]
pub struct Nat;

impl Structure for Nat {
    type Elem = u64;

    fn carrier_name(&self) -> String {
        "ℕ".to_string()
    }
    fn equal(&self, a: &u64, b: &u64) -> bool {
        a == b
    }
    fn apart(&self, a: &u64, b: &u64) -> bool {
        !self.equal(a, b)
    }
    fn less(&self, a: &u64, b: &u64) -> bool {
        a < b
    }
    fn render(&self, a: &u64) -> String {
        a.to_string()
    }
    fn flags(&self) -> Flags {
        Flags::BOTH
    }
}

impl WellFounded for Nat {
    /// Countdown search. Strict descent from `start` makes at most `start + 1`
    /// oracle calls; the bound is still checked.
    fn run<W: 'static, R: 'static>(
        &self,
        start: u64,
        evidence: W,
        step: &mut StepFn<'_, u64, W, R>,
    ) -> Result<R, SearchError> {
        let mut current = start;
        let mut evidence = evidence;
        let mut calls: u64 = 0;
        loop {
            calls += 1;
            if calls > start.saturating_add(1) {
                return Err(SearchError::BoundExceeded { start, steps: calls });
            }
            match step(&current, evidence)? {
                Move::Done(r) => return Ok(r),
                Move::Descend(next, w) => {
                    if next >= current {
                        return Err(SearchError::non_decreasing(self, &current, &next));
                    }
                    current = next;
                    evidence = w;
                }
            }
        }
    }
}

/// Derived order: `x ≥ y` iff `x = y` or `y < x`.
pub fn geq(x: u64, y: u64) -> bool {
    x == y || y < x
}

/// Descent on ℕ from `start`.
pub fn nat_search<F>(start: u64, step: F) -> Result<Descent<u64>, SearchError>
where
    F: Fn(&u64) -> StepOutcome<u64>,
{
    let d = search(&Nat, start, step)?;
    debug_assert!(d.trace.steps as u64 <= start + 1);
    Ok(d)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum LawStatus {
    Pass,
    Fail,
    PremiseUnmet,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LawResult {
    pub law: String,
    pub status: LawStatus,
    pub counterexample: Option<Vec<u64>>,
}

impl LawResult {
    fn pass(law: &str) -> Self {
        LawResult {
            law: law.to_string(),
            status: LawStatus::Pass,
            counterexample: None,
        }
    }
    fn fail(law: &str, counterexample: Vec<u64>) -> Self {
        LawResult {
            law: law.to_string(),
            status: LawStatus::Fail,
            counterexample: Some(counterexample),
        }
    }
    fn premise_unmet(law: &str) -> Self {
        LawResult {
            law: law.to_string(),
            status: LawStatus::PremiseUnmet,
            counterexample: None,
        }
    }
}

/// Per-law outcome of an exhaustive check. Serializes as a JSON array of
/// `{"law", "status", "counterexample"}` objects.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct AxiomReport {
    pub laws: Vec<LawResult>,
}

impl AxiomReport {
    pub fn all_pass(&self) -> bool {
        self.laws.iter().all(|l| l.status == LawStatus::Pass)
    }

    pub fn no_failures(&self) -> bool {
        self.laws.iter().all(|l| l.status != LawStatus::Fail)
    }

    pub fn get(&self, law: &str) -> Option<&LawResult> {
        self.laws.iter().find(|l| l.law == law)
    }

    pub fn failures(&self) -> impl Iterator<Item = &LawResult> {
        self.laws.iter().filter(|l| l.status == LawStatus::Fail)
    }
}

/// The primitive oracles the axiom suite exercises.
#[derive(Clone, Copy)]
pub struct NatOracles {
    pub equal: fn(u64, u64) -> bool,
    pub apart: fn(u64, u64) -> bool,
    pub less: fn(u64, u64) -> bool,
    pub succ: fn(u64) -> u64,
}

impl NatOracles {
    pub fn canonical() -> Self {
        NatOracles {
            equal: |x, y| Nat.equal(&x, &y),
            apart: |x, y| Nat.apart(&x, &y),
            less: |x, y| Nat.less(&x, &y),
            succ: |x| x + 1,
        }
    }

    fn geq(&self, x: u64, y: u64) -> bool {
        (self.equal)(x, y) || (self.less)(y, x)
    }
}

/// Known-bad oracle sets used to show the suite can fail.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mutant {
    /// apartness replaced by equality
    ApartIsEqual,
    /// strict order replaced by `≤`
    ReflexiveLess,
    /// successor that collapses neighbours
    CollapsingSucc,
}

impl Mutant {
    pub const ALL: [Mutant; 3] = [Mutant::ApartIsEqual, Mutant::ReflexiveLess, Mutant::CollapsingSucc];

    pub fn name(self) -> &'static str {
        match self {
            Mutant::ApartIsEqual => "apart-is-equal",
            Mutant::ReflexiveLess => "reflexive-less",
            Mutant::CollapsingSucc => "collapsing-succ",
        }
    }

    pub fn from_name(name: &str) -> Option<Mutant> {
        Mutant::ALL.into_iter().find(|m| m.name() == name)
    }

    pub fn oracles(self) -> NatOracles {
        let mut o = NatOracles::canonical();
        match self {
            Mutant::ApartIsEqual => o.apart = |x, y| x == y,
            Mutant::ReflexiveLess => o.less = |x, y| x <= y,
            Mutant::CollapsingSucc => o.succ = |x| x / 2 + 1,
        }
        o
    }
}

fn first_pair(bound: u64, mut bad: impl FnMut(u64, u64) -> bool) -> Option<Vec<u64>> {
    for x in 0..=bound {
        for y in 0..=bound {
            if bad(x, y) {
                return Some(vec![x, y]);
            }
        }
    }
    None
}

fn first_triple(bound: u64, mut bad: impl FnMut(u64, u64, u64) -> bool) -> Option<Vec<u64>> {
    for x in 0..=bound {
        for y in 0..=bound {
            for z in 0..=bound {
                if bad(x, y, z) {
                    return Some(vec![x, y, z]);
                }
            }
        }
    }
    None
}

fn law(name: &str, counterexample: Option<Vec<u64>>) -> LawResult {
    match counterexample {
        None => LawResult::pass(name),
        Some(c) => LawResult::fail(name, c),
    }
}

/// Exhaustively checks the apartness axioms, the order laws, and successor
/// injectivity for the canonical oracles over `[0, bound]`.
pub fn check_axiom_suite(bound: u64) -> AxiomReport {
    check_axiom_suite_with(&NatOracles::canonical(), bound)
}

pub fn check_axiom_suite_with(o: &NatOracles, bound: u64) -> AxiomReport {
    let (eq, ap, lt, succ) = (o.equal, o.apart, o.less, o.succ);
    let mut laws = Vec::new();

    // Equality itself must be an equivalence for the other laws to mean much.
    laws.push(law(
        "Eq-equivalence",
        first_triple(bound, |x, y, z| {
            !eq(x, x) || (eq(x, y) && !eq(y, x)) || (eq(x, y) && eq(y, z) && !eq(x, z))
        }),
    ));
    laws.push(law("Ineq1", first_pair(bound, |x, y| eq(x, y) && ap(x, y))));
    laws.push(law("Ineq2", first_pair(bound, |x, y| ap(x, y) && !ap(y, x))));
    laws.push(law(
        "Ineq3",
        first_triple(bound, |x, y, z| ap(x, y) && !(ap(z, x) || ap(z, y))),
    ));
    laws.push(law("Ineq4", first_pair(bound, |x, y| !(eq(x, y) || ap(x, y)))));

    // Extensionality needs four variables; only equal pairs can matter.
    let equal_pairs: Vec<(u64, u64)> = (0..=bound)
        .flat_map(|x| (0..=bound).map(move |x2| (x, x2)))
        .filter(|&(x, x2)| eq(x, x2))
        .collect();
    let mut ineq5 = None;
    let mut less_ext = None;
    'outer: for &(x, x2) in &equal_pairs {
        for &(y, y2) in &equal_pairs {
            if ineq5.is_none() && ap(x, y) && !ap(x2, y2) {
                ineq5 = Some(vec![x, x2, y, y2]);
            }
            if less_ext.is_none() && lt(x, y) && !lt(x2, y2) {
                less_ext = Some(vec![x, x2, y, y2]);
            }
            if ineq5.is_some() && less_ext.is_some() {
                break 'outer;
            }
        }
    }
    laws.push(law("Ineq5", ineq5));
    laws.push(law("Less-extensional", less_ext));

    laws.push(law("I1", first_pair(bound, |x, y| !(lt(x, y) || o.geq(x, y)))));
    // I2 relates the derived ≥ to the complement of <: ¬(x<y) ⇔ (x = y ∨ y < x).
    laws.push(law("I2", first_pair(bound, |x, y| !lt(x, y) != o.geq(x, y))));
    laws.push(law("I3", first_pair(bound, |x, y| lt(x, y) && !ap(x, y))));
    laws.push(law(
        "I4",
        first_pair(bound, |x, y| ap(x, y) && !(lt(x, y) || lt(y, x))),
    ));
    laws.push(law("I5", first_pair(bound, |x, y| !lt(x, y) && !o.geq(x, y))));
    laws.push(law(
        "Peano2",
        first_pair(bound, |x, y| eq(succ(x), succ(y)) && !eq(x, y)),
    ));

    AxiomReport { laws }
}

pub const LAW_STRONG_EXTENSIONALITY: &str = "strong-extensionality";
pub const LAW_MONOTONE_STRONGLY: &str = "monotone-implies-strongly-monotone";
pub const LAW_STRONGLY_INJECTIVE: &str = "strongly-monotone-embedding-implies-monotone";

/// Checks the three function laws for `f` on `[0, bound]`.
///
/// "Monotone" here is `x ≤ y ⇒ f(x) ≤ f(y)`, "strongly monotone" is
/// `f(x) < f(y) ⇒ x < y`, and "embedding" is injectivity up to equality.
/// A law whose premise fails on the range is reported as premise-unmet.
pub fn check_function_laws(f: impl Fn(u64) -> u64, bound: u64) -> AxiomReport {
    let values: Vec<u64> = (0..=bound).map(&f).collect();
    let n = Nat;
    let mut laws = Vec::new();

    let se = first_pair(bound, |x, y| {
        n.apart(&values[x as usize], &values[y as usize]) && !n.apart(&x, &y)
    });
    laws.push(law(LAW_STRONG_EXTENSIONALITY, se));

    let monotone = first_pair(bound, |x, y| geq(y, x) && !geq(values[y as usize], values[x as usize])).is_none();
    let strongly_bad = first_pair(bound, |x, y| values[x as usize] < values[y as usize] && !(x < y));
    let injective = first_pair(bound, |x, y| values[x as usize] == values[y as usize] && x != y).is_none();

    if monotone {
        laws.push(law(LAW_MONOTONE_STRONGLY, strongly_bad.clone()));
    } else {
        laws.push(LawResult::premise_unmet(LAW_MONOTONE_STRONGLY));
    }

    if strongly_bad.is_none() && injective {
        let mono_bad = first_pair(bound, |x, y| geq(y, x) && !geq(values[y as usize], values[x as usize]));
        laws.push(law(LAW_STRONGLY_INJECTIVE, mono_bad));
    } else {
        laws.push(LawResult::premise_unmet(LAW_STRONGLY_INJECTIVE));
    }

    AxiomReport { laws }
}

/// Result of [`find_non_descent`]: an index `i` with `α(i) ≤ α(i+1)` and the
/// descent through the values `α(0) > α(1) > … > α(i)`.
#[derive(Debug, Clone)]
pub struct NonDescent {
    pub index: u64,
    pub trace: DescentTrace<u64>,
}

/// Finds `i` with `alpha(i) ≤ alpha(i+1)` by descending through the values of
/// the sequence, starting at `alpha(0)`. The evidence carried at value `x` is
/// the position `n` with `alpha(n) = x`; each step advances the position by
/// one, so the answer is the first non-descent. At most `alpha(0) + 1` steps.
pub fn find_non_descent(alpha: impl Fn(u64) -> u64) -> NonDescent {
    let mut visited = Vec::new();
    let index = Nat
        .run::<u64, u64>(alpha(0), 0, &mut |x, n| {
            visited.push(*x);
            let next = alpha(n + 1);
            if alpha(n) <= next {
                Ok(Move::Done(n))
            } else {
                Ok(Move::Descend(next, n + 1))
            }
        })
        .expect("strict descent on ℕ always terminates within the bound");
    let found = *visited.last().expect("at least one step");
    let trace = DescentTrace::new(
        Nat.carrier_name(),
        visited,
        crate::engine::TraceOutcome::Found(found),
    );
    NonDescent { index, trace }
}
