use serde::Serialize;

use crate::engine::{Move, SearchError, Structure, WellFounded};

/// Outcome of a law checked over a finite sample.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SampleReport {
    pub law: String,
    pub holds: bool,
    /// Rendered elements of the first failing tuple.
    pub counterexample: Option<Vec<String>>,
}

impl SampleReport {
    pub(crate) fn holds(law: &str) -> Self {
        SampleReport {
            law: law.to_string(),
            holds: true,
            counterexample: None,
        }
    }

    pub(crate) fn refuted(self, counterexample: Vec<String>) -> Self {
        SampleReport {
            holds: false,
            counterexample: Some(counterexample),
            ..self
        }
    }
}

fn first_pair<S: Structure + ?Sized>(
    s: &S,
    law: &str,
    sample: &[S::Elem],
    bad: impl Fn(&S::Elem, &S::Elem) -> bool,
) -> SampleReport {
    for a in sample {
        for b in sample {
            if bad(a, b) {
                return SampleReport::holds(law).refuted(vec![s.render(a), s.render(b)]);
            }
        }
    }
    SampleReport::holds(law)
}

/// `x < y ⇒ x ≠ y` on every sampled pair.
pub fn check_strong<S: Structure + ?Sized>(s: &S, sample: &[S::Elem]) -> SampleReport {
    first_pair(s, "strong", sample, |a, b| s.less(a, b) && !s.apart(a, b))
}

/// `x ≠ y ⇒ x < y ∨ y < x` on every sampled pair.
pub fn check_dichotomous<S: Structure + ?Sized>(s: &S, sample: &[S::Elem]) -> SampleReport {
    first_pair(s, "dichotomous", sample, |a, b| {
        s.apart(a, b) && !s.less(a, b) && !s.less(b, a)
    })
}

/// The laws every structure must satisfy: equality is an equivalence,
/// apartness excludes equality and is symmetric, both relations are
/// extensional, and the strict relation is irreflexive.
pub fn check_structure_laws<S: Structure + ?Sized>(s: &S, sample: &[S::Elem]) -> Vec<SampleReport> {
    let r = |a: &S::Elem| s.render(a);
    let mut reports = vec![
        first_pair(s, "eq-reflexive", sample, |a, _| !s.equal(a, a)),
        first_pair(s, "eq-symmetric", sample, |a, b| s.equal(a, b) && !s.equal(b, a)),
        first_pair(s, "apart-irreflexive", sample, |a, b| s.equal(a, b) && s.apart(a, b)),
        first_pair(s, "apart-symmetric", sample, |a, b| s.apart(a, b) && !s.apart(b, a)),
        first_pair(s, "less-irreflexive", sample, |a, _| s.less(a, a)),
    ];

    let mut transitive = SampleReport::holds("eq-transitive");
    let mut less_ext = SampleReport::holds("less-extensional");
    let mut apart_ext = SampleReport::holds("apart-extensional");
    let equal_pairs: Vec<(&S::Elem, &S::Elem)> = sample
        .iter()
        .flat_map(|a| sample.iter().map(move |b| (a, b)))
        .filter(|(a, b)| s.equal(a, b))
        .collect();
    'outer: for &(a, a2) in &equal_pairs {
        for &(b, b2) in &equal_pairs {
            if transitive.holds && std::ptr::eq(a2, b) && !s.equal(a, b2) {
                transitive = transitive.refuted(vec![r(a), r(b), r(b2)]);
            }
            if less_ext.holds && s.less(a, b) && !s.less(a2, b2) {
                less_ext = less_ext.refuted(vec![r(a), r(a2), r(b), r(b2)]);
            }
            if apart_ext.holds && s.apart(a, b) && !s.apart(a2, b2) {
                apart_ext = apart_ext.refuted(vec![r(a), r(a2), r(b), r(b2)]);
            }
            if !(transitive.holds || less_ext.holds || apart_ext.holds) {
                break 'outer;
            }
        }
    }
    reports.extend([transitive, less_ext, apart_ext]);
    reports
}

/// How a claimed "no minimal elements" oracle broke down.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case", tag = "kind")]
pub enum Violation {
    /// The oracle had no answer at `at`.
    Undefined { at: String },
    /// The answer at `at` lies outside the subset.
    Escaped { at: String, to: String },
    /// The answer at `at` is not below it.
    NotSmaller { at: String, to: String },
    /// The descent itself failed (raw structures only).
    Search { error: String },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case", tag = "result")]
pub enum EmptinessReport {
    /// No inhabitant to start from, so nothing to refute.
    Vacuous,
    Refuted {
        inhabitant: String,
        violation: Violation,
        steps: usize,
    },
}

/// Runs a claimed "no minimal elements" oracle for `A` from the first
/// inhabitant of `A` among `candidates`.
///
/// On a well-founded structure the iteration `a, no_min(a), …` cannot go on
/// forever, so it must break down: the oracle is undefined somewhere, leaves
/// `A`, or fails to descend. The report names the first such point. If no
/// candidate is in `A` the check passes vacuously.
pub fn strongly_empty_check<S, M, N>(s: &S, member: M, no_min: N, candidates: &[S::Elem]) -> EmptinessReport
where
    S: WellFounded + ?Sized,
    M: Fn(&S::Elem) -> bool,
    N: Fn(&S::Elem) -> Option<S::Elem>,
{
    let Some(a0) = candidates.iter().find(|a| member(a)) else {
        return EmptinessReport::Vacuous;
    };
    let mut steps = 0usize;
    let result = s.run::<(), Violation>(a0.clone(), (), &mut |a, ()| {
        steps += 1;
        let at = s.render(a);
        Ok(match no_min(a) {
            None => Move::Done(Violation::Undefined { at }),
            Some(b) if !member(&b) => Move::Done(Violation::Escaped { at, to: s.render(&b) }),
            Some(b) if !s.less(&b, a) => Move::Done(Violation::NotSmaller { at, to: s.render(&b) }),
            Some(b) => Move::Descend(b, ()),
        })
    });
    let violation = result.unwrap_or_else(|e: SearchError| Violation::Search { error: e.to_string() });
    EmptinessReport::Refuted {
        inhabitant: s.render(a0),
        violation,
        steps,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::combinators::{Lex, Product};
    use crate::engine::{Flags, RawStructure};
    use crate::nat::Nat;

    fn grid(n: u64) -> Vec<(u64, u64)> {
        (0..=n).flat_map(|a| (0..=n).map(move |b| (a, b))).collect()
    }

    #[test]
    fn nat_is_strong_and_dichotomous() {
        let sample: Vec<u64> = (0..=64).collect();
        assert!(check_strong(&Nat, &sample).holds);
        assert!(check_dichotomous(&Nat, &sample).holds);
        assert!(check_structure_laws(&Nat, &sample).iter().all(|r| r.holds));
    }

    #[test]
    fn componentwise_product_is_not_dichotomous() {
        let p = Product::new(Nat, Nat);
        let report = check_dichotomous(&p, &grid(8));
        assert!(!report.holds);
        // Apart because 0 < 1 in the second coordinate, yet incomparable.
        assert_eq!(report.counterexample, Some(vec!["(0,0)".to_string(), "(0,1)".to_string()]));
        let crossed = check_dichotomous(&p, &[(0, 1), (1, 0)]);
        assert_eq!(crossed.counterexample, Some(vec!["(0,1)".to_string(), "(1,0)".to_string()]));
        assert!(check_strong(&p, &grid(8)).holds);
    }

    #[test]
    fn lex_product_is_dichotomous() {
        let l = Lex::new(Nat, Nat);
        assert!(check_dichotomous(&l, &grid(8)).holds);
        assert!(check_strong(&l, &grid(8)).holds);
    }

    #[test]
    fn broken_structure_laws_are_reported() {
        let bad = RawStructure::new("bad", |a: &u64, b: &u64| a == b, |a, b| a != b, |a, b| a <= b)
            .with_flags(Flags::BOTH);
        let sample: Vec<u64> = (0..4).collect();
        let reports = check_structure_laws(&bad, &sample);
        let irreflexive = reports.iter().find(|r| r.law == "less-irreflexive").unwrap();
        assert!(!irreflexive.holds);
        assert!(!check_strong(&bad, &sample).holds);
    }

    #[test]
    fn emptiness_examples() {
        let cands: Vec<u64> = (0..=10).rev().collect();
        let r = strongly_empty_check(&Nat, |a| *a <= 10, |a: &u64| a.checked_sub(1), &cands);
        assert_eq!(
            r,
            EmptinessReport::Refuted {
                inhabitant: "10".into(),
                violation: Violation::Undefined { at: "0".into() },
                steps: 11
            }
        );

        let cands = [10u64];
        let r = strongly_empty_check(&Nat, |a| *a > 0 && a % 2 == 0, |a: &u64| Some(a - 2), &cands);
        let EmptinessReport::Refuted { violation, .. } = r else { panic!() };
        assert_eq!(violation, Violation::Escaped { at: "2".into(), to: "0".into() });

        let r = strongly_empty_check(&Nat, |_| false, |a: &u64| Some(*a), &[1, 2, 3]);
        assert_eq!(r, EmptinessReport::Vacuous);

        let r = strongly_empty_check(&Nat, |_| true, |a: &u64| Some(*a), &[3]);
        let EmptinessReport::Refuted { violation, steps, .. } = r else { panic!() };
        assert_eq!((violation, steps), (Violation::NotSmaller { at: "3".into(), to: "3".into() }, 1));
    }
}
