use exwf::combinators::{
    check_structure_laws, restrict, CombinatorError, Coproduct, IndexedFamily, Pullback, Restriction, Sigma, Sum,
};
use exwf::{search, verify_trace, Flags, Nat, RawStructure, StepOutcome, Structure};
use proptest::prelude::*;

type Coarse = Pullback<RawStructure<u64>, Nat>;

/// Indices where `2k` and `2k+1` are equal, ordered by `k`.
fn coarse() -> Coarse {
    let raw = RawStructure::new("I", |a: &u64, b: &u64| a / 2 == b / 2, |a, b| a / 2 != b / 2, |a, b| a / 2 < b / 2)
        .with_flags(Flags::BOTH);
    let sample: Vec<u64> = (0..12).collect();
    Pullback::checked(raw, Nat, |i: &u64| i / 2, &sample).unwrap()
}

fn offset(i: &u64) -> u64 {
    i % 2
}

/// Component at `i` is `{x ∈ ℕ | x ≥ offset(i)}`; transports shift by the
/// difference of offsets.
fn shifted_family() -> IndexedFamily<Coarse, Restriction<Nat>> {
    IndexedFamily::new(
        coarse(),
        |i: &u64| {
            let o = offset(i);
            restrict(Nat, format!("ℕ≥{o}"), move |x: &u64| *x >= o)
        },
        |i, j, x| x - offset(i) + offset(j),
        Flags::BOTH,
    )
}

fn points(i: &u64) -> Vec<u64> {
    (offset(i)..offset(i) + 8).collect()
}

#[test]
fn forced_index_countdown() {
    let index = restrict(Nat, "[0,3]", |i: &u64| *i <= 3);
    let sigma = Sigma::new(IndexedFamily::constant(index, Nat));
    let d = search(&sigma, (2, 5), |&(i, x)| {
        if i == 0 {
            StepOutcome::Found((i, x))
        } else {
            StepOutcome::Descend((i - 1, 9))
        }
    })
    .unwrap();
    assert_eq!(d.found, (0, 9));
    assert_eq!(d.trace.visited, vec![(2, 5), (1, 9), (0, 9)]);
    assert!(verify_trace(&sigma, &d.trace));
    assert_eq!(sigma.render(&d.found), "(0; 9)");
}

#[test]
fn coherent_family_passes_and_searches() {
    let family = shifted_family();
    let indices: Vec<u64> = (0..8).collect();
    family.check_coherence(&indices, points).unwrap();
    let sigma = Sigma::new(family);
    let d = search(&sigma, (3, 10), |&(i, x)| {
        if i >= 2 {
            StepOutcome::Descend((i - 2, x + 5))
        } else if x >= 3 {
            StepOutcome::Descend((i ^ 1, x - 2))
        } else {
            StepOutcome::Found((i, x))
        }
    })
    .unwrap();
    // Moves to the other index of a class are transported back into the
    // current component, so the oracle keeps seeing index 1.
    let mut expected = vec![(3, 10)];
    expected.extend((2..=15).rev().map(|x| (1, x)));
    assert_eq!(d.trace.visited, expected);
    assert_eq!(d.found, (1, 2));
    assert!(verify_trace(&sigma, &d.trace));
}

#[test]
fn sigma_relations_are_extensional() {
    let sigma = Sigma::new(shifted_family());
    let sample: Vec<(u64, u64)> = (0..6).flat_map(|i| points(&i).into_iter().map(move |x| (i, x))).collect();
    for report in check_structure_laws(&sigma, &sample) {
        assert!(report.holds, "{report:?}");
    }
    assert!(sigma.equal(&(0, 4), &(1, 5)));
    assert!(sigma.less(&(1, 4), &(0, 4)));
}

#[test]
fn incoherent_family_is_rejected() {
    let family = IndexedFamily::new(
        coarse(),
        |_: &u64| Nat,
        |i: &u64, j: &u64, x: &u64| if i == j { *x } else { x + 1 },
        Flags::BOTH,
    );
    let indices: Vec<u64> = (0..4).collect();
    let err = family.check_coherence(&indices, |_| (0..4).collect()).unwrap_err();
    assert!(matches!(err, CombinatorError::CoherenceViolated { ref law, .. } if law == "triangle"), "{err}");
}

#[test]
fn first_projection_is_extensional_but_not_monotone() {
    let sigma = Sigma::new(IndexedFamily::pair(Nat, Nat));
    let sample: Vec<(u64, u64)> = (0..=1).flat_map(|i| (0..4).map(move |x| (i, x))).collect();
    let [ext, pres] = sigma.first_projection_reports(&sample);
    assert!(ext.holds);
    assert!(!pres.holds);
    assert_eq!(pres.counterexample, Some(vec!["(0; 0)".to_string(), "(0; 1)".to_string()]));
}

#[test]
fn flags_propagate() {
    let sigma = Sigma::new(IndexedFamily::pair(Nat, Nat));
    assert_eq!(sigma.flags(), Flags::BOTH);
    let raw = RawStructure::new("R", |a: &u64, b: &u64| a == b, |a, b| a != b, |a, b| a < b);
    let weak = Sigma::new(IndexedFamily::new(exwf::combinators::booleans(), move |_| raw.clone(), |_, _, x| *x, Flags::NONE));
    assert_eq!(weak.flags(), Flags::NONE);
}

fn to_sigma(s: &Sum<u64, u64>) -> (u64, u64) {
    match *s {
        Sum::Inl(x) => (0, x),
        Sum::Inr(y) => (1, y),
    }
}

fn to_sum(&(i, x): &(u64, u64)) -> Sum<u64, u64> {
    if i == 0 {
        Sum::Inl(x)
    } else {
        Sum::Inr(x)
    }
}

#[test]
fn pair_sigma_and_coproduct_agree_on_relations() {
    let sigma = Sigma::new(IndexedFamily::pair(Nat, Nat));
    let c = Coproduct::new(Nat, Nat);
    let sample: Vec<Sum<u64, u64>> = (0..6).flat_map(|a| [Sum::Inl(a), Sum::Inr(a)]).collect();
    for a in &sample {
        for b in &sample {
            let (sa, sb) = (to_sigma(a), to_sigma(b));
            assert_eq!(c.equal(a, b), sigma.equal(&sa, &sb));
            assert_eq!(c.apart(a, b), sigma.apart(&sa, &sb));
            assert_eq!(c.less(a, b), sigma.less(&sa, &sb));
        }
    }
}

proptest! {
    #[test]
    fn pair_sigma_and_coproduct_agree_on_searches(left in any::<bool>(), s in 0u64..=16, jump in 0u64..=16, target in 0u64..=16, m in 2u64..6) {
        let oracle = move |e: &Sum<u64, u64>| match *e {
            Sum::Inr(y) if y == jump || y == 0 => StepOutcome::Descend(Sum::Inl(target)),
            Sum::Inr(y) => StepOutcome::Descend(Sum::Inr(y - 1)),
            Sum::Inl(x) if x % m == 0 => StepOutcome::Found(Sum::Inl(x)),
            Sum::Inl(x) => StepOutcome::Descend(Sum::Inl(x - 1)),
        };
        let start = if left { Sum::Inl(s) } else { Sum::Inr(s) };
        let c = Coproduct::new(Nat, Nat);
        let sigma = Sigma::new(IndexedFamily::pair(Nat, Nat));
        let dc = search(&c, start.clone(), oracle).unwrap();
        let ds = search(&sigma, to_sigma(&start), |p| match oracle(&to_sum(p)) {
            StepOutcome::Found(e) => StepOutcome::Found(to_sigma(&e)),
            StepOutcome::Descend(e) => StepOutcome::Descend(to_sigma(&e)),
        }).unwrap();
        prop_assert_eq!(to_sigma(&dc.found), ds.found);
        prop_assert_eq!(dc.trace.visited.iter().map(to_sigma).collect::<Vec<_>>(), ds.trace.visited.clone());
        prop_assert!(verify_trace(&sigma, &ds.trace));
    }

    #[test]
    fn pulled_back_odd_map_searches_like_nat(start in 0u64..200, m in 2u64..20, a in 1u64..50) {
        let p = Pullback::checked(Nat, Nat, |x: &u64| 2 * x + 1, &(0..32).collect::<Vec<_>>()).unwrap();
        let oracle = move |x: &u64| if *x == 0 || x % m == 0 { StepOutcome::Found(*x) } else { StepOutcome::Descend((a * x) % x) };
        let dp = search(&p, start, oracle).unwrap();
        let dn = search(&Nat, start, oracle).unwrap();
        prop_assert_eq!(dp.trace.visited, dn.trace.visited);
        prop_assert!(p.flags().strong);
    }
}

#[test]
fn constant_map_breaks_the_contract() {
    let err = Pullback::checked(Nat, Nat, |_: &u64| 7, &(0..4).collect::<Vec<_>>()).err().unwrap();
    assert!(matches!(err, CombinatorError::ContractViolated { ref law, .. } if law == "relation-preservation"));
}

#[test]
fn start_outside_the_index_subset_is_rejected() {
    let index = restrict(Nat, "[0,3]", |i: &u64| *i <= 3);
    let sigma = Sigma::new(IndexedFamily::constant(index, Nat));
    let err = search(&sigma, (7, 0), |_| StepOutcome::Descend((5, 0))).unwrap_err();
    assert_eq!(err, exwf::SearchError::EscapedSubset { element: "7".into() });
}
