//! Seeded check suites: the ℕ axioms over a finite range, and randomized
//! properties of the searches built on top of them.
//!
//! Every randomized check draws from one `ChaCha8Rng` seeded by the caller,
//! in a fixed order, so a seed determines the whole report.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::arithmetic::{is_prime_oracle, prime_divisor_clnp, prime_divisor_descent};
use crate::combinators::{check_dichotomous, check_strong, Coproduct, Lex, Product, Sum};
use crate::complemented::{clnp_least, ComplementedSubset, ExtensionalSubset};
use crate::dsl::{parse, CmpOp, Pred, Term};
use crate::engine::{search, verify_trace, StepOutcome, WellFounded};
use crate::nat::{check_axiom_suite_with, check_function_laws, find_non_descent, LawStatus, Mutant, Nat, NatOracles};

/// The axiom laws quantify over triples, so their range is capped here.
pub const AXIOM_BOUND_CAP: u64 = 128;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    Axioms,
    Properties,
    All,
}

impl Suite {
    pub fn name(self) -> &'static str {
        match self {
            Suite::Axioms => "axioms",
            Suite::Properties => "properties",
            Suite::All => "all",
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct CheckOptions {
    pub bound: u64,
    pub seed: u64,
    /// Swaps the ℕ oracles under test for a known-bad set.
    pub mutant: Option<Mutant>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CheckItem {
    pub suite: &'static str,
    pub name: String,
    pub status: LawStatus,
    pub counterexample: Option<Vec<String>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CheckSummary {
    pub suite: &'static str,
    pub bound: u64,
    pub seed: u64,
    pub mutant: Option<&'static str>,
    pub passed: bool,
    pub checks: Vec<CheckItem>,
}

pub fn run_checks(suite: Suite, opts: &CheckOptions) -> CheckSummary {
    let mut checks = Vec::new();
    if matches!(suite, Suite::Axioms | Suite::All) {
        axioms(opts, &mut checks);
    }
    if matches!(suite, Suite::Properties | Suite::All) {
        properties(opts, &mut checks);
    }
    CheckSummary {
        suite: suite.name(),
        bound: opts.bound,
        seed: opts.seed,
        mutant: opts.mutant.map(Mutant::name),
        passed: checks.iter().all(|c| c.status != LawStatus::Fail),
        checks,
    }
}

fn item(suite: &'static str, name: impl Into<String>, counterexample: Option<Vec<String>>) -> CheckItem {
    CheckItem {
        suite,
        name: name.into(),
        status: if counterexample.is_some() { LawStatus::Fail } else { LawStatus::Pass },
        counterexample,
    }
}

fn axioms(opts: &CheckOptions, out: &mut Vec<CheckItem>) {
    let oracles = opts.mutant.map_or_else(NatOracles::canonical, Mutant::oracles);
    let bound = opts.bound.min(AXIOM_BOUND_CAP);
    for law in check_axiom_suite_with(&oracles, bound).laws {
        out.push(CheckItem {
            suite: "axioms",
            name: law.law,
            status: law.status,
            counterexample: law.counterexample.map(|c| c.iter().map(u64::to_string).collect()),
        });
    }
    let functions: [(&str, fn(u64) -> u64); 5] = [
        ("x", |x| x),
        ("2x+1", |x| 2 * x + 1),
        ("x/2", |x| x / 2),
        ("7", |_| 7),
        ("x mod 5", |x| x % 5),
    ];
    for (name, f) in functions {
        for law in check_function_laws(f, bound).laws {
            out.push(CheckItem {
                suite: "axioms",
                name: format!("{}[f = {name}]", law.law),
                status: law.status,
                counterexample: law.counterexample.map(|c| c.iter().map(u64::to_string).collect()),
            });
        }
    }
}

fn properties(opts: &CheckOptions, out: &mut Vec<CheckItem>) {
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let s = "properties";
    out.push(item(s, "descent-bound", descent_bound(&mut rng)));
    out.push(item(s, "clnp-brute-force", clnp_brute_force(&mut rng, opts.bound.min(256))));
    out.push(item(s, "prime-divisors", prime_divisors(opts.bound.clamp(2, 10_000))));
    out.push(item(s, "non-descent-scan", non_descent(&mut rng)));
    out.push(item(s, "product-search", product_search(&mut rng)));
    out.push(item(s, "coproduct-search", coproduct_search(&mut rng)));
    out.push(item(s, "lex-search", lex_search(&mut rng)));
    out.push(item(s, "flag-propagation", flags()));
    out.push(item(s, "dsl-round-trip", dsl_round_trip(&mut rng)));
}

/// A random step oracle on ℕ: `Found` on a random residue class or at 0,
/// otherwise a pseudo-random smaller value.
fn nat_oracle(rng: &mut ChaCha8Rng) -> impl Fn(&u64) -> StepOutcome<u64> {
    let (m, r, a, b) = (rng.gen_range(2..40u64), rng.gen_range(0..40u64), rng.gen_range(1..100u64), rng.gen_range(0..100u64));
    move |x: &u64| {
        if *x == 0 || x % m == r {
            StepOutcome::Found(*x)
        } else {
            StepOutcome::Descend((a * x + b) % x)
        }
    }
}

fn descent_bound(rng: &mut ChaCha8Rng) -> Option<Vec<String>> {
    for _ in 0..200 {
        let start = rng.gen_range(0..=512u64);
        let oracle = nat_oracle(rng);
        match search(&Nat, start, oracle) {
            Ok(d) if d.trace.steps as u64 <= start + 1 && verify_trace(&Nat, &d.trace) => {}
            _ => return Some(vec![start.to_string()]),
        }
    }
    None
}

fn clnp_brute_force(rng: &mut ChaCha8Rng, universe: u64) -> Option<Vec<String>> {
    for _ in 0..100 {
        let density = rng.gen_range(0.02..0.5);
        let mut bits: Vec<bool> = (0..=universe).map(|_| rng.gen_bool(density)).collect();
        let forced = rng.gen_range(0..=universe) as usize;
        bits[forced] = true;
        let members: Vec<u64> = (0..=universe).filter(|&x| bits[x as usize]).collect();
        let min = members[0];
        let a1 = members[rng.gen_range(0..members.len())];
        let b1 = bits.clone();
        let provers = ExtensionalSubset::new("A¹", move |x| b1.get(x as usize).copied().unwrap_or(false));
        let refuters = ExtensionalSubset::new("A⁰", move |x| !bits.get(x as usize).copied().unwrap_or(false));
        let least = ComplementedSubset::with_check_bound(provers, refuters, universe)
            .and_then(|a| clnp_least(&a, a1).map(|cert| cert.mu == min && cert.verify(&a)));
        if least != Ok(true) {
            return Some(vec![format!("{members:?}"), a1.to_string()]);
        }
    }
    None
}

fn prime_divisors(limit: u64) -> Option<Vec<String>> {
    for n in 2..=limit {
        let smallest = (2..=n).find(|d| n % d == 0).unwrap_or(n);
        let (Ok(descent), Ok(clnp)) = (prime_divisor_descent(n), prime_divisor_clnp(n)) else {
            return Some(vec![n.to_string()]);
        };
        let (descent, clnp) = (descent.p, clnp.p);
        if descent != smallest || !is_prime_oracle(clnp) || n % clnp != 0 {
            return Some(vec![n.to_string(), descent.to_string(), clnp.to_string()]);
        }
    }
    None
}

fn non_descent(rng: &mut ChaCha8Rng) -> Option<Vec<String>> {
    for _ in 0..100 {
        let table: Vec<u64> = match rng.gen_range(0..4) {
            0 => vec![rng.gen_range(0..50)],
            1 => {
                let (top, step, floor) = (rng.gen_range(0..200u64), rng.gen_range(1..5u64), rng.gen_range(0..20u64));
                (0..100).map(|n| top.saturating_sub(n * step).max(floor)).collect()
            }
            2 => (0..20).map(|n| n * rng.gen_range(1..4u64)).collect(),
            _ => (0..30).map(|_| rng.gen_range(0..60)).collect(),
        };
        let alpha = |n: u64| table[(n as usize).min(table.len() - 1)];
        let scan = (0..).find(|&i| alpha(i) <= alpha(i + 1)).unwrap_or(0);
        let found = find_non_descent(alpha);
        if found.index != scan {
            return Some(vec![format!("{table:?}"), found.index.to_string(), scan.to_string()]);
        }
    }
    None
}

fn product_search(rng: &mut ChaCha8Rng) -> Option<Vec<String>> {
    let p = Product::new(Nat, Nat);
    for _ in 0..50 {
        let start = (rng.gen_range(0..=16u64), rng.gen_range(0..=16u64));
        let (m, a) = (rng.gen_range(2..6u64), rng.gen_range(1..7u64));
        let oracle = move |&(x, y): &(u64, u64)| {
            if x == 0 || y == 0 || (x + y) % m == 0 {
                StepOutcome::Found((x, y))
            } else {
                StepOutcome::Descend(((a * x) % x, (a * y + 1) % y))
            }
        };
        if !certified(&p, start, oracle) {
            return Some(vec![format!("{start:?}")]);
        }
    }
    None
}

fn coproduct_search(rng: &mut ChaCha8Rng) -> Option<Vec<String>> {
    let c = Coproduct::new(Nat, Nat);
    for _ in 0..50 {
        let start = if rng.gen_bool(0.5) { Sum::Inl(rng.gen_range(0..=16u64)) } else { Sum::Inr(rng.gen_range(0..=16u64)) };
        let (jump, target, m) = (rng.gen_range(0..=16u64), rng.gen_range(0..=16u64), rng.gen_range(2..6u64));
        let oracle = move |s: &Sum<u64, u64>| match *s {
            Sum::Inr(y) if y == jump || y == 0 => StepOutcome::Descend(Sum::Inl(target)),
            Sum::Inr(y) => StepOutcome::Descend(Sum::Inr(y - 1)),
            Sum::Inl(x) if x == 0 || x % m == 0 => StepOutcome::Found(Sum::Inl(x)),
            Sum::Inl(x) => StepOutcome::Descend(Sum::Inl(x - 1)),
        };
        if !certified(&c, start.clone(), oracle) {
            return Some(vec![format!("{start:?}")]);
        }
    }
    None
}

fn lex_search(rng: &mut ChaCha8Rng) -> Option<Vec<String>> {
    let l = Lex::new(Nat, Nat);
    for _ in 0..50 {
        let start = (rng.gen_range(0..=16u64), rng.gen_range(0..=16u64));
        let (k, m) = (rng.gen_range(0..=16u64), rng.gen_range(2..9u64));
        let oracle = move |&(x, y): &(u64, u64)| {
            if (x, y) == (0, 0) || (x * 17 + y) % m == 0 {
                StepOutcome::Found((x, y))
            } else if y > 0 {
                StepOutcome::Descend((x, y - 1))
            } else {
                StepOutcome::Descend((x - 1, k))
            }
        };
        if !certified(&l, start, oracle) {
            return Some(vec![format!("{start:?}")]);
        }
    }
    None
}

fn certified<S: WellFounded>(s: &S, start: S::Elem, oracle: impl Fn(&S::Elem) -> StepOutcome<S::Elem>) -> bool {
    match search(s, start, &oracle) {
        Ok(d) => verify_trace(s, &d.trace) && matches!(oracle(&d.found), StepOutcome::Found(_)),
        Err(_) => false,
    }
}

fn flags() -> Option<Vec<String>> {
    let grid: Vec<(u64, u64)> = (0..=8).flat_map(|a| (0..=8).map(move |b| (a, b))).collect();
    let sums: Vec<Sum<u64, u64>> = (0..=8).flat_map(|a| [Sum::Inl(a), Sum::Inr(a)]).collect();
    let product = Product::new(Nat, Nat);
    let lex = Lex::new(Nat, Nat);
    let coproduct = Coproduct::new(Nat, Nat);
    let reports = [
        ("product strong", check_strong(&product, &grid).holds),
        ("product not dichotomous", !check_dichotomous(&product, &grid).holds),
        ("lex strong", check_strong(&lex, &grid).holds),
        ("lex dichotomous", check_dichotomous(&lex, &grid).holds),
        ("coproduct strong", check_strong(&coproduct, &sums).holds),
        ("coproduct dichotomous", check_dichotomous(&coproduct, &sums).holds),
    ];
    reports.iter().find(|(_, ok)| !ok).map(|(name, _)| vec![name.to_string()])
}

/// A random predicate in `x` of the given depth.
pub fn random_pred(rng: &mut impl Rng, depth: u32) -> Pred {
    let leaf = depth == 0 || rng.gen_bool(0.3);
    if leaf {
        return match rng.gen_range(0..6) {
            0 => Pred::True,
            1 => Pred::False,
            2 => Pred::Prime(random_term(rng, 1)),
            3 => Pred::Coprime(random_term(rng, 1)),
            4 => Pred::Divides(random_term(rng, 1), random_term(rng, 2)),
            _ => Pred::Cmp(CmpOp::ALL[rng.gen_range(0..6)], random_term(rng, 2), random_term(rng, 2)),
        };
    }
    let choice = rng.gen_range(0..3);
    let mut sub = || Box::new(random_pred(rng, depth - 1));
    match choice {
        0 => Pred::Not(sub()),
        1 => Pred::And(sub(), sub()),
        _ => Pred::Or(sub(), sub()),
    }
}

/// A random arithmetic expression in `x` of the given depth.
pub fn random_term(rng: &mut impl Rng, depth: u32) -> Term {
    if depth == 0 || rng.gen_bool(0.4) {
        return if rng.gen_bool(0.5) { Term::Var("x".into()) } else { Term::Lit(rng.gen_range(0..20)) };
    }
    let (a, b) = (Box::new(random_term(rng, depth - 1)), Box::new(random_term(rng, depth - 1)));
    match rng.gen_range(0..4) {
        0 => Term::Add(a, b),
        1 => Term::Sub(a, b),
        2 => Term::Mul(a, b),
        _ => Term::Mod(a, b),
    }
}

fn dsl_round_trip(rng: &mut ChaCha8Rng) -> Option<Vec<String>> {
    for _ in 0..200 {
        let p = random_pred(rng, 4);
        let printed = p.to_string();
        if parse(&printed).as_ref() != Ok(&p) {
            return Some(vec![printed]);
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;

    fn opts(seed: u64, mutant: Option<Mutant>) -> CheckOptions {
        CheckOptions { bound: 64, seed, mutant }
    }

    #[test]
    fn canonical_suites_pass() {
        let summary = run_checks(Suite::All, &opts(42, None));
        let failed: Vec<_> = summary.checks.iter().filter(|c| c.status == LawStatus::Fail).collect();
        assert!(failed.is_empty(), "{failed:?}");
        assert!(summary.passed);
    }

    #[test]
    fn mutants_fail_with_counterexamples() {
        for m in Mutant::ALL {
            let summary = run_checks(Suite::Axioms, &opts(0, Some(m)));
            assert!(!summary.passed, "{}", m.name());
            assert!(summary.checks.iter().any(|c| c.counterexample.is_some()));
        }
    }

    #[test]
    fn seeds_are_deterministic() {
        let a = serde_json::to_string(&run_checks(Suite::Properties, &opts(7, None))).unwrap();
        let b = serde_json::to_string(&run_checks(Suite::Properties, &opts(7, None))).unwrap();
        assert_eq!(a, b);
    }
}
