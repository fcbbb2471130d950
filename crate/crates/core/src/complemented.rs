//! Complemented subsets of ℕ and the constructive least number principle.
//!
//! A complemented subset is a pair of membership oracles, provers `A¹` and
//! refuters `A⁰`, that never accept the same number. It need not be total:
//! some numbers may be neither provers nor refuters. The least element of
//! `A¹` is found by descent whenever the subset is downset located, i.e. at
//! every prover `x¹` one can either show that every domain element below `x¹`
//! is a refuter or exhibit a smaller prover.
//!
//! On ℕ apartness is negated equality, so the weak and the strong complement
//! of a subset coincide and only the strong one is provided.

use std::cell::RefCell;
use std::fmt;
use std::sync::Arc;

use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::engine::{
    try_search_traced, DescentTrace, SearchError, StepOutcome, Structure, TraceOutcome, TraceRecord,
};
use crate::nat::Nat;

pub const DEFAULT_CHECK_BOUND: u64 = 1024;

/// Answer of a membership oracle. Oracles backed by decidable predicates
/// never return `Undetermined`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Truth {
    Holds,
    Fails,
    Undetermined,
}

impl From<bool> for Truth {
    fn from(b: bool) -> Self {
        if b {
            Truth::Holds
        } else {
            Truth::Fails
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ComplementedError {
    #[error("provers and refuters share the element {0}")]
    DisjointnessViolated(u64),
    #[error("membership of {0} in the downset cannot be decided")]
    NotLocatable(u64),
    #[error("no enumeration bound available")]
    MissingBound,
    #[error("{0} is not a prover")]
    NotAProver(u64),
    #[error("{x1} is a prover below the claimed least element {mu}")]
    LeastViolated { x1: u64, mu: u64 },
    #[error("map is not strictly monotone: {x} < {y} but f({x}) = {fx} >= f({y}) = {fy}")]
    NotMonotone { x: u64, y: u64, fx: u64, fy: u64 },
    #[error("onto witness {witness} for prover {prover} maps to {image}")]
    OntoWitnessInvalid { prover: u64, witness: u64, image: u64 },
    #[error("locator answered overlap {witness} at {at}, which is not a smaller prover")]
    BadOverlap { at: u64, witness: u64 },
    #[error("subset '{description}' claims bound {bound} but contains {element}")]
    BoundViolated { description: String, bound: u64, element: u64 },
    #[error(transparent)]
    Search(#[from] SearchError),
}

type MemberFn = Arc<dyn Fn(u64) -> Truth + Send + Sync>;

/// A subset of ℕ given by a membership oracle. Extensionality is automatic:
/// membership depends on the value only.
#[derive(Clone)]
pub struct ExtensionalSubset {
    member: MemberFn,
    bound: Option<u64>,
    description: String,
}

impl fmt::Debug for ExtensionalSubset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ExtensionalSubset")
            .field("description", &self.description)
            .field("bound", &self.bound)
            .finish()
    }
}

impl ExtensionalSubset {
    pub fn new(description: impl Into<String>, member: impl Fn(u64) -> bool + Send + Sync + 'static) -> Self {
        ExtensionalSubset {
            member: Arc::new(move |x| Truth::from(member(x))),
            bound: None,
            description: description.into(),
        }
    }

    /// A subset whose oracle may fail to decide membership.
    pub fn partial(description: impl Into<String>, member: impl Fn(u64) -> Truth + Send + Sync + 'static) -> Self {
        ExtensionalSubset {
            member: Arc::new(member),
            bound: None,
            description: description.into(),
        }
    }

    pub fn with_bound(mut self, bound: u64) -> Self {
        self.bound = Some(bound);
        self
    }

    pub fn empty() -> Self {
        ExtensionalSubset::new("∅", |_| false).with_bound(0)
    }

    pub fn singleton(n: u64) -> Self {
        ExtensionalSubset::new(format!("{{{n}}}"), move |x| x == n).with_bound(n)
    }

    pub fn finite(elements: impl IntoIterator<Item = u64>) -> Self {
        let mut elements: Vec<u64> = elements.into_iter().collect();
        elements.sort_unstable();
        elements.dedup();
        let bound = elements.last().copied().unwrap_or(0);
        let description = format!(
            "{{{}}}",
            elements.iter().map(u64::to_string).collect::<Vec<_>>().join(",")
        );
        ExtensionalSubset::new(description, move |x| elements.binary_search(&x).is_ok()).with_bound(bound)
    }

    pub fn contains(&self, x: u64) -> Truth {
        (self.member)(x)
    }

    /// `true` only when membership is established.
    pub fn member(&self, x: u64) -> bool {
        self.contains(x) == Truth::Holds
    }

    pub fn bound(&self) -> Option<u64> {
        self.bound
    }

    pub fn description(&self) -> &str {
        &self.description
    }

    /// Checks the claimed bound on the 64 numbers past it.
    pub fn check_bound(&self) -> Result<(), ComplementedError> {
        let Some(bound) = self.bound else { return Ok(()) };
        for x in bound.saturating_add(1)..=bound.saturating_add(64) {
            if self.member(x) {
                return Err(ComplementedError::BoundViolated {
                    description: self.description.clone(),
                    bound,
                    element: x,
                });
            }
        }
        Ok(())
    }

    /// Members in `[0, bound]`, ascending.
    pub fn members_up_to(&self, bound: u64) -> Vec<u64> {
        (0..=bound).filter(|&x| self.member(x)).collect()
    }
}

/// `{x | ∀a ∈ A. x ≠ a}`, computed by enumerating `A` up to its bound (or
/// the one supplied).
pub fn strong_complement(a: &ExtensionalSubset, bound: Option<u64>) -> Result<ExtensionalSubset, ComplementedError> {
    let bound = bound.or(a.bound).ok_or(ComplementedError::MissingBound)?;
    let members = a.members_up_to(bound);
    let description = format!("{}^≠", a.description);
    Ok(ExtensionalSubset::new(description, move |x| {
        members.iter().all(|m| Nat.apart(&x, m))
    }))
}

/// Smallest common element of `a` and `b` in `[0, bound]`.
pub fn overlaps(a: &ExtensionalSubset, b: &ExtensionalSubset, bound: u64) -> Option<u64> {
    (0..=bound).find(|&x| a.member(x) && b.member(x))
}

/// A pair of strongly disjoint subsets: provers `A¹` and refuters `A⁰`.
#[derive(Clone, Debug)]
pub struct ComplementedSubset {
    provers: ExtensionalSubset,
    refuters: ExtensionalSubset,
    check_bound: u64,
}

impl ComplementedSubset {
    /// Builds the pair, checking disjointness on the larger of the two
    /// bounds, or on `[0, 1024]` when neither subset has one.
    pub fn new(provers: ExtensionalSubset, refuters: ExtensionalSubset) -> Result<Self, ComplementedError> {
        let check_bound = match (provers.bound, refuters.bound) {
            (None, None) => DEFAULT_CHECK_BOUND,
            (a, b) => a.unwrap_or(0).max(b.unwrap_or(0)),
        };
        Self::with_check_bound(provers, refuters, check_bound)
    }

    pub fn with_check_bound(
        provers: ExtensionalSubset,
        refuters: ExtensionalSubset,
        check_bound: u64,
    ) -> Result<Self, ComplementedError> {
        let s = ComplementedSubset {
            provers,
            refuters,
            check_bound,
        };
        s.check_disjoint(check_bound)?;
        Ok(s)
    }

    /// `(A, A^≠)`, total by construction.
    pub fn with_strong_complement(a: ExtensionalSubset, bound: u64) -> Result<Self, ComplementedError> {
        let complement = strong_complement(&a, Some(bound))?;
        Self::with_check_bound(a, complement, bound)
    }

    pub fn provers(&self) -> &ExtensionalSubset {
        &self.provers
    }

    pub fn refuters(&self) -> &ExtensionalSubset {
        &self.refuters
    }

    pub fn check_bound(&self) -> u64 {
        self.check_bound
    }

    pub fn is_prover(&self, x: u64) -> bool {
        self.provers.member(x)
    }

    pub fn is_refuter(&self, x: u64) -> bool {
        self.refuters.member(x)
    }

    /// Membership in `dom(A) = A¹ ∪ A⁰`.
    pub fn in_domain(&self, x: u64) -> Truth {
        match (self.provers.contains(x), self.refuters.contains(x)) {
            (Truth::Holds, _) | (_, Truth::Holds) => Truth::Holds,
            (Truth::Fails, Truth::Fails) => Truth::Fails,
            _ => Truth::Undetermined,
        }
    }

    /// Exhaustive strong-disjointness check on `[0, bound]`; reports the
    /// smallest shared element.
    pub fn check_disjoint(&self, bound: u64) -> Result<(), ComplementedError> {
        match overlaps(&self.provers, &self.refuters, bound) {
            Some(x) => Err(ComplementedError::DisjointnessViolated(x)),
            None => Ok(()),
        }
    }

    /// Every number in `[0, bound]` is a prover or a refuter.
    pub fn is_total_on(&self, bound: u64) -> bool {
        (0..=bound).all(|x| self.in_domain(x) == Truth::Holds)
    }
}

/// `𝒟_A(x) = {y ∈ dom(A) | y < x}`.
pub fn downset(a: &ComplementedSubset, x: u64) -> ExtensionalSubset {
    let a = a.clone();
    let description = format!("𝒟({x})");
    ExtensionalSubset::partial(description, move |y| {
        if y < x {
            a.in_domain(y)
        } else {
            Truth::Fails
        }
    })
    .with_bound(x.saturating_sub(1))
}

/// Answer of a locator at a prover `x¹`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum LocatednessAnswer {
    /// Every domain element below `x¹` is a refuter.
    IncludedInRefuters,
    /// A prover strictly below `x¹`.
    Overlap(u64),
}

impl LocatednessAnswer {
    /// An overlap answer, checked to be a prover below `x1`.
    pub fn overlap(a: &ComplementedSubset, x1: u64, y: u64) -> Result<Self, ComplementedError> {
        if y < x1 && a.is_prover(y) {
            Ok(LocatednessAnswer::Overlap(y))
        } else {
            Err(ComplementedError::BadOverlap { at: x1, witness: y })
        }
    }
}

pub type Locator = Arc<dyn Fn(u64) -> Result<LocatednessAnswer, ComplementedError> + Send + Sync>;

/// Decides downset locatedness at the prover `x1` by scanning `0..x1`
/// upward. The first prover found is returned as the overlap witness.
pub fn locate(a: &ComplementedSubset, x1: u64) -> Result<LocatednessAnswer, ComplementedError> {
    if !a.is_prover(x1) {
        return Err(ComplementedError::NotAProver(x1));
    }
    for y in 0..x1 {
        match a.provers.contains(y) {
            Truth::Holds => return Ok(LocatednessAnswer::Overlap(y)),
            Truth::Undetermined => return Err(ComplementedError::NotLocatable(y)),
            // Either a refuter or outside the domain; both are fine.
            Truth::Fails => {}
        }
    }
    Ok(LocatednessAnswer::IncludedInRefuters)
}

/// [`locate`] packaged as a [`Locator`].
pub fn scanning_locator(a: &ComplementedSubset) -> Locator {
    let a = a.clone();
    Arc::new(move |x1| locate(&a, x1))
}

/// A least element `μ` of `A¹` with the descent that produced it.
#[derive(Debug, Clone)]
pub struct LeastElementCert {
    pub mu: u64,
    /// Every domain element below `μ` was checked to be a refuter, so the
    /// certificate covers `[0, verified_bound]` with `verified_bound = μ`.
    pub verified_bound: u64,
    pub trace: DescentTrace<u64>,
}

#[derive(Serialize)]
struct CertRecord<'a> {
    mu: u64,
    verified_bound: u64,
    trace: &'a TraceRecord,
}

impl Serialize for LeastElementCert {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let trace = self.trace.record(|x| x.to_string());
        CertRecord {
            mu: self.mu,
            verified_bound: self.verified_bound,
            trace: &trace,
        }
        .serialize(serializer)
    }
}

impl LeastElementCert {
    /// Re-checks the least-element condition directly on the oracles.
    pub fn verify(&self, a: &ComplementedSubset) -> bool {
        a.is_prover(self.mu)
            && (0..self.mu.min(self.verified_bound.saturating_add(1)))
                .all(|x| a.in_domain(x) != Truth::Holds || a.is_refuter(x))
    }
}

/// Least element of `A¹` by descent from the prover `a1`, using the scanning
/// locator.
pub fn clnp_least(a: &ComplementedSubset, a1: u64) -> Result<LeastElementCert, ComplementedError> {
    clnp_least_with(a, a1, &scanning_locator(a))
}

/// Least element of `A¹` by descent from the prover `a1` under the given
/// locator.
///
/// The descent runs over provers: an `IncludedInRefuters` answer at `x`
/// makes `x` the least element, an `Overlap(y)` answer moves to `y`. At
/// `a1 = 0` the answer is `0` outright and the locator is not consulted.
pub fn clnp_least_with(
    a: &ComplementedSubset,
    a1: u64,
    locator: &Locator,
) -> Result<LeastElementCert, ComplementedError> {
    a.check_disjoint(a.check_bound)?;
    if !a.is_prover(a1) {
        return Err(ComplementedError::NotAProver(a1));
    }
    if a1 == 0 {
        let trace = DescentTrace::new("ℕ", vec![0], TraceOutcome::Found(0));
        return Ok(LeastElementCert {
            mu: 0,
            verified_bound: 0,
            trace,
        });
    }
    let failure: RefCell<Option<ComplementedError>> = RefCell::new(None);
    let trace = try_search_traced(&Nat, a1, |&x| {
        let answer = locator(x).and_then(|ans| match ans {
            LocatednessAnswer::IncludedInRefuters => Ok(ans),
            LocatednessAnswer::Overlap(y) => LocatednessAnswer::overlap(a, x, y),
        });
        match answer {
            Ok(LocatednessAnswer::IncludedInRefuters) => Ok(StepOutcome::Found(x)),
            Ok(LocatednessAnswer::Overlap(y)) => Ok(StepOutcome::Descend(y)),
            Err(e) => {
                let message = e.to_string();
                *failure.borrow_mut() = Some(e);
                Err(SearchError::Aborted(message))
            }
        }
    });
    if let Some(e) = failure.into_inner() {
        return Err(e);
    }
    match trace.outcome {
        TraceOutcome::Found(mu) => Ok(LeastElementCert {
            mu,
            verified_bound: mu,
            trace,
        }),
        TraceOutcome::Error(e) => Err(e.into()),
    }
}

/// The locator a least element induces: at `x¹ = μ` the downset lies in the
/// refuters, above it `μ` itself is the overlap witness.
pub fn locator_from_least(
    a: &ComplementedSubset,
    cert: &LeastElementCert,
    x1: u64,
) -> Result<LocatednessAnswer, ComplementedError> {
    if !a.is_prover(x1) {
        return Err(ComplementedError::NotAProver(x1));
    }
    let mu = cert.mu;
    if x1 < mu {
        Err(ComplementedError::LeastViolated { x1, mu })
    } else if x1 == mu {
        Ok(LocatednessAnswer::IncludedInRefuters)
    } else {
        LocatednessAnswer::overlap(a, x1, mu)
    }
}

/// Two least elements of the same subset coincide. A `false` result means
/// one of them was not least.
pub fn check_least_uniqueness(a: &ComplementedSubset, mu: u64, nu: u64) -> bool {
    a.is_prover(mu) && a.is_prover(nu) && mu == nu
}

pub type NatFn = Arc<dyn Fn(u64) -> u64 + Send + Sync>;

/// `f⁻¹(B) = (f⁻¹(B¹), f⁻¹(B⁰))`, checked for disjointness on B's check bound.
pub fn preimage(f: NatFn, b: &ComplementedSubset) -> Result<ComplementedSubset, ComplementedError> {
    let (b1, b0) = (b.provers.clone(), b.refuters.clone());
    let (f1, f0) = (f.clone(), f);
    let provers = ExtensionalSubset::partial(format!("f⁻¹({})", b1.description), move |x| b1.contains(f1(x)));
    let refuters = ExtensionalSubset::partial(format!("f⁻¹({})", b0.description), move |x| b0.contains(f0(x)));
    ComplementedSubset::with_check_bound(provers, refuters, b.check_bound)
}

/// Checks `x < y ⇒ f(x) < f(y)` on `[0, range]`.
pub fn check_strictly_monotone(f: &dyn Fn(u64) -> u64, range: u64) -> Result<(), ComplementedError> {
    let values: Vec<u64> = (0..=range).map(f).collect();
    for x in 0..=range {
        for y in x + 1..=range {
            let (fx, fy) = (values[x as usize], values[y as usize]);
            if fx >= fy {
                return Err(ComplementedError::NotMonotone { x, y, fx, fy });
            }
        }
    }
    Ok(())
}

/// A locator for `f⁻¹(B)` built from one for `B`, given a map back from the
/// provers of `B` into the domain of `f`.
///
/// `f` is checked to be strictly monotone on `[0, range]`; that is what puts
/// the transported overlap witness below `x¹`.
pub fn preimage_locator(
    f: NatFn,
    locate_b: Locator,
    onto_b1: NatFn,
    range: u64,
) -> Result<Locator, ComplementedError> {
    check_strictly_monotone(&*f, range)?;
    Ok(Arc::new(move |x1| match locate_b(f(x1))? {
        LocatednessAnswer::IncludedInRefuters => Ok(LocatednessAnswer::IncludedInRefuters),
        LocatednessAnswer::Overlap(u1) => {
            let w = onto_b1(u1);
            let image = f(w);
            if image != u1 {
                return Err(ComplementedError::OntoWitnessInvalid {
                    prover: u1,
                    witness: w,
                    image,
                });
            }
            if w >= x1 {
                let (fx, fy) = (f(x1), image);
                return Err(ComplementedError::NotMonotone { x: x1, y: w, fx, fy });
            }
            Ok(LocatednessAnswer::Overlap(w))
        }
    }))
}

/// A complemented subset that cannot be accepted as downset located
/// without deciding an arbitrary proposition `P`.
///
/// Provers are `{1} ∪ {0 | P}` and refuters are the numbers other than 0
/// and 1, plus 0 when `¬P`. Classically every complemented subset of ℕ is
/// downset located; here the oracle cannot tell whether `0` is a prover or a
/// refuter, so locating the prover `1` fails with `NotLocatable(0)`.
pub fn undecided_subset() -> ComplementedSubset {
    let provers = ExtensionalSubset::partial("{1} ∪ {0 | P}", |x| match x {
        0 => Truth::Undetermined,
        1 => Truth::Holds,
        _ => Truth::Fails,
    });
    let refuters = ExtensionalSubset::partial("{x | x ≠ 1 ∧ (x ≠ 0 ∨ ¬P)}", |x| match x {
        0 => Truth::Undetermined,
        1 => Truth::Fails,
        _ => Truth::Holds,
    });
    ComplementedSubset::with_check_bound(provers, refuters, 64).expect("the two sides never both hold")
}
