use std::sync::Arc;

use super::{CombinatorError, MapFn, Pred, SampleReport};
use crate::engine::{Flags, Move, SearchError, StepFn, Structure, WellFounded};
use crate::nat::Nat;

/// Checks the two contracts of a relation-preserving map on every pair of
/// the sample: strong extensionality (`f a ≠ f b ⇒ a ≠ b`) and preservation
/// of the strict relation (`a < b ⇒ f a < f b`).
pub fn map_contract_reports<Z, X>(
    z: &Z,
    x: &X,
    f: &dyn Fn(&Z::Elem) -> X::Elem,
    sample: &[Z::Elem],
) -> [SampleReport; 2]
where
    Z: Structure + ?Sized,
    X: Structure + ?Sized,
{
    let images: Vec<X::Elem> = sample.iter().map(f).collect();
    let mut ext = SampleReport::holds("strong-extensionality");
    let mut pres = SampleReport::holds("relation-preservation");
    for (i, a) in sample.iter().enumerate() {
        for (j, b) in sample.iter().enumerate() {
            if ext.holds && x.apart(&images[i], &images[j]) && !z.apart(a, b) {
                ext = ext.refuted(vec![z.render(a), z.render(b)]);
            }
            if pres.holds && z.less(a, b) && !x.less(&images[i], &images[j]) {
                pres = pres.refuted(vec![z.render(a), z.render(b)]);
            }
        }
    }
    [ext, pres]
}

/// A map between carriers whose contracts were checked on a sample.
pub struct RelPreservingMap<A, B> {
    f: MapFn<A, B>,
}

impl<A, B> Clone for RelPreservingMap<A, B> {
    fn clone(&self) -> Self {
        RelPreservingMap { f: self.f.clone() }
    }
}

impl<A, B> RelPreservingMap<A, B> {
    pub fn checked<Z, X>(
        z: &Z,
        x: &X,
        f: impl Fn(&A) -> B + Send + Sync + 'static,
        sample: &[A],
    ) -> Result<Self, CombinatorError>
    where
        Z: Structure<Elem = A> + ?Sized,
        X: Structure<Elem = B> + ?Sized,
    {
        for report in map_contract_reports(z, x, &f, sample) {
            if let Some(c) = report.counterexample {
                return Err(CombinatorError::ContractViolated {
                    law: report.law,
                    detail: format!("({})", c.join(", ")),
                });
            }
        }
        Ok(RelPreservingMap { f: Arc::new(f) })
    }

    pub fn apply(&self, a: &A) -> B {
        (self.f)(a)
    }
}

/// Search on `s` driven by the search on `x` through `f`: the oracle runs on
/// elements of `s`, the target's search only sees their images.
pub(crate) fn run_along<S, X, W, R>(
    s: &S,
    x: &X,
    f: &dyn Fn(&S::Elem) -> X::Elem,
    start: S::Elem,
    evidence: W,
    step: &mut StepFn<'_, S::Elem, W, R>,
) -> Result<R, SearchError>
where
    S: Structure + ?Sized,
    X: WellFounded + ?Sized,
    W: 'static,
    R: 'static,
{
    let image = f(&start);
    x.run::<(S::Elem, W), R>(image, (start, evidence), &mut |_, (z, w)| match step(&z, w)? {
        Move::Done(r) => Ok(Move::Done(r)),
        Move::Descend(z2, w2) => {
            if !s.less(&z2, &z) {
                return Err(SearchError::non_decreasing(s, &z, &z2));
            }
            let (fz, fz2) = (f(&z), f(&z2));
            if !x.less(&fz2, &fz) {
                return Err(SearchError::ContractViolated(format!(
                    "{} < {} but their images {} and {} are not related",
                    s.render(&z2),
                    s.render(&z),
                    x.render(&fz2),
                    x.render(&fz)
                )));
            }
            Ok(Move::Descend(fz2, (z2, w2)))
        }
    })
}

/// A structure `Z` made well-founded by a relation-preserving map into a
/// well-founded `X`. Strong whenever `X` is.
pub struct Pullback<Z: Structure, X: WellFounded> {
    z: Z,
    x: X,
    f: RelPreservingMap<Z::Elem, X::Elem>,
}

impl<Z: Structure, X: WellFounded> Pullback<Z, X> {
    pub fn new(z: Z, x: X, f: RelPreservingMap<Z::Elem, X::Elem>) -> Self {
        Pullback { z, x, f }
    }

    /// Checks `f` on `sample` and builds the pullback.
    pub fn checked(
        z: Z,
        x: X,
        f: impl Fn(&Z::Elem) -> X::Elem + Send + Sync + 'static,
        sample: &[Z::Elem],
    ) -> Result<Self, CombinatorError> {
        let f = RelPreservingMap::checked(&z, &x, f, sample)?;
        Ok(Pullback { z, x, f })
    }

    pub fn map(&self) -> &RelPreservingMap<Z::Elem, X::Elem> {
        &self.f
    }
}

impl<Z: Structure, X: WellFounded> Structure for Pullback<Z, X> {
    type Elem = Z::Elem;

    fn carrier_name(&self) -> String {
        self.z.carrier_name()
    }
    fn equal(&self, a: &Z::Elem, b: &Z::Elem) -> bool {
        self.z.equal(a, b)
    }
    fn apart(&self, a: &Z::Elem, b: &Z::Elem) -> bool {
        self.z.apart(a, b)
    }
    fn less(&self, a: &Z::Elem, b: &Z::Elem) -> bool {
        self.z.less(a, b)
    }
    fn render(&self, a: &Z::Elem) -> String {
        self.z.render(a)
    }
    fn flags(&self) -> Flags {
        let own = self.z.flags();
        Flags {
            strong: own.strong || self.x.flags().strong,
            dichotomous: own.dichotomous,
        }
    }
}

impl<Z: Structure, X: WellFounded> WellFounded for Pullback<Z, X> {
    fn run<W: 'static, R: 'static>(
        &self,
        start: Z::Elem,
        evidence: W,
        step: &mut StepFn<'_, Z::Elem, W, R>,
    ) -> Result<R, SearchError> {
        run_along(self, &self.x, &|z| self.f.apply(z), start, evidence, step)
    }
}

/// The subset of `X` cut out by a predicate, with the restricted relations.
#[derive(Clone)]
pub struct Restriction<X: WellFounded> {
    inner: X,
    pred: Pred<X::Elem>,
    name: String,
}

impl<X: WellFounded> Restriction<X> {
    pub fn new(inner: X, name: impl Into<String>, pred: impl Fn(&X::Elem) -> bool + Send + Sync + 'static) -> Self {
        Restriction {
            inner,
            pred: Arc::new(pred),
            name: name.into(),
        }
    }

    pub fn contains(&self, a: &X::Elem) -> bool {
        (self.pred)(a)
    }

    pub fn inner(&self) -> &X {
        &self.inner
    }

    fn escaped(&self, a: &X::Elem) -> SearchError {
        SearchError::EscapedSubset {
            element: self.inner.render(a),
        }
    }
}

/// Restricts `X` to the elements satisfying `pred`.
pub fn restrict<X: WellFounded>(
    x: X,
    name: impl Into<String>,
    pred: impl Fn(&X::Elem) -> bool + Send + Sync + 'static,
) -> Restriction<X> {
    Restriction::new(x, name, pred)
}

/// `𝔹 = {0, 1}` with `0 < 1`.
pub fn booleans() -> Restriction<Nat> {
    Restriction::new(Nat, "𝔹", |x: &u64| *x <= 1)
}

impl<X: WellFounded> Structure for Restriction<X> {
    type Elem = X::Elem;

    fn carrier_name(&self) -> String {
        self.name.clone()
    }
    fn equal(&self, a: &X::Elem, b: &X::Elem) -> bool {
        self.inner.equal(a, b)
    }
    fn apart(&self, a: &X::Elem, b: &X::Elem) -> bool {
        self.inner.apart(a, b)
    }
    fn less(&self, a: &X::Elem, b: &X::Elem) -> bool {
        self.inner.less(a, b)
    }
    fn render(&self, a: &X::Elem) -> String {
        self.inner.render(a)
    }
    fn flags(&self) -> Flags {
        self.inner.flags()
    }
}

impl<X: WellFounded> WellFounded for Restriction<X> {
    /// The pullback along the inclusion: the inner search runs unchanged,
    /// with every element checked to stay inside the subset.
    fn run<W: 'static, R: 'static>(
        &self,
        start: X::Elem,
        evidence: W,
        step: &mut StepFn<'_, X::Elem, W, R>,
    ) -> Result<R, SearchError> {
        if !self.contains(&start) {
            return Err(self.escaped(&start));
        }
        self.inner.run(start, evidence, &mut |a, w| {
            let m = step(a, w)?;
            if let Move::Descend(next, _) = &m {
                if !self.contains(next) {
                    return Err(self.escaped(next));
                }
            }
            Ok(m)
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::{search, verify_trace, RawStructure, StepOutcome};

    fn evens() -> RawStructure<u64> {
        RawStructure::new("2ℕ", |a: &u64, b: &u64| a == b, |a, b| a != b, |a, b| a < b)
            .with_render(|x| x.to_string())
            .with_flags(Flags::BOTH)
    }

    #[test]
    fn evens_pulled_back_along_inclusion() {
        let sample: Vec<u64> = (0..=20).step_by(2).collect();
        let z = Pullback::checked(evens(), Nat, |x| *x, &sample).unwrap();
        let d = search(&z, 10, |x| {
            if *x == 4 {
                StepOutcome::Found(4)
            } else {
                StepOutcome::Descend(x - 2)
            }
        })
        .unwrap();
        assert_eq!(d.found, 4);
        assert_eq!(d.trace.visited, vec![10, 8, 6, 4]);
        assert!(z.flags().strong);
    }

    #[test]
    fn constant_map_is_rejected() {
        let sample: Vec<u64> = (0..8).collect();
        let err = Pullback::checked(evens(), Nat, |_| 0, &sample).err().unwrap();
        assert_eq!(
            err,
            CombinatorError::ContractViolated {
                law: "relation-preservation".into(),
                detail: "(0, 1)".into()
            }
        );
    }

    #[test]
    fn map_lying_at_runtime_is_caught() {
        // Preserves < on the sample but not beyond it.
        let z = Pullback::checked(evens(), Nat, |x| if *x < 8 { *x } else { 100 - x }, &[0, 2, 4]).unwrap();
        let err = search(&z, 20, |x| StepOutcome::Descend(x - 2)).unwrap_err();
        assert!(matches!(err, SearchError::ContractViolated(_)));
    }

    #[test]
    fn restriction_examples() {
        let threes = restrict(Nat, "3ℕ", |x| x % 3 == 0);
        let d = search(&threes, 9, |x| {
            if *x == 0 {
                StepOutcome::Found(0)
            } else {
                StepOutcome::Descend(x - 3)
            }
        })
        .unwrap();
        assert_eq!(d.trace.visited, vec![9, 6, 3, 0]);
        assert!(verify_trace(&threes, &d.trace));

        let big = restrict(Nat, "x > 5", |x| *x > 5);
        let err = search(&big, 7, |_| StepOutcome::Descend(4)).unwrap_err();
        assert_eq!(err, SearchError::EscapedSubset { element: "4".into() });
        let err = search(&big, 3, |x| StepOutcome::Found(*x)).unwrap_err();
        assert_eq!(err, SearchError::EscapedSubset { element: "3".into() });
    }

    #[test]
    fn booleans_are_two_elements() {
        let b = booleans();
        assert!(b.contains(&0) && b.contains(&1) && !b.contains(&2));
        assert!(b.less(&0, &1));
        assert_eq!(b.flags(), Flags::BOTH);
    }
}
