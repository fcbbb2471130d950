use std::sync::Arc;

use super::{CombinatorError, SampleReport};
use crate::engine::{Flags, Move, SearchError, StepFn, Structure, WellFounded};

type ComponentFn<I, S> = Arc<dyn Fn(&I) -> S + Send + Sync>;
type TransportFn<I, E> = Arc<dyn Fn(&I, &I, &E) -> E + Send + Sync>;

/// A family of structures indexed by `I`, with transport maps `χ_ij` between
/// the components at equal indices.
///
/// The transports must satisfy `χ_ii = id` and `χ_jk ∘ χ_ij = χ_ik`, and must
/// preserve both relations; [`IndexedFamily::check_coherence`] tests this on
/// samples.
pub struct IndexedFamily<I: WellFounded, S: WellFounded> {
    index: I,
    component: ComponentFn<I::Elem, S>,
    transport: TransportFn<I::Elem, S::Elem>,
    component_flags: Flags,
}

impl<I: WellFounded + Clone, S: WellFounded> Clone for IndexedFamily<I, S> {
    fn clone(&self) -> Self {
        IndexedFamily {
            index: self.index.clone(),
            component: self.component.clone(),
            transport: self.transport.clone(),
            component_flags: self.component_flags,
        }
    }
}

impl<I: WellFounded, S: WellFounded> IndexedFamily<I, S> {
    /// `component_flags` is the claim made for every component.
    pub fn new(
        index: I,
        component: impl Fn(&I::Elem) -> S + Send + Sync + 'static,
        transport: impl Fn(&I::Elem, &I::Elem, &S::Elem) -> S::Elem + Send + Sync + 'static,
        component_flags: Flags,
    ) -> Self {
        IndexedFamily {
            index,
            component: Arc::new(component),
            transport: Arc::new(transport),
            component_flags,
        }
    }

    /// Every index gets the same structure, and every transport is the
    /// identity.
    pub fn constant(index: I, s: S) -> Self
    where
        S: Clone + 'static,
    {
        let flags = s.flags();
        IndexedFamily::new(index, move |_| s.clone(), |_, _, x| x.clone(), flags)
    }

    pub fn index(&self) -> &I {
        &self.index
    }

    pub fn component(&self, i: &I::Elem) -> S {
        (self.component)(i)
    }

    pub fn transport(&self, i: &I::Elem, j: &I::Elem, x: &S::Elem) -> S::Elem {
        (self.transport)(i, j, x)
    }

    /// Tests identity, the triangle law, and preservation of `<` and `≠` by
    /// the transports, on every sampled index tuple and sampled point.
    pub fn check_coherence(
        &self,
        indices: &[I::Elem],
        points: impl Fn(&I::Elem) -> Vec<S::Elem>,
    ) -> Result<(), CombinatorError> {
        let fail = |law: &str, detail: String| {
            Err(CombinatorError::CoherenceViolated {
                law: law.to_string(),
                detail,
            })
        };
        let ri = |i: &I::Elem| self.index.render(i);
        for i in indices {
            let ci = self.component(i);
            let pts = points(i);
            for x in &pts {
                if !ci.equal(&self.transport(i, i, x), x) {
                    return fail("identity", format!("χ_ii at i = {}, x = {}", ri(i), ci.render(x)));
                }
            }
            for j in indices.iter().filter(|j| self.index.equal(i, j)) {
                let cj = self.component(j);
                for x in &pts {
                    for x2 in &pts {
                        let (tx, tx2) = (self.transport(i, j, x), self.transport(i, j, x2));
                        let detail = || {
                            format!(
                                "χ_ij with i = {}, j = {} on {}, {}",
                                ri(i),
                                ri(j),
                                ci.render(x),
                                ci.render(x2)
                            )
                        };
                        if ci.less(x, x2) && !cj.less(&tx, &tx2) {
                            return fail("less-preservation", detail());
                        }
                        if ci.apart(x, x2) != cj.apart(&tx, &tx2) {
                            return fail("apartness-preservation", detail());
                        }
                    }
                }
                for k in indices.iter().filter(|k| self.index.equal(j, k)) {
                    let ck = self.component(k);
                    for x in &pts {
                        let via = self.transport(j, k, &self.transport(i, j, x));
                        if !ck.equal(&via, &self.transport(i, k, x)) {
                            return fail(
                                "triangle",
                                format!(
                                    "i = {}, j = {}, k = {}, x = {}",
                                    ri(i),
                                    ri(j),
                                    ri(k),
                                    ci.render(x)
                                ),
                            );
                        }
                    }
                }
            }
        }
        Ok(())
    }
}

impl<S: WellFounded + Clone + 'static> IndexedFamily<super::Restriction<crate::nat::Nat>, S> {
    /// The family over `𝔹` with `X` at 0 and `Y` at 1. Its Sigma-set is the
    /// coproduct `X + Y`.
    pub fn pair(x: S, y: S) -> Self {
        let flags = Flags {
            strong: x.flags().strong && y.flags().strong,
            dichotomous: x.flags().dichotomous && y.flags().dichotomous,
        };
        IndexedFamily::new(
            super::booleans(),
            move |i: &u64| if *i == 0 { x.clone() } else { y.clone() },
            |_, _, e: &S::Elem| e.clone(),
            flags,
        )
    }
}

/// `Σ_{i ∈ I} χ₀(i)`: dependent pairs `(i; x)` ordered by index first and
/// then, at equal indices, by the component order after transport.
pub struct Sigma<I: WellFounded, S: WellFounded> {
    family: IndexedFamily<I, S>,
}

impl<I: WellFounded, S: WellFounded> Sigma<I, S> {
    pub fn new(family: IndexedFamily<I, S>) -> Self {
        Sigma { family }
    }

    pub fn family(&self) -> &IndexedFamily<I, S> {
        &self.family
    }

    /// The first projection is strongly extensional but does not preserve
    /// the order: `(i; x) < (i; y)` holds while `i < i` does not.
    pub fn first_projection_reports(&self, sample: &[(I::Elem, S::Elem)]) -> [SampleReport; 2] {
        super::map_contract_reports(self, &self.family.index, &|p: &(I::Elem, S::Elem)| p.0.clone(), sample)
    }
}

impl<I: WellFounded, S: WellFounded> Structure for Sigma<I, S> {
    type Elem = (I::Elem, S::Elem);

    fn carrier_name(&self) -> String {
        format!("Σ{}", self.family.index.carrier_name())
    }
    fn equal(&self, (i, x): &Self::Elem, (j, y): &Self::Elem) -> bool {
        self.family.index.equal(i, j) && self.family.component(j).equal(&self.family.transport(i, j, x), y)
    }
    fn apart(&self, (i, x): &Self::Elem, (j, y): &Self::Elem) -> bool {
        let ix = &self.family.index;
        ix.apart(i, j) || (ix.equal(i, j) && self.family.component(j).apart(&self.family.transport(i, j, x), y))
    }
    fn less(&self, (i, x): &Self::Elem, (j, y): &Self::Elem) -> bool {
        let ix = &self.family.index;
        ix.less(i, j) || (ix.equal(i, j) && self.family.component(j).less(&self.family.transport(i, j, x), y))
    }
    fn render(&self, (i, x): &Self::Elem) -> String {
        format!("({}; {})", self.family.index.render(i), self.family.component(i).render(x))
    }
    fn flags(&self) -> Flags {
        let (fi, fc) = (self.family.index.flags(), self.family.component_flags);
        Flags {
            strong: fi.strong && fc.strong,
            dichotomous: fi.dichotomous && fc.dichotomous,
        }
    }
}

impl<I: WellFounded, S: WellFounded> WellFounded for Sigma<I, S> {
    /// An outer search on the index, carrying a component point as evidence.
    /// At index `i` an inner search runs on `χ₀(i)`. A move to an equal index
    /// is transported into `χ₀(i)` and continues the inner search; a move to
    /// a smaller index ends it and becomes the outer descent.
    fn run<W: 'static, R: 'static>(
        &self,
        start: Self::Elem,
        evidence: W,
        step: &mut StepFn<'_, Self::Elem, W, R>,
    ) -> Result<R, SearchError> {
        let index = &self.family.index;
        let (i0, x0) = start;
        index.run::<(S::Elem, W), R>(i0, (x0, evidence), &mut |i, (x, w)| {
            let component = self.family.component(i);
            let inner = component.run::<W, Result<R, (I::Elem, S::Elem, W)>>(x, w, &mut |x, w| {
                let current = (i.clone(), x.clone());
                match step(&current, w)? {
                    Move::Done(r) => Ok(Move::Done(Ok(r))),
                    Move::Descend((j, x2), w2) => {
                        if index.equal(&j, i) {
                            let moved = self.family.transport(&j, i, &x2);
                            if component.less(&moved, x) {
                                return Ok(Move::Descend(moved, w2));
                            }
                        } else if index.less(&j, i) {
                            return Ok(Move::Done(Err((j, x2, w2))));
                        }
                        Err(SearchError::non_decreasing(self, &current, &(j, x2)))
                    }
                }
            })?;
            Ok(match inner {
                Ok(r) => Move::Done(r),
                Err((j, x2, w2)) => Move::Descend(j, (x2, w2)),
            })
        })
    }
}
