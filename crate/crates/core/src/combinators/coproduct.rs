use std::fmt;

use crate::engine::{Flags, Move, SearchError, StepFn, Structure, WellFounded};

/// An element of `X + Y`: `inl x` or `inr y`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Sum<A, B> {
    Inl(A),
    Inr(B),
}

impl<A: fmt::Display, B: fmt::Display> fmt::Display for Sum<A, B> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Sum::Inl(a) => write!(f, "inl {a}"),
            Sum::Inr(b) => write!(f, "inr {b}"),
        }
    }
}

/// `X + Y`, with every left element below every right element.
#[derive(Debug, Clone)]
pub struct Coproduct<X, Y> {
    x: X,
    y: Y,
}

impl<X: WellFounded, Y: WellFounded> Coproduct<X, Y> {
    pub fn new(x: X, y: Y) -> Self {
        Coproduct { x, y }
    }

    pub fn left(&self) -> &X {
        &self.x
    }

    pub fn right(&self) -> &Y {
        &self.y
    }

    fn run_left<W: 'static, R: 'static>(
        &self,
        start: X::Elem,
        evidence: W,
        step: &mut StepFn<'_, Sum<X::Elem, Y::Elem>, W, R>,
    ) -> Result<R, SearchError> {
        self.x.run(start, evidence, &mut |x, w| {
            let current = Sum::Inl(x.clone());
            match step(&current, w)? {
                Move::Done(r) => Ok(Move::Done(r)),
                Move::Descend(Sum::Inl(x2), w2) => Ok(Move::Descend(x2, w2)),
                Move::Descend(next @ Sum::Inr(_), _) => Err(SearchError::non_decreasing(self, &current, &next)),
            }
        })
    }
}

impl<X: WellFounded, Y: WellFounded> Structure for Coproduct<X, Y> {
    type Elem = Sum<X::Elem, Y::Elem>;

    fn carrier_name(&self) -> String {
        format!("{}+{}", self.x.carrier_name(), self.y.carrier_name())
    }
    fn equal(&self, a: &Self::Elem, b: &Self::Elem) -> bool {
        match (a, b) {
            (Sum::Inl(a), Sum::Inl(b)) => self.x.equal(a, b),
            (Sum::Inr(a), Sum::Inr(b)) => self.y.equal(a, b),
            _ => false,
        }
    }
    fn apart(&self, a: &Self::Elem, b: &Self::Elem) -> bool {
        match (a, b) {
            (Sum::Inl(a), Sum::Inl(b)) => self.x.apart(a, b),
            (Sum::Inr(a), Sum::Inr(b)) => self.y.apart(a, b),
            _ => true,
        }
    }
    fn less(&self, a: &Self::Elem, b: &Self::Elem) -> bool {
        match (a, b) {
            (Sum::Inl(a), Sum::Inl(b)) => self.x.less(a, b),
            (Sum::Inr(a), Sum::Inr(b)) => self.y.less(a, b),
            (Sum::Inl(_), Sum::Inr(_)) => true,
            (Sum::Inr(_), Sum::Inl(_)) => false,
        }
    }
    fn render(&self, a: &Self::Elem) -> String {
        match a {
            Sum::Inl(x) => format!("inl {}", self.x.render(x)),
            Sum::Inr(y) => format!("inr {}", self.y.render(y)),
        }
    }
    fn flags(&self) -> Flags {
        let (fx, fy) = (self.x.flags(), self.y.flags());
        Flags {
            strong: fx.strong && fy.strong,
            dichotomous: fx.dichotomous && fy.dichotomous,
        }
    }
}

impl<X: WellFounded, Y: WellFounded> WellFounded for Coproduct<X, Y> {
    /// A left start searches `X` directly. A right start searches `Y` until
    /// the oracle either finishes or jumps into the left summand; after a
    /// jump the search continues in `X` from the jump target.
    fn run<W: 'static, R: 'static>(
        &self,
        start: Self::Elem,
        evidence: W,
        step: &mut StepFn<'_, Self::Elem, W, R>,
    ) -> Result<R, SearchError> {
        let y0 = match start {
            Sum::Inl(x0) => return self.run_left(x0, evidence, step),
            Sum::Inr(y0) => y0,
        };
        let right = self.y.run::<W, Result<R, (X::Elem, W)>>(y0, evidence, &mut |y, w| {
            match step(&Sum::Inr(y.clone()), w)? {
                Move::Done(r) => Ok(Move::Done(Ok(r))),
                Move::Descend(Sum::Inr(y2), w2) => Ok(Move::Descend(y2, w2)),
                Move::Descend(Sum::Inl(x), w2) => Ok(Move::Done(Err((x, w2)))),
            }
        })?;
        match right {
            Ok(r) => Ok(r),
            Err((x, w)) => self.run_left(x, w, step),
        }
    }
}
