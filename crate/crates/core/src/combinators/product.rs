use super::pullback::run_along;
use super::render_pair;
use crate::engine::{Flags, Move, SearchError, StepFn, Structure, WellFounded};

/// `X × Y` with the componentwise strict order.
///
/// Only `X` needs a search: the product is the pullback along the first
/// projection. Apartness is `x ≠ x' ∨ y < y'`.
#[derive(Debug, Clone)]
pub struct Product<X, Y> {
    x: X,
    y: Y,
}

impl<X: WellFounded, Y: Structure> Product<X, Y> {
    pub fn new(x: X, y: Y) -> Self {
        Product { x, y }
    }

    pub fn left(&self) -> &X {
        &self.x
    }

    pub fn right(&self) -> &Y {
        &self.y
    }
}

impl<X: WellFounded, Y: Structure> Structure for Product<X, Y> {
    type Elem = (X::Elem, Y::Elem);

    fn carrier_name(&self) -> String {
        format!("{}×{}", self.x.carrier_name(), self.y.carrier_name())
    }
    fn equal(&self, a: &Self::Elem, b: &Self::Elem) -> bool {
        self.x.equal(&a.0, &b.0) && self.y.equal(&a.1, &b.1)
    }
    fn apart(&self, a: &Self::Elem, b: &Self::Elem) -> bool {
        self.x.apart(&a.0, &b.0) || self.y.less(&a.1, &b.1)
    }
    fn less(&self, a: &Self::Elem, b: &Self::Elem) -> bool {
        self.x.less(&a.0, &b.0) && self.y.less(&a.1, &b.1)
    }
    fn render(&self, a: &Self::Elem) -> String {
        render_pair(&self.x.render(&a.0), &self.y.render(&a.1))
    }
    fn flags(&self) -> Flags {
        Flags {
            strong: self.x.flags().strong || self.y.flags().strong,
            dichotomous: false,
        }
    }
}

impl<X: WellFounded, Y: Structure> WellFounded for Product<X, Y> {
    fn run<W: 'static, R: 'static>(
        &self,
        start: Self::Elem,
        evidence: W,
        step: &mut StepFn<'_, Self::Elem, W, R>,
    ) -> Result<R, SearchError> {
        run_along(self, &self.x, &|p: &Self::Elem| p.0.clone(), start, evidence, step)
    }
}

/// `X × Y` with the lexicographic order: first coordinates decide, and
/// second coordinates break ties between equal first coordinates.
/// Equality and apartness are those of [`Product`].
///
/// The projections do not preserve this order: `(0,0) < (0,1)` while `0 < 0`
/// fails.
#[derive(Debug, Clone)]
pub struct Lex<X, Y> {
    x: X,
    y: Y,
}

impl<X: WellFounded, Y: WellFounded> Lex<X, Y> {
    pub fn new(x: X, y: Y) -> Self {
        Lex { x, y }
    }

    pub fn left(&self) -> &X {
        &self.x
    }

    pub fn right(&self) -> &Y {
        &self.y
    }
}

impl<X: WellFounded, Y: WellFounded> Structure for Lex<X, Y> {
    type Elem = (X::Elem, Y::Elem);

    fn carrier_name(&self) -> String {
        format!("{}×lex{}", self.x.carrier_name(), self.y.carrier_name())
    }
    fn equal(&self, a: &Self::Elem, b: &Self::Elem) -> bool {
        self.x.equal(&a.0, &b.0) && self.y.equal(&a.1, &b.1)
    }
    fn apart(&self, a: &Self::Elem, b: &Self::Elem) -> bool {
        self.x.apart(&a.0, &b.0) || self.y.less(&a.1, &b.1)
    }
    fn less(&self, a: &Self::Elem, b: &Self::Elem) -> bool {
        self.x.less(&a.0, &b.0) || (self.x.equal(&a.0, &b.0) && self.y.less(&a.1, &b.1))
    }
    fn render(&self, a: &Self::Elem) -> String {
        render_pair(&self.x.render(&a.0), &self.y.render(&a.1))
    }
    fn flags(&self) -> Flags {
        let (fx, fy) = (self.x.flags(), self.y.flags());
        Flags {
            strong: fx.strong && fy.strong,
            dichotomous: fx.dichotomous && fy.dichotomous,
        }
    }
}

impl<X: WellFounded, Y: WellFounded> WellFounded for Lex<X, Y> {
    /// An outer search on the first coordinate, whose evidence at `x` is a
    /// second coordinate `y` together with the caller's evidence. Each outer
    /// step runs an inner search on `Y` at fixed `x`. The inner search stops
    /// either with the caller's result or, when the oracle moves to a
    /// smaller first coordinate, with that move, which becomes the outer
    /// descent.
    fn run<W: 'static, R: 'static>(
        &self,
        start: Self::Elem,
        evidence: W,
        step: &mut StepFn<'_, Self::Elem, W, R>,
    ) -> Result<R, SearchError> {
        type Jump<A, B, W> = (A, B, W);
        let (x0, y0) = start;
        self.x.run::<(Y::Elem, W), R>(x0, (y0, evidence), &mut |x, (y, w)| {
            let inner = self
                .y
                .run::<W, Result<R, Jump<X::Elem, Y::Elem, W>>>(y, w, &mut |y, w| {
                    let current = (x.clone(), y.clone());
                    match step(&current, w)? {
                        Move::Done(r) => Ok(Move::Done(Ok(r))),
                        Move::Descend((x2, y2), w2) => {
                            if self.x.equal(&x2, x) && self.y.less(&y2, y) {
                                Ok(Move::Descend(y2, w2))
                            } else if self.x.less(&x2, x) {
                                Ok(Move::Done(Err((x2, y2, w2))))
                            } else {
                                Err(SearchError::non_decreasing(self, &current, &(x2, y2)))
                            }
                        }
                    }
                })?;
            Ok(match inner {
                Ok(r) => Move::Done(r),
                Err((x2, y2, w2)) => Move::Descend(x2, (y2, w2)),
            })
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::{search, verify_trace, StepOutcome};
    use crate::nat::Nat;

    #[test]
    fn diagonal_countdown() {
        let p = Product::new(Nat, Nat);
        let d = search(&p, (3, 3), |&(x, y)| {
            if x == 0 {
                StepOutcome::Found((x, y))
            } else {
                StepOutcome::Descend((x - 1, y - 1))
            }
        })
        .unwrap();
        assert_eq!(d.found, (0, 0));
        assert_eq!(d.trace.steps, 4);
        assert!(verify_trace(&p, &d.trace));
    }

    #[test]
    fn product_relations() {
        let p = Product::new(Nat, Nat);
        assert!(!p.less(&(1, 5), &(2, 3)));
        assert!(p.less(&(1, 2), &(2, 3)));
        assert!(p.flags().strong);
        // Apartness as defined: x ≠ x' or y < y'.
        assert!(p.apart(&(1, 1), &(1, 2)));
        assert!(!p.apart(&(1, 2), &(1, 1)));
    }

    #[test]
    fn product_rejects_half_descent() {
        let p = Product::new(Nat, Nat);
        let err = search(&p, (3, 3), |&(x, y)| StepOutcome::Descend((x - 1, y))).unwrap_err();
        assert_eq!(
            err,
            SearchError::NonDecreasingStep {
                current: "(3,3)".into(),
                proposed: "(2,3)".into()
            }
        );
    }

    fn lex_step(k: u64) -> impl Fn(&(u64, u64)) -> StepOutcome<(u64, u64)> {
        move |&(x, y)| {
            if (x, y) == (0, 0) {
                StepOutcome::Found((0, 0))
            } else if y > 0 {
                StepOutcome::Descend((x, y - 1))
            } else {
                StepOutcome::Descend((x - 1, k))
            }
        }
    }

    #[test]
    fn lex_forced_path() {
        let l = Lex::new(Nat, Nat);
        let d = search(&l, (2, 3), lex_step(2)).unwrap();
        assert_eq!(d.found, (0, 0));
        assert_eq!(
            d.trace.visited,
            vec![(2, 3), (2, 2), (2, 1), (2, 0), (1, 2), (1, 1), (1, 0), (0, 2), (0, 1), (0, 0)]
        );
        assert_eq!(d.trace.descents(), 9);
        assert!(verify_trace(&l, &d.trace));
    }

    #[test]
    fn lex_allows_second_coordinate_to_grow() {
        let l = Lex::new(Nat, Nat);
        let d = search(&l, (1, 0), lex_step(1_000)).unwrap();
        assert_eq!(d.trace.steps, 1_002);
    }

    #[test]
    fn lex_relations() {
        let l = Lex::new(Nat, Nat);
        assert!(l.less(&(1, 999), &(2, 0)));
        assert!(l.less(&(0, 0), &(0, 1)));
        assert!(!Nat.less(&0, &0));
        let err = search(&l, (1, 1), |&(x, y)| StepOutcome::Descend((x, y + 1))).unwrap_err();
        assert!(matches!(err, SearchError::NonDecreasingStep { .. }));
    }
}
