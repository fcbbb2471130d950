//! Structures described as data, for building searches at run time.
//!
//! A [`StructureSpec`] is ℕ or a product, coproduct, lexicographic product
//! or restriction of smaller specs. Its elements are [`Value`]s, and a
//! search over it is driven by textual [`StepRules`]. Sigma-sets need
//! transport maps, which are code, so they have no description here.

use std::any::Any;

use serde::{Deserialize, Serialize};

use crate::combinators::{Coproduct, Lex, Product, Restriction, Sum};
use crate::dsl::rules::{FoundRule, RuleError, RuleStep, StepRules};
use crate::engine::{try_search_traced, DescentTrace, Flags, Move, SearchError, StepFn, StepOutcome, Structure, WellFounded};
use crate::nat::Nat;

pub use crate::dsl::rules::Value;

/// `"nat"`, `{"product": [s, s]}`, `{"coproduct": [s, s]}`,
/// `{"lex": [s, s]}` or `{"restrict": {"of": s, "pred": "..."}}`.
///
/// A restriction predicate is a found rule: `x > 3`, or a pattern with a
/// guard such as `(a, b) if a < b`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum StructureSpec {
    Nat,
    Product(Box<StructureSpec>, Box<StructureSpec>),
    Coproduct(Box<StructureSpec>, Box<StructureSpec>),
    Lex(Box<StructureSpec>, Box<StructureSpec>),
    Restrict { of: Box<StructureSpec>, pred: String },
}

/// A structure file for the `descent` command.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DescentConfig {
    pub structure: StructureSpec,
    #[serde(default)]
    pub start: Option<String>,
    #[serde(default)]
    pub found: Vec<String>,
    #[serde(default)]
    pub descend: Vec<String>,
}

impl StructureSpec {
    pub fn build(&self) -> Result<DynStructure, RuleError> {
        let pair = |a: &StructureSpec, b: &StructureSpec| Ok::<_, RuleError>((a.build()?, b.build()?));
        Ok(match self {
            StructureSpec::Nat => DynStructure::Nat,
            StructureSpec::Product(a, b) => {
                let (a, b) = pair(a, b)?;
                DynStructure::Product(Box::new(Product::new(a, b)))
            }
            StructureSpec::Coproduct(a, b) => {
                let (a, b) = pair(a, b)?;
                DynStructure::Coproduct(Box::new(Coproduct::new(a, b)))
            }
            StructureSpec::Lex(a, b) => {
                let (a, b) = pair(a, b)?;
                DynStructure::Lex(Box::new(Lex::new(a, b)))
            }
            StructureSpec::Restrict { of, pred } => {
                let rule = FoundRule::parse(pred).map_err(|diagnostic| RuleError::Parse {
                    rule: pred.clone(),
                    diagnostic,
                })?;
                let inner = of.build()?;
                let name = format!("{{{} | {}}}", inner.carrier_name(), pred);
                // A predicate that does not apply to a value (wrong shape, or
                // arithmetic on a pair) excludes it.
                let member = move |v: &Value| rule.fires(v).unwrap_or(false);
                DynStructure::Restrict(Box::new(Restriction::new(inner, name, member)))
            }
        })
    }
}

/// The structure a [`StructureSpec`] describes.
pub enum DynStructure {
    Nat,
    Product(Box<Product<DynStructure, DynStructure>>),
    Coproduct(Box<Coproduct<DynStructure, DynStructure>>),
    Lex(Box<Lex<DynStructure, DynStructure>>),
    Restrict(Box<Restriction<DynStructure>>),
}

type Erased = Box<dyn Any>;

fn split(v: &Value) -> Option<(Value, Value)> {
    match v {
        Value::Pair(a, b) => Some(((**a).clone(), (**b).clone())),
        _ => None,
    }
}

fn join((a, b): &(Value, Value)) -> Value {
    Value::pair(a.clone(), b.clone())
}

fn to_sum(v: &Value) -> Option<Sum<Value, Value>> {
    match v {
        Value::Inl(a) => Some(Sum::Inl((**a).clone())),
        Value::Inr(b) => Some(Sum::Inr((**b).clone())),
        _ => None,
    }
}

fn from_sum(s: &Sum<Value, Value>) -> Value {
    match s {
        Sum::Inl(a) => Value::inl(a.clone()),
        Sum::Inr(b) => Value::inr(b.clone()),
    }
}

impl DynStructure {
    /// Whether `v` has the shape of an element of the carrier (ignoring
    /// restriction predicates).
    pub fn conforms(&self, v: &Value) -> bool {
        match (self, v) {
            (DynStructure::Nat, Value::Nat(_)) => true,
            (DynStructure::Product(p), Value::Pair(a, b)) => p.left().conforms(a) && p.right().conforms(b),
            (DynStructure::Lex(p), Value::Pair(a, b)) => p.left().conforms(a) && p.right().conforms(b),
            (DynStructure::Coproduct(c), Value::Inl(a)) => c.left().conforms(a),
            (DynStructure::Coproduct(c), Value::Inr(b)) => c.right().conforms(b),
            (DynStructure::Restrict(r), _) => r.inner().conforms(v),
            _ => false,
        }
    }

    fn ill_shaped(&self, v: &Value) -> SearchError {
        SearchError::IllShaped {
            element: v.to_string(),
            carrier: self.carrier_name(),
        }
    }

    /// The search with evidence and result erased, so that the generic
    /// [`WellFounded::run`] instantiates finitely many times however deep the
    /// nesting.
    fn run_erased(&self, start: Value, evidence: Erased, step: &mut StepFn<'_, Value, Erased, Erased>) -> Result<Erased, SearchError> {
        let shape = |v: &Value| self.ill_shaped(v);
        match self {
            DynStructure::Nat => {
                let Value::Nat(n) = start else { return Err(shape(&start)) };
                Nat.run(n, evidence, &mut |k, w| {
                    Ok(match step(&Value::Nat(*k), w)? {
                        Move::Done(r) => Move::Done(r),
                        Move::Descend(Value::Nat(m), w2) => Move::Descend(m, w2),
                        Move::Descend(other, _) => return Err(shape(&other)),
                    })
                })
            }
            DynStructure::Product(p) => {
                let s = split(&start).ok_or_else(|| shape(&start))?;
                p.run(s, evidence, &mut |e, w| lift_pair(step(&join(e), w)?, &shape))
            }
            DynStructure::Lex(p) => {
                let s = split(&start).ok_or_else(|| shape(&start))?;
                p.run(s, evidence, &mut |e, w| lift_pair(step(&join(e), w)?, &shape))
            }
            DynStructure::Coproduct(c) => {
                let s = to_sum(&start).ok_or_else(|| shape(&start))?;
                c.run(s, evidence, &mut |e, w| {
                    Ok(match step(&from_sum(e), w)? {
                        Move::Done(r) => Move::Done(r),
                        Move::Descend(v, w2) => Move::Descend(to_sum(&v).ok_or_else(|| shape(&v))?, w2),
                    })
                })
            }
            DynStructure::Restrict(r) => r.run(start, evidence, step),
        }
    }
}

fn lift_pair(
    m: Move<Value, Erased, Erased>,
    shape: &dyn Fn(&Value) -> SearchError,
) -> Result<Move<(Value, Value), Erased, Erased>, SearchError> {
    Ok(match m {
        Move::Done(r) => Move::Done(r),
        Move::Descend(v, w) => Move::Descend(split(&v).ok_or_else(|| shape(&v))?, w),
    })
}

impl Structure for DynStructure {
    type Elem = Value;

    fn carrier_name(&self) -> String {
        match self {
            DynStructure::Nat => Nat.carrier_name(),
            DynStructure::Product(p) => p.carrier_name(),
            DynStructure::Coproduct(c) => c.carrier_name(),
            DynStructure::Lex(p) => format!("{}×lex{}", p.left().carrier_name(), p.right().carrier_name()),
            DynStructure::Restrict(r) => r.carrier_name(),
        }
    }

    fn equal(&self, a: &Value, b: &Value) -> bool {
        match self {
            DynStructure::Nat => matches!((a, b), (Value::Nat(x), Value::Nat(y)) if Nat.equal(x, y)),
            DynStructure::Product(p) => both_pairs(a, b, |x, y| p.equal(x, y)),
            DynStructure::Lex(p) => both_pairs(a, b, |x, y| p.equal(x, y)),
            DynStructure::Coproduct(c) => both_sums(a, b, |x, y| c.equal(x, y)),
            DynStructure::Restrict(r) => r.equal(a, b),
        }
    }

    fn apart(&self, a: &Value, b: &Value) -> bool {
        match self {
            DynStructure::Nat => matches!((a, b), (Value::Nat(x), Value::Nat(y)) if Nat.apart(x, y)),
            DynStructure::Product(p) => both_pairs(a, b, |x, y| p.apart(x, y)),
            DynStructure::Lex(p) => both_pairs(a, b, |x, y| p.apart(x, y)),
            DynStructure::Coproduct(c) => both_sums(a, b, |x, y| c.apart(x, y)),
            DynStructure::Restrict(r) => r.apart(a, b),
        }
    }

    fn less(&self, a: &Value, b: &Value) -> bool {
        match self {
            DynStructure::Nat => matches!((a, b), (Value::Nat(x), Value::Nat(y)) if Nat.less(x, y)),
            DynStructure::Product(p) => both_pairs(a, b, |x, y| p.less(x, y)),
            DynStructure::Lex(p) => both_pairs(a, b, |x, y| p.less(x, y)),
            DynStructure::Coproduct(c) => both_sums(a, b, |x, y| c.less(x, y)),
            DynStructure::Restrict(r) => r.less(a, b),
        }
    }

    fn render(&self, a: &Value) -> String {
        a.to_string()
    }

    fn flags(&self) -> Flags {
        match self {
            DynStructure::Nat => Nat.flags(),
            DynStructure::Product(p) => p.flags(),
            DynStructure::Lex(p) => p.flags(),
            DynStructure::Coproduct(c) => c.flags(),
            DynStructure::Restrict(r) => r.flags(),
        }
    }
}

fn both_pairs(a: &Value, b: &Value, rel: impl Fn(&(Value, Value), &(Value, Value)) -> bool) -> bool {
    matches!((split(a), split(b)), (Some(x), Some(y)) if rel(&x, &y))
}

fn both_sums(a: &Value, b: &Value, rel: impl Fn(&Sum<Value, Value>, &Sum<Value, Value>) -> bool) -> bool {
    matches!((to_sum(a), to_sum(b)), (Some(x), Some(y)) if rel(&x, &y))
}

impl WellFounded for DynStructure {
    fn run<W: 'static, R: 'static>(
        &self,
        start: Value,
        evidence: W,
        step: &mut StepFn<'_, Value, W, R>,
    ) -> Result<R, SearchError> {
        if !self.conforms(&start) {
            return Err(self.ill_shaped(&start));
        }
        let mut erased = |x: &Value, w: Erased| -> Result<Move<Value, Erased, Erased>, SearchError> {
            let w = *w.downcast::<W>().expect("evidence keeps its type through the search");
            Ok(match step(x, w)? {
                Move::Done(r) => Move::Done(Box::new(r) as Erased),
                Move::Descend(y, _) if !self.conforms(&y) => return Err(self.ill_shaped(&y)),
                Move::Descend(y, w2) => Move::Descend(y, Box::new(w2) as Erased),
            })
        };
        let result = self.run_erased(start, Box::new(evidence), &mut erased)?;
        Ok(*result.downcast::<R>().expect("result keeps its type through the search"))
    }
}

/// Runs a search driven by `rules`. A rule that cannot be evaluated aborts
/// the search.
pub fn run_rules(s: &DynStructure, start: Value, rules: &StepRules) -> DescentTrace<Value> {
    try_search_traced(s, start, |x| match rules.apply(x) {
        Ok(RuleStep::Found) => Ok(StepOutcome::Found(x.clone())),
        Ok(RuleStep::Descend(y)) if !s.conforms(&y) => Err(s.ill_shaped(&y)),
        Ok(RuleStep::Descend(y)) => Ok(StepOutcome::Descend(y)),
        Err(e) => Err(SearchError::Aborted(e.to_string())),
    })
}
