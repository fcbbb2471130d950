//! A small expression language over ℕ.
//!
//! Predicates describe subsets of ℕ in the variable `x`:
//!
//! ```text
//! pred := or ; or := and { "or" and } ; and := neg { "and" neg } ;
//! neg  := "not" neg | cmp ;
//! cmp  := sum ( ("=" | "!=" | "<" | "<=" | ">" | ">=") sum | "divides" sum )?
//!       | "true" | "false" | builtin ;
//! builtin := ("prime" | "coprime") "(" sum ")" | "divides" "(" sum "," sum ")" ;
//! sum  := prod { ("+" | "-") prod } ; prod := atom { ("*" | "mod") atom } ;
//! atom := integer | variable | "(" pred-or-sum ")" ;
//! ```
//!
//! Evaluation is total: `-` truncates at zero, `+` and `*` saturate, and
//! `a mod 0` is `0` (flagged by [`lint`]).
//!
//! The same expressions, with extra variables bound by patterns, make up the
//! step rules in [`rules`].

use std::fmt;

use thiserror::Error;

use crate::arithmetic::{classify, Classification};
use crate::complemented::{ComplementedError, ComplementedSubset, ExtensionalSubset};

mod parser;
mod printer;
pub mod rules;

pub use parser::{parse, parse_in, parse_term_in};

/// Largest literal the parser accepts.
pub const MAX_LITERAL: u64 = i64::MAX as u64;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Term {
    Lit(u64),
    Var(String),
    Add(Box<Term>, Box<Term>),
    /// Truncated subtraction.
    Sub(Box<Term>, Box<Term>),
    Mul(Box<Term>, Box<Term>),
    Mod(Box<Term>, Box<Term>),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CmpOp {
    Eq,
    Ne,
    Lt,
    Le,
    Gt,
    Ge,
}

impl CmpOp {
    pub const ALL: [CmpOp; 6] = [CmpOp::Eq, CmpOp::Ne, CmpOp::Lt, CmpOp::Le, CmpOp::Gt, CmpOp::Ge];

    pub fn symbol(self) -> &'static str {
        match self {
            CmpOp::Eq => "=",
            CmpOp::Ne => "!=",
            CmpOp::Lt => "<",
            CmpOp::Le => "<=",
            CmpOp::Gt => ">",
            CmpOp::Ge => ">=",
        }
    }

    fn holds(self, a: u64, b: u64) -> bool {
        match self {
            CmpOp::Eq => a == b,
            CmpOp::Ne => a != b,
            CmpOp::Lt => a < b,
            CmpOp::Le => a <= b,
            CmpOp::Gt => a > b,
            CmpOp::Ge => a >= b,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Pred {
    True,
    False,
    Cmp(CmpOp, Term, Term),
    /// `Divides(k, n)`: `k` divides `n`. Zero divides only zero.
    Divides(Term, Term),
    Prime(Term),
    Coprime(Term),
    Not(Box<Pred>),
    And(Box<Pred>, Box<Pred>),
    Or(Box<Pred>, Box<Pred>),
}

/// Variable bindings for evaluation. Unbound variables read as 0; the
/// parser rejects them, so this only matters for hand-built trees.
pub type Env<'a> = [(&'a str, u64)];

impl Term {
    pub fn eval(&self, env: &Env<'_>) -> u64 {
        match self {
            Term::Lit(n) => *n,
            Term::Var(v) => env.iter().find(|(name, _)| name == v).map_or(0, |(_, n)| *n),
            Term::Add(a, b) => a.eval(env).saturating_add(b.eval(env)),
            Term::Sub(a, b) => a.eval(env).saturating_sub(b.eval(env)),
            Term::Mul(a, b) => a.eval(env).saturating_mul(b.eval(env)),
            Term::Mod(a, b) => {
                let d = b.eval(env);
                if d == 0 {
                    0
                } else {
                    a.eval(env) % d
                }
            }
        }
    }

    fn is_closed(&self) -> bool {
        match self {
            Term::Lit(_) => true,
            Term::Var(_) => false,
            Term::Add(a, b) | Term::Sub(a, b) | Term::Mul(a, b) | Term::Mod(a, b) => a.is_closed() && b.is_closed(),
        }
    }

    fn visit_mods<'t>(&'t self, out: &mut Vec<&'t Term>) {
        match self {
            Term::Lit(_) | Term::Var(_) => {}
            Term::Mod(a, b) => {
                out.push(b);
                a.visit_mods(out);
                b.visit_mods(out);
            }
            Term::Add(a, b) | Term::Sub(a, b) | Term::Mul(a, b) => {
                a.visit_mods(out);
                b.visit_mods(out);
            }
        }
    }
}

impl Pred {
    pub fn eval(&self, env: &Env<'_>) -> bool {
        match self {
            Pred::True => true,
            Pred::False => false,
            Pred::Cmp(op, a, b) => op.holds(a.eval(env), b.eval(env)),
            Pred::Divides(k, n) => {
                let (k, n) = (k.eval(env), n.eval(env));
                if k == 0 {
                    n == 0
                } else {
                    n % k == 0
                }
            }
            Pred::Prime(t) => classify(t.eval(env)) == Ok(Classification::Prime),
            Pred::Coprime(t) => matches!(classify(t.eval(env)), Ok(Classification::Coprime(_))),
            Pred::Not(p) => !p.eval(env),
            Pred::And(a, b) => a.eval(env) && b.eval(env),
            Pred::Or(a, b) => a.eval(env) || b.eval(env),
        }
    }

    /// Evaluates with `x` bound to `x`.
    pub fn eval_at(&self, x: u64) -> bool {
        self.eval(&[("x", x)])
    }

    fn visit_terms<'t>(&'t self, out: &mut Vec<&'t Term>) {
        match self {
            Pred::True | Pred::False => {}
            Pred::Cmp(_, a, b) | Pred::Divides(a, b) => out.extend([a, b]),
            Pred::Prime(t) | Pred::Coprime(t) => out.push(t),
            Pred::Not(p) => p.visit_terms(out),
            Pred::And(a, b) | Pred::Or(a, b) => {
                a.visit_terms(out);
                b.visit_terms(out);
            }
        }
    }
}

/// Position and expectation of a parse failure.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("at offset {offset}: {message}")]
pub struct ParseDiagnostic {
    /// Byte offset into the input.
    pub offset: usize,
    pub expected: Vec<String>,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Lint {
    pub message: String,
}

impl fmt::Display for Lint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

/// Warnings about expressions that evaluate by convention rather than by
/// arithmetic: currently, reductions modulo a constant zero.
pub fn lint(p: &Pred) -> Vec<Lint> {
    let mut terms = Vec::new();
    p.visit_terms(&mut terms);
    let mut divisors = Vec::new();
    for t in terms {
        t.visit_mods(&mut divisors);
    }
    divisors
        .into_iter()
        .filter(|d| d.is_closed() && d.eval(&[]) == 0)
        .map(|d| Lint {
            message: format!("`mod {d}` divides by zero and evaluates to 0"),
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DslError {
    #[error("{which}: {diagnostic}")]
    Parse { which: String, diagnostic: ParseDiagnostic },
    #[error(transparent)]
    Subset(#[from] ComplementedError),
}

/// The subset of ℕ described by `p` in the variable `x`.
pub fn subset_from_pred(p: Pred) -> ExtensionalSubset {
    let description = p.to_string();
    ExtensionalSubset::new(description, move |x| p.eval_at(x))
}

/// Builds `(A¹, A⁰)` from two predicates and checks that they share no
/// element in `[0, bound]`.
pub fn complemented_from_exprs(e1: &Pred, e0: &Pred, bound: u64) -> Result<ComplementedSubset, ComplementedError> {
    ComplementedSubset::with_check_bound(subset_from_pred(e1.clone()), subset_from_pred(e0.clone()), bound)
}

/// [`complemented_from_exprs`] on source text.
pub fn complemented_from_source(a1: &str, a0: &str, bound: u64) -> Result<ComplementedSubset, DslError> {
    let parse_one = |which: &str, src: &str| {
        parse(src).map_err(|diagnostic| DslError::Parse {
            which: which.to_string(),
            diagnostic,
        })
    };
    let (e1, e0) = (parse_one("A¹", a1)?, parse_one("A⁰", a0)?);
    Ok(complemented_from_exprs(&e1, &e0, bound)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn var() -> Term {
        Term::Var("x".into())
    }

    #[test]
    fn parse_examples() {
        assert_eq!(parse("x = 2").unwrap(), Pred::Cmp(CmpOp::Eq, var(), Term::Lit(2)));
        assert_eq!(
            parse("2 divides x and x > 3").unwrap(),
            Pred::And(
                Box::new(Pred::Divides(Term::Lit(2), var())),
                Box::new(Pred::Cmp(CmpOp::Gt, var(), Term::Lit(3)))
            )
        );
        let d = parse("x <").unwrap_err();
        assert_eq!(d.offset, 3);
        assert_eq!(d.expected, vec!["expression".to_string()]);
    }

    #[test]
    fn eval_examples() {
        assert!(parse("x mod 5 = 2").unwrap().eval_at(17));
        assert!(!parse("x = 2").unwrap().eval_at(3));
        for x in [0, 7, 1000] {
            assert!(parse("3 - 5 = 0").unwrap().eval_at(x));
        }
        assert!(parse("prime(x)").unwrap().eval_at(97));
        assert!(parse("coprime(x)").unwrap().eval_at(91));
        assert!(!parse("coprime(x) or prime(x)").unwrap().eval_at(1));
        assert!(parse("divides(3, x)").unwrap().eval_at(12));
        assert!(parse("0 divides x").unwrap().eval_at(0));
        assert!(!parse("0 divides x").unwrap().eval_at(5));
        assert!(parse("x mod 0 = 0").unwrap().eval_at(9));
        assert!(parse("9223372036854775807 * 9 > 0").unwrap().eval_at(0));
    }

    #[test]
    fn lint_flags_mod_by_zero() {
        assert_eq!(lint(&parse("x mod 0 = 0").unwrap()).len(), 1);
        assert_eq!(lint(&parse("x mod (3 - 5) = 0").unwrap()).len(), 1);
        assert!(lint(&parse("x mod 7 = 0 and x mod x = 0").unwrap()).is_empty());
    }

    #[test]
    fn complemented_examples() {
        let a = complemented_from_source("x = 2", "x = 3", 100).unwrap();
        assert_eq!(a.provers().members_up_to(100), vec![2]);
        assert_eq!(a.refuters().members_up_to(100), vec![3]);
        let a = complemented_from_source("2 divides x", "not (2 divides x)", 100).unwrap();
        assert!(a.is_total_on(100));
        let err = complemented_from_source("x > 5", "x > 3", 100).unwrap_err();
        assert_eq!(err, DslError::Subset(ComplementedError::DisjointnessViolated(6)));
        assert!(matches!(
            complemented_from_source("x >", "x = 3", 100),
            Err(DslError::Parse { .. })
        ));
    }
}
