//! Step rules: a search oracle written as text.
//!
//! ```text
//! found   := [ pattern "if" ] pred
//! descend := [ pattern [ "if" pred ] "=>" ] template
//! pattern := variable | "_" | integer | "(" pattern "," pattern ")"
//!          | "inl" pattern | "inr" pattern
//! template := sum | "(" template "," template ")" | "inl" template | "inr" template
//! ```
//!
//! Without a pattern the whole value is bound to `x`. A variable used in
//! arithmetic must be bound to a number; a template that is a bare variable
//! copies whatever value it is bound to.

use std::fmt;

use thiserror::Error;

use super::parser::Parser;
use super::{ParseDiagnostic, Pred, Term};

/// Values of the structures built from ℕ by products, coproducts and
/// restriction.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Value {
    Nat(u64),
    Pair(Box<Value>, Box<Value>),
    Inl(Box<Value>),
    Inr(Box<Value>),
}

impl Value {
    pub fn pair(a: Value, b: Value) -> Self {
        Value::Pair(Box::new(a), Box::new(b))
    }

    pub fn inl(a: Value) -> Self {
        Value::Inl(Box::new(a))
    }

    pub fn inr(a: Value) -> Self {
        Value::Inr(Box::new(a))
    }

    /// Parses a closed template such as `(3, inl 2)`.
    pub fn parse(src: &str) -> Result<Value, ParseDiagnostic> {
        let mut p = Parser::new(src)?;
        let t = p.parse_template()?;
        p.expect_end()?;
        t.instantiate(&[]).map_err(|e| ParseDiagnostic {
            offset: 0,
            expected: vec![],
            message: e.to_string(),
        })
    }
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Nat(n) => write!(f, "{n}"),
            Value::Pair(a, b) => write!(f, "({a},{b})"),
            Value::Inl(a) => write!(f, "inl {a}"),
            Value::Inr(b) => write!(f, "inr {b}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Pattern {
    Var(String),
    Wildcard,
    Lit(u64),
    Pair(Box<Pattern>, Box<Pattern>),
    Inl(Box<Pattern>),
    Inr(Box<Pattern>),
}

type Bindings = [(String, Value)];

impl Pattern {
    fn vars<'p>(&'p self, out: &mut Vec<&'p str>) {
        match self {
            Pattern::Var(v) => out.push(v),
            Pattern::Wildcard | Pattern::Lit(_) => {}
            Pattern::Pair(a, b) => {
                a.vars(out);
                b.vars(out);
            }
            Pattern::Inl(a) | Pattern::Inr(a) => a.vars(out),
        }
    }

    fn bind(&self, v: &Value, out: &mut Vec<(String, Value)>) -> bool {
        match (self, v) {
            (Pattern::Var(name), _) => {
                out.push((name.clone(), v.clone()));
                true
            }
            (Pattern::Wildcard, _) => true,
            (Pattern::Lit(n), Value::Nat(m)) => n == m,
            (Pattern::Pair(p, q), Value::Pair(a, b)) => p.bind(a, out) && q.bind(b, out),
            (Pattern::Inl(p), Value::Inl(a)) | (Pattern::Inr(p), Value::Inr(a)) => p.bind(a, out),
            _ => false,
        }
    }

    /// The bindings if `v` matches.
    pub fn matches(&self, v: &Value) -> Option<Vec<(String, Value)>> {
        let mut out = Vec::new();
        self.bind(v, &mut out).then_some(out)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Template {
    Term(Term),
    Pair(Box<Template>, Box<Template>),
    Inl(Box<Template>),
    Inr(Box<Template>),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RuleError {
    #[error("{rule}: {diagnostic}")]
    Parse { rule: String, diagnostic: ParseDiagnostic },
    #[error("variable `{var}` is bound to {value}, not a number")]
    NotANumber { var: String, value: String },
    #[error("no rule applies to {0}")]
    NoRuleApplies(String),
}

fn term_vars<'t>(t: &'t Term, out: &mut Vec<&'t str>) {
    match t {
        Term::Lit(_) => {}
        Term::Var(v) => out.push(v),
        Term::Add(a, b) | Term::Sub(a, b) | Term::Mul(a, b) | Term::Mod(a, b) => {
            term_vars(a, out);
            term_vars(b, out);
        }
    }
}

fn numeric_env<'b>(b: &'b Bindings, used: &[&str]) -> Result<Vec<(&'b str, u64)>, RuleError> {
    let mut env = Vec::new();
    for (name, value) in b {
        match value {
            Value::Nat(n) => env.push((name.as_str(), *n)),
            other if used.contains(&name.as_str()) => {
                return Err(RuleError::NotANumber {
                    var: name.clone(),
                    value: other.to_string(),
                })
            }
            _ => {}
        }
    }
    Ok(env)
}

impl Template {
    fn instantiate(&self, b: &Bindings) -> Result<Value, RuleError> {
        Ok(match self {
            Template::Term(Term::Var(v)) => match b.iter().find(|(name, _)| name == v) {
                Some((_, value)) => value.clone(),
                None => Value::Nat(0),
            },
            Template::Term(t) => {
                let mut used = Vec::new();
                term_vars(t, &mut used);
                Value::Nat(t.eval(&numeric_env(b, &used)?))
            }
            Template::Pair(a, c) => Value::pair(a.instantiate(b)?, c.instantiate(b)?),
            Template::Inl(a) => Value::inl(a.instantiate(b)?),
            Template::Inr(a) => Value::inr(a.instantiate(b)?),
        })
    }
}

fn holds(guard: &Pred, b: &Bindings) -> Result<bool, RuleError> {
    let mut terms = Vec::new();
    guard.visit_terms(&mut terms);
    let mut used = Vec::new();
    for t in terms {
        term_vars(t, &mut used);
    }
    Ok(guard.eval(&numeric_env(b, &used)?))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FoundRule {
    pub pattern: Pattern,
    pub guard: Pred,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DescendRule {
    pub pattern: Pattern,
    pub guard: Option<Pred>,
    pub template: Template,
}

fn implicit() -> Pattern {
    Pattern::Var("x".into())
}

fn pattern_scope(p: &mut Parser, pattern: &Pattern, offset: usize) -> Result<(), ParseDiagnostic> {
    let mut vars = Vec::new();
    pattern.vars(&mut vars);
    for (i, v) in vars.iter().enumerate() {
        if vars[..i].contains(v) {
            return Err(ParseDiagnostic {
                offset,
                expected: vec![],
                message: format!("variable `{v}` is bound twice in the pattern"),
            });
        }
    }
    p.set_vars(vars.into_iter().map(str::to_string).collect());
    Ok(())
}

/// Parses a pattern if one is present and followed by a token accepted by
/// `commits`; otherwise rewinds and binds `x`.
fn leading_pattern(p: &mut Parser, commits: fn(&Parser) -> bool) -> Result<(Pattern, bool), ParseDiagnostic> {
    let mark = p.mark();
    let (pattern, explicit) = match p.parse_pattern() {
        Ok(pat) if commits(p) => (pat, true),
        _ => {
            p.reset(mark);
            (implicit(), false)
        }
    };
    pattern_scope(p, &pattern, 0)?;
    Ok((pattern, explicit))
}

impl FoundRule {
    pub fn parse(src: &str) -> Result<Self, ParseDiagnostic> {
        let mut p = Parser::new(src)?;
        // A pattern on its own stops on every element it matches.
        let (pattern, _) = leading_pattern(&mut p, |p| p.at_if() || p.at_end())?;
        let guard = if p.eat_if() || !p.at_end() { p.parse_pred()? } else { Pred::True };
        p.expect_end()?;
        Ok(FoundRule { pattern, guard })
    }

    pub fn fires(&self, v: &Value) -> Result<bool, RuleError> {
        match self.pattern.matches(v) {
            Some(b) => holds(&self.guard, &b),
            None => Ok(false),
        }
    }
}

impl DescendRule {
    pub fn parse(src: &str) -> Result<Self, ParseDiagnostic> {
        let mut p = Parser::new(src)?;
        let (pattern, explicit) = leading_pattern(&mut p, |p| p.at_if() || p.at_arrow())?;
        let mut guard = None;
        if explicit {
            if p.eat_if() {
                guard = Some(p.parse_pred()?);
            }
            p.expect_arrow()?;
        }
        let template = p.parse_template()?;
        p.expect_end()?;
        Ok(DescendRule {
            pattern,
            guard,
            template,
        })
    }

    fn fire(&self, v: &Value) -> Result<Option<Value>, RuleError> {
        let Some(b) = self.pattern.matches(v) else {
            return Ok(None);
        };
        if let Some(g) = &self.guard {
            if !holds(g, &b)? {
                return Ok(None);
            }
        }
        self.template.instantiate(&b).map(Some)
    }
}

/// What a set of rules says about a value.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RuleStep {
    Found,
    Descend(Value),
}

/// Found rules are tried first, then descend rules in order.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct StepRules {
    pub found: Vec<FoundRule>,
    pub descend: Vec<DescendRule>,
}

impl StepRules {
    pub fn parse<F: AsRef<str>, D: AsRef<str>>(found: &[F], descend: &[D]) -> Result<Self, RuleError> {
        let wrap = |src: &str, d| RuleError::Parse {
            rule: src.to_string(),
            diagnostic: d,
        };
        Ok(StepRules {
            found: found
                .iter()
                .map(|s| FoundRule::parse(s.as_ref()).map_err(|d| wrap(s.as_ref(), d)))
                .collect::<Result<_, _>>()?,
            descend: descend
                .iter()
                .map(|s| DescendRule::parse(s.as_ref()).map_err(|d| wrap(s.as_ref(), d)))
                .collect::<Result<_, _>>()?,
        })
    }

    pub fn apply(&self, v: &Value) -> Result<RuleStep, RuleError> {
        for rule in &self.found {
            if rule.fires(v)? {
                return Ok(RuleStep::Found);
            }
        }
        for rule in &self.descend {
            if let Some(next) = rule.fire(v)? {
                return Ok(RuleStep::Descend(next));
            }
        }
        Err(RuleError::NoRuleApplies(v.to_string()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn n(k: u64) -> Value {
        Value::Nat(k)
    }

    #[test]
    fn values_parse_and_print() {
        let v = Value::parse("(3, inl (1 + 1, inr 0))").unwrap();
        assert_eq!(v, Value::pair(n(3), Value::inl(Value::pair(n(2), Value::inr(n(0))))));
        assert_eq!(v.to_string(), "(3,inl (2,inr 0))");
        assert_eq!(Value::parse("(7)").unwrap(), n(7));
        assert!(Value::parse("(1,").is_err());
        assert!(Value::parse("x").is_err());
    }

    #[test]
    fn countdown() {
        let rules = StepRules::parse(&["x = 0"], &["x - 1"]).unwrap();
        assert_eq!(rules.apply(&n(0)).unwrap(), RuleStep::Found);
        assert_eq!(rules.apply(&n(5)).unwrap(), RuleStep::Descend(n(4)));
    }

    #[test]
    fn patterns_and_guards() {
        let rules = StepRules::parse(
            &["(a, b) if a = 0 and b = 0"],
            &["(a, b) if b > 0 => (a, b - 1)", "(a, _) => (a - 1, 9)"],
        )
        .unwrap();
        assert_eq!(rules.apply(&Value::pair(n(2), n(3))).unwrap(), RuleStep::Descend(Value::pair(n(2), n(2))));
        assert_eq!(rules.apply(&Value::pair(n(2), n(0))).unwrap(), RuleStep::Descend(Value::pair(n(1), n(9))));
        assert_eq!(rules.apply(&Value::pair(n(0), n(0))).unwrap(), RuleStep::Found);
        assert_eq!(rules.apply(&n(4)), Err(RuleError::NoRuleApplies("4".into())));
    }

    #[test]
    fn bare_pattern_found_rule() {
        let rule = FoundRule::parse("(0, _)").unwrap();
        assert!(rule.fires(&Value::pair(n(0), n(4))).unwrap());
        assert!(!rule.fires(&Value::pair(n(1), n(0))).unwrap());
        assert!(FoundRule::parse("x = 0").unwrap().fires(&n(0)).unwrap());
    }

    #[test]
    fn sums_and_literals() {
        let rules = StepRules::parse(&["inl x if x = 0"], &["inr 0 => inl 5", "inr y => inr y - 1", "inl x => inl x - 1"])
            .unwrap();
        assert_eq!(rules.apply(&Value::inr(n(0))).unwrap(), RuleStep::Descend(Value::inl(n(5))));
        assert_eq!(rules.apply(&Value::inr(n(3))).unwrap(), RuleStep::Descend(Value::inr(n(2))));
        assert_eq!(rules.apply(&Value::inl(n(0))).unwrap(), RuleStep::Found);
    }

    #[test]
    fn whole_value_copies_and_number_checks() {
        let rules = StepRules::parse(&["false"], &["(p, q) => (q, p)"]).unwrap();
        let v = Value::pair(Value::inl(n(1)), n(2));
        assert_eq!(rules.apply(&v).unwrap(), RuleStep::Descend(Value::pair(n(2), Value::inl(n(1)))));
        let rules = StepRules::parse(&["x = 0"], &["x"]).unwrap();
        assert!(matches!(rules.apply(&Value::pair(n(1), n(2))), Err(RuleError::NotANumber { .. })));
    }

    #[test]
    fn rule_diagnostics() {
        let err = StepRules::parse(&["(a, a) if a = 0"], &[] as &[&str]).unwrap_err();
        assert!(err.to_string().contains("bound twice"));
        let err = StepRules::parse(&["(a, b) if c = 0"], &[] as &[&str]).unwrap_err();
        assert!(err.to_string().contains("unknown variable `c`"));
        let err = StepRules::parse(&[] as &[&str], &["(a, b) if a > 0"]).unwrap_err();
        let RuleError::Parse { diagnostic, .. } = err else { panic!() };
        assert_eq!(diagnostic.expected, vec!["`=>`".to_string()]);
    }
}
