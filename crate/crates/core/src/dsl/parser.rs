use super::rules::{Pattern, Template};
use super::{CmpOp, ParseDiagnostic, Pred, Term, MAX_LITERAL};

#[derive(Debug, Clone, PartialEq, Eq)]
enum Kind {
    Int(u64),
    Ident(String),
    And,
    Or,
    Not,
    Divides,
    Mod,
    True,
    False,
    Prime,
    Coprime,
    If,
    Inl,
    Inr,
    Underscore,
    Cmp(CmpOp),
    Plus,
    Minus,
    Star,
    LParen,
    RParen,
    Comma,
    Arrow,
    Eof,
}

impl Kind {
    fn describe(&self) -> String {
        match self {
            Kind::Int(n) => format!("`{n}`"),
            Kind::Ident(s) => format!("`{s}`"),
            Kind::And => "`and`".into(),
            Kind::Or => "`or`".into(),
            Kind::Not => "`not`".into(),
            Kind::Divides => "`divides`".into(),
            Kind::Mod => "`mod`".into(),
            Kind::True => "`true`".into(),
            Kind::False => "`false`".into(),
            Kind::Prime => "`prime`".into(),
            Kind::Coprime => "`coprime`".into(),
            Kind::If => "`if`".into(),
            Kind::Inl => "`inl`".into(),
            Kind::Inr => "`inr`".into(),
            Kind::Underscore => "`_`".into(),
            Kind::Cmp(op) => format!("`{}`", op.symbol()),
            Kind::Plus => "`+`".into(),
            Kind::Minus => "`-`".into(),
            Kind::Star => "`*`".into(),
            Kind::LParen => "`(`".into(),
            Kind::RParen => "`)`".into(),
            Kind::Comma => "`,`".into(),
            Kind::Arrow => "`=>`".into(),
            Kind::Eof => "end of input".into(),
        }
    }
}

#[derive(Debug, Clone)]
struct Tok {
    kind: Kind,
    offset: usize,
}

fn diagnostic(offset: usize, expected: &[&str], message: impl Into<String>) -> ParseDiagnostic {
    ParseDiagnostic {
        offset,
        expected: expected.iter().map(|s| s.to_string()).collect(),
        message: message.into(),
    }
}

fn lex(src: &str) -> Result<Vec<Tok>, ParseDiagnostic> {
    let bytes = src.as_bytes();
    let mut toks = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        if c.is_ascii_whitespace() {
            i += 1;
            continue;
        }
        let start = i;
        let kind = if c.is_ascii_digit() {
            while i < bytes.len() && bytes[i].is_ascii_digit() {
                i += 1;
            }
            let text = &src[start..i];
            match text.parse::<u64>() {
                Ok(n) if n <= MAX_LITERAL => Kind::Int(n),
                _ => {
                    return Err(diagnostic(
                        start,
                        &[],
                        format!("integer literal {text} exceeds {MAX_LITERAL}"),
                    ))
                }
            }
        } else if c.is_ascii_alphabetic() || c == b'_' {
            while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                i += 1;
            }
            match &src[start..i] {
                "and" => Kind::And,
                "or" => Kind::Or,
                "not" => Kind::Not,
                "divides" => Kind::Divides,
                "mod" => Kind::Mod,
                "true" => Kind::True,
                "false" => Kind::False,
                "prime" => Kind::Prime,
                "coprime" => Kind::Coprime,
                "if" => Kind::If,
                "inl" => Kind::Inl,
                "inr" => Kind::Inr,
                "_" => Kind::Underscore,
                name => Kind::Ident(name.to_string()),
            }
        } else {
            let two = bytes.get(i + 1).copied();
            let (kind, width) = match (c, two) {
                (b'=', Some(b'>')) => (Kind::Arrow, 2),
                (b'!', Some(b'=')) => (Kind::Cmp(CmpOp::Ne), 2),
                (b'<', Some(b'=')) => (Kind::Cmp(CmpOp::Le), 2),
                (b'>', Some(b'=')) => (Kind::Cmp(CmpOp::Ge), 2),
                (b'=', _) => (Kind::Cmp(CmpOp::Eq), 1),
                (b'<', _) => (Kind::Cmp(CmpOp::Lt), 1),
                (b'>', _) => (Kind::Cmp(CmpOp::Gt), 1),
                (b'+', _) => (Kind::Plus, 1),
                (b'-', _) => (Kind::Minus, 1),
                (b'*', _) => (Kind::Star, 1),
                (b'(', _) => (Kind::LParen, 1),
                (b')', _) => (Kind::RParen, 1),
                (b',', _) => (Kind::Comma, 1),
                _ => {
                    let ch = src[start..].chars().next().unwrap_or('?');
                    return Err(diagnostic(start, &[], format!("unexpected character `{ch}`")));
                }
            };
            i += width;
            kind
        };
        toks.push(Tok { kind, offset: start });
    }
    toks.push(Tok {
        kind: Kind::Eof,
        offset: src.len(),
    });
    Ok(toks)
}

enum Node {
    T(Term),
    P(Pred),
}

pub(crate) struct Parser {
    toks: Vec<Tok>,
    pos: usize,
    vars: Vec<String>,
}

type PResult<T> = Result<T, ParseDiagnostic>;

impl Parser {
    pub(crate) fn new(src: &str) -> PResult<Self> {
        Ok(Parser {
            toks: lex(src)?,
            pos: 0,
            vars: Vec::new(),
        })
    }

    fn peek(&self) -> &Kind {
        &self.toks[self.pos].kind
    }

    fn offset(&self) -> usize {
        self.toks[self.pos].offset
    }

    fn bump(&mut self) -> Kind {
        let k = self.toks[self.pos].kind.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        k
    }

    fn error(&self, expected: &[&str]) -> ParseDiagnostic {
        let found = self.peek().describe();
        let what = expected.join(" or ");
        diagnostic(self.offset(), expected, format!("expected {what}, found {found}"))
    }

    fn expect(&mut self, kind: Kind, label: &str) -> PResult<()> {
        if *self.peek() == kind {
            self.bump();
            Ok(())
        } else {
            Err(self.error(&[label]))
        }
    }

    pub(crate) fn expect_end(&mut self) -> PResult<()> {
        if *self.peek() == Kind::Eof {
            Ok(())
        } else {
            Err(self.error(&["end of input"]))
        }
    }

    pub(crate) fn set_vars(&mut self, vars: Vec<String>) {
        self.vars = vars;
    }

    pub(crate) fn mark(&self) -> usize {
        self.pos
    }

    pub(crate) fn reset(&mut self, mark: usize) {
        self.pos = mark;
    }

    pub(crate) fn at_if(&self) -> bool {
        *self.peek() == Kind::If
    }

    pub(crate) fn at_end(&self) -> bool {
        *self.peek() == Kind::Eof
    }

    pub(crate) fn at_arrow(&self) -> bool {
        *self.peek() == Kind::Arrow
    }

    pub(crate) fn eat_if(&mut self) -> bool {
        self.eat(Kind::If)
    }

    pub(crate) fn expect_arrow(&mut self) -> PResult<()> {
        self.expect(Kind::Arrow, "`=>`")
    }

    fn eat(&mut self, kind: Kind) -> bool {
        if *self.peek() == kind {
            self.bump();
            true
        } else {
            false
        }
    }

    fn pred(node: Node, offset: usize) -> PResult<Pred> {
        match node {
            Node::P(p) => Ok(p),
            Node::T(_) => Err(diagnostic(
                offset,
                &["predicate"],
                "expected a predicate, found an arithmetic expression",
            )),
        }
    }

    fn term(node: Node, offset: usize) -> PResult<Term> {
        match node {
            Node::T(t) => Ok(t),
            Node::P(_) => Err(diagnostic(
                offset,
                &["arithmetic expression"],
                "expected an arithmetic expression, found a predicate",
            )),
        }
    }

    pub(crate) fn parse_pred(&mut self) -> PResult<Pred> {
        let start = self.offset();
        let node = self.or()?;
        Self::pred(node, start)
    }

    pub(crate) fn parse_sum(&mut self) -> PResult<Term> {
        let start = self.offset();
        let node = self.sum()?;
        Self::term(node, start)
    }

    fn or(&mut self) -> PResult<Node> {
        let start = self.offset();
        let mut left = self.and()?;
        while *self.peek() == Kind::Or {
            self.bump();
            let l = Self::pred(left, start)?;
            let at = self.offset();
            let r = Self::pred(self.and()?, at)?;
            left = Node::P(Pred::Or(Box::new(l), Box::new(r)));
        }
        Ok(left)
    }

    fn and(&mut self) -> PResult<Node> {
        let start = self.offset();
        let mut left = self.neg()?;
        while *self.peek() == Kind::And {
            self.bump();
            let l = Self::pred(left, start)?;
            let at = self.offset();
            let r = Self::pred(self.neg()?, at)?;
            left = Node::P(Pred::And(Box::new(l), Box::new(r)));
        }
        Ok(left)
    }

    fn neg(&mut self) -> PResult<Node> {
        if *self.peek() == Kind::Not {
            self.bump();
            let at = self.offset();
            let p = Self::pred(self.neg()?, at)?;
            return Ok(Node::P(Pred::Not(Box::new(p))));
        }
        self.cmp()
    }

    fn cmp(&mut self) -> PResult<Node> {
        let start = self.offset();
        let left = self.sum()?;
        match self.peek().clone() {
            Kind::Cmp(op) => {
                self.bump();
                let l = Self::term(left, start)?;
                let r = self.parse_sum()?;
                Ok(Node::P(Pred::Cmp(op, l, r)))
            }
            Kind::Divides => {
                self.bump();
                let l = Self::term(left, start)?;
                let r = self.parse_sum()?;
                Ok(Node::P(Pred::Divides(l, r)))
            }
            _ => Ok(left),
        }
    }

    fn sum(&mut self) -> PResult<Node> {
        let start = self.offset();
        let mut left = self.prod()?;
        loop {
            let ctor: fn(Box<Term>, Box<Term>) -> Term = match self.peek() {
                Kind::Plus => Term::Add,
                Kind::Minus => Term::Sub,
                _ => return Ok(left),
            };
            self.bump();
            let l = Self::term(left, start)?;
            let at = self.offset();
            let r = Self::term(self.prod()?, at)?;
            left = Node::T(ctor(Box::new(l), Box::new(r)));
        }
    }

    fn prod(&mut self) -> PResult<Node> {
        let start = self.offset();
        let mut left = self.atom()?;
        loop {
            let ctor: fn(Box<Term>, Box<Term>) -> Term = match self.peek() {
                Kind::Star => Term::Mul,
                Kind::Mod => Term::Mod,
                _ => return Ok(left),
            };
            self.bump();
            let l = Self::term(left, start)?;
            let at = self.offset();
            let r = Self::term(self.atom()?, at)?;
            left = Node::T(ctor(Box::new(l), Box::new(r)));
        }
    }

    fn atom(&mut self) -> PResult<Node> {
        let offset = self.offset();
        match self.peek().clone() {
            Kind::Int(n) => {
                self.bump();
                Ok(Node::T(Term::Lit(n)))
            }
            Kind::Ident(name) => {
                if !self.vars.contains(&name) {
                    let known: Vec<&str> = self.vars.iter().map(String::as_str).collect();
                    let message = if known.is_empty() {
                        format!("unknown variable `{name}`; no variables are bound here")
                    } else {
                        format!("unknown variable `{name}`; bound variables: {}", known.join(", "))
                    };
                    return Err(diagnostic(offset, &known, message));
                }
                self.bump();
                Ok(Node::T(Term::Var(name)))
            }
            Kind::True => {
                self.bump();
                Ok(Node::P(Pred::True))
            }
            Kind::False => {
                self.bump();
                Ok(Node::P(Pred::False))
            }
            Kind::Prime | Kind::Coprime => {
                let kind = self.bump();
                self.expect(Kind::LParen, "`(`")?;
                let t = self.parse_sum()?;
                self.expect(Kind::RParen, "`)`")?;
                Ok(Node::P(if kind == Kind::Prime { Pred::Prime(t) } else { Pred::Coprime(t) }))
            }
            Kind::Divides if self.toks.get(self.pos + 1).map(|t| &t.kind) == Some(&Kind::LParen) => {
                self.bump();
                self.bump();
                let k = self.parse_sum()?;
                self.expect(Kind::Comma, "`,`")?;
                let n = self.parse_sum()?;
                self.expect(Kind::RParen, "`)`")?;
                Ok(Node::P(Pred::Divides(k, n)))
            }
            Kind::LParen => {
                self.bump();
                let inner = self.or()?;
                self.expect(Kind::RParen, "`)`")?;
                Ok(inner)
            }
            _ => Err(self.error(&["expression"])),
        }
    }

    pub(crate) fn parse_pattern(&mut self) -> PResult<Pattern> {
        match self.peek().clone() {
            Kind::Ident(name) => {
                self.bump();
                Ok(Pattern::Var(name))
            }
            Kind::Int(n) => {
                self.bump();
                Ok(Pattern::Lit(n))
            }
            Kind::Underscore => {
                self.bump();
                Ok(Pattern::Wildcard)
            }
            Kind::Inl => {
                self.bump();
                Ok(Pattern::Inl(Box::new(self.parse_pattern()?)))
            }
            Kind::Inr => {
                self.bump();
                Ok(Pattern::Inr(Box::new(self.parse_pattern()?)))
            }
            Kind::LParen => {
                self.bump();
                let a = self.parse_pattern()?;
                self.expect(Kind::Comma, "`,`")?;
                let b = self.parse_pattern()?;
                self.expect(Kind::RParen, "`)`")?;
                Ok(Pattern::Pair(Box::new(a), Box::new(b)))
            }
            _ => Err(self.error(&["pattern"])),
        }
    }

    pub(crate) fn parse_template(&mut self) -> PResult<Template> {
        match self.peek() {
            Kind::Inl => {
                self.bump();
                Ok(Template::Inl(Box::new(self.parse_template()?)))
            }
            Kind::Inr => {
                self.bump();
                Ok(Template::Inr(Box::new(self.parse_template()?)))
            }
            Kind::LParen => {
                let mark = self.mark();
                self.bump();
                if let Ok(first) = self.parse_template() {
                    if self.eat(Kind::Comma) {
                        let second = self.parse_template()?;
                        self.expect(Kind::RParen, "`)`")?;
                        return Ok(Template::Pair(Box::new(first), Box::new(second)));
                    }
                }
                // Not a pair: a parenthesised arithmetic expression.
                self.reset(mark);
                Ok(Template::Term(self.parse_sum()?))
            }
            _ => Ok(Template::Term(self.parse_sum()?)),
        }
    }
}

/// Parses a predicate in the variable `x`.
pub fn parse(src: &str) -> Result<Pred, ParseDiagnostic> {
    parse_in(src, &["x"])
}

/// Parses a predicate over the given variables.
pub fn parse_in(src: &str, vars: &[&str]) -> Result<Pred, ParseDiagnostic> {
    let mut p = Parser::new(src)?;
    p.set_vars(vars.iter().map(|s| s.to_string()).collect());
    let pred = p.parse_pred()?;
    p.expect_end()?;
    Ok(pred)
}

/// Parses an arithmetic expression over the given variables.
pub fn parse_term_in(src: &str, vars: &[&str]) -> Result<Term, ParseDiagnostic> {
    let mut p = Parser::new(src)?;
    p.set_vars(vars.iter().map(|s| s.to_string()).collect());
    let t = p.parse_sum()?;
    p.expect_end()?;
    Ok(t)
}
