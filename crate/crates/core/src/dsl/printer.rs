//! Canonical rendering with the fewest parentheses that parse back to the
//! same tree. Binary operators associate to the left.

use std::fmt;

use super::{Pred, Term};

const OR: u8 = 1;
const AND: u8 = 2;
const NOT: u8 = 3;
const CMP: u8 = 4;
const SUM: u8 = 5;
const PROD: u8 = 6;
const ATOM: u8 = 7;

fn term(t: &Term, min: u8, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    let (prec, op, a, b) = match t {
        Term::Lit(n) => return write!(f, "{n}"),
        Term::Var(v) => return f.write_str(v),
        Term::Add(a, b) => (SUM, "+", a, b),
        Term::Sub(a, b) => (SUM, "-", a, b),
        Term::Mul(a, b) => (PROD, "*", a, b),
        Term::Mod(a, b) => (PROD, "mod", a, b),
    };
    let wrap = prec < min;
    if wrap {
        f.write_str("(")?;
    }
    term(a, prec, f)?;
    write!(f, " {op} ")?;
    term(b, prec + 1, f)?;
    if wrap {
        f.write_str(")")?;
    }
    Ok(())
}

fn pred(p: &Pred, min: u8, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    let prec = match p {
        Pred::Or(..) => OR,
        Pred::And(..) => AND,
        Pred::Not(_) => NOT,
        Pred::Cmp(..) | Pred::Divides(..) => CMP,
        _ => ATOM,
    };
    let wrap = prec < min;
    if wrap {
        f.write_str("(")?;
    }
    match p {
        Pred::True => f.write_str("true")?,
        Pred::False => f.write_str("false")?,
        Pred::Prime(t) => {
            f.write_str("prime(")?;
            term(t, SUM, f)?;
            f.write_str(")")?;
        }
        Pred::Coprime(t) => {
            f.write_str("coprime(")?;
            term(t, SUM, f)?;
            f.write_str(")")?;
        }
        Pred::Cmp(op, a, b) => {
            term(a, SUM, f)?;
            write!(f, " {} ", op.symbol())?;
            term(b, SUM, f)?;
        }
        Pred::Divides(a, b) => {
            term(a, SUM, f)?;
            f.write_str(" divides ")?;
            term(b, SUM, f)?;
        }
        Pred::Not(q) => {
            f.write_str("not ")?;
            pred(q, NOT, f)?;
        }
        Pred::And(a, b) => {
            pred(a, AND, f)?;
            f.write_str(" and ")?;
            pred(b, AND + 1, f)?;
        }
        Pred::Or(a, b) => {
            pred(a, OR, f)?;
            f.write_str(" or ")?;
            pred(b, OR + 1, f)?;
        }
    }
    if wrap {
        f.write_str(")")?;
    }
    Ok(())
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        term(self, SUM, f)
    }
}

impl fmt::Display for Pred {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        pred(self, OR, f)
    }
}

#[cfg(test)]
mod tests {
    use super::super::{parse, parse_term_in};

    fn canon(src: &str) -> String {
        parse(src).unwrap().to_string()
    }

    #[test]
    fn minimal_parentheses() {
        assert_eq!(canon("((x = 1) or (x = 2)) or x = 3"), "x = 1 or x = 2 or x = 3");
        assert_eq!(canon("x = 1 or (x = 2 or x = 3)"), "x = 1 or (x = 2 or x = 3)");
        assert_eq!(canon("(x = 1 or x = 2) and x = 3"), "(x = 1 or x = 2) and x = 3");
        assert_eq!(canon("not (x = 1 and x = 2)"), "not (x = 1 and x = 2)");
        assert_eq!(canon("not not x=1"), "not not x = 1");
        assert_eq!(canon("divides(3,x)"), "3 divides x");
        assert_eq!(canon("x mod (3-5) = 0"), "x mod (3 - 5) = 0");
        assert_eq!(canon("prime((x))"), "prime(x)");
        assert_eq!(canon("(true)"), "true");
    }

    #[test]
    fn terms() {
        let t = |s: &str| parse_term_in(s, &["x"]).unwrap().to_string();
        assert_eq!(t("(x - 1) - 2"), "x - 1 - 2");
        assert_eq!(t("x - (1 - 2)"), "x - (1 - 2)");
        assert_eq!(t("(x + 1) * 2"), "(x + 1) * 2");
        assert_eq!(t("x * (2 mod 3)"), "x * (2 mod 3)");
    }
}
