//! Prime divisors, found two ways: by descent through proper divisors, and
//! as a by-product of the least coprime divisor.

use serde::Serialize;
use thiserror::Error;

use crate::complemented::{clnp_least, ComplementedError, ComplementedSubset, ExtensionalSubset};
use crate::engine::{DescentTrace, SearchError, StepOutcome, TraceOutcome};
use crate::nat::nat_search;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Classification {
    Prime,
    /// A divisor strictly between 1 and the number; always the smallest one.
    Coprime(u64),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ArithmeticError {
    #[error("{0} is outside the domain (must be greater than 1)")]
    OutOfDomain(u64),
    #[error(transparent)]
    Search(#[from] SearchError),
    #[error(transparent)]
    Complemented(#[from] ComplementedError),
    #[error("result {p} for {n} is not a prime divisor")]
    Unsound { n: u64, p: u64 },
}

/// Smallest divisor of `x` in `2..=√x`, if any.
fn smallest_proper_divisor(x: u64) -> Option<u64> {
    (2..).take_while(|d: &u64| d.saturating_mul(*d) <= x).find(|d| x % d == 0)
}

/// Prime or coprime, with the smallest proper divisor as the coprime witness.
pub fn classify(x: u64) -> Result<Classification, ArithmeticError> {
    if x <= 1 {
        return Err(ArithmeticError::OutOfDomain(x));
    }
    Ok(match smallest_proper_divisor(x) {
        Some(d) => Classification::Coprime(d),
        None => Classification::Prime,
    })
}

/// Independent primality check for verifying results.
pub fn is_prime_oracle(x: u64) -> bool {
    if x < 2 {
        return false;
    }
    if x < 4 {
        return true;
    }
    if x % 2 == 0 {
        return false;
    }
    let mut d = 3u64;
    while d * d <= x {
        if x % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Descent,
    Clnp,
}

#[derive(Debug, Clone)]
pub struct PrimeDivisorResult {
    pub n: u64,
    pub p: u64,
    pub method: Method,
    /// Least coprime divisor, for the `Clnp` method on a composite input.
    pub mu: Option<u64>,
    pub trace: DescentTrace<u64>,
}

#[derive(Serialize)]
struct ResultRecord<'a> {
    n: u64,
    p: u64,
    method: Method,
    #[serde(skip_serializing_if = "Option::is_none")]
    mu: Option<u64>,
    trace: &'a [u64],
}

impl Serialize for PrimeDivisorResult {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        ResultRecord {
            n: self.n,
            p: self.p,
            method: self.method,
            mu: self.mu,
            trace: &self.trace.visited,
        }
        .serialize(serializer)
    }
}

impl PrimeDivisorResult {
    fn check(self) -> Result<Self, ArithmeticError> {
        if is_prime_oracle(self.p) && self.n % self.p == 0 {
            Ok(self)
        } else {
            Err(ArithmeticError::Unsound { n: self.n, p: self.p })
        }
    }
}

fn prime_shortcut(n: u64, method: Method) -> PrimeDivisorResult {
    PrimeDivisorResult {
        n,
        p: n,
        method,
        mu: None,
        trace: DescentTrace::new("ℕ", vec![n], TraceOutcome::Found(n)),
    }
}

/// A prime divisor of `n` by descent through divisors of `n` greater than 1:
/// at a prime stop, at a composite move to its smallest proper divisor.
///
/// With that choice the result is the smallest prime factor of `n`.
pub fn prime_divisor_descent(n: u64) -> Result<PrimeDivisorResult, ArithmeticError> {
    if classify(n)? == Classification::Prime {
        return prime_shortcut(n, Method::Descent).check();
    }
    let d = nat_search(n, |&x| match classify(x) {
        Ok(Classification::Coprime(y)) => StepOutcome::Descend(y),
        // Every visited x divides n and exceeds 1, so classify succeeds.
        _ => StepOutcome::Found(x),
    })?;
    PrimeDivisorResult {
        n,
        p: d.found,
        method: Method::Descent,
        mu: None,
        trace: d.trace,
    }
    .check()
}

/// `𝑷(n)`: provers are the composite divisors of `n`, refuters the prime
/// divisors of `n`.
pub fn divisor_subset(n: u64) -> Result<ComplementedSubset, ArithmeticError> {
    let provers = ExtensionalSubset::new(format!("composite divisors of {n}"), move |x| {
        x > 1 && n % x == 0 && matches!(classify(x), Ok(Classification::Coprime(_)))
    })
    .with_bound(n);
    let refuters = ExtensionalSubset::new(format!("prime divisors of {n}"), move |x| {
        x > 1 && n % x == 0 && classify(x) == Ok(Classification::Prime)
    })
    .with_bound(n);
    Ok(ComplementedSubset::new(provers, refuters)?)
}

/// A prime divisor of `n` via the least composite divisor `μ` of `n`: any
/// proper divisor of `μ` divides `n` and lies below `μ`, so it cannot be
/// composite and is therefore prime. The smallest one is returned.
pub fn prime_divisor_clnp(n: u64) -> Result<PrimeDivisorResult, ArithmeticError> {
    let Classification::Coprime(_) = classify(n)? else {
        return prime_shortcut(n, Method::Clnp).check();
    };
    let subset = divisor_subset(n)?;
    let cert = clnp_least(&subset, n)?;
    let mu = cert.mu;
    let Ok(Classification::Coprime(p)) = classify(mu) else {
        return Err(ArithmeticError::Unsound { n, p: mu });
    };
    PrimeDivisorResult {
        n,
        p,
        method: Method::Clnp,
        mu: Some(mu),
        trace: cert.trace,
    }
    .check()
}
