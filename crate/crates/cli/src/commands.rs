use std::path::Path;

use exwf::arithmetic::{is_prime_oracle, prime_divisor_clnp, prime_divisor_descent, ArithmeticError, PrimeDivisorResult};
use exwf::checks::{run_checks, CheckOptions, Suite, AXIOM_BOUND_CAP};
use exwf::complemented::{clnp_least, ComplementedError, LeastElementCert};
use exwf::dsl::rules::{RuleError, StepRules, Value};
use exwf::dsl::{complemented_from_exprs, lint, parse, ParseDiagnostic, Pred};
use exwf::dynamic::{run_rules, DescentConfig, StructureSpec};
use exwf::nat::{LawStatus, Mutant};
use exwf::{SearchError, Structure, TraceOutcome};
use serde::Serialize;
use serde_json::json;

use crate::output::{
    arrows, write_traces, Failure, Output, EXIT_BAD_STEP, EXIT_CHECKS, EXIT_DISJOINT, EXIT_DOMAIN,
    EXIT_NOT_LOCATABLE,
};
use crate::{Cli, MethodArg, MutantArg, SuiteArg};

fn caret(src: &str, d: &ParseDiagnostic) -> String {
    format!("{d}\n  {src}\n  {}^", " ".repeat(src[..d.offset.min(src.len())].chars().count()))
}

fn parse_failure(what: &str, src: &str, d: &ParseDiagnostic) -> Failure {
    Failure::usage(format!("{what}: {}", caret(src, d))).with_detail(json!({
        "offset": d.offset,
        "expected": d.expected,
    }))
}

fn parse_pred(flag: &str, src: &str) -> Result<Pred, Failure> {
    parse(src).map_err(|d| parse_failure(flag, src, &d))
}

fn search_failure(e: &SearchError) -> Failure {
    let detail = match e {
        SearchError::NonDecreasingStep { current, proposed } => json!({ "current": current, "proposed": proposed }),
        _ => serde_json::Value::Null,
    };
    Failure::new(EXIT_BAD_STEP, e.tag(), e.to_string()).with_detail(detail)
}

fn complemented_failure(e: ComplementedError) -> Failure {
    match e {
        ComplementedError::DisjointnessViolated(w) => Failure::new(
            EXIT_DISJOINT,
            "disjointness-violated",
            format!("A¹ and A⁰ share the element {w}"),
        )
        .with_detail(json!({ "witness": w })),
        ComplementedError::NotLocatable(y) => {
            Failure::new(EXIT_NOT_LOCATABLE, "not-locatable", e.to_string()).with_detail(json!({ "witness": y }))
        }
        ComplementedError::Search(ref s) => search_failure(s),
        ComplementedError::LeastViolated { .. } | ComplementedError::BadOverlap { .. } => {
            Failure::new(EXIT_BAD_STEP, "bad-step", e.to_string())
        }
        _ => Failure::new(EXIT_DOMAIN, "domain", e.to_string()),
    }
}

#[derive(Serialize)]
struct LeastReport<'a> {
    a1: String,
    a0: String,
    #[serde(flatten)]
    cert: &'a LeastElementCert,
}

pub fn least(cli: &Cli, out: &Output, a1: &str, a0: Option<&str>, start: u64) -> Result<(), Failure> {
    let e1 = parse_pred("--a1", a1)?;
    let e0 = match a0 {
        Some(src) => parse_pred("--a0", src)?,
        None => Pred::Not(Box::new(e1.clone())),
    };
    for l in lint(&e1).into_iter().chain(lint(&e0)) {
        out.warn(&l.message);
    }
    let a = complemented_from_exprs(&e1, &e0, cli.bound).map_err(complemented_failure)?;
    let cert = clnp_least(&a, start).map_err(complemented_failure)?;
    let record = cert.trace.record(|x| x.to_string());
    write_traces(cli.trace_out.as_deref(), std::slice::from_ref(&record))?;
    let report = LeastReport {
        a1: e1.to_string(),
        a0: e0.to_string(),
        cert: &cert,
    };
    out.emit(&report, || {
        vec![
            format!("A¹ = {e1}"),
            format!("A⁰ = {e0}"),
            format!("μ = {}", cert.mu),
            format!("trace: {}", arrows(&record.visited)),
        ]
    });
    Ok(())
}

fn arithmetic_failure(e: ArithmeticError) -> Failure {
    match e {
        ArithmeticError::OutOfDomain(_) => Failure::new(EXIT_DOMAIN, "domain", e.to_string()),
        ArithmeticError::Search(ref s) => search_failure(s),
        ArithmeticError::Complemented(c) => complemented_failure(c),
        ArithmeticError::Unsound { .. } => Failure::new(EXIT_CHECKS, "unsound", e.to_string()),
    }
}

#[derive(Serialize)]
struct BothReport<'a> {
    n: u64,
    results: &'a [PrimeDivisorResult],
    verified: bool,
}

pub fn prime_divisor(cli: &Cli, out: &Output, n: u64, method: MethodArg) -> Result<(), Failure> {
    if n <= 1 {
        return Err(Failure::new(EXIT_DOMAIN, "domain", format!("N must be at least 2, got {n}")));
    }
    let mut results = Vec::new();
    if matches!(method, MethodArg::Descent | MethodArg::Both) {
        results.push(prime_divisor_descent(n).map_err(arithmetic_failure)?);
    }
    if matches!(method, MethodArg::Clnp | MethodArg::Both) {
        results.push(prime_divisor_clnp(n).map_err(arithmetic_failure)?);
    }
    let records: Vec<_> = results.iter().map(|r| r.trace.record(|x| x.to_string())).collect();
    write_traces(cli.trace_out.as_deref(), &records)?;
    let verified = results.iter().all(|r| is_prime_oracle(r.p) && n % r.p == 0);
    let human = || {
        let mut lines: Vec<String> = results
            .iter()
            .zip(&records)
            .map(|(r, rec)| {
                let method = serde_json::to_value(r.method).ok().and_then(|v| v.as_str().map(String::from)).unwrap_or_default();
                let mu = r.mu.map(|m| format!("μ = {m}, ")).unwrap_or_default();
                format!("{method}: {mu}p = {} (trace {})", r.p, arrows(&rec.visited))
            })
            .collect();
        if method == MethodArg::Both {
            lines.push(if verified {
                format!("both results are prime divisors of {n}")
            } else {
                format!("verification failed: not every result is a prime divisor of {n}")
            });
        }
        lines
    };
    if method == MethodArg::Both {
        out.emit(&BothReport { n, results: &results, verified }, human);
    } else {
        out.emit(&results[0], human);
    }
    if verified {
        Ok(())
    } else {
        Err(Failure::new(EXIT_CHECKS, "unsound", format!("a result is not a prime divisor of {n}")).reported())
    }
}

fn rule_failure(e: RuleError) -> Failure {
    match e {
        RuleError::Parse { ref rule, ref diagnostic } => parse_failure("rule", rule, diagnostic),
        other => Failure::usage(other.to_string()),
    }
}

pub fn descent(
    cli: &Cli,
    out: &Output,
    config: Option<&Path>,
    structure: Option<&str>,
    start: Option<&str>,
    found: &[String],
    descend: &[String],
) -> Result<(), Failure> {
    let mut cfg = match (config, structure) {
        (Some(path), _) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| Failure::usage(format!("cannot read {}: {e}", path.display())))?;
            serde_json::from_str::<DescentConfig>(&text)
                .map_err(|e| Failure::usage(format!("{}: {e}", path.display())))?
        }
        (None, spec) => DescentConfig {
            structure: match spec {
                Some(s) => serde_json::from_str::<StructureSpec>(s).map_err(|e| Failure::usage(format!("--structure: {e}")))?,
                None => StructureSpec::Nat,
            },
            start: None,
            found: Vec::new(),
            descend: Vec::new(),
        },
    };
    // Command-line values replace those from the file.
    if let Some(s) = start {
        cfg.start = Some(s.to_string());
    }
    if !found.is_empty() {
        cfg.found = found.to_vec();
    }
    if !descend.is_empty() {
        cfg.descend = descend.to_vec();
    }

    let s = cfg.structure.build().map_err(rule_failure)?;
    let rules = StepRules::parse(&cfg.found, &cfg.descend).map_err(rule_failure)?;
    if rules.found.is_empty() && rules.descend.is_empty() {
        return Err(Failure::usage("no step rules: give --found and --descend"));
    }
    let start_src = cfg
        .start
        .ok_or_else(|| Failure::usage("no start element: give --start or \"start\" in the config"))?;
    let start = Value::parse(&start_src).map_err(|d| parse_failure("--start", &start_src, &d))?;
    if !s.conforms(&start) {
        return Err(Failure::new(
            EXIT_DOMAIN,
            "domain",
            format!("{start} is not an element of {}", s.carrier_name()),
        ));
    }

    let trace = run_rules(&s, start, &rules);
    let record = trace.record_in(&s);
    write_traces(cli.trace_out.as_deref(), std::slice::from_ref(&record))?;
    out.emit(&record, || {
        let mut lines = vec![format!("carrier: {}", record.carrier), format!("trace: {}", arrows(&record.visited))];
        if let TraceOutcome::Found(v) = &trace.outcome {
            lines.push(format!("found {v} after {} descents", trace.descents()));
        }
        lines
    });
    match &trace.outcome {
        TraceOutcome::Found(_) => Ok(()),
        TraceOutcome::Error(e) => Err(search_failure(e).reported()),
    }
}

pub fn check(cli: &Cli, out: &Output, suite: SuiteArg, mutant: Option<MutantArg>) -> Result<(), Failure> {
    let suite = match suite {
        SuiteArg::Axioms => Suite::Axioms,
        SuiteArg::Properties => Suite::Properties,
        SuiteArg::All => Suite::All,
    };
    let mutant = mutant.map(|m| match m {
        MutantArg::ApartIsEqual => Mutant::ApartIsEqual,
        MutantArg::ReflexiveLess => Mutant::ReflexiveLess,
        MutantArg::CollapsingSucc => Mutant::CollapsingSucc,
    });
    let summary = run_checks(
        suite,
        &CheckOptions {
            bound: cli.bound,
            seed: cli.seed,
            mutant,
        },
    );
    let failed = summary.checks.iter().filter(|c| c.status == LawStatus::Fail).count();
    out.emit(&summary, || {
        let mut lines = Vec::new();
        if suite != Suite::Properties && cli.bound > AXIOM_BOUND_CAP {
            lines.push(format!("axiom laws checked on [0, {AXIOM_BOUND_CAP}]"));
        }
        for c in &summary.checks {
            let status = match c.status {
                LawStatus::Pass => "PASS",
                LawStatus::Fail => "FAIL",
                LawStatus::PremiseUnmet => "SKIP",
            };
            let counterexample = c
                .counterexample
                .as_ref()
                .map(|ce| format!("  counterexample: {}", ce.join(", ")))
                .unwrap_or_default();
            lines.push(format!("{status} {}/{}{counterexample}", c.suite, c.name));
        }
        lines.push(format!("{} checks, {failed} failed", summary.checks.len()));
        lines
    });
    if summary.passed {
        Ok(())
    } else {
        Err(Failure::new(EXIT_CHECKS, "checks-failed", format!("{failed} checks failed")).reported())
    }
}
