//! Verification suites and machine-readable reports.
//!
//! Every check has a stable id, its parameters, and a status. Checks run on a rayon pool and the
//! report keeps them in generation order, so identical settings give identical reports apart from
//! the timing fields.

use std::fmt;
use std::time::Instant;

use num_bigint::BigInt;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use crate::error::Error;
use crate::extract::{schur_sum_residual, Parity};
use crate::linkpat::{
    basis_coefficient, catalan_openings, enumerate_link_patterns, sequences_an, tau_to_q, OpeningSequence,
};
use crate::poly::{ExactPoly, Var};
use crate::qkz::{self, Bounds, Mode};
use crate::tsscpp::{self, Method, WeightSpec, ASM_BRUTE_FORCE_MAX};

pub const REPORT_SCHEMA: &str = "qkzlab-report/1";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Status {
    #[serde(rename = "pass")]
    Pass,
    #[serde(rename = "fail")]
    Fail,
    #[serde(rename = "skipped-bound")]
    SkippedBound,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Tsscpp,
    Qkz,
    Identities,
    Conjectures,
    All,
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Suite::Tsscpp => "tsscpp",
            Suite::Qkz => "qkz",
            Suite::Identities => "identities",
            Suite::Conjectures => "conjectures",
            Suite::All => "all",
        })
    }
}

/// Limits for the verification run. `max_n` caps every family; the per-family bounds then decide
/// which sizes are run and which are reported as skipped.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct VerifyConfig {
    pub max_n: usize,
    pub bounds: Bounds,
    /// Largest size for NILP enumeration and the symbolic-weight method comparison.
    pub max_tsscpp_symbolic_n: usize,
    /// Largest size for the schur-sum identity (truncated at total degree 8).
    pub max_schur_n: usize,
    pub threads: Option<usize>,
}

impl Default for VerifyConfig {
    fn default() -> VerifyConfig {
        VerifyConfig { max_n: 3, bounds: Bounds::default(), max_tsscpp_symbolic_n: 4, max_schur_n: 3, threads: None }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckRecord {
    pub id: String,
    pub params: Value,
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub residual: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
    pub wall_ms: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerificationReport {
    pub schema: &'static str,
    pub suite: Suite,
    pub config: VerifyConfig,
    pub passed: bool,
    pub counts: Counts,
    pub checks: Vec<CheckRecord>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
pub struct Counts {
    pub pass: usize,
    pub fail: usize,
    pub skipped_bound: usize,
}

impl VerificationReport {
    /// Report as JSON; with `timing = false` the `wall_ms` fields are dropped.
    pub fn to_json(&self, timing: bool) -> Value {
        let mut v = serde_json::to_value(self).expect("report serializes");
        if !timing {
            if let Some(checks) = v.get_mut("checks").and_then(Value::as_array_mut) {
                for c in checks {
                    if let Some(obj) = c.as_object_mut() {
                        obj.remove("wall_ms");
                    }
                }
            }
        }
        v
    }

    /// One line per failing check plus a totals line.
    pub fn summary(&self) -> String {
        let mut out = String::new();
        for c in &self.checks {
            if c.status == Status::Fail {
                out.push_str(&format!("FAIL {}\n", c.id));
            }
        }
        out.push_str(&format!(
            "suite {}: {} ({} passed, {} failed, {} skipped by bound)\n",
            self.suite,
            if self.passed { "PASS" } else { "FAIL" },
            self.counts.pass,
            self.counts.fail,
            self.counts.skipped_bound
        ));
        out
    }
}

enum Outcome {
    Pass,
    Fail(String),
    Skipped(String),
}

type CheckFn = Box<dyn Fn() -> Outcome + Send + Sync>;

struct Check {
    id: String,
    params: Value,
    run: CheckFn,
}

fn check(id: impl Into<String>, params: Value, run: impl Fn() -> Outcome + Send + Sync + 'static) -> Check {
    Check { id: id.into(), params, run: Box::new(run) }
}

fn skipped(id: impl Into<String>, params: Value, reason: String) -> Check {
    check(id, params, move || Outcome::Skipped(reason.clone()))
}

fn zero(p: ExactPoly) -> Outcome {
    if p.is_zero() {
        Outcome::Pass
    } else {
        Outcome::Fail(p.to_string())
    }
}

fn equal(lhs: &ExactPoly, rhs: &ExactPoly) -> Outcome {
    zero(lhs - rhs)
}

fn all_zero(residuals: impl IntoIterator<Item = (String, ExactPoly)>) -> Outcome {
    let failures: Vec<String> =
        residuals.into_iter().filter(|(_, r)| !r.is_zero()).map(|(label, r)| format!("{label}: {r}")).collect();
    if failures.is_empty() {
        Outcome::Pass
    } else {
        Outcome::Fail(failures.join("; "))
    }
}

fn from_result(r: Result<Outcome, Error>) -> Outcome {
    match r {
        Ok(o) => o,
        Err(e @ Error::ResourceBound { .. }) | Err(e @ Error::SizeTooLargeForBruteForce { .. }) => {
            Outcome::Skipped(e.to_string())
        }
        Err(e) => Outcome::Fail(format!("error: {e}")),
    }
}

fn bound_note(family: &str, n: usize, max: usize, flag: &str) -> String {
    format!("{family} bounded to n <= {max} (n = {n}; raise it with {flag})")
}

/// Adds a check for each `n` in `1..=max_n`, or a skipped record where `n` exceeds `bound`.
fn per_n(
    out: &mut Vec<Check>,
    name: &str,
    max_n: usize,
    bound: (usize, &str),
    make: impl Fn(usize) -> Box<dyn Fn() -> Outcome + Send + Sync>,
) {
    for n in 1..=max_n {
        let id = format!("{name}/n={n}");
        let params = json!({ "n": n });
        if n > bound.0 {
            out.push(skipped(id, params, bound_note(name, n, bound.0, bound.1)));
        } else {
            let f = make(n);
            out.push(check(id, params, f));
        }
    }
}

fn int(c: BigInt) -> ExactPoly {
    ExactPoly::constant(c)
}

fn at(p: &ExactPoly, subs: &[(Var, i64)]) -> ExactPoly {
    let mut out = p.clone();
    for &(v, c) in subs {
        out = out.substitute(v, &ExactPoly::constant(c)).expect("integer substitution");
    }
    out
}

fn refined_asm(n: usize) -> Result<ExactPoly, Error> {
    tsscpp::refined_asm_polynomial(n)
}

fn tsscpp_checks(cfg: &VerifyConfig, out: &mut Vec<Check>) {
    let max_n = cfg.max_n;
    let sym = (cfg.max_tsscpp_symbolic_n, "--max-tsscpp-symbolic-n");
    let brute = (ASM_BRUTE_FORCE_MAX, "(fixed brute-force limit)");
    if max_n >= 3 {
        out.push(check("tsscpp/example-unmodified/n=3", json!({ "n": 3 }), || {
            let tau = ExactPoly::var(Var::TAU);
            let expected: ExactPoly = "1 + 3*tau + 2*tau^2 + tau^3".parse().expect("literal");
            let mut failures = Vec::new();
            for m in Method::ALL {
                let got = tsscpp::gen_poly(3, &WeightSpec::uniform(3, tau.clone()), m, false);
                if got != expected {
                    failures.push(format!("{m}: {got}"));
                }
            }
            if failures.is_empty() { Outcome::Pass } else { Outcome::Fail(failures.join("; ")) }
        }));
        out.push(check("tsscpp/example-modified/n=3", json!({ "n": 3 }), || {
            let expected: ExactPoly =
                "t0 + t1 + t0^2*t1 + t0*t1^2 + t0^2*t2 + t0*t1*t2 + t1^2*t2".parse().expect("literal");
            let spec_t: ExactPoly = "t + tau + 2*t^2*tau + 2*t*tau^2 + tau^3".parse().expect("literal");
            let mut failures = Vec::new();
            for m in Method::ALL {
                let got = tsscpp::gen_poly(3, &WeightSpec::symbolic(3), m, true);
                if got != expected {
                    failures.push(format!("{m}: {got}"));
                }
            }
            let got = tsscpp::nprime_specialized(3, &ExactPoly::var(Var::T), &ExactPoly::var(Var::TAU));
            if got != spec_t {
                failures.push(format!("specialized: {got}"));
            }
            if failures.is_empty() { Outcome::Pass } else { Outcome::Fail(failures.join("; ")) }
        }));
    }
    per_n(out, "tsscpp/nilp-count", max_n, brute, |n| {
        Box::new(move || {
            let count = tsscpp::enumerate_nilp(n, false).len();
            let modified = tsscpp::enumerate_nilp(n, true).len();
            let a = tsscpp::asm_count_formula(n);
            if BigInt::from(count) == a && BigInt::from(modified) == a {
                Outcome::Pass
            } else {
                Outcome::Fail(format!("{count} and {modified} configurations, A_n = {a}"))
            }
        })
    });
    per_n(out, "tsscpp/methods-symbolic", max_n, sym, |n| {
        Box::new(move || {
            let w = WeightSpec::symbolic(n);
            let mut residuals = Vec::new();
            for modified in [false, true] {
                let direct = tsscpp::gen_poly(n, &w, Method::Direct, modified);
                for m in [Method::Lgv, Method::Extract] {
                    residuals.push((format!("{m} modified={modified}"), &tsscpp::gen_poly(n, &w, m, modified) - &direct));
                }
            }
            all_zero(residuals)
        })
    });
    per_n(out, "tsscpp/methods-specialized", max_n, brute, |n| {
        Box::new(move || {
            let t = ExactPoly::var(Var::T);
            let tau = ExactPoly::var(Var::TAU);
            let mut residuals = Vec::new();
            for (modified, w) in
                [(false, WeightSpec::uniform(n, tau.clone())), (true, WeightSpec::specialized(n, t.clone(), tau.clone()))]
            {
                let direct = tsscpp::gen_poly(n, &w, Method::Direct, modified);
                for m in [Method::Lgv, Method::Extract] {
                    residuals.push((format!("{m} modified={modified}"), &tsscpp::gen_poly(n, &w, m, modified) - &direct));
                }
            }
            all_zero(residuals)
        })
    });
    per_n(out, "tsscpp/asm-count", max_n, brute, |n| {
        Box::new(move || {
            from_result((|| {
                let formula = tsscpp::asm_count_formula(n);
                let brute = BigInt::from(tsscpp::asm_count_brute_force(n)?);
                let total = tsscpp::gen_poly(n, &WeightSpec::uniform(n, ExactPoly::one()), Method::Lgv, false);
                let mut failures = Vec::new();
                if formula != brute {
                    failures.push(format!("formula {formula} vs enumeration {brute}"));
                }
                if total != int(formula.clone()) {
                    failures.push(format!("gen_poly at 1 = {total}"));
                }
                Ok(if failures.is_empty() { Outcome::Pass } else { Outcome::Fail(failures.join("; ")) })
            })())
        })
    });
    per_n(out, "tsscpp/modified-specializations", max_n, (ASM_BRUTE_FORCE_MAX - 1, "(fixed brute-force limit)"), |n| {
        Box::new(move || {
            let t = ExactPoly::var(Var::T);
            let tau = ExactPoly::var(Var::TAU);
            let general = tsscpp::nprime_specialized(n, &t, &tau);
            let a_n = int(tsscpp::asm_count_formula(n));
            let a_prev = int(tsscpp::asm_count_formula(n - 1));
            let at_one = at(&general, &[(Var::T, 1), (Var::TAU, 1)]);
            let at_zero = at(&general, &[(Var::T, 0), (Var::TAU, 1)]);
            let in_t = at(&general, &[(Var::TAU, 1)]);
            let top = in_t.coefficients_in(Var::T).pop().map(|(_, c)| c).unwrap_or_else(ExactPoly::zero);
            let unmodified = tsscpp::gen_poly(n, &WeightSpec::uniform(n, tau.clone()), Method::Extract, false);
            let t_one = general.substitute(Var::T, &ExactPoly::one()).expect("substitution");
            all_zero([
                ("N'(1,1) - A_n".to_string(), &at_one - &a_n),
                ("N'(0,1) - A_(n-1)".to_string(), &at_zero - &a_prev),
                ("leading t coefficient - A_(n-1)".to_string(), &top - &a_prev),
                ("N'(1,tau) - N(tau)".to_string(), &t_one - &unmodified),
            ])
        })
    });
}

fn conjecture_checks(cfg: &VerifyConfig, out: &mut Vec<Check>) {
    let max_n = cfg.max_n;
    let refined = (5, "(fixed: refined ASM enumeration)");
    per_n(out, "conjectures/refined-tsscpp-asm", max_n, refined, |n| {
        Box::new(move || {
            from_result((|| {
                let lhs = tsscpp::nprime_specialized(n, &ExactPoly::var(Var::T), &ExactPoly::one());
                Ok(equal(&lhs, &refined_asm(n)?))
            })())
        })
    });
    per_n(out, "conjectures/top-slice-asm", max_n, refined, |n| {
        Box::new(move || {
            from_result((|| {
                let mut slices = vec![ExactPoly::one(); n.max(2)];
                slices[1] = ExactPoly::var(Var::T);
                let lhs = tsscpp::gen_poly(n, &WeightSpec::new(slices), Method::Lgv, false);
                Ok(equal(&lhs, &refined_asm(n)?))
            })())
        })
    });
    per_n(out, "conjectures/qkz-tsscpp", max_n, (cfg.bounds.max_homogeneous_n, "--max-homogeneous-n"), |n| {
        Box::new(move || zero(qkz::conjecture_residual(n)))
    });
    if max_n >= 3 {
        out.push(check("conjectures/refined-sum-example/n=3", json!({ "n": 3 }), || {
            let expected: ExactPoly = "t + tau + 2*t^2*tau + 2*t*tau^2 + tau^3".parse().expect("literal");
            equal(&qkz::sum_rules(3).1, &expected)
        }));
    }
}

fn nondecreasing_sequences(n: usize) -> Vec<OpeningSequence> {
    fn rec(n: usize, cur: &mut Vec<usize>, out: &mut Vec<OpeningSequence>) {
        let l = cur.len() + 1;
        if l > n {
            out.push(OpeningSequence(cur.clone()));
            return;
        }
        let lo = cur.last().copied().unwrap_or(1).max(l);
        for a in lo..2 * n {
            cur.push(a);
            rec(n, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(n, &mut Vec::new(), &mut out);
    out
}

fn qkz_checks(cfg: &VerifyConfig, out: &mut Vec<Check>) {
    let max_n = cfg.max_n;
    let bounds = cfg.bounds;
    let symb = (bounds.max_symbolic_n, "--max-symbolic-n");
    let partial = (bounds.max_homogeneous_n.min(5), "--max-homogeneous-n");
    let spin_h = (bounds.max_homogeneous_n.min(4), "--max-homogeneous-n");
    let spin_s = (bounds.max_symbolic_n.min(2), "--max-symbolic-n");

    if max_n >= 3 {
        out.push(check("qkz/homogeneous-example/n=3", json!({ "n": 3 }), || {
            let mut residuals = Vec::new();
            for (a, expected) in [("(1,3,5)", "tau + tau^3"), ("(1,3,4)", "1 + tau^2"), ("(1,2,5)", "tau^2"), ("(1,2,4)", "2*tau")] {
                let a: OpeningSequence = a.parse().expect("literal");
                let e: ExactPoly = expected.parse().expect("literal");
                residuals.push((a.to_string(), &qkz::psi_seq_homogeneous(&a, 3) - &e));
            }
            let total: ExactPoly = "1 + 3*tau + 2*tau^2 + tau^3".parse().expect("literal");
            residuals.push(("sum".into(), &qkz::sum_rules(3).0 - &total));
            all_zero(residuals)
        }));
    }
    per_n(out, "qkz/sum-rules", max_n, (bounds.max_homogeneous_n.min(ASM_BRUTE_FORCE_MAX), "--max-homogeneous-n"), move |n| {
        Box::new(move || {
            from_result((|| {
                let v = qkz::solve_components(n, Mode::Homogeneous, &bounds)?;
                let (sum, refined) = qkz::sum_rules(n);
                let largest = OpeningSequence((0..n).map(|l| 2 * l + 1).collect());
                Ok(all_zero([
                    ("sum of components - extraction".to_string(), &v.sum() - &sum),
                    ("sum at tau=1 - A_n".to_string(), &at(&sum, &[(Var::TAU, 1)]) - &int(tsscpp::asm_count_formula(n))),
                    ("refined at t=1 - sum".to_string(), &at(&refined, &[(Var::T, 1)]) - &sum),
                    ("refined at t=0 - largest".to_string(), &at(&refined, &[(Var::T, 0)]) - &qkz::psi_seq_homogeneous(&largest, n)),
                    ("refined at t=0, tau=1 - A_(n-1)".to_string(), &at(&refined, &[(Var::T, 0), (Var::TAU, 1)]) - &int(tsscpp::asm_count_formula(n - 1))),
                    ("refined - component sum".to_string(), &refined - &qkz::refined_sum_from_components(n)),
                ]))
            })())
        })
    });
    per_n(out, "qkz/partial-sums-homogeneous", max_n, partial, move |n| {
        Box::new(move || {
            from_result((|| {
                let mut residuals = Vec::new();
                for a in sequences_an(n) {
                    residuals.push((a.to_string(), qkz::partial_sum_residual(&a, n, Mode::Homogeneous, &bounds)?));
                }
                Ok(all_zero(residuals))
            })())
        })
    });
    per_n(out, "qkz/symbolic-sequences", max_n, symb, |n| {
        Box::new(move || {
            let degree = (n * (n - 1)) as i32;
            let zs = qkz::z_vars(2 * n);
            let mut failures = Vec::new();
            for a in nondecreasing_sequences(n) {
                if !qkz::residue_sum_is_pole_free(&a, n) {
                    failures.push(format!("{a}: residue sum has a pole"));
                    continue;
                }
                let p = qkz::psi_seq_symbolic(&a, n);
                if !p.is_zero() && p.homogeneous_degree_in(&zs) != Some(degree) {
                    failures.push(format!("{a}: not homogeneous of degree {degree}"));
                }
                for t in qkz::wheel_triples(n) {
                    if !qkz::wheel_residual(&p, n, t).is_zero() {
                        failures.push(format!("{a}: wheel {t:?}"));
                    }
                }
                let h = qkz::psi_seq_homogeneous(&a, n);
                let lhs = qkz::at_homogeneous_point(&p, n);
                let rhs = &qkz::q_minus_qinv().pow(degree as u32) * &tau_to_q(&h);
                if lhs != rhs {
                    failures.push(format!("{a}: homogeneous limit {}", &lhs - &rhs));
                }
            }
            if failures.is_empty() { Outcome::Pass } else { Outcome::Fail(failures.join("; ")) }
        })
    });
    per_n(out, "qkz/recurrences", max_n, symb, move |n| {
        Box::new(move || {
            from_result((|| {
                let mut residuals = Vec::new();
                for a in nondecreasing_sequences(n) {
                    for i in 1..2 * n {
                        residuals.push((format!("{a} i={i}"), qkz::recurrence_residual(&a, i, n)));
                    }
                }
                let v = qkz::solve_components(n, Mode::Symbolic, &bounds)?;
                let smaller = qkz::solve_components(n - 1, Mode::Symbolic, &bounds)?;
                for pi in enumerate_link_patterns(n) {
                    for i in 1..2 * n {
                        residuals.push((format!("{pi} i={i}"), qkz::pattern_recurrence_residual(&v, &smaller, &pi, i)));
                    }
                }
                Ok(all_zero(residuals))
            })())
        })
    });
    per_n(out, "qkz/exchange-cyclic", max_n, symb, move |n| {
        Box::new(move || {
            from_result(
                qkz::qkz_residuals(n, &bounds).map(|rs| all_zero(rs.into_iter().map(|r| (r.label, r.residual)))),
            )
        })
    });
    per_n(out, "qkz/link-pattern-components", max_n, symb, move |n| {
        Box::new(move || {
            from_result((|| {
                let v = qkz::solve_components(n, Mode::Symbolic, &bounds)?;
                let patterns = enumerate_link_patterns(n);
                let mut residuals = Vec::new();
                let zs = qkz::z_vars(2 * n);
                let degree = (n * (n - 1)) as i32;
                for (key, psi) in &v.entries {
                    if psi.homogeneous_degree_in(&zs) != Some(degree) {
                        residuals.push((format!("{key} degree"), psi.clone()));
                    }
                    for t in qkz::wheel_triples(n) {
                        residuals.push((format!("{key} wheel {t:?}"), qkz::wheel_residual(psi, n, t)));
                    }
                }
                for pi in &patterns {
                    for other in &patterns {
                        let value = qkz::evaluate_at_pattern(v.get(&other.to_string()).expect("component"), pi, n)?;
                        let expected = if pi == other { qkz::evaluation_constant(pi) } else { ExactPoly::zero() };
                        residuals.push((format!("Psi_{other} at {pi}"), &value - &expected));
                    }
                }
                let mut family: Vec<OpeningSequence> = catalan_openings(n).into_iter().map(OpeningSequence).collect();
                family.extend(sequences_an(n));
                for a in &family {
                    let psi = qkz::psi_seq_symbolic(a, n);
                    for pi in &patterns {
                        let value = qkz::evaluate_at_pattern(&psi, pi, n)?;
                        let expected = &qkz::evaluation_constant(pi) * &tau_to_q(&basis_coefficient(a, pi, n));
                        residuals.push((format!("Psi_{a} at {pi}"), &value - &expected));
                    }
                }
                for a in sequences_an(n) {
                    residuals.push((format!("partial sum {a}"), qkz::partial_sum_residual(&a, n, Mode::Symbolic, &bounds)?));
                }
                Ok(all_zero(residuals))
            })())
        })
    });
    per_n(out, "qkz/spin-homogeneous", max_n, spin_h, move |n| {
        Box::new(move || {
            from_result((|| {
                let mut residuals = Vec::new();
                for s in qkz::spin_configurations(n) {
                    let a = qkz::spin_component(&s, n, Mode::Homogeneous);
                    let b = qkz::spin_component_direct(&s, n, Mode::Homogeneous);
                    residuals.push((format!("routes {s}"), &a - &b));
                }
                let top = OpeningSequence((0..n).map(|l| 2 * l + 1).collect());
                let special = qkz::sum_rules(n).1.substitute(Var::T, &-ExactPoly::var_pow(Var::Q, -1)).expect("monomial");
                let spin = qkz::spin_component(&top, n, Mode::Homogeneous);
                residuals.push(("alternating component - refined sum at t=-1/q".into(), tau_to_q(&(&spin - &special))));
                for r in qkz::spin_expansion_residuals(n, &bounds)? {
                    residuals.push((r.label, r.residual));
                }
                Ok(all_zero(residuals))
            })())
        })
    });
    per_n(out, "qkz/spin-symbolic", max_n, spin_s, |n| {
        Box::new(move || {
            all_zero(qkz::spin_configurations(n).into_iter().map(|s| {
                let r = &qkz::spin_component(&s, n, Mode::Symbolic) - &qkz::spin_component_direct(&s, n, Mode::Symbolic);
                (s.to_string(), r)
            }))
        })
    });
    out.push(check("qkz/spin-local-rules", json!({}), || {
        let mut failures = Vec::new();
        let minus_qinv = -ExactPoly::var_pow(Var::Q, -1);
        for (open, close, weight) in [
            (false, false, ExactPoly::zero()),
            (true, false, ExactPoly::one()),
            (false, true, minus_qinv),
            (true, true, ExactPoly::zero()),
        ] {
            for (m, c) in qkz::local_spin_rule(open, close) {
                let expected = if m == 0 { weight.clone() } else { ExactPoly::zero() };
                if c != expected {
                    failures.push(format!("up at opening {open}, closing {close}, {m} leftover: {c}"));
                }
            }
            let has_zero = qkz::local_spin_rule(open, close).iter().any(|(m, _)| *m == 0);
            if !has_zero && !weight.is_zero() {
                failures.push(format!("up at opening {open}, closing {close}: no arch weight"));
            }
        }
        if failures.is_empty() { Outcome::Pass } else { Outcome::Fail(failures.join("; ")) }
    }));
}

fn identity_checks(cfg: &VerifyConfig, out: &mut Vec<Check>) {
    let max_n = cfg.max_n;
    let bounds = cfg.bounds;
    per_n(out, "identities/damnint", max_n, (bounds.max_damnint_n, "--max-damnint-n"), move |n| {
        Box::new(move || from_result(qkz::identity_damnint_residual(n, &bounds).map(zero)))
    });
    per_n(out, "identities/integident", max_n, (bounds.max_integident_n, "--max-integident-n"), move |n| {
        Box::new(move || {
            from_result((|| {
                let lhs = qkz::identity_integident_lhs(n, &bounds)?;
                let residual = qkz::identity_integident_residual(n, &bounds)?;
                if lhs.variables().contains(&Var::X) {
                    return Ok(Outcome::Fail(format!("left side depends on x: {lhs}")));
                }
                Ok(zero(residual))
            })())
        })
    });
    per_n(out, "identities/schur-sum", max_n, (cfg.max_schur_n, "--max-schur-n"), |n| {
        Box::new(move || {
            all_zero([Parity::All, Parity::Even].into_iter().map(|p| (format!("{p:?}"), schur_sum_residual(n, 8, p))))
        })
    });
}

/// Builds and runs a suite. Checks run in parallel; the report keeps generation order.
pub fn run_suite(suite: Suite, cfg: &VerifyConfig) -> VerificationReport {
    let mut checks = Vec::new();
    let want = |s: Suite| suite == s || suite == Suite::All;
    if want(Suite::Tsscpp) {
        tsscpp_checks(cfg, &mut checks);
    }
    if want(Suite::Qkz) {
        qkz_checks(cfg, &mut checks);
    }
    if want(Suite::Identities) {
        identity_checks(cfg, &mut checks);
    }
    if want(Suite::Conjectures) {
        conjecture_checks(cfg, &mut checks);
    }
    let run = || -> Vec<CheckRecord> {
        checks
            .par_iter()
            .map(|c| {
                let start = Instant::now();
                let outcome = (c.run)();
                let wall_ms = start.elapsed().as_secs_f64() * 1e3;
                let (status, residual, note) = match outcome {
                    Outcome::Pass => (Status::Pass, None, None),
                    Outcome::Fail(r) => (Status::Fail, Some(r), None),
                    Outcome::Skipped(why) => (Status::SkippedBound, None, Some(why)),
                };
                CheckRecord { id: c.id.clone(), params: c.params.clone(), status, residual, note, wall_ms }
            })
            .collect()
    };
    let records = match cfg.threads {
        Some(k) => rayon::ThreadPoolBuilder::new().num_threads(k.max(1)).build().expect("thread pool").install(run),
        None => run(),
    };
    let mut counts = Counts::default();
    for r in &records {
        match r.status {
            Status::Pass => counts.pass += 1,
            Status::Fail => counts.fail += 1,
            Status::SkippedBound => counts.skipped_bound += 1,
        }
    }
    VerificationReport { schema: REPORT_SCHEMA, suite, config: *cfg, passed: counts.fail == 0, counts, checks: records }
}

/// Text key of a spin configuration: `+` at the up positions, `-` elsewhere.
pub fn spin_key(up: &OpeningSequence, n: usize) -> String {
    (1..=2 * n).map(|i| if up.0.contains(&i) { '+' } else { '-' }).collect()
}

/// Components in the requested basis, as a [`qkz::QkzVector`].
pub fn components(n: usize, basis: qkz::Basis, mode: Mode, bounds: &Bounds) -> Result<qkz::QkzVector, Error> {
    bounds.check_mode(n, mode)?;
    match basis {
        qkz::Basis::LinkPattern => qkz::solve_components(n, mode, bounds),
        qkz::Basis::Sequence => qkz::sequence_components(n, mode, bounds, &sequences_an(n)),
        qkz::Basis::Spin => {
            let entries = qkz::spin_configurations(n)
                .par_iter()
                .map(|s| (spin_key(s, n), qkz::spin_component(s, n, mode)))
                .collect();
            Ok(qkz::QkzVector { n, basis, entries })
        }
    }
}

