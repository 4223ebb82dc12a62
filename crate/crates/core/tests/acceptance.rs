//! Acceptance gate: every criterion at exact equality, one result line each.
#![allow(clippy::needless_range_loop)]

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::Instant;

use num_bigint::BigInt;
use proptest::prelude::*;
use proptest::test_runner::{Config, TestRunner};

use qkzlab::extract::{schur_sum_residual, Parity, SeriesProduct};
use qkzlab::linkpat::{
    basis_coefficient, catalan_openings, enumerate_link_patterns, partition_l, sequences_an, tau_to_q, tl_apply,
    OpeningSequence,
};
use qkzlab::qkz::{self, Bounds, Mode};
use qkzlab::tsscpp::{self, Method, WeightSpec};
use qkzlab::{ExactPoly, Monomial, Var};

type Outcome = Result<(), String>;
type Criterion = (&'static str, fn() -> Outcome);

const ASM: [i64; 7] = [1, 1, 2, 7, 42, 429, 7436];

fn p(s: &str) -> ExactPoly {
    s.parse().expect("literal polynomial")
}

fn tau() -> ExactPoly {
    ExactPoly::var(Var::TAU)
}

fn t() -> ExactPoly {
    ExactPoly::var(Var::T)
}

fn int(c: i64) -> ExactPoly {
    ExactPoly::from(c)
}

fn at(poly: &ExactPoly, subs: &[(Var, i64)]) -> ExactPoly {
    subs.iter().fold(poly.clone(), |acc, &(v, c)| acc.substitute(v, &int(c)).expect("integer substitution"))
}

fn same(what: impl std::fmt::Display, got: &ExactPoly, expected: &ExactPoly) -> Outcome {
    if got == expected {
        Ok(())
    } else {
        Err(format!("{what}: got {got}, expected {expected}"))
    }
}

fn vanishes(what: impl std::fmt::Display, residual: &ExactPoly) -> Outcome {
    same(what, residual, &ExactPoly::zero())
}

fn ensure(cond: bool, what: impl std::fmt::Display) -> Outcome {
    if cond {
        Ok(())
    } else {
        Err(what.to_string())
    }
}

fn non_decreasing(n: usize) -> Vec<OpeningSequence> {
    fn rec(n: usize, cur: &mut Vec<usize>, out: &mut Vec<OpeningSequence>) {
        let l = cur.len() + 1;
        if l > n {
            out.push(OpeningSequence(cur.clone()));
            return;
        }
        for a in cur.last().copied().unwrap_or(1).max(l)..2 * n {
            cur.push(a);
            rec(n, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(n, &mut Vec::new(), &mut out);
    out
}

fn unmodified_size_three() -> Outcome {
    let expected = p("1 + 3*tau + 2*tau^2 + tau^3");
    for m in Method::ALL {
        same(format!("N(6|tau) by {m}"), &tsscpp::gen_poly(3, &WeightSpec::uniform(3, tau()), m, false), &expected)?;
    }
    for n in 1..=6 {
        for (modified, w) in [
            (false, WeightSpec::uniform(n, tau())),
            (true, WeightSpec::specialized(n, t(), tau())),
            (false, WeightSpec::symbolic(n)),
            (true, WeightSpec::symbolic(n)),
        ] {
            if n > 4 && w == WeightSpec::symbolic(n) {
                continue;
            }
            let direct = tsscpp::gen_poly(n, &w, Method::Direct, modified);
            for m in [Method::Lgv, Method::Extract] {
                same(format!("n = {n}, modified = {modified}, {m} vs direct"), &tsscpp::gen_poly(n, &w, m, modified), &direct)?;
            }
        }
    }
    Ok(())
}

fn modified_examples() -> Outcome {
    let t0 = ExactPoly::var(Var::t(0));
    let t1 = ExactPoly::var(Var::t(1));
    let t2 = ExactPoly::var(Var::t(2));
    let expected = &(&(&ExactPoly::one() + &(&t0 * &t1)) * &(&t0 + &t1))
        + &(&(&(&t0 * &t0) + &(&(&t0 * &t1) + &(&t1 * &t1))) * &t2);
    for m in Method::ALL {
        same(format!("N'(t0,t1,t2) by {m}"), &tsscpp::gen_poly(3, &WeightSpec::symbolic(3), m, true), &expected)?;
    }
    same("N'(6|t,tau)", &tsscpp::nprime_specialized(3, &t(), &tau()), &p("t + tau + 2*t^2*tau + 2*t*tau^2 + tau^3"))
}

fn asm_counts() -> Outcome {
    for n in 1..=6 {
        let ones = tsscpp::gen_poly(n, &WeightSpec::uniform(n, ExactPoly::one()), Method::Lgv, false);
        same(format!("gen_poly({n}, 1)"), &ones, &int(ASM[n]))?;
        let formula = tsscpp::asm_count_formula(n);
        let brute = tsscpp::asm_count_brute_force(n).map_err(|e| e.to_string())?;
        ensure(formula == BigInt::from(ASM[n]) && formula == BigInt::from(brute), format!("A_{n}: formula {formula}, enumeration {brute}"))?;
    }
    Ok(())
}

fn modified_specializations() -> Outcome {
    for n in 1..=5 {
        let general = tsscpp::nprime_specialized(n, &t(), &tau());
        same(format!("N'({n}|1,1)"), &at(&general, &[(Var::T, 1), (Var::TAU, 1)]), &int(ASM[n]))?;
        same(format!("N'({n}|0,1)"), &at(&general, &[(Var::T, 0), (Var::TAU, 1)]), &int(ASM[n - 1]))?;
        let in_t = at(&general, &[(Var::TAU, 1)]);
        let (_, lead) = in_t.coefficients_in(Var::T).pop().ok_or("empty polynomial")?;
        same(format!("leading t coefficient at n = {n}"), &lead, &int(ASM[n - 1]))?;
    }
    Ok(())
}

fn refined_enumeration() -> Outcome {
    for n in 1..=5 {
        let counts = tsscpp::asm_refined(n).map_err(|e| e.to_string())?;
        let refined: ExactPoly =
            counts.iter().enumerate().map(|(k, &c)| &int(c as i64) * &ExactPoly::var_pow(Var::T, k as i32)).sum();
        same(format!("modified N'({n}|t,1)"), &tsscpp::nprime_specialized(n, &t(), &ExactPoly::one()), &refined)?;
        let mut slices = vec![ExactPoly::one(); n.max(2)];
        slices[1] = t();
        same(format!("top-slice N({n}|t,1,..,1)"), &tsscpp::gen_poly(n, &WeightSpec::new(slices), Method::Lgv, false), &refined)?;
        if n == 3 {
            same("refined n = 3", &refined, &p("2 + 3*t + 2*t^2"))?;
        }
    }
    Ok(())
}

fn homogeneous_components() -> Outcome {
    let mut total = ExactPoly::zero();
    for (a, e) in [("(1,3,5)", "tau^3 + tau"), ("(1,3,4)", "tau^2 + 1"), ("(1,2,5)", "tau^2"), ("(1,2,4)", "2*tau")] {
        let a: OpeningSequence = a.parse().map_err(|e| format!("{e}"))?;
        let c = qkz::psi_seq_homogeneous(&a, 3);
        same(format!("Psi_{a}"), &c, &p(e))?;
        total += &c;
    }
    same("component sum n = 3", &total, &p("tau^3 + 2*tau^2 + 3*tau + 1"))?;
    for n in 1..=6 {
        let v = qkz::solve_components(n, Mode::Homogeneous, &Bounds::default()).map_err(|e| e.to_string())?;
        same(format!("sum at tau = 1, n = {n}"), &at(&v.sum(), &[(Var::TAU, 1)]), &int(ASM[n]))?;
        same(format!("solved sum vs extraction, n = {n}"), &v.sum(), &qkz::sum_rules(n).0)?;
    }
    Ok(())
}

fn partial_sums() -> Outcome {
    let bounds = Bounds::default();
    for (mode, max) in [(Mode::Symbolic, 3), (Mode::Homogeneous, 5)] {
        for n in 1..=max {
            for a in sequences_an(n) {
                let r = qkz::partial_sum_residual(&a, n, mode, &bounds).map_err(|e| e.to_string())?;
                vanishes(format!("partial sum {a}, {mode}"), &r)?;
            }
        }
    }
    Ok(())
}

fn symbolic_suite() -> Outcome {
    let bounds = Bounds::default();
    for n in 1..=3 {
        let degree = (n * (n - 1)) as i32;
        let zs = qkz::z_vars(2 * n);
        let v = qkz::solve_components(n, Mode::Symbolic, &bounds).map_err(|e| e.to_string())?;
        let smaller = qkz::solve_components(n - 1, Mode::Symbolic, &bounds).map_err(|e| e.to_string())?;
        let patterns = enumerate_link_patterns(n);
        let mut polys: Vec<(String, ExactPoly)> = v.entries.clone();
        for a in non_decreasing(n) {
            ensure(qkz::residue_sum_is_pole_free(&a, n), format!("residue sum for {a} has a pole"))?;
            polys.push((a.to_string(), qkz::psi_seq_symbolic(&a, n)));
            for i in 1..2 * n {
                vanishes(format!("recurrence {a}, i = {i}"), &qkz::recurrence_residual(&a, i, n))?;
            }
        }
        for (key, psi) in &polys {
            ensure(psi.is_zero() || psi.homogeneous_degree_in(&zs) == Some(degree), format!("{key}: degree"))?;
            for tr in qkz::wheel_triples(n) {
                vanishes(format!("wheel {key} {tr:?}"), &qkz::wheel_residual(psi, n, tr))?;
            }
        }
        for pi in &patterns {
            for i in 1..2 * n {
                vanishes(format!("pattern recurrence {pi}, i = {i}"), &qkz::pattern_recurrence_residual(&v, &smaller, pi, i))?;
            }
            for other in &patterns {
                let value = qkz::evaluate_at_pattern(v.get(&other.to_string()).ok_or("missing component")?, pi, n)
                    .map_err(|e| e.to_string())?;
                let expected = if pi == other { qkz::evaluation_constant(pi) } else { ExactPoly::zero() };
                same(format!("Psi_{other} at {pi}"), &value, &expected)?;
            }
        }
        let mut family: Vec<OpeningSequence> = catalan_openings(n).into_iter().map(OpeningSequence).collect();
        family.extend(sequences_an(n));
        for a in &family {
            let psi = qkz::psi_seq_symbolic(a, n);
            for pi in &patterns {
                let value = qkz::evaluate_at_pattern(&psi, pi, n).map_err(|e| e.to_string())?;
                let expected = &qkz::evaluation_constant(pi) * &tau_to_q(&basis_coefficient(a, pi, n));
                same(format!("Psi_{a} at {pi}"), &value, &expected)?;
            }
        }
        for r in qkz::qkz_residuals(n, &bounds).map_err(|e| e.to_string())? {
            vanishes(&r.label, &r.residual)?;
        }
    }
    Ok(())
}

fn refined_sum() -> Outcome {
    same("refined sum n = 3", &qkz::sum_rules(3).1, &p("tau^3 + 2*t*tau^2 + 2*t^2*tau + tau + t"))?;
    for n in 1..=4 {
        vanishes(format!("conjecture residual n = {n}"), &qkz::conjecture_residual(n))?;
    }
    Ok(())
}

fn identities() -> Outcome {
    let bounds = Bounds::default();
    for n in 1..=5 {
        vanishes(format!("damnint n = {n}"), &qkz::identity_damnint_residual(n, &bounds).map_err(|e| e.to_string())?)?;
    }
    for n in 1..=4 {
        let lhs = qkz::identity_integident_lhs(n, &bounds).map_err(|e| e.to_string())?;
        ensure(!lhs.variables().contains(&Var::X), format!("integident n = {n} depends on x"))?;
        vanishes(format!("integident n = {n}"), &qkz::identity_integident_residual(n, &bounds).map_err(|e| e.to_string())?)?;
    }
    for n in 1..=3 {
        for parity in [Parity::All, Parity::Even] {
            vanishes(format!("schur sum n = {n}, {parity:?}"), &schur_sum_residual(n, 8, parity))?;
        }
    }
    Ok(())
}

fn spin_suite() -> Outcome {
    let bounds = Bounds::default();
    let minus_qinv = -ExactPoly::var_pow(Var::Q, -1);
    for n in 1..=4 {
        for s in qkz::spin_configurations(n) {
            same(
                format!("spin routes {s}"),
                &qkz::spin_component(&s, n, Mode::Homogeneous),
                &qkz::spin_component_direct(&s, n, Mode::Homogeneous),
            )?;
        }
        let top = OpeningSequence((0..n).map(|l| 2 * l + 1).collect());
        let spin = tau_to_q(&qkz::spin_component(&top, n, Mode::Homogeneous));
        let special = tau_to_q(&qkz::sum_rules(n).1.substitute(Var::T, &minus_qinv).map_err(|e| e.to_string())?);
        same(format!("alternating spin component n = {n}"), &spin, &special)?;
        for r in qkz::spin_expansion_residuals(n, &bounds).map_err(|e| e.to_string())? {
            vanishes(&r.label, &r.residual)?;
        }
    }
    let weight = |open: bool, close: bool| -> ExactPoly {
        qkz::local_spin_rule(open, close).into_iter().find(|(m, _)| *m == 0).map(|(_, c)| c).unwrap_or_else(ExactPoly::zero)
    };
    same("down/down arch", &weight(false, false), &ExactPoly::zero())?;
    same("up/down arch", &weight(true, false), &ExactPoly::one())?;
    same("down/up arch", &weight(false, true), &minus_qinv)?;
    for (open, close) in [(false, false), (true, false), (false, true), (true, true)] {
        for (m, c) in qkz::local_spin_rule(open, close) {
            if m > 0 || (open && close) {
                vanishes(format!("leftover {m} for ({open}, {close})"), &c)?;
            }
        }
    }
    Ok(())
}

fn small_poly() -> impl Strategy<Value = ExactPoly> {
    let vars = [Var::T, Var::TAU, Var::Q, Var::z(1)];
    proptest::collection::vec((-4i64..=4, proptest::collection::vec((0usize..4, -2i32..=3), 0..3)), 0..5).prop_map(
        move |terms| {
            terms
                .into_iter()
                .map(|(c, pairs)| ExactPoly::term(c, Monomial::from_pairs(pairs.into_iter().map(|(i, e)| (vars[i], e)))))
                .sum()
        },
    )
}

#[allow(clippy::eq_op)]
fn properties() -> Outcome {
    let mut runner = TestRunner::new(Config { cases: 256, failure_persistence: None, ..Config::default() });
    runner
        .run(&(small_poly(), small_poly(), small_poly()), |(a, b, c)| {
            prop_assert_eq!(&a + &b, &b + &a);
            prop_assert_eq!(&a * &b, &b * &a);
            prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
            prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
            prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
            prop_assert!((&a - &a).is_zero());
            prop_assert_eq!(&a * &ExactPoly::one(), a.clone());
            Ok(())
        })
        .map_err(|e| format!("ring axioms: {e}"))?;

    let coeff = proptest::collection::vec((-3i64..=3, 0i32..=2), 0..3)
        .prop_map(|ts| ts.into_iter().map(|(c, e)| ExactPoly::term(c, Monomial::var(Var::TAU, e))).sum::<ExactPoly>());
    runner
        .run(&(coeff.clone(), coeff.clone(), coeff, 0i32..=4, 0i32..=4), |(a, b, alpha, e1, e2)| {
            let u1 = ExactPoly::var(Var::u(1));
            let u2 = ExactPoly::var(Var::u(2));
            let factors = [
                (true, &ExactPoly::one() + &(&a * &u1)),
                (true, &(&u2 - &u1) * &(&ExactPoly::one() + &(&b * &(&u1 * &u2)))),
                (false, &ExactPoly::one() - &(&alpha * &u2)),
                (false, &ExactPoly::one() - &(&a * &(&u1 * &u2))),
            ];
            let build = |order: [usize; 4]| {
                let mut sp = SeriesProduct::new(vec![Var::u(1), Var::u(2)]);
                for k in order {
                    let (num, body) = &factors[k];
                    sp = if *num { sp.num(body.clone()) } else { sp.den(body.clone()) };
                }
                sp.coefficient_of(&[e1, e2]).expect("extraction")
            };
            let reference = build([0, 1, 2, 3]);
            prop_assert_eq!(build([3, 2, 1, 0]), reference.clone());
            prop_assert_eq!(build([2, 0, 3, 1]), reference);
            Ok(())
        })
        .map_err(|e| format!("extraction order: {e}"))?;

    for n in 1..=6 {
        let size = 2 * n;
        for pi in enumerate_link_patterns(n) {
            for i in 1..=size {
                let (once, loops) = tl_apply(i, &pi);
                let (twice, loops2) = tl_apply(i, &once);
                ensure(twice == once && loops2 == 1, format!("e_{i}^2 on {pi}"))?;
                ensure((loops == 1) == (pi.partner(i) == i % size + 1), format!("loop count e_{i} on {pi}"))?;
                if n >= 2 {
                    for j in [i % size + 1, (i + size - 2) % size + 1] {
                        let (b, _) = tl_apply(j, &once);
                        let (c, _) = tl_apply(i, &b);
                        ensure(c == once, format!("e_{i} e_{j} e_{i} on {pi}"))?;
                    }
                }
            }
        }
        for a in sequences_an(n) {
            let block = partition_l(&a, n).map_err(|e| e.to_string())?;
            for pi in enumerate_link_patterns(n) {
                let expected = if block.contains(&pi) { ExactPoly::one() } else { ExactPoly::zero() };
                same(format!("coefficient of {pi} in {a}"), &basis_coefficient(&a, &pi, n), &expected)?;
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let criteria: [Criterion; 12] = [
        ("N(6|tau) by every method; methods agree for n <= 6", unmodified_size_three),
        ("modified size-three polynomials", modified_examples),
        ("ASM counts by paths, formula and enumeration, n <= 6", asm_counts),
        ("modified specializations at tau = 1, n <= 5", modified_specializations),
        ("refined ASM enumerations, n <= 5", refined_enumeration),
        ("homogeneous components n = 3; sums equal A_n for n <= 6", homogeneous_components),
        ("partial sums: symbolic n <= 3, homogeneous n <= 5", partial_sums),
        ("symbolic qKZ suite, n <= 3", symbolic_suite),
        ("refined sum n = 3; TSSCPP conjecture n <= 4", refined_sum),
        ("identity suite", identities),
        ("spin suite, n <= 4", spin_suite),
        ("property suites", properties),
    ];
    let mut failed = 0;
    for (k, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|e| {
            Err(e.downcast_ref::<String>().cloned().or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string())).unwrap_or_default())
        });
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(()) => println!("criterion {:>2}: PASS  {name} ({secs:.2}s)", k + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {:>2}: FAIL  {name} ({secs:.2}s): {why}", k + 1);
            }
        }
    }
    println!("acceptance: {} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
