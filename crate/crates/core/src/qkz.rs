//! Components of the level-1 qKZ polynomial solution for the Temperley-Lieb loop model.
//!
//! Sequence components `Psi_a` come from the finite residue sum (symbolic in
//! `z_1..z_2n, q`) or from a single coefficient extraction (homogeneous limit,
//! polynomials in `tau`). Link-pattern components are obtained by inverting the
//! change of basis against the Catalan family of opening sequences.

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::sync::{Mutex, OnceLock};

use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::extract::SeriesProduct;
use crate::linkpat::{
    basis_coefficient, catalan_openings, chebyshev_u_q, enumerate_link_patterns, partition_l, pattern_stats,
    sequences_an, tau_to_q, tl_apply, LinkPattern, OpeningSequence,
};
use crate::poly::{ExactPoly, Monomial, Var};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Symbolic,
    Homogeneous,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Symbolic => "symbolic",
            Mode::Homogeneous => "homogeneous",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Basis {
    Sequence,
    LinkPattern,
    Spin,
}

impl fmt::Display for Basis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Basis::Sequence => "sequence",
            Basis::LinkPattern => "link_pattern",
            Basis::Spin => "spin",
        })
    }
}

/// Size limits for the expensive computations. Each has a CLI flag of the same name.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Bounds {
    pub max_symbolic_n: usize,
    pub max_homogeneous_n: usize,
    pub max_damnint_n: usize,
    pub max_integident_n: usize,
}

impl Default for Bounds {
    fn default() -> Bounds {
        Bounds { max_symbolic_n: 3, max_homogeneous_n: 8, max_damnint_n: 5, max_integident_n: 4 }
    }
}

impl Bounds {
    pub fn check_mode(&self, n: usize, mode: Mode) -> Result<(), Error> {
        match mode {
            Mode::Symbolic if n > self.max_symbolic_n => Err(Error::ResourceBound {
                what: "symbolic components",
                n,
                max: self.max_symbolic_n,
                flag: "--max-symbolic-n",
            }),
            Mode::Homogeneous if n > self.max_homogeneous_n => Err(Error::ResourceBound {
                what: "homogeneous components",
                n,
                max: self.max_homogeneous_n,
                flag: "--max-homogeneous-n",
            }),
            _ => Ok(()),
        }
    }
}

/// A vector of components in one basis, keyed by the text form of the basis element.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QkzVector {
    pub n: usize,
    pub basis: Basis,
    pub entries: Vec<(String, ExactPoly)>,
}

impl QkzVector {
    pub fn get(&self, key: &str) -> Option<&ExactPoly> {
        self.entries.iter().find(|(k, _)| k == key).map(|(_, v)| v)
    }

    pub fn sum(&self) -> ExactPoly {
        self.entries.iter().map(|(_, v)| v.clone()).sum()
    }

    pub fn to_json(&self) -> serde_json::Value {
        let entries: serde_json::Map<String, serde_json::Value> =
            self.entries.iter().map(|(k, v)| (k.clone(), serde_json::Value::String(v.to_string()))).collect();
        serde_json::json!({ "n": self.n, "basis": self.basis, "entries": entries })
    }
}

pub fn z(i: usize) -> ExactPoly {
    ExactPoly::var(Var::z(i))
}

fn q() -> ExactPoly {
    ExactPoly::var(Var::Q)
}

fn qinv() -> ExactPoly {
    ExactPoly::var_pow(Var::Q, -1)
}

/// `q z_i - q^{-1} z_j`.
pub fn qlin(i: usize, j: usize) -> ExactPoly {
    ExactPoly::binomial(
        1,
        Monomial::from_pairs([(Var::Q, 1), (Var::z(i), 1)]),
        -1,
        Monomial::from_pairs([(Var::Q, -1), (Var::z(j), 1)]),
    )
}

/// `q - q^{-1}`.
pub fn q_minus_qinv() -> ExactPoly {
    &q() - &qinv()
}

pub fn z_vars(count: usize) -> Vec<Var> {
    (1..=count).map(Var::z).collect()
}

/// `prod_{1<=i<j<=n} (q z_i - q^{-1} z_j) prod_{n<i<j<=2n} (q z_i - q^{-1} z_j)`.
pub fn base_component(n: usize) -> ExactPoly {
    let mut acc = ExactPoly::one();
    for block in [0, n] {
        for i in 1..=n {
            for j in i + 1..=n {
                acc = &acc * &qlin(block + i, block + j);
            }
        }
    }
    acc
}

/// Index sets `K` with distinct `k_l` in `1..=a_l`.
fn index_sets(a: &[usize]) -> Vec<Vec<usize>> {
    fn rec(a: &[usize], cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        let l = cur.len();
        if l == a.len() {
            out.push(cur.clone());
            return;
        }
        for k in 1..=a[l] {
            if !cur.contains(&k) {
                cur.push(k);
                rec(a, cur, out);
                cur.pop();
            }
        }
    }
    let mut out = Vec::new();
    rec(a, &mut Vec::new(), &mut out);
    out
}

struct ResidueTerm {
    pairs: BTreeSet<(usize, usize)>,
    extra: ExactPoly,
    den: BTreeSet<(usize, usize)>,
    negative: bool,
}

/// One summand of the residue sum with the Vandermonde factors already cancelled.
///
/// With `spin`, each `l` with `k_l < a_l` gains `(q - q^{-1}) z_{k_l} / (q z_{k_l} - q^{-1} z_{a_l})`.
fn residue_term(a: &[usize], k: &[usize], size: usize, spin: bool) -> ResidueTerm {
    let n = a.len();
    let mut pairs = BTreeSet::new();
    for i in 1..=size {
        for j in i + 1..=size {
            pairs.insert((i, j));
        }
    }
    for l in 0..n {
        for j in a[l] + 1..=size {
            pairs.remove(&(k[l], j));
        }
    }
    let mut extra = ExactPoly::one();
    for l in 0..n {
        for m in l + 1..n {
            extra = &extra * &qlin(k[l], k[m]);
        }
    }
    if spin {
        for l in 0..n {
            if k[l] < a[l] {
                pairs.remove(&(k[l], a[l]));
                extra = &(&extra * &q_minus_qinv()) * &z(k[l]);
            }
        }
    }
    let mut den = BTreeSet::new();
    let mut negative = false;
    for m in 0..n {
        for i in 1..=a[m] {
            if i == k[m] || k[..m].contains(&i) {
                continue;
            }
            // (z_{k_m} - z_i) stored as (z_min - z_max)
            if k[m] > i {
                negative = !negative;
            }
            den.insert((k[m].min(i), k[m].max(i)));
        }
    }
    ResidueTerm { pairs, extra, den, negative }
}

fn difference(i: usize, j: usize) -> ExactPoly {
    &z(i) - &z(j)
}

/// Sums the residue terms over a common denominator and divides it out exactly.
///
/// Returns `None` if some denominator factor does not divide the numerator.
fn residue_sum(a: &[usize], n: usize, spin: bool) -> Option<ExactPoly> {
    let size = 2 * n;
    let terms: Vec<ResidueTerm> = index_sets(a).iter().map(|k| residue_term(a, k, size, spin)).collect();
    if terms.is_empty() {
        return Some(ExactPoly::zero());
    }
    let mut common = terms[0].pairs.clone();
    for t in &terms[1..] {
        common = common.intersection(&t.pairs).copied().collect();
    }
    let lcm: BTreeSet<(usize, usize)> = terms.iter().flat_map(|t| t.den.iter().copied()).collect();
    let mut numerator = ExactPoly::zero();
    for t in &terms {
        let mut p = t.extra.clone();
        for &(i, j) in t.pairs.difference(&common) {
            p = &p * &qlin(i, j);
        }
        for &(i, j) in lcm.difference(&t.den) {
            p = &p * &difference(i, j);
        }
        if t.negative {
            numerator -= &p;
        } else {
            numerator += &p;
        }
    }
    for &(i, j) in &lcm {
        numerator = numerator.div_exact_difference(Var::z(i), Var::z(j))?;
    }
    for &(i, j) in &common {
        numerator = &numerator * &qlin(i, j);
    }
    Some(numerator)
}

type PsiKey = (Vec<usize>, usize, bool);

fn psi_cache() -> &'static Mutex<HashMap<PsiKey, ExactPoly>> {
    static CACHE: OnceLock<Mutex<HashMap<PsiKey, ExactPoly>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

fn cached_residue_sum(a: &[usize], n: usize, spin: bool) -> ExactPoly {
    let key = (a.to_vec(), n, spin);
    if let Some(p) = psi_cache().lock().expect("cache lock").get(&key) {
        return p.clone();
    }
    let p = residue_sum(a, n, spin).unwrap_or_else(|| panic!("residue sum for {a:?} has a pole"));
    psi_cache().lock().expect("cache lock").insert(key, p.clone());
    p
}

fn check_sequence(a: &OpeningSequence, n: usize, max_entry: usize) {
    assert_eq!(a.len(), n, "sequence {a} must have {n} entries");
    assert!(a.is_non_decreasing(), "sequence {a} must be non-decreasing");
    assert!(a.0.iter().all(|&x| x <= max_entry), "sequence {a} has an entry above {max_entry}");
}

fn below_staircase(a: &OpeningSequence) -> bool {
    a.0.iter().enumerate().any(|(l, &x)| x < l + 1)
}

/// `Psi_a(z_1..z_2n; q)` from the pole-free residue sum. Zero when some `a_l < l`.
///
/// Entries up to `2n` are accepted (the last one is needed by spin components).
pub fn psi_seq_symbolic(a: &OpeningSequence, n: usize) -> ExactPoly {
    check_sequence(a, n, 2 * n);
    if below_staircase(a) {
        return ExactPoly::zero();
    }
    cached_residue_sum(&a.0, n, false)
}

/// Whether the residue sum for `a` is divisible by every `z_i - z_j` in its common denominator.
pub fn residue_sum_is_pole_free(a: &OpeningSequence, n: usize) -> bool {
    check_sequence(a, n, 2 * n);
    below_staircase(a) || residue_sum(&a.0, n, false).is_some()
}

/// `Psi_a / Psi_{pi_0}` at `z_i = 1`: coefficient of `prod u_l^{a_l - 1}` in
/// `prod_{l<m} (u_m - u_l)(1 + u_l u_m + tau u_m)`.
pub fn psi_seq_homogeneous(a: &OpeningSequence, n: usize) -> ExactPoly {
    check_sequence(a, n, 2 * n);
    homogeneous_extract(a, n, None)
}

fn homogeneous_extract(a: &OpeningSequence, n: usize, extra: Option<&dyn Fn(Var) -> ExactPoly>) -> ExactPoly {
    if a.0.contains(&0) {
        return ExactPoly::zero();
    }
    let us: Vec<Var> = (1..=n).map(Var::u).collect();
    let mut sp = SeriesProduct::new(us.clone());
    for l in 0..n {
        for m in l + 1..n {
            sp = sp.num(vandermonde_kernel(us[l], us[m]));
        }
        if let Some(f) = extra {
            sp = sp.num(f(us[l]));
        }
    }
    let targets: Vec<i32> = a.0.iter().map(|&x| x as i32 - 1).collect();
    sp.coefficient_of(&targets).expect("polynomial integrand")
}

/// `(u_m - u_l)(1 + u_l u_m + tau u_m)`.
pub fn vandermonde_kernel(ul: Var, um: Var) -> ExactPoly {
    let diff = &ExactPoly::var(um) - &ExactPoly::var(ul);
    let kernel = ExactPoly::one()
        + ExactPoly::term(1, Monomial::from_pairs([(ul, 1), (um, 1)]))
        + ExactPoly::term(1, Monomial::from_pairs([(Var::TAU, 1), (um, 1)]));
    &diff * &kernel
}

/// Rewrites a Laurent polynomial in `q` (other variables are coefficients) as a polynomial in
/// `tau = -q - q^{-1}`. Fails unless it lies in that subring.
pub fn q_to_tau(p: &ExactPoly) -> Result<ExactPoly, Error> {
    let tau_q = -&(&q() + &qinv());
    let mut rest = p.clone();
    let mut out = ExactPoly::zero();
    while let Some((_, top)) = rest.degree_range(Var::Q) {
        if top < 0 {
            return Err(Error::NotInTauSubring(p.to_string()));
        }
        let coeff = rest
            .coefficients_in(Var::Q)
            .into_iter()
            .find(|(e, _)| *e == top)
            .map(|(_, c)| c)
            .expect("top coefficient exists");
        let sign = if top % 2 == 0 { ExactPoly::one() } else { -ExactPoly::one() };
        let c = &coeff * &sign;
        rest -= &(&c * &tau_q.pow(top as u32));
        out += &(&c * &ExactPoly::var_pow(Var::TAU, top));
    }
    Ok(out)
}


/// `Psi_a` with every `z_i = 1`.
pub fn at_homogeneous_point(p: &ExactPoly, n: usize) -> ExactPoly {
    let mut out = p.clone();
    for v in z_vars(2 * n) {
        out = out.substitute(v, &ExactPoly::one()).expect("polynomial in z");
    }
    out
}

/// Link-pattern components, solved from the Catalan family of sequence components.
pub fn solve_components(n: usize, mode: Mode, bounds: &Bounds) -> Result<QkzVector, Error> {
    bounds.check_mode(n, mode)?;
    let patterns = enumerate_link_patterns(n);
    let family = catalan_openings(n);
    let psi_a: Vec<ExactPoly> = family
        .iter()
        .map(|a| {
            let a = OpeningSequence(a.clone());
            match mode {
                Mode::Symbolic => psi_seq_symbolic(&a, n),
                Mode::Homogeneous => psi_seq_homogeneous(&a, n),
            }
        })
        .collect();
    let mut solved: Vec<ExactPoly> = Vec::with_capacity(patterns.len());
    for (r, a) in family.iter().enumerate() {
        let a = OpeningSequence(a.clone());
        let mut value = psi_a[r].clone();
        for (c, pi) in patterns.iter().enumerate() {
            let coef = basis_coefficient(&a, pi, n);
            if c == r {
                if !coef.is_one() {
                    return Err(Error::SingularChangeOfBasis(r));
                }
            } else if c > r {
                if !coef.is_zero() {
                    return Err(Error::SingularChangeOfBasis(r));
                }
            } else if !coef.is_zero() {
                let coef = match mode {
                    Mode::Symbolic => tau_to_q(&coef),
                    Mode::Homogeneous => coef,
                };
                value -= &(&coef * &solved[c]);
            }
        }
        solved.push(value);
    }
    let vector = QkzVector {
        n,
        basis: Basis::LinkPattern,
        entries: patterns.iter().map(|p| p.to_string()).zip(solved).collect(),
    };
    for a in sequences_an(n) {
        let residual = partial_sum_against(&vector, &a, n, mode)?;
        assert!(residual.is_zero(), "partial sum for {a} fails: {residual}");
    }
    Ok(vector)
}

fn partial_sum_against(v: &QkzVector, a: &OpeningSequence, n: usize, mode: Mode) -> Result<ExactPoly, Error> {
    let block = partition_l(a, n)?;
    let lhs = match mode {
        Mode::Symbolic => psi_seq_symbolic(a, n),
        Mode::Homogeneous => psi_seq_homogeneous(a, n),
    };
    let rhs: ExactPoly = block.iter().map(|pi| v.get(&pi.to_string()).expect("component").clone()).sum();
    Ok(&lhs - &rhs)
}

/// Sequence components of the Catalan family (or of the given family) as a vector.
pub fn sequence_components(n: usize, mode: Mode, bounds: &Bounds, family: &[OpeningSequence]) -> Result<QkzVector, Error> {
    bounds.check_mode(n, mode)?;
    let entries = family
        .iter()
        .map(|a| {
            let p = match mode {
                Mode::Symbolic => psi_seq_symbolic(a, n),
                Mode::Homogeneous => psi_seq_homogeneous(a, n),
            };
            (a.to_string(), p)
        })
        .collect();
    Ok(QkzVector { n, basis: Basis::Sequence, entries })
}

/// `p` with `z_i = z`, `z_j = q^2 z`, `z_k = q^4 z` for a fresh variable `z`.
pub fn wheel_residual(p: &ExactPoly, n: usize, triple: (usize, usize, usize)) -> ExactPoly {
    let (i, j, k) = triple;
    assert!(i < j && j < k && k <= 2 * n, "triple {triple:?} must satisfy i < j < k <= 2n");
    let mut out = p.clone();
    for (v, e) in [(i, 0), (j, 2), (k, 4)] {
        let value = ExactPoly::term(1, Monomial::from_pairs([(Var::Z, 1), (Var::Q, e)]));
        out = out.substitute(Var::z(v), &value).expect("monomial substitution");
    }
    out
}

/// All `i < j < k <= 2n`.
pub fn wheel_triples(n: usize) -> Vec<(usize, usize, usize)> {
    let size = 2 * n;
    let mut out = Vec::new();
    for i in 1..=size {
        for j in i + 1..=size {
            for k in j + 1..=size {
                out.push((i, j, k));
            }
        }
    }
    out
}

/// The sequence obtained by removing one copy of `i`, sliding the other `k - 1` copies to `i - 1`
/// and lowering every larger entry by 2.
pub fn reduced_sequence(a: &OpeningSequence, i: usize) -> OpeningSequence {
    let mut rest = Vec::with_capacity(a.len().saturating_sub(1));
    let mut consumed = false;
    for &x in &a.0 {
        if x == i && !consumed {
            consumed = true;
        } else if x == i {
            rest.push(i - 1);
        } else if x > i {
            rest.push(x - 2);
        } else {
            rest.push(x);
        }
    }
    OpeningSequence(rest)
}

/// `Psi_a|_{z_{i+1} = q^2 z_i}` minus the right side of the recurrence: zero if `i` is not an
/// entry of `a`, otherwise (with `k` copies of `i`)
/// `(-1)^{n-1} q^{n-i} prod_{j<i} (z_i - q^2 z_j) prod_{j>i+1} (q^2 z_i - q^{-2} z_j) [k]_q Psi_{a'}`
/// with the variables of `Psi_{a'}` placed on the sites other than `i, i+1`.
///
/// The constant `(-1)^{n-1} q^{n-i}` comes from the residue at `w = z_i`: each other integration
/// variable leaves `-q^{-1}` and each site `j > i+1` leaves `q`.
pub fn recurrence_residual(a: &OpeningSequence, i: usize, n: usize) -> ExactPoly {
    let size = 2 * n;
    assert!((1..size).contains(&i), "site {i} out of range");
    let psi = psi_seq_symbolic(a, n);
    let value = ExactPoly::term(1, Monomial::from_pairs([(Var::Q, 2), (Var::z(i), 1)]));
    let lhs = psi.substitute(Var::z(i + 1), &value).expect("monomial substitution");
    let k = a.0.iter().filter(|&&x| x == i).count();
    if k == 0 {
        return lhs;
    }
    let rhs = &recurrence_prefactor(n, i) * &chebyshev_u_q(k as i64 - 1);
    let reduced = psi_seq_symbolic(&reduced_sequence(a, i), n - 1);
    let rhs = &rhs * &shift_past(&reduced, i, size);
    &lhs - &rhs
}

/// `C_pi = (q - q^{-1})^{n(n-1)} tau^{d/2}` with `tau = -q - q^{-1}` and `d` the pattern depth
/// `n^2 + sum_i i epsilon_i` (always even; `d/2` is the number of boxes above the nested pattern).
pub fn evaluation_constant(pi: &LinkPattern) -> ExactPoly {
    let n = pi.n() as u32;
    let depth = pattern_stats(pi).depth as u32 / 2;
    let tau_q = -&(&q() + &qinv());
    &q_minus_qinv().pow(n * n.saturating_sub(1)) * &tau_q.pow(depth)
}

/// `p` at `z_i = q^{-epsilon_i(pi)}`. Requires `p` homogeneous of `z`-degree `n(n-1)`.
pub fn evaluate_at_pattern(p: &ExactPoly, pi: &LinkPattern, n: usize) -> Result<ExactPoly, Error> {
    let expected = (n * n.saturating_sub(1)) as i32;
    let zs = z_vars(2 * n);
    if !p.is_zero() && p.homogeneous_degree_in(&zs) != Some(expected) {
        return Err(Error::DegreeMismatch { expected });
    }
    let eps = pattern_stats(pi).epsilon;
    let mut out = p.clone();
    for (k, &e) in eps.iter().enumerate() {
        out = out.substitute(Var::z(k + 1), &ExactPoly::var_pow(Var::Q, -(e as i32))).expect("monomial substitution");
    }
    Ok(out)
}

/// Recurrence of link-pattern components at `z_{i+1} = q^2 z_i`: zero unless `(i, i+1)` is an arch,
/// otherwise the same prefactor as [`recurrence_residual`] times the component of the pattern with
/// that arch removed. `v` and `smaller` are the symbolic vectors of sizes `n` and `n - 1`.
pub fn pattern_recurrence_residual(v: &QkzVector, smaller: &QkzVector, pi: &LinkPattern, i: usize) -> ExactPoly {
    let n = v.n;
    let size = 2 * n;
    assert!((1..size).contains(&i), "site {i} out of range");
    let psi = v.get(&pi.to_string()).expect("component present");
    let value = ExactPoly::term(1, Monomial::from_pairs([(Var::Q, 2), (Var::z(i), 1)]));
    let lhs = psi.substitute(Var::z(i + 1), &value).expect("monomial substitution");
    if pi.partner(i) != i + 1 {
        return lhs;
    }
    let reduced = smaller.get(&pi.remove_little_arch(i).to_string()).expect("component present");
    &lhs - &(&recurrence_prefactor(n, i) * &shift_past(reduced, i, size))
}

fn recurrence_prefactor(n: usize, i: usize) -> ExactPoly {
    let size = 2 * n;
    let sign = if n % 2 == 1 { 1 } else { -1 };
    let mut out = ExactPoly::term(sign, Monomial::var(Var::Q, n as i32 - i as i32));
    for j in 1..i {
        out = &out
            * &ExactPoly::binomial(1, Monomial::var(Var::z(i), 1), -1, Monomial::from_pairs([(Var::Q, 2), (Var::z(j), 1)]));
    }
    for j in i + 2..=size {
        out = &out
            * &ExactPoly::binomial(
                1,
                Monomial::from_pairs([(Var::Q, 2), (Var::z(i), 1)]),
                -1,
                Monomial::from_pairs([(Var::Q, -2), (Var::z(j), 1)]),
            );
    }
    out
}

/// Moves the variables `z_i, z_{i+1}, ...` of a smaller component two sites up.
fn shift_past(p: &ExactPoly, i: usize, size: usize) -> ExactPoly {
    let map: Vec<(Var, Var)> = (i..=size - 2).map(|j| (Var::z(j), Var::z(j + 2))).collect();
    p.rename(&map)
}

/// One labelled residual of the exchange or cyclic relations.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LabelledResidual {
    pub label: String,
    pub residual: ExactPoly,
}

/// Exchange relations `R_{i,i+1}(z_{i+1}, z_i) Psi = tau_i Psi` for `i = 1..2n-1`, one per pattern,
/// multiplied through by `q z_i - q^{-1} z_{i+1}`:
/// `(q z_{i+1} - q^{-1} z_i) Psi_pi + (z_{i+1} - z_i) (e_i Psi)_pi - (q z_i - q^{-1} z_{i+1}) tau_i Psi_pi`,
/// where `tau_i` swaps `z_i, z_{i+1}` and a closed loop weighs `-q - q^{-1}`.
pub fn exchange_residuals(v: &QkzVector) -> Vec<LabelledResidual> {
    let n = v.n;
    let size = 2 * n;
    let patterns = enumerate_link_patterns(n);
    let component = |pi: &LinkPattern| v.get(&pi.to_string()).expect("component present").clone();
    let loop_weight = -&(&q() + &qinv());
    let mut out = Vec::new();
    for i in 1..size {
        let swap = [(Var::z(i), Var::z(i + 1)), (Var::z(i + 1), Var::z(i))];
        let diag = &(&q() * &z(i + 1)) - &(&qinv() * &z(i));
        let cleared = &(&q() * &z(i)) - &(&qinv() * &z(i + 1));
        let diff = &z(i + 1) - &z(i);
        for pi in &patterns {
            let psi = component(pi);
            let mut e_psi = ExactPoly::zero();
            for other in &patterns {
                let (image, loops) = tl_apply(i, other);
                if image == *pi {
                    let c = component(other);
                    e_psi += &(if loops == 1 { &loop_weight * &c } else { c });
                }
            }
            let residual = &(&(&diag * &psi) + &(&diff * &e_psi)) - &(&cleared * &psi.rename(&swap));
            out.push(LabelledResidual { label: format!("exchange i={i} pi={pi}"), residual });
        }
    }
    out
}

/// Cyclic covariance `Psi_{sigma pi}(z_2, ..., z_2n, q^6 z_1) - q^{3(n-1)} Psi_pi` where
/// `sigma` shifts every site by `shift`. The solution is covariant for [`CYCLIC_SHIFT`].
pub fn cyclic_residuals(v: &QkzVector, shift: i64) -> Vec<LabelledResidual> {
    let n = v.n;
    let size = 2 * n;
    let mut map: Vec<(Var, Var)> = (1..size).map(|j| (Var::z(j), Var::z(j + 1))).collect();
    map.push((Var::z(size), Var::Z));
    let last = ExactPoly::term(1, Monomial::from_pairs([(Var::Q, 6), (Var::z(1), 1)]));
    let factor = ExactPoly::var_pow(Var::Q, 3 * (n as i32 - 1));
    enumerate_link_patterns(n)
        .iter()
        .map(|pi| {
            let rotated = v.get(&pi.rotate(shift).to_string()).expect("component present");
            let lhs = rotated.rename(&map).substitute(Var::Z, &last).expect("monomial substitution");
            let rhs = &factor * v.get(&pi.to_string()).expect("component present");
            LabelledResidual { label: format!("cyclic pi={pi}"), residual: &lhs - &rhs }
        })
        .collect()
}

/// Site shift of the rotation in the cyclic relation: `sigma(pi)(i) = pi(i + 1) - 1`.
pub const CYCLIC_SHIFT: i64 = -1;

/// Exchange and cyclic residuals of the solved symbolic vector; all vanish for the true solution.
pub fn qkz_residuals(n: usize, bounds: &Bounds) -> Result<Vec<LabelledResidual>, Error> {
    let v = solve_components(n, Mode::Symbolic, bounds)?;
    let mut out = exchange_residuals(&v);
    out.extend(cyclic_residuals(&v, CYCLIC_SHIFT));
    Ok(out)
}

/// `Psi_a - sum_{pi in L(a)} Psi_pi`.
pub fn partial_sum_residual(a: &OpeningSequence, n: usize, mode: Mode, bounds: &Bounds) -> Result<ExactPoly, Error> {
    if a.len() != n || !a.in_family_a() {
        return Err(Error::SequenceNotInFamily(a.to_string()));
    }
    let v = solve_components(n, mode, bounds)?;
    partial_sum_against(&v, a, n, mode)
}

/// Sum of all homogeneous link-pattern components, and its refinement
/// `sum_{a in A_n} t^{sum_l (2l - 1 - a_l)} Psi_a`, both by a single extraction.
pub fn sum_rules(n: usize) -> (ExactPoly, ExactPoly) {
    let one = ExactPoly::one();
    let sum = weighted_top_extraction(n, &one);
    let refined = weighted_top_extraction(n, &ExactPoly::var(Var::T));
    (sum, refined)
}

/// Coefficient of `prod u_l^{2l-2}` in `prod_l (1 + weight u_l) prod_{l<m} (u_m - u_l)(1 + u_l u_m + tau u_m)`.
fn weighted_top_extraction(n: usize, weight: &ExactPoly) -> ExactPoly {
    let us: Vec<Var> = (1..=n).map(Var::u).collect();
    let mut sp = SeriesProduct::new(us.clone());
    for l in 0..n {
        sp = sp.num(&ExactPoly::one() + &(weight * &ExactPoly::var(us[l])));
        for m in l + 1..n {
            sp = sp.num(vandermonde_kernel(us[l], us[m]));
        }
    }
    let targets: Vec<i32> = (0..n as i32).map(|l| 2 * l).collect();
    sp.coefficient_of(&targets).expect("polynomial integrand")
}

/// The refined sum assembled from the individual components `Psi_a`, `a` in the family `A_n`.
pub fn refined_sum_from_components(n: usize) -> ExactPoly {
    let mut out = ExactPoly::zero();
    for a in sequences_an(n) {
        let e: usize = a.0.iter().enumerate().map(|(k, &x)| 2 * k + 1 - x).sum();
        out += &(&ExactPoly::var_pow(Var::T, e as i32) * &psi_seq_homogeneous(&a, n));
    }
    out
}

/// Modified TSSCPP polynomial `N'(t, tau)` minus the refined component sum.
pub fn conjecture_residual(n: usize) -> ExactPoly {
    let t = ExactPoly::var(Var::T);
    let tau = ExactPoly::var(Var::TAU);
    let lhs = crate::tsscpp::nprime_specialized(n, &t, &tau);
    &lhs - &sum_rules(n).1
}

fn check_spin(a: &OpeningSequence, n: usize) {
    assert_eq!(a.len(), n, "spin configuration {a} must have {n} up spins");
    assert!(a.0.windows(2).all(|w| w[0] < w[1]), "spin positions {a} must be strictly increasing");
    assert!(a.0.iter().all(|&x| (1..=2 * n).contains(&x)), "spin positions {a} out of range");
}

/// Spin component `sum_eps (-q)^{-|eps|} Psi_{a - eps}` (symbolic: in `z, q`; homogeneous: in `tau, q`).
pub fn spin_component(a: &OpeningSequence, n: usize, mode: Mode) -> ExactPoly {
    check_spin(a, n);
    let mut out = ExactPoly::zero();
    for mask in 0u32..(1 << n) {
        let shifted = OpeningSequence(a.0.iter().enumerate().map(|(l, &x)| x - (mask >> l & 1) as usize).collect());
        let psi = match mode {
            Mode::Symbolic => psi_seq_symbolic(&shifted, n),
            Mode::Homogeneous => psi_seq_homogeneous(&shifted, n),
        };
        if psi.is_zero() {
            continue;
        }
        let count = mask.count_ones();
        let weight = (-&qinv()).pow(count);
        out += &(&weight * &psi);
    }
    out
}

/// Spin component computed directly: the residue sum of the spin integral (symbolic) or the
/// extraction with the extra factor `prod_l (1 - q^{-1} u_l)` (homogeneous).
pub fn spin_component_direct(a: &OpeningSequence, n: usize, mode: Mode) -> ExactPoly {
    check_spin(a, n);
    match mode {
        Mode::Symbolic => {
            if below_staircase(a) {
                return ExactPoly::zero();
            }
            cached_residue_sum(&a.0, n, true)
        }
        Mode::Homogeneous => {
            let f = |u: Var| {
                ExactPoly::one() - ExactPoly::term(1, Monomial::from_pairs([(Var::Q, -1), (u, 1)]))
            };
            homogeneous_extract(a, n, Some(&f))
        }
    }
}

/// All spin configurations: strictly increasing positions of the `n` up spins among `2n` sites.
pub fn spin_configurations(n: usize) -> Vec<OpeningSequence> {
    fn rec(n: usize, start: usize, cur: &mut Vec<usize>, out: &mut Vec<OpeningSequence>) {
        if cur.len() == n {
            out.push(OpeningSequence(cur.clone()));
            return;
        }
        for x in start..=2 * n {
            cur.push(x);
            rec(n, x + 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(n, 1, &mut Vec::new(), &mut out);
    out
}

/// Weight of a link pattern in a spin configuration: per arch, 1 for an up spin at its opening and
/// a down spin at its closing, `-q^{-1}` for the reverse, 0 otherwise.
pub fn spin_pattern_weight(up: &OpeningSequence, pi: &LinkPattern) -> ExactPoly {
    let mut acc = ExactPoly::one();
    for (i, j) in pi.arches() {
        match (up.0.contains(&i), up.0.contains(&j)) {
            (true, false) => {}
            (false, true) => acc = -&(&acc * &qinv()),
            _ => return ExactPoly::zero(),
        }
    }
    acc
}

/// Contribution of a little arch `(i, i+1)` to the spin expansion, split by the number of
/// sequence markers it leaves outside the arch. The arch weight is the entry for 0 leftovers.
///
/// Each up spin at site `p` contributes a marker at `p` (weight 1) or `p - 1` (weight `-q^{-1}`);
/// `k` markers inside the arch give `[k]_q` and leave `k - 1` markers to its left.
pub fn local_spin_rule(up_at_opening: bool, up_at_closing: bool) -> Vec<(usize, ExactPoly)> {
    // marker positions relative to the arch: -1 left, 0 inside, 1 right
    let mut choices: Vec<Vec<(i32, ExactPoly)>> = Vec::new();
    if up_at_opening {
        choices.push(vec![(0, ExactPoly::one()), (-1, -qinv())]);
    }
    if up_at_closing {
        choices.push(vec![(1, ExactPoly::one()), (0, -qinv())]);
    }
    let mut by_leftover: Vec<(usize, ExactPoly)> = Vec::new();
    let combos: u32 = 1 << choices.len();
    for mask in 0..combos {
        let mut weight = ExactPoly::one();
        let mut inside = 0usize;
        let mut outside = 0usize;
        for (c, opts) in choices.iter().enumerate() {
            let (pos, w) = &opts[(mask >> c & 1) as usize];
            weight = &weight * w;
            if *pos == 0 {
                inside += 1;
            } else {
                outside += 1;
            }
        }
        if inside == 0 {
            continue;
        }
        let leftover = outside + inside - 1;
        let contribution = &weight * &chebyshev_u_q(inside as i64 - 1);
        match by_leftover.iter_mut().find(|(m, _)| *m == leftover) {
            Some((_, acc)) => *acc += &contribution,
            None => by_leftover.push((leftover, contribution)),
        }
    }
    by_leftover.sort_by_key(|(m, _)| *m);
    by_leftover
}

/// `Psi~_s - sum_pi w(s, pi) Psi_pi` for every spin configuration `s`, homogeneous, in `q`.
pub fn spin_expansion_residuals(n: usize, bounds: &Bounds) -> Result<Vec<LabelledResidual>, Error> {
    let v = solve_components(n, Mode::Homogeneous, bounds)?;
    let patterns = enumerate_link_patterns(n);
    Ok(spin_configurations(n)
        .into_iter()
        .map(|s| {
            let lhs = tau_to_q(&spin_component(&s, n, Mode::Homogeneous));
            let mut rhs = ExactPoly::zero();
            for pi in &patterns {
                let w = spin_pattern_weight(&s, pi);
                if !w.is_zero() {
                    rhs += &(&w * &tau_to_q(v.get(&pi.to_string()).expect("component")));
                }
            }
            LabelledResidual { label: format!("spin s={s}"), residual: &lhs - &rhs }
        })
        .collect())
}

fn us(n: usize) -> Vec<Var> {
    (1..=n).map(Var::u).collect()
}

fn uu(l: Var, m: Var) -> ExactPoly {
    ExactPoly::term(1, Monomial::from_pairs([(l, 1), (m, 1)]))
}

/// Antisymmetrization identity residual:
/// `{prod_{l<=m} (1 - u_l u_m) AS(prod u_l^{2-2l} prod_{l<m} (1 + u_l u_m + tau u_m))}_{<=0}`
/// minus `prod_{l<m} (u_m^{-1} - u_l^{-1})(tau + u_l^{-1} + u_m^{-1})`.
pub fn identity_damnint_residual(n: usize, bounds: &Bounds) -> Result<ExactPoly, Error> {
    if n > bounds.max_damnint_n {
        return Err(Error::ResourceBound {
            what: "antisymmetrization identity",
            n,
            max: bounds.max_damnint_n,
            flag: "--max-damnint-n",
        });
    }
    let vars = us(n);
    let tau = ExactPoly::var(Var::TAU);
    let mut f = ExactPoly::term(1, Monomial::from_pairs(vars.iter().enumerate().map(|(l, &u)| (u, -2 * l as i32))));
    for l in 0..n {
        for m in l + 1..n {
            let k = ExactPoly::one() + uu(vars[l], vars[m]) + &tau * &ExactPoly::var(vars[m]);
            f = &f * &k;
        }
    }
    // multiplying by (1 - u_l u_m) never lowers an exponent, so truncating as we go is exact
    let caps: Vec<(Var, i32)> = vars.iter().map(|&u| (u, 0)).collect();
    let mut lhs = f.antisymmetrize(&vars).keep_nonpositive(&vars);
    for l in 0..n {
        for m in l..n {
            lhs = lhs.mul_truncated(&(ExactPoly::one() - uu(vars[l], vars[m])), &caps);
        }
    }
    let inv = |v: Var| ExactPoly::var_pow(v, -1);
    let mut rhs = ExactPoly::one();
    for l in 0..n {
        for m in l + 1..n {
            rhs = &rhs * &(&inv(vars[m]) - &inv(vars[l]));
            rhs = &rhs * &(&(&tau + &inv(vars[l])) + &inv(vars[m]));
        }
    }
    Ok(&lhs - &rhs)
}

/// Left side of the integral identity: the signed sum over the Cauchy determinant's permutations of
/// the coefficient of `prod u_l^{2l-1}` in
/// `prod_l (1 - x u_l^2) prod_m 1/(1 - alpha_{sigma(m)} u_m) prod_{l<m} (1 + tau u_m + x u_l u_m)(1 - x u_l u_m)`.
pub fn identity_integident_lhs(n: usize, bounds: &Bounds) -> Result<ExactPoly, Error> {
    if n > bounds.max_integident_n {
        return Err(Error::ResourceBound {
            what: "integral identity",
            n,
            max: bounds.max_integident_n,
            flag: "--max-integident-n",
        });
    }
    let vars = us(n);
    let alphas: Vec<Var> = (1..=n).map(Var::alpha).collect();
    let x = ExactPoly::var(Var::X);
    let tau = ExactPoly::var(Var::TAU);
    let targets: Vec<i32> = (0..n as i32).map(|l| 2 * l + 1).collect();
    let mut lhs = ExactPoly::zero();
    for (sign, dens) in crate::extract::cauchy_determinant_terms(&alphas, &vars) {
        let mut sp = SeriesProduct::new(vars.clone());
        for l in 0..n {
            sp = sp.num(&ExactPoly::one() - &(&x * &ExactPoly::var_pow(vars[l], 2)));
            for m in l + 1..n {
                let xuu = &x * &uu(vars[l], vars[m]);
                sp = sp
                    .num(&(&ExactPoly::one() + &(&tau * &ExactPoly::var(vars[m]))) + &xuu)
                    .num(&ExactPoly::one() - &xuu);
            }
        }
        for d in dens {
            sp = sp.den(d);
        }
        let c = sp.coefficient_of(&targets)?;
        if sign > 0 {
            lhs += &c;
        } else {
            lhs -= &c;
        }
    }
    Ok(lhs)
}

/// Integral identity residual: left side minus `prod alpha_l prod_{l<m} (alpha_m - alpha_l)(tau + alpha_l + alpha_m)`.
pub fn identity_integident_residual(n: usize, bounds: &Bounds) -> Result<ExactPoly, Error> {
    let lhs = identity_integident_lhs(n, bounds)?;
    let alphas: Vec<ExactPoly> = (1..=n).map(|l| ExactPoly::var(Var::alpha(l))).collect();
    let tau = ExactPoly::var(Var::TAU);
    let mut rhs: ExactPoly = alphas.iter().cloned().product();
    for l in 0..n {
        for m in l + 1..n {
            rhs = &rhs * &(&alphas[m] - &alphas[l]);
            rhs = &rhs * &(&(&tau + &alphas[l]) + &alphas[m]);
        }
    }
    Ok(&lhs - &rhs)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> ExactPoly {
        s.parse().unwrap()
    }

    fn seq(s: &str) -> OpeningSequence {
        s.parse().unwrap()
    }

    fn lp(s: &str) -> LinkPattern {
        s.parse().unwrap()
    }

    #[test]
    fn base_components() {
        assert!(base_component(1).is_one());
        assert_eq!(base_component(2), &qlin(1, 2) * &qlin(3, 4));
        let mut v = base_component(2);
        for (i, e) in [(1, -1), (2, -1), (3, 1), (4, 1)] {
            v = v.substitute(Var::z(i), &ExactPoly::var_pow(Var::Q, e)).unwrap();
        }
        assert_eq!(v, q_minus_qinv().pow(2));
    }

    #[test]
    fn symbolic_sequence_components() {
        for n in 1..=3 {
            let a = OpeningSequence((1..=n).collect());
            assert_eq!(psi_seq_symbolic(&a, n), base_component(n));
        }
        assert!(psi_seq_symbolic(&seq("(0,2)"), 2).is_zero());
        assert!(!psi_seq_symbolic(&seq("(2,2)"), 2).is_empty());
        assert!(psi_seq_symbolic(&seq("(1)"), 1).is_one());
        assert!(residue_sum_is_pole_free(&seq("(2,3)"), 2));
    }

    #[test]
    fn homogeneous_sequence_components() {
        assert_eq!(psi_seq_homogeneous(&seq("(1,3,5)"), 3), p("tau + tau^3"));
        assert_eq!(psi_seq_homogeneous(&seq("(1,3,4)"), 3), p("1 + tau^2"));
        assert_eq!(psi_seq_homogeneous(&seq("(1,2,5)"), 3), p("tau^2"));
        assert_eq!(psi_seq_homogeneous(&seq("(1,2,4)"), 3), p("2*tau"));
        for n in 1..=5 {
            assert!(psi_seq_homogeneous(&OpeningSequence((1..=n).collect()), n).is_one());
        }
    }

    #[test]
    fn bridge_between_q_and_tau() {
        let t = p("1 + 3*tau + 2*tau^2 + tau^3");
        assert_eq!(q_to_tau(&tau_to_q(&t)).unwrap(), t);
        assert!(matches!(q_to_tau(&p("q")), Err(Error::NotInTauSubring(_))));
        assert!(matches!(q_to_tau(&p("q^2 + q^-1")), Err(Error::NotInTauSubring(_))));
    }

    #[test]
    fn link_pattern_components() {
        let b = Bounds::default();
        let v = solve_components(2, Mode::Homogeneous, &b).unwrap();
        assert_eq!(v.get("(1,2)(3,4)").unwrap(), &p("tau"));
        assert!(v.get("(1,4)(2,3)").unwrap().is_one());
        let v = solve_components(3, Mode::Homogeneous, &b).unwrap();
        assert_eq!(v.entries.len(), 5);
        assert_eq!(v.sum(), p("1 + 3*tau + 2*tau^2 + tau^3"));
        let v = solve_components(1, Mode::Symbolic, &b).unwrap();
        assert_eq!(v.entries.len(), 1);
        assert!(v.entries[0].1.is_one());
        assert!(matches!(solve_components(4, Mode::Symbolic, &b), Err(Error::ResourceBound { .. })));
        assert!(matches!(solve_components(9, Mode::Homogeneous, &b), Err(Error::ResourceBound { .. })));
    }

    #[test]
    fn wheel_examples() {
        assert!(wheel_residual(&base_component(2), 2, (1, 2, 3)).is_zero());
        let psi = psi_seq_symbolic(&seq("(1,3)"), 2);
        for t in wheel_triples(2) {
            assert!(wheel_residual(&psi, 2, t).is_zero(), "{t:?}");
        }
        assert!(wheel_residual(&ExactPoly::one(), 2, (1, 2, 3)).is_one());
    }

    #[test]
    fn recurrence_examples() {
        assert!(recurrence_residual(&seq("(1,3)"), 2, 2).is_zero());
        assert!(recurrence_residual(&seq("(1,3)"), 1, 2).is_zero());
        assert!(recurrence_residual(&seq("(2,2)"), 2, 2).is_zero());
        assert_eq!(reduced_sequence(&seq("(2,2)"), 2), seq("(1)"));
        assert_eq!(reduced_sequence(&seq("(1,3,4)"), 3), seq("(1,2)"));
    }

    #[test]
    fn evaluation_examples() {
        let pi0 = LinkPattern::nested(2);
        assert_eq!(evaluate_at_pattern(&base_component(2), &pi0, 2).unwrap(), q_minus_qinv().pow(2));
        let b = Bounds::default();
        let v = solve_components(2, Mode::Symbolic, &b).unwrap();
        let other = lp("(1,2)(3,4)");
        assert!(evaluate_at_pattern(v.get(&pi0.to_string()).unwrap(), &other, 2).unwrap().is_zero());
        assert_eq!(evaluate_at_pattern(v.get("(1,2)(3,4)").unwrap(), &other, 2).unwrap(), evaluation_constant(&other));
        let a = seq("(1,3)");
        let psi = psi_seq_symbolic(&a, 2);
        for pi in enumerate_link_patterns(2) {
            let expected = &evaluation_constant(&pi) * &tau_to_q(&basis_coefficient(&a, &pi, 2));
            assert_eq!(evaluate_at_pattern(&psi, &pi, 2).unwrap(), expected);
        }
        assert!(matches!(evaluate_at_pattern(&p("z1"), &pi0, 2), Err(Error::DegreeMismatch { expected: 2 })));
    }

    #[test]
    fn small_qkz_residuals_vanish() {
        let b = Bounds::default();
        for n in 1..=2 {
            for r in qkz_residuals(n, &b).unwrap() {
                assert!(r.residual.is_zero(), "{}: {}", r.label, r.residual);
            }
        }
    }

    #[test]
    fn partial_sums() {
        let b = Bounds::default();
        assert!(partial_sum_residual(&seq("(1,3,4)"), 3, Mode::Homogeneous, &b).unwrap().is_zero());
        for a in sequences_an(2) {
            assert!(partial_sum_residual(&a, 2, Mode::Homogeneous, &b).unwrap().is_zero());
        }
        assert!(partial_sum_residual(&seq("(1)"), 1, Mode::Symbolic, &b).unwrap().is_zero());
        assert!(matches!(
            partial_sum_residual(&seq("(1,3,3)"), 3, Mode::Homogeneous, &b),
            Err(Error::SequenceNotInFamily(_))
        ));
    }

    #[test]
    fn sums_and_conjecture() {
        let (sum, refined) = sum_rules(3);
        assert_eq!(refined, p("t + tau + 2*t^2*tau + 2*t*tau^2 + tau^3"));
        assert_eq!(sum.substitute(Var::TAU, &ExactPoly::one()).unwrap(), ExactPoly::constant(7));
        let at = |t: i64, tau: i64| {
            refined.substitute(Var::T, &ExactPoly::constant(t)).unwrap().substitute(Var::TAU, &ExactPoly::constant(tau)).unwrap()
        };
        assert_eq!(at(0, 1), ExactPoly::constant(2));
        assert_eq!(refined_sum_from_components(3), refined);
        assert!(conjecture_residual(1).is_zero());
        assert!(conjecture_residual(3).is_zero());
    }

    #[test]
    fn spin_examples() {
        assert!(spin_component(&seq("(1)"), 1, Mode::Homogeneous).is_one());
        assert!(spin_component(&seq("(1)"), 1, Mode::Symbolic).is_one());
        for n in 1..=3 {
            let a = OpeningSequence((0..n).map(|l| 2 * l + 1).collect());
            let refined = sum_rules(n).1.substitute(Var::T, &(-&qinv())).unwrap();
            assert_eq!(spin_component(&a, n, Mode::Homogeneous), refined);
            assert_eq!(spin_component_direct(&a, n, Mode::Homogeneous), refined);
        }
        assert_eq!(spin_pattern_weight(&seq("(1,3)"), &lp("(1,2)(3,4)")), ExactPoly::one());
        assert_eq!(spin_pattern_weight(&seq("(2,3)"), &lp("(1,2)(3,4)")), -&qinv());
        assert!(spin_pattern_weight(&seq("(1,2)"), &lp("(1,2)(3,4)")).is_zero());
    }

    #[test]
    fn local_spin_rules() {
        assert!(local_spin_rule(false, false).is_empty());
        assert_eq!(local_spin_rule(true, false), vec![(0, ExactPoly::one())]);
        assert_eq!(local_spin_rule(false, true), vec![(0, -&qinv())]);
        let both = local_spin_rule(true, true);
        assert!(both.iter().all(|(_, c)| c.is_zero()), "{both:?}");
    }

    #[test]
    fn identities_small() {
        let b = Bounds::default();
        for n in 1..=3 {
            assert!(identity_damnint_residual(n, &b).unwrap().is_zero(), "damnint {n}");
            assert!(identity_integident_residual(n, &b).unwrap().is_zero(), "integident {n}");
        }
        assert_eq!(identity_integident_lhs(1, &b).unwrap(), p("alpha1"));
        assert!(!identity_integident_lhs(2, &b).unwrap().variables().contains(&Var::X));
        assert!(matches!(identity_damnint_residual(6, &b), Err(Error::ResourceBound { .. })));
    }
}
