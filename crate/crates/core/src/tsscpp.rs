//! Totally symmetric self-complementary plane partitions as non-intersecting
//! lattice paths, their weighted generating polynomials, and the alternating
//! sign matrix counts they are compared against.
//!
//! Path `i` (for `i = 1..n-1`) starts at `(i, -i)` and takes `i` unit steps,
//! each vertical `(0,1)` or diagonal `(1,1)`, ending on `y = 0`. A step from
//! height `y` to `y + 1` lies in slice `-y`, so the first step of path `i` is in
//! slice `i` and its last in slice 1. Modified configurations add one more step
//! per path in slice 0 (ending on `y = 1` at `x = r_i + 1`) subject to `r_1`
//! odd and every gap `r_{i+1} - r_i` odd.

use std::collections::HashSet;
use std::fmt;

use num_bigint::BigInt;
use num_traits::One;
use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::extract::SeriesProduct;
use crate::poly::{ExactPoly, Monomial, PolyMatrix, Var};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Step {
    #[serde(rename = "V")]
    Vertical,
    #[serde(rename = "D")]
    Diagonal,
}

/// One NILP configuration. `paths[i - 1]` lists the steps of path `i` from bottom to top.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct NilpConfig {
    pub n: usize,
    pub modified: bool,
    pub paths: Vec<Vec<Step>>,
}

impl NilpConfig {
    /// Endpoint abscissae `r_i` (for modified configurations, the `r_i` with endpoint `(r_i + 1, 1)`).
    pub fn endpoints(&self) -> Vec<i64> {
        self.paths
            .iter()
            .enumerate()
            .map(|(k, steps)| {
                let i = (k + 1) as i64;
                let diag = steps.iter().filter(|&&s| s == Step::Diagonal).count() as i64;
                if self.modified {
                    i + diag - 1
                } else {
                    i + diag
                }
            })
            .collect()
    }

    /// Product of slice weights over vertical steps.
    pub fn weight(&self, w: &WeightSpec) -> ExactPoly {
        let mut acc = ExactPoly::one();
        for (k, steps) in self.paths.iter().enumerate() {
            let i = k + 1;
            for (j, s) in steps.iter().enumerate() {
                if *s == Step::Vertical {
                    acc = &acc * w.slice(slice_of(i, j));
                }
            }
        }
        acc
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(&self.paths).expect("steps serialize")
    }
}

fn slice_of(path: usize, step: usize) -> usize {
    // step `path` (0-based) exists only in modified configurations: slice 0
    path - step
}

/// Weight per vertical step in each slice: `slices[k]` is `t_k`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightSpec {
    slices: Vec<ExactPoly>,
}

impl WeightSpec {
    /// Explicit weights `t_0, t_1, ..., t_{n-1}` (`t_0` is only read for modified configurations).
    pub fn new(slices: Vec<ExactPoly>) -> WeightSpec {
        WeightSpec { slices }
    }

    /// Independent symbols `t0, t1, ..., t_{n-1}`.
    pub fn symbolic(n: usize) -> WeightSpec {
        WeightSpec::new((0..n.max(1)).map(|k| ExactPoly::var(Var::t(k))).collect())
    }

    /// `t_0 = t`, every other slice `tau`.
    pub fn specialized(n: usize, t: ExactPoly, tau: ExactPoly) -> WeightSpec {
        let mut slices = vec![t];
        slices.extend((1..n).map(|_| tau.clone()));
        WeightSpec::new(slices)
    }

    /// Every slice (including 0) weighted `tau`.
    pub fn uniform(n: usize, tau: ExactPoly) -> WeightSpec {
        WeightSpec::specialized(n, tau.clone(), tau)
    }

    pub fn slice(&self, k: usize) -> &ExactPoly {
        &self.slices[k]
    }

    pub fn len(&self) -> usize {
        self.slices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.slices.is_empty()
    }

    fn check(&self, n: usize) {
        assert!(self.slices.len() >= n.max(1), "weight spec for size {n} needs {} slices", n.max(1));
    }
}

/// All NILP configurations of size `n`, each exactly once.
pub fn enumerate_nilp(n: usize, modified: bool) -> Vec<NilpConfig> {
    assert!(n >= 1, "size must be positive");
    let mut out = Vec::new();
    let mut occupied: HashSet<(i64, i64)> = HashSet::new();
    let mut paths = Vec::new();
    extend_paths(n, modified, &mut paths, &mut occupied, &mut out);
    out
}

fn extend_paths(
    n: usize,
    modified: bool,
    paths: &mut Vec<Vec<Step>>,
    occupied: &mut HashSet<(i64, i64)>,
    out: &mut Vec<NilpConfig>,
) {
    let i = paths.len() + 1;
    if i == n {
        out.push(NilpConfig { n, modified, paths: paths.clone() });
        return;
    }
    let len = if modified { i + 1 } else { i };
    let prev_end = paths.last().map(|p| end_x(paths.len(), p));
    for bits in 0u32..(1 << len) {
        let steps: Vec<Step> =
            (0..len).map(|j| if bits >> j & 1 == 1 { Step::Diagonal } else { Step::Vertical }).collect();
        let sites = path_sites(i, &steps);
        if sites.iter().any(|s| occupied.contains(s)) {
            continue;
        }
        if modified {
            let r = end_x(i, &steps) - 1;
            let gap = match prev_end {
                Some(prev) => r - (prev - 1),
                None => r,
            };
            if gap % 2 == 0 {
                continue;
            }
        }
        for s in &sites {
            occupied.insert(*s);
        }
        paths.push(steps);
        extend_paths(n, modified, paths, occupied, out);
        paths.pop();
        for s in &sites {
            occupied.remove(s);
        }
    }
}

fn end_x(i: usize, steps: &[Step]) -> i64 {
    i as i64 + steps.iter().filter(|&&s| s == Step::Diagonal).count() as i64
}

fn path_sites(i: usize, steps: &[Step]) -> Vec<(i64, i64)> {
    let (mut x, mut y) = (i as i64, -(i as i64));
    let mut sites = vec![(x, y)];
    for s in steps {
        if *s == Step::Diagonal {
            x += 1;
        }
        y += 1;
        sites.push((x, y));
    }
    sites
}

/// Elementary symmetric polynomial `e_k` of the given values.
fn elementary(values: &[&ExactPoly], k: usize) -> ExactPoly {
    // e[j] after processing a prefix
    let mut e = vec![ExactPoly::zero(); k + 1];
    e[0] = ExactPoly::one();
    for v in values {
        for j in (1..=k).rev() {
            let add = &e[j - 1] * v;
            e[j] += &add;
        }
    }
    e.swap_remove(k)
}

/// Weighted count of lattice paths from `(i, -i)` to `(r, 0)` (or to `(r + 1, 1)` when modified).
///
/// Equals the coefficient of `u^{2i-r}` in `prod_k (1 + t_k u)` over `k = 1..i` (`k = 0..i` when modified).
pub fn weighted_path_count(i: usize, r: i64, w: &WeightSpec, modified: bool) -> ExactPoly {
    let exp = 2 * i as i64 - r;
    let first = if modified { 0 } else { 1 };
    let values: Vec<&ExactPoly> = (first..=i).map(|k| w.slice(k)).collect();
    if exp < 0 || exp as usize > values.len() {
        return ExactPoly::zero();
    }
    elementary(&values, exp as usize)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Direct,
    Lgv,
    Extract,
}

impl Method {
    pub const ALL: [Method; 3] = [Method::Direct, Method::Lgv, Method::Extract];
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Method::Direct => "direct",
            Method::Lgv => "lgv",
            Method::Extract => "extract",
        })
    }
}

/// Generating polynomial `N_10(t_1..t_{n-1})`, or `N'_10(t_0..t_{n-1})` when `modified`.
pub fn gen_poly(n: usize, w: &WeightSpec, method: Method, modified: bool) -> ExactPoly {
    assert!(n >= 1, "size must be positive");
    w.check(n);
    match method {
        Method::Direct => enumerate_nilp(n, modified).iter().map(|c| c.weight(w)).sum(),
        Method::Lgv => gen_poly_lgv(n, w, modified),
        Method::Extract => gen_poly_extract(n, w, modified),
    }
}

fn gen_poly_lgv(n: usize, w: &WeightSpec, modified: bool) -> ExactPoly {
    let m = n - 1;
    let mut total = ExactPoly::zero();
    for ends in endpoint_sequences(m, modified) {
        let mat = PolyMatrix::from_fn(m, m, |i, j| weighted_path_count(i + 1, ends[j], w, modified));
        total += &mat.determinant().expect("square");
    }
    total
}

/// `r_1 < ... < r_m` with `r_i <= 2i`; unmodified: `r_1 >= 1`; modified: `r_1` odd and odd gaps.
fn endpoint_sequences(m: usize, modified: bool) -> Vec<Vec<i64>> {
    fn rec(m: usize, modified: bool, cur: &mut Vec<i64>, out: &mut Vec<Vec<i64>>) {
        let i = cur.len() + 1;
        if i > m {
            out.push(cur.clone());
            return;
        }
        let (start, step) = match (modified, cur.last()) {
            (false, None) => (1, 1),
            (false, Some(&p)) => (p + 1, 1),
            (true, None) => (1, 2),
            (true, Some(&p)) => (p + 1, 2),
        };
        let mut r = start;
        while r <= 2 * i as i64 {
            cur.push(r);
            rec(m, modified, cur, out);
            cur.pop();
            r += step;
        }
    }
    let mut out = Vec::new();
    rec(m, modified, &mut Vec::new(), &mut out);
    out
}

fn gen_poly_extract(n: usize, w: &WeightSpec, modified: bool) -> ExactPoly {
    let us: Vec<Var> = (1..=n).map(Var::u).collect();
    let one = ExactPoly::one();
    let mut sp = SeriesProduct::new(us.clone());
    for i in 0..n {
        for j in i + 1..n {
            sp = sp
                .num(&ExactPoly::var(us[j]) - &ExactPoly::var(us[i]))
                .num(&one + &(w.slice(i + 1) * &ExactPoly::var(us[j])))
                .den(&one - &ExactPoly::term(1, Monomial::from_pairs([(us[i], 1), (us[j], 1)])));
        }
        if modified {
            sp = sp
                .num(&one + &(w.slice(0) * &ExactPoly::var(us[i])))
                .den(&one - &ExactPoly::var_pow(us[i], 2));
        } else {
            sp = sp.den(&one - &ExactPoly::var(us[i]));
        }
    }
    let targets: Vec<i32> = (0..n as i32).map(|i| 2 * i).collect();
    sp.coefficient_of(&targets).expect("denominators are units at the origin")
}

/// `N'_10(2n | t, tau)`: modified generating polynomial with `t_0 = t` and every other slice `tau`.
pub fn nprime_specialized(n: usize, t: &ExactPoly, tau: &ExactPoly) -> ExactPoly {
    gen_poly(n, &WeightSpec::specialized(n, t.clone(), tau.clone()), Method::Extract, true)
}

/// Largest size accepted by the brute-force ASM enumeration.
pub const ASM_BRUTE_FORCE_MAX: usize = 6;

/// `A_n = prod_{k=0}^{n-1} (3k+1)! / (n+k)!`.
pub fn asm_count_formula(n: usize) -> BigInt {
    let fact = |m: usize| -> BigInt { (1..=m).fold(BigInt::one(), |a, k| a * k) };
    let mut num = BigInt::one();
    let mut den = BigInt::one();
    for k in 0..n {
        num *= fact(3 * k + 1);
        den *= fact(n + k);
    }
    num / den
}

/// All valid ASM rows for a given column partial-sum state, returning the new state.
fn next_rows(n: usize, state: &[u8]) -> Vec<(Vec<i8>, Vec<u8>)> {
    let mut out = Vec::new();
    let mut row = vec![0i8; n];
    fn rec(j: usize, last_nonzero: i8, state: &[u8], row: &mut Vec<i8>, out: &mut Vec<(Vec<i8>, Vec<u8>)>) {
        let n = row.len();
        if j == n {
            if last_nonzero == 1 {
                let next = state.iter().zip(row.iter()).map(|(&s, &r)| (s as i8 + r) as u8).collect();
                out.push((row.clone(), next));
            }
            return;
        }
        row[j] = 0;
        rec(j + 1, last_nonzero, state, row, out);
        // nonzero entries alternate, starting with 1
        let want: i8 = if last_nonzero == 1 { -1 } else { 1 };
        let s = state[j] as i8 + want;
        if (0..=1).contains(&s) {
            row[j] = want;
            rec(j + 1, want, state, row, out);
            row[j] = 0;
        }
    }
    rec(0, -1, state, &mut row, &mut out);
    out
}

/// Enumerates every ASM of size `n`, calling `visit` with its top row.
fn enumerate_asms(n: usize, mut visit: impl FnMut(&[i8])) {
    fn rec(n: usize, depth: usize, state: Vec<u8>, top: &mut Vec<i8>, visit: &mut dyn FnMut(&[i8])) {
        if depth == n {
            if state.iter().all(|&s| s == 1) {
                visit(top);
            }
            return;
        }
        for (row, next) in next_rows(n, &state) {
            // each row adds exactly one to the column total; prune impossible states
            if depth == 0 {
                *top = row.clone();
            }
            rec(n, depth + 1, next, top, visit);
        }
    }
    let mut top = Vec::new();
    rec(n, 0, vec![0; n], &mut top, &mut visit);
}

/// `A_n` by exhaustive enumeration; must agree with [`asm_count_formula`].
pub fn asm_count_brute_force(n: usize) -> Result<u64, Error> {
    if n > ASM_BRUTE_FORCE_MAX {
        return Err(Error::SizeTooLargeForBruteForce { n, max: ASM_BRUTE_FORCE_MAX });
    }
    let mut count = 0u64;
    enumerate_asms(n, |_| count += 1);
    Ok(count)
}

/// `A_n`, checking the product formula against enumeration when within the brute-force bound.
pub fn asm_count(n: usize) -> Result<BigInt, Error> {
    let formula = asm_count_formula(n);
    if n <= ASM_BRUTE_FORCE_MAX {
        let brute = asm_count_brute_force(n)?;
        assert_eq!(formula, BigInt::from(brute), "ASM product formula disagrees with enumeration at n = {n}");
    }
    Ok(formula)
}

/// `(A_{n,1}, ..., A_{n,n})`: ASMs by the position of the 1 in their top row.
pub fn asm_refined(n: usize) -> Result<Vec<u64>, Error> {
    if n > ASM_BRUTE_FORCE_MAX {
        return Err(Error::SizeTooLargeForBruteForce { n, max: ASM_BRUTE_FORCE_MAX });
    }
    let mut counts = vec![0u64; n];
    enumerate_asms(n, |top| {
        let k = top.iter().position(|&e| e == 1).expect("top row has a 1");
        counts[k] += 1;
    });
    Ok(counts)
}

/// `sum_k A_{n,k} t^{k-1}`.
pub fn refined_asm_polynomial(n: usize) -> Result<ExactPoly, Error> {
    let counts = asm_refined(n)?;
    let mut p = ExactPoly::zero();
    for (k, c) in counts.into_iter().enumerate() {
        p.add_term(Monomial::var(Var::T, k as i32), BigInt::from(c));
    }
    Ok(p)
}
