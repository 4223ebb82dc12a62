//! Noncrossing link patterns on `2n` points, the periodic Temperley-Lieb action,
//! opening sequences and the change-of-basis coefficients between sequence
//! components and link-pattern components.
//!
//! Sites are 1-based in every public signature and in text forms.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::poly::{ExactPoly, Var};

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LinkPattern {
    // 0-based partner of each site
    partner: Vec<usize>,
}

impl LinkPattern {
    /// Builds a pattern from its 1-based arches. Fails unless they form a noncrossing perfect matching.
    pub fn from_arches(n: usize, arches: &[(usize, usize)]) -> Result<LinkPattern, Error> {
        let size = 2 * n;
        let mut partner = vec![usize::MAX; size];
        for &(a, b) in arches {
            if a == 0 || b == 0 || a > size || b > size || a == b {
                return Err(Error::Parse(format!("arch ({a},{b}) out of range for {size} sites")));
            }
            if partner[a - 1] != usize::MAX || partner[b - 1] != usize::MAX {
                return Err(Error::Parse(format!("site reused in arch ({a},{b})")));
            }
            partner[a - 1] = b - 1;
            partner[b - 1] = a - 1;
        }
        if partner.contains(&usize::MAX) {
            return Err(Error::Parse("pattern leaves a site unmatched".into()));
        }
        let pattern = LinkPattern { partner };
        if !pattern.is_noncrossing() {
            return Err(Error::Parse("arches cross".into()));
        }
        Ok(pattern)
    }

    /// The pattern whose openings are `openings` (strictly increasing, `a_l <= 2l - 1`).
    pub fn from_openings(n: usize, openings: &[usize]) -> Result<LinkPattern, Error> {
        if openings.len() != n || openings.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::Parse(format!("{openings:?} is not a strictly increasing opening set of size {n}")));
        }
        let mut is_open = vec![false; 2 * n];
        for (l, &a) in openings.iter().enumerate() {
            if a == 0 || a > 2 * l + 1 {
                return Err(Error::Parse(format!("opening {a} at position {} exceeds {}", l + 1, 2 * l + 1)));
            }
            is_open[a - 1] = true;
        }
        let mut partner = vec![0; 2 * n];
        let mut stack = Vec::new();
        for (s, &open) in is_open.iter().enumerate() {
            if open {
                stack.push(s);
            } else {
                let o = stack.pop().expect("ballot condition holds");
                partner[o] = s;
                partner[s] = o;
            }
        }
        Ok(LinkPattern { partner })
    }

    /// `i <-> 2n + 1 - i`.
    pub fn nested(n: usize) -> LinkPattern {
        LinkPattern { partner: (0..2 * n).map(|s| 2 * n - 1 - s).collect() }
    }

    /// `2l - 1 <-> 2l`.
    pub fn little_arches(n: usize) -> LinkPattern {
        LinkPattern { partner: (0..2 * n).map(|s| s ^ 1).collect() }
    }

    pub fn n(&self) -> usize {
        self.partner.len() / 2
    }

    /// 1-based partner of 1-based site `i`.
    pub fn partner(&self, i: usize) -> usize {
        self.partner[i - 1] + 1
    }

    pub fn is_opening(&self, i: usize) -> bool {
        self.partner[i - 1] > i - 1
    }

    /// 1-based arches `(i, j)` with `i < j`, sorted by opening.
    pub fn arches(&self) -> Vec<(usize, usize)> {
        (0..self.partner.len()).filter(|&s| self.partner[s] > s).map(|s| (s + 1, self.partner[s] + 1)).collect()
    }

    pub fn openings(&self) -> Vec<usize> {
        self.arches().into_iter().map(|(i, _)| i).collect()
    }

    fn is_noncrossing(&self) -> bool {
        let arches = self.arches();
        arches.iter().all(|&(i, k)| arches.iter().all(|&(j, l)| !(i < j && j < k && k < l)))
    }

    /// Shifts every site by `shift` modulo `2n`: `sigma(pi)(i + shift) = pi(i) + shift`.
    pub fn rotate(&self, shift: i64) -> LinkPattern {
        let size = self.partner.len();
        if size == 0 {
            return self.clone();
        }
        let m = size as i64;
        let map = |s: usize| ((s as i64 + shift).rem_euclid(m)) as usize;
        let mut partner = vec![0; size];
        for s in 0..size {
            partner[map(s)] = map(self.partner[s]);
        }
        LinkPattern { partner }
    }

    /// Removes the arch `(i, i+1)` and renumbers the remaining sites.
    pub fn remove_little_arch(&self, i: usize) -> LinkPattern {
        assert_eq!(self.partner(i), i + 1, "({i},{}) is not an arch", i + 1);
        let drop = |s: usize| if s > i { s - 2 } else { s };
        let partner = (0..self.partner.len())
            .filter(|&s| s != i - 1 && s != i)
            .map(|s| drop(self.partner[s]))
            .collect();
        LinkPattern { partner }
    }
}

impl fmt::Display for LinkPattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.partner.is_empty() {
            return f.write_str("()");
        }
        for (i, j) in self.arches() {
            write!(f, "({i},{j})")?;
        }
        Ok(())
    }
}

fn parse_groups(s: &str) -> Result<Vec<Vec<usize>>, Error> {
    let s: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    let mut groups = Vec::new();
    let mut rest = s.as_str();
    while !rest.is_empty() {
        let body = rest.strip_prefix('(').ok_or_else(|| Error::Parse(format!("expected '(' in {s:?}")))?;
        let close = body.find(')').ok_or_else(|| Error::Parse(format!("unbalanced parenthesis in {s:?}")))?;
        let inner = &body[..close];
        let nums = if inner.is_empty() {
            Vec::new()
        } else {
            inner
                .split(',')
                .map(|x| x.parse::<usize>().map_err(|_| Error::Parse(format!("bad site {x:?} in {s:?}"))))
                .collect::<Result<Vec<_>, _>>()?
        };
        groups.push(nums);
        rest = &body[close + 1..];
    }
    Ok(groups)
}

impl FromStr for LinkPattern {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        let groups = parse_groups(s)?;
        if groups.iter().all(|g| g.is_empty()) {
            return Ok(LinkPattern { partner: Vec::new() });
        }
        let mut arches = Vec::new();
        for g in groups {
            match g[..] {
                [a, b] => arches.push((a.min(b), a.max(b))),
                _ => return Err(Error::Parse(format!("arch must have two sites: {g:?}"))),
            }
        }
        LinkPattern::from_arches(arches.len(), &arches)
    }
}

impl Serialize for LinkPattern {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for LinkPattern {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// A non-decreasing sequence `a_1 <= ... <= a_n` indexing a component.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct OpeningSequence(pub Vec<usize>);

impl OpeningSequence {
    pub fn new(a: Vec<usize>) -> OpeningSequence {
        OpeningSequence(a)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_non_decreasing(&self) -> bool {
        self.0.windows(2).all(|w| w[0] <= w[1])
    }

    /// Member of the family with `a_1 = 1` and `a_l` in `{2l-2, 2l-1}`.
    pub fn in_family_a(&self) -> bool {
        self.0.iter().enumerate().all(|(k, &a)| {
            let l = k + 1;
            if l == 1 {
                a == 1
            } else {
                a == 2 * l - 2 || a == 2 * l - 1
            }
        })
    }
}

impl fmt::Display for OpeningSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|a| a.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

impl FromStr for OpeningSequence {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        let mut groups = parse_groups(s)?;
        if groups.len() != 1 {
            return Err(Error::Parse(format!("sequence must be a single parenthesized list: {s:?}")));
        }
        let seq = OpeningSequence(groups.pop().unwrap_or_default());
        if !seq.is_non_decreasing() {
            return Err(Error::Parse(format!("sequence {seq} is not non-decreasing")));
        }
        Ok(seq)
    }
}

impl Serialize for OpeningSequence {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for OpeningSequence {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Strictly increasing sequences with `a_l <= 2l - 1`, in lexicographic order.
pub fn catalan_openings(n: usize) -> Vec<Vec<usize>> {
    fn rec(n: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        let l = cur.len() + 1;
        if l > n {
            out.push(cur.clone());
            return;
        }
        let lo = cur.last().map_or(1, |&p| p + 1);
        for a in lo..=2 * l - 1 {
            cur.push(a);
            rec(n, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(n, &mut Vec::new(), &mut out);
    out
}

/// All `Catalan(n)` patterns, sorted lexicographically by opening sequence.
pub fn enumerate_link_patterns(n: usize) -> Vec<LinkPattern> {
    catalan_openings(n)
        .iter()
        .map(|o| LinkPattern::from_openings(n, o).expect("valid openings"))
        .collect()
}

/// Applies `e_i` (site `2n` pairs with site 1). Returns the image and the number of closed loops.
pub fn tl_apply(i: usize, pi: &LinkPattern) -> (LinkPattern, u32) {
    let size = pi.partner.len();
    assert!(size > 0 && (1..=size).contains(&i), "site {i} out of range");
    let a = i - 1;
    let b = i % size;
    if pi.partner[a] == b {
        return (pi.clone(), 1);
    }
    let (pa, pb) = (pi.partner[a], pi.partner[b]);
    let mut partner = pi.partner.clone();
    partner[a] = b;
    partner[b] = a;
    partner[pa] = pb;
    partner[pb] = pa;
    (LinkPattern { partner }, 0)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PatternStats {
    pub epsilon: Vec<i8>,
    pub openings: Vec<usize>,
    pub depth: i64,
}

/// `epsilon_i = +1` at openings and `-1` at closings; `depth = n^2 + sum_i i * epsilon_i`.
pub fn pattern_stats(pi: &LinkPattern) -> PatternStats {
    let n = pi.n() as i64;
    let epsilon: Vec<i8> = (1..=2 * pi.n()).map(|i| if pi.is_opening(i) { 1 } else { -1 }).collect();
    let depth = n * n + epsilon.iter().enumerate().map(|(k, &e)| (k as i64 + 1) * e as i64).sum::<i64>();
    PatternStats { epsilon, openings: pi.openings(), depth }
}

/// The `2^{n-1}` sequences with `a_1 = 1` and `a_l` in `{2l-2, 2l-1}`, larger choices first.
pub fn sequences_an(n: usize) -> Vec<OpeningSequence> {
    if n == 0 {
        return vec![OpeningSequence(Vec::new())];
    }
    let mut out = vec![vec![1]];
    for l in 2..=n {
        out = out
            .into_iter()
            .flat_map(|s| {
                [2 * l - 1, 2 * l - 2].into_iter().map(move |a| {
                    let mut t = s.clone();
                    t.push(a);
                    t
                })
            })
            .collect();
    }
    out.into_iter().map(OpeningSequence).collect()
}

/// Patterns whose openings on odd sites are exactly the odd entries of `a`.
pub fn partition_l(a: &OpeningSequence, n: usize) -> Result<Vec<LinkPattern>, Error> {
    if a.len() != n || !a.in_family_a() {
        return Err(Error::SequenceNotInFamily(a.to_string()));
    }
    let odd: Vec<usize> = a.0.iter().copied().filter(|x| x % 2 == 1).collect();
    Ok(enumerate_link_patterns(n)
        .into_iter()
        .filter(|pi| pi.openings().into_iter().filter(|x| x % 2 == 1).collect::<Vec<_>>() == odd)
        .collect())
}

/// `U_k` in `tau`: `U_{-1} = 0`, `U_0 = 1`, `U_{k+1} = -tau U_k - U_{k-1}`; zero for `k < -1`.
pub fn chebyshev_u(k: i64) -> ExactPoly {
    if k < 0 {
        return ExactPoly::zero();
    }
    let tau = ExactPoly::var(Var::TAU);
    let (mut prev, mut cur) = (ExactPoly::zero(), ExactPoly::one());
    for _ in 0..k {
        let next = &(-&(&tau * &cur)) - &prev;
        prev = cur;
        cur = next;
    }
    cur
}

/// `U_k` with `tau = -q - q^{-1}`, i.e. the q-integer `[k+1]_q`.
pub fn chebyshev_u_q(k: i64) -> ExactPoly {
    tau_to_q(&chebyshev_u(k))
}

/// Substitutes `tau = -q - q^{-1}`.
pub fn tau_to_q(p: &ExactPoly) -> ExactPoly {
    let value = -&(&ExactPoly::var(Var::Q) + &ExactPoly::var_pow(Var::Q, -1));
    p.substitute(Var::TAU, &value).expect("tau appears with non-negative exponents")
}

/// Coefficient of the link-pattern component `pi` in the sequence component `a`:
/// the product over arches `(i, j)` of `U_{#{l : i <= a_l < j} - (j - i + 1)/2}`.
pub fn basis_coefficient(a: &OpeningSequence, pi: &LinkPattern, n: usize) -> ExactPoly {
    assert_eq!(a.len(), n, "sequence length");
    assert_eq!(pi.n(), n, "pattern size");
    let mut acc = ExactPoly::one();
    for (i, j) in pi.arches() {
        let count = a.0.iter().filter(|&&x| i <= x && x < j).count() as i64;
        let k = count - (j - i).div_ceil(2) as i64;
        if k < 0 {
            return ExactPoly::zero();
        }
        acc = &acc * &chebyshev_u(k);
    }
    acc
}
