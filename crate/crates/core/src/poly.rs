//! Sparse multivariate Laurent polynomials over the integers.
//!
//! Every quantity in the crate lives in `Z[v1^±1, v2^±1, ...]` for a fixed
//! registry of variables ([`Var`]). Coefficients are arbitrary precision and
//! zero coefficients are never stored, so structural equality is polynomial
//! equality.

use std::cmp::Ordering;
use std::collections::hash_map::Entry;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use rustc_hash::FxHashMap;
use smallvec::SmallVec;

use crate::error::Error;

/// Variable families, listed in registry order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
#[repr(u8)]
enum Family {
    T = 0,
    TSlice = 1,
    Tau = 2,
    Q = 3,
    X = 4,
    Alpha = 5,
    U = 6,
    W = 7,
    Z = 8,
    ZSite = 9,
}

/// A registered indeterminate.
///
/// The derived ordering is the registry order used for canonical monomial
/// ordering: `t, t0, t1, ..., tau, q, x, alpha1, ..., u1, ..., w1, ..., z, z1, ...`.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Var(u16);

impl Var {
    const fn new(family: Family, index: u8) -> Var {
        Var(((family as u16) << 8) | index as u16)
    }

    pub const T: Var = Var::new(Family::T, 0);
    pub const TAU: Var = Var::new(Family::Tau, 0);
    pub const Q: Var = Var::new(Family::Q, 0);
    pub const X: Var = Var::new(Family::X, 0);
    /// Free spectral parameter used by the wheel condition.
    pub const Z: Var = Var::new(Family::Z, 0);

    /// Slice weight `t_k`, `k >= 0`.
    pub fn t(k: usize) -> Var {
        Var::new(Family::TSlice, index(k, 0))
    }
    /// Spectral parameter `z_i`, `i >= 1`.
    pub fn z(i: usize) -> Var {
        Var::new(Family::ZSite, index(i, 1))
    }
    /// Extraction variable `u_l`, `l >= 1`.
    pub fn u(l: usize) -> Var {
        Var::new(Family::U, index(l, 1))
    }
    /// Integration variable `w_l`, `l >= 1`.
    pub fn w(l: usize) -> Var {
        Var::new(Family::W, index(l, 1))
    }
    /// Parameter `alpha_l`, `l >= 1`.
    pub fn alpha(l: usize) -> Var {
        Var::new(Family::Alpha, index(l, 1))
    }

    fn family(self) -> Family {
        match self.0 >> 8 {
            0 => Family::T,
            1 => Family::TSlice,
            2 => Family::Tau,
            3 => Family::Q,
            4 => Family::X,
            5 => Family::Alpha,
            6 => Family::U,
            7 => Family::W,
            8 => Family::Z,
            _ => Family::ZSite,
        }
    }

    fn index(self) -> usize {
        (self.0 & 0xff) as usize
    }

    pub fn name(self) -> String {
        let i = self.index();
        match self.family() {
            Family::T => "t".into(),
            Family::TSlice => format!("t{i}"),
            Family::Tau => "tau".into(),
            Family::Q => "q".into(),
            Family::X => "x".into(),
            Family::Alpha => format!("alpha{i}"),
            Family::U => format!("u{i}"),
            Family::W => format!("w{i}"),
            Family::Z => "z".into(),
            Family::ZSite => format!("z{i}"),
        }
    }
}

fn index(i: usize, min: usize) -> u8 {
    assert!(i >= min && i <= 255, "variable index {i} out of range");
    i as u8
}

impl fmt::Debug for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}

impl FromStr for Var {
    type Err = Error;

    fn from_str(s: &str) -> Result<Var, Error> {
        let bad = || Error::Parse(format!("unknown variable `{s}`"));
        let split = s.find(|c: char| c.is_ascii_digit()).unwrap_or(s.len());
        let (head, digits) = s.split_at(split);
        let idx = if digits.is_empty() {
            None
        } else {
            Some(digits.parse::<usize>().map_err(|_| bad())?)
        };
        let var = match (head, idx) {
            ("t", None) => Var::T,
            ("tau", None) => Var::TAU,
            ("q", None) => Var::Q,
            ("x", None) => Var::X,
            ("z", None) => Var::Z,
            ("t", Some(k)) if k <= 255 => Var::t(k),
            ("z", Some(i)) if (1..=255).contains(&i) => Var::z(i),
            ("u", Some(i)) if (1..=255).contains(&i) => Var::u(i),
            ("w", Some(i)) if (1..=255).contains(&i) => Var::w(i),
            ("alpha", Some(i)) if (1..=255).contains(&i) => Var::alpha(i),
            _ => return Err(bad()),
        };
        Ok(var)
    }
}

/// A Laurent monomial: sorted `(variable, nonzero exponent)` pairs.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Monomial(SmallVec<[(Var, i16); 8]>);

impl Monomial {
    pub fn one() -> Monomial {
        Monomial::default()
    }

    pub fn var(v: Var, e: i32) -> Monomial {
        let mut m = Monomial::one();
        m.set(v, e);
        m
    }

    pub fn from_pairs(pairs: impl IntoIterator<Item = (Var, i32)>) -> Monomial {
        let mut m = Monomial::one();
        for (v, e) in pairs {
            m.set(v, m.exp(v) + e);
        }
        m
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn exp(&self, v: Var) -> i32 {
        match self.0.binary_search_by(|(w, _)| w.cmp(&v)) {
            Ok(i) => self.0[i].1 as i32,
            Err(_) => 0,
        }
    }

    pub fn set(&mut self, v: Var, e: i32) {
        let e16 = i16::try_from(e).expect("exponent overflow");
        match self.0.binary_search_by(|(w, _)| w.cmp(&v)) {
            Ok(i) if e == 0 => {
                self.0.remove(i);
            }
            Ok(i) => self.0[i].1 = e16,
            Err(_) if e == 0 => {}
            Err(i) => self.0.insert(i, (v, e16)),
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = (Var, i32)> + '_ {
        self.0.iter().map(|&(v, e)| (v, e as i32))
    }

    pub fn total_degree(&self) -> i32 {
        self.iter().map(|(_, e)| e).sum()
    }

    pub fn degree_in(&self, vars: &[Var]) -> i32 {
        self.iter().filter(|(v, _)| vars.contains(v)).map(|(_, e)| e).sum()
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let (a, b) = (&self.0, &other.0);
        let mut out = SmallVec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match a[i].0.cmp(&b[j].0) {
                Ordering::Less => {
                    out.push(a[i]);
                    i += 1;
                }
                Ordering::Greater => {
                    out.push(b[j]);
                    j += 1;
                }
                Ordering::Equal => {
                    let e = a[i].1.checked_add(b[j].1).expect("exponent overflow");
                    if e != 0 {
                        out.push((a[i].0, e));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&a[i..]);
        out.extend_from_slice(&b[j..]);
        Monomial(out)
    }

    pub fn inverse(&self) -> Monomial {
        Monomial(self.0.iter().map(|&(v, e)| (v, -e)).collect())
    }

    /// Removes `v`, returning its exponent.
    pub fn take(&self, v: Var) -> (Monomial, i32) {
        let e = self.exp(v);
        let mut m = self.clone();
        m.set(v, 0);
        (m, e)
    }
}

impl Ord for Monomial {
    /// Graded order: lower total degree first; ties put the larger exponent
    /// of the earliest registry variable first.
    fn cmp(&self, other: &Self) -> Ordering {
        self.total_degree().cmp(&other.total_degree()).then_with(|| {
            let (a, b) = (&self.0, &other.0);
            let mut i = 0;
            loop {
                match (a.get(i), b.get(i)) {
                    (None, None) => return Ordering::Equal,
                    (Some(&(_, ea)), None) => return 0.cmp(&ea),
                    (None, Some(&(_, eb))) => return eb.cmp(&0),
                    (Some(&(va, ea)), Some(&(vb, eb))) => {
                        if va != vb {
                            // The side holding the earlier variable has a nonzero
                            // exponent where the other has zero.
                            return if va < vb { 0.cmp(&ea) } else { eb.cmp(&0) };
                        }
                        if ea != eb {
                            return eb.cmp(&ea);
                        }
                    }
                }
                i += 1;
            }
        })
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_one() {
            return f.write_str("1");
        }
        let parts: Vec<String> = self
            .iter()
            .map(|(v, e)| if e == 1 { v.name() } else { format!("{v}^{e}") })
            .collect();
        f.write_str(&parts.join("*"))
    }
}

/// Exact sparse Laurent polynomial with big-integer coefficients.
#[derive(Clone, Default, PartialEq, Eq)]
pub struct ExactPoly {
    terms: FxHashMap<Monomial, BigInt>,
}

impl ExactPoly {
    pub fn zero() -> ExactPoly {
        ExactPoly::default()
    }

    pub fn one() -> ExactPoly {
        ExactPoly::constant(1)
    }

    pub fn constant(c: impl Into<BigInt>) -> ExactPoly {
        ExactPoly::term(c, Monomial::one())
    }

    pub fn term(c: impl Into<BigInt>, m: Monomial) -> ExactPoly {
        let mut p = ExactPoly::zero();
        p.add_term(m, c.into());
        p
    }

    pub fn var(v: Var) -> ExactPoly {
        ExactPoly::term(1, Monomial::var(v, 1))
    }

    /// `v^e` for any integer `e`.
    pub fn var_pow(v: Var, e: i32) -> ExactPoly {
        ExactPoly::term(1, Monomial::var(v, e))
    }

    /// `c1*a + c2*b` for two variables; the workhorse for linear factors like `q*z_i - q^-1*z_j`.
    pub fn binomial(c1: i64, m1: Monomial, c2: i64, m2: Monomial) -> ExactPoly {
        let mut p = ExactPoly::zero();
        p.add_term(m1, BigInt::from(c1));
        p.add_term(m2, BigInt::from(c2));
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms.get(&Monomial::one()).is_some_and(|c| c.is_one())
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, m: Monomial, c: BigInt) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
            Entry::Vacant(v) => {
                v.insert(c);
            }
        }
    }

    fn add_term_ref(&mut self, m: Monomial, c: &BigInt) {
        match self.terms.entry(m) {
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
            Entry::Vacant(v) => {
                v.insert(c.clone());
            }
        }
    }

    pub fn coeff(&self, m: &Monomial) -> BigInt {
        self.terms.get(m).cloned().unwrap_or_default()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &BigInt)> {
        self.terms.iter()
    }

    /// Terms in canonical monomial order.
    pub fn sorted_terms(&self) -> Vec<(&Monomial, &BigInt)> {
        let mut v: Vec<_> = self.terms.iter().collect();
        v.sort_by(|a, b| a.0.cmp(b.0));
        v
    }

    /// The constant coefficient, if the polynomial is a constant.
    pub fn as_constant(&self) -> Option<BigInt> {
        match self.terms.len() {
            0 => Some(BigInt::zero()),
            1 => self.terms.get(&Monomial::one()).cloned(),
            _ => None,
        }
    }

    /// `Some((c, m))` if this is a single term.
    pub fn as_term(&self) -> Option<(&BigInt, &Monomial)> {
        if self.terms.len() == 1 {
            self.terms.iter().next().map(|(m, c)| (c, m))
        } else {
            None
        }
    }

    /// A single term whose coefficient is `±1`.
    pub fn is_unit_monomial(&self) -> bool {
        self.as_term().is_some_and(|(c, _)| c.abs().is_one())
    }

    pub fn scale(&self, c: &BigInt) -> ExactPoly {
        if c.is_zero() {
            return ExactPoly::zero();
        }
        ExactPoly {
            terms: self.terms.iter().map(|(m, a)| (m.clone(), a * c)).collect(),
        }
    }

    pub fn mul_monomial(&self, m: &Monomial) -> ExactPoly {
        ExactPoly {
            terms: self.terms.iter().map(|(k, c)| (k.mul(m), c.clone())).collect(),
        }
    }

    pub fn pow(&self, e: u32) -> ExactPoly {
        let mut acc = ExactPoly::one();
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// Variables with a nonzero exponent somewhere.
    pub fn variables(&self) -> Vec<Var> {
        let mut vs: Vec<Var> = self.terms.keys().flat_map(|m| m.iter().map(|(v, _)| v)).collect();
        vs.sort();
        vs.dedup();
        vs
    }

    /// `(min, max)` exponent of `v`; `None` for the zero polynomial.
    pub fn degree_range(&self, v: Var) -> Option<(i32, i32)> {
        self.terms.keys().map(|m| m.exp(v)).fold(None, |acc, e| match acc {
            None => Some((e, e)),
            Some((lo, hi)) => Some((lo.min(e), hi.max(e))),
        })
    }

    /// `(min, max)` total degree in `vars`; `None` for zero.
    pub fn degree_range_in(&self, vars: &[Var]) -> Option<(i32, i32)> {
        self.terms.keys().map(|m| m.degree_in(vars)).fold(None, |acc, e| match acc {
            None => Some((e, e)),
            Some((lo, hi)) => Some((lo.min(e), hi.max(e))),
        })
    }

    pub fn filter_terms(&self, mut keep: impl FnMut(&Monomial) -> bool) -> ExactPoly {
        ExactPoly {
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| keep(m))
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    /// Collects coefficients of each power of `v`: `self = sum_k coeffs[k] * v^k`.
    pub fn coefficients_in(&self, v: Var) -> Vec<(i32, ExactPoly)> {
        let mut by: FxHashMap<i32, ExactPoly> = FxHashMap::default();
        for (m, c) in &self.terms {
            let (rest, e) = m.take(v);
            by.entry(e).or_default().add_term_ref(rest, c);
        }
        let mut v: Vec<_> = by.into_iter().collect();
        v.sort_by_key(|(e, _)| *e);
        v
    }

    /// Exact substitution `v := value`.
    pub fn substitute(&self, v: Var, value: &ExactPoly) -> Result<ExactPoly, Error> {
        let Some((lo, hi)) = self.degree_range(v) else {
            return Ok(ExactPoly::zero());
        };
        if lo < 0 && !value.is_unit_monomial() {
            return Err(Error::NonUnitSubstitutionIntoLaurent(v.name()));
        }
        if let Some((c, m)) = value.as_term() {
            // Monomial substitution never changes the term count much; map terms directly.
            let mut out = ExactPoly::zero();
            for (mono, coef) in &self.terms {
                let (rest, e) = mono.take(v);
                let mut cm = Monomial::one();
                for (w, f) in m.iter() {
                    cm.set(w, f * e);
                }
                let cc = if e >= 0 {
                    num_traits::pow(c.clone(), e as usize)
                } else {
                    // c is ±1 here
                    num_traits::pow(c.clone(), (-e) as usize)
                };
                out.add_term(rest.mul(&cm), coef * cc);
            }
            return Ok(out);
        }
        let mut powers = vec![ExactPoly::one()];
        for _ in 0..hi.max(0) {
            let next = powers.last().unwrap() * value;
            powers.push(next);
        }
        let mut out = ExactPoly::zero();
        for (e, coef) in self.coefficients_in(v) {
            out += &(&coef * &powers[e as usize]);
        }
        Ok(out)
    }

    /// Simultaneous renaming of variables (a monomial map with unit coefficients).
    pub fn rename(&self, map: &[(Var, Var)]) -> ExactPoly {
        let mut out = ExactPoly::zero();
        for (m, c) in &self.terms {
            let mut pairs = Vec::with_capacity(m.0.len());
            for (v, e) in m.iter() {
                let w = map.iter().find(|(a, _)| *a == v).map_or(v, |&(_, b)| b);
                pairs.push((w, e));
            }
            out.add_term_ref(Monomial::from_pairs(pairs), c);
        }
        out
    }

    /// Signed sum over all permutations of `vars`.
    pub fn antisymmetrize(&self, vars: &[Var]) -> ExactPoly {
        let mut out = ExactPoly::zero();
        for (perm, sign) in permutations_with_sign(vars.len()) {
            let map: Vec<(Var, Var)> = vars.iter().zip(&perm).map(|(&v, &j)| (v, vars[j])).collect();
            let image = self.rename(&map);
            if sign > 0 {
                out += &image;
            } else {
                out -= &image;
            }
        }
        out
    }

    /// Keeps the terms whose exponent in every listed variable is `<= 0`.
    pub fn keep_nonpositive(&self, vars: &[Var]) -> ExactPoly {
        self.filter_terms(|m| vars.iter().all(|&v| m.exp(v) <= 0))
    }

    /// Product truncated to exponents `<= caps[v]` in the capped variables.
    pub fn mul_truncated(&self, other: &ExactPoly, caps: &[(Var, i32)]) -> ExactPoly {
        let mut out = ExactPoly::zero();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                let m = ma.mul(mb);
                if caps.iter().all(|&(v, cap)| m.exp(v) <= cap) {
                    out.add_term(m, ca * cb);
                }
            }
        }
        out
    }

    /// Exact quotient by the monic linear factor `a - b` (two distinct variables).
    ///
    /// Returns `None` if the division leaves a remainder.
    pub fn div_exact_difference(&self, a: Var, b: Var) -> Option<ExactPoly> {
        // Synthetic division in `a`: p = (a - b) * Q with Q_{k-1} = p_k + b * Q_k.
        let coeffs = self.coefficients_in(a);
        let Some(&(lo, _)) = coeffs.first() else {
            return Some(ExactPoly::zero());
        };
        let hi = coeffs.last().unwrap().0;
        if lo < 0 {
            return None;
        }
        let mut dense: Vec<ExactPoly> = vec![ExactPoly::zero(); (hi + 1) as usize];
        for (e, c) in coeffs {
            dense[e as usize] = c;
        }
        let b_mono = Monomial::var(b, 1);
        let mut out = ExactPoly::zero();
        let mut carry = ExactPoly::zero();
        for k in (1..=hi as usize).rev() {
            let qk = &dense[k] + &carry.mul_monomial(&b_mono);
            out += &qk.mul_monomial(&Monomial::var(a, (k - 1) as i32));
            carry = qk;
        }
        let remainder = &dense[0] + &carry.mul_monomial(&b_mono);
        remainder.is_zero().then_some(out)
    }

    /// Whether every term has the same total degree in `vars`; returns that degree.
    pub fn homogeneous_degree_in(&self, vars: &[Var]) -> Option<i32> {
        match self.degree_range_in(vars) {
            Some((lo, hi)) if lo == hi => Some(lo),
            _ => None,
        }
    }
}

/// All permutations of `0..n` with their signs, in lexicographic order.
pub fn permutations_with_sign(n: usize) -> Vec<(Vec<usize>, i32)> {
    fn rec(prefix: &mut Vec<usize>, used: &mut Vec<bool>, out: &mut Vec<(Vec<usize>, i32)>) {
        let n = used.len();
        if prefix.len() == n {
            let mut inv = 0;
            for i in 0..n {
                for j in i + 1..n {
                    if prefix[i] > prefix[j] {
                        inv += 1;
                    }
                }
            }
            out.push((prefix.clone(), if inv % 2 == 0 { 1 } else { -1 }));
            return;
        }
        for k in 0..n {
            if !used[k] {
                used[k] = true;
                prefix.push(k);
                rec(prefix, used, out);
                prefix.pop();
                used[k] = false;
            }
        }
    }
    let mut out = Vec::new();
    rec(&mut Vec::new(), &mut vec![false; n], &mut out);
    out
}

impl fmt::Display for ExactPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        for (i, (m, c)) in self.sorted_terms().into_iter().enumerate() {
            let neg = c.is_negative();
            let mag = c.abs();
            match (i, neg) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            if m.is_one() {
                write!(f, "{mag}")?;
            } else if mag.is_one() {
                write!(f, "{m:?}")?;
            } else {
                write!(f, "{mag}*{m:?}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for ExactPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for ExactPoly {
    type Err = Error;

    /// Parses the canonical rendering (and any reordering of it): a signed sum
    /// of terms `c*v^k*w^j`, with optional spaces.
    fn from_str(s: &str) -> Result<ExactPoly, Error> {
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if compact.is_empty() {
            return Err(Error::Parse("empty polynomial".into()));
        }
        let bytes = compact.as_bytes();
        let mut out = ExactPoly::zero();
        let mut start = 0;
        let mut i = 0;
        while i <= bytes.len() {
            let at_split = i == bytes.len()
                || (i > start && (bytes[i] == b'+' || bytes[i] == b'-') && bytes[i - 1] != b'^');
            if at_split {
                let (m, c) = parse_term(&compact[start..i])?;
                out.add_term(m, c);
                start = i;
            }
            i += 1;
        }
        Ok(out)
    }
}

fn parse_term(t: &str) -> Result<(Monomial, BigInt), Error> {
    let (sign, body) = match t.as_bytes().first() {
        Some(b'-') => (-1, &t[1..]),
        Some(b'+') => (1, &t[1..]),
        _ => (1, t),
    };
    if body.is_empty() {
        return Err(Error::Parse(format!("dangling sign in `{t}`")));
    }
    let mut coef = BigInt::from(sign);
    let mut mono = Monomial::one();
    for factor in body.split('*') {
        if factor.is_empty() {
            return Err(Error::Parse(format!("empty factor in `{t}`")));
        }
        if factor.bytes().all(|b| b.is_ascii_digit()) {
            coef *= factor
                .parse::<BigInt>()
                .map_err(|e| Error::Parse(format!("{e} in `{factor}`")))?;
            continue;
        }
        let (name, e) = match factor.split_once('^') {
            Some((n, e)) => (
                n,
                e.parse::<i32>().map_err(|_| Error::Parse(format!("bad exponent in `{factor}`")))?,
            ),
            None => (factor, 1),
        };
        let v: Var = name.parse()?;
        mono.set(v, mono.exp(v) + e);
    }
    Ok((mono, coef))
}

impl AddAssign<&ExactPoly> for ExactPoly {
    fn add_assign(&mut self, rhs: &ExactPoly) {
        for (m, c) in &rhs.terms {
            self.add_term_ref(m.clone(), c);
        }
    }
}

impl SubAssign<&ExactPoly> for ExactPoly {
    fn sub_assign(&mut self, rhs: &ExactPoly) {
        for (m, c) in &rhs.terms {
            self.add_term(m.clone(), -c);
        }
    }
}

impl Add for &ExactPoly {
    type Output = ExactPoly;
    fn add(self, rhs: &ExactPoly) -> ExactPoly {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl Sub for &ExactPoly {
    type Output = ExactPoly;
    fn sub(self, rhs: &ExactPoly) -> ExactPoly {
        let mut out = self.clone();
        out -= rhs;
        out
    }
}

impl Neg for &ExactPoly {
    type Output = ExactPoly;
    fn neg(self) -> ExactPoly {
        ExactPoly {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }
}

impl Mul for &ExactPoly {
    type Output = ExactPoly;
    fn mul(self, rhs: &ExactPoly) -> ExactPoly {
        let (small, big) = if self.len() <= rhs.len() { (self, rhs) } else { (rhs, self) };
        let mut out = ExactPoly::zero();
        out.terms.reserve(big.len());
        for (ma, ca) in &small.terms {
            for (mb, cb) in &big.terms {
                out.add_term(ma.mul(mb), ca * cb);
            }
        }
        out
    }
}

macro_rules! forward_owned {
    ($tr:ident, $f:ident) => {
        impl $tr for ExactPoly {
            type Output = ExactPoly;
            fn $f(self, rhs: ExactPoly) -> ExactPoly {
                (&self).$f(&rhs)
            }
        }
        impl $tr<&ExactPoly> for ExactPoly {
            type Output = ExactPoly;
            fn $f(self, rhs: &ExactPoly) -> ExactPoly {
                (&self).$f(rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for ExactPoly {
    type Output = ExactPoly;
    fn neg(self) -> ExactPoly {
        -&self
    }
}

impl std::iter::Sum for ExactPoly {
    fn sum<I: Iterator<Item = ExactPoly>>(iter: I) -> ExactPoly {
        let mut acc = ExactPoly::zero();
        for p in iter {
            acc += &p;
        }
        acc
    }
}

impl std::iter::Product for ExactPoly {
    fn product<I: Iterator<Item = ExactPoly>>(iter: I) -> ExactPoly {
        let mut acc = ExactPoly::one();
        for p in iter {
            acc = &acc * &p;
        }
        acc
    }
}

impl From<i64> for ExactPoly {
    fn from(c: i64) -> ExactPoly {
        ExactPoly::constant(c)
    }
}

impl From<Var> for ExactPoly {
    fn from(v: Var) -> ExactPoly {
        ExactPoly::var(v)
    }
}

/// Square matrix of polynomials (rectangular allowed; only square has a determinant).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolyMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<ExactPoly>,
}

impl PolyMatrix {
    pub fn new(rows: usize, cols: usize, entries: Vec<ExactPoly>) -> PolyMatrix {
        assert_eq!(entries.len(), rows * cols, "entry count does not match shape");
        PolyMatrix { rows, cols, entries }
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> ExactPoly) -> PolyMatrix {
        let mut entries = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                entries.push(f(i, j));
            }
        }
        PolyMatrix { rows, cols, entries }
    }

    pub fn identity(n: usize) -> PolyMatrix {
        PolyMatrix::from_fn(n, n, |i, j| if i == j { ExactPoly::one() } else { ExactPoly::zero() })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &ExactPoly {
        &self.entries[i * self.cols + j]
    }

    /// Determinant by Laplace expansion along the first row with memoised minors.
    ///
    /// Minors are keyed by the set of remaining columns, so the cost is
    /// `O(n 2^n)` polynomial products rather than `n!`.
    pub fn determinant(&self) -> Result<ExactPoly, Error> {
        if self.rows != self.cols {
            return Err(Error::NotSquare { rows: self.rows, cols: self.cols });
        }
        let n = self.rows;
        if n == 0 {
            return Ok(ExactPoly::one());
        }
        assert!(n < 63, "determinant too large");
        // minors[mask] = det of rows (n - |mask|).. against columns in mask
        let mut minors: FxHashMap<u64, ExactPoly> = FxHashMap::default();
        minors.insert(0, ExactPoly::one());
        for size in 1..=n {
            let row = n - size;
            let mut next: FxHashMap<u64, ExactPoly> = FxHashMap::default();
            for mask in masks_of_size(n, size) {
                let mut acc = ExactPoly::zero();
                let mut sign_pos = 0;
                for col in 0..n {
                    if mask & (1 << col) == 0 {
                        continue;
                    }
                    let entry = self.get(row, col);
                    if !entry.is_zero() {
                        let minor = &minors[&(mask & !(1 << col))];
                        if !minor.is_zero() {
                            let prod = entry * minor;
                            if sign_pos % 2 == 0 {
                                acc += &prod;
                            } else {
                                acc -= &prod;
                            }
                        }
                    }
                    sign_pos += 1;
                }
                next.insert(mask, acc);
            }
            minors = next;
        }
        Ok(minors.remove(&((1u64 << n) - 1)).unwrap())
    }
}

fn masks_of_size(n: usize, k: usize) -> Vec<u64> {
    (0u64..(1 << n)).filter(|m| m.count_ones() as usize == k).collect()
}
