//! Coefficient extraction from products of series-expandable factors.
//!
//! A contour integral whose contours surround only the origin is the Taylor
//! coefficient of its integrand. [`SeriesProduct::coefficient_of`] computes
//! such coefficients exactly, one extraction variable at a time: when variable
//! `u` is processed, every not-yet-consumed factor involving `u` is multiplied
//! in, the running product is truncated at the target exponent of `u` (and of
//! every later extraction variable), and the coefficient of `u^e` is taken.

use num_traits::{One, Signed};

use crate::error::Error;
use crate::poly::{permutations_with_sign, ExactPoly, Monomial, PolyMatrix, Var};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Polarity {
    Numerator,
    Denominator,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SeriesFactor {
    pub polarity: Polarity,
    pub body: ExactPoly,
}

impl SeriesFactor {
    pub fn num(body: ExactPoly) -> SeriesFactor {
        SeriesFactor { polarity: Polarity::Numerator, body }
    }

    pub fn den(body: ExactPoly) -> SeriesFactor {
        SeriesFactor { polarity: Polarity::Denominator, body }
    }
}

/// A rational function `prod numerators / prod denominators`, to be expanded
/// around the origin in `extraction_vars`. Other variables are parameters.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct SeriesProduct {
    pub factors: Vec<SeriesFactor>,
    pub extraction_vars: Vec<Var>,
}

/// A truncated multivariate series: `poly` is exact for all exponents up to `caps`.
#[derive(Debug, Clone)]
struct Truncated {
    poly: ExactPoly,
    caps: Vec<(Var, i32)>,
}

impl Truncated {
    fn new(poly: ExactPoly, caps: Vec<(Var, i32)>) -> Truncated {
        let poly = poly.filter_terms(|m| caps.iter().all(|&(v, c)| m.exp(v) <= c));
        Truncated { poly, caps }
    }

    fn mul(&self, other: &Truncated) -> Truncated {
        let caps = min_caps(&self.caps, &other.caps);
        Truncated { poly: self.poly.mul_truncated(&other.poly, &caps), caps }
    }

    /// Coefficient of `v^e`; `v` is dropped from the caps.
    fn coefficient(&self, v: Var, e: i32) -> Truncated {
        let cap = self.caps.iter().find(|(w, _)| *w == v).map(|&(_, c)| c);
        assert!(cap.is_some_and(|c| c >= e), "extraction of {v}^{e} beyond the valid order {cap:?}");
        let poly = self
            .poly
            .filter_terms(|m| m.exp(v) == e)
            .mul_monomial(&Monomial::var(v, -e));
        let caps = self.caps.iter().copied().filter(|(w, _)| *w != v).collect();
        Truncated { poly, caps }
    }
}

fn min_caps(a: &[(Var, i32)], b: &[(Var, i32)]) -> Vec<(Var, i32)> {
    let mut out: Vec<(Var, i32)> = a.to_vec();
    for &(v, c) in b {
        match out.iter_mut().find(|(w, _)| *w == v) {
            Some(slot) => slot.1 = slot.1.min(c),
            None => out.push((v, c)),
        }
    }
    out
}

impl SeriesProduct {
    pub fn new(extraction_vars: Vec<Var>) -> SeriesProduct {
        SeriesProduct { factors: Vec::new(), extraction_vars }
    }

    pub fn num(mut self, body: ExactPoly) -> SeriesProduct {
        self.factors.push(SeriesFactor::num(body));
        self
    }

    pub fn den(mut self, body: ExactPoly) -> SeriesProduct {
        self.factors.push(SeriesFactor::den(body));
        self
    }

    /// Exact coefficient of `prod u_l^{e_l}` in the expansion around 0.
    ///
    /// Negative target exponents are allowed and give zero unless a numerator
    /// carries matching negative powers.
    pub fn coefficient_of(&self, exponents: &[i32]) -> Result<ExactPoly, Error> {
        let vars = &self.extraction_vars;
        if exponents.len() != vars.len() {
            return Err(Error::ExponentCount { expected: vars.len(), got: exponents.len() });
        }
        // Fold negative powers of numerators into the targets so every factor is a power series.
        let mut targets: Vec<i32> = exponents.to_vec();
        let mut bodies: Vec<(Polarity, ExactPoly)> = Vec::with_capacity(self.factors.len());
        for f in &self.factors {
            let mut body = f.body.clone();
            if f.polarity == Polarity::Numerator {
                if body.is_zero() {
                    return Ok(ExactPoly::zero());
                }
                let mut shift = Monomial::one();
                for (k, &v) in vars.iter().enumerate() {
                    let lo = body.degree_range(v).map_or(0, |r| r.0);
                    if lo < 0 {
                        shift.set(v, -lo);
                        targets[k] -= lo;
                    }
                }
                body = body.mul_monomial(&shift);
            } else {
                for &v in vars {
                    if body.degree_range(v).is_some_and(|r| r.0 < 0) {
                        return Err(Error::NonUnitDenominator(body.to_string()));
                    }
                }
            }
            bodies.push((f.polarity, body));
        }
        if targets.iter().any(|&e| e < 0) {
            return Ok(ExactPoly::zero());
        }
        let caps: Vec<(Var, i32)> = vars.iter().copied().zip(targets.iter().copied()).collect();

        // Expand every factor once, as a series truncated at the caps of the
        // variables it involves.
        let mut series: Vec<Option<Truncated>> = Vec::with_capacity(bodies.len());
        for (pol, body) in &bodies {
            let own: Vec<(Var, i32)> =
                caps.iter().copied().filter(|&(v, _)| body.degree_range(v).is_some_and(|r| r.1 > 0)).collect();
            let t = match pol {
                Polarity::Numerator => Truncated::new(body.clone(), own),
                Polarity::Denominator => invert_series(body, &own, vars)?,
            };
            series.push(Some(t));
        }

        let mut acc = Truncated { poly: ExactPoly::one(), caps: Vec::new() };
        for (k, &v) in vars.iter().enumerate() {
            for slot in series.iter_mut() {
                if slot.as_ref().is_some_and(|s| s.caps.iter().any(|(w, _)| *w == v)) {
                    let s = slot.take().unwrap();
                    acc = acc.mul(&s);
                    if acc.poly.is_zero() {
                        return Ok(ExactPoly::zero());
                    }
                }
            }
            if !acc.caps.iter().any(|(w, _)| *w == v) {
                // No factor involves v: only v^0 is present.
                if targets[k] != 0 {
                    return Ok(ExactPoly::zero());
                }
                continue;
            }
            acc = acc.coefficient(v, targets[k]);
        }
        // Factors free of every extraction variable are plain parameters.
        for s in series.into_iter().flatten() {
            acc.poly = &acc.poly * &s.poly;
        }
        Ok(acc.poly)
    }
}

/// `1 / body` as a series truncated at `caps`; the constant part must be `±monomial`.
fn invert_series(body: &ExactPoly, caps: &[(Var, i32)], vars: &[Var]) -> Result<Truncated, Error> {
    let constant = body.filter_terms(|m| vars.iter().all(|&v| m.exp(v) == 0));
    let Some((c, m)) = constant.as_term() else {
        return Err(Error::NonUnitDenominator(body.to_string()));
    };
    if !c.abs().is_one() {
        return Err(Error::NonUnitDenominator(body.to_string()));
    }
    let unit_inv = ExactPoly::term(c.clone(), m.inverse());
    // body = unit * (1 - g)  =>  1/body = unit^-1 * sum_k g^k
    let g = -(&(body * &unit_inv) - &ExactPoly::one());
    let g = Truncated::new(g, caps.to_vec());
    let max_steps: i32 = caps.iter().map(|&(_, c)| c).sum();
    let mut sum = Truncated::new(ExactPoly::one(), caps.to_vec());
    let mut power = sum.clone();
    for _ in 0..max_steps {
        power = power.mul(&g);
        if power.poly.is_zero() {
            break;
        }
        sum.poly += &power.poly;
    }
    sum.poly = &sum.poly * &unit_inv;
    Ok(sum)
}

/// Parity restriction for sums of alternants.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Parity {
    All,
    Even,
}

fn truncate_total(p: &ExactPoly, vars: &[Var], order: i32) -> ExactPoly {
    p.filter_terms(|m| m.degree_in(vars) <= order)
}

fn mul_total(a: &ExactPoly, b: &ExactPoly, vars: &[Var], order: i32) -> ExactPoly {
    let mut out = ExactPoly::zero();
    for (ma, ca) in a.terms() {
        let da = ma.degree_in(vars);
        for (mb, cb) in b.terms() {
            if da + mb.degree_in(vars) <= order {
                out.add_term(ma.mul(mb), ca * cb);
            }
        }
    }
    out
}

fn geometric_total(x: &ExactPoly, vars: &[Var], order: i32) -> ExactPoly {
    // 1/(1 - x), x of positive degree
    let mut sum = ExactPoly::one();
    let mut power = ExactPoly::one();
    loop {
        power = mul_total(&power, x, vars, order);
        if power.is_zero() {
            return sum;
        }
        sum += &power;
    }
}

/// Residual of the sum-of-alternants identity, both sides truncated at total degree `order`.
///
/// Left: `sum over 0 <= r_0 < ... < r_{n-1}` of `det(u_i^{r_j})` (for
/// [`Parity::Even`], `r_0` even and all gaps odd). Right:
/// `prod_{i<j} (u_j - u_i)/(1 - u_i u_j) * prod_i 1/(1 - u_i)` (or `1/(1 - u_i^2)`).
pub fn schur_sum_residual(n: usize, order: usize, parity: Parity) -> ExactPoly {
    let order = order as i32;
    let us: Vec<Var> = (1..=n).map(Var::u).collect();
    let one = ExactPoly::one();

    let mut lhs = ExactPoly::zero();
    for seq in increasing_sequences(n, order, parity) {
        let m = PolyMatrix::from_fn(n, n, |i, j| ExactPoly::var_pow(us[i], seq[j]));
        lhs += &m.determinant().expect("square");
    }

    let mut rhs = one.clone();
    for i in 0..n {
        for j in i + 1..n {
            let diff = &ExactPoly::var(us[j]) - &ExactPoly::var(us[i]);
            rhs = mul_total(&rhs, &diff, &us, order);
            let inv = geometric_total(&ExactPoly::term(1, Monomial::from_pairs([(us[i], 1), (us[j], 1)])), &us, order);
            rhs = mul_total(&rhs, &inv, &us, order);
        }
        let step = match parity {
            Parity::All => 1,
            Parity::Even => 2,
        };
        let inv = geometric_total(&ExactPoly::var_pow(us[i], step), &us, order);
        rhs = mul_total(&rhs, &inv, &us, order);
    }
    truncate_total(&(&lhs - &rhs), &us, order)
}

/// Strictly increasing `r_0 < ... < r_{n-1}` with `sum r <= order`.
fn increasing_sequences(n: usize, order: i32, parity: Parity) -> Vec<Vec<i32>> {
    fn rec(n: usize, budget: i32, prev: i32, parity: Parity, cur: &mut Vec<i32>, out: &mut Vec<Vec<i32>>) {
        if cur.len() == n {
            out.push(cur.clone());
            return;
        }
        let step = match parity {
            Parity::All => 1,
            Parity::Even => 2,
        };
        let mut r = prev + 1;
        // every remaining entry is at least r, so the rest costs >= r * remaining
        let remaining = (n - cur.len()) as i32;
        while r * remaining <= budget {
            cur.push(r);
            rec(n, budget - r, r, parity, cur, out);
            cur.pop();
            r += step;
        }
    }
    let mut out = Vec::new();
    // r_{-1} = -1 makes r_0 even under the parity constraint
    rec(n, order, -1, parity, &mut Vec::new(), &mut out);
    out
}

/// Expands `det(1 / (1 - alpha_l u_m))` as a signed sum of products of single denominators.
pub fn cauchy_determinant_terms(alphas: &[Var], us: &[Var]) -> Vec<(i32, Vec<ExactPoly>)> {
    permutations_with_sign(alphas.len())
        .into_iter()
        .map(|(perm, sign)| {
            let dens = perm
                .iter()
                .enumerate()
                .map(|(m, &l)| {
                    &ExactPoly::one() - &ExactPoly::term(1, Monomial::from_pairs([(alphas[l], 1), (us[m], 1)]))
                })
                .collect();
            (sign, dens)
        })
        .collect()
}
