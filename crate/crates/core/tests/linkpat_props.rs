use qkzlab::linkpat::{
    basis_coefficient, catalan_openings, chebyshev_u, enumerate_link_patterns, partition_l, pattern_stats,
    sequences_an, tl_apply, LinkPattern, OpeningSequence,
};
use qkzlab::ExactPoly;

/// Peels the leftmost little arch `(i, i+1)`: with `k` entries equal to `i`, contributes `U_{k-1}`,
/// then one copy of `i` is consumed, the other copies slide to `i - 1`, and larger entries drop by 2.
fn marker_coefficient(a: &[usize], pi: &LinkPattern) -> ExactPoly {
    let n = pi.n();
    if n == 0 {
        return ExactPoly::one();
    }
    let i = (1..2 * n).find(|&i| pi.partner(i) == i + 1).expect("a little arch exists");
    let k = a.iter().filter(|&&x| x == i).count();
    if k == 0 {
        return ExactPoly::zero();
    }
    let mut rest: Vec<usize> = Vec::with_capacity(a.len() - 1);
    let mut consumed = false;
    for &x in a {
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
    rest.sort();
    &chebyshev_u(k as i64 - 1) * &marker_coefficient(&rest, &pi.remove_little_arch(i))
}

/// Non-decreasing sequences with `l <= a_l <= 2n - 1`.
fn non_decreasing(n: usize) -> Vec<Vec<usize>> {
    fn rec(n: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        let l = cur.len() + 1;
        if l > n {
            out.push(cur.clone());
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

#[test]
fn closed_formula_matches_marker_recursion_on_catalan_family() {
    for n in 1..=5 {
        let pats = enumerate_link_patterns(n);
        for a in catalan_openings(n) {
            let seq = OpeningSequence(a.clone());
            for pi in &pats {
                assert_eq!(basis_coefficient(&seq, pi, n), marker_coefficient(&a, pi), "a={seq} pi={pi}");
            }
        }
    }
}

#[test]
fn closed_formula_matches_marker_recursion_on_all_sequences() {
    for n in 1..=4 {
        let pats = enumerate_link_patterns(n);
        for a in non_decreasing(n) {
            let seq = OpeningSequence(a.clone());
            for pi in &pats {
                assert_eq!(basis_coefficient(&seq, pi, n), marker_coefficient(&a, pi), "a={seq} pi={pi}");
            }
        }
    }
}

#[test]
fn family_a_coefficients_are_indicators() {
    for n in 1..=6 {
        let pats = enumerate_link_patterns(n);
        for a in sequences_an(n) {
            let block = partition_l(&a, n).unwrap();
            for pi in &pats {
                let c = basis_coefficient(&a, pi, n);
                let expected = if block.contains(pi) { ExactPoly::one() } else { ExactPoly::zero() };
                assert_eq!(c, expected, "a={a} pi={pi}");
            }
        }
    }
}

#[test]
fn catalan_family_is_unitriangular() {
    for n in 1..=6 {
        let pats = enumerate_link_patterns(n);
        let openings = catalan_openings(n);
        for (r, a) in openings.iter().enumerate() {
            let seq = OpeningSequence(a.clone());
            for (c, pi) in pats.iter().enumerate() {
                let v = basis_coefficient(&seq, pi, n);
                if r == c {
                    assert!(v.is_one(), "diagonal at {seq}");
                } else if c > r {
                    assert!(v.is_zero(), "above diagonal at a={seq} pi={pi}: {v}");
                }
            }
        }
    }
}

#[test]
fn temperley_lieb_relations() {
    for n in 1..=6 {
        let size = 2 * n;
        for pi in enumerate_link_patterns(n) {
            for i in 1..=size {
                let (once, l1) = tl_apply(i, &pi);
                let (twice, l2) = tl_apply(i, &once);
                assert_eq!(twice, once);
                assert_eq!(l2, 1);
                assert_eq!(l1 == 1, pi.partner(i) == i % size + 1);
                if n >= 2 {
                    for j in [i % size + 1, (i + size - 2) % size + 1] {
                        let (a, la) = tl_apply(i, &pi);
                        let (b, lb) = tl_apply(j, &a);
                        let (c, lc) = tl_apply(i, &b);
                        assert_eq!(c, once, "e_{i} e_{j} e_{i} on {pi}");
                        assert_eq!(la + lb + lc, l1);
                    }
                }
            }
        }
    }
}

#[test]
fn stats_invariants() {
    for n in 0..=6 {
        for pi in enumerate_link_patterns(n) {
            let s = pattern_stats(&pi);
            assert_eq!(s.epsilon.iter().map(|&e| e as i64).sum::<i64>(), 0);
            assert_eq!(s.openings.len(), n);
            assert!(s.depth >= 0);
            for i in 1..=2 * n {
                assert_eq!(s.epsilon[i - 1] == 1, pi.is_opening(i));
                assert_ne!(pi.is_opening(i), pi.is_opening(pi.partner(i)));
            }
        }
        assert_eq!(pattern_stats(&LinkPattern::nested(n)).depth, 0);
    }
}

#[test]
fn openings_biject_with_patterns() {
    for n in 0..=7 {
        let pats = enumerate_link_patterns(n);
        let from_patterns: Vec<Vec<usize>> = pats.iter().map(|p| p.openings()).collect();
        assert_eq!(from_patterns, catalan_openings(n));
    }
}

#[test]
fn rotation_is_a_cyclic_action() {
    for n in 1..=5 {
        for pi in enumerate_link_patterns(n) {
            let mut r = pi.clone();
            for _ in 0..2 * n {
                r = r.rotate(1);
                assert!(enumerate_link_patterns(n).contains(&r));
            }
            assert_eq!(r, pi);
            let size = 2 * n;
            for i in 1..=size {
                let lhs = tl_apply(i % size + 1, &pi.rotate(1)).0;
                let rhs = tl_apply(i, &pi).0.rotate(1);
                assert_eq!(lhs, rhs);
            }
        }
    }
}
