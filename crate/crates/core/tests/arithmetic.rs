use std::collections::BTreeSet;

use orbicurve::arithmetic::*;
use proptest::prelude::*;

// Independent oracle: trial-division factorization and a direct pair scan.

fn trial_factor(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        let mut e = 0;
        while n.is_multiple_of(d) {
            n /= d;
            e += 1;
        }
        if e > 0 {
            out.push((d, e));
        }
        d += 1;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

fn oracle_powerful(n: u64, e: u32, excluded: &BTreeSet<u64>) -> bool {
    trial_factor(n).iter().all(|(p, k)| excluded.contains(p) || *k >= e)
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 { a } else { gcd(b, a % b) }
}

/// All coprime `(a, c)`, `c > 0`, `abc ≠ 0`, height at most `h`, that are
/// orbifold points by the radical formulation at 0, 1, ∞ plus extra marks.
fn brute_force(spec: &ArithOrbifoldSpec, h: u64) -> Vec<ProjectivePoint> {
    let (u, v, w) = spec.standard_exponents().unwrap();
    let ex = &spec.excluded;
    let a_ok: Vec<bool> = (0..=h).map(|n| n > 0 && oracle_powerful(n, u, ex)).collect();
    let mut out = Vec::new();
    for c in 1..=h as i64 {
        if !oracle_powerful(c as u64, w, ex) {
            continue;
        }
        for a in -(h as i64)..=h as i64 {
            let b = c - a;
            if a == 0 || b == 0 || b.unsigned_abs() > h || !a_ok[a.unsigned_abs() as usize] {
                continue;
            }
            if gcd(a.unsigned_abs(), c as u64) != 1 || !oracle_powerful(b.unsigned_abs(), v, ex) {
                continue;
            }
            let extra_ok = spec.marks[3..].iter().all(|(p, m)| {
                let d = a as i128 * p.c as i128 - c as i128 * p.a as i128;
                d != 0 && oracle_powerful(d.unsigned_abs() as u64, *m, ex)
            });
            if extra_ok {
                out.push(ProjectivePoint { a, c });
            }
        }
    }
    out.sort();
    out
}

fn enumerated(spec: &ArithOrbifoldSpec, h: u64, jobs: usize) -> Vec<ProjectivePoint> {
    let mut pts: Vec<ProjectivePoint> = enumerate_points(spec, h, jobs).unwrap().into_iter().map(|r| r.point).collect();
    pts.sort();
    pts
}

#[test]
fn enumeration_matches_brute_force() {
    for (u, v, w) in [(2, 2, 2), (3, 2, 2), (2, 3, 7), (2, 2, 3)] {
        let spec = ArithOrbifoldSpec::standard(u, v, w, BTreeSet::new()).unwrap();
        assert_eq!(enumerated(&spec, 3000, 1), brute_force(&spec, 3000), "({u},{v},{w})");
    }
    let spec = ArithOrbifoldSpec::standard(2, 2, 2, [2, 3].into_iter().collect()).unwrap();
    assert_eq!(enumerated(&spec, 1000, 1), brute_force(&spec, 1000));
    for (name, spec) in conjecture_specs() {
        assert_eq!(enumerated(&spec, 3000, 1), brute_force(&spec, 3000), "{name}");
    }
}

#[test]
fn sharding_is_deterministic() {
    let spec = ArithOrbifoldSpec::standard(2, 2, 2, BTreeSet::new()).unwrap();
    let one = enumerate_points(&spec, 2000, 1).unwrap();
    assert_eq!(one, enumerate_points(&spec, 2000, 3).unwrap());
    assert_eq!(one, enumerate_points(&spec, 2000, 8).unwrap());
}

#[test]
fn point_test_agrees_with_radical_formulation() {
    let f = Factorizer::new(5000);
    let ex: BTreeSet<u64> = [5].into_iter().collect();
    let spec = ArithOrbifoldSpec::standard(2, 3, 2, ex.clone()).unwrap();
    for c in 1..=1000i64 {
        for a in -1000..=1000i64 {
            let b = c - a;
            if a == 0 || b == 0 || b.abs() > 1000 || gcd(a.unsigned_abs(), c as u64) != 1 {
                continue;
            }
            let x = ProjectivePoint { a, c };
            let by_radical = oracle_powerful(a.unsigned_abs(), 2, &ex)
                && oracle_powerful(b.unsigned_abs(), 3, &ex)
                && oracle_powerful(c as u64, 2, &ex);
            assert_eq!(is_orbifold_point_with(&x, &spec, &f).unwrap(), by_radical, "{x}");
        }
    }
}

#[test]
fn records_carry_audit_valuations() {
    let spec = ArithOrbifoldSpec::standard(3, 2, 2, BTreeSet::new()).unwrap();
    let recs = enumerate_points(&spec, 10, 1).unwrap();
    let r = recs.iter().find(|r| r.point == ProjectivePoint { a: 8, c: 9 }).unwrap();
    assert_eq!(r.b, 1);
    assert_eq!(r.height, 9);
    assert_eq!(r.valuations, vec![vec![(2, 3)], vec![], vec![(3, 2)]]);
}

#[test]
fn squaring_map_preserves_orbifold_points() {
    // with M empty the source has no points for m = 2 (no square is both a sum and a difference of squares)
    let ex: BTreeSet<u64> = [2, 3, 5, 7].into_iter().collect();
    for m in [2, 3, 4] {
        for excluded in [BTreeSet::new(), ex.clone()] {
            let (checked, bad) = squaring_compatibility(m, 1000, &excluded).unwrap();
            assert!(bad.is_empty(), "m = {m}: {bad:?}");
            if m == 2 && !excluded.is_empty() {
                assert!(checked > 0);
            }
        }
    }
}

#[test]
fn finiteness_counts_are_monotone() {
    for row in finiteness_report(&[100, 1000, 10000], 1).unwrap() {
        let counts: Vec<usize> = row.rungs.iter().map(|r| r.count).collect();
        assert!(counts.windows(2).all(|w| w[0] <= w[1]), "{}: {counts:?}", row.name);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn height_monotonicity(u in 2u32..5, v in 2u32..5, w in 2u32..5, h1 in 1u64..800, extra in 0u64..800) {
        let spec = ArithOrbifoldSpec::standard(u, v, w, BTreeSet::new()).unwrap();
        let small: BTreeSet<_> = enumerated(&spec, h1, 1).into_iter().collect();
        let large: BTreeSet<_> = enumerated(&spec, h1 + extra, 1).into_iter().collect();
        prop_assert!(small.is_subset(&large));
    }

    #[test]
    fn excluded_primes_monotonicity(u in 2u32..5, v in 2u32..5, w in 2u32..5, mask in 0u8..16) {
        let pool = [2u64, 3, 5, 7];
        let big: BTreeSet<u64> = pool.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, p)| *p).collect();
        let small: BTreeSet<u64> = big.iter().copied().filter(|&p| p != 2).collect();
        let s1 = ArithOrbifoldSpec::standard(u, v, w, small).unwrap();
        let s2 = ArithOrbifoldSpec::standard(u, v, w, big).unwrap();
        let p1: BTreeSet<_> = enumerated(&s1, 500, 1).into_iter().collect();
        let p2: BTreeSet<_> = enumerated(&s2, 500, 1).into_iter().collect();
        prop_assert!(p1.is_subset(&p2));
    }

    #[test]
    fn valuation_is_symmetric(a in -500i64..500, c in 1i64..500, pa in -50i64..50, pc in 0i64..50, v in prop::sample::select(vec![2u64, 3, 5, 7])) {
        prop_assume!(a != 0 || c != 0);
        prop_assume!(pa != 0 || pc != 0);
        let x = ProjectivePoint::new(a, c).unwrap();
        let p = ProjectivePoint::new(pa, pc).unwrap();
        prop_assert_eq!(intersection_valuation(&x, &p, v), intersection_valuation(&p, &x, v));
    }
}
