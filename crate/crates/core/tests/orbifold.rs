use std::collections::BTreeMap;

use num_integer::Integer;
use orbicurve::algebra::Q;
use orbicurve::orbifold::*;
use proptest::prelude::*;

fn degree_by_hand(genus: u32, ms: &[u32]) -> Q {
    let mut d = Q::from_integer((2 * genus as i64 - 2).into());
    for &m in ms {
        d += Q::new((m as i64 - 1).into(), (m as i64).into());
    }
    d
}

fn mark(label: &str, m: u32) -> Mark {
    Mark { label: label.into(), m }
}

/// `z ↦ z^n`, with marks `n` at 0 and ∞ downstairs, `k` at 1 downstairs and
/// `k` at every `n`-th root of unity upstairs.
fn power_map(n: u32, k: u32) -> (RamificationData, OrbifoldCurve, OrbifoldCurve) {
    let roots: Vec<String> = (0..n).map(|i| format!("w{i}")).collect();
    let mut fibers = BTreeMap::new();
    fibers.insert("0".to_string(), vec![("0".to_string(), n)]);
    fibers.insert("inf".to_string(), vec![("inf".to_string(), n)]);
    fibers.insert("1".to_string(), roots.iter().map(|r| (r.clone(), 1)).collect());
    let r = RamificationData { degree: n, source_genus: 0, target_genus: 0, fibers };
    let src = OrbifoldCurve::new(0, OrbifoldDivisor::new(roots.iter().map(|r| mark(r, k)).collect()).unwrap());
    let tgt = OrbifoldCurve::new(0, OrbifoldDivisor::new(vec![mark("0", n), mark("1", k), mark("inf", n)]).unwrap());
    (r, src, tgt)
}

fn marks() -> impl Strategy<Value = Vec<u32>> {
    prop::collection::vec(2u32..=12, 0..7)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn degree_matches_the_formula(genus in 0u32..4, ms in marks()) {
        let c = OrbifoldCurve::new(genus, OrbifoldDivisor::from_multiplicities(&ms).unwrap());
        prop_assert_eq!(canonical_degree(&c), degree_by_hand(genus, &ms));
    }

    #[test]
    fn domination_is_monotone(genus in 0u32..3, ms in marks(), bumps in prop::collection::vec(0u32..4, 7), drop in 0usize..3) {
        // raise some multiplicities and add marks: the result dominates the original
        let mut big: Vec<u32> = ms.iter().zip(&bumps).map(|(m, b)| m + b).collect();
        big.extend(std::iter::repeat_n(2, drop));
        let small = OrbifoldDivisor::from_multiplicities(&ms).unwrap();
        let large = OrbifoldDivisor::from_multiplicities(&big).unwrap();
        prop_assert!(dominates(&large, &small));
        let dl = canonical_degree(&OrbifoldCurve::new(genus, large));
        let ds = canonical_degree(&OrbifoldCurve::new(genus, small));
        prop_assert!(dl >= ds);
    }

    #[test]
    fn fibre_multiplicities_divide(fibres in prop::collection::vec(prop::collection::vec(1u32..=30, 1..6), 1..5), genus in 0u32..3) {
        let map: BTreeMap<String, Vec<u32>> = fibres.iter().enumerate().map(|(i, f)| (format!("p{i}"), f.clone())).collect();
        let data = FiberData::new(map).unwrap();
        for (label, ms) in &data.fibers {
            let (m, m_star) = fiber_multiplicities(&data, label).unwrap();
            prop_assert_eq!(m, *ms.iter().min().unwrap());
            prop_assert_eq!(m_star, ms.iter().fold(0, |g, x| g.gcd(x)));
            prop_assert_eq!(m % m_star, 0);
        }
        let (delta, star) = base_orbifold(&data);
        let d = canonical_degree(&OrbifoldCurve::new(genus, delta));
        let ds = canonical_degree(&OrbifoldCurve::new(genus, star));
        prop_assert!(ds <= d);
    }

    #[test]
    fn etale_maps_scale_the_degree(n in 2u32..9, k in 2u32..9) {
        let (r, src, tgt) = power_map(n, k);
        prop_assert!(is_etale(&r, &src, &tgt).unwrap());
        prop_assert!(is_orbifold_morphism(&r, &src, &tgt).unwrap());
        prop_assert_eq!(canonical_degree(&src), canonical_degree(&tgt) * Q::from_integer(n.into()));
    }
}

#[test]
fn morphism_but_not_etale() {
    // dropping the marks upstairs keeps a morphism only where r·Δ(x) ≥ Δ(g(x)) still holds
    let (r, _, tgt) = power_map(3, 2);
    let bare = OrbifoldCurve::new(0, OrbifoldDivisor::default());
    assert!(!is_orbifold_morphism(&r, &bare, &tgt).unwrap());
    let (_, src, _) = power_map(3, 2);
    let weaker = OrbifoldCurve::new(0, OrbifoldDivisor::new(vec![mark("0", 2), mark("inf", 3)]).unwrap());
    assert!(is_orbifold_morphism(&r, &src, &weaker).unwrap());
    assert!(!is_etale(&r, &src, &weaker).unwrap());
}

#[test]
fn inconsistent_ramification_is_rejected() {
    let (mut r, src, tgt) = power_map(3, 2);
    r.fibers.get_mut("1").unwrap().pop();
    assert!(is_etale(&r, &src, &tgt).is_err());
    let (mut r, src, tgt) = power_map(3, 2);
    r.source_genus = 1;
    assert!(is_etale(&r, &src, &tgt).is_err());
}
