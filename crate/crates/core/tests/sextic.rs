use num_traits::{One, Zero};
use orbicurve::algebra::{BiPoly, Qi, Scalar, Q};
use orbicurve::orbifold::{fiber_multiplicities, FiberData};
use orbicurve::sextic::*;
use proptest::prelude::*;

fn q(n: i64) -> Q {
    Q::from_integer(n.into())
}

fn qf(n: i64, d: i64) -> Q {
    Q::new(n.into(), d.into())
}

fn qi(re: Q, im: Q) -> Qi {
    Qi::new(re, im)
}

/// Roots picked so that all 26 base points have Gaussian-rational
/// coordinates: `t`, `d` are ± squares and `l` is ±2 times a square.
fn gaussian_fixture() -> Ghk {
    Ghk::from_roots(vec![q(1), q(4)], vec![q(2), q(72), q(-8)], vec![q(9), q(36), qf(1, 4)]).unwrap()
}

/// Lowest total degree of `H(x₀ + X, y₀ + Y)`: the multiplicity by Taylor shift.
fn shifted_multiplicity(h: &BiPoly<Qi>, x0: &Qi, y0: &Qi) -> usize {
    let x = BiPoly::x() + BiPoly::constant(x0.clone());
    let y = BiPoly::y() + BiPoly::constant(y0.clone());
    let shifted = h.substitute(&x, &y);
    shifted.terms().map(|((i, j), _)| i + j).min().unwrap()
}

#[test]
fn pointwise_multiplicities_of_the_pullback() {
    let report = construct_from(gaussian_fixture()).unwrap();
    let h: BiPoly<Qi> = report.h.map(Qi::from_q);
    let z = Qi::zero();
    let re = |n: Q| qi(n, Q::zero());
    let mut triple = Vec::new();
    for a in [q(1), q(2)] {
        for s in [a.clone(), -a] {
            triple.push((re(s.clone()), z.clone()));
            triple.push((z.clone(), re(s)));
        }
    }
    let mut double = Vec::new();
    for a in [q(3), q(6), qf(1, 2)] {
        for s in [a.clone(), -a] {
            double.push((re(s.clone()), re(s)));
        }
    }
    // x² = −i·l on Y = iX
    for x in [qi(q(1), q(-1)), qi(q(6), q(-6)), qi(q(2), q(2))] {
        for s in [x.clone(), -x] {
            let y = Qi::i() * s.clone();
            double.push((s.conj(), y.conj()));
            double.push((s, y));
        }
    }
    assert_eq!(triple.len() + double.len(), 26);
    for (x, y) in &triple {
        assert_eq!(shifted_multiplicity(&h, x, y), 3, "({x}, {y})");
    }
    for (x, y) in &double {
        assert_eq!(shifted_multiplicity(&h, x, y), 2, "({x}, {y})");
    }
    assert_eq!(report.base.count, 26);
}

#[test]
fn restrictions_agree_at_sample_points() {
    let ghk = gaussian_fixture();
    let s1 = build_s1(&ghk).unwrap();
    for n in -10..=10 {
        let x = qf(n, 3);
        assert_eq!(s1.eval(&x, &Q::zero()), ghk.g.eval(&x).pow(3));
        assert_eq!(s1.eval(&Q::zero(), &x), ghk.h.eval(&x).pow(2));
        assert_eq!(s1.eval(&(q(2) * &x), &x), ghk.k.eval(&x).pow(2));
    }
}

#[test]
fn pullback_matches_substitution_pointwise() {
    let report = run_pipeline(7).unwrap();
    let s = report.s();
    for (a, b) in [(1, 2), (-3, 5), (7, -1), (0, 4), (2, 2)] {
        let (x, y) = (qf(a, 3), qf(b, 2));
        let u = &x * &x + &y * &y;
        let v = &x * &y;
        assert_eq!(report.h.eval(&x, &y), s.eval(&u, &v));
    }
}

#[test]
fn nine_form_kernel_both_directions() {
    let ghk = gaussian_fixture();
    let m = nine_forms_matrix(&ghk);
    let uv2 = BiPoly::monomial(Q::one(), 1, 2);
    // u v² satisfies every form
    let z = Q::zero();
    for t in &ghk.t {
        assert!(uv2.eval(t, &z).is_zero());
        assert!(uv2.dx().eval(t, &z).is_zero());
        assert!(uv2.dy().eval(t, &z).is_zero());
    }
    for l in &ghk.l {
        assert!(uv2.eval(&z, l).is_zero());
    }
    assert_eq!(m.rank(), 9);
    assert_eq!(m.kernel_basis().len(), 1);
}

#[test]
fn tangency_to_d_lifts_to_double_points() {
    let report = run_pipeline(11).unwrap();
    let d_entries = report.perturbed.profile.entries.iter().filter(|e| e.curve == "D").count();
    let d_line = report.lines.iter().find(|r| r.name == "D'").unwrap();
    assert_eq!(d_entries, 3);
    assert_eq!(d_line.distinct_points, 2 * d_entries);
    assert!(d_line.contact_orders.iter().all(|&c| c == 2));
}

#[test]
fn corrupted_sextic_is_rejected() {
    let ghk = gaussian_fixture();
    let s1 = build_s1(&ghk).unwrap();
    // S1 alone generally lacks the triple points
    let (_, profile) = verify_sextic(&s1, &ghk);
    assert!(!profile.all_verified());
    let nine = nine_forms_and_correction(&s1, &ghk).unwrap();
    let p = perturb_and_verify(&nine.s2, &ghk).unwrap();
    let broken = p.s.clone() + BiPoly::monomial(Q::one(), 0, 3);
    let (_, profile) = verify_sextic(&broken, &ghk);
    assert!(!profile.all_verified());
}

#[test]
fn fibre_wiring() {
    let report = run_pipeline(7).unwrap();
    let data = FiberData::new([("inf".to_string(), vec![2, 2, 2, 3, 3])].into_iter().collect()).unwrap();
    assert_eq!(report.base.multiple_fibre, fiber_multiplicities(&data, "inf").unwrap());
    assert_eq!(report.base.multiple_fibre, (2, 1));
    assert_eq!(report.fibre, FibreNumbers { k_dot_f: 24, f_sq: 0, genus: 13 });
}

#[test]
fn t_prime_restriction_is_a_cube() {
    let report = run_pipeline(5).unwrap();
    let t = report.lines.iter().find(|r| r.name == "T'").unwrap();
    let cube = t.points.pow(3).scale(&t.restriction.leading());
    assert_eq!(cube, t.restriction);
}

#[test]
fn json_report_is_complete() {
    let v = run_pipeline(7).unwrap().to_json();
    assert_eq!(v["base_point_count"], 26);
    assert_eq!(v["H_degree"], 12);
    assert_eq!(v["multiple_fiber"]["m"], 2);
    assert_eq!(v["multiple_fiber"]["m_star"], 1);
    assert_eq!(v["nine_forms"]["rank"], 9);
    assert!(v["S"].as_array().unwrap().len() > 10);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn pipeline_is_deterministic_and_verified(seed in 0u64..10_000) {
        let a = run_pipeline(seed).unwrap();
        let b = run_pipeline(seed).unwrap();
        prop_assert_eq!(a.to_json(), b.to_json());
        prop_assert!(a.perturbed.misses_a && a.perturbed.profile.all_verified());
        prop_assert!(a.h_profile.all_verified());
        prop_assert_eq!(restrict_t(&a.s1), a.ghk.g.pow(3));
        prop_assert_eq!(restrict_l(&a.s1), a.ghk.h.pow(2));
        prop_assert_eq!(restrict_d(&a.s1), a.ghk.k.pow(2));
        prop_assert_eq!(a.base.count, 26);
    }

    #[test]
    fn invariant_formulas_hold(m in 1u64..200) {
        let inv = invariants(m).unwrap();
        let mb = num_bigint::BigInt::from(m);
        prop_assert_eq!(inv.c1_sq.clone(), &mb * &mb * 96 - &mb * 113);
        prop_assert_eq!(inv.c2.clone(), &mb * &mb * 48 - &mb * 19);
        if m >= 5 {
            prop_assert!(ratio_in_window(&inv.ratio));
        }
    }
}
