use num_traits::Zero;
use orbicurve::algebra::{BiPoly, Poly, Q};
use orbicurve::pluriform::*;
use proptest::prelude::*;

fn q(n: i64, d: i64) -> Q {
    Q::new(n.into(), d.into())
}

/// `P_k(x, y)` as a bivariate polynomial, keeping `x`-orders below the form's precision.
fn as_bipoly(form: &PluriForm, k: usize) -> BiPoly<Q> {
    let mut out = BiPoly::zero();
    for n in 0..form.series.len() {
        for (j, c) in form.coefficient(k, n).coeffs().iter().enumerate() {
            out.add_term(n, j, c.clone());
        }
    }
    out
}

/// `y`-derivatives of `P` up to order `h`, all vanishing at `y = y0(x)` modulo `x^prec`.
fn vanishes_along(p: &BiPoly<Q>, y0: &Poly<Q>, h: i64, prec: usize) -> bool {
    (0..=h).all(|i| {
        let along = p.partial(0, i as usize).along(&Poly::x(), y0);
        along.coeffs().iter().take(prec).all(Zero::is_zero)
    })
}

/// Independent check of the moving-mark conditions: substitute `y = z + p(x)`
/// into every `P_j`, expand `(dz + p' dx)^{e − j}` by repeated multiplication,
/// and read off the `dx^k dz^{e − k}` coefficient `Q_k(x, z)`.
fn moving_mark_holds(form: &PluriForm, p: &Poly<Q>) -> bool {
    let kind = form.kind;
    let e = kind.exponent();
    let prec = form.x_precision as usize;
    let slope = BiPoly::from_x_poly(&p.derivative());
    let shifted_y = BiPoly::y() + BiPoly::from_x_poly(p);
    let pulled: Vec<BiPoly<Q>> = (0..=e).map(|j| as_bipoly(form, j).substitute(&BiPoly::x(), &shifted_y)).collect();
    // powers[n][i]: coefficient of dx^i dz^{n − i} in (dz + p' dx)^n
    let mut powers = vec![vec![BiPoly::constant(Q::from_integer(1.into()))]];
    for n in 1..=e {
        let prev = &powers[n - 1];
        let mut next = vec![BiPoly::zero(); n + 1];
        for (i, c) in prev.iter().enumerate() {
            next[i] = next[i].clone() + c.clone();
            next[i + 1] = next[i + 1].clone() + &slope * c;
        }
        powers.push(next);
    }
    (1..=e).all(|k| {
        let mut qk = BiPoly::zero();
        for j in 0..=k {
            qk = qk + &pulled[j] * &powers[e - j][k - j];
        }
        vanishes_along(&qk, &Poly::zero(), kind.a()[k], prec)
    })
}

fn admissible(p0: &Q, others: &[Q]) -> bool {
    !p0.is_zero() && *p0 != q(1, 1) && !others.contains(p0)
}

fn small_q() -> impl Strategy<Value = Q> {
    (-40i64..=40, 1i64..=12).prop_map(|(n, d)| q(n, d))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn w6_kernel_and_conditions_by_definition(p0 in small_q(), p1 in small_q()) {
        prop_assume!(admissible(&p0, &[]));
        let sys = build_w6_system(&p0, &p1).unwrap();
        prop_assert_eq!((sys.matrix.rows(), sys.matrix.cols()), (43, 44));
        prop_assert!(!sys.kernel.is_empty());
        prop_assert_eq!(sys.rank + sys.kernel.len(), 44);
        for v in &sys.kernel {
            prop_assert!(sys.matrix.mul_vec(v).iter().all(Zero::is_zero));
            let form = sys.extend(v, 5).unwrap();
            let prec = form.x_precision as usize;
            for k in 0..=6 {
                let pk = as_bipoly(&form, k);
                prop_assert!(vanishes_along(&pk, &Poly::one(), FormKind::W6.a()[k], prec), "y = 1, k = {}", k);
                prop_assert!(vanishes_along(&pk, &Poly::zero(), FormKind::W6.b()[k], prec), "y = 0, k = {}", k);
            }
            prop_assert!(moving_mark_holds(&form, &linear_mark(&p0, &p1)));
        }
    }

    #[test]
    fn w4_kernel_and_conditions_by_definition(p0 in small_q(), p1 in small_q(), q0 in small_q(), q1 in small_q()) {
        prop_assume!(admissible(&p0, &[]) && admissible(&q0, &[p0.clone()]));
        let sys = build_w4_system(&p0, &p1, &q0, &q1).unwrap();
        prop_assert_eq!((sys.matrix.rows(), sys.matrix.cols()), (27, 29));
        prop_assert!(sys.kernel.len() >= 2);
        for v in &sys.kernel {
            prop_assert!(sys.matrix.mul_vec(v).iter().all(Zero::is_zero));
            let form = sys.extend(v, 4).unwrap();
            prop_assert!(moving_mark_holds(&form, &linear_mark(&p0, &p1)));
            prop_assert!(moving_mark_holds(&form, &linear_mark(&q0, &q1)));
        }
    }
}

#[test]
fn constant_model_misses_the_moving_conditions() {
    // the x-independent form satisfies the conditions at x = 0 only
    let p = linear_mark(&q(2, 1), &q(1, 1));
    let sys = build_w6_system(&q(2, 1), &q(1, 1)).unwrap();
    assert!(moving_mark_holds(&sys.extend(&sys.kernel[0], 4).unwrap(), &p));
    let constant = sys.constant_form(&sys.kernel[0]);
    let mut series = vec![vec![Q::zero(); 44]; 4];
    series[0] = constant.series[0].clone();
    let constant = PluriForm { series, x_precision: 4, ..constant };
    assert!(!moving_mark_holds(&constant, &p));
}

#[test]
fn corrupted_form_is_caught_by_the_definition() {
    let sys = build_w6_system(&q(3, 1), &q(-2, 1)).unwrap();
    let form = sys.extend(&sys.kernel[0], 3).unwrap();
    let bad = form.perturbed(FormKind::W6.offset(6) + 2);
    assert!(!vanishes_along(&as_bipoly(&bad, 6), &Poly::zero(), FormKind::W6.b()[6], bad.x_precision as usize));
}

#[test]
fn zero_order_bounds() {
    for r in 3..12 {
        assert_eq!(zero_order_bound(FormKind::W6, r), ((r - 1) as f64 / 2.0).ceil() as i64);
    }
    for r in 2..12 {
        assert_eq!(zero_order_bound(FormKind::W4, r), (r as f64 / 2.0).ceil() as i64);
    }
}

#[test]
fn suite_passes_on_extended_forms() {
    let sys = build_w4_system(&q(-1, 1), &q(1, 2), &q(5, 3), &q(0, 1)).unwrap();
    let report = verify_conditions_suite(&sys, 4, 99, 16, 1).unwrap();
    assert!(report.all_passed(), "{:?}", report.failures);
    assert_eq!(report, verify_conditions_suite(&sys, 4, 99, 16, 3).unwrap());
}
