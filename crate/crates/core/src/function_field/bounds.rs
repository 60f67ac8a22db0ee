//! Degree and height bounds for sections.

use num_traits::{Signed, ToPrimitive};

use super::{FunctionFieldSection, SectionConfig};
use crate::algebra::contact::{contact_divisor, cross};
use crate::algebra::scalar::q_floor;
use crate::algebra::{q_frac, q_int, Place, PlaceClass, Q};
use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct DegreeBound {
    pub epsilon: Q,
    /// `floor((2g − 2 + |M|)/ε)`, or 0 when no nonconstant section exists.
    pub bound: i64,
    /// `42·(2g − 2 + |M|)`.
    pub cap: i64,
    pub empty: bool,
}

/// Degree bound for nonconstant orbifold sections against `N` constant
/// marks, with `ε = (N − 2) − Σ 1/m_j`.
pub fn hurwitz_degree_bound(g_b: u32, card_m: u32, marks: &[u32]) -> Result<DegreeBound> {
    let epsilon = q_int(marks.len() as i64 - 2) - marks.iter().map(|&m| q_frac(1, m as i64)).sum::<Q>();
    if !epsilon.is_positive() {
        return Err(Error::NotGeneralType);
    }
    let numerator = 2 * g_b as i64 - 2 + card_m as i64;
    let cap = 42 * numerator;
    if numerator < 0 {
        return Ok(DegreeBound { epsilon, bound: 0, cap, empty: true });
    }
    let bound = q_floor(&(q_int(numerator) / epsilon.clone())).to_i64().expect("small bound");
    assert!(bound <= cap, "ε ≥ 1/42 forces bound ≤ 42·(2g − 2 + |M|)");
    Ok(DegreeBound { epsilon, bound, cap, empty: false })
}

/// `36(g_B − 1) + 3·m⁺·(2T + 4)`, the degree bound obtained from a
/// pluri-differential form whose poles have order at most `T`.
pub fn pluriform_degree_bound(g_b: u32, m_plus: u32, t: u32) -> i64 {
    36 * (g_b as i64 - 1) + 3 * m_plus as i64 * (2 * t as i64 + 4)
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct FibreRamification {
    /// Value of the section over which the fibre lies: 0, 1 or ∞.
    pub value: Place,
    /// `(class, r)` for each point of the fibre.
    pub points: Vec<(PlaceClass, usize)>,
    pub multiplicity: u32,
}

impl FibreRamification {
    pub fn point_count(&self) -> usize {
        self.points.iter().map(|(c, _)| c.weight()).sum()
    }

    pub fn index_sum(&self) -> usize {
        self.points.iter().map(|(c, r)| c.weight() * r).sum()
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct HurwitzCertificate {
    pub degree: usize,
    pub fibres: Vec<FibreRamification>,
    /// Degree of `A'C − AC'`: the ramification over finite base points.
    pub wronskian_degree: usize,
    /// Ramification index at `t = ∞`, from the reversed coordinate.
    pub r_infinity: usize,
    /// `−2` and `−2d + Σ_b (r(b) − 1)`.
    pub hurwitz_lhs: i64,
    pub hurwitz_rhs: i64,
    pub hurwitz_holds: bool,
    /// `Σ_{B'} r = 3d`.
    pub fibre_sums_hold: bool,
    /// `|B'|`, `Σ_{B'} (r − 1) = 3d − |B'|` and `Σ_{B'} (r − 1) ≤ Σ_B (r − 1)`.
    pub b_prime: usize,
    pub restricted_sum: usize,
    pub restricted_holds: bool,
    /// Points of `B'` where the tangency to the mark fails, and the estimate
    /// `|B'| ≤ |M_s| + d·(1/m_0 + 1/m_1 + 1/m_∞)` with that set as `M_s`.
    pub violations: usize,
    pub count_bound: Q,
    pub count_bound_holds: bool,
}

/// Ramification of `s̄ : P^1 → P^1` over 0, 1, ∞, checked against
/// Riemann–Hurwitz computed independently from the Wronskian.
pub fn verify_hurwitz_certificate(s: &FunctionFieldSection, marks: [u32; 3]) -> Result<HurwitzCertificate> {
    let d = s.degree();
    if d == 0 {
        return Err(Error::InvalidInput("section is constant".into()));
    }
    let cfg = SectionConfig::constant_marks(marks, vec![])?;
    let values = [Place::Finite(q_int(0)), Place::Finite(q_int(1)), Place::Infinity];
    let mut fibres = Vec::new();
    for ((p, m), value) in cfg.marks.iter().zip(values) {
        let div = contact_divisor(s.a(), s.c(), p.a(), p.c()).expect("nonconstant s differs from constants");
        fibres.push(FibreRamification { value, points: div.classes, multiplicity: *m });
    }

    let (a, c) = (s.a(), s.c());
    let w = &(&a.derivative() * c) - &(a * &c.derivative());
    let wronskian_degree = w.degree().expect("nonconstant map has nonzero Wronskian");
    // Reversed coordinate u = 1/t: s(1/u) = a_rev(u)/c_rev(u).
    let (ar, cr) = (a.reversed(d), c.reversed(d));
    let at_inf = if cr.coeff(0) == q_int(0) {
        FunctionFieldSection::infinity()
    } else {
        FunctionFieldSection::constant(ar.coeff(0) / cr.coeff(0))
    };
    let r_infinity = cross(&ar, &cr, at_inf.a(), at_inf.c()).low_order().expect("nonconstant");
    let hurwitz_lhs = -2;
    let hurwitz_rhs = -2 * d as i64 + wronskian_degree as i64 + r_infinity as i64 - 1;

    let fibre_sums_hold = fibres.iter().all(|f| f.index_sum() == d);
    let b_prime: usize = fibres.iter().map(FibreRamification::point_count).sum();
    let restricted_sum: usize = fibres.iter().map(|f| f.index_sum() - f.point_count()).sum();
    let total_ramification = wronskian_degree + r_infinity - 1;
    let violations: usize = fibres
        .iter()
        .map(|f| f.points.iter().filter(|(_, r)| (*r as u32) < f.multiplicity).map(|(c, _)| c.weight()).sum::<usize>())
        .sum();
    let count_bound = q_int(violations as i64) + q_int(d as i64) * marks.iter().map(|&m| q_frac(1, m as i64)).sum::<Q>();
    Ok(HurwitzCertificate {
        degree: d,
        fibres,
        wronskian_degree,
        r_infinity,
        hurwitz_lhs,
        hurwitz_rhs,
        hurwitz_holds: hurwitz_lhs == hurwitz_rhs,
        fibre_sums_hold,
        b_prime,
        restricted_sum,
        restricted_holds: restricted_sum == 3 * d - b_prime && restricted_sum <= total_ramification,
        violations,
        count_bound_holds: q_int(b_prime as i64) <= count_bound,
        count_bound,
    })
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct HeightBounds {
    pub ev_bound: i64,
    pub isotrivial_bound: i64,
    pub l_bound: i64,
}

/// `4(g − 1)²(q − 1 + σ)`, `2(q − 1)` and `4(g − 1)²(q − 1 + σ) + 2mq`.
pub fn height_bounds(g_fiber: u32, q: u32, sigma: u32, m: u32) -> Result<HeightBounds> {
    if g_fiber < 2 || m < 1 {
        return Err(Error::InvalidInput("need fibre genus ≥ 2 and m ≥ 1".into()));
    }
    let g1 = g_fiber as i64 - 1;
    let ev_bound = 4 * g1 * g1 * (q as i64 - 1 + sigma as i64);
    Ok(HeightBounds {
        ev_bound,
        isotrivial_bound: 2 * (q as i64 - 1),
        l_bound: ev_bound + 2 * m as i64 * q as i64,
    })
}
