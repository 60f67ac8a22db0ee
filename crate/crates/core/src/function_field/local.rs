//! Local intersection count for `u(t,z) = p(z) + h(t,z)·(z − g(t))^m`.

use crate::algebra::{BiPoly, Poly, Q};
use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct LocalIntersectionReport {
    /// Lowest power of `t` in `u(t,z) − u(0,z)`, `None` if it vanishes.
    pub leading_t_order: Option<usize>,
    /// Roots near `z = 0` for small `t ≠ 0`: the order at `z = 0` of the
    /// lowest `t`-coefficient. `None` when `u(t,z) ≡ u(0,z)`.
    pub multiplicity: Option<usize>,
    pub g_vanishes: bool,
    /// `m` when `g ≡ 0`, `m − 1` otherwise.
    pub required: usize,
    pub holds: bool,
}

/// Counts the solutions of `u(t,z) = u(0,z)` near `z = 0` with multiplicity.
///
/// Writing `u(t,z) − u(0,z) = t^k·(D_k(z) + t·…)`, the Weierstrass
/// preparation theorem gives `ord_z D_k(0)` roots near the origin for every
/// small `t ≠ 0`. `h` is in the variables `(t, z)`.
pub fn local_intersection_lemma_check(p: &Poly<Q>, g: &Poly<Q>, h: &BiPoly<Q>, m: usize) -> Result<LocalIntersectionReport> {
    if h.coeff(0, 0) == Q::from_integer(0.into()) {
        return Err(Error::InvalidInput("h(0,0) must be nonzero".into()));
    }
    if g.coeff(0) != Q::from_integer(0.into()) {
        return Err(Error::InvalidInput("g(0) must vanish".into()));
    }
    // z − g(t) as a polynomial in (t, z)
    let shift = BiPoly::y() - BiPoly::from_x_poly(g);
    let u = BiPoly::from_y_poly(p) + h * &shift.pow(m as u32);
    let u0 = BiPoly::from_y_poly(&u.x_coefficient(0));
    let diff = u - u0;
    let g_vanishes = g.is_zero();
    let required = if g_vanishes { m } else { m.saturating_sub(1) };
    let leading = (0..=diff.degree_x().unwrap_or(0)).find(|&k| !diff.x_coefficient(k).is_zero());
    let leading = leading.filter(|_| !diff.is_zero());
    let multiplicity = leading.map(|k| diff.x_coefficient(k).low_order().expect("nonzero coefficient"));
    Ok(LocalIntersectionReport {
        leading_t_order: leading,
        multiplicity,
        g_vanishes,
        required,
        // identically equal graphs meet in infinitely many points
        holds: multiplicity.is_none_or(|n| n >= required),
    })
}
