//! Local intersection of sections of P^1 x P^1 -> P^1 given as pairs (A : C)
//! of polynomials, and the places of Q-bar where two sections meet.

use std::fmt;


use super::poly::Poly;
use super::scalar::{Q, Scalar};

/// A rational base point or the point at infinity.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Debug, Hash)]
pub enum Place {
    Finite(Q),
    Infinity,
}

impl fmt::Display for Place {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Place::Finite(q) => write!(f, "{q}"),
            Place::Infinity => f.write_str("inf"),
        }
    }
}

/// Order of contact, or `Identical` when the two sections coincide.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Contact {
    Finite(usize),
    Identical,
}

impl Contact {
    pub fn finite(self) -> Option<usize> {
        match self {
            Contact::Finite(n) => Some(n),
            Contact::Identical => None,
        }
    }
}

/// `A1·C2 − C1·A2`.
pub fn cross<F: Scalar>(a1: &Poly<F>, c1: &Poly<F>, a2: &Poly<F>, c2: &Poly<F>) -> Poly<F> {
    &(a1 * c2) - &(c1 * a2)
}

fn pair_degree<F: Scalar>(a: &Poly<F>, c: &Poly<F>) -> usize {
    a.degree_or_zero().max(c.degree_or_zero())
}

/// Order of vanishing of `a1·c2 − c1·a2` at `b`; at infinity the pairs are
/// read in the reversed coordinate, which gives `d1 + d2 − deg(cross)`.
pub fn resultant_free_contact(
    a1: &Poly<Q>,
    c1: &Poly<Q>,
    a2: &Poly<Q>,
    c2: &Poly<Q>,
    b: &Place,
) -> Contact {
    let w = cross(a1, c1, a2, c2);
    let Some(deg) = w.degree() else {
        return Contact::Identical;
    };
    match b {
        Place::Finite(x) => Contact::Finite(w.order_at(x).expect("nonzero cross")),
        Place::Infinity => Contact::Finite(pair_degree(a1, c1) + pair_degree(a2, c2) - deg),
    }
}

/// A Galois-stable set of places: one rational point, all roots of a
/// squarefree polynomial without rational roots, or infinity.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Debug)]
pub enum PlaceClass {
    Rational(Q),
    Conjugates(Poly<Q>),
    Infinity,
}

impl PlaceClass {
    /// Number of geometric points in the class.
    pub fn weight(&self) -> usize {
        match self {
            PlaceClass::Conjugates(f) => f.degree_or_zero(),
            _ => 1,
        }
    }

    pub fn place(&self) -> Option<Place> {
        match self {
            PlaceClass::Rational(q) => Some(Place::Finite(q.clone())),
            PlaceClass::Infinity => Some(Place::Infinity),
            PlaceClass::Conjugates(_) => None,
        }
    }
}

impl fmt::Display for PlaceClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PlaceClass::Rational(q) => write!(f, "{q}"),
            PlaceClass::Conjugates(p) => write!(f, "roots({p})"),
            PlaceClass::Infinity => f.write_str("inf"),
        }
    }
}

/// Every place where two distinct sections meet, with contact orders.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ContactDivisor {
    pub classes: Vec<(PlaceClass, usize)>,
}

impl ContactDivisor {
    /// Sum of contact orders over all geometric points.
    pub fn total(&self) -> usize {
        self.classes.iter().map(|(c, n)| c.weight() * n).sum()
    }

    pub fn at(&self, place: &PlaceClass) -> usize {
        self.classes.iter().find(|(c, _)| c == place).map_or(0, |(_, n)| *n)
    }
}

/// Splits a nonzero polynomial into classes of roots with equal
/// multiplicity; rational roots are listed individually.
pub fn root_classes(w: &Poly<Q>) -> Vec<(PlaceClass, usize)> {
    let mut out = Vec::new();
    for (i, f) in w.squarefree_decomposition().into_iter().enumerate() {
        if f.degree_or_zero() == 0 {
            continue;
        }
        let mut rest = f.monic();
        for (r, _) in f.rational_roots() {
            rest = rest.exact_div(&Poly::new(vec![-r.clone(), Q::from_i64(1)]));
            out.push((PlaceClass::Rational(r), i + 1));
        }
        if rest.degree_or_zero() > 0 {
            out.push((PlaceClass::Conjugates(rest), i + 1));
        }
    }
    out
}

/// Contact divisor of two sections; `None` when they are identical.
pub fn contact_divisor(a1: &Poly<Q>, c1: &Poly<Q>, a2: &Poly<Q>, c2: &Poly<Q>) -> Option<ContactDivisor> {
    let w = cross(a1, c1, a2, c2);
    if w.is_zero() {
        return None;
    }
    let mut classes = root_classes(&w);
    let inf = pair_degree(a1, c1) + pair_degree(a2, c2) - w.degree_or_zero();
    if inf > 0 {
        classes.push((PlaceClass::Infinity, inf));
    }
    classes.sort();
    Some(ContactDivisor { classes })
}

/// Pairwise coprime squarefree monic polynomials whose products generate the
/// same root sets as the inputs (a gcd-free basis).
pub fn coprime_basis(polys: &[Poly<Q>]) -> Vec<Poly<Q>> {
    let mut basis: Vec<Poly<Q>> = Vec::new();
    for p in polys {
        let mut pending = vec![p.squarefree_part().monic()];
        while let Some(f) = pending.pop() {
            if f.degree_or_zero() == 0 {
                continue;
            }
            let hit = basis.iter().position(|b| b.gcd(&f).degree_or_zero() > 0);
            match hit {
                None => basis.push(f),
                Some(k) => {
                    let b = basis.swap_remove(k);
                    let g = b.gcd(&f);
                    pending.push(g.clone());
                    pending.push(b.exact_div(&g).monic());
                    pending.push(f.exact_div(&g).monic());
                }
            }
        }
    }
    // Repeated gcds can leave duplicates of the same factor.
    basis.sort();
    basis.dedup();
    basis
}

/// Whether a polynomial class refines (is contained in) a class of the
/// divisor, and with which order.
pub fn contact_on(divisor: &ContactDivisor, class: &PlaceClass) -> usize {
    match class {
        PlaceClass::Conjugates(f) => divisor
            .classes
            .iter()
            .find_map(|(c, n)| match c {
                PlaceClass::Conjugates(g) if f.divides(g) => Some(*n),
                _ => None,
            })
            .unwrap_or(0),
        other => divisor.at(other),
    }
}


#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::scalar::q_int;

    fn p(cs: &[i64]) -> Poly<Q> {
        Poly::from_i64s(cs)
    }

    #[test]
    fn spec_examples() {
        let zero = Place::Finite(q_int(0));
        assert_eq!(resultant_free_contact(&p(&[0, 0, 1]), &p(&[1]), &p(&[]), &p(&[1]), &zero), Contact::Finite(2));
        assert_eq!(resultant_free_contact(&p(&[1]), &p(&[1]), &p(&[1]), &p(&[1]), &zero), Contact::Identical);
        assert_eq!(resultant_free_contact(&p(&[0, 1]), &p(&[1]), &p(&[0, 0, 1]), &p(&[1]), &zero), Contact::Finite(1));
    }

    #[test]
    fn infinity_and_bezout() {
        // t^2 meets 0 twice at t = 0 and never at infinity
        let d = contact_divisor(&p(&[0, 0, 1]), &p(&[1]), &p(&[]), &p(&[1])).unwrap();
        assert_eq!(d.at(&PlaceClass::Infinity), 0);
        assert_eq!(d.total(), 2);
        // 1/t^2 meets infinity twice at t = 0, and 1 at t = 1, -1
        let d = contact_divisor(&p(&[1]), &p(&[0, 0, 1]), &p(&[1]), &p(&[])).unwrap();
        assert_eq!(d.at(&PlaceClass::Rational(q_int(0))), 2);
        let d = contact_divisor(&p(&[1]), &p(&[0, 0, 1]), &p(&[1]), &p(&[1])).unwrap();
        assert_eq!(d.total(), 2);
        // t^2 + 1 against 0: a conjugate pair
        let d = contact_divisor(&p(&[1, 0, 1]), &p(&[1]), &p(&[]), &p(&[1])).unwrap();
        assert_eq!(d.classes.len(), 1);
        assert_eq!(d.total(), 2);
    }

    #[test]
    fn coprime_basis_splits() {
        let b = coprime_basis(&[p(&[-1, 0, 1]), p(&[-1, 1]), p(&[1, 0, 1])]);
        // x - 1, x + 1, x^2 + 1
        assert_eq!(b.len(), 3);
        for i in 0..b.len() {
            for j in i + 1..b.len() {
                assert_eq!(b[i].gcd(&b[j]).degree_or_zero(), 0);
            }
        }
    }
}
