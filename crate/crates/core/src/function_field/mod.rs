//! Sections of P^1 x B -> B for B = P^1, written as pairs (A(t) : C(t)),
//! and orbifold tangency against marked sections.

mod bounds;
mod local;
mod profile;

pub use bounds::{
    height_bounds, hurwitz_degree_bound, pluriform_degree_bound, verify_hurwitz_certificate, DegreeBound,
    FibreRamification, HeightBounds, HurwitzCertificate,
};
pub use local::{local_intersection_lemma_check, LocalIntersectionReport};
pub use profile::{branches_bound, star_inequality, BranchesReport, ContactProfile, ProfileEntry, StarReport};

use std::fmt;

use serde_json::{json, Value};

use crate::algebra::contact::{contact_divisor, cross, ContactDivisor};
use crate::algebra::{q_int, resultant_free_contact, Contact, Place, PlaceClass, Poly, Scalar, Q};
use crate::error::{invalid, Error, Result};
use crate::report::{poly_from_json, poly_to_json};

/// `t ↦ (A(t) : C(t))` with `gcd(A, C) = 1`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct FunctionFieldSection {
    a: Poly<Q>,
    c: Poly<Q>,
}

impl FunctionFieldSection {
    /// Builds the section, cancelling any common factor.
    pub fn new(a: Poly<Q>, c: Poly<Q>) -> Result<Self> {
        if a.is_zero() && c.is_zero() {
            return Err(invalid("section (0 : 0)"));
        }
        let g = a.gcd(&c);
        if g.degree_or_zero() == 0 {
            return Ok(FunctionFieldSection { a, c });
        }
        Ok(FunctionFieldSection { a: a.exact_div(&g), c: c.exact_div(&g) })
    }

    pub fn polynomial(a: Poly<Q>) -> Self {
        FunctionFieldSection::new(a, Poly::one()).expect("C = 1")
    }

    pub fn constant(q: Q) -> Self {
        FunctionFieldSection::polynomial(Poly::constant(q))
    }

    pub fn infinity() -> Self {
        FunctionFieldSection { a: Poly::one(), c: Poly::zero() }
    }

    pub fn a(&self) -> &Poly<Q> {
        &self.a
    }

    pub fn c(&self) -> &Poly<Q> {
        &self.c
    }

    /// Degree of the map `B → P^1`.
    pub fn degree(&self) -> usize {
        self.a.degree_or_zero().max(self.c.degree_or_zero())
    }

    pub fn is_constant(&self) -> bool {
        self.degree() == 0
    }

    pub fn same_as(&self, other: &Self) -> bool {
        cross(&self.a, &self.c, &other.a, &other.c).is_zero()
    }

    /// Value at a rational place, `None` meaning infinity.
    pub fn value_at(&self, b: &Place) -> Option<Q> {
        match b {
            Place::Finite(x) => {
                let c = self.c.eval(x);
                if c == Q::from_i64(0) {
                    None
                } else {
                    Some(self.a.eval(x) / c)
                }
            }
            Place::Infinity => {
                let d = self.degree();
                let (a, c) = (self.a.coeff(d), self.c.coeff(d));
                if c == Q::from_i64(0) {
                    None
                } else {
                    Some(a / c)
                }
            }
        }
    }

    pub fn to_json(&self) -> Value {
        json!({"A": poly_to_json(&self.a), "C": poly_to_json(&self.c)})
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let a = poly_from_json(v.get("A").ok_or_else(|| invalid("section needs \"A\""))?)?;
        let c = poly_from_json(v.get("C").ok_or_else(|| invalid("section needs \"C\""))?)?;
        FunctionFieldSection::new(a, c)
    }

    pub(crate) fn contact_divisor_with(&self, other: &Self) -> Option<ContactDivisor> {
        contact_divisor(&self.a, &self.c, &other.a, &other.c)
    }
}

impl fmt::Display for FunctionFieldSection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}) : ({})", self.a, self.c)
    }
}

/// `ord_b(A_s·C_p − C_s·A_p)`.
pub fn contact_order(s: &FunctionFieldSection, p: &FunctionFieldSection, b: &Place) -> Result<usize> {
    match resultant_free_contact(&s.a, &s.c, &p.a, &p.c, b) {
        Contact::Finite(n) => Ok(n),
        Contact::Identical => Err(Error::IdenticalSections),
    }
}

/// Marked sections with multiplicities, and the bad places `M`.
#[derive(Clone, Debug)]
pub struct SectionConfig {
    pub marks: Vec<(FunctionFieldSection, u32)>,
    pub base_genus: u32,
    /// Each class is a rational place, infinity, or all roots of a
    /// squarefree polynomial without rational roots.
    pub bad: Vec<PlaceClass>,
}

impl SectionConfig {
    /// Checks the normal form: marks start with the constants 0, 1, ∞, are
    /// pairwise distinct and have multiplicity at least 2.
    pub fn new(marks: Vec<(FunctionFieldSection, u32)>, bad: Vec<PlaceClass>) -> Result<Self> {
        if marks.len() < 3 {
            return Err(invalid("need at least the three marks 0, 1, inf"));
        }
        let normal = [
            FunctionFieldSection::constant(q_int(0)),
            FunctionFieldSection::constant(q_int(1)),
            FunctionFieldSection::infinity(),
        ];
        for (k, want) in normal.iter().enumerate() {
            if !marks[k].0.same_as(want) {
                return Err(invalid(format!("mark {} must be the constant section {}", k + 1, ["0", "1", "inf"][k])));
            }
        }
        for (i, (s, m)) in marks.iter().enumerate() {
            if *m < 2 {
                return Err(invalid(format!("mark {} has multiplicity {m} < 2", i + 1)));
            }
            if marks[..i].iter().any(|(t, _)| t.same_as(s)) {
                return Err(invalid(format!("mark {} repeats an earlier mark", i + 1)));
            }
        }
        for class in &bad {
            if let PlaceClass::Conjugates(f) = class {
                if f.degree_or_zero() == 0 || !f.rational_roots().is_empty() || f.gcd(&f.derivative()).degree_or_zero() > 0 {
                    return Err(invalid("a bad conjugate class must be squarefree without rational roots"));
                }
            }
        }
        let mut bad = bad;
        bad.sort();
        bad.dedup();
        Ok(SectionConfig { marks, base_genus: 0, bad })
    }

    /// Constant marks `0, 1, ∞` with the given multiplicities.
    pub fn constant_marks(ms: [u32; 3], bad: Vec<PlaceClass>) -> Result<Self> {
        SectionConfig::new(
            vec![
                (FunctionFieldSection::constant(q_int(0)), ms[0]),
                (FunctionFieldSection::constant(q_int(1)), ms[1]),
                (FunctionFieldSection::infinity(), ms[2]),
            ],
            bad,
        )
    }

    pub fn multiplicities(&self) -> Vec<u32> {
        self.marks.iter().map(|(_, m)| *m).collect()
    }

    /// Number of geometric points in `M`.
    pub fn bad_count(&self) -> usize {
        self.bad.iter().map(PlaceClass::weight).sum()
    }

    pub(crate) fn is_bad(&self, class: &PlaceClass) -> bool {
        match class {
            PlaceClass::Conjugates(g) => self.bad.iter().any(|c| matches!(c, PlaceClass::Conjugates(f) if g.divides(f))),
            other => self.bad.contains(other),
        }
    }
}

/// A place class where `s` meets `p_j` with order strictly between 0 and `m_j`
/// outside `M`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct TangencyViolation {
    pub mark: usize,
    pub class: PlaceClass,
    pub order: usize,
}

pub fn tangency_violations(s: &FunctionFieldSection, cfg: &SectionConfig) -> Result<Vec<TangencyViolation>> {
    let profile = ContactProfile::build(s, cfg)?;
    let mut out = Vec::new();
    for e in profile.entries.iter().filter(|e| !e.in_m) {
        for &(j, t) in &e.contacts {
            if t > 0 && (t as u32) < cfg.marks[j].1 {
                out.push(TangencyViolation { mark: j, class: e.class.clone(), order: t });
            }
        }
    }
    Ok(out)
}

/// Every contact with `p_j` outside `M` has order 0 or at least `m_j`.
pub fn is_orbifold_section(s: &FunctionFieldSection, cfg: &SectionConfig) -> Result<bool> {
    Ok(tangency_violations(s, cfg)?.is_empty())
}
