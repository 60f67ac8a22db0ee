//! Orbifold divisors on curves, their canonical degree and Kodaira class,
//! orbifold morphisms, and the base orbifold of a fibration.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_integer::Integer;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::algebra::{q_frac, q_int, Q};
use crate::error::{invalid, Error, Result};

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct Mark {
    #[serde(rename = "p")]
    pub label: String,
    pub m: u32,
}

/// `Σ (1 − 1/m_j)·p_j` with opaque point labels.
#[derive(Clone, PartialEq, Eq, Debug, Default, Serialize, Deserialize)]
pub struct OrbifoldDivisor {
    pub marks: Vec<Mark>,
}

impl OrbifoldDivisor {
    pub fn new(marks: Vec<Mark>) -> Result<Self> {
        let mut seen = BTreeSet::new();
        for mk in &marks {
            if mk.m < 2 {
                return Err(invalid(format!("multiplicity {} at {} is below 2", mk.m, mk.label)));
            }
            if !seen.insert(mk.label.as_str()) {
                return Err(invalid(format!("duplicate point label {}", mk.label)));
            }
        }
        Ok(OrbifoldDivisor { marks })
    }

    /// Labels the marks `p1, p2, ...` in the given order.
    pub fn from_multiplicities(ms: &[u32]) -> Result<Self> {
        Self::new(
            ms.iter()
                .enumerate()
                .map(|(i, &m)| Mark { label: format!("p{}", i + 1), m })
                .collect(),
        )
    }

    pub fn multiplicities(&self) -> Vec<u32> {
        self.marks.iter().map(|mk| mk.m).collect()
    }

    /// Multiplicity at a label; 1 off the support.
    pub fn at(&self, label: &str) -> u32 {
        self.marks.iter().find(|mk| mk.label == label).map_or(1, |mk| mk.m)
    }

    pub fn len(&self) -> usize {
        self.marks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.marks.is_empty()
    }

    /// `Σ (1 − 1/m_j)`.
    pub fn weight(&self) -> Q {
        self.marks.iter().map(|mk| q_int(1) - q_frac(1, mk.m as i64)).sum()
    }
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct OrbifoldCurve {
    pub genus: u32,
    #[serde(flatten)]
    pub delta: OrbifoldDivisor,
}

impl OrbifoldCurve {
    pub fn new(genus: u32, delta: OrbifoldDivisor) -> Self {
        OrbifoldCurve { genus, delta }
    }

    pub fn rational(ms: &[u32]) -> Result<Self> {
        Ok(OrbifoldCurve::new(0, OrbifoldDivisor::from_multiplicities(ms)?))
    }
}

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Debug)]
pub enum KodairaClass {
    MinusInfinity,
    Zero,
    One,
}

impl fmt::Display for KodairaClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            KodairaClass::MinusInfinity => "-inf",
            KodairaClass::Zero => "0",
            KodairaClass::One => "1",
        })
    }
}

/// `2g − 2 + Σ (1 − 1/m_j)`.
pub fn canonical_degree(c: &OrbifoldCurve) -> Q {
    q_int(2 * c.genus as i64 - 2) + c.delta.weight()
}

pub fn kodaira_dimension(c: &OrbifoldCurve) -> KodairaClass {
    let d = canonical_degree(c);
    if d.is_positive() {
        KodairaClass::One
    } else if d.is_zero() {
        KodairaClass::Zero
    } else {
        KodairaClass::MinusInfinity
    }
}

fn sorted_desc(d: &OrbifoldDivisor) -> Vec<u32> {
    let mut v = d.multiplicities();
    v.sort_unstable_by(|a, b| b.cmp(a));
    v
}

/// Pointwise domination through some injection of the target marks into the
/// source marks. Both lists sorted descending, then compared entry by entry.
pub fn dominates(src: &OrbifoldDivisor, tgt: &OrbifoldDivisor) -> bool {
    let s = sorted_desc(src);
    let t = sorted_desc(tgt);
    t.len() <= s.len() && s.iter().zip(&t).all(|(a, b)| a >= b)
}

/// The minimal general-type orbifold divisors on the projective line.
pub const MINIMAL_GENERAL_TYPE: [&[u32]; 5] = [&[2, 3, 7], &[2, 4, 5], &[3, 3, 4], &[2, 2, 2, 3], &[2, 2, 2, 2, 2]];

pub fn is_general_type_via_five(d: &OrbifoldDivisor) -> bool {
    MINIMAL_GENERAL_TYPE.iter().any(|ms| {
        let five = OrbifoldDivisor::from_multiplicities(ms).expect("valid");
        dominates(d, &five)
    })
}

/// A finite map of curves described by its nontrivial fibres.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct RamificationData {
    pub degree: u32,
    pub source_genus: u32,
    pub target_genus: u32,
    /// Target label ↦ list of (source label, ramification index).
    pub fibers: BTreeMap<String, Vec<(String, u32)>>,
}

impl RamificationData {
    /// Checks fibre sums, distinctness of source labels and Riemann–Hurwitz.
    pub fn validate(&self) -> Result<()> {
        if self.degree == 0 {
            return Err(Error::InconsistentRamification("degree 0".into()));
        }
        let mut owner: BTreeMap<&str, &str> = BTreeMap::new();
        let mut ramification = 0i64;
        for (tgt, fiber) in &self.fibers {
            let sum: u32 = fiber.iter().map(|(_, r)| *r).sum();
            if sum != self.degree {
                return Err(Error::InconsistentRamification(format!(
                    "fibre over {tgt} has total index {sum}, degree is {}",
                    self.degree
                )));
            }
            for (src, r) in fiber {
                if *r == 0 {
                    return Err(Error::InconsistentRamification(format!("index 0 at {src}")));
                }
                if let Some(prev) = owner.insert(src, tgt) {
                    return Err(Error::InconsistentRamification(format!(
                        "{src} maps to both {prev} and {tgt}"
                    )));
                }
                ramification += *r as i64 - 1;
            }
        }
        let lhs = 2 * self.source_genus as i64 - 2;
        let rhs = self.degree as i64 * (2 * self.target_genus as i64 - 2) + ramification;
        if lhs != rhs {
            return Err(Error::InconsistentRamification(format!(
                "Riemann-Hurwitz fails: {lhs} != {rhs}"
            )));
        }
        Ok(())
    }

    fn covers_marks(&self, src: &OrbifoldCurve, tgt: &OrbifoldCurve) -> Result<()> {
        for mk in &tgt.delta.marks {
            if !self.fibers.contains_key(&mk.label) {
                return Err(invalid(format!("target mark {} has no listed fibre", mk.label)));
            }
        }
        for mk in &src.delta.marks {
            if !self.fibers.values().flatten().any(|(s, _)| *s == mk.label) {
                return Err(invalid(format!("source mark {} lies in no listed fibre", mk.label)));
            }
        }
        if src.genus != self.source_genus || tgt.genus != self.target_genus {
            return Err(invalid("genus of the curves differs from the ramification data"));
        }
        Ok(())
    }

    /// Pairs `(r·Δ(x), Δ(g(x)))` over all listed source points.
    fn local_pairs<'a>(
        &'a self,
        src: &'a OrbifoldCurve,
        tgt: &'a OrbifoldCurve,
    ) -> impl Iterator<Item = (u64, u64)> + 'a {
        self.fibers.iter().flat_map(move |(t, fiber)| {
            fiber
                .iter()
                .map(move |(s, r)| (*r as u64 * src.delta.at(s) as u64, tgt.delta.at(t) as u64))
        })
    }
}

/// `r(g,x)·Δ(x) ≥ Δ(g(x))` at every source point. Unlisted points are
/// unramified over unmarked points, where both sides are 1.
pub fn is_orbifold_morphism(r: &RamificationData, src: &OrbifoldCurve, tgt: &OrbifoldCurve) -> Result<bool> {
    r.validate()?;
    r.covers_marks(src, tgt)?;
    Ok(r.local_pairs(src, tgt).all(|(a, b)| a >= b))
}

/// Equality `r(g,x)·Δ(x) = Δ(g(x))` at every source point.
pub fn is_etale(r: &RamificationData, src: &OrbifoldCurve, tgt: &OrbifoldCurve) -> Result<bool> {
    r.validate()?;
    r.covers_marks(src, tgt)?;
    Ok(r.local_pairs(src, tgt).all(|(a, b)| a == b))
}

/// Component multiplicities of the fibres over each base point.
#[derive(Clone, PartialEq, Eq, Debug, Default, Serialize, Deserialize)]
pub struct FiberData {
    pub fibers: BTreeMap<String, Vec<u32>>,
}

impl FiberData {
    pub fn new(fibers: BTreeMap<String, Vec<u32>>) -> Result<Self> {
        for (p, ms) in &fibers {
            if ms.is_empty() || ms.contains(&0) {
                return Err(invalid(format!("fibre over {p} needs positive multiplicities")));
            }
        }
        Ok(FiberData { fibers })
    }
}

/// `(m, m*)`: minimum and gcd of the component multiplicities.
pub fn fiber_multiplicities(f: &FiberData, point: &str) -> Result<(u32, u32)> {
    let ms = f
        .fibers
        .get(point)
        .ok_or_else(|| invalid(format!("no fibre recorded over {point}")))?;
    Ok(multiplicity_pair(ms))
}

pub fn multiplicity_pair(ms: &[u32]) -> (u32, u32) {
    let m = *ms.iter().min().expect("nonempty fibre");
    let g = ms.iter().fold(0u32, |acc, &x| acc.gcd(&x));
    (m, g)
}

/// `(Δ(f), Δ*(f))`, marked where the respective multiplicity exceeds 1.
pub fn base_orbifold(f: &FiberData) -> (OrbifoldDivisor, OrbifoldDivisor) {
    let mut delta = Vec::new();
    let mut star = Vec::new();
    for (p, ms) in &f.fibers {
        let (m, g) = multiplicity_pair(ms);
        if m > 1 {
            delta.push(Mark { label: p.clone(), m });
        }
        if g > 1 {
            star.push(Mark { label: p.clone(), m: g });
        }
    }
    (OrbifoldDivisor { marks: delta }, OrbifoldDivisor { marks: star })
}

/// Smallest positive canonical degree over genus-0 divisors with at most
/// `max_n` marks of multiplicity at most `max_m`, with a minimizer.
///
/// Depth-first over nondecreasing multiplicity lists. A prefix is cut when
/// `N − 2 − Σ_prefix 1/m − (N − k)/m_k`, a lower bound for every completion,
/// already reaches the best value found.
pub fn min_positive_degree(max_n: usize, max_m: u32) -> Option<(Q, Vec<u32>)> {
    struct Search {
        max_m: u32,
        best: Option<(Q, Vec<u32>)>,
    }
    impl Search {
        fn visit(&mut self, n: usize, prefix: &mut Vec<u32>, sum: Q) {
            let base = q_int(n as i64 - 2);
            if prefix.len() == n {
                let d = base - sum;
                if d.is_positive() && self.best.as_ref().is_none_or(|(b, _)| d < *b) {
                    self.best = Some((d, prefix.clone()));
                }
                return;
            }
            let lo = prefix.last().copied().unwrap_or(2);
            for m in lo..=self.max_m {
                let s = sum.clone() + q_frac(1, m as i64);
                let rest = (n - prefix.len() - 1) as i64;
                let lower = base.clone() - s.clone() - q_frac(rest, m as i64);
                if let Some((b, _)) = &self.best {
                    if lower >= *b {
                        // larger m only raises the bound
                        break;
                    }
                }
                prefix.push(m);
                self.visit(n, prefix, s);
                prefix.pop();
            }
        }
    }
    let mut search = Search { max_m, best: None };
    for n in 1..=max_n {
        search.visit(n, &mut Vec::new(), Q::zero());
    }
    search.best
}
