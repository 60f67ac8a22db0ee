//! Contact profile of a section against all marked sections, and the two
//! intersection inequalities built on it.

use num_traits::Signed;

use super::{FunctionFieldSection, SectionConfig};
use crate::algebra::contact::{contact_on, coprime_basis, ContactDivisor};
use crate::algebra::{q_frac, q_int, PlaceClass, Poly, Q};
use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ProfileEntry {
    pub class: PlaceClass,
    /// `(j, t_j(b))` for every mark with positive contact.
    pub contacts: Vec<(usize, usize)>,
    pub in_m: bool,
    /// Contact of the two marked sections singled out by the shape
    /// (0 and p for type (3,2,2,2); p and q for (2,2,2,2,2)).
    pub tau: Option<usize>,
}

impl ProfileEntry {
    pub fn t(&self) -> usize {
        self.contacts.iter().map(|&(_, t)| t).max().unwrap_or(0)
    }

    pub fn t_j(&self, j: usize) -> usize {
        self.contacts.iter().find(|&&(k, _)| k == j).map_or(0, |&(_, t)| t)
    }

    pub fn weight(&self) -> usize {
        self.class.weight()
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ContactProfile {
    pub degree: usize,
    pub multiplicities: Vec<u32>,
    pub entries: Vec<ProfileEntry>,
}

/// Which pair of marks carries `τ(b)`, by shape of the multiplicity list.
fn tau_pair(ms: &[u32]) -> Option<(usize, usize)> {
    match ms {
        [3, 2, 2, 2] => Some((0, 3)),
        [2, 2, 2, 2, 2] => Some((3, 4)),
        _ => None,
    }
}

impl ContactProfile {
    pub fn build(s: &FunctionFieldSection, cfg: &SectionConfig) -> Result<Self> {
        let divisors: Vec<ContactDivisor> = cfg
            .marks
            .iter()
            .map(|(p, _)| s.contact_divisor_with(p).ok_or(Error::IdenticalSections))
            .collect::<Result<_>>()?;
        let ms = cfg.multiplicities();
        let tau_divisor = tau_pair(&ms).and_then(|(a, b)| cfg.marks[a].0.contact_divisor_with(&cfg.marks[b].0));

        let mut classes: Vec<PlaceClass> = Vec::new();
        let mut conj: Vec<Poly<Q>> = Vec::new();
        for d in &divisors {
            for (c, _) in &d.classes {
                match c {
                    PlaceClass::Conjugates(f) => conj.push(f.clone()),
                    other => classes.push(other.clone()),
                }
            }
        }
        if !conj.is_empty() {
            for b in &cfg.bad {
                if let PlaceClass::Conjugates(f) = b {
                    conj.push(f.clone());
                }
            }
            classes.extend(coprime_basis(&conj).into_iter().map(PlaceClass::Conjugates));
        }
        classes.sort();
        classes.dedup();

        let mut entries = Vec::new();
        for class in classes {
            let contacts: Vec<(usize, usize)> = divisors
                .iter()
                .enumerate()
                .map(|(j, d)| (j, contact_on(d, &class)))
                .filter(|&(_, t)| t > 0)
                .collect();
            if contacts.is_empty() {
                continue;
            }
            let tau = tau_pair(&ms).map(|_| tau_divisor.as_ref().map_or(0, |d| contact_on(d, &class)));
            entries.push(ProfileEntry { in_m: cfg.is_bad(&class), class, contacts, tau });
        }
        Ok(ContactProfile { degree: s.degree(), multiplicities: ms, entries })
    }

    /// Entries outside `M` (the set `Q'`).
    pub fn q_prime(&self) -> impl Iterator<Item = &ProfileEntry> {
        self.entries.iter().filter(|e| !e.in_m)
    }

    /// Entries inside `M` (the set `Q''`).
    pub fn q_second(&self) -> impl Iterator<Item = &ProfileEntry> {
        self.entries.iter().filter(|e| e.in_m)
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct StarReport {
    pub lhs: i64,
    pub rhs: i64,
    pub holds: bool,
}

/// `2d ≥ Σ_{Q'} (t(b) − 1) + Σ_{Q''} t(b)`, each geometric point counted.
pub fn star_inequality(s0: &FunctionFieldSection, profile: &ContactProfile) -> StarReport {
    let lhs = 2 * s0.degree() as i64;
    let rhs: i64 = profile.q_prime().map(|e| (e.weight() * (e.t() - 1)) as i64).sum::<i64>()
        + profile.q_second().map(|e| (e.weight() * e.t()) as i64).sum::<i64>();
    StarReport { lhs, rhs, holds: lhs >= rhs }
}

/// The pointwise inequality at one place of `Q''`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct LocalBranch {
    pub class: PlaceClass,
    pub t: usize,
    pub bound: Q,
    pub uses_tau: bool,
    pub holds: bool,
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct BranchesReport {
    pub lhs: Q,
    pub rhs: Q,
    pub holds: bool,
    pub local: Vec<LocalBranch>,
    /// `Σ_{Q''} τ(b)` and the intersection number bounding it.
    pub tau_sum: usize,
    pub tau_cap: usize,
}

fn weight_of(m: u32) -> Q {
    q_int(1) - q_frac(1, m as i64)
}

/// `Σ_{Q''} t(b) ≥ Σ_{Q''} Σ_j (1 − 1/m_j)·t_j(b) − Σ_j δ_j·(1 − 1/m_j)`
/// for the shapes (3,2,2,2) and (2,2,2,2,2), with the local inequalities of
/// each place.
pub fn branches_bound(profile: &ContactProfile, deltas: &[usize]) -> Result<BranchesReport> {
    let ms = &profile.multiplicities;
    let Some((ja, jb)) = tau_pair(ms) else {
        return Err(Error::Unsupported(format!("branch bound needs type (3,2,2,2) or (2,2,2,2,2), got {ms:?}")));
    };
    if deltas.len() != ms.len() {
        return Err(Error::InvalidInput("one degree per marked section".into()));
    }
    let mut lhs = Q::from_integer(0.into());
    let mut rhs: Q = -deltas.iter().zip(ms).map(|(&d, &m)| q_int(d as i64) * weight_of(m)).sum::<Q>();
    let mut local = Vec::new();
    let mut tau_sum = 0;
    for e in profile.q_second() {
        let w = q_int(e.weight() as i64);
        let weighted: Q = (0..ms.len()).map(|j| weight_of(ms[j]) * q_int(e.t_j(j) as i64)).sum();
        lhs += w.clone() * q_int(e.t() as i64);
        rhs += w * weighted.clone();
        let positive = e.contacts.len();
        let uses_tau = if ms.len() == 4 { e.t_j(ja) > 0 && e.t_j(jb) > 0 } else { positive >= 3 };
        let tau = e.tau.unwrap_or(0);
        tau_sum += e.weight() * tau;
        let bound = if uses_tau { weighted - q_frac(tau as i64, 2) } else { weighted };
        let holds = !(bound.clone() - q_int(e.t() as i64)).is_positive();
        local.push(LocalBranch { class: e.class.clone(), t: e.t(), bound, uses_tau, holds });
    }
    // intersection number of the two marks: δ_a + δ_b
    let tau_cap = deltas[ja] + deltas[jb];
    Ok(BranchesReport { holds: lhs >= rhs, lhs, rhs, local, tau_sum, tau_cap })
}
