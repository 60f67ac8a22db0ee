//! The explicit plane sextic tangent to three concurrent lines, its
//! degree-12 pullback under `(X : Y : Z) ↦ (X² + Y² : XY : Z²)`, and the
//! numerical data of the resulting fibration.
//!
//! Affine coordinates `(u, v)` on the target plane put the common point `a`
//! at the origin with `T : v = 0`, `L : u = 0`, `D : u = 2v`.

use std::fmt;
use std::thread;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::algebra::{BiPoly, Matrix, Poly, Qi, Scalar, Q};
use crate::error::{Error, Result};
use crate::orbifold::{fiber_multiplicities, kodaira_dimension, FiberData, KodairaClass, OrbifoldCurve};
use crate::report::{bipoly_to_json, poly_to_json, q_to_json};

const MAX_ATTEMPTS: usize = 64;
const MAX_ZETA_CANDIDATES: usize = 41;

/// Restrictions of the sextic along the three lines are `g³`, `h²`, `k²`.
#[derive(Clone, PartialEq, Debug)]
pub struct Ghk {
    pub g: Poly<Q>,
    pub h: Poly<Q>,
    pub k: Poly<Q>,
    /// Roots of `g` (points `(t, 0)` on `T`).
    pub t: Vec<Q>,
    /// Roots of `h` (points `(0, l)` on `L`).
    pub l: Vec<Q>,
    /// Roots of `k` (points `(2d, d)` on `D`).
    pub d: Vec<Q>,
}

fn unit_root_poly(roots: &[Q]) -> Poly<Q> {
    // Π (1 − x / r), so the value at 0 is 1
    roots.iter().fold(Poly::one(), |acc, r| acc * Poly::new(vec![Q::one(), -r.recip()]))
}

/// `k′(0) − 3g′(0) − h′(0)`: the first-order agreement of `g³`, `h²`, `k²`
/// at the common point, necessary for a sextic with these restrictions.
pub fn compatibility_defect(g: &Poly<Q>, h: &Poly<Q>, k: &Poly<Q>) -> Q {
    k.coeff(1) - q3() * g.coeff(1) - h.coeff(1)
}

fn q3() -> Q {
    Q::from_integer(3.into())
}

impl Ghk {
    pub fn from_roots(t: Vec<Q>, l: Vec<Q>, d: Vec<Q>) -> Result<Self> {
        if t.len() != 2 || l.len() != 3 || d.len() != 3 {
            return Err(Error::InvalidInput("need 2 roots on T, 3 on L, 3 on D".into()));
        }
        let all: Vec<&Q> = t.iter().chain(&l).chain(&d).collect();
        for (i, r) in all.iter().enumerate() {
            if r.is_zero() {
                return Err(Error::InvalidInput("roots must avoid the common point".into()));
            }
            if all[..i].contains(r) {
                return Err(Error::InvalidInput(format!("root {r} repeated")));
            }
        }
        let (g, h, k) = (unit_root_poly(&t), unit_root_poly(&l), unit_root_poly(&d));
        if !compatibility_defect(&g, &h, &k).is_zero() {
            return Err(Error::InconsistentRamification("k'(0) != 3g'(0) + h'(0)".into()));
        }
        Ok(Ghk { g, h, k, t, l, d })
    }

    pub fn to_json(&self) -> Value {
        json!({
            "g": poly_to_json(&self.g),
            "h": poly_to_json(&self.h),
            "k": poly_to_json(&self.k),
            "roots_t": self.t.iter().map(q_to_json).collect::<Vec<_>>(),
            "roots_l": self.l.iter().map(q_to_json).collect::<Vec<_>>(),
            "roots_d": self.d.iter().map(q_to_json).collect::<Vec<_>>(),
        })
    }
}

fn small_nonzero(rng: &mut ChaCha8Rng) -> Q {
    let mut n = 0;
    while n == 0 {
        n = rng.gen_range(-9i64..=9);
    }
    Q::new(n.into(), rng.gen_range(1i64..=4).into())
}

/// One draw of rational roots; `k`'s last root is solved from the
/// compatibility condition. Fails when the draw is degenerate.
pub fn choose_ghk(rng: &mut ChaCha8Rng) -> Result<Ghk> {
    let t = vec![small_nonzero(rng), small_nonzero(rng)];
    let l = vec![small_nonzero(rng), small_nonzero(rng), small_nonzero(rng)];
    let (d1, d2) = (small_nonzero(rng), small_nonzero(rng));
    // k'(0) = −Σ 1/d, and likewise for g and h
    let recip_sum = |rs: &[Q]| rs.iter().fold(Q::zero(), |acc, r| acc + r.recip());
    let last = q3() * recip_sum(&t) + recip_sum(&l) - d1.recip() - d2.recip();
    if last.is_zero() {
        return Err(Error::NoAdmissibleParameters("compatibility forces a root at infinity".into()));
    }
    Ghk::from_roots(t, l, vec![d1, d2, last.recip()])
}

/// Monomials `u^i v^j` with `i + j ≤ d`, ordered by degree then by `j`.
pub fn monomials(d: usize) -> Vec<(usize, usize)> {
    (0..=d).flat_map(|n| (0..=n).map(move |j| (n - j, j))).collect()
}

fn pad(p: &Poly<Q>, len: usize) -> Vec<Q> {
    (0..len).map(|i| p.coeff(i)).collect()
}

pub fn restrict_t(s: &BiPoly<Q>) -> Poly<Q> {
    s.along(&Poly::x(), &Poly::zero())
}

pub fn restrict_l(s: &BiPoly<Q>) -> Poly<Q> {
    s.along(&Poly::zero(), &Poly::x())
}

pub fn restrict_d(s: &BiPoly<Q>) -> Poly<Q> {
    s.along(&Poly::x().scale(&Q::from_integer(2.into())), &Poly::x())
}

/// Solves `conditions(Σ c_m m) = rhs` over the given monomials.
fn solve_linear(
    basis: &[BiPoly<Q>],
    conditions: impl Fn(&BiPoly<Q>) -> Vec<Q>,
    rhs: &[Q],
) -> (Matrix<Q>, Option<Vec<Q>>) {
    let cols: Vec<Vec<Q>> = basis.iter().map(&conditions).collect();
    let rows = (0..rhs.len()).map(|r| cols.iter().map(|c| c[r].clone()).collect()).collect();
    let m = Matrix::from_rows(rows);
    let sol = m.solve(rhs);
    (m, sol)
}

fn combine(basis: &[BiPoly<Q>], coeffs: &[Q]) -> BiPoly<Q> {
    basis.iter().zip(coeffs).fold(BiPoly::zero(), |acc, (m, c)| acc + m.scale(c))
}

fn monomial_basis(d: usize) -> Vec<BiPoly<Q>> {
    monomials(d).into_iter().map(|(i, j)| BiPoly::monomial(Q::one(), i, j)).collect()
}

/// A sextic whose restrictions to `T`, `L`, `D` are `g³`, `h²`, `k²`.
pub fn build_s1(ghk: &Ghk) -> Result<BiPoly<Q>> {
    let cond = |p: &BiPoly<Q>| {
        let mut v = pad(&restrict_t(p), 7);
        v.extend(pad(&restrict_l(p), 7));
        v.extend(pad(&restrict_d(p), 7));
        v
    };
    let mut rhs = pad(&ghk.g.pow(3), 7);
    rhs.extend(pad(&ghk.h.pow(2), 7));
    rhs.extend(pad(&ghk.k.pow(2), 7));
    let basis = monomial_basis(6);
    let (_, sol) = solve_linear(&basis, cond, &rhs);
    let sol = sol.ok_or_else(|| Error::VerificationFailed("build_S1: restriction system is inconsistent".into()))?;
    let s1 = combine(&basis, &sol);
    if restrict_t(&s1) != ghk.g.pow(3) || restrict_l(&s1) != ghk.h.pow(2) || restrict_d(&s1) != ghk.k.pow(2) {
        return Err(Error::VerificationFailed("build_S1: restriction identities fail".into()));
    }
    Ok(s1)
}

/// `E = uv(u − 2v)`, the product of the three lines.
pub fn lines_product() -> BiPoly<Q> {
    BiPoly::from_terms([((2, 1), Q::one()), ((1, 2), Q::from_integer((-2).into()))])
}

fn partial_at(s: &BiPoly<Q>, a: usize, b: usize, x: &Q, y: &Q) -> Q {
    s.partial(a, b).eval(x, y)
}

/// `S_v, S_uv, S_vv` at each `(t_i, 0)`, then `S_u` at each `(0, l_j)`.
pub fn correction_conditions(s: &BiPoly<Q>, ghk: &Ghk) -> Vec<Q> {
    let z = Q::zero();
    let mut out = Vec::new();
    for t in &ghk.t {
        for (a, b) in [(0, 1), (1, 1), (0, 2)] {
            out.push(partial_at(s, a, b, t, &z));
        }
    }
    for l in &ghk.l {
        out.push(partial_at(s, 1, 0, &z, l));
    }
    out
}

/// Rows `F(t_i), F_u(t_i), F_v(t_i)` for `i = 1, 2` and `F(l_j)` for
/// `j = 1, 2, 3`, as forms on the cubic coefficients in `monomials(3)` order.
pub fn nine_forms_matrix(ghk: &Ghk) -> Matrix<Q> {
    let z = Q::zero();
    let basis = monomial_basis(3);
    let mut rows = Vec::new();
    for t in &ghk.t {
        for (a, b) in [(0, 0), (1, 0), (0, 1)] {
            rows.push(basis.iter().map(|m| partial_at(m, a, b, t, &z)).collect());
        }
    }
    for l in &ghk.l {
        rows.push(basis.iter().map(|m| m.eval(&z, l)).collect());
    }
    Matrix::from_rows(rows)
}

#[derive(Clone, PartialEq, Debug)]
pub struct NineForms {
    pub matrix: Matrix<Q>,
    pub rank: usize,
    pub kernel: Vec<Vec<Q>>,
    /// The cubic `F` with `S₂ = S₁ + E·F`.
    pub f: BiPoly<Q>,
    pub s2: BiPoly<Q>,
}

/// Index of `u v²` in `monomials(3)`.
fn uv2_index() -> usize {
    monomials(3).iter().position(|&m| m == (1, 2)).expect("cubic monomial")
}

pub fn nine_forms_and_correction(s1: &BiPoly<Q>, ghk: &Ghk) -> Result<NineForms> {
    let matrix = nine_forms_matrix(ghk);
    let rank = matrix.rank();
    if rank < 9 {
        return Err(Error::NoAdmissibleParameters(format!("nine forms have rank {rank}")));
    }
    let kernel = matrix.kernel_basis();
    let idx = uv2_index();
    let spanned_by_uv2 = kernel.len() == 1
        && kernel[0].iter().enumerate().all(|(i, c)| (i == idx) != c.is_zero());
    if !spanned_by_uv2 {
        return Err(Error::VerificationFailed("nine_forms: kernel is not spanned by uv^2".into()));
    }
    let e = lines_product();
    let basis: Vec<BiPoly<Q>> = monomial_basis(3).iter().map(|m| &e * m).collect();
    let rhs: Vec<Q> = correction_conditions(s1, ghk).into_iter().map(|c| -c).collect();
    let (_, sol) = solve_linear(&basis, |p| correction_conditions(p, ghk), &rhs);
    let sol = sol.ok_or_else(|| Error::VerificationFailed("nine_forms: correction system is inconsistent".into()))?;
    let f = combine(&monomial_basis(3), &sol);
    let s2 = s1.clone() + &e * &f;
    if correction_conditions(&s2, ghk).iter().any(|c| !c.is_zero()) {
        return Err(Error::VerificationFailed("nine_forms: corrected sextic misses a condition".into()));
    }
    Ok(NineForms { matrix, rank, kernel, f, s2 })
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Requirement {
    SmoothTangent,
    DoublePoint,
    TriplePoint,
    Contact(u32),
}

impl fmt::Display for Requirement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Requirement::SmoothTangent => write!(f, "smooth tangent (contact 2)"),
            Requirement::DoublePoint => write!(f, "double point"),
            Requirement::TriplePoint => write!(f, "triple point"),
            Requirement::Contact(r) => write!(f, "contact order {r}"),
        }
    }
}

#[derive(Clone, PartialEq, Debug)]
pub struct ProfileEntry {
    /// A rational point `(u, v)`, or the squarefree polynomial whose roots
    /// parametrize the points on the curve.
    pub locus: String,
    pub curve: String,
    pub required: Requirement,
    pub verified: bool,
}

#[derive(Clone, PartialEq, Debug, Default)]
pub struct TangencyProfile {
    pub entries: Vec<ProfileEntry>,
}

impl TangencyProfile {
    pub fn all_verified(&self) -> bool {
        !self.entries.is_empty() && self.entries.iter().all(|e| e.verified)
    }

    pub fn failures(&self) -> Vec<&ProfileEntry> {
        self.entries.iter().filter(|e| !e.verified).collect()
    }

    pub fn to_json(&self) -> Value {
        Value::Array(
            self.entries
                .iter()
                .map(|e| {
                    json!({"locus": e.locus, "curve": e.curve, "required": e.required.to_string(), "verified": e.verified})
                })
                .collect(),
        )
    }
}

/// Order of vanishing of `s` at a rational point, capped at `cap`.
pub fn multiplicity_at(s: &BiPoly<Q>, x: &Q, y: &Q, cap: usize) -> usize {
    (0..cap)
        .find(|&k| (0..=k).any(|b| !partial_at(s, k - b, b, x, y).is_zero()))
        .unwrap_or(cap)
}

/// The four conditions on a sextic: it misses `a`, is smoothly tangent to
/// `D` at the roots of `k`, has double points at the roots of `h` on `L`
/// and triple points at the roots of `g` on `T`.
pub fn verify_sextic(s: &BiPoly<Q>, ghk: &Ghk) -> (bool, TangencyProfile) {
    let z = Q::zero();
    let two = Q::from_integer(2.into());
    let misses_a = !s.eval(&z, &z).is_zero() && s.total_degree() == Some(6);
    let mut entries = Vec::new();
    let on_d = restrict_d(s);
    for d in &ghk.d {
        let u = &two * d;
        let smooth = multiplicity_at(s, &u, d, 3) == 1;
        let contact = on_d.order_at(d) == Some(2);
        entries.push(ProfileEntry {
            locus: format!("({u}, {d})"),
            curve: "D".into(),
            required: Requirement::SmoothTangent,
            verified: smooth && contact,
        });
    }
    for l in &ghk.l {
        entries.push(ProfileEntry {
            locus: format!("(0, {l})"),
            curve: "L".into(),
            required: Requirement::DoublePoint,
            verified: multiplicity_at(s, &z, l, 4) == 2,
        });
    }
    for t in &ghk.t {
        entries.push(ProfileEntry {
            locus: format!("({t}, 0)"),
            curve: "T".into(),
            required: Requirement::TriplePoint,
            verified: multiplicity_at(s, t, &z, 5) == 3,
        });
    }
    (misses_a, TangencyProfile { entries })
}

/// `1, 1/2, 2, 1/3, 3, …`
pub fn zeta_sequence() -> impl Iterator<Item = Q> {
    std::iter::once(Q::one()).chain((2i64..).flat_map(|n| [Q::new(1.into(), n.into()), Q::from_integer(n.into())]))
}

#[derive(Clone, PartialEq, Debug)]
pub struct Perturbed {
    pub zeta: Q,
    pub s: BiPoly<Q>,
    pub misses_a: bool,
    pub profile: TangencyProfile,
}

/// First `ζ` in the search sequence with `S₂ + ζ·E·uv²` meeting every condition.
pub fn perturb_and_verify(s2: &BiPoly<Q>, ghk: &Ghk) -> Result<Perturbed> {
    let direction = &lines_product() * &BiPoly::monomial(Q::one(), 1, 2);
    for zeta in zeta_sequence().take(MAX_ZETA_CANDIDATES) {
        let s = s2.clone() + direction.scale(&zeta);
        let (misses_a, profile) = verify_sextic(&s, ghk);
        if misses_a && profile.all_verified() {
            return Ok(Perturbed { zeta, s, misses_a, profile });
        }
    }
    Err(Error::NoAdmissibleParameters("perturb_and_verify: zeta search exhausted".into()))
}

/// `H(x, y) = S(x² + y², xy)`; homogeneous of degree 12 with `W = Z²`.
pub fn pullback_h(s: &BiPoly<Q>) -> BiPoly<Q> {
    let u = BiPoly::from_terms([((2, 0), Q::one()), ((0, 2), Q::one())]);
    let v = BiPoly::monomial(Q::one(), 1, 1);
    s.substitute(&u, &v)
}

/// Invariance under `(x, y) ↦ (−x, −y)` and `(x, y) ↦ (y, x)`.
pub fn has_cover_symmetry(h: &BiPoly<Q>) -> bool {
    let neg = h.substitute(&(-BiPoly::x()), &(-BiPoly::y()));
    let swap = h.substitute(&BiPoly::y(), &BiPoly::x());
    neg == *h && swap == *h
}

/// A line `s ↦ (a s, b s)` through `a′ = (0 : 0 : 1)`.
#[derive(Clone, PartialEq, Debug)]
pub struct PlaneLine {
    pub name: &'static str,
    pub direction: (Qi, Qi),
    pub required: Requirement,
}

/// `L′ : Y = iX`, `L″ : Y = −iX`, `D′ : Y = X` carry double points;
/// `T′ : Y = 0`, `T″ : X = 0` carry triple points.
pub fn pulled_back_lines() -> Vec<PlaneLine> {
    let one = Qi::one();
    let zero = Qi::zero();
    vec![
        PlaneLine { name: "L'", direction: (one.clone(), Qi::i()), required: Requirement::DoublePoint },
        PlaneLine { name: "L''", direction: (one.clone(), -Qi::i()), required: Requirement::DoublePoint },
        PlaneLine { name: "D'", direction: (one.clone(), one.clone()), required: Requirement::DoublePoint },
        PlaneLine { name: "T'", direction: (one.clone(), zero.clone()), required: Requirement::TriplePoint },
        PlaneLine { name: "T''", direction: (zero, one), required: Requirement::TriplePoint },
    ]
}

#[derive(Clone, PartialEq, Debug)]
pub struct LineReport {
    pub name: &'static str,
    pub required: Requirement,
    /// `H` restricted to the line.
    pub restriction: Poly<Qi>,
    /// Its squarefree part: one simple root per intersection point.
    pub points: Poly<Qi>,
    pub distinct_points: usize,
    /// Contact orders of `H` with the line, one per point, sorted.
    pub contact_orders: Vec<u32>,
    /// Every point has exactly the required multiplicity.
    pub multiplicity_ok: bool,
}

impl LineReport {
    pub fn to_json(&self) -> Value {
        json!({
            "line": self.name,
            "required": self.required.to_string(),
            "points_polynomial": self.points.coeffs().iter().map(|c| c.to_string()).collect::<Vec<_>>(),
            "distinct_points": self.distinct_points,
            "contact_orders": self.contact_orders,
            "multiplicity_ok": self.multiplicity_ok,
        })
    }
}

fn contact_orders(r: &Poly<Qi>) -> Vec<u32> {
    let mut out: Vec<u32> = r
        .squarefree_decomposition()
        .iter()
        .enumerate()
        .flat_map(|(i, f)| std::iter::repeat_n((i + 1) as u32, f.degree_or_zero()))
        .collect();
    out.sort_unstable();
    out
}

/// Restricts every partial of order `k` to the line.
fn partials_on_line(h: &BiPoly<Qi>, k: usize, line: &PlaneLine) -> Vec<Poly<Qi>> {
    let (a, b) = &line.direction;
    let x = Poly::monomial(a.clone(), 1);
    let y = Poly::monomial(b.clone(), 1);
    (0..=k).map(|j| h.partial(k - j, j).along(&x, &y)).collect()
}

/// Multiplicity `μ` at every root of `points`: all partials of order below
/// `μ` vanish there, and the order-`μ` partials have no common root with it.
fn multiplicity_exactly(h: &BiPoly<Qi>, points: &Poly<Qi>, mu: usize, line: &PlaneLine) -> bool {
    let lower_vanish = (0..mu).all(|k| partials_on_line(h, k, line).iter().all(|p| points.divides(p)));
    let common = partials_on_line(h, mu, line).iter().fold(points.clone(), |acc, p| acc.gcd(p));
    lower_vanish && common.degree_or_zero() == 0
}

pub fn check_line(h: &BiPoly<Qi>, line: &PlaneLine) -> LineReport {
    let restriction = partials_on_line(h, 0, line).remove(0);
    let points = restriction.squarefree_part();
    let mu = match line.required {
        Requirement::TriplePoint => 3,
        _ => 2,
    };
    LineReport {
        name: line.name,
        required: line.required,
        contact_orders: contact_orders(&restriction),
        distinct_points: points.degree_or_zero(),
        multiplicity_ok: multiplicity_exactly(h, &points, mu, line),
        points,
        restriction,
    }
}

/// Line checks over Q(i), one thread per line (sequential on wasm, which
/// has no threads).
pub fn verify_h_profile(h: &BiPoly<Q>) -> Vec<LineReport> {
    let hi: BiPoly<Qi> = h.map(Qi::from_q);
    let lines = pulled_back_lines();
    if cfg!(target_arch = "wasm32") {
        return lines.iter().map(|line| check_line(&hi, line)).collect();
    }
    thread::scope(|scope| {
        let handles: Vec<_> = lines.iter().map(|line| scope.spawn(|| check_line(&hi, line))).collect();
        handles.into_iter().map(|t| t.join().expect("line check panicked")).collect()
    })
}

/// The expected shape of one line's report: 12 intersections with no point
/// at infinity, the right number of distinct points, and exact multiplicities.
pub fn line_profile_ok(r: &LineReport) -> bool {
    let (count, contacts): (usize, &[u32]) = match (r.name, r.required) {
        ("T'", _) => (4, &[3, 3, 3, 3]),
        (_, Requirement::TriplePoint) => (4, &[]),
        _ => (6, &[]),
    };
    r.restriction.degree() == Some(12)
        && r.distinct_points == count
        && r.multiplicity_ok
        && (contacts.is_empty() || r.contact_orders == contacts)
}

/// `L″` is the complex conjugate of `L′`.
pub fn conjugate_pairing(lines: &[LineReport]) -> bool {
    let find = |n: &str| lines.iter().find(|r| r.name == n);
    match (find("L'"), find("L''")) {
        (Some(a), Some(b)) => a.restriction.map(Qi::conj) == b.restriction,
        _ => false,
    }
}

#[derive(Clone, PartialEq, Debug)]
pub struct BasePoints {
    pub count: usize,
    pub double_points: usize,
    pub triple_points: usize,
    /// Component multiplicities of the fibre at infinity, `2(L′+L″+D′) + 3(T′+T″)`.
    pub fibre_components: Vec<u32>,
    /// `(m, m*)` of that fibre.
    pub multiple_fibre: (u32, u32),
}

/// Distinct points of `H ∩ supp(H′)`. The five lines meet only at `a′`,
/// which `H` misses, so the per-line counts add.
pub fn base_points_and_fiber(h: &BiPoly<Q>, lines: &[LineReport]) -> Result<BasePoints> {
    if h.eval(&Q::zero(), &Q::zero()).is_zero() {
        return Err(Error::VerificationFailed("base_points: H passes through a'".into()));
    }
    if lines.iter().any(|r| r.restriction.degree() != Some(12)) {
        return Err(Error::VerificationFailed("base_points: a line meets H at infinity".into()));
    }
    let count_of = |req: Requirement| -> usize {
        lines.iter().filter(|r| r.required == req).map(|r| r.distinct_points).sum()
    };
    let (double_points, triple_points) = (count_of(Requirement::DoublePoint), count_of(Requirement::TriplePoint));
    let fibre_components: Vec<u32> = lines
        .iter()
        .map(|r| if r.required == Requirement::TriplePoint { 3 } else { 2 })
        .collect();
    let data = FiberData::new([("inf".to_string(), fibre_components.clone())].into_iter().collect())?;
    Ok(BasePoints {
        count: double_points + triple_points,
        double_points,
        triple_points,
        multiple_fibre: fiber_multiplicities(&data, "inf")?,
        fibre_components,
    })
}

/// `K·F`, `F²` and the genus of a fibre of the pencil spanned by a curve of
/// degree `n` and the fibre at infinity, after blowing up the base points.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct FibreNumbers {
    pub k_dot_f: i64,
    pub f_sq: i64,
    pub genus: i64,
}

pub fn fibre_numbers(degree: i64, double_points: i64, triple_points: i64) -> FibreNumbers {
    let k_dot_f = -3 * degree + 2 * double_points + 3 * triple_points;
    let f_sq = degree * degree - 4 * double_points - 9 * triple_points;
    FibreNumbers { k_dot_f, f_sq, genus: 1 + (k_dot_f + f_sq) / 2 }
}

#[derive(Clone, PartialEq, Debug)]
pub struct Invariants {
    pub m: u64,
    pub c1_sq: BigInt,
    pub c2: BigInt,
    pub ratio: Q,
    pub fibre: FibreNumbers,
    /// Kodaira class of the base after the `m`-fold base change:
    /// `m` marks of multiplicity 2 on the line.
    pub base_class: KodairaClass,
}

impl Invariants {
    pub fn to_json(&self) -> Value {
        json!({
            "m": self.m,
            "c1_sq": self.c1_sq.to_string(),
            "c2": self.c2.to_string(),
            "ratio": q_to_json(&self.ratio),
            "ratio_decimal": format!("{:.6}", ratio_f64(&self.ratio)),
            "K_dot_F": self.fibre.k_dot_f,
            "F_sq": self.fibre.f_sq,
            "fiber_genus": self.fibre.genus,
            "base_kodaira": self.base_class.to_string(),
        })
    }
}

fn ratio_f64(q: &Q) -> f64 {
    use num_traits::ToPrimitive;
    q.to_f64().unwrap_or(f64::NAN)
}

pub fn invariants(m: u64) -> Result<Invariants> {
    if m == 0 {
        return Err(Error::InvalidInput("m must be at least 1".into()));
    }
    let mb = BigInt::from(m);
    let c1_sq = &mb * (BigInt::from((m - 1) * 96) - 17u32);
    let c2 = &mb * (BigInt::from((m - 1) * 48) + 29u32);
    let ratio = Q::new(c1_sq.clone(), c2.clone());
    let base = OrbifoldCurve::rational(&vec![2; m as usize])?;
    Ok(Invariants { m, c1_sq, c2, ratio, fibre: fibre_numbers(12, 18, 8), base_class: kodaira_dimension(&base) })
}

/// `1.66 < c₁²/c₂ < 2`.
pub fn ratio_in_window(r: &Q) -> bool {
    *r > Q::new(166.into(), 100.into()) && *r < Q::from_integer(2.into())
}

#[derive(Clone, PartialEq, Debug)]
pub struct ConstructionReport {
    pub seed: u64,
    pub attempts: usize,
    pub ghk: Ghk,
    pub s1: BiPoly<Q>,
    pub nine: NineForms,
    pub perturbed: Perturbed,
    pub h: BiPoly<Q>,
    pub h_symmetric: bool,
    pub lines: Vec<LineReport>,
    pub h_profile: TangencyProfile,
    pub base: BasePoints,
    pub fibre: FibreNumbers,
    pub invariants: Vec<Invariants>,
}

impl ConstructionReport {
    pub fn s(&self) -> &BiPoly<Q> {
        &self.perturbed.s
    }

    pub fn to_json(&self) -> Value {
        let g1 = self.ghk.g.coeff(1);
        json!({
            "seed": self.seed,
            "attempts": self.attempts,
            "ghk": self.ghk.to_json(),
            "compatibility": {
                "condition": "k'(0) = 3 g'(0) + h'(0)",
                "defect": q_to_json(&compatibility_defect(&self.ghk.g, &self.ghk.h, &self.ghk.k)),
                "variant_holds": g1.is_zero(),
                "note": "the variant k'(0) = 2g'(0) + k'(0) would force g'(0) = 0; it is not used",
            },
            "S1": bipoly_to_json(&self.s1),
            "nine_forms": {
                "matrix": (0..self.nine.matrix.rows())
                    .map(|r| self.nine.matrix.row(r).iter().map(q_to_json).collect::<Vec<_>>())
                    .collect::<Vec<_>>(),
                "rank": self.nine.rank,
                "kernel": self.nine.kernel.iter().map(|v| v.iter().map(q_to_json).collect::<Vec<_>>()).collect::<Vec<_>>(),
                "monomials": monomials(3),
                "F": bipoly_to_json(&self.nine.f),
            },
            "S2": bipoly_to_json(&self.nine.s2),
            "zeta": q_to_json(&self.perturbed.zeta),
            "S": bipoly_to_json(&self.perturbed.s),
            "S_misses_a": self.perturbed.misses_a,
            "S_profile": self.perturbed.profile.to_json(),
            "H": bipoly_to_json(&self.h),
            "H_degree": self.h.total_degree(),
            "H_symmetric": self.h_symmetric,
            "H_lines": self.lines.iter().map(LineReport::to_json).collect::<Vec<_>>(),
            "H_profile": self.h_profile.to_json(),
            "base_point_count": self.base.count,
            "multiple_fiber": {
                "components": self.base.fibre_components,
                "m": self.base.multiple_fibre.0,
                "m_star": self.base.multiple_fibre.1,
            },
            "fiber": {"K_dot_F": self.fibre.k_dot_f, "F_sq": self.fibre.f_sq, "genus": self.fibre.genus},
            "invariants": self.invariants.iter().map(Invariants::to_json).collect::<Vec<_>>(),
            "irreducibility": "assumed, not verified",
        })
    }
}

fn h_profile_entries(lines: &[LineReport]) -> TangencyProfile {
    let mut entries = Vec::new();
    for r in lines {
        let locus = format!("roots of {}", r.points);
        entries.push(ProfileEntry { locus: locus.clone(), curve: r.name.into(), required: r.required, verified: line_profile_ok(r) });
        if r.name == "T'" {
            entries.push(ProfileEntry {
                locus,
                curve: r.name.into(),
                required: Requirement::Contact(3),
                verified: r.contact_orders == [3, 3, 3, 3],
            });
        }
    }
    TangencyProfile { entries }
}

/// Runs the construction end to end. Degenerate draws are retried with the
/// same generator; any other failure names its stage.
pub fn run_pipeline(seed: u64) -> Result<ConstructionReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for attempt in 1..=MAX_ATTEMPTS {
        let ghk = match choose_ghk(&mut rng) {
            Ok(x) => x,
            Err(Error::InvalidInput(_)) | Err(Error::NoAdmissibleParameters(_)) => continue,
            Err(e) => return Err(e),
        };
        let s1 = build_s1(&ghk)?;
        let nine = match nine_forms_and_correction(&s1, &ghk) {
            Ok(n) => n,
            Err(Error::NoAdmissibleParameters(_)) => continue,
            Err(e) => return Err(e),
        };
        let perturbed = match perturb_and_verify(&nine.s2, &ghk) {
            Ok(p) => p,
            Err(Error::NoAdmissibleParameters(_)) => continue,
            Err(e) => return Err(e),
        };
        return finish(seed, attempt, ghk, s1, nine, perturbed);
    }
    Err(Error::NoAdmissibleParameters(format!("choose_ghk: no admissible draw in {MAX_ATTEMPTS} attempts")))
}

/// The construction for fixed `g, h, k`, with no retries.
pub fn construct_from(ghk: Ghk) -> Result<ConstructionReport> {
    let s1 = build_s1(&ghk)?;
    let nine = nine_forms_and_correction(&s1, &ghk)?;
    let perturbed = perturb_and_verify(&nine.s2, &ghk)?;
    finish(0, 1, ghk, s1, nine, perturbed)
}

fn finish(seed: u64, attempts: usize, ghk: Ghk, s1: BiPoly<Q>, nine: NineForms, perturbed: Perturbed) -> Result<ConstructionReport> {
    let h = pullback_h(&perturbed.s);
    if h.total_degree() != Some(12) {
        return Err(Error::VerificationFailed("pullback_H: degree is not 12".into()));
    }
    let h_symmetric = has_cover_symmetry(&h);
    let lines = verify_h_profile(&h);
    let h_profile = h_profile_entries(&lines);
    if !h_symmetric || !conjugate_pairing(&lines) {
        return Err(Error::VerificationFailed("pullback_H: symmetry check failed".into()));
    }
    if let Some(bad) = h_profile.failures().first() {
        return Err(Error::VerificationFailed(format!(
            "verify_H_profile: {} on {} at {}",
            bad.required, bad.curve, bad.locus
        )));
    }
    let base = base_points_and_fiber(&h, &lines)?;
    if base.count != 26 {
        return Err(Error::VerificationFailed(format!("base_points: found {} points", base.count)));
    }
    let fibre = fibre_numbers(12, base.double_points as i64, base.triple_points as i64);
    let invariants = (1..=6).map(invariants).collect::<Result<Vec<_>>>()?;
    Ok(ConstructionReport { seed, attempts, ghk, s1, nine, perturbed, h, h_symmetric, lines, h_profile, base, fibre, invariants })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::q_frac;

    fn q(n: i64) -> Q {
        Q::from_integer(n.into())
    }

    fn sample() -> Ghk {
        // 3(1/2 + 1/3) + (1 + 1/4 − 1/5) = 2 + 1/20 + ... solved for d3
        let t = vec![q(2), q(3)];
        let l = vec![q(1), q(4), q(-5)];
        let r = q3() * (q_frac(1, 2) + q_frac(1, 3)) + q(1) + q_frac(1, 4) - q_frac(1, 5);
        let last = r - q_frac(1, 6) - q_frac(1, -7);
        Ghk::from_roots(t, l, vec![q(6), q(-7), last.recip()]).unwrap()
    }

    #[test]
    fn ghk_normalization() {
        let ghk = sample();
        for p in [&ghk.g, &ghk.h, &ghk.k] {
            assert_eq!(p.coeff(0), Q::one());
        }
        assert!(compatibility_defect(&ghk.g, &ghk.h, &ghk.k).is_zero());
        let bad = Ghk::from_roots(vec![q(2), q(3)], vec![q(1), q(4), q(-5)], vec![q(6), q(-7), q(9)]);
        assert!(bad.is_err());
    }

    #[test]
    fn s1_restrictions_are_exact() {
        let ghk = sample();
        let s1 = build_s1(&ghk).unwrap();
        assert_eq!(restrict_t(&s1), ghk.g.pow(3));
        assert_eq!(restrict_l(&s1), ghk.h.pow(2));
        assert_eq!(restrict_d(&s1), ghk.k.pow(2));
    }

    #[test]
    fn incompatible_restrictions_are_inconsistent() {
        let mut ghk = sample();
        ghk.k = unit_root_poly(&[q(6), q(-7), q(9)]);
        assert!(matches!(build_s1(&ghk), Err(Error::VerificationFailed(_))));
    }

    #[test]
    fn uv2_is_in_the_nine_form_kernel() {
        let ghk = sample();
        let m = nine_forms_matrix(&ghk);
        let mut v = vec![Q::zero(); 10];
        v[uv2_index()] = Q::one();
        assert!(m.mul_vec(&v).iter().all(Zero::is_zero));
        assert_eq!(m.rank(), 9);
    }

    #[test]
    fn zeta_order() {
        let got: Vec<Q> = zeta_sequence().take(5).collect();
        assert_eq!(got, vec![q(1), q_frac(1, 2), q(2), q_frac(1, 3), q(3)]);
    }

    #[test]
    fn invariant_formulas() {
        let inv = invariants(5).unwrap();
        assert_eq!(inv.c1_sq, BigInt::from(1835));
        assert_eq!(inv.c2, BigInt::from(1105));
        assert!(ratio_in_window(&inv.ratio));
        assert_eq!(inv.fibre, FibreNumbers { k_dot_f: 24, f_sq: 0, genus: 13 });
        assert_eq!(inv.base_class, KodairaClass::One);
        assert_eq!(invariants(4).unwrap().base_class, KodairaClass::Zero);
        assert!(invariants(0).is_err());
    }

    #[test]
    fn multiplicity_of_monomials() {
        let p = BiPoly::monomial(Q::one(), 2, 1);
        assert_eq!(multiplicity_at(&p, &Q::zero(), &Q::zero(), 5), 3);
        assert_eq!(multiplicity_at(&p, &Q::one(), &Q::zero(), 5), 1);
        assert_eq!(multiplicity_at(&p, &Q::one(), &Q::one(), 5), 0);
    }
}
