//! Pluri-differential forms `w = Σ P_k(x,y) dy^{e−k} dx^k / D(x,y)` that
//! pull back holomorphically along sections tangent to an orbifold divisor.
//!
//! Two shapes are supported. For `W6` (type (3,2,2,2), marks 0, 1, ∞ and a
//! moving mark `p`) the exponent is 6 and `D = y^4 (y−1)^3 (y−p)^3`. For `W4`
//! (type (2,2,2,2,2), moving marks `p` and `q`) the exponent is 4 and
//! `D = y^2 (y−1)^2 (y−p)^2 (y−q)^2`.
//!
//! The linear conditions at `x = 0` form the system matrix. The coefficients
//! `P_k(x, y)` then come from a kernel vector extended to a power series in
//! `x` so that the conditions hold identically in `x`, which is what the
//! osculation condition with a moving mark needs.

use std::thread;

use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::algebra::matrix::PreparedSolver;
use crate::algebra::scalar::{binomial, falling_factorial};
use crate::algebra::{q_frac, q_int, Matrix, Poly, TruncatedLaurent, Valuation, EXACT, Q};
use crate::error::{invalid, Error, Result};

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum FormKind {
    W6,
    W4,
}

impl FormKind {
    pub fn exponent(self) -> usize {
        match self {
            FormKind::W6 => 6,
            FormKind::W4 => 4,
        }
    }

    /// Degree caps `d_k` forced by holomorphy along sections through ∞.
    pub fn caps(self) -> &'static [usize] {
        match self {
            FormKind::W6 => &[1, 2, 4, 5, 7, 8, 10],
            FormKind::W4 => &[2, 3, 5, 6, 8],
        }
    }

    /// Highest derivative order vanishing at `y = 1` (and at moving marks);
    /// negative means no condition.
    pub fn a(self) -> &'static [i64] {
        match self {
            FormKind::W6 => &[-1, 0, 0, 1, 1, 2, 2],
            FormKind::W4 => &[-1, 0, 0, 1, 1],
        }
    }

    /// Highest derivative order vanishing at `y = 0`.
    pub fn b(self) -> &'static [i64] {
        match self {
            FormKind::W6 => &[0, 0, 1, 2, 2, 3, 4],
            FormKind::W4 => &[0, 0, 1, 1, 2],
        }
    }

    /// Exponents of `y`, `y − 1` and each moving factor in the denominator.
    fn denominator(self) -> (u32, u32, u32) {
        match self {
            FormKind::W6 => (4, 3, 3),
            FormKind::W4 => (2, 2, 2),
        }
    }

    pub fn moving_marks(self) -> usize {
        match self {
            FormKind::W6 => 1,
            FormKind::W4 => 2,
        }
    }

    pub fn width(self) -> usize {
        self.caps().iter().map(|d| d + 1).sum()
    }

    pub fn offset(self, k: usize) -> usize {
        self.caps()[..k].iter().map(|d| d + 1).sum()
    }

    pub fn name(self) -> &'static str {
        match self {
            FormKind::W6 => "w6",
            FormKind::W4 => "w4",
        }
    }
}

type Row = Vec<Poly<Q>>;

/// Row for `P_k^{(h)}(y0)` where `y0` may depend on `x`.
fn derivative_row(kind: FormKind, k: usize, h: usize, y0: &Poly<Q>) -> Row {
    let mut row = vec![Poly::zero(); kind.width()];
    let off = kind.offset(k);
    for n in h..=kind.caps()[k] {
        let c = Q::from_integer(falling_factorial(n as u64, h as u64));
        row[off + n] = y0.pow((n - h) as u32).scale(&c);
    }
    row
}

/// Row for `Q_k^{(h)}(y0)` with `Q_k = Σ_m C(e−k+m, m) P_{k−m} p'^m`.
fn transformed_row(kind: FormKind, k: usize, h: usize, y0: &Poly<Q>, slope: &Poly<Q>) -> Row {
    let e = kind.exponent();
    let mut row = vec![Poly::zero(); kind.width()];
    for m in 0..=k {
        let c = Q::from_integer(binomial((e - k + m) as u64, m as u64));
        let factor = slope.pow(m as u32).scale(&c);
        for (slot, entry) in row.iter_mut().zip(derivative_row(kind, k - m, h, y0)) {
            if !entry.is_zero() {
                *slot = &*slot + &(&entry * &factor);
            }
        }
    }
    row
}

/// All condition rows as polynomials in `x`, in block order: `y = 1`, each
/// moving mark, `y = 0`. Returns the rows and the size of each block.
fn condition_rows(kind: FormKind, movers: &[Poly<Q>]) -> (Vec<Row>, Vec<usize>) {
    let e = kind.exponent();
    let mut rows = Vec::new();
    let mut blocks = Vec::new();
    let one = Poly::one();
    let mut push_block = |rows: &mut Vec<Row>, mk: &dyn Fn(usize, usize) -> Row, bounds: &[i64], from: usize| {
        let before = rows.len();
        for k in from..=e {
            for h in 0..=bounds[k] {
                rows.push(mk(k, h as usize));
            }
        }
        blocks.push(rows.len() - before);
    };
    push_block(&mut rows, &|k, h| derivative_row(kind, k, h, &one), kind.a(), 1);
    for p in movers {
        let dp = p.derivative();
        push_block(&mut rows, &|k, h| transformed_row(kind, k, h, p, &dp), kind.a(), 1);
    }
    push_block(&mut rows, &|k, h| derivative_row(kind, k, h, &Poly::zero()), kind.b(), 0);
    (rows, blocks)
}

/// Coefficient of `x^i` in every entry.
fn slice(rows: &[Row], i: usize) -> Matrix<Q> {
    Matrix::from_rows(rows.iter().map(|r| r.iter().map(|p| p.coeff(i)).collect()).collect())
}

#[derive(Clone, Debug)]
pub struct PluriformSystem {
    pub kind: FormKind,
    /// Moving marks `p(x)` (and `q(x)`), exact polynomials in `x`.
    pub movers: Vec<Poly<Q>>,
    /// Conditions at `x = 0`.
    pub matrix: Matrix<Q>,
    pub block_sizes: Vec<usize>,
    pub rank: usize,
    pub kernel: Vec<Vec<Q>>,
}

impl PluriformSystem {
    pub fn build(kind: FormKind, movers: Vec<Poly<Q>>) -> Result<Self> {
        if movers.len() != kind.moving_marks() {
            return Err(invalid(format!("{} needs {} moving marks", kind.name(), kind.moving_marks())));
        }
        let mut values = vec![q_int(0), q_int(1)];
        for p in &movers {
            let v = p.coeff(0);
            if values.contains(&v) {
                return Err(invalid(format!("marked values collide at x = 0: {v}")));
            }
            values.push(v);
        }
        let (rows, block_sizes) = condition_rows(kind, &movers);
        let matrix = slice(&rows, 0);
        let ech = matrix.echelon();
        let rank = ech.pivots.len();
        let kernel = matrix.kernel_basis();
        Ok(PluriformSystem { kind, movers, matrix, block_sizes, rank, kernel })
    }

    /// Expands a kernel vector `v0` into `v(x) = Σ v_n x^n` with
    /// `M(x)·v(x) = 0` up to `x^order`, solving `M_0 v_n = −Σ M_i v_{n−i}`
    /// with free variables set to zero.
    pub fn extend(&self, v0: &[Q], order: usize) -> Result<PluriForm> {
        if self.matrix.mul_vec(v0).iter().any(|c| !c.is_zero()) {
            return Err(invalid("vector is not in the kernel"));
        }
        let (rows, _) = condition_rows(self.kind, &self.movers);
        let depth = rows.iter().flatten().map(Poly::degree_or_zero).max().unwrap_or(0);
        let slices: Vec<Matrix<Q>> = (1..=depth).map(|i| slice(&rows, i)).collect();
        let solver = PreparedSolver::new(&self.matrix);
        let mut series = vec![v0.to_vec()];
        for n in 1..=order {
            let mut rhs = vec![Q::zero(); self.matrix.rows()];
            for (i, m) in slices.iter().enumerate().take(n) {
                for (acc, v) in rhs.iter_mut().zip(m.mul_vec(&series[n - 1 - i])) {
                    *acc = acc.clone() - v;
                }
            }
            let next = solver.solve(&rhs).ok_or_else(|| {
                Error::Unsupported("conditions at x = 0 are dependent; the kernel vector does not extend".into())
            })?;
            series.push(next);
        }
        Ok(PluriForm { kind: self.kind, movers: self.movers.clone(), series, x_precision: order as i64 + 1 })
    }

    /// The form whose coefficients do not depend on `x`.
    pub fn constant_form(&self, v0: &[Q]) -> PluriForm {
        PluriForm { kind: self.kind, movers: self.movers.clone(), series: vec![v0.to_vec()], x_precision: EXACT }
    }
}

/// `p(x) = p0 + p1·x`.
pub fn linear_mark(p0: &Q, p1: &Q) -> Poly<Q> {
    Poly::new(vec![p0.clone(), p1.clone()])
}

pub fn build_w6_system(p0: &Q, p1: &Q) -> Result<PluriformSystem> {
    PluriformSystem::build(FormKind::W6, vec![linear_mark(p0, p1)])
}

pub fn build_w4_system(p0: &Q, p1: &Q, q0: &Q, q1: &Q) -> Result<PluriformSystem> {
    PluriformSystem::build(FormKind::W4, vec![linear_mark(p0, p1), linear_mark(q0, q1)])
}

/// Coefficients of `P_k(x, y)` as a power series in `x`, known modulo
/// `x^x_precision`.
#[derive(Clone, Debug)]
pub struct PluriForm {
    pub kind: FormKind,
    pub movers: Vec<Poly<Q>>,
    /// `series[n]` is the flattened coefficient vector of `x^n`.
    pub series: Vec<Vec<Q>>,
    pub x_precision: i64,
}

impl PluriForm {
    /// `P_k` restricted to the `x^n` coefficient, as a polynomial in `y`.
    pub fn coefficient(&self, k: usize, n: usize) -> Poly<Q> {
        let off = self.kind.offset(k);
        Poly::new(self.series[n][off..off + self.kind.caps()[k] + 1].to_vec())
    }

    /// Adds 1 to one entry of the `x^0` coefficient vector.
    pub fn perturbed(&self, index: usize) -> PluriForm {
        let mut f = self.clone();
        f.series[0][index] = f.series[0][index].clone() + q_int(1);
        f
    }

    /// Coefficient of `y^j` in `P_k(x, y)` as a series in `x`.
    fn y_coefficient(&self, k: usize, j: usize) -> TruncatedLaurent<Q> {
        let idx = self.kind.offset(k) + j;
        let cs: Vec<Q> = self.series.iter().map(|v| v[idx].clone()).collect();
        // The conditions at y = 0 do not involve x, so a coefficient they
        // kill at every computed order is zero exactly.
        if j as i64 <= self.kind.b()[k] && cs.iter().all(Zero::is_zero) {
            return TruncatedLaurent::zero(EXACT);
        }
        TruncatedLaurent::new(0, cs, self.x_precision)
    }
}

/// `[Σ_k P_k(x, s) s'^{e−k}] / D(x, s)` as a Laurent series in `x`.
pub fn pullback(form: &PluriForm, s: &TruncatedLaurent<Q>) -> Result<TruncatedLaurent<Q>> {
    let e = form.kind.exponent();
    let top = *form.kind.caps().iter().max().expect("caps");
    let mut powers = vec![TruncatedLaurent::constant(q_int(1), EXACT)];
    for j in 1..=top {
        powers.push(powers[j - 1].mul(s));
    }
    let ds = s.derivative();
    let mut num = TruncatedLaurent::zero(EXACT);
    for k in 0..=e {
        let mut pk = TruncatedLaurent::zero(EXACT);
        for (j, sj) in powers.iter().enumerate().take(form.kind.caps()[k] + 1) {
            pk = pk.add(&form.y_coefficient(k, j).mul(sj));
        }
        num = num.add(&pk.mul(&ds.pow((e - k) as u32)));
    }
    let (z0, z1, zm) = form.kind.denominator();
    let one = TruncatedLaurent::constant(q_int(1), EXACT);
    let mut den = s.pow(z0).mul(&s.sub(&one).pow(z1));
    for p in &form.movers {
        den = den.mul(&s.sub(&TruncatedLaurent::from_poly(p, EXACT)).pow(zm));
    }
    num.div(&den).ok_or_else(|| {
        Error::TruncationExhausted("denominator vanishes to the carried precision; the section may be a marked section".into())
    })
}

pub fn pullback_w6(form: &PluriForm, s: &TruncatedLaurent<Q>) -> Result<TruncatedLaurent<Q>> {
    if form.kind != FormKind::W6 {
        return Err(invalid("expected a w6 form"));
    }
    pullback(form, s)
}

pub fn pullback_w4(form: &PluriForm, s: &TruncatedLaurent<Q>) -> Result<TruncatedLaurent<Q>> {
    if form.kind != FormKind::W4 {
        return Err(invalid("expected a w4 form"));
    }
    pullback(form, s)
}

/// Whether the valuation is certainly at least `bound`; an undecided
/// comparison is an error rather than a guess.
pub fn certify_at_least(series: &TruncatedLaurent<Q>, bound: i64) -> Result<bool> {
    match series.valuation() {
        Valuation::Finite(v) => Ok(v >= bound),
        Valuation::ZeroToTruncation(p) if p >= bound => Ok(true),
        Valuation::ZeroToTruncation(p) => Err(Error::TruncationExhausted(format!(
            "series vanishes to x^{p} but x^{bound} is needed"
        ))),
    }
}

/// Required vanishing order along a section with a zero of order `r`.
pub fn zero_order_bound(kind: FormKind, r: i64) -> i64 {
    match kind {
        FormKind::W6 => (r - 1 + 1) / 2, // ceil((r − 1)/2)
        FormKind::W4 => (r + 1) / 2,     // ceil(r/2)
    }
}

/// Largest pole order of the form's coefficients; zero for polynomial
/// coefficients.
pub const POLE_ORDER_T: i64 = 0;

/// A family of test sections and the valuation each pullback must reach.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum SectionClass {
    InfinityTangent,
    OneTangent,
    /// Osculating to the moving mark with this index.
    Osculating(usize),
    HighOrderZero,
    /// Transverse to some mark; only the pole bound `T + 4` applies.
    Transverse,
}

impl SectionClass {
    pub fn label(self) -> String {
        match self {
            SectionClass::InfinityTangent => "infinity_tangent".into(),
            SectionClass::OneTangent => "one_tangent".into(),
            SectionClass::Osculating(0) => "p_osculating".into(),
            SectionClass::Osculating(_) => "q_osculating".into(),
            SectionClass::HighOrderZero => "high_order_zero".into(),
            SectionClass::Transverse => "pole_bound".into(),
        }
    }

    pub fn all(kind: FormKind) -> Vec<SectionClass> {
        let mut v = vec![SectionClass::InfinityTangent, SectionClass::OneTangent];
        v.extend((0..kind.moving_marks()).map(SectionClass::Osculating));
        v.push(SectionClass::HighOrderZero);
        v.push(SectionClass::Transverse);
        v
    }
}

/// A test section with a readable description.
#[derive(Clone, Debug)]
pub struct Witness {
    pub class: SectionClass,
    pub section: TruncatedLaurent<Q>,
    pub description: String,
    pub required: i64,
}

fn small_rational(rng: &mut ChaCha8Rng) -> Q {
    let n: i64 = rng.gen_range(-100..=100);
    let d: i64 = rng.gen_range(1..=100);
    q_frac(n, d)
}

fn nonzero_rational(rng: &mut ChaCha8Rng) -> Q {
    loop {
        let q = small_rational(rng);
        if !q.is_zero() {
            return q;
        }
    }
}

/// Random polynomial of degree ≤ 3 with nonzero constant term.
fn unit_poly(rng: &mut ChaCha8Rng) -> Poly<Q> {
    let deg = rng.gen_range(0..=3);
    let mut cs = vec![nonzero_rational(rng)];
    cs.extend((0..deg).map(|_| small_rational(rng)));
    Poly::new(cs)
}

/// `p(x)/x^shift` known to `trunc` terms past its leading one.
fn relative(p: &Poly<Q>, shift: i64, trunc: i64) -> TruncatedLaurent<Q> {
    let val = p.low_order().unwrap_or(0) as i64 - shift;
    TruncatedLaurent::from_poly_shifted(p, shift, val + trunc)
}

/// Draws one test section of the given class.
pub fn sample_section(kind: FormKind, movers: &[Poly<Q>], class: SectionClass, rng: &mut ChaCha8Rng, trunc: i64) -> Witness {
    let u = unit_poly(rng);
    let x = Poly::x();
    let (section, description, required) = match class {
        SectionClass::InfinityTangent => {
            let sigma = rng.gen_range(2..=3);
            (relative(&u, sigma, trunc), format!("({u})/x^{sigma}"), 0)
        }
        SectionClass::OneTangent => {
            let s = &Poly::one() + &(&x.pow(2) * &u);
            (relative(&s, 0, trunc), format!("{s}"), 0)
        }
        SectionClass::Osculating(i) => {
            let s = &movers[i] + &(&x.pow(2) * &u);
            (relative(&s, 0, trunc), format!("{s}"), 0)
        }
        SectionClass::HighOrderZero => {
            let lo = if kind == FormKind::W6 { 3 } else { 2 };
            let r = rng.gen_range(lo..=lo + 3);
            let s = &x.pow(r as u32) * &u;
            (relative(&s, 0, trunc), format!("{s}"), zero_order_bound(kind, r))
        }
        SectionClass::Transverse => {
            let targets = 3 + movers.len();
            let pick = rng.gen_range(0..=targets);
            let s = match pick {
                0 => relative(&u, 1, trunc),
                1 => relative(&(&x * &u), 0, trunc),
                2 => relative(&(&Poly::one() + &(&x * &u)), 0, trunc),
                k if k < targets => relative(&(&movers[k - 3] + &(&x * &u)), 0, trunc),
                _ => {
                    // generic value: avoid 0, 1 and the moving marks at x = 0
                    let mut c = nonzero_rational(rng);
                    while c == q_int(1) || movers.iter().any(|p| p.coeff(0) == c) {
                        c = nonzero_rational(rng);
                    }
                    relative(&(&Poly::constant(c) + &(&x * &u)), 0, trunc)
                }
            };
            let description = format!("transverse #{pick} with u = {u}");
            (s, description, -(POLE_ORDER_T + 4))
        }
    };
    Witness { class, section, description, required }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ClassSummary {
    pub class: String,
    pub checked: usize,
    pub passed: usize,
    pub min_valuation: Option<i64>,
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SuiteFailure {
    pub class: String,
    pub kernel_index: usize,
    pub witness: String,
    pub valuation: Option<i64>,
    pub required: i64,
    pub reason: String,
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SuiteReport {
    pub kind: FormKind,
    pub kernel_dimension: usize,
    pub trials: usize,
    pub classes: Vec<ClassSummary>,
    pub failures: Vec<SuiteFailure>,
}

impl SuiteReport {
    pub fn all_passed(&self) -> bool {
        self.failures.is_empty()
    }

    pub fn checked(&self) -> usize {
        self.classes.iter().map(|c| c.checked).sum()
    }
}

struct Outcome {
    valuation: Option<i64>,
    ok: bool,
    reason: String,
}

fn evaluate(form: &PluriForm, w: &Witness) -> Outcome {
    match pullback(form, &w.section) {
        Err(e) => Outcome { valuation: None, ok: false, reason: e.to_string() },
        Ok(series) => {
            let valuation = match series.valuation() {
                Valuation::Finite(v) => Some(v),
                Valuation::ZeroToTruncation(_) => None,
            };
            match certify_at_least(&series, w.required) {
                Ok(true) => Outcome { valuation, ok: true, reason: String::new() },
                Ok(false) => Outcome { valuation, ok: false, reason: "valuation below the requirement".into() },
                Err(e) => Outcome { valuation, ok: false, reason: e.to_string() },
            }
        }
    }
}

/// Runs `trials` pseudorandom sections of every class against each form.
/// Sections are drawn sequentially from the seed, then evaluated on `jobs`
/// threads; the report does not depend on `jobs`.
pub fn verify_forms(forms: &[PluriForm], trials: usize, seed: u64, trunc: i64, jobs: usize) -> SuiteReport {
    let kind = forms.first().map_or(FormKind::W6, |f| f.kind);
    let movers = forms.first().map(|f| f.movers.clone()).unwrap_or_default();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let classes = SectionClass::all(kind);
    let mut work: Vec<(usize, Witness)> = Vec::new();
    for (ki, _) in forms.iter().enumerate() {
        for &class in &classes {
            for _ in 0..trials {
                work.push((ki, sample_section(kind, &movers, class, &mut rng, trunc)));
            }
        }
    }
    let jobs = jobs.max(1);
    let chunk = work.len().div_ceil(jobs).max(1);
    let outcomes: Vec<Outcome> = thread::scope(|scope| {
        let handles: Vec<_> = work
            .chunks(chunk)
            .map(|part| scope.spawn(move || part.iter().map(|(ki, w)| evaluate(&forms[*ki], w)).collect::<Vec<_>>()))
            .collect();
        handles.into_iter().flat_map(|h| h.join().expect("worker panicked")).collect()
    });

    let mut summaries: Vec<ClassSummary> = classes
        .iter()
        .map(|c| ClassSummary { class: c.label(), checked: 0, passed: 0, min_valuation: None })
        .collect();
    let mut failures = Vec::new();
    for ((ki, w), out) in work.iter().zip(outcomes) {
        let idx = classes.iter().position(|c| *c == w.class).expect("known class");
        let s = &mut summaries[idx];
        s.checked += 1;
        if let Some(v) = out.valuation {
            s.min_valuation = Some(s.min_valuation.map_or(v, |m| m.min(v)));
        }
        if out.ok {
            s.passed += 1;
        } else {
            failures.push(SuiteFailure {
                class: w.class.label(),
                kernel_index: *ki,
                witness: w.description.clone(),
                valuation: out.valuation,
                required: w.required,
                reason: out.reason,
            });
        }
    }
    SuiteReport {
        kind,
        kernel_dimension: forms.len(),
        trials,
        classes: summaries,
        failures,
    }
}

/// Extends every kernel basis vector to order `trunc` and runs the suite.
pub fn verify_conditions_suite(sys: &PluriformSystem, trials: usize, seed: u64, trunc: i64, jobs: usize) -> Result<SuiteReport> {
    if sys.kernel.is_empty() {
        return Err(invalid("kernel is empty"));
    }
    let forms = sys
        .kernel
        .iter()
        .map(|v| sys.extend(v, (trunc / 2).max(1) as usize))
        .collect::<Result<Vec<_>>>()?;
    Ok(verify_forms(&forms, trials, seed, trunc, jobs))
}

/// Plain-text matrix: one row per line, entries separated by spaces.
pub fn matrix_to_text(m: &Matrix<Q>) -> String {
    let mut out = String::new();
    for r in 0..m.rows() {
        let line: Vec<String> = m.row(r).iter().map(|q| q.to_string()).collect();
        out.push_str(&line.join(" "));
        out.push('\n');
    }
    out
}
