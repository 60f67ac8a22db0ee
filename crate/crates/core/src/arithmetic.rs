//! Orbifold rational points of the projective line over Q: intersection
//! valuations, height-bounded enumeration through powerful numbers, and abc
//! diagnostics.

use std::collections::BTreeSet;
use std::fmt;
use std::sync::OnceLock;
use std::thread;

use num_integer::Integer;

use crate::error::{invalid, Error, Result};

/// `(a : c)` with `gcd(a, c) = 1` and `c > 0`, or `(1 : 0)`.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Debug, Hash)]
pub struct ProjectivePoint {
    pub a: i64,
    pub c: i64,
}

impl ProjectivePoint {
    pub fn new(a: i64, c: i64) -> Result<Self> {
        if a == 0 && c == 0 {
            return Err(invalid("(0 : 0) is not a point"));
        }
        let g = a.gcd(&c);
        let (mut a, mut c) = (a / g, c / g);
        if c < 0 || (c == 0 && a < 0) {
            a = -a;
            c = -c;
        }
        Ok(ProjectivePoint { a, c })
    }

    pub fn zero() -> Self {
        ProjectivePoint { a: 0, c: 1 }
    }

    pub fn one() -> Self {
        ProjectivePoint { a: 1, c: 1 }
    }

    pub fn infinity() -> Self {
        ProjectivePoint { a: 1, c: 0 }
    }

    /// `max(|a|, |c − a|, |c|)`.
    pub fn height(&self) -> u64 {
        let b = self.c as i128 - self.a as i128;
        (self.a.unsigned_abs() as u128).max(b.unsigned_abs()).max(self.c.unsigned_abs() as u128) as u64
    }
}

impl fmt::Display for ProjectivePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({} : {})", self.a, self.c)
    }
}

/// Factorization by a smallest-prime-factor table, with trial division past it.
#[derive(Clone, Debug)]
pub struct Factorizer {
    spf: Vec<u32>,
}

impl Factorizer {
    pub fn new(limit: usize) -> Self {
        let limit = limit.max(2);
        let mut spf = vec![0u32; limit + 1];
        for i in 2..=limit {
            if spf[i] == 0 {
                let mut j = i;
                while j <= limit {
                    if spf[j] == 0 {
                        spf[j] = i as u32;
                    }
                    j += i;
                }
            }
        }
        Factorizer { spf }
    }

    pub fn limit(&self) -> u64 {
        (self.spf.len() - 1) as u64
    }

    pub fn primes(&self) -> impl Iterator<Item = u64> + '_ {
        (2..self.spf.len()).filter(|&i| self.spf[i] as usize == i).map(|i| i as u64)
    }

    /// Prime factorization of `n ≥ 1` in increasing order.
    pub fn factor(&self, mut n: u128) -> Vec<(u64, u32)> {
        let mut out: Vec<(u64, u32)> = Vec::new();
        let push = |p: u64, out: &mut Vec<(u64, u32)>| match out.last_mut() {
            Some((q, e)) if *q == p => *e += 1,
            _ => out.push((p, 1)),
        };
        while n > self.limit() as u128 {
            let mut d = 2u128;
            let mut found = false;
            while d * d <= n {
                if n.is_multiple_of(d) {
                    push(d as u64, &mut out);
                    n /= d;
                    found = true;
                    break;
                }
                d += if d == 2 { 1 } else { 2 };
            }
            if !found {
                push(n as u64, &mut out);
                return out;
            }
        }
        let mut n = n as usize;
        while n > 1 {
            let p = self.spf[n] as usize;
            push(p as u64, &mut out);
            n /= p;
        }
        out
    }
}

/// `v`-adic valuation of a nonzero integer.
pub fn valuation(n: i128, v: u64) -> u32 {
    assert!(n != 0);
    let v = v as i128;
    let mut n = n;
    let mut e = 0;
    while n % v == 0 {
        n /= v;
        e += 1;
    }
    e
}

fn cross(x: &ProjectivePoint, p: &ProjectivePoint) -> i128 {
    x.a as i128 * p.c as i128 - x.c as i128 * p.a as i128
}

/// `v(a_x·c_p − c_x·a_p)`, or `None` when `x = p`.
pub fn intersection_valuation(x: &ProjectivePoint, p: &ProjectivePoint, v: u64) -> Option<u32> {
    match cross(x, p) {
        0 => None,
        d => Some(valuation(d, v)),
    }
}

/// Marked points with multiplicities and the excluded primes `M`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ArithOrbifoldSpec {
    pub marks: Vec<(ProjectivePoint, u32)>,
    pub excluded: BTreeSet<u64>,
}

impl ArithOrbifoldSpec {
    pub fn new(marks: Vec<(ProjectivePoint, u32)>, excluded: BTreeSet<u64>) -> Result<Self> {
        for (i, (p, m)) in marks.iter().enumerate() {
            if *m < 2 {
                return Err(invalid(format!("multiplicity {m} at {p} is below 2")));
            }
            if marks[..i].iter().any(|(q, _)| q == p) {
                return Err(invalid(format!("mark {p} repeated")));
            }
        }
        Ok(ArithOrbifoldSpec { marks, excluded })
    }

    /// Marks `u` at 0, `v` at 1, `w` at ∞.
    pub fn standard(u: u32, v: u32, w: u32, excluded: BTreeSet<u64>) -> Result<Self> {
        ArithOrbifoldSpec::new(
            vec![(ProjectivePoint::zero(), u), (ProjectivePoint::one(), v), (ProjectivePoint::infinity(), w)],
            excluded,
        )
    }

    /// `(u, v, w)` when the first three marks are 0, 1, ∞ in that order.
    pub fn standard_exponents(&self) -> Option<(u32, u32, u32)> {
        match self.marks.as_slice() {
            [(z, u), (o, v), (i, w), ..]
                if *z == ProjectivePoint::zero() && *o == ProjectivePoint::one() && *i == ProjectivePoint::infinity() =>
            {
                Some((*u, *v, *w))
            }
            _ => None,
        }
    }

    pub fn label(&self) -> String {
        let ms: Vec<String> = self.marks.iter().map(|(p, m)| format!("{m}@{}", point_label(p))).collect();
        ms.join(",")
    }
}

fn point_label(p: &ProjectivePoint) -> String {
    match (p.a, p.c) {
        (_, 0) => "inf".into(),
        (a, 1) => a.to_string(),
        (a, c) => format!("{a}/{c}"),
    }
}

/// Per-mark prime valuations of a point, primes with positive valuation only.
pub fn point_valuations(x: &ProjectivePoint, spec: &ArithOrbifoldSpec, f: &Factorizer) -> Result<Vec<Vec<(u64, u32)>>> {
    spec.marks
        .iter()
        .map(|(p, _)| match cross(x, p) {
            0 => Err(Error::InvalidInput(format!("{x} coincides with the mark {p}"))),
            d => Ok(f.factor(d.unsigned_abs())),
        })
        .collect()
}

/// Every valuation against `p_j` at a prime outside `M` is 0 or at least `m_j`.
pub fn is_orbifold_point_with(x: &ProjectivePoint, spec: &ArithOrbifoldSpec, f: &Factorizer) -> Result<bool> {
    let vals = point_valuations(x, spec, f)?;
    Ok(vals.iter().zip(&spec.marks).all(|(fac, (_, m))| {
        fac.iter().all(|(p, e)| spec.excluded.contains(p) || *e >= *m)
    }))
}

pub fn is_orbifold_point(x: &ProjectivePoint, spec: &ArithOrbifoldSpec) -> Result<bool> {
    static SMALL: OnceLock<Factorizer> = OnceLock::new();
    is_orbifold_point_with(x, spec, SMALL.get_or_init(|| Factorizer::new(1 << 16)))
}

/// Every prime outside `excluded` divides `n` to order at least `e`.
pub fn is_powerful_outside(n: u64, e: u32, excluded: &BTreeSet<u64>, f: &Factorizer) -> bool {
    n != 0 && f.factor(n as u128).iter().all(|(p, k)| excluded.contains(p) || *k >= e)
}

/// All `1 ≤ n ≤ bound` whose primes outside `excluded` occur with exponent
/// at least `e`, by depth-first search over exponent vectors.
pub fn powerful_numbers(bound: u64, e: u32, excluded: &BTreeSet<u64>, primes: &[u64]) -> Vec<u64> {
    fn dfs(n: u64, from: usize, bound: u64, e: u32, excluded: &BTreeSet<u64>, primes: &[u64], out: &mut Vec<u64>) {
        out.push(n);
        for (i, &p) in primes.iter().enumerate().skip(from) {
            let first = if excluded.contains(&p) { 1 } else { e };
            let Some(mut m) = p.checked_pow(first).and_then(|q| n.checked_mul(q)) else { break };
            if m > bound {
                // later primes only grow, except that an excluded one needs exponent 1
                if excluded.contains(&p) || excluded.iter().all(|&q| q <= p) {
                    break;
                }
                continue;
            }
            loop {
                dfs(m, i + 1, bound, e, excluded, primes, out);
                match m.checked_mul(p) {
                    Some(next) if next <= bound => m = next,
                    _ => break,
                }
            }
        }
    }
    let mut out = Vec::new();
    if bound >= 1 {
        dfs(1, 0, bound, e, excluded, primes, &mut out);
    }
    out.sort_unstable();
    out
}

/// One enumerated point with its audit data.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct PointRecord {
    pub point: ProjectivePoint,
    pub b: i64,
    pub height: u64,
    /// Per mark, the prime factorization of the intersection number.
    pub valuations: Vec<Vec<(u64, u32)>>,
}

/// Orbifold points of height at most `h` for a spec whose first marks are
/// 0, 1, ∞. Candidates for `|a|` and `c` are the powerful numbers for the
/// marks at 0 and ∞; `b = c − a` and any further marks are filtered.
pub fn enumerate_points(spec: &ArithOrbifoldSpec, h: u64, jobs: usize) -> Result<Vec<PointRecord>> {
    let (u, v, w) = spec
        .standard_exponents()
        .ok_or_else(|| invalid("enumeration needs the marks 0, 1, inf first"))?;
    if h == 0 {
        return Ok(Vec::new());
    }
    let f = Factorizer::new((4 * h as usize).max(16));
    let primes: Vec<u64> = f.primes().take_while(|&p| p <= h).collect();
    let a_cands = powerful_numbers(h, u, &spec.excluded, &primes);
    let c_cands = powerful_numbers(h, w, &spec.excluded, &primes);
    let jobs = jobs.max(1);
    let chunk = c_cands.len().div_ceil(jobs).max(1);
    let shard = |cs: &[u64]| -> Result<Vec<PointRecord>> {
        let mut out = Vec::new();
        for &c in cs {
            for &a_abs in &a_cands {
                for a in [a_abs as i64, -(a_abs as i64)] {
                    let b = c as i64 - a;
                    if b == 0 || b.unsigned_abs() > h || a_abs.gcd(&c) != 1 {
                        continue;
                    }
                    if !is_powerful_outside(b.unsigned_abs(), v, &spec.excluded, &f) {
                        continue;
                    }
                    let x = ProjectivePoint { a, c: c as i64 };
                    if spec.marks[3..].iter().any(|(p, _)| *p == x) {
                        continue;
                    }
                    if !is_orbifold_point_with(&x, spec, &f)? {
                        continue;
                    }
                    out.push(PointRecord { point: x, b, height: x.height(), valuations: point_valuations(&x, spec, &f)? });
                }
            }
        }
        Ok(out)
    };
    let parts: Vec<Result<Vec<PointRecord>>> = if jobs <= 1 || cfg!(target_arch = "wasm32") {
        vec![shard(&c_cands)]
    } else {
        thread::scope(|scope| {
            let handles: Vec<_> = c_cands.chunks(chunk).map(|cs| scope.spawn(move || shard(cs))).collect();
            handles.into_iter().map(|h| h.join().expect("shard panicked")).collect()
        })
    };
    let mut all = Vec::new();
    for p in parts {
        all.extend(p?);
    }
    all.sort_by_key(|x| (x.height, x.point));
    Ok(all)
}

/// `rad(abc)` and `log max(|a|,|b|,|c|) / log rad(abc)`.
#[derive(Clone, PartialEq, Debug)]
pub struct AbcQuality {
    pub rad: u128,
    pub quality: f64,
}

impl AbcQuality {
    /// Quality rounded to six decimals, the reported precision.
    pub fn quality_string(&self) -> String {
        format!("{:.6}", self.quality)
    }
}

pub fn abc_quality(a: i64, b: i64, c: i64) -> Result<AbcQuality> {
    if a == 0 || b == 0 || c == 0 || a as i128 + b as i128 != c as i128 {
        return Err(invalid("need nonzero a, b, c with a + b = c"));
    }
    if a.gcd(&b) != 1 || b.gcd(&c) != 1 || a.gcd(&c) != 1 {
        return Err(invalid("a, b, c must be pairwise coprime"));
    }
    let f = Factorizer::new(1 << 16);
    let mut primes = BTreeSet::new();
    for n in [a, b, c] {
        primes.extend(f.factor(n.unsigned_abs() as u128).into_iter().map(|(p, _)| p));
    }
    let rad: u128 = primes.iter().map(|&p| p as u128).product();
    let top = a.unsigned_abs().max(b.unsigned_abs()).max(c.unsigned_abs()) as f64;
    Ok(AbcQuality { rad, quality: top.ln() / (rad as f64).ln() })
}

/// The five minimal general-type specifications with `M = ∅`.
pub fn conjecture_specs() -> Vec<(String, ArithOrbifoldSpec)> {
    let pt = |a, c| ProjectivePoint::new(a, c).expect("valid point");
    let none = BTreeSet::new;
    vec![
        ("(2,3,7)".into(), ArithOrbifoldSpec::standard(2, 3, 7, none()).expect("valid")),
        ("(2,4,5)".into(), ArithOrbifoldSpec::standard(2, 4, 5, none()).expect("valid")),
        ("(3,3,4)".into(), ArithOrbifoldSpec::standard(3, 3, 4, none()).expect("valid")),
        (
            "(2,2,2,3)".into(),
            ArithOrbifoldSpec::new(vec![(pt(0, 1), 3), (pt(1, 1), 2), (pt(1, 0), 2), (pt(-1, 1), 2)], none())
                .expect("valid"),
        ),
        (
            "(2,2,2,2,2)".into(),
            ArithOrbifoldSpec::new(
                vec![(pt(0, 1), 2), (pt(1, 1), 2), (pt(1, 0), 2), (pt(2, 1), 2), (pt(1, 2), 2)],
                none(),
            )
            .expect("valid"),
        ),
    ]
}

#[derive(Clone, PartialEq, Debug)]
pub struct Rung {
    pub height: u64,
    pub count: usize,
    pub max_quality: Option<f64>,
}

#[derive(Clone, PartialEq, Debug)]
pub struct FinitenessRow {
    pub name: String,
    pub spec: String,
    pub rungs: Vec<Rung>,
}

/// Point counts of the five specifications along a height ladder.
pub fn finiteness_report(ladder: &[u64], jobs: usize) -> Result<Vec<FinitenessRow>> {
    let top = ladder.iter().copied().max().unwrap_or(0);
    conjecture_specs()
        .into_iter()
        .map(|(name, spec)| {
            let pts = enumerate_points(&spec, top, jobs)?;
            let rungs = ladder
                .iter()
                .map(|&h| {
                    let within: Vec<&PointRecord> = pts.iter().filter(|p| p.height <= h).collect();
                    let max_quality = within
                        .iter()
                        .filter_map(|p| abc_quality(p.point.a, p.b, p.point.c).ok())
                        .map(|q| q.quality)
                        .fold(None, |m: Option<f64>, q| Some(m.map_or(q, |m| m.max(q))));
                    Rung { height: h, count: within.len(), max_quality }
                })
                .collect();
            Ok(FinitenessRow { name, spec: spec.label(), rungs })
        })
        .collect()
}

/// Images under `x ↦ x²` of the points of (m at 0, m at ∞, 2 at 1, 2 at −1)
/// checked against (2m at 0, 2 at 1, 2m at ∞) with 2 added to `M`.
/// Returns the number of points checked and those whose image fails.
pub fn squaring_compatibility(m: u32, h: u64, excluded: &BTreeSet<u64>) -> Result<(usize, Vec<ProjectivePoint>)> {
    let minus_one = ProjectivePoint::new(-1, 1)?;
    let src = ArithOrbifoldSpec::new(
        vec![(ProjectivePoint::zero(), m), (ProjectivePoint::one(), 2), (ProjectivePoint::infinity(), m), (minus_one, 2)],
        excluded.clone(),
    )?;
    let mut tgt_excluded = excluded.clone();
    tgt_excluded.insert(2);
    let tgt = ArithOrbifoldSpec::standard(2 * m, 2, 2 * m, tgt_excluded)?;
    let f = Factorizer::new((4 * h * h) as usize + 16);
    let pts = enumerate_points(&src, h, 1)?;
    let mut bad = Vec::new();
    for p in &pts {
        let x = p.point;
        let image = ProjectivePoint::new(x.a * x.a, x.c * x.c)?;
        if !is_orbifold_point_with(&image, &tgt, &f)? {
            bad.push(x);
        }
    }
    Ok((pts.len(), bad))
}
