//! Dense univariate polynomials over an exact field.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};

use super::scalar::{Scalar, Q};

/// Coefficients stored lowest degree first with no trailing zeros.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Poly<F: Scalar = Q> {
    coeffs: Vec<F>,
}

impl<F: Scalar> Poly<F> {
    pub fn new(mut coeffs: Vec<F>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Poly::constant(F::one())
    }

    pub fn constant(c: F) -> Self {
        Poly::new(vec![c])
    }

    /// The polynomial `x`.
    pub fn x() -> Self {
        Poly::new(vec![F::zero(), F::one()])
    }

    pub fn monomial(c: F, deg: usize) -> Self {
        let mut v = vec![F::zero(); deg + 1];
        v[deg] = c;
        Poly::new(v)
    }

    pub fn from_i64s(cs: &[i64]) -> Self {
        Poly::new(cs.iter().map(|&c| F::from_i64(c)).collect())
    }

    /// `(x - r_1)(x - r_2)...`
    pub fn from_roots(roots: &[F]) -> Self {
        roots.iter().fold(Poly::one(), |acc, r| {
            acc * Poly::new(vec![-r.clone(), F::one()])
        })
    }

    pub fn coeffs(&self) -> &[F] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> F {
        self.coeffs.get(i).cloned().unwrap_or_else(F::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Degree with the zero polynomial mapped to 0.
    pub fn degree_or_zero(&self) -> usize {
        self.degree().unwrap_or(0)
    }

    pub fn leading(&self) -> F {
        self.coeffs.last().cloned().unwrap_or_else(F::zero)
    }

    pub fn eval(&self, x: &F) -> F {
        self.coeffs
            .iter()
            .rev()
            .fold(F::zero(), |acc, c| acc * x.clone() + c.clone())
    }

    pub fn derivative(&self) -> Self {
        Poly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| F::from_i64(i as i64) * c.clone())
                .collect(),
        )
    }

    pub fn nth_derivative(&self, n: usize) -> Self {
        (0..n).fold(self.clone(), |p, _| p.derivative())
    }

    pub fn scale(&self, c: &F) -> Self {
        Poly::new(self.coeffs.iter().map(|a| a.clone() * c.clone()).collect())
    }

    pub fn pow(&self, n: u32) -> Self {
        (0..n).fold(Poly::one(), |acc, _| acc * self.clone())
    }

    /// `self(inner(x))`
    pub fn compose(&self, inner: &Poly<F>) -> Self {
        self.coeffs
            .iter()
            .rev()
            .fold(Poly::zero(), |acc, c| acc * inner.clone() + Poly::constant(c.clone()))
    }

    pub fn map<G: Scalar>(&self, f: impl Fn(&F) -> G) -> Poly<G> {
        Poly::new(self.coeffs.iter().map(f).collect())
    }

    /// Euclidean division; `None` when dividing by zero.
    pub fn div_rem(&self, d: &Poly<F>) -> Option<(Poly<F>, Poly<F>)> {
        let dd = d.degree()?;
        let lead_inv = d.leading().inv()?;
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return Some((Poly::zero(), self.clone()));
        }
        let mut quot = vec![F::zero(); rem.len() - dd];
        for i in (0..quot.len()).rev() {
            let c = rem[i + dd].clone() * lead_inv.clone();
            if !c.is_zero() {
                for (j, dc) in d.coeffs.iter().enumerate() {
                    rem[i + j] = rem[i + j].clone() - c.clone() * dc.clone();
                }
            }
            quot[i] = c;
        }
        rem.truncate(dd);
        Some((Poly::new(quot), Poly::new(rem)))
    }

    pub fn divides(&self, other: &Poly<F>) -> bool {
        match other.div_rem(self) {
            Some((_, r)) => r.is_zero(),
            None => other.is_zero(),
        }
    }

    /// Exact quotient; panics if the division leaves a remainder.
    pub fn exact_div(&self, d: &Poly<F>) -> Poly<F> {
        let (q, r) = self.div_rem(d).expect("division by zero polynomial");
        assert!(r.is_zero(), "inexact polynomial division");
        q
    }

    pub fn monic(&self) -> Self {
        match self.leading().inv() {
            Some(i) => self.scale(&i),
            None => Poly::zero(),
        }
    }

    /// Monic greatest common divisor (zero only if both inputs are zero).
    pub fn gcd(&self, other: &Poly<F>) -> Poly<F> {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b).expect("nonzero divisor");
            a = b;
            b = r;
        }
        a.monic()
    }

    /// Order of vanishing at `b`; `None` for the zero polynomial.
    pub fn order_at(&self, b: &F) -> Option<usize> {
        if self.is_zero() {
            return None;
        }
        let lin = Poly::new(vec![-b.clone(), F::one()]);
        let mut p = self.clone();
        let mut k = 0;
        loop {
            let (q, r) = p.div_rem(&lin).expect("linear divisor");
            if !r.is_zero() {
                return Some(k);
            }
            p = q;
            k += 1;
        }
    }

    /// Order of vanishing at 0 (index of the lowest nonzero coefficient).
    pub fn low_order(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }

    /// `x^n · p(1/x)`, the coefficient reversal used to look at infinity.
    pub fn reversed(&self, n: usize) -> Self {
        assert!(self.degree().is_none_or(|d| d <= n));
        let mut v = vec![F::zero(); n + 1];
        for (i, c) in self.coeffs.iter().enumerate() {
            v[n - i] = c.clone();
        }
        Poly::new(v)
    }

    /// Yun's algorithm: returns `(f_1, f_2, ...)` with `self = c · Π f_i^i`,
    /// every `f_i` monic squarefree and pairwise coprime. Empty for constants.
    pub fn squarefree_decomposition(&self) -> Vec<Poly<F>> {
        if self.degree_or_zero() == 0 {
            return Vec::new();
        }
        let f = self.monic();
        let df = f.derivative();
        let a0 = f.gcd(&df);
        let mut b = f.exact_div(&a0);
        let mut c = df.exact_div(&a0);
        let mut d = c - b.derivative();
        let mut out = Vec::new();
        while b.degree_or_zero() > 0 {
            let a = b.gcd(&d);
            b = b.exact_div(&a);
            c = d.exact_div(&a);
            d = c - b.derivative();
            out.push(a);
        }
        while out.last().is_some_and(|p| p.degree_or_zero() == 0) {
            out.pop();
        }
        out
    }

    /// The product of the distinct monic irreducible factors.
    pub fn squarefree_part(&self) -> Poly<F> {
        self.squarefree_decomposition()
            .into_iter()
            .fold(Poly::one(), |acc, f| acc * f)
    }
}

impl Poly<Q> {
    /// Rational roots with multiplicity via the rational root theorem on a
    /// primitive integer multiple.
    pub fn rational_roots(&self) -> Vec<(Q, usize)> {
        use num_bigint::BigInt;
        use num_integer::Integer;
        use num_traits::Signed;
        if self.degree_or_zero() == 0 {
            return Vec::new();
        }
        let mut out = Vec::new();
        let mut p = self.clone();
        if let Some(k) = p.order_at(&Q::zero()) {
            if k > 0 {
                out.push((Q::zero(), k));
                p = Poly::new(p.coeffs[k..].to_vec());
            }
        }
        if p.degree_or_zero() == 0 {
            return out;
        }
        let lcm = p
            .coeffs
            .iter()
            .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let ints: Vec<BigInt> = p.coeffs.iter().map(|c| (c * Q::from_integer(lcm.clone())).to_integer()).collect();
        let a0 = ints[0].abs();
        let an = ints[ints.len() - 1].abs();
        let divisors = |n: &BigInt| -> Vec<BigInt> {
            let mut v = Vec::new();
            let mut i = BigInt::one();
            while &i * &i <= *n {
                if (n % &i).is_zero() {
                    v.push(i.clone());
                    let j = n / &i;
                    if j != i {
                        v.push(j);
                    }
                }
                i += 1;
            }
            v
        };
        let mut cands: Vec<Q> = Vec::new();
        for num in divisors(&a0) {
            for den in divisors(&an) {
                for s in [1i64, -1] {
                    let c = Q::new(&num * BigInt::from(s), den.clone());
                    if !cands.contains(&c) {
                        cands.push(c);
                    }
                }
            }
        }
        cands.sort();
        for c in cands {
            if let Some(k) = p.order_at(&c) {
                if k > 0 {
                    out.push((c, k));
                }
            }
        }
        out.sort_by(|a, b| a.0.cmp(&b.0));
        out
    }
}

impl PartialOrd for Poly<Q> {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Poly<Q> {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.degree_or_zero()
            .cmp(&other.degree_or_zero())
            .then_with(|| self.coeffs().iter().rev().cmp(other.coeffs().iter().rev()))
    }
}

impl<F: Scalar> Add for Poly<F> {
    type Output = Poly<F>;
    fn add(self, o: Poly<F>) -> Poly<F> {
        let n = self.coeffs.len().max(o.coeffs.len());
        Poly::new((0..n).map(|i| self.coeff(i) + o.coeff(i)).collect())
    }
}

impl<F: Scalar> Sub for Poly<F> {
    type Output = Poly<F>;
    fn sub(self, o: Poly<F>) -> Poly<F> {
        let n = self.coeffs.len().max(o.coeffs.len());
        Poly::new((0..n).map(|i| self.coeff(i) - o.coeff(i)).collect())
    }
}

impl<F: Scalar> Add<&Poly<F>> for &Poly<F> {
    type Output = Poly<F>;
    fn add(self, o: &Poly<F>) -> Poly<F> {
        let n = self.coeffs.len().max(o.coeffs.len());
        Poly::new((0..n).map(|i| self.coeff(i) + o.coeff(i)).collect())
    }
}

impl<F: Scalar> Sub<&Poly<F>> for &Poly<F> {
    type Output = Poly<F>;
    fn sub(self, o: &Poly<F>) -> Poly<F> {
        let n = self.coeffs.len().max(o.coeffs.len());
        Poly::new((0..n).map(|i| self.coeff(i) - o.coeff(i)).collect())
    }
}

impl<F: Scalar> Neg for Poly<F> {
    type Output = Poly<F>;
    fn neg(self) -> Poly<F> {
        Poly::new(self.coeffs.into_iter().map(|c| -c).collect())
    }
}

impl<F: Scalar> Mul for Poly<F> {
    type Output = Poly<F>;
    fn mul(self, o: Poly<F>) -> Poly<F> {
        &self * &o
    }
}

impl<F: Scalar> Mul<&Poly<F>> for &Poly<F> {
    type Output = Poly<F>;
    fn mul(self, o: &Poly<F>) -> Poly<F> {
        if self.is_zero() || o.is_zero() {
            return Poly::zero();
        }
        let mut v = vec![F::zero(); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate() {
                v[i + j] = v[i + j].clone() + a.clone() * b.clone();
            }
        }
        Poly::new(v)
    }
}

impl<F: Scalar> fmt::Display for Poly<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match i {
                0 => write!(f, "{c}")?,
                1 => write!(f, "({c})x")?,
                _ => write!(f, "({c})x^{i}")?,
            }
        }
        Ok(())
    }
}

impl<F: Scalar> Default for Poly<F> {
    fn default() -> Self {
        Poly::zero()
    }
}

/// Formal derivative.
pub fn poly_derivative<F: Scalar>(p: &Poly<F>) -> Poly<F> {
    p.derivative()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::scalar::{q_frac, q_int};

    fn p(cs: &[i64]) -> Poly<Q> {
        Poly::from_i64s(cs)
    }

    #[test]
    fn derivative_examples() {
        assert_eq!(poly_derivative(&p(&[0, 0, 1])), p(&[0, 2]));
        assert_eq!(poly_derivative(&p(&[5])), Poly::zero());
        assert_eq!(poly_derivative(&p(&[0, -1, 0, 1])), p(&[-1, 0, 3]));
    }

    #[test]
    fn division_and_gcd() {
        let a = p(&[-1, 0, 1]);
        let b = p(&[1, 1]);
        let (q, r) = a.div_rem(&b).unwrap();
        assert_eq!(q, p(&[-1, 1]));
        assert!(r.is_zero());
        assert_eq!(a.gcd(&p(&[-1, 1])), p(&[-1, 1]));
        assert_eq!(p(&[1, 1]).gcd(&p(&[2, 1])), Poly::one());
    }

    #[test]
    fn orders_and_roots() {
        let f = Poly::from_roots(&[q_int(2), q_int(2), q_frac(-1, 3)]);
        assert_eq!(f.order_at(&q_int(2)), Some(2));
        assert_eq!(f.order_at(&q_int(0)), Some(0));
        assert_eq!(
            f.scale(&q_int(6)).rational_roots(),
            vec![(q_frac(-1, 3), 1), (q_int(2), 2)]
        );
        assert_eq!(p(&[1, 0, 1]).rational_roots(), vec![]);
    }

    #[test]
    fn squarefree() {
        // (x-1)^3 (x+2)^2 x
        let f = Poly::from_roots(&[q_int(1), q_int(1), q_int(1), q_int(-2), q_int(-2), q_int(0)]);
        let d = f.squarefree_decomposition();
        assert_eq!(d.len(), 3);
        assert_eq!(d[0], p(&[0, 1]));
        assert_eq!(d[1], p(&[2, 1]));
        assert_eq!(d[2], p(&[-1, 1]));
    }

    #[test]
    fn compose_and_reverse() {
        let f = p(&[1, 0, 1]);
        assert_eq!(f.compose(&p(&[1, 1])), p(&[2, 2, 1]));
        assert_eq!(p(&[1, 2]).reversed(3), p(&[0, 0, 2, 1]));
    }
}
