//! Dense bivariate polynomials `Σ c_ij x^i y^j`.

use std::collections::BTreeMap;



use super::poly::Poly;
use super::scalar::{Scalar, Q};

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct BiPoly<F: Scalar = Q> {
    /// `terms[(i, j)]` is the coefficient of `x^i y^j`; zeros are never stored.
    terms: BTreeMap<(usize, usize), F>,
}

impl<F: Scalar> BiPoly<F> {
    pub fn zero() -> Self {
        BiPoly { terms: BTreeMap::new() }
    }

    pub fn constant(c: F) -> Self {
        BiPoly::monomial(c, 0, 0)
    }

    pub fn monomial(c: F, i: usize, j: usize) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert((i, j), c);
        }
        BiPoly { terms }
    }

    pub fn x() -> Self {
        BiPoly::monomial(F::one(), 1, 0)
    }

    pub fn y() -> Self {
        BiPoly::monomial(F::one(), 0, 1)
    }

    pub fn from_terms(it: impl IntoIterator<Item = ((usize, usize), F)>) -> Self {
        let mut p = BiPoly::zero();
        for ((i, j), c) in it {
            p.add_term(i, j, c);
        }
        p
    }

    /// Polynomial in `x` only.
    pub fn from_x_poly(p: &Poly<F>) -> Self {
        BiPoly::from_terms(p.coeffs().iter().enumerate().map(|(i, c)| ((i, 0), c.clone())))
    }

    /// Polynomial in `y` only.
    pub fn from_y_poly(p: &Poly<F>) -> Self {
        BiPoly::from_terms(p.coeffs().iter().enumerate().map(|(j, c)| ((0, j), c.clone())))
    }

    pub fn add_term(&mut self, i: usize, j: usize, c: F) {
        if c.is_zero() {
            return;
        }
        let e = self.terms.entry((i, j)).or_insert_with(F::zero);
        *e = e.clone() + c;
        if e.is_zero() {
            self.terms.remove(&(i, j));
        }
    }

    pub fn coeff(&self, i: usize, j: usize) -> F {
        self.terms.get(&(i, j)).cloned().unwrap_or_else(F::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(usize, usize), &F)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn total_degree(&self) -> Option<usize> {
        self.terms.keys().map(|(i, j)| i + j).max()
    }

    /// Largest power of `x` (resp. `y`) present.
    pub fn degree_x(&self) -> Option<usize> {
        self.terms.keys().map(|(i, _)| *i).max()
    }

    pub fn degree_y(&self) -> Option<usize> {
        self.terms.keys().map(|(_, j)| *j).max()
    }

    pub fn eval(&self, x: &F, y: &F) -> F {
        self.terms.iter().fold(F::zero(), |acc, ((i, j), c)| {
            acc + c.clone() * pow(x, *i) * pow(y, *j)
        })
    }

    pub fn dx(&self) -> Self {
        BiPoly::from_terms(
            self.terms
                .iter()
                .filter(|((i, _), _)| *i > 0)
                .map(|((i, j), c)| ((i - 1, *j), F::from_i64(*i as i64) * c.clone())),
        )
    }

    pub fn dy(&self) -> Self {
        BiPoly::from_terms(
            self.terms
                .iter()
                .filter(|((_, j), _)| *j > 0)
                .map(|((i, j), c)| ((*i, j - 1), F::from_i64(*j as i64) * c.clone())),
        )
    }

    /// Partial derivative `∂^{a+b} / ∂x^a ∂y^b`.
    pub fn partial(&self, a: usize, b: usize) -> Self {
        let mut p = self.clone();
        for _ in 0..a {
            p = p.dx();
        }
        for _ in 0..b {
            p = p.dy();
        }
        p
    }

    pub fn scale(&self, c: &F) -> Self {
        BiPoly::from_terms(self.terms.iter().map(|(k, v)| (*k, v.clone() * c.clone())))
    }

    pub fn pow(&self, n: u32) -> Self {
        (0..n).fold(BiPoly::constant(F::one()), |acc, _| &acc * self)
    }

    /// `self(u(x, y), v(x, y))`.
    pub fn substitute(&self, u: &BiPoly<F>, v: &BiPoly<F>) -> BiPoly<F> {
        let du = self.degree_x().unwrap_or(0);
        let dv = self.degree_y().unwrap_or(0);
        let mut upow = vec![BiPoly::constant(F::one())];
        for k in 0..du {
            upow.push(&upow[k] * u);
        }
        let mut vpow = vec![BiPoly::constant(F::one())];
        for k in 0..dv {
            vpow.push(&vpow[k] * v);
        }
        let mut out = BiPoly::zero();
        for ((i, j), c) in &self.terms {
            out = out + (&upow[*i] * &vpow[*j]).scale(c);
        }
        out
    }

    /// Restriction to the parametrized curve `t ↦ (x(t), y(t))`.
    pub fn along(&self, x: &Poly<F>, y: &Poly<F>) -> Poly<F> {
        let du = self.degree_x().unwrap_or(0);
        let dv = self.degree_y().unwrap_or(0);
        let mut xp = vec![Poly::one()];
        for k in 0..du {
            xp.push(&xp[k] * x);
        }
        let mut yp = vec![Poly::one()];
        for k in 0..dv {
            yp.push(&yp[k] * y);
        }
        self.terms.iter().fold(Poly::zero(), |acc, ((i, j), c)| {
            acc + (&xp[*i] * &yp[*j]).scale(c)
        })
    }

    /// Coefficient of `x^i` as a polynomial in `y`.
    pub fn x_coefficient(&self, i: usize) -> Poly<F> {
        let dv = self.degree_y().unwrap_or(0);
        Poly::new((0..=dv).map(|j| self.coeff(i, j)).collect())
    }

    pub fn map<G: Scalar>(&self, f: impl Fn(&F) -> G) -> BiPoly<G> {
        BiPoly::from_terms(self.terms.iter().map(|(k, v)| (*k, f(v))))
    }

    /// Top-degree homogeneous part evaluated on the direction `(a, b)`:
    /// the value of the homogenized polynomial at the point `(a : b : 0)`.
    pub fn at_infinity(&self, degree: usize, a: &F, b: &F) -> F {
        self.terms
            .iter()
            .filter(|((i, j), _)| i + j == degree)
            .fold(F::zero(), |acc, ((i, j), c)| acc + c.clone() * pow(a, *i) * pow(b, *j))
    }
}

fn pow<F: Scalar>(x: &F, n: usize) -> F {
    (0..n).fold(F::one(), |acc, _| acc * x.clone())
}

impl<F: Scalar> std::ops::Add for BiPoly<F> {
    type Output = BiPoly<F>;
    fn add(mut self, o: BiPoly<F>) -> BiPoly<F> {
        for ((i, j), c) in o.terms {
            self.add_term(i, j, c);
        }
        self
    }
}

impl<F: Scalar> std::ops::Sub for BiPoly<F> {
    type Output = BiPoly<F>;
    fn sub(mut self, o: BiPoly<F>) -> BiPoly<F> {
        for ((i, j), c) in o.terms {
            self.add_term(i, j, -c);
        }
        self
    }
}

impl<F: Scalar> std::ops::Neg for BiPoly<F> {
    type Output = BiPoly<F>;
    fn neg(self) -> BiPoly<F> {
        BiPoly::from_terms(self.terms.into_iter().map(|(k, v)| (k, -v)))
    }
}

impl<F: Scalar> std::ops::Mul<&BiPoly<F>> for &BiPoly<F> {
    type Output = BiPoly<F>;
    fn mul(self, o: &BiPoly<F>) -> BiPoly<F> {
        let mut out = BiPoly::zero();
        for ((i, j), a) in &self.terms {
            for ((k, l), b) in &o.terms {
                out.add_term(i + k, j + l, a.clone() * b.clone());
            }
        }
        out
    }
}

impl<F: Scalar> std::ops::Mul for BiPoly<F> {
    type Output = BiPoly<F>;
    fn mul(self, o: BiPoly<F>) -> BiPoly<F> {
        &self * &o
    }
}
