//! Scalar rings used throughout the crate: the rationals and the Gaussian
//! rationals `a + b·i`.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Arbitrary-precision rational, always stored in lowest terms with a
/// positive denominator.
pub type Q = BigRational;

/// Exact field elements. Every operation is total except `inv` of zero.
pub trait Scalar:
    Clone
    + PartialEq
    + Eq
    + fmt::Debug
    + fmt::Display
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
    + Send
    + Sync
{
    fn inv(&self) -> Option<Self>;
    fn from_q(q: &Q) -> Self;

    fn from_i64(n: i64) -> Self {
        Self::from_q(&q_int(n))
    }

    fn div(&self, other: &Self) -> Option<Self> {
        other.inv().map(|i| self.clone() * i)
    }
}

impl Scalar for Q {
    fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            None
        } else {
            Some(self.recip())
        }
    }

    fn from_q(q: &Q) -> Self {
        q.clone()
    }
}

pub fn q_int(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

pub fn q_frac(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

/// Parses `"p/q"`, `"p"` or a negative variant of either.
pub fn parse_q(s: &str) -> Option<Q> {
    let s = s.trim();
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().ok()?;
            let d: BigInt = d.trim().parse().ok()?;
            if d.is_zero() {
                None
            } else {
                Some(Q::new(n, d))
            }
        }
        None => s.parse::<BigInt>().ok().map(Q::from_integer),
    }
}

/// Smallest integer `>= q`.
pub fn q_ceil(q: &Q) -> BigInt {
    q.ceil().to_integer()
}

/// Largest integer `<= q`.
pub fn q_floor(q: &Q) -> BigInt {
    q.floor().to_integer()
}

pub fn binomial(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

/// `n! / (n - h)!`, the coefficient produced by differentiating `y^n` h times.
pub fn falling_factorial(n: u64, h: u64) -> BigInt {
    if h > n {
        return BigInt::zero();
    }
    (0..h).fold(BigInt::one(), |acc, i| acc * BigInt::from(n - i))
}

/// Gaussian rational `re + im·i`.
#[derive(Clone, PartialEq, Eq, Debug, Hash)]
pub struct Qi {
    pub re: Q,
    pub im: Q,
}

impl Qi {
    pub fn new(re: Q, im: Q) -> Self {
        Qi { re, im }
    }

    pub fn i() -> Self {
        Qi::new(Q::zero(), Q::one())
    }

    pub fn conj(&self) -> Self {
        Qi::new(self.re.clone(), -self.im.clone())
    }

    pub fn norm(&self) -> Q {
        &self.re * &self.re + &self.im * &self.im
    }
}

impl fmt::Display for Qi {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.im.is_zero() {
            write!(f, "{}", self.re)
        } else if self.re.is_zero() {
            write!(f, "{}i", self.im)
        } else if self.im.is_negative() {
            write!(f, "{}-{}i", self.re, -self.im.clone())
        } else {
            write!(f, "{}+{}i", self.re, self.im)
        }
    }
}

impl Add for Qi {
    type Output = Qi;
    fn add(self, o: Qi) -> Qi {
        Qi::new(self.re + o.re, self.im + o.im)
    }
}

impl Sub for Qi {
    type Output = Qi;
    fn sub(self, o: Qi) -> Qi {
        Qi::new(self.re - o.re, self.im - o.im)
    }
}

impl Mul for Qi {
    type Output = Qi;
    fn mul(self, o: Qi) -> Qi {
        Qi::new(
            &self.re * &o.re - &self.im * &o.im,
            &self.re * &o.im + &self.im * &o.re,
        )
    }
}

impl Neg for Qi {
    type Output = Qi;
    fn neg(self) -> Qi {
        Qi::new(-self.re, -self.im)
    }
}

impl Zero for Qi {
    fn zero() -> Self {
        Qi::new(Q::zero(), Q::zero())
    }
    fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }
}

impl One for Qi {
    fn one() -> Self {
        Qi::new(Q::one(), Q::zero())
    }
}

impl Scalar for Qi {
    fn inv(&self) -> Option<Self> {
        let n = self.norm();
        if n.is_zero() {
            return None;
        }
        Some(Qi::new(&self.re / &n, -(&self.im / &n)))
    }

    fn from_q(q: &Q) -> Self {
        Qi::new(q.clone(), Q::zero())
    }
}

/// Greatest common divisor of two machine integers (non-negative result).
pub fn gcd_i64(a: i64, b: i64) -> i64 {
    a.gcd(&b)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rationals_stay_reduced() {
        let q = q_frac(6, -4);
        assert_eq!(q.numer(), &BigInt::from(-3));
        assert_eq!(q.denom(), &BigInt::from(2));
        assert_eq!(q.to_string(), "-3/2");
    }

    #[test]
    fn parse_round_trip() {
        assert_eq!(parse_q("1/42"), Some(q_frac(1, 42)));
        assert_eq!(parse_q("-7"), Some(q_int(-7)));
        assert_eq!(parse_q("3/0"), None);
        assert_eq!(parse_q("x"), None);
    }

    #[test]
    fn gaussian_inverse() {
        let z = Qi::new(q_int(3), q_int(4));
        let w = z.inv().unwrap();
        assert_eq!(z * w, Qi::one());
        assert_eq!(Qi::i() * Qi::i(), -Qi::one());
        assert!(Qi::zero().inv().is_none());
    }

    #[test]
    fn binomials() {
        assert_eq!(binomial(6, 2), BigInt::from(15));
        assert_eq!(binomial(3, 5), BigInt::zero());
        assert_eq!(falling_factorial(5, 2), BigInt::from(20));
        assert_eq!(falling_factorial(2, 3), BigInt::zero());
    }
}
