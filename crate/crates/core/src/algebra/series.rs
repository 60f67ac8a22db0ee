//! Truncated Laurent series in one variable with explicit precision.
//!
//! A series is known modulo `x^prec`. Every arithmetic operation computes the
//! precision of its result from the precisions of its inputs, so a valuation
//! reported by [`TruncatedLaurent::valuation`] is always certain.

use super::poly::Poly;
use super::scalar::{Scalar, Q};

/// Default truncation order for series computations.
pub const DEFAULT_TRUNCATION: i64 = 24;

/// Precision marking a series as exact (a Laurent polynomial).
pub const EXACT: i64 = i64::MAX / 4;

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct TruncatedLaurent<F: Scalar = Q> {
    /// Exponent of `coeffs[0]`.
    val: i64,
    /// `coeffs[0]` is nonzero unless the vector is empty.
    coeffs: Vec<F>,
    /// Coefficients of `x^e` for `e >= prec` are unknown.
    prec: i64,
}

/// Result of [`series_valuation`].
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Valuation {
    Finite(i64),
    /// Every known coefficient vanishes; the true valuation is at least the
    /// carried precision.
    ZeroToTruncation(i64),
}

impl Valuation {
    /// Whether the valuation is certainly at least `bound`.
    pub fn at_least(&self, bound: i64) -> bool {
        match *self {
            Valuation::Finite(v) => v >= bound,
            Valuation::ZeroToTruncation(p) => p >= bound,
        }
    }
}

impl<F: Scalar> TruncatedLaurent<F> {
    /// Builds `Σ coeffs[i] x^{val + i}` known up to `x^prec`.
    pub fn new(val: i64, coeffs: Vec<F>, prec: i64) -> Self {
        let mut s = TruncatedLaurent { val, coeffs, prec };
        s.normalize();
        s
    }

    pub fn zero(prec: i64) -> Self {
        TruncatedLaurent { val: prec, coeffs: Vec::new(), prec }
    }

    pub fn from_poly(p: &Poly<F>, prec: i64) -> Self {
        TruncatedLaurent::new(0, p.coeffs().to_vec(), prec)
    }

    /// `p(x) / x^shift`
    pub fn from_poly_shifted(p: &Poly<F>, shift: i64, prec: i64) -> Self {
        TruncatedLaurent::new(-shift, p.coeffs().to_vec(), prec)
    }

    pub fn constant(c: F, prec: i64) -> Self {
        TruncatedLaurent::new(0, vec![c], prec)
    }

    fn normalize(&mut self) {
        let keep = (self.prec - self.val).max(0) as usize;
        self.coeffs.truncate(keep);
        let lead = self.coeffs.iter().position(|c| !c.is_zero());
        match lead {
            Some(k) => {
                self.coeffs.drain(..k);
                self.val += k as i64;
                while self.coeffs.last().is_some_and(|c| c.is_zero()) {
                    self.coeffs.pop();
                }
            }
            None => {
                self.coeffs.clear();
                self.val = self.prec;
            }
        }
    }

    pub fn precision(&self) -> i64 {
        self.prec
    }

    pub fn is_zero_to_truncation(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn valuation(&self) -> Valuation {
        if self.coeffs.is_empty() {
            Valuation::ZeroToTruncation(self.prec)
        } else {
            Valuation::Finite(self.val)
        }
    }

    /// Coefficient of `x^e` (zero if below the valuation or not stored).
    pub fn coeff(&self, e: i64) -> F {
        if e < self.val {
            return F::zero();
        }
        self.coeffs.get((e - self.val) as usize).cloned().unwrap_or_else(F::zero)
    }

    pub fn leading(&self) -> Option<&F> {
        self.coeffs.first()
    }

    pub fn with_precision(&self, prec: i64) -> Self {
        TruncatedLaurent::new(self.val, self.coeffs.clone(), prec.min(self.prec))
    }

    pub fn add(&self, o: &Self) -> Self {
        let prec = self.prec.min(o.prec);
        let lo = self.val.min(o.val);
        if lo >= prec {
            return TruncatedLaurent::zero(prec);
        }
        let end = |t: &Self| if t.coeffs.is_empty() { lo } else { t.val + t.coeffs.len() as i64 };
        let hi = prec.min(end(self).max(end(o)));
        let coeffs = (lo..hi).map(|e| self.coeff(e) + o.coeff(e)).collect();
        TruncatedLaurent::new(lo, coeffs, prec)
    }

    pub fn neg(&self) -> Self {
        TruncatedLaurent {
            val: self.val,
            coeffs: self.coeffs.iter().map(|c| -c.clone()).collect(),
            prec: self.prec,
        }
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn scale(&self, c: &F) -> Self {
        TruncatedLaurent::new(
            self.val,
            self.coeffs.iter().map(|a| a.clone() * c.clone()).collect(),
            self.prec,
        )
    }

    /// Multiplication by `x^k`.
    pub fn shift(&self, k: i64) -> Self {
        TruncatedLaurent { val: self.val + k, coeffs: self.coeffs.clone(), prec: self.prec + k }
    }

    pub fn mul(&self, o: &Self) -> Self {
        let prec = (self.val + o.prec).min(o.val + self.prec);
        let val = self.val + o.val;
        if val >= prec {
            return TruncatedLaurent::zero(prec);
        }
        let stored = (self.coeffs.len() + o.coeffs.len()).saturating_sub(1) as i64;
        let n = (prec - val).min(stored) as usize;
        let mut c = vec![F::zero(); n];
        for (i, a) in self.coeffs.iter().enumerate().take(n) {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate().take(n - i) {
                c[i + j] = c[i + j].clone() + a.clone() * b.clone();
            }
        }
        TruncatedLaurent::new(val, c, prec)
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut acc = TruncatedLaurent::constant(F::one(), EXACT);
        for _ in 0..n {
            acc = acc.mul(self);
        }
        acc
    }

    /// Multiplicative inverse; `None` when the series is zero to truncation.
    /// The series must carry a finite precision.
    pub fn inverse(&self) -> Option<Self> {
        assert!(self.prec - self.val < 1 << 20, "inverse of an exact series");
        let lead_inv = self.coeffs.first()?.inv()?;
        let rel = (self.prec - self.val) as usize;
        let mut inv = vec![F::zero(); rel];
        inv[0] = lead_inv.clone();
        for k in 1..rel {
            let mut acc = F::zero();
            for j in 1..=k.min(self.coeffs.len() - 1) {
                acc = acc + self.coeffs[j].clone() * inv[k - j].clone();
            }
            inv[k] = -(acc * lead_inv.clone());
        }
        Some(TruncatedLaurent::new(-self.val, inv, self.prec - 2 * self.val))
    }

    pub fn div(&self, o: &Self) -> Option<Self> {
        o.inverse().map(|i| self.mul(&i))
    }

    pub fn derivative(&self) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(i, c)| F::from_i64(self.val + i as i64) * c.clone())
            .collect();
        TruncatedLaurent::new(self.val - 1, coeffs, self.prec - 1)
    }

    /// `p(self)` by Horner's rule.
    pub fn eval_poly(&self, p: &Poly<F>) -> Self {
        let mut acc = TruncatedLaurent::zero(EXACT);
        for c in p.coeffs().iter().rev() {
            acc = acc.mul(self).add(&TruncatedLaurent::constant(c.clone(), EXACT));
        }
        acc
    }
}

/// Index of the first nonzero coefficient, or the zero-to-truncation marker.
pub fn series_valuation<F: Scalar>(s: &TruncatedLaurent<F>) -> Valuation {
    s.valuation()
}
