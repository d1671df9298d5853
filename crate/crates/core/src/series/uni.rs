use super::{MultiSeries, Result, SeriesError};
use crate::scalar::Scalar;

/// Univariate truncated series `c_0 + c_1 X + ... + c_M X^M`.
#[derive(Clone, Debug, PartialEq)]
pub struct UniSeries<S> {
    coeffs: Vec<S>,
}

impl<S: Scalar> UniSeries<S> {
    /// Order is `coeffs.len() - 1`; an empty vector becomes the order-0 zero.
    pub fn new(mut coeffs: Vec<S>) -> Self {
        if coeffs.is_empty() {
            coeffs.push(S::zero());
        }
        UniSeries { coeffs }
    }

    pub fn zero(order: usize) -> Self {
        UniSeries { coeffs: vec![S::zero(); order + 1] }
    }

    pub fn x(order: usize) -> Self {
        let mut s = Self::zero(order);
        if order >= 1 {
            s.coeffs[1] = S::one();
        }
        s
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[S] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> S {
        self.coeffs.get(k).cloned().unwrap_or_else(S::zero)
    }

    pub fn truncate(&self, order: usize) -> Self {
        UniSeries { coeffs: self.coeffs[..=order.min(self.order())].to_vec() }
    }

    fn check_finite(self) -> Result<Self> {
        if self.coeffs.iter().all(Scalar::is_finite) {
            Ok(self)
        } else {
            Err(SeriesError::NonFinite)
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        let n = self.order().min(other.order());
        UniSeries { coeffs: (0..=n).map(|k| self.coeffs[k].clone() + other.coeffs[k].clone()).collect() }.check_finite()
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.scale(&(-S::one()))?)
    }

    pub fn scale(&self, k: &S) -> Result<Self> {
        UniSeries { coeffs: self.coeffs.iter().map(|c| c.clone() * k.clone()).collect() }.check_finite()
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        let n = self.order().min(other.order());
        let mut out = vec![S::zero(); n + 1];
        for (i, a) in self.coeffs.iter().enumerate().take(n + 1) {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate().take(n + 1 - i) {
                out[i + j] = out[i + j].clone() + a.clone() * b.clone();
            }
        }
        UniSeries { coeffs: out }.check_finite()
    }

    /// `f(g(X))` truncated at `min(f.order, g.order)`; requires `g(0) = 0`.
    pub fn compose(&self, g: &Self) -> Result<Self> {
        if !g.coeffs[0].is_zero() {
            return Err(SeriesError::NonzeroConstant);
        }
        let n = self.order().min(g.order());
        let g = g.truncate(n);
        // Horner from the top coefficient down.
        let mut acc = UniSeries::new(vec![self.coeffs[n].clone()]).pad(n);
        for k in (0..n).rev() {
            acc = acc.mul(&g)?;
            acc.coeffs[0] = acc.coeffs[0].clone() + self.coeffs[k].clone();
        }
        acc.check_finite()
    }

    fn pad(mut self, order: usize) -> Self {
        self.coeffs.resize(order + 1, S::zero());
        self
    }

    pub fn majorize(&self) -> Self {
        UniSeries { coeffs: self.coeffs.iter().map(Scalar::modulus).collect() }
    }

    pub fn max_norm(&self) -> f64 {
        crate::scalar::max_norm(&self.coeffs)
    }

    pub fn to_multi(&self) -> MultiSeries<S> {
        MultiSeries::from_terms(
            1,
            self.order(),
            self.coeffs.iter().enumerate().map(|(k, c)| (vec![k as u32], c.clone())),
        )
        .expect("univariate indices are in range")
    }

    pub fn from_multi(s: &MultiSeries<S>) -> Result<Self> {
        if s.vars() != 1 {
            return Err(SeriesError::VarsMismatch { left: 1, right: s.vars() });
        }
        Ok(UniSeries { coeffs: s.coeffs().to_vec() })
    }
}
