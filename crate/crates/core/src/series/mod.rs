//! Truncated power series in one or several commuting variables.
//!
//! A [`MultiSeries`] stores every coefficient of total degree `<= order`
//! densely in graded-lex order (see [`index`]). Binary operations truncate to
//! the smaller order of their operands and never extend it.

mod implicit;
pub mod index;
mod uni;

use num_traits::Zero;
use serde_json::{json, Value};
use thiserror::Error;

use crate::scalar::Scalar;

pub use implicit::{solve_implicit, JetMap, DERIVATIVE_FLOOR};
pub use uni::UniSeries;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SeriesError {
    #[error("variable count mismatch: {left} vs {right}")]
    VarsMismatch { left: usize, right: usize },
    #[error("substitution expects {expected} series, got {got}")]
    ArityMismatch { expected: usize, got: usize },
    #[error("series must have zero constant term")]
    NonzeroConstant,
    #[error("constant term is not invertible")]
    NotInvertible,
    #[error("index {index:?} does not fit {vars} variables at order {order}")]
    IndexOutOfRange { index: Vec<u32>, vars: usize, order: usize },
    #[error("series needs at least one variable")]
    NoVariables,
    #[error("non-finite coefficient produced")]
    NonFinite,
    #[error("implicit problem is not centred at the origin (|F(0,0)| = {value:e})")]
    NotAtOrigin { value: f64 },
    #[error("degenerate implicit problem: |dF/dY(0,0)| = {derivative:e}")]
    DegenerateImplicit { derivative: f64 },
    #[error("jet iteration did not converge in {iterations} steps (residual {residual:e})")]
    NoConvergence { iterations: usize, residual: f64 },
    #[error("malformed series JSON: {0}")]
    Json(String),
}

pub type Result<T> = std::result::Result<T, SeriesError>;

#[derive(Clone, Debug, PartialEq)]
pub struct MultiSeries<S> {
    vars: usize,
    order: usize,
    coeffs: Vec<S>,
}

impl<S: Scalar> MultiSeries<S> {
    pub fn zero(vars: usize, order: usize) -> Self {
        assert!(vars >= 1, "series needs at least one variable");
        MultiSeries { vars, order, coeffs: vec![S::zero(); index::count_upto(vars, order)] }
    }

    pub fn constant(vars: usize, order: usize, c: S) -> Self {
        let mut s = Self::zero(vars, order);
        s.coeffs[0] = c;
        s
    }

    pub fn one(vars: usize, order: usize) -> Self {
        Self::constant(vars, order, S::one())
    }

    /// The coordinate `X^(i+1)` (zero-based `i`).
    pub fn var(vars: usize, order: usize, i: usize) -> Self {
        assert!(i < vars);
        let mut s = Self::zero(vars, order);
        if order >= 1 {
            s.coeffs[1 + i] = S::one();
        }
        s
    }

    pub fn from_terms(vars: usize, order: usize, terms: impl IntoIterator<Item = (Vec<u32>, S)>) -> Result<Self> {
        if vars == 0 {
            return Err(SeriesError::NoVariables);
        }
        let mut s = Self::zero(vars, order);
        for (idx, c) in terms {
            s.set(&idx, c)?;
        }
        Ok(s)
    }

    pub fn vars(&self) -> usize {
        self.vars
    }

    pub fn order(&self) -> usize {
        self.order
    }

    fn slot(&self, idx: &[u32]) -> Option<usize> {
        (idx.len() == self.vars && index::degree(idx) <= self.order).then(|| index::rank(idx))
    }

    /// Coefficient of `X^idx`; zero beyond the truncation order.
    pub fn coeff(&self, idx: &[u32]) -> S {
        self.slot(idx).map(|p| self.coeffs[p].clone()).unwrap_or_else(S::zero)
    }

    pub fn set(&mut self, idx: &[u32], c: S) -> Result<()> {
        let pos = self.slot(idx).ok_or_else(|| SeriesError::IndexOutOfRange {
            index: idx.to_vec(),
            vars: self.vars,
            order: self.order,
        })?;
        self.coeffs[pos] = c;
        Ok(())
    }

    pub fn constant_term(&self) -> &S {
        &self.coeffs[0]
    }

    /// Dense coefficients in graded-lex order.
    pub fn coeffs(&self) -> &[S] {
        &self.coeffs
    }

    /// Nonzero terms in graded-lex order.
    pub fn terms(&self) -> impl Iterator<Item = (Vec<u32>, &S)> + '_ {
        index::upto(self.vars, self.order).into_iter().zip(self.coeffs.iter()).filter(|(_, c)| !c.is_zero())
    }

    /// `(index, coefficient)` for every monomial of total degree `d`.
    pub fn degree_part(&self, d: usize) -> Vec<(Vec<u32>, S)> {
        if d > self.order {
            return Vec::new();
        }
        let start = if d == 0 { 0 } else { index::count_upto(self.vars, d - 1) };
        index::of_degree(self.vars, d).into_iter().zip(self.coeffs[start..].iter().cloned()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    pub fn max_norm(&self) -> f64 {
        crate::scalar::max_norm(&self.coeffs)
    }

    pub fn max_norm_of_degree(&self, d: usize) -> f64 {
        self.degree_part(d).iter().map(|(_, c)| c.norm()).fold(0.0, f64::max)
    }

    /// Drops every term of total degree above `order` (no-op if already lower).
    pub fn truncate(&self, order: usize) -> Self {
        if order >= self.order {
            return self.clone();
        }
        MultiSeries { vars: self.vars, order, coeffs: self.coeffs[..index::count_upto(self.vars, order)].to_vec() }
    }

    /// Raises the truncation order, filling new slots with zero. Only valid
    /// where the caller knows those coefficients cannot matter.
    pub(crate) fn pad_to(&self, order: usize) -> Self {
        let mut coeffs = self.coeffs.clone();
        coeffs.resize(index::count_upto(self.vars, order.max(self.order)), S::zero());
        MultiSeries { vars: self.vars, order: order.max(self.order), coeffs }
    }

    /// Re-expresses the series in `vars` variables by appending zero exponents.
    pub fn embed(&self, vars: usize) -> Self {
        assert!(vars >= self.vars);
        if vars == self.vars {
            return self.clone();
        }
        let mut out = Self::zero(vars, self.order);
        for (idx, c) in self.terms() {
            let mut big = idx.clone();
            big.resize(vars, 0);
            out.coeffs[index::rank(&big)] = c.clone();
        }
        out
    }

    fn check_vars(&self, other: &Self) -> Result<()> {
        if self.vars != other.vars {
            return Err(SeriesError::VarsMismatch { left: self.vars, right: other.vars });
        }
        Ok(())
    }

    pub fn check_finite(self) -> Result<Self> {
        if self.coeffs.iter().all(Scalar::is_finite) {
            Ok(self)
        } else {
            Err(SeriesError::NonFinite)
        }
    }

    fn zip_with(&self, other: &Self, op: impl Fn(S, S) -> S) -> Result<Self> {
        self.check_vars(other)?;
        let order = self.order.min(other.order);
        let n = index::count_upto(self.vars, order);
        let coeffs = self.coeffs[..n].iter().zip(&other.coeffs[..n]).map(|(a, b)| op(a.clone(), b.clone())).collect();
        MultiSeries { vars: self.vars, order, coeffs }.check_finite()
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a - b)
    }

    pub fn neg(&self) -> Self {
        MultiSeries { vars: self.vars, order: self.order, coeffs: self.coeffs.iter().map(|c| -c.clone()).collect() }
    }

    pub fn scale(&self, k: &S) -> Result<Self> {
        MultiSeries {
            vars: self.vars,
            order: self.order,
            coeffs: self.coeffs.iter().map(|c| c.clone() * k.clone()).collect(),
        }
        .check_finite()
    }

    /// Adds a constant to the degree-0 coefficient.
    pub fn add_constant(&self, c: &S) -> Self {
        let mut out = self.clone();
        out.coeffs[0] = out.coeffs[0].clone() + c.clone();
        out
    }

    /// Cauchy product truncated at the smaller order.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_vars(other)?;
        let order = self.order.min(other.order);
        let mut out = Self::zero(self.vars, order);
        let left = sparse_terms(self, order);
        let right = sparse_terms(other, order);
        let mut buf = vec![0u32; self.vars];
        for (ia, da, ca) in &left {
            for (ib, db, cb) in &right {
                if da + db > order {
                    continue;
                }
                for (slot, (x, y)) in buf.iter_mut().zip(ia.iter().zip(ib)) {
                    *slot = x + y;
                }
                let pos = index::rank(&buf);
                out.coeffs[pos] = out.coeffs[pos].clone() + ca.clone() * cb.clone();
            }
        }
        out.check_finite()
    }

    pub fn pow(&self, k: u32) -> Result<Self> {
        let mut acc = Self::one(self.vars, self.order);
        for _ in 0..k {
            acc = acc.mul(self)?;
        }
        Ok(acc)
    }

    /// `1 / (1 - u) = 1 + u + u^2 + ...` for `u(0) = 0`.
    pub fn reciprocal_one_minus(&self) -> Result<Self> {
        if !self.constant_term().is_zero() {
            return Err(SeriesError::NonzeroConstant);
        }
        // Horner: 1 + u(1 + u(1 + ...)), `order` levels deep.
        let one = Self::one(self.vars, self.order);
        let mut acc = one.clone();
        for _ in 0..self.order {
            acc = one.add(&self.mul(&acc)?)?;
        }
        Ok(acc)
    }

    /// Multiplicative inverse of a series with invertible constant term.
    pub fn inverse(&self) -> Result<Self> {
        let c_inv = self.constant_term().try_inv().ok_or(SeriesError::NotInvertible)?;
        // self = c (1 - v) with v = 1 - self / c
        let normalized = self.scale(&c_inv)?;
        let v = Self::one(self.vars, self.order).sub(&normalized)?;
        v.reciprocal_one_minus()?.scale(&c_inv)
    }

    /// `f(g^1, ..., g^r)` where each `g^mu` has zero constant term.
    pub fn substitute(&self, g: &[MultiSeries<S>]) -> Result<Self> {
        if g.len() != self.vars {
            return Err(SeriesError::ArityMismatch { expected: self.vars, got: g.len() });
        }
        let target_vars = g[0].vars;
        for gi in g {
            if gi.vars != target_vars {
                return Err(SeriesError::VarsMismatch { left: target_vars, right: gi.vars });
            }
            if !gi.constant_term().is_zero() {
                return Err(SeriesError::NonzeroConstant);
            }
        }
        let order = g.iter().map(|gi| gi.order).fold(self.order, usize::min);
        // powers[mu][e] = (g^mu)^e
        let mut powers: Vec<Vec<Self>> =
            g.iter().map(|gi| vec![Self::one(target_vars, order), gi.truncate(order)]).collect();
        let mut out = Self::zero(target_vars, order);
        for (idx, c) in self.terms() {
            if index::degree(&idx) > order {
                continue;
            }
            let mut term = Self::constant(target_vars, order, c.clone());
            for (mu, &e) in idx.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                while powers[mu].len() <= e as usize {
                    let next = powers[mu].last().unwrap().mul(&powers[mu][1])?;
                    powers[mu].push(next);
                }
                term = term.mul(&powers[mu][e as usize])?;
            }
            out = out.add(&term)?;
        }
        Ok(out)
    }

    /// Coefficient-wise modulus.
    pub fn majorize(&self) -> Self {
        MultiSeries { vars: self.vars, order: self.order, coeffs: self.coeffs.iter().map(Scalar::modulus).collect() }
    }

    /// Restriction to the diagonal `X^1 = ... = X^r = X`.
    pub fn diagonal(&self) -> UniSeries<S> {
        let coeffs =
            (0..=self.order).map(|d| self.degree_part(d).into_iter().fold(S::zero(), |acc, (_, c)| acc + c)).collect();
        UniSeries::new(coeffs)
    }

    /// Serializes as `{"vars", "order", "coeffs": [{"index", "re", "im"}]}`,
    /// graded-lex order, zero coefficients omitted.
    pub fn to_json(&self) -> Value {
        let coeffs: Vec<Value> = self
            .terms()
            .map(|(idx, c)| {
                let (re, im) = c.to_json_parts();
                json!({ "index": idx, "re": re, "im": im })
            })
            .collect();
        json!({ "vars": self.vars, "order": self.order, "coeffs": coeffs })
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let bad = |m: &str| SeriesError::Json(m.to_string());
        let vars = v.get("vars").and_then(Value::as_u64).ok_or_else(|| bad("missing \"vars\""))?;
        let order = v.get("order").and_then(Value::as_u64).ok_or_else(|| bad("missing \"order\""))?;
        let entries = match v.get("coeffs") {
            None => Vec::new(),
            Some(c) => c.as_array().ok_or_else(|| bad("\"coeffs\" must be an array"))?.clone(),
        };
        let mut terms = Vec::with_capacity(entries.len());
        for e in &entries {
            let idx: Vec<u32> = e
                .get("index")
                .and_then(Value::as_array)
                .ok_or_else(|| bad("coefficient without \"index\""))?
                .iter()
                .map(|x| x.as_u64().map(|u| u as u32))
                .collect::<Option<_>>()
                .ok_or_else(|| bad("index entries must be non-negative integers"))?;
            let zero = Value::from(0);
            let c = S::from_json_parts(e.get("re").unwrap_or(&zero), e.get("im").unwrap_or(&zero))
                .ok_or_else(|| bad("unparseable coefficient"))?;
            terms.push((idx, c));
        }
        Self::from_terms(vars as usize, order as usize, terms)
    }
}

fn sparse_terms<S: Scalar>(s: &MultiSeries<S>, order: usize) -> Vec<(Vec<u32>, usize, S)> {
    index::upto(s.vars, order)
        .into_iter()
        .zip(s.coeffs.iter())
        .filter(|(_, c)| !c.is_zero())
        .map(|(idx, c)| {
            let d = index::degree(&idx);
            (idx, d, c.clone())
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::GaussRational;
    use num_complex::Complex64;

    type Q = GaussRational;

    fn q(n: i64) -> Q {
        Q::from_int(n)
    }

    fn uni(coeffs: &[i64]) -> MultiSeries<Q> {
        let order = coeffs.len() - 1;
        MultiSeries::from_terms(1, order, coeffs.iter().enumerate().map(|(k, &c)| (vec![k as u32], q(c)))).unwrap()
    }

    #[test]
    fn difference_of_squares() {
        let a = uni(&[1, 1, 0]);
        let b = uni(&[1, -1, 0]);
        assert_eq!(a.mul(&b).unwrap(), uni(&[1, 0, -1]));
    }

    #[test]
    fn multiplicative_identity() {
        let f = uni(&[3, -2, 5, 7]);
        assert_eq!(f.mul(&MultiSeries::one(1, 3)).unwrap(), f);
    }

    #[test]
    fn square_of_x_plus_x2() {
        let f = uni(&[0, 1, 1, 0, 0]);
        assert_eq!(f.mul(&f).unwrap(), uni(&[0, 0, 1, 2, 1]));
    }

    #[test]
    fn mul_truncates_to_smaller_order() {
        let a = uni(&[1, 1, 1, 1]);
        let b = uni(&[1, 1]);
        let p = a.mul(&b).unwrap();
        assert_eq!(p.order(), 1);
        assert_eq!(p, uni(&[1, 2]));
    }

    #[test]
    fn mismatched_vars_rejected() {
        let a = MultiSeries::<Q>::one(1, 2);
        let b = MultiSeries::<Q>::one(2, 2);
        assert_eq!(a.mul(&b), Err(SeriesError::VarsMismatch { left: 1, right: 2 }));
    }

    #[test]
    fn substitute_identity_two_vars() {
        let f = MultiSeries::from_terms(2, 3, [(vec![1, 1], q(1))]).unwrap();
        let g = [MultiSeries::var(2, 3, 0), MultiSeries::var(2, 3, 1)];
        assert_eq!(f.substitute(&g).unwrap(), f);
    }

    #[test]
    fn substitute_square_of_shifted_var() {
        let f = uni(&[0, 0, 1, 0, 0]);
        let g = uni(&[0, 1, 1, 0, 0]);
        assert_eq!(f.substitute(&[g]).unwrap(), uni(&[0, 0, 1, 2, 1]));
    }

    #[test]
    fn substitute_rejects_constant_term() {
        let f = uni(&[0, 1]);
        let g = uni(&[1, 1]);
        assert_eq!(f.substitute(&[g]), Err(SeriesError::NonzeroConstant));
    }

    #[test]
    fn geometric_series() {
        assert_eq!(uni(&[0, 1, 0, 0]).reciprocal_one_minus().unwrap(), uni(&[1, 1, 1, 1]));
        assert_eq!(MultiSeries::<Q>::zero(1, 3).reciprocal_one_minus().unwrap(), uni(&[1, 0, 0, 0]));
        assert_eq!(uni(&[0, 1, 1, 0]).reciprocal_one_minus().unwrap(), uni(&[1, 1, 2, 3]));
        assert_eq!(uni(&[1, 1]).reciprocal_one_minus(), Err(SeriesError::NonzeroConstant));
    }

    #[test]
    fn inverse_times_self_is_one() {
        let f = uni(&[2, -1, 3, 5, 0, 1]);
        let inv = f.inverse().unwrap();
        assert_eq!(f.mul(&inv).unwrap(), MultiSeries::one(1, 5));
    }

    #[test]
    fn majorize_examples() {
        assert_eq!(uni(&[0, 1, -1]).majorize(), uni(&[0, 1, 1]));
        assert_eq!(MultiSeries::<Q>::zero(2, 3).majorize(), MultiSeries::zero(2, 3));
        let f = MultiSeries::from_terms(1, 2, [(vec![2], Q::from_text("3", "4").unwrap())]).unwrap();
        assert_eq!(f.majorize(), uni(&[0, 0, 5]));
    }

    #[test]
    fn json_round_trip_and_layout() {
        let f = MultiSeries::from_terms(
            2,
            2,
            [(vec![0, 2], Complex64::new(1.5, -2.0)), (vec![1, 0], Complex64::new(0.25, 0.0))],
        )
        .unwrap();
        let v = f.to_json();
        let coeffs = v["coeffs"].as_array().unwrap();
        assert_eq!(coeffs.len(), 2);
        assert_eq!(coeffs[0]["index"], json!([1, 0]));
        assert_eq!(coeffs[1]["index"], json!([0, 2]));
        assert_eq!(MultiSeries::<Complex64>::from_json(&v).unwrap(), f);
    }

    #[test]
    fn from_terms_rejects_out_of_range() {
        let r = MultiSeries::<Q>::from_terms(1, 2, [(vec![3], q(1))]);
        assert!(matches!(r, Err(SeriesError::IndexOutOfRange { .. })));
        let r = MultiSeries::<Q>::from_terms(2, 2, [(vec![1], q(1))]);
        assert!(matches!(r, Err(SeriesError::IndexOutOfRange { .. })));
    }

    #[test]
    fn overflow_is_an_error() {
        let f = MultiSeries::from_terms(1, 2, [(vec![1], Complex64::new(1e200, 0.0))]).unwrap();
        assert_eq!(f.mul(&f), Err(SeriesError::NonFinite));
    }

    #[test]
    fn diagonal_sums_degree_parts() {
        let f = MultiSeries::from_terms(2, 2, [(vec![1, 1], q(2)), (vec![2, 0], q(3)), (vec![0, 1], q(1))]).unwrap();
        assert_eq!(f.diagonal().coeffs(), &[q(0), q(1), q(5)]);
    }
}
