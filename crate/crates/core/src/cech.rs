//! Flat line bundles on a cycle of `N` charts.
//!
//! Edge `e = 0..N` joins chart `e` to chart `e + 1 (mod N)` (charts are
//! 0-based here, `(1,2), (2,3), ..., (N,1)` in 1-based labels). A 0-cochain
//! `beta` has coboundary `alpha_e = -beta_e + rho_e * beta_{e+1}`.

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};
use thiserror::Error;

use crate::multiplier::circle_distance;
use crate::scalar::{max_norm, Scalar};

/// `|1 - H|` at or below `DIVISOR_FLOOR * (1 + |H|)` counts as trivial holonomy (float fields).
pub const DIVISOR_FLOOR: f64 = 1e-14;
/// Non-resonant solves with `|1 - H|` below this are flagged near-resonant.
pub const NEAR_RESONANT: f64 = 1e-8;
/// A cycle sum at or below `OBSTRUCTION_TOL * max|alpha|` counts as vanishing (float fields).
pub const OBSTRUCTION_TOL: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CechError {
    #[error("a cycle cover needs at least 3 charts, got {0}")]
    TooFewCharts(usize),
    #[error("edge weight {edge} is zero")]
    ZeroWeight { edge: usize },
    #[error("expected {expected} values, got {got}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("obstructed: nonzero class (cycle sum {obstruction})")]
    Obstructed { obstruction: Complex64 },
    #[error("torsion parameter: nodal correction undefined")]
    Torsion,
    #[error("edge ({0}, {1}) is not on the cycle")]
    NotAnEdge(usize, usize),
    #[error("invalid cover JSON: {0}")]
    Json(String),
}

pub type Result<T> = std::result::Result<T, CechError>;

/// One value per chart.
pub type Cochain0<S> = Vec<S>;
/// One value per edge, in cycle order.
pub type Cochain1<S> = Vec<S>;

#[derive(Clone, Debug, PartialEq)]
pub struct CycleCover<S> {
    weights: Vec<S>,
    twist_edge: usize,
}

impl<S: Scalar> CycleCover<S> {
    /// Trivial weights except `sigma` on the last edge `(N, 1)`.
    pub fn twisted(n: usize, sigma: S) -> Result<Self> {
        Self::with_twist(n, n.saturating_sub(1), sigma)
    }

    pub fn with_twist(n: usize, twist_edge: usize, sigma: S) -> Result<Self> {
        if n < 3 {
            return Err(CechError::TooFewCharts(n));
        }
        if twist_edge >= n {
            return Err(CechError::NotAnEdge(twist_edge + 1, (twist_edge + 1) % n + 1));
        }
        let mut weights = vec![S::one(); n];
        weights[twist_edge] = sigma;
        Self::from_weights(weights, twist_edge)
    }

    pub fn from_weights(weights: Vec<S>, twist_edge: usize) -> Result<Self> {
        if weights.len() < 3 {
            return Err(CechError::TooFewCharts(weights.len()));
        }
        if twist_edge >= weights.len() {
            return Err(CechError::LengthMismatch { expected: weights.len(), got: twist_edge });
        }
        if let Some(edge) = weights.iter().position(|w| w.is_zero()) {
            return Err(CechError::ZeroWeight { edge });
        }
        Ok(CycleCover { weights, twist_edge })
    }

    pub fn n(&self) -> usize {
        self.weights.len()
    }

    pub fn weights(&self) -> &[S] {
        &self.weights
    }

    pub fn twist_edge(&self) -> usize {
        self.twist_edge
    }

    pub fn twist(&self) -> &S {
        &self.weights[self.twist_edge]
    }

    /// Same cover with the twist edge carrying `w`.
    pub fn with_twist_weight(&self, w: S) -> Self {
        let mut weights = self.weights.clone();
        weights[self.twist_edge] = w;
        CycleCover { weights, twist_edge: self.twist_edge }
    }

    /// Every weight raised to `k`.
    pub fn power(&self, k: u32) -> Self {
        CycleCover { weights: self.weights.iter().map(|w| w.powi(k)).collect(), twist_edge: self.twist_edge }
    }

    /// 1-based `(j, k)` labels of the edges.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let n = self.n();
        (0..n).map(|e| (e + 1, (e + 1) % n + 1)).collect()
    }

    /// 0-based edge index of the 1-based pair `(j, k)`; `reversed` when given as `(k, j)`.
    pub fn edge_index(&self, j: usize, k: usize) -> Result<(usize, bool)> {
        let n = self.n();
        if (1..=n).contains(&j) && (1..=n).contains(&k) {
            if k == j % n + 1 {
                return Ok((j - 1, false));
            }
            if j == k % n + 1 {
                return Ok((k - 1, true));
            }
        }
        Err(CechError::NotAnEdge(j, k))
    }

    pub fn holonomy(&self) -> S {
        self.weights.iter().fold(S::one(), |acc, w| acc * w.clone())
    }

    /// All weights on the unit circle within `1e-12`.
    pub fn is_unitary(&self) -> bool {
        self.weights.iter().all(|w| (w.norm() - 1.0).abs() <= 1e-12)
    }

    pub fn is_resonant(&self) -> bool {
        is_trivial(&self.holonomy())
    }

    /// `{"N", "twist_edge": [j, k], "sigma": {"re", "im"}}`; an optional
    /// `"weights"` array of `{"re", "im"}` overrides the per-edge values.
    pub fn from_json(v: &Value) -> Result<Self> {
        let bad = |m: &str| CechError::Json(m.to_string());
        let n = v.get("N").and_then(Value::as_u64).ok_or_else(|| bad("missing \"N\""))? as usize;
        if n < 3 {
            return Err(CechError::TooFewCharts(n));
        }
        let twist_edge = match v.get("twist_edge") {
            None => n - 1,
            Some(t) => {
                let pair = t.as_array().ok_or_else(|| bad("\"twist_edge\" must be [j, k]"))?;
                let j = pair.first().and_then(Value::as_u64).ok_or_else(|| bad("bad twist_edge"))?;
                let k = pair.get(1).and_then(Value::as_u64).ok_or_else(|| bad("bad twist_edge"))?;
                match CycleCover::<S>::twisted(n, S::one())?.edge_index(j as usize, k as usize)? {
                    (e, false) => e,
                    (_, true) => return Err(bad("\"twist_edge\" must follow the cycle orientation")),
                }
            }
        };
        if let Some(ws) = v.get("weights") {
            let ws = ws.as_array().ok_or_else(|| bad("\"weights\" must be an array"))?;
            let weights = ws.iter().map(parse_scalar).collect::<Option<Vec<S>>>();
            let weights = weights.ok_or_else(|| bad("unparseable weight"))?;
            if weights.len() != n {
                return Err(CechError::LengthMismatch { expected: n, got: weights.len() });
            }
            return Self::from_weights(weights, twist_edge);
        }
        let sigma = match v.get("sigma") {
            None => S::one(),
            Some(s) => parse_scalar(s).ok_or_else(|| bad("unparseable \"sigma\""))?,
        };
        Self::with_twist(n, twist_edge, sigma)
    }

    pub fn to_json(&self) -> Value {
        let (j, k) = self.edges()[self.twist_edge];
        let mut out = json!({
            "N": self.n(),
            "twist_edge": [j, k],
            "sigma": scalar_json(self.twist()),
        });
        let others_trivial = self.weights.iter().enumerate().all(|(e, w)| e == self.twist_edge || w.is_one());
        if !others_trivial {
            out["weights"] = Value::Array(self.weights.iter().map(scalar_json).collect());
        }
        out
    }
}

pub fn parse_scalar<S: Scalar>(v: &Value) -> Option<S> {
    let zero = Value::from(0);
    match v {
        Value::Object(_) => S::from_json_parts(v.get("re").unwrap_or(&zero), v.get("im").unwrap_or(&zero)),
        Value::Number(_) | Value::String(_) => S::from_json_parts(v, &zero),
        _ => None,
    }
}

pub fn scalar_json<S: Scalar>(z: &S) -> Value {
    let (re, im) = z.to_json_parts();
    json!({ "re": re, "im": im })
}

fn is_trivial<S: Scalar>(h: &S) -> bool {
    if S::EXACT {
        h.is_one()
    } else {
        (S::one() - h.clone()).norm() <= DIVISOR_FLOOR * (1.0 + h.norm())
    }
}

fn check_len<T>(values: &[T], n: usize) -> Result<()> {
    if values.len() == n {
        Ok(())
    } else {
        Err(CechError::LengthMismatch { expected: n, got: values.len() })
    }
}

pub fn coboundary<S: Scalar>(cover: &CycleCover<S>, beta: &[S]) -> Result<Cochain1<S>> {
    let n = cover.n();
    check_len(beta, n)?;
    Ok((0..n).map(|e| cover.weights[e].clone() * beta[(e + 1) % n].clone() - beta[e].clone()).collect())
}

/// The telescoped cycle sum `A = sum_e P_e alpha_e` with `P_e = rho_0 ... rho_{e-1}`.
/// Any primitive satisfies `(H - 1) beta_1 = A`.
pub fn obstruction<S: Scalar>(cover: &CycleCover<S>, alpha: &[S]) -> Result<S> {
    check_len(alpha, cover.n())?;
    let mut prefix = S::one();
    let mut sum = S::zero();
    for (a, w) in alpha.iter().zip(&cover.weights) {
        sum = sum + prefix.clone() * a.clone();
        prefix = prefix * w.clone();
    }
    Ok(sum)
}

#[derive(Clone, Debug, PartialEq)]
pub struct SolveReport<S> {
    pub beta: Cochain0<S>,
    pub obstruction: S,
    /// Trivial holonomy: `beta_1` was fixed by the gauge rather than solved for.
    pub used_normalization: bool,
    pub near_resonant: bool,
    /// `d(1, H) * max|beta| / max|alpha|`, when `alpha != 0`.
    pub bound_ratio: Option<f64>,
}

pub fn solve<S: Scalar>(cover: &CycleCover<S>, alpha: &[S]) -> Result<SolveReport<S>> {
    solve_with(cover, alpha, S::zero())
}

/// As [`solve`], with `beta_1 := gauge` when the holonomy is trivial.
pub fn solve_with<S: Scalar>(cover: &CycleCover<S>, alpha: &[S], gauge: S) -> Result<SolveReport<S>> {
    let n = cover.n();
    let a = obstruction(cover, alpha)?;
    let h = cover.holonomy();
    let alpha_max = max_norm(alpha);
    let resonant = is_trivial(&h);
    let divisor = h.clone() - S::one();

    let beta1 = if resonant {
        if !a.negligible(alpha_max, OBSTRUCTION_TOL) {
            return Err(CechError::Obstructed { obstruction: a.to_c64() });
        }
        gauge
    } else {
        // (H - 1) is nonzero here, so the inverse exists
        a.clone() * divisor.try_inv().ok_or(CechError::Torsion)?
    };

    let mut beta = Vec::with_capacity(n);
    beta.push(beta1);
    for e in 0..n - 1 {
        let inv = cover.weights[e].try_inv().ok_or(CechError::ZeroWeight { edge: e })?;
        let next = (alpha[e].clone() + beta[e].clone()) * inv;
        beta.push(next);
    }

    let near_resonant = (!resonant && divisor.norm() < NEAR_RESONANT * (1.0 + h.norm())) || (resonant && !h.is_one());
    let bound_ratio = (alpha_max > 0.0).then(|| {
        let theta = h.to_c64().arg() / (2.0 * PI);
        circle_distance(0.0, theta) * max_norm(&beta) / alpha_max
    });
    Ok(SolveReport { beta, obstruction: a, used_normalization: resonant, near_resonant, bound_ratio })
}

/// Largest `d(1, H) * max|beta| / max|alpha|` over `trials` cochains drawn
/// uniformly from the unit polydisc.
pub fn ueda_bound_check(cover: &CycleCover<Complex64>, trials: usize, seed: u64) -> Result<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = cover.n();
    let mut worst: f64 = 0.0;
    for _ in 0..trials {
        let alpha: Vec<Complex64> = (0..n)
            .map(|_| {
                let r: f64 = rng.gen::<f64>().sqrt();
                Complex64::from_polar(r, 2.0 * PI * rng.gen::<f64>())
            })
            .collect();
        if let Some(ratio) = solve(cover, &alpha)?.bound_ratio {
            worst = worst.max(ratio);
        }
    }
    Ok(worst)
}

/// `l = (s^m a_+ - a_-) / (1 - s^m)`, so that `a_+ + l = s^{-m} (a_- + l)`.
pub fn nodal_ell(a_plus: Complex64, a_minus: Complex64, s: Complex64, m: u32) -> Result<Complex64> {
    let sm = s.powu(m);
    let denom = Complex64::new(1.0, 0.0) - sm;
    if denom.norm() <= DIVISOR_FLOOR * (1.0 + sm.norm()) {
        return Err(CechError::Torsion);
    }
    Ok((sm * a_plus - a_minus) / denom)
}

/// `K_1 = e^{2 pi} K_0 (1 + 3 e^{2 pi})`.
pub fn nodal_bound_constant(k0: f64) -> f64 {
    let e = (2.0 * PI).exp();
    e * k0 * (1.0 + 3.0 * e)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::GaussRational;
    use num_rational::BigRational;
    use num_traits::Zero;

    type Q = GaussRational;

    fn q(re: i64, im: i64) -> Q {
        Q::new(BigRational::from_integer(re.into()), BigRational::from_integer(im.into()))
    }

    fn qf(re: (i64, i64), im: (i64, i64)) -> Q {
        Q::new(BigRational::new(re.0.into(), re.1.into()), BigRational::new(im.0.into(), im.1.into()))
    }

    #[test]
    fn coboundary_examples() {
        let triv = CycleCover::twisted(3, q(1, 0)).unwrap();
        let c = vec![q(5, -2); 3];
        assert!(coboundary(&triv, &c).unwrap().iter().all(|a| a.is_zero()));

        let cover = CycleCover::twisted(3, q(0, 1)).unwrap();
        let alpha = coboundary(&cover, &[q(1, 0), q(0, 0), q(0, 0)]).unwrap();
        assert_eq!(alpha, vec![q(-1, 0), q(0, 0), q(0, 1)]);
        assert!(coboundary(&cover, &vec![Q::zero(); 3]).unwrap().iter().all(|a| a.is_zero()));
    }

    #[test]
    fn solve_twisted_example() {
        let cover = CycleCover::twisted(3, q(0, 1)).unwrap();
        let alpha = vec![q(1, 0), q(0, 0), q(0, 0)];
        let rep = solve(&cover, &alpha).unwrap();
        assert_eq!(rep.obstruction, q(1, 0));
        assert_eq!(rep.beta, vec![qf((-1, 2), (-1, 2)), qf((1, 2), (-1, 2)), qf((1, 2), (-1, 2))]);
        assert_eq!(coboundary(&cover, &rep.beta).unwrap(), alpha);
        assert!(!rep.used_normalization);
    }

    #[test]
    fn solve_trivial_holonomy() {
        let cover = CycleCover::twisted(3, q(1, 0)).unwrap();
        let rep = solve(&cover, &[q(1, 0), q(-1, 0), q(0, 0)]).unwrap();
        assert_eq!(rep.beta, vec![q(0, 0), q(1, 0), q(0, 0)]);
        assert!(rep.used_normalization);

        let err = solve(&cover, &[q(1, 0), q(0, 0), q(0, 0)]).unwrap_err();
        assert_eq!(err, CechError::Obstructed { obstruction: Complex64::new(1.0, 0.0) });
    }

    #[test]
    fn zero_alpha_gives_zero_beta() {
        let cover = CycleCover::twisted(4, Complex64::new(0.0, -1.0)).unwrap();
        let rep = solve(&cover, &[Complex64::new(0.0, 0.0); 4]).unwrap();
        assert!(rep.beta.iter().all(|b| *b == Complex64::new(0.0, 0.0)));
        assert_eq!(rep.bound_ratio, None);
    }

    #[test]
    fn obstruction_examples() {
        let triv = CycleCover::twisted(3, q(1, 0)).unwrap();
        assert_eq!(obstruction(&triv, &[q(1, 0), q(-1, 0), q(0, 0)]).unwrap(), q(0, 0));
        assert_eq!(obstruction(&triv, &[q(1, 0), q(0, 0), q(0, 0)]).unwrap(), q(1, 0));

        let cover = CycleCover::twisted(3, q(0, 1)).unwrap();
        let alpha = vec![q(1, 0); 3];
        let a = obstruction(&cover, &alpha).unwrap();
        assert_eq!(a, q(3, 0));
        let rep = solve(&cover, &alpha).unwrap();
        // beta_1 = A / (H - 1)
        assert_eq!(rep.beta[0].clone() * (q(0, 1) - q(1, 0)), a);
    }

    #[test]
    fn bound_ratio_of_single_edge_cochain() {
        // alpha = (1, 0, 0): max|beta| = 1/|1 - sigma|
        for t in [0.5, 0.3, 0.05, 1e-4] {
            let sigma = Complex64::from_polar(1.0, 2.0 * PI * t);
            let cover = CycleCover::twisted(3, sigma).unwrap();
            let one = Complex64::new(1.0, 0.0);
            let rep = solve(&cover, &[one, 0.0.into(), 0.0.into()]).unwrap();
            let expect = circle_distance(0.0, t) / (one - sigma).norm();
            assert!((rep.bound_ratio.unwrap() - expect).abs() < 1e-12);
        }
    }

    #[test]
    fn ueda_constant_at_minus_one() {
        let cover = CycleCover::twisted(3, Complex64::new(-1.0, 0.0)).unwrap();
        let k = ueda_bound_check(&cover, 2000, 7).unwrap();
        assert!(k <= 2.0, "{k}");
    }

    #[test]
    fn near_resonance_is_flagged() {
        let sigma = Complex64::from_polar(1.0, 2.0 * PI * 1e-10);
        let cover = CycleCover::twisted(3, sigma).unwrap();
        let rep = solve(&cover, &[Complex64::new(1.0, 0.0); 3]).unwrap();
        assert!(rep.near_resonant);
        assert!(rep.beta[0].norm() > 1e9);
    }

    #[test]
    fn gauge_shifts_trivial_solution() {
        let cover = CycleCover::twisted(3, q(1, 0)).unwrap();
        let alpha = vec![q(1, 0), q(-1, 0), q(0, 0)];
        let rep = solve_with(&cover, &alpha, q(1, 0)).unwrap();
        assert_eq!(rep.beta, vec![q(1, 0), q(2, 0), q(1, 0)]);
        assert_eq!(coboundary(&cover, &rep.beta).unwrap(), alpha);
    }

    #[test]
    fn nodal_examples() {
        let i = Complex64::new(0.0, 1.0);
        let l = nodal_ell(1.0.into(), 0.0.into(), i, 1).unwrap();
        assert!((l - Complex64::new(-0.5, 0.5)).norm() < 1e-15);
        assert_eq!(nodal_ell(0.0.into(), 0.0.into(), i, 3).unwrap(), Complex64::new(0.0, 0.0));
        let c = Complex64::new(0.3, -2.0);
        let l = nodal_ell(c, c, i, 2).unwrap();
        assert!((l + c).norm() < 1e-15);
        assert_eq!(nodal_ell(c, c, i, 4), Err(CechError::Torsion));
    }

    #[test]
    fn nodal_constant_values() {
        let k1 = nodal_bound_constant(1.0);
        assert!((k1 - 8.607e5).abs() / 8.607e5 < 1e-3);
        assert_eq!(nodal_bound_constant(0.0), 0.0);
        assert!((nodal_bound_constant(2.0) - 2.0 * k1).abs() <= 1e-9 * k1);
    }

    #[test]
    fn cover_json_round_trip() {
        let v = json!({"N": 4, "twist_edge": [2, 3], "sigma": {"re": "3/5", "im": "4/5"}});
        let cover = CycleCover::<Q>::from_json(&v).unwrap();
        assert_eq!(cover.twist_edge(), 1);
        assert_eq!(cover.holonomy(), qf((3, 5), (4, 5)));
        assert_eq!(CycleCover::<Q>::from_json(&cover.to_json()).unwrap(), cover);

        let default = CycleCover::<Complex64>::from_json(&json!({"N": 3})).unwrap();
        assert!(default.is_resonant());
        assert!(CycleCover::<Complex64>::from_json(&json!({"N": 2})).is_err());
        assert!(CycleCover::<Complex64>::from_json(&json!({"N": 3, "twist_edge": [2, 1]})).is_err());
    }
}
