//! Cochains depending polynomially on the deformation parameter `s`.
//!
//! The template is the trivially weighted `N`-cycle whose last edge carries
//! `s^{m'}`. The cycle sum is then `A(s) = Σ α_e(s)` and the primitive is
//! `β_1 = -A / (1 - s^{m'})`, `β_{e+1} = β_e + α_e`. Near a torsion point `ζ`
//! with `A(ζ) = 0` the quotient is evaluated after dividing out `s - ζ`.

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde_json::{json, Value};
use thiserror::Error;

use crate::cech::{self, CechError, CycleCover};
use crate::multiplier::{arc_partition, xi_to_s, ArcBox, Multiplier, EPSILON};
use crate::scalar::Scalar;

/// Below this `|1 - s^{m'}|` the deflated quotient is used.
pub const DEFLATION_THRESHOLD: f64 = 1e-3;
/// `|A(ζ)| <= TORSION_TOL * (1 + max coefficient)` counts as vanishing.
pub const TORSION_TOL: f64 = 1e-9;
/// Interior grid covers this central fraction of the box.
pub const INTERIOR_FILL: f64 = 0.9;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum FamilyError {
    #[error("cochain order m' = {m_prime} does not match the box level {level}")]
    OrderMismatch { m_prime: u32, level: u32 },
    #[error("Condition (i) fails: class nonzero at torsion point {zeta} (A = {value})")]
    NonzeroAtTorsion { zeta: Complex64, value: Complex64 },
    #[error("need at least {needed} samples, got {got}")]
    TooFewSamples { needed: usize, got: usize },
    #[error("maximum principle violated: interior {interior} > boundary {boundary}")]
    MaximumPrinciple { interior: f64, boundary: f64 },
    #[error("polynomial division leaves a remainder")]
    NotDivisible,
    #[error(transparent)]
    Cech(#[from] CechError),
    #[error("invalid cochain JSON: {0}")]
    Json(String),
}

pub type Result<T> = std::result::Result<T, FamilyError>;

/// Polynomial with coefficients listed from degree 0 upward.
#[derive(Clone, Debug, PartialEq)]
pub struct Poly<S> {
    coeffs: Vec<S>,
}

impl<S: Scalar> Poly<S> {
    pub fn new(mut coeffs: Vec<S>) -> Self {
        while coeffs.len() > 1 && coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        if coeffs.is_empty() {
            coeffs.push(S::zero());
        }
        Poly { coeffs }
    }

    pub fn zero() -> Self {
        Poly { coeffs: vec![S::zero()] }
    }

    /// `c s^k`.
    pub fn monomial(c: S, k: usize) -> Self {
        let mut coeffs = vec![S::zero(); k + 1];
        coeffs[k] = c;
        Self::new(coeffs)
    }

    pub fn coeffs(&self) -> &[S] {
        &self.coeffs
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    pub fn eval(&self, s: &S) -> S {
        self.coeffs.iter().rev().fold(S::zero(), |acc, c| acc * s.clone() + c.clone())
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let get = |p: &Self, i: usize| p.coeffs.get(i).cloned().unwrap_or_else(S::zero);
        Self::new((0..n).map(|i| get(self, i) + get(other, i)).collect())
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&(-S::one())))
    }

    pub fn scale(&self, k: &S) -> Self {
        Self::new(self.coeffs.iter().map(|c| c.clone() * k.clone()).collect())
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = vec![S::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] = out[i + j].clone() + a.clone() * b.clone();
            }
        }
        Self::new(out)
    }

    pub fn derivative(&self) -> Self {
        Self::new(self.coeffs.iter().enumerate().skip(1).map(|(k, c)| c.clone() * S::from_int(k as i64)).collect())
    }

    /// `self = (s - z) q + r`, by synthetic division.
    pub fn div_linear(&self, z: &S) -> (Self, S) {
        let n = self.coeffs.len();
        if n == 1 {
            return (Self::zero(), self.coeffs[0].clone());
        }
        let mut q = vec![S::zero(); n - 1];
        let mut carry = S::zero();
        for k in (1..n).rev() {
            carry = self.coeffs[k].clone() + carry * z.clone();
            q[k - 1] = carry.clone();
        }
        let rem = self.coeffs[0].clone() + carry * z.clone();
        (Self::new(q), rem)
    }

    /// Exact long division; fails unless the remainder is zero.
    pub fn div_exact(&self, divisor: &Self) -> Result<Self> {
        let lead_inv = divisor.coeffs.last().and_then(Scalar::try_inv).ok_or(FamilyError::NotDivisible)?;
        let dd = divisor.degree();
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return if self.is_zero() { Ok(Self::zero()) } else { Err(FamilyError::NotDivisible) };
        }
        let mut q = vec![S::zero(); rem.len() - dd];
        for k in (0..q.len()).rev() {
            let c = rem[k + dd].clone() * lead_inv.clone();
            for (i, d) in divisor.coeffs.iter().enumerate() {
                rem[k + i] = rem[k + i].clone() - c.clone() * d.clone();
            }
            q[k] = c;
        }
        let exact = if S::EXACT {
            rem.iter().all(|c| c.is_zero())
        } else {
            let scale = crate::scalar::max_norm(&self.coeffs).max(1.0);
            rem.iter().all(|c| c.norm() <= 1e-12 * scale)
        };
        if exact {
            Ok(Self::new(q))
        } else {
            Err(FamilyError::NotDivisible)
        }
    }

    pub fn max_coeff(&self) -> f64 {
        crate::scalar::max_norm(&self.coeffs)
    }
}

/// A 1-cochain on the `s^{m'}`-twisted cycle, one polynomial per edge.
#[derive(Clone, Debug, PartialEq)]
pub struct ParamCochain1<S> {
    pub m_prime: u32,
    pub edges: Vec<Poly<S>>,
}

impl<S: Scalar> ParamCochain1<S> {
    pub fn new(m_prime: u32, edges: Vec<Poly<S>>) -> Result<Self> {
        if m_prime == 0 {
            return Err(FamilyError::Json("m_prime must be at least 1".into()));
        }
        if edges.len() < 3 {
            return Err(CechError::TooFewCharts(edges.len()).into());
        }
        Ok(ParamCochain1 { m_prime, edges })
    }

    pub fn n(&self) -> usize {
        self.edges.len()
    }

    /// `A(s) = Σ α_e(s)`.
    pub fn cycle_sum(&self) -> Poly<S> {
        self.edges.iter().fold(Poly::zero(), |acc, p| acc.add(p))
    }

    pub fn eval(&self, s: &S) -> Vec<S> {
        self.edges.iter().map(|p| p.eval(s)).collect()
    }

    /// The fibre cover at `s`.
    pub fn cover_at(&self, s: &S) -> Result<CycleCover<S>> {
        Ok(CycleCover::twisted(self.n(), s.powi(self.m_prime))?)
    }

    /// `{"m_prime", "N"?, "edges": [{"edge": [j, k], "poly": [{"re", "im"}, ...]}]}`;
    /// `N` defaults to 3 and missing edges are zero.
    pub fn from_json(v: &Value) -> Result<Self> {
        let bad = |m: &str| FamilyError::Json(m.to_string());
        let m_prime = v.get("m_prime").and_then(Value::as_u64).ok_or_else(|| bad("missing \"m_prime\""))?;
        let n = v.get("N").and_then(Value::as_u64).unwrap_or(3) as usize;
        let template = CycleCover::<S>::twisted(n, S::one())?;
        let mut edges = vec![Poly::zero(); n];
        for item in v.get("edges").and_then(Value::as_array).map(Vec::as_slice).unwrap_or(&[]) {
            let pair = item.get("edge").and_then(Value::as_array).ok_or_else(|| bad("edge needs \"edge\": [j, k]"))?;
            let j = pair.first().and_then(Value::as_u64).ok_or_else(|| bad("bad edge label"))?;
            let k = pair.get(1).and_then(Value::as_u64).ok_or_else(|| bad("bad edge label"))?;
            let (e, reversed) = template.edge_index(j as usize, k as usize)?;
            if reversed {
                return Err(bad("edges must follow the cycle orientation (j, j+1)"));
            }
            let coeffs = item
                .get("poly")
                .and_then(Value::as_array)
                .ok_or_else(|| bad("edge needs a \"poly\" array"))?
                .iter()
                .map(|c| cech::parse_scalar::<S>(c).ok_or_else(|| bad("unparseable coefficient")))
                .collect::<Result<Vec<S>>>()?;
            edges[e] = Poly::new(coeffs);
        }
        Self::new(m_prime as u32, edges)
    }

    pub fn to_json(&self) -> Value {
        let n = self.n();
        let edges: Vec<Value> = self
            .edges
            .iter()
            .enumerate()
            .map(|(e, p)| {
                let poly: Vec<Value> = p.coeffs().iter().map(cech::scalar_json).collect();
                json!({ "edge": [e + 1, (e + 1) % n + 1], "poly": poly })
            })
            .collect();
        json!({ "m_prime": self.m_prime, "N": n, "edges": edges })
    }
}

impl ParamCochain1<Complex64> {
    /// `max_e |α_e(s)|` over the given points.
    pub fn max_on(&self, points: &[Complex64]) -> f64 {
        points.iter().flat_map(|s| self.eval(s)).map(|a| a.norm()).fold(0.0, f64::max)
    }
}

/// Exact primitive when `s^{m'} - 1` divides `A`: every `β_j` is then a polynomial.
pub fn polynomial_primitive<S: Scalar>(alpha: &ParamCochain1<S>) -> Result<Vec<Poly<S>>> {
    let divisor = Poly::monomial(S::one(), alpha.m_prime as usize).sub(&Poly::new(vec![S::one()]));
    // β_1 = -A / (1 - s^{m'}) = A / (s^{m'} - 1)
    let mut beta = vec![alpha.cycle_sum().div_exact(&divisor)?];
    for e in 0..alpha.n() - 1 {
        beta.push(beta[e].add(&alpha.edges[e]));
    }
    Ok(beta)
}

/// Evaluates the primitive near one torsion point.
#[derive(Clone, Debug)]
struct Deflated {
    alpha: ParamCochain1<Complex64>,
    zeta: Complex64,
    /// `A = (s - ζ) Ã + A(ζ)`.
    quotient: Poly<Complex64>,
    a_at_zeta: Complex64,
}

impl Deflated {
    fn new(alpha: &ParamCochain1<Complex64>, zeta: Complex64) -> Self {
        let (quotient, a_at_zeta) = alpha.cycle_sum().div_linear(&zeta);
        Deflated { alpha: alpha.clone(), zeta, quotient, a_at_zeta }
    }

    /// `D(s)` with `1 - s^{m'} = (s - ζ) D(s)`.
    fn divisor_quotient(&self, s: Complex64) -> Complex64 {
        let m = self.alpha.m_prime as i32;
        let mut acc = Complex64::new(0.0, 0.0);
        let mut zp = Complex64::new(1.0, 0.0);
        for i in 0..m {
            acc += s.powi(m - 1 - i) * zp;
            zp *= self.zeta;
        }
        -acc
    }

    fn beta1(&self, s: Complex64) -> Complex64 {
        let sm = s.powu(self.alpha.m_prime);
        let one_minus = Complex64::new(1.0, 0.0) - sm;
        if one_minus.norm() >= DEFLATION_THRESHOLD {
            -self.alpha.cycle_sum().eval(&s) / one_minus
        } else {
            -self.quotient.eval(&s) / self.divisor_quotient(s)
        }
    }

    fn beta(&self, s: Complex64) -> Vec<Complex64> {
        let alpha = self.alpha.eval(&s);
        let mut beta = vec![self.beta1(s)];
        for e in 0..alpha.len() - 1 {
            beta.push(beta[e] + alpha[e]);
        }
        beta
    }

    /// `|s^{m'} A(s) / (1 - s^{m'})| = |s^{m'} β_1(s)|`.
    fn resonant_part(&self, s: Complex64) -> f64 {
        (s.powu(self.alpha.m_prime) * self.beta1(s)).norm()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ArcSolveReport {
    pub arc: ArcBox,
    pub torsion_point: Complex64,
    /// `A(ζ)`.
    pub torsion_obstruction: Complex64,
    /// `(s, β(s))` along the arc; the middle sample is `ζ`.
    pub beta_samples: Vec<(Complex64, Vec<Complex64>)>,
    pub interior_max: f64,
    pub boundary_max: f64,
    /// `max_e |α_e|` over the arc samples.
    pub alpha_max: f64,
    /// `(6/ε) max|α|`.
    pub uniform_bound: f64,
    /// `sup |s^{m'} A(s) / (1 - s^{m'})|` over the arc samples.
    pub resonant_sup: f64,
}

impl ArcSolveReport {
    pub fn within_uniform_bound(&self) -> bool {
        self.resonant_sup <= self.uniform_bound * (1.0 + 1e-9) + 1e-14
    }
}

fn check_order(alpha: &ParamCochain1<Complex64>, arc: &ArcBox) -> Result<()> {
    if alpha.m_prime != arc.level() {
        return Err(FamilyError::OrderMismatch { m_prime: alpha.m_prime, level: arc.level() });
    }
    Ok(())
}

fn check_torsion(alpha: &ParamCochain1<Complex64>, d: &Deflated) -> Result<()> {
    let scale = 1.0 + alpha.edges.iter().map(Poly::max_coeff).fold(0.0, f64::max);
    if d.a_at_zeta.norm() > TORSION_TOL * scale {
        return Err(FamilyError::NonzeroAtTorsion { zeta: d.zeta, value: d.a_at_zeta });
    }
    Ok(())
}

pub fn family_solve(alpha: &ParamCochain1<Complex64>, arc: &ArcBox, samples: usize) -> Result<ArcSolveReport> {
    if samples < 16 {
        return Err(FamilyError::TooFewSamples { needed: 16, got: samples });
    }
    check_order(alpha, arc)?;
    let zeta = arc.torsion_point();
    let d = Deflated::new(alpha, zeta);
    check_torsion(alpha, &d)?;

    // odd count puts ζ in the middle
    let count = samples | 1;
    let points: Vec<Complex64> = arc.arc_xi(count).into_iter().map(xi_to_s).collect();
    let mut beta_samples = Vec::with_capacity(count);
    for (i, &s) in points.iter().enumerate() {
        let s = if i == count / 2 { zeta } else { s };
        let one_minus = Complex64::new(1.0, 0.0) - s.powu(alpha.m_prime);
        let beta = if one_minus.norm() >= DEFLATION_THRESHOLD {
            cech::solve(&alpha.cover_at(&s)?, &alpha.eval(&s))?.beta
        } else {
            d.beta(s)
        };
        beta_samples.push((s, beta));
    }
    let alpha_max = alpha.max_on(&points);
    let resonant_sup = points.iter().map(|&s| d.resonant_part(s)).fold(0.0, f64::max);
    let (interior_max, boundary_max) = box_maxima(&d, arc, 64, 24);
    Ok(ArcSolveReport {
        arc: *arc,
        torsion_point: zeta,
        torsion_obstruction: d.a_at_zeta,
        beta_samples,
        interior_max,
        boundary_max,
        alpha_max,
        uniform_bound: 6.0 / EPSILON * alpha_max,
        resonant_sup,
    })
}

fn box_maxima(d: &Deflated, arc: &ArcBox, per_side: usize, per_axis: usize) -> (f64, f64) {
    let eval = |xi: &Complex64| d.resonant_part(xi_to_s(*xi));
    let boundary = arc.boundary_xi(per_side).iter().map(eval).fold(0.0, f64::max);
    let interior = arc.interior_xi(per_axis, INTERIOR_FILL).iter().map(eval).fold(0.0, f64::max);
    (interior, boundary)
}

/// Maxima of `|s^{m'} A(s) / (1 - s^{m'})|` over an interior grid and over the
/// boundary of the `ξ`-box; fails if the interior exceeds the boundary.
pub fn max_principle_bound(
    alpha: &ParamCochain1<Complex64>,
    arc: &ArcBox,
    boundary_samples: usize,
) -> Result<(f64, f64)> {
    if boundary_samples < 64 {
        return Err(FamilyError::TooFewSamples { needed: 64, got: boundary_samples });
    }
    check_order(alpha, arc)?;
    let d = Deflated::new(alpha, arc.torsion_point());
    check_torsion(alpha, &d)?;
    let per_axis = ((boundary_samples as f64).sqrt() as usize * 2).max(16);
    let (interior, boundary) = box_maxima(&d, arc, boundary_samples.div_ceil(4), per_axis);
    if interior > boundary * (1.0 + 1e-6) {
        return Err(FamilyError::MaximumPrinciple { interior, boundary });
    }
    Ok((interior, boundary))
}

/// Random `N = 3` cochain vanishing at every `m'`-th root of unity:
/// `α_e = c_e (s^{m'} - 1) + d_e(s)` with `Σ d_e = 0`, `deg d_e <= degree`.
pub fn vanishing_cochain(m_prime: u32, degree: usize, rng: &mut impl Rng) -> ParamCochain1<Complex64> {
    let mut disc = || {
        let r: f64 = rng.gen::<f64>().sqrt();
        Complex64::from_polar(r, 2.0 * PI * rng.gen::<f64>())
    };
    let c: Vec<Complex64> = (0..3).map(|_| disc()).collect();
    let d0: Vec<Complex64> = (0..=degree).map(|_| disc()).collect();
    let d1: Vec<Complex64> = (0..=degree).map(|_| disc()).collect();
    let d2: Vec<Complex64> = d0.iter().zip(&d1).map(|(a, b)| -(a + b)).collect();
    let base =
        Poly::monomial(Complex64::new(1.0, 0.0), m_prime as usize).sub(&Poly::new(vec![Complex64::new(1.0, 0.0)]));
    let edges = [d0, d1, d2].into_iter().zip(&c).map(|(d, ci)| base.scale(ci).add(&Poly::new(d))).collect();
    ParamCochain1 { m_prime, edges }
}

/// One line of the naive-vs-uniform comparison; bounds are in units of `max|α|`.
#[derive(Clone, Debug, PartialEq)]
pub struct ComparisonRow {
    pub m: u32,
    pub theta: f64,
    pub theta_label: String,
    /// `K / d(1, σ^m)`.
    pub naive_bound: f64,
    /// `6 / ε`.
    pub family_bound: f64,
    /// Largest `sup |s^{m'} A / (1 - s^{m'})| / max|α|` over the boxes of order `m`.
    pub family_sup: f64,
    pub interior_max: f64,
    pub boundary_max: f64,
    pub max_principle_ok: bool,
}

impl ComparisonRow {
    pub fn family_ok(&self) -> bool {
        self.family_sup <= self.family_bound * (1.0 + 1e-9)
    }
}

#[derive(Clone, Copy, Debug)]
pub struct SweepConfig {
    pub m0: u32,
    pub m_max: u32,
    pub seed: u64,
    /// Arc samples per box.
    pub samples: usize,
    /// Degree of the cancelling part of the generated cochains.
    pub degree: usize,
    /// Per-fibre constant `K` of the naive bound.
    pub k_naive: f64,
}

impl Default for SweepConfig {
    fn default() -> Self {
        SweepConfig { m0: 1, m_max: 50, seed: 0, samples: 129, degree: 3, k_naive: 2.0 }
    }
}

#[derive(Clone, Copy, Debug, Default)]
struct OrderStats {
    family_sup: f64,
    interior_max: f64,
    boundary_max: f64,
    max_principle_ok: bool,
}

fn order_stats(m: u32, cfg: &SweepConfig) -> Result<OrderStats> {
    let mut stats = OrderStats { max_principle_ok: true, ..OrderStats::default() };
    for arc in arc_partition(m, cfg.m0) {
        let stream = (u64::from(m) << 32) | u64::from(arc.nu);
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
        rng.set_stream(stream);
        let alpha = vanishing_cochain(arc.level(), cfg.degree, &mut rng);
        let rep = family_solve(&alpha, &arc, cfg.samples)?;
        let scale = rep.alpha_max;
        if scale == 0.0 {
            continue;
        }
        stats.family_sup = stats.family_sup.max(rep.resonant_sup / scale);
        stats.interior_max = stats.interior_max.max(rep.interior_max / scale);
        stats.boundary_max = stats.boundary_max.max(rep.boundary_max / scale);
        stats.max_principle_ok &= rep.interior_max <= rep.boundary_max * (1.0 + 1e-6);
    }
    Ok(stats)
}

/// For each `m <= m_max` and multiplier: the per-fibre bound `K / d(1, σ^m)`
/// against the uniform family bound `6/ε`, with the measured family supremum
/// over cochains generated to vanish at the torsion points.
pub fn improved_vs_naive(thetas: &[Multiplier], cfg: &SweepConfig) -> Result<Vec<ComparisonRow>> {
    let stats: Vec<OrderStats> = (1..=cfg.m_max).into_par_iter().map(|m| order_stats(m, cfg)).collect::<Result<_>>()?;
    let mut rows = Vec::with_capacity(thetas.len() * stats.len());
    for theta in thetas {
        for (i, st) in stats.iter().enumerate() {
            let m = i as u32 + 1;
            let d = theta.divisor(u64::from(m));
            rows.push(ComparisonRow {
                m,
                theta: theta.theta(),
                theta_label: theta.label(),
                naive_bound: if d > 0.0 { cfg.k_naive / d } else { f64::INFINITY },
                family_bound: 6.0 / EPSILON,
                family_sup: st.family_sup,
                interior_max: st.interior_max,
                boundary_max: st.boundary_max,
                max_principle_ok: st.max_principle_ok,
            });
        }
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::GaussRational;
    use num_rational::BigRational;

    type Q = GaussRational;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    fn q(n: i64) -> Q {
        Q::new(BigRational::from_integer(n.into()), BigRational::from_integer(0.into()))
    }

    fn single(poly: Vec<Complex64>) -> ParamCochain1<Complex64> {
        ParamCochain1::new(1, vec![Poly::new(poly), Poly::zero(), Poly::zero()]).unwrap()
    }

    #[test]
    fn synthetic_division_and_derivative() {
        // s^2 - 3s + 2 = (s - 1)(s - 2)
        let p = Poly::new(vec![q(2), q(-3), q(1)]);
        let (quot, rem) = p.div_linear(&q(1));
        assert_eq!(quot, Poly::new(vec![q(-2), q(1)]));
        assert_eq!(rem, q(0));
        assert_eq!(p.derivative(), Poly::new(vec![q(-3), q(2)]));
        assert_eq!(p.div_exact(&Poly::new(vec![q(-2), q(1)])).unwrap(), Poly::new(vec![q(-1), q(1)]));
        assert_eq!(p.div_exact(&Poly::new(vec![q(-3), q(1)])), Err(FamilyError::NotDivisible));
    }

    #[test]
    fn divisor_cancels_exactly() {
        let arc = ArcBox::new(1, 0, 1).unwrap();
        let rep = family_solve(&single(vec![c(-1.0), c(1.0)]), &arc, 33).unwrap();
        for (_, beta) in &rep.beta_samples {
            assert!((beta[0] - c(1.0)).norm() < 1e-12);
        }
        let exact = ParamCochain1::new(1, vec![Poly::new(vec![q(-1), q(1)]), Poly::zero(), Poly::zero()]).unwrap();
        assert_eq!(polynomial_primitive(&exact).unwrap()[0], Poly::new(vec![q(1)]));
    }

    #[test]
    fn squared_factor_leaves_linear_primitive() {
        let arc = ArcBox::new(1, 0, 1).unwrap();
        let rep = family_solve(&single(vec![c(1.0), c(-2.0), c(1.0)]), &arc, 33).unwrap();
        let (s_mid, beta_mid) = &rep.beta_samples[rep.beta_samples.len() / 2];
        assert_eq!(*s_mid, c(1.0));
        assert!(beta_mid[0].norm() < 1e-14);
        for (s, beta) in &rep.beta_samples {
            assert!((beta[0] - (s - 1.0)).norm() < 1e-12);
        }
    }

    #[test]
    fn nonvanishing_cochain_rejected() {
        let arc = ArcBox::new(1, 0, 1).unwrap();
        assert!(matches!(family_solve(&single(vec![c(1.0)]), &arc, 33), Err(FamilyError::NonzeroAtTorsion { .. })));
    }

    #[test]
    fn max_principle_examples() {
        let arc = ArcBox::new(1, 0, 1).unwrap();
        let (interior, boundary) = max_principle_bound(&single(vec![c(-1.0), c(1.0)]), &arc, 256).unwrap();
        assert!((boundary - (PI / 2.0).exp()).abs() < 1e-12);
        assert!(interior < boundary);

        let zero = ParamCochain1::new(1, vec![Poly::zero(); 3]).unwrap();
        assert_eq!(max_principle_bound(&zero, &arc, 64).unwrap(), (0.0, 0.0));

        let (i2, b2) = max_principle_bound(&single(vec![c(1.0), c(-2.0), c(1.0)]), &arc, 256).unwrap();
        assert!(i2 <= b2);
    }

    #[test]
    fn agrees_with_fibrewise_solve() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for (m, m0) in [(1, 1), (3, 1), (4, 2)] {
            for arc in arc_partition(m, m0) {
                let alpha = vanishing_cochain(arc.level(), 2, &mut rng);
                let rep = family_solve(&alpha, &arc, 65).unwrap();
                for (s, beta) in &rep.beta_samples {
                    if (c(1.0) - s.powu(arc.level())).norm() < 0.1 {
                        continue;
                    }
                    let direct = cech::solve(&alpha.cover_at(s).unwrap(), &alpha.eval(s)).unwrap().beta;
                    for (a, b) in beta.iter().zip(&direct) {
                        assert!((a - b).norm() <= 1e-10 * (1.0 + b.norm()));
                    }
                }
            }
        }
    }

    #[test]
    fn order_mismatch_rejected() {
        let arc = ArcBox::new(2, 0, 1).unwrap();
        assert!(matches!(
            family_solve(&single(vec![c(-1.0), c(1.0)]), &arc, 33),
            Err(FamilyError::OrderMismatch { .. })
        ));
    }

    #[test]
    fn zero_cochain_gives_zero_columns() {
        let arc = ArcBox::new(2, 1, 1).unwrap();
        let zero = ParamCochain1::new(2, vec![Poly::zero(); 3]).unwrap();
        let rep = family_solve(&zero, &arc, 17).unwrap();
        assert_eq!(rep.resonant_sup, 0.0);
        assert_eq!(rep.uniform_bound, 0.0);
    }

    #[test]
    fn json_round_trip() {
        let v = json!({"m_prime": 2, "edges": [{"edge": [1, 2], "poly": [{"re": -1, "im": 0}, {"re": 0, "im": 0}, {"re": 1, "im": 0}]}]});
        let a = ParamCochain1::<Q>::from_json(&v).unwrap();
        assert_eq!(a.cycle_sum(), Poly::new(vec![q(-1), q(0), q(1)]));
        assert_eq!(polynomial_primitive(&a).unwrap()[0], Poly::new(vec![q(1)]));
        assert_eq!(ParamCochain1::<Q>::from_json(&a.to_json()).unwrap(), a);
        let bad = json!({"m_prime": 1, "edges": [{"edge": [2, 1], "poly": []}]});
        assert!(ParamCochain1::<Q>::from_json(&bad).is_err());
    }

    #[test]
    fn small_sweep_columns() {
        let cfg = SweepConfig { m_max: 8, ..SweepConfig::default() };
        let rows = improved_vs_naive(&[Multiplier::golden_mean()], &cfg).unwrap();
        assert_eq!(rows.len(), 8);
        assert!(rows.iter().all(|r| r.family_ok() && r.max_principle_ok));
        assert!(rows.iter().all(|r| r.family_bound == 1.5));
    }
}
