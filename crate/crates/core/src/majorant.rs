//! Majorant series certifying convergence of the formal linearization.
//!
//! The toy majorant solves `Σ_{m≥2} A_m X^m / K_m = M A² / (1 - A)` with
//! `A = X + ...` term by term; for constant `K` this is the quadratic
//! `(1 + KM) A² - (1 + X) A + X = 0`. The general majorant solves
//! `F(X, A(X)) = 0` with
//!
//! ```text
//! F(X, Y) = -Y + C M (P - 1 - R Σ_ν (X^ν + Y)) + 3 C Θ Y (P - 1),
//! P = Π_ν 1 / (1 - R (X^ν + Y)),   C = 14 M0 Θ K² (1 + Θ).
//! ```

use num_complex::Complex64;
use serde_json::{json, Value};
use thiserror::Error;

use crate::linearize::{LinearizationResult, TransitionSystem};
use crate::scalar::Scalar;
use crate::series::{solve_implicit, MultiSeries, SeriesError};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum MajorantError {
    #[error("invalid majorant spec: {0}")]
    InvalidSpec(String),
    #[error(transparent)]
    Series(#[from] SeriesError),
    #[error("radius estimate needs at least {needed} nonzero coefficients, got {got}")]
    TooFewCoefficients { needed: usize, got: usize },
    #[error("transition coefficient {value:e} at edge {edge}, component {component}, index {index:?} exceeds M R^|a|")]
    EnvelopeViolated { edge: usize, component: usize, index: Vec<u32>, value: f64 },
}

pub type Result<T> = std::result::Result<T, MajorantError>;

fn invalid<T>(msg: impl Into<String>) -> Result<T> {
    Err(MajorantError::InvalidSpec(msg.into()))
}

fn positive(name: &str, x: f64) -> Result<()> {
    if x.is_finite() && x > 0.0 {
        Ok(())
    } else {
        invalid(format!("{name} must be finite and positive, got {x}"))
    }
}

/// Per-order constant `K_m` of the toy recursion.
#[derive(Clone, Debug, PartialEq)]
pub enum ToyK {
    Uniform(f64),
    /// `K_m = values[m - 2]`, the last value repeating.
    PerOrder(Vec<f64>),
    /// `K_m = k m^alpha / a`.
    DiophantineDecay {
        k: f64,
        alpha: f64,
        a: f64,
    },
}

impl ToyK {
    pub fn at(&self, m: usize) -> f64 {
        match self {
            ToyK::Uniform(k) => *k,
            ToyK::PerOrder(v) => v.get(m - 2).or(v.last()).copied().unwrap_or(1.0),
            ToyK::DiophantineDecay { k, alpha, a } => k * (m as f64).powf(*alpha) / a,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ToyMajorantSpec {
    pub m: f64,
    pub k: ToyK,
    pub order: usize,
}

impl ToyMajorantSpec {
    pub fn uniform(m: f64, k: f64, order: usize) -> Self {
        ToyMajorantSpec { m, k: ToyK::Uniform(k), order }
    }

    pub fn validate(&self) -> Result<()> {
        positive("M", self.m)?;
        let ks: Vec<f64> = match &self.k {
            ToyK::Uniform(k) => vec![*k],
            ToyK::PerOrder(v) => v.clone(),
            ToyK::DiophantineDecay { k, alpha, a } => {
                positive("A", *a)?;
                if !alpha.is_finite() || *alpha < 0.0 {
                    return invalid("alpha must be nonnegative");
                }
                vec![*k]
            }
        };
        if ks.is_empty() || ks.iter().any(|k| !k.is_finite() || *k < 1.0) {
            return invalid("K must be finite and at least 1");
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct GeneralMajorantSpec {
    pub m0: u32,
    pub theta: f64,
    pub k: f64,
    pub m: f64,
    pub r_const: f64,
    pub r: usize,
    pub order: usize,
}

impl GeneralMajorantSpec {
    pub fn validate(&self) -> Result<()> {
        if self.m0 < 1 {
            return invalid("M0 must be at least 1");
        }
        if !(self.theta.is_finite() && self.theta > 1.0) {
            return invalid("Theta must exceed 1");
        }
        if !(self.k.is_finite() && self.k > 1.0) {
            return invalid("K must exceed 1");
        }
        if !(self.m.is_finite() && self.m >= 0.0) {
            return invalid("M must be finite and nonnegative");
        }
        positive("R", self.r_const)?;
        if self.r < 1 {
            return invalid("r must be at least 1");
        }
        Ok(())
    }

    /// `C = 14 M0 Θ K² (1 + Θ)`.
    pub fn c(&self) -> f64 {
        14.0 * f64::from(self.m0) * self.theta * self.k * self.k * (1.0 + self.theta)
    }

    /// `14 M0 Θ K²`, the factor with `A_{m+1} = factor * B_m`.
    pub fn step_factor(&self) -> f64 {
        14.0 * f64::from(self.m0) * self.theta * self.k * self.k
    }
}

/// Either majorant spec, as read from JSON.
#[derive(Clone, Debug, PartialEq)]
pub enum MajorantSpec {
    Toy(ToyMajorantSpec),
    General(GeneralMajorantSpec),
}

impl MajorantSpec {
    /// `{"kind": "toy", "M", "K" | "K_sequence" | "diophantine": {"K", "alpha", "A"}, "order"}`
    /// or `{"kind": "general", "M0", "Theta", "K", "M", "R", "r", "order"}`.
    pub fn from_json(v: &Value, order_override: Option<usize>) -> Result<Self> {
        let num = |key: &str| v.get(key).and_then(Value::as_f64);
        let need = |key: &str| num(key).ok_or_else(|| MajorantError::InvalidSpec(format!("missing \"{key}\"")));
        let kind = v.get("kind").and_then(Value::as_str).unwrap_or("toy");
        match kind {
            "toy" => {
                let k = if let Some(seq) = v.get("K_sequence").and_then(Value::as_array) {
                    ToyK::PerOrder(seq.iter().filter_map(Value::as_f64).collect())
                } else if let Some(d) = v.get("diophantine") {
                    let get = |key: &str| d.get(key).and_then(Value::as_f64);
                    ToyK::DiophantineDecay {
                        k: get("K").unwrap_or(1.0),
                        alpha: get("alpha").unwrap_or(1.0),
                        a: get("A").unwrap_or(1.0),
                    }
                } else {
                    ToyK::Uniform(need("K")?)
                };
                let order = order_override.or(num("order").map(|o| o as usize)).unwrap_or(30);
                let spec = ToyMajorantSpec { m: need("M")?, k, order };
                spec.validate()?;
                Ok(MajorantSpec::Toy(spec))
            }
            "general" => {
                let spec = GeneralMajorantSpec {
                    m0: num("M0").unwrap_or(1.0) as u32,
                    theta: need("Theta")?,
                    k: need("K")?,
                    m: need("M")?,
                    r_const: need("R")?,
                    r: num("r").unwrap_or(1.0) as usize,
                    order: order_override.or(num("order").map(|o| o as usize)).unwrap_or(12),
                };
                spec.validate()?;
                Ok(MajorantSpec::General(spec))
            }
            other => invalid(format!("unknown majorant kind {other:?}")),
        }
    }

    pub fn to_json(&self) -> Value {
        match self {
            MajorantSpec::Toy(t) => {
                let mut out = json!({ "kind": "toy", "M": t.m, "order": t.order });
                match &t.k {
                    ToyK::Uniform(k) => out["K"] = json!(k),
                    ToyK::PerOrder(v) => out["K_sequence"] = json!(v),
                    ToyK::DiophantineDecay { k, alpha, a } => {
                        out["diophantine"] = json!({ "K": k, "alpha": alpha, "A": a })
                    }
                }
                out
            }
            MajorantSpec::General(g) => json!({
                "kind": "general", "M0": g.m0, "Theta": g.theta, "K": g.k,
                "M": g.m, "R": g.r_const, "r": g.r, "order": g.order,
            }),
        }
    }
}

/// A majorant with nonnegative real coefficients.
#[derive(Clone, Debug, PartialEq)]
pub struct MajorantSeries<S> {
    pub series: MultiSeries<S>,
}

impl<S: Scalar> MajorantSeries<S> {
    pub fn order(&self) -> usize {
        self.series.order()
    }

    pub fn vars(&self) -> usize {
        self.series.vars()
    }

    pub fn coeff(&self, idx: &[u32]) -> f64 {
        self.series.coeff(idx).to_c64().re
    }

    /// `A(X, ..., X)` coefficients, degree 0 upward.
    pub fn diagonal(&self) -> Vec<f64> {
        self.series.diagonal().coeffs().iter().map(|c| c.to_c64().re).collect()
    }

    /// Largest coefficient of total degree `m`.
    pub fn max_of_degree(&self, m: usize) -> f64 {
        self.series.degree_part(m).iter().map(|(_, c)| c.to_c64().re).fold(0.0, f64::max)
    }

    pub fn min_coefficient(&self) -> f64 {
        self.series.coeffs().iter().map(|c| c.to_c64().re).fold(f64::INFINITY, f64::min)
    }

    pub fn is_real(&self) -> bool {
        self.series.coeffs().iter().all(|c| c.to_c64().im == 0.0)
    }
}

fn univariate(coeffs: &[f64]) -> MajorantSeries<Complex64> {
    let terms = coeffs.iter().enumerate().map(|(k, &c)| (vec![k as u32], Complex64::new(c, 0.0)));
    MajorantSeries { series: MultiSeries::from_terms(1, coeffs.len() - 1, terms).expect("univariate") }
}

fn convolve(a: &[f64], b: &[f64], n: usize) -> Vec<f64> {
    let mut out = vec![0.0; n + 1];
    for (i, x) in a.iter().enumerate().take(n + 1) {
        for (j, y) in b.iter().enumerate().take(n + 1 - i) {
            out[i + j] += x * y;
        }
    }
    out
}

/// `A_m = K_m [X^m] (M A² / (1 - A))`, `A_1 = 1`.
pub fn toy_majorant(spec: &ToyMajorantSpec) -> Result<MajorantSeries<Complex64>> {
    spec.validate()?;
    let n = spec.order.max(1);
    let mut a = vec![0.0; n + 1];
    a[1] = 1.0;
    for m in 2..=n {
        // [X^m] Σ_{k≥2} A^k only involves A_1..A_{m-1}
        let mut power = convolve(&a, &a, m);
        let mut total = power[m];
        for _ in 3..=m {
            power = convolve(&power, &a, m);
            total += power[m];
        }
        a[m] = spec.k.at(m) * spec.m * total;
    }
    Ok(univariate(&a))
}

/// Power series square root of `p` with `p_0 > 0`.
fn sqrt_series(p: &[f64]) -> Vec<f64> {
    let mut s = vec![0.0; p.len()];
    s[0] = p[0].sqrt();
    for n in 1..p.len() {
        let cross: f64 = (1..n).map(|k| s[k] * s[n - k]).sum();
        s[n] = (p[n] - cross) / (2.0 * s[0]);
    }
    s
}

/// Coefficients of `((1 + X) - sqrt((1 + X)² - 4 (1 + KM) X)) / (2 (1 + KM))`.
pub fn toy_closed_form(m: f64, k: f64, order: usize) -> Vec<f64> {
    let c = 1.0 + k * m;
    let mut disc = vec![0.0; order + 1];
    disc[0] = 1.0;
    if order >= 1 {
        disc[1] = 2.0 - 4.0 * c;
    }
    if order >= 2 {
        disc[2] = 1.0;
    }
    let root = sqrt_series(&disc);
    (0..=order)
        .map(|i| {
            let lin = match i {
                0 | 1 => 1.0,
                _ => 0.0,
            };
            (lin - root[i]) / (2.0 * c)
        })
        .collect()
}

/// Smaller root of `(1 + X)² = 4 (1 + KM) X`.
pub fn toy_radius(m: f64, k: f64) -> f64 {
    let c = 1.0 + k * m;
    let b = 2.0 * c - 1.0;
    b - (b * b - 1.0).sqrt()
}

fn general_equation<S: Scalar>(
    spec: &GeneralMajorantSpec,
    x: &[MultiSeries<S>],
    y: &MultiSeries<S>,
) -> std::result::Result<MultiSeries<S>, SeriesError> {
    let r = spec.r;
    let c = S::from_f64(spec.c(), 0.0);
    let m = S::from_f64(spec.m, 0.0);
    let big_r = S::from_f64(spec.r_const, 0.0);
    let theta = S::from_f64(spec.theta, 0.0);
    let (vars, order) = (y.vars(), y.order());
    let mut p = MultiSeries::one(vars, order);
    let mut lin = MultiSeries::zero(vars, order);
    for xi in x.iter().take(r) {
        let u = xi.add(y)?.scale(&big_r)?;
        p = p.mul(&u.reciprocal_one_minus()?)?;
        lin = lin.add(&u)?;
    }
    let p_minus_1 = p.add_constant(&(-S::one()));
    let first = p_minus_1.sub(&lin)?.scale(&(c.clone() * m))?;
    let three = S::from_int(3);
    let second = y.mul(&p_minus_1)?.scale(&(three * c * theta))?;
    first.add(&second)?.sub(y)
}

/// Solves `F(X, A) = 0` through the spec order.
pub fn general_majorant<S: Scalar>(spec: &GeneralMajorantSpec) -> Result<MajorantSeries<S>> {
    spec.validate()?;
    let f = |x: &[MultiSeries<S>], y: &MultiSeries<S>| general_equation(spec, x, y);
    let series = solve_implicit(&f, spec.r, spec.order)?;
    Ok(MajorantSeries { series })
}

/// `F(X, A(X))`, which should vanish through the truncation order.
pub fn general_residual<S: Scalar>(spec: &GeneralMajorantSpec, a: &MajorantSeries<S>) -> Result<MultiSeries<S>> {
    let r = spec.r;
    let x: Vec<MultiSeries<S>> = (0..r).map(|i| MultiSeries::var(r, a.order(), i)).collect();
    Ok(general_equation(spec, &x, &a.series)?)
}

/// The series `(1+Θ) M (P - 1 - R Σ (X^ν + A)) + 3 (1+Θ) Θ A (P - 1)` bounding the `h` data.
fn b_series<S: Scalar>(
    spec: &GeneralMajorantSpec,
    a: &MultiSeries<S>,
) -> std::result::Result<MultiSeries<S>, SeriesError> {
    let r = spec.r;
    let x: Vec<MultiSeries<S>> = (0..r).map(|i| MultiSeries::var(r, a.order(), i)).collect();
    // F = -A + 14 M0 Θ K² * (this series)
    let g = general_equation(spec, &x, a)?.add(a)?;
    g.scale(&S::from_f64(spec.step_factor(), 0.0).try_inv().expect("positive factor"))
}

/// `B_m`: the largest degree-`(m+1)` coefficient of the `h`-bounding series built
/// from `a_partial` (which must be complete through order `m`).
pub fn b_bounds<S: Scalar>(spec: &GeneralMajorantSpec, a_partial: &MajorantSeries<S>, m: usize) -> Result<f64> {
    spec.validate()?;
    if a_partial.vars() != spec.r {
        return invalid("majorant variable count differs from r");
    }
    let a = a_partial.series.truncate(m).pad_to(m + 1);
    let g = b_series(spec, &a)?;
    Ok(g.degree_part(m + 1).iter().map(|(_, c)| c.to_c64().re).fold(0.0, f64::max))
}

/// `1 / limsup A_m^{1/m}`, from a least-squares fit of `log A_m` against `m`
/// over the upper half of the nonzero coefficients.
pub fn radius_estimate(coeffs: &[f64]) -> Result<f64> {
    let points: Vec<(f64, f64)> =
        coeffs.iter().enumerate().skip(1).filter(|(_, c)| **c > 0.0).map(|(m, c)| (m as f64, c.ln())).collect();
    if points.len() < 8 {
        return Err(MajorantError::TooFewCoefficients { needed: 8, got: points.len() });
    }
    let top = &points[points.len() / 2..];
    let n = top.len() as f64;
    let mx = top.iter().map(|p| p.0).sum::<f64>() / n;
    let my = top.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = top.iter().map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = top.iter().map(|(x, _)| (x - mx) * (x - mx)).sum();
    Ok((-sxy / sxx).exp())
}

#[derive(Clone, Debug, PartialEq)]
pub enum Domination {
    Pass,
    Violation { chart: usize, component: usize, index: Vec<u32>, value: f64, bound: f64 },
}

#[derive(Clone, Debug, PartialEq)]
pub struct DominationReport {
    pub verdict: Domination,
    pub checked: usize,
    /// Smallest `A_a - |F_a|` over all checked entries.
    pub min_margin: f64,
    /// Largest `|F_a| / A_a` over entries with `A_a > 0`.
    pub max_ratio: f64,
}

/// Identity stage map: order `m` is bounded by the majorant coefficient of order `m`.
pub fn single_fibre_stages(m: usize) -> usize {
    m
}

/// Checks `|F_{j,a}^λ| <= A_{stage(|a|)}` (coefficient of `X^a` in the majorant,
/// taken at the stage's degree) after verifying `|f_a| <= M R^{|a|}`.
pub fn domination_check<S: Scalar>(
    system: &TransitionSystem<S>,
    result: &LinearizationResult<S>,
    a: &MajorantSeries<Complex64>,
    envelope: (f64, f64),
    stage_map: impl Fn(usize) -> usize,
) -> Result<DominationReport> {
    let (m, radius) = envelope;
    if let Some((edge, component, index, value)) = system.envelope_violation(m, radius) {
        return Err(MajorantError::EnvelopeViolated { edge, component, index, value });
    }
    if a.vars() != result.r {
        return invalid("majorant variable count differs from the system codimension");
    }
    let mut report =
        DominationReport { verdict: Domination::Pass, checked: 0, min_margin: f64::INFINITY, max_ratio: 0.0 };
    for (chart, row) in result.corrections.iter().enumerate() {
        for (component, series) in row.iter().enumerate() {
            for d in 2..=result.solved_order() {
                let stage = stage_map(d);
                for (idx, c) in series.degree_part(d) {
                    let bound = if stage == d { a.coeff(&idx) } else { a.max_of_degree(stage) };
                    let value = c.norm();
                    report.checked += 1;
                    report.min_margin = report.min_margin.min(bound - value);
                    if bound > 0.0 {
                        report.max_ratio = report.max_ratio.max(value / bound);
                    }
                    if value > bound * (1.0 + 1e-12) && report.verdict == Domination::Pass {
                        report.verdict = Domination::Violation { chart, component, index: idx, value, bound };
                    }
                }
            }
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cech::CycleCover;
    use crate::linearize::linearize;
    use crate::scalar::GaussRational;
    use num_rational::BigRational;
    use num_traits::Zero;

    fn general(m: f64, order: usize, r: usize) -> GeneralMajorantSpec {
        GeneralMajorantSpec { m0: 1, theta: 2.0, k: 2.0, m, r_const: 1.0, r, order }
    }

    #[test]
    fn toy_first_coefficients() {
        let a = toy_majorant(&ToyMajorantSpec::uniform(1.0, 2.0, 6)).unwrap();
        let d = a.diagonal();
        assert_eq!(d[1], 1.0);
        assert_eq!(d[2], 2.0);
        let closed = toy_closed_form(1.0, 2.0, 6);
        for (x, y) in d.iter().zip(&closed) {
            assert!((x - y).abs() <= 1e-12 * y.abs().max(1.0));
        }
    }

    #[test]
    fn toy_small_km_tends_to_identity() {
        let a = toy_majorant(&ToyMajorantSpec::uniform(1e-9, 1.0, 8)).unwrap().diagonal();
        assert!(a[2..].iter().all(|c| *c < 1e-8));
    }

    #[test]
    fn toy_radius_value() {
        assert!((toy_radius(1.0, 2.0) - (5.0 - 2.0 * 6f64.sqrt())).abs() < 1e-15);
        assert!((toy_radius(1.0, 2.0) - 0.10102).abs() < 1e-5);
    }

    #[test]
    fn per_order_k_matches_uniform() {
        let seq = ToyMajorantSpec { m: 1.0, k: ToyK::PerOrder(vec![2.0; 3]), order: 10 };
        assert_eq!(toy_majorant(&seq).unwrap(), toy_majorant(&ToyMajorantSpec::uniform(1.0, 2.0, 10)).unwrap());
        let dio = ToyMajorantSpec { m: 1.0, k: ToyK::DiophantineDecay { k: 2.0, alpha: 1.0, a: 0.5 }, order: 10 };
        let a = toy_majorant(&dio).unwrap().diagonal();
        assert_eq!(a[2], 2.0 * 2.0 / 0.5);
    }

    #[test]
    fn general_a2_is_336_exactly() {
        let a = general_majorant::<GaussRational>(&general(1.0, 4, 1)).unwrap();
        let expect = GaussRational::new(BigRational::from_integer(336.into()), BigRational::from_integer(0.into()));
        assert_eq!(a.series.coeff(&[2]), expect);
        assert!(a.series.coeff(&[1]).is_zero());
        assert!(a.min_coefficient() >= 0.0);
    }

    #[test]
    fn general_zero_data() {
        let a = general_majorant::<Complex64>(&general(0.0, 6, 1)).unwrap();
        assert!(a.series.is_zero());
        for m in 1..5 {
            assert_eq!(b_bounds(&general(0.0, 6, 1), &a, m).unwrap(), 0.0);
        }
    }

    #[test]
    fn b_bounds_relation() {
        let spec = general(1.0, 6, 1);
        let a = general_majorant::<Complex64>(&spec).unwrap();
        assert_eq!(b_bounds(&spec, &a, 1).unwrap(), 3.0);
        for m in 1..6 {
            let b = b_bounds(&spec, &a, m).unwrap();
            let next = a.coeff(&[m as u32 + 1]);
            assert!((next - spec.step_factor() * b).abs() <= 1e-9 * next);
        }
    }

    #[test]
    fn residual_vanishes() {
        let spec = general(1.0, 10, 1);
        let a = general_majorant::<Complex64>(&spec).unwrap();
        let res = general_residual(&spec, &a).unwrap();
        assert!(res.max_norm() <= 1e-9 * a.series.max_norm());
    }

    #[test]
    fn radius_of_geometric_series() {
        let geo = vec![1.0; 20];
        assert!((radius_estimate(&geo).unwrap() - 1.0).abs() < 1e-12);
        assert!(matches!(radius_estimate(&[1.0; 5]), Err(MajorantError::TooFewCoefficients { .. })));
    }

    #[test]
    fn zero_system_is_dominated() {
        let cover = CycleCover::twisted(3, Complex64::from_polar(1.0, 1.0)).unwrap();
        let sys = TransitionSystem::univariate(cover, vec![vec![]; 3], 8).unwrap();
        let res = linearize(&sys).unwrap();
        let a = general_majorant::<Complex64>(&general(1.0, 8, 1)).unwrap();
        let rep = domination_check(&sys, &res, &a, (1.0, 1.0), single_fibre_stages).unwrap();
        assert_eq!(rep.verdict, Domination::Pass);
    }

    #[test]
    fn inflated_coefficient_is_caught() {
        let sigma = Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * 0.618_033_988_749_894_9);
        let cover = CycleCover::twisted(3, sigma).unwrap();
        let f = vec![vec![Complex64::new(0.5, 0.0); 7]; 3];
        let sys = TransitionSystem::univariate(cover, f, 8).unwrap();
        let mut res = linearize(&sys).unwrap();
        let a = general_majorant::<Complex64>(&general(1.0, 8, 1)).unwrap();
        assert_eq!(
            domination_check(&sys, &res, &a, (1.0, 1.0), single_fibre_stages).unwrap().verdict,
            Domination::Pass
        );
        let bound = a.coeff(&[5]);
        res.corrections[1][0].set(&[5], Complex64::new(10.0 * bound, 0.0)).unwrap();
        match domination_check(&sys, &res, &a, (1.0, 1.0), single_fibre_stages).unwrap().verdict {
            Domination::Violation { chart, index, .. } => assert_eq!((chart, index), (1, vec![5])),
            Domination::Pass => panic!("violation missed"),
        }
        assert!(matches!(
            domination_check(&sys, &res, &a, (0.1, 1.0), single_fibre_stages),
            Err(MajorantError::EnvelopeViolated { .. })
        ));
    }

    #[test]
    fn spec_json_round_trip() {
        let v = json!({"kind": "general", "M0": 1, "Theta": 2, "K": 2, "M": 1, "R": 1, "r": 1, "order": 12});
        let spec = MajorantSpec::from_json(&v, None).unwrap();
        assert_eq!(MajorantSpec::from_json(&spec.to_json(), None).unwrap(), spec);
        let toy = MajorantSpec::from_json(&json!({"kind": "toy", "M": 1, "K": 2}), Some(9)).unwrap();
        assert_eq!(toy, MajorantSpec::Toy(ToyMajorantSpec::uniform(1.0, 2.0, 9)));
        assert!(
            MajorantSpec::from_json(&json!({"kind": "general", "Theta": 0.5, "K": 2, "M": 1, "R": 1}), None).is_err()
        );
    }
}
