//! Order-by-order linearization of a neighbourhood glued along a cycle cover.
//!
//! Chart `j` carries fibre coordinates `w_j = (w_j^1, ..., w_j^r)` glued by
//! `t_jk^λ w_k^λ = g_kj^λ(w_j)` on the edge `(j, k)`, where `g_kj^λ = w^λ + N_kj^λ`
//! with `N` of order at least two. We look for `w_j = φ_j(ŵ_j)` with
//! `φ_j = ŵ + Σ_{|a|≥2} F_{j,a} ŵ^a` such that `ŵ_k = t_kj ŵ_j` exactly.
//!
//! Comparing degree-`a` coefficients gives, per edge and component,
//! `-F_{j,a} + ρ_λ^{-1} ρ^a F_{k,a} = h_{kj,a}`, with `ρ = t_kj` the cycle
//! weights of the cover and `h` the degree-`a` part of `N_kj(φ_j)` (which only
//! sees `F` of lower degree). Each order is a [`cech::solve`] problem.

use serde_json::{json, Value};
use thiserror::Error;

use crate::cech::{self, CechError, Cochain1, CycleCover};
use crate::scalar::Scalar;
use crate::series::{index, MultiSeries, SeriesError};

pub const DEFAULT_ORDER_UNIVARIATE: usize = 20;
pub const DEFAULT_ORDER_MULTIVARIATE: usize = 10;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum LinearizeError {
    #[error(transparent)]
    Cech(#[from] CechError),
    #[error(transparent)]
    Series(#[from] SeriesError),
    #[error("invalid transition system: {0}")]
    Invalid(String),
    #[error("system is of finite type at order {order}")]
    NotSolvable { order: usize },
}

pub type Result<T> = std::result::Result<T, LinearizeError>;

fn invalid<T>(msg: impl Into<String>) -> Result<T> {
    Err(LinearizeError::Invalid(msg.into()))
}

#[derive(Clone, Debug, PartialEq)]
pub struct TransitionSystem<S> {
    cover: CycleCover<S>,
    /// `weights[λ][e]`: cycle weight of component `λ` on edge `e`.
    weights: Vec<Vec<S>>,
    /// `edges[e][λ]`: the nonlinear part `N_kj^λ` on edge `e = (j, j+1)`.
    nonlinear: Vec<Vec<MultiSeries<S>>>,
    order: usize,
}

impl<S: Scalar> TransitionSystem<S> {
    /// `sigmas[λ]` replaces the twist weight of `cover` for component `λ`;
    /// `edges[e][λ]` is the full map `g_kj^λ` (its linear part must be `w^λ`,
    /// and may be omitted).
    pub fn new(cover: CycleCover<S>, sigmas: Vec<S>, edges: Vec<Vec<MultiSeries<S>>>, order: usize) -> Result<Self> {
        let r = sigmas.len();
        let n = cover.n();
        if r == 0 {
            return invalid("codimension must be at least 1");
        }
        if order < 1 {
            return invalid("order must be at least 1");
        }
        if edges.len() != n {
            return invalid(format!("expected {n} edges, got {}", edges.len()));
        }
        let weights: Vec<Vec<S>> = sigmas
            .iter()
            .map(|s| {
                if s.is_zero() {
                    return invalid("zero multiplier");
                }
                Ok(cover.with_twist_weight(s.clone()).weights().to_vec())
            })
            .collect::<Result<_>>()?;

        let mut nonlinear = Vec::with_capacity(n);
        for (e, comps) in edges.into_iter().enumerate() {
            if comps.len() != r {
                return invalid(format!("edge {} has {} components, expected {r}", e + 1, comps.len()));
            }
            let mut row = Vec::with_capacity(r);
            for (lambda, g) in comps.into_iter().enumerate() {
                if g.vars() != r {
                    return invalid(format!("edge {} component {} is in {} variables", e + 1, lambda + 1, g.vars()));
                }
                if g.clone().check_finite().is_err() {
                    return invalid(format!("edge {} component {} has non-finite coefficients", e + 1, lambda + 1));
                }
                row.push(
                    nonlinear_part(&g, lambda, order).map_err(|m| {
                        LinearizeError::Invalid(format!("edge {} component {}: {m}", e + 1, lambda + 1))
                    })?,
                );
            }
            nonlinear.push(row);
        }
        Ok(TransitionSystem { cover, weights, nonlinear, order })
    }

    /// `r = 1`: `t_jk w_k = w_j + Σ_m f[e][m-2] w_j^m` on edge `e`.
    pub fn univariate(cover: CycleCover<S>, f: Vec<Vec<S>>, order: usize) -> Result<Self> {
        let sigma = cover.twist().clone();
        let edges = f
            .into_iter()
            .map(|coeffs| {
                let terms = coeffs
                    .into_iter()
                    .enumerate()
                    .filter(|(i, _)| i + 2 <= order)
                    .map(|(i, c)| (vec![i as u32 + 2], c));
                MultiSeries::from_terms(1, order, terms).map(|g| vec![g])
            })
            .collect::<std::result::Result<Vec<_>, _>>()?;
        Self::new(cover, vec![sigma], edges, order)
    }

    pub fn cover(&self) -> &CycleCover<S> {
        &self.cover
    }

    pub fn r(&self) -> usize {
        self.weights.len()
    }

    pub fn n(&self) -> usize {
        self.cover.n()
    }

    pub fn order(&self) -> usize {
        self.order
    }

    /// The same system truncated (or zero-extended) to `order`.
    pub fn with_order(&self, order: usize) -> Self {
        let nonlinear = self.nonlinear.iter().map(|row| row.iter().map(|g| resize(g, order)).collect()).collect();
        TransitionSystem { cover: self.cover.clone(), weights: self.weights.clone(), nonlinear, order }
    }

    /// Nonlinear part `N_kj^λ` on edge `e`.
    pub fn nonlinear(&self, e: usize, lambda: usize) -> &MultiSeries<S> {
        &self.nonlinear[e][lambda]
    }

    pub fn sigma(&self, lambda: usize) -> &S {
        &self.weights[lambda][self.cover.twist_edge()]
    }

    /// Full gluing map `g_kj^λ = w^λ + N_kj^λ` on edge `e`.
    pub fn transition(&self, e: usize, lambda: usize) -> MultiSeries<S> {
        let id = MultiSeries::var(self.r(), self.order, lambda);
        id.add(&self.nonlinear[e][lambda]).expect("same shape")
    }

    /// Largest `|f_a| / R^{|a|}` over all transition coefficients.
    pub fn envelope_constant(&self, radius: f64) -> f64 {
        self.nonlinear
            .iter()
            .flatten()
            .flat_map(|g| g.terms().map(|(a, c)| c.norm() / radius.powi(index::degree(&a) as i32)))
            .fold(0.0, f64::max)
    }

    /// First coefficient with `|f_a| > M R^{|a|}` (relative slack `1e-12`).
    pub fn envelope_violation(&self, m: f64, radius: f64) -> Option<(usize, usize, Vec<u32>, f64)> {
        for (e, row) in self.nonlinear.iter().enumerate() {
            for (lambda, g) in row.iter().enumerate() {
                for (a, c) in g.terms() {
                    let bound = m * radius.powi(index::degree(&a) as i32);
                    if c.norm() > bound * (1.0 + 1e-12) {
                        return Some((e, lambda, a, c.norm()));
                    }
                }
            }
        }
        None
    }

    /// Cover block plus `{"r", "sigmas", "order", "edges": [{"from", "to", "components"}]}`.
    /// Edges run from `k = j + 1` to `j`; edges not listed are the identity.
    pub fn from_json(v: &Value, order_override: Option<usize>) -> Result<Self> {
        let cover = CycleCover::<S>::from_json(v)?;
        let n = cover.n();
        let r = v.get("r").and_then(Value::as_u64).unwrap_or(1) as usize;
        if r == 0 {
            return invalid("\"r\" must be at least 1");
        }
        let default_order = if r == 1 { DEFAULT_ORDER_UNIVARIATE } else { DEFAULT_ORDER_MULTIVARIATE };
        let order = order_override
            .or_else(|| v.get("order").and_then(Value::as_u64).map(|o| o as usize))
            .unwrap_or(default_order);
        let sigmas = match v.get("sigmas") {
            None => vec![cover.twist().clone(); r],
            Some(list) => {
                let list = list.as_array().ok_or(LinearizeError::Invalid("\"sigmas\" must be an array".into()))?;
                if list.len() != r {
                    return invalid(format!("\"sigmas\" has {} entries, expected {r}", list.len()));
                }
                list.iter()
                    .map(|s| cech::parse_scalar(s).ok_or(LinearizeError::Invalid("unparseable sigma".into())))
                    .collect::<Result<_>>()?
            }
        };
        let mut edges: Vec<Option<Vec<MultiSeries<S>>>> = vec![None; n];
        for item in v.get("edges").and_then(Value::as_array).map(Vec::as_slice).unwrap_or(&[]) {
            let from = item.get("from").and_then(Value::as_u64);
            let to = item.get("to").and_then(Value::as_u64);
            let (Some(from), Some(to)) = (from, to) else {
                return invalid("edge needs integer \"from\" and \"to\"");
            };
            let e = match cover.edge_index(to as usize, from as usize)? {
                (e, false) => e,
                (_, true) => {
                    return invalid(format!(
                        "edge from {from} to {to} runs against the cycle; give it from {to} to {from}"
                    ))
                }
            };
            if edges[e].is_some() {
                return invalid(format!("edge from {from} to {to} listed twice"));
            }
            let comps = item
                .get("components")
                .and_then(Value::as_array)
                .ok_or(LinearizeError::Invalid("edge needs a \"components\" array".into()))?;
            edges[e] = Some(comps.iter().map(MultiSeries::from_json).collect::<std::result::Result<_, _>>()?);
        }
        let edges = edges
            .into_iter()
            .map(|g| g.unwrap_or_else(|| (0..r).map(|l| MultiSeries::var(r, order, l)).collect()))
            .collect();
        Self::new(cover, sigmas, edges, order)
    }

    pub fn to_json(&self) -> Value {
        let mut out = self.cover.to_json();
        out["r"] = json!(self.r());
        out["order"] = json!(self.order);
        out["sigmas"] = Value::Array((0..self.r()).map(|l| cech::scalar_json(self.sigma(l))).collect());
        let edges: Vec<Value> = self
            .cover
            .edges()
            .iter()
            .enumerate()
            .map(|(e, &(j, k))| {
                let comps: Vec<Value> = (0..self.r()).map(|l| self.transition(e, l).to_json()).collect();
                json!({ "from": k, "to": j, "components": comps })
            })
            .collect();
        out["edges"] = Value::Array(edges);
        out
    }
}

fn resize<S: Scalar>(g: &MultiSeries<S>, order: usize) -> MultiSeries<S> {
    if order <= g.order() {
        g.truncate(order)
    } else {
        g.pad_to(order)
    }
}

fn nonlinear_part<S: Scalar>(
    g: &MultiSeries<S>,
    lambda: usize,
    order: usize,
) -> std::result::Result<MultiSeries<S>, String> {
    let r = g.vars();
    if !g.constant_term().is_zero() {
        return Err("nonzero constant term".into());
    }
    let linear = g.degree_part(1);
    let all_zero = linear.iter().all(|(_, c)| c.is_zero());
    let identity = linear.iter().enumerate().all(|(mu, (_, c))| if mu == lambda { c.is_one() } else { c.is_zero() });
    if !all_zero && !identity {
        return Err("linear part must be the identity".into());
    }
    let mut out = resize(g, order);
    for mu in 0..r {
        let mut idx = vec![0u32; r];
        idx[mu] = 1;
        if out.order() >= 1 {
            out.set(&idx, S::zero()).expect("degree 1 fits");
        }
    }
    Ok(out)
}

/// `h` cochain for one component and multi-index.
#[derive(Clone, Debug, PartialEq)]
pub struct OrderCochain<S> {
    pub component: usize,
    pub index: Vec<u32>,
    pub cochain: Cochain1<S>,
}

/// `φ_j - id`, one series per component, for each chart.
pub type Corrections<S> = Vec<Vec<MultiSeries<S>>>;

/// The degree-`m` coefficients of `N_kj(φ_j)` on every edge, where `φ_j` uses the
/// corrections of degree `< m` in `f_partial`.
pub fn compute_h<S: Scalar>(
    system: &TransitionSystem<S>,
    f_partial: &Corrections<S>,
    m: usize,
) -> Result<Vec<OrderCochain<S>>> {
    let r = system.r();
    let n = system.n();
    let indices = index::of_degree(r, m);
    let mut out: Vec<OrderCochain<S>> = (0..r)
        .flat_map(|lambda| {
            indices.iter().map(move |a| OrderCochain {
                component: lambda,
                index: a.clone(),
                cochain: Vec::with_capacity(n),
            })
        })
        .collect();
    for e in 0..n {
        let phi: Vec<MultiSeries<S>> = (0..r)
            .map(|mu| {
                let corr = resize(&f_partial[e][mu], m.saturating_sub(1)).pad_to(m);
                MultiSeries::var(r, m, mu).add(&corr)
            })
            .collect::<std::result::Result<_, _>>()?;
        for lambda in 0..r {
            let nl = resize(system.nonlinear(e, lambda), m);
            let composed = nl.substitute(&phi)?;
            for (slot, a) in indices.iter().enumerate() {
                out[lambda * indices.len() + slot].cochain.push(composed.coeff(a));
            }
        }
    }
    Ok(out)
}

/// Per-edge weights `ρ_λ^{-1} Π_μ ρ_μ^{a_μ}` of the degree-`a` equation for component `λ`.
pub fn order_weights<S: Scalar>(system: &TransitionSystem<S>, lambda: usize, a: &[u32]) -> Vec<S> {
    (0..system.n())
        .map(|e| {
            let base = system.weights[lambda][e].try_inv().expect("weights are nonzero");
            a.iter().enumerate().fold(base, |acc, (mu, &p)| acc * system.weights[mu][e].powi(p))
        })
        .collect()
}

fn order_cover<S: Scalar>(system: &TransitionSystem<S>, lambda: usize, a: &[u32]) -> CycleCover<S> {
    CycleCover::from_weights(order_weights(system, lambda, a), system.cover.twist_edge())
        .expect("products of nonzero weights")
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    /// All corrections through the given order were solved.
    Linearized { order: usize },
    /// The class at this order is nonzero.
    FiniteType { order: usize },
}

#[derive(Clone, Debug, PartialEq)]
pub struct ObstructionEntry<S> {
    pub order: usize,
    pub component: usize,
    pub index: Vec<u32>,
    pub value: S,
    pub resonant: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct LinearizationResult<S> {
    pub r: usize,
    pub n: usize,
    pub max_order: usize,
    /// `corrections[j][λ] = Σ F_{j,a}^λ ŵ^a`.
    pub corrections: Corrections<S>,
    pub obstructions: Vec<ObstructionEntry<S>>,
    /// `residuals[d]`: largest gluing residual coefficient of total degree `d`.
    pub residuals: Vec<f64>,
    pub near_resonant: Vec<(usize, usize, Vec<u32>)>,
    pub status: Status,
}

impl<S: Scalar> LinearizationResult<S> {
    /// Highest order with all corrections solved.
    pub fn solved_order(&self) -> usize {
        match self.status {
            Status::Linearized { order } => order,
            Status::FiniteType { order } => order - 1,
        }
    }

    pub fn coefficient(&self, chart: usize, lambda: usize, a: &[u32]) -> S {
        self.corrections[chart][lambda].coeff(a)
    }

    /// `max_{j, λ, |a| = m} |F_{j,a}^λ|`.
    pub fn max_coefficient(&self, m: usize) -> f64 {
        self.corrections.iter().flatten().map(|s| s.max_norm_of_degree(m)).fold(0.0, f64::max)
    }

    /// Largest `|value|` among the obstructions recorded at order `m`.
    pub fn obstruction_at(&self, m: usize) -> f64 {
        self.obstructions.iter().filter(|o| o.order == m).map(|o| o.value.norm()).fold(0.0, f64::max)
    }

    pub fn max_residual(&self) -> f64 {
        self.residuals.iter().copied().fold(0.0, f64::max)
    }

    pub fn to_json(&self) -> Value {
        let (status, order) = match self.status {
            Status::Linearized { order } => ("linearized", order),
            Status::FiniteType { order } => ("finite_type", order),
        };
        let charts: Vec<Value> =
            self.corrections.iter().map(|row| Value::Array(row.iter().map(MultiSeries::to_json).collect())).collect();
        let obstructions: Vec<Value> = self
            .obstructions
            .iter()
            .map(|o| {
                json!({
                    "order": o.order,
                    "component": o.component + 1,
                    "index": o.index,
                    "value": cech::scalar_json(&o.value),
                    "resonant": o.resonant,
                })
            })
            .collect();
        let near: Vec<Value> =
            self.near_resonant.iter().map(|(m, l, a)| json!({ "order": m, "component": l + 1, "index": a })).collect();
        json!({
            "status": status,
            "order": order,
            "r": self.r,
            "N": self.n,
            "F": charts,
            "obstructions": obstructions,
            "residuals": self.residuals,
            "near_resonant": near,
        })
    }

    /// Rows `(m, max_j |F_{j,m}|, obstruction, residual)` for `m = 2..`.
    pub fn csv_rows(&self) -> Vec<(usize, f64, f64, f64)> {
        let last = match self.status {
            Status::Linearized { order } => order,
            Status::FiniteType { order } => order,
        };
        (2..=last)
            .map(|m| {
                let res = self.residuals.get(m).copied().unwrap_or(f64::NAN);
                (m, self.max_coefficient(m), self.obstruction_at(m), res)
            })
            .collect()
    }
}

pub fn linearize<S: Scalar>(system: &TransitionSystem<S>) -> Result<LinearizationResult<S>> {
    linearize_with(system, S::zero())
}

/// As [`linearize`], fixing the free chart-1 value of resonant solvable orders to `gauge`.
pub fn linearize_with<S: Scalar>(system: &TransitionSystem<S>, gauge: S) -> Result<LinearizationResult<S>> {
    let r = system.r();
    let n = system.n();
    let max_order = system.order;
    let mut corrections: Corrections<S> = vec![vec![MultiSeries::zero(r, max_order); r]; n];
    let mut obstructions = Vec::new();
    let mut near_resonant = Vec::new();
    let mut status = Status::Linearized { order: max_order };

    'orders: for m in 2..=max_order {
        let hs = compute_h(system, &corrections, m)?;
        for h in hs {
            let cover = order_cover(system, h.component, &h.index);
            let value = cech::obstruction(&cover, &h.cochain)?;
            let resonant = cover.is_resonant();
            if resonant {
                obstructions.push(ObstructionEntry {
                    order: m,
                    component: h.component,
                    index: h.index.clone(),
                    value: value.clone(),
                    resonant,
                });
            }
            match cech::solve_with(&cover, &h.cochain, gauge.clone()) {
                Ok(rep) => {
                    if rep.near_resonant {
                        near_resonant.push((m, h.component, h.index.clone()));
                    }
                    for (j, b) in rep.beta.into_iter().enumerate() {
                        corrections[j][h.component].set(&h.index, b)?;
                    }
                }
                Err(CechError::Obstructed { .. }) => {
                    status = Status::FiniteType { order: m };
                    break 'orders;
                }
                Err(e) => return Err(e.into()),
            }
        }
    }

    let mut result = LinearizationResult {
        r,
        n,
        max_order,
        corrections,
        obstructions,
        residuals: Vec::new(),
        near_resonant,
        status,
    };
    result.residuals = verify_residual(system, &result)?;
    Ok(result)
}

/// Largest coefficient, per total degree through the solved order, of
/// `t_jk φ_k(t_kj ŵ) - g_kj(φ_j(ŵ))` over all edges and components.
pub fn verify_residual<S: Scalar>(system: &TransitionSystem<S>, result: &LinearizationResult<S>) -> Result<Vec<f64>> {
    let r = system.r();
    let n = system.n();
    let order = result.solved_order();
    let mut worst = vec![0.0f64; order + 1];
    let phi = |j: usize| -> Result<Vec<MultiSeries<S>>> {
        (0..r).map(|mu| Ok(MultiSeries::var(r, order, mu).add(&resize(&result.corrections[j][mu], order))?)).collect()
    };
    for e in 0..n {
        let k = (e + 1) % n;
        let phi_j = phi(e)?;
        let phi_k = phi(k)?;
        // ŵ_k = ρ ŵ_j componentwise
        let linear: Vec<MultiSeries<S>> = (0..r)
            .map(|mu| MultiSeries::var(r, order, mu).scale(&system.weights[mu][e]))
            .collect::<std::result::Result<_, _>>()?;
        for lambda in 0..r {
            let t_jk = system.weights[lambda][e].try_inv().expect("weights are nonzero");
            let lhs = phi_k[lambda].substitute(&linear)?.scale(&t_jk)?;
            let g = resize(&system.transition(e, lambda), order);
            let rhs = g.substitute(&phi_j)?;
            let diff = lhs.sub(&rhs)?;
            for (d, w) in worst.iter_mut().enumerate() {
                *w = w.max(diff.max_norm_of_degree(d));
            }
        }
    }
    Ok(worst)
}

/// Obstructions of the order-`m` problem: the cycle sum at resonant
/// `(λ, a)`, zero elsewhere. Requires the system to be solvable below `m`.
pub fn ueda_class<S: Scalar>(system: &TransitionSystem<S>, m: usize) -> Result<Vec<ObstructionEntry<S>>> {
    if m < 2 {
        return invalid("Ueda classes start at order 2");
    }
    let below = linearize(&system.with_order(m - 1))?;
    if let Status::FiniteType { order } = below.status {
        return Err(LinearizeError::NotSolvable { order });
    }
    let corrections: Corrections<S> =
        below.corrections.iter().map(|row| row.iter().map(|s| s.pad_to(m)).collect()).collect();
    let sys = system.with_order(m);
    compute_h(&sys, &corrections, m)?
        .into_iter()
        .map(|h| {
            let cover = order_cover(&sys, h.component, &h.index);
            let resonant = cover.is_resonant();
            let value = if resonant { cech::obstruction(&cover, &h.cochain)? } else { S::zero() };
            Ok(ObstructionEntry { order: m, component: h.component, index: h.index, value, resonant })
        })
        .collect()
}

/// Largest `|F_{j,m}|^{1/m}` over `2 <= m <= solved order`.
pub fn growth_rate<S: Scalar>(result: &LinearizationResult<S>) -> f64 {
    (2..=result.solved_order()).map(|m| result.max_coefficient(m).powf(1.0 / m as f64)).fold(0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::GaussRational;
    use num_complex::Complex64;
    use num_rational::BigRational;
    use num_traits::{One, Zero};

    type Q = GaussRational;

    fn q(re: i64, im: i64) -> Q {
        Q::new(BigRational::from_integer(re.into()), BigRational::from_integer(im.into()))
    }

    fn toy(sigma: Q, f: Vec<Vec<Q>>, order: usize) -> TransitionSystem<Q> {
        TransitionSystem::univariate(CycleCover::twisted(3, sigma).unwrap(), f, order).unwrap()
    }

    #[test]
    fn h2_is_f2_and_h3_formula() {
        let c2 = q(2, 1);
        let c3 = q(-1, 3);
        let phi = q(5, -2);
        let sys = toy(q(0, 1), vec![vec![c2.clone(), c3.clone()]; 3], 3);
        let zero = vec![vec![MultiSeries::zero(1, 3)]; 3];
        let h2 = compute_h(&sys, &zero, 2).unwrap();
        assert_eq!(h2[0].cochain, vec![c2.clone(); 3]);

        let mut f = MultiSeries::zero(1, 3);
        f.set(&[2], phi.clone()).unwrap();
        let partial = vec![vec![f]; 3];
        let h3 = compute_h(&sys, &partial, 3).unwrap();
        let expect = c3 + q(2, 0) * c2 * phi;
        assert_eq!(h3[0].cochain, vec![expect; 3]);
    }

    #[test]
    fn zero_system_is_trivially_linear() {
        let sys = toy(q(0, 1), vec![vec![]; 3], 6);
        let zero = vec![vec![MultiSeries::zero(1, 6)]; 3];
        for m in 2..=6 {
            assert!(compute_h(&sys, &zero, m).unwrap()[0].cochain.iter().all(|h| h.is_zero()));
        }
        let res = linearize(&sys).unwrap();
        assert_eq!(res.status, Status::Linearized { order: 6 });
        assert!(res.corrections.iter().flatten().all(MultiSeries::is_zero));
        assert!(res.residuals.iter().all(|&x| x == 0.0));
    }

    #[test]
    fn order_weight_examples() {
        let sys = toy(q(0, 1), vec![vec![]; 3], 5);
        assert_eq!(order_weights(&sys, 0, &[2]), vec![q(1, 0), q(1, 0), q(0, 1)]);
        assert_eq!(order_weights(&sys, 0, &[5])[2], q(1, 0));
        let triv = toy(q(1, 0), vec![vec![]; 3], 5);
        for m in 2..=5 {
            assert!(order_weights(&triv, 0, &[m]).iter().all(|w| w.is_one()));
        }
    }

    #[test]
    fn order_two_matches_cech_example() {
        // f only on edge (1,2)
        let sys = toy(q(0, 1), vec![vec![q(1, 0)], vec![], vec![]], 2);
        let res = linearize(&sys).unwrap();
        let cover = CycleCover::twisted(3, q(0, 1)).unwrap();
        let beta = cech::solve(&cover, &[q(1, 0), q(0, 0), q(0, 0)]).unwrap().beta;
        for j in 0..3 {
            assert_eq!(res.coefficient(j, 0, &[2]), beta[j]);
        }
        assert_eq!(res.residuals, vec![0.0, 0.0, 0.0]);
    }

    #[test]
    fn finite_type_at_order_two() {
        let sys = toy(q(1, 0), vec![vec![q(1, 0)], vec![], vec![]], 5);
        let res = linearize(&sys).unwrap();
        assert_eq!(res.status, Status::FiniteType { order: 2 });
        assert_eq!(res.obstructions.last().unwrap().value, q(1, 0));
        assert_eq!(res.solved_order(), 1);

        let class = ueda_class(&sys, 2).unwrap();
        assert_eq!(class[0].value, q(1, 0));
    }

    #[test]
    fn cancelling_cycle_sum_has_zero_class() {
        let sys = toy(q(1, 0), vec![vec![q(1, 0)], vec![q(-1, 0)], vec![]], 2);
        assert_eq!(ueda_class(&sys, 2).unwrap()[0].value, q(0, 0));
        let zero = toy(q(1, 0), vec![vec![]; 3], 4);
        for m in 2..=4 {
            assert!(ueda_class(&zero, m).unwrap().iter().all(|o| o.value.is_zero()));
        }
    }

    #[test]
    fn exact_residual_vanishes() {
        let sigma = Q::new(BigRational::new(3.into(), 5.into()), BigRational::new(4.into(), 5.into()));
        let f = vec![
            vec![q(1, 0), q(0, 1), q(-1, 1), q(2, 0), q(0, 0), q(1, -1)],
            vec![q(0, 2), q(1, 0)],
            vec![q(-1, 0), q(0, 0), q(3, 0)],
        ];
        let sys = toy(sigma, f, 8);
        let res = linearize(&sys).unwrap();
        assert_eq!(res.status, Status::Linearized { order: 8 });
        assert!(res.residuals.iter().all(|&x| x == 0.0), "{:?}", res.residuals);
    }

    #[test]
    fn float_residual_small() {
        let sigma = Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * 0.6180339887498949);
        let cover = CycleCover::twisted(3, sigma).unwrap();
        let f = vec![vec![Complex64::new(0.5, 0.1); 11], vec![Complex64::new(-0.2, 0.3); 11], vec![]];
        let sys = TransitionSystem::univariate(cover, f, 12).unwrap();
        let res = linearize(&sys).unwrap();
        let scale = res.corrections.iter().flatten().map(MultiSeries::max_norm).fold(1.0, f64::max);
        assert!(res.max_residual() <= 1e-9 * scale);
    }

    #[test]
    fn resonant_gauge_keeps_residual_zero() {
        // sigma = -1: order 3 is resonant with cycle sum f3 - f2^2 = 0
        let sys = toy(q(-1, 0), vec![vec![q(1, 0), q(1, 0)], vec![], vec![]], 4);
        let a = linearize_with(&sys, Q::zero()).unwrap();
        let b = linearize_with(&sys, Q::one()).unwrap();
        assert_eq!(a.status, Status::Linearized { order: 4 });
        assert_eq!(b.status, Status::Linearized { order: 4 });
        assert_ne!(a.corrections, b.corrections);
        assert!(a.residuals.iter().chain(&b.residuals).all(|&x| x == 0.0));
    }

    #[test]
    fn two_component_system() {
        let r = 2;
        let sig = [q(0, 1), Q::new(BigRational::new(3.into(), 5.into()), BigRational::new((-4).into(), 5.into()))];
        let cover = CycleCover::twisted(3, q(1, 0)).unwrap();
        let mk = |c: &[(Vec<u32>, Q)], l: usize| {
            let mut g = MultiSeries::var(r, 4, l);
            for (a, v) in c {
                g.set(a, v.clone()).unwrap();
            }
            g
        };
        let edges = vec![
            vec![mk(&[(vec![1, 1], q(1, 0))], 0), mk(&[(vec![2, 0], q(0, 1))], 1)],
            vec![mk(&[(vec![0, 2], q(2, 0))], 0), mk(&[], 1)],
            vec![mk(&[], 0), mk(&[(vec![1, 2], q(1, 1))], 1)],
        ];
        let sys = TransitionSystem::new(cover, sig.to_vec(), edges, 4).unwrap();
        let res = linearize(&sys).unwrap();
        assert_eq!(res.status, Status::Linearized { order: 4 });
        assert!(res.residuals.iter().all(|&x| x == 0.0));
    }

    #[test]
    fn non_identity_linear_part_rejected() {
        let cover = CycleCover::twisted(3, q(0, 1)).unwrap();
        let mut g = MultiSeries::var(1, 3, 0);
        g.set(&[1], q(2, 0)).unwrap();
        let id = MultiSeries::var(1, 3, 0);
        let err = TransitionSystem::new(cover, vec![q(0, 1)], vec![vec![g], vec![id.clone()], vec![id]], 3);
        assert!(matches!(err, Err(LinearizeError::Invalid(_))));
    }

    #[test]
    fn system_json_round_trip() {
        let v = json!({
            "N": 3, "sigma": {"re": 0, "im": 1}, "r": 1, "order": 4,
            "edges": [{"from": 2, "to": 1, "components": [
                {"vars": 1, "order": 4, "coeffs": [{"index": [2], "re": 1, "im": 0}]}
            ]}]
        });
        let sys = TransitionSystem::<Q>::from_json(&v, None).unwrap();
        assert_eq!(sys.nonlinear(0, 0).coeff(&[2]), q(1, 0));
        assert!(sys.nonlinear(1, 0).is_zero());
        let back = TransitionSystem::<Q>::from_json(&sys.to_json(), None).unwrap();
        assert_eq!(back, sys);

        let reversed = json!({"N": 3, "edges": [{"from": 1, "to": 2, "components": []}]});
        assert!(TransitionSystem::<Q>::from_json(&reversed, None).is_err());
    }
}
