use std::f64::consts::PI;
use std::path::PathBuf;

use anyhow::{anyhow, bail, Context, Result};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde_json::{json, Value};

use uedalab::cech::{self, CechError, CycleCover};
use uedalab::family::{family_solve, improved_vs_naive, max_principle_bound, FamilyError, ParamCochain1, SweepConfig};
use uedalab::linearize::{linearize, Status, TransitionSystem};
use uedalab::majorant::{
    b_bounds, domination_check, general_majorant, radius_estimate, single_fibre_stages, toy_majorant, toy_radius,
    Domination, GeneralMajorantSpec, MajorantSeries, MajorantSpec, ToyK,
};
use uedalab::multiplier::{
    arc_partition, diophantine_check, divisor_profile, ArcBox, DiophantineVerdict, Multiplier, MultiplierKind,
};
use uedalab::scalar::{GaussRational, Scalar};

use crate::output::{read_json, Sink, Table};

pub const EXIT_OK: u8 = 0;
pub const EXIT_FINITE_TYPE: u8 = 2;
pub const EXIT_VIOLATION: u8 = 3;

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Precision {
    Float,
    Exact,
}

#[derive(Clone, Debug)]
pub struct RunConfig {
    pub input: Option<PathBuf>,
    pub out: Option<PathBuf>,
    pub order: Option<usize>,
    pub seed: u64,
    pub samples: Option<usize>,
    pub precision: Precision,
    pub m0: u32,
    pub quiet: bool,
}

impl RunConfig {
    fn input(&self) -> Result<Value> {
        let path = self.input.as_ref().ok_or_else(|| anyhow!("--input is required"))?;
        read_json(path)
    }

    fn sink(&self) -> Result<Sink> {
        Sink::new(self.out.as_deref(), self.quiet)
    }

    fn float_only(&self, cmd: &str) -> Result<()> {
        if self.precision == Precision::Exact {
            bail!("{cmd} works in float precision only");
        }
        Ok(())
    }
}

fn precision_label(p: Precision) -> &'static str {
    match p {
        Precision::Float => "float",
        Precision::Exact => "exact",
    }
}

pub fn cmd_linearize(cfg: &RunConfig) -> Result<u8> {
    let v = cfg.input()?;
    match cfg.precision {
        Precision::Float => run_linearize::<Complex64>(cfg, &v),
        Precision::Exact => run_linearize::<GaussRational>(cfg, &v),
    }
}

fn run_linearize<S: Scalar>(cfg: &RunConfig, v: &Value) -> Result<u8> {
    let system = TransitionSystem::<S>::from_json(v, cfg.order).context("reading transition system")?;
    let result = linearize(&system)?;
    let sink = cfg.sink()?;
    let mut table = Table::new(&["m", "max_abs_F", "obstruction", "residual"]);
    for (m, f, obs, res) in result.csv_rows() {
        table.row(vec![m.into(), f.into(), obs.into(), res.into()]);
    }
    sink.csv("linearize", &table)?;
    let mut summary = result.to_json();
    summary["precision"] = json!(precision_label(cfg.precision));
    summary["max_residual"] = json!(result.max_residual());
    sink.json("linearize", &summary)?;
    match result.status {
        Status::Linearized { order } => {
            sink.note(format!("linearized to order {order}, max residual {:e}", result.max_residual()));
            Ok(EXIT_OK)
        }
        Status::FiniteType { order } => {
            sink.note(format!("finite type at order {order}: nonzero obstruction {:e}", result.obstruction_at(order)));
            Ok(EXIT_FINITE_TYPE)
        }
    }
}

fn multiplier_list(v: &Value) -> Result<Vec<Multiplier>> {
    let list = match v {
        Value::Array(a) => a,
        _ => v
            .get("multipliers")
            .and_then(Value::as_array)
            .ok_or_else(|| anyhow!("expected an array of multipliers or {{\"multipliers\": [...]}}"))?,
    };
    if list.is_empty() {
        bail!("empty multiplier list");
    }
    list.iter().map(|m| Multiplier::from_json(m).map_err(Into::into)).collect()
}

fn param(v: &Value, key: &str, default: f64) -> f64 {
    v.get(key).and_then(Value::as_f64).unwrap_or(default)
}

fn classify(mult: &Multiplier, a: f64, alpha: f64, max_order: u64) -> String {
    match mult.kind() {
        MultiplierKind::Rational { q, .. } => format!("torsion(q={q})"),
        MultiplierKind::IrrationalSampled => match diophantine_check(mult, a, alpha, max_order) {
            DiophantineVerdict::Pass => "diophantine".into(),
            DiophantineVerdict::Violation { m, .. } => format!("violation(m={m})"),
        },
    }
}

fn random_toy(n: usize, order: usize, m: f64, r: f64, seed: u64) -> Vec<Vec<Complex64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n)
        .map(|_| {
            (2..=order)
                .map(|k| {
                    let z = Complex64::from_polar(rng.gen::<f64>().sqrt(), 2.0 * PI * rng.gen::<f64>());
                    z * m * r.powi(k as i32)
                })
                .collect()
        })
        .collect()
}

struct SweepLine {
    m: usize,
    divisor: f64,
    max_f: f64,
    residual: f64,
}

pub fn cmd_sweep(cfg: &RunConfig) -> Result<u8> {
    cfg.float_only("sweep")?;
    let v = cfg.input()?;
    let mults = multiplier_list(&v)?;
    let n = v.get("N").and_then(Value::as_u64).unwrap_or(3) as usize;
    let order = cfg.order.unwrap_or(20);
    let (a, alpha) = (param(&v, "A", 0.25), param(&v, "alpha", 1.0));
    let max_order = v.get("max_order").and_then(Value::as_u64).unwrap_or(10_000);
    let f = random_toy(n, order, param(&v, "M", 1.0), param(&v, "R", 1.0), cfg.seed);

    let per_theta: Vec<(String, Vec<SweepLine>)> = mults
        .par_iter()
        .map(|mult| -> Result<(String, Vec<SweepLine>)> {
            let class = classify(mult, a, alpha, max_order);
            let cover = CycleCover::twisted(n, mult.sigma())?;
            let system = TransitionSystem::univariate(cover, f.clone(), order)?;
            let result = linearize(&system)?;
            let lines = (2..=result.solved_order())
                .map(|m| SweepLine {
                    m,
                    divisor: mult.divisor(m as u64 - 1),
                    max_f: result.max_coefficient(m),
                    residual: result.residuals[m],
                })
                .collect();
            Ok((class, lines))
        })
        .collect::<Result<_>>()?;

    let mut table = Table::new(&[
        "label",
        "theta",
        "classification",
        "min_m_d",
        "max_growth",
        "m",
        "divisor",
        "max_abs_F",
        "growth",
        "residual",
    ]);
    for (mult, (class, lines)) in mults.iter().zip(&per_theta) {
        let min_scaled = divisor_profile(mult, max_order as usize).min_scaled();
        let growth = |l: &SweepLine| l.max_f.powf(1.0 / l.m as f64);
        let max_growth = lines.iter().map(growth).fold(0.0, f64::max);
        for l in lines {
            table.row(vec![
                mult.label().into(),
                mult.theta().into(),
                class.clone().into(),
                min_scaled.into(),
                max_growth.into(),
                l.m.into(),
                l.divisor.into(),
                l.max_f.into(),
                growth(l).into(),
                l.residual.into(),
            ]);
        }
    }
    let sink = cfg.sink()?;
    sink.csv("sweep", &table)?;
    sink.json(
        "sweep",
        &json!({
            "multipliers": mults.iter().map(Multiplier::to_json).collect::<Vec<_>>(),
            "classification": per_theta.iter().map(|(c, _)| c.clone()).collect::<Vec<_>>(),
            "order": order,
            "seed": cfg.seed,
            "N": n,
        }),
    )?;
    Ok(EXIT_OK)
}

pub fn cmd_family(cfg: &RunConfig) -> Result<u8> {
    cfg.float_only("family")?;
    let v = cfg.input()?;
    if v.get("thetas").is_some() {
        family_sweep(cfg, &v)
    } else {
        family_fixture(cfg, &v)
    }
}

fn family_sweep(cfg: &RunConfig, v: &Value) -> Result<u8> {
    let thetas = multiplier_list(&json!({ "multipliers": v["thetas"] }))?;
    let defaults = SweepConfig::default();
    let sweep = SweepConfig {
        m0: cfg.m0,
        m_max: cfg.order.map(|o| o as u32).unwrap_or(defaults.m_max),
        seed: cfg.seed,
        samples: cfg.samples.unwrap_or(defaults.samples),
        degree: v.get("degree").and_then(Value::as_u64).map(|d| d as usize).unwrap_or(defaults.degree),
        k_naive: param(v, "K", defaults.k_naive),
    };
    let rows = improved_vs_naive(&thetas, &sweep)?;
    let mut table = Table::new(&[
        "label",
        "theta",
        "m",
        "naive_bound",
        "family_bound",
        "family_sup",
        "interior_max",
        "boundary_max",
        "max_principle_ok",
        "family_ok",
    ]);
    let mut ok = true;
    for r in &rows {
        ok &= r.family_ok() && r.max_principle_ok;
        table.row(vec![
            r.theta_label.clone().into(),
            r.theta.into(),
            r.m.into(),
            r.naive_bound.into(),
            r.family_bound.into(),
            r.family_sup.into(),
            r.interior_max.into(),
            r.boundary_max.into(),
            r.max_principle_ok.into(),
            r.family_ok().into(),
        ]);
    }
    let sink = cfg.sink()?;
    sink.csv("family", &table)?;
    sink.json(
        "family",
        &json!({ "m0": sweep.m0, "m_max": sweep.m_max, "seed": sweep.seed, "samples": sweep.samples, "uniform_bound_holds": ok }),
    )?;
    if ok {
        Ok(EXIT_OK)
    } else {
        sink.note("uniform bound violated");
        Ok(EXIT_VIOLATION)
    }
}

fn family_fixture(cfg: &RunConfig, v: &Value) -> Result<u8> {
    let alpha = ParamCochain1::<Complex64>::from_json(v.get("cochain").unwrap_or(v))?;
    let m0 = v.get("m0").and_then(Value::as_u64).map(|m| m as u32).unwrap_or(cfg.m0);
    if m0 == 0 || alpha.m_prime % m0 != 0 {
        bail!("m_prime = {} is not a multiple of m0 = {m0}", alpha.m_prime);
    }
    let m = alpha.m_prime / m0;
    let arcs: Vec<ArcBox> = match v.get("nu").and_then(Value::as_u64) {
        Some(nu) => vec![ArcBox::new(m, nu as u32, m0).ok_or_else(|| anyhow!("no arc with nu = {nu} at m = {m}"))?],
        None => arc_partition(m, m0),
    };
    let samples = cfg.samples.unwrap_or(129);
    let sink = cfg.sink()?;
    let mut table = Table::new(&[
        "m",
        "nu",
        "zeta_re",
        "zeta_im",
        "alpha_max",
        "uniform_bound",
        "resonant_sup",
        "interior_max",
        "boundary_max",
        "within_bound",
    ]);
    let mut ok = true;
    for arc in &arcs {
        let rep = match family_solve(&alpha, arc, samples) {
            Ok(rep) => rep,
            Err(FamilyError::NonzeroAtTorsion { zeta, value }) => {
                sink.csv("family", &table)?;
                eprintln!("cochain does not vanish at the torsion point {zeta} (nu = {}): obstruction {value}", arc.nu);
                return Ok(EXIT_VIOLATION);
            }
            Err(e) => return Err(e.into()),
        };
        let principle = max_principle_bound(&alpha, arc, 128);
        if let Err(e) = &principle {
            eprintln!("nu = {}: {e}", arc.nu);
        }
        let within = rep.within_uniform_bound();
        ok &= within && principle.is_ok();
        table.row(vec![
            m.into(),
            arc.nu.into(),
            rep.torsion_point.re.into(),
            rep.torsion_point.im.into(),
            rep.alpha_max.into(),
            rep.uniform_bound.into(),
            rep.resonant_sup.into(),
            rep.interior_max.into(),
            rep.boundary_max.into(),
            within.into(),
        ]);
    }
    sink.csv("family", &table)?;
    sink.json(
        "family",
        &json!({ "cochain": alpha.to_json(), "m0": m0, "arcs": arcs.len(), "uniform_bound_holds": ok }),
    )?;
    if ok {
        Ok(EXIT_OK)
    } else {
        sink.note("uniform bound violated");
        Ok(EXIT_VIOLATION)
    }
}

fn majorant_table<S: Scalar>(spec: &GeneralMajorantSpec, a: &MajorantSeries<S>) -> Result<Table> {
    let mut table = Table::new(&["m", "A_m", "B_m"]);
    for m in 1..=spec.order {
        table.row(vec![m.into(), a.max_of_degree(m).into(), b_bounds(spec, a, m)?.into()]);
    }
    Ok(table)
}

fn radius_json(coeffs: &[f64]) -> Value {
    match radius_estimate(coeffs) {
        Ok(r) => json!(r),
        Err(_) => Value::Null,
    }
}

pub fn cmd_majorant(cfg: &RunConfig) -> Result<u8> {
    let v = cfg.input()?;
    let spec_json = v.get("spec").unwrap_or(&v);
    let spec = MajorantSpec::from_json(spec_json, cfg.order)?;
    let sink = cfg.sink()?;
    let mut summary = json!({ "spec": spec.to_json(), "precision": precision_label(cfg.precision) });
    let (float_a, envelope_default) = match &spec {
        MajorantSpec::Toy(toy) => {
            let a = toy_majorant(toy)?;
            let diag = a.diagonal();
            let mut table = Table::new(&["m", "A_m", "B_m"]);
            for (m, am) in diag.iter().enumerate().skip(1) {
                let b = if m == 1 { 0.0 } else { am / toy.k.at(m) };
                table.row(vec![m.into(), (*am).into(), b.into()]);
            }
            sink.csv("majorant", &table)?;
            summary["radius_estimate"] = radius_json(&diag);
            if let ToyK::Uniform(k) = toy.k {
                summary["radius_closed_form"] = json!(toy_radius(toy.m, k));
            }
            (a, (toy.m, 1.0))
        }
        MajorantSpec::General(gen) => {
            let a = general_majorant::<Complex64>(gen)?;
            let table = match cfg.precision {
                Precision::Float => majorant_table(gen, &a)?,
                Precision::Exact => majorant_table(gen, &general_majorant::<GaussRational>(gen)?)?,
            };
            sink.csv("majorant", &table)?;
            summary["radius_estimate"] = radius_json(&a.diagonal());
            summary["A_2"] = json!(a.max_of_degree(2));
            (a, (gen.m, gen.r_const))
        }
    };

    let mut code = EXIT_OK;
    if let Some(sys_json) = v.get("system") {
        let env = v.get("envelope");
        let envelope = (
            env.and_then(|e| e.get("M")).and_then(Value::as_f64).unwrap_or(envelope_default.0),
            env.and_then(|e| e.get("R")).and_then(Value::as_f64).unwrap_or(envelope_default.1),
        );
        let system = TransitionSystem::<Complex64>::from_json(sys_json, Some(float_a.order()))?;
        let result = linearize(&system)?;
        let rep = domination_check(&system, &result, &float_a, envelope, single_fibre_stages)?;
        let verdict = match &rep.verdict {
            Domination::Pass => json!("pass"),
            Domination::Violation { chart, component, index, value, bound } => {
                code = EXIT_VIOLATION;
                json!({ "chart": chart + 1, "component": component + 1, "index": index, "value": value, "bound": bound })
            }
        };
        summary["domination"] = json!({
            "verdict": verdict,
            "checked": rep.checked,
            "max_ratio": rep.max_ratio,
            "min_margin": rep.min_margin,
            "solved_order": result.solved_order(),
        });
        sink.note(format!("domination: {verdict}, max |F|/A = {:e}", rep.max_ratio));
    }
    sink.json("majorant", &summary)?;
    Ok(code)
}

pub fn cmd_diophantine(cfg: &RunConfig) -> Result<u8> {
    let v = cfg.input()?;
    let mults = multiplier_list(&v)?;
    let (a, alpha) = (param(&v, "A", 0.25), param(&v, "alpha", 1.0));
    let max_order = cfg.order.map(|o| o as u64).unwrap_or(100_000);
    let rows: Vec<(DiophantineVerdict, f64)> = mults
        .par_iter()
        .map(|m| (diophantine_check(m, a, alpha, max_order), divisor_profile(m, max_order as usize).min_scaled()))
        .collect();
    let mut table = Table::new(&["label", "theta", "verdict", "m", "divisor", "bound", "min_m_d"]);
    for (mult, (verdict, min_scaled)) in mults.iter().zip(&rows) {
        let (word, m, d, b) = match *verdict {
            DiophantineVerdict::Pass => ("pass", 0, f64::NAN, f64::NAN),
            DiophantineVerdict::Violation { m, divisor, bound } => ("violation", m, divisor, bound),
        };
        table.row(vec![
            mult.label().into(),
            mult.theta().into(),
            word.into(),
            m.into(),
            d.into(),
            b.into(),
            (*min_scaled).into(),
        ]);
    }
    let sink = cfg.sink()?;
    sink.csv("diophantine", &table)?;
    sink.json("diophantine", &json!({ "A": a, "alpha": alpha, "max_order": max_order }))?;
    Ok(EXIT_OK)
}

pub fn cmd_cech_solve(cfg: &RunConfig) -> Result<u8> {
    let v = cfg.input()?;
    match cfg.precision {
        Precision::Float => run_cech::<Complex64>(cfg, &v),
        Precision::Exact => run_cech::<GaussRational>(cfg, &v),
    }
}

fn run_cech<S: Scalar>(cfg: &RunConfig, v: &Value) -> Result<u8> {
    let cover = CycleCover::<S>::from_json(v.get("cover").unwrap_or(v))?;
    let alpha: Vec<S> = v
        .get("alpha")
        .and_then(Value::as_array)
        .ok_or_else(|| anyhow!("missing \"alpha\" array"))?
        .iter()
        .map(|a| cech::parse_scalar(a).ok_or_else(|| anyhow!("unparseable alpha entry {a}")))
        .collect::<Result<_>>()?;
    let gauge = match v.get("gauge") {
        Some(g) => cech::parse_scalar(g).ok_or_else(|| anyhow!("unparseable gauge"))?,
        None => S::zero(),
    };
    let sink = cfg.sink()?;
    let rep = match cech::solve_with(&cover, &alpha, gauge) {
        Ok(rep) => rep,
        Err(CechError::Obstructed { obstruction }) => {
            sink.json(
                "cech",
                &json!({ "obstructed": true, "obstruction": { "re": obstruction.re, "im": obstruction.im } }),
            )?;
            eprintln!("trivial holonomy with nonzero obstruction {obstruction}");
            return Ok(EXIT_FINITE_TYPE);
        }
        Err(e) => return Err(e.into()),
    };
    let mut table = Table::new(&["chart", "beta_re", "beta_im"]);
    for (j, b) in rep.beta.iter().enumerate() {
        let z = b.to_c64();
        table.row(vec![(j + 1).into(), z.re.into(), z.im.into()]);
    }
    sink.csv("cech", &table)?;
    sink.json(
        "cech",
        &json!({
            "obstructed": false,
            "beta": rep.beta.iter().map(cech::scalar_json).collect::<Vec<_>>(),
            "obstruction": cech::scalar_json(&rep.obstruction),
            "used_normalization": rep.used_normalization,
            "near_resonant": rep.near_resonant,
            "bound_ratio": rep.bound_ratio,
            "precision": precision_label(cfg.precision),
        }),
    )?;
    Ok(EXIT_OK)
}
