//! Unit-circle multipliers `sigma = exp(2 pi i theta)` and their small divisors.
//!
//! The rotation number is kept either exactly (a rational, or the exact
//! truncation of an irrational such as a Liouville sum) or as a double-double,
//! so that `m * theta mod 1` stays accurate to ~1e-20 for the orders swept here.

mod arcs;
mod dd;

use std::f64::consts::PI;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde_json::{json, Value};
use thiserror::Error;

pub use arcs::{arc_partition, xi_to_s, ArcBox, BOX_TOL};
pub use dd::DoubleDouble;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum MultiplierError {
    #[error("denominator must be positive")]
    BadDenominator,
    #[error("unparseable rotation number {0:?}")]
    Parse(String),
    #[error("Liouville tower term too large ({digits} digits)")]
    TooLarge { digits: usize },
    #[error("epsilon check failed at theta = {theta}: ratio {ratio}")]
    EpsilonCheck { theta: f64, ratio: f64 },
}

#[derive(Clone, Debug, PartialEq)]
enum Theta {
    Rational {
        p: i64,
        q: i64,
    },
    /// Exact truncation of an irrational rotation number.
    Exact(BigRational),
    Real(DoubleDouble),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MultiplierKind {
    Rational { p: i64, q: i64 },
    IrrationalSampled,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Multiplier {
    theta: Theta,
}

impl Multiplier {
    /// `theta = p/q` in lowest terms.
    pub fn rational(p: i64, q: i64) -> Result<Self, MultiplierError> {
        if q <= 0 {
            return Err(MultiplierError::BadDenominator);
        }
        let g = p.gcd(&q);
        Ok(Multiplier { theta: Theta::Rational { p: p / g, q: q / g } })
    }

    pub fn from_f64(theta: f64) -> Self {
        Multiplier { theta: Theta::Real(DoubleDouble::new(theta, 0.0)) }
    }

    /// Decimal string, parsed exactly.
    pub fn from_decimal(text: &str) -> Result<Self, MultiplierError> {
        let r = crate::scalar::parse_rational(text).ok_or_else(|| MultiplierError::Parse(text.to_string()))?;
        Ok(Multiplier { theta: Theta::Exact(r) })
    }

    /// `(sqrt(n) + a) / b`, e.g. the golden mean is `(5, -1, 2)`.
    pub fn quadratic(n: u32, a: i32, b: i32) -> Self {
        let v = DoubleDouble::sqrt(n as f64).add_f64(a as f64).div_f64(b as f64);
        Multiplier { theta: Theta::Real(v) }
    }

    pub fn golden_mean() -> Self {
        Self::quadratic(5, -1, 2)
    }

    /// `sum_{k=1}^{levels} 10^(-k!)`, stored exactly.
    pub fn liouville(levels: u32) -> Self {
        let ten = BigInt::from(10);
        let mut sum = BigRational::zero();
        let mut fact: usize = 1;
        for k in 1..=levels as usize {
            fact *= k;
            sum += BigRational::new(BigInt::one(), num_traits::pow(ten.clone(), fact));
        }
        Multiplier { theta: Theta::Exact(sum) }
    }

    /// `sum 1/a_k` with `a_1 = base` and `a_{k+1} = a_k^{a_k}`; its partial sums
    /// are exceptionally good rational approximants already at small denominators.
    pub fn liouville_tower(base: u32, levels: u32) -> Result<Self, MultiplierError> {
        let mut a = BigInt::from(base.max(2));
        let mut sum = BigRational::zero();
        for k in 0..levels {
            sum += BigRational::new(BigInt::one(), a.clone());
            if k + 1 < levels {
                let exp = a
                    .to_usize()
                    .filter(|&e| e <= 1 << 20)
                    .ok_or_else(|| MultiplierError::TooLarge { digits: a.to_string().len() })?;
                a = num_traits::pow(a, exp);
            }
        }
        Ok(Multiplier { theta: Theta::Exact(sum) })
    }

    pub fn kind(&self) -> MultiplierKind {
        match self.theta {
            Theta::Rational { p, q } => MultiplierKind::Rational { p, q },
            _ => MultiplierKind::IrrationalSampled,
        }
    }

    pub fn theta(&self) -> f64 {
        match &self.theta {
            Theta::Rational { p, q } => *p as f64 / *q as f64,
            Theta::Exact(r) => r.to_f64().unwrap_or(f64::NAN),
            Theta::Real(d) => d.to_f64(),
        }
    }

    /// `m * theta mod 1`, in `[0, 1)`.
    pub fn frac_mul(&self, m: u64) -> f64 {
        match &self.theta {
            Theta::Rational { p, q } => {
                let r = (*p as i128 * m as i128).rem_euclid(*q as i128);
                r as f64 / *q as f64
            }
            Theta::Exact(r) => {
                let num = (r.numer() * BigInt::from(m)).mod_floor(r.denom());
                BigRational::new(num, r.denom().clone()).to_f64().unwrap_or(f64::NAN)
            }
            Theta::Real(d) => d.frac_mul(m),
        }
    }

    /// `sigma^m`, evaluated from the reduced angle so torsion hits 1 exactly.
    pub fn sigma_pow(&self, m: u64) -> Complex64 {
        let f = self.frac_mul(m);
        if f == 0.0 {
            return Complex64::new(1.0, 0.0);
        }
        Complex64::from_polar(1.0, 2.0 * PI * f)
    }

    pub fn sigma(&self) -> Complex64 {
        self.sigma_pow(1)
    }

    /// `d(1, sigma^m)` on `R/Z`.
    pub fn divisor(&self, m: u64) -> f64 {
        let f = self.frac_mul(m);
        f.min(1.0 - f)
    }

    /// The reflected rotation number `1 - theta`.
    pub fn reflect(&self) -> Self {
        let theta = match &self.theta {
            Theta::Rational { p, q } => Theta::Rational { p: q - p, q: *q },
            Theta::Exact(r) => Theta::Exact(BigRational::one() - r),
            Theta::Real(d) => Theta::Real(DoubleDouble::new(-d.hi, -d.lo).add_f64(1.0)),
        };
        Multiplier { theta }
    }

    /// `{"rational": [p, q]}`, `{"real": "<decimal>"}`, `{"liouville": K}`,
    /// `{"quadratic": [n, a, b]}` or `{"golden": true}`.
    pub fn from_json(v: &Value) -> Result<Self, MultiplierError> {
        let err = || MultiplierError::Parse(v.to_string());
        if let Some(pq) = v.get("rational").and_then(Value::as_array) {
            let p = pq.first().and_then(Value::as_i64).ok_or_else(err)?;
            let q = pq.get(1).and_then(Value::as_i64).ok_or_else(err)?;
            return Self::rational(p, q);
        }
        if let Some(r) = v.get("real") {
            return match r {
                Value::String(s) => Self::from_decimal(s),
                Value::Number(n) => Self::from_decimal(&n.to_string()),
                _ => Err(err()),
            };
        }
        if let Some(k) = v.get("liouville").and_then(Value::as_u64) {
            return Ok(Self::liouville(k as u32));
        }
        if let Some(q) = v.get("quadratic").and_then(Value::as_array) {
            let get = |i: usize| q.get(i).and_then(Value::as_i64).ok_or_else(err);
            return Ok(Self::quadratic(get(0)? as u32, get(1)? as i32, get(2)? as i32));
        }
        if v.get("golden").is_some() {
            return Ok(Self::golden_mean());
        }
        Err(err())
    }

    pub fn to_json(&self) -> Value {
        match &self.theta {
            Theta::Rational { p, q } => json!({ "rational": [p, q] }),
            Theta::Exact(r) => json!({ "real": crate::scalar::rational_text(r) }),
            Theta::Real(d) => json!({ "real": format!("{:.17e}", d.to_f64()) }),
        }
    }

    pub fn label(&self) -> String {
        match &self.theta {
            Theta::Rational { p, q } => format!("{p}/{q}"),
            _ => format!("{:.17e}", self.theta()),
        }
    }
}

/// Distance on `R/Z` between two angles measured in turns; in `[0, 1/2]`.
pub fn circle_distance(theta1: f64, theta2: f64) -> f64 {
    let x = theta1 - theta2;
    (x - x.round()).abs()
}

#[derive(Clone, Debug, PartialEq)]
pub struct DivisorProfile {
    pub multiplier: Multiplier,
    /// `values[m - 1] = d(1, sigma^m)`.
    pub values: Vec<f64>,
}

impl DivisorProfile {
    pub fn max_order(&self) -> usize {
        self.values.len()
    }

    pub fn get(&self, m: usize) -> f64 {
        self.values[m - 1]
    }

    /// `min_m m * d_m` over the profile.
    pub fn min_scaled(&self) -> f64 {
        self.values.iter().enumerate().map(|(i, d)| (i + 1) as f64 * d).fold(f64::INFINITY, f64::min)
    }
}

pub fn divisor_profile(mult: &Multiplier, max_order: usize) -> DivisorProfile {
    DivisorProfile { multiplier: mult.clone(), values: (1..=max_order as u64).map(|m| mult.divisor(m)).collect() }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum DiophantineVerdict {
    Pass,
    /// Smallest `m` with `d_m < A m^-alpha`.
    Violation {
        m: u64,
        divisor: f64,
        bound: f64,
    },
}

/// Checks `d(1, sigma^m) >= A * m^-alpha` for `1 <= m <= max_order`.
pub fn diophantine_check(mult: &Multiplier, a: f64, alpha: f64, max_order: u64) -> DiophantineVerdict {
    for m in 1..=max_order {
        let bound = a * (m as f64).powf(-alpha);
        let d = mult.divisor(m);
        if d < bound {
            return DiophantineVerdict::Violation { m, divisor: d, bound };
        }
    }
    DiophantineVerdict::Pass
}

/// The constant `eps` with `eps * d(1, sigma) <= |1 - sigma|` on the circle.
pub const EPSILON: f64 = 4.0;

pub fn epsilon_constant() -> f64 {
    EPSILON
}

/// Minimum of `|1 - e^{2 pi i t}| / d(1, e^{2 pi i t})` over a grid on `(0, 1/2]`;
/// fails if it falls below `EPSILON - 1e-9`.
pub fn verify_epsilon(grid: usize) -> Result<f64, MultiplierError> {
    let mut worst = f64::INFINITY;
    for k in 1..=grid.max(1) {
        let t = 0.5 * k as f64 / grid.max(1) as f64;
        let chord = (Complex64::new(1.0, 0.0) - Complex64::from_polar(1.0, 2.0 * PI * t)).norm();
        let ratio = chord / circle_distance(0.0, t);
        if ratio < EPSILON - 1e-9 {
            return Err(MultiplierError::EpsilonCheck { theta: t, ratio });
        }
        worst = worst.min(ratio);
    }
    Ok(worst)
}
