//! Coefficient fields.
//!
//! Everything in the crate is generic over [`Scalar`], which has two
//! implementations: double-precision complex numbers ([`Complex64`]) and
//! exact Gaussian rationals ([`GaussRational`]). The exact field is used by
//! oracle tests and by the `--precision exact` CLI mode, where residuals are
//! expected to vanish identically rather than up to rounding.

use std::fmt::Debug;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_complex::{Complex, Complex64};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde_json::Value;

/// Complex numbers with exact rational real and imaginary parts.
pub type GaussRational = Complex<BigRational>;

pub trait Scalar:
    Clone
    + Debug
    + PartialEq
    + Send
    + Sync
    + 'static
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
{
    /// True for fields where arithmetic is exact and comparisons use equality.
    const EXACT: bool;

    /// Converts a binary floating point pair; exact for rational fields.
    fn from_f64(re: f64, im: f64) -> Self;

    fn from_int(n: i64) -> Self;

    /// Parses a pair of decimal (or `p/q` in exact fields) literals.
    fn from_text(re: &str, im: &str) -> Option<Self>;

    fn to_c64(&self) -> Complex64;

    /// Multiplicative inverse, `None` for zero or a non-finite result.
    fn try_inv(&self) -> Option<Self>;

    fn is_finite(&self) -> bool;

    /// `|z|` as a real element of the field. Exact when `|z|` is rational.
    fn modulus(&self) -> Self;

    fn conj(&self) -> Self;

    /// JSON encodings of the real and imaginary parts.
    fn to_json_parts(&self) -> (Value, Value);

    fn from_c64(z: Complex64) -> Self {
        Self::from_f64(z.re, z.im)
    }

    fn norm(&self) -> f64 {
        self.to_c64().norm()
    }

    /// Exact fields: `self == 0`. Float fields: `|self| <= rel_tol * scale`.
    fn negligible(&self, scale: f64, rel_tol: f64) -> bool {
        if Self::EXACT {
            self.is_zero()
        } else {
            self.norm() <= rel_tol * scale
        }
    }

    fn powi(&self, exp: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one();
        let mut e = exp;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base.clone();
            }
            e >>= 1;
            if e > 0 {
                base = base.clone() * base;
            }
        }
        acc
    }

    fn from_json_parts(re: &Value, im: &Value) -> Option<Self> {
        Self::from_text(&json_literal(re)?, &json_literal(im)?)
    }
}

fn json_literal(v: &Value) -> Option<String> {
    match v {
        // serde_json prints f64 with the shortest round-trip representation,
        // so `0.1` comes back as "0.1" and parses to 1/10 in exact fields.
        Value::Number(n) => Some(n.to_string()),
        Value::String(s) => Some(s.trim().to_string()),
        Value::Null => Some("0".to_string()),
        _ => None,
    }
}

impl Scalar for Complex64 {
    const EXACT: bool = false;

    fn from_f64(re: f64, im: f64) -> Self {
        Complex64::new(re, im)
    }

    fn from_int(n: i64) -> Self {
        Complex64::new(n as f64, 0.0)
    }

    fn from_text(re: &str, im: &str) -> Option<Self> {
        let parse = |t: &str| -> Option<f64> {
            if t.contains('/') {
                parse_rational(t)?.to_f64()
            } else {
                t.parse::<f64>().ok()
            }
        };
        let z = Complex64::new(parse(re)?, parse(im)?);
        z.is_finite().then_some(z)
    }

    fn to_c64(&self) -> Complex64 {
        *self
    }

    fn try_inv(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        let inv = self.inv();
        inv.is_finite().then_some(inv)
    }

    fn is_finite(&self) -> bool {
        self.re.is_finite() && self.im.is_finite()
    }

    fn modulus(&self) -> Self {
        Complex64::new(self.norm(), 0.0)
    }

    fn conj(&self) -> Self {
        Complex::conj(self)
    }

    fn to_json_parts(&self) -> (Value, Value) {
        (Value::from(self.re), Value::from(self.im))
    }
}

impl Scalar for GaussRational {
    const EXACT: bool = true;

    fn from_f64(re: f64, im: f64) -> Self {
        let conv = |x: f64| BigRational::from_float(x).expect("finite float");
        Complex::new(conv(re), conv(im))
    }

    fn from_int(n: i64) -> Self {
        Complex::new(BigRational::from_integer(BigInt::from(n)), BigRational::zero())
    }

    fn from_text(re: &str, im: &str) -> Option<Self> {
        Some(Complex::new(parse_rational(re)?, parse_rational(im)?))
    }

    fn to_c64(&self) -> Complex64 {
        Complex64::new(self.re.to_f64().unwrap_or(f64::NAN), self.im.to_f64().unwrap_or(f64::NAN))
    }

    fn try_inv(&self) -> Option<Self> {
        let n = self.norm_sqr();
        if n.is_zero() {
            return None;
        }
        Some(Complex::new(&self.re / &n, -&self.im / &n))
    }

    fn is_finite(&self) -> bool {
        true
    }

    fn modulus(&self) -> Self {
        if self.im.is_zero() {
            return Complex::new(self.re.abs(), BigRational::zero());
        }
        let n = self.norm_sqr();
        let (num, den) = (n.numer().sqrt(), n.denom().sqrt());
        if &(&num * &num) == n.numer() && &(&den * &den) == n.denom() {
            Complex::new(BigRational::new(num, den), BigRational::zero())
        } else {
            // Irrational modulus: the nearest double, stored exactly.
            Self::from_f64(self.norm(), 0.0)
        }
    }

    fn conj(&self) -> Self {
        Complex::new(self.re.clone(), -self.im.clone())
    }

    fn to_json_parts(&self) -> (Value, Value) {
        (Value::from(rational_text(&self.re)), Value::from(rational_text(&self.im)))
    }
}

/// `"p/q"`, or `"p"` for integers.
pub fn rational_text(r: &BigRational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Parses `p/q`, integers and decimal literals (with optional exponent) exactly.
pub fn parse_rational(text: &str) -> Option<BigRational> {
    let t = text.trim();
    if t.is_empty() {
        return None;
    }
    if let Some((p, q)) = t.split_once('/') {
        let p: BigInt = p.trim().parse().ok()?;
        let q: BigInt = q.trim().parse().ok()?;
        if q.is_zero() {
            return None;
        }
        return Some(BigRational::new(p, q));
    }
    let (mantissa, exponent) = match t.find(['e', 'E']) {
        Some(pos) => (&t[..pos], t[pos + 1..].parse::<i32>().ok()?),
        None => (t, 0),
    };
    let (negative, digits) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = digits.split_once('.').unwrap_or((digits, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return None;
    }
    if !int_part.chars().chain(frac_part.chars()).all(|c| c.is_ascii_digit()) {
        return None;
    }
    let all: BigInt = format!("{int_part}{frac_part}0").parse().ok()?;
    let all = all / BigInt::from(10);
    let scale = exponent - frac_part.len() as i32;
    let ten = BigInt::from(10);
    let mut value = if scale >= 0 {
        BigRational::from_integer(all * num_traits::pow(ten, scale as usize))
    } else {
        BigRational::new(all, num_traits::pow(ten, (-scale) as usize))
    };
    if negative {
        value = -value;
    }
    Some(value)
}

/// Largest modulus over a collection, 0 for an empty one.
pub fn max_norm<'a, S: Scalar>(values: impl IntoIterator<Item = &'a S>) -> f64 {
    values.into_iter().map(Scalar::norm).fold(0.0, f64::max)
}
