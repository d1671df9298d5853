//! Implicit function theorem on jets.
//!
//! Given `F(X, Y)` with `F(0, 0) = 0` and `dF/dY(0, 0) != 0`, finds the jet
//! `Y(X)` with `Y(0) = 0` and `F(X, Y(X)) = O(|X|^(M+1))` by Newton's method.
//! The Y-derivative is obtained by evaluating `F` at `Y + T` in one extra
//! variable `T` and reading off the part linear in `T`, so callers only
//! supply an evaluator.

use super::{MultiSeries, Result, SeriesError};
use crate::scalar::Scalar;

/// `|dF/dY(0,0)|` at or below this value is treated as degenerate (float fields).
pub const DERIVATIVE_FLOOR: f64 = 1e-12;

const STOP_TOL: f64 = 1e-13;
const ACCEPT_TOL: f64 = 1e-9;

/// An analytic map evaluated on jets.
///
/// `x` holds the coordinate jets `X^1..X^r` and `y` the jet substituted for
/// `Y`; all share one ambient variable count and order, which may exceed `r`.
pub trait JetMap<S: Scalar> {
    fn eval(&self, x: &[MultiSeries<S>], y: &MultiSeries<S>) -> Result<MultiSeries<S>>;
}

impl<S, F> JetMap<S> for F
where
    S: Scalar,
    F: Fn(&[MultiSeries<S>], &MultiSeries<S>) -> Result<MultiSeries<S>>,
{
    fn eval(&self, x: &[MultiSeries<S>], y: &MultiSeries<S>) -> Result<MultiSeries<S>> {
        self(x, y)
    }
}

/// Solves `F(X, Y) = 0` for `Y(X)` through total degree `order` in `vars` variables.
pub fn solve_implicit<S: Scalar>(f: &impl JetMap<S>, vars: usize, order: usize) -> Result<MultiSeries<S>> {
    if vars == 0 {
        return Err(SeriesError::NoVariables);
    }
    let ambient = vars + 1;
    let coords: Vec<_> = (0..vars).map(|i| MultiSeries::var(ambient, order, i)).collect();
    let t = MultiSeries::var(ambient, order, vars);

    let mut y = MultiSeries::<S>::zero(vars, order);
    let cap = iteration_cap(order);
    let mut scale = 1.0f64;
    for iter in 0..=cap {
        let g = f.eval(&coords, &y.embed(ambient).add(&t)?)?;
        let (value, derivative) = split_linear_in_last(&g, vars, order);
        if iter == 0 {
            if !value.constant_term().negligible(1.0, DERIVATIVE_FLOOR) {
                return Err(SeriesError::NotAtOrigin { value: value.constant_term().norm() });
            }
            let d0 = derivative.constant_term();
            if d0.is_zero() || (!S::EXACT && d0.norm() <= DERIVATIVE_FLOOR) {
                return Err(SeriesError::DegenerateImplicit { derivative: d0.norm() });
            }
            scale = value.max_norm().max(1.0);
        }
        scale = scale.max(y.max_norm());
        let residual = value.max_norm();
        let converged = if S::EXACT { value.is_zero() } else { residual <= STOP_TOL * scale };
        if converged {
            return Ok(y);
        }
        if iter == cap {
            if !S::EXACT && residual <= ACCEPT_TOL * scale {
                return Ok(y);
            }
            return Err(SeriesError::NoConvergence { iterations: cap, residual });
        }
        // `value` has no constant term, so the derivative's missing top
        // coefficient never reaches the correction.
        let step = value.mul(&derivative.pad_to(order).inverse()?)?;
        y = y.sub(&step)?;
    }
    unreachable!("loop returns on its last iteration")
}

/// Newton doubles the number of correct orders per step.
fn iteration_cap(order: usize) -> usize {
    let log2 = (usize::BITS - order.max(1).leading_zeros()) as usize;
    2 * log2 + 4
}

/// Splits `G(X, T)` into `G(X, 0)` (order `order`) and `dG/dT(X, 0)` (order `order - 1`).
fn split_linear_in_last<S: Scalar>(g: &MultiSeries<S>, vars: usize, order: usize) -> (MultiSeries<S>, MultiSeries<S>) {
    let mut value = MultiSeries::zero(vars, order);
    let mut derivative = MultiSeries::zero(vars, order.saturating_sub(1));
    for (idx, c) in g.terms() {
        let (x_part, t_exp) = idx.split_at(vars);
        match t_exp[0] {
            0 => value.set(x_part, c.clone()).expect("degree fits"),
            1 => derivative.set(x_part, c.clone()).expect("degree fits"),
            _ => {}
        }
    }
    (value, derivative)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::GaussRational;
    use num_complex::Complex64;

    type Q = GaussRational;

    fn uni_coeffs(s: &MultiSeries<Q>) -> Vec<Q> {
        s.coeffs().to_vec()
    }

    #[test]
    fn catalan_numbers() {
        // F = -Y + X + Y^2  =>  Y = (1 - sqrt(1 - 4X)) / 2
        let f = |x: &[MultiSeries<Q>], y: &MultiSeries<Q>| y.mul(y)?.add(&x[0])?.sub(y);
        let y = solve_implicit(&f, 1, 4).unwrap();
        let expect: Vec<Q> = [0, 1, 1, 2, 5].iter().map(|&c| Q::from_int(c)).collect();
        assert_eq!(uni_coeffs(&y), expect);
    }

    #[test]
    fn linear_and_read_off_cases() {
        let lin = |x: &[MultiSeries<Q>], y: &MultiSeries<Q>| x[0].sub(y);
        let y = solve_implicit(&lin, 1, 5).unwrap();
        assert_eq!(y, MultiSeries::var(1, 5, 0));

        let sq = |x: &[MultiSeries<Q>], y: &MultiSeries<Q>| x[0].mul(&x[0])?.sub(y);
        let y = solve_implicit(&sq, 1, 3).unwrap();
        assert_eq!(uni_coeffs(&y), vec![Q::from_int(0), Q::from_int(0), Q::from_int(1), Q::from_int(0)]);
    }

    #[test]
    fn degenerate_derivative_is_rejected() {
        let f = |x: &[MultiSeries<Complex64>], y: &MultiSeries<Complex64>| y.mul(y)?.add(&x[0]);
        assert!(matches!(solve_implicit(&f, 1, 4), Err(SeriesError::DegenerateImplicit { .. })));
    }

    #[test]
    fn off_origin_is_rejected() {
        let f = |x: &[MultiSeries<Complex64>], y: &MultiSeries<Complex64>| {
            Ok(x[0].sub(y)?.add_constant(&Complex64::new(1.0, 0.0)))
        };
        assert!(matches!(solve_implicit(&f, 1, 4), Err(SeriesError::NotAtOrigin { .. })));
    }

    #[test]
    fn float_catalan_residual_small() {
        let f = |x: &[MultiSeries<Complex64>], y: &MultiSeries<Complex64>| y.mul(y)?.add(&x[0])?.sub(y);
        let y = solve_implicit(&f, 1, 20).unwrap();
        // [X^20] Y = C_19 = 1767263190
        assert!((y.coeff(&[20]).re - 1767263190.0).abs() < 1e-3);
    }

    #[test]
    fn two_variable_solution() {
        // Y = X1 + X2 + Y * X1  =>  Y = (X1 + X2) / (1 - X1)
        let f = |x: &[MultiSeries<Q>], y: &MultiSeries<Q>| x[0].add(&x[1])?.add(&y.mul(&x[0])?)?.sub(y);
        let y = solve_implicit(&f, 2, 4).unwrap();
        assert_eq!(y.coeff(&[3, 0]), Q::from_int(1));
        assert_eq!(y.coeff(&[2, 1]), Q::from_int(1));
        assert_eq!(y.coeff(&[0, 2]), Q::from_int(0));
    }
}
