//! `[[1 + ε, s], [s, 1]] x = (2, 1)`, with poles of `x` at `±√(1 + ε)`.

use nalgebra::{DMatrix, DVector};
use serde::Serialize;

use crate::analysis::{convergence_study, ellipse_parameter, ConvergenceRecord, RateFit};
use crate::error::{Error, Result};
use crate::galerkin::{galerkin_solve, GalerkinOptions};
use crate::orthopoly::Family;
use crate::paramops::{ParamMatrix, ParamVector};
use crate::pseudospectral::pseudospectral_solve;

pub fn problem_2x2(eps: f64) -> (ParamMatrix, ParamVector) {
    (
        ParamMatrix::polynomial(vec![
            DMatrix::from_row_slice(2, 2, &[1.0 + eps, 0.0, 0.0, 1.0]),
            DMatrix::from_row_slice(2, 2, &[0.0, 1.0, 1.0, 0.0]),
        ])
        .expect("finite coefficients"),
        ParamVector::constant(DVector::from_vec(vec![2.0, 1.0])).expect("finite coefficients"),
    )
}

pub fn exact_2x2(eps: f64) -> impl Fn(f64) -> DVector<f64> + Send + Sync + Copy {
    move |s| {
        let d = 1.0 + eps - s * s;
        DVector::from_vec(vec![(2.0 - s) / d, (1.0 + eps - 2.0 * s) / d])
    }
}

/// Gauss order for the error norms; the exact solution is rational with
/// poles close to the interval for small ε, so the order is generous.
pub fn error_quad_order(n_max: usize) -> usize {
    (4 * n_max + 20).max(400)
}

#[derive(Debug, Clone, Serialize)]
pub struct TwoByTwoReport {
    pub eps: f64,
    #[serde(skip)]
    pub record: ConvergenceRecord,
    /// Largest coefficient difference between the Galerkin and
    /// pseudospectral solutions over all `n`.
    pub galerkin_max_diff: f64,
    pub error_fit: Option<RateFit>,
    pub residual_fit: Option<RateFit>,
    /// `ρ*` for the pole at `√(1 + ε)`.
    pub predicted_rate: f64,
}

/// Pseudospectral solutions for `n = 1..=n_max` on the Legendre family,
/// with residual and true-error norms and a Galerkin cross-check.
pub fn demo_2x2(eps: f64, n_max: usize) -> Result<TwoByTwoReport> {
    if eps.is_nan() || eps <= 0.0 || n_max == 0 {
        return Err(Error::Config("demo2x2 needs eps > 0 and n_max ≥ 1".into()));
    }
    let family = Family::LegendreUniform;
    let (a, b) = problem_2x2(eps);
    let exact = exact_2x2(eps);
    let mut galerkin_max_diff = 0.0f64;
    let record = convergence_study(
        "pseudospectral",
        &a,
        &b,
        1..=n_max,
        Some(&exact),
        Some(error_quad_order(n_max)),
        |n| {
            let p = pseudospectral_solve(&a, &b, family, n)?;
            let g = galerkin_solve(&a, &b, family, n, GalerkinOptions::default())?;
            galerkin_max_diff = galerkin_max_diff.max((g.solution.coeffs() - p.coeffs()).amax());
            Ok(p)
        },
    )?;
    Ok(TwoByTwoReport {
        eps,
        galerkin_max_diff,
        error_fit: record.error_fit().ok(),
        residual_fit: record.residual_fit().ok(),
        predicted_rate: ellipse_parameter((1.0 + eps).sqrt())?,
        record,
    })
}
