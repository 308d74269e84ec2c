//! The boundary value problem of [`super::fem`] solved spectrally in `s`.

use serde::Serialize;

use crate::analysis::{convergence_study, ConvergenceRecord, RateFit};
use crate::error::{Error, Result};
use crate::galerkin::{galerkin_solve, GalerkinOptions};
use crate::orthopoly::Family;
use crate::paramops::truncate_general_to_polynomial;
use crate::pseudospectral::pseudospectral_solve;

use super::fem::assemble_fem;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OdeConfig {
    pub eps: f64,
    pub n_elements: usize,
    pub n_max: usize,
    /// Gauss order for Galerkin assembly; `2n + 10` when absent.
    pub quad_order: Option<usize>,
    /// Also solve with `A` replaced by its degree-`d` interpolant, using
    /// the exact polynomial assembly.
    pub poly_degree: Option<usize>,
}

impl Default for OdeConfig {
    fn default() -> Self {
        OdeConfig {
            eps: 0.2,
            n_elements: 64,
            n_max: 12,
            quad_order: None,
            poly_degree: None,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct OdeReport {
    pub config: OdeConfig,
    #[serde(skip)]
    pub galerkin: ConvergenceRecord,
    #[serde(skip)]
    pub pseudospectral: ConvergenceRecord,
    #[serde(skip)]
    pub truncated: Option<ConvergenceRecord>,
    pub galerkin_fit: Option<RateFit>,
    pub pseudospectral_fit: Option<RateFit>,
}

/// Residual norms of both methods for `n = 1..=n_max`. Residuals of the
/// truncated route are measured against the original operator.
pub fn demo_ode(config: OdeConfig) -> Result<OdeReport> {
    if config.n_max == 0 {
        return Err(Error::Config("n_max must be positive".into()));
    }
    let family = Family::LegendreUniform;
    let fem = assemble_fem(config.n_elements, config.eps)?;
    let a = fem.param_matrix();
    let b = fem.rhs();
    let opts = GalerkinOptions {
        quad_order: config.quad_order,
    };

    let galerkin = convergence_study("galerkin", &a, &b, 1..=config.n_max, None, None, |n| {
        galerkin_solve(&a, &b, family, n, opts).map(|g| g.solution)
    })?;
    let pseudospectral = convergence_study("pseudospectral", &a, &b, 1..=config.n_max, None, None, |n| {
        pseudospectral_solve(&a, &b, family, n)
    })?;
    let truncated = match config.poly_degree {
        Some(d) => {
            let ad = truncate_general_to_polynomial(&a, d, family)?;
            let label = format!("galerkin-degree-{d}");
            Some(convergence_study(&label, &a, &b, 1..=config.n_max, None, None, |n| {
                galerkin_solve(&ad, &b, family, n, GalerkinOptions::default()).map(|g| g.solution)
            })?)
        }
        None => None,
    };
    Ok(OdeReport {
        config,
        galerkin_fit: galerkin.residual_fit().ok(),
        pseudospectral_fit: pseudospectral.residual_fit().ok(),
        galerkin,
        pseudospectral,
        truncated,
    })
}
