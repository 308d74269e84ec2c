//! Collocation at Gauss nodes and the pseudospectral coefficient transform.

use nalgebra::{DMatrix, DVector};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{DenseLu, FactorFailure};
use crate::orthopoly::{
    eval_basis_unchecked, recurrence_table, Family, GaussDecomposition, QuadratureRule, RecurrenceTable,
};
use crate::paramops::{check_dims, ParamMatrix, ParamVector};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Pseudospectral,
    Galerkin,
}

impl Method {
    pub fn name(&self) -> &'static str {
        match self {
            Method::Pseudospectral => "pseudospectral",
            Method::Galerkin => "galerkin",
        }
    }
}

impl std::str::FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "pseudospectral" => Ok(Method::Pseudospectral),
            "galerkin" => Ok(Method::Galerkin),
            other => Err(Error::Config(format!(
                "unknown method `{other}` (expected `pseudospectral` or `galerkin`)"
            ))),
        }
    }
}

/// `x(s) ≈ X π_n(s)` with `X` of size `N×n`; column `k` multiplies `π_k`.
#[derive(Debug, Clone)]
pub struct SpectralSolution {
    coeffs: DMatrix<f64>,
    table: RecurrenceTable,
    method: Method,
}

impl SpectralSolution {
    pub fn new(coeffs: DMatrix<f64>, family: Family, method: Method) -> Result<Self> {
        if coeffs.ncols() == 0 || coeffs.nrows() == 0 {
            return Err(Error::Dimension("coefficient matrix must be non-empty".into()));
        }
        if coeffs.iter().any(|v| !v.is_finite()) {
            return Err(Error::Config("coefficient matrix has non-finite entries".into()));
        }
        let table = recurrence_table(family, coeffs.ncols())?;
        Ok(SpectralSolution { coeffs, table, method })
    }

    pub fn coeffs(&self) -> &DMatrix<f64> {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> DMatrix<f64> {
        self.coeffs
    }

    /// Number of basis terms.
    pub fn n(&self) -> usize {
        self.coeffs.ncols()
    }

    /// Size `N` of the system.
    pub fn dim(&self) -> usize {
        self.coeffs.nrows()
    }

    pub fn family(&self) -> Family {
        self.table.family()
    }

    pub fn method(&self) -> Method {
        self.method
    }

    pub fn eval(&self, s: f64) -> DVector<f64> {
        &self.coeffs * eval_basis_unchecked(&self.table, self.n(), s)
    }
}

/// Solutions of `A(λ_i) x = b(λ_i)` at the Gauss nodes, in node order.
#[derive(Debug, Clone)]
pub struct CollocationSolves {
    values: DMatrix<f64>,
    gauss: GaussDecomposition,
    family: Family,
    conditions: Vec<f64>,
    bary_weights: Vec<f64>,
}

impl CollocationSolves {
    /// `X_c`: column `i` is `x(λ_i)`.
    pub fn values(&self) -> &DMatrix<f64> {
        &self.values
    }

    pub fn rule(&self) -> &QuadratureRule {
        &self.gauss.rule
    }

    pub fn eigenvectors(&self) -> &DMatrix<f64> {
        &self.gauss.eigenvectors
    }

    pub fn family(&self) -> Family {
        self.family
    }

    /// 1-norm condition estimate of each `A(λ_i)`.
    pub fn conditions(&self) -> &[f64] {
        &self.conditions
    }

    pub fn max_condition(&self) -> f64 {
        self.conditions.iter().copied().fold(0.0, f64::max)
    }

    /// Lagrange interpolant through the node solutions, in barycentric form.
    pub fn evaluate_lagrange(&self, s: f64) -> DVector<f64> {
        let nodes = self.gauss.rule.nodes();
        if let Some(i) = nodes.iter().position(|&x| x == s) {
            return self.values.column(i).into_owned();
        }
        let mut num = DVector::zeros(self.values.nrows());
        let mut den = 0.0;
        for (i, (&x, &w)) in nodes.iter().zip(&self.bary_weights).enumerate() {
            let t = w / (s - x);
            num.axpy(t, &self.values.column(i), 1.0);
            den += t;
        }
        num / den
    }

    pub fn to_spectral(&self) -> SpectralSolution {
        let coeffs = basis_change(&self.values, &self.gauss.eigenvectors);
        SpectralSolution::new(coeffs, self.family, Method::Pseudospectral)
            .expect("finite node solutions give finite coefficients")
    }
}

/// `X_p = X_c D_{q₀} Qᵀ`, with `q₀` the first row of `Q`.
pub fn basis_change(node_values: &DMatrix<f64>, q: &DMatrix<f64>) -> DMatrix<f64> {
    assert_eq!(
        node_values.ncols(),
        q.nrows(),
        "node count must match the eigenvector matrix"
    );
    let mut scaled = node_values.clone();
    for (i, mut col) in scaled.column_iter_mut().enumerate() {
        col *= q[(0, i)];
    }
    scaled * q.transpose()
}

/// `X_c = X_p Q D_{q₀}⁻¹`.
pub fn inverse_basis_change(coeffs: &DMatrix<f64>, q: &DMatrix<f64>) -> DMatrix<f64> {
    let mut out = coeffs * q;
    for (i, mut col) in out.column_iter_mut().enumerate() {
        col /= q[(0, i)];
    }
    out
}

fn barycentric_weights(nodes: &[f64]) -> Vec<f64> {
    let raw: Vec<f64> = nodes
        .iter()
        .enumerate()
        .map(|(i, &xi)| {
            let prod: f64 = nodes
                .iter()
                .enumerate()
                .filter(|&(j, _)| j != i)
                .map(|(_, &xj)| xi - xj)
                .product();
            1.0 / prod
        })
        .collect();
    let scale = raw.iter().fold(0.0f64, |m, w| m.max(w.abs()));
    raw.into_iter().map(|w| w / scale).collect()
}

pub(crate) enum PointFailure {
    Evaluator(Error),
    Factor(FactorFailure),
}

/// Solve `A(s) x = b(s)` at a single parameter value; returns the solution
/// and the condition estimate of `A(s)`.
pub(crate) fn solve_at(a: &ParamMatrix, b: &ParamVector, s: f64) -> Result<(DVector<f64>, f64), PointFailure> {
    let am = a.eval(s).map_err(PointFailure::Evaluator)?;
    let bv = b.eval(s).map_err(PointFailure::Evaluator)?;
    let (lu, cond) = DenseLu::new(am).map_err(PointFailure::Factor)?;
    Ok((lu.solve(&bv), cond))
}

/// Solve the system independently at each of the `n` Gauss nodes.
///
/// Node solves run in parallel; results are assembled by node index. On
/// failure the error for the lowest-index failing node is reported.
pub fn collocate(a: &ParamMatrix, b: &ParamVector, family: Family, n: usize) -> Result<CollocationSolves> {
    check_dims(a, b)?;
    let gauss = GaussDecomposition::new(family, n)?;
    let nodes = gauss.rule.nodes().to_vec();
    let solves: Vec<_> = nodes
        .par_iter()
        .enumerate()
        .map(|(node, &s)| {
            solve_at(a, b, s).map_err(|failure| match failure {
                PointFailure::Evaluator(e) => e,
                PointFailure::Factor(f) => Error::NodeSolve {
                    node,
                    s,
                    condition: f.condition(),
                    reason: f.reason(),
                },
            })
        })
        .collect();

    let mut values = DMatrix::zeros(a.dim(), n);
    let mut conditions = Vec::with_capacity(n);
    for (i, solve) in solves.into_iter().enumerate() {
        let (x, cond) = solve?;
        values.set_column(i, &x);
        conditions.push(cond);
    }
    let bary_weights = barycentric_weights(&nodes);
    Ok(CollocationSolves {
        values,
        gauss,
        family,
        conditions,
        bary_weights,
    })
}

pub fn evaluate_lagrange(c: &CollocationSolves, s: f64) -> DVector<f64> {
    c.evaluate_lagrange(s)
}

pub fn to_spectral(c: &CollocationSolves) -> SpectralSolution {
    c.to_spectral()
}

/// Pseudospectral approximation with `n` terms from an `n`-point rule.
pub fn pseudospectral_solve(a: &ParamMatrix, b: &ParamVector, family: Family, n: usize) -> Result<SpectralSolution> {
    Ok(collocate(a, b, family, n)?.to_spectral())
}
