//! Parameterized matrices `A(s)` and right-hand sides `b(s)`.
//!
//! Both come in two forms: a power series truncated to a finite
//! polynomial (`A(s) = A₀ + A₁ s + … + A_{m_a} s^{m_a}`), or an opaque
//! evaluator `s ↦ A(s)`. General-form evaluators must be pure and safe to
//! call concurrently; the solvers evaluate them from worker threads.

use std::fmt;
use std::sync::Arc;

use nalgebra::{DMatrix, DVector, Dim, Matrix, Owned};

use crate::error::{Error, Result};
use crate::orthopoly::{basis_matrix, basis_monomials, recurrence_table, Family, GaussDecomposition};

pub type MatrixEvaluator = Arc<dyn Fn(f64) -> DMatrix<f64> + Send + Sync>;
pub type VectorEvaluator = Arc<dyn Fn(f64) -> DVector<f64> + Send + Sync>;

#[derive(Clone)]
pub enum MatrixForm {
    Polynomial(Vec<DMatrix<f64>>),
    General { evaluator: MatrixEvaluator, analytic: bool },
}

#[derive(Clone)]
pub enum VectorForm {
    Polynomial(Vec<DVector<f64>>),
    General { evaluator: VectorEvaluator },
}

#[derive(Clone)]
pub struct ParamMatrix {
    dim: usize,
    form: MatrixForm,
}

#[derive(Clone)]
pub struct ParamVector {
    dim: usize,
    form: VectorForm,
}

impl fmt::Debug for ParamMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.form {
            MatrixForm::Polynomial(c) => f
                .debug_struct("ParamMatrix")
                .field("dim", &self.dim)
                .field("coeffs", c)
                .finish(),
            MatrixForm::General { analytic, .. } => f
                .debug_struct("ParamMatrix")
                .field("dim", &self.dim)
                .field("general", &true)
                .field("analytic", analytic)
                .finish(),
        }
    }
}

impl fmt::Debug for ParamVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.form {
            VectorForm::Polynomial(c) => f
                .debug_struct("ParamVector")
                .field("dim", &self.dim)
                .field("coeffs", c)
                .finish(),
            VectorForm::General { .. } => f
                .debug_struct("ParamVector")
                .field("dim", &self.dim)
                .field("general", &true)
                .finish(),
        }
    }
}

type Coeff<R, C> = Matrix<f64, R, C, Owned<f64, R, C>>;

fn trim_trailing_zeros<R: Dim, C: Dim>(coeffs: &mut Vec<Coeff<R, C>>)
where
    nalgebra::DefaultAllocator: nalgebra::allocator::Allocator<R, C>,
{
    while coeffs.len() > 1 && coeffs.last().is_some_and(|c| c.iter().all(|v| *v == 0.0)) {
        coeffs.pop();
    }
}

fn horner<R: Dim, C: Dim>(coeffs: &[Coeff<R, C>], s: f64) -> Coeff<R, C>
where
    nalgebra::DefaultAllocator: nalgebra::allocator::Allocator<R, C>,
{
    let (last, rest) = coeffs.split_last().expect("at least one coefficient");
    rest.iter().rev().fold(last.clone(), |acc, c| acc * s + c)
}

impl ParamMatrix {
    /// Polynomial form from `A₀, A₁, …`; trailing zero coefficients are
    /// dropped so the degree is tight.
    pub fn polynomial(mut coeffs: Vec<DMatrix<f64>>) -> Result<Self> {
        let first = coeffs
            .first()
            .ok_or_else(|| Error::Config("polynomial matrix needs at least one coefficient".into()))?;
        let dim = first.nrows();
        if dim == 0 {
            return Err(Error::Dimension("matrix dimension must be positive".into()));
        }
        for (k, c) in coeffs.iter().enumerate() {
            if c.nrows() != dim || c.ncols() != dim {
                return Err(Error::Dimension(format!(
                    "coefficient A_{k} is {}x{}, expected {dim}x{dim}",
                    c.nrows(),
                    c.ncols()
                )));
            }
            if c.iter().any(|v| !v.is_finite()) {
                return Err(Error::Config(format!("coefficient A_{k} has non-finite entries")));
            }
        }
        trim_trailing_zeros(&mut coeffs);
        Ok(ParamMatrix {
            dim,
            form: MatrixForm::Polynomial(coeffs),
        })
    }

    pub fn constant(a: DMatrix<f64>) -> Result<Self> {
        Self::polynomial(vec![a])
    }

    pub fn general<F>(dim: usize, analytic: bool, evaluator: F) -> Self
    where
        F: Fn(f64) -> DMatrix<f64> + Send + Sync + 'static,
    {
        ParamMatrix {
            dim,
            form: MatrixForm::General {
                evaluator: Arc::new(evaluator),
                analytic,
            },
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn form(&self) -> &MatrixForm {
        &self.form
    }

    /// `Some(m_a)` for polynomial data.
    pub fn degree(&self) -> Option<usize> {
        match &self.form {
            MatrixForm::Polynomial(c) => Some(c.len() - 1),
            MatrixForm::General { .. } => None,
        }
    }

    pub fn coefficients(&self) -> Option<&[DMatrix<f64>]> {
        match &self.form {
            MatrixForm::Polynomial(c) => Some(c),
            MatrixForm::General { .. } => None,
        }
    }

    pub fn eval(&self, s: f64) -> Result<DMatrix<f64>> {
        match &self.form {
            MatrixForm::Polynomial(c) => Ok(horner(c, s)),
            MatrixForm::General { evaluator, .. } => {
                let a = evaluator(s);
                if a.nrows() != self.dim || a.ncols() != self.dim {
                    return Err(Error::Evaluator {
                        s,
                        reason: format!(
                            "returned a {}x{} matrix, expected {}x{}",
                            a.nrows(),
                            a.ncols(),
                            self.dim,
                            self.dim
                        ),
                    });
                }
                if a.iter().any(|v| !v.is_finite()) {
                    return Err(Error::Evaluator {
                        s,
                        reason: "non-finite entries".into(),
                    });
                }
                Ok(a)
            }
        }
    }
}

impl ParamVector {
    pub fn polynomial(mut coeffs: Vec<DVector<f64>>) -> Result<Self> {
        let first = coeffs
            .first()
            .ok_or_else(|| Error::Config("polynomial vector needs at least one coefficient".into()))?;
        let dim = first.len();
        if dim == 0 {
            return Err(Error::Dimension("vector dimension must be positive".into()));
        }
        for (k, c) in coeffs.iter().enumerate() {
            if c.len() != dim {
                return Err(Error::Dimension(format!(
                    "coefficient b_{k} has length {}, expected {dim}",
                    c.len()
                )));
            }
            if c.iter().any(|v| !v.is_finite()) {
                return Err(Error::Config(format!("coefficient b_{k} has non-finite entries")));
            }
        }
        trim_trailing_zeros(&mut coeffs);
        Ok(ParamVector {
            dim,
            form: VectorForm::Polynomial(coeffs),
        })
    }

    pub fn constant(b: DVector<f64>) -> Result<Self> {
        Self::polynomial(vec![b])
    }

    pub fn general<F>(dim: usize, evaluator: F) -> Self
    where
        F: Fn(f64) -> DVector<f64> + Send + Sync + 'static,
    {
        ParamVector {
            dim,
            form: VectorForm::General {
                evaluator: Arc::new(evaluator),
            },
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn form(&self) -> &VectorForm {
        &self.form
    }

    pub fn degree(&self) -> Option<usize> {
        match &self.form {
            VectorForm::Polynomial(c) => Some(c.len() - 1),
            VectorForm::General { .. } => None,
        }
    }

    pub fn coefficients(&self) -> Option<&[DVector<f64>]> {
        match &self.form {
            VectorForm::Polynomial(c) => Some(c),
            VectorForm::General { .. } => None,
        }
    }

    pub fn eval(&self, s: f64) -> Result<DVector<f64>> {
        match &self.form {
            VectorForm::Polynomial(c) => Ok(horner(c, s)),
            VectorForm::General { evaluator } => {
                let b = evaluator(s);
                if b.len() != self.dim {
                    return Err(Error::Evaluator {
                        s,
                        reason: format!("returned a vector of length {}, expected {}", b.len(), self.dim),
                    });
                }
                if b.iter().any(|v| !v.is_finite()) {
                    return Err(Error::Evaluator {
                        s,
                        reason: "non-finite entries".into(),
                    });
                }
                Ok(b)
            }
        }
    }
}

pub fn eval_matrix(a: &ParamMatrix, s: f64) -> Result<DMatrix<f64>> {
    a.eval(s)
}

pub fn eval_vector(b: &ParamVector, s: f64) -> Result<DVector<f64>> {
    b.eval(s)
}

pub(crate) fn check_dims(a: &ParamMatrix, b: &ParamVector) -> Result<()> {
    if a.dim() != b.dim() {
        return Err(Error::Dimension(format!(
            "A(s) is {}x{} but b(s) has length {}",
            a.dim(),
            a.dim(),
            b.dim()
        )));
    }
    Ok(())
}

/// Images `p_ij(λ_k)` of every scalar entry polynomial at the eigenvalues.
fn entry_values(coeffs: &[DMatrix<f64>], i: usize, j: usize, nodes: &[f64]) -> Option<Vec<f64>> {
    if coeffs.iter().all(|c| c[(i, j)] == 0.0) {
        return None;
    }
    Some(
        nodes
            .iter()
            .map(|&x| coeffs.iter().rev().fold(0.0, |acc, c| acc * x + c[(i, j)]))
            .collect(),
    )
}

/// `A(J_m)`: the `Nm×Nm` matrix whose `(i, j)` block of size `m×m` is the
/// scalar polynomial `A(i, j)` applied to `J_m`.
///
/// Each block is `Q diag(A(i, j)(λ)) Qᵀ` using the shared decomposition.
pub fn operator_on_jacobi(a: &ParamMatrix, jacobi: &GaussDecomposition) -> Result<DMatrix<f64>> {
    let coeffs = a.coefficients().ok_or(Error::UnsupportedForm("operator_on_jacobi"))?;
    let n_dim = a.dim();
    let m = jacobi.order();
    let nodes = jacobi.rule.nodes();
    let mut out = DMatrix::zeros(n_dim * m, n_dim * m);
    for i in 0..n_dim {
        for j in 0..n_dim {
            if let Some(values) = entry_values(coeffs, i, j, nodes) {
                out.view_mut((i * m, j * m), (m, m))
                    .copy_from(&jacobi.spectral_matrix(&values));
            }
        }
    }
    Ok(out)
}

/// `b(J_m) e₀`: block `i` of length `m` is `b_i(J_m) e₀`.
pub fn rhs_on_jacobi(b: &ParamVector, jacobi: &GaussDecomposition) -> Result<DVector<f64>> {
    let coeffs = b.coefficients().ok_or(Error::UnsupportedForm("rhs_on_jacobi"))?;
    let m = jacobi.order();
    let nodes = jacobi.rule.nodes();
    let mut out = DVector::zeros(b.dim() * m);
    for i in 0..b.dim() {
        let values: Vec<f64> = nodes
            .iter()
            .map(|&x| coeffs.iter().rev().fold(0.0, |acc, c| acc * x + c[i]))
            .collect();
        out.rows_mut(i * m, m).copy_from(&jacobi.spectral_first_column(&values));
    }
    Ok(out)
}

/// Entrywise degree-`degree` interpolant of a general-form matrix at the
/// `(degree + 1)`-point Gauss rule of `family`, returned in power-series form.
pub fn truncate_general_to_polynomial(a: &ParamMatrix, degree: usize, family: Family) -> Result<ParamMatrix> {
    let n = degree + 1;
    let table = recurrence_table(family, n)?;
    let gauss = GaussDecomposition::new(family, n)?;
    let samples: Vec<DMatrix<f64>> = gauss.rule.nodes().iter().map(|&s| a.eval(s)).collect::<Result<_>>()?;
    let v = basis_matrix(&table, n, gauss.rule.nodes())?;
    let mono = basis_monomials(&table, n)?;

    // Discrete Fourier coefficients C_k = Σ_i ν_i π_k(λ_i) A(λ_i); the
    // n-point rule makes Σ C_k π_k the interpolant. Negligible trailing
    // terms are dropped before the monomial conversion amplifies roundoff.
    let dim = a.dim();
    let mut fourier: Vec<DMatrix<f64>> = (0..n)
        .map(|k| {
            let mut ck = DMatrix::<f64>::zeros(dim, dim);
            for (i, sample) in samples.iter().enumerate() {
                ck += sample * (gauss.rule.weights()[i] * v[(i, k)]);
            }
            ck
        })
        .collect();
    let scale = fourier.iter().map(|c| c.amax()).fold(0.0f64, f64::max);
    let floor = 64.0 * f64::EPSILON * scale.max(f64::MIN_POSITIVE);
    while fourier.len() > 1 && fourier.last().is_some_and(|c| c.amax() <= floor) {
        fourier.pop();
    }

    let mut power = vec![DMatrix::<f64>::zeros(dim, dim); fourier.len()];
    for (k, ck) in fourier.iter().enumerate() {
        for (p, target) in power.iter_mut().enumerate().take(k + 1) {
            *target += ck * mono[(k, p)];
        }
    }
    ParamMatrix::polynomial(power)
}
