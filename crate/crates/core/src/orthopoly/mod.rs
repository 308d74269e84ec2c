//! Orthonormal polynomial families, their Jacobi matrices, and Gauss rules.
//!
//! Every weight is normalized to unit mass on `[-1, 1]`: the Legendre
//! family uses `w(s) = 1/2` and the Chebyshev family uses
//! `w(s) = 1 / (π √(1 - s²))`. The bracket `⟨f⟩` is therefore an
//! expectation and `⟨1⟩ = 1`.

mod tridiag;

use std::fmt;
use std::str::FromStr;

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use tridiag::{symmetric_tridiagonal_eigen, symmetric_tridiagonal_eigen_first_row, TridiagEigen};

/// Built-in orthonormal families.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Family {
    #[serde(rename = "legendre")]
    LegendreUniform,
    #[serde(rename = "chebyshev")]
    ChebyshevFirstKind,
}

impl Family {
    pub fn name(&self) -> &'static str {
        match self {
            Family::LegendreUniform => "legendre",
            Family::ChebyshevFirstKind => "chebyshev",
        }
    }

    /// Moment `⟨s^k⟩` of the normalized weight.
    pub fn moment(&self, k: usize) -> f64 {
        if k % 2 == 1 {
            return 0.0;
        }
        match self {
            Family::LegendreUniform => 1.0 / (k + 1) as f64,
            // (k-1)!! / k!!
            Family::ChebyshevFirstKind => (1..=k / 2).fold(1.0, |acc, j| acc * (2 * j - 1) as f64 / (2 * j) as f64),
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "legendre" => Ok(Family::LegendreUniform),
            "chebyshev" => Ok(Family::ChebyshevFirstKind),
            other => Err(Error::Config(format!(
                "unsupported basis family `{other}` (expected `legendre` or `chebyshev`)"
            ))),
        }
    }
}

/// Three-term recurrence coefficients
/// `β_{k+1} π_{k+1}(s) = (s - α_k) π_k(s) - β_k π_{k-1}(s)`.
///
/// A table of length `c` stores `α_0..α_{c-1}` and `β_0..β_{c-1}`, with
/// `β_0` unused and set to zero. That is enough to build `J_c` and to
/// evaluate `π_0..π_{c-1}`.
#[derive(Debug, Clone, PartialEq)]
pub struct RecurrenceTable {
    family: Family,
    alpha: Vec<f64>,
    beta: Vec<f64>,
}

impl RecurrenceTable {
    pub fn family(&self) -> Family {
        self.family
    }

    pub fn alpha(&self) -> &[f64] {
        &self.alpha
    }

    pub fn beta(&self) -> &[f64] {
        &self.beta
    }

    pub fn len(&self) -> usize {
        self.alpha.len()
    }

    pub fn is_empty(&self) -> bool {
        self.alpha.is_empty()
    }

    fn require(&self, n: usize) -> Result<()> {
        if n > self.len() {
            return Err(Error::InsufficientCoefficients {
                requested: n,
                available: self.len(),
            });
        }
        if n == 0 {
            return Err(Error::Config("basis size must be at least 1".into()));
        }
        Ok(())
    }
}

/// Closed-form recurrence coefficients for `family`.
pub fn recurrence_table(family: Family, count: usize) -> Result<RecurrenceTable> {
    if count == 0 {
        return Err(Error::Config("recurrence table needs at least one coefficient".into()));
    }
    let alpha = vec![0.0; count];
    let beta = (0..count)
        .map(|k| match (family, k) {
            (_, 0) => 0.0,
            (Family::LegendreUniform, k) => {
                let k = k as f64;
                k / (4.0 * k * k - 1.0).sqrt()
            }
            (Family::ChebyshevFirstKind, 1) => std::f64::consts::FRAC_1_SQRT_2,
            (Family::ChebyshevFirstKind, _) => 0.5,
        })
        .collect();
    Ok(RecurrenceTable { family, alpha, beta })
}

/// Symmetric tridiagonal matrix of recurrence coefficients.
#[derive(Debug, Clone, PartialEq)]
pub struct JacobiMatrix {
    diag: Vec<f64>,
    offdiag: Vec<f64>,
}

impl JacobiMatrix {
    pub fn order(&self) -> usize {
        self.diag.len()
    }

    pub fn diag(&self) -> &[f64] {
        &self.diag
    }

    pub fn offdiag(&self) -> &[f64] {
        &self.offdiag
    }

    pub fn to_dense(&self) -> DMatrix<f64> {
        let n = self.order();
        let mut m = DMatrix::from_diagonal(&DVector::from_column_slice(&self.diag));
        for (i, b) in self.offdiag.iter().enumerate() {
            m[(i, i + 1)] = *b;
            m[(i + 1, i)] = *b;
        }
        debug_assert_eq!(m.nrows(), n);
        m
    }
}

pub fn jacobi_matrix(table: &RecurrenceTable, n: usize) -> Result<JacobiMatrix> {
    table.require(n)?;
    Ok(JacobiMatrix {
        diag: table.alpha[..n].to_vec(),
        offdiag: table.beta[1..n].to_vec(),
    })
}

/// Gauss nodes and weights; weights are positive and sum to one.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureRule {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl QuadratureRule {
    /// The `n`-point Gauss rule for `family`.
    pub fn gauss(family: Family, n: usize) -> Result<Self> {
        let table = recurrence_table(family, n)?;
        let j = jacobi_matrix(&table, n)?;
        let (mut nodes, first) = symmetric_tridiagonal_eigen_first_row(&j.diag, &j.offdiag)?;
        if j.diag.iter().all(|&a| a == 0.0) {
            symmetrize(&mut nodes);
        }
        let weights = first.iter().map(|q| q * q).collect();
        Ok(QuadratureRule { nodes, weights })
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn iter(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.nodes.iter().copied().zip(self.weights.iter().copied())
    }

    /// `⟨f⟩_n = Σ f(λ_i) ν_i`.
    pub fn integrate<F: FnMut(f64) -> f64>(&self, mut f: F) -> f64 {
        self.iter().map(|(x, w)| f(x) * w).sum()
    }

    pub fn try_integrate<E, F: FnMut(f64) -> Result<f64, E>>(&self, mut f: F) -> Result<f64, E> {
        self.iter().try_fold(0.0, |acc, (x, w)| Ok(acc + f(x)? * w))
    }
}

/// Free-function form of [`QuadratureRule::integrate`].
pub fn quad_integrate<F: FnMut(f64) -> f64>(rule: &QuadratureRule, f: F) -> f64 {
    rule.integrate(f)
}

/// Eigendecomposition `J_n = Q Λ Qᵀ` together with the Gauss rule it induces.
///
/// Columns of `Q` are normalized so that the first row is strictly
/// positive, hence `Q(0, i) = √ν_i`.
#[derive(Debug, Clone)]
pub struct GaussDecomposition {
    pub rule: QuadratureRule,
    pub eigenvectors: DMatrix<f64>,
}

impl GaussDecomposition {
    pub fn new(family: Family, n: usize) -> Result<Self> {
        let table = recurrence_table(family, n)?;
        gauss_rule(&jacobi_matrix(&table, n)?)
    }

    pub fn order(&self) -> usize {
        self.rule.len()
    }

    /// First row of `Q`.
    pub fn first_row(&self) -> DVector<f64> {
        self.eigenvectors.row(0).transpose()
    }

    /// `Q diag(f(λ)) Qᵀ`.
    pub fn matrix_function<F: Fn(f64) -> f64>(&self, f: F) -> DMatrix<f64> {
        let values: Vec<f64> = self.rule.nodes.iter().map(|&x| f(x)).collect();
        self.spectral_matrix(&values)
    }

    /// `Q diag(values) Qᵀ` for precomputed eigenvalue images.
    pub fn spectral_matrix(&self, values: &[f64]) -> DMatrix<f64> {
        let q = &self.eigenvectors;
        let mut scaled = q.clone();
        for (mut col, v) in scaled.column_iter_mut().zip(values) {
            col *= *v;
        }
        scaled * q.transpose()
    }

    /// `Q diag(values) Qᵀ e_0`.
    pub fn spectral_first_column(&self, values: &[f64]) -> DVector<f64> {
        let q = &self.eigenvectors;
        let coeffs = DVector::from_fn(values.len(), |i, _| values[i] * q[(0, i)]);
        q * coeffs
    }
}

/// Gauss rule from the eigendecomposition of `J_n`.
pub fn gauss_rule(j: &JacobiMatrix) -> Result<GaussDecomposition> {
    let TridiagEigen {
        mut values,
        mut vectors,
    } = symmetric_tridiagonal_eigen(&j.diag, &j.offdiag)?;
    for mut col in vectors.column_iter_mut() {
        if col[0] < 0.0 {
            col.neg_mut();
        }
    }
    if j.diag.iter().all(|&a| a == 0.0) {
        symmetrize(&mut values);
    }
    let weights = vectors.row(0).iter().map(|q| q * q).collect();
    Ok(GaussDecomposition {
        rule: QuadratureRule { nodes: values, weights },
        eigenvectors: vectors,
    })
}

/// For a symmetric weight, make the ascending node set exactly symmetric
/// about zero.
fn symmetrize(values: &mut [f64]) {
    let n = values.len();
    for i in 0..n / 2 {
        let half = 0.5 * (values[n - 1 - i] - values[i]);
        values[i] = -half;
        values[n - 1 - i] = half;
    }
    if n % 2 == 1 {
        values[n / 2] = 0.0;
    }
}

/// `[π_0(s), …, π_{n-1}(s)]` by forward recurrence.
///
/// Values for `s` outside `[-1, 1]` are computed but grow quickly and are
/// not meaningful approximations there.
pub fn eval_basis(table: &RecurrenceTable, n: usize, s: f64) -> Result<DVector<f64>> {
    table.require(n)?;
    Ok(eval_basis_unchecked(table, n, s))
}

pub(crate) fn eval_basis_unchecked(table: &RecurrenceTable, n: usize, s: f64) -> DVector<f64> {
    let mut out = DVector::zeros(n);
    out[0] = 1.0;
    if n > 1 {
        out[1] = (s - table.alpha[0]) / table.beta[1];
    }
    for k in 1..n.saturating_sub(1) {
        out[k + 1] = ((s - table.alpha[k]) * out[k] - table.beta[k] * out[k - 1]) / table.beta[k + 1];
    }
    out
}

/// `Vᵢₖ = π_k(λ_i)` for a list of points.
pub fn basis_matrix(table: &RecurrenceTable, n: usize, points: &[f64]) -> Result<DMatrix<f64>> {
    table.require(n)?;
    let mut v = DMatrix::zeros(points.len(), n);
    for (i, &s) in points.iter().enumerate() {
        v.set_row(i, &eval_basis_unchecked(table, n, s).transpose());
    }
    Ok(v)
}

/// Monomial coefficients of `π_0..π_{n-1}`; row `k` holds `π_k` in
/// ascending powers.
pub fn basis_monomials(table: &RecurrenceTable, n: usize) -> Result<DMatrix<f64>> {
    table.require(n)?;
    let mut c = DMatrix::zeros(n, n);
    c[(0, 0)] = 1.0;
    for k in 0..n - 1 {
        for p in 0..=k {
            let shifted = if p > 0 { c[(k, p - 1)] } else { 0.0 };
            let prev = if k > 0 { c[(k - 1, p)] } else { 0.0 };
            c[(k + 1, p)] = (shifted - table.alpha[k] * c[(k, p)] - table.beta[k] * prev) / table.beta[k + 1];
        }
        c[(k + 1, k + 1)] = c[(k, k)] / table.beta[k + 1];
    }
    Ok(c)
}

/// `f(J_n)`, which equals the quadrature matrix `⟨f π_i π_j⟩_n`.
pub fn matrix_function_quad<F: Fn(f64) -> f64>(table: &RecurrenceTable, n: usize, f: F) -> Result<DMatrix<f64>> {
    let decomposition = gauss_rule(&jacobi_matrix(table, n)?)?;
    Ok(decomposition.matrix_function(f))
}
