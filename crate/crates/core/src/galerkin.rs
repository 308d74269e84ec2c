//! The coupled spectral Galerkin system and its two assembly routes.
//!
//! The public layout is basis-major: the unknown vector stacks the columns
//! of the `N×n` coefficient matrix `X_g`, so block `(i, j)` of size `N×N`
//! is `⟨π_i π_j A⟩` and block `i` of the right-hand side is `⟨π_i b⟩`.
//! The Jacobi-operator route naturally produces the component-major
//! layout (stacking the columns of `X_gᵀ`); the two are related by the
//! perfect shuffle in [`component_to_basis_major`].

use nalgebra::{DMatrix, DVector};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::DenseLu;
use crate::orthopoly::{eval_basis_unchecked, recurrence_table, Family, GaussDecomposition, QuadratureRule};
use crate::paramops::{check_dims, operator_on_jacobi, rhs_on_jacobi, ParamMatrix, ParamVector};
use crate::pseudospectral::{Method, SpectralSolution};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "route", content = "quad_order", rename_all = "snake_case")]
pub enum AssemblyRoute {
    Quadrature(usize),
    JacobiOperator(usize),
}

impl AssemblyRoute {
    /// Number of Gauss points (or Jacobi matrix order) used.
    pub fn order(&self) -> usize {
        match self {
            AssemblyRoute::Quadrature(m) | AssemblyRoute::JacobiOperator(m) => *m,
        }
    }
}

#[derive(Debug, Clone)]
pub struct GalerkinSystem {
    matrix: DMatrix<f64>,
    rhs: DVector<f64>,
    n: usize,
    dim: usize,
    route: AssemblyRoute,
}

impl GalerkinSystem {
    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.matrix
    }

    pub fn rhs(&self) -> &DVector<f64> {
        &self.rhs
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn route(&self) -> AssemblyRoute {
        self.route
    }

    /// The same system in component-major layout.
    pub fn component_major(&self) -> (DMatrix<f64>, DVector<f64>) {
        (
            basis_to_component_major(&self.matrix, self.dim, self.n),
            basis_to_component_major_vec(&self.rhs, self.dim, self.n),
        )
    }

    /// Factor and solve; returns the `N×n` coefficients and the 1-norm
    /// condition estimate of the system matrix.
    pub fn solve(&self) -> Result<(DMatrix<f64>, f64)> {
        let size = self.matrix.nrows();
        let (lu, cond) = DenseLu::new(self.matrix.clone()).map_err(|f| Error::GalerkinSolve {
            dim: size,
            condition: f.condition(),
            reason: f.reason(),
        })?;
        let x = lu.solve(&self.rhs);
        Ok((DMatrix::from_column_slice(self.dim, self.n, x.as_slice()), cond))
    }
}

/// Smallest Gauss order that integrates every Galerkin integrand exactly
/// for polynomial data of degrees `m_a` and `m_b`.
pub fn exactness_order(n: usize, m_a: usize, m_b: usize) -> usize {
    assert!(n >= 1, "truncation order must be positive");
    (m_a + 2 * n - 1).div_ceil(2).max((m_b + n).div_ceil(2))
}

/// Index of `(component, degree)` in the basis-major vector.
pub fn basis_major_index(dim: usize, component: usize, degree: usize) -> usize {
    degree * dim + component
}

/// Index of `(component, degree)` in the component-major vector.
pub fn component_major_index(n: usize, component: usize, degree: usize) -> usize {
    component * n + degree
}

/// `perm[basis_major] = component_major`.
fn shuffle(dim: usize, n: usize) -> Vec<usize> {
    let mut perm = vec![0; dim * n];
    for c in 0..dim {
        for k in 0..n {
            perm[basis_major_index(dim, c, k)] = component_major_index(n, c, k);
        }
    }
    perm
}

pub fn component_to_basis_major(m: &DMatrix<f64>, dim: usize, n: usize) -> DMatrix<f64> {
    let p = shuffle(dim, n);
    DMatrix::from_fn(dim * n, dim * n, |i, j| m[(p[i], p[j])])
}

pub fn basis_to_component_major(m: &DMatrix<f64>, dim: usize, n: usize) -> DMatrix<f64> {
    let p = shuffle(dim, n);
    let mut out = DMatrix::zeros(dim * n, dim * n);
    for i in 0..dim * n {
        for j in 0..dim * n {
            out[(p[i], p[j])] = m[(i, j)];
        }
    }
    out
}

pub fn component_to_basis_major_vec(v: &DVector<f64>, dim: usize, n: usize) -> DVector<f64> {
    let p = shuffle(dim, n);
    DVector::from_fn(dim * n, |i, _| v[p[i]])
}

pub fn basis_to_component_major_vec(v: &DVector<f64>, dim: usize, n: usize) -> DVector<f64> {
    let p = shuffle(dim, n);
    let mut out = DVector::zeros(dim * n);
    for (i, &pi) in p.iter().enumerate() {
        out[pi] = v[i];
    }
    out
}

/// Galerkin system with every integral replaced by an `m`-point Gauss sum.
/// Works for both polynomial and general forms.
pub fn assemble_quadrature(
    a: &ParamMatrix,
    b: &ParamVector,
    family: Family,
    n: usize,
    m: usize,
) -> Result<GalerkinSystem> {
    check_dims(a, b)?;
    if n == 0 || m == 0 {
        return Err(Error::Config(
            "truncation and quadrature orders must be positive".into(),
        ));
    }
    let dim = a.dim();
    let table = recurrence_table(family, n)?;
    let rule = QuadratureRule::gauss(family, m)?;
    let samples: Vec<Result<(DMatrix<f64>, DVector<f64>)>> = rule
        .nodes()
        .par_iter()
        .enumerate()
        .map(|(k, &s)| {
            let tag = |e: Error| match e {
                Error::Evaluator { s, reason } => Error::Evaluator {
                    s,
                    reason: format!("quadrature node {k}: {reason}"),
                },
                other => other,
            };
            Ok((a.eval(s).map_err(tag)?, b.eval(s).map_err(tag)?))
        })
        .collect();

    let mut matrix = DMatrix::zeros(dim * n, dim * n);
    let mut rhs = DVector::zeros(dim * n);
    for (k, sample) in samples.into_iter().enumerate() {
        let (ak, bk) = sample?;
        let (s, w) = (rule.nodes()[k], rule.weights()[k]);
        let p = eval_basis_unchecked(&table, n, s);
        for i in 0..n {
            rhs.rows_mut(i * dim, dim).axpy(w * p[i], &bk, 1.0);
            for j in 0..n {
                let scale = w * p[i] * p[j];
                let mut block = matrix.view_mut((i * dim, j * dim), (dim, dim));
                block += &ak * scale;
            }
        }
    }
    Ok(GalerkinSystem {
        matrix,
        rhs,
        n,
        dim,
        route: AssemblyRoute::Quadrature(m),
    })
}

/// Exact Galerkin system for polynomial data from leading `n×n` minors of
/// `A(i, j)(J_m)` and `b_i(J_m) e₀`, with `m` from [`exactness_order`].
pub fn assemble_jacobi(a: &ParamMatrix, b: &ParamVector, family: Family, n: usize) -> Result<GalerkinSystem> {
    check_dims(a, b)?;
    let (m_a, m_b) = match (a.degree(), b.degree()) {
        (Some(m_a), Some(m_b)) => (m_a, m_b),
        _ => return Err(Error::UnsupportedForm("assemble_jacobi")),
    };
    if n == 0 {
        return Err(Error::Config("truncation order must be positive".into()));
    }
    let dim = a.dim();
    let m = exactness_order(n, m_a, m_b);
    let gauss = GaussDecomposition::new(family, m)?;
    let full = operator_on_jacobi(a, &gauss)?;
    let full_rhs = rhs_on_jacobi(b, &gauss)?;

    let mut minors = DMatrix::zeros(dim * n, dim * n);
    let mut rhs = DVector::zeros(dim * n);
    for p in 0..dim {
        rhs.rows_mut(p * n, n).copy_from(&full_rhs.rows(p * m, n));
        for q in 0..dim {
            minors
                .view_mut((p * n, q * n), (n, n))
                .copy_from(&full.view((p * m, q * m), (n, n)));
        }
    }
    Ok(GalerkinSystem {
        matrix: component_to_basis_major(&minors, dim, n),
        rhs: component_to_basis_major_vec(&rhs, dim, n),
        n,
        dim,
        route: AssemblyRoute::JacobiOperator(m),
    })
}

#[derive(Debug, Clone, Copy, Default)]
pub struct GalerkinOptions {
    /// Force quadrature assembly with this many Gauss points.
    pub quad_order: Option<usize>,
}

impl GalerkinOptions {
    pub fn default_quad_order(n: usize) -> usize {
        2 * n + 10
    }
}

#[derive(Debug, Clone)]
pub struct GalerkinSolution {
    pub solution: SpectralSolution,
    pub route: AssemblyRoute,
    pub condition: f64,
}

/// Solve the `Nn×Nn` Galerkin system.
///
/// Polynomial data uses the exact Jacobi-operator assembly unless a
/// quadrature order is forced; anything else is assembled by quadrature
/// with `2n + 10` points by default.
pub fn galerkin_solve(
    a: &ParamMatrix,
    b: &ParamVector,
    family: Family,
    n: usize,
    options: GalerkinOptions,
) -> Result<GalerkinSolution> {
    let system = match options.quad_order {
        None if a.degree().is_some() && b.degree().is_some() => assemble_jacobi(a, b, family, n)?,
        quad => assemble_quadrature(
            a,
            b,
            family,
            n,
            quad.unwrap_or_else(|| GalerkinOptions::default_quad_order(n)),
        )?,
    };
    let (coeffs, condition) = system.solve()?;
    Ok(GalerkinSolution {
        solution: SpectralSolution::new(coeffs, family, Method::Galerkin)?,
        route: system.route(),
        condition,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pseudospectral::pseudospectral_solve;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    fn two_by_two(eps: f64) -> (ParamMatrix, ParamVector) {
        (
            ParamMatrix::polynomial(vec![
                DMatrix::from_row_slice(2, 2, &[1.0 + eps, 0.0, 0.0, 1.0]),
                DMatrix::from_row_slice(2, 2, &[0.0, 1.0, 1.0, 0.0]),
            ])
            .unwrap(),
            ParamVector::constant(DVector::from_vec(vec![2.0, 1.0])).unwrap(),
        )
    }

    #[test]
    fn exactness_order_examples() {
        assert_eq!(exactness_order(4, 1, 0), 4);
        assert_eq!(exactness_order(1, 0, 0), 1);
        assert_eq!(exactness_order(3, 2, 5), 4);
        assert_eq!(exactness_order(3, 1, 0), 3);
    }

    #[test]
    fn shuffle_round_trip() {
        let m = DMatrix::from_fn(6, 6, |i, j| (i * 6 + j) as f64);
        let there = basis_to_component_major(&m, 2, 3);
        assert_eq!(component_to_basis_major(&there, 2, 3), m);
        let v = DVector::from_fn(6, |i, _| i as f64);
        assert_eq!(
            component_to_basis_major_vec(&basis_to_component_major_vec(&v, 3, 2), 3, 2),
            v
        );
        assert_eq!(basis_major_index(3, 1, 2), 7);
        assert_eq!(component_major_index(4, 1, 2), 6);
    }

    #[test]
    fn identity_operator_gives_identity_system() {
        let a = ParamMatrix::constant(DMatrix::identity(3, 3)).unwrap();
        let b = ParamVector::constant(DVector::from_vec(vec![1.0, 2.0, 3.0])).unwrap();
        for m in 4..7 {
            let sys = assemble_quadrature(&a, &b, Family::ChebyshevFirstKind, 4, m).unwrap();
            assert_abs_diff_eq!(sys.matrix().clone(), DMatrix::identity(12, 12), epsilon = 1e-14);
        }
    }

    #[test]
    fn quadrature_matches_permuted_jacobi_operator() {
        let (a, b) = two_by_two(1.0);
        let quad = assemble_quadrature(&a, &b, Family::LegendreUniform, 2, 2).unwrap();
        let gauss = GaussDecomposition::new(Family::LegendreUniform, 2).unwrap();
        let op = operator_on_jacobi(&a, &gauss).unwrap();
        assert_abs_diff_eq!(
            quad.matrix().clone(),
            component_to_basis_major(&op, 2, 2),
            epsilon = 1e-15
        );
    }

    #[test]
    fn rhs_picks_out_fourier_coefficients() {
        // b(s) = e₀ π₁(s) = e₀ √3 s.
        let a = ParamMatrix::constant(DMatrix::identity(2, 2)).unwrap();
        let b = ParamVector::polynomial(vec![DVector::zeros(2), DVector::from_vec(vec![3f64.sqrt(), 0.0])]).unwrap();
        let sys = assemble_quadrature(&a, &b, Family::LegendreUniform, 2, 2).unwrap();
        assert_abs_diff_eq!(
            sys.rhs().clone(),
            DVector::from_vec(vec![0.0, 0.0, 1.0, 0.0]),
            epsilon = 1e-15
        );
    }

    #[test]
    fn degree_zero_jacobi_blocks() {
        let a0 = DMatrix::from_row_slice(2, 2, &[3.0, -1.0, 0.5, 2.0]);
        let a = ParamMatrix::constant(a0.clone()).unwrap();
        let b = ParamVector::constant(DVector::from_vec(vec![1.0, -2.0])).unwrap();
        let n = 4;
        let sys = assemble_jacobi(&a, &b, Family::LegendreUniform, n).unwrap();
        let (cm, rhs) = sys.component_major();
        for p in 0..2 {
            for q in 0..2 {
                let expected = DMatrix::identity(n, n) * a0[(p, q)];
                assert_abs_diff_eq!(cm.view((p * n, q * n), (n, n)).clone_owned(), expected, epsilon = 1e-14);
            }
            assert_abs_diff_eq!(rhs[p * n], b.eval(0.0).unwrap()[p], epsilon = 1e-14);
            assert_abs_diff_eq!(rhs.rows(p * n + 1, n - 1).amax(), 0.0, epsilon = 1e-14);
        }
        let quad = assemble_quadrature(&a, &b, Family::LegendreUniform, n, n).unwrap();
        assert_abs_diff_eq!(sys.matrix().clone(), quad.matrix().clone(), epsilon = 1e-14);
    }

    #[test]
    fn two_by_two_routes_agree() {
        let (a, b) = two_by_two(1.0);
        let jac = assemble_jacobi(&a, &b, Family::LegendreUniform, 3).unwrap();
        assert_eq!(jac.route(), AssemblyRoute::JacobiOperator(3));
        let quad = assemble_quadrature(&a, &b, Family::LegendreUniform, 3, exactness_order(3, 1, 0)).unwrap();
        assert_abs_diff_eq!(jac.matrix().clone(), quad.matrix().clone(), epsilon = 1e-12);
        assert_abs_diff_eq!(jac.rhs().clone(), quad.rhs().clone(), epsilon = 1e-12);
    }

    #[test]
    fn general_form_rejected_by_jacobi_route() {
        let a = ParamMatrix::general(1, true, |s| DMatrix::from_element(1, 1, 2.0 + s.sin()));
        let b = ParamVector::constant(DVector::from_element(1, 1.0)).unwrap();
        assert!(matches!(
            assemble_jacobi(&a, &b, Family::LegendreUniform, 2),
            Err(Error::UnsupportedForm(_))
        ));
    }

    #[test]
    fn constant_problem() {
        let a0 = DMatrix::from_row_slice(2, 2, &[4.0, 1.0, 2.0, 3.0]);
        let b0 = DVector::from_vec(vec![1.0, 1.0]);
        let a = ParamMatrix::constant(a0.clone()).unwrap();
        let b = ParamVector::constant(b0.clone()).unwrap();
        let sol = galerkin_solve(&a, &b, Family::LegendreUniform, 5, GalerkinOptions::default()).unwrap();
        let x = a0.lu().solve(&b0).unwrap();
        assert_abs_diff_eq!(sol.solution.coeffs().column(0).into_owned(), x, epsilon = 1e-14);
        assert_abs_diff_eq!(sol.solution.coeffs().columns(1, 4).amax(), 0.0, epsilon = 1e-14);
        assert_eq!(sol.solution.method(), Method::Galerkin);
    }

    #[test]
    fn single_term_is_mean_system() {
        // ⟨A⟩ x = ⟨b⟩ for A(s) = 2 + s², b(s) = 1 + s: ⟨A⟩ = 7/3, ⟨b⟩ = 1.
        let a = ParamMatrix::polynomial(vec![
            DMatrix::from_element(1, 1, 2.0),
            DMatrix::zeros(1, 1),
            DMatrix::from_element(1, 1, 1.0),
        ])
        .unwrap();
        let b = ParamVector::polynomial(vec![DVector::from_element(1, 1.0), DVector::from_element(1, 1.0)]).unwrap();
        let sol = galerkin_solve(&a, &b, Family::LegendreUniform, 1, GalerkinOptions::default()).unwrap();
        assert_abs_diff_eq!(sol.solution.coeffs()[(0, 0)], 3.0 / 7.0, epsilon = 1e-15);
    }

    #[test]
    fn equals_pseudospectral_for_linear_operator() {
        let (a, b) = two_by_two(1.0);
        for n in 1..=8 {
            let g = galerkin_solve(&a, &b, Family::LegendreUniform, n, GalerkinOptions::default()).unwrap();
            let p = pseudospectral_solve(&a, &b, Family::LegendreUniform, n).unwrap();
            assert_abs_diff_eq!(g.solution.coeffs().clone(), p.coeffs().clone(), epsilon = 1e-10);
        }
    }

    #[test]
    fn forced_quadrature_route() {
        let (a, b) = two_by_two(0.5);
        let opts = GalerkinOptions { quad_order: Some(9) };
        let sol = galerkin_solve(&a, &b, Family::LegendreUniform, 4, opts).unwrap();
        assert_eq!(sol.route, AssemblyRoute::Quadrature(9));
        let exact = galerkin_solve(&a, &b, Family::LegendreUniform, 4, GalerkinOptions::default()).unwrap();
        assert!(matches!(exact.route, AssemblyRoute::JacobiOperator(4)));
        assert_abs_diff_eq!(
            sol.solution.coeffs().clone(),
            exact.solution.coeffs().clone(),
            epsilon = 1e-13
        );
    }

    #[test]
    fn singular_system_is_reported() {
        // A(s) = s has ⟨A⟩ = 0, so the one-term system is singular.
        let a = ParamMatrix::polynomial(vec![DMatrix::zeros(1, 1), DMatrix::from_element(1, 1, 1.0)]).unwrap();
        let b = ParamVector::constant(DVector::from_element(1, 1.0)).unwrap();
        assert!(matches!(
            galerkin_solve(&a, &b, Family::LegendreUniform, 1, GalerkinOptions::default()),
            Err(Error::GalerkinSolve { .. })
        ));
    }

    /// Diagonally dominant on [-1, 1]: off-diagonal variation is bounded by
    /// one per entry and the diagonal carries `N + 2`.
    fn problem_strategy() -> impl Strategy<Value = (ParamMatrix, ParamVector)> {
        (1usize..=4, 0usize..=3, 0usize..=3).prop_flat_map(|(dim, m_a, m_b)| {
            (
                proptest::collection::vec(-1.0f64..1.0, dim * dim * (m_a + 1)),
                proptest::collection::vec(-1.0f64..1.0, dim * (m_b + 1)),
            )
                .prop_map(move |(ra, rb)| {
                    let mut ac: Vec<DMatrix<f64>> = ra
                        .chunks(dim * dim)
                        .map(|c| DMatrix::from_column_slice(dim, dim, c) / (m_a + 1) as f64)
                        .collect();
                    ac[0] += DMatrix::identity(dim, dim) * (dim + 2) as f64;
                    let bc = rb.chunks(dim).map(DVector::from_column_slice).collect();
                    (
                        ParamMatrix::polynomial(ac).unwrap(),
                        ParamVector::polynomial(bc).unwrap(),
                    )
                })
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        #[test]
        fn routes_agree((a, b) in problem_strategy(), n in 1usize..=8) {
            let jac = assemble_jacobi(&a, &b, Family::LegendreUniform, n).unwrap();
            let m = exactness_order(n, a.degree().unwrap(), b.degree().unwrap());
            let quad = assemble_quadrature(&a, &b, Family::LegendreUniform, n, m).unwrap();
            prop_assert!((jac.matrix() - quad.matrix()).amax() <= 1e-11);
            prop_assert!((jac.rhs() - quad.rhs()).amax() <= 1e-11);
        }

        #[test]
        fn truncations_are_principal_minors((a, b) in problem_strategy(), n in 1usize..=7) {
            let small = assemble_jacobi(&a, &b, Family::ChebyshevFirstKind, n).unwrap();
            let large = assemble_jacobi(&a, &b, Family::ChebyshevFirstKind, n + 1).unwrap();
            let k = small.matrix().nrows();
            prop_assert!((small.matrix() - large.matrix().view((0, 0), (k, k))).amax() <= 1e-12);
            prop_assert!((small.rhs() - large.rhs().rows(0, k)).amax() <= 1e-12);
        }

        #[test]
        fn residual_is_orthogonal_to_basis((a, b) in problem_strategy(), n in 1usize..=8) {
            let sol = galerkin_solve(&a, &b, Family::LegendreUniform, n, GalerkinOptions::default()).unwrap().solution;
            let m_a = a.degree().unwrap();
            let m_b = b.degree().unwrap();
            let rule = QuadratureRule::gauss(Family::LegendreUniform, 2 * n + m_a.max(m_b)).unwrap();
            let table = recurrence_table(Family::LegendreUniform, n).unwrap();
            let mut moments = DMatrix::<f64>::zeros(a.dim(), n);
            for (s, w) in rule.iter() {
                let r = a.eval(s).unwrap() * sol.eval(s) - b.eval(s).unwrap();
                let p = eval_basis_unchecked(&table, n, s);
                moments += r * p.transpose() * w;
            }
            prop_assert!(moments.amax() <= 1e-10);
        }

        #[test]
        fn linear_operators_match_pseudospectral((a, b) in problem_strategy(), n in 1usize..=8) {
            prop_assume!(a.degree().unwrap() <= 1 && b.degree().unwrap() <= n);
            let g = galerkin_solve(&a, &b, Family::LegendreUniform, n, GalerkinOptions::default()).unwrap();
            let p = pseudospectral_solve(&a, &b, Family::LegendreUniform, n).unwrap();
            prop_assert!((g.solution.coeffs() - p.coeffs()).amax() <= 1e-10);
        }
    }
}
