//! Residual and error norms, geometric-rate fitting and small brute-force
//! oracles.
//!
//! Norms are the weighted `L²` norms of the chosen family,
//! `‖f‖² = ∫ fᵀf w ds`, evaluated with a Gauss rule of order `q`.

use std::io::Write;
use std::time::Instant;

use nalgebra::{DMatrix, DVector};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::orthopoly::{eval_basis, recurrence_table, Family, QuadratureRule};
use crate::paramops::{check_dims, ParamMatrix, ParamVector};
use crate::pseudospectral::SpectralSolution;

pub const FORMAT_VERSION: u32 = 1;

/// Values at or below this fraction of the series maximum are treated as
/// round-off and left out of rate fits.
pub const ROUNDOFF_FLOOR: f64 = 1e-13;

/// Gauss order used for norms at truncation `n`.
///
/// Polynomial data gets `2n + max(m_a, m_b) + 5`, which integrates `rᵀr`
/// exactly with room to spare; anything else gets `4n + 20`.
pub fn default_quad_order(n: usize, a: &ParamMatrix, b: &ParamVector) -> usize {
    match (a.degree(), b.degree()) {
        (Some(m_a), Some(m_b)) => 2 * n + m_a.max(m_b) + 5,
        _ => 4 * n + 20,
    }
}

fn rule(family: Family, q: usize) -> Result<QuadratureRule> {
    if q == 0 {
        return Err(Error::Config("quadrature order must be positive".into()));
    }
    QuadratureRule::gauss(family, q)
}

/// `‖A y − b‖` with a `q`-point rule of `y`'s family.
pub fn residual_l2(y: &SpectralSolution, a: &ParamMatrix, b: &ParamVector, q: usize) -> Result<f64> {
    check_dims(a, b)?;
    if y.dim() != a.dim() {
        return Err(Error::Dimension(format!(
            "solution has {} components, system has {}",
            y.dim(),
            a.dim()
        )));
    }
    let total = rule(y.family(), q)?.try_integrate(|s| {
        let r = a.eval(s)? * y.eval(s) - b.eval(s)?;
        Ok::<_, Error>(r.norm_squared())
    })?;
    Ok(total.max(0.0).sqrt())
}

/// `‖x − y‖` with a `q`-point rule of `y`'s family.
pub fn true_error_l2<F>(y: &SpectralSolution, exact: F, q: usize) -> Result<f64>
where
    F: Fn(f64) -> DVector<f64>,
{
    let total = rule(y.family(), q)?.try_integrate(|s| {
        let x = exact(s);
        if x.len() != y.dim() {
            return Err(Error::Dimension(format!(
                "exact solution has {} components, approximation has {}",
                x.len(),
                y.dim()
            )));
        }
        Ok((x - y.eval(s)).norm_squared())
    })?;
    Ok(total.max(0.0).sqrt())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RateFit {
    /// `ρ̂ = exp(−slope)`.
    pub rate: f64,
    pub slope: f64,
    pub intercept: f64,
    pub slope_stderr: f64,
    pub r_squared: f64,
    pub points_used: usize,
}

/// Least-squares fit of `log(value) ≈ intercept + slope·n`.
///
/// Non-positive values and values at or below [`ROUNDOFF_FLOOR`] times the
/// largest value are dropped first; at least four points must remain.
pub fn fit_geometric_rate(points: &[(usize, f64)]) -> Result<RateFit> {
    let peak = points
        .iter()
        .map(|p| p.1)
        .filter(|v| v.is_finite())
        .fold(0.0f64, f64::max);
    let floor = ROUNDOFF_FLOOR * peak;
    let kept: Vec<(f64, f64)> = points
        .iter()
        .filter(|(_, v)| v.is_finite() && *v > 0.0 && *v > floor)
        .map(|&(n, v)| (n as f64, v.ln()))
        .collect();
    let k = kept.len();
    if k < 4 {
        return Err(Error::InsufficientData(format!(
            "rate fit needs at least 4 points above the round-off floor, found {k}"
        )));
    }
    let kf = k as f64;
    let mx = kept.iter().map(|p| p.0).sum::<f64>() / kf;
    let my = kept.iter().map(|p| p.1).sum::<f64>() / kf;
    let sxx: f64 = kept.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = kept.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let syy: f64 = kept.iter().map(|p| (p.1 - my).powi(2)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let ssr: f64 = kept.iter().map(|p| (p.1 - intercept - slope * p.0).powi(2)).sum();
    Ok(RateFit {
        rate: (-slope).exp(),
        slope,
        intercept,
        slope_stderr: (ssr / (kf - 2.0) / sxx).sqrt(),
        r_squared: if syy > 0.0 { 1.0 - ssr / syy } else { 1.0 },
        points_used: k,
    })
}

/// Semi-axis sum `|a| + √(a² − 1)` of the ellipse with foci `±1` through
/// the real point `a`.
pub fn ellipse_parameter(pole: f64) -> Result<f64> {
    if !pole.is_finite() || pole.abs() <= 1.0 {
        return Err(Error::PoleInsideDomain(pole));
    }
    let a = pole.abs();
    Ok(a + (a * a - 1.0).sqrt())
}

fn det(m: &DMatrix<f64>) -> f64 {
    match m.nrows() {
        1 => m[(0, 0)],
        2 => m[(0, 0)] * m[(1, 1)] - m[(0, 1)] * m[(1, 0)],
        _ => {
            m[(0, 0)] * (m[(1, 1)] * m[(2, 2)] - m[(1, 2)] * m[(2, 1)])
                - m[(0, 1)] * (m[(1, 0)] * m[(2, 2)] - m[(1, 2)] * m[(2, 0)])
                + m[(0, 2)] * (m[(1, 0)] * m[(2, 1)] - m[(1, 1)] * m[(2, 0)])
        }
    }
}

/// Solve `A(s) x = b(s)` by determinant ratios. Only for `N ≤ 3`.
pub fn cramer_oracle(a: &ParamMatrix, b: &ParamVector, s: f64) -> Result<DVector<f64>> {
    check_dims(a, b)?;
    let dim = a.dim();
    if dim > 3 {
        return Err(Error::Config(format!("determinant oracle supports N ≤ 3, got {dim}")));
    }
    let am = a.eval(s)?;
    let bv = b.eval(s)?;
    let d = det(&am);
    let scale: f64 = am.row_iter().map(|r| r.norm()).product();
    if d == 0.0 || d.abs() <= f64::EPSILON * scale {
        return Err(Error::Singular { s });
    }
    Ok(DVector::from_fn(dim, |i, _| {
        let mut ai = am.clone();
        ai.set_column(i, &bv);
        det(&ai) / d
    }))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SingularValueBounds {
    pub min: f64,
    pub max: f64,
}

/// Smallest and largest singular values of `A(s)` over `samples`
/// Chebyshev–Lobatto points of `[-1, 1]`.
pub fn singular_value_bounds(a: &ParamMatrix, samples: usize) -> Result<SingularValueBounds> {
    if samples < 2 {
        return Err(Error::Config("need at least two sample points".into()));
    }
    let mut bounds = SingularValueBounds {
        min: f64::INFINITY,
        max: 0.0,
    };
    for k in 0..samples {
        let s = -(k as f64 * std::f64::consts::PI / (samples - 1) as f64).cos();
        let sv = a.eval(s)?.singular_values();
        bounds.min = bounds.min.min(sv.min());
        bounds.max = bounds.max.max(sv.max());
    }
    Ok(bounds)
}

/// `⟨f π_k⟩` for `k < count`, by a `q`-point rule.
pub fn fourier_coefficients<F>(f: F, family: Family, count: usize, q: usize) -> Result<Vec<f64>>
where
    F: Fn(f64) -> f64,
{
    let table = recurrence_table(family, count)?;
    let mut c = vec![0.0; count];
    for (s, w) in rule(family, q)?.iter() {
        let fs = f(s);
        for (ck, pk) in c.iter_mut().zip(eval_basis(&table, count, s)?.iter()) {
            *ck += w * fs * pk;
        }
    }
    Ok(c)
}

/// `‖f − Σ_{k<n} c_k π_k‖²` by a `q`-point rule, with the coefficients
/// themselves computed by the same rule.
pub fn projection_error_sq<F>(f: F, family: Family, n: usize, q: usize) -> Result<f64>
where
    F: Fn(f64) -> f64,
{
    let c = fourier_coefficients(&f, family, n, q)?;
    let table = recurrence_table(family, n)?;
    rule(family, q)?.try_integrate(|s| {
        let p = eval_basis(&table, n, s)?;
        let proj: f64 = c.iter().zip(p.iter()).map(|(a, b)| a * b).sum();
        Ok((f(s) - proj).powi(2))
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConvergenceEntry {
    pub n: usize,
    pub residual_l2: f64,
    pub true_error_l2: Option<f64>,
    pub quad_order: usize,
    /// Kept out of JSON so repeated runs serialize identically.
    #[serde(skip)]
    pub wall_time_ms: f64,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct ConvergenceRecord {
    label: String,
    entries: Vec<ConvergenceEntry>,
}

#[derive(Serialize)]
struct RecordJson<'a> {
    format_version: u32,
    label: &'a str,
    entries: &'a [ConvergenceEntry],
    residual_fit: Option<RateFit>,
    error_fit: Option<RateFit>,
}

impl ConvergenceRecord {
    pub fn new(label: impl Into<String>) -> Self {
        ConvergenceRecord {
            label: label.into(),
            entries: Vec::new(),
        }
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn entries(&self) -> &[ConvergenceEntry] {
        &self.entries
    }

    pub fn push(&mut self, entry: ConvergenceEntry) -> Result<()> {
        if entry.residual_l2.is_nan() || entry.residual_l2 < 0.0 {
            return Err(Error::Config(format!(
                "invalid residual {} at n = {}",
                entry.residual_l2, entry.n
            )));
        }
        if let Some(last) = self.entries.last() {
            if entry.n <= last.n {
                return Err(Error::Config(format!(
                    "entries must increase in n: {} after {}",
                    entry.n, last.n
                )));
            }
        }
        self.entries.push(entry);
        Ok(())
    }

    pub fn residuals(&self) -> Vec<(usize, f64)> {
        self.entries.iter().map(|e| (e.n, e.residual_l2)).collect()
    }

    pub fn errors(&self) -> Vec<(usize, f64)> {
        self.entries
            .iter()
            .filter_map(|e| e.true_error_l2.map(|v| (e.n, v)))
            .collect()
    }

    pub fn residual_fit(&self) -> Result<RateFit> {
        fit_geometric_rate(&self.residuals())
    }

    pub fn error_fit(&self) -> Result<RateFit> {
        fit_geometric_rate(&self.errors())
    }

    /// CSV with header `n,residual_l2,true_error_l2,wall_time_ms`; a
    /// missing true error is an empty field.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let io = |e: csv::Error| Error::Config(format!("csv output: {e}"));
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["n", "residual_l2", "true_error_l2", "wall_time_ms"])
            .map_err(io)?;
        for e in &self.entries {
            w.write_record([
                e.n.to_string(),
                format!("{:e}", e.residual_l2),
                e.true_error_l2.map(|v| format!("{v:e}")).unwrap_or_default(),
                format!("{:.3}", e.wall_time_ms),
            ])
            .map_err(io)?;
        }
        w.flush().map_err(|e| Error::Config(format!("csv output: {e}")))
    }

    /// Versioned JSON with both fits where enough data is available.
    /// Timings are left out.
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(RecordJson {
            format_version: FORMAT_VERSION,
            label: &self.label,
            entries: &self.entries,
            residual_fit: self.residual_fit().ok(),
            error_fit: self.error_fit().ok(),
        })
        .expect("record serializes")
    }
}

/// Run `solve` for each `n` and record residual (and, given `exact`, true
/// error) norms. `quad_order` overrides [`default_quad_order`].
pub fn convergence_study<S>(
    label: &str,
    a: &ParamMatrix,
    b: &ParamVector,
    ns: impl IntoIterator<Item = usize>,
    exact: Option<&dyn Fn(f64) -> DVector<f64>>,
    quad_order: Option<usize>,
    mut solve: S,
) -> Result<ConvergenceRecord>
where
    S: FnMut(usize) -> Result<SpectralSolution>,
{
    let mut record = ConvergenceRecord::new(label);
    for n in ns {
        let start = Instant::now();
        let y = solve(n)?;
        let wall_time_ms = start.elapsed().as_secs_f64() * 1e3;
        let q = quad_order.unwrap_or_else(|| default_quad_order(n, a, b));
        record.push(ConvergenceEntry {
            n,
            residual_l2: residual_l2(&y, a, b, q)?,
            true_error_l2: exact.map(|x| true_error_l2(&y, x, q)).transpose()?,
            quad_order: q,
            wall_time_ms,
        })?;
    }
    Ok(record)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pseudospectral::{pseudospectral_solve, Method};
    use approx::{assert_abs_diff_eq, assert_relative_eq};
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

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

    fn two_by_two_exact(eps: f64) -> impl Fn(f64) -> DVector<f64> {
        move |s| {
            let d = 1.0 + eps - s * s;
            DVector::from_vec(vec![(2.0 - s) / d, (1.0 + eps - 2.0 * s) / d])
        }
    }

    #[test]
    fn residual_of_manufactured_solution_vanishes() {
        // A constant, x(s) = (1 + s, s²), b = A x.
        let a0 = DMatrix::from_row_slice(2, 2, &[3.0, 1.0, 0.0, 2.0]);
        let a = ParamMatrix::constant(a0.clone()).unwrap();
        let cols = [
            DVector::from_vec(vec![1.0, 0.0]),
            DVector::from_vec(vec![1.0, 0.0]),
            DVector::from_vec(vec![0.0, 1.0]),
        ];
        let b = ParamVector::polynomial(cols.iter().map(|c| &a0 * c).collect()).unwrap();
        let y = pseudospectral_solve(&a, &b, Family::LegendreUniform, 3).unwrap();
        assert_abs_diff_eq!(residual_l2(&y, &a, &b, 11).unwrap(), 0.0, epsilon = 1e-12);
    }

    #[test]
    fn zero_solution_gives_norm_of_b() {
        let (a, b) = two_by_two(1.0);
        let zero = SpectralSolution::new(DMatrix::zeros(2, 3), Family::LegendreUniform, Method::Galerkin).unwrap();
        assert_relative_eq!(residual_l2(&zero, &a, &b, 7).unwrap(), 5f64.sqrt(), epsilon = 1e-14);
    }

    #[test]
    fn residual_decreases_with_n() {
        let (a, b) = two_by_two(1.0);
        let r = |n| {
            let y = pseudospectral_solve(&a, &b, Family::LegendreUniform, n).unwrap();
            residual_l2(&y, &a, &b, default_quad_order(n, &a, &b)).unwrap()
        };
        assert!(r(6) < r(2));
    }

    #[test]
    fn error_against_itself_is_zero() {
        let (a, b) = two_by_two(1.0);
        let y = pseudospectral_solve(&a, &b, Family::LegendreUniform, 5).unwrap();
        assert_abs_diff_eq!(true_error_l2(&y, |s| y.eval(s), 20).unwrap(), 0.0, epsilon = 1e-14);
    }

    #[test]
    fn error_and_residual_are_comparable() {
        let (a, b) = two_by_two(1.0);
        let y = pseudospectral_solve(&a, &b, Family::LegendreUniform, 8).unwrap();
        let err = true_error_l2(&y, two_by_two_exact(1.0), 60).unwrap();
        let res = residual_l2(&y, &a, &b, 60).unwrap();
        assert!(err > 0.0 && res / err < 100.0 && err / res < 100.0, "{res} vs {err}");
    }

    #[test]
    fn interpolant_error_bounded_by_norm() {
        let exact = two_by_two_exact(1.0);
        let (a, b) = two_by_two(1.0);
        let y = pseudospectral_solve(&a, &b, Family::LegendreUniform, 10).unwrap();
        let zero = SpectralSolution::new(DMatrix::zeros(2, 1), Family::LegendreUniform, Method::Galerkin).unwrap();
        let norm = true_error_l2(&zero, &exact, 40).unwrap();
        assert!(true_error_l2(&y, &exact, 40).unwrap() <= norm);
    }

    #[test]
    fn fit_exact_geometric_data() {
        let pts: Vec<_> = (1..=20).map(|n| (n, 3.0 * 2f64.powi(-(n as i32)))).collect();
        let fit = fit_geometric_rate(&pts).unwrap();
        assert_abs_diff_eq!(fit.rate, 2.0, epsilon = 1e-10);
        assert_abs_diff_eq!(fit.r_squared, 1.0, epsilon = 1e-12);
        assert_eq!(fit.points_used, 20);
    }

    #[test]
    fn fit_excludes_roundoff_plateau() {
        let pts: Vec<_> = (1..=60).map(|n| (n, 2f64.powi(-(n as i32)) + 1e-14)).collect();
        let fit = fit_geometric_rate(&pts).unwrap();
        assert!(fit.points_used < 60);
        assert_relative_eq!(fit.rate, 2.0, max_relative = 0.01);
    }

    #[test]
    fn fit_needs_four_points() {
        let pts = [(1, 0.5), (2, 0.25), (3, 0.125), (4, 0.0)];
        assert!(matches!(fit_geometric_rate(&pts), Err(Error::InsufficientData(_))));
        assert!(fit_geometric_rate(&[]).is_err());
    }

    proptest! {
        #[test]
        fn fit_is_shift_invariant(
            values in proptest::collection::vec(1e-8f64..1.0, 4..20),
            scale in 1e-6f64..1e6,
        ) {
            let pts: Vec<_> = values.iter().enumerate().map(|(i, &v)| (i + 1, v)).collect();
            let scaled: Vec<_> = pts.iter().map(|&(n, v)| (n, v * scale)).collect();
            let (f0, f1) = (fit_geometric_rate(&pts).unwrap(), fit_geometric_rate(&scaled).unwrap());
            prop_assert!((f0.rate - f1.rate).abs() <= 1e-12 * f0.rate.max(1.0));
        }
    }

    #[test]
    fn ellipse_parameter_examples() {
        assert_abs_diff_eq!(
            ellipse_parameter(2f64.sqrt()).unwrap(),
            2f64.sqrt() + 1.0,
            epsilon = 1e-15
        );
        assert_abs_diff_eq!(ellipse_parameter(1.25).unwrap(), 2.0, epsilon = 1e-15);
        assert_abs_diff_eq!(ellipse_parameter(-1.25).unwrap(), 2.0, epsilon = 1e-15);
        assert_abs_diff_eq!(ellipse_parameter(1.0 + 1e-12).unwrap(), 1.0, epsilon = 1e-5);
        assert!(matches!(ellipse_parameter(0.3), Err(Error::PoleInsideDomain(_))));
        assert!(ellipse_parameter(1.0).is_err());
        assert!(ellipse_parameter(f64::NAN).is_err());
    }

    #[test]
    fn cramer_examples() {
        let (a, b) = two_by_two(1.0);
        assert_abs_diff_eq!(
            cramer_oracle(&a, &b, 0.0).unwrap(),
            DVector::from_vec(vec![1.0, 1.0]),
            epsilon = 1e-15
        );

        let id = ParamMatrix::constant(DMatrix::identity(3, 3)).unwrap();
        let bv = ParamVector::polynomial(vec![
            DVector::from_vec(vec![1.0, 2.0, 3.0]),
            DVector::from_vec(vec![0.0, 1.0, 0.0]),
        ])
        .unwrap();
        assert_eq!(cramer_oracle(&id, &bv, 0.5).unwrap(), bv.eval(0.5).unwrap());

        let sing = ParamMatrix::polynomial(vec![DMatrix::zeros(1, 1), DMatrix::from_element(1, 1, 1.0)]).unwrap();
        let one = ParamVector::constant(DVector::from_element(1, 1.0)).unwrap();
        assert!(matches!(cramer_oracle(&sing, &one, 0.0), Err(Error::Singular { .. })));

        let big = ParamMatrix::constant(DMatrix::identity(4, 4)).unwrap();
        let b4 = ParamVector::constant(DVector::zeros(4)).unwrap();
        assert!(cramer_oracle(&big, &b4, 0.0).is_err());
    }

    #[test]
    fn cramer_matches_factorization() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for dim in [2, 3] {
            let a = ParamMatrix::polynomial(
                (0..3)
                    .map(|k| {
                        let r = DMatrix::from_fn(dim, dim, |_, _| rng.gen_range(-1.0..1.0));
                        if k == 0 {
                            r + DMatrix::identity(dim, dim) * 4.0
                        } else {
                            r
                        }
                    })
                    .collect(),
            )
            .unwrap();
            let b = ParamVector::polynomial(vec![DVector::from_fn(dim, |_, _| rng.gen_range(-1.0..1.0)); 2]).unwrap();
            for _ in 0..20 {
                let s = rng.gen_range(-1.0..1.0);
                let x = a.eval(s).unwrap().lu().solve(&b.eval(s).unwrap()).unwrap();
                assert_abs_diff_eq!(cramer_oracle(&a, &b, s).unwrap(), x, epsilon = 1e-12);
            }
        }
    }

    #[test]
    fn singular_values_of_two_by_two() {
        // Eigenvalues of [[1+ε, s], [s, 1]] are 1 + ε/2 ± √(ε²/4 + s²).
        let (a, _) = two_by_two(1.0);
        let sv = singular_value_bounds(&a, 50).unwrap();
        assert_abs_diff_eq!(sv.max, 1.5 + 1.25f64.sqrt(), epsilon = 1e-12);
        assert_abs_diff_eq!(sv.min, 1.5 - 1.25f64.sqrt(), epsilon = 1e-12);
    }

    #[test]
    fn truncation_error_equals_tail_sum() {
        let f = |s: f64| 1.0 / (2.0 + s);
        for family in [Family::LegendreUniform, Family::ChebyshevFirstKind] {
            let c = fourier_coefficients(f, family, 61, 80).unwrap();
            for n in 2..=10 {
                let tail: f64 = c[n..].iter().map(|v| v * v).sum();
                let direct = projection_error_sq(f, family, n, 80).unwrap();
                assert_abs_diff_eq!(direct, tail, epsilon = 1e-9);
            }
        }
    }

    #[test]
    fn record_rejects_non_increasing_n() {
        let mut rec = ConvergenceRecord::new("t");
        let e = |n| ConvergenceEntry {
            n,
            residual_l2: 1.0,
            true_error_l2: None,
            quad_order: 5,
            wall_time_ms: 0.0,
        };
        rec.push(e(2)).unwrap();
        assert!(rec.push(e(2)).is_err());
        assert!(rec.push(e(1)).is_err());
        let mut bad = e(3);
        bad.residual_l2 = -1.0;
        assert!(rec.push(bad).is_err());
    }

    #[test]
    fn record_serialization() {
        let (a, b) = two_by_two(1.0);
        let exact = two_by_two_exact(1.0);
        let rec = convergence_study("2x2", &a, &b, 1..=8, Some(&exact), None, |n| {
            pseudospectral_solve(&a, &b, Family::LegendreUniform, n)
        })
        .unwrap();
        let mut buf = Vec::new();
        rec.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let mut lines = text.lines();
        assert_eq!(lines.next(), Some("n,residual_l2,true_error_l2,wall_time_ms"));
        assert_eq!(lines.count(), 8);
        let json = rec.to_json();
        assert_eq!(json["format_version"], 1);
        assert_eq!(json["entries"].as_array().unwrap().len(), 8);
        assert!(json["entries"][0].get("wall_time_ms").is_none());
        assert!(json["error_fit"]["rate"].as_f64().unwrap() > 2.0);
        assert_eq!(rec.entries()[3].quad_order, default_quad_order(4, &a, &b));
    }
}
