//! Dense partial-pivoting factorization with a 1-norm condition estimate.

use nalgebra::{DMatrix, DVector, Dyn, PermutationSequence};

/// Why a factorization was rejected.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum FactorFailure {
    /// An exactly zero pivot.
    Singular,
    /// Reciprocal condition number below machine epsilon.
    IllConditioned(f64),
}

impl FactorFailure {
    pub fn reason(&self) -> &'static str {
        match self {
            FactorFailure::Singular => "singular",
            FactorFailure::IllConditioned(_) => "numerically singular",
        }
    }

    pub fn condition(&self) -> f64 {
        match self {
            FactorFailure::Singular => f64::INFINITY,
            FactorFailure::IllConditioned(c) => *c,
        }
    }
}

/// `P A = L U` with unit-lower `L`.
pub struct DenseLu {
    perm: PermutationSequence<Dyn>,
    lower: DMatrix<f64>,
    upper: DMatrix<f64>,
    norm1: f64,
}

impl DenseLu {
    /// Factor `a` and reject it when singular or when the estimated
    /// condition number exceeds `1 / f64::EPSILON`.
    pub fn new(a: DMatrix<f64>) -> Result<(Self, f64), FactorFailure> {
        assert!(a.is_square(), "LU of a non-square matrix");
        let norm1 = one_norm(&a);
        let (perm, lower, upper) = a.lu().unpack();
        if upper.diagonal().iter().any(|d| *d == 0.0 || !d.is_finite()) {
            return Err(FactorFailure::Singular);
        }
        let lu = DenseLu {
            perm,
            lower,
            upper,
            norm1,
        };
        let cond = lu.condition_estimate();
        if !cond.is_finite() || cond * f64::EPSILON >= 1.0 {
            return Err(FactorFailure::IllConditioned(cond));
        }
        Ok((lu, cond))
    }

    pub fn dim(&self) -> usize {
        self.upper.nrows()
    }

    pub fn solve(&self, b: &DVector<f64>) -> DVector<f64> {
        let mut x = b.clone();
        self.perm.permute_rows(&mut x);
        self.lower.solve_lower_triangular_with_diag_mut(&mut x, 1.0);
        self.upper.solve_upper_triangular_mut(&mut x);
        x
    }

    pub fn solve_transpose(&self, b: &DVector<f64>) -> DVector<f64> {
        let mut x = b.clone();
        self.upper.tr_solve_upper_triangular_mut(&mut x);
        self.lower.tr_solve_lower_triangular_mut(&mut x);
        self.perm.inv_permute_rows(&mut x);
        x
    }

    /// Hager–Higham estimate of `‖A‖₁ ‖A⁻¹‖₁`.
    pub fn condition_estimate(&self) -> f64 {
        let n = self.dim();
        if n == 0 {
            return 1.0;
        }
        let mut x = DVector::from_element(n, 1.0 / n as f64);
        let mut estimate = 0.0;
        for _ in 0..5 {
            let y = self.solve(&x);
            let y_norm = y.iter().map(|v| v.abs()).sum::<f64>();
            if y_norm <= estimate {
                break;
            }
            estimate = y_norm;
            let xi = y.map(|v| if v >= 0.0 { 1.0 } else { -1.0 });
            let z = self.solve_transpose(&xi);
            let (j, zmax) =
                z.iter().enumerate().fold(
                    (0, f64::NEG_INFINITY),
                    |acc, (i, v)| {
                        if v.abs() > acc.1 {
                            (i, v.abs())
                        } else {
                            acc
                        }
                    },
                );
            if zmax <= z.dot(&x) {
                break;
            }
            x.fill(0.0);
            x[j] = 1.0;
        }
        // Higham's alternating-sign safeguard.
        let alt = DVector::from_fn(n, |i, _| {
            let sign = if i % 2 == 0 { 1.0 } else { -1.0 };
            sign * (1.0 + i as f64 / (n.max(2) - 1) as f64)
        });
        let alt_est = 2.0 * self.solve(&alt).iter().map(|v| v.abs()).sum::<f64>() / (3.0 * n as f64);
        self.norm1 * estimate.max(alt_est)
    }
}

pub fn one_norm(a: &DMatrix<f64>) -> f64 {
    a.column_iter()
        .map(|c| c.iter().map(|v| v.abs()).sum::<f64>())
        .fold(0.0, f64::max)
}
