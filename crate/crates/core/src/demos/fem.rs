//! Piecewise-linear finite elements for `(α(s, t) u′)′ = 1` on `t ∈ [0, 1]`
//! with `u(0) = u(1) = 0` and `α(s, t) = 1 + 4 cos(πs)(t² − t)`.

use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::paramops::{ParamMatrix, ParamVector};

/// Affine map between the physical range `s ∈ [ε, 1]` and `u ∈ [-1, 1]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AffineMap {
    lo: f64,
    hi: f64,
}

impl AffineMap {
    pub fn new(lo: f64, hi: f64) -> Result<Self> {
        if !lo.is_finite() || !hi.is_finite() || lo >= hi {
            return Err(Error::Config(format!("invalid parameter range [{lo}, {hi}]")));
        }
        Ok(AffineMap { lo, hi })
    }

    pub fn to_physical(&self, u: f64) -> f64 {
        0.5 * (self.hi + self.lo) + 0.5 * (self.hi - self.lo) * u
    }

    pub fn to_unit(&self, s: f64) -> f64 {
        (2.0 * s - self.hi - self.lo) / (self.hi - self.lo)
    }
}

/// Discrete system `(K0 + cos(πs) K1) x = −load` on the interior nodes.
#[derive(Debug, Clone)]
pub struct FemProblem {
    pub n_elements: usize,
    pub h: f64,
    pub eps: f64,
    pub k0: DMatrix<f64>,
    pub k1: DMatrix<f64>,
    pub load: DVector<f64>,
    pub map: AffineMap,
}

/// `4 ∫ (t² − t) dt` over `[a, b]`.
fn element_integral(a: f64, b: f64) -> f64 {
    let anti = |t: f64| t * t * t / 3.0 - t * t / 2.0;
    4.0 * (anti(b) - anti(a))
}

pub fn assemble_fem(n_elements: usize, eps: f64) -> Result<FemProblem> {
    if n_elements < 2 {
        return Err(Error::Config("need at least two elements".into()));
    }
    if !(eps > 0.0 && eps < 1.0) {
        return Err(Error::Config(format!("eps must lie in (0, 1), got {eps}")));
    }
    let h = 1.0 / n_elements as f64;
    let dim = n_elements - 1;
    let mut k0 = DMatrix::zeros(dim, dim);
    let mut k1 = DMatrix::zeros(dim, dim);
    // Element e spans nodes e and e + 1; interior node i is unknown i - 1.
    for e in 0..n_elements {
        let ie = element_integral(e as f64 * h, (e + 1) as f64 * h) / (h * h);
        let nodes = [e, e + 1];
        for (a, &na) in nodes.iter().enumerate() {
            for (b, &nb) in nodes.iter().enumerate() {
                if na == 0 || nb == 0 || na == n_elements || nb == n_elements {
                    continue;
                }
                let sign = if a == b { 1.0 } else { -1.0 };
                k0[(na - 1, nb - 1)] += sign / h;
                k1[(na - 1, nb - 1)] += sign * ie;
            }
        }
    }
    Ok(FemProblem {
        n_elements,
        h,
        eps,
        k0,
        k1,
        load: DVector::from_element(dim, h),
        map: AffineMap::new(eps, 1.0)?,
    })
}

impl FemProblem {
    pub fn dim(&self) -> usize {
        self.k0.nrows()
    }

    /// Stiffness matrix at the physical parameter `s`.
    pub fn stiffness(&self, s: f64) -> DMatrix<f64> {
        &self.k0 + &self.k1 * (PI * s).cos()
    }

    /// `A(u)` on `[-1, 1]`, in general form.
    pub fn param_matrix(&self) -> ParamMatrix {
        let (k0, k1, map) = (self.k0.clone(), self.k1.clone(), self.map);
        ParamMatrix::general(self.dim(), true, move |u| &k0 + &k1 * (PI * map.to_physical(u)).cos())
    }

    pub fn rhs(&self) -> ParamVector {
        ParamVector::constant(-&self.load).expect("finite load")
    }
}
