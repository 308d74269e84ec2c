#![allow(dead_code)]

use nalgebra::{DMatrix, DVector};
use parmat::{Family, ParamMatrix, ParamVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[derive(Debug, Clone)]
pub struct RandomProblem {
    pub a: ParamMatrix,
    pub b: ParamVector,
    pub family: Family,
    pub m_a: usize,
    pub m_b: usize,
}

impl RandomProblem {
    pub fn dim(&self) -> usize {
        self.a.dim()
    }
}

/// `A(s) = (N + 2) I + Σ R_k s^k` with `R_k` uniform in `[-1, 1] / (m_a + 1)`,
/// so every `A(s)` on `[-1, 1]` is strictly diagonally dominant. Coefficients
/// of `b` are uniform in `[-1, 1]`; the top ones are kept away from zero so
/// the degrees are exact.
pub fn random_problem(rng: &mut impl Rng, max_dim: usize, max_m_a: usize, max_m_b: usize) -> RandomProblem {
    let dim = rng.gen_range(1..=max_dim);
    let m_a = rng.gen_range(0..=max_m_a);
    let m_b = rng.gen_range(0..=max_m_b);
    let scale = 1.0 / (m_a + 1) as f64;
    let mut ac: Vec<DMatrix<f64>> = (0..=m_a)
        .map(|_| DMatrix::from_fn(dim, dim, |_, _| rng.gen_range(-1.0..1.0) * scale))
        .collect();
    ac[0] += DMatrix::identity(dim, dim) * (dim + 2) as f64;
    if m_a > 0 {
        ac[m_a][(0, 0)] = 0.5 * scale;
    }
    let mut bc: Vec<DVector<f64>> = (0..=m_b)
        .map(|_| DVector::from_fn(dim, |_, _| rng.gen_range(-1.0..1.0)))
        .collect();
    bc[m_b][0] = 1.0;
    let family = if rng.gen_bool(0.5) {
        Family::LegendreUniform
    } else {
        Family::ChebyshevFirstKind
    };
    RandomProblem {
        a: ParamMatrix::polynomial(ac).unwrap(),
        b: ParamVector::polynomial(bc).unwrap(),
        family,
        m_a,
        m_b,
    }
}

pub fn random_problems(seed: u64, count: usize, max_dim: usize, max_m_a: usize, max_m_b: usize) -> Vec<RandomProblem> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| random_problem(&mut rng, max_dim, max_m_a, max_m_b))
        .collect()
}

pub fn problem_from_seed(seed: u64, max_dim: usize, max_m_a: usize, max_m_b: usize) -> RandomProblem {
    random_problems(seed, 1, max_dim, max_m_a, max_m_b).remove(0)
}

/// `count` equally spaced points covering `[-1, 1]`.
pub fn uniform_points(count: usize) -> Vec<f64> {
    (0..count).map(|k| -1.0 + 2.0 * k as f64 / (count - 1) as f64).collect()
}
