//! The two reference problems: a 2×2 system with poles near the interval
//! and a parameterized two-point boundary value problem.

pub mod fem;
pub mod ode;
pub mod two_by_two;

pub use fem::{assemble_fem, AffineMap, FemProblem};
pub use ode::{demo_ode, OdeConfig, OdeReport};
pub use two_by_two::{demo_2x2, exact_2x2, problem_2x2, TwoByTwoReport};
