//! Problem files: polynomial `A(s)` and `b(s)` as JSON.
//!
//! ```json
//! { "N": 2, "basis": "legendre",
//!   "A": [ {"degree": 0, "matrix": [[2, 0], [0, 1]]},
//!          {"degree": 1, "matrix": [[0, 1], [1, 0]]} ],
//!   "b": [ {"degree": 0, "vector": [2, 1]} ] }
//! ```
//!
//! Degrees must be unique within `A` and within `b`; absent degrees are
//! zero. Matrices are row-major.

use std::collections::BTreeMap;

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::orthopoly::Family;
use crate::paramops::{ParamMatrix, ParamVector};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemFile {
    #[serde(rename = "N")]
    pub dim: usize,
    pub basis: Family,
    #[serde(rename = "A")]
    pub a: Vec<MatrixTerm>,
    pub b: Vec<VectorTerm>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MatrixTerm {
    pub degree: usize,
    pub matrix: Vec<Vec<f64>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VectorTerm {
    pub degree: usize,
    pub vector: Vec<f64>,
}

#[derive(Debug, Clone)]
pub struct Problem {
    pub family: Family,
    pub a: ParamMatrix,
    pub b: ParamVector,
}

/// Parse and validate. Syntax errors report line and column; shape errors
/// name the offending field.
pub fn parse_problem(text: &str) -> Result<Problem> {
    let file: ProblemFile = serde_json::from_str(text).map_err(|e| Error::Input(e.to_string()))?;
    file.into_problem()
}

fn unique_degrees<'a>(field: &str, degrees: impl Iterator<Item = &'a usize>) -> Result<usize> {
    let mut seen = BTreeMap::new();
    for (i, &d) in degrees.enumerate() {
        if let Some(prev) = seen.insert(d, i) {
            return Err(Error::Input(format!(
                "{field}[{i}].degree: degree {d} already given by {field}[{prev}]"
            )));
        }
    }
    seen.keys()
        .next_back()
        .copied()
        .ok_or_else(|| Error::Input(format!("{field}: at least one term required")))
}

impl ProblemFile {
    pub fn into_problem(self) -> Result<Problem> {
        let n = self.dim;
        if n == 0 {
            return Err(Error::Input("N: must be at least 1".into()));
        }
        let top_a = unique_degrees("A", self.a.iter().map(|t| &t.degree))?;
        let top_b = unique_degrees("b", self.b.iter().map(|t| &t.degree))?;

        let mut ac = vec![DMatrix::zeros(n, n); top_a + 1];
        for (i, term) in self.a.iter().enumerate() {
            if term.matrix.len() != n {
                return Err(Error::Input(format!(
                    "A[{i}].matrix: expected {n} rows, found {}",
                    term.matrix.len()
                )));
            }
            for (r, row) in term.matrix.iter().enumerate() {
                if row.len() != n {
                    return Err(Error::Input(format!(
                        "A[{i}].matrix[{r}]: expected {n} entries, found {}",
                        row.len()
                    )));
                }
            }
            ac[term.degree] = DMatrix::from_fn(n, n, |r, c| term.matrix[r][c]);
        }
        let mut bc = vec![DVector::zeros(n); top_b + 1];
        for (i, term) in self.b.iter().enumerate() {
            if term.vector.len() != n {
                return Err(Error::Input(format!(
                    "b[{i}].vector: expected {n} entries, found {}",
                    term.vector.len()
                )));
            }
            bc[term.degree] = DVector::from_column_slice(&term.vector);
        }
        Ok(Problem {
            family: self.basis,
            a: ParamMatrix::polynomial(ac).map_err(|e| Error::Input(format!("A: {e}")))?,
            b: ParamVector::polynomial(bc).map_err(|e| Error::Input(format!("b: {e}")))?,
        })
    }

    /// File form of polynomial data.
    pub fn from_parts(family: Family, a: &ParamMatrix, b: &ParamVector) -> Result<Self> {
        let (ac, bc) = match (a.coefficients(), b.coefficients()) {
            (Some(ac), Some(bc)) => (ac, bc),
            _ => return Err(Error::UnsupportedForm("problem files")),
        };
        Ok(ProblemFile {
            dim: a.dim(),
            basis: family,
            a: ac
                .iter()
                .enumerate()
                .map(|(degree, m)| MatrixTerm {
                    degree,
                    matrix: m.row_iter().map(|r| r.iter().copied().collect()).collect(),
                })
                .collect(),
            b: bc
                .iter()
                .enumerate()
                .map(|(degree, v)| VectorTerm {
                    degree,
                    vector: v.iter().copied().collect(),
                })
                .collect(),
        })
    }
}
