//! Transfer matrices for pattern-avoiding strings, their exact
//! characteristic polynomials and Perron eigenvalues.

use serde::Serialize;
use thiserror::Error;

use crate::legal::ForbiddenPattern;
use crate::poly::IntPolynomial;

pub const DEFAULT_PERRON_TOLERANCE: f64 = 1e-12;
const PERRON_MAX_ITERATIONS: usize = 1_000_000;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum MatrixError {
    #[error("matrix is not square")]
    NotSquare,
    #[error("matrix is empty")]
    Empty,
    #[error("matrix has a negative entry")]
    NegativeEntry,
    #[error("pattern length must be at least 2, got {0}")]
    PatternTooShort(usize),
    #[error("power iteration did not converge in {0} iterations")]
    NoConvergence(usize),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TransferMatrix {
    pub entries: Vec<Vec<i64>>,
    pub state_labels: Vec<String>,
}

impl TransferMatrix {
    pub fn new(entries: Vec<Vec<i64>>) -> Result<Self, MatrixError> {
        let n = entries.len();
        if n == 0 {
            return Err(MatrixError::Empty);
        }
        if entries.iter().any(|row| row.len() != n) {
            return Err(MatrixError::NotSquare);
        }
        let state_labels = (0..n).map(|i| i.to_string()).collect();
        Ok(TransferMatrix {
            entries,
            state_labels,
        })
    }

    pub fn dim(&self) -> usize {
        self.entries.len()
    }

    pub fn row_sums(&self) -> Vec<i64> {
        self.entries.iter().map(|row| row.iter().sum()).collect()
    }

    /// `T v` in exact integers.
    pub fn apply(&self, v: &[i64]) -> Vec<i64> {
        self.entries
            .iter()
            .map(|row| row.iter().zip(v).map(|(a, b)| a * b).sum())
            .collect()
    }

    /// The companion matrix of a monic polynomial `x^n + c_{n-1} x^{n-1} + … + c_0`,
    /// given as `[c_0, …, c_{n-1}]`.
    pub fn companion(lower_coefficients: &[i64]) -> Result<Self, MatrixError> {
        let n = lower_coefficients.len();
        let mut entries = vec![vec![0; n]; n];
        for i in 1..n {
            entries[i][i - 1] = 1;
        }
        for (i, c) in lower_coefficients.iter().enumerate() {
            entries[i][n - 1] = -c;
        }
        TransferMatrix::new(entries)
    }
}

/// De Bruijn-style matrix on windows of length `|p| - 1`.
///
/// A state is the last `|p| - 1` bits with the oldest bit in the most
/// significant place; appending `b` moves `u` to `(u << 1 | b) & mask` unless
/// `u << 1 | b` spells the pattern.
pub fn build_transfer_matrix(p: &ForbiddenPattern) -> Result<TransferMatrix, MatrixError> {
    if p.len() < 2 {
        return Err(MatrixError::PatternTooShort(p.len()));
    }
    let w = p.len() - 1;
    let n = 1usize << w;
    let mask = (n - 1) as u32;
    let code = p.code();
    let mut entries = vec![vec![0i64; n]; n];
    for (u, row) in entries.iter_mut().enumerate() {
        for b in 0..2u32 {
            let full = (u as u32) << 1 | b;
            if full != code {
                row[(full & mask) as usize] = 1;
            }
        }
    }
    let state_labels = (0..n).map(|u| format!("{u:0w$b}")).collect();
    Ok(TransferMatrix {
        entries,
        state_labels,
    })
}

/// The 8×8 matrix exactly as printed in the source, states `000..111`.
pub fn paper_matrix() -> TransferMatrix {
    let rows: [[i64; 8]; 8] = [
        [1, 1, 0, 0, 0, 0, 0, 0],
        [0, 0, 1, 1, 0, 0, 0, 0],
        [0, 0, 0, 0, 1, 1, 0, 0],
        [0, 0, 0, 0, 0, 0, 1, 1],
        [1, 1, 0, 0, 0, 0, 0, 0],
        [0, 0, 1, 1, 0, 0, 0, 0],
        [0, 0, 0, 0, 0, 1, 0, 1],
        [0, 0, 0, 0, 0, 0, 1, 1],
    ];
    TransferMatrix {
        entries: rows.iter().map(|r| r.to_vec()).collect(),
        state_labels: (0..8).map(|u| format!("{u:03b}")).collect(),
    }
}

/// `x^8 - 2x^7 - x^6 + x^5 + 2x^4`, the expanded printed factorization.
pub fn paper_char_poly() -> IntPolynomial {
    IntPolynomial::new([0, 0, 0, 0, 2, 1, -1, -2, 1])
}

/// `det(xI - T)` by fraction-free (Bareiss) elimination over `Z[x]`.
pub fn char_poly_exact(t: &TransferMatrix) -> IntPolynomial {
    let n = t.dim();
    let mut m: Vec<Vec<IntPolynomial>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    let diag = if i == j {
                        IntPolynomial::x()
                    } else {
                        IntPolynomial::zero()
                    };
                    &diag - &IntPolynomial::constant(t.entries[i][j])
                })
                .collect()
        })
        .collect();
    let mut negate = false;
    let mut prev = IntPolynomial::constant(1);
    for k in 0..n.saturating_sub(1) {
        if m[k][k].is_zero() {
            match (k + 1..n).find(|&r| !m[r][k].is_zero()) {
                Some(r) => {
                    m.swap(k, r);
                    negate = !negate;
                }
                None => return IntPolynomial::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = &(&m[i][j] * &m[k][k]) - &(&m[i][k] * &m[k][j]);
                m[i][j] = num.exact_div(&prev).expect("Bareiss quotients are exact");
            }
            m[i][k] = IntPolynomial::zero();
        }
        prev = m[k][k].clone();
    }
    let det = m[n - 1][n - 1].clone();
    if negate {
        -&det
    } else {
        det
    }
}

/// Spectral radius of a non-negative matrix by power iteration on `T + I`
/// (the shift removes periodicity), started from the all-ones vector.
pub fn perron_eigenvalue(t: &TransferMatrix, tol: f64) -> Result<f64, MatrixError> {
    if t.entries.iter().flatten().any(|&a| a < 0) {
        return Err(MatrixError::NegativeEntry);
    }
    let n = t.dim();
    let a: Vec<Vec<f64>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| t.entries[i][j] as f64 + (i == j) as u8 as f64)
                .collect()
        })
        .collect();
    let mut v = vec![1.0 / (n as f64).sqrt(); n];
    let mut estimate = f64::NAN;
    for _ in 0..PERRON_MAX_ITERATIONS {
        let w: Vec<f64> = a
            .iter()
            .map(|row| row.iter().zip(&v).map(|(x, y)| x * y).sum())
            .collect();
        let norm = w.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm == 0.0 {
            return Ok(0.0);
        }
        let next = norm;
        v = w.into_iter().map(|x| x / norm).collect();
        if (next - estimate).abs() <= tol * next.max(1.0) {
            return Ok(next - 1.0);
        }
        estimate = next;
    }
    Err(MatrixError::NoConvergence(PERRON_MAX_ITERATIONS))
}

/// Matrix summary emitted by the CLI.
#[derive(Clone, Debug, Serialize)]
pub struct MatrixReport {
    pub source: String,
    pub entries: Vec<Vec<i64>>,
    pub state_labels: Vec<String>,
    pub row_sums: Vec<i64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub char_poly: Option<CharPolyReport>,
    #[serde(
        skip_serializing_if = "Option::is_none",
        serialize_with = "crate::output::opt_f64_as_f17"
    )]
    pub perron: Option<f64>,
}

#[derive(Clone, Debug, Serialize)]
pub struct CharPolyReport {
    pub text: String,
    /// Lowest degree first.
    pub coefficients: Vec<String>,
    pub reference_text: String,
    pub matches_reference: bool,
    pub max_coefficient_difference: String,
}

pub fn char_poly_report(t: &TransferMatrix) -> CharPolyReport {
    let q = char_poly_exact(t);
    let reference = paper_char_poly();
    CharPolyReport {
        text: q.to_string(),
        coefficients: q.coefficient_strings(),
        reference_text: reference.to_string(),
        matches_reference: q == reference,
        max_coefficient_difference: q.max_coefficient_distance(&reference).to_string(),
    }
}
