//! Thomas elimination for tridiagonal systems.

use crate::error::{PricingError, Result};

/// `lower[i]` multiplies `x[i]` in row `i + 1` and `upper[i]` multiplies
/// `x[i + 1]` in row `i`; both have length `n − 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct TridiagonalSystem {
    pub lower: Vec<f64>,
    pub diag: Vec<f64>,
    pub upper: Vec<f64>,
    pub rhs: Vec<f64>,
}

/// Relative pivot threshold below which the system is declared singular.
pub const PIVOT_TOLERANCE: f64 = 1e-14;

impl TridiagonalSystem {
    pub fn new(lower: Vec<f64>, diag: Vec<f64>, upper: Vec<f64>, rhs: Vec<f64>) -> Result<Self> {
        let sys = TridiagonalSystem {
            lower,
            diag,
            upper,
            rhs,
        };
        sys.check_dims()?;
        Ok(sys)
    }

    pub fn len(&self) -> usize {
        self.diag.len()
    }

    pub fn is_empty(&self) -> bool {
        self.diag.is_empty()
    }

    fn check_dims(&self) -> Result<()> {
        let n = self.diag.len();
        let off = n.saturating_sub(1);
        if n == 0 || self.lower.len() != off || self.upper.len() != off || self.rhs.len() != n {
            return Err(PricingError::domain(
                "system",
                format!(
                    "inconsistent tridiagonal dimensions: lower {}, diag {}, upper {}, rhs {}",
                    self.lower.len(),
                    n,
                    self.upper.len(),
                    self.rhs.len()
                ),
            ));
        }
        Ok(())
    }

    /// A·x using the stored bands.
    pub fn apply(&self, x: &[f64]) -> Vec<f64> {
        let n = self.len();
        (0..n)
            .map(|i| {
                let mut v = self.diag[i] * x[i];
                if i > 0 {
                    v += self.lower[i - 1] * x[i - 1];
                }
                if i + 1 < n {
                    v += self.upper[i] * x[i + 1];
                }
                v
            })
            .collect()
    }
}

/// Solves the system in O(n) without pivoting.
pub fn solve_tridiagonal(sys: &TridiagonalSystem) -> Result<Vec<f64>> {
    sys.check_dims()?;
    let n = sys.len();
    let scale = sys
        .diag
        .iter()
        .chain(&sys.lower)
        .chain(&sys.upper)
        .fold(0.0f64, |m, v| m.max(v.abs()));
    let threshold = PIVOT_TOLERANCE * scale;

    let mut c_prime = vec![0.0; n];
    let mut x = vec![0.0; n];

    let mut pivot = sys.diag[0];
    if pivot.is_nan() || pivot.abs() <= threshold {
        return Err(PricingError::SingularMatrix { row: 0, pivot });
    }
    if n > 1 {
        c_prime[0] = sys.upper[0] / pivot;
    }
    x[0] = sys.rhs[0] / pivot;
    for i in 1..n {
        let l = sys.lower[i - 1];
        pivot = sys.diag[i] - l * c_prime[i - 1];
        if pivot.is_nan() || pivot.abs() <= threshold {
            return Err(PricingError::SingularMatrix { row: i, pivot });
        }
        if i + 1 < n {
            c_prime[i] = sys.upper[i] / pivot;
        }
        x[i] = (sys.rhs[i] - l * x[i - 1]) / pivot;
    }
    for i in (0..n - 1).rev() {
        x[i] -= c_prime[i] * x[i + 1];
    }
    Ok(x)
}
