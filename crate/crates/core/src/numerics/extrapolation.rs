//! Polynomial (Richardson-type) extrapolation of regulated quantities to
//! vanishing regulator.

use num_complex::Complex64;

use crate::error::{invalid, Result};

/// Outcome of a regulator-to-zero extrapolation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LimitEstimate {
    pub value: Complex64,
    /// Difference between the two highest-order estimates.
    pub error: f64,
    /// False when successive orders disagree beyond tolerance, which is the
    /// signature of a distribution-valued limit.
    pub converged: bool,
}

/// Neville table evaluated at x = 0. Entry `j` of the result is the
/// order-`j` estimate built from the `j + 1` samples with smallest |x|;
/// samples must be ordered by decreasing |x|.
pub fn neville_to_zero(xs: &[f64], ys: &[Complex64]) -> Result<Vec<Complex64>> {
    if xs.len() != ys.len() || xs.is_empty() {
        return Err(invalid("extrapolation needs matching, non-empty samples"));
    }
    let n = xs.len();
    let mut cur: Vec<Complex64> = ys.to_vec();
    let mut out = vec![cur[n - 1]];
    for j in 1..n {
        let mut next = Vec::with_capacity(n - j);
        for i in 0..n - j {
            let (xi, xj) = (xs[i], xs[i + j]);
            if xi == xj {
                return Err(invalid("duplicate abscissae in extrapolation"));
            }
            next.push((cur[i] * xj - cur[i + 1] * xi) / (xj - xi));
        }
        cur = next;
        out.push(cur[cur.len() - 1]);
    }
    Ok(out)
}

/// Extrapolate samples of a regulated quantity to zero regulator.
/// Convergence is judged against `tol` times the larger of the estimate and
/// a small fraction of the sample scale, so that a vanishing limit can still
/// count as converged.
pub fn extrapolate_to_zero(xs: &[f64], ys: &[Complex64], tol: f64) -> Result<LimitEstimate> {
    let est = neville_to_zero(xs, ys)?;
    let value = est[est.len() - 1];
    let error = if est.len() > 1 { (value - est[est.len() - 2]).norm() } else { f64::INFINITY };
    let scale = ys.iter().map(|y| y.norm()).fold(0.0, f64::max);
    let converged = error.is_finite() && error <= tol * value.norm().max(1e-6 * scale);
    Ok(LimitEstimate { value, error, converged })
}
