//! The functional `H(T) = tr V(T) - 2 sum_{k<n} log a_k` on `n x n`
//! Jacobi matrices, and its excess over the equilibrium matrix of the same size.
//!
//! Potentials: `x^2/2` (Hermite), `x/tau - (1/tau - 1) log x` (Laguerre) and,
//! for the Jacobi case in the `[-2, 2]` picture, `-k1 log(2 - x) - k2 log(2 + x)`.

use num_traits::Float;

use super::Ensemble;
use crate::jacobi::{z_decompose, JacobiCoefficients};
use crate::{Error, Result};

/// `tr V(T)` without diagonalizing: traces for Hermite, `det T` through the
/// z-chain for Laguerre, `det(2I -+ T)` from `LDL^T` pivots for Jacobi.
pub fn h_trace_potential(ensemble: &Ensemble, j: &JacobiCoefficients) -> Result<f64> {
    match *ensemble {
        Ensemble::Hermite => {
            let diag: f64 = j.b().iter().map(|b| b * b).sum();
            let off: f64 = j.a().iter().map(|a| a * a).sum();
            Ok(0.5 * diag + off)
        }
        Ensemble::Laguerre { tau } => {
            let z = z_decompose(j)?;
            let trace: f64 = j.b().iter().sum();
            let log_det: f64 = z.values().iter().step_by(2).map(|v| v.ln()).sum();
            Ok(trace / tau - (1.0 / tau - 1.0) * log_det)
        }
        Ensemble::Jacobi { kappa1, kappa2 } => {
            let minus = log_det_shifted(j, -1.0)?;
            let plus = log_det_shifted(j, 1.0)?;
            Ok(-kappa1 * minus - kappa2 * plus)
        }
    }
}

/// `log det(2I + sign T)` from the pivots of its `LDL^T` factorization.
fn log_det_shifted(j: &JacobiCoefficients, sign: f64) -> Result<f64> {
    let mut log_det = 0.0;
    let mut pivot = 1.0;
    for (k, &b) in j.b().iter().enumerate() {
        let coupling = if k == 0 {
            0.0
        } else {
            j.a()[k - 1].powi(2) / pivot
        };
        pivot = 2.0 + sign * b - coupling;
        if !(pivot > 0.0) {
            return Err(Error::Precondition(alloc::format!(
                "spectrum leaves (-2, 2): pivot {k} of 2I{}T is {pivot}",
                if sign < 0.0 { '-' } else { '+' }
            )));
        }
        log_det += pivot.ln();
    }
    Ok(log_det)
}

/// `H(T)`.
pub fn h_functional(ensemble: &Ensemble, j: &JacobiCoefficients) -> Result<f64> {
    if let Some(k) = j.a().iter().position(|&a| a <= 0.0) {
        return Err(Error::Precondition(alloc::format!(
            "a_{} must be positive",
            k + 1
        )));
    }
    let logs: f64 = j.a().iter().map(|a| a.ln()).sum();
    Ok(h_trace_potential(ensemble, j)? - 2.0 * logs)
}

/// `H` of the `n x n` truncation of the equilibrium coefficients.
pub fn h_reference(ensemble: &Ensemble, n: usize) -> Result<f64> {
    if n == 0 {
        return Err(Error::InvalidInput("size must be positive".into()));
    }
    let nf = n as f64;
    match *ensemble {
        Ensemble::Hermite => Ok(nf - 1.0),
        Ensemble::Laguerre { tau } => Ok(nf / tau + (nf - 1.0) * (1.0 - tau.ln())),
        Ensemble::Jacobi { .. } => h_functional(ensemble, &ensemble.reference_matrix(n)?),
    }
}

/// `H(T) - H(T_ref)` with `T_ref` the equilibrium matrix of the same size.
pub fn h_normalized(ensemble: &Ensemble, j: &JacobiCoefficients) -> Result<f64> {
    Ok(h_functional(ensemble, j)? - h_reference(ensemble, j.size())?)
}
