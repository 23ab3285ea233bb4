//! Symmetric tridiagonal eigenproblems and determinants.

use alloc::vec::Vec;
use num_traits::Float;

use crate::{Error, Result};

const MAX_SWEEPS: usize = 60;

/// Eigenvalues (ascending) of the symmetric tridiagonal matrix with
/// diagonal `diag` and off-diagonal `off` (`off.len() == diag.len() - 1`),
/// together with the squared first components of the unit eigenvectors.
///
/// Implicit QL with Wilkinson-type shifts. Only the first row of the
/// eigenvector matrix is accumulated, so the cost is `O(n^2)`.
pub fn eigen_first_components(diag: &[f64], off: &[f64]) -> Result<(Vec<f64>, Vec<f64>)> {
    let (values, first) = implicit_ql(diag, off, true)?;
    let mut pairs: Vec<(f64, f64)> = values.into_iter().zip(first).collect();
    pairs.sort_by(|x, y| x.0.total_cmp(&y.0));
    Ok(pairs.into_iter().map(|(l, z)| (l, z * z)).unzip())
}

/// Eigenvalues only, ascending.
pub fn eigenvalues(diag: &[f64], off: &[f64]) -> Result<Vec<f64>> {
    let (mut values, _) = implicit_ql(diag, off, false)?;
    values.sort_by(f64::total_cmp);
    Ok(values)
}

fn implicit_ql(diag: &[f64], off: &[f64], track: bool) -> Result<(Vec<f64>, Vec<f64>)> {
    let n = diag.len();
    if n == 0 {
        return Ok((Vec::new(), Vec::new()));
    }
    assert_eq!(off.len() + 1, n, "off-diagonal must have length n - 1");
    let mut d = diag.to_vec();
    let mut e = Vec::with_capacity(n);
    e.extend_from_slice(off);
    e.push(0.0);
    let mut z = alloc::vec![0.0; if track { n } else { 0 }];
    if track {
        z[0] = 1.0;
    }

    for l in 0..n {
        let mut sweeps = 0;
        loop {
            let mut m = l;
            while m + 1 < n {
                let dd = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= f64::EPSILON * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            sweeps += 1;
            if sweeps > MAX_SWEEPS {
                return Err(Error::NoConvergence(l));
            }
            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = g.hypot(1.0);
            g = d[m] - d[l] + e[l] / (g + r.copysign(g));
            let (mut s, mut c, mut p) = (1.0, 1.0, 0.0);
            let mut deflated = false;
            let mut i = m;
            while i > l {
                i -= 1;
                let f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == 0.0 {
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    deflated = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
                if track {
                    let f = z[i + 1];
                    z[i + 1] = s * z[i] + c * f;
                    z[i] = c * z[i] - s * f;
                }
            }
            if deflated {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }
    Ok((d, z))
}

/// `det(shift * I + sign * T)` by the continuant recurrence, with `T` the
/// tridiagonal matrix `(diag, off)`.
pub fn shifted_determinant(diag: &[f64], off: &[f64], shift: f64, sign: f64) -> f64 {
    let mut prev = 1.0;
    let mut cur = 1.0;
    for (k, &b) in diag.iter().enumerate() {
        let next = if k == 0 {
            shift + sign * b
        } else {
            (shift + sign * b) * cur - off[k - 1] * off[k - 1] * prev
        };
        prev = cur;
        cur = next;
    }
    cur
}

/// Number of eigenvalues strictly below `x`, by Sturm counting on the
/// pivots of the `LDL^T` factorization of `T - x I`.
pub fn count_below(diag: &[f64], off: &[f64], x: f64) -> usize {
    let mut count = 0;
    let mut d = 1.0;
    for (k, &b) in diag.iter().enumerate() {
        let coupling = if k == 0 {
            0.0
        } else {
            off[k - 1] * off[k - 1] / d
        };
        d = b - x - coupling;
        if d == 0.0 {
            d = -f64::EPSILON * (b.abs() + x.abs()).max(f64::MIN_POSITIVE);
        }
        if d < 0.0 {
            count += 1;
        }
    }
    count
}
