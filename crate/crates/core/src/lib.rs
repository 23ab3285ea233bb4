//! Sum rules for Jacobi matrices and the classical beta ensembles.
//!
//! The crate evaluates both sides of the Hermite (semicircle), Laguerre
//! (Marchenko-Pastur) and Jacobi (Kesten-McKay) sum rules:
//!
//! * the *coefficient side*, a sum over recursion data (Jacobi
//!   coefficients, the z-chain of a half-line measure, or Verblunsky
//!   coefficients of a measure on an interval);
//! * the *spectral side*, the reverse Kullback-Leibler divergence of the
//!   equilibrium law with respect to the measure plus the outlier rate
//!   functions summed over the atoms outside the equilibrium support.
//!
//! Alongside the two sides it provides the tridiagonal beta-ensemble
//! samplers whose large deviations produce the identities, and small
//! Monte Carlo probes of those large deviations.
//!
//! The crate is `no_std` and only needs `alloc`. File formats, the CLI and
//! everything else touching IO live in the companion `sumrule` crate.
//!
//! ```
//! use sumrule_core::jacobi::{reference_coefficients, JacobiCoefficients};
//! use sumrule_core::measures::ReferenceLaw;
//! use sumrule_core::sumrules::sum_side_hermite;
//!
//! let free = reference_coefficients(&ReferenceLaw::SemiCircle, 8).unwrap();
//! assert_eq!(sum_side_hermite(&free).value, 0.0);
//!
//! let kicked = JacobiCoefficients::new(vec![0.5, 0.0, 0.0], vec![1.0, 1.0]).unwrap();
//! assert!((sum_side_hermite(&kicked).value - 0.125).abs() < 1e-15);
//! ```

#![no_std]
// Whenever std is in the dependency graph the inherent float methods shadow
// `num_traits::Float`.
#![allow(unused_imports)]
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;

mod error;

pub mod ensembles;
pub mod jacobi;
pub mod ldp;
pub mod linalg;
pub mod measures;
pub mod quadrature;
pub mod stats;
pub mod sumrules;

pub use error::{Error, Result};
