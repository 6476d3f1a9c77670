//! Best approximation by finite-support functions in `L_p`.
//!
//! The approximation error `E_σ(f)_p` of a function by functions whose support
//! has measure at most `σ` is a tail integral of its decreasing rearrangement.
//! This crate computes that error and the quasinorms that describe its decay:
//! `L_p`, weak-`L_p`, Lorentz `L_{p,q}` and the approximation spaces
//! `A^α_{p,q}`, together with bounds for the K-functional of the couple
//! `(L_p, L_{p₁,∞})`. The [`theorems`] module turns the direct, inverse and
//! equivalence estimates into numeric checks with reports.
//!
//! Functions enter either as concrete [`StepFunction`]s or directly as
//! [`RearrangementProfile`]s (constant pieces plus an optional power tail).

pub mod cli;
pub mod error;
pub mod kfunc;
pub mod norms;
pub mod profile;
pub mod stepfn;
pub mod theorems;

pub use error::{Error, Result};
pub use norms::{approx_space_norm, lorentz_norm, lp_norm, weak_lorentz_norm, QuadratureSpec};
pub use profile::{NormParams, PowerTail, ProfilePiece, RearrangementProfile};
pub use stepfn::{Atom, BestApproximation, IntervalSet, SampledFunction, StepFunction};
