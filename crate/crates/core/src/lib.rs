//! Jacobi theta and Weierstrass sigma evaluation, plus a verifier for
//! functional equations between quasi-periodic entire functions.
//!
//! The verifier follows the argument-principle recipe: infer the
//! quasi-periodicity multipliers of a candidate expression exactly, turn them
//! into an exact zero count for a period parallelogram, then corroborate that
//! count with contour winding numbers, residual sampling and symbolic
//! cancellation at exhibited zeros.
//!
//! Module map:
//!
//! - [`theta`]: the four theta series, nullwerte, exact argument reduction.
//! - [`lattice`]: half-periods, eta constants, `e_k - e_l`, and `℘`.
//! - [`sigma`]: `σ, σ₁, σ₂, σ₃` through theta, with the product definition as
//!   a slow oracle.
//! - [`qp`]: the expression language, multiplier inference, exact zero counts
//!   and symbolic zero checks.
//! - [`contour`]: derivative-free winding numbers and zero localization.
//! - [`verifier`]: the identity catalog, per-identity reports and suite runs.

pub mod contour;
pub mod error;
pub mod exact;
pub mod lattice;
pub mod literal;
pub mod qp;
pub mod sigma;
pub mod theta;
pub mod verifier;

pub use num_complex::Complex64 as C64;

pub use contour::{
    choose_admissible_base, locate_zeros, winding_count, Evaluable, LocatedZero, Parallelogram,
    WindingCertificate, WindingOptions,
};
pub use error::{Error, Result};
pub use exact::{GaussQ, Q};
pub use lattice::{e_diff, lattice_new, wp_eval, EjDifference, Lattice};
pub use qp::{
    check_zero_symbolic, eval_expr, expr_multiplier, parity_normalize, parse, predicted_zero_count,
    term_multiplier, EvalContext, Expr, Factor, Multiplier, Term,
};
pub use sigma::{sigma_aux_consistency, sigma_eval, sigma_product_oracle, SigmaKind};
pub use theta::{
    half_period_rewrite, reduce_argument, theta_eval, theta_nullwerte, ExactMultiplier, HalfShift,
    Nullwerte, TauNome, ThetaKind,
};
pub use verifier::{
    builtin_catalog, run_suite, verify, IdentitySpec, SuiteReport, Verdict, VerificationReport,
    VerifyParams,
};
