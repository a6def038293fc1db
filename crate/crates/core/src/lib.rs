//! Exact, truncated arithmetic of the Dirichlet convolution ring.
//!
//! The crate works with arithmetic functions truncated to a horizon N,
//! with values in the polynomial ring over the rationals extended by
//! formal logarithm symbols `L_p` — so convolution, the Rearick
//! exponential/logarithm, derivations, Wronskians and independence
//! certificates are all computed exactly, with no floating point in the
//! engine. Numeric output exists only at the display boundary.
//!
//! Modules:
//! - [`coeff`]: the exact coefficient ring Q[L2, L3, ...]
//! - [`numtheory`]: factorization, valuations, multiplicative
//!   independence of integers, recurrences, function builders
//! - [`arithfun`]: truncated functions, convolution, inverse, orders
//! - [`rearick`]: Exp/Log between (A0, +) and (A1, *), powers `f^g`
//! - [`operators`]: derivations, pointwise multipliers, `d_k` operators
//! - [`independence`]: certificates, determinants, rank, and the
//!   brute-force relation oracle
//! - [`dsl`]: the expression language

pub mod arithfun;
pub mod coeff;
pub mod dsl;
pub mod error;
pub mod independence;
pub mod numtheory;
pub mod operators;
pub mod rearick;

pub use arithfun::{ArithFun, BuiltinParam, OrderReport, DEFAULT_HORIZON, MAX_HORIZON};
pub use coeff::{Coefficient, Monomial, NumericEval, Rational};
pub use error::{Error, Result};
pub use independence::{
    certify_jacobian, certify_orders, certify_support_escape, certify_support_triangular,
    certify_value_tests, conv_det, dependence_oracle, nonzero_witness, rank_ff, wronskian_li,
    Certificate, FunMatrix, OracleConfig, OracleReport, RelationPoly, ValueTestMode, Verdict,
    Witness,
};
pub use operators::{
    apply, apply_dk_hat, compose, is_completely_additive, is_completely_multiplicative,
    ClosureCheck, OperatorSpec,
};
pub use rearick::{exp0, iterate_exp, log1, power_fg};
