//! Exact Fibonacci and Dickson polynomial machinery over the integers and
//! over finite fields.
//!
//! The crate is organized bottom-up:
//!
//! * [`intpoly`]: dense arbitrary-precision integer polynomials.
//! * [`fibgen`]: Fibonacci and Dickson polynomial generators and the
//!   self-reciprocity scanner.
//! * [`ffield`]: arithmetic in `GF(p^e)` and quadratic extensions.
//! * [`fqfunc`]: Fibonacci polynomials viewed as functions on `GF(q)`.
//! * [`moments`]: first and second moment tables `d_n = sum f_n(x)^i`.
//!
//! Data-parallel loops go through [`Exec`]. With the default `parallel`
//! feature they run on rayon; without it every policy runs sequentially.

pub mod error;
pub mod exec;
pub mod ffield;
pub mod fibgen;
pub mod fqfunc;
pub mod intpoly;
pub mod moments;
pub mod numtheory;

pub use error::{Error, Result};
pub use exec::Exec;
pub use ffield::{embed_quadratic, make_field, solve_u, FieldCtx, FqElem, QuadraticExtension};
pub use fibgen::{
    dickson2, dickson_kind, fib_coeff, fib_poly_binomial, fib_poly_recurrence,
    generating_series_check, selfreciprocal_scan, ScanRecord, ScanReport,
};
pub use fqfunc::{
    fib_mod_field, func_equal, functional_expression_check, hermite_consistency, is_permutation,
    period_modulus, power_sum, reduce_mod_xq_minus_x, verify_period, CaseTag, FqPoly, PeriodClaim,
};
pub use intpoly::IntPoly;
pub use moments::{
    b_table_case1, b_table_case2, cross_validate, d_from_recurrence, d_oracle,
    even_q_relations_check, EvenQReport, MomentSeries,
};
