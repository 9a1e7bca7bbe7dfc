//! Simultaneous universality of finite operator families.
//!
//! A family `T_1, ..., T_p` is simultaneously universal when one vector `x`
//! has joint orbit `(T_1^n x, ..., T_p^n x)` accumulating at every diagonal
//! point `(y, ..., y)`. This crate decides the property for unweighted shift
//! families, builds explicit approximation certificates for shift,
//! differentiation, translation and convolution families, and re-checks every
//! certificate by brute force.
//!
//! The narrative guide lives in `book/`; its code listings are compiled as
//! doc-tests of this crate.

// `!(a < b)` is how NaN is kept on the failing side throughout
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod constructors;
pub mod dirichlet;
pub mod error;
pub mod json;
pub mod operators;
pub mod oracle;
pub mod parallel;
pub mod shift_analysis;
pub mod space;
pub mod xcomplex;

pub use constructors::{build_certificate, ApproxCertificate, ApproxRequest};
pub use error::{Error, Result};
pub use operators::{apply, apply_operator_polynomial, iterate, orbit, OperatorSpec, WeightSequence};
pub use space::{
    CoeffVector, DiskRegion, Element, ElementKind, ExponentialSum, Metric, Polynomial, SpaceSpec,
};
pub use xcomplex::XComplex;

pub use num_complex::Complex64;

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/spaces.md")]
    mod spaces {}
    #[doc = include_str!("../../../book/src/operators.md")]
    mod operators {}
    #[doc = include_str!("../../../book/src/return-times.md")]
    mod return_times {}
    #[doc = include_str!("../../../book/src/shifts.md")]
    mod shifts {}
    #[doc = include_str!("../../../book/src/constructions.md")]
    mod constructions {}
    #[doc = include_str!("../../../book/src/verification.md")]
    mod verification {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
