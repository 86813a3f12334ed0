//! Variance-gamma (VG) distribution toolkit.
//!
//! The crate is organised around four layers:
//!
//! * [`specfun`] — the special-function kernel (modified Bessel `K`, modified
//!   Struve `L`, normalised modified Lommel `t~`, the cumulative Bessel
//!   integral `G`, Gauss and confluent hypergeometric functions, incomplete
//!   gamma functions), each with an explicit accuracy contract.
//! * [`vgdist`] — the distribution object: parameter validation, density,
//!   mean, reparameterisations (shift, centralisation, iid convolution,
//!   asymmetric-Laplace and product-of-correlated-normals constructors) and a
//!   mixture sampler.
//! * [`moments`] — exact and asymptotic formulas for raw, absolute-raw and
//!   absolute-central moments, with method dispatch and series truncation
//!   control.
//! * [`oracle`] — independent ground truth: adaptive quadrature of the moment
//!   integrals and Monte-Carlo estimators, used by the validation suite and as
//!   the dispatcher's fallback for parameter regions no closed form covers.
//!
//! All operations are pure functions of their arguments; values are immutable
//! and safe to share across threads.

// frozen full-precision reference constants and NaN-rejecting `!(x > 0)`
// guards are deliberate throughout the numerics code
#![allow(clippy::excessive_precision)]
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod logspace;
pub mod moments;
pub mod oracle;
pub(crate) mod quadrature;
pub mod specfun;
pub mod validate;
pub mod vgdist;

pub use moments::{EvalResult, Method, MomentKind, MomentQuery};
pub use vgdist::{ALKappaSigma, ALParams, ProductNormalParams, VGParams};
