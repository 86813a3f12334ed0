//! Exact and asymptotic moment formulas for the variance-gamma distribution.
//!
//! Raw integer moments and absolute moments of even order reduce to finite
//! sums of `2F1` values; absolute moments of odd order need an infinite
//! series with cumulative-Bessel (`G`) correction terms whose truncation is
//! controlled here; half-integer shape admits closed forms in the confluent
//! functions `M` and `U`. Central moments are obtained exclusively by
//! reparameterisation (`X - E[X]` is again variance-gamma). All additive
//! assembly happens in signed log space.

mod halfint;
mod odd;

pub use halfint::{
    abs_moment_halfint, al_abs_moment, al_abs_moment_incgamma, al_mean_deviation,
    al_mean_deviation_kappa, al_meandev_stddev_ratio,
};
pub use odd::{abs_moment_asymptotic, abs_moment_odd_series, abs_moment_symmetric};

pub(crate) use odd::odd_series_diagnostics;

use crate::logspace::{signed_log_sum, SignedLog};
use crate::oracle::{self, QuadError};
use crate::specfun::{self, SpecFunError};
use crate::vgdist::{ParamError, VGParams};
use thiserror::Error;

/// Which moment family a query asks for.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MomentKind {
    Raw,
    Central,
}

/// Evaluation strategy; `Auto` dispatches on the parameter shape.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    Auto,
    Even,
    OddSeries,
    Symmetric,
    HalfInt,
    Asymptotic,
    MuZero,
    Quadrature,
}

impl Method {
    pub fn name(&self) -> &'static str {
        match self {
            Method::Auto => "auto",
            Method::Even => "even",
            Method::OddSeries => "odd-series",
            Method::Symmetric => "symmetric",
            Method::HalfInt => "halfint",
            Method::Asymptotic => "asymptotic",
            Method::MuZero => "mu-zero",
            Method::Quadrature => "quad",
        }
    }
}

/// A moment request: order, family, absolute flag, method and series control.
#[derive(Debug, Clone, Copy)]
pub struct MomentQuery {
    pub order_r: f64,
    pub kind: MomentKind,
    pub absolute: bool,
    pub method: Method,
    pub rel_tol: f64,
    pub max_terms: usize,
}

impl MomentQuery {
    /// Absolute raw moment of order `r` with default controls.
    pub fn absolute(order_r: f64) -> Self {
        MomentQuery {
            order_r,
            kind: MomentKind::Raw,
            absolute: true,
            method: Method::Auto,
            rel_tol: 1e-10,
            max_terms: 500,
        }
    }

    /// Plain (signed) raw moment of integer order `r`.
    pub fn raw(order_r: u32) -> Self {
        MomentQuery {
            order_r: order_r as f64,
            kind: MomentKind::Raw,
            absolute: false,
            method: Method::Auto,
            rel_tol: 1e-10,
            max_terms: 500,
        }
    }

    pub fn central(mut self) -> Self {
        self.kind = MomentKind::Central;
        self
    }

    pub fn with_method(mut self, method: Method) -> Self {
        self.method = method;
        self
    }

    pub fn with_rel_tol(mut self, rel_tol: f64) -> Self {
        self.rel_tol = rel_tol;
        self
    }

    pub fn with_max_terms(mut self, max_terms: usize) -> Self {
        self.max_terms = max_terms;
        self
    }
}

/// Result of a moment evaluation.
#[derive(Debug, Clone)]
pub struct EvalResult {
    pub value: f64,
    pub method_used: Method,
    /// Series terms consumed (`j` levels for the odd series; 0 for closed forms).
    pub terms_used: usize,
    /// Bound on the truncation error of the series, or the oracle tolerance.
    pub error_bound: f64,
    pub warnings: Vec<String>,
}

impl EvalResult {
    fn closed_form(value: f64, method: Method) -> Self {
        EvalResult {
            value,
            method_used: method,
            terms_used: 0,
            error_bound: value.abs() * 1e-12,
            warnings: Vec::new(),
        }
    }
}

#[derive(Debug, Error)]
pub enum MomentError {
    #[error(transparent)]
    Param(#[from] ParamError),
    #[error("moment of order {r} does not exist for nu = {nu}: need r > max(-1, -2 nu - 1)")]
    Existence { r: f64, nu: f64 },
    #[error("{what} requires {requirement}")]
    BadOrder {
        what: &'static str,
        requirement: &'static str,
    },
    #[error("method {method:?} not applicable: {why}")]
    MethodPrecondition { method: Method, why: &'static str },
    #[error(
        "series did not converge within {terms} terms (beta/alpha too close to 1); \
         fall back to the quadrature method"
    )]
    SeriesNonConvergence { terms: usize, partial: f64 },
    #[error("log-space assembly exceeds the representable range (ln value = {ln_value})")]
    Overflow { ln_value: f64 },
    #[error(transparent)]
    SpecFun(#[from] SpecFunError),
    #[error(transparent)]
    Oracle(#[from] QuadError),
}

/// Existence range of `E|X|^r` (precondition of every absolute-moment formula).
pub(crate) fn check_existence(p: &VGParams, r: f64) -> Result<(), MomentError> {
    if r > (-1.0f64).max(-2.0 * p.nu() - 1.0) {
        Ok(())
    } else {
        Err(MomentError::Existence { r, nu: p.nu() })
    }
}

/// Shared scratch for the series formulas: the scaled location `u = alpha |mu|`,
/// the convergence ratio `gamma = beta/alpha`, the sign of the location, and
/// the derived index quantities of the finite sums.
#[derive(Debug, Clone, Copy)]
pub(crate) struct SeriesWorkspace {
    pub u: f64,
    pub gamma: f64,
    pub sign_mu: f64,
    pub nu: f64,
}

impl SeriesWorkspace {
    pub fn new(p: &VGParams) -> Self {
        SeriesWorkspace {
            u: p.alpha() * p.mu().abs(),
            gamma: p.gamma_ratio(),
            sign_mu: if p.mu() == 0.0 { 0.0 } else { p.mu().signum() },
            nu: p.nu(),
        }
    }

    /// `ell = ceil(r/2) + 1/2` of the raw-moment formula.
    pub fn ell(r: u32) -> f64 {
        (r as f64 / 2.0).ceil() + 0.5
    }

    /// `m = r mod 2`.
    pub fn parity(r: u32) -> u32 {
        r % 2
    }

    /// `z = gamma^2`, the `2F1` argument.
    pub fn z(&self) -> f64 {
        self.gamma * self.gamma
    }
}

/// `beta^2/alpha^2` threshold past which the series formulas refuse and the
/// caller is pointed at quadrature.
pub(crate) const Z_SERIES_LIMIT: f64 = 0.999;

const LN_PI: f64 = 1.144_729_885_849_400_2;

/// Signed log magnitude of `E[Y^k]` for `Y ~ VG(nu, alpha, beta, 0)`.
fn ln_raw_moment_mu0(p: &VGParams, k: u32) -> Result<SignedLog, MomentError> {
    if k == 0 {
        return Ok(SignedLog::new(1.0, 0.0));
    }
    let ws = SeriesWorkspace::new(p);
    let z = ws.z();
    let ell = SeriesWorkspace::ell(k);
    let m = SeriesWorkspace::parity(k);
    let nu = p.nu();
    if m == 1 && ws.gamma == 0.0 {
        return Ok(SignedLog::ZERO); // odd moment of a symmetric law
    }
    let f = specfun::hyp2f1(ell, nu + ell, 0.5 + m as f64, z)?;
    let skew_factor = if m == 1 {
        (2.0 * ws.gamma.abs()).ln()
    } else {
        0.0
    };
    let ln = k as f64 * std::f64::consts::LN_2 + skew_factor + (nu + 0.5) * (-z).ln_1p()
        - 0.5 * LN_PI
        - k as f64 * p.alpha().ln()
        - specfun::ln_gamma(nu + 0.5)?
        + specfun::ln_gamma(nu + ell)?
        + specfun::ln_gamma(ell)?
        + f.value.ln();
    let sign = if m == 1 { ws.gamma.signum() } else { 1.0 };
    Ok(SignedLog::new(sign, ln))
}

/// Raw moment `E[X^r]` for integer `r >= 1`; the zero-location case comes
/// straight from the hypergeometric formula, otherwise the binomial shift
/// `E[(Y + mu)^r]` is assembled in signed log space.
pub fn raw_moment(p: &VGParams, r: u32) -> Result<EvalResult, MomentError> {
    if r == 0 {
        return Err(MomentError::BadOrder {
            what: "raw_moment",
            requirement: "a positive integer order",
        });
    }
    if SeriesWorkspace::new(p).z() > Z_SERIES_LIMIT {
        return Err(MomentError::SeriesNonConvergence {
            terms: 0,
            partial: f64::NAN,
        });
    }
    let mu = p.mu();
    if mu == 0.0 {
        let sl = ln_raw_moment_mu0(p, r)?;
        return finish_signed(sl, Method::Auto);
    }
    let mut terms = Vec::with_capacity(r as usize + 1);
    for k in 0..=r {
        let ey = ln_raw_moment_mu0(p, k)?;
        if ey.sign == 0.0 {
            continue;
        }
        let pow = (r - k) as f64;
        let sign_mu_pow = if (r - k) % 2 == 0 || mu > 0.0 {
            1.0
        } else {
            -1.0
        };
        terms.push(SignedLog::new(
            ey.sign * sign_mu_pow,
            ey.ln_mag + specfun::ln_binomial(r, k) + pow * mu.abs().ln(),
        ));
    }
    finish_signed(signed_log_sum(&terms), Method::Auto)
}

fn finish_signed(sl: SignedLog, method: Method) -> Result<EvalResult, MomentError> {
    if sl.sign == 0.0 {
        return Ok(EvalResult::closed_form(0.0, method));
    }
    if sl.ln_mag > 709.0 {
        return Err(MomentError::Overflow {
            ln_value: sl.ln_mag,
        });
    }
    Ok(EvalResult::closed_form(sl.value(), method))
}

/// `E|X|^r` for zero location, any real `r` in the existence range.
pub fn abs_moment_mu_zero(p: &VGParams, r: f64) -> Result<EvalResult, MomentError> {
    if p.mu() != 0.0 {
        return Err(MomentError::MethodPrecondition {
            method: Method::MuZero,
            why: "location must be exactly zero",
        });
    }
    check_existence(p, r)?;
    let ws = SeriesWorkspace::new(p);
    let z = ws.z();
    if z > Z_SERIES_LIMIT {
        return Err(MomentError::SeriesNonConvergence {
            terms: 0,
            partial: f64::NAN,
        });
    }
    let nu = p.nu();
    let h = (r + 1.0) / 2.0;
    let f = specfun::hyp2f1(h, nu + h, 0.5, z)?;
    let ln = r * std::f64::consts::LN_2 + (nu + 0.5) * (-z).ln_1p()
        - 0.5 * LN_PI
        - r * p.alpha().ln()
        - specfun::ln_gamma(nu + 0.5)?
        + specfun::ln_gamma(nu + h)?
        + specfun::ln_gamma(h)?
        + f.value.ln();
    finish_signed(SignedLog::new(1.0, ln), Method::MuZero)
}

/// `E|X|^r` for even integer `r >= 2`: the finite double-`2F1` sum.
pub fn abs_moment_even(p: &VGParams, r: u32) -> Result<EvalResult, MomentError> {
    if r < 2 || r % 2 != 0 {
        return Err(MomentError::BadOrder {
            what: "abs_moment_even",
            requirement: "an even order r >= 2",
        });
    }
    let ws = SeriesWorkspace::new(p);
    let z = ws.z();
    if z > Z_SERIES_LIMIT {
        return Err(MomentError::SeriesNonConvergence {
            terms: 0,
            partial: f64::NAN,
        });
    }
    let nu = p.nu();
    let alpha_mu = p.alpha() * p.mu(); // signed
    let ln_pref = (nu + 0.5) * (-z).ln_1p()
        - 0.5 * LN_PI
        - r as f64 * p.alpha().ln()
        - specfun::ln_gamma(nu + 0.5)?;
    let mut terms = Vec::with_capacity(r as usize + 1);
    for k in 0..=r {
        let pk = SeriesWorkspace::ell(k); // ceil(k/2) + 1/2
        let q = SeriesWorkspace::parity(k);
        if q == 1 && ws.gamma == 0.0 {
            continue;
        }
        if alpha_mu == 0.0 && k < r {
            continue;
        }
        let f = specfun::hyp2f1(pk, nu + pk, 0.5 + q as f64, z)?;
        let pow = (r - k) as f64;
        let sign = if (r - k) % 2 == 1 && alpha_mu < 0.0 {
            -1.0
        } else {
            1.0
        } * if q == 1 { ws.gamma.signum() } else { 1.0 };
        let ln = specfun::ln_binomial(r, k)
            + k as f64 * std::f64::consts::LN_2
            + if pow == 0.0 {
                0.0
            } else {
                pow * alpha_mu.abs().ln()
            }
            + if q == 1 {
                (2.0 * ws.gamma.abs()).ln()
            } else {
                0.0
            }
            + specfun::ln_gamma(nu + pk)?
            + specfun::ln_gamma(pk)?
            + f.value.ln();
        terms.push(SignedLog::new(sign, ln));
    }
    let sl = signed_log_sum(&terms);
    finish_signed(SignedLog::new(sl.sign, sl.ln_mag + ln_pref), Method::Even)
}

/// Compute the requested moment, dispatching on the query.
///
/// Central queries first reparameterise to `X - E[X]`; non-absolute queries
/// use the raw-moment formula; absolute queries route `mu = 0` to the
/// hypergeometric form, even orders to the finite sum, half-integer shape to
/// the confluent closed form, odd orders to the series, and anything else
/// (non-integer order with general shape) to the quadrature oracle with a
/// warning. A forced method is honoured when its preconditions hold.
pub fn moment(p: &VGParams, q: &MomentQuery) -> Result<EvalResult, MomentError> {
    let work = match q.kind {
        MomentKind::Raw => *p,
        MomentKind::Central => p.centralize(),
    };
    if !q.absolute {
        if q.order_r < 1.0 || q.order_r.fract() != 0.0 || q.order_r > u32::MAX as f64 {
            return Err(MomentError::BadOrder {
                what: "raw (non-absolute) moments",
                requirement: "a positive integer order",
            });
        }
        return raw_moment(&work, q.order_r as u32);
    }
    check_existence(&work, q.order_r)?;
    let r = q.order_r;
    let is_int = r.fract() == 0.0 && r >= 0.0 && r <= u32::MAX as f64;
    let ws = SeriesWorkspace::new(&work);
    match q.method {
        Method::Auto => {
            if ws.z() > Z_SERIES_LIMIT {
                let mut res = quad_moment(&work, r, q)?;
                res.warnings.push(
                    "beta/alpha too close to 1 for the series formulas; quadrature used".into(),
                );
                return Ok(res);
            }
            if work.mu() == 0.0 {
                abs_moment_mu_zero(&work, r)
            } else if is_int && r >= 2.0 && (r as u32) % 2 == 0 {
                abs_moment_even(&work, r as u32)
            } else if is_half_integer(work.nu()) {
                abs_moment_halfint(&work, r)
            } else if is_int && (r as u32) % 2 == 1 {
                abs_moment_odd_series(&work, r as u32, q.rel_tol, q.max_terms)
            } else {
                let mut res = quad_moment(&work, r, q)?;
                res.warnings.push(
                    "non-integer order with general shape has no single-series formula; \
                     quadrature oracle used"
                        .into(),
                );
                Ok(res)
            }
        }
        Method::MuZero => abs_moment_mu_zero(&work, r),
        Method::Even => {
            if !is_int || (r as u32) % 2 != 0 || r < 2.0 {
                return Err(MomentError::MethodPrecondition {
                    method: Method::Even,
                    why: "order must be an even integer >= 2",
                });
            }
            abs_moment_even(&work, r as u32)
        }
        Method::OddSeries => {
            if !is_int || (r as u32) % 2 == 0 {
                return Err(MomentError::MethodPrecondition {
                    method: Method::OddSeries,
                    why: "order must be an odd integer",
                });
            }
            abs_moment_odd_series(&work, r as u32, q.rel_tol, q.max_terms)
        }
        Method::Symmetric => {
            if !is_int || (r as u32) % 2 == 0 {
                return Err(MomentError::MethodPrecondition {
                    method: Method::Symmetric,
                    why: "order must be an odd integer",
                });
            }
            abs_moment_symmetric(&work, r as u32)
        }
        Method::HalfInt => abs_moment_halfint(&work, r),
        Method::Asymptotic => {
            if !is_int || (r as u32) % 2 == 0 {
                return Err(MomentError::MethodPrecondition {
                    method: Method::Asymptotic,
                    why: "order must be an odd integer",
                });
            }
            abs_moment_asymptotic(&work, r as u32)
        }
        Method::Quadrature => quad_moment(&work, r, q),
    }
}

fn quad_moment(p: &VGParams, r: f64, q: &MomentQuery) -> Result<EvalResult, MomentError> {
    let out = oracle::quad_abs_moment(p, r, q.rel_tol.max(1e-12))?;
    Ok(EvalResult {
        value: out.value,
        method_used: Method::Quadrature,
        terms_used: out.subdivisions,
        error_bound: out.est_abs_err,
        warnings: Vec::new(),
    })
}

pub(crate) fn is_half_integer(nu: f64) -> bool {
    let m = nu - 0.5;
    m >= 0.0 && (m - m.round()).abs() < 1e-12
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::specfun::test_util::assert_rel;

    fn vg(nu: f64, a: f64, b: f64, m: f64) -> VGParams {
        VGParams::new(nu, a, b, m).unwrap()
    }

    #[test]
    fn raw_first_matches_mean() {
        for p in [
            vg(0.5, 2.0, 1.0, 0.0),
            vg(1.87, 271.1, -2.342, 2.585e-4),
            vg(1.0, 2.0, -0.7, 0.4),
            vg(-0.3, 2.0, 1.4, -0.6),
        ] {
            let m = raw_moment(&p, 1).unwrap().value;
            assert_rel(m, p.mean(), 1e-10);
        }
    }

    #[test]
    fn raw_second_symmetric() {
        // r = 2, mu = beta = 0: E[X^2] = (2 nu + 1)/alpha^2
        for (nu, a) in [(1.0, 2.0), (0.5, 1.0), (2.37, 3.0)] {
            let p = vg(nu, a, 0.0, 0.0);
            assert_rel(
                raw_moment(&p, 2).unwrap().value,
                (2.0 * nu + 1.0) / (a * a),
                1e-12,
            );
        }
    }

    #[test]
    fn raw_odd_symmetric_vanishes() {
        let p = vg(1.3, 2.0, 0.0, 0.0);
        for r in [1, 3, 5] {
            assert_eq!(raw_moment(&p, r).unwrap().value, 0.0);
        }
    }

    #[test]
    fn raw_reference_values() {
        // frozen independent quadrature of x^r p(x)
        assert_rel(
            raw_moment(&vg(1.0, 2.0, 0.5, 0.4), 3).unwrap().value,
            3.384_888_888_888_888_9,
            1e-10,
        );
        assert_rel(
            raw_moment(&vg(1.0, 2.0, 0.5, 0.3), 2).unwrap().value,
            1.396_666_666_666_666_7,
            1e-10,
        );
        assert_rel(
            raw_moment(&vg(0.8, 2.0, -0.6, -0.4), 4).unwrap().value,
            11.042_772_606_543_662,
            1e-10,
        );
        assert_rel(
            raw_moment(&vg(1.3, 2.0, 0.9, 0.0), 5).unwrap().value,
            197.765_652_827_824_97,
            1e-10,
        );
    }

    #[test]
    fn mu_zero_reference_values() {
        // nu = 1/2 (Laplace), beta = 0: E|X|^r = Gamma(r+1)/alpha^r
        for r in [0.5, 1.0, 2.0, 3.7] {
            let p = vg(0.5, 2.0, 0.0, 0.0);
            let expect = specfun::gamma_fn(r + 1.0).unwrap() / 2.0f64.powf(r);
            assert_rel(abs_moment_mu_zero(&p, r).unwrap().value, expect, 1e-12);
        }
        // beta = 0, r = 1: 2 Gamma(nu+1) / (sqrt(pi) alpha Gamma(nu+1/2))
        for nu in [-0.3, 0.0, 0.5, 1.87] {
            let p = vg(nu, 2.0, 0.0, 0.0);
            let expect = 2.0 * specfun::gamma_fn(nu + 1.0).unwrap()
                / (std::f64::consts::PI.sqrt() * 2.0 * specfun::gamma_fn(nu + 0.5).unwrap());
            assert_rel(abs_moment_mu_zero(&p, 1.0).unwrap().value, expect, 1e-12);
        }
        // general skewed case vs frozen quadrature
        assert_rel(
            abs_moment_mu_zero(&vg(0.3, 1.0, 0.5, 0.0), 2.5)
                .unwrap()
                .value,
            10.467_464_900_145_737,
            1e-9,
        );
    }

    #[test]
    fn mu_zero_existence() {
        let p = vg(-0.3, 1.0, 0.0, 0.0);
        assert!(abs_moment_mu_zero(&p, -0.5).is_err()); // needs r > -0.4
        assert!(abs_moment_mu_zero(&p, -0.3).is_ok());
    }

    #[test]
    fn even_reference_values() {
        assert_rel(
            abs_moment_even(&vg(1.0, 2.0, 0.5, 0.3), 4).unwrap().value,
            9.331_3,
            1e-10,
        );
        // |x|^2 = x^2 consistency
        for p in [vg(1.0, 2.0, 0.5, 0.3), vg(0.7, 2.0, -0.6, -0.4)] {
            assert_rel(
                abs_moment_even(&p, 2).unwrap().value,
                raw_moment(&p, 2).unwrap().value,
                1e-10,
            );
        }
    }

    #[test]
    fn dispatcher_routes() {
        let p = vg(0.5, 2.0, 1.0, 1.0);
        let r = moment(&p, &MomentQuery::absolute(1.0)).unwrap();
        assert_eq!(r.method_used, Method::HalfInt);
        assert_rel(r.value, 1.674_964_511_394_644, 1e-10);

        let p = vg(0.7, 2.0, 0.3, 0.5);
        let r = moment(&p, &MomentQuery::absolute(2.4)).unwrap();
        assert_eq!(r.method_used, Method::Quadrature);
        assert!(!r.warnings.is_empty());
        assert_rel(r.value, 1.382_529_878_377_770_1, 1e-7);

        let p = vg(1.0, 2.0, 1.0, 0.5);
        let r = moment(&p, &MomentQuery::absolute(3.0)).unwrap();
        assert_eq!(r.method_used, Method::OddSeries);
        let r = moment(&p, &MomentQuery::absolute(4.0)).unwrap();
        assert_eq!(r.method_used, Method::Even);
        let r = moment(&p, &MomentQuery::absolute(2.0).central()).unwrap();
        assert_eq!(r.method_used, Method::Even);

        let p = vg(1.0, 2.0, 1.0, 0.0);
        let r = moment(&p, &MomentQuery::absolute(3.0)).unwrap();
        assert_eq!(r.method_used, Method::MuZero);
    }

    #[test]
    fn dispatcher_forced_method_preconditions() {
        let p = vg(1.0, 2.0, 1.0, 0.5);
        assert!(matches!(
            moment(&p, &MomentQuery::absolute(3.0).with_method(Method::Even)),
            Err(MomentError::MethodPrecondition { .. })
        ));
        assert!(matches!(
            moment(&p, &MomentQuery::absolute(3.0).with_method(Method::MuZero)),
            Err(MomentError::MethodPrecondition { .. })
        ));
        assert!(matches!(
            moment(&p, &MomentQuery::absolute(3.0).with_method(Method::HalfInt)),
            Err(MomentError::MethodPrecondition { .. })
        ));
        assert!(matches!(
            moment(
                &p,
                &MomentQuery::absolute(3.0).with_method(Method::Symmetric)
            ),
            Err(MomentError::MethodPrecondition { .. })
        ));
    }

    #[test]
    fn central_moment_via_reparameterisation() {
        // central first absolute moment of AL(2,1,mu) is the mean deviation,
        // independent of mu
        for mu in [-1.0, 0.0, 0.7] {
            let p = vg(0.5, 2.0, 1.0, mu);
            let r = moment(&p, &MomentQuery::absolute(1.0).central()).unwrap();
            assert_rel(
                r.value,
                al_mean_deviation(&crate::vgdist::ALParams::new(2.0, 1.0, mu).unwrap()),
                1e-10,
            );
        }
    }

    #[test]
    fn reflection_symmetry() {
        // E|X|^r invariant under (beta, mu) -> (-beta, -mu)
        for (r, q) in [
            (1.0, MomentQuery::absolute(1.0)),
            (3.0, MomentQuery::absolute(3.0)),
            (2.0, MomentQuery::absolute(2.0)),
        ] {
            let _ = r;
            let a = moment(&vg(0.8, 2.0, 0.9, 0.6), &q).unwrap().value;
            let b = moment(&vg(0.8, 2.0, -0.9, -0.6), &q).unwrap().value;
            assert_rel(a, b, 1e-11);
        }
    }

    #[test]
    fn near_unit_skew_ratio_falls_back() {
        let p = vg(1.0, 1.0, 0.9999, 0.5);
        let r = moment(&p, &MomentQuery::absolute(1.0).with_rel_tol(1e-7)).unwrap();
        assert_eq!(r.method_used, Method::Quadrature);
        assert!(!r.warnings.is_empty());
    }

    #[test]
    fn raw_moment_overflow_is_signalled() {
        // mu^r alone exceeds the double range; the log-space assembly
        // reports it instead of returning inf
        let p = vg(0.5, 1e-4, 0.0, 1e6);
        match raw_moment(&p, 60) {
            Err(MomentError::Overflow { ln_value }) => assert!(ln_value > 709.0),
            other => panic!("expected overflow, got {other:?}"),
        }
    }

    #[test]
    fn raw_requires_integer_order() {
        let p = vg(1.0, 2.0, 0.5, 0.0);
        let mut q = MomentQuery::raw(2);
        q.order_r = 2.5;
        q.absolute = false;
        assert!(matches!(moment(&p, &q), Err(MomentError::BadOrder { .. })));
    }
}
