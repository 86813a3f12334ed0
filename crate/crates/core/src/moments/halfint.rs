//! Half-integer shape: closed-form absolute moments in the confluent
//! hypergeometric functions, and the asymmetric-Laplace specialisations.

use super::{check_existence, EvalResult, Method, MomentError};
use crate::logspace::ln_add_exp;
use crate::specfun::{self, kummer_series, IncGammaKind};
use crate::vgdist::{ALKappaSigma, ALParams, VGParams};

/// `E|X|^r` for `nu = m + 1/2`, `m = 0, 1, 2, ...` and any real `r > -1`
/// (within the existence range): a finite sum of `U`/`M`/`U` brackets with
/// beta-function weights, assembled in log space. All three bracket pieces
/// are positive, so there is no cancellation between them.
pub fn abs_moment_halfint(p: &VGParams, r: f64) -> Result<EvalResult, MomentError> {
    let m = match half_integer_m(p.nu()) {
        Some(m) => m,
        None => {
            return Err(MomentError::MethodPrecondition {
                method: Method::HalfInt,
                why: "shape must be a half-integer (nu = m + 1/2)",
            })
        }
    };
    check_existence(p, r)?;
    let gamma = p.gamma_ratio();
    let alpha = p.alpha();
    let mf = m as f64;
    let ln_pref = (mf + 1.0) * (-gamma * gamma).ln_1p()
        - (mf + 1.0) * std::f64::consts::LN_2
        - specfun::ln_gamma(mf + 1.0)?
        - r * alpha.ln();
    let ln_gamma_r1 = specfun::ln_gamma(r + 1.0)?;

    let mut ln_total = f64::NEG_INFINITY;
    if p.mu() == 0.0 {
        for j in 0..=m {
            let jf = j as f64;
            let ln_w = ln_weight(m, j)?;
            let e = r + mf - jf + 1.0;
            let piece = ln_add_exp(-e * gamma.ln_1p(), -e * (-gamma).ln_1p());
            ln_total = ln_add_exp(ln_total, ln_w + ln_gamma_r1 + piece);
        }
        let value = (ln_pref + ln_total).exp();
        let mut res = EvalResult::closed_form(value, Method::HalfInt);
        res.error_bound = value * 1e-11;
        return Ok(res);
    }

    let u = alpha * p.mu().abs();
    let sgn = p.mu().signum();
    let w_plus = u * (1.0 + sgn * gamma); // alpha|mu| + beta mu
    let w_minus = u * (1.0 - sgn * gamma); // alpha|mu| - beta mu
    let ln_u = u.ln();
    for j in 0..=m {
        let jf = j as f64;
        let ln_w = ln_weight(m, j)?;
        let e = r + mf - jf + 1.0;

        // e^{-w+} G(r+1) (1 + sgn g)^{-e} U(j-m, j-m-r, w+)
        let u1 = specfun::tricomi_u(jf - mf, jf - mf - r, w_plus)?;
        debug_assert!(u1.value > 0.0);
        let t1 = -w_plus + ln_gamma_r1 - e * (sgn * gamma).ln_1p() + u1.ln_abs();

        // u^e B(r+1, m-j+1) M(m-j+1, r+m-j+2, -w+) with the transformed
        // positive series M(...) = e^{-w+} M(r+1, r+m-j+2, w+)
        let m_ser = kummer_series(r + 1.0, e + 1.0, w_plus)?;
        let t2 = e * ln_u + specfun::ln_beta(r + 1.0, mf - jf + 1.0) - w_plus + m_ser.ln_mag;

        // u^e (m-j)! U(m-j+1, r+m-j+2, w-)
        let u3 = specfun::tricomi_u(mf - jf + 1.0, e + 1.0, w_minus)?;
        debug_assert!(u3.value > 0.0);
        let t3 = e * ln_u + specfun::ln_gamma(mf - jf + 1.0)? + u3.ln_abs();

        let bracket = ln_add_exp(ln_add_exp(t1, t2), t3);
        ln_total = ln_add_exp(ln_total, ln_w + bracket);
    }
    let ln_value = ln_pref + ln_total;
    if ln_value > 709.0 {
        return Err(MomentError::Overflow { ln_value });
    }
    let value = ln_value.exp();
    let mut res = EvalResult::closed_form(value, Method::HalfInt);
    res.error_bound = value * 1e-10;
    Ok(res)
}

fn half_integer_m(nu: f64) -> Option<u32> {
    let m = nu - 0.5;
    let rounded = m.round();
    if rounded >= 0.0 && (m - rounded).abs() < 1e-12 {
        Some(rounded as u32)
    } else {
        None
    }
}

/// `ln[(m+j)! / ((m-j)! j! 2^j)]`.
fn ln_weight(m: u32, j: u32) -> Result<f64, MomentError> {
    Ok(specfun::ln_gamma((m + j) as f64 + 1.0)?
        - specfun::ln_gamma((m - j) as f64 + 1.0)?
        - specfun::ln_gamma(j as f64 + 1.0)?
        - j as f64 * std::f64::consts::LN_2)
}

/// Absolute raw moment of the asymmetric Laplace law, `r > -1`: confluent
/// form for nonzero location, elementary form at zero location.
pub fn al_abs_moment(a: &ALParams, r: f64) -> Result<EvalResult, MomentError> {
    if !(r > -1.0) {
        return Err(MomentError::Existence { r, nu: 0.5 });
    }
    let (alpha, beta, mu) = (a.alpha(), a.beta(), a.mu());
    let ln_c = ((alpha - beta) * (alpha + beta)).ln() - (2.0 * alpha).ln();
    if mu == 0.0 {
        let g = specfun::ln_gamma(r + 1.0)?;
        let piece = ln_add_exp(
            g - (r + 1.0) * (alpha + beta).ln(),
            g - (r + 1.0) * (alpha - beta).ln(),
        );
        let value = (ln_c + piece).exp();
        let mut res = EvalResult::closed_form(value, Method::HalfInt);
        res.error_bound = value * 1e-12;
        return Ok(res);
    }
    let sgn = mu.signum();
    let u = alpha * mu.abs();
    let gamma = beta / alpha;
    let w_plus = u * (1.0 + sgn * gamma);
    let w_minus = u * (1.0 - sgn * gamma);
    // (alpha^2-beta^2)/(2 alpha^{r+2}) [ e^{-w+} G(r+1)/(1+sgn g)^{r+1}
    //   + u^{r+1}/(r+1) M(1, r+2, -w+) + u^{r+1} U(1, r+2, w-) ]
    let t1 = -w_plus + specfun::ln_gamma(r + 1.0)? - (r + 1.0) * (sgn * gamma).ln_1p();
    let m_ser = kummer_series(r + 1.0, r + 2.0, w_plus)?;
    let t2 = (r + 1.0) * u.ln() - (r + 1.0).ln() - w_plus + m_ser.ln_mag;
    let u3 = specfun::tricomi_u(1.0, r + 2.0, w_minus)?;
    let t3 = (r + 1.0) * u.ln() + u3.ln_abs();
    let ln_value = ln_c - (r + 1.0) * alpha.ln() + ln_add_exp(ln_add_exp(t1, t2), t3);
    let value = ln_value.exp();
    let mut res = EvalResult::closed_form(value, Method::HalfInt);
    res.error_bound = value * 1e-11;
    Ok(res)
}

/// The same moment through the incomplete-gamma form (internal cross-check):
/// upper incomplete gamma on one side, the exp-weighted lower reduction on
/// the other.
pub fn al_abs_moment_incgamma(a: &ALParams, r: f64) -> Result<EvalResult, MomentError> {
    if !(r > -1.0) {
        return Err(MomentError::Existence { r, nu: 0.5 });
    }
    let (alpha, beta, mu) = (a.alpha(), a.beta(), a.mu());
    if mu == 0.0 {
        return al_abs_moment(a, r);
    }
    let sgn = mu.signum();
    let w_plus = alpha * mu.abs() + beta * mu;
    let w_minus = alpha * mu.abs() - beta * mu;
    let ln_c = ((alpha - beta) * (alpha + beta)).ln() - (2.0 * alpha).ln();
    // e^{w-} G(r+1, w-) / (alpha - sgn beta)^{r+1}
    let ln_scaled_upper = if w_minus >= r + 2.0 {
        specfun::ln_upper_gamma_cf(r + 1.0, w_minus)?
    } else {
        specfun::upper_gamma(r + 1.0, w_minus)?.ln() + w_minus
    };
    let t1 = ln_scaled_upper - (r + 1.0) * (alpha - sgn * beta).ln();
    // e^{-w+} (G(r+1) + E(r+1, w+)) / (alpha + sgn beta)^{r+1}
    let ln_e = specfun::incomplete_gamma(IncGammaKind::ExpWeighted, r + 1.0, w_plus)?.ln_abs();
    let t2 = ln_add_exp(specfun::ln_gamma(r + 1.0)?, ln_e)
        - w_plus
        - (r + 1.0) * (alpha + sgn * beta).ln();
    let value = (ln_c + ln_add_exp(t1, t2)).exp();
    let mut res = EvalResult::closed_form(value, Method::HalfInt);
    res.error_bound = value * 1e-11;
    Ok(res)
}

/// Mean deviation `E|X - E[X]|` of the asymmetric Laplace law:
/// `(alpha + |beta|) / (alpha (alpha - |beta|)) exp(-2|beta|/(alpha + |beta|))`.
pub fn al_mean_deviation(a: &ALParams) -> f64 {
    let (alpha, b) = (a.alpha(), a.beta().abs());
    (alpha + b) / (alpha * (alpha - b)) * (-2.0 * b / (alpha + b)).exp()
}

/// Mean deviation in the `(kappa, sigma)` parameterisation.
pub fn al_mean_deviation_kappa(k: &ALKappaSigma) -> f64 {
    let kappa = k.kappa();
    let sigma = k.sigma();
    if kappa <= 1.0 {
        std::f64::consts::SQRT_2 * sigma / (kappa * (1.0 + kappa * kappa))
            * (kappa * kappa - 1.0).exp()
    } else {
        let ki = 1.0 / kappa;
        std::f64::consts::SQRT_2 * sigma / (ki * (1.0 + ki * ki)) * (ki * ki - 1.0).exp()
    }
}

/// Ratio of the mean deviation to the standard deviation
/// (`Var(X) = sigma^2 (1 + kappa^4) / (2 kappa^2)`), a function of `kappa`
/// alone and invariant under `kappa -> 1/kappa`.
pub fn al_meandev_stddev_ratio(kappa: f64) -> f64 {
    assert!(kappa > 0.0 && kappa.is_finite(), "kappa must be positive");
    let k = if kappa <= 1.0 { kappa } else { 1.0 / kappa };
    let k2 = k * k;
    2.0 / ((1.0 + k2) * (1.0 + k2 * k2).sqrt()) * (k2 - 1.0).exp()
}
