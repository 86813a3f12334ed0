//! Odd-order absolute moments: the infinite series with cumulative-Bessel
//! correction terms, its symmetric-case collapse, and the small-`alpha mu`
//! asymptotic approximation.

use super::{check_existence, EvalResult, Method, MomentError, SeriesWorkspace, Z_SERIES_LIMIT};
use crate::logspace::{ln_add_exp, signed_log_sum, SignedLog};
use crate::specfun::{self, ln_big_g};
use crate::vgdist::VGParams;

const LN_PI: f64 = 1.144_729_885_849_400_2;

/// Log prefactor `2^r (1-g^2)^(nu+1/2) / (sqrt(pi) alpha^r Gamma(nu+1/2))`.
fn ln_prefactor(p: &VGParams, r: u32) -> Result<f64, MomentError> {
    let z = p.gamma_ratio() * p.gamma_ratio();
    Ok(
        r as f64 * std::f64::consts::LN_2 + (p.nu() + 0.5) * (-z).ln_1p()
            - 0.5 * LN_PI
            - r as f64 * p.alpha().ln()
            - specfun::ln_gamma(p.nu() + 0.5)?,
    )
}

/// The finite main sum shared by the exact series and the asymptotic
/// approximation: terms of
/// `sum_k (alpha mu / 2)^(2k) G(h) G(nu+h) [C(r,2k) F(..;1/2;z) + beta mu C(r,2k+1) F(..;3/2;z)]`.
fn main_term_logs(p: &VGParams, r: u32) -> Result<Vec<SignedLog>, MomentError> {
    let ws = SeriesWorkspace::new(p);
    let z = ws.z();
    let nu = ws.nu;
    let beta_mu = p.beta() * p.mu();
    let mut terms = Vec::with_capacity(r as usize + 1);
    for k in 0..=(r - 1) / 2 {
        let h = (r - 2 * k) as f64 / 2.0 + 0.5;
        let base = if k == 0 {
            0.0
        } else {
            2.0 * k as f64 * (ws.u / 2.0).ln()
        };
        let ln_gg = specfun::ln_gamma(h)? + specfun::ln_gamma(nu + h)?;
        let f1 = specfun::hyp2f1(h, nu + h, 0.5, z)?;
        terms.push(SignedLog::new(
            1.0,
            base + ln_gg + specfun::ln_binomial(r, 2 * k) + f1.value.ln(),
        ));
        if beta_mu != 0.0 && 2 * k < r {
            let f2 = specfun::hyp2f1(h, nu + h, 1.5, z)?;
            terms.push(SignedLog::new(
                beta_mu.signum(),
                base + ln_gg
                    + beta_mu.abs().ln()
                    + specfun::ln_binomial(r, 2 * k + 1)
                    + f2.value.ln(),
            ));
        }
    }
    Ok(terms)
}

struct OddSeriesRun {
    result: EvalResult,
    /// `|aggregate j-term|` magnitudes (log), for convergence diagnostics.
    ln_j_magnitudes: Vec<f64>,
}

/// Evaluate the odd-order series, truncating once the correction-tail bound
/// (obtained from `0 < G < 1` plus a geometric majorant of the remaining
/// terms) drops below `rel_tol * |partial sum|`.
fn odd_series_run(
    p: &VGParams,
    r: u32,
    rel_tol: f64,
    max_terms: usize,
    extra_terms: usize,
) -> Result<OddSeriesRun, MomentError> {
    if r % 2 == 0 {
        return Err(MomentError::BadOrder {
            what: "abs_moment_odd_series",
            requirement: "an odd order",
        });
    }
    if p.mu() == 0.0 {
        return Err(MomentError::MethodPrecondition {
            method: Method::OddSeries,
            why: "zero location dispatches to the mu-zero formula",
        });
    }
    check_existence(p, r as f64)?;
    let ws = SeriesWorkspace::new(p);
    if ws.z() > Z_SERIES_LIMIT {
        return Err(MomentError::SeriesNonConvergence {
            terms: 0,
            partial: f64::NAN,
        });
    }
    let nu = ws.nu;
    let u = ws.u;
    let g_abs = ws.gamma.abs();
    // sign of (-2 sgn(mu) gamma); signum() maps +-0 to +-1, so guard it
    let sign_base = if ws.gamma == 0.0 {
        0.0
    } else {
        -ws.sign_mu * ws.gamma.signum()
    };
    let ln_two_gamma = (2.0 * g_abs).ln();
    let ln_half_u = (u / 2.0).ln();
    let ln_pref = ln_prefactor(p, r)?;

    let mut terms = main_term_logs(p, r)?;
    // ln G_{nu+s, nu}(u) cache keyed by s = r + j - k
    let mut g_cache: Vec<Option<f64>> = Vec::new();
    let mut ln_g_at = |s: usize| -> Result<f64, MomentError> {
        if g_cache.len() <= s {
            g_cache.resize(s + 1, None);
        }
        if let Some(v) = g_cache[s] {
            return Ok(v);
        }
        let v = ln_big_g(nu + s as f64, nu, u)?;
        g_cache[s] = Some(v);
        Ok(v)
    };

    let mut ln_j_magnitudes = Vec::new();
    let mut bound_ln = f64::NEG_INFINITY;
    let mut converged_at: Option<usize> = None;
    let mut j = 0usize;
    while j < max_terms + extra_terms {
        let mut j_level = Vec::with_capacity(r as usize + 1);
        let sign_j = if j % 2 == 0 || sign_base >= 0.0 {
            if sign_base == 0.0 && j > 0 {
                break; // symmetric case: single level
            }
            1.0
        } else {
            -1.0
        };
        let ln_j_factor = if j == 0 {
            0.0
        } else {
            j as f64 * ln_two_gamma - specfun::ln_gamma(j as f64 + 1.0)?
        };
        for k in 0..=r {
            let s = (r + j as u32 - k) as usize;
            let c = (s as f64 + 1.0) / 2.0;
            let ln = specfun::ln_binomial(r, k)
                + k as f64 * ln_half_u
                + ln_j_factor
                + specfun::ln_gamma(c)?
                + specfun::ln_gamma(nu + c)?
                + ln_g_at(s)?;
            let sign = -1.0 * if k % 2 == 0 { 1.0 } else { -1.0 } * sign_j;
            j_level.push(SignedLog::new(sign, ln));
        }
        ln_j_magnitudes.push(
            j_level
                .iter()
                .fold(f64::NEG_INFINITY, |acc, t| ln_add_exp(acc, t.ln_mag)),
        );
        terms.extend_from_slice(&j_level);
        j += 1;
        if sign_base == 0.0 {
            converged_at = Some(j);
            bound_ln = f64::NEG_INFINITY;
            break;
        }
        if let Some(done_at) = converged_at {
            if j >= done_at + extra_terms {
                break;
            }
        } else {
            // tail bound with G <= 1 and ratio majorant
            // rho(m) <= |g| (m + d + nu) / (m + 1), d = r - k + 1
            let mut tail_terms = Vec::with_capacity(r as usize + 1);
            let mut sup_ok = true;
            for k in 0..=r {
                let d = (r - k) as f64 + 1.0;
                let s1 = (r + j as u32 - k) as f64 / 2.0 + 0.5;
                let s2 = nu + s1;
                let rho_sup = (g_abs * (j as f64 + d + nu) / (j as f64 + 1.0)).max(g_abs);
                if rho_sup >= 1.0 {
                    sup_ok = false;
                    break;
                }
                let ln_t =
                    specfun::ln_binomial(r, k) + k as f64 * ln_half_u + j as f64 * ln_two_gamma
                        - specfun::ln_gamma(j as f64 + 1.0)?
                        + specfun::ln_gamma(s1)?
                        + specfun::ln_gamma(s2)?;
                tail_terms.push(SignedLog::new(1.0, ln_t - (1.0 - rho_sup).ln()));
            }
            if sup_ok {
                let tail = signed_log_sum(&tail_terms);
                let partial = signed_log_sum(&terms);
                if tail.ln_mag <= rel_tol.ln() + partial.ln_mag {
                    bound_ln = tail.ln_mag;
                    converged_at = Some(j);
                    if extra_terms == 0 {
                        break;
                    }
                }
            }
        }
    }
    let terms_used = match converged_at {
        Some(t) => t,
        None => {
            let partial = signed_log_sum(&terms);
            return Err(MomentError::SeriesNonConvergence {
                terms: max_terms,
                partial: partial.sign * (ln_pref + partial.ln_mag).exp(),
            });
        }
    };
    let total = signed_log_sum(&terms);
    let ln_value = ln_pref + total.ln_mag;
    if ln_value > 709.0 {
        return Err(MomentError::Overflow { ln_value });
    }
    let value = total.sign * ln_value.exp();
    let error_bound = (ln_pref + bound_ln).exp() + value.abs() * 1e-13;
    Ok(OddSeriesRun {
        result: EvalResult {
            value,
            method_used: Method::OddSeries,
            terms_used,
            error_bound,
            warnings: Vec::new(),
        },
        ln_j_magnitudes,
    })
}

/// `E|X|^r` for odd `r >= 1` and nonzero location, via the exact series.
pub fn abs_moment_odd_series(
    p: &VGParams,
    r: u32,
    rel_tol: f64,
    max_terms: usize,
) -> Result<EvalResult, MomentError> {
    Ok(odd_series_run(p, r, rel_tol, max_terms, 0)?.result)
}

/// Diagnostics for the validation suite: the evaluation itself, the value
/// re-summed with `extra` additional series levels, and the magnitudes of the
/// aggregate `j`-terms (for convergence-ratio checks).
pub(crate) fn odd_series_diagnostics(
    p: &VGParams,
    r: u32,
    rel_tol: f64,
    max_terms: usize,
    extra: usize,
) -> Result<(EvalResult, f64, Vec<f64>), MomentError> {
    let base = odd_series_run(p, r, rel_tol, max_terms, 0)?;
    let extended = odd_series_run(p, r, rel_tol, max_terms, extra)?;
    Ok((base.result, extended.result.value, base.ln_j_magnitudes))
}

/// Symmetric (`beta = 0`) odd-order absolute moments.
///
/// `r = 1` uses the Bessel/Struve closed form; higher orders use the finite
/// correction sum. A zero location delegates to the hypergeometric formula,
/// which is the continuous limit of both.
pub fn abs_moment_symmetric(p: &VGParams, r: u32) -> Result<EvalResult, MomentError> {
    if p.beta() != 0.0 {
        return Err(MomentError::MethodPrecondition {
            method: Method::Symmetric,
            why: "requires beta = 0",
        });
    }
    if r % 2 == 0 {
        return Err(MomentError::BadOrder {
            what: "abs_moment_symmetric",
            requirement: "an odd order",
        });
    }
    if p.mu() == 0.0 {
        let mut res = super::abs_moment_mu_zero(p, r as f64)?;
        res.method_used = Method::Symmetric;
        return Ok(res);
    }
    let nu = p.nu();
    let u = p.alpha() * p.mu().abs();
    if r == 1 {
        // E|X| = [u^2 (K_nu L_{nu-1} + K_{nu-1} L_nu)(u)
        //         + u^(nu+1) K_{nu+1}(u) / (sqrt(pi) 2^(nu-1) G(nu+1/2))] / alpha
        let (ln_k_nu, ln_k_nup1, ln_k_num1) = ln_k_trio(nu, u)?;
        let ln_l_nu = specfun_ln_struve(nu, u)?;
        let ln_l_num1 = specfun_ln_struve(nu - 1.0, u)?;
        let ln_products = ln_add_exp(ln_k_nu + ln_l_num1, ln_k_num1 + ln_l_nu);
        let ln_piece1 = 2.0 * u.ln() + ln_products;
        let ln_piece2 = (nu + 1.0) * u.ln() + ln_k_nup1
            - 0.5 * LN_PI
            - (nu - 1.0) * std::f64::consts::LN_2
            - specfun::ln_gamma(nu + 0.5)?;
        let value = (ln_add_exp(ln_piece1, ln_piece2) - p.alpha().ln()).exp();
        let mut res = EvalResult::closed_form(value, Method::Symmetric);
        res.error_bound = value * 1e-11;
        return Ok(res);
    }
    check_existence(p, r as f64)?;
    let ln_pref = ln_prefactor(p, r)?;
    let mut terms = main_term_logs(p, r)?;
    let ln_half_u = (u / 2.0).ln();
    for k in 0..=r {
        let c = (r - k) as f64 / 2.0 + 0.5;
        let ln = specfun::ln_binomial(r, k)
            + k as f64 * ln_half_u
            + specfun::ln_gamma(c)?
            + specfun::ln_gamma(nu + c)?
            + ln_big_g(nu + (r - k) as f64, nu, u)?;
        let sign = -1.0 * if k % 2 == 0 { 1.0 } else { -1.0 };
        terms.push(SignedLog::new(sign, ln));
    }
    let total = signed_log_sum(&terms);
    let value = total.sign * (ln_pref + total.ln_mag).exp();
    let mut res = EvalResult::closed_form(value, Method::Symmetric);
    res.error_bound = value.abs() * 1e-11;
    Ok(res)
}

fn ln_k_trio(nu: f64, x: f64) -> Result<(f64, f64, f64), MomentError> {
    let a = specfun::ln_bessel_k(nu, x)?;
    let b = specfun::ln_bessel_k(nu + 1.0, x)?;
    let c = specfun::ln_bessel_k(nu - 1.0, x)?;
    Ok((a, b, c))
}

fn specfun_ln_struve(order: f64, x: f64) -> Result<f64, MomentError> {
    Ok(specfun::ln_struve_l(order, x)?)
}

/// Default `alpha |mu|` above which the asymptotic approximation warns.
pub const ASYMPTOTIC_U_THRESHOLD: f64 = 0.1;

/// Small-`alpha mu` approximation of `E|X|^r` for odd `r`: the finite main
/// sum only. The leading remainder magnitude is reported as `error_bound`
/// (`G(nu) u^(r+1)/(r+1)` for `nu > 0`, a log-weighted term at `nu = 0`, and
/// a `u^(r+1+2 nu)` term for `-1/2 < nu < 0`).
pub fn abs_moment_asymptotic(p: &VGParams, r: u32) -> Result<EvalResult, MomentError> {
    abs_moment_asymptotic_with_threshold(p, r, ASYMPTOTIC_U_THRESHOLD)
}

/// Same as [`abs_moment_asymptotic`] with an explicit warning threshold.
pub fn abs_moment_asymptotic_with_threshold(
    p: &VGParams,
    r: u32,
    u_threshold: f64,
) -> Result<EvalResult, MomentError> {
    if r % 2 == 0 {
        return Err(MomentError::BadOrder {
            what: "abs_moment_asymptotic",
            requirement: "an odd order",
        });
    }
    check_existence(p, r as f64)?;
    let ws = SeriesWorkspace::new(p);
    if ws.z() > Z_SERIES_LIMIT {
        return Err(MomentError::SeriesNonConvergence {
            terms: 0,
            partial: f64::NAN,
        });
    }
    if p.mu() == 0.0 {
        // u = 0: the main term IS the exact zero-location value
        let mut res = super::abs_moment_mu_zero(p, r as f64)?;
        res.method_used = Method::Asymptotic;
        res.error_bound = 0.0;
        return Ok(res);
    }
    let nu = p.nu();
    let u = ws.u;
    let ln_pref = ln_prefactor(p, r)?;
    let terms = main_term_logs(p, r)?;
    let total = signed_log_sum(&terms);
    let value = total.sign * (ln_pref + total.ln_mag).exp();
    let rf = r as f64;
    let ln_remainder = if nu > 0.0 {
        specfun::ln_gamma(nu)? + (rf + 1.0) * u.ln() - (rf + 1.0).ln()
    } else if nu == 0.0 {
        (2.0 / (rf + 1.0)).ln() + (rf + 1.0) * u.ln() + u.ln().abs().ln()
    } else {
        -2.0 * nu * std::f64::consts::LN_2
            + specfun::ln_gamma(-nu)?
            + specfun::ln_gamma(rf + 1.0)?
            + specfun::ln_gamma(2.0 * nu + 1.0)?
            - specfun::ln_gamma(rf + 2.0 * nu + 2.0)?
            + (rf + 1.0 + 2.0 * nu) * u.ln()
    };
    let mut warnings = Vec::new();
    if u > u_threshold {
        warnings.push(format!(
            "alpha|mu| = {u:.3e} exceeds the asymptotic-regime threshold {u_threshold}"
        ));
    }
    Ok(EvalResult {
        value,
        method_used: Method::Asymptotic,
        terms_used: 0,
        error_bound: (ln_pref + ln_remainder).exp(),
        warnings,
    })
}
