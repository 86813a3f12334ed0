//! Modified Bessel function of the second kind, real order.
//!
//! The order is reduced to `u in [-1/2, 1/2]`; `K_u` and `K_{u+1}` come from
//! Temme's series for `x <= 2` (Temme, J. Comput. Phys. 19, 1975) and from
//! Steed's continued fraction for `x > 2` (Thompson & Barnett, J. Comput.
//! Phys. 64, 1986). Upward recurrence in the order, with overflow rescaling,
//! reaches the requested order. A log-magnitude entry point serves the
//! assembly layers, which pair `e^x K` with `e^-x`-scaled companions.

use super::gamma::temme_gamma_pair;
use super::{recip_gamma_1p, FnEval, SpecFunError};

const MAX_ITER: usize = 1000;
const RESCALE_THRESHOLD: f64 = 1e280;
const LN_RESCALE: f64 = 644.747_326_600_714_3; // ln(1e280)

/// `K_order(x)`, optionally scaled by `e^x`.
///
/// Relative error <= 1e-12 for `1e-6 <= x <= 700`, `|order| <= 50`. When the
/// unscaled value exceeds the double range the call fails with an overflow
/// error carrying `ln K`; the scaled form always succeeds, shifting its
/// offset beyond `-x` if even `e^x K` overflows.
pub fn bessel_k(order: f64, x: f64, scaled: bool) -> Result<FnEval, SpecFunError> {
    let ln_k = ln_bessel_k(order, x)?;
    if scaled {
        let v = (ln_k + x).exp();
        if v.is_finite() && v != 0.0 {
            Ok(FnEval::scaled(v, -x, v * 1e-13))
        } else {
            Ok(FnEval::from_ln(ln_k, 1e-13))
        }
    } else {
        let v = ln_k.exp();
        if v.is_finite() {
            Ok(FnEval::exact(v, v * 1e-13))
        } else {
            Err(SpecFunError::Overflow {
                what: "bessel_k overflows; request the scaled form",
                ln_value: ln_k,
            })
        }
    }
}

/// `ln K_order(x)` for `x > 0`; valid far outside the double range.
pub fn ln_bessel_k(order: f64, x: f64) -> Result<f64, SpecFunError> {
    Ok(ln_k_core(order.abs(), x)?.0)
}

/// `(ln K_v(x), ln K_{v-1}(x))` with the signed order handled through the
/// evenness of `K` in its order (`K_{v-1} = K_{1-v}` for `v < 1`).
pub(crate) fn ln_bessel_k_duo(order: f64, x: f64) -> Result<(f64, f64), SpecFunError> {
    let ln_kv = ln_k_core(order.abs(), x)?.0;
    let ln_kvm1 = ln_k_core((order - 1.0).abs(), x)?.0;
    Ok((ln_kv, ln_kvm1))
}

/// `(ln K_v, ln K_{v+1})` for `v >= 0` via order reduction plus upward
/// recurrence `K_{w+1} = K_{w-1} + (2w/x) K_w`.
fn ln_k_core(v: f64, x: f64) -> Result<(f64, f64), SpecFunError> {
    debug_assert!(v >= 0.0);
    if !(x > 0.0) || !x.is_finite() {
        return Err(SpecFunError::Domain {
            what: "bessel_k requires x > 0",
        });
    }
    let n = v.round();
    let u = v - n;
    let n = n as usize;
    let (mut k0, mut k1, scaled) = if x <= 2.0 {
        let (a, b) = temme_k_series(u, x)?;
        (a, b, false)
    } else {
        let (a, b) = steed_cf2_k(u, x)?;
        (a, b, true)
    };
    let mut ln_shift = 0.0f64;
    for i in 0..n {
        let w = u + 1.0 + i as f64;
        let next = k0 + (2.0 * w / x) * k1;
        k0 = k1;
        k1 = next;
        if k1 > RESCALE_THRESHOLD {
            k0 /= RESCALE_THRESHOLD;
            k1 /= RESCALE_THRESHOLD;
            ln_shift += LN_RESCALE;
        }
    }
    if scaled {
        ln_shift -= x;
    }
    Ok((k0.ln() + ln_shift, k1.ln() + ln_shift))
}

/// Temme's series: unscaled `(K_u(x), K_{u+1}(x))` for `x <= 2`, `|u| <= 1/2`.
fn temme_k_series(u: f64, x: f64) -> Result<(f64, f64), SpecFunError> {
    debug_assert!(x <= 2.0 && u.abs() <= 0.5 + 1e-12);
    let a = (x / 2.0).ln();
    let sigma = -a * u;
    let c = if u.abs() < 1e-30 {
        1.0
    } else {
        (std::f64::consts::PI * u).sin() / (std::f64::consts::PI * u)
    };
    let d = if sigma.abs() < 1e-30 {
        1.0
    } else {
        sigma.sinh() / sigma
    };
    let (g1, g2) = temme_gamma_pair(u);
    let mut f = (sigma.cosh() * g1 - a * d * g2) / c;
    let b = (u * a).exp(); // (x/2)^u
    let mut p = 1.0 / (2.0 * b * recip_gamma_1p(u));
    let mut q = b / (2.0 * recip_gamma_1p(-u));
    let mut h = p;
    let mut coef = 1.0f64;
    let mut sum = f;
    let mut sum1 = h;
    let z = x * x / 4.0;
    for k in 1..MAX_ITER {
        let kf = k as f64;
        f = (kf * f + p + q) / (kf * kf - u * u);
        p /= kf - u;
        q /= kf + u;
        h = p - kf * f;
        coef *= z / kf;
        sum += coef * f;
        sum1 += coef * h;
        if (coef * f).abs() < sum.abs() * 1e-17 {
            return Ok((sum, 2.0 * sum1 / x));
        }
    }
    Err(SpecFunError::NonConvergence {
        what: "Temme Bessel-K series",
        partial: sum,
    })
}

/// Steed's continued fraction: scaled `(e^x K_u, e^x K_{u+1})` for `x > 2`.
fn steed_cf2_k(u: f64, x: f64) -> Result<(f64, f64), SpecFunError> {
    debug_assert!(x > 2.0 && u.abs() <= 0.5 + 1e-12);
    let mut a = u * u - 0.25;
    let mut b = 2.0 * (x + 1.0);
    let mut d = 1.0 / b;
    let mut delta = d;
    let mut f = d;
    let mut prev = 0.0f64;
    let mut cur = 1.0f64;
    let mut q = -a;
    let mut c = -a;
    let mut s = 1.0 + q * delta;
    for k in 2..MAX_ITER {
        let kf = k as f64;
        a -= 2.0 * (kf - 1.0);
        b += 2.0;
        d = 1.0 / (a * d + b);
        delta *= b * d - 1.0;
        f += delta;
        let t = (prev - (b - 2.0) * cur) / a;
        prev = cur;
        cur = t;
        c *= -a / kf;
        q += c * t;
        s += q * delta;
        if (q * delta).abs() < s.abs() * 5e-17 {
            let k_scaled = (std::f64::consts::PI / (2.0 * x)).sqrt() / s;
            let k1_scaled = k_scaled * (0.5 + u + x + (u * u - 0.25) * f) / x;
            return Ok((k_scaled, k1_scaled));
        }
    }
    Err(SpecFunError::NonConvergence {
        what: "Bessel-K continued fraction",
        partial: (std::f64::consts::PI / (2.0 * x)).sqrt() / s,
    })
}
