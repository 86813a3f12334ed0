//! Independent ground truth: adaptive quadrature of the moment integrals and
//! of the cumulative Bessel integral, plus Monte-Carlo estimators.
//!
//! Nothing here shares code with the formula engine beyond the Bessel kernel
//! in the integrand, so agreement between the two is a genuine cross-check.

use crate::quadrature::{adaptive_quad, ln_int_tpow_kbessel, QuadOutcome};
use crate::specfun::{self, ln_bessel_k};
use crate::vgdist::VGParams;
use thiserror::Error;

/// Quadrature result with a conservative absolute error estimate.
#[derive(Debug, Clone, Copy)]
pub struct QuadResult {
    pub value: f64,
    pub est_abs_err: f64,
    pub subdivisions: usize,
    /// Truncation point of the infinite tails (largest |t| integrated to).
    pub tail_cutoff: f64,
}

#[derive(Debug, Clone, Error)]
pub enum QuadError {
    #[error("quadrature budget exhausted (partial value {partial}, error {err_est})")]
    Budget { partial: f64, err_est: f64 },
    #[error("moment order outside the existence range: need r > max(-1, -2 nu - 1)")]
    Existence,
    #[error(transparent)]
    SpecFun(#[from] specfun::SpecFunError),
}

/// Integrand pieces of `E|X|^r` in the rescaled variable `t = alpha (x - mu)`:
/// `E|X|^r = M alpha^{-(nu+r+1)} int |t+u|^r e^{g t} |t|^nu K_nu(|t|) dt`.
struct MomentIntegrand {
    r: f64,
    u: f64,
    gamma: f64,
    nu: f64,
    ln_scale: f64,
}

impl MomentIntegrand {
    fn ln_f(&self, t: f64) -> f64 {
        let s = t + self.u;
        let at = t.abs();
        if at == 0.0 || s == 0.0 && self.r < 0.0 {
            return f64::NEG_INFINITY;
        }
        let ln_k = match ln_bessel_k(self.nu, at) {
            Ok(v) => v,
            Err(_) => return f64::NEG_INFINITY,
        };
        let pow_term = if s == 0.0 {
            if self.r == 0.0 {
                0.0
            } else {
                return f64::NEG_INFINITY;
            }
        } else {
            self.r * s.abs().ln()
        };
        pow_term + self.gamma * t + self.nu * at.ln() + ln_k
    }

    fn f(&self, t: f64) -> f64 {
        (self.ln_f(t) - self.ln_scale).exp()
    }
}

const MAX_PANELS: usize = 6000;

/// Adaptive quadrature of `E|X|^r` with kink/singularity-aware subdivision.
///
/// The domain is split at `x = 0` and `x = mu`; panels adjacent to the
/// density's singular point are integrated under `t = s^8`; infinite tails
/// are cut where an analytic bound on the remainder falls below
/// `rel_tol * 1e-3 * |estimate|`.
pub fn quad_abs_moment(p: &VGParams, r: f64, rel_tol: f64) -> Result<QuadResult, QuadError> {
    if !(r > (-1.0f64).max(-2.0 * p.nu() - 1.0)) {
        return Err(QuadError::Existence);
    }
    let u = p.alpha() * p.mu();
    let gamma = p.gamma_ratio();
    let nu = p.nu();
    let mut ig = MomentIntegrand {
        r,
        u,
        gamma,
        nu,
        ln_scale: 0.0,
    };
    // probe the log magnitude to fix the linear-space scale
    let mut probes = vec![0.3, 1.0, 3.0, -0.3, -1.0, -3.0, (nu + r + 1.0).max(1.0)];
    if u != 0.0 {
        probes.extend_from_slice(&[-u + 0.1 * u.abs(), -u - 0.1 * u.abs(), -0.5 * u, -2.0 * u]);
    }
    ig.ln_scale = probes
        .into_iter()
        .map(|t| ig.ln_f(t))
        .fold(f64::NEG_INFINITY, f64::max);
    if ig.ln_scale == f64::NEG_INFINITY {
        return Err(QuadError::Budget {
            partial: f64::NAN,
            err_est: f64::INFINITY,
        });
    }

    // prefactor C = M / alpha^(nu + r + 1) applied at the end
    let ln_pref = p.ln_norm_const() - (nu + r + 1.0) * p.alpha().ln() + ig.ln_scale;

    // breakpoints in t-space: the density kink at t = 0 and the |x|^r kink at
    // t = -u
    let mut bps = vec![0.0];
    if u != 0.0 {
        bps.push(-u);
    }
    bps.sort_by(|a, b| a.partial_cmp(b).unwrap());

    // rough pass to anchor tolerances and the tail targets
    let rough = integrate_segments(&ig, &bps, 1e-4, None)?;
    let tail_target = rel_tol * 1e-3 * rough.value.abs();
    let (t_right, right_bound) = tail_point(&ig, *bps.last().unwrap(), 1.0 - gamma, tail_target);
    let (t_left, left_bound) = tail_point_left(&ig, bps[0], 1.0 + gamma, tail_target);
    let fine = integrate_segments(&ig, &bps, rel_tol * 0.2, Some((t_left, t_right)))?;

    let pref = ln_pref.exp();
    let value = fine.value * pref;
    let est = (fine.err_est + left_bound + right_bound) * pref;
    Ok(QuadResult {
        value,
        est_abs_err: est,
        subdivisions: fine.panels,
        tail_cutoff: t_right.max(-t_left),
    })
}

struct SegTotal {
    value: f64,
    err_est: f64,
    panels: usize,
}

/// Integrate over `[t_left, t_right]` (defaults: `bps +- 40/(1 -+ gamma)`)
/// split at the breakpoints, substituting `t = +-s^8` on the panels that
/// touch `t = 0` and `t = -u` when the local exponent makes them singular.
fn integrate_segments(
    ig: &MomentIntegrand,
    bps: &[f64],
    rel_tol: f64,
    tails: Option<(f64, f64)>,
) -> Result<SegTotal, QuadError> {
    let (t_left, t_right) = tails.unwrap_or((
        bps[0] - 40.0 / (1.0 + ig.gamma),
        bps[bps.len() - 1] + 40.0 / (1.0 - ig.gamma),
    ));
    let mut edges = vec![t_left];
    edges.extend_from_slice(bps);
    edges.push(t_right);

    let mut value = 0.0;
    let mut err = 0.0;
    let mut panels = 0usize;
    for w in edges.windows(2) {
        let (a, b) = (w[0], w[1]);
        if b <= a {
            continue;
        }
        // which endpoints need a smoothing substitution?
        let sing_left = needs_substitution(ig, a, bps);
        let sing_right = needs_substitution(ig, b, bps);
        let width = b - a;
        let delta = (width * 0.5).min(1.0);
        let mut a_in = a;
        let mut b_in = b;
        if sing_left {
            let q = quad_substituted(ig, a, a + delta, true, rel_tol)?;
            value += q.value;
            err += q.err_est;
            panels += q.panels;
            a_in = a + delta;
        }
        if sing_right && b_in - a_in > 0.0 {
            let q = quad_substituted(ig, b - delta.min(b_in - a_in), b, false, rel_tol)?;
            value += q.value;
            err += q.err_est;
            panels += q.panels;
            b_in = b - delta.min(b - a_in);
        }
        if b_in > a_in {
            let q =
                adaptive_quad(&|t| ig.f(t), a_in, b_in, 0.0, rel_tol, MAX_PANELS).map_err(|e| {
                    QuadError::Budget {
                        partial: e.value,
                        err_est: e.err_est,
                    }
                })?;
            value += q.value;
            err += q.err_est;
            panels += q.panels;
        }
    }
    Ok(SegTotal {
        value,
        err_est: err,
        panels,
    })
}

fn needs_substitution(ig: &MomentIntegrand, t: f64, bps: &[f64]) -> bool {
    if !bps.contains(&t) {
        return false;
    }
    if t == 0.0 {
        // |t|^nu K_nu(|t|) has exponent 2 nu (nu < 0), a log (nu = 0) or a
        // |t|^(2 nu) cusp (0 < nu < 1) at the origin
        ig.nu < 1.0
    } else {
        // |t + u|^r kink at t = -u; only sub-C1 powers bother the rule
        ig.r < 1.0
    }
}

/// Integrate `[a, b]` where the singular endpoint is `a` (`from_left`) or `b`,
/// under the substitution `distance = s^8`.
fn quad_substituted(
    ig: &MomentIntegrand,
    a: f64,
    b: f64,
    from_left: bool,
    rel_tol: f64,
) -> Result<QuadOutcome, QuadError> {
    let width = b - a;
    let edge = if from_left { a } else { b };
    let sgn = if from_left { 1.0 } else { -1.0 };
    let f = |s: f64| {
        let d = s.powi(8);
        ig.f(edge + sgn * d) * 8.0 * s.powi(7)
    };
    adaptive_quad(&f, 0.0, width.powf(0.125), 0.0, rel_tol, MAX_PANELS).map_err(|e| {
        QuadError::Budget {
            partial: e.value,
            err_est: e.err_est,
        }
    })
}

/// Right tail: smallest `T` past `start` with
/// `int_T^inf (t+|u|)^r t^(nu-1/2) e^(-decay t) C_K dt < target` (rescaled).
fn tail_point(ig: &MomentIntegrand, start: f64, decay: f64, target: f64) -> (f64, f64) {
    let mut t = (start + 5.0).max(1.0);
    for _ in 0..60 {
        let bound = tail_bound(ig, t, decay);
        if bound < target || !bound.is_finite() {
            return (t, bound.max(0.0));
        }
        t *= 1.5;
    }
    (t, tail_bound(ig, t, decay).max(0.0))
}

fn tail_point_left(ig: &MomentIntegrand, start: f64, decay: f64, target: f64) -> (f64, f64) {
    // mirror image: integrate s = -t from |start|+5 outward
    let mirrored = MomentIntegrand {
        r: ig.r,
        u: -ig.u,
        gamma: -ig.gamma,
        nu: ig.nu,
        ln_scale: ig.ln_scale,
    };
    let (t, bound) = tail_point(&mirrored, -start, decay, target);
    (-t, bound)
}

/// Analytic bound on the rescaled integrand tail past `T >= 1`, using
/// `K_nu(t) <= C_K t^(-1/2) e^(-t)` with an empirically anchored `C_K`.
fn tail_bound(ig: &MomentIntegrand, t_point: f64, decay: f64) -> f64 {
    let ck = match ln_bessel_k(ig.nu, t_point) {
        Ok(ln_k) => {
            let anchored = (ln_k + t_point + 0.5 * t_point.ln()).exp();
            2.0 * anchored.max((std::f64::consts::PI / 2.0).sqrt())
        }
        Err(_) => return f64::INFINITY,
    };
    let s = ig.r + ig.nu + 0.5;
    let growth = (1.0 + ig.u.abs() / t_point).powf(ig.r.max(0.0));
    let ln_inc = match upper_gamma_ln(s, decay * t_point) {
        Some(v) => v,
        None => return f64::INFINITY,
    };
    (ck * growth).ln().exp() * (ln_inc - s * decay.ln() - ig.ln_scale).exp()
}

fn upper_gamma_ln(a: f64, x: f64) -> Option<f64> {
    if x > a + 1.0 {
        specfun::ln_upper_gamma_cf(a, x).ok().map(|ln_s| ln_s - x)
    } else {
        specfun::upper_gamma(a, x).ok().map(|v| v.ln())
    }
}

/// Monte-Carlo estimate of `E|X|^r`: `(mean, standard_error)`.
///
/// Draws are taken in fixed-size chunks whose seeds derive deterministically
/// from the master seed, so any chunk schedule reproduces the same stream.
pub fn mc_abs_moment(p: &VGParams, r: f64, n: usize, seed: u64) -> (f64, f64) {
    assert!(n >= 10_000, "Monte-Carlo needs n >= 1e4");
    const CHUNK: usize = 65_536;
    let mut s1 = 0.0f64;
    let mut s2 = 0.0f64;
    let mut done = 0usize;
    let mut chunk_idx = 0u64;
    while done < n {
        let take = CHUNK.min(n - done);
        let xs = p.sample(splitmix64(seed, chunk_idx), take);
        for x in xs {
            let v = x.abs().powf(r);
            s1 += v;
            s2 += v * v;
        }
        done += take;
        chunk_idx += 1;
    }
    let nf = n as f64;
    let mean = s1 / nf;
    let var = (s2 / nf - mean * mean).max(0.0);
    (mean, (var / (nf - 1.0)).sqrt())
}

fn splitmix64(seed: u64, stream: u64) -> u64 {
    let mut z = seed
        .wrapping_add(stream.wrapping_mul(0x9E37_79B9_7F4A_7C15))
        .wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// `int_0^x t^mu K_nu(t) dt` for `mu >= nu > -1/2`, singularity-aware near 0.
pub fn quad_kbessel_integral(
    order_mu: f64,
    order_nu: f64,
    x: f64,
    rel_tol: f64,
) -> Result<QuadResult, QuadError> {
    if !(order_nu > -0.5) || order_mu < order_nu {
        return Err(QuadError::SpecFun(specfun::SpecFunError::Domain {
            what: "quad_kbessel_integral requires mu >= nu > -1/2",
        }));
    }
    if !(x > 0.0) {
        return Err(QuadError::SpecFun(specfun::SpecFunError::Domain {
            what: "quad_kbessel_integral requires x > 0",
        }));
    }
    let q = ln_int_tpow_kbessel(order_mu, order_nu, x, rel_tol).map_err(|e| QuadError::Budget {
        partial: e.value,
        err_est: e.err_est,
    })?;
    let value = q.ln_value.exp();
    Ok(QuadResult {
        value,
        est_abs_err: value * q.rel_err_est,
        subdivisions: q.panels,
        tail_cutoff: x,
    })
}

/// `int_0^u (u - t)^r t^(nu + j) K_nu(t) dt` — the small-`u` remainder
/// integral behind the asymptotic approximation.
pub fn quad_lemma_integral(
    nu: f64,
    r: f64,
    j: u32,
    u: f64,
    rel_tol: f64,
) -> Result<QuadResult, QuadError> {
    assert!(u > 0.0 && r >= 1.0);
    let jf = j as f64;
    let ln_h = |t: f64| -> f64 {
        if t <= 0.0 || t >= u {
            return f64::NEG_INFINITY;
        }
        match ln_bessel_k(nu, t) {
            Ok(ln_k) => r * (u - t).ln() + (nu + jf) * t.ln() + ln_k,
            Err(_) => f64::NEG_INFINITY,
        }
    };
    let shift = [0.25 * u, 0.5 * u, 0.75 * u]
        .into_iter()
        .map(ln_h)
        .fold(f64::NEG_INFINITY, f64::max);
    let g = |t: f64| (ln_h(t) - shift).exp();
    // t = s^8 off the origin where t^(nu+j) K_nu can be singular
    let half = 0.5 * u;
    let fs = |s: f64| {
        let t = s.powi(8);
        8.0 * s.powi(7) * g(t)
    };
    let q1 = adaptive_quad(&fs, 0.0, half.powf(0.125), 0.0, rel_tol * 0.5, 2000);
    let q2 = adaptive_quad(&g, half, u, 0.0, rel_tol * 0.5, 2000);
    match (q1, q2) {
        (Ok(a), Ok(b)) => {
            let value = (a.value + b.value) * shift.exp();
            Ok(QuadResult {
                value,
                est_abs_err: (a.err_est + b.err_est) * shift.exp(),
                subdivisions: a.panels + b.panels,
                tail_cutoff: u,
            })
        }
        (Err(e), _) | (_, Err(e)) => Err(QuadError::Budget {
            partial: e.value * shift.exp(),
            err_est: e.err_est * shift.exp(),
        }),
    }
}

/// Quadrature CDF of the density on an ascending grid of evaluation points.
pub fn quad_cdf_grid(p: &VGParams, xs: &[f64], rel_tol: f64) -> Result<Vec<f64>, QuadError> {
    assert!(xs.windows(2).all(|w| w[0] < w[1]), "grid must be ascending");
    // left tail: P(X <= xs[0]) = E|X|^0 restricted — reuse the moment
    // integrand with r = 0 over (-inf, xs[0]]
    let first = xs[0];
    let mut cdf = Vec::with_capacity(xs.len());
    let tail = quad_left_tail_prob(p, first, rel_tol)?;
    let mut acc = tail;
    cdf.push(acc);
    for w in xs.windows(2) {
        let (a, b) = (w[0], w[1]);
        let f = |x: f64| p.pdf(x);
        // split at the density kink if it falls inside
        let mut inc = 0.0;
        let mut err = 0.0;
        if a < p.mu() && p.mu() < b {
            for (lo, hi) in [(a, p.mu()), (p.mu(), b)] {
                let q = adaptive_quad(&f, lo, hi, 1e-13, rel_tol, MAX_PANELS).map_err(|e| {
                    QuadError::Budget {
                        partial: e.value,
                        err_est: e.err_est,
                    }
                })?;
                inc += q.value;
                err += q.err_est;
            }
        } else {
            let q = adaptive_quad(&f, a, b, 1e-13, rel_tol, MAX_PANELS).map_err(|e| {
                QuadError::Budget {
                    partial: e.value,
                    err_est: e.err_est,
                }
            })?;
            inc = q.value;
            err = q.err_est;
        }
        let _ = err;
        acc += inc;
        cdf.push(acc);
    }
    Ok(cdf)
}

fn quad_left_tail_prob(p: &VGParams, upto: f64, rel_tol: f64) -> Result<f64, QuadError> {
    // integrate pdf over [upto - 60/(alpha(1+gamma)), upto]
    let width = 60.0 / (p.alpha() * (1.0 + p.gamma_ratio()));
    let lo = upto - width;
    let f = |x: f64| p.pdf(x);
    let mut edges = vec![lo];
    if lo < p.mu() && p.mu() < upto {
        edges.push(p.mu());
    }
    edges.push(upto);
    let mut acc = 0.0;
    for w in edges.windows(2) {
        let q = adaptive_quad(&f, w[0], w[1], 1e-14, rel_tol, MAX_PANELS).map_err(|e| {
            QuadError::Budget {
                partial: e.value,
                err_est: e.err_est,
            }
        })?;
        acc += q.value;
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::specfun::test_util::assert_rel;

    #[test]
    fn laplace_first_absolute_moment() {
        // VG(1/2, 1, 0, 0) is the standard Laplace: E|X| = 1
        let p = VGParams::new(0.5, 1.0, 0.0, 0.0).unwrap();
        let q = quad_abs_moment(&p, 1.0, 1e-10).unwrap();
        assert_rel(q.value, 1.0, 1e-9);
        // error estimate is conservative (>= 2x the true error) yet within tol
        let true_err = (q.value - 1.0).abs();
        assert!(q.est_abs_err >= 2.0 * true_err);
        assert!(q.est_abs_err <= 1e-10 * q.value * 1.5 + 1e-300);
    }

    #[test]
    fn laplace_shifted_closed_form() {
        // E|X| for AL(2, 1, 1): 1 + 2/3 + e^{-3}/6
        let p = VGParams::new(0.5, 2.0, 1.0, 1.0).unwrap();
        let expect = 1.0 + 2.0 / 3.0 + (-3.0f64).exp() / 6.0;
        let q = quad_abs_moment(&p, 1.0, 1e-10).unwrap();
        assert_rel(q.value, expect, 1e-9);
        assert!(q.est_abs_err >= 2.0 * (q.value - expect).abs());
    }

    #[test]
    fn normalization_r_zero() {
        for p in [
            VGParams::new(-0.3, 2.0, 1.4, 0.6).unwrap(),
            VGParams::new(0.0, 1.0, 0.5, -0.9).unwrap(),
            VGParams::new(1.87, 271.1, -2.342, 2.585e-4).unwrap(),
            VGParams::new(5.0, 2.0, 1.8, 2.0).unwrap(),
        ] {
            let q = quad_abs_moment(&p, 0.0, 1e-9).unwrap();
            assert_rel(q.value, 1.0, 1e-8);
        }
    }

    #[test]
    fn frozen_reference_moments() {
        let p = VGParams::new(0.3, 1.0, 0.5, 0.0).unwrap();
        assert_rel(
            quad_abs_moment(&p, 2.5, 1e-10).unwrap().value,
            10.467_464_900_145_737,
            1e-8,
        );
        let p = VGParams::new(1.0, 2.0, 1.0, 0.5).unwrap();
        assert_rel(
            quad_abs_moment(&p, 3.0, 1e-10).unwrap().value,
            13.799_415_116_218_635,
            1e-8,
        );
    }

    #[test]
    fn mc_matches_laplace() {
        let p = VGParams::new(0.5, 1.0, 0.0, 0.0).unwrap();
        let (est, se) = mc_abs_moment(&p, 1.0, 1_000_000, 7);
        assert!((est - 1.0).abs() < 4.0 * se, "est {est} se {se}");
        assert!(se < 2e-3);
    }

    #[test]
    fn mc_is_deterministic() {
        let p = VGParams::new(1.0, 2.0, 0.5, 0.3).unwrap();
        let a = mc_abs_moment(&p, 2.0, 50_000, 11);
        let b = mc_abs_moment(&p, 2.0, 50_000, 11);
        assert_eq!(a, b);
    }

    #[test]
    fn kbessel_integral_identity() {
        // int_0^x t^{nu+1} K_nu = 2^nu G(nu+1) - x^{nu+1} K_{nu+1}(x)
        for (nu, x) in [(0.5, 1.0), (1.0, 2.5), (1.87, 0.5), (-0.3, 3.0)] {
            let q = quad_kbessel_integral(nu + 1.0, nu, x, 1e-10).unwrap();
            let expect = 2f64.powf(nu) * specfun::gamma_fn(nu + 1.0).unwrap()
                - x.powf(nu + 1.0) * specfun::bessel_k(nu + 1.0, x, false).unwrap().value;
            assert_rel(q.value, expect, 1e-9);
        }
    }

    #[test]
    fn kbessel_integral_saturates() {
        // by x = 80 the integral reaches its x -> inf limit
        let (mu, nu) = (2.37, 0.87);
        let q = quad_kbessel_integral(mu, nu, 80.0, 1e-10).unwrap();
        let expect = 2f64.powf(mu - 1.0)
            * specfun::gamma_fn((mu - nu + 1.0) / 2.0).unwrap()
            * specfun::gamma_fn((mu + nu + 1.0) / 2.0).unwrap();
        assert_rel(q.value, expect, 1e-8);
    }

    #[test]
    fn quad_and_mc_agree_across_parameter_shapes() {
        // each dispatch regime: negative/zero/positive shape, skewed and
        // symmetric, zero and nonzero location
        let cases = [
            (-0.3, 0.7, 0.6, 1.0),
            (0.0, 0.0, -0.9, 2.0),
            (0.5, 0.3, 0.0, 1.0),
            (1.0, 0.7, 0.035, 3.0),
            (1.87, 0.9, -1.0, 2.0),
            (2.5, 0.3, 1.0, 4.0),
        ];
        for (nu, g, mu, r) in cases {
            let p = VGParams::new(nu, 2.0, 2.0 * g, mu).unwrap();
            let q = quad_abs_moment(&p, r, 1e-9).unwrap();
            let (est, se) = mc_abs_moment(&p, r, 1_000_000, 99);
            assert!(
                (q.value - est).abs() < 4.0 * se,
                "nu={nu} g={g} mu={mu} r={r}: quad {} vs mc {est} (se {se})",
                q.value
            );
        }
    }

    #[test]
    fn cdf_grid_reaches_one() {
        let p = VGParams::new(1.0, 2.0, 0.5, 0.3).unwrap();
        let lo = -12.0;
        let hi = 14.0;
        let xs: Vec<f64> = (0..200)
            .map(|i| lo + (hi - lo) * i as f64 / 199.0)
            .collect();
        let cdf = quad_cdf_grid(&p, &xs, 1e-9).unwrap();
        assert!(cdf.windows(2).all(|w| w[1] >= w[0] - 1e-12));
        assert!((cdf.last().unwrap() - 1.0).abs() < 1e-6);
    }
}
