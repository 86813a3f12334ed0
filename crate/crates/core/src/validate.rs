//! Validation suites: the formula-vs-oracle grid, the special-function
//! identity suite, the series truncation-bound suite, and the S&P 500
//! reproduction report. Shared by the `validate` CLI subcommand and the
//! acceptance test target.

use crate::moments::{self, MomentQuery};
use crate::oracle;
use crate::specfun::{self, GArgs};
use crate::vgdist::VGParams;

/// Outcome of one validation case.
#[derive(Debug, Clone)]
pub struct CaseOutcome {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl CaseOutcome {
    fn pass(name: String, detail: String) -> Self {
        CaseOutcome {
            name,
            passed: true,
            detail,
        }
    }
    fn fail(name: String, detail: String) -> Self {
        CaseOutcome {
            name,
            passed: false,
            detail,
        }
    }
    fn check(name: String, ok: bool, detail: String) -> Self {
        if ok {
            Self::pass(name, detail)
        } else {
            Self::fail(name, detail)
        }
    }
}

/// A batch of validation outcomes.
#[derive(Debug, Default)]
pub struct SuiteReport {
    pub cases: Vec<CaseOutcome>,
}

impl SuiteReport {
    pub fn passed(&self) -> usize {
        self.cases.iter().filter(|c| c.passed).count()
    }
    pub fn failed(&self) -> Vec<&CaseOutcome> {
        self.cases.iter().filter(|c| !c.passed).collect()
    }
    pub fn all_passed(&self) -> bool {
        self.cases.iter().all(|c| c.passed)
    }
    fn push(&mut self, c: CaseOutcome) {
        self.cases.push(c);
    }
}

fn rel_diff(a: f64, b: f64) -> f64 {
    if b == 0.0 {
        a.abs()
    } else {
        ((a - b) / b).abs()
    }
}

/// Shape/skew/location/order grid values behind the formula-vs-oracle suite.
pub const GRID_NU: [f64; 6] = [-0.3, 0.0, 0.5, 1.0, 1.87, 2.5];
pub const GRID_GAMMA: [f64; 4] = [0.0, 0.3, 0.7, 0.9];
pub const GRID_ALPHA_MU: [f64; 5] = [-2.0, -0.07, 0.0, 0.07, 2.0];
pub const GRID_R: [u32; 5] = [1, 2, 3, 4, 5];

/// Dispatched formula vs adaptive quadrature on the standard grid;
/// `quick` restricts to a subset that runs in well under a minute.
pub fn formula_oracle_grid(quick: bool, tol: f64) -> SuiteReport {
    let alpha = 2.0;
    let mut report = SuiteReport::default();
    let (nus, gammas, alpha_mus, rs): (&[f64], &[f64], &[f64], &[u32]) = if quick {
        (&[0.5, 1.87], &[0.0, 0.7], &[0.0, 0.07, 2.0], &[1, 2, 3])
    } else {
        (&GRID_NU, &GRID_GAMMA, &GRID_ALPHA_MU, &GRID_R)
    };
    for &nu in nus {
        for &g in gammas {
            for &am in alpha_mus {
                for &r in rs {
                    let p = match VGParams::new(nu, alpha, g * alpha, am / alpha) {
                        Ok(p) => p,
                        Err(e) => {
                            report.push(CaseOutcome::fail(
                                format!("grid nu={nu} g={g} am={am} r={r}"),
                                e.to_string(),
                            ));
                            continue;
                        }
                    };
                    let name =
                        format!("formula-vs-quad nu={nu} beta/alpha={g} alpha*mu={am} r={r}");
                    let q = MomentQuery::absolute(r as f64).with_rel_tol(1e-11);
                    let formula = match moments::moment(&p, &q) {
                        Ok(v) => v,
                        Err(e) => {
                            report.push(CaseOutcome::fail(name, e.to_string()));
                            continue;
                        }
                    };
                    let quad = match oracle::quad_abs_moment(&p, r as f64, 1e-9) {
                        Ok(v) => v,
                        Err(e) => {
                            report.push(CaseOutcome::fail(name, e.to_string()));
                            continue;
                        }
                    };
                    let rd = rel_diff(formula.value, quad.value);
                    report.push(CaseOutcome::check(
                        name,
                        rd <= tol,
                        format!(
                            "formula={:.17e} ({}), quad={:.17e}, rel={rd:.2e}",
                            formula.value,
                            formula.method_used.name(),
                            quad.value
                        ),
                    ));
                }
            }
        }
    }
    report
}

/// Special-function identity suite: the `G` bounds/monotonicity/identities,
/// Lommel–Struve diagonal, hypergeometric reductions, the Kummer
/// transformation, the small-argument Bessel law, and distribution-level
/// consistency (density normalisation, mean, centralisation).
pub fn identity_suite() -> SuiteReport {
    let mut rep = SuiteReport::default();

    // 0 < G < 1 and strictly increasing in x (strict until G saturates to
    // within 1e-11 of its supremum, where increments drop below resolution)
    for (mu, nu) in [(0.5, 0.5), (1.87, 0.5), (3.0, 1.0), (2.37, 0.87)] {
        let mut ok = true;
        let mut prev = 0.0;
        let mut worst = String::new();
        let mut x = 0.1;
        while x <= 100.0 + 1e-9 {
            let g = specfun::big_g(&GArgs::new(mu, nu, x).unwrap())
                .map(|e| e.value)
                .unwrap_or(f64::NAN);
            let monotone = if prev < 1.0 - 1e-11 {
                g > prev
            } else {
                g >= prev - 1e-12
            };
            if !(g > 0.0 && g < 1.0 && monotone) {
                ok = false;
                worst = format!("violation at x={x:.1}: G={g}");
                break;
            }
            prev = g;
            x += 0.1;
        }
        rep.push(CaseOutcome::check(
            format!("G bounded+increasing mu={mu} nu={nu}"),
            ok,
            if ok {
                "0 < G < 1, monotone".into()
            } else {
                worst
            },
        ));
    }

    // G_{nu,nu} = x (K_nu L_{nu-1} + K_{nu-1} L_nu)
    for nu in [0.3, 0.5, 1.0, 1.87] {
        for x in [0.5, 1.0, 5.0] {
            let g = specfun::big_g(&GArgs::new(nu, nu, x).unwrap())
                .unwrap()
                .value;
            let assembled = x
                * (specfun::bessel_k(nu, x, false).unwrap().value
                    * specfun::struve_l(nu - 1.0, x).unwrap().value
                    + specfun::bessel_k(nu - 1.0, x, false).unwrap().value
                        * specfun::struve_l(nu, x).unwrap().value);
            let rd = rel_diff(g, assembled);
            rep.push(CaseOutcome::check(
                format!("G-struve identity nu={nu} x={x}"),
                rd <= 1e-9,
                format!("rel={rd:.2e}"),
            ));
        }
    }

    // G_{nu+1,nu}(x) = 1 - x^{nu+1} K_{nu+1}(x) / (2^nu Gamma(nu+1))
    for nu in [0.3, 0.5, 1.0, 1.87] {
        for x in [0.5, 1.0, 5.0] {
            let g = specfun::big_g(&GArgs::new(nu + 1.0, nu, x).unwrap())
                .unwrap()
                .value;
            let rhs = 1.0
                - x.powf(nu + 1.0) * specfun::bessel_k(nu + 1.0, x, false).unwrap().value
                    / (2f64.powf(nu) * specfun::gamma_fn(nu + 1.0).unwrap());
            let rd = rel_diff(g, rhs);
            rep.push(CaseOutcome::check(
                format!("G-bessel identity nu={nu} x={x}"),
                rd <= 1e-9,
                format!("rel={rd:.2e}"),
            ));
        }
    }

    // normalised quadrature of the defining integral equals G
    for (mu, nu) in [(0.5, 0.5), (1.87, 0.5), (2.37, 0.87), (3.0, 1.0)] {
        for x in [0.5, 2.0, 10.0] {
            let g = specfun::big_g(&GArgs::new(mu, nu, x).unwrap())
                .unwrap()
                .value;
            let q = oracle::quad_kbessel_integral(mu, nu, x, 1e-10).unwrap();
            let norm = 2f64.powf(mu - 1.0)
                * specfun::gamma_fn((mu - nu + 1.0) / 2.0).unwrap()
                * specfun::gamma_fn((mu + nu + 1.0) / 2.0).unwrap();
            let rd = rel_diff(g, q.value / norm);
            rep.push(CaseOutcome::check(
                format!("G quadrature equivalence mu={mu} nu={nu} x={x}"),
                rd <= 1e-8,
                format!("rel={rd:.2e}"),
            ));
        }
    }

    // Lommel diagonal equals Struve
    for nu in [0.3, 0.5, 1.0, 1.87] {
        for x in [0.5, 1.0, 5.0, 20.0] {
            let t = specfun::lommel_t_tilde(nu, nu, x).unwrap().value;
            let l = specfun::struve_l(nu, x).unwrap().value;
            let rd = rel_diff(t, l);
            rep.push(CaseOutcome::check(
                format!("lommel-struve diagonal nu={nu} x={x}"),
                rd <= 1e-10,
                format!("rel={rd:.2e}"),
            ));
        }
    }

    // 2F1(a,b;a;z) = (1-z)^{-b}
    for z in [0.1, 0.5, 0.9] {
        let f = specfun::hyp2f1(1.5, 2.37, 1.5, z).unwrap().value;
        let rd = rel_diff(f, (1.0 - z).powf(-2.37));
        rep.push(CaseOutcome::check(
            format!("2F1 binomial reduction z={z}"),
            rd <= 1e-10,
            format!("rel={rd:.2e}"),
        ));
    }

    // Kummer transformation M(a,b,x) = e^x M(b-a,b,-x)
    for (a, b, x) in [(0.5, 1.7, 3.3), (2.0, 5.5, -1.3), (1.3, 4.0, 12.0)] {
        let lhs = specfun::kummer_m(a, b, x).unwrap().true_value();
        let rhs = x.exp() * specfun::kummer_m(b - a, b, -x).unwrap().true_value();
        let rd = rel_diff(lhs, rhs);
        rep.push(CaseOutcome::check(
            format!("Kummer transformation a={a} b={b} x={x}"),
            rd <= 1e-10,
            format!("rel={rd:.2e}"),
        ));
    }

    // x^nu K_nu(x) -> 2^{nu-1} Gamma(nu) as x -> 0
    for nu in [0.5, 1.0, 2.37] {
        let x: f64 = 1e-4;
        let lhs = x.powf(nu) * specfun::bessel_k(nu, x, false).unwrap().value;
        let rhs = 2f64.powf(nu - 1.0) * specfun::gamma_fn(nu).unwrap();
        let rd = rel_diff(lhs, rhs);
        rep.push(CaseOutcome::check(
            format!("K small-x law nu={nu}"),
            rd <= 1e-3,
            format!("rel={rd:.2e}"),
        ));
    }

    // density normalisation across the distribution grid
    for nu in [-0.3, 0.0, 0.5, 1.87, 5.0] {
        for g in [0.0, 0.5, 0.9] {
            for am in [0.0, 0.07, 2.0] {
                let p = VGParams::new(nu, 2.0, 2.0 * g, am / 2.0).unwrap();
                match oracle::quad_abs_moment(&p, 0.0, 1e-9) {
                    Ok(q) => {
                        let rd = rel_diff(q.value, 1.0);
                        rep.push(CaseOutcome::check(
                            format!("pdf normalisation nu={nu} g={g} am={am}"),
                            rd <= 1e-8,
                            format!("integral={:.12}, rel={rd:.2e}", q.value),
                        ));
                    }
                    Err(e) => rep.push(CaseOutcome::fail(
                        format!("pdf normalisation nu={nu} g={g} am={am}"),
                        e.to_string(),
                    )),
                }
            }
        }
    }

    // mean = first raw moment; centralize zeroes the mean
    for p in [
        VGParams::new(0.5, 2.0, 1.0, 0.0).unwrap(),
        VGParams::new(1.87, 271.1, -2.342, 2.585e-4).unwrap(),
        VGParams::new(-0.3, 2.0, 1.4, -0.6).unwrap(),
    ] {
        let m = moments::raw_moment(&p, 1).unwrap().value;
        let rd = rel_diff(m, p.mean());
        rep.push(CaseOutcome::check(
            format!("mean = raw moment 1 (nu={})", p.nu()),
            rd <= 1e-10,
            format!("rel={rd:.2e}"),
        ));
        let zeroed = p.centralize().mean().abs();
        rep.push(CaseOutcome::check(
            format!("centralize zeroes mean (nu={})", p.nu()),
            zeroed <= 1e-14 * p.mean().abs().max(1.0),
            format!("|mean|={zeroed:.2e}"),
        ));
    }

    rep
}

/// Truncation-bound soundness and convergence-ratio checks on the odd-series
/// portion of the grid.
pub fn truncation_suite() -> SuiteReport {
    let mut rep = SuiteReport::default();
    let alpha = 2.0;
    for &nu in &GRID_NU {
        for &g in &GRID_GAMMA[1..] {
            for &am in &[-2.0, -0.07, 0.07, 2.0] {
                for &r in &[1u32, 3, 5] {
                    let p = VGParams::new(nu, alpha, g * alpha, am / alpha).unwrap();
                    let name = format!("truncation nu={nu} g={g} am={am} r={r}");
                    match moments::odd_series_diagnostics(&p, r, 1e-10, 500, 50) {
                        Ok((base, extended_value, ln_mags)) => {
                            let residual = (extended_value - base.value).abs();
                            let bound_ok = residual <= base.error_bound;
                            // late-term geometric ratio, past the burn-in
                            let limit = 2.0 * g + 0.05;
                            let burn = (nu.max(0.0) + r as f64 + 2.0).ceil() as usize;
                            let mut ratio_ok = true;
                            let mut worst = 0.0f64;
                            if ln_mags.len() > burn + 2 {
                                for w in ln_mags[burn..].windows(2) {
                                    let ratio = (w[1] - w[0]).exp();
                                    worst = worst.max(ratio);
                                    if ratio > limit {
                                        ratio_ok = false;
                                    }
                                }
                            }
                            rep.push(CaseOutcome::check(
                                name,
                                bound_ok && ratio_ok,
                                format!(
                                    "residual={residual:.2e} bound={:.2e} worst_ratio={worst:.3} limit={limit:.3}",
                                    base.error_bound
                                ),
                            ));
                        }
                        Err(e) => rep.push(CaseOutcome::fail(name, e.to_string())),
                    }
                }
            }
        }
    }
    rep
}

/// Fixed parameters of the S&P 500 index-fit example.
pub fn sp500_params() -> VGParams {
    VGParams::new(1.870, 271.1, -2.342, 2.585e-4).expect("valid fixed parameters")
}

/// The S&P 500 reproduction: asymptotic-vs-exact relative errors for first
/// and third absolute moments, raw and central.
#[derive(Debug, Clone)]
pub struct Sp500Report {
    pub beta_over_alpha: f64,
    pub alpha_mu: f64,
    pub alpha_mu_central: f64,
    pub exact_raw_r1: f64,
    pub asym_raw_r1: f64,
    pub rel_err_raw_r1: f64,
    pub exact_central_r1: f64,
    pub asym_central_r1: f64,
    pub rel_err_central_r1: f64,
    pub rel_err_raw_r3: f64,
    pub rel_err_central_r3: f64,
}

pub fn sp500_report() -> Sp500Report {
    let p = sp500_params();
    let c = p.centralize();
    let exact = |params: &VGParams, r: u32| {
        moments::abs_moment_odd_series(params, r, 1e-13, 600)
            .expect("series converges at these parameters")
            .value
    };
    let asym = |params: &VGParams, r: u32| {
        moments::abs_moment_asymptotic(params, r)
            .expect("asymptotic form evaluates")
            .value
    };
    let e1 = exact(&p, 1);
    let a1 = asym(&p, 1);
    let ec1 = exact(&c, 1);
    let ac1 = asym(&c, 1);
    let e3 = exact(&p, 3);
    let a3 = asym(&p, 3);
    let ec3 = exact(&c, 3);
    let ac3 = asym(&c, 3);
    Sp500Report {
        beta_over_alpha: p.gamma_ratio(),
        alpha_mu: p.alpha() * p.mu(),
        alpha_mu_central: c.alpha() * c.mu(),
        exact_raw_r1: e1,
        asym_raw_r1: a1,
        rel_err_raw_r1: rel_diff(a1, e1),
        exact_central_r1: ec1,
        asym_central_r1: ac1,
        rel_err_central_r1: rel_diff(ac1, ec1),
        rel_err_raw_r3: rel_diff(a3, e3),
        rel_err_central_r3: rel_diff(ac3, ec3),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quick_grid_passes() {
        let rep = formula_oracle_grid(true, 1e-7);
        let failures: Vec<String> = rep
            .failed()
            .iter()
            .map(|c| format!("{}: {}", c.name, c.detail))
            .collect();
        assert!(failures.is_empty(), "failures:\n{}", failures.join("\n"));
    }

    #[test]
    fn sp500_report_basics() {
        let rep = sp500_report();
        assert!((rep.beta_over_alpha + 8.64e-3).abs() < 5e-6);
        assert!((rep.alpha_mu - 7.01e-2).abs() < 5e-4);
        assert!((rep.alpha_mu_central - 4.09e-2).abs() < 1e-4);
    }
}
