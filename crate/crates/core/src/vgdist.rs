//! The variance-gamma distribution object.
//!
//! `VG(nu, alpha, beta, mu)` has density
//! `M e^{beta(x-mu)} |x-mu|^nu K_nu(alpha |x-mu|)` with
//! `M = (alpha^2-beta^2)^(nu+1/2) / (sqrt(pi) (2 alpha)^nu Gamma(nu+1/2))`,
//! for shape `nu > -1/2`, scale `alpha`, skewness `0 <= |beta| < alpha` and
//! location `mu`. Parameter sets are immutable value types; the sampler takes
//! an explicit seed and owns its generator.

use crate::specfun::{self, SpecFunError};
use rand::rngs::StdRng;
use rand::SeedableRng;
use rand_distr::{Distribution, Gamma, StandardNormal};
use thiserror::Error;

/// Parameter-validation failure naming the violated constraint.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("invalid parameters: {constraint}")]
pub struct ParamError {
    pub constraint: &'static str,
}

fn constraint(c: &'static str) -> ParamError {
    ParamError { constraint: c }
}

/// Validated variance-gamma parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VGParams {
    nu: f64,
    alpha: f64,
    beta: f64,
    mu: f64,
}

impl VGParams {
    /// Validates `nu > -1/2`, `0 <= |beta| < alpha`, all fields finite.
    pub fn new(nu: f64, alpha: f64, beta: f64, mu: f64) -> Result<Self, ParamError> {
        if !(nu.is_finite() && alpha.is_finite() && beta.is_finite() && mu.is_finite()) {
            return Err(constraint("all parameters must be finite"));
        }
        if !(nu > -0.5) {
            return Err(constraint("shape must satisfy nu > -1/2"));
        }
        if !(alpha > 0.0) || beta.abs() >= alpha {
            return Err(constraint("skewness must satisfy 0 <= |beta| < alpha"));
        }
        let p = VGParams {
            nu,
            alpha,
            beta,
            mu,
        };
        if !p.ln_norm_const().is_finite() {
            return Err(constraint("normalizing constant is not finite"));
        }
        Ok(p)
    }

    pub fn nu(&self) -> f64 {
        self.nu
    }
    pub fn alpha(&self) -> f64 {
        self.alpha
    }
    pub fn beta(&self) -> f64 {
        self.beta
    }
    pub fn mu(&self) -> f64 {
        self.mu
    }

    /// `beta / alpha`, the series convergence ratio.
    pub fn gamma_ratio(&self) -> f64 {
        self.beta / self.alpha
    }

    /// Log of the normalizing constant `M`.
    pub fn ln_norm_const(&self) -> f64 {
        let a2b2 = (self.alpha - self.beta) * (self.alpha + self.beta);
        (self.nu + 0.5) * a2b2.ln()
            - 0.5 * std::f64::consts::PI.ln()
            - self.nu * (2.0 * self.alpha).ln()
            - specfun::ln_gamma(self.nu + 0.5).expect("nu + 1/2 > 0 by construction")
    }

    /// Density at `x`. At the singular point `x = mu` this returns the finite
    /// limit `M 2^(nu-1) Gamma(nu) / alpha^nu` for `nu > 0` and `+inf` for
    /// `-1/2 < nu <= 0`.
    pub fn pdf(&self, x: f64) -> f64 {
        let d = x - self.mu;
        let ad = d.abs();
        if ad == 0.0 {
            if self.nu > 0.0 {
                let ln = self.ln_norm_const()
                    + (self.nu - 1.0) * std::f64::consts::LN_2
                    + specfun::ln_gamma(self.nu).expect("nu > 0")
                    - self.nu * self.alpha.ln();
                return ln.exp();
            }
            return f64::INFINITY;
        }
        let ln_k = match specfun::ln_bessel_k(self.nu, self.alpha * ad) {
            Ok(v) => v,
            Err(_) => return 0.0,
        };
        (self.ln_norm_const() + self.beta * d + self.nu * ad.ln() + ln_k).exp()
    }

    /// `E[X] = mu + (2 nu + 1) beta / (alpha^2 - beta^2)`.
    pub fn mean(&self) -> f64 {
        self.mu + self.mean_offset()
    }

    fn mean_offset(&self) -> f64 {
        (2.0 * self.nu + 1.0) * self.beta / ((self.alpha - self.beta) * (self.alpha + self.beta))
    }

    /// Law of `X + a`: same parameters with `mu + a`.
    pub fn shift(&self, a: f64) -> VGParams {
        VGParams {
            mu: self.mu + a,
            ..*self
        }
    }

    /// Law of `X - E[X]`: location becomes `-(2 nu + 1) beta / (alpha^2 - beta^2)`.
    pub fn centralize(&self) -> VGParams {
        VGParams {
            mu: -self.mean_offset(),
            ..*self
        }
    }

    /// Law of the sum of `n` iid copies:
    /// `VG(n nu + (n-1)/2, alpha, beta, n mu)`.
    pub fn convolve_iid(&self, n: u32) -> Result<VGParams, ParamError> {
        if n == 0 {
            return Err(constraint("iid convolution requires n >= 1"));
        }
        let nf = n as f64;
        VGParams::new(
            nf * self.nu + (nf - 1.0) / 2.0,
            self.alpha,
            self.beta,
            nf * self.mu,
        )
    }

    /// Deterministic iid draws via the normal variance-mean mixture
    /// `X = mu + beta V + sqrt(V) N`, `V ~ Gamma(nu + 1/2, rate (alpha^2-beta^2)/2)`.
    pub fn sample(&self, rng_seed: u64, count: usize) -> Vec<f64> {
        let mut rng = StdRng::seed_from_u64(rng_seed);
        let shape = self.nu + 0.5;
        let scale = 2.0 / ((self.alpha - self.beta) * (self.alpha + self.beta));
        let gamma = Gamma::new(shape, scale).expect("valid by parameter invariants");
        let mut out = Vec::with_capacity(count);
        for _ in 0..count {
            let v = gamma.sample(&mut rng);
            let z: f64 = StandardNormal.sample(&mut rng);
            out.push(self.mu + self.beta * v + v.sqrt() * z);
        }
        out
    }
}

/// Asymmetric Laplace parameters in the `(alpha, beta, mu)` form; the
/// distribution equals `VG(1/2, alpha, beta, mu)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ALParams {
    alpha: f64,
    beta: f64,
    mu: f64,
}

impl ALParams {
    pub fn new(alpha: f64, beta: f64, mu: f64) -> Result<Self, ParamError> {
        if !(alpha.is_finite() && beta.is_finite() && mu.is_finite()) {
            return Err(constraint("all parameters must be finite"));
        }
        if !(alpha > 0.0) || beta.abs() >= alpha {
            return Err(constraint("skewness must satisfy 0 <= |beta| < alpha"));
        }
        Ok(ALParams { alpha, beta, mu })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }
    pub fn beta(&self) -> f64 {
        self.beta
    }
    pub fn mu(&self) -> f64 {
        self.mu
    }

    /// The equivalent `VG(1/2, alpha, beta, mu)` parameters.
    pub fn to_vg(&self) -> VGParams {
        VGParams::new(0.5, self.alpha, self.beta, self.mu)
            .expect("AL invariants imply VG invariants")
    }

    /// Convert to the `(kappa, sigma)` parameterisation.
    pub fn to_kappa_sigma(&self) -> ALKappaSigma {
        let kappa = ((self.alpha - self.beta) / (self.alpha + self.beta)).sqrt();
        let sigma = std::f64::consts::SQRT_2 * kappa / (self.alpha - self.beta);
        ALKappaSigma {
            kappa,
            sigma,
            location: self.mu,
        }
    }
}

/// Asymmetric Laplace in the `(kappa, sigma)` parameterisation, with
/// `alpha = (kappa^-1 + kappa)/(sqrt(2) sigma)` and
/// `beta = (kappa^-1 - kappa)/(sqrt(2) sigma)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ALKappaSigma {
    kappa: f64,
    sigma: f64,
    location: f64,
}

impl ALKappaSigma {
    pub fn new(kappa: f64, sigma: f64, location: f64) -> Result<Self, ParamError> {
        if !(kappa > 0.0 && kappa.is_finite()) {
            return Err(constraint("kappa must be positive and finite"));
        }
        if !(sigma > 0.0 && sigma.is_finite()) {
            return Err(constraint("sigma must be positive and finite"));
        }
        if !location.is_finite() {
            return Err(constraint("location must be finite"));
        }
        Ok(ALKappaSigma {
            kappa,
            sigma,
            location,
        })
    }

    pub fn kappa(&self) -> f64 {
        self.kappa
    }
    pub fn sigma(&self) -> f64 {
        self.sigma
    }
    pub fn location(&self) -> f64 {
        self.location
    }

    /// Convert to the `(alpha, beta, mu)` form; `kappa + 1/kappa > |1/kappa - kappa|`
    /// guarantees the skewness constraint automatically.
    pub fn to_al(&self) -> ALParams {
        let s = std::f64::consts::SQRT_2 * self.sigma;
        ALParams::new(
            (1.0 / self.kappa + self.kappa) / s,
            (1.0 / self.kappa - self.kappa) / s,
            self.location,
        )
        .expect("kappa, sigma > 0 imply |beta| < alpha")
    }
}

/// Parameters of the mean of `n` iid products of correlated zero-mean
/// normals with variances `(sigma_u^2, sigma_v^2)` and correlation `rho`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProductNormalParams {
    sigma_u: f64,
    sigma_v: f64,
    rho: f64,
    n: u32,
}

impl ProductNormalParams {
    pub fn new(sigma_u: f64, sigma_v: f64, rho: f64, n: u32) -> Result<Self, ParamError> {
        if !(sigma_u > 0.0 && sigma_u.is_finite() && sigma_v > 0.0 && sigma_v.is_finite()) {
            return Err(constraint(
                "sigma_u and sigma_v must be positive and finite",
            ));
        }
        if !(rho > -1.0 && rho < 1.0) {
            return Err(constraint("correlation must satisfy -1 < rho < 1"));
        }
        if n == 0 {
            return Err(constraint("sample count n must be >= 1"));
        }
        Ok(ProductNormalParams {
            sigma_u,
            sigma_v,
            rho,
            n,
        })
    }

    pub fn sigma_u(&self) -> f64 {
        self.sigma_u
    }
    pub fn sigma_v(&self) -> f64 {
        self.sigma_v
    }
    pub fn rho(&self) -> f64 {
        self.rho
    }
    pub fn n(&self) -> u32 {
        self.n
    }

    /// `s = sigma_u sigma_v`.
    pub fn s(&self) -> f64 {
        self.sigma_u * self.sigma_v
    }

    /// The VG law of the mean of the `n` products:
    /// `VG((n-1)/2, n/(s(1-rho^2)), n rho/(s(1-rho^2)), 0)`.
    pub fn to_vg(&self) -> VGParams {
        let nf = self.n as f64;
        let denom = self.s() * (1.0 - self.rho * self.rho);
        VGParams::new((nf - 1.0) / 2.0, nf / denom, nf * self.rho / denom, 0.0)
            .expect("product-normal invariants imply VG invariants")
    }
}

/// Error from density evaluation helpers that may hit the kernel.
#[derive(Debug, Error)]
pub enum VgError {
    #[error(transparent)]
    Param(#[from] ParamError),
    #[error(transparent)]
    SpecFun(#[from] SpecFunError),
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::specfun::test_util::assert_rel;

    #[test]
    fn validation_rules() {
        assert!(VGParams::new(0.5, 2.0, 1.0, 0.0).is_ok());
        assert!(VGParams::new(-0.5, 2.0, 1.0, 0.0).is_err()); // boundary excluded
        assert!(VGParams::new(1.0, 1.0, 1.0, 0.0).is_err()); // |beta| < alpha strict
        assert!(VGParams::new(1.0, 2.0, -2.5, 0.0).is_err());
        assert!(VGParams::new(1.0, f64::NAN, 0.0, 0.0).is_err());
        assert!(VGParams::new(1.0, -2.0, 0.0, 0.0).is_err());
    }

    #[test]
    fn pdf_laplace_closed_form() {
        // VG(1/2,a,b,m) density is (a^2-b^2)/(2a) e^{b(x-m)-a|x-m|}
        let p = VGParams::new(0.5, 2.0, 1.0, 0.3).unwrap();
        for x in [-1.0f64, 0.29, 0.3, 0.31, 2.5] {
            let d = x - 0.3;
            let expect = (4.0 - 1.0) / 4.0 * (d - 2.0 * d.abs()).exp();
            assert_rel(p.pdf(x), expect, 1e-12);
        }
    }

    #[test]
    fn pdf_reference_value() {
        let p = VGParams::new(1.0, 2.0, 0.5, 0.3).unwrap();
        assert_rel(p.pdf(1.0), 0.368_341_881_990_145_44, 1e-12);
    }

    #[test]
    fn pdf_at_location_point() {
        // finite limit for nu > 0
        let p = VGParams::new(1.0, 2.0, 0.5, 0.3).unwrap();
        let expect = p.ln_norm_const().exp() * 2f64.powf(0.0) / 2.0;
        assert_rel(p.pdf(0.3), expect, 1e-12);
        // +inf for nu in (-1/2, 0]
        let p = VGParams::new(0.0, 2.0, 0.5, 0.3).unwrap();
        assert!(p.pdf(0.3).is_infinite());
        let p = VGParams::new(-0.2, 2.0, 0.5, 0.3).unwrap();
        assert!(p.pdf(0.3).is_infinite());
    }

    #[test]
    fn mean_and_centralize() {
        let p = VGParams::new(0.5, 2.0, 1.0, 0.0).unwrap();
        assert_rel(p.mean(), 2.0 / 3.0, 1e-14);
        let p5 = VGParams::new(0.5, 2.0, 1.0, 5.0).unwrap();
        assert_rel(p5.mean(), 5.0 + 2.0 / 3.0, 1e-14);
        // centralize kills the mean exactly
        for p in [
            VGParams::new(0.5, 2.0, 1.0, 7.0).unwrap(),
            VGParams::new(1.87, 271.1, -2.342, 2.585e-4).unwrap(),
        ] {
            let c = p.centralize();
            assert!(c.mean().abs() <= 1e-14 * p.mean().abs().max(1.0));
        }
        // symmetric case: centralize only zeroes the location
        let p = VGParams::new(1.3, 2.0, 0.0, 4.0).unwrap();
        assert_eq!(p.centralize().mu(), 0.0);
    }

    #[test]
    fn sp500_centralized_location() {
        let p = VGParams::new(1.870, 271.1, -2.342, 2.585e-4).unwrap();
        let c = p.centralize();
        let alpha_mu = c.alpha() * c.mu().abs();
        assert!((alpha_mu - 4.09e-2).abs() < 1e-4, "alpha*mu = {alpha_mu}");
    }

    #[test]
    fn shift_group_property() {
        let p = VGParams::new(1.0, 2.0, 1.0, 3.0).unwrap();
        assert_eq!(p.shift(0.0), p);
        assert_eq!(p.shift(-3.0).mu(), 0.0);
        assert_eq!(p.shift(1.5).shift(-1.5), p);
    }

    #[test]
    fn convolution_parameters() {
        let p = VGParams::new(1.0, 2.0, 1.0, 0.5).unwrap();
        assert_eq!(p.convolve_iid(1).unwrap(), p);
        let c = p.convolve_iid(2).unwrap();
        assert_eq!((c.nu(), c.mu()), (2.5, 1.0));
        // AL sums: VG(n - 1/2, alpha, beta, n mu)
        let al = ALParams::new(2.0, 1.0, 0.4).unwrap();
        let s3 = al.to_vg().convolve_iid(3).unwrap();
        assert_eq!((s3.nu(), s3.alpha(), s3.beta()), (2.5, 2.0, 1.0));
        assert_rel(s3.mu(), 1.2, 1e-15);
    }

    #[test]
    fn product_normal_constructors() {
        let q = ProductNormalParams::new(1.0, 1.0, 0.0, 1).unwrap();
        let p = q.to_vg();
        assert_eq!((p.nu(), p.alpha(), p.beta(), p.mu()), (0.0, 1.0, 0.0, 0.0));
        let q = ProductNormalParams::new(1.0, 2.0, 0.5, 1).unwrap();
        let p = q.to_vg();
        assert_rel(p.alpha(), 2.0 / 3.0, 1e-14);
        assert_rel(p.beta(), 1.0 / 3.0, 1e-14);
        let q = ProductNormalParams::new(1.0, 1.0, 0.3, 4).unwrap();
        let p = q.to_vg();
        assert_rel(p.nu(), 1.5, 1e-15);
        assert_rel(p.alpha(), 4.0 / 0.91, 1e-14);
        assert_rel(p.beta(), 1.2 / 0.91, 1e-14);
        assert!(ProductNormalParams::new(1.0, 1.0, 1.0, 1).is_err());
        assert!(ProductNormalParams::new(1.0, 1.0, 0.0, 0).is_err());
    }

    #[test]
    fn kappa_sigma_round_trip() {
        // kappa = 1 is the symmetric Laplace
        let k = ALKappaSigma::new(1.0, 1.3, 0.0).unwrap();
        assert_eq!(k.to_al().beta(), 0.0);
        // kappa = 2, sigma = sqrt(2): alpha = 5/4, beta = -3/4
        let k = ALKappaSigma::new(2.0, std::f64::consts::SQRT_2, 0.0).unwrap();
        let al = k.to_al();
        assert_rel(al.alpha(), 1.25, 1e-14);
        assert_rel(al.beta(), -0.75, 1e-14);
        // round trips recover kappa and sigma
        for (kappa, sigma) in [(0.4, 0.9), (1.0, 2.0), (3.7, 0.2)] {
            let k = ALKappaSigma::new(kappa, sigma, 0.7).unwrap();
            let back = k.to_al().to_kappa_sigma();
            assert_rel(back.kappa(), kappa, 1e-12);
            assert_rel(back.sigma(), sigma, 1e-12);
        }
    }

    #[test]
    fn sampler_is_deterministic_per_seed() {
        let p = VGParams::new(0.5, 2.0, 1.0, 0.0).unwrap();
        let a = p.sample(42, 16);
        let b = p.sample(42, 16);
        let c = p.sample(43, 16);
        assert_eq!(a, b);
        assert_ne!(a, c);
    }
}
