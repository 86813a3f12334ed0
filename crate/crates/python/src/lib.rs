//! Python bindings: the VG parameter type, the moment dispatcher, the
//! quadrature/Monte-Carlo oracles and the main special functions.

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

use vgm_core::moments::{self, Method, MomentKind, MomentQuery};
use vgm_core::oracle;
use vgm_core::specfun::{self, GArgs};
use vgm_core::vgdist::{ALKappaSigma, ALParams, ProductNormalParams, VGParams};

fn value_err<E: std::fmt::Display>(e: E) -> PyErr {
    PyValueError::new_err(e.to_string())
}

/// Variance-gamma parameters `(nu, alpha, beta, mu)`.
#[pyclass(name = "VgParams", frozen)]
struct PyVgParams {
    inner: VGParams,
}

#[pymethods]
impl PyVgParams {
    #[new]
    fn new(nu: f64, alpha: f64, beta: f64, mu: f64) -> PyResult<Self> {
        Ok(PyVgParams {
            inner: VGParams::new(nu, alpha, beta, mu).map_err(value_err)?,
        })
    }

    /// Asymmetric Laplace in the (kappa, sigma) parameterisation.
    #[staticmethod]
    #[pyo3(signature = (kappa, sigma, location = 0.0))]
    fn from_al_kappa(kappa: f64, sigma: f64, location: f64) -> PyResult<Self> {
        let ks = ALKappaSigma::new(kappa, sigma, location).map_err(value_err)?;
        Ok(PyVgParams {
            inner: ks.to_al().to_vg(),
        })
    }

    /// Law of the mean of `n` products of correlated zero-mean normals.
    #[staticmethod]
    #[pyo3(signature = (sigma_u, sigma_v, rho, n = 1))]
    fn from_normal_product(sigma_u: f64, sigma_v: f64, rho: f64, n: u32) -> PyResult<Self> {
        let q = ProductNormalParams::new(sigma_u, sigma_v, rho, n).map_err(value_err)?;
        Ok(PyVgParams { inner: q.to_vg() })
    }

    #[getter]
    fn nu(&self) -> f64 {
        self.inner.nu()
    }
    #[getter]
    fn alpha(&self) -> f64 {
        self.inner.alpha()
    }
    #[getter]
    fn beta(&self) -> f64 {
        self.inner.beta()
    }
    #[getter]
    fn mu(&self) -> f64 {
        self.inner.mu()
    }

    fn pdf(&self, x: f64) -> f64 {
        self.inner.pdf(x)
    }

    fn mean(&self) -> f64 {
        self.inner.mean()
    }

    fn shift(&self, a: f64) -> Self {
        PyVgParams {
            inner: self.inner.shift(a),
        }
    }

    fn centralize(&self) -> Self {
        PyVgParams {
            inner: self.inner.centralize(),
        }
    }

    fn convolve_iid(&self, n: u32) -> PyResult<Self> {
        Ok(PyVgParams {
            inner: self.inner.convolve_iid(n).map_err(value_err)?,
        })
    }

    /// Deterministic iid draws (variance-mean mixture sampler).
    fn sample(&self, seed: u64, count: usize) -> Vec<f64> {
        self.inner.sample(seed, count)
    }

    fn __repr__(&self) -> String {
        format!(
            "VgParams(nu={}, alpha={}, beta={}, mu={})",
            self.inner.nu(),
            self.inner.alpha(),
            self.inner.beta(),
            self.inner.mu()
        )
    }
}

/// Result of a moment evaluation.
#[pyclass(name = "MomentResult", frozen)]
struct PyMomentResult {
    #[pyo3(get)]
    value: f64,
    #[pyo3(get)]
    method: String,
    #[pyo3(get)]
    terms_used: usize,
    #[pyo3(get)]
    error_bound: f64,
    #[pyo3(get)]
    warnings: Vec<String>,
}

#[pymethods]
impl PyMomentResult {
    fn __repr__(&self) -> String {
        format!(
            "MomentResult(value={}, method='{}', terms_used={}, error_bound={})",
            self.value, self.method, self.terms_used, self.error_bound
        )
    }
}

fn parse_method(s: &str) -> PyResult<Method> {
    Ok(match s {
        "auto" => Method::Auto,
        "even" => Method::Even,
        "odd-series" => Method::OddSeries,
        "symmetric" => Method::Symmetric,
        "halfint" => Method::HalfInt,
        "asymptotic" => Method::Asymptotic,
        "mu-zero" => Method::MuZero,
        "quad" => Method::Quadrature,
        other => return Err(PyValueError::new_err(format!("unknown method '{other}'"))),
    })
}

/// Compute a moment of the VG law: raw or central, plain or absolute.
#[pyfunction]
#[pyo3(signature = (params, order, kind = "raw", absolute = true, method = "auto",
                    rel_tol = 1e-10, max_terms = 500))]
fn moment(
    params: &PyVgParams,
    order: f64,
    kind: &str,
    absolute: bool,
    method: &str,
    rel_tol: f64,
    max_terms: usize,
) -> PyResult<PyMomentResult> {
    let q = MomentQuery {
        order_r: order,
        kind: match kind {
            "raw" => MomentKind::Raw,
            "central" => MomentKind::Central,
            other => {
                return Err(PyValueError::new_err(format!(
                    "kind must be 'raw' or 'central', got '{other}'"
                )))
            }
        },
        absolute,
        method: parse_method(method)?,
        rel_tol,
        max_terms,
    };
    let r = moments::moment(&params.inner, &q).map_err(value_err)?;
    Ok(PyMomentResult {
        value: r.value,
        method: r.method_used.name().to_string(),
        terms_used: r.terms_used,
        error_bound: r.error_bound,
        warnings: r.warnings,
    })
}

/// Adaptive-quadrature estimate of `E|X|^r`: `(value, est_abs_err)`.
#[pyfunction]
#[pyo3(signature = (params, order, rel_tol = 1e-9))]
fn quad_abs_moment(params: &PyVgParams, order: f64, rel_tol: f64) -> PyResult<(f64, f64)> {
    let q = oracle::quad_abs_moment(&params.inner, order, rel_tol).map_err(value_err)?;
    Ok((q.value, q.est_abs_err))
}

/// Monte-Carlo estimate of `E|X|^r`: `(estimate, standard_error)`.
#[pyfunction]
#[pyo3(signature = (params, order, n = 1_000_000, seed = 1))]
fn mc_abs_moment(params: &PyVgParams, order: f64, n: usize, seed: u64) -> (f64, f64) {
    oracle::mc_abs_moment(&params.inner, order, n, seed)
}

/// Mean deviation `E|X - E[X]|` of the asymmetric Laplace law.
#[pyfunction]
#[pyo3(signature = (alpha, beta, mu = 0.0))]
fn al_mean_deviation(alpha: f64, beta: f64, mu: f64) -> PyResult<f64> {
    let al = ALParams::new(alpha, beta, mu).map_err(value_err)?;
    Ok(moments::al_mean_deviation(&al))
}

/// Mean-deviation / standard-deviation ratio of the asymmetric Laplace law.
#[pyfunction]
fn al_meandev_stddev_ratio(kappa: f64) -> PyResult<f64> {
    if !(kappa > 0.0 && kappa.is_finite()) {
        return Err(PyValueError::new_err("kappa must be positive"));
    }
    Ok(moments::al_meandev_stddev_ratio(kappa))
}

/// Modified Bessel function of the second kind `K_order(x)`.
#[pyfunction]
#[pyo3(signature = (order, x, scaled = false))]
fn bessel_k(order: f64, x: f64, scaled: bool) -> PyResult<f64> {
    let e = specfun::bessel_k(order, x, scaled).map_err(value_err)?;
    Ok(e.value)
}

/// Modified Struve function `L_order(x)`.
#[pyfunction]
fn struve_l(order: f64, x: f64) -> PyResult<f64> {
    Ok(specfun::struve_l(order, x).map_err(value_err)?.true_value())
}

/// Normalised modified Lommel function `t~_{mu,nu}(x)`.
#[pyfunction]
fn lommel_t_tilde(order_mu: f64, order_nu: f64, x: f64) -> PyResult<f64> {
    Ok(specfun::lommel_t_tilde(order_mu, order_nu, x)
        .map_err(value_err)?
        .true_value())
}

/// Normalised cumulative Bessel integral `G_{mu,nu}(x)` on `(0, 1)`.
#[pyfunction]
fn big_g(order_mu: f64, order_nu: f64, x: f64) -> PyResult<f64> {
    let args = GArgs::new(order_mu, order_nu, x).map_err(value_err)?;
    Ok(specfun::big_g(&args).map_err(value_err)?.value)
}

/// Gauss hypergeometric `2F1(a, b; c; z)` for `0 <= z < 1`.
#[pyfunction]
fn hyp2f1(a: f64, b: f64, c: f64, z: f64) -> PyResult<f64> {
    Ok(specfun::hyp2f1(a, b, c, z).map_err(value_err)?.value)
}

#[pymodule]
fn vgm_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyVgParams>()?;
    m.add_class::<PyMomentResult>()?;
    m.add_function(wrap_pyfunction!(moment, m)?)?;
    m.add_function(wrap_pyfunction!(quad_abs_moment, m)?)?;
    m.add_function(wrap_pyfunction!(mc_abs_moment, m)?)?;
    m.add_function(wrap_pyfunction!(al_mean_deviation, m)?)?;
    m.add_function(wrap_pyfunction!(al_meandev_stddev_ratio, m)?)?;
    m.add_function(wrap_pyfunction!(bessel_k, m)?)?;
    m.add_function(wrap_pyfunction!(struve_l, m)?)?;
    m.add_function(wrap_pyfunction!(lommel_t_tilde, m)?)?;
    m.add_function(wrap_pyfunction!(big_g, m)?)?;
    m.add_function(wrap_pyfunction!(hyp2f1, m)?)?;
    Ok(())
}
