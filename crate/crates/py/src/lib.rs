//! Python bindings for the fdp-noise toolkit: tradeoff functions,
//! canonical noise distributions (continuous and discrete), and the
//! anti-concentration bound.

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::PyDict;

use fdp_noise::cnd::{tulap_cdf, ContinuousCnd};
use fdp_noise::discrete::{
    self, named_distribution, DiscreteCnd, DiscretePmf, NamedDistribution,
};
use fdp_noise::tradeoff::{cauchy_tradeoff, TradeoffFunction as CoreTradeoff};
use fdp_noise::{audit, spec};

fn err<T>(r: fdp_noise::Result<T>) -> PyResult<T> {
    r.map_err(|e| PyValueError::new_err(e.to_string()))
}

/// An evaluable tradeoff curve.
#[pyclass(name = "TradeoffFunction", skip_from_py_object)]
#[derive(Clone)]
struct PyTradeoff {
    inner: CoreTradeoff,
}

#[pymethods]
impl PyTradeoff {
    /// The (eps, delta)-DP curve.
    #[staticmethod]
    fn eps_delta(eps: f64, delta: f64) -> PyResult<Self> {
        Ok(PyTradeoff {
            inner: err(CoreTradeoff::eps_delta(eps, delta))?,
        })
    }

    /// The Gaussian-DP curve G_mu.
    #[staticmethod]
    fn gdp(mu: f64) -> PyResult<Self> {
        Ok(PyTradeoff {
            inner: err(CoreTradeoff::gdp(mu))?,
        })
    }

    /// A shift-family member f_t for base in
    /// {"laplace", "gaussian", "logistic", "uniform"}.
    #[staticmethod]
    fn family(base: &str, t: f64) -> PyResult<Self> {
        let json = format!(r#"{{"kind":"family","base":"{base}","t":{t}}}"#);
        let parsed = err(spec::parse_tradeoff_spec(&json))?;
        Ok(PyTradeoff {
            inner: err(parsed.build())?,
        })
    }

    /// Build from the same JSON spec the CLI accepts.
    #[staticmethod]
    fn from_json(json: &str) -> PyResult<Self> {
        let parsed = err(spec::parse_tradeoff_spec(json))?;
        Ok(PyTradeoff {
            inner: err(parsed.build())?,
        })
    }

    fn eval(&self, alpha: f64) -> PyResult<f64> {
        err(self.inner.try_eval(alpha))
    }

    fn fixed_point(&self) -> f64 {
        self.inner.fixed_point()
    }

    fn iterate(&self, k: u32) -> PyResult<Self> {
        Ok(PyTradeoff {
            inner: err(self.inner.iterate(k))?,
        })
    }

    fn iterated_fixed_point(&self, t: u32) -> PyResult<f64> {
        err(self.inner.iterated_fixed_point(t))
    }

    /// {"c_f", "tv", "eps_f"} from the fixed point.
    fn summary<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyDict>> {
        let s = self.inner.summaries();
        let d = PyDict::new(py);
        d.set_item("c_f", s.c_f)?;
        d.set_item("tv", s.tv)?;
        d.set_item("eps_f", s.eps_f)?;
        Ok(d)
    }

    fn label(&self) -> String {
        self.inner.label().to_string()
    }

    fn __repr__(&self) -> String {
        format!("TradeoffFunction({})", self.inner.label())
    }
}

/// A continuous canonical noise distribution.
#[pyclass(name = "ContinuousCnd")]
struct PyCnd {
    inner: ContinuousCnd,
}

#[pymethods]
impl PyCnd {
    /// Construct the CND for a symmetric nontrivial tradeoff function.
    #[staticmethod]
    fn construct(f: &PyTradeoff) -> PyResult<Self> {
        Ok(PyCnd {
            inner: err(ContinuousCnd::construct(f.inner.clone()))?,
        })
    }

    fn cdf(&self, x: f64) -> f64 {
        self.inner.cdf(x)
    }

    fn quantile(&self, u: f64) -> PyResult<f64> {
        err(self.inner.quantile(u))
    }

    fn sample(&self, seed: u64, n: usize) -> Vec<f64> {
        self.inner.sample(seed, n)
    }

    /// P(|N| <= t/2) for integer t.
    fn concentration(&self, t: u32) -> f64 {
        self.inner.concentration(t)
    }

    fn c_f(&self) -> f64 {
        self.inner.c_f()
    }

    fn eps_f(&self) -> f64 {
        self.inner.eps_f()
    }

    /// JSON audit report of the sub-exponential tail and moment bounds.
    fn tail_and_moment_check(&self, t_max: f64, n_max: u32) -> String {
        self.inner.tail_and_moment_check(t_max, n_max).to_json()
    }

    fn __repr__(&self) -> String {
        format!("ContinuousCnd({})", self.inner.label())
    }
}

/// An integer-supported pmf on a contiguous range.
#[pyclass(name = "DiscretePmf", skip_from_py_object)]
#[derive(Clone)]
struct PyPmf {
    inner: DiscretePmf,
}

#[pymethods]
impl PyPmf {
    #[new]
    fn new(lo: i64, mass: Vec<f64>) -> PyResult<Self> {
        Ok(PyPmf {
            inner: err(DiscretePmf::new(lo, mass))?,
        })
    }

    #[staticmethod]
    fn discrete_laplace(eps: f64) -> PyResult<Self> {
        Ok(PyPmf {
            inner: err(named_distribution(&NamedDistribution::DiscreteLaplace {
                eps,
            }))?,
        })
    }

    #[staticmethod]
    fn rounded_gaussian(sigma: f64) -> PyResult<Self> {
        Ok(PyPmf {
            inner: err(named_distribution(&NamedDistribution::RoundedGaussian {
                sigma,
            }))?,
        })
    }

    #[staticmethod]
    fn discrete_gaussian(sigma: f64) -> PyResult<Self> {
        Ok(PyPmf {
            inner: err(named_distribution(&NamedDistribution::DiscreteGaussian {
                sigma,
            }))?,
        })
    }

    fn lo(&self) -> i64 {
        self.inner.lo()
    }

    fn hi(&self) -> i64 {
        self.inner.hi()
    }

    fn mass_at(&self, x: i64) -> f64 {
        self.inner.mass_at(x)
    }

    fn moment(&self, k: u32) -> PyResult<f64> {
        err(self.inner.moment(k))
    }

    fn variance(&self) -> f64 {
        self.inner.variance()
    }

    fn sample(&self, seed: u64, n: usize) -> Vec<i64> {
        self.inner.sample(seed, n)
    }

    fn __repr__(&self) -> String {
        format!("DiscretePmf(lo={}, len={})", self.inner.lo(), self.inner.masses().len())
    }
}

/// A discrete canonical noise distribution at a declared sensitivity.
#[pyclass(name = "DiscreteCnd")]
struct PyDiscreteCnd {
    inner: DiscreteCnd,
}

#[pymethods]
impl PyDiscreteCnd {
    /// The unique discrete CND at sensitivity 1.
    #[staticmethod]
    fn unique_sens1(f: &PyTradeoff) -> PyResult<Self> {
        Ok(PyDiscreteCnd {
            inner: err(discrete::unique_sens1(&f.inner))?,
        })
    }

    /// Round delta times a continuous CND.
    #[staticmethod]
    fn round_cnd(cnd: &PyCnd, delta: u32) -> PyResult<Self> {
        Ok(PyDiscreteCnd {
            inner: err(discrete::round_cnd(&cnd.inner, delta))?,
        })
    }

    /// The sensitivity-2 pure-DP family member with cdf F(0) = f0.
    #[staticmethod]
    fn sens2_pure_dp(eps: f64, f0: f64) -> PyResult<Self> {
        Ok(PyDiscreteCnd {
            inner: err(discrete::sens2_pure_dp(eps, f0))?,
        })
    }

    fn pmf(&self) -> PyPmf {
        PyPmf {
            inner: self.inner.pmf().clone(),
        }
    }

    fn delta(&self) -> u32 {
        self.inner.delta()
    }

    fn sample(&self, seed: u64, n: usize) -> Vec<i64> {
        self.inner.sample(seed, n)
    }

    /// JSON audit report of the defining discrete-CND properties.
    fn verify(&self) -> String {
        discrete::verify_discrete_cnd(&self.inner).to_json()
    }

    fn __repr__(&self) -> String {
        format!("DiscreteCnd(delta={})", self.inner.delta())
    }
}

/// Anti-concentration bound for window length t under f-DP.
#[pyfunction]
fn anti_bound(f: &PyTradeoff, t: u32) -> PyResult<f64> {
    err(audit::anti_bound(&f.inner, t))
}

/// Vertices of the exact tradeoff curve T(p, q) for two integer pmfs.
#[pyfunction]
fn roc_discrete(p: &PyPmf, q: &PyPmf) -> PyResult<Vec<(f64, f64)>> {
    Ok(err(fdp_noise::tradeoff::roc_discrete(&p.inner, &q.inner))?
        .vertices()
        .to_vec())
}

/// Whether T(p, p + shift) dominates f at every vertex (within tol);
/// returns (dominates, worst_margin).
#[pyfunction]
fn shift_dominates(p: &PyPmf, shift: i64, f: &PyTradeoff, tol: f64) -> PyResult<(bool, f64)> {
    let curve = err(fdp_noise::tradeoff::roc_discrete(
        &p.inner,
        &p.inner.shift(shift),
    ))?;
    let check = fdp_noise::tradeoff::dominates(&curve, &f.inner, tol);
    Ok((check.dominates, check.worst_margin))
}

/// JSON anti-concentration audit of an integer pmf against f.
#[pyfunction]
fn audit_pmf(p: &PyPmf, f: &PyTradeoff, t_max: u32) -> PyResult<String> {
    let spec = err(audit::NoiseSpec::new(
        fdp_noise::logconcave::RivalNoise::from_pmf(p.inner.clone(), "pmf"),
        1,
    ))?;
    Ok(err(audit::audit_noise(&spec, &f.inner, t_max, &[]))?.to_json())
}

/// JSON stochastic-dominance audit of a rival integer pmf against the
/// unique sensitivity-1 discrete CND for f.
#[pyfunction]
fn dominance_audit_discrete(
    f: &PyTradeoff,
    rival: &PyPmf,
    radius: i64,
    t_max: u32,
) -> PyResult<String> {
    let dcnd = err(discrete::unique_sens1(&f.inner))?;
    Ok(err(discrete::dominance_audit_discrete(
        &dcnd,
        &rival.inner,
        -radius..=radius,
        t_max,
        None,
    ))?
    .to_json())
}

/// Reference cdf of Tulap(0, exp(-eps), 0).
#[pyfunction(name = "tulap_cdf")]
fn tulap_cdf_py(eps: f64, x: f64) -> PyResult<f64> {
    err(tulap_cdf(eps, x))
}

/// The Cauchy tradeoff curve with its pure-DP envelope exponents;
/// returns (curve, eps_l, eps_u).
#[pyfunction(name = "cauchy_tradeoff")]
fn cauchy_tradeoff_py(m: f64) -> PyResult<(PyTradeoff, f64, f64)> {
    let ct = err(cauchy_tradeoff(m))?;
    Ok((PyTradeoff { inner: ct.curve }, ct.eps_l, ct.eps_u))
}

#[pymodule]
fn fdpnoise(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyTradeoff>()?;
    m.add_class::<PyCnd>()?;
    m.add_class::<PyPmf>()?;
    m.add_class::<PyDiscreteCnd>()?;
    m.add_function(wrap_pyfunction!(anti_bound, m)?)?;
    m.add_function(wrap_pyfunction!(roc_discrete, m)?)?;
    m.add_function(wrap_pyfunction!(shift_dominates, m)?)?;
    m.add_function(wrap_pyfunction!(audit_pmf, m)?)?;
    m.add_function(wrap_pyfunction!(dominance_audit_discrete, m)?)?;
    m.add_function(wrap_pyfunction!(tulap_cdf_py, m)?)?;
    m.add_function(wrap_pyfunction!(cauchy_tradeoff_py, m)?)?;
    Ok(())
}
