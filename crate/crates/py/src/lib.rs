//! Python bindings: `import evlab`.

use num_complex::Complex64;
use pyo3::create_exception;
use pyo3::exceptions::{PyArithmeticError, PyOSError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;

use evlab_core::eisen2;
use evlab_core::maass::{load_maass_form, MaassForm as CoreForm};
use evlab_core::moments::{self, MomentReport};
use evlab_core::{lfun, verify as suite, wimu, Error, QuadratureSpec};

create_exception!(evlab, NumericalError, PyArithmeticError, "A quadrature, series or budget failure.");

fn to_py(e: Error) -> PyErr {
    match e {
        Error::Io { .. } => PyOSError::new_err(e.to_string()),
        Error::Parse { .. }
        | Error::Precondition { .. }
        | Error::Region { .. }
        | Error::CeilingExceeded { .. }
        | Error::MissingPrime { .. }
        | Error::InvariantViolation { .. }
        | Error::HeckeResidual { .. }
        | Error::OutOfRange { .. } => PyValueError::new_err(e.to_string()),
        _ => NumericalError::new_err(e.to_string()),
    }
}

/// A Hecke–Maass cusp form for SL(2, Z) loaded from a coefficient file.
#[pyclass(name = "MaassForm", module = "evlab", frozen)]
struct MaassForm(CoreForm);

#[pymethods]
impl MaassForm {
    #[staticmethod]
    fn load(path: &str) -> PyResult<Self> {
        load_maass_form(path).map(Self).map_err(to_py)
    }

    #[getter]
    fn spectral_param(&self) -> f64 {
        self.0.spectral_param()
    }

    #[getter]
    fn parity(&self) -> &'static str {
        self.0.parity().as_str()
    }

    #[getter]
    fn label(&self) -> String {
        self.0.label().to_string()
    }

    /// ρ(1) with `ρ(1)² = 8/Λ(1, ad φ)`.
    fn rho1(&self) -> PyResult<f64> {
        self.0.rho1().map_err(to_py)
    }

    fn hecke_lambda(&self, m: u64) -> PyResult<f64> {
        self.0.hecke_lambda(m).map_err(to_py)
    }

    fn __repr__(&self) -> String {
        format!("MaassForm('{}', t={}, {})", self.0.label(), self.0.spectral_param(), self.0.parity().as_str())
    }
}

fn spec() -> QuadratureSpec {
    QuadratureSpec::default()
}

#[pyfunction]
fn l_value(form: &MaassForm, s: Complex64) -> PyResult<Complex64> {
    lfun::l_value(&form.0, s, &spec()).map(|v| v.value).map_err(to_py)
}

/// μ_{n,t} from the completed L-functions.
#[pyfunction]
#[pyo3(signature = (form, n, t, a_n = Complex64::new(1.0, 0.0)))]
fn mu(form: &MaassForm, n: u32, t: f64, a_n: Complex64) -> PyResult<Complex64> {
    wimu::mu_completed(&form.0, n, t, a_n, &spec()).map(|m| m.value).map_err(to_py)
}

/// μ_{n,t} from the explicit Γ-factor display.
#[pyfunction]
#[pyo3(signature = (form, n, t, a_n = Complex64::new(1.0, 0.0)))]
fn mu_gamma_form(form: &MaassForm, n: u32, t: f64, a_n: Complex64) -> PyResult<Complex64> {
    wimu::mu_gamma_form(&form.0, n, t, a_n, &spec()).map(|m| m.value).map_err(to_py)
}

#[pyfunction]
#[pyo3(signature = (form, n, t, a_n = Complex64::new(1.0, 0.0)))]
fn mu_squared(form: &MaassForm, n: u32, t: f64, a_n: Complex64) -> PyResult<f64> {
    wimu::mu_squared(&form.0, n, t, a_n, &spec()).map_err(to_py)
}

#[pyfunction]
fn gamma_factor_sq(form: &MaassForm, n: u32, t: f64) -> PyResult<f64> {
    wimu::gamma_factor_sq(&form.0, n, t).map_err(to_py)
}

#[pyfunction]
fn stirling_gamma_sq(n: u32, t: f64) -> f64 {
    wimu::stirling_gamma_sq(n, t)
}

/// The unfolded triple product as a Dirichlet series: `(value, err_estimate)`.
#[pyfunction]
fn i_series(form: &MaassForm, n: u32, t: f64, s: Complex64) -> PyResult<(Complex64, f64)> {
    eisen2::i_series(&form.0, n, t, s, None).map(|v| (v.value, v.err_estimate)).map_err(to_py)
}

/// The unfolded triple product in Γ·L closed form: `(value, err_estimate)`.
#[pyfunction]
fn i_closed(form: &MaassForm, n: u32, t: f64, s: Complex64) -> PyResult<(Complex64, f64)> {
    eisen2::i_closed(&form.0, n, t, s, &spec()).map(|v| (v.value, v.err_estimate)).map_err(to_py)
}

fn report_dict<'py>(py: Python<'py>, r: &MomentReport) -> PyResult<Bound<'py, PyDict>> {
    let d = PyDict::new(py);
    d.set_item("kind", r.kind.as_str())?;
    d.set_item("n", r.n)?;
    d.set_item("T", r.t_window)?;
    d.set_item("integral", r.integral)?;
    d.set_item("predicted", r.predicted)?;
    d.set_item("ratio", r.ratio)?;
    d.set_item("grid_step", r.grid_step)?;
    d.set_item("samples", r.samples)?;
    d.set_item("err_estimate", r.err_estimate)?;
    let diag = PyDict::new(py);
    for (k, v) in &r.diagnostics {
        diag.set_item(*k, *v)?;
    }
    d.set_item("diagnostics", diag)?;
    Ok(d)
}

#[pyfunction]
#[pyo3(signature = (form, n, big_t, a_n = Complex64::new(1.0, 0.0)))]
fn mean_value<'py>(py: Python<'py>, form: &MaassForm, n: u32, big_t: f64, a_n: Complex64) -> PyResult<Bound<'py, PyDict>> {
    let r = py.detach(|| moments::mean_value(&form.0, n, big_t, a_n, &spec())).map_err(to_py)?;
    report_dict(py, &r)
}

#[pyfunction]
fn second_moment<'py>(py: Python<'py>, form: &MaassForm, big_t: f64) -> PyResult<Bound<'py, PyDict>> {
    let r = py.detach(|| moments::second_moment(&form.0, big_t, &spec())).map_err(to_py)?;
    report_dict(py, &r)
}

#[pyfunction]
#[pyo3(signature = (form, n, big_t, a_n = Complex64::new(1.0, 0.0)))]
fn weighted_variance<'py>(
    py: Python<'py>,
    form: &MaassForm,
    n: u32,
    big_t: f64,
    a_n: Complex64,
) -> PyResult<Bound<'py, PyDict>> {
    let r = py.detach(|| moments::weighted_variance(&form.0, n, big_t, a_n, &spec())).map_err(to_py)?;
    report_dict(py, &r)
}

#[pyfunction]
#[pyo3(signature = (phi, psi, n, big_t, a_n = Complex64::new(1.0, 0.0)))]
fn cross_variance<'py>(
    py: Python<'py>,
    phi: &MaassForm,
    psi: &MaassForm,
    n: u32,
    big_t: f64,
    a_n: Complex64,
) -> PyResult<Bound<'py, PyDict>> {
    let r = py
        .detach(|| moments::cross_variance(&phi.0, &psi.0, n, big_t, a_n, &spec()))
        .map_err(to_py)?;
    report_dict(py, &r)
}

/// Runs the identity suite; returns `(name, passed, residual, tolerance)` tuples.
#[pyfunction]
fn verify(py: Python<'_>, forms: Vec<PyRef<'_, MaassForm>>) -> Vec<(String, bool, f64, f64)> {
    let refs: Vec<&CoreForm> = forms.iter().map(|f| &f.0).collect();
    let results = py.detach(|| suite::run_suite(&refs, &spec()));
    results.into_iter().map(|r| (r.name, r.passed, r.residual, r.tolerance)).collect()
}

#[pymodule]
fn evlab(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("__version__", evlab_core::VERSION)?;
    m.add("NumericalError", m.py().get_type::<NumericalError>())?;
    m.add_class::<MaassForm>()?;
    m.add_function(wrap_pyfunction!(l_value, m)?)?;
    m.add_function(wrap_pyfunction!(mu, m)?)?;
    m.add_function(wrap_pyfunction!(mu_gamma_form, m)?)?;
    m.add_function(wrap_pyfunction!(mu_squared, m)?)?;
    m.add_function(wrap_pyfunction!(gamma_factor_sq, m)?)?;
    m.add_function(wrap_pyfunction!(stirling_gamma_sq, m)?)?;
    m.add_function(wrap_pyfunction!(i_series, m)?)?;
    m.add_function(wrap_pyfunction!(i_closed, m)?)?;
    m.add_function(wrap_pyfunction!(mean_value, m)?)?;
    m.add_function(wrap_pyfunction!(second_moment, m)?)?;
    m.add_function(wrap_pyfunction!(weighted_variance, m)?)?;
    m.add_function(wrap_pyfunction!(cross_variance, m)?)?;
    m.add_function(wrap_pyfunction!(verify, m)?)?;
    Ok(())
}
