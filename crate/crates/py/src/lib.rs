use diracdet::determinant::{self, ContourSpec};
use diracdet::greens::{zero_mode_scan, DiskProblem};
use diracdet::seeley::k_nu as k_nu_value;
use diracdet::{Error, GaugeField, GaugeProfile};
use num_complex::Complex64;
use pyo3::exceptions::{PyArithmeticError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;

fn to_py(e: Error) -> PyErr {
    match e {
        Error::Accuracy { .. } => PyArithmeticError::new_err(e.to_string()),
        _ => PyValueError::new_err(e.to_string()),
    }
}

fn gauge(profile: &str, params: Vec<f64>, radius: f64) -> PyResult<GaugeField> {
    let p = match (profile, params.as_slice()) {
        ("poly2", [phi0]) => GaugeProfile::Poly2 { phi0: *phi0 },
        ("gaussian", [phi0, width]) => GaugeProfile::Gaussian { phi0: *phi0, width: *width },
        ("polynomial", _) => GaugeProfile::Polynomial { coeffs: params },
        _ => return Err(PyValueError::new_err(format!("bad profile {profile:?} with {} params", params.len()))),
    };
    GaugeField::new(p, radius).map_err(to_py)
}

fn problem(profile: &str, params: Vec<f64>, radius: f64, w: Complex64, alpha: f64) -> PyResult<DiskProblem> {
    DiskProblem::new(gauge(profile, params, radius)?, w, alpha).map_err(to_py)
}

/// `ln det` ratio of the gauged to the free chiral bag operator on the disk.
#[pyfunction]
#[pyo3(signature = (profile = "poly2", params = vec![1.0], radius = 1.0, w = Complex64::new(1.0, 0.0)))]
fn ln_det_ratio<'py>(
    py: Python<'py>,
    profile: &str,
    params: Vec<f64>,
    radius: f64,
    w: Complex64,
) -> PyResult<Bound<'py, PyDict>> {
    let r = determinant::ln_det_ratio(&problem(profile, params, radius, w, 1.0)?).map_err(to_py)?;
    let d = PyDict::new(py);
    d.set_item("bulk", r.bulk_term)?;
    d.set_item("boundary", r.boundary_term)?;
    d.set_item("total", r.total)?;
    d.set_item("flux", r.flux)?;
    let diag = PyDict::new(py);
    for (k, v) in &r.diagnostics {
        diag.set_item(k, *v)?;
    }
    d.set_item("oracle_residuals", diag)?;
    Ok(d)
}

#[pyfunction]
fn boundary_term(w: Complex64, flux: f64) -> PyResult<Complex64> {
    determinant::boundary_term(w, flux).map_err(to_py)
}

/// Boundary term by the keyhole contour integral, for comparison with `boundary_term`.
#[pyfunction]
fn boundary_contour(w: Complex64, flux: f64) -> PyResult<Complex64> {
    let spec = ContourSpec::for_boundary(w).map_err(to_py)?;
    determinant::boundary_contour_oracle(w, flux, &spec).map_err(to_py)
}

#[pyfunction]
#[pyo3(signature = (profile = "poly2", params = vec![1.0], radius = 1.0))]
fn flux(profile: &str, params: Vec<f64>, radius: f64) -> PyResult<f64> {
    Ok(determinant::flux(&gauge(profile, params, radius)?))
}

/// Returns `(closed form, log contour, Bessel oracle)` for the bulk term at `alpha`.
#[pyfunction]
#[pyo3(signature = (profile = "poly2", params = vec![1.0], radius = 1.0, alpha = 1.0))]
fn bulk_terms(profile: &str, params: Vec<f64>, radius: f64, alpha: f64) -> PyResult<(f64, f64, f64)> {
    let g = gauge(profile, params, radius)?;
    Ok((
        determinant::bulk_c2_term(&g, alpha).map_err(to_py)?,
        determinant::bulk_log_term(&g, alpha).map_err(to_py)?,
        determinant::bulk_c2_bessel_oracle(&g, alpha, 0.05).map_err(to_py)?,
    ))
}

#[pyfunction]
fn k_nu(nu: u32) -> f64 {
    k_nu_value(nu)
}

/// Dimension of the kernel found by scanning angular momenta in `[n_min, n_max]`.
#[pyfunction]
#[pyo3(signature = (profile = "poly2", params = vec![1.0], radius = 1.0, w = Complex64::new(1.0, 0.0), n_min = -10, n_max = 10))]
fn zero_modes(profile: &str, params: Vec<f64>, radius: f64, w: Complex64, n_min: i32, n_max: i32) -> PyResult<usize> {
    let p = problem(profile, params, radius, w, 1.0)?;
    Ok(zero_mode_scan(&p, n_min, n_max).map_err(to_py)?.kernel_dimension)
}

#[pymodule]
fn pydiracdet(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_function(wrap_pyfunction!(ln_det_ratio, m)?)?;
    m.add_function(wrap_pyfunction!(boundary_term, m)?)?;
    m.add_function(wrap_pyfunction!(boundary_contour, m)?)?;
    m.add_function(wrap_pyfunction!(flux, m)?)?;
    m.add_function(wrap_pyfunction!(bulk_terms, m)?)?;
    m.add_function(wrap_pyfunction!(k_nu, m)?)?;
    m.add_function(wrap_pyfunction!(zero_modes, m)?)?;
    Ok(())
}
