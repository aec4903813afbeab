//! Python bindings for `mrcbeam`.

use mrcbeam::beam::{self, BeamKind, BeamWeights};
use mrcbeam::montecarlo::{self, trial_rng};
use mrcbeam::theory::{self, HarmonicMode};
use pyo3::exceptions::{PyIndexError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;

fn to_py(err: mrcbeam::Error) -> PyErr {
    PyValueError::new_err(err.to_string())
}

fn harmonic(exact: bool) -> HarmonicMode {
    if exact {
        HarmonicMode::ExactHarmonic
    } else {
        HarmonicMode::ApproxLogGamma
    }
}

fn direction(k: [f64; 3]) -> PyResult<mrcbeam::Direction> {
    mrcbeam::Direction::new(k).map_err(to_py)
}

#[pyclass(name = "AntennaArray", module = "mrcbeam", frozen)]
struct PyAntennaArray {
    inner: mrcbeam::AntennaArray,
}

#[pymethods]
impl PyAntennaArray {
    #[new]
    fn new(positions: Vec<[f64; 3]>) -> PyResult<Self> {
        let inner = mrcbeam::AntennaArray::new(positions).map_err(to_py)?;
        Ok(Self { inner })
    }

    /// Uniform linear array along x, spacing in wavelengths.
    #[staticmethod]
    #[pyo3(signature = (n_elements, spacing=0.5))]
    fn ula(n_elements: usize, spacing: f64) -> PyResult<Self> {
        let inner = mrcbeam::AntennaArray::ula(n_elements, spacing).map_err(to_py)?;
        Ok(Self { inner })
    }

    #[staticmethod]
    #[pyo3(signature = (n_x, n_z, spacing=0.5))]
    fn planar_xz(n_x: usize, n_z: usize, spacing: f64) -> PyResult<Self> {
        let inner = mrcbeam::AntennaArray::planar_xz(n_x, n_z, spacing).map_err(to_py)?;
        Ok(Self { inner })
    }

    #[getter]
    fn positions(&self) -> Vec<[f64; 3]> {
        self.inner.positions().to_vec()
    }

    fn steering_vector(&self, k: [f64; 3]) -> PyResult<Vec<mrcbeam::Complex64>> {
        let k = direction(k)?;
        Ok(self.inner.steering_vector(&k))
    }

    fn __len__(&self) -> usize {
        self.inner.len()
    }

    fn __repr__(&self) -> String {
        format!("AntennaArray(n_elements={})", self.inner.len())
    }
}

#[pyclass(name = "FieldOfView", module = "mrcbeam", frozen, from_py_object)]
#[derive(Clone)]
struct PyFieldOfView {
    inner: mrcbeam::FieldOfView,
}

#[pymethods]
impl PyFieldOfView {
    /// Field of view spanning `total_deg` degrees centered on broadside.
    #[new]
    #[pyo3(signature = (total_deg=180.0))]
    fn new(total_deg: f64) -> PyResult<Self> {
        let inner = mrcbeam::FieldOfView::from_total_degrees(total_deg).map_err(to_py)?;
        Ok(Self { inner })
    }

    #[getter]
    fn half_angle(&self) -> f64 {
        self.inner.half_angle()
    }

    #[getter]
    fn total_degrees(&self) -> f64 {
        self.inner.total_degrees()
    }

    fn direction_at(&self, theta: f64) -> [f64; 3] {
        *self.inner.direction_at(theta).vector()
    }

    fn contains(&self, k: [f64; 3]) -> PyResult<bool> {
        Ok(self.inner.contains(&direction(k)?))
    }

    fn __repr__(&self) -> String {
        format!("FieldOfView(total_deg={})", self.inner.total_degrees())
    }
}

#[pyclass(name = "Channel", module = "mrcbeam", frozen)]
struct PyChannel {
    inner: mrcbeam::ChannelRealization,
}

#[pymethods]
impl PyChannel {
    /// Random channel with `m_paths` components; `(seed, trial)` selects the stream.
    #[staticmethod]
    #[pyo3(signature = (m_paths, fov=None, delay_max=100e-9, seed=0, trial=0))]
    fn sample(
        m_paths: usize,
        fov: Option<PyFieldOfView>,
        delay_max: f64,
        seed: u64,
        trial: u64,
    ) -> PyResult<Self> {
        let fov = match fov {
            Some(f) => f.inner,
            None => mrcbeam::FieldOfView::from_total_degrees(180.0).map_err(to_py)?,
        };
        let mut rng = trial_rng(seed, trial);
        let inner = mrcbeam::ChannelRealization::sample(m_paths, &fov, delay_max, &mut rng)
            .map_err(to_py)?;
        Ok(Self { inner })
    }

    #[staticmethod]
    fn four_path_example(alpha_4: f64) -> Self {
        Self {
            inner: mrcbeam::ChannelRealization::four_path_example(alpha_4),
        }
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        let inner = mrcbeam::ChannelRealization::from_json(text).map_err(to_py)?;
        Ok(Self { inner })
    }

    fn to_json(&self) -> PyResult<String> {
        self.inner.to_json().map_err(to_py)
    }

    /// `(alpha, direction, delay_seconds)` per component.
    #[getter]
    fn components(&self) -> Vec<(mrcbeam::Complex64, [f64; 3], f64)> {
        self.inner
            .components()
            .iter()
            .map(|c| (c.alpha, *c.direction.vector(), c.delay))
            .collect()
    }

    #[pyo3(signature = (array, f=0.0))]
    fn response(&self, array: &PyAntennaArray, f: f64) -> Vec<mrcbeam::Complex64> {
        self.inner.per_antenna_response(&array.inner, f)
    }

    fn remove_component(&self, index: usize) -> PyResult<Self> {
        if index >= self.inner.len() {
            return Err(PyIndexError::new_err(format!(
                "component {index} out of range"
            )));
        }
        let inner = self.inner.remove_component(index).map_err(to_py)?;
        Ok(Self { inner })
    }

    fn __len__(&self) -> usize {
        self.inner.len()
    }

    fn __repr__(&self) -> String {
        format!("Channel(m_paths={})", self.inner.len())
    }
}

#[pyclass(name = "Beam", module = "mrcbeam", frozen)]
struct PyBeam {
    inner: BeamWeights,
}

#[pymethods]
impl PyBeam {
    #[new]
    fn new(coefficients: Vec<mrcbeam::Complex64>) -> Self {
        Self {
            inner: BeamWeights::new(coefficients, BeamKind::Custom),
        }
    }

    /// MRC beam matched to the channel at band center.
    #[staticmethod]
    fn mrc(channel: &PyChannel, array: &PyAntennaArray) -> Self {
        Self {
            inner: beam::mrc_weights(&channel.inner, &array.inner),
        }
    }

    /// Beam steered at direction `k`.
    #[staticmethod]
    fn single(array: &PyAntennaArray, k: [f64; 3]) -> PyResult<Self> {
        Ok(Self {
            inner: beam::single_direction_weights(&array.inner, &direction(k)?),
        })
    }

    #[staticmethod]
    fn strongest_path(channel: &PyChannel, array: &PyAntennaArray) -> Self {
        Self {
            inner: beam::strongest_path_weights(&channel.inner, &array.inner),
        }
    }

    #[getter]
    fn coefficients(&self) -> Vec<mrcbeam::Complex64> {
        self.inner.coefficients().to_vec()
    }

    #[getter]
    fn kind(&self) -> &'static str {
        self.inner.kind().label()
    }

    fn array_factor(&self, array: &PyAntennaArray, r: [f64; 3]) -> PyResult<mrcbeam::Complex64> {
        beam::array_factor(&self.inner, &array.inner, &direction(r)?).map_err(to_py)
    }

    #[pyo3(signature = (channel, array, f=0.0, sigma0=1.0))]
    fn snr(
        &self,
        channel: &PyChannel,
        array: &PyAntennaArray,
        f: f64,
        sigma0: f64,
    ) -> PyResult<f64> {
        beam::snr_at(&self.inner, &channel.inner, &array.inner, sigma0, f).map_err(to_py)
    }

    /// `(theta_deg, gain_db)` pairs over −90..90 degrees.
    #[pyo3(signature = (array, fov=None, grid_deg=0.5))]
    fn pattern(
        &self,
        array: &PyAntennaArray,
        fov: Option<PyFieldOfView>,
        grid_deg: f64,
    ) -> PyResult<Vec<(f64, f64)>> {
        let fov = match fov {
            Some(f) => f.inner,
            None => mrcbeam::FieldOfView::from_total_degrees(180.0).map_err(to_py)?,
        };
        let samples =
            beam::beam_pattern(&self.inner, &array.inner, &fov, grid_deg).map_err(to_py)?;
        Ok(samples
            .into_iter()
            .map(|p| (p.theta_deg, p.gain_db))
            .collect())
    }

    fn __len__(&self) -> usize {
        self.inner.len()
    }
}

/// Effective flag per component of the MRC beam.
#[pyfunction]
fn classify_effectiveness(channel: &PyChannel, array: &PyAntennaArray) -> Vec<bool> {
    beam::classify_effectiveness(&channel.inner, &array.inner)
        .components
        .iter()
        .map(|c| c.effective)
        .collect()
}

#[pyfunction]
fn interference_term(
    channel: &PyChannel,
    array: &PyAntennaArray,
    index: usize,
) -> PyResult<mrcbeam::Complex64> {
    beam::interference_term(&channel.inner, &array.inner, index).map_err(to_py)
}

/// `(s, stderr)` for the array over the field of view.
#[pyfunction]
#[pyo3(signature = (array, fov=None, samples=100_000, seed=0))]
fn estimate_array_parameter(
    py: Python<'_>,
    array: &PyAntennaArray,
    fov: Option<PyFieldOfView>,
    samples: usize,
    seed: u64,
) -> PyResult<(f64, f64)> {
    let fov = match fov {
        Some(f) => f.inner,
        None => mrcbeam::FieldOfView::from_total_degrees(180.0).map_err(to_py)?,
    };
    let array = array.inner.clone();
    let est = py
        .detach(move || theory::estimate_array_parameter(&array, &fov, samples, seed))
        .map_err(to_py)?;
    Ok((est.s, est.stderr))
}

#[pyfunction]
fn p_ineff(m_paths: usize, s: f64) -> f64 {
    theory::p_ineff(m_paths, s)
}

#[pyfunction]
fn effective_count(m_paths: usize, s: f64) -> f64 {
    theory::effective_count(m_paths, s)
}

#[pyfunction]
#[pyo3(signature = (n_elements, m_paths, s, sigma0=1.0))]
fn snr_mrc_theory(n_elements: usize, m_paths: usize, s: f64, sigma0: f64) -> f64 {
    theory::snr_mrc_theory(n_elements, m_paths, s, sigma0)
}

#[pyfunction]
#[pyo3(signature = (n_elements, m_paths, s, sigma0=1.0, exact=false))]
fn snr_single_theory(n_elements: usize, m_paths: usize, s: f64, sigma0: f64, exact: bool) -> f64 {
    theory::snr_single_theory(n_elements, m_paths, s, sigma0, harmonic(exact))
}

#[pyfunction]
#[pyo3(signature = (m_paths, s, exact=false))]
fn snr_ratio_theory(m_paths: usize, s: f64, exact: bool) -> f64 {
    theory::snr_ratio_theory(m_paths, s, harmonic(exact))
}

#[pyfunction]
fn to_db(linear: f64) -> f64 {
    theory::to_db(linear)
}

fn config_from(
    py: Python<'_>,
    kwargs: Option<&Bound<'_, PyDict>>,
) -> PyResult<mrcbeam::ExperimentConfig> {
    let dict = match kwargs {
        Some(d) => d.copy()?,
        None => PyDict::new(py),
    };
    let workers: Option<usize> = match dict.get_item("workers")? {
        Some(w) => {
            dict.del_item("workers")?;
            w.extract()?
        }
        None => None,
    };
    if !dict.contains("seed")? {
        dict.set_item("seed", 0)?;
    }
    let text: String = py
        .import("json")?
        .call_method1("dumps", (dict,))?
        .extract()?;
    let mut cfg: mrcbeam::ExperimentConfig =
        serde_json::from_str(&text).map_err(|e| PyValueError::new_err(e.to_string()))?;
    cfg.workers = workers;
    cfg.validate().map_err(to_py)?;
    Ok(cfg)
}

fn run_to_python<R: serde::Serialize + Send>(
    py: Python<'_>,
    cfg: mrcbeam::ExperimentConfig,
    run: impl FnOnce(&mrcbeam::ExperimentConfig) -> mrcbeam::Result<R> + Send,
) -> PyResult<Py<PyAny>> {
    let text = py
        .detach(move || run(&cfg).and_then(|r| serde_json::to_string(&r).map_err(Into::into)))
        .map_err(to_py)?;
    Ok(py.import("json")?.call_method1("loads", (text,))?.unbind())
}

/// Effectiveness sweep; keyword arguments mirror the experiment config
/// (`n_elements`, `m_values`, `trials`, `seed`, `workers`, ...).
#[pyfunction]
#[pyo3(signature = (**kwargs))]
fn run_effectiveness_sweep(
    py: Python<'_>,
    kwargs: Option<&Bound<'_, PyDict>>,
) -> PyResult<Py<PyAny>> {
    let cfg = config_from(py, kwargs)?;
    run_to_python(py, cfg, montecarlo::run_effectiveness_sweep)
}

#[pyfunction]
#[pyo3(signature = (**kwargs))]
fn run_snr_sweep(py: Python<'_>, kwargs: Option<&Bound<'_, PyDict>>) -> PyResult<Py<PyAny>> {
    let cfg = config_from(py, kwargs)?;
    run_to_python(py, cfg, montecarlo::run_snr_sweep)
}

#[pyfunction]
#[pyo3(signature = (**kwargs))]
fn run_blockage_experiment(
    py: Python<'_>,
    kwargs: Option<&Bound<'_, PyDict>>,
) -> PyResult<Py<PyAny>> {
    let cfg = config_from(py, kwargs)?;
    run_to_python(py, cfg, montecarlo::run_blockage_experiment)
}

#[pymodule]
#[pyo3(name = "mrcbeam")]
fn mrcbeam_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("__version__", env!("CARGO_PKG_VERSION"))?;
    m.add_class::<PyAntennaArray>()?;
    m.add_class::<PyFieldOfView>()?;
    m.add_class::<PyChannel>()?;
    m.add_class::<PyBeam>()?;
    m.add_function(wrap_pyfunction!(classify_effectiveness, m)?)?;
    m.add_function(wrap_pyfunction!(interference_term, m)?)?;
    m.add_function(wrap_pyfunction!(estimate_array_parameter, m)?)?;
    m.add_function(wrap_pyfunction!(p_ineff, m)?)?;
    m.add_function(wrap_pyfunction!(effective_count, m)?)?;
    m.add_function(wrap_pyfunction!(snr_mrc_theory, m)?)?;
    m.add_function(wrap_pyfunction!(snr_single_theory, m)?)?;
    m.add_function(wrap_pyfunction!(snr_ratio_theory, m)?)?;
    m.add_function(wrap_pyfunction!(to_db, m)?)?;
    m.add_function(wrap_pyfunction!(run_effectiveness_sweep, m)?)?;
    m.add_function(wrap_pyfunction!(run_snr_sweep, m)?)?;
    m.add_function(wrap_pyfunction!(run_blockage_experiment, m)?)?;
    Ok(())
}
