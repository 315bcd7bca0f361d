//! Python bindings. The module is importable as `harmony`.

use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;

use harmony_core as core;
use harmony_core::empirics::correlate_measure_with;
use harmony_core::{DatasetId, Measure, MeasureSource, Mode, Target, TuningName};

fn py_err(e: core::Error) -> PyErr {
    if e.is_usage() {
        PyValueError::new_err(e.to_string())
    } else {
        PyRuntimeError::new_err(e.to_string())
    }
}

trait IntoPy<T> {
    fn py(self) -> PyResult<T>;
}

impl<T> IntoPy<T> for core::Result<T> {
    fn py(self) -> PyResult<T> {
        self.map_err(py_err)
    }
}

fn pair(f: &core::Fraction) -> (u64, u64) {
    (f.numer(), f.denom())
}

/// A set of semitone offsets.
#[pyclass(name = "Harmony", module = "harmony", frozen, eq, hash, from_py_object)]
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct PyHarmony(core::Harmony);

#[pymethods]
impl PyHarmony {
    #[new]
    fn new(semitones: Vec<i32>) -> PyResult<Self> {
        core::Harmony::new(semitones).py().map(PyHarmony)
    }

    /// Parses "0,4,7" or pitch names such as "C4 E4 G4".
    #[staticmethod]
    fn parse(spec: &str) -> PyResult<Self> {
        Ok(PyHarmony(core::parse_pitch_spec(spec).py()?.harmony))
    }

    #[getter]
    fn semitones(&self) -> Vec<i32> {
        self.0.semitones().to_vec()
    }

    fn reduced_to_octave(&self) -> Self {
        PyHarmony(self.0.reduced_to_octave())
    }

    fn __len__(&self) -> usize {
        self.0.len()
    }

    fn __str__(&self) -> String {
        self.0.to_string()
    }

    fn __repr__(&self) -> String {
        format!("Harmony([{}])", self.0.to_string().replace(',', ", "))
    }
}

/// A tuning table: equal, pythagorean, kirnberger3, rational or just.
#[pyclass(name = "Tuning", module = "harmony", frozen, from_py_object)]
#[derive(Clone)]
pub struct PyTuning(core::TuningTable);

#[pymethods]
impl PyTuning {
    /// `deviation` is the rational tuning's bound as a fraction (0.01 = 1%).
    #[new]
    #[pyo3(signature = (name = "just", deviation = None))]
    fn new(name: &str, deviation: Option<f64>) -> PyResult<Self> {
        let parsed: TuningName = name.parse().py()?;
        match (parsed, deviation) {
            (TuningName::Rational, Some(d)) => core::rational_tuning(d).py().map(PyTuning),
            (_, Some(_)) => Err(PyValueError::new_err(
                "deviation only applies to the rational tuning",
            )),
            (t, None) => Ok(PyTuning(core::TuningTable::builtin(t))),
        }
    }

    #[getter]
    fn name(&self) -> &'static str {
        self.0.name.as_str()
    }

    #[getter]
    fn label(&self) -> String {
        self.0.label()
    }

    /// The 13 ratios as (numerator, denominator), or None for equal temperament.
    #[getter]
    fn ratios(&self) -> Option<Vec<(u64, u64)>> {
        self.0.ratios().ok().map(|r| r.iter().map(pair).collect())
    }

    /// Ratio of any semitone offset, folded by octaves.
    fn ratio(&self, semitone: i32) -> PyResult<(u64, u64)> {
        Ok(pair(&self.0.ratio_for_semitone(semitone).py()?))
    }

    /// Signed deviation of semitone 0..=12 from equal temperament, in percent.
    fn deviation(&self, semitone: usize) -> PyResult<f64> {
        self.0.deviation(semitone).py()
    }

    fn to_csv(&self) -> PyResult<String> {
        self.0.to_csv().py()
    }

    fn __repr__(&self) -> String {
        format!("Tuning('{}')", self.0.label())
    }
}

#[derive(FromPyObject)]
enum ChordArg {
    Harmony(PyHarmony),
    Spec(String),
    Tones(Vec<i32>),
}

impl ChordArg {
    fn resolve(self) -> PyResult<core::Harmony> {
        match self {
            ChordArg::Harmony(h) => Ok(h.0),
            ChordArg::Spec(s) => Ok(core::parse_pitch_spec(&s).py()?.harmony),
            ChordArg::Tones(t) => core::Harmony::new(t).py(),
        }
    }
}

// short-lived argument wrapper, so the size difference does not matter
#[allow(clippy::large_enum_variant)]
#[derive(FromPyObject)]
enum TuningArg {
    Table(PyTuning),
    Name(String),
}

impl TuningArg {
    fn resolve(self) -> PyResult<core::TuningTable> {
        match self {
            TuningArg::Table(t) => Ok(t.0),
            TuningArg::Name(n) => core::builtin_tuning(&n).py(),
        }
    }
}

#[pyclass(name = "Analysis", module = "harmony", frozen, get_all)]
pub struct PyAnalysis {
    harmony: PyHarmony,
    tuning: String,
    raw_h: u64,
    /// Per-reference-tone periodicity as (numerator, denominator).
    inversion_h: Vec<(u64, u64)>,
    mean_h: f64,
    mean_log_h: f64,
}

#[pymethods]
impl PyAnalysis {
    fn __repr__(&self) -> String {
        format!(
            "Analysis(harmony={}, tuning='{}', raw_h={}, mean_h={:.1}, mean_log_h={:.3})",
            self.harmony.0, self.tuning, self.raw_h, self.mean_h, self.mean_log_h
        )
    }
}

/// Periodicity of a chord, averaged over every tone as reference unless disabled.
#[pyfunction]
#[pyo3(signature = (chord, tuning = TuningArg::Name("just".into()), average_inversions = true))]
fn analyze(chord: ChordArg, tuning: TuningArg, average_inversions: bool) -> PyResult<PyAnalysis> {
    let r = core::analyze(&chord.resolve()?, &tuning.resolve()?, average_inversions).py()?;
    Ok(PyAnalysis {
        harmony: PyHarmony(r.harmony),
        tuning: r.tuning,
        raw_h: r.raw_h,
        inversion_h: r.inversion_h.iter().map(pair).collect(),
        mean_h: r.mean_h,
        mean_log_h: r.mean_log_h,
    })
}

/// Value of one measure: periodicity, log_periodicity, similarity, gradus, omega or brefeld.
#[pyfunction]
#[pyo3(signature = (name, chord, tuning = TuningArg::Name("just".into())))]
fn measure(name: &str, chord: ChordArg, tuning: TuningArg) -> PyResult<f64> {
    let m: Measure = name.parse().py()?;
    m.evaluate(&chord.resolve()?, &tuning.resolve()?, true).py()
}

#[pyclass(name = "Approximation", module = "harmony", frozen, get_all)]
pub struct PyApproximation {
    target: f64,
    precision: f64,
    result: (u64, u64),
    mediants: Vec<(u64, u64)>,
    relative_error: f64,
}

#[pymethods]
impl PyApproximation {
    fn __repr__(&self) -> String {
        format!(
            "Approximation({}/{} for {})",
            self.result.0, self.result.1, self.target
        )
    }
}

/// Fraction with the smallest denominator within relative `precision` of `x`.
#[pyfunction]
#[pyo3(signature = (x, precision = 0.01))]
fn approximate(x: f64, precision: f64) -> PyResult<PyApproximation> {
    let t = core::approximate(x, precision).py()?;
    Ok(PyApproximation {
        target: t.target,
        precision: t.precision,
        result: pair(&t.result),
        mediants: t.mediants.iter().map(pair).collect(),
        relative_error: t.relative_error(),
    })
}

/// Strictly improving mediants of `x` in (0, 1).
#[pyfunction]
#[pyo3(signature = (x, steps = 10))]
fn mediant_sequence(x: f64, steps: usize) -> PyResult<Vec<(u64, u64)>> {
    Ok(core::mediant_sequence(x, steps)
        .py()?
        .iter()
        .map(pair)
        .collect())
}

/// One-sided p value of a correlation coefficient.
#[pyfunction]
fn significance(r: f64, n: usize) -> PyResult<f64> {
    core::empirics::stats::significance(r, n).py()
}

#[pyclass(name = "Correlation", module = "harmony", frozen, get_all)]
pub struct PyCorrelation {
    dataset: String,
    measure: String,
    tuning: Option<String>,
    mode: String,
    r: f64,
    p: f64,
    n: usize,
}

#[pymethods]
impl PyCorrelation {
    fn __repr__(&self) -> String {
        format!(
            "Correlation({} {} r={:.3} p={:.4} n={})",
            self.dataset, self.measure, self.r, self.p, self.n
        )
    }
}

/// Correlates a measure with one of the embedded rating datasets.
///
/// With `printed=True` the measure is read from the dataset's printed column.
#[pyfunction]
#[pyo3(signature = (dataset, measure = "periodicity", tuning = TuningArg::Name("just".into()),
                    mode = "ranks", printed = false, average_inversions = true))]
fn correlate(
    dataset: &str,
    measure: &str,
    tuning: TuningArg,
    mode: &str,
    printed: bool,
    average_inversions: bool,
) -> PyResult<PyCorrelation> {
    let id: DatasetId = dataset.parse().py()?;
    let data = core::EmpiricalDataset::load(id).py()?;
    let source = if printed {
        MeasureSource::Static(measure.to_string())
    } else {
        MeasureSource::parse(measure)
    };
    let mode: Mode = mode.parse().py()?;
    let r = correlate_measure_with(&data, &source, &tuning.resolve()?, mode, average_inversions)
        .py()?;
    Ok(PyCorrelation {
        dataset: r.dataset.to_string(),
        measure: r.measure,
        tuning: r.tuning,
        mode: r.mode.to_string(),
        r: r.r,
        p: r.p,
        n: r.n,
    })
}

/// Ranks every one-octave harmony; returns (rank, semitones, value) rows.
#[pyfunction]
#[pyo3(signature = (measure = "log_periodicity", tuning = TuningArg::Name("just".into()),
                    cardinality = None, top = None))]
fn rank(
    measure: &str,
    tuning: TuningArg,
    cardinality: Option<usize>,
    top: Option<usize>,
) -> PyResult<Vec<(usize, Vec<i32>, f64)>> {
    let m: Measure = measure.parse().py()?;
    let table = core::rank_table(&tuning.resolve()?, m, cardinality, top).py()?;
    Ok(table
        .rows
        .into_iter()
        .map(|row| (row.rank, row.harmony.semitones().to_vec(), row.value))
        .collect())
}

#[pyclass(name = "OracleReport", module = "harmony", frozen, get_all)]
pub struct PyOracleReport {
    raw_h: u64,
    f1: f64,
    detected_period: Option<f64>,
    implied_h: Option<f64>,
    relative_error: Option<f64>,
    agrees: bool,
}

#[pymethods]
impl PyOracleReport {
    fn __repr__(&self) -> String {
        format!(
            "OracleReport(raw_h={}, implied_h={:?}, agrees={})",
            self.raw_h, self.implied_h, self.agrees
        )
    }
}

/// Compares the lcm periodicity with the period found in the tones' autocorrelation.
#[pyfunction]
#[pyo3(signature = (chord, tuning = TuningArg::Name("just".into()), f1 = 440.0, tolerance = 1e-6))]
fn oracle(chord: ChordArg, tuning: TuningArg, f1: f64, tolerance: f64) -> PyResult<PyOracleReport> {
    let r =
        core::signal::oracle_check(&chord.resolve()?, &tuning.resolve()?, f1, tolerance).py()?;
    Ok(PyOracleReport {
        raw_h: r.raw_h,
        f1: r.f1,
        detected_period: r.detected_period,
        implied_h: r.implied_h,
        relative_error: r.relative_error,
        agrees: r.agrees,
    })
}

/// Recomputes a published table; returns (all gated checks pass, mismatch descriptions).
#[pyfunction]
#[pyo3(signature = (target, tuning = None))]
fn reproduce(target: &str, tuning: Option<&str>) -> PyResult<(bool, Vec<String>)> {
    let target: Target = target.parse().py()?;
    let tuning: Option<TuningName> = tuning.map(str::parse).transpose().py()?;
    let run = core::reproduce(target, tuning).py()?;
    let mismatches = run
        .mismatches()
        .map(|c| {
            format!(
                "{}: expected {}, computed {}",
                c.description, c.expected, c.computed
            )
        })
        .collect();
    Ok((run.success(), mismatches))
}

#[pymodule]
fn harmony(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyHarmony>()?;
    m.add_class::<PyTuning>()?;
    m.add_class::<PyAnalysis>()?;
    m.add_class::<PyApproximation>()?;
    m.add_class::<PyCorrelation>()?;
    m.add_class::<PyOracleReport>()?;
    m.add_function(wrap_pyfunction!(analyze, m)?)?;
    m.add_function(wrap_pyfunction!(measure, m)?)?;
    m.add_function(wrap_pyfunction!(approximate, m)?)?;
    m.add_function(wrap_pyfunction!(mediant_sequence, m)?)?;
    m.add_function(wrap_pyfunction!(significance, m)?)?;
    m.add_function(wrap_pyfunction!(correlate, m)?)?;
    m.add_function(wrap_pyfunction!(rank, m)?)?;
    m.add_function(wrap_pyfunction!(oracle, m)?)?;
    m.add_function(wrap_pyfunction!(reproduce, m)?)?;
    m.add("__version__", env!("CARGO_PKG_VERSION"))?;
    Ok(())
}
