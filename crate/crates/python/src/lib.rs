//! Python bindings for `wpah`.

use std::str::FromStr;

use pyo3::create_exception;
use pyo3::exceptions::PyException;
use pyo3::prelude::*;

use wpah::bounds::{interpolation_bound_check, triangle_lattice_check};
use wpah::ideals::{herzog_binomials, herzog_data, point_ideal};
use wpah::induction::{
    build_certificate, check_certificate_report, Certificate as CoreCertificate, CertificateOptions,
};
use wpah::interpolation::{deficiency_table, hilbert_fat_points, FatPointConfig, RankProfile as CoreProfile};
use wpah::veronese::{secant_dimension, SecantOptions, VeroneseChart};
use wpah::{Error, FieldSpec, Rational, WeightedPoint};

create_exception!(pywpah, WpahError, PyException);
create_exception!(pywpah, VerificationError, WpahError);

fn err(e: Error) -> PyErr {
    match e {
        Error::VerificationFailed(_) | Error::CertificateFailure { .. } | Error::MalformedCertificate { .. } => {
            VerificationError::new_err(e.to_string())
        }
        _ => WpahError::new_err(e.to_string()),
    }
}

fn field(spec: &str) -> PyResult<FieldSpec> {
    FieldSpec::from_str(spec).map_err(err)
}

/// Positive integer weights, stored in ascending order.
#[pyclass(frozen, skip_from_py_object, module = "pywpah")]
#[derive(Clone)]
struct Weights(wpah::Weights);

#[pymethods]
impl Weights {
    #[new]
    fn new(weights: Vec<u32>) -> PyResult<Self> {
        wpah::Weights::new(&weights).map(Weights).map_err(err)
    }

    #[staticmethod]
    fn parse(s: &str) -> PyResult<Self> {
        wpah::Weights::from_str(s).map(Weights).map_err(err)
    }

    fn values(&self) -> Vec<u32> {
        self.0.as_slice().to_vec()
    }

    /// Position in the constructor argument of each sorted weight.
    fn permutation(&self) -> Vec<usize> {
        self.0.permutation().to_vec()
    }

    fn dim(&self) -> usize {
        self.0.dim()
    }

    fn is_well_formed(&self) -> bool {
        self.0.is_well_formed()
    }

    /// Number of monomials of degree `d`.
    fn hilbert(&self, d: i64) -> u64 {
        wpah::count_monomials(&self.0, d)
    }

    /// Closed-form value when one is known for these weights.
    fn hilbert_closed_form(&self, d: i64) -> PyResult<Option<u64>> {
        wpah::hilbert_closed_form(&self.0, d).map_err(err)
    }

    fn __len__(&self) -> usize {
        self.0.len()
    }

    fn __repr__(&self) -> String {
        format!("Weights({:?})", self.0.as_slice())
    }

    fn __str__(&self) -> String {
        self.0.to_string()
    }

    fn __eq__(&self, other: &Self) -> bool {
        self.0 == other.0
    }
}

#[pyclass(frozen, get_all, module = "pywpah")]
struct RankProfile {
    weights: Vec<u32>,
    r: usize,
    d: u64,
    s_d: u64,
    expected: u64,
    actual: u64,
    deficiency: u64,
    is_ah: bool,
    trials: usize,
}

impl From<CoreProfile> for RankProfile {
    fn from(p: CoreProfile) -> Self {
        Self {
            weights: p.weights.as_slice().to_vec(),
            r: p.r,
            d: p.d,
            s_d: p.s_d,
            expected: p.expected,
            actual: p.actual,
            deficiency: p.deficiency,
            is_ah: p.is_ah,
            trials: p.trials,
        }
    }
}

#[pymethods]
impl RankProfile {
    fn __repr__(&self) -> String {
        format!(
            "RankProfile(r={}, d={}, s_d={}, expected={}, actual={}, deficiency={})",
            self.r, self.d, self.s_d, self.expected, self.actual, self.deficiency
        )
    }
}

fn config(
    w: &Weights,
    points: usize,
    mult: u32,
    seed: u64,
    trials: usize,
    field_spec: &str,
) -> PyResult<FatPointConfig> {
    Ok(FatPointConfig::uniform(&w.0, points, mult)
        .map_err(err)?
        .with_seed(seed)
        .with_trials(trials)
        .with_field(field(field_spec)?))
}

/// Rank of `points` general fat points of multiplicity `mult` in degree `d`.
#[pyfunction]
#[pyo3(signature = (weights, points, d, mult=2, seed=wpah::interpolation::DEFAULT_SEED, trials=wpah::interpolation::DEFAULT_TRIALS, field="random"))]
fn ah_check(
    weights: &Weights,
    points: usize,
    d: u64,
    mult: u32,
    seed: u64,
    trials: usize,
    field: &str,
) -> PyResult<RankProfile> {
    let cfg = config(weights, points, mult, seed, trials, field)?;
    hilbert_fat_points(&cfg, d).map(Into::into).map_err(err)
}

/// Rank profiles for every degree in `lo..=hi`.
#[pyfunction]
#[pyo3(signature = (weights, points, lo, hi, mult=2, seed=wpah::interpolation::DEFAULT_SEED, trials=wpah::interpolation::DEFAULT_TRIALS, field="random"))]
#[allow(clippy::too_many_arguments)]
fn deficiencies(
    weights: &Weights,
    points: usize,
    lo: u64,
    hi: u64,
    mult: u32,
    seed: u64,
    trials: usize,
    field: &str,
) -> PyResult<Vec<RankProfile>> {
    let cfg = config(weights, points, mult, seed, trials, field)?;
    let rows = deficiency_table(&cfg, lo..=hi).map_err(err)?;
    Ok(rows.into_iter().map(Into::into).collect())
}

/// Terracini certificate for general double points.
#[pyclass(frozen, module = "pywpah")]
struct Certificate(CoreCertificate);

#[pymethods]
impl Certificate {
    #[staticmethod]
    fn from_json(s: &str) -> PyResult<Self> {
        CoreCertificate::from_json(s).map(Certificate).map_err(err)
    }

    fn to_json(&self) -> String {
        self.0.to_json()
    }

    /// Re-derives every node; returns the list of failures (empty when accepted).
    fn check(&self) -> PyResult<Vec<String>> {
        check_certificate_report(&self.0).map(|r| r.failures).map_err(err)
    }

    fn node_count(&self) -> usize {
        self.0.root.count()
    }

    /// `(d, r, weight, q)` for each hyperplane step of the main induction chain.
    fn trace(&self) -> Vec<(i64, u64, u32, u64)> {
        self.0
            .root
            .trace()
            .into_iter()
            .map(|(d, r, c)| (d, r, c.weight, c.q))
            .collect()
    }

    #[getter]
    fn prime(&self) -> Option<u64> {
        self.0.prime
    }
}

#[pyfunction]
#[pyo3(signature = (weights, d, r, seed=wpah::interpolation::DEFAULT_SEED, field="random"))]
fn terracini_certificate(weights: &Weights, d: i64, r: u64, seed: u64, field: &str) -> PyResult<Certificate> {
    let mut opts = CertificateOptions::for_weights(&weights.0);
    opts.seed = seed;
    opts.field = self::field(field)?;
    build_certificate(&weights.0, d, r, &opts).map(Certificate).map_err(err)
}

/// Generators of the ideal of a point, as strings; coordinates may be ints or
/// strings such as `"3/4"`, listed in constructor order.
#[pyfunction]
fn point_ideal_generators(weights: &Weights, point: Vec<Bound<'_, PyAny>>) -> PyResult<Vec<String>> {
    let raw = point
        .iter()
        .map(|c| {
            let s = c.str()?.to_string();
            Rational::from_str(&s).map_err(|_| WpahError::new_err(format!("bad coordinate `{s}`")))
        })
        .collect::<PyResult<Vec<_>>>()?;
    if raw.len() != weights.0.len() {
        return Err(WpahError::new_err(format!("expected {} coordinates", weights.0.len())));
    }
    let coords = weights.0.permutation().iter().map(|&i| raw[i].clone()).collect();
    let p = WeightedPoint::new(&weights.0, coords).map_err(err)?;
    let gens = point_ideal(&p).map_err(err)?;
    Ok(gens.iter().map(ToString::to_string).collect())
}

/// `((r0, r1, r2), hc, binomials)` for three weights.
#[pyfunction]
fn herzog(weights: &Weights) -> PyResult<((u64, u64, u64), bool, Vec<String>)> {
    let a = weights.0.as_slice();
    if a.len() != 3 {
        return Err(WpahError::new_err("herzog needs three weights"));
    }
    let h = herzog_data(a[0] as u64, a[1] as u64, a[2] as u64).map_err(err)?;
    let gens = herzog_binomials(&weights.0).map_err(err)?;
    let r = h.r();
    Ok(((r[0], r[1], r[2]), h.hc, gens.iter().map(ToString::to_string).collect()))
}

/// Dimension of the `r`-th secant variety of the degree-`d` weighted Veronese image.
#[pyfunction]
#[pyo3(signature = (weights, d, r, seed=wpah::interpolation::DEFAULT_SEED, trials=wpah::interpolation::DEFAULT_TRIALS, field="random"))]
fn secant_dim(weights: &Weights, d: u64, r: u64, seed: u64, trials: usize, field: &str) -> PyResult<u64> {
    let chart = VeroneseChart::new(&weights.0, d).map_err(err)?;
    let opts = SecantOptions {
        field: self::field(field)?,
        seed,
        trials,
    };
    secant_dimension(&chart, r, &opts)
        .map(|rep| rep.computed_dim)
        .map_err(err)
}

/// `(d, floor(s_d/3), s_(d/2), holds)` rows for `P(1,b,c)`; raises on an asserted violation.
#[pyfunction]
fn bound_check(b: u32, c: u32, lo: i64, hi: i64) -> PyResult<Vec<(i64, u64, u64, bool)>> {
    let rep = interpolation_bound_check(b, c, lo, hi).map_err(err)?;
    Ok(rep.records.iter().map(|r| (r.d, r.lhs, r.rhs, r.holds)).collect())
}

/// Whether the lattice-triangle decomposition checks pass in degree `d`.
#[pyfunction]
fn triangle_check(b: u32, c: u32, d: i64) -> PyResult<bool> {
    triangle_lattice_check(b, c, d).map(|t| t.passed()).map_err(err)
}

#[pymodule]
fn pywpah(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("__version__", wpah::VERSION)?;
    m.add("WpahError", m.py().get_type::<WpahError>())?;
    m.add("VerificationError", m.py().get_type::<VerificationError>())?;
    m.add_class::<Weights>()?;
    m.add_class::<RankProfile>()?;
    m.add_class::<Certificate>()?;
    m.add_function(wrap_pyfunction!(ah_check, m)?)?;
    m.add_function(wrap_pyfunction!(deficiencies, m)?)?;
    m.add_function(wrap_pyfunction!(terracini_certificate, m)?)?;
    m.add_function(wrap_pyfunction!(point_ideal_generators, m)?)?;
    m.add_function(wrap_pyfunction!(herzog, m)?)?;
    m.add_function(wrap_pyfunction!(secant_dim, m)?)?;
    m.add_function(wrap_pyfunction!(bound_check, m)?)?;
    m.add_function(wrap_pyfunction!(triangle_check, m)?)?;
    Ok(())
}
