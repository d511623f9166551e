//! Python module `friedlab`: thin wrappers over the core library and the
//! report-producing commands. Rationals cross the boundary as `"p/q"`
//! strings, reports as JSON text.

use friedlab_cli::commands::{self, ModeChoice, PathChoice};
use friedlab_cli::{CliError, Settings};
use friedlab_core::clifford_dirac::{dirac_operator, p_clifford, uperp_clifford, verify_parthasarathy};
use friedlab_core::eta_pipeline::{compute_eta_family, EtaMode};
use friedlab_core::group_model::{preset_data, validate_model, Corruption, PRESETS};
use friedlab_core::lattice_data::{synthesize_classes, ClassFile, SynthSpec};
use friedlab_core::representations::{casimir_scalar, full_h_character};
use friedlab_core::zeta_engine::ruelle_log_series;
use pyo3::exceptions::{PyIOError, PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use std::path::Path;

fn cli_err(e: CliError) -> PyErr {
    match e {
        CliError::Usage(m) => PyValueError::new_err(m),
        CliError::Io(m) => PyIOError::new_err(m),
    }
}

fn runtime<E: std::fmt::Display>(e: E) -> PyErr {
    PyRuntimeError::new_err(e.to_string())
}

fn settings(tol: f64, seed: u64) -> Settings {
    Settings { tol, seed, timing: false, ..Settings::default() }
}

fn rep_or_default(preset: &str, rep: Option<&str>) -> String {
    rep.map(str::to_string).unwrap_or_else(|| commands::default_rep(preset).to_string())
}

fn mode(s: &str) -> PyResult<ModeChoice> {
    match s {
        "auto" => Ok(ModeChoice::Auto),
        "dirac" => Ok(ModeChoice::Dirac),
        "direct" => Ok(ModeChoice::Direct),
        _ => Err(PyValueError::new_err(format!("mode must be auto, dirac or direct, got '{s}'"))),
    }
}

#[pyfunction]
fn presets() -> Vec<&'static str> {
    PRESETS.to_vec()
}

/// (check name, passed, detail) for every model invariant.
#[pyfunction]
#[pyo3(signature = (preset, corrupt=None))]
fn validate(preset: &str, corrupt: Option<&str>) -> PyResult<Vec<(String, bool, String)>> {
    let mut data = preset_data(preset).map_err(|e| PyValueError::new_err(e.to_string()))?;
    if let Some(c) = corrupt {
        let c = Corruption::from_name(c).ok_or_else(|| PyValueError::new_err(format!("unknown corruption '{c}'")))?;
        data = friedlab_core::group_model::corrupt(&data, c);
    }
    Ok(validate_model(&data).checks.into_iter().map(|c| (c.name, c.passed, c.detail)).collect())
}

#[pyfunction]
fn casimir(preset: &str, rep: &str) -> PyResult<String> {
    let m = commands::load_model(preset).map_err(cli_err)?;
    let r = commands::load_rep(&m, rep).map_err(cli_err)?;
    casimir_scalar(&r).map(|q| q.to_string()).map_err(runtime)
}

/// Weights of the representation as (weight, multiplicity) pairs.
#[pyfunction]
fn character(preset: &str, rep: &str) -> PyResult<Vec<(String, i64)>> {
    let m = commands::load_model(preset).map_err(cli_err)?;
    let r = commands::load_rep(&m, rep).map_err(cli_err)?;
    let chi = full_h_character(&r).map_err(runtime)?;
    Ok(chi.terms().map(|(w, k)| (w.to_string(), *k)).collect())
}

/// Residual of the quadratic Dirac identity; 0.0 means it holds exactly.
#[pyfunction]
#[pyo3(signature = (preset, rep, path="uperp"))]
fn dirac_residual(preset: &str, rep: &str, path: &str) -> PyResult<f64> {
    let m = commands::load_model(preset).map_err(cli_err)?;
    let r = commands::load_rep(&m, rep).map_err(cli_err)?.with_metric().map_err(runtime)?;
    let cm = match path {
        "p" => p_clifford(&m),
        "uperp" => uperp_clifford(&m),
        _ => return Err(PyValueError::new_err("path must be 'p' or 'uperp'")),
    }
    .map_err(runtime)?;
    let dd = dirac_operator(&r, &cm).map_err(runtime)?;
    verify_parthasarathy(&dd).map_err(runtime)
}

/// (beta, dim eta+, dim eta-, sigma) per beta.
#[pyfunction]
#[pyo3(signature = (preset, rep, mode="dirac"))]
fn eta_family(preset: &str, rep: &str, mode: &str) -> PyResult<Vec<(String, usize, usize, String)>> {
    let m = commands::load_model(preset).map_err(cli_err)?;
    let r = commands::load_rep(&m, rep).map_err(cli_err)?.with_metric().map_err(runtime)?;
    let mode = match mode {
        "dirac" => EtaMode::Dirac,
        "direct" => EtaMode::Direct,
        _ => return Err(PyValueError::new_err("mode must be 'dirac' or 'direct'")),
    };
    let fam = compute_eta_family(&r, mode).map_err(runtime)?;
    Ok(fam
        .entries
        .iter()
        .map(|(b, e)| (b.to_string(), e.plus.dim(), e.minus.dim(), fam.sigma.get(b).map(|s| s.to_string()).unwrap_or_default()))
        .collect())
}

/// Synthetic class file for `sl2c` as canonical JSON text.
#[pyfunction]
#[pyo3(signature = (seed, count=50))]
fn synthesize(seed: u64, count: usize) -> String {
    synthesize_classes(&SynthSpec::sl2c(seed, count)).to_canonical_string()
}

/// (length, re, im) coefficients of log R for a class file given as JSON text.
#[pyfunction]
fn ruelle_series(classes_json: &str, preset: &str, rep: &str) -> PyResult<Vec<(f64, f64, f64)>> {
    let cf = ClassFile::from_str_strict(classes_json).map_err(|e| PyValueError::new_err(e.to_string()))?;
    let m = commands::load_model(preset).map_err(cli_err)?;
    let r = commands::load_rep(&m, rep).map_err(cli_err)?;
    let chi = full_h_character(&r).map_err(runtime)?;
    let s = ruelle_log_series(&cf.records, &chi).map_err(runtime)?;
    Ok(s.terms.iter().map(|(l, c)| (*l, c.re, c.im)).collect())
}

/// Full verification report as JSON text.
#[pyfunction]
#[pyo3(signature = (preset="sl2c", rep=None, tol=1e-9, seed=0))]
fn verify_all(preset: &str, rep: Option<&str>, tol: f64, seed: u64) -> PyResult<String> {
    let rep = rep_or_default(preset, rep);
    let argv = vec!["verify-all".to_string(), preset.to_string(), rep.clone()];
    commands::cmd_verify_all(argv, &settings(tol, seed), preset, &rep, None).map(|r| r.to_json()).map_err(cli_err)
}

#[pyfunction]
#[pyo3(signature = (preset="sl2c", rep=None, path="both", tol=1e-9))]
fn dirac_report(preset: &str, rep: Option<&str>, path: &str, tol: f64) -> PyResult<String> {
    let rep = rep_or_default(preset, rep);
    let which = match path {
        "p" => PathChoice::P,
        "uperp" => PathChoice::UPerp,
        "both" => PathChoice::Both,
        _ => return Err(PyValueError::new_err("path must be p, uperp or both")),
    };
    let argv = vec!["dirac".to_string(), preset.to_string(), rep.clone()];
    commands::cmd_dirac(argv, &settings(tol, 0), preset, &rep, which).map(|r| r.to_json()).map_err(cli_err)
}

/// Zeta pipeline report for a class file on disk, as JSON text.
#[pyfunction]
#[pyo3(signature = (classes_path, preset="sl2c", rep=None, mode="auto", tol=1e-9))]
fn zeta_report(classes_path: &str, preset: &str, rep: Option<&str>, mode: &str, tol: f64) -> PyResult<String> {
    let rep = rep_or_default(preset, rep);
    let argv = vec!["zeta".to_string(), classes_path.to_string()];
    commands::cmd_zeta(argv, &settings(tol, 0), preset, &rep, Path::new(classes_path), self::mode(mode)?)
        .map(|r| r.to_json())
        .map_err(cli_err)
}

#[pymodule]
pub fn friedlab(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("__version__", env!("CARGO_PKG_VERSION"))?;
    m.add_function(wrap_pyfunction!(presets, m)?)?;
    m.add_function(wrap_pyfunction!(validate, m)?)?;
    m.add_function(wrap_pyfunction!(casimir, m)?)?;
    m.add_function(wrap_pyfunction!(character, m)?)?;
    m.add_function(wrap_pyfunction!(dirac_residual, m)?)?;
    m.add_function(wrap_pyfunction!(eta_family, m)?)?;
    m.add_function(wrap_pyfunction!(synthesize, m)?)?;
    m.add_function(wrap_pyfunction!(ruelle_series, m)?)?;
    m.add_function(wrap_pyfunction!(verify_all, m)?)?;
    m.add_function(wrap_pyfunction!(dirac_report, m)?)?;
    m.add_function(wrap_pyfunction!(zeta_report, m)?)?;
    Ok(())
}
