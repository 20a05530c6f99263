//! Python bindings: run sessions and a few direct queries.

use std::path::PathBuf;

use annwb::cli::{parse_module, parse_ring, parse_session, parse_subset, run_text, RunOptions};
use annwb::localcoh::lc_vanishing_bound_module;
use annwb::modkernel::local_depth;
use annwb::ringkernel::{Ideal, PolyRing, PrimeIdeal};
use annwb::spfilt::{roundtrip_verify, FinPoset};
use annwb::XInt;
use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;

fn err(e: annwb::Error) -> PyErr {
    match e {
        annwb::Error::Parse { .. } | annwb::Error::Semantic { .. } | annwb::Error::Invalid(_) => {
            PyValueError::new_err(e.to_string())
        }
        other => PyRuntimeError::new_err(other.to_string()),
    }
}

#[derive(IntoPyObject)]
enum Ext {
    Int(i64),
    Float(f64),
}

impl From<XInt> for Ext {
    fn from(v: XInt) -> Self {
        match v {
            XInt::Fin(n) => Ext::Int(n),
            XInt::PosInf => Ext::Float(f64::INFINITY),
            XInt::NegInf => Ext::Float(f64::NEG_INFINITY),
        }
    }
}

fn no_names(_: &str) -> Option<Ideal> {
    None
}

fn ring(spec: &str) -> PyResult<PolyRing> {
    parse_ring(spec).map_err(err)
}

/// Runs a session text; returns `(report, exit_code)`.
#[pyfunction]
#[pyo3(signature = (text, window=None, hrange=None, tmax=None, budget=None, cache_dir=None))]
fn run(
    py: Python<'_>,
    text: &str,
    window: Option<(i64, i64)>,
    hrange: Option<(i64, i64)>,
    tmax: Option<u32>,
    budget: Option<usize>,
    cache_dir: Option<PathBuf>,
) -> (String, i32) {
    let opts = RunOptions { window, hrange, tmax, budget, steps: None, cache_dir };
    let report = py.detach(|| run_text(text, &opts));
    let code = report.exit_code();
    (report.text, code)
}

/// Canonical text of a session; raises `ValueError` on parse errors.
#[pyfunction]
fn pretty(text: &str) -> PyResult<String> {
    Ok(parse_session(text).map_err(err)?.pretty())
}

/// Reduced Gröbner basis of `ideal` (e.g. `"<x*y, y^2>"`) in the ring `spec`
/// (e.g. `"QQ[x,y] grevlex"`).
#[pyfunction]
fn groebner_basis(spec: &str, ideal: &str) -> PyResult<Vec<String>> {
    let r = ring(spec)?;
    let a = Ideal::parse(&r, ideal).map_err(err)?;
    Ok(a.groebner_basis().map_err(err)?.iter().map(|g| r.fmt_poly(g)).collect())
}

/// Depth of a module (session syntax, e.g. `"R/<x>"`) at a prime.
#[pyfunction]
fn depth(spec: &str, module: &str, prime: &str) -> PyResult<Ext> {
    let r = ring(spec)?;
    let m = parse_module(&r, module, &no_names).map_err(err)?;
    let p = PrimeIdeal::certify(Ideal::parse(&r, prime).map_err(err)?).map_err(err)?;
    Ok(local_depth(&m, &p).map_err(err)?.into())
}

/// Least `i` with `H^i_Z(M) != 0`, for `Z` written as `"V<...>"`.
#[pyfunction]
fn lc_bound(spec: &str, subset: &str, module: &str) -> PyResult<Ext> {
    let r = ring(spec)?;
    let z = parse_subset(&r, subset, &no_names).map_err(err)?;
    let m = parse_module(&r, module, &no_names).map_err(err)?;
    Ok(lc_vanishing_bound_module(&z, &m).map_err(err)?.into())
}

/// Exhaustive sp-filtration/t-function check on a poset body such as
/// `"{ a < b; }"`; returns `(discrepancies, filtrations)`.
#[pyfunction]
fn spfilt_roundtrip(poset: &str, lo: i64, hi: i64) -> PyResult<(usize, usize)> {
    let p = FinPoset::parse(poset).map_err(err)?;
    let r = roundtrip_verify(&p, lo, hi).map_err(err)?;
    Ok((r.discrepancies(), r.filtrations))
}

#[pymodule]
fn annwb_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_function(wrap_pyfunction!(run, m)?)?;
    m.add_function(wrap_pyfunction!(pretty, m)?)?;
    m.add_function(wrap_pyfunction!(groebner_basis, m)?)?;
    m.add_function(wrap_pyfunction!(depth, m)?)?;
    m.add_function(wrap_pyfunction!(lc_bound, m)?)?;
    m.add_function(wrap_pyfunction!(spfilt_roundtrip, m)?)?;
    m.add("HEADER", annwb::cli::HEADER)?;
    Ok(())
}
