//! Grid sampling drivers. Nodes are evaluated in parallel; results are
//! gathered in storage order so output never depends on scheduling.

use birkhoff_core::baker::{solve_baker, BakerError};
use birkhoff_core::gauge::{GaugeError, HmEvaluator, SpinVector};
use birkhoff_core::lax::{nls_lax_pair, LaxPair};
use birkhoff_core::spectral::SpectralData;
use birkhoff_core::verify::{Field, GridSpec, TimeConvention};
use birkhoff_core::Complex;
use rayon::prelude::*;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum SampleError {
    #[error("at (x, t) = ({x}, {t}): {source}")]
    Baker { x: f64, t: f64, source: BakerError },
    #[error("at (x, t) = ({x}, {t}): {source}")]
    Gauge { x: f64, t: f64, source: GaugeError },
}

/// Evaluates `f` at every node, in parallel. The first failing node in
/// storage order is reported.
pub fn par_sample<T, E, F>(grid: &GridSpec, f: F) -> Result<Field<T>, E>
where
    T: Send,
    E: Send,
    F: Fn(f64, f64) -> Result<T, E> + Sync,
{
    let nx = grid.nx;
    let results: Vec<Result<T, E>> = (0..grid.len())
        .into_par_iter()
        .map(|k| f(grid.x(k % nx), grid.t(k / nx)))
        .collect();
    let values = results.into_iter().collect::<Result<Vec<T>, E>>()?;
    Ok(Field::new(*grid, values).expect("one sample per node"))
}

/// `u = b₁` on the grid.
pub fn sample_nls(data: &SpectralData, grid: &GridSpec) -> Result<Field<Complex>, SampleError> {
    par_sample(grid, |x, t| {
        solve_baker(data, x, t)
            .map(|c| c.b[0])
            .map_err(|source| SampleError::Baker { x, t, source })
    })
}

/// Spin field on the grid; with the unit convention node `(x, t)` holds
/// the native field at `(x, 2t)`.
pub fn sample_hm(
    data: &SpectralData,
    grid: &GridSpec,
    convention: TimeConvention,
) -> Result<Field<SpinVector>, SampleError> {
    let ev = HmEvaluator::new(data.clone()).map_err(|source| SampleError::Gauge {
        x: 0.0,
        t: 0.0,
        source,
    })?;
    par_sample(grid, |x, t| {
        ev.eval(x, convention.sample_time(t))
            .map_err(|source| SampleError::Gauge { x, t, source })
    })
}

/// NLS Lax pair at every node.
pub fn sample_nls_lax(data: &SpectralData, grid: &GridSpec) -> Result<Field<LaxPair>, SampleError> {
    par_sample(grid, |x, t| {
        solve_baker(data, x, t)
            .map(|c| nls_lax_pair(&c))
            .map_err(|source| SampleError::Baker { x, t, source })
    })
}
