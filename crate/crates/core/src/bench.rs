//! Timing harness: random `d`-degenerate complexes, one CSV row per cell.

use std::time::Instant;

use crate::embed::{embed_with_ordering, EmbedConfig, EmbedError};
use crate::gen::{random_polyhedron, GenError, GenSpec};
use crate::scalar::{Backend, Rational, Scalar};
use crate::verify::{verify_embedding, VerifyConfig, VerifyError};

pub const CSV_HEADER: &str = "n,d,backend,phase_order_ms,phase_place_ms,phase_verify_ms,max_residual";

#[derive(Debug, thiserror::Error)]
pub enum BenchError {
    #[error(transparent)]
    Gen(#[from] GenError),
    #[error(transparent)]
    Embed(#[from] EmbedError),
    #[error(transparent)]
    Verify(#[from] VerifyError),
}

#[derive(Debug, Clone, PartialEq)]
pub struct BenchRow {
    pub n: usize,
    pub d: usize,
    pub backend: Backend,
    pub order_ms: f64,
    pub place_ms: f64,
    pub verify_ms: f64,
    /// Largest `|r_e| / max(1, |g_e|)` over all edges.
    pub max_residual: f64,
    pub pass: bool,
}

impl BenchRow {
    pub fn to_csv(&self) -> String {
        format!(
            "{},{},{},{:.3},{:.3},{:.3},{:e}",
            self.n, self.d, self.backend, self.order_ms, self.place_ms, self.verify_ms, self.max_residual
        )
    }
}

/// One cell: generate with `seed`, order, place at dimension `d`, verify.
pub fn run_cell(n: usize, d: usize, backend: Backend, seed: u64) -> Result<BenchRow, BenchError> {
    match backend {
        Backend::Float => run_typed::<f64>(n, d, seed),
        Backend::Rational => run_typed::<Rational>(n, d, seed),
    }
}

fn run_typed<S: Scalar>(n: usize, d: usize, seed: u64) -> Result<BenchRow, BenchError> {
    let p = random_polyhedron::<S>(&GenSpec::degenerate(n, d, seed))?;
    let ms = |t: Instant| t.elapsed().as_secs_f64() * 1e3;

    let t = Instant::now();
    let ordering = p.degeneracy_ordering();
    let order_ms = ms(t);

    let t = Instant::now();
    let cfg = EmbedConfig::for_backend::<S>().with_d(d).with_seed(seed);
    let tau = embed_with_ordering(&p, &ordering, &cfg)?;
    let place_ms = ms(t);

    let t = Instant::now();
    let report = verify_embedding(&p, &tau, &VerifyConfig { seed, ..VerifyConfig::default() })?;
    let verify_ms = ms(t);

    Ok(BenchRow {
        n,
        d,
        backend: S::BACKEND,
        order_ms,
        place_ms,
        verify_ms,
        max_residual: f64::parse_str(&report.isometry.max_relative_residual).unwrap_or(f64::NAN),
        pass: report.pass,
    })
}
