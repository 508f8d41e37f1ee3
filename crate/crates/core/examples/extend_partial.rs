// Extending a partial isometric map: fix half of the vertices of an
// embedding and rebuild the rest with per-vertex adapted splits.
//
//     cargo run --example extend_partial

use std::error::Error;

use minkowski_embed::embed::{embed_polyhedron, extend_embedding, EmbedConfig, ExtendConfig};
use minkowski_embed::gen::{random_polyhedron, GenSpec};
use minkowski_embed::verify::{verify_isometry, Coverage};

fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let d = 4;
    let p = random_polyhedron::<f64>(&GenSpec::bounded_degree(20, d, 7).with_dim(2))?;
    let full = embed_polyhedron(&p, &EmbedConfig::for_backend::<f64>().with_d(d))?;

    let fixed: Vec<&str> = p.vertex_ids().iter().step_by(2).map(String::as_str).collect();
    let partial = full.restricted_to(fixed.iter().copied());
    let tau = extend_embedding(&p, &partial, &ExtendConfig::default())?;

    let unchanged = partial.points().all(|(id, v)| tau.get(id) == Some(v));
    let report = verify_isometry(&p, &tau, 1e-9, Coverage::Total)?;
    println!(
        "{} vertices (max degree {}), {} fixed, {} placed",
        p.vertex_count(),
        p.max_degree(),
        partial.len(),
        tau.len() - partial.len()
    );
    println!("fixed images unchanged: {unchanged}");
    println!("max relative residual: {}", report.max_relative_residual);
    assert!(unchanged && report.pass);
    Ok(())
}
