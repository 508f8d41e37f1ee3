// A triangulated Euclidean grid embeds without subdivision at d equal to
// its degeneracy.
//
//     cargo run --example mesh_fixture -- 6 8

use std::error::Error;

use minkowski_embed::embed::{embed_polyhedron, EmbedConfig};
use minkowski_embed::gen::euclidean_mesh;
use minkowski_embed::scalar::Rational;
use minkowski_embed::verify::{verify_isometry, Coverage};

fn main() -> Result<(), Box<dyn Error>> {
    let mut args = std::env::args().skip(1).map(|s| s.parse::<usize>());
    let rows = args.next().transpose()?.unwrap_or(5);
    let cols = args.next().transpose()?.unwrap_or(rows);
    run_example(rows, cols)
}

pub fn run_example(rows: usize, cols: usize) -> Result<(), Box<dyn Error>> {
    let p = euclidean_mesh::<Rational>(rows, cols)?;
    let ordering = p.degeneracy_ordering();
    let tau = embed_polyhedron(&p, &EmbedConfig::for_backend::<Rational>())?;
    let report = verify_isometry(&p, &tau, 0.0, Coverage::Total)?;
    println!(
        "{rows}x{cols} grid: {} vertices, {} triangles, {} edges, degeneracy {}, max degree {}",
        p.vertex_count(),
        p.maximal_simplices().len(),
        p.edge_count(),
        ordering.degeneracy,
        p.max_degree()
    );
    println!("embedded in R^{0}_{0}, max residual {1}", tau.d(), report.max_residual);
    assert!(report.pass);
    Ok(())
}
