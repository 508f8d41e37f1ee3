// Exact embedding of the unit-length skeleton of a d-simplex.
//
//     cargo run --example embed_skeleton -- 4

use std::error::Error;

use minkowski_embed::embed::{embed_polyhedron, EmbedConfig};
use minkowski_embed::gen::simplex_skeleton;
use minkowski_embed::linalg::squared_length;
use minkowski_embed::scalar::{Rational, Scalar};

fn main() -> Result<(), Box<dyn Error>> {
    let d = std::env::args().nth(1).map(|s| s.parse()).transpose()?.unwrap_or(3);
    run_example(d)
}

pub fn run_example(d: usize) -> Result<(), Box<dyn Error>> {
    let p = simplex_skeleton::<Rational>(d);
    let tau = embed_polyhedron(&p, &EmbedConfig::for_backend::<Rational>())?;

    println!("K_{} in R^{d}_{d}: {} vertices, {} edges", d + 1, p.vertex_count(), p.edge_count());
    for (id, v) in tau.points() {
        let coords: Vec<String> = v.coords().iter().map(Scalar::to_canonical).collect();
        println!("  {id} = ({})", coords.join(", "));
    }
    for (a, b, g) in p.edges() {
        let (ua, ub) = (tau.get(p.vertex_id(a)).unwrap(), tau.get(p.vertex_id(b)).unwrap());
        let got = squared_length(ua, ub)?;
        assert_eq!(&got, g);
        println!("  <{0}-{1}, {0}-{1}> = {got}", p.vertex_id(a), p.vertex_id(b));
    }
    Ok(())
}
