// Negative and zero squared lengths: a triangle with one timelike side, one
// lightlike side and one spacelike side, glued to a negative-length edge.
//
//     cargo run --example signed_lengths

use std::error::Error;

use minkowski_embed::complex::RawPolyhedron;
use minkowski_embed::embed::{embed_polyhedron, EmbedConfig};
use minkowski_embed::scalar::Rational;
use minkowski_embed::verify::{verify_embedding, VerifyConfig};

fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let len = |a: &str, b: &str, p: i64, q: i64| (a.to_string(), b.to_string(), Rational::new(p.into(), q.into()));
    let raw = RawPolyhedron {
        vertices: ["a", "b", "c", "d"].map(String::from).to_vec(),
        maximal_simplices: vec![vec!["a".into(), "b".into(), "c".into()], vec!["c".into(), "d".into()]],
        squared_lengths: vec![len("a", "b", -3, 1), len("b", "c", 0, 1), len("a", "c", 5, 2), len("c", "d", -7, 4)],
    };
    let p = raw.build()?;
    let tau = embed_polyhedron(&p, &EmbedConfig::for_backend::<Rational>())?;
    let report = verify_embedding(&p, &tau, &VerifyConfig::default())?;

    println!("embedded into R^{0}_{0}", tau.d());
    for e in &report.isometry.edges {
        let g = p.squared_length(p.index_of(&e.edge[0]).unwrap(), p.index_of(&e.edge[1]).unwrap()).unwrap();
        println!("  {}-{}: g = {g:>5}, residual {}", e.edge[0], e.edge[1], e.residual);
    }
    assert!(report.isometry.pass);
    Ok(())
}
