// Polyhedron and embedding files: build, serialize, read back, embed, and
// write the embedding with its verification report.
//
//     cargo run --example file_formats

use std::error::Error;

use minkowski_embed::embed::{embed_polyhedron, EmbedConfig};
use minkowski_embed::gen::{random_polyhedron, GenSpec};
use minkowski_embed::io::{EmbeddingFile, PolyhedronFile};
use minkowski_embed::scalar::Rational;
use minkowski_embed::verify::{verify_embedding, VerifyConfig};

fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let p = random_polyhedron::<Rational>(&GenSpec::degenerate(5, 2, 3))?;
    let text = PolyhedronFile::from_polyhedron(&p).to_json();
    println!("{text}");

    let file = PolyhedronFile::parse(&text)?;
    println!("literal backend: {}", file.literal_backend());
    let p = file.polyhedron::<Rational>()?;
    let tau = embed_polyhedron(&p, &EmbedConfig::for_backend::<Rational>())?;
    let report = verify_embedding(&p, &tau, &VerifyConfig::default())?;
    let out = EmbeddingFile::from_embedding(&tau, Some(report)).to_json();
    println!("{out}");
    assert_eq!(EmbeddingFile::parse(&out)?.to_json(), out);
    Ok(())
}
