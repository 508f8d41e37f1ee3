// Injectivity certificate for stacked tetrahedra: exhaustive general position
// at d = 7 turns the embedding check into a proof.
//
//     cargo run --example verify_report

use std::error::Error;

use minkowski_embed::embed::{embed_polyhedron, EmbedConfig};
use minkowski_embed::gen::stacked_tetrahedra;
use minkowski_embed::io::to_canonical_json;
use minkowski_embed::scalar::Rational;
use minkowski_embed::verify::{verify_embedding, GpMode, VerifyConfig};

fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let p = stacked_tetrahedra::<Rational>(8);
    let d = p.degeneracy_ordering().degeneracy.max(2 * p.dimension() + 1);
    let tau = embed_polyhedron(&p, &EmbedConfig::for_backend::<Rational>().with_d(d))?;
    let cfg = VerifyConfig {
        gp_mode: GpMode::Exhaustive,
        require_certified: true,
        injectivity_samples: 2000,
        ..VerifyConfig::default()
    };
    let mut report = verify_embedding(&p, &tau, &cfg)?;
    report.isometry.edges.clear();
    print!("{}", to_canonical_json(&report));
    assert!(report.pass);
    Ok(())
}
