// A set H whose standard Δ-projections all coincide, and the Lorentz
// transformation that separates them again.
//
//     cargo run --example adapted_split

use std::error::Error;

use minkowski_embed::embed::isotropic_pair_for;
use minkowski_embed::linalg::{affine_rank, lorentz_defect, standard_split, MinkVector};

fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let d = 3;
    // points differing only along Σ = {(s, s)}
    let h: Vec<MinkVector<f64>> = [[0.0, 0.0, 0.0], [1.0, 0.0, 0.0], [0.0, 2.0, 0.0], [0.0, 0.0, -1.0]]
        .iter()
        .map(|s| MinkVector::from_blocks(s, s))
        .collect::<Result<_, _>>()?;

    let standard = standard_split::<f64>(d);
    let before: Vec<Vec<f64>> = h.iter().map(|v| standard.delta_coords(v)).collect::<Result<_, _>>()?;
    println!("standard split: affine rank of P_Δ(H) = {}", affine_rank(&before)?);

    let adapted = isotropic_pair_for(d, &h)?;
    let after: Vec<Vec<f64>> = h.iter().map(|v| adapted.split.delta_coords(v)).collect::<Result<_, _>>()?;
    println!("adapted split:  affine rank of P_Δ(H) = {}", affine_rank(&after)?);
    println!("Lorentz defect |FᵀηF - η| = {:.1e}", lorentz_defect(&adapted.split.transform()));
    println!("certificate diagonal:");
    for i in 0..d {
        println!("  {:.6}", adapted.certificate.row(i)[i]);
    }
    assert_eq!(affine_rank(&after)?, h.len() - 1);
    Ok(())
}
