// QL decomposition of a matrix whose leading columns are dependent.
//
//     cargo run --example ql_decomposition

use std::error::Error;

use minkowski_embed::linalg::{ql_decompose, Matrix};

fn show(name: &str, m: &Matrix<f64>) {
    println!("{name} =");
    for i in 0..m.rows() {
        let row: Vec<String> = m.row(i).iter().map(|x| format!("{x:>8.4}")).collect();
        println!("  [{}]", row.join(" "));
    }
}

fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}

pub fn run_example() -> Result<(), Box<dyn Error>> {
    // column 0 = column 1 + column 2
    let a = Matrix::from_rows(&[
        vec![3.0, 1.0, 2.0, 0.0],
        vec![1.0, -1.0, 2.0, 1.0],
        vec![0.0, 4.0, -4.0, 2.0],
        vec![5.0, 2.0, 3.0, -1.0],
    ]);
    let ql = ql_decompose(&a)?;
    show("A", &a);
    show("Q", &ql.q);
    show("L", &ql.l);
    let err = ql.q.mul(&ql.l).sub(&a).max_abs();
    let orth = ql.q.transpose().mul(&ql.q).sub(&Matrix::identity(4)).max_abs();
    println!("|A - QL| = {err:.1e}, |QᵀQ - I| = {orth:.1e}");
    assert!(err <= 1e-12 && orth <= 1e-12);
    Ok(())
}
