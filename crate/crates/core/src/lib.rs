//! Isometric simplicial embeddings of indefinite metric polyhedra into
//! Minkowski space `R^d_d`.

pub mod bench;
pub mod cli;
pub mod complex;
pub mod embed;
pub mod gen;
pub mod io;
pub mod linalg;
pub mod scalar;
pub mod verify;
