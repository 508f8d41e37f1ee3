//! QL decomposition `A = QL` by Gram–Schmidt run over the columns from last
//! to first.

use super::matrix::{axpy, dot, norm_sq, Matrix};
use super::LinalgError;

/// Columns whose orthogonal remainder falls below this fraction of the
/// largest column norm get `L_jj = 0` and a completion vector in `Q`.
const DROP_TOL: f64 = 1e-13;

#[derive(Debug, Clone, PartialEq)]
pub struct QLResult {
    /// Orthogonal factor.
    pub q: Matrix<f64>,
    /// Lower-triangular factor with non-negative diagonal.
    pub l: Matrix<f64>,
}

pub fn ql_decompose(a: &Matrix<f64>) -> Result<QLResult, LinalgError> {
    let n = a.rows();
    if a.cols() != n {
        return Err(LinalgError::NotSquare {
            rows: a.rows(),
            cols: a.cols(),
        });
    }
    let columns: Vec<Vec<f64>> = (0..n).map(|j| a.column(j)).collect();
    let scale = columns
        .iter()
        .map(|c| norm_sq(c).sqrt())
        .fold(0.0, f64::max);

    // q_cols[j] is filled for j = n-1 down to 0
    let mut q_cols: Vec<Option<Vec<f64>>> = vec![None; n];
    let mut l = Matrix::<f64>::zeros(n, n);
    for j in (0..n).rev() {
        let mut r = columns[j].clone();
        // two passes of modified Gram–Schmidt against q_{j+1..n}
        for _ in 0..2 {
            for i in (j + 1)..n {
                let qi = q_cols[i].as_ref().expect("filled");
                let c = dot(qi, &r);
                axpy(&mut r, &-c, qi);
                l[(i, j)] += c;
            }
        }
        let norm = norm_sq(&r).sqrt();
        if norm > DROP_TOL * scale && norm > 0.0 {
            l[(j, j)] = norm;
            q_cols[j] = Some(r.iter().map(|x| x / norm).collect());
        } else {
            l[(j, j)] = 0.0;
            q_cols[j] = Some(completion_vector(&q_cols, n));
        }
    }

    let q_cols: Vec<Vec<f64>> = q_cols.into_iter().map(|c| c.expect("filled")).collect();
    Ok(QLResult {
        q: Matrix::from_columns(&q_cols),
        l,
    })
}

/// Unit vector orthogonal to the already computed columns, taken from the
/// standard basis vector with the largest orthogonal remainder.
fn completion_vector(q_cols: &[Option<Vec<f64>>], n: usize) -> Vec<f64> {
    let existing: Vec<&Vec<f64>> = q_cols.iter().flatten().collect();
    let mut best: Option<(f64, Vec<f64>)> = None;
    for k in 0..n {
        let mut e = vec![0.0; n];
        e[k] = 1.0;
        for _ in 0..2 {
            for q in &existing {
                let c = dot(q, &e);
                axpy(&mut e, &-c, q);
            }
        }
        let norm = norm_sq(&e).sqrt();
        if best.as_ref().map_or(true, |(b, _)| norm > *b) {
            best = Some((norm, e));
        }
    }
    let (norm, e) = best.expect("n >= 1");
    e.into_iter().map(|x| x / norm).collect()
}
