//! Isotropic splits adapted to a point set.
//!
//! Given affinely independent `H ⊂ R^d_d`, [`isotropic_pair_for`] produces a
//! Lorentz transform `F = diag(R, Qᵀ)` such that the Δ-projection along the
//! split `(F⁻¹Σ, F⁻¹Δ)` keeps `H` affinely independent:
//!
//! 1. translate `H` so it contains the origin and pad it with standard basis
//!    vectors to `d` independent directions spanning `U`;
//! 2. rotate the positive block by `R` so that `P₊(U) = span(e_1..e_k)`;
//! 3. change basis in `U` so that `S⁺ = diag(I_k, 0)`;
//! 4. QL-decompose `-S⁻ = Q L` and put `F⁻ = Qᵀ`.
//!
//! Then `S⁺ - F⁻S⁻ = diag(I_k, 0) + L` is lower-triangular with a positive
//! diagonal, which is the returned certificate.

use crate::linalg::{
    dot, norm_sq, ql_decompose, rank, IsotropicSplit, LinalgError, Matrix, MinkVector,
};

use super::EmbedError;

/// Drop threshold when extracting an orthonormal basis of `P₊(U)`.
const SPAN_TOL: f64 = 1e-9;

#[derive(Debug, Clone)]
pub struct AdaptedSplit {
    pub split: IsotropicSplit<f64>,
    /// Adapted basis of the padded direction space `U`, one column per
    /// direction (`2d × d`).
    pub directions: Matrix<f64>,
    /// `S⁺ - F⁻S⁻` for the adapted basis, i.e. the positive minus the
    /// negative block of `F · directions`.
    pub certificate: Matrix<f64>,
    /// `k = dim P₊(U)`.
    pub positive_rank: usize,
}

pub fn isotropic_pair_for(d: usize, h: &[MinkVector<f64>]) -> Result<AdaptedSplit, EmbedError> {
    if h.len() > d + 1 {
        return Err(EmbedError::TooManyNeighbors {
            neighbors: h.len(),
            d: d + 1,
        });
    }
    if let Some(bad) = h.iter().find(|p| p.d() != d) {
        return Err(LinalgError::DimensionMismatch {
            expected: 2 * d,
            found: bad.coords().len(),
        }
        .into());
    }

    let base = h.first().cloned().unwrap_or_else(|| MinkVector::zero(d));
    let mut dirs: Vec<Vec<f64>> = h[1.min(h.len())..]
        .iter()
        .map(|p| (p - &base).into_coords())
        .collect();
    if rank(dirs.clone()) != dirs.len() {
        return Err(EmbedError::NotAffinelyIndependent);
    }
    for j in 0..2 * d {
        if dirs.len() == d {
            break;
        }
        let mut candidate = dirs.clone();
        let mut e = vec![0.0; 2 * d];
        e[j] = 1.0;
        candidate.push(e);
        if rank(candidate.clone()) == candidate.len() {
            dirs = candidate;
        }
    }
    if dirs.len() != d {
        return Err(EmbedError::PaddingFailed);
    }

    // columns of S are the directions
    let s_plus = Matrix::from_columns(&dirs.iter().map(|c| c[..d].to_vec()).collect::<Vec<_>>());
    let s_minus = Matrix::from_columns(&dirs.iter().map(|c| c[d..].to_vec()).collect::<Vec<_>>());

    let (r, k) = positive_block_rotation(&s_plus);
    let rotated = r.mul(&s_plus);
    let c = adapting_basis_change(&rotated, k);
    let s_minus_adapted = s_minus.mul(&c);

    let ql = ql_decompose(&s_minus_adapted.scale(&-1.0))?;
    let f_minus = ql.q.transpose();

    let mut forward = Matrix::zeros(2 * d, 2 * d);
    forward.set_block(0, 0, &r);
    forward.set_block(d, d, &f_minus);
    let mut inverse = Matrix::zeros(2 * d, 2 * d);
    inverse.set_block(0, 0, &r.transpose());
    inverse.set_block(d, d, &ql.q);

    let certificate = rotated.mul(&c).sub(&f_minus.mul(&s_minus_adapted));
    let mut directions = Matrix::zeros(2 * d, d);
    directions.set_block(0, 0, &s_plus.mul(&c));
    directions.set_block(d, 0, &s_minus_adapted);
    Ok(AdaptedSplit {
        split: IsotropicSplit::from_transform(forward, inverse)?,
        directions,
        certificate,
        positive_rank: k,
    })
}

/// Orthogonal `R` whose first `k` rows span the column space of `s_plus`.
fn positive_block_rotation(s_plus: &Matrix<f64>) -> (Matrix<f64>, usize) {
    let d = s_plus.rows();
    let columns: Vec<Vec<f64>> = (0..s_plus.cols()).map(|j| s_plus.column(j)).collect();
    let scale = columns.iter().map(|c| norm_sq(c).sqrt()).fold(0.0, f64::max);

    let mut basis: Vec<Vec<f64>> = Vec::with_capacity(d);
    let absorb = |v: &[f64], threshold: f64, basis: &mut Vec<Vec<f64>>| {
        let mut r = v.to_vec();
        for _ in 0..2 {
            for q in basis.iter() {
                let c = dot(q, &r);
                for (ri, qi) in r.iter_mut().zip(q) {
                    *ri -= c * qi;
                }
            }
        }
        let norm = norm_sq(&r).sqrt();
        if norm > threshold && norm > 0.0 {
            basis.push(r.into_iter().map(|x| x / norm).collect());
        }
    };
    for col in &columns {
        absorb(col, SPAN_TOL * scale, &mut basis);
    }
    let k = basis.len();
    for j in 0..d {
        if basis.len() == d {
            break;
        }
        let mut e = vec![0.0; d];
        e[j] = 1.0;
        absorb(&e, 0.5, &mut basis);
    }
    debug_assert_eq!(basis.len(), d);
    (Matrix::from_rows(&basis), k)
}

/// Invertible `C` with `(rotated · C)` equal to `diag(I_k, 0)` on its first
/// `k` rows (rows past `k` of `rotated` are numerically zero).
fn adapting_basis_change(rotated: &Matrix<f64>, k: usize) -> Matrix<f64> {
    let d = rotated.cols();
    let mut top = rotated.block(0, 0, k, d);
    let mut c = Matrix::<f64>::identity(d);
    for i in 0..k {
        let pivot = (i..d)
            .max_by(|&a, &b| top[(i, a)].abs().total_cmp(&top[(i, b)].abs()))
            .expect("i < d");
        swap_columns(&mut top, i, pivot);
        swap_columns(&mut c, i, pivot);
        let inv = 1.0 / top[(i, i)];
        scale_column(&mut top, i, inv);
        scale_column(&mut c, i, inv);
        for j in 0..d {
            if j == i {
                continue;
            }
            let f = top[(i, j)];
            if f != 0.0 {
                column_axpy(&mut top, j, i, -f);
                column_axpy(&mut c, j, i, -f);
            }
        }
    }
    c
}

fn swap_columns(m: &mut Matrix<f64>, a: usize, b: usize) {
    if a == b {
        return;
    }
    for i in 0..m.rows() {
        let tmp = m[(i, a)];
        m[(i, a)] = m[(i, b)];
        m[(i, b)] = tmp;
    }
}

fn scale_column(m: &mut Matrix<f64>, j: usize, factor: f64) {
    for i in 0..m.rows() {
        m[(i, j)] *= factor;
    }
}

/// `col_dst += factor * col_src`.
fn column_axpy(m: &mut Matrix<f64>, dst: usize, src: usize, factor: f64) {
    for i in 0..m.rows() {
        let v = m[(i, src)];
        m[(i, dst)] += factor * v;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{affine_rank, lorentz_defect};

    fn mv(c: &[f64]) -> MinkVector<f64> {
        MinkVector::new(c.to_vec()).unwrap()
    }

    fn projected_rank(a: &AdaptedSplit, h: &[MinkVector<f64>]) -> usize {
        let w: Vec<Vec<f64>> = h.iter().map(|p| a.split.delta_coords(p).unwrap()).collect();
        affine_rank(&w).unwrap()
    }

    fn assert_certificate(a: &AdaptedSplit) {
        let cert = &a.certificate;
        let n = cert.rows();
        for i in 0..n {
            assert!(cert[(i, i)] > 1e-12, "diagonal entry {i} = {}", cert[(i, i)]);
            for j in i + 1..n {
                assert!(cert[(i, j)].abs() < 1e-10, "upper entry ({i},{j}) = {}", cert[(i, j)]);
            }
        }
    }

    #[test]
    fn sigma_aligned_points_become_independent() {
        // 0 and (e_i, e_i): independent in R^2_2 but with equal standard Δ-parts
        let h = vec![mv(&[0.0, 0.0, 0.0, 0.0]), mv(&[1.0, 0.0, 1.0, 0.0]), mv(&[0.0, 1.0, 0.0, 1.0])];
        let std_split = IsotropicSplit::<f64>::standard(2);
        let w: Vec<Vec<f64>> = h.iter().map(|p| std_split.delta_coords(p).unwrap()).collect();
        assert_eq!(affine_rank(&w).unwrap(), 0);

        let a = isotropic_pair_for(2, &h).unwrap();
        assert_eq!(projected_rank(&a, &h), 2);
        assert!(lorentz_defect(&a.split.transform()) < 1e-12);
        assert_certificate(&a);
    }

    #[test]
    fn generic_and_small_sets() {
        let h = vec![mv(&[0.3, -1.0, 2.0, 0.5, 0.0, 1.0])];
        let a = isotropic_pair_for(3, &h).unwrap();
        assert_eq!(projected_rank(&a, &h), 0);
        assert_certificate(&a);

        let a = isotropic_pair_for(3, &[]).unwrap();
        assert_certificate(&a);

        let h = vec![mv(&[0.0, 0.0]), mv(&[1.0, 0.0])];
        let a = isotropic_pair_for(1, &h).unwrap();
        assert_eq!(projected_rank(&a, &h), 1);
    }

    #[test]
    fn dependent_input_rejected() {
        let h = vec![mv(&[0.0, 0.0, 0.0, 0.0]), mv(&[1.0, 0.0, 1.0, 0.0]), mv(&[2.0, 0.0, 2.0, 0.0])];
        assert!(matches!(isotropic_pair_for(2, &h), Err(EmbedError::NotAffinelyIndependent)));
        let too_many = vec![mv(&[0.0, 0.0]), mv(&[1.0, 0.0]), mv(&[0.0, 1.0])];
        assert!(isotropic_pair_for(1, &too_many).is_err());
    }

    #[test]
    fn purely_negative_directions() {
        // P₊(U) = 0: k = 0
        let h = vec![mv(&[0.0, 0.0, 0.0, 0.0]), mv(&[0.0, 0.0, 1.0, 0.0]), mv(&[0.0, 0.0, 0.0, 1.0])];
        let a = isotropic_pair_for(2, &h).unwrap();
        assert_eq!(a.positive_rank, 0);
        assert_eq!(projected_rank(&a, &h), 2);
        assert_certificate(&a);
    }
}
