//! Complementary isotropic subspaces of `R^d_d`.
//!
//! The standard pair is `Σ = {(a, a)}` and `Δ = {(w, -w)}`. Every other pair
//! is represented by a Lorentz transform `F` carrying it onto the standard
//! one, so `Σ_H = F⁻¹Σ` and `Δ_H = F⁻¹Δ`, and the projections are conjugated
//! through `F`.
//!
//! Points are coordinatized by their Σ- and Δ-parts: under the standard split
//! `v = (s + w, s - w)` with `s = ½(v⁺ + v⁻)` and `w = ½(v⁺ - v⁻)`, so that
//! `<v, v> = 4 s·w`.

use super::matrix::Matrix;
use super::mink::MinkVector;
use super::LinalgError;
use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq)]
struct Transform<S> {
    forward: Matrix<S>,
    inverse: Matrix<S>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct IsotropicSplit<S> {
    d: usize,
    transform: Option<Transform<S>>,
}

impl<S: Scalar> IsotropicSplit<S> {
    pub fn standard(d: usize) -> Self {
        assert!(d >= 1, "signature half-dimension must be positive");
        IsotropicSplit { d, transform: None }
    }

    /// Split given by a Lorentz transform `forward` (mapping it to the
    /// standard split) and its inverse. Both must be `2d x 2d`.
    pub fn from_transform(forward: Matrix<S>, inverse: Matrix<S>) -> Result<Self, LinalgError> {
        let n = forward.rows();
        if n == 0 || n % 2 != 0 || forward.cols() != n {
            return Err(LinalgError::OddLength(n));
        }
        if inverse.rows() != n || inverse.cols() != n {
            return Err(LinalgError::DimensionMismatch {
                expected: n,
                found: inverse.rows(),
            });
        }
        Ok(IsotropicSplit {
            d: n / 2,
            transform: Some(Transform { forward, inverse }),
        })
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn is_standard(&self) -> bool {
        self.transform.is_none()
    }

    /// The matrix `F` (identity for the standard split).
    pub fn transform(&self) -> Matrix<S> {
        match &self.transform {
            Some(t) => t.forward.clone(),
            None => Matrix::identity(2 * self.d),
        }
    }

    pub fn inverse_transform(&self) -> Matrix<S> {
        match &self.transform {
            Some(t) => t.inverse.clone(),
            None => Matrix::identity(2 * self.d),
        }
    }

    fn check(&self, v: &MinkVector<S>) -> Result<(), LinalgError> {
        if v.d() != self.d {
            return Err(LinalgError::DimensionMismatch {
                expected: 2 * self.d,
                found: v.coords().len(),
            });
        }
        Ok(())
    }

    fn forward_coords(&self, v: &MinkVector<S>) -> Vec<S> {
        match &self.transform {
            Some(t) => t.forward.mul_vec(v.coords()),
            None => v.coords().to_vec(),
        }
    }

    fn backward(&self, coords: Vec<S>) -> MinkVector<S> {
        let coords = match &self.transform {
            Some(t) => t.inverse.mul_vec(&coords),
            None => coords,
        };
        MinkVector::new(coords).expect("even length by construction")
    }

    /// `(s, w)`: Σ- and Δ-coordinates of `v` in this split.
    pub fn coordinates(&self, v: &MinkVector<S>) -> Result<(Vec<S>, Vec<S>), LinalgError> {
        self.check(v)?;
        let x = self.forward_coords(v);
        let half = S::half();
        let (plus, minus) = x.split_at(self.d);
        let s = plus
            .iter()
            .zip(minus)
            .map(|(p, m)| (p.clone() + m) * &half)
            .collect();
        let w = plus
            .iter()
            .zip(minus)
            .map(|(p, m)| (p.clone() - m) * &half)
            .collect();
        Ok((s, w))
    }

    pub fn delta_coords(&self, v: &MinkVector<S>) -> Result<Vec<S>, LinalgError> {
        Ok(self.coordinates(v)?.1)
    }

    pub fn sigma_coords(&self, v: &MinkVector<S>) -> Result<Vec<S>, LinalgError> {
        Ok(self.coordinates(v)?.0)
    }

    /// The point with Σ-coordinates `s` and Δ-coordinates `w`.
    pub fn compose(&self, s: &[S], w: &[S]) -> Result<MinkVector<S>, LinalgError> {
        for len in [s.len(), w.len()] {
            if len != self.d {
                return Err(LinalgError::DimensionMismatch {
                    expected: self.d,
                    found: len,
                });
            }
        }
        let mut coords: Vec<S> = s.iter().zip(w).map(|(a, b)| a.clone() + b).collect();
        coords.extend(s.iter().zip(w).map(|(a, b)| a.clone() - b));
        Ok(self.backward(coords))
    }

    /// The Δ-point with coordinates `w`.
    pub fn delta_point(&self, w: &[S]) -> Result<MinkVector<S>, LinalgError> {
        self.compose(&vec![S::zero(); self.d], w)
    }

    /// The Σ-point with coordinates `s`.
    pub fn sigma_point(&self, s: &[S]) -> Result<MinkVector<S>, LinalgError> {
        self.compose(s, &vec![S::zero(); self.d])
    }

    pub fn project_delta(&self, v: &MinkVector<S>) -> Result<MinkVector<S>, LinalgError> {
        let w = self.delta_coords(v)?;
        self.delta_point(&w)
    }

    pub fn project_sigma(&self, v: &MinkVector<S>) -> Result<MinkVector<S>, LinalgError> {
        let s = self.sigma_coords(v)?;
        self.sigma_point(&s)
    }

    /// Basis `F⁻¹(e_i, e_i)` of Σ.
    pub fn sigma_basis(&self) -> Vec<MinkVector<S>> {
        (0..self.d)
            .map(|i| {
                let mut s = vec![S::zero(); self.d];
                s[i] = S::one();
                self.sigma_point(&s).expect("dimension checked")
            })
            .collect()
    }

    /// Basis `F⁻¹(e_i, -e_i)` of Δ.
    pub fn delta_basis(&self) -> Vec<MinkVector<S>> {
        (0..self.d)
            .map(|i| {
                let mut w = vec![S::zero(); self.d];
                w[i] = S::one();
                self.delta_point(&w).expect("dimension checked")
            })
            .collect()
    }
}

/// Largest deviation `|<Fe_i, Fe_j> - <e_i, e_j>|` over basis pairs.
pub fn lorentz_defect(f: &Matrix<f64>) -> f64 {
    let n = f.rows();
    let d = n / 2;
    let sign = |k: usize| if k < d { 1.0 } else { -1.0 };
    let mut worst: f64 = 0.0;
    for i in 0..n {
        for j in i..n {
            let mut acc = 0.0;
            for k in 0..n {
                acc += sign(k) * f[(k, i)] * f[(k, j)];
            }
            let expected = if i == j { sign(i) } else { 0.0 };
            worst = worst.max((acc - expected).abs());
        }
    }
    worst
}
