use std::ops::{Add, Sub};

use serde::{Deserialize, Serialize};

use super::matrix::{dot, sub_vec};
use super::LinalgError;
use crate::scalar::Scalar;

/// A point of `R^d_d`: `2d` coordinates, the positive block first.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct MinkVector<S> {
    coords: Vec<S>,
}

impl<S: Scalar> MinkVector<S> {
    pub fn new(coords: Vec<S>) -> Result<Self, LinalgError> {
        if coords.is_empty() || coords.len() % 2 != 0 {
            return Err(LinalgError::OddLength(coords.len()));
        }
        Ok(MinkVector { coords })
    }

    pub fn zero(d: usize) -> Self {
        MinkVector {
            coords: vec![S::zero(); 2 * d],
        }
    }

    pub fn from_blocks(plus: &[S], minus: &[S]) -> Result<Self, LinalgError> {
        if plus.len() != minus.len() {
            return Err(LinalgError::DimensionMismatch {
                expected: plus.len(),
                found: minus.len(),
            });
        }
        let mut coords = plus.to_vec();
        coords.extend_from_slice(minus);
        Self::new(coords)
    }

    /// Basis vector `e_i` of `R^{2d}`.
    pub fn basis(d: usize, i: usize) -> Self {
        let mut v = Self::zero(d);
        v.coords[i] = S::one();
        v
    }

    /// Signature half-dimension.
    pub fn d(&self) -> usize {
        self.coords.len() / 2
    }

    pub fn coords(&self) -> &[S] {
        &self.coords
    }

    pub fn into_coords(self) -> Vec<S> {
        self.coords
    }

    pub fn plus(&self) -> &[S] {
        &self.coords[..self.d()]
    }

    pub fn minus(&self) -> &[S] {
        &self.coords[self.d()..]
    }

    pub fn scaled(&self, factor: &S) -> Self {
        MinkVector {
            coords: self.coords.iter().map(|c| c.clone() * factor).collect(),
        }
    }

    pub fn to_f64(&self) -> MinkVector<f64> {
        MinkVector {
            coords: self.coords.iter().map(Scalar::to_f64).collect(),
        }
    }

    pub(crate) fn check_same_d(&self, other: &Self) -> Result<(), LinalgError> {
        if self.coords.len() != other.coords.len() {
            return Err(LinalgError::DimensionMismatch {
                expected: self.coords.len(),
                found: other.coords.len(),
            });
        }
        Ok(())
    }
}

impl<S> AsRef<[S]> for MinkVector<S> {
    fn as_ref(&self) -> &[S] {
        &self.coords
    }
}

impl<S: Scalar> Add for &MinkVector<S> {
    type Output = MinkVector<S>;

    fn add(self, rhs: Self) -> MinkVector<S> {
        assert_eq!(self.coords.len(), rhs.coords.len(), "dimension mismatch");
        MinkVector {
            coords: self
                .coords
                .iter()
                .zip(&rhs.coords)
                .map(|(a, b)| a.clone() + b)
                .collect(),
        }
    }
}

impl<S: Scalar> Sub for &MinkVector<S> {
    type Output = MinkVector<S>;

    fn sub(self, rhs: Self) -> MinkVector<S> {
        assert_eq!(self.coords.len(), rhs.coords.len(), "dimension mismatch");
        MinkVector {
            coords: sub_vec(&self.coords, &rhs.coords),
        }
    }
}

/// Pseudoscalar product `<u+, v+> - <u-, v->` of signature `(d, d)`.
pub fn mink_inner<S: Scalar>(u: &MinkVector<S>, v: &MinkVector<S>) -> Result<S, LinalgError> {
    u.check_same_d(v)?;
    Ok(dot(u.plus(), v.plus()) - dot(u.minus(), v.minus()))
}

/// `<u - v, u - v>`.
pub fn squared_length<S: Scalar>(u: &MinkVector<S>, v: &MinkVector<S>) -> Result<S, LinalgError> {
    u.check_same_d(v)?;
    Ok(S::mink_sq_dist(&u.coords, &v.coords))
}
