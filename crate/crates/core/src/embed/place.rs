use crate::linalg::{dot, solve_pairing_system, IsotropicSplit, LinalgError, MinkVector};
use crate::scalar::Scalar;

use super::EmbedError;

/// One instance of the placement system: find `u₀` with
/// `<u₀ - u_i, u₀ - u_i> = c_i` for every neighbor and `P_Δ(u₀) = v₀`.
#[derive(Debug, Clone)]
pub struct PlacementProblem<S> {
    pub split: IsotropicSplit<S>,
    /// `v₀`, a point of Δ.
    pub anchor: MinkVector<S>,
    pub neighbors: Vec<MinkVector<S>>,
    pub targets: Vec<S>,
}

/// Solves a [`PlacementProblem`].
///
/// With `u₀ = v₀ + h₀`, `h₀ ∈ Σ`, and Σ/Δ-coordinates `(s, w)` of every point,
/// each condition reads `4 (w₀ - w_i)·(s₀ - s_i) = c_i`, a linear equation in
/// the Σ-coordinates `s₀` of `h₀`. Underdetermined systems take the
/// minimum-norm `s₀`.
pub fn place_vertex<S: Scalar>(p: &PlacementProblem<S>) -> Result<MinkVector<S>, EmbedError> {
    let d = p.split.d();
    if p.neighbors.len() != p.targets.len() {
        return Err(LinalgError::DimensionMismatch {
            expected: p.neighbors.len(),
            found: p.targets.len(),
        }
        .into());
    }
    if p.neighbors.len() > d {
        return Err(EmbedError::TooManyNeighbors {
            neighbors: p.neighbors.len(),
            d,
        });
    }
    let (anchor_s, w0) = p.split.coordinates(&p.anchor)?;
    let anchor_scale = w0.iter().map(Scalar::abs).fold(S::one(), S::max_of);
    if anchor_s.iter().any(|x| !x.is_negligible(&anchor_scale)) {
        return Err(EmbedError::AnchorOutsideDelta);
    }

    let quarter = S::from_ratio(1, 4);
    let mut rows = Vec::with_capacity(p.neighbors.len());
    let mut rhs = Vec::with_capacity(p.neighbors.len());
    for (u, c) in p.neighbors.iter().zip(&p.targets) {
        let (s_i, w_i) = p.split.coordinates(u)?;
        let row: Vec<S> = w0.iter().zip(&w_i).map(|(a, b)| a.clone() - b).collect();
        rhs.push(c.clone() * &quarter + dot(&row, &s_i));
        rows.push(row);
    }
    let s0 = match solve_pairing_system(&rows, &rhs, d) {
        Ok(s) => s,
        Err(LinalgError::RankDeficient { row }) => {
            return Err(EmbedError::AffinelyDependent { neighbor: row })
        }
        Err(e) => return Err(e.into()),
    };
    Ok(p.split.compose(&s0, &w0)?)
}
