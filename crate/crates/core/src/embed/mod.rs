//! The two embedding pipelines.
//!
//! [`embed_polyhedron`] builds a simplicial isometric map of a
//! `d`-degenerate polyhedron into `R^d_d` vertex by vertex along a degeneracy
//! ordering, using one fixed split and generic Δ-anchors (the moment curve by
//! default on the exact backend).
//! [`extend_embedding`] extends a partial map, choosing a fresh isotropic
//! split for every new vertex.

mod extend;
mod lorentz;
mod place;

use std::collections::BTreeMap;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::complex::{DegeneracyOrdering, IndefiniteMetricPolyhedron};
use crate::linalg::{AnchorScheme, IsotropicSplit, LinalgError, MinkVector};
use crate::scalar::{Backend, Scalar};
use crate::verify::VerifyError;

pub use extend::{choose_generic_delta_point, extend_embedding, ExtendConfig, GenericPointOptions};
pub use lorentz::{isotropic_pair_for, AdaptedSplit};
pub use place::{place_vertex, PlacementProblem};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum EmbedError {
    #[error("d = {d} is smaller than the degeneracy {degeneracy} of the complex")]
    BelowDegeneracy { d: usize, degeneracy: usize },
    #[error("d = {d} is smaller than the maximum vertex degree {max_degree}")]
    BelowMaxDegree { d: usize, max_degree: usize },
    #[error("d must be at least 1")]
    ZeroDimension,
    #[error("{neighbors} points exceed the bound {d}")]
    TooManyNeighbors { neighbors: usize, d: usize },
    #[error("anchor does not lie in Δ")]
    AnchorOutsideDelta,
    #[error("anchor and neighbor projections are affinely dependent (neighbor {neighbor})")]
    AffinelyDependent { neighbor: usize },
    #[error("point set is not affinely independent")]
    NotAffinelyIndependent,
    #[error("could not pad the point set to an affine basis")]
    PaddingFailed,
    #[error("no generic Δ-point found after {attempts} draws ({reason})")]
    RetryBudgetExceeded { attempts: usize, reason: String },
    #[error("general position cannot be certified: {subsets} subsets exceed the budget")]
    NotCertifiable { subsets: u64 },
    #[error("partial map assigns unknown vertex `{0}`")]
    PartialUnknownVertex(String),
    #[error("partial map has dimension {found}, expected {expected}")]
    PartialDimension { expected: usize, found: usize },
    #[error("partial map violates edge {}--{} (residual {residual})", .edge[0], .edge[1])]
    PartialNotIsometric { edge: [String; 2], residual: String },
    #[error("partial map is not in general position: {}", .witness.join(", "))]
    PartialNotInGeneralPosition { witness: Vec<String> },
    #[error("general position of the partial map could not be certified")]
    PartialNotCertified,
    #[error("vertex `{vertex}`: {source}")]
    AtVertex {
        vertex: String,
        #[source]
        source: Box<EmbedError>,
    },
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error(transparent)]
    Verify(#[from] VerifyError),
}

impl EmbedError {
    fn at(self, vertex: &str) -> EmbedError {
        EmbedError::AtVertex {
            vertex: vertex.to_string(),
            source: Box::new(self),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum SplitMode {
    /// One standard split for every vertex.
    #[default]
    Standard,
    /// A split adapted to the placed neighbors of each new vertex.
    PerVertex,
    /// Coordinates supplied by the user.
    Given,
}

/// Everything needed to replay a construction.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize, Default)]
pub struct EmbeddingMeta {
    /// Curve parameter of each vertex, aligned with `ordering`; empty for
    /// random anchors.
    pub anchor_params: Vec<String>,
    pub anchor_scheme: Option<AnchorScheme>,
    pub certify: bool,
    pub ordering: Vec<String>,
    /// Vertices whose images were fixed in advance.
    pub partial: Vec<String>,
    pub seed: Option<u64>,
    pub splits: SplitMode,
}

/// Vertex images in `R^d_d`, keyed by vertex id.
#[derive(Debug, Clone, PartialEq)]
pub struct Embedding<S> {
    d: usize,
    points: BTreeMap<String, MinkVector<S>>,
    pub meta: EmbeddingMeta,
}

impl<S: Scalar> Embedding<S> {
    pub fn new(d: usize) -> Self {
        Embedding {
            d,
            points: BTreeMap::new(),
            meta: EmbeddingMeta {
                splits: SplitMode::Given,
                ..EmbeddingMeta::default()
            },
        }
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn backend(&self) -> Backend {
        S::BACKEND
    }

    pub fn insert(&mut self, id: impl Into<String>, v: MinkVector<S>) -> Result<(), EmbedError> {
        if v.d() != self.d {
            return Err(EmbedError::PartialDimension {
                expected: 2 * self.d,
                found: v.coords().len(),
            });
        }
        self.points.insert(id.into(), v);
        Ok(())
    }

    pub fn get(&self, id: &str) -> Option<&MinkVector<S>> {
        self.points.get(id)
    }

    pub fn points(&self) -> impl Iterator<Item = (&String, &MinkVector<S>)> {
        self.points.iter()
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Keeps only the listed vertices.
    pub fn restricted_to<'a>(&self, ids: impl IntoIterator<Item = &'a str>) -> Embedding<S> {
        let mut out = Embedding::new(self.d);
        for id in ids {
            if let Some(v) = self.points.get(id) {
                out.points.insert(id.to_string(), v.clone());
            }
        }
        out
    }

    pub fn to_f64(&self) -> Embedding<f64> {
        Embedding {
            d: self.d,
            points: self
                .points
                .iter()
                .map(|(k, v)| (k.clone(), v.to_f64()))
                .collect(),
            meta: self.meta.clone(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct EmbedConfig {
    /// Target half-dimension; defaults to the degeneracy (at least 1).
    pub d: Option<usize>,
    pub anchors: AnchorScheme,
    /// Seed for random anchors.
    pub seed: u64,
}

impl EmbedConfig {
    pub fn for_backend<S: Scalar>() -> Self {
        EmbedConfig {
            d: None,
            anchors: AnchorScheme::default_for::<S>(),
            seed: 0,
        }
    }

    pub fn with_d(mut self, d: usize) -> Self {
        self.d = Some(d);
        self
    }

    pub fn with_anchors(mut self, anchors: AnchorScheme) -> Self {
        self.anchors = anchors;
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }
}

/// Simplicial isometric map of a `d`-degenerate polyhedron into `R^d_d`.
///
/// Vertices are placed along the smallest-last ordering. The `i`-th vertex
/// gets Δ-anchor `v_i` from the configured scheme; with no earlier neighbors its
/// image is `v_i` itself, otherwise the placement system is solved against
/// its earlier neighbors. Since `P_Δ(τ(t_i)) = v_i` and the anchors are in
/// `d`-general position, so are the images.
pub fn embed_polyhedron<S: Scalar>(
    p: &IndefiniteMetricPolyhedron<S>,
    cfg: &EmbedConfig,
) -> Result<Embedding<S>, EmbedError> {
    embed_with_ordering(p, &p.degeneracy_ordering(), cfg)
}

/// Gaussian anchors drawn per constrained vertex; the smallest image is kept.
pub const GAUSSIAN_DRAWS: usize = 4;

/// [`embed_polyhedron`] along a precomputed ordering; `d` defaults to the
/// ordering's maximum back-degree.
pub fn embed_with_ordering<S: Scalar>(
    p: &IndefiniteMetricPolyhedron<S>,
    ordering: &DegeneracyOrdering,
    cfg: &EmbedConfig,
) -> Result<Embedding<S>, EmbedError> {
    if ordering.order.len() != p.vertex_count() {
        return Err(LinalgError::DimensionMismatch {
            expected: p.vertex_count(),
            found: ordering.order.len(),
        }
        .into());
    }
    let d = cfg.d.unwrap_or(ordering.degeneracy.max(1));
    if d == 0 {
        return Err(EmbedError::ZeroDimension);
    }
    if d < ordering.degeneracy {
        return Err(EmbedError::BelowDegeneracy {
            d,
            degeneracy: ordering.degeneracy,
        });
    }
    let n = p.vertex_count();
    let split = IsotropicSplit::<S>::standard(d);
    let mut images: Vec<Option<MinkVector<S>>> = vec![None; n];
    let mut params = Vec::with_capacity(n);
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);

    for (pos, &v) in ordering.order.iter().enumerate() {
        let earlier = ordering.earlier_neighbors(p.neighbors(v), v);
        let draws = if earlier.is_empty() || cfg.anchors != AnchorScheme::Gaussian {
            1
        } else {
            GAUSSIAN_DRAWS
        };
        let mut best: Option<(f64, MinkVector<S>)> = None;
        for _ in 0..draws {
            let (t, w) = cfg.anchors.anchor::<S, _>(pos, n, d, &mut rng);
            let anchor = split.delta_point(&w)?;
            params.extend(t.map(|t| t.to_canonical()));
            let image = if earlier.is_empty() {
                anchor
            } else {
                let problem = PlacementProblem {
                    split: split.clone(),
                    anchor,
                    neighbors: earlier
                        .iter()
                        .map(|&u| images[u].clone().expect("earlier vertex placed"))
                        .collect(),
                    targets: earlier
                        .iter()
                        .map(|&u| p.squared_length(u, v).expect("edge").clone())
                        .collect(),
                };
                place_vertex(&problem).map_err(|e| e.at(p.vertex_id(v)))?
            };
            let size = image.coords().iter().map(|x| x.to_f64().abs()).fold(0.0, f64::max);
            if best.as_ref().map_or(true, |(b, _)| size < *b) {
                best = Some((size, image));
            }
        }
        let (_, image) = best.expect("at least one draw");
        images[v] = Some(image);
    }

    let mut tau = Embedding::new(d);
    for (v, image) in images.into_iter().enumerate() {
        tau.points
            .insert(p.vertex_id(v).to_string(), image.expect("all placed"));
    }
    tau.meta = EmbeddingMeta {
        anchor_params: params,
        anchor_scheme: Some(cfg.anchors),
        certify: false,
        ordering: ordering
            .order
            .iter()
            .map(|&v| p.vertex_id(v).to_string())
            .collect(),
        partial: Vec::new(),
        seed: (cfg.anchors == AnchorScheme::Gaussian).then_some(cfg.seed),
        splits: SplitMode::Standard,
    };
    Ok(tau)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::squared_length;
    use crate::scalar::Rational;
    use num_traits::Zero;

    fn unit(_: usize, _: usize) -> Rational {
        Rational::from_i64(1)
    }

    #[test]
    fn single_vertex_is_its_anchor() {
        let p = IndefiniteMetricPolyhedron::<Rational>::from_indexed(1, vec![vec![0]], unit);
        let cfg = EmbedConfig::for_backend::<Rational>().with_d(3);
        let tau = embed_polyhedron(&p, &cfg).unwrap();
        let split = IsotropicSplit::<Rational>::standard(3);
        let expected = split
            .delta_point(&crate::linalg::moment_curve_point(&Rational::from_i64(1), 3))
            .unwrap();
        assert_eq!(tau.get("v0").unwrap(), &expected);
    }

    #[test]
    fn negative_edge_in_d1() {
        let p = IndefiniteMetricPolyhedron::<Rational>::from_indexed(2, vec![vec![0, 1]], |_, _| Rational::from_i64(-5));
        let tau = embed_polyhedron(&p, &EmbedConfig::for_backend::<Rational>()).unwrap();
        assert_eq!(tau.d(), 1);
        let sq = squared_length(tau.get("v0").unwrap(), tau.get("v1").unwrap()).unwrap();
        assert_eq!(sq, Rational::from_i64(-5));
    }

    #[test]
    fn complete_graph_exact() {
        let d = 3;
        let p = IndefiniteMetricPolyhedron::<Rational>::from_indexed(
            d + 1,
            (0..=d).flat_map(|a| (a + 1..=d).map(move |b| vec![a, b])).collect(),
            unit,
        );
        let tau = embed_polyhedron(&p, &EmbedConfig::for_backend::<Rational>()).unwrap();
        for (a, b, g) in p.edges() {
            let sq = squared_length(tau.get(p.vertex_id(a)).unwrap(), tau.get(p.vertex_id(b)).unwrap()).unwrap();
            assert!((sq - g).is_zero());
        }
    }

    #[test]
    fn anchoring_holds() {
        let p = IndefiniteMetricPolyhedron::<Rational>::from_indexed(5, vec![vec![0, 1, 2], vec![2, 3], vec![3, 4], vec![0, 4]], |a, b| Rational::from_ratio(a as i64 - 2 * b as i64, 3));
        let cfg = EmbedConfig::for_backend::<Rational>();
        let tau = embed_polyhedron(&p, &cfg).unwrap();
        let split = IsotropicSplit::<Rational>::standard(tau.d());
        for (pos, id) in tau.meta.ordering.iter().enumerate() {
            let t: Rational = cfg.anchors.parameter(pos, 5).unwrap();
            let w = split.delta_coords(tau.get(id).unwrap()).unwrap();
            assert_eq!(w, crate::linalg::moment_curve_point(&t, tau.d()));
            assert_eq!(tau.meta.anchor_params[pos], t.to_string());
        }
    }

    #[test]
    fn too_small_d_rejected() {
        let p = IndefiniteMetricPolyhedron::<Rational>::from_indexed(3, vec![vec![0, 1, 2]], unit);
        let err = embed_polyhedron(&p, &EmbedConfig::for_backend::<Rational>().with_d(1)).unwrap_err();
        assert_eq!(err, EmbedError::BelowDegeneracy { d: 1, degeneracy: 2 });
    }
}
