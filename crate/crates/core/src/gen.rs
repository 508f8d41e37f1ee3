//! Deterministic fixtures and seeded random complexes.

use std::collections::{BTreeSet, HashSet};
use std::fmt;
use std::str::FromStr;

use rand::seq::index::sample;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::complex::IndefiniteMetricPolyhedron;
use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GenError {
    #[error("infeasible generator spec: {0}")]
    Infeasible(String),
}

/// 1-skeleton of the standard `d`-simplex: `K_{d+1}` with unit lengths.
pub fn simplex_skeleton<S: Scalar>(d: usize) -> IndefiniteMetricPolyhedron<S> {
    let n = d + 1;
    let edges = (0..n)
        .flat_map(|a| (a + 1..n).map(move |b| vec![a, b]))
        .collect::<Vec<_>>();
    let simplices = if edges.is_empty() { vec![vec![0]] } else { edges };
    IndefiniteMetricPolyhedron::from_indexed(n, simplices, |_, _| S::one())
}

/// Triangulated `rows × cols` grid of unit squares, each cut along the
/// diagonal `(r, c)–(r+1, c+1)`. Vertex `(r, c)` is `v{r*cols + c}`; squared
/// lengths come from the planar realization (1 on sides, 2 on diagonals).
pub fn euclidean_mesh<S: Scalar>(rows: usize, cols: usize) -> Result<IndefiniteMetricPolyhedron<S>, GenError> {
    if rows < 2 || cols < 2 {
        return Err(GenError::Infeasible(format!("mesh needs at least 2x2 vertices, got {rows}x{cols}")));
    }
    let at = |r: usize, c: usize| r * cols + c;
    let mut triangles = Vec::with_capacity(2 * (rows - 1) * (cols - 1));
    for r in 0..rows - 1 {
        for c in 0..cols - 1 {
            triangles.push(vec![at(r, c), at(r, c + 1), at(r + 1, c + 1)]);
            triangles.push(vec![at(r, c), at(r + 1, c), at(r + 1, c + 1)]);
        }
    }
    Ok(IndefiniteMetricPolyhedron::from_indexed(rows * cols, triangles, |a, b| {
        let (dr, dc) = (b / cols - a / cols, (b % cols).abs_diff(a % cols));
        S::from_i64((dr * dr + dc * dc) as i64)
    }))
}

/// `count` tetrahedra `{k, k+1, k+2, k+3}`, consecutive ones sharing a face.
pub fn stacked_tetrahedra<S: Scalar>(count: usize) -> IndefiniteMetricPolyhedron<S> {
    let count = count.max(1);
    let tets = (0..count).map(|k| (k..k + 4).collect()).collect();
    IndefiniteMetricPolyhedron::from_indexed(count + 3, tets, |_, _| S::one())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GenKind {
    CompleteSkeleton,
    EuclideanMesh,
    /// Every vertex has degree at most `bound`.
    RandomBoundedDegree,
    /// Degeneracy at most `bound`.
    RandomDDegenerate,
}

impl fmt::Display for GenKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            GenKind::CompleteSkeleton => "complete",
            GenKind::EuclideanMesh => "mesh",
            GenKind::RandomBoundedDegree => "bounded-degree",
            GenKind::RandomDDegenerate => "degenerate",
        })
    }
}

impl FromStr for GenKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "complete" | "complete_skeleton" => Ok(GenKind::CompleteSkeleton),
            "mesh" | "euclidean_mesh" => Ok(GenKind::EuclideanMesh),
            "bounded-degree" | "bounded_degree" | "random_bounded_degree" => Ok(GenKind::RandomBoundedDegree),
            "degenerate" | "random_d_degenerate" => Ok(GenKind::RandomDDegenerate),
            other => Err(format!("unknown generator kind `{other}`")),
        }
    }
}

/// Squared lengths `±p/q` with `q <= max_denominator` and `|p/q| <= max_abs`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LengthDistribution {
    pub max_abs: i64,
    pub max_denominator: i64,
    pub negative_fraction: f64,
    pub zero_fraction: f64,
}

impl Default for LengthDistribution {
    fn default() -> Self {
        LengthDistribution {
            max_abs: 10,
            max_denominator: 4,
            negative_fraction: 0.5,
            zero_fraction: 0.05,
        }
    }
}

impl LengthDistribution {
    pub fn sample<S: Scalar, R: Rng>(&self, rng: &mut R) -> S {
        if rng.gen_bool(self.zero_fraction.clamp(0.0, 1.0)) {
            return S::zero();
        }
        let q = rng.gen_range(1..=self.max_denominator.max(1));
        let p = rng.gen_range(1..=(self.max_abs.max(1) * q));
        let sign = if rng.gen_bool(self.negative_fraction.clamp(0.0, 1.0)) { -1 } else { 1 };
        S::from_ratio(sign * p, q)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GenSpec {
    pub kind: GenKind,
    /// Vertex count for the random kinds; `d` for the skeleton; rows for the mesh.
    pub size: usize,
    /// Columns for the mesh, ignored otherwise.
    pub cols: usize,
    /// Degree or degeneracy bound.
    pub bound: usize,
    /// Highest simplex dimension produced by clique lifting.
    pub dim: usize,
    pub lengths: LengthDistribution,
    pub seed: u64,
}

impl GenSpec {
    pub fn degenerate(vertices: usize, bound: usize, seed: u64) -> Self {
        GenSpec {
            kind: GenKind::RandomDDegenerate,
            size: vertices,
            cols: 0,
            bound,
            dim: 1,
            lengths: LengthDistribution::default(),
            seed,
        }
    }

    pub fn bounded_degree(vertices: usize, bound: usize, seed: u64) -> Self {
        GenSpec {
            kind: GenKind::RandomBoundedDegree,
            ..GenSpec::degenerate(vertices, bound, seed)
        }
    }

    pub fn with_dim(mut self, dim: usize) -> Self {
        self.dim = dim;
        self
    }
}

/// Builds the complex described by `spec`. Random kinds insert vertices one
/// at a time with at most `bound` edges to earlier vertices (respecting the
/// degree cap for the bounded-degree kind), then lift cliques among earlier
/// neighbors to simplices of dimension up to `dim`.
pub fn random_polyhedron<S: Scalar>(spec: &GenSpec) -> Result<IndefiniteMetricPolyhedron<S>, GenError> {
    match spec.kind {
        GenKind::CompleteSkeleton => {
            if spec.size == 0 {
                return Err(GenError::Infeasible("skeleton needs d >= 1".into()));
            }
            return Ok(simplex_skeleton(spec.size));
        }
        GenKind::EuclideanMesh => return euclidean_mesh(spec.size, spec.cols),
        _ => {}
    }
    let n = spec.size;
    if n == 0 {
        return Err(GenError::Infeasible("no vertices requested".into()));
    }
    if spec.bound == 0 && n > 1 {
        return Err(GenError::Infeasible(format!("bound 0 leaves {n} vertices without edges")));
    }
    if spec.dim == 0 {
        return Err(GenError::Infeasible("simplex dimension must be at least 1".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let capped = spec.kind == GenKind::RandomBoundedDegree;

    let mut degree = vec![0usize; n];
    let mut earlier: Vec<Vec<usize>> = vec![Vec::new(); n];
    let mut edge_set: HashSet<(usize, usize)> = HashSet::new();
    for v in 1..n {
        let candidates: Vec<usize> = if capped {
            (0..v).filter(|&u| degree[u] < spec.bound).collect()
        } else {
            (0..v).collect()
        };
        if candidates.is_empty() {
            continue;
        }
        let k = rng.gen_range(1..=spec.bound.min(candidates.len()));
        let mut chosen: Vec<usize> = sample(&mut rng, candidates.len(), k)
            .into_iter()
            .map(|i| candidates[i])
            .collect();
        chosen.sort_unstable();
        for &u in &chosen {
            degree[u] += 1;
            degree[v] += 1;
            edge_set.insert((u, v));
        }
        earlier[v] = chosen;
    }

    let mut simplices: Vec<Vec<usize>> = Vec::new();
    if spec.dim >= 2 {
        for v in 0..n {
            if !rng.gen_bool(0.5) {
                continue;
            }
            let mut pool = earlier[v].clone();
            pool.shuffle(&mut rng);
            let mut clique: Vec<usize> = Vec::new();
            for u in pool {
                if clique.len() == spec.dim {
                    break;
                }
                if clique.iter().all(|&w| edge_set.contains(&(w.min(u), w.max(u)))) {
                    clique.push(u);
                }
            }
            if clique.len() >= 2 {
                clique.push(v);
                clique.sort_unstable();
                simplices.push(clique);
            }
        }
        simplices = maximal_only(simplices, n);
    }
    let covered: HashSet<(usize, usize)> = simplices
        .iter()
        .flat_map(|s| s.iter().enumerate().flat_map(move |(i, &a)| s[i + 1..].iter().map(move |&b| (a, b))))
        .collect();
    let mut edges: Vec<(usize, usize)> = edge_set.difference(&covered).copied().collect();
    edges.sort_unstable();
    simplices.extend(edges.into_iter().map(|(a, b)| vec![a, b]));
    simplices.extend((0..n).filter(|&v| degree[v] == 0).map(|v| vec![v]));
    simplices.sort();

    let mut all_edges: Vec<(usize, usize)> = edge_set.into_iter().collect();
    all_edges.sort_unstable();
    let mut lengths = std::collections::HashMap::new();
    for e in all_edges {
        lengths.insert(e, spec.lengths.sample::<S, _>(&mut rng));
    }
    Ok(IndefiniteMetricPolyhedron::from_indexed(n, simplices, |a, b| lengths[&(a, b)].clone()))
}

/// Drops every simplex contained in another one.
fn maximal_only(simplices: Vec<Vec<usize>>, n: usize) -> Vec<Vec<usize>> {
    let mut by_vertex: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (i, s) in simplices.iter().enumerate() {
        for &v in s {
            by_vertex[v].push(i);
        }
    }
    let unique: BTreeSet<Vec<usize>> = simplices
        .iter()
        .filter(|s| {
            !by_vertex[s[0]].iter().any(|&j| {
                let t = &simplices[j];
                t.len() > s.len() && s.iter().all(|v| t.binary_search(v).is_ok())
            })
        })
        .cloned()
        .collect();
    unique.into_iter().collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Rational;

    #[test]
    fn skeleton_shapes() {
        let p = simplex_skeleton::<Rational>(1);
        assert_eq!((p.vertex_count(), p.edge_count()), (2, 1));
        let p = simplex_skeleton::<Rational>(3);
        assert_eq!(p.edge_count(), 6);
        assert_eq!(p.dimension(), 1);
        assert_eq!(p.max_degree(), 3);
        assert_eq!(p.degeneracy_ordering().degeneracy, 3);
    }

    #[test]
    fn two_by_two_mesh() {
        let p = euclidean_mesh::<Rational>(2, 2).unwrap();
        assert_eq!(p.maximal_simplices().len(), 2);
        let mut g: Vec<i64> = p.edges().map(|(_, _, g)| g.to_integer().try_into().unwrap()).collect();
        g.sort_unstable();
        // planar oracle: unit square with one diagonal
        let pts = [(0i64, 0i64), (0, 1), (1, 0), (1, 1)];
        let mut oracle: Vec<i64> = p
            .edges()
            .map(|(a, b, _)| {
                let (p, q) = (pts[a], pts[b]);
                (p.0 - q.0).pow(2) + (p.1 - q.1).pow(2)
            })
            .collect();
        oracle.sort_unstable();
        assert_eq!(g, vec![1, 1, 1, 1, 2]);
        assert_eq!(g, oracle);
        assert!(euclidean_mesh::<f64>(1, 5).is_err());
    }

    #[test]
    fn mesh_is_positive_and_low_degenerate() {
        let p = euclidean_mesh::<Rational>(10, 10).unwrap();
        assert!(p.edges().all(|(_, _, g)| *g > Rational::from_i64(0)));
        assert!(p.degeneracy_ordering().degeneracy <= 3);
        assert!(p.to_raw().validate().is_empty());
    }

    #[test]
    fn degenerate_bound_holds() {
        let p = random_polyhedron::<Rational>(&GenSpec::degenerate(50, 3, 7)).unwrap();
        assert_eq!(p.vertex_count(), 50);
        assert!(p.degeneracy_ordering().degeneracy <= 3);
        assert!(p.to_raw().validate().is_empty());
    }

    #[test]
    fn bounded_degree_bound_holds() {
        for seed in 0..10 {
            let p = random_polyhedron::<Rational>(&GenSpec::bounded_degree(60, 4, seed).with_dim(3)).unwrap();
            assert!(p.max_degree() <= 4);
            assert!(p.to_raw().validate().is_empty());
        }
    }

    #[test]
    fn lifting_produces_higher_simplices() {
        let p = random_polyhedron::<Rational>(&GenSpec::degenerate(80, 4, 1).with_dim(3)).unwrap();
        assert!(p.dimension() >= 2);
        assert!(p.dimension() <= 3);
        assert!(p.to_raw().validate().is_empty());
        let simplices = p.maximal_simplices();
        for (i, s) in simplices.iter().enumerate() {
            for (j, t) in simplices.iter().enumerate() {
                assert!(i == j || !s.iter().all(|v| t.contains(v)), "{s:?} inside {t:?}");
            }
        }
    }

    #[test]
    fn signs_are_mixed() {
        let p = random_polyhedron::<Rational>(&GenSpec::degenerate(400, 3, 5)).unwrap();
        let zero = Rational::from_i64(0);
        let neg = p.edges().filter(|(_, _, g)| **g < zero).count();
        let pos = p.edges().filter(|(_, _, g)| **g > zero).count();
        let m = p.edge_count() as f64;
        // 50/50 split among nonzero draws; 6 sigma band
        let nonzero = (neg + pos) as f64;
        assert!((neg as f64 - nonzero / 2.0).abs() < 6.0 * (nonzero / 4.0).sqrt());
        assert!(p.edges().all(|(_, _, g)| g.abs() <= Rational::from_i64(10)));
        assert!(m > 0.0);
    }

    #[test]
    fn deterministic() {
        let spec = GenSpec::degenerate(40, 3, 99).with_dim(2);
        assert_eq!(random_polyhedron::<Rational>(&spec).unwrap(), random_polyhedron::<Rational>(&spec).unwrap());
    }

    #[test]
    fn infeasible_specs() {
        assert!(random_polyhedron::<f64>(&GenSpec::degenerate(5, 0, 0)).is_err());
        assert!(random_polyhedron::<f64>(&GenSpec::degenerate(0, 2, 0)).is_err());
    }

    #[test]
    fn stacked() {
        let p = stacked_tetrahedra::<f64>(8);
        assert_eq!(p.vertex_count(), 11);
        assert_eq!(p.dimension(), 3);
        assert_eq!(p.degeneracy_ordering().degeneracy, 3);
    }
}
