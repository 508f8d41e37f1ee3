//! Abstract simplicial complexes carrying squared edge lengths.
//!
//! A complex is given by its maximal simplices; every subset of a maximal
//! simplex is a simplex. Only the 1-skeleton carries data: one squared length
//! (any real, possibly zero or negative) per edge.

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Defect {
    DuplicateVertex { vertex: String },
    EmptySimplex { simplex: usize },
    RepeatedVertex { simplex: usize, vertex: String },
    UnknownVertex { context: String, vertex: String },
    MissingLength { edge: [String; 2] },
    DuplicateLength { edge: [String; 2] },
    /// A length was supplied for a pair that is not an edge of the complex.
    ExtraneousLength { edge: [String; 2] },
}

impl fmt::Display for Defect {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Defect::DuplicateVertex { vertex } => write!(f, "duplicate vertex id `{vertex}`"),
            Defect::EmptySimplex { simplex } => write!(f, "simplex #{simplex} is empty"),
            Defect::RepeatedVertex { simplex, vertex } => {
                write!(f, "repeated vertex `{vertex}` in simplex #{simplex}")
            }
            Defect::UnknownVertex { context, vertex } => {
                write!(f, "unknown vertex `{vertex}` referenced by {context}")
            }
            Defect::MissingLength { edge } => {
                write!(f, "missing edge length for {}--{}", edge[0], edge[1])
            }
            Defect::DuplicateLength { edge } => {
                write!(f, "duplicate length entry for {}--{}", edge[0], edge[1])
            }
            Defect::ExtraneousLength { edge } => {
                write!(f, "length given for non-edge {}--{}", edge[0], edge[1])
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ComplexError {
    #[error("invalid polyhedron: {}", .0.iter().map(ToString::to_string).collect::<Vec<_>>().join("; "))]
    Invalid(Vec<Defect>),
    #[error("unknown vertex `{0}`")]
    UnknownVertex(String),
    #[error("ordering is not a permutation of the vertex set")]
    NotAPermutation,
}

/// Unvalidated input: ids, maximal simplices and length entries as given.
#[derive(Debug, Clone, PartialEq)]
pub struct RawPolyhedron<S> {
    pub vertices: Vec<String>,
    pub maximal_simplices: Vec<Vec<String>>,
    pub squared_lengths: Vec<(String, String, S)>,
}

impl<S: Scalar> RawPolyhedron<S> {
    /// Lists every defect; an empty list means the input is a valid
    /// indefinite metric polyhedron.
    pub fn validate(&self) -> Vec<Defect> {
        let mut defects = Vec::new();
        let mut known = HashSet::new();
        for v in &self.vertices {
            if !known.insert(v.as_str()) {
                defects.push(Defect::DuplicateVertex { vertex: v.clone() });
            }
        }

        let mut edges: BTreeSet<(String, String)> = BTreeSet::new();
        for (idx, simplex) in self.maximal_simplices.iter().enumerate() {
            if simplex.is_empty() {
                defects.push(Defect::EmptySimplex { simplex: idx });
            }
            let mut seen = HashSet::new();
            for v in simplex {
                if !seen.insert(v.as_str()) {
                    defects.push(Defect::RepeatedVertex {
                        simplex: idx,
                        vertex: v.clone(),
                    });
                }
                if !known.contains(v.as_str()) {
                    defects.push(Defect::UnknownVertex {
                        context: format!("simplex #{idx}"),
                        vertex: v.clone(),
                    });
                }
            }
            let mut distinct: Vec<&String> = simplex.iter().collect();
            distinct.sort();
            distinct.dedup();
            for (i, a) in distinct.iter().enumerate() {
                for b in &distinct[i + 1..] {
                    edges.insert(ordered_pair(a, b));
                }
            }
        }

        let mut given: BTreeMap<(String, String), usize> = BTreeMap::new();
        for (a, b, _) in &self.squared_lengths {
            for v in [a, b] {
                if !known.contains(v.as_str()) {
                    defects.push(Defect::UnknownVertex {
                        context: "squared_lengths".to_string(),
                        vertex: v.clone(),
                    });
                }
            }
            *given.entry(ordered_pair(a, b)).or_default() += 1;
        }
        for (pair, count) in &given {
            let edge = [pair.0.clone(), pair.1.clone()];
            if !edges.contains(pair) {
                defects.push(Defect::ExtraneousLength { edge });
            } else if *count > 1 {
                defects.push(Defect::DuplicateLength { edge });
            }
        }
        for pair in &edges {
            if !given.contains_key(pair) {
                defects.push(Defect::MissingLength {
                    edge: [pair.0.clone(), pair.1.clone()],
                });
            }
        }
        defects
    }

    pub fn build(self) -> Result<IndefiniteMetricPolyhedron<S>, ComplexError> {
        let defects = self.validate();
        if !defects.is_empty() {
            return Err(ComplexError::Invalid(defects));
        }
        let index: HashMap<String, usize> = self
            .vertices
            .iter()
            .enumerate()
            .map(|(i, v)| (v.clone(), i))
            .collect();
        let simplices = self
            .maximal_simplices
            .iter()
            .map(|s| s.iter().map(|v| index[v]).collect())
            .collect();
        let lengths = self
            .squared_lengths
            .into_iter()
            .map(|(a, b, g)| (index[&a], index[&b], g))
            .collect();
        Ok(IndefiniteMetricPolyhedron::assemble(self.vertices, index, simplices, lengths))
    }
}

fn ordered_pair(a: &str, b: &str) -> (String, String) {
    if a <= b {
        (a.to_string(), b.to_string())
    } else {
        (b.to_string(), a.to_string())
    }
}

/// A validated complex with squared edge lengths.
#[derive(Debug, Clone, PartialEq)]
pub struct IndefiniteMetricPolyhedron<S> {
    vertices: Vec<String>,
    index: HashMap<String, usize>,
    simplices: Vec<Vec<usize>>,
    lengths: BTreeMap<(usize, usize), S>,
    adjacency: Vec<Vec<usize>>,
}

impl<S: Scalar> IndefiniteMetricPolyhedron<S> {
    fn assemble(
        vertices: Vec<String>,
        index: HashMap<String, usize>,
        simplices: Vec<Vec<usize>>,
        raw_lengths: Vec<(usize, usize, S)>,
    ) -> Self {
        let mut simplices: Vec<Vec<usize>> = simplices
            .into_iter()
            .map(|mut s| {
                s.sort_unstable();
                s
            })
            .collect();
        simplices.sort();
        simplices.dedup();
        let lengths: BTreeMap<(usize, usize), S> = raw_lengths
            .into_iter()
            .map(|(a, b, g)| ((a.min(b), a.max(b)), g))
            .collect();
        let mut adjacency = vec![Vec::new(); vertices.len()];
        for &(a, b) in lengths.keys() {
            adjacency[a].push(b);
            adjacency[b].push(a);
        }
        for list in &mut adjacency {
            list.sort_unstable();
        }
        IndefiniteMetricPolyhedron {
            vertices,
            index,
            simplices,
            lengths,
            adjacency,
        }
    }

    /// Builds a complex on vertices `v0..v{n-1}` from index simplices, taking
    /// each edge length from `length(a, b)` with `a < b`.
    pub fn from_indexed(
        n: usize,
        maximal_simplices: Vec<Vec<usize>>,
        mut length: impl FnMut(usize, usize) -> S,
    ) -> Self {
        let vertices: Vec<String> = (0..n).map(|i| format!("v{i}")).collect();
        let index = vertices.iter().enumerate().map(|(i, v)| (v.clone(), i)).collect();
        let mut edges = BTreeSet::new();
        for s in &maximal_simplices {
            for (i, &a) in s.iter().enumerate() {
                assert!(a < n, "vertex index out of range");
                for &b in &s[i + 1..] {
                    assert_ne!(a, b, "repeated vertex in simplex");
                    edges.insert((a.min(b), a.max(b)));
                }
            }
        }
        let lengths = edges.into_iter().map(|(a, b)| (a, b, length(a, b))).collect();
        Self::assemble(vertices, index, maximal_simplices, lengths)
    }

    /// Same complex with every squared length mapped through `f`.
    pub fn map_lengths<T: Scalar>(&self, mut f: impl FnMut(&S) -> T) -> IndefiniteMetricPolyhedron<T> {
        IndefiniteMetricPolyhedron {
            vertices: self.vertices.clone(),
            index: self.index.clone(),
            simplices: self.simplices.clone(),
            lengths: self.lengths.iter().map(|(&k, g)| (k, f(g))).collect(),
            adjacency: self.adjacency.clone(),
        }
    }

    pub fn to_f64(&self) -> IndefiniteMetricPolyhedron<f64> {
        self.map_lengths(Scalar::to_f64)
    }

    pub fn to_raw(&self) -> RawPolyhedron<S> {
        RawPolyhedron {
            vertices: self.vertices.clone(),
            maximal_simplices: self
                .simplices
                .iter()
                .map(|s| s.iter().map(|&v| self.vertices[v].clone()).collect())
                .collect(),
            squared_lengths: self
                .lengths
                .iter()
                .map(|(&(a, b), g)| (self.vertices[a].clone(), self.vertices[b].clone(), g.clone()))
                .collect(),
        }
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn edge_count(&self) -> usize {
        self.lengths.len()
    }

    pub fn vertex_ids(&self) -> &[String] {
        &self.vertices
    }

    pub fn vertex_id(&self, v: usize) -> &str {
        &self.vertices[v]
    }

    pub fn index_of(&self, id: &str) -> Option<usize> {
        self.index.get(id).copied()
    }

    pub fn maximal_simplices(&self) -> &[Vec<usize>] {
        &self.simplices
    }

    /// Dimension `n`: largest simplex cardinality minus one.
    pub fn dimension(&self) -> usize {
        self.simplices
            .iter()
            .map(Vec::len)
            .max()
            .unwrap_or(1)
            .saturating_sub(1)
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adjacency[v]
    }

    pub fn squared_length(&self, a: usize, b: usize) -> Option<&S> {
        self.lengths.get(&(a.min(b), a.max(b)))
    }

    /// Edges `(a, b, g)` with `a < b`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize, &S)> + '_ {
        self.lengths.iter().map(|(&(a, b), g)| (a, b, g))
    }

    pub fn skeleton_edges(&self) -> Vec<((usize, usize), S)> {
        self.edges().map(|(a, b, g)| ((a, b), g.clone())).collect()
    }

    pub fn vertex_degree(&self, id: &str) -> Result<usize, ComplexError> {
        let v = self
            .index_of(id)
            .ok_or_else(|| ComplexError::UnknownVertex(id.to_string()))?;
        Ok(self.degree(v))
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adjacency[v].len()
    }

    pub fn max_degree(&self) -> usize {
        self.adjacency.iter().map(Vec::len).max().unwrap_or(0)
    }

    pub fn degeneracy_ordering(&self) -> DegeneracyOrdering {
        degeneracy_ordering(&self.adjacency)
    }
}

/// Vertex ordering in which each vertex has at most `degeneracy` neighbors
/// placed before it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DegeneracyOrdering {
    pub order: Vec<usize>,
    /// Indexed by vertex.
    pub back_degree: Vec<usize>,
    pub degeneracy: usize,
    position: Vec<usize>,
}

impl DegeneracyOrdering {
    /// Wraps an arbitrary ordering, recomputing back-degrees from the graph.
    pub fn from_order(adjacency: &[Vec<usize>], order: Vec<usize>) -> Result<Self, ComplexError> {
        let n = adjacency.len();
        if order.len() != n {
            return Err(ComplexError::NotAPermutation);
        }
        let mut position = vec![usize::MAX; n];
        for (pos, &v) in order.iter().enumerate() {
            if v >= n || position[v] != usize::MAX {
                return Err(ComplexError::NotAPermutation);
            }
            position[v] = pos;
        }
        let back_degree: Vec<usize> = (0..n)
            .map(|v| adjacency[v].iter().filter(|&&u| position[u] < position[v]).count())
            .collect();
        let degeneracy = back_degree.iter().copied().max().unwrap_or(0);
        Ok(DegeneracyOrdering {
            order,
            back_degree,
            degeneracy,
            position,
        })
    }

    pub fn position(&self, v: usize) -> usize {
        self.position[v]
    }

    /// Neighbors of `v` that come earlier in the ordering, in ordering sequence.
    pub fn earlier_neighbors(&self, adjacency: &[usize], v: usize) -> Vec<usize> {
        let mut earlier: Vec<usize> = adjacency
            .iter()
            .copied()
            .filter(|&u| self.position[u] < self.position[v])
            .collect();
        earlier.sort_unstable_by_key(|&u| self.position[u]);
        earlier
    }
}

/// Smallest-last ordering: repeatedly delete a minimum-degree vertex (lowest
/// index on ties); the ordering is the deletion sequence reversed.
pub fn degeneracy_ordering(adjacency: &[Vec<usize>]) -> DegeneracyOrdering {
    let n = adjacency.len();
    let mut degree: Vec<usize> = adjacency.iter().map(Vec::len).collect();
    let max_deg = degree.iter().copied().max().unwrap_or(0);
    let mut buckets: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); max_deg + 1];
    for (v, &deg) in degree.iter().enumerate() {
        buckets[deg].insert(v);
    }
    let mut removed = vec![false; n];
    let mut back_degree = vec![0; n];
    let mut deletion = Vec::with_capacity(n);
    let mut floor = 0;
    for _ in 0..n {
        while buckets[floor].is_empty() {
            floor += 1;
        }
        let v = buckets[floor].pop_first().expect("non-empty bucket");
        removed[v] = true;
        back_degree[v] = floor;
        deletion.push(v);
        for &u in &adjacency[v] {
            if removed[u] {
                continue;
            }
            buckets[degree[u]].remove(&u);
            degree[u] -= 1;
            buckets[degree[u]].insert(u);
        }
        floor = floor.saturating_sub(1);
    }
    deletion.reverse();
    let mut position = vec![0; n];
    for (pos, &v) in deletion.iter().enumerate() {
        position[v] = pos;
    }
    let degeneracy = back_degree.iter().copied().max().unwrap_or(0);
    DegeneracyOrdering {
        order: deletion,
        back_degree,
        degeneracy,
        position,
    }
}

#[cfg(test)]
impl<S: Scalar> IndefiniteMetricPolyhedron<S> {
    pub(crate) fn adjacency(&self) -> &[Vec<usize>] {
        &self.adjacency
    }
}
