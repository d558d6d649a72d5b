//! Multi-hypergraphs over a shared local dimension.
//!
//! A [`Hypergraph`] is always canonical: hyperedges are sorted vertex lists in
//! lexicographic order, duplicates are merged by adding multiplicities mod `d`,
//! and edges whose merged multiplicity vanishes are dropped.

mod families;
mod format;

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use families::{family, Family};
pub use format::{parse_hypergraph, parse_json, parse_text, RawEdge, RawHypergraph};

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Hyperedge {
    vertices: Vec<usize>,
    multiplicity: u32,
}

impl Hyperedge {
    pub fn vertices(&self) -> &[usize] {
        &self.vertices
    }

    pub fn multiplicity(&self) -> u32 {
        self.multiplicity
    }

    pub fn order(&self) -> usize {
        self.vertices.len()
    }

    pub fn contains(&self, v: usize) -> bool {
        self.vertices.binary_search(&v).is_ok()
    }
}

#[derive(Clone, Debug)]
pub struct Hypergraph {
    n: usize,
    d: u32,
    edges: Vec<Hyperedge>,
    adjacency: Vec<Vec<usize>>,
}

impl PartialEq for Hypergraph {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && self.d == other.d && self.edges == other.edges
    }
}

impl Eq for Hypergraph {}

/// Degree data of a hypergraph.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StructureReport {
    pub degrees: Vec<usize>,
    pub max_degree: usize,
    /// Largest hyperedge cardinality, 0 when there are no hyperedges.
    pub order: usize,
    pub components: Vec<Vec<usize>>,
}

impl Hypergraph {
    /// Builds a canonical hypergraph from `(vertices, multiplicity)` pairs.
    ///
    /// Every raw multiplicity must already be a nonzero residue in `1..d`;
    /// duplicate vertex sets are then merged mod `d`.
    pub fn new<I>(n: usize, d: u32, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Vec<usize>, u32)>,
    {
        if d < 2 {
            return Err(Error::BadDimension(d));
        }
        if n == 0 {
            return Err(Error::BadParams("a hypergraph needs at least one vertex".into()));
        }
        let mut merged: BTreeMap<Vec<usize>, u64> = BTreeMap::new();
        for (mut vertices, m) in edges {
            if vertices.is_empty() {
                return Err(Error::EmptyEdge);
            }
            if m == 0 || m >= d {
                return Err(Error::BadMultiplicity {
                    multiplicity: m as u64,
                    dim: d,
                });
            }
            vertices.sort_unstable();
            for w in vertices.windows(2) {
                if w[0] == w[1] {
                    return Err(Error::RepeatedVertex { vertex: w[0] });
                }
            }
            if let Some(&v) = vertices.last() {
                if v >= n {
                    return Err(Error::VertexOutOfRange { vertex: v, n });
                }
            }
            let slot = merged.entry(vertices).or_insert(0);
            *slot = (*slot + m as u64) % d as u64;
        }
        let edges: Vec<Hyperedge> = merged
            .into_iter()
            .filter(|(_, m)| *m != 0)
            .map(|(vertices, m)| Hyperedge {
                vertices,
                multiplicity: m as u32,
            })
            .collect();
        Ok(Self::from_canonical(n, d, edges))
    }

    /// Qubit hypergraph with every multiplicity equal to one.
    pub fn qubit<I, E>(n: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = E>,
        E: AsRef<[usize]>,
    {
        Self::new(n, 2, edges.into_iter().map(|e| (e.as_ref().to_vec(), 1)))
    }

    fn from_canonical(n: usize, d: u32, edges: Vec<Hyperedge>) -> Self {
        let mut adj: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); n];
        for e in &edges {
            for &a in &e.vertices {
                for &b in &e.vertices {
                    if a != b {
                        adj[a].insert(b);
                    }
                }
            }
        }
        Hypergraph {
            n,
            d,
            edges,
            adjacency: adj.into_iter().map(|s| s.into_iter().collect()).collect(),
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> u32 {
        self.d
    }

    pub fn edges(&self) -> &[Hyperedge] {
        &self.edges
    }

    /// Sorted neighbors of `v`. Singleton hyperedges contribute nothing.
    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adjacency[v]
    }

    pub fn adjacent(&self, a: usize, b: usize) -> bool {
        a != b && self.adjacency[a].binary_search(&b).is_ok()
    }

    pub fn order(&self) -> usize {
        self.edges.iter().map(Hyperedge::order).max().unwrap_or(0)
    }

    /// Whether any hyperedge of order at least two exists.
    pub fn has_nontrivial_edge(&self) -> bool {
        self.edges.iter().any(|e| e.order() >= 2)
    }

    pub fn check_vertex(&self, v: usize) -> Result<()> {
        if v < self.n {
            Ok(())
        } else {
            Err(Error::VertexOutOfRange { vertex: v, n: self.n })
        }
    }

    /// Validates a vertex set and returns it sorted.
    pub fn check_set(&self, set: &[usize]) -> Result<Vec<usize>> {
        let mut s = set.to_vec();
        s.sort_unstable();
        for w in s.windows(2) {
            if w[0] == w[1] {
                return Err(Error::RepeatedVertex { vertex: w[0] });
            }
        }
        for &v in &s {
            self.check_vertex(v)?;
        }
        Ok(s)
    }

    pub fn structure(&self) -> StructureReport {
        let degrees: Vec<usize> = self.adjacency.iter().map(Vec::len).collect();
        StructureReport {
            max_degree: degrees.iter().copied().max().unwrap_or(0),
            degrees,
            order: self.order(),
            components: self.components(),
        }
    }

    /// Connected components of the adjacency relation, each sorted, ordered
    /// by smallest vertex.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.n];
        let mut out = Vec::new();
        for start in 0..self.n {
            if seen[start] {
                continue;
            }
            seen[start] = true;
            let mut comp = vec![start];
            let mut queue = VecDeque::from([start]);
            while let Some(v) = queue.pop_front() {
                for &w in &self.adjacency[v] {
                    if !seen[w] {
                        seen[w] = true;
                        comp.push(w);
                        queue.push_back(w);
                    }
                }
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out
    }

    pub fn is_connected(&self) -> bool {
        self.components().len() == 1
    }

    /// Vertices adjacent to at least one member of `set`.
    pub fn neighborhood(&self, set: &[usize]) -> Result<Vec<usize>> {
        let set = self.check_set(set)?;
        let mut out = BTreeSet::new();
        for &v in &set {
            out.extend(self.adjacency[v].iter().copied());
        }
        Ok(out.into_iter().collect())
    }

    /// Sub-hypergraph induced on `vertices`, relabelled to `0..len` in the
    /// given (sorted) order. Hyperedges not contained in the set are dropped.
    pub fn induced(&self, vertices: &[usize]) -> Result<Hypergraph> {
        let vs = self.check_set(vertices)?;
        let index: BTreeMap<usize, usize> = vs.iter().enumerate().map(|(i, &v)| (v, i)).collect();
        let edges = self.edges.iter().filter_map(|e| {
            e.vertices
                .iter()
                .map(|v| index.get(v).copied())
                .collect::<Option<Vec<_>>>()
                .map(|vs| (vs, e.multiplicity))
        });
        Hypergraph::new(vs.len().max(1), self.d, edges)
    }

    /// Disjoint union; vertices of `other` are shifted by `self.n()`.
    pub fn disjoint_union(&self, other: &Hypergraph) -> Result<Hypergraph> {
        if self.d != other.d {
            return Err(Error::BadParams("disjoint union needs equal local dimensions".into()));
        }
        let shift = self.n;
        let edges = self.edges.iter().map(|e| (e.vertices.clone(), e.multiplicity)).chain(
            other
                .edges
                .iter()
                .map(|e| (e.vertices.iter().map(|v| v + shift).collect(), e.multiplicity)),
        );
        Hypergraph::new(self.n + other.n, self.d, edges)
    }

    pub fn to_raw(&self) -> RawHypergraph {
        RawHypergraph {
            dim: self.d,
            vertices: self.n,
            edges: self
                .edges
                .iter()
                .map(|e| RawEdge {
                    v: e.vertices.clone(),
                    m: e.multiplicity,
                })
                .collect(),
        }
    }

    pub fn from_raw(raw: &RawHypergraph) -> Result<Self> {
        Hypergraph::new(raw.vertices, raw.dim, raw.edges.iter().map(|e| (e.v.clone(), e.m)))
    }
}

/// Checks every invariant of a raw hypergraph description without keeping
/// the canonical form.
pub fn validate(raw: &RawHypergraph) -> Result<()> {
    Hypergraph::from_raw(raw).map(|_| ())
}
