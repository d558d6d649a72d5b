//! Standard hypergraph families with fixed row-major vertex numbering.

use std::fmt;
use std::str::FromStr;

use super::Hypergraph;
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Family {
    /// `rows cols` square-lattice graph.
    Square,
    /// `k len`: k-dimensional hypercubic lattice graph with `len` sites per axis.
    Cubic,
    /// `rows cols` triangular-lattice patch (right, down, and down-right bonds).
    Triangular,
    /// `n` cycle graph; `EvenCycle` and `OddCycle` also check parity.
    Cycle,
    EvenCycle,
    OddCycle,
    /// `n` complete graph.
    Complete,
    /// `n` vertices and no edges.
    Edgeless,
    /// `n`: order-3 edges on every three consecutive vertices.
    Cluster1d,
    /// `rows cols`: order-3 edges on every three consecutive vertices of a row or column.
    Cluster2d,
    /// `cells`: a 1 x cells strip of Union Jack plaquettes.
    UnionJackChain,
    /// `m`: an m x m Union Jack lattice.
    UnionJackLattice,
    /// `rows cols` Union Jack patch.
    UnionJack,
    /// `n`: every triple of vertices.
    CompleteOrder3,
    /// `n`: n/3 disjoint order-3 edges.
    DisjointTriples,
    /// `k`: one order-k edge on k vertices.
    SingleEdge,
}

const NAMES: &[(&str, Family)] = &[
    ("square", Family::Square),
    ("cubic", Family::Cubic),
    ("triangular", Family::Triangular),
    ("cycle", Family::Cycle),
    ("even-cycle", Family::EvenCycle),
    ("odd-cycle", Family::OddCycle),
    ("complete", Family::Complete),
    ("edgeless", Family::Edgeless),
    ("cluster-1d", Family::Cluster1d),
    ("cluster-2d", Family::Cluster2d),
    ("union-jack-chain", Family::UnionJackChain),
    ("union-jack-lattice", Family::UnionJackLattice),
    ("union-jack", Family::UnionJack),
    ("complete-order-3", Family::CompleteOrder3),
    ("disjoint-triples", Family::DisjointTriples),
    ("single-edge", Family::SingleEdge),
];

impl Family {
    pub fn all() -> impl Iterator<Item = Family> {
        NAMES.iter().map(|(_, f)| *f)
    }

    pub fn name(self) -> &'static str {
        NAMES.iter().find(|(_, f)| *f == self).map(|(n, _)| *n).unwrap_or("?")
    }

    pub fn arity(self) -> usize {
        match self {
            Family::Square | Family::Cubic | Family::Triangular | Family::Cluster2d | Family::UnionJack => 2,
            _ => 1,
        }
    }

    pub fn build(self, params: &[usize]) -> Result<Hypergraph> {
        if params.len() != self.arity() {
            return Err(bad(format!(
                "{} takes {} parameter(s), got {}",
                self.name(),
                self.arity(),
                params.len()
            )));
        }
        let p = |i: usize| params[i];
        match self {
            Family::Square => {
                let (r, c) = positive2(p(0), p(1))?;
                let at = |i: usize, j: usize| i * c + j;
                let mut edges = Vec::new();
                for i in 0..r {
                    for j in 0..c {
                        if j + 1 < c {
                            edges.push(vec![at(i, j), at(i, j + 1)]);
                        }
                        if i + 1 < r {
                            edges.push(vec![at(i, j), at(i + 1, j)]);
                        }
                    }
                }
                Hypergraph::qubit(r * c, edges)
            }
            Family::Cubic => {
                let (k, len) = positive2(p(0), p(1))?;
                let n = len
                    .checked_pow(k as u32)
                    .filter(|n| *n <= 1 << 24)
                    .ok_or_else(|| bad("cubic lattice too large".into()))?;
                let mut edges = Vec::new();
                for v in 0..n {
                    // Last coordinate varies fastest.
                    let mut stride = 1;
                    for _ in 0..k {
                        let coord = (v / stride) % len;
                        if coord + 1 < len {
                            edges.push(vec![v, v + stride]);
                        }
                        stride *= len;
                    }
                }
                Hypergraph::qubit(n, edges)
            }
            Family::Triangular => {
                let (r, c) = positive2(p(0), p(1))?;
                let at = |i: usize, j: usize| i * c + j;
                let mut edges = Vec::new();
                for i in 0..r {
                    for j in 0..c {
                        if j + 1 < c {
                            edges.push(vec![at(i, j), at(i, j + 1)]);
                        }
                        if i + 1 < r {
                            edges.push(vec![at(i, j), at(i + 1, j)]);
                        }
                        if i + 1 < r && j + 1 < c {
                            edges.push(vec![at(i, j), at(i + 1, j + 1)]);
                        }
                    }
                }
                Hypergraph::qubit(r * c, edges)
            }
            Family::Cycle | Family::EvenCycle | Family::OddCycle => {
                let n = p(0);
                if n < 3 {
                    return Err(bad("a cycle needs at least 3 vertices".into()));
                }
                if self == Family::EvenCycle && n % 2 == 1 {
                    return Err(bad("even-cycle needs an even length".into()));
                }
                if self == Family::OddCycle && (n % 2 == 0 || n < 5) {
                    return Err(bad("odd-cycle needs an odd length of at least 5".into()));
                }
                Hypergraph::qubit(n, (0..n).map(|j| vec![j, (j + 1) % n]))
            }
            Family::Complete => {
                let n = positive(p(0))?;
                let edges = (0..n).flat_map(|a| (a + 1..n).map(move |b| vec![a, b]));
                Hypergraph::qubit(n, edges)
            }
            Family::Edgeless => Hypergraph::qubit(positive(p(0))?, Vec::<Vec<usize>>::new()),
            Family::Cluster1d => {
                let n = p(0);
                if n < 3 {
                    return Err(bad("cluster-1d needs at least 3 vertices".into()));
                }
                Hypergraph::qubit(n, (0..n - 2).map(|j| vec![j, j + 1, j + 2]))
            }
            Family::Cluster2d => {
                let (r, c) = positive2(p(0), p(1))?;
                if r.max(c) < 3 {
                    return Err(bad("cluster-2d needs a side of length at least 3".into()));
                }
                let at = |i: usize, j: usize| i * c + j;
                let mut edges = Vec::new();
                for i in 0..r {
                    for j in 0..c {
                        if j + 2 < c {
                            edges.push(vec![at(i, j), at(i, j + 1), at(i, j + 2)]);
                        }
                        if i + 2 < r {
                            edges.push(vec![at(i, j), at(i + 1, j), at(i + 2, j)]);
                        }
                    }
                }
                Hypergraph::qubit(r * c, edges)
            }
            Family::UnionJackChain => union_jack(1, positive(p(0))?),
            Family::UnionJackLattice => {
                let m = positive(p(0))?;
                union_jack(m, m)
            }
            Family::UnionJack => {
                let (r, c) = positive2(p(0), p(1))?;
                union_jack(r, c)
            }
            Family::CompleteOrder3 => {
                let n = p(0);
                if n < 3 {
                    return Err(bad("complete-order-3 needs at least 3 vertices".into()));
                }
                let mut edges = Vec::new();
                for a in 0..n {
                    for b in a + 1..n {
                        for c in b + 1..n {
                            edges.push(vec![a, b, c]);
                        }
                    }
                }
                Hypergraph::qubit(n, edges)
            }
            Family::DisjointTriples => {
                let n = p(0);
                if n == 0 || n % 3 != 0 {
                    return Err(bad("disjoint-triples needs a positive multiple of 3".into()));
                }
                Hypergraph::qubit(n, (0..n / 3).map(|t| vec![3 * t, 3 * t + 1, 3 * t + 2]))
            }
            Family::SingleEdge => {
                let k = positive(p(0))?;
                Hypergraph::qubit(k, [(0..k).collect::<Vec<_>>()])
            }
        }
    }
}

/// Union Jack patch of `rows x cols` plaquettes. Vertices are the plaquette
/// corners and centers, numbered row-major on the doubled grid.
fn union_jack(rows: usize, cols: usize) -> Result<Hypergraph> {
    let width = 2 * cols + 1;
    let height = 2 * rows + 1;
    let mut index = vec![usize::MAX; width * height];
    let mut n = 0;
    for y in 0..height {
        for x in 0..width {
            if x % 2 == y % 2 {
                index[y * width + x] = n;
                n += 1;
            }
        }
    }
    let at = |y: usize, x: usize| index[y * width + x];
    let mut edges = Vec::new();
    for i in 0..rows {
        for j in 0..cols {
            let (y, x) = (2 * i, 2 * j);
            let c = at(y + 1, x + 1);
            let tl = at(y, x);
            let tr = at(y, x + 2);
            let bl = at(y + 2, x);
            let br = at(y + 2, x + 2);
            edges.push(vec![c, tl, tr]);
            edges.push(vec![c, tr, br]);
            edges.push(vec![c, br, bl]);
            edges.push(vec![c, bl, tl]);
        }
    }
    Hypergraph::qubit(n, edges)
}

fn bad(message: String) -> Error {
    Error::BadParams(message)
}

fn positive(v: usize) -> Result<usize> {
    if v == 0 {
        Err(bad("size parameters must be positive".into()))
    } else {
        Ok(v)
    }
}

fn positive2(a: usize, b: usize) -> Result<(usize, usize)> {
    Ok((positive(a)?, positive(b)?))
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        NAMES
            .iter()
            .find(|(n, _)| *n == s)
            .map(|(_, f)| *f)
            .ok_or_else(|| bad(format!("unknown family {s:?}")))
    }
}

/// Builds a family by name, e.g. `family("union-jack-lattice", &[2])`.
pub fn family(name: &str, params: &[usize]) -> Result<Hypergraph> {
    name.parse::<Family>()?.build(params)
}
