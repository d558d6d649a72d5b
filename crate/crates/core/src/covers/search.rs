//! Bitmask graph searches: maximum clique, exact coloring, and maximal
//! independent set enumeration. Graphs have at most 64 vertices.

use crate::hypergraph::Hypergraph;

pub(crate) type Mask = u64;

pub(crate) const MAX_BITS: usize = 64;

pub(crate) fn bit(v: usize) -> Mask {
    1 << v
}

pub(crate) fn full(n: usize) -> Mask {
    if n >= 64 {
        Mask::MAX
    } else {
        (1 << n) - 1
    }
}

pub(crate) fn members(mut m: Mask) -> impl Iterator<Item = usize> {
    std::iter::from_fn(move || {
        if m == 0 {
            None
        } else {
            let v = m.trailing_zeros() as usize;
            m &= m - 1;
            Some(v)
        }
    })
}

pub(crate) fn to_vec(m: Mask) -> Vec<usize> {
    members(m).collect()
}

/// Adjacency bitmasks of the hypergraph's adjacency relation.
pub(crate) fn adjacency(hg: &Hypergraph) -> Vec<Mask> {
    debug_assert!(hg.n() <= MAX_BITS);
    (0..hg.n())
        .map(|v| hg.neighbors(v).iter().fold(0, |m, &w| m | bit(w)))
        .collect()
}

pub(crate) fn complement(adj: &[Mask]) -> Vec<Mask> {
    let all = full(adj.len());
    adj.iter().enumerate().map(|(v, m)| all & !m & !bit(v)).collect()
}

/// A maximum clique, lexicographically smallest among those found first by
/// the search order.
pub(crate) fn max_clique(adj: &[Mask]) -> Mask {
    let mut best = 0;
    if !adj.is_empty() {
        expand(adj, 0, full(adj.len()), &mut best);
    }
    best
}

fn expand(adj: &[Mask], current: Mask, candidates: Mask, best: &mut Mask) {
    if candidates == 0 {
        if current.count_ones() > best.count_ones() {
            *best = current;
        }
        return;
    }
    let (order, bounds) = color_bound(adj, candidates);
    let mut p = candidates;
    for (&v, &bound) in order.iter().zip(&bounds).rev() {
        if current.count_ones() + bound <= best.count_ones() {
            return;
        }
        expand(adj, current | bit(v), p & adj[v], best);
        p &= !bit(v);
    }
}

/// Greedy sequential coloring of `candidates`; returns vertices in color
/// order with the running color count, an upper bound on the clique size
/// among the prefix.
fn color_bound(adj: &[Mask], candidates: Mask) -> (Vec<usize>, Vec<u32>) {
    let mut order = Vec::with_capacity(candidates.count_ones() as usize);
    let mut bounds = Vec::with_capacity(order.capacity());
    let mut uncolored = candidates;
    let mut color = 0;
    while uncolored != 0 {
        color += 1;
        let mut q = uncolored;
        while q != 0 {
            let v = q.trailing_zeros() as usize;
            q &= !bit(v) & !adj[v];
            uncolored &= !bit(v);
            order.push(v);
            bounds.push(color);
        }
    }
    (order, bounds)
}

/// Exact proper coloring with at most `k` colors, if one exists.
pub(crate) fn color_with(adj: &[Mask], k: usize) -> Option<Vec<usize>> {
    let n = adj.len();
    if n == 0 {
        return Some(Vec::new());
    }
    if k == 0 {
        return None;
    }
    let mut colors = vec![usize::MAX; n];
    if backtrack(adj, k, &mut colors, 0, n) {
        Some(colors)
    } else {
        None
    }
}

fn backtrack(adj: &[Mask], k: usize, colors: &mut [usize], used: usize, left: usize) -> bool {
    if left == 0 {
        return true;
    }
    // Most saturated vertex first, then highest degree, then lowest index.
    let mut pick = usize::MAX;
    let mut key = (0u32, 0u32);
    let mut pick_forbidden: u64 = 0;
    for v in 0..adj.len() {
        if colors[v] != usize::MAX {
            continue;
        }
        let forbidden = members(adj[v])
            .filter(|&w| colors[w] != usize::MAX)
            .fold(0u64, |m, w| m | (1 << colors[w]));
        let this = (forbidden.count_ones(), adj[v].count_ones());
        if pick == usize::MAX || this > key {
            pick = v;
            key = this;
            pick_forbidden = forbidden;
        }
    }
    let limit = (used + 1).min(k);
    for c in 0..limit {
        if pick_forbidden & (1 << c) != 0 {
            continue;
        }
        colors[pick] = c;
        if backtrack(adj, k, colors, used.max(c + 1), left - 1) {
            return true;
        }
    }
    colors[pick] = usize::MAX;
    false
}

/// 2-coloring by breadth-first search, if the graph is bipartite.
pub(crate) fn two_coloring(hg: &Hypergraph) -> Option<Vec<usize>> {
    let n = hg.n();
    let mut colors = vec![usize::MAX; n];
    for start in 0..n {
        if colors[start] != usize::MAX {
            continue;
        }
        colors[start] = 0;
        let mut queue = std::collections::VecDeque::from([start]);
        while let Some(v) = queue.pop_front() {
            for &w in hg.neighbors(v) {
                if colors[w] == usize::MAX {
                    colors[w] = 1 - colors[v];
                    queue.push_back(w);
                } else if colors[w] == colors[v] {
                    return None;
                }
            }
        }
    }
    Some(colors)
}

/// All maximal independent sets, each as a mask, in lexicographic order of
/// their sorted member lists. Stops with `None` once more than `cap` sets
/// have been found.
pub(crate) fn maximal_independent_sets(adj: &[Mask], cap: usize) -> Option<Vec<Mask>> {
    let comp = complement(adj);
    let mut out = Vec::new();
    if adj.is_empty() {
        return Some(out);
    }
    if !bron_kerbosch(&comp, 0, full(adj.len()), 0, cap, &mut out) {
        return None;
    }
    out.sort_by_key(|&m| to_vec(m));
    Some(out)
}

/// Maximal cliques of `g` extending `r`, pivoting on the vertex of `p | x`
/// with most neighbors in `p`.
fn bron_kerbosch(g: &[Mask], r: Mask, mut p: Mask, mut x: Mask, cap: usize, out: &mut Vec<Mask>) -> bool {
    if p == 0 {
        if x == 0 {
            out.push(r);
            return out.len() <= cap;
        }
        return true;
    }
    let pivot = members(p | x)
        .max_by_key(|&u| ((g[u] & p).count_ones(), std::cmp::Reverse(u)))
        .expect("p is nonempty");
    for v in members(p & !g[pivot]) {
        if !bron_kerbosch(g, r | bit(v), p & g[v], x & g[v], cap, out) {
            return false;
        }
        p &= !bit(v);
        x |= bit(v);
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hypergraph::family;

    fn brute_max_clique(adj: &[Mask]) -> u32 {
        let n = adj.len();
        (0..1u64 << n)
            .filter(|&s| members(s).all(|v| adj[v] & s == s & !bit(v)))
            .map(|s| s.count_ones())
            .max()
            .unwrap()
    }

    #[test]
    fn clique_matches_brute_force() {
        for (name, p) in [("cycle", 5), ("complete", 5), ("cycle", 6)] {
            let adj = adjacency(&family(name, &[p]).unwrap());
            assert_eq!(max_clique(&adj).count_ones(), brute_max_clique(&adj));
            let comp = complement(&adj);
            assert_eq!(max_clique(&comp).count_ones(), brute_max_clique(&comp));
        }
    }

    #[test]
    fn coloring_c5() {
        let adj = adjacency(&family("cycle", &[5]).unwrap());
        assert!(color_with(&adj, 2).is_none());
        let c = color_with(&adj, 3).unwrap();
        for v in 0..5 {
            for w in members(adj[v]) {
                assert_ne!(c[v], c[w]);
            }
        }
    }

    #[test]
    fn mis_of_c5() {
        let adj = adjacency(&family("cycle", &[5]).unwrap());
        let sets: Vec<_> = maximal_independent_sets(&adj, 100)
            .unwrap()
            .into_iter()
            .map(to_vec)
            .collect();
        assert_eq!(sets, vec![vec![0, 2], vec![0, 3], vec![1, 3], vec![1, 4], vec![2, 4]]);
        assert!(maximal_independent_sets(&adj, 3).is_none());
    }
}
