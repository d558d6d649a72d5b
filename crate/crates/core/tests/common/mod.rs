#![allow(dead_code)]

use hgverify::covers::{self, WeightedCover};
use hgverify::rational::ratio;
use hgverify::{Budget, Hypergraph};
use num_rational::BigRational;
use rand::seq::index::sample;
use rand::Rng;

/// Random hypergraph with `edges` hyperedges of order `1..=max_order`.
pub fn random_hypergraph<R: Rng>(rng: &mut R, n: usize, d: u32, edges: usize, max_order: usize) -> Hypergraph {
    let list: Vec<(Vec<usize>, u32)> = (0..edges)
        .map(|_| {
            let k = rng.random_range(1..=max_order.min(n));
            let vs = sample(rng, n, k).into_vec();
            (vs, rng.random_range(1..d))
        })
        .collect();
    Hypergraph::new(n, d, list).expect("valid random hypergraph")
}

/// Connected qubit hypergraph: a random spanning tree of hyperedges plus
/// distinct extras, all of order at least 2.
pub fn random_connected<R: Rng>(rng: &mut R, n: usize, max_order: usize) -> Hypergraph {
    let mut edges: Vec<Vec<usize>> = Vec::new();
    for v in 1..n {
        let k = rng.random_range(2..=max_order.min(v + 1));
        let mut e = sample(rng, v, k - 1).into_vec();
        e.push(v);
        edges.push(e);
    }
    for _ in 0..rng.random_range(0..n) {
        let k = rng.random_range(2..=max_order.min(n));
        edges.push(sample(rng, n, k).into_vec());
    }
    // Repeated qubit edges would cancel.
    for e in edges.iter_mut() {
        e.sort_unstable();
    }
    edges.sort();
    edges.dedup();
    Hypergraph::qubit(n, edges).expect("valid connected hypergraph")
}

/// One of: optimal LP cover, exact coloring, greedy coloring, singletons, or
/// a random weighted cover built from greedy maximal independent sets.
pub fn random_cover<R: Rng>(rng: &mut R, hg: &Hypergraph) -> WeightedCover {
    let budget = Budget::default();
    match rng.random_range(0..5) {
        0 => covers::independence_degree(hg, &budget).unwrap().witness,
        1 => WeightedCover::from_coloring(&covers::exact_invariants(hg, &budget).unwrap().optimal_coloring),
        2 => WeightedCover::from_coloring(&covers::greedy_coloring(hg)),
        3 => WeightedCover::uniform((0..hg.n()).map(|v| vec![v]).collect()).unwrap(),
        _ => {
            let mut sets: Vec<Vec<usize>> = Vec::new();
            let mut covered = vec![false; hg.n()];
            while covered.iter().any(|c| !c) {
                let start = (0..hg.n()).find(|&v| !covered[v]).unwrap();
                let mut set = vec![start];
                let mut order: Vec<usize> = (0..hg.n()).collect();
                for i in (1..order.len()).rev() {
                    order.swap(i, rng.random_range(0..=i));
                }
                for v in order {
                    if !set.contains(&v) && set.iter().all(|&u| !hg.adjacent(u, v)) {
                        set.push(v);
                    }
                }
                for &v in &set {
                    covered[v] = true;
                }
                set.sort_unstable();
                sets.push(set);
            }
            let raw: Vec<i64> = sets.iter().map(|_| rng.random_range(1..=5)).collect();
            let total: i64 = raw.iter().sum();
            let weights: Vec<BigRational> = raw.iter().map(|&w| ratio(w, total)).collect();
            WeightedCover::new(sets, weights).unwrap()
        }
    }
}
