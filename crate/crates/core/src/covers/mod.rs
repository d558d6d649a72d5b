//! Independent sets, colorings, weighted independence covers, and the
//! independence degree.

mod lp;
mod search;

use std::collections::BTreeMap;

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hypergraph::Hypergraph;
use crate::rational::{int, ratio, serde_rational, serde_rational_vec};
use crate::Budget;

use search::{adjacency, bit, to_vec, Mask, MAX_BITS};

/// Independent sets with probability weights.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WeightedCover {
    pub sets: Vec<Vec<usize>>,
    #[serde(with = "serde_rational_vec")]
    pub weights: Vec<BigRational>,
}

impl WeightedCover {
    /// Sorts each set, drops zero-weight sets, and rescales weights to sum
    /// to one. Does not look at any hypergraph; see [`WeightedCover::check`].
    pub fn new(sets: Vec<Vec<usize>>, weights: Vec<BigRational>) -> Result<Self> {
        if sets.len() != weights.len() {
            return Err(Error::BadWeights(format!(
                "{} sets but {} weights",
                sets.len(),
                weights.len()
            )));
        }
        if let Some(w) = weights.iter().find(|w| w.is_negative()) {
            return Err(Error::BadWeights(format!("negative weight {w}")));
        }
        let total: BigRational = weights.iter().cloned().sum();
        if total.is_zero() {
            return Err(Error::BadWeights("weights sum to zero".into()));
        }
        let mut out_sets = Vec::new();
        let mut out_weights = Vec::new();
        for (mut s, w) in sets.into_iter().zip(weights) {
            if w.is_zero() {
                continue;
            }
            if s.is_empty() {
                return Err(Error::EmptySet);
            }
            s.sort_unstable();
            out_sets.push(s);
            out_weights.push(w / &total);
        }
        Ok(WeightedCover {
            sets: out_sets,
            weights: out_weights,
        })
    }

    pub fn uniform(sets: Vec<Vec<usize>>) -> Result<Self> {
        let w = vec![BigRational::one(); sets.len()];
        WeightedCover::new(sets, w)
    }

    pub fn from_coloring(c: &Coloring) -> Self {
        WeightedCover::uniform(c.classes.clone()).expect("coloring classes are nonempty")
    }

    pub fn len(&self) -> usize {
        self.sets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sets.is_empty()
    }

    /// Checks independence of every set and that the sets cover all vertices.
    pub fn check(&self, hg: &Hypergraph) -> Result<()> {
        let mut covered = vec![false; hg.n()];
        for s in &self.sets {
            if !is_independent(hg, s)? {
                return Err(Error::NotIndependent { set: s.clone() });
            }
            for &v in s {
                covered[v] = true;
            }
        }
        match covered.iter().position(|c| !c) {
            Some(vertex) => Err(Error::NotACover { vertex }),
            None => Ok(()),
        }
    }

    /// Total weight of sets containing each vertex.
    pub fn coverage(&self, n: usize) -> Vec<BigRational> {
        let mut out = vec![BigRational::zero(); n];
        for (s, w) in self.sets.iter().zip(&self.weights) {
            for &v in s {
                if v < n {
                    out[v] += w;
                }
            }
        }
        out
    }
}

/// Partition of the vertices into independent color classes.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Coloring {
    pub classes: Vec<Vec<usize>>,
}

impl Coloring {
    /// Builds classes from a per-vertex color vector; colors are renumbered
    /// by first appearance so class order is canonical.
    pub fn from_colors(colors: &[usize]) -> Self {
        let mut map = BTreeMap::new();
        let mut classes: Vec<Vec<usize>> = Vec::new();
        for (v, &c) in colors.iter().enumerate() {
            let next = map.len();
            let idx = *map.entry(c).or_insert(next);
            if idx == classes.len() {
                classes.push(Vec::new());
            }
            classes[idx].push(v);
        }
        Coloring { classes }
    }

    pub fn colors(&self) -> usize {
        self.classes.len()
    }

    pub fn color_of(&self, n: usize) -> Vec<usize> {
        let mut out = vec![usize::MAX; n];
        for (c, class) in self.classes.iter().enumerate() {
            for &v in class {
                out[v] = c;
            }
        }
        out
    }

    pub fn check(&self, hg: &Hypergraph) -> Result<()> {
        let mut seen = vec![false; hg.n()];
        for class in &self.classes {
            if class.is_empty() {
                return Err(Error::EmptySet);
            }
            if !is_independent(hg, class)? {
                return Err(Error::NotIndependent { set: class.clone() });
            }
            for &v in class {
                if seen[v] {
                    return Err(Error::RepeatedVertex { vertex: v });
                }
                seen[v] = true;
            }
        }
        match seen.iter().position(|s| !s) {
            Some(vertex) => Err(Error::NotACover { vertex }),
            None => Ok(()),
        }
    }
}

/// Nonnegative weights on independent sets with every vertex covered at
/// least once in total.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FractionalColoring {
    pub sets: Vec<Vec<usize>>,
    #[serde(with = "serde_rational_vec")]
    pub values: Vec<BigRational>,
}

impl FractionalColoring {
    pub fn weight(&self) -> BigRational {
        self.values.iter().cloned().sum()
    }
}

pub fn is_independent(hg: &Hypergraph, set: &[usize]) -> Result<bool> {
    let set = hg.check_set(set)?;
    Ok(set
        .iter()
        .all(|&v| hg.neighbors(v).iter().all(|w| set.binary_search(w).is_err())))
}

/// Colors vertices by non-increasing degree (ties by index), each taking the
/// smallest color unused by its already-colored neighbors.
pub fn greedy_coloring(hg: &Hypergraph) -> Coloring {
    let n = hg.n();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&v| (std::cmp::Reverse(hg.neighbors(v).len()), v));
    let mut colors = vec![usize::MAX; n];
    for v in order {
        let mut used: Vec<bool> = vec![false; hg.neighbors(v).len() + 1];
        for &w in hg.neighbors(v) {
            if let Some(slot) = used.get_mut(colors[w]) {
                *slot = true;
            }
        }
        colors[v] = used.iter().position(|u| !u).expect("a free color exists");
    }
    let mut classes: Vec<Vec<usize>> = Vec::new();
    for (v, &c) in colors.iter().enumerate() {
        if classes.len() <= c {
            classes.resize(c + 1, Vec::new());
        }
        classes[c].push(v);
    }
    Coloring { classes }
}

/// `min_j` of the total weight of sets containing `j`.
pub fn cover_strength(hg: &Hypergraph, cover: &WeightedCover) -> Result<BigRational> {
    cover.check(hg)?;
    Ok(raw_strength(hg.n(), cover))
}

fn raw_strength(n: usize, cover: &WeightedCover) -> BigRational {
    cover.coverage(n).into_iter().min().unwrap_or_else(BigRational::zero)
}

/// The `n` sets `{j, j+2, ..., j+n-3}` (mod n) of an odd cycle, uniformly weighted.
pub fn odd_cycle_cover(n: usize) -> Result<WeightedCover> {
    if n < 5 || n.is_multiple_of(2) {
        return Err(Error::BadParams(format!("odd cycle cover needs odd n >= 5, got {n}")));
    }
    let sets = (0..n)
        .map(|j| (0..(n - 1) / 2).map(|t| (j + 2 * t) % n).collect())
        .collect();
    WeightedCover::uniform(sets)
}

/// `g(A) = mu(A) / s`.
pub fn cover_to_fractional_coloring(hg: &Hypergraph, cover: &WeightedCover) -> Result<FractionalColoring> {
    for s in &cover.sets {
        if !is_independent(hg, s)? {
            return Err(Error::NotIndependent { set: s.clone() });
        }
    }
    let s = raw_strength(hg.n(), cover);
    if s.is_zero() {
        return Err(Error::ZeroStrength);
    }
    Ok(FractionalColoring {
        sets: cover.sets.clone(),
        values: cover.weights.iter().map(|w| w / &s).collect(),
    })
}

/// `mu(A) = g(A) / w(g)`.
pub fn fractional_coloring_to_cover(hg: &Hypergraph, g: &FractionalColoring) -> Result<WeightedCover> {
    if g.sets.len() != g.values.len() {
        return Err(Error::BadWeights("sets and values differ in length".into()));
    }
    if g.values.iter().any(|v| v.is_negative()) {
        return Err(Error::BadWeights("negative value".into()));
    }
    let mut total = vec![BigRational::zero(); hg.n()];
    for (s, v) in g.sets.iter().zip(&g.values) {
        if !is_independent(hg, s)? {
            return Err(Error::NotIndependent { set: s.clone() });
        }
        for &x in s {
            total[x] += v;
        }
    }
    if let Some(vertex) = total.iter().position(|t| *t < BigRational::one()) {
        return Err(Error::InfeasibleColoring { vertex });
    }
    WeightedCover::new(g.sets.clone(), g.values.clone())
}

/// Which direction [`fractional_coloring_convert`] maps.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ConvertDirection {
    CoverToColoring,
    ColoringToCover,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum CoverOrColoring {
    Cover(WeightedCover),
    Coloring(FractionalColoring),
}

pub fn fractional_coloring_convert(
    hg: &Hypergraph,
    direction: ConvertDirection,
    object: &CoverOrColoring,
) -> Result<CoverOrColoring> {
    match (direction, object) {
        (ConvertDirection::CoverToColoring, CoverOrColoring::Cover(c)) => {
            cover_to_fractional_coloring(hg, c).map(CoverOrColoring::Coloring)
        }
        (ConvertDirection::ColoringToCover, CoverOrColoring::Coloring(g)) => {
            fractional_coloring_to_cover(hg, g).map(CoverOrColoring::Cover)
        }
        _ => Err(Error::BadParams("object does not match conversion direction".into())),
    }
}

/// An integer invariant known exactly or only within bounds.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Invariant {
    pub lower: usize,
    pub upper: usize,
    pub exact: bool,
}

impl Invariant {
    fn exact(v: usize) -> Self {
        Invariant {
            lower: v,
            upper: v,
            exact: true,
        }
    }

    fn bounds(lower: usize, upper: usize) -> Self {
        Invariant {
            lower,
            upper,
            exact: lower == upper,
        }
    }

    pub fn value(&self) -> Option<usize> {
        self.exact.then_some(self.lower)
    }
}

/// Exact independence number, clique number, and chromatic number.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExactInvariants {
    pub alpha: usize,
    pub clique: usize,
    pub chi: usize,
    pub max_independent_set: Vec<usize>,
    pub max_clique: Vec<usize>,
    pub optimal_coloring: Coloring,
}

fn check_bits(hg: &Hypergraph, limit: usize, what: &'static str) -> Result<()> {
    let cap = limit.min(MAX_BITS);
    Budget::check(what, hg.n() as u64, cap as u64)
}

/// Maximum independent set and maximum clique of the adjacency relation.
fn alpha_and_clique(hg: &Hypergraph, budget: &Budget) -> Result<(Mask, Mask)> {
    check_bits(hg, budget.exact_alpha, "exact independence number")?;
    let adj = adjacency(hg);
    let clique = search::max_clique(&adj);
    let indep = search::max_clique(&search::complement(&adj));
    Ok((indep, clique))
}

/// Exact chromatic number with an optimal coloring. Within `exact_chi` this
/// searches; beyond it only the edgeless, bipartite, and greedy-equals-clique
/// cases are settled.
fn exact_chi(hg: &Hypergraph, clique: usize, budget: &Budget) -> Result<Coloring> {
    let greedy = greedy_coloring(hg);
    if !hg.has_nontrivial_edge() {
        return Ok(greedy);
    }
    if let Some(colors) = search::two_coloring(hg) {
        return Ok(Coloring::from_colors(&colors));
    }
    if greedy.colors() == clique {
        return Ok(greedy);
    }
    check_bits(hg, budget.exact_chi, "exact chromatic number")?;
    let adj = adjacency(hg);
    for k in clique.max(1)..greedy.colors() {
        if let Some(colors) = search::color_with(&adj, k) {
            return Ok(Coloring::from_colors(&colors));
        }
    }
    Ok(greedy)
}

pub fn exact_invariants(hg: &Hypergraph, budget: &Budget) -> Result<ExactInvariants> {
    let (indep, clique) = alpha_and_clique(hg, budget)?;
    let coloring = exact_chi(hg, clique.count_ones() as usize, budget)?;
    Ok(ExactInvariants {
        alpha: indep.count_ones() as usize,
        clique: clique.count_ones() as usize,
        chi: coloring.colors(),
        max_independent_set: to_vec(indep),
        max_clique: to_vec(clique),
        optimal_coloring: coloring,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GammaMethod {
    /// Exact LP over all maximal independent sets.
    Lp,
    /// Chromatic number equals clique number, which pins gamma to 1/chi.
    Sandwich,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IndependenceDegree {
    #[serde(with = "serde_rational")]
    pub gamma: BigRational,
    #[serde(with = "serde_rational")]
    pub chi_f: BigRational,
    pub witness: WeightedCover,
    pub method: GammaMethod,
    /// Number of maximal independent sets in the LP, when it was solved.
    pub columns: Option<usize>,
    /// Optimal dual solution (a fractional clique), when the LP was solved.
    #[serde(with = "serde_rational_vec")]
    pub fractional_clique: Vec<BigRational>,
}

/// Independence degree `gamma = 1/chi_f` with an optimal weighted cover.
pub fn independence_degree(hg: &Hypergraph, budget: &Budget) -> Result<IndependenceDegree> {
    match lp_independence_degree(hg, budget) {
        Err(e @ Error::BudgetExceeded { .. }) => sandwich(hg, budget).ok_or(e),
        other => other,
    }
}

fn lp_independence_degree(hg: &Hypergraph, budget: &Budget) -> Result<IndependenceDegree> {
    check_bits(hg, budget.lp, "maximal independent set enumeration")?;
    let n = hg.n();
    let adj = adjacency(hg);
    let sets = search::maximal_independent_sets(&adj, budget.lp_columns).ok_or(Error::BudgetExceeded {
        what: "maximal independent sets",
        size: budget.lp_columns as u64 + 1,
        limit: budget.lp_columns as u64,
    })?;
    let sol = lp::solve(n, &sets);
    let mut g = sol.values.clone();
    for (j, v) in &sol.singletons {
        let host = sets
            .iter()
            .position(|&s| s & bit(*j) != 0)
            .expect("every vertex lies in a maximal independent set");
        g[host] += v;
    }
    let w = sol.objective.clone();
    let (chosen, weights): (Vec<Vec<usize>>, Vec<BigRational>) = sets
        .iter()
        .zip(&g)
        .filter(|(_, v)| !v.is_zero())
        .map(|(&s, v)| (to_vec(s), v / &w))
        .unzip();
    let witness = WeightedCover::new(chosen, weights)?;
    Ok(IndependenceDegree {
        gamma: w.recip(),
        chi_f: w,
        witness,
        method: GammaMethod::Lp,
        columns: Some(sets.len()),
        fractional_clique: sol.dual,
    })
}

fn sandwich(hg: &Hypergraph, budget: &Budget) -> Option<IndependenceDegree> {
    let ex = exact_invariants(hg, budget).ok()?;
    if ex.chi != ex.clique {
        return None;
    }
    let chi = int(ex.chi as i64);
    Some(IndependenceDegree {
        gamma: chi.recip(),
        chi_f: chi,
        witness: WeightedCover::from_coloring(&ex.optimal_coloring),
        method: GammaMethod::Sandwich,
        columns: None,
        fractional_clique: Vec::new(),
    })
}

/// Everything known about the invariants of a hypergraph within budget.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InvariantBundle {
    pub n: usize,
    pub max_degree: usize,
    pub alpha: Invariant,
    pub clique: Invariant,
    pub chi: Invariant,
    pub greedy_colors: usize,
    pub gamma: Option<IndependenceDegree>,
    /// Whether the chain `1/(D+1) <= 1/chi <= gamma <= min(alpha/n, 1/clique)`
    /// holds; `None` when some quantity is not known exactly.
    pub chain_holds: Option<bool>,
}

pub fn invariant_bundle(hg: &Hypergraph, budget: &Budget) -> InvariantBundle {
    let n = hg.n();
    let max_degree = hg.structure().max_degree;
    let greedy = greedy_coloring(hg);
    let order_lower = if hg.has_nontrivial_edge() { 2 } else { 1 };
    let (alpha, clique, chi) = match alpha_and_clique(hg, budget) {
        Ok((indep, cl)) => {
            let cl = cl.count_ones() as usize;
            let chi = match exact_chi(hg, cl, budget) {
                Ok(c) => Invariant::exact(c.colors()),
                Err(_) => Invariant::bounds(cl, greedy.colors()),
            };
            (Invariant::exact(indep.count_ones() as usize), Invariant::exact(cl), chi)
        }
        Err(_) => {
            let largest_class = greedy.classes.iter().map(Vec::len).max().unwrap_or(1);
            let chi = match search::two_coloring(hg) {
                Some(_) if order_lower == 2 => Invariant::exact(2),
                _ if order_lower == 1 => Invariant::exact(1),
                _ => Invariant::bounds(order_lower, greedy.colors()),
            };
            (
                Invariant::bounds(largest_class, n),
                Invariant::bounds(order_lower, (max_degree + 1).min(chi.upper)),
                chi,
            )
        }
    };
    let gamma = independence_degree(hg, budget).ok();
    let chain_holds = match (alpha.value(), clique.value(), chi.value(), &gamma) {
        (Some(a), Some(w), Some(c), Some(g)) => Some(
            ratio(1, max_degree as i64 + 1) <= ratio(1, c as i64)
                && ratio(1, c as i64) <= g.gamma
                && g.gamma <= ratio(a as i64, n as i64)
                && g.gamma <= ratio(1, w as i64),
        ),
        _ => None,
    };
    InvariantBundle {
        n,
        max_degree,
        alpha,
        clique,
        chi,
        greedy_colors: greedy.colors(),
        gamma,
        chain_holds,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hypergraph::family;

    #[test]
    fn independence_examples() {
        let tri = family("complete", &[3]).unwrap();
        assert!(!is_independent(&tri, &[0, 1]).unwrap());
        let edge = family("single-edge", &[3]).unwrap();
        assert!(is_independent(&edge, &[0]).unwrap());
        let c5 = family("cycle", &[5]).unwrap();
        assert!(is_independent(&c5, &[0, 2]).unwrap());
        assert!(is_independent(&c5, &[9]).is_err());
    }

    #[test]
    fn c5_gamma_and_witness() {
        let c5 = family("cycle", &[5]).unwrap();
        let g = independence_degree(&c5, &Budget::default()).unwrap();
        assert_eq!(g.gamma, ratio(2, 5));
        assert_eq!(cover_strength(&c5, &g.witness).unwrap(), ratio(2, 5));
    }

    #[test]
    fn edgeless_gamma_is_one() {
        let hg = family("edgeless", &[4]).unwrap();
        let g = independence_degree(&hg, &Budget::default()).unwrap();
        assert_eq!(g.gamma, int(1));
        assert_eq!(g.witness.sets, vec![vec![0, 1, 2, 3]]);
        assert_eq!(greedy_coloring(&hg).colors(), 1);
    }

    #[test]
    fn odd_cycle_covers() {
        for (n, s) in [(5, ratio(2, 5)), (7, ratio(3, 7))] {
            let hg = family("cycle", &[n]).unwrap();
            assert_eq!(cover_strength(&hg, &odd_cycle_cover(n).unwrap()).unwrap(), s);
        }
        let c9 = odd_cycle_cover(9).unwrap();
        for v in 0..9 {
            assert_eq!(c9.sets.iter().filter(|s| s.contains(&v)).count(), 4);
        }
        assert!(odd_cycle_cover(6).is_err());
    }

    #[test]
    fn missing_vertex_is_not_a_cover() {
        let hg = family("cycle", &[6]).unwrap();
        let cover = WeightedCover::uniform(vec![vec![0, 2], vec![1, 5]]).unwrap();
        assert_eq!(cover_strength(&hg, &cover).unwrap_err(), Error::NotACover { vertex: 3 });
    }

    #[test]
    fn conversions_round_trip() {
        let hg = family("cycle", &[6]).unwrap();
        let cover = WeightedCover::uniform(vec![vec![0, 2, 4], vec![1, 3, 5]]).unwrap();
        let g = cover_to_fractional_coloring(&hg, &cover).unwrap();
        assert_eq!(g.values, vec![int(1), int(1)]);
        assert_eq!(g.weight(), int(2));
        assert_eq!(fractional_coloring_to_cover(&hg, &g).unwrap(), cover);
        let bad = FractionalColoring {
            sets: vec![vec![0, 2, 4]],
            values: vec![int(1)],
        };
        assert_eq!(
            fractional_coloring_to_cover(&hg, &bad).unwrap_err(),
            Error::InfeasibleColoring { vertex: 1 }
        );
    }

    #[test]
    fn exact_values_for_small_graphs() {
        let b = Budget::default();
        let c5 = exact_invariants(&family("cycle", &[5]).unwrap(), &b).unwrap();
        assert_eq!((c5.alpha, c5.clique, c5.chi), (2, 2, 3));
        let k4 = exact_invariants(&family("complete", &[4]).unwrap(), &b).unwrap();
        assert_eq!((k4.alpha, k4.clique, k4.chi), (1, 4, 4));
        let uj = exact_invariants(&family("union-jack-chain", &[3]).unwrap(), &b).unwrap();
        assert_eq!(uj.chi, 3);
    }
}
