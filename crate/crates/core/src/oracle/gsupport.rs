//! Number of Pauli operators with nonzero expectation on a qubit hypergraph
//! state.
//!
//! For a phase function `f`, the expectation of `W_{x,z}` is proportional to
//! the integer `sum_u (-1)^(f(u) + f(u+x) + z.u)`. All routes here work with
//! that integer or with the rank of the quadratic form it reduces to.

use num_bigint::BigUint;
use num_traits::One;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hypergraph::Hypergraph;
use crate::Budget;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GSupportMethod {
    /// Walsh-Hadamard transform for every shift.
    BruteForce,
    /// Closed forms per connected component.
    Analytic,
    /// `sum_x 2^rank(A_x)` for phase functions of degree at most 3.
    Rank,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct GSupport {
    #[serde(with = "biguint_string")]
    pub g: BigUint,
    pub method: GSupportMethod,
}

mod biguint_string {
    use num_bigint::BigUint;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &BigUint, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&v.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigUint, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

fn require_qubit(hg: &Hypergraph) -> Result<()> {
    if hg.dim() != 2 {
        return Err(Error::NotQubit(hg.dim()));
    }
    Ok(())
}

/// Parity of `f(u)` for every `u`, with bit `j` of `u` standing for vertex `j`.
fn phase_table(hg: &Hypergraph) -> Vec<u8> {
    let masks: Vec<usize> = hg
        .edges()
        .iter()
        .map(|e| e.vertices().iter().fold(0, |m, &v| m | 1 << v))
        .collect();
    (0..1usize << hg.n())
        .map(|u| masks.iter().filter(|&&m| u & m == m).count() as u8 & 1)
        .collect()
}

fn walsh_hadamard(v: &mut [i64]) {
    let mut h = 1;
    while h < v.len() {
        for block in v.chunks_mut(2 * h) {
            let (lo, hi) = block.split_at_mut(h);
            for (a, b) in lo.iter_mut().zip(hi.iter_mut()) {
                let (x, y) = (*a, *b);
                *a = x + y;
                *b = x - y;
            }
        }
        h *= 2;
    }
}

/// For each shift `x`, the exact character sums over all `z`.
fn character_sums(hg: &Hypergraph, x: usize, table: &[u8]) -> Vec<i64> {
    let mut s: Vec<i64> = (0..table.len())
        .map(|u| if table[u] ^ table[u ^ x] == 0 { 1 } else { -1 })
        .collect();
    walsh_hadamard(&mut s);
    debug_assert_eq!(s.len(), 1 << hg.n());
    s
}

pub fn char_support_brute(hg: &Hypergraph, budget: &Budget) -> Result<GSupport> {
    require_qubit(hg)?;
    Budget::check("characteristic support qubits", hg.n() as u64, budget.gsupport as u64)?;
    let table = phase_table(hg);
    let g: u64 = (0..table.len())
        .into_par_iter()
        .map(|x| character_sums(hg, x, &table).iter().filter(|&&c| c != 0).count() as u64)
        .sum();
    Ok(GSupport {
        g: BigUint::from(g),
        method: GSupportMethod::BruteForce,
    })
}

fn gf2_rank(mut rows: Vec<u64>) -> u32 {
    let mut rank = 0;
    for bit in 0..64 {
        let mask = 1u64 << bit;
        let Some(p) = (rank as usize..rows.len()).find(|&i| rows[i] & mask != 0) else {
            continue;
        };
        rows.swap(rank as usize, p);
        let pivot = rows[rank as usize];
        for (i, r) in rows.iter_mut().enumerate() {
            if i != rank as usize && *r & mask != 0 {
                *r ^= pivot;
            }
        }
        rank += 1;
    }
    rank
}

/// Shifting a cubic phase function by `x` leaves a quadratic form whose
/// alternating matrix `A_x` collects, for every order-3 edge `{a,b,c}`, the
/// pair `{b,c}` when `x_a = 1` (and symmetrically). Its character sums are
/// nonzero on exactly `2^rank(A_x)` values of `z`.
pub fn char_support_fast(hg: &Hypergraph, budget: &Budget) -> Result<GSupport> {
    require_qubit(hg)?;
    if hg.order() > 3 {
        return Err(Error::OrderTooHigh(hg.order()));
    }
    Budget::check("rank-route qubits", hg.n() as u64, budget.gsupport_fast as u64)?;
    let n = hg.n();
    let triples: Vec<[usize; 3]> = hg
        .edges()
        .iter()
        .filter(|e| e.order() == 3)
        .map(|e| [e.vertices()[0], e.vertices()[1], e.vertices()[2]])
        .collect();
    let total: u128 = (0..1u64 << n)
        .into_par_iter()
        .map(|x| {
            let mut rows = vec![0u64; n];
            for t in &triples {
                for k in 0..3 {
                    if x >> t[k] & 1 == 1 {
                        let (b, c) = (t[(k + 1) % 3], t[(k + 2) % 3]);
                        rows[b] ^= 1 << c;
                        rows[c] ^= 1 << b;
                    }
                }
            }
            1u128 << gf2_rank(rows)
        })
        .sum();
    Ok(GSupport {
        g: BigUint::from(total),
        method: GSupportMethod::Rank,
    })
}

/// `g` for a component carrying one hyperedge over all of its `k` vertices.
pub fn full_edge_support(k: usize) -> BigUint {
    let one = BigUint::one();
    if k <= 2 {
        return &one << k;
    }
    (&one << (2 * k - 1)) - (&one << (k - 1)) + one
}

/// Product of per-component closed forms. Components whose nontrivial edges
/// are all of order 2 are stabilizer states with `g = 2^size`; a component
/// spanned by a single hyperedge uses the full-edge formula. Any other shape
/// returns `None`. Order-1 edges only flip signs and are ignored.
pub fn char_support_analytic(hg: &Hypergraph) -> Result<Option<BigUint>> {
    require_qubit(hg)?;
    let mut g = BigUint::one();
    for comp in hg.components() {
        let edges: Vec<_> = hg
            .edges()
            .iter()
            .filter(|e| e.order() >= 2 && comp.contains(&e.vertices()[0]))
            .collect();
        let factor = if edges.iter().all(|e| e.order() == 2) {
            BigUint::one() << comp.len()
        } else if edges.len() == 1 && edges[0].order() == comp.len() {
            full_edge_support(comp.len())
        } else {
            return Ok(None);
        };
        g *= factor;
    }
    Ok(Some(g))
}

/// Picks the cheapest available route.
pub fn char_support(hg: &Hypergraph, budget: &Budget) -> Result<GSupport> {
    require_qubit(hg)?;
    if let Some(g) = char_support_analytic(hg)? {
        return Ok(GSupport {
            g,
            method: GSupportMethod::Analytic,
        });
    }
    if hg.order() <= 3 && hg.n() <= budget.gsupport_fast {
        return char_support_fast(hg, budget);
    }
    char_support_brute(hg, budget)
}

/// Whether every nonzero `|<W>|` is at least `c`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct WellConditioned {
    pub c: f64,
    /// Smallest nonzero `|<W>|`.
    pub min_nonzero: f64,
    pub well_conditioned: bool,
}

pub fn well_conditioned(hg: &Hypergraph, c: f64, budget: &Budget) -> Result<WellConditioned> {
    require_qubit(hg)?;
    if !(c > 0.0 && c <= 1.0) {
        return Err(Error::BadParams(format!("c must lie in (0, 1], got {c}")));
    }
    Budget::check("characteristic support qubits", hg.n() as u64, budget.gsupport as u64)?;
    let table = phase_table(hg);
    let min = (0..table.len())
        .into_par_iter()
        .map(|x| {
            character_sums(hg, x, &table)
                .iter()
                .filter(|&&s| s != 0)
                .map(|s| s.unsigned_abs())
                .min()
                .unwrap_or(u64::MAX)
        })
        .min()
        .unwrap_or(u64::MAX);
    let min_nonzero = min as f64 / table.len() as f64;
    Ok(WellConditioned {
        c,
        min_nonzero,
        well_conditioned: min_nonzero >= c,
    })
}
