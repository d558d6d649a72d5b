//! Cover protocols: outcome classification, exact spectra, and hedging.

use std::collections::BTreeMap;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::covers::{cover_strength, WeightedCover};
use crate::error::{Error, Result};
use crate::hypergraph::Hypergraph;
use crate::rational::{int, serde_rational, to_f64};
use crate::Budget;

/// A cover protocol, optionally mixed with the always-pass test.
#[derive(Clone, Debug)]
pub struct ProtocolSpec {
    hypergraph: Hypergraph,
    cover: WeightedCover,
    hedge: f64,
    strength: BigRational,
}

impl ProtocolSpec {
    pub fn new(hypergraph: Hypergraph, cover: WeightedCover, hedge: f64) -> Result<Self> {
        if !(0.0..1.0).contains(&hedge) {
            return Err(Error::BadParams(format!(
                "hedging probability must lie in [0, 1), got {hedge}"
            )));
        }
        let strength = cover_strength(&hypergraph, &cover)?;
        Ok(ProtocolSpec {
            hypergraph,
            cover,
            hedge,
            strength,
        })
    }

    pub fn hypergraph(&self) -> &Hypergraph {
        &self.hypergraph
    }

    pub fn cover(&self) -> &WeightedCover {
        &self.cover
    }

    pub fn hedge(&self) -> f64 {
        self.hedge
    }

    pub fn with_hedge(&self, hedge: f64) -> Result<Self> {
        ProtocolSpec::new(self.hypergraph.clone(), self.cover.clone(), hedge)
    }

    /// The hedging probability as an exact rational.
    pub fn hedge_exact(&self) -> BigRational {
        BigRational::from_float(self.hedge).unwrap_or_else(BigRational::zero)
    }

    pub fn nu(&self) -> &BigRational {
        &self.strength
    }
}

/// How to pick the hedging probability.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum HedgeChoice {
    Named(HedgeName),
    Explicit(f64),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum HedgeName {
    /// `p = p*(nu)`.
    Auto,
    /// `p = nu/e`.
    NuOverE,
    None,
}

impl HedgeChoice {
    pub fn resolve(self, nu: &BigRational) -> Result<f64> {
        match self {
            HedgeChoice::Named(HedgeName::None) => Ok(0.0),
            HedgeChoice::Named(HedgeName::Auto) => Ok(hedging_params(nu)?.p_star),
            HedgeChoice::Named(HedgeName::NuOverE) => Ok(to_f64(nu) / std::f64::consts::E),
            HedgeChoice::Explicit(p) => Ok(p),
        }
    }
}

impl std::str::FromStr for HedgeChoice {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "auto" => Ok(HedgeChoice::Named(HedgeName::Auto)),
            "none" => Ok(HedgeChoice::Named(HedgeName::None)),
            "nu_over_e" | "nu/e" => Ok(HedgeChoice::Named(HedgeName::NuOverE)),
            _ => s
                .parse::<f64>()
                .map(HedgeChoice::Explicit)
                .map_err(|_| Error::BadParams(format!("hedge must be auto, none, nu_over_e, or a number, got {s:?}"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TestOutcome {
    /// Index of the chosen set; `None` for the trivial test.
    pub set: Option<usize>,
    pub outcome: Vec<u32>,
    /// `(i, t_i)` for each vertex of the tested set.
    pub syndrome: Vec<(usize, u32)>,
    pub passed: bool,
}

/// Syndromes `t_i = o_i + sum_{e ∋ i} m_e prod_{k in e, k != i} o_k (mod d)`
/// for `i` in the independent set `a`.
pub fn classify_outcome(hg: &Hypergraph, a: &[usize], outcome: &[u32]) -> Result<TestOutcome> {
    if outcome.len() != hg.n() {
        return Err(Error::BadOutcome(format!(
            "expected {} outcomes, got {}",
            hg.n(),
            outcome.len()
        )));
    }
    let partial: Vec<Option<u32>> = outcome.iter().map(|&o| Some(o)).collect();
    classify_partial(hg, a, &partial)
}

/// Like [`classify_outcome`], but only the outcomes on `a` and its
/// neighborhood are needed; other entries may be `None`.
pub fn classify_partial(hg: &Hypergraph, a: &[usize], outcome: &[Option<u32>]) -> Result<TestOutcome> {
    if outcome.len() != hg.n() {
        return Err(Error::BadOutcome(format!(
            "expected {} outcomes, got {}",
            hg.n(),
            outcome.len()
        )));
    }
    let d = hg.dim() as u64;
    if let Some(o) = outcome.iter().flatten().find(|&&o| o as u64 >= d) {
        return Err(Error::BadOutcome(format!("value {o} is not below d = {d}")));
    }
    let a = hg.check_set(a)?;
    if !crate::covers::is_independent(hg, &a)? {
        return Err(Error::NotIndependent { set: a });
    }
    let get = |k: usize| -> Result<u64> {
        outcome[k]
            .map(u64::from)
            .ok_or_else(|| Error::BadOutcome(format!("outcome of vertex {k} is required")))
    };
    let mut syndrome = Vec::with_capacity(a.len());
    for &i in &a {
        let mut t = get(i)?;
        for e in hg.edges().iter().filter(|e| e.contains(i)) {
            let mut prod = 1u64;
            for &k in e.vertices().iter().filter(|&&k| k != i) {
                prod = prod * get(k)? % d;
            }
            t = (t + e.multiplicity() as u64 * prod) % d;
        }
        syndrome.push((i, t as u32));
    }
    let passed = syndrome.iter().all(|&(_, t)| t == 0);
    Ok(TestOutcome {
        set: None,
        outcome: outcome.iter().map(|o| o.unwrap_or(0)).collect(),
        syndrome,
        passed,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpectralSummary {
    #[serde(with = "serde_rational")]
    pub nu: BigRational,
    #[serde(with = "serde_rational")]
    pub beta: BigRational,
    #[serde(with = "serde_rational")]
    pub tau: BigRational,
    pub hedge: f64,
    pub nu_p: f64,
    pub beta_p: f64,
    pub tau_p: f64,
    /// Lowest vertex whose single-site syndromes attain `beta`.
    pub beta_vertex: Option<usize>,
}

impl SpectralSummary {
    fn from_gap(nu: BigRational, hedge: f64, beta_vertex: Option<usize>) -> Self {
        let beta = BigRational::one() - &nu;
        let nu_f = to_f64(&nu);
        SpectralSummary {
            beta_p: 1.0 - nu_f + hedge * nu_f,
            nu_p: (1.0 - hedge) * nu_f,
            tau_p: hedge,
            tau: BigRational::zero(),
            beta,
            nu,
            hedge,
            beta_vertex,
        }
    }
}

pub fn spectral_summary(spec: &ProtocolSpec) -> SpectralSummary {
    let coverage = spec.cover.coverage(spec.hypergraph.n());
    let beta_vertex = coverage
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.cmp(b.1).then(a.0.cmp(&b.0)))
        .map(|(v, _)| v);
    SpectralSummary::from_gap(spec.strength.clone(), spec.hedge, beta_vertex)
}

/// Eigenvalue of the (hedged) verification operator on the syndrome `x`.
pub fn eigenvalue_at(spec: &ProtocolSpec, x: &[u32]) -> Result<BigRational> {
    let hg = &spec.hypergraph;
    if x.len() != hg.n() {
        return Err(Error::BadOutcome(format!(
            "expected {} syndromes, got {}",
            hg.n(),
            x.len()
        )));
    }
    if let Some(v) = x.iter().find(|&&v| v >= hg.dim()) {
        return Err(Error::BadOutcome(format!("value {v} is not below d = {}", hg.dim())));
    }
    let lambda: BigRational = spec
        .cover
        .sets
        .iter()
        .zip(&spec.cover.weights)
        .filter(|(s, _)| s.iter().all(|&v| x[v] == 0))
        .map(|(_, w)| w.clone())
        .sum();
    Ok(hedged(&lambda, &spec.hedge_exact()))
}

fn hedged(lambda: &BigRational, p: &BigRational) -> BigRational {
    if p.is_zero() {
        lambda.clone()
    } else {
        (BigRational::one() - p) * lambda + p
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpectrumLevel {
    /// Unhedged eigenvalue.
    #[serde(with = "serde_rational")]
    pub value: BigRational,
    /// `(1-p) value + p`.
    pub hedged: f64,
    pub multiplicity: u128,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Spectrum {
    pub hedge: f64,
    /// Distinct eigenvalues in decreasing order.
    pub levels: Vec<SpectrumLevel>,
}

impl Spectrum {
    pub fn dimension(&self) -> u128 {
        self.levels.iter().map(|l| l.multiplicity).sum()
    }

    /// All eigenvalues with repetition, decreasing, as floats (hedged).
    pub fn expanded(&self) -> Vec<f64> {
        self.levels
            .iter()
            .flat_map(|l| std::iter::repeat_n(l.hedged, l.multiplicity as usize))
            .collect()
    }
}

/// Full spectrum by enumerating syndrome supports. A support `S` carries
/// eigenvalue `sum of mu_l over A_l disjoint from S` with multiplicity `(d-1)^|S|`.
pub fn full_spectrum(spec: &ProtocolSpec, budget: &Budget) -> Result<Spectrum> {
    let hg = &spec.hypergraph;
    let n = hg.n();
    Budget::check("spectrum support enumeration", n as u64, budget.spectrum.min(40) as u64)?;
    let denom = spec
        .cover
        .weights
        .iter()
        .fold(BigInt::one(), |acc, w| acc.lcm(w.denom()));
    let numer: Vec<BigInt> = spec
        .cover
        .weights
        .iter()
        .map(|w| w.numer() * (&denom / w.denom()))
        .collect();
    let masks: Vec<u64> = spec
        .cover
        .sets
        .iter()
        .map(|s| s.iter().fold(0u64, |m, &v| m | (1 << v)))
        .collect();
    let small: Option<Vec<u64>> = numer.iter().map(|a| a.to_u64()).collect();
    let small = small.filter(|a| a.iter().try_fold(0u64, |s, &x| s.checked_add(x)).is_some());
    let mult_of: Vec<u128> = (0..=n)
        .map(|k| (hg.dim() as u128 - 1).checked_pow(k as u32).unwrap_or(u128::MAX))
        .collect();

    let counts: BTreeMap<BigInt, u128> = match small {
        Some(a) => {
            let merged = (0u64..1 << n)
                .into_par_iter()
                .fold(BTreeMap::<u64, u128>::new, |mut acc, s| {
                    let lam: u64 = masks.iter().zip(&a).filter(|(m, _)| *m & s == 0).map(|(_, w)| *w).sum();
                    *acc.entry(lam).or_insert(0) += mult_of[s.count_ones() as usize];
                    acc
                })
                .reduce(BTreeMap::new, |mut x, y| {
                    for (k, v) in y {
                        *x.entry(k).or_insert(0) += v;
                    }
                    x
                });
            merged.into_iter().map(|(k, v)| (BigInt::from(k), v)).collect()
        }
        None => {
            let mut acc = BTreeMap::new();
            for s in 0u64..1 << n {
                let lam: BigInt = masks
                    .iter()
                    .zip(&numer)
                    .filter(|(m, _)| *m & s == 0)
                    .map(|(_, w)| w.clone())
                    .sum();
                *acc.entry(lam).or_insert(0) += mult_of[s.count_ones() as usize];
            }
            acc
        }
    };
    let p = spec.hedge_exact();
    let levels = counts
        .into_iter()
        .rev()
        .map(|(k, multiplicity)| {
            let value = BigRational::new(k, denom.clone());
            SpectrumLevel {
                hedged: to_f64(&hedged(&value, &p)),
                value,
                multiplicity,
            }
        })
        .collect();
    Ok(Spectrum {
        hedge: spec.hedge,
        levels,
    })
}

/// Optimal hedging data for a given spectral gap.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HedgingParams {
    #[serde(with = "serde_rational")]
    pub nu: BigRational,
    pub p_star: f64,
    pub h_star: f64,
    /// The simpler choice `p = nu/e` and its `h(p, nu)`.
    pub p_nu_over_e: f64,
    pub h_nu_over_e: f64,
}

/// `h(p, nu) = 1 / min(beta_p ln(1/beta_p), p ln(1/p))`.
pub fn h_of(p: f64, nu: f64) -> f64 {
    let beta = 1.0 - nu + p * nu;
    1.0 / xlog_inv(beta).min(xlog_inv(p))
}

fn xlog_inv(x: f64) -> f64 {
    if x <= 0.0 || x >= 1.0 {
        0.0
    } else {
        -x * x.ln()
    }
}

fn check_nu(nu: &BigRational) -> Result<f64> {
    if *nu <= BigRational::zero() || *nu > BigRational::one() {
        return Err(Error::BadNu(crate::rational::format_rational(nu)));
    }
    Ok(to_f64(nu))
}

/// `p* = min{p > 0 : p ln(1/p) >= beta_p ln(1/beta_p)}` and `h* = -1/(p* ln p*)`.
pub fn hedging_params(nu: &BigRational) -> Result<HedgingParams> {
    let nu_f = check_nu(nu)?;
    let inv_e = (-1.0f64).exp();
    let p_star = if nu.is_one() {
        // Both terms coincide for every p; take the minimizer of h(p, 1).
        inv_e
    } else {
        let f = |p: f64| xlog_inv(p) - xlog_inv(1.0 - nu_f + p * nu_f);
        // f < 0 near 0 and f(1/e) >= 0, so scan for the first sign change.
        let steps = 4000;
        let (lo_exp, hi_exp) = (-15.0f64, inv_e.log10());
        let mut lo = 1e-15;
        let mut hi = inv_e;
        for i in 1..=steps {
            let p = 10f64
                .powf(lo_exp + (hi_exp - lo_exp) * i as f64 / steps as f64)
                .min(inv_e);
            if f(p) >= 0.0 {
                hi = p;
                break;
            }
            lo = p;
        }
        while hi - lo > 1e-13 {
            let mid = 0.5 * (lo + hi);
            if f(mid) >= 0.0 {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        hi
    };
    let p_e = nu_f * inv_e;
    Ok(HedgingParams {
        nu: nu.clone(),
        p_star,
        h_star: -1.0 / (p_star * p_star.ln()),
        p_nu_over_e: p_e,
        h_nu_over_e: h_of(p_e, nu_f),
    })
}

/// Spectral data of the protocol measuring all `2^n - 1` nontrivial
/// stabilizers with equal probability.
pub fn plm_summary(n: usize) -> Result<SpectralSummary> {
    if n == 0 {
        return Err(Error::BadParams("need at least one qubit".into()));
    }
    let half = BigUint::one() << (n - 1);
    let all = (BigUint::one() << n) - 1u32;
    let nu = BigRational::new(half.into(), all.into());
    Ok(SpectralSummary::from_gap(nu, 0.0, None))
}

/// Convenience: `1/m` as a rational gap.
pub fn coloring_gap(m: usize) -> BigRational {
    int(m as i64).recip()
}
