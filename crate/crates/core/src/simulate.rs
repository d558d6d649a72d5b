//! Monte Carlo verification runs against dense prepared states.
//!
//! Every test `i` draws from its own ChaCha stream (`seed`, stream `i`), so a
//! run is reproducible regardless of how tests are spread across threads.

use std::sync::OnceLock;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::counts::{fidelity_interval, tests_for, FidelityInterval, PrecisionTarget, Scenario};
use crate::error::{Error, Result};
use crate::oracle::{
    build_state, outcome_distribution, pass_probability, state_vector, syndrome_state, worst_case_state, Component,
    DenseState,
};
use crate::protocol::{classify_outcome, spectral_summary, HedgeChoice, ProtocolSpec, TestOutcome};
use crate::rational::to_f64;
use crate::Budget;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum NoiseKind {
    Target,
    /// `(1-s)|G><G| + s 1/d^n`.
    Depolarizing {
        strength: f64,
    },
    /// `(1 - sum w)|G><G| + sum w |G_x><G_x|` over syndrome strings `x`.
    EigenstateMix {
        weights: Vec<(Vec<u32>, f64)>,
    },
    /// Phase `exp(i angle u_v)` on the target amplitudes.
    CoherentZRotation {
        vertex: usize,
        angle: f64,
    },
    WorstCase {
        epsilon: f64,
    },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NoiseModel {
    #[serde(flatten)]
    pub kind: NoiseKind,
    /// Run `i` prepares `per_run_schedule[i % len]` when present.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub per_run_schedule: Option<Vec<NoiseKind>>,
}

impl NoiseModel {
    pub fn new(kind: NoiseKind) -> Self {
        NoiseModel {
            kind,
            per_run_schedule: None,
        }
    }

    pub fn schedule(kinds: Vec<NoiseKind>) -> Result<Self> {
        let first = kinds
            .first()
            .cloned()
            .ok_or_else(|| Error::BadParams("per-run schedule must not be empty".into()))?;
        Ok(NoiseModel {
            kind: first,
            per_run_schedule: Some(kinds),
        })
    }

    fn kinds(&self) -> Vec<NoiseKind> {
        match &self.per_run_schedule {
            Some(s) => s.clone(),
            None => vec![self.kind.clone()],
        }
    }
}

impl std::str::FromStr for NoiseKind {
    type Err = Error;

    /// `target`, `depolarizing:S`, `zrot:V:ANGLE`, `worst_case:EPS`, or
    /// `mix:X=W;X=W` with `X` a digit string.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::BadParams(format!("unrecognized noise model {s:?}"));
        let num = |t: &str| t.trim().parse::<f64>().map_err(|_| bad());
        let mut parts = s.trim().splitn(2, ':');
        let head = parts.next().unwrap_or_default();
        let rest = parts.next();
        match (head, rest) {
            ("target", None) => Ok(NoiseKind::Target),
            ("depolarizing", Some(r)) => Ok(NoiseKind::Depolarizing { strength: num(r)? }),
            ("worst_case" | "worst-case", Some(r)) => Ok(NoiseKind::WorstCase { epsilon: num(r)? }),
            ("zrot" | "coherent_z_rotation", Some(r)) => {
                let (v, a) = r.split_once(':').ok_or_else(bad)?;
                Ok(NoiseKind::CoherentZRotation {
                    vertex: v.trim().parse().map_err(|_| bad())?,
                    angle: num(a)?,
                })
            }
            ("mix" | "eigenstate_mix", Some(r)) => {
                let weights = r
                    .split(';')
                    .map(|item| {
                        let (x, w) = item.split_once('=').ok_or_else(bad)?;
                        let digits = x
                            .trim()
                            .chars()
                            .map(|c| c.to_digit(36).ok_or_else(bad))
                            .collect::<Result<Vec<u32>>>()?;
                        Ok((digits, num(w)?))
                    })
                    .collect::<Result<Vec<_>>>()?;
                Ok(NoiseKind::EigenstateMix { weights })
            }
            _ => Err(bad()),
        }
    }
}

/// Dense state for one noise kind.
pub fn prepare_state(spec: &ProtocolSpec, kind: &NoiseKind, budget: &Budget) -> Result<DenseState> {
    let hg = spec.hypergraph();
    let (n, d) = (hg.n(), hg.dim());
    match kind {
        NoiseKind::Target => build_state(hg, budget),
        NoiseKind::Depolarizing { strength } => {
            if !(0.0..=1.0).contains(strength) {
                return Err(Error::BadParams(format!(
                    "depolarizing strength must lie in [0, 1], got {strength}"
                )));
            }
            let g = state_vector(hg, budget)?;
            DenseState::mixture(
                n,
                d,
                vec![
                    (1.0 - strength, Component::Pure(g)),
                    (*strength, Component::MaximallyMixed),
                ],
            )
        }
        NoiseKind::EigenstateMix { weights } => {
            let total: f64 = weights.iter().map(|(_, w)| w).sum();
            if weights.iter().any(|(_, w)| w.is_nan() || *w < 0.0) || total > 1.0 + 1e-12 {
                return Err(Error::BadWeights(format!(
                    "eigenstate weights must be nonnegative with sum at most 1, got sum {total}"
                )));
            }
            let mut comps = vec![(1.0 - total.min(1.0), Component::Pure(state_vector(hg, budget)?))];
            for (x, w) in weights {
                comps.push((*w, Component::Pure(syndrome_state(hg, x, budget)?)));
            }
            DenseState::mixture(n, d, comps)
        }
        NoiseKind::CoherentZRotation { vertex, angle } => {
            hg.check_vertex(*vertex)?;
            if !angle.is_finite() {
                return Err(Error::BadParams("rotation angle must be finite".into()));
            }
            let g = state_vector(hg, budget)?;
            let stride = (d as usize).pow((n - 1 - vertex) as u32);
            let amps = g
                .into_iter()
                .enumerate()
                .map(|(idx, a)| {
                    let u = (idx / stride) % d as usize;
                    a * Complex64::from_polar(1.0, angle * u as f64)
                })
                .collect();
            Ok(DenseState::pure(n, d, amps))
        }
        NoiseKind::WorstCase { epsilon } => Ok(worst_case_state(spec, *epsilon, budget)?.state),
    }
}

/// Draws tests and outcomes with cumulative tables built on first use for
/// each (state, component, set).
pub struct Sampler<'a> {
    spec: &'a ProtocolSpec,
    states: Vec<DenseState>,
    set_cdf: Vec<f64>,
    tables: Vec<Vec<Vec<OnceLock<Vec<f64>>>>>,
}

impl<'a> Sampler<'a> {
    pub fn new(spec: &'a ProtocolSpec, states: Vec<DenseState>) -> Self {
        let cover = spec.cover();
        let mut acc = 0.0;
        let set_cdf = cover
            .weights
            .iter()
            .map(|w| {
                acc += to_f64(w);
                acc
            })
            .collect();
        let tables = states
            .iter()
            .map(|s| {
                s.components
                    .iter()
                    .map(|_| (0..cover.len()).map(|_| OnceLock::new()).collect())
                    .collect()
            })
            .collect();
        Sampler {
            spec,
            states,
            set_cdf,
            tables,
        }
    }

    pub fn states(&self) -> &[DenseState] {
        &self.states
    }

    fn cdf(&self, state: usize, comp: usize, set: usize) -> &[f64] {
        self.tables[state][comp][set].get_or_init(|| {
            let s = &self.states[state];
            let single = DenseState {
                n: s.n,
                d: s.d,
                components: vec![(1.0, s.components[comp].1.clone())],
            };
            let mut acc = 0.0;
            outcome_distribution(&single, &self.spec.cover().sets[set])
                .into_iter()
                .map(|p| {
                    acc += p;
                    acc
                })
                .collect()
        })
    }

    /// One test on state `state` of the sampler.
    pub fn sample<R: Rng>(&self, state: usize, rng: &mut R) -> Result<TestOutcome> {
        let hg = self.spec.hypergraph();
        if rng.random::<f64>() < self.spec.hedge() {
            return Ok(TestOutcome {
                set: None,
                outcome: Vec::new(),
                syndrome: Vec::new(),
                passed: true,
            });
        }
        let set = pick(&self.set_cdf, rng.random::<f64>());
        let weights: Vec<f64> = {
            let mut acc = 0.0;
            self.states[state]
                .components
                .iter()
                .map(|(w, _)| {
                    acc += w;
                    acc
                })
                .collect()
        };
        let comp = pick(&weights, rng.random::<f64>());
        let idx = pick(self.cdf(state, comp, set), rng.random::<f64>());
        let d = hg.dim() as usize;
        let n = hg.n();
        let outcome: Vec<u32> = (0..n).map(|j| ((idx / d.pow((n - 1 - j) as u32)) % d) as u32).collect();
        let mut t = classify_outcome(hg, &self.spec.cover().sets[set], &outcome)?;
        t.set = Some(set);
        Ok(t)
    }
}

/// Inverse-CDF lookup; `u` is scaled by the table total to absorb rounding.
fn pick(cdf: &[f64], u: f64) -> usize {
    let total = *cdf.last().expect("nonempty table");
    let target = u * total;
    cdf.partition_point(|&c| c <= target).min(cdf.len() - 1)
}

/// A single test against `state`.
pub fn sample_test<R: Rng>(state: &DenseState, spec: &ProtocolSpec, rng: &mut R) -> Result<TestOutcome> {
    Sampler::new(spec, vec![state.clone()]).sample(0, rng)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Decision {
    Accepted,
    Rejected,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SimulationReport {
    #[serde(rename = "N_performed")]
    pub n_performed: u64,
    pub passes: u64,
    pub first_failure_index: Option<u64>,
    pub rate: f64,
    /// Infidelity interval implied by the empirical pass rate.
    pub interval: FidelityInterval,
    pub decision: Decision,
    pub seed: u64,
    /// Exact passing probability averaged over the prepared states.
    pub expected_pass_probability: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TraceRecord {
    pub index: u64,
    pub set: Option<usize>,
    pub outcome: Vec<u32>,
    pub passed: bool,
}

pub fn test_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// Runs `tests` sampled tests; run `i` uses schedule entry `i % len`.
pub fn run_tests(
    spec: &ProtocolSpec,
    noise: &NoiseModel,
    tests: u64,
    seed: u64,
    budget: &Budget,
) -> Result<(SimulationReport, Vec<TraceRecord>)> {
    let states = noise
        .kinds()
        .iter()
        .map(|k| prepare_state(spec, k, budget))
        .collect::<Result<Vec<_>>>()?;
    let expected = states.iter().map(|s| pass_probability(spec, s)).sum::<f64>() / states.len() as f64;
    let sampler = Sampler::new(spec, states);
    let runs = sampler.states().len() as u64;
    let records = (0..tests)
        .into_par_iter()
        .map(|i| {
            let t = sampler.sample((i % runs) as usize, &mut test_rng(seed, i))?;
            Ok(TraceRecord {
                index: i,
                set: t.set,
                outcome: t.outcome,
                passed: t.passed,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let passes = records.iter().filter(|r| r.passed).count() as u64;
    let first_failure_index = records.iter().find(|r| !r.passed).map(|r| r.index);
    let rate = if tests == 0 { 1.0 } else { passes as f64 / tests as f64 };
    let summary = spectral_summary(spec);
    let report = SimulationReport {
        n_performed: tests,
        passes,
        first_failure_index,
        rate,
        interval: fidelity_interval(rate, summary.nu_p, summary.tau_p),
        decision: if passes == tests {
            Decision::Accepted
        } else {
            Decision::Rejected
        },
        seed,
        expected_pass_probability: expected,
    };
    Ok((report, records))
}

/// Runs the number of tests prescribed for `scenario` at the given target.
pub fn run_verification(
    spec: &ProtocolSpec,
    noise: &NoiseModel,
    target: &PrecisionTarget,
    scenario: Scenario,
    seed: u64,
    budget: &Budget,
) -> Result<(SimulationReport, Vec<TraceRecord>)> {
    let counts = tests_for(scenario, spec.nu(), target, HedgeChoice::Explicit(spec.hedge()))?;
    let n = counts
        .n()
        .ok_or_else(|| Error::Unstable("no definite test count for this scenario".into()))?;
    run_tests(spec, noise, n, seed, budget)
}

/// CSV with columns `index,set,outcome,passed`. The trivial test is written
/// as set `trivial`; outcomes are digit strings.
pub fn trace_csv(records: &[TraceRecord], d: u32) -> String {
    let mut out = String::from("index,set,outcome,passed\n");
    for r in records {
        let set = r.set.map_or("trivial".to_string(), |s| s.to_string());
        let outcome: String = if d <= 10 {
            r.outcome
                .iter()
                .map(|o| char::from_digit(*o, 10).unwrap_or('?'))
                .collect()
        } else {
            r.outcome.iter().map(u32::to_string).collect::<Vec<_>>().join(".")
        };
        out.push_str(&format!("{},{},{},{}\n", r.index, set, outcome, r.passed));
    }
    out
}
