//! Brute-force dense linear algebra for small systems.
//!
//! Basis index of a string `u` is `sum_j u_j d^(n-1-j)`, so vertex 0 is the
//! most significant digit.

mod gsupport;
mod kappa;

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hypergraph::Hypergraph;
use crate::protocol::{spectral_summary, ProtocolSpec, Spectrum};
use crate::rational::to_f64;
use crate::{hilbert_dim, Budget};

pub use gsupport::{
    char_support, char_support_analytic, char_support_brute, char_support_fast, well_conditioned, GSupport,
    GSupportMethod, WellConditioned,
};
pub use kappa::{kappa, Kappa};

pub type C64 = Complex64;

/// Digit layout of the `d^n` basis.
#[derive(Clone, Debug)]
pub(crate) struct Layout {
    pub n: usize,
    pub d: usize,
    pub dim: usize,
    strides: Vec<usize>,
    roots: Vec<C64>,
}

impl Layout {
    pub fn new(n: usize, d: u32) -> Self {
        let d = d as usize;
        let mut strides = vec![1; n];
        for j in (0..n.saturating_sub(1)).rev() {
            strides[j] = strides[j + 1] * d;
        }
        let dim = if n == 0 { 1 } else { strides[0] * d };
        let roots = (0..d)
            .map(|k| C64::from_polar(1.0, 2.0 * std::f64::consts::PI * k as f64 / d as f64))
            .collect();
        Layout {
            n,
            d,
            dim,
            strides,
            roots,
        }
    }

    pub fn of(hg: &Hypergraph) -> Self {
        Layout::new(hg.n(), hg.dim())
    }

    #[inline]
    pub fn digit(&self, idx: usize, j: usize) -> usize {
        (idx / self.strides[j]) % self.d
    }

    #[inline]
    pub fn stride(&self, j: usize) -> usize {
        self.strides[j]
    }

    /// `omega^k` with `omega = exp(2 pi i / d)`.
    #[inline]
    pub fn omega(&self, k: usize) -> C64 {
        self.roots[k % self.d]
    }

    #[cfg(test)]
    pub fn digits(&self, idx: usize) -> Vec<usize> {
        (0..self.n).map(|j| self.digit(idx, j)).collect()
    }
}

/// `f(u) = sum_e m_e prod_{j in e} u_j (mod d)`.
pub(crate) fn phase_exponent(hg: &Hypergraph, lay: &Layout, idx: usize) -> usize {
    let d = lay.d;
    hg.edges().iter().fold(0, |acc, e| {
        let prod = e.vertices().iter().fold(1, |p, &j| p * lay.digit(idx, j) % d);
        (acc + e.multiplicity() as usize * prod) % d
    })
}

/// `phi_j(u) = sum_{e ∋ j} m_e prod_{k in e, k != j} u_k (mod d)`.
pub(crate) fn stabilizer_phase(hg: &Hypergraph, lay: &Layout, j: usize, idx: usize) -> usize {
    let d = lay.d;
    hg.edges().iter().filter(|e| e.contains(j)).fold(0, |acc, e| {
        let prod = e
            .vertices()
            .iter()
            .filter(|&&k| k != j)
            .fold(1, |p, &k| p * lay.digit(idx, k) % d);
        (acc + e.multiplicity() as usize * prod) % d
    })
}

#[derive(Clone, Debug, PartialEq)]
pub enum Component {
    Pure(Vec<C64>),
    /// The normalized identity.
    MaximallyMixed,
}

/// A pure state or a finite mixture of pure states and the maximally mixed
/// state.
#[derive(Clone, Debug, PartialEq)]
pub struct DenseState {
    pub n: usize,
    pub d: u32,
    pub components: Vec<(f64, Component)>,
}

impl DenseState {
    pub fn pure(n: usize, d: u32, amplitudes: Vec<C64>) -> Self {
        DenseState {
            n,
            d,
            components: vec![(1.0, Component::Pure(amplitudes))],
        }
    }

    pub fn dim(&self) -> usize {
        Layout::new(self.n, self.d).dim
    }

    pub fn amplitudes(&self) -> Option<&[C64]> {
        match self.components.as_slice() {
            [(w, Component::Pure(v))] if (*w - 1.0).abs() < 1e-15 => Some(v),
            _ => None,
        }
    }

    /// Convex combination; weights must be nonnegative and sum to one.
    pub fn mixture(n: usize, d: u32, components: Vec<(f64, Component)>) -> Result<Self> {
        let total: f64 = components.iter().map(|(w, _)| w).sum();
        if components.iter().any(|(w, _)| *w < 0.0 || !w.is_finite()) || (total - 1.0).abs() > 1e-12 {
            return Err(Error::BadWeights(format!(
                "mixture weights must be nonnegative and sum to 1, got {total}"
            )));
        }
        let components = components.into_iter().filter(|(w, _)| *w > 0.0).collect();
        Ok(DenseState { n, d, components })
    }

    pub fn trace(&self) -> f64 {
        self.components
            .iter()
            .map(|(w, c)| match c {
                Component::Pure(v) => w * norm_sqr(v),
                Component::MaximallyMixed => *w,
            })
            .sum()
    }

    /// `<psi| rho |psi>`.
    pub fn fidelity_with(&self, psi: &[C64]) -> f64 {
        let dim = self.dim() as f64;
        self.components
            .iter()
            .map(|(w, c)| match c {
                Component::Pure(v) => w * inner(psi, v).norm_sqr(),
                Component::MaximallyMixed => w * norm_sqr(psi) / dim,
            })
            .sum()
    }

    /// Dense density matrix; only for small dimensions.
    pub fn density_matrix(&self, budget: &Budget) -> Result<DMatrix<C64>> {
        let dim = self.dim();
        Budget::check("density matrix dimension", dim as u64, budget.operator_dim)?;
        let mut rho = DMatrix::<C64>::zeros(dim, dim);
        for (w, c) in &self.components {
            match c {
                Component::Pure(v) => {
                    for r in 0..dim {
                        for s in 0..dim {
                            rho[(r, s)] += v[r] * v[s].conj() * *w;
                        }
                    }
                }
                Component::MaximallyMixed => {
                    for r in 0..dim {
                        rho[(r, r)] += C64::new(*w / dim as f64, 0.0);
                    }
                }
            }
        }
        Ok(rho)
    }
}

pub(crate) fn norm_sqr(v: &[C64]) -> f64 {
    v.iter().map(|a| a.norm_sqr()).sum()
}

/// `<a|b>`.
pub(crate) fn inner(a: &[C64], b: &[C64]) -> C64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

fn check_state_budget(hg: &Hypergraph, budget: &Budget) -> Result<()> {
    Budget::check("state dimension", hilbert_dim(hg.dim(), hg.n()), budget.state_dim)
}

/// Amplitudes `d^(-n/2) omega^f(u)` of the hypergraph state.
pub fn state_vector(hg: &Hypergraph, budget: &Budget) -> Result<Vec<C64>> {
    check_state_budget(hg, budget)?;
    let lay = Layout::of(hg);
    let scale = (lay.dim as f64).sqrt().recip();
    Ok((0..lay.dim)
        .into_par_iter()
        .map(|idx| lay.omega(phase_exponent(hg, &lay, idx)) * scale)
        .collect())
}

pub fn build_state(hg: &Hypergraph, budget: &Budget) -> Result<DenseState> {
    Ok(DenseState::pure(hg.n(), hg.dim(), state_vector(hg, budget)?))
}

/// Same state built gate by gate: Fourier transforms on `|0...0>`, then each
/// generalized controlled-Z applied `m_e` times.
pub fn build_state_by_gates(hg: &Hypergraph, budget: &Budget) -> Result<Vec<C64>> {
    check_state_budget(hg, budget)?;
    let lay = Layout::of(hg);
    let mut v = vec![C64::new(0.0, 0.0); lay.dim];
    v[0] = C64::new(1.0, 0.0);
    for j in 0..lay.n {
        v = fourier_on(&lay, &v, j, false);
    }
    for e in hg.edges() {
        for _ in 0..e.multiplicity() {
            for (idx, a) in v.iter_mut().enumerate() {
                let prod = e.vertices().iter().fold(1, |p, &j| p * lay.digit(idx, j) % lay.d);
                *a *= lay.omega(prod);
            }
        }
    }
    Ok(v)
}

/// Single-qudit Fourier transform on vertex `j`:
/// `|k> -> d^(-1/2) sum_o omega^(o k) |o>` (or its inverse).
pub(crate) fn fourier_on(lay: &Layout, v: &[C64], j: usize, inverse: bool) -> Vec<C64> {
    let d = lay.d;
    let s = lay.stride(j);
    let scale = (d as f64).sqrt().recip();
    let mut out = vec![C64::new(0.0, 0.0); v.len()];
    for (idx, slot) in out.iter_mut().enumerate() {
        let o = lay.digit(idx, j);
        let base = idx - o * s;
        let mut acc = C64::new(0.0, 0.0);
        for k in 0..d {
            let e = if inverse { (d - (o * k) % d) % d } else { (o * k) % d };
            acc += lay.omega(e) * v[base + k * s];
        }
        *slot = acc * scale;
    }
    out
}

/// `K_j v`, where `K_j |u> = omega^phi_j(u) |u + e_j>`.
pub fn apply_stabilizer(hg: &Hypergraph, j: usize, v: &[C64]) -> Vec<C64> {
    let lay = Layout::of(hg);
    let s = lay.stride(j);
    (0..lay.dim)
        .map(|r| {
            let rj = lay.digit(r, j);
            let src = r - rj * s + ((rj + lay.d - 1) % lay.d) * s;
            lay.omega(stabilizer_phase(hg, &lay, j, r)) * v[src]
        })
        .collect()
}

/// `Z_j^(-x) v`: multiplies `|u>` by `omega^(-x u_j)`.
pub fn apply_z_power(hg: &Hypergraph, j: usize, x: u32, v: &[C64]) -> Vec<C64> {
    let lay = Layout::of(hg);
    let d = lay.d;
    v.iter()
        .enumerate()
        .map(|(idx, a)| a * lay.omega((d - (x as usize * lay.digit(idx, j)) % d) % d))
        .collect()
}

/// The common eigenvector of all `K_j` with eigenvalues `omega^(x_j)`,
/// obtained as `prod_j Z_j^(-x_j) |G>`.
pub fn syndrome_state(hg: &Hypergraph, x: &[u32], budget: &Budget) -> Result<Vec<C64>> {
    if x.len() != hg.n() || x.iter().any(|&v| v >= hg.dim()) {
        return Err(Error::BadOutcome(
            "syndrome must have one digit below d per vertex".into(),
        ));
    }
    let mut v = state_vector(hg, budget)?;
    for (j, &xj) in x.iter().enumerate() {
        if xj != 0 {
            v = apply_z_power(hg, j, xj, &v);
        }
    }
    Ok(v)
}

fn close(a: &[C64], b: &[C64], tol: f64) -> bool {
    a.iter().zip(b).all(|(x, y)| (x - y).norm() <= tol)
}

/// Whether `K_j v = v` for every vertex `j`.
pub fn is_stabilized(hg: &Hypergraph, v: &[C64]) -> bool {
    (0..hg.n()).all(|j| close(&apply_stabilizer(hg, j, v), v, 1e-10))
}

/// Checks `K_j |G> = |G>` and `K_j^d = 1` for every vertex.
pub fn stabilizer_check(hg: &Hypergraph, budget: &Budget) -> Result<bool> {
    let g = state_vector(hg, budget)?;
    if !is_stabilized(hg, &g) {
        return Ok(false);
    }
    let lay = Layout::of(hg);
    for j in 0..hg.n() {
        // K_j^d maps |u> to itself with phase omega^(sum_t phi_j(u + t e_j)).
        let ok = (0..lay.dim).all(|idx| {
            let total: usize = (0..lay.d)
                .map(|t| {
                    let uj = lay.digit(idx, j);
                    let shifted = idx - uj * lay.stride(j) + ((uj + t) % lay.d) * lay.stride(j);
                    stabilizer_phase(hg, &lay, j, shifted)
                })
                .sum();
            total.is_multiple_of(lay.d)
        });
        if !ok {
            return Ok(false);
        }
    }
    Ok(true)
}

/// `P_A |c>` as a sparse list. `K_i^b |u> = omega^(b phi_i(u)) |u + b e_i>`
/// because `phi_i` ignores the digit of `i`, so every factor spreads each
/// term over `d` distinct basis states.
fn project_basis_vector(hg: &Hypergraph, lay: &Layout, a: &[usize], c: usize) -> Vec<(usize, C64)> {
    let d = lay.d;
    let scale = 1.0 / d as f64;
    let mut terms = vec![(c, C64::new(1.0, 0.0))];
    for &i in a {
        let s = lay.stride(i);
        let mut next = Vec::with_capacity(terms.len() * d);
        for (idx, amp) in terms {
            let phi = stabilizer_phase(hg, lay, i, idx);
            let ui = lay.digit(idx, i);
            for b in 0..d {
                let target = idx - ui * s + ((ui + b) % d) * s;
                next.push((target, amp * lay.omega(b * phi) * scale));
            }
        }
        terms = next;
    }
    terms
}

/// `P_A v` with `P_A = prod_{i in A} (1/d) sum_b K_i^b`.
pub fn apply_pass_projector(hg: &Hypergraph, a: &[usize], v: &[C64]) -> Vec<C64> {
    let mut cur = v.to_vec();
    for &i in a {
        let mut acc = cur.clone();
        let mut term = cur.clone();
        for _ in 1..hg.dim() {
            term = apply_stabilizer(hg, i, &term);
            for (x, t) in acc.iter_mut().zip(&term) {
                *x += t;
            }
        }
        let scale = 1.0 / hg.dim() as f64;
        cur = acc.into_iter().map(|x| x * scale).collect();
    }
    cur
}

/// `tr(Omega_p sigma)` evaluated with dense vectors.
pub fn pass_probability(spec: &ProtocolSpec, state: &DenseState) -> f64 {
    let hg = spec.hypergraph();
    let cover = spec.cover();
    let dim = state.dim() as f64;
    let unhedged: f64 = state
        .components
        .iter()
        .map(|(w, c)| {
            let inner: f64 = cover
                .sets
                .iter()
                .zip(&cover.weights)
                .map(|(s, mu)| {
                    let p = match c {
                        Component::Pure(v) => norm_sqr(&apply_pass_projector(hg, s, v)),
                        Component::MaximallyMixed => hilbert_dim(hg.dim(), hg.n() - s.len()) as f64 / dim,
                    };
                    to_f64(mu) * p
                })
                .sum();
            w * inner
        })
        .sum();
    let p = spec.hedge();
    (1.0 - p) * unhedged + p
}

/// `tr(rho K_j)`.
pub fn stabilizer_expectation(hg: &Hypergraph, state: &DenseState, j: usize) -> C64 {
    state
        .components
        .iter()
        .map(|(w, c)| match c {
            Component::Pure(v) => inner(v, &apply_stabilizer(hg, j, v)) * *w,
            // K_j is traceless: it shifts the j-th digit.
            Component::MaximallyMixed => C64::new(0.0, 0.0),
        })
        .sum()
}

/// Outcome probabilities when the vertices in `a` are measured in the
/// eigenbasis of `X` and the rest in the computational basis. Index layout
/// matches the basis index of the outcome string.
pub fn outcome_distribution(state: &DenseState, a: &[usize]) -> Vec<f64> {
    let lay = Layout::new(state.n, state.d);
    let mut probs = vec![0.0; lay.dim];
    for (w, c) in &state.components {
        match c {
            Component::Pure(v) => {
                let mut t = v.clone();
                for &j in a {
                    t = fourier_on(&lay, &t, j, false);
                }
                for (p, x) in probs.iter_mut().zip(&t) {
                    *p += w * x.norm_sqr();
                }
            }
            Component::MaximallyMixed => {
                let u = w / lay.dim as f64;
                probs.iter_mut().for_each(|p| *p += u);
            }
        }
    }
    probs
}

/// Dense verification operator with its spectrum.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct OmegaDense {
    pub dim: usize,
    /// Eigenvalues of `Omega_p` in decreasing order.
    pub eigenvalues: Vec<f64>,
    /// `(trace of P_A, d^(n-|A|))` per cover set.
    pub projector_traces: Vec<(f64, u64)>,
    pub hermiticity_error: f64,
}

/// `Omega_p` assembled column by column from dense projector applications.
pub fn omega_matrix(spec: &ProtocolSpec, budget: &Budget) -> Result<(DMatrix<C64>, Vec<f64>)> {
    let hg = spec.hypergraph();
    Budget::check("operator dimension", hilbert_dim(hg.dim(), hg.n()), budget.operator_dim)?;
    let lay = Layout::of(hg);
    let dim = lay.dim;
    let cover = spec.cover();
    let p = spec.hedge();
    let columns: Vec<(Vec<C64>, Vec<C64>)> = (0..dim)
        .into_par_iter()
        .map(|c| {
            let mut col = vec![C64::new(0.0, 0.0); dim];
            let mut diag = Vec::with_capacity(cover.len());
            for (s, mu) in cover.sets.iter().zip(&cover.weights) {
                let m = to_f64(mu) * (1.0 - p);
                let mut here = C64::new(0.0, 0.0);
                for (r, a) in project_basis_vector(hg, &lay, s, c) {
                    col[r] += a * m;
                    if r == c {
                        here += a;
                    }
                }
                diag.push(here);
            }
            col[c] += C64::new(p, 0.0);
            (col, diag)
        })
        .collect();
    let mut traces = vec![0.0; cover.len()];
    let mut m = DMatrix::<C64>::zeros(dim, dim);
    for (c, (col, diag)) in columns.into_iter().enumerate() {
        for (r, x) in col.into_iter().enumerate() {
            m[(r, c)] = x;
        }
        for (t, x) in traces.iter_mut().zip(diag) {
            *t += x.re;
        }
    }
    Ok((m, traces))
}

pub fn omega_dense(spec: &ProtocolSpec, budget: &Budget) -> Result<OmegaDense> {
    let hg = spec.hypergraph();
    let (m, traces) = omega_matrix(spec, budget)?;
    let dim = m.nrows();
    let herm = (&m - m.adjoint()).iter().map(|x| x.norm()).fold(0.0, f64::max);
    let mut eig: Vec<f64> = if hg.dim() == 2 {
        let real = DMatrix::<f64>::from_fn(dim, dim, |r, c| 0.5 * (m[(r, c)].re + m[(c, r)].re));
        SymmetricEigen::new(real).eigenvalues.iter().copied().collect()
    } else {
        let h = DMatrix::<C64>::from_fn(dim, dim, |r, c| (m[(r, c)] + m[(c, r)].conj()) * 0.5);
        SymmetricEigen::new(h).eigenvalues.iter().copied().collect()
    };
    eig.sort_by(|a, b| b.total_cmp(a));
    let expected = spec
        .cover()
        .sets
        .iter()
        .map(|s| hilbert_dim(hg.dim(), hg.n() - s.len()));
    Ok(OmegaDense {
        dim,
        eigenvalues: eig,
        projector_traces: traces.into_iter().zip(expected).collect(),
        hermiticity_error: herm,
    })
}

/// Groups sorted (decreasing) eigenvalues whose neighbors differ by at most
/// `gap`, returning `(mean, count)` per cluster.
pub fn cluster_eigenvalues(sorted: &[f64], gap: f64) -> Vec<(f64, usize)> {
    let mut out: Vec<(f64, usize, f64)> = Vec::new();
    let mut last = f64::NAN;
    for &x in sorted {
        match out.last_mut() {
            Some((sum, count, _)) if (last - x).abs() <= gap => {
                *sum += x;
                *count += 1;
            }
            _ => out.push((x, 1, x)),
        }
        last = x;
    }
    out.into_iter().map(|(s, c, _)| (s / c as f64, c)).collect()
}

/// Compares dense eigenvalues against an analytic spectrum: same cluster
/// multiplicities, and every eigenvalue within `tol` of its level. Returns
/// the largest deviation.
pub fn match_spectrum(dense: &[f64], analytic: &Spectrum, tol: f64) -> std::result::Result<f64, String> {
    let expected = analytic.expanded();
    if expected.len() != dense.len() {
        return Err(format!("dimension {} vs {}", dense.len(), expected.len()));
    }
    let clusters = cluster_eigenvalues(dense, 1e-8);
    let levels: Vec<(f64, usize)> = analytic
        .levels
        .iter()
        .map(|l| (l.hedged, l.multiplicity as usize))
        .collect();
    let mut merged: Vec<(f64, usize)> = Vec::new();
    for (v, c) in levels {
        match merged.last_mut() {
            Some((lv, lc)) if (*lv - v).abs() <= 1e-8 => *lc += c,
            _ => merged.push((v, c)),
        }
    }
    let dense_counts: Vec<usize> = clusters.iter().map(|c| c.1).collect();
    let analytic_counts: Vec<usize> = merged.iter().map(|c| c.1).collect();
    if dense_counts != analytic_counts {
        return Err(format!("multiplicities {dense_counts:?} vs {analytic_counts:?}"));
    }
    let dev = dense
        .iter()
        .zip(&expected)
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max);
    if dev > tol {
        return Err(format!("max eigenvalue deviation {dev:e} exceeds {tol:e}"));
    }
    Ok(dev)
}

/// The state `(1-eps)|G><G| + eps|G_k><G_k|` with `k` a vertex of least
/// coverage, which attains the largest passing probability at infidelity `eps`.
#[derive(Clone, Debug)]
pub struct WorstCase {
    pub state: DenseState,
    pub vertex: usize,
    pub pass_probability: f64,
    /// `1 - nu_p eps`.
    pub expected: f64,
    pub fidelity: f64,
    pub verified: bool,
}

pub fn worst_case_state(spec: &ProtocolSpec, epsilon: f64, budget: &Budget) -> Result<WorstCase> {
    if !(0.0..1.0).contains(&epsilon) {
        return Err(Error::BadParams(format!("epsilon must lie in [0, 1), got {epsilon}")));
    }
    let hg = spec.hypergraph();
    let summary = spectral_summary(spec);
    let k = summary.beta_vertex.unwrap_or(0);
    let g = state_vector(hg, budget)?;
    let mut x = vec![0u32; hg.n()];
    x[k] = 1;
    let gk = syndrome_state(hg, &x, budget)?;
    let state = DenseState::mixture(
        hg.n(),
        hg.dim(),
        vec![
            (1.0 - epsilon, Component::Pure(g.clone())),
            (epsilon, Component::Pure(gk)),
        ],
    )?;
    let pass = pass_probability(spec, &state);
    let expected = 1.0 - summary.nu_p * epsilon;
    let fidelity = state.fidelity_with(&g);
    let verified = (pass - expected).abs() <= 1e-10 && (fidelity - (1.0 - epsilon)).abs() <= 1e-10;
    Ok(WorstCase {
        state,
        vertex: k,
        pass_probability: pass,
        expected,
        fidelity,
        verified,
    })
}
