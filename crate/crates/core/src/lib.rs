//! Verification of qubit and qudit hypergraph states with local Pauli
//! measurements.
//!
//! The crate covers the whole pipeline: hypergraph construction, independence
//! covers and the fractional-coloring LP, analytic spectra of the resulting
//! verification operators, sample-complexity formulas, a dense brute-force
//! oracle for cross-checking, Monte Carlo verification runs, and cost
//! calculators for competing protocols.

pub mod compare;
pub mod counts;
pub mod covers;
pub mod error;
pub mod hypergraph;
pub mod oracle;
pub mod protocol;
pub mod rational;
pub mod simulate;

pub use error::{Error, Result};
pub use hypergraph::{family, Family, Hypergraph};

use serde::{Deserialize, Serialize};

/// Size caps for exhaustive computations.
///
/// `HGV_BUDGET` overrides the defaults. It accepts either a bare integer,
/// which sets `state_dim`, or a comma list like `state_dim=4096,lp=20`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Budget {
    /// Max vertices for exact independence and clique numbers.
    pub exact_alpha: usize,
    /// Max vertices for exact chromatic number by search.
    pub exact_chi: usize,
    /// Max vertices for maximal independent set enumeration in the LP.
    pub lp: usize,
    /// Max number of maximal independent sets fed to the LP.
    pub lp_columns: usize,
    /// Max vertices for support enumeration of the analytic spectrum.
    pub spectrum: usize,
    /// Max Hilbert-space dimension for dense state vectors.
    pub state_dim: u64,
    /// Max Hilbert-space dimension for dense operators.
    pub operator_dim: u64,
    /// Max qubits for the brute-force characteristic-function support.
    pub gsupport: usize,
    /// Max qubits for the rank-based characteristic-function support.
    pub gsupport_fast: usize,
    /// Max vertices for the reduced-state norm search.
    pub kappa: usize,
}

impl Default for Budget {
    fn default() -> Self {
        Budget {
            exact_alpha: 30,
            exact_chi: 20,
            lp: 24,
            lp_columns: 20_000,
            spectrum: 24,
            state_dim: 1 << 24,
            operator_dim: 1 << 12,
            gsupport: 12,
            gsupport_fast: 22,
            kappa: 14,
        }
    }
}

impl Budget {
    /// Defaults with `HGV_BUDGET` applied.
    pub fn from_env() -> Result<Self> {
        match std::env::var("HGV_BUDGET") {
            Ok(spec) => Budget::default().with_overrides(&spec),
            Err(_) => Ok(Budget::default()),
        }
    }

    pub fn with_overrides(mut self, spec: &str) -> Result<Self> {
        let bad = || Error::BadParams(format!("invalid budget override {spec:?}"));
        let spec = spec.trim();
        if spec.is_empty() {
            return Ok(self);
        }
        if let Ok(v) = spec.parse::<u64>() {
            self.state_dim = v;
            return Ok(self);
        }
        for item in spec.split(',') {
            let (key, value) = item.split_once('=').ok_or_else(bad)?;
            let value: u64 = value.trim().parse().map_err(|_| bad())?;
            let small = usize::try_from(value).map_err(|_| bad())?;
            match key.trim() {
                "exact_alpha" => self.exact_alpha = small,
                "exact_chi" => self.exact_chi = small,
                "lp" => self.lp = small,
                "lp_columns" => self.lp_columns = small,
                "spectrum" => self.spectrum = small,
                "state_dim" => self.state_dim = value,
                "operator_dim" => self.operator_dim = value,
                "gsupport" => self.gsupport = small,
                "gsupport_fast" => self.gsupport_fast = small,
                "kappa" => self.kappa = small,
                _ => return Err(bad()),
            }
        }
        Ok(self)
    }

    pub(crate) fn check(what: &'static str, size: u64, limit: u64) -> Result<()> {
        if size > limit {
            Err(Error::BudgetExceeded { what, size, limit })
        } else {
            Ok(())
        }
    }
}

/// `d^n` as u64, saturating at `u64::MAX`.
pub fn hilbert_dim(d: u32, n: usize) -> u64 {
    (d as u64).checked_pow(n as u32).unwrap_or(u64::MAX)
}
