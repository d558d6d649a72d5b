//! Test counts of competing verification protocols and the data series for
//! the resource-cost plots.
//!
//! Competitor counts grow like `n^21` or `2^(n^2)`, so every number is a
//! [`Magnitude`]: an exact big integer when one is available, otherwise a
//! base-10 logarithm.

use std::fmt;

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Serialize, Serializer};
use serde_json::{json, Map, Value};

use crate::counts::{tests_adversarial, tests_adversarial_hedged, tests_nonadversarial, PrecisionTarget};
use crate::error::{Error, Result};
use crate::hypergraph::{family, Hypergraph};
use crate::oracle::char_support;
use crate::protocol::{hedging_params, plm_summary, HedgeChoice};
use crate::rational::{big_ln, ceil_u64, format_rational, ratio, to_f64};
use crate::Budget;

/// Values below this are stored as exact integers.
const EXACT_LIMIT: f64 = 1e15;

#[derive(Clone, Debug, PartialEq)]
pub enum Magnitude {
    Exact(BigUint),
    Log10(f64),
}

impl Magnitude {
    pub fn from_u64(v: u64) -> Self {
        Magnitude::Exact(BigUint::from(v))
    }

    /// `ceil(exp(ln_value))`, exact when small.
    pub fn ceil_from_ln(ln_value: f64) -> Self {
        let v = ln_value.exp();
        if v.is_finite() && v < EXACT_LIMIT {
            Magnitude::Exact(BigUint::from(v.ceil().max(0.0) as u64))
        } else {
            Magnitude::Log10(ln_value / std::f64::consts::LN_10)
        }
    }

    pub fn log10(&self) -> f64 {
        match self {
            Magnitude::Exact(v) if v.is_zero() => f64::NEG_INFINITY,
            Magnitude::Exact(v) => big_ln(v) / std::f64::consts::LN_10,
            Magnitude::Log10(l) => *l,
        }
    }

    pub fn exact(&self) -> Option<&BigUint> {
        match self {
            Magnitude::Exact(v) => Some(v),
            Magnitude::Log10(_) => None,
        }
    }

    /// `m.dde+X` with three significant digits.
    pub fn scientific(&self) -> String {
        let l = self.log10();
        if !l.is_finite() {
            return "0".into();
        }
        let mut exp = l.floor();
        let mut mant = 10f64.powf(l - exp);
        if (mant * 100.0).round() >= 1000.0 {
            mant /= 10.0;
            exp += 1.0;
        }
        format!("{mant:.2}e{exp}")
    }

    /// Decimal digits when exact, otherwise scientific notation.
    pub fn decimal(&self) -> String {
        match self {
            Magnitude::Exact(v) => v.to_string(),
            Magnitude::Log10(_) => self.scientific(),
        }
    }

    fn json(&self) -> Value {
        match self.exact().and_then(ToPrimitive::to_u64) {
            Some(v) => json!(v),
            None => json!(self.decimal()),
        }
    }
}

impl fmt::Display for Magnitude {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.decimal())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundKind {
    Exact,
    Lower,
    Upper,
    /// The source only gives an approximate count.
    Estimate,
}

impl fmt::Display for BoundKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            BoundKind::Exact => "exact",
            BoundKind::Lower => "lower",
            BoundKind::Upper => "upper",
            BoundKind::Estimate => "estimate",
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct CompetitorCost {
    pub protocol: &'static str,
    pub tests: Magnitude,
    pub bound_kind: BoundKind,
    pub settings: Option<(Magnitude, BoundKind)>,
    /// Parameters the numbers were computed from.
    pub inputs: Map<String, Value>,
    /// Extra derived quantities.
    pub details: Map<String, Value>,
}

impl Serialize for CompetitorCost {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut m = Map::new();
        m.insert("protocol".into(), json!(self.protocol));
        m.insert("N".into(), self.tests.json());
        m.insert("N_decimal".into(), json!(self.tests.decimal()));
        m.insert("N_scientific".into(), json!(self.tests.scientific()));
        m.insert("log10_N".into(), json!(self.tests.log10()));
        m.insert("bound_kind".into(), json!(self.bound_kind));
        if let Some((v, k)) = &self.settings {
            m.insert("settings".into(), v.json());
            m.insert("settings_bound_kind".into(), json!(k));
        }
        m.insert("inputs".into(), Value::Object(self.inputs.clone()));
        for (k, v) in &self.details {
            m.insert(k.clone(), v.clone());
        }
        Value::Object(m).serialize(s)
    }
}

fn check_unit(name: &str, x: f64) -> Result<()> {
    if !(x > 0.0 && x < 1.0) {
        return Err(Error::BadParams(format!("{name} must lie in (0, 1), got {x}")));
    }
    Ok(())
}

fn ln_add(a: f64, b: f64) -> f64 {
    let (hi, lo) = if a >= b { (a, b) } else { (b, a) };
    hi + (lo - hi).exp().ln_1p()
}

/// Direct fidelity estimation with `g` Pauli operators of nonzero
/// expectation: `1 + 1/(eps^2 delta) + 2 (g/2^n)/eps^2 ln(2/delta)` measurements
/// on average, over `ceil(1/(eps^2 delta))` settings.
pub fn dfe_cost(g: &BigUint, n: usize, eps: f64, delta: f64) -> Result<CompetitorCost> {
    check_unit("epsilon", eps)?;
    check_unit("delta", delta)?;
    let dim = BigUint::one() << n;
    if *g < dim {
        return Err(Error::BadSupport { g: g.to_string(), n });
    }
    let ln_g_tilde = big_ln(g) - n as f64 * std::f64::consts::LN_2;
    let ln_a = (1.0 / (eps * eps * delta)).ln_1p();
    let ln_b = std::f64::consts::LN_2 + ln_g_tilde - 2.0 * eps.ln() + (2.0 / delta).ln().ln();
    let settings = Magnitude::ceil_from_ln(-(eps * eps * delta).ln());
    let mut details = Map::new();
    details.insert("g".into(), json!(g.to_string()));
    details.insert("g_tilde".into(), json!(ln_g_tilde.exp()));
    Ok(CompetitorCost {
        protocol: "dfe",
        tests: Magnitude::ceil_from_ln(ln_add(ln_a, ln_b)),
        bound_kind: BoundKind::Estimate,
        settings: Some((settings, BoundKind::Estimate)),
        inputs: inputs(&[("n", json!(n)), ("epsilon", json!(eps)), ("delta", json!(delta))]),
        details,
    })
}

fn inputs(items: &[(&str, Value)]) -> Map<String, Value> {
    items.iter().map(|(k, v)| (k.to_string(), v.clone())).collect()
}

/// Number of order-3 hyperedges containing each vertex.
pub fn mth_r(hg: &Hypergraph) -> Result<Vec<u32>> {
    if hg.order() > 3 {
        return Err(Error::OrderTooHigh(hg.order()));
    }
    Ok((0..hg.n())
        .map(|j| hg.edges().iter().filter(|e| e.order() == 3 && e.contains(j)).count() as u32)
        .collect())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MthVariant {
    /// `(2^(4r+7) ln 2) n^21` with `r = max r_j`.
    Original,
    /// `(sum_j 2^r_j)^2 ln(1/delta) / (2 eps^2)`.
    NonadversarialBound,
}

impl std::str::FromStr for MthVariant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "original" => Ok(MthVariant::Original),
            "nonadversarial_bound" | "nonadversarial" | "adapted" => Ok(MthVariant::NonadversarialBound),
            _ => Err(Error::BadParams(format!("unknown MTH variant {s:?}"))),
        }
    }
}

pub fn mth_cost(hg: &Hypergraph, eps: f64, delta: f64, variant: MthVariant) -> Result<CompetitorCost> {
    check_unit("epsilon", eps)?;
    check_unit("delta", delta)?;
    let r = mth_r(hg)?;
    let n = hg.n();
    let sum2: BigUint = r.iter().map(|&x| BigUint::one() << x).sum();
    let sum4: BigUint = r.iter().map(|&x| BigUint::one() << (2 * x)).sum();
    let r_max = r.iter().copied().max().unwrap_or(0);
    let ln_n = match variant {
        MthVariant::NonadversarialBound => {
            2.0 * big_ln(&sum2) + (1.0 / delta).ln().ln() - std::f64::consts::LN_2 - 2.0 * eps.ln()
        }
        MthVariant::Original => {
            (4 * r_max + 7) as f64 * std::f64::consts::LN_2 + std::f64::consts::LN_2.ln() + 21.0 * (n as f64).ln()
        }
    };
    let mut details = Map::new();
    details.insert("r".into(), json!(r));
    details.insert("sum_2_r".into(), json!(sum2.to_string()));
    details.insert("r_max".into(), json!(r_max));
    details.insert(
        "variant".into(),
        json!(match variant {
            MthVariant::Original => "original",
            MthVariant::NonadversarialBound => "nonadversarial_bound",
        }),
    );
    Ok(CompetitorCost {
        protocol: "mth",
        tests: Magnitude::ceil_from_ln(ln_n),
        bound_kind: BoundKind::Lower,
        settings: Some((Magnitude::Exact(sum4), BoundKind::Exact)),
        inputs: inputs(&[("n", json!(n)), ("epsilon", json!(eps)), ("delta", json!(delta))]),
        details,
    })
}

/// Closed forms of `sum_j 2^r_j` for the families where they are known.
pub fn sum_2_r_closed_form(family_name: &str, params: &[usize]) -> Option<BigUint> {
    let one = BigUint::one();
    let p = |i: usize| params.get(i).copied();
    match family_name {
        "union-jack-chain" => {
            let n = 3 * p(0)? + 2;
            Some(BigUint::from(16 * n - 48))
        }
        "cluster-1d" => match p(0)? {
            3 => Some(BigUint::from(6u32)),
            n if n >= 4 => Some(BigUint::from(8 * n - 20)),
            _ => None,
        },
        "union-jack-lattice" => {
            let t = p(0)?;
            Some(BigUint::from(16 * (17 * t * t + 13) - 16 * 28 * t))
        }
        "complete-order-3" => {
            let n = p(0)?;
            Some(BigUint::from(n) * (one << ((n - 1) * (n - 2) / 2)))
        }
        "disjoint-triples" => Some(BigUint::from(2 * p(0)?)),
        _ => None,
    }
}

/// `(2 ln 2) n^3 k^(18/7) + n k`, valid for `k >= (4n)^7`, at
/// `eps = delta = k^(-1/7)`.
pub fn tm_cost(n: usize, k: Option<&BigUint>) -> Result<CompetitorCost> {
    if n == 0 {
        return Err(Error::BadParams("n must be positive".into()));
    }
    let k_min = BigUint::from(4 * n as u64).pow(7);
    let k = k.cloned().unwrap_or_else(|| k_min.clone());
    if k < k_min {
        return Err(Error::BadParams(format!(
            "k must be at least (4n)^7 = {k_min}, got {k}"
        )));
    }
    let ln_k = big_ln(&k);
    let nf = n as f64;
    let a = (2.0 * std::f64::consts::LN_2).ln() + 3.0 * nf.ln() + 18.0 / 7.0 * ln_k;
    let b = nf.ln() + ln_k;
    let eps = (-ln_k / 7.0).exp();
    let mut details = Map::new();
    details.insert("epsilon".into(), json!(eps));
    details.insert("delta".into(), json!(eps));
    Ok(CompetitorCost {
        protocol: "tm",
        tests: Magnitude::ceil_from_ln(ln_add(a, b)),
        bound_kind: BoundKind::Lower,
        settings: None,
        inputs: inputs(&[("n", json!(n)), ("k", json!(k.to_string()))]),
        details,
    })
}

/// About `ceil(m^3 / (delta eps))` tests, compared with the hedged coloring
/// protocol with `m` colors.
pub fn hh_cost(m: u32, eps: &BigRational, delta: &BigRational) -> Result<CompetitorCost> {
    if m < 2 {
        return Err(Error::BadParams(format!("m must be at least 2, got {m}")));
    }
    let t = PrecisionTarget::new(eps.clone(), delta.clone())?;
    let m3 = BigRational::from_integer((m as i64).pow(3).into());
    let n = ceil_u64(&(m3 / (delta * eps)))?;
    let ours = tests_adversarial_hedged(
        &ratio(1, m as i64),
        &t,
        HedgeChoice::Named(crate::protocol::HedgeName::Auto),
    )?
    .n_exact
    .unwrap_or(1);
    let mut details = Map::new();
    details.insert("hedged_coloring_N".into(), json!(ours));
    details.insert("ratio".into(), json!(n as f64 / ours as f64));
    Ok(CompetitorCost {
        protocol: "hh",
        tests: Magnitude::from_u64(n),
        bound_kind: BoundKind::Estimate,
        settings: Some((Magnitude::from_u64(m as u64), BoundKind::Exact)),
        inputs: inputs(&[
            ("m", json!(m)),
            ("epsilon", json!(format_rational(eps))),
            ("delta", json!(format_rational(delta))),
        ]),
        details,
    })
}

/// Measuring all `2^n - 1` nontrivial stabilizers uniformly: about
/// `ceil(ln(1/delta) / (nu eps))` tests with `nu = 2^(n-1)/(2^n - 1)`.
pub fn plm_cost(n: usize, eps: &BigRational, delta: &BigRational) -> Result<CompetitorCost> {
    let t = PrecisionTarget::new(eps.clone(), delta.clone())?;
    let s = plm_summary(n)?;
    let x = (1.0 / to_f64(&t.delta)).ln() / (to_f64(&s.nu) * to_f64(&t.epsilon));
    let exact = tests_nonadversarial(&s.nu, &t)?.n();
    let mut details = Map::new();
    details.insert("nu".into(), json!(format_rational(&s.nu)));
    details.insert("beta".into(), json!(format_rational(&s.beta)));
    details.insert("N_from_nu".into(), json!(exact));
    let settings = Magnitude::Exact((BigUint::one() << n) - 1u32);
    Ok(CompetitorCost {
        protocol: "plm",
        tests: Magnitude::Exact(BigUint::from(x.ceil() as u64)),
        bound_kind: BoundKind::Estimate,
        settings: Some((settings, BoundKind::Exact)),
        inputs: inputs(&[
            ("n", json!(n)),
            ("epsilon", json!(format_rational(eps))),
            ("delta", json!(format_rational(delta))),
        ]),
        details,
    })
}

/// `2n ceil(5 n^4 ln n / 32)` tests certifying infidelity `(2 sqrt(c) + 1)/n`
/// at significance `n^(1 - 5c/64)`, for `64/5 < c < (n-1)^2/4`. Also reports
/// the hedged coloring count with `m` colors at the same target.
pub fn tmmmf_cost(n: usize, c: f64, m: u32) -> Result<CompetitorCost> {
    let nf = n as f64;
    if !(c > 64.0 / 5.0 && c < (nf - 1.0).powi(2) / 4.0) {
        return Err(Error::BadParams(format!(
            "c must satisfy 64/5 < c < (n-1)^2/4, got c = {c} at n = {n}"
        )));
    }
    if m < 2 {
        return Err(Error::BadParams(format!("m must be at least 2, got {m}")));
    }
    let eps = (2.0 * c.sqrt() + 1.0) / nf;
    let ln_delta = (1.0 - 5.0 * c / 64.0) * nf.ln();
    let inner = (5.0 * nf.powi(4) * nf.ln() / 32.0).ceil();
    let tests = BigUint::from(2 * n as u64) * BigUint::from(inner as u64);
    let h = hedging_params(&ratio(1, m as i64))?.h_star;
    let ours = (h * -((1.0 - eps).ln() + ln_delta) / eps).floor();
    let mut details = Map::new();
    details.insert("epsilon".into(), json!(eps));
    details.insert("delta".into(), json!(ln_delta.exp()));
    details.insert("hedged_coloring_N".into(), json!(ours as u64));
    details.insert("h_star".into(), json!(h));
    Ok(CompetitorCost {
        protocol: "tmmmf",
        tests: Magnitude::Exact(tests),
        bound_kind: BoundKind::Exact,
        settings: None,
        inputs: inputs(&[("n", json!(n)), ("c", json!(c)), ("m", json!(m))]),
        details,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Figure {
    /// Nonadversarial costs at `eps = 0.01`, `delta = 0.05`.
    Fig2,
    /// Adversarial costs for 3-colorable states at `eps = delta = 1/(4n)`.
    Fig3,
}

impl std::str::FromStr for Figure {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "2" | "fig2" => Ok(Figure::Fig2),
            "3" | "fig3" => Ok(Figure::Fig3),
            _ => Err(Error::BadParams(format!("unknown figure {s:?}"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SeriesRow {
    pub n: usize,
    pub protocol: String,
    #[serde(rename = "N")]
    pub n_tests: String,
    pub log10_n: f64,
    pub bound_kind: String,
}

impl SeriesRow {
    fn new(n: usize, protocol: &str, tests: &Magnitude, kind: BoundKind) -> Self {
        SeriesRow {
            n,
            protocol: protocol.into(),
            n_tests: tests.decimal(),
            log10_n: tests.log10(),
            bound_kind: kind.to_string(),
        }
    }
}

/// Parameter that builds a family member with `n` qubits, if one exists.
fn family_param(name: &str, n: usize) -> Option<usize> {
    match name {
        "cluster-1d" if n >= 3 => Some(n),
        "union-jack-chain" if n >= 5 && (n - 2).is_multiple_of(3) => Some((n - 2) / 3),
        _ => None,
    }
}

/// Rows of `n,protocol,N,bound_kind`. The second plot uses 3-colorable states
/// with `nu = 1/3`, so no family is needed there.
pub fn figure_series(fig: Figure, family_name: &str, ns: &[usize], budget: &Budget) -> Result<Vec<SeriesRow>> {
    let mut rows = Vec::new();
    match fig {
        Figure::Fig2 => {
            if !matches!(family_name, "cluster-1d" | "union-jack-chain") {
                return Err(Error::BadParams(format!(
                    "the nonadversarial series covers cluster-1d and union-jack-chain, got {family_name:?}"
                )));
            }
            let t = PrecisionTarget::new(ratio(1, 100), ratio(1, 20))?;
            let cover = tests_nonadversarial(&ratio(1, 3), &t)?
                .n()
                .ok_or_else(|| Error::Unstable("cover count".into()))?;
            for &n in ns {
                let Some(param) = family_param(family_name, n) else {
                    continue;
                };
                let hg = family(family_name, &[param])?;
                rows.push(SeriesRow::new(
                    n,
                    "cover",
                    &Magnitude::from_u64(cover),
                    BoundKind::Exact,
                ));
                let g = char_support(&hg, budget)?.g;
                let dfe = dfe_cost(&g, n, 0.01, 0.05)?;
                rows.push(SeriesRow::new(n, "dfe", &dfe.tests, dfe.bound_kind));
                let mth = mth_cost(&hg, 0.01, 0.05, MthVariant::NonadversarialBound)?;
                rows.push(SeriesRow::new(n, "mth", &mth.tests, mth.bound_kind));
            }
        }
        Figure::Fig3 => {
            for &n in ns {
                if n < 3 {
                    continue;
                }
                let q = ratio(1, 4 * n as i64);
                let t = PrecisionTarget::new(q.clone(), q)?;
                let nu = ratio(1, 3);
                let report = tests_adversarial(&nu, &t)?;
                let (cover, kind) = match (report.n_exact, report.n_upper) {
                    (Some(v), _) => (v, BoundKind::Exact),
                    (None, Some(v)) => (v, BoundKind::Upper),
                    _ => return Err(Error::Unstable("cover count".into())),
                };
                rows.push(SeriesRow::new(n, "cover", &Magnitude::from_u64(cover), kind));
                let hedged = tests_adversarial_hedged(&nu, &t, HedgeChoice::Named(crate::protocol::HedgeName::Auto))?
                    .n_exact
                    .ok_or_else(|| Error::Unstable("hedged count".into()))?;
                rows.push(SeriesRow::new(
                    n,
                    "hedged",
                    &Magnitude::from_u64(hedged),
                    BoundKind::Exact,
                ));
                let tm = tm_cost(n, None)?;
                rows.push(SeriesRow::new(n, "tm", &tm.tests, tm.bound_kind));
            }
        }
    }
    Ok(rows)
}

pub fn series_csv(rows: &[SeriesRow]) -> String {
    let mut out = String::from("n,protocol,N,bound_kind\n");
    for r in rows {
        out.push_str(&format!("{},{},{},{}\n", r.n, r.protocol, r.n_tests, r.bound_kind));
    }
    out
}
