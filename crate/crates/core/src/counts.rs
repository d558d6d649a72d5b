//! Numbers of tests and fidelity intervals.
//!
//! Ceilings of rational expressions are exact. Ceilings and floors of
//! transcendental expressions are evaluated in f64 and rejected as
//! [`Error::Unstable`] when a relative perturbation of 1e-9 would change
//! the integer.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::protocol::{h_of, hedging_params, HedgeChoice, HedgeName};
use crate::rational::{format_rational, int, ratio, serde_rational, to_f64};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PrecisionTarget {
    #[serde(with = "serde_rational")]
    pub epsilon: BigRational,
    #[serde(with = "serde_rational")]
    pub delta: BigRational,
}

impl PrecisionTarget {
    pub fn new(epsilon: BigRational, delta: BigRational) -> Result<Self> {
        let unit = |x: &BigRational| x.is_positive() && *x < BigRational::one();
        if !unit(&epsilon) || !unit(&delta) {
            return Err(Error::BadParams(format!(
                "epsilon and delta must lie in (0, 1), got {} and {}",
                format_rational(&epsilon),
                format_rational(&delta)
            )));
        }
        Ok(PrecisionTarget { epsilon, delta })
    }

    /// Target fidelity `1 - epsilon`.
    pub fn fidelity(&self) -> BigRational {
        BigRational::one() - &self.epsilon
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Scenario {
    Nonadversarial,
    Adversarial,
    AdversarialHedged,
}

impl std::str::FromStr for Scenario {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "nonadversarial" => Ok(Scenario::Nonadversarial),
            "adversarial" => Ok(Scenario::Adversarial),
            "adversarial_hedged" | "hedged" => Ok(Scenario::AdversarialHedged),
            _ => Err(Error::BadParams(format!("unknown scenario {s:?}"))),
        }
    }
}

/// One number in a report with the expression that produced it.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Formula {
    pub quantity: String,
    pub formula: String,
    pub value: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CountReport {
    pub scenario: Scenario,
    #[serde(with = "serde_rational")]
    pub nu: BigRational,
    #[serde(with = "serde_rational")]
    pub epsilon: BigRational,
    #[serde(with = "serde_rational")]
    pub delta: BigRational,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub hedge: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub h: Option<f64>,
    #[serde(rename = "N_exact")]
    pub n_exact: Option<u64>,
    #[serde(rename = "N_upper")]
    pub n_upper: Option<u64>,
    #[serde(rename = "N_lower")]
    pub n_lower: Option<u64>,
    pub formulas: Vec<Formula>,
}

impl CountReport {
    fn new(scenario: Scenario, nu: &BigRational, t: &PrecisionTarget) -> Self {
        CountReport {
            scenario,
            nu: nu.clone(),
            epsilon: t.epsilon.clone(),
            delta: t.delta.clone(),
            hedge: None,
            h: None,
            n_exact: None,
            n_upper: None,
            n_lower: None,
            formulas: Vec::new(),
        }
    }

    fn record(&mut self, quantity: &str, formula: &str, value: f64) {
        self.formulas.push(Formula {
            quantity: quantity.into(),
            formula: formula.into(),
            value,
        });
    }

    /// The number to use: the exact count when known, else the upper bound.
    pub fn n(&self) -> Option<u64> {
        self.n_exact.or(self.n_upper)
    }
}

fn check_nu(nu: &BigRational) -> Result<()> {
    if !nu.is_positive() || *nu > BigRational::one() {
        return Err(Error::BadNu(format_rational(nu)));
    }
    Ok(())
}

fn exact_ceil(r: &BigRational, what: &str) -> Result<u64> {
    r.ceil()
        .to_integer()
        .to_u64()
        .ok_or_else(|| Error::BadGap(format!("{what} = {} does not fit in 64 bits", format_rational(r))))
}

#[derive(Clone, Copy)]
enum Round {
    Ceil,
    Floor,
}

/// Rounds a transcendental value, refusing when the result sits within a
/// relative 1e-12 of an integer boundary.
fn guarded(x: f64, round: Round, what: &str) -> Result<u64> {
    if !x.is_finite() || x < 0.0 {
        return Err(Error::BadGap(format!("{what} evaluates to {x}")));
    }
    if x >= 9.0e18 {
        return Err(Error::BadGap(format!("{what} = {x:e} does not fit in 64 bits")));
    }
    let f = |v: f64| match round {
        Round::Ceil => v.ceil(),
        Round::Floor => v.floor(),
    };
    let tol = 1e-12 * x.abs().max(1.0);
    if f(x - tol) != f(x + tol) {
        return Err(Error::Unstable(format!("{what} = {x} is too close to an integer")));
    }
    Ok(f(x) as u64)
}

/// `ln(1/(F delta))` with `F = 1 - epsilon`.
fn log_inv_f_delta(t: &PrecisionTarget) -> f64 {
    -(to_f64(&t.fidelity()).ln() + to_f64(&t.delta).ln())
}

/// Smallest `N` with `(1 - nu eps)^N <= delta`.
pub fn tests_nonadversarial(nu: &BigRational, t: &PrecisionTarget) -> Result<CountReport> {
    check_nu(nu)?;
    let q = BigRational::one() - nu * &t.epsilon;
    if !q.is_positive() {
        return Err(Error::BadGap("1 - nu*epsilon must be positive".into()));
    }
    let ne = to_f64(&(nu * &t.epsilon));
    let ln_delta = to_f64(&t.delta).ln();
    let x = ln_delta / (-ne).ln_1p();
    let exact = match guarded(x, Round::Ceil, "ln(delta)/ln(1-nu*eps)") {
        Ok(v) => v,
        Err(Error::Unstable(msg)) => exact_power_count(&q, &t.delta, x).ok_or(Error::Unstable(msg))?,
        Err(e) => return Err(e),
    };
    let y = -ln_delta / ne;
    let upper = guarded(y, Round::Ceil, "ln(1/delta)/(nu*eps)")?;
    let mut r = CountReport::new(Scenario::Nonadversarial, nu, t);
    r.n_exact = Some(exact.max(1));
    r.n_upper = Some(upper.max(1));
    r.record("N_exact", "ceil(ln(delta) / ln(1 - nu*eps))", x);
    r.record("N_upper", "ceil(ln(1/delta) / (nu*eps))", y);
    Ok(r)
}

/// Settles `ceil(ln delta / ln q)` exactly near an integer by comparing
/// rational powers, for moderate counts.
fn exact_power_count(q: &BigRational, delta: &BigRational, approx: f64) -> Option<u64> {
    let k = approx.round();
    if !(1.0..=20_000.0).contains(&k) {
        return None;
    }
    let k = k as u64;
    let pow = |e: u64| num_traits::pow(q.clone(), e as usize);
    let at_k = pow(k);
    if at_k <= *delta {
        if k == 1 || pow(k - 1) > *delta {
            Some(k)
        } else {
            Some(k - 1)
        }
    } else {
        Some(k + 1)
    }
}

/// Infidelity interval `[(1-r)/(1-tau), (1-r)/nu]` from a passing rate `r`,
/// clipped to `[0, 1]`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct FidelityInterval {
    pub lower: f64,
    pub upper: f64,
}

pub fn fidelity_interval(pass_rate: f64, nu: f64, tau: f64) -> FidelityInterval {
    let miss = (1.0 - pass_rate).clamp(0.0, 1.0);
    let clip = |x: f64| if x.is_finite() { x.clamp(0.0, 1.0) } else { 1.0 };
    FidelityInterval {
        lower: clip(miss / (1.0 - tau)),
        upper: clip(miss / nu),
    }
}

/// Adversarial bounds
/// `min(ceil((1-delta)/(nu delta eps)), ceil(1/(delta eps) - 1)) <= N <= ceil((1-delta)/(nu delta eps))`,
/// with the lower bound attained when `nu >= 1/2`.
pub fn tests_adversarial(nu: &BigRational, t: &PrecisionTarget) -> Result<CountReport> {
    check_nu(nu)?;
    let one = BigRational::one();
    let de = &t.delta * &t.epsilon;
    let upper_r = (&one - &t.delta) / (nu * &de);
    let alt_r = de.recip() - &one;
    let upper = exact_ceil(&upper_r, "(1-delta)/(nu*delta*eps)")?;
    let alt = exact_ceil(&alt_r, "1/(delta*eps) - 1")?;
    let lower = upper.min(alt);
    let mut r = CountReport::new(Scenario::Adversarial, nu, t);
    r.n_upper = Some(upper.max(1));
    r.n_lower = Some(lower.max(1));
    if *nu >= ratio(1, 2) {
        r.n_exact = r.n_lower;
    }
    r.record("N_upper", "ceil((1-delta) / (nu*delta*eps))", to_f64(&upper_r));
    r.record(
        "N_lower",
        "min(ceil((1-delta) / (nu*delta*eps)), ceil(1/(delta*eps) - 1)); attained for nu >= 1/2",
        lower as f64,
    );
    Ok(r)
}

/// Hedged adversarial count `floor(h ln(1/(F delta)) / eps)` with the three
/// analytic upper bounds.
pub fn tests_adversarial_hedged(nu: &BigRational, t: &PrecisionTarget, choice: HedgeChoice) -> Result<CountReport> {
    check_nu(nu)?;
    let nu_f = to_f64(nu);
    let (p, h, label) = match choice {
        HedgeChoice::Named(HedgeName::Auto) => {
            let hp = hedging_params(nu)?;
            (hp.p_star, hp.h_star, "p = p*(nu), h = -1/(p* ln p*)")
        }
        HedgeChoice::Named(HedgeName::NuOverE) => {
            let p = nu_f / std::f64::consts::E;
            (p, h_of(p, nu_f), "p = nu/e, h = h(p, nu)")
        }
        HedgeChoice::Explicit(p) => {
            if !(p > 0.0 && p < 1.0) {
                return Err(Error::BadParams(format!(
                    "hedging probability must lie in (0, 1), got {p}"
                )));
            }
            (p, h_of(p, nu_f), "explicit p, h = h(p, nu)")
        }
        HedgeChoice::Named(HedgeName::None) => {
            return Err(Error::BadParams("the hedged count needs a hedging probability".into()))
        }
    };
    let ln = log_inv_f_delta(t);
    let eps = to_f64(&t.epsilon);
    let x = h * ln / eps;
    let n = guarded(x, Round::Floor, "h ln(1/(F delta)) / eps")?;
    let e = std::f64::consts::E;
    let b1 = ln / ((1.0 - nu_f + nu_f * nu_f / e) * nu_f * eps);
    let b2 = (1.0 + e * nu_f - nu_f) * ln / (nu_f * eps);
    let b3 = e * ln / (nu_f * eps);
    let mut r = CountReport::new(Scenario::AdversarialHedged, nu, t);
    r.hedge = Some(p);
    r.h = Some(h);
    r.n_exact = Some(n.max(1));
    r.n_upper = Some((b1.floor() as u64).max(1));
    r.record(
        "N_exact",
        &format!("floor(h ln(1/(F delta)) / eps), F = 1 - eps, {label}"),
        x,
    );
    r.record("bound_1", "ln(1/(F delta)) / ((1 - nu + nu^2/e) nu eps)", b1);
    r.record("bound_2", "(1 + e nu - nu) ln(1/(F delta)) / (nu eps)", b2);
    r.record("bound_3", "e ln(1/(F delta)) / (nu eps)", b3);
    Ok(r)
}

/// Dispatches on the scenario.
pub fn tests_for(scenario: Scenario, nu: &BigRational, t: &PrecisionTarget, hedge: HedgeChoice) -> Result<CountReport> {
    match scenario {
        Scenario::Nonadversarial => tests_nonadversarial(nu, t),
        Scenario::Adversarial => tests_adversarial(nu, t),
        Scenario::AdversarialHedged => tests_adversarial_hedged(nu, t, hedge),
    }
}

/// GME threshold infidelity `2^(1-k)` for an order-k hypergraph.
pub fn gme_epsilon(k: u32) -> Result<BigRational> {
    if k < 2 {
        return Err(Error::BadOrder(k));
    }
    Ok(BigRational::new(BigInt::one(), BigInt::one() << (k - 1)))
}

/// Counts for certifying genuine multipartite entanglement: the ordinary
/// counts at `eps = 2^(1-k)`.
pub fn gme_tests(
    k: u32,
    nu: &BigRational,
    delta: &BigRational,
    scenario: Scenario,
    hedge: HedgeChoice,
) -> Result<CountReport> {
    let t = PrecisionTarget::new(gme_epsilon(k)?, delta.clone())?;
    tests_for(scenario, nu, &t, hedge)
}

/// Infidelity that guarantees trace distance at most `d`: `1 - F <= d^2`.
pub fn infidelity_for_trace_distance(d: &BigRational) -> BigRational {
    d * d
}

/// `[1 - sqrt(F), sqrt(1 - F)]`.
pub fn trace_distance_bracket(fidelity: f64) -> (f64, f64) {
    let f = fidelity.clamp(0.0, 1.0);
    (1.0 - f.sqrt(), (1.0 - f).sqrt())
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SupremacyBudget {
    pub n: u64,
    pub colors: u64,
    #[serde(with = "serde_rational")]
    pub trace_distance: BigRational,
    pub count: CountReport,
    /// `N / n`.
    pub per_qubit: f64,
}

/// Hedged coloring count at trace distance `1/192`, i.e. `eps = 1/192^2`.
pub fn supremacy_budget(n: u64, delta: &BigRational, m: u64) -> Result<SupremacyBudget> {
    if n == 0 || m < 2 {
        return Err(Error::BadParams("need n >= 1 and m >= 2".into()));
    }
    let d = ratio(1, 192);
    let t = PrecisionTarget::new(infidelity_for_trace_distance(&d), delta.clone())?;
    let nu = int(m as i64).recip();
    let count = tests_adversarial_hedged(&nu, &t, HedgeChoice::Named(HedgeName::Auto))?;
    let per_qubit = count.n_exact.unwrap_or(0) as f64 / n as f64;
    Ok(SupremacyBudget {
        n,
        colors: m,
        trace_distance: d,
        count,
        per_qubit,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::parse_rational;

    fn target(e: &str, d: &str) -> PrecisionTarget {
        PrecisionTarget::new(parse_rational(e).unwrap(), parse_rational(d).unwrap()).unwrap()
    }

    #[test]
    fn nonadversarial_examples() {
        let r = tests_nonadversarial(&ratio(1, 2), &target("0.01", "0.05")).unwrap();
        assert_eq!(r.n_exact, Some(598));
        assert_eq!(r.n_upper, Some(600));
        let r = tests_nonadversarial(&ratio(1, 3), &target("0.01", "0.05")).unwrap();
        assert_eq!(r.n_exact, Some(898));
        assert_eq!(r.n_upper, Some(899));
    }

    #[test]
    fn exact_fallback_near_integers() {
        // (1/2)^3 = 1/8 exactly.
        let t = target("1/2", "1/8");
        let r = tests_nonadversarial(&int(1), &t).unwrap();
        assert_eq!(r.n_exact, Some(3));
    }

    #[test]
    fn adversarial_examples() {
        let r = tests_adversarial(&ratio(1, 2), &target("0.1", "0.1")).unwrap();
        assert_eq!(r.n_exact, Some(99));
        assert_eq!(r.n_upper, Some(180));
        let r = tests_adversarial(&ratio(1, 3), &target("1/12", "1/12")).unwrap();
        assert_eq!(r.n_upper, Some(396));
        assert_eq!(r.n_exact, None);
    }

    #[test]
    fn hedged_examples() {
        let r = tests_adversarial_hedged(
            &ratio(1, 3),
            &target("0.01", "0.01"),
            HedgeChoice::Named(HedgeName::Auto),
        )
        .unwrap();
        assert_eq!(r.n_exact, Some(1870));
        let b: Vec<f64> = r.formulas.iter().skip(1).map(|f| f.value).collect();
        assert!(b[0] <= b[1] && b[1] <= b[2]);
    }

    #[test]
    fn gme_examples() {
        let d = parse_rational("0.05").unwrap();
        let hedge = HedgeChoice::Named(HedgeName::Auto);
        let n = |k, nu, s| gme_tests(k, &nu, &d, s, hedge).unwrap().n_exact;
        assert_eq!(n(2, ratio(1, 2), Scenario::Nonadversarial), Some(11));
        assert_eq!(n(3, ratio(1, 3), Scenario::Nonadversarial), Some(35));
        assert_eq!(n(2, ratio(1, 2), Scenario::AdversarialHedged), Some(23));
        assert_eq!(n(3, ratio(1, 3), Scenario::AdversarialHedged), Some(53));
        assert_eq!(gme_epsilon(1).unwrap_err(), Error::BadOrder(1));
    }

    #[test]
    fn intervals() {
        assert_eq!(
            fidelity_interval(1.0, 0.5, 0.0),
            FidelityInterval { lower: 0.0, upper: 0.0 }
        );
        let i = fidelity_interval(0.99, 0.5, 0.0);
        assert!((i.lower - 0.01).abs() < 1e-12 && (i.upper - 0.02).abs() < 1e-12);
        assert!((fidelity_interval(0.99, 1.0 / 3.0, 0.0).upper - 0.03).abs() < 1e-12);
        assert_eq!(trace_distance_bracket(1.0), (0.0, 0.0));
    }

    #[test]
    fn supremacy() {
        let eps = infidelity_for_trace_distance(&ratio(1, 192));
        assert_eq!(eps, ratio(1, 36864));
        let s = supremacy_budget(20, &eps, 20).unwrap();
        assert!((s.per_qubit / 4e5 - 1.0).abs() < 0.1);
    }
}
