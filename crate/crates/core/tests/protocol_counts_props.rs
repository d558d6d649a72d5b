mod common;

use hgverify::counts::{self, PrecisionTarget, Scenario};
use hgverify::protocol::{self, HedgeChoice, HedgeName, ProtocolSpec};
use hgverify::rational::{int, ratio, to_f64};
use hgverify::Budget;
use num_rational::BigRational;
use num_traits::{One, Zero};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn arb_spec() -> impl Strategy<Value = ProtocolSpec> {
    (2usize..=9, 2u32..=3, any::<u64>()).prop_map(|(n, d, seed)| {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let edges = rng.random_range(1..=2 * n);
        let hg = common::random_hypergraph(&mut rng, n, d, edges, 3);
        let cover = common::random_cover(&mut rng, &hg);
        ProtocolSpec::new(hg, cover, 0.0).unwrap()
    })
}

fn target(eps: &BigRational, delta: &BigRational) -> PrecisionTarget {
    PrecisionTarget::new(eps.clone(), delta.clone()).unwrap()
}

/// Smallest `N` with `(1 - nu eps)^N <= delta`, by exact repeated
/// multiplication.
fn iterative_count(nu: &BigRational, t: &PrecisionTarget) -> u64 {
    let q = BigRational::one() - nu * &t.epsilon;
    let mut power = BigRational::one();
    let mut n = 0;
    while power > t.delta {
        power *= &q;
        n += 1;
    }
    n
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn beta_is_max_single_site_eigenvalue(spec in arb_spec()) {
        let hg = spec.hypergraph();
        let summary = protocol::spectral_summary(&spec);
        let best = (0..hg.n())
            .map(|j| {
                let mut x = vec![0; hg.n()];
                x[j] = 1;
                protocol::eigenvalue_at(&spec, &x).unwrap()
            })
            .max()
            .unwrap();
        prop_assert_eq!(&best, &summary.beta);
        prop_assert_eq!(&summary.beta, &(BigRational::one() - spec.nu()));
        prop_assert!(summary.tau.is_zero());
    }

    #[test]
    fn eigenvalue_shrinks_with_support(spec in arb_spec(), seed in any::<u64>()) {
        let n = spec.hypergraph().n();
        let d = spec.hypergraph().dim();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let x: Vec<u32> = (0..n).map(|_| if rng.random_bool(0.3) { rng.random_range(1..d) } else { 0 }).collect();
        let y: Vec<u32> = x.iter().map(|&v| if v == 0 && rng.random_bool(0.4) { rng.random_range(1..d) } else { v }).collect();
        let lx = protocol::eigenvalue_at(&spec, &x).unwrap();
        let ly = protocol::eigenvalue_at(&spec, &y).unwrap();
        prop_assert!(lx >= ly);
        prop_assert_eq!(protocol::eigenvalue_at(&spec, &vec![0; n]).unwrap(), int(1));
    }

    #[test]
    fn hedged_spectrum_is_affine(spec in arb_spec(), p in 0.0f64..0.95) {
        let budget = Budget::default();
        let plain = protocol::full_spectrum(&spec, &budget).unwrap();
        let hedged = protocol::full_spectrum(&spec.with_hedge(p).unwrap(), &budget).unwrap();
        prop_assert_eq!(plain.dimension(), hedged.dimension());
        for (a, b) in plain.levels.iter().zip(&hedged.levels) {
            prop_assert_eq!(&a.value, &b.value);
            prop_assert_eq!(a.multiplicity, b.multiplicity);
            prop_assert!((b.hedged - ((1.0 - p) * to_f64(&a.value) + p)).abs() < 1e-12);
        }
    }

    #[test]
    fn nonadversarial_matches_iteration(nu_den in 1i64..=6, eps_den in 2i64..=60, delta_den in 2i64..=60) {
        let nu = ratio(1, nu_den);
        let t = target(&ratio(1, eps_den), &ratio(1, delta_den));
        let r = counts::tests_nonadversarial(&nu, &t).unwrap();
        prop_assert_eq!(r.n_exact, Some(iterative_count(&nu, &t)));
        prop_assert!(r.n_exact <= r.n_upper);
        if let Some(lower) = r.n_lower {
            prop_assert!(Some(lower) <= r.n_exact);
        }
    }
}

#[test]
fn counts_are_monotone() {
    let nus = [ratio(1, 5), ratio(1, 4), ratio(1, 3), ratio(1, 2), ratio(2, 3), int(1)];
    let grid = [
        ratio(1, 200),
        ratio(1, 100),
        ratio(1, 40),
        ratio(1, 20),
        ratio(1, 10),
        ratio(1, 4),
    ];
    let scenarios = [
        Scenario::Nonadversarial,
        Scenario::Adversarial,
        Scenario::AdversarialHedged,
    ];
    let auto = HedgeChoice::Named(HedgeName::Auto);
    for s in scenarios {
        let n = |nu: &BigRational, e: &BigRational, d: &BigRational| {
            counts::tests_for(s, nu, &target(e, d), auto).unwrap().n().unwrap()
        };
        for nu in &nus {
            for e in &grid {
                for w in grid.windows(2) {
                    assert!(n(nu, e, &w[0]) >= n(nu, e, &w[1]), "{s:?} delta");
                    assert!(n(nu, &w[0], e) >= n(nu, &w[1], e), "{s:?} epsilon");
                }
            }
        }
        for w in nus.windows(2) {
            for e in &grid {
                assert!(n(&w[0], e, e) >= n(&w[1], e, e), "{s:?} nu");
            }
        }
    }
}

#[test]
fn hedging_wins_for_small_delta() {
    let eps = ratio(1, 100);
    for nu in [ratio(1, 2), ratio(1, 3), ratio(1, 4)] {
        let mut wins = Vec::new();
        for k in 1..=12u32 {
            let delta = BigRational::new(1.into(), num_bigint::BigInt::from(10).pow(k));
            let t = target(&eps, &delta);
            let plain = counts::tests_adversarial(&nu, &t).unwrap().n().unwrap();
            let hedged = counts::tests_adversarial_hedged(&nu, &t, HedgeChoice::Named(HedgeName::Auto))
                .unwrap()
                .n()
                .unwrap();
            wins.push(hedged < plain);
        }
        let first = wins.iter().position(|&w| w).expect("hedged never wins");
        assert!(wins[first..].iter().all(|&w| w), "nu {nu}: {wins:?}");
    }
}

#[test]
fn gme_counts_use_generic_formulas() {
    let delta = ratio(1, 20);
    let auto = HedgeChoice::Named(HedgeName::Auto);
    for k in 2..=6u32 {
        let eps = BigRational::new(1.into(), num_bigint::BigInt::from(2).pow(k - 1));
        assert_eq!(counts::gme_epsilon(k).unwrap(), eps);
        for nu in [ratio(1, 2), ratio(1, 3), ratio(2, 5)] {
            for s in [
                Scenario::Nonadversarial,
                Scenario::Adversarial,
                Scenario::AdversarialHedged,
            ] {
                let gme = counts::gme_tests(k, &nu, &delta, s, auto).unwrap();
                let generic = counts::tests_for(s, &nu, &target(&eps, &delta), auto).unwrap();
                assert_eq!(gme.n_exact, generic.n_exact);
                assert_eq!(gme.n_upper, generic.n_upper);
            }
        }
    }
}

#[test]
fn hedging_parameters_defining_property() {
    for (a, b) in [(1, 2), (1, 3), (1, 4), (2, 5), (1, 10), (3, 4)] {
        let nu = ratio(a, b);
        let h = protocol::hedging_params(&nu).unwrap();
        let nu_f = to_f64(&nu);
        let p = h.p_star;
        let beta_p = 1.0 - nu_f + p * nu_f;
        let lhs = -p * p.ln();
        let rhs = -beta_p * beta_p.ln();
        assert!(lhs >= rhs - 1e-12, "nu {nu}");
        if p < beta_p {
            assert!((lhs - rhs).abs() <= 1e-9, "nu {nu}: {lhs} vs {rhs}");
        }
        assert!((h.h_star - protocol::h_of(p, nu_f)).abs() <= 1e-6 * h.h_star);
    }
    let half = protocol::hedging_params(&ratio(1, 2)).unwrap();
    assert!(2.0 * half.h_star <= 6.44);
}

#[test]
fn fidelity_interval_bounds_are_probabilities() {
    for rate in [0.0, 0.3, 0.9, 0.999, 1.0] {
        for nu in [0.1, 0.5, 1.0] {
            for tau in [0.0, 0.2] {
                let iv = counts::fidelity_interval(rate, nu, tau);
                let json = serde_json::to_value(iv).unwrap();
                for v in json.as_object().unwrap().values() {
                    let x = v.as_f64().unwrap();
                    assert!((0.0..=1.0).contains(&x), "{rate} {nu} {tau}: {json}");
                }
            }
        }
    }
}
