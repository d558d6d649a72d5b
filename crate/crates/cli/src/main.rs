//! `hgv`: command-line front end for hypergraph-state verification.
//!
//! Results go to stdout as JSON (CSV for `figure` by default). Exit status is
//! 0 on success, 2 on invalid input (with a JSON error object on stdout), and
//! 1 on internal failures.

use std::io::Read;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use hgverify::compare::{self, Figure, MthVariant};
use hgverify::counts::{self, PrecisionTarget, Scenario};
use hgverify::covers::{self, WeightedCover};
use hgverify::hypergraph::parse_hypergraph;
use hgverify::oracle;
use hgverify::protocol::{self, HedgeChoice, ProtocolSpec};
use hgverify::rational::{format_rational, parse_rational};
use hgverify::simulate::{self, NoiseKind, NoiseModel};
use hgverify::{family, Budget, Error, Hypergraph, Result};
use num_bigint::BigUint;
use num_rational::BigRational;
use serde_json::{json, Value};

#[derive(Parser)]
#[command(
    name = "hgv",
    version,
    about = "Verify hypergraph states with local Pauli measurements"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct HgArgs {
    /// Hypergraph file in the text or JSON format; `-` reads stdin.
    input: Option<PathBuf>,
    /// Build a named family instead of reading a file.
    #[arg(long)]
    family: Option<String>,
    /// Family parameters, comma separated.
    #[arg(long, value_delimiter = ',')]
    params: Vec<usize>,
}

#[derive(Clone, Copy, ValueEnum)]
enum CoverKind {
    /// Optimal weighted cover from the LP.
    Optimal,
    /// Uniform weights over the classes of a minimum coloring.
    Coloring,
    /// Uniform weights over the classes of a greedy coloring.
    Greedy,
    /// One singleton per vertex.
    Singletons,
}

#[derive(Args, Clone)]
struct ProtocolArgs {
    #[arg(long, value_enum, default_value = "optimal")]
    cover: CoverKind,
    /// auto, none, nu_over_e, or a probability.
    #[arg(long, default_value = "none")]
    hedge: String,
}

#[derive(Clone, Copy, ValueEnum)]
enum ColorMethod {
    Greedy,
    Exact,
}

#[derive(Clone, Copy, ValueEnum)]
enum ScenarioArg {
    Nonadversarial,
    Adversarial,
    Hedged,
    All,
}

#[derive(Clone, Copy, ValueEnum)]
enum Check {
    Spectrum,
    Kappa,
    Gsupport,
    Worstcase,
    Stabilizer,
}

#[derive(Clone, Copy, ValueEnum)]
enum Against {
    Dfe,
    Mth,
    Tm,
    Hh,
    Plm,
    Tmmmf,
}

#[derive(Clone, Copy, ValueEnum, PartialEq)]
enum Format {
    Json,
    Csv,
}

#[derive(Subcommand)]
enum Command {
    /// Structure and graph invariants.
    Analyze {
        #[command(flatten)]
        hg: HgArgs,
    },
    /// Proper coloring of the adjacency graph.
    Color {
        #[command(flatten)]
        hg: HgArgs,
        #[arg(long, value_enum, default_value = "exact")]
        method: ColorMethod,
    },
    /// Independence degree with an optimal weighted cover.
    Gamma {
        #[command(flatten)]
        hg: HgArgs,
    },
    /// Spectral summary of a cover protocol.
    Protocol {
        #[command(flatten)]
        hg: HgArgs,
        #[command(flatten)]
        proto: ProtocolArgs,
        /// Include the full spectrum with multiplicities.
        #[arg(long)]
        spectrum: bool,
    },
    /// Number of tests for a spectral gap and precision target.
    Counts {
        #[arg(long)]
        nu: String,
        #[arg(long, default_value = "0.01")]
        eps: String,
        #[arg(long, default_value = "0.05")]
        delta: String,
        #[arg(long, value_enum, default_value = "nonadversarial")]
        scenario: ScenarioArg,
        #[arg(long, default_value = "auto")]
        hedge: String,
        /// Certify genuine multipartite entanglement of an order-K state.
        #[arg(long, value_name = "K")]
        gme: Option<u32>,
        /// Local dimension the gap belongs to.
        #[arg(long, default_value_t = 2)]
        dim: u32,
    },
    /// Dense brute-force cross-checks.
    Oracle {
        #[command(flatten)]
        hg: HgArgs,
        #[arg(long, value_enum)]
        check: Check,
        #[command(flatten)]
        proto: ProtocolArgs,
        /// Infidelity of the worst-case state.
        #[arg(long, default_value_t = 0.1)]
        eps: f64,
        /// Threshold for the well-conditioned check alongside gsupport.
        #[arg(long)]
        c: Option<f64>,
    },
    /// Monte Carlo verification run.
    Simulate {
        #[command(flatten)]
        hg: HgArgs,
        #[command(flatten)]
        proto: ProtocolArgs,
        /// target, depolarizing:S, zrot:V:ANGLE, worst_case:EPS, or mix:X=W;X=W.
        #[arg(long, default_value = "target")]
        noise: String,
        /// Per-run schedule of noise models separated by `|`.
        #[arg(long)]
        schedule: Option<String>,
        /// Number of tests; derived from --eps, --delta, --scenario when absent.
        #[arg(long)]
        tests: Option<u64>,
        #[arg(long, default_value = "0.01")]
        eps: String,
        #[arg(long, default_value = "0.05")]
        delta: String,
        #[arg(long, value_enum, default_value = "nonadversarial")]
        scenario: ScenarioArg,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Write a per-test CSV trace here.
        #[arg(long)]
        trace: Option<PathBuf>,
    },
    /// Cost of a competing protocol.
    Compare {
        #[arg(long, value_enum)]
        against: Against,
        #[command(flatten)]
        hg: HgArgs,
        #[arg(long, default_value = "0.01")]
        eps: String,
        #[arg(long, default_value = "0.05")]
        delta: String,
        /// Number of qubits.
        #[arg(long)]
        n: Option<usize>,
        /// Number of colors.
        #[arg(long, default_value_t = 3)]
        m: u32,
        /// TM repetition parameter; defaults to (4n)^7.
        #[arg(long)]
        k: Option<String>,
        /// TMMMF constant.
        #[arg(long)]
        c: Option<f64>,
        /// Support size for DFE; computed from the hypergraph when absent.
        #[arg(long)]
        g: Option<String>,
        /// original or nonadversarial_bound.
        #[arg(long, default_value = "nonadversarial_bound")]
        variant: String,
    },
    /// Data series for the resource-cost plots.
    Figure {
        #[arg(long)]
        which: String,
        #[arg(long, default_value = "cluster-1d")]
        family: String,
        #[arg(long, default_value_t = 3)]
        n_min: usize,
        #[arg(long, default_value_t = 20)]
        n_max: usize,
        #[arg(long, value_enum, default_value = "csv")]
        format: Format,
    },
}

enum Output {
    Json(Value),
    Text(String),
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(Output::Json(v)) => {
            println!("{}", serde_json::to_string_pretty(&v).expect("serializable"));
            ExitCode::SUCCESS
        }
        Ok(Output::Text(s)) => {
            print!("{s}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            let body = json!({"error": {"code": e.code(), "message": e.to_string()}});
            println!("{}", serde_json::to_string_pretty(&body).expect("serializable"));
            if e.is_validation() {
                ExitCode::from(2)
            } else {
                ExitCode::from(1)
            }
        }
    }
}

fn to_json<T: serde::Serialize>(v: &T) -> Result<Value> {
    Ok(serde_json::to_value(v)?)
}

fn load(args: &HgArgs) -> Result<Hypergraph> {
    match (&args.input, &args.family) {
        (Some(_), Some(_)) => Err(Error::BadParams("give either a file or --family, not both".into())),
        (None, Some(name)) => family(name, &args.params),
        (Some(path), None) => {
            let text = if path.as_os_str() == "-" {
                let mut s = String::new();
                std::io::stdin().read_to_string(&mut s)?;
                s
            } else {
                std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?
            };
            parse_hypergraph(&text)
        }
        (None, None) => Err(Error::BadParams("a hypergraph file or --family is required".into())),
    }
}

fn rational(name: &str, s: &str) -> Result<BigRational> {
    parse_rational(s).map_err(|_| Error::BadParams(format!("{name} must be a rational number, got {s:?}")))
}

fn target(eps: &str, delta: &str) -> Result<PrecisionTarget> {
    PrecisionTarget::new(rational("eps", eps)?, rational("delta", delta)?)
}

fn build_cover(hg: &Hypergraph, kind: CoverKind, budget: &Budget) -> Result<WeightedCover> {
    match kind {
        CoverKind::Optimal => Ok(covers::independence_degree(hg, budget)?.witness),
        CoverKind::Coloring => Ok(WeightedCover::from_coloring(
            &covers::exact_invariants(hg, budget)?.optimal_coloring,
        )),
        CoverKind::Greedy => Ok(WeightedCover::from_coloring(&covers::greedy_coloring(hg))),
        CoverKind::Singletons => WeightedCover::uniform((0..hg.n()).map(|v| vec![v]).collect()),
    }
}

fn build_spec(hg: Hypergraph, args: &ProtocolArgs, budget: &Budget) -> Result<ProtocolSpec> {
    let cover = build_cover(&hg, args.cover, budget)?;
    let unhedged = ProtocolSpec::new(hg, cover, 0.0)?;
    let p = args.hedge.parse::<HedgeChoice>()?.resolve(unhedged.nu())?;
    unhedged.with_hedge(p)
}

fn scenario(s: ScenarioArg) -> Option<Scenario> {
    match s {
        ScenarioArg::Nonadversarial => Some(Scenario::Nonadversarial),
        ScenarioArg::Adversarial => Some(Scenario::Adversarial),
        ScenarioArg::Hedged => Some(Scenario::AdversarialHedged),
        ScenarioArg::All => None,
    }
}

fn mark_qudit(mut v: Value, qudit_hedged: bool) -> Value {
    if qudit_hedged {
        if let Value::Object(m) = &mut v {
            m.insert("qudit_extrapolation".into(), json!(true));
        }
    }
    v
}

fn run(cmd: Command) -> Result<Output> {
    let budget = Budget::from_env()?;
    let out = match cmd {
        Command::Analyze { hg } => {
            let hg = load(&hg)?;
            json!({
                "n": hg.n(),
                "dim": hg.dim(),
                "edges": hg.edges().len(),
                "structure": to_json(&hg.structure())?,
                "invariants": to_json(&covers::invariant_bundle(&hg, &budget))?,
            })
        }
        Command::Color { hg, method } => {
            let hg = load(&hg)?;
            let coloring = match method {
                ColorMethod::Greedy => covers::greedy_coloring(&hg),
                ColorMethod::Exact => covers::exact_invariants(&hg, &budget)?.optimal_coloring,
            };
            coloring.check(&hg)?;
            json!({
                "method": match method { ColorMethod::Greedy => "greedy", ColorMethod::Exact => "exact" },
                "colors": coloring.colors(),
                "classes": coloring.classes,
                "color_of": coloring.color_of(hg.n()),
            })
        }
        Command::Gamma { hg } => to_json(&covers::independence_degree(&load(&hg)?, &budget)?)?,
        Command::Protocol { hg, proto, spectrum } => {
            let hg = load(&hg)?;
            let qudit = hg.dim() > 2;
            let spec = build_spec(hg, &proto, &budget)?;
            let mut v = json!({
                "cover": to_json(spec.cover())?,
                "summary": to_json(&protocol::spectral_summary(&spec))?,
            });
            if spectrum {
                v["spectrum"] = to_json(&protocol::full_spectrum(&spec, &budget)?)?;
            }
            mark_qudit(v, qudit && spec.hedge() > 0.0)
        }
        Command::Counts {
            nu,
            eps,
            delta,
            scenario: sc,
            hedge,
            gme,
            dim,
        } => {
            if dim < 2 {
                return Err(Error::BadDimension(dim));
            }
            let nu = rational("nu", &nu)?;
            let hedge: HedgeChoice = hedge.parse()?;
            let report = |s: Scenario| -> Result<Value> {
                let r = match gme {
                    Some(k) => counts::gme_tests(k, &nu, &rational("delta", &delta)?, s, hedge)?,
                    None => counts::tests_for(s, &nu, &target(&eps, &delta)?, hedge)?,
                };
                Ok(mark_qudit(to_json(&r)?, dim > 2 && s == Scenario::AdversarialHedged))
            };
            match scenario(sc) {
                Some(s) => report(s)?,
                None => json!({
                    "nonadversarial": report(Scenario::Nonadversarial)?,
                    "adversarial": report(Scenario::Adversarial)?,
                    "adversarial_hedged": report(Scenario::AdversarialHedged)?,
                }),
            }
        }
        Command::Oracle {
            hg,
            check,
            proto,
            eps,
            c,
        } => {
            let hg = load(&hg)?;
            oracle_check(hg, check, &proto, eps, c, &budget)?
        }
        Command::Simulate {
            hg,
            proto,
            noise,
            schedule,
            tests,
            eps,
            delta,
            scenario: sc,
            seed,
            trace,
        } => {
            let hg = load(&hg)?;
            let d = hg.dim();
            let spec = build_spec(hg, &proto, &budget)?;
            let model = match schedule {
                Some(s) => NoiseModel::schedule(s.split('|').map(str::parse).collect::<Result<Vec<NoiseKind>>>()?)?,
                None => NoiseModel::new(noise.parse()?),
            };
            let (report, records) = match tests {
                Some(t) => simulate::run_tests(&spec, &model, t, seed, &budget)?,
                None => {
                    let s = scenario(sc).ok_or_else(|| Error::BadParams("simulate needs a single scenario".into()))?;
                    simulate::run_verification(&spec, &model, &target(&eps, &delta)?, s, seed, &budget)?
                }
            };
            if let Some(path) = trace {
                std::fs::write(&path, simulate::trace_csv(&records, d))
                    .map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
            }
            to_json(&report)?
        }
        Command::Compare {
            against,
            hg,
            eps,
            delta,
            n,
            m,
            k,
            c,
            g,
            variant,
        } => {
            let cost = match against {
                Against::Hh => compare::hh_cost(m, &rational("eps", &eps)?, &rational("delta", &delta)?)?,
                Against::Plm => {
                    let n = n.ok_or_else(|| Error::BadParams("--n is required".into()))?;
                    compare::plm_cost(n, &rational("eps", &eps)?, &rational("delta", &delta)?)?
                }
                Against::Tm => {
                    let n = n.ok_or_else(|| Error::BadParams("--n is required".into()))?;
                    let k = k
                        .map(|s| {
                            s.parse::<BigUint>()
                                .map_err(|_| Error::BadParams(format!("bad k {s:?}")))
                        })
                        .transpose()?;
                    compare::tm_cost(n, k.as_ref())?
                }
                Against::Tmmmf => {
                    let n = n.ok_or_else(|| Error::BadParams("--n is required".into()))?;
                    let c = c.ok_or_else(|| Error::BadParams("--c is required".into()))?;
                    compare::tmmmf_cost(n, c, m)?
                }
                Against::Mth => {
                    let hg = load(&hg)?;
                    let t = target(&eps, &delta)?;
                    compare::mth_cost(&hg, to_f(&t.epsilon), to_f(&t.delta), variant.parse::<MthVariant>()?)?
                }
                Against::Dfe => {
                    let t = target(&eps, &delta)?;
                    let (g, n) = match (g, n) {
                        (Some(g), Some(n)) => (
                            g.parse::<BigUint>()
                                .map_err(|_| Error::BadParams(format!("bad g {g:?}")))?,
                            n,
                        ),
                        _ => {
                            let hg = load(&hg)?;
                            (oracle::char_support(&hg, &budget)?.g, hg.n())
                        }
                    };
                    compare::dfe_cost(&g, n, to_f(&t.epsilon), to_f(&t.delta))?
                }
            };
            to_json(&cost)?
        }
        Command::Figure {
            which,
            family: fam,
            n_min,
            n_max,
            format,
        } => {
            let fig: Figure = which.parse()?;
            let ns: Vec<usize> = (n_min..=n_max).collect();
            let rows = compare::figure_series(fig, &fam, &ns, &budget)?;
            return Ok(match format {
                Format::Csv => Output::Text(compare::series_csv(&rows)),
                Format::Json => Output::Json(to_json(&rows)?),
            });
        }
    };
    Ok(Output::Json(out))
}

fn to_f(r: &BigRational) -> f64 {
    hgverify::rational::to_f64(r)
}

fn oracle_check(
    hg: Hypergraph,
    check: Check,
    proto: &ProtocolArgs,
    eps: f64,
    c: Option<f64>,
    budget: &Budget,
) -> Result<Value> {
    Ok(match check {
        Check::Stabilizer => json!({
            "check": "stabilizer",
            "passed": oracle::stabilizer_check(&hg, budget)?,
        }),
        Check::Kappa => {
            let k = oracle::kappa(&hg, budget)?;
            let order = hg.order();
            let mut v = to_json(&k)?;
            v["check"] = json!("kappa");
            if order >= 2 {
                v["bound"] = json!(1.0 - 2f64.powi(1 - order as i32));
            }
            v
        }
        Check::Gsupport => {
            let g = oracle::char_support(&hg, budget)?;
            let mut v = json!({
                "check": "gsupport",
                "g": g.g.to_string(),
                "method": to_json(&g.method)?,
            });
            if let Some(c) = c {
                v["well_conditioned"] = to_json(&oracle::well_conditioned(&hg, c, budget)?)?;
            }
            v
        }
        Check::Spectrum => {
            let spec = build_spec(hg, proto, budget)?;
            let dense = oracle::omega_dense(&spec, budget)?;
            let analytic = protocol::full_spectrum(&spec, budget)?;
            let matched = oracle::match_spectrum(&dense.eigenvalues, &analytic, 1e-10);
            let traces_ok = dense
                .projector_traces
                .iter()
                .all(|(t, e)| (t - *e as f64).abs() <= 1e-9 * (*e as f64).max(1.0));
            json!({
                "check": "spectrum",
                "dim": dense.dim,
                "levels": analytic.levels.iter().map(|l| json!({
                    "value": format_rational(&l.value),
                    "hedged": l.hedged,
                    "multiplicity": l.multiplicity.to_string(),
                })).collect::<Vec<_>>(),
                "max_deviation": matched.as_ref().ok(),
                "mismatch": matched.as_ref().err(),
                "projector_traces_ok": traces_ok,
                "hermiticity_error": dense.hermiticity_error,
                "passed": matched.is_ok() && traces_ok,
            })
        }
        Check::Worstcase => {
            let spec = build_spec(hg, proto, budget)?;
            let w = oracle::worst_case_state(&spec, eps, budget)?;
            json!({
                "check": "worstcase",
                "epsilon": eps,
                "vertex": w.vertex,
                "pass_probability": w.pass_probability,
                "expected": w.expected,
                "fidelity": w.fidelity,
                "passed": w.verified,
            })
        }
    })
}
