//! Batch front end for the topology workbench: verify closure operators,
//! build and inspect finite topologies, run net-convergence checks, and
//! drive the attainability demos. Reports are JSON-first with a short
//! human summary; identical inputs and seed produce identical bytes.

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde::Serialize;

use topolab::closure::{
    topology_from_closure, AxiomReport, ClosureOperator, RuleSpec, VerifyMode,
    EXHAUSTIVE_AXIOM_BOUND,
};
use topolab::nets::{check_closure_net_theorem, check_final_lemma};
use topolab::reach::{
    attainable_cloud, check_eps_density, check_mu_controllability, defaults, wave_norm, zero_wave,
    AttainableCloud, ControlledSystem, DensityReport, FeatureSpec, MuReport, StateVector,
};
use topolab::set::{Subset, Universe};
use topolab::topology::{
    enumerate_topologies, mu_image_complements, mu_topology, FiniteTopology, SeparationProfile,
    TopologyInput, ValidityReport,
};
use topolab::Error;

#[derive(Parser)]
#[command(
    name = "topolab",
    version,
    about = "Finite-topology workbench and attainability demos"
)]
struct Cli {
    /// Seed threaded to every randomized check and sampler.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    /// Print only the JSON report, no human summary.
    #[arg(long, global = true)]
    json_only: bool,

    /// Write the JSON report to this file instead of standard output.
    #[arg(long, global = true, value_name = "PATH")]
    output: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check the four closure axioms for an operator given as JSON.
    VerifyClosure {
        /// Operator rule: inline JSON or a path to a JSON file.
        #[arg(long)]
        input: String,
        /// Universe size.
        #[arg(long)]
        n: usize,
    },
    /// Build the topology induced by a closure operator; operators that
    /// violate an axiom are rejected with a witness report.
    BuildTopology {
        /// Operator rule: inline JSON or a path to a JSON file.
        #[arg(long)]
        input: String,
        /// Universe size.
        #[arg(long)]
        n: usize,
    },
    /// Summarize a topology given as JSON: opens, closed sets, separation,
    /// and optional diagnostics for a distinguished subset.
    Inspect {
        /// Topology: inline JSON or a path to a JSON file.
        #[arg(long)]
        input: String,
        /// Distinguished subset, comma-separated indices.
        #[arg(long = "F", value_delimiter = ',')]
        f: Option<Vec<usize>>,
    },
    /// Report the separation profile of a topology, or of the density
    /// topology for F when --n and --F are given.
    CheckSeparation {
        /// Topology: inline JSON or a path to a JSON file.
        #[arg(long, conflicts_with_all = ["n", "f"])]
        input: Option<String>,
        /// Universe size for the density topology.
        #[arg(long)]
        n: Option<usize>,
        /// Dense-set indices for the density topology.
        #[arg(long = "F", value_delimiter = ',')]
        f: Option<Vec<usize>>,
    },
    /// Run the closure-net theorem on the density topology for F and the
    /// subspace convergence lemma against the discrete ambient topology.
    CheckNets {
        /// Universe size.
        #[arg(long)]
        n: usize,
        /// Dense-set indices.
        #[arg(long = "F", value_delimiter = ',')]
        f: Vec<usize>,
        /// Trial count for the convergence lemma.
        #[arg(long = "K", default_value_t = 100)]
        k: u32,
    },
    /// Sample the frozen-coordinate system and contrast metric density
    /// with the cell-topology verdict.
    DemoTrivial {
        /// Sample count.
        #[arg(long = "K", default_value_t = defaults::SAMPLES)]
        k: u32,
        /// Horizon.
        #[arg(long = "T", default_value_t = 1.0)]
        t: f64,
        /// Control segments.
        #[arg(long, default_value_t = defaults::SEGMENTS)]
        segments: usize,
        /// Metric density tolerance.
        #[arg(long, default_value_t = 0.5)]
        eps: f64,
    },
    /// Sample the bilinear wave system from the zero state and report the
    /// cell-topology verdict.
    DemoSchrodinger {
        /// Sample count.
        #[arg(long = "K", default_value_t = defaults::SAMPLES)]
        k: u32,
        /// Horizon.
        #[arg(long = "T", default_value_t = defaults::HORIZON)]
        t: f64,
        /// Time step.
        #[arg(long, default_value_t = defaults::TIME_STEP)]
        dt: f64,
        /// Control segments.
        #[arg(long, default_value_t = defaults::SEGMENTS)]
        segments: usize,
    },
    /// List every topology on n labeled points (n at most 4).
    Enumerate {
        /// Universe size.
        #[arg(long)]
        n: usize,
    },
}

struct Output {
    json_only: bool,
    path: Option<PathBuf>,
}

impl Output {
    /// Writes the JSON report (file or stdout), prints the summary unless
    /// suppressed, and passes the exit code through.
    fn emit<T: Serialize>(&self, value: &T, summary: &[String], code: u8) -> u8 {
        let mut json = match serde_json::to_string_pretty(value) {
            Ok(j) => j,
            Err(e) => {
                eprintln!("cannot encode report: {e}");
                return 2;
            }
        };
        json.push('\n');
        if let Some(path) = &self.path {
            if let Err(e) = fs::write(path, &json) {
                eprintln!("cannot write {}: {e}", path.display());
                return 2;
            }
        } else {
            print!("{json}");
        }
        if !self.json_only {
            for line in summary {
                println!("{line}");
            }
        }
        code
    }

    /// Input or runtime errors: JSON error object to stdout, exit 2 unless
    /// the error carries a verification report.
    fn fail(&self, err: &Error) -> u8 {
        self.error_payload(err.code(), &err.to_string());
        2
    }

    fn parse_error(&self, message: &str) -> u8 {
        self.error_payload("parse_error", message);
        2
    }

    fn error_payload(&self, code: &str, message: &str) {
        let payload = serde_json::json!({"error": {"code": code, "message": message}});
        let mut json = serde_json::to_string_pretty(&payload).expect("error payload encodes");
        json.push('\n');
        print!("{json}");
        if !self.json_only {
            println!("error ({code}): {message}");
        }
    }
}

#[derive(Serialize)]
struct ErrorBody {
    code: &'static str,
    message: String,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let out = Output {
        json_only: cli.json_only,
        path: cli.output.clone(),
    };
    let code = match cli.command {
        Command::VerifyClosure { input, n } => verify_closure(&input, n, cli.seed, &out),
        Command::BuildTopology { input, n } => build_topology(&input, n, &out),
        Command::Inspect { input, f } => inspect(&input, f.as_deref(), &out),
        Command::CheckSeparation { input, n, f } => {
            check_separation(input.as_deref(), n, f.as_deref(), &out)
        }
        Command::CheckNets { n, f, k } => check_nets(n, &f, k, cli.seed, &out),
        Command::DemoTrivial { k, t, segments, eps } => {
            demo_trivial(k, t, segments, eps, cli.seed, &out)
        }
        Command::DemoSchrodinger { k, t, dt, segments } => {
            demo_schrodinger(k, t, dt, segments, cli.seed, &out)
        }
        Command::Enumerate { n } => enumerate(n, &out),
    };
    ExitCode::from(code)
}

/// Inline JSON (starts with a brace or bracket) or the contents of a file.
fn load_source(raw: &str) -> Result<String, String> {
    let trimmed = raw.trim_start();
    if trimmed.starts_with('{') || trimmed.starts_with('[') {
        Ok(raw.to_string())
    } else {
        fs::read_to_string(raw).map_err(|e| format!("cannot read {raw}: {e}"))
    }
}

fn parse_json<T: serde::de::DeserializeOwned>(raw: &str) -> Result<T, String> {
    let source = load_source(raw)?;
    serde_json::from_str(&source).map_err(|e| format!("invalid input JSON: {e}"))
}

fn axiom_witness_lines(report: &AxiomReport) -> Vec<String> {
    let checks = [
        ("preserves_empty", &report.preserves_empty),
        ("extensive", &report.extensive),
        ("idempotent", &report.idempotent),
        ("additive", &report.additive),
    ];
    let mut lines = Vec::new();
    for (name, check) in checks {
        if !check.pass {
            let mut line = format!("  {name} fails");
            if let Some(a) = check.witness_a {
                line.push_str(&format!(" at A = {a:?}"));
            }
            if let Some(b) = check.witness_b {
                line.push_str(&format!(", B = {b:?}"));
            }
            lines.push(line);
        }
    }
    lines
}

fn validity_witness_lines(report: &ValidityReport) -> Vec<String> {
    let mut lines = Vec::new();
    if !report.has_empty {
        lines.push("  the empty set is missing".to_string());
    }
    if !report.has_full {
        lines.push("  the full set is missing".to_string());
    }
    if let (false, Some((a, b))) = (report.union_closed.pass, report.union_closed.witness) {
        lines.push(format!("  union of {a:?} and {b:?} is not in the family"));
    }
    if let (false, Some((a, b))) = (
        report.intersection_closed.pass,
        report.intersection_closed.witness,
    ) {
        lines.push(format!("  intersection of {a:?} and {b:?} is not in the family"));
    }
    lines
}

fn separation_lines(profile: &SeparationProfile) -> Vec<String> {
    let mut lines = vec![format!(
        "separation: t0 = {}, t1 = {}, hausdorff = {}",
        profile.t0, profile.t1, profile.hausdorff
    )];
    if let Some((x, y)) = profile.witness {
        lines.push(format!("  points {x} and {y} have no disjoint neighbourhoods"));
    }
    lines
}

fn verify_closure(input: &str, n: usize, seed: u64, out: &Output) -> u8 {
    let spec: RuleSpec = match parse_json(input) {
        Ok(s) => s,
        Err(m) => return out.parse_error(&m),
    };
    let universe = match Universe::new(n) {
        Ok(u) => u,
        Err(e) => return out.fail(&e),
    };
    let op = match ClosureOperator::from_spec(universe, &spec) {
        Ok(op) => op,
        Err(e) => return out.fail(&e),
    };
    let (mode, mode_word) = if n <= EXHAUSTIVE_AXIOM_BOUND {
        (VerifyMode::Exhaustive, "exhaustive".to_string())
    } else {
        (VerifyMode::sampled(seed), format!("sampled, seed {seed}"))
    };
    let report = match op.verify_kuratowski(mode) {
        Ok(r) => r,
        Err(e) => return out.fail(&e),
    };
    let pass = report.all_pass();

    #[derive(Serialize)]
    struct Report<'a> {
        n: usize,
        operator: &'a RuleSpec,
        report: &'a AxiomReport,
        pass: bool,
    }

    let mut summary = Vec::new();
    if pass {
        summary.push(format!(
            "all four closure axioms hold on {n} points ({mode_word} check)"
        ));
    } else {
        summary.push(format!("axiom failures: {}", report.failures().join(", ")));
        summary.extend(axiom_witness_lines(&report));
    }
    out.emit(
        &Report {
            n,
            operator: &spec,
            report: &report,
            pass,
        },
        &summary,
        if pass { 0 } else { 1 },
    )
}

fn build_topology(input: &str, n: usize, out: &Output) -> u8 {
    let spec: RuleSpec = match parse_json(input) {
        Ok(s) => s,
        Err(m) => return out.parse_error(&m),
    };
    let universe = match Universe::new(n) {
        Ok(u) => u,
        Err(e) => return out.fail(&e),
    };
    let op = match ClosureOperator::from_spec(universe, &spec) {
        Ok(op) => op,
        Err(e) => return out.fail(&e),
    };
    match topology_from_closure(&op) {
        Ok(topology) => {
            #[derive(Serialize)]
            struct Report<'a> {
                n: usize,
                operator: &'a RuleSpec,
                topology: &'a FiniteTopology,
            }
            let summary = vec![format!(
                "topology built: {} open sets on {n} points",
                topology.opens().len()
            )];
            out.emit(
                &Report {
                    n,
                    operator: &spec,
                    topology: &topology,
                },
                &summary,
                0,
            )
        }
        Err(err) => match &err {
            Error::NotAClosureOperator(report) => {
                #[derive(Serialize)]
                struct Rejection<'a> {
                    error: ErrorBody,
                    report: &'a AxiomReport,
                }
                let mut summary = vec![format!(
                    "rejected: {}",
                    report.failures().join(", ")
                )];
                summary.extend(axiom_witness_lines(report));
                out.emit(
                    &Rejection {
                        error: ErrorBody {
                            code: err.code(),
                            message: err.to_string(),
                        },
                        report,
                    },
                    &summary,
                    1,
                )
            }
            _ => out.fail(&err),
        },
    }
}

fn inspect(input: &str, f: Option<&[usize]>, out: &Output) -> u8 {
    let parsed: TopologyInput = match parse_json(input) {
        Ok(t) => t,
        Err(m) => return out.parse_error(&m),
    };
    let topology = match parsed.into_topology() {
        Ok(t) => t,
        Err(err) => {
            return match &err {
                Error::InvalidTopology(report) => {
                    #[derive(Serialize)]
                    struct Rejection<'a> {
                        error: ErrorBody,
                        report: &'a ValidityReport,
                    }
                    let mut summary = vec![format!(
                        "not a topology: {}",
                        report.failures().join(", ")
                    )];
                    summary.extend(validity_witness_lines(report));
                    out.emit(
                        &Rejection {
                            error: ErrorBody {
                                code: err.code(),
                                message: err.to_string(),
                            },
                            report,
                        },
                        &summary,
                        1,
                    )
                }
                _ => out.fail(&err),
            }
        }
    };

    #[derive(Serialize)]
    struct SubsetReport {
        #[serde(rename = "F")]
        f: Subset,
        closure: Subset,
        interior: Subset,
        dense: bool,
        #[serde(skip_serializing_if = "Option::is_none")]
        density_closure_complements: Option<Vec<Subset>>,
    }

    #[derive(Serialize)]
    struct Report<'a> {
        topology: &'a FiniteTopology,
        closed_sets: Vec<Subset>,
        separation: SeparationProfile,
        #[serde(skip_serializing_if = "Option::is_none")]
        subset: Option<SubsetReport>,
    }

    let profile = topology.separation_profile();
    let n = topology.universe().size();
    let mut summary = vec![format!(
        "topology on {n} points: {} opens, {} closed sets",
        topology.opens().len(),
        topology.closed_sets().len()
    )];
    summary.extend(separation_lines(&profile));

    let subset = match f {
        None => None,
        Some(indices) => {
            let f = match topology.universe().subset(indices) {
                Ok(s) => s,
                Err(e) => return out.fail(&e),
            };
            let closure = match topology.closure_of(f) {
                Ok(s) => s,
                Err(e) => return out.fail(&e),
            };
            let interior = match topology.interior_of(f) {
                Ok(s) => s,
                Err(e) => return out.fail(&e),
            };
            let dense = match topology.is_dense(f) {
                Ok(d) => d,
                Err(e) => return out.fail(&e),
            };
            summary.push(format!(
                "F = {f:?}: closure {closure:?}, interior {interior:?}, dense = {dense}"
            ));
            Some(SubsetReport {
                f,
                closure,
                interior,
                dense,
                density_closure_complements: mu_image_complements(&topology, f).ok(),
            })
        }
    };

    out.emit(
        &Report {
            topology: &topology,
            closed_sets: topology.closed_sets(),
            separation: profile,
            subset,
        },
        &summary,
        0,
    )
}

fn check_separation(
    input: Option<&str>,
    n: Option<usize>,
    f: Option<&[usize]>,
    out: &Output,
) -> u8 {
    #[derive(Serialize)]
    struct Report {
        source: &'static str,
        n: usize,
        #[serde(rename = "F", skip_serializing_if = "Option::is_none")]
        f: Option<Subset>,
        profile: SeparationProfile,
    }

    let (topology, source, f_used) = match (input, n, f) {
        (Some(raw), _, _) => {
            let parsed: TopologyInput = match parse_json(raw) {
                Ok(t) => t,
                Err(m) => return out.parse_error(&m),
            };
            match parsed.into_topology() {
                Ok(t) => (t, "input", None),
                Err(err) => {
                    return match &err {
                        Error::InvalidTopology(report) => {
                            #[derive(Serialize)]
                            struct Rejection<'a> {
                                error: ErrorBody,
                                report: &'a ValidityReport,
                            }
                            let mut summary = vec![format!(
                                "not a topology: {}",
                                report.failures().join(", ")
                            )];
                            summary.extend(validity_witness_lines(report));
                            out.emit(
                                &Rejection {
                                    error: ErrorBody {
                                        code: err.code(),
                                        message: err.to_string(),
                                    },
                                    report,
                                },
                                &summary,
                                1,
                            )
                        }
                        _ => out.fail(&err),
                    }
                }
            }
        }
        (None, Some(n), Some(indices)) => {
            let universe = match Universe::new(n) {
                Ok(u) => u,
                Err(e) => return out.fail(&e),
            };
            let f = match universe.subset(indices) {
                Ok(s) => s,
                Err(e) => return out.fail(&e),
            };
            let topology = match mu_topology(&universe, f) {
                Ok(t) => t,
                Err(e) => return out.fail(&e),
            };
            (topology, "density", Some(f))
        }
        _ => return out.parse_error("provide --input, or both --n and --F"),
    };

    let profile = topology.separation_profile();
    let mut summary = match f_used {
        Some(f) => vec![format!(
            "density topology on {} points with F = {f:?}",
            topology.universe().size()
        )],
        None => vec![format!("topology on {} points", topology.universe().size())],
    };
    summary.extend(separation_lines(&profile));
    out.emit(
        &Report {
            source,
            n: topology.universe().size(),
            f: f_used,
            profile,
        },
        &summary,
        0,
    )
}

fn check_nets(n: usize, f_indices: &[usize], trials: u32, seed: u64, out: &Output) -> u8 {
    let universe = match Universe::new(n) {
        Ok(u) => u,
        Err(e) => return out.fail(&e),
    };
    let f = match universe.subset(f_indices) {
        Ok(s) => s,
        Err(e) => return out.fail(&e),
    };
    let density = match mu_topology(&universe, f) {
        Ok(t) => t,
        Err(e) => return out.fail(&e),
    };
    let theorem = match check_closure_net_theorem(&density) {
        Ok(v) => v,
        Err(e) => return out.fail(&e),
    };
    let ambient = match FiniteTopology::discrete(universe.clone()) {
        Ok(t) => t,
        Err(e) => return out.fail(&e),
    };
    let lemma = match check_final_lemma(&ambient, f, trials, seed) {
        Ok(v) => v,
        Err(e) => return out.fail(&e),
    };
    let pass = theorem && lemma;

    #[derive(Serialize)]
    struct LemmaReport {
        ambient: &'static str,
        trials: u32,
        pass: bool,
    }

    #[derive(Serialize)]
    struct Report {
        n: usize,
        #[serde(rename = "F")]
        f: Subset,
        closure_net_theorem: bool,
        final_lemma: LemmaReport,
    }

    let summary = vec![
        format!(
            "closure-net theorem on the density topology (n = {n}, F = {f:?}): {}",
            if theorem { "pass" } else { "fail" }
        ),
        format!(
            "subspace convergence lemma ({trials} trials, discrete ambient): {}",
            if lemma { "pass" } else { "fail" }
        ),
    ];
    out.emit(
        &Report {
            n,
            f,
            closure_net_theorem: theorem,
            final_lemma: LemmaReport {
                ambient: "discrete",
                trials,
                pass: lemma,
            },
        },
        &summary,
        if pass { 0 } else { 1 },
    )
}

fn demo_trivial(k: u32, t: f64, segments: usize, eps: f64, seed: u64, out: &Output) -> u8 {
    let sys = match ControlledSystem::trivial(1.0, segments, defaults::AMPLITUDE) {
        Ok(s) => s,
        Err(e) => return out.fail(&e),
    };
    let x0 = StateVector::point(1.0, 0.0);
    let cloud = match attainable_cloud(&sys, &x0, t, k, seed) {
        Ok(c) => c,
        Err(e) => return out.fail(&e),
    };
    let features = FeatureSpec::TrivialGrid {
        min: -6.0,
        max: 6.0,
        step: 1.0,
    };
    let target = StateVector::point(0.0, 0.0);
    let eps_report = match check_eps_density(&cloud, &[target], eps) {
        Ok(r) => r,
        Err(e) => return out.fail(&e),
    };
    let mu_report = match check_mu_controllability(&cloud, &features) {
        Ok(r) => r,
        Err(e) => return out.fail(&e),
    };

    #[derive(Serialize)]
    struct Report<'a> {
        cloud: &'a AttainableCloud,
        features: &'a FeatureSpec,
        eps_density: &'a DensityReport,
        mu: &'a MuReport,
    }

    let summary = vec![
        format!("frozen-coordinate system (c = 1): {k} terminal states at T = {t}"),
        format!(
            "metric density at eps = {eps} against (0, 0): {} (nearest distance {})",
            if eps_report.dense_at_eps { "pass" } else { "fail" },
            eps_report.targets[0].distance
        ),
        format!(
            "cell verdict: dense = {}, hausdorff = {} ({} cells, {} reached)",
            mu_report.dense, mu_report.hausdorff, mu_report.universe_size, mu_report.f_size
        ),
    ];
    out.emit(
        &Report {
            cloud: &cloud,
            features: &features,
            eps_density: &eps_report,
            mu: &mu_report,
        },
        &summary,
        0,
    )
}

fn demo_schrodinger(k: u32, t: f64, dt: f64, segments: usize, seed: u64, out: &Output) -> u8 {
    let sys = match ControlledSystem::schrodinger(defaults::GRID_POINTS, dt, segments, defaults::AMPLITUDE)
    {
        Ok(s) => s,
        Err(e) => return out.fail(&e),
    };
    let x0 = zero_wave(defaults::GRID_POINTS);
    let cloud = match attainable_cloud(&sys, &x0, t, k, seed) {
        Ok(c) => c,
        Err(e) => return out.fail(&e),
    };
    let features = FeatureSpec::ProbabilityBins {
        intervals: vec![(0.0, 0.5)],
        width: 0.1,
    };
    let mu_report = match check_mu_controllability(&cloud, &features) {
        Ok(r) => r,
        Err(e) => return out.fail(&e),
    };

    #[derive(Serialize)]
    struct WaveSample<'a> {
        control: &'a [f64],
        norm: f64,
        max_amplitude: f64,
    }

    #[derive(Serialize)]
    struct Report<'a> {
        system: &'a ControlledSystem,
        #[serde(rename = "T")]
        horizon: f64,
        seed: u64,
        #[serde(rename = "K")]
        k: u32,
        samples: Vec<WaveSample<'a>>,
        features: &'a FeatureSpec,
        mu: &'a MuReport,
    }

    let mut max_amp_overall = 0.0f64;
    let samples: Vec<WaveSample> = cloud
        .samples()
        .iter()
        .map(|sample| {
            let amps = match &sample.terminal {
                StateVector::Wave(a) => a,
                StateVector::Point { .. } => unreachable!("wave system yields waves"),
            };
            let max_amplitude = amps.iter().map(|z| z.norm()).fold(0.0, f64::max);
            max_amp_overall = max_amp_overall.max(max_amplitude);
            WaveSample {
                control: &sample.control,
                norm: wave_norm(amps),
                max_amplitude,
            }
        })
        .collect();

    let summary = vec![
        format!(
            "wave system on {} nodes: {k} samples at T = {t}, dt = {dt}",
            defaults::GRID_POINTS
        ),
        format!("zero initial state: max terminal amplitude {max_amp_overall}"),
        format!(
            "cell verdict: dense = {}, hausdorff = {} ({} cells, {} reached)",
            mu_report.dense, mu_report.hausdorff, mu_report.universe_size, mu_report.f_size
        ),
    ];
    out.emit(
        &Report {
            system: &sys,
            horizon: t,
            seed,
            k,
            samples,
            features: &features,
            mu: &mu_report,
        },
        &summary,
        0,
    )
}

fn enumerate(n: usize, out: &Output) -> u8 {
    let universe = match Universe::new(n) {
        Ok(u) => u,
        Err(e) => return out.fail(&e),
    };
    let topologies = match enumerate_topologies(&universe) {
        Ok(list) => list,
        Err(e) => return out.fail(&e),
    };

    #[derive(Serialize)]
    struct Report<'a> {
        n: usize,
        count: usize,
        topologies: Vec<&'a [Subset]>,
    }

    let summary = vec![format!("{} topologies on {n} labeled points", topologies.len())];
    out.emit(
        &Report {
            n,
            count: topologies.len(),
            topologies: topologies.iter().map(|t| t.opens()).collect(),
        },
        &summary,
        0,
    )
}
