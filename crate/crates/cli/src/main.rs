//! `kact`: command-line front end for self-similar groupoid actions on
//! higher-rank graphs. Loads an action from a JSON document or one of
//! the two bundled examples and dispatches analysis subcommands.
//!
//! Exit codes: 0 ok, 1 validation or schema failure, 2 precondition or
//! not-finite failure, 3 inconclusive certificate.

mod doc;

use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use kgraph_action::automaton::validate_automaton;
use kgraph_action::fockrep::relation_report;
use kgraph_action::graph::Path;
use kgraph_action::groupoid::{
    groupoid_closure, restriction_closure, ClosureTable, Groupoid, GroupoidElement,
};
use kgraph_action::kms::{
    c_rel, check_kms_condition, measure_total, toeplitz_partition, DynamicsSpec, Kms1State,
    TraceSpec,
};
use kgraph_action::periodicity::per_trivial_certificate;
use kgraph_action::spectral::compute_spectral;
use kgraph_action::staralg::StarAlg;
use kgraph_action::{Action, Degree, Error};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use doc::ActionDocument;

const SINGLE_VERTEX_JSON: &str = include_str!("../fixtures/single_vertex.json");
const BASILICA_JSON: &str = include_str!("../fixtures/basilica.json");

#[derive(Parser)]
#[command(name = "kact", version, about = "Self-similar groupoid actions on higher-rank graphs")]
struct Cli {
    #[command(flatten)]
    input: InputArgs,
    /// Emit machine-readable JSON instead of human tables.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args)]
struct InputArgs {
    /// Load a bundled example: "single-vertex" or "basilica".
    #[arg(long, global = true, conflicts_with = "file")]
    example: Option<String>,
    /// Load an action document from a JSON file.
    #[arg(long, global = true)]
    file: Option<String>,
}

#[derive(Subcommand)]
enum Cmd {
    /// Validate the coloured graph, squares and automaton.
    Validate,
    /// Count (or list) paths of a given degree.
    Paths {
        /// Degree as comma-separated coordinates, e.g. "2,1".
        #[arg(long)]
        degree: String,
        /// Restrict to paths with this range vertex.
        #[arg(long)]
        from: Option<String>,
        /// List the paths instead of only counting them.
        #[arg(long)]
        list: bool,
    },
    /// Apply a generator to a path and show image and restriction.
    Act {
        #[arg(long)]
        state: String,
        /// Path as comma-separated edge ids, or a vertex id.
        #[arg(long)]
        path: String,
    },
    /// Closure under restriction (one generator) or the full generated
    /// groupoid (no generator given).
    Closure {
        #[arg(long)]
        state: Option<String>,
        #[arg(long, default_value_t = 1000)]
        bound: usize,
    },
    /// Spectral radii and the normalized equilibrium vector.
    Spectral,
    /// Certificate that the periodicity group is trivial.
    Periodicity {
        #[arg(long, default_value_t = 10_000)]
        bound: usize,
        #[arg(long, default_value_t = 20)]
        max_exponent: i64,
    },
    /// The fixed-path constant of a generator against the unit.
    Cg {
        #[arg(long)]
        state: String,
    },
    /// Path-space measure: cylinder mass or total mass at a degree.
    Measure {
        #[arg(long, conflicts_with = "cylinder")]
        degree: Option<String>,
        #[arg(long)]
        cylinder: Option<String>,
    },
    /// Equilibrium-state values.
    Kms {
        #[command(subcommand)]
        cmd: KmsCmd,
    },
    /// Verify the defining operator relations on a truncated basis.
    Relations {
        #[arg(long, default_value_t = 2)]
        level: usize,
    },
    /// Spot-check the equilibrium condition on random spanning pairs.
    CheckKms {
        #[arg(long, default_value_t = 200)]
        samples: usize,
        #[arg(long, default_value_t = 7)]
        seed: u64,
    },
}

#[derive(Subcommand)]
enum KmsCmd {
    /// Value of the equilibrium state on a spanning element.
    Op {
        /// "lambda;g;mu" with paths as comma-separated edge ids or a
        /// vertex id, and g a state or vertex id.
        #[arg(long)]
        triple: String,
    },
    /// Partition value of the quasi-free state above the critical
    /// temperature, with a certified tail bound.
    Toeplitz {
        #[arg(long)]
        beta: Option<f64>,
        /// Comma-separated inverse-temperature weights, overriding the
        /// document's dynamics section.
        #[arg(long)]
        r: Option<String>,
        #[arg(long, default_value_t = 1e-10)]
        tail: f64,
    },
}

fn load_document(input: &InputArgs) -> Result<ActionDocument, Error> {
    let text = match (&input.example, &input.file) {
        (Some(name), None) => match name.as_str() {
            "single-vertex" => SINGLE_VERTEX_JSON.to_string(),
            "basilica" => BASILICA_JSON.to_string(),
            other => {
                return Err(Error::Schema(format!(
                    "unknown example {other:?}; use \"single-vertex\" or \"basilica\""
                )))
            }
        },
        (None, Some(path)) => std::fs::read_to_string(path)
            .map_err(|e| Error::Schema(format!("cannot read {path}: {e}")))?,
        _ => {
            return Err(Error::Schema(
                "pass exactly one of --example or --file".into(),
            ))
        }
    };
    ActionDocument::parse(&text)
}

fn parse_degree(s: &str, k: usize) -> Result<Degree, Error> {
    let coords: Vec<usize> = s
        .split(',')
        .map(|c| c.trim().parse())
        .collect::<Result<_, _>>()
        .map_err(|e| Error::Schema(format!("bad degree {s:?}: {e}")))?;
    if coords.len() != k {
        return Err(Error::Schema(format!(
            "degree {s:?} has {} coordinates, expected {k}",
            coords.len()
        )));
    }
    Ok(Degree(coords))
}

fn parse_path(action: &Action, s: &str) -> Result<Path, Error> {
    let kg = action.kgraph();
    if let Some(v) = kg.graph().vertex_by_name(s.trim()) {
        return Ok(kg.vertex_path(v));
    }
    let names: Vec<&str> = s.split(',').map(str::trim).collect();
    kg.normalize_names(&names)
}

fn parse_middle(action: &Action, s: &str) -> Result<GroupoidElement, Error> {
    let gp = Groupoid::new(action);
    let name = s.trim();
    if let Some(v) = action.kgraph().graph().vertex_by_name(name) {
        return Ok(GroupoidElement::unit(v));
    }
    gp.generator_by_name(name)
}

fn round10(x: f64) -> f64 {
    (x * 1e10).round() / 1e10
}

fn dynamics_from(
    docd: &Option<doc::DynamicsDoc>,
    beta: Option<f64>,
    r: &Option<String>,
) -> Result<DynamicsSpec, Error> {
    let mut spec = match docd {
        Some(d) => DynamicsSpec {
            beta: d.beta,
            r: d.r.clone(),
        },
        None => {
            if r.is_none() {
                return Err(Error::Precondition(
                    "no dynamics section in the document; pass --r".into(),
                ));
            }
            DynamicsSpec { beta: 1.0, r: Vec::new() }
        }
    };
    if let Some(b) = beta {
        spec.beta = b;
    }
    if let Some(rs) = r {
        spec.r = rs
            .split(',')
            .map(|c| c.trim().parse())
            .collect::<Result<_, _>>()
            .map_err(|e| Error::Schema(format!("bad weights {rs:?}: {e}")))?;
    }
    Ok(spec)
}

fn small_degrees(k: usize, total: usize) -> Vec<Degree> {
    Degree::boxed(&Degree(vec![total; k]))
        .into_iter()
        .filter(|d| d.total() <= total)
        .collect()
}

fn run(cli: &Cli) -> Result<(), Error> {
    let document = load_document(&cli.input)?;
    let tol = document.tolerances();
    match &cli.cmd {
        Cmd::Validate => {
            let action = document.to_action()?;
            let kg = action.kgraph();
            let report = validate_automaton(kg, action.automaton());
            report.clone().into_result()?;
            let checks = kg.structural_checks();
            let invariance = action
                .traversal_invariance_check(&Degree(vec![2; kg.k()]))
                .into_result()
                .is_ok();
            if cli.json {
                println!(
                    "{}",
                    serde_json::json!({
                        "valid": true,
                        "no_sources": checks.has_no_sources,
                        "strongly_connected": checks.strongly_connected,
                        "traversal_invariant": invariance,
                    })
                );
            } else {
                println!("valid: automaton axioms hold");
                println!("no sources: {}", checks.has_no_sources);
                println!("strongly connected: {}", checks.strongly_connected);
                println!("traversal invariant: {invariance}");
            }
            if !invariance {
                return Err(Error::Validation(
                    "restriction maps are not traversal invariant".into(),
                ));
            }
            Ok(())
        }
        Cmd::Paths { degree, from, list } => {
            let action = document.to_action()?;
            let kg = action.kgraph();
            let from = match from {
                Some(name) => Some(kg.graph().vertex_by_name(name).ok_or_else(|| {
                    Error::Schema(format!("unknown vertex {name:?}"))
                })?),
                None => None,
            };
            let p = parse_degree(degree, kg.k())?;
            let paths = kg.paths(from, &p);
            if cli.json {
                let names: Vec<String> = paths.iter().map(|l| kg.path_display(l)).collect();
                let mut out = serde_json::json!({"count": paths.len()});
                if *list {
                    out["paths"] = serde_json::json!(names);
                }
                println!("{out}");
            } else {
                println!("{} paths of degree {p}", paths.len());
                if *list {
                    for lam in &paths {
                        println!("{}", kg.path_display(lam));
                    }
                }
            }
            Ok(())
        }
        Cmd::Act { state, path } => {
            let action = document.to_action()?;
            let kg = action.kgraph();
            let gp = Groupoid::new(&action);
            let g = parse_middle(&action, state)?;
            let lam = parse_path(&action, path)?;
            let image = gp.act(&g, &lam)?;
            let rest = gp.restrict(&g, &lam)?;
            if cli.json {
                println!(
                    "{}",
                    serde_json::json!({
                        "image": kg.path_display(&image),
                        "restriction": gp.display(&rest),
                    })
                );
            } else {
                println!("image: {}", kg.path_display(&image));
                println!("restriction: {}", gp.display(&rest));
            }
            Ok(())
        }
        Cmd::Closure { state, bound } => {
            let action = document.to_action()?;
            let gp = Groupoid::new(&action);
            let mut table = ClosureTable::new();
            let ids = match state {
                Some(name) => {
                    let g = gp.generator_by_name(name)?;
                    restriction_closure(&gp, &mut table, &g, *bound)?
                }
                None => {
                    let gens: Vec<_> = action
                        .automaton()
                        .states()
                        .map(|s| gp.generator(s))
                        .collect();
                    groupoid_closure(&gp, &mut table, &gens, *bound)?
                }
            };
            let names: Vec<String> = ids.iter().map(|&i| gp.display(table.rep(i))).collect();
            if cli.json {
                println!(
                    "{}",
                    serde_json::json!({"size": names.len(), "elements": names})
                );
            } else {
                println!("closure size: {}", names.len());
                for n in &names {
                    println!("{n}");
                }
            }
            Ok(())
        }
        Cmd::Spectral => {
            let action = document.to_action()?;
            let kg = action.kgraph();
            let data = compute_spectral(kg)?;
            let rho: Vec<f64> = data.rho.iter().map(|&r| round10(r)).collect();
            let x: Vec<f64> = data.x.iter().map(|&v| round10(v)).collect();
            if cli.json {
                println!(
                    "{}",
                    serde_json::json!({
                        "rho": rho,
                        "x": x,
                        "residual": data.residual,
                    })
                );
            } else {
                for (i, r) in rho.iter().enumerate() {
                    println!("rho_{}: {r:.10}", i + 1);
                }
                for v in kg.graph().vertices() {
                    println!("x({}): {:.10}", kg.graph().vertex_name(v), x[v.0]);
                }
                println!("residual: {:.3e}", data.residual);
            }
            Ok(())
        }
        Cmd::Periodicity { bound, max_exponent } => {
            let action = document.to_action()?;
            let data = compute_spectral(action.kgraph())?;
            let cert = per_trivial_certificate(&action, &data, *bound, *max_exponent)?;
            if cli.json {
                println!(
                    "{}",
                    serde_json::json!({
                        "trivial": true,
                        "closure_size": cert.closure_size,
                        "max_exponent": cert.max_exponent,
                        "min_log_defect": cert.min_log_defect,
                    })
                );
            } else {
                println!("periodicity group: trivial");
                println!("probe closure size: {}", cert.closure_size);
                println!("exponent box: |n| <= {}", cert.max_exponent);
                println!("min |sum n_i ln rho_i|: {:.6e}", cert.min_log_defect);
            }
            Ok(())
        }
        Cmd::Cg { state } => {
            let action = document.to_action()?;
            let data = compute_spectral(action.kgraph())?;
            let gp = Groupoid::new(&action);
            let g = gp.generator_by_name(state)?;
            let unit = GroupoidElement::unit(g.dom);
            let c = if gp.equal(&g, &unit)? {
                data.x[g.dom.0]
            } else {
                c_rel(&action, &data, &g, &unit, tol.value)?
            };
            if cli.json {
                println!("{}", serde_json::json!({"value": round10(c)}));
            } else {
                println!("{c:.9}");
            }
            Ok(())
        }
        Cmd::Measure { degree, cylinder } => {
            let action = document.to_action()?;
            let kg = action.kgraph();
            let data = compute_spectral(kg)?;
            let value = match (degree, cylinder) {
                (Some(d), None) => {
                    let p = parse_degree(d, kg.k())?;
                    measure_total(&action, &data, &p)
                }
                (None, Some(c)) => data.measure_cylinder(&parse_path(&action, c)?),
                _ => {
                    return Err(Error::Schema(
                        "pass exactly one of --degree or --cylinder".into(),
                    ))
                }
            };
            if cli.json {
                println!("{}", serde_json::json!({"value": round10(value)}));
            } else {
                println!("{value:.10}");
            }
            Ok(())
        }
        Cmd::Kms { cmd } => {
            let action = document.to_action()?;
            match cmd {
                KmsCmd::Op { triple } => {
                    let parts: Vec<&str> = triple.split(';').collect();
                    if parts.len() != 3 {
                        return Err(Error::Schema(format!(
                            "triple {triple:?} must be \"lambda;g;mu\""
                        )));
                    }
                    let lam = parse_path(&action, parts[0])?;
                    let g = parse_middle(&action, parts[1])?;
                    let mu = parse_path(&action, parts[2])?;
                    let data = compute_spectral(action.kgraph())?;
                    let state = Kms1State::new(&action, data, tol.value)?;
                    let value = state.triple_value(&lam, &g, &mu)?;
                    if cli.json {
                        println!("{}", serde_json::json!({"value": round10(value)}));
                    } else {
                        println!("{value:.9}");
                    }
                }
                KmsCmd::Toeplitz { beta, r, tail } => {
                    let dynamics = dynamics_from(&document.dynamics, *beta, r)?;
                    let trace = TraceSpec::trivial(action.kgraph().graph().vertices().count());
                    let (z, tail_bound) = toeplitz_partition(&action, &dynamics, &trace, *tail)?;
                    if cli.json {
                        println!(
                            "{}",
                            serde_json::json!({"value": round10(z), "error_bound": tail_bound})
                        );
                    } else {
                        println!("Z = {z:.10} (tail bound {tail_bound:.3e})");
                    }
                }
            }
            Ok(())
        }
        Cmd::Relations { level } => {
            let action = document.to_action()?;
            let gp = Groupoid::new(&action);
            let mut probes: Vec<GroupoidElement> = action
                .kgraph()
                .graph()
                .vertices()
                .map(GroupoidElement::unit)
                .collect();
            for s in action.automaton().states() {
                let g = gp.generator(s);
                probes.push(g.inverse());
                probes.push(g);
            }
            let report = relation_report(&action, *level, &probes)?;
            if cli.json {
                println!(
                    "{}",
                    serde_json::json!({
                        "level": level,
                        "residuals": report.residuals,
                        "max_residual": report.max_residual(),
                    })
                );
            } else {
                for (label, res) in &report.residuals {
                    println!("{label}: {res:.3e}");
                }
                println!("max residual: {:.3e}", report.max_residual());
            }
            if report.max_residual() > 1e-9 {
                return Err(Error::Validation("relation residuals above 1e-9".into()));
            }
            Ok(())
        }
        Cmd::CheckKms { samples, seed } => {
            let action = document.to_action()?;
            let kg = action.kgraph();
            let data = compute_spectral(kg)?;
            let state = Kms1State::new(&action, data, tol.value)?;
            let alg = StarAlg::new(&action);
            let gp = alg.groupoid();
            let mut pool: Vec<GroupoidElement> =
                kg.graph().vertices().map(GroupoidElement::unit).collect();
            for s in action.automaton().states() {
                let g = gp.generator(s);
                pool.push(g.inverse());
                pool.push(g);
            }
            let degrees = small_degrees(kg.k(), 2);
            let mut rng = ChaCha8Rng::seed_from_u64(*seed);
            let mut max_dev = 0.0f64;
            let mut checked = 0;
            while checked < *samples {
                let pick = |rng: &mut ChaCha8Rng| {
                    let g = pool.choose(rng).unwrap().clone();
                    let lams: Vec<Path> = kg
                        .paths(None, degrees.choose(rng).unwrap())
                        .into_iter()
                        .filter(|l| l.source == g.cod)
                        .collect();
                    let mus: Vec<Path> = kg
                        .paths(None, degrees.choose(rng).unwrap())
                        .into_iter()
                        .filter(|m| m.source == g.dom)
                        .collect();
                    match (lams.choose(rng), mus.choose(rng)) {
                        (Some(l), Some(m)) => Some((l.clone(), g, m.clone())),
                        _ => None,
                    }
                };
                let (Some((lam, g, mu)), Some((nu, h, xi))) = (pick(&mut rng), pick(&mut rng))
                else {
                    continue;
                };
                let b = alg.span(&lam, &g, &mu)?;
                let c = alg.span(&nu, &h, &xi)?;
                let (lhs, rhs) =
                    check_kms_condition(&alg, &state, &b, (&lam.degree, &mu.degree), &c)?;
                max_dev = max_dev.max((lhs - rhs).abs());
                checked += 1;
            }
            if cli.json {
                println!(
                    "{}",
                    serde_json::json!({"samples": samples, "max_deviation": max_dev})
                );
            } else {
                println!("{samples} samples, max deviation {max_dev:.3e}");
            }
            if max_dev > 1e-8 {
                return Err(Error::Validation(
                    "equilibrium condition violated beyond 1e-8".into(),
                ));
            }
            Ok(())
        }
    }
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Validation(_) | Error::Schema(_) => 1,
        Error::Inconclusive(_) => 3,
        _ => 2,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
