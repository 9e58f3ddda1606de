//! Command-line front end for the laboratory: parses group and subgroup
//! specs, runs ball-bounded analyses, and emits deterministic JSON or DOT
//! reports.
//!
//! Exit codes: 0 for a conclusive run (including conclusive negative
//! findings), 2 for a run that finished but stayed inconclusive or hit a
//! budget (tainted windows, unstabilized profiles, failed auxiliary
//! searches), 1 for usage and spec errors. Reports are byte-identical
//! across worker counts; there is no randomness anywhere.

mod bundles;
mod report;

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use commlab_core::catalog::{build_group, hom::HomHandle};
use commlab_core::commensurator::{
    coset_profile, displacement_checks, extend_to_finite_index, intersect_witnesses, invert,
    packing_census, product_defect, pullback, pushforward, restrict_to_finite_index,
    search_witness, stabilization_constant, transport, verify_witness, GrowthVerdict,
    ProfileOptions, Witness, WitnessOptions,
};
use commlab_core::error::{CommError, Result};
use commlab_core::exec::Exec;
use commlab_core::graph::{
    cayley_ball, coset_graph_ball, ends_estimate, from_json, quotient_graph_ball, to_dot,
    to_json, BallOptions, EndsVerdict, GraphKind, LabeledGraph,
};
use commlab_core::group::GroupHandle;
use commlab_core::subgroup::{subgroup_of, SubgroupHandle};
use commlab_core::words::Runs;
use serde_json::json;

#[derive(Parser)]
#[command(
    name = "commlab",
    version,
    about = "Ball-bounded laboratory for coset geometry and commensuration witnesses"
)]
struct Cli {
    /// Worker pool size; 1 forces the sequential path. Reports are
    /// byte-identical for every setting.
    #[arg(long, global = true)]
    workers: Option<usize>,
    /// Write the report to this path instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Output format: `json` everywhere (the default), `dot` for graph
    /// windows, `text` for `nf`.
    #[arg(long, global = true)]
    format: Option<String>,
    #[command(subcommand)]
    cmd: Cmd,
}

/// Group/subgroup pair addressed by most subcommands.
#[derive(Args)]
struct Target {
    /// Group spec, e.g. `bs:1,2`, `free:2`, `abelian:2`, `ex3`, `hladder:4`.
    #[arg(long)]
    group: String,
    /// Subgroup spec, e.g. `cyclic-span:x`, `base`, `table:PATH`.
    #[arg(long)]
    subgroup: String,
}

/// Radii for profile-style measurements.
#[derive(Args)]
struct Window {
    /// Largest source radius sampled.
    #[arg(long, default_value_t = 6)]
    rmax: usize,
    /// Radius of the ball distances are certified in; must exceed rmax.
    #[arg(long = "R", default_value_t = 14)]
    big_radius: usize,
}

/// Budgets for witness searches and the closure operations.
#[derive(Args)]
struct Tuning {
    /// Sample-ball radius for the subgroup members driving a search.
    #[arg(long, default_value_t = 6)]
    hball: usize,
    /// Radius searched for candidate values and auxiliary elements.
    #[arg(long, default_value_t = 6)]
    search_radius: usize,
    /// Cap on the size of each value set.
    #[arg(long, default_value_t = 64)]
    max_set: usize,
    /// Radius of the final verification pass (default: hball).
    #[arg(long)]
    verify_radius: Option<usize>,
}

#[derive(Subcommand)]
enum Cmd {
    /// Normal form of a word in a catalog group.
    Nf {
        #[arg(long)]
        group: String,
        #[arg(long)]
        word: String,
    },
    /// Cayley-graph ball of a group.
    Ball {
        #[arg(long)]
        group: String,
        #[arg(long)]
        radius: usize,
    },
    /// Window onto the left-coset graph of (G, Q).
    CosetGraph {
        #[command(flatten)]
        target: Target,
        #[arg(long)]
        radius: usize,
    },
    /// Window onto the right-coset (Schreier) quotient graph of (G, Q).
    QuotientGraph {
        #[command(flatten)]
        target: Target,
        #[arg(long)]
        radius: usize,
    },
    /// Symmetric Hausdorff-distance profile between gQ and Q.
    Hausdorff {
        #[command(flatten)]
        target: Target,
        /// The translating element.
        #[arg(long)]
        g: String,
        #[command(flatten)]
        window: Window,
    },
    /// Commensuration witnesses: search, verification, and the closure
    /// operations that transform verified witnesses into new ones.
    Witness {
        #[command(subcommand)]
        op: WitnessCmd,
    },
    /// End-count estimate for a graph window.
    Ends {
        #[arg(long)]
        group: String,
        /// Required for the coset and quotient graphs.
        #[arg(long)]
        subgroup: Option<String>,
        /// Which graph to probe: `cayley`, `coset` or `quotient`.
        #[arg(long, default_value = "coset")]
        graph: String,
        #[arg(long)]
        radius: usize,
        /// Comma-separated deletion radii (default: 1..=radius/2).
        #[arg(long)]
        probes: Option<String>,
    },
    /// Displacement-constant suite: derive k from the generator profiles and
    /// check all four displacement inequalities for every element of a ball.
    Lemma18 {
        #[command(flatten)]
        target: Target,
        /// Radius of the ball of elements b to check.
        #[arg(long, default_value_t = 2)]
        ball: usize,
        #[command(flatten)]
        window: Window,
    },
    /// Product-set defect D(aQ·bQ → abQ) against its 2k|b| bound.
    Defect {
        #[command(flatten)]
        target: Target,
        #[arg(long)]
        a: String,
        #[arg(long)]
        b: String,
        #[command(flatten)]
        window: Window,
    },
    /// Near-coset packing census over growing windows.
    Packing {
        #[command(flatten)]
        target: Target,
        /// Closeness threshold for a coset to count.
        #[arg(long, default_value_t = 1)]
        near: u32,
        /// Comma-separated window radii, strictly increasing.
        #[arg(long, default_value = "1,2,3,4,5")]
        radii: String,
    },
    /// Scripted verification bundle for one of the four worked examples
    /// shipped with the catalog.
    PaperExample {
        /// Which bundle to run (1–4).
        n: u32,
    },
    /// Re-render an exported JSON graph window as DOT.
    Export {
        /// Path to a JSON graph produced by the graph subcommands.
        #[arg(long = "in")]
        input: PathBuf,
    },
}

#[derive(Subcommand)]
enum WitnessCmd {
    /// Search for a witness for g over Q and verify it.
    Search {
        #[command(flatten)]
        target: Target,
        #[arg(long)]
        g: String,
        #[command(flatten)]
        tuning: Tuning,
    },
    /// Re-verify a witness report file (uses its declared A and B sets).
    Verify {
        /// Path to a JSON witness report with a plain subgroup spec.
        #[arg(long = "in")]
        input: PathBuf,
        /// Verification radius (default: the radius recorded in the file).
        #[arg(long)]
        radius: Option<usize>,
        #[command(flatten)]
        tuning: Tuning,
    },
    /// Witness for g⁻¹ derived from a searched witness for g.
    Invert {
        #[command(flatten)]
        target: Target,
        #[arg(long)]
        g: String,
        #[command(flatten)]
        tuning: Tuning,
    },
    /// Move a witness for g to another element of the double coset QgQ.
    Transport {
        #[command(flatten)]
        target: Target,
        #[arg(long)]
        g: String,
        /// The destination element k ∈ QgQ.
        #[arg(long)]
        to: String,
        #[command(flatten)]
        tuning: Tuning,
    },
    /// Witness over the intersection of two subgroups, from witnesses for
    /// the same g over each.
    Intersect {
        #[arg(long)]
        group: String,
        #[arg(long)]
        subgroup: String,
        /// The second subgroup spec.
        #[arg(long)]
        and: String,
        #[arg(long)]
        g: String,
        #[command(flatten)]
        tuning: Tuning,
    },
    /// Pass a witness to a finite-index subgroup (`--mode sub`) or
    /// overgroup (`--mode super`) along a coset transversal.
    Findex {
        #[command(flatten)]
        target: Target,
        /// The finite-index subgroup or overgroup spec.
        #[arg(long)]
        other: String,
        /// Semicolon-separated coset representatives.
        #[arg(long)]
        reps: String,
        /// `sub` or `super`.
        #[arg(long)]
        mode: String,
        #[arg(long)]
        g: String,
        #[command(flatten)]
        tuning: Tuning,
    },
    /// Map a witness forward along a homomorphism.
    Push {
        #[command(flatten)]
        target: Target,
        #[arg(long)]
        g: String,
        /// Target group spec.
        #[arg(long)]
        target_group: String,
        /// Semicolon-separated images of the source generators.
        #[arg(long)]
        images: String,
        /// Subgroup of the target containing the image of Q.
        #[arg(long)]
        target_subgroup: String,
        #[command(flatten)]
        tuning: Tuning,
    },
    /// Lift a witness back along a homomorphism to the preimage subgroup.
    Pull {
        /// The group the existing witness lives in (the homomorphism target).
        #[command(flatten)]
        target: Target,
        #[arg(long)]
        g: String,
        /// Source group spec of the homomorphism.
        #[arg(long)]
        source_group: String,
        /// Semicolon-separated images of the source generators.
        #[arg(long)]
        images: String,
        /// Source element mapping onto g.
        #[arg(long)]
        source_g: String,
        #[command(flatten)]
        tuning: Tuning,
    },
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Format {
    Json,
    Dot,
    Text,
}

fn main() -> std::process::ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            // Exit 2 is reserved for inconclusive runs, so usage errors take
            // 1 instead of clap's default 2; help and version stay 0.
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0u8,
                _ => 1u8,
            };
            let _ = e.print();
            return std::process::ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(conclusive) => {
            if conclusive {
                std::process::ExitCode::SUCCESS
            } else {
                std::process::ExitCode::from(2)
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            std::process::ExitCode::from(exit_code_for(&e))
        }
    }
}

/// Budget-shaped failures are inconclusive (2); everything else is a usage
/// or spec error (1).
fn exit_code_for(e: &CommError) -> u8 {
    match e {
        CommError::MembershipUnknown { .. }
        | CommError::BudgetExceeded { .. }
        | CommError::ProfileNotStabilized(_)
        | CommError::AuxiliarySearchFailed(_)
        | CommError::LiftSearchFailed(_)
        | CommError::TransversalIncomplete(_) => 2,
        _ => 1,
    }
}

fn vertex_cap() -> Result<usize> {
    match std::env::var("COMMLAB_MAX_VERTICES") {
        Ok(v) => v.trim().parse().map_err(|_| {
            CommError::InvalidSpec(format!("COMMLAB_MAX_VERTICES is not a number: `{v}`"))
        }),
        Err(_) => Ok(200_000),
    }
}

fn choose_exec(workers: Option<usize>) -> Result<Exec> {
    match workers {
        None => Ok(Exec::Par),
        Some(0) => Err(CommError::InvalidSpec("--workers must be positive".into())),
        Some(1) => Ok(Exec::Seq),
        Some(n) => {
            // Best-effort: the pool may already exist, which only affects
            // wall-clock time, never report bytes.
            let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
            Ok(Exec::Par)
        }
    }
}

fn parse_format(s: &Option<String>) -> Result<Option<Format>> {
    match s.as_deref() {
        None => Ok(None),
        Some("json") => Ok(Some(Format::Json)),
        Some("dot") => Ok(Some(Format::Dot)),
        Some("text") => Ok(Some(Format::Text)),
        Some(other) => Err(CommError::InvalidSpec(format!(
            "unknown format `{other}` (expected json, dot or text)"
        ))),
    }
}

fn emit(out: &Option<PathBuf>, text: &str) -> Result<()> {
    let mut owned = text.to_string();
    if !owned.ends_with('\n') {
        owned.push('\n');
    }
    match out {
        Some(path) => std::fs::write(path, owned)?,
        None => print!("{owned}"),
    }
    Ok(())
}

fn emit_json(out: &Option<PathBuf>, value: &serde_json::Value) -> Result<()> {
    emit(out, &serde_json::to_string_pretty(value)?)
}

fn ball_options(exec: Exec, cap: usize) -> BallOptions {
    BallOptions {
        exec,
        max_vertices: cap,
    }
}

fn profile_options(window: &Window, exec: Exec, cap: usize) -> Result<ProfileOptions> {
    if window.big_radius <= window.rmax {
        return Err(CommError::InvalidSpec(format!(
            "--R ({}) must exceed --rmax ({})",
            window.big_radius, window.rmax
        )));
    }
    Ok(ProfileOptions {
        r_max: window.rmax,
        big_radius: window.big_radius,
        max_vertices: cap,
        exec,
        metric_gens: None,
    })
}

fn witness_options(tuning: &Tuning, exec: Exec, cap: usize) -> WitnessOptions {
    WitnessOptions {
        h_ball_radius: tuning.hball,
        search_radius: tuning.search_radius,
        max_set_size: tuning.max_set,
        max_vertices: cap,
        exec,
    }
}

fn bind(target: &Target) -> Result<(GroupHandle, SubgroupHandle)> {
    let g = build_group(&target.group)?;
    let q = subgroup_of(&g, &target.subgroup, None)?;
    Ok((g, q))
}

fn parse_radius_list(text: &str) -> Result<Vec<usize>> {
    text.split(',')
        .map(|p| {
            p.trim()
                .parse::<usize>()
                .map_err(|_| CommError::InvalidSpec(format!("bad radius `{p}` in list")))
        })
        .collect()
}

fn reject_graph_formats(format: Option<Format>) -> Result<()> {
    match format {
        None | Some(Format::Json) => Ok(()),
        Some(Format::Dot) | Some(Format::Text) => Err(CommError::InvalidSpec(
            "this subcommand only emits JSON".into(),
        )),
    }
}

fn render_graph(
    graph: &LabeledGraph,
    format: Option<Format>,
    out: &Option<PathBuf>,
) -> Result<bool> {
    let text = match format {
        Some(Format::Dot) => to_dot(graph),
        None | Some(Format::Json) => to_json(graph),
        Some(Format::Text) => {
            return Err(CommError::InvalidSpec(
                "graph windows render as json or dot".into(),
            ))
        }
    };
    emit(out, &text)?;
    Ok(!graph.tainted)
}

// Returns whether every verdict in the report was conclusive (untainted,
// stabilized, decided); inconclusive runs exit 2.
fn run(cli: Cli) -> Result<bool> {
    let exec = choose_exec(cli.workers)?;
    let cap = vertex_cap()?;
    let format = parse_format(&cli.format)?;
    let out = cli.out.clone();

    match cli.cmd {
        Cmd::Nf { group, word } => {
            let g = build_group(&group)?;
            let nf = g.nf(&g.parse_runs(&word)?);
            let rendered = g.alphabet().runs_text(&nf);
            let text = match format {
                None | Some(Format::Text) => rendered,
                Some(Format::Json) => serde_json::to_string_pretty(&json!({
                    "kind": "normal-form",
                    "group": g.spec(),
                    "word": word,
                    "nf": rendered,
                    "key": g.key(&nf),
                }))?,
                Some(Format::Dot) => {
                    return Err(CommError::InvalidSpec(
                        "nf renders as text or json".into(),
                    ))
                }
            };
            emit(&out, &text)?;
            Ok(true)
        }
        Cmd::Ball { group, radius } => {
            let g = build_group(&group)?;
            let graph = cayley_ball(&g, radius, &ball_options(exec, cap))?;
            render_graph(&graph, format, &out)
        }
        Cmd::CosetGraph { target, radius } => {
            let (_, q) = bind(&target)?;
            let graph = coset_graph_ball(&q, radius, &ball_options(exec, cap))?;
            render_graph(&graph, format, &out)
        }
        Cmd::QuotientGraph { target, radius } => {
            let (_, q) = bind(&target)?;
            let graph = quotient_graph_ball(&q, radius, &ball_options(exec, cap))?;
            render_graph(&graph, format, &out)
        }
        Cmd::Hausdorff { target, g, window } => {
            reject_graph_formats(format)?;
            let (group, q) = bind(&target)?;
            let opts = profile_options(&window, exec, cap)?;
            let g_elt = group.parse_runs(&g)?;
            let p = coset_profile(&q, &g_elt, &opts)?;
            let conclusive = !p.tainted && p.verdict != GrowthVerdict::Inconclusive;
            let value = report::profile_json(&group, &q, &g_elt, &p);
            emit_json(&out, &value)?;
            Ok(conclusive)
        }
        Cmd::Witness { op } => run_witness(op, exec, cap, format, &out),
        Cmd::Ends {
            group,
            subgroup,
            graph,
            radius,
            probes,
        } => {
            reject_graph_formats(format)?;
            let g = build_group(&group)?;
            let kind = GraphKind::parse(&graph).ok_or_else(|| {
                CommError::InvalidSpec(format!(
                    "unknown graph `{graph}` (expected cayley, coset or quotient)"
                ))
            })?;
            let window = match kind {
                GraphKind::Cayley => cayley_ball(&g, radius, &ball_options(exec, cap))?,
                GraphKind::Coset | GraphKind::Quotient => {
                    let spec = subgroup.as_deref().ok_or_else(|| {
                        CommError::InvalidSpec(
                            "--subgroup is required for coset and quotient graphs".into(),
                        )
                    })?;
                    let q = subgroup_of(&g, spec, None)?;
                    match kind {
                        GraphKind::Coset => coset_graph_ball(&q, radius, &ball_options(exec, cap))?,
                        _ => quotient_graph_ball(&q, radius, &ball_options(exec, cap))?,
                    }
                }
            };
            let probe_radii: Vec<usize> = match probes {
                Some(p) => parse_radius_list(&p)?,
                None => (1..=radius / 2).collect(),
            };
            if probe_radii.is_empty() || probe_radii.iter().any(|&r| r < 1 || r >= radius) {
                return Err(CommError::InvalidSpec(format!(
                    "probe radii must lie in 1..{radius}"
                )));
            }
            let rep = ends_estimate(&window, &probe_radii);
            let conclusive = !rep.tainted && rep.verdict != EndsVerdict::Inconclusive;
            let value = json!({
                "kind": "ends-estimate",
                "group": g.spec(),
                "subgroup": subgroup,
                "graph": kind.name(),
                "radius": radius,
                "probes": rep.radii,
                "counts": rep.counts,
                "verdict": rep.verdict.name(),
                "tainted": rep.tainted,
            });
            emit_json(&out, &value)?;
            Ok(conclusive)
        }
        Cmd::Lemma18 {
            target,
            ball,
            window,
        } => {
            reject_graph_formats(format)?;
            let (group, q) = bind(&target)?;
            let opts = profile_options(&window, exec, cap)?;
            let stab = stabilization_constant(&q, &opts)?;
            let elements = commlab_core::graph::build_ball(&group, ball, &ball_options(exec, cap))?;
            let mut rows = Vec::new();
            let mut all_hold = true;
            let mut tainted = stab.tainted;
            for i in 0..elements.len() as u32 {
                if elements.dist(i) == 0 {
                    continue;
                }
                let rep = displacement_checks(&q, elements.elem(i), stab.k, &opts)?;
                all_hold &= rep.all_hold;
                tainted |= rep.tainted;
                rows.push(report::displacement_json(&rep));
            }
            let value = json!({
                "kind": "displacement-suite",
                "group": group.spec(),
                "subgroup": q.spec_text(),
                "k": stab.k,
                "per_generator": stab.per_generator,
                "ball": ball,
                "elements": rows,
                "all_hold": all_hold,
                "tainted": tainted,
            });
            emit_json(&out, &value)?;
            Ok(!tainted)
        }
        Cmd::Defect {
            target,
            a,
            b,
            window,
        } => {
            reject_graph_formats(format)?;
            let (group, q) = bind(&target)?;
            let opts = profile_options(&window, exec, cap)?;
            let stab = stabilization_constant(&q, &opts)?;
            let a_elt = group.parse_runs(&a)?;
            let b_elt = group.parse_runs(&b)?;
            let rep = product_defect(&q, &a_elt, &b_elt, stab.k, &opts)?;
            let tainted = rep.tainted || stab.tainted;
            let value = json!({
                "kind": "product-defect",
                "group": group.spec(),
                "subgroup": q.spec_text(),
                "a": rep.a,
                "b": rep.b,
                "k": stab.k,
                "norm_b": rep.norm_b,
                "measured": rep.measured,
                "exact": rep.exact,
                "bound": rep.bound,
                "holds": rep.holds,
                "tainted": tainted,
            });
            emit_json(&out, &value)?;
            Ok(!tainted)
        }
        Cmd::Packing {
            target,
            near,
            radii,
        } => {
            reject_graph_formats(format)?;
            let (group, q) = bind(&target)?;
            let radii = parse_radius_list(&radii)?;
            let opts = ProfileOptions {
                max_vertices: cap,
                exec,
                ..ProfileOptions::default()
            };
            let census = packing_census(&q, near, &radii, &opts)?;
            let conclusive = !census.tainted && census.verdict != GrowthVerdict::Inconclusive;
            let value = json!({
                "kind": "packing-census",
                "group": group.spec(),
                "subgroup": q.spec_text(),
                "near_distance": census.near_distance,
                "radii": census.radii,
                "counts": census.counts,
                "verdict": census.verdict.name(),
                "tainted": census.tainted,
            });
            emit_json(&out, &value)?;
            Ok(conclusive)
        }
        Cmd::PaperExample { n } => {
            reject_graph_formats(format)?;
            let (value, conclusive) = bundles::run(n, exec, cap)?;
            emit_json(&out, &value)?;
            Ok(conclusive)
        }
        Cmd::Export { input } => {
            let text = std::fs::read_to_string(&input)?;
            let graph = from_json(&text)?;
            let dot = to_dot(&graph);
            emit(&out, &dot)?;
            Ok(true)
        }
    }
}

fn run_witness(
    op: WitnessCmd,
    exec: Exec,
    cap: usize,
    format: Option<Format>,
    out: &Option<PathBuf>,
) -> Result<bool> {
    reject_graph_formats(format)?;
    // A verify sweep only returns when every membership was decided, so both
    // outcomes — verified or a concrete counterexample — are conclusive.
    let finish = |w: &Witness, opts: &WitnessOptions, radius: usize, operation: &str| {
        let outcome = verify_witness(w, radius, opts)?;
        let value = report::witness_json(w, radius, &outcome, opts, operation)?;
        emit_json(out, &value)?;
        Ok(true)
    };

    match op {
        WitnessCmd::Search { target, g, tuning } => {
            let (group, q) = bind(&target)?;
            let opts = witness_options(&tuning, exec, cap);
            let g_elt = group.parse_runs(&g)?;
            let w = search_witness(&q, &g_elt, &opts)?;
            let radius = tuning.verify_radius.unwrap_or(opts.h_ball_radius);
            finish(&w, &opts, radius, "search")
        }
        WitnessCmd::Verify {
            input,
            radius,
            tuning,
        } => {
            let text = std::fs::read_to_string(&input)?;
            let value: serde_json::Value = serde_json::from_str(&text)?;
            let opts = witness_options(&tuning, exec, cap);
            let (w, file_radius) = report::witness_from_json(&value)?;
            let radius = radius.or(file_radius).unwrap_or(opts.h_ball_radius);
            finish(&w, &opts, radius, "verify")
        }
        WitnessCmd::Invert { target, g, tuning } => {
            let (group, q) = bind(&target)?;
            let opts = witness_options(&tuning, exec, cap);
            let g_elt = group.parse_runs(&g)?;
            let w = invert(&search_witness(&q, &g_elt, &opts)?);
            let radius = tuning.verify_radius.unwrap_or(opts.h_ball_radius);
            finish(&w, &opts, radius, "invert")
        }
        WitnessCmd::Transport {
            target,
            g,
            to,
            tuning,
        } => {
            let (group, q) = bind(&target)?;
            let opts = witness_options(&tuning, exec, cap);
            let g_elt = group.parse_runs(&g)?;
            let k_elt = group.parse_runs(&to)?;
            let w = transport(&search_witness(&q, &g_elt, &opts)?, &k_elt, &opts)?;
            let radius = tuning.verify_radius.unwrap_or(opts.h_ball_radius);
            finish(&w, &opts, radius, "transport")
        }
        WitnessCmd::Intersect {
            group,
            subgroup,
            and,
            g,
            tuning,
        } => {
            let gh = build_group(&group)?;
            let qa = subgroup_of(&gh, &subgroup, None)?;
            let qb = subgroup_of(&gh, &and, None)?;
            let opts = witness_options(&tuning, exec, cap);
            let g_elt = gh.parse_runs(&g)?;
            let wa = search_witness(&qa, &g_elt, &opts)?;
            let wb = search_witness(&qb, &g_elt, &opts)?;
            let w = intersect_witnesses(&wa, &wb, &opts)?;
            let radius = tuning.verify_radius.unwrap_or(opts.h_ball_radius);
            finish(&w, &opts, radius, "intersect")
        }
        WitnessCmd::Findex {
            target,
            other,
            reps,
            mode,
            g,
            tuning,
        } => {
            let (group, q) = bind(&target)?;
            let q_other = subgroup_of(&group, &other, None)?;
            let opts = witness_options(&tuning, exec, cap);
            let g_elt = group.parse_runs(&g)?;
            let rep_words: Vec<Runs> = reps
                .split(';')
                .filter(|s| !s.trim().is_empty())
                .map(|s| group.parse_runs(s.trim()))
                .collect::<Result<_>>()?;
            let base = search_witness(&q, &g_elt, &opts)?;
            let w = match mode.as_str() {
                "sub" => restrict_to_finite_index(&base, &q_other, &rep_words, &opts)?,
                "super" => extend_to_finite_index(&base, &q_other, &rep_words, &opts)?,
                other => {
                    return Err(CommError::InvalidSpec(format!(
                        "mode `{other}` is not sub or super"
                    )))
                }
            };
            let radius = tuning.verify_radius.unwrap_or(opts.h_ball_radius);
            finish(&w, &opts, radius, "findex")
        }
        WitnessCmd::Push {
            target,
            g,
            target_group,
            images,
            target_subgroup,
            tuning,
        } => {
            let (group, q) = bind(&target)?;
            let tgt = build_group(&target_group)?;
            let hom = HomHandle::parse(&group, &tgt, &images)?;
            let q2 = subgroup_of(&tgt, &target_subgroup, None)?;
            let opts = witness_options(&tuning, exec, cap);
            let g_elt = group.parse_runs(&g)?;
            let w = pushforward(&search_witness(&q, &g_elt, &opts)?, &hom, &q2, &opts)?;
            let radius = tuning.verify_radius.unwrap_or(opts.h_ball_radius);
            finish(&w, &opts, radius, "push")
        }
        WitnessCmd::Pull {
            target,
            g,
            source_group,
            images,
            source_g,
            tuning,
        } => {
            let (group, q) = bind(&target)?;
            let src = build_group(&source_group)?;
            let hom = HomHandle::parse(&src, &group, &images)?;
            let opts = witness_options(&tuning, exec, cap);
            let g_elt = group.parse_runs(&g)?;
            let g1 = src.parse_runs(&source_g)?;
            let w = pullback(&search_witness(&q, &g_elt, &opts)?, &hom, &g1, &opts)?;
            let radius = tuning.verify_radius.unwrap_or(opts.h_ball_radius);
            finish(&w, &opts, radius, "pull")
        }
    }
}
