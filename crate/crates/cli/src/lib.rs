//! Command implementations for the `tdl` binary, exposed as a library so
//! tests can drive them in-process. Every command is a thin adapter: it
//! loads a workspace, calls the library, and formats the result.

pub mod workspace;

use std::collections::BTreeSet;
use std::path::PathBuf;

use clap::{Parser, Subcommand};
use serde_json::{Map, Value};

use tdl::divisor::canonical_divisor;
use tdl::error::{Error, Result};
use tdl::graph::{MetricGraph, PointRef, VertexIx};
use tdl::rank::{fg_rank, linear_system_nonempty, rank, restricted_rank, rr_verify};
use tdl::rat::{fmt_rat, parse_rat};
use tdl::rds::{
    construct_rds_spanning, is_minimal_rds, is_rank_determining, l_closure, minimal_rds_search,
    SpanningOptions,
};
use tdl::reduce::{dhar, is_reduced, move_step, reduce_or_empty, support_locus, Caps, ReduceOutcome};
use tdl::refine::ClosedLocus;
use tdl::Divisor;
use workspace::{divisor_value, parse_workspace, point_value, Workspace};

/// Captured result of one command invocation.
pub struct CommandOutput {
    pub code: u8,
    pub stdout: String,
    pub stderr: String,
}

#[derive(Parser)]
#[command(name = "tdl", version, about = "Divisor computations on metric graphs")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(clap::Args)]
struct Common {
    /// Workspace file (JSON)
    #[arg(long)]
    input: PathBuf,
    /// Emit machine-readable JSON instead of text
    #[arg(long)]
    json: bool,
}

#[derive(clap::Args)]
struct CapArg {
    /// Iteration and search cap (overrides TDL_CAP and the default)
    #[arg(long)]
    cap: Option<usize>,
}

#[derive(Subcommand)]
enum Cmd {
    /// Validate the workspace and report the graph shape
    Validate {
        #[command(flatten)]
        common: Common,
        /// Split loop edges at their midpoints instead of rejecting them
        #[arg(long)]
        subdivide_loops: bool,
    },
    /// Print the genus
    Genus {
        #[command(flatten)]
        common: Common,
    },
    /// Print the canonical divisor
    Canonical {
        #[command(flatten)]
        common: Common,
    },
    /// Reduce a divisor at a base point, or certify its class empty
    Reduce {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        divisor: String,
        /// Base point: a point name, a vertex id, or EDGE@OFFSET
        #[arg(long)]
        base: String,
        #[command(flatten)]
        cap: CapArg,
    },
    /// Test whether a divisor is reduced at a base point
    IsReduced {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        divisor: String,
        #[arg(long)]
        base: String,
    },
    /// Run one burning pass and print the stalled set and burn layers
    Dhar {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        divisor: String,
        #[arg(long)]
        base: String,
    },
    /// Apply the full move determined by the stalled set
    MoveStep {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        divisor: String,
        #[arg(long)]
        base: String,
    },
    /// Rank of a divisor
    Rank {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        divisor: String,
        /// Answer degrees above 2g-2 by the degree formula without search
        #[arg(long)]
        rr_shortcut: bool,
        #[command(flatten)]
        cap: CapArg,
    },
    /// Rank of a divisor tested only against divisors on a point set
    RestrictedRank {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        divisor: String,
        #[arg(long)]
        set: String,
        #[command(flatten)]
        cap: CapArg,
    },
    /// Decide whether the complete linear system of a divisor is empty
    EmptyCheck {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        divisor: String,
        #[command(flatten)]
        cap: CapArg,
    },
    /// Closed support of a complete linear system and its complement regions
    SupportLocus {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        divisor: String,
        #[command(flatten)]
        cap: CapArg,
    },
    /// Check the rank identity of a divisor against its canonical mirror
    RrCheck {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        divisor: String,
        #[command(flatten)]
        cap: CapArg,
    },
    /// Decide whether a point set is rank-determining
    IsRds {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        set: String,
        #[command(flatten)]
        cap: CapArg,
    },
    /// Closure of a point set under the special-region criterion
    LClosure {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        set: String,
        #[command(flatten)]
        cap: CapArg,
    },
    /// Witness divisor separating restricted from true rank, if any
    RdsWitness {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        set: String,
        #[command(flatten)]
        cap: CapArg,
    },
    /// Check minimality of a rank-determining set
    MinRdsCheck {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        set: String,
        #[command(flatten)]
        cap: CapArg,
    },
    /// Build a rank-determining set of size genus+1 from a spanning tree
    RdsConstruct {
        #[command(flatten)]
        common: Common,
        /// Base point on the tree: a point name, a vertex id, or EDGE@OFFSET
        #[arg(long)]
        base: Option<String>,
    },
    /// Enumerate minimal rank-determining subsets of a point set
    MinRdsSearch {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        set: String,
        /// Largest subset size to try (default: the whole set)
        #[arg(long)]
        max_size: Option<usize>,
        #[command(flatten)]
        cap: CapArg,
    },
    /// Rank on the underlying finite graph (unit lengths, vertex support)
    FgRank {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        divisor: String,
        #[command(flatten)]
        cap: CapArg,
    },
}

/// Runs one CLI invocation from an argv iterator (without the program
/// name) and captures its output and exit code.
pub fn run_command<I, S>(argv: I) -> CommandOutput
where
    I: IntoIterator<Item = S>,
    S: Into<String>,
{
    let args = std::iter::once("tdl".to_string()).chain(argv.into_iter().map(Into::into));
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let rendered = e.render().to_string();
            return match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => {
                    CommandOutput { code: 0, stdout: rendered, stderr: String::new() }
                }
                _ => CommandOutput { code: 2, stdout: String::new(), stderr: rendered },
            };
        }
    };
    match dispatch(cli.cmd) {
        Ok((stdout, code)) => CommandOutput { code, stdout, stderr: String::new() },
        Err(e) => CommandOutput {
            code: if e.is_defect() { 3 } else { 1 },
            stdout: String::new(),
            stderr: format!("error: {e}\n"),
        },
    }
}

fn load(common: &Common, subdivide_loops: bool) -> Result<Workspace> {
    let text = std::fs::read_to_string(&common.input).map_err(|e| Error::InvalidParameter {
        detail: format!("{}: {e}", common.input.display()),
    })?;
    parse_workspace(&text, subdivide_loops)
}

fn effective_caps(flag: &CapArg) -> Result<Caps> {
    let mut caps = Caps::default();
    let choice = match flag.cap {
        Some(n) => Some(n),
        None => match std::env::var("TDL_CAP") {
            Ok(s) => Some(s.parse::<usize>().map_err(|_| Error::InvalidParameter {
                detail: format!("TDL_CAP: not a count: {s:?}"),
            })?),
            Err(_) => None,
        },
    };
    if let Some(n) = choice {
        caps.iterations = n;
        caps.subsets = n;
    }
    Ok(caps)
}

fn get_divisor<'a>(ws: &'a Workspace, name: &str) -> Result<&'a Divisor> {
    ws.divisors.get(name).ok_or_else(|| Error::InvalidParameter {
        detail: format!("unknown divisor {name:?}"),
    })
}

fn get_set<'a>(ws: &'a Workspace, name: &str) -> Result<&'a BTreeSet<PointRef>> {
    ws.sets.get(name).ok_or_else(|| Error::InvalidParameter {
        detail: format!("unknown set {name:?}"),
    })
}

/// A point argument: a workspace point name, a vertex id, or EDGE@OFFSET
/// with the offset measured from the edge's first serialized end.
fn resolve_point_arg(ws: &Workspace, s: &str) -> Result<PointRef> {
    if let Some(p) = ws.points.get(s) {
        return Ok(p.clone());
    }
    if let Some(v) = ws.graph.vertex_by_id(s) {
        return Ok(PointRef::Vertex(v));
    }
    if let Some((eid, off)) = s.split_once('@') {
        let e = ws
            .graph
            .edge_by_id(eid)
            .ok_or_else(|| Error::UnknownEdge { id: eid.to_string() })?;
        let off = parse_rat(off).ok_or_else(|| Error::InvalidParameter {
            detail: format!("not a rational offset: {off:?}"),
        })?;
        return ws.graph.point_on_edge(e, off);
    }
    Err(Error::InvalidParameter {
        detail: format!("unknown point {s:?}"),
    })
}

// ---------------------------------------------------------------------------
// display helpers
// ---------------------------------------------------------------------------

/// Shortest display form: vertex id, workspace point name, or edge@offset.
fn show_point(ws: &Workspace, p: &PointRef) -> String {
    match p {
        PointRef::Vertex(v) => ws.graph.vertex_id(*v).to_string(),
        PointRef::Interior(e, off) => {
            for (name, q) in &ws.points {
                if q == p {
                    return name.clone();
                }
            }
            format!("{}@{}", ws.graph.edge(*e).id, fmt_rat(off))
        }
    }
}

fn show_point_set<'a>(ws: &Workspace, points: impl Iterator<Item = &'a PointRef>) -> String {
    let mut names: Vec<String> = points.map(|p| show_point(ws, p)).collect();
    names.sort();
    format!("{{{}}}", names.join(", "))
}

fn show_divisor(ws: &Workspace, d: &Divisor) -> String {
    if d.is_zero() {
        return "0".to_string();
    }
    let mut out = String::new();
    for (p, c) in d.iter() {
        let mag = c.unsigned_abs();
        if out.is_empty() {
            if c < 0 {
                out.push('-');
            }
        } else {
            out.push_str(if c < 0 { " - " } else { " + " });
        }
        if mag != 1 {
            out.push_str(&mag.to_string());
        }
        out.push_str(&format!("({})", show_point(ws, p)));
    }
    out
}

/// Model vertex ids of a set, brace-listed (index order is id order).
fn show_vertex_ids(g: &MetricGraph, vs: &BTreeSet<VertexIx>) -> String {
    let names: Vec<&str> = vs.iter().map(|&v| g.vertex_id(v)).collect();
    format!("{{{}}}", names.join(", "))
}

fn show_locus(g: &MetricGraph, locus: &ClosedLocus) -> (String, String) {
    let vs = show_vertex_ids(g, &locus.vertices);
    let es: Vec<&str> = locus.closed_edges.iter().map(|&e| g.edge(e).id.as_str()).collect();
    (vs, format!("{{{}}}", es.join(", ")))
}

fn point_list(g: &MetricGraph, points: impl Iterator<Item = PointRef>) -> Value {
    Value::Array(points.map(|p| point_value(g, &p)).collect())
}

fn obj(entries: Vec<(&str, Value)>) -> Value {
    let mut m = Map::new();
    for (k, v) in entries {
        m.insert(k.to_string(), v);
    }
    Value::Object(m)
}

fn render(json_mode: bool, value: Value, text: String) -> (String, u8) {
    if json_mode {
        (format!("{value}\n"), 0)
    } else {
        (text, 0)
    }
}

// ---------------------------------------------------------------------------
// dispatch
// ---------------------------------------------------------------------------

fn dispatch(cmd: Cmd) -> Result<(String, u8)> {
    match cmd {
        Cmd::Validate { common, subdivide_loops } => {
            let ws = load(&common, subdivide_loops)?;
            let g = &ws.graph;
            Ok(render(
                common.json,
                obj(vec![
                    ("valid", Value::Bool(true)),
                    ("vertices", Value::from(g.vertex_count())),
                    ("edges", Value::from(g.edge_count())),
                    ("genus", Value::from(g.genus())),
                ]),
                format!(
                    "valid: {} vertices, {} edges, genus {}\n",
                    g.vertex_count(),
                    g.edge_count(),
                    g.genus()
                ),
            ))
        }
        Cmd::Genus { common } => {
            let ws = load(&common, false)?;
            Ok(render(
                common.json,
                obj(vec![("genus", Value::from(ws.graph.genus()))]),
                format!("{}\n", ws.graph.genus()),
            ))
        }
        Cmd::Canonical { common } => {
            let ws = load(&common, false)?;
            let k = canonical_divisor(&ws.graph);
            Ok(render(
                common.json,
                obj(vec![
                    ("divisor", divisor_value(&ws.graph, &k)),
                    ("degree", Value::from(k.degree())),
                ]),
                format!("{}\ndegree {}\n", show_divisor(&ws, &k), k.degree()),
            ))
        }
        Cmd::Reduce { common, divisor, base, cap } => {
            let ws = load(&common, false)?;
            let d = get_divisor(&ws, &divisor)?;
            let v0 = resolve_point_arg(&ws, &base)?;
            let caps = effective_caps(&cap)?;
            match reduce_or_empty(&ws.graph, d, &v0, &caps)? {
                ReduceOutcome::Reduced(r) => Ok(render(
                    common.json,
                    obj(vec![
                        ("empty", Value::Bool(false)),
                        ("divisor", divisor_value(&ws.graph, &r)),
                        ("degree", Value::from(r.degree())),
                    ]),
                    format!("reduced: {}\ndegree {}\n", show_divisor(&ws, &r), r.degree()),
                )),
                ReduceOutcome::CertifiedEmpty(c) => Ok(render(
                    common.json,
                    obj(vec![
                        ("empty", Value::Bool(true)),
                        ("at", point_value(&ws.graph, &c.failed_at)),
                        ("required", Value::from(c.required)),
                        ("available", Value::from(c.available)),
                    ]),
                    format!(
                        "empty: need {} at {}, have {}\n",
                        c.required,
                        show_point(&ws, &c.failed_at),
                        c.available
                    ),
                )),
            }
        }
        Cmd::IsReduced { common, divisor, base } => {
            let ws = load(&common, false)?;
            let d = get_divisor(&ws, &divisor)?;
            let v0 = resolve_point_arg(&ws, &base)?;
            let yes = is_reduced(&ws.graph, d, &v0);
            Ok(render(
                common.json,
                obj(vec![("reduced", Value::Bool(yes))]),
                format!("{yes}\n"),
            ))
        }
        Cmd::Dhar { common, divisor, base } => {
            let ws = load(&common, false)?;
            let d = get_divisor(&ws, &divisor)?;
            let v0 = resolve_point_arg(&ws, &base)?;
            let out = dhar(&ws.graph, d, &v0)?;
            let mut text = format!("S = {}\n", show_point_set(&ws, out.s.iter()));
            for (k, layer) in out.burn_layers.iter().enumerate() {
                text.push_str(&format!("N{k} = {}\n", show_point_set(&ws, layer.iter())));
            }
            Ok(render(
                common.json,
                obj(vec![
                    ("s", point_list(&ws.graph, out.s.iter().cloned())),
                    (
                        "layers",
                        Value::Array(
                            out.burn_layers
                                .iter()
                                .map(|l| point_list(&ws.graph, l.iter().cloned()))
                                .collect(),
                        ),
                    ),
                ]),
                text,
            ))
        }
        Cmd::MoveStep { common, divisor, base } => {
            let ws = load(&common, false)?;
            let d = get_divisor(&ws, &divisor)?;
            let v0 = resolve_point_arg(&ws, &base)?;
            let burn = dhar(&ws.graph, d, &v0)?;
            if burn.s.is_empty() {
                return Ok(render(
                    common.json,
                    obj(vec![("reduced", Value::Bool(true))]),
                    "already reduced: no move\n".to_string(),
                ));
            }
            let out = move_step(&ws.graph, d, &burn.s, &v0, None)?;
            let mut text = String::new();
            let mut comps = Vec::new();
            for (i, c) in out.components.iter().enumerate() {
                let debit_div = Divisor::from_entries(c.debits.iter().cloned());
                let landing_div = Divisor::from_entries(c.landings.iter().cloned());
                text.push_str(&format!(
                    "component {}: d = {}, debits {}, landings {}\n",
                    i + 1,
                    fmt_rat(&c.d),
                    show_divisor(&ws, &debit_div),
                    show_divisor(&ws, &landing_div),
                ));
                comps.push(obj(vec![
                    ("d", Value::String(fmt_rat(&c.d))),
                    ("debits", divisor_value(&ws.graph, &debit_div)),
                    ("landings", divisor_value(&ws.graph, &landing_div)),
                ]));
            }
            text.push_str(&format!(
                "result: {}\ndegree {}\n",
                show_divisor(&ws, &out.result),
                out.result.degree()
            ));
            Ok(render(
                common.json,
                obj(vec![
                    ("components", Value::Array(comps)),
                    ("result", divisor_value(&ws.graph, &out.result)),
                    ("degree", Value::from(out.result.degree())),
                ]),
                text,
            ))
        }
        Cmd::Rank { common, divisor, rr_shortcut, cap } => {
            let ws = load(&common, false)?;
            let d = get_divisor(&ws, &divisor)?;
            let caps = effective_caps(&cap)?;
            let r = rank(&ws.graph, d, None, rr_shortcut, &caps)?;
            Ok(render(
                common.json,
                obj(vec![
                    ("rank", Value::from(r.rank)),
                    (
                        "witness",
                        r.failing_witness
                            .as_ref()
                            .map_or(Value::Null, |w| divisor_value(&ws.graph, w)),
                    ),
                    ("levels", Value::from(r.levels_checked)),
                ]),
                match &r.failing_witness {
                    Some(w) => format!("rank {}\nwitness: {}\n", r.rank, show_divisor(&ws, w)),
                    None => format!("rank {}\n", r.rank),
                },
            ))
        }
        Cmd::RestrictedRank { common, divisor, set, cap } => {
            let ws = load(&common, false)?;
            let d = get_divisor(&ws, &divisor)?;
            let a = get_set(&ws, &set)?;
            let caps = effective_caps(&cap)?;
            let r = restricted_rank(&ws.graph, d, a, &caps)?;
            Ok(render(
                common.json,
                obj(vec![
                    ("rank", Value::from(r.rank)),
                    (
                        "witness",
                        r.failing_witness
                            .as_ref()
                            .map_or(Value::Null, |w| divisor_value(&ws.graph, w)),
                    ),
                    ("levels", Value::from(r.levels_checked)),
                ]),
                match &r.failing_witness {
                    Some(w) => format!("rank {}\nwitness: {}\n", r.rank, show_divisor(&ws, w)),
                    None => format!("rank {}\n", r.rank),
                },
            ))
        }
        Cmd::EmptyCheck { common, divisor, cap } => {
            let ws = load(&common, false)?;
            let d = get_divisor(&ws, &divisor)?;
            let caps = effective_caps(&cap)?;
            match linear_system_nonempty(&ws.graph, d, &caps)? {
                Some(rep) => Ok(render(
                    common.json,
                    obj(vec![
                        ("empty", Value::Bool(false)),
                        ("representative", divisor_value(&ws.graph, &rep)),
                    ]),
                    format!("nonempty: {}\n", show_divisor(&ws, &rep)),
                )),
                None => Ok(render(
                    common.json,
                    obj(vec![("empty", Value::Bool(true))]),
                    "empty\n".to_string(),
                )),
            }
        }
        Cmd::SupportLocus { common, divisor, cap } => {
            let ws = load(&common, false)?;
            let d = get_divisor(&ws, &divisor)?;
            let caps = effective_caps(&cap)?;
            let out = support_locus(&ws.graph, d, &caps)?;
            let mg = out.model.model();
            let (vs, es) = show_locus(mg, &out.locus);
            Ok(render(
                common.json,
                obj(vec![
                    (
                        "vertices",
                        Value::Array(
                            out.locus
                                .vertices
                                .iter()
                                .map(|&v| Value::String(mg.vertex_id(v).to_string()))
                                .collect(),
                        ),
                    ),
                    (
                        "edges",
                        Value::Array(
                            out.locus
                                .closed_edges
                                .iter()
                                .map(|&e| Value::String(mg.edge(e).id.clone()))
                                .collect(),
                        ),
                    ),
                    ("regions", Value::from(out.regions.len())),
                ]),
                format!("vertices: {vs}\nedges: {es}\nregions: {}\n", out.regions.len()),
            ))
        }
        Cmd::RrCheck { common, divisor, cap } => {
            let ws = load(&common, false)?;
            let d = get_divisor(&ws, &divisor)?;
            let caps = effective_caps(&cap)?;
            let rep = rr_verify(&ws.graph, d, &caps)?;
            let value = obj(vec![
                ("equal", Value::Bool(rep.equal)),
                ("lhs", Value::from(rep.lhs)),
                ("rhs", Value::from(rep.rhs)),
                ("rank", Value::from(rep.rank_d)),
                ("rank_mirror", Value::from(rep.rank_kd)),
            ]);
            let (text, code) = if rep.equal {
                (format!("lhs {} = rhs {}: OK\n", rep.lhs, rep.rhs), 0)
            } else {
                (format!("lhs {} != rhs {}: MISMATCH\n", rep.lhs, rep.rhs), 3)
            };
            let (out, _) = render(common.json, value, text);
            Ok((out, code))
        }
        Cmd::IsRds { common, set, cap } => {
            let ws = load(&common, false)?;
            let a = get_set(&ws, &set)?;
            let caps = effective_caps(&cap)?;
            let verdict = is_rank_determining(&ws.graph, a, &caps)?;
            match &verdict.witness_divisor {
                None => Ok(render(
                    common.json,
                    obj(vec![("rds", Value::Bool(true))]),
                    "true\n".to_string(),
                )),
                Some(dw) => Ok(render(
                    common.json,
                    obj(vec![
                        ("rds", Value::Bool(false)),
                        ("witness", divisor_value(&ws.graph, dw)),
                    ]),
                    format!("false\nwitness: {}\n", show_divisor(&ws, dw)),
                )),
            }
        }
        Cmd::LClosure { common, set, cap } => {
            let ws = load(&common, false)?;
            let a = get_set(&ws, &set)?;
            let caps = effective_caps(&cap)?;
            let (model, locus) = l_closure(&ws.graph, a, &caps)?;
            let mg = model.model();
            let whole = locus.is_whole(mg);
            let (vs, es) = show_locus(mg, &locus);
            Ok(render(
                common.json,
                obj(vec![
                    (
                        "vertices",
                        Value::Array(
                            locus
                                .vertices
                                .iter()
                                .map(|&v| Value::String(mg.vertex_id(v).to_string()))
                                .collect(),
                        ),
                    ),
                    (
                        "edges",
                        Value::Array(
                            locus
                                .closed_edges
                                .iter()
                                .map(|&e| Value::String(mg.edge(e).id.clone()))
                                .collect(),
                        ),
                    ),
                    ("whole", Value::Bool(whole)),
                ]),
                format!("vertices: {vs}\nedges: {es}\nwhole: {whole}\n"),
            ))
        }
        Cmd::RdsWitness { common, set, cap } => {
            let ws = load(&common, false)?;
            let a = get_set(&ws, &set)?;
            let caps = effective_caps(&cap)?;
            let verdict = is_rank_determining(&ws.graph, a, &caps)?;
            match (&verdict.witness, &verdict.witness_divisor) {
                (Some(w), Some(dw)) => {
                    let mg = w.model.model();
                    Ok(render(
                        common.json,
                        obj(vec![
                            ("rds", Value::Bool(false)),
                            ("witness", divisor_value(&ws.graph, dw)),
                            (
                                "region_vertices",
                                Value::Array(
                                    w.w.iter()
                                        .map(|&v| Value::String(mg.vertex_id(v).to_string()))
                                        .collect(),
                                ),
                            ),
                        ]),
                        format!(
                            "witness: {}\nregion: {}\n",
                            show_divisor(&ws, dw),
                            show_vertex_ids(mg, &w.w)
                        ),
                    ))
                }
                _ => Ok(render(
                    common.json,
                    obj(vec![("rds", Value::Bool(true))]),
                    "rank-determining: no witness\n".to_string(),
                )),
            }
        }
        Cmd::MinRdsCheck { common, set, cap } => {
            let ws = load(&common, false)?;
            let a = get_set(&ws, &set)?;
            let caps = effective_caps(&cap)?;
            let verdict = is_minimal_rds(&ws.graph, a, &caps)?;
            let mut text = format!("minimal: {}\n", verdict.minimal);
            if !verdict.removable.is_empty() {
                text.push_str(&format!(
                    "removable: {}\n",
                    show_point_set(&ws, verdict.removable.iter())
                ));
            }
            Ok(render(
                common.json,
                obj(vec![
                    ("minimal", Value::Bool(verdict.minimal)),
                    (
                        "removable",
                        point_list(&ws.graph, verdict.removable.iter().cloned()),
                    ),
                ]),
                text,
            ))
        }
        Cmd::RdsConstruct { common, base } => {
            let ws = load(&common, false)?;
            let opts = SpanningOptions {
                base: base.as_deref().map(|s| resolve_point_arg(&ws, s)).transpose()?,
                ..SpanningOptions::default()
            };
            let set = construct_rds_spanning(&ws.graph, &opts)?;
            Ok(render(
                common.json,
                obj(vec![
                    ("set", point_list(&ws.graph, set.iter().cloned())),
                    ("size", Value::from(set.len())),
                ]),
                format!("set: {}\nsize {}\n", show_point_set(&ws, set.iter()), set.len()),
            ))
        }
        Cmd::MinRdsSearch { common, set, max_size, cap } => {
            let ws = load(&common, false)?;
            let pool = get_set(&ws, &set)?;
            let caps = effective_caps(&cap)?;
            let max = max_size.unwrap_or(pool.len());
            let found = minimal_rds_search(&ws.graph, pool, max, &caps)?;
            let mut text = String::new();
            for s in &found {
                text.push_str(&format!("{}\n", show_point_set(&ws, s.iter())));
            }
            text.push_str(&format!("found {}\n", found.len()));
            Ok(render(
                common.json,
                obj(vec![(
                    "found",
                    Value::Array(
                        found
                            .iter()
                            .map(|s| point_list(&ws.graph, s.iter().cloned()))
                            .collect(),
                    ),
                )]),
                text,
            ))
        }
        Cmd::FgRank { common, divisor, cap } => {
            let ws = load(&common, false)?;
            let d = get_divisor(&ws, &divisor)?;
            let caps = effective_caps(&cap)?;
            let r = fg_rank(&ws.graph, d, &caps)?;
            Ok(render(
                common.json,
                obj(vec![("rank", Value::from(r))]),
                format!("{r}\n"),
            ))
        }
    }
}
