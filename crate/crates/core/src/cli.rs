// Licensed under the Apache License, Version 2.0 (the "License"); you may
// not use this file except in compliance with the License. You may obtain
// a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS, WITHOUT
// WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied. See the
// License for the specific language governing permissions and limitations
// under the License.

//! Command-line driver. Machine output goes to stdout, tables to stderr.
//!
//! Exit codes: 0 success, 1 verification failure, 2 usage or input error.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde_json::Value;

use crate::archgraph::{generate_graph, generate_permutation, ArchGraph, Family, PermKind, Permutation};
use crate::bounds::{bounds_report, iso_lower_bound, vertex_expansion_bounds, BoundsReport};
use crate::error::{invalid, Error, Result};
use crate::sim::{achieved_permutation, execute, verify_schedule, DepthModel, Schedule, TokenState};
use crate::sparse_router::sparse_route;
use crate::swap_router::route_generic;
use crate::tele_router::{advantage_with, tele_schedule};

#[derive(Parser, Debug)]
#[command(name = "qroute", version, about = "Permutation routing under swap and teleportation models")]
pub struct Cli {
    /// JSON object whose keys mirror the long flags; explicit flags win.
    #[arg(long, global = true, value_name = "FILE")]
    pub config: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Generate a graph and print it as JSON or DOT.
    #[command(args_override_self = true)]
    Graph(GraphCmd),
    /// Expansion, diameter and advantage bounds for a graph.
    #[command(args_override_self = true)]
    Bounds(BoundsCmd),
    /// Synthesize and verify a schedule.
    #[command(args_override_self = true)]
    Route(RouteCmd),
    /// Sweep sizes and print swap/teleport depths as CSV.
    #[command(args_override_self = true)]
    Advantage(AdvantageCmd),
    /// Check a schedule file against a graph and a permutation.
    #[command(args_override_self = true)]
    Verify(VerifyCmd),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum FamilyName {
    Path,
    Wheel,
    Ladder,
    Hypercube,
    Butterfly,
    Complete,
    Grid,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum PermName {
    Identity,
    Diam,
    Rainbow,
    Wheel,
    Reflection,
    Shift,
    Random,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Model {
    Swap,
    Sparse,
    Teleport,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum DepthModelName {
    /// Local swaps free, one teleport round costs 1.
    Default,
    /// Local swaps cost 1, one teleport round costs 3.
    Conservative,
}

impl DepthModelName {
    fn model(self) -> DepthModel {
        match self {
            DepthModelName::Default => DepthModel::default(),
            DepthModelName::Conservative => DepthModel::conservative(),
        }
    }
}

#[derive(Args, Clone, Debug, Default)]
pub struct GraphArgs {
    #[arg(long, value_enum)]
    pub family: Option<FamilyName>,
    /// Size: vertices for path/complete/wheel (W_N), layers for ladder, side for grid.
    #[arg(long)]
    pub n: Option<usize>,
    /// Dimension for hypercube and grid (grid default 2).
    #[arg(long)]
    pub d: Option<usize>,
    /// Levels of a butterfly.
    #[arg(long)]
    pub r: Option<usize>,
    /// Read the graph from a JSON file instead.
    #[arg(long, value_name = "FILE", conflicts_with = "family")]
    pub graph: Option<PathBuf>,
    /// Ancilla slots per vertex.
    #[arg(long)]
    pub budget: Option<usize>,
}

#[derive(Args, Clone, Debug, Default)]
pub struct PermArgs {
    #[arg(long, value_enum)]
    pub perm: Option<PermName>,
    #[arg(long)]
    pub alpha: Option<f64>,
    #[arg(long)]
    pub l: Option<usize>,
    #[arg(long)]
    pub shift: Option<usize>,
    /// Number of moved vertices for random permutations.
    #[arg(long)]
    pub k: Option<usize>,
    /// Required for random permutations.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Read the permutation from a JSON file instead.
    #[arg(long, value_name = "FILE", conflicts_with = "perm")]
    pub perm_file: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct GraphCmd {
    #[command(flatten)]
    pub graph: GraphArgs,
    #[arg(long)]
    pub dot: bool,
    #[arg(long, value_name = "FILE")]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct BoundsCmd {
    #[command(flatten)]
    pub graph: GraphArgs,
    /// Skip exhaustive expansion; report bounds only.
    #[arg(long)]
    pub no_exact: bool,
}

#[derive(Args, Debug)]
pub struct RouteCmd {
    #[command(flatten)]
    pub graph: GraphArgs,
    #[command(flatten)]
    pub perm: PermArgs,
    #[arg(long, value_enum, default_value = "swap")]
    pub model: Model,
    #[arg(long, value_enum, default_value = "default")]
    pub depth_model: DepthModelName,
    /// Schedule JSON destination (default stdout).
    #[arg(long, value_name = "FILE")]
    pub out: Option<PathBuf>,
    #[arg(long, value_name = "FILE")]
    pub graph_out: Option<PathBuf>,
    #[arg(long, value_name = "FILE")]
    pub perm_out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct AdvantageCmd {
    #[command(flatten)]
    pub graph: GraphArgs,
    #[command(flatten)]
    pub perm: PermArgs,
    /// Values of the family's size parameter (comma separated).
    #[arg(long, value_delimiter = ',', required = true)]
    pub sizes: Vec<usize>,
    /// Random permutations per size, seeded seed, seed+1, ...
    #[arg(long, default_value_t = 1)]
    pub trials: u64,
    #[arg(long, value_enum, default_value = "default")]
    pub depth_model: DepthModelName,
    /// Never run exhaustive expansion.
    #[arg(long)]
    pub no_exact: bool,
    #[arg(long, value_name = "FILE")]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct VerifyCmd {
    #[arg(long, value_name = "FILE")]
    pub schedule: PathBuf,
    #[arg(long, value_name = "FILE")]
    pub graph: PathBuf,
    #[arg(long, value_name = "FILE")]
    pub perm: PathBuf,
}

/// Exit code for an error.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Verification(_) | Error::InvalidSchedule { .. } | Error::Blocked(_) => 1,
        _ => 2,
    }
}

fn family_of(a: &GraphArgs, name: FamilyName, size: Option<usize>) -> Result<Family> {
    let need = |v: Option<usize>, flag: &str| v.ok_or_else(|| Error::InvalidParameter(format!("--{flag} is required")));
    Ok(match name {
        FamilyName::Path => Family::Path { n: need(size.or(a.n), "n")? },
        FamilyName::Complete => Family::Complete { n: need(size.or(a.n), "n")? },
        FamilyName::Ladder => Family::Ladder { n: need(size.or(a.n), "n")? },
        FamilyName::Wheel => {
            let n = need(size.or(a.n), "n")?;
            if n < 4 {
                return invalid("a wheel needs at least 4 vertices");
            }
            Family::Wheel { rim: n - 1 }
        }
        FamilyName::Hypercube => Family::Hypercube { d: need(size.or(a.d), "d")? },
        FamilyName::Butterfly => Family::Butterfly { r: need(size.or(a.r), "r")? },
        FamilyName::Grid => Family::Grid { n: need(size.or(a.n), "n")?, d: a.d.unwrap_or(2) },
    })
}

fn build_graph(a: &GraphArgs, size: Option<usize>) -> Result<ArchGraph> {
    let g = if let Some(p) = &a.graph {
        ArchGraph::from_json(&fs::read_to_string(p)?)?
    } else {
        let name = a.family.ok_or_else(|| Error::InvalidParameter("--family or --graph is required".into()))?;
        generate_graph(&family_of(a, name, size)?)?
    };
    Ok(match a.budget {
        Some(b) => g.with_ancilla_budget(b),
        None => g,
    })
}

fn perm_kind(a: &PermArgs, trial: u64) -> Result<PermKind> {
    let need = |v: Option<usize>, flag: &str| v.ok_or_else(|| Error::InvalidParameter(format!("--{flag} is required")));
    Ok(match a.perm.unwrap_or(PermName::Identity) {
        PermName::Identity => PermKind::Identity,
        PermName::Diam => PermKind::Diam,
        PermName::Reflection => PermKind::Reflection,
        PermName::Rainbow => PermKind::Rainbow {
            alpha: a.alpha.ok_or_else(|| Error::InvalidParameter("--alpha is required".into()))?,
        },
        PermName::Wheel => PermKind::Wheel { l: need(a.l, "l")? },
        PermName::Shift => PermKind::CyclicShift { s: need(a.shift, "shift")? },
        PermName::Random => PermKind::Random {
            seed: a
                .seed
                .ok_or_else(|| Error::InvalidParameter("--seed is required for random permutations".into()))?
                + trial,
            k: a.k,
        },
    })
}

fn perm_label(k: &PermKind) -> String {
    match k {
        PermKind::Identity => "identity".into(),
        PermKind::Diam => "diam".into(),
        PermKind::Reflection => "reflection".into(),
        PermKind::Rainbow { alpha } => format!("rainbow:{alpha}"),
        PermKind::Wheel { l } => format!("wheel:{l}"),
        PermKind::CyclicShift { s } => format!("shift:{s}"),
        PermKind::Random { seed, k: None } => format!("random:{seed}"),
        PermKind::Random { seed, k: Some(k) } => format!("random:{seed}:k{k}"),
    }
}

fn build_perm(a: &PermArgs, g: &ArchGraph) -> Result<Permutation> {
    if let Some(p) = &a.perm_file {
        let perm = Permutation::from_json(&fs::read_to_string(p)?)?;
        if perm.len() != g.n() {
            return invalid("permutation file does not match the graph size");
        }
        return Ok(perm);
    }
    generate_permutation(&perm_kind(a, 0)?, g)
}

fn emit(out: &mut dyn Write, path: Option<&Path>, text: &str) -> Result<()> {
    match path {
        Some(p) => fs::write(p, text)?,
        None => writeln!(out, "{text}")?,
    }
    Ok(())
}

fn cmd_graph(c: &GraphCmd, out: &mut dyn Write, err: &mut dyn Write) -> Result<()> {
    let g = build_graph(&c.graph, None)?;
    let text = if c.dot { g.to_dot() } else { g.to_json_pretty() };
    emit(out, c.out.as_deref(), text.trim_end())?;
    writeln!(err, "vertices {}  edges {}  budget {}", g.n(), g.num_edges(), g.ancilla_budget())?;
    Ok(())
}

fn bounds_table(r: &BoundsReport, err: &mut dyn Write) -> Result<()> {
    let c = &r.c;
    let cval = if c.exact {
        format!("{} (exact)", c.upper)
    } else {
        format!("[{}, {}] ({})", c.lower, c.upper, c.witness_kind)
    };
    writeln!(err, "{:<20} {}", "N", r.n)?;
    writeln!(err, "{:<20} {}", "c(G)", cval)?;
    writeln!(err, "{:<20} {}", "diam", r.diam)?;
    writeln!(err, "{:<20} {}", "iso lower bound", r.iso_lb)?;
    writeln!(err, "{:<20} {:.6}", "diam-expansion rhs", r.diam_expansion_rhs)?;
    if let Some(l) = r.lambda2 {
        writeln!(err, "{:<20} {:.6}", "lambda2", l)?;
    }
    writeln!(err, "{:<20} {:.6}", "advantage figure", r.advantage.min)?;
    Ok(())
}

fn cmd_bounds(c: &BoundsCmd, out: &mut dyn Write, err: &mut dyn Write) -> Result<()> {
    let g = build_graph(&c.graph, None)?;
    let r = bounds_report(&g, !c.no_exact)?;
    writeln!(out, "{}", serde_json::to_string_pretty(&r)?)?;
    bounds_table(&r, err)
}

fn cmd_route(c: &RouteCmd, out: &mut dyn Write, err: &mut dyn Write) -> Result<()> {
    let g = build_graph(&c.graph, None)?;
    let perm = build_perm(&c.perm, &g)?;
    let mut s: Schedule = match c.model {
        Model::Swap => route_generic(&g, &perm)?,
        Model::Sparse => sparse_route(&g, &perm)?,
        Model::Teleport => tele_schedule(&g, &perm)?,
    };
    s.depth_model = c.depth_model.model();
    let ex = verify_schedule(&g, &s, &perm)?;
    if let Some(p) = &c.graph_out {
        fs::write(p, g.to_json_pretty())?;
    }
    if let Some(p) = &c.perm_out {
        fs::write(p, perm.to_json())?;
    }
    emit(out, c.out.as_deref(), &s.to_json())?;
    writeln!(err, "{:<12} {:?}", "model", c.model)?;
    writeln!(err, "{:<12} {}", "depth", s.depth())?;
    writeln!(err, "{:<12} {}", "timesteps", s.timesteps.len())?;
    writeln!(err, "{:<12} {}", "tele rounds", s.tele_rounds())?;
    writeln!(err, "{:<12} {}", "max load", ex.max_bell_load)?;
    writeln!(err, "{:<12} verified", "status")?;
    Ok(())
}

pub const ADVANTAGE_HEADER: &str = "N,family,perm,swap_depth,tele_rounds,ratio,iso_lb,diam";

fn advantage_row(c: &AdvantageCmd, size: usize, trial: u64) -> Result<String> {
    let g = build_graph(&c.graph, Some(size))?;
    let kind = perm_kind(&c.perm, trial)?;
    let perm = generate_permutation(&kind, &g)?;
    let a = advantage_with(&g, &perm, &c.depth_model.model())?;
    let exhaustive = !c.no_exact && g.n() <= 20;
    let cb = vertex_expansion_bounds(&g, exhaustive)?;
    let iso = iso_lower_bound(cb.upper)?;
    let family = g.family().map(|f| f.name()).unwrap_or("custom");
    Ok(format!(
        "{},{},{},{},{},{:.6},{},{}",
        g.n(),
        family,
        perm_label(&kind),
        a.swap_depth,
        a.tele_rounds,
        a.ratio_f64,
        iso,
        g.diameter()?
    ))
}

fn cmd_advantage(c: &AdvantageCmd, out: &mut dyn Write, err: &mut dyn Write) -> Result<()> {
    let trials = if c.perm.perm == Some(PermName::Random) { c.trials.max(1) } else { 1 };
    let cells: Vec<(usize, u64)> = c.sizes.iter().flat_map(|&s| (0..trials).map(move |t| (s, t))).collect();
    let rows: Vec<Result<String>> = cells.par_iter().map(|&(s, t)| advantage_row(c, s, t)).collect();
    let mut text = String::from(ADVANTAGE_HEADER);
    for r in rows {
        text.push('\n');
        text.push_str(&r?);
    }
    emit(out, c.out.as_deref(), &text)?;
    writeln!(err, "{} rows", cells.len())?;
    Ok(())
}

fn cmd_verify(c: &VerifyCmd, out: &mut dyn Write, err: &mut dyn Write) -> Result<()> {
    let g = ArchGraph::from_json(&fs::read_to_string(&c.graph)?)?;
    let perm = Permutation::from_json(&fs::read_to_string(&c.perm)?)?;
    let s = Schedule::from_json(&fs::read_to_string(&c.schedule)?)?;
    if perm.len() != g.n() {
        return invalid("permutation does not match the graph size");
    }
    let init = TokenState::initial(g.n(), g.ancilla_budget());
    let ex = execute(&g, &init, &s)?;
    let got = achieved_permutation(&init, &ex.final_state)?;
    if got != perm {
        let diff: Vec<String> = (0..g.n())
            .filter(|&v| got.apply(v) != perm.apply(v))
            .take(8)
            .map(|v| format!("{v}: expected {} got {}", perm.apply(v), got.apply(v)))
            .collect();
        return Err(Error::Verification(format!("realised permutation differs ({})", diff.join("; "))));
    }
    writeln!(out, "ok")?;
    writeln!(err, "{} timesteps, depth {}, max load {}", ex.timesteps_checked, s.depth(), ex.max_bell_load)?;
    Ok(())
}

/// Splice `--config FILE` contents into the argument list right after the
/// subcommand, so later explicit flags override them.
fn expand_config(args: Vec<String>) -> Result<Vec<String>> {
    let mut rest = Vec::with_capacity(args.len());
    let mut config = None;
    let mut it = args.into_iter();
    while let Some(a) = it.next() {
        if a == "--config" {
            config = Some(it.next().ok_or_else(|| Error::InvalidParameter("--config needs a file".into()))?);
        } else if let Some(p) = a.strip_prefix("--config=") {
            config = Some(p.to_string());
        } else {
            rest.push(a);
        }
    }
    let Some(path) = config else { return Ok(rest) };
    let value: Value = serde_json::from_str(&fs::read_to_string(&path)?)?;
    let Value::Object(map) = value else { return invalid("config must be a JSON object") };
    let mut flags = Vec::new();
    for (k, v) in map {
        let flag = format!("--{}", k.replace('_', "-"));
        match v {
            Value::Bool(true) => flags.push(flag),
            Value::Bool(false) | Value::Null => {}
            Value::String(s) => flags.extend([flag, s]),
            Value::Number(x) => flags.extend([flag, x.to_string()]),
            Value::Array(xs) => {
                let parts: Vec<String> = xs
                    .iter()
                    .map(|x| match x {
                        Value::String(s) => s.clone(),
                        other => other.to_string(),
                    })
                    .collect();
                flags.extend([flag, parts.join(",")]);
            }
            Value::Object(_) => return invalid(format!("config key {k} must not be an object")),
        }
    }
    let at = rest.iter().skip(1).position(|a| !a.starts_with('-')).map(|p| p + 2).unwrap_or(rest.len());
    rest.splice(at..at, flags);
    Ok(rest)
}

/// Parse `args` (program name first), run, and return the exit code.
pub fn run(args: Vec<String>, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let args = match expand_config(args) {
        Ok(a) => a,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            return exit_code(&e);
        }
    };
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{text}");
                    0
                }
                _ => {
                    let _ = write!(err, "{text}");
                    2
                }
            };
        }
    };
    let result = match &cli.command {
        Command::Graph(c) => cmd_graph(c, out, err),
        Command::Bounds(c) => cmd_bounds(c, out, err),
        Command::Route(c) => cmd_route(c, out, err),
        Command::Advantage(c) => cmd_advantage(c, out, err),
        Command::Verify(c) => cmd_verify(c, out, err),
    };
    match result {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            exit_code(&e)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn call(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let mut v = vec!["qroute".to_string()];
        v.extend(args.iter().map(|s| s.to_string()));
        let code = run(v, &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn graph_ladder_json() {
        let (code, out, _) = call(&["graph", "--family", "ladder", "--n", "4"]);
        assert_eq!(code, 0);
        assert_eq!(ArchGraph::from_json(&out).unwrap().n(), 15);
    }

    #[test]
    fn usage_errors_exit_two() {
        assert_eq!(call(&["graph", "--family", "path"]).0, 2);
        assert_eq!(call(&["graph", "--family", "nosuch", "--n", "3"]).0, 2);
        assert_eq!(call(&["route", "--family", "path", "--n", "5", "--perm", "random"]).0, 2);
        assert_eq!(call(&["bounds", "--family", "path", "--n", "30"]).0, 2);
    }

    #[test]
    fn route_identity_depth_zero() {
        let (code, out, err) = call(&["route", "--family", "path", "--n", "5", "--model", "swap", "--perm", "identity"]);
        assert_eq!(code, 0, "{err}");
        assert_eq!(Schedule::from_json(&out).unwrap().depth(), 0);
    }

    #[test]
    fn config_file_is_spliced() {
        let dir = std::env::temp_dir().join(format!("qroute-cli-{}", std::process::id()));
        fs::create_dir_all(&dir).unwrap();
        let cfg = dir.join("cfg.json");
        fs::write(&cfg, r#"{"family": "path", "n": 6, "dot": true}"#).unwrap();
        let (code, out, _) = call(&["graph", "--config", cfg.to_str().unwrap()]);
        assert_eq!(code, 0);
        assert!(out.starts_with("graph"));
        let (code, out, _) = call(&["graph", "--config", cfg.to_str().unwrap(), "--n", "3"]);
        assert_eq!(code, 0);
        assert_eq!(out.matches("--").count(), 2);
        fs::remove_dir_all(&dir).unwrap();
    }
}
