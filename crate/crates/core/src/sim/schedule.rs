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

use serde::{Deserialize, Serialize};

use super::state::TokenState;
use crate::archgraph::ArchGraph;
use crate::error::{Error, Result};

/// Cost per primitive class; a timestep costs the maximum over its ops.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DepthModel {
    pub swap_edge: u64,
    pub swap_local: u64,
    pub tele_round: u64,
}

impl Default for DepthModel {
    fn default() -> Self {
        DepthModel { swap_edge: 1, swap_local: 0, tele_round: 1 }
    }
}

impl DepthModel {
    /// Local swaps and tele rounds priced at their gate-level cost.
    pub fn conservative() -> Self {
        DepthModel { swap_edge: 1, swap_local: 1, tele_round: 3 }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TransferKind {
    /// Source data token teleported to the destination data slot.
    Move,
    /// Both endpoint tokens exchanged along the path.
    Swap,
}

/// One teleportation along a simple path, source first.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Transfer {
    pub kind: TransferKind,
    pub path: Vec<usize>,
}

impl Transfer {
    pub fn moving(path: Vec<usize>) -> Self {
        Transfer { kind: TransferKind::Move, path }
    }

    pub fn swapping(path: Vec<usize>) -> Self {
        Transfer { kind: TransferKind::Swap, path }
    }

    pub fn source(&self) -> usize {
        self.path[0]
    }

    pub fn dest(&self) -> usize {
        *self.path.last().expect("nonempty path")
    }

    /// Bell halves per path vertex: endpoints 1, interior 2, doubled for swaps.
    pub fn loads(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        let mult = match self.kind {
            TransferKind::Move => 1,
            TransferKind::Swap => 2,
        };
        let last = self.path.len() - 1;
        self.path.iter().enumerate().map(move |(i, &v)| (v, if i == 0 || i == last { mult } else { 2 * mult }))
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct TeleRound {
    pub transfers: Vec<Transfer>,
}

/// Schedule primitive.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum Op {
    SwapEdge { u: usize, v: usize },
    SwapLocal { v: usize, s1: usize, s2: usize },
    TeleRound(TeleRound),
}

impl Op {
    pub fn cost(&self, m: &DepthModel) -> u64 {
        match self {
            Op::SwapEdge { .. } => m.swap_edge,
            Op::SwapLocal { .. } => m.swap_local,
            Op::TeleRound(_) => m.tele_round,
        }
    }

    fn canonical(self) -> Op {
        match self {
            Op::SwapEdge { u, v } => Op::SwapEdge { u: u.min(v), v: u.max(v) },
            Op::SwapLocal { v, s1, s2 } => Op::SwapLocal { v, s1: s1.min(s2), s2: s1.max(s2) },
            Op::TeleRound(mut r) => {
                r.transfers.sort();
                Op::TeleRound(r)
            }
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Timestep {
    pub ops: Vec<Op>,
}

impl Timestep {
    pub fn new(ops: Vec<Op>) -> Self {
        Timestep { ops }
    }

    pub fn is_empty(&self) -> bool {
        self.ops.is_empty()
    }

    pub fn cost(&self, m: &DepthModel) -> u64 {
        self.ops.iter().map(|o| o.cost(m)).max().unwrap_or(0)
    }
}

/// Timestep-wise union of two op lists acting on disjoint slots.
pub fn merge_parallel(into: &mut Vec<Timestep>, other: Vec<Timestep>) {
    for (i, ts) in other.into_iter().enumerate() {
        if i < into.len() {
            into[i].ops.extend(ts.ops);
        } else {
            into.push(ts);
        }
    }
}

/// Timesteps of edge swaps.
pub fn swap_layers(layers: Vec<Vec<(usize, usize)>>) -> Vec<Timestep> {
    layers
        .into_iter()
        .map(|l| Timestep::new(l.into_iter().map(|(u, v)| Op::SwapEdge { u, v }).collect()))
        .collect()
}

/// Sequence of timesteps plus the pricing used for depth.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Schedule {
    pub graph_ref: Option<String>,
    pub timesteps: Vec<Timestep>,
    #[serde(default)]
    pub depth_model: DepthModel,
}

impl Schedule {
    pub fn new(graph_ref: Option<String>) -> Self {
        Schedule { graph_ref, timesteps: Vec::new(), depth_model: DepthModel::default() }
    }

    /// Empty schedule bound to `g` by content hash.
    pub fn for_graph(g: &ArchGraph) -> Self {
        Schedule::new(Some(g.content_hash()))
    }

    pub fn with_timesteps(g: &ArchGraph, timesteps: Vec<Timestep>) -> Self {
        let mut s = Schedule::for_graph(g);
        s.timesteps = timesteps;
        s
    }

    pub fn push(&mut self, ts: Timestep) {
        self.timesteps.push(ts);
    }

    pub fn extend(&mut self, ts: impl IntoIterator<Item = Timestep>) {
        self.timesteps.extend(ts);
    }

    pub fn depth(&self) -> u64 {
        self.depth_with(&self.depth_model)
    }

    pub fn depth_with(&self, m: &DepthModel) -> u64 {
        self.timesteps.iter().map(|t| t.cost(m)).sum()
    }

    pub fn tele_rounds(&self) -> usize {
        self.ops().filter(|o| matches!(o, Op::TeleRound(_))).count()
    }

    pub fn edge_swaps(&self) -> usize {
        self.ops().filter(|o| matches!(o, Op::SwapEdge { .. })).count()
    }

    pub fn ops(&self) -> impl Iterator<Item = &Op> {
        self.timesteps.iter().flat_map(|t| t.ops.iter())
    }

    /// Drop empty timesteps.
    pub fn compact(&mut self) {
        self.timesteps.retain(|t| !t.is_empty());
    }

    /// Same schedule with ops in canonical order.
    pub fn canonical(&self) -> Schedule {
        let mut s = self.clone();
        for t in &mut s.timesteps {
            let mut ops: Vec<Op> = std::mem::take(&mut t.ops).into_iter().map(Op::canonical).collect();
            ops.sort();
            t.ops = ops;
        }
        s
    }

    /// Canonical JSON with sorted keys.
    pub fn to_json(&self) -> String {
        serde_json::to_value(self.canonical()).expect("schedule json").to_string()
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }
}

/// Outcome of a checked execution.
#[derive(Clone, Debug)]
pub struct Execution {
    pub final_state: TokenState,
    pub timesteps_checked: usize,
    /// Largest Bell-half load plus resident ancilla tokens seen at any vertex.
    pub max_bell_load: usize,
}

/// Execute `s` from `initial`, validating every primitive.
pub fn apply_schedule(g: &ArchGraph, initial: &TokenState, s: &Schedule) -> Result<TokenState> {
    execute(g, initial, s).map(|e| e.final_state)
}

pub fn execute(g: &ArchGraph, initial: &TokenState, s: &Schedule) -> Result<Execution> {
    if let Some(h) = &s.graph_ref {
        if *h != g.content_hash() {
            return Err(Error::InvalidSchedule { timestep: 0, op: 0, reason: "graph_ref does not match the graph".into() });
        }
    }
    if initial.n() != g.n() || initial.budget() != g.ancilla_budget() {
        return Err(Error::InvalidSchedule { timestep: 0, op: 0, reason: "state shape does not match the graph".into() });
    }
    let reference = initial.tokens();
    let mut state = initial.clone();
    let mut max_bell_load = 0;
    for (t, ts) in s.timesteps.iter().enumerate() {
        max_bell_load = max_bell_load.max(apply_timestep(g, &mut state, ts, t)?);
        if state.tokens() != reference {
            return Err(Error::InvalidSchedule { timestep: t, op: 0, reason: "token conservation violated".into() });
        }
    }
    Ok(Execution { final_state: state, timesteps_checked: s.timesteps.len(), max_bell_load })
}

/// Apply one timestep in place; returns the largest Bell load it used.
pub fn apply_timestep(g: &ArchGraph, state: &mut TokenState, ts: &Timestep, t: usize) -> Result<usize> {
    let n = g.n();
    let b = g.ancilla_budget();
    let k = b + 1;
    let mut touched = vec![false; n * k];
    let mut max_load = 0;
    let fail = |op: usize, reason: String| Error::InvalidSchedule { timestep: t, op, reason };
    let claim = |touched: &mut Vec<bool>, idx: usize, op: usize| -> Result<()> {
        if touched[idx] {
            return Err(fail(op, format!("slot ({}, {}) touched twice", idx / k, idx % k)));
        }
        touched[idx] = true;
        Ok(())
    };
    for (j, op) in ts.ops.iter().enumerate() {
        match op {
            &Op::SwapEdge { u, v } => {
                if u >= n || v >= n {
                    return Err(fail(j, format!("swap_edge({u}, {v}) references an unknown vertex")));
                }
                if !g.has_edge(u, v) {
                    return Err(fail(j, format!("swap_edge({u}, {v}) is not an edge")));
                }
                claim(&mut touched, u * k, j)?;
                claim(&mut touched, v * k, j)?;
                state.swap_slots((u, 0), (v, 0));
            }
            &Op::SwapLocal { v, s1, s2 } => {
                if v >= n {
                    return Err(fail(j, format!("swap_local at unknown vertex {v}")));
                }
                if s1 > b || s2 > b || s1 == s2 {
                    return Err(fail(j, format!("swap_local({v}, {s1}, {s2}) has invalid slots")));
                }
                claim(&mut touched, v * k + s1, j)?;
                claim(&mut touched, v * k + s2, j)?;
                state.swap_slots((v, s1), (v, s2));
            }
            Op::TeleRound(round) => {
                let used = check_round(g, state, round).map_err(|r| fail(j, r))?;
                for &v in &used.vertices {
                    for s in 0..k {
                        claim(&mut touched, v * k + s, j)?;
                    }
                }
                max_load = max_load.max(used.max_load);
                apply_round(state, round);
            }
        }
    }
    Ok(max_load)
}

struct RoundUse {
    vertices: Vec<usize>,
    max_load: usize,
}

fn check_round(g: &ArchGraph, state: &TokenState, round: &TeleRound) -> std::result::Result<RoundUse, String> {
    let n = g.n();
    let mut load = vec![0usize; n];
    let mut on_path = vec![false; n];
    let mut is_source = vec![false; n];
    let mut is_dest = vec![false; n];
    let mut swap_end = vec![false; n];
    let mut move_source = vec![false; n];
    for (i, tr) in round.transfers.iter().enumerate() {
        let p = &tr.path;
        if p.len() < 2 {
            return Err(format!("transfer {i} has a path with fewer than two vertices"));
        }
        if let Some(&v) = p.iter().find(|&&v| v >= n) {
            return Err(format!("transfer {i} references unknown vertex {v}"));
        }
        let mut seen = std::collections::HashSet::new();
        if !p.iter().all(|v| seen.insert(*v)) {
            return Err(format!("transfer {i} path repeats a vertex"));
        }
        if let Some(w) = p.windows(2).find(|w| !g.has_edge(w[0], w[1])) {
            return Err(format!("transfer {i} path step ({}, {}) is not an edge", w[0], w[1]));
        }
        for (v, l) in tr.loads() {
            load[v] += l;
            on_path[v] = true;
        }
        let (s, d) = (tr.source(), tr.dest());
        for (v, role) in [(s, &mut is_source), (d, &mut is_dest)] {
            if role[v] {
                return Err(format!("vertex {v} is an endpoint of two transfers"));
            }
            role[v] = true;
        }
        if tr.kind == TransferKind::Swap {
            swap_end[s] = true;
            swap_end[d] = true;
        } else {
            move_source[s] = true;
        }
    }
    for (i, tr) in round.transfers.iter().enumerate() {
        let (s, d) = (tr.source(), tr.dest());
        if state.data(s).is_none() {
            return Err(format!("transfer {i} source {s} holds no token"));
        }
        match tr.kind {
            TransferKind::Swap => {
                if state.data(d).is_none() {
                    return Err(format!("swap transfer {i} endpoint {d} holds no token"));
                }
                if is_source[d] || is_dest[s] {
                    return Err(format!("swap transfer {i} endpoints are shared with another transfer"));
                }
            }
            TransferKind::Move => {
                if swap_end[s] || swap_end[d] {
                    return Err(format!("transfer {i} shares an endpoint with a swap transfer"));
                }
                if state.data(d).is_some() && !move_source[d] {
                    return Err(format!("transfer {i} destination {d} is occupied by a non-source"));
                }
            }
        }
    }
    let mut max_load = 0;
    let mut vertices = Vec::new();
    for v in 0..n {
        if on_path[v] {
            let total = load[v] + state.ancilla_load(v);
            if total > g.ancilla_budget() {
                return Err(format!(
                    "vertex {v} needs {} Bell halves with {} resident ancilla tokens, budget {}",
                    load[v],
                    state.ancilla_load(v),
                    g.ancilla_budget()
                ));
            }
            max_load = max_load.max(total);
            vertices.push(v);
        }
    }
    Ok(RoundUse { vertices, max_load })
}

fn apply_round(state: &mut TokenState, round: &TeleRound) {
    let mut writes = Vec::new();
    for tr in &round.transfers {
        let (s, d) = (tr.source(), tr.dest());
        writes.push((d, state.data(s)));
        if tr.kind == TransferKind::Swap {
            writes.push((s, state.data(d)));
        }
    }
    for tr in &round.transfers {
        if tr.kind == TransferKind::Move {
            state.set(tr.source(), 0, None);
        }
    }
    for (v, tok) in writes {
        state.set(v, 0, tok);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::archgraph::{generate_graph, Family};
    use crate::sim::achieved_permutation;

    fn path(n: usize) -> ArchGraph {
        generate_graph(&Family::Path { n }).unwrap()
    }

    fn sched(g: &ArchGraph, ts: Vec<Vec<Op>>) -> Schedule {
        Schedule::with_timesteps(g, ts.into_iter().map(Timestep::new).collect())
    }

    #[test]
    fn empty_schedule_is_identity() {
        let g = path(4);
        let init = TokenState::initial(4, 6);
        let out = apply_schedule(&g, &init, &Schedule::for_graph(&g)).unwrap();
        assert_eq!(out, init);
    }

    #[test]
    fn depth_accounting() {
        let g = path(12);
        let seq = sched(&g, (0..3).map(|i| vec![Op::SwapEdge { u: i, v: i + 1 }]).collect());
        assert_eq!(seq.depth(), 3);
        let par = sched(&g, vec![(0..5).map(|i| Op::SwapEdge { u: 2 * i, v: 2 * i + 1 }).collect()]);
        assert_eq!(par.depth(), 1);
        let mut tele = sched(&g, vec![vec![Op::TeleRound(TeleRound { transfers: vec![Transfer::swapping(vec![0, 1, 2])] })]]);
        assert_eq!(tele.depth(), 1);
        tele.depth_model = DepthModel::conservative();
        assert_eq!(tele.depth(), 3);
        let local = sched(&g, vec![vec![Op::SwapLocal { v: 0, s1: 0, s2: 1 }]]);
        assert_eq!(local.depth(), 0);
        assert_eq!(local.depth_with(&DepthModel::conservative()), 1);
    }

    #[test]
    fn slot_touched_twice() {
        let g = path(3);
        let s = sched(&g, vec![vec![Op::SwapEdge { u: 0, v: 1 }, Op::SwapEdge { u: 1, v: 2 }]]);
        let err = apply_schedule(&g, &TokenState::initial(3, 6), &s).unwrap_err();
        assert!(matches!(err, Error::InvalidSchedule { timestep: 0, op: 1, .. }));
    }

    #[test]
    fn non_edge_rejected() {
        let g = path(3);
        let s = sched(&g, vec![vec![], vec![Op::SwapEdge { u: 0, v: 2 }]]);
        assert!(matches!(
            apply_schedule(&g, &TokenState::initial(3, 6), &s),
            Err(Error::InvalidSchedule { timestep: 1, op: 0, .. })
        ));
    }

    #[test]
    fn occupied_destination_rejected() {
        let g = path(3);
        let r = TeleRound { transfers: vec![Transfer::moving(vec![0, 1, 2])] };
        let s = sched(&g, vec![vec![Op::TeleRound(r)]]);
        let err = apply_schedule(&g, &TokenState::initial(3, 6), &s).unwrap_err();
        assert!(err.to_string().contains("occupied by a non-source"), "{err}");
    }

    #[test]
    fn tele_swap_round() {
        let g = path(7);
        let r = TeleRound { transfers: vec![Transfer::swapping((0..7).collect())] };
        let s = sched(&g, vec![vec![Op::TeleRound(r)]]);
        let init = TokenState::initial(7, 6);
        let ex = execute(&g, &init, &s).unwrap();
        assert_eq!(ex.max_bell_load, 4);
        let p = achieved_permutation(&init, &ex.final_state).unwrap();
        assert_eq!(p.image(), &[6, 1, 2, 3, 4, 5, 0]);
    }

    #[test]
    fn move_cycle_round() {
        let g = generate_graph(&Family::Complete { n: 3 }).unwrap();
        let r = TeleRound {
            transfers: vec![Transfer::moving(vec![0, 1]), Transfer::moving(vec![1, 2]), Transfer::moving(vec![2, 0])],
        };
        let init = TokenState::initial(3, 6);
        let out = apply_schedule(&g, &init, &sched(&g, vec![vec![Op::TeleRound(r)]])).unwrap();
        assert_eq!(achieved_permutation(&init, &out).unwrap().image(), &[1, 2, 0]);
    }

    #[test]
    fn budget_enforced() {
        let g = path(5).with_ancilla_budget(3);
        let r = TeleRound { transfers: vec![Transfer::swapping(vec![0, 1, 2])] };
        let err = apply_schedule(&g, &TokenState::initial(5, 3), &sched(&g, vec![vec![Op::TeleRound(r)]])).unwrap_err();
        assert!(err.to_string().contains("Bell halves"), "{err}");
    }

    #[test]
    fn graph_ref_checked() {
        let g = path(4);
        let other = path(5);
        let s = Schedule::for_graph(&other);
        assert!(apply_schedule(&g, &TokenState::initial(4, 6), &s).is_err());
    }

    #[test]
    fn json_is_canonical() {
        let g = path(4);
        let s = sched(&g, vec![vec![Op::SwapEdge { u: 3, v: 2 }, Op::SwapEdge { u: 1, v: 0 }]]);
        let text = s.to_json();
        assert!(text.contains("\"ops\":[{\"type\":\"swap_edge\",\"u\":0,\"v\":1},{\"type\":\"swap_edge\",\"u\":2,\"v\":3}]"), "{text}");
        assert!(text.starts_with("{\"depth_model\":{\"swap_edge\":1,\"swap_local\":0,\"tele_round\":1},\"graph_ref\":"));
        let back = Schedule::from_json(&text).unwrap();
        assert_eq!(back.to_json(), text);
    }
}
