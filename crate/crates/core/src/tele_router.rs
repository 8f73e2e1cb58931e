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

//! Teleportation rounds: ladder canonical paths, greedy Bell-budgeted
//! packing, swap simulation of a round, and the swap/teleport depth ratio.

use std::collections::VecDeque;

use serde::Serialize;

use crate::archgraph::{generate_permutation, ArchGraph, Family, PermKind, Permutation};
use crate::bounds::Rational;
use crate::error::{invalid, Error, Result};
use crate::sim::{
    achieved_permutation, apply_timestep, execute, DepthModel, Op, Schedule, TeleRound, Timestep, Token, TokenState,
    Transfer, TransferKind,
};
use crate::sparse_router::{sparse_route, sparse_route_state};
use crate::swap_router::{route_generic, route_wheel};

fn ladder_n(g: &ArchGraph) -> Result<usize> {
    match g.family() {
        Some(&Family::Ladder { n }) => Ok(n),
        _ => Err(Error::WrongFamily("ladder graph required".into())),
    }
}

fn bit_len(a: usize) -> usize {
    (usize::BITS - a.leading_zeros()) as usize
}

/// Address of r(u, i): binary `1 0^{i-1}` followed by the bits of `u`.
pub fn relay_address(u: usize, i: usize) -> usize {
    (1usize << (bit_len(u) + i - 1)) | u
}

/// Canonical path between ladder addresses `u` and `v` (1-based binary
/// addresses), starting at `u`.
pub fn canonical_path_addresses(n: usize, u: usize, v: usize) -> Result<Vec<usize>> {
    let max = (1usize << n) - 1;
    for a in [u, v] {
        if a == 0 || a > max {
            return invalid(format!("address {a} outside [1, {max}]"));
        }
    }
    if u == v {
        return invalid("canonical path needs distinct endpoints");
    }
    let (lo, hi) = if bit_len(u) <= bit_len(v) { (u, v) } else { (v, u) };
    let d = bit_len(hi) - bit_len(lo);
    let mut path = vec![lo];
    path.extend((1..d).map(|i| relay_address(lo, i)));
    path.push(hi);
    if lo != u {
        path.reverse();
    }
    Ok(path)
}

/// Canonical path between vertices of L(n), as vertex indices.
pub fn canonical_path(g: &ArchGraph, u: usize, v: usize) -> Result<Vec<usize>> {
    let n = ladder_n(g)?;
    g.check_vertex(u)?;
    g.check_vertex(v)?;
    Ok(canonical_path_addresses(n, u + 1, v + 1)?.into_iter().map(|a| a - 1).collect())
}

/// One-round ladder routing with its congestion figures.
#[derive(Clone, Debug)]
pub struct LadderRound {
    pub schedule: Schedule,
    pub max_incidence: usize,
    pub max_load: usize,
}

pub const LADDER_BUDGET: usize = 6;

/// All canonical paths P(u, π(u)) in a single round.
pub fn ladder_schedule(g: &ArchGraph, perm: &Permutation) -> Result<LadderRound> {
    ladder_n(g)?;
    if perm.len() != g.n() {
        return invalid("permutation size does not match the graph");
    }
    if g.ancilla_budget() < LADDER_BUDGET {
        return Err(Error::InsufficientBudget {
            required: LADDER_BUDGET,
            actual: g.ancilla_budget(),
            context: "the ladder protocol uses 6 local ancillas per vertex".into(),
        });
    }
    let mut transfers = Vec::new();
    for u in perm.support() {
        transfers.push(Transfer::moving(canonical_path(g, u, perm.apply(u))?));
    }
    let mut incidence = vec![0usize; g.n()];
    let mut load = vec![0usize; g.n()];
    for t in &transfers {
        for (v, l) in t.loads() {
            incidence[v] += 1;
            load[v] += l;
        }
    }
    let max_incidence = incidence.into_iter().max().unwrap_or(0);
    let max_load = load.into_iter().max().unwrap_or(0);
    if max_incidence > 4 || max_load > LADDER_BUDGET {
        return Err(Error::Verification(format!(
            "ladder round exceeds its congestion bound: incidence {max_incidence}, load {max_load}"
        )));
    }
    let mut schedule = Schedule::for_graph(g);
    if !transfers.is_empty() {
        schedule.push(Timestep::new(vec![Op::TeleRound(TeleRound { transfers })]));
    }
    Ok(LadderRound { schedule, max_incidence, max_load })
}

/// Shortest path from `src` to `dst` whose interior vertices have at least 2
/// spare Bell slots and whose endpoints have at least 1.
fn capacity_path(g: &ArchGraph, src: usize, dst: usize, spare: &[usize]) -> Option<Vec<usize>> {
    if spare[src] < 1 || spare[dst] < 1 {
        return None;
    }
    let mut prev = vec![usize::MAX; g.n()];
    prev[src] = src;
    let mut queue = VecDeque::from([src]);
    while let Some(u) = queue.pop_front() {
        for &w in g.neighbors(u) {
            if prev[w] != usize::MAX {
                continue;
            }
            if w == dst {
                let mut path = vec![dst, u];
                let mut c = u;
                while c != src {
                    c = prev[c];
                    path.push(c);
                }
                path.reverse();
                return Some(path);
            }
            if spare[w] >= 2 {
                prev[w] = u;
                queue.push_back(w);
            }
        }
    }
    None
}

struct RoundBuilder {
    spare: Vec<usize>,
    transfers: Vec<Transfer>,
}

impl RoundBuilder {
    fn try_add(&mut self, g: &ArchGraph, src: usize, dst: usize) -> bool {
        match capacity_path(g, src, dst, &self.spare) {
            Some(p) => {
                let t = Transfer::moving(p);
                for (v, l) in t.loads() {
                    self.spare[v] -= l;
                }
                self.transfers.push(t);
                true
            }
            None => false,
        }
    }

    fn rollback(&mut self, to: usize) {
        for t in self.transfers.drain(to..) {
            for (v, l) in t.loads() {
                self.spare[v] += l;
            }
        }
    }
}

/// Vertex of `cycle` whose removal leaves the other cycle vertices connected.
fn parking_vertex(g: &ArchGraph, cycle: &[usize]) -> usize {
    let mut sorted = cycle.to_vec();
    sorted.sort_unstable();
    for &b in &sorted {
        let start = *sorted.iter().find(|&&v| v != b).expect("cycle has two vertices");
        let mut seen = vec![false; g.n()];
        seen[b] = true;
        seen[start] = true;
        let mut queue = VecDeque::from([start]);
        while let Some(u) = queue.pop_front() {
            for &w in g.neighbors(u) {
                if !seen[w] {
                    seen[w] = true;
                    queue.push_back(w);
                }
            }
        }
        if sorted.iter().all(|&v| seen[v]) {
            return b;
        }
    }
    sorted[0]
}

/// Multi-round teleportation schedule using at most `budget` Bell halves per
/// vertex. Whole cycles are packed longest-first; a cycle that cannot fit an
/// empty round is opened by parking one token in an ancilla.
pub fn greedy_schedule(g: &ArchGraph, perm: &Permutation, budget: usize) -> Result<Schedule> {
    if perm.len() != g.n() {
        return invalid("permutation size does not match the graph");
    }
    if budget < 2 || budget > g.ancilla_budget() {
        return Err(Error::InsufficientBudget {
            required: 2,
            actual: budget.min(g.ancilla_budget()),
            context: format!(
                "a transfer needs 2 Bell halves at interior vertices; budget must lie in [2, {}]",
                g.ancilla_budget()
            ),
        });
    }
    let n = g.n();
    let dm = g.distance_matrix();
    let mut cur: Vec<Option<usize>> = (0..n).map(Some).collect();
    let mut parked: Option<(usize, usize, usize)> = None;
    let mut timesteps = Vec::new();
    let target = |t: usize| perm.apply(t);
    loop {
        let pending: Vec<usize> = (0..n).filter(|&v| cur[v].is_some_and(|t| target(t) != v)).collect();
        if pending.is_empty() && parked.is_none() {
            break;
        }
        let mut b = RoundBuilder { spare: vec![budget; n], transfers: Vec::new() };
        let mut release = None;
        if let Some((pv, slot, tok)) = parked {
            b.spare[pv] -= 1;
            let d = target(tok);
            if cur[d].is_none() && b.try_add(g, pv, d) {
                release = Some((pv, slot, tok, d));
                b.spare[pv] = 0;
            }
        }
        // chains end at a null data slot; pack them from the null end
        let mut holder = vec![usize::MAX; n];
        for &v in &pending {
            holder[target(cur[v].expect("pending is occupied"))] = v;
        }
        let mut in_chain = vec![false; n];
        for z in (0..n).filter(|&z| cur[z].is_none()) {
            let mut to = z;
            let mut open = true;
            while holder[to] != usize::MAX {
                let from = holder[to];
                in_chain[from] = true;
                if open && !b.try_add(g, from, to) {
                    open = false;
                }
                to = from;
            }
        }
        let mut cycles: Vec<Vec<usize>> = Vec::new();
        let mut seen = in_chain.clone();
        for &v in &pending {
            if seen[v] {
                continue;
            }
            let mut cyc = vec![v];
            seen[v] = true;
            let mut u = target(cur[v].expect("occupied"));
            while u != v {
                seen[u] = true;
                cyc.push(u);
                u = target(cur[u].expect("cycle vertices are occupied"));
            }
            cycles.push(cyc);
        }
        let longest = |c: &Vec<usize>| {
            c.iter().map(|&v| dm[v][target(cur[v].expect("occupied"))]).max().unwrap_or(0)
        };
        cycles.sort_by_key(|c| (std::cmp::Reverse(longest(c)), *c.iter().min().expect("nonempty")));
        for cyc in &cycles {
            let mut hops: Vec<(usize, usize)> = cyc.iter().map(|&v| (v, target(cur[v].expect("occupied")))).collect();
            hops.sort_by_key(|&(s, d)| (std::cmp::Reverse(dm[s][d]), s));
            let mark = b.transfers.len();
            if !hops.iter().all(|&(s, d)| b.try_add(g, s, d)) {
                b.rollback(mark);
            }
        }
        if b.transfers.is_empty() {
            if parked.is_some() || cycles.is_empty() {
                return Err(Error::Verification("teleportation scheduling made no progress".into()));
            }
            let pv = parking_vertex(g, &cycles[0]);
            let slot = 1;
            timesteps.push(Timestep::new(vec![Op::SwapLocal { v: pv, s1: 0, s2: slot }]));
            parked = Some((pv, slot, cur[pv].take().expect("cycle vertex occupied")));
            continue;
        }
        let mut next = cur.clone();
        for t in &b.transfers {
            if release.is_some_and(|(pv, ..)| pv == t.source()) {
                continue;
            }
            next[t.source()] = None;
        }
        for t in &b.transfers {
            if release.is_some_and(|(pv, ..)| pv == t.source()) {
                continue;
            }
            next[t.dest()] = cur[t.source()];
        }
        let round = Timestep::new(vec![Op::TeleRound(TeleRound { transfers: b.transfers })]);
        if let Some((pv, slot, tok, d)) = release {
            let local = Timestep::new(vec![Op::SwapLocal { v: pv, s1: 0, s2: slot }]);
            timesteps.push(local.clone());
            timesteps.push(round);
            timesteps.push(local);
            next[d] = Some(tok);
            parked = None;
        } else {
            timesteps.push(round);
        }
        cur = next;
    }
    let schedule = Schedule::with_timesteps(g, timesteps);
    let init = TokenState::initial(n, g.ancilla_budget());
    let fin = execute(g, &init, &schedule)?.final_state;
    if achieved_permutation(&init, &fin)? != *perm {
        return Err(Error::Verification("greedy schedule realises a different permutation".into()));
    }
    Ok(schedule)
}

/// How a teleportation round was turned into swaps.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SimStrategy {
    /// Short transfers stored and forwarded along their paths, long ones
    /// handed to the sparse router.
    Split,
    /// Every transfer stored and forwarded along its path.
    StoreForward,
    /// Generic swap routing of the round's permutation.
    Generic,
}

#[derive(Clone, Debug)]
pub struct SwapSimulation {
    pub schedule: Schedule,
    pub strategy: SimStrategy,
    pub permutation: Permutation,
    pub threshold: usize,
    pub short_transfers: usize,
    pub long_transfers: usize,
    pub split_depth: Option<u64>,
    pub store_forward_depth: Option<u64>,
    pub generic_depth: u64,
}

struct Job {
    token: Token,
    path: Vec<usize>,
    pos: usize,
}

impl Job {
    fn done(&self) -> bool {
        self.pos + 1 == self.path.len()
    }
    fn at(&self) -> usize {
        self.path[self.pos]
    }
    fn next(&self) -> usize {
        self.path[self.pos + 1]
    }
}

fn apply_all(g: &ArchGraph, state: &mut TokenState, ts: &[Timestep]) -> Result<()> {
    for (t, step) in ts.iter().enumerate() {
        apply_timestep(g, state, step, t)?;
    }
    Ok(())
}

/// Move ancilla-stored tokens hop by hop along their paths; data slots stay
/// null between macro-steps.
fn store_forward(g: &ArchGraph, state: &mut TokenState, mut jobs: Vec<Job>) -> Result<Vec<Timestep>> {
    let mut out = Vec::new();
    loop {
        let mut order: Vec<usize> = (0..jobs.len()).filter(|&j| !jobs[j].done()).collect();
        if order.is_empty() {
            return Ok(out);
        }
        order.sort_by_key(|&j| (std::cmp::Reverse(jobs[j].path.len() - jobs[j].pos), j));
        let mut busy = vec![false; g.n()];
        let mut chosen: Vec<usize> = Vec::new();
        let mut edges: Vec<(usize, usize)> = Vec::new();
        for &j in &order {
            let (u, w) = (jobs[j].at(), jobs[j].next());
            if busy[u] || busy[w] {
                continue;
            }
            let partner = order.iter().copied().find(|&o| o != j && jobs[o].at() == w && jobs[o].next() == u);
            if let Some(o) = partner {
                chosen.extend([j, o]);
            } else if state.free_ancilla(w).is_some() {
                chosen.push(j);
            } else {
                continue;
            }
            busy[u] = true;
            busy[w] = true;
            edges.push((u, w));
        }
        if chosen.is_empty() {
            return Err(Error::Blocked("store-and-forward has no movable token".into()));
        }
        let mut fetch = Timestep::default();
        for &j in &chosen {
            let (v, s) = state.locate(jobs[j].token).expect("token present");
            fetch.ops.push(Op::SwapLocal { v, s1: 0, s2: s });
        }
        let hop = Timestep::new(edges.iter().map(|&(u, v)| Op::SwapEdge { u, v }).collect());
        apply_all(g, state, &[fetch.clone(), hop.clone()])?;
        let mut store = Timestep::default();
        for &j in &chosen {
            let w = jobs[j].next();
            let s = state.free_ancilla(w).expect("slot checked or vacated");
            store.ops.push(Op::SwapLocal { v: w, s1: 0, s2: s });
            jobs[j].pos += 1;
        }
        apply_all(g, state, std::slice::from_ref(&store))?;
        out.extend([fetch, hop, store]);
    }
}

/// Put each vertex's token back in its data slot.
fn unload(g: &ArchGraph, state: &mut TokenState) -> Result<Timestep> {
    let mut ts = Timestep::default();
    for v in 0..g.n() {
        if state.data(v).is_none() {
            if let Some(s) = (1..=state.budget()).find(|&s| state.get(v, s).is_some()) {
                ts.ops.push(Op::SwapLocal { v, s1: 0, s2: s });
            }
        }
    }
    apply_all(g, state, std::slice::from_ref(&ts))?;
    if !state.ancillas_clear() {
        return Err(Error::Verification("tokens left in ancillas after simulation".into()));
    }
    Ok(ts)
}

/// Swap-only realisation of a round: transfers with at most `threshold` hops
/// go store-and-forward, the rest through the sparse router.
fn simulate_split(g: &ArchGraph, round: &TeleRound, threshold: usize) -> Result<Vec<Timestep>> {
    let n = g.n();
    let mut state = TokenState::initial(n, g.ancilla_budget());
    let hide = Timestep::new((0..n).map(|v| Op::SwapLocal { v, s1: 0, s2: 1 }).collect());
    apply_all(g, &mut state, std::slice::from_ref(&hide))?;
    let mut out = vec![hide];
    let mut short = Vec::new();
    let mut long = Vec::new();
    for t in &round.transfers {
        let mut legs = vec![t.path.clone()];
        if t.kind == TransferKind::Swap {
            legs.push(t.path.iter().rev().copied().collect());
        }
        for p in legs {
            let token = p[0] as Token;
            if p.len() - 1 <= threshold {
                short.push(Job { token, path: p, pos: 0 });
            } else {
                long.push((p[0], *p.last().expect("nonempty")));
            }
        }
    }
    out.extend(store_forward(g, &mut state, short)?);
    if !long.is_empty() {
        let mut lift = Timestep::default();
        for &(s, _) in &long {
            let (v, slot) = state.locate(s as Token).expect("token present");
            lift.ops.push(Op::SwapLocal { v, s1: 0, s2: slot });
        }
        apply_all(g, &mut state, std::slice::from_ref(&lift))?;
        out.push(lift);
        let (ts, _) = sparse_route_state(g, &state, &long)?;
        apply_all(g, &mut state, &ts)?;
        out.extend(ts);
    }
    out.push(unload(g, &mut state)?);
    out.retain(|t| !t.is_empty());
    Ok(out)
}

/// Swap-only schedule realising the same permutation as `round`, the
/// cheapest of split, store-and-forward and generic routing.
pub fn simulate_round_with_swaps(g: &ArchGraph, round: &TeleRound) -> Result<SwapSimulation> {
    if g.ancilla_budget() < 2 {
        return Err(Error::InsufficientBudget {
            required: 2,
            actual: g.ancilla_budget(),
            context: "tokens in transit are stored beside a parked token".into(),
        });
    }
    let init = TokenState::initial(g.n(), g.ancilla_budget());
    let mut after = init.clone();
    let as_step = Timestep::new(vec![Op::TeleRound(round.clone())]);
    apply_timestep(g, &mut after, &as_step, 0)?;
    let permutation = achieved_permutation(&init, &after)?;
    let threshold = (g.n() as f64).sqrt().ceil() as usize;
    let legs = |t: &Transfer| if t.kind == TransferKind::Swap { 2 } else { 1 };
    let short_transfers = round.transfers.iter().filter(|t| t.path.len() - 1 <= threshold).map(legs).sum();
    let long_transfers = round.transfers.iter().filter(|t| t.path.len() - 1 > threshold).map(legs).sum();
    let model = DepthModel::default();
    let depth = |ts: &[Timestep]| ts.iter().map(|t| t.cost(&model)).sum::<u64>();
    let split = simulate_split(g, round, threshold).ok();
    let sf = simulate_split(g, round, usize::MAX).ok();
    let generic = route_generic(g, &permutation)?;
    let split_depth = split.as_deref().map(depth);
    let store_forward_depth = sf.as_deref().map(depth);
    let generic_depth = generic.depth();
    let mut best = (generic_depth, SimStrategy::Generic, generic.timesteps.clone());
    if let Some(ts) = sf {
        if store_forward_depth.expect("computed") <= best.0 {
            best = (store_forward_depth.expect("computed"), SimStrategy::StoreForward, ts);
        }
    }
    if let Some(ts) = split {
        if split_depth.expect("computed") <= best.0 {
            best = (split_depth.expect("computed"), SimStrategy::Split, ts);
        }
    }
    let schedule = Schedule::with_timesteps(g, best.2);
    let fin = execute(g, &init, &schedule)?.final_state;
    if achieved_permutation(&init, &fin)? != permutation {
        return Err(Error::Verification("swap simulation realises a different permutation".into()));
    }
    Ok(SwapSimulation {
        schedule,
        strategy: best.1,
        permutation,
        threshold,
        short_transfers,
        long_transfers,
        split_depth,
        store_forward_depth,
        generic_depth,
    })
}

/// Best teleportation schedule available for `g`.
pub fn tele_schedule(g: &ArchGraph, perm: &Permutation) -> Result<Schedule> {
    if ladder_n(g).is_ok() && g.ancilla_budget() >= LADDER_BUDGET {
        return Ok(ladder_schedule(g, perm)?.schedule);
    }
    greedy_schedule(g, perm, g.ancilla_budget())
}

/// Swap and teleport depths of `perm` and their ratio.
#[derive(Clone, Debug, Serialize)]
pub struct Advantage {
    pub swap_depth: u64,
    pub swap_method: &'static str,
    pub tele_depth: u64,
    pub tele_rounds: usize,
    #[serde(skip)]
    pub ratio: Rational,
    pub ratio_f64: f64,
}

/// Cheapest swap schedule among the available routers, with its name.
pub fn best_swap_schedule(g: &ArchGraph, perm: &Permutation) -> Result<(Schedule, &'static str)> {
    let mut best = (route_generic(g, perm)?, "generic");
    if g.ancilla_budget() >= 2 {
        let s = sparse_route(g, perm)?;
        if s.depth() < best.0.depth() {
            best = (s, "sparse");
        }
    }
    if let Some(&Family::Wheel { rim }) = g.family() {
        for l in (1..=rim / 2).filter(|&l| rim % l == 0) {
            if generate_permutation(&PermKind::Wheel { l }, g).is_ok_and(|p| &p == perm) {
                let w = route_wheel(g, l)?;
                if w.schedule.depth() < best.0.depth() {
                    best = (w.schedule, "wheel");
                }
            }
        }
    }
    Ok(best)
}

pub fn advantage(g: &ArchGraph, perm: &Permutation) -> Result<Advantage> {
    advantage_with(g, perm, &DepthModel::default())
}

/// Ratio of the best swap depth to the teleport depth; 1 when the teleport
/// schedule is free.
pub fn advantage_with(g: &ArchGraph, perm: &Permutation, model: &DepthModel) -> Result<Advantage> {
    let (swap, swap_method) = best_swap_schedule(g, perm)?;
    let tele = tele_schedule(g, perm)?;
    let swap_depth = swap.depth_with(model);
    let tele_depth = tele.depth_with(model);
    let ratio = if tele_depth == 0 { Rational::from_integer(1) } else { Rational::new(swap_depth, tele_depth) };
    Ok(Advantage {
        swap_depth,
        swap_method,
        tele_depth,
        tele_rounds: tele.tele_rounds(),
        ratio,
        ratio_f64: *ratio.numer() as f64 / *ratio.denom() as f64,
    })
}
