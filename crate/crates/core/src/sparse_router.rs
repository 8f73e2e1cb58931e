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

//! Sparse routing with trains of tokens and one spare ancilla per vertex.

use serde::Serialize;

use crate::archgraph::{ArchGraph, Permutation, Tree, UNREACHED};
use crate::error::{invalid, Error, Result};
use crate::sim::{apply_timestep, merge_parallel, swap_layers, Op, Schedule, Timestep, Token, TokenState};
use crate::swap_router::tree_layers;

/// Non-null tokens on a path, tail first, heading for `target`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Train {
    pub vertices: Vec<usize>,
    pub target: usize,
}

impl Train {
    pub fn new(vertices: Vec<usize>, target: usize) -> Self {
        Train { vertices, target }
    }

    pub fn head(&self) -> usize {
        *self.vertices.last().expect("nonempty train")
    }

    pub fn tail(&self) -> usize {
        self.vertices[0]
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct TokenCluster {
    pub trains: Vec<Train>,
}

impl TokenCluster {
    pub fn vertices(&self) -> impl Iterator<Item = usize> + '_ {
        self.trains.iter().flat_map(|t| t.vertices.iter().copied())
    }
}

/// Next hop toward the root of `dist`: lowest-index neighbour one step closer.
fn toward(g: &ArchGraph, dist: &[usize], v: usize) -> Option<usize> {
    if dist[v] == 0 || dist[v] == UNREACHED {
        return None;
    }
    g.neighbors(v).iter().copied().find(|&w| dist[w] + 1 == dist[v])
}

/// The five timesteps moving the train on `path[..l]` one vertex along
/// `path` (whose last vertex must be data-empty).
fn advance_ops(state: &TokenState, path: &[usize]) -> Result<Vec<Timestep>> {
    let l = path.len() - 1;
    let mut anc = vec![0usize; l];
    for i in (1..l).step_by(2) {
        anc[i] = state.free_ancilla(path[i]).ok_or_else(|| Error::InsufficientBudget {
            required: 1,
            actual: 0,
            context: format!("no free ancilla at train vertex {}", path[i]),
        })?;
    }
    let local = |i: usize| Op::SwapLocal { v: path[i], s1: 0, s2: anc[i] };
    let edge = |i: usize| Op::SwapEdge { u: path[i], v: path[i + 1] };
    let mut ts = vec![Timestep::default(); 5];
    for i in (1..l).step_by(2) {
        ts[0].ops.push(local(i));
    }
    for i in (0..l).step_by(2) {
        ts[1].ops.push(edge(i));
        if i + 1 < l {
            ts[2].ops.push(local(i + 1));
        }
    }
    for i in (1..l).step_by(2) {
        ts[3].ops.push(edge(i));
        ts[4].ops.push(local(i));
    }
    Ok(ts)
}

fn check_train(g: &ArchGraph, state: &TokenState, train: &Train) -> Result<()> {
    if train.is_empty() {
        return invalid("empty train");
    }
    g.check_vertex(train.target)?;
    for &v in &train.vertices {
        g.check_vertex(v)?;
        if state.data(v).is_none() {
            return invalid(format!("train vertex {v} holds a null token"));
        }
    }
    if let Some(w) = train.vertices.windows(2).find(|w| !g.has_edge(w[0], w[1])) {
        return invalid(format!("train vertices {} and {} are not adjacent", w[0], w[1]));
    }
    Ok(())
}

/// Advance `train` by one vertex toward its target in exactly five timesteps.
pub fn advance_train(g: &ArchGraph, state: &TokenState, train: &Train) -> Result<(TokenState, Vec<Timestep>)> {
    check_train(g, state, train)?;
    let dist = g.bfs(train.target);
    let head = train.head();
    let next = toward(g, &dist, head).ok_or_else(|| Error::Blocked(format!("head {head} is already at the target")))?;
    if train.vertices.contains(&next) {
        return Err(Error::Blocked(format!("train path turns back at vertex {next}")));
    }
    if state.data(next).is_some() {
        return Err(Error::Blocked(format!("vertex {next} ahead of the head holds a token")));
    }
    let mut path = train.vertices.clone();
    path.push(next);
    let ts = advance_ops(state, &path)?;
    let mut out = state.clone();
    for (t, step) in ts.iter().enumerate() {
        apply_timestep(g, &mut out, step, t)?;
    }
    Ok((out, ts))
}

/// Concatenate trains whose head steps onto another train's tail, then merge
/// clusters that touch. Pairs are joined in index order.
fn normalize(g: &ArchGraph, dist: &[usize], clusters: Vec<TokenCluster>) -> Vec<TokenCluster> {
    let mut trains: Vec<(usize, Train)> =
        clusters.into_iter().enumerate().flat_map(|(c, cl)| cl.trains.into_iter().map(move |t| (c, t))).collect();
    let nc = trains.iter().map(|t| t.0 + 1).max().unwrap_or(0);
    let mut uf: Vec<usize> = (0..nc).collect();
    fn find(uf: &mut [usize], x: usize) -> usize {
        let mut r = x;
        while uf[r] != r {
            r = uf[r];
        }
        uf[x] = r;
        r
    }
    fn union(uf: &mut [usize], a: usize, b: usize) {
        let (a, b) = (find(uf, a), find(uf, b));
        let (lo, hi) = (a.min(b), a.max(b));
        uf[hi] = lo;
    }
    'outer: loop {
        for i in 0..trains.len() {
            let Some(next) = toward(g, dist, trains[i].1.head()) else { continue };
            if let Some(j) = (0..trains.len()).find(|&j| j != i && trains[j].1.tail() == next) {
                let (ci, ti) = trains[i].clone();
                union(&mut uf, ci, trains[j].0);
                let mut verts = ti.vertices;
                verts.extend(trains[j].1.vertices.iter().copied());
                trains[j].1.vertices = verts;
                trains.remove(i);
                continue 'outer;
            }
        }
        break;
    }
    let mut owner = vec![usize::MAX; g.n()];
    for (c, t) in &trains {
        for &v in &t.vertices {
            owner[v] = *c;
        }
    }
    for (c, t) in &trains {
        for &v in &t.vertices {
            for &w in g.neighbors(v) {
                if owner[w] != usize::MAX {
                    union(&mut uf, *c, owner[w]);
                }
            }
        }
    }
    let mut out: Vec<TokenCluster> = vec![TokenCluster::default(); nc];
    for (c, t) in trains {
        let root = find(&mut uf, c);
        out[root].trains.push(t);
    }
    out.retain(|c| !c.trains.is_empty());
    out
}

/// One round of cluster movement toward `r`: in each cluster the movable
/// train with head closest to `r` advances (lower cluster index wins a
/// contested vertex), then trains and clusters are joined.
pub fn step_clusters(
    g: &ArchGraph,
    state: &TokenState,
    clusters: Vec<TokenCluster>,
    r: usize,
) -> Result<(TokenState, Vec<Timestep>, Vec<TokenCluster>)> {
    g.check_vertex(r)?;
    let dist = g.bfs(r);
    let mut clusters = clusters;
    for cl in &mut clusters {
        for t in &mut cl.trains {
            check_train(g, state, t)?;
            t.target = r;
        }
    }
    let mut claimed = vec![false; g.n()];
    let mut ts: Vec<Timestep> = Vec::new();
    let mut moved = Vec::new();
    for (ci, cl) in clusters.iter().enumerate() {
        let lead = cl
            .trains
            .iter()
            .enumerate()
            .filter_map(|(ti, t)| toward(g, &dist, t.head()).map(|nx| (dist[t.head()], t.head(), ti, nx)))
            .filter(|&(_, _, _, nx)| state.data(nx).is_none())
            .min();
        if let Some((_, _, ti, nx)) = lead {
            if claimed[nx] {
                continue;
            }
            claimed[nx] = true;
            let mut path = cl.trains[ti].vertices.clone();
            path.push(nx);
            merge_parallel(&mut ts, advance_ops(state, &path)?);
            moved.push((ci, ti, nx));
        }
    }
    let mut out = state.clone();
    for (t, step) in ts.iter().enumerate() {
        apply_timestep(g, &mut out, step, t)?;
    }
    for (ci, ti, nx) in moved {
        let t = &mut clusters[ci].trains[ti];
        t.vertices.remove(0);
        t.vertices.push(nx);
    }
    Ok((out, ts, normalize(g, &dist, clusters)))
}

/// Singleton trains for every data token, joined.
fn initial_clusters(g: &ArchGraph, dist: &[usize], state: &TokenState, r: usize) -> Vec<TokenCluster> {
    let cl = (0..g.n())
        .filter(|&v| state.data(v).is_some())
        .map(|v| TokenCluster { trains: vec![Train::new(vec![v], r)] })
        .collect();
    normalize(g, dist, cl)
}

/// Occupied data slots form a subtree of the shortest-path tree at `r`.
fn gathered(g: &ArchGraph, dist: &[usize], state: &TokenState, r: usize) -> bool {
    let mut any = false;
    for v in 0..g.n() {
        if state.data(v).is_some() {
            any = true;
            if let Some(p) = toward(g, dist, v) {
                if state.data(p).is_none() {
                    return false;
                }
            }
        }
    }
    !any || state.data(r).is_some()
}

/// Move all data tokens into a subtree rooted at `r`.
fn gather(g: &ArchGraph, state: &TokenState, r: usize) -> Result<(TokenState, Vec<Timestep>, usize)> {
    let dist = g.bfs(r);
    let mut state = state.clone();
    let mut clusters = initial_clusters(g, &dist, &state, r);
    let mut ts = Vec::new();
    let mut steps = 0;
    while !gathered(g, &dist, &state, r) {
        let (s, t, c) = step_clusters(g, &state, clusters, r)?;
        if t.is_empty() {
            return Err(Error::Verification("cluster movement stalled".into()));
        }
        state = s;
        ts.extend(t);
        clusters = c;
        steps += 1;
    }
    Ok((state, ts, steps))
}

/// Per-phase figures of a sparse routing run.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct SparseStats {
    pub k: usize,
    pub root: usize,
    pub gather_steps: usize,
    pub phase_depths: [u64; 3],
}

fn edge_depth(ts: &[Timestep]) -> u64 {
    ts.iter().filter(|t| t.ops.iter().any(|o| matches!(o, Op::SwapEdge { .. }))).count() as u64
}

/// Move the data token at each source to its destination. Data slots off
/// the sources must be null and every vertex needs a free ancilla.
pub(crate) fn sparse_route_state(
    g: &ArchGraph,
    state: &TokenState,
    moves: &[(usize, usize)],
) -> Result<(Vec<Timestep>, SparseStats)> {
    let n = g.n();
    let mut is_src = vec![false; n];
    let mut is_dst = vec![false; n];
    for &(s, d) in moves {
        g.check_vertex(s)?;
        g.check_vertex(d)?;
        if std::mem::replace(&mut is_src[s], true) || std::mem::replace(&mut is_dst[d], true) {
            return invalid("sources and destinations must be distinct");
        }
    }
    for (v, &src) in is_src.iter().enumerate() {
        if state.data(v).is_some() != src {
            return invalid(format!("data slot of vertex {v} must be occupied exactly when it is a source"));
        }
        if state.free_ancilla(v).is_none() {
            return Err(Error::InsufficientBudget {
                required: state.ancilla_load(v) + 1,
                actual: state.budget(),
                context: format!("vertex {v} needs a free ancilla"),
            });
        }
    }
    let r = g.center();
    let mut stats = SparseStats { k: moves.len(), root: r, ..Default::default() };
    if moves.is_empty() {
        return Ok((Vec::new(), stats));
    }
    let (gathered_s, phase1, steps) = gather(g, state, r)?;
    stats.gather_steps = steps;
    let mut virt = state.clone();
    for v in 0..n {
        virt.set(v, 0, None);
    }
    for (i, &(_, d)) in moves.iter().enumerate() {
        virt.set(d, 0, Some(Token::MAX - i as Token));
    }
    let (gathered_d, phase_d, _) = gather(g, &virt, r)?;
    let dist = g.bfs(r);
    let in_u: Vec<bool> = (0..n).map(|v| gathered_s.data(v).is_some() || gathered_d.data(v).is_some()).collect();
    let edges: Vec<(usize, usize)> =
        (0..n).filter(|&v| in_u[v] && v != r).map(|v| (v, toward(g, &dist, v).expect("connected"))).collect();
    let tree = Tree::from_edges(n, r, &edges)?;
    let mut image: Vec<usize> = (0..n).collect();
    let mut used_s = vec![false; n];
    let mut used_d = vec![false; n];
    for (i, &(s, _)) in moves.iter().enumerate() {
        let tok = state.data(s).expect("source occupied");
        let from = (0..n).find(|&v| gathered_s.data(v) == Some(tok)).expect("token kept");
        let dummy = Token::MAX - i as Token;
        let to = (0..n).find(|&v| gathered_d.data(v) == Some(dummy)).expect("dummy kept");
        image[from] = to;
        used_s[from] = true;
        used_d[to] = true;
    }
    let free_s: Vec<usize> = (0..n).filter(|&v| in_u[v] && !used_s[v]).collect();
    let free_d: Vec<usize> = (0..n).filter(|&v| in_u[v] && !used_d[v]).collect();
    for (a, b) in free_s.into_iter().zip(free_d) {
        image[a] = b;
    }
    let psi = Permutation::from_image(image)?;
    let phase2 = swap_layers(tree_layers(g, &tree, &psi)?);
    let phase3: Vec<Timestep> = phase_d.into_iter().rev().collect();
    stats.phase_depths = [edge_depth(&phase1), edge_depth(&phase2), edge_depth(&phase3)];
    let mut all = phase1;
    all.extend(phase2);
    all.extend(phase3);
    Ok((all, stats))
}

/// Schedule plus phase figures.
#[derive(Clone, Debug)]
pub struct SparseRouting {
    pub schedule: Schedule,
    pub stats: SparseStats,
}

/// Route `perm` moving only its support; needs two ancilla slots per vertex
/// (one parks the unmoved token, one serves the trains).
pub fn sparse_route_report(g: &ArchGraph, perm: &Permutation) -> Result<SparseRouting> {
    if perm.len() != g.n() {
        return invalid("permutation size does not match the graph");
    }
    if g.ancilla_budget() < 2 {
        return Err(Error::InsufficientBudget {
            required: 2,
            actual: g.ancilla_budget(),
            context: "sparse routing parks unmoved tokens and needs one more slot for trains".into(),
        });
    }
    let support = perm.support();
    if support.is_empty() {
        return Ok(SparseRouting { schedule: Schedule::for_graph(g), stats: SparseStats { root: g.center(), ..Default::default() } });
    }
    let mut marked = vec![false; g.n()];
    for &v in &support {
        marked[v] = true;
    }
    let hide = Timestep::new(
        (0..g.n()).filter(|&v| !marked[v]).map(|v| Op::SwapLocal { v, s1: 0, s2: 1 }).collect(),
    );
    let mut state = TokenState::initial(g.n(), g.ancilla_budget());
    apply_timestep(g, &mut state, &hide, 0)?;
    let moves: Vec<(usize, usize)> = support.iter().map(|&v| (v, perm.apply(v))).collect();
    let (body, stats) = sparse_route_state(g, &state, &moves)?;
    let mut ts = Vec::with_capacity(body.len() + 2);
    if !hide.is_empty() {
        ts.push(hide.clone());
    }
    ts.extend(body);
    if !hide.is_empty() {
        ts.push(hide);
    }
    Ok(SparseRouting { schedule: Schedule::with_timesteps(g, ts), stats })
}

pub fn sparse_route(g: &ArchGraph, perm: &Permutation) -> Result<Schedule> {
    sparse_route_report(g, perm).map(|r| r.schedule)
}
