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

//! Architecture graphs, graph families and permutation generators.

mod families;
mod permutation;
mod tree;

use std::collections::VecDeque;

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use crate::error::{invalid, Error, Result};

pub use families::{generate_graph, Family};
pub use permutation::{generate_permutation, PermKind, Permutation};
pub use tree::{spanning_tree, spanning_tree_of, Tree};

/// Default number of ancilla slots per vertex.
pub const DEFAULT_ANCILLA_BUDGET: usize = 6;

pub(crate) const UNREACHED: usize = usize::MAX;

/// A connected, simple, undirected graph with per-vertex ancilla slots.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ArchGraph {
    n: usize,
    adj: Vec<Vec<usize>>,
    ancilla_budget: usize,
    labels: Option<Vec<Vec<u64>>>,
    family: Option<Family>,
}

#[derive(Serialize, Deserialize)]
struct GraphJson {
    n: usize,
    edges: Vec<[usize; 2]>,
    #[serde(default = "default_budget")]
    ancilla_budget: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    labels: Option<Vec<Vec<u64>>>,
}

fn default_budget() -> usize {
    DEFAULT_ANCILLA_BUDGET
}

impl ArchGraph {
    /// Build a graph from an edge list. Rejects loops, duplicate edges,
    /// out-of-range endpoints and disconnected inputs.
    pub fn from_edges(n: usize, edges: &[(usize, usize)], ancilla_budget: usize) -> Result<Self> {
        if n == 0 {
            return invalid("graph must have at least one vertex");
        }
        let mut adj = vec![Vec::new(); n];
        for &(u, v) in edges {
            for w in [u, v] {
                if w >= n {
                    return Err(Error::VertexOutOfRange { vertex: w, n });
                }
            }
            if u == v {
                return invalid(format!("self-loop at vertex {u}"));
            }
            adj[u].push(v);
            adj[v].push(u);
        }
        for (v, list) in adj.iter_mut().enumerate() {
            list.sort_unstable();
            let before = list.len();
            list.dedup();
            if list.len() != before {
                return invalid(format!("duplicate edge at vertex {v}"));
            }
        }
        let g = ArchGraph {
            n,
            adj,
            ancilla_budget,
            labels: None,
            family: None,
        };
        if !g.is_connected() {
            return Err(Error::Disconnected);
        }
        Ok(g)
    }

    /// Like [`from_edges`](Self::from_edges) but silently merges repeated edges.
    pub(crate) fn from_edges_dedup(n: usize, edges: &[(usize, usize)], budget: usize) -> Result<Self> {
        let mut e: Vec<(usize, usize)> = edges.iter().map(|&(u, v)| (u.min(v), u.max(v))).collect();
        e.sort_unstable();
        e.dedup();
        Self::from_edges(n, &e, budget)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn ancilla_budget(&self) -> usize {
        self.ancilla_budget
    }

    pub fn with_ancilla_budget(mut self, budget: usize) -> Self {
        self.ancilla_budget = budget;
        self
    }

    pub fn set_ancilla_budget(&mut self, budget: usize) {
        self.ancilla_budget = budget;
    }

    pub fn labels(&self) -> Option<&[Vec<u64>]> {
        self.labels.as_deref()
    }

    pub fn family(&self) -> Option<&Family> {
        self.family.as_ref()
    }

    pub(crate) fn with_family(mut self, family: Family, labels: Option<Vec<Vec<u64>>>) -> Self {
        self.family = Some(family);
        self.labels = labels;
        self
    }

    /// Sorted neighbours of `v`.
    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u < self.n && v < self.n && self.adj[u].binary_search(&v).is_ok()
    }

    pub fn num_edges(&self) -> usize {
        self.adj.iter().map(Vec::len).sum::<usize>() / 2
    }

    /// Edges `(u, v)` with `u < v`, sorted.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::with_capacity(self.num_edges());
        for u in 0..self.n {
            for &v in &self.adj[u] {
                if u < v {
                    out.push((u, v));
                }
            }
        }
        out
    }

    pub fn max_degree(&self) -> usize {
        self.adj.iter().map(Vec::len).max().unwrap_or(0)
    }

    pub fn min_degree(&self) -> usize {
        self.adj.iter().map(Vec::len).min().unwrap_or(0)
    }

    pub(crate) fn check_vertex(&self, v: usize) -> Result<()> {
        if v >= self.n {
            Err(Error::VertexOutOfRange { vertex: v, n: self.n })
        } else {
            Ok(())
        }
    }

    fn is_connected(&self) -> bool {
        self.bfs(0).iter().all(|&d| d != UNREACHED)
    }

    /// BFS distances from `src`; unreachable vertices get `usize::MAX`.
    pub fn bfs(&self, src: usize) -> Vec<usize> {
        let mut dist = vec![UNREACHED; self.n];
        let mut queue = VecDeque::new();
        dist[src] = 0;
        queue.push_back(src);
        while let Some(u) = queue.pop_front() {
            for &w in &self.adj[u] {
                if dist[w] == UNREACHED {
                    dist[w] = dist[u] + 1;
                    queue.push_back(w);
                }
            }
        }
        dist
    }

    /// Largest BFS distance from `v`.
    pub fn eccentricity(&self, v: usize) -> usize {
        self.bfs(v).into_iter().max().unwrap_or(0)
    }

    /// Vertex of minimum eccentricity, lowest index on ties.
    pub fn center(&self) -> usize {
        (0..self.n).min_by_key(|&v| (self.eccentricity(v), v)).unwrap_or(0)
    }

    pub fn distance(&self, u: usize, v: usize) -> Result<usize> {
        self.check_vertex(u)?;
        self.check_vertex(v)?;
        Ok(self.bfs(u)[v])
    }

    /// All-pairs shortest path distances.
    pub fn distance_matrix(&self) -> Vec<Vec<usize>> {
        (0..self.n).map(|v| self.bfs(v)).collect()
    }

    /// Graph diameter. Errors on disconnected inputs.
    pub fn diameter(&self) -> Result<usize> {
        let mut best = 0;
        for v in 0..self.n {
            let d = self.bfs(v);
            let m = *d.iter().max().unwrap_or(&0);
            if m == UNREACHED {
                return Err(Error::Disconnected);
            }
            best = best.max(m);
        }
        Ok(best)
    }

    /// Deterministic shortest path from `u` to `v`: each step moves to the
    /// lowest-index neighbour one step closer to `v`.
    pub fn shortest_path(&self, u: usize, v: usize) -> Result<Vec<usize>> {
        self.check_vertex(u)?;
        self.check_vertex(v)?;
        let dist = self.bfs(v);
        Ok(walk_down(self, &dist, u))
    }

    /// Vertices outside `set` adjacent to some vertex of `set`, sorted.
    pub fn vertex_boundary(&self, set: &[usize]) -> Result<Vec<usize>> {
        let mut inside = vec![false; self.n];
        for &v in set {
            self.check_vertex(v)?;
            inside[v] = true;
        }
        let mut mark = vec![false; self.n];
        for &v in set {
            for &w in &self.adj[v] {
                if !inside[w] {
                    mark[w] = true;
                }
            }
        }
        Ok((0..self.n).filter(|&w| mark[w]).collect())
    }

    /// Subgraph induced on `vertices`, relabelled in the given order.
    pub fn induced_subgraph(&self, vertices: &[usize]) -> Result<ArchGraph> {
        let mut pos = vec![UNREACHED; self.n];
        for (i, &v) in vertices.iter().enumerate() {
            self.check_vertex(v)?;
            pos[v] = i;
        }
        let mut edges = Vec::new();
        for (i, &v) in vertices.iter().enumerate() {
            for &w in &self.adj[v] {
                if pos[w] != UNREACHED && i < pos[w] {
                    edges.push((i, pos[w]));
                }
            }
        }
        ArchGraph::from_edges(vertices.len(), &edges, self.ancilla_budget)
    }

    /// True when the graph is a simple path (or a single vertex).
    pub fn is_path(&self) -> bool {
        self.path_order().is_some()
    }

    /// Vertices of a path graph listed end to end, starting from the
    /// lower-index endpoint.
    pub fn path_order(&self) -> Option<Vec<usize>> {
        if self.n == 1 {
            return Some(vec![0]);
        }
        if self.num_edges() != self.n - 1 || self.max_degree() > 2 {
            return None;
        }
        let start = (0..self.n).find(|&v| self.degree(v) == 1)?;
        let mut order = vec![start];
        let mut prev = UNREACHED;
        let mut cur = start;
        while order.len() < self.n {
            let next = *self.adj[cur].iter().find(|&&w| w != prev)?;
            prev = cur;
            cur = next;
            order.push(cur);
        }
        Some(order)
    }

    pub fn is_complete(&self) -> bool {
        self.adj.iter().all(|l| l.len() == self.n - 1)
    }

    pub fn is_tree(&self) -> bool {
        self.num_edges() + 1 == self.n
    }

    /// Canonical JSON: sorted keys, edges as sorted `[u, v]` pairs with `u < v`.
    pub fn to_json_value(&self) -> Value {
        let edges: Vec<[usize; 2]> = self.edges().into_iter().map(|(u, v)| [u, v]).collect();
        let mut obj = json!({
            "ancilla_budget": self.ancilla_budget,
            "edges": edges,
            "n": self.n,
        });
        if let Some(labels) = &self.labels {
            obj["labels"] = json!(labels);
        }
        obj
    }

    pub fn to_json(&self) -> String {
        self.to_json_value().to_string()
    }

    pub fn to_json_pretty(&self) -> String {
        serde_json::to_string_pretty(&self.to_json_value()).expect("graph json")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let raw: GraphJson = serde_json::from_str(text)?;
        let edges: Vec<(usize, usize)> = raw.edges.iter().map(|e| (e[0], e[1])).collect();
        let mut g = ArchGraph::from_edges(raw.n, &edges, raw.ancilla_budget)?;
        if let Some(labels) = raw.labels {
            if labels.len() != raw.n {
                return invalid("labels length differs from n");
            }
            g.labels = Some(labels);
        }
        Ok(g)
    }

    /// SHA-256 of the canonical JSON, hex encoded.
    pub fn content_hash(&self) -> String {
        hex::encode(Sha256::digest(self.to_json().as_bytes()))
    }

    /// Graphviz rendering.
    pub fn to_dot(&self) -> String {
        let mut out = String::from("graph G {\n");
        for v in 0..self.n {
            match self.labels.as_ref().map(|l| &l[v]) {
                Some(label) => {
                    let text: Vec<String> = label.iter().map(u64::to_string).collect();
                    out.push_str(&format!("  {v} [label=\"{}\"];\n", text.join(",")));
                }
                None => out.push_str(&format!("  {v};\n")),
            }
        }
        for (u, v) in self.edges() {
            out.push_str(&format!("  {u} -- {v};\n"));
        }
        out.push_str("}\n");
        out
    }
}

/// Follow `dist` downhill from `u` to its zero, taking the lowest-index
/// neighbour each time.
pub(crate) fn walk_down(g: &ArchGraph, dist: &[usize], u: usize) -> Vec<usize> {
    let mut path = vec![u];
    let mut cur = u;
    while dist[cur] != 0 {
        let next = g.adj[cur]
            .iter()
            .copied()
            .find(|&w| dist[w] != UNREACHED && dist[w] + 1 == dist[cur])
            .expect("bfs distances are consistent");
        path.push(next);
        cur = next;
    }
    path
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cycle(n: usize) -> ArchGraph {
        let edges: Vec<_> = (0..n).map(|i| (i, (i + 1) % n)).collect();
        ArchGraph::from_edges(n, &edges, 6).unwrap()
    }

    #[test]
    fn rejects_bad_edges() {
        assert!(matches!(ArchGraph::from_edges(3, &[(0, 0)], 6), Err(Error::InvalidParameter(_))));
        assert!(matches!(ArchGraph::from_edges(3, &[(0, 1), (1, 0), (1, 2)], 6), Err(Error::InvalidParameter(_))));
        assert!(matches!(ArchGraph::from_edges(3, &[(0, 5)], 6), Err(Error::VertexOutOfRange { .. })));
        assert!(matches!(ArchGraph::from_edges(4, &[(0, 1), (2, 3)], 6), Err(Error::Disconnected)));
    }

    #[test]
    fn cycle_distances() {
        let g = cycle(8);
        assert_eq!(g.diameter().unwrap(), 4);
        assert_eq!(g.distance(1, 6).unwrap(), 3);
        assert_eq!(g.shortest_path(0, 4).unwrap(), vec![0, 1, 2, 3, 4]);
        assert_eq!(g.shortest_path(4, 0).unwrap(), vec![4, 3, 2, 1, 0]);
    }

    #[test]
    fn boundary() {
        let g = cycle(6);
        assert_eq!(g.vertex_boundary(&[0, 1]).unwrap(), vec![2, 5]);
        assert_eq!(g.vertex_boundary(&[]).unwrap(), Vec::<usize>::new());
    }

    #[test]
    fn path_order_detects_paths() {
        let g = ArchGraph::from_edges(4, &[(2, 0), (0, 3), (3, 1)], 6).unwrap();
        assert_eq!(g.path_order().unwrap(), vec![1, 3, 0, 2]);
        assert!(cycle(5).path_order().is_none());
    }

    #[test]
    fn json_round_trip_and_hash() {
        let g = cycle(5);
        let text = g.to_json();
        assert!(text.starts_with("{\"ancilla_budget\":6,\"edges\":[[0,1],[0,4],"));
        let back = ArchGraph::from_json(&text).unwrap();
        assert_eq!(back, g);
        assert_eq!(back.content_hash(), g.content_hash());
        assert_eq!(g.content_hash().len(), 64);
    }

    #[test]
    fn dot_lists_edges() {
        let dot = cycle(3).to_dot();
        assert!(dot.contains("0 -- 1;"));
        assert!(dot.contains("0 -- 2;"));
    }

    #[test]
    fn center_of_path() {
        let g = ArchGraph::from_edges(5, &[(0, 1), (1, 2), (2, 3), (3, 4)], 6).unwrap();
        assert_eq!(g.center(), 2);
    }
}
