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

use std::collections::VecDeque;

use super::ArchGraph;
use crate::error::{invalid, Error, Result};

/// A tree on a subset of the vertices of some host graph.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Tree {
    root: usize,
    members: Vec<usize>,
    parent: Vec<Option<usize>>,
    adj: Vec<Vec<usize>>,
    in_tree: Vec<bool>,
}

impl Tree {
    /// Build from an edge list over host vertices `0..n`. The tree spans the
    /// endpoints of `edges` (or just `root` when there are none).
    pub fn from_edges(n: usize, root: usize, edges: &[(usize, usize)]) -> Result<Self> {
        if root >= n {
            return Err(Error::VertexOutOfRange { vertex: root, n });
        }
        let mut adj = vec![Vec::new(); n];
        let mut in_tree = vec![false; n];
        in_tree[root] = true;
        for &(u, v) in edges {
            if u >= n || v >= n {
                return Err(Error::VertexOutOfRange { vertex: u.max(v), n });
            }
            if u == v {
                return invalid("self-loop in tree");
            }
            adj[u].push(v);
            adj[v].push(u);
            in_tree[u] = true;
            in_tree[v] = true;
        }
        let members: Vec<usize> = (0..n).filter(|&v| in_tree[v]).collect();
        if edges.len() + 1 != members.len() {
            return invalid("edge set is not a tree");
        }
        for list in adj.iter_mut() {
            list.sort_unstable();
        }
        let mut parent = vec![None; n];
        let mut seen = vec![false; n];
        let mut queue = VecDeque::from([root]);
        seen[root] = true;
        let mut count = 1;
        while let Some(u) = queue.pop_front() {
            for &w in &adj[u] {
                if !seen[w] {
                    seen[w] = true;
                    parent[w] = Some(u);
                    count += 1;
                    queue.push_back(w);
                }
            }
        }
        if count != members.len() {
            return invalid("edge set is not a tree");
        }
        Ok(Tree { root, members, parent, adj, in_tree })
    }

    pub fn root(&self) -> usize {
        self.root
    }

    /// Tree vertices, ascending.
    pub fn members(&self) -> &[usize] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, v: usize) -> bool {
        v < self.in_tree.len() && self.in_tree[v]
    }

    pub fn parent(&self, v: usize) -> Option<usize> {
        self.parent[v]
    }

    /// Tree neighbours of `v`, ascending.
    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    /// Edges `(u, v)` with `u < v`, sorted.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out: Vec<_> = self
            .members
            .iter()
            .filter_map(|&v| self.parent[v].map(|p| (p.min(v), p.max(v))))
            .collect();
        out.sort_unstable();
        out
    }

    /// Host size the tree was built against.
    pub fn host_size(&self) -> usize {
        self.in_tree.len()
    }

    pub(crate) fn check_in_host(&self, g: &ArchGraph) -> Result<()> {
        if g.n() != self.host_size() {
            return invalid("tree and graph sizes differ");
        }
        for (u, v) in self.edges() {
            if !g.has_edge(u, v) {
                return invalid(format!("tree edge ({u}, {v}) not in graph"));
            }
        }
        Ok(())
    }
}

/// Breadth-first spanning tree of `g` rooted at `root`.
pub fn spanning_tree(g: &ArchGraph, root: usize) -> Result<Tree> {
    let all: Vec<usize> = (0..g.n()).collect();
    spanning_tree_of(g, &all, root)
}

/// Breadth-first spanning tree of the subgraph induced on `vertices`.
pub fn spanning_tree_of(g: &ArchGraph, vertices: &[usize], root: usize) -> Result<Tree> {
    g.check_vertex(root)?;
    let mut allowed = vec![false; g.n()];
    for &v in vertices {
        g.check_vertex(v)?;
        allowed[v] = true;
    }
    if !allowed[root] {
        return invalid("root not in vertex set");
    }
    let mut seen = vec![false; g.n()];
    seen[root] = true;
    let mut queue = VecDeque::from([root]);
    let mut edges = Vec::new();
    while let Some(u) = queue.pop_front() {
        for &w in g.neighbors(u) {
            if allowed[w] && !seen[w] {
                seen[w] = true;
                edges.push((u, w));
                queue.push_back(w);
            }
        }
    }
    if vertices.iter().any(|&v| !seen[v]) {
        return Err(Error::Disconnected);
    }
    Tree::from_edges(g.n(), root, &edges)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::archgraph::{generate_graph, Family};

    #[test]
    fn path_tree_is_path() {
        let g = generate_graph(&Family::Path { n: 7 }).unwrap();
        let t = spanning_tree(&g, 0).unwrap();
        assert_eq!(t.edges(), g.edges());
    }

    #[test]
    fn complete_gives_star() {
        let g = generate_graph(&Family::Complete { n: 4 }).unwrap();
        let t = spanning_tree(&g, 0).unwrap();
        assert_eq!(t.edges(), vec![(0, 1), (0, 2), (0, 3)]);
    }

    #[test]
    fn wheel_hub_star() {
        let g = generate_graph(&Family::Wheel { rim: 8 }).unwrap();
        let t = spanning_tree(&g, 8).unwrap();
        assert!(t.edges().iter().all(|&(_, v)| v == 8));
        assert_eq!(t.len(), 9);
    }

    #[test]
    fn rejects_cycles() {
        assert!(Tree::from_edges(3, 0, &[(0, 1), (1, 2), (2, 0)]).is_err());
        assert!(Tree::from_edges(4, 0, &[(0, 1), (2, 3)]).is_err());
    }

    #[test]
    fn subset_tree() {
        let g = generate_graph(&Family::Grid { n: 3, d: 2 }).unwrap();
        let t = spanning_tree_of(&g, &[0, 1, 4], 1).unwrap();
        assert_eq!(t.edges(), vec![(0, 1), (1, 4)]);
        assert!(spanning_tree_of(&g, &[0, 8], 0).is_err());
    }
}
