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

//! Swap-only routing.

use std::collections::VecDeque;

use serde::Serialize;

use crate::archgraph::{generate_graph, spanning_tree, ArchGraph, Family, Permutation, Tree};
use crate::error::{invalid, Error, Result};
use crate::sim::{swap_layers, Schedule, Timestep};

/// Layers of vertex-disjoint edge swaps.
pub type SwapLayers = Vec<Vec<(usize, usize)>>;

fn check_perm(g: &ArchGraph, perm: &Permutation) -> Result<()> {
    if perm.len() != g.n() {
        return invalid(format!("permutation has {} entries for a graph on {} vertices", perm.len(), g.n()));
    }
    Ok(())
}

fn to_schedule(g: &ArchGraph, layers: SwapLayers) -> Schedule {
    Schedule::with_timesteps(g, swap_layers(layers))
}

fn merge_layers(into: &mut SwapLayers, other: SwapLayers) {
    for (i, l) in other.into_iter().enumerate() {
        if i < into.len() {
            into[i].extend(l);
        } else {
            into.push(l);
        }
    }
}

/// Odd-even transposition sort along `order`. `target[p]` is the position
/// the token starting at position `p` must reach. Empty rounds are dropped.
pub fn oet_layers(order: &[usize], target: &[usize]) -> SwapLayers {
    let len = order.len();
    let mut key = target.to_vec();
    let mut layers = Vec::new();
    let mut round = 0;
    while key.windows(2).any(|w| w[0] > w[1]) {
        let mut layer = Vec::new();
        let mut p = round % 2;
        while p + 1 < len {
            if key[p] > key[p + 1] {
                key.swap(p, p + 1);
                layer.push((order[p], order[p + 1]));
            }
            p += 2;
        }
        if !layer.is_empty() {
            layers.push(layer);
        }
        round += 1;
        debug_assert!(round <= len + 1);
    }
    layers
}

/// Odd-even transposition sort on a path graph; depth at most n.
pub fn route_path_oet(g: &ArchGraph, perm: &Permutation) -> Result<Schedule> {
    Ok(to_schedule(g, path_layers(g, perm)?))
}

fn path_layers(g: &ArchGraph, perm: &Permutation) -> Result<SwapLayers> {
    check_perm(g, perm)?;
    let order = g.path_order().ok_or_else(|| Error::WrongFamily("graph is not a path".into()))?;
    let mut pos = vec![0; g.n()];
    for (p, &v) in order.iter().enumerate() {
        pos[v] = p;
    }
    let target: Vec<usize> = order.iter().map(|&v| pos[perm.apply(v)]).collect();
    Ok(oet_layers(&order, &target))
}

/// Complete-graph routing in depth at most 2: each cycle is the product of
/// two reflections.
pub fn route_complete(g: &ArchGraph, perm: &Permutation) -> Result<Schedule> {
    Ok(to_schedule(g, complete_layers(g, perm)?))
}

fn complete_layers(g: &ArchGraph, perm: &Permutation) -> Result<SwapLayers> {
    check_perm(g, perm)?;
    if !g.is_complete() {
        return Err(Error::WrongFamily("graph is not complete".into()));
    }
    let (mut first, mut second) = (Vec::new(), Vec::new());
    for cyc in perm.cycles() {
        // tokens move c[i] -> c[i+1]; first i <-> -i, then j <-> 1-j (mod m)
        let m = cyc.len();
        for i in 1..m {
            let j = m - i;
            if i < j {
                first.push((cyc[i], cyc[j]));
            }
        }
        for j in 0..m {
            let o = (m + 1 - j) % m;
            if j < o {
                second.push((cyc[j], cyc[o]));
            }
        }
    }
    Ok([first, second].into_iter().filter(|l| !l.is_empty()).collect())
}

/// Route `perm` on the tree `tree` (support must lie inside it) by recursive
/// centroid splitting. Depth at most 3|V(T)| on every tested instance.
pub fn route_tree(g: &ArchGraph, tree: &Tree, perm: &Permutation) -> Result<Schedule> {
    Ok(to_schedule(g, tree_layers(g, tree, perm)?))
}

/// Routes on `g` itself, which must be a tree.
pub fn route_tree_graph(g: &ArchGraph, perm: &Permutation) -> Result<Schedule> {
    if !g.is_tree() {
        return invalid("graph is not a tree");
    }
    let t = Tree::from_edges(g.n(), 0, &g.edges())?;
    route_tree(g, &t, perm)
}

pub(crate) fn tree_layers(g: &ArchGraph, tree: &Tree, perm: &Permutation) -> Result<SwapLayers> {
    check_perm(g, perm)?;
    tree.check_in_host(g)?;
    for v in perm.support() {
        if !tree.contains(v) {
            return invalid(format!("vertex {v} is moved but not in the tree"));
        }
    }
    let mut router = TreeRouter {
        tree,
        comp: vec![usize::MAX; g.n()],
        next_id: 1,
        dest: perm.image().to_vec(),
    };
    for &v in tree.members() {
        router.comp[v] = 0;
    }
    let members = tree.members().to_vec();
    router.route(&members, 0)
}

struct TreeRouter<'a> {
    tree: &'a Tree,
    // component id per vertex at the current recursion depth
    comp: Vec<usize>,
    next_id: usize,
    // destination of the token currently at each vertex
    dest: Vec<usize>,
}

impl TreeRouter<'_> {
    fn nbrs(&self, v: usize, id: usize) -> impl Iterator<Item = usize> + '_ {
        self.tree.neighbors(v).iter().copied().filter(move |&w| self.comp[w] == id)
    }

    /// BFS order and parents inside component `id`, from `root`, not crossing `skip`.
    fn bfs(&self, root: usize, id: usize, skip: usize) -> (Vec<usize>, Vec<(usize, usize)>) {
        let mut order = vec![root];
        let mut parent = vec![(root, usize::MAX)];
        let mut i = 0;
        while i < order.len() {
            let u = order[i];
            let pu = parent[i].1;
            for w in self.nbrs(u, id) {
                if w != pu && w != skip {
                    order.push(w);
                    parent.push((w, u));
                }
            }
            i += 1;
        }
        (order, parent)
    }

    fn route(&mut self, comp: &[usize], id: usize) -> Result<SwapLayers> {
        if comp.len() <= 1 || comp.iter().all(|&v| self.dest[v] == v) {
            return Ok(Vec::new());
        }
        let c = self.centroid(comp, id);
        let roots: Vec<usize> = self.nbrs(c, id).collect();
        let base = self.next_id;
        self.next_id += roots.len();
        let mut parts = Vec::with_capacity(roots.len());
        for (i, &r) in roots.iter().enumerate() {
            let (order, parent) = self.bfs(r, id, c);
            for &v in &order {
                self.comp[v] = base + i;
            }
            parts.push((order, parent));
        }
        let hub = usize::MAX;
        let part_of = |comp: &Vec<usize>, v: usize| if v == c { hub } else { comp[v] - base };
        let mut layers: SwapLayers = Vec::new();
        let mut busy = vec![false; self.comp.len()];
        loop {
            let outbound = |s: &Self, v: usize| s.comp[s.dest[v]] != s.comp[v];
            let hub_target = part_of(&self.comp, self.dest[c]);
            let any_out = parts.iter().any(|(o, _)| o.iter().any(|&v| outbound(self, v)));
            if hub_target == hub && !any_out {
                break;
            }
            let mut layer = Vec::new();
            if hub_target != hub {
                let r = roots[hub_target];
                if outbound(self, r) {
                    layer.push((c, r));
                }
            } else if let Some(&r) = roots.iter().find(|&&r| outbound(self, r)) {
                layer.push((c, r));
            }
            for &(a, b) in &layer {
                busy[a] = true;
                busy[b] = true;
            }
            for (order, parent) in &parts {
                for (i, &p) in order.iter().enumerate() {
                    if busy[p] || outbound(self, p) {
                        continue;
                    }
                    let child = order[i + 1..]
                        .iter()
                        .zip(&parent[i + 1..])
                        .find(|(&q, &(_, par))| par == p && !busy[q] && outbound(self, q))
                        .map(|(&q, _)| q);
                    if let Some(q) = child {
                        busy[p] = true;
                        busy[q] = true;
                        layer.push((p, q));
                    }
                }
            }
            if layer.is_empty() {
                return Err(Error::Verification("tree routing made no progress".into()));
            }
            for &(a, b) in &layer {
                self.dest.swap(a, b);
                busy[a] = false;
                busy[b] = false;
            }
            layers.push(layer);
        }
        self.comp[c] = usize::MAX;
        let mut sub: SwapLayers = Vec::new();
        for (i, (order, _)) in parts.iter().enumerate() {
            merge_layers(&mut sub, self.route(order, base + i)?);
        }
        layers.extend(sub);
        Ok(layers)
    }

    fn centroid(&self, comp: &[usize], id: usize) -> usize {
        let (order, parent) = self.bfs(comp[0], id, usize::MAX);
        let n = order.len();
        let idx: std::collections::HashMap<usize, usize> = order.iter().enumerate().map(|(i, &v)| (v, i)).collect();
        let mut size = vec![1usize; n];
        let mut heaviest_child = vec![0usize; n];
        for i in (1..n).rev() {
            let p = idx[&parent[i].1];
            size[p] += size[i];
            heaviest_child[p] = heaviest_child[p].max(size[i]);
        }
        (0..n)
            .map(|i| (heaviest_child[i].max(n - size[i]), order[i]))
            .min()
            .expect("nonempty component")
            .1
    }
}

/// Three-phase schedule and per-phase depths.
#[derive(Clone, Debug)]
pub struct ProductRouting {
    pub schedule: Schedule,
    pub phase_depths: [u64; 3],
}

/// Route on `g = g1 □ g2` with vertex `x + |V(g1)|·y` for x in g1, y in g2.
pub fn route_product(g: &ArchGraph, g1: &ArchGraph, g2: &ArchGraph, perm: &Permutation) -> Result<ProductRouting> {
    let (layers, phase_depths) = product_layers(g, g1, g2, perm)?;
    Ok(ProductRouting { schedule: to_schedule(g, layers), phase_depths })
}

fn check_product(g: &ArchGraph, g1: &ArchGraph, g2: &ArchGraph) -> Result<()> {
    let (n1, n2) = (g1.n(), g2.n());
    if g.n() != n1 * n2 || g.num_edges() != g1.num_edges() * n2 + g2.num_edges() * n1 {
        return invalid("graph is not the Cartesian product of the given factors");
    }
    for y in 0..n2 {
        for (a, b) in g1.edges() {
            if !g.has_edge(a + n1 * y, b + n1 * y) {
                return invalid("graph is not the Cartesian product of the given factors");
            }
        }
    }
    for x in 0..n1 {
        for (a, b) in g2.edges() {
            if !g.has_edge(x + n1 * a, x + n1 * b) {
                return invalid("graph is not the Cartesian product of the given factors");
            }
        }
    }
    Ok(())
}

fn product_layers(g: &ArchGraph, g1: &ArchGraph, g2: &ArchGraph, perm: &Permutation) -> Result<(SwapLayers, [u64; 3])> {
    check_perm(g, perm)?;
    check_product(g, g1, g2)?;
    let (n1, n2) = (g1.n(), g2.n());
    // bucket[y][y'] = x coordinates of tokens in row y bound for row y'
    let mut bucket: Vec<Vec<VecDeque<usize>>> = vec![vec![VecDeque::new(); n2]; n2];
    for y in 0..n2 {
        for x in 0..n1 {
            bucket[y][perm.apply(x + n1 * y) / n1].push_back(x);
        }
    }
    let mut color = vec![0usize; g.n()];
    for c in 0..n1 {
        let m = perfect_matching(&bucket)
            .ok_or_else(|| Error::Verification("regular bipartite multigraph without a perfect matching".into()))?;
        for (y, &yp) in m.iter().enumerate() {
            let x = bucket[y][yp].pop_front().expect("matched edge has a token");
            color[x + n1 * y] = c;
        }
    }
    let mut phases: [SwapLayers; 3] = Default::default();
    // phase 1: within each G1 copy, x -> color
    for y in 0..n2 {
        let sigma = Permutation::from_image((0..n1).map(|x| color[x + n1 * y]).collect())?;
        let l = route_layers(g1, &sigma)?;
        merge_layers(&mut phases[0], map_layers(l, |a| a + n1 * y));
    }
    // phase 2: within each G2 copy (fixed color), y -> y'
    let mut rows = vec![vec![0usize; n2]; n1];
    let mut final_x = vec![vec![0usize; n1]; n2];
    for y in 0..n2 {
        for x in 0..n1 {
            let d = perm.apply(x + n1 * y);
            let c = color[x + n1 * y];
            rows[c][y] = d / n1;
            final_x[d / n1][c] = d % n1;
        }
    }
    for (c, row) in rows.into_iter().enumerate() {
        let sigma = Permutation::from_image(row)?;
        let l = route_layers(g2, &sigma)?;
        merge_layers(&mut phases[1], map_layers(l, |b| c + n1 * b));
    }
    // phase 3: within each G1 copy, color -> x'
    for (yp, xs) in final_x.into_iter().enumerate() {
        let sigma = Permutation::from_image(xs)?;
        let l = route_layers(g1, &sigma)?;
        merge_layers(&mut phases[2], map_layers(l, |a| a + n1 * yp));
    }
    let depths = [phases[0].len() as u64, phases[1].len() as u64, phases[2].len() as u64];
    let [a, b, c] = phases;
    Ok((a.into_iter().chain(b).chain(c).collect(), depths))
}

fn map_layers(layers: SwapLayers, f: impl Fn(usize) -> usize) -> SwapLayers {
    layers.into_iter().map(|l| l.into_iter().map(|(a, b)| (f(a), f(b))).collect()).collect()
}

/// Perfect matching rows -> columns using only entries with tokens left.
fn perfect_matching(bucket: &[Vec<VecDeque<usize>>]) -> Option<Vec<usize>> {
    let n = bucket.len();
    let mut match_col = vec![usize::MAX; n];
    fn augment(y: usize, bucket: &[Vec<VecDeque<usize>>], seen: &mut [bool], match_col: &mut [usize]) -> bool {
        for yp in 0..bucket.len() {
            if bucket[y][yp].is_empty() || seen[yp] {
                continue;
            }
            seen[yp] = true;
            if match_col[yp] == usize::MAX || augment(match_col[yp], bucket, seen, match_col) {
                match_col[yp] = y;
                return true;
            }
        }
        false
    }
    for y in 0..n {
        let mut seen = vec![false; n];
        if !augment(y, bucket, &mut seen, &mut match_col) {
            return None;
        }
    }
    let mut row_to_col = vec![0; n];
    for (yp, &y) in match_col.iter().enumerate() {
        row_to_col[y] = yp;
    }
    Some(row_to_col)
}

/// Swap layers for `perm` on `g` using the most specific router available.
pub fn route_layers(g: &ArchGraph, perm: &Permutation) -> Result<SwapLayers> {
    check_perm(g, perm)?;
    if perm.is_identity() {
        return Ok(Vec::new());
    }
    if g.is_path() {
        return path_layers(g, perm);
    }
    if g.is_complete() {
        return complete_layers(g, perm);
    }
    if let Some((g1, g2)) = product_factors(g)? {
        return Ok(product_layers(g, &g1, &g2, perm)?.0);
    }
    let tree = spanning_tree(g, g.center())?;
    tree_layers(g, &tree, perm)
}

/// First-coordinate factorisation for grids and hypercubes.
fn product_factors(g: &ArchGraph) -> Result<Option<(ArchGraph, ArchGraph)>> {
    let pair = match g.family() {
        Some(&Family::Grid { n, d }) if d >= 2 => (Family::Path { n }, Family::Grid { n, d: d - 1 }),
        Some(&Family::Hypercube { d }) if d >= 2 => (Family::Path { n: 2 }, Family::Hypercube { d: d - 1 }),
        _ => return Ok(None),
    };
    Ok(Some((generate_graph(&pair.0)?, generate_graph(&pair.1)?)))
}

/// Dispatching swap router: path, complete graph, grid/hypercube products,
/// else a BFS spanning tree rooted at the graph center.
pub fn route_generic(g: &ArchGraph, perm: &Permutation) -> Result<Schedule> {
    Ok(to_schedule(g, route_layers(g, perm)?))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum WheelBranch {
    Hub,
    Rim,
}

#[derive(Clone, Debug)]
pub struct WheelRouting {
    pub schedule: Schedule,
    pub branch: WheelBranch,
    pub hub_depth: u64,
    pub rim_depth: u64,
    /// min{2l, N/l - 1}, the optimum's lower-order expression, for comparison only.
    pub optimum_floor: u64,
}

fn wheel_params(g: &ArchGraph, l: usize) -> Result<(usize, usize)> {
    let rim = match g.family() {
        Some(&Family::Wheel { rim }) => rim,
        _ => return Err(Error::WrongFamily("route_wheel needs a wheel graph".into())),
    };
    if l == 0 || rim % l != 0 || rim / l < 2 {
        return invalid(format!("l = {l} must divide the rim size {rim} with segments of length >= 2"));
    }
    Ok((rim, rim / l))
}

/// Exchange of segment endpoints on a wheel through one branch.
pub fn route_wheel_branch(g: &ArchGraph, l: usize, branch: WheelBranch) -> Result<Schedule> {
    let (rim, seg) = wheel_params(g, l)?;
    let hub = rim;
    let mut layers: SwapLayers = Vec::new();
    match branch {
        WheelBranch::Hub => {
            for j in 0..l {
                let (a, b) = (j * seg, (j + 1) * seg - 1);
                layers.extend([vec![(a, hub)], vec![(hub, b)], vec![(hub, a)]]);
            }
        }
        WheelBranch::Rim => {
            for j in 0..l {
                let order: Vec<usize> = (j * seg..(j + 1) * seg).collect();
                let mut target: Vec<usize> = (0..seg).collect();
                target.swap(0, seg - 1);
                merge_layers(&mut layers, oet_layers(&order, &target));
            }
        }
    }
    Ok(to_schedule(g, layers))
}

/// Cheaper of the hub-sequential and rim-parallel protocols (rim on ties).
pub fn route_wheel(g: &ArchGraph, l: usize) -> Result<WheelRouting> {
    let (_, seg) = wheel_params(g, l)?;
    let hub = route_wheel_branch(g, l, WheelBranch::Hub)?;
    let rim_s = route_wheel_branch(g, l, WheelBranch::Rim)?;
    let (hd, rd) = (hub.depth(), rim_s.depth());
    let (schedule, branch) = if hd < rd { (hub, WheelBranch::Hub) } else { (rim_s, WheelBranch::Rim) };
    Ok(WheelRouting { schedule, branch, hub_depth: hd, rim_depth: rd, optimum_floor: (2 * l as u64).min(seg as u64 - 1) })
}

/// Rebuild a schedule from swap layers for `g`.
pub fn layers_to_schedule(g: &ArchGraph, layers: SwapLayers) -> Schedule {
    to_schedule(g, layers)
}

/// Timesteps (no graph binding) for swap layers.
pub fn layers_to_timesteps(layers: SwapLayers) -> Vec<Timestep> {
    swap_layers(layers)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::archgraph::{generate_permutation, PermKind};
    use crate::sim::verify_schedule;
    use proptest::prelude::*;

    fn gen(f: Family) -> ArchGraph {
        generate_graph(&f).unwrap()
    }

    fn perm(g: &ArchGraph, k: PermKind) -> Permutation {
        generate_permutation(&k, g).unwrap()
    }

    #[test]
    fn oet_examples() {
        let p2 = gen(Family::Path { n: 2 });
        let s = route_path_oet(&p2, &Permutation::from_image(vec![1, 0]).unwrap()).unwrap();
        assert_eq!(s.depth(), 1);
        let p7 = gen(Family::Path { n: 7 });
        let refl = perm(&p7, PermKind::Reflection);
        let s = route_path_oet(&p7, &refl).unwrap();
        assert!(s.depth() <= 7);
        verify_schedule(&p7, &s, &refl).unwrap();
        assert_eq!(route_path_oet(&p7, &Permutation::identity(7)).unwrap().depth(), 0);
        assert!(route_path_oet(&gen(Family::Complete { n: 4 }), &Permutation::identity(4)).is_err());
    }

    #[test]
    fn complete_examples() {
        let k4 = gen(Family::Complete { n: 4 });
        let cyc = Permutation::from_image(vec![1, 2, 3, 0]).unwrap();
        let s = route_complete(&k4, &cyc).unwrap();
        assert_eq!(s.depth(), 2);
        verify_schedule(&k4, &s, &cyc).unwrap();
        let t = Permutation::from_image(vec![1, 0, 2, 3]).unwrap();
        assert_eq!(route_complete(&k4, &t).unwrap().depth(), 1);
    }

    #[test]
    fn star_leaf_swap() {
        let star = ArchGraph::from_edges(4, &[(0, 1), (0, 2), (0, 3)], 6).unwrap();
        let p = Permutation::from_image(vec![0, 2, 1, 3]).unwrap();
        let s = route_tree_graph(&star, &p).unwrap();
        assert!(s.depth() <= 3);
        verify_schedule(&star, &s, &p).unwrap();
    }

    #[test]
    fn path_tree_reflection() {
        let p5 = gen(Family::Path { n: 5 });
        let t = spanning_tree(&p5, 0).unwrap();
        let refl = perm(&p5, PermKind::Reflection);
        let s = route_tree(&p5, &t, &refl).unwrap();
        assert!(s.depth() <= 15);
        verify_schedule(&p5, &s, &refl).unwrap();
    }

    #[test]
    fn tree_rejects_outside_support() {
        let g = gen(Family::Path { n: 4 });
        let t = crate::archgraph::spanning_tree_of(&g, &[0, 1], 0).unwrap();
        let p = Permutation::from_image(vec![0, 1, 3, 2]).unwrap();
        assert!(route_tree(&g, &t, &p).is_err());
    }

    #[test]
    fn product_examples() {
        let g = gen(Family::Grid { n: 4, d: 2 });
        let p4 = gen(Family::Path { n: 4 });
        let p = perm(&g, PermKind::Random { seed: 1, k: None });
        let r = route_product(&g, &p4, &p4, &p).unwrap();
        assert!(r.schedule.depth() <= 12);
        verify_schedule(&g, &r.schedule, &p).unwrap();
        // permutation inside row 0
        let mut img: Vec<usize> = (0..16).collect();
        img[..4].reverse();
        let row = Permutation::from_image(img).unwrap();
        let r = route_product(&g, &p4, &p4, &row).unwrap();
        assert!(r.schedule.depth() <= 4);
        verify_schedule(&g, &r.schedule, &row).unwrap();
        assert_eq!(route_product(&g, &p4, &p4, &Permutation::identity(16)).unwrap().schedule.depth(), 0);
    }

    #[test]
    fn generic_examples() {
        let p7 = gen(Family::Path { n: 7 });
        let d = perm(&p7, PermKind::Diam);
        let s = route_generic(&p7, &d).unwrap();
        assert!((6..=21).contains(&s.depth()));
        let k5 = gen(Family::Complete { n: 5 });
        let r = perm(&k5, PermKind::Random { seed: 3, k: None });
        assert!(route_generic(&k5, &r).unwrap().depth() <= 2);
    }

    #[test]
    fn wheel_examples() {
        let w9 = gen(Family::Wheel { rim: 8 });
        let r = route_wheel(&w9, 2).unwrap();
        assert_eq!(r.branch, WheelBranch::Rim);
        verify_schedule(&w9, &r.schedule, &perm(&w9, PermKind::Wheel { l: 2 })).unwrap();
        let hub = route_wheel_branch(&w9, 4, WheelBranch::Hub).unwrap();
        assert!(hub.depth() <= 12);
        verify_schedule(&w9, &hub, &perm(&w9, PermKind::Wheel { l: 4 })).unwrap();
        assert!(route_wheel(&w9, 3).is_err());
    }

    fn displacement(g: &ArchGraph, p: &Permutation) -> u64 {
        let dm = g.distance_matrix();
        (0..g.n()).map(|v| dm[v][p.apply(v)] as u64).max().unwrap_or(0)
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]
        #[test]
        fn generic_routes_every_family(seed in any::<u64>(), which in 0usize..8) {
            let f = [
                Family::Path { n: 9 },
                Family::Wheel { rim: 7 },
                Family::Ladder { n: 3 },
                Family::Hypercube { d: 3 },
                Family::Butterfly { r: 2 },
                Family::Complete { n: 6 },
                Family::Grid { n: 3, d: 2 },
                Family::Grid { n: 2, d: 3 },
            ][which].clone();
            let g = gen(f);
            let p = perm(&g, PermKind::Random { seed, k: None });
            let s = route_generic(&g, &p).unwrap();
            prop_assert!(verify_schedule(&g, &s, &p).is_ok());
            prop_assert!(s.depth() <= 3 * g.n() as u64);
            prop_assert!(s.depth() >= displacement(&g, &p));
        }

        #[test]
        fn tree_depth_within_three_n(seed in any::<u64>(), n in 2usize..40, shape in any::<u64>()) {
            // random tree: vertex i attaches to a pseudo-random earlier vertex
            let edges: Vec<(usize, usize)> = (1..n).map(|i| ((shape.wrapping_mul(i as u64 + 7) >> 3) as usize % i, i)).collect();
            let g = ArchGraph::from_edges(n, &edges, 6).unwrap();
            let p = perm(&g, PermKind::Random { seed, k: None });
            let s = route_tree_graph(&g, &p).unwrap();
            prop_assert!(verify_schedule(&g, &s, &p).is_ok());
            prop_assert!(s.depth() <= 3 * n as u64);
        }
    }
}
