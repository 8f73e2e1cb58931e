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

use proptest::prelude::*;
use qroute::archgraph::{generate_graph, generate_permutation};
use qroute::sim::verify_schedule;
use qroute::sparse_router::sparse_route;
use qroute::swap_router::{oet_layers, route_generic, route_wheel};
use qroute::tele_router::{advantage, tele_schedule};
use qroute::{ArchGraph, Family, PermKind, Permutation};

fn bfs(g: &ArchGraph, s: usize) -> Vec<usize> {
    let mut d = vec![usize::MAX; g.n()];
    d[s] = 0;
    let mut q = VecDeque::from([s]);
    while let Some(u) = q.pop_front() {
        for &w in g.neighbors(u) {
            if d[w] == usize::MAX {
                d[w] = d[u] + 1;
                q.push_back(w);
            }
        }
    }
    d
}

fn max_displacement(g: &ArchGraph, p: &Permutation) -> usize {
    (0..g.n()).map(|v| bfs(g, v)[p.apply(v)]).max().unwrap_or(0)
}

fn families() -> impl Strategy<Value = Family> {
    prop_oneof![
        (2usize..20).prop_map(|n| Family::Path { n }),
        (3usize..12).prop_map(|rim| Family::Wheel { rim }),
        (1usize..5).prop_map(|n| Family::Ladder { n }),
        (1usize..5).prop_map(|d| Family::Hypercube { d }),
        (2usize..4).prop_map(|r| Family::Butterfly { r }),
        (1usize..9).prop_map(|n| Family::Complete { n }),
        (2usize..5, 1usize..3).prop_map(|(n, d)| Family::Grid { n, d }),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn every_router_realises_the_permutation(f in families(), seed in any::<u64>()) {
        let g = generate_graph(&f).unwrap().with_ancilla_budget(2);
        let p = generate_permutation(&PermKind::Random { seed, k: None }, &g).unwrap();
        let lb = max_displacement(&g, &p) as u64;

        let swap = route_generic(&g, &p).unwrap();
        verify_schedule(&g, &swap, &p).unwrap();
        prop_assert!(swap.depth() >= lb);
        prop_assert!(swap.depth() <= 3 * g.n() as u64);

        let sparse = sparse_route(&g, &p).unwrap();
        verify_schedule(&g, &sparse, &p).unwrap();

        let tele = tele_schedule(&g, &p).unwrap();
        verify_schedule(&g, &tele, &p).unwrap();
        prop_assert_eq!(tele.edge_swaps(), 0);
    }

    #[test]
    fn oet_sorts_any_arrangement(target in Just((0..12usize).collect::<Vec<_>>()).prop_shuffle()) {
        let n = target.len();
        let layers = oet_layers(&(0..n).collect::<Vec<_>>(), &target);
        prop_assert!(layers.len() <= n);
        let mut at: Vec<usize> = (0..n).collect();
        for layer in &layers {
            for &(a, b) in layer {
                prop_assert_eq!(b, a + 1);
                at.swap(a, b);
            }
        }
        for (pos, &tok) in at.iter().enumerate() {
            prop_assert_eq!(target[tok], pos);
        }
    }
}

#[test]
fn identity_costs_nothing() {
    for f in [Family::Hypercube { d: 3 }, Family::Ladder { n: 3 }, Family::Grid { n: 3, d: 2 }] {
        let g = generate_graph(&f).unwrap();
        let id = Permutation::identity(g.n());
        assert_eq!(route_generic(&g, &id).unwrap().depth(), 0);
        assert_eq!(tele_schedule(&g, &id).unwrap().tele_rounds(), 0);
        let a = advantage(&g, &id).unwrap();
        assert_eq!(a.ratio_f64, 1.0);
    }
}

#[test]
fn adjacent_transposition_is_one_swap() {
    let g = generate_graph(&Family::Path { n: 7 }).unwrap();
    let p = Permutation::from_transpositions(7, &[(3, 4)]).unwrap();
    let s = route_generic(&g, &p).unwrap();
    assert_eq!(s.depth(), 1);
    assert_eq!(s.edge_swaps(), 1);
}

#[test]
fn wheel_routing_meets_displacement_bound() {
    for (rim, l) in [(8, 2), (8, 4), (16, 2), (16, 4), (12, 3)] {
        let g = generate_graph(&Family::Wheel { rim }).unwrap();
        let p = generate_permutation(&PermKind::Wheel { l }, &g).unwrap();
        let w = route_wheel(&g, l).unwrap();
        verify_schedule(&g, &w.schedule, &p).unwrap();
        assert!(w.schedule.depth() >= max_displacement(&g, &p) as u64, "rim {rim} l {l}");
        assert_eq!(w.schedule.depth(), w.hub_depth.min(w.rim_depth));
    }
}

#[test]
fn sparse_depth_scales_with_diameter_not_size() {
    let g = generate_graph(&Family::Grid { n: 12, d: 2 }).unwrap().with_ancilla_budget(2);
    let p = generate_permutation(&PermKind::Random { seed: 11, k: Some(3) }, &g).unwrap();
    let s = sparse_route(&g, &p).unwrap();
    verify_schedule(&g, &s, &p).unwrap();
    let diam = g.diameter().unwrap() as u64;
    assert!(s.depth() <= 20 * (diam + 3));
}
