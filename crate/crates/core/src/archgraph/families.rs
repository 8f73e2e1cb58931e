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

use super::{ArchGraph, DEFAULT_ANCILLA_BUDGET};
use crate::error::{invalid, Result};

/// Graph families with their size parameters.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum Family {
    /// Path P_n on vertices 0..n-1.
    Path { n: usize },
    /// Wheel with `rim` rim vertices 0..rim-1 and hub `rim`.
    Wheel { rim: usize },
    /// Ladder L(n): vertex index = binary address - 1.
    Ladder { n: usize },
    /// Hypercube Q_d: vertex index is the bit string.
    Hypercube { d: usize },
    /// Butterfly B_r: vertex (w, level) has index level * 2^r + w.
    Butterfly { r: usize },
    /// Complete graph K_n.
    Complete { n: usize },
    /// d-dimensional grid with side n; index = sum c_j n^j.
    Grid { n: usize, d: usize },
}

impl Family {
    /// Vertex count implied by the parameters.
    pub fn vertex_count(&self) -> usize {
        match *self {
            Family::Path { n } | Family::Complete { n } => n,
            Family::Wheel { rim } => rim + 1,
            Family::Ladder { n } => (1usize << n) - 1,
            Family::Hypercube { d } => 1usize << d,
            Family::Butterfly { r } => r << r,
            Family::Grid { n, d } => n.pow(d as u32),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Family::Path { .. } => "path",
            Family::Wheel { .. } => "wheel",
            Family::Ladder { .. } => "ladder",
            Family::Hypercube { .. } => "hypercube",
            Family::Butterfly { .. } => "butterfly",
            Family::Complete { .. } => "complete",
            Family::Grid { .. } => "grid",
        }
    }

    fn validate(&self) -> Result<()> {
        match *self {
            Family::Path { n } | Family::Complete { n } if n == 0 => invalid(format!("{} needs n >= 1", self.name())),
            Family::Wheel { rim } if rim < 3 => invalid("wheel needs a rim of at least 3 vertices"),
            Family::Ladder { n } if !(1..=24).contains(&n) => invalid("ladder needs 1 <= n <= 24"),
            Family::Hypercube { d } if d > 24 => invalid("hypercube dimension above 24"),
            Family::Butterfly { r } if !(2..=20).contains(&r) => invalid("butterfly needs 2 <= r <= 20"),
            Family::Grid { n, d } if n == 0 || d == 0 => invalid("grid needs n >= 1 and d >= 1"),
            Family::Grid { n, d } if (n as f64).powi(d as i32) > 1e7 => invalid("grid too large"),
            _ => Ok(()),
        }
    }
}

/// Build the graph of a family with default ancilla budget and canonical labels.
pub fn generate_graph(family: &Family) -> Result<ArchGraph> {
    family.validate()?;
    let n = family.vertex_count();
    let mut edges = Vec::new();
    let labels: Vec<Vec<u64>> = match *family {
        Family::Path { n } => {
            edges.extend((1..n).map(|i| (i - 1, i)));
            (0..n as u64).map(|i| vec![i]).collect()
        }
        Family::Complete { n } => {
            for u in 0..n {
                edges.extend((u + 1..n).map(|v| (u, v)));
            }
            (0..n as u64).map(|i| vec![i]).collect()
        }
        Family::Wheel { rim } => {
            for i in 0..rim {
                edges.push((i, (i + 1) % rim));
                edges.push((i, rim));
            }
            (1..=rim as u64 + 1).map(|i| vec![i]).collect()
        }
        Family::Ladder { .. } => {
            let layer = |idx: usize| usize::BITS - (idx + 1).leading_zeros();
            for u in 0..n {
                for v in u + 1..n {
                    if layer(v) - layer(u) <= 1 {
                        edges.push((u, v));
                    }
                }
            }
            (0..n)
                .map(|idx| {
                    let r = layer(idx) as u64;
                    vec![r, (idx + 1) as u64 - (1 << (r - 1)) + 1]
                })
                .collect()
        }
        Family::Hypercube { d } => {
            for u in 0..n {
                for b in 0..d {
                    let v = u ^ (1 << b);
                    if u < v {
                        edges.push((u, v));
                    }
                }
            }
            (0..n as u64).map(|i| vec![i]).collect()
        }
        Family::Butterfly { r } => {
            let width = 1usize << r;
            for level in 0..r {
                let next = (level + 1) % r;
                for w in 0..width {
                    let u = level * width + w;
                    edges.push((u, next * width + w));
                    edges.push((u, next * width + (w ^ (1 << level))));
                }
            }
            (0..n)
                .map(|i| vec![(i % width) as u64, (i / width) as u64])
                .collect()
        }
        Family::Grid { n: side, d } => {
            let mut stride = 1;
            for _ in 0..d {
                for v in 0..n {
                    if (v / stride) % side + 1 < side {
                        edges.push((v, v + stride));
                    }
                }
                stride *= side;
            }
            (0..n)
                .map(|v| {
                    let mut c = Vec::with_capacity(d);
                    let mut rest = v;
                    for _ in 0..d {
                        c.push((rest % side) as u64);
                        rest /= side;
                    }
                    c
                })
                .collect()
        }
    };
    let g = ArchGraph::from_edges_dedup(n, &edges, DEFAULT_ANCILLA_BUDGET)?;
    Ok(g.with_family(family.clone(), Some(labels)))
}
