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

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{ArchGraph, Family};
use crate::error::{invalid, Error, Result};

/// Bijection on vertex indices, stored as its image array.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "PermJson", into = "PermJson")]
pub struct Permutation {
    image: Vec<usize>,
}

#[derive(Serialize, Deserialize)]
struct PermJson {
    image: Vec<usize>,
}

impl TryFrom<PermJson> for Permutation {
    type Error = Error;
    fn try_from(p: PermJson) -> Result<Self> {
        Permutation::from_image(p.image)
    }
}

impl From<Permutation> for PermJson {
    fn from(p: Permutation) -> Self {
        PermJson { image: p.image }
    }
}

impl Permutation {
    pub fn identity(n: usize) -> Self {
        Permutation { image: (0..n).collect() }
    }

    /// Validates that `image` is a bijection on `0..image.len()`.
    pub fn from_image(image: Vec<usize>) -> Result<Self> {
        let n = image.len();
        let mut seen = vec![false; n];
        for &x in &image {
            if x >= n {
                return Err(Error::VertexOutOfRange { vertex: x, n });
            }
            if seen[x] {
                return invalid(format!("image repeats {x}"));
            }
            seen[x] = true;
        }
        Ok(Permutation { image })
    }

    /// Product of disjoint transpositions.
    pub fn from_transpositions(n: usize, pairs: &[(usize, usize)]) -> Result<Self> {
        let mut image: Vec<usize> = (0..n).collect();
        let mut used = vec![false; n];
        for &(a, b) in pairs {
            if a >= n || b >= n {
                return Err(Error::VertexOutOfRange { vertex: a.max(b), n });
            }
            if a == b {
                continue;
            }
            if used[a] || used[b] {
                return invalid("transpositions overlap");
            }
            used[a] = true;
            used[b] = true;
            image.swap(a, b);
        }
        Ok(Permutation { image })
    }

    pub fn len(&self) -> usize {
        self.image.len()
    }

    pub fn is_empty(&self) -> bool {
        self.image.is_empty()
    }

    pub fn apply(&self, i: usize) -> usize {
        self.image[i]
    }

    pub fn image(&self) -> &[usize] {
        &self.image
    }

    pub fn inverse(&self) -> Self {
        let mut inv = vec![0; self.image.len()];
        for (i, &x) in self.image.iter().enumerate() {
            inv[x] = i;
        }
        Permutation { image: inv }
    }

    /// `self` after `first`: i -> self(first(i)).
    pub fn compose(&self, first: &Permutation) -> Self {
        Permutation { image: first.image.iter().map(|&x| self.image[x]).collect() }
    }

    /// Vertices moved by the permutation, ascending.
    pub fn support(&self) -> Vec<usize> {
        (0..self.image.len()).filter(|&i| self.image[i] != i).collect()
    }

    pub fn is_identity(&self) -> bool {
        self.image.iter().enumerate().all(|(i, &x)| i == x)
    }

    /// Non-trivial cycles, each starting at its smallest element, ordered by that element.
    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let n = self.image.len();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for s in 0..n {
            if seen[s] || self.image[s] == s {
                continue;
            }
            let mut cyc = Vec::new();
            let mut cur = s;
            while !seen[cur] {
                seen[cur] = true;
                cyc.push(cur);
                cur = self.image[cur];
            }
            out.push(cyc);
        }
        out
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("permutation json")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }
}

/// Named permutation families.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum PermKind {
    Identity,
    /// Exchange the first pair of vertices at maximum distance.
    Diam,
    /// Exchange the floor(N^alpha) outermost nested pairs (i, N-1-i).
    Rainbow { alpha: f64 },
    /// On a wheel with rim N, exchange the endpoints of each of `l` rim segments.
    Wheel { l: usize },
    /// i -> N-1-i.
    Reflection,
    /// i -> i + s mod N.
    CyclicShift { s: usize },
    /// Uniform random permutation, or a random derangement of `k` random vertices.
    Random { seed: u64, k: Option<usize> },
}

/// Instantiate a named permutation on `g`.
pub fn generate_permutation(kind: &PermKind, g: &ArchGraph) -> Result<Permutation> {
    let n = g.n();
    match *kind {
        PermKind::Identity => Ok(Permutation::identity(n)),
        PermKind::Diam => {
            let dist = g.distance_matrix();
            let mut best = (0, 0, 0);
            for (u, row) in dist.iter().enumerate() {
                for (v, &d) in row.iter().enumerate().skip(u + 1) {
                    if d > best.0 {
                        best = (d, u, v);
                    }
                }
            }
            Permutation::from_transpositions(n, &[(best.1, best.2)])
        }
        PermKind::Rainbow { alpha } => {
            if !(0.0..=1.0).contains(&alpha) {
                return invalid(format!("rainbow alpha {alpha} outside [0, 1]"));
            }
            let pairs = rainbow_pairs(n, alpha);
            let list: Vec<_> = (0..pairs).map(|i| (i, n - 1 - i)).collect();
            Permutation::from_transpositions(n, &list)
        }
        PermKind::Wheel { l } => {
            let rim = match g.family() {
                Some(Family::Wheel { rim }) => *rim,
                _ => return Err(Error::WrongFamily("wheel permutation needs a wheel graph".into())),
            };
            if l == 0 || rim % l != 0 {
                return invalid(format!("l = {l} does not divide the rim size {rim}"));
            }
            let seg = rim / l;
            if seg < 2 {
                return invalid("wheel segments must contain at least two vertices");
            }
            let list: Vec<_> = (0..l).map(|j| (j * seg, (j + 1) * seg - 1)).collect();
            Permutation::from_transpositions(n, &list)
        }
        PermKind::Reflection => Permutation::from_image((0..n).rev().collect()),
        PermKind::CyclicShift { s } => Permutation::from_image((0..n).map(|i| (i + s) % n).collect()),
        PermKind::Random { seed, k } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            match k {
                None => {
                    let mut image: Vec<usize> = (0..n).collect();
                    image.shuffle(&mut rng);
                    Permutation::from_image(image)
                }
                Some(k) => {
                    if k == 1 || k > n {
                        return invalid(format!("cannot derange {k} of {n} vertices"));
                    }
                    let mut chosen: Vec<usize> = (0..n).collect();
                    chosen.shuffle(&mut rng);
                    chosen.truncate(k);
                    chosen.sort_unstable();
                    // random derangement by rejection on the chosen set
                    let mut targets = chosen.clone();
                    loop {
                        targets.shuffle(&mut rng);
                        if targets.iter().zip(&chosen).all(|(a, b)| a != b) {
                            break;
                        }
                    }
                    let mut image: Vec<usize> = (0..n).collect();
                    for (&s, &t) in chosen.iter().zip(&targets) {
                        image[s] = t;
                    }
                    Permutation::from_image(image)
                }
            }
        }
    }
}

/// Number of exchanged pairs in the rainbow permutation on `n` vertices.
pub(crate) fn rainbow_pairs(n: usize, alpha: f64) -> usize {
    let raw = (n as f64).powf(alpha);
    ((raw + 1e-9).floor() as usize).min(n / 2)
}
