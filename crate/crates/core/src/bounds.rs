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

//! Vertex expansion, routing-time lower bounds and spectral quantities.
//!
//! Logarithms are base 2 throughout.

use nalgebra::{DMatrix, SymmetricEigen};
use num_rational::Ratio;
use rayon::prelude::*;
use serde::{Deserialize, Serialize, Serializer};

use crate::archgraph::{ArchGraph, Family};
use crate::error::{invalid, Error, Result};

/// Exact non-negative rational.
pub type Rational = Ratio<u64>;

/// Largest graph accepted by [`vertex_expansion_exact`].
pub const EXACT_EXPANSION_LIMIT: usize = 24;

/// Largest graph for which the dense Laplacian is diagonalised.
pub const SPECTRAL_LIMIT: usize = 1024;

/// `{"num": .., "den": ..}` form of a rational.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RationalJson {
    pub num: u64,
    pub den: u64,
}

impl From<Rational> for RationalJson {
    fn from(r: Rational) -> Self {
        RationalJson { num: *r.numer(), den: *r.denom() }
    }
}

fn ser_rational<S: Serializer>(r: &Rational, s: S) -> std::result::Result<S::Ok, S::Error> {
    RationalJson::from(*r).serialize(s)
}

/// Incremental bookkeeping of |δX| and |δX̄| while X changes one vertex at a time.
struct BoundaryTracker<'a> {
    g: &'a ArchGraph,
    in_x: Vec<bool>,
    cnt: Vec<u32>,
    size: usize,
    bd_out: usize,
    bd_in: usize,
}

impl<'a> BoundaryTracker<'a> {
    fn new(g: &'a ArchGraph) -> Self {
        BoundaryTracker { g, in_x: vec![false; g.n()], cnt: vec![0; g.n()], size: 0, bd_out: 0, bd_in: 0 }
    }

    fn add(&mut self, b: usize) {
        debug_assert!(!self.in_x[b]);
        if self.cnt[b] > 0 {
            self.bd_out -= 1;
        }
        self.in_x[b] = true;
        self.size += 1;
        if (self.cnt[b] as usize) < self.g.degree(b) {
            self.bd_in += 1;
        }
        for &u in self.g.neighbors(b) {
            self.cnt[u] += 1;
            if self.in_x[u] {
                if self.cnt[u] as usize == self.g.degree(u) {
                    self.bd_in -= 1;
                }
            } else if self.cnt[u] == 1 {
                self.bd_out += 1;
            }
        }
    }

    fn remove(&mut self, b: usize) {
        debug_assert!(self.in_x[b]);
        if (self.cnt[b] as usize) < self.g.degree(b) {
            self.bd_in -= 1;
        }
        self.in_x[b] = false;
        self.size -= 1;
        if self.cnt[b] > 0 {
            self.bd_out += 1;
        }
        for &u in self.g.neighbors(b) {
            if self.in_x[u] {
                if self.cnt[u] as usize == self.g.degree(u) {
                    self.bd_in += 1;
                }
            } else if self.cnt[u] == 1 {
                self.bd_out -= 1;
            }
            self.cnt[u] -= 1;
        }
    }

    fn toggle(&mut self, b: usize) {
        if self.in_x[b] {
            self.remove(b)
        } else {
            self.add(b)
        }
    }

    /// Ratios for X and for its complement, as (numerator, denominator).
    fn ratios(&self) -> [(u64, u64); 2] {
        let m = self.size.min(self.g.n() - self.size) as u64;
        [(self.bd_out as u64, m), (self.bd_in as u64, m)]
    }
}

fn less(a: (u64, u64), b: (u64, u64)) -> bool {
    (a.0 as u128) * (b.1 as u128) < (b.0 as u128) * (a.1 as u128)
}

/// Exact vertex expansion with an argmin cut.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ExpansionResult {
    #[serde(serialize_with = "ser_rational")]
    pub value: Rational,
    pub witness: Vec<usize>,
}

#[derive(Clone, Copy)]
struct Best {
    ratio: (u64, u64),
    code: u64,
    complement: bool,
}

fn better(a: Option<Best>, b: Option<Best>) -> Option<Best> {
    match (a, b) {
        (Some(x), Some(y)) => Some(if less(y.ratio, x.ratio) { y } else { x }),
        (x, None) => x,
        (None, y) => y,
    }
}

/// Exact c(G) by exhaustive enumeration of cuts. Limited to
/// [`EXACT_EXPANSION_LIMIT`] vertices; use [`vertex_expansion_bounds`] beyond.
pub fn vertex_expansion_exact(g: &ArchGraph) -> Result<ExpansionResult> {
    let n = g.n();
    if n > EXACT_EXPANSION_LIMIT {
        return Err(Error::Capacity {
            what: "exact vertex expansion (use vertex_expansion_bounds)".into(),
            n,
            max: EXACT_EXPANSION_LIMIT,
        });
    }
    if n < 2 {
        return invalid("vertex expansion needs at least two vertices");
    }
    // X ranges over nonempty subsets of the first n-1 vertices; each cut is
    // also scored through its complement, so every proper subset is seen.
    let m = n - 1;
    let total: u64 = 1 << m;
    let chunks: u64 = if m >= 12 { 256 } else { 1 };
    let step = total.div_ceil(chunks);
    let best = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let lo = (c * step).max(1);
            let hi = ((c + 1) * step).min(total);
            scan_range(g, lo, hi)
        })
        .collect::<Vec<_>>()
        .into_iter()
        .fold(None, better)
        .expect("at least one cut");
    let mut witness: Vec<usize> = (0..n)
        .filter(|&v| {
            let inside = v < m && (best.code >> v) & 1 == 1;
            inside != best.complement
        })
        .collect();
    witness.sort_unstable();
    Ok(ExpansionResult { value: Rational::new(best.ratio.0, best.ratio.1), witness })
}

fn scan_range(g: &ArchGraph, lo: u64, hi: u64) -> Option<Best> {
    if lo >= hi {
        return None;
    }
    let mut t = BoundaryTracker::new(g);
    let start = lo ^ (lo >> 1);
    for v in 0..g.n() - 1 {
        if (start >> v) & 1 == 1 {
            t.add(v);
        }
    }
    let mut best: Option<Best> = None;
    let mut code = start;
    let mut i = lo;
    loop {
        for (k, r) in t.ratios().into_iter().enumerate() {
            if best.is_none_or(|b| less(r, b.ratio)) {
                best = Some(Best { ratio: r, code, complement: k == 1 });
            }
        }
        i += 1;
        if i >= hi {
            break;
        }
        let bit = i.trailing_zeros() as usize;
        t.toggle(bit);
        code ^= 1 << bit;
    }
    best
}

/// |δX| / min{|X|, |X̄|} for an explicit cut.
pub fn cut_ratio(g: &ArchGraph, x: &[usize]) -> Result<Rational> {
    let mut inside = vec![false; g.n()];
    for &v in x {
        g.check_vertex(v)?;
        inside[v] = true;
    }
    let size = inside.iter().filter(|&&b| b).count();
    if size == 0 || size == g.n() {
        return invalid("cut must be a nonempty proper subset");
    }
    let members: Vec<usize> = (0..g.n()).filter(|&v| inside[v]).collect();
    let boundary = g.vertex_boundary(&members)?.len() as u64;
    Ok(Rational::new(boundary, size.min(g.n() - size) as u64))
}

/// Upper/lower bounds on c(G).
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ExpansionBounds {
    #[serde(serialize_with = "ser_rational")]
    pub lower: Rational,
    #[serde(serialize_with = "ser_rational")]
    pub upper: Rational,
    pub exact: bool,
    /// Cut attaining `upper`, if any.
    pub witness: Option<Vec<usize>>,
    /// Which construction produced the witness.
    pub witness_kind: String,
}

/// A named candidate cut.
#[derive(Clone, Debug, PartialEq)]
pub struct WitnessCut {
    pub kind: &'static str,
    pub cut: Vec<usize>,
    pub ratio: Rational,
}

/// Scores each prefix of `order` listed in `lengths` (or every prefix when
/// `lengths` is `None`) as a cut and as its complement; returns the best.
fn best_prefix_cut(g: &ArchGraph, order: &[usize], lengths: Option<&[usize]>, kind: &'static str) -> Option<WitnessCut> {
    let n = g.n();
    let mut t = BoundaryTracker::new(g);
    let mut best: Option<((u64, u64), usize, bool)> = None;
    for (i, &v) in order.iter().enumerate() {
        t.add(v);
        let len = i + 1;
        if len >= n {
            break;
        }
        if lengths.is_some_and(|l| !l.contains(&len)) {
            continue;
        }
        for (k, r) in t.ratios().into_iter().enumerate() {
            if best.is_none_or(|b| less(r, b.0)) {
                best = Some((r, len, k == 1));
            }
        }
    }
    best.map(|(r, len, comp)| {
        let mut cut: Vec<usize> = if comp {
            let mut inside = vec![false; n];
            order[..len].iter().for_each(|&v| inside[v] = true);
            (0..n).filter(|&v| !inside[v]).collect()
        } else {
            order[..len].to_vec()
        };
        cut.sort_unstable();
        WitnessCut { kind, cut, ratio: Rational::new(r.0, r.1) }
    })
}

/// Vertices of Q_d in simplicial order: by Hamming weight, then by the
/// lowest differing bit (the set containing it first).
pub fn simplicial_order(d: usize) -> Vec<usize> {
    let mut v: Vec<usize> = (0..1usize << d).collect();
    v.sort_by(|&a, &b| {
        a.count_ones().cmp(&b.count_ones()).then_with(|| {
            if a == b {
                std::cmp::Ordering::Equal
            } else {
                let low = (a ^ b).trailing_zeros();
                if (a >> low) & 1 == 1 {
                    std::cmp::Ordering::Less
                } else {
                    std::cmp::Ordering::Greater
                }
            }
        })
    });
    v
}

/// Initial segment of the simplicial order of size `size` (a Hamming ball
/// around 0 plus a prefix of the next sphere).
pub fn hamming_ball_segment(d: usize, size: usize) -> Vec<usize> {
    let mut seg = simplicial_order(d);
    seg.truncate(size);
    seg.sort_unstable();
    seg
}

/// Rows of the butterfly whose word has bit `j` equal to 0.
pub fn butterfly_bit_fixing_cut(r: usize, j: usize) -> Vec<usize> {
    let width = 1usize << r;
    (0..r * width).filter(|&v| (v % width) >> j & 1 == 0).collect()
}

/// Structural witness cut for a known family.
pub fn family_witness(g: &ArchGraph) -> Option<WitnessCut> {
    let n = g.n();
    if n < 2 {
        return None;
    }
    match *g.family()? {
        Family::Grid { n: side, .. } => {
            let mut order: Vec<usize> = (0..n).collect();
            order.sort_by_key(|&v| (v % side, v));
            let lengths: Vec<usize> = (1..side).map(|p| p * (n / side)).collect();
            best_prefix_cut(g, &order, Some(&lengths), "hyperplane")
        }
        Family::Hypercube { d } => best_prefix_cut(g, &simplicial_order(d), None, "hamming_ball"),
        Family::Butterfly { r } => {
            let cut = butterfly_bit_fixing_cut(r, 0);
            let ratio = cut_ratio(g, &cut).ok()?;
            Some(WitnessCut { kind: "bit_fixing", cut, ratio })
        }
        Family::Path { .. } => {
            let order: Vec<usize> = (0..n).collect();
            best_prefix_cut(g, &order, Some(&[n / 2]), "prefix")
        }
        Family::Wheel { rim } => {
            let order: Vec<usize> = (0..rim).collect();
            best_prefix_cut(g, &order, Some(&[rim / 2]), "half_rim")
        }
        Family::Ladder { n: layers } => {
            if layers < 2 {
                return None;
            }
            let last = (1usize << (layers - 1)) - 1;
            let cut: Vec<usize> = (last..n).collect();
            let ratio = cut_ratio(g, &cut).ok()?;
            Some(WitnessCut { kind: "last_layer", cut, ratio })
        }
        Family::Complete { .. } => {
            let cut = vec![0];
            let ratio = cut_ratio(g, &cut).ok()?;
            Some(WitnessCut { kind: "singleton", cut, ratio })
        }
    }
}

/// Interval for c(G): family witness and generic bounds, tightened to the
/// exact value when `exhaustive` is set and the graph is small enough.
pub fn vertex_expansion_bounds(g: &ArchGraph, exhaustive: bool) -> Result<ExpansionBounds> {
    let n = g.n() as u64;
    if n < 2 {
        return invalid("vertex expansion needs at least two vertices");
    }
    if exhaustive && g.n() <= EXACT_EXPANSION_LIMIT {
        let ex = vertex_expansion_exact(g)?;
        return Ok(ExpansionBounds {
            lower: ex.value,
            upper: ex.value,
            exact: true,
            witness: Some(ex.witness),
            witness_kind: "exhaustive".into(),
        });
    }
    let generic_lower = Rational::new(2, n).min(Rational::from_integer(1));
    let mut out = ExpansionBounds {
        lower: generic_lower,
        upper: Rational::from_integer(1),
        exact: false,
        witness: None,
        witness_kind: "generic".into(),
    };
    if let Some(w) = family_witness(g) {
        if w.ratio < out.upper {
            out.upper = w.ratio;
            out.witness = Some(w.cut);
            out.witness_kind = w.kind.into();
        }
    }
    Ok(out)
}

/// Isoperimetric routing lower bound ⌈2/c − 1⌉.
pub fn iso_lower_bound(c: Rational) -> Result<u64> {
    if *c.numer() == 0 {
        return invalid("expansion must be positive");
    }
    if c > Rational::from_integer(1) {
        return invalid("expansion above 1");
    }
    let (p, q) = (*c.numer(), *c.denom());
    Ok((2 * q - p).div_ceil(p))
}

/// Right-hand side 2·log(N/2)/log(1+c) + 2 of the diameter bound.
pub fn diam_expansion_rhs(n: usize, c: Rational) -> Result<f64> {
    if n < 2 {
        return invalid("need N >= 2");
    }
    if *c.numer() == 0 || c > Rational::from_integer(1) {
        return invalid("need 0 < c <= 1");
    }
    let cf = *c.numer() as f64 / *c.denom() as f64;
    Ok(2.0 * (n as f64 / 2.0).log2() / (1.0 + cf).log2() + 2.0)
}

/// BFS layer profile of a vertex.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct HorizonProfile {
    pub vertex: usize,
    /// Largest k with |D(v,k)| <= N/2.
    pub horizon: usize,
    /// |C(v,k)| for k = 0..=ecc(v).
    pub circles: Vec<usize>,
    /// |D(v,k)| for k = 0..=ecc(v).
    pub disks: Vec<usize>,
    /// Whether |C(v,k)| >= c|D(v,k-1)| for 1 <= k <= horizon+1, when c is given.
    pub circle_growth_ok: Option<bool>,
    /// Whether |D(v,k)| >= (1+c)^k for k <= horizon, when c is given.
    pub disk_growth_ok: Option<bool>,
}

pub fn horizon_profile(g: &ArchGraph, v: usize, c: Option<Rational>) -> Result<HorizonProfile> {
    g.check_vertex(v)?;
    let n = g.n();
    if n < 2 {
        return invalid("horizon needs at least two vertices");
    }
    let dist = g.bfs(v);
    let ecc = *dist.iter().max().expect("nonempty");
    if ecc == usize::MAX {
        return Err(Error::Disconnected);
    }
    let mut circles = vec![0usize; ecc + 1];
    for &d in &dist {
        circles[d] += 1;
    }
    let disks: Vec<usize> = circles
        .iter()
        .scan(0, |acc, &x| {
            *acc += x;
            Some(*acc)
        })
        .collect();
    let horizon = (0..=ecc).take_while(|&k| 2 * disks[k] <= n).last().expect("|D(v,0)| = 1 <= N/2");
    let (circle_ok, disk_ok) = match c {
        None => (None, None),
        Some(c) => {
            let (p, q) = (*c.numer() as u128, *c.denom() as u128);
            let circle = (1..=horizon + 1).all(|k| circles[k] as u128 * q >= p * disks[k - 1] as u128);
            let disk = (0..=horizon).all(|k| disk_at_least(disks[k] as u128, p, q, k));
            (Some(circle), Some(disk))
        }
    };
    Ok(HorizonProfile { vertex: v, horizon, circles, disks, circle_growth_ok: circle_ok, disk_growth_ok: disk_ok })
}

/// |D| >= ((q+p)/q)^k, exactly when it fits in 128 bits.
fn disk_at_least(d: u128, p: u128, q: u128, k: usize) -> bool {
    let mut lhs = Some(d);
    let mut rhs = Some(1u128);
    for _ in 0..k {
        lhs = lhs.and_then(|x| x.checked_mul(q));
        rhs = rhs.and_then(|x| x.checked_mul(q + p));
    }
    match (lhs, rhs) {
        (Some(a), Some(b)) => a >= b,
        _ => {
            let ratio = (q + p) as f64 / q as f64;
            d as f64 >= ratio.powi(k as i32) * (1.0 - 1e-12)
        }
    }
}

/// Laplacian-based quantities.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Spectral {
    pub lambda2: f64,
    #[serde(serialize_with = "ser_rational")]
    pub degree_ratio: Rational,
    pub expander_figure: f64,
}

pub fn spectral(g: &ArchGraph) -> Result<Spectral> {
    let n = g.n();
    if n > SPECTRAL_LIMIT {
        return Err(Error::Capacity { what: "dense Laplacian eigensolve".into(), n, max: SPECTRAL_LIMIT });
    }
    let degree_ratio = if g.min_degree() == 0 {
        Rational::from_integer(1)
    } else {
        Rational::new(g.max_degree() as u64, g.min_degree() as u64)
    };
    let lambda2 = if n < 2 {
        0.0
    } else {
        let mut lap = DMatrix::<f64>::zeros(n, n);
        for v in 0..n {
            lap[(v, v)] = g.degree(v) as f64;
            for &w in g.neighbors(v) {
                lap[(v, w)] = -1.0;
            }
        }
        let mut ev: Vec<f64> = SymmetricEigen::new(lap).eigenvalues.iter().copied().collect();
        ev.sort_by(|a, b| a.total_cmp(b));
        ev[1].max(0.0)
    };
    let d = *degree_ratio.numer() as f64 / *degree_ratio.denom() as f64;
    let log_n = (n as f64).log2();
    let expander_figure = if lambda2 > 0.0 { d * log_n * log_n / (lambda2 * lambda2) } else { f64::INFINITY };
    Ok(Spectral { lambda2, degree_ratio, expander_figure })
}

/// Unnormalised figures of merit for the teleportation advantage.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct AdvantageFigures {
    /// N·c
    pub expansion_figure: f64,
    /// √N + log(N)/c
    pub diameter_figure: f64,
    pub min: f64,
}

pub fn advantage_upper_bounds(n: usize, c: Rational) -> Result<AdvantageFigures> {
    if *c.numer() == 0 {
        return invalid("expansion must be positive");
    }
    let cf = *c.numer() as f64 / *c.denom() as f64;
    let nf = n as f64;
    let a = nf * cf;
    let b = nf.sqrt() + nf.log2() / cf;
    Ok(AdvantageFigures { expansion_figure: a, diameter_figure: b, min: a.min(b) })
}

/// Everything `bounds` reports about a graph.
#[derive(Clone, Debug, Serialize)]
pub struct BoundsReport {
    pub n: usize,
    pub c: ExpansionBounds,
    pub diam: usize,
    pub diam_lb: usize,
    pub iso_lb: u64,
    pub diam_expansion_rhs: f64,
    pub lambda2: Option<f64>,
    pub degree_ratio: Option<RationalJson>,
    pub expander_figure: Option<f64>,
    pub advantage: AdvantageFigures,
}

/// Assemble a [`BoundsReport`]. `exact` requests exhaustive expansion and
/// fails with a capacity error above [`EXACT_EXPANSION_LIMIT`] vertices.
pub fn bounds_report(g: &ArchGraph, exact: bool) -> Result<BoundsReport> {
    if exact && g.n() > EXACT_EXPANSION_LIMIT {
        return Err(Error::Capacity {
            what: "exact vertex expansion (pass --no-exact for bounds only)".into(),
            n: g.n(),
            max: EXACT_EXPANSION_LIMIT,
        });
    }
    let c = vertex_expansion_bounds(g, exact)?;
    let diam = g.diameter()?;
    // the isoperimetric bound stays valid with any upper bound on c
    let iso_lb = iso_lower_bound(c.upper)?;
    let rhs = diam_expansion_rhs(g.n(), c.lower)?;
    let spec = spectral(g).ok();
    Ok(BoundsReport {
        n: g.n(),
        diam,
        diam_lb: diam,
        iso_lb,
        diam_expansion_rhs: rhs,
        lambda2: spec.as_ref().map(|s| s.lambda2),
        degree_ratio: spec.as_ref().map(|s| s.degree_ratio.into()),
        expander_figure: spec.as_ref().map(|s| s.expander_figure),
        advantage: advantage_upper_bounds(g.n(), c.upper)?,
        c,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::archgraph::generate_graph;

    fn gen(f: Family) -> ArchGraph {
        generate_graph(&f).unwrap()
    }

    /// Direct minimum over all proper subsets, no incremental state.
    fn brute(g: &ArchGraph) -> Rational {
        let n = g.n();
        (1..(1u32 << n) - 1)
            .map(|mask| {
                let x: Vec<usize> = (0..n).filter(|&v| mask >> v & 1 == 1).collect();
                cut_ratio(g, &x).unwrap()
            })
            .min()
            .unwrap()
    }

    #[test]
    fn complete_is_one() {
        assert_eq!(vertex_expansion_exact(&gen(Family::Complete { n: 4 })).unwrap().value, Rational::from_integer(1));
    }

    #[test]
    fn p4_half_with_prefix_witness() {
        let r = vertex_expansion_exact(&gen(Family::Path { n: 4 })).unwrap();
        assert_eq!(r.value, Rational::new(1, 2));
        assert_eq!(r.witness, vec![0, 1]);
    }

    #[test]
    fn exact_matches_brute_force() {
        for f in [
            Family::Path { n: 7 },
            Family::Wheel { rim: 6 },
            Family::Ladder { n: 3 },
            Family::Hypercube { d: 3 },
            Family::Grid { n: 3, d: 2 },
            Family::Complete { n: 5 },
            Family::Butterfly { r: 2 },
        ] {
            let g = gen(f);
            let r = vertex_expansion_exact(&g).unwrap();
            assert_eq!(r.value, brute(&g));
            assert_eq!(cut_ratio(&g, &r.witness).unwrap(), r.value);
        }
    }

    #[test]
    fn capacity_error() {
        let g = gen(Family::Path { n: 25 });
        assert!(matches!(vertex_expansion_exact(&g), Err(Error::Capacity { .. })));
        assert!(matches!(bounds_report(&g, true), Err(Error::Capacity { .. })));
        assert!(bounds_report(&g, false).is_ok());
    }

    #[test]
    fn iso_values() {
        assert_eq!(iso_lower_bound(Rational::from_integer(1)).unwrap(), 1);
        assert_eq!(iso_lower_bound(Rational::new(2, 10)).unwrap(), 9);
        assert_eq!(iso_lower_bound(Rational::new(1, 2)).unwrap(), 3);
        assert!(iso_lower_bound(Rational::from_integer(0)).is_err());
    }

    #[test]
    fn rhs_values() {
        assert!((diam_expansion_rhs(2, Rational::from_integer(1)).unwrap() - 2.0).abs() < 1e-12);
        assert!((diam_expansion_rhs(16, Rational::from_integer(1)).unwrap() - 8.0).abs() < 1e-12);
        assert!(diam_expansion_rhs(1, Rational::from_integer(1)).is_err());
    }

    #[test]
    fn horizon_examples() {
        let p = horizon_profile(&gen(Family::Path { n: 7 }), 0, None).unwrap();
        assert_eq!(p.horizon, 2);
        assert_eq!(p.disks[2], 3);
        assert_eq!(p.disks[3], 4);
        let k = horizon_profile(&gen(Family::Complete { n: 4 }), 1, Some(Rational::from_integer(1))).unwrap();
        assert_eq!(k.horizon, 0);
        assert_eq!(k.disks, vec![1, 4]);
        assert_eq!(k.circle_growth_ok, Some(true));
    }

    #[test]
    fn spectral_examples() {
        let k4 = spectral(&gen(Family::Complete { n: 4 })).unwrap();
        assert!((k4.lambda2 - 4.0).abs() < 1e-9);
        let p4 = spectral(&gen(Family::Path { n: 4 })).unwrap();
        let expected = 2.0 * (1.0 - (std::f64::consts::PI / 4.0).cos());
        assert!((p4.lambda2 - expected).abs() < 1e-9);
        assert_eq!(spectral(&gen(Family::Butterfly { r: 3 })).unwrap().degree_ratio, Rational::from_integer(1));
    }

    #[test]
    fn family_upper_bounds() {
        let b = vertex_expansion_bounds(&gen(Family::Butterfly { r: 3 }), false).unwrap();
        assert_eq!(b.upper, Rational::new(2, 3));
        assert_eq!(b.witness_kind, "bit_fixing");
        let grid = vertex_expansion_bounds(&gen(Family::Grid { n: 4, d: 2 }), false).unwrap();
        assert!(grid.upper <= Rational::new(1, 2));
        let w = vertex_expansion_bounds(&gen(Family::Wheel { rim: 10 }), false).unwrap();
        assert!(w.lower >= Rational::new(2, 11) && w.upper <= Rational::from_integer(1));
    }

    #[test]
    fn simplicial_prefix() {
        assert_eq!(hamming_ball_segment(3, 4), vec![0, 1, 2, 4]);
        let o = simplicial_order(4);
        assert_eq!(&o[..8], &[0, 1, 2, 4, 8, 3, 5, 9]);
    }

    #[test]
    fn advantage_figures() {
        let a = advantage_upper_bounds(16, Rational::new(1, 8)).unwrap();
        assert!((a.expansion_figure - 2.0).abs() < 1e-12);
        let k = advantage_upper_bounds(16, Rational::from_integer(1)).unwrap();
        assert!((k.expansion_figure - 16.0).abs() < 1e-12);
        assert!((k.min - 8.0).abs() < 1e-12);
    }
}
