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

//! Acceptance suite. Prints one PASS/FAIL line per criterion; run with
//! `cargo test --test acceptance -- --nocapture` to see them.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::sync::Mutex;
use std::time::{Duration, Instant};

use qroute::archgraph::{generate_graph, generate_permutation, ArchGraph, Family, PermKind, Permutation};
use qroute::bounds::{
    cut_ratio, diam_expansion_rhs, hamming_ball_segment, butterfly_bit_fixing_cut, vertex_expansion_exact, Rational,
};
use qroute::sim::{
    apply_timestep, emit_teleport_circuit, verify_schedule, verify_teleportation, Gate, Op, Schedule, TeleRound,
    Timestep, TokenState,
};
use qroute::sparse_router::{advance_train, sparse_route_report, Train};
use qroute::swap_router::route_wheel;
use qroute::tele_router::{best_swap_schedule, greedy_schedule, ladder_schedule, simulate_round_with_swaps, tele_schedule};

/// Every schedule produced by the suite, re-checked for token conservation.
static CORPUS: Mutex<Vec<(ArchGraph, Schedule)>> = Mutex::new(Vec::new());

fn record(g: &ArchGraph, s: &Schedule) {
    CORPUS.lock().unwrap().push((g.clone(), s.clone()));
}

fn gen(f: Family) -> ArchGraph {
    generate_graph(&f).unwrap()
}

fn perm(g: &ArchGraph, k: PermKind) -> Permutation {
    generate_permutation(&k, g).unwrap()
}

/// Outcome of one criterion: pass flag and a short measurement summary.
type Outcome = (bool, String);

fn check(ok: bool, what: impl Into<String>, failures: &mut Vec<String>) {
    if !ok {
        failures.push(what.into());
    }
}

fn finish(failures: Vec<String>, summary: String, elapsed: Duration, limit: Duration) -> Outcome {
    let mut f = failures;
    if elapsed > limit {
        f.push(format!("took {elapsed:?}, limit {limit:?}"));
    }
    if f.is_empty() {
        (true, format!("{summary} [{elapsed:.2?}]"))
    } else {
        (false, format!("{summary} [{elapsed:.2?}]; {}", f.join("; ")))
    }
}

fn c1_path_diam() -> Outcome {
    let t0 = Instant::now();
    let mut fail = Vec::new();
    let mut pts = Vec::new();
    for n in [7usize, 15, 31, 63] {
        let g = gen(Family::Path { n });
        let p = perm(&g, PermKind::Diam);
        let tele = tele_schedule(&g, &p).unwrap();
        check(tele.tele_rounds() == 1 && tele.depth() == 1, format!("P_{n}: {} teleport rounds", tele.tele_rounds()), &mut fail);
        check(verify_schedule(&g, &tele, &p).is_ok(), format!("P_{n}: teleport schedule wrong"), &mut fail);
        let (swap, _) = best_swap_schedule(&g, &p).unwrap();
        let d = swap.depth();
        check((n as u64 - 1..=3 * n as u64).contains(&d), format!("P_{n}: swap depth {d}"), &mut fail);
        check(verify_schedule(&g, &swap, &p).is_ok(), format!("P_{n}: swap schedule wrong"), &mut fail);
        record(&g, &tele);
        record(&g, &swap);
        pts.push((n as f64, d as f64 / tele.depth() as f64));
    }
    let m = pts.len() as f64;
    let (sx, sy) = pts.iter().fold((0.0, 0.0), |a, p| (a.0 + p.0, a.1 + p.1));
    let (mx, my) = (sx / m, sy / m);
    let slope = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum::<f64>() / pts.iter().map(|p| (p.0 - mx).powi(2)).sum::<f64>();
    for w in pts.windows(2) {
        let s = (w[1].1 - w[0].1) / (w[1].0 - w[0].0);
        check((s - slope).abs() <= 0.25 * slope, format!("segment slope {s:.3} vs fit {slope:.3}"), &mut fail);
    }
    let summary = format!(
        "advantage {:?}, fitted slope {slope:.3}",
        pts.iter().map(|p| p.1).collect::<Vec<_>>()
    );
    finish(fail, summary, t0.elapsed(), Duration::from_secs(1))
}

fn c2_rainbow() -> Outcome {
    let t0 = Instant::now();
    let mut fail = Vec::new();
    let g = gen(Family::Path { n: 256 });
    let budget = g.ancilla_budget();
    let mut seen = Vec::new();
    for alpha in [0.25, 0.5, 0.75] {
        let p = perm(&g, PermKind::Rainbow { alpha });
        let pairs = p.support().len() / 2;
        let s = greedy_schedule(&g, &p, budget).unwrap();
        let rounds = s.tele_rounds();
        let ratio = rounds as f64 / pairs as f64;
        let lo = 1.0 / (budget / 2) as f64;
        check((lo..=1.0).contains(&ratio), format!("alpha {alpha}: {rounds} rounds for {pairs} pairs"), &mut fail);
        check(verify_schedule(&g, &s, &p).is_ok(), format!("alpha {alpha}: schedule wrong"), &mut fail);
        record(&g, &s);
        seen.push(format!("{alpha}:{rounds}/{pairs}"));
    }
    finish(fail, format!("rounds/pairs {}", seen.join(" ")), t0.elapsed(), Duration::from_secs(5))
}

fn c3_wheel() -> Outcome {
    let t0 = Instant::now();
    let mut fail = Vec::new();
    let mut seen = Vec::new();
    for n in [9usize, 17] {
        let g = gen(Family::Wheel { rim: n - 1 });
        for l in [2usize, 4] {
            let p = perm(&g, PermKind::Wheel { l });
            let tele = tele_schedule(&g, &p).unwrap();
            check(tele.tele_rounds() == 1, format!("W_{n} l={l}: {} rounds", tele.tele_rounds()), &mut fail);
            check(verify_schedule(&g, &tele, &p).is_ok(), format!("W_{n} l={l}: teleport wrong"), &mut fail);
            let (swap, method) = best_swap_schedule(&g, &p).unwrap();
            let cap = 3.0 * (l as f64).min(n as f64 / l as f64) + 2.0;
            check(swap.depth() as f64 <= cap, format!("W_{n} l={l}: swap depth {} > {cap}", swap.depth()), &mut fail);
            check(verify_schedule(&g, &swap, &p).is_ok(), format!("W_{n} l={l}: swap wrong"), &mut fail);
            let floor = route_wheel(&g, l).unwrap().optimum_floor;
            record(&g, &tele);
            record(&g, &swap);
            seen.push(format!("W_{n} l={l}: swap {} ({method}), floor {floor}", swap.depth()));
        }
    }
    finish(fail, seen.join(", "), t0.elapsed(), Duration::from_secs(1))
}

fn c4_ladder() -> Outcome {
    let t0 = Instant::now();
    let mut fail = Vec::new();
    let (mut inc, mut load) = (0, 0);
    for n in [3usize, 4, 5] {
        let g = gen(Family::Ladder { n });
        for seed in 0..100 {
            let p = perm(&g, PermKind::Random { seed, k: None });
            let r = ladder_schedule(&g, &p).unwrap();
            inc = inc.max(r.max_incidence);
            load = load.max(r.max_load);
            check(r.schedule.tele_rounds() == 1, format!("L({n}) seed {seed}: rounds"), &mut fail);
            check(r.max_incidence <= 4 && r.max_load <= 6, format!("L({n}) seed {seed}: congestion"), &mut fail);
            match verify_schedule(&g, &r.schedule, &p) {
                Ok(ex) => check(ex.max_bell_load <= 6, format!("L({n}) seed {seed}: executed load"), &mut fail),
                Err(e) => check(false, format!("L({n}) seed {seed}: {e}"), &mut fail),
            }
            record(&g, &r.schedule);
        }
    }
    finish(fail, format!("max incidence {inc}, max load {load}"), t0.elapsed(), Duration::from_secs(10))
}

fn c5_sparse() -> Outcome {
    let t0 = Instant::now();
    let mut fail = Vec::new();
    let mut worst: f64 = 0.0;
    for side in [5usize, 7] {
        let g = gen(Family::Grid { n: side, d: 2 });
        let diam = g.diameter().unwrap() as u64;
        for k in [2usize, 4, 8] {
            for seed in 0..5 {
                let p = perm(&g, PermKind::Random { seed, k: Some(k) });
                let r = sparse_route_report(&g, &p).unwrap();
                let d = r.schedule.depth();
                worst = worst.max(d as f64 / (diam + k as u64) as f64);
                check(d <= 20 * (diam + k as u64), format!("{side}x{side} k={k} seed {seed}: depth {d}"), &mut fail);
                check(verify_schedule(&g, &r.schedule, &p).is_ok(), format!("{side}x{side} k={k}: wrong"), &mut fail);
                record(&g, &r.schedule);
            }
        }
    }
    let path = gen(Family::Path { n: 12 });
    for l in 1..=8 {
        let mut st = TokenState::empty(path.n(), path.ancilla_budget());
        for v in 0..l {
            st.set(v, 0, Some(v as u32));
        }
        let (_, ts) = advance_train(&path, &st, &Train::new((0..l).collect(), 11)).unwrap();
        check(ts.len() == 5, format!("train of length {l}: {} timesteps", ts.len()), &mut fail);
    }
    finish(fail, format!("max depth/(diam+k) {worst:.2}"), t0.elapsed(), Duration::from_secs(10))
}

fn small_instances() -> Vec<Family> {
    let mut f = Vec::new();
    for n in 2..=20 {
        f.push(Family::Path { n });
        f.push(Family::Complete { n });
        f.push(Family::Grid { n, d: 1 });
    }
    for rim in 3..=19 {
        f.push(Family::Wheel { rim });
    }
    for n in 2..=4 {
        f.push(Family::Ladder { n });
    }
    for d in 1..=4 {
        f.push(Family::Hypercube { d });
    }
    f.push(Family::Butterfly { r: 2 });
    for n in 2..=4 {
        f.push(Family::Grid { n, d: 2 });
    }
    f.push(Family::Grid { n: 2, d: 3 });
    f.push(Family::Grid { n: 2, d: 4 });
    f
}

fn c6_diam_expansion() -> Outcome {
    let t0 = Instant::now();
    let mut fail = Vec::new();
    let fams = small_instances();
    for f in &fams {
        let g = gen(f.clone());
        let c = vertex_expansion_exact(&g).unwrap().value;
        let rhs = diam_expansion_rhs(g.n(), c).unwrap();
        let diam = g.diameter().unwrap() as f64;
        check(diam <= rhs + 1e-9, format!("{f:?}: diam {diam} > {rhs:.4}"), &mut fail);
    }
    finish(fail, format!("{} instances", fams.len()), t0.elapsed(), Duration::from_secs(60))
}

/// Minimum cut ratio by direct enumeration, boundary counted from scratch.
fn brute_expansion(g: &ArchGraph) -> Rational {
    let n = g.n();
    let mut best: Option<Rational> = None;
    for mask in 1u64..(1 << n) - 1 {
        let inside = |v: usize| mask >> v & 1 == 1;
        let size = mask.count_ones() as u64;
        let boundary = (0..n).filter(|&v| !inside(v) && g.neighbors(v).iter().any(|&w| inside(w))).count() as u64;
        let r = Rational::new(boundary, size.min(n as u64 - size));
        if best.is_none_or(|b| r < b) {
            best = Some(r);
        }
    }
    best.unwrap()
}

fn c7_expansion_values() -> Outcome {
    let t0 = Instant::now();
    let mut fail = Vec::new();
    let bf = gen(Family::Butterfly { r: 3 });
    let exact = vertex_expansion_exact(&bf).unwrap().value;
    let two_thirds = Rational::new(2, 3);
    check(exact <= two_thirds, format!("butterfly exact c {exact} > 2/3"), &mut fail);
    let cut = butterfly_bit_fixing_cut(3, 0);
    let bit = cut_ratio(&bf, &cut).unwrap();
    check(bit == two_thirds, format!("bit-fixing cut ratio {bit}"), &mut fail);
    let mut seen = vec![format!("butterfly c={exact}")];
    for d in [3usize, 4] {
        let q = gen(Family::Hypercube { d });
        let exact = vertex_expansion_exact(&q).unwrap().value;
        let brute = brute_expansion(&q);
        check(exact == brute, format!("Q_{d}: exact {exact} vs brute {brute}"), &mut fail);
        let ball = (1..1usize << d).any(|size| cut_ratio(&q, &hamming_ball_segment(d, size)).unwrap() == brute);
        check(ball, format!("Q_{d}: no Hamming-ball cut attains {brute}"), &mut fail);
        seen.push(format!("Q_{d} c={exact}"));
    }
    finish(fail, seen.join(", "), t0.elapsed(), Duration::from_secs(60))
}

fn quantum_layers(layers: &[Vec<Gate>]) -> usize {
    layers
        .iter()
        .filter(|l| l.iter().any(|g| matches!(g, Gate::H { .. } | Gate::S { .. } | Gate::Cnot { .. })))
        .count()
}

fn c8_teleport_circuit() -> Outcome {
    let t0 = Instant::now();
    let mut fail = Vec::new();
    let mut depths = std::collections::BTreeSet::new();
    let mut qlayers = std::collections::BTreeSet::new();
    for d in 1..=64 {
        let c = emit_teleport_circuit(d).unwrap();
        check(verify_teleportation(&c, d).unwrap(), format!("d={d} fails"), &mut fail);
        depths.insert(c.depth());
        qlayers.insert(quantum_layers(&c.layers));
    }
    check(depths.len() == 1 && qlayers.len() == 1, format!("depths {depths:?}, quantum layers {qlayers:?}"), &mut fail);
    let mut mutant = emit_teleport_circuit(5).unwrap();
    for l in &mut mutant.layers {
        l.retain(|g| !matches!(g, Gate::ParityZ { .. }));
    }
    check(!verify_teleportation(&mutant, 5).unwrap(), "mutant without Z correction passes", &mut fail);
    let summary = format!("depth {depths:?}, quantum layers {qlayers:?}");
    finish(fail, summary, t0.elapsed(), Duration::from_secs(5))
}

fn c9_swap_simulation() -> Outcome {
    let t0 = Instant::now();
    let mut fail = Vec::new();
    let g = gen(Family::Grid { n: 8, d: 2 });
    let n = g.n() as f64;
    let cap = 20.0 * (n.sqrt() + g.diameter().unwrap() as f64);
    let init = TokenState::initial(g.n(), g.ancilla_budget());
    let mut rounds = 0;
    let mut seed = 0;
    let mut worst = 0;
    let mut strategies = std::collections::BTreeMap::new();
    while rounds < 50 && seed < 1000 {
        let p = perm(&g, PermKind::Random { seed, k: None });
        seed += 1;
        let s = greedy_schedule(&g, &p, g.ancilla_budget()).unwrap();
        let Some(Op::TeleRound(round)) = s.timesteps.first().and_then(|t| t.ops.first()) else { continue };
        let round: TeleRound = round.clone();
        let mut after = init.clone();
        if apply_timestep(&g, &mut after, &Timestep::new(vec![Op::TeleRound(round.clone())]), 0).is_err() {
            continue;
        }
        rounds += 1;
        let expected = qroute::sim::achieved_permutation(&init, &after).unwrap();
        let sim = simulate_round_with_swaps(&g, &round).unwrap();
        check(sim.permutation == expected, format!("seed {seed}: round permutation differs"), &mut fail);
        check(verify_schedule(&g, &sim.schedule, &expected).is_ok(), format!("seed {seed}: swaps wrong"), &mut fail);
        let d = sim.schedule.depth();
        worst = worst.max(d);
        check(d as f64 <= cap, format!("seed {seed}: depth {d} > {cap}"), &mut fail);
        *strategies.entry(format!("{:?}", sim.strategy)).or_insert(0) += 1;
        record(&g, &sim.schedule);
    }
    check(rounds == 50, format!("only {rounds} rounds generated"), &mut fail);
    finish(fail, format!("{rounds} rounds, max depth {worst}, strategies {strategies:?}"), t0.elapsed(), Duration::from_secs(10))
}

/// Conservation re-checked one timestep at a time, independently of `execute`.
fn c10_conservation() -> Outcome {
    let t0 = Instant::now();
    let corpus = CORPUS.lock().unwrap();
    let mut violations = 0;
    let mut steps = 0;
    for (g, s) in corpus.iter() {
        let mut st = TokenState::initial(g.n(), g.ancilla_budget());
        let reference = st.tokens();
        for (t, ts) in s.timesteps.iter().enumerate() {
            steps += 1;
            if apply_timestep(g, &mut st, ts, t).is_err() || st.tokens() != reference || st.check_unique().is_err() {
                violations += 1;
                break;
            }
        }
    }
    let fail = if violations == 0 && !corpus.is_empty() {
        Vec::new()
    } else {
        vec![format!("{violations} violations")]
    };
    finish(fail, format!("{} schedules, {steps} timesteps, {violations} violations", corpus.len()), t0.elapsed(), Duration::from_secs(60))
}

fn main() {
    type Criterion = (&'static str, fn() -> Outcome);
    let criteria: [Criterion; 10] = [
        ("teleportation vs diameter on paths", c1_path_diam),
        ("rainbow round scaling", c2_rainbow),
        ("wheel exchanges", c3_wheel),
        ("ladder single round", c4_ladder),
        ("sparse routing on grids", c5_sparse),
        ("diameter-expansion trade-off", c6_diam_expansion),
        ("expansion values and witnesses", c7_expansion_values),
        ("teleportation circuit verification", c8_teleport_circuit),
        ("swap simulation of teleport rounds", c9_swap_simulation),
        ("token conservation", c10_conservation),
    ];
    let mut passed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let (ok, detail) = match catch_unwind(AssertUnwindSafe(f)) {
            Ok(o) => o,
            Err(e) => {
                let msg = e
                    .downcast_ref::<String>()
                    .cloned()
                    .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                    .unwrap_or_default();
                (false, format!("panicked: {msg}"))
            }
        };
        passed += ok as usize;
        println!("criterion {:>2} {}: {name}: {detail}", i + 1, if ok { "PASS" } else { "FAIL" });
    }
    println!("{passed}/{} criteria passed", criteria.len());
    if passed != criteria.len() {
        std::process::exit(1);
    }
}
