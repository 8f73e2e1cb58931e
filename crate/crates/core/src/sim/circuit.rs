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

//! Layered Clifford circuits, the constant-depth teleportation gadget and
//! gate-level export of schedules.

use rand::{Rng, SeedableRng};
use rayon::prelude::*;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::schedule::{apply_timestep, Op, Schedule, TransferKind};
use super::state::TokenState;
use super::tableau::{Pauli, Tableau};
use crate::archgraph::ArchGraph;
use crate::error::{invalid, Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "gate", rename_all = "snake_case")]
pub enum Gate {
    H { q: usize },
    S { q: usize },
    X { q: usize },
    Z { q: usize },
    Cnot { control: usize, target: usize },
    /// Z-basis measurement into classical record `record`.
    Measure { q: usize, record: usize },
    /// X on `q` if the XOR of `records` is 1.
    ParityX { q: usize, records: Vec<usize> },
    /// Z on `q` if the XOR of `records` is 1.
    ParityZ { q: usize, records: Vec<usize> },
}

impl Gate {
    fn qubits(&self) -> Vec<usize> {
        match *self {
            Gate::H { q } | Gate::S { q } | Gate::X { q } | Gate::Z { q } => vec![q],
            Gate::Measure { q, .. } | Gate::ParityX { q, .. } | Gate::ParityZ { q, .. } => vec![q],
            Gate::Cnot { control, target } => vec![control, target],
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CliffordCircuit {
    pub num_qubits: usize,
    pub num_records: usize,
    pub layers: Vec<Vec<Gate>>,
}

/// How random measurement outcomes are chosen.
#[derive(Clone, Debug)]
pub enum Branch {
    Seeded(u64),
    /// Outcomes for the random measurements in order; missing entries are 0.
    Forced(Vec<bool>),
}

impl CliffordCircuit {
    pub fn new(num_qubits: usize) -> Self {
        CliffordCircuit { num_qubits, num_records: 0, layers: Vec::new() }
    }

    pub fn depth(&self) -> usize {
        self.layers.len()
    }

    pub fn gate_count(&self) -> usize {
        self.layers.iter().map(Vec::len).sum()
    }

    pub fn count(&self, pred: impl Fn(&Gate) -> bool) -> usize {
        self.layers.iter().flatten().filter(|g| pred(g)).count()
    }

    /// Layers are qubit-disjoint, qubits are in range and records are
    /// written once before being read.
    pub fn validate(&self) -> Result<()> {
        let mut written = vec![false; self.num_records];
        for (li, layer) in self.layers.iter().enumerate() {
            let mut used = vec![false; self.num_qubits];
            let mut new_records = Vec::new();
            for g in layer {
                for q in g.qubits() {
                    if q >= self.num_qubits {
                        return invalid(format!("layer {li}: qubit {q} out of range"));
                    }
                    if used[q] {
                        return invalid(format!("layer {li}: qubit {q} used twice"));
                    }
                    used[q] = true;
                }
                match g {
                    Gate::Measure { record, .. } => {
                        if *record >= self.num_records || written[*record] || new_records.contains(record) {
                            return invalid(format!("layer {li}: record {record} reassigned or out of range"));
                        }
                        new_records.push(*record);
                    }
                    Gate::ParityX { records, .. } | Gate::ParityZ { records, .. } => {
                        if let Some(r) = records.iter().find(|&&r| r >= self.num_records || !written[r]) {
                            return invalid(format!("layer {li}: record {r} read before assignment"));
                        }
                    }
                    _ => {}
                }
            }
            for r in new_records {
                written[r] = true;
            }
        }
        Ok(())
    }

    /// Simulate on `t`, returning the measurement record.
    pub fn run(&self, t: &mut Tableau, branch: &Branch, check_each_gate: bool) -> Result<Vec<bool>> {
        let mut records = vec![false; self.num_records];
        let mut rng = match branch {
            Branch::Seeded(s) => Some(ChaCha8Rng::seed_from_u64(*s)),
            Branch::Forced(_) => None,
        };
        let mut forced_idx = 0;
        for layer in &self.layers {
            for g in layer {
                match g {
                    Gate::H { q } => t.h(*q)?,
                    Gate::S { q } => t.s(*q)?,
                    Gate::X { q } => t.x(*q)?,
                    Gate::Z { q } => t.z(*q)?,
                    Gate::Cnot { control, target } => t.cnot(*control, *target)?,
                    Gate::Measure { q, record } => {
                        let choose = || match (&mut rng, branch) {
                            (Some(r), _) => r.random::<bool>(),
                            (None, Branch::Forced(list)) => {
                                let v = list.get(forced_idx).copied().unwrap_or(false);
                                forced_idx += 1;
                                v
                            }
                            (None, Branch::Seeded(_)) => unreachable!(),
                        };
                        let (m, _) = t.measure(*q, choose)?;
                        records[*record] = m;
                    }
                    Gate::ParityX { q, records: rs } => {
                        if rs.iter().fold(false, |a, &r| a ^ records[r]) {
                            t.x(*q)?;
                        }
                    }
                    Gate::ParityZ { q, records: rs } => {
                        if rs.iter().fold(false, |a, &r| a ^ records[r]) {
                            t.z(*q)?;
                        }
                    }
                }
                if check_each_gate {
                    t.validate()?;
                }
            }
        }
        Ok(records)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_value(self).expect("circuit json").to_string()
    }
}

/// Qubit layout of the teleportation gadget over a path with `d` edges:
/// qubit 0 is the source, qubits `1 + 2i` and `2 + 2i` hold the Bell pair of
/// edge `i`, and qubit `2d` receives the state.
pub fn emit_teleport_circuit(d: usize) -> Result<CliffordCircuit> {
    if d < 1 {
        return invalid("teleportation path needs at least one edge");
    }
    let mut c = CliffordCircuit::new(2 * d + 1);
    let a = |j: usize| 1 + j;
    c.layers.push((0..d).map(|i| Gate::H { q: a(2 * i) }).collect());
    c.layers.push((0..d).map(|i| Gate::Cnot { control: a(2 * i), target: a(2 * i + 1) }).collect());
    // Bell measurement on (source, a0) and on (a_{2j-1}, a_{2j}) at every interior vertex
    let pairs: Vec<(usize, usize)> = std::iter::once((0, a(0))).chain((1..d).map(|j| (a(2 * j - 1), a(2 * j)))).collect();
    c.layers.push(pairs.iter().map(|&(p, q)| Gate::Cnot { control: p, target: q }).collect());
    c.layers.push(pairs.iter().map(|&(p, _)| Gate::H { q: p }).collect());
    let mut measures = Vec::new();
    let (mut zs, mut xs) = (Vec::new(), Vec::new());
    for &(p, q) in &pairs {
        measures.push(Gate::Measure { q: p, record: measures.len() });
        zs.push(measures.len() - 1);
        measures.push(Gate::Measure { q, record: measures.len() });
        xs.push(measures.len() - 1);
    }
    c.num_records = measures.len();
    c.layers.push(measures);
    let dest = 2 * d;
    c.layers.push(vec![Gate::ParityX { q: dest, records: xs }]);
    c.layers.push(vec![Gate::ParityZ { q: dest, records: zs }]);
    Ok(c)
}

const EIGENSTATES: [(&str, Pauli, i8); 6] = [
    ("|0>", Pauli::Z, 1),
    ("|1>", Pauli::Z, -1),
    ("|+>", Pauli::X, 1),
    ("|->", Pauli::X, -1),
    ("|+i>", Pauli::Y, 1),
    ("|-i>", Pauli::Y, -1),
];

fn prepare(t: &mut Tableau, q: usize, pauli: Pauli, sign: i8) -> Result<()> {
    if sign < 0 {
        t.x(q)?;
    }
    match pauli {
        Pauli::Z => {}
        Pauli::X => t.h(q)?,
        Pauli::Y => {
            t.h(q)?;
            t.s(q)?;
        }
    }
    Ok(())
}

/// Branch selection for [`verify_teleportation_with`].
#[derive(Clone, Debug)]
pub struct VerifyOptions {
    pub random_branches: u64,
    pub seed: u64,
    /// Enumerate every outcome pattern when there are at most this many measurements.
    pub exhaustive_limit: usize,
    pub check_each_gate: bool,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions { random_branches: 20, seed: 0, exhaustive_limit: 10, check_each_gate: false }
    }
}

/// Checks that the gadget acts as the identity channel from qubit 0 to qubit 2d.
pub fn verify_teleportation(circuit: &CliffordCircuit, d: usize) -> Result<bool> {
    verify_teleportation_with(circuit, d, &VerifyOptions::default())
}

pub fn verify_teleportation_with(circuit: &CliffordCircuit, d: usize, opts: &VerifyOptions) -> Result<bool> {
    if circuit.num_qubits != 2 * d + 1 {
        return invalid("circuit does not match the path length");
    }
    circuit.validate()?;
    let m = circuit.num_records;
    let mut branches: Vec<Branch> = (0..opts.random_branches).map(|i| Branch::Seeded(opts.seed.wrapping_add(i))).collect();
    branches.push(Branch::Forced(vec![false; m]));
    branches.push(Branch::Forced(vec![true; m]));
    branches.push(Branch::Forced((0..m).map(|i| i % 2 == 0).collect()));
    for j in 0..m.min(8) {
        branches.push(Branch::Forced((0..m).map(|i| i == j).collect()));
    }
    if m <= opts.exhaustive_limit {
        branches.extend((0..1u64 << m).map(|mask| Branch::Forced((0..m).map(|i| mask >> i & 1 == 1).collect())));
    }
    let dest = 2 * d;
    let cases: Vec<(Pauli, i8, &Branch)> =
        EIGENSTATES.iter().flat_map(|&(_, p, s)| branches.iter().map(move |b| (p, s, b))).collect();
    let results = cases
        .par_iter()
        .map(|&(pauli, sign, b)| {
            let mut t = Tableau::new(circuit.num_qubits);
            prepare(&mut t, 0, pauli, sign)?;
            circuit.run(&mut t, b, opts.check_each_gate)?;
            Ok(t.pauli_expectation(dest, pauli)? == Some(sign))
        })
        .collect::<Result<Vec<bool>>>()?;
    Ok(results.into_iter().all(|ok| ok))
}

/// Gate-level export of a schedule. Vertex `v`, slot `s` is qubit
/// `v * (1 + budget) + s`. Swaps become three CNOTs. Each teleport transfer
/// becomes a gadget on free ancillas; measured qubits are reset to |0⟩ and
/// the received state is swapped into the destination data qubit.
pub fn emit_circuit(g: &ArchGraph, s: &Schedule) -> Result<CliffordCircuit> {
    let k = g.ancilla_budget() + 1;
    let mut c = CliffordCircuit::new(g.n() * k);
    let q = |v: usize, slot: usize| v * k + slot;
    let mut state = TokenState::initial(g.n(), g.ancilla_budget());
    for (t, ts) in s.timesteps.iter().enumerate() {
        let mut merged: Vec<Vec<Gate>> = Vec::new();
        for op in &ts.ops {
            let layers = match *op {
                Op::SwapEdge { u, v } => swap_layers(q(u, 0), q(v, 0)),
                Op::SwapLocal { v, s1, s2 } => swap_layers(q(v, s1), q(v, s2)),
                Op::TeleRound(ref round) => {
                    let mut next = vec![1usize; g.n()];
                    let mut alloc = |v: usize| -> Result<usize> {
                        while next[v] < k && state.get(v, next[v]).is_some() {
                            next[v] += 1;
                        }
                        if next[v] >= k {
                            return Err(Error::InvalidSchedule { timestep: t, op: 0, reason: format!("no free ancilla at vertex {v}") });
                        }
                        next[v] += 1;
                        Ok(q(v, next[v] - 1))
                    };
                    let mut hops: Vec<Vec<usize>> = Vec::new();
                    for tr in &round.transfers {
                        hops.push(tr.path.clone());
                        if tr.kind == TransferKind::Swap {
                            hops.push(tr.path.iter().rev().copied().collect());
                        }
                    }
                    let mut block: Vec<Vec<Gate>> = Vec::new();
                    for path in &hops {
                        // [source data, then both halves of each edge in path order]
                        let mut order = vec![q(path[0], 0)];
                        for w in path.windows(2) {
                            order.push(alloc(w[0])?);
                            order.push(alloc(w[1])?);
                        }
                        let gadget = emit_teleport_circuit(path.len() - 1)?;
                        let base = c.num_records;
                        c.num_records += gadget.num_records;
                        let mut layers = relabel(&gadget.layers, &order, base);
                        let mut reset = Vec::new();
                        for g in layers.iter().flatten() {
                            if let Gate::Measure { q, record } = *g {
                                reset.push(Gate::ParityX { q, records: vec![record] });
                            }
                        }
                        layers.push(reset);
                        let dest = *order.last().expect("gadget has a destination");
                        layers.extend(swap_layers(dest, q(*path.last().expect("nonempty"), 0)));
                        merge_layers(&mut block, layers);
                    }
                    block
                }
            };
            merge_layers(&mut merged, layers);
        }
        c.layers.extend(merged);
        apply_timestep(g, &mut state, ts, t)?;
    }
    c.validate()?;
    Ok(c)
}

fn relabel(layers: &[Vec<Gate>], order: &[usize], record_base: usize) -> Vec<Vec<Gate>> {
    let m = |q: usize| order[q];
    let rs = |r: &[usize]| r.iter().map(|x| x + record_base).collect::<Vec<_>>();
    layers
        .iter()
        .map(|l| {
            l.iter()
                .map(|g| match g {
                    Gate::H { q } => Gate::H { q: m(*q) },
                    Gate::S { q } => Gate::S { q: m(*q) },
                    Gate::X { q } => Gate::X { q: m(*q) },
                    Gate::Z { q } => Gate::Z { q: m(*q) },
                    Gate::Cnot { control, target } => Gate::Cnot { control: m(*control), target: m(*target) },
                    Gate::Measure { q, record } => Gate::Measure { q: m(*q), record: record + record_base },
                    Gate::ParityX { q, records } => Gate::ParityX { q: m(*q), records: rs(records) },
                    Gate::ParityZ { q, records } => Gate::ParityZ { q: m(*q), records: rs(records) },
                })
                .collect()
        })
        .collect()
}

fn merge_layers(into: &mut Vec<Vec<Gate>>, other: Vec<Vec<Gate>>) {
    for (i, l) in other.into_iter().enumerate() {
        if i < into.len() {
            into[i].extend(l);
        } else {
            into.push(l);
        }
    }
}

fn swap_layers(a: usize, b: usize) -> Vec<Vec<Gate>> {
    vec![
        vec![Gate::Cnot { control: a, target: b }],
        vec![Gate::Cnot { control: b, target: a }],
        vec![Gate::Cnot { control: a, target: b }],
    ]
}
