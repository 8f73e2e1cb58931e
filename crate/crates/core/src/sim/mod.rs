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

//! Token-level execution of schedules and stabilizer-level verification.

mod circuit;
mod schedule;
mod state;
mod tableau;

pub use circuit::{
    emit_circuit, emit_teleport_circuit, verify_teleportation, verify_teleportation_with, Branch, CliffordCircuit, Gate,
    VerifyOptions,
};
pub use schedule::{
    apply_schedule, apply_timestep, execute, merge_parallel, swap_layers, DepthModel, Execution, Op, Schedule, TeleRound,
    Timestep, Transfer, TransferKind,
};
pub use state::{achieved_permutation, Token, TokenState};
pub use tableau::{Pauli, Tableau};

use crate::archgraph::{ArchGraph, Permutation};
use crate::error::{Error, Result};

/// Execute `s` from the initial state and check that it realises `perm`.
pub fn verify_schedule(g: &ArchGraph, s: &Schedule, perm: &Permutation) -> Result<Execution> {
    let init = TokenState::initial(g.n(), g.ancilla_budget());
    let ex = execute(g, &init, s)?;
    let got = achieved_permutation(&init, &ex.final_state)?;
    if &got != perm {
        return Err(Error::Verification("schedule realises a different permutation".into()));
    }
    Ok(ex)
}
