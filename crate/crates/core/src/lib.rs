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

//! Qubit routing on sparse architecture graphs.
//!
//! Three execution models are covered: plain SWAP networks, SWAP networks
//! with a few ancilla slots per vertex, and rounds of parallel teleportation
//! over Bell-pair chains. Every schedule can be replayed by the simulator in
//! [`sim`], at token level or as a stabilizer circuit.

pub mod archgraph;
pub mod bounds;
pub mod cli;
pub mod error;
pub mod sim;
pub mod sparse_router;
pub mod swap_router;
pub mod tele_router;

pub use archgraph::{ArchGraph, Family, PermKind, Permutation, Tree};
pub use error::{Error, Result};

pub use sim::{DepthModel, Op, Schedule, TeleRound, Timestep, TokenState, Transfer, TransferKind};
