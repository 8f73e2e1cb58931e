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

use crate::archgraph::Permutation;
use crate::error::{invalid, Error, Result};

pub type Token = u32;

/// Token positions: one data slot (slot 0) and `budget` ancilla slots per vertex.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TokenState {
    n: usize,
    budget: usize,
    slots: Vec<Option<Token>>,
}

impl TokenState {
    /// Token `i` in the data slot of vertex `i`, ancillas null.
    pub fn initial(n: usize, budget: usize) -> Self {
        let mut slots = vec![None; n * (budget + 1)];
        for v in 0..n {
            slots[v * (budget + 1)] = Some(v as Token);
        }
        TokenState { n, budget, slots }
    }

    /// All slots null.
    pub fn empty(n: usize, budget: usize) -> Self {
        TokenState { n, budget, slots: vec![None; n * (budget + 1)] }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn budget(&self) -> usize {
        self.budget
    }

    pub fn slots_per_vertex(&self) -> usize {
        self.budget + 1
    }

    pub(crate) fn index(&self, v: usize, s: usize) -> usize {
        v * (self.budget + 1) + s
    }

    pub fn get(&self, v: usize, s: usize) -> Option<Token> {
        self.slots[self.index(v, s)]
    }

    pub fn set(&mut self, v: usize, s: usize, t: Option<Token>) {
        let i = self.index(v, s);
        self.slots[i] = t;
    }

    pub fn data(&self, v: usize) -> Option<Token> {
        self.get(v, 0)
    }

    pub fn swap_slots(&mut self, a: (usize, usize), b: (usize, usize)) {
        let (i, j) = (self.index(a.0, a.1), self.index(b.0, b.1));
        self.slots.swap(i, j);
    }

    /// Number of occupied ancilla slots at `v`.
    pub fn ancilla_load(&self, v: usize) -> usize {
        (1..=self.budget).filter(|&s| self.get(v, s).is_some()).count()
    }

    /// Lowest-index empty ancilla slot at `v`.
    pub fn free_ancilla(&self, v: usize) -> Option<usize> {
        (1..=self.budget).find(|&s| self.get(v, s).is_none())
    }

    /// Slot `(vertex, slot)` holding token `t`.
    pub fn locate(&self, t: Token) -> Option<(usize, usize)> {
        let k = self.budget + 1;
        self.slots.iter().position(|&x| x == Some(t)).map(|i| (i / k, i % k))
    }

    /// Sorted list of all tokens present.
    pub fn tokens(&self) -> Vec<Token> {
        let mut t: Vec<Token> = self.slots.iter().flatten().copied().collect();
        t.sort_unstable();
        t
    }

    pub fn ancillas_clear(&self) -> bool {
        (0..self.n).all(|v| self.ancilla_load(v) == 0)
    }

    /// Errors if some token occupies two slots.
    pub fn check_unique(&self) -> Result<()> {
        let t = self.tokens();
        if t.windows(2).any(|w| w[0] == w[1]) {
            return invalid("token duplicated");
        }
        Ok(())
    }

    /// Data-slot contents, one entry per vertex.
    pub fn data_layer(&self) -> Vec<Option<Token>> {
        (0..self.n).map(|v| self.data(v)).collect()
    }
}

/// π with `final.data[π(i)] = initial.data[i]`. Both states must carry one
/// token per data slot and no ancilla tokens.
pub fn achieved_permutation(initial: &TokenState, fin: &TokenState) -> Result<Permutation> {
    if initial.n() != fin.n() {
        return invalid("states have different sizes");
    }
    for (name, st) in [("initial", initial), ("final", fin)] {
        if !st.ancillas_clear() {
            return Err(Error::Verification(format!("{name} state has tokens left in ancilla slots")));
        }
        st.check_unique()?;
    }
    let n = initial.n();
    let mut where_final = std::collections::HashMap::new();
    for v in 0..n {
        if let Some(t) = fin.data(v) {
            where_final.insert(t, v);
        }
    }
    let mut image = Vec::with_capacity(n);
    for v in 0..n {
        let t = initial
            .data(v)
            .ok_or_else(|| Error::Verification(format!("initial data slot {v} is null")))?;
        let w = where_final
            .get(&t)
            .ok_or_else(|| Error::Verification(format!("token {t} missing from final data layer")))?;
        image.push(*w);
    }
    Permutation::from_image(image)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn initial_layout() {
        let s = TokenState::initial(3, 2);
        assert_eq!(s.data_layer(), vec![Some(0), Some(1), Some(2)]);
        assert_eq!(s.free_ancilla(1), Some(1));
        assert!(s.ancillas_clear());
    }

    #[test]
    fn swapped_endpoints_give_transposition() {
        let a = TokenState::initial(3, 1);
        let mut b = a.clone();
        b.swap_slots((0, 0), (2, 0));
        let p = achieved_permutation(&a, &b).unwrap();
        assert_eq!(p.image(), &[2, 1, 0]);
    }

    #[test]
    fn leftover_ancilla_rejected() {
        let a = TokenState::initial(2, 1);
        let mut b = a.clone();
        b.swap_slots((0, 0), (0, 1));
        assert!(achieved_permutation(&a, &b).is_err());
    }
}
