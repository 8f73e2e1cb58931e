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

//! Stabilizer tableau in the destabilizer/stabilizer form.

use crate::error::{Error, Result};

/// Single-qubit Pauli observable.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Pauli {
    X,
    Y,
    Z,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Tableau {
    n: usize,
    words: usize,
    // rows 0..n destabilizers, n..2n stabilizers, 2n scratch
    x: Vec<u64>,
    z: Vec<u64>,
    r: Vec<bool>,
}

impl Tableau {
    /// |0...0⟩ on `n` qubits.
    pub fn new(n: usize) -> Self {
        let words = n.div_ceil(64).max(1);
        let rows = 2 * n + 1;
        let mut t = Tableau { n, words, x: vec![0; rows * words], z: vec![0; rows * words], r: vec![false; rows] };
        for i in 0..n {
            t.set_x(i, i, true);
            t.set_z(n + i, i, true);
        }
        t
    }

    pub fn num_qubits(&self) -> usize {
        self.n
    }

    fn xb(&self, row: usize, q: usize) -> bool {
        self.x[row * self.words + q / 64] >> (q % 64) & 1 == 1
    }

    fn zb(&self, row: usize, q: usize) -> bool {
        self.z[row * self.words + q / 64] >> (q % 64) & 1 == 1
    }

    fn set_x(&mut self, row: usize, q: usize, v: bool) {
        let i = row * self.words + q / 64;
        let m = 1u64 << (q % 64);
        if v {
            self.x[i] |= m
        } else {
            self.x[i] &= !m
        }
    }

    fn set_z(&mut self, row: usize, q: usize, v: bool) {
        let i = row * self.words + q / 64;
        let m = 1u64 << (q % 64);
        if v {
            self.z[i] |= m
        } else {
            self.z[i] &= !m
        }
    }

    fn check(&self, q: usize) -> Result<()> {
        if q >= self.n {
            return Err(Error::InvalidParameter(format!("qubit {q} out of range")));
        }
        Ok(())
    }

    pub fn h(&mut self, q: usize) -> Result<()> {
        self.check(q)?;
        for row in 0..2 * self.n {
            let (xa, za) = (self.xb(row, q), self.zb(row, q));
            self.r[row] ^= xa & za;
            self.set_x(row, q, za);
            self.set_z(row, q, xa);
        }
        Ok(())
    }

    pub fn s(&mut self, q: usize) -> Result<()> {
        self.check(q)?;
        for row in 0..2 * self.n {
            let (xa, za) = (self.xb(row, q), self.zb(row, q));
            self.r[row] ^= xa & za;
            self.set_z(row, q, za ^ xa);
        }
        Ok(())
    }

    pub fn sdg(&mut self, q: usize) -> Result<()> {
        for _ in 0..3 {
            self.s(q)?;
        }
        Ok(())
    }

    pub fn x(&mut self, q: usize) -> Result<()> {
        self.check(q)?;
        for row in 0..2 * self.n {
            self.r[row] ^= self.zb(row, q);
        }
        Ok(())
    }

    pub fn z(&mut self, q: usize) -> Result<()> {
        self.check(q)?;
        for row in 0..2 * self.n {
            self.r[row] ^= self.xb(row, q);
        }
        Ok(())
    }

    pub fn cnot(&mut self, c: usize, t: usize) -> Result<()> {
        self.check(c)?;
        self.check(t)?;
        if c == t {
            return Err(Error::InvalidParameter("cnot control equals target".into()));
        }
        for row in 0..2 * self.n {
            let (xc, zc, xt, zt) = (self.xb(row, c), self.zb(row, c), self.xb(row, t), self.zb(row, t));
            self.r[row] ^= xc & zt & !(xt ^ zc);
            self.set_x(row, t, xt ^ xc);
            self.set_z(row, c, zc ^ zt);
        }
        Ok(())
    }

    /// Row h <- row i * row h, tracking the phase.
    fn rowsum(&mut self, h: usize, i: usize) {
        let mut sum: i64 = 2 * self.r[h] as i64 + 2 * self.r[i] as i64;
        for w in 0..self.words {
            let (x1, z1) = (self.x[i * self.words + w], self.z[i * self.words + w]);
            let (x2, z2) = (self.x[h * self.words + w], self.z[h * self.words + w]);
            let plus = (x1 & z1 & !x2 & z2) | (x1 & !z1 & x2 & z2) | (!x1 & z1 & x2 & !z2);
            let minus = (x1 & z1 & x2 & !z2) | (x1 & !z1 & !x2 & z2) | (!x1 & z1 & x2 & z2);
            sum += plus.count_ones() as i64 - minus.count_ones() as i64;
        }
        self.r[h] = sum.rem_euclid(4) == 2;
        for w in 0..self.words {
            self.x[h * self.words + w] ^= self.x[i * self.words + w];
            self.z[h * self.words + w] ^= self.z[i * self.words + w];
        }
    }

    fn clear_row(&mut self, row: usize) {
        for w in 0..self.words {
            self.x[row * self.words + w] = 0;
            self.z[row * self.words + w] = 0;
        }
        self.r[row] = false;
    }

    fn copy_row(&mut self, dst: usize, src: usize) {
        for w in 0..self.words {
            self.x[dst * self.words + w] = self.x[src * self.words + w];
            self.z[dst * self.words + w] = self.z[src * self.words + w];
        }
        self.r[dst] = self.r[src];
    }

    /// Outcome of a Z measurement if it is determined by the state.
    pub fn deterministic_outcome(&mut self, q: usize) -> Result<Option<bool>> {
        self.check(q)?;
        let n = self.n;
        if (n..2 * n).any(|p| self.xb(p, q)) {
            return Ok(None);
        }
        let scratch = 2 * n;
        self.clear_row(scratch);
        for i in 0..n {
            if self.xb(i, q) {
                self.rowsum(scratch, i + n);
            }
        }
        Ok(Some(self.r[scratch]))
    }

    /// Z measurement. `choose` supplies the outcome when it is random.
    /// Returns (outcome, was_random).
    pub fn measure(&mut self, q: usize, choose: impl FnOnce() -> bool) -> Result<(bool, bool)> {
        self.check(q)?;
        let n = self.n;
        let Some(p) = (n..2 * n).find(|&p| self.xb(p, q)) else {
            let out = self.deterministic_outcome(q)?.expect("no anticommuting stabilizer");
            return Ok((out, false));
        };
        for i in 0..2 * n {
            if i != p && self.xb(i, q) {
                self.rowsum(i, p);
            }
        }
        self.copy_row(p - n, p);
        self.clear_row(p);
        self.set_z(p, q, true);
        let outcome = choose();
        self.r[p] = outcome;
        Ok((outcome, true))
    }

    /// +1 / -1 if the state is an eigenstate of `pauli` on qubit `q`, else `None`.
    pub fn pauli_expectation(&self, q: usize, pauli: Pauli) -> Result<Option<i8>> {
        let mut t = self.clone();
        match pauli {
            Pauli::Z => {}
            Pauli::X => t.h(q)?,
            Pauli::Y => {
                t.sdg(q)?;
                t.h(q)?;
            }
        }
        Ok(t.deterministic_outcome(q)?.map(|m| if m { -1 } else { 1 }))
    }

    fn symplectic(&self, a: usize, b: usize) -> bool {
        let mut acc = 0u32;
        for w in 0..self.words {
            let (xa, za) = (self.x[a * self.words + w], self.z[a * self.words + w]);
            let (xb, zb) = (self.x[b * self.words + w], self.z[b * self.words + w]);
            acc ^= ((xa & zb) ^ (za & xb)).count_ones() & 1;
        }
        acc == 1
    }

    /// Checks that stabilizers commute and are independent, and that each
    /// destabilizer anticommutes exactly with its own stabilizer.
    pub fn validate(&self) -> Result<()> {
        let n = self.n;
        for a in 0..n {
            for b in 0..n {
                if self.symplectic(n + a, n + b) {
                    return Err(Error::Verification(format!("stabilizers {a} and {b} anticommute")));
                }
                if self.symplectic(a, n + b) != (a == b) {
                    return Err(Error::Verification(format!("destabilizer {a} vs stabilizer {b} has wrong commutation")));
                }
            }
        }
        // rank over GF(2)
        let mut rows: Vec<Vec<u64>> = (0..n)
            .map(|i| {
                let r = n + i;
                let mut v = self.x[r * self.words..(r + 1) * self.words].to_vec();
                v.extend_from_slice(&self.z[r * self.words..(r + 1) * self.words]);
                v
            })
            .collect();
        let bits = 2 * self.words * 64;
        let mut rank = 0;
        for col in 0..bits {
            let (w, m) = (col / 64, 1u64 << (col % 64));
            if let Some(piv) = (rank..n).find(|&i| rows[i][w] & m != 0) {
                rows.swap(rank, piv);
                for i in 0..n {
                    if i != rank && rows[i][w] & m != 0 {
                        let pivot = rows[rank].clone();
                        rows[i].iter_mut().zip(&pivot).for_each(|(a, b)| *a ^= b);
                    }
                }
                rank += 1;
            }
        }
        if rank != n {
            return Err(Error::Verification(format!("stabilizer rank {rank} < {n}")));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    /// Phase exponent of row i * row h, one qubit at a time.
    fn rowsum_phase_oracle(t: &Tableau, h: usize, i: usize) -> bool {
        let mut sum: i64 = 2 * t.r[h] as i64 + 2 * t.r[i] as i64;
        for q in 0..t.n {
            let (x1, z1, x2, z2) = (t.xb(i, q), t.zb(i, q), t.xb(h, q), t.zb(h, q));
            sum += match (x1, z1) {
                (false, false) => 0,
                (true, true) => z2 as i64 - x2 as i64,
                (true, false) => z2 as i64 * (2 * x2 as i64 - 1),
                (false, true) => x2 as i64 * (1 - 2 * z2 as i64),
            };
        }
        sum.rem_euclid(4) == 2
    }

    proptest! {
        #[test]
        fn rowsum_phase_matches_oracle(bits in proptest::collection::vec(any::<u64>(), 4), r in any::<(bool, bool)>(), n in 1usize..64) {
            let mut t = Tableau::new(n);
            let mask = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
            // rows 0 and 1 get arbitrary (possibly anticommuting-free) Pauli strings
            t.x[0] = bits[0] & mask;
            t.z[0] = bits[1] & mask;
            t.x[1] = bits[2] & mask;
            t.z[1] = bits[3] & mask;
            // make the pair commute by clearing one overlap bit if needed
            if t.symplectic(0, 1) {
                let overlap = (t.x[0] & t.z[1]) ^ (t.z[0] & t.x[1]);
                let q = overlap.trailing_zeros() as usize;
                t.set_x(1, q, false);
                t.set_z(1, q, false);
            }
            prop_assume!(!t.symplectic(0, 1));
            t.r[0] = r.0;
            t.r[1] = r.1;
            let want = rowsum_phase_oracle(&t, 0, 1);
            t.rowsum(0, 1);
            prop_assert_eq!(t.r[0], want);
        }
    }

    #[test]
    fn basis_states() {
        let mut t = Tableau::new(1);
        assert_eq!(t.pauli_expectation(0, Pauli::Z).unwrap(), Some(1));
        t.x(0).unwrap();
        assert_eq!(t.pauli_expectation(0, Pauli::Z).unwrap(), Some(-1));
        let mut p = Tableau::new(1);
        p.h(0).unwrap();
        assert_eq!(p.pauli_expectation(0, Pauli::X).unwrap(), Some(1));
        assert_eq!(p.pauli_expectation(0, Pauli::Z).unwrap(), None);
        p.s(0).unwrap();
        assert_eq!(p.pauli_expectation(0, Pauli::Y).unwrap(), Some(1));
    }

    #[test]
    fn bell_pair_correlations() {
        let mut t = Tableau::new(2);
        t.h(0).unwrap();
        t.cnot(0, 1).unwrap();
        let (a, random) = t.measure(0, || true).unwrap();
        assert!(random && a);
        let (b, random_b) = t.measure(1, || false).unwrap();
        assert!(!random_b);
        assert_eq!(a, b);
    }

    #[test]
    fn deterministic_measurement_repeats() {
        let mut t = Tableau::new(1);
        t.h(0).unwrap();
        let (first, _) = t.measure(0, || true).unwrap();
        let (second, random) = t.measure(0, || false).unwrap();
        assert!(!random);
        assert_eq!(first, second);
    }

    #[derive(Debug, Clone)]
    enum G {
        H(usize),
        S(usize),
        Cx(usize, usize),
        M(usize, bool),
    }

    fn gate(n: usize) -> impl Strategy<Value = G> {
        prop_oneof![
            (0..n).prop_map(G::H),
            (0..n).prop_map(G::S),
            (0..n, 1..n).prop_map(move |(a, d)| G::Cx(a, (a + d) % n)),
            (0..n, any::<bool>()).prop_map(|(q, b)| G::M(q, b)),
        ]
    }

    proptest! {
        #[test]
        fn random_circuits_keep_invariants(gates in proptest::collection::vec(gate(5), 1..60)) {
            let mut t = Tableau::new(5);
            for g in gates {
                match g {
                    G::H(q) => t.h(q).unwrap(),
                    G::S(q) => t.s(q).unwrap(),
                    G::Cx(a, b) => t.cnot(a, b).unwrap(),
                    G::M(q, b) => { t.measure(q, || b).unwrap(); }
                }
                prop_assert!(t.validate().is_ok());
            }
            let before = t.clone();
            t.h(2).unwrap();
            t.h(2).unwrap();
            t.cnot(0, 3).unwrap();
            t.cnot(0, 3).unwrap();
            prop_assert_eq!(&t, &before);
        }
    }
}
