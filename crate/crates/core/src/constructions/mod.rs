//! The nonlocal product-state sets: three tripartite families and the
//! block composition for more than six parties.

mod multipartite;

pub use multipartite::{
    block_schedule, compose_multipartite, Block, BlockLayout, Slot, StopperPair,
};

use crate::error::{Error, Result};
use crate::state::{Ket, ProductState, StateSet, SystemShape};

/// Accumulates `(A, B, C)` ket triples and numbers them `phi_1, phi_2, ...`.
struct TripartiteBuilder {
    dims: [usize; 3],
    states: Vec<ProductState>,
}

impl TripartiteBuilder {
    fn new(dims: [usize; 3], capacity: usize) -> Self {
        TripartiteBuilder {
            dims,
            states: Vec::with_capacity(capacity),
        }
    }

    fn push(&mut self, kets: [Ket; 3]) {
        let label = format!("phi_{}", self.states.len() + 1);
        self.states.push(ProductState::new(label, kets.into()));
    }

    fn basis(&self, party: usize, i: usize) -> Result<Ket> {
        Ket::basis(self.dims[party], i)
    }

    fn diff(&self, party: usize, i: usize, j: usize) -> Result<Ket> {
        Ket::diff(self.dims[party], i, j)
    }

    /// The three cyclic families `|0-i>|0>|i>`, `|i>|0-i>|0>`, `|0>|i>|0-i>`
    /// for `i = 1..count`.
    fn cyclic_families(&mut self, count: usize) -> Result<()> {
        for i in 1..=count {
            self.push([self.diff(0, 0, i)?, self.basis(1, 0)?, self.basis(2, i)?]);
        }
        for i in 1..=count {
            self.push([self.basis(0, i)?, self.diff(1, 0, i)?, self.basis(2, 0)?]);
        }
        for i in 1..=count {
            self.push([self.basis(0, 0)?, self.basis(1, i)?, self.diff(2, 0, i)?]);
        }
        Ok(())
    }

    fn uniform_stopper(&mut self) -> Result<()> {
        let [a, b, c] = self.dims;
        self.push([Ket::uniform(a)?, Ket::uniform(b)?, Ket::uniform(c)?]);
        Ok(())
    }

    fn finish(self, provenance: String) -> Result<StateSet> {
        let shape = SystemShape::new(self.dims.to_vec())?;
        StateSet::new(shape, self.states, provenance)
    }
}

/// The `3d - 2` states on `C^d (x) C^d (x) C^d`.
pub fn lemma1_set(d: usize) -> Result<StateSet> {
    if d < 3 {
        return Err(Error::InvalidParameters(format!(
            "lemma1 needs d >= 3, got {d}"
        )));
    }
    let mut b = TripartiteBuilder::new([d; 3], 3 * d - 2);
    b.cyclic_families(d - 1)?;
    b.uniform_stopper()?;
    b.finish(format!("lemma1 d={d}"))
}

/// The `3d + 4` states on `C^d (x) C^(d+1) (x) C^(d+2)`.
pub fn lemma2_set(d: usize) -> Result<StateSet> {
    if d < 3 {
        return Err(Error::InvalidParameters(format!(
            "lemma2 needs d >= 3, got {d}"
        )));
    }
    let mut b = TripartiteBuilder::new([d, d + 1, d + 2], 3 * d + 4);
    b.cyclic_families(d - 1)?;
    b.push([b.diff(0, 0, 1)?, b.basis(1, 0)?, b.basis(2, d)?]);
    b.push([b.diff(0, 0, 1)?, b.basis(1, d)?, b.basis(2, 0)?]);
    b.push([b.basis(0, d - 2)?, b.basis(1, d - 2)?, b.diff(2, d - 1, d)?]);
    b.push([b.basis(0, d - 2)?, b.diff(1, d - 1, d)?, b.basis(2, d - 2)?]);
    b.push([b.diff(0, 0, 1)?, b.basis(1, 0)?, b.basis(2, d + 1)?]);
    b.push([b.basis(0, d - 1)?, b.basis(1, d - 1)?, b.diff(2, d, d + 1)?]);
    b.uniform_stopper()?;
    b.finish(format!("lemma2 d={d}"))
}

/// Parity rule for the `|m>` ket in the j and k families: `m = 1` when
/// `index - 1` is even, `m = 2` otherwise.
fn parity_marker(index: usize) -> usize {
    if (index - 1).is_multiple_of(2) {
        1
    } else {
        2
    }
}

/// The `2(n2 + n3 - 1) - n1` states on `C^n1 (x) C^n2 (x) C^n3`,
/// for `3 <= n1 <= n2 <= n3`.
pub fn theorem1_set(n1: usize, n2: usize, n3: usize) -> Result<StateSet> {
    if !(3 <= n1 && n1 <= n2 && n2 <= n3) {
        return Err(Error::InvalidParameters(format!(
            "theorem1 needs 3 <= n1 <= n2 <= n3, got ({n1},{n2},{n3})"
        )));
    }
    let mut b = TripartiteBuilder::new([n1, n2, n3], 2 * (n2 + n3 - 1) - n1);
    b.cyclic_families(n1 - 1)?;
    for j in n1..n2 {
        b.push([b.diff(0, 0, 1)?, b.basis(1, 0)?, b.basis(2, j)?]);
    }
    for j in n1..n2 {
        b.push([b.diff(0, 0, 1)?, b.basis(1, j)?, b.basis(2, 0)?]);
    }
    for j in n1..n2 {
        let m = parity_marker(j);
        b.push([b.basis(0, 0)?, b.basis(1, m)?, b.diff(2, j - 1, j)?]);
    }
    for j in n1..n2 {
        let m = parity_marker(j);
        b.push([b.basis(0, 0)?, b.diff(1, j - 1, j)?, b.basis(2, m)?]);
    }
    for k in n2..n3 {
        b.push([b.diff(0, 0, 1)?, b.basis(1, 0)?, b.basis(2, k)?]);
    }
    for k in n2..n3 {
        let m = parity_marker(k);
        b.push([b.basis(0, 0)?, b.basis(1, m)?, b.diff(2, k - 1, k)?]);
    }
    b.uniform_stopper()?;
    b.finish(format!("theorem1 dims={n1},{n2},{n3}"))
}

/// `theorem1_set` for three dimensions in any order: the set is built on the
/// sorted dimensions and each state's kets are permuted back to the given
/// party order.
pub fn theorem1_set_unsorted(dims: [usize; 3]) -> Result<StateSet> {
    let mut order = [0usize, 1, 2];
    order.sort_by_key(|&p| dims[p]);
    let base = theorem1_set(dims[order[0]], dims[order[1]], dims[order[2]])?;
    if order == [0, 1, 2] {
        return Ok(base);
    }
    let states = base
        .states()
        .iter()
        .map(|s| {
            let mut locals = vec![s.locals[0].clone(); 3];
            for (q, &p) in order.iter().enumerate() {
                locals[p] = s.locals[q].clone();
            }
            ProductState::new(s.label.clone(), locals)
        })
        .collect();
    StateSet::new(
        SystemShape::new(dims.to_vec())?,
        states,
        format!("theorem1 dims={},{},{}", dims[0], dims[1], dims[2]),
    )
}
