//! Block composition of tripartite nonlocal sets into `n > 6` parties.
//!
//! Parties are grouped into consecutive triples. When `n` is not a multiple of
//! three, a final block reuses party 1 (and party 2 for `n = 1 mod 3`) together
//! with the leftover parties. Each block's states carry their own tripartite
//! kets on the block, the marker ket `a` on the padded parties of the
//! cyclically preceding block, and the filler ket `b` everywhere else.

use num_traits::Zero;

use super::theorem1_set_unsorted;
use crate::error::{Error, Result};
use crate::state::{product_overlap, Ket, ProductState, StateSet, SystemShape};

/// What a block's states carry on one party.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Slot {
    /// Ket `k` (0, 1, 2) of the embedded tripartite state.
    Local(usize),
    /// The marker ket `a` of the party's owning block.
    Marker,
    /// The filler ket `b` of the party's owning block.
    Filler,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Block {
    /// 1-based block index: the first party `t` of a regular triple, `n` for the
    /// final block when `n = 1 mod 3`, `n - 1` when `n = 2 mod 3`.
    pub id: usize,
    /// 0-based parties carrying the embedded tripartite set, ascending.
    pub parties: [usize; 3],
    /// Parties whose marker/filler kets this block's stopper pair supplies.
    pub padded: Vec<usize>,
    /// One slot per party of the full system.
    pub pattern: Vec<Slot>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlockLayout {
    pub n: usize,
    pub residue: usize,
    pub blocks: Vec<Block>,
}

impl BlockLayout {
    /// Index of the block whose stopper pair supplies the padding kets of `party`.
    pub fn owner(&self, party: usize) -> usize {
        self.blocks
            .iter()
            .position(|b| b.padded.contains(&party))
            .expect("every party has exactly one owning block")
    }
}

/// Marker/filler kets for one block, one ket per padded party.
///
/// The products `a_1 (x) a_2 ...` and `b_1 (x) b_2 ...` must be orthogonal.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StopperPair {
    pub a: Vec<Ket>,
    pub b: Vec<Ket>,
}

impl StopperPair {
    /// `a = |0>`, `b = |1>` on every listed dimension.
    pub fn standard(dims: &[usize]) -> Result<Self> {
        Ok(StopperPair {
            a: dims.iter().map(|&d| Ket::basis(d, 0)).collect::<Result<_>>()?,
            b: dims.iter().map(|&d| Ket::basis(d, 1)).collect::<Result<_>>()?,
        })
    }

    fn validate(&self, block: usize, dims: &[usize]) -> Result<()> {
        let invalid = |reason: String| Error::InvalidStopper { block, reason };
        if self.a.len() != dims.len() || self.b.len() != dims.len() {
            return Err(invalid(format!(
                "expected {} kets in a and b, got {} and {}",
                dims.len(),
                self.a.len(),
                self.b.len()
            )));
        }
        let mut overlap_vanishes = false;
        for ((a, b), &d) in self.a.iter().zip(&self.b).zip(dims) {
            if a.dim() != d || b.dim() != d {
                return Err(invalid(format!(
                    "ket dimensions {}/{} do not match party dimension {d}",
                    a.dim(),
                    b.dim()
                )));
            }
            overlap_vanishes |= a.inner(b)?.is_zero();
        }
        if !overlap_vanishes {
            return Err(invalid("a and b are not orthogonal".into()));
        }
        Ok(())
    }
}

/// Block layout for `n > 6` parties, following the residue of `n` mod 3.
pub fn block_schedule(shape: &SystemShape) -> Result<BlockLayout> {
    let n = shape.parties();
    if n <= 6 {
        return Err(Error::UnsupportedPartyCount(n));
    }
    if let Some(d) = shape.dims().iter().find(|&&d| d < 3) {
        return Err(Error::InvalidParameters(format!(
            "multipartite composition needs every local dimension >= 3, got {d}"
        )));
    }
    let residue = n % 3;
    let regular = (n - residue) / 3;
    let mut members: Vec<(usize, [usize; 3], Vec<usize>)> = (0..regular)
        .map(|b| {
            let p = [3 * b, 3 * b + 1, 3 * b + 2];
            (3 * b + 1, p, p.to_vec())
        })
        .collect();
    match residue {
        1 => members.push((n, [0, 1, n - 1], vec![n - 1])),
        2 => members.push((n - 1, [0, n - 2, n - 1], vec![n - 2, n - 1])),
        _ => {}
    }

    let count = members.len();
    let blocks = (0..count)
        .map(|i| {
            let (id, parties, padded) = &members[i];
            let prev = &members[(i + count - 1) % count].2;
            let pattern = (0..n)
                .map(|p| {
                    if let Some(k) = parties.iter().position(|&q| q == p) {
                        Slot::Local(k)
                    } else if prev.contains(&p) {
                        Slot::Marker
                    } else {
                        Slot::Filler
                    }
                })
                .collect();
            Block {
                id: *id,
                parties: *parties,
                padded: padded.clone(),
                pattern,
            }
        })
        .collect();
    Ok(BlockLayout {
        n,
        residue,
        blocks,
    })
}

/// Embeds one tripartite nonlocal set per block and returns their union.
///
/// `stoppers`, when given, holds one pair per block in layout order, over that
/// block's `padded` parties. The result is checked for pairwise orthogonality
/// before it is returned. Three parties are routed to `theorem1_set`.
pub fn compose_multipartite(
    shape: &SystemShape,
    stoppers: Option<&[StopperPair]>,
) -> Result<StateSet> {
    let dims = shape.dims();
    if dims.len() == 3 {
        if stoppers.is_some_and(|s| !s.is_empty()) {
            return Err(Error::InvalidStopper {
                block: 1,
                reason: "a tripartite set has no padding".into(),
            });
        }
        return theorem1_set_unsorted([dims[0], dims[1], dims[2]]);
    }
    let layout = block_schedule(shape)?;

    let pairs: Vec<StopperPair> = match stoppers {
        Some(given) => {
            if given.len() != layout.blocks.len() {
                return Err(Error::InvalidStopper {
                    block: 0,
                    reason: format!(
                        "expected {} stopper pairs, got {}",
                        layout.blocks.len(),
                        given.len()
                    ),
                });
            }
            given.to_vec()
        }
        None => layout
            .blocks
            .iter()
            .map(|b| StopperPair::standard(&b.padded.iter().map(|&p| dims[p]).collect::<Vec<_>>()))
            .collect::<Result<_>>()?,
    };
    for (block, pair) in layout.blocks.iter().zip(&pairs) {
        let padded_dims: Vec<usize> = block.padded.iter().map(|&p| dims[p]).collect();
        pair.validate(block.id, &padded_dims)?;
    }

    // Padding kets indexed by party.
    let mut marker = Vec::with_capacity(dims.len());
    let mut filler = Vec::with_capacity(dims.len());
    for p in 0..dims.len() {
        let owner = layout.owner(p);
        let slot = layout.blocks[owner]
            .padded
            .iter()
            .position(|&q| q == p)
            .expect("owner pads this party");
        marker.push(&pairs[owner].a[slot]);
        filler.push(&pairs[owner].b[slot]);
    }

    let mut states = Vec::new();
    for block in &layout.blocks {
        let [p0, p1, p2] = block.parties;
        let tri = theorem1_set_unsorted([dims[p0], dims[p1], dims[p2]])?;
        for s in tri.states() {
            let locals = block
                .pattern
                .iter()
                .enumerate()
                .map(|(p, slot)| match *slot {
                    Slot::Local(k) => s.locals[k].clone(),
                    Slot::Marker => marker[p].clone(),
                    Slot::Filler => filler[p].clone(),
                })
                .collect();
            let label = format!("phi_{}", states.len() + 1);
            states.push(ProductState::new(label, locals));
        }
    }

    let joined: Vec<String> = dims.iter().map(|d| d.to_string()).collect();
    let provenance = match stoppers {
        Some(_) => format!("multipartite dims={} stoppers=user", joined.join(",")),
        None => format!("multipartite dims={}", joined.join(",")),
    };
    let set = StateSet::new(shape.clone(), states, provenance)?;
    ensure_orthogonal(&set)?;
    Ok(set)
}

fn ensure_orthogonal(set: &StateSet) -> Result<()> {
    let s = set.states();
    let mut bad = Vec::new();
    for i in 0..s.len() {
        for j in i + 1..s.len() {
            if !product_overlap(&s[i], &s[j], None)?.is_zero() {
                bad.push((i, j));
            }
        }
    }
    match bad.first() {
        None => Ok(()),
        Some(&(i, j)) => Err(Error::ComposedNotOrthogonal {
            pairs: bad.len(),
            first: s[i].label.clone(),
            second: s[j].label.clone(),
        }),
    }
}
