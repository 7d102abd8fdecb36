//! Exact product states.
//!
//! Kets are stored unnormalized with integer amplitudes over the computational
//! basis, so `|0-2>` is the coefficient vector `(1, 0, -1)`. Every overlap is an
//! exact integer and vanishes iff the normalized states are orthogonal.

use std::collections::HashSet;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// An unnormalized local state with integer amplitudes.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Ket {
    coeffs: Vec<BigInt>,
}

impl Ket {
    /// Builds a ket from a dense coefficient vector.
    pub fn new(coeffs: Vec<BigInt>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::ZeroDimension);
        }
        if coeffs.iter().all(Zero::is_zero) {
            return Err(Error::ZeroKet);
        }
        Ok(Ket { coeffs })
    }

    /// Builds a ket from sparse `(index, coefficient)` terms. Repeated indices sum.
    pub fn from_terms<I, C>(dim: usize, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, C)>,
        C: Into<BigInt>,
    {
        if dim == 0 {
            return Err(Error::ZeroDimension);
        }
        let mut coeffs = vec![BigInt::zero(); dim];
        for (index, c) in terms {
            if index >= dim {
                return Err(Error::IndexOutOfRange { index, dim });
            }
            coeffs[index] += c.into();
        }
        Ket::new(coeffs)
    }

    /// Computational basis state `|i>`.
    pub fn basis(dim: usize, i: usize) -> Result<Self> {
        Ket::from_terms(dim, [(i, 1)])
    }

    /// The difference state `|i - j>`.
    pub fn diff(dim: usize, i: usize, j: usize) -> Result<Self> {
        Ket::from_terms(dim, [(i, 1), (j, -1)])
    }

    /// The uniform superposition `|0 + 1 + ... + (d-1)>`.
    pub fn uniform(dim: usize) -> Result<Self> {
        if dim == 0 {
            return Err(Error::ZeroDimension);
        }
        Ok(Ket {
            coeffs: vec![BigInt::one(); dim],
        })
    }

    pub fn dim(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    /// Nonzero `(index, coefficient)` pairs in ascending index order.
    pub fn terms(&self) -> impl Iterator<Item = (usize, &BigInt)> {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
    }

    /// Multiplies every amplitude by `k`. The ray is unchanged for `k != 0`.
    pub fn scaled(&self, k: &BigInt) -> Result<Self> {
        Ket::new(self.coeffs.iter().map(|c| c * k).collect())
    }

    /// `<self|other>` up to positive normalization.
    pub fn inner(&self, other: &Ket) -> Result<BigInt> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch {
                left: self.dim(),
                right: other.dim(),
            });
        }
        Ok(self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| a * b)
            .sum())
    }

    /// True when `self` and `other` span the same ray.
    pub fn is_proportional_to(&self, other: &Ket) -> bool {
        if self.dim() != other.dim() {
            return false;
        }
        // u ~ v iff u_i v_j == u_j v_i for all i, j; compare against a pivot.
        let Some(p) = self.coeffs.iter().position(|c| !c.is_zero()) else {
            return false;
        };
        if other.coeffs[p].is_zero() {
            return false;
        }
        self.coeffs
            .iter()
            .zip(&other.coeffs)
            .all(|(a, b)| a * &other.coeffs[p] == b * &self.coeffs[p])
    }
}

impl fmt::Display for Ket {
    /// Renders in the `|0-1+2>` notation; non-unit coefficients are written inline.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "|")?;
        for (n, (i, c)) in self.terms().enumerate() {
            let neg = c.is_negative();
            if n > 0 {
                write!(f, "{}", if neg { "-" } else { "+" })?;
            } else if neg {
                write!(f, "-")?;
            }
            let mag = c.abs();
            if !mag.is_one() {
                write!(f, "{mag}*")?;
            }
            write!(f, "{i}")?;
        }
        write!(f, ">")
    }
}

/// `<u|v>`; free-function form of [`Ket::inner`].
pub fn inner(u: &Ket, v: &Ket) -> Result<BigInt> {
    u.inner(v)
}

/// `|0 + ... + (d-1)>`; all coefficients one.
pub fn uniform_ket(d: usize) -> Result<Ket> {
    Ket::uniform(d)
}

/// Sparse-term constructor; free-function form of [`Ket::from_terms`].
pub fn ket_from_terms<I, C>(dim: usize, terms: I) -> Result<Ket>
where
    I: IntoIterator<Item = (usize, C)>,
    C: Into<BigInt>,
{
    Ket::from_terms(dim, terms)
}

/// Local dimensions `(d_1, ..., d_n)` of a multipartite system.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SystemShape {
    dims: Vec<usize>,
}

impl SystemShape {
    pub fn new(dims: Vec<usize>) -> Result<Self> {
        if dims.len() < 3 {
            return Err(Error::InvalidShape(format!(
                "need at least 3 parties, got {}",
                dims.len()
            )));
        }
        if let Some(d) = dims.iter().find(|&&d| d < 2) {
            return Err(Error::InvalidShape(format!(
                "every local dimension must be at least 2, got {d}"
            )));
        }
        Ok(SystemShape { dims })
    }

    pub fn uniform(n: usize, d: usize) -> Result<Self> {
        SystemShape::new(vec![d; n])
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn parties(&self) -> usize {
        self.dims.len()
    }

    pub fn dim(&self, party: usize) -> Result<usize> {
        self.dims.get(party).copied().ok_or(Error::InvalidParty {
            party,
            parties: self.dims.len(),
        })
    }

    pub fn check_party(&self, party: usize) -> Result<()> {
        self.dim(party).map(|_| ())
    }
}

impl fmt::Display for SystemShape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let dims: Vec<String> = self.dims.iter().map(|d| d.to_string()).collect();
        write!(f, "({})", dims.join(","))
    }
}

/// Display name of a party: `A`, `B`, `C` for three parties, `1..n` otherwise.
pub fn party_label(party: usize, parties: usize) -> String {
    if parties == 3 {
        ["A", "B", "C"][party].to_string()
    } else {
        (party + 1).to_string()
    }
}

/// One ket per party.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ProductState {
    pub label: String,
    pub locals: Vec<Ket>,
}

impl ProductState {
    pub fn new(label: impl Into<String>, locals: Vec<Ket>) -> Self {
        ProductState {
            label: label.into(),
            locals,
        }
    }

    pub fn conforms_to(&self, shape: &SystemShape) -> Result<()> {
        if self.locals.len() != shape.parties() {
            return Err(Error::NonConformingState {
                label: self.label.clone(),
                reason: format!(
                    "{} local kets for {} parties",
                    self.locals.len(),
                    shape.parties()
                ),
            });
        }
        for (p, (ket, &d)) in self.locals.iter().zip(shape.dims()).enumerate() {
            if ket.dim() != d {
                return Err(Error::NonConformingState {
                    label: self.label.clone(),
                    reason: format!("party {p} has dimension {} but shape says {d}", ket.dim()),
                });
            }
        }
        Ok(())
    }
}

impl fmt::Display for ProductState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} = ", self.label)?;
        for ket in &self.locals {
            write!(f, "{ket}")?;
        }
        Ok(())
    }
}

/// Product of the per-party overlaps `<s_p|t_p>` over every party except `skip`.
///
/// With `skip = None` this is the full unnormalized overlap `<s|t>`.
pub fn product_overlap(s: &ProductState, t: &ProductState, skip: Option<usize>) -> Result<BigInt> {
    if s.locals.len() != t.locals.len() {
        return Err(Error::DimensionMismatch {
            left: s.locals.len(),
            right: t.locals.len(),
        });
    }
    if let Some(p) = skip {
        if p >= s.locals.len() {
            return Err(Error::InvalidParty {
                party: p,
                parties: s.locals.len(),
            });
        }
    }
    let mut acc = BigInt::one();
    for (p, (u, v)) in s.locals.iter().zip(&t.locals).enumerate() {
        if Some(p) == skip {
            continue;
        }
        let o = u.inner(v)?;
        if o.is_zero() {
            return Ok(o);
        }
        acc *= o;
    }
    Ok(acc)
}

/// A labeled list of product states on a fixed system shape.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StateSet {
    shape: SystemShape,
    states: Vec<ProductState>,
    provenance: String,
}

impl StateSet {
    pub fn new(
        shape: SystemShape,
        states: Vec<ProductState>,
        provenance: impl Into<String>,
    ) -> Result<Self> {
        let mut seen = HashSet::with_capacity(states.len());
        for s in &states {
            s.conforms_to(&shape)?;
            if !seen.insert(s.label.as_str()) {
                return Err(Error::DuplicateLabel(s.label.clone()));
            }
        }
        Ok(StateSet {
            shape,
            states,
            provenance: provenance.into(),
        })
    }

    pub fn shape(&self) -> &SystemShape {
        &self.shape
    }

    pub fn states(&self) -> &[ProductState] {
        &self.states
    }

    pub fn provenance(&self) -> &str {
        &self.provenance
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn get(&self, label: &str) -> Option<&ProductState> {
        self.states.iter().find(|s| s.label == label)
    }

    /// The full computational product basis of `shape`, in lexicographic order.
    pub fn computational_basis(shape: &SystemShape) -> Result<Self> {
        let dims = shape.dims();
        let total: usize = dims.iter().product();
        let mut states = Vec::with_capacity(total);
        let mut digits = vec![0usize; dims.len()];
        for _ in 0..total {
            let locals = digits
                .iter()
                .zip(dims)
                .map(|(&i, &d)| Ket::basis(d, i))
                .collect::<Result<Vec<_>>>()?;
            let name: Vec<String> = digits.iter().map(|i| i.to_string()).collect();
            states.push(ProductState::new(format!("e_{}", name.join("")), locals));
            for (digit, &d) in digits.iter_mut().zip(dims).rev() {
                *digit += 1;
                if *digit < d {
                    break;
                }
                *digit = 0;
            }
        }
        StateSet::new(shape.clone(), states, format!("computational basis {shape}"))
    }
}
