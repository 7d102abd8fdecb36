//! First-round triviality check.
//!
//! If one party measures first with Kraus operator `M` while the others do
//! nothing, the post-measurement states must stay mutually orthogonal. With
//! `H = M^dagger M`, for every pair of states `s != t` that means
//!
//! ```text
//! <s_p|H|t_p> * prod_{q != p} <s_q|t_q> = 0.
//! ```
//!
//! Pairs whose bystander product vanishes impose nothing. The rest give linear
//! equations on the entries of `H`. Writing `H = S + iA` with `S` real symmetric
//! and `A` real antisymmetric, real kets split each equation into one on `S`
//! (real part) and one on `A` (imaginary part). The party is stuck with trivial
//! measurements iff the joint solution space is spanned by the identity.
//! Positivity of `H` is not imposed.

use std::collections::HashSet;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rayon::prelude::*;

use crate::error::Result;
use crate::linalg::{canonical_integer_vector, nullspace, RationalMatrix};
use crate::state::{product_overlap, Ket, StateSet, SystemShape};

/// Columns of the symmetric part: `(i, j)` with `i <= j`, row-major.
pub fn sym_columns(d: usize) -> Vec<(usize, usize)> {
    (0..d).flat_map(|i| (i..d).map(move |j| (i, j))).collect()
}

/// Columns of the antisymmetric part: `(i, j)` with `i < j`, row-major.
pub fn asym_columns(d: usize) -> Vec<(usize, usize)> {
    (0..d).flat_map(|i| (i + 1..d).map(move |j| (i, j))).collect()
}

/// Linear constraints on `H = S + iA` for one party measuring first.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConstraintSystem {
    pub party: usize,
    pub dim: usize,
    /// One row per contributing pair with a nonzero real part, `d(d+1)/2` columns.
    pub sym: RationalMatrix,
    /// State-index pair behind each row of `sym`.
    pub sym_pairs: Vec<(usize, usize)>,
    /// One row per contributing pair with a nonzero imaginary part, `d(d-1)/2` columns.
    pub asym: RationalMatrix,
    pub asym_pairs: Vec<(usize, usize)>,
    /// Number of pairs with a nonzero bystander product.
    pub contributing_pairs: usize,
}

impl ConstraintSystem {
    pub fn rows(&self) -> usize {
        self.sym.rows() + self.asym.rows()
    }
}

fn sym_row(u: &Ket, v: &Ket, scale: &BigInt) -> Vec<BigInt> {
    let (u, v) = (u.coeffs(), v.coeffs());
    sym_columns(u.len())
        .into_iter()
        .map(|(i, j)| {
            let c = if i == j {
                &u[i] * &v[i]
            } else {
                &u[i] * &v[j] + &u[j] * &v[i]
            };
            c * scale
        })
        .collect()
}

fn asym_row(u: &Ket, v: &Ket, scale: &BigInt) -> Vec<BigInt> {
    let (u, v) = (u.coeffs(), v.coeffs());
    asym_columns(u.len())
        .into_iter()
        .map(|(i, j)| (&u[i] * &v[j] - &u[j] * &v[i]) * scale)
        .collect()
}

/// Constraint rows for `party`, ordered by pair `(a, b)` with `a < b`.
pub fn constraint_system(set: &StateSet, party: usize) -> Result<ConstraintSystem> {
    let dim = set.shape().dim(party)?;
    let states = set.states();
    let per_pair: Vec<(usize, usize, Vec<BigInt>, Vec<BigInt>)> = (0..states.len())
        .into_par_iter()
        .map(|a| {
            let mut out = Vec::new();
            for b in a + 1..states.len() {
                let c = product_overlap(&states[a], &states[b], Some(party))?;
                if c.is_zero() {
                    continue;
                }
                let (u, v) = (&states[a].locals[party], &states[b].locals[party]);
                out.push((a, b, sym_row(u, v, &c), asym_row(u, v, &c)));
            }
            Ok(out)
        })
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .flatten()
        .collect();

    let contributing_pairs = per_pair.len();
    let mut sym_rows = Vec::new();
    let mut sym_pairs = Vec::new();
    let mut asym_rows = Vec::new();
    let mut asym_pairs = Vec::new();
    for (a, b, s, t) in per_pair {
        if s.iter().any(|x| !x.is_zero()) {
            sym_rows.push(s);
            sym_pairs.push((a, b));
        }
        if t.iter().any(|x| !x.is_zero()) {
            asym_rows.push(t);
            asym_pairs.push((a, b));
        }
    }
    Ok(ConstraintSystem {
        party,
        dim,
        sym: RationalMatrix::from_integer_rows(dim * (dim + 1) / 2, sym_rows)?,
        sym_pairs,
        asym: RationalMatrix::from_integer_rows(dim * (dim - 1) / 2, asym_rows)?,
        asym_pairs,
        contributing_pairs,
    })
}

/// Canonically scaled, de-duplicated copy of `m`.
fn dedup_rows(m: &RationalMatrix) -> RationalMatrix {
    let mut seen = HashSet::new();
    let mut rows = Vec::new();
    for r in 0..m.rows() {
        let row = canonical_integer_vector(m.row(r));
        if row.iter().all(Zero::is_zero) {
            continue;
        }
        if seen.insert(row.clone()) {
            rows.push(row);
        }
    }
    RationalMatrix::from_integer_rows(m.cols(), rows).expect("rows keep their width")
}

/// A `d x d` Hermitian operator with exact rational entries, `re + i im`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HermitianOperator {
    dim: usize,
    re: Vec<BigRational>,
    im: Vec<BigRational>,
}

impl HermitianOperator {
    pub fn identity(dim: usize) -> Self {
        let mut re = vec![BigRational::zero(); dim * dim];
        for i in 0..dim {
            re[i * dim + i] = BigRational::one();
        }
        HermitianOperator {
            dim,
            re,
            im: vec![BigRational::zero(); dim * dim],
        }
    }

    /// Operator from a vector over [`sym_columns`].
    pub fn from_symmetric(dim: usize, v: &[BigInt]) -> Self {
        let mut h = HermitianOperator {
            dim,
            re: vec![BigRational::zero(); dim * dim],
            im: vec![BigRational::zero(); dim * dim],
        };
        for ((i, j), x) in sym_columns(dim).into_iter().zip(v) {
            let x = BigRational::from_integer(x.clone());
            h.re[i * dim + j] = x.clone();
            h.re[j * dim + i] = x;
        }
        h
    }

    /// Operator `iA` from a vector over [`asym_columns`].
    pub fn from_antisymmetric(dim: usize, v: &[BigInt]) -> Self {
        let mut h = HermitianOperator {
            dim,
            re: vec![BigRational::zero(); dim * dim],
            im: vec![BigRational::zero(); dim * dim],
        };
        for ((i, j), x) in asym_columns(dim).into_iter().zip(v) {
            let x = BigRational::from_integer(x.clone());
            h.im[j * dim + i] = -x.clone();
            h.im[i * dim + j] = x;
        }
        h
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Real and imaginary part of entry `(i, j)`.
    pub fn entry(&self, i: usize, j: usize) -> (&BigRational, &BigRational) {
        let k = i * self.dim + j;
        (&self.re[k], &self.im[k])
    }

    pub fn real_part(&self) -> &[BigRational] {
        &self.re
    }

    pub fn imag_part(&self) -> &[BigRational] {
        &self.im
    }

    /// `H == H^dagger` entrywise.
    pub fn is_hermitian(&self) -> bool {
        let d = self.dim;
        (0..d).all(|i| {
            (0..d).all(|j| {
                self.re[i * d + j] == self.re[j * d + i] && self.im[i * d + j] == -&self.im[j * d + i]
            })
        })
    }

    pub fn is_diagonal(&self) -> bool {
        let d = self.dim;
        (0..d).all(|i| {
            (0..d).all(|j| i == j || (self.re[i * d + j].is_zero() && self.im[i * d + j].is_zero()))
        })
    }

    pub fn is_proportional_to_identity(&self) -> bool {
        self.is_diagonal()
            && self.im.iter().all(Zero::is_zero)
            && (0..self.dim).all(|i| self.re[i * self.dim + i] == self.re[0])
    }

    /// `Re <u|H|v>` and `Im <u|H|v>` for real kets.
    pub fn sandwich(&self, u: &Ket, v: &Ket) -> (BigRational, BigRational) {
        let d = self.dim;
        let mut re = BigRational::zero();
        let mut im = BigRational::zero();
        for (i, ui) in u.terms() {
            for (j, vj) in v.terms() {
                let w = BigRational::from_integer(ui * vj);
                re += &self.re[i * d + j] * &w;
                im += &self.im[i * d + j] * &w;
            }
        }
        (re, im)
    }
}

impl fmt::Display for HermitianOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let d = self.dim;
        for i in 0..d {
            let row: Vec<String> = (0..d)
                .map(|j| {
                    let (re, im) = self.entry(i, j);
                    match (re.is_zero(), im.is_zero()) {
                        (_, true) => re.to_string(),
                        (true, false) => format!("{im}i"),
                        (false, false) => format!("{re}{:+}i", im),
                    }
                })
                .collect();
            writeln!(f, "[{}]", row.join(", "))?;
        }
        Ok(())
    }
}

/// All Hermitian operators satisfying the party's constraints: the symmetric
/// solutions followed by the (imaginary) antisymmetric ones.
pub fn solution_space(set: &StateSet, party: usize) -> Result<Vec<HermitianOperator>> {
    let system = constraint_system(set, party)?;
    Ok(solve(&system))
}

fn solve(system: &ConstraintSystem) -> Vec<HermitianOperator> {
    let d = system.dim;
    let sym = nullspace(&dedup_rows(&system.sym));
    let asym = nullspace(&dedup_rows(&system.asym));
    sym.vectors()
        .iter()
        .map(|v| HermitianOperator::from_symmetric(d, v))
        .chain(
            asym.vectors()
                .iter()
                .map(|v| HermitianOperator::from_antisymmetric(d, v)),
        )
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Trivial,
    Nontrivial,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Trivial => "Trivial",
            Verdict::Nontrivial => "Nontrivial",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TrivialityVerdict {
    pub party: usize,
    pub local_dim: usize,
    pub constraint_rows: usize,
    pub solution_dim: usize,
    pub verdict: Verdict,
    /// A solution not proportional to the identity; present iff nontrivial
    /// with a nonzero solution space.
    pub witness: Option<HermitianOperator>,
}

/// Whether `party` is restricted to identity-proportional first measurements.
pub fn check_first_round_triviality(set: &StateSet, party: usize) -> Result<TrivialityVerdict> {
    let system = constraint_system(set, party)?;
    let space = solve(&system);
    let witness = space
        .iter()
        .find(|h| !h.is_proportional_to_identity())
        .cloned();
    // An empty space (only possible for non-orthogonal sets, where the
    // identity itself violates a constraint) is nontrivial without a witness.
    let verdict = if space.len() == 1 && witness.is_none() {
        Verdict::Trivial
    } else {
        Verdict::Nontrivial
    };
    Ok(TrivialityVerdict {
        party,
        local_dim: system.dim,
        constraint_rows: system.rows(),
        solution_dim: space.len(),
        verdict,
        witness,
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub first: usize,
    pub second: usize,
    pub first_label: String,
    pub second_label: String,
    pub overlap: BigInt,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct OrthogonalityReport {
    pub violations: Vec<Violation>,
}

impl OrthogonalityReport {
    pub fn is_orthogonal(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Every unordered pair with a nonzero overlap, in index order.
pub fn check_orthogonality(set: &StateSet) -> OrthogonalityReport {
    let s = set.states();
    let violations = (0..s.len())
        .into_par_iter()
        .flat_map_iter(|i| {
            (i + 1..s.len()).filter_map(move |j| {
                let overlap = product_overlap(&s[i], &s[j], None).expect("set conforms to its shape");
                (!overlap.is_zero()).then(|| Violation {
                    first: i,
                    second: j,
                    first_label: s[i].label.clone(),
                    second_label: s[j].label.clone(),
                    overlap,
                })
            })
        })
        .collect();
    OrthogonalityReport { violations }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Conclusion {
    CertifiedFirstRoundTrivial,
    OrthogonalityFailed,
    NontrivialMeasurementExists,
}

impl Conclusion {
    pub fn as_str(&self) -> &'static str {
        match self {
            Conclusion::CertifiedFirstRoundTrivial => "CertifiedFirstRoundTrivial",
            Conclusion::OrthogonalityFailed => "OrthogonalityFailed",
            Conclusion::NontrivialMeasurementExists => "NontrivialMeasurementExists",
        }
    }

    pub fn from_parts(orthogonal: bool, verdicts: &[Verdict]) -> Self {
        if !orthogonal {
            Conclusion::OrthogonalityFailed
        } else if verdicts.iter().all(|v| *v == Verdict::Trivial) {
            Conclusion::CertifiedFirstRoundTrivial
        } else {
            Conclusion::NontrivialMeasurementExists
        }
    }
}

impl fmt::Display for Conclusion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Outcome of running every check on a set.
///
/// `CertifiedFirstRoundTrivial` means the set is orthogonal and no party can
/// open with a nontrivial orthogonality-preserving measurement, which rules
/// out perfect LOCC discrimination.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Certificate {
    pub provenance: String,
    pub shape: SystemShape,
    pub cardinality: usize,
    pub orthogonality: OrthogonalityReport,
    pub verdicts: Vec<TrivialityVerdict>,
    pub conclusion: Conclusion,
}

impl Certificate {
    pub fn new(
        set: &StateSet,
        orthogonality: OrthogonalityReport,
        verdicts: Vec<TrivialityVerdict>,
    ) -> Self {
        let kinds: Vec<Verdict> = verdicts.iter().map(|v| v.verdict).collect();
        let conclusion = Conclusion::from_parts(orthogonality.is_orthogonal(), &kinds);
        Certificate {
            provenance: set.provenance().to_string(),
            shape: set.shape().clone(),
            cardinality: set.len(),
            orthogonality,
            verdicts,
            conclusion,
        }
    }
}

/// Orthogonality check plus a triviality check for every party.
pub fn certify_nonlocal(set: &StateSet) -> Certificate {
    let orthogonality = check_orthogonality(set);
    let verdicts = (0..set.shape().parties())
        .into_par_iter()
        .map(|p| check_first_round_triviality(set, p).expect("party index is in range"))
        .collect();
    Certificate::new(set, orthogonality, verdicts)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::{lemma1_set, lemma2_set, theorem1_set};
    use crate::state::ProductState;

    fn shape333() -> SystemShape {
        SystemShape::new(vec![3, 3, 3]).unwrap()
    }

    #[test]
    fn column_layouts() {
        assert_eq!(sym_columns(3), [(0, 0), (0, 1), (0, 2), (1, 1), (1, 2), (2, 2)]);
        assert_eq!(asym_columns(3), [(0, 1), (0, 2), (1, 2)]);
    }

    #[test]
    fn lemma1_pair_forces_offdiagonal_zero() {
        let d = 3;
        let set = lemma1_set(d).unwrap();
        let sys = constraint_system(&set, 0).unwrap();
        // (phi_{1+(d-1)}, phi_{1+2(d-1)}) = (|1>|0-1>|0>, |0>|1>|0-1>)
        let (a, b) = (d - 1, 2 * (d - 1));
        let k = sys.sym_pairs.iter().position(|&p| p == (a, b)).unwrap();
        let row: Vec<String> = sys.sym.row(k).iter().map(|x| x.to_string()).collect();
        // bystander product -1 times <1|H|0> over (00,01,02,11,12,22): S_01 column
        assert_eq!(row, ["0", "-1", "0", "0", "0", "0"]);
        // (phi_1, phi_2) contributes nothing: <1|2> = 0 on C
        assert!(!sys.sym_pairs.contains(&(0, 1)));
        assert!(!sys.asym_pairs.contains(&(0, 1)));
    }

    #[test]
    fn single_state_has_no_constraints() {
        let set = StateSet::new(
            SystemShape::new(vec![2, 2, 2]).unwrap(),
            vec![ProductState::new("only", vec![Ket::basis(2, 0).unwrap(); 3])],
            "user",
        )
        .unwrap();
        let sys = constraint_system(&set, 1).unwrap();
        assert_eq!(sys.rows(), 0);
        let space = solution_space(&set, 1).unwrap();
        assert_eq!(space.len(), 4);
        assert!(space.iter().all(HermitianOperator::is_hermitian));
    }

    #[test]
    fn lemma1_is_trivial_for_every_party() {
        for d in 3..=6 {
            let set = lemma1_set(d).unwrap();
            for p in 0..3 {
                let v = check_first_round_triviality(&set, p).unwrap();
                assert_eq!(v.verdict, Verdict::Trivial, "d={d} party={p}");
                assert_eq!(v.solution_dim, 1);
            }
            let space = solution_space(&set, 0).unwrap();
            assert_eq!(space, vec![HermitianOperator::identity(d)]);
        }
    }

    #[test]
    fn computational_basis_has_diagonal_witness() {
        let set = StateSet::computational_basis(&shape333()).unwrap();
        assert_eq!(set.len(), 27);
        let space = solution_space(&set, 0).unwrap();
        assert_eq!(space.len(), 3);
        assert!(space.iter().all(HermitianOperator::is_diagonal));
        let v = check_first_round_triviality(&set, 0).unwrap();
        assert_eq!(v.verdict, Verdict::Nontrivial);
        let w = v.witness.unwrap();
        assert!(w.is_diagonal() && !w.is_proportional_to_identity());
        let cert = certify_nonlocal(&set);
        assert_eq!(cert.conclusion, Conclusion::NontrivialMeasurementExists);
    }

    #[test]
    fn theorem1_345_charlie_trivial() {
        let set = theorem1_set(3, 4, 5).unwrap();
        let v = check_first_round_triviality(&set, 2).unwrap();
        assert_eq!(v.verdict, Verdict::Trivial);
    }

    #[test]
    fn lemma2_certifies() {
        let set = lemma2_set(3).unwrap();
        let cert = certify_nonlocal(&set);
        assert_eq!(cert.cardinality, 13);
        assert_eq!(cert.conclusion, Conclusion::CertifiedFirstRoundTrivial);
    }

    #[test]
    fn non_orthogonal_pair_reported() {
        let set = StateSet::new(
            shape333(),
            vec![
                ProductState::new("s", vec![Ket::basis(3, 0).unwrap(); 3]),
                ProductState::new(
                    "t",
                    vec![
                        Ket::basis(3, 0).unwrap(),
                        Ket::basis(3, 0).unwrap(),
                        Ket::from_terms(3, [(0, 1), (1, 1)]).unwrap(),
                    ],
                ),
            ],
            "user",
        )
        .unwrap();
        let report = check_orthogonality(&set);
        assert_eq!(report.violations.len(), 1);
        assert_eq!(report.violations[0].overlap, BigInt::one());
        assert_eq!(
            certify_nonlocal(&set).conclusion,
            Conclusion::OrthogonalityFailed
        );
        assert!(check_orthogonality(&lemma1_set(3).unwrap()).is_orthogonal());
        assert!(check_orthogonality(&lemma2_set(4).unwrap()).is_orthogonal());
    }

    #[test]
    fn antisymmetric_operators_are_hermitian() {
        let h = HermitianOperator::from_antisymmetric(3, &[1.into(), 0.into(), (-2).into()]);
        assert!(h.is_hermitian());
        assert!(!h.is_diagonal());
        let (_, im) = h.entry(1, 0);
        assert_eq!(*im, BigRational::from_integer((-1).into()));
    }

    #[test]
    fn invalid_party() {
        let set = lemma1_set(3).unwrap();
        assert!(constraint_system(&set, 3).is_err());
    }

    #[test]
    fn repeated_state_excludes_the_identity() {
        let base = lemma1_set(3).unwrap();
        let mut states = base.states().to_vec();
        states.push(ProductState::new("copy", states[0].locals.clone()));
        let set = StateSet::new(base.shape().clone(), states, "dup").unwrap();
        let cert = certify_nonlocal(&set);
        assert_eq!(cert.conclusion, Conclusion::OrthogonalityFailed);
        for v in &cert.verdicts {
            assert_eq!(v.verdict, Verdict::Nontrivial);
            let space = solution_space(&set, v.party).unwrap();
            assert!(!space.contains(&HermitianOperator::identity(3)));
            assert_eq!(v.witness.is_some(), v.solution_dim > 0);
        }
    }
}
