//! On-disk JSON documents: state sets and certificates.
//!
//! Both carry `format_version: "1"` and contain integers only. Sparse kets are
//! lists of `[basis_index, coefficient]` pairs; rationals are `[num, den]`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::state::{party_label, Ket, ProductState, StateSet, SystemShape};
use crate::verifier::{Certificate, Conclusion, HermitianOperator, Verdict};

pub const FORMAT_VERSION: &str = "1";

#[derive(Debug, Error)]
pub enum DocumentError {
    #[error("malformed document at line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("unsupported format_version {0:?} (expected \"1\")")]
    Version(String),

    #[error("{location}: {source}")]
    Invalid {
        location: String,
        #[source]
        source: crate::Error,
    },

    #[error("{location}: integer does not fit in 64 bits")]
    Overflow { location: String },

    #[error("inconsistent certificate: {0}")]
    Inconsistent(String),
}

impl From<serde_json::Error> for DocumentError {
    fn from(e: serde_json::Error) -> Self {
        DocumentError::Syntax {
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        }
    }
}

fn to_i64(x: &BigInt, location: impl FnOnce() -> String) -> Result<i64, DocumentError> {
    x.to_i64().ok_or_else(|| DocumentError::Overflow {
        location: location(),
    })
}

fn default_provenance() -> String {
    "user".to_string()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StateEntry {
    pub label: String,
    pub parties: Vec<Vec<(usize, i64)>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StateSetDocument {
    pub format_version: String,
    #[serde(default = "default_provenance")]
    pub provenance: String,
    pub dims: Vec<usize>,
    pub states: Vec<StateEntry>,
}

impl StateSetDocument {
    pub fn from_set(set: &StateSet) -> Result<Self, DocumentError> {
        let states = set
            .states()
            .iter()
            .map(|s| {
                let parties = s
                    .locals
                    .iter()
                    .enumerate()
                    .map(|(p, ket)| {
                        ket.terms()
                            .map(|(i, c)| {
                                Ok((i, to_i64(c, || format!("state {} party {p}", s.label))?))
                            })
                            .collect::<Result<Vec<_>, DocumentError>>()
                    })
                    .collect::<Result<Vec<_>, _>>()?;
                Ok(StateEntry {
                    label: s.label.clone(),
                    parties,
                })
            })
            .collect::<Result<Vec<_>, DocumentError>>()?;
        Ok(StateSetDocument {
            format_version: FORMAT_VERSION.to_string(),
            provenance: set.provenance().to_string(),
            dims: set.shape().dims().to_vec(),
            states,
        })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("document serializes") + "\n"
    }

    pub fn parse(text: &str) -> Result<Self, DocumentError> {
        let doc: StateSetDocument = serde_json::from_str(text)?;
        if doc.format_version != FORMAT_VERSION {
            return Err(DocumentError::Version(doc.format_version));
        }
        Ok(doc)
    }

    pub fn to_set(&self) -> Result<StateSet, DocumentError> {
        let shape = SystemShape::new(self.dims.clone()).map_err(|source| DocumentError::Invalid {
            location: "dims".into(),
            source,
        })?;
        let mut states = Vec::with_capacity(self.states.len());
        for (n, entry) in self.states.iter().enumerate() {
            let location = |p: Option<usize>| match p {
                Some(p) => format!("states[{n}] ({}) party {p}", entry.label),
                None => format!("states[{n}] ({})", entry.label),
            };
            if entry.parties.len() != self.dims.len() {
                return Err(DocumentError::Invalid {
                    location: location(None),
                    source: crate::Error::DimensionMismatch {
                        left: entry.parties.len(),
                        right: self.dims.len(),
                    },
                });
            }
            let locals = entry
                .parties
                .iter()
                .zip(&self.dims)
                .enumerate()
                .map(|(p, (terms, &d))| {
                    Ket::from_terms(d, terms.iter().copied()).map_err(|source| {
                        DocumentError::Invalid {
                            location: location(Some(p)),
                            source,
                        }
                    })
                })
                .collect::<Result<Vec<_>, _>>()?;
            states.push(ProductState::new(entry.label.clone(), locals));
        }
        StateSet::new(shape, states, self.provenance.clone()).map_err(|source| {
            DocumentError::Invalid {
                location: "states".into(),
                source,
            }
        })
    }
}

/// Parses a state-set document straight into a [`StateSet`].
pub fn parse_state_set(text: &str) -> Result<StateSet, DocumentError> {
    StateSetDocument::parse(text)?.to_set()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ViolationEntry {
    pub first: String,
    pub second: String,
    pub overlap: i64,
}

/// Dense `d x d` operator, each entry a `[numerator, denominator]` pair.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WitnessEntry {
    pub re: Vec<Vec<(i64, i64)>>,
    pub im: Vec<Vec<(i64, i64)>>,
}

impl WitnessEntry {
    fn from_operator(h: &HermitianOperator) -> Result<Self, DocumentError> {
        let d = h.dim();
        let dense = |part: &[BigRational]| {
            (0..d)
                .map(|i| {
                    (0..d)
                        .map(|j| {
                            let x = &part[i * d + j];
                            let loc = || format!("witness entry ({i},{j})");
                            Ok((to_i64(x.numer(), loc)?, to_i64(x.denom(), loc)?))
                        })
                        .collect::<Result<Vec<_>, DocumentError>>()
                })
                .collect::<Result<Vec<_>, DocumentError>>()
        };
        Ok(WitnessEntry {
            re: dense(h.real_part())?,
            im: dense(h.imag_part())?,
        })
    }

    fn validate(&self, dim: usize, party: usize) -> Result<(), DocumentError> {
        let square = |m: &Vec<Vec<(i64, i64)>>| m.len() == dim && m.iter().all(|r| r.len() == dim);
        if !square(&self.re) || !square(&self.im) {
            return Err(DocumentError::Inconsistent(format!(
                "party {party}: witness is not {dim}x{dim}"
            )));
        }
        let zero_den = self
            .re
            .iter()
            .chain(&self.im)
            .flatten()
            .any(|&(_, den)| den == 0);
        if zero_den {
            return Err(DocumentError::Inconsistent(format!(
                "party {party}: witness has a zero denominator"
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PartyEntry {
    pub party: usize,
    pub label: String,
    pub local_dim: usize,
    pub constraint_rows: usize,
    pub solution_dim: usize,
    pub verdict: String,
    pub witness: Option<WitnessEntry>,
}

/// Wall-clock durations in microseconds.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TimingEntry {
    pub orthogonality_us: u64,
    pub parties_us: Vec<u64>,
    pub total_us: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CertificateDocument {
    pub format_version: String,
    pub provenance: String,
    pub dims: Vec<usize>,
    pub cardinality: usize,
    pub orthogonal: bool,
    pub violations: Vec<ViolationEntry>,
    pub parties: Vec<PartyEntry>,
    pub conclusion: String,
    pub timing: Option<TimingEntry>,
}

impl CertificateDocument {
    pub fn from_certificate(
        cert: &Certificate,
        timing: Option<TimingEntry>,
    ) -> Result<Self, DocumentError> {
        let n = cert.shape.parties();
        let violations = cert
            .orthogonality
            .violations
            .iter()
            .map(|v| {
                Ok(ViolationEntry {
                    first: v.first_label.clone(),
                    second: v.second_label.clone(),
                    overlap: to_i64(&v.overlap, || {
                        format!("overlap {} / {}", v.first_label, v.second_label)
                    })?,
                })
            })
            .collect::<Result<Vec<_>, DocumentError>>()?;
        let parties = cert
            .verdicts
            .iter()
            .map(|v| {
                Ok(PartyEntry {
                    party: v.party,
                    label: party_label(v.party, n),
                    local_dim: v.local_dim,
                    constraint_rows: v.constraint_rows,
                    solution_dim: v.solution_dim,
                    verdict: v.verdict.to_string(),
                    witness: v.witness.as_ref().map(WitnessEntry::from_operator).transpose()?,
                })
            })
            .collect::<Result<Vec<_>, DocumentError>>()?;
        Ok(CertificateDocument {
            format_version: FORMAT_VERSION.to_string(),
            provenance: cert.provenance.clone(),
            dims: cert.shape.dims().to_vec(),
            cardinality: cert.cardinality,
            orthogonal: cert.orthogonality.is_orthogonal(),
            violations,
            parties,
            conclusion: cert.conclusion.to_string(),
            timing,
        })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("document serializes") + "\n"
    }

    /// Parses and re-validates internal consistency.
    pub fn parse(text: &str) -> Result<Self, DocumentError> {
        let doc: CertificateDocument = serde_json::from_str(text)?;
        if doc.format_version != FORMAT_VERSION {
            return Err(DocumentError::Version(doc.format_version));
        }
        doc.validate()?;
        Ok(doc)
    }

    pub fn conclusion(&self) -> Result<Conclusion, DocumentError> {
        match self.conclusion.as_str() {
            "CertifiedFirstRoundTrivial" => Ok(Conclusion::CertifiedFirstRoundTrivial),
            "OrthogonalityFailed" => Ok(Conclusion::OrthogonalityFailed),
            "NontrivialMeasurementExists" => Ok(Conclusion::NontrivialMeasurementExists),
            other => Err(DocumentError::Inconsistent(format!(
                "unknown conclusion {other:?}"
            ))),
        }
    }

    pub fn validate(&self) -> Result<(), DocumentError> {
        let bad = |m: String| Err(DocumentError::Inconsistent(m));
        if self.orthogonal != self.violations.is_empty() {
            return bad("orthogonal flag disagrees with the violation list".into());
        }
        if self.parties.len() != self.dims.len() {
            return bad(format!(
                "{} party entries for {} parties",
                self.parties.len(),
                self.dims.len()
            ));
        }
        let mut verdicts = Vec::with_capacity(self.parties.len());
        for (p, entry) in self.parties.iter().enumerate() {
            if entry.party != p || entry.local_dim != self.dims[p] {
                return bad(format!("party entry {p} does not match the shape"));
            }
            let verdict = match entry.verdict.as_str() {
                "Trivial" => Verdict::Trivial,
                "Nontrivial" => Verdict::Nontrivial,
                other => return bad(format!("party {p}: unknown verdict {other:?}")),
            };
            if verdict == Verdict::Trivial && entry.solution_dim != 1 {
                return bad(format!(
                    "party {p}: verdict {verdict} with solution dimension {}",
                    entry.solution_dim
                ));
            }
            match (&entry.witness, verdict) {
                (Some(w), Verdict::Nontrivial) => w.validate(entry.local_dim, p)?,
                (None, Verdict::Trivial) => {}
                (None, Verdict::Nontrivial) if entry.solution_dim == 0 => {}
                _ => {
                    return bad(format!(
                        "party {p}: witness must be present iff nontrivial with solutions"
                    ))
                }
            }
            verdicts.push(verdict);
        }
        let expected = Conclusion::from_parts(self.orthogonal, &verdicts);
        if self.conclusion()? != expected {
            return bad(format!(
                "conclusion {} but the per-party results imply {expected}",
                self.conclusion
            ));
        }
        Ok(())
    }
}

/// Witness as an exact operator, for callers that read a certificate back.
pub fn witness_operator_entries(w: &WitnessEntry) -> Vec<Vec<(BigRational, BigRational)>> {
    w.re.iter()
        .zip(&w.im)
        .map(|(r, i)| {
            r.iter()
                .zip(i)
                .map(|(&(rn, rd), &(im_n, im_d))| {
                    (
                        BigRational::new(rn.into(), rd.into()),
                        BigRational::new(im_n.into(), im_d.into()),
                    )
                })
                .collect()
        })
        .collect()
}

/// True when the witness has no nonzero off-diagonal entry.
pub fn witness_is_diagonal(w: &WitnessEntry) -> bool {
    witness_operator_entries(w).iter().enumerate().all(|(i, row)| {
        row.iter()
            .enumerate()
            .all(|(j, (re, im))| i == j || (re.is_zero() && im.is_zero()))
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::lemma1_set;
    use crate::verifier::certify_nonlocal;

    #[test]
    fn state_set_round_trip() {
        let set = lemma1_set(3).unwrap();
        let json = StateSetDocument::from_set(&set).unwrap().to_json();
        assert!(json.contains("\"format_version\": \"1\""));
        let back = parse_state_set(&json).unwrap();
        assert_eq!(back, set);
    }

    #[test]
    fn syntax_errors_carry_location() {
        let err = parse_state_set("{\n  \"format_version\": \"1\",\n  \"dims\": [3, 3,\n").unwrap_err();
        assert!(matches!(err, DocumentError::Syntax { line: 4, .. }), "{err}");
    }

    #[test]
    fn semantic_errors_carry_location() {
        let text = r#"{"format_version":"1","dims":[2,2,2],
            "states":[{"label":"s","parties":[[[0,1]],[[2,1]],[[0,1]]]}]}"#;
        let err = parse_state_set(text).unwrap_err();
        assert_eq!(
            err.to_string(),
            "states[0] (s) party 1: basis index 2 out of range for local dimension 2"
        );
        let text = r#"{"format_version":"1","dims":[2,2,2],
            "states":[{"label":"s","parties":[[[0,1]],[[0,1]]]}]}"#;
        assert!(matches!(
            parse_state_set(text),
            Err(DocumentError::Invalid { .. })
        ));
        let text = r#"{"format_version":"2","dims":[2,2,2],"states":[]}"#;
        assert!(matches!(parse_state_set(text), Err(DocumentError::Version(_))));
    }

    #[test]
    fn certificate_round_trip_and_revalidation() {
        let cert = certify_nonlocal(&lemma1_set(3).unwrap());
        let doc = CertificateDocument::from_certificate(&cert, None).unwrap();
        let json = doc.to_json();
        assert_eq!(CertificateDocument::parse(&json).unwrap(), doc);

        let tampered = json.replace(
            "\"conclusion\": \"CertifiedFirstRoundTrivial\"",
            "\"conclusion\": \"NontrivialMeasurementExists\"",
        );
        assert!(matches!(
            CertificateDocument::parse(&tampered),
            Err(DocumentError::Inconsistent(_))
        ));
        let tampered = json.replacen("\"solution_dim\": 1", "\"solution_dim\": 2", 1);
        assert!(CertificateDocument::parse(&tampered).is_err());
    }
}
