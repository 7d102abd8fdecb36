//! Set sizes of these constructions against earlier ones.

use std::fmt;

use crate::error::{Error, Result};

/// The other n = 9, d = 3 set size quoted alongside `n(2d-3)+1 = 28`; it has no
/// formula of its own here.
pub const PRIOR_MULTIPARTITE_N9_D3_ALT: u64 = 36;

pub const PRIOR_TRIPARTITE_LABEL: &str = "2(n1+n3)-3";
pub const PRIOR_MULTIPARTITE_LABEL: &str = "n(2d-3)+1";

fn check_tripartite(n1: u64, n2: u64, n3: u64) -> Result<()> {
    if 3 <= n1 && n1 <= n2 && n2 <= n3 {
        Ok(())
    } else {
        Err(Error::InvalidParameters(format!(
            "need 3 <= n1 <= n2 <= n3, got ({n1},{n2},{n3})"
        )))
    }
}

/// `2(n2 + n3 - 1) - n1`.
pub fn cardinality_ours_tripartite(n1: u64, n2: u64, n3: u64) -> Result<u64> {
    check_tripartite(n1, n2, n3)?;
    Ok(2 * (n2 + n3 - 1) - n1)
}

/// `2(n1 + n3) - 3`.
pub fn cardinality_prior_tripartite(n1: u64, n2: u64, n3: u64) -> Result<u64> {
    check_tripartite(n1, n2, n3)?;
    Ok(2 * (n1 + n3) - 3)
}

/// `n2 < (3 n1 - 1) / 2`, evaluated as `2 n2 < 3 n1 - 1`.
pub fn advantage_condition(n1: u64, n2: u64) -> bool {
    2 * n2 + 1 < 3 * n1
}

/// `(ours, prior)` on `n` parties of dimension `d`.
pub fn cardinality_multipartite_uniform(n: u64, d: u64) -> Result<(u64, u64)> {
    if n <= 6 || d < 3 {
        return Err(Error::InvalidParameters(format!(
            "need n > 6 and d >= 3, got n={n}, d={d}"
        )));
    }
    let blocks = match n % 3 {
        0 => n / 3,
        1 => n.div_ceil(3),
        _ => (n + 1) / 3,
    };
    Ok((blocks * (3 * d - 2), n * (2 * d - 3) + 1))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Params {
    Tripartite(u64, u64, u64),
    Multipartite { n: u64, d: u64 },
}

impl fmt::Display for Params {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Params::Tripartite(a, b, c) => write!(f, "{a}x{b}x{c}"),
            Params::Multipartite { n, d } => write!(f, "{n}x{d}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ComparisonRow {
    pub params: Params,
    pub ours: u64,
    pub prior: u64,
    pub prior_label: &'static str,
    pub advantage: i64,
}

impl ComparisonRow {
    pub fn evaluate(params: Params) -> Result<Self> {
        let (ours, prior, prior_label) = match params {
            Params::Tripartite(a, b, c) => (
                cardinality_ours_tripartite(a, b, c)?,
                cardinality_prior_tripartite(a, b, c)?,
                PRIOR_TRIPARTITE_LABEL,
            ),
            Params::Multipartite { n, d } => {
                let (ours, prior) = cardinality_multipartite_uniform(n, d)?;
                (ours, prior, PRIOR_MULTIPARTITE_LABEL)
            }
        };
        Ok(ComparisonRow {
            params,
            ours,
            prior,
            prior_label,
            advantage: prior as i64 - ours as i64,
        })
    }

    pub fn csv_line(&self) -> String {
        format!(
            "{},{},{},{},{}",
            self.params, self.ours, self.prior, self.prior_label, self.advantage
        )
    }
}

pub const CSV_HEADER: &str = "params,ours,prior,prior_label,advantage";

/// One row per input tuple, in input order; invalid tuples yield their error.
pub fn comparison_table(grid: &[Params]) -> Vec<Result<ComparisonRow>> {
    grid.iter().map(|&p| ComparisonRow::evaluate(p)).collect()
}

/// All `(n1, n2, n3)` with `3 <= n1 <= n2 <= n3 <= max`.
pub fn tripartite_grid(max: u64) -> Vec<Params> {
    let mut out = Vec::new();
    for n1 in 3..=max {
        for n2 in n1..=max {
            for n3 in n2..=max {
                out.push(Params::Tripartite(n1, n2, n3));
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tripartite_formulas() {
        assert_eq!(cardinality_ours_tripartite(3, 3, 3).unwrap(), 7);
        assert_eq!(cardinality_ours_tripartite(3, 4, 5).unwrap(), 13);
        assert_eq!(cardinality_ours_tripartite(4, 4, 4).unwrap(), 10);
        assert_eq!(cardinality_prior_tripartite(3, 3, 3).unwrap(), 9);
        assert_eq!(cardinality_prior_tripartite(3, 4, 5).unwrap(), 13);
        assert_eq!(cardinality_prior_tripartite(3, 3, 4).unwrap(), 11);
        assert!(cardinality_ours_tripartite(2, 3, 3).is_err());
        assert!(cardinality_prior_tripartite(4, 3, 5).is_err());
    }

    #[test]
    fn advantage_examples() {
        assert!(advantage_condition(4, 4));
        assert!(!advantage_condition(3, 4));
        assert!(advantage_condition(3, 3));
    }

    #[test]
    fn multipartite_formulas() {
        assert_eq!(cardinality_multipartite_uniform(9, 3).unwrap(), (21, 28));
        assert_eq!(cardinality_multipartite_uniform(7, 3).unwrap(), (21, 22));
        assert_eq!(cardinality_multipartite_uniform(8, 3).unwrap(), (21, 25));
        assert!(cardinality_multipartite_uniform(6, 3).is_err());
        assert!(cardinality_multipartite_uniform(9, 2).is_err());
    }

    #[test]
    fn table_rows() {
        let rows = comparison_table(&[Params::Tripartite(3, 3, 3)]);
        let r = rows[0].as_ref().unwrap();
        assert_eq!((r.ours, r.prior, r.advantage), (7, 9, 2));

        let rows = comparison_table(&[Params::Multipartite { n: 9, d: 3 }]);
        let r = rows[0].as_ref().unwrap();
        assert_eq!((r.ours, r.prior, r.advantage), (21, 28, 7));
        assert_eq!(r.csv_line(), "9x3,21,28,n(2d-3)+1,7");

        assert!(comparison_table(&[]).is_empty());
        assert!(comparison_table(&[Params::Tripartite(5, 4, 3)])[0].is_err());
    }

    #[test]
    fn grid_enumeration() {
        assert_eq!(
            tripartite_grid(4),
            [
                Params::Tripartite(3, 3, 3),
                Params::Tripartite(3, 3, 4),
                Params::Tripartite(3, 4, 4),
                Params::Tripartite(4, 4, 4),
            ]
        );
        assert_eq!(tripartite_grid(6).len(), 20);
        assert!(tripartite_grid(2).is_empty());
    }
}
