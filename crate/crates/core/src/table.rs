//! The reference table of h*-vectors and the regression harness comparing
//! computed values against it.

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::ehrhart::{laplacian_hstar, HstarMethod, IntPolynomial};
use crate::error::{invalid, Error, Result};
use crate::{Budget, Exec};

const EMBEDDED: &str = include_str!("../data/table1.json");

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TableRow {
    pub d: usize,
    pub hstar: Vec<u64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReferenceTable {
    pub version: u32,
    #[serde(default)]
    pub caption: String,
    pub rows: Vec<TableRow>,
}

impl ReferenceTable {
    pub fn embedded() -> Self {
        Self::parse(EMBEDDED).expect("embedded table is valid")
    }

    pub fn parse(text: &str) -> Result<Self> {
        let t: ReferenceTable = serde_json::from_str(text).map_err(|e| invalid(format!("reference table: {e}")))?;
        let mut ds: Vec<usize> = t.rows.iter().map(|r| r.d).collect();
        ds.sort_unstable();
        if ds.windows(2).any(|w| w[0] == w[1]) {
            return Err(invalid("reference table repeats a row"));
        }
        Ok(t)
    }

    pub fn row(&self, d: usize) -> Option<&[u64]> {
        self.rows.iter().find(|r| r.d == d).map(|r| r.hstar.as_slice())
    }
}

/// One entry where the computed vector differs from the table.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EntryDiff {
    pub index: usize,
    pub expected: Option<String>,
    pub computed: Option<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct OracleResult {
    pub method: HstarMethod,
    /// `None` when the method was skipped for budget reasons.
    pub hstar: Option<Vec<String>>,
    pub agrees: Option<bool>,
}

#[derive(Clone, Debug, Serialize)]
pub struct RowCheck {
    pub d: usize,
    pub structural: Vec<String>,
    pub expected: Option<Vec<u64>>,
    /// `None` when the table has no row for this `d`.
    pub matches_table: Option<bool>,
    pub diff: Vec<EntryDiff>,
    pub oracles: Vec<OracleResult>,
}

impl RowCheck {
    pub fn passed(&self) -> bool {
        self.matches_table != Some(false) && self.oracles.iter().all(|o| o.agrees != Some(false))
    }
}

fn strings(p: &IntPolynomial) -> Vec<String> {
    p.coeffs().iter().map(ToString::to_string).collect()
}

pub fn diff(expected: &[u64], computed: &IntPolynomial) -> Vec<EntryDiff> {
    let n = expected.len().max(computed.len());
    (0..n)
        .filter_map(|i| {
            let e = expected.get(i).map(|&x| BigInt::from(x));
            let c = computed.coeffs().get(i).cloned();
            (e != c).then(|| EntryDiff {
                index: i,
                expected: e.map(|x| x.to_string()),
                computed: c.map(|x| x.to_string()),
            })
        })
        .collect()
}

/// Cross-check methods tried for `d`, in addition to the structural one.
pub fn oracle_methods(d: usize) -> Vec<HstarMethod> {
    let mut m = vec![HstarMethod::Census, HstarMethod::Ehrhart];
    if d % 2 == 1 {
        m.push(HstarMethod::Fundamental);
    }
    m
}

/// Compares the structural h* for `d = 1..=max_d` with `table`, and with
/// every other method that fits the budget.
pub fn verify_table(table: &ReferenceTable, max_d: usize, budget: &Budget, exec: Exec) -> Result<Vec<RowCheck>> {
    (1..=max_d)
        .map(|d| {
            let structural = laplacian_hstar(d, HstarMethod::Structural, budget, exec)?;
            let expected = table.row(d).map(<[u64]>::to_vec);
            let diff = expected.as_deref().map(|e| diff(e, &structural)).unwrap_or_default();
            let oracles = oracle_methods(d)
                .into_iter()
                .map(|method| match laplacian_hstar(d, method, budget, exec) {
                    Ok(h) => Ok(OracleResult {
                        method,
                        agrees: Some(h == structural),
                        hstar: Some(strings(&h)),
                    }),
                    Err(Error::Budget { .. }) => Ok(OracleResult {
                        method,
                        hstar: None,
                        agrees: None,
                    }),
                    Err(e) => Err(e),
                })
                .collect::<Result<Vec<_>>>()?;
            Ok(RowCheck {
                d,
                structural: strings(&structural),
                matches_table: expected.as_ref().map(|_| diff.is_empty()),
                expected,
                diff,
                oracles,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn embedded_rows() {
        let t = ReferenceTable::embedded();
        assert_eq!(t.rows.len(), 8);
        assert_eq!(t.row(2), Some(&[1u64, 10, 5][..]));
        assert_eq!(t.row(9), None);
    }

    #[test]
    fn duplicate_rows_rejected() {
        let text = r#"{"version":1,"rows":[{"d":1,"hstar":[1]},{"d":1,"hstar":[1]}]}"#;
        assert!(ReferenceTable::parse(text).is_err());
    }

    #[test]
    fn small_rows_pass_with_oracles() {
        let rows = verify_table(&ReferenceTable::embedded(), 3, &Budget::default(), Exec::Parallel).unwrap();
        for r in &rows {
            assert!(r.passed(), "{r:?}");
            assert!(r.oracles.iter().any(|o| o.agrees == Some(true)));
        }
    }

    #[test]
    fn tampered_entry_is_reported() {
        let mut t = ReferenceTable::embedded();
        t.rows[1].hstar[1] = 11;
        let rows = verify_table(&t, 2, &Budget::default(), Exec::Sequential).unwrap();
        assert!(!rows[1].passed());
        assert_eq!(rows[1].diff.len(), 1);
        assert_eq!(rows[1].diff[0].index, 1);
    }
}
