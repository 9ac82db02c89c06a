use serde::{Deserialize, Serialize};

use super::{derive_ldiv, derive_rdiv, Element, FiniteAlgebra, Table};
use crate::error::{Error, Result};

/// On-disk form of an algebra: `{"size", "mul", "ldiv"?, "rdiv"?, "point"?}`
/// with row-major tables, `table[x][y] = x o y`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AlgebraFile {
    pub size: usize,
    pub mul: Vec<Vec<Element>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ldiv: Option<Vec<Vec<Element>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rdiv: Option<Vec<Vec<Element>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub point: Option<Element>,
}

impl AlgebraFile {
    /// Validates the file. Missing divisions are derived from `mul` when
    /// `derive` is set and the table permits it; otherwise they stay absent.
    pub fn into_algebra(self, derive: bool) -> Result<FiniteAlgebra> {
        if self.mul.len() != self.size {
            return Err(Error::BadShape {
                what: "mul",
                expected: self.size,
            });
        }
        let mul = Table::from_rows("mul", &self.mul)?;
        let ldiv = match self.ldiv {
            Some(rows) => Some(Table::from_rows("ldiv", &rows)?),
            None if derive => derive_ldiv(&mul).ok(),
            None => None,
        };
        let rdiv = match self.rdiv {
            Some(rows) => Some(Table::from_rows("rdiv", &rows)?),
            None if derive => derive_rdiv(&mul).ok(),
            None => None,
        };
        FiniteAlgebra::new(mul, ldiv, rdiv, self.point)
    }
}

impl From<&FiniteAlgebra> for AlgebraFile {
    fn from(a: &FiniteAlgebra) -> Self {
        AlgebraFile {
            size: a.size(),
            mul: a.mul.rows(),
            ldiv: a.ldiv.as_ref().map(Table::rows),
            rdiv: a.rdiv.as_ref().map(Table::rows),
            point: a.point,
        }
    }
}

impl FiniteAlgebra {
    pub fn from_json(text: &str, derive: bool) -> Result<Self> {
        serde_json::from_str::<AlgebraFile>(text)?.into_algebra(derive)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&AlgebraFile::from(self)).expect("algebra file serializes")
    }

    pub fn load(path: &std::path::Path, derive: bool) -> Result<Self> {
        Self::from_json(&std::fs::read_to_string(path)?, derive)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn missing_divisions_are_derived_on_request() {
        let text = r#"{"size": 2, "mul": [[0,1],[1,0]]}"#;
        let a = FiniteAlgebra::from_json(text, true).unwrap();
        assert!(a.ldiv.is_some() && a.rdiv.is_some());
        let b = FiniteAlgebra::from_json(text, false).unwrap();
        assert!(b.ldiv.is_none() && b.rdiv.is_none());
    }

    #[test]
    fn underivable_division_stays_absent() {
        let text = r#"{"size": 2, "mul": [[1,0],[1,0]]}"#;
        let a = FiniteAlgebra::from_json(text, true).unwrap();
        assert!(a.ldiv.is_some());
        assert!(a.rdiv.is_none());
    }

    #[test]
    fn rejects_out_of_range_entries_and_points() {
        assert!(FiniteAlgebra::from_json(r#"{"size": 2, "mul": [[0,2],[1,0]]}"#, true).is_err());
        assert!(
            FiniteAlgebra::from_json(r#"{"size": 2, "mul": [[0,1],[1,0]], "point": 2}"#, true)
                .is_err()
        );
        assert!(FiniteAlgebra::from_json(r#"{"size": 3, "mul": [[0,1],[1,0]]}"#, true).is_err());
    }

    #[test]
    fn json_round_trip() {
        let a = super::super::cyclic_group(3)
            .unwrap()
            .with_point(0)
            .unwrap();
        let back = FiniteAlgebra::from_json(&a.to_json(), false).unwrap();
        assert_eq!(a, back);
    }
}
