//! The two JSON document formats and their conversion to library types.

use std::path::Path;

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::{Deserialize, Serialize};
use toricstack::cox::{MorphismData, SparsePolynomial};
use toricstack::fan::{maximal_cones, FanViolation, SimplicialFan};
use toricstack::gerbe::PicClass;
use toricstack::lattice::IntegerMatrix;
use toricstack::stacky::{validate_data, DataViolation, StackyData};

use crate::error::CliError;
use crate::json_int::{bigs, ints, JsonInt};

pub const SCHEMA_VERSION: &str = "1.0";

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StackyDataDocument {
    pub schema_version: String,
    pub lattice_rank: usize,
    pub rays: Vec<Vec<JsonInt>>,
    /// Maximal cones suffice; faces are added on load.
    pub cones: Vec<Vec<usize>>,
    #[serde(default)]
    pub r: Vec<JsonInt>,
    #[serde(default)]
    pub b: Vec<Vec<JsonInt>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TermDocument {
    /// `"p/q"` or `"p"`.
    pub coefficient: String,
    pub exponents: Vec<u32>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MorphismDocument {
    pub schema_version: String,
    pub source: StackyDataDocument,
    pub target: StackyDataDocument,
    /// One term list per target ray; an empty list is the zero polynomial.
    pub polynomials: Vec<Vec<TermDocument>>,
    #[serde(default)]
    pub chi: Vec<Vec<JsonInt>>,
}

fn check_version(v: &str) -> Result<(), CliError> {
    if v.split('.').next() == SCHEMA_VERSION.split('.').next() {
        Ok(())
    } else {
        Err(CliError::invalid(
            "unsupported_schema_version",
            format!("schema_version {v:?} is not supported (expected {SCHEMA_VERSION})"),
        ))
    }
}

fn fan_error(v: FanViolation) -> CliError {
    CliError::Data(DataViolation::Fan(v))
}

impl StackyDataDocument {
    /// Builds the data, closing the cone list under faces, and validates it.
    pub fn to_data(&self) -> Result<StackyData, CliError> {
        check_version(&self.schema_version)?;
        let n = self.rays.len();
        for cone in &self.cones {
            if let Some(&index) = cone.iter().find(|&&k| k >= n) {
                return Err(fan_error(FanViolation::RayIndexOutOfRange {
                    cone: cone.clone(),
                    index,
                }));
            }
            let mut sorted = cone.clone();
            sorted.sort_unstable();
            if sorted.windows(2).any(|w| w[0] == w[1]) {
                return Err(fan_error(FanViolation::RepeatedRayInCone { cone: cone.clone() }));
            }
        }
        let rays: Vec<Vec<BigInt>> = self.rays.iter().map(|r| bigs(r)).collect();
        let fan = SimplicialFan::new(self.lattice_rank, rays, self.cones.clone()).closed_under_faces();
        if let Some(row) = self.b.iter().find(|row| row.len() != n) {
            return Err(CliError::Data(DataViolation::BColumnCount {
                expected: n,
                found: row.len(),
            }));
        }
        let rows: Vec<Vec<BigInt>> = self.b.iter().map(|r| bigs(r)).collect();
        let b = IntegerMatrix::from_rows(n, &rows);
        let data = StackyData::new(fan, bigs(&self.r), b);
        validate_data(&data).map_err(CliError::Data)?;
        Ok(data)
    }

    /// Document listing only the maximal cones.
    pub fn from_data(data: &StackyData) -> Self {
        let fan = data.fan();
        StackyDataDocument {
            schema_version: SCHEMA_VERSION.to_string(),
            lattice_rank: fan.lattice_rank(),
            rays: fan.rays().iter().map(|r| ints(r)).collect(),
            cones: maximal_cones(fan),
            r: ints(data.r()),
            b: (0..data.num_roots()).map(|i| ints(data.b_row(i))).collect(),
        }
    }
}

pub fn parse_rational(s: &str) -> Result<BigRational, CliError> {
    let bad = || CliError::invalid("bad_coefficient", format!("{s:?} is not a rational number p/q"));
    let q: BigRational = s.trim().parse().map_err(|_| bad())?;
    Ok(q)
}

pub fn format_rational(q: &BigRational) -> String {
    q.to_string()
}

impl MorphismDocument {
    pub fn to_morphism(&self) -> Result<MorphismData, CliError> {
        check_version(&self.schema_version)?;
        let source = self.source.to_data()?;
        let target = self.target.to_data()?;
        let n = source.num_rays();
        let polys = self
            .polynomials
            .iter()
            .map(|terms| {
                let parsed = terms
                    .iter()
                    .map(|t| Ok((parse_rational(&t.coefficient)?, t.exponents.clone())))
                    .collect::<Result<Vec<_>, CliError>>()?;
                SparsePolynomial::from_terms(n, parsed).map_err(CliError::Core)
            })
            .collect::<Result<Vec<_>, _>>()?;
        let chi = self.chi.iter().map(|c| PicClass::new(bigs(c))).collect();
        MorphismData::new(source, target, polys, chi).map_err(CliError::Core)
    }

    pub fn from_morphism(md: &MorphismData) -> Self {
        MorphismDocument {
            schema_version: SCHEMA_VERSION.to_string(),
            source: StackyDataDocument::from_data(md.source()),
            target: StackyDataDocument::from_data(md.target()),
            polynomials: md
                .polys()
                .iter()
                .map(|p| {
                    p.terms()
                        .map(|(e, c)| TermDocument {
                            coefficient: format_rational(c),
                            exponents: e.clone(),
                        })
                        .collect()
                })
                .collect(),
            chi: md.chi().iter().map(|c| ints(&c.representative)).collect(),
        }
    }
}

pub fn read_input(path: &Path) -> Result<Vec<u8>, CliError> {
    std::fs::read(path).map_err(|e| CliError::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    })
}

pub fn parse_json<T: for<'de> Deserialize<'de>>(path: &Path, bytes: &[u8]) -> Result<T, CliError> {
    serde_json::from_slice(bytes).map_err(|e| CliError::Parse {
        path: path.display().to_string(),
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use toricstack::fixtures::weighted_root_gerbe;

    fn root_gerbe_json() -> &'static str {
        r#"{"schema_version":"1.0","lattice_rank":1,"rays":[[-3],[2]],"cones":[[0],[1]],"r":[2],"b":[[0,1]]}"#
    }

    #[test]
    fn parses_and_round_trips() {
        let doc: StackyDataDocument = serde_json::from_str(root_gerbe_json()).unwrap();
        let data = doc.to_data().unwrap();
        assert_eq!(data, weighted_root_gerbe());
        assert_eq!(StackyDataDocument::from_data(&data), doc);
    }

    #[test]
    fn rejects_bad_input() {
        let zero_root = root_gerbe_json().replace("\"r\":[2]", "\"r\":[0]");
        let doc: StackyDataDocument = serde_json::from_str(&zero_root).unwrap();
        let err = doc.to_data().unwrap_err();
        assert_eq!(err.code(), "non_positive_root");
        assert!(err.to_string().contains("positive non zero integers"));

        let ragged = root_gerbe_json().replace("[[0,1]]", "[[0]]");
        let doc: StackyDataDocument = serde_json::from_str(&ragged).unwrap();
        assert_eq!(doc.to_data().unwrap_err().code(), "b_column_count");

        let missing = root_gerbe_json().replace("[[0],[1]]", "[[0],[3]]");
        let doc: StackyDataDocument = serde_json::from_str(&missing).unwrap();
        assert_eq!(doc.to_data().unwrap_err().code(), "ray_index_out_of_range");

        assert!(serde_json::from_str::<StackyDataDocument>(&root_gerbe_json().replace("\"r\"", "\"roots\"")).is_err());
    }

    #[test]
    fn coefficients() {
        assert_eq!(parse_rational("-3/6").unwrap(), BigRational::new((-1).into(), 2.into()));
        assert_eq!(parse_rational("4").unwrap(), BigRational::from_integer(4.into()));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
    }
}
