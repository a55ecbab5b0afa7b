//! Expected values for g, shipped as `fixtures/paper-expected.record`.

use std::path::Path;

use expsum_core::exact::Rational;
use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::error::{CliError, Result};

pub const BUILTIN: &str = include_str!("../fixtures/paper-expected.record");
pub const G_SPEC: &str = include_str!("../fixtures/g.spec");

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FacetFixture {
    pub equation: Vec<i64>,
    /// Vertex labels: 0 is the origin, `i` is the `i`-th exponent.
    pub vertices: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RootFixture {
    pub count: usize,
    pub weight: i64,
    pub slopes: Vec<i64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PaperFixture {
    pub kind: String,
    pub exponents: Vec<Vec<i64>>,
    pub facets: Vec<FacetFixture>,
    /// Faces through the origin, grouped by dimension.
    pub origin_faces: Vec<Vec<Vec<usize>>>,
    pub origin_face_counts: Vec<usize>,
    pub denominator: u64,
    pub normalized_volume: u64,
    pub degree: usize,
    pub weight_counts: Vec<u64>,
    pub hodge_numbers: Vec<u64>,
    pub hodge_polygon: Vec<(u64, String)>,
    pub facet_det_abs: u64,
    pub ordinary_primes: Vec<u64>,
    pub derived_slope_multiplicities: Vec<u64>,
    pub weight_ledger: Vec<i64>,
    pub conjectured_w5: i64,
    /// Exponents `i` of the factors `1 - q^i T` of L*.
    pub lstar_trivial_factors: Vec<u32>,
    pub l_trivial_factors: Vec<u32>,
    pub nontrivial_roots: RootFixture,
}

impl PaperFixture {
    pub fn builtin() -> Self {
        Self::parse(BUILTIN).expect("the shipped fixture parses")
    }

    pub fn parse(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| {
            CliError::Input(format!("malformed fixture at line {} column {}: {e}", e.line(), e.column()))
        })
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|source| CliError::Io {
            path: path.to_owned(),
            source,
        })?;
        Self::parse(&text)
    }

    pub fn hodge_polygon_points(&self) -> Result<Vec<(u64, Rational)>> {
        self.hodge_polygon
            .iter()
            .map(|(x, y)| Ok((*x, parse_rational(y)?)))
            .collect()
    }
}

/// Inverse of the `num/den` record encoding; a bare integer is accepted too.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let bad = || CliError::Input(format!("{s:?} is not a rational"));
    let (n, d) = s.split_once('/').unwrap_or((s, "1"));
    let n: BigInt = n.trim().parse().map_err(|_| bad())?;
    let d: BigInt = d.trim().parse().map_err(|_| bad())?;
    if d == BigInt::from(0) {
        return Err(bad());
    }
    Ok(Rational::new(n, d))
}
