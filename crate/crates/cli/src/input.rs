//! The input document: `{"n": int, "p": int?, "terms": [{"coeff": int | "*", "exp": [int; n]}]}`.

use std::path::Path;

use expsum_core::polytope::{CoeffSpec, LaurentPolySpec, Term};
use serde::Deserialize;

use crate::error::{CliError, Result};

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct Document {
    n: usize,
    #[serde(default)]
    p: Option<u64>,
    terms: Vec<TermDoc>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct TermDoc {
    coeff: CoeffDoc,
    exp: Vec<i64>,
}

#[derive(Debug, Deserialize)]
#[serde(untagged)]
enum CoeffDoc {
    Int(i64),
    Symbol(String),
}

/// A parsed input document.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Input {
    pub spec: LaurentPolySpec,
    pub p: Option<u64>,
}

pub fn parse_input(text: &str) -> Result<Input> {
    let doc: Document = serde_json::from_str(text).map_err(|e| {
        CliError::Input(format!("malformed input at line {} column {}: {e}", e.line(), e.column()))
    })?;
    let mut terms = Vec::with_capacity(doc.terms.len());
    for (i, t) in doc.terms.into_iter().enumerate() {
        let coeff = match t.coeff {
            CoeffDoc::Int(v) => CoeffSpec::PrimeFieldValue(v),
            CoeffDoc::Symbol(s) if s == "*" => CoeffSpec::SymbolicNonzero,
            CoeffDoc::Symbol(s) => {
                return Err(CliError::Input(format!(
                    "terms[{i}].coeff: expected an integer or \"*\", got {s:?}"
                )))
            }
        };
        terms.push(Term::new(coeff, t.exp));
    }
    let spec = LaurentPolySpec::new(doc.n, terms).map_err(|e| CliError::Input(e.to_string()))?;
    Ok(Input { spec, p: doc.p })
}

pub fn read_input(path: &Path) -> Result<Input> {
    let text = std::fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_owned(),
        source,
    })?;
    parse_input(&text)
}

/// Parses `a,b,c` into integers.
pub fn parse_coeff_list(s: &str) -> Result<Vec<i64>> {
    s.split(',')
        .map(|x| {
            x.trim()
                .parse::<i64>()
                .map_err(|_| CliError::Input(format!("--coeffs: {x:?} is not an integer")))
        })
        .collect()
}
