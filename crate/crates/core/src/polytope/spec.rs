use alloc::collections::BTreeSet;
use alloc::format;
use alloc::vec::Vec;

use crate::error::{Error, Result};

/// Coefficient attached to a monomial.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CoeffSpec {
    /// Some unspecified non-zero element; enough for every polyhedral computation.
    SymbolicNonzero,
    /// A concrete representative in the prime field.
    PrimeFieldValue(i64),
}

impl CoeffSpec {
    /// Representative in `0..p`, if concrete.
    pub fn reduce(self, p: u64) -> Option<u64> {
        match self {
            CoeffSpec::SymbolicNonzero => None,
            CoeffSpec::PrimeFieldValue(v) => Some(v.rem_euclid(p as i64) as u64),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Term {
    pub coeff: CoeffSpec,
    pub exp: Vec<i64>,
}

impl Term {
    pub fn new(coeff: CoeffSpec, exp: Vec<i64>) -> Self {
        Term { coeff, exp }
    }

    pub fn is_constant(&self) -> bool {
        self.exp.iter().all(|&e| e == 0)
    }
}

/// A Laurent polynomial in `n` variables given by its terms.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LaurentPolySpec {
    n: usize,
    terms: Vec<Term>,
}

impl LaurentPolySpec {
    pub fn new(n: usize, terms: Vec<Term>) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidSpec("dimension must be at least 1".into()));
        }
        if terms.is_empty() {
            return Err(Error::InvalidSpec("polynomial has no terms".into()));
        }
        let mut seen = BTreeSet::new();
        for (i, t) in terms.iter().enumerate() {
            if t.exp.len() != n {
                return Err(Error::InvalidSpec(format!(
                    "term {i}: exponent vector has length {}, expected {n}",
                    t.exp.len()
                )));
            }
            if !seen.insert(t.exp.clone()) {
                return Err(Error::InvalidSpec(format!("term {i}: duplicate exponent vector {:?}", t.exp)));
            }
        }
        Ok(LaurentPolySpec { n, terms })
    }

    /// Convenience constructor with every coefficient symbolic.
    pub fn symbolic<E: AsRef<[i64]>>(n: usize, exps: &[E]) -> Result<Self> {
        let terms = exps
            .iter()
            .map(|e| Term::new(CoeffSpec::SymbolicNonzero, e.as_ref().to_vec()))
            .collect();
        Self::new(n, terms)
    }

    /// Convenience constructor with concrete coefficients.
    pub fn concrete<E: AsRef<[i64]>>(n: usize, terms: &[(i64, E)]) -> Result<Self> {
        let terms = terms
            .iter()
            .map(|(c, e)| Term::new(CoeffSpec::PrimeFieldValue(*c), e.as_ref().to_vec()))
            .collect();
        Self::new(n, terms)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    pub fn exponents(&self) -> impl Iterator<Item = &[i64]> {
        self.terms.iter().map(|t| t.exp.as_slice())
    }

    pub fn constant_term(&self) -> Option<&Term> {
        self.terms.iter().find(|t| t.is_constant())
    }

    /// Checks that every concrete coefficient is non-zero modulo `p`.
    pub fn check_prime(&self, p: u64) -> Result<()> {
        for (i, t) in self.terms.iter().enumerate() {
            if t.coeff.reduce(p) == Some(0) {
                return Err(Error::InvalidSpec(format!("term {i}: coefficient vanishes modulo {p}")));
            }
        }
        Ok(())
    }

    /// Coefficients reduced modulo `p`; fails if any is symbolic or vanishes.
    pub fn concrete_coefficients(&self, p: u64) -> Result<Vec<u64>> {
        self.check_prime(p)?;
        self.terms
            .iter()
            .enumerate()
            .map(|(i, t)| {
                t.coeff
                    .reduce(p)
                    .ok_or_else(|| Error::InvalidSpec(format!("term {i}: coefficient is symbolic")))
            })
            .collect()
    }

    /// Sub-polynomial made of the terms selected by `keep`.
    pub fn restrict(&self, keep: impl Fn(&Term) -> bool) -> Result<Self> {
        let terms: Vec<Term> = self.terms.iter().filter(|t| keep(t)).cloned().collect();
        Self::new(self.n, terms)
    }

    /// Replaces every coefficient, in term order.
    pub fn with_coefficients(&self, coeffs: &[i64]) -> Result<Self> {
        if coeffs.len() != self.terms.len() {
            return Err(Error::InvalidSpec(format!(
                "{} coefficients supplied for {} terms",
                coeffs.len(),
                self.terms.len()
            )));
        }
        let terms = self
            .terms
            .iter()
            .zip(coeffs)
            .map(|(t, &c)| Term::new(CoeffSpec::PrimeFieldValue(c), t.exp.clone()))
            .collect();
        Self::new(self.n, terms)
    }

    /// True when every monomial has odd total degree, i.e. f(-x) = -f(x).
    pub fn is_odd(&self) -> bool {
        self.terms.iter().all(|t| t.exp.iter().sum::<i64>().rem_euclid(2) == 1)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_duplicates_and_bad_lengths() {
        assert!(LaurentPolySpec::symbolic(1, &[[1], [1]]).is_err());
        assert!(LaurentPolySpec::symbolic(2, &[alloc::vec![1]]).is_err());
        assert!(LaurentPolySpec::symbolic(0, &[[0i64; 0]]).is_err());
        assert!(LaurentPolySpec::new(1, alloc::vec![]).is_err());
    }

    #[test]
    fn coefficient_reduction() {
        let f = LaurentPolySpec::concrete(1, &[(3, [1]), (-1, [-1])]).unwrap();
        assert_eq!(f.concrete_coefficients(5).unwrap(), alloc::vec![3, 4]);
        assert!(f.check_prime(3).is_err());
        let s = LaurentPolySpec::symbolic(1, &[[1]]).unwrap();
        assert!(s.concrete_coefficients(5).is_err());
    }

    #[test]
    fn oddness() {
        assert!(LaurentPolySpec::symbolic(2, &[[1, 0], [-1, 2]]).unwrap().is_odd());
        assert!(!LaurentPolySpec::symbolic(2, &[[1, 1]]).unwrap().is_odd());
    }
}
