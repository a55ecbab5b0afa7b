//! Facet restrictions, the diagonal non-degeneracy and ordinariness criteria,
//! their merge over all off-origin facets, and predicted slope multiplicities.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::exact::{det_exact, require_prime, smith_normal_form, IntMatrix, Rational};
use crate::hodge::HodgeData;
use crate::polytope::{build_polytope, LaurentPolySpec, Polytope, Term};

/// `f^δ`: the terms of `f` lying on an off-origin facet.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FacetRestriction {
    pub facet: usize,
    /// Indices into `f.terms()`.
    pub term_indices: Vec<usize>,
    pub spec: LaurentPolySpec,
    /// Exactly `n` terms with a non-singular exponent matrix.
    pub is_diagonal: bool,
}

pub fn facet_restriction(f: &LaurentPolySpec, p: &Polytope, facet: usize) -> Result<FacetRestriction> {
    let form = p
        .facets_off_origin()
        .get(facet)
        .ok_or_else(|| Error::InvalidSpec(format!("no off-origin facet {facet}")))?;
    let term_indices: Vec<usize> = f
        .terms()
        .iter()
        .enumerate()
        .filter(|(_, t)| form.eval(&t.exp).is_one())
        .map(|(i, _)| i)
        .collect();
    let terms: Vec<Term> = term_indices.iter().map(|&i| f.terms()[i].clone()).collect();
    let is_diagonal = terms.len() == f.n() && {
        let m = IntMatrix::from_columns(&terms.iter().map(|t| t.exp.as_slice()).collect::<Vec<_>>());
        !det_exact(&m)?.is_zero()
    };
    Ok(FacetRestriction {
        facet,
        term_indices,
        spec: LaurentPolySpec::new(f.n(), terms)?,
        is_diagonal,
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DiagonalReport {
    pub facet: usize,
    /// Exponent vectors of the facet's terms as columns.
    pub vertex_matrix: IntMatrix,
    pub det_abs: BigInt,
    pub invariant_factors: Vec<BigInt>,
    pub largest_factor: BigInt,
}

impl DiagonalReport {
    pub fn new(r: &FacetRestriction) -> Result<Self> {
        if !r.is_diagonal {
            return Err(Error::Unsupported(format!(
                "facet {} restriction is not diagonal; the diagonal criteria do not apply",
                r.facet
            )));
        }
        let cols: Vec<&[i64]> = r.spec.exponents().collect();
        let vertex_matrix = IntMatrix::from_columns(&cols);
        let det_abs = det_exact(&vertex_matrix)?.abs();
        let invariant_factors: Vec<BigInt> = smith_normal_form(&vertex_matrix).invariant_factors().cloned().collect();
        let largest_factor = invariant_factors.last().cloned().unwrap_or_else(BigInt::one);
        Ok(DiagonalReport {
            facet: r.facet,
            vertex_matrix,
            det_abs,
            invariant_factors,
            largest_factor,
        })
    }
}

/// Non-degeneracy of a diagonal restriction at `p`: `gcd(p, det) = 1`.
pub fn diagonal_nondegenerate(rep: &DiagonalReport, p: u64) -> bool {
    rep.det_abs.gcd(&BigInt::from(p)).is_one()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Verdict {
    Ordinary,
    /// The available criterion is sufficient only and does not fire.
    Inconclusive,
    NotNonDegenerate,
}

impl Verdict {
    pub fn name(self) -> &'static str {
        match self {
            Verdict::Ordinary => "ordinary",
            Verdict::Inconclusive => "inconclusive",
            Verdict::NotNonDegenerate => "not-non-degenerate",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrdinarinessVerdict {
    pub verdict: Verdict,
    pub prime: u64,
    pub reason: String,
}

pub fn diagonal_ordinary_verdict(rep: &DiagonalReport, p: u64) -> OrdinarinessVerdict {
    let (verdict, reason) = if !diagonal_nondegenerate(rep, p) {
        (Verdict::NotNonDegenerate, format!("{p} divides det = {}", rep.det_abs))
    } else if rep.largest_factor.is_one() {
        (Verdict::Ordinary, format!("det = {} is prime to {p} and d_n = 1", rep.det_abs))
    } else if (BigInt::from(p) % &rep.largest_factor).is_one() {
        (Verdict::Ordinary, format!("{p} = 1 mod d_n = {}", rep.largest_factor))
    } else {
        (
            Verdict::Inconclusive,
            format!("{p} is prime to det = {} but not 1 mod d_n = {}", rep.det_abs, rep.largest_factor),
        )
    };
    OrdinarinessVerdict { verdict, prime: p, reason }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FacetVerdict {
    pub restriction: FacetRestriction,
    pub report: DiagonalReport,
    pub verdict: OrdinarinessVerdict,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GlobalOrdinariness {
    pub verdict: OrdinarinessVerdict,
    pub facets: Vec<FacetVerdict>,
}

/// Merges per-facet verdicts: any failure of non-degeneracy wins, then any
/// inconclusive facet, otherwise ordinary.
pub fn global_ordinariness(f: &LaurentPolySpec, p: u64) -> Result<GlobalOrdinariness> {
    require_prime(p)?;
    f.check_prime(p)?;
    let poly = build_polytope(f)?;
    let mut facets = Vec::new();
    for i in 0..poly.facets_off_origin().len() {
        let restriction = facet_restriction(f, &poly, i)?;
        let report = DiagonalReport::new(&restriction)?;
        let verdict = diagonal_ordinary_verdict(&report, p);
        facets.push(FacetVerdict {
            restriction,
            report,
            verdict,
        });
    }
    let worst = facets
        .iter()
        .map(|fv| fv.verdict.verdict)
        .max()
        .ok_or(Error::Empty("off-origin facets"))?;
    let reason = match worst {
        Verdict::Ordinary => format!("all {} facet restrictions are ordinary at {p}", facets.len()),
        _ => {
            let bad: Vec<String> = facets
                .iter()
                .filter(|fv| fv.verdict.verdict == worst)
                .map(|fv| format!("facet {}: {}", fv.report.facet, fv.verdict.reason))
                .collect();
            bad.join("; ")
        }
    };
    Ok(GlobalOrdinariness {
        verdict: OrdinarinessVerdict {
            verdict: worst,
            prime: p,
            reason,
        },
        facets,
    })
}

/// Slope multiset of an L-function, as `(slope, multiplicity)` in increasing slope order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SlopePrediction {
    pub entries: Vec<(Rational, u64)>,
    /// Shift applied relative to the Hodge slopes, if any.
    pub shift: Option<Rational>,
}

impl SlopePrediction {
    pub fn from_hodge(hd: &HodgeData) -> Self {
        let d = BigInt::from(hd.d);
        let entries = hd
            .h
            .iter()
            .enumerate()
            .filter(|(_, &m)| m > 0)
            .map(|(k, &m)| (Rational::new(BigInt::from(k), d.clone()), m))
            .collect();
        SlopePrediction { entries, shift: None }
    }

    pub fn degree(&self) -> u64 {
        self.entries.iter().map(|e| e.1).sum()
    }

    /// Every slope repeated by its multiplicity.
    pub fn slopes(&self) -> Vec<Rational> {
        self.entries
            .iter()
            .flat_map(|(s, m)| core::iter::repeat_n(s.clone(), *m as usize))
            .collect()
    }

    /// Removes one root of slope 0 (the trivial unit root) and shifts all
    /// remaining slopes by `shift`.
    pub fn without_unit_root_shifted(&self, shift: Rational) -> Result<Self> {
        let mut entries = Vec::new();
        let mut removed = false;
        for (s, m) in &self.entries {
            let m = if !removed && s.is_zero() {
                removed = true;
                m - 1
            } else {
                *m
            };
            if m > 0 {
                entries.push((s + &shift, m));
            }
        }
        if !removed {
            return Err(Error::Inconsistent("no slope-0 root to remove".into()));
        }
        let total = match &self.shift {
            Some(s) => s + &shift,
            None => shift,
        };
        Ok(SlopePrediction {
            entries,
            shift: Some(total),
        })
    }

    /// Multiplicity of slope exactly `k`, for integer `k`.
    pub fn multiplicity(&self, slope: &Rational) -> u64 {
        self.entries.iter().find(|(s, _)| s == slope).map_or(0, |e| e.1)
    }
}

/// Hodge slopes with multiplicities, available only when `f` is ordinary at `p`.
pub fn predicted_slopes(f: &LaurentPolySpec, p: u64) -> Result<SlopePrediction> {
    let g = global_ordinariness(f, p)?;
    if g.verdict.verdict != Verdict::Ordinary {
        return Err(Error::Unsupported(format!(
            "slopes are only predicted for ordinary input; verdict at {p} is {} ({})",
            g.verdict.verdict.name(),
            g.verdict.reason
        )));
    }
    let poly = build_polytope(f)?;
    let hd = HodgeData::compute(&poly, 0)?;
    Ok(SlopePrediction::from_hodge(&hd))
}

/// The trivial unit-root factor `1 - ζ_p^t T` contributed by the origin vertex.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TrivialFactor {
    pub prime: u64,
    /// Trace of the constant term to the prime field (0 when there is none).
    pub t: u64,
}

pub fn trivial_unit_root_descriptor(f: &LaurentPolySpec, p: u64) -> Result<Option<TrivialFactor>> {
    require_prime(p)?;
    let mut pts: Vec<&[i64]> = f.exponents().collect();
    let zero = alloc::vec![0i64; f.n()];
    pts.push(&zero);
    if !crate::polytope::origin_is_vertex(&pts) {
        return Ok(None);
    }
    let t = match f.constant_term() {
        None => 0,
        Some(term) => term
            .coeff
            .reduce(p)
            .ok_or_else(|| Error::InvalidSpec("constant term is symbolic".into()))?,
    };
    Ok(Some(TrivialFactor { prime: p, t }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::integer;

    fn laurent() -> LaurentPolySpec {
        LaurentPolySpec::concrete(1, &[(1, [1]), (1, [-1])]).unwrap()
    }

    fn square_of_x() -> LaurentPolySpec {
        LaurentPolySpec::concrete(1, &[(1, [2])]).unwrap()
    }

    #[test]
    fn restriction_of_segment() {
        let f = laurent();
        let p = build_polytope(&f).unwrap();
        let r = facet_restriction(&f, &p, 0).unwrap();
        assert_eq!(r.spec.terms().len(), 1);
        assert!(r.is_diagonal);
    }

    #[test]
    fn x_squared() {
        let f = square_of_x();
        let g2 = global_ordinariness(&f, 2).unwrap();
        assert_eq!(g2.verdict.verdict, Verdict::NotNonDegenerate);
        assert!(!diagonal_nondegenerate(&g2.facets[0].report, 2));
        assert!(diagonal_nondegenerate(&g2.facets[0].report, 3));
        // d_n = 2 and 3 = 1 mod 2
        assert_eq!(global_ordinariness(&f, 3).unwrap().verdict.verdict, Verdict::Ordinary);
    }

    fn report_with(dn: i64) -> DiagonalReport {
        let m = IntMatrix::from_rows(&[[1, 0], [0, dn]]);
        DiagonalReport {
            facet: 0,
            vertex_matrix: m,
            det_abs: BigInt::from(dn),
            invariant_factors: alloc::vec![BigInt::one(), BigInt::from(dn)],
            largest_factor: BigInt::from(dn),
        }
    }

    #[test]
    fn congruence_condition() {
        assert_eq!(diagonal_ordinary_verdict(&report_with(4), 5).verdict, Verdict::Ordinary);
        assert_eq!(diagonal_ordinary_verdict(&report_with(4), 3).verdict, Verdict::Inconclusive);
        assert_eq!(diagonal_ordinary_verdict(&report_with(4), 2).verdict, Verdict::NotNonDegenerate);
    }

    #[test]
    fn segment_is_ordinary_everywhere() {
        for p in [2, 3, 5, 7] {
            assert_eq!(global_ordinariness(&laurent(), p).unwrap().verdict.verdict, Verdict::Ordinary);
        }
        assert!(matches!(global_ordinariness(&laurent(), 4), Err(Error::NotPrime(4))));
    }

    #[test]
    fn non_diagonal_is_unsupported() {
        // the edge from (2,0) to (0,2) carries a third term
        let f = LaurentPolySpec::concrete(2, &[(1, [2, 0]), (1, [1, 1]), (1, [0, 2])]).unwrap();
        assert!(matches!(global_ordinariness(&f, 5), Err(Error::Unsupported(_))));
    }

    #[test]
    fn slope_prediction_for_simplex() {
        let f = LaurentPolySpec::concrete(2, &[(1, [1, 0]), (1, [0, 1])]).unwrap();
        let s = predicted_slopes(&f, 5).unwrap();
        assert_eq!(s.entries, alloc::vec![(integer(0), 1)]);
        assert!(predicted_slopes(&square_of_x(), 2).is_err());
    }

    #[test]
    fn trivial_factor() {
        let x_plus_1 = LaurentPolySpec::concrete(1, &[(1, [1]), (1, [0])]).unwrap();
        assert_eq!(
            trivial_unit_root_descriptor(&x_plus_1, 2).unwrap(),
            Some(TrivialFactor { prime: 2, t: 1 })
        );
        assert_eq!(trivial_unit_root_descriptor(&laurent(), 3).unwrap(), None);
        assert_eq!(
            trivial_unit_root_descriptor(&square_of_x(), 3).unwrap(),
            Some(TrivialFactor { prime: 3, t: 0 })
        );
    }
}
