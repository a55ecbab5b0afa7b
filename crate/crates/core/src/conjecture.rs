//! The conjectural face-sum formula for the number of roots of each weight,
//! and its comparison against a reference weight ledger.

use alloc::string::String;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::exact::{binomial, smith_normal_form, IntMatrix};
use crate::polytope::Polytope;

/// `(dim σ)! V(σ)` for a face through the origin, with `V` measured in the
/// saturated lattice of the face's affine span.
pub fn face_normalized_volume(p: &Polytope, face: usize) -> Result<BigInt> {
    let lattice = p.face_lattice();
    let f = lattice.face(face);
    if !f.contains_origin {
        return Err(Error::InvalidSpec("face does not contain the origin".into()));
    }
    let mut total = BigInt::zero();
    for simplex in lattice.triangulate(face, p.vertices()) {
        let pts = p.points_of(simplex);
        let (base, rest) = pts.split_first().expect("simplices are non-empty");
        let gens: Vec<Vec<i64>> = rest
            .iter()
            .map(|v| v.iter().zip(base.iter()).map(|(a, b)| a - b).collect())
            .collect();
        if gens.is_empty() {
            total += 1;
            continue;
        }
        // The product of invariant factors is the index of the generated
        // sublattice in its saturation.
        total += smith_normal_form(&IntMatrix::from_columns(&gens)).product();
    }
    Ok(total)
}

/// Per-face data entering the formula.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FaceVolumeEntry {
    pub face: usize,
    pub dim: usize,
    pub norm_vol: BigInt,
}

pub fn origin_face_volumes(p: &Polytope) -> Result<Vec<FaceVolumeEntry>> {
    let lattice = p.face_lattice();
    lattice
        .origin_faces()
        .map(|i| {
            Ok(FaceVolumeEntry {
                face: i,
                dim: lattice.face(i).dim,
                norm_vol: face_normalized_volume(p, i)?,
            })
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConjectureReport {
    pub k: usize,
    pub conjectured: BigInt,
    pub reference: Option<i64>,
    pub provenance: Option<String>,
    pub agree: Option<bool>,
}

/// Evaluates
/// `w_k = (-1)^k sum_{0 ∈ σ, dim σ <= k} (-1)^{dim σ} (F_σ(k) + F_σ(k-1) - C(n - dim σ, n - k + 1)) (dim σ)! V(σ)`.
pub fn conjectured_weight_count(p: &Polytope, k: usize) -> Result<ConjectureReport> {
    let n = p.n();
    if k > n {
        return Err(Error::InvalidSpec(alloc::format!("k = {k} exceeds n = {n}")));
    }
    let lattice = p.face_lattice();
    let mut sum = BigInt::zero();
    for entry in origin_face_volumes(p)? {
        if entry.dim > k {
            continue;
        }
        let k = k as i64;
        let d = entry.dim as i64;
        let coeff = BigInt::from(lattice.faces_above(entry.face, k))
            + BigInt::from(lattice.faces_above(entry.face, k - 1))
            - binomial(n as i64 - d, n as i64 - k + 1);
        let term = coeff * &entry.norm_vol;
        if d % 2 == 0 {
            sum += term;
        } else {
            sum -= term;
        }
    }
    if k % 2 == 1 {
        sum = -sum;
    }
    Ok(ConjectureReport {
        k,
        conjectured: sum,
        reference: None,
        provenance: None,
        agree: None,
    })
}

/// Reference number of roots of each weight `0..`, with where it came from.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightLedger {
    pub counts: Vec<i64>,
    pub provenance: String,
}

pub fn counterexample_report(p: &Polytope, reference: &WeightLedger) -> Result<Vec<ConjectureReport>> {
    (0..=p.n())
        .map(|k| {
            let mut r = conjectured_weight_count(p, k)?;
            if let Some(&e) = reference.counts.get(k) {
                r.agree = Some(r.conjectured == BigInt::from(e));
                r.reference = Some(e);
                r.provenance = Some(reference.provenance.clone());
            }
            Ok(r)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polytope::{build_polytope, LaurentPolySpec, VertexSet};

    fn poly(n: usize, exps: &[&[i64]]) -> Polytope {
        build_polytope(&LaurentPolySpec::symbolic(n, exps).unwrap()).unwrap()
    }

    fn counts(p: &Polytope) -> Vec<i64> {
        (0..=p.n())
            .map(|k| i64::try_from(conjectured_weight_count(p, k).unwrap().conjectured).unwrap())
            .collect()
    }

    #[test]
    fn volumes_of_small_faces() {
        let p = poly(2, &[&[2, 0], &[0, 1]]);
        let l = p.face_lattice();
        let edge = l.index_of(VertexSet::from_indices([0, 1])).unwrap();
        assert_eq!(face_normalized_volume(&p, edge).unwrap(), BigInt::from(2));
        let origin = l.index_of(VertexSet::from_indices([0])).unwrap();
        assert_eq!(face_normalized_volume(&p, origin).unwrap(), BigInt::from(1));
        assert_eq!(face_normalized_volume(&p, l.top()).unwrap(), BigInt::from(2));
    }

    #[test]
    fn simplex_has_one_unit_root() {
        let p = poly(2, &[&[1, 0], &[0, 1]]);
        assert_eq!(counts(&p), [1, 0, 0]);
        let ledger = WeightLedger {
            counts: alloc::vec![1, 0, 0],
            provenance: "trivial".into(),
        };
        assert!(counterexample_report(&p, &ledger).unwrap().iter().all(|r| r.agree == Some(true)));
    }

    #[test]
    fn kloosterman_triangle() {
        let p = poly(2, &[&[1, 0], &[0, 1], &[-1, -1]]);
        // only the whole triangle contains the interior origin
        assert!(!p.origin_is_vertex());
        assert_eq!(counts(&p), [0, 0, 3]);
    }

    #[test]
    fn one_dimensional_cases() {
        // x: a single unit root of weight 0
        assert_eq!(counts(&poly(1, &[&[1]])), [1, 0]);
        // x^2 has a unit root and a root of weight 1
        assert_eq!(counts(&poly(1, &[&[2]])), [1, 1]);
    }
}
