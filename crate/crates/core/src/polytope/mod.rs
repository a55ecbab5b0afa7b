//! Newton polytopes: vertices, facets, the face lattice, the denominator and
//! the normalized volume.
//!
//! Facets are found by exhaustive supporting-hyperplane search over affinely
//! independent `n`-subsets of the vertices. This is exact and entirely adequate
//! for the desk-scale inputs the crate targets (at most [`MAX_VERTICES`]
//! vertices in dimension at most [`MAX_DIM`]).

mod lattice;
mod spec;

pub use lattice::{Face, FaceLattice, VertexSet};
pub use spec::{CoeffSpec, LaurentPolySpec, Term};

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::exact::{det_exact, lcm_of_denominators, lp_solve, rank, IntMatrix, LpProblem, LpResult, Rational};

pub const MAX_VERTICES: usize = 20;
pub const MAX_DIM: usize = 8;

/// Supporting hyperplane `sum e_i x_i = 1` of a facet that misses the origin.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FacetForm {
    pub coeffs: Vec<Rational>,
    pub vertices: VertexSet,
}

impl FacetForm {
    pub fn eval(&self, u: &[i64]) -> Rational {
        self.coeffs
            .iter()
            .zip(u)
            .fold(Rational::zero(), |acc, (e, &x)| acc + e * BigInt::from(x))
    }

    /// The facet's `D(delta)`: lcm of the coefficient denominators.
    pub fn denominator(&self) -> BigInt {
        lcm_of_denominators(&self.coeffs).expect("facet forms have n >= 1 coefficients")
    }

    /// Integer form `D(delta) * h`, so that `D(delta) * h(u)` is an integer for lattice `u`.
    pub fn scaled(&self, scale: &BigInt) -> Vec<BigInt> {
        self.coeffs
            .iter()
            .map(|e| (e * scale).to_integer())
            .collect()
    }
}

/// Homogeneous supporting form of a facet through the origin; every point of
/// the polytope satisfies `sum a_i x_i <= 0`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConeForm {
    pub coeffs: Vec<BigInt>,
    pub vertices: VertexSet,
}

impl ConeForm {
    pub fn eval(&self, u: &[i64]) -> BigInt {
        self.coeffs.iter().zip(u).map(|(a, &x)| a * BigInt::from(x)).sum()
    }
}

/// Newton polytope conv({0} ∪ {V_j}) of a Laurent polynomial.
#[derive(Debug, Clone)]
pub struct Polytope {
    n: usize,
    vertices: Vec<Vec<i64>>,
    /// For each vertex, the index of the term whose exponent it is (the origin
    /// maps to the constant term when there is one).
    vertex_terms: Vec<Option<usize>>,
    origin_vertex: Option<usize>,
    facets_off_origin: Vec<FacetForm>,
    facets_through_origin: Vec<ConeForm>,
    lattice: FaceLattice,
}

impl Polytope {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn vertices(&self) -> &[Vec<i64>] {
        &self.vertices
    }

    pub fn vertex(&self, i: usize) -> &[i64] {
        &self.vertices[i]
    }

    /// Term index of each vertex, in vertex order.
    pub fn vertex_terms(&self) -> &[Option<usize>] {
        &self.vertex_terms
    }

    pub fn origin_is_vertex(&self) -> bool {
        self.origin_vertex.is_some()
    }

    pub fn origin_index(&self) -> Option<usize> {
        self.origin_vertex
    }

    /// Non-zero vertices, in vertex order.
    pub fn nonzero_vertices(&self) -> impl Iterator<Item = &[i64]> {
        self.vertices
            .iter()
            .filter(|v| v.iter().any(|&x| x != 0))
            .map(Vec::as_slice)
    }

    pub fn facets_off_origin(&self) -> &[FacetForm] {
        &self.facets_off_origin
    }

    pub fn facets_through_origin(&self) -> &[ConeForm] {
        &self.facets_through_origin
    }

    pub fn face_lattice(&self) -> &FaceLattice {
        &self.lattice
    }

    /// Vertex coordinates of a vertex set, in index order.
    pub fn points_of(&self, set: VertexSet) -> Vec<&[i64]> {
        set.iter().map(|i| self.vertices[i].as_slice()).collect()
    }

    /// `F_0(k)` for `k = 0..n-1`: number of `k`-dimensional faces containing the origin.
    pub fn faces_containing_origin_counts(&self) -> Vec<usize> {
        (0..self.n)
            .map(|k| {
                self.lattice
                    .faces()
                    .iter()
                    .filter(|f| f.dim == k && f.contains_origin)
                    .count()
            })
            .collect()
    }

    /// `D(Δ)`: lcm over the off-origin facets of their coefficient denominators.
    pub fn denominator(&self) -> BigInt {
        self.facets_off_origin
            .iter()
            .fold(BigInt::one(), |acc, f| acc.lcm(&f.denominator()))
    }

    /// `n! Vol(Δ)`, summed over the pyramids from the origin to each off-origin facet.
    pub fn normalized_volume(&self) -> BigInt {
        self.facets_off_origin
            .iter()
            .map(|f| {
                let idx = self.lattice.index_of(f.vertices).expect("facets are recorded faces");
                self.lattice
                    .triangulate(idx, &self.vertices)
                    .into_iter()
                    .map(|s| {
                        let m = IntMatrix::from_columns(&self.points_of(s));
                        det_exact(&m).expect("square by construction").abs()
                    })
                    .sum::<BigInt>()
            })
            .sum()
    }

    /// Off-origin facets whose restriction is a unimodular simplex (`n` vertices, `|det| = 1`).
    pub fn all_facets_unimodular_simplices(&self) -> bool {
        self.facets_off_origin.iter().all(|f| {
            f.vertices.len() == self.n
                && det_exact(&IntMatrix::from_columns(&self.points_of(f.vertices)))
                    .map(|d| d.abs().is_one())
                    .unwrap_or(false)
        })
    }
}

/// True iff no convex combination of the non-zero exponent vectors is the origin.
pub fn origin_is_vertex<E: AsRef<[i64]>>(points: &[E]) -> bool {
    let nonzero: Vec<&[i64]> = points
        .iter()
        .map(AsRef::as_ref)
        .filter(|v| v.iter().any(|&x| x != 0))
        .collect();
    let Some(first) = nonzero.first() else {
        return true;
    };
    !in_convex_hull(&alloc::vec![0; first.len()], &nonzero)
}

/// Exact LP feasibility: is `target` a convex combination of `points`?
fn in_convex_hull(target: &[i64], points: &[&[i64]]) -> bool {
    if points.is_empty() {
        return false;
    }
    let n = target.len();
    let mut a: Vec<Vec<Rational>> = (0..n)
        .map(|i| points.iter().map(|p| Rational::from_integer(BigInt::from(p[i]))).collect())
        .collect();
    a.push(alloc::vec![Rational::one(); points.len()]);
    let mut b: Vec<Rational> = target.iter().map(|&x| Rational::from_integer(BigInt::from(x))).collect();
    b.push(Rational::one());
    let c = alloc::vec![Rational::zero(); points.len()];
    let prob = LpProblem::new(a, b, c).expect("consistent shapes");
    !matches!(lp_solve(&prob), LpResult::Infeasible)
}

/// Affine dimension of a point set.
pub fn affine_dimension(points: &[&[i64]]) -> usize {
    let Some(first) = points.first() else {
        return 0;
    };
    if points.len() == 1 {
        return 0;
    }
    let rows: Vec<Vec<i64>> = points[1..]
        .iter()
        .map(|p| p.iter().zip(first.iter()).map(|(a, b)| a - b).collect())
        .collect();
    rank(&IntMatrix::from_rows(&rows))
}

/// Builds the Newton polytope of `f`, including its facets and face lattice.
pub fn build_polytope(f: &LaurentPolySpec) -> Result<Polytope> {
    let n = f.n();
    if n > MAX_DIM {
        return Err(Error::TooLarge(format!("dimension {n} exceeds the supported maximum {MAX_DIM}")));
    }

    // Candidate points: the origin, then every non-constant exponent in term order.
    let mut candidates: Vec<(Vec<i64>, Option<usize>)> = alloc::vec![(
        alloc::vec![0; n],
        f.terms().iter().position(Term::is_constant),
    )];
    for (j, t) in f.terms().iter().enumerate() {
        if !t.is_constant() {
            candidates.push((t.exp.clone(), Some(j)));
        }
    }

    let all: Vec<&[i64]> = candidates.iter().map(|(p, _)| p.as_slice()).collect();
    let dim = affine_dimension(&all);
    if dim < n {
        return Err(Error::Degenerate { ambient: n, found: dim });
    }

    let mut vertices = Vec::new();
    let mut vertex_terms = Vec::new();
    let mut origin_vertex = None;
    for (i, (p, term)) in candidates.iter().enumerate() {
        let others: Vec<&[i64]> = candidates
            .iter()
            .enumerate()
            .filter(|&(j, _)| j != i)
            .map(|(_, (q, _))| q.as_slice())
            .collect();
        if !in_convex_hull(p, &others) {
            if i == 0 {
                origin_vertex = Some(vertices.len());
            }
            vertices.push(p.clone());
            vertex_terms.push(*term);
        }
    }
    if vertices.len() > MAX_VERTICES {
        return Err(Error::TooLarge(format!(
            "{} vertices exceeds the supported maximum {MAX_VERTICES}",
            vertices.len()
        )));
    }

    let (facets_off_origin, facets_through_origin) = enumerate_facets(n, &vertices);
    let facet_sets: Vec<VertexSet> = facets_off_origin
        .iter()
        .map(|f| f.vertices)
        .chain(facets_through_origin.iter().map(|f| f.vertices))
        .collect();
    let through: BTreeSet<VertexSet> = facets_through_origin.iter().map(|f| f.vertices).collect();
    let lattice = FaceLattice::build(&vertices, &facet_sets, &through);

    Ok(Polytope {
        n,
        vertices,
        vertex_terms,
        origin_vertex,
        facets_off_origin,
        facets_through_origin,
        lattice,
    })
}

/// Supporting-hyperplane search over affinely independent `n`-subsets.
///
/// Returns the off-origin facets as normalized forms `h(x) = 1` and the
/// facets through the origin as primitive homogeneous forms `<= 0`, both sorted
/// by their vertex index lists.
fn enumerate_facets(n: usize, vertices: &[Vec<i64>]) -> (Vec<FacetForm>, Vec<ConeForm>) {
    let mut seen = BTreeSet::new();
    let mut off = Vec::new();
    let mut through = Vec::new();

    for subset in Combinations::new(vertices.len(), n) {
        let Some((normal, offset)) = hyperplane_through(n, subset.iter().map(|&i| vertices[i].as_slice())) else {
            continue;
        };
        // s(v) = normal·v + offset
        let values: Vec<BigInt> = vertices
            .iter()
            .map(|v| normal.iter().zip(v).map(|(a, &x)| a * BigInt::from(x)).sum::<BigInt>() + &offset)
            .collect();
        let nonneg = values.iter().all(|s| !s.is_negative());
        let nonpos = values.iter().all(|s| !s.is_positive());
        if !nonneg && !nonpos {
            continue;
        }
        let set = VertexSet::from_indices(values.iter().enumerate().filter(|(_, s)| s.is_zero()).map(|(i, _)| i));
        if !seen.insert(set) {
            continue;
        }
        if offset.is_zero() {
            // Orient so the polytope lies in {a·x <= 0}, then make primitive.
            let sign = if nonneg { -BigInt::one() } else { BigInt::one() };
            let g = normal.iter().fold(BigInt::zero(), |acc, a| acc.gcd(a));
            let coeffs = normal.iter().map(|a| a * &sign / &g).collect();
            through.push(ConeForm { coeffs, vertices: set });
        } else {
            // normal·x = -offset on the facet
            let rhs = -offset;
            let coeffs = normal.iter().map(|a| Rational::new(a.clone(), rhs.clone())).collect();
            off.push(FacetForm { coeffs, vertices: set });
        }
    }

    off.sort_by_key(|f| f.vertices.to_vec());
    through.sort_by_key(|f| f.vertices.to_vec());
    (off, through)
}

/// Hyperplane `normal·x + offset = 0` through `n` points in `R^n`, or `None`
/// if they are affinely dependent. Components are signed maximal minors of
/// the `n x (n+1)` matrix `[x | 1]`.
fn hyperplane_through<'a>(n: usize, points: impl Iterator<Item = &'a [i64]>) -> Option<(Vec<BigInt>, BigInt)> {
    let rows: Vec<Vec<i64>> = points
        .map(|p| {
            let mut r = p.to_vec();
            r.push(1);
            r
        })
        .collect();
    let mut comps = Vec::with_capacity(n + 1);
    for skip in 0..=n {
        let minor: Vec<Vec<i64>> = rows
            .iter()
            .map(|r| r.iter().enumerate().filter(|&(j, _)| j != skip).map(|(_, &x)| x).collect())
            .collect();
        let d = det_exact(&IntMatrix::from_rows(&minor)).expect("square minor");
        comps.push(if skip % 2 == 0 { d } else { -d });
    }
    if comps[..n].iter().all(Zero::is_zero) {
        return None;
    }
    let offset = comps.pop().expect("n + 1 components");
    Some((comps, offset))
}

/// Lexicographic k-subsets of `0..n`.
pub(crate) struct Combinations {
    n: usize,
    idx: Vec<usize>,
    done: bool,
}

impl Combinations {
    pub(crate) fn new(n: usize, k: usize) -> Self {
        Combinations {
            n,
            idx: (0..k).collect(),
            done: k > n,
        }
    }
}

impl Iterator for Combinations {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        if self.done {
            return None;
        }
        let out = self.idx.clone();
        let k = self.idx.len();
        let mut i = k;
        loop {
            if i == 0 {
                self.done = true;
                break;
            }
            i -= 1;
            if self.idx[i] < self.n - k + i {
                self.idx[i] += 1;
                for j in i + 1..k {
                    self.idx[j] = self.idx[j - 1] + 1;
                }
                break;
            }
        }
        Some(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{integer, rational};

    fn segment() -> Polytope {
        build_polytope(&LaurentPolySpec::symbolic(1, &[[1], [-1]]).unwrap()).unwrap()
    }

    fn square() -> Polytope {
        build_polytope(&LaurentPolySpec::symbolic(2, &[[1, 0], [0, 1], [1, 1]]).unwrap()).unwrap()
    }

    fn kl3() -> Polytope {
        build_polytope(&LaurentPolySpec::symbolic(2, &[[1, 0], [0, 1], [-1, -1]]).unwrap()).unwrap()
    }

    #[test]
    fn combinations() {
        let all: Vec<Vec<usize>> = Combinations::new(4, 2).collect();
        assert_eq!(all.len(), 6);
        assert_eq!(all[0], alloc::vec![0, 1]);
        assert_eq!(all[5], alloc::vec![2, 3]);
        assert_eq!(Combinations::new(2, 3).count(), 0);
    }

    #[test]
    fn single_monomial_segment() {
        let p = build_polytope(&LaurentPolySpec::symbolic(1, &[[1]]).unwrap()).unwrap();
        assert_eq!(p.vertices(), &[alloc::vec![0], alloc::vec![1]]);
        assert!(p.origin_is_vertex());
        assert_eq!(p.normalized_volume(), BigInt::from(1));
    }

    #[test]
    fn symmetric_segment() {
        let p = segment();
        assert_eq!(p.vertices(), &[alloc::vec![1], alloc::vec![-1]]);
        assert!(!p.origin_is_vertex());
        let eqs: Vec<Vec<Rational>> = p.facets_off_origin().iter().map(|f| f.coeffs.clone()).collect();
        assert_eq!(eqs, alloc::vec![alloc::vec![integer(1)], alloc::vec![integer(-1)]]);
        assert!(p.facets_through_origin().is_empty());
        assert_eq!(p.normalized_volume(), BigInt::from(2));
        assert_eq!(p.faces_containing_origin_counts(), alloc::vec![0]);
    }

    #[test]
    fn origin_vertex_predicate() {
        assert!(!origin_is_vertex(&[[1], [-1]]));
        assert!(origin_is_vertex(&[[1, 0, 0], [0, 1, 0], [0, 0, 1]]));
        assert!(origin_is_vertex(&[[0, 0]]));
    }

    #[test]
    fn unit_square() {
        let p = square();
        assert_eq!(p.vertices().len(), 4);
        let eqs: Vec<Vec<Rational>> = p.facets_off_origin().iter().map(|f| f.coeffs.clone()).collect();
        assert_eq!(eqs.len(), 2);
        assert!(eqs.contains(&alloc::vec![integer(1), integer(0)]));
        assert!(eqs.contains(&alloc::vec![integer(0), integer(1)]));
        assert_eq!(p.facets_through_origin().len(), 2);
        let lattice = p.face_lattice();
        assert_eq!(lattice.faces().iter().filter(|f| f.dim == 0).count(), 4);
        assert_eq!(lattice.faces().iter().filter(|f| f.dim == 1).count(), 4);
        assert_eq!(lattice.faces().iter().filter(|f| f.dim == 2).count(), 1);
        assert_eq!(p.normalized_volume(), BigInt::from(2));
    }

    #[test]
    fn kloosterman_triangle() {
        let p = kl3();
        assert!(!p.origin_is_vertex());
        assert_eq!(p.facets_off_origin().len(), 3);
        assert_eq!(p.normalized_volume(), BigInt::from(3));
        assert_eq!(p.denominator(), BigInt::from(1));
        assert!(p.all_facets_unimodular_simplices());
    }

    #[test]
    fn denominators() {
        let p = build_polytope(&LaurentPolySpec::symbolic(1, &[[2]]).unwrap()).unwrap();
        assert_eq!(p.facets_off_origin()[0].coeffs, alloc::vec![rational(1, 2)]);
        assert_eq!(p.denominator(), BigInt::from(2));
        let simplex = build_polytope(&LaurentPolySpec::symbolic(3, &[[1, 0, 0], [0, 1, 0], [0, 0, 1]]).unwrap()).unwrap();
        assert_eq!(simplex.denominator(), BigInt::from(1));
        assert_eq!(simplex.normalized_volume(), BigInt::from(1));
        assert_eq!(simplex.faces_containing_origin_counts(), alloc::vec![1, 3, 3]);
    }

    #[test]
    fn standard_triangle_origin_faces() {
        let p = build_polytope(&LaurentPolySpec::symbolic(2, &[[1, 0], [0, 1]]).unwrap()).unwrap();
        assert_eq!(p.faces_containing_origin_counts(), alloc::vec![1, 2]);
    }

    #[test]
    fn interior_points_are_not_vertices() {
        // (1,1) sits inside conv(0, (2,0), (0,2), (2,2))
        let p = build_polytope(&LaurentPolySpec::symbolic(2, &[[2, 0], [0, 2], [2, 2], [1, 1]]).unwrap()).unwrap();
        assert_eq!(p.vertices().len(), 4);
        assert_eq!(p.denominator(), BigInt::from(2));
        assert_eq!(p.normalized_volume(), BigInt::from(8));
    }

    #[test]
    fn degenerate_input_reports_dimension() {
        let err = build_polytope(&LaurentPolySpec::symbolic(2, &[[1, 1], [2, 2]]).unwrap()).unwrap_err();
        assert_eq!(err, Error::Degenerate { ambient: 2, found: 1 });
    }

    #[test]
    fn non_simplicial_facet_volume() {
        // Square pyramid facet: conv(0, square at height 1) in R^3 has n! Vol = 3! * (1/3) * 4 = 8
        let p = build_polytope(
            &LaurentPolySpec::symbolic(3, &[[1, 1, 1], [-1, 1, 1], [1, -1, 1], [-1, -1, 1]]).unwrap(),
        )
        .unwrap();
        assert_eq!(p.facets_off_origin().len(), 1);
        assert_eq!(p.facets_off_origin()[0].vertices.len(), 4);
        assert_eq!(p.normalized_volume(), BigInt::from(8));
        assert!(!p.all_facets_unimodular_simplices());
    }
}
