use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec::Vec;
use core::fmt;

use super::affine_dimension;

/// A set of vertex indices, stored as a bit mask.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct VertexSet(u64);

impl VertexSet {
    pub fn from_indices(it: impl IntoIterator<Item = usize>) -> Self {
        VertexSet(it.into_iter().fold(0u64, |m, i| m | (1 << i)))
    }

    pub fn full(count: usize) -> Self {
        VertexSet(if count == 64 { u64::MAX } else { (1u64 << count) - 1 })
    }

    pub fn bits(self) -> u64 {
        self.0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn contains(self, i: usize) -> bool {
        self.0 >> i & 1 == 1
    }

    pub fn is_subset_of(self, other: VertexSet) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn intersect(self, other: VertexSet) -> VertexSet {
        VertexSet(self.0 & other.0)
    }

    pub fn with(self, i: usize) -> VertexSet {
        VertexSet(self.0 | 1 << i)
    }

    pub fn iter(self) -> impl Iterator<Item = usize> {
        (0..64).filter(move |&i| self.contains(i))
    }

    pub fn to_vec(self) -> Vec<usize> {
        self.iter().collect()
    }
}

impl fmt::Debug for VertexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Face {
    pub vertices: VertexSet,
    pub dim: usize,
    pub contains_origin: bool,
}

/// Every non-empty face of the polytope, ordered by dimension then by vertex
/// index list. The polytope itself is the last entry.
#[derive(Debug, Clone)]
pub struct FaceLattice {
    faces: Vec<Face>,
    index: BTreeMap<VertexSet, usize>,
}

impl FaceLattice {
    /// Closes the facets under intersection. `through_origin` lists the
    /// facets whose hyperplane passes through the origin.
    pub(crate) fn build(vertices: &[Vec<i64>], facets: &[VertexSet], through_origin: &BTreeSet<VertexSet>) -> Self {
        let mut all: BTreeSet<VertexSet> = facets.iter().copied().collect();
        let mut frontier: Vec<VertexSet> = all.iter().copied().collect();
        while let Some(a) = frontier.pop() {
            for &f in facets {
                let c = a.intersect(f);
                if !c.is_empty() && all.insert(c) {
                    frontier.push(c);
                }
            }
        }
        let top = VertexSet::full(vertices.len());
        all.insert(top);

        let mut faces: Vec<Face> = all
            .into_iter()
            .map(|set| {
                let pts: Vec<&[i64]> = set.iter().map(|i| vertices[i].as_slice()).collect();
                // A proper face contains the origin iff every facet containing it does.
                let contains_origin = set == top
                    || facets
                        .iter()
                        .filter(|f| set.is_subset_of(**f))
                        .all(|f| through_origin.contains(f));
                Face {
                    vertices: set,
                    dim: affine_dimension(&pts),
                    contains_origin,
                }
            })
            .collect();
        faces.sort_by(|a, b| a.dim.cmp(&b.dim).then_with(|| a.vertices.to_vec().cmp(&b.vertices.to_vec())));
        let index = faces.iter().enumerate().map(|(i, f)| (f.vertices, i)).collect();
        FaceLattice { faces, index }
    }

    pub fn faces(&self) -> &[Face] {
        &self.faces
    }

    pub fn face(&self, i: usize) -> &Face {
        &self.faces[i]
    }

    pub fn index_of(&self, set: VertexSet) -> Option<usize> {
        self.index.get(&set).copied()
    }

    pub fn top(&self) -> usize {
        self.faces.len() - 1
    }

    /// Containment in the lattice: is face `a` a subface of face `b`?
    pub fn is_subface(&self, a: usize, b: usize) -> bool {
        self.faces[a].vertices.is_subset_of(self.faces[b].vertices)
    }

    /// Faces of dimension `dim(face) - 1` contained in `face`.
    pub fn facets_of(&self, face: usize) -> impl Iterator<Item = usize> + '_ {
        let f = self.faces[face];
        self.faces
            .iter()
            .enumerate()
            .filter(move |(_, g)| g.dim + 1 == f.dim && g.vertices.is_subset_of(f.vertices))
            .map(|(i, _)| i)
    }

    /// `F_sigma(i)`: number of `i`-dimensional faces containing `sigma` (itself included).
    pub fn faces_above(&self, sigma: usize, i: i64) -> usize {
        if i < 0 {
            return 0;
        }
        let s = self.faces[sigma].vertices;
        self.faces
            .iter()
            .filter(|f| f.dim as i64 == i && s.is_subset_of(f.vertices))
            .count()
    }

    /// Faces containing the origin, in lattice order.
    pub fn origin_faces(&self) -> impl Iterator<Item = usize> + '_ {
        self.faces
            .iter()
            .enumerate()
            .filter(|(_, f)| f.contains_origin)
            .map(|(i, _)| i)
    }

    /// Pulling triangulation of a face: pick the lexicographically smallest
    /// vertex, cone it over every subfacet that misses it, recurse. Each simplex
    /// is returned as its `dim + 1` vertices.
    pub fn triangulate(&self, face: usize, vertices: &[Vec<i64>]) -> Vec<VertexSet> {
        let f = self.faces[face];
        if f.vertices.len() == f.dim + 1 {
            return alloc::vec![f.vertices];
        }
        let anchor = f
            .vertices
            .iter()
            .min_by(|&a, &b| vertices[a].cmp(&vertices[b]))
            .expect("faces are non-empty");
        let mut out = Vec::new();
        for g in self.facets_of(face) {
            if self.faces[g].vertices.contains(anchor) {
                continue;
            }
            for s in self.triangulate(g, vertices) {
                out.push(s.with(anchor));
            }
        }
        out
    }
}
