//! Weight function, weight-level lattice counts `W(k)`, Hodge numbers `H(k)`,
//! the Hodge polygon and its chain-level counterpart.

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::exact::{binomial, lp_solve, LpProblem, LpResult, Rational};
use crate::polytope::Polytope;

/// Value of the weight function: the least `c >= 0` with `u` in `cΔ`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub enum Weight {
    Finite(Rational),
    Infinite,
}

impl Weight {
    pub fn finite(&self) -> Option<&Rational> {
        match self {
            Weight::Finite(w) => Some(w),
            Weight::Infinite => None,
        }
    }
}

/// Weight as the exact optimum of `min sum c_j` s.t. `sum c_j V_j = u`, `c >= 0`
/// over the non-zero vertices.
pub fn weight(p: &Polytope, u: &[i64]) -> Weight {
    let gens: Vec<&[i64]> = p.nonzero_vertices().collect();
    let a = (0..p.n())
        .map(|i| gens.iter().map(|v| Rational::from_integer(BigInt::from(v[i]))).collect())
        .collect();
    let b = u.iter().map(|&x| Rational::from_integer(BigInt::from(x))).collect();
    let c = alloc::vec![Rational::from_integer(1.into()); gens.len()];
    let prob = LpProblem::new(a, b, c).expect("consistent shapes");
    match lp_solve(&prob) {
        LpResult::Optimal { value, .. } => Weight::Finite(value),
        // every cost is non-negative, so unbounded cannot happen
        LpResult::Infeasible | LpResult::Unbounded => Weight::Infinite,
    }
}

/// Weight from the facet description: `u` must satisfy every cone form, and
/// then `w(u) = max(0, max_h h(u))` over the off-origin facet forms.
pub fn weight_by_facets(p: &Polytope, u: &[i64]) -> Weight {
    if p.facets_through_origin().iter().any(|g| g.eval(u) > BigInt::zero()) {
        return Weight::Infinite;
    }
    let w = p
        .facets_off_origin()
        .iter()
        .map(|h| h.eval(u))
        .max()
        .unwrap_or_default();
    Weight::Finite(if w < Rational::zero() { Rational::zero() } else { w })
}

/// How `W(k)` is counted.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CountStrategy {
    /// Scan the integer points of the bounding box of `(k/D)Δ`.
    Box,
    /// Sum non-negative integer vertex combinations of total degree `k` in
    /// each pyramid over an off-origin facet; needs unimodular simplex facets.
    Pyramids,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightLevel {
    pub k: u64,
    pub count: u64,
    /// Sorted lattice points of weight `k/D`.
    pub points: Vec<Vec<i64>>,
}

/// Integer facet data for fast weight evaluation: `D·w(u)` is an integer for
/// every lattice point in the cone.
struct ScaledForms {
    cone: Vec<Vec<i64>>,
    facets: Vec<Vec<i64>>,
}

impl ScaledForms {
    fn new(p: &Polytope) -> Result<Self> {
        let d = p.denominator();
        let small = |v: &BigInt| {
            v.to_i64()
                .ok_or_else(|| Error::TooLarge(format!("facet coefficient {v} does not fit in 64 bits")))
        };
        let cone = p
            .facets_through_origin()
            .iter()
            .map(|g| g.coeffs.iter().map(small).collect())
            .collect::<Result<_>>()?;
        let facets = p
            .facets_off_origin()
            .iter()
            .map(|h| h.scaled(&d).iter().map(small).collect())
            .collect::<Result<_>>()?;
        Ok(ScaledForms { cone, facets })
    }

    /// `D·w(u)`, or `None` outside the cone.
    fn scaled_weight(&self, u: &[i64]) -> Option<i64> {
        let dot = |a: &[i64]| a.iter().zip(u).map(|(x, y)| x * y).sum::<i64>();
        if self.cone.iter().any(|g| dot(g) > 0) {
            return None;
        }
        Some(self.facets.iter().map(|h| dot(h)).max().unwrap_or(0).max(0))
    }
}

fn denominator_u64(p: &Polytope) -> Result<u64> {
    let d = p.denominator();
    d.to_u64()
        .ok_or_else(|| Error::TooLarge(format!("denominator {d} does not fit in 64 bits")))
}

/// Integer points of the box `[floor(t·min_i), ceil(t·max_i)]` with `t = k/D`.
fn scaled_box(p: &Polytope, k: u64, d: u64) -> Vec<(i64, i64)> {
    (0..p.n())
        .map(|i| {
            let lo = p.vertices().iter().map(|v| v[i]).min().unwrap_or(0).min(0);
            let hi = p.vertices().iter().map(|v| v[i]).max().unwrap_or(0).max(0);
            let (k, d) = (k as i64, d as i64);
            ((lo * k).div_euclid(d), -((-hi * k).div_euclid(d)))
        })
        .collect()
}

fn for_each_box_point(bounds: &[(i64, i64)], mut visit: impl FnMut(&[i64])) {
    let mut u: Vec<i64> = bounds.iter().map(|b| b.0).collect();
    if bounds.iter().any(|(lo, hi)| lo > hi) {
        return;
    }
    loop {
        visit(&u);
        let mut i = 0;
        loop {
            if i == u.len() {
                return;
            }
            if u[i] < bounds[i].1 {
                u[i] += 1;
                break;
            }
            u[i] = bounds[i].0;
            i += 1;
        }
    }
}

/// `W(k)` together with the points counted.
pub fn count_weight_k(p: &Polytope, k: u64, strategy: CountStrategy) -> Result<WeightLevel> {
    let points = match strategy {
        CountStrategy::Box => {
            let d = denominator_u64(p)?;
            let forms = ScaledForms::new(p)?;
            let mut pts = Vec::new();
            for_each_box_point(&scaled_box(p, k, d), |u| {
                if forms.scaled_weight(u) == Some(k as i64) {
                    pts.push(u.to_vec());
                }
            });
            pts
        }
        CountStrategy::Pyramids => {
            if !p.all_facets_unimodular_simplices() {
                return Err(Error::Unsupported(
                    "pyramid counting needs every off-origin facet to be a unimodular simplex".into(),
                ));
            }
            let mut seen = BTreeSet::new();
            for f in p.facets_off_origin() {
                let gens = p.points_of(f.vertices);
                for_each_composition(k, gens.len(), |c| {
                    let mut u = alloc::vec![0i64; p.n()];
                    for (cj, v) in c.iter().zip(&gens) {
                        for (ui, vi) in u.iter_mut().zip(v.iter()) {
                            *ui += *cj as i64 * vi;
                        }
                    }
                    seen.insert(u);
                });
            }
            seen.into_iter().collect()
        }
    };
    let mut points = points;
    points.sort();
    Ok(WeightLevel {
        k,
        count: points.len() as u64,
        points,
    })
}

/// `W(0..=kmax)` from a single scan of the box of `(kmax/D)Δ`.
pub fn weight_counts(p: &Polytope, kmax: u64) -> Result<Vec<u64>> {
    let d = denominator_u64(p)?;
    let forms = ScaledForms::new(p)?;
    let mut counts = alloc::vec![0u64; kmax as usize + 1];
    for_each_box_point(&scaled_box(p, kmax, d), |u| {
        if let Some(w) = forms.scaled_weight(u) {
            if w as u64 <= kmax {
                counts[w as usize] += 1;
            }
        }
    });
    Ok(counts)
}

/// Visits every composition of `total` into `parts` non-negative integers.
fn for_each_composition(total: u64, parts: usize, mut visit: impl FnMut(&[u64])) {
    fn rec(total: u64, slot: usize, buf: &mut Vec<u64>, visit: &mut dyn FnMut(&[u64])) {
        if slot + 1 == buf.len() {
            buf[slot] = total;
            visit(buf);
            return;
        }
        for c in 0..=total {
            buf[slot] = c;
            rec(total - c, slot + 1, buf, visit);
        }
    }
    if parts == 0 {
        if total == 0 {
            visit(&[]);
        }
        return;
    }
    let mut buf = alloc::vec![0u64; parts];
    rec(total, 0, &mut buf, &mut visit);
}

/// `H(k) = sum_i (-1)^i C(n,i) W(k - iD)` for `k = 0..=nD`. `w` must reach `nD`.
pub fn hodge_numbers(n: usize, d: u64, w: &[u64]) -> Result<Vec<u64>> {
    let top = n as u64 * d;
    if (w.len() as u64) <= top {
        return Err(Error::ShapeMismatch(format!(
            "need W(0..={top}) for Hodge numbers, got {} values",
            w.len()
        )));
    }
    (0..=top)
        .map(|k| {
            let mut h = BigInt::zero();
            for i in 0..=n as u64 {
                if i * d > k {
                    break;
                }
                let term = binomial(n as i64, i as i64) * BigInt::from(w[(k - i * d) as usize]);
                if i % 2 == 0 {
                    h += term;
                } else {
                    h -= term;
                }
            }
            h.to_u64().ok_or_else(|| {
                Error::Inconsistent(format!("Hodge number H({k}) = {h} is negative; the W counts are wrong"))
            })
        })
        .collect()
}

/// Inverse transform: `W(k) = sum_i C(n-1+i, i) H(k - iD)` for `k = 0..=kmax`.
pub fn counts_from_hodge(n: usize, d: u64, h: &[u64], kmax: u64) -> Vec<u64> {
    (0..=kmax)
        .map(|k| {
            let mut w = BigInt::zero();
            let mut i = 0u64;
            while i * d <= k {
                let j = (k - i * d) as usize;
                if let Some(&hj) = h.get(j) {
                    w += binomial(n as i64 - 1 + i as i64, i as i64) * BigInt::from(hj);
                }
                i += 1;
            }
            w.to_u64().expect("non-negative")
        })
        .collect()
}

/// A polygon vertex with integer abscissa.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PolygonPoint {
    pub x: u64,
    pub y: Rational,
}

impl PolygonPoint {
    pub fn new(x: u64, y: Rational) -> Self {
        PolygonPoint { x, y }
    }
}

/// Cumulative polygon through `(0,0)` and `(sum_{m<=k} c(m), (1/D) sum_{m<=k} m c(m))`.
fn cumulative_polygon(counts: &[u64], d: u64) -> Vec<PolygonPoint> {
    let mut out = alloc::vec![PolygonPoint::new(0, Rational::zero())];
    let (mut x, mut y) = (0u64, BigInt::zero());
    for (m, &c) in counts.iter().enumerate() {
        x += c;
        y += BigInt::from(m as u64) * BigInt::from(c);
        out.push(PolygonPoint::new(x, Rational::new(y.clone(), BigInt::from(d))));
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HodgePolygon {
    /// `(0,0)` followed by the distinct points `Q_k`.
    pub vertices: Vec<PolygonPoint>,
    /// Indices `k` in `1..nD` with `H(k+1) != 0`.
    pub break_indices: Vec<usize>,
    pub break_points: Vec<PolygonPoint>,
}

pub fn hodge_polygon(h: &[u64], d: u64) -> HodgePolygon {
    let all = cumulative_polygon(h, d);
    let mut vertices: Vec<PolygonPoint> = Vec::new();
    for q in all.iter() {
        if vertices.last() != Some(q) {
            vertices.push(q.clone());
        }
    }
    let top = h.len().saturating_sub(1);
    let break_indices: Vec<usize> = (1..top).filter(|&k| h[k + 1] != 0).collect();
    let break_points = break_indices.iter().map(|&k| all[k + 1].clone()).collect();
    HodgePolygon {
        vertices,
        break_indices,
        break_points,
    }
}

/// Chain-level polygon `P(Δ)`: `(0,0)`, then `P_0..P_kmax` from the `W` counts.
pub fn chain_polygon(w: &[u64], d: u64) -> Vec<PolygonPoint> {
    cumulative_polygon(w, d)
}

/// Slope multiset of a polygon: each segment contributes its slope once per unit of width.
pub fn polygon_slopes(points: &[PolygonPoint]) -> Vec<Rational> {
    let mut out = Vec::new();
    for w in points.windows(2) {
        let dx = w[1].x - w[0].x;
        if dx == 0 {
            continue;
        }
        let s = (&w[1].y - &w[0].y) / Rational::from_integer(BigInt::from(dx));
        out.extend(core::iter::repeat_n(s, dx as usize));
    }
    out
}

/// Degree of `L*(f,T)^{(-1)^{n-1}}` for non-degenerate `f`: `n! Vol(Δ)`.
pub fn lfunction_degree(p: &Polytope) -> BigInt {
    p.normalized_volume()
}

/// Everything the Hodge side predicts about a polytope.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HodgeData {
    pub n: usize,
    pub d: u64,
    /// `W(0..=max(nD, kmax))`
    pub w: Vec<u64>,
    /// `H(0..=nD)`
    pub h: Vec<u64>,
    pub hodge_polygon: HodgePolygon,
    /// `P(Δ)` through `kmax`
    pub chain_vertices: Vec<PolygonPoint>,
    pub degree: BigInt,
}

impl HodgeData {
    pub fn compute(p: &Polytope, chain_kmax: u64) -> Result<Self> {
        let d = denominator_u64(p)?;
        let top = p.n() as u64 * d;
        let w = weight_counts(p, top.max(chain_kmax))?;
        let h = hodge_numbers(p.n(), d, &w)?;
        let degree = lfunction_degree(p);
        let total: u64 = h.iter().sum();
        if BigInt::from(total) != degree {
            return Err(Error::Inconsistent(format!(
                "Hodge numbers sum to {total} but n!Vol = {degree}"
            )));
        }
        let hodge_polygon = hodge_polygon(&h, d);
        let chain_vertices = chain_polygon(&w[..=chain_kmax as usize], d);
        Ok(HodgeData {
            n: p.n(),
            d,
            w,
            h,
            hodge_polygon,
            chain_vertices,
            degree,
        })
    }

    /// Hodge polygon slopes `k/D` with multiplicity `H(k)`.
    pub fn slopes(&self) -> Vec<Rational> {
        polygon_slopes(&self.hodge_polygon.vertices)
    }
}
