//! Numeric reciprocal roots of L-polynomials under each complex embedding.

use alloc::vec::Vec;

use num_complex::Complex64;
#[allow(unused_imports)] // needed only without std
use num_traits::Float;

use crate::error::{Error, Result};
use crate::oracle::cyclotomic::Cyclotomic;
use crate::oracle::lpoly::LPolynomial;

pub const MAX_ROOT_DEGREE: usize = 12;
/// Relative tolerance on root moduli.
pub const MODULUS_TOLERANCE: f64 = 1e-6;

/// Reciprocal roots under `ζ_p ↦ e^{2πim/p}`, sorted by modulus.
#[derive(Debug, Clone)]
pub struct EmbeddingRoots {
    pub m: u64,
    pub roots: Vec<Complex64>,
    pub moduli: Vec<f64>,
}

fn horner(coeffs: &[Complex64], z: Complex64) -> (Complex64, Complex64) {
    let mut v = Complex64::new(0.0, 0.0);
    let mut dv = Complex64::new(0.0, 0.0);
    for &c in coeffs {
        dv = dv * z + v;
        v = v * z + c;
    }
    (v, dv)
}

/// Roots of the monic polynomial `z^d + coeffs[1] z^{d-1} + ... + coeffs[d]`
/// by Aberth iteration followed by Newton polishing.
fn aberth(coeffs: &[Complex64]) -> Result<Vec<Complex64>> {
    let d = coeffs.len() - 1;
    if d == 0 {
        return Ok(Vec::new());
    }
    // Cauchy bound on the root moduli
    let radius = 1.0 + coeffs[1..].iter().map(|c| c.norm()).fold(0.0, f64::max);
    let start = radius.min(1e6) * 0.5;
    let mut z: Vec<Complex64> = (0..d)
        .map(|i| Complex64::from_polar(start, 2.0 * core::f64::consts::PI * (i as f64 + 0.4) / d as f64))
        .collect();
    let mut converged = false;
    for _ in 0..2000 {
        let mut worst: f64 = 0.0;
        for i in 0..d {
            let (v, dv) = horner(coeffs, z[i]);
            if v.norm() == 0.0 {
                continue;
            }
            let ratio = v / dv;
            let repulsion: Complex64 = (0..d)
                .filter(|&j| j != i)
                .map(|j| Complex64::new(1.0, 0.0) / (z[i] - z[j]))
                .sum();
            let w = ratio / (Complex64::new(1.0, 0.0) - ratio * repulsion);
            if w.is_finite() {
                z[i] -= w;
                worst = worst.max(w.norm() / z[i].norm().max(1.0));
            }
        }
        if worst < 1e-15 {
            converged = true;
            break;
        }
    }
    if !converged || z.iter().any(|r| !r.is_finite()) {
        return Err(Error::RootFinding { degree: d });
    }
    for r in z.iter_mut() {
        for _ in 0..3 {
            let (v, dv) = horner(coeffs, *r);
            let step = v / dv;
            if step.is_finite() {
                *r -= step;
            }
        }
    }
    Ok(z)
}

/// Reciprocal roots of `L` under one embedding.
pub fn complex_roots(l: &LPolynomial, m: u64) -> Result<EmbeddingRoots> {
    if l.degree() > MAX_ROOT_DEGREE {
        return Err(Error::TooLarge(alloc::format!(
            "degree {} exceeds the root finder limit {MAX_ROOT_DEGREE}",
            l.degree()
        )));
    }
    // the reciprocal roots are the roots of z^d L(1/z) = sum c_k z^{d-k}
    let coeffs: Vec<Complex64> = l.coeffs().iter().map(|c| c.embed(m)).collect();
    let mut roots = aberth(&coeffs)?;
    roots.sort_by(|a, b| a.norm().total_cmp(&b.norm()).then(a.arg().total_cmp(&b.arg())));
    let moduli = roots.iter().map(|r| r.norm()).collect();
    Ok(EmbeddingRoots { m, roots, moduli })
}

/// Roots under every embedding `m = 1..p-1`.
pub fn complex_weights(l: &LPolynomial) -> Result<Vec<EmbeddingRoots>> {
    (1..l.p().max(2)).map(|m| complex_roots(l, m)).collect()
}

/// Nearest integer weight `ω` with `|γ| = q^{ω/2}`, and the relative error of the fit.
pub fn weight_of_modulus(modulus: f64, q: u64) -> (i64, f64) {
    let q = q as f64;
    let w = (2.0 * modulus.ln() / q.ln()).round();
    let target = q.powf(w / 2.0);
    (w as i64, (modulus - target).abs() / target)
}

/// Number of reciprocal roots of each weight, identical across embeddings.
pub fn weight_histogram(l: &LPolynomial, q: u64) -> Result<Vec<usize>> {
    let mut result: Option<Vec<usize>> = None;
    for e in complex_weights(l)? {
        let mut hist = Vec::new();
        for &r in &e.moduli {
            let (w, err) = weight_of_modulus(r, q);
            if err > MODULUS_TOLERANCE || w < 0 {
                return Err(Error::Inconsistent(alloc::format!(
                    "root modulus {r} is not a half-integral power of {q} (relative error {err:e})"
                )));
            }
            let w = w as usize;
            if hist.len() <= w {
                hist.resize(w + 1, 0);
            }
            hist[w] += 1;
        }
        match &result {
            None => result = Some(hist),
            Some(h) if *h != hist => {
                return Err(Error::Inconsistent("weight histograms differ between embeddings".into()));
            }
            _ => {}
        }
    }
    Ok(result.unwrap_or_default())
}

#[derive(Debug, Clone, PartialEq)]
pub struct BoundCheck {
    pub k: usize,
    pub bound: f64,
    /// Largest `|S_k|` over the embeddings.
    pub max_abs: f64,
    pub holds: bool,
}

/// `|S_k(ā)| <= 6 q^{3k/2} + q^k + 1` in every embedding, `sums[k-1] = S_k`.
pub fn verify_bound(sums: &[Cyclotomic], q: u64) -> Vec<BoundCheck> {
    let q = q as f64;
    sums.iter()
        .enumerate()
        .map(|(i, s)| {
            let k = (i + 1) as f64;
            let bound = 6.0 * q.powf(1.5 * k) + q.powf(k) + 1.0;
            let max_abs = (1..s.p().max(2))
                .map(|m| s.embed(m).norm())
                .fold(0.0, f64::max);
            BoundCheck {
                k: i + 1,
                bound,
                max_abs,
                holds: max_abs <= bound * (1.0 + 1e-9),
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::integer;

    #[test]
    fn rational_roots_are_found() {
        let l = LPolynomial::from_rational_roots(3, &[integer(1), integer(3), integer(9)]);
        let r = complex_roots(&l, 1).unwrap();
        for (got, want) in r.moduli.iter().zip([1.0, 3.0, 9.0]) {
            assert!((got - want).abs() < 1e-9);
        }
        assert_eq!(weight_histogram(&l, 3).unwrap(), [1, 0, 1, 0, 1]);
    }

    #[test]
    fn linear_factor() {
        let l = LPolynomial::from_rational_roots(5, &[integer(1)]);
        let all = complex_weights(&l).unwrap();
        assert_eq!(all.len(), 4);
        assert!(all.iter().all(|e| (e.moduli[0] - 1.0).abs() < 1e-12));
    }

    #[test]
    fn weight_fit() {
        assert_eq!(weight_of_modulus(27f64.sqrt(), 3).0, 3);
        assert!(weight_of_modulus(4.0, 3).1 > 1e-3);
    }

    #[test]
    fn bound_on_small_values() {
        let checks = verify_bound(&[Cyclotomic::from_integer(3, 4)], 3);
        assert!(checks[0].holds);
        let bad = verify_bound(&[Cyclotomic::from_integer(3, 1000)], 3);
        assert!(!bad[0].holds);
    }
}
