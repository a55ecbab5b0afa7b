//! L-polynomials over `Q(ζ_p)`: reconstruction from power sums, exact
//! linear-factor division, `(1 - ζ_p)`-adic valuations and Newton polygons.

use alloc::format;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::exact::Rational;
use crate::oracle::cyclotomic::Cyclotomic;

/// `c_0 + c_1 T + ... + c_d T^d` with `c_0 = 1`, read as `prod (1 - γ_i T)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LPolynomial {
    p: u64,
    coeffs: Vec<Cyclotomic>,
}

impl LPolynomial {
    pub fn new(p: u64, coeffs: Vec<Cyclotomic>) -> Result<Self> {
        if coeffs.first() != Some(&Cyclotomic::one(p)) {
            return Err(Error::InvalidSpec("constant coefficient must be 1".into()));
        }
        if coeffs.iter().any(|c| c.p() != p) {
            return Err(Error::ShapeMismatch("coefficients from different cyclotomic fields".into()));
        }
        let mut coeffs = coeffs;
        while coeffs.len() > 1 && coeffs.last().is_some_and(Cyclotomic::is_zero) {
            coeffs.pop();
        }
        Ok(LPolynomial { p, coeffs })
    }

    /// `prod (1 - r_i T)` for rational `r_i`.
    pub fn from_rational_roots(p: u64, roots: &[Rational]) -> Self {
        let mut c = alloc::vec![Rational::one()];
        for r in roots {
            let mut next = alloc::vec![Rational::zero(); c.len() + 1];
            for (i, x) in c.iter().enumerate() {
                next[i] += x;
                next[i + 1] -= x * r;
            }
            c = next;
        }
        LPolynomial {
            p,
            coeffs: c.into_iter().map(|x| Cyclotomic::from_rational(p, x)).collect(),
        }
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[Cyclotomic] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> Cyclotomic {
        self.coeffs.get(k).cloned().unwrap_or_else(|| Cyclotomic::zero(self.p))
    }

    /// `S_k = -sum γ_i^k` for `k = 1..=kmax`, by Newton's identities
    /// `k c_k = sum_{i=1}^{k} S_i c_{k-i}`.
    pub fn power_sums(&self, kmax: usize) -> Vec<Cyclotomic> {
        let mut s: Vec<Cyclotomic> = Vec::with_capacity(kmax);
        for k in 1..=kmax {
            let mut acc = self.coeff(k).scale(&Rational::from_integer(BigInt::from(k)));
            for i in 1..k {
                acc = &acc - &(&s[i - 1] * &self.coeff(k - i));
            }
            s.push(acc);
        }
        s
    }

    /// Quotient by `1 - aT`; fails unless the division is exact.
    pub fn divide_linear(&self, a: &Rational) -> Result<Self> {
        let d = self.degree();
        if d == 0 {
            return Err(Error::Inconsistent("cannot divide a constant by a linear factor".into()));
        }
        let mut b: Vec<Cyclotomic> = Vec::with_capacity(d);
        b.push(Cyclotomic::one(self.p));
        for k in 1..d {
            let next = &self.coeffs[k] + &b[k - 1].scale(a);
            b.push(next);
        }
        let rem = &self.coeffs[d] + &b[d - 1].scale(a);
        if !rem.is_zero() {
            return Err(Error::Inconsistent(format!("1 - ({a})T does not divide the L-polynomial")));
        }
        LPolynomial::new(self.p, b)
    }

    pub fn divisible_by_linear(&self, a: &Rational) -> bool {
        self.divide_linear(a).is_ok()
    }

    /// `L(T/q)`.
    pub fn substitute_scaled(&self, q: &Rational) -> Self {
        let inv = Rational::one() / q;
        let mut f = Rational::one();
        let coeffs = self
            .coeffs
            .iter()
            .map(|c| {
                let out = c.scale(&f);
                f *= &inv;
                out
            })
            .collect();
        LPolynomial { p: self.p, coeffs }
    }

    /// Every coefficient fixed by `ζ ↦ ζ^{-1}`.
    pub fn is_self_conjugate(&self) -> bool {
        self.coeffs.iter().all(|c| &c.conjugate() == c)
    }

    /// Image of every coefficient under `ζ ↦ ζ^m`.
    pub fn twist(&self, m: u64) -> Self {
        LPolynomial {
            p: self.p,
            coeffs: self.coeffs.iter().map(|c| c.twist(m)).collect(),
        }
    }
}

/// Coefficients from `S_1..S_d` via `k c_k = sum_{i=1}^k S_i c_{k-i}`.
pub fn l_from_power_sums(sums: &[Cyclotomic], d: usize) -> Result<LPolynomial> {
    let p = sums
        .first()
        .map(Cyclotomic::p)
        .ok_or(Error::Empty("power sums"))?;
    if sums.len() < d {
        return Err(Error::ShapeMismatch(format!("{} power sums for degree {d}", sums.len())));
    }
    let mut c = alloc::vec![Cyclotomic::one(p)];
    for k in 1..=d {
        let mut acc = Cyclotomic::zero(p);
        for i in 1..=k {
            acc = &acc + &(&sums[i - 1] * &c[k - i]);
        }
        c.push(acc.scale(&Rational::new(BigInt::one(), BigInt::from(k))));
    }
    let l = LPolynomial { p, coeffs: c };
    // trailing zero coefficients would mean a smaller degree than promised
    if d > 0 && l.coeffs[d].is_zero() {
        return Err(Error::Inconsistent(format!("reconstructed polynomial has degree below {d}")));
    }
    Ok(l)
}

/// `L(T) = L*(T/q) / (1 - T/q)`.
pub fn derive_l_from_lstar(lstar: &LPolynomial, q: u64) -> Result<LPolynomial> {
    let q = Rational::from_integer(BigInt::from(q));
    lstar
        .substitute_scaled(&q)
        .divide_linear(&(Rational::one() / q))
}

/// Valuation of an integral `x` at `(1 - ζ_p)`, normalised so that `p` has
/// valuation `p - 1`. `None` means `x = 0`.
pub fn zeta_valuation(x: &Cyclotomic) -> Result<Option<u64>> {
    if !x.is_integral() {
        return Err(Error::NonIntegral(format!("{x} has non-integral coordinates")));
    }
    if x.is_zero() {
        return Ok(None);
    }
    let p = x.p();
    let bp = BigInt::from(p);
    let unit_cofactor = (2..p).fold(Cyclotomic::one(p), |acc, i| {
        &acc * &(&Cyclotomic::one(p) - &Cyclotomic::zeta_power(p, i))
    });
    let inv_p = Rational::new(BigInt::one(), bp.clone());
    let mut y = x.clone();
    let mut v = 0u64;
    loop {
        if y.coords().iter().all(|c| (c.numer() % &bp).is_zero()) {
            y = y.scale(&inv_p);
            v += p - 1;
            continue;
        }
        let s = y.coordinate_sum().to_integer();
        if !(s % &bp).is_zero() {
            return Ok(Some(v));
        }
        // y / (1 - ζ) = y * prod_{i=2}^{p-1} (1 - ζ^i) / p
        y = (&y * &unit_cofactor).scale(&inv_p);
        if !y.is_integral() {
            return Err(Error::Inconsistent("exact division by 1 - ζ left a remainder".into()));
        }
        v += 1;
    }
}

/// `ord_p` of an element of `Q(ζ_p)`; `None` for zero. The common denominator
/// is cleared first and its valuation subtracted.
pub fn ord_p(x: &Cyclotomic) -> Result<Option<Rational>> {
    let den = x
        .coords()
        .iter()
        .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    let bp = BigInt::from(x.p());
    let mut e = 0i64;
    let mut rest = den.clone();
    while (&rest % &bp).is_zero() {
        rest /= &bp;
        e += 1;
    }
    let v = zeta_valuation(&x.scale(&Rational::from_integer(den)))?;
    Ok(v.map(|v| Rational::new(BigInt::from(v), BigInt::from(x.p() - 1)) - Rational::from_integer(BigInt::from(e))))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NewtonPolygon {
    /// Lower hull vertices `(k, ord_q c_k)`.
    pub vertices: Vec<(usize, Rational)>,
    /// Slope of every unit-width piece, in increasing order.
    pub slopes: Vec<Rational>,
}

/// Lower convex hull of `(k, v_k)`, points given in increasing `k`.
pub fn lower_hull(points: &[(usize, Rational)]) -> NewtonPolygon {
    let mut hull: Vec<(usize, Rational)> = Vec::new();
    for pt in points {
        while hull.len() >= 2 {
            let (a, b) = (&hull[hull.len() - 2], &hull[hull.len() - 1]);
            // drop b when it lies on or above the segment a -> pt
            let lhs = (&b.1 - &a.1) * Rational::from_integer(BigInt::from(pt.0 - a.0));
            let rhs = (&pt.1 - &a.1) * Rational::from_integer(BigInt::from(b.0 - a.0));
            if lhs >= rhs {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push(pt.clone());
    }
    let mut slopes = Vec::new();
    for w in hull.windows(2) {
        let dx = w[1].0 - w[0].0;
        let s = (&w[1].1 - &w[0].1) / Rational::from_integer(BigInt::from(dx));
        slopes.extend(core::iter::repeat_n(s, dx));
    }
    NewtonPolygon { vertices: hull, slopes }
}

/// `q`-adic Newton polygon of an L-polynomial over a prime base field (`q = p`).
pub fn newton_polygon_of(l: &LPolynomial) -> Result<NewtonPolygon> {
    let mut pts = Vec::new();
    for (k, c) in l.coeffs().iter().enumerate() {
        if let Some(v) = ord_p(c)? {
            pts.push((k, v));
        }
    }
    Ok(lower_hull(&pts))
}

/// True when the polygon with slopes `np` lies on or above the one with
/// slopes `hp` and both share their endpoints.
pub fn polygon_above(np: &[Rational], hp: &[Rational]) -> bool {
    if np.len() != hp.len() {
        return false;
    }
    let (mut a, mut b) = (Rational::zero(), Rational::zero());
    for (x, y) in np.iter().zip(hp) {
        a += x;
        b += y;
        if a < b {
            return false;
        }
    }
    a == b
}

/// Negation of every power sum; turns the sums of `1/L` into those of `L`.
pub fn negate_sums(sums: &[Cyclotomic]) -> Vec<Cyclotomic> {
    sums.iter().map(|s| -s).collect()
}
