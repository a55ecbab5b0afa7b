//! Small finite fields `F_{p^k}` with discrete log tables.
//!
//! Elements are encoded as integers `0..p^k` whose base-`p` digits are the
//! coefficients of the polynomial representative (digit `i` multiplies `x^i`).

use alloc::format;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::exact::require_prime;

pub const MAX_FIELD_SIZE: u64 = 200_000;

#[derive(Debug, Clone)]
pub struct ExtField {
    p: u64,
    k: u32,
    q: u64,
    /// Lower coefficients `c_0..c_{k-1}` of the monic modulus.
    modulus: Vec<u64>,
    generator: u64,
    exp: Vec<u32>,
    log: Vec<u32>,
    /// `Tr(g^l)` for every `l`.
    trace_log: Vec<u32>,
}

fn digits(mut x: u64, p: u64, k: u32) -> Vec<u64> {
    (0..k)
        .map(|_| {
            let d = x % p;
            x /= p;
            d
        })
        .collect()
}

fn undigits(d: &[u64], p: u64) -> u64 {
    d.iter().rev().fold(0, |acc, &c| acc * p + c)
}

/// Product of two residues modulo the monic polynomial `x^k + sum c_i x^i`.
fn poly_mulmod(a: &[u64], b: &[u64], modulus: &[u64], p: u64) -> Vec<u64> {
    let k = modulus.len();
    let mut prod = alloc::vec![0u64; 2 * k];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            prod[i + j] = (prod[i + j] + x * y) % p;
        }
    }
    for deg in (k..2 * k).rev() {
        let c = prod[deg];
        if c == 0 {
            continue;
        }
        prod[deg] = 0;
        // x^deg = x^{deg-k} * x^k = -x^{deg-k} * sum m_i x^i
        for (i, &m) in modulus.iter().enumerate() {
            let t = c * m % p;
            prod[deg - k + i] = (prod[deg - k + i] + p - t) % p;
        }
    }
    prod.truncate(k);
    prod
}

/// Remainder of `a` (low-to-high coefficients) modulo a monic `m` (full, including leading 1).
fn poly_rem(a: &[u64], m: &[u64], p: u64) -> Vec<u64> {
    let mut r = a.to_vec();
    let dm = m.len() - 1;
    while r.len() > dm {
        let c = r.pop().expect("non-empty");
        if c == 0 {
            continue;
        }
        let shift = r.len() - dm;
        for (i, &mi) in m[..dm].iter().enumerate() {
            r[shift + i] = (r[shift + i] + p - c * mi % p) % p;
        }
    }
    r
}

/// Trial division by every monic polynomial of degree `1..=k/2`.
fn is_irreducible(lower: &[u64], p: u64) -> bool {
    let k = lower.len();
    let mut f = lower.to_vec();
    f.push(1);
    for d in 1..=k / 2 {
        for low in 0..p.pow(d as u32) {
            let mut m = digits(low, p, d as u32);
            m.push(1);
            if poly_rem(&f, &m, p).iter().all(|&c| c == 0) {
                return false;
            }
        }
    }
    true
}

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

impl ExtField {
    /// Deterministic construction: the smallest monic irreducible modulus
    /// (ordered by the integer encoding of its lower coefficients) and the
    /// smallest primitive element.
    pub fn new(p: u64, k: u32) -> Result<Self> {
        require_prime(p)?;
        if k == 0 {
            return Err(Error::InvalidSpec("extension degree must be at least 1".into()));
        }
        let q = p
            .checked_pow(k)
            .filter(|&q| q <= MAX_FIELD_SIZE)
            .ok_or(Error::BudgetExceeded {
                what: "field size p^k",
                size: (p as u128).saturating_pow(k),
                cap: MAX_FIELD_SIZE as u128,
            })?;
        let modulus = (0..q)
            .map(|low| digits(low, p, k))
            .find(|m| is_irreducible(m, p))
            .expect("irreducible polynomials exist in every degree");
        let n = q - 1;
        let factors = prime_factors(n);
        let pow = |x: u64, mut e: u64| -> u64 {
            let mut base = digits(x, p, k);
            let mut acc = digits(1, p, k);
            while e > 0 {
                if e & 1 == 1 {
                    acc = poly_mulmod(&acc, &base, &modulus, p);
                }
                base = poly_mulmod(&base, &base, &modulus, p);
                e >>= 1;
            }
            undigits(&acc, p)
        };
        let generator = (1..q)
            .find(|&g| pow(g, n) == 1 && factors.iter().all(|&r| pow(g, n / r) != 1))
            .ok_or_else(|| Error::Inconsistent(format!("no primitive element in F_{q}")))?;

        let mut exp = Vec::with_capacity(n as usize);
        let mut log = alloc::vec![u32::MAX; q as usize];
        let gd = digits(generator, p, k);
        let mut cur = digits(1, p, k);
        for l in 0..n {
            let e = undigits(&cur, p);
            if log[e as usize] != u32::MAX {
                return Err(Error::Inconsistent(format!("generator of F_{q} has order {l}")));
            }
            exp.push(e as u32);
            log[e as usize] = l as u32;
            cur = poly_mulmod(&cur, &gd, &modulus, p);
        }
        let mut field = ExtField {
            p,
            k,
            q,
            modulus,
            generator,
            exp,
            log,
            trace_log: Vec::new(),
        };
        field.trace_log = (0..n).map(|l| field.trace_by_frobenius(field.exp[l as usize] as u64) as u32).collect();
        Ok(field)
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    /// Order of the multiplicative group.
    pub fn units(&self) -> usize {
        self.exp.len()
    }

    /// Lower coefficients `c_0..c_{k-1}` of the monic modulus.
    pub fn modulus(&self) -> &[u64] {
        &self.modulus
    }

    pub fn generator(&self) -> u64 {
        self.generator
    }

    pub fn add(&self, a: u64, b: u64) -> u64 {
        let (da, db) = (digits(a, self.p, self.k), digits(b, self.p, self.k));
        let s: Vec<u64> = da.iter().zip(&db).map(|(x, y)| (x + y) % self.p).collect();
        undigits(&s, self.p)
    }

    pub fn neg(&self, a: u64) -> u64 {
        let d: Vec<u64> = digits(a, self.p, self.k).iter().map(|&x| (self.p - x) % self.p).collect();
        undigits(&d, self.p)
    }

    pub fn sub(&self, a: u64, b: u64) -> u64 {
        self.add(a, self.neg(b))
    }

    pub fn mul(&self, a: u64, b: u64) -> u64 {
        if a == 0 || b == 0 {
            return 0;
        }
        self.exp_of((self.log[a as usize] as usize + self.log[b as usize] as usize) % self.units())
    }

    /// Multiplication by polynomial arithmetic, bypassing the tables.
    pub fn mul_slow(&self, a: u64, b: u64) -> u64 {
        let r = poly_mulmod(&digits(a, self.p, self.k), &digits(b, self.p, self.k), &self.modulus, self.p);
        undigits(&r, self.p)
    }

    /// Discrete log to the base of the generator; `None` for zero.
    pub fn log_of(&self, a: u64) -> Option<usize> {
        (a != 0).then(|| self.log[a as usize] as usize)
    }

    pub fn exp_of(&self, l: usize) -> u64 {
        self.exp[l % self.units()] as u64
    }

    /// Embeds a residue modulo `p` as a constant polynomial.
    pub fn from_prime_field(&self, c: u64) -> u64 {
        c % self.p
    }

    /// Discrete log of `-1`.
    pub fn log_minus_one(&self) -> usize {
        if self.p == 2 {
            0
        } else {
            self.units() / 2
        }
    }

    /// `x + x^p + ... + x^{p^{k-1}}`, as a residue modulo `p`.
    pub fn trace_to_prime(&self, x: u64) -> u64 {
        match self.log_of(x) {
            None => 0,
            Some(l) => self.trace_log[l] as u64,
        }
    }

    fn trace_by_frobenius(&self, x: u64) -> u64 {
        let mut acc = 0u64;
        let mut y = x;
        for _ in 0..self.k {
            acc = self.add(acc, y);
            y = self.exp_of(self.log[y as usize] as usize * self.p as usize);
        }
        assert!(acc < self.p, "trace must land in the prime field");
        acc
    }

    /// `Tr(g^l)` for `l = 0..q-1`.
    pub fn trace_table(&self) -> &[u32] {
        &self.trace_log
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prime_field() {
        let f = ExtField::new(3, 1).unwrap();
        assert_eq!(f.generator(), 2);
        assert_eq!(f.units(), 2);
        assert_eq!(f.trace_to_prime(2), 2);
    }

    #[test]
    fn f8_uses_x3_x_1() {
        let f = ExtField::new(2, 3).unwrap();
        assert_eq!(f.modulus(), &[1, 1, 0]);
        assert_eq!(f.units(), 7);
    }

    #[test]
    fn f9_group_table() {
        let f = ExtField::new(3, 2).unwrap();
        assert_eq!(f.units(), 8);
        // x^2 + 1 is the smallest irreducible quadratic over F_3
        assert_eq!(f.modulus(), &[1, 0]);
        // base field elements have trace 2x
        for x in 1..3 {
            assert_eq!(f.trace_to_prime(x), 2 * x % 3);
        }
        // all elements appear once in the exp table
        let mut seen: Vec<u64> = (0..8).map(|l| f.exp_of(l)).collect();
        seen.sort();
        assert_eq!(seen, (1..9).collect::<Vec<_>>());
    }

    #[test]
    fn trace_is_linear_and_balanced() {
        let f = ExtField::new(5, 2).unwrap();
        for a in 0..25 {
            for b in 0..25 {
                assert_eq!(f.trace_to_prime(f.add(a, b)), (f.trace_to_prime(a) + f.trace_to_prime(b)) % 5);
                assert_eq!(f.mul(a, b), f.mul_slow(a, b));
            }
        }
        let mut hist = [0; 5];
        for x in 0..25 {
            hist[f.trace_to_prime(x) as usize] += 1;
        }
        assert_eq!(hist, [5; 5]);
    }

    #[test]
    fn caps_and_primes() {
        assert!(matches!(ExtField::new(4, 1), Err(Error::NotPrime(4))));
        assert!(matches!(ExtField::new(3, 20), Err(Error::BudgetExceeded { .. })));
    }
}
