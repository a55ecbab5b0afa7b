use alloc::vec::Vec;
use core::fmt;
use core::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::exact::Rational;

/// Element of `Q(ζ_p)` in the power basis `1, ζ, ..., ζ^{p-2}`.
#[derive(Clone, PartialEq, Eq)]
pub struct Cyclotomic {
    p: u64,
    coords: Vec<Rational>,
}

impl Cyclotomic {
    pub fn zero(p: u64) -> Self {
        Cyclotomic {
            p,
            coords: alloc::vec![Rational::zero(); (p - 1) as usize],
        }
    }

    pub fn one(p: u64) -> Self {
        Self::from_rational(p, Rational::one())
    }

    pub fn from_rational(p: u64, r: Rational) -> Self {
        let mut z = Self::zero(p);
        z.coords[0] = r;
        z
    }

    pub fn from_integer(p: u64, v: impl Into<BigInt>) -> Self {
        Self::from_rational(p, Rational::from_integer(v.into()))
    }

    pub fn from_coords(p: u64, coords: Vec<Rational>) -> Result<Self> {
        if coords.len() as u64 != p - 1 {
            return Err(Error::ShapeMismatch(alloc::format!(
                "{} coordinates for Q(ζ_{p}), expected {}",
                coords.len(),
                p - 1
            )));
        }
        Ok(Cyclotomic { p, coords })
    }

    /// `ζ^e`.
    pub fn zeta_power(p: u64, e: u64) -> Self {
        let mut bins = alloc::vec![BigInt::zero(); p as usize];
        bins[(e % p) as usize] = BigInt::one();
        Self::reduce(p, bins.into_iter().map(Rational::from_integer).collect())
    }

    /// `sum_j bins[j] ζ^j` for `j = 0..p`.
    pub fn from_bins<T: Copy + Into<BigInt>>(p: u64, bins: &[T]) -> Self {
        assert_eq!(bins.len() as u64, p, "one bin per power of ζ");
        Self::reduce(p, bins.iter().map(|&b| Rational::from_integer(b.into())).collect())
    }

    /// Uses `ζ^{p-1} = -(1 + ζ + ... + ζ^{p-2})`.
    fn reduce(p: u64, mut full: Vec<Rational>) -> Self {
        let top = full.pop().expect("p >= 2");
        if !top.is_zero() {
            for c in full.iter_mut() {
                *c -= &top;
            }
        }
        Cyclotomic { p, coords: full }
    }

    /// Coordinates padded with a zero `ζ^{p-1}` slot.
    fn full(&self) -> Vec<Rational> {
        let mut v = self.coords.clone();
        v.push(Rational::zero());
        v
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn coords(&self) -> &[Rational] {
        &self.coords
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(Zero::is_zero)
    }

    pub fn is_integral(&self) -> bool {
        self.coords.iter().all(Rational::is_integer)
    }

    /// The value, when the element lies in `Q`.
    pub fn as_rational(&self) -> Option<&Rational> {
        self.coords[1..].iter().all(Zero::is_zero).then(|| &self.coords[0])
    }

    pub fn scale(&self, r: &Rational) -> Self {
        Cyclotomic {
            p: self.p,
            coords: self.coords.iter().map(|c| c * r).collect(),
        }
    }

    /// Image under `ζ ↦ ζ^m`, `m` prime to `p`.
    pub fn twist(&self, m: u64) -> Self {
        assert!(!m.is_multiple_of(self.p), "twist must be an automorphism");
        let full = self.full();
        let mut out = alloc::vec![Rational::zero(); self.p as usize];
        for (i, c) in full.into_iter().enumerate() {
            out[(i as u64 * m % self.p) as usize] += c;
        }
        Self::reduce(self.p, out)
    }

    /// Complex conjugate, `ζ ↦ ζ^{-1}`.
    pub fn conjugate(&self) -> Self {
        self.twist(self.p - 1)
    }

    /// Sum of the power-basis coordinates, i.e. the image under `ζ ↦ 1`;
    /// modulo `p` this is reduction modulo `(1 - ζ)`.
    pub fn coordinate_sum(&self) -> Rational {
        self.coords.iter().sum()
    }

    /// Value under the embedding `ζ ↦ e^{2πim/p}`.
    pub fn embed(&self, m: u64) -> Complex64 {
        let theta = 2.0 * core::f64::consts::PI * (m % self.p) as f64 / self.p as f64;
        self.coords
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| Complex64::from_polar(1.0, theta * i as f64) * c.to_f64().unwrap_or(f64::NAN))
            .sum()
    }

    fn check_same_field(&self, other: &Self) {
        assert_eq!(self.p, other.p, "mixing cyclotomic fields");
    }
}

impl Add for &Cyclotomic {
    type Output = Cyclotomic;
    fn add(self, rhs: &Cyclotomic) -> Cyclotomic {
        self.check_same_field(rhs);
        Cyclotomic {
            p: self.p,
            coords: self.coords.iter().zip(&rhs.coords).map(|(a, b)| a + b).collect(),
        }
    }
}

impl Sub for &Cyclotomic {
    type Output = Cyclotomic;
    fn sub(self, rhs: &Cyclotomic) -> Cyclotomic {
        self.check_same_field(rhs);
        Cyclotomic {
            p: self.p,
            coords: self.coords.iter().zip(&rhs.coords).map(|(a, b)| a - b).collect(),
        }
    }
}

impl Neg for &Cyclotomic {
    type Output = Cyclotomic;
    fn neg(self) -> Cyclotomic {
        Cyclotomic {
            p: self.p,
            coords: self.coords.iter().map(|a| -a).collect(),
        }
    }
}

impl Mul for &Cyclotomic {
    type Output = Cyclotomic;
    fn mul(self, rhs: &Cyclotomic) -> Cyclotomic {
        self.check_same_field(rhs);
        let p = self.p as usize;
        let mut out = alloc::vec![Rational::zero(); p];
        for (i, a) in self.coords.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coords.iter().enumerate() {
                if !b.is_zero() {
                    out[(i + j) % p] += a * b;
                }
            }
        }
        Cyclotomic::reduce(self.p, out)
    }
}

macro_rules! owned_ops {
    ($($tr:ident $m:ident),*) => {$(
        impl $tr for Cyclotomic {
            type Output = Cyclotomic;
            fn $m(self, rhs: Cyclotomic) -> Cyclotomic {
                (&self).$m(&rhs)
            }
        }
    )*};
}
owned_ops!(Add add, Sub sub, Mul mul);

impl Neg for Cyclotomic {
    type Output = Cyclotomic;
    fn neg(self) -> Cyclotomic {
        -&self
    }
}

impl fmt::Debug for Cyclotomic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Writes e.g. `1 + 3ζ^2` (with `ζ = ζ_p`).
impl fmt::Display for Cyclotomic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, c) in self.coords.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let mag = c.abs();
            if first {
                if c.is_negative() {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if c.is_negative() { " - " } else { " + " })?;
            }
            first = false;
            let show_mag = i == 0 || !mag.is_one();
            if show_mag {
                if mag.is_integer() {
                    write!(f, "{}", mag.numer())?;
                } else {
                    write!(f, "({}/{})", mag.numer(), mag.denom())?;
                }
            }
            match i {
                0 => {}
                1 => f.write_str("ζ")?,
                _ => write!(f, "ζ^{i}")?,
            }
        }
        if first {
            f.write_str("0")?;
        }
        Ok(())
    }
}
