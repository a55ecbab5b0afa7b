//! Exact exponential sums over `F_{p^k}` with values in `Z[ζ_p]`, using
//! `ψ(x) = ζ_p^{Tr(x)}`.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::oracle::cyclotomic::Cyclotomic;
use crate::oracle::field::ExtField;
use crate::polytope::LaurentPolySpec;

/// Largest number of torus points a brute-force sum may visit.
pub const BRUTE_FORCE_BUDGET: u128 = 100_000_000;
/// Largest multiplicative group handled by the quadratic-time convolution paths.
pub const FAST_PATH_CAP: u64 = 20_000;

/// Exponents of g in term order: `x_1..x_4`, `x_5`, `x_5/(x_1x_2)`, `x_5/(x_3x_4)`.
pub const G_EXPONENTS: [[i64; 5]; 7] = [
    [1, 0, 0, 0, 0],
    [0, 1, 0, 0, 0],
    [0, 0, 1, 0, 0],
    [0, 0, 0, 1, 0],
    [0, 0, 0, 0, 1],
    [-1, -1, 0, 0, 1],
    [0, 0, -1, -1, 1],
];

/// Coefficients `a_1..a_6` of the constrained sum, as residues modulo `p`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PaperInstance {
    pub p: u64,
    pub a: [u64; 6],
}

impl PaperInstance {
    pub fn new(p: u64, a: [i64; 6]) -> Result<Self> {
        crate::exact::require_prime(p)?;
        let mut red = [0u64; 6];
        for (i, (r, &x)) in red.iter_mut().zip(&a).enumerate() {
            *r = x.rem_euclid(p as i64) as u64;
            if *r == 0 {
                return Err(Error::InvalidSpec(alloc::format!("a_{} vanishes modulo {p}", i + 1)));
            }
        }
        Ok(PaperInstance { p, a: red })
    }

    /// All coefficients equal to 1.
    pub fn ones(p: u64) -> Result<Self> {
        Self::new(p, [1; 6])
    }

    /// The five-variable polynomial `a_1x_1 + ... + a_4x_4 + x_5(a_5/(x_1x_2) + a_6/(x_3x_4) - 1)`.
    pub fn g_spec(&self) -> LaurentPolySpec {
        let a = self.a.map(|x| x as i64);
        let coeffs = [a[0], a[1], a[2], a[3], -1, a[4], a[5]];
        let terms: Vec<(i64, [i64; 5])> = coeffs.iter().copied().zip(G_EXPONENTS).collect();
        LaurentPolySpec::concrete(5, &terms).expect("g is well formed")
    }
}

fn budget(what: &'static str, base: u64, power: u32, cap: u128) -> Result<()> {
    let size = (base as u128).saturating_pow(power);
    if size > cap {
        return Err(Error::BudgetExceeded { what, size, cap });
    }
    Ok(())
}

fn log_of_residue(field: &ExtField, c: u64) -> usize {
    field.log_of(field.from_prime_field(c)).expect("non-zero residue")
}

/// `S*_k(f) = sum over the torus of ψ(Tr f(x))`, by visiting every point.
pub fn exp_sum_bruteforce(f: &LaurentPolySpec, p: u64, k: u32) -> Result<Cyclotomic> {
    let coeffs = f.concrete_coefficients(p)?;
    let field = ExtField::new(p, k)?;
    let n_units = field.units();
    budget(
        "brute-force torus points (use the fast path)",
        n_units as u64,
        f.n() as u32,
        BRUTE_FORCE_BUDGET,
    )?;
    let nu = n_units as i64;
    let exps: Vec<&[i64]> = f.exponents().collect();
    // log of each term's value at the current point
    let mut logs: Vec<i64> = coeffs.iter().map(|&c| log_of_residue(&field, c) as i64).collect();
    let tr = field.trace_table();
    let mut bins = alloc::vec![0i64; p as usize];
    let mut point = alloc::vec![0usize; f.n()];
    loop {
        let t: u64 = logs.iter().map(|&l| tr[l as usize] as u64).sum();
        bins[(t % p) as usize] += 1;
        // odometer step over the discrete logs of x_1..x_n
        let mut i = 0;
        loop {
            if i == point.len() {
                return Ok(Cyclotomic::from_bins(p, &bins));
            }
            let step = if point[i] + 1 < n_units {
                point[i] += 1;
                1
            } else {
                point[i] = 0;
                1 - nu
            };
            for (l, e) in logs.iter_mut().zip(&exps) {
                *l = (*l + step * e[i]).rem_euclid(nu);
            }
            if step == 1 {
                break;
            }
            i += 1;
        }
    }
}

/// Kloosterman bins: entry `[l][j]` counts representations of `g^l` with trace sum `j`.
#[derive(Debug, Clone)]
pub struct KloostermanTables {
    p: usize,
    kl2: Vec<u64>,
    kl3: Vec<u64>,
}

impl KloostermanTables {
    /// Rank 2 and rank 3 tables by multiplicative convolution over the discrete logs.
    pub fn new(field: &ExtField) -> Result<Self> {
        let n = field.units();
        if n as u64 > FAST_PATH_CAP {
            return Err(Error::BudgetExceeded {
                what: "Kloosterman table size q^k - 1",
                size: n as u128,
                cap: FAST_PATH_CAP as u128,
            });
        }
        let p = field.p() as usize;
        let tr: Vec<usize> = field.trace_table().iter().map(|&t| t as usize).collect();
        let mut kl2 = alloc::vec![0u64; n * p];
        for l in 0..n {
            let row = &mut kl2[l * p..(l + 1) * p];
            for a in 0..n {
                let b = if a <= l { l - a } else { l + n - a };
                let j = tr[a] + tr[b];
                row[if j >= p { j - p } else { j }] += 1;
            }
        }
        let mut kl3 = alloc::vec![0u64; n * p];
        for l in 0..n {
            let out = &mut kl3[l * p..(l + 1) * p];
            for a in 0..n {
                let b = if a <= l { l - a } else { l + n - a };
                let t = tr[a];
                let src = &kl2[b * p..(b + 1) * p];
                for (j, &c) in src.iter().enumerate() {
                    let jj = j + t;
                    out[if jj >= p { jj - p } else { jj }] += c;
                }
            }
        }
        Ok(KloostermanTables { p, kl2, kl3 })
    }

    pub fn kl2_bins(&self, l: usize) -> &[u64] {
        let n = self.kl2.len() / self.p;
        let l = l % n;
        &self.kl2[l * self.p..(l + 1) * self.p]
    }

    pub fn kl3_bins(&self, l: usize) -> &[u64] {
        let n = self.kl3.len() / self.p;
        let l = l % n;
        &self.kl3[l * self.p..(l + 1) * self.p]
    }
}

/// `Kl3(t)` for `t = g^l`, `l = 0..q^k-1`.
pub fn kloosterman3_table(field: &ExtField) -> Result<Vec<Cyclotomic>> {
    let tables = KloostermanTables::new(field)?;
    Ok((0..field.units())
        .map(|l| Cyclotomic::from_bins(field.p(), tables.kl3_bins(l)))
        .collect())
}

/// `bins[(i + j + shift) mod p] += a[i] b[j]`.
fn accumulate_product(bins: &mut [i128], a: &[u64], b: &[u64], shift: usize) {
    let p = bins.len();
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            bins[(i + j + shift) % p] += x as i128 * y as i128;
        }
    }
}

/// `S*_k(g) = sum_{x_5} Kl3(a_1a_2a_5x_5) Kl3(a_3a_4a_6x_5) ψ(Tr(-x_5))`.
pub fn s_star_fast(inst: &PaperInstance, k: u32) -> Result<Cyclotomic> {
    let field = ExtField::new(inst.p, k)?;
    let tables = KloostermanTables::new(&field)?;
    s_star_from_tables(inst, &field, &tables)
}

pub fn s_star_from_tables(inst: &PaperInstance, field: &ExtField, tables: &KloostermanTables) -> Result<Cyclotomic> {
    let n = field.units();
    let lg = |c: u64| log_of_residue(field, c);
    let la = lg(inst.a[0]) + lg(inst.a[1]) + lg(inst.a[4]);
    let lb = lg(inst.a[2]) + lg(inst.a[3]) + lg(inst.a[5]);
    let lneg = field.log_minus_one();
    let tr = field.trace_table();
    let mut bins = alloc::vec![0i128; inst.p as usize];
    for l5 in 0..n {
        let shift = tr[(l5 + lneg) % n] as usize;
        accumulate_product(&mut bins, tables.kl3_bins(la + l5), tables.kl3_bins(lb + l5), shift);
    }
    Ok(Cyclotomic::from_bins(inst.p, &bins))
}

/// `S_k(ā)` by enumerating `x_1, x_2, x_3` and solving the constraint for `x_4`.
pub fn constrained_sum(inst: &PaperInstance, k: u32) -> Result<Cyclotomic> {
    let field = ExtField::new(inst.p, k)?;
    budget("constrained-sum tuples", field.units() as u64, 4, BRUTE_FORCE_BUDGET)?;
    let n = field.units();
    let a: Vec<u64> = inst.a.iter().map(|&c| field.from_prime_field(c)).collect();
    let mut bins = alloc::vec![0i64; inst.p as usize];
    for l1 in 0..n {
        let x1 = field.exp_of(l1);
        for l2 in 0..n {
            let x2 = field.exp_of(l2);
            let x1x2 = field.mul_slow(x1, x2);
            // a_6/(x_3x_4) = 1 - a_5/(x_1x_2)
            let rest = field.sub(1, field.mul(a[4], field.exp_of(n - field.log_of(x1x2).expect("unit"))));
            let Some(lrest) = field.log_of(rest) else {
                continue;
            };
            for l3 in 0..n {
                let x3 = field.exp_of(l3);
                // x_4 = a_6 / (x_3 * rest)
                let l4 = (field.log_of(a[5]).expect("unit") + 2 * n - l3 - lrest) % n;
                let x4 = field.exp_of(l4);
                debug_assert_eq!(field.mul(a[5], field.exp_of(n - field.log_of(field.mul(x3, x4)).unwrap())), rest);
                let lin = [
                    field.mul_slow(a[0], x1),
                    field.mul_slow(a[1], x2),
                    field.mul_slow(a[2], x3),
                    field.mul_slow(a[3], x4),
                ]
                .into_iter()
                .fold(0, |acc, y| field.add(acc, y));
                bins[field.trace_to_prime(lin) as usize] += 1;
            }
        }
    }
    Ok(Cyclotomic::from_bins(inst.p, &bins))
}

/// `S_k(ā) = sum_{s ≠ a_5} K_{12}(s) K_{34}(a_6/(1 - a_5/s))` with
/// `K_{12}(s) = Kl2(a_1a_2s)` and `K_{34}(t) = Kl2(a_3a_4t)`.
pub fn constrained_sum_fast(inst: &PaperInstance, k: u32) -> Result<Cyclotomic> {
    let field = ExtField::new(inst.p, k)?;
    let tables = KloostermanTables::new(&field)?;
    constrained_sum_from_tables(inst, &field, &tables)
}

pub fn constrained_sum_from_tables(
    inst: &PaperInstance,
    field: &ExtField,
    tables: &KloostermanTables,
) -> Result<Cyclotomic> {
    let n = field.units();
    let lg = |c: u64| log_of_residue(field, c);
    let l12 = lg(inst.a[0]) + lg(inst.a[1]);
    let l34 = lg(inst.a[2]) + lg(inst.a[3]);
    let (l5, l6) = (lg(inst.a[4]), lg(inst.a[5]));
    let mut bins = alloc::vec![0i128; inst.p as usize];
    for ls in 0..n {
        let e = field.exp_of(l5 + n - ls);
        let Some(lw) = field.log_of(field.sub(1, e)) else {
            continue;
        };
        let lt = l6 + n - lw;
        accumulate_product(&mut bins, tables.kl2_bins(l12 + ls), tables.kl2_bins(l34 + lt), 0);
    }
    Ok(Cyclotomic::from_bins(inst.p, &bins))
}

/// Both `S*_k(g)` and `S_k(ā)` for `k = 1..=kmax` from one table per `k`.
#[derive(Debug, Clone)]
pub struct InstanceSums {
    pub s_star: Vec<Cyclotomic>,
    pub s_constrained: Vec<Cyclotomic>,
}

pub fn instance_sums(inst: &PaperInstance, kmax: u32) -> Result<InstanceSums> {
    let mut s_star = Vec::new();
    let mut s_constrained = Vec::new();
    for k in 1..=kmax {
        let field = ExtField::new(inst.p, k)?;
        let tables = KloostermanTables::new(&field)?;
        s_star.push(s_star_from_tables(inst, &field, &tables)?);
        s_constrained.push(constrained_sum_from_tables(inst, &field, &tables)?);
    }
    Ok(InstanceSums { s_star, s_constrained })
}
