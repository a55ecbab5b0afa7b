//! Randomized identities across the exact core, the polytope layer and the
//! oracle, shared by the property suite and the acceptance run.

#![allow(dead_code)] // each test target uses a different part

use expsum_core::exact::{
    det_exact, integer, lp_solve, rank, smith_normal_form, IntMatrix, LpProblem, LpResult, Rational,
};
use expsum_core::hodge::{
    counts_from_hodge, hodge_numbers, weight, weight_by_facets, weight_counts, HodgeData, Weight,
};
use expsum_core::oracle::{
    constrained_sum, constrained_sum_fast, exp_sum_bruteforce, l_from_power_sums, s_star_fast,
    Cyclotomic, LPolynomial, PaperInstance,
};
use expsum_core::polytope::{build_polytope, LaurentPolySpec, Polytope};
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use proptest::prelude::*;
use proptest::test_runner::{TestCaseError, TestRunner};

fn check<S: Strategy>(
    cases: u32,
    strategy: S,
    test: impl Fn(S::Value) -> Result<(), TestCaseError>,
) -> Result<(), String> {
    let mut runner = TestRunner::new(ProptestConfig {
        cases,
        failure_persistence: None,
        ..ProptestConfig::default()
    });
    runner.run(&strategy, test).map_err(|e| e.to_string())
}

fn square(max_n: usize, bound: i64) -> impl Strategy<Value = Vec<Vec<i64>>> {
    (1..=max_n).prop_flat_map(move |n| prop::collection::vec(prop::collection::vec(-bound..=bound, n), n))
}

fn cofactor_det(m: &[Vec<i64>]) -> BigInt {
    if m.is_empty() {
        return BigInt::one();
    }
    let mut total = BigInt::zero();
    for (j, &a) in m[0].iter().enumerate() {
        if a == 0 {
            continue;
        }
        let minor: Vec<Vec<i64>> = m[1..]
            .iter()
            .map(|r| r.iter().enumerate().filter(|&(c, _)| c != j).map(|(_, &v)| v).collect())
            .collect();
        let term = BigInt::from(a) * cofactor_det(&minor);
        if j % 2 == 0 {
            total += term;
        } else {
            total -= term;
        }
    }
    total
}

/// Minimum of `c·x` over all basic feasible solutions, by enumerating bases.
fn lp_by_bases(a: &[Vec<Rational>], b: &[Rational], c: &[Rational]) -> Option<Rational> {
    let (m, n) = (a.len(), c.len());
    let mut best: Option<Rational> = None;
    for mask in 0u32..(1 << n) {
        if mask.count_ones() as usize != m {
            continue;
        }
        let cols: Vec<usize> = (0..n).filter(|j| mask >> j & 1 == 1).collect();
        // Gauss-Jordan on the m×m system
        let mut t: Vec<Vec<Rational>> = (0..m)
            .map(|i| cols.iter().map(|&j| a[i][j].clone()).chain([b[i].clone()]).collect())
            .collect();
        let mut singular = false;
        for col in 0..m {
            let Some(piv) = (col..m).find(|&r| !t[r][col].is_zero()) else {
                singular = true;
                break;
            };
            t.swap(col, piv);
            let inv = t[col][col].recip();
            for v in t[col].iter_mut() {
                *v *= &inv;
            }
            for r in 0..m {
                if r != col && !t[r][col].is_zero() {
                    let f = t[r][col].clone();
                    for k in 0..=m {
                        let d = &f * &t[col][k];
                        t[r][k] -= d;
                    }
                }
            }
        }
        if singular || t.iter().any(|row| row[m].is_negative()) {
            continue;
        }
        let value: Rational = cols.iter().zip(&t).map(|(&j, row)| &c[j] * &row[m]).sum();
        if best.as_ref().is_none_or(|v| value < *v) {
            best = Some(value);
        }
    }
    best
}

fn polytope_from(exps: Vec<Vec<i64>>) -> Option<Polytope> {
    let n = exps.first()?.len();
    let mut exps = exps;
    exps.sort();
    exps.dedup();
    exps.retain(|e| e.iter().any(|&x| x != 0));
    let spec = LaurentPolySpec::symbolic(n, &exps).ok()?;
    build_polytope(&spec).ok()
}

fn point_set() -> impl Strategy<Value = Vec<Vec<i64>>> {
    (2usize..=3).prop_flat_map(|n| prop::collection::vec(prop::collection::vec(-2i64..=2, n), n + 1..=n + 3))
}

fn unimodular(n: usize, ops: &[(usize, usize, i64)]) -> Vec<Vec<i64>> {
    let mut u: Vec<Vec<i64>> = (0..n).map(|i| (0..n).map(|j| (i == j) as i64).collect()).collect();
    for &(i, j, c) in ops {
        let (i, j) = (i % n, j % n);
        if i == j {
            u.swap(i, (i + 1) % n);
        } else {
            for k in 0..n {
                u[i][k] += c * u[j][k];
            }
        }
    }
    u
}

fn apply(u: &[Vec<i64>], v: &[i64]) -> Vec<i64> {
    u.iter().map(|row| row.iter().zip(v).map(|(a, b)| a * b).sum()).collect()
}

fn cyclotomic(p: u64) -> impl Strategy<Value = Cyclotomic> {
    prop::collection::vec(-3i64..=3, p as usize).prop_map(move |bins| Cyclotomic::from_bins(p, &bins))
}

pub type Property = (&'static str, fn(u32) -> Result<(), String>);

pub const ALL: [Property; 10] = [
    ("determinant_matches_cofactor_expansion", determinant_matches_cofactor_expansion),
    ("smith_form_is_a_unimodular_diagonalisation", smith_form_is_a_unimodular_diagonalisation),
    ("lp_optimum_has_a_valid_witness", lp_optimum_has_a_valid_witness),
    ("weight_is_homogeneous_and_matches_facets", weight_is_homogeneous_and_matches_facets),
    ("hodge_transform_inverts", hodge_transform_inverts),
    ("volume_and_counts_are_unimodular_invariants", volume_and_counts_are_unimodular_invariants),
    ("hodge_numbers_sum_to_the_degree", hodge_numbers_sum_to_the_degree),
    ("power_sums_roundtrip", power_sums_roundtrip),
    ("power_sums_of_random_cyclotomic_roots", power_sums_of_random_cyclotomic_roots),
    ("kloosterman_path_matches_brute_force", kloosterman_path_matches_brute_force),
];

pub fn determinant_matches_cofactor_expansion(cases: u32) -> Result<(), String> {
    check(cases, square(5, 9), |rows| {
        let m = IntMatrix::from_rows(&rows);
        prop_assert_eq!(det_exact(&m).unwrap(), cofactor_det(&rows));
        Ok(())
    })
}

pub fn smith_form_is_a_unimodular_diagonalisation(cases: u32) -> Result<(), String> {
    check(cases, ((1usize..=4, 1usize..=4), prop::collection::vec(-6i64..=6, 16)), |((r, c), seed)| {
        let rows: Vec<Vec<i64>> = (0..r).map(|i| seed[i * 4..i * 4 + c].to_vec()).collect();
        let m = IntMatrix::from_rows(&rows);
        let snf = smith_normal_form(&m);
        let d = snf.left.mul(&m).unwrap().mul(&snf.right).unwrap();
        prop_assert!(d.is_diagonal());
        prop_assert_eq!(det_exact(&snf.left).unwrap().abs(), BigInt::one());
        prop_assert_eq!(det_exact(&snf.right).unwrap().abs(), BigInt::one());
        let diag: Vec<BigInt> = (0..r.min(c)).map(|i| d.row(i)[i].clone()).collect();
        prop_assert_eq!(&diag, &snf.diag);
        for w in diag.windows(2) {
            prop_assert!(!w[0].is_negative());
            prop_assert!(w[1].is_zero() || (!w[0].is_zero() && (&w[1] % &w[0]).is_zero()));
        }
        prop_assert_eq!(snf.rank(), rank(&m));
        if r == c {
            let det = det_exact(&m).unwrap().abs();
            if snf.rank() == r {
                prop_assert_eq!(snf.product(), det);
            } else {
                prop_assert!(det.is_zero());
            }
        }
        Ok(())
    })
}

pub fn lp_optimum_has_a_valid_witness(cases: u32) -> Result<(), String> {
    check(cases, (prop::collection::vec(prop::collection::vec(-4i64..=4, 5), 2), prop::collection::vec(0i64..=3, 5), prop::collection::vec(-3i64..=5, 5)), |(a, x0, c)| {
        let a: Vec<Vec<Rational>> = a.iter().map(|r| r.iter().map(|&v| integer(v)).collect()).collect();
        let x0: Vec<Rational> = x0.iter().map(|&v| integer(v)).collect();
        let b: Vec<Rational> = a.iter().map(|r| r.iter().zip(&x0).map(|(p, q)| p * q).sum()).collect();
        let c: Vec<Rational> = c.iter().map(|&v| integer(v)).collect();
        let prob = LpProblem::new(a.clone(), b.clone(), c.clone()).unwrap();
        match lp_solve(&prob) {
            LpResult::Optimal { value, witness } => {
                prop_assert!(prob.is_feasible(&witness));
                prop_assert_eq!(&prob.objective(&witness), &value);
                prop_assert!(value <= prob.objective(&x0));
                // a bounded LP attains its optimum at a basic solution
                if let Some(v) = lp_by_bases(&a, &b, &c) {
                    prop_assert_eq!(value, v);
                }
            }
            LpResult::Unbounded => prop_assert!(c.iter().any(|v| v.is_negative())),
            LpResult::Infeasible => prop_assert!(false, "x0 is feasible"),
        }
        Ok(())
    })
}

pub fn weight_is_homogeneous_and_matches_facets(cases: u32) -> Result<(), String> {
    check(cases, (point_set(), prop::collection::vec(-3i64..=3, 3), 1i64..=4), |(pts, u, t)| {
        let Some(p) = polytope_from(pts) else { return Ok(()) };
        let u = &u[..p.n()];
        let w = weight(&p, u);
        prop_assert_eq!(&w, &weight_by_facets(&p, u));
        let scaled: Vec<i64> = u.iter().map(|x| x * t).collect();
        let ws = weight(&p, &scaled);
        match (&w, &ws) {
            (Weight::Finite(a), Weight::Finite(b)) => prop_assert_eq!(a * integer(t), b.clone()),
            (Weight::Infinite, Weight::Infinite) => {}
            _ => prop_assert!(false, "{:?} vs {:?}", w, ws),
        }
        Ok(())
    })
}

pub fn hodge_transform_inverts(cases: u32) -> Result<(), String> {
    check(cases, (1usize..=5, 1u64..=3, prop::collection::vec(0u64..=20, 16)), |(n, d, seed)| {
        let top = n as u64 * d;
        let h: Vec<u64> = seed.iter().cycle().take(top as usize + 1).copied().collect();
        let w = counts_from_hodge(n, d, &h, top);
        prop_assert_eq!(hodge_numbers(n, d, &w).unwrap(), h);
        Ok(())
    })
}

pub fn volume_and_counts_are_unimodular_invariants(cases: u32) -> Result<(), String> {
    check(cases, (point_set(), prop::collection::vec((0usize..3, 0usize..3, -2i64..=2), 1..5)), |(pts, ops)| {
        let Some(p) = polytope_from(pts.clone()) else { return Ok(()) };
        let u = unimodular(p.n(), &ops);
        let moved: Vec<Vec<i64>> = pts.iter().map(|v| apply(&u, v)).collect();
        let q = polytope_from(moved).expect("image of a polytope");
        prop_assert_eq!(p.normalized_volume(), q.normalized_volume());
        prop_assert_eq!(p.denominator(), q.denominator());
        prop_assert_eq!(weight_counts(&p, 3).unwrap(), weight_counts(&q, 3).unwrap());
        Ok(())
    })
}

pub fn hodge_numbers_sum_to_the_degree(cases: u32) -> Result<(), String> {
    check(cases, point_set(), |pts| {
        let Some(p) = polytope_from(pts) else { return Ok(()) };
        if p.denominator() > BigInt::from(2) {
            return Ok(());
        }
        // compute() itself rejects a mismatch between the sum and n! Vol
        let hd = HodgeData::compute(&p, 0).unwrap();
        prop_assert_eq!(BigInt::from(hd.h.iter().sum::<u64>()), hd.degree);
        Ok(())
    })
}

pub fn power_sums_roundtrip(cases: u32) -> Result<(), String> {
    check(cases, (prop::sample::select(vec![2u64, 3, 5]), prop::collection::vec(any::<u8>(), 1..=5)), |(p, coeffs)| {
        let mut cs = vec![Cyclotomic::one(p)];
        for (i, &s) in coeffs.iter().enumerate() {
            let bins: Vec<i64> = (0..p).map(|j| ((s as u64 >> (j % 8)) as i64 + i as i64 * j as i64) % 7 - 3).collect();
            cs.push(Cyclotomic::from_bins(p, &bins));
        }
        let l = LPolynomial::new(p, cs).unwrap();
        let d = l.degree();
        prop_assume!(d > 0);
        let back = l_from_power_sums(&l.power_sums(d), d).unwrap();
        prop_assert_eq!(back, l);
        Ok(())
    })
}

pub fn power_sums_of_random_cyclotomic_roots(cases: u32) -> Result<(), String> {
    check(cases, prop::sample::select(vec![3u64, 5]).prop_flat_map(|p| (cyclotomic(p), cyclotomic(p))), |(x, y)| {
        // (1 - xT)(1 - yT): the sums are -(x^k + y^k)
        let p = x.p();
        let l = LPolynomial::new(p, vec![Cyclotomic::one(p), -(&x + &y), &x * &y]).unwrap();
        let sums = l.power_sums(4);
        let (mut xk, mut yk) = (Cyclotomic::one(p), Cyclotomic::one(p));
        for s in &sums {
            xk = &xk * &x;
            yk = &yk * &y;
            prop_assert_eq!(s, &-(&xk + &yk));
        }
        Ok(())
    })
}

pub fn kloosterman_path_matches_brute_force(cases: u32) -> Result<(), String> {
    check(cases, (prop::sample::select(vec![2u64, 3, 5]), prop::array::uniform6(1i64..=4)), |(p, a)| {
        let a = a.map(|x| (x - 1) % (p as i64 - 1).max(1) + 1);
        let inst = PaperInstance::new(p, a).unwrap();
        let kmax = if p == 2 { 2 } else { 1 };
        for k in 1..=kmax {
            prop_assert_eq!(s_star_fast(&inst, k).unwrap(), exp_sum_bruteforce(&inst.g_spec(), p, k).unwrap());
            prop_assert_eq!(constrained_sum_fast(&inst, k).unwrap(), constrained_sum(&inst, k).unwrap());
        }
        Ok(())
    })
}
