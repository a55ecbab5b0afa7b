//! Exact oracle runs: g at p = 3 with every a_i = 1, and two classical controls.

use expsum_core::conjecture::conjectured_weight_count;
use expsum_core::exact::{integer, Rational};
use expsum_core::hodge::HodgeData;
use expsum_core::oracle::{
    complex_weights, derive_l_from_lstar, exp_sum_bruteforce, instance_sums, l_from_power_sums,
    negate_sums, newton_polygon_of, verify_bound, weight_histogram, Cyclotomic, InstanceSums,
    LPolynomial, PaperInstance,
};
use expsum_core::polytope::{build_polytope, LaurentPolySpec};
use std::sync::OnceLock;

fn p3_sums() -> &'static InstanceSums {
    static SUMS: OnceLock<InstanceSums> = OnceLock::new();
    SUMS.get_or_init(|| instance_sums(&PaperInstance::ones(3).unwrap(), 9).unwrap())
}

fn ints(v: &[i64]) -> Vec<Rational> {
    v.iter().map(|&x| integer(x)).collect()
}

fn moduli_near(l: &LPolynomial, target: f64) -> usize {
    let all = complex_weights(l).unwrap();
    let counts: Vec<usize> = all
        .iter()
        .map(|e| e.moduli.iter().filter(|&&m| (m - target).abs() / target < 1e-6).count())
        .collect();
    assert!(counts.windows(2).all(|w| w[0] == w[1]), "embeddings disagree: {counts:?}");
    counts[0]
}

#[test]
fn fast_sums_match_brute_force() {
    let inst = PaperInstance::ones(3).unwrap();
    let sums = p3_sums();
    for k in 1..=3 {
        assert_eq!(exp_sum_bruteforce(&inst.g_spec(), 3, k).unwrap(), sums.s_star[k as usize - 1], "k = {k}");
    }
    // S_1(ā) = 4 at p = 3
    assert_eq!(sums.s_constrained[0], Cyclotomic::from_integer(3, 4));
}

#[test]
fn lstar_has_trivial_factors_and_hodge_slopes() {
    let lstar = l_from_power_sums(&p3_sums().s_star, 9).unwrap();
    assert_eq!(lstar.degree(), 9);
    let mut rest = lstar.clone();
    for a in [1, 3, 9] {
        rest = rest.divide_linear(&integer(a)).unwrap();
    }
    assert_eq!(rest.degree(), 6);
    assert!(!rest.divisible_by_linear(&integer(1)));

    let np = newton_polygon_of(&lstar).unwrap();
    assert_eq!(np.slopes, ints(&[0, 1, 1, 2, 2, 2, 3, 3, 4]));
    let g = build_polytope(&PaperInstance::ones(3).unwrap().g_spec()).unwrap();
    let hd = HodgeData::compute(&g, 3).unwrap();
    assert_eq!(np.slopes, hd.slopes());

    assert_eq!(moduli_near(&lstar, 3f64.powf(2.5)), 6);
    assert_eq!(weight_histogram(&lstar, 3).unwrap(), [1, 0, 1, 0, 1, 6]);
    assert_eq!(weight_histogram(&rest, 3).unwrap(), [0, 0, 0, 0, 0, 6]);
}

#[test]
fn derived_l_two_routes() {
    let sums = p3_sums();
    let lstar = l_from_power_sums(&sums.s_star, 9).unwrap();
    let by_substitution = derive_l_from_lstar(&lstar, 3).unwrap();
    let by_power_sums = l_from_power_sums(&sums.s_constrained[..8], 8).unwrap();
    assert_eq!(by_substitution, by_power_sums);
    assert_eq!(by_power_sums.degree(), 8);
    // the ninth sum is not used above, so it over-determines the answer
    assert_eq!(by_power_sums.power_sums(9)[8], sums.s_constrained[8]);

    let l = by_power_sums;
    let rest = l.divide_linear(&integer(1)).unwrap().divide_linear(&integer(3)).unwrap();
    assert_eq!(rest.degree(), 6);
    assert_eq!(newton_polygon_of(&l).unwrap().slopes, ints(&[0, 0, 1, 1, 1, 2, 2, 3]));
    assert_eq!(moduli_near(&l, 3f64.powf(1.5)), 6);
    assert_eq!(weight_histogram(&l, 3).unwrap(), [1, 0, 1, 6]);
}

#[test]
fn bound_and_conjugation() {
    let sums = p3_sums();
    let checks = verify_bound(&sums.s_constrained, 3);
    assert_eq!(checks.len(), 9);
    assert!(checks.iter().all(|c| c.holds), "{checks:?}");
    for s in sums.s_constrained.iter().chain(&sums.s_star) {
        assert_eq!(&s.conjugate(), s);
    }
    let lstar = l_from_power_sums(&sums.s_star, 9).unwrap();
    assert!(lstar.is_self_conjugate());
}

#[test]
fn reciprocal_control() {
    // x + 1/x: a Kloosterman sum of rank two
    let f = LaurentPolySpec::concrete(1, &[(1, [1]), (1, [-1])]).unwrap();
    let poly = build_polytope(&f).unwrap();
    let hd = HodgeData::compute(&poly, 2).unwrap();
    assert_eq!(hd.degree, 2.into());
    assert_eq!(hd.h, [1, 1]);
    for p in [3, 5, 7] {
        let sums: Vec<Cyclotomic> = (1..=2).map(|k| exp_sum_bruteforce(&f, p, k).unwrap()).collect();
        let l = l_from_power_sums(&sums, 2).unwrap();
        assert_eq!(l.degree(), 2);
        assert_eq!(newton_polygon_of(&l).unwrap().slopes, ints(&[0, 1]));
        assert_eq!(moduli_near(&l, (p as f64).sqrt()), 2, "p = {p}");
        assert_eq!(l.power_sums(4)[2], exp_sum_bruteforce(&f, p, 3).unwrap());
    }
}

#[test]
fn kloosterman_triangle_control() {
    let f = LaurentPolySpec::concrete(2, &[(1, [1, 0]), (1, [0, 1]), (1, [-1, -1])]).unwrap();
    let poly = build_polytope(&f).unwrap();
    let hd = HodgeData::compute(&poly, 3).unwrap();
    assert_eq!(hd.degree, 3.into());
    assert_eq!(hd.h, [1, 1, 1]);
    let p = 5;
    // n is even, so L* itself is the reciprocal of the polynomial
    let sums: Vec<Cyclotomic> = (1..=3).map(|k| exp_sum_bruteforce(&f, p, k).unwrap()).collect();
    let l = l_from_power_sums(&negate_sums(&sums), 3).unwrap();
    assert_eq!(l.degree(), 3);
    assert_eq!(moduli_near(&l, 5.0), 3);
    assert_eq!(weight_histogram(&l, 5).unwrap(), [0, 0, 3]);
    let predicted: Vec<i64> = (0..=2)
        .map(|k| i64::try_from(conjectured_weight_count(&poly, k).unwrap().conjectured).unwrap())
        .collect();
    assert_eq!(predicted, [0, 0, 3]);
}

#[test]
fn character_twist_matches_scaled_polynomial() {
    // sum psi(m f) is the image of sum psi(f) under zeta -> zeta^m
    let p = 7;
    let f = LaurentPolySpec::concrete(2, &[(1, [1, 0]), (1, [0, 1]), (1, [-1, -1])]).unwrap();
    let base: Vec<Cyclotomic> = (1..=3).map(|k| exp_sum_bruteforce(&f, p, k).unwrap()).collect();
    let l = l_from_power_sums(&negate_sums(&base), 3).unwrap();
    let slopes = newton_polygon_of(&l).unwrap().slopes;
    for m in 2..p as i64 {
        let scaled = LaurentPolySpec::concrete(2, &[(m, [1, 0]), (m, [0, 1]), (m, [-1, -1])]).unwrap();
        let sums: Vec<Cyclotomic> = (1..=3).map(|k| exp_sum_bruteforce(&scaled, p, k).unwrap()).collect();
        for (s, b) in sums.iter().zip(&base) {
            assert_eq!(*s, b.twist(m as u64));
        }
        let lm = l_from_power_sums(&negate_sums(&sums), 3).unwrap();
        assert_eq!(lm, l.twist(m as u64));
        assert_eq!(newton_polygon_of(&lm).unwrap().slopes, slopes);
        assert_eq!(weight_histogram(&lm, p).unwrap(), weight_histogram(&l, p).unwrap());
    }
}
