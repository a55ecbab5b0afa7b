//! The exact oracle as a command: sums, L-polynomials, slopes, weights and bounds.

use std::fmt::Write as _;

use expsum_core::exact::Rational;
use expsum_core::hodge::HodgeData;
use expsum_core::ordinariness::trivial_unit_root_descriptor;
use expsum_core::oracle::{
    complex_weights, constrained_sum, derive_l_from_lstar, exp_sum_bruteforce, instance_sums,
    l_from_power_sums, negate_sums, newton_polygon_of, verify_bound, weight_histogram, BoundCheck,
    Cyclotomic, EmbeddingRoots, LPolynomial, PaperInstance,
};
use expsum_core::polytope::{build_polytope, LaurentPolySpec};
use expsum_core::Error;
use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde_json::{json, Value};

use crate::commands::{paper_instance, Report};
use crate::error::{CliError, Result, EXIT_OK};
use crate::record::{cyclotomic, list_text, rational_text, rationals};

/// An L-polynomial with its exact slopes and numeric root data.
#[derive(Debug, Clone)]
pub struct Analysis {
    pub poly: LPolynomial,
    pub slopes: Vec<Rational>,
    pub roots: std::result::Result<Vec<EmbeddingRoots>, String>,
    pub weights: std::result::Result<Vec<usize>, String>,
    pub self_conjugate: bool,
}

impl Analysis {
    pub fn new(poly: LPolynomial) -> Result<Self> {
        let q = poly.p();
        let slopes = newton_polygon_of(&poly)?.slopes;
        let roots = complex_weights(&poly).map_err(|e| e.to_string());
        let weights = weight_histogram(&poly, q).map_err(|e| e.to_string());
        let self_conjugate = poly.is_self_conjugate();
        Ok(Analysis { poly, slopes, roots, weights, self_conjugate })
    }

    /// Number of roots with modulus `target` within relative `tol`, if every embedding agrees.
    pub fn roots_at_modulus(&self, target: f64, tol: f64) -> Option<usize> {
        let roots = self.roots.as_ref().ok()?;
        let counts: Vec<usize> = roots
            .iter()
            .map(|e| e.moduli.iter().filter(|&&m| ((m - target) / target).abs() <= tol).count())
            .collect();
        counts.windows(2).all(|w| w[0] == w[1]).then(|| counts.first().copied().unwrap_or(0))
    }

    pub fn record(&self) -> Value {
        let roots = match &self.roots {
            Ok(all) => Value::Array(
                all.iter()
                    .map(|e| json!({ "embedding": e.m, "moduli": e.moduli }))
                    .collect(),
            ),
            Err(msg) => json!({ "error": msg }),
        };
        let weights = match &self.weights {
            Ok(h) => json!(h),
            Err(msg) => json!({ "error": msg }),
        };
        json!({
            "degree": self.poly.degree(),
            "coefficients": self.poly.coeffs().iter().map(cyclotomic).collect::<Vec<_>>(),
            "slopes": rationals(&self.slopes),
            "root_moduli": roots,
            "weight_histogram": weights,
            "self_conjugate": self.self_conjugate,
        })
    }

    fn text(&self, name: &str, t: &mut String) {
        writeln!(t, "{name} has degree {}", self.poly.degree()).unwrap();
        for (k, c) in self.poly.coeffs().iter().enumerate() {
            writeln!(t, "  c_{k} = {c}").unwrap();
        }
        writeln!(t, "  slopes: {}", list_text(self.slopes.iter().map(rational_text))).unwrap();
        match &self.weights {
            Ok(h) => writeln!(t, "  roots per weight 0..{}: {}", h.len().saturating_sub(1), list_text(h)).unwrap(),
            Err(msg) => writeln!(t, "  weights unavailable: {msg}").unwrap(),
        }
    }
}

/// Divides out `1 - q^i T` for each listed `i` that divides exactly.
pub fn strip_trivial(l: &LPolynomial, exponents: &[u32]) -> (Vec<u32>, LPolynomial) {
    let q = BigInt::from(l.p());
    let mut rest = l.clone();
    let mut found = Vec::new();
    for &i in exponents {
        let root = Rational::from_integer(q.pow(i));
        if let Ok(r) = rest.divide_linear(&root) {
            rest = r;
            found.push(i);
        }
    }
    (found, rest)
}

/// Everything the oracle produced for one request.
#[derive(Debug, Clone)]
pub struct OracleRun {
    pub p: u64,
    pub kmax: u32,
    pub n: usize,
    /// `n! Vol(Δ)`.
    pub degree: usize,
    pub route: &'static str,
    pub instance: Option<PaperInstance>,
    /// `S*_k(f)` for `k = 1..=kmax`.
    pub s_star: Vec<Cyclotomic>,
    /// `S_k(ā)` when `f` is g.
    pub s_family: Option<Vec<Cyclotomic>>,
    /// The polynomial `L*(f,T)^{(-1)^{n-1}}`, once `kmax >= degree`.
    pub lstar: Option<Analysis>,
    pub lstar_trivial: Vec<u32>,
    pub lstar_rest: Option<Analysis>,
    pub derived: Option<Analysis>,
    pub derived_by_substitution: Option<LPolynomial>,
    pub derived_by_power_sums: Option<LPolynomial>,
    pub derived_trivial: Vec<u32>,
    pub derived_rest: Option<Analysis>,
    pub bound: Vec<BoundCheck>,
}

fn q_power(p: u64, k: usize) -> Rational {
    Rational::from_integer(BigInt::from(p).pow(k as u32))
}

/// Runs the oracle. `fast` selects the Kloosterman path, available only for g.
pub fn run_oracle(f: &LaurentPolySpec, p: u64, kmax: Option<u32>, fast: bool) -> Result<OracleRun> {
    f.concrete_coefficients(p)?;
    let poly = build_polytope(f)?;
    let degree = poly
        .normalized_volume()
        .to_usize()
        .ok_or_else(|| CliError::Input("L-function degree does not fit in memory".into()))?;
    let kmax = kmax.unwrap_or(degree as u32);
    if kmax == 0 {
        return Err(CliError::Input("--kmax must be at least 1".into()));
    }
    let instance = paper_instance(f, p)?;
    let (route, s_star, s_family) = match (&instance, fast) {
        (Some(inst), true) => {
            let sums = instance_sums(inst, kmax)?;
            ("kloosterman", sums.s_star, Some(sums.s_constrained))
        }
        (None, true) => {
            return Err(CliError::Input("--fast needs the polynomial g; drop the flag for brute force".into()));
        }
        (inst, false) => {
            let s_star = (1..=kmax).map(|k| exp_sum_bruteforce(f, p, k)).collect::<std::result::Result<Vec<_>, _>>()?;
            let family = match inst {
                Some(inst) => Some((1..=kmax).map(|k| constrained_sum(inst, k)).collect::<std::result::Result<Vec<_>, _>>()?),
                None => None,
            };
            ("brute-force", s_star, family)
        }
    };
    if let Some(family) = &s_family {
        // q^k S_k(ā) = 1 + S*_k(g)
        for (k, (s, t)) in family.iter().zip(&s_star).enumerate() {
            let lhs = s.scale(&q_power(p, k + 1));
            if lhs != &Cyclotomic::one(p) + t {
                return Err(Error::Inconsistent(format!("q^k S_k(a) != 1 + S*_k(g) at k = {}", k + 1)).into());
            }
        }
    }

    let n = f.n();
    let signed = if n % 2 == 1 { s_star.clone() } else { negate_sums(&s_star) };
    let mut run = OracleRun {
        p,
        kmax,
        n,
        degree,
        route,
        instance,
        s_star,
        s_family,
        lstar: None,
        lstar_trivial: Vec::new(),
        lstar_rest: None,
        derived: None,
        derived_by_substitution: None,
        derived_by_power_sums: None,
        derived_trivial: Vec::new(),
        derived_rest: None,
        bound: Vec::new(),
    };
    if kmax as usize >= degree {
        let l = l_from_power_sums(&signed[..degree], degree)?;
        // sums beyond the degree over-determine the polynomial
        let predicted = l.power_sums(kmax as usize);
        if let Some(k) = (degree..kmax as usize).find(|&k| predicted[k] != signed[k]) {
            return Err(Error::Inconsistent(format!(
                "S*_{} disagrees with the degree-{degree} L-polynomial",
                k + 1
            ))
            .into());
        }
        let wanted: Vec<u32> = if run.instance.is_some() {
            vec![0, 1, 2]
        } else {
            // 1 - ζ^t T with t = 0 is the only trivial factor we can divide exactly
            match trivial_unit_root_descriptor(f, p)? {
                Some(tf) if tf.t == 0 => vec![0],
                _ => Vec::new(),
            }
        };
        let (found, rest) = strip_trivial(&l, &wanted);
        run.lstar_trivial = found;
        run.lstar_rest = Some(Analysis::new(rest)?);
        run.lstar = Some(Analysis::new(l)?);
    }
    if let Some(family) = &run.s_family {
        let d = degree - 1;
        if kmax as usize >= d {
            run.derived_by_power_sums = Some(l_from_power_sums(&family[..d], d)?);
        }
        if let Some(lstar) = &run.lstar {
            run.derived_by_substitution = Some(derive_l_from_lstar(&lstar.poly, p)?);
        }
        if let (Some(a), Some(b)) = (&run.derived_by_substitution, &run.derived_by_power_sums) {
            if a != b {
                return Err(Error::Inconsistent("the two routes to L(a,T) disagree".into()).into());
            }
        }
        if let Some(l) = run.derived_by_power_sums.clone().or_else(|| run.derived_by_substitution.clone()) {
            let (found, rest) = strip_trivial(&l, &[0, 1]);
            run.derived_trivial = found;
            run.derived_rest = Some(Analysis::new(rest)?);
            run.derived = Some(Analysis::new(l)?);
        }
        run.bound = verify_bound(family, p);
    }
    Ok(run)
}

fn trivial_text(p: u64, exps: &[u32]) -> String {
    if exps.is_empty() {
        return "none".into();
    }
    exps.iter()
        .map(|&i| match i {
            0 => "(1 - T)".to_string(),
            1 => format!("(1 - {p}T)"),
            _ => format!("(1 - {}T)", BigInt::from(p).pow(i)),
        })
        .collect::<Vec<_>>()
        .join("")
}

impl OracleRun {
    pub fn record(&self) -> Value {
        let analysis = |a: &Option<Analysis>| a.as_ref().map(Analysis::record);
        let bound: Vec<Value> = self
            .bound
            .iter()
            .map(|b| json!({ "k": b.k, "bound": b.bound, "max_abs": b.max_abs, "holds": b.holds }))
            .collect();
        let family = self.s_family.as_ref().map(|f| {
            json!({
                "a": self.instance.as_ref().map(|i| i.a),
                "sums": f.iter().map(cyclotomic).collect::<Vec<_>>(),
                "l": analysis(&self.derived),
                "trivial_factors": self.derived_trivial,
                "nontrivial": analysis(&self.derived_rest),
                "routes_compared": self.derived_by_substitution.is_some() && self.derived_by_power_sums.is_some(),
                "bound": bound,
            })
        });
        json!({
            "command": "lfunction",
            "status": if self.lstar.is_some() { "ok" } else { "insufficient-sums" },
            "prime": self.p,
            "kmax": self.kmax,
            "n": self.n,
            "expected_degree": self.degree,
            "route": self.route,
            "lstar_exponent": if self.n % 2 == 1 { 1 } else { -1 },
            "sums": self.s_star.iter().map(cyclotomic).collect::<Vec<_>>(),
            "lstar": analysis(&self.lstar),
            "lstar_trivial_factors": self.lstar_trivial,
            "lstar_nontrivial": analysis(&self.lstar_rest),
            "family": family,
        })
    }

    pub fn text(&self) -> String {
        let mut t = String::new();
        writeln!(t, "p = {}, k = 1..{}, route: {}", self.p, self.kmax, self.route).unwrap();
        for (k, s) in self.s_star.iter().enumerate() {
            writeln!(t, "  S*_{} = {s}", k + 1).unwrap();
        }
        let power = if self.n % 2 == 1 { "" } else { "^-1" };
        match &self.lstar {
            Some(a) => {
                a.text(&format!("L*(f,T){power}"), &mut t);
                writeln!(t, "  trivial factors: {}", trivial_text(self.p, &self.lstar_trivial)).unwrap();
            }
            None => writeln!(t, "L*(f,T) needs k up to {}; rerun with --kmax {}", self.degree, self.degree).unwrap(),
        }
        if let Some(family) = &self.s_family {
            for (k, s) in family.iter().enumerate() {
                writeln!(t, "  S_{}(a) = {s}", k + 1).unwrap();
            }
            if let Some(a) = &self.derived {
                a.text("L(a,T)", &mut t);
                writeln!(t, "  trivial factors: {}", trivial_text(self.p, &self.derived_trivial)).unwrap();
                if self.derived_by_substitution.is_some() && self.derived_by_power_sums.is_some() {
                    writeln!(t, "  substitution and direct power sums agree").unwrap();
                }
            }
            for b in &self.bound {
                writeln!(
                    t,
                    "  |S_{}(a)| <= {:.1}: max {:.1} {}",
                    b.k,
                    b.bound,
                    b.max_abs,
                    if b.holds { "ok" } else { "VIOLATED" }
                )
                .unwrap();
            }
        }
        t
    }
}

/// The Hodge slopes of `Δ`, to compare with the Newton polygon.
pub fn hodge_slopes(f: &LaurentPolySpec) -> Result<Vec<Rational>> {
    Ok(HodgeData::compute(&build_polytope(f)?, 0)?.slopes())
}

pub fn lfunction(f: &LaurentPolySpec, p: u64, kmax: Option<u32>, fast: bool) -> Result<Report> {
    let run = run_oracle(f, p, kmax, fast)?;
    let mut record = run.record();
    let mut text = run.text();
    if let Some(l) = &run.lstar {
        let hp = hodge_slopes(f)?;
        let ordinary = l.slopes == hp;
        record["newton_equals_hodge"] = json!(ordinary);
        writeln!(text, "NP {} HP", if ordinary { "=" } else { "!=" }).unwrap();
    }
    let broken = run.bound.iter().any(|b| !b.holds);
    Ok(Report {
        record,
        text,
        exit: if broken { crate::error::EXIT_VERIFICATION } else { EXIT_OK },
    })
}
