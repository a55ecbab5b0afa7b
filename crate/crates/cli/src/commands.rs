//! The polyhedral subcommands and the helpers shared with the oracle commands.

use std::fmt::Write as _;

use expsum_core::conjecture::{conjectured_weight_count, counterexample_report, origin_face_volumes, WeightLedger};
use expsum_core::exact::{integer, require_prime};
use expsum_core::hodge::HodgeData;
use expsum_core::ordinariness::{global_ordinariness, trivial_unit_root_descriptor, SlopePrediction, Verdict};
use expsum_core::oracle::{PaperInstance, G_EXPONENTS};
use expsum_core::polytope::{build_polytope, LaurentPolySpec, Polytope};
use expsum_core::Error;
use serde_json::{json, Value};

use crate::error::{CliError, Result, EXIT_OK};
use crate::fixture::PaperFixture;
use crate::record::{bigint, list_text, polygon, polygon_text, rational, rational_text, rationals};

/// A finished command: the machine record, its human rendering and the exit code.
#[derive(Debug, Clone)]
pub struct Report {
    pub record: Value,
    pub text: String,
    pub exit: i32,
}

impl Report {
    fn ok(record: Value, text: String) -> Self {
        Report { record, text, exit: EXIT_OK }
    }

    /// An `Unsupported` outcome: exit 0 with an explicit status.
    pub fn unsupported(command: &str, reason: &str) -> Self {
        Report::ok(
            json!({ "command": command, "status": "unsupported", "reason": reason }),
            format!("{command}: unsupported: {reason}\n"),
        )
    }
}

/// Term indices of the seven exponents of g, when `f` has exactly those exponents.
pub fn paper_term_order(f: &LaurentPolySpec) -> Option<[usize; 7]> {
    if f.n() != 5 || f.terms().len() != 7 {
        return None;
    }
    let mut order = [0; 7];
    for (slot, e) in order.iter_mut().zip(G_EXPONENTS.iter()) {
        *slot = f.terms().iter().position(|t| t.exp == e)?;
    }
    Some(order)
}

/// The instance `(a_1..a_6)` when `f` is g with concrete coefficients and `-x_5`.
pub fn paper_instance(f: &LaurentPolySpec, p: u64) -> Result<Option<PaperInstance>> {
    let Some(order) = paper_term_order(f) else {
        return Ok(None);
    };
    let c = f.concrete_coefficients(p)?;
    let at = |j: usize| c[order[j]] as i64;
    if at(4) != p as i64 - 1 {
        return Err(CliError::Input(format!(
            "the x5 coefficient must be -1 mod {p} for the Kloosterman path, got {}",
            at(4)
        )));
    }
    Ok(Some(PaperInstance::new(p, [at(0), at(1), at(2), at(3), at(5), at(6)])?))
}

/// Applies `--coeffs`: one value per term in input order, or `a1..a6` on g
/// (the `x5` coefficient stays `-1`).
pub fn apply_coeffs(f: &LaurentPolySpec, coeffs: &[i64]) -> Result<LaurentPolySpec> {
    if coeffs.len() == f.terms().len() {
        return Ok(f.with_coefficients(coeffs)?);
    }
    match paper_term_order(f) {
        Some(order) if coeffs.len() == 6 => {
            let a = [coeffs[0], coeffs[1], coeffs[2], coeffs[3], -1, coeffs[4], coeffs[5]];
            let mut full = vec![0; 7];
            for (j, &t) in order.iter().enumerate() {
                full[t] = a[j];
            }
            Ok(f.with_coefficients(&full)?)
        }
        _ => Err(CliError::Input(format!(
            "--coeffs has {} values; expected one per term ({}) or a1..a6 for g",
            coeffs.len(),
            f.terms().len()
        ))),
    }
}

pub fn resolve_prime(flag: Option<u64>, doc: Option<u64>, command: &str) -> Result<u64> {
    let p = flag
        .or(doc)
        .ok_or_else(|| CliError::Input(format!("{command} needs a prime: pass --prime or set \"p\" in the input")))?;
    Ok(require_prime(p)?)
}

fn vertex_labels(v: &[usize]) -> String {
    format!("{{{}}}", list_text(v))
}

pub fn polytope(f: &LaurentPolySpec) -> Result<Report> {
    let poly = build_polytope(f)?;
    let lattice = poly.face_lattice();
    let facets: Vec<Value> = poly
        .facets_off_origin()
        .iter()
        .map(|fc| json!({ "equation": rationals(&fc.coeffs), "vertices": fc.vertices.to_vec() }))
        .collect();
    let cone: Vec<Value> = poly
        .facets_through_origin()
        .iter()
        .map(|c| json!({ "normal": c.coeffs.iter().map(bigint).collect::<Vec<_>>(), "vertices": c.vertices.to_vec() }))
        .collect();
    let faces: Vec<Value> = lattice
        .faces()
        .iter()
        .map(|fc| json!({ "dim": fc.dim, "vertices": fc.vertices.to_vec(), "contains_origin": fc.contains_origin }))
        .collect();
    let counts = poly.faces_containing_origin_counts();
    let record = json!({
        "command": "polytope",
        "status": "ok",
        "n": poly.n(),
        "vertices": poly.vertices(),
        "vertex_terms": poly.vertex_terms(),
        "origin_is_vertex": poly.origin_is_vertex(),
        "facets": facets,
        "cone_facets": cone,
        "faces": faces,
        "origin_face_counts": counts,
        "denominator": bigint(&poly.denominator()),
        "normalized_volume": bigint(&poly.normalized_volume()),
        "degree": bigint(&poly.normalized_volume()),
    });

    let mut t = String::new();
    writeln!(t, "dimension {}, {} vertices (0 is the origin when it is a vertex)", poly.n(), poly.vertices().len()).unwrap();
    for (i, v) in poly.vertices().iter().enumerate() {
        writeln!(t, "  V{i} = ({})", list_text(v)).unwrap();
    }
    writeln!(t, "{} facets off the origin, h(u) = 1 on:", poly.facets_off_origin().len()).unwrap();
    for fc in poly.facets_off_origin() {
        let eq = list_text(fc.coeffs.iter().map(rational_text));
        writeln!(t, "  ({eq})  vertices {}", vertex_labels(&fc.vertices.to_vec())).unwrap();
    }
    writeln!(t, "{} facets through the origin", poly.facets_through_origin().len()).unwrap();
    writeln!(t, "faces through the origin by dimension: {}", list_text(&counts)).unwrap();
    writeln!(t, "origin is a vertex: {}", poly.origin_is_vertex()).unwrap();
    writeln!(t, "D = {}", poly.denominator()).unwrap();
    writeln!(t, "normalized volume n!Vol = {} (degree of L*)", poly.normalized_volume()).unwrap();
    Ok(Report::ok(record, t))
}

pub fn hodge(f: &LaurentPolySpec, kmax: Option<u32>) -> Result<Report> {
    let poly = build_polytope(f)?;
    let probe = HodgeData::compute(&poly, 0)?;
    let chain_kmax = kmax.map_or(probe.n as u64 * probe.d, u64::from);
    let hd = HodgeData::compute(&poly, chain_kmax)?;
    let slopes = hd.slopes();
    let record = json!({
        "command": "hodge",
        "status": "ok",
        "n": hd.n,
        "denominator": hd.d,
        "weight_counts": hd.w,
        "hodge_numbers": hd.h,
        "hodge_polygon": polygon(&hd.hodge_polygon.vertices),
        "break_indices": hd.hodge_polygon.break_indices,
        "break_points": polygon(&hd.hodge_polygon.break_points),
        "chain_polygon": polygon(&hd.chain_vertices),
        "chain_kmax": chain_kmax,
        "slopes": rationals(&slopes),
        "degree": bigint(&hd.degree),
    });
    let mut t = String::new();
    writeln!(t, "D = {}", hd.d).unwrap();
    writeln!(t, "W(0..{}) = {}", hd.w.len() - 1, list_text(&hd.w)).unwrap();
    writeln!(t, "H(0..{}) = {}", hd.h.len() - 1, list_text(&hd.h)).unwrap();
    writeln!(t, "sum H = degree = {}", hd.degree).unwrap();
    writeln!(t, "HP vertices: {}", polygon_text(&hd.hodge_polygon.vertices)).unwrap();
    writeln!(t, "HP slopes: {}", list_text(slopes.iter().map(rational_text))).unwrap();
    writeln!(t, "P(Δ) through k = {chain_kmax}: {}", polygon_text(&hd.chain_vertices)).unwrap();
    Ok(Report::ok(record, t))
}

pub fn ordinary(f: &LaurentPolySpec, p: u64) -> Result<Report> {
    let g = match global_ordinariness(f, p) {
        Err(Error::Unsupported(reason)) => return Ok(Report::unsupported("ordinary", &reason)),
        other => other?,
    };
    let facets: Vec<Value> = g
        .facets
        .iter()
        .map(|fv| {
            json!({
                "facet": fv.report.facet,
                "terms": fv.restriction.term_indices,
                "det_abs": bigint(&fv.report.det_abs),
                "invariant_factors": fv.report.invariant_factors.iter().map(bigint).collect::<Vec<_>>(),
                "verdict": fv.verdict.verdict.name(),
                "reason": fv.verdict.reason,
            })
        })
        .collect();
    let ordinary = g.verdict.verdict == Verdict::Ordinary;
    let poly = build_polytope(f)?;
    let prediction = if ordinary {
        Some(SlopePrediction::from_hodge(&HodgeData::compute(&poly, 0)?))
    } else {
        None
    };
    let slope_entries = |s: &SlopePrediction| -> Value {
        s.entries.iter().map(|(r, m)| json!([rational(r), m])).collect()
    };
    // on g, the L-function of the family drops the unit root and shifts down by one
    let derived = match (&prediction, paper_term_order(f)) {
        (Some(s), Some(_)) => Some(s.without_unit_root_shifted(integer(-1))?),
        _ => None,
    };
    let trivial = match trivial_unit_root_descriptor(f, p) {
        Ok(Some(tf)) => json!({ "present": true, "t": tf.t }),
        Ok(None) => json!({ "present": false }),
        // a symbolic constant term leaves t unknown
        Err(Error::InvalidSpec(_)) => json!({ "present": true, "t": null }),
        Err(e) => return Err(e.into()),
    };
    let record = json!({
        "command": "ordinary",
        "status": "ok",
        "prime": p,
        "verdict": g.verdict.verdict.name(),
        "reason": g.verdict.reason,
        "facets": facets,
        "predicted_slopes": prediction.as_ref().map(slope_entries),
        "derived_slopes": derived.as_ref().map(slope_entries),
        "trivial_factor": trivial,
    });
    let mut t = String::new();
    writeln!(t, "p = {p}: {} ({})", g.verdict.verdict.name(), g.verdict.reason).unwrap();
    for fv in &g.facets {
        writeln!(
            t,
            "  facet {}: terms {}, |det| = {}, d_n = {}, {}",
            fv.report.facet,
            vertex_labels(&fv.restriction.term_indices),
            fv.report.det_abs,
            fv.report.largest_factor,
            fv.verdict.verdict.name()
        )
        .unwrap();
    }
    let show = |s: &SlopePrediction| list_text(s.entries.iter().map(|(r, m)| format!("{}^{m}", rational_text(r))));
    if let Some(s) = &prediction {
        writeln!(t, "predicted slopes of L*: {}", show(s)).unwrap();
    }
    if let Some(s) = &derived {
        writeln!(t, "predicted slopes of L(a,T): {}", show(s)).unwrap();
    }
    Ok(Report::ok(record, t))
}

/// Reference ledger attached to g.
pub fn reference_ledger(f: &LaurentPolySpec, fixture: &PaperFixture) -> Option<WeightLedger> {
    paper_term_order(f).map(|_| WeightLedger {
        counts: fixture.weight_ledger.clone(),
        provenance: "reference weight ledger in paper-expected.record".into(),
    })
}

pub fn conjecture(f: &LaurentPolySpec, k: Option<usize>, fixture: &PaperFixture) -> Result<Report> {
    let poly: Polytope = build_polytope(f)?;
    let rows = match reference_ledger(f, fixture) {
        Some(ledger) => counterexample_report(&poly, &ledger)?,
        None => (0..=poly.n()).map(|k| conjectured_weight_count(&poly, k)).collect::<std::result::Result<_, _>>()?,
    };
    let rows: Vec<_> = match k {
        Some(k) if k > poly.n() => {
            return Err(CliError::Input(format!("--k {k} exceeds n = {}", poly.n())));
        }
        Some(k) => rows.into_iter().filter(|r| r.k == k).collect(),
        None => rows,
    };
    let lattice = poly.face_lattice();
    let volumes: Vec<Value> = origin_face_volumes(&poly)?
        .iter()
        .map(|e| json!({ "vertices": lattice.face(e.face).vertices.to_vec(), "dim": e.dim, "norm_vol": bigint(&e.norm_vol) }))
        .collect();
    let label = |agree: Option<bool>| match agree {
        None => "no reference",
        Some(true) => "MATCH",
        Some(false) => "MISMATCH",
    };
    let json_rows: Vec<Value> = rows
        .iter()
        .map(|r| {
            json!({
                "k": r.k,
                "conjectured": bigint(&r.conjectured),
                "reference": r.reference,
                "provenance": r.provenance,
                "agree": r.agree,
                "outcome": label(r.agree),
            })
        })
        .collect();
    let record = json!({
        "command": "conjecture",
        "status": "ok",
        "rows": json_rows,
        "face_volumes": volumes,
    });
    let mut t = String::new();
    writeln!(t, "{:>3}  {:>12}  {:>9}  outcome", "k", "conjectured", "reference").unwrap();
    for r in &rows {
        let reference = r.reference.map_or("-".to_string(), |v| v.to_string());
        writeln!(t, "{:>3}  {:>12}  {:>9}  {}", r.k, r.conjectured, reference, label(r.agree)).unwrap();
    }
    Ok(Report::ok(record, t))
}
