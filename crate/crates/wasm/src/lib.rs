//! Browser bindings for the interactive demo page.
//!
//! Every export takes plain numbers/strings and returns a JSON string, so
//! the page needs no generated TypeScript and the functions stay testable
//! on the host target. Errors come back as `{"error": "..."}`.

use serde::Serialize;
use wasm_bindgen::prelude::wasm_bindgen;

use cusumlab::aplus::{rhs_constant, AplusInstance};
use cusumlab::certify::{certify_positivity, CertificateStatus};
use cusumlab::combinatorics::binomial;
use cusumlab::lemmas::{check_stochastic_dominance, lemma41_average, qp_distribution};
use cusumlab::muirhead::{CusumSubscript, OddsVector, Scenario};
use cusumlab::scalar::{format_rational, parse_rational, ExactScalar, Scalar};
use cusumlab::simplex::{scan_a, GridSpec};

fn err_json(msg: impl std::fmt::Display) -> String {
    serde_json::json!({ "error": msg.to_string() }).to_string()
}

fn to_json<T: Serialize>(value: &T) -> String {
    serde_json::to_string(value).unwrap_or_else(err_json)
}

fn parse_usize_list(csv: &str) -> Result<Vec<usize>, String> {
    csv.split(',')
        .map(|t| t.trim())
        .filter(|t| !t.is_empty())
        .map(|t| t.parse::<usize>().map_err(|_| format!("bad integer {t:?}")))
        .collect()
}

fn parse_odds(csv: &str, c: usize) -> Result<OddsVector<ExactScalar>, String> {
    let entries: Result<Vec<ExactScalar>, String> = csv
        .split(',')
        .map(|t| t.trim())
        .filter(|t| !t.is_empty())
        .map(|t| parse_rational(t).map_err(|e| e.to_string()))
        .collect();
    let entries = entries?;
    if entries.len() != c {
        return Err(format!("expected {c} odds entries, got {}", entries.len()));
    }
    OddsVector::new(entries).map_err(|e| e.to_string())
}

#[derive(Serialize)]
struct CurveScan {
    omega: Vec<f64>,
    top: Vec<f64>,
    bottom: Vec<f64>,
    middle: Vec<f64>,
    limit: f64,
    limit_exact: String,
    initial_exact: String,
    sign_changes: usize,
    above_limit_everywhere: bool,
    quasi_unimodal: bool,
}

/// Boundary-curve scan: the two bracketing curves and the weighted average
/// over a log-spaced omega grid.
#[wasm_bindgen]
pub fn scan_curves(c: usize, b: usize, k: usize, h2: usize, omega_max: f64, points: usize) -> String {
    if !(2..=5000).contains(&points) {
        return err_json("points must be in 2..=5000");
    }
    if !(omega_max.is_finite()) || omega_max < 1.0 {
        return err_json("omega-max must be a finite value >= 1");
    }
    let grid = GridSpec { omega_max, points };
    match scan_a(c, b, k, h2, &grid) {
        Ok(curve) => to_json(&CurveScan {
            omega: curve.omega_grid,
            top: curve.top,
            bottom: curve.bottom,
            middle: curve.middle,
            limit: f64::from_rational(&curve.limit_value),
            limit_exact: format_rational(&curve.limit_value),
            initial_exact: format_rational(&curve.initial_value),
            sign_changes: curve.sign_changes,
            above_limit_everywhere: curve.above_limit_everywhere,
            quasi_unimodal: curve.quasi_unimodal,
        }),
        Err(e) => err_json(e),
    }
}

#[derive(Serialize)]
struct CusumEvaluation {
    cusum_exact: String,
    cusum: f64,
    positive: bool,
    criterion_lhs: String,
    criterion_rhs: String,
    criterion_agrees: bool,
    components: Vec<ComponentValue>,
}

#[derive(Serialize)]
struct ComponentValue {
    j: Vec<usize>,
    value_exact: String,
    value: f64,
}

/// Exact cusum at the limit configuration, the weighted-average criterion
/// on the same instance, and the individual components inside the box.
#[wasm_bindgen]
pub fn evaluate_cusum(c: usize, b: usize, k: usize, p: usize, q: usize, h_csv: &str, w_csv: &str) -> String {
    let h_entries = match parse_usize_list(h_csv) {
        Ok(v) => v,
        Err(e) => return err_json(e),
    };
    let w = match parse_odds(w_csv, c) {
        Ok(w) => w,
        Err(e) => return err_json(e),
    };
    if c > 12 {
        return err_json("the demo caps c at 12");
    }
    let run = || -> cusumlab::Result<CusumEvaluation> {
        let scn = Scenario::representative(c, b, k, p, q)?;
        let h = CusumSubscript::new(h_entries.clone(), c)?;
        let mut inst = AplusInstance::from_scenario(&scn, w.clone())?;
        let cusum = inst.cusum_at_aplus(&h)?;
        let check = if h.is_contributing() {
            Some(inst.check_weighted_average_criterion(&h)?)
        } else {
            None
        };
        // Components over the box, largest boxes truncated for display.
        let mut components = Vec::new();
        let mut tuple = vec![1usize; p];
        'outer: loop {
            if tuple.iter().collect::<std::collections::HashSet<_>>().len() == p
                && tuple.iter().zip(h.entries()).all(|(j, hh)| j <= hh)
            {
                let sub = CusumSubscript::new(tuple.clone(), c)?;
                let v = inst.component_at_aplus(&sub)?;
                components.push(ComponentValue {
                    j: tuple.clone(),
                    value_exact: format_rational(&v),
                    value: f64::from_rational(&v),
                });
                if components.len() >= 200 {
                    break;
                }
            }
            let mut pos = p;
            loop {
                if pos == 0 {
                    break 'outer;
                }
                pos -= 1;
                if tuple[pos] < h.entries()[pos] {
                    tuple[pos] += 1;
                    for t in tuple.iter_mut().skip(pos + 1) {
                        *t = 1;
                    }
                    break;
                }
            }
        }
        let positive = cusum.is_positive_value();
        let (lhs, rhs, agrees) = match check {
            Some(chk) => {
                let agrees = chk.predicts_positive == positive;
                (format_rational(&chk.lhs), format_rational(&chk.rhs), agrees)
            }
            None => (String::from("-"), format_rational(&rhs_constant(c, b, k, p)), true),
        };
        Ok(CusumEvaluation {
            cusum_exact: format_rational(&cusum),
            cusum: f64::from_rational(&cusum),
            positive,
            criterion_lhs: lhs,
            criterion_rhs: rhs,
            criterion_agrees: agrees,
            components,
        })
    };
    match run() {
        Ok(v) => to_json(&v),
        Err(e) => err_json(e),
    }
}

#[derive(Serialize)]
struct PmfView {
    support: Vec<usize>,
    pmf: Vec<f64>,
    pmf_exact: Vec<String>,
    hypergeometric: Vec<f64>,
    dominance_holds: bool,
    dominance_strict: bool,
    expected_k_subsets: String,
    equal_odds_average: String,
    rhs_constant: String,
}

/// Distribution of the below-threshold count under the sequential model,
/// next to the unconstrained hypergeometric law.
#[wasm_bindgen]
pub fn subscript_distribution(c: usize, b: usize, k: usize, p: usize, h_csv: &str) -> String {
    let h_entries = match parse_usize_list(h_csv) {
        Ok(v) => v,
        Err(e) => return err_json(e),
    };
    if c > 40 {
        return err_json("the demo caps c at 40");
    }
    let run = || -> cusumlab::Result<PmfView> {
        let h = CusumSubscript::new(h_entries.clone(), c)?;
        let d = qp_distribution(&h, b, c, p)?;
        let dom = check_stochastic_dominance(&h, b, c, p)?;
        let support: Vec<usize> = (0..=p.min(b)).collect();
        let pmf: Vec<f64> = support.iter().map(|&t| f64::from_rational(&d.pmf_at(t))).collect();
        let pmf_exact: Vec<String> = support.iter().map(|&t| format_rational(&d.pmf_at(t))).collect();
        let hyper: Vec<f64> = support
            .iter()
            .map(|&t| {
                let v = binomial(b, t as i64) * binomial(c - b, (p - t) as i64) / binomial(c, p as i64);
                f64::from_rational(&v)
            })
            .collect();
        Ok(PmfView {
            support,
            pmf,
            pmf_exact,
            hypergeometric: hyper,
            dominance_holds: dom.holds,
            dominance_strict: dom.strict_somewhere,
            expected_k_subsets: format_rational(&d.expected_k_subsets(k)),
            equal_odds_average: format_rational(&lemma41_average(c, b, k, p, &h)?),
            rhs_constant: format_rational(&rhs_constant(c, b, k, p)),
        })
    };
    match run() {
        Ok(v) => to_json(&v),
        Err(e) => err_json(e),
    }
}

/// Positivity certificate for one small instance (c <= 5 keeps the
/// expansion instant in the browser).
#[wasm_bindgen]
pub fn certify_instance(c: usize, b: usize, k: usize, p: usize, q: usize, h_csv: &str) -> String {
    let h_entries = match parse_usize_list(h_csv) {
        Ok(v) => v,
        Err(e) => return err_json(e),
    };
    if c > 5 {
        return err_json("certificates in the demo are capped at c = 5");
    }
    let run = || -> cusumlab::Result<serde_json::Value> {
        let scn = Scenario::representative(c, b, k, p, q)?;
        let h = CusumSubscript::new(h_entries.clone(), c)?;
        let cert = certify_positivity(&scn, &h)?;
        Ok(serde_json::json!({
            "status": match cert.status {
                CertificateStatus::Certified => "certified",
                CertificateStatus::Inconclusive => "inconclusive",
                CertificateStatus::Cap => "cap",
            },
            "identically_zero": cert.identically_zero,
            "monomials": cert.monomials,
            "negative_coefficients": cert.negative_coefficient_count,
            "constant_term_sign": cert.constant_term_sign,
        }))
    };
    match run() {
        Ok(v) => v.to_string(),
        Err(e) => err_json(e),
    }
}
