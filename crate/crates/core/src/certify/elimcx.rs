use num_bigint::BigInt;
use num_rational::BigRational;
use serde_json::json;

use super::search::min_nonscalar_length;
use super::CertificateReport;
use crate::eliminate::eliminate_points;
use crate::error::{Error, Result};
use crate::families::{horner_circuit, t_var, Family2Instance};
use crate::field::fmt_rational_short;
use crate::polyring::{expand, Poly, DEFAULT_TERM_BUDGET};
use crate::slp::{Circuit, CircuitBuilder};

pub const DEFAULT_SEARCH_BUDGET: u64 = 1_000_000;

const SEARCH_MAX_LEN: usize = 3;
const SEARCH_MAX_VARS: usize = 3;
const SEARCH_MAX_TERMS: usize = 4;
const SEARCH_SCOPE: &str = "length <= 3, constants in {-1, 0, 1}";

fn x_circuit(build: impl FnOnce(&mut CircuitBuilder, usize) -> usize) -> Result<Circuit> {
    let mut b = CircuitBuilder::new();
    let x = b.input("X");
    let out = build(&mut b, x);
    b.build_with_outputs(&[out])
}

/// `X`, `X^2`, `X^3 + X` and the instance's own `F`.
pub fn default_variants(inst: &Family2Instance) -> Result<Vec<(String, Circuit)>> {
    Ok(vec![
        ("X".into(), x_circuit(|_, x| x)?),
        ("X^2".into(), x_circuit(|b, x| b.mul(x, x))?),
        (
            "X^3 + X".into(),
            x_circuit(|b, x| {
                let sq = b.mul(x, x);
                let one = b.int(1);
                let s = b.add(sq, one);
                b.mul(s, x)
            })?,
        ),
        ("F".into(), inst.f.clone()),
    ])
}

fn run_search(p: &Poly, inputs: &[String], budget: u64, seed: u64) -> Result<serde_json::Value> {
    if p.vars().len() > SEARCH_MAX_VARS || p.num_terms() > SEARCH_MAX_TERMS {
        return Ok(json!({"status": "not eligible", "scope": SEARCH_SCOPE}));
    }
    match min_nonscalar_length(p, inputs, SEARCH_MAX_LEN, budget, seed) {
        Ok(r) => Ok(match r.length {
            Some(k) => json!({"status": "found", "L": k, "explored": r.explored, "scope": SEARCH_SCOPE}),
            None => json!({"status": "above cap", "L": "> 3", "explored": r.explored, "scope": SEARCH_SCOPE}),
        }),
        Err(Error::SearchBudgetExceeded { explored }) => {
            Ok(json!({"status": "skipped: budget exceeded", "explored": explored, "scope": SEARCH_SCOPE}))
        }
        Err(e) => Err(e),
    }
}

/// For each variant `F`, eliminates over the roots of `G`, builds a Horner
/// circuit for `P_F` and reports `U(P_F) / max(L(F), 1)`. Small
/// polynomials are also searched exhaustively.
pub fn elimination_complexity_estimate(
    inst: &Family2Instance,
    variants: &[(String, Circuit)],
    budget: u64,
    seed: u64,
) -> Result<CertificateReport> {
    if inst.delta > 4 {
        return Err(Error::OutOfRange { what: "delta", value: inst.delta.into(), min: 1, max: 4 });
    }
    let allowed: Vec<String> = std::iter::once("X".to_string()).chain((1..=inst.delta).map(t_var)).collect();
    let mut report = CertificateReport::new("elimcx");
    report.input("delta", inst.delta).input("K", inst.k);
    let y_inputs: Vec<String> = std::iter::once("Y".to_string()).chain((1..=inst.delta).map(t_var)).collect();
    let mut best: Option<(BigRational, String)> = None;
    let mut rows = Vec::new();
    for (name, f) in variants {
        if let Some(v) = f.inputs().iter().find(|v| !allowed.contains(v)) {
            return Err(Error::UnknownVariable(v.clone()));
        }
        let lf = f.cost().nonscalar_len;
        let pf = eliminate_points(&inst.roots(), f, DEFAULT_TERM_BUDGET)?;
        let horner = horner_circuit(&pf, &y_inputs, f.param_vars(), "C_")?;
        let verified = expand(&horner, DEFAULT_TERM_BUDGET)? == pf;
        let u = horner.cost().nonscalar_len;
        let ratio = BigRational::new(BigInt::from(u), BigInt::from(lf.max(1)));
        let f_poly = expand(f, DEFAULT_TERM_BUDGET)?;
        let f_search = run_search(&f_poly, f.inputs(), budget, seed)?;
        let p_search = run_search(&pf, &y_inputs, budget, seed)?;
        report.check(&format!("horner_{name}"), verified, format!("Horner circuit for P_F expands to P_F, U = {u}"));
        rows.push(json!({
            "F": name,
            "L_F": lf,
            "P_F": pf.to_string(),
            "U_P_F": u,
            "ratio": fmt_rational_short(&ratio),
            "search_F": f_search,
            "search_P_F": p_search,
        }));
        if best.as_ref().is_none_or(|(r, _)| ratio > *r) {
            best = Some((ratio, name.clone()));
        }
    }
    report.object("variants", rows);
    if let Some((r, name)) = best {
        report.bound("max_ratio", fmt_rational_short(&r));
        report.bound("max_ratio_variant", name);
    }
    report.note("ratios use constructed upper bounds U(P_F), so the maximum is an estimate, not a certified value");
    report.note(format!("exhaustive search is incomplete: {SEARCH_SCOPE}"));
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::build_family2;

    #[test]
    fn identity_variant_and_search() {
        let inst = build_family2(2, 2).unwrap();
        let variants = default_variants(&inst).unwrap();
        let r = elimination_complexity_estimate(&inst, &variants, DEFAULT_SEARCH_BUDGET, 0).unwrap();
        assert!(r.passed(), "{}", r.render_text());
        let rows = r.objects["variants"].as_array().unwrap();
        assert_eq!(rows[0]["L_F"], 0);
        assert_eq!(rows[0]["search_P_F"]["L"], 1);
        assert_eq!(rows[1]["search_F"]["L"], 1);
        assert_eq!(rows[3]["L_F"], 2);
    }

    #[test]
    fn delta_guard() {
        let inst = build_family2(5, 1).unwrap();
        assert!(elimination_complexity_estimate(&inst, &[], 10, 0).is_err());
    }
}
