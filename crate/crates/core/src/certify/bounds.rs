use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use super::CertificateReport;
use crate::error::{Error, Result};
use crate::families::r_oracle;
use crate::field::fmt_rational_short;
use crate::polyring::{expand, DEFAULT_TERM_BUDGET};
use crate::slp::Circuit;

/// The lower bound `2^(n/2) - 3` on the nonscalar length of an invariant
/// circuit for the family-1 general solution.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Theorem1Bound {
    pub n: u32,
    pub expression: String,
    /// Integer value, present when `n` is even.
    pub exact: Option<String>,
    /// Value truncated to three decimals (`floor(1000 * 2^(n/2)) / 1000 - 3`).
    pub approx: String,
    pub vacuous: bool,
    /// Least `L >= 0` with `(L + 3)^2 >= 2^n`.
    pub min_nonscalar_length: String,
}

fn fmt_milli(v: &BigInt) -> String {
    let sign = if v.is_negative() { "-" } else { "" };
    let a = v.abs();
    let thousand = BigInt::from(1000);
    format!("{sign}{}.{:03}", &a / &thousand, (&a % &thousand).to_string().parse::<u32>().unwrap())
}

pub fn theorem1_bound(n: u32) -> Theorem1Bound {
    let two_n = BigInt::one() << n as usize;
    let three = BigInt::from(3);
    let milli = (&two_n * BigInt::from(1_000_000)).sqrt() - BigInt::from(3000);
    let (expression, exact) = if n % 2 == 0 {
        (format!("2^{} - 3", n / 2), Some(((BigInt::one() << (n / 2) as usize) - &three).to_string()))
    } else {
        (format!("2^({n}/2) - 3"), None)
    };
    let root = two_n.sqrt();
    let ceil_root = if &root * &root == two_n { root } else { root + 1 };
    let min_l = if ceil_root > three { ceil_root - three } else { BigInt::zero() };
    Theorem1Bound {
        n,
        expression,
        exact,
        approx: fmt_milli(&milli),
        vacuous: n <= 3,
        min_nonscalar_length: min_l.to_string(),
    }
}

/// Compares the measured nonscalar length of `Γ*` with the degree bound
/// `(K-1)δ`. With `gamma` given, also checks `L(Γ*) <= 3 L(Γ)` and
/// `L(Γ) >= (K-1)δ/3`.
pub fn degree_bound_report(
    delta: u32,
    k: u32,
    gamma_star: &Circuit,
    gamma: Option<&Circuit>,
) -> Result<CertificateReport> {
    let r = r_oracle(delta, k)?;
    if expand(gamma_star, DEFAULT_TERM_BUDGET)? != r {
        return Err(Error::NotR);
    }
    let analytic = u64::from(k - 1) * u64::from(delta);
    let measured = gamma_star.cost().nonscalar_len as u64;
    let implied = BigRational::new(BigInt::from(analytic), BigInt::from(3));
    let mut report = CertificateReport::new("degree");
    report.input("delta", delta).input("K", k);
    report.object("L_gamma_star", measured);
    report.object("cost_gamma_star", gamma_star.cost());
    report.bound("analytic", analytic);
    report.bound("implied_for_P", fmt_rational_short(&implied));
    report.check(
        "cost_model_consistent",
        measured >= analytic,
        format!("L(gamma*) = {measured} against (K-1)delta = {analytic}"),
    );
    if let Some(g) = gamma {
        let lg = g.cost().nonscalar_len as u64;
        report.object("L_gamma", lg);
        report.check("three_l", measured <= 3 * lg, format!("{measured} <= 3 * {lg}"));
        report.check("implied_bound", BigRational::from_integer(lg.into()) >= implied, format!("{lg} >= {implied}"));
    }
    report.note("a measured length below (K-1)delta would contradict the degree bound and point to a cost model error");
    Ok(report)
}

/// Inputs of the size formulas of the two elimination algorithms.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AlgorithmSizeParams {
    pub k: u64,
    pub l: u64,
    pub n: u64,
    pub d: u64,
    pub delta: u64,
    pub big_delta: u64,
    pub delta_star: u64,
    pub d_star: u64,
    /// Degrees of `G_1..G_n`, when known.
    pub equation_degrees: Vec<u64>,
}

/// `max(1, ceil(log2 x))`.
fn log_factor(x: u64) -> u64 {
    u64::from(64 - (x - 1).leading_zeros()).max(1)
}

/// Evaluates `K δ + L n d Δ` and `K D_* log δ_* + δ_*`, every `O(1)`
/// exponent taken as 1.
pub fn algorithm_size_report(p: &AlgorithmSizeParams) -> Result<CertificateReport> {
    for (what, v) in [
        ("K", p.k),
        ("L", p.l),
        ("n", p.n),
        ("d", p.d),
        ("delta", p.delta),
        ("Delta", p.big_delta),
        ("delta_star", p.delta_star),
        ("D_star", p.d_star),
    ] {
        if v == 0 {
            return Err(Error::OutOfRange { what, value: 0, min: 1, max: u64::MAX });
        }
    }
    let big = |x: u64| BigInt::from(x);
    let k_delta = big(p.k) * big(p.delta);
    let network = big(p.l) * big(p.n) * big(p.d) * big(p.big_delta);
    let log = log_factor(p.delta_star);
    let slp_lead = big(p.k) * big(p.d_star) * big(log);
    let mut report = CertificateReport::new("algorithm-size");
    report.input("params", p);
    report.bound("k_delta", k_delta.to_string());
    report.bound("network_size", (&k_delta + &network).to_string());
    report.bound("network_terms", format!("{k_delta} + {network}"));
    report.bound("log_delta_star", log);
    report.bound("slp_length", (&slp_lead + big(p.delta_star)).to_string());
    report.bound("slp_terms", format!("{slp_lead} + {}", p.delta_star));
    if !p.equation_degrees.is_empty() {
        let prod: BigInt = p.equation_degrees.iter().map(|&d| big(d)).product();
        report.object("degree_product", prod.to_string());
        report.check("bezout", big(p.big_delta) <= prod, format!("Delta = {} <= {prod}", p.big_delta));
    }
    report.note("illustrative: every O(1) exponent is instantiated as 1 and log is max(1, ceil(log2))");
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn theorem1_values() {
        let b1 = theorem1_bound(1);
        assert_eq!(b1.approx, "-1.586");
        assert!(b1.vacuous);
        assert_eq!(b1.min_nonscalar_length, "0");
        let b2 = theorem1_bound(2);
        assert_eq!(b2.exact.as_deref(), Some("-1"));
        let b8 = theorem1_bound(8);
        assert_eq!(b8.exact.as_deref(), Some("13"));
        assert_eq!(b8.approx, "13.000");
        assert!(!b8.vacuous);
        assert_eq!(b8.min_nonscalar_length, "13");
        assert_eq!(theorem1_bound(5).min_nonscalar_length, "3");
        assert!(!theorem1_bound(4).vacuous);
    }

    #[test]
    fn size_formulas() {
        let mut p = AlgorithmSizeParams {
            k: 2,
            l: 1,
            n: 1,
            d: 1,
            delta: 4,
            big_delta: 1,
            delta_star: 1,
            d_star: 1,
            equation_degrees: vec![],
        };
        let r = algorithm_size_report(&p).unwrap();
        assert_eq!(r.bounds["k_delta"], "8");
        p = AlgorithmSizeParams { k: 1, delta: 1, ..p };
        let r = algorithm_size_report(&p).unwrap();
        assert_eq!(r.bounds["network_size"], "2");
        assert_eq!(r.bounds["slp_terms"], "1 + 1");
        assert_eq!(r.bounds["network_terms"], "1 + 1");
        assert!(algorithm_size_report(&AlgorithmSizeParams { k: 0, ..p }).is_err());
    }
}
