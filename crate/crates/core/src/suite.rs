//! The acceptance suite behind `check all`: criteria 1 to 10, each run on
//! fixed, seeded inputs so that two runs render identical reports.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use num_bigint::BigInt;
use num_rational::BigRational;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::certify::{coefficient_identity_check, robustness_audit, theorem1_bound, vandermonde_certificate};
use crate::eliminate::{eliminate_points, eliminate_resultant, solution_degree_report};
use crate::error::{Error, Result};
use crate::families::{
    build_family1, build_family2, family1_root, general_solution_family1, general_solution_family2,
    horner_circuit, horner_circuit_family1, horner_circuit_family2, product_circuit_family2, r_oracle,
    solutions_family1,
};
use crate::field::DEFAULT_MODULUS;
use crate::polyring::{expand, probabilistic_equal, Poly, DEFAULT_TERM_BUDGET};
use crate::slp::{Circuit, CircuitBuilder};
use crate::transforms::{derive_and_specialize_r, differentiate, specialize};

pub const CRITERIA: u32 = 10;
pub const CORPUS_SIZE: usize = 60;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CriterionResult {
    pub id: u32,
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SuiteReport {
    pub max_n: u32,
    pub seed: u64,
    pub modulus: u64,
    pub criteria: Vec<CriterionResult>,
    pub passed: bool,
}

impl SuiteReport {
    pub fn render_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "check all max_n={} seed={} modulus={}", self.max_n, self.seed, self.modulus);
        for c in &self.criteria {
            let _ = writeln!(
                out,
                "criterion {}: {} {} ({})",
                c.id,
                if c.passed { "pass" } else { "fail" },
                c.name,
                c.detail
            );
        }
        let _ = writeln!(out, "verdict {}", if self.passed { "pass" } else { "fail" });
        out
    }
}

/// Inputs shared by every criterion.
#[derive(Debug, Clone, Copy)]
pub struct SuiteConfig {
    pub max_n: u32,
    pub seed: u64,
    pub modulus: u64,
}

impl SuiteConfig {
    pub fn new(max_n: u32, seed: u64, modulus: u64) -> Result<Self> {
        if !(1..=3).contains(&max_n) {
            return Err(Error::OutOfRange { what: "max_n", value: max_n.into(), min: 1, max: 3 });
        }
        crate::field::PrimeField::new(modulus)?;
        Ok(SuiteConfig { max_n, seed, modulus })
    }
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig { max_n: 3, seed: 0, modulus: DEFAULT_MODULUS }
    }
}

pub fn criterion_name(id: u32) -> &'static str {
    match id {
        1 => "family-1 oracle agreement",
        2 => "coefficient identity",
        3 => "evaluation identity",
        4 => "vandermonde certificate",
        5 => "robustness audit",
        6 => "derive and specialize",
        7 => "resultant cross-check",
        8 => "degree bounds",
        9 => "circuit calculus",
        10 => "cost model",
        _ => "unknown",
    }
}

/// Runs one criterion. Errors are reported as a failing result.
pub fn run_criterion(id: u32, cfg: &SuiteConfig) -> CriterionResult {
    let outcome = match id {
        1 => oracle_agreement(cfg),
        2 => coefficient_identity(cfg),
        3 => evaluation_identity(cfg),
        4 => vandermonde(cfg),
        5 => audit(cfg),
        6 => derive_specialize(cfg),
        7 => resultant_cross_check(),
        8 => degree_bounds(cfg),
        9 => circuit_calculus(cfg),
        10 => cost_model(cfg),
        _ => Err(Error::OutOfRange { what: "criterion", value: id.into(), min: 1, max: CRITERIA.into() }),
    };
    let (passed, detail) = outcome.unwrap_or_else(|e| (false, format!("error {}: {e}", e.kind())));
    CriterionResult { id, name: criterion_name(id).to_string(), passed, detail }
}

pub fn check_all(cfg: &SuiteConfig) -> SuiteReport {
    let criteria: Vec<CriterionResult> = (1..=CRITERIA).map(|id| run_criterion(id, cfg)).collect();
    let passed = criteria.iter().all(|c| c.passed);
    SuiteReport { max_n: cfg.max_n, seed: cfg.seed, modulus: cfg.modulus, criteria, passed }
}

type Outcome = Result<(bool, String)>;

fn failures(bad: &[String]) -> String {
    format!("failed: {}", bad.join(", "))
}

fn verdict(bad: Vec<String>, ok: String) -> Outcome {
    Ok(if bad.is_empty() { (true, ok) } else { (false, failures(&bad)) })
}

fn oracle_agreement(cfg: &SuiteConfig) -> Outcome {
    let mut bad = Vec::new();
    for n in 1..=cfg.max_n {
        let inst = build_family1(n)?;
        let points: Vec<_> = solutions_family1(n)?.iter().map(|s| s.poly_assignment()).collect();
        let p = eliminate_points(&points, &inst.f_circuit()?, DEFAULT_TERM_BUDGET)?;
        if p != general_solution_family1(n)? {
            bad.push(format!("n={n}"));
        }
    }
    verdict(bad, format!("P equals the fibre product for n = 1..{}", cfg.max_n))
}

fn coefficient_identity(cfg: &SuiteConfig) -> Outcome {
    let mut bad = Vec::new();
    for n in 1..=cfg.max_n {
        if !coefficient_identity_check(n)?.passed() {
            bad.push(format!("n={n}"));
        }
    }
    verdict(bad, format!("every c_l matches for n = 1..{}", cfg.max_n))
}

fn evaluation_identity(cfg: &SuiteConfig) -> Outcome {
    let top = cfg.max_n + 1;
    let mut bad = Vec::new();
    let mut checked = 0usize;
    for n in 1..=top {
        let f = expand(&build_family1(n)?.f_circuit()?, DEFAULT_TERM_BUDGET)?;
        for s in solutions_family1(n)? {
            let value = f.partial_eval(&s.assignment()).trimmed();
            if value != family1_root(n, s.l)? {
                bad.push(format!("n={n} l={}", s.l));
            }
            checked += 1;
        }
    }
    verdict(bad, format!("{checked} solution points for n = 1..{top}"))
}

fn random_points(rng: &mut ChaCha8Rng, count: usize) -> Vec<BigRational> {
    let mut seen = BTreeSet::new();
    while seen.len() < count {
        let num = rng.gen_range(-50i64..=50);
        let den = rng.gen_range(1i64..=9);
        seen.insert(BigRational::new(num.into(), den.into()));
    }
    let mut pts: Vec<BigRational> = seen.into_iter().collect();
    pts.shuffle(rng);
    pts
}

fn vandermonde(cfg: &SuiteConfig) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut bad = Vec::new();
    for n in 1..=cfg.max_n {
        for trial in 0..100 {
            let pts = random_points(&mut rng, 1 << n);
            if !vandermonde_certificate(n, &pts)?.passed() {
                bad.push(format!("n={n} trial={trial}"));
            }
        }
    }
    let b8 = theorem1_bound(8);
    if b8.exact.as_deref() != Some("13") {
        bad.push("theorem 1 bound at n=8".into());
    }
    let bounds: Vec<String> = (1..=cfg.max_n).map(|n| format!("n={n}: {}", theorem1_bound(n).approx)).collect();
    verdict(bad, format!("100 point sets per n; bound {}; n=8: {}", bounds.join(" "), b8.exact.unwrap_or_default()))
}

fn audit(cfg: &SuiteConfig) -> Outcome {
    let top = cfg.max_n.min(2);
    let mut bad = Vec::new();
    let mut ranks = Vec::new();
    for n in 1..=top {
        let r = robustness_audit(&horner_circuit_family1(n)?, n, None, cfg.seed)?;
        ranks.push(format!("n={n} rank={} N={}", r.objects["rank_D"], r.objects["cost"]["param_count"]));
        if !r.passed() {
            bad.push(format!("n={n}"));
        }
    }
    verdict(bad, ranks.join(", "))
}

fn derive_specialize(cfg: &SuiteConfig) -> Outcome {
    let mut bad = Vec::new();
    let mut count = 0;
    for delta in 1..=6 {
        for k in 1..=4 {
            let r = r_oracle(delta, k)?;
            for (kind, gamma) in [("product", product_circuit_family2(delta, k)?), ("horner", horner_circuit_family2(delta, k)?)] {
                let star = derive_and_specialize_r(&gamma, delta, k, cfg.seed)?;
                let ok = expand(&star, DEFAULT_TERM_BUDGET)? == r
                    && star.cost().nonscalar_len <= 3 * gamma.cost().nonscalar_len;
                if !ok {
                    bad.push(format!("{kind} delta={delta} K={k}"));
                }
                count += 1;
            }
        }
    }
    verdict(bad, format!("{count} circuits, delta <= 6, K <= 4"))
}

fn resultant_cross_check() -> Outcome {
    let mut bad = Vec::new();
    for delta in 1..=4 {
        for k in 1..=3 {
            let inst = build_family2(delta, k)?;
            let g = expand(&inst.g, DEFAULT_TERM_BUDGET)?;
            let f = expand(&inst.f, DEFAULT_TERM_BUDGET)?;
            if eliminate_resultant(&g, &f, "X")? != general_solution_family2(delta, k)? {
                bad.push(format!("delta={delta} K={k}"));
            }
        }
    }
    verdict(bad, "delta <= 4, K <= 3".into())
}

fn degree_bounds(cfg: &SuiteConfig) -> Outcome {
    let mut bad = Vec::new();
    let mut count = 0;
    for n in 1..=cfg.max_n {
        let p = general_solution_family1(n)?;
        let deg_f = expand(&build_family1(n)?.f_circuit()?, DEFAULT_TERM_BUDGET)?.total_degree();
        let size = 1u64 << n;
        if !solution_degree_report(&p, size, deg_f.into(), size, &["S", "T", "U"])?.passed {
            bad.push(format!("family1 n={n}"));
        }
        count += 1;
    }
    for delta in 1..=4u32 {
        for k in 1..=3 {
            let p = general_solution_family2(delta, k)?;
            let params: Vec<String> = p.vars().iter().filter(|v| *v != "Y").cloned().collect();
            let params: Vec<&str> = params.iter().map(String::as_str).collect();
            let deg_f = (1u64 << k) + 1;
            if !solution_degree_report(&p, delta.into(), deg_f, delta.into(), &params)?.passed {
                bad.push(format!("family2 delta={delta} K={k}"));
            }
            count += 1;
        }
    }
    verdict(bad, format!("{count} instances"))
}

const CORPUS_VARS: [&str; 4] = ["X", "Y", "Z", "S"];

/// A random circuit with at most `max_nodes` nodes over up to four
/// variables; `S` is a parameter variable, the others are inputs.
pub fn random_circuit(rng: &mut ChaCha8Rng, max_nodes: usize) -> Result<Circuit> {
    let mut b = CircuitBuilder::new();
    let nvars = rng.gen_range(1..=4);
    let mut nodes = Vec::new();
    for v in &CORPUS_VARS[..nvars] {
        if *v == "S" {
            b.param_var("S");
            let c = rng.gen_range(-2i64..=2);
            let poly = &Poly::var("S") + &Poly::int(c);
            nodes.push(b.param("A", poly));
        } else {
            nodes.push(b.input(v));
        }
    }
    if rng.gen_bool(0.5) {
        let num = rng.gen_range(-3i64..=3);
        let den = rng.gen_range(1i64..=3);
        nodes.push(b.constant(BigRational::new(BigInt::from(num), BigInt::from(den))));
    }
    let target = rng.gen_range(nodes.len() + 1..=max_nodes.max(nodes.len() + 1));
    while b.len() < target {
        let x = *nodes.choose(rng).expect("nonempty");
        let y = *nodes.choose(rng).expect("nonempty");
        let z = match rng.gen_range(0..3) {
            0 => b.add(x, y),
            1 => b.sub(x, y),
            _ => b.mul(x, y),
        };
        nodes.push(z);
    }
    let out = *nodes.last().expect("nonempty");
    b.build_with_outputs(&[out])
}

pub fn random_corpus(seed: u64, size: usize, max_nodes: usize) -> Result<Vec<Circuit>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..size).map(|_| random_circuit(&mut rng, max_nodes)).collect()
}

fn circuit_calculus(cfg: &SuiteConfig) -> Outcome {
    let corpus = random_corpus(cfg.seed, CORPUS_SIZE, 20)?;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ 0x5eed);
    let mut bad = Vec::new();
    let mut prob_checks = 0;
    for (i, c) in corpus.iter().enumerate() {
        let e = expand(c, DEFAULT_TERM_BUDGET)?;
        for v in c.variables() {
            if expand(&differentiate(c, &v)?, DEFAULT_TERM_BUDGET)? != e.derivative(&v).trimmed() {
                bad.push(format!("#{i} d/d{v}"));
            }
        }
        let mut bindings = BTreeMap::new();
        for v in c.variables() {
            if rng.gen_bool(0.5) {
                let q = BigRational::new(rng.gen_range(-4i64..=4).into(), rng.gen_range(1i64..=3).into());
                bindings.insert(v, q);
            }
        }
        if expand(&specialize(c, &bindings)?, DEFAULT_TERM_BUDGET)? != e.partial_eval(&bindings).trimmed() {
            bad.push(format!("#{i} specialize"));
        }
        let inputs = c.inputs().to_vec();
        let horner = horner_circuit(&e, &inputs, c.param_vars(), "H_")?;
        let other = &corpus[(i + 1) % corpus.len()];
        for (rhs, same) in [(&horner, true), (other, expand(other, DEFAULT_TERM_BUDGET)? == e)] {
            let pv = probabilistic_equal(c, rhs, 5, cfg.modulus, cfg.seed + i as u64)?;
            prob_checks += 1;
            if pv.is_equal() != same {
                bad.push(format!("#{i} probabilistic_equal"));
            }
        }
    }
    verdict(bad, format!("{} circuits, {prob_checks} identity tests", corpus.len()))
}

fn cost_model(cfg: &SuiteConfig) -> Outcome {
    let top = cfg.max_n + 3;
    let mut bad = Vec::new();
    let lens: Vec<usize> = (1..=top).map(|n| build_family1(n).map(|i| i.beta.cost().nonscalar_len)).collect::<Result<_>>()?;
    for (n, l) in (1..).zip(&lens) {
        if *l > 6 * n + 2 {
            bad.push(format!("L(beta) = {l} at n = {n}"));
        }
    }
    let steps: BTreeSet<i64> = lens.windows(2).map(|w| w[1] as i64 - w[0] as i64).collect();
    if steps.len() > 1 {
        bad.push(format!("increments {steps:?}"));
    }
    for delta in 1..=8 {
        for k in 1..=8 {
            let inst = build_family2(delta, k)?;
            if inst.g.cost().nonscalar_len > delta as usize || inst.f.cost().nonscalar_len > k as usize + 1 {
                bad.push(format!("family2 delta={delta} K={k}"));
            }
        }
    }
    let lens: Vec<String> = lens.iter().map(|l| l.to_string()).collect();
    verdict(bad, format!("L(beta) for n = 1..{top}: {}; family2 delta, K <= 8", lens.join(" ")))
}
