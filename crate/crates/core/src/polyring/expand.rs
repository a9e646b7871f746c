use std::collections::{BTreeMap, BTreeSet};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::Poly;
use crate::error::{Error, Result};
use crate::field::PrimeField;
use crate::slp::{Circuit, Node};

/// Default cap on the number of terms of any intermediate expansion.
pub const DEFAULT_TERM_BUDGET: usize = 2_000_000;

/// How parameter nodes enter an expansion.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ParamMode {
    /// Replace each parameter by its stored polynomial.
    Substitute,
    /// Keep each parameter as a fresh variable named by its id.
    Opaque,
}

/// Expands a single-output circuit into a polynomial over its input and
/// parameter variables.
pub fn expand(c: &Circuit, term_budget: usize) -> Result<Poly> {
    if c.outputs().len() != 1 {
        return Err(Error::UnassignedSemantics { outputs: c.outputs().len() });
    }
    expand_with(c, 0, term_budget, ParamMode::Substitute)
}

/// Expands the `k`-th output of a circuit.
pub fn expand_output(c: &Circuit, k: usize, term_budget: usize) -> Result<Poly> {
    expand_with(c, k, term_budget, ParamMode::Substitute)
}

pub fn expand_with(c: &Circuit, k: usize, term_budget: usize, mode: ParamMode) -> Result<Poly> {
    let single = c.select_output(k)?;
    Ok(expand_all(&single, term_budget, mode)?.pop().expect("one output"))
}

/// Expands every output in one forward pass. Intermediate polynomials are
/// dropped after their last use.
pub fn expand_all(c: &Circuit, term_budget: usize, mode: ParamMode) -> Result<Vec<Poly>> {
    let live = c.reachable();
    let n = c.len();
    let mut last_use = vec![0usize; n];
    for (i, node) in c.nodes().iter().enumerate() {
        if let Some((a, b)) = node.operands() {
            last_use[a] = i;
            last_use[b] = i;
        }
    }
    let is_output: BTreeSet<usize> = c.outputs().iter().copied().collect();
    let mut vals: Vec<Option<Poly>> = vec![None; n];
    for (i, node) in c.nodes().iter().enumerate() {
        if !live[i] {
            continue;
        }
        let v = match node {
            Node::Input(name) => Poly::var(name),
            Node::Const(q) => Poly::constant(q.clone()),
            Node::Param(id) => match mode {
                ParamMode::Substitute => c.param_table()[id].clone(),
                ParamMode::Opaque => Poly::var(id),
            },
            Node::Add(a, b) => operand(&vals, *a).try_add(operand(&vals, *b))?,
            Node::Sub(a, b) => operand(&vals, *a).try_sub(operand(&vals, *b))?,
            Node::Mul(a, b) => operand(&vals, *a).try_mul(operand(&vals, *b))?,
        };
        if v.num_terms() > term_budget {
            return Err(Error::BudgetExceeded { node: i, terms: v.num_terms() });
        }
        vals[i] = Some(v);
        if let Some((a, b)) = node.operands() {
            for op in [a, b] {
                if last_use[op] == i && !is_output.contains(&op) {
                    vals[op] = None;
                }
            }
        }
    }
    Ok(c.outputs().iter().map(|&o| vals[o].clone().expect("output expanded")).collect())
}

fn operand(vals: &[Option<Poly>], i: usize) -> &Poly {
    vals[i].as_ref().expect("operand expanded")
}

/// Outcome of a randomized identity test.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum IdentityVerdict {
    ProbablyEqual { trials: usize },
    Unequal { trial: usize, witness: BTreeMap<String, u64>, left: Vec<u64>, right: Vec<u64> },
}

impl IdentityVerdict {
    pub fn is_equal(&self) -> bool {
        matches!(self, IdentityVerdict::ProbablyEqual { .. })
    }
}

fn sample_points(
    vars: &BTreeSet<String>,
    trials: usize,
    field: &PrimeField,
    seed: u64,
) -> Vec<BTreeMap<String, u64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..trials)
        .map(|_| vars.iter().map(|v| (v.clone(), rng.gen_range(0..field.modulus()))).collect())
        .collect()
}

/// Schwartz-Zippel test of two circuits at `trials` uniform points of
/// `(Z/p)^vars`, all outputs compared. Deterministic in `seed`.
pub fn probabilistic_equal(a: &Circuit, b: &Circuit, trials: usize, prime: u64, seed: u64) -> Result<IdentityVerdict> {
    let field = PrimeField::new(prime)?;
    let vars: BTreeSet<String> = a.variables().into_iter().chain(b.variables()).collect();
    for (trial, point) in sample_points(&vars, trials, &field, seed).into_iter().enumerate() {
        let left = a.evaluate_at(&field, &point)?;
        let right = b.evaluate_at(&field, &point)?;
        if left != right {
            return Ok(IdentityVerdict::Unequal { trial, witness: point, left, right });
        }
    }
    Ok(IdentityVerdict::ProbablyEqual { trials })
}

/// Same test with a polynomial on the right-hand side; the circuit must have
/// a single output.
pub fn probabilistic_equal_poly(a: &Circuit, poly: &Poly, trials: usize, prime: u64, seed: u64) -> Result<IdentityVerdict> {
    if a.outputs().len() != 1 {
        return Err(Error::UnassignedSemantics { outputs: a.outputs().len() });
    }
    let field = PrimeField::new(prime)?;
    let vars: BTreeSet<String> =
        a.variables().into_iter().chain(poly.trimmed().vars().iter().cloned()).collect();
    for (trial, point) in sample_points(&vars, trials, &field, seed).into_iter().enumerate() {
        let left = a.evaluate_at(&field, &point)?;
        let right = vec![poly.eval(&field, |v| point.get(v).copied())?];
        if left != right {
            return Ok(IdentityVerdict::Unequal { trial, witness: point, left, right });
        }
    }
    Ok(IdentityVerdict::ProbablyEqual { trials })
}
