//! Circuit-to-circuit passes.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::{fmt_rational_short, Rationals, DEFAULT_MODULUS};
use crate::polyring::{expand_all, probabilistic_equal_poly, ParamMode, Poly, DEFAULT_TERM_BUDGET};
use crate::slp::{Circuit, CircuitBuilder, Node};

fn single_output(c: &Circuit) -> Result<usize> {
    match c.outputs() {
        [o] => Ok(*o),
        outs => Err(Error::UnassignedSemantics { outputs: outs.len() }),
    }
}

fn is_one(b: &CircuitBuilder, i: usize) -> bool {
    matches!(b.node(i), Node::Const(q) if q.is_one())
}

fn fresh_param_id(c: &Circuit, base: String) -> String {
    let mut id = base;
    while c.param_table().contains_key(&id) {
        id.push('_');
    }
    id
}

/// Forward-mode partial derivative with respect to an input or parameter
/// variable. The nodes of `c` are kept at their indices; derivative nodes
/// are appended after them.
pub fn differentiate(c: &Circuit, var: &str) -> Result<Circuit> {
    let out = single_output(c)?;
    if !c.variables().iter().any(|v| v == var) {
        return Err(Error::UnknownVariable(var.to_string()));
    }
    let mut b = CircuitBuilder::from_circuit(c);
    let mut d: Vec<Option<usize>> = vec![None; c.len()];
    let live = c.reachable();
    for (i, node) in c.nodes().iter().enumerate() {
        if !live[i] {
            continue;
        }
        d[i] = match node {
            Node::Input(name) if name == var => Some(b.int(1)),
            Node::Input(_) | Node::Const(_) => None,
            Node::Param(id) => {
                let dp = c.param_table()[id].derivative(var);
                if dp.is_zero() {
                    None
                } else {
                    let did = fresh_param_id(c, format!("d{var}_{id}"));
                    Some(b.param(&did, dp))
                }
            }
            Node::Add(x, y) => match (d[*x], d[*y]) {
                (None, None) => None,
                (Some(dx), None) => Some(dx),
                (None, Some(dy)) => Some(dy),
                (Some(dx), Some(dy)) => Some(b.add(dx, dy)),
            },
            Node::Sub(x, y) => match (d[*x], d[*y]) {
                (None, None) => None,
                (Some(dx), None) => Some(dx),
                (None, Some(dy)) => Some(b.neg(dy)),
                (Some(dx), Some(dy)) => Some(b.sub(dx, dy)),
            },
            Node::Mul(x, y) => {
                let left = d[*x].map(|dx| if is_one(&b, dx) { *y } else { b.mul(dx, *y) });
                let right = d[*y].map(|dy| if is_one(&b, dy) { *x } else { b.mul(*x, dy) });
                match (left, right) {
                    (None, None) => None,
                    (Some(l), None) => Some(l),
                    (None, Some(r)) => Some(r),
                    (Some(l), Some(r)) => Some(b.add(l, r)),
                }
            }
        };
    }
    let result = match d[out] {
        Some(k) => k,
        None => b.int(0),
    };
    b.build_with_outputs(&[result])
}

/// Binds input and parameter variables to rationals. Bound inputs become
/// constants; parameter polynomials are partially evaluated. Node indices
/// are unchanged.
pub fn specialize(c: &Circuit, bindings: &BTreeMap<String, BigRational>) -> Result<Circuit> {
    let vars = c.variables();
    if let Some(bad) = bindings.keys().find(|k| !vars.contains(k)) {
        return Err(Error::UnknownVariable(bad.clone()));
    }
    let nodes = c
        .nodes()
        .iter()
        .map(|n| match n {
            Node::Input(name) => match bindings.get(name) {
                Some(q) => Node::Const(q.clone()),
                None => n.clone(),
            },
            _ => n.clone(),
        })
        .collect();
    let inputs = c.inputs().iter().filter(|v| !bindings.contains_key(*v)).cloned().collect();
    let param_vars = c.param_vars().iter().filter(|v| !bindings.contains_key(*v)).cloned().collect();
    let table = c.param_table().iter().map(|(id, p)| (id.clone(), p.partial_eval(bindings).trimmed())).collect();
    Circuit::from_parts(inputs, param_vars, table, nodes, c.outputs().to_vec())
}

/// Appends `0 - o` for every output `o`.
pub fn negate(c: &Circuit) -> Result<Circuit> {
    let mut b = CircuitBuilder::from_circuit(c);
    let outs: Vec<usize> = c.outputs().iter().map(|&o| b.neg(o)).collect();
    b.build_with_outputs(&outs)
}

/// Differentiates a circuit for `Π(Y - S T_l^(2^K))` in `S`, binds `S = 0`
/// and `Y = 1`, and negates, giving a circuit for `Σ T_l^(2^K)`.
pub fn derive_and_specialize_r(gamma: &Circuit, delta: u32, k: u32, seed: u64) -> Result<Circuit> {
    let oracle = crate::families::general_solution_family2(delta, k)?;
    let verdict = probabilistic_equal_poly(gamma, &oracle, 5, DEFAULT_MODULUS, seed)?;
    if !verdict.is_equal() {
        return Err(Error::NotAGeneralSolution(format!("circuit differs from P for delta = {delta}, K = {k}")));
    }
    let ds = differentiate(gamma, "S")?;
    let bindings = BTreeMap::from([("S".to_string(), BigRational::zero()), ("Y".to_string(), BigRational::one())]);
    negate(&specialize(&ds, &bindings)?)
}

/// Equivalence of parameter points: two points are equivalent when every
/// defining circuit specializes to the same polynomials at both.
#[derive(Debug, Clone)]
pub struct EquivalenceSpec {
    param_vars: Vec<String>,
    defining: Vec<Circuit>,
}

impl EquivalenceSpec {
    pub fn new(param_vars: Vec<String>, defining: Vec<Circuit>) -> Result<Self> {
        for c in &defining {
            if let Some(v) = param_vars.iter().find(|v| !c.param_vars().contains(v)) {
                return Err(Error::UnknownVariable(v.clone()));
            }
        }
        Ok(EquivalenceSpec { param_vars, defining })
    }

    pub fn param_vars(&self) -> &[String] {
        &self.param_vars
    }

    pub fn defining(&self) -> &[Circuit] {
        &self.defining
    }

    fn key(&self, point: &BTreeMap<String, BigRational>) -> Result<Vec<Poly>> {
        let mut out = Vec::new();
        for c in &self.defining {
            out.extend(expand_all(&specialize(c, point)?, DEFAULT_TERM_BUDGET, ParamMode::Substitute)?);
        }
        Ok(out)
    }

    pub fn equivalent(&self, a: &BTreeMap<String, BigRational>, b: &BTreeMap<String, BigRational>) -> Result<bool> {
        Ok(self.key(a)? == self.key(b)?)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct InvarianceWitness {
    pub left: BTreeMap<String, String>,
    pub right: BTreeMap<String, String>,
    pub left_value: String,
    pub right_value: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct InvarianceVerdict {
    pub parameter: String,
    pub passed: bool,
    pub pairs: usize,
    pub witness: Option<InvarianceWitness>,
}

fn random_coordinate(rng: &mut ChaCha8Rng) -> BigRational {
    if rng.gen_bool(0.5) {
        BigRational::from_integer(BigInt::from(rng.gen_range(0..=1)))
    } else {
        BigRational::new(BigInt::from(rng.gen_range(-9..=9)), BigInt::from(rng.gen_range(1..=5)))
    }
}

fn show(point: &BTreeMap<String, BigRational>) -> BTreeMap<String, String> {
    point.iter().map(|(k, v)| (k.clone(), fmt_rational_short(v))).collect()
}

/// Sample-based invariance test. Draws `samples` pairs of parameter points,
/// keeps the distinct pairs that `spec` declares equivalent, and compares
/// each parameter polynomial on them. A failure carries a witness pair.
pub fn invariance_check(
    params: &[(String, Poly)],
    spec: &EquivalenceSpec,
    samples: usize,
    seed: u64,
) -> Result<Vec<InvarianceVerdict>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut pairs = Vec::new();
    let mut seen = BTreeSet::new();
    for _ in 0..samples {
        let a: BTreeMap<String, BigRational> =
            spec.param_vars.iter().map(|v| (v.clone(), random_coordinate(&mut rng))).collect();
        let b: BTreeMap<String, BigRational> = a
            .iter()
            .map(|(v, x)| (v.clone(), if rng.gen_bool(0.5) { x.clone() } else { random_coordinate(&mut rng) }))
            .collect();
        if a == b || !seen.insert((a.clone(), b.clone())) {
            continue;
        }
        if spec.equivalent(&a, &b)? {
            pairs.push((a, b));
        }
    }
    if pairs.is_empty() {
        return Err(Error::NoEquivalentPairsFound);
    }
    params
        .iter()
        .map(|(name, poly)| {
            let mut verdict = InvarianceVerdict { parameter: name.clone(), passed: true, pairs: pairs.len(), witness: None };
            for (a, b) in &pairs {
                let va = poly.eval(&Rationals, |v| a.get(v).cloned())?;
                let vb = poly.eval(&Rationals, |v| b.get(v).cloned())?;
                if va != vb {
                    verdict.passed = false;
                    verdict.witness = Some(InvarianceWitness {
                        left: show(a),
                        right: show(b),
                        left_value: fmt_rational_short(&va),
                        right_value: fmt_rational_short(&vb),
                    });
                    break;
                }
            }
            Ok(verdict)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyring::expand;
    use crate::slp::parse_circuit;

    fn p(s: &str) -> Poly {
        s.parse().unwrap()
    }

    fn q(n: i64) -> BigRational {
        BigRational::from_integer(n.into())
    }

    #[test]
    fn square_rule() {
        let c = parse_circuit("input X\nv1 = mul X X\noutput v1\n").unwrap();
        let d = differentiate(&c, "X").unwrap();
        assert_eq!(expand(&d, 100).unwrap(), p("2*X"));
        assert!(d.cost().nonscalar_len <= 3);
        assert_eq!(&d.nodes()[..2], c.nodes());
    }

    #[test]
    fn derivative_without_dependence_is_zero() {
        let c = parse_circuit("input X\ninput Y\nv2 = mul X X\noutput v2\n").unwrap();
        assert!(expand(&differentiate(&c, "Y").unwrap(), 100).unwrap().is_zero());
        assert_eq!(differentiate(&c, "Z").unwrap_err(), Error::UnknownVariable("Z".into()));
    }

    #[test]
    fn parameter_derivative() {
        let c = parse_circuit("paramvar S\nparamvar T0\ninput X\nparam A = S^2*T0 + S\nv2 = mul A X\noutput v2\n").unwrap();
        assert_eq!(expand(&differentiate(&c, "S").unwrap(), 100).unwrap(), p("2*S*T0*X + X"));
    }

    #[test]
    fn specialize_to_constant() {
        let c = parse_circuit("input X\ninput Y\nconst one = 1/1\nv3 = mul X Y\nv4 = add v3 one\noutput v4\n").unwrap();
        let s = specialize(&c, &BTreeMap::from([("X".to_string(), q(0))])).unwrap();
        assert_eq!(expand(&s, 100).unwrap(), p("1"));
        assert_eq!(s.len(), c.len());
        assert_eq!(s.inputs(), ["Y".to_string()]);
        assert!(s.cost().nonscalar_len <= c.cost().nonscalar_len);
    }

    #[test]
    fn specialize_rejects_unknown_names() {
        let c = parse_circuit("input X\noutput X\n").unwrap();
        let err = specialize(&c, &BTreeMap::from([("W".to_string(), q(1))])).unwrap_err();
        assert_eq!(err, Error::UnknownVariable("W".into()));
    }

    #[test]
    fn negation_is_free() {
        let c = parse_circuit("input X\nv1 = mul X X\noutput v1\n").unwrap();
        let n = negate(&c).unwrap();
        assert_eq!(expand(&n, 10).unwrap(), p("-X^2"));
        assert_eq!(n.cost().nonscalar_len, 1);
    }
}
