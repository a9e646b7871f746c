//! Straight-line programs with parameters.
//!
//! A [`Circuit`] is a topologically ordered list of nodes. Leaves are input
//! variables, rational constants, or parameters; a parameter is an opaque
//! scalar whose value is a polynomial in the declared parameter variables,
//! stored in the circuit's parameter table. Internal nodes are `add`, `sub`
//! and `mul`; there is no division.
//!
//! Cost accounting follows the nonscalar model: a multiplication is charged
//! only when both operands depend on some input variable.

mod text;

use std::collections::{BTreeMap, BTreeSet, HashMap};

use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::Field;
use crate::polyring::Poly;

pub use text::{parse_circuit, serialize_circuit};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Node {
    Input(String),
    Const(BigRational),
    Param(String),
    Add(usize, usize),
    Sub(usize, usize),
    Mul(usize, usize),
}

impl Node {
    pub fn operands(&self) -> Option<(usize, usize)> {
        match *self {
            Node::Add(a, b) | Node::Sub(a, b) | Node::Mul(a, b) => Some((a, b)),
            _ => None,
        }
    }

    pub fn is_arithmetic(&self) -> bool {
        self.operands().is_some()
    }
}

/// Nonscalar length, total length and parameter count of a circuit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CostReport {
    pub nonscalar_len: usize,
    pub total_len: usize,
    pub param_count: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Circuit {
    inputs: Vec<String>,
    param_vars: Vec<String>,
    param_table: BTreeMap<String, Poly>,
    nodes: Vec<Node>,
    scalar_flag: Vec<bool>,
    outputs: Vec<usize>,
}

fn scalar_flags(nodes: &[Node]) -> Vec<bool> {
    let mut flags: Vec<bool> = Vec::with_capacity(nodes.len());
    for node in nodes {
        let s = match node {
            Node::Input(_) => false,
            Node::Const(_) | Node::Param(_) => true,
            Node::Add(a, b) | Node::Sub(a, b) | Node::Mul(a, b) => {
                flags.get(*a).copied().unwrap_or(false) && flags.get(*b).copied().unwrap_or(false)
            }
        };
        flags.push(s);
    }
    flags
}

impl Circuit {
    /// Assembles a circuit, deriving the scalar flags, and validates it.
    pub fn from_parts(
        inputs: Vec<String>,
        param_vars: Vec<String>,
        param_table: BTreeMap<String, Poly>,
        nodes: Vec<Node>,
        outputs: Vec<usize>,
    ) -> Result<Self> {
        let scalar_flag = scalar_flags(&nodes);
        let c = Circuit { inputs, param_vars, param_table, nodes, scalar_flag, outputs };
        c.validate()?;
        Ok(c)
    }

    /// Like [`Circuit::from_parts`] but with caller-supplied scalar flags,
    /// which are checked rather than trusted.
    pub fn from_parts_with_flags(
        inputs: Vec<String>,
        param_vars: Vec<String>,
        param_table: BTreeMap<String, Poly>,
        nodes: Vec<Node>,
        scalar_flag: Vec<bool>,
        outputs: Vec<usize>,
    ) -> Result<Self> {
        let c = Circuit { inputs, param_vars, param_table, nodes, scalar_flag, outputs };
        c.validate()?;
        Ok(c)
    }

    pub fn inputs(&self) -> &[String] {
        &self.inputs
    }
    pub fn param_vars(&self) -> &[String] {
        &self.param_vars
    }
    pub fn param_table(&self) -> &BTreeMap<String, Poly> {
        &self.param_table
    }
    pub fn nodes(&self) -> &[Node] {
        &self.nodes
    }
    pub fn scalar_flag(&self) -> &[bool] {
        &self.scalar_flag
    }
    pub fn outputs(&self) -> &[usize] {
        &self.outputs
    }
    pub fn len(&self) -> usize {
        self.nodes.len()
    }
    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Input variables followed by parameter variables.
    pub fn variables(&self) -> Vec<String> {
        self.inputs.iter().chain(&self.param_vars).cloned().collect()
    }

    /// Checks every structural invariant and reports the first violation.
    pub fn validate(&self) -> Result<()> {
        let n = self.nodes.len();
        let mut seen_inputs: Vec<&str> = Vec::new();
        let mut seen_params: BTreeSet<&str> = BTreeSet::new();
        for (i, node) in self.nodes.iter().enumerate() {
            match node {
                Node::Add(a, b) | Node::Sub(a, b) | Node::Mul(a, b) => {
                    for &op in [a, b] {
                        if op >= n {
                            return Err(Error::DanglingIndex { node: i, index: op });
                        }
                        if op >= i {
                            return Err(Error::CyclicReference { node: i, operand: op });
                        }
                    }
                }
                Node::Param(id) => {
                    if !self.param_table.contains_key(id) {
                        return Err(Error::UnknownParameter { node: i, id: id.clone() });
                    }
                    if !seen_params.insert(id) {
                        return Err(Error::DuplicateParameter { node: i, id: id.clone() });
                    }
                }
                Node::Input(name) => {
                    if !self.inputs.contains(name) || seen_inputs.contains(&name.as_str()) {
                        return Err(Error::BadInputNode { node: i, name: name.clone() });
                    }
                    seen_inputs.push(name);
                }
                Node::Const(_) => {}
            }
        }
        if let Some(k) = (0..self.inputs.len().max(seen_inputs.len()))
            .find(|&k| self.inputs.get(k).map(String::as_str) != seen_inputs.get(k).copied())
        {
            let name = self.inputs.get(k).map(String::as_str).or(seen_inputs.get(k).copied());
            return Err(Error::InputListMismatch(name.unwrap_or_default().to_string()));
        }
        for id in self.param_table.keys() {
            if !seen_params.contains(id.as_str()) {
                return Err(Error::OrphanParameter(id.clone()));
            }
        }
        for pv in &self.param_vars {
            if self.inputs.contains(pv) {
                return Err(Error::InputListMismatch(pv.clone()));
            }
        }
        for (id, poly) in &self.param_table {
            for v in poly.trimmed().vars() {
                if !self.param_vars.contains(v) {
                    return Err(Error::UndeclaredParamVar { id: id.clone(), var: v.clone() });
                }
            }
        }
        for (k, &o) in self.outputs.iter().enumerate() {
            if o >= n {
                return Err(Error::DanglingOutput { output: k, index: o });
            }
        }
        let expected = scalar_flags(&self.nodes);
        if self.scalar_flag.len() != n {
            return Err(Error::InconsistentScalarFlag { node: self.scalar_flag.len().min(n) });
        }
        if let Some(i) = (0..n).find(|&i| expected[i] != self.scalar_flag[i]) {
            return Err(Error::InconsistentScalarFlag { node: i });
        }
        Ok(())
    }

    /// Nodes reachable from the outputs.
    pub fn reachable(&self) -> Vec<bool> {
        let mut mark = vec![false; self.nodes.len()];
        for &o in &self.outputs {
            mark[o] = true;
        }
        for i in (0..self.nodes.len()).rev() {
            if mark[i] {
                if let Some((a, b)) = self.nodes[i].operands() {
                    mark[a] = true;
                    mark[b] = true;
                }
            }
        }
        mark
    }

    pub fn cost(&self) -> CostReport {
        let live = self.reachable();
        let mut report = CostReport { nonscalar_len: 0, total_len: 0, param_count: 0 };
        let mut params = BTreeSet::new();
        for (_, node) in self.nodes.iter().enumerate().filter(|(i, _)| live[*i]) {
            match node {
                Node::Mul(a, b) => {
                    report.total_len += 1;
                    if !self.scalar_flag[*a] && !self.scalar_flag[*b] {
                        report.nonscalar_len += 1;
                    }
                }
                Node::Add(..) | Node::Sub(..) => report.total_len += 1,
                Node::Param(id) => {
                    params.insert(id.as_str());
                }
                _ => {}
            }
        }
        report.param_count = params.len();
        report
    }

    /// Evaluates every output in one forward pass over the reachable nodes.
    /// Parameter nodes first evaluate their polynomial at `param_values`.
    pub fn evaluate<F: Field>(
        &self,
        field: &F,
        input_values: &BTreeMap<String, F::Elem>,
        param_values: &BTreeMap<String, F::Elem>,
    ) -> Result<Vec<F::Elem>> {
        let live = self.reachable();
        let mut vals: Vec<Option<F::Elem>> = vec![None; self.nodes.len()];
        for (i, node) in self.nodes.iter().enumerate() {
            if !live[i] {
                continue;
            }
            let get = |k: usize| vals[k].clone().expect("operand evaluated");
            let v = match node {
                Node::Input(name) => input_values
                    .get(name)
                    .cloned()
                    .ok_or_else(|| Error::MissingAssignment(name.clone()))?,
                Node::Const(q) => field.from_rational(q)?,
                Node::Param(id) => self.param_table[id].eval(field, |v| param_values.get(v).cloned())?,
                Node::Add(a, b) => field.add(&get(*a), &get(*b)),
                Node::Sub(a, b) => field.sub(&get(*a), &get(*b)),
                Node::Mul(a, b) => field.mul(&get(*a), &get(*b)),
            };
            vals[i] = Some(v);
        }
        Ok(self.outputs.iter().map(|&o| vals[o].clone().expect("output evaluated")).collect())
    }

    /// Evaluates with a single assignment covering inputs and parameter variables.
    pub fn evaluate_at<F: Field>(&self, field: &F, point: &BTreeMap<String, F::Elem>) -> Result<Vec<F::Elem>> {
        self.evaluate(field, point, point)
    }

    /// Same circuit with a different output list.
    pub fn with_outputs(&self, outputs: Vec<usize>) -> Result<Circuit> {
        let mut c = self.clone();
        c.outputs = outputs;
        c.validate()?;
        Ok(c)
    }

    /// Same circuit restricted to its `k`-th output.
    pub fn select_output(&self, k: usize) -> Result<Circuit> {
        let idx = *self
            .outputs
            .get(k)
            .ok_or(Error::DanglingOutput { output: k, index: usize::MAX })?;
        self.with_outputs(vec![idx])
    }
}

/// Incremental construction of circuits. Inputs, parameters and constants
/// are deduplicated.
#[derive(Debug, Clone, Default)]
pub struct CircuitBuilder {
    inputs: Vec<String>,
    param_vars: Vec<String>,
    param_table: BTreeMap<String, Poly>,
    nodes: Vec<Node>,
    flags: Vec<bool>,
    outputs: Vec<usize>,
    input_nodes: HashMap<String, usize>,
    param_nodes: HashMap<String, usize>,
    const_nodes: HashMap<BigRational, usize>,
}

impl CircuitBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    /// Continues from an existing circuit; its nodes keep their indices and
    /// its outputs are dropped.
    pub fn from_circuit(c: &Circuit) -> Self {
        let mut b = CircuitBuilder {
            inputs: c.inputs.clone(),
            param_vars: c.param_vars.clone(),
            param_table: c.param_table.clone(),
            nodes: c.nodes.clone(),
            flags: c.scalar_flag.clone(),
            ..Default::default()
        };
        for (i, node) in c.nodes.iter().enumerate() {
            match node {
                Node::Input(name) => {
                    b.input_nodes.insert(name.clone(), i);
                }
                Node::Param(id) => {
                    b.param_nodes.insert(id.clone(), i);
                }
                Node::Const(q) => {
                    b.const_nodes.entry(q.clone()).or_insert(i);
                }
                _ => {}
            }
        }
        b
    }

    fn push(&mut self, node: Node) -> usize {
        let flag = match &node {
            Node::Input(_) => false,
            Node::Const(_) | Node::Param(_) => true,
            Node::Add(a, b) | Node::Sub(a, b) | Node::Mul(a, b) => self.flags[*a] && self.flags[*b],
        };
        self.nodes.push(node);
        self.flags.push(flag);
        self.nodes.len() - 1
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn node(&self, i: usize) -> &Node {
        &self.nodes[i]
    }

    pub fn is_scalar(&self, i: usize) -> bool {
        self.flags[i]
    }

    pub fn input(&mut self, name: &str) -> usize {
        if let Some(&i) = self.input_nodes.get(name) {
            return i;
        }
        self.inputs.push(name.to_string());
        let i = self.push(Node::Input(name.to_string()));
        self.input_nodes.insert(name.to_string(), i);
        i
    }

    pub fn param_var(&mut self, name: &str) {
        if !self.param_vars.iter().any(|v| v == name) {
            self.param_vars.push(name.to_string());
        }
    }

    /// Adds (or reuses) a parameter node. Variables of `poly` are declared as
    /// parameter variables.
    pub fn param(&mut self, id: &str, poly: Poly) -> usize {
        if let Some(&i) = self.param_nodes.get(id) {
            return i;
        }
        for v in poly.trimmed().vars() {
            self.param_var(v);
        }
        self.param_table.insert(id.to_string(), poly);
        let i = self.push(Node::Param(id.to_string()));
        self.param_nodes.insert(id.to_string(), i);
        i
    }

    /// Replaces the stored polynomial of an existing parameter.
    pub fn set_param_poly(&mut self, id: &str, poly: Poly) {
        for v in poly.trimmed().vars() {
            self.param_var(v);
        }
        self.param_table.insert(id.to_string(), poly);
    }

    pub fn param_index(&self, id: &str) -> Option<usize> {
        self.param_nodes.get(id).copied()
    }

    pub fn constant(&mut self, q: BigRational) -> usize {
        if let Some(&i) = self.const_nodes.get(&q) {
            return i;
        }
        let i = self.push(Node::Const(q.clone()));
        self.const_nodes.insert(q, i);
        i
    }

    pub fn int(&mut self, n: i64) -> usize {
        self.constant(BigRational::from_integer(n.into()))
    }

    pub fn add(&mut self, a: usize, b: usize) -> usize {
        self.push(Node::Add(a, b))
    }

    pub fn sub(&mut self, a: usize, b: usize) -> usize {
        self.push(Node::Sub(a, b))
    }

    pub fn mul(&mut self, a: usize, b: usize) -> usize {
        self.push(Node::Mul(a, b))
    }

    pub fn neg(&mut self, a: usize) -> usize {
        let zero = self.constant(BigRational::zero());
        self.sub(zero, a)
    }

    /// `base^e` by square-and-multiply; `e = 0` yields the constant 1.
    pub fn pow(&mut self, base: usize, mut e: u32) -> usize {
        if e == 0 {
            return self.constant(BigRational::one());
        }
        let mut acc: Option<usize> = None;
        let mut sq = base;
        loop {
            if e & 1 == 1 {
                acc = Some(match acc {
                    None => sq,
                    Some(a) => self.mul(a, sq),
                });
            }
            e >>= 1;
            if e == 0 {
                break;
            }
            sq = self.mul(sq, sq);
        }
        acc.unwrap()
    }

    /// `[base, base^2, base^4, ..., base^(2^k)]` by repeated squaring.
    pub fn squaring_chain(&mut self, base: usize, k: u32) -> Vec<usize> {
        let mut chain = vec![base];
        for _ in 0..k {
            let last = *chain.last().unwrap();
            chain.push(self.mul(last, last));
        }
        chain
    }

    /// Balanced product tree; the empty product is the constant 1.
    pub fn product(&mut self, factors: &[usize]) -> usize {
        match factors.len() {
            0 => self.constant(BigRational::one()),
            1 => factors[0],
            n => {
                let (l, r) = factors.split_at(n / 2);
                let a = self.product(l);
                let b = self.product(r);
                self.mul(a, b)
            }
        }
    }

    /// Left-to-right sum; the empty sum is the constant 0.
    pub fn sum(&mut self, terms: &[usize]) -> usize {
        let Some((&first, rest)) = terms.split_first() else {
            return self.constant(BigRational::zero());
        };
        rest.iter().fold(first, |acc, &t| self.add(acc, t))
    }

    pub fn output(&mut self, i: usize) {
        self.outputs.push(i);
    }

    pub fn build(self) -> Result<Circuit> {
        Circuit::from_parts_with_flags(
            self.inputs,
            self.param_vars,
            self.param_table,
            self.nodes,
            self.flags,
            self.outputs,
        )
    }

    pub fn build_with_outputs(mut self, outputs: &[usize]) -> Result<Circuit> {
        self.outputs = outputs.to_vec();
        self.build()
    }
}

/// JSON mirror of [`Circuit`] with the same field names.
#[derive(Debug, Serialize, Deserialize)]
struct CircuitJson {
    inputs: Vec<String>,
    param_vars: Vec<String>,
    param_table: BTreeMap<String, Poly>,
    nodes: Vec<NodeJson>,
    scalar_flag: Vec<bool>,
    outputs: Vec<usize>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(tag = "op", rename_all = "lowercase")]
enum NodeJson {
    Input { name: String },
    Const { value: String },
    Param { id: String },
    Add { lhs: usize, rhs: usize },
    Sub { lhs: usize, rhs: usize },
    Mul { lhs: usize, rhs: usize },
}

impl Serialize for Circuit {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let nodes = self
            .nodes
            .iter()
            .map(|n| match n {
                Node::Input(name) => NodeJson::Input { name: name.clone() },
                Node::Const(q) => NodeJson::Const { value: crate::field::fmt_rational(q) },
                Node::Param(id) => NodeJson::Param { id: id.clone() },
                Node::Add(a, b) => NodeJson::Add { lhs: *a, rhs: *b },
                Node::Sub(a, b) => NodeJson::Sub { lhs: *a, rhs: *b },
                Node::Mul(a, b) => NodeJson::Mul { lhs: *a, rhs: *b },
            })
            .collect();
        CircuitJson {
            inputs: self.inputs.clone(),
            param_vars: self.param_vars.clone(),
            param_table: self.param_table.clone(),
            nodes,
            scalar_flag: self.scalar_flag.clone(),
            outputs: self.outputs.clone(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Circuit {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let raw = CircuitJson::deserialize(d)?;
        let nodes = raw
            .nodes
            .into_iter()
            .map(|n| {
                Ok(match n {
                    NodeJson::Input { name } => Node::Input(name),
                    NodeJson::Const { value } => Node::Const(
                        crate::field::parse_rational(&value)
                            .ok_or_else(|| D::Error::custom(format!("bad rational `{value}`")))?,
                    ),
                    NodeJson::Param { id } => Node::Param(id),
                    NodeJson::Add { lhs, rhs } => Node::Add(lhs, rhs),
                    NodeJson::Sub { lhs, rhs } => Node::Sub(lhs, rhs),
                    NodeJson::Mul { lhs, rhs } => Node::Mul(lhs, rhs),
                })
            })
            .collect::<std::result::Result<Vec<_>, D::Error>>()?;
        Circuit::from_parts_with_flags(raw.inputs, raw.param_vars, raw.param_table, nodes, raw.scalar_flag, raw.outputs)
            .map_err(D::Error::custom)
    }
}
