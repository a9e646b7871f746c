//! The two built-in flat families of elimination problems.
//!
//! Family 1 (parameters `S`, `T`, free variable `U`, unknowns
//! `X_1..X_2n`):
//!
//! ```text
//! G_i     = X_i^2 - X_i                          1 <= i <= n
//! G_{n+1} = X_{n+1} - Σ 2^(k-1) X_k
//! G_{n+i} = X_{n+i} - X_{n+i-1}^2                2 <= i <= n
//! F       = (1 + S Π (T^(2^(i-1)) + X_{n+i})) Π ((U^(2^(j-1)) - 1) X_j + 1)
//! ```
//!
//! Family 2 (parameters `S`, `T_1..T_δ`, unknown `X`):
//! `G = Π (X - T_l)` and `F = S X^(2^K)`.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Pow, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::polyring::Poly;
use crate::slp::{Circuit, CircuitBuilder};
use crate::transforms::EquivalenceSpec;

fn check_range(what: &'static str, value: u32, min: u32, max: u32) -> Result<()> {
    if value < min || value > max {
        return Err(Error::OutOfRange { what, value: value.into(), min: min.into(), max: max.into() });
    }
    Ok(())
}

pub fn x_var(i: u32) -> String {
    format!("X_{i}")
}

pub fn t_var(l: u32) -> String {
    format!("T_{l}")
}

/// Names and roles of the variables of an instance.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VariableRoles {
    pub parameters: Vec<String>,
    pub free: Vec<String>,
    pub unknowns: Vec<String>,
    pub eliminated: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct InstanceManifest {
    pub family: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub delta: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub k: Option<u32>,
    pub roles: VariableRoles,
    pub outputs: Vec<String>,
}

#[derive(Debug, Clone)]
pub struct Family1Instance {
    pub n: u32,
    /// Outputs `G_1..G_2n` followed by `F`.
    pub beta: Circuit,
    pub m: u32,
    pub r: u32,
}

impl Family1Instance {
    pub fn f_circuit(&self) -> Result<Circuit> {
        self.beta.select_output(2 * self.n as usize)
    }

    pub fn equation_circuits(&self) -> Result<Vec<Circuit>> {
        (0..2 * self.n as usize).map(|k| self.beta.select_output(k)).collect()
    }

    /// Equivalence of parameter points `(S, T)` induced by `β`.
    pub fn equivalence(&self) -> Result<EquivalenceSpec> {
        EquivalenceSpec::new(vec!["S".into(), "T".into()], vec![self.beta.clone()])
    }

    pub fn manifest(&self) -> InstanceManifest {
        let n = self.n;
        let mut outputs: Vec<String> = (1..=2 * n).map(|i| format!("G_{i}")).collect();
        outputs.push("F".into());
        InstanceManifest {
            family: "family1".into(),
            n: Some(n),
            delta: None,
            k: None,
            roles: VariableRoles {
                parameters: vec!["S".into(), "T".into()],
                free: vec!["U".into()],
                unknowns: (1..=2 * n).map(x_var).collect(),
                eliminated: "Y".into(),
            },
            outputs,
        }
    }
}

/// Builds `β` with shared squaring chains for the powers of `T` and `U`.
pub fn build_family1(n: u32) -> Result<Family1Instance> {
    check_range("n", n, 1, 8)?;
    let nu = n as usize;
    let mut b = CircuitBuilder::new();
    let u = b.input("U");
    let x: Vec<usize> = (1..=2 * n).map(|i| b.input(&x_var(i))).collect();
    let s = b.param("S", Poly::var("S"));
    let t = b.param("T", Poly::var("T"));

    let mut outs = Vec::with_capacity(2 * nu + 1);
    for &xi in &x[..nu] {
        let sq = b.mul(xi, xi);
        outs.push(b.sub(sq, xi));
    }
    let weighted: Vec<usize> = (0..nu)
        .map(|k| {
            if k == 0 {
                x[0]
            } else {
                let w = b.int(1 << k);
                b.mul(w, x[k])
            }
        })
        .collect();
    let total = b.sum(&weighted);
    outs.push(b.sub(x[nu], total));
    for i in 1..nu {
        let sq = b.mul(x[nu + i - 1], x[nu + i - 1]);
        outs.push(b.sub(x[nu + i], sq));
    }

    let t_pows = b.squaring_chain(t, n - 1);
    let u_pows = b.squaring_chain(u, n - 1);
    let one = b.int(1);
    let left_factors: Vec<usize> = (0..nu).map(|i| b.add(t_pows[i], x[nu + i])).collect();
    let left_prod = b.product(&left_factors);
    let scaled = b.mul(s, left_prod);
    let left = b.add(one, scaled);
    let right_factors: Vec<usize> = (0..nu)
        .map(|j| {
            let um1 = b.sub(u_pows[j], one);
            let m = b.mul(um1, x[j]);
            b.add(m, one)
        })
        .collect();
    let right = b.product(&right_factors);
    outs.push(b.mul(left, right));
    let beta = b.build_with_outputs(&outs)?;
    Ok(Family1Instance { n, beta, m: 2, r: 1 })
}

/// A point of the solution variety of family 1.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SolutionPoint {
    pub bits: Vec<u8>,
    pub l: u64,
    #[serde(serialize_with = "ser_bigints")]
    pub coords: Vec<BigInt>,
}

fn ser_bigints<S: serde::Serializer>(v: &[BigInt], s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(|x| x.to_string()))
}

impl SolutionPoint {
    pub fn from_bits(bits: Vec<u8>) -> Self {
        let l: u64 = bits.iter().enumerate().map(|(j, &b)| u64::from(b) << j).sum();
        let mut coords: Vec<BigInt> = bits.iter().map(|&b| BigInt::from(b)).collect();
        let mut power = BigInt::from(l);
        for _ in 0..bits.len() {
            coords.push(power.clone());
            power = &power * &power;
        }
        SolutionPoint { bits, l, coords }
    }

    /// `X_i -> value` for every coordinate.
    pub fn assignment(&self) -> BTreeMap<String, BigRational> {
        self.coords
            .iter()
            .enumerate()
            .map(|(i, c)| (x_var(i as u32 + 1), BigRational::from_integer(c.clone())))
            .collect()
    }

    pub fn poly_assignment(&self) -> BTreeMap<String, Poly> {
        self.assignment().into_iter().map(|(k, v)| (k, Poly::constant(v))).collect()
    }
}

/// All `2^n` solution points, ordered by `l`.
pub fn solutions_family1(n: u32) -> Result<Vec<SolutionPoint>> {
    check_range("n", n, 1, 8)?;
    Ok((0..1u64 << n)
        .map(|l| SolutionPoint::from_bits((0..n).map(|j| ((l >> j) & 1) as u8).collect()))
        .collect())
}

/// `Σ_{p+q=2^n-1} T^p l^q` with `0^0 = 1`.
pub fn family1_inner_sum(n: u32, l: u64) -> Poly {
    let top = (1u32 << n) - 1;
    let lq = BigRational::from_integer(BigInt::from(l));
    let mut acc = Poly::zero();
    for p in 0..=top {
        let c: BigRational = Pow::pow(&lq, top - p);
        let term = Poly::var("T").try_pow(p).expect("small exponent").scale(&c);
        acc = &acc + &term;
    }
    acc
}

/// `U^l (1 + S Σ_{p+q=2^n-1} T^p l^q)`, the value of `F` at the point with index `l`.
pub fn family1_root(n: u32, l: u64) -> Result<Poly> {
    let inner = Poly::one().try_add(&Poly::var("S").try_mul(&family1_inner_sum(n, l))?)?;
    let exp = u32::try_from(l).map_err(|_| Error::ExponentOverflow)?;
    Poly::var("U").try_pow(exp)?.try_mul(&inner)
}

/// `P = Π_{0<=l<2^n} (Y - U^l (1 + S Σ T^p l^q))`, expanded.
pub fn general_solution_family1(n: u32) -> Result<Poly> {
    check_range("n", n, 1, 4)?;
    let y = Poly::var("Y");
    let mut acc = Poly::one();
    for l in 0..1u64 << n {
        acc = acc.try_mul(&y.try_sub(&family1_root(n, l)?)?)?;
    }
    Ok(acc)
}

/// Dense two-level Horner circuit for the family-1 general solution: outer
/// in `Y`, inner in `U`. Every coefficient of the `(deg_Y + 1) x (deg_U + 1)`
/// grid, zeros included, is a parameter `A_j_k` (coefficient of
/// `Y^j U^k`), a polynomial in `S` and `T`.
pub fn horner_circuit_family1(n: u32) -> Result<Circuit> {
    let p = general_solution_family1(n)?;
    let (dy, du) = (p.degree_in("Y"), p.degree_in("U"));
    let mut b = CircuitBuilder::new();
    let u = b.input("U");
    let y = b.input("Y");
    b.param_var("S");
    b.param_var("T");
    let mut outer: Option<usize> = None;
    for j in (0..=dy).rev() {
        let mut inner: Option<usize> = None;
        for k in (0..=du).rev() {
            let c = p.coefficient_of(&[("Y", j), ("U", k)]).trimmed();
            let a = b.param(&format!("A_{j}_{k}"), c);
            inner = Some(match inner {
                None => a,
                Some(h) => {
                    let m = b.mul(h, u);
                    b.add(m, a)
                }
            });
        }
        let inner = inner.expect("nonempty grid");
        outer = Some(match outer {
            None => inner,
            Some(h) => {
                let m = b.mul(h, y);
                b.add(m, inner)
            }
        });
    }
    b.build_with_outputs(&[outer.expect("nonempty grid")])
}

#[derive(Debug, Clone)]
pub struct Family2Instance {
    pub delta: u32,
    pub k: u32,
    /// `G = Π (X - T_l)` over inputs `X, T_1..T_δ`.
    pub g: Circuit,
    /// `F = S X^(2^K)` over input `X` and parameter `S`.
    pub f: Circuit,
}

impl Family2Instance {
    /// The roots `X = T_l` of `G`.
    pub fn roots(&self) -> Vec<BTreeMap<String, Poly>> {
        (1..=self.delta).map(|l| BTreeMap::from([("X".to_string(), Poly::var(&t_var(l)))])).collect()
    }

    pub fn param_vars(&self) -> Vec<String> {
        std::iter::once("S".to_string()).chain((1..=self.delta).map(t_var)).collect()
    }

    pub fn manifest(&self) -> InstanceManifest {
        InstanceManifest {
            family: "family2".into(),
            n: None,
            delta: Some(self.delta),
            k: Some(self.k),
            roles: VariableRoles {
                parameters: self.param_vars(),
                free: vec![],
                unknowns: vec!["X".into()],
                eliminated: "Y".into(),
            },
            outputs: vec!["G".into(), "F".into()],
        }
    }
}

pub fn build_family2(delta: u32, k: u32) -> Result<Family2Instance> {
    check_range("delta", delta, 1, 8)?;
    check_range("K", k, 1, 8)?;
    let mut b = CircuitBuilder::new();
    let x = b.input("X");
    let factors: Vec<usize> = (1..=delta)
        .map(|l| {
            let t = b.input(&t_var(l));
            b.sub(x, t)
        })
        .collect();
    let g = b.product(&factors);
    let g = b.build_with_outputs(&[g])?;

    let mut b = CircuitBuilder::new();
    let x = b.input("X");
    let s = b.param("S", Poly::var("S"));
    let chain = b.squaring_chain(x, k);
    let f = b.mul(s, *chain.last().unwrap());
    let f = b.build_with_outputs(&[f])?;
    Ok(Family2Instance { delta, k, g, f })
}

/// `P = Π_l (Y - S T_l^(2^K))`, expanded.
pub fn general_solution_family2(delta: u32, k: u32) -> Result<Poly> {
    check_range("delta", delta, 1, 8)?;
    check_range("K", k, 1, 6)?;
    let y = Poly::var("Y");
    let s = Poly::var("S");
    let mut acc = Poly::one();
    for l in 1..=delta {
        let root = s.try_mul(&Poly::var(&t_var(l)).try_pow(1 << k)?)?;
        acc = acc.try_mul(&y.try_sub(&root)?)?;
    }
    Ok(acc)
}

/// `R = Σ_l T_l^(2^K)`.
pub fn r_oracle(delta: u32, k: u32) -> Result<Poly> {
    check_range("delta", delta, 1, 8)?;
    check_range("K", k, 1, 6)?;
    let mut acc = Poly::zero();
    for l in 1..=delta {
        acc = acc.try_add(&Poly::var(&t_var(l)).try_pow(1 << k)?)?;
    }
    Ok(acc)
}

/// Product-form circuit `Π (Y - S T_l^(2^K))` with inputs `Y, T_1..T_δ`.
pub fn product_circuit_family2(delta: u32, k: u32) -> Result<Circuit> {
    check_range("delta", delta, 1, 8)?;
    check_range("K", k, 1, 8)?;
    let mut b = CircuitBuilder::new();
    let y = b.input("Y");
    let ts: Vec<usize> = (1..=delta).map(|l| b.input(&t_var(l))).collect();
    let s = b.param("S", Poly::var("S"));
    let factors: Vec<usize> = ts
        .iter()
        .map(|&t| {
            let chain = b.squaring_chain(t, k);
            let st = b.mul(s, *chain.last().unwrap());
            b.sub(y, st)
        })
        .collect();
    let p = b.product(&factors);
    b.build_with_outputs(&[p])
}

/// Sparse recursive Horner circuit for `p` over the input variables
/// `inputs` (outermost first). All other variables of `p` become parameter
/// variables; each nonconstant leaf coefficient is a parameter named
/// `<prefix><k>`.
pub fn horner_circuit(p: &Poly, inputs: &[String], param_vars: &[String], prefix: &str) -> Result<Circuit> {
    let mut b = CircuitBuilder::new();
    let nodes: Vec<usize> = inputs.iter().map(|v| b.input(v)).collect();
    for v in param_vars {
        b.param_var(v);
    }
    let mut counter = 0usize;
    let out = horner_rec(&mut b, p, inputs, &nodes, prefix, &mut counter)?;
    b.build_with_outputs(&[out])
}

fn horner_rec(
    b: &mut CircuitBuilder,
    p: &Poly,
    inputs: &[String],
    nodes: &[usize],
    prefix: &str,
    counter: &mut usize,
) -> Result<usize> {
    let Some((var, rest)) = inputs.split_first() else {
        let c = p.trimmed();
        if let Some(q) = c.as_constant() {
            return Ok(b.constant(q));
        }
        let id = format!("{prefix}{counter}");
        *counter += 1;
        return Ok(b.param(&id, c));
    };
    let deg = p.degree_in(var);
    let present: Vec<(u32, Poly)> = (0..=deg)
        .rev()
        .map(|e| (e, p.coefficient_of(&[(var.as_str(), e)])))
        .filter(|(_, c)| !c.is_zero())
        .collect();
    if present.is_empty() {
        return Ok(b.constant(BigRational::zero()));
    }
    let x = nodes[0];
    let mut acc: Option<(usize, u32)> = None;
    for (e, coeff) in &present {
        let c = horner_rec(b, coeff, rest, &nodes[1..], prefix, counter)?;
        acc = Some(match acc {
            None => (c, *e),
            Some((h, prev)) => {
                let step = b.pow(x, prev - e);
                let m = b.mul(h, step);
                (b.add(m, c), *e)
            }
        });
    }
    let (h, last) = acc.expect("nonempty");
    if last == 0 {
        Ok(h)
    } else {
        let step = b.pow(x, last);
        Ok(b.mul(h, step))
    }
}

/// Horner circuit of the family-2 general solution over inputs
/// `Y, T_1..T_δ` with coefficients in `S`.
pub fn horner_circuit_family2(delta: u32, k: u32) -> Result<Circuit> {
    let p = general_solution_family2(delta, k)?;
    let inputs: Vec<String> = std::iter::once("Y".to_string()).chain((1..=delta).map(t_var)).collect();
    horner_circuit(&p, &inputs, &["S".to_string()], "C_")
}

/// `1 + S Σ_{p+q=2^n-1} T^p l^q`, the negated coefficient of `U^l Y^(2^n-1)`
/// in the family-1 general solution.
pub fn family1_coefficient(n: u32, l: u64) -> Poly {
    &Poly::one() + &(&Poly::var("S") * &family1_inner_sum(n, l))
}

pub(crate) fn is_monic_in(p: &Poly, var: &str) -> bool {
    p.leading_coefficient_in(var).as_constant().is_some_and(|c| c.is_one())
}
