//! Exhaustive search for short circuits.
//!
//! A candidate of nonscalar length `k` is a sequence of products
//! `m_i = (Σ a_j b_j)(Σ c_j b_j)` where `b` runs over `1`, the input
//! variables and `m_1..m_{i-1}`, and every coefficient is in `{-1, 0, 1}`.
//! The target must lie in the span of `b` with coefficients polynomial in
//! the remaining (parameter) variables. Candidates are screened by their
//! values at random points of `Z/p` and confirmed exactly over `Q`.

use std::collections::{BTreeMap, BTreeSet};

use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::{PrimeField, DEFAULT_MODULUS};
use crate::polyring::{bareiss_rank, Poly};

const POINTS: usize = 10;
const P: u64 = DEFAULT_MODULUS;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SearchResult {
    /// Least length found, or `None` if no candidate up to the cap works.
    pub length: Option<usize>,
    pub explored: u64,
}

/// Splits `target` by monomials in the non-input variables; each piece is
/// a polynomial in `inputs`.
fn split_by_params(target: &Poly, inputs: &[String]) -> Result<Vec<Poly>> {
    let vars = target.vars();
    let mut groups: BTreeMap<Vec<u32>, Vec<(Vec<u32>, BigRational)>> = BTreeMap::new();
    for (m, c) in target.terms() {
        let mut key = Vec::new();
        let mut exps = vec![0u32; inputs.len()];
        for (v, &e) in vars.iter().zip(m.exps()) {
            match inputs.iter().position(|x| x == v) {
                Some(i) => exps[i] = e,
                None => key.push(e),
            }
        }
        groups.entry(key).or_default().push((exps, c.clone()));
    }
    groups.into_values().map(|terms| Poly::from_terms(inputs, terms)).collect()
}

/// Reduced rows over `Z/p`, each with its pivot column.
#[derive(Default, Clone)]
struct Echelon {
    rows: Vec<(usize, Vec<u64>)>,
}

fn inv(a: u64) -> u64 {
    let mut r = 1u64;
    let (mut b, mut e) = (a, P - 2);
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % P;
        }
        b = b * b % P;
        e >>= 1;
    }
    r
}

impl Echelon {
    fn reduce(&self, v: &[u64]) -> Vec<u64> {
        let mut v = v.to_vec();
        for (piv, row) in &self.rows {
            let f = v[*piv];
            if f != 0 {
                for (x, r) in v.iter_mut().zip(row) {
                    *x = (*x + P - f * r % P) % P;
                }
            }
        }
        v
    }

    fn contains(&self, v: &[u64]) -> bool {
        self.reduce(v).iter().all(|&x| x == 0)
    }

    /// Adds `v`; returns false (and adds nothing) if it is dependent.
    fn push(&mut self, v: &[u64]) -> bool {
        let r = self.reduce(v);
        let Some(piv) = r.iter().position(|&x| x != 0) else {
            return false;
        };
        let s = inv(r[piv]);
        let r: Vec<u64> = r.iter().map(|x| x * s % P).collect();
        self.rows.push((piv, r));
        true
    }

    fn pop(&mut self) {
        self.rows.pop();
    }
}

fn operand_vectors(size: usize) -> Vec<Vec<i8>> {
    let mut out = Vec::new();
    let total = 3usize.pow(size as u32);
    for code in 0..total {
        let mut c = code;
        let v: Vec<i8> = (0..size)
            .map(|_| {
                let d = (c % 3) as i8 - 1;
                c /= 3;
                d
            })
            .collect();
        let first = v.iter().find(|&&x| x != 0);
        if first == Some(&1) && v[1..].iter().any(|&x| x != 0) {
            out.push(v);
        }
    }
    out
}

fn combine(coeffs: &[i8], basis: &[Vec<u64>]) -> Vec<u64> {
    let mut acc = vec![0u64; POINTS];
    for (c, b) in coeffs.iter().zip(basis) {
        match c {
            1 => acc.iter_mut().zip(b).for_each(|(a, x)| *a = (*a + x) % P),
            -1 => acc.iter_mut().zip(b).for_each(|(a, x)| *a = (*a + P - x) % P),
            _ => {}
        }
    }
    acc
}

fn combine_exact(coeffs: &[i8], basis: &[Poly]) -> Result<Poly> {
    let mut acc = Poly::zero();
    for (c, b) in coeffs.iter().zip(basis) {
        match c {
            1 => acc = acc.try_add(b)?,
            -1 => acc = acc.try_sub(b)?,
            _ => {}
        }
    }
    Ok(acc)
}

fn in_span_exact(basis: &[Poly], target: &Poly) -> Result<bool> {
    let mut monos: BTreeSet<Vec<(String, u32)>> = BTreeSet::new();
    let key = |p: &Poly, exps: &[u32]| -> Vec<(String, u32)> {
        p.vars().iter().cloned().zip(exps.iter().copied()).filter(|(_, e)| *e > 0).collect()
    };
    for p in basis.iter().chain(std::iter::once(target)) {
        for (m, _) in p.terms() {
            monos.insert(key(p, m.exps()));
        }
    }
    let index: BTreeMap<_, usize> = monos.into_iter().enumerate().map(|(i, m)| (m, i)).collect();
    let row = |p: &Poly| -> Vec<BigRational> {
        let mut r = vec![BigRational::from_integer(0.into()); index.len()];
        for (m, c) in p.terms() {
            r[index[&key(p, m.exps())]] = c.clone();
        }
        r
    };
    let rows: Vec<Vec<BigRational>> = basis.iter().map(row).collect();
    let mut with = rows.clone();
    with.push(row(target));
    Ok(bareiss_rank(rows)? == bareiss_rank(with)?)
}

struct Search<'a> {
    ops: Vec<Vec<Vec<i8>>>,
    targets_fp: Vec<Vec<u64>>,
    targets: &'a [Poly],
    base_exact: Vec<Poly>,
    budget: u64,
    explored: u64,
}

impl Search<'_> {
    fn confirm(&self, choices: &[(usize, usize)]) -> Result<bool> {
        let mut basis = self.base_exact.clone();
        for &(a, b) in choices {
            let ops = &self.ops[basis.len()];
            let x = combine_exact(&ops[a], &basis)?;
            let y = combine_exact(&ops[b], &basis)?;
            basis.push(x.try_mul(&y)?);
        }
        for t in self.targets {
            if !in_span_exact(&basis, t)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    fn dfs(
        &mut self,
        depth: usize,
        basis: &mut Vec<Vec<u64>>,
        ech: &mut Echelon,
        choices: &mut Vec<(usize, usize)>,
    ) -> Result<bool> {
        if depth == 0 {
            if self.targets_fp.iter().all(|t| ech.contains(t)) {
                return self.confirm(choices);
            }
            return Ok(false);
        }
        let size = basis.len();
        let count = self.ops[size].len();
        for a in 0..count {
            for b in a..count {
                self.explored += 1;
                if self.explored > self.budget {
                    return Err(Error::SearchBudgetExceeded { explored: self.explored - 1 });
                }
                let x = combine(&self.ops[size][a], basis);
                let y = combine(&self.ops[size][b], basis);
                let prod: Vec<u64> = x.iter().zip(&y).map(|(u, v)| u * v % P).collect();
                if !ech.push(&prod) {
                    continue;
                }
                basis.push(prod);
                choices.push((a, b));
                let found = self.dfs(depth - 1, basis, ech, choices)?;
                if found {
                    return Ok(true);
                }
                choices.pop();
                basis.pop();
                ech.pop();
            }
        }
        Ok(false)
    }
}

/// Least nonscalar length `<= max_len` of a circuit for `target` in the
/// restricted class described in the module docs. Fails with
/// `SearchBudgetExceeded` after `budget` candidate products.
pub fn min_nonscalar_length(
    target: &Poly,
    inputs: &[String],
    max_len: usize,
    budget: u64,
    seed: u64,
) -> Result<SearchResult> {
    let targets = split_by_params(target, inputs)?;
    let field = PrimeField::new(P)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let points: Vec<BTreeMap<String, u64>> = (0..POINTS)
        .map(|_| inputs.iter().map(|v| (v.clone(), rng.gen_range(0..P))).collect())
        .collect();
    let fp = |p: &Poly| -> Result<Vec<u64>> { points.iter().map(|pt| p.eval(&field, |v| pt.get(v).copied())).collect() };

    let mut base_exact = vec![Poly::one()];
    base_exact.extend(inputs.iter().map(|v| Poly::var(v)));
    let base_fp: Vec<Vec<u64>> = base_exact.iter().map(fp).collect::<Result<_>>()?;
    let targets_fp: Vec<Vec<u64>> = targets.iter().map(fp).collect::<Result<_>>()?;
    let ops = (0..=base_exact.len() + max_len).map(operand_vectors).collect();
    let mut search = Search { ops, targets_fp, targets: &targets, base_exact, budget, explored: 0 };

    for k in 0..=max_len {
        let mut basis = base_fp.clone();
        let mut ech = Echelon::default();
        for b in &basis {
            ech.push(b);
        }
        if search.dfs(k, &mut basis, &mut ech, &mut Vec::new())? {
            return Ok(SearchResult { length: Some(k), explored: search.explored });
        }
    }
    Ok(SearchResult { length: None, explored: search.explored })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> Poly {
        s.parse().unwrap()
    }

    fn names(v: &[&str]) -> Vec<String> {
        v.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn small_lengths() {
        let x = names(&["X"]);
        assert_eq!(min_nonscalar_length(&p("3*X + 1"), &x, 3, 10_000, 0).unwrap().length, Some(0));
        assert_eq!(min_nonscalar_length(&p("X^2"), &x, 3, 10_000, 0).unwrap().length, Some(1));
        assert_eq!(min_nonscalar_length(&p("X^4"), &x, 3, 10_000, 0).unwrap().length, Some(2));
        assert_eq!(min_nonscalar_length(&p("S*X^2 + S^2*X"), &x, 3, 10_000, 0).unwrap().length, Some(1));
        let xy = names(&["X", "Y"]);
        assert_eq!(min_nonscalar_length(&p("X^2 - Y^2"), &xy, 3, 100_000, 0).unwrap().length, Some(1));
    }

    #[test]
    fn budget_is_reported() {
        let xyz = names(&["X", "Y", "Z"]);
        let err = min_nonscalar_length(&p("X^3*Y^3*Z^3"), &xyz, 3, 50, 0).unwrap_err();
        assert_eq!(err, Error::SearchBudgetExceeded { explored: 50 });
    }
}
