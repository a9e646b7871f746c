use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::field::{fmt_rational, fmt_rational_short, Field};

/// Orders variable names so that numeric suffixes compare numerically:
/// `T < T_1 < T_2 < T_10 < U`.
pub fn cmp_var_names(a: &str, b: &str) -> Ordering {
    fn chunks(s: &str) -> Vec<(bool, &str)> {
        let mut out = Vec::new();
        let bytes = s.as_bytes();
        let mut start = 0;
        for i in 1..=bytes.len() {
            if i == bytes.len() || bytes[i].is_ascii_digit() != bytes[start].is_ascii_digit() {
                out.push((bytes[start].is_ascii_digit(), &s[start..i]));
                start = i;
            }
        }
        out
    }
    let (ca, cb) = (chunks(a), chunks(b));
    for (x, y) in ca.iter().zip(cb.iter()) {
        let ord = match (x.0, y.0) {
            (true, true) => {
                let (tx, ty) = (x.1.trim_start_matches('0'), y.1.trim_start_matches('0'));
                tx.len().cmp(&ty.len()).then_with(|| tx.cmp(ty))
            }
            _ => x.1.cmp(y.1),
        };
        if ord != Ordering::Equal {
            return ord;
        }
    }
    ca.len().cmp(&cb.len()).then_with(|| a.cmp(b))
}

/// Exponent vector with cached total degree. The derived ordering is graded
/// lexicographic with respect to the owning polynomial's variable order.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial {
    degree: u32,
    exps: Vec<u32>,
}

impl Monomial {
    pub fn new(exps: Vec<u32>) -> Result<Self> {
        let mut degree: u32 = 0;
        for &e in &exps {
            degree = degree.checked_add(e).ok_or(Error::ExponentOverflow)?;
        }
        Ok(Monomial { degree, exps })
    }

    pub fn one(nvars: usize) -> Self {
        Monomial { degree: 0, exps: vec![0; nvars] }
    }

    pub fn exps(&self) -> &[u32] {
        &self.exps
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    fn checked_mul(&self, other: &Monomial) -> Result<Monomial> {
        let exps = self
            .exps
            .iter()
            .zip(&other.exps)
            .map(|(a, b)| a.checked_add(*b).ok_or(Error::ExponentOverflow))
            .collect::<Result<Vec<_>>>()?;
        let degree = self.degree.checked_add(other.degree).ok_or(Error::ExponentOverflow)?;
        Ok(Monomial { degree, exps })
    }

    fn divides(&self, other: &Monomial) -> bool {
        self.exps.iter().zip(&other.exps).all(|(a, b)| a <= b)
    }

    fn quotient(&self, divisor: &Monomial) -> Monomial {
        Monomial {
            degree: self.degree - divisor.degree,
            exps: self.exps.iter().zip(&divisor.exps).map(|(a, b)| a - b).collect(),
        }
    }
}

/// Sparse multivariate polynomial with exact rational coefficients.
///
/// The variable list is kept sorted by [`cmp_var_names`]; terms never carry a
/// zero coefficient. Equality ignores variables that do not occur.
#[derive(Debug, Clone)]
pub struct Poly {
    vars: Vec<String>,
    terms: BTreeMap<Monomial, BigRational>,
}

impl PartialEq for Poly {
    fn eq(&self, other: &Self) -> bool {
        if self.vars == other.vars {
            return self.terms == other.terms;
        }
        let (a, b) = (self.trimmed(), other.trimmed());
        a.vars == b.vars && a.terms == b.terms
    }
}

impl Eq for Poly {}

impl Default for Poly {
    fn default() -> Self {
        Poly::zero()
    }
}

fn sorted_vars<I: IntoIterator<Item = String>>(it: I) -> Vec<String> {
    let mut v: Vec<String> = it.into_iter().collect();
    v.sort_by(|a, b| cmp_var_names(a, b));
    v.dedup();
    v
}

impl Poly {
    pub fn zero() -> Self {
        Poly { vars: Vec::new(), terms: BTreeMap::new() }
    }

    pub fn one() -> Self {
        Poly::constant(BigRational::one())
    }

    pub fn constant(c: BigRational) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(Monomial::one(0), c);
        }
        Poly { vars: Vec::new(), terms }
    }

    pub fn int(c: i64) -> Self {
        Poly::constant(BigRational::from_integer(c.into()))
    }

    pub fn var(name: &str) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(Monomial { degree: 1, exps: vec![1] }, BigRational::one());
        Poly { vars: vec![name.to_string()], terms }
    }

    /// Builds a polynomial from `(exponents, coefficient)` pairs over `vars`
    /// (in any order); repeated monomials are summed.
    pub fn from_terms<I>(vars: &[String], terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Vec<u32>, BigRational)>,
    {
        let sorted = sorted_vars(vars.iter().cloned());
        if sorted.len() != vars.len() {
            return Err(Error::PolyParse { pos: 0, message: "repeated variable".into() });
        }
        let perm: Vec<usize> =
            vars.iter().map(|v| sorted.iter().position(|s| s == v).unwrap()).collect();
        let mut out = Poly { vars: sorted, terms: BTreeMap::new() };
        for (exps, c) in terms {
            if exps.len() != vars.len() {
                return Err(Error::PolyParse { pos: 0, message: "exponent length mismatch".into() });
            }
            let mut e = vec![0; vars.len()];
            for (i, x) in exps.into_iter().enumerate() {
                e[perm[i]] = x;
            }
            out.add_term(Monomial::new(e)?, c);
        }
        Ok(out)
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    /// Terms in ascending graded-lex order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &BigRational)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// The constant value if the polynomial has no variable part.
    pub fn as_constant(&self) -> Option<BigRational> {
        match self.terms.len() {
            0 => Some(BigRational::zero()),
            1 => {
                let (m, c) = self.terms.iter().next().unwrap();
                (m.degree == 0).then(|| c.clone())
            }
            _ => None,
        }
    }

    fn var_index(&self, name: &str) -> Option<usize> {
        self.vars.iter().position(|v| v == name)
    }

    fn add_term(&mut self, m: Monomial, c: BigRational) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(m) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    /// Re-expresses the polynomial over `vars`, which must contain every
    /// variable of `self` and be sorted.
    fn embed(&self, vars: &[String]) -> Poly {
        if self.vars == vars {
            return self.clone();
        }
        let map: Vec<usize> =
            self.vars.iter().map(|v| vars.iter().position(|w| w == v).expect("superset")).collect();
        let terms = self
            .terms
            .iter()
            .map(|(m, c)| {
                let mut e = vec![0; vars.len()];
                for (i, &x) in m.exps.iter().enumerate() {
                    e[map[i]] = x;
                }
                (Monomial { degree: m.degree, exps: e }, c.clone())
            })
            .collect();
        Poly { vars: vars.to_vec(), terms }
    }

    /// Extends the variable list with `extra` names (no effect on the value).
    pub fn with_vars(&self, extra: &[String]) -> Poly {
        let vars = sorted_vars(self.vars.iter().cloned().chain(extra.iter().cloned()));
        self.embed(&vars)
    }

    /// Drops variables that occur in no term.
    pub fn trimmed(&self) -> Poly {
        let used: Vec<bool> = (0..self.vars.len())
            .map(|i| self.terms.keys().any(|m| m.exps[i] > 0))
            .collect();
        if used.iter().all(|&u| u) {
            return self.clone();
        }
        let vars = self.vars.iter().zip(&used).filter(|(_, &u)| u).map(|(v, _)| v.clone()).collect();
        let terms = self
            .terms
            .iter()
            .map(|(m, c)| {
                let exps = m.exps.iter().zip(&used).filter(|(_, &u)| u).map(|(e, _)| *e).collect();
                (Monomial { degree: m.degree, exps }, c.clone())
            })
            .collect();
        Poly { vars, terms }
    }

    fn aligned(&self, other: &Poly) -> (Poly, Poly) {
        if self.vars == other.vars {
            return (self.clone(), other.clone());
        }
        let vars = sorted_vars(self.vars.iter().chain(&other.vars).cloned());
        (self.embed(&vars), other.embed(&vars))
    }

    pub fn try_add(&self, other: &Poly) -> Result<Poly> {
        let (mut a, b) = self.aligned(other);
        for (m, c) in b.terms {
            a.add_term(m, c);
        }
        Ok(a)
    }

    pub fn try_sub(&self, other: &Poly) -> Result<Poly> {
        self.try_add(&-other)
    }

    pub fn try_mul(&self, other: &Poly) -> Result<Poly> {
        if self.is_zero() || other.is_zero() {
            return Ok(Poly { vars: self.vars.clone(), terms: BTreeMap::new() });
        }
        let (a, b) = self.aligned(other);
        let mut acc: HashMap<Monomial, BigRational> = HashMap::with_capacity(a.terms.len() * b.terms.len());
        for (ma, ca) in &a.terms {
            for (mb, cb) in &b.terms {
                *acc.entry(ma.checked_mul(mb)?).or_insert_with(BigRational::zero) += ca * cb;
            }
        }
        let terms = acc.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        Ok(Poly { vars: a.vars, terms })
    }

    pub fn try_pow(&self, mut exp: u32) -> Result<Poly> {
        let mut acc = Poly::one();
        let mut sq = self.clone();
        while exp > 0 {
            if exp & 1 == 1 {
                acc = acc.try_mul(&sq)?;
            }
            exp >>= 1;
            if exp > 0 {
                sq = sq.try_mul(&sq)?;
            }
        }
        Ok(acc)
    }

    pub fn scale(&self, c: &BigRational) -> Poly {
        if c.is_zero() {
            return Poly { vars: self.vars.clone(), terms: BTreeMap::new() };
        }
        Poly {
            vars: self.vars.clone(),
            terms: self.terms.iter().map(|(m, x)| (m.clone(), x * c)).collect(),
        }
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(|m| m.degree).max().unwrap_or(0)
    }

    /// Degree in `var`; 0 for the zero polynomial or an absent variable.
    pub fn degree_in(&self, var: &str) -> u32 {
        match self.var_index(var) {
            Some(i) => self.terms.keys().map(|m| m.exps[i]).max().unwrap_or(0),
            None => 0,
        }
    }

    /// Total degree in the given subset of variables.
    pub fn degree_in_vars(&self, vars: &[&str]) -> u32 {
        let idx: Vec<usize> = vars.iter().filter_map(|v| self.var_index(v)).collect();
        self.terms.keys().map(|m| idx.iter().map(|&i| m.exps[i]).sum()).max().unwrap_or(0)
    }

    /// Coefficient of a partial monomial, as a polynomial in the remaining
    /// variables. Absent monomials yield zero.
    pub fn coefficient_of(&self, partial: &[(&str, u32)]) -> Poly {
        let mut wanted: Vec<(usize, u32)> = Vec::new();
        for &(v, e) in partial {
            match self.var_index(v) {
                Some(i) => wanted.push((i, e)),
                None if e == 0 => {}
                None => return Poly::zero(),
            }
        }
        let keep: Vec<usize> =
            (0..self.vars.len()).filter(|i| !wanted.iter().any(|(j, _)| j == i)).collect();
        let mut out = Poly {
            vars: keep.iter().map(|&i| self.vars[i].clone()).collect(),
            terms: BTreeMap::new(),
        };
        for (m, c) in &self.terms {
            if wanted.iter().all(|&(i, e)| m.exps[i] == e) {
                let exps: Vec<u32> = keep.iter().map(|&i| m.exps[i]).collect();
                let degree = exps.iter().sum();
                out.add_term(Monomial { degree, exps }, c.clone());
            }
        }
        out
    }

    /// Leading coefficient with respect to `var`, as a polynomial in the
    /// other variables.
    pub fn leading_coefficient_in(&self, var: &str) -> Poly {
        self.coefficient_of(&[(var, self.degree_in(var))])
    }

    /// Formal partial derivative.
    pub fn derivative(&self, var: &str) -> Poly {
        let mut out = Poly { vars: self.vars.clone(), terms: BTreeMap::new() };
        let Some(i) = self.var_index(var) else {
            return out;
        };
        for (m, c) in &self.terms {
            let e = m.exps[i];
            if e == 0 {
                continue;
            }
            let mut exps = m.exps.clone();
            exps[i] -= 1;
            out.add_term(
                Monomial { degree: m.degree - 1, exps },
                c * BigRational::from_integer(BigInt::from(e)),
            );
        }
        out
    }

    /// Binds some variables to rational values; the rest stay symbolic.
    pub fn partial_eval(&self, bindings: &BTreeMap<String, BigRational>) -> Poly {
        let bound: Vec<(usize, &BigRational)> = self
            .vars
            .iter()
            .enumerate()
            .filter_map(|(i, v)| bindings.get(v).map(|q| (i, q)))
            .collect();
        if bound.is_empty() {
            return self.clone();
        }
        let keep: Vec<usize> =
            (0..self.vars.len()).filter(|i| !bound.iter().any(|(j, _)| j == i)).collect();
        let mut out = Poly {
            vars: keep.iter().map(|&i| self.vars[i].clone()).collect(),
            terms: BTreeMap::new(),
        };
        for (m, c) in &self.terms {
            let mut coeff = c.clone();
            for &(i, q) in &bound {
                coeff *= pow_rational(q, m.exps[i]);
            }
            let exps: Vec<u32> = keep.iter().map(|&i| m.exps[i]).collect();
            let degree = exps.iter().sum();
            out.add_term(Monomial { degree, exps }, coeff);
        }
        out
    }

    /// Substitutes a polynomial for `var`.
    pub fn substitute(&self, var: &str, value: &Poly) -> Result<Poly> {
        let Some(i) = self.var_index(var) else {
            return Ok(self.clone());
        };
        // group by the exponent of `var`, then Horner in `value`
        let mut by_exp: BTreeMap<u32, Poly> = BTreeMap::new();
        let rest_vars: Vec<String> =
            self.vars.iter().enumerate().filter(|(j, _)| *j != i).map(|(_, v)| v.clone()).collect();
        for (m, c) in &self.terms {
            let e = m.exps[i];
            let mut exps = m.exps.clone();
            exps.remove(i);
            let entry = by_exp
                .entry(e)
                .or_insert_with(|| Poly { vars: rest_vars.clone(), terms: BTreeMap::new() });
            entry.add_term(Monomial { degree: m.degree - e, exps }, c.clone());
        }
        let mut acc = Poly { vars: rest_vars, terms: BTreeMap::new() };
        let mut prev_exp: Option<u32> = None;
        for (e, coeff) in by_exp.into_iter().rev() {
            if let Some(p) = prev_exp {
                acc = acc.try_mul(&value.try_pow(p - e)?)?;
            }
            acc = acc.try_add(&coeff)?;
            prev_exp = Some(e);
        }
        if let Some(p) = prev_exp {
            acc = acc.try_mul(&value.try_pow(p)?)?;
        }
        Ok(acc)
    }

    /// Evaluates at a full assignment given by `lookup`.
    pub fn eval<F, L>(&self, field: &F, lookup: L) -> Result<F::Elem>
    where
        F: Field,
        L: Fn(&str) -> Option<F::Elem>,
    {
        let used: Vec<usize> =
            (0..self.vars.len()).filter(|&i| self.terms.keys().any(|m| m.exps[i] > 0)).collect();
        let mut values = vec![field.zero(); self.vars.len()];
        for &i in &used {
            values[i] = lookup(&self.vars[i]).ok_or_else(|| Error::MissingAssignment(self.vars[i].clone()))?;
        }
        let mut acc = field.zero();
        for (m, c) in &self.terms {
            let mut t = field.from_rational(c)?;
            for &i in &used {
                if m.exps[i] > 0 {
                    t = field.mul(&t, &field.pow(&values[i], m.exps[i]));
                }
            }
            acc = field.add(&acc, &t);
        }
        Ok(acc)
    }

    /// Exact quotient `self / divisor`; fails if the division leaves a remainder.
    pub fn div_exact(&self, divisor: &Poly) -> Result<Poly> {
        if divisor.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        let (mut rem, d) = self.aligned(divisor);
        let (lead_m, lead_c) = d.terms.iter().next_back().map(|(m, c)| (m.clone(), c.clone())).unwrap();
        let mut quot = Poly { vars: rem.vars.clone(), terms: BTreeMap::new() };
        while let Some((m, c)) = rem.terms.iter().next_back().map(|(m, c)| (m.clone(), c.clone())) {
            if !lead_m.divides(&m) {
                return Err(Error::NotDivisible);
            }
            let qm = m.quotient(&lead_m);
            let qc = c / &lead_c;
            for (dm, dc) in &d.terms {
                rem.add_term(dm.checked_mul(&qm)?, -(dc * &qc));
            }
            quot.add_term(qm, qc);
        }
        Ok(quot)
    }
}

pub(crate) fn pow_rational(q: &BigRational, e: u32) -> BigRational {
    // 0^0 = 1
    num_traits::pow::pow(q.clone(), e as usize)
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly {
            vars: self.vars.clone(),
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }
}

impl Neg for Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        -&self
    }
}

macro_rules! binop {
    ($tr:ident, $method:ident, $try:ident) => {
        impl $tr<&Poly> for &Poly {
            type Output = Poly;
            fn $method(self, rhs: &Poly) -> Poly {
                self.$try(rhs).expect("polynomial exponent overflow")
            }
        }
        impl $tr<Poly> for Poly {
            type Output = Poly;
            fn $method(self, rhs: Poly) -> Poly {
                (&self).$try(&rhs).expect("polynomial exponent overflow")
            }
        }
    };
}

binop!(Add, add, try_add);
binop!(Sub, sub, try_sub);
binop!(Mul, mul, try_mul);

impl fmt::Display for Poly {
    /// Canonical text: terms in descending graded-lex order.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (k, (m, c)) in self.terms.iter().rev().enumerate() {
            let neg = c < &BigRational::zero();
            let abs = if neg { -c } else { c.clone() };
            match (k, neg) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            let factors: Vec<String> = m
                .exps
                .iter()
                .enumerate()
                .filter(|(_, &e)| e > 0)
                .map(|(i, &e)| if e == 1 { self.vars[i].clone() } else { format!("{}^{}", self.vars[i], e) })
                .collect();
            if factors.is_empty() {
                f.write_str(&fmt_rational_short(&abs))?;
            } else {
                if !abs.is_one() {
                    write!(f, "{}*", fmt_rational_short(&abs))?;
                }
                f.write_str(&factors.join("*"))?;
            }
        }
        Ok(())
    }
}

/// JSON mirror: variable list plus `(exponents, coefficient)` terms in
/// descending graded-lex order.
#[derive(serde::Serialize, serde::Deserialize)]
struct PolyJson {
    vars: Vec<String>,
    terms: Vec<TermJson>,
}

#[derive(serde::Serialize, serde::Deserialize)]
struct TermJson {
    exponents: Vec<u32>,
    coeff: String,
}

impl serde::Serialize for Poly {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        PolyJson {
            vars: self.vars.clone(),
            terms: self
                .terms
                .iter()
                .rev()
                .map(|(m, c)| TermJson { exponents: m.exps.clone(), coeff: fmt_rational(c) })
                .collect(),
        }
        .serialize(s)
    }
}

impl<'de> serde::Deserialize<'de> for Poly {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let raw = PolyJson::deserialize(d)?;
        let terms = raw
            .terms
            .into_iter()
            .map(|t| {
                crate::field::parse_rational(&t.coeff)
                    .map(|c| (t.exponents, c))
                    .ok_or_else(|| D::Error::custom(format!("bad coefficient `{}`", t.coeff)))
            })
            .collect::<std::result::Result<Vec<_>, _>>()?;
        Poly::from_terms(&raw.vars, terms).map_err(D::Error::custom)
    }
}
