use std::collections::BTreeMap;

use num_rational::BigRational;
use num_traits::Zero;

use super::identity::default_points;
use super::CertificateReport;
use crate::error::{Error, Result};
use crate::families::{build_family1, general_solution_family1, family1_inner_sum};
use crate::field::{fmt_rational_short, Rationals, DEFAULT_MODULUS};
use crate::polyring::{expand_with, probabilistic_equal_poly, Matrix, ParamMode, Poly, DEFAULT_TERM_BUDGET};
use crate::slp::Circuit;
use crate::transforms::invariance_check;

const INVARIANCE_SAMPLES: usize = 64;

fn at(s: &BigRational, t: &BigRational) -> BTreeMap<String, BigRational> {
    BTreeMap::from([("S".to_string(), s.clone()), ("T".to_string(), t.clone())])
}

/// Tangent-space audit of an invariant circuit `gamma` for the family-1
/// general solution.
///
/// With `A_j` the parameters of `gamma` and `Q_l` the coefficient of
/// `U^l Y^(2^n-1)` in the expansion of `gamma` over opaque parameters, the
/// matrix `D[h][l] = Σ_j ∂Q_l/∂A_j(α) · ∂A_j/∂S(0, t_h)` is assembled with
/// `α = A(0, t_0)`. Full rank of `D` forces `N >= 2^n`.
pub fn robustness_audit(gamma: &Circuit, n: u32, t_points: Option<&[BigRational]>, seed: u64) -> Result<CertificateReport> {
    if !(1..=3).contains(&n) {
        return Err(Error::OutOfRange { what: "n", value: n.into(), min: 1, max: 3 });
    }
    let size = 1usize << n;
    let t: Vec<BigRational> = match t_points {
        Some(t) => t.to_vec(),
        None => default_points(n),
    };
    if t.len() != size {
        return Err(Error::WrongPointCount { expected: size, got: t.len() });
    }
    let params: Vec<(String, Poly)> = gamma.param_table().iter().map(|(k, v)| (k.clone(), v.clone())).collect();
    let spec = build_family1(n)?.equivalence()?;
    let verdicts = invariance_check(&params, &spec, INVARIANCE_SAMPLES, seed)?;
    if let Some(bad) = verdicts.iter().find(|v| !v.passed) {
        let witness = serde_json::to_string(&bad.witness).expect("serializable");
        return Err(Error::NotInvariant { parameter: bad.parameter.clone(), witness });
    }
    let p = general_solution_family1(n)?;
    if !probabilistic_equal_poly(gamma, &p, 5, DEFAULT_MODULUS, seed)?.is_equal() {
        return Err(Error::NotAGeneralSolution(format!("circuit differs from P for n = {n}")));
    }

    let opaque = expand_with(gamma, 0, DEFAULT_TERM_BUDGET, ParamMode::Opaque)?;
    let ydeg = (1u32 << n) - 1;
    let q: Vec<Poly> = (0..size).map(|l| opaque.coefficient_of(&[("U", l as u32), ("Y", ydeg)])).collect();
    let zero = BigRational::zero();
    let alpha: BTreeMap<String, BigRational> = params
        .iter()
        .map(|(id, a)| Ok((id.clone(), a.eval(&Rationals, |v| at(&zero, &t[0]).get(v).cloned())?)))
        .collect::<Result<_>>()?;
    let jac: Vec<Vec<BigRational>> = q
        .iter()
        .map(|ql| {
            params
                .iter()
                .map(|(id, _)| ql.derivative(id).eval(&Rationals, |v| alpha.get(v).cloned()))
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<_>>()?;
    let tangents: Vec<Vec<BigRational>> = t
        .iter()
        .map(|th| {
            params
                .iter()
                .map(|(_, a)| a.derivative("S").eval(&Rationals, |v| at(&zero, th).get(v).cloned()))
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<_>>()?;
    let d = Matrix::from_fn(size, size, |h, l| {
        jac[l].iter().zip(&tangents[h]).fold(BigRational::zero(), |acc, (j, v)| acc + j * v)
    })?;
    // ∂/∂S of -c_l at S = 0 is -Σ t^p l^q
    let minus_m = Matrix::from_fn(size, size, |h, l| {
        let s = family1_inner_sum(n, l as u64);
        -s.eval(&Rationals, |v| (v == "T").then(|| t[h].clone())).expect("univariate in T")
    })?;

    let cost = gamma.cost();
    let rank = d.rank();
    let nn = cost.param_count;
    let cap = (cost.nonscalar_len + 3).pow(2);
    let mut report = CertificateReport::new("audit");
    report.input("n", n).input("t", t.iter().map(fmt_rational_short).collect::<Vec<_>>());
    report.object("cost", cost);
    report.object("invariance_pairs", verdicts.first().map_or(0, |v| v.pairs));
    report.object("Q", q.iter().map(|x| x.to_string()).collect::<Vec<_>>());
    report.object("D", &d);
    report.object("rank_D", rank);
    report.bound("two_pow_n", size);
    report.bound("l_plus_3_squared", cap);
    report.check("invariant", true, format!("{} parameters agree on every sampled equivalent pair", params.len()));
    report.check("general_solution", true, "Schwartz-Zippel agreement with P, 5 trials");
    report.check("matches_minus_m", d == minus_m, "D = -M with M[h][l] = sum over p+q=2^n-1 of t_h^p l^q");
    report.check("full_rank", rank == size, format!("rank {rank} of {size}"));
    report.check("param_count", nn >= rank, format!("N = {nn} >= rank {rank}"));
    report.check("n_le_l_plus_3_squared", nn <= cap, format!("N = {nn} <= (L+3)^2 = {cap}"));
    report.note("invariance is sampled: a pass is evidence, not proof");
    Ok(report)
}
