//! Elimination oracles: general solutions computed from the solution fibre
//! or from a resultant, without the closed forms.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::families::is_monic_in;
use crate::polyring::{expand, resultant, Poly};
use crate::slp::Circuit;

/// `Π_points (Y - F(point))`. Each point maps some variables of `F` to
/// polynomials; the remaining variables stay symbolic.
pub fn eliminate_points(points: &[BTreeMap<String, Poly>], f: &Circuit, term_budget: usize) -> Result<Poly> {
    if points.is_empty() {
        return Err(Error::EmptyPointSet);
    }
    let fx = expand(f, term_budget)?;
    let y = Poly::var("Y");
    let mut acc = Poly::one();
    for point in points {
        let mut value = fx.clone();
        for (var, v) in point {
            value = value.substitute(var, v)?;
        }
        acc = acc.try_mul(&y.try_sub(&value)?)?;
        if acc.num_terms() > term_budget {
            return Err(Error::BudgetExceeded { node: f.len(), terms: acc.num_terms() });
        }
    }
    Ok(acc)
}

/// `Res_var(G, Y - F)` scaled to be monic in `Y`.
pub fn eliminate_resultant(g: &Poly, f: &Poly, var: &str) -> Result<Poly> {
    if !is_monic_in(g, var) {
        return Err(Error::NotMonic(var.to_string()));
    }
    let res = resultant(g, &Poly::var("Y").try_sub(f)?, var)?;
    let lead = res
        .leading_coefficient_in("Y")
        .as_constant()
        .ok_or_else(|| Error::NotMonic("Y".to_string()))?;
    Ok(res.scale(&lead.recip()))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DegreeReport {
    pub total_degree: u32,
    pub deg_y: u32,
    pub delta: u64,
    pub deg_f: u64,
    pub fibre_size: u64,
    pub total_bound: u64,
    pub total_ok: bool,
    pub deg_y_ok: bool,
    pub delta_star: u32,
    pub d_star: u32,
    pub passed: bool,
}

/// Checks `deg P <= δ deg F` and `deg_Y P <= D`, and reports
/// `δ_* = deg_params P` and `D_* = deg_Y P`.
pub fn solution_degree_report(
    p: &Poly,
    delta: u64,
    deg_f: u64,
    fibre_size: u64,
    param_vars: &[&str],
) -> Result<DegreeReport> {
    if !is_monic_in(p, "Y") {
        return Err(Error::NotMonic("Y".to_string()));
    }
    let total_degree = p.total_degree();
    let deg_y = p.degree_in("Y");
    let total_bound = delta * deg_f;
    let total_ok = u64::from(total_degree) <= total_bound;
    let deg_y_ok = u64::from(deg_y) <= fibre_size;
    Ok(DegreeReport {
        total_degree,
        deg_y,
        delta,
        deg_f,
        fibre_size,
        total_bound,
        total_ok,
        deg_y_ok,
        delta_star: p.degree_in_vars(param_vars),
        d_star: deg_y,
        passed: total_ok && deg_y_ok,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::*;
    use crate::polyring::DEFAULT_TERM_BUDGET;
    use crate::slp::parse_circuit;

    fn p(s: &str) -> Poly {
        s.parse().unwrap()
    }

    fn fibre1(n: u32) -> Vec<BTreeMap<String, Poly>> {
        solutions_family1(n).unwrap().iter().map(|s| s.poly_assignment()).collect()
    }

    #[test]
    fn family1_two_points() {
        let inst = build_family1(1).unwrap();
        let pp = eliminate_points(&fibre1(1), &inst.f_circuit().unwrap(), DEFAULT_TERM_BUDGET).unwrap();
        assert_eq!(pp, p("(Y - (1 + S*T))*(Y - U*(1 + S*(T + 1)))"));
    }

    #[test]
    fn single_point_zero_f() {
        let f = parse_circuit("const z = 0/1\noutput z\n").unwrap();
        assert_eq!(eliminate_points(&[BTreeMap::new()], &f, 10).unwrap(), p("Y"));
        assert_eq!(eliminate_points(&[], &f, 10), Err(Error::EmptyPointSet));
    }

    #[test]
    fn family1_n2_matches_closed_form() {
        let inst = build_family1(2).unwrap();
        let pp = eliminate_points(&fibre1(2), &inst.f_circuit().unwrap(), DEFAULT_TERM_BUDGET).unwrap();
        assert_eq!(pp, general_solution_family1(2).unwrap());
    }

    #[test]
    fn resultant_linear_and_small() {
        assert_eq!(eliminate_resultant(&p("X - T_1"), &p("S*X^2"), "X").unwrap(), p("Y - S*T_1^2"));
        let g = p("(X - T_1)*(X - T_2)");
        assert_eq!(eliminate_resultant(&g, &p("S*X^2"), "X").unwrap(), general_solution_family2(2, 1).unwrap());
        assert_eq!(eliminate_resultant(&p("2*X - 1"), &p("X"), "X"), Err(Error::NotMonic("X".into())));
    }

    #[test]
    fn degree_reports() {
        let r = solution_degree_report(&general_solution_family2(2, 1).unwrap(), 2, 3, 2, &["S", "T_1", "T_2"]).unwrap();
        assert_eq!((r.total_degree, r.total_bound, r.passed), (6, 6, true));
        let g1 = general_solution_family1(1).unwrap();
        let r = solution_degree_report(&g1, 2, 4, 2, &["S", "T"]).unwrap();
        assert_eq!(r.deg_y, 2);
        assert!(r.passed);
        let trivial = solution_degree_report(&p("Y"), 1, 1, 1, &[]).unwrap();
        assert!(trivial.passed);
        assert!(matches!(solution_degree_report(&p("2*Y"), 1, 1, 1, &[]), Err(Error::NotMonic(_))));
    }
}
