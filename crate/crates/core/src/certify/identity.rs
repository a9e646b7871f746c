use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Pow, Zero};

use super::bounds::theorem1_bound;
use super::CertificateReport;
use crate::error::{Error, Result};
use crate::families::general_solution_family1;
use crate::field::fmt_rational_short;
use crate::polyring::{Matrix, Poly};

/// Largest `n` for which the Vandermonde matrices are built.
pub const VANDERMONDE_MAX_N: u32 = 4;

fn q(n: u64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

/// `1 + S Σ_{p+q=2^n-1} T^p l^q`, written out term by term over `S, T`.
fn expected_coefficient(n: u32, l: u64) -> Result<Poly> {
    let top = (1u32 << n) - 1;
    let vars = ["S".to_string(), "T".to_string()];
    let mut terms = vec![(vec![0, 0], q(1))];
    for p in 0..=top {
        terms.push((vec![1, p], BigRational::from_integer(Pow::pow(BigInt::from(l), top - p))));
    }
    Poly::from_terms(&vars, terms)
}

/// Checks that `-coeff(P, U^l Y^(2^n-1)) = 1 + S Σ T^p l^q` for every `l`.
pub fn coefficient_identity_check(n: u32) -> Result<CertificateReport> {
    if !(1..=3).contains(&n) {
        return Err(Error::OutOfRange { what: "n", value: n.into(), min: 1, max: 3 });
    }
    let p = general_solution_family1(n)?;
    let mut report = CertificateReport::new("eq1");
    report.input("n", n);
    let ydeg = (1u32 << n) - 1;
    let mut found = Vec::new();
    for l in 0..1u64 << n {
        let c = -p.coefficient_of(&[("U", l as u32), ("Y", ydeg)]);
        let want = expected_coefficient(n, l)?;
        report.check(&format!("c_{l}"), c == want, format!("c_{l} = {c}"));
        found.push(c.to_string());
    }
    report.object("coefficients", found);
    Ok(report)
}

/// `0, 1, ..., 2^n - 1`.
pub fn default_points(n: u32) -> Vec<BigRational> {
    (0..1u64 << n).map(q).collect()
}

fn check_points(n: u32, t: &[BigRational]) -> Result<()> {
    let want = 1usize << n;
    if t.len() != want {
        return Err(Error::WrongPointCount { expected: want, got: t.len() });
    }
    if t.iter().collect::<BTreeSet<_>>().len() != t.len() {
        return Err(Error::DuplicatePoints);
    }
    Ok(())
}

/// Builds `A = (t_h^(2^n-p-1))`, `B = (l^p)` and `M = A B`, and checks that
/// both factors and `M` are nonsingular. For `n` above
/// [`VANDERMONDE_MAX_N`] only the bound is reported.
pub fn vandermonde_certificate(n: u32, t_points: &[BigRational]) -> Result<CertificateReport> {
    if n == 0 || n > 64 {
        return Err(Error::OutOfRange { what: "n", value: n.into(), min: 1, max: 64 });
    }
    let mut report = CertificateReport::new("vandermonde");
    report.input("n", n);
    let bound = theorem1_bound(n);
    report.bound("theorem1", &bound);
    report.bound("chain", "2^n <= N <= (L+3)^2 implies L >= 2^(n/2) - 3");
    if bound.vacuous {
        report.note(format!("the bound {} is not positive at n = {n} and says nothing", bound.expression));
    }
    if n > VANDERMONDE_MAX_N {
        report.input("mode", "formula-only");
        report.note(format!("matrices are not built for n > {VANDERMONDE_MAX_N}"));
        return Ok(report);
    }
    check_points(n, t_points)?;
    report.input("mode", "matrix");
    report.input("t", t_points.iter().map(fmt_rational_short).collect::<Vec<_>>());
    let size = 1usize << n;
    let a = Matrix::from_fn(size, size, |h, p| Pow::pow(&t_points[h], (size - p - 1) as u32))?;
    let b = Matrix::from_fn(size, size, |p, l| Pow::pow(&q(l as u64), p as u32))?;
    let m = a.mul(&b)?;
    let direct = Matrix::from_fn(size, size, |h, l| {
        (0..size).fold(BigRational::zero(), |acc, p| {
            acc + Pow::pow(&t_points[h], p as u32) * Pow::pow(&q(l as u64), (size - 1 - p) as u32)
        })
    })?;
    let (da, db, dm) = (a.determinant()?, b.determinant()?, m.determinant()?);
    let rank = m.rank();
    report.object("M", &m);
    report.object("det_A", fmt_rational_short(&da));
    report.object("det_B", fmt_rational_short(&db));
    report.object("det_M", fmt_rational_short(&dm));
    report.object("rank_M", rank);
    report.check("entries", m == direct, "M[h][l] = sum over p+q=2^n-1 of t_h^p l^q");
    report.check("det_A_nonzero", !da.is_zero(), fmt_rational_short(&da));
    report.check("det_B_nonzero", !db.is_zero(), fmt_rational_short(&db));
    report.check("det_product", dm == &da * &db, "det(M) = det(A) det(B)");
    report.check("det_M_nonzero", !dm.is_zero(), fmt_rational_short(&dm));
    report.check("full_rank", rank == size, format!("rank {rank} of {size}"));
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn eq1_small() {
        for n in 1..=2 {
            let r = coefficient_identity_check(n).unwrap();
            assert!(r.passed(), "{}", r.render_text());
        }
        let r = coefficient_identity_check(1).unwrap();
        assert_eq!(r.objects["coefficients"], json!(["S*T + 1", "S*T + S + 1"]));
    }

    #[test]
    fn vandermonde_n1() {
        let r = vandermonde_certificate(1, &default_points(1)).unwrap();
        assert!(r.passed());
        assert_eq!(r.objects["M"], json!([["0", "1"], ["1", "2"]]));
        assert_eq!(r.objects["det_M"], json!("-1"));
        assert_eq!(r.bounds["theorem1"]["approx"], json!("-1.586"));
    }

    #[test]
    fn vandermonde_guards() {
        assert_eq!(vandermonde_certificate(1, &[q(0)]), Err(Error::WrongPointCount { expected: 2, got: 1 }));
        assert_eq!(vandermonde_certificate(1, &[q(3), q(3)]), Err(Error::DuplicatePoints));
        let r = vandermonde_certificate(8, &[]).unwrap();
        assert_eq!(r.bounds["theorem1"]["exact"], json!("13"));
        assert!(r.passed());
    }
}
