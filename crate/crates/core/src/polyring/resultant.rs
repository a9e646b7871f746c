use super::matrix::bareiss_determinant;
use super::Poly;
use crate::error::{Error, Result};

/// Sylvester matrix of `p` and `q` with respect to `var`. The `deg q` rows
/// holding shifted coefficients of `p` come first.
pub fn sylvester_matrix(p: &Poly, q: &Poly, var: &str) -> Result<Vec<Vec<Poly>>> {
    if p.is_zero() || q.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let (m, n) = (p.degree_in(var) as usize, q.degree_in(var) as usize);
    if m == 0 || n == 0 {
        return Err(Error::NonPositiveDegree(var.to_string()));
    }
    let coeffs = |f: &Poly, d: usize| -> Vec<Poly> {
        (0..=d).rev().map(|e| f.coefficient_of(&[(var, e as u32)])).collect()
    };
    let (cp, cq) = (coeffs(p, m), coeffs(q, n));
    let size = m + n;
    let mut rows = Vec::with_capacity(size);
    for shift in 0..n {
        let mut row = vec![Poly::zero(); size];
        row[shift..shift + m + 1].clone_from_slice(&cp);
        rows.push(row);
    }
    for shift in 0..m {
        let mut row = vec![Poly::zero(); size];
        row[shift..shift + n + 1].clone_from_slice(&cq);
        rows.push(row);
    }
    Ok(rows)
}

/// `Res_var(p, q)` as the determinant of the Sylvester matrix, computed by
/// fraction-free elimination over the polynomial ring.
pub fn resultant(p: &Poly, q: &Poly, var: &str) -> Result<Poly> {
    bareiss_determinant(sylvester_matrix(p, q, var)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> Poly {
        s.parse().unwrap()
    }

    #[test]
    fn linear_case_sign_convention() {
        assert_eq!(resultant(&p("X - a"), &p("X - b"), "X").unwrap(), p("a - b"));
    }

    #[test]
    fn quadratic_against_root_substitution() {
        // roots of X^2 - 1 are +1 and -1: (Y - 1)(Y + 1)
        assert_eq!(resultant(&p("X^2 - 1"), &p("Y - X"), "X").unwrap(), p("Y^2 - 1"));
    }

    #[test]
    fn degenerate_inputs() {
        assert_eq!(resultant(&p("0"), &p("X"), "X"), Err(Error::ZeroPolynomial));
        assert_eq!(resultant(&p("Y"), &p("X"), "X"), Err(Error::NonPositiveDegree("X".into())));
    }

    #[test]
    fn multiplicative_in_first_argument() {
        let (a, b, r) = (p("X^2 + s*X + 1"), p("X - t"), p("X^3 - u"));
        let lhs = resultant(&(&a * &b), &r, "X").unwrap();
        let rhs = &resultant(&a, &r, "X").unwrap() * &resultant(&b, &r, "X").unwrap();
        assert_eq!(lhs, rhs);
    }
}
