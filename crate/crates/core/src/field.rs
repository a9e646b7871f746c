//! Coefficient fields used for evaluation: exact rationals and prime fields.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use thiserror::Error;

/// Default modulus for fingerprinting: the Mersenne prime 2^31 - 1.
pub const DEFAULT_MODULUS: u64 = 2_147_483_647;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FieldError {
    #[error("modulus {0} is not prime")]
    ModulusNotPrime(u64),
    #[error("denominator {denominator} vanishes modulo {modulus}")]
    DenominatorVanishes { denominator: String, modulus: u64 },
}

/// A field in which circuits and polynomials can be evaluated.
pub trait Field {
    type Elem: Clone + PartialEq + fmt::Debug;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn from_rational(&self, q: &BigRational) -> Result<Self::Elem, FieldError>;

    fn pow(&self, base: &Self::Elem, mut exp: u32) -> Self::Elem {
        let mut acc = self.one();
        let mut sq = base.clone();
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul(&acc, &sq);
            }
            exp >>= 1;
            if exp > 0 {
                sq = self.mul(&sq, &sq);
            }
        }
        acc
    }
}

/// The field Q with arbitrary precision numerators and denominators.
#[derive(Debug, Clone, Copy, Default)]
pub struct Rationals;

impl Field for Rationals {
    type Elem = BigRational;

    fn zero(&self) -> BigRational {
        BigRational::zero()
    }
    fn one(&self) -> BigRational {
        BigRational::one()
    }
    fn add(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a + b
    }
    fn sub(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a - b
    }
    fn mul(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a * b
    }
    fn from_rational(&self, q: &BigRational) -> Result<BigRational, FieldError> {
        Ok(q.clone())
    }
}

/// Z/p for a prime p < 2^63.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PrimeField {
    p: u64,
}

impl PrimeField {
    pub fn new(p: u64) -> Result<Self, FieldError> {
        if p >= 1 << 63 || !is_prime_u64(p) {
            return Err(FieldError::ModulusNotPrime(p));
        }
        Ok(PrimeField { p })
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    pub fn reduce_int(&self, n: &BigInt) -> u64 {
        let m = BigInt::from(self.p);
        n.mod_floor(&m).to_u64().expect("residue fits in u64")
    }

    pub fn inv(&self, a: u64) -> Option<u64> {
        if a % self.p == 0 {
            return None;
        }
        Some(powmod(a, self.p - 2, self.p))
    }
}

impl Field for PrimeField {
    type Elem = u64;

    fn zero(&self) -> u64 {
        0
    }
    fn one(&self) -> u64 {
        1
    }
    fn add(&self, a: &u64, b: &u64) -> u64 {
        ((*a as u128 + *b as u128) % self.p as u128) as u64
    }
    fn sub(&self, a: &u64, b: &u64) -> u64 {
        ((*a as u128 + self.p as u128 - *b as u128) % self.p as u128) as u64
    }
    fn mul(&self, a: &u64, b: &u64) -> u64 {
        mulmod(*a, *b, self.p)
    }
    fn from_rational(&self, q: &BigRational) -> Result<u64, FieldError> {
        let num = self.reduce_int(q.numer());
        let den = self.reduce_int(q.denom());
        let inv = self.inv(den).ok_or_else(|| FieldError::DenominatorVanishes {
            denominator: q.denom().to_string(),
            modulus: self.p,
        })?;
        Ok(mulmod(num, inv, self.p))
    }
}

fn mulmod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn powmod(base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1u64;
    let mut sq = base % m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mulmod(acc, sq, m);
        }
        sq = mulmod(sq, sq, m);
        exp >>= 1;
    }
    acc
}

/// Deterministic Miller-Rabin; the witness set is exact for all 64-bit inputs.
pub fn is_prime_u64(n: u64) -> bool {
    const WITNESSES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    if n < 2 {
        return false;
    }
    for &w in &WITNESSES {
        if n % w == 0 {
            return n == w;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    'outer: for &a in &WITNESSES {
        let mut x = powmod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mulmod(x, x, n);
            if x == n - 1 {
                continue 'outer;
            }
        }
        return false;
    }
    true
}

/// Formats a rational as `num/den` in lowest terms with a positive denominator.
pub fn fmt_rational(q: &BigRational) -> String {
    format!("{}/{}", q.numer(), q.denom())
}

/// Formats integers without a denominator, everything else as `num/den`.
pub fn fmt_rational_short(q: &BigRational) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        fmt_rational(q)
    }
}

/// Parses `a`, `-a` or `a/b` with integer `a`, `b` (b nonzero). No decimals.
pub fn parse_rational(s: &str) -> Option<BigRational> {
    let s = s.trim();
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let num: BigInt = parse_int(num)?;
    let den: BigInt = parse_int(den)?;
    if den.is_zero() {
        return None;
    }
    Some(BigRational::new(num, den))
}

fn parse_int(s: &str) -> Option<BigInt> {
    let digits = s.strip_prefix('-').or_else(|| s.strip_prefix('+')).unwrap_or(s);
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    s.parse().ok()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn primality() {
        assert!(is_prime_u64(DEFAULT_MODULUS));
        assert!(is_prime_u64(2));
        assert!(!is_prime_u64(1));
        assert!(!is_prime_u64(561));
        assert!(!is_prime_u64(3_215_031_751));
        assert!(is_prime_u64(18_446_744_073_709_551_557));
    }

    #[test]
    fn composite_modulus_rejected() {
        assert_eq!(PrimeField::new(15), Err(FieldError::ModulusNotPrime(15)));
    }

    #[test]
    fn rational_reduction_mod_p() {
        let f = PrimeField::new(7).unwrap();
        // 1/2 = 4 mod 7
        assert_eq!(f.from_rational(&q(1, 2)).unwrap(), 4);
        assert_eq!(f.from_rational(&q(-1, 1)).unwrap(), 6);
        assert!(matches!(
            f.from_rational(&q(1, 14)),
            Err(FieldError::DenominatorVanishes { .. })
        ));
    }

    #[test]
    fn parse_and_format() {
        assert_eq!(parse_rational("-6/4"), Some(q(-3, 2)));
        assert_eq!(parse_rational("5"), Some(q(5, 1)));
        assert_eq!(parse_rational("1/0"), None);
        assert_eq!(parse_rational("0.5"), None);
        assert_eq!(fmt_rational(&q(6, -4)), "-3/2");
        assert_eq!(fmt_rational(&q(2, 1)), "2/1");
        assert_eq!(fmt_rational_short(&q(2, 1)), "2");
    }
}
