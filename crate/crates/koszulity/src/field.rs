//! Exact scalars: arbitrary-precision rationals and odd prime fields.
//!
//! The symbolic layer always carries `BigRational` coefficients; a concrete
//! `FieldKind` is applied only when a window is materialized into matrices.
//! Prime moduli are restricted to (2^20, 2^30) so products fit in u128 and
//! small integer coefficients coming from the constructions stay nonzero.

use crate::error::{Error, Result};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum FieldKind {
    Rational,
    Fp(u64),
}

impl FieldKind {
    pub fn validate(self) -> Result<()> {
        match self {
            FieldKind::Rational => Ok(()),
            FieldKind::Fp(p) => {
                if p <= (1 << 20) || p >= (1 << 30) {
                    return Err(Error::Field(format!(
                        "prime modulus {p} outside (2^20, 2^30)"
                    )));
                }
                if !is_prime_u64(p) {
                    return Err(Error::Field(format!("{p} is not prime")));
                }
                Ok(())
            }
        }
    }

    /// Map an exact rational into this field. Fails if the denominator
    /// vanishes mod p, which cannot happen for denominators below 2^20.
    pub fn scalar(self, q: &BigRational) -> Result<Scalar> {
        match self {
            FieldKind::Rational => Ok(Scalar::Rat(q.clone())),
            FieldKind::Fp(p) => {
                let num = mod_bigint(q.numer(), p);
                let den = mod_bigint(q.denom(), p);
                let den_inv = inv_mod(den, p).ok_or_else(|| {
                    Error::Field(format!("denominator of {q} vanishes mod {p}"))
                })?;
                Ok(Scalar::Fp { v: mul_mod(num, den_inv, p), p })
            }
        }
    }

    pub fn zero(self) -> Scalar {
        match self {
            FieldKind::Rational => Scalar::Rat(BigRational::zero()),
            FieldKind::Fp(p) => Scalar::Fp { v: 0, p },
        }
    }

    pub fn one(self) -> Scalar {
        match self {
            FieldKind::Rational => Scalar::Rat(BigRational::one()),
            FieldKind::Fp(p) => Scalar::Fp { v: 1, p },
        }
    }
}

impl std::fmt::Display for FieldKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            FieldKind::Rational => write!(f, "rational"),
            FieldKind::Fp(p) => write!(f, "fp:{p}"),
        }
    }
}

/// An element of the active field. Mixed-variant arithmetic is a bug in the
/// caller, so it panics rather than returning an error.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Scalar {
    Rat(BigRational),
    Fp { v: u64, p: u64 },
}

impl Scalar {
    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Rat(q) => q.is_zero(),
            Scalar::Fp { v, .. } => *v == 0,
        }
    }

    pub fn add(&self, rhs: &Scalar) -> Scalar {
        match (self, rhs) {
            (Scalar::Rat(a), Scalar::Rat(b)) => Scalar::Rat(a + b),
            (Scalar::Fp { v: a, p }, Scalar::Fp { v: b, p: p2 }) => {
                assert_eq!(p, p2, "mixed moduli");
                Scalar::Fp { v: add_mod(*a, *b, *p), p: *p }
            }
            _ => panic!("mixed scalar variants"),
        }
    }

    pub fn sub(&self, rhs: &Scalar) -> Scalar {
        self.add(&rhs.neg())
    }

    pub fn mul(&self, rhs: &Scalar) -> Scalar {
        match (self, rhs) {
            (Scalar::Rat(a), Scalar::Rat(b)) => Scalar::Rat(a * b),
            (Scalar::Fp { v: a, p }, Scalar::Fp { v: b, p: p2 }) => {
                assert_eq!(p, p2, "mixed moduli");
                Scalar::Fp { v: mul_mod(*a, *b, *p), p: *p }
            }
            _ => panic!("mixed scalar variants"),
        }
    }

    pub fn neg(&self) -> Scalar {
        match self {
            Scalar::Rat(a) => Scalar::Rat(-a),
            Scalar::Fp { v, p } => Scalar::Fp { v: if *v == 0 { 0 } else { p - v }, p: *p },
        }
    }

    pub fn inv(&self) -> Option<Scalar> {
        match self {
            Scalar::Rat(a) => {
                if a.is_zero() {
                    None
                } else {
                    Some(Scalar::Rat(a.recip()))
                }
            }
            Scalar::Fp { v, p } => inv_mod(*v, *p).map(|v| Scalar::Fp { v, p: *p }),
        }
    }

    pub fn div(&self, rhs: &Scalar) -> Scalar {
        self.mul(&rhs.inv().expect("division by zero"))
    }

    /// Size proxy used for pivot selection: total bit length of numerator and
    /// denominator for rationals, constant for prime-field elements.
    pub fn bit_size(&self) -> u64 {
        match self {
            Scalar::Rat(q) => q.numer().bits() + q.denom().bits(),
            Scalar::Fp { .. } => 1,
        }
    }
}

pub fn q_from_i64(v: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(v))
}

fn mod_bigint(x: &BigInt, p: u64) -> u64 {
    let m = BigInt::from(p);
    let r = ((x % &m) + &m) % &m;
    let (_, digits) = r.to_u64_digits();
    match digits.len() {
        0 => 0,
        1 => digits[0],
        _ => unreachable!("residue exceeds modulus"),
    }
}

fn add_mod(a: u64, b: u64, p: u64) -> u64 {
    let s = a as u128 + b as u128;
    (s % p as u128) as u64
}

fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

fn pow_mod(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1u64;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_mod(acc, b, p);
        }
        b = mul_mod(b, b, p);
        e >>= 1;
    }
    acc
}

fn inv_mod(a: u64, p: u64) -> Option<u64> {
    if a % p == 0 {
        return None;
    }
    Some(pow_mod(a, p - 2, p))
}

/// Deterministic Miller–Rabin; the witness set below decides primality for
/// every u64.
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for q in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n == q {
            return true;
        }
        if n % q == 0 {
            return false;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 0..s - 1 {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn primality_known_values() {
        assert!(is_prime_u64(1_048_583)); // first prime above 2^20
        assert!(is_prime_u64(1_073_741_789)); // large prime below 2^30
        assert!(!is_prime_u64(1_048_585));
        assert!(!is_prime_u64(3_215_031_751)); // strong pseudoprime to bases 2,3,5,7
    }

    #[test]
    fn field_kind_validation() {
        assert!(FieldKind::Rational.validate().is_ok());
        assert!(FieldKind::Fp(1_048_583).validate().is_ok());
        assert!(FieldKind::Fp(65_537).validate().is_err()); // too small
        assert!(FieldKind::Fp(1_048_584).validate().is_err()); // composite
    }

    #[test]
    fn rational_canonical_form() {
        let q = BigRational::new(BigInt::from(4), BigInt::from(-6));
        assert_eq!(q.numer(), &BigInt::from(-2));
        assert_eq!(q.denom(), &BigInt::from(3));
    }

    #[test]
    fn fp_arithmetic_round_trip() {
        let p = 1_048_583u64;
        let k = FieldKind::Fp(p);
        let a = k.scalar(&BigRational::new(BigInt::from(2), BigInt::from(3))).unwrap();
        let three = k.scalar(&q_from_i64(3)).unwrap();
        let two = k.scalar(&q_from_i64(2)).unwrap();
        assert_eq!(a.mul(&three), two);
        assert!(a.sub(&a).is_zero());
        assert_eq!(a.mul(&a.inv().unwrap()), k.one());
    }
}
