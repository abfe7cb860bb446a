//! Exact field scalars: arbitrary-precision rationals and prime-field residues.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{MathError, MathResult};

/// The scalar field a value belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FieldTag {
    Q,
    Fp(u64),
}

impl FieldTag {
    pub fn characteristic(&self) -> u64 {
        match self {
            FieldTag::Q => 0,
            FieldTag::Fp(p) => *p,
        }
    }

    pub fn validate(&self) -> MathResult<()> {
        match self {
            FieldTag::Q => Ok(()),
            FieldTag::Fp(p) => {
                if is_prime_u64(*p) {
                    Ok(())
                } else {
                    Err(MathError::NotPrime(*p))
                }
            }
        }
    }
}

impl fmt::Display for FieldTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldTag::Q => write!(f, "Q"),
            FieldTag::Fp(p) => write!(f, "F_{p}"),
        }
    }
}

/// An exact element of Q or of F_p.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Scalar {
    Rat(BigRational),
    Mod { val: u64, prime: u64 },
}

impl Scalar {
    pub fn field(&self) -> FieldTag {
        match self {
            Scalar::Rat(_) => FieldTag::Q,
            Scalar::Mod { prime, .. } => FieldTag::Fp(*prime),
        }
    }

    pub fn zero(field: FieldTag) -> Scalar {
        Scalar::from_i64(field, 0)
    }

    pub fn one(field: FieldTag) -> Scalar {
        Scalar::from_i64(field, 1)
    }

    pub fn from_i64(field: FieldTag, n: i64) -> Scalar {
        match field {
            FieldTag::Q => Scalar::Rat(BigRational::from_integer(BigInt::from(n))),
            FieldTag::Fp(p) => Scalar::Mod {
                val: n.rem_euclid(p as i64) as u64,
                prime: p,
            },
        }
    }

    pub fn from_ratio(num: i64, den: i64) -> Scalar {
        Scalar::Rat(BigRational::new(BigInt::from(num), BigInt::from(den)))
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Rat(r) => r.is_zero(),
            Scalar::Mod { val, .. } => *val == 0,
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Scalar::Rat(r) => r.is_one(),
            Scalar::Mod { val, .. } => *val == 1,
        }
    }

    fn expect_same_field(&self, other: &Scalar) {
        assert_eq!(
            self.field(),
            other.field(),
            "scalar fields must match: {} vs {}",
            self.field(),
            other.field()
        );
    }

    pub fn add(&self, other: &Scalar) -> Scalar {
        self.expect_same_field(other);
        match (self, other) {
            (Scalar::Rat(a), Scalar::Rat(b)) => Scalar::Rat(a + b),
            (Scalar::Mod { val: a, prime }, Scalar::Mod { val: b, .. }) => Scalar::Mod {
                val: fp_add(*a, *b, *prime),
                prime: *prime,
            },
            _ => unreachable!(),
        }
    }

    pub fn sub(&self, other: &Scalar) -> Scalar {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Scalar) -> Scalar {
        self.expect_same_field(other);
        match (self, other) {
            (Scalar::Rat(a), Scalar::Rat(b)) => Scalar::Rat(a * b),
            (Scalar::Mod { val: a, prime }, Scalar::Mod { val: b, .. }) => Scalar::Mod {
                val: fp_mul(*a, *b, *prime),
                prime: *prime,
            },
            _ => unreachable!(),
        }
    }

    pub fn neg(&self) -> Scalar {
        match self {
            Scalar::Rat(a) => Scalar::Rat(-a),
            Scalar::Mod { val, prime } => Scalar::Mod {
                val: if *val == 0 { 0 } else { prime - val },
                prime: *prime,
            },
        }
    }

    pub fn inv(&self) -> MathResult<Scalar> {
        if self.is_zero() {
            return Err(MathError::DivisionByZero);
        }
        Ok(match self {
            Scalar::Rat(a) => Scalar::Rat(a.recip()),
            Scalar::Mod { val, prime } => Scalar::Mod {
                val: fp_inv(*val, *prime),
                prime: *prime,
            },
        })
    }

    pub fn div(&self, other: &Scalar) -> MathResult<Scalar> {
        Ok(self.mul(&other.inv()?))
    }

    /// Integer power, with negative exponents allowed for nonzero scalars.
    pub fn pow(&self, k: i64) -> MathResult<Scalar> {
        if k == 0 {
            return Ok(Scalar::one(self.field()));
        }
        let base = if k < 0 { self.inv()? } else { self.clone() };
        let mut acc = Scalar::one(self.field());
        let mut b = base;
        let mut e = k.unsigned_abs();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&b);
            }
            b = b.mul(&b.clone());
            e >>= 1;
        }
        Ok(acc)
    }

    /// Parse "num", "num/den" (over Q) or a decimal residue (over F_p).
    pub fn parse(field: FieldTag, s: &str) -> MathResult<Scalar> {
        let s = s.trim();
        match field {
            FieldTag::Q => BigRational::from_str(s)
                .map(Scalar::Rat)
                .map_err(|e| MathError::Parse(format!("bad rational {s:?}: {e}"))),
            FieldTag::Fp(p) => {
                let n = i128::from_str(s)
                    .map_err(|e| MathError::Parse(format!("bad residue {s:?}: {e}")))?;
                Ok(Scalar::Mod {
                    val: n.rem_euclid(p as i128) as u64,
                    prime: p,
                })
            }
        }
    }

    pub fn as_rational(&self) -> Option<&BigRational> {
        match self {
            Scalar::Rat(r) => Some(r),
            _ => None,
        }
    }

    /// Numeric order within one field; fields themselves compare by tag.
    pub fn canonical_cmp(&self, other: &Scalar) -> Ordering {
        match (self, other) {
            (Scalar::Rat(a), Scalar::Rat(b)) => a.cmp(b),
            (Scalar::Mod { val: a, .. }, Scalar::Mod { val: b, .. }) => a.cmp(b),
            _ => self.field().cmp(&other.field()),
        }
    }

    /// Magnitude comparison of rationals; prime-field residues compare by value.
    pub fn abs_cmp(&self, other: &Scalar) -> Ordering {
        match (self, other) {
            (Scalar::Rat(a), Scalar::Rat(b)) => a.abs().cmp(&b.abs()),
            _ => self.canonical_cmp(other),
        }
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Rat(r) => write!(f, "{r}"),
            Scalar::Mod { val, .. } => write!(f, "{val}"),
        }
    }
}

fn fp_add(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 + b as u128) % p as u128) as u64
}

fn fp_mul(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

fn fp_pow(mut a: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1u64 % p;
    a %= p;
    while e > 0 {
        if e & 1 == 1 {
            acc = fp_mul(acc, a, p);
        }
        a = fp_mul(a, a, p);
        e >>= 1;
    }
    acc
}

fn fp_inv(a: u64, p: u64) -> u64 {
    // extended Euclid on (a, p); a is nonzero mod p
    let (mut t, mut new_t): (i128, i128) = (0, 1);
    let (mut r, mut new_r): (i128, i128) = (p as i128, (a % p) as i128);
    while new_r != 0 {
        let q = r / new_r;
        (t, new_t) = (new_t, t - q * new_t);
        (r, new_r) = (new_r, r - q * new_r);
    }
    assert_eq!(r, 1, "{a} is not invertible mod {p}");
    t.rem_euclid(p as i128) as u64
}

/// Deterministic Miller-Rabin for u64.
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for &p in &[2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n == p {
            return true;
        }
        if n.is_multiple_of(p) {
            return false;
        }
    }
    let mut d = n - 1;
    let mut s = 0u32;
    while d.is_multiple_of(2) {
        d /= 2;
        s += 1;
    }
    'witness: for &a in &[2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = fp_pow(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = fp_mul(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Magnitude guard used when deciding whether an integer is small enough to factor.
pub fn bigint_to_u128(n: &BigInt) -> Option<u128> {
    n.abs().to_u128()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rational_arithmetic_is_exact() {
        let a = Scalar::from_ratio(1, 3);
        let b = Scalar::from_ratio(1, 6);
        assert_eq!(a.add(&b), Scalar::from_ratio(1, 2));
        assert_eq!(a.mul(&b), Scalar::from_ratio(1, 18));
        assert_eq!(a.sub(&a), Scalar::zero(FieldTag::Q));
        assert_eq!(a.div(&b).unwrap(), Scalar::from_i64(FieldTag::Q, 2));
    }

    #[test]
    fn prime_field_arithmetic() {
        let f = FieldTag::Fp(5);
        let a = Scalar::from_i64(f, 3);
        let b = Scalar::from_i64(f, 4);
        assert_eq!(a.add(&b), Scalar::from_i64(f, 2));
        assert_eq!(a.mul(&b), Scalar::from_i64(f, 2));
        assert_eq!(a.inv().unwrap(), Scalar::from_i64(f, 2));
        assert_eq!(a.neg(), Scalar::from_i64(f, 2));
    }

    #[test]
    fn zero_has_no_inverse() {
        assert_eq!(
            Scalar::zero(FieldTag::Q).inv(),
            Err(MathError::DivisionByZero)
        );
    }

    #[test]
    fn negative_powers() {
        let g = Scalar::from_ratio(1, 2);
        assert_eq!(g.pow(-3).unwrap(), Scalar::from_i64(FieldTag::Q, 8));
        assert_eq!(g.pow(0).unwrap(), Scalar::one(FieldTag::Q));
    }

    #[test]
    fn parsing_round_trips() {
        let s = Scalar::parse(FieldTag::Q, "-3/4").unwrap();
        assert_eq!(s, Scalar::from_ratio(-3, 4));
        assert_eq!(s.to_string(), "-3/4");
        let t = Scalar::parse(FieldTag::Fp(7), "-1").unwrap();
        assert_eq!(t, Scalar::from_i64(FieldTag::Fp(7), 6));
    }

    #[test]
    fn primality() {
        assert!(is_prime_u64(2));
        assert!(is_prime_u64(3));
        assert!(is_prime_u64(1_000_003));
        assert!(!is_prime_u64(1));
        assert!(!is_prime_u64(91));
        assert!(FieldTag::Fp(4).validate().is_err());
    }
}
