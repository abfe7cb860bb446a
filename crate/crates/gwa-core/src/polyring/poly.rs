//! Dense univariate polynomials with exact coefficients, constant term first.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::error::{MathError, MathResult};
use crate::polyring::scalar::{FieldTag, Scalar};

/// A polynomial in one variable over Q or F_p.
///
/// `coeffs[i]` is the coefficient of `h^i`; trailing zeros are stripped, so the
/// zero polynomial has an empty coefficient vector.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Poly {
    field: FieldTag,
    coeffs: Vec<Scalar>,
}

impl Poly {
    pub fn new(field: FieldTag, mut coeffs: Vec<Scalar>) -> Poly {
        debug_assert!(coeffs.iter().all(|c| c.field() == field));
        while coeffs.last().is_some_and(Scalar::is_zero) {
            coeffs.pop();
        }
        Poly { field, coeffs }
    }

    pub fn zero(field: FieldTag) -> Poly {
        Poly {
            field,
            coeffs: Vec::new(),
        }
    }

    pub fn one(field: FieldTag) -> Poly {
        Poly::constant(Scalar::one(field))
    }

    pub fn constant(c: Scalar) -> Poly {
        Poly::new(c.field(), vec![c])
    }

    /// The variable h.
    pub fn var(field: FieldTag) -> Poly {
        Poly::new(field, vec![Scalar::zero(field), Scalar::one(field)])
    }

    pub fn monomial(field: FieldTag, coeff: Scalar, deg: usize) -> Poly {
        let mut coeffs = vec![Scalar::zero(field); deg];
        coeffs.push(coeff);
        Poly::new(field, coeffs)
    }

    /// Convenience constructor from integer coefficients, constant first.
    pub fn from_int_coeffs(field: FieldTag, ints: &[i64]) -> Poly {
        Poly::new(
            field,
            ints.iter().map(|&n| Scalar::from_i64(field, n)).collect(),
        )
    }

    pub fn field(&self) -> FieldTag {
        self.field
    }

    pub fn coeffs(&self) -> &[Scalar] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        if self.is_zero() {
            None
        } else {
            Some(self.coeffs.len() - 1)
        }
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    pub fn coeff(&self, i: usize) -> Scalar {
        self.coeffs
            .get(i)
            .cloned()
            .unwrap_or_else(|| Scalar::zero(self.field))
    }

    pub fn leading(&self) -> Option<&Scalar> {
        self.coeffs.last()
    }

    pub fn is_monic(&self) -> bool {
        self.leading().is_some_and(Scalar::is_one)
    }

    pub fn eval(&self, x: &Scalar) -> Scalar {
        let mut acc = Scalar::zero(self.field);
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(x).add(c);
        }
        acc
    }

    /// Substitute another polynomial for the variable (Horner form).
    pub fn compose(&self, inner: &Poly) -> Poly {
        let mut acc = Poly::zero(self.field);
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * inner) + &Poly::constant(c.clone());
        }
        acc
    }

    fn same_field(&self, other: &Poly) -> MathResult<()> {
        if self.field == other.field {
            Ok(())
        } else {
            Err(MathError::FieldMismatch)
        }
    }

    pub fn try_add(&self, other: &Poly) -> MathResult<Poly> {
        self.same_field(other)?;
        let n = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..n).map(|i| self.coeff(i).add(&other.coeff(i))).collect();
        Ok(Poly::new(self.field, coeffs))
    }

    pub fn try_sub(&self, other: &Poly) -> MathResult<Poly> {
        self.same_field(other)?;
        let n = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..n).map(|i| self.coeff(i).sub(&other.coeff(i))).collect();
        Ok(Poly::new(self.field, coeffs))
    }

    pub fn try_mul(&self, other: &Poly) -> MathResult<Poly> {
        self.same_field(other)?;
        if self.is_zero() || other.is_zero() {
            return Ok(Poly::zero(self.field));
        }
        let mut coeffs = vec![Scalar::zero(self.field); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                coeffs[i + j] = coeffs[i + j].add(&a.mul(b));
            }
        }
        Ok(Poly::new(self.field, coeffs))
    }

    pub fn scale(&self, s: &Scalar) -> Poly {
        Poly::new(self.field, self.coeffs.iter().map(|c| c.mul(s)).collect())
    }

    /// Exact Euclidean division: returns `(quotient, remainder)` with
    /// `deg(remainder) < deg(divisor)`.
    pub fn divmod(&self, divisor: &Poly) -> MathResult<(Poly, Poly)> {
        self.same_field(divisor)?;
        if divisor.is_zero() {
            return Err(MathError::DivisionByZero);
        }
        let dd = divisor.coeffs.len() - 1;
        let lead_inv = divisor.leading().unwrap().inv()?;
        let mut rem = self.clone();
        let mut quot = vec![Scalar::zero(self.field); self.coeffs.len().saturating_sub(dd)];
        while !rem.is_zero() && rem.coeffs.len() > dd {
            let shift = rem.coeffs.len() - 1 - dd;
            let factor = rem.leading().unwrap().mul(&lead_inv);
            quot[shift] = factor.clone();
            let t = Poly::monomial(self.field, factor, shift).try_mul(divisor)?;
            rem = rem.try_sub(&t)?;
        }
        Ok((Poly::new(self.field, quot), rem))
    }

    /// Whether `self` divides `other` exactly. The zero polynomial divides only zero.
    pub fn divides(&self, other: &Poly) -> bool {
        if self.is_zero() {
            return other.is_zero();
        }
        match other.divmod(self) {
            Ok((_, r)) => r.is_zero(),
            Err(_) => false,
        }
    }

    pub fn exact_div(&self, divisor: &Poly) -> Option<Poly> {
        match self.divmod(divisor) {
            Ok((q, r)) if r.is_zero() => Some(q),
            _ => None,
        }
    }

    /// Monic greatest common divisor; `gcd(0, 0) = 0`.
    pub fn gcd(&self, other: &Poly) -> MathResult<Poly> {
        self.same_field(other)?;
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let (_, r) = a.divmod(&b)?;
            a = b;
            b = r;
        }
        if a.is_zero() {
            Ok(a)
        } else {
            Ok(a.normalize_monic()?.1)
        }
    }

    /// Split off the leading unit: returns `(u, m)` with `m` monic and `self = u * m`.
    pub fn normalize_monic(&self) -> MathResult<(Scalar, Poly)> {
        let lead = self.leading().ok_or(MathError::ZeroPolynomial)?.clone();
        let inv = lead.inv()?;
        Ok((lead, self.scale(&inv)))
    }

    pub fn pow(&self, e: u32) -> Poly {
        let mut acc = Poly::one(self.field);
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    pub fn derivative(&self) -> Poly {
        if self.coeffs.len() <= 1 {
            return Poly::zero(self.field);
        }
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| c.mul(&Scalar::from_i64(self.field, i as i64)))
            .collect();
        Poly::new(self.field, coeffs)
    }

    /// Deterministic total order: field, then degree, then coefficients from the
    /// constant term up.
    pub fn canonical_cmp(&self, other: &Poly) -> Ordering {
        self.field
            .cmp(&other.field)
            .then(self.coeffs.len().cmp(&other.coeffs.len()))
            .then_with(|| {
                for (a, b) in self.coeffs.iter().zip(&other.coeffs) {
                    let ord = a.canonical_cmp(b);
                    if ord != Ordering::Equal {
                        return ord;
                    }
                }
                Ordering::Equal
            })
    }
}

impl PartialOrd for Poly {
    fn partial_cmp(&self, other: &Poly) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Poly {
    fn cmp(&self, other: &Poly) -> Ordering {
        self.canonical_cmp(other)
    }
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        self.try_add(rhs).expect("field mismatch in +")
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        self.try_sub(rhs).expect("field mismatch in -")
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        self.try_mul(rhs).expect("field mismatch in *")
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly::new(self.field, self.coeffs.iter().map(Scalar::neg).collect())
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let cs = c.to_string();
            let (sign, mag) = match cs.strip_prefix('-') {
                Some(rest) => ("-", rest.to_string()),
                None => ("+", cs),
            };
            if first {
                if sign == "-" {
                    write!(f, "-")?;
                }
                first = false;
            } else {
                write!(f, " {sign} ")?;
            }
            match i {
                0 => write!(f, "{mag}")?,
                _ => {
                    if mag != "1" {
                        write!(f, "{mag}*")?;
                    }
                    if i == 1 {
                        write!(f, "h")?;
                    } else {
                        write!(f, "h^{i}")?;
                    }
                }
            }
        }
        Ok(())
    }
}
