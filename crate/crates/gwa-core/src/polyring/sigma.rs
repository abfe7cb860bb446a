//! The two normalized automorphisms of F[h]: `h -> h - c` and `h -> gamma*h`.

use std::fmt;

use crate::error::{MathError, MathResult};
use crate::polyring::poly::Poly;
use crate::polyring::scalar::{FieldTag, Scalar};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Sigma {
    /// `sigma(h) = h - shift`
    Classical { shift: Scalar },
    /// `sigma(h) = gamma * h`
    Quantum { gamma: Scalar },
}

impl Sigma {
    pub fn field(&self) -> FieldTag {
        match self {
            Sigma::Classical { shift } => shift.field(),
            Sigma::Quantum { gamma } => gamma.field(),
        }
    }

    pub fn validate(&self, field: FieldTag) -> MathResult<()> {
        if self.field() != field {
            return Err(MathError::FieldMismatch);
        }
        if let Sigma::Quantum { gamma } = self {
            if gamma.is_zero() {
                return Err(MathError::Invalid("gamma must be nonzero".into()));
            }
        }
        Ok(())
    }

    /// True for `c = 0` or `gamma = 1`, where sigma fixes everything.
    pub fn is_identity(&self) -> bool {
        match self {
            Sigma::Classical { shift } => shift.is_zero(),
            Sigma::Quantum { gamma } => gamma.is_one(),
        }
    }

    /// Apply `sigma^k`: classical substitutes `h -> h - k*shift`, quantum
    /// substitutes `h -> gamma^k * h`.
    pub fn apply(&self, p: &Poly, k: i64) -> Poly {
        if k == 0 || p.is_constant() {
            return p.clone();
        }
        let field = p.field();
        match self {
            Sigma::Classical { shift } => {
                let total = shift.mul(&Scalar::from_i64(field, k));
                if total.is_zero() {
                    return p.clone();
                }
                let inner = Poly::new(field, vec![total.neg(), Scalar::one(field)]);
                p.compose(&inner)
            }
            Sigma::Quantum { gamma } => {
                let gk = gamma.pow(k).expect("gamma is nonzero");
                let mut power = Scalar::one(field);
                let coeffs = p
                    .coeffs()
                    .iter()
                    .map(|c| {
                        let out = c.mul(&power);
                        power = power.mul(&gk);
                        out
                    })
                    .collect();
                Poly::new(field, coeffs)
            }
        }
    }

    /// Order of sigma as a ring automorphism, `None` when infinite.
    pub fn order(&self) -> Option<u64> {
        match self {
            Sigma::Classical { shift } => {
                if shift.is_zero() {
                    Some(1)
                } else {
                    match shift.field() {
                        FieldTag::Q => None,
                        FieldTag::Fp(p) => Some(p),
                    }
                }
            }
            Sigma::Quantum { gamma } => multiplicative_order(gamma),
        }
    }
}

impl fmt::Display for Sigma {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Sigma::Classical { shift } => write!(f, "h -> h - ({shift})"),
            Sigma::Quantum { gamma } => write!(f, "h -> ({gamma})*h"),
        }
    }
}

/// Multiplicative order of a nonzero scalar, `None` when infinite.
pub fn multiplicative_order(u: &Scalar) -> Option<u64> {
    match u {
        Scalar::Rat(r) => {
            use num_traits::One;
            if r.is_one() {
                Some(1)
            } else if (-r).is_one() {
                Some(2)
            } else {
                // +-1 are the only rational roots of unity
                None
            }
        }
        Scalar::Mod { val, prime } => {
            assert!(*val != 0, "order of zero is undefined");
            // Fermat bounds the order by prime - 1
            let p = *prime as u128;
            let mut acc = *val as u128 % p;
            let mut k = 1u64;
            while acc != 1 {
                acc = acc * (*val as u128) % p;
                k += 1;
            }
            Some(k)
        }
    }
}
