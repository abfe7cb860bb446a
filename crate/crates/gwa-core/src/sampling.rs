//! Deterministic sampling for randomized checks. A small explicit generator
//! keeps report output byte-stable across toolchain versions; the seed is
//! always supplied by the caller and recorded in reports.

use crate::factored::FactoredElement;
use crate::gwa::{FactorSpec, GwaSpec};
use crate::polyring::{FieldTag, Poly, Scalar, Sigma};

/// SplitMix64: tiny, seedable, and stable.
#[derive(Clone, Debug)]
pub struct Rng {
    state: u64,
}

impl Rng {
    pub fn new(seed: u64) -> Rng {
        Rng { state: seed }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9e3779b97f4a7c15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
        z ^ (z >> 31)
    }

    /// Uniform in `[0, bound)`.
    pub fn below(&mut self, bound: u64) -> u64 {
        assert!(bound > 0);
        self.next_u64() % bound
    }

    /// Uniform in `[lo, hi]`.
    pub fn range_i64(&mut self, lo: i64, hi: i64) -> i64 {
        lo + self.below((hi - lo + 1) as u64) as i64
    }

    pub fn chance(&mut self, num: u64, den: u64) -> bool {
        self.below(den) < num
    }
}

/// A random scalar with small integer numerator (and denominator 1).
pub fn random_scalar(rng: &mut Rng, field: FieldTag, height: i64) -> Scalar {
    Scalar::from_i64(field, rng.range_i64(-height, height))
}

pub fn random_nonzero_scalar(rng: &mut Rng, field: FieldTag, height: i64) -> Scalar {
    loop {
        let s = random_scalar(rng, field, height);
        if !s.is_zero() {
            return s;
        }
    }
}

/// A random polynomial of exactly the given degree (nonzero leading term).
pub fn random_poly(rng: &mut Rng, field: FieldTag, degree: usize, height: i64) -> Poly {
    let mut coeffs: Vec<Scalar> = (0..degree)
        .map(|_| random_scalar(rng, field, height))
        .collect();
    coeffs.push(random_nonzero_scalar(rng, field, height));
    Poly::new(field, coeffs)
}

/// A random monic linear polynomial `h + c`.
pub fn random_monic_linear(rng: &mut Rng, field: FieldTag, height: i64) -> Poly {
    Poly::new(
        field,
        vec![random_scalar(rng, field, height), Scalar::one(field)],
    )
}

/// A random classical characteristic-zero algebra with linear factors,
/// nonzero integer shift, and bounded factor count.
pub fn random_classical_spec(rng: &mut Rng, max_factors: usize, squarefree: bool) -> GwaSpec {
    let field = FieldTag::Q;
    let shift = loop {
        let c = rng.range_i64(-3, 3);
        if c != 0 {
            break Scalar::from_i64(field, c);
        }
    };
    let count = 1 + rng.below(max_factors as u64) as usize;
    let mut factors: Vec<FactorSpec> = Vec::new();
    let mut total = 0usize;
    while total < count {
        let poly = random_monic_linear(rng, field, 6);
        let mult = if squarefree {
            1
        } else {
            1 + rng.below(2) as u32
        };
        let mult = mult.min((count - total) as u32);
        total += mult as usize;
        factors.push(FactorSpec::checked(poly, mult));
    }
    GwaSpec::new(
        field,
        Sigma::Classical { shift },
        random_nonzero_scalar(rng, field, 4),
        factors,
    )
    .expect("linear factors are irreducible")
}

/// A random sub-multiset of the factors of `a`, monic (unit 1).
pub fn random_divisor(rng: &mut Rng, spec: &GwaSpec) -> FactoredElement {
    let mut selection = FactoredElement::one(spec.field());
    for (factor, mult) in spec.a().factors() {
        let take = rng.below(*mult as u64 + 1) as u32;
        if take > 0 {
            selection = selection.mul(
                &FactoredElement::new(Scalar::one(spec.field()), vec![(factor.clone(), take)])
                    .expect("monic factor"),
            );
        }
    }
    selection
}
