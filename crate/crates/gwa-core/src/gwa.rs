//! The algebra descriptor `A = F[h](sigma, a)` and the sigma-dynamics on
//! irreducibles: orbit shifts, orbit sizes, ring-level simplicity and the
//! center report.

use std::cmp::Ordering;
use std::fmt;

use crate::error::{MathError, MathResult};
use crate::factored::FactoredElement;
use crate::polyring::{
    is_irreducible, multiplicative_order, FieldTag, Irreducibility, Poly, Scalar, Sigma,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OrbitSize {
    Finite(u64),
    Infinite,
}

/// One declared irreducible factor of `a`.
#[derive(Clone, Debug)]
pub struct FactorSpec {
    pub poly: Poly,
    pub mult: u32,
    /// Trust the factor even when the irreducibility test returns unverified.
    pub asserted: bool,
}

impl FactorSpec {
    pub fn checked(poly: Poly, mult: u32) -> FactorSpec {
        FactorSpec {
            poly,
            mult,
            asserted: false,
        }
    }
}

/// The generalized Weyl algebra descriptor: base field, automorphism, and the
/// central element `a` in factored form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GwaSpec {
    field: FieldTag,
    sigma: Sigma,
    a: FactoredElement,
    a_dense: Poly,
    degenerate: bool,
    asserted_factors: bool,
}

impl GwaSpec {
    pub fn new(
        field: FieldTag,
        sigma: Sigma,
        unit: Scalar,
        factors: Vec<FactorSpec>,
    ) -> MathResult<GwaSpec> {
        field.validate()?;
        sigma.validate(field)?;
        if unit.field() != field {
            return Err(MathError::FieldMismatch);
        }
        let mut asserted_factors = false;
        for f in &factors {
            if f.poly.field() != field {
                return Err(MathError::FieldMismatch);
            }
            if f.poly.is_constant() {
                return Err(MathError::Invalid(format!(
                    "factor {} of a must be nonconstant",
                    f.poly
                )));
            }
            match is_irreducible(&f.poly)? {
                Irreducibility::Yes => {}
                Irreducibility::No => {
                    return Err(MathError::NotIrreducible {
                        factor: f.poly.to_string(),
                        status: "reducible".into(),
                    })
                }
                Irreducibility::Unverified => {
                    if f.asserted {
                        asserted_factors = true;
                    } else {
                        return Err(MathError::NotIrreducible {
                            factor: f.poly.to_string(),
                            status: "unverified; pass asserted=true to trust it".into(),
                        });
                    }
                }
            }
        }
        let a = FactoredElement::new(
            unit,
            factors.into_iter().map(|f| (f.poly, f.mult)).collect(),
        )?;
        Ok(Self::assemble(field, sigma, a, asserted_factors))
    }

    /// Build a spec whose factors are already known irreducible (for example
    /// sigma-shifts of verified factors), skipping the irreducibility pass.
    pub fn new_trusted(
        field: FieldTag,
        sigma: Sigma,
        a: FactoredElement,
        asserted_factors: bool,
    ) -> MathResult<GwaSpec> {
        field.validate()?;
        sigma.validate(field)?;
        if a.field() != field {
            return Err(MathError::FieldMismatch);
        }
        Ok(Self::assemble(field, sigma, a, asserted_factors))
    }

    fn assemble(
        field: FieldTag,
        sigma: Sigma,
        a: FactoredElement,
        asserted_factors: bool,
    ) -> GwaSpec {
        let a_dense = a.expand();
        let degenerate = sigma.is_identity();
        GwaSpec {
            field,
            sigma,
            a,
            a_dense,
            degenerate,
            asserted_factors,
        }
    }

    pub fn field(&self) -> FieldTag {
        self.field
    }

    pub fn sigma(&self) -> &Sigma {
        &self.sigma
    }

    pub fn a(&self) -> &FactoredElement {
        &self.a
    }

    pub fn a_poly(&self) -> &Poly {
        &self.a_dense
    }

    /// Sigma is the identity map (`c = 0` or `gamma = 1`); accepted but all
    /// finiteness predicates go false.
    pub fn is_degenerate(&self) -> bool {
        self.degenerate
    }

    /// Some factor of `a` was accepted on the caller's word; downstream
    /// reports carry this annotation.
    pub fn has_asserted_factors(&self) -> bool {
        self.asserted_factors
    }

    pub fn sigma_pow(&self, p: &Poly, k: i64) -> Poly {
        self.sigma.apply(p, k)
    }

    /// The shift `k` with `sigma^k(z)` associate to `w`, if one exists.
    /// On infinite orbits the shift is unique; on finite orbits the least
    /// `k >= 0` is returned.
    pub fn orbit_shift(&self, z: &Poly, w: &Poly) -> MathResult<Option<i64>> {
        if z.field() != self.field || w.field() != self.field {
            return Err(MathError::FieldMismatch);
        }
        for input in [z, w] {
            if input.is_constant() || !input.is_monic() {
                return Err(MathError::Invalid(format!(
                    "orbit elements must be monic and nonconstant, got {input}"
                )));
            }
        }
        if z.degree() != w.degree() {
            return Ok(None);
        }
        Ok(self.orbit_shift_inner(z, w))
    }

    fn orbit_shift_inner(&self, z: &Poly, w: &Poly) -> Option<i64> {
        let field = self.field;
        match &self.sigma {
            Sigma::Classical { shift } => {
                if shift.is_zero() {
                    return if z == w { Some(0) } else { None };
                }
                match field {
                    FieldTag::Q => {
                        // subleading coefficients: sigma^k multiplies the root
                        // sum by nothing but adds d*k*shift
                        let d = z.degree().unwrap() as i64;
                        let diff = z.coeff(d as usize - 1).sub(&w.coeff(d as usize - 1));
                        let denom = Scalar::from_i64(field, d).mul(shift);
                        let k_exact = diff.div(&denom).ok()?;
                        let k_rat = k_exact.as_rational().unwrap();
                        if !k_rat.is_integer() {
                            return None;
                        }
                        let k = num_traits::ToPrimitive::to_i64(&k_rat.to_integer())?;
                        (self.sigma.apply(z, k) == *w).then_some(k)
                    }
                    FieldTag::Fp(p) => {
                        (0..p as i64).find(|&k| self.sigma.apply(z, k) == *w)
                    }
                }
            }
            Sigma::Quantum { gamma } => {
                let h = Poly::var(field);
                if *z == h || *w == h {
                    return if z == w { Some(0) } else { None };
                }
                let monic_shift = |k: i64| -> Poly {
                    self.sigma
                        .apply(z, k)
                        .normalize_monic()
                        .expect("nonzero")
                        .1
                };
                if let Some(order) = multiplicative_order(gamma) {
                    return (0..order as i64).find(|&k| monic_shift(k) == *w);
                }
                // |gamma| is a rational of magnitude != 1: match constant
                // terms, gamma^(k*d) = z(0)/w(0), by monotone magnitude search
                if z.coeff(0).is_zero() || w.coeff(0).is_zero() {
                    // reachable only on non-irreducible input
                    return if z == w { Some(0) } else { None };
                }
                let d = z.degree().unwrap() as i64;
                let g = gamma.pow(d).expect("gamma nonzero");
                let t = z.coeff(0).div(&w.coeff(0)).expect("nonzero constant");
                let one = Scalar::one(field);
                let candidate = if t == one {
                    Some(0)
                } else if t.abs_cmp(&one) == Ordering::Equal {
                    // |t| = 1 with t != 1 is unreachable by powers of g
                    None
                } else {
                    let target_above_one = t.abs_cmp(&one) == Ordering::Greater;
                    let step_above_one = g.abs_cmp(&one) == Ordering::Greater;
                    let (step, dir) = if target_above_one == step_above_one {
                        (g.clone(), 1i64)
                    } else {
                        (g.inv().expect("nonzero"), -1i64)
                    };
                    // |step^m| approaches |t| strictly monotonically from the
                    // side of 1, so the walk terminates at or past the target
                    let approaching = if target_above_one {
                        Ordering::Less
                    } else {
                        Ordering::Greater
                    };
                    let mut acc = step.clone();
                    let mut k = dir;
                    while acc.abs_cmp(&t) == approaching {
                        acc = acc.mul(&step);
                        k += dir;
                    }
                    (acc == t).then_some(k)
                };
                let k = candidate?;
                (monic_shift(k) == *w).then_some(k)
            }
        }
    }

    /// Size of the orbit of `z` under sigma, up to associates.
    pub fn orbit_size(&self, z: &Poly) -> MathResult<OrbitSize> {
        if z.field() != self.field {
            return Err(MathError::FieldMismatch);
        }
        if z.is_constant() || !z.is_monic() {
            return Err(MathError::Invalid(format!(
                "orbit elements must be monic and nonconstant, got {z}"
            )));
        }
        Ok(match &self.sigma {
            Sigma::Classical { shift } => {
                if shift.is_zero() {
                    OrbitSize::Finite(1)
                } else {
                    match self.field {
                        FieldTag::Q => OrbitSize::Infinite,
                        FieldTag::Fp(p) => {
                            let k = (1..=p as i64)
                                .find(|&k| self.sigma.apply(z, k) == *z)
                                .expect("sigma^p is the identity");
                            OrbitSize::Finite(k as u64)
                        }
                    }
                }
            }
            Sigma::Quantum { gamma } => {
                if *z == Poly::var(self.field) || gamma.is_one() {
                    OrbitSize::Finite(1)
                } else {
                    match multiplicative_order(gamma) {
                        None => OrbitSize::Infinite,
                        Some(order) => {
                            let monic_shift = |k: i64| -> Poly {
                                self.sigma.apply(z, k).normalize_monic().unwrap().1
                            };
                            let k = (1..=order as i64)
                                .find(|&k| monic_shift(k) == *z)
                                .expect("sigma^order fixes classes");
                            OrbitSize::Finite(k as u64)
                        }
                    }
                }
            }
        })
    }

    /// Closed form: orbits of irreducibles are all infinite exactly in the
    /// classical characteristic-zero case with a genuine shift.
    pub fn all_orbits_infinite(&self) -> bool {
        match &self.sigma {
            Sigma::Classical { shift } => self.field == FieldTag::Q && !shift.is_zero(),
            Sigma::Quantum { .. } => false,
        }
    }

    /// A witness irreducible with finite orbit, when one exists.
    pub fn finite_orbit_witness(&self) -> Option<Poly> {
        if self.all_orbits_infinite() {
            None
        } else {
            Some(Poly::var(self.field))
        }
    }

    /// Ring-level simplicity of the algebra, with a certificate.
    pub fn is_simple_ring(&self) -> RingSimplicity {
        if let Some(order) = self.sigma.order() {
            return RingSimplicity {
                simple: false,
                certificate: RingSimplicityCert::SigmaHasFiniteOrder { order },
            };
        }
        if let Sigma::Quantum { .. } = self.sigma {
            // <h> is a proper nonzero sigma-stable ideal
            return RingSimplicity {
                simple: false,
                certificate: RingSimplicityCert::SigmaStableIdeal {
                    generator: Poly::var(self.field),
                },
            };
        }
        // classical, characteristic zero, nonzero shift: a positive-shift
        // collision between factors of a is the only obstruction left
        for (z, _) in self.a.factors() {
            for (w, _) in self.a.factors() {
                if let Ok(Some(n)) = self.orbit_shift(z, w) {
                    if n >= 1 {
                        return RingSimplicity {
                            simple: false,
                            certificate: RingSimplicityCert::FactorPairShift {
                                z: z.clone(),
                                w: w.clone(),
                                shift: n,
                            },
                        };
                    }
                }
            }
        }
        RingSimplicity {
            simple: true,
            certificate: RingSimplicityCert::Simple,
        }
    }

    /// Description of the sigma-invariants, whether the central part of the
    /// base ring is a field, and whether finite-length free modules can exist.
    pub fn center_report(&self) -> CenterReport {
        let h = Poly::var(self.field);
        let (invariant_ring, finite_length_possible) = match &self.sigma {
            Sigma::Classical { shift } => {
                if shift.is_zero() {
                    (InvariantRing::WholeRing, false)
                } else {
                    match self.field {
                        FieldTag::Q => (InvariantRing::Constants, true),
                        FieldTag::Fp(p) => {
                            // (h - c)^p - (h - c) = h^p - h for c in F_p
                            let gen = &Poly::monomial(
                                self.field,
                                Scalar::one(self.field),
                                p as usize,
                            ) - &h;
                            (InvariantRing::GeneratedBy(gen), false)
                        }
                    }
                }
            }
            Sigma::Quantum { gamma } => {
                if gamma.is_one() {
                    (InvariantRing::WholeRing, false)
                } else {
                    match multiplicative_order(gamma) {
                        None => (InvariantRing::Constants, false),
                        Some(k) => (
                            InvariantRing::GeneratedBy(Poly::monomial(
                                self.field,
                                Scalar::one(self.field),
                                k as usize,
                            )),
                            false,
                        ),
                    }
                }
            }
        };
        let center_in_r_is_field = matches!(invariant_ring, InvariantRing::Constants);
        CenterReport {
            invariant_ring,
            center_in_r_is_field,
            finite_length_possible,
            finite_length_witness: if finite_length_possible {
                None
            } else {
                // sigma scales or fixes h up to a unit in every failing case
                Some(h)
            },
        }
    }
}

impl fmt::Display for GwaSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}[h] with sigma: {}, a = {}",
            self.field, self.sigma, self.a
        )
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RingSimplicity {
    pub simple: bool,
    pub certificate: RingSimplicityCert,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RingSimplicityCert {
    Simple,
    SigmaHasFiniteOrder { order: u64 },
    SigmaStableIdeal { generator: Poly },
    FactorPairShift { z: Poly, w: Poly, shift: i64 },
}

impl fmt::Display for RingSimplicityCert {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RingSimplicityCert::Simple => write!(f, "simple"),
            RingSimplicityCert::SigmaHasFiniteOrder { order } => {
                write!(f, "sigma has finite order {order}")
            }
            RingSimplicityCert::SigmaStableIdeal { generator } => {
                write!(f, "<{generator}> is a proper sigma-stable ideal")
            }
            RingSimplicityCert::FactorPairShift { z, w, shift } => {
                write!(f, "sigma^{shift}({z}) ~ {w} with {shift} >= 1")
            }
        }
    }
}

/// What the sigma-invariant subring looks like.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum InvariantRing {
    Constants,
    GeneratedBy(Poly),
    WholeRing,
}

impl fmt::Display for InvariantRing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            InvariantRing::Constants => write!(f, "the constants"),
            InvariantRing::GeneratedBy(g) => write!(f, "polynomials in {g}"),
            InvariantRing::WholeRing => write!(f, "the whole ring"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CenterReport {
    pub invariant_ring: InvariantRing,
    pub center_in_r_is_field: bool,
    pub finite_length_possible: bool,
    /// A noncentral-unit element moved onto a unit multiple of itself by some
    /// power of sigma, when finite length is impossible.
    pub finite_length_witness: Option<Poly>,
}
