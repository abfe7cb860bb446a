//! Factored ring elements (unit times a multiset of monic irreducibles),
//! orbit partitioning, integer multiplicity profiles with finite differences,
//! chain products, and the pair multiset controlling module length.

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{MathError, MathResult};
use crate::gwa::GwaSpec;
use crate::polyring::{FieldTag, Poly, Scalar, Sigma};

/// A nonzero ring element kept in factored form: `unit * prod factor^mult`.
///
/// Factors are monic, nonconstant, pairwise distinct and canonically sorted,
/// so associate elements share the factor list and differ only in the unit.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FactoredElement {
    field: FieldTag,
    unit: Scalar,
    factors: Vec<(Poly, u32)>,
}

impl FactoredElement {
    pub fn new(unit: Scalar, raw_factors: Vec<(Poly, u32)>) -> MathResult<FactoredElement> {
        if unit.is_zero() {
            return Err(MathError::ZeroUnit);
        }
        let field = unit.field();
        let mut out = FactoredElement {
            field,
            unit,
            factors: Vec::new(),
        };
        for (poly, mult) in raw_factors {
            if mult == 0 {
                continue;
            }
            if poly.field() != field {
                return Err(MathError::FieldMismatch);
            }
            if poly.is_zero() {
                return Err(MathError::ZeroPolynomial);
            }
            if poly.is_constant() {
                let c = poly.coeff(0).pow(mult as i64)?;
                out.unit = out.unit.mul(&c);
                continue;
            }
            let (lead, monic) = poly.normalize_monic()?;
            out.unit = out.unit.mul(&lead.pow(mult as i64)?);
            out.push_factor(monic, mult);
        }
        Ok(out)
    }

    pub fn one(field: FieldTag) -> FactoredElement {
        FactoredElement {
            field,
            unit: Scalar::one(field),
            factors: Vec::new(),
        }
    }

    pub fn from_unit(unit: Scalar) -> MathResult<FactoredElement> {
        FactoredElement::new(unit, Vec::new())
    }

    /// Monic product of the given polynomials, unit 1.
    pub fn from_monic_factors(field: FieldTag, polys: &[Poly]) -> MathResult<FactoredElement> {
        FactoredElement::new(
            Scalar::one(field),
            polys.iter().map(|p| (p.clone(), 1)).collect(),
        )
    }

    fn push_factor(&mut self, monic: Poly, mult: u32) {
        match self.factors.binary_search_by(|(f, _)| f.cmp(&monic)) {
            Ok(i) => self.factors[i].1 += mult,
            Err(i) => self.factors.insert(i, (monic, mult)),
        }
    }

    pub fn field(&self) -> FieldTag {
        self.field
    }

    pub fn unit(&self) -> &Scalar {
        &self.unit
    }

    pub fn factors(&self) -> &[(Poly, u32)] {
        &self.factors
    }

    pub fn is_unit(&self) -> bool {
        self.factors.is_empty()
    }

    /// Number of irreducible factors counted with multiplicity.
    pub fn irreducible_count(&self) -> u64 {
        self.factors.iter().map(|(_, m)| *m as u64).sum()
    }

    pub fn poly_degree(&self) -> usize {
        self.factors
            .iter()
            .map(|(f, m)| f.degree().unwrap_or(0) * *m as usize)
            .sum()
    }

    pub fn is_squarefree(&self) -> bool {
        self.factors.iter().all(|(_, m)| *m == 1)
    }

    pub fn mult_of(&self, monic: &Poly) -> u32 {
        self.factors
            .iter()
            .find(|(f, _)| f == monic)
            .map_or(0, |(_, m)| *m)
    }

    pub fn expand(&self) -> Poly {
        let mut acc = Poly::constant(self.unit.clone());
        for (f, m) in &self.factors {
            acc = &acc * &f.pow(*m);
        }
        acc
    }

    pub fn mul(&self, other: &FactoredElement) -> FactoredElement {
        let mut out = self.clone();
        out.unit = out.unit.mul(&other.unit);
        for (f, m) in &other.factors {
            out.push_factor(f.clone(), *m);
        }
        out
    }

    pub fn pow(&self, e: u32) -> FactoredElement {
        let mut out = FactoredElement::one(self.field);
        out.unit = self.unit.pow(e as i64).expect("nonzero unit");
        for (f, m) in &self.factors {
            if e > 0 {
                out.push_factor(f.clone(), m * e);
            }
        }
        out
    }

    /// Exact division in factored form; `None` when some factor is missing.
    pub fn try_div(&self, other: &FactoredElement) -> Option<FactoredElement> {
        let mut out = self.clone();
        out.unit = out.unit.div(&other.unit).ok()?;
        for (f, m) in &other.factors {
            let i = out.factors.iter().position(|(g, _)| g == f)?;
            if out.factors[i].1 < *m {
                return None;
            }
            out.factors[i].1 -= m;
            if out.factors[i].1 == 0 {
                out.factors.remove(i);
            }
        }
        Some(out)
    }

    /// Multiset divisibility; units always divide.
    pub fn divides(&self, other: &FactoredElement) -> bool {
        self.factors
            .iter()
            .all(|(f, m)| other.mult_of(f) >= *m)
    }

    /// Apply `sigma^k` factor by factor, renormalizing monic and folding the
    /// normalization constants into the unit.
    pub fn apply_sigma(&self, sigma: &Sigma, k: i64) -> FactoredElement {
        let mut out = FactoredElement {
            field: self.field,
            unit: self.unit.clone(),
            factors: Vec::new(),
        };
        for (f, m) in &self.factors {
            let raw = sigma.apply(f, k);
            let (lead, monic) = raw.normalize_monic().expect("sigma preserves nonzero");
            out.unit = out.unit.mul(&lead.pow(*m as i64).expect("nonzero lead"));
            out.push_factor(monic, *m);
        }
        out
    }

    /// Same factors, unit 1.
    pub fn monic_part(&self) -> FactoredElement {
        FactoredElement {
            field: self.field,
            unit: Scalar::one(self.field),
            factors: self.factors.clone(),
        }
    }

    /// Associate comparison: equal factor multisets, units ignored.
    pub fn associate_eq(&self, other: &FactoredElement) -> bool {
        self.factors == other.factors
    }

    pub fn with_unit(&self, unit: Scalar) -> MathResult<FactoredElement> {
        if unit.is_zero() {
            return Err(MathError::ZeroUnit);
        }
        Ok(FactoredElement {
            field: self.field,
            unit,
            factors: self.factors.clone(),
        })
    }

    pub fn scale(&self, by: &Scalar) -> MathResult<FactoredElement> {
        self.with_unit(self.unit.mul(by))
    }
}

impl fmt::Display for FactoredElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.factors.is_empty() {
            return write!(f, "{}", self.unit);
        }
        if !self.unit.is_one() {
            write!(f, "({}) * ", self.unit)?;
        }
        for (i, (poly, m)) in self.factors.iter().enumerate() {
            if i > 0 {
                write!(f, " * ")?;
            }
            write!(f, "({poly})")?;
            if *m > 1 {
                write!(f, "^{m}")?;
            }
        }
        Ok(())
    }
}

/// Whether the orbit positions of a profile wrap around.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ProfileKind {
    Line,
    Cycle(u64),
}

/// Multiplicity profile of one orbit: `value(k)` is the multiplicity of
/// `sigma^k(rep)` in the element.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Profile {
    rep: Poly,
    kind: ProfileKind,
    values: BTreeMap<i64, u32>,
}

/// Integer-valued finite differences of a profile.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SignedValues {
    pub kind: ProfileKind,
    pub values: BTreeMap<i64, i64>,
}

impl SignedValues {
    /// `max(0, v)` pointwise.
    pub fn positive_part(&self) -> BTreeMap<i64, u32> {
        self.values
            .iter()
            .filter(|(_, v)| **v > 0)
            .map(|(k, v)| (*k, *v as u32))
            .collect()
    }

    /// `max(0, -v)` pointwise.
    pub fn negative_part(&self) -> BTreeMap<i64, u32> {
        self.values
            .iter()
            .filter(|(_, v)| **v < 0)
            .map(|(k, v)| (*k, (-*v) as u32))
            .collect()
    }
}

impl Profile {
    pub fn rep(&self) -> &Poly {
        &self.rep
    }

    pub fn kind(&self) -> ProfileKind {
        self.kind
    }

    pub fn values(&self) -> &BTreeMap<i64, u32> {
        &self.values
    }

    fn wrap(&self, k: i64) -> i64 {
        match self.kind {
            ProfileKind::Line => k,
            ProfileKind::Cycle(n) => k.rem_euclid(n as i64),
        }
    }

    pub fn value(&self, k: i64) -> u32 {
        self.values.get(&self.wrap(k)).copied().unwrap_or(0)
    }

    fn difference(&self, forward: bool) -> SignedValues {
        let mut keys: Vec<i64> = Vec::new();
        match self.kind {
            ProfileKind::Line => {
                for &k in self.values.keys() {
                    keys.push(k);
                    keys.push(if forward { k - 1 } else { k + 1 });
                }
            }
            ProfileKind::Cycle(n) => keys.extend(0..n as i64),
        }
        keys.sort_unstable();
        keys.dedup();
        let mut values = BTreeMap::new();
        for k in keys {
            let v = if forward {
                self.value(k + 1) as i64 - self.value(k) as i64
            } else {
                self.value(k) as i64 - self.value(k - 1) as i64
            };
            if v != 0 {
                values.insert(k, v);
            }
        }
        SignedValues {
            kind: self.kind,
            values,
        }
    }

    /// Forward difference: `(delta f)(k) = f(k+1) - f(k)`, wrapping on cycles.
    pub fn delta(&self) -> SignedValues {
        self.difference(true)
    }

    /// Backward difference: `(nabla f)(k) = f(k) - f(k-1)`, wrapping on cycles.
    pub fn nabla(&self) -> SignedValues {
        self.difference(false)
    }

    /// The profile of `sigma^by` applied to the underlying element: the graph
    /// translated `by` steps to the right.
    pub fn translate(&self, by: i64) -> Profile {
        let values = self
            .values
            .iter()
            .map(|(k, v)| (self.wrap(k + by), *v))
            .collect();
        Profile {
            rep: self.rep.clone(),
            kind: self.kind,
            values,
        }
    }
}

/// Build the profile of `f` relative to `rep`; every factor of `f` must lie in
/// the orbit of `rep`.
pub fn profile_of(f: &FactoredElement, rep: &Poly, spec: &GwaSpec) -> MathResult<Profile> {
    let kind = match spec.orbit_size(rep)? {
        crate::gwa::OrbitSize::Infinite => ProfileKind::Line,
        crate::gwa::OrbitSize::Finite(n) => ProfileKind::Cycle(n),
    };
    let mut values: BTreeMap<i64, u32> = BTreeMap::new();
    for (factor, mult) in f.factors() {
        let k = spec
            .orbit_shift(rep, factor)?
            .ok_or_else(|| MathError::FactorOutsideOrbit(factor.to_string()))?;
        let k = match kind {
            ProfileKind::Line => k,
            ProfileKind::Cycle(n) => k.rem_euclid(n as i64),
        };
        *values.entry(k).or_insert(0) += mult;
    }
    Ok(Profile {
        rep: rep.clone(),
        kind,
        values,
    })
}

/// Reconstruct the monic element a profile describes (unit 1).
pub fn from_profile(profile: &Profile, spec: &GwaSpec) -> FactoredElement {
    let field = profile.rep.field();
    let mut out = FactoredElement::one(field);
    for (&k, &mult) in &profile.values {
        if mult == 0 {
            continue;
        }
        let shifted = spec.sigma_pow(&profile.rep, k);
        let monic = shifted.normalize_monic().expect("nonzero").1;
        out.push_factor(monic, mult);
    }
    out
}

/// Group the factors of `f` by sigma-orbit. Each part is returned with a
/// deterministic representative: the position-minimal present factor on
/// infinite orbits, the canonically least one on finite orbits.
pub fn orbit_partition(
    f: &FactoredElement,
    spec: &GwaSpec,
) -> MathResult<Vec<(Poly, FactoredElement)>> {
    let mut groups: Vec<Vec<(Poly, u32)>> = Vec::new();
    for (factor, mult) in f.factors() {
        let mut placed = false;
        for group in groups.iter_mut() {
            if spec.orbit_shift(&group[0].0, factor)?.is_some() {
                group.push((factor.clone(), *mult));
                placed = true;
                break;
            }
        }
        if !placed {
            groups.push(vec![(factor.clone(), *mult)]);
        }
    }
    let mut out = Vec::with_capacity(groups.len());
    for group in groups {
        let rep = orbit_representative(group.iter().map(|(f, _)| f), spec)?;
        let part = FactoredElement::new(Scalar::one(f.field()), group)?;
        out.push((rep, part));
    }
    out.sort_by(|(a, _), (b, _)| a.cmp(b));
    Ok(out)
}

/// Representative for a set of factors known to share one orbit.
pub(crate) fn orbit_representative<'a, I: Iterator<Item = &'a Poly>>(
    members: I,
    spec: &GwaSpec,
) -> MathResult<Poly> {
    let members: Vec<&Poly> = members.collect();
    let anchor = members[0];
    match spec.orbit_size(anchor)? {
        crate::gwa::OrbitSize::Infinite => {
            // position-minimal member, so profiles start at 0
            let mut best = anchor;
            let mut best_shift = 0i64;
            for m in &members[1..] {
                let k = spec
                    .orbit_shift(anchor, m)?
                    .expect("members share an orbit");
                if k < best_shift {
                    best = m;
                    best_shift = k;
                }
            }
            Ok(best.clone())
        }
        crate::gwa::OrbitSize::Finite(_) => Ok(members.iter().min().unwrap().to_owned().clone()),
    }
}

/// A chain product: `prod_{i=0..n} sigma^i(start)` where `sigma^n(start)` is
/// associate to `end` with `n >= 0` minimal.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChainProduct {
    pub start: Poly,
    pub end: Poly,
    pub shift: i64,
    pub element: FactoredElement,
    /// On a finite orbit of size l, chains spanning the whole orbit
    /// (`shift = l - 1`) are not basic.
    pub basic: bool,
}

pub fn chain_product(start: &Poly, end: &Poly, spec: &GwaSpec) -> MathResult<ChainProduct> {
    let not_comparable = || MathError::NotComparable {
        from: start.to_string(),
        to: end.to_string(),
    };
    let n = spec.orbit_shift(start, end)?.ok_or_else(not_comparable)?;
    if n < 0 {
        return Err(not_comparable());
    }
    let mut element = FactoredElement::one(start.field());
    for i in 0..=n {
        let link = spec.sigma_pow(start, i);
        element = element.mul(&FactoredElement::new(
            Scalar::one(start.field()),
            vec![(link, 1)],
        )?);
    }
    let basic = match spec.orbit_size(start)? {
        crate::gwa::OrbitSize::Infinite => true,
        crate::gwa::OrbitSize::Finite(l) => (n as u64) < l.saturating_sub(1),
    };
    Ok(ChainProduct {
        start: start.clone(),
        end: end.clone(),
        shift: n,
        element,
        basic,
    })
}

/// A comparable pair: a factor of `q` mapped onto a factor of `p` by a
/// nonnegative power of sigma, counted with multiset multiplicity.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OmegaPair {
    pub z: Poly,
    pub w: Poly,
    pub shift: i64,
    pub multiplicity: u64,
}

/// All pairs `(z, w)` in `Irr(q) x Irr(p)` with `sigma^n(z) ~ w`, `n >= 0`.
pub fn omega_pairs(
    p: &FactoredElement,
    q: &FactoredElement,
    spec: &GwaSpec,
) -> MathResult<Vec<OmegaPair>> {
    let mut out = Vec::new();
    for (z, zm) in q.factors() {
        for (w, wm) in p.factors() {
            if let Some(n) = spec.orbit_shift(z, w)? {
                if n >= 0 {
                    out.push(OmegaPair {
                        z: z.clone(),
                        w: w.clone(),
                        shift: n,
                        multiplicity: *zm as u64 * *wm as u64,
                    });
                }
            }
        }
    }
    out.sort_by(|a, b| a.shift.cmp(&b.shift).then(a.z.cmp(&b.z)).then(a.w.cmp(&b.w)));
    Ok(out)
}

pub fn omega_size(pairs: &[OmegaPair]) -> u64 {
    pairs.iter().map(|p| p.multiplicity).sum()
}
