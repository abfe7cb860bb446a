//! Independent brute-force verification layer: normal forms in the algebra
//! computed straight from the defining relations, word actions on modules,
//! and submodule closure by repeated rewriting. Everything here is the
//! ground truth the combinatorial criteria are tested against.

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{MathError, MathResult};
use crate::gwa::GwaSpec;
use crate::polyring::{FieldTag, Poly};
use crate::rank1::{Gen, Rank1Module};
use crate::rankn::MatrixModule;
use crate::sampling::{random_poly, Rng};

/// An algebra element in normal form over the free basis
/// `{1, x^n, y^n : n > 0}` with left polynomial coefficients: degree `d > 0`
/// holds the coefficient of `x^d`, degree `-d` that of `y^d`, and degree 0
/// the ring part.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AlgebraElement {
    field: FieldTag,
    components: BTreeMap<i64, Poly>,
}

impl AlgebraElement {
    pub fn zero(field: FieldTag) -> AlgebraElement {
        AlgebraElement {
            field,
            components: BTreeMap::new(),
        }
    }

    pub fn one(field: FieldTag) -> AlgebraElement {
        AlgebraElement::ring(Poly::one(field))
    }

    pub fn x(field: FieldTag) -> AlgebraElement {
        AlgebraElement::monomial(Poly::one(field), 1)
    }

    pub fn y(field: FieldTag) -> AlgebraElement {
        AlgebraElement::monomial(Poly::one(field), -1)
    }

    pub fn ring(r: Poly) -> AlgebraElement {
        AlgebraElement::monomial(r, 0)
    }

    /// `coeff * x^degree` (or `y^{-degree}` for negative degree).
    pub fn monomial(coeff: Poly, degree: i64) -> AlgebraElement {
        let field = coeff.field();
        let mut components = BTreeMap::new();
        if !coeff.is_zero() {
            components.insert(degree, coeff);
        }
        AlgebraElement { field, components }
    }

    pub fn field(&self) -> FieldTag {
        self.field
    }

    pub fn components(&self) -> &BTreeMap<i64, Poly> {
        &self.components
    }

    pub fn is_zero(&self) -> bool {
        self.components.is_empty()
    }

    pub fn add(&self, other: &AlgebraElement) -> AlgebraElement {
        let mut out = self.clone();
        for (d, c) in &other.components {
            let entry = out
                .components
                .entry(*d)
                .or_insert_with(|| Poly::zero(self.field));
            *entry = &*entry + c;
            if entry.is_zero() {
                out.components.remove(d);
            }
        }
        out
    }

    /// Degrees carrying a nonzero coefficient.
    pub fn support(&self) -> Vec<i64> {
        self.components.keys().copied().collect()
    }
}

impl fmt::Display for AlgebraElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (d, c) in &self.components {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match *d {
                0 => write!(f, "({c})")?,
                d if d > 0 => write!(f, "({c})*x^{d}")?,
                d => write!(f, "({c})*y^{}", -d)?,
            }
        }
        Ok(())
    }
}

/// Multiply two normal forms using only the defining relations:
/// `x r = sigma^{-1}(r) x`, `y r = sigma(r) y`, `x y = a`, `y x = sigma(a)`.
pub fn nf_mul(
    u: &AlgebraElement,
    v: &AlgebraElement,
    spec: &GwaSpec,
) -> MathResult<AlgebraElement> {
    if u.field != spec.field() || v.field != spec.field() {
        return Err(MathError::SpecMismatch);
    }
    let sigma = spec.sigma();
    let a = spec.a_poly();
    let mut out = AlgebraElement::zero(spec.field());
    for (&d1, c1) in &u.components {
        for (&d2, c2) in &v.components {
            // move c2 across the monomial block of degree d1
            let crossed = sigma.apply(c2, -d1);
            let mut coeff = c1 * &crossed;
            // contract opposite-sign blocks pairwise
            if d1 > 0 && d2 < 0 {
                let k = d1.min(-d2);
                for step in 1..=k {
                    coeff = &coeff * &sigma.apply(a, -(d1 - step));
                }
            } else if d1 < 0 && d2 > 0 {
                let k = (-d1).min(d2);
                for step in 1..=k {
                    coeff = &coeff * &sigma.apply(a, -d1 - step + 1);
                }
            }
            out = out.add(&AlgebraElement::monomial(coeff, d1 + d2));
        }
    }
    Ok(out)
}

/// Act by a normal form on a rank-1 module element, one component at a time.
pub fn act_via_words_rank1(
    m: &Rank1Module,
    u: &AlgebraElement,
    v: &Poly,
) -> MathResult<Poly> {
    if u.field != m.spec().field() || v.field() != m.spec().field() {
        return Err(MathError::SpecMismatch);
    }
    let mut out = Poly::zero(u.field);
    for (&d, coeff) in &u.components {
        let mut acc = v.clone();
        let gen = if d >= 0 { Gen::X } else { Gen::Y };
        for _ in 0..d.unsigned_abs() {
            acc = m.act(&gen, &acc);
        }
        out = &out + &(coeff * &acc);
    }
    Ok(out)
}

/// Act by a normal form on a rank-n module vector.
pub fn act_via_words_rankn(
    m: &MatrixModule,
    u: &AlgebraElement,
    v: &[Poly],
) -> MathResult<Vec<Poly>> {
    if u.field != m.spec().field() {
        return Err(MathError::SpecMismatch);
    }
    let field = u.field;
    let mut out = vec![Poly::zero(field); m.size()];
    for (&d, coeff) in &u.components {
        let mut acc = v.to_vec();
        let gen = if d >= 0 { Gen::X } else { Gen::Y };
        for _ in 0..d.unsigned_abs() {
            acc = m.act(&gen, &acc)?;
        }
        for (o, c) in out.iter_mut().zip(acc.iter()) {
            *o = &*o + &(coeff * c);
        }
    }
    Ok(out)
}

/// Close the span marker of `g` under `x`, `y` and multiplication by `h` for
/// the given number of rounds, checking every produced element stays
/// divisible by `g`. For principal ideals this stabilizes after one round;
/// the extra rounds re-confirm it.
pub fn brute_submodule_closure(m: &Rank1Module, g: &Poly, steps: usize) -> MathResult<bool> {
    if g.is_zero() {
        return Err(MathError::ZeroPolynomial);
    }
    if g.field() != m.spec().field() {
        return Err(MathError::SpecMismatch);
    }
    let h = Poly::var(g.field());
    let mut frontier = vec![g.clone()];
    for _ in 0..steps {
        let mut next = Vec::new();
        for v in &frontier {
            for image in [
                m.act(&Gen::X, v),
                m.act(&Gen::Y, v),
                m.act(&Gen::Ring(h.clone()), v),
            ] {
                if !g.divides(&image) {
                    return Ok(false);
                }
                if !image.is_zero() && !next.contains(&image) {
                    next.push(image);
                }
            }
        }
        frontier = next;
    }
    Ok(true)
}

/// The defining-relation suite on a rank-1 module: `x(y v) = a v`,
/// `y(x v) = sigma(a) v`, `x(sigma(r) v) = r (x v)`, `y(r v) = sigma(r)(y v)`
/// on sampled polynomials. Returns a description of the first failing
/// identity, or `None` when every sample passes.
pub fn relation_counterexample_rank1(
    m: &Rank1Module,
    rng: &mut Rng,
    samples: usize,
) -> Option<String> {
    let spec = m.spec();
    let field = spec.field();
    let sigma = spec.sigma();
    let a = spec.a_poly();
    let sigma_a = sigma.apply(a, 1);
    for _ in 0..samples {
        let dv = rng.below(8) as usize;
        let v = random_poly(rng, field, dv, 10);
        let dr = rng.below(8) as usize;
        let r = random_poly(rng, field, dr, 10);
        let xy = m.act(&Gen::X, &m.act(&Gen::Y, &v));
        if xy != &v * a {
            return Some(format!("x(y v) != a v at v = {v}"));
        }
        let yx = m.act(&Gen::Y, &m.act(&Gen::X, &v));
        if yx != &v * &sigma_a {
            return Some(format!("y(x v) != sigma(a) v at v = {v}"));
        }
        let skew_x = m.act(&Gen::X, &(&sigma.apply(&r, 1) * &v));
        if skew_x != &r * &m.act(&Gen::X, &v) {
            return Some(format!("x(sigma(r) v) != r (x v) at r = {r}, v = {v}"));
        }
        let skew_y = m.act(&Gen::Y, &(&r * &v));
        if skew_y != &sigma.apply(&r, 1) * &m.act(&Gen::Y, &v) {
            return Some(format!("y(r v) != sigma(r)(y v) at r = {r}, v = {v}"));
        }
    }
    None
}

pub fn relation_suite_rank1(m: &Rank1Module, rng: &mut Rng, samples: usize) -> bool {
    relation_counterexample_rank1(m, rng, samples).is_none()
}

/// The same suite on a rank-n module, run on all basis vectors and sampled
/// polynomial vectors.
pub fn relation_counterexample_rankn(
    m: &MatrixModule,
    rng: &mut Rng,
    samples: usize,
) -> Option<String> {
    let spec = m.spec();
    let field = spec.field();
    let sigma = spec.sigma();
    let a = spec.a_poly();
    let sigma_a = sigma.apply(a, 1);
    let mut vectors: Vec<Vec<Poly>> = (0..m.size()).map(|i| m.basis_vector(i)).collect();
    for _ in 0..samples {
        let mut vector = Vec::with_capacity(m.size());
        for _ in 0..m.size() {
            let d = rng.below(5) as usize;
            vector.push(random_poly(rng, field, d, 8));
        }
        vectors.push(vector);
    }
    let scale = |v: &[Poly], r: &Poly| -> Vec<Poly> { v.iter().map(|c| c * r).collect() };
    for (i, v) in vectors.iter().enumerate() {
        let dr = rng.below(5) as usize;
        let r = random_poly(rng, field, dr, 8);
        let yv = m.act(&Gen::Y, v).expect("vector length matches");
        let xy = m.act(&Gen::X, &yv).expect("vector length matches");
        if xy != scale(v, a) {
            return Some(format!("x(y v) != a v at vector {i}"));
        }
        let xv = m.act(&Gen::X, v).expect("vector length matches");
        let yx = m.act(&Gen::Y, &xv).expect("vector length matches");
        if yx != scale(v, &sigma_a) {
            return Some(format!("y(x v) != sigma(a) v at vector {i}"));
        }
        let skew_x = m
            .act(&Gen::X, &scale(v, &sigma.apply(&r, 1)))
            .expect("size ok");
        if skew_x != scale(&xv, &r) {
            return Some(format!("x(sigma(r) v) != r (x v) at vector {i}, r = {r}"));
        }
        let skew_y = m.act(&Gen::Y, &scale(v, &r)).expect("size ok");
        if skew_y != scale(&yv, &sigma.apply(&r, 1)) {
            return Some(format!("y(r v) != sigma(r)(y v) at vector {i}, r = {r}"));
        }
    }
    None
}

pub fn relation_suite_rankn(m: &MatrixModule, rng: &mut Rng, samples: usize) -> bool {
    relation_counterexample_rankn(m, rng, samples).is_none()
}

/// Random small normal-form element.
pub fn random_element(rng: &mut Rng, field: FieldTag, max_block: i64, height: i64) -> AlgebraElement {
    let mut out = AlgebraElement::zero(field);
    let terms = 1 + rng.below(3);
    for _ in 0..terms {
        let degree = rng.range_i64(-max_block, max_block);
        let d = rng.below(4) as usize;
        let coeff = random_poly(rng, field, d, height);
        out = out.add(&AlgebraElement::monomial(coeff, degree));
    }
    out
}
