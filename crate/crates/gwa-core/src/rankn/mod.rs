//! Finite-rank free modules presented by a square polynomial matrix:
//! compatibility through Smith normal form, exact actions, conjugacy
//! verification, the explicit simple modules of arbitrary rank, and the
//! integer multiset equation underlying their simplicity proof.

mod matrix;

pub use matrix::{snf, PolyMatrix, Snf};

use std::collections::HashMap;
use std::fmt;

use crate::error::{MathError, MathResult};
use crate::factored::FactoredElement;
use crate::gwa::GwaSpec;
use crate::polyring::{FieldTag, Poly, Scalar, Sigma};
use crate::rank1::{Gen, Rank1Module, SimplicityVerdict};

/// A rank-n free module: `x . v = P sigma^{-1}(v)`, `y . v = Q sigma(v)`,
/// with `Q = sigma(a P^{-1})` polynomial.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MatrixModule {
    spec: GwaSpec,
    p: PolyMatrix,
    q: PolyMatrix,
    invariant_factors: Vec<Poly>,
}

impl MatrixModule {
    /// Accepts `P` exactly when its last invariant factor divides `a`,
    /// deriving `Q` by adjugate division and verifying both compatibility
    /// identities.
    pub fn new(spec: &GwaSpec, p: PolyMatrix) -> MathResult<MatrixModule> {
        if p.field() != spec.field() {
            return Err(MathError::FieldMismatch);
        }
        let det = p.det();
        if det.is_zero() {
            return Err(MathError::SingularMatrix);
        }
        let smith = snf(&p);
        debug_assert!(smith.verify(&p));
        let invariant_factors = smith.invariant_factors();
        let dn = invariant_factors.last().expect("square matrix");
        if !dn.divides(spec.a_poly()) {
            return Err(MathError::NotCompatible { dn: dn.to_string() });
        }
        // a P^{-1} = adj(P) * a / det(P), entrywise exact by the divisor test
        let adj = p.adjugate();
        let n = p.size();
        let mut api = PolyMatrix::zero(n, spec.field());
        for i in 0..n {
            for j in 0..n {
                let scaled = adj.entry(i, j) * spec.a_poly();
                *api.entry_mut(i, j) = scaled
                    .exact_div(&det)
                    .expect("last invariant factor divides a");
            }
        }
        let q = api.apply_sigma(spec.sigma(), 1);
        let module = MatrixModule {
            spec: spec.clone(),
            p,
            q,
            invariant_factors,
        };
        assert!(
            module.compatibility_holds(),
            "compatibility identities must hold"
        );
        Ok(module)
    }

    pub fn spec(&self) -> &GwaSpec {
        &self.spec
    }

    pub fn size(&self) -> usize {
        self.p.size()
    }

    pub fn p_matrix(&self) -> &PolyMatrix {
        &self.p
    }

    pub fn q_matrix(&self) -> &PolyMatrix {
        &self.q
    }

    pub fn invariant_factors(&self) -> &[Poly] {
        &self.invariant_factors
    }

    /// `P sigma^{-1}(Q) = a I` and `Q sigma(P) = sigma(a) I`, exactly.
    pub fn compatibility_holds(&self) -> bool {
        let sigma = self.spec.sigma();
        let left = self
            .p
            .mul(&self.q.apply_sigma(sigma, -1))
            .expect("same size");
        let right = self.q.mul(&self.p.apply_sigma(sigma, 1)).expect("same size");
        left.is_scalar_multiple_of_identity(self.spec.a_poly())
            && right.is_scalar_multiple_of_identity(&sigma.apply(self.spec.a_poly(), 1))
    }

    pub fn act(&self, gen: &Gen, v: &[Poly]) -> MathResult<Vec<Poly>> {
        let n = self.size();
        if v.len() != n {
            return Err(MathError::DimensionMismatch {
                expected: n,
                got: v.len(),
            });
        }
        let sigma = self.spec.sigma();
        match gen {
            Gen::X => {
                let shifted: Vec<Poly> = v.iter().map(|c| sigma.apply(c, -1)).collect();
                self.p.mul_vec(&shifted)
            }
            Gen::Y => {
                let shifted: Vec<Poly> = v.iter().map(|c| sigma.apply(c, 1)).collect();
                self.q.mul_vec(&shifted)
            }
            Gen::Ring(r) => Ok(v.iter().map(|c| r * c).collect()),
        }
    }

    pub fn act_word(&self, word: &[Gen], v: &[Poly]) -> MathResult<Vec<Poly>> {
        let mut acc = v.to_vec();
        for gen in word.iter().rev() {
            acc = self.act(gen, &acc)?;
        }
        Ok(acc)
    }

    pub fn basis_vector(&self, i: usize) -> Vec<Poly> {
        let field = self.spec.field();
        let mut v = vec![Poly::zero(field); self.size()];
        v[i] = Poly::one(field);
        v
    }

    /// Check whether `S` conjugates this module onto `other`:
    /// `P_other = S P sigma^{-1}(S^{-1})` with `S` invertible over F[h].
    pub fn verify_iso_conjugate(
        &self,
        other: &MatrixModule,
        s: &PolyMatrix,
    ) -> MathResult<bool> {
        if self.spec != other.spec {
            return Err(MathError::SpecMismatch);
        }
        if self.size() != other.size() || s.size() != self.size() {
            return Err(MathError::DimensionMismatch {
                expected: self.size(),
                got: s.size(),
            });
        }
        let s_inv = s.unimodular_inverse()?;
        let sigma = self.spec.sigma();
        let conjugated = s
            .mul(&self.p)?
            .mul(&s_inv.apply_sigma(sigma, -1))?;
        Ok(conjugated == other.p)
    }

    /// The invariant factors of `Q` against those of `P`: reversed
    /// complements `sigma(a / d_i)` up to monic normalization.
    pub fn snf_duality_holds(&self) -> bool {
        let smith_q = snf(&self.q);
        if !smith_q.verify(&self.q) {
            return false;
        }
        let got = smith_q.invariant_factors();
        let sigma = self.spec.sigma();
        let mut expected = Vec::with_capacity(self.invariant_factors.len());
        for d in self.invariant_factors.iter().rev() {
            let quotient = self
                .spec
                .a_poly()
                .exact_div(d)
                .expect("invariant factors divide a");
            let shifted = sigma.apply(&quotient, 1);
            expected.push(shifted.normalize_monic().expect("nonzero").1);
        }
        got == expected
    }
}

impl fmt::Display for MatrixModule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "V[rank {}] over {}", self.size(), self.spec)
    }
}

/// Mechanical certificates mirroring the construction of the explicit simple
/// rank-n modules: the diagonal action of `x^n`, the Smith shape of `P` and
/// its dual for `Q`, the displayed form of `Q`, and the reduction to a rank-1
/// module over the subalgebra generated by `x^n`, `y^n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VnCertificate {
    pub xn_diagonal: bool,
    pub snf_shape: bool,
    pub snf_duality: bool,
    pub displayed_q: bool,
    pub subalgebra_minimality: bool,
    pub subalgebra_simple: bool,
    pub subalgebra_verdict: SimplicityVerdict,
}

impl VnCertificate {
    pub fn certified(&self) -> bool {
        self.xn_diagonal
            && self.snf_shape
            && self.snf_duality
            && self.displayed_q
            && self.subalgebra_minimality
            && self.subalgebra_simple
    }
}

#[derive(Clone, Debug)]
pub struct VnConstruction {
    pub module: MatrixModule,
    pub a0: FactoredElement,
    pub certificate: VnCertificate,
}

/// Build the rank-n module on the companion matrix of `t^n - a0` for a
/// product `a0` of minimal factors of `a` from distinct orbits, and run the
/// certification suite.
pub fn construct_simple_vn(
    spec: &GwaSpec,
    a0_factors: &[Poly],
    n: usize,
) -> MathResult<VnConstruction> {
    if n == 0 {
        return Err(MathError::Invalid("rank must be at least 1".into()));
    }
    if let Some(witness) = spec.finite_orbit_witness() {
        return Err(MathError::FiniteOrbit(witness.to_string()));
    }
    if a0_factors.is_empty() {
        return Err(MathError::Invalid("a0 needs at least one factor".into()));
    }
    // validate: distinct orbits, each a factor of a, each minimal
    for (i, f) in a0_factors.iter().enumerate() {
        if spec.a().mult_of(f) == 0 {
            return Err(MathError::NotADivisor(f.to_string()));
        }
        for g in &a0_factors[i + 1..] {
            if spec.orbit_shift(f, g)?.is_some() {
                return Err(MathError::Invalid(format!(
                    "factors {f} and {g} of a0 share an orbit"
                )));
            }
        }
        check_minimal(spec, f)?;
    }
    let a0 = FactoredElement::from_monic_factors(spec.field(), a0_factors)?;
    let a0_dense = a0.expand();
    let module = MatrixModule::new(spec, PolyMatrix::companion(n, &a0_dense))?;

    // x^n acts diagonally with entries sigma^{-i}(a0)
    let mut xn_diagonal = true;
    let word = vec![Gen::X; n];
    for i in 0..n {
        let image = module.act_word(&word, &module.basis_vector(i))?;
        let expected = spec.sigma_pow(&a0_dense, -(i as i64));
        for (j, entry) in image.iter().enumerate() {
            let want = if j == i {
                expected.clone()
            } else {
                Poly::zero(spec.field())
            };
            if entry != &want {
                xn_diagonal = false;
            }
        }
    }

    // Smith shape (1, ..., 1, a0)
    let mut expected_factors = vec![Poly::one(spec.field()); n - 1];
    expected_factors.push(a0_dense.clone());
    let snf_shape = module.invariant_factors() == expected_factors.as_slice();
    let snf_duality = module.snf_duality_holds();

    // the displayed Q: superdiagonal sigma(a), corner sigma(a / a0)
    let displayed_q = {
        let mut expected = PolyMatrix::zero(n, spec.field());
        let sig_a = spec.sigma_pow(spec.a_poly(), 1);
        for i in 0..n.saturating_sub(1) {
            *expected.entry_mut(i, i + 1) = sig_a.clone();
        }
        let complement = spec
            .a_poly()
            .exact_div(&a0_dense)
            .expect("a0 divides a");
        *expected.entry_mut(n - 1, 0) = spec.sigma_pow(&complement, 1);
        expected == *module.q_matrix()
    };

    // reduction to the subalgebra generated by x^n and y^n: a rank-1 module
    // over a new algebra with sigma' = sigma^n and a' = a sigma^{-1}(a) ...
    let sub_sigma = match spec.sigma() {
        Sigma::Classical { shift } => Sigma::Classical {
            shift: shift.mul(&Scalar::from_i64(spec.field(), n as i64)),
        },
        Sigma::Quantum { gamma } => Sigma::Quantum {
            gamma: gamma.pow(n as i64)?,
        },
    };
    let mut sub_a = FactoredElement::one(spec.field());
    for i in 0..n {
        sub_a = sub_a.mul(&spec.a().apply_sigma(spec.sigma(), -(i as i64)));
    }
    let sub_spec = GwaSpec::new_trusted(
        spec.field(),
        sub_sigma,
        sub_a,
        spec.has_asserted_factors(),
    )?;
    let mut subalgebra_minimality = true;
    for f in a0_factors {
        if check_minimal(&sub_spec, f).is_err() {
            subalgebra_minimality = false;
        }
    }
    let sub_module = Rank1Module::make_vp(&sub_spec, &a0)?;
    let subalgebra_verdict = sub_module.is_simple();
    let subalgebra_simple = subalgebra_verdict.simple;

    Ok(VnConstruction {
        module,
        a0,
        certificate: VnCertificate {
            xn_diagonal,
            snf_shape,
            snf_duality,
            displayed_q,
            subalgebra_minimality,
            subalgebra_simple,
            subalgebra_verdict,
        },
    })
}

/// Minimality of a factor: no positive backward shift of it divides `a`.
fn check_minimal(spec: &GwaSpec, factor: &Poly) -> MathResult<()> {
    for (w, _) in spec.a().factors() {
        if let Some(k) = spec.orbit_shift(w, factor)? {
            if k > 0 {
                return Err(MathError::NotMinimal {
                    factor: factor.to_string(),
                    k,
                    witness: w.to_string(),
                });
            }
        }
    }
    Ok(())
}

/// The rank-n family over the quotient of the enveloping algebra of sl2 at a
/// fixed central character: `h` multiplies by `t`, `e` and `f` act through
/// the module matrices of `V_n(t + b)`.
#[derive(Clone, Debug)]
pub struct Sl2Family {
    pub module: MatrixModule,
    pub b: Scalar,
    pub n: usize,
    /// Scalar by which the Casimir operator acts: `b (b - 2) / 4`.
    pub casimir_scalar: Scalar,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Sl2IdentityReport {
    pub bracket_he: bool,
    pub bracket_hf: bool,
    pub bracket_ef: bool,
    pub casimir: bool,
}

impl Sl2IdentityReport {
    pub fn all_hold(&self) -> bool {
        self.bracket_he && self.bracket_hf && self.bracket_ef && self.casimir
    }
}

pub fn construct_sl2_family(b: &Scalar, n: usize) -> MathResult<Sl2Family> {
    if b.field() != FieldTag::Q {
        return Err(MathError::Invalid(
            "the sl2 family is built over characteristic zero".into(),
        ));
    }
    if n == 0 {
        return Err(MathError::Invalid("rank must be at least 1".into()));
    }
    let field = FieldTag::Q;
    let one = Scalar::one(field);
    let two = Scalar::from_i64(field, 2);
    // a = -1/4 (h + b)(h - b + 2) under sigma(h) = h - 2
    let f1 = Poly::new(field, vec![b.clone(), one.clone()]);
    let f2 = Poly::new(field, vec![two.sub(b), one.clone()]);
    let spec = GwaSpec::new(
        field,
        Sigma::Classical { shift: two.clone() },
        Scalar::from_ratio(-1, 4),
        vec![
            crate::gwa::FactorSpec::checked(f1.clone(), 1),
            crate::gwa::FactorSpec::checked(f2, 1),
        ],
    )?;
    let module = MatrixModule::new(&spec, PolyMatrix::companion(n, &f1))?;
    let casimir_scalar = b.mul(&b.sub(&two)).div(&Scalar::from_i64(field, 4))?;
    Ok(Sl2Family {
        module,
        b: b.clone(),
        n,
        casimir_scalar,
    })
}

impl Sl2Family {
    pub fn apply_h(&self, v: &[Poly]) -> MathResult<Vec<Poly>> {
        let t = Poly::var(FieldTag::Q);
        self.module.act(&Gen::Ring(t), v)
    }

    pub fn apply_e(&self, v: &[Poly]) -> MathResult<Vec<Poly>> {
        self.module.act(&Gen::Y, v)
    }

    pub fn apply_f(&self, v: &[Poly]) -> MathResult<Vec<Poly>> {
        self.module.act(&Gen::X, v)
    }

    /// Verify `[h,e] = 2e`, `[h,f] = -2f`, `[e,f] = h` and the Casimir
    /// `fe + h(h+2)/4 = chi` on all monomial vectors up to the given degree.
    pub fn verify_identities(&self, max_deg: usize) -> MathResult<Sl2IdentityReport> {
        let field = FieldTag::Q;
        let n = self.module.size();
        let mut report = Sl2IdentityReport {
            bracket_he: true,
            bracket_hf: true,
            bracket_ef: true,
            casimir: true,
        };
        let quarter_h_h2 = {
            // (t^2 + 2t) / 4
            Poly::new(
                field,
                vec![
                    Scalar::zero(field),
                    Scalar::from_ratio(1, 2),
                    Scalar::from_ratio(1, 4),
                ],
            )
        };
        for i in 0..n {
            for deg in 0..=max_deg {
                let mut v = vec![Poly::zero(field); n];
                v[i] = Poly::monomial(field, Scalar::one(field), deg);
                let ev = self.apply_e(&v)?;
                let fv = self.apply_f(&v)?;
                let hv = self.apply_h(&v)?;
                let he = self.apply_h(&ev)?;
                let eh = self.apply_e(&hv)?;
                let hf = self.apply_h(&fv)?;
                let fh = self.apply_f(&hv)?;
                let ef = self.apply_e(&fv)?;
                let fe = self.apply_f(&ev)?;
                for j in 0..n {
                    let two_e = ev[j].scale(&Scalar::from_i64(field, 2));
                    if (&he[j] - &eh[j]) != two_e {
                        report.bracket_he = false;
                    }
                    let minus_two_f = fv[j].scale(&Scalar::from_i64(field, -2));
                    if (&hf[j] - &fh[j]) != minus_two_f {
                        report.bracket_hf = false;
                    }
                    if (&ef[j] - &fe[j]) != hv[j] {
                        report.bracket_ef = false;
                    }
                    let casimir = &fe[j] + &(&quarter_h_h2 * &v[j]);
                    if casimir != v[j].scale(&self.casimir_scalar) {
                        report.casimir = false;
                    }
                }
            }
        }
        Ok(report)
    }
}

/// Direct multiset check of `{j} U (S - n) U T = {k} U S U (T - n)`.
pub fn set_equation_holds(j: i64, k: i64, n: i64, s: &[i64], t: &[i64]) -> bool {
    let mut left: HashMap<i64, i64> = HashMap::new();
    let mut right: HashMap<i64, i64> = HashMap::new();
    *left.entry(j).or_insert(0) += 1;
    *right.entry(k).or_insert(0) += 1;
    for &x in s {
        *left.entry(x - n).or_insert(0) += 1;
        *right.entry(x).or_insert(0) += 1;
    }
    for &x in t {
        *left.entry(x).or_insert(0) += 1;
        *right.entry(x - n).or_insert(0) += 1;
    }
    left == right
}

/// Constructive solution: the arithmetic progression from `j` to `k` in steps
/// of `n`, when `n` divides `j - k`; no finite solution exists otherwise.
pub fn set_equation_solve(j: i64, k: i64, n: i64) -> Option<(Vec<i64>, Vec<i64>)> {
    if n == 0 {
        return (j == k).then(|| (Vec::new(), Vec::new()));
    }
    if (j - k) % n != 0 {
        return None;
    }
    let m = (k - j) / n;
    let solution = if m >= 0 {
        (Vec::new(), (1..=m).map(|i| j + i * n).collect())
    } else {
        ((1..=-m).map(|i| k + i * n).collect(), Vec::new())
    };
    debug_assert!(set_equation_holds(j, k, n, &solution.0, &solution.1));
    Some(solution)
}

/// Exhaustive search state over all multisets of bounded size and value
/// range for a fixed step `n`. Pairs `(S, T)` are matched by hashing the
/// signed difference profile `f(M) = counts(M - n) - counts(M)` of each side,
/// which inspects every candidate pair implicitly and exactly; the
/// precomputed table is reusable across many `(j, k)` queries.
pub struct SetEquationSearch {
    n: i64,
    multisets: Vec<Vec<i64>>,
    profiles: Vec<Vec<(i64, i64)>>,
    by_profile: HashMap<Vec<(i64, i64)>, usize>,
}

impl SetEquationSearch {
    pub fn new(n: i64, max_size: usize, lo: i64, hi: i64) -> SetEquationSearch {
        let multisets = enumerate_multisets(max_size, lo, hi);
        let profiles: Vec<Vec<(i64, i64)>> =
            multisets.iter().map(|m| signed_profile(m, n)).collect();
        let mut by_profile: HashMap<Vec<(i64, i64)>, usize> = HashMap::new();
        for (idx, profile) in profiles.iter().enumerate() {
            by_profile.entry(profile.clone()).or_insert(idx);
        }
        SetEquationSearch {
            n,
            multisets,
            profiles,
            by_profile,
        }
    }

    /// First solution `(S, T)` in enumeration order, if any exists within the
    /// search window. The equation asks `f(S) - f(T) = X_k - X_j`.
    pub fn search(&self, j: i64, k: i64) -> Option<(Vec<i64>, Vec<i64>)> {
        for (t_idx, t_profile) in self.profiles.iter().enumerate() {
            let key = add_deltas(t_profile, j, k);
            if let Some(&s_idx) = self.by_profile.get(&key) {
                let s = self.multisets[s_idx].clone();
                let t = self.multisets[t_idx].clone();
                assert!(set_equation_holds(j, k, self.n, &s, &t));
                return Some((s, t));
            }
        }
        None
    }
}

fn signed_profile(m: &[i64], n: i64) -> Vec<(i64, i64)> {
    let mut pairs: Vec<(i64, i64)> = Vec::with_capacity(2 * m.len());
    for &x in m {
        pairs.push((x - n, 1));
        pairs.push((x, -1));
    }
    merge_pairs(pairs)
}

/// `profile + X_k - X_j`, kept sorted with zero counts dropped.
fn add_deltas(profile: &[(i64, i64)], j: i64, k: i64) -> Vec<(i64, i64)> {
    let mut pairs: Vec<(i64, i64)> = Vec::with_capacity(profile.len() + 2);
    pairs.extend_from_slice(profile);
    pairs.push((k, 1));
    pairs.push((j, -1));
    merge_pairs(pairs)
}

fn merge_pairs(mut pairs: Vec<(i64, i64)>) -> Vec<(i64, i64)> {
    pairs.sort_unstable_by_key(|(v, _)| *v);
    let mut out: Vec<(i64, i64)> = Vec::with_capacity(pairs.len());
    for (v, c) in pairs {
        match out.last_mut() {
            Some((lv, lc)) if *lv == v => *lc += c,
            _ => out.push((v, c)),
        }
    }
    out.retain(|(_, c)| *c != 0);
    out
}

/// One-shot exhaustive search; see `SetEquationSearch` for the reusable form.
pub fn set_equation_brute(
    j: i64,
    k: i64,
    n: i64,
    max_size: usize,
    lo: i64,
    hi: i64,
) -> Option<(Vec<i64>, Vec<i64>)> {
    SetEquationSearch::new(n, max_size, lo, hi).search(j, k)
}

/// All multisets over `[lo, hi]` of size at most `max_size`, in a fixed
/// enumeration order (nondecreasing representatives, smaller sizes first).
fn enumerate_multisets(max_size: usize, lo: i64, hi: i64) -> Vec<Vec<i64>> {
    let mut out = vec![Vec::new()];
    let mut current: Vec<Vec<i64>> = vec![Vec::new()];
    for _ in 0..max_size {
        let mut next = Vec::new();
        for m in &current {
            let start = m.last().copied().unwrap_or(lo);
            for v in start..=hi {
                let mut extended = m.clone();
                extended.push(v);
                next.push(extended);
            }
        }
        out.extend(next.iter().cloned());
        current = next;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gwa::tests::{classical_q_spec, qpoly, sl2_spec};

    fn diag(entries: &[Poly]) -> PolyMatrix {
        let n = entries.len();
        let mut m = PolyMatrix::zero(n, entries[0].field());
        for (i, e) in entries.iter().enumerate() {
            *m.entry_mut(i, i) = e.clone();
        }
        m
    }

    #[test]
    fn rank1_consistency() {
        // a 1x1 matrix works exactly when its entry divides a
        let spec = sl2_spec(3, 1);
        let ok = MatrixModule::new(&spec, PolyMatrix::new(1, vec![qpoly(&[-1, 1])]).unwrap());
        assert!(ok.is_ok());
        let module = ok.unwrap();
        assert_eq!(
            module.q_matrix().entry(0, 0),
            &spec
                .sigma_pow(&spec.a_poly().exact_div(&qpoly(&[-1, 1])).unwrap(), 1)
        );
        let bad = MatrixModule::new(&spec, PolyMatrix::new(1, vec![qpoly(&[7, 1])]).unwrap());
        assert!(matches!(bad, Err(MathError::NotCompatible { .. })));
    }

    #[test]
    fn companion_accepted_diag_powers_rejected() {
        let spec = classical_q_spec(1, &[(&[0, 1], 1), (&[-1, 1], 1)]);
        let a0 = qpoly(&[0, 1]);
        let companion = MatrixModule::new(&spec, PolyMatrix::companion(2, &a0)).unwrap();
        assert_eq!(
            companion.invariant_factors(),
            &[qpoly(&[1]), qpoly(&[0, 1])]
        );
        // diag(a, a^2) has last invariant factor a^2 which does not divide a
        let a = spec.a_poly().clone();
        let rejected = MatrixModule::new(&spec, diag(&[a.clone(), &a * &a]));
        assert!(matches!(rejected, Err(MathError::NotCompatible { .. })));
        let singular = MatrixModule::new(&spec, PolyMatrix::zero(2, FieldTag::Q));
        assert!(matches!(singular, Err(MathError::SingularMatrix)));
    }

    #[test]
    fn action_relations_on_basis() {
        let spec = sl2_spec(1, 2);
        let f1 = spec.a().factors()[0].0.clone();
        let m = MatrixModule::new(&spec, PolyMatrix::companion(3, &f1)).unwrap();
        for i in 0..3 {
            let e = m.basis_vector(i);
            let xy = m.act(&Gen::X, &m.act(&Gen::Y, &e).unwrap()).unwrap();
            let expected: Vec<Poly> = e.iter().map(|c| c * spec.a_poly()).collect();
            assert_eq!(xy, expected);
            let yx = m.act(&Gen::Y, &m.act(&Gen::X, &e).unwrap()).unwrap();
            let sig_a = spec.sigma_pow(spec.a_poly(), 1);
            let expected: Vec<Poly> = e.iter().map(|c| c * &sig_a).collect();
            assert_eq!(yx, expected);
        }
        let wrong_len = m.act(&Gen::X, &[Poly::one(FieldTag::Q)]);
        assert!(matches!(
            wrong_len,
            Err(MathError::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn conjugation_verification() {
        let spec = sl2_spec(1, 2);
        let f1 = spec.a().factors()[0].0.clone();
        let m = MatrixModule::new(&spec, PolyMatrix::companion(2, &f1)).unwrap();
        // identity conjugates the module to itself
        let id = PolyMatrix::identity(2, FieldTag::Q);
        assert!(m.verify_iso_conjugate(&m, &id).unwrap());
        // a unimodular S produces an isomorphic module with P' = S P sigma^{-1}(S^{-1})
        let s = PolyMatrix::from_rows(vec![
            vec![qpoly(&[1]), qpoly(&[0, 1])],
            vec![qpoly(&[0]), qpoly(&[1])],
        ])
        .unwrap();
        let s_inv = s.unimodular_inverse().unwrap();
        let p_prime = s
            .mul(m.p_matrix())
            .unwrap()
            .mul(&s_inv.apply_sigma(spec.sigma(), -1))
            .unwrap();
        let m2 = MatrixModule::new(&spec, p_prime).unwrap();
        assert!(m.verify_iso_conjugate(&m2, &s).unwrap());
        assert!(!m.verify_iso_conjugate(&m, &s).unwrap());
        // non-unimodular S is rejected
        let bad = PolyMatrix::from_rows(vec![
            vec![qpoly(&[0, 1]), qpoly(&[0])],
            vec![qpoly(&[0]), qpoly(&[1])],
        ])
        .unwrap();
        assert_eq!(
            m.verify_iso_conjugate(&m2, &bad),
            Err(MathError::NotInvertible)
        );
    }

    #[test]
    fn smith_stratification_iso() {
        // V_{SDT} is conjugate-isomorphic to V_{D T sigma^{-1}(S)} via S^{-1}
        let spec = sl2_spec(1, 2);
        let f1 = spec.a().factors()[0].0.clone();
        let d = diag(&[Poly::one(FieldTag::Q), f1.clone()]);
        let s = PolyMatrix::from_rows(vec![
            vec![qpoly(&[1]), qpoly(&[2, 1])],
            vec![qpoly(&[0]), qpoly(&[1])],
        ])
        .unwrap();
        let t = PolyMatrix::from_rows(vec![
            vec![qpoly(&[1]), qpoly(&[0])],
            vec![qpoly(&[-1, 2]), qpoly(&[1])],
        ])
        .unwrap();
        let sdt = s.mul(&d).unwrap().mul(&t).unwrap();
        let m1 = MatrixModule::new(&spec, sdt).unwrap();
        let t_prime = t.mul(&s.apply_sigma(spec.sigma(), -1)).unwrap();
        let m2 = MatrixModule::new(&spec, d.mul(&t_prime).unwrap()).unwrap();
        let s_inv = s.unimodular_inverse().unwrap();
        assert!(m1.verify_iso_conjugate(&m2, &s_inv).unwrap());
        // duality of invariant factors holds on both presentations
        assert!(m1.snf_duality_holds());
        assert!(m2.snf_duality_holds());
    }

    #[test]
    fn vn_construction_certifies() {
        let spec = sl2_spec(1, 2);
        let f1 = spec.a().factors()[0].0.clone();
        for n in 1..=3 {
            let vn = construct_simple_vn(&spec, std::slice::from_ref(&f1), n).unwrap();
            assert!(vn.certificate.certified(), "n = {n}: {:?}", vn.certificate);
        }
        // the product of both factors is allowed when they sit in distinct orbits
        let both: Vec<Poly> = spec.a().factors().iter().map(|(f, _)| f.clone()).collect();
        let vn = construct_simple_vn(&spec, &both, 3).unwrap();
        assert!(vn.certificate.certified());
        let mut expected = vec![Poly::one(FieldTag::Q); 2];
        expected.push(vn.a0.expand());
        assert_eq!(vn.module.invariant_factors(), expected);
    }

    #[test]
    fn vn_rejects_nonminimal_factor() {
        // b = 3: h - 1 = sigma^2(h + 3), so h - 1 is not minimal
        let spec = sl2_spec(3, 1);
        let err = construct_simple_vn(&spec, &[qpoly(&[-1, 1])], 2);
        match err {
            Err(MathError::NotMinimal { k, .. }) => assert_eq!(k, 2),
            other => panic!("expected NotMinimal, got {other:?}"),
        }
        // h + 3 itself is minimal
        assert!(construct_simple_vn(&spec, &[qpoly(&[3, 1])], 2).is_ok());
    }

    #[test]
    fn vn_requires_infinite_orbits() {
        let spec = crate::gwa::tests::quantum_q_spec((1, 2), &[(&[-3, 1], 1)], (1, 1));
        assert!(matches!(
            construct_simple_vn(&spec, &[qpoly(&[-3, 1])], 2),
            Err(MathError::FiniteOrbit(_))
        ));
    }

    #[test]
    fn sl2_family_identities() {
        // b = 1/2: chi = (1/4)(1/2)(-3/2) = -3/16
        let b = Scalar::from_ratio(1, 2);
        for n in 1..=3 {
            let family = construct_sl2_family(&b, n).unwrap();
            assert_eq!(family.casimir_scalar, Scalar::from_ratio(-3, 16));
            let report = family.verify_identities(6).unwrap();
            assert!(report.all_hold(), "n = {n}: {report:?}");
        }
        // integer b still satisfies the relations
        let family = construct_sl2_family(&Scalar::from_i64(FieldTag::Q, 3), 2).unwrap();
        assert!(family.verify_identities(5).unwrap().all_hold());
        // b = 1 makes the two factors of a coincide; still fine
        let family = construct_sl2_family(&Scalar::from_i64(FieldTag::Q, 1), 2).unwrap();
        assert!(family.verify_identities(5).unwrap().all_hold());
        assert_eq!(family.casimir_scalar, Scalar::from_ratio(-1, 4));
        // n = 1 reduces to the rank-1 module with p = t + b
        let family = construct_sl2_family(&b, 1).unwrap();
        assert_eq!(family.module.size(), 1);
        let half = Scalar::from_ratio(1, 2);
        assert_eq!(
            family.module.p_matrix().entry(0, 0),
            &Poly::new(FieldTag::Q, vec![half, Scalar::one(FieldTag::Q)])
        );
    }

    #[test]
    fn set_equation_examples() {
        // (1, 3, 2): S empty, T = {3}
        assert_eq!(
            set_equation_solve(1, 3, 2),
            Some((vec![], vec![3]))
        );
        assert!(set_equation_holds(1, 3, 2, &[], &[3]));
        // j = k with n = 0
        assert_eq!(set_equation_solve(5, 5, 0), Some((vec![], vec![])));
        assert_eq!(set_equation_solve(4, 5, 0), None);
        // indivisible difference has no solution, brute agrees
        assert_eq!(set_equation_solve(0, 1, 2), None);
        assert_eq!(set_equation_brute(0, 1, 2, 3, -6, 6), None);
        // brute finds the short progressions
        let found = set_equation_brute(1, 3, 2, 3, -6, 6).unwrap();
        assert!(set_equation_holds(1, 3, 2, &found.0, &found.1));
        // mirrored case k < j
        let (s, t) = set_equation_solve(3, 1, 2).unwrap();
        assert_eq!((s.as_slice(), t.as_slice()), (&[3][..], &[][..]));
        assert!(set_equation_holds(3, 1, 2, &[3], &[]));
        // negative step
        let (s, t) = set_equation_solve(1, 3, -2).unwrap();
        assert!(set_equation_holds(1, 3, -2, &s, &t));
    }
}
