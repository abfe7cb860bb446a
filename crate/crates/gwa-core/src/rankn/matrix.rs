//! Square polynomial matrices: exact determinants and adjugates, and Smith
//! normal form over F[h] with unimodular transforms.

use std::fmt;

use crate::error::{MathError, MathResult};
use crate::polyring::{FieldTag, Poly, Scalar, Sigma};

/// A square matrix of polynomials, row-major.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolyMatrix {
    n: usize,
    field: FieldTag,
    entries: Vec<Poly>,
}

impl PolyMatrix {
    pub fn new(n: usize, entries: Vec<Poly>) -> MathResult<PolyMatrix> {
        if n == 0 || entries.len() != n * n {
            return Err(MathError::Invalid(format!(
                "expected {n}x{n} entries, got {}",
                entries.len()
            )));
        }
        let field = entries[0].field();
        if entries.iter().any(|e| e.field() != field) {
            return Err(MathError::FieldMismatch);
        }
        Ok(PolyMatrix { n, field, entries })
    }

    pub fn from_rows(rows: Vec<Vec<Poly>>) -> MathResult<PolyMatrix> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return Err(MathError::Invalid("matrix must be square".into()));
        }
        PolyMatrix::new(n, rows.into_iter().flatten().collect())
    }

    pub fn identity(n: usize, field: FieldTag) -> PolyMatrix {
        let mut m = PolyMatrix::zero(n, field);
        for i in 0..n {
            *m.entry_mut(i, i) = Poly::one(field);
        }
        m
    }

    pub fn zero(n: usize, field: FieldTag) -> PolyMatrix {
        PolyMatrix {
            n,
            field,
            entries: vec![Poly::zero(field); n * n],
        }
    }

    /// Companion-shaped matrix: `corner` in the top-right entry, ones on the
    /// subdiagonal. For `n = 1` this is just `(corner)`.
    pub fn companion(n: usize, corner: &Poly) -> PolyMatrix {
        let field = corner.field();
        let mut m = PolyMatrix::zero(n, field);
        *m.entry_mut(0, n - 1) = corner.clone();
        for i in 1..n {
            *m.entry_mut(i, i - 1) = Poly::one(field);
        }
        m
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn field(&self) -> FieldTag {
        self.field
    }

    pub fn entry(&self, row: usize, col: usize) -> &Poly {
        &self.entries[row * self.n + col]
    }

    pub fn entry_mut(&mut self, row: usize, col: usize) -> &mut Poly {
        &mut self.entries[row * self.n + col]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[Poly]> {
        self.entries.chunks(self.n)
    }

    pub fn mul(&self, other: &PolyMatrix) -> MathResult<PolyMatrix> {
        if self.n != other.n {
            return Err(MathError::DimensionMismatch {
                expected: self.n,
                got: other.n,
            });
        }
        if self.field != other.field {
            return Err(MathError::FieldMismatch);
        }
        let mut out = PolyMatrix::zero(self.n, self.field);
        for i in 0..self.n {
            for j in 0..self.n {
                let mut acc = Poly::zero(self.field);
                for k in 0..self.n {
                    acc = &acc + &(self.entry(i, k) * other.entry(k, j));
                }
                *out.entry_mut(i, j) = acc;
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &[Poly]) -> MathResult<Vec<Poly>> {
        if v.len() != self.n {
            return Err(MathError::DimensionMismatch {
                expected: self.n,
                got: v.len(),
            });
        }
        Ok((0..self.n)
            .map(|i| {
                (0..self.n).fold(Poly::zero(self.field), |acc, k| {
                    &acc + &(self.entry(i, k) * &v[k])
                })
            })
            .collect())
    }

    pub fn scale(&self, r: &Poly) -> PolyMatrix {
        PolyMatrix {
            n: self.n,
            field: self.field,
            entries: self.entries.iter().map(|e| e * r).collect(),
        }
    }

    pub fn apply_sigma(&self, sigma: &Sigma, k: i64) -> PolyMatrix {
        PolyMatrix {
            n: self.n,
            field: self.field,
            entries: self.entries.iter().map(|e| sigma.apply(e, k)).collect(),
        }
    }

    pub fn is_scalar_multiple_of_identity(&self, r: &Poly) -> bool {
        for i in 0..self.n {
            for j in 0..self.n {
                let expected = if i == j {
                    r.clone()
                } else {
                    Poly::zero(self.field)
                };
                if self.entry(i, j) != &expected {
                    return false;
                }
            }
        }
        true
    }

    /// Exact determinant by fraction-free elimination with row pivoting.
    pub fn det(&self) -> Poly {
        let n = self.n;
        if n == 1 {
            return self.entries[0].clone();
        }
        let mut m: Vec<Vec<Poly>> = self.rows().map(|r| r.to_vec()).collect();
        let mut negate = false;
        let mut prev = Poly::one(self.field);
        for k in 0..n - 1 {
            let Some(pivot_row) = (k..n).find(|&r| !m[r][k].is_zero()) else {
                return Poly::zero(self.field);
            };
            if pivot_row != k {
                m.swap(pivot_row, k);
                negate = !negate;
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let num = &(&m[i][j] * &m[k][k]) - &(&m[i][k] * &m[k][j]);
                    m[i][j] = num.exact_div(&prev).expect("fraction-free step divides");
                }
                m[i][k] = Poly::zero(self.field);
            }
            prev = m[k][k].clone();
        }
        let d = m[n - 1][n - 1].clone();
        if negate {
            -&d
        } else {
            d
        }
    }

    fn minor(&self, drop_row: usize, drop_col: usize) -> PolyMatrix {
        let mut entries = Vec::with_capacity((self.n - 1) * (self.n - 1));
        for i in 0..self.n {
            if i == drop_row {
                continue;
            }
            for j in 0..self.n {
                if j == drop_col {
                    continue;
                }
                entries.push(self.entry(i, j).clone());
            }
        }
        PolyMatrix {
            n: self.n - 1,
            field: self.field,
            entries,
        }
    }

    /// Adjugate matrix: `self * adjugate = det * identity`.
    pub fn adjugate(&self) -> PolyMatrix {
        if self.n == 1 {
            return PolyMatrix::identity(1, self.field);
        }
        let mut out = PolyMatrix::zero(self.n, self.field);
        for i in 0..self.n {
            for j in 0..self.n {
                let cof = self.minor(j, i).det();
                *out.entry_mut(i, j) = if (i + j) % 2 == 0 { cof } else { -&cof };
            }
        }
        out
    }

    /// Inverse when the determinant is a nonzero constant.
    pub fn unimodular_inverse(&self) -> MathResult<PolyMatrix> {
        let det = self.det();
        if det.is_zero() || !det.is_constant() {
            return Err(MathError::NotInvertible);
        }
        let inv = det.coeff(0).inv()?;
        Ok(self.adjugate().scale(&Poly::constant(inv)))
    }
}

impl fmt::Display for PolyMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for row in self.rows() {
            write!(f, "[")?;
            for (j, e) in row.iter().enumerate() {
                if j > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{e}")?;
            }
            writeln!(f, "]")?;
        }
        Ok(())
    }
}

/// Smith normal form `original = s * d * t` with unimodular `s`, `t` and
/// monic diagonal `d` whose entries divide in sequence.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Snf {
    pub s: PolyMatrix,
    pub d: PolyMatrix,
    pub t: PolyMatrix,
}

impl Snf {
    pub fn invariant_factors(&self) -> Vec<Poly> {
        (0..self.d.size()).map(|i| self.d.entry(i, i).clone()).collect()
    }

    /// Reconstruction, unimodularity, shape and divisibility checks.
    pub fn verify(&self, original: &PolyMatrix) -> bool {
        let product = match self.s.mul(&self.d).and_then(|sd| sd.mul(&self.t)) {
            Ok(p) => p,
            Err(_) => return false,
        };
        if &product != original {
            return false;
        }
        for u in [&self.s, &self.t] {
            let det = u.det();
            if det.is_zero() || !det.is_constant() {
                return false;
            }
        }
        let n = self.d.size();
        for i in 0..n {
            for j in 0..n {
                if i != j && !self.d.entry(i, j).is_zero() {
                    return false;
                }
            }
        }
        let factors = self.invariant_factors();
        for i in 0..n {
            if !factors[i].is_zero() && !factors[i].is_monic() {
                return false;
            }
            if i + 1 < n && !factors[i].divides(&factors[i + 1]) {
                return false;
            }
        }
        true
    }
}

/// Compute the Smith normal form by gcd-driven row/column reduction, always
/// pivoting on the entry of least degree (ties: least row, then column).
pub fn snf(m: &PolyMatrix) -> Snf {
    let n = m.size();
    let field = m.field();
    let mut d = m.clone();
    let mut s = PolyMatrix::identity(n, field);
    let mut t = PolyMatrix::identity(n, field);

    let row_swap = |d: &mut PolyMatrix, s: &mut PolyMatrix, a: usize, b: usize| {
        for j in 0..n {
            let tmp = d.entry(a, j).clone();
            *d.entry_mut(a, j) = d.entry(b, j).clone();
            *d.entry_mut(b, j) = tmp;
        }
        for i in 0..n {
            let tmp = s.entry(i, a).clone();
            *s.entry_mut(i, a) = s.entry(i, b).clone();
            *s.entry_mut(i, b) = tmp;
        }
    };
    let col_swap = |d: &mut PolyMatrix, t: &mut PolyMatrix, a: usize, b: usize| {
        for i in 0..n {
            let tmp = d.entry(i, a).clone();
            *d.entry_mut(i, a) = d.entry(i, b).clone();
            *d.entry_mut(i, b) = tmp;
        }
        for j in 0..n {
            let tmp = t.entry(a, j).clone();
            *t.entry_mut(a, j) = t.entry(b, j).clone();
            *t.entry_mut(b, j) = tmp;
        }
    };
    // row_i -= q * row_k on d; the inverse op lands on s as col_k += q * col_i
    let row_axpy = |d: &mut PolyMatrix, s: &mut PolyMatrix, i: usize, k: usize, q: &Poly| {
        for j in 0..n {
            let delta = q * d.entry(k, j);
            *d.entry_mut(i, j) = d.entry(i, j) - &delta;
        }
        for r in 0..n {
            let delta = q * s.entry(r, i);
            *s.entry_mut(r, k) = s.entry(r, k) + &delta;
        }
    };
    let col_axpy = |d: &mut PolyMatrix, t: &mut PolyMatrix, j: usize, k: usize, q: &Poly| {
        for i in 0..n {
            let delta = q * d.entry(i, k);
            *d.entry_mut(i, j) = d.entry(i, j) - &delta;
        }
        for c in 0..n {
            let delta = q * t.entry(j, c);
            *t.entry_mut(k, c) = t.entry(k, c) + &delta;
        }
    };

    for r in 0..n {
        'pivot: loop {
            // least-degree nonzero pivot in the trailing block
            let mut pivot: Option<(usize, usize, usize)> = None;
            for i in r..n {
                for j in r..n {
                    let e = d.entry(i, j);
                    if e.is_zero() {
                        continue;
                    }
                    let deg = e.degree().unwrap();
                    if pivot.is_none_or(|(_, _, best)| deg < best) {
                        pivot = Some((i, j, deg));
                    }
                }
            }
            let Some((pi, pj, _)) = pivot else {
                break 'pivot;
            };
            if pi != r {
                row_swap(&mut d, &mut s, pi, r);
            }
            if pj != r {
                col_swap(&mut d, &mut t, pj, r);
            }
            // clear the pivot column and row; a nonzero remainder has smaller
            // degree than the pivot, so swapping it in makes progress
            for i in r + 1..n {
                if d.entry(i, r).is_zero() {
                    continue;
                }
                let (q, rem) = d.entry(i, r).divmod(d.entry(r, r)).expect("pivot nonzero");
                row_axpy(&mut d, &mut s, i, r, &q);
                if !rem.is_zero() {
                    row_swap(&mut d, &mut s, i, r);
                    continue 'pivot;
                }
            }
            for j in r + 1..n {
                if d.entry(r, j).is_zero() {
                    continue;
                }
                let (q, rem) = d.entry(r, j).divmod(d.entry(r, r)).expect("pivot nonzero");
                col_axpy(&mut d, &mut t, j, r, &q);
                if !rem.is_zero() {
                    col_swap(&mut d, &mut t, j, r);
                    continue 'pivot;
                }
            }
            // the pivot must divide everything that remains
            for i in r + 1..n {
                for j in r + 1..n {
                    if !d.entry(r, r).divides(d.entry(i, j)) {
                        let minus_one = Poly::constant(Scalar::one(field).neg());
                        row_axpy(&mut d, &mut s, r, i, &minus_one);
                        continue 'pivot;
                    }
                }
            }
            break 'pivot;
        }
        // normalize the pivot monic
        if !d.entry(r, r).is_zero() && !d.entry(r, r).is_monic() {
            let lead = d.entry(r, r).leading().unwrap().clone();
            let inv = lead.inv().expect("nonzero");
            for j in 0..n {
                *d.entry_mut(r, j) = d.entry(r, j).scale(&inv);
            }
            for i in 0..n {
                *s.entry_mut(i, r) = s.entry(i, r).scale(&lead);
            }
        }
    }
    Snf { s, d, t }
}
