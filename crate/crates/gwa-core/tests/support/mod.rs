//! Helpers shared by the integration suites: an independent Smith-form
//! oracle via minor gcds, and exhaustive divisor enumeration.
#![allow(dead_code)] // each test target uses a different subset

use gwa_core::factored::FactoredElement;
use gwa_core::gwa::GwaSpec;
use gwa_core::polyring::{Poly, Scalar};
use gwa_core::rankn::PolyMatrix;

/// All k-element index subsets of 0..n.
fn index_subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut current = Vec::new();
    fn recur(start: usize, n: usize, k: usize, current: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if current.len() == k {
            out.push(current.clone());
            return;
        }
        for i in start..n {
            current.push(i);
            recur(i + 1, n, k, current, out);
            current.pop();
        }
    }
    recur(0, n, k, &mut current, &mut out);
    out
}

/// Invariant factors computed the slow way: `d_i = g_i / g_{i-1}` where `g_i`
/// is the monic gcd of all `i x i` minors. Independent of the reduction in
/// the library.
pub fn minor_gcd_invariant_factors(m: &PolyMatrix) -> Vec<Poly> {
    let n = m.size();
    let field = m.field();
    let mut g_prev = Poly::one(field);
    let mut out = Vec::with_capacity(n);
    for k in 1..=n {
        let mut gcd = Poly::zero(field);
        for rows in index_subsets(n, k) {
            for cols in index_subsets(n, k) {
                let sub = PolyMatrix::from_rows(
                    rows.iter()
                        .map(|&i| cols.iter().map(|&j| m.entry(i, j).clone()).collect())
                        .collect(),
                )
                .unwrap();
                gcd = gcd.gcd(&sub.det()).unwrap();
            }
        }
        if gcd.is_zero() {
            out.push(Poly::zero(field));
        } else {
            out.push(gcd.exact_div(&g_prev).expect("gcds divide in sequence"));
            g_prev = gcd;
        }
    }
    out
}

/// Every monic sub-multiset of the factors of `a`.
pub fn all_divisors(spec: &GwaSpec) -> Vec<FactoredElement> {
    let field = spec.field();
    let mut out = vec![FactoredElement::one(field)];
    for (factor, mult) in spec.a().factors() {
        let mut next = Vec::with_capacity(out.len() * (*mult as usize + 1));
        for existing in &out {
            for take in 0..=*mult {
                if take == 0 {
                    next.push(existing.clone());
                } else {
                    next.push(
                        existing.mul(
                            &FactoredElement::new(
                                Scalar::one(field),
                                vec![(factor.clone(), take)],
                            )
                            .unwrap(),
                        ),
                    );
                }
            }
        }
        out = next;
    }
    out
}
