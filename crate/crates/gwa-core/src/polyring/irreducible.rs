//! Irreducibility testing: decisive over F_p, decisive over Q for degree <= 3,
//! and a bounded Kronecker factor search for higher degree over Q.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::error::{MathError, MathResult};
use crate::polyring::poly::Poly;
use crate::polyring::scalar::{bigint_to_u128, is_prime_u64, FieldTag, Scalar};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Irreducibility {
    Yes,
    No,
    /// The work limit was hit before a verdict was reached.
    Unverified,
}

impl std::fmt::Display for Irreducibility {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Irreducibility::Yes => write!(f, "yes"),
            Irreducibility::No => write!(f, "no"),
            Irreducibility::Unverified => write!(f, "unverified"),
        }
    }
}

/// Default cap on candidate factor evaluations in the Kronecker search.
pub const DEFAULT_WORK_LIMIT: usize = 100_000;

/// Integers larger than this are not factored when enumerating divisors.
const FACTOR_MAGNITUDE_LIMIT: u128 = 1 << 60;

pub fn is_irreducible(p: &Poly) -> MathResult<Irreducibility> {
    is_irreducible_with_limit(p, DEFAULT_WORK_LIMIT)
}

pub fn is_irreducible_with_limit(p: &Poly, limit: usize) -> MathResult<Irreducibility> {
    if p.is_constant() {
        return Err(MathError::ConstantInput);
    }
    match p.field() {
        FieldTag::Fp(prime) => Ok(irreducible_fp(p, prime)),
        FieldTag::Q => Ok(irreducible_q(p, limit)),
    }
}

/// Rabin's criterion: f of degree n over F_p is irreducible iff
/// h^(p^n) == h (mod f) and gcd(h^(p^(n/l)) - h, f) = 1 for every prime l | n.
fn irreducible_fp(f: &Poly, prime: u64) -> Irreducibility {
    let n = f.degree().expect("nonconstant");
    if n == 1 {
        return Irreducibility::Yes;
    }
    let f = f.normalize_monic().expect("nonzero").1;
    let field = f.field();
    let x = Poly::var(field);
    // frobenius_powers[i] = h^(p^i) mod f
    let mut frob = vec![x.clone()];
    for _ in 0..n {
        let prev = frob.last().unwrap().clone();
        frob.push(poly_powmod(&prev, prime, &f));
    }
    for l in prime_divisors(n as u64) {
        let m = n / l as usize;
        let diff = &frob[m] - &x;
        let g = f.gcd(&diff).expect("same field");
        if !g.is_constant() {
            return Irreducibility::No;
        }
    }
    if frob[n] != x {
        return Irreducibility::No;
    }
    Irreducibility::Yes
}

fn poly_powmod(base: &Poly, mut e: u64, modulus: &Poly) -> Poly {
    let mut acc = Poly::one(base.field());
    let mut b = base.divmod(modulus).expect("nonzero modulus").1;
    while e > 0 {
        if e & 1 == 1 {
            acc = (&acc * &b).divmod(modulus).unwrap().1;
        }
        b = (&b * &b).divmod(modulus).unwrap().1;
        e >>= 1;
    }
    acc
}

fn prime_divisors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

fn irreducible_q(f: &Poly, limit: usize) -> Irreducibility {
    let d = f.degree().expect("nonconstant");
    if d == 1 {
        return Irreducibility::Yes;
    }
    let ints = to_primitive_integer(f);
    if ints[0].is_zero() {
        // h divides f and deg f >= 2
        return Irreducibility::No;
    }
    let mut budget = limit;
    match rational_root_exists(&ints, &mut budget) {
        Some(true) => return Irreducibility::No,
        Some(false) => {
            if d <= 3 {
                // degree 2 and 3 are reducible only through a linear factor
                return Irreducibility::Yes;
            }
        }
        None => return Irreducibility::Unverified,
    }
    kronecker_search(&ints, &mut budget)
}

/// Clear denominators and divide out integer content, preserving sign.
fn to_primitive_integer(f: &Poly) -> Vec<BigInt> {
    let mut lcm = BigInt::one();
    for c in f.coeffs() {
        let r = c.as_rational().expect("Q coefficients");
        lcm = lcm.lcm(r.denom());
    }
    let mut ints: Vec<BigInt> = f
        .coeffs()
        .iter()
        .map(|c| {
            let r = c.as_rational().unwrap();
            r.numer() * (&lcm / r.denom())
        })
        .collect();
    let mut content = BigInt::zero();
    for c in &ints {
        content = content.gcd(c);
    }
    if !content.is_zero() && !content.is_one() {
        for c in &mut ints {
            *c = &*c / &content;
        }
    }
    ints
}

fn eval_int(ints: &[BigInt], x: i64) -> BigInt {
    let xb = BigInt::from(x);
    let mut acc = BigInt::zero();
    for c in ints.iter().rev() {
        acc = acc * &xb + c;
    }
    acc
}

/// All positive divisors of |n|, or None when n is too large to factor.
fn positive_divisors(n: &BigInt, budget: &mut usize) -> Option<Vec<BigInt>> {
    let mag = bigint_to_u128(n)?;
    if mag == 0 || mag > FACTOR_MAGNITUDE_LIMIT {
        return None;
    }
    let factors = factor_u128(mag, budget)?;
    let mut divs = vec![1u128];
    for (p, e) in factors {
        let mut next = Vec::with_capacity(divs.len() * (e as usize + 1));
        for d in &divs {
            let mut pk = 1u128;
            for _ in 0..=e {
                next.push(d.checked_mul(pk)?);
                pk = pk.checked_mul(p)?;
            }
        }
        divs = next;
    }
    divs.sort_unstable();
    divs.dedup();
    Some(divs.into_iter().map(BigInt::from).collect())
}

/// Trial division then Pollard rho; gives up (None) if the budget runs out.
fn factor_u128(n: u128, budget: &mut usize) -> Option<Vec<(u128, u32)>> {
    let mut n = n;
    let mut out: Vec<(u128, u32)> = Vec::new();
    let push = |p: u128, out: &mut Vec<(u128, u32)>| {
        if let Some(entry) = out.iter_mut().find(|(q, _)| *q == p) {
            entry.1 += 1;
        } else {
            out.push((p, 1));
        }
    };
    let mut d = 2u128;
    while d * d <= n && d < 1 << 20 {
        while n.is_multiple_of(d) {
            push(d, &mut out);
            n /= d;
        }
        d += 1;
    }
    let mut stack = vec![n];
    while let Some(m) = stack.pop() {
        if m == 1 {
            continue;
        }
        if m < (1 << 20) * (1 << 20) || (m <= u64::MAX as u128 && is_prime_u64(m as u64)) {
            // remainder below the trial bound squared is prime
            push(m, &mut out);
            continue;
        }
        if *budget == 0 {
            return None;
        }
        *budget = budget.saturating_sub(1);
        {
            let f = pollard_rho(m)?;
            stack.push(f);
            stack.push(m / f);
        }
    }
    out.sort_unstable();
    Some(out)
}

fn pollard_rho(n: u128) -> Option<u128> {
    if n.is_multiple_of(2) {
        return Some(2);
    }
    let mulmod = |a: u128, b: u128| -> u128 {
        // n < 2^64 here in practice; use checked widening where possible
        ((a % n) * (b % n)) % n
    };
    for c in 1u128..20 {
        let mut x = 2u128;
        let mut y = 2u128;
        let mut d = 1u128;
        let mut steps = 0u32;
        while d == 1 && steps < 1_000_000 {
            x = (mulmod(x, x) + c) % n;
            y = (mulmod(y, y) + c) % n;
            y = (mulmod(y, y) + c) % n;
            d = gcd_u128(x.abs_diff(y), n);
            steps += 1;
        }
        if d != n && d > 1 {
            return Some(d);
        }
    }
    None
}

fn gcd_u128(mut a: u128, mut b: u128) -> u128 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Rational root test on a primitive integer polynomial.
/// Some(true) = root found, Some(false) = none, None = could not enumerate.
fn rational_root_exists(ints: &[BigInt], budget: &mut usize) -> Option<bool> {
    let a0 = &ints[0];
    let ad = ints.last().unwrap();
    let num_divs = positive_divisors(a0, budget)?;
    let den_divs = positive_divisors(ad, budget)?;
    for r in &num_divs {
        for s in &den_divs {
            if r.gcd(s) != BigInt::one() {
                continue;
            }
            if *budget == 0 {
                return None;
            }
            *budget -= 1;
            for sign in [1i64, -1] {
                // evaluate sum ints[i] * (sign*r)^i * s^(d-i); root iff zero
                let rs = r * BigInt::from(sign);
                let d = ints.len() - 1;
                let mut acc = BigInt::zero();
                let mut rp = BigInt::one();
                let mut sp: Vec<BigInt> = vec![BigInt::one()];
                for _ in 0..d {
                    sp.push(sp.last().unwrap() * s);
                }
                for (i, c) in ints.iter().enumerate() {
                    acc += c * &rp * &sp[d - i];
                    rp = &rp * &rs;
                }
                if acc.is_zero() {
                    return Some(true);
                }
            }
        }
    }
    Some(false)
}

/// Bounded Kronecker search for a factor of degree <= d/2; exhausting every
/// candidate without finding one proves irreducibility.
fn kronecker_search(ints: &[BigInt], budget: &mut usize) -> Irreducibility {
    let d = ints.len() - 1;
    let field = FieldTag::Q;
    let f_poly = Poly::new(
        field,
        ints.iter()
            .map(|c| Scalar::Rat(num_rational::BigRational::from_integer(c.clone())))
            .collect(),
    );
    for m in 2..=d / 2 {
        // sample points 0, 1, -1, 2, -2, ...
        let points: Vec<i64> = (0..=(m as i64)).map(|i| (i + 1) / 2 * if i % 2 == 1 { 1 } else { -1 }).collect();
        let values: Vec<BigInt> = points.iter().map(|&x| eval_int(ints, x)).collect();
        if values.iter().any(BigInt::is_zero) {
            return Irreducibility::No;
        }
        let mut divisor_lists: Vec<Vec<BigInt>> = Vec::with_capacity(points.len());
        for (i, v) in values.iter().enumerate() {
            let pos = match positive_divisors(v, budget) {
                Some(p) => p,
                None => return Irreducibility::Unverified,
            };
            if i == 0 {
                // fix the sign of the candidate factor via the first value
                divisor_lists.push(pos);
            } else {
                let mut both = Vec::with_capacity(pos.len() * 2);
                for p in pos {
                    both.push(-&p);
                    both.push(p);
                }
                divisor_lists.push(both);
            }
        }
        let mut odometer = vec![0usize; divisor_lists.len()];
        loop {
            if *budget == 0 {
                return Irreducibility::Unverified;
            }
            *budget -= 1;
            let sample: Vec<BigInt> = odometer
                .iter()
                .enumerate()
                .map(|(i, &j)| divisor_lists[i][j].clone())
                .collect();
            if let Some(candidate) = interpolate(&points, &sample) {
                if candidate.degree().is_some_and(|dg| dg >= 1 && dg < d)
                    && candidate.divides(&f_poly)
                {
                    return Irreducibility::No;
                }
            }
            // advance odometer
            let mut pos = 0;
            loop {
                if pos == odometer.len() {
                    break;
                }
                odometer[pos] += 1;
                if odometer[pos] < divisor_lists[pos].len() {
                    break;
                }
                odometer[pos] = 0;
                pos += 1;
            }
            if pos == odometer.len() {
                break;
            }
        }
    }
    Irreducibility::Yes
}

/// Lagrange interpolation through integer points with prescribed values.
fn interpolate(points: &[i64], values: &[BigInt]) -> Option<Poly> {
    let field = FieldTag::Q;
    let mut acc = Poly::zero(field);
    for (i, &xi) in points.iter().enumerate() {
        let mut term = Poly::constant(Scalar::Rat(num_rational::BigRational::from_integer(
            values[i].clone(),
        )));
        for (j, &xj) in points.iter().enumerate() {
            if i == j {
                continue;
            }
            let denom = Scalar::from_i64(field, xi - xj);
            let linear = Poly::from_int_coeffs(field, &[-xj, 1]);
            term = (&term * &linear).scale(&denom.inv().ok()?);
        }
        acc = &acc + &term;
    }
    Some(acc)
}
