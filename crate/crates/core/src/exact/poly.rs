//! Dense univariate polynomials over Q, coefficients lowest degree first.
//! Used for minimal polynomials and the functional calculus that extracts
//! idempotents from an operator.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::matrix::RationalMatrix;
use super::rational::Rational;

pub type Poly = Vec<Rational>;

pub fn trim(mut p: Poly) -> Poly {
    while p.last().is_some_and(Zero::is_zero) {
        p.pop();
    }
    p
}

pub fn degree(p: &Poly) -> Option<usize> {
    trim(p.clone()).len().checked_sub(1)
}

pub fn mul(a: &Poly, b: &Poly) -> Poly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![Rational::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    trim(out)
}

pub fn sub(a: &Poly, b: &Poly) -> Poly {
    let n = a.len().max(b.len());
    let z = Rational::zero();
    trim((0..n).map(|i| a.get(i).unwrap_or(&z) - b.get(i).unwrap_or(&z)).collect())
}

/// Quotient and remainder of `a / b`; `b` must be nonzero.
pub fn div_rem(a: &Poly, b: &Poly) -> (Poly, Poly) {
    let b = trim(b.clone());
    assert!(!b.is_empty(), "polynomial division by zero");
    let mut r = trim(a.clone());
    if r.len() < b.len() {
        return (Vec::new(), r);
    }
    let lead = b.last().unwrap().clone();
    let mut q = vec![Rational::zero(); r.len() - b.len() + 1];
    while r.len() >= b.len() && !r.is_empty() {
        let shift = r.len() - b.len();
        let c = r.last().unwrap() / &lead;
        for (i, bi) in b.iter().enumerate() {
            r[shift + i] -= &c * bi;
        }
        q[shift] = c;
        r.pop();
        r = trim(r);
    }
    (trim(q), r)
}

/// Returns `(g, u, v)` with `u a + v b = g`, `g` the monic gcd.
pub fn ext_gcd(a: &Poly, b: &Poly) -> (Poly, Poly, Poly) {
    let (mut r0, mut r1) = (trim(a.clone()), trim(b.clone()));
    let (mut u0, mut u1) = (vec![Rational::one()], Vec::new());
    let (mut v0, mut v1) = (Vec::new(), vec![Rational::one()]);
    while !r1.is_empty() {
        let (q, r) = div_rem(&r0, &r1);
        let u2 = sub(&u0, &mul(&q, &u1));
        let v2 = sub(&v0, &mul(&q, &v1));
        r0 = std::mem::replace(&mut r1, r);
        u0 = std::mem::replace(&mut u1, u2);
        v0 = std::mem::replace(&mut v1, v2);
    }
    if let Some(lead) = r0.last().cloned() {
        let inv = lead.recip();
        let norm = |p: Poly| p.into_iter().map(|c| c * &inv).collect::<Poly>();
        (norm(r0), norm(u0), norm(v0))
    } else {
        (r0, u0, v0)
    }
}

/// `p(T)` by Horner's rule.
pub fn eval_matrix(p: &Poly, t: &RationalMatrix) -> RationalMatrix {
    let n = t.rows();
    let mut acc = RationalMatrix::zeros(n, n);
    for c in p.iter().rev() {
        acc = &(&acc * t) + &RationalMatrix::scalar(n, c);
    }
    acc
}

pub fn eval(p: &Poly, x: &Rational) -> Rational {
    p.iter().rev().fold(Rational::zero(), |acc, c| acc * x + c)
}

/// Monic minimal polynomial of a square matrix, from the first linear
/// dependency among `I, T, T^2, ...`.
pub fn minimal_polynomial(t: &RationalMatrix) -> Poly {
    let n = t.rows();
    let mut powers: Vec<Vec<Rational>> = vec![RationalMatrix::identity(n).entries().to_vec()];
    let mut current = RationalMatrix::identity(n);
    for k in 1..=n {
        current = &current * t;
        powers.push(current.entries().to_vec());
        let system = RationalMatrix::from_columns(n * n, &powers);
        let ns = super::matrix::nullspace(&system);
        if let Some(rel) = ns.into_iter().find(|v| !v[k].is_zero()) {
            let lead = rel[k].clone();
            return rel.into_iter().map(|c| c / &lead).collect();
        }
    }
    unreachable!("Cayley-Hamilton bounds the minimal polynomial degree by n")
}

/// Rational roots, ascending, via the rational root theorem on the
/// integer-scaled polynomial.
pub fn rational_roots(p: &Poly) -> Vec<Rational> {
    let p = trim(p.clone());
    if p.len() <= 1 {
        return Vec::new();
    }
    let mut roots = Vec::new();
    // Strip zero roots first so the constant term is nonzero.
    let lowest = p.iter().position(|c| !c.is_zero()).unwrap();
    if lowest > 0 {
        roots.push(Rational::zero());
    }
    let p: Poly = p[lowest..].to_vec();
    if p.len() > 1 {
        let scale = p.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let ints: Vec<BigInt> = p
            .iter()
            .map(|c| (c * Rational::from_integer(scale.clone())).to_integer())
            .collect();
        let constant = ints[0].abs();
        let leading = ints.last().unwrap().abs();
        for num in divisors(&constant) {
            for den in divisors(&leading) {
                for sign in [1, -1] {
                    let cand = Rational::new(BigInt::from(sign) * &num, den.clone());
                    if eval(&p, &cand).is_zero() && !roots.contains(&cand) {
                        roots.push(cand);
                    }
                }
            }
        }
    }
    roots.sort();
    roots
}

fn divisors(n: &BigInt) -> Vec<BigInt> {
    // Trial division; the integers here come from small structure constants.
    let mut out = Vec::new();
    let mut d = BigInt::one();
    while &d * &d <= *n {
        if (n % &d).is_zero() {
            out.push(d.clone());
            let other = n / &d;
            if other != d {
                out.push(other);
            }
        }
        d += 1;
    }
    out
}
