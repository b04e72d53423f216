//! Exact arithmetic in cyclotomic fields `Q(ζ_m)`.
//!
//! Elements are polynomials in `ζ_m` of degree below `φ(m)`, reduced modulo
//! the `m`-th cyclotomic polynomial, so the power basis `1, ζ, …, ζ^{φ(m)-1}`
//! gives a canonical form. Elements of different conductors are combined in
//! `Q(ζ_lcm)`.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_integer::Integer;

use super::Rational;
use crate::error::{Error, Result};

#[derive(Clone)]
pub struct CyclotomicNumber {
    conductor: u64,
    /// Monic `Φ_m`, low degree first.
    modulus: Arc<[i64]>,
    /// Reduced coefficients, length exactly `φ(m)`.
    coeffs: Vec<Rational>,
}

/// Integer coefficients of the `m`-th cyclotomic polynomial, low degree first.
pub fn cyclotomic_polynomial(m: u64) -> Vec<i64> {
    assert!(m >= 1);
    let mut num: Vec<i64> = vec![1];
    let mut den: Vec<i64> = vec![1];
    for d in 1..=m {
        if !m.is_multiple_of(d) {
            continue;
        }
        // x^d - 1
        let mut f = vec![0i64; d as usize + 1];
        f[0] = -1;
        f[d as usize] = 1;
        match mobius(m / d) {
            1 => num = mul_int(&num, &f),
            -1 => den = mul_int(&den, &f),
            _ => {}
        }
    }
    div_exact_int(&num, &den)
}

fn mobius(mut n: u64) -> i32 {
    let mut result = 1;
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            n /= p;
            if n.is_multiple_of(p) {
                return 0;
            }
            result = -result;
        }
        p += 1;
    }
    if n > 1 {
        result = -result;
    }
    result
}

pub fn euler_phi(m: u64) -> u64 {
    (1..=m).filter(|k| k.gcd(&m) == 1).count() as u64
}

fn mul_int(a: &[i64], b: &[i64]) -> Vec<i64> {
    let mut out = vec![0i64; a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

/// Exact division of integer polynomials with monic (up to sign) divisor.
fn div_exact_int(num: &[i64], den: &[i64]) -> Vec<i64> {
    let mut rem = num.to_vec();
    let dl = den.len();
    let lead = *den.last().unwrap();
    assert!(lead == 1 || lead == -1);
    let mut q = vec![0i64; rem.len() + 1 - dl];
    for i in (0..q.len()).rev() {
        let c = rem[i + dl - 1] * lead;
        q[i] = c;
        for (j, d) in den.iter().enumerate() {
            rem[i + j] -= c * d;
        }
    }
    assert!(rem.iter().all(|&r| r == 0), "inexact cyclotomic division");
    q
}

fn reduce(coeffs: Vec<Rational>, modulus: &[i64]) -> Vec<Rational> {
    let deg = modulus.len() - 1;
    let mut c = coeffs;
    if c.len() < deg {
        c.resize(deg, Rational::zero());
        return c;
    }
    for i in (deg..c.len()).rev() {
        if c[i].is_zero() {
            continue;
        }
        let lead = c[i].clone();
        for (j, &m) in modulus.iter().enumerate().take(deg) {
            if m != 0 {
                let idx = i - deg + j;
                c[idx] = &c[idx] - &(&lead * &Rational::from(m));
            }
        }
        c[i] = Rational::zero();
    }
    c.truncate(deg);
    c
}

// Dense polynomial helpers over Q used by the inverse computation.
fn trim(p: &mut Vec<Rational>) {
    while p.last().is_some_and(Rational::is_zero) {
        p.pop();
    }
}

fn poly_divrem(a: &[Rational], b: &[Rational]) -> (Vec<Rational>, Vec<Rational>) {
    let mut r = a.to_vec();
    trim(&mut r);
    let db = b.len() - 1;
    let lead = b[db].clone();
    if r.len() < b.len() {
        return (vec![], r);
    }
    let mut q = vec![Rational::zero(); r.len() - db];
    while r.len() > db && !r.is_empty() {
        let shift = r.len() - 1 - db;
        let c = r.last().unwrap() / &lead;
        for (j, bj) in b.iter().enumerate() {
            r[shift + j] = &r[shift + j] - &(&c * bj);
        }
        q[shift] = c;
        r.pop();
        trim(&mut r);
    }
    (q, r)
}

fn poly_mul(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    if a.is_empty() || b.is_empty() {
        return vec![];
    }
    let mut out = vec![Rational::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

fn poly_sub(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    let n = a.len().max(b.len());
    let mut out: Vec<Rational> = (0..n)
        .map(|i| {
            let x = a.get(i).cloned().unwrap_or_default();
            let y = b.get(i).cloned().unwrap_or_default();
            x - y
        })
        .collect();
    trim(&mut out);
    out
}

impl CyclotomicNumber {
    fn with_modulus(conductor: u64, modulus: Arc<[i64]>, coeffs: Vec<Rational>) -> Self {
        let coeffs = reduce(coeffs, &modulus);
        CyclotomicNumber { conductor, modulus, coeffs }
    }

    fn modulus_for(m: u64) -> Arc<[i64]> {
        cyclotomic_polynomial(m).into()
    }

    pub fn from_rational(m: u64, q: Rational) -> Self {
        Self::with_modulus(m, Self::modulus_for(m), vec![q])
    }

    pub fn zero(m: u64) -> Self {
        Self::from_rational(m, Rational::zero())
    }

    pub fn one(m: u64) -> Self {
        Self::from_rational(m, Rational::one())
    }

    /// `ζ_m^e`, reduced.
    pub fn zeta_pow(m: u64, e: i64) -> Self {
        assert!(m >= 1);
        let e = e.rem_euclid(m as i64) as usize;
        let mut c = vec![Rational::zero(); e + 1];
        c[e] = Rational::one();
        Self::with_modulus(m, Self::modulus_for(m), c)
    }

    pub fn conductor(&self) -> u64 {
        self.conductor
    }

    /// Coefficients on the power basis, length `φ(m)`.
    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Rational::is_zero)
    }

    /// True iff the reduced form is a constant.
    pub fn is_rational(&self) -> bool {
        self.coeffs.iter().skip(1).all(Rational::is_zero)
    }

    pub fn to_rational(&self) -> Option<Rational> {
        self.is_rational().then(|| self.coeffs[0].clone())
    }

    /// Like [`to_rational`](Self::to_rational) but an error naming `what`
    /// when the value is irrational.
    pub fn expect_rational(&self, what: &str) -> Result<Rational> {
        self.to_rational()
            .ok_or_else(|| Error::NotRational(format!("{what}: {self}")))
    }

    /// The same element viewed in `Q(ζ_target)`; `target` must be a
    /// multiple of the conductor.
    pub fn lift(&self, target: u64) -> Self {
        if target == self.conductor {
            return self.clone();
        }
        assert!(target.is_multiple_of(self.conductor), "lift target must be a multiple");
        let step = (target / self.conductor) as usize;
        let mut c = vec![Rational::zero(); (self.coeffs.len().max(1) - 1) * step + 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            c[i * step] = a.clone();
        }
        Self::with_modulus(target, Self::modulus_for(target), c)
    }

    fn common(a: &Self, b: &Self) -> (Self, Self) {
        if a.conductor == b.conductor {
            return (a.clone(), b.clone());
        }
        let m = a.conductor.lcm(&b.conductor);
        (a.lift(m), b.lift(m))
    }

    pub fn scale(&self, q: &Rational) -> Self {
        CyclotomicNumber {
            conductor: self.conductor,
            modulus: self.modulus.clone(),
            coeffs: self.coeffs.iter().map(|c| c * q).collect(),
        }
    }

    /// Multiplicative inverse by the extended Euclidean algorithm against
    /// `Φ_m`. Panics on zero.
    pub fn inverse(&self) -> Self {
        assert!(!self.is_zero(), "inverse of zero in Q(zeta)");
        let modulus: Vec<Rational> = self.modulus.iter().map(|&c| Rational::from(c)).collect();
        let mut a = self.coeffs.clone();
        trim(&mut a);
        // Invariant: s_i * self ≡ r_i (mod Φ_m).
        let (mut r0, mut r1) = (modulus, a);
        let (mut s0, mut s1): (Vec<Rational>, Vec<Rational>) = (vec![], vec![Rational::one()]);
        while r1.len() > 1 {
            let (q, r) = poly_divrem(&r0, &r1);
            let s = poly_sub(&s0, &poly_mul(&q, &s1));
            r0 = std::mem::replace(&mut r1, r);
            s0 = std::mem::replace(&mut s1, s);
        }
        // r1 is a nonzero constant because Φ_m is irreducible.
        assert_eq!(r1.len(), 1, "element not invertible modulo the cyclotomic polynomial");
        let c = r1[0].recip();
        let inv: Vec<Rational> = s1.iter().map(|x| x * &c).collect();
        Self::with_modulus(self.conductor, self.modulus.clone(), inv)
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut out = Self::with_modulus(self.conductor, self.modulus.clone(), vec![Rational::one()]);
        for _ in 0..e {
            out = &out * self;
        }
        out
    }

    /// Numerical value `Σ c_j exp(2πij/m)` as `(re, im)`.
    pub fn to_complex(&self) -> (f64, f64) {
        let m = self.conductor as f64;
        let mut re = 0.0;
        let mut im = 0.0;
        for (j, c) in self.coeffs.iter().enumerate() {
            let ang = 2.0 * std::f64::consts::PI * j as f64 / m;
            let v = c.to_f64();
            re += v * ang.cos();
            im += v * ang.sin();
        }
        (re, im)
    }
}

impl PartialEq for CyclotomicNumber {
    fn eq(&self, other: &Self) -> bool {
        let (a, b) = Self::common(self, other);
        a.coeffs == b.coeffs
    }
}

impl Eq for CyclotomicNumber {}

impl fmt::Display for CyclotomicNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(q) = self.to_rational() {
            return write!(f, "{q}");
        }
        let mut parts = Vec::new();
        for (j, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            parts.push(match j {
                0 => format!("{c}"),
                1 => format!("({c})*z{}", self.conductor),
                _ => format!("({c})*z{}^{j}", self.conductor),
            });
        }
        f.write_str(&parts.join(" + "))
    }
}

impl fmt::Debug for CyclotomicNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Cyc[{}]({self})", self.conductor)
    }
}

impl Add for &CyclotomicNumber {
    type Output = CyclotomicNumber;
    fn add(self, rhs: &CyclotomicNumber) -> CyclotomicNumber {
        let (a, b) = CyclotomicNumber::common(self, rhs);
        let coeffs = a.coeffs.iter().zip(&b.coeffs).map(|(x, y)| x + y).collect();
        CyclotomicNumber { conductor: a.conductor, modulus: a.modulus, coeffs }
    }
}

impl Sub for &CyclotomicNumber {
    type Output = CyclotomicNumber;
    fn sub(self, rhs: &CyclotomicNumber) -> CyclotomicNumber {
        let (a, b) = CyclotomicNumber::common(self, rhs);
        let coeffs = a.coeffs.iter().zip(&b.coeffs).map(|(x, y)| x - y).collect();
        CyclotomicNumber { conductor: a.conductor, modulus: a.modulus, coeffs }
    }
}

impl Neg for &CyclotomicNumber {
    type Output = CyclotomicNumber;
    fn neg(self) -> CyclotomicNumber {
        self.scale(&Rational::from(-1))
    }
}

impl Mul for &CyclotomicNumber {
    type Output = CyclotomicNumber;
    fn mul(self, rhs: &CyclotomicNumber) -> CyclotomicNumber {
        let (a, b) = CyclotomicNumber::common(self, rhs);
        let prod = poly_mul(&a.coeffs, &b.coeffs);
        CyclotomicNumber::with_modulus(a.conductor, a.modulus, prod)
    }
}

macro_rules! owned_ops {
    ($tr:ident, $m:ident) => {
        impl $tr for CyclotomicNumber {
            type Output = CyclotomicNumber;
            fn $m(self, rhs: CyclotomicNumber) -> CyclotomicNumber {
                (&self).$m(&rhs)
            }
        }
    };
}
owned_ops!(Add, add);
owned_ops!(Sub, sub);
owned_ops!(Mul, mul);

/// `ζ_m^e`, reduced to canonical form.
pub fn cyclotomic_pow(m: u64, e: i64) -> CyclotomicNumber {
    CyclotomicNumber::zeta_pow(m, e)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn small_cyclotomic_polynomials() {
        assert_eq!(cyclotomic_polynomial(1), vec![-1, 1]);
        assert_eq!(cyclotomic_polynomial(2), vec![1, 1]);
        assert_eq!(cyclotomic_polynomial(4), vec![1, 0, 1]);
        assert_eq!(cyclotomic_polynomial(6), vec![1, -1, 1]);
        assert_eq!(cyclotomic_polynomial(12), vec![1, 0, -1, 0, 1]);
        for m in 1..40 {
            assert_eq!(cyclotomic_polynomial(m).len() as u64 - 1, euler_phi(m));
        }
    }

    #[test]
    fn roots_of_unity() {
        assert_eq!(cyclotomic_pow(2, 1).to_rational(), Some(Rational::from(-1)));
        assert_eq!(cyclotomic_pow(4, 2).to_rational(), Some(Rational::from(-1)));
        let s = &cyclotomic_pow(3, 1) + &cyclotomic_pow(3, 2);
        assert_eq!(s.to_rational(), Some(Rational::from(-1)));
        for m in 1..15u64 {
            assert_eq!(cyclotomic_pow(m, m as i64), CyclotomicNumber::one(m));
            assert_eq!(cyclotomic_pow(m, -1) * cyclotomic_pow(m, 1), CyclotomicNumber::one(m));
        }
    }

    #[test]
    fn mixed_conductors() {
        // ζ_4 * ζ_4 = -1 = ζ_6^3
        let a = &cyclotomic_pow(4, 1) * &cyclotomic_pow(4, 1);
        assert_eq!(a, cyclotomic_pow(6, 3));
        // ζ_3 = ζ_6^2
        assert_eq!(cyclotomic_pow(3, 1), cyclotomic_pow(6, 2));
        assert_eq!(cyclotomic_pow(3, 1).lift(12), cyclotomic_pow(12, 4));
    }

    #[test]
    fn inverse_of_one_minus_zeta() {
        for m in 2..13u64 {
            for e in 1..m as i64 {
                let x = &CyclotomicNumber::one(m) - &cyclotomic_pow(m, e);
                let inv = x.inverse();
                assert_eq!(&x * &inv, CyclotomicNumber::one(m), "m={m} e={e}");
            }
        }
    }

    #[test]
    fn galois_symmetric_sum_is_rational() {
        // Σ_{j=1}^{m-1} 1/(1-ζ^j) = (m-1)/2
        for m in 2..10u64 {
            let mut s = CyclotomicNumber::zero(m);
            for j in 1..m as i64 {
                s = &s + &(&CyclotomicNumber::one(m) - &cyclotomic_pow(m, j)).inverse();
            }
            assert_eq!(s.expect_rational("sum").unwrap(), Rational::new(m as i64 - 1, 2));
        }
    }

    fn arb_element(m: u64) -> impl Strategy<Value = CyclotomicNumber> {
        let d = euler_phi(m) as usize;
        proptest::collection::vec((-5i64..6, 1i64..4), d).prop_map(move |v| {
            let coeffs = v.into_iter().map(|(n, q)| Rational::new(n, q)).collect();
            CyclotomicNumber::with_modulus(m, CyclotomicNumber::modulus_for(m), coeffs)
        })
    }

    proptest! {
        #[test]
        fn ring_axioms((a, b, c) in (1u64..13).prop_flat_map(|m| (arb_element(m), arb_element(m), arb_element(m)))) {
            let m = a.conductor();
            prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
            prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
            prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
            prop_assert_eq!(&a * &b, &b * &a);
            if !a.is_zero() {
                prop_assert_eq!(&a * &a.inverse(), CyclotomicNumber::one(m));
            }
        }
    }
}
