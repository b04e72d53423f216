//! Exact scalars and polynomials: rationals, univariate and multivariate
//! polynomials, cyclotomic numbers, Bernoulli numbers and `q`-integers.

pub mod cyclotomic;
pub mod multipoly;
pub mod rational;
pub mod unipoly;

pub use cyclotomic::{cyclotomic_pow, CyclotomicNumber};
pub use multipoly::MultiPoly;
pub use rational::{binomial, factorial, Rational};
pub use unipoly::{interpolate, UniPoly};

use num_bigint::BigInt;
use num_traits::{One, Pow};

/// Bernoulli number `B_j` with `B_1 = +1/2`, i.e. the coefficients of
/// `x / (1 - e^{-x}) = Σ B_j x^j / j!`.
///
/// Uses `Σ_{k=0}^{m} C(m+1, k) B_k = m + 1`.
pub fn bernoulli(j: u32) -> Rational {
    let mut b: Vec<Rational> = Vec::with_capacity(j as usize + 1);
    b.push(Rational::one());
    for m in 1..=j {
        let mut s = Rational::zero();
        for (k, bk) in b.iter().enumerate() {
            s += Rational::from_int(binomial(m as u64 + 1, k as u64)) * bk;
        }
        let next = (Rational::from(m as i64 + 1) - s) / Rational::from(m as i64 + 1);
        b.push(next);
    }
    b.pop().unwrap()
}

/// The `q`-integer `⟦n⟧ = (p^n - 1)/(p - 1) = 1 + p + … + p^{n-1}`.
pub fn gaussian_int(n: u32, p: u64) -> BigInt {
    let p = BigInt::from(p);
    (0..n).map(|i| Pow::pow(&p, i)).fold(BigInt::from(0), |a, b| a + b)
}

/// `⟦n⟧! = ⟦1⟧⟦2⟧⋯⟦n⟧`.
pub fn gaussian_factorial(n: u32, p: u64) -> BigInt {
    (1..=n).map(|i| gaussian_int(i, p)).fold(BigInt::one(), |a, b| a * b)
}

pub fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bernoulli_convention() {
        assert_eq!(bernoulli(0), Rational::one());
        assert_eq!(bernoulli(1), Rational::new(1, 2));
        assert_eq!(bernoulli(2), Rational::new(1, 6));
        assert_eq!(bernoulli(3), Rational::zero());
        assert_eq!(bernoulli(4), Rational::new(-1, 30));
        assert_eq!(bernoulli(12), Rational::new(-691, 2730));
    }

    #[test]
    fn odd_bernoulli_vanish() {
        for k in 2..=10 {
            assert!(bernoulli(2 * k - 1).is_zero(), "B_{}", 2 * k - 1);
        }
    }

    #[test]
    fn q_integers() {
        assert_eq!(gaussian_int(0, 5), BigInt::from(0));
        assert_eq!(gaussian_int(2, 2), BigInt::from(3));
        assert_eq!(gaussian_int(3, 3), BigInt::from(13));
        for p in [2u64, 3, 5, 7, 11] {
            for n in 0..8u32 {
                let lhs = gaussian_int(n, p) * BigInt::from(p - 1) + 1;
                assert_eq!(lhs, Pow::pow(&BigInt::from(p), n));
            }
        }
    }

    #[test]
    fn primes() {
        let ps: Vec<u64> = (0..30).filter(|&n| is_prime(n)).collect();
        assert_eq!(ps, vec![2, 3, 5, 7, 11, 13, 17, 19, 23, 29]);
    }
}
