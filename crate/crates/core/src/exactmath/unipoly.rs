//! Univariate polynomials with rational coefficients.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::Rational;
use crate::error::{Error, Result};

/// Dense coefficient list indexed by degree. The highest stored coefficient
/// is nonzero; the zero polynomial has no coefficients.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct UniPoly {
    coeffs: Vec<Rational>,
}

impl UniPoly {
    pub fn new(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(Rational::is_zero) {
            coeffs.pop();
        }
        UniPoly { coeffs }
    }

    pub fn from_ints(coeffs: &[i64]) -> Self {
        UniPoly::new(coeffs.iter().map(|&c| Rational::from(c)).collect())
    }

    pub fn zero() -> Self {
        UniPoly { coeffs: vec![] }
    }

    pub fn constant(c: Rational) -> Self {
        UniPoly::new(vec![c])
    }

    /// `c * t^d`.
    pub fn monomial(c: Rational, d: usize) -> Self {
        let mut coeffs = vec![Rational::zero(); d + 1];
        coeffs[d] = c;
        UniPoly::new(coeffs)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, or `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Coefficient of `t^l` (zero past the degree).
    pub fn coeff(&self, l: usize) -> Rational {
        self.coeffs.get(l).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn eval(&self, t: &Rational) -> Rational {
        self.coeffs
            .iter()
            .rev()
            .fold(Rational::zero(), |acc, c| acc * t + c)
    }

    pub fn scale(&self, c: &Rational) -> Self {
        UniPoly::new(self.coeffs.iter().map(|a| a * c).collect())
    }

    /// `t ↦ f(s·t)`, i.e. coefficient `l` multiplied by `s^l`.
    pub fn dilate(&self, s: &Rational) -> Self {
        let mut pow = Rational::one();
        let mut out = Vec::with_capacity(self.coeffs.len());
        for c in &self.coeffs {
            out.push(c * &pow);
            pow *= s;
        }
        UniPoly::new(out)
    }

    /// Polynomial with the top-degree term removed.
    pub fn drop_leading(&self) -> Self {
        let mut c = self.coeffs.clone();
        c.pop();
        UniPoly::new(c)
    }

    /// Whether every coefficient is an integer.
    pub fn has_integer_coeffs(&self) -> bool {
        self.coeffs.iter().all(Rational::is_integer)
    }

    pub fn to_string_in(&self, var: &str) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (d, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let mag = c.abs();
            if out.is_empty() {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            let coef = if d > 0 && mag.is_one() {
                String::new()
            } else if d > 0 && !mag.is_integer() {
                format!("({mag})")
            } else {
                mag.to_string()
            };
            out.push_str(&coef);
            match d {
                0 => {}
                1 => out.push_str(var),
                _ => out.push_str(&format!("{var}^{d}")),
            }
        }
        out
    }
}

impl fmt::Display for UniPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_string_in("t"))
    }
}

impl fmt::Debug for UniPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "UniPoly({self})")
    }
}

impl Serialize for UniPoly {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        self.coeffs.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for UniPoly {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        Ok(UniPoly::new(Vec::<Rational>::deserialize(deserializer)?))
    }
}

impl Add for &UniPoly {
    type Output = UniPoly;
    fn add(self, rhs: &UniPoly) -> UniPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        UniPoly::new((0..n).map(|i| self.coeff(i) + rhs.coeff(i)).collect())
    }
}

impl Add for UniPoly {
    type Output = UniPoly;
    fn add(self, rhs: UniPoly) -> UniPoly {
        &self + &rhs
    }
}

impl Sub for &UniPoly {
    type Output = UniPoly;
    fn sub(self, rhs: &UniPoly) -> UniPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        UniPoly::new((0..n).map(|i| self.coeff(i) - rhs.coeff(i)).collect())
    }
}

impl Sub for UniPoly {
    type Output = UniPoly;
    fn sub(self, rhs: UniPoly) -> UniPoly {
        &self - &rhs
    }
}

impl Neg for &UniPoly {
    type Output = UniPoly;
    fn neg(self) -> UniPoly {
        UniPoly::new(self.coeffs.iter().map(|c| -c).collect())
    }
}

impl Mul for &UniPoly {
    type Output = UniPoly;
    fn mul(self, rhs: &UniPoly) -> UniPoly {
        if self.is_zero() || rhs.is_zero() {
            return UniPoly::zero();
        }
        let mut out = vec![Rational::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        UniPoly::new(out)
    }
}

impl Mul for UniPoly {
    type Output = UniPoly;
    fn mul(self, rhs: UniPoly) -> UniPoly {
        &self * &rhs
    }
}

impl std::iter::Sum for UniPoly {
    fn sum<I: Iterator<Item = UniPoly>>(iter: I) -> UniPoly {
        iter.fold(UniPoly::zero(), |a, b| &a + &b)
    }
}

/// The unique polynomial of degree below `points.len()` through every
/// point, by Newton divided differences.
pub fn interpolate(points: &[(Rational, Rational)]) -> Result<UniPoly> {
    for (i, (x, _)) in points.iter().enumerate() {
        if points[..i].iter().any(|(y, _)| y == x) {
            return Err(Error::DuplicateAbscissa(x.to_string()));
        }
    }
    let n = points.len();
    let xs: Vec<&Rational> = points.iter().map(|(x, _)| x).collect();
    let mut dd: Vec<Rational> = points.iter().map(|(_, y)| y.clone()).collect();
    for level in 1..n {
        for i in (level..n).rev() {
            dd[i] = (&dd[i] - &dd[i - 1]) / (xs[i] - xs[i - level]);
        }
    }
    // Horner-style accumulation of the Newton form.
    let mut poly = UniPoly::zero();
    for i in (0..n).rev() {
        let factor = UniPoly::new(vec![-xs[i].clone(), Rational::one()]);
        poly = &(&poly * &factor) + &UniPoly::constant(dd[i].clone());
    }
    Ok(poly)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pts(v: &[(i64, i64)]) -> Vec<(Rational, Rational)> {
        v.iter().map(|&(x, y)| (x.into(), y.into())).collect()
    }

    #[test]
    fn interpolate_square() {
        let p = interpolate(&pts(&[(0, 1), (1, 4), (2, 9)])).unwrap();
        assert_eq!(p, UniPoly::from_ints(&[1, 2, 1]));
    }

    #[test]
    fn interpolate_constant() {
        assert_eq!(interpolate(&pts(&[(0, 1)])).unwrap(), UniPoly::from_ints(&[1]));
    }

    #[test]
    fn interpolate_lower_degree_than_nodes() {
        let p = interpolate(&pts(&[(0, 1), (1, 3), (2, 7), (3, 13)])).unwrap();
        assert_eq!(p, UniPoly::from_ints(&[1, 1, 1]));
    }

    #[test]
    fn interpolate_rejects_duplicates() {
        assert!(matches!(
            interpolate(&pts(&[(0, 1), (0, 2)])),
            Err(Error::DuplicateAbscissa(_))
        ));
    }

    #[test]
    fn display() {
        assert_eq!(UniPoly::from_ints(&[1, 2, 1]).to_string(), "t^2 + 2t + 1");
        let p = UniPoly::new(vec![Rational::one(), Rational::new(3, 2), Rational::new(1, 2)]);
        assert_eq!(p.to_string(), "(1/2)t^2 + (3/2)t + 1");
        assert_eq!(UniPoly::from_ints(&[0, -1, 0, 2]).to_string(), "2t^3 - t");
    }

    #[test]
    fn dilate_scales_coefficients() {
        let e = UniPoly::from_ints(&[1, 2, 1]);
        assert_eq!(e.dilate(&Rational::from(2)), UniPoly::from_ints(&[1, 4, 4]));
    }
}
