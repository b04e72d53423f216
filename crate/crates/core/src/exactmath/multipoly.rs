//! Sparse multivariate polynomials over a fixed, named variable set.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use super::Rational;
use crate::error::{Error, Result};

pub type Exponents = Vec<u32>;

#[derive(Clone, PartialEq, Eq)]
pub struct MultiPoly {
    vars: Vec<String>,
    terms: BTreeMap<Exponents, Rational>,
}

#[derive(Serialize, Deserialize)]
struct MultiPolyRepr {
    variables: Vec<String>,
    terms: Vec<TermRepr>,
}

#[derive(Serialize, Deserialize)]
struct TermRepr {
    exponents: Exponents,
    coeff: Rational,
}

impl MultiPoly {
    pub fn zero(vars: Vec<String>) -> Self {
        MultiPoly { vars, terms: BTreeMap::new() }
    }

    /// Variables named `{prefix}0, {prefix}1, ...`.
    pub fn var_names(prefix: &str, n: usize) -> Vec<String> {
        (0..n).map(|i| format!("{prefix}{i}")).collect()
    }

    pub fn constant(vars: Vec<String>, c: Rational) -> Self {
        let n = vars.len();
        let mut p = MultiPoly::zero(vars);
        p.add_term(vec![0; n], c);
        p
    }

    pub fn variable(vars: Vec<String>, i: usize) -> Self {
        let mut e = vec![0; vars.len()];
        e[i] = 1;
        let mut p = MultiPoly::zero(vars);
        p.add_term(e, Rational::one());
        p
    }

    /// `c0 + Σ c_i x_i`.
    pub fn affine(vars: Vec<String>, c0: Rational, coeffs: &[Rational]) -> Self {
        let n = vars.len();
        assert_eq!(coeffs.len(), n);
        let mut p = MultiPoly::constant(vars, c0);
        for (i, c) in coeffs.iter().enumerate() {
            let mut e = vec![0; n];
            e[i] = 1;
            p.add_term(e, c.clone());
        }
        p
    }

    pub fn nvars(&self) -> usize {
        self.vars.len()
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exponents, &Rational)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, e: Exponents, c: Rational) {
        assert_eq!(e.len(), self.vars.len(), "exponent length mismatch");
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(e).or_insert_with(Rational::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.retain(|_, v| !v.is_zero());
        }
    }

    pub fn coeff(&self, e: &[u32]) -> Rational {
        self.terms.get(e).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn constant_term(&self) -> Rational {
        self.coeff(&vec![0; self.vars.len()])
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(|e| e.iter().sum()).max()
    }

    pub fn add(&self, other: &MultiPoly) -> MultiPoly {
        assert_eq!(self.vars, other.vars);
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &MultiPoly) -> MultiPoly {
        self.add(&other.scale(&Rational::from(-1)))
    }

    pub fn scale(&self, c: &Rational) -> MultiPoly {
        let mut out = MultiPoly::zero(self.vars.clone());
        for (e, a) in &self.terms {
            out.add_term(e.clone(), a * c);
        }
        out
    }

    pub fn mul(&self, other: &MultiPoly) -> MultiPoly {
        assert_eq!(self.vars, other.vars);
        let mut out = MultiPoly::zero(self.vars.clone());
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                let e: Exponents = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                out.add_term(e, c1 * c2);
            }
        }
        out
    }

    pub fn pow(&self, k: u32) -> MultiPoly {
        let mut out = MultiPoly::constant(self.vars.clone(), Rational::one());
        for _ in 0..k {
            out = out.mul(self);
        }
        out
    }

    /// Formal partial derivative `∂^{orders}` (one order per variable).
    pub fn derive(&self, orders: &[u32]) -> MultiPoly {
        assert_eq!(orders.len(), self.vars.len());
        let mut out = MultiPoly::zero(self.vars.clone());
        'terms: for (e, c) in &self.terms {
            let mut coeff = c.clone();
            let mut ne = e.clone();
            for (i, &k) in orders.iter().enumerate() {
                if e[i] < k {
                    continue 'terms;
                }
                for j in 0..k {
                    coeff = coeff * Rational::from((e[i] - j) as i64);
                }
                ne[i] = e[i] - k;
            }
            out.add_term(ne, coeff);
        }
        out
    }

    /// `∂^{orders} f` evaluated at the origin: `orders! · coeff(orders)`.
    pub fn derivative_at_zero(&self, orders: &[u32]) -> Rational {
        let mut c = self.coeff(orders);
        for &k in orders {
            c = c * Rational::from_int(super::rational::factorial(k));
        }
        c
    }

    pub fn eval(&self, point: &[Rational]) -> Rational {
        assert_eq!(point.len(), self.vars.len());
        let mut acc = Rational::zero();
        for (e, c) in &self.terms {
            let mut term = c.clone();
            for (x, &k) in point.iter().zip(e) {
                if k > 0 {
                    term = term * x.pow(k as i32);
                }
            }
            acc += term;
        }
        acc
    }

    /// Substitute each variable by a univariate polynomial in `t`.
    pub fn substitute_univariate(&self, images: &[super::UniPoly]) -> super::UniPoly {
        assert_eq!(images.len(), self.vars.len());
        let mut acc = super::UniPoly::zero();
        for (e, c) in &self.terms {
            let mut term = super::UniPoly::constant(c.clone());
            for (img, &k) in images.iter().zip(e) {
                for _ in 0..k {
                    term = &term * img;
                }
            }
            acc = &acc + &term;
        }
        acc
    }

    /// Rename variables in place of a bijective reindexing: variable `i`
    /// of `self` becomes variable `map[i]` of the result.
    pub fn reindex(&self, vars: Vec<String>, map: &[usize]) -> MultiPoly {
        assert_eq!(map.len(), self.vars.len());
        let mut out = MultiPoly::zero(vars);
        let n = out.nvars();
        for (e, c) in &self.terms {
            let mut ne = vec![0; n];
            for (i, &k) in e.iter().enumerate() {
                ne[map[i]] += k;
            }
            out.add_term(ne, c.clone());
        }
        out
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self.repr()).expect("serializable")
    }

    pub fn from_json(v: &serde_json::Value) -> Result<MultiPoly> {
        let repr: MultiPolyRepr =
            serde_json::from_value(v.clone()).map_err(|e| Error::Parse(e.to_string()))?;
        let mut p = MultiPoly::zero(repr.variables);
        for t in repr.terms {
            if t.exponents.len() != p.nvars() {
                return Err(Error::Parse("exponent vector length mismatch".into()));
            }
            p.add_term(t.exponents, t.coeff);
        }
        Ok(p)
    }

    fn repr(&self) -> MultiPolyRepr {
        MultiPolyRepr {
            variables: self.vars.clone(),
            terms: self
                .terms
                .iter()
                .map(|(e, c)| TermRepr { exponents: e.clone(), coeff: c.clone() })
                .collect(),
        }
    }
}

impl Serialize for MultiPoly {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.repr().serialize(s)
    }
}

impl fmt::Display for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let mut first = true;
        // Highest total degree first.
        let mut terms: Vec<_> = self.terms.iter().collect();
        terms.sort_by(|a, b| {
            let da: u32 = a.0.iter().sum();
            let db: u32 = b.0.iter().sum();
            db.cmp(&da).then_with(|| b.0.cmp(a.0))
        });
        for (e, c) in terms {
            let neg = c.is_negative();
            if first {
                if neg {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if neg { " - " } else { " + " })?;
            }
            first = false;
            let mag = c.abs();
            let mono: Vec<String> = e
                .iter()
                .enumerate()
                .filter(|(_, &k)| k > 0)
                .map(|(i, &k)| {
                    if k == 1 {
                        self.vars[i].clone()
                    } else {
                        format!("{}^{}", self.vars[i], k)
                    }
                })
                .collect();
            if mono.is_empty() {
                write!(f, "{mag}")?;
            } else if mag.is_one() {
                write!(f, "{}", mono.join("*"))?;
            } else {
                write!(f, "({mag})*{}", mono.join("*"))?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "MultiPoly({self})")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn vars(n: usize) -> Vec<String> {
        MultiPoly::var_names("x", n)
    }

    #[test]
    fn product_and_derivative() {
        // (1 + x0 + x1)^2
        let lin = MultiPoly::affine(vars(2), Rational::one(), &[Rational::one(), Rational::one()]);
        let sq = lin.pow(2);
        assert_eq!(sq.coeff(&[1, 1]), Rational::from(2));
        assert_eq!(sq.derivative_at_zero(&[1, 1]), Rational::from(2));
        assert_eq!(sq.derivative_at_zero(&[2, 0]), Rational::from(2));
        assert_eq!(sq.derive(&[1, 0]), lin.scale(&Rational::from(2)));
        assert_eq!(sq.total_degree(), Some(2));
    }

    #[test]
    fn zero_terms_are_dropped() {
        let x = MultiPoly::variable(vars(2), 0);
        assert!(x.sub(&x).is_zero());
    }

    #[test]
    fn json_round_trip() {
        let p = MultiPoly::affine(vars(3), Rational::new(1, 2), &[1.into(), 0.into(), (-3).into()]).pow(2);
        let back = MultiPoly::from_json(&p.to_json()).unwrap();
        assert_eq!(p, back);
    }

    #[test]
    fn eval_matches_expansion() {
        let lin = MultiPoly::affine(vars(2), Rational::one(), &[Rational::from(2), Rational::from(-1)]);
        let cube = lin.pow(3);
        let pt = [Rational::new(1, 3), Rational::new(-2, 5)];
        let direct = lin.eval(&pt).pow(3);
        assert_eq!(cube.eval(&pt), direct);
    }
}
