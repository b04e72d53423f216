use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::LatticePolytope;
use crate::error::{Error, Result};
use crate::exactmath::{binomial, factorial, MultiPoly, Rational};
use crate::linalg::{self, QMat};

/// `Vol P(h)` as a polynomial in one variable `h_F` per facet.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VolumePolynomial {
    pub poly: MultiPoly,
}

impl VolumePolynomial {
    pub fn eval(&self, h: &[Rational]) -> Rational {
        self.poly.eval(h)
    }

    pub fn at_zero(&self) -> Rational {
        self.poly.constant_term()
    }

    /// `∂^{orders} Vol P(h)` at `h = 0`.
    pub fn derivative_at_zero(&self, orders: &[u32]) -> Rational {
        self.poly.derivative_at_zero(orders)
    }
}

const MAX_SHRINKS: usize = 12;

impl LatticePolytope {
    /// Exact volume of `P(h) = {⟨c,a_F⟩ + λ_F + h_F ≥ 0}` for `h` small
    /// enough that `P(h)` keeps the combinatorial type of `P`. Every moved
    /// vertex must satisfy the inequalities of the facets off it strictly;
    /// otherwise the type has changed and an error is returned.
    pub fn volume_at(&self, h: &[Rational]) -> Result<Rational> {
        if let Some((v, c)) = self.simple_violation() {
            return Err(Error::NotSimple(v, c));
        }
        if h.len() != self.facets.len() {
            return Err(Error::InvalidInput("one shift per facet required".into()));
        }
        let mut points: QMat = Vec::with_capacity(self.coords.len());
        for v in 0..self.coords.len() {
            let on: Vec<usize> = (0..self.facets.len()).filter(|&f| self.facets[f].vertices.contains(&v)).collect();
            // Solve a_F · c = -λ_F - h_F for the facets through v.
            let a: QMat = on
                .iter()
                .map(|&f| self.facets[f].normal.iter().map(|&x| Rational::from(x)).collect())
                .collect();
            let rhs: Vec<Rational> = on.iter().map(|&f| -(Rational::from(self.facets[f].lambda) + &h[f])).collect();
            // c·Aᵀ = rhs
            let c = linalg::q_solve_left(&linalg::q_transpose(&a), &rhs).expect("simple vertex");
            for (g, facet) in self.facets.iter().enumerate() {
                if facet.vertices.contains(&v) {
                    continue;
                }
                let a_g: Vec<Rational> = facet.normal.iter().map(|&x| Rational::from(x)).collect();
                let val = linalg::dot(&a_g, &c) + Rational::from(facet.lambda) + &h[g];
                if !val.is_positive() {
                    return Err(Error::CombinatorialTypeChanged);
                }
            }
            points.push(c);
        }
        Ok(self.volume_with_points(self.faces.len() - 1, &points))
    }

    /// `Vol P(h)` as a polynomial. Products of simplices use the closed form
    /// `Π_blocks (1 + Σ_{F in block} h_F)^m / m!`; otherwise (for `n ≤ 3`)
    /// it is recovered from exact volumes on the grid `h = δ·α`, `|α| ≤ n`,
    /// by Newton forward differences and verified on held-out samples.
    pub fn volume_polynomial(&self) -> Result<VolumePolynomial> {
        if let Some((v, c)) = self.simple_violation() {
            return Err(Error::NotSimple(v, c));
        }
        let poly = match self.product_closed_form() {
            Some(p) => p,
            None => self.interpolated_volume_polynomial()?,
        };
        let vp = VolumePolynomial { poly };
        if vp.at_zero() != self.volume() {
            return Err(Error::Verification("Vol P(0) differs from Vol P".into()));
        }
        if vp.poly.total_degree() != Some(self.dim() as u32) {
            return Err(Error::Verification("volume polynomial has the wrong degree".into()));
        }
        Ok(vp)
    }

    fn vars(&self) -> Vec<String> {
        MultiPoly::var_names("h", self.facets.len())
    }

    fn product_closed_form(&self) -> Option<MultiPoly> {
        let blocks = &self.product.as_ref()?.blocks;
        let vars = self.vars();
        let mut offset = 0;
        let mut total = MultiPoly::constant(vars.clone(), Rational::one());
        for &m in blocks {
            let range = offset..offset + m;
            let mut coeffs = vec![Rational::zero(); self.facets.len()];
            let mut matched = 0;
            for (i, f) in self.facets.iter().enumerate() {
                let support: Vec<usize> = (0..f.normal.len()).filter(|&j| f.normal[j] != 0).collect();
                if support.is_empty() || !support.iter().all(|j| range.contains(j)) {
                    continue;
                }
                let coordinate = support.len() == 1 && f.normal[support[0]] == 1 && f.lambda == 0;
                let slanted = support.len() == m && support.iter().all(|&j| f.normal[j] == -1) && f.lambda == 1;
                if !(coordinate || slanted) {
                    return None;
                }
                coeffs[i] = Rational::one();
                matched += 1;
            }
            if matched != m + 1 {
                return None;
            }
            let lin = MultiPoly::affine(vars.clone(), Rational::one(), &coeffs);
            let scale = Rational::one() / Rational::from_int(factorial(m as u32));
            total = total.mul(&lin.pow(m as u32).scale(&scale));
            offset += m;
        }
        (offset == self.dim()).then_some(total)
    }

    fn interpolated_volume_polynomial(&self) -> Result<MultiPoly> {
        let n = self.dim();
        if n > 3 {
            return Err(Error::InvalidInput(
                "the interpolated volume polynomial is limited to dimension 3".into(),
            ));
        }
        let m = self.facets.len();
        let max_lambda = self.facets.iter().map(|f| f.lambda.abs()).max().unwrap_or(0);
        let mut delta = Rational::new(1, (4 * max_lambda as i64 + 4) * n as i64);
        for _ in 0..MAX_SHRINKS {
            match self.try_interpolate(&delta, n, m) {
                Err(Error::CombinatorialTypeChanged) => delta = delta * Rational::new(1, 2),
                other => return other,
            }
        }
        Err(Error::CombinatorialTypeChanged)
    }

    fn try_interpolate(&self, delta: &Rational, n: usize, m: usize) -> Result<MultiPoly> {
        let alphas = multi_indices(m, n);
        let mut values: BTreeMap<Vec<u32>, Rational> = BTreeMap::new();
        for a in &alphas {
            let h: Vec<Rational> = a.iter().map(|&x| delta * &Rational::from(x as i64)).collect();
            values.insert(a.clone(), self.volume_at(&h)?);
        }
        let vars = self.vars();
        let mut poly = MultiPoly::zero(vars.clone());
        for beta in &alphas {
            let mut diff = Rational::zero();
            for gamma in dominated(beta) {
                let sign = if (beta.iter().sum::<u32>() - gamma.iter().sum::<u32>()) % 2 == 0 { 1 } else { -1 };
                let mult: num_bigint::BigInt = beta
                    .iter()
                    .zip(&gamma)
                    .map(|(&b, &g)| binomial(b as u64, g as u64))
                    .product();
                diff += Rational::from_int(mult * sign) * &values[&gamma];
            }
            if diff.is_zero() {
                continue;
            }
            let mut term = MultiPoly::constant(vars.clone(), diff);
            for (i, &b) in beta.iter().enumerate() {
                term = term.mul(&binomial_in(&vars, i, b, delta));
            }
            poly = poly.add(&term);
        }
        // Held-out checks: one step beyond the grid, and random interior points.
        let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
        let mut checks: Vec<Vec<Rational>> = (0..m)
            .map(|i| {
                (0..m)
                    .map(|j| if i == j { delta * &Rational::from(n as i64 + 1) } else { Rational::zero() })
                    .collect()
            })
            .collect();
        for _ in 0..6 {
            checks.push(
                (0..m)
                    .map(|_| delta * &Rational::new(rng.gen_range(-7..=7), 7 * m as i64))
                    .collect(),
            );
        }
        for h in &checks {
            let exact = self.volume_at(h)?;
            if poly.eval(h) != exact {
                return Err(Error::Verification(format!(
                    "interpolated volume polynomial misses a held-out sample ({} vs {exact})",
                    poly.eval(h)
                )));
            }
        }
        Ok(poly)
    }
}

/// All exponent vectors of length `m` with total at most `n`.
fn multi_indices(m: usize, n: usize) -> Vec<Vec<u32>> {
    fn rec(i: usize, m: usize, left: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if i == m {
            out.push(cur.clone());
            return;
        }
        for k in 0..=left {
            cur.push(k);
            rec(i + 1, m, left - k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, m, n as u32, &mut Vec::new(), &mut out);
    out
}

/// All `γ ≤ β` componentwise.
fn dominated(beta: &[u32]) -> Vec<Vec<u32>> {
    let mut out = vec![vec![]];
    for &b in beta {
        out = out
            .into_iter()
            .flat_map(|prefix: Vec<u32>| {
                (0..=b).map(move |g| {
                    let mut v = prefix.clone();
                    v.push(g);
                    v
                })
            })
            .collect();
    }
    out
}

/// `binom(h_i/δ, b)` as a polynomial.
fn binomial_in(vars: &[String], i: usize, b: u32, delta: &Rational) -> MultiPoly {
    let mut out = MultiPoly::constant(vars.to_vec(), Rational::one());
    let mut coeffs = vec![Rational::zero(); vars.len()];
    coeffs[i] = delta.recip();
    for j in 0..b {
        let factor = MultiPoly::affine(vars.to_vec(), Rational::from(-(j as i64)), &coeffs);
        out = out.mul(&factor);
    }
    out.scale(&(Rational::one() / Rational::from_int(factorial(b))))
}
