//! Lattice-point counting in dilates `tP` and Ehrhart polynomials.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::exactmath::{interpolate, Rational, UniPoly};
use crate::lattice::Lattice;
use crate::linalg::{self, ZMat};
use crate::polytope::LatticePolytope;

/// Upper bound on the number of outer fibers a single count may visit.
pub const MAX_OUTER_POINTS: u128 = 20_000_000;

/// `E(P)` together with the counts it was interpolated from.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EhrhartPolynomial {
    pub poly: UniPoly,
    /// `(t, #(tP ∩ M))` for `t = 0..=n`.
    pub samples: Vec<(u64, u128)>,
}

impl EhrhartPolynomial {
    pub fn coeff(&self, l: usize) -> Rational {
        self.poly.coeff(l)
    }
}

/// `#(tP ∩ M)`.
pub fn count_points(p: &LatticePolytope, m: &Lattice, t: i64) -> Result<u128> {
    if t < 0 {
        return Err(Error::InvalidInput(format!("dilation factor t = {t} is negative")));
    }
    if m == p.lattice() {
        count_native(p, t as u64)
    } else {
        count_native(&p.rebase(m)?, t as u64)
    }
}

/// `#(tP ∩ L)` for the polytope's own lattice.
pub fn count_native(p: &LatticePolytope, t: u64) -> Result<u128> {
    let (normals, lambdas, verts) = reduced_system(p);
    count_fibers(&normals, &lambdas, &verts, t as i128)
}

/// The facet system after a unimodular change of coordinates `y = c·U` that
/// shortens the widths of the polytope along the coordinate directions.
fn reduced_system(p: &LatticePolytope) -> (ZMat, Vec<i128>, ZMat) {
    let n = p.dim();
    let coords = p.vertex_coords();
    // Gram matrix of Q(u) = Σ_{v,w} ⟨v − w, u⟩².
    let mut gram = vec![vec![0i128; n]; n];
    for v in coords {
        for w in coords {
            let d: Vec<i128> = v.iter().zip(w).map(|(a, b)| a - b).collect();
            for i in 0..n {
                for j in 0..n {
                    gram[i][j] += d[i] * d[j];
                }
            }
        }
    }
    let form = |a: &[i128], b: &[i128]| -> i128 {
        (0..n).map(|i| (0..n).map(|j| a[i] * gram[i][j] * b[j]).sum::<i128>()).sum()
    };
    // Columns u_i of U, stored as rows here.
    let mut us: ZMat = linalg::z_identity(n);
    let mut changed = true;
    while changed {
        changed = false;
        for i in 0..n {
            for j in 0..n {
                if i == j {
                    continue;
                }
                let qj = form(&us[j], &us[j]);
                if qj == 0 {
                    continue;
                }
                let b = form(&us[i], &us[j]);
                let k = div_round(b, qj);
                if k != 0 {
                    let cand: Vec<i128> = us[i].iter().zip(&us[j]).map(|(a, c)| a - k * c).collect();
                    if form(&cand, &cand) < form(&us[i], &us[i]) {
                        us[i] = cand;
                        changed = true;
                    }
                }
            }
        }
    }
    // y_i = ⟨c, u_i⟩; inequality a·c = (U^{-1} a)·y.
    let u_cols = linalg::z_transpose(&us);
    let u_inv = linalg::q_inverse(&linalg::to_q(&u_cols)).expect("unimodular");
    let normals: ZMat = p
        .facets()
        .iter()
        .map(|f| {
            let a: Vec<Rational> = f.normal.iter().map(|&x| Rational::from(x)).collect();
            u_inv.iter().map(|row| linalg::dot(row, &a).to_i128().expect("unimodular")).collect()
        })
        .collect();
    let lambdas = p.facets().iter().map(|f| f.lambda).collect();
    let verts: ZMat = coords
        .iter()
        .map(|c| us.iter().map(|u| c.iter().zip(u).map(|(a, b)| a * b).sum()).collect())
        .collect();
    (normals, lambdas, verts)
}

fn div_round(a: i128, b: i128) -> i128 {
    // Nearest integer to a/b for b > 0.
    (2 * a + b).div_euclid(2 * b)
}

/// Counts `y ∈ Z^n` with `a_F·y + t·λ_F ≥ 0` for all facets, enumerating all
/// coordinates but the widest one and solving for the remaining interval.
fn count_fibers(normals: &ZMat, lambdas: &[i128], verts: &ZMat, t: i128) -> Result<u128> {
    let n = verts[0].len();
    let lo: Vec<i128> = (0..n).map(|i| verts.iter().map(|v| v[i] * t).min().unwrap()).collect();
    let hi: Vec<i128> = (0..n).map(|i| verts.iter().map(|v| v[i] * t).max().unwrap()).collect();
    let inner = (0..n).max_by_key(|&i| hi[i] - lo[i]).unwrap();
    let outer: Vec<usize> = (0..n).filter(|&i| i != inner).collect();
    let outer_count: u128 = outer.iter().map(|&i| (hi[i] - lo[i] + 1) as u128).product();
    if outer_count > MAX_OUTER_POINTS {
        return Err(Error::BudgetExceeded {
            what: "lattice point count".into(),
            needed: format!("{outer_count} fibers"),
            bound: MAX_OUTER_POINTS.to_string(),
        });
    }
    let mut y: Vec<i128> = lo.clone();
    let mut total: u128 = 0;
    loop {
        let mut lower = lo[inner];
        let mut upper = hi[inner];
        let mut empty = false;
        for (a, &l) in normals.iter().zip(lambdas) {
            let rest: i128 = outer.iter().map(|&i| a[i] * y[i]).sum::<i128>() + t * l;
            let ak = a[inner];
            if ak > 0 {
                lower = lower.max((-rest).div_euclid(ak) + i128::from((-rest).rem_euclid(ak) != 0));
            } else if ak < 0 {
                upper = upper.min(rest.div_euclid(-ak));
            } else if rest < 0 {
                empty = true;
                break;
            }
        }
        if !empty && upper >= lower {
            total += (upper - lower + 1) as u128;
        }
        // Odometer over the outer coordinates.
        let mut idx = 0;
        while idx < outer.len() {
            let c = outer[idx];
            y[c] += 1;
            if y[c] <= hi[c] {
                break;
            }
            y[c] = lo[c];
            idx += 1;
        }
        if idx == outer.len() {
            break;
        }
    }
    Ok(total)
}

/// `E(P)` relative to the polytope's own lattice, interpolated from the
/// counts at `t = 0..=n`. Checks `c_0 = 1`, `c_n = Vol P` and
/// `c_{n−1} = Vol_{n−1}(∂P)/2`.
pub fn ehrhart_native(p: &LatticePolytope) -> Result<EhrhartPolynomial> {
    let n = p.dim();
    let mut samples = Vec::with_capacity(n + 1);
    for t in 0..=n as u64 {
        samples.push((t, count_native(p, t)?));
    }
    let points: Vec<(Rational, Rational)> = samples
        .iter()
        .map(|&(t, c)| (Rational::from(t), Rational::from_int(num_bigint::BigInt::from(c))))
        .collect();
    let poly = interpolate(&points)?;
    let e = EhrhartPolynomial { poly, samples };
    if !e.coeff(0).is_one() {
        return Err(Error::Verification(format!("constant term of E(P) is {}", e.coeff(0))));
    }
    if e.coeff(n) != p.volume() {
        return Err(Error::Verification("leading coefficient of E(P) differs from Vol P".into()));
    }
    if n >= 1 && e.coeff(n - 1) != p.vol_l(n - 1) * Rational::new(1, 2) {
        return Err(Error::Verification("c_{n-1} differs from half the boundary volume".into()));
    }
    Ok(e)
}

/// `E(P_M)`: the Ehrhart polynomial of `P` counted in the lattice `M`.
pub fn ehrhart(p: &LatticePolytope, m: &Lattice) -> Result<EhrhartPolynomial> {
    if m == p.lattice() {
        ehrhart_native(p)
    } else {
        ehrhart_native(&p.rebase(m)?)
    }
}

/// `Ẽ(P) = E(P) − Vol(P)·t^n`.
pub fn regularized(e: &EhrhartPolynomial, p: &LatticePolytope) -> UniPoly {
    &e.poly - &UniPoly::monomial(p.volume(), p.dim())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactmath::binomial;

    #[test]
    fn square_counts() {
        let sq = LatticePolytope::cube(2).unwrap();
        for t in 0..=4 {
            assert_eq!(count_native(&sq, t).unwrap(), ((t + 1) * (t + 1)) as u128);
        }
        assert!(count_points(&sq, sq.lattice(), -1).is_err());
    }

    #[test]
    fn simplex_counts() {
        for n in 1..=4usize {
            let s = LatticePolytope::simplex(n).unwrap();
            for t in 0..=4u64 {
                let expected = binomial(t + n as u64, n as u64);
                assert_eq!(num_bigint::BigInt::from(count_native(&s, t).unwrap()), expected);
            }
        }
    }

    #[test]
    fn polynomials() {
        let cube = LatticePolytope::cube(3).unwrap();
        assert_eq!(ehrhart_native(&cube).unwrap().poly, UniPoly::from_ints(&[1, 3, 3, 1]));
        let tri = LatticePolytope::simplex(2).unwrap();
        let e = ehrhart_native(&tri).unwrap();
        assert_eq!(e.poly, UniPoly::new(vec![Rational::one(), Rational::new(3, 2), Rational::new(1, 2)]));
        let sq = LatticePolytope::cube(2).unwrap();
        assert_eq!(regularized(&ehrhart_native(&sq).unwrap(), &sq), UniPoly::from_ints(&[1, 2]));
        let seg = LatticePolytope::simplex(1).unwrap();
        assert_eq!(regularized(&ehrhart_native(&seg).unwrap(), &seg), UniPoly::from_ints(&[1]));
    }

    #[test]
    fn zero_dilate_is_a_point() {
        let m = Lattice::standard(3).scaled(&Rational::new(1, 5));
        let p = LatticePolytope::prism().unwrap();
        assert_eq!(count_points(&p, &m, 0).unwrap(), 1);
    }
}
