//! Todd operators of simple lattice polytopes: circle coefficients
//! `c(a,k)`, the coefficients `A(f,π)` of the Todd operator, the resulting
//! Ehrhart coefficients, and the distribution relations among `c(a,k)`.

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use num_integer::Integer;
use rayon::prelude::*;
use serde::Serialize;

use crate::ehrhart::ehrhart_native;
use crate::error::{Error, Result};
use crate::exactmath::{bernoulli, factorial, CyclotomicNumber, Rational};
use crate::grassmann::{grassmannian_count, nu_closed, FiniteSubspace};
use crate::hecke::{
    normal_space_mod_p, normals_in_superlattice, tangent_space_mod_p, to_fp, MAX_SUPERLATTICES,
};
use crate::lattice::{enumerate_superlattices_of, reduction_mod_p, Lattice};
use crate::linalg::ZMat;
use crate::polytope::{cone_index, parallelepiped_points, LatticePolytope};

/// `c(a,0), …, c(a,kmax)`: the coefficients of `x/(1 − a·e^{−x})`, found by
/// exact power series division in the field of `a`.
pub fn circle_series(a: &CyclotomicNumber, kmax: usize) -> Vec<CyclotomicNumber> {
    let m = a.conductor();
    let one = CyclotomicNumber::one(m);
    let sign = |j: usize| if j.is_multiple_of(2) { Rational::one() } else { -Rational::one() };
    let inv_fact = |j: usize| Rational::one() / Rational::from_int(factorial(j as u32));
    let mut c: Vec<CyclotomicNumber> = Vec::with_capacity(kmax + 1);
    if *a == one {
        // (1 − e^{−x})/x = Σ (−1)^j x^j/(j+1)!
        let d: Vec<Rational> = (0..=kmax).map(|j| sign(j) * inv_fact(j + 1)).collect();
        for k in 0..=kmax {
            let mut v = if k == 0 { Rational::one() } else { Rational::zero() };
            for j in 1..=k {
                v -= &(&d[j] * c[k - j].to_rational().expect("rational"));
            }
            c.push(CyclotomicNumber::from_rational(m, v));
        }
        return c;
    }
    // 1 − a·e^{−x} = (1 − a) − a·Σ_{j≥1} (−1)^j x^j/j!
    let d0_inv = (&one - a).inverse();
    let d: Vec<CyclotomicNumber> = (0..=kmax).map(|j| a.scale(&(-(sign(j) * inv_fact(j))))).collect();
    for k in 0..=kmax {
        let mut v = if k == 1 { one.clone() } else { CyclotomicNumber::zero(m) };
        for j in 1..=k {
            v = &v - &(&d[j] * &c[k - j]);
        }
        c.push(&v * &d0_inv);
    }
    c
}

/// `c(a,k)`. For `a = 1` this is `B_k/k!`.
pub fn circle_coefficient(a: &CyclotomicNumber, k: usize) -> CyclotomicNumber {
    circle_series(a, k).pop().expect("nonempty series")
}

/// A circle coefficient with its argument, for reporting.
#[derive(Clone, Debug, Serialize)]
pub struct CircleCoefficient {
    pub a: String,
    pub k: usize,
    pub value: String,
    pub rational: Option<Rational>,
}

impl CircleCoefficient {
    pub fn new(a: &CyclotomicNumber, k: usize) -> Self {
        let value = circle_coefficient(a, k);
        CircleCoefficient { a: a.to_string(), k, value: value.to_string(), rational: value.to_rational() }
    }
}

/// Checks `Σ_{j=1}^{n−1} c(ω^j,k) = (n^k − 1)B_k/k!` with `ω = e^{2πi/n}`
/// and returns the common value.
pub fn distribution_check(n: u64, k: usize) -> Result<Rational> {
    if n < 2 || k < 1 {
        return Err(Error::InvalidInput(format!("distribution relation needs n ≥ 2 and k ≥ 1, got n={n}, k={k}")));
    }
    let mut total = CyclotomicNumber::zero(n);
    for j in 1..n {
        total = &total + &circle_coefficient(&CyclotomicNumber::zeta_pow(n, j as i64), k);
    }
    let lhs = total.expect_rational(&format!("Σ c(ω^j,{k}) for n = {n}"))?;
    let rhs = (Rational::from(n).pow(k as i32) - Rational::one()) * bernoulli(k as u32)
        / Rational::from_int(factorial(k as u32));
    if lhs != rhs {
        return Err(Error::Verification(format!("distribution relation n={n}, k={k}: {lhs} ≠ {rhs}")));
    }
    Ok(lhs)
}

/// `θ_k(u) = (−1)^k k!·c(e^{−2πiu}, k)` in `Q(ζ_d)`, `d` the denominator of
/// `u`. Real for even `k`, purely imaginary for odd `k` unless zero.
pub fn theta(k: usize, u: &Rational) -> CyclotomicNumber {
    let d = u64::try_from(u.denom().clone()).expect("small denominator");
    let r = i64::try_from(u.numer().clone()).expect("small numerator");
    let a = CyclotomicNumber::zeta_pow(d, -r);
    let sign = if k.is_multiple_of(2) { Rational::one() } else { -Rational::one() };
    circle_coefficient(&a, k).scale(&(sign * Rational::from_int(factorial(k as u32))))
}

/// Numerical comparison of `Σ_{m∈Z} (m+u)^{−k}` with `−(2πi)^k/k!·θ_k(u)`.
#[derive(Clone, Debug, Serialize)]
pub struct HurwitzReport {
    pub k: usize,
    pub u: Rational,
    pub series: f64,
    pub closed_re: f64,
    pub closed_im: f64,
    pub error: f64,
}

/// Terms of the symmetric partial sum on each side.
pub const HURWITZ_TERMS: i64 = 10_000;
pub const HURWITZ_TOLERANCE: f64 = 1e-9;

/// Sums `(m+u)^{−k}` over `|m| < C` and adds the midpoint estimate of both
/// tails, then compares with the closed form from `θ_k(u)`.
pub fn hurwitz_numeric_check(k: usize, u: &Rational) -> Result<HurwitzReport> {
    if k < 2 || !u.is_positive() || *u >= Rational::one() {
        return Err(Error::InvalidInput(format!("need k ≥ 2 and 0 < u < 1, got k={k}, u={u}")));
    }
    let uf = u.to_f64();
    let kf = k as i32;
    let c = HURWITZ_TERMS;
    let mut terms: Vec<f64> = (-(c - 1)..c).map(|m| (m as f64 + uf).powi(-kf)).collect();
    terms.sort_by(|a, b| a.abs().partial_cmp(&b.abs()).expect("finite"));
    let mut series: f64 = terms.iter().sum();
    let cf = c as f64;
    let kk = (k - 1) as f64;
    let sign = if k.is_multiple_of(2) { 1.0 } else { -1.0 };
    series += (cf - 0.5 + uf).powf(-kk) / kk + sign * (cf - 0.5 - uf).powf(-kk) / kk;

    let (tr, ti) = theta(k, u).to_complex();
    // (2πi)^k = (2π)^k · i^k
    let mag = (2.0 * std::f64::consts::PI).powi(kf) / factorial(k as u32).to_string().parse::<f64>().expect("small");
    let (ir, ii) = match k % 4 {
        0 => (1.0, 0.0),
        1 => (0.0, 1.0),
        2 => (-1.0, 0.0),
        _ => (0.0, -1.0),
    };
    let closed_re = -mag * (ir * tr - ii * ti);
    let closed_im = -mag * (ir * ti + ii * tr);
    let error = ((series - closed_re).powi(2) + closed_im.powi(2)).sqrt();
    let report = HurwitzReport { k, u: u.clone(), series, closed_re, closed_im, error };
    if error > HURWITZ_TOLERANCE {
        return Err(Error::Verification(format!(
            "zeta({k},{u}) ≈ {series} but the closed form gives {closed_re} + {closed_im}i"
        )));
    }
    Ok(report)
}

/// `Σ_{g ∈ Q(σ) ∩ L} Π_i c(a_i(g), parts_i)` for the simplicial cone `σ`
/// spanned by `generators`, where `a_i(g) = e^{2πiρ_i(g)}`. The sum is
/// Galois invariant, so it is returned as a rational.
pub fn gamma_coefficient(generators: &ZMat, parts: &[u32]) -> Result<Rational> {
    assert_eq!(generators.len(), parts.len());
    let d = cone_index(generators).max(1);
    let kmax = parts.iter().copied().max().unwrap_or(0) as usize;
    let mut series: HashMap<i64, Vec<CyclotomicNumber>> = HashMap::new();
    let mut total = CyclotomicNumber::zero(d);
    for g in parallelepiped_points(generators) {
        let mut term = CyclotomicNumber::one(d);
        for (rho, &k) in g.rho.iter().zip(parts) {
            let e = (rho * Rational::from(d)).to_i64().expect("ρ has denominator dividing the index");
            let s = series.entry(e).or_insert_with(|| circle_series(&CyclotomicNumber::zeta_pow(d, e), kmax));
            if s[k as usize].is_zero() {
                term = CyclotomicNumber::zero(d);
                break;
            }
            term = &term * &s[k as usize];
        }
        total = &total + &term;
    }
    total.expect_rational("Todd coefficient A(f,π)")
}

/// One term `A(f,π)·∂_f^π` of the degree `l` part of the Todd operator.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ToddTerm {
    pub face: usize,
    /// `(facet, π(F))` over the facets `F ⊇ f`, all parts positive.
    pub partition: Vec<(usize, u32)>,
    pub coefficient: Rational,
}

impl ToddTerm {
    /// Differentiation orders indexed by facet.
    pub fn orders(&self, facets: usize) -> Vec<u32> {
        let mut o = vec![0; facets];
        for &(f, k) in &self.partition {
            o[f] = k;
        }
        o
    }
}

/// Compositions of `total` into `parts` positive integers, in lex order.
pub fn compositions(total: u32, parts: usize) -> Vec<Vec<u32>> {
    if parts == 0 {
        return if total == 0 { vec![vec![]] } else { vec![] };
    }
    let mut out = Vec::new();
    for first in 1..=total {
        for mut rest in compositions(total - first, parts - 1) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

/// The degree `l` part of the Todd operator of the normal fan, one term per
/// face of codimension at most `l` and per composition of `l` over the
/// facets containing it.
pub fn todd_terms(p: &LatticePolytope, l: usize) -> Result<Vec<ToddTerm>> {
    let fan = p.normal_fan()?;
    let n = p.dim();
    let faces: Vec<usize> = (0..p.faces().len())
        .filter(|&i| {
            let codim = n - p.faces()[i].dim;
            if l == 0 { codim == 0 } else { codim >= 1 && codim <= l }
        })
        .collect();
    let per_face: Vec<Vec<ToddTerm>> = faces
        .par_iter()
        .map(|&i| {
            let cone = fan.cone(i);
            compositions(l as u32, cone.dim())
                .into_iter()
                .map(|parts| {
                    let coefficient = gamma_coefficient(&cone.generators, &parts)?;
                    let partition = cone.facets.iter().copied().zip(parts).collect();
                    Ok(ToddTerm { face: i, partition, coefficient })
                })
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<_>>()?;
    Ok(per_face.into_iter().flatten().collect())
}

/// `c_{n−l} = Td_l(Σ,∂h) Vol P(h)|_{h=0}`.
pub fn kp_coefficient(p: &LatticePolytope, l: usize) -> Result<Rational> {
    if l > p.dim() {
        return Ok(Rational::zero());
    }
    let vp = p.volume_polynomial()?;
    let m = p.facets().len();
    Ok(todd_terms(p, l)?
        .iter()
        .map(|t| &t.coefficient * vp.derivative_at_zero(&t.orders(m)))
        .sum())
}

/// All coefficients `c_0, …, c_n` from the Todd operator, each checked
/// against the interpolated Ehrhart polynomial.
pub fn kp_check(p: &LatticePolytope) -> Result<Vec<Rational>> {
    let n = p.dim();
    let e = ehrhart_native(p)?;
    let mut coeffs = vec![Rational::zero(); n + 1];
    for l in 0..=n {
        let c = kp_coefficient(p, l)?;
        if c != e.coeff(n - l) {
            return Err(Error::Verification(format!(
                "Todd operator gives c_{} = {c}, lattice points give {}",
                n - l,
                e.coeff(n - l)
            )));
        }
        coeffs[n - l] = c;
    }
    Ok(coeffs)
}

fn squarefree_terms(p: &LatticePolytope, faces: &[usize]) -> Result<Vec<Rational>> {
    let fan = p.normal_fan()?;
    faces
        .iter()
        .map(|&face| {
            let cone = fan.cone(face);
            let a = gamma_coefficient(&cone.generators, &vec![1; cone.dim()])?;
            Ok(a * p.face_volume(face) / Rational::from(cone.index()))
        })
        .collect()
}

fn superlattices(p: &LatticePolytope, prime: u64, k: usize) -> Result<Vec<Lattice>> {
    let count = grassmannian_count(k as i64, p.dim() as i64, prime);
    if count > MAX_SUPERLATTICES.into() {
        return Err(Error::BudgetExceeded {
            what: format!("superlattice family for n={}, k={k}, p={prime}", p.dim()),
            needed: count.to_string(),
            bound: MAX_SUPERLATTICES.to_string(),
        });
    }
    Ok(enumerate_superlattices_of(p.lattice(), prime, k)?.lattices().cloned().collect())
}

/// Both sides of the squarefree term identity for one face.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SquarefreeReport {
    pub face: usize,
    pub codim: usize,
    /// `Σ_{M∈ℒ_k} A(f_M,𝟏)·Vol f_M/Ind σ_{f_M}`.
    pub lhs: Rational,
    /// `ν_{n,k,n−l}(p)·A(f,𝟏)·Vol f/Ind σ_f`.
    pub rhs: Rational,
}

/// Sums the squarefree Todd term `A(f_M,𝟏)·Vol f_M/Ind σ_{f_M}` over
/// `M ∈ ℒ_k`, using the actual normal fans of the polytopes `P_M`, and
/// compares with `ν_{n,k,n−l}(p)` times the same term for `P`.
pub fn squarefree_term_check(p: &LatticePolytope, face: usize, prime: u64, k: usize) -> Result<SquarefreeReport> {
    Ok(squarefree_term_faces(p, &[face], prime, k)?.remove(0))
}

/// [`squarefree_term_check`] for several faces, sharing the polytopes
/// `P_M` between them.
pub fn squarefree_term_faces(
    p: &LatticePolytope,
    faces: &[usize],
    prime: u64,
    k: usize,
) -> Result<Vec<SquarefreeReport>> {
    let n = p.dim();
    let base = squarefree_terms(p, faces)?;
    let lattices = superlattices(p, prime, k)?;
    let per_lattice: Vec<Vec<Rational>> = lattices
        .par_iter()
        .map(|m| squarefree_terms(&p.rebase(m)?, faces))
        .collect::<Result<_>>()?;
    let mut reports = Vec::with_capacity(faces.len());
    for (i, &face) in faces.iter().enumerate() {
        let codim = n - p.faces()[face].dim;
        let lhs: Rational = per_lattice.iter().map(|terms| terms[i].clone()).sum();
        let rhs = Rational::from_int(nu_closed(n, k, n - codim, prime)) * &base[i];
        if lhs != rhs {
            return Err(Error::Verification(format!(
                "squarefree term of face {face} (codim {codim}) at p={prime}, k={k}: {lhs} ≠ {rhs}"
            )));
        }
        reports.push(SquarefreeReport { face, codim, lhs, rhs });
    }
    Ok(reports)
}

/// For the cube `[0,1]^l` and each vertex, checks
/// `Σ_{M∈ℒ_j} A(f_M,𝟏)/Ind σ_{f_M} = G_{j,l}(p)/2^l`.
pub fn sqrfree_identity_check(l: usize, j: usize, prime: u64) -> Result<Rational> {
    let cube = LatticePolytope::cube(l)?;
    let expected = Rational::from_int(grassmannian_count(j as i64, l as i64, prime)) / Rational::from(2i64).pow(l as i32);
    let lattices = superlattices(&cube, prime, j)?;
    for (v, _) in cube.faces_of_dim(0) {
        let sum: Rational = lattices
            .par_iter()
            .map(|m| {
                let pm = cube.rebase(m)?;
                let cone = pm.normal_fan()?.cone(v).clone();
                Ok(gamma_coefficient(&cone.generators, &vec![1; l])? / Rational::from(cone.index()))
            })
            .collect::<Result<Vec<Rational>>>()?
            .into_iter()
            .sum();
        if sum != expected {
            return Err(Error::Verification(format!("vertex {v} of the {l}-cube at p={prime}, j={j}: {sum} ≠ {expected}")));
        }
    }
    Ok(expected)
}

/// `A*(α,β) = Σ_{j=1}^{p−1} 1/((1 − ω^{αj})(1 − ω^{βj}))`, `ω = e^{2πi/p}`.
pub fn singular_a(prime: u64, alpha: u64, beta: u64) -> Result<Rational> {
    let one = CyclotomicNumber::one(prime);
    let mut total = CyclotomicNumber::zero(prime);
    for j in 1..prime {
        let x = &one - &CyclotomicNumber::zeta_pow(prime, (alpha * j) as i64);
        let y = &one - &CyclotomicNumber::zeta_pow(prime, (beta * j) as i64);
        total = &total + &(&x * &y).inverse();
    }
    total.expect_rational("A*(α,β)")
}

/// `Σ_{[α:β] ≠ 0,∞} A*(α,β)`, checked against the double sum
/// `Σ_{i,j} 1/((1−ω^i)(1−ω^j))` and against `(p−1)²/4`.
pub fn dedekind_contribution(prime: u64) -> Result<Rational> {
    let by_points: Rational =
        (1..prime).map(|b| singular_a(prime, 1, b)).collect::<Result<Vec<_>>>()?.into_iter().sum();
    let one = CyclotomicNumber::one(prime);
    let mut single = CyclotomicNumber::zero(prime);
    for i in 1..prime {
        single = &single + &(&one - &CyclotomicNumber::zeta_pow(prime, i as i64)).inverse();
    }
    let double = (&single * &single).expect_rational("double sum")?;
    let expected = Rational::from((prime - 1) * (prime - 1)) / Rational::from(4i64);
    if by_points != double || double != expected {
        return Err(Error::Verification(format!(
            "Dedekind contribution at p={prime}: {by_points} (points), {double} (double sum), expected {expected}"
        )));
    }
    for a in 1..prime {
        for b in 1..prime {
            let c = (b * a.mod_inverse(prime)) % prime;
            if singular_a(prime, a, b)? != singular_a(prime, 1, c)? {
                return Err(Error::Verification(format!("A*({a},{b}) depends on more than [{a}:{b}]")));
            }
        }
    }
    Ok(by_points)
}

trait ModInverse {
    fn mod_inverse(self, p: u64) -> u64;
}

impl ModInverse for u64 {
    fn mod_inverse(self, p: u64) -> u64 {
        let e = (self as i64).extended_gcd(&(p as i64));
        e.x.rem_euclid(p as i64) as u64
    }
}

/// One stratum of `P(V̄)` in the analysis of `T(p,1)` on `c_1`.
#[derive(Clone, Debug, Serialize)]
pub struct EdgeStratum {
    pub stratum: String,
    pub count: usize,
    /// Distinct values of `Vol f_M/Vol f` on the stratum.
    pub vol_ratios: Vec<Rational>,
    /// Distinct values of `Ind σ_f/Ind σ_{f_M}` on the stratum.
    pub ind_ratios: Vec<Rational>,
    /// `Σ A(f_M,𝟏)` over the stratum.
    pub sum_a: Rational,
    /// `Σ A(f_M,𝟏)·(Vol f_M/Vol f)/Ind σ_{f_M}` over the stratum.
    pub contribution: Rational,
}

/// Stratified contributions to `Σ_{M∈ℒ_1} A(f_M,𝟏)·Vol f_M/Ind σ_{f_M}`
/// for an edge of a nonsingular 3-polytope.
///
/// `lattice_model` measures the cone of the normals `u_F` inside `M`;
/// `geometric` uses the normal fan of `P_M` itself. Both totals equal
/// `(p²+2p)/4` in units of `Vol f`.
#[derive(Clone, Debug, Serialize)]
pub struct EdgeStrataReport {
    pub p: u64,
    pub face: usize,
    pub lattice_model: Vec<EdgeStratum>,
    pub geometric: Vec<EdgeStratum>,
    pub expected_total: Rational,
}

#[derive(Default)]
struct RowAcc {
    count: usize,
    vol: BTreeSet<Rational>,
    ind: BTreeSet<Rational>,
    sum_a: Rational,
    contribution: Rational,
}

impl RowAcc {
    fn add(&mut self, a: Rational, vol_ratio: Rational, ind: Rational) {
        self.count += 1;
        self.contribution += &(&a * &vol_ratio / &ind);
        self.sum_a += &a;
        self.vol.insert(vol_ratio);
        self.ind.insert(Rational::one() / ind);
    }

    fn finish(self, name: &str) -> EdgeStratum {
        EdgeStratum {
            stratum: name.to_string(),
            count: self.count,
            vol_ratios: self.vol.into_iter().collect(),
            ind_ratios: self.ind.into_iter().collect(),
            sum_a: self.sum_a,
            contribution: self.contribution,
        }
    }
}

impl EdgeStrataReport {
    pub fn model_total(&self) -> Rational {
        self.lattice_model.iter().map(|r| r.contribution.clone()).sum()
    }

    pub fn geometric_total(&self) -> Rational {
        self.geometric.iter().map(|r| r.contribution.clone()).sum()
    }
}

/// Partitions `ℒ_1` by the point `M̄ ∈ P(V̄)` into `S_1 = {V̄_f}`,
/// `S_2 = {C̄_1, C̄_2}`, `S_3 = C̄_f ∖ S_2` and the remaining points `S_4`.
pub fn edge_strata_report(p: &LatticePolytope, face: usize, prime: u64) -> Result<EdgeStrataReport> {
    if p.dim() != 3 || p.faces()[face].dim != 1 || !p.is_nonsingular() {
        return Err(Error::InvalidInput("stratified report needs an edge of a nonsingular 3-polytope".into()));
    }
    let v_bar = tangent_space_mod_p(p, face, prime);
    let c_bar = normal_space_mod_p(p, face, prime);
    let lines: Vec<FiniteSubspace> = p.faces()[face]
        .facets
        .iter()
        .map(|&f| FiniteSubspace::span(prime, 3, &[to_fp(&p.facets()[f].normal, prime)]))
        .collect();
    let vol_f = p.face_volume(face);
    let mut model: Vec<RowAcc> = (0..4).map(|_| RowAcc::default()).collect();
    let mut geom: Vec<RowAcc> = (0..4).map(|_| RowAcc::default()).collect();
    for m in superlattices(p, prime, 1)? {
        let m_bar = reduction_mod_p(&m, p.lattice(), prime)?;
        let s = if m_bar == v_bar {
            0
        } else if lines.contains(&m_bar) {
            1
        } else if c_bar.contains_subspace(&m_bar) {
            2
        } else {
            3
        };
        let gens = normals_in_superlattice(p, face, &m);
        let a = gamma_coefficient(&gens, &[1, 1])?;
        let vol_ratio = Rational::from(prime).pow(m_bar.intersection_dim(&v_bar) as i32);
        model[s].add(a, vol_ratio, Rational::from(cone_index(&gens)));

        let pm = p.rebase(&m)?;
        let cone = pm.normal_fan()?.cone(face).clone();
        let a = gamma_coefficient(&cone.generators, &[1, 1])?;
        geom[s].add(a, pm.face_volume(face) / &vol_f, Rational::from(cone.index()));
    }
    let names = ["S1", "S2", "S3", "S4"];
    let report = EdgeStrataReport {
        p: prime,
        face,
        lattice_model: model.into_iter().zip(names).map(|(r, n)| r.finish(n)).collect(),
        geometric: geom.into_iter().zip(names).map(|(r, n)| r.finish(n)).collect(),
        expected_total: Rational::from(prime * prime + 2 * prime) / Rational::from(4i64),
    };
    for (what, total) in [("lattice model", report.model_total()), ("geometric", report.geometric_total())] {
        if total != report.expected_total {
            return Err(Error::Verification(format!(
                "{what} total {total} differs from (p²+2p)/4 = {}",
                report.expected_total
            )));
        }
    }
    Ok(report)
}

fn render_set(v: &[Rational]) -> String {
    v.iter().map(ToString::to_string).collect::<Vec<_>>().join(",")
}

impl fmt::Display for EdgeStrataReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (title, rows) in [("lattice model", &self.lattice_model), ("geometric", &self.geometric)] {
            writeln!(f, "{title} (p = {}):", self.p)?;
            writeln!(
                f,
                "{:<4} {:>6} {:>14} {:>16} {:>14} {:>14}",
                "S_i", "#S_i", "Vol f_M/Vol f", "Ind f/Ind f_M", "sum A", "contribution"
            )?;
            for r in rows {
                writeln!(
                    f,
                    "{:<4} {:>6} {:>14} {:>16} {:>14} {:>14}",
                    r.stratum,
                    r.count,
                    render_set(&r.vol_ratios),
                    render_set(&r.ind_ratios),
                    r.sum_a.to_string(),
                    r.contribution.to_string()
                )?;
            }
        }
        write!(f, "total = {}", self.expected_total)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rat(n: i64, d: i64) -> Rational {
        Rational::new(n, d)
    }

    #[test]
    fn circle_examples() {
        let minus_one = CyclotomicNumber::zeta_pow(2, 1);
        assert_eq!(circle_coefficient(&minus_one, 2).to_rational(), Some(rat(1, 4)));
        assert_eq!(circle_coefficient(&minus_one, 1).to_rational(), Some(rat(1, 2)));
        let one = CyclotomicNumber::one(1);
        assert_eq!(circle_coefficient(&one, 2).to_rational(), Some(rat(1, 12)));
        for k in 0..8 {
            let b = bernoulli(k as u32) / Rational::from_int(factorial(k as u32));
            assert_eq!(circle_coefficient(&one, k).to_rational(), Some(b));
        }
        assert!(circle_coefficient(&minus_one, 0).is_zero());
    }

    #[test]
    fn closed_forms_for_small_k() {
        // c(a,k)·den(a) = num(a) for the rational functions of low order.
        let table: [(&[i64], &[i64]); 4] = [
            (&[-1], &[-1, 1]),
            (&[0, -1], &[1, -2, 1]),
            (&[0, -1, -1], &[-2, 6, -6, 2]),
            (&[0, -1, -4, -1], &[6, -24, 36, -24, 6]),
        ];
        for m in [2u64, 3, 5, 7, 12] {
            for e in 1..m as i64 {
                let a = CyclotomicNumber::zeta_pow(m, e);
                let eval = |c: &[i64]| {
                    c.iter().enumerate().fold(CyclotomicNumber::zero(m), |acc, (i, &x)| {
                        &acc + &a.pow(i as u32).scale(&Rational::from(x))
                    })
                };
                for (k, (num, den)) in table.iter().enumerate() {
                    let c = circle_coefficient(&a, k + 1);
                    assert_eq!(&c * &eval(den), eval(num), "m={m}, e={e}, k={}", k + 1);
                }
            }
        }
    }

    #[test]
    fn distribution_small() {
        assert_eq!(distribution_check(2, 2).unwrap(), rat(1, 4));
        assert_eq!(distribution_check(2, 1).unwrap(), rat(1, 2));
        assert!(distribution_check(1, 1).is_err());
    }

    #[test]
    fn theta_values() {
        assert_eq!(theta(2, &Rational::zero()).to_rational(), Some(rat(1, 6)));
        assert_eq!(theta(4, &Rational::zero()).to_rational(), Some(rat(-1, 30)));
        assert_eq!(theta(2, &rat(1, 2)).to_rational(), Some(rat(1, 2)));
        let t = theta(3, &rat(1, 3));
        assert!(!t.is_rational());
        assert!(t.to_complex().0.abs() < 1e-12);
    }

    #[test]
    fn compositions_count() {
        assert_eq!(compositions(3, 2), vec![vec![1, 2], vec![2, 1]]);
        assert_eq!(compositions(4, 3).len(), 3);
        assert_eq!(compositions(0, 0), vec![Vec::<u32>::new()]);
        assert!(compositions(1, 2).is_empty());
    }

    #[test]
    fn unimodular_gamma_is_bernoulli_product() {
        let gens = vec![vec![1, 0], vec![0, 1]];
        assert_eq!(gamma_coefficient(&gens, &[1, 1]).unwrap(), rat(1, 4));
        assert_eq!(gamma_coefficient(&gens, &[2, 1]).unwrap(), rat(1, 24));
        let singular = vec![vec![0, 1], vec![2, -1]];
        // g = 0 gives 1/4, g with ρ = (1/2,1/2) gives c(−1,1)² = 1/4.
        assert_eq!(gamma_coefficient(&singular, &[1, 1]).unwrap(), rat(1, 2));
    }

    #[test]
    fn kp_small() {
        let seg = LatticePolytope::simplex(1).unwrap();
        assert_eq!(kp_coefficient(&seg, 1).unwrap(), Rational::one());
        let sq = LatticePolytope::cube(2).unwrap();
        assert_eq!(kp_coefficient(&sq, 2).unwrap(), Rational::one());
        let tri = LatticePolytope::simplex(2).unwrap();
        assert_eq!(kp_check(&tri).unwrap(), vec![Rational::one(), rat(3, 2), rat(1, 2)]);
    }

    #[test]
    fn dedekind_at_five() {
        assert_eq!(dedekind_contribution(5).unwrap(), Rational::from(4));
        assert_eq!(dedekind_contribution(3).unwrap(), Rational::one());
    }
}
