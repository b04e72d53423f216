//! The Hecke operators `T(p,k)` acting on Ehrhart polynomials and face
//! volumes, the operator `T(p²)`, and averages of regularized Ehrhart
//! polynomials over superlattice families.

use std::collections::HashMap;

use num_bigint::BigInt;
use rayon::prelude::*;
use serde::Serialize;

use crate::ehrhart::{ehrhart, regularized};
use crate::error::{Error, Result};
use crate::exactmath::{Rational, UniPoly};
use crate::grassmann::{grassmannian_count, nu_closed, FiniteSubspace};
use crate::lattice::{
    enumerate_coindex_superlattices_of, enumerate_superlattices_of, reduction_mod_p, Lattice,
};
use crate::linalg::{self, ZMat};
use crate::polytope::LatticePolytope;

/// Most superlattices a single Hecke sum will enumerate.
pub const MAX_SUPERLATTICES: u64 = 200_000;

#[derive(Clone, Debug, Serialize)]
pub struct HeckeResult {
    pub p: u64,
    pub k: usize,
    /// `E(P_M)` for every `M ∈ ℒ_k`, sorted by the Hermite form of `M`.
    pub per_lattice: Vec<(Lattice, UniPoly)>,
    /// `T(p,k)E(P) = Σ_M E(P_M)`.
    pub aggregate: UniPoly,
}

fn check_family_size(n: usize, k: usize, p: u64) -> Result<()> {
    let count = grassmannian_count(k as i64, n as i64, p);
    if count > BigInt::from(MAX_SUPERLATTICES) {
        return Err(Error::BudgetExceeded {
            what: format!("superlattice family for n={n}, k={k}, p={p}"),
            needed: count.to_string(),
            bound: MAX_SUPERLATTICES.to_string(),
        });
    }
    Ok(())
}

fn sum_ehrhart(p: &LatticePolytope, lattices: Vec<Lattice>) -> Result<Vec<(Lattice, UniPoly)>> {
    let mut out: Vec<(Lattice, UniPoly)> = lattices
        .into_par_iter()
        .map(|m| ehrhart(p, &m).map(|e| (m, e.poly)))
        .collect::<Result<_>>()?;
    out.sort_by(|a, b| a.0.cmp(&b.0));
    Ok(out)
}

/// `T(p,k)E(P) = Σ_{M ∈ ℒ_k} E(P_M)`, with `ℒ_k` taken relative to the
/// polytope's lattice.
pub fn hecke_ehrhart(p: &LatticePolytope, prime: u64, k: usize) -> Result<HeckeResult> {
    check_family_size(p.dim(), k, prime)?;
    let set = enumerate_superlattices_of(p.lattice(), prime, k)?;
    let per_lattice = sum_ehrhart(p, set.lattices().cloned().collect())?;
    let aggregate = per_lattice.iter().map(|(_, e)| e.clone()).sum();
    Ok(HeckeResult { p: prime, k, per_lattice, aggregate })
}

/// Coefficient ratios `c_l(T(p,k)E)/c_l(E)` and the two identities that
/// predict them.
#[derive(Clone, Debug, Serialize)]
pub struct EigenvalueReport {
    pub p: u64,
    pub k: usize,
    pub ehrhart: UniPoly,
    pub transformed: UniPoly,
    /// `(l, ratio)` for every `l` with `c_l ≠ 0`.
    pub ratios: Vec<(usize, Rational)>,
}

/// Computes `T(p,k)E(P)` by enumeration and checks, exactly, that
/// `c_l(T(p,k)E)/c_l(E) = ν_{n,k,l}(p)` for every nonzero `c_l` and that
/// `T(p,k)E(t) = G_{k−1,n−1}E(pt) + (G_{k,n} − G_{k−1,n−1})E(t)`.
pub fn eigenvalue_check(p: &LatticePolytope, prime: u64, k: usize) -> Result<EigenvalueReport> {
    let n = p.dim();
    let e = ehrhart(p, p.lattice())?.poly;
    let result = hecke_ehrhart(p, prime, k)?;
    let t = &result.aggregate;
    let mut ratios = Vec::new();
    for l in 0..=n {
        let c = e.coeff(l);
        if c.is_zero() {
            if !t.coeff(l).is_zero() {
                return Err(Error::Verification(format!("c_{l} vanishes but its image does not")));
            }
            continue;
        }
        let ratio = t.coeff(l) / &c;
        let expected = Rational::from_int(nu_closed(n, k, l, prime));
        if ratio != expected {
            return Err(Error::Verification(format!(
                "c_{l} ratio is {ratio}, expected nu_{{{n},{k},{l}}}({prime}) = {expected}"
            )));
        }
        ratios.push((l, ratio));
    }
    let g = Rational::from_int(grassmannian_count(k as i64 - 1, n as i64 - 1, prime));
    let gk = Rational::from_int(grassmannian_count(k as i64, n as i64, prime));
    let rhs = &e.dilate(&Rational::from(prime)).scale(&g) + &e.scale(&(gk - &g));
    if &rhs != t {
        return Err(Error::Verification(format!("T(p,k)E = {t} but the dilation identity gives {rhs}")));
    }
    Ok(EigenvalueReport { p: prime, k, ehrhart: e, transformed: result.aggregate, ratios })
}

/// `Σ_{M ∈ ℒ_k} Vol_l(P_M)`.
pub fn hecke_vol(p: &LatticePolytope, prime: u64, k: usize, l: usize) -> Result<Rational> {
    check_family_size(p.dim(), k, prime)?;
    let set = enumerate_superlattices_of(p.lattice(), prime, k)?;
    let lattices: Vec<Lattice> = set.lattices().cloned().collect();
    let vols: Vec<Rational> = lattices
        .par_iter()
        .map(|m| p.rebase(m).map(|pm| pm.vol_l(l)))
        .collect::<Result<_>>()?;
    Ok(vols.into_iter().sum())
}

/// Exponents found for one (face, superlattice) pair. Every exponent is
/// computed twice, from the geometry of `P_M` and from the subspaces
/// `M̄`, `V̄_f`, `C̄_f` of `F_p^n`, and the two must agree.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FaceExponentReport {
    /// `Vol f_M = p^e Vol f` with `e = dim(M̄ ∩ V̄_f)`.
    pub vol_exponent: u32,
    /// Index of the cone of the vectors `u_F` measured inside `M`:
    /// `p^{dim(M̄∩C̄_f) − r}` times the index in `L`.
    pub lattice_index_exponent: i32,
    /// `r = #{F ⊇ f : ū_F ∈ M̄}`.
    pub r: usize,
    /// Index of the normal cone of `f_M` in the normal fan of `P_M`
    /// relative to its own index: `p^{dim(N∩C̄_f) − r*}` with `N = M̄^⊥`.
    pub fan_index_exponent: i32,
    /// `r* = #{F ⊇ f : ū_F ∈ M̄^⊥}`.
    pub r_dual: usize,
}

pub(crate) fn to_fp(v: &[i128], p: u64) -> Vec<u64> {
    v.iter().map(|x| x.rem_euclid(p as i128) as u64).collect()
}

/// The orthogonal complement of a subspace of `F_p^n` under the standard
/// dot product.
pub fn orthogonal_complement(s: &FiniteSubspace) -> FiniteSubspace {
    let (p, n) = (s.p(), s.ambient_dim());
    let vectors: Vec<Vec<u64>> = FiniteSubspace::coordinate(p, n, n)
        .elements()
        .into_iter()
        .filter(|v| s.basis().iter().all(|b| b.iter().zip(v).map(|(x, y)| x * y).sum::<u64>() % p == 0))
        .collect();
    FiniteSubspace::span(p, n, &vectors)
}

/// `V̄_f`: the reduction mod `p` of `L ∩ V_f`, in lattice coordinates.
pub fn tangent_space_mod_p(p: &LatticePolytope, face: usize, prime: u64) -> FiniteSubspace {
    let sat = p.face_saturation(face);
    let rows: Vec<Vec<u64>> = sat.iter().map(|r| to_fp(r, prime)).collect();
    FiniteSubspace::span(prime, p.dim(), &rows)
}

/// `C̄_f`: the span of the reduced normals `ū_F`, `F ⊇ f`.
pub fn normal_space_mod_p(p: &LatticePolytope, face: usize, prime: u64) -> FiniteSubspace {
    let rows: Vec<Vec<u64>> = p.faces()[face]
        .facets
        .iter()
        .map(|&f| to_fp(&p.facets()[f].normal, prime))
        .collect();
    FiniteSubspace::span(prime, p.dim(), &rows)
}

pub(crate) fn exponent_of(ratio: &Rational, prime: u64) -> Option<i32> {
    let p = Rational::from(prime);
    let mut e = 0i32;
    let mut x = ratio.clone();
    while x.is_integer() && !x.is_one() {
        if !(&x / &p).is_integer() && x.numer() != &BigInt::from(1) {
            return None;
        }
        x = x / &p;
        e += 1;
        if e > 64 {
            return None;
        }
    }
    while !x.is_integer() {
        x *= &p;
        e -= 1;
        if e < -64 {
            return None;
        }
    }
    x.is_one().then_some(e)
}

/// The normals `u_F`, `F ⊇ f`, as primitive vectors in the coordinates of a
/// superlattice `M` of the polytope's lattice.
pub fn normals_in_superlattice(p: &LatticePolytope, face: usize, m: &Lattice) -> ZMat {
    let l_inv = linalg::q_inverse(p.lattice().basis()).expect("nonsingular");
    let m_in_l = linalg::q_matmul(m.basis(), &l_inv);
    let inv = linalg::q_inverse(&m_in_l).expect("nonsingular");
    p.faces()[face]
        .facets
        .iter()
        .map(|&f| {
            let a: Vec<Rational> = p.facets()[f].normal.iter().map(|&x| Rational::from(x)).collect();
            linalg::primitive_from_rational(&linalg::q_vecmat(&a, &inv))
        })
        .collect()
}

/// Checks, for one face `f` and one `M` with `L ⊆ M ⊆ p^{-1}L`, how face
/// volumes and cone indices change under `L ↦ M`.
pub fn face_exponent_check(p: &LatticePolytope, face: usize, m: &Lattice, prime: u64) -> Result<FaceExponentReport> {
    let n = p.dim();
    let l = p.lattice();
    let m_bar = reduction_mod_p(m, l, prime)?;
    let v_bar = tangent_space_mod_p(p, face, prime);
    let c_bar = normal_space_mod_p(p, face, prime);
    let n_bar = orthogonal_complement(&m_bar);
    let pm = p.rebase(m)?;
    let fail = |what: &str| {
        Error::Verification(format!(
            "{what} for face {:?} of the polytope with vertices {:?} in {m:?}",
            p.faces()[face].vertices,
            p.vertices()
        ))
    };

    let vol_ratio = pm.face_volume(face) / p.face_volume(face);
    let vol_exponent = m_bar.intersection_dim(&v_bar) as u32;
    if exponent_of(&vol_ratio, prime) != Some(vol_exponent as i32) {
        return Err(fail("face volume ratio disagrees with dim(M̄ ∩ V̄_f)"));
    }

    let normals: Vec<Vec<u64>> =
        p.faces()[face].facets.iter().map(|&f| to_fp(&p.facets()[f].normal, prime)).collect();
    let base_index = Rational::from(p.face_cone_index(face));

    let r = normals.iter().filter(|u| m_bar.contains(u)).count();
    let lattice_index_exponent = m_bar.intersection_dim(&c_bar) as i32 - r as i32;
    let in_m = Rational::from(crate::polytope::cone_index(&normals_in_superlattice(p, face, m)));
    if exponent_of(&(in_m / &base_index), prime) != Some(lattice_index_exponent) {
        return Err(fail("index of the u_F cone in M disagrees with dim(M̄ ∩ C̄_f) − r"));
    }

    let r_dual = normals.iter().filter(|u| n_bar.contains(u)).count();
    let fan_index_exponent = n_bar.intersection_dim(&c_bar) as i32 - r_dual as i32;
    let fan_ratio = Rational::from(pm.face_cone_index(face)) / &base_index;
    if exponent_of(&fan_ratio, prime) != Some(fan_index_exponent) {
        return Err(fail("normal cone index of P_M disagrees with dim(M̄^⊥ ∩ C̄_f) − r*"));
    }
    debug_assert!(n_bar.dim() + m_bar.dim() == n);
    Ok(FaceExponentReport { vol_exponent, lattice_index_exponent, r, fan_index_exponent, r_dual })
}

/// Direct `T(p²)E(P)` against the Hecke algebra combination
/// `T(p,1)²E − p·T(p,2)E`.
#[derive(Clone, Debug, Serialize)]
pub struct PSquaredReport {
    /// Number of superlattices of coindex `p²`.
    pub count: usize,
    pub direct: UniPoly,
    pub algebra: UniPoly,
    /// Distinct lattices reached by iterating `T(p,1)`, with multiplicity.
    pub iterated_multiplicities: Vec<usize>,
}

/// `Σ E(P_M)` over all `M ⊇ L` with `[M:L] = p²`, compared with the
/// composition of `T(p,1)` with itself minus `p·T(p,2)`.
pub fn hecke_p_squared(p: &LatticePolytope, prime: u64) -> Result<PSquaredReport> {
    let n = p.dim();
    check_family_size(n + 1, 2, prime)?;
    let family = enumerate_coindex_superlattices_of(p.lattice(), prime, 2)?;
    let count = family.len();
    let direct: UniPoly = sum_ehrhart(p, family)?.into_iter().map(|(_, e)| e).sum();

    let level_one = enumerate_superlattices_of(p.lattice(), prime, 1)?;
    let mut multiplicity: HashMap<Lattice, usize> = HashMap::new();
    for m1 in level_one.lattices() {
        for m2 in enumerate_superlattices_of(m1, prime, 1)?.lattices() {
            *multiplicity.entry(m2.clone()).or_insert(0) += 1;
        }
    }
    let mut entries: Vec<(Lattice, usize)> = multiplicity.into_iter().collect();
    entries.sort_by(|a, b| a.0.cmp(&b.0));
    let iterated: Vec<(Lattice, UniPoly)> = sum_ehrhart(p, entries.iter().map(|(m, _)| m.clone()).collect())?;
    let squared: UniPoly = iterated
        .iter()
        .zip(&entries)
        .map(|((_, e), (_, mult))| e.scale(&Rational::from(*mult)))
        .sum();
    let t2 = if n >= 2 { hecke_ehrhart(p, prime, 2)?.aggregate } else { UniPoly::zero() };
    let algebra = &squared - &t2.scale(&Rational::from(prime));
    if algebra != direct {
        return Err(Error::Verification(format!("T(p²)E = {direct} but T(p,1)²E − pT(p,2)E = {algebra}")));
    }
    Ok(PSquaredReport {
        count,
        direct,
        algebra,
        iterated_multiplicities: entries.iter().map(|(_, m)| *m).collect(),
    })
}

/// `(1/#ℳ) Σ_{M ∈ ℳ} Ẽ(P_M)`.
pub fn average_regularized(p: &LatticePolytope, family: &[Lattice]) -> Result<UniPoly> {
    if family.is_empty() {
        return Err(Error::InvalidInput("empty lattice family".into()));
    }
    let parts: Vec<UniPoly> = family
        .par_iter()
        .map(|m| {
            let pm = p.rebase(m)?;
            let e = ehrhart(&pm, pm.lattice())?;
            Ok(regularized(&e, &pm))
        })
        .collect::<Result<_>>()?;
    let total: UniPoly = parts.into_iter().sum();
    Ok(total.scale(&(Rational::one() / Rational::from(family.len()))))
}

/// The family `ℒ_1(p)` relative to the polytope's lattice.
pub fn level_one_family(p: &LatticePolytope, prime: u64) -> Result<Vec<Lattice>> {
    Ok(enumerate_superlattices_of(p.lattice(), prime, 1)?.lattices().cloned().collect())
}

/// The family `ℳ(p²)` relative to the polytope's lattice.
pub fn coindex_p_squared_family(p: &LatticePolytope, prime: u64) -> Result<Vec<Lattice>> {
    enumerate_coindex_superlattices_of(p.lattice(), prime, 2)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unit_square_level_one() {
        let sq = LatticePolytope::cube(2).unwrap();
        let r = hecke_ehrhart(&sq, 2, 1).unwrap();
        assert_eq!(r.per_lattice.len(), 3);
        assert_eq!(r.aggregate, UniPoly::from_ints(&[3, 8, 6]));
    }

    #[test]
    fn unit_square_volumes() {
        let sq = LatticePolytope::cube(2).unwrap();
        assert_eq!(hecke_vol(&sq, 2, 1, 2).unwrap(), Rational::from(6));
        assert_eq!(hecke_vol(&sq, 2, 1, 0).unwrap(), Rational::from(12));
    }

    #[test]
    fn segment_p_squared() {
        let seg = LatticePolytope::simplex(1).unwrap();
        let r = hecke_p_squared(&seg, 3).unwrap();
        assert_eq!(r.count, 1);
        assert_eq!(r.direct, UniPoly::from_ints(&[1, 9]));
    }

    #[test]
    fn exponents() {
        assert_eq!(exponent_of(&Rational::from(9), 3), Some(2));
        assert_eq!(exponent_of(&Rational::new(1, 3), 3), Some(-1));
        assert_eq!(exponent_of(&Rational::one(), 3), Some(0));
        assert_eq!(exponent_of(&Rational::from(6), 3), None);
    }
}
