//! Full-rank lattices in `Q^n` and enumeration of the superlattices that
//! the Hecke operators sum over.

use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactmath::Rational;
use crate::grassmann::{check_prime, FiniteSubspace};
use crate::linalg::{self, QMat, ZMat};

/// A full-rank lattice in `Q^n`, stored as `(1/d)·H` with `H` the row Hermite
/// normal form of an integer basis and `d` the least common denominator of
/// the lattice's vectors. This pair is canonical, so equality, ordering and
/// hashing compare lattices as point sets.
#[derive(Clone)]
pub struct Lattice {
    denom: i128,
    hnf: ZMat,
    basis: QMat,
    inverse: QMat,
}

impl Lattice {
    /// The standard lattice `Z^n`.
    pub fn standard(n: usize) -> Self {
        Lattice::from_int_basis(&linalg::z_identity(n), 1).expect("identity is nonsingular")
    }

    /// The lattice spanned by the rows of a rational matrix.
    pub fn from_basis(basis: &[Vec<Rational>]) -> Result<Self> {
        let n = basis.len();
        if basis.iter().any(|r| r.len() != n) {
            return Err(Error::InvalidInput("lattice basis must be a square matrix".into()));
        }
        let mut d: i128 = 1;
        for x in basis.iter().flatten() {
            let xd: i128 = x
                .denom()
                .try_into()
                .map_err(|_| Error::InvalidInput("basis denominator too large".into()))?;
            d = d / linalg::gcd(d, xd) * xd;
        }
        let scaled: ZMat = basis
            .iter()
            .map(|r| {
                r.iter()
                    .map(|x| (x * &Rational::from(d)).to_i128().expect("integral after scaling"))
                    .collect()
            })
            .collect();
        Lattice::from_int_basis(&scaled, d)
    }

    /// The lattice spanned by the rows of `(1/denom)·rows`.
    pub fn from_int_basis(rows: &[Vec<i128>], denom: i128) -> Result<Self> {
        let n = rows.len();
        if denom <= 0 {
            return Err(Error::InvalidInput("lattice denominator must be positive".into()));
        }
        if rows.iter().any(|r| r.len() != n) {
            return Err(Error::InvalidInput("lattice basis must be a square matrix".into()));
        }
        if linalg::z_det(rows) == 0 {
            return Err(Error::InvalidInput("lattice basis is singular".into()));
        }
        let (mut hnf, _) = linalg::z_hermite(rows);
        let mut denom = denom;
        // Cancel any common factor so that `denom` is the true least denominator.
        let g = hnf.iter().flatten().fold(denom, |g, &x| linalg::gcd(g, x));
        if g > 1 {
            denom /= g;
            for x in hnf.iter_mut().flatten() {
                *x /= g;
            }
        }
        let basis: QMat =
            hnf.iter().map(|r| r.iter().map(|&x| Rational::new(x, denom)).collect()).collect();
        let inverse = linalg::q_inverse(&basis).expect("nonsingular basis");
        Ok(Lattice { denom, hnf, basis, inverse })
    }

    pub fn dim(&self) -> usize {
        self.hnf.len()
    }

    /// Canonical basis rows.
    pub fn basis(&self) -> &QMat {
        &self.basis
    }

    /// Least common denominator of the lattice's vectors.
    pub fn denominator(&self) -> i128 {
        self.denom
    }

    /// Covolume: the volume of a fundamental domain, `|det B|`.
    pub fn covolume(&self) -> Rational {
        linalg::q_det(&self.basis).abs()
    }

    /// Coordinates of `x` in the canonical basis (`x = c·B`).
    pub fn coords(&self, x: &[Rational]) -> Vec<Rational> {
        linalg::q_vecmat(x, &self.inverse)
    }

    /// The point `c·B` for coordinates `c`.
    pub fn point(&self, c: &[Rational]) -> Vec<Rational> {
        linalg::q_vecmat(c, &self.basis)
    }

    pub fn contains(&self, x: &[Rational]) -> bool {
        x.len() == self.dim() && self.coords(x).iter().all(Rational::is_integer)
    }

    /// Whether `other ⊆ self`.
    pub fn contains_lattice(&self, other: &Lattice) -> bool {
        other.basis.iter().all(|v| self.contains(v))
    }

    /// `[self : sub]` for a sublattice, as the covolume ratio.
    pub fn index_of(&self, sub: &Lattice) -> Rational {
        sub.covolume() / self.covolume()
    }

    /// `r·self`.
    pub fn scaled(&self, r: &Rational) -> Lattice {
        let rows: QMat = self.basis.iter().map(|v| v.iter().map(|x| x * r).collect()).collect();
        Lattice::from_basis(&rows).expect("nonzero scaling keeps the lattice nonsingular")
    }

    /// The dual lattice `{y : ⟨x,y⟩ ∈ Z for all x ∈ self}`.
    pub fn dual(&self) -> Lattice {
        Lattice::from_basis(&linalg::q_transpose(&self.inverse)).expect("inverse is nonsingular")
    }

    /// Basis as a matrix of `"num/den"` strings.
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(&self.basis).expect("serializable")
    }

    pub fn from_json(v: &serde_json::Value) -> Result<Lattice> {
        let rows: QMat = serde_json::from_value(v.clone()).map_err(|e| Error::Parse(e.to_string()))?;
        Lattice::from_basis(&rows)
    }

    fn key(&self) -> (i128, &ZMat) {
        (self.denom, &self.hnf)
    }
}

impl PartialEq for Lattice {
    fn eq(&self, other: &Self) -> bool {
        self.key() == other.key()
    }
}

impl Eq for Lattice {}

impl Hash for Lattice {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.key().hash(state)
    }
}

impl PartialOrd for Lattice {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Lattice {
    fn cmp(&self, other: &Self) -> Ordering {
        self.key().cmp(&other.key())
    }
}

impl fmt::Debug for Lattice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<String> = self
            .basis
            .iter()
            .map(|r| format!("({})", r.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(", ")))
            .collect();
        write!(f, "Lattice[{}]", rows.join(", "))
    }
}

impl Serialize for Lattice {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.basis.serialize(s)
    }
}

impl<'de> Deserialize<'de> for Lattice {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let rows = QMat::deserialize(d)?;
        Lattice::from_basis(&rows).map_err(serde::de::Error::custom)
    }
}

/// One member of `ℒ_k`, with the coset matrix `A` whose rows, scaled by
/// `1/p`, span it (relative to the base lattice).
#[derive(Clone, Debug)]
pub struct Superlattice {
    pub lattice: Lattice,
    pub coset: ZMat,
}

/// The superlattices `L ⊊ M ⊊ p^{-1}L` with `[M : L] = p^k`.
#[derive(Clone, Debug)]
pub struct SuperlatticeSet {
    pub p: u64,
    pub k: usize,
    pub base: Lattice,
    pub members: Vec<Superlattice>,
}

impl SuperlatticeSet {
    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn lattices(&self) -> impl Iterator<Item = &Lattice> {
        self.members.iter().map(|m| &m.lattice)
    }
}

/// The upper triangular coset matrices: diagonal `p^{e_i}` with exactly `k`
/// entries `e_i = 0`, and free entries `a_ij ∈ [0, p)` exactly where
/// `i < j`, `e_i = 0`, `e_j = 1`.
pub fn coset_matrices(n: usize, p: u64, k: usize) -> Vec<ZMat> {
    let p = p as i128;
    let mut out = Vec::new();
    for zeros in linalg::combinations(n, k) {
        let e: Vec<bool> = (0..n).map(|i| !zeros.contains(&i)).collect();
        let free: Vec<(usize, usize)> = (0..n)
            .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
            .filter(|&(i, j)| !e[i] && e[j])
            .collect();
        let mut digits = vec![0i128; free.len()];
        loop {
            let mut a = vec![vec![0i128; n]; n];
            for i in 0..n {
                a[i][i] = if e[i] { p } else { 1 };
            }
            for (&(i, j), &d) in free.iter().zip(&digits) {
                a[i][j] = d;
            }
            out.push(a);
            let mut idx = 0;
            while idx < digits.len() {
                digits[idx] += 1;
                if digits[idx] < p {
                    break;
                }
                digits[idx] = 0;
                idx += 1;
            }
            if idx == digits.len() {
                break;
            }
        }
    }
    out
}

/// `ℒ_k` for the standard lattice `Z^n`.
pub fn enumerate_superlattices(n: usize, p: u64, k: usize) -> Result<SuperlatticeSet> {
    enumerate_superlattices_of(&Lattice::standard(n), p, k)
}

/// `ℒ_k` relative to an arbitrary base lattice: the lattices spanned by the
/// rows of `p^{-1}A·B`.
pub fn enumerate_superlattices_of(base: &Lattice, p: u64, k: usize) -> Result<SuperlatticeSet> {
    check_prime(p)?;
    let n = base.dim();
    if k > n {
        return Err(Error::InvalidInput(format!("level k = {k} exceeds dimension {n}")));
    }
    let inv_p = Rational::new(1, p as i64);
    let members = coset_matrices(n, p, k)
        .into_iter()
        .map(|a| {
            let scaled: QMat = linalg::to_q(&a)
                .into_iter()
                .map(|r| r.into_iter().map(|x| x * &inv_p).collect())
                .collect();
            let rows = linalg::q_matmul(&scaled, base.basis());
            Superlattice { lattice: Lattice::from_basis(&rows).expect("nonsingular"), coset: a }
        })
        .collect();
    Ok(SuperlatticeSet { p, k, base: base.clone(), members })
}

/// `M̄ ⊂ F_p^n`: the image of `M` under `p^{-1}L/L ≅ L/pL`, in coordinates of
/// the basis of `L`.
pub fn reduction_mod_p(m: &Lattice, l: &Lattice, p: u64) -> Result<FiniteSubspace> {
    check_prime(p)?;
    let n = l.dim();
    if m.dim() != n {
        return Err(Error::InvalidInput("lattices of different dimension".into()));
    }
    if !m.contains_lattice(l) {
        return Err(Error::NotBetween(format!("{m:?} does not contain {l:?}")));
    }
    let pr = Rational::from(p);
    let mut vectors = Vec::with_capacity(n);
    for row in m.basis() {
        let scaled: Vec<Rational> = row.iter().map(|x| x * &pr).collect();
        let c = l.coords(&scaled);
        if !c.iter().all(Rational::is_integer) {
            return Err(Error::NotBetween(format!("{m:?} is not inside p^-1 L")));
        }
        vectors.push(
            c.iter()
                .map(|x| x.to_i128().expect("integer").rem_euclid(p as i128) as u64)
                .collect(),
        );
    }
    Ok(FiniteSubspace::span(p, n, &vectors))
}

/// All sublattices of `Z^n` of index `p^e`, as row Hermite normal forms.
pub fn sublattices_of_index(n: usize, p: u64, e: u32) -> Vec<ZMat> {
    let mut out = Vec::new();
    let p = p as i128;
    // Exponent vectors (a_1..a_n) with sum e.
    fn compositions(n: usize, e: u32) -> Vec<Vec<u32>> {
        if n == 0 {
            return if e == 0 { vec![vec![]] } else { vec![] };
        }
        (0..=e)
            .flat_map(|first| {
                compositions(n - 1, e - first).into_iter().map(move |mut rest| {
                    rest.insert(0, first);
                    rest
                })
            })
            .collect()
    }
    for a in compositions(n, e) {
        let diag: Vec<i128> = a.iter().map(|&x| p.pow(x)).collect();
        let free: Vec<(usize, usize)> = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
        let mut digits = vec![0i128; free.len()];
        loop {
            let mut h = vec![vec![0i128; n]; n];
            for i in 0..n {
                h[i][i] = diag[i];
            }
            for (&(i, j), &d) in free.iter().zip(&digits) {
                h[i][j] = d;
            }
            out.push(h);
            let mut idx = 0;
            while idx < digits.len() {
                digits[idx] += 1;
                if digits[idx] < diag[free[idx].1] {
                    break;
                }
                digits[idx] = 0;
                idx += 1;
            }
            if idx == digits.len() {
                break;
            }
        }
    }
    out
}

/// All `M ⊇ Z^n` with `[M : Z^n] = p^e`, each exactly once, obtained as
/// duals of the index-`p^e` sublattices.
pub fn enumerate_coindex_superlattices(n: usize, p: u64, e: u32) -> Result<Vec<Lattice>> {
    check_prime(p)?;
    if e == 0 {
        return Err(Error::InvalidInput("exponent must be at least 1".into()));
    }
    let mut out: Vec<Lattice> = sublattices_of_index(n, p, e)
        .into_iter()
        .map(|h| Lattice::from_int_basis(&h, 1).expect("nonsingular").dual())
        .collect();
    out.sort();
    Ok(out)
}

/// All `M ⊇ base` with `[M : base] = p^e`: the images of the coindex
/// superlattices of `Z^n` under the basis of `base`.
pub fn enumerate_coindex_superlattices_of(base: &Lattice, p: u64, e: u32) -> Result<Vec<Lattice>> {
    let mut out: Vec<Lattice> = enumerate_coindex_superlattices(base.dim(), p, e)?
        .iter()
        .map(|m| Lattice::from_basis(&linalg::q_matmul(m.basis(), base.basis())).expect("nonsingular"))
        .collect();
    out.sort();
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grassmann::grassmannian_count;
    use num_bigint::BigInt;

    fn q(rows: &[&[(i64, i64)]]) -> QMat {
        rows.iter().map(|r| r.iter().map(|&(a, b)| Rational::new(a, b)).collect()).collect()
    }

    #[test]
    fn canonical_equality() {
        let a = Lattice::from_basis(&q(&[&[(1, 2), (1, 2)], &[(0, 1), (1, 1)]])).unwrap();
        let b = Lattice::from_basis(&q(&[&[(1, 2), (-1, 2)], &[(1, 1), (0, 1)]])).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.covolume(), Rational::new(1, 2));
        assert!(a.contains(&[Rational::new(1, 2), Rational::new(3, 2)]));
        assert!(!a.contains(&[Rational::new(1, 2), Rational::new(0, 1)]));
        assert_eq!(Lattice::from_json(&a.to_json()).unwrap(), a);
    }

    #[test]
    fn dual_of_scaled() {
        let l = Lattice::standard(3).scaled(&Rational::new(1, 5));
        assert_eq!(l.dual(), Lattice::standard(3).scaled(&Rational::from(5)));
    }

    #[test]
    fn two_dim_example() {
        let set = enumerate_superlattices(2, 2, 1).unwrap();
        assert_eq!(set.len(), 3);
        let expected: Vec<Lattice> = [
            q(&[&[(1, 2), (0, 1)], &[(0, 1), (1, 1)]]),
            q(&[&[(1, 2), (1, 2)], &[(0, 1), (1, 1)]]),
            q(&[&[(1, 1), (0, 1)], &[(0, 1), (1, 2)]]),
        ]
        .iter()
        .map(|b| Lattice::from_basis(b).unwrap())
        .collect();
        for e in &expected {
            assert!(set.lattices().any(|m| m == e), "{e:?} missing");
        }
        let mut lines: Vec<FiniteSubspace> = set
            .lattices()
            .map(|m| reduction_mod_p(m, &Lattice::standard(2), 2).unwrap())
            .collect();
        lines.sort();
        lines.dedup();
        assert_eq!(lines.len(), 3);
        assert!(lines.iter().all(|s| s.dim() == 1));
    }

    #[test]
    fn superlattice_counts_and_bounds() {
        let l = Lattice::standard(4);
        let full = l.scaled(&Rational::new(1, 3));
        let set = enumerate_superlattices(4, 3, 2).unwrap();
        assert_eq!(set.len(), 130);
        let mut seen: Vec<&Lattice> = set.lattices().collect();
        seen.sort();
        seen.dedup();
        assert_eq!(seen.len(), 130);
        for m in set.lattices() {
            assert_eq!(l.index_of(m), Rational::from(1) / Rational::from(9));
            assert!(m.contains_lattice(&l) && full.contains_lattice(m));
            assert!(m != &l && m != &full);
        }
    }

    #[test]
    fn reduction_extremes() {
        let l = Lattice::standard(3);
        let full = l.scaled(&Rational::new(1, 5));
        assert_eq!(reduction_mod_p(&full, &l, 5).unwrap().dim(), 3);
        assert_eq!(reduction_mod_p(&l, &l, 5).unwrap().dim(), 0);
        let too_big = l.scaled(&Rational::new(1, 25));
        assert!(matches!(reduction_mod_p(&too_big, &l, 5), Err(Error::NotBetween(_))));
    }

    #[test]
    fn coindex_counts() {
        assert_eq!(enumerate_coindex_superlattices(2, 2, 2).unwrap().len(), 7);
        let one = enumerate_coindex_superlattices(1, 3, 2).unwrap();
        assert_eq!(one, vec![Lattice::standard(1).scaled(&Rational::new(1, 9))]);
        for p in [2u64, 3] {
            for n in 1..=3usize {
                let all = enumerate_coindex_superlattices(n, p, 2).unwrap();
                assert_eq!(BigInt::from(all.len()), grassmannian_count(2, n as i64 + 1, p));
                let mut d = all.clone();
                d.dedup();
                assert_eq!(d.len(), all.len());
                for m in &all {
                    assert_eq!(m.index_of(&Lattice::standard(n)), Rational::from((p * p) as i64));
                }
            }
        }
    }

    #[test]
    fn coindex_one_is_level_one() {
        for (n, p) in [(2usize, 2u64), (3, 3), (4, 2)] {
            let mut a = enumerate_coindex_superlattices(n, p, 1).unwrap();
            let mut b: Vec<Lattice> = enumerate_superlattices(n, p, 1).unwrap().lattices().cloned().collect();
            a.sort();
            b.sort();
            assert_eq!(a, b);
        }
    }
}
