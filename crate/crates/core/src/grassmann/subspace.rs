use std::fmt;

use serde::Serialize;

/// A subspace of `F_p^n` stored by its reduced row echelon basis.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct FiniteSubspace {
    p: u64,
    n: usize,
    rows: Vec<Vec<u64>>,
}

fn inv_mod(a: u64, p: u64) -> u64 {
    // Fermat: a^{p-2}.
    let mut result = 1u64;
    let mut base = a % p;
    let mut e = p - 2;
    while e > 0 {
        if e & 1 == 1 {
            result = result * base % p;
        }
        base = base * base % p;
        e >>= 1;
    }
    result
}

fn rref(p: u64, n: usize, mut rows: Vec<Vec<u64>>) -> Vec<Vec<u64>> {
    for r in rows.iter_mut() {
        for x in r.iter_mut() {
            *x %= p;
        }
    }
    let mut rank = 0;
    for c in 0..n {
        let Some(piv) = (rank..rows.len()).find(|&i| rows[i][c] != 0) else {
            continue;
        };
        rows.swap(rank, piv);
        let inv = inv_mod(rows[rank][c], p);
        for x in rows[rank].iter_mut() {
            *x = *x * inv % p;
        }
        for i in 0..rows.len() {
            if i != rank && rows[i][c] != 0 {
                let f = rows[i][c];
                for j in 0..n {
                    rows[i][j] = (rows[i][j] + (p - f) * rows[rank][j]) % p;
                }
            }
        }
        rank += 1;
    }
    rows.truncate(rank);
    rows
}

impl FiniteSubspace {
    /// The span of arbitrary vectors (entries reduced mod `p`).
    pub fn span(p: u64, n: usize, vectors: &[Vec<u64>]) -> Self {
        for v in vectors {
            assert_eq!(v.len(), n, "vector length must equal the ambient dimension");
        }
        FiniteSubspace { p, n, rows: rref(p, n, vectors.to_vec()) }
    }

    pub(crate) fn from_rref_unchecked(p: u64, n: usize, rows: Vec<Vec<u64>>) -> Self {
        FiniteSubspace { p, n, rows }
    }

    /// `span(e_1, …, e_d)`.
    pub fn coordinate(p: u64, n: usize, d: usize) -> Self {
        let rows = (0..d).map(|i| (0..n).map(|j| u64::from(i == j)).collect()).collect();
        FiniteSubspace { p, n, rows }
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn ambient_dim(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn basis(&self) -> &[Vec<u64>] {
        &self.rows
    }

    pub fn contains(&self, v: &[u64]) -> bool {
        let mut all = self.rows.clone();
        all.push(v.to_vec());
        rref(self.p, self.n, all).len() == self.rows.len()
    }

    pub fn contains_subspace(&self, other: &FiniteSubspace) -> bool {
        other.rows.iter().all(|v| self.contains(v))
    }

    pub fn sum(&self, other: &FiniteSubspace) -> FiniteSubspace {
        let mut all = self.rows.clone();
        all.extend(other.rows.iter().cloned());
        FiniteSubspace { p: self.p, n: self.n, rows: rref(self.p, self.n, all) }
    }

    pub fn intersection_dim(&self, other: &FiniteSubspace) -> usize {
        self.dim() + other.dim() - self.sum(other).dim()
    }

    /// `Σ coeffs[i] · basis[i]`.
    pub fn combination(&self, coeffs: &[u64]) -> Vec<u64> {
        let mut v = vec![0u64; self.n];
        for (c, row) in coeffs.iter().zip(&self.rows) {
            for (x, r) in v.iter_mut().zip(row) {
                *x = (*x + c * r) % self.p;
            }
        }
        v
    }

    /// All `p^dim` vectors of the subspace.
    pub fn elements(&self) -> Vec<Vec<u64>> {
        let d = self.dim();
        let total = (self.p as usize).pow(d as u32);
        (0..total)
            .map(|mut idx| {
                let coeffs: Vec<u64> = (0..d)
                    .map(|_| {
                        let c = (idx % self.p as usize) as u64;
                        idx /= self.p as usize;
                        c
                    })
                    .collect();
                self.combination(&coeffs)
            })
            .collect()
    }
}

impl fmt::Debug for FiniteSubspace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "span_F{}{:?}", self.p, self.rows)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_form() {
        let a = FiniteSubspace::span(3, 3, &[vec![1, 2, 0], vec![2, 1, 1]]);
        let b = FiniteSubspace::span(3, 3, &[vec![0, 0, 1], vec![1, 2, 0]]);
        assert_eq!(a, b);
        assert_eq!(a.dim(), 2);
        assert!(a.contains(&[2, 1, 2]));
        assert!(!a.contains(&[0, 1, 0]));
        assert_eq!(a.elements().len(), 9);
    }

    #[test]
    fn intersections() {
        let x = FiniteSubspace::coordinate(2, 3, 2);
        let y = FiniteSubspace::span(2, 3, &[vec![0, 1, 1], vec![0, 0, 1]]);
        assert_eq!(x.intersection_dim(&y), 1);
        assert_eq!(x.sum(&y).dim(), 3);
    }
}
