use super::LatticePolytope;
use crate::exactmath::{factorial, Rational};
use crate::linalg::{self, QMat, ZMat};

impl LatticePolytope {
    /// Volume normalized so that a fundamental domain of the lattice has
    /// volume 1.
    pub fn volume(&self) -> Rational {
        let top = self.faces.len() - 1;
        self.volume_with_points(top, &self.rational_coords())
    }

    /// Volume of face `face` relative to the lattice `L ∩ V_f` induced on its
    /// affine hull. Vertices have volume 1.
    pub fn face_volume(&self, face: usize) -> Rational {
        let d = self.faces[face].dim;
        if d == 0 {
            return Rational::one();
        }
        let sat = self.face_saturation(face);
        let cols = nonzero_minor_columns(&sat);
        let sub: ZMat = sat.iter().map(|r| cols.iter().map(|&c| r[c]).collect()).collect();
        let unit = Rational::from(linalg::z_det(&sub).abs());
        let raw = self.chain_sum(face, &self.rational_coords(), &cols);
        raw / Rational::from_int(factorial(d as u32)) / unit
    }

    /// `Σ_{f ∈ ℱ(l)} Vol f`.
    pub fn vol_l(&self, l: usize) -> Rational {
        self.faces_of_dim(l).map(|(i, _)| self.face_volume(i)).sum()
    }

    /// Basis of the saturated lattice `Z^n ∩ V_f` (lattice coordinates),
    /// `V_f` the direction space of the face.
    pub fn face_saturation(&self, face: usize) -> ZMat {
        let f = &self.faces[face];
        let n = self.dim();
        if f.dim == 0 {
            return vec![];
        }
        let base = &self.coords[f.vertices[0]];
        let dirs: ZMat = f.vertices[1..]
            .iter()
            .map(|&v| self.coords[v].iter().zip(base).map(|(a, b)| a - b).collect())
            .collect();
        let sat = linalg::z_saturation(&dirs, n);
        debug_assert_eq!(sat.len(), f.dim);
        sat
    }

    pub(crate) fn rational_coords(&self) -> QMat {
        linalg::to_q(&self.coords)
    }

    /// Full-dimensional volume of the polytope with this face structure but
    /// vertices moved to `points` (lattice coordinates).
    pub(crate) fn volume_with_points(&self, face: usize, points: &[Vec<Rational>]) -> Rational {
        let d = self.faces[face].dim;
        let cols: Vec<usize> = (0..self.dim()).collect();
        self.chain_sum(face, points, &cols) / Rational::from_int(factorial(d as u32))
    }

    /// `Σ |minor_cols(E)|` over the barycentric flag simplices of `face`.
    fn chain_sum(&self, face: usize, points: &[Vec<Rational>], cols: &[usize]) -> Rational {
        let bary: Vec<Option<Vec<Rational>>> = vec![None; self.faces.len()];
        let mut cache = bary;
        let mut chain = Vec::new();
        let mut total = Rational::zero();
        self.chains(face, points, cols, &mut chain, &mut cache, &mut total);
        total
    }

    fn barycenter(&self, face: usize, points: &[Vec<Rational>], cache: &mut [Option<Vec<Rational>>]) -> Vec<Rational> {
        if let Some(b) = &cache[face] {
            return b.clone();
        }
        let vs = &self.faces[face].vertices;
        let k = Rational::from(vs.len());
        let n = points[0].len();
        let b: Vec<Rational> = (0..n)
            .map(|j| vs.iter().map(|&v| points[v][j].clone()).sum::<Rational>() / &k)
            .collect();
        cache[face] = Some(b.clone());
        b
    }

    fn chains(
        &self,
        face: usize,
        points: &[Vec<Rational>],
        cols: &[usize],
        chain: &mut Vec<Vec<Rational>>,
        cache: &mut [Option<Vec<Rational>>],
        total: &mut Rational,
    ) {
        chain.push(self.barycenter(face, points, cache));
        if self.faces[face].dim == 0 {
            let last = chain.last().expect("nonempty");
            let e: QMat = chain[..chain.len() - 1]
                .iter()
                .map(|b| cols.iter().map(|&c| &b[c] - &last[c]).collect())
                .collect();
            *total += linalg::q_det(&e).abs();
        } else {
            for &child in &self.children[face] {
                self.chains(child, points, cols, chain, cache, total);
            }
        }
        chain.pop();
    }
}

/// Columns `J` with `minor_J ≠ 0` for a full-row-rank integer matrix.
pub(crate) fn nonzero_minor_columns(rows: &[Vec<i128>]) -> Vec<usize> {
    let n = rows[0].len();
    linalg::combinations(n, rows.len())
        .into_iter()
        .find(|cols| {
            let sub: ZMat = rows.iter().map(|r| cols.iter().map(|&c| r[c]).collect()).collect();
            linalg::z_det(&sub) != 0
        })
        .expect("full row rank")
}

#[cfg(test)]
mod tests {
    use crate::exactmath::Rational;
    use crate::lattice::Lattice;
    use crate::polytope::LatticePolytope;

    fn poly(v: &[&[i64]]) -> LatticePolytope {
        let pts: Vec<Vec<Rational>> = v.iter().map(|r| r.iter().map(|&x| Rational::from(x)).collect()).collect();
        LatticePolytope::facets_from_vertices(&pts, &Lattice::standard(v[0].len())).unwrap()
    }

    #[test]
    fn volumes() {
        let sq = poly(&[&[0, 0], &[1, 0], &[0, 1], &[1, 1]]);
        assert_eq!(sq.volume(), Rational::one());
        assert_eq!(sq.vol_l(1), Rational::from(4));
        assert_eq!(sq.vol_l(2), Rational::one());
        assert_eq!(sq.vol_l(0), Rational::from(4));
        let tri = poly(&[&[0, 0], &[1, 0], &[0, 1]]);
        assert_eq!(tri.volume(), Rational::new(1, 2));
        assert_eq!(tri.vol_l(1), Rational::from(3));
        let tet = poly(&[&[0, 0, 0], &[1, 0, 0], &[0, 1, 0], &[0, 0, 1]]);
        assert_eq!(tet.volume(), Rational::new(1, 6));
        let cube = poly(&[&[0, 0, 0], &[1, 0, 0], &[0, 1, 0], &[0, 0, 1], &[1, 1, 0], &[1, 0, 1], &[0, 1, 1], &[1, 1, 1]]);
        assert_eq!(cube.volume(), Rational::one());
        for (i, _) in cube.faces_of_dim(2) {
            assert_eq!(cube.face_volume(i), Rational::one());
        }
    }

    #[test]
    fn lattice_normalization() {
        let l = Lattice::from_basis(&[
            vec![Rational::new(1, 2), Rational::zero()],
            vec![Rational::zero(), Rational::one()],
        ])
        .unwrap();
        let pts: Vec<Vec<Rational>> = [[0, 0], [1, 0], [0, 1], [1, 1]]
            .iter()
            .map(|r| r.iter().map(|&x| Rational::from(x)).collect())
            .collect();
        let sq = LatticePolytope::facets_from_vertices(&pts, &l).unwrap();
        assert_eq!(sq.volume(), Rational::from(2));
    }

    #[test]
    fn lattice_length_of_diagonal_edge() {
        let t = poly(&[&[0, 0], &[2, 0], &[2, 2]]);
        let e = t.face_by_vertices(&[0, 2]).unwrap();
        assert_eq!(t.face_volume(e), Rational::from(2));
        let v = t.face_by_vertices(&[1]).unwrap();
        assert_eq!(t.face_volume(v), Rational::one());
    }
}
