//! Lattice polytopes given by vertices: facets, the face lattice, volumes,
//! normal fans and the deformed volume polynomial `Vol P(h)`.
//!
//! Internally every point is written in coordinates of the ambient lattice
//! basis, so lattice points are integer vectors and a fundamental domain
//! has volume 1. Facet inequalities read `⟨c, a_F⟩ + λ_F ≥ 0` in those
//! coordinates with `a_F` a primitive integer vector.

mod builtin;
mod fan;
mod volpoly;
mod volume;

pub use fan::{cone_index, parallelepiped_points, Cone, Fan, GammaPoint};
pub use volpoly::VolumePolynomial;

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactmath::Rational;
use crate::lattice::Lattice;
use crate::linalg::{self, QMat, ZMat};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Facet {
    /// Primitive inward normal in lattice coordinates.
    pub normal: Vec<i128>,
    pub lambda: i128,
    /// Indices of the vertices on the facet, sorted.
    pub vertices: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Face {
    pub dim: usize,
    /// Sorted vertex indices.
    pub vertices: Vec<usize>,
    /// Sorted indices of the facets containing the face.
    pub facets: Vec<usize>,
}

/// Serialized polytope input: an optional lattice basis (default `Z^n`) and
/// a vertex list in ambient coordinates.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PolytopeInput {
    #[serde(default)]
    pub lattice: Option<QMat>,
    pub vertices: Vec<Vec<Rational>>,
}

/// Products of simplices are tagged with their block sizes so that the
/// volume polynomial can use the closed form; the tag does not survive a
/// change of lattice.
#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct SimplexProduct {
    pub blocks: Vec<usize>,
}

#[derive(Clone, Debug)]
pub struct LatticePolytope {
    lattice: Lattice,
    vertices: Vec<Vec<Rational>>,
    coords: Vec<Vec<i128>>,
    facets: Vec<Facet>,
    faces: Vec<Face>,
    children: Vec<Vec<usize>>,
    pub(crate) product: Option<SimplexProduct>,
}

fn int_coords(lattice: &Lattice, x: &[Rational]) -> Result<Vec<i128>> {
    if x.len() != lattice.dim() {
        return Err(Error::InvalidInput(format!(
            "vertex has {} coordinates, lattice has dimension {}",
            x.len(),
            lattice.dim()
        )));
    }
    lattice
        .coords(x)
        .iter()
        .map(|c| {
            if c.is_integer() {
                c.to_i128().ok_or_else(|| Error::InvalidInput("coordinate too large".into()))
            } else {
                Err(Error::VertexNotInLattice(format_point(x)))
            }
        })
        .collect()
}

pub(crate) fn format_point(x: &[Rational]) -> String {
    format!("({})", x.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(", "))
}

fn affine_rank(points: &[&Vec<i128>]) -> usize {
    if points.len() <= 1 {
        return 0;
    }
    let diffs: QMat = points[1..]
        .iter()
        .map(|p| p.iter().zip(points[0]).map(|(a, b)| Rational::from(a - b)).collect())
        .collect();
    linalg::q_rank(&diffs)
}

fn dot_i(a: &[i128], b: &[i128]) -> i128 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Primitive integer normal of the hyperplane through the given points, if
/// they span one.
fn hyperplane_normal(points: &[&Vec<i128>]) -> Option<Vec<i128>> {
    let n = points[0].len();
    if points.len() == 1 {
        return (n == 1).then(|| vec![1]);
    }
    let diffs: ZMat =
        points[1..].iter().map(|p| p.iter().zip(points[0]).map(|(a, b)| a - b).collect()).collect();
    let kernel = linalg::z_left_kernel(&linalg::z_transpose(&diffs));
    if kernel.len() != 1 || kernel[0].len() != n {
        return None;
    }
    Some(linalg::primitive(&kernel[0]))
}

impl LatticePolytope {
    /// Builds the polytope spanned by `vertices`, which must be points of
    /// `lattice`. Repeated points and points that are not vertices of the
    /// hull are dropped.
    pub fn facets_from_vertices(vertices: &[Vec<Rational>], lattice: &Lattice) -> Result<Self> {
        let n = lattice.dim();
        if vertices.is_empty() {
            return Err(Error::NotFullDimensional { found: 0, ambient: n });
        }
        let mut pts: Vec<(Vec<i128>, Vec<Rational>)> = Vec::new();
        for v in vertices {
            let c = int_coords(lattice, v)?;
            if !pts.iter().any(|(q, _)| *q == c) {
                pts.push((c, v.clone()));
            }
        }
        let coords: Vec<Vec<i128>> = pts.iter().map(|(c, _)| c.clone()).collect();
        let refs: Vec<&Vec<i128>> = coords.iter().collect();
        let rank = affine_rank(&refs);
        if rank < n {
            return Err(Error::NotFullDimensional { found: rank, ambient: n });
        }
        let halfspaces = sift_facets(&coords);
        // Keep only points whose active normals have full rank.
        let keep: Vec<usize> = (0..coords.len())
            .filter(|&i| {
                let active: QMat = halfspaces
                    .iter()
                    .filter(|(a, l)| dot_i(a, &coords[i]) + l == 0)
                    .map(|(a, _)| a.iter().map(|&x| Rational::from(x)).collect())
                    .collect();
                linalg::q_rank(&active) == n
            })
            .collect();
        let coords: Vec<Vec<i128>> = keep.iter().map(|&i| coords[i].clone()).collect();
        let ambient: Vec<Vec<Rational>> = keep.iter().map(|&i| pts[i].1.clone()).collect();
        let facets: Vec<Facet> = halfspaces
            .into_iter()
            .map(|(normal, lambda)| {
                let vertices =
                    (0..coords.len()).filter(|&i| dot_i(&normal, &coords[i]) + lambda == 0).collect();
                Facet { normal, lambda, vertices }
            })
            .collect();
        Ok(LatticePolytope::assemble(lattice.clone(), ambient, coords, facets))
    }

    /// Parses the JSON input format.
    pub fn from_input(input: &PolytopeInput) -> Result<Self> {
        let n = input.vertices.first().map(Vec::len).unwrap_or(0);
        let lattice = match &input.lattice {
            Some(b) => Lattice::from_basis(b)?,
            None => Lattice::standard(n),
        };
        LatticePolytope::facets_from_vertices(&input.vertices, &lattice)
    }

    pub fn to_input(&self) -> PolytopeInput {
        PolytopeInput { lattice: Some(self.lattice.basis().clone()), vertices: self.vertices.clone() }
    }

    fn assemble(
        lattice: Lattice,
        vertices: Vec<Vec<Rational>>,
        coords: Vec<Vec<i128>>,
        mut facets: Vec<Facet>,
    ) -> Self {
        facets.sort_by(|a, b| a.normal.cmp(&b.normal).then(a.lambda.cmp(&b.lambda)));
        let (faces, children) = face_lattice(&coords, &facets);
        LatticePolytope { lattice, vertices, coords, facets, faces, children, product: None }
    }

    pub fn dim(&self) -> usize {
        self.lattice.dim()
    }

    pub fn lattice(&self) -> &Lattice {
        &self.lattice
    }

    /// Vertices in ambient coordinates.
    pub fn vertices(&self) -> &[Vec<Rational>] {
        &self.vertices
    }

    /// Vertices in lattice coordinates.
    pub fn vertex_coords(&self) -> &[Vec<i128>] {
        &self.coords
    }

    pub fn facets(&self) -> &[Facet] {
        &self.facets
    }

    /// All faces, including the vertices and `P` itself, sorted by
    /// dimension.
    pub fn faces(&self) -> &[Face] {
        &self.faces
    }

    pub fn faces_of_dim(&self, d: usize) -> impl Iterator<Item = (usize, &Face)> {
        self.faces.iter().enumerate().filter(move |(_, f)| f.dim == d)
    }

    /// Index of the face with the given facet set.
    pub fn face_by_facets(&self, facets: &[usize]) -> Option<usize> {
        let mut key = facets.to_vec();
        key.sort_unstable();
        self.faces.iter().position(|f| f.facets == key)
    }

    /// Index of the face with the given vertex set.
    pub fn face_by_vertices(&self, vertices: &[usize]) -> Option<usize> {
        let mut key = vertices.to_vec();
        key.sort_unstable();
        self.faces.iter().position(|f| f.vertices == key)
    }

    /// Facet normals expressed as functionals on ambient space,
    /// `u_F = B^{-1} a_F`, so that the facet reads `⟨x,u_F⟩ + λ_F ≥ 0`.
    pub fn ambient_normal(&self, facet: usize) -> Vec<Rational> {
        let inv = linalg::q_inverse(self.lattice.basis()).expect("nonsingular");
        let a: Vec<Rational> = self.facets[facet].normal.iter().map(|&x| Rational::from(x)).collect();
        inv.iter().map(|row| linalg::dot(row, &a)).collect()
    }

    /// Every vertex lies on exactly `n` facets.
    pub fn is_simple(&self) -> bool {
        self.simple_violation().is_none()
    }

    pub(crate) fn simple_violation(&self) -> Option<(usize, usize)> {
        let n = self.dim();
        (0..self.coords.len()).find_map(|v| {
            let count = self.facets.iter().filter(|f| f.vertices.contains(&v)).count();
            (count != n).then_some((v, count))
        })
    }

    /// The same polytope viewed in a lattice `M` that contains its vertices.
    /// Facet and face indices are preserved.
    pub fn rebase(&self, m: &Lattice) -> Result<Self> {
        let n = self.dim();
        if m.dim() != n {
            return Err(Error::InvalidInput("lattice dimension mismatch".into()));
        }
        let coords: Vec<Vec<i128>> =
            self.vertices.iter().map(|v| int_coords(m, v)).collect::<Result<_>>()?;
        // a' = B_M · B_L^{-1} · a, rescaled to be primitive.
        let inv_l = linalg::q_inverse(self.lattice.basis()).expect("nonsingular");
        let t = linalg::q_matmul(m.basis(), &inv_l);
        let facets: Vec<Facet> = self
            .facets
            .iter()
            .map(|f| {
                let a: Vec<Rational> = f.normal.iter().map(|&x| Rational::from(x)).collect();
                let image: Vec<Rational> = t.iter().map(|row| linalg::dot(row, &a)).collect();
                let prim = linalg::primitive_from_rational(&image);
                let k = prim.iter().zip(&image).find(|(_, x)| !x.is_zero()).expect("nonzero normal");
                let scale = Rational::from(*k.0) / k.1;
                let lambda = (Rational::from(f.lambda) * scale).to_i128().expect("integral offset");
                Facet { normal: prim, lambda, vertices: f.vertices.clone() }
            })
            .collect();
        for f in &facets {
            for &v in &f.vertices {
                debug_assert_eq!(dot_i(&f.normal, &coords[v]) + f.lambda, 0);
            }
        }
        Ok(LatticePolytope {
            lattice: m.clone(),
            vertices: self.vertices.clone(),
            coords,
            facets,
            faces: self.faces.clone(),
            children: self.children.clone(),
            product: None,
        })
    }

    /// Checks the facet invariants: every vertex satisfies every inequality,
    /// with equality exactly on the facet's vertices, and normals are
    /// primitive.
    pub fn validate(&self) -> Result<()> {
        for (i, f) in self.facets.iter().enumerate() {
            if linalg::primitive(&f.normal) != f.normal {
                return Err(Error::Verification(format!("facet {i} normal is not primitive")));
            }
            for (v, c) in self.coords.iter().enumerate() {
                let val = dot_i(&f.normal, c) + f.lambda;
                if val < 0 || (val == 0) != f.vertices.contains(&v) {
                    return Err(Error::Verification(format!("facet {i} inequality fails at vertex {v}")));
                }
            }
        }
        Ok(())
    }
}

/// Exhaustive hyperplane sifting: every hyperplane through `n` affinely
/// independent points with all points on one side, oriented inward.
fn sift_facets(coords: &[Vec<i128>]) -> Vec<(Vec<i128>, i128)> {
    let n = coords[0].len();
    let mut found: BTreeSet<(Vec<i128>, i128)> = BTreeSet::new();
    for subset in linalg::combinations(coords.len(), n) {
        let pts: Vec<&Vec<i128>> = subset.iter().map(|&i| &coords[i]).collect();
        let Some(mut a) = hyperplane_normal(&pts) else {
            continue;
        };
        let mut lambda = -dot_i(&a, pts[0]);
        let values: Vec<i128> = coords.iter().map(|c| dot_i(&a, c) + lambda).collect();
        let pos = values.iter().any(|&v| v > 0);
        let neg = values.iter().any(|&v| v < 0);
        if pos && neg {
            continue;
        }
        if neg {
            a.iter_mut().for_each(|x| *x = -*x);
            lambda = -lambda;
        }
        found.insert((a, lambda));
    }
    found.into_iter().collect()
}

/// Faces as the intersection closure of the facet vertex sets, plus `P`
/// itself; also the covering relation (faces of one dimension lower).
fn face_lattice(coords: &[Vec<i128>], facets: &[Facet]) -> (Vec<Face>, Vec<Vec<usize>>) {
    let mut sets: BTreeSet<Vec<usize>> = facets.iter().map(|f| f.vertices.clone()).collect();
    let mut frontier: Vec<Vec<usize>> = sets.iter().cloned().collect();
    while let Some(s) = frontier.pop() {
        for f in facets {
            let inter: Vec<usize> = s.iter().copied().filter(|v| f.vertices.contains(v)).collect();
            if !inter.is_empty() && sets.insert(inter.clone()) {
                frontier.push(inter);
            }
        }
    }
    sets.insert((0..coords.len()).collect());
    let mut faces: Vec<Face> = sets
        .into_iter()
        .map(|vertices| {
            let pts: Vec<&Vec<i128>> = vertices.iter().map(|&i| &coords[i]).collect();
            let facet_ids = facets
                .iter()
                .enumerate()
                .filter(|(_, f)| vertices.iter().all(|v| f.vertices.contains(v)))
                .map(|(i, _)| i)
                .collect();
            Face { dim: affine_rank(&pts), vertices, facets: facet_ids }
        })
        .collect();
    faces.sort_by(|a, b| a.dim.cmp(&b.dim).then_with(|| a.vertices.cmp(&b.vertices)));
    let children = faces
        .iter()
        .map(|g| {
            faces
                .iter()
                .enumerate()
                .filter(|(_, h)| {
                    h.dim + 1 == g.dim && h.vertices.iter().all(|v| g.vertices.contains(v))
                })
                .map(|(i, _)| i)
                .collect()
        })
        .collect();
    (faces, children)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pts(v: &[&[i64]]) -> Vec<Vec<Rational>> {
        v.iter().map(|r| r.iter().map(|&x| Rational::from(x)).collect()).collect()
    }

    #[test]
    fn unit_square_facets() {
        let p = LatticePolytope::facets_from_vertices(
            &pts(&[&[0, 0], &[1, 0], &[0, 1], &[1, 1]]),
            &Lattice::standard(2),
        )
        .unwrap();
        assert_eq!(p.facets().len(), 4);
        for f in p.facets() {
            assert_eq!(f.normal.iter().map(|x| x.abs()).sum::<i128>(), 1);
            assert!(f.lambda == 0 || f.lambda == 1);
        }
        assert_eq!(p.faces().len(), 4 + 4 + 1);
        p.validate().unwrap();
    }

    #[test]
    fn simplex_facets() {
        let p = LatticePolytope::facets_from_vertices(&pts(&[&[0, 0], &[1, 0], &[0, 1]]), &Lattice::standard(2))
            .unwrap();
        let mut got: Vec<(Vec<i128>, i128)> = p.facets().iter().map(|f| (f.normal.clone(), f.lambda)).collect();
        got.sort();
        assert_eq!(got, vec![(vec![-1, -1], 1), (vec![0, 1], 0), (vec![1, 0], 0)]);
    }

    #[test]
    fn singular_triangle_normal() {
        let p = LatticePolytope::facets_from_vertices(&pts(&[&[0, 0], &[1, 0], &[1, 2]]), &Lattice::standard(2))
            .unwrap();
        assert_eq!(p.facets().len(), 3);
        let f = p.facets().iter().find(|f| f.vertices == vec![0, 2]).unwrap();
        assert_eq!(f.normal, vec![2, -1]);
    }

    #[test]
    fn degenerate_input_is_normalized() {
        let p = LatticePolytope::facets_from_vertices(
            &pts(&[&[0, 0], &[2, 0], &[0, 2], &[2, 2], &[1, 0], &[1, 1], &[0, 0]]),
            &Lattice::standard(2),
        )
        .unwrap();
        assert_eq!(p.vertices().len(), 4);
        assert_eq!(p.facets().len(), 4);
    }

    #[test]
    fn rejects_bad_input() {
        let l = Lattice::standard(2);
        assert!(matches!(
            LatticePolytope::facets_from_vertices(&pts(&[&[0, 0], &[1, 1], &[2, 2]]), &l),
            Err(Error::NotFullDimensional { found: 1, ambient: 2 })
        ));
        let half = [vec![Rational::new(1, 2), Rational::zero()], vec![Rational::zero(), Rational::one()]];
        let mut v = pts(&[&[0, 0], &[0, 1]]);
        v.push(half[0].clone());
        assert!(matches!(
            LatticePolytope::facets_from_vertices(&v, &l),
            Err(Error::VertexNotInLattice(_))
        ));
    }

    #[test]
    fn rebase_keeps_structure() {
        let sq = LatticePolytope::facets_from_vertices(
            &pts(&[&[0, 0], &[1, 0], &[0, 1], &[1, 1]]),
            &Lattice::standard(2),
        )
        .unwrap();
        let m = Lattice::standard(2).scaled(&Rational::new(1, 2));
        let r = sq.rebase(&m).unwrap();
        r.validate().unwrap();
        for (a, b) in sq.facets().iter().zip(r.facets()) {
            assert_eq!(a.normal, b.normal);
            assert_eq!(2 * a.lambda, b.lambda);
        }
    }
}
