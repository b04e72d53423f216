use std::collections::BTreeSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::LatticePolytope;
use crate::error::{Error, Result};
use crate::exactmath::Rational;
use crate::linalg::{self, ZMat};

/// A simplicial cone spanned by facet normals.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Cone {
    /// The face whose normal cone this is.
    pub face: usize,
    /// Facets whose normals span the cone, sorted.
    pub facets: Vec<usize>,
    /// Primitive generators, one per facet, in the same order.
    pub generators: ZMat,
}

/// A lattice point of the half-open parallelepiped `Q(σ)`, with its
/// coordinates `ρ ∈ [0,1)^r` in the cone generators.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct GammaPoint {
    pub point: Vec<i128>,
    pub rho: Vec<Rational>,
}

impl Cone {
    pub fn dim(&self) -> usize {
        self.generators.len()
    }

    /// `[L(σ) : U(σ)]`: the index of the generated lattice in the lattice
    /// points of the span.
    pub fn index(&self) -> u64 {
        cone_index(&self.generators)
    }

    pub fn is_unimodular(&self) -> bool {
        self.index() == 1
    }

    pub fn parallelepiped_points(&self) -> Vec<GammaPoint> {
        parallelepiped_points(&self.generators)
    }
}

/// Index of the sublattice spanned by linearly independent integer vectors
/// inside the saturated lattice of their span.
pub fn cone_index(generators: &[Vec<i128>]) -> u64 {
    linalg::z_maximal_minor_gcd(generators).unsigned_abs() as u64
}

/// All lattice points `ρ·G` with `ρ ∈ [0,1)^r` and `ρ·G` integral, found as
/// the subgroup of `(Q/Z)^r` generated by the rows of `H^{-1}`, where
/// `G = H·S` for a basis `S` of the saturated lattice.
pub fn parallelepiped_points(generators: &[Vec<i128>]) -> Vec<GammaPoint> {
    let r = generators.len();
    if r == 0 {
        return vec![GammaPoint { point: vec![], rho: vec![] }];
    }
    let n = generators[0].len();
    let sat = linalg::to_q(&linalg::z_saturation(generators, n));
    let h: Vec<Vec<Rational>> = generators
        .iter()
        .map(|g| {
            let gq: Vec<Rational> = g.iter().map(|&x| Rational::from(x)).collect();
            linalg::q_solve_left(&sat, &gq).expect("generator lies in its span")
        })
        .collect();
    let hinv = linalg::q_inverse(&h).expect("independent generators");
    let gens: Vec<Vec<Rational>> =
        hinv.iter().map(|row| row.iter().map(Rational::fract_floor).collect()).collect();
    let mut seen: BTreeSet<Vec<Rational>> = BTreeSet::new();
    let zero = vec![Rational::zero(); r];
    seen.insert(zero.clone());
    let mut queue = vec![zero];
    while let Some(rho) = queue.pop() {
        for g in &gens {
            let next: Vec<Rational> = rho.iter().zip(g).map(|(a, b)| (a + b).fract_floor()).collect();
            if seen.insert(next.clone()) {
                queue.push(next);
            }
        }
    }
    let gq = linalg::to_q(generators);
    let mut out: Vec<GammaPoint> = seen
        .into_iter()
        .map(|rho| {
            let point = linalg::q_vecmat(&rho, &gq)
                .iter()
                .map(|x| x.to_i128().expect("integral parallelepiped point"))
                .collect();
            GammaPoint { point, rho }
        })
        .collect();
    out.sort();
    out
}

/// The normal fan: one cone per face, indexed like the faces.
#[derive(Clone, Debug, Serialize)]
pub struct Fan {
    pub cones: Vec<Cone>,
    /// The spanning points `Σ(1)`: facet normals, indexed like the facets.
    pub rays: ZMat,
}

impl Fan {
    pub fn cone(&self, face: usize) -> &Cone {
        &self.cones[face]
    }

    pub fn to_json(&self) -> serde_json::Value {
        let cones: Vec<serde_json::Value> = self
            .cones
            .iter()
            .map(|c| {
                serde_json::json!({
                    "face": c.face,
                    "facets": c.facets,
                    "generators": c.generators,
                    "index": c.index(),
                })
            })
            .collect();
        serde_json::json!({ "rays": self.rays, "cones": cones })
    }
}

impl LatticePolytope {
    /// The normal fan; requires a simple polytope.
    pub fn normal_fan(&self) -> Result<Fan> {
        if let Some((v, count)) = self.simple_violation() {
            return Err(Error::NotSimple(v, count));
        }
        let cones = self
            .faces
            .iter()
            .enumerate()
            .map(|(i, f)| Cone {
                face: i,
                facets: f.facets.clone(),
                generators: f.facets.iter().map(|&j| self.facets[j].normal.clone()).collect(),
            })
            .collect();
        Ok(Fan { cones, rays: self.facets.iter().map(|f| f.normal.clone()).collect() })
    }

    /// Index of the normal cone of a face (the gcd of its maximal minors).
    pub fn face_cone_index(&self, face: usize) -> u64 {
        let gens: ZMat = self.faces[face].facets.iter().map(|&j| self.facets[j].normal.clone()).collect();
        cone_index(&gens)
    }

    /// All normal cones unimodular.
    pub fn is_nonsingular(&self) -> bool {
        self.is_simple() && (0..self.faces.len()).all(|i| self.face_cone_index(i) == 1)
    }

    /// The face on which `⟨·,u⟩` attains its minimum.
    fn minimizing_face(&self, u: &[i128]) -> Option<usize> {
        let vals: Vec<i128> = self.coords.iter().map(|c| c.iter().zip(u).map(|(a, b)| a * b).sum()).collect();
        let min = *vals.iter().min()?;
        let verts: Vec<usize> = (0..vals.len()).filter(|&i| vals[i] == min).collect();
        self.face_by_vertices(&verts)
    }

    /// Checks the fan axioms on the normal fan: faces of cones are cones,
    /// relative interiors of distinct cones are disjoint (each interior
    /// point selects exactly its own face), and the cones cover the space.
    pub fn check_fan_axioms(&self, seed: u64) -> Result<()> {
        let fan = self.normal_fan()?;
        let n = self.dim();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for cone in &fan.cones {
            for k in 0..=cone.facets.len() {
                for sub in linalg::combinations(cone.facets.len(), k) {
                    let ids: Vec<usize> = sub.iter().map(|&i| cone.facets[i]).collect();
                    if self.face_by_facets(&ids).is_none() {
                        return Err(Error::Verification(format!(
                            "face of cone {} spanned by facets {ids:?} is not in the fan",
                            cone.face
                        )));
                    }
                }
            }
            for trial in 0..4 {
                let mut u = vec![0i128; n];
                for g in &cone.generators {
                    let w: i128 = if trial == 0 { 1 } else { rng.gen_range(1..5) };
                    for (x, y) in u.iter_mut().zip(g) {
                        *x += w * y;
                    }
                }
                if self.minimizing_face(&u) != Some(cone.face) {
                    return Err(Error::Verification(format!(
                        "interior point {u:?} of cone {} selects another face",
                        cone.face
                    )));
                }
            }
        }
        for _ in 0..50 {
            let u: Vec<i128> = (0..n).map(|_| rng.gen_range(-4..=4)).collect();
            if u.iter().all(|&x| x == 0) {
                continue;
            }
            let face = self
                .minimizing_face(&u)
                .ok_or_else(|| Error::Verification(format!("{u:?} selects no face")))?;
            let gens = linalg::to_q(&fan.cones[face].generators);
            let uq: Vec<Rational> = u.iter().map(|&x| Rational::from(x)).collect();
            let mu = linalg::q_solve_left(&gens, &uq)
                .ok_or_else(|| Error::Verification(format!("{u:?} is outside the span of its cone")))?;
            if !mu.iter().all(Rational::is_positive) {
                return Err(Error::Verification(format!("{u:?} is not interior to its cone")));
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn indices() {
        assert_eq!(cone_index(&[vec![1, 0], vec![0, 1]]), 1);
        assert_eq!(cone_index(&[vec![0, 1], vec![2, -1]]), 2);
        assert_eq!(cone_index(&[vec![1, 0, 0], vec![0, 1, 0], vec![1, 1, 2]]), 2);
        assert_eq!(cone_index(&[vec![2, 2, 0]]), 2);
    }

    #[test]
    fn parallelepiped() {
        let pts = parallelepiped_points(&[vec![0, 1], vec![2, -1]]);
        let got: Vec<Vec<i128>> = pts.iter().map(|g| g.point.clone()).collect();
        assert_eq!(got, vec![vec![0, 0], vec![1, 0]]);
        assert_eq!(pts[1].rho, vec![Rational::new(1, 2), Rational::new(1, 2)]);
        assert_eq!(parallelepiped_points(&[vec![1, 0], vec![0, 1]]).len(), 1);
        let gens = vec![vec![1, 0, 0], vec![0, 1, 0], vec![1, 1, 3]];
        assert_eq!(parallelepiped_points(&gens).len() as u64, cone_index(&gens));
        let lower = vec![vec![1, 1, 0], vec![1, -1, 0]];
        assert_eq!(parallelepiped_points(&lower).len(), 2);
    }
}
