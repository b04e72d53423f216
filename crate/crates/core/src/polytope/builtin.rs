use super::{LatticePolytope, SimplexProduct};
use crate::error::{Error, Result};
use crate::exactmath::Rational;
use crate::lattice::Lattice;

impl LatticePolytope {
    /// `Δ_{m_1} × ⋯ × Δ_{m_r}` with each simplex standard in its own block of
    /// coordinates.
    pub fn product_of_simplices(blocks: &[usize]) -> Result<Self> {
        if blocks.is_empty() || blocks.contains(&0) {
            return Err(Error::InvalidInput("simplex blocks must be positive".into()));
        }
        let n: usize = blocks.iter().sum();
        let mut points: Vec<Vec<i64>> = vec![vec![]];
        for &m in blocks {
            let simplex: Vec<Vec<i64>> = (0..=m)
                .map(|i| (0..m).map(|j| i64::from(i == j + 1)).collect())
                .collect();
            points = points
                .into_iter()
                .flat_map(|prefix| {
                    simplex.iter().map(move |s| {
                        let mut v = prefix.clone();
                        v.extend(s);
                        v
                    })
                })
                .collect();
        }
        let verts: Vec<Vec<Rational>> =
            points.iter().map(|v| v.iter().map(|&x| Rational::from(x)).collect()).collect();
        let mut p = LatticePolytope::facets_from_vertices(&verts, &Lattice::standard(n))?;
        p.product = Some(SimplexProduct { blocks: blocks.to_vec() });
        Ok(p)
    }

    /// The unit cube `[0,1]^n`.
    pub fn cube(n: usize) -> Result<Self> {
        LatticePolytope::product_of_simplices(&vec![1; n])
    }

    /// The standard simplex `conv{0, e_1, …, e_n}`.
    pub fn simplex(n: usize) -> Result<Self> {
        LatticePolytope::product_of_simplices(&[n])
    }

    /// The triangular prism `Δ_2 × Δ_1`.
    pub fn prism() -> Result<Self> {
        LatticePolytope::product_of_simplices(&[2, 1])
    }

    /// `conv{(0,0), (1,0), (1,2)}`, whose vertex cone at the origin has
    /// index 2.
    pub fn singular_triangle() -> Result<Self> {
        let verts: Vec<Vec<Rational>> = [[0, 0], [1, 0], [1, 2]]
            .iter()
            .map(|v| v.iter().map(|&x| Rational::from(x)).collect())
            .collect();
        LatticePolytope::facets_from_vertices(&verts, &Lattice::standard(2))
    }

    /// Parses `cube:n`, `simplex:n`, `product:a,b,…`, `prism` or
    /// `singular-triangle`.
    pub fn builtin(name: &str) -> Result<Self> {
        let parse_n = |s: &str| -> Result<usize> {
            s.trim().parse().map_err(|_| Error::Parse(format!("bad dimension in builtin `{name}`")))
        };
        match name.split_once(':') {
            Some(("cube", n)) => LatticePolytope::cube(parse_n(n)?),
            Some(("simplex", n)) => LatticePolytope::simplex(parse_n(n)?),
            Some(("product", list)) => {
                let blocks = list.split(',').map(parse_n).collect::<Result<Vec<_>>>()?;
                LatticePolytope::product_of_simplices(&blocks)
            }
            None if name == "prism" => LatticePolytope::prism(),
            None if name == "singular-triangle" => LatticePolytope::singular_triangle(),
            _ => Err(Error::Parse(format!("unknown builtin polytope `{name}`"))),
        }
    }
}
