use hecke_ehrhart::exactmath::Rational;
use hecke_ehrhart::polytope::LatticePolytope;
use hecke_ehrhart::toddop::{
    distribution_check, hurwitz_numeric_check, kp_check, sqrfree_identity_check, edge_strata_report,
    squarefree_term_check, squarefree_term_faces, todd_terms,
};

fn kp_polytopes() -> Vec<(&'static str, LatticePolytope)> {
    let mut v = Vec::new();
    for n in 1..=3 {
        v.push(("cube", LatticePolytope::cube(n).unwrap()));
        v.push(("simplex", LatticePolytope::simplex(n).unwrap()));
    }
    v.push(("prism", LatticePolytope::prism().unwrap()));
    v.push(("singular triangle", LatticePolytope::singular_triangle().unwrap()));
    v
}

#[test]
fn todd_operator_reproduces_ehrhart() {
    for (name, p) in kp_polytopes() {
        kp_check(&p).unwrap_or_else(|e| panic!("{name}: {e}"));
    }
}

#[test]
fn nonsingular_coefficients_are_bernoulli_products() {
    let prism = LatticePolytope::prism().unwrap();
    for l in 1..=3 {
        for t in todd_terms(&prism, l).unwrap() {
            let expected: Rational = t
                .partition
                .iter()
                .map(|&(_, k)| {
                    hecke_ehrhart::exactmath::bernoulli(k)
                        / Rational::from_int(hecke_ehrhart::exactmath::factorial(k))
                })
                .product();
            assert_eq!(t.coefficient, expected);
        }
    }
    let facets = todd_terms(&prism, 1).unwrap();
    assert_eq!(facets.len(), prism.facets().len());
    assert!(facets.iter().all(|t| t.coefficient == Rational::new(1, 2)));
}

#[test]
fn singular_vertex_has_nontrivial_gamma() {
    let tri = LatticePolytope::singular_triangle().unwrap();
    let origin = tri.face_by_vertices(&[0]).unwrap();
    let terms = todd_terms(&tri, 2).unwrap();
    let t = terms.iter().find(|t| t.face == origin && t.partition.iter().all(|&(_, k)| k == 1)).unwrap();
    assert_eq!(t.coefficient, Rational::new(1, 2));
}

#[test]
fn distribution_grid() {
    for n in 2..=6 {
        for k in 1..=5 {
            distribution_check(n, k).unwrap();
        }
    }
}

#[test]
fn hurwitz_values() {
    for (k, u) in [(2, Rational::new(1, 2)), (2, Rational::new(1, 4)), (3, Rational::new(1, 3)), (4, Rational::new(1, 3))] {
        let r = hurwitz_numeric_check(k, &u).unwrap();
        assert!(r.error < 1e-9);
    }
    let r = hurwitz_numeric_check(2, &Rational::new(1, 2)).unwrap();
    assert!((r.series - std::f64::consts::PI.powi(2)).abs() < 1e-9);
}

#[test]
fn squarefree_terms_transform_by_eigenvalues() {
    for p in [LatticePolytope::cube(3).unwrap(), LatticePolytope::prism().unwrap()] {
        for prime in [3, 5] {
            for k in [1, 2] {
                let faces: Vec<usize> =
                    (0..p.faces().len()).filter(|&i| p.faces()[i].dim <= 1).collect();
                let reports = squarefree_term_faces(&p, &faces, prime, k).unwrap();
                assert_eq!(reports.len(), faces.len());
            }
        }
    }
}

#[test]
fn worked_edge_totals() {
    let cube = LatticePolytope::cube(3).unwrap();
    let (edge, _) = cube.faces_of_dim(1).next().unwrap();
    let r1 = squarefree_term_check(&cube, edge, 5, 1).unwrap();
    assert_eq!(r1.lhs, Rational::from(35) / Rational::from(4i64));
    let r2 = squarefree_term_check(&cube, edge, 5, 2).unwrap();
    assert_eq!(r2.lhs, Rational::from(55) / Rational::from(4i64));
}

#[test]
fn cube_vertex_identity() {
    for l in 1..=3 {
        for j in 0..=l {
            for p in [2, 3] {
                sqrfree_identity_check(l, j, p).unwrap();
            }
        }
    }
}

#[test]
fn stratified_edge_report() {
    let cube = LatticePolytope::cube(3).unwrap();
    let (edge, _) = cube.faces_of_dim(1).next().unwrap();
    let r = edge_strata_report(&cube, edge, 5).unwrap();
    println!("{r}");
    let counts: Vec<usize> = r.lattice_model.iter().map(|row| row.count).collect();
    assert_eq!(counts, vec![1, 2, 4, 24]);
    assert_eq!(r.lattice_model[2].ind_ratios, vec![Rational::new(1, 5)]);
    assert_eq!(r.lattice_model[3].sum_a, Rational::from(6));
    assert_eq!(r.expected_total, Rational::new(35, 4));
}
