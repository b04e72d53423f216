use hecke_ehrhart::ehrhart::{count_points, ehrhart, ehrhart_native};
use hecke_ehrhart::exactmath::Rational;
use hecke_ehrhart::lattice::{enumerate_superlattices_of, Lattice};
use hecke_ehrhart::linalg;
use hecke_ehrhart::polytope::LatticePolytope;
use proptest::prelude::*;

/// Counts points of `M` in `t·[0,1]^n` (cube) or `t·Δ_n` (simplex) by
/// scanning a box in `M`-coordinates and testing the closed-form
/// inequalities in ambient coordinates.
fn brute_force(simplex: bool, m: &Lattice, t: i64) -> u128 {
    let n = m.dim();
    let b = m.basis();
    let inv = linalg::q_inverse(b).unwrap();
    // M-coordinates of the ambient box corners bound the scan.
    let mut bound = 0i64;
    for row in &inv {
        let s: Rational = row.iter().map(Rational::abs).sum();
        bound = bound.max((s * Rational::from(t)).ceil().try_into().unwrap());
    }
    let mut count = 0u128;
    let mut c = vec![-bound; n];
    loop {
        let cq: Vec<Rational> = c.iter().map(|&x| Rational::from(x)).collect();
        let x = linalg::q_vecmat(&cq, b);
        let tt = Rational::from(t);
        let inside = if simplex {
            x.iter().all(|v| !v.is_negative()) && x.iter().cloned().sum::<Rational>() <= tt
        } else {
            x.iter().all(|v| !v.is_negative() && *v <= tt)
        };
        if inside {
            count += 1;
        }
        let mut i = 0;
        while i < n {
            c[i] += 1;
            if c[i] <= bound {
                break;
            }
            c[i] = -bound;
            i += 1;
        }
        if i == n {
            return count;
        }
    }
}

#[test]
fn counts_match_brute_force_in_superlattices() {
    for n in 2..=3 {
        for simplex in [false, true] {
            let p = if simplex { LatticePolytope::simplex(n) } else { LatticePolytope::cube(n) }.unwrap();
            for prime in [2, 3] {
                for m in enumerate_superlattices_of(p.lattice(), prime, 1).unwrap().lattices() {
                    for t in 0..=3 {
                        assert_eq!(count_points(&p, m, t).unwrap(), brute_force(simplex, m, t));
                    }
                }
            }
        }
    }
}

fn test_polytopes() -> Vec<LatticePolytope> {
    let mut v = vec![LatticePolytope::prism().unwrap(), LatticePolytope::singular_triangle().unwrap()];
    for n in 1..=4 {
        v.push(LatticePolytope::cube(n).unwrap());
        v.push(LatticePolytope::simplex(n).unwrap());
    }
    v
}

#[test]
fn polynomial_predicts_unseen_dilates() {
    for p in test_polytopes() {
        let n = p.dim();
        let e = ehrhart_native(&p).unwrap();
        assert!(e.coeff(0).is_one());
        assert_eq!(e.coeff(n), p.volume());
        assert_eq!(e.coeff(n - 1), p.vol_l(n - 1) / Rational::from(2));
        for t in [n + 1, n + 2] {
            let predicted = e.poly.eval(&Rational::from(t as i64));
            assert_eq!(predicted, Rational::from(count_points(&p, p.lattice(), t as i64).unwrap() as i128));
        }
    }
}

#[test]
fn finer_lattice_dilates_the_polynomial() {
    for p in test_polytopes().into_iter().filter(|p| p.dim() <= 3) {
        for prime in [2i64, 3, 5] {
            let fine = p.lattice().scaled(&Rational::new(1, prime));
            let e = ehrhart(&p, p.lattice()).unwrap().poly;
            let ef = ehrhart(&p, &fine).unwrap().poly;
            assert_eq!(ef, e.dilate(&Rational::from(prime)));
        }
    }
}

fn gcd(a: i128, b: i128) -> i128 {
    if b == 0 { a.abs() } else { gcd(b, a % b) }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    /// Pick's theorem for random lattice triangles.
    #[test]
    fn random_triangles_obey_pick(pts in prop::collection::vec((-6i128..=6, -6i128..=6), 3)) {
        let (a, b, c) = (pts[0], pts[1], pts[2]);
        let twice_area = ((b.0 - a.0) * (c.1 - a.1) - (c.0 - a.0) * (b.1 - a.1)).abs();
        prop_assume!(twice_area > 0);
        let verts: Vec<Vec<Rational>> =
            pts.iter().map(|&(x, y)| vec![Rational::from(x), Rational::from(y)]).collect();
        let p = LatticePolytope::facets_from_vertices(&verts, &Lattice::standard(2)).unwrap();
        let boundary = gcd(b.0 - a.0, b.1 - a.1) + gcd(c.0 - b.0, c.1 - b.1) + gcd(a.0 - c.0, a.1 - c.1);
        let e = ehrhart_native(&p).unwrap();
        prop_assert_eq!(e.coeff(2), Rational::new(twice_area, 2));
        prop_assert_eq!(e.coeff(1), Rational::new(boundary, 2));
        prop_assert!(e.coeff(0).is_one());
        let count = count_points(&p, p.lattice(), 3).unwrap();
        prop_assert_eq!(Rational::from(count as i128), e.poly.eval(&Rational::from(3)));
    }
}
