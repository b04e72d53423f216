use std::collections::BTreeSet;

use hecke_ehrhart::exactmath::Rational;
use hecke_ehrhart::grassmann::grassmannian_count;
use hecke_ehrhart::lattice::{enumerate_superlattices, reduction_mod_p, Lattice};
use proptest::prelude::*;

fn box_points(n: usize, denom: i64, radius: i64) -> Vec<Vec<Rational>> {
    let side: Vec<i64> = (-radius * denom..=radius * denom).collect();
    let mut out = vec![vec![]];
    for _ in 0..n {
        out = out
            .into_iter()
            .flat_map(|v: Vec<Rational>| {
                side.iter().map(move |&x| {
                    let mut w = v.clone();
                    w.push(Rational::new(x, denom));
                    w
                })
            })
            .collect();
    }
    out
}

#[test]
fn members_sit_strictly_between() {
    for (n, p, k) in [(2, 2, 1), (2, 3, 1), (3, 2, 1), (3, 2, 2), (3, 3, 2), (4, 2, 2)] {
        let l = Lattice::standard(n);
        let top = l.scaled(&Rational::new(1, p as i64));
        let set = enumerate_superlattices(n, p, k).unwrap();
        for m in set.lattices() {
            assert_eq!(m.index_of(&l), Rational::from(p.pow(k as u32)));
            assert!(m.contains_lattice(&l) && top.contains_lattice(m));
            assert!(m != &l && m != &top);
        }
    }
}

#[test]
fn reduction_is_a_bijection() {
    for (n, p, k) in [(2, 3, 1), (3, 2, 1), (3, 3, 2), (4, 2, 2), (4, 3, 1)] {
        let l = Lattice::standard(n);
        let set = enumerate_superlattices(n, p, k).unwrap();
        let images: BTreeSet<_> = set.lattices().map(|m| reduction_mod_p(m, &l, p).unwrap()).collect();
        assert_eq!(images.len(), set.len());
        assert_eq!(grassmannian_count(k as i64, n as i64, p), images.len().into());
        assert!(images.iter().all(|s| s.dim() == k));
    }
}

#[test]
fn union_is_the_finer_lattice() {
    for (n, p, k) in [(2, 2, 1), (2, 3, 1), (3, 2, 1), (3, 2, 2)] {
        let set = enumerate_superlattices(n, p, k).unwrap();
        for x in box_points(n, p as i64, 1) {
            assert!(set.lattices().any(|m| m.contains(&x)), "{x:?} not covered");
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn superlattices_of_a_random_lattice(rows in prop::collection::vec(prop::collection::vec(-4i128..=4, 2), 2)) {
        let base = match Lattice::from_int_basis(&rows, 1) {
            Ok(b) => b,
            Err(_) => return Ok(()),
        };
        let set = hecke_ehrhart::lattice::enumerate_superlattices_of(&base, 3, 1).unwrap();
        prop_assert_eq!(set.len(), 4);
        for m in set.lattices() {
            prop_assert!(m.contains_lattice(&base));
            prop_assert_eq!(m.index_of(&base), Rational::from(3));
            prop_assert_eq!(reduction_mod_p(m, &base, 3).unwrap().dim(), 1);
        }
        prop_assert_eq!(base.dual().dual(), base);
    }
}
