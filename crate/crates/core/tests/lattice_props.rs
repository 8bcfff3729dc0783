use plurival_core::lattice::lp::{certificate_holds, lp_solve, LinearProgram};
use plurival_core::lattice::{Exponent, MonomialIdeal, NewtonPolyhedron, Rational};
use proptest::prelude::*;

fn r(v: i64) -> Rational {
    Rational::from_integer(v)
}

fn exponent(n: usize) -> impl Strategy<Value = Exponent> {
    prop::collection::vec(0i64..6, n).prop_map(|v| Exponent::from_ints(&v).unwrap())
}

fn polyhedron_and_point() -> impl Strategy<Value = (NewtonPolyhedron, Exponent)> {
    (1usize..=4).prop_flat_map(|n| {
        (prop::collection::vec(exponent(n), 1..=6), exponent(n)).prop_map(move |(g, b)| {
            (NewtonPolyhedron::new(n, g).unwrap(), b)
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn strong_duality_on_random_programs(
        n in 1usize..=4,
        rows in prop::collection::vec((prop::collection::vec(-3i64..4, 4), -4i64..5), 0..5),
        cost in prop::collection::vec(0i64..5, 4),
        maximize in any::<bool>(),
    ) {
        let objective: Vec<Rational> = cost[..n].iter().map(|&c| r(if maximize { -c } else { c })).collect();
        let mut lp = if maximize {
            LinearProgram::maximize(objective)
        } else {
            LinearProgram::minimize(objective)
        };
        for (a, b) in &rows {
            lp.push_geq(a[..n].iter().map(|&x| r(x)).collect(), r(*b));
        }
        let out = lp_solve(&lp).unwrap();
        // Nonnegative costs keep these programs bounded.
        prop_assert_ne!(out.status(), "unbounded");
        prop_assert!(certificate_holds(&lp, &out));
    }

    #[test]
    fn newton_primal_and_dual_agree((poly, beta) in polyhedron_and_point()) {
        let p = poly.contains_primal(&beta).unwrap();
        let d = poly.contains_dual(&beta).unwrap();
        prop_assert_eq!(p, d);
    }

    #[test]
    fn newton_membership_is_monotone((poly, beta) in polyhedron_and_point(), bump in prop::collection::vec(0i64..3, 4)) {
        let n = poly.dim();
        let up: Vec<Rational> = (0..n).map(|j| &beta[j] + r(bump[j])).collect();
        let up = Exponent::new(up).unwrap();
        if poly.contains(&beta).unwrap() {
            prop_assert!(poly.contains(&up).unwrap());
        }
    }

    #[test]
    fn generators_are_members_and_vertices_generate((poly, _b) in polyhedron_and_point()) {
        for g in poly.generators() {
            prop_assert!(poly.contains(g).unwrap());
            let by_vertices = NewtonPolyhedron::new(poly.dim(), poly.vertices().to_vec()).unwrap();
            prop_assert!(by_vertices.contains_dual(g).unwrap());
        }
    }

    #[test]
    fn ideal_reduction_is_an_antichain(gens in prop::collection::vec(prop::collection::vec(0u32..5, 3), 1..8)) {
        let ideal = MonomialIdeal::new(3, gens.clone()).unwrap();
        for g in &gens {
            prop_assert!(ideal.contains(g));
        }
        for a in ideal.generators() {
            for b in ideal.generators() {
                if a != b {
                    prop_assert!(!a.iter().zip(b).all(|(x, y)| x >= y));
                }
            }
        }
    }
}
