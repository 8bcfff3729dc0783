use plurival_core::approximation::{approximant, green_approximant};
use plurival_core::integral::{sublevel_closed_form, sublevel_monte_carlo, McConfig};
use plurival_core::lattice::{q, Exponent, Rational};
use plurival_core::tian::{tian_function, TianQuery};
use plurival_core::toric::{DiagonalZhouWeight, ToricWeight};
use proptest::prelude::*;

fn nonzero(n: usize, max: i64) -> impl Strategy<Value = Exponent> {
    prop::collection::vec(0..=max, n)
        .prop_filter("nonzero piece", |v| v.iter().any(|x| *x > 0))
        .prop_map(|v| Exponent::from_ints(&v).unwrap())
}

fn weight(n: usize) -> impl Strategy<Value = ToricWeight> {
    (prop::collection::vec(nonzero(n, 3), 1..=3), 1i64..=2, 1i64..=2)
        .prop_map(|(p, a, b)| ToricWeight::new(p, q(a, b)).unwrap())
}

fn direction(n: usize) -> impl Strategy<Value = DiagonalZhouWeight> {
    prop::collection::vec(1i64..=4, n).prop_map(|w| {
        let total: i64 = w.iter().sum();
        DiagonalZhouWeight::new(w.iter().map(|x| q(total, *x)).collect()).unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(60))]

    #[test]
    fn tian_function_is_concave_and_exact(
        (weight, direction, twist) in (2usize..=3).prop_flat_map(|n| (weight(n), weight(n), prop::option::of(weight(n)))),
    ) {
        let n = weight.dim();
        // twists are shrunk until the reference is integrable near t = 0
        let mut twist = twist;
        let mut query;
        let mut shrink = 0;
        loop {
            query = TianQuery::new(Exponent::zero(n), twist.clone(), weight.clone(), direction.clone()).unwrap();
            if query.reference_integrable_at(&q(-1, 4)).unwrap() {
                break;
            }
            twist = twist.map(|t| t.scaled(&q(1, 2)).unwrap());
            shrink += 1;
            prop_assume!(shrink < 12);
        }
        let tn = tian_function(&query, &q(-1, 4), &q(3, 1)).unwrap();
        prop_assert!(tn.is_concave());
        for t in [q(-1, 4), q(-1, 7), q(0, 1), q(2, 3), q(3, 1)] {
            prop_assert_eq!(tn.value_at(&t).unwrap(), query.value(&t).unwrap());
        }
        for pair in tn.knots.windows(2) {
            let mid = (&pair[0] + &pair[1]) * q(1, 2);
            prop_assert_eq!(tn.value_at(&mid).unwrap(), query.value(&mid).unwrap());
        }
    }

    #[test]
    fn closed_form_ratio_is_sigma_plus_c_over_t(
        (phi, beta, t) in (1usize..=3).prop_flat_map(|n| (direction(n), nonzero(n, 3), 1i64..=40)),
    ) {
        let n = phi.dim();
        let psi = ToricWeight::monomial(beta);
        let t = Rational::from_integer(t);
        let r = sublevel_closed_form(&Exponent::zero(n), &ToricWeight::zero(n), &phi, &psi, &t).unwrap();
        let exact = r.exact_ratio.unwrap();
        prop_assert_eq!(&exact.sigma, &plurival_core::toric::relative_type(&psi, &phi).unwrap());
        // the trivial reference gives C = Σ β_k / 2
        let c: Rational = psi.pieces()[0].iter().cloned().sum::<Rational>() * q(1, 2);
        prop_assert_eq!(&exact.coeff, &c);
        prop_assert!((r.ratio - exact.at(&t).to_f64()).abs() < 1e-12);
        prop_assert!(r.mass > 0.0 && r.moment >= 0.0);
    }

    #[test]
    fn approximants_are_nested_and_bounded((phi, m) in ((2usize..=3).prop_flat_map(direction), 1u32..=12)) {
        let fam = approximant(m, &phi).unwrap();
        let next = approximant(m + 1, &phi).unwrap();
        prop_assert!(next.monomials.is_subset_of(&fam.monomials));
        let sigma = fam.sigma().unwrap();
        prop_assert_eq!(&sigma, &fam.sigma_direct());
        let mr = Rational::from_integer(i64::from(m));
        prop_assert!(sigma > Rational::one() - mr.recip());
        prop_assert!(sigma <= Rational::one() + (Rational::one() + phi.max_a()) / mr);
        prop_assert!(phi.as_weight().germ_le(&fam.realized).unwrap());
    }

    #[test]
    fn green_approximant_is_max_log(z in prop::collection::vec(0.01f64..0.99, 1..=3), m in 1u32..=20) {
        let want = z.iter().map(|x| x.ln()).fold(f64::NEG_INFINITY, f64::max);
        prop_assert_eq!(green_approximant(m, &z).unwrap(), want);
    }
}

#[test]
fn monte_carlo_with_twist_and_max_direction() {
    let phi = DiagonalZhouWeight::from_ints(&[2, 2]).unwrap();
    let twist = ToricWeight::from_ints(&[&[1, 0], &[0, 1]], q(1, 2)).unwrap();
    let psi = ToricWeight::max_norm(2);
    let cfg = McConfig {
        samples: 100_000,
        seed: 11,
        workers: Some(3),
    };
    let r = sublevel_monte_carlo(&Exponent::zero(2), &twist, &phi, &psi, &q(8, 1), &cfg).unwrap();
    assert!(r.stderr > 0.0 && r.ratio.is_finite());
    // σ(log max|z_j|, Φ_(2,2)) = 1/2, and the 1/t correction is bounded by 1/2t here
    assert!(r.ratio >= 0.5 - 3.0 * r.stderr);
    assert!(r.ratio <= 0.5 + 1.0 / 16.0 + 3.0 * r.stderr);
    let single = ToricWeight::from_ints(&[&[1, 1]], q(1, 3)).unwrap();
    let psi = ToricWeight::coordinate(2, 1);
    let mc = sublevel_monte_carlo(&Exponent::from_ints(&[1, 0]).unwrap(), &single, &phi, &psi, &q(5, 1), &cfg).unwrap();
    let cf = sublevel_closed_form(&Exponent::from_ints(&[1, 0]).unwrap(), &single, &phi, &psi, &q(5, 1)).unwrap();
    assert!((mc.ratio - cf.ratio).abs() <= 3.0 * mc.stderr);
    assert!((mc.log_mass - cf.log_mass).abs() < 1e-9, "single-piece twists make the weight constant");
}
