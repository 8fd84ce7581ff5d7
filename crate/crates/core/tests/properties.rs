use esp_core::game::{expected_payoff, Game, MixedProfile, MixedStrategy};
use esp_core::geometry::{self, rational_decomposition, Tri};
use esp_core::invade::AppendixAssignment;
use esp_core::multi::{check_stability_multi, pure_profile, MultiConfiguration};
use esp_core::preference::{best_response_set, make_dominant_type, PreferenceType, SubjectiveGame};
use esp_core::rational::{frac, int};
use esp_core::single::{check_stability_single, classify_2x2, refute_single, total_variation, Configuration};
use esp_core::verdict::{Order, Witness};
use esp_core::witness::{extend_single, verify_multi, verify_single};
use esp_core::{Budget, Sign, SharePolynomial, Q};
use num_traits::{One, Signed, Zero};
use proptest::prelude::*;

fn small_q() -> impl Strategy<Value = Q> {
    (-12i64..=12, 1i64..=4).prop_map(|(n, d)| frac(n, d))
}

fn shape() -> impl Strategy<Value = Vec<usize>> {
    prop::collection::vec(2usize..=3, 2..=3)
}

fn game_of(shape: Vec<usize>) -> impl Strategy<Value = Game> {
    let count: usize = shape.iter().product();
    let n = shape.len();
    prop::collection::vec(prop::collection::vec(small_q(), n), count)
        .prop_map(move |p| Game::from_shape(&shape, p).unwrap())
}

fn any_game() -> impl Strategy<Value = Game> {
    shape().prop_flat_map(game_of)
}

fn mixed(m: usize) -> impl Strategy<Value = MixedStrategy> {
    prop::collection::vec(0i64..=5, m).prop_map(|w| {
        let total: i64 = w.iter().sum();
        if total == 0 {
            MixedStrategy::uniform(w.len())
        } else {
            MixedStrategy::new(w.iter().map(|&x| frac(x, total)).collect()).unwrap()
        }
    })
}

fn game_and_profiles() -> impl Strategy<Value = (Game, MixedProfile, MixedStrategy, Q)> {
    any_game().prop_flat_map(|g| {
        let strategies: Vec<_> = g.shape().iter().map(|&m| mixed(m)).collect();
        let m0 = g.shape()[0];
        (Just(g), strategies, mixed(m0), (0i64..=6).prop_map(|k| frac(k, 6)))
            .prop_map(|(g, s, t, l)| (g, MixedProfile::new(s), t, l))
    })
}

fn poly() -> impl Strategy<Value = SharePolynomial> {
    prop::collection::vec(small_q(), 0..5).prop_map(SharePolynomial::new)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn payoff_is_linear_in_each_strategy((g, prof, other, l) in game_and_profiles()) {
        let s0 = prof.strategy(0);
        let blend: Vec<Q> = s0.weights().iter().zip(other.weights())
            .map(|(a, b)| &l * a + (Q::one() - &l) * b).collect();
        let mixed = prof.with(0, MixedStrategy::new(blend).unwrap());
        let lhs = expected_payoff(&g, &mixed).unwrap();
        let a = expected_payoff(&g, &prof).unwrap();
        let b = expected_payoff(&g, &prof.with(0, other.clone())).unwrap();
        for i in 0..g.players() {
            prop_assert_eq!(&lhs[i], &(&l * &a[i] + (Q::one() - &l) * &b[i]));
        }
    }

    #[test]
    fn best_responses_survive_positive_affine_maps(
        (g, prof, _, _) in game_and_profiles(),
        scale in (1i64..=5, 1i64..=3).prop_map(|(n, d)| frac(n, d)),
        shift in small_q(),
    ) {
        let u: Vec<Q> = g.payoffs().iter().map(|p| p[0].clone()).collect();
        let v: Vec<Q> = u.iter().map(|x| &scale * x + &shift).collect();
        let t = PreferenceType::general("u", g.shape(), 0, u).unwrap();
        let w = PreferenceType::general("v", g.shape(), 0, v).unwrap();
        prop_assert_eq!(best_response_set(&t, 0, &prof).unwrap(), best_response_set(&w, 0, &prof).unwrap());
    }

    #[test]
    fn pure_equilibria_match_brute_force(g in any_game()) {
        let types: Vec<PreferenceType> = (0..g.players())
            .map(|i| PreferenceType::general(format!("p{i}"), g.shape(), i, g.payoffs().iter().map(|p| p[i].clone()).collect()).unwrap())
            .collect();
        let refs: Vec<&PreferenceType> = types.iter().collect();
        let found = SubjectiveGame::new(&refs).unwrap().pure_equilibria();
        let mut brute = Vec::new();
        for x in 0..g.profile_count() {
            let a = g.decode(x);
            let ok = (0..g.players()).all(|i| (0..g.shape()[i]).all(|b| {
                let mut d = a.clone();
                d[i] = b;
                g.payoff_of(&d)[i] <= g.payoff_of(&a)[i]
            }));
            if ok {
                brute.push(a);
            }
        }
        prop_assert_eq!(found, brute);
    }

    #[test]
    fn sign_near_zero_matches_small_evaluation(p in poly()) {
        let sign = p.sign_near_zero();
        let c = p.coefficients();
        match c.iter().position(|x| !x.is_zero()) {
            None => prop_assert_eq!(sign, Sign::Zero),
            Some(k) => {
                // below this point the lowest term dominates the rest
                let tail: Q = c[k + 1..].iter().map(|x| x.abs()).fold(Q::zero(), |a, b| a + b);
                let lead = c[k].abs();
                let bound = &lead / (&lead + &tail);
                let eps = bound / int(2);
                let value = p.eval(&eps);
                let expected = if value.is_positive() { Sign::Positive } else { Sign::Negative };
                prop_assert!(!value.is_zero());
                prop_assert_eq!(sign, expected);
            }
        }
    }

    #[test]
    fn polynomials_form_a_commutative_ring(p in poly(), q in poly(), r in poly(), e in small_q()) {
        prop_assert_eq!(&p * &q, &q * &p);
        prop_assert_eq!(&p + &q, &q + &p);
        prop_assert_eq!(&(&p + &q) * &r, &(&p * &r) + &(&q * &r));
        prop_assert_eq!(&(&p * &q) * &r, &p * &(&q * &r));
        prop_assert!((&p - &p).is_zero());
        prop_assert_eq!((&p * &q).eval(&e), p.eval(&e) * q.eval(&e));
        prop_assert_eq!((&p + &q).eval(&e), p.eval(&e) + q.eval(&e));
    }

    #[test]
    fn appendix_identity_holds_exactly(
        (g, idx) in any_game().prop_flat_map(|g| {
            let count = g.profile_count();
            (Just(g), prop::collection::vec(0..count, 1..=6))
        })
    ) {
        let a = AppendixAssignment::from_indices(&g, &idx).unwrap();
        prop_assert_eq!(a.r(), idx.len());
        prop_assert!(a.identity_holds(&g));
        for s in 1..=a.r() {
            let t = vec![s; g.players()];
            prop_assert!(a.kappa(&t) < a.r());
        }
    }

    #[test]
    fn decomposition_recombines_exactly(
        (g, idx) in any_game().prop_flat_map(|g| {
            let count = g.profile_count();
            (Just(g), prop::collection::vec(0..count, 1..=4))
        })
    ) {
        let r = int(idx.len() as i64);
        let u: Vec<Q> = (0..g.players())
            .map(|i| idx.iter().map(|&x| g.payoff(x)[i].clone()).fold(Q::zero(), |a, b| a + b) / &r)
            .collect();
        let d = rational_decomposition(&g, &u).unwrap();
        prop_assert!(d.len() <= g.players() + 1);
        let total: Q = d.iter().map(|x| x.1.clone()).fold(Q::zero(), |a, b| a + b);
        prop_assert!(total.is_one());
        for i in 0..g.players() {
            let back: Q = d.iter().map(|(a, w)| w * &g.payoff_of(a)[i]).fold(Q::zero(), |a, b| a + b);
            prop_assert_eq!(&back, &u[i]);
        }
    }
}

fn bimatrix_2x2() -> impl Strategy<Value = Game> {
    game_of(vec![2, 2])
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn exact_noncooperative_frontier_agrees_with_grid(g in bimatrix_2x2(), x in 0usize..4) {
        let budget = Budget::default();
        let a = g.decode(x);
        let v = g.payoff(x).to_vec();
        let r = geometry::pareto_noncoop(&g, &v, &MixedProfile::pure(g.shape(), &a), &budget).unwrap();
        prop_assert_ne!(r.status, Tri::Unknown);
        if let Some(w) = &r.dominator_payoff {
            prop_assert!(geometry::dominates(w, &v));
            prop_assert_eq!(w, &expected_payoff(&g, r.dominator.as_ref().unwrap()).unwrap());
        }
        // any grid profile that dominates refutes membership
        let n = 16;
        for p in 0..=n {
            for q in 0..=n {
                let prof = MixedProfile::new(vec![
                    MixedStrategy::binary(frac(p, n)).unwrap(),
                    MixedStrategy::binary(frac(q, n)).unwrap(),
                ]);
                let w = expected_payoff(&g, &prof).unwrap();
                if geometry::dominates(&w, &v) {
                    prop_assert_eq!(r.status, Tri::False);
                }
            }
        }
    }

    #[test]
    fn witnesses_verify_and_stay_close_to_the_base(
        a in small_q(), b in small_q(), c in small_q(), d in small_q(), e in 1i64..=50,
    ) {
        let budget = Budget::default();
        let k = classify_2x2(a, b, c, d).unwrap();
        for r in 1..=2 {
            if let Some(w) = refute_single(&k.canonical, r, &budget).unwrap() {
                prop_assert!(verify_single(&w.state).is_ok());
                let eps = frac(1, 2 * e);
                let tv = total_variation(&w.state.aggregate_at(&eps), &w.state.base().aggregate_outcome());
                prop_assert!(tv <= int(2) * w.state.total_share().eval(&eps));
            }
        }
    }
}

fn symmetric_3x3() -> impl Strategy<Value = Game> {
    prop::collection::vec(prop::collection::vec(small_q(), 3), 3).prop_map(|m| Game::symmetric(&m).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(50))]

    #[test]
    fn single_population_witnesses_verify(g in symmetric_3x3(), a in 0usize..3, r in 1u32..=3) {
        let t = make_dominant_type("d", g.shape(), 0, a).unwrap();
        let cfg = Configuration::monomorphic(g, t, MixedStrategy::pure(3, a)).unwrap();
        let v = check_stability_single(&cfg, Order::Finite(r), &Budget::default()).unwrap();
        if let Some(Witness::Single(w)) = v.witness() {
            prop_assert!(w.order() <= r);
            prop_assert!(verify_single(&w.state).is_ok());
            let up = extend_single(w, w.order() + 1).unwrap();
            prop_assert!(verify_single(&up.state).is_ok());
        }
    }

    #[test]
    fn multi_population_witnesses_verify(g in game_of(vec![3, 3]), a in 0usize..3, b in 0usize..3, r in 1u32..=2) {
        let star = [a, b];
        let types = (0..2).map(|i| make_dominant_type(format!("d{i}"), g.shape(), i, star[i]).unwrap()).collect();
        let cfg = MultiConfiguration::monomorphic(g.clone(), types, pure_profile(&g, &star)).unwrap();
        let v = check_stability_multi(&cfg, Order::Finite(r), &Budget::default()).unwrap();
        if let Some(Witness::Multi(w)) = v.witness() {
            prop_assert!(w.order() <= r);
            prop_assert!(verify_multi(&w.state).is_ok());
        }
    }
}
