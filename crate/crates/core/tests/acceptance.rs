//! Acceptance harness: one PASS/FAIL line per criterion, nonzero exit on
//! any failure.

use std::process::ExitCode;

use esp_core::game::{Game, MixedStrategy};
use esp_core::geometry::{self, closed_form_2x2, pure_frontier, Tri};
use esp_core::invade::{appendix_invader, AppendixAssignment};
use esp_core::multi::{
    check_stability_multi, is_strictly_strong_nash, pure_profile, weakly_dominates_all, MultiConfiguration,
    MultiMutationPlan, MultiPostEntryState,
};
use esp_core::preference::{make_coordination_type, make_dominant_type, make_indifferent_type};
use esp_core::rational::{frac, int, show_vec};
use esp_core::single::{
    check_stability_single, classify_2x2, refute_single, total_variation, Configuration, MaxOrder,
};
use esp_core::verdict::{Order, Theorem, Verdict, Witness};
use esp_core::witness::{extend_multi, extend_single, MultiWitness, SingleWitness};
use esp_core::{Budget, Error, Sign, SharePolynomial, Q};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Check = Result<(), String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Check {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn eps() -> SharePolynomial {
    SharePolynomial::eps()
}

fn poly(c: &[i64]) -> SharePolynomial {
    SharePolynomial::new(c.iter().map(|&x| int(x)).collect())
}

fn anti_coordination() -> Game {
    Game::symmetric_2x2(int(0), int(2), int(2), int(0))
}

fn game_g() -> Game {
    let m: Vec<Vec<Q>> = [[3, 0, 0], [0, 0, 9], [0, 2, 0]]
        .iter()
        .map(|r| r.iter().map(|&x| int(x)).collect())
        .collect();
    Game::symmetric(&m).unwrap()
}

fn two_population_game() -> Game {
    let rows: [&[i64]; 9] = [&[7, 7], &[0, 0], &[0, 0], &[0, 0], &[9, 6], &[0, 0], &[0, 0], &[0, 0], &[6, 9]];
    Game::from_ints(&[3, 3], &rows).unwrap()
}

fn first_three_player() -> Game {
    let rows: [&[i64]; 8] = [
        &[7, 7, 7],
        &[1, 3, 3],
        &[3, 1, 3],
        &[0, 0, 0],
        &[1, 3, 3],
        &[0, 0, 0],
        &[7, 7, 0],
        &[7, 7, 0],
    ];
    Game::from_ints(&[2, 2, 2], &rows).unwrap()
}

fn second_three_player() -> Game {
    let rows: [&[i64]; 8] = [
        &[7, 7, 7],
        &[0, 9, 6],
        &[9, 6, 0],
        &[9, 6, 0],
        &[6, 0, 9],
        &[0, 9, 6],
        &[6, 0, 9],
        &[1, 1, 1],
    ];
    Game::from_ints(&[2, 2, 2], &rows).unwrap()
}

fn dominant_config(game: &Game, star: &[usize]) -> MultiConfiguration {
    let types = (0..game.players())
        .map(|i| make_dominant_type(format!("d{}", i + 1), game.shape(), i, star[i]).unwrap())
        .collect();
    MultiConfiguration::monomorphic(game.clone(), types, pure_profile(game, star)).unwrap()
}

/// One indifferent mutant per population; `rule(mask)` gives the pure play
/// when the populations in `mask` field their mutant.
fn pattern_state(config: &MultiConfiguration, rule: &dyn Fn(usize) -> Vec<usize>) -> MultiPostEntryState {
    let game = config.game();
    let n = game.players();
    let mutants = (0..n)
        .map(|i| vec![make_indifferent_type(format!("m{}", i + 1), game.shape(), i).unwrap()])
        .collect();
    let plan = MultiMutationPlan::equal(mutants).unwrap();
    let inc = config.counts();
    MultiPostEntryState::build(config.clone(), plan, &mut |t| {
        let mask: usize = (0..n).filter(|&i| t[i] >= inc[i]).map(|i| 1 << i).sum();
        pure_profile(game, &rule(mask))
    })
    .unwrap()
}

fn random_q(rng: &mut ChaCha8Rng, lo: i64, hi: i64) -> Q {
    let d = rng.gen_range(1..=6);
    frac(rng.gen_range(lo * d..=hi * d), d)
}

#[derive(Default)]
struct Collected {
    single: Vec<(String, SingleWitness)>,
    multi: Vec<(String, MultiWitness)>,
}

fn criterion_1(out: &mut Collected) -> Check {
    let game = anti_coordination();
    let t = make_coordination_type("coord", 2).map_err(|e| e.to_string())?;
    let config = Configuration::monomorphic(game, t, MixedStrategy::uniform(2)).map_err(|e| e.to_string())?;
    let budget = Budget::default();
    let v1 = check_stability_single(&config, Order::Finite(1), &budget).map_err(|e| e.to_string())?;
    match &v1.verdict {
        Verdict::Stable(c) if c.theorem == Theorem::MixedSupporter => {}
        other => return Err(format!("order 1: expected mixed-supporter certificate, got {other:?}")),
    }
    let class = classify_2x2(int(0), int(2), int(2), int(0)).map_err(|e| e.to_string())?;
    ensure(class.max_order == MaxOrder::ExactlyOne, || "classification is not exactly 1".into())?;
    let v2 = check_stability_single(&config, Order::Finite(2), &budget).map_err(|e| e.to_string())?;
    let Some(Witness::Single(w)) = v2.witness() else {
        return Err(format!("order 2: expected witness, got {}", v2.kind()));
    };
    ensure(w.order() == 2, || format!("witness order {}", w.order()))?;
    ensure(w.evidence.differences.len() == 2, || "expected two mutant differences".into())?;
    for d in &w.evidence.differences {
        ensure(d.polynomial == eps(), || format!("difference {} is not ε", d.polynomial))?;
    }
    ensure(w.state.fitness(0) == poly(&[1]), || "incumbent fitness is not 1".into())?;
    out.single.push(("anti-coordination order 2".into(), w.clone()));
    Ok(())
}

fn criterion_2() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut done = 0;
    while done < 200 {
        let (a, b, c, d) = (
            random_q(&mut rng, -10, 10),
            random_q(&mut rng, -10, 10),
            random_q(&mut rng, -10, 10),
            random_q(&mut rng, -10, 10),
        );
        // interior efficient strategy: 2A < B + C and 2D < B + C
        if &a + &a >= &b + &c || &d + &d >= &b + &c {
            continue;
        }
        done += 1;
        let (sigma, value) = closed_form_2x2(&a, &b, &c, &d);
        let expected = (&b + &c - &d - &d) / (int(2) * (&b + &c - &a - &d));
        ensure(sigma.prob(0) == &expected, || {
            format!("σ*(a1) = {} but formula gives {}", sigma.prob(0), expected)
        })?;
        let general = geometry::efficient_strategy(&Game::symmetric_2x2(a.clone(), b.clone(), c.clone(), d.clone()))
            .map_err(|e| e.to_string())?;
        ensure(general.value == value && general.strategy == sigma, || {
            format!("face enumeration gives {} at {:?}, closed form {value}", general.value, general.strategy)
        })?;
        let mut best: Option<Q> = None;
        for k in 0..=1000 {
            let p = frac(k, 1000);
            let q = int(1) - &p;
            let f = &p * &p * &a + &p * &q * (&b + &c) + &q * &q * &d;
            if best.as_ref().is_none_or(|x| f > *x) {
                best = Some(f);
            }
        }
        let best = best.unwrap();
        ensure(best <= value && &value - &best <= frac(1, 500), || {
            format!("grid maximum {best} vs closed form {value} for A={a} B={b} C={c} D={d}")
        })?;
    }
    Ok(())
}

fn criterion_3() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let budget = Budget::default();
    for g in 0..50 {
        let a = random_q(&mut rng, -5, 5);
        let b = random_q(&mut rng, -5, 5);
        let c = if g % 3 == 0 { b.clone() } else { random_q(&mut rng, -5, 5) };
        let d = random_q(&mut rng, -5, 5);
        let label = format!("A={a} B={b} C={c} D={d}");
        let class = classify_2x2(a, b, c, d).map_err(|e| format!("{label}: {e}"))?;
        let cfg = &class.canonical;
        let witness_at = |r: u32| refute_single(cfg, r, &budget).map_err(|e| format!("{label}: {e}"));
        match class.max_order {
            MaxOrder::Infinite => {
                for r in 1..=3 {
                    ensure(witness_at(r)?.is_none(), || format!("{label}: witness at order {r} despite ∞"))?;
                }
                let v = check_stability_single(cfg, Order::Infinite, &budget).map_err(|e| e.to_string())?;
                ensure(v.is_stable(), || format!("{label}: ∞ classification not certified ({})", v.kind()))?;
            }
            MaxOrder::ExactlyOne => {
                ensure(witness_at(1)?.is_none(), || format!("{label}: witness at order 1"))?;
                ensure(witness_at(2)?.is_some(), || format!("{label}: no witness at order 2"))?;
            }
            MaxOrder::None => {
                ensure(witness_at(2)?.is_some(), || format!("{label}: no witness at order ≤ 2"))?;
            }
        }
    }
    Ok(())
}

fn criterion_4(out: &mut Collected) -> Check {
    let game = game_g();
    let t = make_dominant_type("dominant", &[3, 3], 0, 0).map_err(|e| e.to_string())?;
    let cfg = Configuration::monomorphic(game, t, MixedStrategy::pure(3, 0)).map_err(|e| e.to_string())?;
    let budget = Budget::default();
    let v2 = check_stability_single(&cfg, Order::Finite(2), &budget).map_err(|e| e.to_string())?;
    match &v2.verdict {
        Verdict::Stable(c) if c.theorem == Theorem::StrictNashNoncooperative => {}
        other => return Err(format!("order 2: {other:?}")),
    }
    let v3 = check_stability_single(&cfg, Order::Finite(3), &budget).map_err(|e| e.to_string())?;
    let Some(Witness::Single(w)) = v3.witness() else {
        return Err(format!("order 3: expected witness, got {}", v3.kind()));
    };
    ensure(w.construction == "cooperative-cycle", || format!("construction {}", w.construction))?;
    for d in &w.evidence.differences {
        ensure(d.polynomial == poly(&[0, 5]), || format!("difference {} is not 5ε", d.polynomial))?;
    }
    out.single.push(("game G order 3".into(), w.clone()));
    Ok(())
}

fn criterion_5(out: &mut Collected) -> Check {
    let game = two_population_game();
    let budget = Budget::default();
    let f = pure_frontier(&game, &budget).map_err(|e| e.to_string())?;
    let pts = |xs: &[[i64; 2]]| -> Vec<Vec<Q>> { xs.iter().map(|p| vec![int(p[0]), int(p[1])]).collect() };
    ensure(f.noncoop_points() == pts(&[[7, 7], [9, 6], [6, 9]]), || {
        format!("P(S_nc) = {:?}", f.noncoop_points().iter().map(|v| show_vec(v)).collect::<Vec<_>>())
    })?;
    ensure(f.coop_points() == pts(&[[9, 6], [6, 9]]), || {
        format!("P(S_co) ∩ S_nc = {:?}", f.coop_points().iter().map(|v| show_vec(v)).collect::<Vec<_>>())
    })?;
    let cfg = dominant_config(&game, &[0, 0]);
    let v1 = check_stability_multi(&cfg, Order::Finite(1), &budget).map_err(|e| e.to_string())?;
    ensure(v1.is_stable(), || format!("(a11,a21) at order 1: {}", v1.kind()))?;
    let v2 = check_stability_multi(&cfg, Order::Finite(2), &budget).map_err(|e| e.to_string())?;
    let Some(Witness::Multi(w)) = v2.witness() else {
        return Err(format!("(a11,a21) at order 2: {}", v2.kind()));
    };
    for (i, id, p) in &w.evidence.fitness {
        let mutant = w.state.index_of(*i, id).map(|k| w.state.is_mutant(*i, k)).unwrap_or(false);
        let want = if mutant { poly(&[7, 1]) } else { poly(&[7]) };
        ensure(*p == want, || format!("fitness of {id} is {p}, expected {want}"))?;
    }
    out.multi.push(("two-population order 2".into(), w.clone()));
    for star in [[1, 1], [2, 2]] {
        let cfg = dominant_config(&game, &star);
        let v = check_stability_multi(&cfg, Order::Infinite, &budget).map_err(|e| e.to_string())?;
        ensure(v.certificate().map(|c| c.order) == Some(Order::Infinite), || {
            format!("{:?} not certified infinitely stable: {}", star, v.kind())
        })?;
    }
    Ok(())
}

fn criterion_6(out: &mut Collected) -> Check {
    let game = first_three_player();
    let cfg = dominant_config(&game, &[0, 0, 0]);
    let state = pattern_state(&cfg, &|mask| if mask == 0b011 { vec![1, 1, 0] } else { vec![0, 0, 0] });
    let w = MultiWitness::new(state, "hand-built pattern").map_err(|r| r.to_string())?;
    for d in &w.evidence.differences {
        let ok = match d.population {
            0 | 1 => d.polynomial.is_zero(),
            _ => d.sign() == Sign::Positive,
        };
        ensure(ok, || format!("population {} difference {}", d.population + 1, d.polynomial))?;
    }
    ensure(w.evidence.differences.len() == 3, || "expected three differences".into())?;
    out.multi.push(("first three-player pattern".into(), w));
    let s = is_strictly_strong_nash(&game, &[0, 0, 0], &Budget::default()).map_err(|e| e.to_string())?;
    ensure(s.status == Tri::False, || format!("strictly strong status {}", s.status.as_str()))?;
    let (j, dev) = s.deviation.clone().ok_or("no deviation reported")?;
    ensure(j == vec![0, 1] && dev.as_pure() == Some(vec![1, 1, 0]), || format!("deviation {j:?} {dev:?}"))?;
    ensure(s.payoffs == Some(vec![int(7), int(7), int(0)]), || "deviation payoff is not (7,7,0)".into())?;
    let (wda, _) = weakly_dominates_all(&game, &[0, 0, 0]).map_err(|e| e.to_string())?;
    ensure(wda, || "weak dominance of all fails".into())?;
    let v = check_stability_multi(&cfg, Order::Finite(1), &Budget::default()).map_err(|e| e.to_string())?;
    ensure(v.is_unstable(), || format!("engine verdict {}", v.kind()))?;
    Ok(())
}

fn criterion_7(out: &mut Collected) -> Check {
    let game = second_three_player();
    let cfg = dominant_config(&game, &[0, 0, 0]);
    let state = pattern_state(&cfg, &|mask| match mask {
        0b011 => vec![0, 1, 0],
        0b101 => vec![1, 0, 0],
        0b110 => vec![0, 0, 1],
        _ => vec![0, 0, 0],
    });
    let w = MultiWitness::new(state, "hand-built pattern").map_err(|r| r.to_string())?;
    ensure(w.evidence.differences.len() == 3, || "expected three differences".into())?;
    for d in &w.evidence.differences {
        ensure(d.polynomial == poly(&[0, 1, 6]), || {
            format!("population {} difference {}", d.population + 1, d.polynomial)
        })?;
    }
    out.multi.push(("second three-player pattern".into(), w));
    let s = is_strictly_strong_nash(&game, &[0, 0, 0], &Budget::default()).map_err(|e| e.to_string())?;
    ensure(s.status == Tri::True, || format!("strictly strong status {}", s.status.as_str()))?;
    let (wda, at) = weakly_dominates_all(&game, &[0, 0, 0]).map_err(|e| e.to_string())?;
    let at = at.ok_or("no dominance counterexample")?;
    ensure(!wda && game.payoff_of(&at) == [int(9), int(6), int(0)], || {
        format!("counterexample {}", show_vec(game.payoff_of(&at)))
    })?;
    let v = check_stability_multi(&cfg, Order::Finite(1), &Budget::default()).map_err(|e| e.to_string())?;
    ensure(v.is_unstable(), || format!("engine verdict {}", v.kind()))?;
    Ok(())
}

fn criterion_8() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for case in 0..50 {
        let n = rng.gen_range(2..=3);
        let shape: Vec<usize> = (0..n).map(|_| rng.gen_range(2..=3)).collect();
        let count: usize = shape.iter().product();
        let payoffs: Vec<Vec<Q>> = (0..count).map(|_| (0..n).map(|_| random_q(&mut rng, -6, 6)).collect()).collect();
        let game = Game::from_shape(&shape, payoffs).map_err(|e| e.to_string())?;
        let r = rng.gen_range(1..=6);
        let idx: Vec<usize> = (0..r).map(|_| rng.gen_range(0..count)).collect();
        let multiset = AppendixAssignment::from_indices(&game, &idx).map_err(|e| e.to_string())?;
        ensure(multiset.r() == r, || format!("case {case}: r = {}", multiset.r()))?;
        ensure(multiset.identity_holds(&game), || format!("case {case}: identity fails for {idx:?}"))?;
        let u = multiset.u().to_vec();
        match appendix_invader(&game, &u) {
            Ok(a) => ensure(a.u() == u.as_slice() && a.identity_holds(&game), || format!("case {case}: invader identity"))?,
            Err(Error::Unsupported(_)) => {}
            Err(e) => return Err(format!("case {case}: {e}")),
        }
    }
    Ok(())
}

fn criterion_9(out: &Collected) -> Check {
    ensure(out.single.len() + out.multi.len() >= 5, || "witnesses from earlier criteria are missing".into())?;
    for (name, w) in &out.single {
        for extra in 1..=2 {
            let e = extend_single(w, w.order() + extra).map_err(|e| format!("{name}: {e}"))?;
            ensure(e.order() == w.order() + extra, || format!("{name}: order {}", e.order()))?;
        }
    }
    for (name, w) in &out.multi {
        for extra in 1..=2 {
            let e = extend_multi(w, w.order() + extra).map_err(|e| format!("{name}: {e}"))?;
            ensure(e.order() == w.order() + extra, || format!("{name}: order {}", e.order()))?;
        }
    }
    Ok(())
}

fn criterion_10(out: &Collected) -> Check {
    for e in [frac(1, 10), frac(1, 100)] {
        for (name, w) in &out.single {
            let tv = total_variation(&w.state.aggregate_at(&e), &w.state.base().aggregate_outcome());
            let bound = int(2) * w.state.total_share().eval(&e);
            ensure(tv <= bound, || format!("{name}: TV {tv} > {bound} at ε = {e}"))?;
        }
        for (name, w) in &out.multi {
            let tv = total_variation(&w.state.aggregate_at(&e), &w.state.base().aggregate_outcome());
            let bound = int(2) * w.state.total_share().eval(&e);
            ensure(tv <= bound, || format!("{name}: TV {tv} > {bound} at ε = {e}"))?;
        }
    }
    Ok(())
}

fn report(failed: &mut bool, k: u32, what: &str, r: Check) {
    match r {
        Ok(()) => println!("PASS criterion {k}: {what}"),
        Err(e) => {
            *failed = true;
            println!("FAIL criterion {k}: {what}: {e}");
        }
    }
}

fn main() -> ExitCode {
    let mut c = Collected::default();
    let mut failed = false;
    let f = &mut failed;
    report(f, 1, "anti-coordination: stable at 1, order-2 witness with ε surplus", criterion_1(&mut c));
    report(f, 2, "2x2 closed-form efficient strategy against a 1/1000 grid", criterion_2());
    report(f, 3, "2x2 classification agrees with the witness engine", criterion_3());
    report(f, 4, "game G: stable at 2, cyclic order-3 witness with 5ε surplus", criterion_4(&mut c));
    report(f, 5, "two-population 3x3 game: frontiers, order 1 vs 2, infinite stability", criterion_5(&mut c));
    report(f, 6, "first three-player game: correlated witness, strong Nash false", criterion_6(&mut c));
    report(f, 7, "second three-player game: ε + 6ε² witness, strong Nash true", criterion_7(&mut c));
    report(f, 8, "κ assignment identity on random rational points", criterion_8());
    report(f, 9, "duplication extends every witness by one and two orders", criterion_9(&c));
    report(f, 10, "post-entry aggregate within 2‖E‖₁ in total variation", criterion_10(&c));
    if failed {
        ExitCode::FAILURE
    } else {
        ExitCode::SUCCESS
    }
}
