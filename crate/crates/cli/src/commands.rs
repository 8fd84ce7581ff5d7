use esp_core::game::{Game, MixedProfile, MixedStrategy};
use esp_core::geometry::{self, pure_frontier, Tri};
use esp_core::multi::{check_stability_multi, is_strictly_strong_nash, pure_profile, refute_multi, weakly_dominates_all};
use esp_core::preference::{PreferenceType, SubjectiveGame};
use esp_core::rational::{show, show_vec};
use esp_core::single::{check_stability_single, classify_2x2, refute_single};
use esp_core::verdict::{Certificate, Order, StabilityVerdict, Verdict, Witness};
use esp_core::witness::{Difference, Evidence, MultiWitness, SingleWitness};
use esp_core::{Budget, Q, ShareFamily, SharePolynomial, Sign};
use num_traits::ToPrimitive;

use crate::error::{CliError, CliResult};
use crate::input::Loaded;
use crate::report::Node;

/// Body, summary line and exit code of a successful run.
pub struct Outcome {
    pub body: Node,
    pub summary: Option<String>,
    pub status: &'static str,
    pub exit: i32,
}

impl Outcome {
    fn done(body: Node, summary: impl Into<Option<String>>) -> Self {
        Outcome {
            body,
            summary: summary.into(),
            status: "done",
            exit: 0,
        }
    }

    fn unknown(body: Node, summary: impl Into<Option<String>>) -> Self {
        Outcome {
            body,
            summary: summary.into(),
            status: "unknown",
            exit: 4,
        }
    }
}

fn strategy(s: &MixedStrategy) -> String {
    show_vec(s.weights())
}

fn profile_text(p: &MixedProfile) -> String {
    let parts: Vec<String> = p.strategies().iter().map(strategy).collect();
    format!("({})", parts.join(","))
}

fn sign_text(s: Sign) -> &'static str {
    match s {
        Sign::Positive => "positive",
        Sign::Zero => "zero",
        Sign::Negative => "negative",
    }
}

fn tri(t: Tri) -> Node {
    Node::Text(t.as_str().to_string())
}

fn points(vs: &[Vec<Q>]) -> Node {
    vs.iter().map(|v| show_vec(v)).collect::<Vec<_>>().into()
}

/// Material-payoff types, one per seat.
fn material_game(game: &Game) -> CliResult<SubjectiveGame> {
    let types = (0..game.players())
        .map(|i| {
            let u = game.payoffs().iter().map(|p| p[i].clone()).collect();
            PreferenceType::general(format!("material{}", i + 1), game.shape(), i, u)
        })
        .collect::<esp_core::Result<Vec<_>>>()?;
    let refs: Vec<&PreferenceType> = types.iter().collect();
    Ok(SubjectiveGame::new(&refs)?)
}

fn is_strict_nash(game: &Game, a: &[usize]) -> bool {
    let base = game.payoff_of(a);
    (0..game.players()).all(|i| {
        (0..game.shape()[i]).filter(|&b| b != a[i]).all(|b| {
            let mut d = a.to_vec();
            d[i] = b;
            game.payoff_of(&d)[i] < base[i]
        })
    })
}

pub fn analyze(game: &Game, budget: &Budget) -> CliResult<Outcome> {
    let material = material_game(game)?;
    let mut rows = Vec::new();
    let mut nash = Vec::new();
    for x in 0..game.profile_count() {
        let a = game.decode(x);
        let p = pure_profile(game, &a);
        let v = game.payoff(x).to_vec();
        let is_nash = material.is_equilibrium(&p)?;
        if is_nash {
            nash.push(game.profile_name(&a));
        }
        let strong = is_strictly_strong_nash(game, &a, budget)?;
        let noncoop = geometry::pareto_noncoop(game, &v, &p, budget)?;
        let (dominates_all, _) = weakly_dominates_all(game, &a)?;
        let mut row = Node::map()
            .with("profile", game.profile_name(&a))
            .with("payoff", show_vec(&v))
            .with("nash", is_nash)
            .with("strict_nash", is_nash && is_strict_nash(game, &a))
            .with("strictly_strong_nash", tri(strong.status));
        if let Some((j, dev)) = &strong.deviation {
            let coalition: Vec<String> = j.iter().map(|i| (i + 1).to_string()).collect();
            row.set(
                "strong_deviation",
                Node::map()
                    .with("coalition", coalition.join(","))
                    .with("profile", profile_text(dev))
                    .with("payoff", strong.payoffs.as_deref().map(show_vec).unwrap_or_default()),
            );
        }
        row.set("noncooperative_frontier", tri(noncoop.status))
            .set("noncooperative_method", noncoop.method.as_str())
            .set("cooperative_frontier", geometry::pareto_coop(game, &v)?)
            .set("dominates_all", dominates_all);
        rows.push(row);
    }
    let body = Node::map()
        .with("players", game.players())
        .with("actions", game.action_names().iter().map(|a| a.join(" ")).collect::<Vec<_>>())
        .with("profiles", rows);
    let summary = format!("pure Nash equilibria: {}", if nash.is_empty() { "none".into() } else { nash.join(", ") });
    Ok(Outcome::done(body, summary))
}

pub fn frontier(game: &Game, budget: &Budget) -> CliResult<Outcome> {
    let f = pure_frontier(game, budget)?;
    let mut rows = Vec::new();
    for ((v, a), (nc, co)) in f.points.iter().zip(f.noncoop.iter().zip(&f.coop)) {
        rows.push(
            Node::map()
                .with("payoff", show_vec(v))
                .with("profile", game.profile_name(a))
                .with("noncooperative_frontier", tri(*nc))
                .with("cooperative_frontier", *co),
        );
    }
    let nc = f.noncoop_points();
    let co = f.coop_points();
    let body = Node::map()
        .with("cooperative_vertices", points(&geometry::coop_vertices(game)))
        .with("cooperative_frontier_vertices", points(&geometry::coop_frontier_vertices(game)))
        .with("pure_points", rows)
        .with("noncooperative_frontier_pure", points(&nc))
        .with("cooperative_frontier_in_noncooperative_pure", points(&co));
    let list = |vs: &[Vec<Q>]| vs.iter().map(|v| show_vec(v)).collect::<Vec<_>>().join(",");
    let summary = format!("P(S_nc)={{{}}}, P(S_co)∩S_nc={{{}}}", list(&nc), list(&co));
    if f.noncoop.contains(&Tri::Unknown) {
        return Ok(Outcome::unknown(body, summary));
    }
    Ok(Outcome::done(body, summary))
}

fn certificate(c: &Certificate) -> Node {
    Node::map()
        .with("theorem", c.theorem.name())
        .with("order", c.order.to_string())
        .with("premises", c.premises.clone())
}

fn difference(d: &Difference) -> Node {
    Node::map()
        .with("population", d.population + 1)
        .with("mutant", d.mutant.as_str())
        .with("incumbent", d.incumbent.as_str())
        .with("polynomial", d.polynomial.to_string())
        .with("sign", sign_text(d.sign()))
}

fn evidence(e: &Evidence) -> Node {
    let fitness: Vec<Node> = e
        .fitness
        .iter()
        .map(|(i, id, p)| {
            Node::map()
                .with("population", i + 1)
                .with("type", id.as_str())
                .with("fitness", p.to_string())
        })
        .collect();
    Node::map()
        .with("fitness", fitness)
        .with("differences", e.differences.iter().map(difference).collect::<Vec<_>>())
        .with("separating", difference(&e.separating))
}

fn witness_summary(w: &Witness) -> Node {
    let e = match w {
        Witness::Single(s) => &s.evidence,
        Witness::Multi(m) => &m.evidence,
    };
    Node::map()
        .with("construction", w.construction())
        .with("order", w.order())
        .with("differences", e.differences.iter().map(difference).collect::<Vec<_>>())
}

fn verdict_outcome(v: &StabilityVerdict, at: &str) -> Outcome {
    let screens: Vec<Node> = v
        .screens
        .iter()
        .map(|s| Node::map().with("name", s.name).with("passed", s.passed))
        .collect();
    let mut body = Node::map()
        .with("requested_order", v.requested.to_string())
        .with("verdict", v.kind())
        .with("screens", screens);
    match &v.verdict {
        Verdict::Stable(c) => {
            body.set("certificate", certificate(c));
        }
        Verdict::Unstable(w) => {
            body.set("witness", witness_summary(w));
        }
        Verdict::Unknown => {}
    }
    body.set("notes", v.notes.clone());
    let summary = match &v.verdict {
        Verdict::Stable(c) => format!("stable of order {} at {at} ({})", v.requested, c.theorem.name()),
        Verdict::Unstable(w) => format!("not stable of order {} at {at} (witness of order {})", v.requested, w.order()),
        Verdict::Unknown => format!("undecided at order {} for {at}", v.requested),
    };
    match v.verdict {
        Verdict::Unknown => Outcome::unknown(body, summary),
        _ => Outcome::done(body, summary),
    }
}

pub fn certify(config: &Loaded, order: Order, budget: &Budget) -> CliResult<Outcome> {
    match config {
        Loaded::Single(c) => {
            let at = profile_text(&c.profile(0, 0));
            let label = if c.len() == 1 { at } else { format!("{} types", c.len()) };
            Ok(verdict_outcome(&check_stability_single(c, order, budget)?, &label))
        }
        Loaded::Multi(c) => {
            let label = profile_text(&c.plays()[0]);
            Ok(verdict_outcome(&check_stability_multi(c, order, budget)?, &label))
        }
    }
}

fn utility_table(game: &Game, t: &PreferenceType) -> Node {
    let rows: Vec<Node> = t
        .utility()
        .iter()
        .enumerate()
        .map(|(x, u)| Node::map().with("profile", game.profile_name(&game.decode(x))).with("utility", show(u)))
        .collect();
    Node::map()
        .with("id", t.id())
        .with("population", t.seat() + 1)
        .with("utility", rows)
}

fn family(f: &ShareFamily) -> Node {
    let shares: Vec<String> = (0..f.len()).map(|s| f.share(s).to_string()).collect();
    Node::map()
        .with("multipliers", f.multipliers().iter().map(show).collect::<Vec<_>>())
        .with("shares", shares)
        .with("total", f.total().to_string())
}

fn single_document(w: &SingleWitness) -> Node {
    let s = &w.state;
    let game = s.base().game();
    let mut table = Vec::new();
    for i in 0..s.len() {
        for j in 0..s.len() {
            table.push(
                Node::map()
                    .with("row", s.id(i))
                    .with("column", s.id(j))
                    .with("strategy", strategy(s.play(i, j))),
            );
        }
    }
    Node::map()
        .with("construction", w.construction.as_str())
        .with("order", w.order())
        .with(
            "mutants",
            s.plan().mutants().iter().map(|t| utility_table(game, t)).collect::<Vec<_>>(),
        )
        .with("share_family", family(s.plan().family()))
        .with("play", table)
        .with("evidence", evidence(&w.evidence))
}

fn multi_document(w: &MultiWitness) -> Node {
    let s = &w.state;
    let game = s.base().game();
    let mutants: Vec<Node> = (0..s.populations())
        .flat_map(|i| s.plan().mutants(i).iter().map(|t| utility_table(game, t)))
        .collect();
    let families: Vec<Node> = (0..s.populations())
        .map(|i| family(s.plan().family(i)).with("population", i + 1))
        .collect();
    let table: Vec<Node> = (0..s.tuple_count())
        .map(|x| {
            let t = s.tuple(x);
            Node::map().with("types", s.tuple_name(&t)).with("profile", profile_text(s.play(&t)))
        })
        .collect();
    Node::map()
        .with("construction", w.construction.as_str())
        .with("order", w.order())
        .with("mutants", mutants)
        .with("share_families", families)
        .with("play", table)
        .with("evidence", evidence(&w.evidence))
}

pub enum Found {
    Single(SingleWitness),
    Multi(MultiWitness),
}

impl Found {
    fn evidence(&self) -> &Evidence {
        match self {
            Found::Single(w) => &w.evidence,
            Found::Multi(w) => &w.evidence,
        }
    }
}

fn search(config: &Loaded, order: Order, budget: &Budget) -> CliResult<Option<Found>> {
    Ok(match config {
        Loaded::Single(c) => {
            let r = order
                .finite()
                .ok_or_else(|| CliError::Input("single-population witnesses need a finite --order".into()))?;
            refute_single(c, r, budget)?.map(Found::Single)
        }
        Loaded::Multi(c) => refute_multi(c, order, budget)?.map(Found::Multi),
    })
}

fn no_witness(order: Order) -> Outcome {
    let body = Node::map().with("requested_order", order.to_string()).with("witness", "none");
    Outcome::unknown(body, format!("no witness found at order {order}"))
}

pub fn invade(config: &Loaded, order: Order, budget: &Budget) -> CliResult<Outcome> {
    let Some(found) = search(config, order, budget)? else {
        return Ok(no_witness(order));
    };
    let doc = match &found {
        Found::Single(w) => single_document(w),
        Found::Multi(w) => multi_document(w),
    };
    let (construction, r) = match &found {
        Found::Single(w) => (w.construction.clone(), w.order()),
        Found::Multi(w) => (w.construction.clone(), w.order()),
    };
    let body = Node::map().with("requested_order", order.to_string()).with("witness", doc);
    Ok(Outcome::done(body, format!("verified witness of order {r} ({construction})")))
}

/// Horner evaluation in floating point.
fn eval_f64(p: &SharePolynomial, eps: f64) -> f64 {
    p.coefficients()
        .iter()
        .rev()
        .fold(0.0, |acc, c| acc * eps + c.to_f64().unwrap_or(f64::NAN))
}

fn float_sign(x: f64) -> Sign {
    if x > 0.0 {
        Sign::Positive
    } else if x < 0.0 {
        Sign::Negative
    } else {
        Sign::Zero
    }
}

pub fn oracle(config: &Loaded, order: Order, eps: &Q, budget: &Budget) -> CliResult<Outcome> {
    let Some(found) = search(config, order, budget)? else {
        return Ok(no_witness(order));
    };
    let e = eps.to_f64().ok_or_else(|| CliError::Input(format!("--eps {eps} has no floating value")))?;
    let ev = found.evidence();
    let mut agree_all = true;
    let mut check = |d: &Difference| {
        let x = eval_f64(&d.polynomial, e);
        let agree = float_sign(x) == d.sign();
        agree_all &= agree;
        difference(d).with("numeric", format!("{x:e}")).with("agree", agree)
    };
    let rows: Vec<Node> = ev.differences.iter().map(&mut check).collect();
    let separating = check(&ev.separating);
    let body = Node::map()
        .with("eps", show(eps))
        .with("eps_float", format!("{e:e}"))
        .with("differences", rows)
        .with("separating", separating)
        .with("sign_agreement", agree_all);
    let summary = if agree_all {
        format!("floating signs agree with the exact signs at eps = {eps}")
    } else {
        format!("floating signs disagree with the exact signs at eps = {eps}")
    };
    Ok(Outcome::done(body, summary))
}

pub fn classify2x2(payoffs: &[Q; 4]) -> CliResult<Outcome> {
    let [a, b, c, d] = payoffs.clone();
    let k = classify_2x2(a, b, c, d)?;
    let star = &k.efficient.strategy;
    let at = format!("({},{})", strategy(star), strategy(star));
    let body = Node::map()
        .with("payoffs", show_vec(&k.payoffs))
        .with("relabelled", k.swapped)
        .with("efficient_strategy", strategy(star))
        .with("efficient_value", show(&k.efficient.value))
        .with("unique_maximizer", k.efficient.certified_unique)
        .with("branch", k.branch.as_str())
        .with("max_order", k.max_order.as_str());
    let summary = format!("stable order {} at {at}", k.max_order.as_str());
    Ok(Outcome::done(body, summary))
}
