//! One population playing a symmetric two-player game.
//!
//! Incumbent types occupy indices `0..k` of every table; mutants follow.
//! `play[i][j]` is `b_{θi}(θj)`, the strategy type `i` uses against type `j`.

use alloc::boxed::Box;
use alloc::format;
use alloc::string::ToString;
use alloc::vec;
use alloc::vec::Vec;

use num_traits::{One, Signed, Zero};

use crate::budget::Budget;
use crate::error::{Error, Result};
use crate::game::{expected_payoff, is_symmetric, CorrelatedStrategy, Game, MixedProfile, MixedStrategy};
use crate::geometry::{self, pareto_coop, pareto_noncoop, EfficientProfile, Tri};
use crate::invade;
use crate::poly::{ShareFamily, SharePolynomial};
use crate::preference::{
    best_response_set, make_dominant_type, make_mixed_supporter, PreferenceType, TypeTag,
};
use crate::rational::{show, Q};
use crate::verdict::{Certificate, Order, Screen, StabilityVerdict, Theorem, Verdict, Witness};
use crate::witness::SingleWitness;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PreferenceDistribution {
    types: Vec<PreferenceType>,
    weights: Vec<Q>,
}

impl PreferenceDistribution {
    pub fn new(types: Vec<PreferenceType>, weights: Vec<Q>) -> Result<Self> {
        if types.is_empty() {
            return Err(Error::Input("a distribution needs at least one type".into()));
        }
        if types.len() != weights.len() {
            return Err(Error::Dimension {
                expected: types.len(),
                found: weights.len(),
            });
        }
        if let Some(w) = weights.iter().find(|w| !w.is_positive()) {
            return Err(Error::Input(format!("type weight {w} is not positive")));
        }
        let total: Q = weights.iter().sum();
        if !total.is_one() {
            return Err(Error::Input(format!("type weights sum to {total}, not 1")));
        }
        for (k, t) in types.iter().enumerate() {
            if types[..k].iter().any(|u| u.id() == t.id()) {
                return Err(Error::Input(format!("duplicate type id `{}`", t.id())));
            }
        }
        Ok(PreferenceDistribution { types, weights })
    }

    /// `δ_θ`.
    pub fn degenerate(t: PreferenceType) -> Self {
        PreferenceDistribution {
            types: vec![t],
            weights: vec![Q::one()],
        }
    }

    pub fn types(&self) -> &[PreferenceType] {
        &self.types
    }

    pub fn weights(&self) -> &[Q] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.types.len()
    }

    pub fn is_empty(&self) -> bool {
        self.types.is_empty()
    }

    pub fn index_of(&self, id: &str) -> Option<usize> {
        self.types.iter().position(|t| t.id() == id)
    }
}

/// Checks that `own` is a best response for `theta` (own-first table)
/// against `opp`.
fn is_best_reply(theta: &PreferenceType, own: &MixedStrategy, opp: &MixedStrategy) -> Result<bool> {
    let prof = MixedProfile::new(vec![own.clone(), opp.clone()]);
    let br = best_response_set(theta, 0, &prof)?;
    Ok(own.support().iter().all(|a| br.contains(a)))
}

fn check_type(game: &Game, t: &PreferenceType) -> Result<()> {
    if t.shape() != game.shape() || t.seat() != 0 {
        return Err(Error::Input(format!(
            "type `{}` does not fit the symmetric game (seat must be 1)",
            t.id()
        )));
    }
    Ok(())
}

fn check_table(game: &Game, len: usize, play: &[Vec<MixedStrategy>]) -> Result<()> {
    let m = game.shape()[0];
    if play.len() != len || play.iter().any(|row| row.len() != len) {
        return Err(Error::Dimension {
            expected: len,
            found: play.len(),
        });
    }
    if let Some(s) = play.iter().flatten().find(|s| s.len() != m) {
        return Err(Error::Dimension {
            expected: m,
            found: s.len(),
        });
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Configuration {
    game: Game,
    distribution: PreferenceDistribution,
    play: Vec<Vec<MixedStrategy>>,
}

impl Configuration {
    pub fn new(game: Game, distribution: PreferenceDistribution, play: Vec<Vec<MixedStrategy>>) -> Result<Self> {
        if !is_symmetric(&game) {
            return Err(Error::Unsupported("the single-population model needs a symmetric two-player game".into()));
        }
        for t in distribution.types() {
            check_type(&game, t)?;
        }
        check_table(&game, distribution.len(), &play)?;
        let types = distribution.types();
        for i in 0..types.len() {
            for j in 0..types.len() {
                if !is_best_reply(&types[i], &play[i][j], &play[j][i])? {
                    return Err(Error::NotEquilibrium(format!(
                        "b_{}({}) = {} is not a best response",
                        types[i].id(),
                        types[j].id(),
                        crate::rational::show_vec(play[i][j].weights())
                    )));
                }
            }
        }
        Ok(Configuration {
            game,
            distribution,
            play,
        })
    }

    pub fn monomorphic(game: Game, t: PreferenceType, s: MixedStrategy) -> Result<Self> {
        Configuration::new(game, PreferenceDistribution::degenerate(t), vec![vec![s]])
    }

    pub fn game(&self) -> &Game {
        &self.game
    }

    pub fn distribution(&self) -> &PreferenceDistribution {
        &self.distribution
    }

    pub fn types(&self) -> &[PreferenceType] {
        self.distribution.types()
    }

    pub fn len(&self) -> usize {
        self.distribution.len()
    }

    pub fn is_empty(&self) -> bool {
        self.distribution.is_empty()
    }

    pub fn play(&self, i: usize, j: usize) -> &MixedStrategy {
        &self.play[i][j]
    }

    pub fn table(&self) -> &[Vec<MixedStrategy>] {
        &self.play
    }

    /// `b(θi, θj)`.
    pub fn profile(&self, i: usize, j: usize) -> MixedProfile {
        MixedProfile::new(vec![self.play[i][j].clone(), self.play[j][i].clone()])
    }

    /// `π(b(θi, θj))`.
    pub fn match_payoffs(&self, i: usize, j: usize) -> Vec<Q> {
        expected_payoff(&self.game, &self.profile(i, j)).expect("validated configuration")
    }

    /// `Π_θi(μ; b)`.
    pub fn fitness(&self, i: usize) -> Q {
        (0..self.len())
            .map(|j| &self.distribution.weights[j] * &self.match_payoffs(i, j)[0])
            .sum()
    }

    pub fn fitness_of(&self, id: &str) -> Result<Q> {
        let i = self
            .distribution
            .index_of(id)
            .ok_or_else(|| Error::UnknownType(id.to_string()))?;
        Ok(self.fitness(i))
    }

    pub fn fitnesses(&self) -> Vec<Q> {
        (0..self.len()).map(|i| self.fitness(i)).collect()
    }

    pub fn is_balanced(&self) -> bool {
        let f = self.fitnesses();
        f.windows(2).all(|w| w[0] == w[1])
    }

    /// `φ_{μ,b}` over row-major `(a, a′)`.
    pub fn aggregate_outcome(&self) -> CorrelatedStrategy {
        let shares: Vec<Q> = self.distribution.weights.clone();
        CorrelatedStrategy::from_raw(aggregate(&self.game, &shares, &self.play))
    }
}

fn aggregate(game: &Game, shares: &[Q], play: &[Vec<MixedStrategy>]) -> Vec<Q> {
    let m = game.shape()[0];
    let mut w = vec![Q::zero(); m * m];
    for (i, si) in shares.iter().enumerate() {
        for (j, sj) in shares.iter().enumerate() {
            let mass = si * sj;
            if mass.is_zero() {
                continue;
            }
            for (a, pa) in play[i][j].weights().iter().enumerate() {
                if pa.is_zero() {
                    continue;
                }
                for (b, pb) in play[j][i].weights().iter().enumerate() {
                    if !pb.is_zero() {
                        w[a * m + b] += &mass * pa * pb;
                    }
                }
            }
        }
    }
    w
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MutationPlan {
    mutants: Vec<PreferenceType>,
    family: ShareFamily,
}

impl MutationPlan {
    pub fn new(mutants: Vec<PreferenceType>, family: ShareFamily) -> Result<Self> {
        if mutants.is_empty() {
            return Err(Error::Input("a mutation set needs at least one mutant".into()));
        }
        if mutants.len() != family.len() {
            return Err(Error::Dimension {
                expected: mutants.len(),
                found: family.len(),
            });
        }
        for (k, t) in mutants.iter().enumerate() {
            if mutants[..k].iter().any(|u| u.id() == t.id()) {
                return Err(Error::Input(format!("duplicate mutant id `{}`", t.id())));
            }
        }
        Ok(MutationPlan { mutants, family })
    }

    pub fn mutants(&self) -> &[PreferenceType] {
        &self.mutants
    }

    pub fn family(&self) -> &ShareFamily {
        &self.family
    }

    /// `r`.
    pub fn order(&self) -> u32 {
        self.mutants.len() as u32
    }
}

/// Post-entry population with a full play table over incumbents and
/// mutants.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PostEntryState {
    base: Configuration,
    plan: MutationPlan,
    play: Vec<Vec<MixedStrategy>>,
}

/// Checked assembly of a post-entry state: focality and the equilibrium
/// condition for every pair.
pub fn post_entry(config: &Configuration, plan: MutationPlan, play: Vec<Vec<MixedStrategy>>) -> Result<PostEntryState> {
    let state = PostEntryState::assemble(config.clone(), plan, play)?;
    if let Some((i, j)) = state.focality_violation() {
        return Err(Error::Focality(state.id(i).to_string(), state.id(j).to_string()));
    }
    if let Some((i, j)) = state.equilibrium_violation()? {
        return Err(Error::NotEquilibrium(format!(
            "b̃_{}({}) is not a best response",
            state.id(i),
            state.id(j)
        )));
    }
    Ok(state)
}

impl PostEntryState {
    /// Structural checks only; focality and equilibrium are left to the
    /// caller.
    pub fn assemble(base: Configuration, plan: MutationPlan, play: Vec<Vec<MixedStrategy>>) -> Result<Self> {
        for t in plan.mutants() {
            check_type(&base.game, t)?;
            if base.distribution.index_of(t.id()).is_some() {
                return Err(Error::Input(format!("mutant id `{}` is already an incumbent", t.id())));
            }
        }
        check_table(&base.game, base.len() + plan.mutants.len(), &play)?;
        Ok(PostEntryState { base, plan, play })
    }

    pub fn base(&self) -> &Configuration {
        &self.base
    }

    pub fn plan(&self) -> &MutationPlan {
        &self.plan
    }

    pub fn table(&self) -> &[Vec<MixedStrategy>] {
        &self.play
    }

    pub fn incumbents(&self) -> usize {
        self.base.len()
    }

    pub fn len(&self) -> usize {
        self.base.len() + self.plan.mutants.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn order(&self) -> u32 {
        self.plan.order()
    }

    pub fn type_at(&self, i: usize) -> &PreferenceType {
        let k = self.base.len();
        if i < k {
            &self.base.types()[i]
        } else {
            &self.plan.mutants[i - k]
        }
    }

    pub fn id(&self, i: usize) -> &str {
        self.type_at(i).id()
    }

    pub fn index_of(&self, id: &str) -> Option<usize> {
        (0..self.len()).find(|&i| self.id(i) == id)
    }

    pub fn play(&self, i: usize, j: usize) -> &MixedStrategy {
        &self.play[i][j]
    }

    pub fn profile(&self, i: usize, j: usize) -> MixedProfile {
        MixedProfile::new(vec![self.play[i][j].clone(), self.play[j][i].clone()])
    }

    pub fn focality_violation(&self) -> Option<(usize, usize)> {
        let k = self.base.len();
        for i in 0..k {
            for j in 0..k {
                if self.play[i][j] != self.base.play[i][j] {
                    return Some((i, j));
                }
            }
        }
        None
    }

    /// First ordered pair whose strategy is not a best response.
    pub fn equilibrium_violation(&self) -> Result<Option<(usize, usize)>> {
        for i in 0..self.len() {
            for j in 0..self.len() {
                if !is_best_reply(self.type_at(i), &self.play[i][j], &self.play[j][i])? {
                    return Ok(Some((i, j)));
                }
            }
        }
        Ok(None)
    }

    /// Population shares as polynomials in `ε`.
    pub fn shares(&self) -> Vec<SharePolynomial> {
        let factor = self.plan.family.incumbent_factor();
        let mut out: Vec<SharePolynomial> = self
            .base
            .distribution
            .weights
            .iter()
            .map(|w| factor.scale(w))
            .collect();
        out.extend((0..self.plan.family.len()).map(|s| self.plan.family.share(s)));
        out
    }

    /// `‖E‖₁`.
    pub fn total_share(&self) -> SharePolynomial {
        self.plan.family.total()
    }

    /// Post-entry fitness of type `i`.
    pub fn fitness(&self, i: usize) -> SharePolynomial {
        let shares = self.shares();
        let mut acc = SharePolynomial::zero();
        for (j, s) in shares.iter().enumerate() {
            let pay = expected_payoff(&self.base.game, &self.profile(i, j)).expect("validated table");
            acc = acc + s.scale(&pay[0]);
        }
        acc
    }

    pub fn fitness_of(&self, id: &str) -> Result<SharePolynomial> {
        let i = self.index_of(id).ok_or_else(|| Error::UnknownType(id.to_string()))?;
        Ok(self.fitness(i))
    }

    /// Post-entry aggregate outcome at a concrete share parameter.
    pub fn aggregate_at(&self, eps: &Q) -> CorrelatedStrategy {
        let shares: Vec<Q> = self.shares().iter().map(|p| p.eval(eps)).collect();
        CorrelatedStrategy::from_raw(aggregate(&self.base.game, &shares, &self.play))
    }
}

/// Total-variation distance between two correlated strategies.
pub fn total_variation(a: &CorrelatedStrategy, b: &CorrelatedStrategy) -> Q {
    let sum: Q = a.weights().iter().zip(b.weights()).map(|(x, y)| (x - y).abs()).sum();
    sum / Q::from_integer(2.into())
}

/// Certificate for `config`, independent of any requested order.
pub fn certify_single(config: &Configuration) -> Result<Option<Certificate>> {
    let game = config.game();
    let eff = geometry::efficient_strategy(game)?;
    if let Some(c) = strict_nash_certificate(config, &eff)? {
        return Ok(Some(c));
    }
    if game.shape()[0] == 2 {
        if let Some(c) = pure_branch_certificate(config, &eff) {
            return Ok(Some(c));
        }
        if let Some(c) = mixed_branch_certificate(config, &eff) {
            return Ok(Some(c));
        }
    }
    Ok(None)
}

fn strict_nash_certificate(config: &Configuration, eff: &EfficientProfile) -> Result<Option<Certificate>> {
    let game = config.game();
    let Some(a) = config.types()[0].strictly_dominant() else {
        return Ok(None);
    };
    if config.types().iter().any(|t| t.strictly_dominant() != Some(a)) {
        return Ok(None);
    }
    let m = game.shape()[0];
    let pure = MixedStrategy::pure(m, a);
    if config.table().iter().flatten().any(|s| *s != pure) {
        return Ok(None);
    }
    let star = game.payoff_of(&[a, a])[0].clone();
    if (0..m).any(|x| x != a && game.payoff_of(&[x, a])[0] >= star) {
        return Ok(None);
    }
    let name = &game.actions(0)[a];
    let v = game.payoff_of(&[a, a]).to_vec();
    let mut premises = vec![
        format!("every incumbent type has {name} strictly dominant"),
        format!("b ≡ ({name},{name})"),
        format!("({name},{name}) is a strict Nash equilibrium"),
    ];
    if pareto_coop(game, &v)? {
        premises.push(format!("{} ∈ P(S_co)", crate::rational::show_vec(&v)));
        return Ok(Some(Certificate {
            theorem: Theorem::StrictNashCooperative,
            order: Order::Infinite,
            premises,
        }));
    }
    let nc = pareto_noncoop(game, &v, &MixedProfile::pure(game.shape(), &[a, a]), &Budget::default())?;
    if nc.status == Tri::True {
        premises.push(format!("{} ∈ P(S_nc)", crate::rational::show_vec(&v)));
        return Ok(Some(Certificate {
            theorem: Theorem::StrictNashNoncooperative,
            order: Order::Finite(2),
            premises,
        }));
    }
    if star == eff.value {
        premises.push(format!("{name} is efficient with value {}", show(&star)));
        return Ok(Some(Certificate {
            theorem: Theorem::StrictNashEfficient,
            order: Order::Finite(1),
            premises,
        }));
    }
    Ok(None)
}

/// 2×2, efficient pure `a*` with `π1(a*,a*) ≤ π1(o,a*)`, held by a
/// monomorphic type indifferent against `a*` and strictly preferring `o`
/// against `o`.
fn pure_branch_certificate(config: &Configuration, eff: &EfficientProfile) -> Option<Certificate> {
    let game = config.game();
    let a = eff.strategy.as_pure()?;
    let o = 1 - a;
    if config.len() != 1 || *config.play(0, 0) != MixedStrategy::pure(2, a) {
        return None;
    }
    let pay = |x: usize, y: usize| game.payoff_of(&[x, y])[0].clone();
    if pay(a, a) > pay(o, a) {
        return None;
    }
    let t = &config.types()[0];
    let u = |x: usize, y: usize| t.utility()[x * 2 + y].clone();
    if u(a, a) != u(o, a) || u(a, o) >= u(o, o) {
        return None;
    }
    let names = game.actions(0);
    Some(Certificate {
        theorem: Theorem::EfficientPureIndifferent,
        order: Order::Infinite,
        premises: vec![
            format!("{} is efficient with value {}", names[a], show(&eff.value)),
            format!("π1({0},{0}) ≤ π1({1},{0})", names[a], names[o]),
            format!("monomorphic type indifferent against {} and preferring {} against {}", names[a], names[o], names[o]),
        ],
    })
}

/// 2×2 with interior `σ*` and `B = C > max(A, D)`, held by a monomorphic
/// type indifferent at `σ*` whose reply follows the opponent's majority.
fn mixed_branch_certificate(config: &Configuration, eff: &EfficientProfile) -> Option<Certificate> {
    let game = config.game();
    if eff.strategy.as_pure().is_some() || config.len() != 1 || *config.play(0, 0) != eff.strategy {
        return None;
    }
    let pay = |x: usize, y: usize| game.payoff_of(&[x, y])[0].clone();
    let (a, b, c, d) = (pay(0, 0), pay(0, 1), pay(1, 0), pay(1, 1));
    if b != c || b <= a || b <= d {
        return None;
    }
    let t = &config.types()[0];
    let u = |x: usize, y: usize| t.utility()[x * 2 + y].clone();
    let alpha = eff.alpha().clone();
    let diff_at = |p: &Q| p * (u(0, 0) - u(1, 0)) + (Q::one() - p) * (u(0, 1) - u(1, 1));
    let slope = (u(0, 0) - u(1, 0)) - (u(0, 1) - u(1, 1));
    if !diff_at(&alpha).is_zero() || !slope.is_positive() {
        return None;
    }
    Some(Certificate {
        theorem: Theorem::MixedSupporter,
        order: Order::Finite(1),
        premises: vec![
            format!("σ*(a1) = {} with value {}", show(&alpha), show(&eff.value)),
            format!("B = C = {} > A = {}, D = {}", show(&b), show(&a), show(&d)),
            "monomorphic type indifferent at σ* and matching the opponent's majority action".to_string(),
        ],
    })
}

/// Searches for a verified witness at order at most `order`, extended to
/// exactly `order` by duplication.
pub fn refute_single(config: &Configuration, order: u32, budget: &Budget) -> Result<Option<SingleWitness>> {
    let (w, _) = refute_with_screens(config, order, budget)?;
    Ok(w)
}

fn refute_with_screens(config: &Configuration, order: u32, budget: &Budget) -> Result<(Option<SingleWitness>, Vec<Screen>)> {
    if order == 0 {
        return Err(Error::Input("mutation order must be at least 1".into()));
    }
    if !config.is_balanced() {
        return Err(Error::Unbalanced(format!(
            "incumbent fitnesses differ: {}",
            crate::rational::show_vec(&config.fitnesses())
        )));
    }
    let mut screens = Vec::new();
    let extend = |w: SingleWitness| -> Result<SingleWitness> { crate::witness::extend_single(&w, order) };

    let rows = invade::find_row_violation(config);
    screens.push(Screen {
        name: "equal-match-payoffs",
        passed: rows.is_none(),
    });
    if let Some(v) = rows {
        let w = invade::synth_single_mutant(config, Some(&v))?;
        return Ok((Some(extend(w)?), screens));
    }
    let diag = invade::find_diagonal_violation(config)?;
    screens.push(Screen {
        name: "efficient-diagonal",
        passed: diag.is_none(),
    });
    if let Some(v) = diag {
        let w = invade::synth_single_mutant(config, Some(&v))?;
        return Ok((Some(extend(w)?), screens));
    }
    let probe = invade::synth_probe(config)?;
    screens.push(Screen {
        name: "single-mutant-probe",
        passed: probe.is_none(),
    });
    if let Some(w) = probe {
        return Ok((Some(extend(w)?), screens));
    }
    if order >= 2 {
        let mut found = None;
        'pairs: for i in 0..config.len() {
            for j in 0..config.len() {
                let v = config.match_payoffs(i, j);
                let nc = pareto_noncoop(config.game(), &v, &config.profile(i, j), budget)?;
                if nc.status == Tri::False {
                    found = Some(invade::synth_order2(config, (i, j), nc.dominator.as_ref())?);
                    break 'pairs;
                }
            }
        }
        screens.push(Screen {
            name: "noncooperative-frontier",
            passed: found.is_none(),
        });
        if let Some(w) = found {
            return Ok((Some(extend(w)?), screens));
        }
    }
    if order >= 3 {
        let pair = invade::cyclic_pair(config.game())?;
        screens.push(Screen {
            name: "cooperative-frontier",
            passed: pair.is_none(),
        });
        if let Some(p) = pair {
            let w = invade::synth_order3_cyclic(config, Some(p))?;
            return Ok((Some(extend(w)?), screens));
        }
    }
    Ok((None, screens))
}

/// Full pipeline: witnesses first, then certificates, else `Unknown`.
pub fn check_stability_single(config: &Configuration, order: Order, budget: &Budget) -> Result<StabilityVerdict> {
    let search = order.finite().unwrap_or(3);
    let mut notes = Vec::new();
    let (witness, screens) = refute_with_screens(config, search, budget)?;
    if let Some(w) = witness {
        return Ok(StabilityVerdict {
            requested: order,
            verdict: Verdict::Unstable(Box::new(Witness::Single(w))),
            screens,
            notes,
        });
    }
    if let Some(cert) = certify_single(config)? {
        let mut cert = cert;
        if let Order::Finite(c) = cert.order {
            if c >= 3 {
                cert.order = Order::Infinite;
                notes.push("stability of order 3 extends to every order".to_string());
            }
        }
        if order.le(cert.order) {
            stable_payoff_identity(config)?;
            return Ok(StabilityVerdict {
                requested: order,
                verdict: Verdict::Stable(cert),
                screens,
                notes,
            });
        }
        notes.push(format!(
            "certificate {} covers orders up to {} only",
            cert.theorem.name(),
            cert.order
        ));
    }
    if order.finite().is_none_or(|r| r >= 3) {
        notes.push("no witness of order at most 3 exists among the synthesized constructions".to_string());
    }
    if config.game().shape()[0] > 2 {
        notes.push("no sufficient condition covers this configuration beyond strict equilibria".to_string());
    }
    Ok(StabilityVerdict {
        requested: order,
        verdict: Verdict::Unknown,
        screens,
        notes,
    })
}

/// `π1(φ_{μ,b}) = π1(σ*,σ*) = Π_θ` for every incumbent.
pub fn stable_payoff_identity(config: &Configuration) -> Result<Q> {
    let game = config.game();
    let eff = geometry::efficient_strategy(game)?;
    let phi = config.aggregate_outcome();
    let agg = crate::game::correlated_payoff(game, &phi)?[0].clone();
    let fits = config.fitnesses();
    if agg != eff.value || fits.iter().any(|f| *f != eff.value) {
        return Err(Error::Misuse(format!(
            "aggregate payoff {}, efficient value {}, fitnesses {} disagree",
            show(&agg),
            show(&eff.value),
            crate::rational::show_vec(&fits)
        )));
    }
    Ok(agg)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MaxOrder {
    Infinite,
    ExactlyOne,
    None,
}

impl MaxOrder {
    pub fn as_str(self) -> &'static str {
        match self {
            MaxOrder::Infinite => "inf",
            MaxOrder::ExactlyOne => "exactly 1",
            MaxOrder::None => "none",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Branch2x2 {
    /// Efficient pure `a*` that is a strict NE.
    StrictPure,
    /// Efficient pure `a*` that is not a strict NE.
    IndifferentPure,
    /// Interior `σ*` with `B = C`.
    MixedSupported,
    /// Interior `σ*` with `B ≠ C`.
    Unsupported,
}

impl Branch2x2 {
    pub fn as_str(self) -> &'static str {
        match self {
            Branch2x2::StrictPure => "efficient pure strict equilibrium",
            Branch2x2::IndifferentPure => "efficient pure, incumbents indifferent",
            Branch2x2::MixedSupported => "mixed efficient, B = C > A",
            Branch2x2::Unsupported => "mixed efficient, B ≠ C",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Classification2x2 {
    pub payoffs: [Q; 4],
    /// Labels were swapped so that `A ≥ D`.
    pub swapped: bool,
    pub efficient: EfficientProfile,
    pub max_order: MaxOrder,
    pub branch: Branch2x2,
    /// Configuration realizing `(σ*,σ*)` for the branch.
    pub canonical: Configuration,
}

/// The complete picture for the symmetric 2×2 game `A B / C D`.
pub fn classify_2x2(a: Q, b: Q, c: Q, d: Q) -> Result<Classification2x2> {
    let game = Game::symmetric_2x2(a.clone(), b.clone(), c.clone(), d.clone());
    let eff = geometry::efficient_strategy(&game)?;
    let swapped = a < d;
    let (branch, max_order, canonical) = match eff.strategy.as_pure() {
        Some(star) => {
            let o = 1 - star;
            let strict = game.payoff_of(&[star, star])[0] > game.payoff_of(&[o, star])[0];
            if strict {
                let t = make_dominant_type("dominant", &[2, 2], 0, star)?;
                let cfg = Configuration::monomorphic(game.clone(), t, MixedStrategy::pure(2, star))?;
                (Branch2x2::StrictPure, MaxOrder::Infinite, cfg)
            } else {
                let mut u = vec![Q::zero(); 4];
                u[o * 2 + o] = Q::one();
                let t = PreferenceType::new("lover", &[2, 2], 0, u, TypeTag::General)?;
                let cfg = Configuration::monomorphic(game.clone(), t, MixedStrategy::pure(2, star))?;
                (Branch2x2::IndifferentPure, MaxOrder::Infinite, cfg)
            }
        }
        None => {
            let t = make_mixed_supporter("supporter", eff.alpha().clone())?;
            let cfg = Configuration::monomorphic(game.clone(), t, eff.strategy.clone())?;
            if b == c {
                (Branch2x2::MixedSupported, MaxOrder::ExactlyOne, cfg)
            } else {
                (Branch2x2::Unsupported, MaxOrder::None, cfg)
            }
        }
    };
    Ok(Classification2x2 {
        payoffs: [a, b, c, d],
        swapped,
        efficient: eff,
        max_order,
        branch,
        canonical,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::preference::make_coordination_type;
    use crate::rational::{frac, int};

    fn anti() -> Game {
        Game::symmetric_2x2(int(0), int(2), int(2), int(0))
    }

    fn coordination_config() -> Configuration {
        let t = make_coordination_type("coord", 2).unwrap();
        Configuration::monomorphic(anti(), t, MixedStrategy::uniform(2)).unwrap()
    }

    #[test]
    fn fitness_and_aggregate() {
        let cfg = coordination_config();
        assert_eq!(cfg.fitness(0), int(1));
        assert!(cfg.is_balanced());
        let phi = cfg.aggregate_outcome();
        assert_eq!(phi.weights(), &[frac(1, 4), frac(1, 4), frac(1, 4), frac(1, 4)]);
    }

    #[test]
    fn asymmetric_cross_play_aggregate() {
        let g = anti();
        let i1 = crate::preference::make_indifferent_type("x", &[2, 2], 0).unwrap();
        let i2 = crate::preference::make_indifferent_type("y", &[2, 2], 0).unwrap();
        let dist = PreferenceDistribution::new(vec![i1, i2], vec![frac(1, 2), frac(1, 2)]).unwrap();
        let p = |a| MixedStrategy::pure(2, a);
        let play = vec![vec![p(0), p(0)], vec![p(1), p(1)]];
        let cfg = Configuration::new(g, dist, play).unwrap();
        // x vs x: (a1,a1); y vs y: (a2,a2); x vs y: (a1,a2) and y vs x: (a2,a1).
        let phi = cfg.aggregate_outcome();
        assert_eq!(phi.weights(), &[frac(1, 4), frac(1, 4), frac(1, 4), frac(1, 4)]);
        assert!(cfg.is_balanced());
    }

    #[test]
    fn invalid_equilibrium_rejected() {
        let t = make_dominant_type("d", &[2, 2], 0, 0).unwrap();
        let r = Configuration::monomorphic(anti(), t, MixedStrategy::pure(2, 1));
        assert!(matches!(r, Err(Error::NotEquilibrium(_))));
    }

    #[test]
    fn classification_examples() {
        let c = classify_2x2(int(0), int(2), int(2), int(0)).unwrap();
        assert_eq!(c.max_order, MaxOrder::ExactlyOne);
        assert_eq!(c.efficient.alpha(), &frac(1, 2));
        let c = classify_2x2(int(5), int(0), int(0), int(1)).unwrap();
        assert_eq!(c.max_order, MaxOrder::Infinite);
        assert_eq!(c.branch, Branch2x2::StrictPure);
        let c = classify_2x2(int(0), int(3), int(1), int(0)).unwrap();
        assert_eq!(c.max_order, MaxOrder::None);
        let c = classify_2x2(int(2), int(1), int(3), int(0)).unwrap();
        assert_eq!(c.branch, Branch2x2::IndifferentPure);
        assert!(certify_single(&c.canonical).unwrap().is_some());
    }
}
