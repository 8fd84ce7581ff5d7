//! `n` separate populations, one per player position.
//!
//! A type tuple `t` picks one type per population; tuples are indexed
//! row-major over the population sizes with population 1 most significant.
//! Mutants of population `i` follow its incumbents, so in a post-entry state
//! index `k ≥ incumbents(i)` is mutant `k − incumbents(i)`.

use alloc::boxed::Box;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;

use num_traits::{One, Signed, Zero};

use crate::budget::Budget;
use crate::error::{Error, Result};
use crate::game::{
    decode_profile, encode_profile, expected_payoff, induced_correlated, CorrelatedStrategy, Game, MixedProfile,
};
use crate::geometry::{self, dominates, fit_resolution, grid_first, pareto_coop, pareto_noncoop, Tri};
use crate::invade;
use crate::lp::{self, LpResult};
use crate::poly::{ShareFamily, SharePolynomial};
use crate::preference::{PreferenceType, SubjectiveGame};
use crate::rational::{show_vec, Q};
use crate::single::PreferenceDistribution;
use crate::verdict::{Certificate, Order, Screen, StabilityVerdict, Theorem, Verdict, Witness};
use crate::witness::{fresh_id, MultiWitness};

fn check_population(game: &Game, i: usize, t: &PreferenceType) -> Result<()> {
    if t.shape() != game.shape() {
        return Err(Error::Input(format!("type `{}` uses a different game", t.id())));
    }
    if t.seat() != i {
        return Err(Error::Input(format!(
            "type `{}` belongs to population {}, not {}",
            t.id(),
            t.seat() + 1,
            i + 1
        )));
    }
    Ok(())
}

fn tuple_label(types: &[&PreferenceType]) -> String {
    let ids: Vec<&str> = types.iter().map(|t| t.id()).collect();
    format!("({})", ids.join(","))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MultiConfiguration {
    game: Game,
    populations: Vec<PreferenceDistribution>,
    play: Vec<MixedProfile>,
    payoffs: Vec<Vec<Q>>,
}

impl MultiConfiguration {
    /// `play[x]` is `b(θ)` for the `x`-th type tuple.
    pub fn new(game: Game, populations: Vec<PreferenceDistribution>, play: Vec<MixedProfile>) -> Result<Self> {
        let n = game.players();
        if populations.len() != n {
            return Err(Error::Dimension {
                expected: n,
                found: populations.len(),
            });
        }
        for (i, p) in populations.iter().enumerate() {
            for t in p.types() {
                check_population(&game, i, t)?;
            }
        }
        let counts: Vec<usize> = populations.iter().map(PreferenceDistribution::len).collect();
        let total: usize = counts.iter().product();
        if play.len() != total {
            return Err(Error::Dimension {
                expected: total,
                found: play.len(),
            });
        }
        let mut payoffs = Vec::with_capacity(total);
        for (x, prof) in play.iter().enumerate() {
            let t = decode_profile(&counts, x);
            let types: Vec<&PreferenceType> = (0..n).map(|i| &populations[i].types()[t[i]]).collect();
            let sg = SubjectiveGame::new(&types)?;
            if let Some(d) = sg.first_deviator(prof)? {
                return Err(Error::NotEquilibrium(format!(
                    "at {}, `{}` does not best-respond",
                    tuple_label(&types),
                    types[d].id()
                )));
            }
            payoffs.push(expected_payoff(&game, prof)?);
        }
        Ok(MultiConfiguration {
            game,
            populations,
            play,
            payoffs,
        })
    }

    /// One type per population, playing `profile`.
    pub fn monomorphic(game: Game, types: Vec<PreferenceType>, profile: MixedProfile) -> Result<Self> {
        let populations = types.into_iter().map(PreferenceDistribution::degenerate).collect();
        MultiConfiguration::new(game, populations, vec![profile])
    }

    /// Every type tuple plays `profile`.
    pub fn uniform(game: Game, populations: Vec<PreferenceDistribution>, profile: MixedProfile) -> Result<Self> {
        let total = populations.iter().map(PreferenceDistribution::len).product();
        MultiConfiguration::new(game, populations, vec![profile; total])
    }

    pub fn game(&self) -> &Game {
        &self.game
    }

    pub fn populations(&self) -> &[PreferenceDistribution] {
        &self.populations
    }

    pub fn population(&self, i: usize) -> &PreferenceDistribution {
        &self.populations[i]
    }

    pub fn players(&self) -> usize {
        self.game.players()
    }

    pub fn counts(&self) -> Vec<usize> {
        self.populations.iter().map(PreferenceDistribution::len).collect()
    }

    pub fn tuple_count(&self) -> usize {
        self.play.len()
    }

    pub fn tuple(&self, index: usize) -> Vec<usize> {
        decode_profile(&self.counts(), index)
    }

    pub fn tuple_index(&self, t: &[usize]) -> usize {
        encode_profile(&self.counts(), t)
    }

    pub fn tuple_name(&self, t: &[usize]) -> String {
        let types: Vec<&PreferenceType> = t.iter().enumerate().map(|(i, &k)| &self.populations[i].types()[k]).collect();
        tuple_label(&types)
    }

    /// `μ(θ) = Π_i μ_i(θ_i)`.
    pub fn weight(&self, t: &[usize]) -> Q {
        t.iter()
            .enumerate()
            .map(|(i, &k)| self.populations[i].weights()[k].clone())
            .product()
    }

    pub fn plays(&self) -> &[MixedProfile] {
        &self.play
    }

    pub fn play(&self, t: &[usize]) -> &MixedProfile {
        &self.play[self.tuple_index(t)]
    }

    pub fn match_payoffs(&self, t: &[usize]) -> &[Q] {
        &self.payoffs[self.tuple_index(t)]
    }

    /// `Π_{θ_i}(μ;b)` for type `k` of population `i`.
    pub fn fitness(&self, i: usize, k: usize) -> Q {
        let mut acc = Q::zero();
        for x in 0..self.tuple_count() {
            let t = self.tuple(x);
            if t[i] != k {
                continue;
            }
            let w: Q = (0..self.players())
                .filter(|&j| j != i)
                .map(|j| self.populations[j].weights()[t[j]].clone())
                .product();
            acc += w * &self.payoffs[x][i];
        }
        acc
    }

    pub fn fitness_of(&self, i: usize, id: &str) -> Result<Q> {
        let k = self.populations[i]
            .index_of(id)
            .ok_or_else(|| Error::UnknownType(id.to_string()))?;
        Ok(self.fitness(i, k))
    }

    pub fn fitnesses(&self) -> Vec<Vec<Q>> {
        (0..self.players())
            .map(|i| (0..self.populations[i].len()).map(|k| self.fitness(i, k)).collect())
            .collect()
    }

    /// Incumbents of each population share one fitness.
    pub fn is_balanced(&self) -> bool {
        self.fitnesses().iter().all(|f| f.iter().all(|x| *x == f[0]))
    }

    /// `φ_{μ,b}` over row-major action profiles.
    pub fn aggregate_outcome(&self) -> CorrelatedStrategy {
        let mut w = vec![Q::zero(); self.game.profile_count()];
        for (x, prof) in self.play.iter().enumerate() {
            let mass = self.weight(&self.tuple(x));
            for (a, p) in induced_correlated(prof).weights().iter().enumerate() {
                if !p.is_zero() {
                    w[a] += &mass * p;
                }
            }
        }
        CorrelatedStrategy::from_raw(w)
    }

    /// The common pure profile every tuple plays, when all incumbents of
    /// population `i` have the same strictly dominant action `a*_i`.
    pub fn dominant_profile(&self) -> Option<Vec<usize>> {
        let mut star = Vec::with_capacity(self.players());
        for p in &self.populations {
            let a = p.types()[0].strictly_dominant()?;
            if p.types().iter().any(|t| t.strictly_dominant() != Some(a)) {
                return None;
            }
            star.push(a);
        }
        let pure = MixedProfile::pure(self.game.shape(), &star);
        self.play.iter().all(|p| *p == pure).then_some(star)
    }
}

/// Mutants entering each population along one share family per population.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MultiMutationPlan {
    mutants: Vec<Vec<PreferenceType>>,
    families: Vec<ShareFamily>,
}

impl MultiMutationPlan {
    pub fn new(mutants: Vec<Vec<PreferenceType>>, families: Vec<ShareFamily>) -> Result<Self> {
        if mutants.len() != families.len() {
            return Err(Error::Dimension {
                expected: mutants.len(),
                found: families.len(),
            });
        }
        for (m, f) in mutants.iter().zip(&families) {
            if m.len() != f.len() {
                return Err(Error::Dimension {
                    expected: m.len(),
                    found: f.len(),
                });
            }
        }
        if mutants.iter().all(Vec::is_empty) {
            return Err(Error::Input("a mutation plan needs at least one mutant".into()));
        }
        Ok(MultiMutationPlan { mutants, families })
    }

    /// Every mutant has share `ε`.
    pub fn equal(mutants: Vec<Vec<PreferenceType>>) -> Result<Self> {
        let families = mutants.iter().map(|m| ShareFamily::equal(m.len())).collect();
        MultiMutationPlan::new(mutants, families)
    }

    pub fn mutants(&self, i: usize) -> &[PreferenceType] {
        &self.mutants[i]
    }

    pub fn family(&self, i: usize) -> &ShareFamily {
        &self.families[i]
    }

    pub fn populations(&self) -> usize {
        self.mutants.len()
    }

    pub fn counts(&self) -> Vec<usize> {
        self.mutants.iter().map(Vec::len).collect()
    }

    /// Populations receiving mutants.
    pub fn target(&self) -> Vec<usize> {
        (0..self.mutants.len()).filter(|&i| !self.mutants[i].is_empty()).collect()
    }

    /// `‖m_J‖∞`.
    pub fn order(&self) -> u32 {
        self.mutants.iter().map(Vec::len).max().unwrap_or(0) as u32
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MultiPostEntryState {
    base: MultiConfiguration,
    plan: MultiMutationPlan,
    counts: Vec<usize>,
    play: Vec<MixedProfile>,
    payoffs: Vec<Vec<Q>>,
}

impl MultiPostEntryState {
    /// `play` covers every tuple of the post-entry support.
    pub fn assemble(base: MultiConfiguration, plan: MultiMutationPlan, play: Vec<MixedProfile>) -> Result<Self> {
        let n = base.players();
        if plan.populations() != n {
            return Err(Error::Dimension {
                expected: n,
                found: plan.populations(),
            });
        }
        for i in 0..n {
            for (s, m) in plan.mutants(i).iter().enumerate() {
                check_population(base.game(), i, m)?;
                if base.population(i).index_of(m.id()).is_some() || plan.mutants(i)[..s].iter().any(|x| x.id() == m.id()) {
                    return Err(Error::Input(format!("mutant id `{}` is already used in population {}", m.id(), i + 1)));
                }
            }
        }
        let counts: Vec<usize> = (0..n).map(|i| base.population(i).len() + plan.mutants(i).len()).collect();
        let total: usize = counts.iter().product();
        if play.len() != total {
            return Err(Error::Dimension {
                expected: total,
                found: play.len(),
            });
        }
        let payoffs = play
            .iter()
            .map(|p| expected_payoff(base.game(), p))
            .collect::<Result<Vec<_>>>()?;
        Ok(MultiPostEntryState {
            base,
            plan,
            counts,
            play,
            payoffs,
        })
    }

    /// Copies the base play on incumbent tuples and asks `rule` for every
    /// tuple containing a mutant.
    pub fn build(
        base: MultiConfiguration,
        plan: MultiMutationPlan,
        rule: &mut dyn FnMut(&[usize]) -> MixedProfile,
    ) -> Result<Self> {
        let inc = base.counts();
        let counts: Vec<usize> = (0..base.players()).map(|i| inc[i] + plan.mutants(i).len()).collect();
        let total: usize = counts.iter().product();
        let mut play = Vec::with_capacity(total);
        for x in 0..total {
            let t = decode_profile(&counts, x);
            if t.iter().zip(&inc).all(|(k, c)| k < c) {
                play.push(base.play(&t).clone());
            } else {
                play.push(rule(&t));
            }
        }
        MultiPostEntryState::assemble(base, plan, play)
    }

    pub fn base(&self) -> &MultiConfiguration {
        &self.base
    }

    pub fn plan(&self) -> &MultiMutationPlan {
        &self.plan
    }

    pub fn populations(&self) -> usize {
        self.counts.len()
    }

    /// Post-entry support sizes.
    pub fn counts(&self) -> &[usize] {
        &self.counts
    }

    pub fn incumbents(&self, i: usize) -> usize {
        self.base.population(i).len()
    }

    pub fn order(&self) -> u32 {
        self.plan.order()
    }

    pub fn is_mutant(&self, i: usize, k: usize) -> bool {
        k >= self.incumbents(i)
    }

    pub fn type_at(&self, i: usize, k: usize) -> &PreferenceType {
        let c = self.incumbents(i);
        if k < c {
            &self.base.population(i).types()[k]
        } else {
            &self.plan.mutants(i)[k - c]
        }
    }

    pub fn id(&self, i: usize, k: usize) -> &str {
        self.type_at(i, k).id()
    }

    pub fn index_of(&self, i: usize, id: &str) -> Option<usize> {
        (0..self.counts[i]).find(|&k| self.id(i, k) == id)
    }

    pub fn tuple_count(&self) -> usize {
        self.play.len()
    }

    pub fn tuple(&self, index: usize) -> Vec<usize> {
        decode_profile(&self.counts, index)
    }

    pub fn tuple_index(&self, t: &[usize]) -> usize {
        encode_profile(&self.counts, t)
    }

    pub fn tuple_name(&self, t: &[usize]) -> String {
        let types: Vec<&PreferenceType> = t.iter().enumerate().map(|(i, &k)| self.type_at(i, k)).collect();
        tuple_label(&types)
    }

    pub fn plays(&self) -> &[MixedProfile] {
        &self.play
    }

    pub fn play(&self, t: &[usize]) -> &MixedProfile {
        &self.play[self.tuple_index(t)]
    }

    fn is_incumbent_tuple(&self, t: &[usize]) -> bool {
        t.iter().enumerate().all(|(i, &k)| !self.is_mutant(i, k))
    }

    /// First incumbent tuple whose play differs from the base.
    pub fn focality_violation(&self) -> Option<Vec<usize>> {
        (0..self.tuple_count())
            .map(|x| self.tuple(x))
            .find(|t| self.is_incumbent_tuple(t) && self.play(t) != self.base.play(t))
    }

    /// First tuple whose play is not an equilibrium of its subjective game.
    pub fn equilibrium_violation(&self) -> Result<Option<Vec<usize>>> {
        for x in 0..self.tuple_count() {
            let t = self.tuple(x);
            let types: Vec<&PreferenceType> = t.iter().enumerate().map(|(i, &k)| self.type_at(i, k)).collect();
            if !SubjectiveGame::new(&types)?.is_equilibrium(&self.play[x])? {
                return Ok(Some(t));
            }
        }
        Ok(None)
    }

    /// Post-entry shares of population `i` as polynomials in `ε`.
    pub fn shares(&self, i: usize) -> Vec<SharePolynomial> {
        let family = self.plan.family(i);
        let factor = family.incumbent_factor();
        let mut out: Vec<SharePolynomial> = self
            .base
            .population(i)
            .weights()
            .iter()
            .map(|w| factor.scale(w))
            .collect();
        out.extend((0..family.len()).map(|s| family.share(s)));
        out
    }

    /// `Σ_i ‖E_i‖₁`.
    pub fn total_share(&self) -> SharePolynomial {
        (0..self.populations()).fold(SharePolynomial::zero(), |acc, i| &acc + &self.plan.family(i).total())
    }

    /// `Π_{θ_i}(μ̃^E; b̃)` for type `k` of population `i`.
    pub fn fitness(&self, i: usize, k: usize) -> SharePolynomial {
        let shares: Vec<Vec<SharePolynomial>> = (0..self.populations()).map(|j| self.shares(j)).collect();
        let mut others = self.counts.clone();
        others[i] = 1;
        let mut acc = SharePolynomial::zero();
        for y in 0..others.iter().product::<usize>() {
            let mut t = decode_profile(&others, y);
            t[i] = k;
            let pay = &self.payoffs[self.tuple_index(&t)][i];
            if pay.is_zero() {
                continue;
            }
            let mut w = SharePolynomial::constant(pay.clone());
            for j in (0..self.populations()).filter(|&j| j != i) {
                w = &w * &shares[j][t[j]];
            }
            acc = &acc + &w;
        }
        acc
    }

    pub fn fitness_of(&self, i: usize, id: &str) -> Result<SharePolynomial> {
        let k = self.index_of(i, id).ok_or_else(|| Error::UnknownType(id.to_string()))?;
        Ok(self.fitness(i, k))
    }

    /// Post-entry aggregate outcome at a concrete share parameter.
    pub fn aggregate_at(&self, eps: &Q) -> CorrelatedStrategy {
        let shares: Vec<Vec<Q>> = (0..self.populations())
            .map(|i| self.shares(i).iter().map(|p| p.eval(eps)).collect())
            .collect();
        let mut w = vec![Q::zero(); self.base.game().profile_count()];
        for (x, prof) in self.play.iter().enumerate() {
            let t = self.tuple(x);
            let mass: Q = t.iter().enumerate().map(|(i, &k)| shares[i][k].clone()).product();
            if mass.is_zero() {
                continue;
            }
            for (a, p) in induced_correlated(prof).weights().iter().enumerate() {
                if !p.is_zero() {
                    w[a] += &mass * p;
                }
            }
        }
        CorrelatedStrategy::from_raw(w)
    }

    /// Adds a copy of mutant `s` of population `pop` behaving exactly like
    /// it, splitting its share in two.
    pub fn duplicate(&self, pop: usize, s: usize) -> Result<Self> {
        let c = self.incumbents(pop);
        let src = c + s;
        let old = self.counts[pop];
        let original = self
            .plan
            .mutants(pop)
            .get(s)
            .ok_or_else(|| Error::Misuse(format!("population {} has no mutant {}", pop + 1, s + 1)))?;
        let id = fresh_id(original.id(), &|x| self.index_of(pop, x).is_some());
        let mut mutants: Vec<Vec<PreferenceType>> = (0..self.populations()).map(|i| self.plan.mutants(i).to_vec()).collect();
        mutants[pop].push(original.renamed(id));
        let mut families: Vec<ShareFamily> = (0..self.populations()).map(|i| self.plan.family(i).clone()).collect();
        families[pop] = families[pop].split(s, 2);
        let mut counts = self.counts.clone();
        counts[pop] += 1;
        let play = (0..counts.iter().product::<usize>())
            .map(|x| {
                let mut t = decode_profile(&counts, x);
                if t[pop] == old {
                    t[pop] = src;
                }
                self.play(&t).clone()
            })
            .collect();
        MultiPostEntryState::assemble(self.base.clone(), MultiMutationPlan::new(mutants, families)?, play)
    }
}

/// `π_i(φ_{μ,b}) = π_i(b(θ)) = Π_{θ̄_i}` for every population, tuple and
/// incumbent; returns the common payoff vector.
pub fn stable_payoff_identity_multi(config: &MultiConfiguration) -> Result<Vec<Q>> {
    let game = config.game();
    let agg = crate::game::correlated_payoff(game, &config.aggregate_outcome())?;
    let fits = config.fitnesses();
    for x in 0..config.tuple_count() {
        let t = config.tuple(x);
        if config.match_payoffs(&t) != agg.as_slice() {
            return Err(Error::Misuse(format!(
                "payoff {} at {} differs from the aggregate payoff {}",
                show_vec(config.match_payoffs(&t)),
                config.tuple_name(&t),
                show_vec(&agg)
            )));
        }
    }
    for (i, f) in fits.iter().enumerate() {
        if f.iter().any(|x| *x != agg[i]) {
            return Err(Error::Misuse(format!(
                "fitnesses {} of population {} differ from {}",
                show_vec(f),
                i + 1,
                crate::rational::show(&agg[i])
            )));
        }
    }
    Ok(agg)
}

/// Outcome of the strictly-strong-equilibrium test.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StrongNashResult {
    pub status: Tri,
    /// Coalition (0-based players) and deviation leaving no member worse off.
    pub deviation: Option<(Vec<usize>, MixedProfile)>,
    /// Payoffs after the deviation.
    pub payoffs: Option<Vec<Q>>,
    /// Coalitions closed by a positive weighted loss, with the weights.
    pub certificates: Vec<(Vec<usize>, Vec<Q>)>,
}

fn members(mask: usize, n: usize) -> Vec<usize> {
    (0..n).filter(|&i| mask >> i & 1 == 1).collect()
}

/// Pure deviations of coalition `j` from `star`, in row-major order.
fn coalition_deviations(game: &Game, star: &[usize], j: &[usize]) -> Vec<Vec<usize>> {
    let sub: Vec<usize> = j.iter().map(|&i| game.shape()[i]).collect();
    (0..sub.iter().product::<usize>())
        .map(|x| {
            let acts = decode_profile(&sub, x);
            let mut p = star.to_vec();
            for (&i, &a) in j.iter().zip(&acts) {
                p[i] = a;
            }
            p
        })
        .filter(|p| p != star)
        .collect()
}

/// Weights `λ ∈ Δ(J)` with `Σ λ_k (π_k(a*) − π_k(a′)) > 0` for every pure
/// deviation `a′`, which forces a loss on some member for every mixed one.
fn weighted_loss(game: &Game, star: &[usize], j: &[usize]) -> Option<Vec<Q>> {
    let devs = coalition_deviations(game, star, j);
    let base = game.payoff_of(star);
    let m = j.len();
    // columns: λ (m), t⁺, t⁻, slack per deviation
    let width = m + 2 + devs.len();
    let mut a = Vec::with_capacity(devs.len() + 1);
    let mut b = Vec::with_capacity(devs.len() + 1);
    for (r, d) in devs.iter().enumerate() {
        let pay = game.payoff_of(d);
        let mut row = vec![Q::zero(); width];
        for (c, &k) in j.iter().enumerate() {
            row[c] = &base[k] - &pay[k];
        }
        row[m] = -Q::one();
        row[m + 1] = Q::one();
        row[m + 2 + r] = -Q::one();
        a.push(row);
        b.push(Q::zero());
    }
    let mut row = vec![Q::zero(); width];
    for x in row.iter_mut().take(m) {
        *x = Q::one();
    }
    a.push(row);
    b.push(Q::one());
    let mut c = vec![Q::zero(); width];
    c[m] = Q::one();
    c[m + 1] = -Q::one();
    match lp::maximize(&a, &b, &c) {
        LpResult::Optimal { x, value } if value.is_positive() => Some(x[..m].to_vec()),
        _ => None,
    }
}

/// Whether the pure profile `star` is a strictly strong Nash equilibrium.
///
/// Pure coalition deviations are checked exactly. A coalition is closed
/// when a weighted sum of member losses is positive at every pure
/// deviation; remaining coalitions are searched on a grid of mixed
/// deviations and otherwise left `Unknown`.
pub fn is_strictly_strong_nash(game: &Game, star: &[usize], budget: &Budget) -> Result<StrongNashResult> {
    MixedProfile::pure(game.shape(), star).check(game.shape())?;
    let n = game.players();
    let base = game.payoff_of(star).to_vec();
    let masks = 1usize..(1 << n);
    for mask in masks.clone() {
        let j = members(mask, n);
        for d in coalition_deviations(game, star, &j) {
            let pay = game.payoff_of(&d);
            if j.iter().all(|&k| pay[k] >= base[k]) {
                return Ok(StrongNashResult {
                    status: Tri::False,
                    deviation: Some((j, MixedProfile::pure(game.shape(), &d))),
                    payoffs: Some(pay.to_vec()),
                    certificates: Vec::new(),
                });
            }
        }
    }
    let mut certificates = Vec::new();
    let mut open = Vec::new();
    for mask in masks {
        let j = members(mask, n);
        match weighted_loss(game, star, &j) {
            Some(lambda) => certificates.push((j, lambda)),
            None => open.push(j),
        }
    }
    for j in &open {
        let mut free = vec![false; n];
        for &k in j {
            free[k] = true;
        }
        let Some(res) = fit_resolution(game.shape(), &free, budget.coalition_resolution, budget.max_grid_points) else {
            continue;
        };
        let members = j.clone();
        let hit = grid_first(game, &free, star, res, &base, &|acc, target, at_base| {
            !at_base && members.iter().all(|&k| acc[k] >= target[k])
        });
        if let Some(prof) = hit {
            let pay = expected_payoff(game, &prof)?;
            if j.iter().all(|&k| pay[k] >= base[k]) {
                return Ok(StrongNashResult {
                    status: Tri::False,
                    deviation: Some((j.clone(), prof)),
                    payoffs: Some(pay),
                    certificates,
                });
            }
        }
    }
    Ok(StrongNashResult {
        status: if open.is_empty() { Tri::True } else { Tri::Unknown },
        deviation: None,
        payoffs: None,
        certificates,
    })
}

/// `π_i(a*) ≥ π_i(a)` for every pure `a` and every `i`; otherwise the first
/// profile (by player, then row-major) that pays some player more.
pub fn weakly_dominates_all(game: &Game, star: &[usize]) -> Result<(bool, Option<Vec<usize>>)> {
    MixedProfile::pure(game.shape(), star).check(game.shape())?;
    let base = game.payoff_of(star);
    for i in 0..game.players() {
        for x in 0..game.profile_count() {
            if game.payoff(x)[i] > base[i] {
                return Ok((false, Some(game.decode(x))));
            }
        }
    }
    Ok((true, None))
}

fn check_balanced(config: &MultiConfiguration) -> Result<()> {
    if config.is_balanced() {
        return Ok(());
    }
    let parts: Vec<String> = config.fitnesses().iter().map(|f| show_vec(f)).collect();
    Err(Error::Unbalanced(format!("incumbent fitnesses differ: {}", parts.join(" "))))
}

/// Certificate for `config`, independent of any requested order.
pub fn certify_multi(config: &MultiConfiguration, budget: &Budget) -> Result<Option<Certificate>> {
    let Some(star) = config.dominant_profile() else {
        return Ok(None);
    };
    let game = config.game();
    let v = game.payoff_of(&star).to_vec();
    let name = game.profile_name(&star);
    let mut premises = vec![
        "every incumbent type has its component of the profile strictly dominant".to_string(),
        format!("b ≡ {name}"),
    ];
    if game.players() == 2 {
        let strict = (0..2).all(|i| {
            (0..game.shape()[i]).filter(|&a| a != star[i]).all(|a| {
                let mut d = star.clone();
                d[i] = a;
                game.payoff_of(&d)[i] < v[i]
            })
        });
        if strict {
            premises.push(format!("{name} is a strict Nash equilibrium"));
            if pareto_coop(game, &v)? {
                premises.push(format!("{} ∈ P(S_co)", show_vec(&v)));
                return Ok(Some(Certificate {
                    theorem: Theorem::TwoPopulationCooperative,
                    order: Order::Infinite,
                    premises,
                }));
            }
            let nc = pareto_noncoop(game, &v, &MixedProfile::pure(game.shape(), &star), budget)?;
            if nc.status == Tri::True {
                premises.push(format!("{} ∈ P(S_nc)", show_vec(&v)));
                return Ok(Some(Certificate {
                    theorem: Theorem::TwoPopulationNoncooperative,
                    order: Order::Finite(1),
                    premises,
                }));
            }
            premises.pop();
        }
    }
    let ssne = is_strictly_strong_nash(game, &star, budget)?;
    let (wda, _) = weakly_dominates_all(game, &star)?;
    if ssne.status == Tri::True && wda {
        premises.push(format!("{name} is a strictly strong Nash equilibrium"));
        premises.push(format!("{name} weakly Pareto dominates every profile"));
        return Ok(Some(Certificate {
            theorem: Theorem::StrictlyStrongDominant,
            order: Order::Infinite,
            premises,
        }));
    }
    Ok(None)
}

/// Witness search; `order` bounds the mutants per population.
fn refute_with_screens(
    config: &MultiConfiguration,
    order: Order,
    budget: &Budget,
) -> Result<(Option<MultiWitness>, Vec<Screen>, Vec<String>)> {
    if order == Order::Finite(0) {
        return Err(Error::Input("mutation order must be at least 1".into()));
    }
    check_balanced(config)?;
    let mut screens = Vec::new();
    let mut notes = Vec::new();
    let finish = |w: MultiWitness| -> Result<MultiWitness> {
        match order {
            Order::Finite(r) => crate::witness::extend_multi(&w, r),
            Order::Infinite => Ok(w),
        }
    };

    let rows = invade::find_multi_row_violation(config);
    screens.push(Screen {
        name: "equal-match-payoffs",
        passed: rows.is_none(),
    });
    if let Some(v) = rows {
        let w = invade::synth_multi_row(config, &v)?;
        return Ok((Some(finish(w)?), screens, notes));
    }

    let mut found = None;
    for x in 0..config.tuple_count() {
        let t = config.tuple(x);
        let v = config.match_payoffs(&t).to_vec();
        let better = (0..config.tuple_count()).find(|&y| dominates(&config.payoffs[y], &v));
        if let Some(y) = better {
            found = Some((t, config.plays()[y].clone()));
            break;
        }
        let nc = pareto_noncoop(config.game(), &v, config.play(&t), budget)?;
        match nc.status {
            Tri::False => {
                let sigma = nc
                    .dominator
                    .ok_or_else(|| Error::Misuse("noncooperative screen returned no dominator".into()))?;
                found = Some((t, sigma));
                break;
            }
            Tri::Unknown => notes.push(format!(
                "membership of {} in P(S_nc) is undecided ({})",
                show_vec(&v),
                nc.method.as_str()
            )),
            Tri::True => {}
        }
    }
    screens.push(Screen {
        name: "noncooperative-frontier",
        passed: found.is_none(),
    });
    if let Some((t, sigma)) = found {
        let w = invade::synth_multi_noncoop(config, &t, &sigma)?;
        return Ok((Some(finish(w)?), screens, notes));
    }

    if config.dominant_profile().is_some() {
        let w = invade::synth_pattern(config, budget)?;
        screens.push(Screen {
            name: "pure-pattern-probe",
            passed: w.is_none(),
        });
        if let Some(w) = w {
            return Ok((Some(finish(w)?), screens, notes));
        }
    }

    if order.le(Order::Finite(1)) {
        return Ok((None, screens, notes));
    }
    let cap = order.finite().unwrap_or(u32::MAX);
    let mut found = None;
    'tuples: for x in 0..config.tuple_count() {
        let t = config.tuple(x);
        let v = config.match_payoffs(&t).to_vec();
        let small = cap.min(budget.max_rational_order) as usize;
        if let Some((idx, _)) = geometry::rational_dominators(config.game(), &v, small, budget)? {
            found = Some((t, invade::AppendixAssignment::from_indices(config.game(), &idx)?));
            break 'tuples;
        }
        if let Some((weights, _)) = geometry::coop_improvement(config.game(), &v)? {
            let a = invade::AppendixAssignment::from_weights(config.game(), &weights)?;
            let r = a.r() as u64;
            let table = r.checked_pow(config.players() as u32).unwrap_or(u64::MAX);
            if r <= cap as u64 && table <= budget.max_grid_points / 16 {
                found = Some((t, a));
                break 'tuples;
            }
            notes.push(format!(
                "{} is dominated in S_co, but the rational point found needs {} mutants per population",
                show_vec(&v),
                r
            ));
        }
    }
    screens.push(Screen {
        name: "rational-cooperative-frontier",
        passed: found.is_none(),
    });
    if let Some((t, a)) = found {
        let w = a.witness(config, &t)?;
        return Ok((Some(finish(w)?), screens, notes));
    }
    Ok((None, screens, notes))
}

/// Searches for a verified witness of order at most `order`, extended to
/// exactly `order` when it is finite.
pub fn refute_multi(config: &MultiConfiguration, order: Order, budget: &Budget) -> Result<Option<MultiWitness>> {
    Ok(refute_with_screens(config, order, budget)?.0)
}

/// Full pipeline: witnesses first, then certificates, else `Unknown`.
pub fn check_stability_multi(config: &MultiConfiguration, order: Order, budget: &Budget) -> Result<StabilityVerdict> {
    let (witness, screens, mut notes) = refute_with_screens(config, order, budget)?;
    if let Some(w) = witness {
        return Ok(StabilityVerdict {
            requested: order,
            verdict: Verdict::Unstable(Box::new(Witness::Multi(w))),
            screens,
            notes,
        });
    }
    if let Some(cert) = certify_multi(config, budget)? {
        if order.le(cert.order) {
            stable_payoff_identity_multi(config)?;
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
    if config.dominant_profile().is_none() {
        notes.push("sufficient conditions need dominant-strategy incumbents playing one pure profile".to_string());
    }
    Ok(StabilityVerdict {
        requested: order,
        verdict: Verdict::Unknown,
        screens,
        notes,
    })
}

/// `a` as a degenerate mixed profile.
pub fn pure_profile(game: &Game, profile: &[usize]) -> MixedProfile {
    MixedProfile::pure(game.shape(), profile)
}
