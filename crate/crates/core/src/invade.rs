//! Constructions of destabilizing mutation plans.
//!
//! Every mutant is an indifferent type, so only incumbent best responses
//! constrain the play tables. Each constructor returns a witness that has
//! already passed independent verification.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive};

use crate::budget::Budget;
use crate::error::{Error, Result};
use crate::game::{decode_profile, expected_payoff, Game, MixedProfile, MixedStrategy};
use crate::geometry::{self, efficient_strategy};
use crate::multi::{MultiConfiguration, MultiMutationPlan, MultiPostEntryState};
use crate::poly::{ShareFamily, SharePolynomial};
use crate::preference::{best_response_set, make_indifferent_type, PreferenceType};
use crate::rational::Q;
use crate::single::{Configuration, MutationPlan, PostEntryState};
use crate::witness::{fresh_id, MultiWitness, SingleWitness};

/// A failed single-population screen.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Violation {
    /// `π1(b(better, against)) > π1(b(worse, against))`.
    Rows { better: usize, worse: usize, against: usize },
    /// `π1(b(θ̄,θ̄)) < π1(σ*,σ*)`.
    Diagonal { incumbent: usize },
}

fn rejected(r: crate::witness::Rejection) -> Error {
    Error::Misuse(format!("synthesized witness rejected: {r}"))
}

fn mutant_ids(taken: &dyn Fn(&str) -> bool, prefix: &str, count: usize) -> Vec<String> {
    let mut out: Vec<String> = Vec::with_capacity(count);
    for s in 0..count {
        let base = format!("{prefix}{}", s + 1);
        let id = if taken(&base) || out.contains(&base) {
            fresh_id(&base, &|x| taken(x) || out.iter().any(|o| o == x))
        } else {
            base
        };
        out.push(id);
    }
    out
}

/// Extends the incumbent play table by `count` indifferent mutants with
/// equal shares; `rule(i, j)` gives the strategy of `i` against `j` whenever
/// one of them is a mutant.
fn single_state(
    config: &Configuration,
    count: usize,
    rule: &dyn Fn(usize, usize) -> MixedStrategy,
) -> Result<PostEntryState> {
    let k = config.len();
    let ids = mutant_ids(&|x| config.distribution().index_of(x).is_some(), "m", count);
    let mutants = ids
        .into_iter()
        .map(|id| make_indifferent_type(id, config.game().shape(), 0))
        .collect::<Result<Vec<_>>>()?;
    let n = k + count;
    let play = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| if i < k && j < k { config.play(i, j).clone() } else { rule(i, j) })
                .collect()
        })
        .collect();
    PostEntryState::assemble(config.clone(), MutationPlan::new(mutants, ShareFamily::equal(count))?, play)
}

fn own_payoff(config: &Configuration, i: usize, j: usize) -> Q {
    config.match_payoffs(i, j)[0].clone()
}

/// First `(against, better, worse)` with unequal match payoffs.
pub fn find_row_violation(config: &Configuration) -> Option<Violation> {
    let k = config.len();
    for against in 0..k {
        for better in 0..k {
            for worse in 0..k {
                if own_payoff(config, better, against) > own_payoff(config, worse, against) {
                    return Some(Violation::Rows { better, worse, against });
                }
            }
        }
    }
    None
}

/// First incumbent whose self-play falls short of the efficient value.
pub fn find_diagonal_violation(config: &Configuration) -> Result<Option<Violation>> {
    let eff = efficient_strategy(config.game())?;
    Ok((0..config.len())
        .find(|&i| own_payoff(config, i, i) < eff.value)
        .map(|incumbent| Violation::Diagonal { incumbent }))
}

/// One mutant exploiting a failed screen.
///
/// For unequal rows it copies `better` against `against` and `worse`
/// elsewhere; for a short diagonal it copies the incumbent everywhere and
/// plays `σ*` against itself.
pub fn synth_single_mutant(config: &Configuration, violation: Option<&Violation>) -> Result<SingleWitness> {
    let v = violation.ok_or_else(|| Error::Misuse("no screen violation supplied".into()))?;
    let k = config.len();
    let state = match *v {
        Violation::Rows { better, worse, against } => {
            let copy = move |j: usize| if j == against { better } else { worse };
            single_state(config, 1, &|i, j| match (i >= k, j >= k) {
                (true, true) => config.play(worse, worse).clone(),
                (true, false) => config.play(copy(j), j).clone(),
                (false, true) => config.play(i, copy(i)).clone(),
                (false, false) => unreachable!(),
            })?
        }
        Violation::Diagonal { incumbent } => {
            let sigma = efficient_strategy(config.game())?.strategy;
            single_state(config, 1, &|i, j| match (i >= k, j >= k) {
                (true, true) => sigma.clone(),
                (true, false) => config.play(incumbent, j).clone(),
                (false, true) => config.play(i, incumbent).clone(),
                (false, false) => unreachable!(),
            })?
        }
    };
    let name = match v {
        Violation::Rows { .. } => "row-mimic",
        Violation::Diagonal { .. } => "efficient-self-play",
    };
    SingleWitness::new(state, name).map_err(rejected)
}

/// Pure best response of incumbent `i` to `tau` that is best for the
/// mutant, first in action order on ties.
fn favourable_reply(config: &Configuration, i: usize, tau: &MixedStrategy) -> Result<usize> {
    let game = config.game();
    let m = game.shape()[0];
    let probe = MixedProfile::new(vec![MixedStrategy::uniform(m), tau.clone()]);
    let br = best_response_set(&config.types()[i], 0, &probe)?;
    let mut best = br[0];
    let mut value = None;
    for a in br {
        let pay = expected_payoff(game, &MixedProfile::new(vec![tau.clone(), MixedStrategy::pure(m, a)]))?[0].clone();
        if value.as_ref().is_none_or(|v| pay > *v) {
            value = Some(pay);
            best = a;
        }
    }
    Ok(best)
}

/// A single mutant playing a fixed `τ` against every incumbent and `σ*`
/// against itself, with incumbents answering as favourably as their
/// preferences allow. Tries pure actions, `σ*`, then incumbent strategies.
pub fn synth_probe(config: &Configuration) -> Result<Option<SingleWitness>> {
    let game = config.game();
    let m = game.shape()[0];
    let sigma = efficient_strategy(game)?.strategy;
    let mut candidates: Vec<MixedStrategy> = (0..m).map(|a| MixedStrategy::pure(m, a)).collect();
    for s in core::iter::once(&sigma).chain(config.table().iter().flatten()) {
        if !candidates.contains(s) {
            candidates.push(s.clone());
        }
    }
    let k = config.len();
    for tau in candidates {
        let replies = (0..k)
            .map(|i| favourable_reply(config, i, &tau))
            .collect::<Result<Vec<_>>>()?;
        let state = single_state(config, 1, &|i, j| match (i >= k, j >= k) {
            (true, true) => sigma.clone(),
            (true, false) => tau.clone(),
            (false, true) => MixedStrategy::pure(m, replies[i]),
            (false, false) => unreachable!(),
        })?;
        if let Ok(w) = SingleWitness::new(state, "single-mutant-probe") {
            return Ok(Some(w));
        }
    }
    Ok(None)
}

/// Two mutants mimicking incumbents `i` and `j` that play the dominating
/// profile `(σ, σ′)` against each other.
pub fn synth_order2(config: &Configuration, pair: (usize, usize), dominator: Option<&MixedProfile>) -> Result<SingleWitness> {
    let d = dominator.ok_or_else(|| Error::Misuse("no dominating profile supplied".into()))?;
    let (i0, j0) = pair;
    let k = config.len();
    let mimic = |x: usize| if x < k { x } else if x == k { i0 } else { j0 };
    let state = single_state(config, 2, &|x, y| {
        if x == k && y == k + 1 {
            d.strategy(0).clone()
        } else if x == k + 1 && y == k {
            d.strategy(1).clone()
        } else {
            config.play(mimic(x), mimic(y)).clone()
        }
    })?;
    SingleWitness::new(state, "noncooperative-pair").map_err(rejected)
}

/// First `a < a′` with `π1(a,a′) + π1(a′,a) > 2·π1(σ*,σ*)`.
pub fn cyclic_pair(game: &Game) -> Result<Option<(usize, usize)>> {
    let eff = efficient_strategy(game)?;
    let twice = &eff.value + &eff.value;
    let m = game.shape()[0];
    for a in 0..m {
        for b in a + 1..m {
            if &game.payoff_of(&[a, b])[0] + &game.payoff_of(&[b, a])[0] > twice {
                return Ok(Some((a, b)));
            }
        }
    }
    Ok(None)
}

/// Three mutants mimicking the first incumbent, playing `(a, a′)` around
/// the cycle `1 → 2 → 3 → 1`.
pub fn synth_order3_cyclic(config: &Configuration, pair: Option<(usize, usize)>) -> Result<SingleWitness> {
    let (a, b) = match pair {
        Some(p) => p,
        None => cyclic_pair(config.game())?.ok_or_else(|| Error::Misuse("no pair beats the efficient value".into()))?,
    };
    let game = config.game();
    let total = &game.payoff_of(&[a, b])[0] + &game.payoff_of(&[b, a])[0];
    let eff = efficient_strategy(game)?;
    if total <= &eff.value + &eff.value {
        return Err(Error::Misuse("pair does not beat twice the efficient value".into()));
    }
    let m = game.shape()[0];
    let k = config.len();
    let mimic = |x: usize| if x >= k { 0 } else { x };
    let state = single_state(config, 3, &|x, y| {
        if x >= k && y >= k && x != y {
            let (sx, sy) = (x - k, y - k);
            if (sx + 1) % 3 == sy {
                MixedStrategy::pure(m, a)
            } else {
                MixedStrategy::pure(m, b)
            }
        } else {
            config.play(mimic(x), mimic(y)).clone()
        }
    })?;
    SingleWitness::new(state, "cooperative-cycle").map_err(rejected)
}

/// Incumbents of one population earning different payoffs against the
/// same opponents.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MultiRowViolation {
    pub population: usize,
    /// The full tuple with the entry of `population` set to `better`.
    pub tuple: Vec<usize>,
    pub better: usize,
    pub worse: usize,
}

pub fn find_multi_row_violation(config: &MultiConfiguration) -> Option<MultiRowViolation> {
    for x in 0..config.tuple_count() {
        let t = config.tuple(x);
        for i in 0..config.players() {
            let c = config.population(i).len();
            let pay = |k: usize| {
                let mut u = t.clone();
                u[i] = k;
                config.match_payoffs(&u)[i].clone()
            };
            let (mut hi, mut lo) = (0, 0);
            for k in 1..c {
                if pay(k) > pay(hi) {
                    hi = k;
                }
                if pay(k) < pay(lo) {
                    lo = k;
                }
            }
            if pay(hi) > pay(lo) {
                let mut tuple = t.clone();
                tuple[i] = hi;
                return Some(MultiRowViolation {
                    population: i,
                    tuple,
                    better: hi,
                    worse: lo,
                });
            }
        }
    }
    None
}

fn indifferent_mutants(config: &MultiConfiguration, counts: &[usize]) -> Result<Vec<Vec<PreferenceType>>> {
    (0..config.players())
        .map(|i| {
            let pop = config.population(i);
            mutant_ids(&|x| pop.index_of(x).is_some(), &format!("m{}_", i + 1), counts[i])
                .into_iter()
                .map(|id| make_indifferent_type(id, config.game().shape(), i))
                .collect()
        })
        .collect()
}

/// One mutant in the violating population; against each opponent tuple it
/// copies the incumbent with the highest payoff there.
pub fn synth_multi_row(config: &MultiConfiguration, v: &MultiRowViolation) -> Result<MultiWitness> {
    let i = v.population;
    let c = config.population(i).len();
    let mut counts = vec![0; config.players()];
    counts[i] = 1;
    let plan = MultiMutationPlan::equal(indifferent_mutants(config, &counts)?)?;
    let state = MultiPostEntryState::build(config.clone(), plan, &mut |t| {
        let mut u = t.to_vec();
        let mut best = 0;
        for k in 0..c {
            u[i] = k;
            let here = config.match_payoffs(&u)[i].clone();
            u[i] = best;
            if here > config.match_payoffs(&u)[i] {
                best = k;
            }
        }
        u[i] = best;
        config.play(&u).clone()
    })?;
    MultiWitness::new(state, "row-mimic").map_err(rejected)
}

/// One mutant per population; the all-mutant tuple plays `sigma`, every
/// other tuple copies the base play with mutants replaced by `bar`.
pub fn synth_multi_noncoop(config: &MultiConfiguration, bar: &[usize], sigma: &MixedProfile) -> Result<MultiWitness> {
    let n = config.players();
    let plan = MultiMutationPlan::equal(indifferent_mutants(config, &vec![1; n])?)?;
    let inc = config.counts();
    let state = MultiPostEntryState::build(config.clone(), plan, &mut |t| {
        if t.iter().zip(&inc).all(|(k, c)| k >= c) {
            return sigma.clone();
        }
        let u: Vec<usize> = (0..n).map(|i| if t[i] >= inc[i] { bar[i] } else { t[i] }).collect();
        config.play(&u).clone()
    })?;
    MultiWitness::new(state, "noncooperative-coalition").map_err(rejected)
}

/// `ε^s (1−ε)^m` expanded into integer coefficients.
fn bernstein(s: usize, m: usize, degree: usize) -> Vec<i128> {
    let mut c = vec![0i128; degree + 1];
    let mut binom: i128 = 1;
    for l in 0..=m {
        let sign = if l % 2 == 0 { 1 } else { -1 };
        c[s + l] += sign * binom;
        binom = binom * (m - l) as i128 / (l + 1) as i128;
    }
    c
}

fn lowest_sign(c: &[i128]) -> i32 {
    c.iter().find(|&&x| x != 0).map_or(0, |&x| if x > 0 { 1 } else { -1 })
}

/// Pure play patterns for dominant-strategy incumbents.
///
/// For each set `J` of populations (in bitmask order), one mutant enters
/// every population of `J`. When exactly the mutants of `T ⊆ J` meet, they
/// play a pure profile of their own while incumbents keep `a*`. Candidate
/// patterns are scored in scaled integers and the first passing one is
/// verified exactly.
pub fn synth_pattern(config: &MultiConfiguration, budget: &Budget) -> Result<Option<MultiWitness>> {
    let Some(star) = config.dominant_profile() else {
        return Ok(None);
    };
    let game = config.game();
    let n = game.players();
    let shape = game.shape();
    let den = crate::rational::common_denominator(game.payoffs().iter().flatten());
    let scaled: Vec<Vec<i128>> = (0..game.profile_count())
        .map(|x| {
            game.payoff(x)
                .iter()
                .map(|p| (p * Q::from_integer(den.clone())).to_integer().to_i128())
                .collect::<Option<Vec<_>>>()
        })
        .collect::<Option<Vec<_>>>()
        .ok_or_else(|| Error::Unsupported("payoffs too large for the pattern search".into()))?;
    let base = &scaled[game.index(&star)];
    let mut examined: u64 = 0;

    for jmask in 1usize..(1 << n) {
        let j: Vec<usize> = (0..n).filter(|&i| jmask >> i & 1 == 1).collect();
        // nonempty subsets of J as bitmasks over players
        let subsets: Vec<usize> = (1usize..(1 << n)).filter(|&t| t & !jmask == 0).collect();
        let subsets_of = |t: usize| -> Vec<usize> { (0..n).filter(|&i| t >> i & 1 == 1).collect() };
        // per subset, admissible action choices for its members
        let mut options: Vec<Vec<Vec<usize>>> = Vec::with_capacity(subsets.len());
        for &t in &subsets {
            let mem = subsets_of(t);
            let sub: Vec<usize> = mem.iter().map(|&i| shape[i]).collect();
            let mut opts = Vec::new();
            for x in 0..sub.iter().product::<usize>() {
                let d = decode_profile(&sub, x);
                let mut p = star.clone();
                for (&i, &r) in mem.iter().zip(&d) {
                    p[i] = (star[i] + r) % shape[i];
                }
                if mem.len() == 1 {
                    let i = mem[0];
                    if scaled[game.index(&p)][i] < base[i] {
                        continue;
                    }
                }
                opts.push(p);
            }
            options.push(opts);
        }
        if options.iter().any(Vec::is_empty) {
            continue;
        }
        let degree = j.len() - 1;
        let mut choice = vec![0usize; subsets.len()];
        loop {
            examined += 1;
            if examined > budget.max_grid_points {
                return Ok(None);
            }
            let play_of = |t: usize| -> &Vec<usize> {
                if t == 0 {
                    &star
                } else {
                    let pos = subsets.iter().position(|&s| s == t).expect("subset");
                    &options[pos][choice[pos]]
                }
            };
            let mut all_ok = true;
            let mut any_nonzero = false;
            for &i in &j {
                let rest: Vec<usize> = j.iter().copied().filter(|&x| x != i).collect();
                let mut diff = vec![0i128; degree + 1];
                for smask in 0usize..(1 << rest.len()) {
                    let s: usize = (0..rest.len()).filter(|&b| smask >> b & 1 == 1).map(|b| 1 << rest[b]).sum();
                    let size = s.count_ones() as usize;
                    let w = bernstein(size, rest.len() - size, degree);
                    let gain = scaled[game.index(play_of(s | 1 << i))][i] - scaled[game.index(play_of(s))][i];
                    for (d, c) in diff.iter_mut().zip(&w) {
                        *d += c * gain;
                    }
                }
                match lowest_sign(&diff) {
                    -1 => {
                        all_ok = false;
                        break;
                    }
                    1 => any_nonzero = true,
                    _ => {}
                }
            }
            if all_ok && any_nonzero {
                let mut counts = vec![0; n];
                for &i in &j {
                    counts[i] = 1;
                }
                let plan = MultiMutationPlan::equal(indifferent_mutants(config, &counts)?)?;
                let inc = config.counts();
                let state = MultiPostEntryState::build(config.clone(), plan, &mut |t| {
                    let mask: usize = (0..n).filter(|&i| t[i] >= inc[i]).map(|i| 1 << i).sum();
                    MixedProfile::pure(shape, play_of(mask))
                })?;
                if let Ok(w) = MultiWitness::new(state, "pure-pattern") {
                    return Ok(Some(w));
                }
            }
            let mut k = choice.len();
            let advanced = loop {
                if k == 0 {
                    break false;
                }
                k -= 1;
                choice[k] += 1;
                if choice[k] < options[k].len() {
                    break true;
                }
                choice[k] = 0;
            };
            if !advanced {
                break;
            }
        }
    }
    Ok(None)
}

/// Play rule for `r` mutants per population realizing a rational payoff
/// point `u = Σ (r_j / r) π(a^j)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AppendixAssignment {
    profiles: Vec<Vec<usize>>,
    multiplicities: Vec<usize>,
    /// `α^1 … α^r` as indices into `profiles`.
    alpha: Vec<usize>,
    u: Vec<Q>,
}

impl AppendixAssignment {
    fn from_parts(game: &Game, parts: Vec<(Vec<usize>, usize)>) -> Result<Self> {
        if parts.is_empty() || parts.iter().any(|p| p.1 == 0) {
            return Err(Error::Infeasible("empty decomposition".into()));
        }
        let r: usize = parts.iter().map(|p| p.1).sum();
        let rq = Q::from_integer(BigInt::from(r));
        let n = game.players();
        let u = (0..n)
            .map(|i| {
                parts
                    .iter()
                    .map(|(a, c)| &game.payoff_of(a)[i] * Q::from_integer(BigInt::from(*c)))
                    .sum::<Q>()
                    / &rq
            })
            .collect();
        let alpha = parts.iter().enumerate().flat_map(|(j, p)| core::iter::repeat_n(j, p.1)).collect();
        Ok(AppendixAssignment {
            profiles: parts.iter().map(|p| p.0.clone()).collect(),
            multiplicities: parts.iter().map(|p| p.1).collect(),
            alpha,
            u,
        })
    }

    /// From a multiset of row-major profile indices.
    pub fn from_indices(game: &Game, idx: &[usize]) -> Result<Self> {
        let mut parts: Vec<(Vec<usize>, usize)> = Vec::new();
        for &x in idx {
            let p = game.decode(x);
            match parts.iter_mut().find(|q| q.0 == p) {
                Some(q) => q.1 += 1,
                None => parts.push((p, 1)),
            }
        }
        AppendixAssignment::from_parts(game, parts)
    }

    /// From rational weights on pure profiles (row-major, summing to 1).
    pub fn from_weights(game: &Game, weights: &[Q]) -> Result<Self> {
        let decomposition: Vec<(Vec<usize>, Q)> = weights
            .iter()
            .enumerate()
            .filter(|(_, w)| w.is_positive())
            .map(|(x, w)| (game.decode(x), w.clone()))
            .collect();
        AppendixAssignment::from_decomposition(game, &decomposition)
    }

    pub fn from_decomposition(game: &Game, decomposition: &[(Vec<usize>, Q)]) -> Result<Self> {
        let total: Q = decomposition.iter().map(|d| d.1.clone()).sum();
        if !total.is_one() || decomposition.iter().any(|d| !d.1.is_positive()) {
            return Err(Error::Input("decomposition weights must be positive and sum to 1".into()));
        }
        let r = decomposition.iter().fold(BigInt::one(), |acc, d| acc.lcm(d.1.denom()));
        if r > BigInt::from(APPENDIX_CELL_LIMIT) {
            return Err(Error::Unsupported(format!("decomposition denominator {r} is too large")));
        }
        let parts = decomposition
            .iter()
            .map(|(a, w)| {
                let c = (w * Q::from_integer(r.clone())).to_integer();
                c.to_usize()
                    .map(|c| (a.clone(), c))
                    .ok_or_else(|| Error::Unsupported("decomposition denominator too large".into()))
            })
            .collect::<Result<Vec<_>>>()?;
        AppendixAssignment::from_parts(game, parts)
    }

    /// Mutants per population.
    pub fn r(&self) -> usize {
        self.alpha.len()
    }

    pub fn profiles(&self) -> &[Vec<usize>] {
        &self.profiles
    }

    pub fn multiplicities(&self) -> &[usize] {
        &self.multiplicities
    }

    pub fn u(&self) -> &[Q] {
        &self.u
    }

    /// `κ(s) ∈ {0,…,r−1}` with `κ ≡ Σ s_i (mod r)`, `s` one-based.
    pub fn kappa(&self, s: &[usize]) -> usize {
        s.iter().sum::<usize>() % self.r()
    }

    /// `α^{κ(s)+1}`.
    pub fn play(&self, s: &[usize]) -> &[usize] {
        &self.profiles[self.alpha[self.kappa(s)]]
    }

    /// `Σ_{s_{−i}} ε^{n−1} π_i(α^{κ(s)+1}) = r^{n−1} ε^{n−1} u_i` for every
    /// population `i` and own index `s_i`.
    pub fn identity_holds(&self, game: &Game) -> bool {
        let n = game.players();
        let r = self.r();
        let others = vec![r; n - 1];
        let count: usize = others.iter().product();
        let rn = Q::from_integer(BigInt::from(r).pow((n - 1) as u32));
        (0..n).all(|i| {
            (1..=r).all(|si| {
                let mut acc = SharePolynomial::zero();
                for y in 0..count {
                    let mut s: Vec<usize> = decode_profile(&others, y).into_iter().map(|x| x + 1).collect();
                    s.insert(i, si);
                    acc = &acc + &SharePolynomial::monomial(game.payoff_of(self.play(&s))[i].clone(), n - 1);
                }
                acc == SharePolynomial::monomial(&rn * &self.u[i], n - 1)
            })
        })
    }

    /// `r` mutants per population with equal shares; all-mutant tuples
    /// follow `κ`, every other tuple copies the base play with mutants
    /// replaced by `bar`.
    pub fn witness(&self, config: &MultiConfiguration, bar: &[usize]) -> Result<MultiWitness> {
        let n = config.players();
        let r = self.r();
        let plan = MultiMutationPlan::equal(indifferent_mutants(config, &vec![r; n])?)?;
        let inc = config.counts();
        let shape = config.game().shape().to_vec();
        let state = MultiPostEntryState::build(config.clone(), plan, &mut |t| {
            if t.iter().zip(&inc).all(|(k, c)| k >= c) {
                let s: Vec<usize> = t.iter().zip(&inc).map(|(k, c)| k - c + 1).collect();
                return MixedProfile::pure(&shape, self.play(&s));
            }
            let u: Vec<usize> = (0..n).map(|i| if t[i] >= inc[i] { bar[i] } else { t[i] }).collect();
            config.play(&u).clone()
        })?;
        MultiWitness::new(state, "rational-coalition").map_err(rejected)
    }
}

const APPENDIX_CELL_LIMIT: u128 = 1 << 16;

/// The assignment for the rational point `u ∈ S_co`, with its identity
/// checked.
pub fn appendix_invader(game: &Game, u: &[Q]) -> Result<AppendixAssignment> {
    let decomposition = geometry::rational_decomposition(game, u)?;
    let a = AppendixAssignment::from_decomposition(game, &decomposition)?;
    let cells = (a.r() as u128).saturating_pow(game.players() as u32);
    if cells > APPENDIX_CELL_LIMIT {
        return Err(Error::Unsupported(format!("decomposition needs r = {} mutants per population", a.r())));
    }
    if a.u() != u {
        return Err(Error::Misuse("decomposition does not reproduce the point".into()));
    }
    if !a.identity_holds(game) {
        return Err(Error::Misuse("κ assignment identity fails".into()));
    }
    Ok(a)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{frac, int};

    #[test]
    fn bernstein_expansion() {
        assert_eq!(bernstein(0, 2, 2), vec![1, -2, 1]);
        assert_eq!(bernstein(1, 1, 2), vec![0, 1, -1]);
    }

    #[test]
    fn appendix_parity() {
        let g = Game::from_ints(&[2, 2], &[&[1, 0], &[0, 0], &[0, 0], &[0, 1]]).unwrap();
        let a = appendix_invader(&g, &[frac(1, 2), frac(1, 2)]).unwrap();
        assert_eq!(a.r(), 2);
        assert_eq!(a.play(&[1, 1]), a.play(&[2, 2]));
        assert_ne!(a.play(&[1, 2]), a.play(&[1, 1]));
        assert_eq!(a.u(), &[frac(1, 2), frac(1, 2)]);
        let one = appendix_invader(&g, &[int(1), int(0)]).unwrap();
        assert_eq!(one.r(), 1);
    }
}
