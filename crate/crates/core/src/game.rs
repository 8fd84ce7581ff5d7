//! Finite strategic games with exact material payoffs.
//!
//! Pure profiles are indexed in row-major order: player 0 is the most
//! significant digit and the last player's action varies fastest.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::rational::{int, Q};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Game {
    actions: Vec<Vec<String>>,
    shape: Vec<usize>,
    strides: Vec<usize>,
    payoffs: Vec<Vec<Q>>,
}

fn strides_of(shape: &[usize]) -> Vec<usize> {
    let mut s = alloc::vec![1; shape.len()];
    for i in (0..shape.len().saturating_sub(1)).rev() {
        s[i] = s[i + 1] * shape[i + 1];
    }
    s
}

impl Game {
    /// Builds a game from action names and a row-major list of payoff vectors.
    pub fn new(actions: Vec<Vec<String>>, payoffs: Vec<Vec<Q>>) -> Result<Self> {
        let n = actions.len();
        if n < 2 {
            return Err(Error::Input(format!("a game needs at least 2 players, got {n}")));
        }
        if let Some(i) = actions.iter().position(Vec::is_empty) {
            return Err(Error::Input(format!("player {} has no actions", i + 1)));
        }
        let shape: Vec<usize> = actions.iter().map(Vec::len).collect();
        let count: usize = shape.iter().product();
        if payoffs.len() != count {
            return Err(Error::Dimension {
                expected: count,
                found: payoffs.len(),
            });
        }
        if let Some(p) = payoffs.iter().find(|p| p.len() != n) {
            return Err(Error::Dimension {
                expected: n,
                found: p.len(),
            });
        }
        let strides = strides_of(&shape);
        Ok(Game {
            actions,
            shape,
            strides,
            payoffs,
        })
    }

    /// Builds a game with generated action names `a{i}{k}` (1-based).
    pub fn from_shape(shape: &[usize], payoffs: Vec<Vec<Q>>) -> Result<Self> {
        let actions = shape
            .iter()
            .enumerate()
            .map(|(i, &k)| (0..k).map(|a| format!("a{}{}", i + 1, a + 1)).collect())
            .collect();
        Game::new(actions, payoffs)
    }

    /// Symmetric two-player game from player 1's matrix: `π1(a,a') = m[a][a']`
    /// and `π2(a,a') = m[a'][a]`. Both players share the action names `a1..ak`.
    pub fn symmetric(m: &[Vec<Q>]) -> Result<Self> {
        let k = m.len();
        if let Some(row) = m.iter().find(|r| r.len() != k) {
            return Err(Error::Dimension {
                expected: k,
                found: row.len(),
            });
        }
        let names: Vec<String> = (0..k).map(|a| format!("a{}", a + 1)).collect();
        let mut payoffs = Vec::with_capacity(k * k);
        for a in 0..k {
            for b in 0..k {
                payoffs.push(alloc::vec![m[a][b].clone(), m[b][a].clone()]);
            }
        }
        Game::new(alloc::vec![names.clone(), names], payoffs)
    }

    /// The symmetric 2×2 game with `π1(a1,a1)=A`, `π1(a1,a2)=B`,
    /// `π1(a2,a1)=C`, `π1(a2,a2)=D`.
    pub fn symmetric_2x2(a: Q, b: Q, c: Q, d: Q) -> Self {
        Game::symmetric(&[alloc::vec![a, b], alloc::vec![c, d]]).expect("2x2 shape is valid")
    }

    /// Two-player game from the two payoff matrices.
    pub fn bimatrix(p1: &[Vec<Q>], p2: &[Vec<Q>]) -> Result<Self> {
        let rows = p1.len();
        let cols = p1.first().map_or(0, Vec::len);
        if p2.len() != rows || p1.iter().chain(p2).any(|r| r.len() != cols) {
            return Err(Error::Input("bimatrix payoff matrices differ in shape".into()));
        }
        let mut payoffs = Vec::with_capacity(rows * cols);
        for a in 0..rows {
            for b in 0..cols {
                payoffs.push(alloc::vec![p1[a][b].clone(), p2[a][b].clone()]);
            }
        }
        Game::from_shape(&[rows, cols], payoffs)
    }

    /// Integer-payoff convenience constructor over generated action names.
    pub fn from_ints(shape: &[usize], payoffs: &[&[i64]]) -> Result<Self> {
        Game::from_shape(
            shape,
            payoffs.iter().map(|p| p.iter().map(|&x| int(x)).collect()).collect(),
        )
    }

    pub fn players(&self) -> usize {
        self.shape.len()
    }

    pub fn shape(&self) -> &[usize] {
        &self.shape
    }

    pub fn actions(&self, player: usize) -> &[String] {
        &self.actions[player]
    }

    pub fn action_names(&self) -> &[Vec<String>] {
        &self.actions
    }

    pub fn profile_count(&self) -> usize {
        self.payoffs.len()
    }

    pub fn index(&self, profile: &[usize]) -> usize {
        profile_index(&self.strides, profile)
    }

    pub fn decode(&self, index: usize) -> Vec<usize> {
        decode_profile(&self.shape, index)
    }

    /// Payoff vector of the pure profile with the given index.
    pub fn payoff(&self, index: usize) -> &[Q] {
        &self.payoffs[index]
    }

    pub fn payoff_of(&self, profile: &[usize]) -> &[Q] {
        &self.payoffs[self.index(profile)]
    }

    pub fn payoffs(&self) -> &[Vec<Q>] {
        &self.payoffs
    }

    /// Human-readable name of a pure profile, e.g. `(a12,a22)`.
    pub fn profile_name(&self, profile: &[usize]) -> String {
        let parts: Vec<&str> = profile
            .iter()
            .enumerate()
            .map(|(i, &a)| self.actions[i][a].as_str())
            .collect();
        format!("({})", parts.join(","))
    }
}

pub(crate) fn profile_index(strides: &[usize], profile: &[usize]) -> usize {
    profile.iter().zip(strides).map(|(a, s)| a * s).sum()
}

/// Decodes a row-major index over `shape`.
pub fn decode_profile(shape: &[usize], mut index: usize) -> Vec<usize> {
    let mut out = alloc::vec![0; shape.len()];
    for i in (0..shape.len()).rev() {
        out[i] = index % shape[i];
        index /= shape[i];
    }
    out
}

/// Row-major index over `shape`.
pub fn encode_profile(shape: &[usize], profile: &[usize]) -> usize {
    profile
        .iter()
        .zip(shape)
        .fold(0, |acc, (&a, &k)| acc * k + a)
}

/// A probability distribution over one player's actions.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct MixedStrategy {
    weights: Vec<Q>,
}

impl MixedStrategy {
    pub fn new(weights: Vec<Q>) -> Result<Self> {
        if weights.is_empty() {
            return Err(Error::Input("empty mixed strategy".into()));
        }
        if weights.iter().any(Signed::is_negative) {
            return Err(Error::Input("mixed strategy has a negative weight".into()));
        }
        let total: Q = weights.iter().sum();
        if !total.is_one() {
            return Err(Error::Input(format!("mixed strategy weights sum to {total}, not 1")));
        }
        Ok(MixedStrategy { weights })
    }

    pub fn pure(len: usize, action: usize) -> Self {
        let mut weights = alloc::vec![Q::zero(); len];
        weights[action] = Q::one();
        MixedStrategy { weights }
    }

    pub fn uniform(len: usize) -> Self {
        let w = Q::new(1.into(), (len as i64).into());
        MixedStrategy {
            weights: alloc::vec![w; len],
        }
    }

    /// The 2-action strategy `(p, 1-p)`.
    pub fn binary(p: Q) -> Result<Self> {
        let rest = Q::one() - &p;
        MixedStrategy::new(alloc::vec![p, rest])
    }

    pub fn weights(&self) -> &[Q] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn prob(&self, action: usize) -> &Q {
        &self.weights[action]
    }

    pub fn support(&self) -> Vec<usize> {
        (0..self.weights.len())
            .filter(|&a| !self.weights[a].is_zero())
            .collect()
    }

    /// The action played with certainty, if any.
    pub fn as_pure(&self) -> Option<usize> {
        self.weights.iter().position(One::is_one)
    }
}

/// One mixed strategy per player.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct MixedProfile {
    strategies: Vec<MixedStrategy>,
}

impl MixedProfile {
    pub fn new(strategies: Vec<MixedStrategy>) -> Self {
        MixedProfile { strategies }
    }

    pub fn pure(shape: &[usize], profile: &[usize]) -> Self {
        MixedProfile {
            strategies: shape
                .iter()
                .zip(profile)
                .map(|(&k, &a)| MixedStrategy::pure(k, a))
                .collect(),
        }
    }

    pub fn strategies(&self) -> &[MixedStrategy] {
        &self.strategies
    }

    pub fn strategy(&self, player: usize) -> &MixedStrategy {
        &self.strategies[player]
    }

    pub fn players(&self) -> usize {
        self.strategies.len()
    }

    pub fn as_pure(&self) -> Option<Vec<usize>> {
        self.strategies.iter().map(MixedStrategy::as_pure).collect()
    }

    /// Copy with player `i`'s strategy replaced.
    pub fn with(&self, i: usize, s: MixedStrategy) -> Self {
        let mut p = self.clone();
        p.strategies[i] = s;
        p
    }

    pub(crate) fn check(&self, shape: &[usize]) -> Result<()> {
        if self.strategies.len() != shape.len() {
            return Err(Error::Dimension {
                expected: shape.len(),
                found: self.strategies.len(),
            });
        }
        for (s, &k) in self.strategies.iter().zip(shape) {
            if s.len() != k {
                return Err(Error::Dimension {
                    expected: k,
                    found: s.len(),
                });
            }
        }
        Ok(())
    }
}

/// A distribution over pure profiles, indexed row-major.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CorrelatedStrategy {
    weights: Vec<Q>,
}

impl CorrelatedStrategy {
    pub fn new(weights: Vec<Q>) -> Result<Self> {
        if weights.iter().any(Signed::is_negative) {
            return Err(Error::Input("correlated strategy has a negative weight".into()));
        }
        let total: Q = weights.iter().sum();
        if !total.is_one() {
            return Err(Error::Input(format!(
                "correlated strategy weights sum to {total}, not 1"
            )));
        }
        Ok(CorrelatedStrategy { weights })
    }

    pub fn point(len: usize, index: usize) -> Self {
        let mut weights = alloc::vec![Q::zero(); len];
        weights[index] = Q::one();
        CorrelatedStrategy { weights }
    }

    pub fn weights(&self) -> &[Q] {
        &self.weights
    }

    pub(crate) fn from_raw(weights: Vec<Q>) -> Self {
        CorrelatedStrategy { weights }
    }
}

/// Visits every pure profile of positive probability under the product of
/// `strategies`, passing its row-major index and probability.
pub(crate) fn for_each_weighted(
    shape: &[usize],
    strategies: &[&[Q]],
    visit: &mut dyn FnMut(usize, &Q),
) {
    fn go(
        shape: &[usize],
        strategies: &[&[Q]],
        depth: usize,
        index: usize,
        weight: Q,
        visit: &mut dyn FnMut(usize, &Q),
    ) {
        if depth == shape.len() {
            visit(index, &weight);
            return;
        }
        for a in 0..shape[depth] {
            let w = &strategies[depth][a];
            if w.is_zero() {
                continue;
            }
            go(
                shape,
                strategies,
                depth + 1,
                index * shape[depth] + a,
                &weight * w,
                visit,
            );
        }
    }
    go(shape, strategies, 0, 0, Q::one(), visit);
}

fn weight_slices(profile: &MixedProfile) -> Vec<&[Q]> {
    profile.strategies.iter().map(MixedStrategy::weights).collect()
}

/// `(π_1(σ),…,π_n(σ))` by exact multilinear expansion.
pub fn expected_payoff(game: &Game, profile: &MixedProfile) -> Result<Vec<Q>> {
    profile.check(game.shape())?;
    let mut acc = alloc::vec![Q::zero(); game.players()];
    for_each_weighted(game.shape(), &weight_slices(profile), &mut |i, w| {
        for (a, p) in acc.iter_mut().zip(game.payoff(i)) {
            *a += w * p;
        }
    });
    Ok(acc)
}

/// Expectation of the payoff vector under a correlated strategy.
pub fn correlated_payoff(game: &Game, phi: &CorrelatedStrategy) -> Result<Vec<Q>> {
    if phi.weights.len() != game.profile_count() {
        return Err(Error::Dimension {
            expected: game.profile_count(),
            found: phi.weights.len(),
        });
    }
    let mut acc = alloc::vec![Q::zero(); game.players()];
    for (i, w) in phi.weights.iter().enumerate() {
        if w.is_zero() {
            continue;
        }
        for (a, p) in acc.iter_mut().zip(game.payoff(i)) {
            *a += w * p;
        }
    }
    Ok(acc)
}

/// `φ_σ(a) = ∏ σ_i(a_i)`.
pub fn induced_correlated(profile: &MixedProfile) -> CorrelatedStrategy {
    let shape: Vec<usize> = profile.strategies.iter().map(MixedStrategy::len).collect();
    let mut weights = alloc::vec![Q::zero(); shape.iter().product()];
    for_each_weighted(&shape, &weight_slices(profile), &mut |i, w| {
        weights[i] = w.clone()
    });
    CorrelatedStrategy { weights }
}

/// Two players, identical action lists, and `π2(a,a') = π1(a',a)`.
pub fn is_symmetric(game: &Game) -> bool {
    if game.players() != 2 || game.actions(0) != game.actions(1) {
        return false;
    }
    let k = game.shape()[0];
    (0..k).all(|a| (0..k).all(|b| game.payoff_of(&[a, b])[1] == game.payoff_of(&[b, a])[0]))
}
