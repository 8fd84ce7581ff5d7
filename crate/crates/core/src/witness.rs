//! Witnesses of instability and their independent verification.
//!
//! A witness is a post-entry state along a one-parameter share family. It
//! refutes stability when, for every small `ε > 0`: (a) incumbent play is
//! unchanged, (b) every match is an equilibrium of the subjective game,
//! (c) no mutant is strictly below all incumbents of its population, and
//! (d) fitnesses within some population are not all equal.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

use crate::error::Result;
use crate::multi::MultiPostEntryState;
use crate::poly::{SharePolynomial, Sign};
use crate::single::{MutationPlan, PostEntryState};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Clause {
    Focality,
    Equilibrium,
    WipedOut,
    Coexistence,
}

impl Clause {
    pub fn letter(self) -> char {
        match self {
            Clause::Focality => 'a',
            Clause::Equilibrium => 'b',
            Clause::WipedOut => 'c',
            Clause::Coexistence => 'd',
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Rejection {
    pub clause: Clause,
    pub detail: String,
}

impl fmt::Display for Rejection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "clause ({}) fails: {}", self.clause.letter(), self.detail)
    }
}

/// `Π_mutant − Π_incumbent` within one population.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Difference {
    pub population: usize,
    pub mutant: String,
    pub incumbent: String,
    pub polynomial: SharePolynomial,
}

impl Difference {
    pub fn sign(&self) -> Sign {
        self.polynomial.sign_near_zero()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Evidence {
    /// `(population, type id, fitness)` for every post-entry type.
    pub fitness: Vec<(usize, String, SharePolynomial)>,
    /// Each mutant against the weakest incumbent of its population near 0⁺.
    pub differences: Vec<Difference>,
    /// A pair of types whose fitnesses differ, refuting coexistence.
    pub separating: Difference,
}

/// Index of the smallest polynomial near `0⁺` (first on ties).
fn weakest(polys: &[&SharePolynomial]) -> usize {
    let mut best = 0;
    for k in 1..polys.len() {
        if (polys[k] - polys[best]).sign_near_zero() == Sign::Negative {
            best = k;
        }
    }
    best
}

/// Checks clauses (c) and (d) for fitness lists grouped by population;
/// `groups[i]` holds `(id, fitness, is_mutant)`.
fn check_fitness(groups: &[Vec<(String, SharePolynomial, bool)>]) -> core::result::Result<Evidence, Rejection> {
    let mut differences = Vec::new();
    for (i, g) in groups.iter().enumerate() {
        let inc: Vec<&(String, SharePolynomial, bool)> = g.iter().filter(|t| !t.2).collect();
        let polys: Vec<&SharePolynomial> = inc.iter().map(|t| &t.1).collect();
        let w = weakest(&polys);
        for m in g.iter().filter(|t| t.2) {
            let d = Difference {
                population: i,
                mutant: m.0.clone(),
                incumbent: inc[w].0.clone(),
                polynomial: &m.1 - &inc[w].1,
            };
            if d.sign() == Sign::Negative {
                return Err(Rejection {
                    clause: Clause::WipedOut,
                    detail: format!(
                        "mutant `{}` is below every incumbent of population {} ({} against `{}`)",
                        d.mutant,
                        i + 1,
                        d.polynomial,
                        d.incumbent
                    ),
                });
            }
            differences.push(d);
        }
    }
    let mut separating = None;
    'outer: for (i, g) in groups.iter().enumerate() {
        for x in 0..g.len() {
            for y in x + 1..g.len() {
                let p = &g[y].1 - &g[x].1;
                if !p.is_zero() {
                    // Report mutant-minus-incumbent when possible.
                    let (a, b, p) = if g[x].2 && !g[y].2 { (x, y, -p) } else { (y, x, p) };
                    separating = Some(Difference {
                        population: i,
                        mutant: g[a].0.clone(),
                        incumbent: g[b].0.clone(),
                        polynomial: p,
                    });
                    break 'outer;
                }
            }
        }
    }
    let separating = separating.ok_or_else(|| Rejection {
        clause: Clause::Coexistence,
        detail: "all fitnesses within each population coincide".to_string(),
    })?;
    let fitness = groups
        .iter()
        .enumerate()
        .flat_map(|(i, g)| g.iter().map(move |t| (i, t.0.clone(), t.1.clone())))
        .collect();
    Ok(Evidence {
        fitness,
        differences,
        separating,
    })
}

pub fn verify_single(state: &PostEntryState) -> core::result::Result<Evidence, Rejection> {
    if let Some((i, j)) = state.focality_violation() {
        return Err(Rejection {
            clause: Clause::Focality,
            detail: format!("play between incumbents `{}` and `{}` changed", state.id(i), state.id(j)),
        });
    }
    match state.equilibrium_violation() {
        Ok(None) => {}
        Ok(Some((i, j))) => {
            return Err(Rejection {
                clause: Clause::Equilibrium,
                detail: format!("`{}` does not best-respond against `{}`", state.id(i), state.id(j)),
            })
        }
        Err(e) => {
            return Err(Rejection {
                clause: Clause::Equilibrium,
                detail: e.to_string(),
            })
        }
    }
    let k = state.incumbents();
    let group = (0..state.len())
        .map(|i| (state.id(i).to_string(), state.fitness(i), i >= k))
        .collect();
    check_fitness(&[group])
}

pub fn verify_multi(state: &MultiPostEntryState) -> core::result::Result<Evidence, Rejection> {
    if let Some(t) = state.focality_violation() {
        return Err(Rejection {
            clause: Clause::Focality,
            detail: format!("play at incumbent tuple {} changed", state.tuple_name(&t)),
        });
    }
    match state.equilibrium_violation() {
        Ok(None) => {}
        Ok(Some(t)) => {
            return Err(Rejection {
                clause: Clause::Equilibrium,
                detail: format!("play at {} is not an equilibrium", state.tuple_name(&t)),
            })
        }
        Err(e) => {
            return Err(Rejection {
                clause: Clause::Equilibrium,
                detail: e.to_string(),
            })
        }
    }
    let groups: Vec<Vec<(String, SharePolynomial, bool)>> = (0..state.populations())
        .map(|i| {
            (0..state.counts()[i])
                .map(|k| (state.id(i, k).to_string(), state.fitness(i, k), state.is_mutant(i, k)))
                .collect()
        })
        .collect();
    check_fitness(&groups)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SingleWitness {
    pub state: PostEntryState,
    /// Which construction produced the witness.
    pub construction: String,
    pub evidence: Evidence,
}

impl SingleWitness {
    pub fn new(state: PostEntryState, construction: impl Into<String>) -> core::result::Result<Self, Rejection> {
        let evidence = verify_single(&state)?;
        Ok(SingleWitness {
            state,
            construction: construction.into(),
            evidence,
        })
    }

    pub fn order(&self) -> u32 {
        self.state.order()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MultiWitness {
    pub state: MultiPostEntryState,
    pub construction: String,
    pub evidence: Evidence,
}

impl MultiWitness {
    pub fn new(state: MultiPostEntryState, construction: impl Into<String>) -> core::result::Result<Self, Rejection> {
        let evidence = verify_multi(&state)?;
        Ok(MultiWitness {
            state,
            construction: construction.into(),
            evidence,
        })
    }

    pub fn order(&self) -> u32 {
        self.state.order()
    }
}

/// An id not used by any type of the state.
pub(crate) fn fresh_id(base: &str, taken: &dyn Fn(&str) -> bool) -> String {
    let mut n = 2;
    loop {
        let id = format!("{base}~{n}");
        if !taken(&id) {
            return id;
        }
        n += 1;
    }
}

/// Adds a copy of mutant `s` (index among mutants) that behaves exactly
/// like it, splitting its share in two.
pub fn duplicate_single(state: &PostEntryState, s: usize) -> Result<PostEntryState> {
    let k = state.incumbents();
    let src = k + s;
    let mutants = state.plan().mutants();
    let id = fresh_id(mutants[s].id(), &|x| state.index_of(x).is_some());
    let mut new_mutants = mutants.to_vec();
    new_mutants.push(mutants[s].renamed(id));
    let family = state.plan().family().split(s, 2);
    let n = state.len();
    let map = |i: usize| if i == n { src } else { i };
    let play = (0..=n)
        .map(|i| (0..=n).map(|j| state.play(map(i), map(j)).clone()).collect())
        .collect();
    PostEntryState::assemble(state.base().clone(), MutationPlan::new(new_mutants, family)?, play)
}

/// Duplicates the first mutant until the witness reaches `order`.
pub fn extend_single(w: &SingleWitness, order: u32) -> Result<SingleWitness> {
    let mut state = w.state.clone();
    while state.order() < order {
        state = duplicate_single(&state, 0)?;
    }
    if state.order() == w.order() {
        return Ok(w.clone());
    }
    SingleWitness::new(state, w.construction.clone())
        .map_err(|r| crate::error::Error::Misuse(format!("duplicated witness rejected: {r}")))
}

/// Duplicates a mutant of the population with the most mutants until the
/// order reaches `order`.
pub fn extend_multi(w: &MultiWitness, order: u32) -> Result<MultiWitness> {
    let mut state = w.state.clone();
    while state.order() < order {
        let counts = state.plan().counts();
        let max = counts.iter().copied().max().unwrap_or(0);
        let pop = counts.iter().position(|&c| c == max).unwrap_or(0);
        state = state.duplicate(pop, 0)?;
    }
    if state.order() == w.order() {
        return Ok(w.clone());
    }
    MultiWitness::new(state, w.construction.clone())
        .map_err(|r| crate::error::Error::Misuse(format!("duplicated witness rejected: {r}")))
}
