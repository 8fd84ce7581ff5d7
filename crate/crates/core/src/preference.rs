//! Preference types, best responses and equilibria of subjective games.
//!
//! A type's utility table is written from the point of view of its `seat`:
//! single-population types use seat 0 (own action first), a type in
//! population `i` of a multi-population model uses seat `i`. In a two-player
//! match a seat-0 table placed at position 1 is read with the coordinates
//! swapped.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use num_traits::{One, Signed, Zero};

use crate::budget::Budget;
use crate::error::{Error, Result};
use crate::game::{decode_profile, encode_profile, for_each_weighted, MixedProfile, MixedStrategy};
use crate::linalg::{self, Solution};
use crate::lp::{self, LpResult};
use crate::rational::Q;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TypeTag {
    General,
    Indifferent,
    Dominant(usize),
    Coordination,
    MixedSupporter(Q),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PreferenceType {
    id: String,
    seat: usize,
    shape: Vec<usize>,
    utility: Vec<Q>,
    tag: TypeTag,
}

impl PreferenceType {
    pub fn new(
        id: impl Into<String>,
        shape: &[usize],
        seat: usize,
        utility: Vec<Q>,
        tag: TypeTag,
    ) -> Result<Self> {
        let id = id.into();
        if shape.len() < 2 || seat >= shape.len() {
            return Err(Error::Input(format!("type `{id}`: seat {seat} outside the game")));
        }
        let count: usize = shape.iter().product();
        if utility.len() != count {
            return Err(Error::Dimension {
                expected: count,
                found: utility.len(),
            });
        }
        let t = PreferenceType {
            id,
            seat,
            shape: shape.to_vec(),
            utility,
            tag,
        };
        match &t.tag {
            TypeTag::Indifferent if !t.is_constant() => {
                return Err(Error::Input(format!(
                    "type `{}` is tagged indifferent but its utility is not constant",
                    t.id
                )))
            }
            TypeTag::Dominant(a) if t.strictly_dominant() != Some(*a) => {
                return Err(Error::Input(format!(
                    "type `{}` is tagged dominant({}) but that action is not strictly dominant",
                    t.id,
                    a + 1
                )))
            }
            _ => {}
        }
        Ok(t)
    }

    pub fn general(id: impl Into<String>, shape: &[usize], seat: usize, utility: Vec<Q>) -> Result<Self> {
        PreferenceType::new(id, shape, seat, utility, TypeTag::General)
    }

    pub fn id(&self) -> &str {
        &self.id
    }

    pub fn seat(&self) -> usize {
        self.seat
    }

    pub fn shape(&self) -> &[usize] {
        &self.shape
    }

    pub fn utility(&self) -> &[Q] {
        &self.utility
    }

    pub fn tag(&self) -> &TypeTag {
        &self.tag
    }

    /// Same preferences under a different identifier.
    pub fn renamed(&self, id: impl Into<String>) -> Self {
        PreferenceType {
            id: id.into(),
            ..self.clone()
        }
    }

    pub fn is_constant(&self) -> bool {
        self.utility.windows(2).all(|w| w[0] == w[1])
    }

    /// The own action that strictly beats every other against every pure
    /// profile of the others, if there is one.
    pub fn strictly_dominant(&self) -> Option<usize> {
        let k = self.shape[self.seat];
        let others: usize = self.shape.iter().product::<usize>() / k;
        'cand: for a in 0..k {
            for rest in 0..others {
                let base = self.with_own(rest, a);
                for b in (0..k).filter(|&b| b != a) {
                    if self.utility[base] <= self.utility[self.with_own(rest, b)] {
                        continue 'cand;
                    }
                }
            }
            return Some(a);
        }
        None
    }

    /// Index of the profile obtained by inserting own action `a` into the
    /// `rest`-th profile of the other players.
    fn with_own(&self, rest: usize, a: usize) -> usize {
        let others: Vec<usize> = self
            .shape
            .iter()
            .enumerate()
            .filter(|&(i, _)| i != self.seat)
            .map(|(_, &k)| k)
            .collect();
        let mut partial = decode_profile(&others, rest);
        partial.insert(self.seat, a);
        encode_profile(&self.shape, &partial)
    }

    /// The utility table in player order when this type sits at `position`.
    pub fn table_at(&self, position: usize) -> Result<Vec<Q>> {
        if position == self.seat {
            return Ok(self.utility.clone());
        }
        if self.shape.len() != 2 || self.shape[0] != self.shape[1] || position > 1 {
            return Err(Error::Input(format!(
                "type `{}` belongs to seat {} and cannot play at position {}",
                self.id,
                self.seat + 1,
                position + 1
            )));
        }
        let k = self.shape[0];
        let mut t = Vec::with_capacity(k * k);
        for a in 0..k {
            for b in 0..k {
                t.push(self.utility[b * k + a].clone());
            }
        }
        Ok(t)
    }
}

/// Type whose utility is 1 when its own action is `a`, else 0.
pub fn make_dominant_type(id: impl Into<String>, shape: &[usize], seat: usize, a: usize) -> Result<PreferenceType> {
    let count: usize = shape.iter().product();
    if seat >= shape.len() || a >= shape[seat] {
        return Err(Error::Input("dominant action outside the game".into()));
    }
    let utility = (0..count)
        .map(|i| {
            if decode_profile(shape, i)[seat] == a {
                Q::one()
            } else {
                Q::zero()
            }
        })
        .collect();
    PreferenceType::new(id, shape, seat, utility, TypeTag::Dominant(a))
}

/// Constant-zero utility.
pub fn make_indifferent_type(id: impl Into<String>, shape: &[usize], seat: usize) -> Result<PreferenceType> {
    let count: usize = shape.iter().product();
    PreferenceType::new(id, shape, seat, alloc::vec![Q::zero(); count], TypeTag::Indifferent)
}

/// Two-player type with utility 1 when the actions match, else 0.
pub fn make_coordination_type(id: impl Into<String>, actions: usize) -> Result<PreferenceType> {
    let mut utility = Vec::with_capacity(actions * actions);
    for a in 0..actions {
        for b in 0..actions {
            utility.push(if a == b { Q::one() } else { Q::zero() });
        }
    }
    PreferenceType::new(id, &[actions, actions], 0, utility, TypeTag::Coordination)
}

/// Two-action type with `θ(a1,a1) = 1−α`, `θ(a2,a2) = α`, zero elsewhere.
pub fn make_mixed_supporter(id: impl Into<String>, alpha: Q) -> Result<PreferenceType> {
    if alpha.is_negative() || alpha > Q::one() {
        return Err(Error::Input(format!("mixed-supporter weight {alpha} is outside [0,1]")));
    }
    let utility = alloc::vec![Q::one() - &alpha, Q::zero(), Q::zero(), alpha.clone()];
    PreferenceType::new(id, &[2, 2], 0, utility, TypeTag::MixedSupporter(alpha))
}

/// Pure actions maximizing `θ`'s expected utility at `position` against the
/// other entries of `profile` (the entry at `position` is ignored). The full
/// best-response set is every mixture over the returned actions.
pub fn best_response_set(theta: &PreferenceType, position: usize, profile: &MixedProfile) -> Result<Vec<usize>> {
    profile.check(theta.shape())?;
    let table = theta.table_at(position)?;
    Ok(best_responses_in(theta.shape(), &table, position, profile))
}

fn action_values(shape: &[usize], table: &[Q], player: usize, profile: &MixedProfile) -> Vec<Q> {
    let mut slices: Vec<&[Q]> = profile.strategies().iter().map(MixedStrategy::weights).collect();
    let k = shape[player];
    let pure: Vec<MixedStrategy> = (0..k).map(|a| MixedStrategy::pure(k, a)).collect();
    (0..k)
        .map(|a| {
            slices[player] = pure[a].weights();
            let mut acc = Q::zero();
            for_each_weighted(shape, &slices, &mut |i, w| acc += w * &table[i]);
            acc
        })
        .collect()
}

fn best_responses_in(shape: &[usize], table: &[Q], player: usize, profile: &MixedProfile) -> Vec<usize> {
    let vals = action_values(shape, table, player, profile);
    let best = vals.iter().max().cloned().unwrap_or_else(Q::zero);
    (0..vals.len()).filter(|&a| vals[a] == best).collect()
}

/// The strategic game played by a matched type profile, with each player's
/// payoff given by its type's utility.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubjectiveGame {
    ids: Vec<String>,
    shape: Vec<usize>,
    tables: Vec<Vec<Q>>,
}

/// One equilibrium found by enumeration.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Equilibrium {
    pub profile: MixedProfile,
    pub supports: Vec<Vec<usize>>,
    /// The support pair carries a continuum of equilibria; `profile` is one
    /// representative with exactly these supports.
    pub family: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EquilibriumSet {
    pub equilibria: Vec<Equilibrium>,
    /// Enumeration stopped at the budget.
    pub partial: bool,
}

impl SubjectiveGame {
    /// Places `types[k]` at position `k`.
    pub fn new(types: &[&PreferenceType]) -> Result<Self> {
        let shape = types
            .first()
            .ok_or_else(|| Error::Input("empty type profile".into()))?
            .shape()
            .to_vec();
        if types.len() != shape.len() {
            return Err(Error::Dimension {
                expected: shape.len(),
                found: types.len(),
            });
        }
        let mut tables = Vec::with_capacity(types.len());
        for (k, t) in types.iter().enumerate() {
            if t.shape() != shape.as_slice() {
                return Err(Error::Input(format!("type `{}` uses a different game", t.id())));
            }
            tables.push(t.table_at(k)?);
        }
        Ok(SubjectiveGame {
            ids: types.iter().map(|t| String::from(t.id())).collect(),
            shape,
            tables,
        })
    }

    pub fn shape(&self) -> &[usize] {
        &self.shape
    }

    pub fn ids(&self) -> &[String] {
        &self.ids
    }

    pub fn best_responses(&self, player: usize, profile: &MixedProfile) -> Vec<usize> {
        best_responses_in(&self.shape, &self.tables[player], player, profile)
    }

    /// First player whose strategy puts weight outside its best responses.
    pub fn first_deviator(&self, profile: &MixedProfile) -> Result<Option<usize>> {
        profile.check(&self.shape)?;
        for i in 0..self.shape.len() {
            let br = self.best_responses(i, profile);
            if profile.strategy(i).support().iter().any(|a| !br.contains(a)) {
                return Ok(Some(i));
            }
        }
        Ok(None)
    }

    pub fn is_equilibrium(&self, profile: &MixedProfile) -> Result<bool> {
        Ok(self.first_deviator(profile)?.is_none())
    }

    /// Every pure Nash equilibrium, in row-major order.
    pub fn pure_equilibria(&self) -> Vec<Vec<usize>> {
        let count: usize = self.shape.iter().product();
        (0..count)
            .map(|i| decode_profile(&self.shape, i))
            .filter(|p| {
                let prof = MixedProfile::pure(&self.shape, p);
                self.first_deviator(&prof).ok().flatten().is_none()
            })
            .collect()
    }

    /// Candidates (e.g. mixed profiles for three or more players) that are
    /// equilibria.
    pub fn verify_candidates(&self, candidates: &[MixedProfile]) -> Result<Vec<MixedProfile>> {
        let mut out = Vec::new();
        for c in candidates {
            if self.is_equilibrium(c)? {
                out.push(c.clone());
            }
        }
        Ok(out)
    }

    /// Two players: support enumeration over support pairs in lexicographic
    /// bitmask order. More players: pure equilibria only.
    pub fn equilibria(&self, budget: &Budget) -> EquilibriumSet {
        if self.shape.len() != 2 {
            return EquilibriumSet {
                equilibria: self
                    .pure_equilibria()
                    .into_iter()
                    .map(|p| Equilibrium {
                        supports: p.iter().map(|&a| alloc::vec![a]).collect(),
                        profile: MixedProfile::pure(&self.shape, &p),
                        family: false,
                    })
                    .collect(),
                partial: false,
            };
        }
        let (m, k) = (self.shape[0], self.shape[1]);
        let mut out = Vec::new();
        let mut examined = 0u64;
        let mut partial = false;
        'outer: for rows in 1u64..(1 << m) {
            for cols in 1u64..(1 << k) {
                if examined >= budget.max_support_pairs {
                    partial = true;
                    break 'outer;
                }
                examined += 1;
                let i_set = bits(rows, m);
                let j_set = bits(cols, k);
                // Column player's mix makes the row player indifferent on I.
                let Some((y, fy)) = self.indifference_mix(0, &i_set, &j_set) else {
                    continue;
                };
                let Some((x, fx)) = self.indifference_mix(1, &j_set, &i_set) else {
                    continue;
                };
                let profile = MixedProfile::new(alloc::vec![x, y]);
                debug_assert!(self.is_equilibrium(&profile).unwrap_or(false));
                out.push(Equilibrium {
                    profile,
                    supports: alloc::vec![i_set, j_set],
                    family: fx || fy,
                });
            }
        }
        EquilibriumSet {
            equilibria: out,
            partial,
        }
    }

    /// Finds a strategy of the opponent of `player`, with support exactly
    /// `opp_support`, against which every action of `own_support` is a best
    /// response for `player`. The flag reports a non-unique solution set.
    fn indifference_mix(
        &self,
        player: usize,
        own_support: &[usize],
        opp_support: &[usize],
    ) -> Option<(MixedStrategy, bool)> {
        let opp = 1 - player;
        let table = &self.tables[player];
        let k_own = self.shape[player];
        let k_opp = self.shape[opp];
        let u = |own: usize, o: usize| -> &Q {
            let p = if player == 0 { [own, o] } else { [o, own] };
            &table[encode_profile(&self.shape, &p)]
        };
        let nj = opp_support.len();
        // Unknowns: weights on opp_support, then the common value v.
        let mut a = Vec::new();
        let mut b = Vec::new();
        for &i in own_support {
            let mut row: Vec<Q> = opp_support.iter().map(|&j| u(i, j).clone()).collect();
            row.push(-Q::one());
            a.push(row);
            b.push(Q::zero());
        }
        let mut sum_row = alloc::vec![Q::one(); nj];
        sum_row.push(Q::zero());
        a.push(sum_row);
        b.push(Q::one());
        let outside: Vec<usize> = (0..k_own).filter(|i| !own_support.contains(i)).collect();
        let build = |w: &[Q]| {
            let mut full = alloc::vec![Q::zero(); k_opp];
            for (&j, x) in opp_support.iter().zip(w) {
                full[j] = x.clone();
            }
            MixedStrategy::new(full).ok()
        };
        match linalg::solve(&a, &b) {
            Solution::Inconsistent => None,
            Solution::Unique(sol) => {
                let (w, v) = sol.split_at(nj);
                if w.iter().any(|x| !x.is_positive()) {
                    return None;
                }
                for &i in &outside {
                    let val: Q = opp_support.iter().zip(w).map(|(&j, x)| u(i, j) * x).sum();
                    if val > v[0] {
                        return None;
                    }
                }
                build(w).map(|s| (s, false))
            }
            Solution::Many { .. } => {
                // maximize t subject to the indifference system, w_j - t >= 0,
                // and no profitable action outside the support.
                // Variables: w (nj), v+ , v-, t, slack_j (nj), slack_out (|outside|).
                let no = outside.len();
                let n = nj + 3 + nj + no;
                let (vp, vm, t) = (nj, nj + 1, nj + 2);
                let mut rows = Vec::new();
                let mut rhs = Vec::new();
                for &i in own_support {
                    let mut r = alloc::vec![Q::zero(); n];
                    for (c, &j) in opp_support.iter().enumerate() {
                        r[c] = u(i, j).clone();
                    }
                    r[vp] = -Q::one();
                    r[vm] = Q::one();
                    rows.push(r);
                    rhs.push(Q::zero());
                }
                let mut r = alloc::vec![Q::zero(); n];
                for x in r.iter_mut().take(nj) {
                    *x = Q::one();
                }
                rows.push(r);
                rhs.push(Q::one());
                for c in 0..nj {
                    let mut r = alloc::vec![Q::zero(); n];
                    r[c] = Q::one();
                    r[t] = -Q::one();
                    r[nj + 3 + c] = -Q::one();
                    rows.push(r);
                    rhs.push(Q::zero());
                }
                for (o, &i) in outside.iter().enumerate() {
                    let mut r = alloc::vec![Q::zero(); n];
                    for (c, &j) in opp_support.iter().enumerate() {
                        r[c] = -u(i, j).clone();
                    }
                    r[vp] = Q::one();
                    r[vm] = -Q::one();
                    r[nj + 3 + nj + o] = -Q::one();
                    rows.push(r);
                    rhs.push(Q::zero());
                }
                let mut cost = alloc::vec![Q::zero(); n];
                cost[t] = Q::one();
                match lp::maximize(&rows, &rhs, &cost) {
                    LpResult::Optimal { x, value } if value.is_positive() => {
                        build(&x[..nj]).map(|s| (s, true))
                    }
                    _ => None,
                }
            }
        }
    }
}

fn bits(mask: u64, len: usize) -> Vec<usize> {
    (0..len).filter(|&i| mask & (1 << i) != 0).collect()
}

/// Equilibria of the subjective game played by `types` (position `k` is
/// `types[k]`).
pub fn subjective_equilibria(types: &[&PreferenceType], budget: &Budget) -> Result<EquilibriumSet> {
    Ok(SubjectiveGame::new(types)?.equilibria(budget))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{frac, int};
    use alloc::vec;

    #[test]
    fn coordination_against_uniform() {
        let c = make_coordination_type("c", 2).unwrap();
        let half = MixedStrategy::uniform(2);
        let p = MixedProfile::new(vec![half.clone(), half]);
        assert_eq!(best_response_set(&c, 0, &p).unwrap(), vec![0, 1]);
    }

    #[test]
    fn coordination_equilibria() {
        let c = make_coordination_type("c", 2).unwrap();
        let eq = subjective_equilibria(&[&c, &c], &Budget::default()).unwrap();
        let profiles: Vec<_> = eq.equilibria.iter().map(|e| e.profile.clone()).collect();
        let half = MixedStrategy::uniform(2);
        assert_eq!(
            profiles,
            vec![
                MixedProfile::pure(&[2, 2], &[0, 0]),
                MixedProfile::pure(&[2, 2], &[1, 1]),
                MixedProfile::new(vec![half.clone(), half]),
            ]
        );
        assert!(!eq.partial);
    }

    #[test]
    fn indifferent_full_support_family() {
        let i = make_indifferent_type("i", &[2, 2], 0).unwrap();
        let eq = subjective_equilibria(&[&i, &i], &Budget::default()).unwrap();
        assert!(eq
            .equilibria
            .iter()
            .any(|e| e.family && e.supports == vec![vec![0, 1], vec![0, 1]]));
        assert_eq!(eq.equilibria.len(), 9);
    }

    #[test]
    fn dominant_pair_unique() {
        let d1 = make_dominant_type("d1", &[2, 2], 0, 0).unwrap();
        let d2 = make_dominant_type("d2", &[2, 2], 0, 1).unwrap();
        let eq = subjective_equilibria(&[&d1, &d2], &Budget::default()).unwrap();
        assert_eq!(eq.equilibria.len(), 1);
        assert_eq!(eq.equilibria[0].profile, MixedProfile::pure(&[2, 2], &[0, 1]));
    }

    #[test]
    fn dominant_types_are_strict() {
        for (k, shape) in [(2usize, [2usize, 3]), (3, [3, 2]), (4, [4, 4])] {
            for a in 0..k {
                let t = make_dominant_type("d", &shape, 0, a).unwrap();
                assert_eq!(t.strictly_dominant(), Some(a));
            }
        }
        let t = make_dominant_type("d", &[2, 3, 2], 1, 2).unwrap();
        assert_eq!(t.strictly_dominant(), Some(2));
    }

    #[test]
    fn mixed_supporter_indifference() {
        let t = make_mixed_supporter("s", frac(1, 2)).unwrap();
        let half = MixedStrategy::uniform(2);
        let p = MixedProfile::new(vec![half.clone(), half]);
        assert_eq!(best_response_set(&t, 0, &p).unwrap(), vec![0, 1]);
        let t1 = make_mixed_supporter("s", int(1)).unwrap();
        let p = MixedProfile::pure(&[2, 2], &[0, 1]);
        assert_eq!(best_response_set(&t1, 0, &p).unwrap(), vec![1]);
        let t0 = make_mixed_supporter("s", int(0)).unwrap();
        let p = MixedProfile::pure(&[2, 2], &[0, 0]);
        assert_eq!(best_response_set(&t0, 0, &p).unwrap(), vec![0]);
        assert!(make_mixed_supporter("s", int(2)).is_err());
    }

    #[test]
    fn tag_validation() {
        let bad = PreferenceType::new("x", &[2, 2], 0, vec![int(1), int(0), int(0), int(0)], TypeTag::Indifferent);
        assert!(bad.is_err());
    }

    #[test]
    fn swapped_seat_reading() {
        // θ(a1,a2) = 5: at position 1 the profile (a2,a1) gives own a1 vs a2.
        let t = PreferenceType::general("t", &[2, 2], 0, vec![int(0), int(5), int(0), int(0)]).unwrap();
        let table = t.table_at(1).unwrap();
        assert_eq!(table[2], int(5));
    }
}
