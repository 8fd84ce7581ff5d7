//! Payoff geometry: efficient strategies, the cooperative region `S_co`
//! (convex hull of pure payoff vectors), the noncooperative region `S_nc`
//! (payoffs of independent mixed profiles), Pareto frontiers of both and
//! rational convex decompositions.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::budget::Budget;
use crate::error::{Error, Result};
use crate::game::{decode_profile, expected_payoff, is_symmetric, Game, MixedProfile, MixedStrategy};
use crate::linalg::{self, Solution};
use crate::lp::{self, LpResult};
use crate::rational::{common_denominator, Q};

/// Three-valued answer for questions the engine cannot always settle.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Tri {
    True,
    False,
    Unknown,
}

impl Tri {
    pub fn from_bool(b: bool) -> Self {
        if b {
            Tri::True
        } else {
            Tri::False
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Tri::True => "true",
            Tri::False => "false",
            Tri::Unknown => "unknown",
        }
    }
}

/// `w` weakly dominates `v` and differs from it.
pub fn dominates(w: &[Q], v: &[Q]) -> bool {
    w.len() == v.len() && w.iter().zip(v).all(|(a, b)| a >= b) && w != v
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EfficientProfile {
    pub strategy: MixedStrategy,
    /// `π_1(σ*, σ*)`.
    pub value: Q,
    /// Every maximizer found by face enumeration, `strategy` first.
    pub maximizers: Vec<MixedStrategy>,
    /// Exactly one maximizer exists.
    pub certified_unique: bool,
}

impl EfficientProfile {
    /// `σ*(a1)`.
    pub fn alpha(&self) -> &Q {
        self.strategy.prob(0)
    }
}

fn self_play_value(m: &[Vec<Q>], x: &[Q]) -> Q {
    let mut acc = Q::zero();
    for (i, xi) in x.iter().enumerate() {
        if xi.is_zero() {
            continue;
        }
        for (j, xj) in x.iter().enumerate() {
            if !xj.is_zero() {
                acc += xi * xj * &m[i][j];
            }
        }
    }
    acc
}

fn row_payoffs(game: &Game) -> Vec<Vec<Q>> {
    let k = game.shape()[0];
    (0..k)
        .map(|a| (0..k).map(|b| game.payoff_of(&[a, b])[0].clone()).collect())
        .collect()
}

/// Maximizes `π_1(σ,σ)` over the simplex in a symmetric two-player game.
///
/// Two actions use the closed form; larger games enumerate the stationary
/// points of every face.
pub fn efficient_strategy(game: &Game) -> Result<EfficientProfile> {
    if !is_symmetric(game) {
        return Err(Error::Unsupported("efficient strategies need a symmetric two-player game".into()));
    }
    let m = row_payoffs(game);
    let k = m.len();
    if k > 20 {
        return Err(Error::Unsupported(format!("{k} actions exceed the face enumeration limit")));
    }
    let (maximizers, value, singular) = face_maximizers(&m);
    let unique = maximizers.len() == 1 && !singular;
    if k == 2 {
        let (strategy, closed) = closed_form_2x2(&m[0][0], &m[0][1], &m[1][0], &m[1][1]);
        debug_assert_eq!(closed, value);
        let mut all = vec![strategy.clone()];
        all.extend(maximizers.into_iter().filter(|s| *s != strategy));
        return Ok(EfficientProfile {
            strategy,
            value: closed,
            maximizers: all,
            certified_unique: unique,
        });
    }
    Ok(EfficientProfile {
        strategy: maximizers[0].clone(),
        value,
        maximizers,
        certified_unique: unique,
    })
}

/// `σ*` and `π_1(σ*,σ*)` for the symmetric game with row payoffs
/// `A B / C D`.
pub fn closed_form_2x2(a: &Q, b: &Q, c: &Q, d: &Q) -> (MixedStrategy, Q) {
    if a < d {
        let (s, v) = closed_form_2x2(d, c, b, a);
        let w = s.weights();
        return (MixedStrategy::new(vec![w[1].clone(), w[0].clone()]).expect("swap keeps a distribution"), v);
    }
    let two = Q::from_integer(BigInt::from(2));
    if &two * a >= b + c {
        return (MixedStrategy::pure(2, 0), a.clone());
    }
    let den = b + c - a - d;
    let alpha = (b + c - &two * d) / (&two * &den);
    let num = b + c - &two * d;
    let value = &num * &num / (Q::from_integer(BigInt::from(4)) * &den) + d;
    (MixedStrategy::binary(alpha).expect("interior weight"), value)
}

/// All maximizers of `xᵀMx` among face stationary points, the maximum, and
/// whether some face had a degenerate stationary system.
fn face_maximizers(m: &[Vec<Q>]) -> (Vec<MixedStrategy>, Q, bool) {
    let k = m.len();
    let mut best: Option<Q> = None;
    let mut found: Vec<Vec<Q>> = Vec::new();
    let mut singular = false;
    for mask in 1u64..(1 << k) {
        let face: Vec<usize> = (0..k).filter(|&i| mask & (1 << i) != 0).collect();
        let t = face.len();
        // [(M+Mᵀ)_TT  -1; 1ᵀ 0] [x; λ] = [0; 1]
        let mut a = Vec::with_capacity(t + 1);
        for &i in &face {
            let mut row: Vec<Q> = face.iter().map(|&j| &m[i][j] + &m[j][i]).collect();
            row.push(-Q::one());
            a.push(row);
        }
        let mut last = vec![Q::one(); t];
        last.push(Q::zero());
        a.push(last);
        let mut rhs = vec![Q::zero(); t];
        rhs.push(Q::one());
        let x_face = match linalg::solve(&a, &rhs) {
            Solution::Unique(sol) => sol,
            Solution::Many { .. } => {
                singular = true;
                continue;
            }
            Solution::Inconsistent => continue,
        };
        if x_face[..t].iter().any(|x| !x.is_positive()) {
            continue;
        }
        let mut x = vec![Q::zero(); k];
        for (c, &i) in face.iter().enumerate() {
            x[i] = x_face[c].clone();
        }
        let val = self_play_value(m, &x);
        match &best {
            Some(b) if val < *b => {}
            Some(b) if val == *b => found.push(x),
            _ => {
                best = Some(val);
                found = vec![x];
            }
        }
    }
    let strategies = found
        .into_iter()
        .map(|x| MixedStrategy::new(x).expect("face solution is a distribution"))
        .collect();
    (strategies, best.expect("vertices are always stationary"), singular)
}

fn check_point(game: &Game, v: &[Q]) -> Result<()> {
    if v.len() != game.players() {
        return Err(Error::Dimension {
            expected: game.players(),
            found: v.len(),
        });
    }
    Ok(())
}

/// Maximum of `Σ_i w_i` over `w ∈ S_co` with `w ≥ v`, with the maximizing
/// weights on pure profiles; `None` when no such `w` exists.
fn coop_lift(game: &Game, v: &[Q]) -> Option<(Vec<Q>, Vec<Q>)> {
    let n = game.players();
    let p = game.profile_count();
    let width = p + n;
    let mut a = Vec::with_capacity(n + 1);
    let mut b = Vec::with_capacity(n + 1);
    let mut row = vec![Q::one(); p];
    row.resize(width, Q::zero());
    a.push(row);
    b.push(Q::one());
    for i in 0..n {
        let mut row: Vec<Q> = (0..p).map(|x| game.payoff(x)[i].clone()).collect();
        row.resize(width, Q::zero());
        row[p + i] = -Q::one();
        a.push(row);
        b.push(v[i].clone());
    }
    let mut cost = vec![Q::zero(); p];
    cost.resize(width, Q::one());
    match lp::maximize(&a, &b, &cost) {
        LpResult::Optimal { x, .. } => {
            let weights = x[..p].to_vec();
            let w = (0..n)
                .map(|i| (0..p).map(|x| &weights[x] * &game.payoff(x)[i]).sum())
                .collect();
            Some((weights, w))
        }
        _ => None,
    }
}

/// `v ∈ S_co`.
pub fn in_coop_hull(game: &Game, v: &[Q]) -> Result<bool> {
    check_point(game, v)?;
    Ok(rational_decomposition(game, v).is_ok())
}

/// `v ∈ P(S_co)`: `v` lies in the hull and no distinct hull point weakly
/// dominates it.
pub fn pareto_coop(game: &Game, v: &[Q]) -> Result<bool> {
    check_point(game, v)?;
    if !in_coop_hull(game, v)? {
        return Ok(false);
    }
    Ok(coop_improvement(game, v)?.is_none())
}

/// A point of `S_co` dominating `v`, with its weights over pure profiles
/// (row-major), when one exists.
pub fn coop_improvement(game: &Game, v: &[Q]) -> Result<Option<(Vec<Q>, Vec<Q>)>> {
    check_point(game, v)?;
    Ok(coop_lift(game, v).filter(|(_, w)| dominates(w, v)))
}

/// Distinct pure payoff vectors that are extreme points of `S_co`, in the
/// row-major order of their first occurrence.
pub fn coop_vertices(game: &Game) -> Vec<Vec<Q>> {
    let mut distinct: Vec<Vec<Q>> = Vec::new();
    for x in 0..game.profile_count() {
        let v = game.payoff(x).to_vec();
        if !distinct.contains(&v) {
            distinct.push(v);
        }
    }
    let n = game.players();
    (0..distinct.len())
        .filter(|&k| {
            let others: Vec<&Vec<Q>> = distinct.iter().enumerate().filter(|&(j, _)| j != k).map(|(_, v)| v).collect();
            if others.is_empty() {
                return true;
            }
            let mut a = vec![vec![Q::one(); others.len()]];
            let mut b = vec![Q::one()];
            for i in 0..n {
                a.push(others.iter().map(|v| v[i].clone()).collect());
                b.push(distinct[k][i].clone());
            }
            lp::feasible_point(&a, &b).is_none()
        })
        .map(|k| distinct[k].clone())
        .collect()
}

/// Vertices of `S_co` lying on `P(S_co)`.
pub fn coop_frontier_vertices(game: &Game) -> Vec<Vec<Q>> {
    coop_vertices(game)
        .into_iter()
        .filter(|v| pareto_coop(game, v).unwrap_or(false))
        .collect()
}

/// Pure profiles with positive weights summing to one whose payoff
/// combination is exactly `u`; at most `n+1` profiles.
pub fn rational_decomposition(game: &Game, u: &[Q]) -> Result<Vec<(Vec<usize>, Q)>> {
    check_point(game, u)?;
    let p = game.profile_count();
    let mut a = vec![vec![Q::one(); p]];
    let mut b = vec![Q::one()];
    for (i, ui) in u.iter().enumerate() {
        a.push((0..p).map(|x| game.payoff(x)[i].clone()).collect());
        b.push(ui.clone());
    }
    let x = lp::feasible_point(&a, &b)
        .ok_or_else(|| Error::Infeasible(format!("{} is outside the cooperative region", crate::rational::show_vec(u))))?;
    Ok(x.into_iter()
        .enumerate()
        .filter(|(_, w)| w.is_positive())
        .map(|(k, w)| (game.decode(k), w))
        .collect())
}

/// The first multiset (by size, then lexicographically over row-major
/// profile indices) of at most `max_r` pure profiles whose average payoff
/// dominates `v`. Returns the profile indices and the average.
pub fn rational_dominators(game: &Game, v: &[Q], max_r: usize, budget: &Budget) -> Result<Option<(Vec<usize>, Vec<Q>)>> {
    check_point(game, v)?;
    let p = game.profile_count();
    let n = game.players();
    let mut examined = 0u64;
    for r in 1..=max_r {
        let rq = Q::from_integer(BigInt::from(r));
        let mut idx = vec![0usize; r];
        loop {
            examined += 1;
            if examined > budget.max_grid_points {
                return Ok(None);
            }
            let u: Vec<Q> = (0..n)
                .map(|i| idx.iter().map(|&x| game.payoff(x)[i].clone()).sum::<Q>() / &rq)
                .collect();
            if dominates(&u, v) {
                return Ok(Some((idx, u)));
            }
            // next nondecreasing sequence
            let mut k = r;
            while k > 0 && idx[k - 1] == p - 1 {
                k -= 1;
            }
            if k == 0 {
                break;
            }
            idx[k - 1] += 1;
            let val = idx[k - 1];
            for slot in idx.iter_mut().skip(k) {
                *slot = val;
            }
        }
    }
    Ok(None)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NoncoopMethod {
    PureScan,
    CoopCertificate,
    ExactBilinear,
    Grid,
}

impl NoncoopMethod {
    pub fn as_str(self) -> &'static str {
        match self {
            NoncoopMethod::PureScan => "pure-scan",
            NoncoopMethod::CoopCertificate => "cooperative-frontier",
            NoncoopMethod::ExactBilinear => "exact-bilinear",
            NoncoopMethod::Grid => "grid",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NoncoopResult {
    pub status: Tri,
    /// A profile whose payoff dominates `v`, when `status` is false.
    pub dominator: Option<MixedProfile>,
    pub dominator_payoff: Option<Vec<Q>>,
    pub method: NoncoopMethod,
}

impl NoncoopResult {
    fn refuted(game: &Game, profile: MixedProfile, method: NoncoopMethod) -> Self {
        let w = expected_payoff(game, &profile).expect("profile built for this game");
        NoncoopResult {
            status: Tri::False,
            dominator: Some(profile),
            dominator_payoff: Some(w),
            method,
        }
    }
}

/// `v ∈ P(S_nc)`, where `profile` must realize `v`.
///
/// Exact for every two-player game: a dominating profile, if any, can be
/// moved onto supports of size at most two per player, and each such
/// sub-bimatrix is decided in closed form. Games with three or more players
/// fall back to a grid search and may answer `Unknown`.
pub fn pareto_noncoop(game: &Game, v: &[Q], profile: &MixedProfile, budget: &Budget) -> Result<NoncoopResult> {
    check_point(game, v)?;
    let realized = expected_payoff(game, profile)?;
    if realized != v {
        return Err(Error::Input(format!(
            "witnessing profile pays {} rather than {}",
            crate::rational::show_vec(&realized),
            crate::rational::show_vec(v)
        )));
    }
    for x in 0..game.profile_count() {
        if dominates(game.payoff(x), v) {
            let prof = MixedProfile::pure(game.shape(), &game.decode(x));
            return Ok(NoncoopResult::refuted(game, prof, NoncoopMethod::PureScan));
        }
    }
    if pareto_coop(game, v)? {
        return Ok(NoncoopResult {
            status: Tri::True,
            dominator: None,
            dominator_payoff: None,
            method: NoncoopMethod::CoopCertificate,
        });
    }
    if game.players() == 2 {
        let (m, k) = (game.shape()[0], game.shape()[1]);
        let pairs = |len: usize| -> Vec<(usize, usize)> {
            if len == 1 {
                vec![(0, 0)]
            } else {
                (0..len).flat_map(|i| (i + 1..len).map(move |j| (i, j))).collect()
            }
        };
        let rows = pairs(m);
        let cols = pairs(k);
        if (rows.len() as u64).saturating_mul(cols.len() as u64) <= budget.max_support_pairs {
            for &(r0, r1) in &rows {
                for &(c0, c1) in &cols {
                    if let Some((p, q)) = dominate_2x2(game, v, [r0, r1], [c0, c1]) {
                        let x = split_strategy(m, r0, r1, p);
                        let y = split_strategy(k, c0, c1, q);
                        let prof = MixedProfile::new(vec![x, y]);
                        let w = expected_payoff(game, &prof)?;
                        assert!(dominates(&w, v), "bilinear witness failed re-verification");
                        return Ok(NoncoopResult::refuted(game, prof, NoncoopMethod::ExactBilinear));
                    }
                }
            }
            return Ok(NoncoopResult {
                status: Tri::True,
                dominator: None,
                dominator_payoff: None,
                method: NoncoopMethod::ExactBilinear,
            });
        }
    }
    if let Some(prof) = grid_dominator(game, v, budget) {
        return Ok(NoncoopResult::refuted(game, prof, NoncoopMethod::Grid));
    }
    Ok(NoncoopResult {
        status: Tri::Unknown,
        dominator: None,
        dominator_payoff: None,
        method: NoncoopMethod::Grid,
    })
}

fn split_strategy(len: usize, a: usize, b: usize, p: Q) -> MixedStrategy {
    let mut w = vec![Q::zero(); len];
    if a == b {
        w[a] = Q::one();
    } else {
        w[b] = Q::one() - &p;
        w[a] = p;
    }
    MixedStrategy::new(w).expect("two-point split")
}

/// Affine function `c0 + c1·p`.
#[derive(Clone, Debug)]
struct Lin(Q, Q);

impl Lin {
    fn at(&self, p: &Q) -> Q {
        &self.0 + &self.1 * p
    }
}

/// `g(p,q) = α(p) + β(p)·q` for one player's payoff minus target on a
/// 2×2 sub-bimatrix, with `p`, `q` the weights of the first row and column.
#[derive(Clone, Debug)]
struct Bilinear {
    alpha: Lin,
    beta: Lin,
}

impl Bilinear {
    fn new(a: &Q, b: &Q, c: &Q, d: &Q, target: &Q) -> Self {
        // f = pq·a + p(1-q)·b + (1-p)q·c + (1-p)(1-q)·d
        // α(p) = f(p,0) - t = d - t + p(b - d)
        // β(p) = f(p,1) - f(p,0) = (c - d) + p(a - b - c + d)
        Bilinear {
            alpha: Lin(d - target, b - d),
            beta: Lin(c - d, a - b - c + d),
        }
    }

    fn at_q(&self, q: &Q) -> Lin {
        Lin(&self.alpha.0 + &self.beta.0 * q, &self.alpha.1 + &self.beta.1 * q)
    }
}

fn dominate_2x2(game: &Game, v: &[Q], rows: [usize; 2], cols: [usize; 2]) -> Option<(Q, Q)> {
    let entry = |i: usize, r: usize, c: usize| game.payoff_of(&[r, c])[i].clone();
    let g: Vec<Bilinear> = (0..2)
        .map(|i| {
            Bilinear::new(
                &entry(i, rows[0], cols[0]),
                &entry(i, rows[0], cols[1]),
                &entry(i, rows[1], cols[0]),
                &entry(i, rows[1], cols[1]),
                &v[i],
            )
        })
        .collect();
    find_strict(&g[0], &g[1]).or_else(|| find_strict(&g[1], &g[0]))
}

/// Closed interval of `p ∈ [lo, hi]` where every affine constraint is `≥ 0`.
fn feasible_interval(cons: &[Lin]) -> Option<(Q, Q)> {
    let mut lo = Q::zero();
    let mut hi = Q::one();
    for c in cons {
        if c.1.is_zero() {
            if c.0.is_negative() {
                return None;
            }
        } else {
            let root = -&c.0 / &c.1;
            if c.1.is_positive() {
                if root > lo {
                    lo = root;
                }
            } else if root < hi {
                hi = root;
            }
        }
    }
    (lo <= hi).then_some((lo, hi))
}

/// A point of the unit square where `h > 0` and `g ≥ 0`.
fn find_strict(h: &Bilinear, g: &Bilinear) -> Option<(Q, Q)> {
    // Edges q = 0 and q = 1: maximize affine h(·, q) over {g(·, q) ≥ 0}.
    for q in [Q::zero(), Q::one()] {
        let gl = g.at_q(&q);
        let hl = h.at_q(&q);
        if let Some((lo, hi)) = feasible_interval(&[gl]) {
            for p in [lo, hi] {
                if hl.at(&p).is_positive() {
                    return Some((p, q));
                }
            }
        }
    }
    // Curve q*(p) = -α_g/β_g where g = 0; there h = N(p)/β_g(p) with
    // N = α_h β_g - β_h α_g.
    let (ah, bh, ag, bg) = (&h.alpha, &h.beta, &g.alpha, &g.beta);
    let n0 = &ah.0 * &bg.0 - &bh.0 * &ag.0;
    let n1 = &ah.0 * &bg.1 + &ah.1 * &bg.0 - &bh.0 * &ag.1 - &bh.1 * &ag.0;
    let n2 = &ah.1 * &bg.1 - &bh.1 * &ag.1;
    let big_n = |p: &Q| &n0 + &n1 * p + &n2 * p * p;
    for s in [Q::one(), -Q::one()] {
        let sl = |l: &Lin| Lin(&s * &l.0, &s * &l.1);
        // s·β_g > 0 (open), s·α_g ≤ 0, s·(α_g+β_g) ≥ 0
        let sb = sl(bg);
        if sb.1.is_zero() && !sb.0.is_positive() {
            continue;
        }
        let neg_a = Lin(-&s * &ag.0, -&s * &ag.1);
        let g1 = Lin(&s * (&ag.0 + &bg.0), &s * (&ag.1 + &bg.1));
        let Some((lo, hi)) = feasible_interval(&[neg_a, g1, sb.clone()]) else {
            continue;
        };
        // Endpoints where s·β_g = 0 are open.
        let lo_open = sb.at(&lo).is_zero();
        let hi_open = sb.at(&hi).is_zero();
        if lo == hi && (lo_open || hi_open) {
            continue;
        }
        let val = |p: &Q| &s * big_n(p);
        let mut candidates: Vec<Q> = Vec::new();
        if !lo_open {
            candidates.push(lo.clone());
        }
        if !hi_open {
            candidates.push(hi.clone());
        }
        let two = Q::from_integer(BigInt::from(2));
        if !n2.is_zero() {
            let vertex = -&n1 / (&two * &n2);
            if vertex > lo && vertex < hi {
                candidates.push(vertex);
            }
        }
        for p in &candidates {
            if val(p).is_positive() {
                let q = -ag.at(p) / bg.at(p);
                return Some((p.clone(), q));
            }
        }
        // Approach an open endpoint from inside.
        for (open, end, other) in [(lo_open, lo.clone(), hi.clone()), (hi_open, hi.clone(), lo.clone())] {
            if !open || !val(&end).is_positive() {
                continue;
            }
            let mut p = (&end + &other) / &two;
            for _ in 0..256 {
                if val(&p).is_positive() && !sb.at(&p).is_zero() {
                    let q = -ag.at(&p) / bg.at(&p);
                    return Some((p, q));
                }
                p = (&end + &p) / &two;
            }
        }
    }
    None
}

fn simplex_points(k: usize, res: u32) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    let mut cur = vec![0u32; k];
    fn rec(i: usize, left: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if i + 1 == cur.len() {
            cur[i] = left;
            out.push(cur.clone());
            return;
        }
        for c in (0..=left).rev() {
            cur[i] = c;
            rec(i + 1, left - c, cur, out);
        }
    }
    rec(0, res, &mut cur, &mut out);
    out
}

fn binomial(n: u64, k: u64) -> u64 {
    let mut acc: u64 = 1;
    for i in 0..k {
        acc = acc.saturating_mul(n - i) / (i + 1);
    }
    acc
}

/// Pure payoff points classified against both frontiers.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PureFrontier {
    /// Distinct pure payoff vectors with one realizing profile, in row-major
    /// order of first occurrence.
    pub points: Vec<(Vec<Q>, Vec<usize>)>,
    /// Membership of each point in `P(S_nc)`.
    pub noncoop: Vec<Tri>,
    /// Membership of each point in `P(S_co)`.
    pub coop: Vec<bool>,
}

impl PureFrontier {
    /// Points with `P(S_nc)` membership `True`.
    pub fn noncoop_points(&self) -> Vec<Vec<Q>> {
        self.points
            .iter()
            .zip(&self.noncoop)
            .filter(|(_, t)| **t == Tri::True)
            .map(|(p, _)| p.0.clone())
            .collect()
    }

    /// Pure points on `P(S_co)`; these lie in `S_nc` automatically.
    pub fn coop_points(&self) -> Vec<Vec<Q>> {
        self.points
            .iter()
            .zip(&self.coop)
            .filter(|(_, c)| **c)
            .map(|(p, _)| p.0.clone())
            .collect()
    }
}

pub fn pure_frontier(game: &Game, budget: &Budget) -> Result<PureFrontier> {
    let mut points: Vec<(Vec<Q>, Vec<usize>)> = Vec::new();
    for x in 0..game.profile_count() {
        let v = game.payoff(x).to_vec();
        if !points.iter().any(|p| p.0 == v) {
            points.push((v, game.decode(x)));
        }
    }
    let mut noncoop = Vec::with_capacity(points.len());
    let mut coop = Vec::with_capacity(points.len());
    for (v, a) in &points {
        noncoop.push(pareto_noncoop(game, v, &MixedProfile::pure(game.shape(), a), budget)?.status);
        coop.push(pareto_coop(game, v)?);
    }
    Ok(PureFrontier { points, noncoop, coop })
}

/// Lexicographically first grid profile whose payoff dominates `v`.
fn grid_dominator(game: &Game, v: &[Q], budget: &Budget) -> Option<MixedProfile> {
    let n = game.players();
    let free = vec![true; n];
    let base = vec![0; n];
    let res = fit_resolution(game.shape(), &free, budget.grid_resolution, budget.max_grid_points)?;
    let prof = grid_first(game, &free, &base, res, v, &|acc, target, _| {
        acc.iter().zip(target).all(|(a, t)| a >= t) && acc != target
    })?;
    let w = expected_payoff(game, &prof).ok()?;
    dominates(&w, v).then_some(prof)
}

/// Largest resolution `res / 2^k` whose grid over the free players fits
/// `max_points`.
pub(crate) fn fit_resolution(shape: &[usize], free: &[bool], res: u32, max_points: u64) -> Option<u32> {
    let mut res = res.max(1);
    loop {
        let size = shape.iter().zip(free).filter(|(_, &f)| f).fold(1u64, |acc, (&k, _)| {
            acc.saturating_mul(binomial(res as u64 + k as u64 - 1, k as u64 - 1))
        });
        if size <= max_points {
            return Some(res);
        }
        if res == 1 {
            return None;
        }
        res /= 2;
    }
}

/// Scans mixed profiles with weights in multiples of `1/res` for the free
/// players (others play `base`), in lexicographic grid order, using scaled
/// integer payoffs. `accept(payoffs, targets, at_base)` sees payoffs and
/// `targets` in the same integer units; `at_base` flags the grid point where
/// every free player plays its `base` action.
pub(crate) fn grid_first(
    game: &Game,
    free: &[bool],
    base: &[usize],
    res: u32,
    targets: &[Q],
    accept: &dyn Fn(&[i128], &[i128], bool) -> bool,
) -> Option<MixedProfile> {
    let shape = game.shape();
    let n = game.players();
    let all: Vec<&Q> = game.payoffs().iter().flatten().chain(targets.iter()).collect();
    let den = common_denominator(all.iter().copied());
    let scaled = |x: &Q| -> Option<i128> { (x * Q::from_integer(den.clone())).to_integer().to_i128() };
    let mut table: Vec<Vec<i128>> = Vec::with_capacity(game.profile_count());
    for x in 0..game.profile_count() {
        let row: Option<Vec<i128>> = game.payoff(x).iter().map(scaled).collect();
        table.push(row?);
    }
    let free_count = free.iter().filter(|&&f| f).count() as u32;
    let scale = (res as i128).checked_pow(free_count)?;
    let target: Vec<i128> = targets
        .iter()
        .map(|x| scaled(x).and_then(|s| s.checked_mul(scale)))
        .collect::<Option<_>>()?;
    let grids: Vec<Vec<Vec<u32>>> = (0..n)
        .map(|i| {
            if free[i] {
                simplex_points(shape[i], res)
            } else {
                let mut w = vec![0u32; shape[i]];
                w[base[i]] = 1;
                vec![w]
            }
        })
        .collect();
    let mut choice = vec![0usize; n];
    loop {
        let mut acc = vec![0i128; n];
        for (x, row) in table.iter().enumerate() {
            let prof = decode_profile(shape, x);
            let mut w: i128 = 1;
            for (i, &a) in prof.iter().enumerate() {
                w *= grids[i][choice[i]][a] as i128;
            }
            if w == 0 {
                continue;
            }
            for i in 0..n {
                acc[i] = acc[i].checked_add(row[i].checked_mul(w)?)?;
            }
        }
        let at_base = (0..n).all(|i| !free[i] || grids[i][choice[i]][base[i]] == res);
        if accept(&acc, &target, at_base) {
            let strategies = (0..n)
                .map(|i| {
                    let total: u32 = grids[i][choice[i]].iter().sum();
                    let r = Q::from_integer(BigInt::from(total));
                    MixedStrategy::new(grids[i][choice[i]].iter().map(|&c| Q::from_integer(BigInt::from(c)) / &r).collect())
                        .expect("grid point")
                })
                .collect();
            return Some(MixedProfile::new(strategies));
        }
        let mut i = n;
        loop {
            if i == 0 {
                return None;
            }
            i -= 1;
            choice[i] += 1;
            if choice[i] < grids[i].len() {
                break;
            }
            choice[i] = 0;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{frac, int};

    fn anti() -> Game {
        Game::symmetric_2x2(int(0), int(2), int(2), int(0))
    }

    fn game_g() -> Game {
        let m = vec![
            vec![int(3), int(0), int(0)],
            vec![int(0), int(0), int(9)],
            vec![int(0), int(2), int(0)],
        ];
        Game::symmetric(&m).unwrap()
    }

    fn three_by_three() -> Game {
        let p1 = vec![
            vec![int(7), int(0), int(0)],
            vec![int(0), int(9), int(0)],
            vec![int(0), int(0), int(6)],
        ];
        let p2 = vec![
            vec![int(7), int(0), int(0)],
            vec![int(0), int(6), int(0)],
            vec![int(0), int(0), int(9)],
        ];
        Game::bimatrix(&p1, &p2).unwrap()
    }

    #[test]
    fn efficient_examples() {
        let e = efficient_strategy(&anti()).unwrap();
        assert_eq!(e.alpha(), &frac(1, 2));
        assert_eq!(e.value, int(1));
        assert!(e.certified_unique);
        let e = efficient_strategy(&Game::symmetric_2x2(int(5), int(0), int(0), int(1))).unwrap();
        assert_eq!(e.strategy, MixedStrategy::pure(2, 0));
        assert_eq!(e.value, int(5));
        let e = efficient_strategy(&game_g()).unwrap();
        assert_eq!(e.strategy, MixedStrategy::pure(3, 0));
        assert_eq!(e.value, int(3));
        assert!(e.certified_unique);
    }

    #[test]
    fn swapped_labels() {
        let e = efficient_strategy(&Game::symmetric_2x2(int(1), int(0), int(0), int(5))).unwrap();
        assert_eq!(e.strategy, MixedStrategy::pure(2, 1));
        assert_eq!(e.value, int(5));
    }

    #[test]
    fn coop_frontier() {
        let g = three_by_three();
        assert!(!pareto_coop(&g, &[int(7), int(7)]).unwrap());
        assert!(pareto_coop(&g, &[int(9), int(6)]).unwrap());
        assert!(pareto_coop(&g, &[int(6), int(9)]).unwrap());
        let single = Game::from_ints(&[1, 1], &[&[4, 5]]).unwrap();
        assert!(pareto_coop(&single, &[int(4), int(5)]).unwrap());
        assert_eq!(coop_frontier_vertices(&g), vec![vec![int(9), int(6)], vec![int(6), int(9)]]);
    }

    #[test]
    fn noncoop_frontier() {
        let g = three_by_three();
        let b = Budget::default();
        for (prof, v) in [([0, 0], [7, 7]), ([1, 1], [9, 6]), ([2, 2], [6, 9])] {
            let v: Vec<Q> = v.iter().map(|&x| int(x)).collect();
            let r = pareto_noncoop(&g, &v, &MixedProfile::pure(&[3, 3], &prof), &b).unwrap();
            assert_eq!(r.status, Tri::True, "{v:?}");
        }
        let r = pareto_noncoop(&g, &[int(0), int(0)], &MixedProfile::pure(&[3, 3], &[0, 1]), &b).unwrap();
        assert_eq!(r.status, Tri::False);

        let r = pareto_noncoop(&game_g(), &[int(3), int(3)], &MixedProfile::pure(&[3, 3], &[0, 0]), &b).unwrap();
        assert_eq!(r.status, Tri::True);

        let half = MixedStrategy::uniform(2);
        let r = pareto_noncoop(&anti(), &[int(1), int(1)], &MixedProfile::new(vec![half.clone(), half]), &b).unwrap();
        assert_eq!(r.status, Tri::False);
        assert_eq!(r.dominator, Some(MixedProfile::pure(&[2, 2], &[0, 1])));
        assert_eq!(r.dominator_payoff, Some(vec![int(2), int(2)]));
    }

    #[test]
    fn noncoop_mixed_point_and_bad_witness() {
        // Battle of the sexes at its mixed equilibrium.
        let p1 = vec![vec![int(2), int(0)], vec![int(0), int(1)]];
        let p2 = vec![vec![int(1), int(0)], vec![int(0), int(2)]];
        let g = Game::bimatrix(&p1, &p2).unwrap();
        let x = MixedStrategy::binary(frac(2, 3)).unwrap();
        let y = MixedStrategy::binary(frac(1, 3)).unwrap();
        let prof = MixedProfile::new(vec![x, y]);
        let v = expected_payoff(&g, &prof).unwrap();
        let r = pareto_noncoop(&g, &v, &prof, &Budget::default()).unwrap();
        assert_eq!(r.status, Tri::False);
        assert_eq!(r.method, NoncoopMethod::PureScan);
        let v = vec![frac(3, 4), frac(3, 4)];
        let bad = pareto_noncoop(&g, &v, &prof, &Budget::default());
        assert!(bad.is_err());
    }

    #[test]
    fn decompositions() {
        let g = three_by_three();
        let d = rational_decomposition(&g, &[frac(15, 2), frac(15, 2)]).unwrap();
        let mut d = d;
        d.sort();
        assert_eq!(d, vec![(vec![1, 1], frac(1, 2)), (vec![2, 2], frac(1, 2))]);
        let d = rational_decomposition(&game_g(), &[frac(11, 2), frac(11, 2)]).unwrap();
        let mut d = d;
        d.sort();
        assert_eq!(d, vec![(vec![1, 2], frac(1, 2)), (vec![2, 1], frac(1, 2))]);
        assert!(rational_decomposition(&g, &[int(10), int(10)]).is_err());
        let (idx, u) = rational_dominators(&g, &[int(7), int(7)], 4, &Budget::default()).unwrap().unwrap();
        assert_eq!(idx, vec![4, 8]);
        assert_eq!(u, vec![frac(15, 2), frac(15, 2)]);
    }

    #[test]
    fn grid_for_three_players() {
        let g = Game::from_ints(&[2, 2, 2], &[&[1, 1, 1], &[0, 0, 0], &[0, 0, 0], &[0, 0, 0], &[0, 0, 0], &[0, 0, 0], &[0, 0, 0], &[2, 2, 2]]).unwrap();
        let v = vec![int(1), int(1), int(1)];
        let r = pareto_noncoop(&g, &v, &MixedProfile::pure(&[2, 2, 2], &[0, 0, 0]), &Budget::default()).unwrap();
        assert_eq!(r.status, Tri::False);
        assert_eq!(r.method, NoncoopMethod::PureScan);
    }
}
