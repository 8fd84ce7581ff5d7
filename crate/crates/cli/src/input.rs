//! JSON game and configuration files.
//!
//! Rationals are written as `"p/q"` strings or JSON integers. Actions are
//! referenced by name or by 1-based index.

use std::path::Path;

use esp_core::game::{Game, MixedProfile, MixedStrategy};
use esp_core::multi::MultiConfiguration;
use esp_core::preference::{
    make_coordination_type, make_dominant_type, make_indifferent_type, make_mixed_supporter, PreferenceType,
};
use esp_core::rational;
use esp_core::single::{Configuration, PreferenceDistribution};
use esp_core::Q;
use num_traits::One;
use serde::de::DeserializeOwned;
use serde::Deserialize;

use crate::error::{CliError, CliResult};

#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum Num {
    Int(i64),
    Text(String),
}

impl Num {
    fn value(&self, at: &str) -> CliResult<Q> {
        match self {
            Num::Int(k) => Ok(rational::int(*k)),
            Num::Text(t) => rational::parse(t).map_err(|e| CliError::at(at, e)),
        }
    }
}

fn values(xs: &[Num], at: &str) -> CliResult<Vec<Q>> {
    xs.iter().enumerate().map(|(k, x)| x.value(&format!("{at}[{k}]"))).collect()
}

#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum ActionRef {
    Index(usize),
    Name(String),
}

impl ActionRef {
    fn resolve(&self, game: &Game, player: usize, at: &str) -> CliResult<usize> {
        let names = game.actions(player);
        match self {
            ActionRef::Index(k) if (1..=names.len()).contains(k) => Ok(k - 1),
            ActionRef::Index(k) => Err(CliError::Input(format!(
                "{at}: action {k} is outside 1..={} for player {}",
                names.len(),
                player + 1
            ))),
            ActionRef::Name(n) => names.iter().position(|x| x == n).ok_or_else(|| {
                CliError::Input(format!("{at}: player {} has no action `{n}`", player + 1))
            }),
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum StrategySpec {
    Mixed(Vec<Num>),
    Pure(ActionRef),
}

impl StrategySpec {
    fn resolve(&self, game: &Game, player: usize, at: &str) -> CliResult<MixedStrategy> {
        let m = game.shape()[player];
        match self {
            StrategySpec::Pure(a) => Ok(MixedStrategy::pure(m, a.resolve(game, player, at)?)),
            StrategySpec::Mixed(p) => {
                let w = values(p, at)?;
                if w.len() != m {
                    return Err(CliError::Input(format!(
                        "{at}: {} probabilities given, player {} has {m} actions",
                        w.len(),
                        player + 1
                    )));
                }
                MixedStrategy::new(w).map_err(|e| CliError::at(at, e))
            }
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GameFile {
    #[serde(default)]
    pub actions: Option<Vec<Vec<String>>>,
    /// One payoff vector per pure profile, row-major.
    #[serde(default)]
    pub payoffs: Option<Vec<Vec<Num>>>,
    /// Row player's matrix of a symmetric two-player game.
    #[serde(default)]
    pub symmetric: Option<Vec<Vec<Num>>>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum TypeKind {
    Indifferent,
    Dominant { action: ActionRef },
    Coordination,
    MixedSupporter { alpha: Num },
    General { utility: Vec<Num> },
}

#[derive(Debug, Clone, Deserialize)]
pub struct TypeSpec {
    pub id: String,
    #[serde(flatten)]
    pub kind: TypeKind,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SingleFile {
    pub types: Vec<TypeSpec>,
    #[serde(default)]
    pub weights: Option<Vec<Num>>,
    /// `play[i][j]`: what type `i` plays against type `j`.
    pub play: Vec<Vec<StrategySpec>>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PopulationSpec {
    pub types: Vec<TypeSpec>,
    #[serde(default)]
    pub weights: Option<Vec<Num>>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum PlaySpec {
    Uniform { uniform: Vec<StrategySpec> },
    Table(Vec<Vec<StrategySpec>>),
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MultiFile {
    pub populations: Vec<PopulationSpec>,
    pub play: PlaySpec,
}

pub enum Loaded {
    Single(Configuration),
    Multi(MultiConfiguration),
}

/// A file's raw bytes and display name.
pub struct Source {
    pub name: String,
    pub text: String,
}

impl Source {
    pub fn read(path: &Path) -> CliResult<Source> {
        let name = path.display().to_string();
        let text = std::fs::read_to_string(path).map_err(|e| CliError::Input(format!("{name}: {e}")))?;
        Ok(Source { name, text })
    }

    fn parse<T: DeserializeOwned>(&self) -> CliResult<T> {
        serde_json::from_str(&self.text)
            .map_err(|e| CliError::Input(format!("{}:{}:{}: {e}", self.name, e.line(), e.column())))
    }
}

pub fn load_game(src: &Source) -> CliResult<Game> {
    let file: GameFile = src.parse()?;
    let at = |field: &str| format!("{}: {field}", src.name);
    let game = match (&file.payoffs, &file.symmetric) {
        (Some(_), Some(_)) => {
            return Err(CliError::Input(format!("{}: give either `payoffs` or `symmetric`, not both", src.name)))
        }
        (None, None) => return Err(CliError::Input(format!("{}: missing `payoffs` or `symmetric`", src.name))),
        (None, Some(rows)) => {
            let m = rows
                .iter()
                .enumerate()
                .map(|(k, r)| values(r, &at(&format!("symmetric[{k}]"))))
                .collect::<CliResult<Vec<_>>>()?;
            let g = Game::symmetric(&m).map_err(|e| CliError::at(&at("symmetric"), e))?;
            match &file.actions {
                Some(names) => {
                    Game::new(names.clone(), g.payoffs().to_vec()).map_err(|e| CliError::at(&at("actions"), e))?
                }
                None => g,
            }
        }
        (Some(rows), None) => {
            let names = file
                .actions
                .clone()
                .ok_or_else(|| CliError::Input(format!("{}: `payoffs` needs `actions`", src.name)))?;
            let p = rows
                .iter()
                .enumerate()
                .map(|(k, r)| values(r, &at(&format!("payoffs[{k}]"))))
                .collect::<CliResult<Vec<_>>>()?;
            Game::new(names, p).map_err(|e| CliError::at(&at("payoffs"), e))?
        }
    };
    Ok(game)
}

fn build_type(game: &Game, seat: usize, spec: &TypeSpec, at: &str) -> CliResult<PreferenceType> {
    let shape = game.shape();
    let id = spec.id.clone();
    let t = match &spec.kind {
        TypeKind::Indifferent => make_indifferent_type(id, shape, seat),
        TypeKind::Dominant { action } => make_dominant_type(id, shape, seat, action.resolve(game, seat, at)?),
        TypeKind::Coordination => {
            if shape.len() != 2 || shape[0] != shape[1] || seat != 0 {
                return Err(CliError::Input(format!(
                    "{at}: coordination types need a square two-player game in population 1"
                )));
            }
            make_coordination_type(id, shape[0])
        }
        TypeKind::MixedSupporter { alpha } => {
            if shape != [2, 2] || seat != 0 {
                return Err(CliError::Input(format!(
                    "{at}: mixed-supporter types need a 2x2 game in population 1"
                )));
            }
            make_mixed_supporter(id, alpha.value(at)?)
        }
        TypeKind::General { utility } => PreferenceType::general(id, shape, seat, values(utility, at)?),
    };
    t.map_err(|e| CliError::at(at, e))
}

fn distribution(
    game: &Game,
    seat: usize,
    types: &[TypeSpec],
    weights: &Option<Vec<Num>>,
    at: &str,
) -> CliResult<PreferenceDistribution> {
    let ts = types
        .iter()
        .enumerate()
        .map(|(k, t)| build_type(game, seat, t, &format!("{at}types[{k}]")))
        .collect::<CliResult<Vec<_>>>()?;
    let w = match weights {
        Some(w) => values(w, &format!("{at}weights"))?,
        None => {
            let n = rational::int(ts.len() as i64);
            vec![Q::one() / n; ts.len()]
        }
    };
    PreferenceDistribution::new(ts, w).map_err(|e| CliError::at(&format!("{at}weights"), e))
}

/// `"types"` at the top level means one population, `"populations"` several.
pub fn config_is_multi(src: &Source) -> CliResult<bool> {
    let v: serde_json::Value = src.parse()?;
    match (v.get("types"), v.get("populations")) {
        (Some(_), None) => Ok(false),
        (None, Some(_)) => Ok(true),
        _ => Err(CliError::Input(format!(
            "{}: a configuration has exactly one of `types` or `populations`",
            src.name
        ))),
    }
}

pub fn load_single(game: &Game, src: &Source) -> CliResult<Configuration> {
    let file: SingleFile = src.parse()?;
    let at = format!("{}: ", src.name);
    let dist = distribution(game, 0, &file.types, &file.weights, &at)?;
    let play = file
        .play
        .iter()
        .enumerate()
        .map(|(i, row)| {
            row.iter()
                .enumerate()
                .map(|(j, s)| s.resolve(game, 0, &format!("{at}play[{i}][{j}]")))
                .collect::<CliResult<Vec<_>>>()
        })
        .collect::<CliResult<Vec<_>>>()?;
    Configuration::new(game.clone(), dist, play).map_err(|e| CliError::at(&src.name, e))
}

fn profile(game: &Game, specs: &[StrategySpec], at: &str) -> CliResult<MixedProfile> {
    if specs.len() != game.players() {
        return Err(CliError::Input(format!(
            "{at}: {} strategies given for {} players",
            specs.len(),
            game.players()
        )));
    }
    let s = specs
        .iter()
        .enumerate()
        .map(|(i, s)| s.resolve(game, i, &format!("{at}[{i}]")))
        .collect::<CliResult<Vec<_>>>()?;
    Ok(MixedProfile::new(s))
}

pub fn load_multi(game: &Game, src: &Source) -> CliResult<MultiConfiguration> {
    let file: MultiFile = src.parse()?;
    let at = format!("{}: ", src.name);
    let pops = file
        .populations
        .iter()
        .enumerate()
        .map(|(i, p)| distribution(game, i, &p.types, &p.weights, &format!("{at}populations[{i}].")))
        .collect::<CliResult<Vec<_>>>()?;
    let cfg = match &file.play {
        PlaySpec::Uniform { uniform } => {
            let p = profile(game, uniform, &format!("{at}play.uniform"))?;
            MultiConfiguration::uniform(game.clone(), pops, p)
        }
        PlaySpec::Table(rows) => {
            let plays = rows
                .iter()
                .enumerate()
                .map(|(x, r)| profile(game, r, &format!("{at}play[{x}]")))
                .collect::<CliResult<Vec<_>>>()?;
            MultiConfiguration::new(game.clone(), pops, plays)
        }
    };
    cfg.map_err(|e| CliError::at(&src.name, e))
}

pub fn load_config(game: &Game, src: &Source) -> CliResult<Loaded> {
    if config_is_multi(src)? {
        load_multi(game, src).map(Loaded::Multi)
    } else {
        load_single(game, src).map(Loaded::Single)
    }
}
