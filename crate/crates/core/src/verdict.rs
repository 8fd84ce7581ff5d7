//! Stability verdicts shared by the single- and multi-population engines.

use alloc::boxed::Box;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::witness::{MultiWitness, SingleWitness};

/// A mutation order; `Infinite` means every order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Order {
    Finite(u32),
    Infinite,
}

impl Order {
    /// `self` is at most `other`.
    pub fn le(self, other: Order) -> bool {
        match (self, other) {
            (_, Order::Infinite) => true,
            (Order::Infinite, Order::Finite(_)) => false,
            (Order::Finite(a), Order::Finite(b)) => a <= b,
        }
    }

    pub fn finite(self) -> Option<u32> {
        match self {
            Order::Finite(r) => Some(r),
            Order::Infinite => None,
        }
    }
}

impl fmt::Display for Order {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Order::Finite(r) => write!(f, "{r}"),
            Order::Infinite => f.write_str("inf"),
        }
    }
}

/// The sufficient condition a certificate rests on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Theorem {
    /// Symmetric strict NE held by dominant-strategy types, efficient.
    StrictNashEfficient,
    /// Symmetric strict NE on the noncooperative frontier.
    StrictNashNoncooperative,
    /// Symmetric strict NE on the cooperative frontier.
    StrictNashCooperative,
    /// 2×2 with an efficient pure diagonal that is not a strict NE.
    EfficientPureIndifferent,
    /// 2×2 with a mixed efficient strategy and equal off-diagonal payoffs.
    MixedSupporter,
    /// Two populations, strict NE on the noncooperative frontier.
    TwoPopulationNoncooperative,
    /// Two populations, strict NE on the cooperative frontier.
    TwoPopulationCooperative,
    /// Strictly strong NE weakly dominating every profile.
    StrictlyStrongDominant,
}

impl Theorem {
    pub fn name(self) -> &'static str {
        match self {
            Theorem::StrictNashEfficient => "strict-nash-efficient",
            Theorem::StrictNashNoncooperative => "strict-nash-noncooperative-frontier",
            Theorem::StrictNashCooperative => "strict-nash-cooperative-frontier",
            Theorem::EfficientPureIndifferent => "2x2-efficient-pure",
            Theorem::MixedSupporter => "2x2-mixed-supporter",
            Theorem::TwoPopulationNoncooperative => "two-population-noncooperative-frontier",
            Theorem::TwoPopulationCooperative => "two-population-cooperative-frontier",
            Theorem::StrictlyStrongDominant => "strictly-strong-dominant",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Certificate {
    pub theorem: Theorem,
    /// Highest order the theorem guarantees.
    pub order: Order,
    /// Checked premises, in human-readable form.
    pub premises: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Witness {
    Single(SingleWitness),
    Multi(MultiWitness),
}

impl Witness {
    pub fn order(&self) -> u32 {
        match self {
            Witness::Single(w) => w.order(),
            Witness::Multi(w) => w.order(),
        }
    }

    pub fn construction(&self) -> &str {
        match self {
            Witness::Single(w) => &w.construction,
            Witness::Multi(w) => &w.construction,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    Stable(Certificate),
    Unstable(Box<Witness>),
    Unknown,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Screen {
    pub name: &'static str,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StabilityVerdict {
    pub requested: Order,
    pub verdict: Verdict,
    /// Necessary-condition screens in the order they ran.
    pub screens: Vec<Screen>,
    pub notes: Vec<String>,
}

impl StabilityVerdict {
    pub fn kind(&self) -> &'static str {
        match self.verdict {
            Verdict::Stable(_) => "stable",
            Verdict::Unstable(_) => "unstable",
            Verdict::Unknown => "unknown",
        }
    }

    pub fn is_stable(&self) -> bool {
        matches!(self.verdict, Verdict::Stable(_))
    }

    pub fn is_unstable(&self) -> bool {
        matches!(self.verdict, Verdict::Unstable(_))
    }

    pub fn witness(&self) -> Option<&Witness> {
        match &self.verdict {
            Verdict::Unstable(w) => Some(w),
            _ => None,
        }
    }

    pub fn certificate(&self) -> Option<&Certificate> {
        match &self.verdict {
            Verdict::Stable(c) => Some(c),
            _ => None,
        }
    }
}
