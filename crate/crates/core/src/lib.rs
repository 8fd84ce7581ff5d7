//! Exact analysis of multi-mutation evolutionary stability for preference
//! configurations in finite games.
//!
//! Every quantity is an exact rational. Post-entry fitness is carried as a
//! polynomial in the mutant-share parameter `ε`, and "for all sufficiently
//! small ε" questions are answered by [`poly::sign_near_zero`].
//!
//! The engine never guesses: a configuration is reported `Stable` only with a
//! theorem certificate whose premises were checked, `Unstable` only with a
//! witness that passes [`witness::verify_single`] or [`witness::verify_multi`],
//! and `Unknown` otherwise.
//!
//! The crate is `no_std` and needs only `alloc`.

#![no_std]
#![forbid(unsafe_code)]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod error;
pub mod game;
pub mod geometry;
pub mod invade;
pub mod linalg;
pub mod lp;
pub mod multi;
pub mod poly;
pub mod preference;
pub mod rational;
pub mod single;
pub mod verdict;
pub mod witness;

mod budget;

pub use budget::Budget;
pub use error::{Error, Result};
pub use game::{
    correlated_payoff, expected_payoff, induced_correlated, is_symmetric, CorrelatedStrategy,
    Game, MixedProfile, MixedStrategy,
};
pub use poly::{sign_near_zero, ShareFamily, SharePolynomial, Sign};
pub use rational::Q;
