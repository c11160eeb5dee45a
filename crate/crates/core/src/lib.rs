//! Robust controller synthesis for scLTL specifications over stochastic
//! linear systems.
//!
//! The pipeline reduces a linear-Gaussian model, grids the reduced state
//! space into a finite MDP, certifies an approximate probabilistic
//! simulation relation between the two, runs robust dynamic programming on
//! the product with a specification DFA, and refines the resulting policy
//! into a controller for the original system.

pub mod abstraction;
pub mod error;
pub mod linalg;
pub mod logic;
pub mod mdp;
pub mod model;
pub mod pipeline;
pub mod refinement;
pub mod relation;
pub mod rng;
pub mod synthesis;

pub use error::{Error, Result};
