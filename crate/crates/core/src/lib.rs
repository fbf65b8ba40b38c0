//! Approximate Nash equilibria of potential games whose players face private
//! convex constraints.
//!
//! The crate is organized around the pieces of one pipeline:
//!
//! * [`game`]: dense normal-form potential games, exact multilinear
//!   expectations and gradients;
//! * [`constraints`]: per-player constraints `g_{i,m}(x_i) <= 0`, Slater
//!   margins and `G_max`;
//! * [`congestion`]: routing games with gas budgets, compiled into a game
//!   plus constraints;
//! * [`solver`]: independent projected gradient descent on the regularized
//!   Lagrangian with closed-form multipliers;
//! * [`metrics`]: Nash gap via per-player best-response LPs and multiplier
//!   diagnostics.
//!
//! ```
//! use igd_core::congestion::{four_route_instance, HIGHWAY_SLOPE};
//! use igd_core::game::MixedProfile;
//! use igd_core::solver::{run, SolverParams};
//!
//! let (game, cs) = four_route_instance(&[13.0; 5], HIGHWAY_SLOPE)?.compile()?;
//! let params = SolverParams::new(1e-3, 2_000).with_record_every(100);
//! let out = run(&game, &cs, MixedProfile::uniform(game.space()), &params)?;
//! // Everyone ends up on the highway.
//! assert!(out.final_state.x.strategies().iter().all(|x| x[3] > 0.99));
//! # Ok::<(), igd_core::Error>(())
//! ```

// `!(v > 0.0)` is deliberate: NaN must fail range checks.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod congestion;
pub mod constraints;
mod error;
pub mod game;
pub mod lp;
pub mod metrics;
pub mod solver;

pub use error::{Error, Result};
