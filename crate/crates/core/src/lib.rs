//! Agent-based simulator for human-AI collaboration regimes.
//!
//! The crate measures whether a simulated population of problem solvers is
//! amplified or displaced by an AI assistant. Four metrics drive everything:
//! the amplification index CAI*, the dependency ratio D, the human reliance
//! index HRI and the human cognitive drift rate HCDR ([`metrics`]). Agents
//! ([`agents`]) solve tasks drawn from a family-structured environment
//! ([`environment`]), learn when they work unaided, learn weakly and atrophy
//! when they delegate, and grow dependent on the assistant. The
//! [`engine`] runs the three-phase protocol with periodic AI-off
//! evaluations, and [`lab`] orchestrates multi-seed sweeps and the
//! constrained search over the atrophy rate.

pub mod agents;
pub mod engine;
pub mod environment;
pub mod error;
pub mod lab;
pub mod metrics;
pub mod seeding;

pub use error::{Error, Result};
