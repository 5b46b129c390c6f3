//! Evolutionary-game dynamics of information diffusion on social networks.
//!
//! The crate models how a piece of information spreads through a network of
//! users who repeatedly decide between two strategies, forwarding or ignoring,
//! under fitness-driven strategy update rules. It provides:
//!
//! - [`game`]: the two-strategy payoff model, fitness, and the replicator
//!   dynamics of a fully-mixed population.
//! - [`graph`]: network generators (complete, k-regular, Erdős–Rényi,
//!   Barabási–Albert), edge-list loading, and degree statistics.
//! - [`sim`]: stochastic agent-based simulation of birth-death, death-birth
//!   and imitation updating, with deterministic seeded ensembles.
//! - [`theory`]: closed-form population dynamics per network class, the
//!   general diffusion ODE `dx/dt = β·e^(-εt)·x(1-x)(x+γ)` and its first
//!   integral.
//! - [`estimate`]: cascade ingestion, least-squares ODE fitting, payoff
//!   recovery, popularity scoring, a pulse-model baseline, and
//!   partial-data prediction.

pub mod error;
pub mod estimate;
pub mod game;
pub mod graph;
pub mod optim;
pub mod sim;
pub mod theory;
pub mod trajectory;

pub use error::{Error, Result};
pub use game::{DynamicsCoefficients, PayoffMatrix, PopulationState, SelectionIntensity};
pub use graph::{DegreeProfile, Graph};
pub use sim::{Strategy, UpdateRule};
pub use theory::NetworkClass;
pub use trajectory::Trajectory;
