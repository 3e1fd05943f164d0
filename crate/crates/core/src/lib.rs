//! Spreading activation on single-layer and multiplex networks.
//!
//! * [`graph`]: the immutable multiplex model, edge-list ingestion, Largest
//!   Viable Cluster extraction and shortest-path "mindset streams".
//! * [`diffusion`]: the deterministic discrete-time simulator.
//! * [`spectral`]: Laplacians, the two-layer supra-Laplacian and diffusion
//!   regime classification.
//! * [`metrics`]: peak activation and time-of-peak extraction.
//! * [`stats`]: Cohen's d, Kruskal-Wallis and Kendall tau-b.

pub mod diffusion;
pub mod error;
pub mod fmt;
pub mod graph;
pub mod metrics;
pub mod spectral;
pub mod stats;

pub use diffusion::{
    ActivationState, Engine, LayerSelector, Recording, RunOutput, Seed, SimulationConfig,
};
pub use error::{Error, Result};
pub use graph::{MindsetStream, MultiplexNetwork, NetworkBuilder, NodeAttributes, NodeId, Valence};
pub use metrics::{ActivationTrace, LayerView, MetricRow};
pub use spectral::{Regime, SpectralReport};
pub use stats::{GroupComparison, KruskalWallis};
