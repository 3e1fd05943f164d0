//! Discrete-time spreading activation.
//!
//! Every step is synchronous: all transfers are computed from the state at
//! `t` and summed into a fresh state for `t + 1`. A replica `u[l]` holding
//! energy `e` keeps `R·e` and moves `m = (1 − R)·e`:
//!
//! * single layer: `m / deg(u)` to each neighbour;
//! * multiplex: `m·p∥ / deg_l(u)` to each neighbour in layer `l`, and for each
//!   other layer `l'` the amount `m·p⊥ / (|L| − 1)` passes through the replica
//!   `u[l']` and is split as `… / deg_l'(u)` over its neighbours in `l'` within
//!   the same step. With `p∥ = 1/(1 + D_x)` and `p⊥ = D_x/(1 + D_x)`.
//!
//! Energy that has nowhere to go stays put: a node without neighbours in a
//! single-layer network keeps everything, a replica without neighbours in its
//! own layer keeps the intra-layer share, and a replica `u[l']` without
//! neighbours absorbs the pass-through amount.
//!
//! After transfers every entry is multiplied by `1 − decay`, then entries
//! below `suppress` are zeroed.
//!
//! Summation order is fixed so runs are bit-reproducible: senders are visited
//! by ascending node index, then ascending layer index; within a sender the
//! retained share is added first, then intra-layer shares by ascending
//! neighbour, then pass-through shares by ascending layer and neighbour.

use std::fmt;

use crate::error::{Error, Result};
use crate::graph::{Layer, MultiplexNetwork, NodeId};

/// Which replicas of a seed label receive energy.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LayerSelector {
    Named(String),
    All,
}

impl fmt::Display for LayerSelector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LayerSelector::Named(name) => f.write_str(name),
            LayerSelector::All => f.write_str("all"),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Seed {
    pub label: String,
    pub layer: LayerSelector,
    pub amount: f64,
}

impl Seed {
    pub fn new(label: impl Into<String>, layer: LayerSelector, amount: f64) -> Self {
        Seed {
            label: label.into(),
            layer,
            amount,
        }
    }
}

/// Free parameters of one simulation.
#[derive(Clone, Debug, PartialEq)]
pub struct SimulationConfig {
    /// Fraction `R` of its energy a replica keeps each step.
    pub retention: f64,
    /// Inter-layer coupling `D_x`; ignored on single-layer networks.
    pub coupling: f64,
    pub decay: f64,
    pub suppress: f64,
    /// Number of steps `T`.
    pub horizon: usize,
    pub seeds: Vec<Seed>,
    /// Split by edge weight instead of neighbour count.
    pub weighted_split: bool,
    /// With [`LayerSelector::All`], divide a seed amount across replicas
    /// instead of giving each replica the full amount.
    pub seed_split: bool,
}

impl SimulationConfig {
    pub fn new(retention: f64, horizon: usize) -> Self {
        SimulationConfig {
            retention,
            coupling: 1.0,
            decay: 0.0,
            suppress: 0.0,
            horizon,
            seeds: Vec::new(),
            weighted_split: false,
            seed_split: false,
        }
    }

    pub fn with_coupling(mut self, coupling: f64) -> Self {
        self.coupling = coupling;
        self
    }

    pub fn with_seed(
        mut self,
        label: impl Into<String>,
        layer: LayerSelector,
        amount: f64,
    ) -> Self {
        self.seeds.push(Seed::new(label, layer, amount));
        self
    }

    pub fn validate(&self, net: &MultiplexNetwork) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidConfig(msg));
        if net.layer_count() == 0 {
            return bad("network has no layers".into());
        }
        if !(0.0..=1.0).contains(&self.retention) {
            return bad(format!("retention {} outside [0, 1]", self.retention));
        }
        if net.layer_count() > 1 && !(self.coupling.is_finite() && self.coupling > 0.0) {
            return bad(format!("coupling {} must be finite and > 0", self.coupling));
        }
        if !(0.0..=1.0).contains(&self.decay) {
            return bad(format!("decay {} outside [0, 1]", self.decay));
        }
        if !(self.suppress.is_finite() && self.suppress >= 0.0) {
            return bad(format!(
                "suppress {} must be finite and >= 0",
                self.suppress
            ));
        }
        if self.horizon < 1 {
            return bad("horizon must be at least 1".into());
        }
        if self.seeds.is_empty() {
            return bad("at least one seed is required".into());
        }
        for seed in &self.seeds {
            if !(seed.amount.is_finite() && seed.amount > 0.0) {
                return bad(format!(
                    "seed amount {} for `{}` must be > 0",
                    seed.amount, seed.label
                ));
            }
            net.require_node(&seed.label)?;
            if let LayerSelector::Named(layer) = &seed.layer {
                net.layer_index(layer)?;
            }
        }
        Ok(())
    }
}

/// `(p∥, p⊥)` for coupling `D_x`.
pub fn coupling_probabilities(coupling: f64) -> (f64, f64) {
    (1.0 / (1.0 + coupling), coupling / (1.0 + coupling))
}

/// Replica energies at one time step, stored node-major.
#[derive(Clone, Debug, PartialEq)]
pub struct ActivationState {
    time: usize,
    layers: usize,
    energy: Vec<f64>,
}

impl ActivationState {
    pub fn zeros(nodes: usize, layers: usize) -> Self {
        ActivationState {
            time: 0,
            layers,
            energy: vec![0.0; nodes * layers],
        }
    }

    pub fn time(&self) -> usize {
        self.time
    }

    pub fn layer_count(&self) -> usize {
        self.layers
    }

    pub fn node_count(&self) -> usize {
        self.energy.len().checked_div(self.layers).unwrap_or(0)
    }

    pub fn energy(&self, node: NodeId, layer: usize) -> f64 {
        self.energy[node.index() * self.layers + layer]
    }

    pub fn set_energy(&mut self, node: NodeId, layer: usize, value: f64) {
        self.energy[node.index() * self.layers + layer] = value;
    }

    /// Sum over all layers of one node.
    pub fn node_total(&self, node: NodeId) -> f64 {
        let start = node.index() * self.layers;
        self.energy[start..start + self.layers].iter().sum()
    }

    pub fn total(&self) -> f64 {
        self.energy.iter().sum()
    }

    /// Raw node-major buffer: entry `node * layers + layer`.
    pub fn as_slice(&self) -> &[f64] {
        &self.energy
    }
}

/// Initial state: seed amounts on their replicas, zero elsewhere.
pub fn seed(net: &MultiplexNetwork, config: &SimulationConfig) -> Result<ActivationState> {
    config.validate(net)?;
    let layers = net.layer_count();
    let mut state = ActivationState::zeros(net.node_count(), layers);
    for s in &config.seeds {
        let node = net.require_node(&s.label)?;
        match &s.layer {
            LayerSelector::Named(name) => {
                let l = net.layer_index(name)?;
                let e = state.energy(node, l) + s.amount;
                state.set_energy(node, l, e);
            }
            LayerSelector::All => {
                let amount = if config.seed_split {
                    s.amount / layers as f64
                } else {
                    s.amount
                };
                for l in 0..layers {
                    let e = state.energy(node, l) + amount;
                    state.set_energy(node, l, e);
                }
            }
        }
    }
    Ok(state)
}

/// Simulator bound to one network and one validated config.
#[derive(Debug)]
pub struct Engine<'a> {
    net: &'a MultiplexNetwork,
    config: &'a SimulationConfig,
    intra: f64,
    inter: f64,
    strengths: Vec<Vec<f64>>,
}

impl<'a> Engine<'a> {
    pub fn new(net: &'a MultiplexNetwork, config: &'a SimulationConfig) -> Result<Self> {
        config.validate(net)?;
        let (intra, inter) = if net.layer_count() > 1 {
            coupling_probabilities(config.coupling)
        } else {
            (1.0, 0.0)
        };
        let strengths = if config.weighted_split {
            net.layers()
                .iter()
                .map(|layer| net.nodes().map(|u| layer.strength(u)).collect())
                .collect()
        } else {
            Vec::new()
        };
        Ok(Engine {
            net,
            config,
            intra,
            inter,
            strengths,
        })
    }

    pub fn network(&self) -> &MultiplexNetwork {
        self.net
    }

    pub fn config(&self) -> &SimulationConfig {
        self.config
    }

    pub fn seed(&self) -> Result<ActivationState> {
        seed(self.net, self.config)
    }

    /// Adds `amount` spread over `u`'s neighbours in `layer` into `next`, or
    /// onto `u` itself when it has none.
    fn spread(&self, next: &mut [f64], layer_idx: usize, u: NodeId, amount: f64) {
        let layer: &Layer = &self.net.layers()[layer_idx];
        let layers = self.net.layer_count();
        let nbrs = layer.neighbors(u);
        if self.config.weighted_split {
            let strength = self.strengths[layer_idx][u.index()];
            if strength > 0.0 {
                for nb in nbrs {
                    next[nb.node.index() * layers + layer_idx] += amount * nb.weight / strength;
                }
                return;
            }
        } else if !nbrs.is_empty() {
            let share = amount / nbrs.len() as f64;
            for nb in nbrs {
                next[nb.node.index() * layers + layer_idx] += share;
            }
            return;
        }
        next[u.index() * layers + layer_idx] += amount;
    }

    fn finish(&self, mut next: Vec<f64>, time: usize) -> ActivationState {
        let keep = 1.0 - self.config.decay;
        if self.config.decay > 0.0 {
            next.iter_mut().for_each(|x| *x *= keep);
        }
        let threshold = self.config.suppress;
        if threshold > 0.0 {
            next.iter_mut()
                .filter(|x| **x < threshold)
                .for_each(|x| *x = 0.0);
        }
        ActivationState {
            time,
            layers: self.net.layer_count(),
            energy: next,
        }
    }

    fn step_single(&self, state: &ActivationState) -> ActivationState {
        let r = self.config.retention;
        let mut next = vec![0.0; state.energy.len()];
        let layer = &self.net.layers()[0];
        for u in self.net.nodes() {
            let e = state.energy[u.index()];
            if e <= 0.0 {
                continue;
            }
            let has_outlet = if self.config.weighted_split {
                self.strengths[0][u.index()] > 0.0
            } else {
                layer.degree(u) > 0
            };
            if !has_outlet {
                next[u.index()] += e;
                continue;
            }
            next[u.index()] += r * e;
            self.spread(&mut next, 0, u, e * (1.0 - r));
        }
        self.finish(next, state.time + 1)
    }

    fn step_multi(&self, state: &ActivationState) -> ActivationState {
        let r = self.config.retention;
        let layers = self.net.layer_count();
        let others = (layers - 1) as f64;
        let mut next = vec![0.0; state.energy.len()];
        for u in self.net.nodes() {
            for l in 0..layers {
                let e = state.energy[u.index() * layers + l];
                if e <= 0.0 {
                    continue;
                }
                let moved = e * (1.0 - r);
                next[u.index() * layers + l] += r * e;
                self.spread(&mut next, l, u, moved * self.intra);
                let routed = moved * self.inter / others;
                for target in (0..layers).filter(|&t| t != l) {
                    self.spread(&mut next, target, u, routed);
                }
            }
        }
        self.finish(next, state.time + 1)
    }

    /// One synchronous update, dispatching on layer count.
    pub fn step(&self, state: &ActivationState) -> ActivationState {
        if self.net.layer_count() == 1 {
            self.step_single(state)
        } else {
            self.step_multi(state)
        }
    }

    pub fn run(&self, recording: &Recording) -> Result<RunOutput> {
        let recorded: Vec<NodeId> = match recording {
            Recording::All => self.net.nodes().collect(),
            Recording::Nodes(nodes) => {
                if let Some(bad) = nodes.iter().find(|n| n.index() >= self.net.node_count()) {
                    return Err(Error::UnknownNode(format!("#{}", bad.index())));
                }
                nodes.clone()
            }
        };
        let layers = self.net.layer_count();
        let horizon = self.config.horizon;
        let mut data = Vec::with_capacity((horizon + 1) * recorded.len() * layers);
        let mut state = self.seed()?;
        let mut record = |s: &ActivationState| {
            for &node in &recorded {
                let start = node.index() * layers;
                data.extend_from_slice(&s.energy[start..start + layers]);
            }
        };
        record(&state);
        for _ in 0..horizon {
            state = self.step(&state);
            record(&state);
        }
        Ok(RunOutput {
            layer_names: self.net.layer_names().map(str::to_string).collect(),
            labels: recorded
                .iter()
                .map(|&n| self.net.label(n).to_string())
                .collect(),
            nodes: recorded,
            horizon,
            data,
        })
    }
}

fn require_layers(net: &MultiplexNetwork, single: bool) -> Result<()> {
    match (single, net.layer_count()) {
        (true, 1) => Ok(()),
        (false, n) if n >= 2 => Ok(()),
        (true, found) => Err(Error::LayerCount {
            expected: "exactly 1",
            found,
        }),
        (false, found) => Err(Error::LayerCount {
            expected: "at least 2",
            found,
        }),
    }
}

pub fn step_single_layer(
    net: &MultiplexNetwork,
    state: &ActivationState,
    config: &SimulationConfig,
) -> Result<ActivationState> {
    require_layers(net, true)?;
    Ok(Engine::new(net, config)?.step_single(state))
}

pub fn step_multiplex(
    net: &MultiplexNetwork,
    state: &ActivationState,
    config: &SimulationConfig,
) -> Result<ActivationState> {
    require_layers(net, false)?;
    Ok(Engine::new(net, config)?.step_multi(state))
}

/// Seeds and iterates `config.horizon` steps, recording `t = 0..=T`.
pub fn run(
    net: &MultiplexNetwork,
    config: &SimulationConfig,
    recording: &Recording,
) -> Result<RunOutput> {
    Engine::new(net, config)?.run(recording)
}

/// Which nodes a run keeps series for.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub enum Recording {
    #[default]
    All,
    Nodes(Vec<NodeId>),
}

/// Energy tensor of a run over recorded nodes, every layer, `t = 0..=T`.
#[derive(Clone, Debug, PartialEq)]
pub struct RunOutput {
    layer_names: Vec<String>,
    labels: Vec<String>,
    nodes: Vec<NodeId>,
    horizon: usize,
    // [t][recorded node][layer]
    data: Vec<f64>,
}

impl RunOutput {
    pub fn horizon(&self) -> usize {
        self.horizon
    }

    pub fn layer_names(&self) -> &[String] {
        &self.layer_names
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn nodes(&self) -> &[NodeId] {
        &self.nodes
    }

    /// Position of `label` among recorded nodes.
    pub fn position(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    pub fn layer_position(&self, layer: &str) -> Option<usize> {
        self.layer_names.iter().position(|l| l == layer)
    }

    pub fn energy(&self, t: usize, position: usize, layer: usize) -> f64 {
        let layers = self.layer_names.len();
        self.data[(t * self.labels.len() + position) * layers + layer]
    }

    /// Series of one replica over `t = 0..=T`.
    pub fn replica_series(&self, position: usize, layer: usize) -> Vec<f64> {
        (0..=self.horizon)
            .map(|t| self.energy(t, position, layer))
            .collect()
    }

    /// Series summed over all replicas of one node.
    pub fn aggregate_series(&self, position: usize) -> Vec<f64> {
        let layers = self.layer_names.len();
        (0..=self.horizon)
            .map(|t| (0..layers).map(|l| self.energy(t, position, l)).sum())
            .collect()
    }

    /// Total recorded energy at step `t`.
    pub fn total(&self, t: usize) -> f64 {
        let width = self.labels.len() * self.layer_names.len();
        self.data[t * width..(t + 1) * width].iter().sum()
    }
}
