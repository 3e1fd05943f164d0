//! Multiplex network model.
//!
//! A [`MultiplexNetwork`] is a node registry shared by one or more undirected
//! [`Layer`]s. Every node has a replica in every layer; a node that never
//! appears in a layer's edge list simply has empty adjacency there. Networks
//! are immutable once built and can be shared freely across threads.

mod io;
mod lvc;
mod stream;

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use io::{load_network, read_attributes, read_layer, write_layer, LoadReport};
pub use lvc::{largest_viable_cluster, viable_clusters};
pub use stream::{mindset_stream, MindsetStream};

/// Dense handle for a node, valid for the network that issued it.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct NodeId(usize);

impl NodeId {
    pub fn new(index: usize) -> Self {
        NodeId(index)
    }

    pub fn index(self) -> usize {
        self.0
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Valence {
    Positive,
    Negative,
    Neutral,
}

impl Valence {
    pub fn as_str(self) -> &'static str {
        match self {
            Valence::Positive => "positive",
            Valence::Negative => "negative",
            Valence::Neutral => "neutral",
        }
    }
}

impl fmt::Display for Valence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Valence {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "positive" => Ok(Valence::Positive),
            "negative" => Ok(Valence::Negative),
            "neutral" => Ok(Valence::Neutral),
            other => Err(format!("unknown valence `{other}`")),
        }
    }
}

/// Per-node annotations ingested from an attribute file.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct NodeAttributes {
    pub valence: Option<Valence>,
    pub frequency: Option<f64>,
    /// Keys other than `valence` and `frequency`, kept verbatim.
    pub extra: BTreeMap<String, String>,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Neighbor {
    pub node: NodeId,
    pub weight: f64,
}

/// One undirected edge layer over the shared node registry.
#[derive(Clone, Debug, PartialEq)]
pub struct Layer {
    name: String,
    // Sorted by neighbor index.
    adjacency: Vec<Vec<Neighbor>>,
    edge_count: usize,
}

impl Layer {
    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    pub fn neighbors(&self, node: NodeId) -> &[Neighbor] {
        &self.adjacency[node.0]
    }

    pub fn degree(&self, node: NodeId) -> usize {
        self.adjacency[node.0].len()
    }

    /// Sum of incident edge weights.
    pub fn strength(&self, node: NodeId) -> f64 {
        self.adjacency[node.0].iter().map(|n| n.weight).sum()
    }

    pub fn has_edge(&self, a: NodeId, b: NodeId) -> bool {
        self.adjacency[a.0]
            .binary_search_by_key(&b, |n| n.node)
            .is_ok()
    }

    /// Edges as `(low, high, weight)` in ascending order.
    pub fn edges(&self) -> impl Iterator<Item = (NodeId, NodeId, f64)> + '_ {
        self.adjacency.iter().enumerate().flat_map(|(u, nbrs)| {
            nbrs.iter()
                .filter(move |n| n.node.0 > u)
                .map(move |n| (NodeId(u), n.node, n.weight))
        })
    }

    /// True when some edge weight differs from the default of 1.
    pub fn is_weighted(&self) -> bool {
        self.edges().any(|(_, _, w)| w != 1.0)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct MultiplexNetwork {
    labels: Vec<String>,
    index: HashMap<String, NodeId>,
    layers: Vec<Layer>,
    attributes: BTreeMap<NodeId, NodeAttributes>,
}

impl MultiplexNetwork {
    pub fn node_count(&self) -> usize {
        self.labels.len()
    }

    pub fn layer_count(&self) -> usize {
        self.layers.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn layers(&self) -> &[Layer] {
        &self.layers
    }

    pub fn layer_names(&self) -> impl Iterator<Item = &str> {
        self.layers.iter().map(|l| l.name.as_str())
    }

    pub fn layer_index(&self, name: &str) -> Result<usize> {
        self.layers
            .iter()
            .position(|l| l.name == name)
            .ok_or_else(|| Error::UnknownLayer(name.to_string()))
    }

    pub fn layer(&self, name: &str) -> Result<&Layer> {
        self.layer_index(name).map(|i| &self.layers[i])
    }

    pub fn nodes(&self) -> impl ExactSizeIterator<Item = NodeId> {
        (0..self.labels.len()).map(NodeId)
    }

    pub fn label(&self, node: NodeId) -> &str {
        &self.labels[node.0]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn node(&self, label: &str) -> Option<NodeId> {
        self.index.get(label).copied()
    }

    pub fn require_node(&self, label: &str) -> Result<NodeId> {
        self.node(label)
            .ok_or_else(|| Error::UnknownNode(label.to_string()))
    }

    pub fn attributes(&self, node: NodeId) -> Option<&NodeAttributes> {
        self.attributes.get(&node)
    }

    pub fn degree(&self, layer: &str, node: NodeId) -> Result<usize> {
        Ok(self.layer(layer)?.degree(node))
    }

    pub fn strength(&self, layer: &str, node: NodeId) -> Result<f64> {
        Ok(self.layer(layer)?.strength(node))
    }

    pub fn neighbors(&self, layer: &str, node: NodeId) -> Result<Vec<NodeId>> {
        Ok(self
            .layer(layer)?
            .neighbors(node)
            .iter()
            .map(|n| n.node)
            .collect())
    }

    /// Sub-network induced on `keep`. Surviving nodes keep their relative
    /// registry order; every layer is retained, possibly empty.
    pub fn induced(&self, keep: &[NodeId]) -> MultiplexNetwork {
        let mut sorted = keep.to_vec();
        sorted.sort_unstable();
        sorted.dedup();
        let mut remap = vec![None; self.labels.len()];
        for (new, old) in sorted.iter().enumerate() {
            remap[old.0] = Some(NodeId(new));
        }

        let labels: Vec<String> = sorted.iter().map(|n| self.labels[n.0].clone()).collect();
        let index = labels
            .iter()
            .enumerate()
            .map(|(i, l)| (l.clone(), NodeId(i)))
            .collect();
        let layers = self
            .layers
            .iter()
            .map(|layer| {
                let adjacency: Vec<Vec<Neighbor>> = sorted
                    .iter()
                    .map(|old| {
                        layer.adjacency[old.0]
                            .iter()
                            .filter_map(|n| {
                                remap[n.node.0].map(|node| Neighbor {
                                    node,
                                    weight: n.weight,
                                })
                            })
                            .collect()
                    })
                    .collect();
                let edge_count = adjacency.iter().map(Vec::len).sum::<usize>() / 2;
                Layer {
                    name: layer.name.clone(),
                    adjacency,
                    edge_count,
                }
            })
            .collect();
        let attributes = self
            .attributes
            .iter()
            .filter_map(|(id, a)| remap[id.0].map(|n| (n, a.clone())))
            .collect();

        MultiplexNetwork {
            labels,
            index,
            layers,
            attributes,
        }
    }
}

// Edge weights keyed by (low index, high index).
type EdgeMap = BTreeMap<(usize, usize), f64>;

/// Incremental construction of a [`MultiplexNetwork`].
#[derive(Debug, Default)]
pub struct NetworkBuilder {
    labels: Vec<String>,
    index: HashMap<String, NodeId>,
    layers: Vec<(String, EdgeMap)>,
    attributes: BTreeMap<NodeId, NodeAttributes>,
}

impl NetworkBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    /// Adds an empty layer and returns its position.
    pub fn add_layer(&mut self, name: &str) -> Result<usize> {
        if self.layers.iter().any(|(n, _)| n == name) {
            return Err(Error::DuplicateLayer(name.to_string()));
        }
        self.layers.push((name.to_string(), BTreeMap::new()));
        Ok(self.layers.len() - 1)
    }

    /// Registers `label` if needed and returns its id.
    pub fn add_node(&mut self, label: &str) -> NodeId {
        if let Some(&id) = self.index.get(label) {
            return id;
        }
        let id = NodeId(self.labels.len());
        self.labels.push(label.to_string());
        self.index.insert(label.to_string(), id);
        id
    }

    /// Adds an undirected edge. Repeating an edge with the same weight is a
    /// no-op; repeating it with a different weight is an error.
    pub fn add_edge(&mut self, layer: usize, a: &str, b: &str, weight: f64) -> Result<()> {
        let invalid = |reason| Error::InvalidEdge {
            layer: self.layers[layer].0.clone(),
            a: a.to_string(),
            b: b.to_string(),
            reason,
        };
        if a.is_empty() || b.is_empty() {
            return Err(invalid("empty label"));
        }
        if a == b {
            return Err(invalid("self-loop"));
        }
        if !weight.is_finite() || weight < 0.0 {
            return Err(invalid("weight must be finite and non-negative"));
        }
        let ia = self.add_node(a).0;
        let ib = self.add_node(b).0;
        let key = (ia.min(ib), ia.max(ib));
        let (name, edges) = &mut self.layers[layer];
        match edges.get(&key) {
            Some(&existing) if existing != weight => Err(Error::ContradictoryWeight {
                layer: name.clone(),
                a: a.to_string(),
                b: b.to_string(),
                first: existing,
                second: weight,
            }),
            Some(_) => Ok(()),
            None => {
                edges.insert(key, weight);
                Ok(())
            }
        }
    }

    pub fn set_attributes(&mut self, node: NodeId, attributes: NodeAttributes) {
        self.attributes.insert(node, attributes);
    }

    pub fn node(&self, label: &str) -> Option<NodeId> {
        self.index.get(label).copied()
    }

    pub fn attributes_mut(&mut self, node: NodeId) -> &mut NodeAttributes {
        self.attributes.entry(node).or_default()
    }

    pub fn build(self) -> MultiplexNetwork {
        let n = self.labels.len();
        let layers = self
            .layers
            .into_iter()
            .map(|(name, edges)| {
                let mut adjacency = vec![Vec::new(); n];
                for (&(a, b), &weight) in &edges {
                    adjacency[a].push(Neighbor {
                        node: NodeId(b),
                        weight,
                    });
                    adjacency[b].push(Neighbor {
                        node: NodeId(a),
                        weight,
                    });
                }
                for nbrs in &mut adjacency {
                    nbrs.sort_unstable_by_key(|n| n.node);
                }
                Layer {
                    name,
                    adjacency,
                    edge_count: edges.len(),
                }
            })
            .collect();
        MultiplexNetwork {
            labels: self.labels,
            index: self.index,
            layers,
            attributes: self.attributes,
        }
    }
}
