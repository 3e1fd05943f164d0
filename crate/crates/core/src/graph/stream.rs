use std::collections::VecDeque;

use super::{Layer, MultiplexNetwork, NodeId, Valence};
use crate::error::{Error, Result};

/// Union of all shortest paths between two nodes within one layer.
#[derive(Clone, Debug, PartialEq)]
pub struct MindsetStream {
    pub layer: String,
    pub source: NodeId,
    pub target: NodeId,
    /// Hop count of every shortest path, `None` when the nodes are
    /// disconnected in the layer.
    pub path_length: Option<usize>,
    /// Nodes on at least one shortest path, ascending.
    pub nodes: Vec<NodeId>,
    /// Edges on at least one shortest path, oriented from source side to
    /// target side, ascending.
    pub edges: Vec<(NodeId, NodeId)>,
    /// Valence of each entry in `nodes`, when annotated.
    pub valences: Vec<Option<Valence>>,
}

impl MindsetStream {
    pub fn is_connected(&self) -> bool {
        self.path_length.is_some()
    }
}

fn bfs(layer: &Layer, n: usize, from: NodeId) -> Vec<Option<usize>> {
    let mut dist = vec![None; n];
    dist[from.0] = Some(0);
    let mut queue = VecDeque::from([from.0]);
    while let Some(u) = queue.pop_front() {
        let du = dist[u].expect("queued nodes have a distance");
        for nb in layer.neighbors(NodeId(u)) {
            let v = nb.node.0;
            if dist[v].is_none() {
                dist[v] = Some(du + 1);
                queue.push_back(v);
            }
        }
    }
    dist
}

pub fn mindset_stream(
    net: &MultiplexNetwork,
    layer: &str,
    source: NodeId,
    target: NodeId,
) -> Result<MindsetStream> {
    let layer_ref = net.layer(layer)?;
    let n = net.node_count();
    for id in [source, target] {
        if id.0 >= n {
            return Err(Error::UnknownNode(format!("#{}", id.0)));
        }
    }
    if source == target {
        return Err(Error::InvalidConfig(
            "mindset stream endpoints must differ".into(),
        ));
    }

    let from_source = bfs(layer_ref, n, source);
    let mut stream = MindsetStream {
        layer: layer.to_string(),
        source,
        target,
        path_length: from_source[target.0],
        nodes: Vec::new(),
        edges: Vec::new(),
        valences: Vec::new(),
    };
    let Some(length) = stream.path_length else {
        return Ok(stream);
    };
    let from_target = bfs(layer_ref, n, target);

    let on_path = |u: usize| match (from_source[u], from_target[u]) {
        (Some(a), Some(b)) => a + b == length,
        _ => false,
    };
    for u in (0..n).filter(|&u| on_path(u)) {
        stream.nodes.push(NodeId(u));
        let ds = from_source[u].unwrap();
        for nb in layer_ref.neighbors(NodeId(u)) {
            let v = nb.node.0;
            if from_target[v].is_some_and(|dt| ds + 1 + dt == length) {
                stream.edges.push((NodeId(u), nb.node));
            }
        }
    }
    stream.valences = stream
        .nodes
        .iter()
        .map(|&id| net.attributes(id).and_then(|a| a.valence))
        .collect();
    Ok(stream)
}
