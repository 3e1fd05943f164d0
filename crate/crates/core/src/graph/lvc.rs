//! Largest Viable Cluster: the largest node set that induces a connected
//! subgraph in every layer simultaneously.

use std::collections::VecDeque;

use super::{Layer, MultiplexNetwork, NodeId};
use crate::error::{Error, Result};

struct Scratch {
    member: Vec<u64>,
    seen: Vec<u64>,
    stamp: u64,
}

impl Scratch {
    fn components(&mut self, layer: &Layer, set: &[usize]) -> Vec<Vec<usize>> {
        self.stamp += 1;
        let stamp = self.stamp;
        for &v in set {
            self.member[v] = stamp;
        }
        let mut out = Vec::new();
        let mut queue = VecDeque::new();
        for &start in set {
            if self.seen[start] == stamp {
                continue;
            }
            self.seen[start] = stamp;
            queue.push_back(start);
            let mut comp = Vec::new();
            while let Some(u) = queue.pop_front() {
                comp.push(u);
                for n in layer.neighbors(NodeId(u)) {
                    let v = n.node.0;
                    if self.member[v] == stamp && self.seen[v] != stamp {
                        self.seen[v] = stamp;
                        queue.push_back(v);
                    }
                }
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out
    }
}

/// All maximal node sets of size at least 2 that are connected in every
/// layer. These sets are pairwise disjoint. Returned largest first, ties
/// ordered by their sorted label lists.
pub fn viable_clusters(net: &MultiplexNetwork) -> Vec<Vec<NodeId>> {
    let n = net.node_count();
    let mut scratch = Scratch {
        member: vec![0; n],
        seen: vec![0; n],
        stamp: 0,
    };
    let mut pending: Vec<Vec<usize>> = vec![(0..n).collect()];
    let mut done = Vec::new();

    // Split candidate sets along the components of each layer restricted to
    // the set until every layer is connected on every remaining set.
    while let Some(set) = pending.pop() {
        if set.len() < 2 {
            continue;
        }
        let mut split = false;
        for layer in net.layers() {
            let comps = scratch.components(layer, &set);
            if comps.len() > 1 {
                pending.extend(comps);
                split = true;
                break;
            }
        }
        if !split {
            done.push(set);
        }
    }

    let mut keyed: Vec<(Vec<&str>, Vec<usize>)> = done
        .into_iter()
        .map(|set| {
            let mut labels: Vec<&str> = set.iter().map(|&i| net.labels[i].as_str()).collect();
            labels.sort_unstable();
            (labels, set)
        })
        .collect();
    keyed.sort_by(|(la, a), (lb, b)| b.len().cmp(&a.len()).then_with(|| la.cmp(lb)));
    keyed
        .into_iter()
        .map(|(_, set)| set.into_iter().map(NodeId).collect())
        .collect()
}

/// Sub-network induced on the Largest Viable Cluster. When no set of two or
/// more nodes is connected in every layer the result has no nodes.
pub fn largest_viable_cluster(net: &MultiplexNetwork) -> Result<MultiplexNetwork> {
    if net.layer_count() < 2 {
        return Err(Error::LayerCount {
            expected: "at least 2",
            found: net.layer_count(),
        });
    }
    let keep = viable_clusters(net).into_iter().next().unwrap_or_default();
    Ok(net.induced(&keep))
}
