//! Test-only helpers: an independent naive simulator working on dense 0/1
//! adjacency matrices, and random network generators.
#![allow(dead_code, clippy::needless_range_loop)]

use multispread_core::{MultiplexNetwork, NetworkBuilder};
use rand::Rng;

/// Dense multiplex: `adj[layer][u][v]`.
#[derive(Clone, Debug)]
pub struct Dense {
    pub n: usize,
    pub adj: Vec<Vec<Vec<bool>>>,
}

impl Dense {
    pub fn layers(&self) -> usize {
        self.adj.len()
    }

    /// Node `i` is labelled `n{i}` and registered in index order; layers are
    /// named `L0`, `L1`, ...
    pub fn to_network(&self) -> MultiplexNetwork {
        let mut b = NetworkBuilder::new();
        for i in 0..self.n {
            b.add_node(&format!("n{i}"));
        }
        for (l, m) in self.adj.iter().enumerate() {
            let id = b.add_layer(&format!("L{l}")).unwrap();
            assert_eq!(id, l);
            for u in 0..self.n {
                for v in u + 1..self.n {
                    if m[u][v] {
                        b.add_edge(id, &format!("n{u}"), &format!("n{v}"), 1.0)
                            .unwrap();
                    }
                }
            }
        }
        b.build()
    }

    pub fn union_connected(&self) -> bool {
        let mut seen = vec![false; self.n];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(u) = stack.pop() {
            for v in 0..self.n {
                if !seen[v] && self.adj.iter().any(|m| m[u][v]) {
                    seen[v] = true;
                    stack.push(v);
                }
            }
        }
        seen.iter().all(|&s| s)
    }

    pub fn layer_connected(&self, l: usize) -> bool {
        let mut seen = vec![false; self.n];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(u) = stack.pop() {
            for v in 0..self.n {
                if !seen[v] && self.adj[l][u][v] {
                    seen[v] = true;
                    stack.push(v);
                }
            }
        }
        seen.iter().all(|&s| s)
    }
}

/// Layer built from a bitmask over the pairs `(u, v)`, `u < v`, in
/// lexicographic order.
pub fn layer_from_mask(n: usize, mask: u64) -> Vec<Vec<bool>> {
    let mut m = vec![vec![false; n]; n];
    let mut bit = 0;
    for u in 0..n {
        for v in u + 1..n {
            if mask >> bit & 1 == 1 {
                m[u][v] = true;
                m[v][u] = true;
            }
            bit += 1;
        }
    }
    m
}

pub fn pair_count(n: usize) -> usize {
    n * (n - 1) / 2
}

/// Random spanning tree plus Bernoulli(`extra`) edges.
pub fn random_connected_layer<R: Rng>(rng: &mut R, n: usize, extra: f64) -> Vec<Vec<bool>> {
    let mut m = vec![vec![false; n]; n];
    let mut order: Vec<usize> = (0..n).collect();
    for i in (1..n).rev() {
        let j = rng.gen_range(0..=i);
        order.swap(i, j);
    }
    for i in 1..n {
        let a = order[i];
        let b = order[rng.gen_range(0..i)];
        m[a][b] = true;
        m[b][a] = true;
    }
    for u in 0..n {
        for v in u + 1..n {
            if rng.gen_bool(extra) {
                m[u][v] = true;
                m[v][u] = true;
            }
        }
    }
    m
}

pub fn random_connected_multiplex<R: Rng>(
    rng: &mut R,
    n: usize,
    layers: usize,
    extra: f64,
) -> Dense {
    Dense {
        n,
        adj: (0..layers)
            .map(|_| random_connected_layer(rng, n, extra))
            .collect(),
    }
}

#[derive(Clone, Copy, Debug)]
pub struct NaiveParams {
    pub retention: f64,
    pub coupling: f64,
    pub decay: f64,
    pub suppress: f64,
}

/// One synchronous step written directly from the transfer rules, with the
/// same sender order and per-sender addition order as the engine.
/// `e[u][l]` is the energy of replica `u` in layer `l`.
pub fn naive_step(g: &Dense, e: &[Vec<f64>], p: NaiveParams) -> Vec<Vec<f64>> {
    let n = g.n;
    let layers = g.layers();
    let mut next = vec![vec![0.0; layers]; n];
    let r = p.retention;
    let p_par = 1.0 / (1.0 + p.coupling);
    let p_perp = p.coupling / (1.0 + p.coupling);
    for u in 0..n {
        for l in 0..layers {
            let x = e[u][l];
            if x <= 0.0 {
                continue;
            }
            if layers == 1 {
                let deg = (0..n).filter(|&v| g.adj[0][u][v]).count();
                if deg == 0 {
                    next[u][0] += x;
                } else {
                    next[u][0] += r * x;
                    let share = x * (1.0 - r) / deg as f64;
                    for v in 0..n {
                        if g.adj[0][u][v] {
                            next[v][0] += share;
                        }
                    }
                }
                continue;
            }
            let moved = x * (1.0 - r);
            next[u][l] += r * x;
            let intra = moved * p_par;
            let deg = (0..n).filter(|&v| g.adj[l][u][v]).count();
            if deg == 0 {
                next[u][l] += intra;
            } else {
                let share = intra / deg as f64;
                for v in 0..n {
                    if g.adj[l][u][v] {
                        next[v][l] += share;
                    }
                }
            }
            let routed = moved * p_perp / (layers - 1) as f64;
            for l2 in 0..layers {
                if l2 == l {
                    continue;
                }
                let deg2 = (0..n).filter(|&v| g.adj[l2][u][v]).count();
                if deg2 == 0 {
                    next[u][l2] += routed;
                } else {
                    let share = routed / deg2 as f64;
                    for v in 0..n {
                        if g.adj[l2][u][v] {
                            next[v][l2] += share;
                        }
                    }
                }
            }
        }
    }
    if p.decay > 0.0 {
        for row in &mut next {
            for x in row.iter_mut() {
                *x *= 1.0 - p.decay;
            }
        }
    }
    if p.suppress > 0.0 {
        for row in &mut next {
            for x in row.iter_mut() {
                if *x < p.suppress {
                    *x = 0.0;
                }
            }
        }
    }
    next
}

/// States for `t = 0..=steps`.
pub fn naive_run(
    g: &Dense,
    initial: Vec<Vec<f64>>,
    p: NaiveParams,
    steps: usize,
) -> Vec<Vec<Vec<f64>>> {
    let mut out = vec![initial];
    for _ in 0..steps {
        let next = naive_step(g, out.last().unwrap(), p);
        out.push(next);
    }
    out
}
