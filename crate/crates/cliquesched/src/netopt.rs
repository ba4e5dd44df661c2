//! Network-optimization kernel: integral min-cost max-flow (successive
//! shortest paths with potentials), maximum-cardinality bipartite matching
//! (Hopcroft–Karp), and min-cost perfect bipartite matching.
//!
//! Every network built in this crate has non-negative arc costs, which the
//! flow routine requires.

use std::cmp::Reverse;
use std::collections::BinaryHeap;

/// A directed flow network with integral capacities and non-negative
/// integral costs.
#[derive(Debug, Clone)]
pub struct FlowNetwork {
    node_count: usize,
    source: usize,
    sink: usize,
    arcs: Vec<FlowArc>,
}

#[derive(Debug, Clone, Copy)]
pub struct FlowArc {
    pub tail: usize,
    pub head: usize,
    pub capacity: u64,
    pub cost: u64,
}

/// An integral flow: per-arc amounts, total value and total cost.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FlowResult {
    pub value: u64,
    pub cost: u64,
    /// Flow on each arc, indexed as the arcs were added.
    pub arc_flow: Vec<u64>,
}

impl FlowNetwork {
    pub fn new(node_count: usize, source: usize, sink: usize) -> Self {
        assert!(source < node_count && sink < node_count, "source/sink out of range");
        assert_ne!(source, sink, "source and sink must differ");
        FlowNetwork { node_count, source, sink, arcs: Vec::new() }
    }

    pub fn add_node(&mut self) -> usize {
        self.node_count += 1;
        self.node_count - 1
    }

    pub fn add_arc(&mut self, tail: usize, head: usize, capacity: u64, cost: u64) -> usize {
        assert!(tail < self.node_count && head < self.node_count, "arc endpoint out of range");
        self.arcs.push(FlowArc { tail, head, capacity, cost });
        self.arcs.len() - 1
    }

    pub fn node_count(&self) -> usize {
        self.node_count
    }

    pub fn arcs(&self) -> &[FlowArc] {
        &self.arcs
    }

    pub fn source(&self) -> usize {
        self.source
    }

    pub fn sink(&self) -> usize {
        self.sink
    }

    /// Maximum flow of minimum cost, optionally stopping at `limit` units.
    ///
    /// Successive shortest paths with Johnson potentials; Dijkstra ties are
    /// broken by node index and arcs are scanned in insertion order, so the
    /// returned flow is deterministic.
    pub fn min_cost_max_flow(&self, limit: Option<u64>) -> FlowResult {
        let n = self.node_count;
        // Paired residual edges: 2k forward for arc k, 2k+1 backward.
        let mut head = Vec::with_capacity(self.arcs.len() * 2);
        let mut residual = Vec::with_capacity(self.arcs.len() * 2);
        let mut cost = Vec::with_capacity(self.arcs.len() * 2);
        let mut adjacency: Vec<Vec<usize>> = vec![Vec::new(); n];
        for (k, arc) in self.arcs.iter().enumerate() {
            adjacency[arc.tail].push(2 * k);
            head.push(arc.head);
            residual.push(arc.capacity);
            cost.push(arc.cost as i64);
            adjacency[arc.head].push(2 * k + 1);
            head.push(arc.tail);
            residual.push(0);
            cost.push(-(arc.cost as i64));
        }

        let mut potential = vec![0i64; n];
        let mut value: u64 = 0;
        let mut total_cost: i128 = 0;
        let mut dist: Vec<Option<i64>> = vec![None; n];
        let mut parent_edge = vec![usize::MAX; n];

        loop {
            let remaining = match limit {
                Some(l) if value >= l => break,
                Some(l) => l - value,
                None => u64::MAX,
            };

            dist.iter_mut().for_each(|d| *d = None);
            dist[self.source] = Some(0);
            let mut heap = BinaryHeap::new();
            heap.push(Reverse((0i64, self.source)));
            while let Some(Reverse((d, u))) = heap.pop() {
                if dist[u] != Some(d) {
                    continue;
                }
                for &e in &adjacency[u] {
                    if residual[e] == 0 {
                        continue;
                    }
                    let v = head[e];
                    let nd = d + cost[e] + potential[u] - potential[v];
                    debug_assert!(nd >= d, "reduced costs must stay non-negative");
                    if dist[v].map_or(true, |cur| nd < cur) {
                        dist[v] = Some(nd);
                        parent_edge[v] = e;
                        heap.push(Reverse((nd, v)));
                    }
                }
            }
            if dist[self.sink].is_none() {
                break;
            }
            for v in 0..n {
                if let Some(d) = dist[v] {
                    potential[v] += d;
                }
            }

            let mut push = remaining;
            let mut v = self.sink;
            while v != self.source {
                let e = parent_edge[v];
                push = push.min(residual[e]);
                v = head[e ^ 1];
            }
            let mut v = self.sink;
            while v != self.source {
                let e = parent_edge[v];
                residual[e] -= push;
                residual[e ^ 1] += push;
                total_cost += (push as i128) * (cost[e] as i128);
                v = head[e ^ 1];
            }
            value += push;
        }

        let arc_flow: Vec<u64> = (0..self.arcs.len()).map(|k| residual[2 * k + 1]).collect();
        assert!(total_cost >= 0, "non-negative arc costs yield non-negative total cost");
        let result = FlowResult { value, cost: total_cost as u64, arc_flow };
        debug_assert!(
            !residual_has_negative_cycle(self, &result),
            "returned flow must admit no cost-reducing residual cycle"
        );
        result
    }
}

/// Whether the residual network of `result` contains a negative-cost directed
/// cycle. A min-cost flow of its value never does; this is the optimality
/// certificate checked after every solve in test builds.
pub fn residual_has_negative_cycle(network: &FlowNetwork, result: &FlowResult) -> bool {
    let n = network.node_count;
    let mut residual_arcs: Vec<(usize, usize, i64)> = Vec::new();
    for (k, arc) in network.arcs().iter().enumerate() {
        let flow = result.arc_flow[k];
        if flow < arc.capacity {
            residual_arcs.push((arc.tail, arc.head, arc.cost as i64));
        }
        if flow > 0 {
            residual_arcs.push((arc.head, arc.tail, -(arc.cost as i64)));
        }
    }
    // Bellman–Ford from a virtual super-source (all distances start 0): a
    // relaxation on the n-th pass certifies a negative cycle.
    let mut dist = vec![0i64; n];
    for pass in 0..n {
        let mut relaxed = false;
        for &(u, v, c) in &residual_arcs {
            if dist[u] + c < dist[v] {
                dist[v] = dist[u] + c;
                relaxed = true;
            }
        }
        if !relaxed {
            return false;
        }
        if pass == n - 1 && relaxed {
            return true;
        }
    }
    false
}

/// Maximum-cardinality matching in a bipartite graph, Hopcroft–Karp.
/// Returns, per left node, the matched right node if any. Deterministic for
/// a fixed edge order.
pub fn max_bipartite_matching(
    left_size: usize,
    right_size: usize,
    edges: &[(usize, usize)],
) -> Vec<Option<usize>> {
    let mut adjacency: Vec<Vec<usize>> = vec![Vec::new(); left_size];
    for &(l, r) in edges {
        assert!(l < left_size && r < right_size, "matching edge out of range");
        adjacency[l].push(r);
    }
    let mut pair_left: Vec<Option<usize>> = vec![None; left_size];
    let mut pair_right: Vec<Option<usize>> = vec![None; right_size];
    let mut layer: Vec<Option<u32>> = vec![None; left_size];

    loop {
        // BFS from free left nodes, layering left nodes by alternating depth.
        let mut queue = std::collections::VecDeque::new();
        for (u, m) in pair_left.iter().enumerate() {
            layer[u] = if m.is_none() {
                queue.push_back(u);
                Some(0)
            } else {
                None
            };
        }
        let mut augmenting = false;
        while let Some(u) = queue.pop_front() {
            let d = layer[u].expect("queued nodes are layered");
            for &v in &adjacency[u] {
                match pair_right[v] {
                    None => augmenting = true,
                    Some(u2) => {
                        if layer[u2].is_none() {
                            layer[u2] = Some(d + 1);
                            queue.push_back(u2);
                        }
                    }
                }
            }
        }
        if !augmenting {
            break;
        }
        for u in 0..left_size {
            if pair_left[u].is_none() {
                try_augment(u, &adjacency, &mut pair_left, &mut pair_right, &mut layer);
            }
        }
    }
    pair_left
}

fn try_augment(
    u: usize,
    adjacency: &[Vec<usize>],
    pair_left: &mut [Option<usize>],
    pair_right: &mut [Option<usize>],
    layer: &mut [Option<u32>],
) -> bool {
    let d = match layer[u] {
        Some(d) => d,
        None => return false,
    };
    for &v in &adjacency[u] {
        let extend = match pair_right[v] {
            None => true,
            Some(u2) => {
                layer[u2] == Some(d + 1)
                    && try_augment(u2, adjacency, pair_left, pair_right, layer)
            }
        };
        if extend {
            pair_left[u] = Some(v);
            pair_right[v] = Some(u);
            return true;
        }
    }
    layer[u] = None;
    false
}

/// Minimum-cost matching saturating the left side, by reduction to min-cost
/// max-flow. Returns the matched right node per left node and the total
/// cost, or `None` when no left-saturating matching exists.
pub fn min_cost_perfect_matching(
    left_size: usize,
    right_size: usize,
    weighted_edges: &[(usize, usize, u64)],
) -> Option<(Vec<usize>, u64)> {
    if left_size == 0 {
        return Some((Vec::new(), 0));
    }
    let source = left_size + right_size;
    let sink = source + 1;
    let mut network = FlowNetwork::new(left_size + right_size + 2, source, sink);
    for l in 0..left_size {
        network.add_arc(source, l, 1, 0);
    }
    let mut edge_arcs = Vec::with_capacity(weighted_edges.len());
    for &(l, r, w) in weighted_edges {
        assert!(l < left_size && r < right_size, "matching edge out of range");
        edge_arcs.push(network.add_arc(l, left_size + r, 1, w));
    }
    for r in 0..right_size {
        network.add_arc(left_size + r, sink, 1, 0);
    }
    let result = network.min_cost_max_flow(None);
    if result.value < left_size as u64 {
        return None;
    }
    let mut matched = vec![usize::MAX; left_size];
    for (idx, &arc) in edge_arcs.iter().enumerate() {
        if result.arc_flow[arc] == 1 {
            matched[weighted_edges[idx].0] = weighted_edges[idx].1;
        }
    }
    debug_assert!(matched.iter().all(|&r| r != usize::MAX));
    Some((matched, result.cost))
}
