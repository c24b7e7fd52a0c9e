//! Odd-cycle cut separation with odd-wheel lifting.
//!
//! Every literal `j` with a positive value gets two copies `j1` and `j2`, and
//! each conflict `(j, k)` becomes the edges `(j1, k2)` and `(j2, k1)` with
//! weight `(1 - x_j - x_k) / 2`. A path from `j1` to `j2` alternates sides, so
//! it closes an odd walk through `j` in the conflict graph, and the walk's
//! weight is below one half exactly when its odd-cycle inequality is
//! violated.

use std::cmp::{Ordering, Reverse};
use std::collections::{BTreeSet, BinaryHeap, HashMap};

use crate::cgraph::ConflictGraph;
use crate::model::{literal_row, FractionalPoint, Literal, Row};
use crate::sep_clique::order_candidates;

/// Literals at or below this value are left out of the auxiliary graph.
const SUPPORT_EPS: f64 = 1e-9;
/// Required margin below one half for the cycle cost.
const COST_EPS: f64 = 1e-9;

/// `sum of cycle + k * sum of center <= k` with `k = (len - 1) / 2`.
#[derive(Debug, Clone, PartialEq)]
pub struct OddCycleCut {
    /// Graph nodes in cycle order, smallest node first.
    pub cycle: Vec<usize>,
    /// Wheel center, sorted; may be empty.
    pub center: Vec<usize>,
    pub violation: f64,
}

impl OddCycleCut {
    pub fn rhs(&self) -> f64 {
        ((self.cycle.len() - 1) / 2) as f64
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct OddCycleSeparation {
    pub cuts: Vec<OddCycleCut>,
    /// Edges whose weight was negative and got raised to zero.
    pub clamped: usize,
}

/// The doubled graph over the literals with a positive value.
#[derive(Debug, Clone)]
pub struct AuxiliaryGraph {
    /// Conflict-graph node of each local vertex.
    pub nodes: Vec<usize>,
    /// `(neighbour, weight)` per local vertex, neighbours ascending.
    pub adj: Vec<Vec<(usize, f64)>>,
    pub clamped: usize,
}

impl AuxiliaryGraph {
    /// Copy `i` of local vertex `v` is auxiliary node `v + i * len`.
    pub fn n_aux_nodes(&self) -> usize {
        2 * self.nodes.len()
    }

    /// Auxiliary edges `(a, b, w)` with `a` on the first side.
    pub fn aux_edges(&self) -> Vec<(usize, usize, f64)> {
        let k = self.nodes.len();
        let mut out = Vec::new();
        for (j, l) in self.adj.iter().enumerate() {
            for &(v, w) in l {
                out.push((j, v + k, w));
            }
        }
        out
    }

    fn weight(&self, a: usize, b: usize) -> Option<f64> {
        let l = &self.adj[a];
        l.binary_search_by_key(&b, |e| e.0).ok().map(|i| l[i].1)
    }
}

pub fn build_auxiliary(g: &ConflictGraph, point: &FractionalPoint) -> AuxiliaryGraph {
    let nodes: Vec<usize> = (0..g.n_nodes()).filter(|&u| point.node_value(u) > SUPPORT_EPS).collect();
    let local: HashMap<usize, usize> = nodes.iter().enumerate().map(|(i, &u)| (u, i)).collect();
    let mut clamped = 0;
    let adj = nodes
        .iter()
        .map(|&u| {
            let xu = point.node_value(u);
            g.neighbors(u)
                .into_iter()
                .filter_map(|v| local.get(&v).map(|&j| (j, v)))
                .map(|(j, v)| {
                    let w = (1.0 - xu - point.node_value(v)) / 2.0;
                    if w < 0.0 {
                        clamped += 1;
                    }
                    (j, w.max(0.0))
                })
                .collect()
        })
        .collect();
    // each negative edge was seen from both ends
    AuxiliaryGraph { nodes, adj, clamped: clamped / 2 }
}

#[derive(Clone, Copy, PartialEq)]
struct Key {
    cost: f64,
    hops: usize,
    node: usize,
}

impl Eq for Key {}

impl Ord for Key {
    fn cmp(&self, o: &Self) -> Ordering {
        self.cost.total_cmp(&o.cost).then(self.hops.cmp(&o.hops)).then(self.node.cmp(&o.node))
    }
}

impl PartialOrd for Key {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}

/// Shortest path from copy one of `s` to copy two of `s`, ordered by cost
/// and then by edge count. Returns the local vertices along the closed walk,
/// without repeating `s` at the end.
fn shortest_odd_walk(aux: &AuxiliaryGraph, s: usize) -> Option<Vec<usize>> {
    let k = aux.nodes.len();
    let mut best: Vec<Option<(f64, usize)>> = vec![None; 2 * k];
    let mut pred = vec![usize::MAX; 2 * k];
    let mut done = vec![false; 2 * k];
    let mut heap = BinaryHeap::new();
    best[s] = Some((0.0, 0));
    heap.push(Reverse(Key { cost: 0.0, hops: 0, node: s }));
    let target = s + k;
    while let Some(Reverse(Key { cost, hops, node })) = heap.pop() {
        if done[node] {
            continue;
        }
        done[node] = true;
        if node == target {
            break;
        }
        let (v, side) = (node % k, node / k);
        for &(j, w) in &aux.adj[v] {
            let next = j + (1 - side) * k;
            let cand = (cost + w, hops + 1);
            let better = match best[next] {
                None => true,
                Some((c, h)) => cand.0 < c || (cand.0 == c && cand.1 < h),
            };
            if !done[next] && better {
                best[next] = Some(cand);
                pred[next] = node;
                heap.push(Reverse(Key { cost: cand.0, hops: cand.1, node: next }));
            }
        }
    }
    if !done[target] {
        return None;
    }
    let mut walk = Vec::new();
    let mut at = pred[target];
    while at != s {
        walk.push(at % k);
        at = pred[at];
    }
    walk.push(s);
    walk.reverse();
    debug_assert!(walk.len() % 2 == 1, "closed walk must have odd length");
    Some(walk)
}

/// Cuts a closed odd walk at repeated vertices until a simple odd cycle is left.
fn simple_odd_cycle(mut walk: Vec<usize>) -> Vec<usize> {
    'outer: loop {
        for i in 0..walk.len() {
            if let Some(off) = walk[i + 1..].iter().position(|&v| v == walk[i]) {
                let j = i + 1 + off;
                let inner = walk[i..j].to_vec();
                if inner.len() % 2 == 1 {
                    walk = inner;
                } else {
                    walk.drain(i..j);
                }
                continue 'outer;
            }
        }
        return walk;
    }
}

/// Smallest rotation or reflection, starting at the smallest node.
fn canonical(cycle: &[usize]) -> Vec<usize> {
    let n = cycle.len();
    let m = (0..n).min_by_key(|&i| cycle[i]).unwrap();
    let fwd: Vec<usize> = (0..n).map(|i| cycle[(m + i) % n]).collect();
    let bwd: Vec<usize> = (0..n).map(|i| cycle[(m + n - i) % n]).collect();
    fwd.min(bwd)
}

/// Greedy clique of literals conflicting with every cycle member.
pub fn lift_center(g: &ConflictGraph, cycle: &[usize], point: &FractionalPoint) -> Vec<usize> {
    let Some(d) = cycle.iter().copied().min_by_key(|&u| (g.degree(u), u)) else { return Vec::new() };
    let mut cand: Vec<usize> = g
        .neighbors(d)
        .into_iter()
        .filter(|v| !cycle.contains(v) && cycle.iter().all(|&u| g.adjacent(u, *v)))
        .collect();
    order_candidates(g, point, &mut cand);
    let mut center: Vec<usize> = Vec::new();
    for v in cand {
        if center.iter().all(|&u| g.adjacent(u, v)) {
            center.push(v);
        }
    }
    center.sort_unstable();
    center
}

/// Runs one shortest-path search per supported literal and returns the
/// distinct violated odd cycles of length at least five, lifted to wheels,
/// by decreasing violation.
pub fn separate_odd_cycles(g: &ConflictGraph, point: &FractionalPoint) -> OddCycleSeparation {
    let aux = build_auxiliary(g, point);
    let mut seen = BTreeSet::new();
    let mut cuts = Vec::new();
    for s in 0..aux.nodes.len() {
        let Some(walk) = shortest_odd_walk(&aux, s) else { continue };
        let local = simple_odd_cycle(walk);
        debug_assert!(local.len() % 2 == 1);
        if local.len() < 5 {
            continue;
        }
        let mut cost = 0.0;
        for (i, &a) in local.iter().enumerate() {
            for &b in &local[i + 1..] {
                cost += aux.weight(a, b).unwrap_or(0.0);
            }
        }
        if cost >= 0.5 - COST_EPS {
            continue;
        }
        let cycle = canonical(&local.iter().map(|&v| aux.nodes[v]).collect::<Vec<_>>());
        if !seen.insert(cycle.clone()) {
            continue;
        }
        let center = lift_center(g, &cycle, point);
        let k = ((cycle.len() - 1) / 2) as f64;
        let lhs: f64 = cycle.iter().map(|&u| point.node_value(u)).sum::<f64>()
            + k * center.iter().map(|&u| point.node_value(u)).sum::<f64>();
        cuts.push(OddCycleCut { cycle, center, violation: lhs - k });
    }
    cuts.sort_by(|a, b| b.violation.total_cmp(&a.violation).then_with(|| a.cycle.cmp(&b.cycle)));
    OddCycleSeparation { cuts, clamped: aux.clamped }
}

/// The odd-wheel inequality as a row over the original variables.
pub fn oddwheel_to_row(cut: &OddCycleCut, n_vars: usize, name: impl Into<String>) -> Row {
    let k = cut.rhs();
    let lit = |u: usize| Literal::from_node(u, n_vars);
    let terms: Vec<(Literal, f64)> =
        cut.cycle.iter().map(|&u| (lit(u), 1.0)).chain(cut.center.iter().map(|&u| (lit(u), k))).collect();
    literal_row(name, &terms, k)
}
