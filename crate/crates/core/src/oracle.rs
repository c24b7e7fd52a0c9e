//! Brute-force reference procedures for small inputs.
//!
//! Everything here is exhaustive and refuses inputs above a fixed size
//! instead of running for a long time.

use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use crate::cgraph::{detect_cliques, ConflictGraph, DetectedCliques};
use crate::model::{KnapsackRow, Literal, MilpInstance, Sense, COEFF_EPS};

pub const MAX_CLIQUE_NODES: usize = 20;
pub const MAX_CYCLE_NODES: usize = 14;
pub const MAX_FEASIBLE_VARS: usize = 20;
/// DFS extensions allowed in [`enum_odd_cycles`].
pub const CYCLE_STEP_BUDGET: u64 = 50_000_000;

/// Margin by which an odd cycle must be violated to be reported.
const CYCLE_VIOL_EPS: f64 = 1e-9;
const FEAS_TOL: f64 = 1e-9;

#[derive(Debug, Error, PartialEq)]
pub enum OracleError {
    #[error("graph has {got} nodes, limit is {limit}")]
    TooManyNodes { got: usize, limit: usize },
    #[error("instance has {got} variables, limit is {limit}")]
    TooManyVariables { got: usize, limit: usize },
    #[error("variable `{0}` is not binary")]
    NonBinary(String),
    #[error("search exceeded {0} steps")]
    StepBudget(u64),
}

/// Conflicts found by pairwise probing, as node pairs `(u, v)` with `u < v`.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ProbeResult {
    pub edges: BTreeSet<(usize, usize)>,
    pub per_constraint: BTreeMap<usize, BTreeSet<(usize, usize)>>,
}

/// Probes every pair of variables of every binary row with all four joint
/// assignments. A pair conflicts when the smallest activity the rest of the
/// row can reach already exceeds the right-hand side.
pub fn probe_pairs(instance: &MilpInstance) -> ProbeResult {
    let n = instance.n_vars();
    let mut out = ProbeResult::default();
    for (i, row) in instance.rows.iter().enumerate() {
        if !instance.row_uses_only_binaries(row) {
            continue;
        }
        let signs: &[f64] = match row.sense {
            Sense::Le => &[1.0],
            Sense::Ge => &[-1.0],
            Sense::Eq => &[1.0, -1.0],
        };
        let mut found = BTreeSet::new();
        for &s in signs {
            let coeffs: Vec<(usize, f64)> =
                row.coeffs.iter().filter(|c| c.1 != 0.0).map(|&(j, a)| (j, s * a)).collect();
            let b = s * row.rhs;
            let neg_sum: f64 = coeffs.iter().map(|c| c.1.min(0.0)).sum();
            for (x, &(p, ap)) in coeffs.iter().enumerate() {
                for &(q, aq) in &coeffs[x + 1..] {
                    let rest = neg_sum - ap.min(0.0) - aq.min(0.0);
                    for v1 in [0.0, 1.0] {
                        for v2 in [0.0, 1.0] {
                            if v1 * ap + v2 * aq + rest > b + COEFF_EPS {
                                let u = lit(p, v1).node(n);
                                let v = lit(q, v2).node(n);
                                found.insert((u.min(v), u.max(v)));
                            }
                        }
                    }
                }
            }
        }
        out.edges.extend(found.iter().copied());
        out.per_constraint.insert(i, found);
    }
    out
}

fn lit(var: usize, value: f64) -> Literal {
    if value == 1.0 {
        Literal::pos(var)
    } else {
        Literal::neg(var)
    }
}

/// Cliques of the earlier clique extraction scheme: the initial clique plus,
/// for each outside literal, the clique obtained by swapping it for the
/// initial clique's smallest member.
pub fn single_swap_cliques(row: &KnapsackRow) -> Vec<Vec<Literal>> {
    let d = detect_cliques(row);
    let DetectedCliques { order, first_start, .. } = d;
    let Some(k) = first_start else { return Vec::new() };
    let a: Vec<f64> = {
        let mut terms = row.terms.clone();
        terms.sort_by(|x, y| x.1.total_cmp(&y.1));
        terms.iter().map(|t| t.1).collect()
    };
    let b = row.rhs + COEFF_EPS;
    let mut out = vec![order[k..].to_vec()];
    if k + 1 >= order.len() {
        return out;
    }
    for o in (0..k).rev() {
        if a[o] + a[k + 1] <= b {
            break;
        }
        let mut c = vec![order[o]];
        c.extend_from_slice(&order[k + 1..]);
        out.push(c);
    }
    out
}

/// Undirected graph on at most 32 nodes with bitmask rows.
#[derive(Debug, Clone, PartialEq)]
pub struct SmallGraph {
    pub adj: Vec<u32>,
}

impl SmallGraph {
    pub fn new(n: usize) -> Self {
        assert!(n <= 32, "SmallGraph holds at most 32 nodes");
        SmallGraph { adj: vec![0; n] }
    }

    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Self {
        let mut g = SmallGraph::new(n);
        for &(u, v) in edges {
            g.add_edge(u, v);
        }
        g
    }

    /// Every conflict among the first `n_nodes()` nodes of `g`, complements included.
    pub fn from_conflict_graph(g: &ConflictGraph) -> Self {
        let mut s = SmallGraph::new(g.n_nodes());
        for u in 0..g.n_nodes() {
            for v in u + 1..g.n_nodes() {
                if g.adjacent(u, v) {
                    s.add_edge(u, v);
                }
            }
        }
        s
    }

    pub fn add_edge(&mut self, u: usize, v: usize) {
        if u != v {
            self.adj[u] |= 1 << v;
            self.adj[v] |= 1 << u;
        }
    }

    pub fn len(&self) -> usize {
        self.adj.len()
    }

    pub fn is_empty(&self) -> bool {
        self.adj.is_empty()
    }

    pub fn adjacent(&self, u: usize, v: usize) -> bool {
        self.adj[u] >> v & 1 == 1
    }

    pub fn is_clique(&self, nodes: &[usize]) -> bool {
        nodes.iter().enumerate().all(|(i, &u)| nodes[i + 1..].iter().all(|&v| self.adjacent(u, v)))
    }
}

fn members(mask: u32) -> Vec<usize> {
    (0..32).filter(|&i| mask >> i & 1 == 1).collect()
}

/// All maximal cliques with weight at least `min_weight - 1e-9`, each sorted,
/// found by checking every vertex subset.
pub fn enum_maximal_cliques(g: &SmallGraph, weights: &[f64], min_weight: f64) -> Result<Vec<Vec<usize>>, OracleError> {
    let n = g.len();
    if n > MAX_CLIQUE_NODES {
        return Err(OracleError::TooManyNodes { got: n, limit: MAX_CLIQUE_NODES });
    }
    let mut out = Vec::new();
    if n == 0 {
        return Ok(out);
    }
    let total = 1usize << n;
    let mut clique = vec![false; total];
    let mut weight = vec![0.0f64; total];
    clique[0] = true;
    for mask in 1..total {
        let low = mask.trailing_zeros() as usize;
        let rest = mask & (mask - 1);
        weight[mask] = weight[rest] + weights[low];
        clique[mask] = clique[rest] && (g.adj[low] as usize & rest) == rest;
        if !clique[mask] {
            continue;
        }
        let maximal = (0..n).all(|v| mask >> v & 1 == 1 || (g.adj[v] as usize & mask) != mask);
        if maximal && weight[mask] >= min_weight - 1e-9 {
            out.push(members(mask as u32));
        }
    }
    out.sort();
    Ok(out)
}

/// All simple cycles of odd length at least five whose node values sum to
/// more than `(len - 1) / 2`. Each cycle starts at its smallest node and
/// runs towards the smaller of that node's two cycle neighbours.
pub fn enum_odd_cycles(g: &SmallGraph, values: &[f64]) -> Result<Vec<Vec<usize>>, OracleError> {
    let n = g.len();
    if n > MAX_CYCLE_NODES {
        return Err(OracleError::TooManyNodes { got: n, limit: MAX_CYCLE_NODES });
    }
    let mut out = Vec::new();
    let mut steps = 0u64;
    for s in 0..n {
        let mut path = vec![s];
        extend_path(g, values, s, &mut path, 1 << s, &mut steps, &mut out)?;
    }
    out.sort();
    Ok(out)
}

fn extend_path(
    g: &SmallGraph,
    values: &[f64],
    s: usize,
    path: &mut Vec<usize>,
    used: u32,
    steps: &mut u64,
    out: &mut Vec<Vec<usize>>,
) -> Result<(), OracleError> {
    let last = *path.last().unwrap();
    let len = path.len();
    if len >= 5 && len % 2 == 1 && g.adjacent(last, s) && path[1] < last {
        let sum: f64 = path.iter().map(|&v| values[v]).sum();
        if sum > (len - 1) as f64 / 2.0 + CYCLE_VIOL_EPS {
            out.push(path.clone());
        }
    }
    for v in members(g.adj[last]) {
        if v <= s || used >> v & 1 == 1 {
            continue;
        }
        *steps += 1;
        if *steps > CYCLE_STEP_BUDGET {
            return Err(OracleError::StepBudget(CYCLE_STEP_BUDGET));
        }
        path.push(v);
        extend_path(g, values, s, path, used | 1 << v, steps, out)?;
        path.pop();
    }
    Ok(())
}

/// Every 0/1 point satisfying all rows, bit `j` holding `x_j`.
pub fn enum_feasible(instance: &MilpInstance) -> Result<Vec<u32>, OracleError> {
    let n = instance.n_vars();
    if n > MAX_FEASIBLE_VARS {
        return Err(OracleError::TooManyVariables { got: n, limit: MAX_FEASIBLE_VARS });
    }
    if let Some(v) = instance.variables.iter().find(|v| !v.is_binary()) {
        return Err(OracleError::NonBinary(v.name.clone()));
    }
    let mut x = vec![0.0; n];
    let mut out = Vec::new();
    for mask in 0u32..(1u32 << n) {
        for (j, xj) in x.iter_mut().enumerate() {
            *xj = (mask >> j & 1) as f64;
        }
        if instance.rows.iter().all(|r| r.is_satisfied(&x, FEAS_TOL)) {
            out.push(mask);
        }
    }
    Ok(out)
}

/// Every 0/1 point over `g.n_vars()` variables that sets no two conflicting
/// literals to one.
pub fn enum_conflict_free(g: &ConflictGraph) -> Result<Vec<u32>, OracleError> {
    let n = g.n_vars();
    if n > MAX_FEASIBLE_VARS {
        return Err(OracleError::TooManyVariables { got: n, limit: MAX_FEASIBLE_VARS });
    }
    let edges = g.edges();
    let node_true = |mask: u32, u: usize| if u < n { mask >> u & 1 == 1 } else { mask >> (u - n) & 1 == 0 };
    Ok((0u32..(1u32 << n)).filter(|&m| edges.iter().all(|&(u, v)| !(node_true(m, u) && node_true(m, v)))).collect())
}

/// Expands a bitmask point into a value vector.
pub fn point_values(mask: u32, n: usize) -> Vec<f64> {
    (0..n).map(|j| (mask >> j & 1) as f64).collect()
}
