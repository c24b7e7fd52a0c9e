//! Bron-Kerbosch enumeration of maximal cliques above a weight threshold.
//!
//! The search is the pivoted variant with one extra cut: a branch is dropped
//! as soon as the weight of the current clique plus the weight of all
//! remaining candidates cannot reach the threshold. `P`, `X` and the
//! adjacency rows are bit strings, so the set updates are word-wise ANDs.

mod bitset;

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub use bitset::BitSet;

/// Default budget of recursive calls.
pub const DEFAULT_MAX_CALLS: u64 = 100_000;

/// Slack on the weight threshold.
const WEIGHT_EPS: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum PivotRule {
    /// Uniformly random vertex of `P ∪ X`.
    Rnd,
    /// Highest degree in the subgraph.
    Deg,
    /// Highest weight.
    #[default]
    Wgt,
    /// Most neighbours among the candidates `P`.
    Mdg,
    /// Highest weight plus total neighbour weight.
    Mwt,
}

impl PivotRule {
    pub const ALL: [PivotRule; 5] = [PivotRule::Rnd, PivotRule::Deg, PivotRule::Wgt, PivotRule::Mdg, PivotRule::Mwt];
}

impl fmt::Display for PivotRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            PivotRule::Rnd => "rnd",
            PivotRule::Deg => "deg",
            PivotRule::Wgt => "wgt",
            PivotRule::Mdg => "mdg",
            PivotRule::Mwt => "mwt",
        })
    }
}

impl FromStr for PivotRule {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "rnd" => Ok(PivotRule::Rnd),
            "deg" => Ok(PivotRule::Deg),
            "wgt" => Ok(PivotRule::Wgt),
            "mdg" => Ok(PivotRule::Mdg),
            "mwt" => Ok(PivotRule::Mwt),
            other => Err(format!("unknown pivot rule `{other}` (expected rnd, deg, wgt, mdg or mwt)")),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BkParams {
    pub min_weight: f64,
    pub max_calls: u64,
    pub pivot_rule: PivotRule,
    pub rng_seed: u64,
    /// Skip branches whose weight bound misses `min_weight`. Results do not
    /// depend on it, only the number of calls does.
    pub weight_pruning: bool,
}

impl Default for BkParams {
    fn default() -> Self {
        BkParams {
            min_weight: 0.0,
            max_calls: DEFAULT_MAX_CALLS,
            pivot_rule: PivotRule::default(),
            rng_seed: 0,
            weight_pruning: true,
        }
    }
}

/// Vertex-weighted graph with bit-string adjacency rows, indexed locally.
#[derive(Debug, Clone)]
pub struct WeightedSubgraph {
    nodes: Vec<usize>,
    weights: Vec<f64>,
    adj: Vec<BitSet>,
    non_adj: Vec<BitSet>,
    degree: Vec<usize>,
    modified_weight: Vec<f64>,
}

impl WeightedSubgraph {
    /// `nodes[i]` names local vertex `i`; `adjacent` is queried once per pair.
    pub fn new(nodes: Vec<usize>, weights: Vec<f64>, mut adjacent: impl FnMut(usize, usize) -> bool) -> Self {
        let k = nodes.len();
        assert_eq!(weights.len(), k, "one weight per node");
        let mut adj = vec![BitSet::new(k); k];
        for i in 0..k {
            for j in i + 1..k {
                if adjacent(i, j) {
                    adj[i].insert(j);
                    adj[j].insert(i);
                }
            }
        }
        Self::from_rows(nodes, weights, adj)
    }

    /// Builds the subgraph from local edge pairs.
    pub fn from_edges(nodes: Vec<usize>, weights: Vec<f64>, edges: &[(usize, usize)]) -> Self {
        let k = nodes.len();
        let mut adj = vec![BitSet::new(k); k];
        for &(i, j) in edges {
            if i != j {
                adj[i].insert(j);
                adj[j].insert(i);
            }
        }
        Self::from_rows(nodes, weights, adj)
    }

    fn from_rows(nodes: Vec<usize>, weights: Vec<f64>, adj: Vec<BitSet>) -> Self {
        let non_adj = adj
            .iter()
            .enumerate()
            .map(|(i, row)| {
                let mut r = row.not();
                r.remove(i);
                r
            })
            .collect();
        let degree = adj.iter().map(BitSet::count).collect();
        let modified_weight =
            adj.iter().enumerate().map(|(i, row)| weights[i] + row.iter().map(|j| weights[j]).sum::<f64>()).collect();
        WeightedSubgraph { nodes, weights, adj, non_adj, degree, modified_weight }
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn node(&self, i: usize) -> usize {
        self.nodes[i]
    }

    pub fn weight(&self, i: usize) -> f64 {
        self.weights[i]
    }

    pub fn adjacent(&self, i: usize, j: usize) -> bool {
        self.adj[i].contains(j)
    }

    fn set_weight(&self, s: &BitSet) -> f64 {
        s.iter().map(|i| self.weights[i]).sum()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BkOutcome {
    /// Cliques as sorted local indices, in discovery order.
    pub cliques: Vec<Vec<usize>>,
    /// Recursive calls executed.
    pub calls: u64,
    /// False when the call budget cut the search short.
    pub exact: bool,
}

impl BkOutcome {
    /// Cliques translated to the subgraph's node ids.
    pub fn node_sets(&self, g: &WeightedSubgraph) -> Vec<Vec<usize>> {
        self.cliques.iter().map(|c| c.iter().map(|&i| g.node(i)).collect()).collect()
    }
}

/// Picks the pivot from `candidates` (that is `P ∪ X`). Ties go to the
/// smallest local index.
pub fn choose_pivot(
    rule: PivotRule,
    candidates: &BitSet,
    p: &BitSet,
    g: &WeightedSubgraph,
    rng: &mut impl Rng,
) -> usize {
    if rule == PivotRule::Rnd {
        let all: Vec<usize> = candidates.iter().collect();
        return all[rng.gen_range(0..all.len())];
    }
    let score = |u: usize| -> f64 {
        match rule {
            PivotRule::Deg => g.degree[u] as f64,
            PivotRule::Wgt => g.weights[u],
            PivotRule::Mdg => g.adj[u].and_count(p) as f64,
            PivotRule::Mwt => g.modified_weight[u],
            PivotRule::Rnd => unreachable!(),
        }
    };
    let mut best = None;
    let mut best_score = f64::NEG_INFINITY;
    for u in candidates.iter() {
        let s = score(u);
        if best.is_none() || s > best_score {
            best = Some(u);
            best_score = s;
        }
    }
    best.expect("pivot candidates must not be empty")
}

struct Search<'a> {
    g: &'a WeightedSubgraph,
    params: &'a BkParams,
    rng: ChaCha8Rng,
    calls: u64,
    truncated: bool,
    found: Vec<Vec<usize>>,
}

impl Search<'_> {
    fn expand(&mut self, r: &mut Vec<usize>, r_weight: f64, mut p: BitSet, mut x: BitSet) {
        if self.calls >= self.params.max_calls {
            self.truncated = true;
            return;
        }
        self.calls += 1;
        let min_w = self.params.min_weight - WEIGHT_EPS;
        if p.union_is_empty(&x) {
            if r_weight >= min_w {
                let mut c = r.clone();
                c.sort_unstable();
                self.found.push(c);
            }
            return;
        }
        if p.is_empty() || (self.params.weight_pruning && r_weight + self.g.set_weight(&p) < min_w) {
            return;
        }
        let mut px = p.clone();
        for i in x.iter() {
            px.insert(i);
        }
        let u = choose_pivot(self.params.pivot_rule, &px, &p, self.g, &mut self.rng);
        // P \ N(u): the complement row has no self bit, so u itself is added back
        let mut branch = p.and(&self.g.non_adj[u]);
        if p.contains(u) {
            branch.insert(u);
        }
        let branch: Vec<usize> = branch.iter().collect();
        for v in branch {
            r.push(v);
            self.expand(r, r_weight + self.g.weights[v], p.and(&self.g.adj[v]), x.and(&self.g.adj[v]));
            r.pop();
            if self.truncated {
                return;
            }
            p.remove(v);
            x.insert(v);
        }
    }
}

/// Maximal cliques with weight at least `params.min_weight`, found within
/// `params.max_calls` recursive calls.
pub fn find_cliques(g: &WeightedSubgraph, params: &BkParams) -> BkOutcome {
    assert!(params.max_calls >= 1, "max_calls must be positive");
    debug_assert!(g.weights.iter().all(|&w| w >= 0.0), "weights must be non-negative");
    let mut s = Search {
        g,
        params,
        rng: ChaCha8Rng::seed_from_u64(params.rng_seed),
        calls: 0,
        truncated: false,
        found: Vec::new(),
    };
    if !g.is_empty() {
        let mut r = Vec::new();
        s.expand(&mut r, 0.0, BitSet::full(g.len()), BitSet::new(g.len()));
    }
    BkOutcome { cliques: s.found, calls: s.calls, exact: !s.truncated }
}
