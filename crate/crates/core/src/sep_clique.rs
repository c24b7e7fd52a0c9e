//! Clique cut separation.

use std::collections::BTreeSet;

use crate::bk::{find_cliques, BkParams, WeightedSubgraph};
use crate::cgraph::ConflictGraph;
use crate::model::{literal_row, FractionalPoint, Literal, Row};

/// Default minimum violation of a reported cut.
pub const DEFAULT_MIN_VIOL: f64 = 0.02;

/// Values within this distance of 0 or 1 count as integral.
pub const FRAC_EPS: f64 = 1e-6;

/// `sum of members <= 1` over literals.
#[derive(Debug, Clone, PartialEq)]
pub struct CliqueCut {
    /// Graph nodes of the cut, sorted.
    pub members: Vec<usize>,
    /// The members added by extension, sorted.
    pub lifted_members: Vec<usize>,
    /// Left-hand side at the separating point minus one.
    pub violation: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CliqueSeparation {
    pub cuts: Vec<CliqueCut>,
    pub bk_calls: u64,
    /// False when the enumeration hit its call budget.
    pub exact: bool,
}

fn is_fractional(v: f64) -> bool {
    v > FRAC_EPS && v < 1.0 - FRAC_EPS
}

/// Orders extension candidates: smallest reduced cost first when the point
/// carries costs, otherwise largest value first. Ties go to the smaller node.
pub(crate) fn order_candidates(g: &ConflictGraph, point: &FractionalPoint, cand: &mut [usize]) {
    let n = g.n_vars();
    if point.reduced_costs.is_some() {
        let rc = |u: usize| point.literal_reduced_cost(Literal::from_node(u, n)).unwrap_or(0.0);
        cand.sort_by(|&a, &b| rc(a).total_cmp(&rc(b)).then(a.cmp(&b)));
    } else {
        cand.sort_by(|&a, &b| point.node_value(b).total_cmp(&point.node_value(a)).then(a.cmp(&b)));
    }
}

/// Greedily enlarges the clique `c` with neighbours of its lowest-degree
/// member. Returns the extended clique, `c` first.
pub fn extend_cut(g: &ConflictGraph, c: &[usize], point: &FractionalPoint) -> Vec<usize> {
    let mut out = c.to_vec();
    let Some(d) = c.iter().copied().min_by_key(|&u| (g.degree(u), u)) else { return out };
    let mut cand: Vec<usize> = g.neighbors(d).into_iter().filter(|v| !c.contains(v)).collect();
    order_candidates(g, point, &mut cand);
    for v in cand {
        if out.iter().all(|&u| g.adjacent(u, v)) {
            out.push(v);
        }
    }
    out
}

/// Finds cliques of fractional literals whose values sum to at least
/// `1 + min_viol`, extends them, and returns the distinct cuts by
/// decreasing violation.
pub fn separate_cliques(g: &ConflictGraph, point: &FractionalPoint, min_viol: f64, params: &BkParams) -> CliqueSeparation {
    let nodes: Vec<usize> = (0..g.n_nodes()).filter(|&u| is_fractional(point.node_value(u))).collect();
    let weights: Vec<f64> = nodes.iter().map(|&u| point.node_value(u)).collect();
    let sub = WeightedSubgraph::new(nodes.clone(), weights, |i, j| g.adjacent(nodes[i], nodes[j]));
    let bk = find_cliques(&sub, &BkParams { min_weight: 1.0 + min_viol, ..params.clone() });

    let mut seen = BTreeSet::new();
    let mut cuts = Vec::new();
    for clique in bk.node_sets(&sub) {
        let ext = extend_cut(g, &clique, point);
        let mut lifted = ext[clique.len()..].to_vec();
        lifted.sort_unstable();
        let mut members = ext;
        members.sort_unstable();
        if !seen.insert(members.clone()) {
            continue;
        }
        let violation = members.iter().map(|&u| point.node_value(u)).sum::<f64>() - 1.0;
        cuts.push(CliqueCut { members, lifted_members: lifted, violation });
    }
    cuts.sort_by(|a, b| b.violation.total_cmp(&a.violation).then_with(|| a.members.cmp(&b.members)));
    CliqueSeparation { cuts, bk_calls: bk.calls, exact: bk.exact }
}

/// The cut as a row over the original variables.
pub fn cut_to_row(cut: &CliqueCut, n_vars: usize, name: impl Into<String>) -> Row {
    let terms: Vec<(Literal, f64)> = cut.members.iter().map(|&u| (Literal::from_node(u, n_vars), 1.0)).collect();
    literal_row(name, &terms, 1.0)
}
