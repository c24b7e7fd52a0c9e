//! Clique strengthening of set-packing rows.

use thiserror::Error;

use crate::cgraph::ConflictGraph;
use crate::model::{literal_row, normalize_to_knapsack, Literal, MilpInstance, Sense};

/// Default limit on the length of rows considered for extension.
pub const DEFAULT_ALPHA_MAX: usize = 128;

#[derive(Debug, Error, PartialEq)]
#[error("nodes {0} and {1} do not conflict")]
pub struct NotAClique(pub usize, pub usize);

/// Greedily grows the clique `c` (graph nodes) using neighbours of its
/// lowest-degree member, highest degree first.
pub fn extend_clique(g: &ConflictGraph, c: &[usize]) -> Result<Vec<usize>, NotAClique> {
    for (i, &u) in c.iter().enumerate() {
        if let Some(&v) = c[i + 1..].iter().find(|&&v| !g.adjacent(u, v)) {
            return Err(NotAClique(u, v));
        }
    }
    let mut out = c.to_vec();
    let Some(d) = c.iter().copied().min_by_key(|&u| (g.degree(u), u)) else { return Ok(out) };
    let mut cand: Vec<(usize, usize)> =
        g.neighbors(d).into_iter().filter(|v| !c.contains(v)).map(|v| (g.degree(v), v)).collect();
    cand.sort_by(|a, b| b.0.cmp(&a.0).then(a.1.cmp(&b.1)));
    for (_, v) in cand {
        if out.iter().all(|&u| g.adjacent(u, v)) {
            out.push(v);
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq)]
pub struct StrengthenReport {
    /// `(origin row, literals added)` for each extended row that survived.
    pub extended: Vec<(usize, usize)>,
    /// Indices of removed rows of the input instance, ascending.
    pub removed_rows: Vec<usize>,
    pub instance: MilpInstance,
}

impl StrengthenReport {
    pub fn literals_added(&self) -> usize {
        self.extended.iter().map(|e| e.1).sum()
    }
}

struct Entry {
    origin: usize,
    /// Sorted clique nodes.
    clique: Vec<usize>,
    extended: Option<usize>,
    active: bool,
}

fn is_subset(small: &[usize], big: &[usize]) -> bool {
    let mut it = big.iter();
    small.iter().all(|x| it.any(|y| y == x))
}

/// Extends every short set-packing row to a larger clique and drops rows
/// whose clique is contained in an extended one.
///
/// Only `<=` and `>=` rows are eligible. An extended row replaces its origin
/// in place and is named after it with the suffix `_clqext`.
pub fn strengthen(instance: &MilpInstance, g: &ConflictGraph, alpha_max: usize) -> StrengthenReport {
    let n = instance.n_vars();
    let mut entries: Vec<Entry> = Vec::new();
    for (i, row) in instance.rows.iter().enumerate() {
        if row.sense == Sense::Eq {
            continue;
        }
        let Some(ks) = normalize_to_knapsack(i, instance) else { continue };
        let [k] = ks.as_slice() else { continue };
        if !k.is_set_packing() || k.terms.len() < 2 || k.terms.len() > alpha_max {
            continue;
        }
        let mut clique: Vec<usize> = k.terms.iter().map(|t| t.0.node(n)).collect();
        clique.sort_unstable();
        entries.push(Entry { origin: i, clique, extended: None, active: true });
    }

    let originals = entries.len();
    for e in 0..originals {
        if !entries[e].active {
            continue;
        }
        let Ok(mut ext) = extend_clique(g, &entries[e].clique) else { continue };
        let added = ext.len() - entries[e].clique.len();
        if added == 0 {
            continue;
        }
        ext.sort_unstable();
        for other in entries.iter_mut().filter(|o| o.active) {
            if is_subset(&other.clique, &ext) {
                other.active = false;
            }
        }
        entries.push(Entry { origin: entries[e].origin, clique: ext, extended: Some(added), active: true });
    }

    let mut removed: Vec<usize> = entries[..originals].iter().filter(|e| !e.active).map(|e| e.origin).collect();
    removed.sort_unstable();
    let mut replacement: Vec<Option<&Entry>> = vec![None; instance.rows.len()];
    for e in entries[originals..].iter().filter(|e| e.active) {
        replacement[e.origin] = Some(e);
    }

    let mut out = instance.clone();
    out.rows.clear();
    let mut extended = Vec::new();
    for (i, row) in instance.rows.iter().enumerate() {
        if let Some(e) = replacement[i] {
            let terms: Vec<(Literal, f64)> = e.clique.iter().map(|&u| (Literal::from_node(u, n), 1.0)).collect();
            out.rows.push(literal_row(format!("{}_clqext", row.name), &terms, 1.0));
            extended.push((i, e.extended.unwrap_or(0)));
        } else if removed.binary_search(&i).is_err() {
            out.rows.push(row.clone());
        }
    }
    StrengthenReport { extended, removed_rows: removed, instance: out }
}
