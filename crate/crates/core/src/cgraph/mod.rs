//! Conflict graph over the literals of a binary program.
//!
//! Node `j` is the literal `x_j` and node `j + n` its complement. Conflicts are
//! kept in two places: large cliques live in a [`CliqueStore`] (one explicit
//! initial clique per row plus compact tuples for the additional cliques of
//! that row), everything else is stored pairwise in sorted adjacency lists.
//! The conflict between a literal and its complement is implicit.

mod detect;

use std::fmt::Write as _;

pub use detect::{detect_cliques, detect_cliques_counted, DetectedCliques};

use crate::model::{complement_node, normalize_to_knapsack, KnapsackRow, Literal, MilpInstance, COEFF_EPS};

/// Cliques of at most this size are stored pairwise unless overridden.
pub const DEFAULT_MIN_CLQ_SIZE: usize = 512;

/// Additional clique `{node} ∪ first[clique][start..]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AddtlClique {
    pub node: usize,
    pub clique: usize,
    /// 0-based offset into `first[clique]`.
    pub start: usize,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct CliqueStore {
    first: Vec<Vec<usize>>,
    addtl: Vec<AddtlClique>,
    /// node -> (first clique, position of the node in it), sorted by clique.
    adj_first: Vec<Vec<(usize, usize)>>,
    /// node -> tuples in which the node is the literal outside the initial clique.
    adj_addtl: Vec<Vec<usize>>,
    /// first clique -> its tuples, sorted by start.
    tuples_of: Vec<Vec<usize>>,
}

impl CliqueStore {
    pub fn first(&self) -> &[Vec<usize>] {
        &self.first
    }

    pub fn size(&self, c: usize) -> usize {
        self.first[c].len()
    }

    pub fn addtl(&self) -> &[AddtlClique] {
        &self.addtl
    }

    /// Tuple `t` as `(node, c, l)` with both `c` and `l` counted from one.
    pub fn tuple_one_based(&self, t: usize) -> (usize, usize, usize) {
        let a = self.addtl[t];
        (a.node, a.clique + 1, a.start + 1)
    }

    /// First cliques containing `node`, with the node's position in each.
    pub fn cliques_with(&self, node: usize) -> &[(usize, usize)] {
        &self.adj_first[node]
    }

    /// Tuples whose outside literal is `node`.
    pub fn tuples_with(&self, node: usize) -> &[usize] {
        &self.adj_addtl[node]
    }

    pub fn tuples_of(&self, c: usize) -> &[usize] {
        &self.tuples_of[c]
    }

    pub fn expand_tuple(&self, t: usize) -> Vec<usize> {
        let a = self.addtl[t];
        let mut c = vec![a.node];
        c.extend_from_slice(&self.first[a.clique][a.start..]);
        c
    }

    fn position_in(&self, node: usize, c: usize) -> Option<usize> {
        let list = &self.adj_first[node];
        list.binary_search_by_key(&c, |&(cc, _)| cc).ok().map(|i| list[i].1)
    }

    fn heap_bytes(&self) -> usize {
        let w = std::mem::size_of::<usize>();
        self.first.iter().map(|c| c.len() * w).sum::<usize>()
            + self.addtl.len() * std::mem::size_of::<AddtlClique>()
            + self.adj_first.iter().map(|l| l.len() * 2 * w).sum::<usize>()
            + self.adj_addtl.iter().map(|l| l.len() * w).sum::<usize>()
            + self.tuples_of.iter().map(|l| l.len() * w).sum::<usize>()
    }
}

/// Counters collected while building a graph.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct BuildStats {
    pub rows_used: usize,
    pub rows_skipped: usize,
    pub detected_first: usize,
    pub detected_addtl: usize,
    pub dissolved: usize,
    pub degenerate_rows: usize,
}

impl BuildStats {
    /// Cliques found by detection, before any were dissolved into pairs.
    pub fn detected(&self) -> usize {
        self.detected_first + self.detected_addtl
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConflictGraph {
    n_vars: usize,
    min_clq_size: usize,
    store: CliqueStore,
    adjlist: Vec<Vec<usize>>,
    stats: BuildStats,
}

struct Builder {
    n_vars: usize,
    first: Vec<Vec<usize>>,
    addtl: Vec<AddtlClique>,
    pairs: Vec<(usize, usize)>,
    stats: BuildStats,
}

fn push_clique_pairs(pairs: &mut Vec<(usize, usize)>, clique: &[usize]) {
    for (i, &u) in clique.iter().enumerate() {
        for &v in &clique[i + 1..] {
            pairs.push((u, v));
        }
    }
}

impl Builder {
    fn add_row(&mut self, row: &KnapsackRow) {
        let n = self.n_vars;
        let det = detect_cliques(row);
        if let Some(k) = det.first_start {
            let c = self.first.len();
            self.first.push(det.order[k..].iter().map(|l| l.node(n)).collect());
            self.stats.detected_first += 1;
            for &(o, f) in &det.extra {
                self.addtl.push(AddtlClique { node: det.order[o].node(n), clique: c, start: f - k });
                self.stats.detected_addtl += 1;
            }
        }

        // Assignments of a single literal that already violate the row; the
        // positive-coefficient pairs above do not cover them.
        let b = row.rhs + COEFF_EPS;
        if row.rhs < -COEFF_EPS {
            // every literal of the row conflicts with every other one
            if row.terms.len() >= 2 {
                let mut all: Vec<usize> =
                    row.terms.iter().flat_map(|&(l, _)| [l.node(n), l.complement().node(n)]).collect();
                all.sort_unstable();
                self.first.push(all);
                self.stats.degenerate_rows += 1;
            }
        } else if row.terms.iter().any(|&(_, a)| a > b) {
            self.stats.degenerate_rows += 1;
            for &(lp, _) in row.terms.iter().filter(|&&(_, a)| a > b) {
                for &(lq, _) in &row.terms {
                    if lq.var != lp.var {
                        self.pairs.push((lp.node(n), lq.complement().node(n)));
                    }
                }
            }
        }
    }

    fn finish(mut self, min_clq_size: usize) -> ConflictGraph {
        let nodes = 2 * self.n_vars;

        let mut addtl = Vec::new();
        for t in std::mem::take(&mut self.addtl) {
            let size = 1 + self.first[t.clique].len() - t.start;
            if size > min_clq_size {
                addtl.push(t);
            } else {
                for &w in &self.first[t.clique][t.start..] {
                    self.pairs.push((t.node, w));
                }
                self.stats.dissolved += 1;
            }
        }
        let mut remap = vec![usize::MAX; self.first.len()];
        let mut first = Vec::new();
        for (c, clique) in std::mem::take(&mut self.first).into_iter().enumerate() {
            if clique.len() > min_clq_size {
                remap[c] = first.len();
                first.push(clique);
            } else {
                push_clique_pairs(&mut self.pairs, &clique);
                self.stats.dissolved += 1;
            }
        }
        // a kept tuple never outlives its initial clique: its size is at most the clique's
        for t in &mut addtl {
            t.clique = remap[t.clique];
            debug_assert_ne!(t.clique, usize::MAX);
        }

        let mut adjlist: Vec<Vec<usize>> = vec![Vec::new(); nodes];
        for &(u, v) in &self.pairs {
            if u != v {
                adjlist[u].push(v);
                adjlist[v].push(u);
            }
        }
        for l in &mut adjlist {
            l.sort_unstable();
            l.dedup();
        }

        let mut adj_first = vec![Vec::new(); nodes];
        for (c, clique) in first.iter().enumerate() {
            for (pos, &u) in clique.iter().enumerate() {
                adj_first[u].push((c, pos));
            }
        }
        let mut adj_addtl = vec![Vec::new(); nodes];
        let mut tuples_of = vec![Vec::new(); first.len()];
        for (t, a) in addtl.iter().enumerate() {
            adj_addtl[a.node].push(t);
            tuples_of[a.clique].push(t);
        }
        for ts in &mut tuples_of {
            ts.sort_by_key(|&t| addtl[t].start);
        }
        ConflictGraph {
            n_vars: self.n_vars,
            min_clq_size,
            store: CliqueStore { first, addtl, adj_first, adj_addtl, tuples_of },
            adjlist,
            stats: self.stats,
        }
    }
}

impl ConflictGraph {
    /// Builds the graph from every row of `instance` that involves only binary
    /// variables. Cliques with at most `min_clq_size` literals end up pairwise.
    pub fn build(instance: &MilpInstance, min_clq_size: usize) -> Self {
        let mut b = Builder {
            n_vars: instance.n_vars(),
            first: Vec::new(),
            addtl: Vec::new(),
            pairs: Vec::new(),
            stats: BuildStats::default(),
        };
        for i in 0..instance.rows.len() {
            match normalize_to_knapsack(i, instance) {
                Some(rows) => {
                    b.stats.rows_used += 1;
                    for r in &rows {
                        b.add_row(r);
                    }
                }
                None => b.stats.rows_skipped += 1,
            }
        }
        b.finish(min_clq_size)
    }

    /// Builds a graph over `n_vars` variables directly from knapsack rows.
    pub fn from_knapsack_rows(n_vars: usize, rows: &[KnapsackRow], min_clq_size: usize) -> Self {
        let mut b =
            Builder { n_vars, first: Vec::new(), addtl: Vec::new(), pairs: Vec::new(), stats: BuildStats::default() };
        for r in rows {
            b.stats.rows_used += 1;
            b.add_row(r);
        }
        b.finish(min_clq_size)
    }

    pub fn n_vars(&self) -> usize {
        self.n_vars
    }

    pub fn n_nodes(&self) -> usize {
        2 * self.n_vars
    }

    pub fn min_clq_size(&self) -> usize {
        self.min_clq_size
    }

    pub fn store(&self) -> &CliqueStore {
        &self.store
    }

    pub fn stats(&self) -> &BuildStats {
        &self.stats
    }

    /// Pairwise-stored conflicts of `node`, sorted.
    pub fn adjlist(&self, node: usize) -> &[usize] {
        &self.adjlist[node]
    }

    pub fn complement(&self, node: usize) -> usize {
        complement_node(node, self.n_vars)
    }

    pub fn literal(&self, node: usize) -> Literal {
        Literal::from_node(node, self.n_vars)
    }

    /// Whether two distinct nodes conflict.
    pub fn adjacent(&self, u: usize, v: usize) -> bool {
        if u == v {
            return false;
        }
        if v == self.complement(u) || self.adjlist[u].binary_search(&v).is_ok() {
            return true;
        }
        let s = &self.store;
        // both inside one initial clique: merge the clique lists
        let (mut a, mut b) = (s.adj_first[u].iter().peekable(), s.adj_first[v].iter().peekable());
        while let (Some(&&(ca, _)), Some(&&(cb, _))) = (a.peek(), b.peek()) {
            match ca.cmp(&cb) {
                std::cmp::Ordering::Equal => return true,
                std::cmp::Ordering::Less => {
                    a.next();
                }
                std::cmp::Ordering::Greater => {
                    b.next();
                }
            }
        }
        // one is the outside literal of a tuple, the other in its suffix
        let via_tuple = |outside: usize, inside: usize| {
            s.adj_addtl[outside].iter().any(|&t| {
                let a = s.addtl[t];
                s.position_in(inside, a.clique).is_some_and(|pos| pos >= a.start)
            })
        };
        via_tuple(u, v) || via_tuple(v, u)
    }

    pub fn conflicting(&self, a: Literal, b: Literal) -> bool {
        let n = self.n_vars;
        self.adjacent(a.node(n), b.node(n))
    }

    /// All nodes conflicting with `u`, sorted, the complement included.
    pub fn neighbors(&self, u: usize) -> Vec<usize> {
        let s = &self.store;
        let mut out = Vec::with_capacity(self.adjlist[u].len() + 1);
        out.push(self.complement(u));
        out.extend_from_slice(&self.adjlist[u]);
        for &(c, pos) in &s.adj_first[u] {
            out.extend_from_slice(&s.first[c]);
            for &t in &s.tuples_of[c] {
                if s.addtl[t].start > pos {
                    break;
                }
                out.push(s.addtl[t].node);
            }
        }
        for &t in &s.adj_addtl[u] {
            let a = s.addtl[t];
            out.extend_from_slice(&s.first[a.clique][a.start..]);
        }
        out.sort_unstable();
        out.dedup();
        if let Ok(i) = out.binary_search(&u) {
            out.remove(i);
        }
        out
    }

    pub fn literal_neighbors(&self, a: Literal) -> Vec<Literal> {
        self.neighbors(a.node(self.n_vars)).into_iter().map(|v| self.literal(v)).collect()
    }

    pub fn degree(&self, u: usize) -> usize {
        self.neighbors(u).len()
    }

    /// Every conflict `(u, v)` with `u < v`, leaving out literal/complement pairs.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for u in 0..self.n_nodes() {
            let cu = self.complement(u);
            out.extend(self.neighbors(u).into_iter().filter(|&v| v > u && v != cu).map(|v| (u, v)));
        }
        out
    }

    /// Rough heap footprint of the stored structure, in bytes.
    pub fn memory_bytes(&self) -> usize {
        self.store.heap_bytes() + self.adjlist.iter().map(|l| l.len() * std::mem::size_of::<usize>()).sum::<usize>()
    }

    pub fn adjlist_entries(&self) -> usize {
        self.adjlist.iter().map(Vec::len).sum()
    }

    /// Text dump: `C c: lits` per stored clique, `T lit c l` per tuple and
    /// `A lit: lits` per non-empty adjacency list. Indices count from one.
    pub fn dump(&self, instance: &MilpInstance) -> String {
        let name = |u: usize| instance.literal_name(self.literal(u));
        let mut out = String::new();
        for (c, clique) in self.store.first.iter().enumerate() {
            let lits: Vec<String> = clique.iter().map(|&u| name(u)).collect();
            let _ = writeln!(out, "C {}: {}", c + 1, lits.join(" "));
        }
        for t in 0..self.store.addtl.len() {
            let (u, c, l) = self.store.tuple_one_based(t);
            let _ = writeln!(out, "T {} {c} {l}", name(u));
        }
        for (u, l) in self.adjlist.iter().enumerate() {
            if !l.is_empty() {
                let lits: Vec<String> = l.iter().map(|&v| name(v)).collect();
                let _ = writeln!(out, "A {}: {}", name(u), lits.join(" "));
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{Row, Sense, Variable};

    fn instance(n: usize, rows: &[(&[f64], Sense, f64)]) -> MilpInstance {
        let vars = (1..=n).map(|j| Variable::binary(format!("x{j}"))).collect();
        let rows = rows
            .iter()
            .enumerate()
            .map(|(i, (c, s, b))| {
                let coeffs = c.iter().enumerate().filter(|(_, a)| **a != 0.0).map(|(j, &a)| (j, a)).collect();
                Row::new(format!("c{}", i + 1), coeffs, *s, *b)
            })
            .collect();
        MilpInstance::new(vars, rows).unwrap()
    }

    /// The three rows whose cliques make up the storage example.
    fn storage_example() -> MilpInstance {
        instance(
            10,
            &[
                (&[3., 4., 5., 6., 7., 8., 0., 0., 0., 0.], Sense::Le, 10.),
                (&[0., 1., 0., 0., 0., 1., 0., 1., 0., 0.], Sense::Le, 1.),
                (&[3., 5., 5., 5., 0., 6., 0., 7., 8., 9.], Sense::Le, 10.),
            ],
        )
    }

    #[test]
    fn storage_layout_matches_example() {
        let g = ConflictGraph::build(&storage_example(), 0);
        let s = g.store();
        assert_eq!(s.first(), &[vec![2, 3, 4, 5], vec![1, 5, 7], vec![3, 5, 7, 8, 9]]);
        let tuples: Vec<_> = (0..s.addtl().len()).map(|t| s.tuple_one_based(t)).collect();
        assert_eq!(tuples, vec![(1, 1, 3), (0, 1, 4), (2, 3, 2), (1, 3, 2), (0, 3, 4)]);
        assert_eq!(s.expand_tuple(4), vec![0, 8, 9]);
    }

    #[test]
    fn trivial_and_isolated_queries() {
        let g = ConflictGraph::build(&instance(3, &[]), DEFAULT_MIN_CLQ_SIZE);
        assert_eq!(g.n_nodes(), 6);
        assert!(g.conflicting(Literal::pos(0), Literal::neg(0)));
        assert!(!g.conflicting(Literal::pos(0), Literal::pos(1)));
        assert_eq!(g.neighbors(0), vec![3]);
        assert!(g.edges().is_empty());
    }

    #[test]
    fn packing_row_neighbors() {
        let g = ConflictGraph::build(&instance(3, &[(&[1., 1., 1.], Sense::Le, 1.)]), 0);
        assert_eq!(g.neighbors(0), vec![1, 2, 3]);
        assert_eq!(g.store().first().len(), 1);
        assert_eq!(g.adjlist_entries(), 0);
    }

    #[test]
    fn queries_do_not_depend_on_storage_split() {
        let inst = storage_example();
        let all_pairs = ConflictGraph::build(&inst, usize::MAX);
        for m in [0, 1, 2, 3, 4, 5] {
            let g = ConflictGraph::build(&inst, m);
            for u in 0..g.n_nodes() {
                assert_eq!(g.neighbors(u), all_pairs.neighbors(u), "min_clq_size {m}, node {u}");
                for v in 0..g.n_nodes() {
                    assert_eq!(g.adjacent(u, v), all_pairs.adjacent(u, v));
                }
            }
        }
        let g = ConflictGraph::build(&inst, 3);
        assert!(g.store().first().iter().all(|c| c.len() > 3));
        for t in 0..g.store().addtl().len() {
            assert!(g.store().expand_tuple(t).len() > 3);
        }
    }

    #[test]
    fn strengthening_example_graph_has_x2_x5() {
        let inst = instance(
            6,
            &[
                (&[-4., 4., 5., 6., 7., 10.], Sense::Le, 6.),
                (&[0., 1., 1., 1., 0., 0.], Sense::Le, 1.),
                (&[0., 1., 0., 0., 1., 0.], Sense::Le, 1.),
            ],
        );
        let g = ConflictGraph::build(&inst, DEFAULT_MIN_CLQ_SIZE);
        assert!(g.conflicting(Literal::pos(1), Literal::pos(4)));
        assert!(g.conflicting(Literal::neg(0), Literal::pos(5)));
        assert!(!g.conflicting(Literal::pos(0), Literal::pos(5)));
    }

    #[test]
    fn oversized_coefficient_conflicts_with_both_polarities() {
        // 5 x1 + x2 <= 3: x1 = 1 alone violates the row
        let g = ConflictGraph::build(&instance(2, &[(&[5., 1.], Sense::Le, 3.)]), 0);
        assert!(g.conflicting(Literal::pos(0), Literal::pos(1)));
        assert!(g.conflicting(Literal::pos(0), Literal::neg(1)));
        assert!(!g.conflicting(Literal::neg(0), Literal::neg(1)));
        // x1 + x2 <= -1 cannot hold at all
        let g = ConflictGraph::build(&instance(2, &[(&[1., 1.], Sense::Le, -1.)]), 0);
        assert_eq!(g.edges().len(), 4);
    }

    #[test]
    fn dump_lists_store_contents() {
        let inst = instance(3, &[(&[1., -1., 0.], Sense::Le, 0.), (&[1., 1., 1.], Sense::Le, 1.)]);
        let g = ConflictGraph::build(&inst, 2);
        let text = g.dump(&inst);
        assert!(text.contains("C 1: x1 x2 x3"), "{text}");
        assert!(text.contains("A x1: !x2"), "{text}");
        assert!(text.contains("A !x2: x1"), "{text}");
    }

    #[test]
    fn build_is_deterministic() {
        let inst = storage_example();
        assert_eq!(ConflictGraph::build(&inst, 2), ConflictGraph::build(&inst, 2));
    }
}
