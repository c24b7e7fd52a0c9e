mod common;

use std::collections::BTreeSet;

use cgkit::bk::{find_cliques, BkParams, PivotRule, WeightedSubgraph};
use cgkit::cgraph::ConflictGraph;
use cgkit::model::{Literal, MilpInstance};
use cgkit::oracle::{enum_conflict_free, enum_maximal_cliques, point_values, probe_pairs, SmallGraph};
use cgkit::presolve::{extend_clique, strengthen};
use cgkit::sep_clique::{extend_cut, separate_cliques};
use cgkit::sep_oddcycle::{oddwheel_to_row, OddCycleCut};
use common::*;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn graph_of(inst: &MilpInstance, min_clq_size: usize) -> ConflictGraph {
    ConflictGraph::build(inst, min_clq_size)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn neighbors_match_probing(seed in any::<u64>(), m in 0usize..6) {
        let inst = random_mixed_instance(&mut rng(seed), 12, 6);
        let g = graph_of(&inst, m);
        let n = inst.n_vars();
        let probed = probe_pairs(&inst).edges;
        for u in 0..g.n_nodes() {
            let mut want: BTreeSet<usize> = probed
                .iter()
                .filter_map(|&(a, b)| if a == u { Some(b) } else if b == u { Some(a) } else { None })
                .collect();
            want.insert(cgkit::model::complement_node(u, n));
            let got: BTreeSet<usize> = g.neighbors(u).into_iter().collect();
            prop_assert_eq!(&got, &want);
            for v in 0..g.n_nodes() {
                prop_assert_eq!(g.adjacent(u, v), want.contains(&v));
            }
        }
    }

    #[test]
    fn bk_budget_and_pruning(seed in any::<u64>(), budget in 1u64..40) {
        let mut r = rng(seed);
        let n = r.gen_range(1..=14);
        let density = r.gen_range(0.2..0.9);
        let g = random_graph(&mut r, n, density);
        let w: Vec<f64> = (0..n).map(|_| r.gen_range(0.0..1.0)).collect();
        let min_weight = r.gen_range(0.0..1.5);
        let want = enum_maximal_cliques(&g, &w, min_weight).unwrap();
        let sub = WeightedSubgraph::new((0..n).collect(), w, |i, j| g.adjacent(i, j));
        let rule = PivotRule::ALL[r.gen_range(0..5)];
        let base = BkParams { min_weight, max_calls: u64::MAX, pivot_rule: rule, rng_seed: seed, weight_pruning: true };
        let pruned = find_cliques(&sub, &base);
        let plain = find_cliques(&sub, &BkParams { weight_pruning: false, ..base.clone() });
        let (mut a, mut b) = (pruned.cliques.clone(), plain.cliques.clone());
        a.sort();
        b.sort();
        prop_assert_eq!(&a, &want);
        prop_assert_eq!(&b, &want);
        // pruning only cuts subtrees, but with rnd it also shifts later draws
        if rule != PivotRule::Rnd {
            prop_assert!(pruned.calls <= plain.calls);
        }

        let cut = find_cliques(&sub, &BkParams { max_calls: budget, ..base });
        prop_assert!(cut.calls <= budget);
        prop_assert_eq!(cut.exact, pruned.calls <= budget);
        for c in &cut.cliques {
            prop_assert!(want.contains(c));
        }
    }

    #[test]
    fn clique_extension_grows_cliques(seed in any::<u64>()) {
        let mut r = rng(seed);
        let inst = random_packing_instance(&mut r, 8);
        let g = graph_of(&inst, 0);
        let sg = SmallGraph::from_conflict_graph(&g);
        // grow a random clique greedily from a random node
        let mut c = vec![r.gen_range(0..g.n_nodes())];
        for v in 0..g.n_nodes() {
            if r.gen_bool(0.5) && c.iter().all(|&u| g.adjacent(u, v)) {
                c.push(v);
            }
        }
        let p = random_point(&mut r, &inst);
        for ext in [extend_clique(&g, &c).unwrap(), extend_cut(&g, &c, &p)] {
            prop_assert!(sg.is_clique(&ext));
            prop_assert_eq!(&ext[..c.len()], &c[..]);
            let ext2 = extend_clique(&g, &ext).unwrap();
            prop_assert!(ext2.len() >= ext.len());
        }
        let mut non = c.clone();
        if let Some(v) = (0..g.n_nodes()).find(|&v| !c.contains(&v) && !c.iter().all(|&u| g.adjacent(u, v))) {
            non.push(v);
            prop_assert!(extend_clique(&g, &non).is_err());
        }
    }

    #[test]
    fn dominated_rows_sit_inside_surviving_cliques(seed in any::<u64>()) {
        let inst = random_packing_instance(&mut rng(seed), 10);
        let g = graph_of(&inst, 2);
        let rep = strengthen(&inst, &g, 128);
        let n = inst.n_vars();
        let lits_of = |i: usize| -> Vec<Literal> {
            cgkit::model::normalize_to_knapsack(i, &inst).unwrap()[0].terms.iter().map(|t| t.0).collect()
        };
        // rebuilt from the origin row: a clique holding both literals of a
        // variable cancels them in the written row
        let cliques: Vec<BTreeSet<Literal>> = rep
            .extended
            .iter()
            .map(|&(origin, added)| {
                let seed: Vec<usize> = lits_of(origin).iter().map(|l| l.node(n)).collect();
                let ext = extend_clique(&g, &seed).unwrap();
                assert_eq!(ext.len(), seed.len() + added);
                ext.iter().map(|&u| Literal::from_node(u, n)).collect()
            })
            .collect();
        let ext_rows = rep.instance.rows.iter().filter(|r| r.name.ends_with("_clqext")).count();
        prop_assert_eq!(ext_rows, rep.extended.len());
        for &i in &rep.removed_rows {
            let lits: BTreeSet<Literal> = lits_of(i).into_iter().collect();
            prop_assert!(cliques.iter().any(|c| lits.is_subset(c)), "row {} not covered", i);
        }
        let sg = SmallGraph::from_conflict_graph(&g);
        for c in &cliques {
            let nodes: Vec<usize> = c.iter().map(|l| l.node(n)).collect();
            prop_assert!(sg.is_clique(&nodes));
        }
    }

    #[test]
    fn clique_cut_members_come_from_bk(seed in any::<u64>()) {
        let mut r = rng(seed);
        let inst = random_packing_instance(&mut r, 6);
        let g = graph_of(&inst, 1);
        let p = random_point(&mut r, &inst);
        let sep = separate_cliques(&g, &p, 0.02, &BkParams { max_calls: u64::MAX, ..Default::default() });
        let sg = SmallGraph::from_conflict_graph(&g);
        let mut prev = f64::INFINITY;
        let mut seen = BTreeSet::new();
        for cut in &sep.cuts {
            prop_assert!(sg.is_clique(&cut.members));
            prop_assert!(cut.violation <= prev);
            prev = cut.violation;
            prop_assert!(seen.insert(cut.members.clone()));
            let base: f64 = cut.members.iter().filter(|u| !cut.lifted_members.contains(u)).map(|&u| p.node_value(u)).sum();
            prop_assert!(base >= 1.02 - 1e-9);
            prop_assert!(cut.violation >= base - 1.0 - 1e-12);
        }
    }

    #[test]
    fn wheel_rows_with_complements_match_literal_form(seed in any::<u64>()) {
        // any odd cycle with a clique center, complements included
        let mut r = rng(seed);
        let n = 8;
        let mut vars: Vec<usize> = (0..n).collect();
        rand::seq::SliceRandom::shuffle(&mut vars[..], &mut r);
        let len = if r.gen_bool(0.5) { 5 } else { 7 };
        let node = |j: usize, r: &mut ChaCha8Rng| if r.gen_bool(0.5) { j } else { j + n };
        let cycle: Vec<usize> = vars[..len].iter().map(|&j| node(j, &mut r)).collect();
        let mut center = Vec::new();
        for &j in &vars[len..] {
            if r.gen_bool(0.5) {
                center.push(node(j, &mut r));
            }
        }
        let cut = OddCycleCut { cycle: cycle.clone(), center: center.clone(), violation: 0.0 };
        let row = oddwheel_to_row(&cut, n, "w");
        let k = ((len - 1) / 2) as f64;
        for m in 0u32..(1 << n) {
            let x = point_values(m, n);
            let val = |u: usize| Literal::from_node(u, n).value(x[u % n]);
            let lhs: f64 = cycle.iter().map(|&u| val(u)).sum::<f64>() + k * center.iter().map(|&u| val(u)).sum::<f64>();
            prop_assert!(((row.activity(&x) - row.rhs) - (lhs - k)).abs() < 1e-9);
        }
    }
}

#[test]
fn conflict_free_points_respect_every_edge() {
    let inst = random_packing_instance(&mut rng(11), 6);
    let g = graph_of(&inst, 0);
    let free = enum_conflict_free(&g).unwrap();
    let feasible = cgkit::oracle::enum_feasible(&inst).unwrap();
    // feasible points never set two conflicting literals
    for m in feasible {
        assert!(free.contains(&m));
    }
}
