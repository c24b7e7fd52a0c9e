#![allow(dead_code)]

use cgkit::cgraph::ConflictGraph;
use cgkit::model::{FractionalPoint, Literal, MilpInstance, Row, Sense, Variable};
use cgkit::oracle::{enum_maximal_cliques, SmallGraph};
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub fn binaries(n: usize) -> Vec<Variable> {
    (1..=n).map(|j| Variable::binary(format!("x{j}"))).collect()
}

/// Row from a dense coefficient slice, dropping zeros.
pub fn dense_row(name: &str, coeffs: &[f64], sense: Sense, rhs: f64) -> Row {
    let c = coeffs.iter().enumerate().filter(|(_, a)| **a != 0.0).map(|(j, &a)| (j, a)).collect();
    Row::new(name, c, sense, rhs)
}

fn random_subset(rng: &mut ChaCha8Rng, n: usize, lo: usize, hi: usize) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..n).collect();
    idx.shuffle(rng);
    let k = rng.gen_range(lo.min(n)..=hi.min(n));
    idx.truncate(k);
    idx.sort_unstable();
    idx
}

/// Row with integer coefficients of both signs and a right-hand side around
/// the middle of its activity range, so conflicts are common but not certain.
pub fn random_mixed_row(rng: &mut ChaCha8Rng, n: usize, name: String) -> Row {
    let support = random_subset(rng, n, 2, n);
    let coeffs: Vec<(usize, f64)> = support
        .iter()
        .map(|&j| {
            let a = rng.gen_range(1..=9) as f64;
            (j, if rng.gen_bool(0.3) { -a } else { a })
        })
        .collect();
    let lo: f64 = coeffs.iter().map(|c| c.1.min(0.0)).sum();
    let hi: f64 = coeffs.iter().map(|c| c.1.max(0.0)).sum();
    let sense = match rng.gen_range(0..10) {
        0..=5 => Sense::Le,
        6..=8 => Sense::Ge,
        _ => Sense::Eq,
    };
    let span = (hi - lo).max(1.0);
    let t = rng.gen_range(-0.1..0.7);
    let rhs = match sense {
        Sense::Ge => (hi - t * span).round(),
        _ => (lo + t * span).round(),
    };
    Row::new(name, coeffs, sense, rhs)
}

pub fn random_mixed_instance(rng: &mut ChaCha8Rng, max_n: usize, max_m: usize) -> MilpInstance {
    let n = rng.gen_range(2..=max_n);
    let m = rng.gen_range(1..=max_m);
    let rows = (0..m).map(|i| random_mixed_row(rng, n, format!("r{}", i + 1))).collect();
    MilpInstance::new(binaries(n), rows).unwrap()
}

/// `sum of literals <= 1`, written over original variables.
pub fn packing_row(name: String, lits: &[Literal]) -> Row {
    let terms: Vec<(Literal, f64)> = lits.iter().map(|&l| (l, 1.0)).collect();
    cgkit::model::literal_row(name, &terms, 1.0)
}

fn random_literal(rng: &mut ChaCha8Rng, var: usize) -> Literal {
    if rng.gen_bool(0.25) {
        Literal::neg(var)
    } else {
        Literal::pos(var)
    }
}

/// Mostly short set-packing rows over literals, plus a few knapsack rows.
pub fn random_packing_instance(rng: &mut ChaCha8Rng, max_n: usize) -> MilpInstance {
    let n = rng.gen_range(3..=max_n);
    let m = rng.gen_range(2..=2 * n);
    let mut rows = Vec::new();
    for i in 0..m {
        if rng.gen_bool(0.8) {
            let vars = random_subset(rng, n, 2, 4);
            let lits: Vec<Literal> = vars.iter().map(|&j| random_literal(rng, j)).collect();
            rows.push(packing_row(format!("p{}", i + 1), &lits));
        } else {
            rows.push(random_mixed_row(rng, n, format!("k{}", i + 1)));
        }
    }
    MilpInstance::new(binaries(n), rows).unwrap()
}

pub fn random_graph(rng: &mut ChaCha8Rng, n: usize, density: f64) -> SmallGraph {
    let mut g = SmallGraph::new(n);
    for u in 0..n {
        for v in u + 1..n {
            if rng.gen_bool(density) {
                g.add_edge(u, v);
            }
        }
    }
    g
}

/// Random point over the binaries: a share of integral values, the rest on
/// a grid of twentieths.
pub fn random_point(rng: &mut ChaCha8Rng, inst: &MilpInstance) -> FractionalPoint {
    let x: Vec<f64> = (0..inst.n_vars())
        .map(|_| match rng.gen_range(0..10) {
            0 => 0.0,
            1 => 1.0,
            _ => rng.gen_range(1..20) as f64 / 20.0,
        })
        .collect();
    FractionalPoint::from_values(inst, &x)
}

pub fn node_values(g: &ConflictGraph, p: &FractionalPoint) -> Vec<f64> {
    (0..g.n_nodes()).map(|u| p.node_value(u)).collect()
}

/// Largest clique weight in `g` exceeds one.
fn has_heavy_clique(g: &SmallGraph, w: &[f64]) -> bool {
    !enum_maximal_cliques(g, w, 1.0 + 2e-9).unwrap().is_empty()
}

/// An instance of pairwise packing rows and a point on the grid of eighths
/// that satisfies every clique inequality of the resulting graph. With
/// `plant`, a chordless odd cycle of literals at one half is added first.
pub fn clique_feasible_fixture(rng: &mut ChaCha8Rng, n: usize, plant: Option<usize>) -> (MilpInstance, FractionalPoint) {
    let mut x: Vec<f64> = (0..n).map(|_| rng.gen_range(0..=8) as f64 / 8.0).collect();
    let mut pairs: Vec<(Literal, Literal)> = Vec::new();
    if let Some(len) = plant {
        let vars = random_subset(rng, n, len, len);
        let mut vars = vars;
        vars.shuffle(rng);
        for &j in &vars {
            x[j] = 0.5;
        }
        let lits: Vec<Literal> = vars.iter().map(|&j| random_literal(rng, j)).collect();
        for i in 0..len {
            pairs.push((lits[i], lits[(i + 1) % len]));
        }
    }
    let nodes = 2 * n;
    let value = |u: usize| {
        let l = Literal::from_node(u, n);
        l.value(x[l.var])
    };
    let w: Vec<f64> = (0..nodes).map(value).collect();
    let mut g = SmallGraph::new(nodes);
    for j in 0..n {
        g.add_edge(j, j + n);
    }
    for &(a, b) in &pairs {
        g.add_edge(a.node(n), b.node(n));
    }
    assert!(!has_heavy_clique(&g, &w), "planted cycle must be clique-feasible");
    let tries = rng.gen_range(n..=3 * n);
    for _ in 0..tries {
        let u = rng.gen_range(0..nodes);
        let v = rng.gen_range(0..nodes);
        if u % n == v % n || g.adjacent(u, v) {
            continue;
        }
        let mut h = g.clone();
        h.add_edge(u, v);
        if !has_heavy_clique(&h, &w) {
            g = h;
            pairs.push((Literal::from_node(u, n), Literal::from_node(v, n)));
        }
    }
    let rows = pairs.iter().enumerate().map(|(i, &(a, b))| packing_row(format!("e{}", i + 1), &[a, b])).collect();
    let inst = MilpInstance::new(binaries(n), rows).unwrap();
    let p = FractionalPoint::from_values(&inst, &x);
    (inst, p)
}

/// Left-hand side minus right-hand side of `row` at `x`.
pub fn row_excess(row: &Row, x: &[f64]) -> f64 {
    row.activity(x) - row.rhs
}
