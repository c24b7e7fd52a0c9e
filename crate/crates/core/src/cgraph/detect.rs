use crate::model::{KnapsackRow, Literal, COEFF_EPS};

/// Cliques found in one knapsack row, in compact form.
///
/// `order` holds the row's literals by non-decreasing coefficient. The initial
/// clique is `order[start..]`; every extra entry `(o, f)` stands for the clique
/// `{order[o]} ∪ order[f..]`, where `f > start`.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct DetectedCliques {
    pub order: Vec<Literal>,
    pub first_start: Option<usize>,
    pub extra: Vec<(usize, usize)>,
}

impl DetectedCliques {
    pub fn is_empty(&self) -> bool {
        self.first_start.is_none()
    }

    pub fn count(&self) -> usize {
        self.first_start.map_or(0, |_| 1 + self.extra.len())
    }

    pub fn initial(&self) -> &[Literal] {
        self.first_start.map_or(&[], |k| &self.order[k..])
    }

    /// Every clique written out explicitly, initial clique first.
    pub fn expand(&self) -> Vec<Vec<Literal>> {
        let Some(k) = self.first_start else { return Vec::new() };
        let mut out = vec![self.order[k..].to_vec()];
        for &(o, f) in &self.extra {
            let mut c = vec![self.order[o]];
            c.extend_from_slice(&self.order[f..]);
            out.push(c);
        }
        out
    }

    /// Pairwise conflicts implied by the cliques, each pair sorted, deduplicated.
    pub fn edges(&self) -> Vec<(Literal, Literal)> {
        let mut out = Vec::new();
        for c in self.expand() {
            for (i, &a) in c.iter().enumerate() {
                for &b in &c[i + 1..] {
                    out.push(if a < b { (a, b) } else { (b, a) });
                }
            }
        }
        out.sort();
        out.dedup();
        out
    }
}

/// Smallest index in `lo..=hi` satisfying a monotone predicate that holds at `hi`.
fn smallest_true(mut lo: usize, mut hi: usize, mut pred: impl FnMut(usize) -> bool) -> usize {
    while lo < hi {
        let mid = lo + (hi - lo) / 2;
        if pred(mid) {
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    hi
}

/// Detects the cliques of a knapsack row in O(n log n).
pub fn detect_cliques(row: &KnapsackRow) -> DetectedCliques {
    detect_cliques_counted(row).0
}

/// Like [`detect_cliques`], also returning the number of coefficient
/// comparisons made (sorting plus every search probe).
pub fn detect_cliques_counted(row: &KnapsackRow) -> (DetectedCliques, u64) {
    let mut comparisons = 0u64;
    let mut terms: Vec<(Literal, f64)> = row.terms.clone();
    // stable: equal coefficients keep their row order
    terms.sort_by(|x, y| {
        comparisons += 1;
        x.1.total_cmp(&y.1)
    });
    let a: Vec<f64> = terms.iter().map(|t| t.1).collect();
    let order: Vec<Literal> = terms.iter().map(|t| t.0).collect();
    let n = a.len();
    let b = row.rhs + COEFF_EPS;

    let mut out = DetectedCliques { order, first_start: None, extra: Vec::new() };
    if n < 2 {
        return (out, comparisons);
    }
    comparisons += 1;
    if a[n - 2] + a[n - 1] <= b {
        return (out, comparisons);
    }
    let k = smallest_true(0, n - 2, |i| {
        comparisons += 1;
        a[i] + a[i + 1] > b
    });
    out.first_start = Some(k);
    for o in (0..k).rev() {
        comparisons += 1;
        if a[o] + a[n - 1] <= b {
            break;
        }
        let f = smallest_true(o + 1, n - 1, |f| {
            comparisons += 1;
            a[o] + a[f] > b
        });
        out.extra.push((o, f));
    }
    (out, comparisons)
}
