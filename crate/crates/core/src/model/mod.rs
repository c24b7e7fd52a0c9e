//! MILP instances, literals and knapsack normalization.
//!
//! A [`MilpInstance`] is an ordered list of variables and rows as read from
//! an MPS file. Rows over binary variables can be rewritten into
//! [`KnapsackRow`]s, `sum a_j * lit_j <= b` with every `a_j > 0`, which is the
//! form conflict detection works on.

mod mps;
mod point;

use std::collections::HashMap;
use std::fmt;

use thiserror::Error;

pub use mps::{parse_mps, write_mps, MpsError};
pub use point::{read_point, FractionalPoint, PointError};

/// Absolute tolerance for coefficient and right-hand-side comparisons.
pub const COEFF_EPS: f64 = 1e-8;

#[derive(Debug, Error, PartialEq)]
pub enum ModelError {
    #[error("duplicate variable name `{0}`")]
    DuplicateVariable(String),
    #[error("duplicate row name `{0}`")]
    DuplicateRow(String),
    #[error("row `{row}` references variable index {index} but the instance has {n} variables")]
    BadVariableIndex { row: String, index: usize, n: usize },
    #[error("row `{row}` lists variable index {index} twice")]
    DuplicateEntry { row: String, index: usize },
    #[error("row `{row}` has a non-finite or zero coefficient")]
    BadCoefficient { row: String },
    #[error("variable `{name}` has lower bound {lower} above upper bound {upper}")]
    BadBounds { name: String, lower: f64, upper: f64 },
    #[error("degenerate gap: best solution equals the first LP bound ({0})")]
    DegenerateGap(f64),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Variable {
    pub name: String,
    pub lower: f64,
    pub upper: f64,
    pub is_integer: bool,
    pub objective_coeff: f64,
}

impl Variable {
    pub fn continuous(name: impl Into<String>, lower: f64, upper: f64) -> Self {
        Variable { name: name.into(), lower, upper, is_integer: false, objective_coeff: 0.0 }
    }

    pub fn binary(name: impl Into<String>) -> Self {
        Variable { name: name.into(), lower: 0.0, upper: 1.0, is_integer: true, objective_coeff: 0.0 }
    }

    pub fn is_binary(&self) -> bool {
        self.is_integer && self.lower == 0.0 && self.upper == 1.0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Sense {
    Le,
    Ge,
    Eq,
}

impl fmt::Display for Sense {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Sense::Le => "<=",
            Sense::Ge => ">=",
            Sense::Eq => "=",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Row {
    pub name: String,
    pub coeffs: Vec<(usize, f64)>,
    pub sense: Sense,
    pub rhs: f64,
}

impl Row {
    pub fn new(name: impl Into<String>, coeffs: Vec<(usize, f64)>, sense: Sense, rhs: f64) -> Self {
        Row { name: name.into(), coeffs, sense, rhs }
    }

    /// Left-hand side activity at `x` (indexed by variable).
    pub fn activity(&self, x: &[f64]) -> f64 {
        self.coeffs.iter().map(|&(j, a)| a * x[j]).sum()
    }

    pub fn is_satisfied(&self, x: &[f64], tol: f64) -> bool {
        let lhs = self.activity(x);
        match self.sense {
            Sense::Le => lhs <= self.rhs + tol,
            Sense::Ge => lhs >= self.rhs - tol,
            Sense::Eq => (lhs - self.rhs).abs() <= tol,
        }
    }

    /// Human-readable form, e.g. `c1: x1 - x3 <= 0`.
    pub fn to_text(&self, instance: &MilpInstance) -> String {
        let mut out = format!("{}:", self.name);
        if self.coeffs.is_empty() {
            out.push_str(" 0");
        }
        for (pos, &(j, a)) in self.coeffs.iter().enumerate() {
            let name = &instance.variables[j].name;
            let sign = if a < 0.0 { "-" } else { "+" };
            if pos == 0 {
                out.push(' ');
                if a < 0.0 {
                    out.push('-');
                }
            } else {
                out.push_str(&format!(" {sign} "));
            }
            let mag = a.abs();
            if mag == 1.0 {
                out.push_str(name);
            } else {
                out.push_str(&format!("{mag} {name}"));
            }
        }
        out.push_str(&format!(" {} {}", self.sense, self.rhs));
        out
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ObjectiveSense {
    Minimize,
    Maximize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MilpInstance {
    pub name: String,
    pub objective_name: String,
    pub objective_sense: ObjectiveSense,
    pub variables: Vec<Variable>,
    pub rows: Vec<Row>,
}

impl Default for MilpInstance {
    fn default() -> Self {
        MilpInstance {
            name: String::new(),
            objective_name: "OBJ".to_string(),
            objective_sense: ObjectiveSense::Minimize,
            variables: Vec::new(),
            rows: Vec::new(),
        }
    }
}

impl MilpInstance {
    /// Builds an instance and checks every structural invariant.
    pub fn new(variables: Vec<Variable>, rows: Vec<Row>) -> Result<Self, ModelError> {
        let inst = MilpInstance { variables, rows, ..Default::default() };
        inst.validate()?;
        Ok(inst)
    }

    pub fn validate(&self) -> Result<(), ModelError> {
        let mut names = HashMap::new();
        for v in &self.variables {
            if names.insert(v.name.as_str(), ()).is_some() {
                return Err(ModelError::DuplicateVariable(v.name.clone()));
            }
            if v.lower > v.upper {
                return Err(ModelError::BadBounds { name: v.name.clone(), lower: v.lower, upper: v.upper });
            }
        }
        let n = self.variables.len();
        let mut row_names = HashMap::new();
        let mut seen = vec![false; n];
        for r in &self.rows {
            if row_names.insert(r.name.as_str(), ()).is_some() {
                return Err(ModelError::DuplicateRow(r.name.clone()));
            }
            for &(j, a) in &r.coeffs {
                if j >= n {
                    return Err(ModelError::BadVariableIndex { row: r.name.clone(), index: j, n });
                }
                if !a.is_finite() || a == 0.0 {
                    return Err(ModelError::BadCoefficient { row: r.name.clone() });
                }
                if seen[j] {
                    return Err(ModelError::DuplicateEntry { row: r.name.clone(), index: j });
                }
                seen[j] = true;
            }
            for &(j, _) in &r.coeffs {
                seen[j] = false;
            }
        }
        Ok(())
    }

    pub fn n_vars(&self) -> usize {
        self.variables.len()
    }

    pub fn nonzeros(&self) -> usize {
        self.rows.iter().map(|r| r.coeffs.len()).sum()
    }

    pub fn n_binary(&self) -> usize {
        self.variables.iter().filter(|v| v.is_binary()).count()
    }

    pub fn var_index(&self, name: &str) -> Option<usize> {
        self.variables.iter().position(|v| v.name == name)
    }

    /// Map from variable name to index; callers doing many lookups should use this.
    pub fn var_lookup(&self) -> HashMap<&str, usize> {
        self.variables.iter().enumerate().map(|(j, v)| (v.name.as_str(), j)).collect()
    }

    /// Prints a literal as `name` or `!name`.
    pub fn literal_name(&self, lit: Literal) -> String {
        let name = &self.variables[lit.var].name;
        if lit.complemented {
            format!("!{name}")
        } else {
            name.clone()
        }
    }

    pub fn row_uses_only_binaries(&self, row: &Row) -> bool {
        row.coeffs.iter().all(|&(j, _)| self.variables[j].is_binary())
    }
}

/// A binary variable or its complement.
///
/// The derived ordering matches node ids: every plain literal sorts before
/// every complemented one, and within a polarity literals sort by variable.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Literal {
    pub complemented: bool,
    pub var: usize,
}

impl Literal {
    pub fn pos(var: usize) -> Self {
        Literal { complemented: false, var }
    }

    pub fn neg(var: usize) -> Self {
        Literal { complemented: true, var }
    }

    pub fn complement(self) -> Self {
        Literal { complemented: !self.complemented, var: self.var }
    }

    /// Node id in a graph over `n` variables: `var` or `var + n`.
    pub fn node(self, n: usize) -> usize {
        if self.complemented {
            self.var + n
        } else {
            self.var
        }
    }

    pub fn from_node(node: usize, n: usize) -> Self {
        if node >= n {
            Literal::neg(node - n)
        } else {
            Literal::pos(node)
        }
    }

    /// Value of the literal given the value of its variable.
    pub fn value(self, x: f64) -> f64 {
        if self.complemented {
            1.0 - x
        } else {
            x
        }
    }
}

/// Node id of the complement of `node` in a graph over `n` variables.
pub fn complement_node(node: usize, n: usize) -> usize {
    if node >= n {
        node - n
    } else {
        node + n
    }
}

/// `sum coeff * literal <= rhs` with every coefficient strictly positive.
#[derive(Debug, Clone, PartialEq)]
pub struct KnapsackRow {
    pub terms: Vec<(Literal, f64)>,
    pub rhs: f64,
    pub origin_row: usize,
}

impl KnapsackRow {
    pub fn is_set_packing(&self) -> bool {
        (self.rhs - 1.0).abs() <= COEFF_EPS
            && self.terms.iter().all(|&(_, a)| (a - 1.0).abs() <= COEFF_EPS)
    }
}

/// Rewrites `row` into knapsack rows.
///
/// A `>=` row is negated first and an `=` row yields both directions. Each
/// negative coefficient is replaced by its absolute value on the complemented
/// literal, and the right-hand side grows by the same amount.
///
/// Returns `None` when the row touches a non-binary variable; such rows take no
/// part in conflict detection.
pub fn normalize_to_knapsack(row_index: usize, instance: &MilpInstance) -> Option<Vec<KnapsackRow>> {
    let row = &instance.rows[row_index];
    if !instance.row_uses_only_binaries(row) {
        return None;
    }
    let directions: &[f64] = match row.sense {
        Sense::Le => &[1.0],
        Sense::Ge => &[-1.0],
        Sense::Eq => &[1.0, -1.0],
    };
    let out = directions
        .iter()
        .map(|&sign| {
            let mut rhs = sign * row.rhs;
            let terms = row
                .coeffs
                .iter()
                .map(|&(j, a)| {
                    let a = sign * a;
                    if a < 0.0 {
                        rhs -= a;
                        (Literal::neg(j), -a)
                    } else {
                        (Literal::pos(j), a)
                    }
                })
                .collect();
            KnapsackRow { terms, rhs, origin_row: row_index }
        })
        .collect();
    Some(out)
}

/// Builds `sum coeff * literal <= rhs` over original variables.
///
/// Complemented literals are substituted by `1 - x_j`. Terms on the same
/// variable are merged and cancelled terms are dropped.
pub fn literal_row(name: impl Into<String>, terms: &[(Literal, f64)], rhs: f64) -> Row {
    let mut rhs = rhs;
    let mut acc: Vec<(usize, f64)> = Vec::with_capacity(terms.len());
    for &(lit, a) in terms {
        let (coef, shift) = if lit.complemented { (-a, a) } else { (a, 0.0) };
        rhs -= shift;
        match acc.iter_mut().find(|(j, _)| *j == lit.var) {
            Some(entry) => entry.1 += coef,
            None => acc.push((lit.var, coef)),
        }
    }
    acc.retain(|&(_, a)| a != 0.0);
    acc.sort_by_key(|&(j, _)| j);
    Row::new(name, acc, Sense::Le, rhs)
}

/// Share of the integrality gap closed by the current LP bound, in percent.
pub fn gap_closed(best_sol: f64, first_lp: f64, current_lp: f64) -> Result<f64, ModelError> {
    let gap = best_sol - first_lp;
    if gap.abs() <= 1e-12 * best_sol.abs().max(1.0) {
        return Err(ModelError::DegenerateGap(best_sol));
    }
    Ok(100.0 - 100.0 * (best_sol - current_lp) / gap)
}
