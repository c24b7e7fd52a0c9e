use std::fmt::Write as _;

use thiserror::Error;

use super::{Literal, MilpInstance};

/// Tolerance for binary values that sit marginally outside `[0, 1]`.
const RANGE_TOL: f64 = 1e-9;

#[derive(Debug, Error, PartialEq)]
pub enum PointError {
    #[error("line {line}: unknown variable `{name}`")]
    UnknownVariable { line: usize, name: String },
    #[error("line {line}: value {value} of binary variable `{name}` is outside [0, 1]")]
    OutOfRange { line: usize, name: String, value: f64 },
    #[error("line {line}: cannot parse number `{text}`")]
    BadNumber { line: usize, text: String },
    #[error("line {line}: expected `name value [reduced_cost]`")]
    Malformed { line: usize },
}

/// An LP solution restricted to the binary variables of an instance.
#[derive(Debug, Clone, PartialEq)]
pub struct FractionalPoint {
    /// `Some(value)` for binary variables, `None` for every other variable.
    pub values: Vec<Option<f64>>,
    pub reduced_costs: Option<Vec<f64>>,
}

impl FractionalPoint {
    /// A point over the binaries of `instance`, all at zero.
    pub fn zeros(instance: &MilpInstance) -> Self {
        let values = instance.variables.iter().map(|v| v.is_binary().then_some(0.0)).collect();
        FractionalPoint { values, reduced_costs: None }
    }

    /// Point from a dense value vector; values of non-binary variables are dropped.
    pub fn from_values(instance: &MilpInstance, x: &[f64]) -> Self {
        let mut p = Self::zeros(instance);
        for (slot, &v) in p.values.iter_mut().zip(x) {
            if slot.is_some() {
                *slot = Some(v);
            }
        }
        p
    }

    pub fn with_reduced_costs(mut self, rc: Vec<f64>) -> Self {
        self.reduced_costs = Some(rc);
        self
    }

    pub fn n_vars(&self) -> usize {
        self.values.len()
    }

    pub fn value(&self, var: usize) -> Option<f64> {
        self.values[var]
    }

    /// Value of a literal; zero when its variable is not binary.
    pub fn literal_value(&self, lit: Literal) -> f64 {
        self.values[lit.var].map_or(0.0, |x| lit.value(x))
    }

    pub fn node_value(&self, node: usize) -> f64 {
        self.literal_value(Literal::from_node(node, self.n_vars()))
    }

    /// Reduced cost of a literal. Raising a complement lowers its variable,
    /// so the complement carries the negated cost.
    pub fn literal_reduced_cost(&self, lit: Literal) -> Option<f64> {
        let rc = self.reduced_costs.as_ref()?[lit.var];
        Some(if lit.complemented { -rc } else { rc })
    }

    /// Writes the point in the format read by [`read_point`].
    pub fn to_text(&self, instance: &MilpInstance) -> String {
        let mut out = String::new();
        for (j, v) in self.values.iter().enumerate() {
            let Some(x) = v else { continue };
            let name = &instance.variables[j].name;
            match &self.reduced_costs {
                Some(rc) => {
                    let _ = writeln!(out, "{name} {x} {}", rc[j]);
                }
                None => {
                    let _ = writeln!(out, "{name} {x}");
                }
            }
        }
        out
    }
}

/// Reads `name value [reduced_cost]` lines. `#` starts a comment.
///
/// Binary variables missing from the file default to zero. Values given for
/// non-binary variables are accepted and ignored.
pub fn read_point(text: &str, instance: &MilpInstance) -> Result<FractionalPoint, PointError> {
    let lookup = instance.var_lookup();
    let mut point = FractionalPoint::zeros(instance);
    let mut rc: Option<Vec<f64>> = None;
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.split('#').next().unwrap_or("");
        let t: Vec<&str> = content.split_whitespace().collect();
        if t.is_empty() {
            continue;
        }
        if t.len() != 2 && t.len() != 3 {
            return Err(PointError::Malformed { line });
        }
        let j = *lookup
            .get(t[0])
            .ok_or_else(|| PointError::UnknownVariable { line, name: t[0].to_string() })?;
        let parse = |s: &str| s.parse::<f64>().map_err(|_| PointError::BadNumber { line, text: s.to_string() });
        let value = parse(t[1])?;
        if let Some(cost) = t.get(2) {
            let cost = parse(cost)?;
            rc.get_or_insert_with(|| vec![0.0; instance.n_vars()])[j] = cost;
        }
        if point.values[j].is_none() {
            continue;
        }
        if !(-RANGE_TOL..=1.0 + RANGE_TOL).contains(&value) {
            return Err(PointError::OutOfRange { line, name: t[0].to_string(), value });
        }
        point.values[j] = Some(value.clamp(0.0, 1.0));
    }
    point.reduced_costs = rc;
    Ok(point)
}
