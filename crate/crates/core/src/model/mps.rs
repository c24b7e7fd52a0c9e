//! Reading and writing a subset of the MPS format.
//!
//! Supported sections: `NAME`, `OBJSENSE`, `ROWS` (N/L/G/E), `COLUMNS` with
//! `MARKER` `INTORG`/`INTEND` blocks, `RHS`, `BOUNDS` and `ENDATA`. Fields are
//! split on whitespace, so fixed-format files parse as long as names contain no
//! blanks. A line that starts in the first column is a section header; data
//! lines are indented. Lines starting with `*` are comments.

use std::collections::HashMap;
use std::fmt::Write as _;

use thiserror::Error;

use super::{MilpInstance, ModelError, ObjectiveSense, Row, Sense, Variable};

#[derive(Debug, Error, PartialEq)]
pub enum MpsError {
    #[error("line {line}: unknown section `{name}`")]
    UnknownSection { line: usize, name: String },
    #[error("line {line}: section `{name}` is not supported")]
    Unsupported { line: usize, name: String },
    #[error("line {line}: data outside of any section")]
    NoSection { line: usize },
    #[error("line {line}: unknown row `{name}`")]
    UnknownRow { line: usize, name: String },
    #[error("line {line}: unknown column `{name}`")]
    UnknownColumn { line: usize, name: String },
    #[error("line {line}: duplicate row `{name}`")]
    DuplicateRow { line: usize, name: String },
    #[error("line {line}: column `{name}` appears in two separate blocks")]
    DuplicateColumn { line: usize, name: String },
    #[error("line {line}: entry for column `{column}` in row `{row}` given twice")]
    DuplicateEntry { line: usize, column: String, row: String },
    #[error("line {line}: cannot parse number `{text}`")]
    BadNumber { line: usize, text: String },
    #[error("line {line}: {message}")]
    Malformed { line: usize, message: String },
    #[error(transparent)]
    Invalid(#[from] ModelError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Section {
    None,
    Name,
    ObjSense,
    Rows,
    Columns,
    Rhs,
    Bounds,
    End,
}

enum RowRef {
    Objective,
    Free,
    Constraint(usize),
}

struct Parser {
    inst: MilpInstance,
    rows: HashMap<String, RowRef>,
    objective_seen: bool,
    cols: HashMap<String, usize>,
    bounds_set: Vec<bool>,
    integer_block: bool,
    last_column: Option<usize>,
}

fn number(line: usize, text: &str) -> Result<f64, MpsError> {
    text.parse::<f64>().map_err(|_| MpsError::BadNumber { line, text: text.to_string() })
}

fn malformed(line: usize, message: impl Into<String>) -> MpsError {
    MpsError::Malformed { line, message: message.into() }
}

/// Parses MPS text into an instance. Variables and rows keep file order.
pub fn parse_mps(text: &str) -> Result<MilpInstance, MpsError> {
    let mut p = Parser {
        inst: MilpInstance::default(),
        rows: HashMap::new(),
        objective_seen: false,
        cols: HashMap::new(),
        bounds_set: Vec::new(),
        integer_block: false,
        last_column: None,
    };
    let mut section = Section::None;
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        if raw.trim().is_empty() || raw.starts_with('*') {
            continue;
        }
        let tokens: Vec<&str> = raw.split_whitespace().collect();
        if !raw.starts_with(char::is_whitespace) {
            section = match tokens[0] {
                "NAME" => {
                    p.inst.name = tokens[1..].join(" ");
                    Section::Name
                }
                "OBJSENSE" => {
                    if let Some(s) = tokens.get(1) {
                        p.set_sense(line, s)?;
                    }
                    Section::ObjSense
                }
                "ROWS" => Section::Rows,
                "COLUMNS" => Section::Columns,
                "RHS" => Section::Rhs,
                "BOUNDS" => Section::Bounds,
                "ENDATA" => Section::End,
                "RANGES" | "SOS" | "QUADOBJ" | "QMATRIX" | "QSECTION" => {
                    return Err(MpsError::Unsupported { line, name: tokens[0].to_string() })
                }
                other => return Err(MpsError::UnknownSection { line, name: other.to_string() }),
            };
            if section == Section::End {
                break;
            }
            continue;
        }
        match section {
            Section::None | Section::Name | Section::End => return Err(MpsError::NoSection { line }),
            Section::ObjSense => p.set_sense(line, tokens[0])?,
            Section::Rows => p.row_line(line, &tokens)?,
            Section::Columns => p.column_line(line, &tokens)?,
            Section::Rhs => p.rhs_line(line, &tokens)?,
            Section::Bounds => p.bound_line(line, &tokens)?,
        }
    }
    for v in &mut p.inst.variables {
        if v.lower > v.upper {
            return Err(ModelError::BadBounds { name: v.name.clone(), lower: v.lower, upper: v.upper }.into());
        }
    }
    p.inst.validate()?;
    Ok(p.inst)
}

impl Parser {
    fn set_sense(&mut self, line: usize, s: &str) -> Result<(), MpsError> {
        self.inst.objective_sense = match s {
            "MIN" | "MINIMIZE" => ObjectiveSense::Minimize,
            "MAX" | "MAXIMIZE" => ObjectiveSense::Maximize,
            other => return Err(malformed(line, format!("unknown objective sense `{other}`"))),
        };
        Ok(())
    }

    fn row_line(&mut self, line: usize, t: &[&str]) -> Result<(), MpsError> {
        if t.len() != 2 {
            return Err(malformed(line, "expected `<type> <name>` in ROWS"));
        }
        let name = t[1].to_string();
        if self.rows.contains_key(&name) {
            return Err(MpsError::DuplicateRow { line, name });
        }
        let r = match t[0] {
            "N" if !self.objective_seen => {
                self.objective_seen = true;
                self.inst.objective_name = name.clone();
                RowRef::Objective
            }
            "N" => RowRef::Free,
            kind => {
                let sense = match kind {
                    "L" => Sense::Le,
                    "G" => Sense::Ge,
                    "E" => Sense::Eq,
                    other => return Err(malformed(line, format!("unknown row type `{other}`"))),
                };
                self.inst.rows.push(Row::new(name.clone(), Vec::new(), sense, 0.0));
                RowRef::Constraint(self.inst.rows.len() - 1)
            }
        };
        self.rows.insert(name, r);
        Ok(())
    }

    fn column_line(&mut self, line: usize, t: &[&str]) -> Result<(), MpsError> {
        if t.len() >= 3 && t[1].trim_matches('\'') == "MARKER" {
            match t[2].trim_matches('\'') {
                "INTORG" => self.integer_block = true,
                "INTEND" => self.integer_block = false,
                other => return Err(malformed(line, format!("unknown marker `{other}`"))),
            }
            return Ok(());
        }
        if t.len() != 3 && t.len() != 5 {
            return Err(malformed(line, "expected `<column> <row> <value> [<row> <value>]`"));
        }
        let name = t[0];
        let col = match self.cols.get(name) {
            Some(&j) => {
                if self.last_column != Some(j) {
                    return Err(MpsError::DuplicateColumn { line, name: name.to_string() });
                }
                j
            }
            None => {
                let mut v = Variable::continuous(name, 0.0, f64::INFINITY);
                v.is_integer = self.integer_block;
                self.inst.variables.push(v);
                self.bounds_set.push(false);
                let j = self.inst.variables.len() - 1;
                self.cols.insert(name.to_string(), j);
                j
            }
        };
        self.last_column = Some(col);
        for pair in t[1..].chunks(2) {
            let value = number(line, pair[1])?;
            match self.rows.get(pair[0]) {
                None => return Err(MpsError::UnknownRow { line, name: pair[0].to_string() }),
                Some(RowRef::Objective) => self.inst.variables[col].objective_coeff = value,
                Some(RowRef::Free) => {}
                Some(&RowRef::Constraint(i)) => {
                    let row = &mut self.inst.rows[i];
                    if row.coeffs.iter().any(|&(j, _)| j == col) {
                        return Err(MpsError::DuplicateEntry {
                            line,
                            column: name.to_string(),
                            row: pair[0].to_string(),
                        });
                    }
                    if value != 0.0 {
                        row.coeffs.push((col, value));
                    }
                }
            }
        }
        Ok(())
    }

    fn rhs_line(&mut self, line: usize, t: &[&str]) -> Result<(), MpsError> {
        // The RHS set name is optional: an odd token count means it is present.
        let pairs = match t.len() {
            2 | 4 => t,
            3 | 5 => &t[1..],
            _ => return Err(malformed(line, "expected `[<set>] <row> <value> [<row> <value>]`")),
        };
        for pair in pairs.chunks(2) {
            let value = number(line, pair[1])?;
            match self.rows.get(pair[0]) {
                None => return Err(MpsError::UnknownRow { line, name: pair[0].to_string() }),
                Some(RowRef::Objective) | Some(RowRef::Free) => {}
                Some(&RowRef::Constraint(i)) => self.inst.rows[i].rhs = value,
            }
        }
        Ok(())
    }

    fn bound_line(&mut self, line: usize, t: &[&str]) -> Result<(), MpsError> {
        let kind = t[0];
        let needs_value = !matches!(kind, "BV" | "MI" | "PL" | "FR");
        let (col_name, value) = if needs_value {
            match t.len() {
                3 => (t[1], number(line, t[2])?),
                4 => (t[2], number(line, t[3])?),
                _ => return Err(malformed(line, "expected `<type> [<set>] <column> <value>`")),
            }
        } else {
            match t.len() {
                2 => (t[1], 0.0),
                3 if self.cols.contains_key(t[2]) => (t[2], 0.0),
                3 => (t[1], 0.0),
                4 => (t[2], 0.0),
                _ => return Err(malformed(line, "expected `<type> [<set>] <column>`")),
            }
        };
        let j = *self
            .cols
            .get(col_name)
            .ok_or_else(|| MpsError::UnknownColumn { line, name: col_name.to_string() })?;
        let v = &mut self.inst.variables[j];
        self.bounds_set[j] = true;
        match kind {
            "UP" => v.upper = value,
            "LO" => v.lower = value,
            "FX" => {
                v.lower = value;
                v.upper = value;
            }
            "BV" => {
                v.is_integer = true;
                v.lower = 0.0;
                v.upper = 1.0;
            }
            "LI" => {
                v.is_integer = true;
                v.lower = value;
            }
            "UI" => {
                v.is_integer = true;
                v.upper = value;
            }
            "MI" => v.lower = f64::NEG_INFINITY,
            "PL" => v.upper = f64::INFINITY,
            "FR" => {
                v.lower = f64::NEG_INFINITY;
                v.upper = f64::INFINITY;
            }
            other => return Err(malformed(line, format!("unknown bound type `{other}`"))),
        }
        Ok(())
    }
}

/// Writes `inst` in the subset understood by [`parse_mps`].
///
/// Integer columns are wrapped in marker blocks; binaries get a `BV` bound.
/// `parse_mps(&write_mps(i))` reproduces `i` exactly.
pub fn write_mps(inst: &MilpInstance) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "NAME {}", inst.name);
    if inst.objective_sense == ObjectiveSense::Maximize {
        let _ = writeln!(out, "OBJSENSE\n    MAX");
    }
    let obj = &inst.objective_name;
    let _ = writeln!(out, "ROWS\n N  {obj}");
    for r in &inst.rows {
        let kind = match r.sense {
            Sense::Le => "L",
            Sense::Ge => "G",
            Sense::Eq => "E",
        };
        let _ = writeln!(out, " {kind}  {}", r.name);
    }

    let mut by_col: Vec<Vec<(usize, f64)>> = vec![Vec::new(); inst.n_vars()];
    for (i, r) in inst.rows.iter().enumerate() {
        for &(j, a) in &r.coeffs {
            by_col[j].push((i, a));
        }
    }
    let _ = writeln!(out, "COLUMNS");
    let mut in_block = false;
    let mut marker = 0;
    for (j, v) in inst.variables.iter().enumerate() {
        if v.is_integer != in_block {
            let tag = if v.is_integer { "INTORG" } else { "INTEND" };
            let _ = writeln!(out, "    MARKER{marker:<6} 'MARKER'  '{tag}'");
            marker += 1;
            in_block = v.is_integer;
        }
        if v.objective_coeff != 0.0 || by_col[j].is_empty() {
            let _ = writeln!(out, "    {}  {obj}  {}", v.name, v.objective_coeff);
        }
        for &(i, a) in &by_col[j] {
            let _ = writeln!(out, "    {}  {}  {}", v.name, inst.rows[i].name, a);
        }
    }
    if in_block {
        let _ = writeln!(out, "    MARKER{marker:<6} 'MARKER'  'INTEND'");
    }

    let _ = writeln!(out, "RHS");
    for r in &inst.rows {
        if r.rhs != 0.0 {
            let _ = writeln!(out, "    RHS  {}  {}", r.name, r.rhs);
        }
    }

    let _ = writeln!(out, "BOUNDS");
    for v in &inst.variables {
        let n = &v.name;
        if v.is_binary() {
            let _ = writeln!(out, " BV BND  {n}");
            continue;
        }
        match (v.lower, v.upper) {
            (l, u) if l == f64::NEG_INFINITY && u == f64::INFINITY => {
                let _ = writeln!(out, " FR BND  {n}");
            }
            (l, u) if l == u => {
                let _ = writeln!(out, " FX BND  {n}  {l}");
            }
            (l, u) => {
                if l == f64::NEG_INFINITY {
                    let _ = writeln!(out, " MI BND  {n}");
                } else if l != 0.0 {
                    let _ = writeln!(out, " LO BND  {n}  {l}");
                }
                if u != f64::INFINITY {
                    let _ = writeln!(out, " UP BND  {n}  {u}");
                }
            }
        }
    }
    let _ = writeln!(out, "ENDATA");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    const SMALL: &str = "\
NAME          tiny
ROWS
 N  obj
 L  c1
COLUMNS
    x1        c1        1
    x2        c1        1
RHS
    rhs       c1        1
BOUNDS
 BV bnd       x1
 BV bnd       x2
ENDATA
";

    #[test]
    fn parses_minimal_file() {
        let inst = parse_mps(SMALL).unwrap();
        assert_eq!(inst.name, "tiny");
        assert_eq!(inst.n_vars(), 2);
        assert!(inst.variables.iter().all(Variable::is_binary));
        assert_eq!(inst.rows.len(), 1);
        assert_eq!(inst.rows[0].sense, Sense::Le);
        assert_eq!(inst.rows[0].rhs, 1.0);
        assert_eq!(inst.rows[0].coeffs, vec![(0, 1.0), (1, 1.0)]);
    }

    #[test]
    fn unknown_row_reports_line() {
        let text = SMALL.replace("    x2        c1        1", "    x2        c9        1");
        assert_eq!(parse_mps(&text).unwrap_err(), MpsError::UnknownRow { line: 7, name: "c9".into() });
    }

    #[test]
    fn malformed_header_and_duplicates() {
        let text = SMALL.replace("RHS\n", "RHSX\n");
        assert!(matches!(parse_mps(&text), Err(MpsError::UnknownSection { line: 8, .. })));
        let text = SMALL.replace(" L  c1\n", " L  c1\n L  c1\n");
        assert!(matches!(parse_mps(&text), Err(MpsError::DuplicateRow { line: 5, .. })));
        let text = SMALL.replace("RHS\n", "RANGES\n");
        assert!(matches!(parse_mps(&text), Err(MpsError::Unsupported { .. })));
        let text = SMALL.replace(" BV bnd       x2", " BV bnd       x7");
        assert!(matches!(parse_mps(&text), Err(MpsError::UnknownColumn { line: 12, .. })));
    }

    #[test]
    fn integer_markers_and_bounds() {
        let text = "\
NAME m
ROWS
 N obj
 G r
COLUMNS
    MARKER 'MARKER' 'INTORG'
    a r 2 obj 3
    b r 0
    MARKER 'MARKER' 'INTEND'
    y r -1.5
RHS
    r 1
BOUNDS
 UP BND a 1
 UP BND b 4
 MI BND y
ENDATA
";
        let inst = parse_mps(text).unwrap();
        assert!(inst.variables[0].is_binary());
        assert_eq!(inst.variables[0].objective_coeff, 3.0);
        assert!(inst.variables[1].is_integer && !inst.variables[1].is_binary());
        assert!(!inst.variables[2].is_integer);
        assert_eq!(inst.variables[2].lower, f64::NEG_INFINITY);
        // the zero coefficient of `b` is dropped
        assert_eq!(inst.rows[0].coeffs, vec![(0, 2.0), (2, -1.5)]);
        assert_eq!(inst.rows[0].sense, Sense::Ge);
    }

    fn arb_instance() -> impl Strategy<Value = MilpInstance> {
        let var = (0u8..5, -3i32..3, 0i32..6, -4i32..4);
        (proptest::collection::vec(var, 1..8), proptest::collection::vec((0u8..3, -5i32..6), 0..6), any::<u64>())
            .prop_map(|(vars, rows, seed)| {
                let variables: Vec<Variable> = vars
                    .iter()
                    .enumerate()
                    .map(|(j, &(kind, lo, width, obj))| {
                        let mut v = match kind {
                            0 => Variable::binary(format!("b{j}")),
                            1 => Variable::continuous(format!("c{j}"), lo as f64, (lo + width) as f64),
                            2 => Variable::continuous(format!("f{j}"), f64::NEG_INFINITY, f64::INFINITY),
                            3 => {
                                let mut v = Variable::continuous(format!("i{j}"), 0.0, f64::INFINITY);
                                v.is_integer = true;
                                v
                            }
                            _ => Variable::continuous(format!("m{j}"), f64::NEG_INFINITY, width as f64),
                        };
                        v.objective_coeff = obj as f64 * 0.5;
                        v
                    })
                    .collect();
                let n = variables.len();
                let rows = rows
                    .iter()
                    .enumerate()
                    .map(|(i, &(sense, rhs))| {
                        let sense = [Sense::Le, Sense::Ge, Sense::Eq][sense as usize];
                        let coeffs = (0..n)
                            .filter_map(|j| {
                                let h = seed.wrapping_mul(31 + i as u64).rotate_left(j as u32 * 7) % 7;
                                (h < 4).then_some((j, h as f64 - 1.5))
                            })
                            .collect();
                        Row::new(format!("r{i}"), coeffs, sense, rhs as f64 / 4.0)
                    })
                    .collect();
                MilpInstance::new(variables, rows).unwrap()
            })
    }

    proptest! {
        #[test]
        fn write_then_parse_round_trips(inst in arb_instance()) {
            let text = write_mps(&inst);
            let back = parse_mps(&text).unwrap();
            prop_assert_eq!(&back, &inst);
            prop_assert_eq!(write_mps(&back), text);
        }
    }
}
