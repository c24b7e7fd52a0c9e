//! Conflict graphs for mixed-integer linear programs.
//!
//! The crate builds a conflict graph over the literals of the binary variables
//! of a model, strengthens set-packing rows by clique extension, and separates
//! clique and lifted odd-cycle cuts for a given fractional point.
//!
//! ```
//! use cgkit::cgraph::ConflictGraph;
//! use cgkit::model::{parse_mps, Literal};
//!
//! let mps = "NAME t\nROWS\n N obj\n L c\nCOLUMNS\n x c 1\n y c 1\nRHS\n rhs c 1\nBOUNDS\n BV b x\n BV b y\nENDATA\n";
//! let inst = parse_mps(mps).unwrap();
//! let g = ConflictGraph::build(&inst, 0);
//! assert!(g.conflicting(Literal::pos(0), Literal::pos(1)));
//! ```

pub mod bk;
pub mod cgraph;
pub mod model;
pub mod oracle;
pub mod presolve;
pub mod sep_clique;
pub mod sep_oddcycle;
