//! A workbench for the relational lattice: concrete relations over finite
//! universes, an exhaustive identity checker, and finite model search over
//! the abstract signature `{^, v, ', R00, R11}`.

pub mod checker;
pub mod deps;
pub mod error;
pub mod model;
pub mod relation;
pub mod suites;
pub mod term;
pub mod universe;

pub use checker::{check, enumerate_relations, evaluate, Assignment, CheckReport, Mode, Verdict};
pub use deps::FdReading;
pub use error::{Error, Result};
pub use relation::{BinOp, ConstantKind, Relation};
pub use term::{parse_goal, parse_statement, parse_term, Atom, Literal, Relationship, Statement, Term};
pub use universe::{AttrSet, Universe};
