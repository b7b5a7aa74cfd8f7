//! Abstract syntax, parser and canonical printer for lattice terms and
//! statements.

mod ast;
mod parser;

pub use ast::{Atom, Literal, Relationship, Statement, Term};
pub use parser::{parse_goal, parse_goal_file, parse_statement, parse_statement_file, parse_term};
