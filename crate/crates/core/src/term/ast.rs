use std::fmt;

use crate::relation::{BinOp, ConstantKind};

/// A relation literal as written, resolved against a universe only when
/// evaluated.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Literal {
    /// `{(a1=v1,a2=v2),...}`; `{()}` is the single empty tuple.
    Tuples(Vec<Vec<(String, String)>>),
    /// `empty(a1,a2)`
    Empty(Vec<String>),
    /// `full(a1,a2)`
    Full(Vec<String>),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Term {
    Var(String),
    Const(ConstantKind),
    Literal(Literal),
    Complement(Box<Term>),
    Binary(BinOp, Box<Term>, Box<Term>),
}

impl Term {
    pub fn var(name: &str) -> Term {
        Term::Var(name.to_string())
    }

    pub fn binary(op: BinOp, l: Term, r: Term) -> Term {
        Term::Binary(op, Box::new(l), Box::new(r))
    }

    pub fn complement(t: Term) -> Term {
        Term::Complement(Box::new(t))
    }

    fn collect_vars(&self, out: &mut Vec<String>) {
        match self {
            Term::Var(v) => {
                if !out.contains(v) {
                    out.push(v.clone());
                }
            }
            Term::Const(_) | Term::Literal(_) => {}
            Term::Complement(t) => t.collect_vars(out),
            Term::Binary(_, l, r) => {
                l.collect_vars(out);
                r.collect_vars(out);
            }
        }
    }

    pub fn free_variables(&self) -> Vec<String> {
        let mut out = Vec::new();
        self.collect_vars(&mut out);
        out
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Relationship {
    /// `=`
    Equal,
    /// `!=`
    NotEqual,
    /// `<`, the lattice order `x ^ y = x`
    Below,
}

impl Relationship {
    pub fn symbol(self) -> &'static str {
        match self {
            Relationship::Equal => "=",
            Relationship::NotEqual => "!=",
            Relationship::Below => "<",
        }
    }
}

/// An equation, inequation or order assertion.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Atom {
    pub relationship: Relationship,
    pub lhs: Term,
    pub rhs: Term,
}

impl Atom {
    pub fn new(relationship: Relationship, lhs: Term, rhs: Term) -> Self {
        Atom { relationship, lhs, rhs }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Statement {
    Atom(Atom),
    /// Horn implication: the conjunction of premises implies the conclusion.
    Implication { premises: Vec<Atom>, conclusion: Atom },
    /// `a | b | ...`, only accepted as a search goal.
    Disjunction(Vec<Atom>),
}

impl Statement {
    pub fn atoms(&self) -> Vec<&Atom> {
        match self {
            Statement::Atom(a) => vec![a],
            Statement::Implication { premises, conclusion } => {
                premises.iter().chain(std::iter::once(conclusion)).collect()
            }
            Statement::Disjunction(atoms) => atoms.iter().collect(),
        }
    }

    /// Variables in order of first appearance.
    pub fn free_variables(&self) -> Vec<String> {
        let mut out = Vec::new();
        for a in self.atoms() {
            a.lhs.collect_vars(&mut out);
            a.rhs.collect_vars(&mut out);
        }
        out
    }
}

fn write_list(f: &mut fmt::Formatter<'_>, items: &[String]) -> fmt::Result {
    f.write_str(&items.join(","))
}

impl fmt::Display for Literal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Literal::Empty(attrs) => {
                f.write_str("empty(")?;
                write_list(f, attrs)?;
                f.write_str(")")
            }
            Literal::Full(attrs) => {
                f.write_str("full(")?;
                write_list(f, attrs)?;
                f.write_str(")")
            }
            Literal::Tuples(tuples) => {
                f.write_str("{")?;
                for (i, t) in tuples.iter().enumerate() {
                    if i > 0 {
                        f.write_str(",")?;
                    }
                    let pairs: Vec<String> = t.iter().map(|(a, v)| format!("{a}={v}")).collect();
                    write!(f, "({})", pairs.join(","))?;
                }
                f.write_str("}")
            }
        }
    }
}

/// Canonical printer: operands that are binary terms are parenthesized
/// unless they continue a left-associated chain of the same operator.
impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Var(v) => f.write_str(v),
            Term::Const(k) => f.write_str(k.name()),
            Term::Literal(l) => write!(f, "{l}"),
            Term::Complement(t) => match **t {
                Term::Binary(..) => write!(f, "({t})'"),
                _ => write!(f, "{t}'"),
            },
            Term::Binary(op, l, r) => {
                match **l {
                    Term::Binary(lop, ..) if lop == *op => write!(f, "{l}")?,
                    Term::Binary(..) => write!(f, "({l})")?,
                    _ => write!(f, "{l}")?,
                }
                write!(f, " {} ", op.symbol())?;
                match **r {
                    Term::Binary(..) => write!(f, "({r})"),
                    _ => write!(f, "{r}"),
                }
            }
        }
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {} {}", self.lhs, self.relationship.symbol(), self.rhs)
    }
}

impl fmt::Display for Statement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Statement::Atom(a) => write!(f, "{a}"),
            Statement::Implication { premises, conclusion } => {
                for (i, p) in premises.iter().enumerate() {
                    if i > 0 {
                        f.write_str(" & ")?;
                    }
                    write!(f, "{p}")?;
                }
                write!(f, " -> {conclusion}")
            }
            Statement::Disjunction(atoms) => {
                for (i, a) in atoms.iter().enumerate() {
                    if i > 0 {
                        f.write_str(" | ")?;
                    }
                    write!(f, "{a}")?;
                }
                Ok(())
            }
        }
    }
}
