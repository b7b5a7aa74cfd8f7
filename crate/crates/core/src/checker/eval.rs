//! Term evaluation over any interpretation of the signature, and the
//! assignment scan shared by the concrete checker and abstract models.

use std::sync::atomic::{AtomicU64, Ordering};

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::relation::{BinOp, ConstantKind};
use crate::term::{Atom, Literal, Relationship, Statement, Term};

/// An interpretation of the lattice signature.
pub trait Algebra: Sync {
    type Elem: Clone + PartialEq + Send + Sync;

    fn constant(&self, k: ConstantKind) -> Result<Self::Elem>;
    fn literal(&self, lit: &Literal) -> Result<Self::Elem>;
    fn complement(&self, a: &Self::Elem) -> Result<Self::Elem>;
    fn apply(&self, op: BinOp, a: &Self::Elem, b: &Self::Elem) -> Result<Self::Elem>;

    fn below(&self, a: &Self::Elem, b: &Self::Elem) -> Result<bool> {
        Ok(self.apply(BinOp::Meet, a, b)? == *a)
    }
}

/// A term with variables replaced by slot indices and constants and
/// literals already interpreted.
#[derive(Clone, Debug)]
pub enum Node<E> {
    Var(usize),
    Value(E),
    Complement(Box<Node<E>>),
    Binary(BinOp, Box<Node<E>>, Box<Node<E>>),
}

impl<E: Clone + PartialEq> Node<E> {
    pub fn compile<A: Algebra<Elem = E>>(alg: &A, term: &Term, vars: &[String]) -> Result<Self> {
        Ok(match term {
            Term::Var(v) => Node::Var(
                vars.iter()
                    .position(|n| n == v)
                    .ok_or_else(|| Error::UnboundVariable(v.clone()))?,
            ),
            Term::Const(k) => Node::Value(alg.constant(*k)?),
            Term::Literal(l) => Node::Value(alg.literal(l)?),
            Term::Complement(t) => Node::Complement(Box::new(Self::compile(alg, t, vars)?)),
            Term::Binary(op, l, r) => Node::Binary(
                *op,
                Box::new(Self::compile(alg, l, vars)?),
                Box::new(Self::compile(alg, r, vars)?),
            ),
        })
    }

    pub fn eval<A: Algebra<Elem = E>>(&self, alg: &A, env: &[&E]) -> Result<E> {
        match self {
            Node::Var(i) => Ok(env[*i].clone()),
            Node::Value(v) => Ok(v.clone()),
            Node::Complement(t) => alg.complement(&t.eval(alg, env)?),
            Node::Binary(op, l, r) => alg.apply(*op, &l.eval(alg, env)?, &r.eval(alg, env)?),
        }
    }
}

#[derive(Clone, Debug)]
pub struct CompiledAtom<E> {
    relationship: Relationship,
    lhs: Node<E>,
    rhs: Node<E>,
}

impl<E: Clone + PartialEq> CompiledAtom<E> {
    fn compile<A: Algebra<Elem = E>>(alg: &A, atom: &Atom, vars: &[String]) -> Result<Self> {
        Ok(CompiledAtom {
            relationship: atom.relationship,
            lhs: Node::compile(alg, &atom.lhs, vars)?,
            rhs: Node::compile(alg, &atom.rhs, vars)?,
        })
    }

    pub fn holds<A: Algebra<Elem = E>>(&self, alg: &A, env: &[&E]) -> Result<bool> {
        let l = self.lhs.eval(alg, env)?;
        let r = self.rhs.eval(alg, env)?;
        Ok(match self.relationship {
            Relationship::Equal => l == r,
            Relationship::NotEqual => l != r,
            Relationship::Below => alg.below(&l, &r)?,
        })
    }
}

#[derive(Clone, Debug)]
enum Shape<E> {
    Atom(CompiledAtom<E>),
    Implication { premises: Vec<CompiledAtom<E>>, conclusion: CompiledAtom<E> },
    Disjunction(Vec<CompiledAtom<E>>),
}

/// Outcome of one assignment.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Instance {
    /// Whether every premise held (always true for non-implications).
    pub premises: bool,
    pub holds: bool,
}

#[derive(Clone, Debug)]
pub struct Compiled<E> {
    vars: Vec<String>,
    shape: Shape<E>,
}

impl<E: Clone + PartialEq + Send + Sync> Compiled<E> {
    pub fn new<A: Algebra<Elem = E>>(alg: &A, s: &Statement) -> Result<Self> {
        let vars = s.free_variables();
        let shape = match s {
            Statement::Atom(a) => Shape::Atom(CompiledAtom::compile(alg, a, &vars)?),
            Statement::Implication { premises, conclusion } => Shape::Implication {
                premises: premises
                    .iter()
                    .map(|p| CompiledAtom::compile(alg, p, &vars))
                    .collect::<Result<_>>()?,
                conclusion: CompiledAtom::compile(alg, conclusion, &vars)?,
            },
            Statement::Disjunction(atoms) => Shape::Disjunction(
                atoms
                    .iter()
                    .map(|a| CompiledAtom::compile(alg, a, &vars))
                    .collect::<Result<_>>()?,
            ),
        };
        Ok(Compiled { vars, shape })
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn is_implication(&self) -> bool {
        matches!(self.shape, Shape::Implication { .. })
    }

    pub fn instance<A: Algebra<Elem = E>>(&self, alg: &A, env: &[&E]) -> Result<Instance> {
        match &self.shape {
            Shape::Atom(a) => Ok(Instance { premises: true, holds: a.holds(alg, env)? }),
            Shape::Implication { premises, conclusion } => {
                for p in premises {
                    if !p.holds(alg, env)? {
                        return Ok(Instance { premises: false, holds: true });
                    }
                }
                Ok(Instance { premises: true, holds: conclusion.holds(alg, env)? })
            }
            Shape::Disjunction(atoms) => {
                for a in atoms {
                    if a.holds(alg, env)? {
                        return Ok(Instance { premises: true, holds: true });
                    }
                }
                Ok(Instance { premises: true, holds: false })
            }
        }
    }
}

/// Result of scanning an assignment space.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Scan {
    /// First refuting assignment (carrier indices per variable) in canonical order.
    pub witness: Option<Vec<usize>>,
    /// Assignments evaluated, up to and including the witness.
    pub tested: u64,
    /// Of those, assignments whose premises held.
    pub premises: u64,
}

/// Decodes the `index`-th assignment of `k` variables over `n` values; the
/// first variable is most significant.
pub fn decode(mut index: u64, n: usize, k: usize) -> Vec<usize> {
    let mut out = vec![0; k];
    for slot in out.iter_mut().rev() {
        *slot = (index % n as u64) as usize;
        index /= n as u64;
    }
    out
}

fn scan_range<A: Algebra>(
    alg: &A,
    stmt: &Compiled<A::Elem>,
    carrier: &[A::Elem],
    start: u64,
    end: u64,
    on_error: &dyn Fn(&[usize], Error) -> Error,
) -> Result<Scan> {
    let k = stmt.vars().len();
    let n = carrier.len();
    let mut idx = decode(start, n.max(1), k);
    let mut tested = 0;
    let mut premises = 0;
    let mut env: Vec<&A::Elem> = idx.iter().map(|&i| &carrier[i]).collect();
    for _ in start..end {
        let inst = stmt.instance(alg, &env).map_err(|e| on_error(&idx, e))?;
        tested += 1;
        if inst.premises {
            premises += 1;
        }
        if !inst.holds {
            return Ok(Scan { witness: Some(idx), tested, premises });
        }
        // odometer step
        let mut i = k;
        while i > 0 {
            i -= 1;
            idx[i] += 1;
            if idx[i] < n {
                env[i] = &carrier[idx[i]];
                break;
            }
            idx[i] = 0;
            env[i] = &carrier[0];
        }
    }
    Ok(Scan { witness: None, tested, premises })
}

/// Scans all `n^k` assignments in canonical order. The space is split into
/// blocks evaluated in parallel; the merged result equals a sequential scan
/// (first witness in canonical order, counts up to and including it).
pub fn scan_exhaustive<A: Algebra>(
    alg: &A,
    stmt: &Compiled<A::Elem>,
    carrier: &[A::Elem],
    on_error: &(dyn Fn(&[usize], Error) -> Error + Sync),
) -> Result<Scan> {
    let k = stmt.vars().len() as u32;
    let total = (carrier.len() as u64).pow(k);
    if total == 0 {
        return Ok(Scan { witness: None, tested: 0, premises: 0 });
    }
    const BLOCK: u64 = 4096;
    let blocks = total.div_ceil(BLOCK);
    // Blocks after the earliest refuting block are never merged; skip them.
    let first_refuted = AtomicU64::new(u64::MAX);
    let parts: Vec<Result<Scan>> = (0..blocks)
        .into_par_iter()
        .map(|b| {
            if b > first_refuted.load(Ordering::Relaxed) {
                return Ok(Scan { witness: None, tested: 0, premises: 0 });
            }
            let part = scan_range(alg, stmt, carrier, b * BLOCK, ((b + 1) * BLOCK).min(total), on_error);
            if matches!(&part, Ok(Scan { witness: Some(_), .. }) | Err(_)) {
                first_refuted.fetch_min(b, Ordering::Relaxed);
            }
            part
        })
        .collect();
    let mut merged = Scan { witness: None, tested: 0, premises: 0 };
    for part in parts {
        let part = part?;
        merged.tested += part.tested;
        merged.premises += part.premises;
        if part.witness.is_some() {
            merged.witness = part.witness;
            break;
        }
    }
    Ok(merged)
}
