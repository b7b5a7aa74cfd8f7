//! Deciding statements over a universe by enumerating every relation.

pub mod eval;
mod report;

use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::relation::{BinOp, ConstantKind, Relation};
use crate::term::{Literal, Statement, Term};
use crate::universe::{AttrSet, Universe};
use eval::{Algebra, Compiled, Node};

pub use report::{Assignment, CheckReport, Mode, StructuredReport, Verdict};

/// Default limit on the number of relations an enumeration may produce.
pub const DEFAULT_ENUMERATION_LIMIT: u128 = 1 << 20;

/// Default limit on the assignments of one exhaustive check.
pub const DEFAULT_ASSIGNMENT_LIMIT: u128 = 200_000_000;

/// The universe viewed as an interpretation of the signature.
pub struct Concrete<'u>(pub &'u Universe);

impl Algebra for Concrete<'_> {
    type Elem = Relation;

    fn constant(&self, k: ConstantKind) -> Result<Relation> {
        self.0.constant(k)
    }

    fn literal(&self, lit: &Literal) -> Result<Relation> {
        self.0.resolve_literal(lit)
    }

    fn complement(&self, a: &Relation) -> Result<Relation> {
        self.0.complement(a)
    }

    fn apply(&self, op: BinOp, a: &Relation, b: &Relation) -> Result<Relation> {
        self.0.apply(op, a, b)
    }
}

impl Universe {
    /// Interprets a literal against this universe.
    pub fn resolve_literal(&self, lit: &Literal) -> Result<Relation> {
        match lit {
            Literal::Empty(attrs) => Ok(Relation::empty(self.header_of(attrs)?)),
            Literal::Full(attrs) => self.full(self.header_of(attrs)?),
            Literal::Tuples(tuples) => {
                let first = tuples.first().ok_or_else(|| Error::InvalidRelation("empty tuple list".into()))?;
                let names: Vec<&str> = first.iter().map(|(a, _)| a.as_str()).collect();
                let h = self.header_of(&names)?;
                let mut body = Vec::with_capacity(tuples.len());
                for t in tuples {
                    body.push(self.tuple(h, t)?);
                }
                Ok(Relation::from_parts(h, body))
            }
        }
    }

    /// Number of relations over this universe: the sum over headers `H` of
    /// `2^(tuples over H)`.
    pub fn relation_count(&self) -> u128 {
        headers(self)
            .map(|h| {
                let space = self.tuple_space(h);
                if space >= 127 {
                    u128::MAX
                } else {
                    1u128 << space
                }
            })
            .fold(0u128, |acc, c| acc.saturating_add(c))
    }
}

/// Headers in canonical order: by size, then lexicographically by
/// attribute index.
fn headers(u: &Universe) -> impl Iterator<Item = AttrSet> + '_ {
    let n = u.attribute_count();
    (0..=n).flat_map(move |size| combinations(n, size))
}

fn combinations(n: usize, k: usize) -> Vec<AttrSet> {
    fn go(start: usize, n: usize, k: usize, acc: u64, out: &mut Vec<AttrSet>) {
        if k == 0 {
            out.push(AttrSet::from_bits(acc));
            return;
        }
        for a in start..n {
            if n - a < k {
                break;
            }
            go(a + 1, n, k - 1, acc | (1 << a), out);
        }
    }
    let mut out = Vec::new();
    go(0, n, k, 0, &mut out);
    out
}

/// Every relation over `u` exactly once, in canonical order: headers by
/// size then attribute order; within a header, bodies in binary counting
/// order over the lexicographically ordered tuple space.
pub fn enumerate_relations(u: &Universe) -> Result<Vec<Relation>> {
    enumerate_relations_with_limit(u, DEFAULT_ENUMERATION_LIMIT)
}

pub fn enumerate_relations_with_limit(u: &Universe, limit: u128) -> Result<Vec<Relation>> {
    let required = u.relation_count();
    if required > limit {
        return Err(Error::BudgetExceeded { required, limit });
    }
    let mut out = Vec::with_capacity(required as usize);
    for h in headers(u) {
        let space: Vec<Vec<u32>> = u.tuples_over(h).collect();
        for mask in 0u64..(1u64 << space.len()) {
            let body = space
                .iter()
                .enumerate()
                .filter(|(i, _)| mask >> i & 1 == 1)
                .map(|(_, t)| t.clone())
                .collect();
            out.push(Relation::from_parts(h, body));
        }
    }
    Ok(out)
}

/// Evaluates `t` under `a`, which must bind every variable of `t`.
pub fn evaluate(u: &Universe, t: &Term, a: &Assignment) -> Result<Relation> {
    let alg = Concrete(u);
    let vars: Vec<String> = a.iter().map(|(n, _)| n.clone()).collect();
    let node = Node::compile(&alg, t, &vars)?;
    let env: Vec<&Relation> = a.iter().map(|(_, r)| r).collect();
    for r in &env {
        u.validate(r)?;
    }
    node.eval(&alg, &env)
}

/// Whether `s` holds under `a`.
pub fn holds_under(u: &Universe, s: &Statement, a: &Assignment) -> Result<bool> {
    let alg = Concrete(u);
    let compiled = Compiled::new(&alg, s)?;
    let mut env = Vec::new();
    for v in compiled.vars() {
        let r = a.get(v).ok_or_else(|| Error::UnboundVariable(v.clone()))?;
        u.validate(r)?;
        env.push(r);
    }
    Ok(compiled.instance(&alg, &env)?.holds)
}

/// Checker options beyond the mode.
#[derive(Clone, Copy, Debug)]
pub struct Limits {
    pub relations: u128,
    pub assignments: u128,
}

impl Default for Limits {
    fn default() -> Self {
        Limits { relations: DEFAULT_ENUMERATION_LIMIT, assignments: DEFAULT_ASSIGNMENT_LIMIT }
    }
}

pub fn check(u: &Universe, s: &Statement, mode: Mode) -> Result<CheckReport> {
    check_with_limits(u, s, mode, Limits::default())
}

pub fn check_with_limits(u: &Universe, s: &Statement, mode: Mode, limits: Limits) -> Result<CheckReport> {
    let relations = enumerate_relations_with_limit(u, limits.relations)?;
    check_over(u, &relations, s, mode, limits)
}

/// Checks `s` against a pre-enumerated relation list (the canonical
/// enumeration of `u`), so a caller checking many statements enumerates once.
pub fn check_over(u: &Universe, relations: &[Relation], s: &Statement, mode: Mode, limits: Limits) -> Result<CheckReport> {
    let start = Instant::now();
    let alg = Concrete(u);
    let compiled = Compiled::new(&alg, s)?;
    let k = compiled.vars().len();
    let n = relations.len();
    let implication = compiled.is_implication();
    let witness_of = |idx: &[usize]| {
        Assignment::new(
            compiled
                .vars()
                .iter()
                .zip(idx)
                .map(|(v, &i)| (v.clone(), relations[i].clone()))
                .collect(),
        )
    };
    let on_error = |idx: &[usize], e: Error| Error::Evaluation {
        assignment: witness_of(idx).render(u),
        source: Box::new(e),
    };

    let (verdict, witness, tested, premises) = match mode {
        Mode::Exhaustive => {
            let required = (n as u128).checked_pow(k as u32).unwrap_or(u128::MAX);
            if required > limits.assignments {
                return Err(Error::BudgetExceeded { required, limit: limits.assignments });
            }
            let scan = eval::scan_exhaustive(&alg, &compiled, relations, &on_error)?;
            let verdict = if scan.witness.is_some() { Verdict::Refuted } else { Verdict::Holds };
            (verdict, scan.witness, scan.tested, scan.premises)
        }
        Mode::Sample { seed, samples } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut tested = 0;
            let mut premises = 0;
            let mut witness = None;
            for _ in 0..samples {
                let idx: Vec<usize> = (0..k).map(|_| rng.gen_range(0..n)).collect();
                let env: Vec<&Relation> = idx.iter().map(|&i| &relations[i]).collect();
                let inst = compiled.instance(&alg, &env).map_err(|e| on_error(&idx, e))?;
                tested += 1;
                if inst.premises {
                    premises += 1;
                }
                if !inst.holds {
                    witness = Some(idx);
                    break;
                }
            }
            let verdict = if witness.is_some() { Verdict::Refuted } else { Verdict::BudgetExhausted };
            (verdict, witness, tested, premises)
        }
    };

    Ok(CheckReport {
        statement: s.to_string(),
        verdict,
        witness: witness.map(|idx| witness_of(&idx)),
        relations: n as u64,
        assignments_tested: tested,
        premises_satisfied: implication.then_some(premises),
        mode,
        elapsed: start.elapsed(),
    })
}
