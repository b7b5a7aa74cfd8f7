//! Abstract finite models of the signature `{^, v, ', R00, R11}`.
//!
//! Inner join, outer union, cylindrification, `R01` and `R10` are not
//! stored: they are derived from the base tables by their point-free
//! definitions.

mod file;
pub mod search;

use crate::checker::eval::{self, Algebra, Compiled};
use crate::checker::{enumerate_relations, Verdict};
use crate::error::{Error, Result};
use crate::relation::{BinOp, ConstantKind};
use crate::term::{Literal, Statement};
use crate::universe::Universe;

pub use search::{search_model, SearchOptions, SearchOutcome, SearchStats};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteModel {
    size: usize,
    meet: Vec<usize>,
    join: Vec<usize>,
    complement: Vec<usize>,
    r00: usize,
    r11: usize,
    derived: Derived,
}

#[derive(Clone, Debug, PartialEq, Eq)]
struct Derived {
    inner_join: Vec<usize>,
    outer_union: Vec<usize>,
    cylindrify: Vec<usize>,
    r01: usize,
    r10: usize,
}

impl FiniteModel {
    /// Builds a model from row-major `size x size` meet and join tables.
    pub fn new(size: usize, meet: Vec<usize>, join: Vec<usize>, complement: Vec<usize>, r00: usize, r11: usize) -> Result<Self> {
        if size == 0 {
            return Err(Error::InvalidModel("carrier must be non-empty".into()));
        }
        if meet.len() != size * size || join.len() != size * size || complement.len() != size {
            return Err(Error::InvalidModel("table dimensions do not match the size".into()));
        }
        let in_range = |v: &usize| *v < size;
        if !meet.iter().all(in_range) || !join.iter().all(in_range) || !complement.iter().all(in_range) {
            return Err(Error::InvalidModel("table entry outside the carrier".into()));
        }
        if r00 >= size || r11 >= size {
            return Err(Error::InvalidModel("constant outside the carrier".into()));
        }
        let mut m = FiniteModel {
            size,
            meet,
            join,
            complement,
            r00,
            r11,
            derived: Derived { inner_join: Vec::new(), outer_union: Vec::new(), cylindrify: Vec::new(), r01: 0, r10: 0 },
        };
        m.derive();
        Ok(m)
    }

    fn derive(&mut self) {
        let n = self.size;
        let (r00, r11) = (self.r00, self.r11);
        let mut inner_join = vec![0; n * n];
        let mut outer_union = vec![0; n * n];
        for x in 0..n {
            for y in 0..n {
                // x * y = (x v (y ^ R00)) ^ (y v (x ^ R00))
                let a = self.j(x, self.m(y, r00));
                let b = self.j(y, self.m(x, r00));
                inner_join[x * n + y] = self.m(a, b);
                // x + y = (x ^ (y v R11)) v (y ^ (x v R11))
                let a = self.m(x, self.j(y, r11));
                let b = self.m(y, self.j(x, r11));
                outer_union[x * n + y] = self.j(a, b);
            }
        }
        // y @ x = (y v R11) + x
        let mut cylindrify = vec![0; n * n];
        for y in 0..n {
            let yr = self.j(y, r11);
            for x in 0..n {
                cylindrify[y * n + x] = outer_union[yr * n + x];
            }
        }
        self.derived = Derived {
            inner_join,
            outer_union,
            cylindrify,
            r01: self.j(r11, r00),
            r10: self.m(r11, r00),
        };
    }

    fn m(&self, a: usize, b: usize) -> usize {
        self.meet[a * self.size + b]
    }

    fn j(&self, a: usize, b: usize) -> usize {
        self.join[a * self.size + b]
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn meet_table(&self) -> &[usize] {
        &self.meet
    }

    pub fn join_table(&self) -> &[usize] {
        &self.join
    }

    pub fn complement_table(&self) -> &[usize] {
        &self.complement
    }

    pub fn constant_index(&self, k: ConstantKind) -> usize {
        match k {
            ConstantKind::R00 => self.r00,
            ConstantKind::R11 => self.r11,
            ConstantKind::R01 => self.derived.r01,
            ConstantKind::R10 => self.derived.r10,
        }
    }

    pub fn op(&self, op: BinOp, a: usize, b: usize) -> usize {
        let i = a * self.size + b;
        match op {
            BinOp::Meet => self.meet[i],
            BinOp::Join => self.join[i],
            BinOp::InnerJoin => self.derived.inner_join[i],
            BinOp::OuterUnion => self.derived.outer_union[i],
            BinOp::Cylindrify => self.derived.cylindrify[i],
        }
    }

    pub fn complement_of(&self, a: usize) -> usize {
        self.complement[a]
    }

    /// Renames element `i` to `mapping[i]`; `mapping` must be a permutation.
    pub fn relabel(&self, mapping: &[usize]) -> Result<FiniteModel> {
        let n = self.size;
        let mut seen = vec![false; n];
        if mapping.len() != n || mapping.iter().any(|&v| v >= n || std::mem::replace(&mut seen[v], true)) {
            return Err(Error::InvalidModel("relabeling is not a permutation of the carrier".into()));
        }
        let mut meet = vec![0; n * n];
        let mut join = vec![0; n * n];
        let mut complement = vec![0; n];
        for a in 0..n {
            complement[mapping[a]] = mapping[self.complement[a]];
            for b in 0..n {
                meet[mapping[a] * n + mapping[b]] = mapping[self.m(a, b)];
                join[mapping[a] * n + mapping[b]] = mapping[self.j(a, b)];
            }
        }
        FiniteModel::new(n, meet, join, complement, mapping[self.r00], mapping[self.r11])
    }
}

impl Algebra for FiniteModel {
    type Elem = usize;

    fn constant(&self, k: ConstantKind) -> Result<usize> {
        Ok(self.constant_index(k))
    }

    fn literal(&self, lit: &Literal) -> Result<usize> {
        Err(Error::UnsupportedSymbol(lit.to_string()))
    }

    fn complement(&self, a: &usize) -> Result<usize> {
        Ok(self.complement[*a])
    }

    fn apply(&self, op: BinOp, a: &usize, b: &usize) -> Result<usize> {
        Ok(self.op(op, *a, *b))
    }
}

/// The outcome of checking one statement over a model's carrier.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModelVerdict {
    pub statement: String,
    pub verdict: Verdict,
    /// First refuting assignment, as carrier elements in variable order.
    pub witness: Option<Vec<(String, usize)>>,
    pub assignments_tested: u64,
    pub premises_satisfied: Option<u64>,
}

fn scan_model(m: &FiniteModel, s: &Statement) -> Result<(Compiled<usize>, eval::Scan)> {
    let compiled = Compiled::new(m, s)?;
    let carrier: Vec<usize> = (0..m.size).collect();
    let scan = eval::scan_exhaustive(m, &compiled, &carrier, &|_, e| e)?;
    Ok((compiled, scan))
}

/// Checks each statement over all `n^k` carrier assignments.
pub fn verify_model(m: &FiniteModel, statements: &[Statement]) -> Result<Vec<ModelVerdict>> {
    statements
        .iter()
        .map(|s| {
            let (compiled, scan) = scan_model(m, s)?;
            Ok(ModelVerdict {
                statement: s.to_string(),
                verdict: if scan.witness.is_some() { Verdict::Refuted } else { Verdict::Holds },
                witness: scan
                    .witness
                    .map(|w| compiled.vars().iter().cloned().zip(w).collect()),
                assignments_tested: scan.tested,
                premises_satisfied: compiled.is_implication().then_some(scan.premises),
            })
        })
        .collect()
}

/// The first refuting carrier assignment in index order, if any.
pub fn find_counterexample(m: &FiniteModel, s: &Statement) -> Result<Option<Vec<usize>>> {
    Ok(scan_model(m, s)?.1.witness)
}

/// Whether `s` holds in `m` under a specific assignment (variable order).
pub fn holds_at(m: &FiniteModel, s: &Statement, assignment: &[usize]) -> Result<bool> {
    let compiled = Compiled::new(m, s)?;
    let env: Vec<&usize> = assignment.iter().collect();
    if env.len() != compiled.vars().len() || assignment.iter().any(|&a| a >= m.size) {
        return Err(Error::InvalidModel("assignment does not match the statement".into()));
    }
    Ok(compiled.instance(m, &env)?.holds)
}

/// The model whose carrier is every relation over `u`, in canonical
/// enumeration order, with tables computed by the concrete operations.
pub fn model_from_universe(u: &Universe) -> Result<FiniteModel> {
    let rels = enumerate_relations(u)?;
    let n = rels.len();
    let index = |r: &crate::relation::Relation| -> Result<usize> {
        rels.binary_search_by(|probe| canonical_cmp(probe, r))
            .map_err(|_| Error::InvalidModel("operation result missing from the enumeration".into()))
    };
    let mut meet = vec![0; n * n];
    let mut join = vec![0; n * n];
    for (a, ra) in rels.iter().enumerate() {
        for (b, rb) in rels.iter().enumerate() {
            meet[a * n + b] = index(&u.natural_join(ra, rb)?)?;
            join[a * n + b] = index(&u.inner_union(ra, rb)?)?;
        }
    }
    let complement = rels.iter().map(|r| index(&u.complement(r)?)).collect::<Result<Vec<_>>>()?;
    let r00 = index(&u.constant(ConstantKind::R00)?)?;
    let r11 = index(&u.constant(ConstantKind::R11)?)?;
    FiniteModel::new(n, meet, join, complement, r00, r11)
}

/// Total order matching [`enumerate_relations`]: header by size then
/// attribute order, then body as a bitmask over the tuple space.
fn canonical_cmp(a: &crate::relation::Relation, b: &crate::relation::Relation) -> std::cmp::Ordering {
    let key = |r: &crate::relation::Relation| {
        let h = r.header();
        let attrs: Vec<usize> = h.iter().collect();
        (h.len(), attrs)
    };
    key(a).cmp(&key(b)).then_with(|| {
        // Bodies are sorted ascending; binary counting order compares the
        // highest tuple first.
        a.body().iter().rev().cmp(b.body().iter().rev())
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::term::parse_statement;

    fn u1() -> Universe {
        Universe::parse("t : a, b").unwrap()
    }

    #[test]
    fn canonical_order_matches_enumeration() {
        for text in ["t : a, b", "t : a, b\ns : 1, 2", "t : a, b, c"] {
            let u = Universe::parse(text).unwrap();
            let rels = enumerate_relations(&u).unwrap();
            assert!(rels.windows(2).all(|w| canonical_cmp(&w[0], &w[1]).is_lt()), "{text}");
        }
    }

    #[test]
    fn zero_attribute_universe_is_a_chain() {
        let u0 = Universe::new(Vec::<(String, Vec<String>)>::new()).unwrap();
        let m = model_from_universe(&u0).unwrap();
        assert_eq!(m.size(), 2);
        assert_eq!(m.constant_index(ConstantKind::R00), 0);
        assert_eq!(m.constant_index(ConstantKind::R01), 1);
        assert_eq!(m.meet_table(), [0, 0, 0, 1]);
        assert_eq!(m.join_table(), [0, 1, 1, 1]);
    }

    #[test]
    fn rejects_partial_tables() {
        assert!(FiniteModel::new(2, vec![0, 0, 0], vec![0; 4], vec![0; 2], 0, 0).is_err());
        assert!(FiniteModel::new(2, vec![0, 0, 0, 2], vec![0; 4], vec![0; 2], 0, 0).is_err());
        assert!(FiniteModel::new(2, vec![0; 4], vec![0; 4], vec![0; 2], 0, 2).is_err());
    }

    #[test]
    fn verify_and_counterexample() {
        let m = model_from_universe(&u1()).unwrap();
        let idem = parse_statement("x ^ x = x").unwrap();
        let dist = parse_statement("x ^ (y v z) = (x ^ y) v (x ^ z)").unwrap();
        let verdicts = verify_model(&m, &[idem.clone(), dist.clone()]).unwrap();
        assert_eq!(verdicts[0].verdict, Verdict::Holds);
        assert_eq!(verdicts[0].assignments_tested, 6);
        assert_eq!(verdicts[1].verdict, Verdict::Refuted);
        let w = find_counterexample(&m, &dist).unwrap().unwrap();
        assert!(!holds_at(&m, &dist, &w).unwrap());
        assert_eq!(find_counterexample(&m, &parse_statement("x ^ y = y ^ x").unwrap()).unwrap(), None);
        assert!(find_counterexample(&m, &parse_statement("x + (x * y) = x").unwrap()).unwrap().is_some());
    }

    #[test]
    fn literals_are_rejected() {
        let m = model_from_universe(&u1()).unwrap();
        let s = parse_statement("x ^ {(t=a)} = x").unwrap();
        assert!(matches!(verify_model(&m, &[s]), Err(Error::UnsupportedSymbol(_))));
    }

    #[test]
    fn relabel_round_trip() {
        let m = model_from_universe(&u1()).unwrap();
        let p = [3, 0, 4, 5, 2, 1];
        let mut inv = [0; 6];
        for (i, &v) in p.iter().enumerate() {
            inv[v] = i;
        }
        assert_eq!(m.relabel(&p).unwrap().relabel(&inv).unwrap(), m);
        assert!(m.relabel(&[0, 0, 1, 2, 3, 4]).is_err());
    }
}
