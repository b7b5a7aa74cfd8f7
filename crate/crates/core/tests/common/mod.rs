//! A deliberately naive relation model used as an independent oracle:
//! headers are name sets, tuples are name maps, and every operation is
//! written directly from its set-builder definition by brute force over the
//! tuple space.

#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};

use rlattice::{BinOp, ConstantKind, Relation, Statement, Term, Universe};

pub type Tuple = BTreeMap<String, String>;

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Rel {
    pub header: BTreeSet<String>,
    pub body: BTreeSet<Tuple>,
}

pub struct Oracle {
    pub domains: Vec<(String, Vec<String>)>,
}

impl Oracle {
    pub fn new(domains: &[(&str, &[&str])]) -> Self {
        Oracle {
            domains: domains
                .iter()
                .map(|(a, vs)| (a.to_string(), vs.iter().map(|v| v.to_string()).collect()))
                .collect(),
        }
    }

    pub fn u1() -> Self {
        Oracle::new(&[("t", &["a", "b"])])
    }

    pub fn u2() -> Self {
        Oracle::new(&[("t", &["a", "b"]), ("s", &["1", "2"])])
    }

    fn domain(&self, a: &str) -> &[String] {
        &self.domains.iter().find(|(n, _)| n == a).expect("declared attribute").1
    }

    pub fn all_attrs(&self) -> BTreeSet<String> {
        self.domains.iter().map(|(a, _)| a.clone()).collect()
    }

    /// Every tuple over `header`.
    pub fn tuples(&self, header: &BTreeSet<String>) -> Vec<Tuple> {
        let mut out = vec![Tuple::new()];
        for a in header {
            let mut next = Vec::new();
            for t in &out {
                for v in self.domain(a) {
                    let mut t = t.clone();
                    t.insert(a.clone(), v.clone());
                    next.push(t);
                }
            }
            out = next;
        }
        out
    }

    /// Every relation over the universe: each header subset with each body
    /// subset of its tuple space.
    pub fn all_relations(&self) -> Vec<Rel> {
        let attrs: Vec<String> = self.all_attrs().into_iter().collect();
        let mut out = Vec::new();
        for mask in 0u32..(1 << attrs.len()) {
            let header: BTreeSet<String> =
                attrs.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, a)| a.clone()).collect();
            let space = self.tuples(&header);
            for bmask in 0u64..(1 << space.len()) {
                let body = space.iter().enumerate().filter(|(i, _)| bmask >> i & 1 == 1).map(|(_, t)| t.clone()).collect();
                out.push(Rel { header: header.clone(), body });
            }
        }
        out
    }

    pub fn constant(&self, k: ConstantKind) -> Rel {
        let none = BTreeSet::new();
        match k {
            ConstantKind::R00 => Rel { header: none, body: BTreeSet::new() },
            ConstantKind::R01 => Rel { header: none, body: [Tuple::new()].into() },
            ConstantKind::R10 => Rel { header: self.all_attrs(), body: BTreeSet::new() },
            ConstantKind::R11 => Rel { header: self.all_attrs(), body: self.tuples(&self.all_attrs()).into_iter().collect() },
        }
    }

    pub fn join(&self, r: &Rel, s: &Rel) -> Rel {
        let header: BTreeSet<String> = r.header.union(&s.header).cloned().collect();
        let body = self
            .tuples(&header)
            .into_iter()
            .filter(|t| r.body.contains(&restrict(t, &r.header)) && s.body.contains(&restrict(t, &s.header)))
            .collect();
        Rel { header, body }
    }

    pub fn inner_union(&self, r: &Rel, s: &Rel) -> Rel {
        let header: BTreeSet<String> = r.header.intersection(&s.header).cloned().collect();
        let body = r.body.iter().chain(&s.body).map(|t| restrict(t, &header)).collect();
        Rel { header, body }
    }

    pub fn inner_join(&self, r: &Rel, s: &Rel) -> Rel {
        let header: BTreeSet<String> = r.header.intersection(&s.header).cloned().collect();
        let left: BTreeSet<Tuple> = r.body.iter().map(|t| restrict(t, &header)).collect();
        let right: BTreeSet<Tuple> = s.body.iter().map(|t| restrict(t, &header)).collect();
        Rel { header, body: left.intersection(&right).cloned().collect() }
    }

    pub fn outer_union(&self, r: &Rel, s: &Rel) -> Rel {
        let header: BTreeSet<String> = r.header.union(&s.header).cloned().collect();
        let body = self
            .tuples(&header)
            .into_iter()
            .filter(|t| r.body.contains(&restrict(t, &r.header)) || s.body.contains(&restrict(t, &s.header)))
            .collect();
        Rel { header, body }
    }

    pub fn complement(&self, r: &Rel) -> Rel {
        let body = self.tuples(&r.header).into_iter().filter(|t| !r.body.contains(t)).collect();
        Rel { header: r.header.clone(), body }
    }

    pub fn apply(&self, op: BinOp, r: &Rel, s: &Rel) -> Rel {
        match op {
            BinOp::Meet => self.join(r, s),
            BinOp::Join => self.inner_union(r, s),
            BinOp::InnerJoin => self.inner_join(r, s),
            BinOp::OuterUnion => self.outer_union(r, s),
            BinOp::Cylindrify => {
                let widened = self.inner_union(r, &self.constant(ConstantKind::R11));
                self.outer_union(&widened, s)
            }
        }
    }

    /// Evaluates a literal-free term.
    pub fn eval(&self, t: &Term, env: &BTreeMap<String, Rel>) -> Rel {
        match t {
            Term::Var(v) => env[v].clone(),
            Term::Const(k) => self.constant(*k),
            Term::Literal(_) => panic!("the oracle does not evaluate literals"),
            Term::Complement(x) => self.complement(&self.eval(x, env)),
            Term::Binary(op, l, r) => self.apply(*op, &self.eval(l, env), &self.eval(r, env)),
        }
    }

    pub fn atom_holds(&self, a: &rlattice::Atom, env: &BTreeMap<String, Rel>) -> bool {
        let l = self.eval(&a.lhs, env);
        let r = self.eval(&a.rhs, env);
        match a.relationship {
            rlattice::Relationship::Equal => l == r,
            rlattice::Relationship::NotEqual => l != r,
            rlattice::Relationship::Below => self.join(&l, &r) == l,
        }
    }

    pub fn holds(&self, s: &Statement, env: &BTreeMap<String, Rel>) -> bool {
        match s {
            Statement::Atom(a) => self.atom_holds(a, env),
            Statement::Implication { premises, conclusion } => {
                !premises.iter().all(|p| self.atom_holds(p, env)) || self.atom_holds(conclusion, env)
            }
            Statement::Disjunction(atoms) => atoms.iter().any(|a| self.atom_holds(a, env)),
        }
    }

    /// Converts a library relation into oracle form.
    pub fn lift(&self, u: &Universe, r: &Relation) -> Rel {
        let attrs: Vec<usize> = r.header().iter().collect();
        let header = attrs.iter().map(|&a| u.attributes()[a].clone()).collect();
        let body = r
            .body()
            .iter()
            .map(|t| attrs.iter().zip(t).map(|(&a, &v)| (u.attributes()[a].clone(), u.domain(a)[v as usize].clone())).collect())
            .collect();
        Rel { header, body }
    }
}

fn restrict(t: &Tuple, header: &BTreeSet<String>) -> Tuple {
    t.iter().filter(|(a, _)| header.contains(*a)).map(|(a, v)| (a.clone(), v.clone())).collect()
}

/// Builds an oracle relation: `rel(&["t"], &[&[("t", "a")]])`.
pub fn rel(header: &[&str], tuples: &[&[(&str, &str)]]) -> Rel {
    Rel {
        header: header.iter().map(|a| a.to_string()).collect(),
        body: tuples
            .iter()
            .map(|t| t.iter().map(|(a, v)| (a.to_string(), v.to_string())).collect())
            .collect(),
    }
}

pub fn u1() -> Universe {
    Universe::parse("t : a, b").unwrap()
}

pub fn u2() -> Universe {
    Universe::parse("t : a, b\ns : 1, 2").unwrap()
}
