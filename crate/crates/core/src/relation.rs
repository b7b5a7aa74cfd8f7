//! Relations over a [`Universe`] and the concrete lattice operations.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::universe::{AttrSet, Universe};

/// A tuple of value indices, one per header attribute in universe order.
pub type Tuple = Vec<u32>;

/// A header plus a body. The body is kept sorted and duplicate free, so
/// structural equality is relation equality.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Relation {
    header: AttrSet,
    body: Vec<Tuple>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum ConstantKind {
    R00,
    R01,
    R10,
    R11,
}

impl ConstantKind {
    pub const ALL: [ConstantKind; 4] = [ConstantKind::R00, ConstantKind::R01, ConstantKind::R10, ConstantKind::R11];

    pub fn name(self) -> &'static str {
        match self {
            ConstantKind::R00 => "R00",
            ConstantKind::R01 => "R01",
            ConstantKind::R10 => "R10",
            ConstantKind::R11 => "R11",
        }
    }

    pub fn from_name(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|k| k.name() == s)
    }
}

impl fmt::Display for ConstantKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// The binary operations of the algebra.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum BinOp {
    /// Natural join, written `^`.
    Meet,
    /// Inner union, written `v`.
    Join,
    /// Inner join, written `*`.
    InnerJoin,
    /// Outer union, written `+`.
    OuterUnion,
    /// Cylindrification, written `@`.
    Cylindrify,
}

impl BinOp {
    pub const ALL: [BinOp; 5] = [BinOp::Meet, BinOp::Join, BinOp::InnerJoin, BinOp::OuterUnion, BinOp::Cylindrify];

    pub fn symbol(self) -> &'static str {
        match self {
            BinOp::Meet => "^",
            BinOp::Join => "v",
            BinOp::InnerJoin => "*",
            BinOp::OuterUnion => "+",
            BinOp::Cylindrify => "@",
        }
    }
}

impl fmt::Display for BinOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.symbol())
    }
}

impl Relation {
    /// Builds a relation from raw parts; the body is sorted and deduplicated.
    /// Tuples must already be laid out over `header`.
    pub(crate) fn from_parts(header: AttrSet, mut body: Vec<Tuple>) -> Self {
        body.sort_unstable();
        body.dedup();
        Relation { header, body }
    }

    pub fn empty(header: AttrSet) -> Self {
        Relation { header, body: Vec::new() }
    }

    pub fn header(&self) -> AttrSet {
        self.header
    }

    pub fn body(&self) -> &[Tuple] {
        &self.body
    }

    pub fn len(&self) -> usize {
        self.body.len()
    }

    pub fn is_empty(&self) -> bool {
        self.body.is_empty()
    }

    /// Projects onto `target`, which must be a subset of the header.
    fn project(&self, target: AttrSet) -> Vec<Tuple> {
        debug_assert!(target.is_subset(self.header));
        if target == self.header {
            return self.body.clone();
        }
        let positions: Vec<usize> = target.iter().map(|a| self.header.position(a)).collect();
        let mut out: Vec<Tuple> = self
            .body
            .iter()
            .map(|t| positions.iter().map(|&p| t[p]).collect())
            .collect();
        out.sort_unstable();
        out.dedup();
        out
    }

    /// Renders the relation in literal syntax: `{(t=a),(t=b)}`, `empty(t)`,
    /// `empty()` for `R00`, `{()}` for `R01`.
    pub fn display<'a>(&'a self, u: &'a Universe) -> RelationDisplay<'a> {
        RelationDisplay { relation: self, universe: u }
    }

    pub fn to_literal(&self, u: &Universe) -> String {
        self.display(u).to_string()
    }
}

pub struct RelationDisplay<'a> {
    relation: &'a Relation,
    universe: &'a Universe,
}

impl fmt::Display for RelationDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let u = self.universe;
        let attrs: Vec<usize> = self.relation.header.iter().collect();
        if self.relation.body.is_empty() {
            let names: Vec<&str> = attrs.iter().map(|&a| u.attributes()[a].as_str()).collect();
            return write!(f, "empty({})", names.join(","));
        }
        f.write_str("{")?;
        for (i, t) in self.relation.body.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            f.write_str("(")?;
            for (j, (&a, &v)) in attrs.iter().zip(t).enumerate() {
                if j > 0 {
                    f.write_str(",")?;
                }
                write!(f, "{}={}", u.attributes()[a], u.value_name(a, v))?;
            }
            f.write_str(")")?;
        }
        f.write_str("}")
    }
}

/// Lays out tuples of `left` and `right` headers into their union header.
struct Merge {
    /// For each union-header attribute: `(from_left, position)`.
    sources: Vec<(bool, usize)>,
    /// Common attributes as `(left position, right position)`.
    common: Vec<(usize, usize)>,
}

impl Merge {
    fn new(left: AttrSet, right: AttrSet) -> Self {
        let sources = left
            .union(right)
            .iter()
            .map(|a| {
                if left.contains(a) {
                    (true, left.position(a))
                } else {
                    (false, right.position(a))
                }
            })
            .collect();
        let common = left
            .intersection(right)
            .iter()
            .map(|a| (left.position(a), right.position(a)))
            .collect();
        Merge { sources, common }
    }

    fn agree(&self, l: &[u32], r: &[u32]) -> bool {
        self.common.iter().all(|&(i, j)| l[i] == r[j])
    }

    fn merge(&self, l: &[u32], r: &[u32]) -> Tuple {
        self.sources
            .iter()
            .map(|&(from_left, p)| if from_left { l[p] } else { r[p] })
            .collect()
    }
}

impl Universe {
    /// Checks that `r` is a relation over this universe.
    pub fn validate(&self, r: &Relation) -> Result<()> {
        if !r.header.is_subset(self.all_attrs()) {
            return Err(Error::InvalidRelation("header mentions an undeclared attribute".into()));
        }
        let attrs: Vec<usize> = r.header.iter().collect();
        for t in &r.body {
            if t.len() != attrs.len() {
                return Err(Error::InvalidRelation("tuple arity differs from header".into()));
            }
            for (&a, &v) in attrs.iter().zip(t) {
                if v as usize >= self.domain(a).len() {
                    return Err(Error::InvalidRelation(format!(
                        "value index {v} outside the domain of `{}`",
                        self.attributes()[a]
                    )));
                }
            }
        }
        Ok(())
    }

    /// Builds a relation from named tuples. Every tuple must mention exactly
    /// the attributes in `header`.
    pub fn relation<S: AsRef<str>>(&self, header: &[S], tuples: &[Vec<(S, S)>]) -> Result<Relation> {
        let h = self.header_of(header)?;
        let mut body = Vec::with_capacity(tuples.len());
        for t in tuples {
            body.push(self.tuple(h, t)?);
        }
        Ok(Relation::from_parts(h, body))
    }

    /// Lays out one named tuple over header `h`.
    pub(crate) fn tuple<S: AsRef<str>>(&self, h: AttrSet, pairs: &[(S, S)]) -> Result<Tuple> {
        let mut seen = AttrSet::EMPTY;
        let mut t = vec![0; h.len()];
        for (name, value) in pairs {
            let a = self.attr_index(name.as_ref())?;
            if !h.contains(a) || seen.contains(a) {
                return Err(Error::InvalidRelation(format!(
                    "tuple attribute `{}` does not match the header",
                    name.as_ref()
                )));
            }
            seen = seen.union(AttrSet::singleton(a));
            t[h.position(a)] = self.value_index(a, value.as_ref())?;
        }
        if seen != h {
            return Err(Error::InvalidRelation("tuple does not cover the header".into()));
        }
        Ok(t)
    }

    /// The relation holding every tuple over `h`.
    pub fn full(&self, h: AttrSet) -> Result<Relation> {
        if !h.is_subset(self.all_attrs()) {
            return Err(Error::InvalidRelation("header mentions an undeclared attribute".into()));
        }
        let size = self.tuple_space(h);
        if size > self.cap() {
            return Err(Error::CapExceeded { size: size as u128, cap: self.cap() });
        }
        Ok(Relation { header: h, body: self.tuples_over(h).collect() })
    }

    pub fn constant(&self, k: ConstantKind) -> Result<Relation> {
        Ok(match k {
            ConstantKind::R00 => Relation::empty(AttrSet::EMPTY),
            ConstantKind::R01 => Relation { header: AttrSet::EMPTY, body: vec![Vec::new()] },
            ConstantKind::R10 => Relation::empty(self.all_attrs()),
            ConstantKind::R11 => self.full(self.all_attrs())?,
        })
    }

    /// `r ^ s`: tuples over the union header whose restrictions lie in `r`
    /// and in `s`.
    pub fn natural_join(&self, r: &Relation, s: &Relation) -> Result<Relation> {
        self.validate(r)?;
        self.validate(s)?;
        Ok(join_unchecked(r, s))
    }

    /// `r v s`: both bodies projected onto the common header, then united.
    pub fn inner_union(&self, r: &Relation, s: &Relation) -> Result<Relation> {
        self.validate(r)?;
        self.validate(s)?;
        Ok(union_unchecked(r, s))
    }

    /// `r * s`, point-wise: the intersection of both projections onto the
    /// common header.
    pub fn inner_join(&self, r: &Relation, s: &Relation) -> Result<Relation> {
        self.validate(r)?;
        self.validate(s)?;
        let h = r.header.intersection(s.header);
        let left = r.project(h);
        let right = s.project(h);
        let body = left.into_iter().filter(|t| right.binary_search(t).is_ok()).collect();
        Ok(Relation { header: h, body })
    }

    /// `r * s` through `(r v (s ^ R00)) ^ (s v (r ^ R00))`.
    pub fn inner_join_pointfree(&self, r: &Relation, s: &Relation) -> Result<Relation> {
        let r00 = self.constant(ConstantKind::R00)?;
        let a = self.inner_union(r, &self.natural_join(s, &r00)?)?;
        let b = self.inner_union(s, &self.natural_join(r, &r00)?)?;
        self.natural_join(&a, &b)
    }

    /// `r + s`, point-wise: each operand padded to the union header with
    /// every domain value of its missing attributes, then united.
    pub fn outer_union(&self, r: &Relation, s: &Relation) -> Result<Relation> {
        self.validate(r)?;
        self.validate(s)?;
        let h = r.header.union(s.header);
        let size = self.tuple_space(h);
        if size > self.cap() {
            return Err(Error::CapExceeded { size: size as u128, cap: self.cap() });
        }
        let mut body = Vec::new();
        for x in [r, s] {
            let missing = h.difference(x.header);
            let merge = Merge::new(x.header, missing);
            let pads: Vec<Tuple> = self.tuples_over(missing).collect();
            for t in &x.body {
                body.extend(pads.iter().map(|p| merge.merge(t, p)));
            }
        }
        Ok(Relation::from_parts(h, body))
    }

    /// `r + s` through `(r ^ (s v R11)) v (s ^ (r v R11))`.
    pub fn outer_union_pointfree(&self, r: &Relation, s: &Relation) -> Result<Relation> {
        let r11 = self.constant(ConstantKind::R11)?;
        let a = self.natural_join(r, &self.inner_union(s, &r11)?)?;
        let b = self.natural_join(s, &self.inner_union(r, &r11)?)?;
        self.inner_union(&a, &b)
    }

    /// `r'`: every tuple over the header of `r` that is not in `r`.
    pub fn complement(&self, r: &Relation) -> Result<Relation> {
        self.validate(r)?;
        let full = self.full(r.header)?;
        let body = full.body.into_iter().filter(|t| r.body.binary_search(t).is_err()).collect();
        Ok(Relation { header: r.header, body })
    }

    /// `y @ x = (y v R11) + x`.
    pub fn cylindrify(&self, y: &Relation, x: &Relation) -> Result<Relation> {
        let r11 = self.constant(ConstantKind::R11)?;
        self.outer_union(&self.inner_union(y, &r11)?, x)
    }

    /// Lattice order: `r < s` iff `r ^ s = r`.
    pub fn leq(&self, r: &Relation, s: &Relation) -> Result<bool> {
        Ok(self.natural_join(r, s)? == *r)
    }

    pub fn apply(&self, op: BinOp, r: &Relation, s: &Relation) -> Result<Relation> {
        match op {
            BinOp::Meet => self.natural_join(r, s),
            BinOp::Join => self.inner_union(r, s),
            BinOp::InnerJoin => self.inner_join(r, s),
            BinOp::OuterUnion => self.outer_union(r, s),
            BinOp::Cylindrify => self.cylindrify(r, s),
        }
    }
}

fn join_unchecked(r: &Relation, s: &Relation) -> Relation {
    let merge = Merge::new(r.header, s.header);
    let mut body = Vec::new();
    for a in &r.body {
        for b in &s.body {
            if merge.agree(a, b) {
                body.push(merge.merge(a, b));
            }
        }
    }
    Relation::from_parts(r.header.union(s.header), body)
}

fn union_unchecked(r: &Relation, s: &Relation) -> Relation {
    let h = r.header.intersection(s.header);
    let mut body = r.project(h);
    body.extend(s.project(h));
    Relation::from_parts(h, body)
}
