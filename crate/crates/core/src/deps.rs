//! Dependency predicates expressed as lattice order constraints.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::relation::{BinOp, Relation};
use crate::universe::Universe;

/// One candidate reading of the fictional dependency
/// `FD(r,x,y) <-> (r . x) . y < (r . x) . y'`, where the combining
/// operation is left open, together with the operation used to augment
/// `x` and `y` by `z` in the augmentation theorem.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FdReading {
    /// Combines the instance `r` with the argument `x`.
    pub instance: BinOp,
    /// Combines `r . x` with the value `y` (and with `y'`).
    pub value: BinOp,
    /// Combines `x` and `y` with `z` in `FD(r,x,y) -> FD(r,x.z,y.z)`.
    pub augment: BinOp,
}

/// Operations a reading may pick from.
pub const COMBINERS: [BinOp; 4] = [BinOp::Meet, BinOp::Join, BinOp::InnerJoin, BinOp::OuterUnion];

impl FdReading {
    pub const fn new(instance: BinOp, value: BinOp, augment: BinOp) -> Self {
        FdReading { instance, value, augment }
    }

    /// Every combination of [`COMBINERS`] for the three slots.
    pub fn candidates() -> Vec<FdReading> {
        let mut out = Vec::new();
        for instance in COMBINERS {
            for value in COMBINERS {
                for augment in COMBINERS {
                    out.push(FdReading { instance, value, augment });
                }
            }
        }
        out
    }

    /// The `FD(r,x,y)` order constraint rendered in statement syntax over
    /// the given subterms.
    pub fn fd_text(&self, r: &str, x: &str, y: &str) -> String {
        let i = self.instance.symbol();
        let v = self.value.symbol();
        format!("({r} {i} {x}) {v} {y} < ({r} {i} {x}) {v} ({y})'")
    }

    pub fn augment_text(&self, a: &str, b: &str) -> String {
        format!("({a} {} {b})", self.augment.symbol())
    }
}

impl Default for FdReading {
    /// Outer union in all three slots: the only reading under which the
    /// three Armstrong-style theorems and every augmentation lemma hold on
    /// the reference universes.
    fn default() -> Self {
        FdReading::new(BinOp::OuterUnion, BinOp::OuterUnion, BinOp::OuterUnion)
    }
}

impl fmt::Display for FdReading {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "(r {} x) {} y, augment {}",
            self.instance.symbol(),
            self.value.symbol(),
            self.augment.symbol()
        )
    }
}

impl Universe {
    /// `FD(r,x,y)` under the default reading.
    pub fn fd(&self, r: &Relation, x: &Relation, y: &Relation) -> Result<bool> {
        self.fd_with(FdReading::default(), r, x, y)
    }

    pub fn fd_with(&self, reading: FdReading, r: &Relation, x: &Relation, y: &Relation) -> Result<bool> {
        let base = self.apply(reading.instance, r, x)?;
        let lhs = self.apply(reading.value, &base, y)?;
        let rhs = self.apply(reading.value, &base, &self.complement(y)?)?;
        self.leq(&lhs, &rhs)
    }

    /// Generalized inclusion dependency `r v x < s v x`.
    pub fn inclusion_dep(&self, r: &Relation, s: &Relation, x: &Relation) -> Result<bool> {
        self.leq(&self.inner_union(r, x)?, &self.inner_union(s, x)?)
    }
}
