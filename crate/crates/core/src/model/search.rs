//! Finite model search in the style of Mace4.
//!
//! Cells are the entries of the `^`, `v` and `'` tables, the two constants
//! and one Skolem constant per goal variable. Axioms are expanded to ground
//! clause instances over the carrier; goals are negated and Skolemized.
//! The search assigns cells depth first, trying values in ascending order,
//! and propagates after every assignment: an instance is re-evaluated when
//! a cell it was blocked on receives a value, conflicts force backtracking,
//! and an equation whose one side is known while the other is a single
//! unassigned cell with known arguments assigns that cell.
//!
//! With symmetry breaking enabled a cell only tries values up to one past
//! the largest element mentioned so far (least number heuristic); the
//! remaining elements are interchangeable at that point.

use std::ops::RangeInclusive;
use std::time::{Duration, Instant};

use crate::error::{Error, Result};
use crate::relation::{BinOp, ConstantKind};
use crate::term::{Atom, Relationship, Statement, Term};

use super::{verify_model, FiniteModel};
use crate::checker::Verdict;

#[derive(Clone, Debug)]
pub struct SearchOptions {
    pub sizes: RangeInclusive<usize>,
    pub budget: Duration,
    pub symmetry_breaking: bool,
}

impl SearchOptions {
    pub fn new(sizes: RangeInclusive<usize>, budget: Duration) -> Self {
        SearchOptions { sizes, budget, symmetry_breaking: true }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SearchStats {
    /// Decisions made, per searched size.
    pub decisions: Vec<(usize, u64)>,
    pub elapsed: Duration,
}

#[derive(Clone, Debug)]
pub enum SearchOutcome {
    /// A model of the smallest size that admits one.
    Found {
        model: FiniteModel,
        /// Values of the Skolem constants introduced for goal variables.
        skolems: Vec<(String, usize)>,
        /// Sizes searched completely without a model.
        excluded: Vec<usize>,
        stats: SearchStats,
    },
    /// Every size in the range was searched completely; none has a model.
    Exhausted { excluded: Vec<usize>, stats: SearchStats },
}

/// A term over the base signature with variables and Skolem constants.
#[derive(Clone, Debug)]
enum Expr {
    Var(usize),
    Skolem(usize),
    R00,
    R11,
    Comp(Box<Expr>),
    Meet(Box<Expr>, Box<Expr>),
    Join(Box<Expr>, Box<Expr>),
}

fn meet(a: Expr, b: Expr) -> Expr {
    Expr::Meet(Box::new(a), Box::new(b))
}

fn join(a: Expr, b: Expr) -> Expr {
    Expr::Join(Box::new(a), Box::new(b))
}

/// Expands derived operations and constants into `^`, `v`, `'`, `R00`, `R11`.
fn expand(t: &Term, bind: &dyn Fn(&str) -> Expr) -> Result<Expr> {
    Ok(match t {
        Term::Var(v) => bind(v),
        Term::Const(ConstantKind::R00) => Expr::R00,
        Term::Const(ConstantKind::R11) => Expr::R11,
        Term::Const(ConstantKind::R01) => join(Expr::R11, Expr::R00),
        Term::Const(ConstantKind::R10) => meet(Expr::R11, Expr::R00),
        Term::Literal(l) => return Err(Error::UnsupportedSymbol(l.to_string())),
        Term::Complement(a) => Expr::Comp(Box::new(expand(a, bind)?)),
        Term::Binary(op, l, r) => {
            let x = expand(l, bind)?;
            let y = expand(r, bind)?;
            derived(*op, x, y)
        }
    })
}

fn derived(op: BinOp, x: Expr, y: Expr) -> Expr {
    match op {
        BinOp::Meet => meet(x, y),
        BinOp::Join => join(x, y),
        BinOp::InnerJoin => meet(
            join(x.clone(), meet(y.clone(), Expr::R00)),
            join(y, meet(x, Expr::R00)),
        ),
        BinOp::OuterUnion => join(
            meet(x.clone(), join(y.clone(), Expr::R11)),
            meet(y, join(x, Expr::R11)),
        ),
        BinOp::Cylindrify => derived(BinOp::OuterUnion, join(x, Expr::R11), y),
    }
}

/// A literal `lhs = rhs` (positive) or `lhs != rhs` (negative).
#[derive(Clone, Debug)]
struct Lit {
    positive: bool,
    lhs: Expr,
    rhs: Expr,
}

#[derive(Clone, Debug)]
struct Clause {
    vars: usize,
    lits: Vec<Lit>,
}

fn atom_lit(a: &Atom, positive: bool, bind: &dyn Fn(&str) -> Expr) -> Result<Lit> {
    let l = expand(&a.lhs, bind)?;
    let r = expand(&a.rhs, bind)?;
    Ok(match a.relationship {
        Relationship::Equal => Lit { positive, lhs: l, rhs: r },
        Relationship::NotEqual => Lit { positive: !positive, lhs: l, rhs: r },
        Relationship::Below => Lit { positive, lhs: meet(l.clone(), r), rhs: l },
    })
}

fn axiom_clause(s: &Statement) -> Result<Clause> {
    let vars = s.free_variables();
    let bind = |v: &str| Expr::Var(vars.iter().position(|n| n == v).expect("free variable"));
    let lits = match s {
        Statement::Atom(a) => vec![atom_lit(a, true, &bind)?],
        Statement::Implication { premises, conclusion } => {
            let mut lits = premises.iter().map(|p| atom_lit(p, false, &bind)).collect::<Result<Vec<_>>>()?;
            lits.push(atom_lit(conclusion, true, &bind)?);
            lits
        }
        Statement::Disjunction(atoms) => atoms.iter().map(|a| atom_lit(a, true, &bind)).collect::<Result<_>>()?,
    };
    Ok(Clause { vars: vars.len(), lits })
}

/// The negation of a goal as ground unit clauses over fresh Skolem
/// constants, numbered from `first_skolem`.
fn goal_clauses(s: &Statement, first_skolem: usize) -> Result<(Vec<Clause>, Vec<String>)> {
    let vars = s.free_variables();
    let bind = |v: &str| Expr::Skolem(first_skolem + vars.iter().position(|n| n == v).expect("free variable"));
    let unit = |a: &Atom, positive: bool| -> Result<Clause> {
        Ok(Clause { vars: 0, lits: vec![atom_lit(a, positive, &bind)?] })
    };
    let clauses = match s {
        Statement::Atom(a) => vec![unit(a, false)?],
        Statement::Disjunction(atoms) => atoms.iter().map(|a| unit(a, false)).collect::<Result<_>>()?,
        Statement::Implication { premises, conclusion } => {
            let mut cs = premises.iter().map(|p| unit(p, true)).collect::<Result<Vec<_>>>()?;
            cs.push(unit(conclusion, false)?);
            cs
        }
    };
    Ok((clauses, vars))
}

#[derive(Default)]
struct Symbols {
    r00: bool,
    r11: bool,
    comp: bool,
    meet: bool,
    join: bool,
}

impl Symbols {
    fn collect(&mut self, e: &Expr) {
        match e {
            Expr::Var(_) | Expr::Skolem(_) => {}
            Expr::R00 => self.r00 = true,
            Expr::R11 => self.r11 = true,
            Expr::Comp(a) => {
                self.comp = true;
                self.collect(a);
            }
            Expr::Meet(a, b) | Expr::Join(a, b) => {
                if matches!(e, Expr::Meet(..)) {
                    self.meet = true;
                } else {
                    self.join = true;
                }
                self.collect(a);
                self.collect(b);
            }
        }
    }
}

const UNSET: u8 = u8::MAX;
const NO_CELL: u32 = u32::MAX;

enum Eval {
    Value(u8),
    /// Blocked on an unassigned cell; `root` when the cell is the term itself.
    Blocked { cell: u32, root: bool },
}

enum Status {
    /// Satisfied given the cells read; the latest of them, if any.
    Satisfied(u32),
    Conflict,
    /// Blocked on one or two cells (the second may be `NO_CELL`); the
    /// third is the latest cell read. Two blocking cells are reported
    /// whenever there are at least two, so the status cannot become unit
    /// or false before one of them is assigned.
    Blocked(u32, u32, u32),
    Propagate(u32, u8),
}

struct Instance {
    clause: u32,
    env: u32,
}

struct Engine<'a> {
    n: usize,
    clauses: &'a [Clause],
    skolems: usize,
    instances: Vec<Instance>,
    envs: Vec<u8>,
    value: Vec<u8>,
    /// Trail position of each assigned cell.
    pos: Vec<u32>,
    trail: Vec<u32>,
    /// Largest element mentioned by the trail prefix ending at each index.
    mentioned: Vec<u8>,
    /// Instances to re-examine when a cell gets a value, or, for
    /// satisfied ones, when it loses it. Entries carry the instance's
    /// placement epoch; older entries are stale.
    watch: Vec<Vec<(u32, u32)>>,
    /// Blocked instances to re-examine when a cell they read loses its value.
    guard: Vec<Vec<(u32, u32)>>,
    epoch: Vec<u32>,
    order: Vec<u32>,
    symmetry_breaking: bool,
}

impl<'a> Engine<'a> {
    fn new(n: usize, clauses: &'a [Clause], skolems: usize, symmetry_breaking: bool) -> Self {
        let cells = 2 + skolems + n + 2 * n * n;
        let mut instances = Vec::new();
        let mut envs = Vec::new();
        for (ci, c) in clauses.iter().enumerate() {
            let total = n.pow(c.vars as u32);
            for idx in 0..total {
                let start = envs.len() as u32;
                let mut rest = idx;
                let mut env = vec![0u8; c.vars];
                for slot in env.iter_mut().rev() {
                    *slot = (rest % n) as u8;
                    rest /= n;
                }
                envs.extend(env);
                instances.push(Instance { clause: ci as u32, env: start });
            }
        }
        let mut e = Engine {
            n,
            clauses,
            skolems,
            instances,
            envs,
            value: vec![UNSET; cells],
            pos: vec![0; cells],
            trail: Vec::new(),
            mentioned: Vec::new(),
            watch: vec![Vec::new(); cells],
            guard: vec![Vec::new(); cells],
            epoch: Vec::new(),
            order: Vec::new(),
            symmetry_breaking,
        };
        e.epoch = vec![0; e.instances.len()];
        e.order = e.cell_order();
        e
    }

    fn comp_cell(&self, a: u8) -> u32 {
        (2 + self.skolems + a as usize) as u32
    }

    fn meet_cell(&self, a: u8, b: u8) -> u32 {
        (2 + self.skolems + self.n + a as usize * self.n + b as usize) as u32
    }

    fn join_cell(&self, a: u8, b: u8) -> u32 {
        (2 + self.skolems + self.n + self.n * self.n + a as usize * self.n + b as usize) as u32
    }

    /// Arguments of a cell, used for the least number heuristic.
    fn cell_args(&self, cell: u32) -> (Option<u8>, Option<u8>) {
        let c = cell as usize;
        let base = 2 + self.skolems;
        if c < base {
            (None, None)
        } else if c < base + self.n {
            (Some((c - base) as u8), None)
        } else {
            let off = (c - base - self.n) % (self.n * self.n);
            (Some((off / self.n) as u8), Some((off % self.n) as u8))
        }
    }

    /// Constants first, then table cells by their largest argument.
    /// Cells of symbols that no clause mentions are left out; their value
    /// is irrelevant.
    fn cell_order(&self) -> Vec<u32> {
        let mut used = Symbols::default();
        for c in self.clauses {
            for l in &c.lits {
                used.collect(&l.lhs);
                used.collect(&l.rhs);
            }
        }
        let mut order = Vec::new();
        if used.r00 {
            order.push(0);
        }
        if used.r11 {
            order.push(1);
        }
        order.extend(2..(2 + self.skolems) as u32);
        for m in 0..self.n as u8 {
            if used.comp {
                order.push(self.comp_cell(m));
            }
            for other in 0..=m {
                for (a, b) in [(m, other), (other, m)] {
                    let cells = [(used.meet, self.meet_cell(a, b)), (used.join, self.join_cell(a, b))];
                    for (on, cell) in cells {
                        if on && !order.contains(&cell) {
                            order.push(cell);
                        }
                    }
                }
            }
        }
        order
    }

    fn assign(&mut self, cell: u32, v: u8) {
        self.value[cell as usize] = v;
        self.pos[cell as usize] = self.trail.len() as u32;
        self.trail.push(cell);
        let (a, b) = self.cell_args(cell);
        let prev = self.mentioned.last().copied().unwrap_or(0);
        let m = prev.max(v).max(a.unwrap_or(0)).max(b.unwrap_or(0));
        self.mentioned.push(m);
    }

    /// Unassigns the trail beyond `len` and re-places every instance whose
    /// placement depended on an unassigned cell. The resulting state was a
    /// propagation fixpoint before, so no instance can be unit or false.
    fn undo_to(&mut self, len: usize) {
        let mut dirty = Vec::new();
        while self.trail.len() > len {
            let c = self.trail.pop().expect("trail entry") as usize;
            self.value[c] = UNSET;
            self.mentioned.pop();
            dirty.append(&mut self.watch[c]);
            dirty.append(&mut self.guard[c]);
        }
        for (id, ep) in dirty {
            if self.epoch[id as usize] == ep {
                let st = self.status(&self.instances[id as usize]);
                debug_assert!(matches!(st, Status::Satisfied(_) | Status::Blocked(..)));
                self.place(id, st);
            }
        }
    }

    /// Files an instance under the cells its current status depends on.
    /// A propagating instance must have had its cell assigned already.
    fn place(&mut self, id: u32, st: Status) {
        let ep = self.epoch[id as usize].wrapping_add(1);
        self.epoch[id as usize] = ep;
        match st {
            Status::Satisfied(NO_CELL) | Status::Conflict => {}
            Status::Satisfied(c) | Status::Propagate(c, _) => self.file(c, id, ep, false),
            Status::Blocked(c, d, latest) => {
                self.file(c, id, ep, false);
                if d != NO_CELL && d != c {
                    self.file(d, id, ep, false);
                }
                if latest != NO_CELL {
                    self.file(latest, id, ep, true);
                }
            }
        }
    }

    fn file(&mut self, cell: u32, id: u32, ep: u32, guard: bool) {
        let list = if guard { &mut self.guard[cell as usize] } else { &mut self.watch[cell as usize] };
        list.push((id, ep));
        // lists of long-lived cells collect stale entries; sweep now and then
        if list.len() >= 1024 && list.len().is_power_of_two() {
            let epoch = &self.epoch;
            list.retain(|&(i, e)| epoch[i as usize] == e);
        }
    }

    fn read(&self, cell: u32, latest: &mut u32) -> Eval {
        let v = self.value[cell as usize];
        if v == UNSET {
            Eval::Blocked { cell, root: true }
        } else {
            if *latest == NO_CELL || self.pos[cell as usize] > self.pos[*latest as usize] {
                *latest = cell;
            }
            Eval::Value(v)
        }
    }

    fn eval(&self, e: &Expr, env: &[u8], latest: &mut u32) -> Eval {
        let below = |r: Eval| match r {
            Eval::Blocked { cell, .. } => Eval::Blocked { cell, root: false },
            v => v,
        };
        match e {
            Expr::Var(i) => Eval::Value(env[*i]),
            Expr::R00 => self.read(0, latest),
            Expr::R11 => self.read(1, latest),
            Expr::Skolem(s) => self.read((2 + s) as u32, latest),
            Expr::Comp(a) => match self.eval(a, env, latest) {
                Eval::Value(x) => self.read(self.comp_cell(x), latest),
                b => below(b),
            },
            Expr::Meet(a, b) | Expr::Join(a, b) => {
                let x = match self.eval(a, env, latest) {
                    Eval::Value(x) => x,
                    blocked => return below(blocked),
                };
                let y = match self.eval(b, env, latest) {
                    Eval::Value(y) => y,
                    blocked => return below(blocked),
                };
                let cell = if matches!(e, Expr::Meet(..)) { self.meet_cell(x, y) } else { self.join_cell(x, y) };
                self.read(cell, latest)
            }
        }
    }

    fn status(&self, inst: &Instance) -> Status {
        let clause = &self.clauses[inst.clause as usize];
        let env = &self.envs[inst.env as usize..inst.env as usize + clause.vars];
        let mut latest = NO_CELL;
        let mut blocked = [NO_CELL; 2];
        let mut points = 0;
        let mut unit: Option<(u32, u8)> = None;
        let mut note = |cell: u32| {
            if points < 2 {
                blocked[points] = cell;
            }
            points += 1;
        };
        for lit in &clause.lits {
            let l = self.eval(&lit.lhs, env, &mut latest);
            let r = self.eval(&lit.rhs, env, &mut latest);
            match (l, r) {
                (Eval::Value(a), Eval::Value(b)) => {
                    if (a == b) == lit.positive {
                        return Status::Satisfied(latest);
                    }
                }
                (Eval::Value(v), Eval::Blocked { cell, root }) | (Eval::Blocked { cell, root }, Eval::Value(v)) => {
                    note(cell);
                    unit = (lit.positive && root).then_some((cell, v));
                }
                (Eval::Blocked { cell: a, .. }, Eval::Blocked { cell: b, .. }) => {
                    note(a);
                    note(b);
                }
            }
        }
        match (points, unit) {
            (0, _) => Status::Conflict,
            (1, Some((cell, v))) => Status::Propagate(cell, v),
            _ => Status::Blocked(blocked[0], blocked[1], latest),
        }
    }

    /// Processes the trail from `from`; false on conflict.
    fn propagate(&mut self, mut from: usize) -> bool {
        while from < self.trail.len() {
            let cell = self.trail[from];
            from += 1;
            let watchers = std::mem::take(&mut self.watch[cell as usize]);
            for (i, &(id, ep)) in watchers.iter().enumerate() {
                if self.epoch[id as usize] != ep {
                    continue;
                }
                let st = self.status(&self.instances[id as usize]);
                match st {
                    Status::Conflict => {
                        self.watch[cell as usize].extend_from_slice(&watchers[i..]);
                        return false;
                    }
                    Status::Propagate(c, v) => self.assign(c, v),
                    _ => {}
                }
                self.place(id, st);
            }
        }
        true
    }

    /// Evaluates every instance once with nothing assigned.
    fn initialize(&mut self) -> bool {
        for id in 0..self.instances.len() as u32 {
            let st = self.status(&self.instances[id as usize]);
            match st {
                Status::Conflict => return false,
                Status::Propagate(c, v) => self.assign(c, v),
                _ => {}
            }
            self.place(id, st);
        }
        self.propagate(0)
    }

    fn limit_for(&self, cell: u32) -> u8 {
        let top = (self.n - 1) as u8;
        if !self.symmetry_breaking {
            return top;
        }
        let (a, b) = self.cell_args(cell);
        let m = match self.mentioned.last() {
            Some(&m) => Some(m.max(a.unwrap_or(0)).max(b.unwrap_or(0))),
            None => a.max(b),
        };
        match m {
            Some(m) => (m + 1).min(top),
            None => 0,
        }
    }

    /// Depth-first search; `Ok(true)` when every cell is assigned.
    fn run(&mut self, deadline: Instant, decisions: &mut u64) -> Result<bool> {
        struct Frame {
            cell: u32,
            trail_len: usize,
            next: u8,
            limit: u8,
        }
        if !self.initialize() {
            return Ok(false);
        }
        let mut stack: Vec<Frame> = Vec::new();
        let mut cursor = 0;
        loop {
            // choose the next unassigned cell
            while cursor < self.order.len() && self.value[self.order[cursor] as usize] != UNSET {
                cursor += 1;
            }
            if cursor == self.order.len() {
                return Ok(true);
            }
            let cell = self.order[cursor];
            stack.push(Frame { cell, trail_len: self.trail.len(), next: 0, limit: self.limit_for(cell) });
            // try values, backtracking as needed
            loop {
                let Some(frame) = stack.last_mut() else { return Ok(false) };
                if frame.next > frame.limit {
                    let len = frame.trail_len;
                    stack.pop();
                    self.undo_to(len);
                    continue;
                }
                let (cell, v, len) = (frame.cell, frame.next, frame.trail_len);
                frame.next += 1;
                self.undo_to(len);
                *decisions += 1;
                if decisions.is_multiple_of(1024) && Instant::now() > deadline {
                    return Err(Error::SearchBudgetExhausted { largest_excluded: None });
                }
                self.assign(cell, v);
                if self.propagate(len) {
                    break;
                }
            }
            cursor = 0;
        }
    }

    fn model(&self) -> Result<(FiniteModel, Vec<usize>)> {
        let n = self.n;
        let v = |c: u32| match self.value[c as usize] {
            UNSET => 0,
            x => x as usize,
        };
        let mut meet = Vec::with_capacity(n * n);
        let mut join = Vec::with_capacity(n * n);
        for a in 0..n as u8 {
            for b in 0..n as u8 {
                meet.push(v(self.meet_cell(a, b)));
                join.push(v(self.join_cell(a, b)));
            }
        }
        let complement = (0..n as u8).map(|a| v(self.comp_cell(a))).collect();
        let skolems = (0..self.skolems).map(|s| v((2 + s) as u32)).collect();
        Ok((FiniteModel::new(n, meet, join, complement, v(0), v(1))?, skolems))
    }
}

/// Searches for a model of `axioms` that falsifies every goal, trying
/// sizes in ascending order. A returned model is therefore of minimal
/// size among the searched sizes.
pub fn search_model(axioms: &[Statement], goals: &[Statement], opts: &SearchOptions) -> Result<SearchOutcome> {
    let start = Instant::now();
    let deadline = start + opts.budget;
    let mut clauses = axioms.iter().map(axiom_clause).collect::<Result<Vec<_>>>()?;
    let mut skolem_names = Vec::new();
    for g in goals {
        let (cs, vars) = goal_clauses(g, skolem_names.len())?;
        clauses.extend(cs);
        skolem_names.extend(vars);
    }
    let mut stats = SearchStats::default();
    let mut excluded = Vec::new();
    for n in opts.sizes.clone() {
        if n == 0 || n > 254 {
            return Err(Error::InvalidModel(format!("cannot search size {n}")));
        }
        let mut engine = Engine::new(n, &clauses, skolem_names.len(), opts.symmetry_breaking);
        let mut decisions = 0;
        let found = engine.run(deadline, &mut decisions).map_err(|e| match e {
            Error::SearchBudgetExhausted { .. } => Error::SearchBudgetExhausted { largest_excluded: excluded.last().copied() },
            other => other,
        })?;
        stats.decisions.push((n, decisions));
        if found {
            let (model, skolems) = engine.model()?;
            check_found(&model, axioms, goals)?;
            stats.elapsed = start.elapsed();
            return Ok(SearchOutcome::Found {
                model,
                skolems: skolem_names.into_iter().zip(skolems).collect(),
                excluded,
                stats,
            });
        }
        excluded.push(n);
    }
    stats.elapsed = start.elapsed();
    Ok(SearchOutcome::Exhausted { excluded, stats })
}

/// Independent re-check of a found model by exhaustive evaluation.
fn check_found(m: &FiniteModel, axioms: &[Statement], goals: &[Statement]) -> Result<()> {
    for v in verify_model(m, axioms)? {
        if v.verdict != Verdict::Holds {
            return Err(Error::InvalidModel(format!("search produced a model violating `{}`", v.statement)));
        }
    }
    for v in verify_model(m, goals)? {
        if v.verdict != Verdict::Refuted {
            return Err(Error::InvalidModel(format!("search produced a model satisfying goal `{}`", v.statement)));
        }
    }
    Ok(())
}
