//! The law catalog: named statement sets with expected verdicts, a runner
//! that checks them over concrete universes, and the harness that picks
//! among candidate readings of the fictional dependency.

mod catalog;

use std::collections::HashMap;
use std::fmt;

use serde::Serialize;

use crate::checker::{check_over, enumerate_relations_with_limit, CheckReport, Limits, Mode, Verdict};
use crate::deps::FdReading;
use crate::error::{Error, Result};
use crate::term::{parse_goal, Statement};
use crate::universe::Universe;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Expected {
    Holds,
    Refuted,
}

impl fmt::Display for Expected {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        Verdict::from(*self).fmt(f)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SuiteEntry {
    pub id: String,
    /// The suite the entry belongs to; other suites may reference it.
    pub owner: &'static str,
    pub text: String,
    pub statement: Statement,
    pub expected: Expected,
    /// Short phrase locating the law in its source.
    pub anchor: &'static str,
    /// Ids of the reference universes the entry is checked against by default.
    pub universes: Vec<&'static str>,
}

#[derive(Clone, Debug)]
pub struct Suite {
    pub name: &'static str,
    pub entries: Vec<SuiteEntry>,
}

/// Registered suite names in catalog order.
pub const SUITES: [&str; 11] = [
    "outer-inner",
    "bilattice",
    "complement",
    "nand",
    "minimal12",
    "search-goals",
    "cond-dist",
    "dependencies",
    "cylindric",
    "appendixA",
    "broken-laws",
];

/// The two reference universes by id.
pub fn reference_universe(id: &str) -> Option<Universe> {
    let text = match id {
        "u1" => "t : a, b",
        "u2" => "t : a, b\ns : 1, 2",
        _ => return None,
    };
    Some(Universe::parse(text).expect("reference universe parses"))
}

/// All entries owned by any suite, in catalog order, under `reading`.
pub fn catalog(reading: FdReading) -> Vec<SuiteEntry> {
    let owned: [(&'static str, Vec<catalog::Row>); 11] = [
        ("outer-inner", catalog::outer_inner()),
        ("bilattice", catalog::bilattice()),
        ("complement", catalog::complement()),
        ("nand", catalog::nand()),
        ("minimal12", catalog::minimal12()),
        ("search-goals", catalog::search_goals()),
        ("cond-dist", catalog::cond_dist()),
        ("dependencies", catalog::dependencies(reading)),
        ("cylindric", catalog::cylindric()),
        ("appendixA", catalog::appendix(reading)),
        ("broken-laws", catalog::broken_laws()),
    ];
    owned
        .into_iter()
        .flat_map(|(owner, rows)| {
            rows.into_iter().map(move |(id, text, expected, anchor)| {
                let statement = parse_goal(&text).unwrap_or_else(|e| panic!("catalog entry {id} does not parse: {e}"));
                SuiteEntry { id, owner, text, statement, expected, anchor, universes: vec!["u1", "u2"] }
            })
        })
        .collect()
}

/// A registered suite under the default dependency reading.
pub fn suite(name: &str) -> Result<Suite> {
    suite_with(name, FdReading::default())
}

pub fn suite_with(name: &str, reading: FdReading) -> Result<Suite> {
    let name = *SUITES.iter().find(|s| **s == name).ok_or_else(|| Error::UnknownSuite(name.to_string()))?;
    let all = catalog(reading);
    let by_id: HashMap<&str, &SuiteEntry> = all.iter().map(|e| (e.id.as_str(), e)).collect();
    let entries = if name == "minimal12" {
        catalog::MINIMAL12_IDS.iter().map(|id| by_id[id].clone()).collect()
    } else {
        let mut entries: Vec<SuiteEntry> = all.iter().filter(|e| e.owner == name).cloned().collect();
        entries.extend(catalog::references(name).iter().map(|id| by_id[id].clone()));
        entries
    };
    Ok(Suite { name, entries })
}

/// The twelve axioms of the minimal system, in order.
pub fn minimal_axioms() -> Vec<Statement> {
    suite("minimal12").expect("registered").entries.into_iter().map(|e| e.statement).collect()
}

impl Suite {
    /// The suite as a statement file: each entry preceded by a comment with
    /// its id and expected verdict.
    pub fn to_statement_file(&self) -> String {
        let mut out = format!("# suite {}\n", self.name);
        for e in &self.entries {
            out.push_str(&format!("# {} expected {}\n{}\n", e.id, e.expected, e.text));
        }
        out
    }
}

/// How a suite run checks each entry.
#[derive(Clone, Copy, Debug)]
pub struct SuiteOptions {
    /// Entries whose assignment space exceeds this are sampled instead.
    pub exhaustive_limit: u128,
    pub seed: u64,
    pub samples: u64,
    pub relation_limit: u128,
}

impl Default for SuiteOptions {
    fn default() -> Self {
        SuiteOptions { exhaustive_limit: 50_000_000, seed: 1, samples: 100_000, relation_limit: 1 << 16 }
    }
}

#[derive(Clone, Debug)]
pub struct EntryCheck {
    /// Index into the universes passed to the run.
    pub universe: usize,
    pub report: CheckReport,
}

#[derive(Clone, Debug)]
pub struct EntryOutcome {
    pub entry: SuiteEntry,
    pub checks: Vec<EntryCheck>,
}

impl EntryOutcome {
    /// An expected-HOLDS entry matches when no universe refutes it (a
    /// sampled check that finds nothing counts); an expected-REFUTED entry
    /// matches when at least one universe refutes it.
    pub fn matches(&self) -> bool {
        let refuted = self.checks.iter().any(|c| c.report.verdict == Verdict::Refuted);
        match self.entry.expected {
            Expected::Holds => !refuted,
            Expected::Refuted => refuted,
        }
    }

    /// The combined verdict across universes.
    pub fn actual(&self) -> Verdict {
        if self.checks.iter().any(|c| c.report.verdict == Verdict::Refuted) {
            Verdict::Refuted
        } else if self.checks.iter().all(|c| c.report.verdict == Verdict::Holds) {
            Verdict::Holds
        } else {
            Verdict::BudgetExhausted
        }
    }
}

#[derive(Clone, Debug)]
pub struct SuiteReport {
    pub suite: &'static str,
    pub outcomes: Vec<EntryOutcome>,
}

impl SuiteReport {
    pub fn mismatches(&self) -> Vec<&EntryOutcome> {
        self.outcomes.iter().filter(|o| !o.matches()).collect()
    }

    pub fn all_match(&self) -> bool {
        self.outcomes.iter().all(EntryOutcome::matches)
    }

    pub fn render(&self, universes: &[Universe]) -> String {
        let mut out = format!("suite {}\n", self.suite);
        for o in &self.outcomes {
            let flag = if o.matches() { "ok " } else { "MISMATCH" };
            out.push_str(&format!(
                "  {flag} {:<28} expected {:<8} actual {:<16} {}\n",
                o.entry.id,
                o.entry.expected.to_string(),
                o.actual().to_string(),
                o.entry.text
            ));
            for c in &o.checks {
                let u = &universes[c.universe];
                out.push_str(&format!(
                    "      {} {} ({} assignments, {})",
                    universe_label(u),
                    c.report.verdict,
                    c.report.assignments_tested,
                    c.report.mode
                ));
                if let Some(w) = &c.report.witness {
                    out.push_str(&format!(": {}", w.render(u)));
                }
                out.push('\n');
            }
        }
        let bad = self.mismatches().len();
        out.push_str(&format!("{} entries, {} mismatches\n", self.outcomes.len(), bad));
        out
    }
}

/// One-line universe description, e.g. `{t:{a,b}, s:{1,2}}`.
pub fn universe_label(u: &Universe) -> String {
    let parts: Vec<String> = u
        .attributes()
        .iter()
        .enumerate()
        .map(|(i, a)| format!("{a}:{{{}}}", u.domain(i).join(",")))
        .collect();
    format!("{{{}}}", parts.join(", "))
}

/// Checks every entry of `suite` over each universe.
pub fn run_suite(suite: &Suite, universes: &[Universe], opts: &SuiteOptions) -> Result<SuiteReport> {
    let carriers = universes
        .iter()
        .map(|u| enumerate_relations_with_limit(u, opts.relation_limit))
        .collect::<Result<Vec<_>>>()?;
    let mut outcomes = Vec::with_capacity(suite.entries.len());
    for entry in &suite.entries {
        let mut checks = Vec::with_capacity(universes.len());
        for (ui, (u, rels)) in universes.iter().zip(&carriers).enumerate() {
            let report = check_entry(u, rels, &entry.statement, opts)?;
            checks.push(EntryCheck { universe: ui, report });
        }
        outcomes.push(EntryOutcome { entry: entry.clone(), checks });
    }
    Ok(SuiteReport { suite: suite.name, outcomes })
}

/// Runs a registered suite by name over its default reference universes.
pub fn run_named(name: &str, opts: &SuiteOptions) -> Result<(SuiteReport, Vec<Universe>)> {
    let s = suite(name)?;
    let universes: Vec<Universe> = ["u1", "u2"].iter().filter_map(|id| reference_universe(id)).collect();
    Ok((run_suite(&s, &universes, opts)?, universes))
}

fn check_entry(u: &Universe, rels: &[crate::relation::Relation], s: &Statement, opts: &SuiteOptions) -> Result<CheckReport> {
    let k = s.free_variables().len() as u32;
    let space = (rels.len() as u128).checked_pow(k).unwrap_or(u128::MAX);
    let mode = if space <= opts.exhaustive_limit {
        Mode::Exhaustive
    } else {
        Mode::Sample { seed: opts.seed, samples: opts.samples }
    };
    let limits = Limits { relations: opts.relation_limit, assignments: opts.exhaustive_limit };
    check_over(u, rels, s, mode, limits)
}

/// Which Armstrong-style theorem a discrimination check covers.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Theorem {
    Reflexivity,
    Transitivity,
    Augmentation,
}

impl Theorem {
    pub const ALL: [Theorem; 3] = [Theorem::Reflexivity, Theorem::Transitivity, Theorem::Augmentation];

    fn entry_id(self) -> &'static str {
        match self {
            Theorem::Reflexivity => "dp.fd-reflexivity",
            Theorem::Transitivity => "dp.fd-transitivity",
            Theorem::Augmentation => "dp.fd-augmentation",
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Theorem::Reflexivity => "reflexivity",
            Theorem::Transitivity => "transitivity",
            Theorem::Augmentation => "augmentation",
        }
    }
}

#[derive(Clone, Debug)]
pub struct ReadingRow {
    pub reading: FdReading,
    /// Verdict per theorem, combined over all universes (REFUTED if any
    /// universe refutes).
    pub verdicts: [Verdict; 3],
    /// First refutation per theorem: universe index and rendered witness.
    pub witnesses: [Option<(usize, String)>; 3],
}

impl ReadingRow {
    pub fn survives(&self) -> bool {
        self.verdicts.iter().all(|v| *v == Verdict::Holds)
    }

    pub fn verdict(&self, t: Theorem) -> Verdict {
        self.verdicts[t as usize]
    }
}

/// Checks the three Armstrong-style theorems under every candidate reading.
pub fn discriminate_fd_reading(universes: &[Universe]) -> Result<Vec<ReadingRow>> {
    discriminate_readings(&FdReading::candidates(), universes)
}

pub fn discriminate_readings(readings: &[FdReading], universes: &[Universe]) -> Result<Vec<ReadingRow>> {
    let carriers = universes.iter().map(crate::checker::enumerate_relations).collect::<Result<Vec<_>>>()?;
    let all_limits = Limits { relations: u128::MAX, assignments: u128::MAX };
    let mut rows = Vec::with_capacity(readings.len());
    for &reading in readings {
        let entries = catalog(reading);
        let mut verdicts = [Verdict::Holds; 3];
        let mut witnesses: [Option<(usize, String)>; 3] = [None, None, None];
        for t in Theorem::ALL {
            let entry = entries.iter().find(|e| e.id == t.entry_id()).expect("theorem in catalog");
            for (ui, (u, rels)) in universes.iter().zip(&carriers).enumerate() {
                let r = check_over(u, rels, &entry.statement, Mode::Exhaustive, all_limits)?;
                if r.verdict == Verdict::Refuted {
                    verdicts[t as usize] = Verdict::Refuted;
                    witnesses[t as usize] = r.witness.map(|w| (ui, w.render(u)));
                    break;
                }
            }
        }
        rows.push(ReadingRow { reading, verdicts, witnesses });
    }
    Ok(rows)
}
