use std::fmt;
use std::time::Duration;

use serde::Serialize;

use crate::relation::Relation;
use crate::universe::Universe;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Verdict {
    Holds,
    Refuted,
    BudgetExhausted,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Holds => "HOLDS",
            Verdict::Refuted => "REFUTED",
            Verdict::BudgetExhausted => "BUDGET_EXHAUSTED",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    Exhaustive,
    /// Seeded random assignments. Never yields [`Verdict::Holds`].
    Sample { seed: u64, samples: u64 },
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Mode::Exhaustive => f.write_str("exhaustive"),
            Mode::Sample { seed, samples } => write!(f, "sample(seed {seed}, {samples})"),
        }
    }
}

/// Variables bound to relations, in the statement's variable order.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Assignment(Vec<(String, Relation)>);

impl Assignment {
    pub fn new(bindings: Vec<(String, Relation)>) -> Self {
        Assignment(bindings)
    }

    pub fn get(&self, var: &str) -> Option<&Relation> {
        self.0.iter().find(|(v, _)| v == var).map(|(_, r)| r)
    }

    pub fn iter(&self) -> impl Iterator<Item = &(String, Relation)> {
        self.0.iter()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn render(&self, u: &Universe) -> String {
        self.0
            .iter()
            .map(|(v, r)| format!("{v} = {}", r.display(u)))
            .collect::<Vec<_>>()
            .join(", ")
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CheckReport {
    pub statement: String,
    pub verdict: Verdict,
    /// Present iff the verdict is [`Verdict::Refuted`].
    pub witness: Option<Assignment>,
    /// Size of the enumerated relation carrier.
    pub relations: u64,
    pub assignments_tested: u64,
    /// For implications: how many tested assignments satisfied the premises.
    pub premises_satisfied: Option<u64>,
    pub mode: Mode,
    pub elapsed: Duration,
}

#[derive(Clone, Debug, Serialize)]
pub struct WitnessBinding {
    pub variable: String,
    pub relation: String,
}

/// The machine-readable form of a [`CheckReport`].
#[derive(Clone, Debug, Serialize)]
pub struct StructuredReport {
    pub statement: String,
    pub verdict: Verdict,
    pub witness: Option<Vec<WitnessBinding>>,
    pub relations: u64,
    pub assignments_tested: u64,
    pub premises_satisfied: Option<u64>,
    pub mode: &'static str,
    pub seed: Option<u64>,
    pub samples: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub elapsed_ms: Option<u64>,
}

impl CheckReport {
    /// Timing is omitted unless requested so that repeated runs produce
    /// byte-identical documents.
    pub fn structured(&self, u: &Universe, timing: bool) -> StructuredReport {
        let (mode, seed, samples) = match self.mode {
            Mode::Exhaustive => ("exhaustive", None, None),
            Mode::Sample { seed, samples } => ("sample", Some(seed), Some(samples)),
        };
        StructuredReport {
            statement: self.statement.clone(),
            verdict: self.verdict,
            witness: self.witness.as_ref().map(|w| {
                w.iter()
                    .map(|(v, r)| WitnessBinding { variable: v.clone(), relation: r.to_literal(u) })
                    .collect()
            }),
            relations: self.relations,
            assignments_tested: self.assignments_tested,
            premises_satisfied: self.premises_satisfied,
            mode,
            seed,
            samples,
            elapsed_ms: timing.then_some(self.elapsed.as_millis() as u64),
        }
    }

    pub fn to_json(&self, u: &Universe, timing: bool) -> String {
        serde_json::to_string_pretty(&self.structured(u, timing)).expect("report serializes")
    }

    /// Human-readable multi-line summary.
    pub fn render(&self, u: &Universe) -> String {
        let mut out = format!("{}\n  {}", self.statement, self.verdict);
        match self.premises_satisfied {
            Some(p) => out.push_str(&format!(
                " after {} assignments ({} satisfying the premises) over {} relations, {}",
                self.assignments_tested, p, self.relations, self.mode
            )),
            None => out.push_str(&format!(
                " after {} assignments over {} relations, {}",
                self.assignments_tested, self.relations, self.mode
            )),
        }
        if let Some(w) = &self.witness {
            for (v, r) in w.iter() {
                out.push_str(&format!("\n  {v} = {}", r.display(u)));
            }
        }
        out
    }
}
