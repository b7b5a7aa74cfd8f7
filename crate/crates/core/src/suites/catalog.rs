use crate::checker::Verdict;
use crate::deps::FdReading;

use super::Expected;

/// Catalog source line: `(id, statement, expected, anchor)`.
pub(super) type Row = (String, String, Expected, &'static str);

fn row(id: &str, text: &str, expected: Expected, anchor: &'static str) -> Row {
    (id.to_string(), text.to_string(), expected, anchor)
}

use Expected::{Holds as H, Refuted as R};

pub(super) fn outer_inner() -> Vec<Row> {
    vec![
        row("oi.plus-assoc", "q + (r + s) = (q + r) + s", H, "proved associativity of the +"),
        row("oi.meet-over-plus", "q ^ (r + s) = (q ^ r) + (q ^ s)", H, "distributivity of natural join over the +"),
        row("oi.plus-def", "x + y = (x ^ (y v R11)) v (y ^ (x v R11))", H, "outer union, point-free"),
        row("oi.star-def", "x * y = (x v (y ^ R00)) ^ (y v (x ^ R00))", H, "inner join, point-free"),
        row("oi.star-r00", "x * R00 = R00", H, "top and bottom of the secondary lattice"),
        row("oi.star-r11", "x * R11 = x", H, "top and bottom of the secondary lattice"),
        row("oi.plus-r00", "x + R00 = x", H, "then, dually"),
        row("oi.plus-r11", "x + R11 = R11", H, "then, dually"),
    ]
}

pub(super) fn bilattice() -> Vec<Row> {
    vec![
        row("bl.meet-comm", "x ^ y = y ^ x", H, "lattice axioms"),
        row("bl.meet-assoc", "(x ^ y) ^ z = x ^ (y ^ z)", H, "lattice axioms"),
        row("bl.meet-absorb", "x ^ (x v y) = x", H, "lattice axioms"),
        row("bl.join-comm", "x v y = y v x", H, "lattice axioms"),
        row("bl.join-assoc", "(x v y) v z = x v (y v z)", H, "lattice axioms"),
        row("bl.join-absorb", "x v (x ^ y) = x", H, "lattice axioms"),
        row("bl.star-idem", "x * x = x", H, "explicitly add idempotent laws"),
        row("bl.star-comm", "x * y = y * x", H, "secondary lattice"),
        row("bl.star-absorb", "x * (x + y) = x", H, "secondary lattice"),
        row("bl.plus-idem", "x + x = x", H, "explicitly add idempotent laws"),
        row("bl.plus-comm", "x + y = y + x", H, "secondary lattice"),
        row("bl.meet-r10", "x ^ R10 = R10", H, "constant axioms"),
        row("bl.join-r01", "x v R01 = R01", H, "constant axioms"),
        row("bl.meet-def", "x ^ y = (x + (y * R10)) * (y + (x * R10))", H, "explicit definitions connections"),
        row("bl.join-def", "x v y = (x * (y + R01)) + (y * (x + R01))", H, "explicit definitions connections"),
        row("bl.plus-over-meet", "x + (y ^ z) = (x + y) ^ (x + z)", H, "two final laws added to the system"),
        row("bl.fdi", "x = (x ^ R00) v (x ^ R11)", H, "fundamental decomposition identity"),
        row("bl.fdi-cousin", "x = (x + R01) * (x + R10)", H, "fundamental decomposition identity, cousin"),
        row("bl.weak-fdi-inv", "R00 ^ (x v R11) = x ^ R00", H, "weaker forms of dual to FDI"),
        row("bl.weak-fdi-inv-cousin", "R01 + (x * R10) = x + R01", H, "weaker forms of dual to FDI"),
        row("bl.r10-meet", "R10 = R11 ^ R00", H, "constants R10 and R01 are redundant"),
        row("bl.r01-join", "R01 = R11 v R00", H, "constants R10 and R01 are redundant"),
    ]
}

pub(super) fn complement() -> Vec<Row> {
    vec![
        row("cp.axiom-meet", "x' ^ x = x ^ R00", H, "defined by the following pair of axioms"),
        row("cp.axiom-join", "x' v x = x v R11", H, "defined by the following pair of axioms"),
        row("cp.double-neg", "x'' = x", H, "double negation"),
        row("cp.de-morgan", "x' + y' = (x ^ y)'", H, "De Morgan"),
        row("cp.plus-r01", "(x + R01)' = x ^ R00", H, "other theorems involving complement"),
        row("cp.star-r10", "(x * R10)' = x v R11", H, "other theorems involving complement"),
        row("cp.meet-r00", "(x ^ R00)' = x v R11", H, "other theorems involving complement"),
        row("cp.plus-r01-star", "(x + R01)' = x * R10", H, "other theorems involving complement"),
        row("cp.r11", "R11' = R10", H, "other theorems involving complement"),
        row("cp.r00", "R00' = R01", H, "other theorems involving complement"),
    ]
}

pub(super) fn nand() -> Vec<Row> {
    vec![
        row("nd.meet", "x ^ y = ((x ^ y)' ^ (x ^ y)')'", H, "NAND as a basis"),
        row("nd.plus", "x + y = ((x ^ x)' ^ (y ^ y)')'", H, "NAND as a basis"),
        row("nd.complement", "x' = (x ^ x)'", H, "NAND as a basis"),
    ]
}

pub(super) fn minimal12() -> Vec<Row> {
    vec![
        row("mn.star-defs", "(x v (y ^ R00)) ^ (y v (x ^ R00)) = (x ^ y) v ((x v y) ^ R00)", H, "two alternative definitions for inner join"),
        row(
            "mn.meet-over-plus",
            "x ^ ((y' ^ z')') = ((x ^ y)' ^ (x ^ z)')'",
            H,
            "distributivity of natural join over outer union, in complement form",
        ),
        row("mn.dch", "R00 ^ (x ^ (y v z)) = R00 ^ ((x ^ y) v (x ^ z))", H, "distributivity constraint on relation headers"),
    ]
}

/// The twelve axioms in order; ids refer to entries owned by other suites.
pub(super) const MINIMAL12_IDS: [&str; 12] = [
    "bl.meet-comm",
    "bl.meet-assoc",
    "bl.meet-absorb",
    "bl.join-comm",
    "bl.join-assoc",
    "bl.join-absorb",
    "bl.fdi",
    "mn.star-defs",
    "mn.meet-over-plus",
    "mn.dch",
    "cp.axiom-meet",
    "cp.axiom-join",
];

pub(super) fn search_goals() -> Vec<Row> {
    vec![
        row("sg.empty-header", "x v R00 = R00 | x v R00 = R00'", H, "how many relations with empty attribute sets exist"),
        row("sg.r00-r11", "R00 ^ R11 != R00", H, "R11 and R00 are incompatible in the lattice order"),
    ]
}

pub(super) fn cond_dist() -> Vec<Row> {
    vec![
        row("cd.sdc", "R00 ^ (x v y) = R00 ^ (x v z) -> x ^ (y v z) = (x ^ y) v (x ^ z)", H, "Spight distributivity criterion"),
        row("cd.r00-premise", "R00 ^ y = R00 ^ z -> x ^ (y v z) = (x ^ y) v (x ^ z)", H, "proving weaker criteria"),
        row("cd.r11-premise", "R11 ^ y = R11 ^ z -> x ^ (y v z) = (x ^ y) v (x ^ z)", H, "y and z have the same content"),
    ]
}

pub(super) fn dependencies(reading: FdReading) -> Vec<Row> {
    let fd = |r: &str, x: &str, y: &str| reading.fd_text(r, x, y);
    let xz = reading.augment_text("x", "z");
    let yz = reading.augment_text("y", "z");
    vec![
        row(
            "dp.incl-trans",
            "r v x < s v x & s v y < s v y & x < y -> r v x < s v y",
            H,
            "inclusion dependency is transitive, as printed",
        ),
        row(
            "dp.incl-trans-chained",
            "r v x < s v x & s v y < t v y & x < y -> r v x < t v y",
            H,
            "inclusion dependency transitivity through a third relation",
        ),
        ("dp.fd-reflexivity".into(), format!("y < x -> {}", fd("r", "x", "y")), H, "Armstrong reflexivity"),
        (
            "dp.fd-transitivity".into(),
            format!("{} & {} -> {}", fd("r", "x", "y"), fd("r", "y", "z"), fd("r", "x", "z")),
            H,
            "Armstrong transitivity",
        ),
        (
            "dp.fd-augmentation".into(),
            format!("{} -> {}", fd("r", "x", "y"), fd("r", &xz, &yz)),
            H,
            "Armstrong augmentation",
        ),
    ]
}

pub(super) fn cylindric() -> Vec<Row> {
    vec![
        row("cy.self", "x @ x = x v R11", H, "cylindrification properties"),
        row("cy.idem", "(x @ x) @ x = x @ x", H, "cylindrification properties"),
        row("cy.meet-nested", "z @ (x ^ (z @ y)) = z @ (x ^ (z @ y))", H, "cylindrification properties, as printed"),
        row("cy.comm", "x @ y = y @ x", H, "cylindrification properties"),
        row("cy.plus", "z @ (x + y) = (z @ x) + (z @ y)", H, "cylindrification properties"),
        row("cy.meet", "z @ (x ^ y) = (z @ x) ^ (z @ y)", H, "cylindrification properties"),
        row("cy.join", "z @ (x v y) = (z @ x) v (z @ y)", H, "cylindrification properties"),
        row("cy.assoc", "x @ (y @ z) = (x @ y) @ z", H, "cylindrification properties"),
        row("cy.meet-nested-split", "z @ (x ^ (z @ y)) = (z @ x) ^ (z @ y)", H, "nested property with the right side distributed"),
    ]
}

pub(super) fn appendix(reading: FdReading) -> Vec<Row> {
    let i = reading.instance.symbol();
    let v = reading.value.symbol();
    let hyp = reading.fd_text("r", "x", "y");
    // r combined with the augmented argument
    let rxz = format!("(r {i} {})", reading.augment_text("x", "z"));
    let yz = reading.augment_text("y", "z");
    let lhs = format!("{rxz} {v} y");
    let with = |t: &str| format!("{rxz} {v} {t}");
    let left = "(z' ^ (y' v R11))";
    let right = "(y' ^ (z' v R11))";
    vec![
        ("ap.simplified".into(), format!("{hyp} -> {lhs} < {rxz} {v} ({yz})'"), H, "simplify implication right side"),
        row("ap.de-morgan", "(y ^ z)' = (z' ^ (y' v R11)) v (y' ^ (z' v R11))", H, "De Morgan law in join and inner union"),
        row("ap.weak-cond-dist", "R00 ^ (z' ^ (y' v R11)) = R00 ^ (y' ^ (z' v R11))", H, "check weak conditional distributivity"),
        (
            "ap.expanded".into(),
            format!("{hyp} -> {lhs} < ({}) v ({})", with(left), with(right)),
            H,
            "the expanded implication",
        ),
        ("ap.split-left".into(), format!("{hyp} -> {lhs} < {}", with(left)), H, "split into two proofs"),
        ("ap.split-right".into(), format!("{hyp} -> {lhs} < {}", with(right)), H, "split into two proofs"),
        ("ap.split-right-a".into(), format!("{hyp} -> {lhs} < {}", with("y'")), H, "split the last implication"),
        (
            "ap.split-right-b".into(),
            format!("{lhs} < {} -> {lhs} < {}", with("y'"), with(right)),
            H,
            "the second is immediate",
        ),
        (
            "ap.substitution".into(),
            format!("t {v} y < t {v} y' -> (t {i} z) {v} y < (t {i} z) {v} y'"),
            H,
            "a substitution reduces the first one",
        ),
    ]
}

pub(super) fn broken_laws() -> Vec<Row> {
    vec![
        row("bk.star-assoc", "(x * y) * z = x * (y * z)", R, "inner join is not associative"),
        row("bk.plus-absorb", "x + (x * y) = x", R, "absorption of inner join and outer union is not valid"),
        row("bk.distributivity", "x ^ (y v z) = (x ^ y) v (x ^ z)", R, "general distributivity"),
        row("bk.plus-over-join", "x + (y v z) = (x + y) v (x + z)", R, "the answer to this question is negative"),
        row("bk.join-over-plus", "x v (y + z) = (x v y) + (x v z)", R, "the answer to this question is negative"),
        row("bk.meet-over-plus-printed", "x ^ ((y' ^ z)') = ((x ^ y)' ^ (x ^ z)')", R, "ninth axiom exactly as printed"),
    ]
}

/// Entries referenced by a suite beyond the ones it owns.
pub(super) fn references(suite: &str) -> &'static [&'static str] {
    match suite {
        "outer-inner" => &["bl.star-absorb", "bk.plus-absorb", "bk.star-assoc"],
        "bilattice" => &[
            "oi.plus-assoc",
            "oi.star-r00",
            "oi.plus-r11",
            "oi.star-def",
            "oi.plus-def",
            "oi.meet-over-plus",
            "bk.plus-over-join",
            "bk.join-over-plus",
        ],
        "search-goals" => &["bk.distributivity"],
        "appendixA" => &["dp.fd-augmentation"],
        _ => &[],
    }
}

impl From<Expected> for Verdict {
    fn from(e: Expected) -> Verdict {
        match e {
            Expected::Holds => Verdict::Holds,
            Expected::Refuted => Verdict::Refuted,
        }
    }
}
