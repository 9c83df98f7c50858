//! Known knots with T-, O- and I-type integral surgeries, and reconciliation
//! of search output against them.
//!
//! The catalog ships as `data/catalog.txt` (see the header of that file for
//! the record format) and is embedded at compile time.

use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;
use std::sync::OnceLock;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::knot_invariants::{cable_alexander, t_from_alexander, torus_alexander, AlexanderPoly, TSequence};
use crate::search::Candidate;

pub const EMBEDDED_CATALOG: &str = include_str!("../data/catalog.txt");

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum KnotLabel {
    Torus {
        r: u64,
        s: u64,
    },
    /// `[p1,q1; p2,q2]`, the `(p1, q1)` cable of `T(p2, q2)`.
    Cable {
        p1: u64,
        q1: u64,
        p2: u64,
        q2: u64,
    },
    HyperbolicRef {
        description: String,
    },
}

impl KnotLabel {
    /// `None` for hyperbolic references.
    pub fn alexander(&self) -> Option<Result<AlexanderPoly>> {
        match *self {
            KnotLabel::Torus { r, s } => Some(torus_alexander(r, s)),
            KnotLabel::Cable { p1, q1, p2, q2 } => Some(cable_alexander(p1, q1, p2, q2)),
            KnotLabel::HyperbolicRef { .. } => None,
        }
    }

    pub fn t_sequence(&self) -> Option<Result<TSequence>> {
        self.alexander().map(|a| a.and_then(|a| t_from_alexander(&a)))
    }

    pub fn kind(&self) -> &'static str {
        match self {
            KnotLabel::Torus { .. } => "torus",
            KnotLabel::Cable { .. } => "cable",
            KnotLabel::HyperbolicRef { .. } => "hyperbolic",
        }
    }
}

impl fmt::Display for KnotLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            KnotLabel::Torus { r, s } => write!(f, "T({r},{s})"),
            KnotLabel::Cable { p1, q1, p2, q2 } => write!(f, "[{p1},{q1};{p2},{q2}]"),
            KnotLabel::HyperbolicRef { description } => f.write_str(description),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SourceTable {
    /// Berge knot candidates.
    Table1,
    /// Berge knots with verified finite fillings.
    Table2,
    /// Torus knots and cables.
    Table3,
    /// Hyperbolic knots.
    Table4,
    /// The list of candidate slopes.
    List,
    /// The enumerated list of Berge knots `K(p,q;λ)`.
    BergeList,
}

impl SourceTable {
    fn parse(s: &str) -> Option<Self> {
        Some(match s {
            "table1" => SourceTable::Table1,
            "table2" => SourceTable::Table2,
            "table3" => SourceTable::Table3,
            "table4" => SourceTable::Table4,
            "list" => SourceTable::List,
            "berge-list" => SourceTable::BergeList,
            _ => return None,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CatalogEntry {
    /// Surgery coefficient.
    pub p: u64,
    pub label: KnotLabel,
    pub source: SourceTable,
}

/// A Berge knot row. Never computed from.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BergeRecord {
    pub p: u64,
    pub q: u64,
    pub lambda: u64,
    /// `None` for rows of the enumerated list, which give no coefficient.
    pub finite_coefficient: Option<u64>,
    pub center: Option<String>,
    pub quotient: Option<String>,
    pub source: SourceTable,
    /// Another reading of the same `p` has a different `q` or `λ`.
    pub discrepancy: bool,
}

#[derive(Debug, Clone, Default)]
pub struct Catalog {
    entries: Vec<CatalogEntry>,
    slopes: Vec<(u64, u64)>,
    berge: Vec<BergeRecord>,
}

impl Catalog {
    pub fn embedded() -> &'static Catalog {
        static CATALOG: OnceLock<Catalog> = OnceLock::new();
        CATALOG.get_or_init(|| Catalog::parse(EMBEDDED_CATALOG).expect("embedded catalog parses"))
    }

    pub fn load(path: &Path) -> Result<Catalog> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::CatalogParse { line: 0, message: format!("{}: {e}", path.display()) })?;
        Catalog::parse(&text)
    }

    pub fn parse(text: &str) -> Result<Catalog> {
        let mut cat = Catalog::default();
        for (n, raw) in text.lines().enumerate() {
            let line = raw.trim_end_matches('\r');
            if line.trim().is_empty() || line.starts_with('#') {
                continue;
            }
            let err = |message: String| Error::CatalogParse { line: n + 1, message };
            let fields: Vec<&str> = line.split('\t').collect();
            let num = |i: usize| -> Result<u64> {
                let f = fields.get(i).ok_or_else(|| err(format!("missing field {i}")))?;
                f.trim().parse().map_err(|_| err(format!("bad integer {f:?}")))
            };
            let text_at = |i: usize| -> Result<String> {
                fields.get(i).map(|s| s.to_string()).ok_or_else(|| err(format!("missing field {i}")))
            };
            let kind = *fields.get(1).ok_or_else(|| err("missing kind".into()))?;
            let expected = match kind {
                "torus" => 5,
                "cable" => 7,
                "hyperbolic" => 4,
                "slope" => 4,
                "berge-candidate" => 6,
                "berge" => 8,
                "berge-knot" => 5,
                other => return Err(err(format!("unknown kind {other:?}"))),
            };
            if fields.len() != expected {
                return Err(err(format!("{kind} record needs {expected} fields, got {}", fields.len())));
            }
            let source = SourceTable::parse(fields[expected - 1])
                .ok_or_else(|| err(format!("unknown source {:?}", fields[expected - 1])))?;
            let p = num(0)?;
            match kind {
                "torus" | "cable" | "hyperbolic" => {
                    let label = match kind {
                        "torus" => KnotLabel::Torus { r: num(2)?, s: num(3)? },
                        "cable" => KnotLabel::Cable { p1: num(2)?, q1: num(3)?, p2: num(4)?, q2: num(5)? },
                        _ => KnotLabel::HyperbolicRef { description: text_at(2)? },
                    };
                    if let Some(Err(e)) = label.alexander() {
                        return Err(err(format!("{label}: {e}")));
                    }
                    cat.entries.push(CatalogEntry { p, label, source });
                }
                "slope" => cat.slopes.push((p, num(2)?)),
                _ => {
                    let full = kind == "berge";
                    cat.berge.push(BergeRecord {
                        p,
                        q: num(2)?,
                        lambda: num(3)?,
                        finite_coefficient: (kind != "berge-knot").then(|| num(4)).transpose()?,
                        center: full.then(|| text_at(5)).transpose()?,
                        quotient: full.then(|| text_at(6)).transpose()?,
                        source,
                        discrepancy: false,
                    });
                }
            }
        }
        let keys: Vec<_> = cat.berge.iter().map(|b| (b.p, b.q, b.lambda, b.source)).collect();
        for b in &mut cat.berge {
            b.discrepancy = keys.iter().any(|&(p, q, l, src)| p == b.p && src != b.source && (q, l) != (b.q, b.lambda));
        }
        Ok(cat)
    }

    pub fn entries(&self) -> &[CatalogEntry] {
        &self.entries
    }

    pub fn table(&self, source: SourceTable) -> impl Iterator<Item = &CatalogEntry> {
        self.entries.iter().filter(move |e| e.source == source)
    }

    /// The reference list of candidate slopes `p/q`, with multiplicity.
    pub fn reference_slopes(&self) -> &[(u64, u64)] {
        &self.slopes
    }

    pub fn berge_records(&self) -> &[BergeRecord] {
        &self.berge
    }

    /// All torus, cable and hyperbolic rows at surgery coefficient `p`.
    pub fn lookup(&self, p: u64) -> Vec<&CatalogEntry> {
        self.entries.iter().filter(|e| e.p == p).collect()
    }
}

pub fn catalog_lookup(p: u64) -> Vec<&'static CatalogEntry> {
    Catalog::embedded().lookup(p)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum MatchResult {
    /// A torus or cable knot with the same torsion coefficients.
    Known { label: KnotLabel },
    /// No torus or cable knot matches; these are the hyperbolic references at `p`.
    HyperbolicCandidate { references: Vec<String> },
    /// Nothing in either table at this `p` accounts for the candidate.
    Unexpected,
}

impl MatchResult {
    pub fn kind(&self) -> &'static str {
        match self {
            MatchResult::Known { label } => label.kind(),
            MatchResult::HyperbolicCandidate { .. } => "hyperbolic",
            MatchResult::Unexpected => "unexpected",
        }
    }

    pub fn params(&self) -> String {
        match self {
            MatchResult::Known { label } => label.to_string(),
            MatchResult::HyperbolicCandidate { references } => references.join(" | "),
            MatchResult::Unexpected => String::new(),
        }
    }
}

impl fmt::Display for MatchResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MatchResult::Unexpected => f.write_str("UNEXPECTED"),
            _ => f.write_str(&self.params()),
        }
    }
}

impl Catalog {
    pub fn match_t(&self, p: u64, t: &TSequence) -> MatchResult {
        let rows = self.lookup(p);
        let known = rows.iter().find(|e| matches!(e.label.t_sequence(), Some(Ok(ref s)) if s == t));
        if let Some(e) = known {
            return MatchResult::Known { label: e.label.clone() };
        }
        let references: Vec<String> =
            rows.iter().filter(|e| e.source == SourceTable::Table4).map(|e| e.label.to_string()).collect();
        if references.is_empty() {
            MatchResult::Unexpected
        } else {
            MatchResult::HyperbolicCandidate { references }
        }
    }

    pub fn match_candidate(&self, c: &Candidate) -> MatchResult {
        self.match_t(c.p(), &c.t)
    }
}

pub fn match_candidate(c: &Candidate) -> MatchResult {
    Catalog::embedded().match_candidate(c)
}

/// Candidates sharing a surgery coefficient and torsion sequence.
///
/// Several slopes can carry the same knot (9/1 and 9/2 both carry the
/// trefoil), and table rows are indexed by `p` alone, so rows are reconciled
/// against these classes rather than individual candidates.
#[derive(Debug, Clone, Serialize)]
pub struct CandidateClass {
    pub p: u64,
    pub t: TSequence,
    pub slopes: Vec<(u64, u64, i64)>,
    pub matched_rows: Vec<KnotLabel>,
}

#[derive(Debug, Clone, Serialize)]
pub struct RowMatch {
    pub p: u64,
    pub label: KnotLabel,
    /// Slopes `p/q` of the class the row was matched to.
    pub slopes: Vec<(u64, u64)>,
}

#[derive(Debug, Clone, Default, Serialize)]
pub struct ReconciliationReport {
    pub p_max: u64,
    pub candidates: usize,
    pub classes: Vec<CandidateClass>,
    pub table3_rows: usize,
    pub table4_rows: usize,
    pub reference_slopes: usize,
    pub torus_cable_matches: Vec<RowMatch>,
    /// Classes matched by no torus or cable row, paired with hyperbolic rows by `p`.
    pub hyperbolic_matches: Vec<(u64, String, TSequence)>,
    pub unexpected: Vec<(u64, u64, TSequence)>,
    pub issues: Vec<String>,
}

impl ReconciliationReport {
    pub fn passed(&self) -> bool {
        self.issues.is_empty()
    }
}

impl fmt::Display for ReconciliationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "reconciliation up to p = {}", self.p_max)?;
        writeln!(
            f,
            "  {} candidates in {} (p, t) classes; {} torus/cable rows, {} hyperbolic rows, {} listed slopes",
            self.candidates,
            self.classes.len(),
            self.table3_rows,
            self.table4_rows,
            self.reference_slopes
        )?;
        for m in &self.torus_cable_matches {
            let slopes: Vec<String> = m.slopes.iter().map(|(p, q)| format!("{p}/{q}")).collect();
            writeln!(f, "  p={:<4} {:<14} <- {}", m.p, m.label.to_string(), slopes.join(", "))?;
        }
        for (p, desc, t) in &self.hyperbolic_matches {
            writeln!(f, "  p={p:<4} hyperbolic     <- t=({t}) {desc}")?;
        }
        for (p, q, t) in &self.unexpected {
            writeln!(f, "  UNEXPECTED {p}/{q} t=({t})")?;
        }
        for issue in &self.issues {
            writeln!(f, "  FAIL {issue}")?;
        }
        write!(f, "  result: {}", if self.passed() { "PASS" } else { "FAIL" })
    }
}

/// Reconciles search output against the torus/cable and hyperbolic tables
/// and the reference slope list, for all rows with `p <= p_max`.
///
/// Requirements checked:
/// * every torus/cable row is matched by exactly one `(p, t)` class, and no
///   class by more than one row;
/// * the unmatched classes and the hyperbolic rows have the same multiset of `p`;
/// * every candidate matches something (no UNEXPECTED results);
/// * the candidate slopes equal the reference list up to `p_max`.
pub fn verify_tables(catalog: &Catalog, candidates: &[Candidate], p_max: u64) -> ReconciliationReport {
    let mut report = ReconciliationReport { p_max, ..Default::default() };
    let cands: Vec<&Candidate> = candidates.iter().filter(|c| c.p() <= p_max).collect();
    report.candidates = cands.len();

    let mut classes: BTreeMap<(u64, TSequence), CandidateClass> = BTreeMap::new();
    for c in &cands {
        classes
            .entry((c.p(), c.t.clone()))
            .or_insert_with(|| CandidateClass { p: c.p(), t: c.t.clone(), slopes: vec![], matched_rows: vec![] })
            .slopes
            .push((c.p(), c.q(), c.epsilon.value()));
    }

    let table3: Vec<&CatalogEntry> = catalog.table(SourceTable::Table3).filter(|e| e.p <= p_max).collect();
    let table4: Vec<&CatalogEntry> = catalog.table(SourceTable::Table4).filter(|e| e.p <= p_max).collect();
    report.table3_rows = table3.len();
    report.table4_rows = table4.len();

    for row in &table3 {
        let t = match row.label.t_sequence() {
            Some(Ok(t)) => t,
            Some(Err(e)) => {
                report.issues.push(format!("row p={} {}: {e}", row.p, row.label));
                continue;
            }
            None => unreachable!("table3 rows are torus or cable knots"),
        };
        if (row.p as i128) < 2 * t.genus() as i128 - 1 {
            report.issues.push(format!("row p={} {} violates p >= 2g - 1", row.p, row.label));
        }
        match classes.get_mut(&(row.p, t)) {
            Some(class) => {
                class.matched_rows.push(row.label.clone());
                report.torus_cable_matches.push(RowMatch {
                    p: row.p,
                    label: row.label.clone(),
                    slopes: class.slopes.iter().map(|&(p, q, _)| (p, q)).collect(),
                });
            }
            None => report.issues.push(format!("row p={} {} is not matched by any candidate", row.p, row.label)),
        }
    }

    let mut hyperbolic_rows: BTreeMap<u64, Vec<String>> = BTreeMap::new();
    for row in &table4 {
        hyperbolic_rows.entry(row.p).or_default().push(row.label.to_string());
    }
    for class in classes.values() {
        if class.matched_rows.len() > 1 {
            let labels: Vec<String> = class.matched_rows.iter().map(|l| l.to_string()).collect();
            report.issues.push(format!(
                "class p={} t=({}) matched by several rows: {}",
                class.p,
                class.t,
                labels.join(", ")
            ));
        }
        if !class.matched_rows.is_empty() {
            continue;
        }
        let desc = hyperbolic_rows.get_mut(&class.p).and_then(|v| (!v.is_empty()).then(|| v.remove(0)));
        match desc {
            Some(desc) => report.hyperbolic_matches.push((class.p, desc, class.t.clone())),
            None => {
                for &(p, q, _) in &class.slopes {
                    report.unexpected.push((p, q, class.t.clone()));
                }
                report
                    .issues
                    .push(format!("class p={} t=({}) has no torus, cable or hyperbolic row", class.p, class.t));
            }
        }
    }
    for (p, rest) in &hyperbolic_rows {
        for desc in rest {
            report.issues.push(format!("hyperbolic row p={p} ({desc}) has no unmatched candidate"));
        }
    }

    for c in &cands {
        if catalog.match_candidate(c) == MatchResult::Unexpected {
            let entry = (c.p(), c.q(), c.t.clone());
            if !report.unexpected.contains(&entry) {
                report.unexpected.push(entry);
                report.issues.push(format!("candidate {}/{} is UNEXPECTED", c.p(), c.q()));
            }
        }
    }

    let mut listed: Vec<(u64, u64)> = catalog.reference_slopes().iter().copied().filter(|&(p, _)| p <= p_max).collect();
    let mut found: Vec<(u64, u64)> = cands.iter().map(|c| (c.p(), c.q())).collect();
    listed.sort_unstable();
    found.sort_unstable();
    report.reference_slopes = listed.len();
    if listed != found {
        report.issues.push(format!(
            "candidate slopes differ from the reference list: {} found vs {} listed",
            found.len(),
            listed.len()
        ));
    }

    report.classes = classes.into_values().collect();
    report
}
