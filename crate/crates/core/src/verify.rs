//! Self-check suites behind `finsurg verify`.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;
use std::time::{Duration, Instant};

use num_integer::Integer;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::catalog::{verify_tables, Catalog};
use crate::correction_terms::{d_lens_table, d_trefoil_filling};
use crate::error::Result;
use crate::knot_invariants::{d_rational_surgery, TSequence};
use crate::rational::Rational;
use crate::search::{
    enumerate_slopes, lemma42_closed_form, search, theta_of, window_union, ProgressionTest, SearchConfig, SearchMode,
    Sign, SlopeFamily, PROGRESSION_MIN_P,
};

/// `(p, q, [(numerator, denominator); p])`
pub type GoldenRow = (u64, i64, &'static [(i128, i128)]);

/// `d(L(p,q), i)` for `i = 0..p`.
pub const GOLDEN_LENS_ROWS: [GoldenRow; 9] = [
    (3, 1, &[(1, 2), (-1, 6), (-1, 6)]),
    (3, 2, &[(1, 6), (1, 6), (-1, 2)]),
    (4, 1, &[(3, 4), (0, 1), (-1, 4), (0, 1)]),
    (4, 3, &[(0, 1), (1, 4), (0, 1), (-3, 4)]),
    (5, 1, &[(1, 1), (1, 5), (-1, 5), (-1, 5), (1, 5)]),
    (5, 2, &[(2, 5), (2, 5), (-2, 5), (0, 1), (-2, 5)]),
    (5, 3, &[(2, 5), (0, 1), (2, 5), (-2, 5), (-2, 5)]),
    (5, 4, &[(-1, 5), (1, 5), (1, 5), (-1, 5), (-1, 1)]),
    (1, 0, &[(0, 1)]),
];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    LensTables,
    Lemma42,
    Pruning,
    Progression,
    Reconcile,
}

impl Suite {
    pub const ALL: [Suite; 5] =
        [Suite::LensTables, Suite::Lemma42, Suite::Pruning, Suite::Progression, Suite::Reconcile];

    pub fn name(self) -> &'static str {
        match self {
            Suite::LensTables => "lens-tables",
            Suite::Lemma42 => "lemma42",
            Suite::Pruning => "pruning",
            Suite::Progression => "progression",
            Suite::Reconcile => "reconcile",
        }
    }
}

impl FromStr for Suite {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        Suite::ALL.into_iter().find(|suite| suite.name() == s).ok_or_else(|| format!("unknown suite {s:?}"))
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SuiteReport {
    pub suite: Suite,
    pub checks: u64,
    pub failures: Vec<String>,
    pub notes: Vec<String>,
    #[serde(skip)]
    pub elapsed: Duration,
}

impl SuiteReport {
    fn new(suite: Suite) -> Self {
        SuiteReport { suite, checks: 0, failures: vec![], notes: vec![], elapsed: Duration::ZERO }
    }

    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.checks += 1;
        if !ok {
            self.failures.push(what());
        }
    }
}

impl fmt::Display for SuiteReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "suite {}: {} checks, {} failures", self.suite, self.checks, self.failures.len())?;
        for n in &self.notes {
            writeln!(f, "  {n}")?;
        }
        for (k, fail) in self.failures.iter().enumerate() {
            if k == 20 {
                writeln!(f, "  ... {} more", self.failures.len() - 20)?;
                break;
            }
            writeln!(f, "  FAIL {fail}")?;
        }
        write!(f, "  result: {}", if self.passed() { "PASS" } else { "FAIL" })
    }
}

#[derive(Debug, Clone)]
pub struct VerifyOptions {
    pub seed: u64,
    /// Slopes sampled by the progression suite.
    pub samples: usize,
    /// Search range for the pruning and reconcile suites.
    pub p_max: u64,
    pub jobs: Option<usize>,
    /// Catalog for the reconcile suite; the embedded one when `None`.
    pub catalog: Option<Arc<Catalog>>,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions { seed: 1, samples: 120, p_max: 230, jobs: None, catalog: None }
    }
}

impl VerifyOptions {
    pub fn catalog(&self) -> &Catalog {
        match &self.catalog {
            Some(c) => c,
            None => Catalog::embedded(),
        }
    }
}

pub fn run_suite(suite: Suite, opts: &VerifyOptions) -> Result<SuiteReport> {
    let start = Instant::now();
    let mut report = match suite {
        Suite::LensTables => lens_tables()?,
        Suite::Lemma42 => lemma42(500)?,
        Suite::Pruning => pruning(opts)?,
        Suite::Progression => progression(opts)?,
        Suite::Reconcile => reconcile(opts)?,
    };
    report.elapsed = start.elapsed();
    Ok(report)
}

/// Golden rows, conjugation symmetry for `p <= 200`, and agreement of the
/// rational-surgery formula for the trefoil with the filling tables.
pub fn lens_tables() -> Result<SuiteReport> {
    let mut rep = SuiteReport::new(Suite::LensTables);
    for (p, q, row) in GOLDEN_LENS_ROWS {
        let got = d_lens_table(p, q)?;
        let want: Vec<Rational> = row.iter().map(|&(n, d)| Rational::new(n, d)).collect();
        rep.check(got.values() == want.as_slice(), || format!("d(L({p},{q})) = {:?}", got.values()));
    }
    for p in 1..=200u64 {
        for q in 0..p.max(1) {
            if q.gcd(&p) != 1 {
                continue;
            }
            let t = d_lens_table(p, q as i64)?;
            rep.check(t.is_conjugation_symmetric(), || format!("L({p},{q}) not conjugation symmetric"));
            if q >= 1 {
                let f = d_trefoil_filling(p, q)?;
                rep.check(f.is_conjugation_symmetric(), || format!("T({p}/{q}) not conjugation symmetric"));
            }
        }
    }
    let trefoil = TSequence::trefoil();
    for s in enumerate_slopes(230) {
        let lhs = d_rational_surgery(s.p, s.q, &trefoil)?;
        let rhs = d_trefoil_filling(s.p, s.q)?;
        rep.check(lhs.values() == rhs.values(), || format!("trefoil surgery {}/{} differs from filling", s.p, s.q));
    }
    Ok(rep)
}

/// Closed form against the recursion for every `q <= q_max`, `r`, `ζ` and `i`.
pub fn lemma42(q_max: u64) -> Result<SuiteReport> {
    let mut rep = SuiteReport::new(Suite::Lemma42);
    for r in [3u8, 4, 5] {
        let r64 = r as u64;
        for zeta in Sign::BOTH {
            for q in (2 * r64 + 1)..=q_max {
                if q.gcd(&r64) != 1 {
                    continue;
                }
                let lens_q = if zeta == Sign::Plus { r64 } else { q - r64 };
                let table = d_lens_table(q, lens_q as i64)?;
                for i in 0..q {
                    let closed = lemma42_closed_form(q, zeta, r, q % r64, i)?;
                    rep.check(closed == table.get(i), || {
                        format!("q={q} r={r} zeta={zeta} i={i}: {closed} vs {}", table.get(i))
                    });
                }
            }
        }
    }
    Ok(rep)
}

/// Full scan against the pruned search, with the default threshold and with
/// windows forced on for every `p > 52`.
pub fn pruning(opts: &VerifyOptions) -> Result<SuiteReport> {
    let mut rep = SuiteReport::new(Suite::Pruning);
    let cfg = |mode| SearchConfig { p_max: opts.p_max, mode, jobs: opts.jobs };
    let full = search(&cfg(SearchMode::FullScan))?;
    for mode in [SearchMode::pruned(), SearchMode::Pruned { threshold: 0 }] {
        let pruned = search(&cfg(mode))?;
        rep.check(pruned == full, || {
            format!("{mode:?}: {} candidates vs {} from the full scan", pruned.len(), full.len())
        });
    }
    rep.notes.push(format!("{} candidates up to p = {}", full.len(), opts.p_max));
    Ok(rep)
}

/// Draws a slope with `p` in `(lo, hi)` for the given family.
pub fn sample_slope(rng: &mut impl Rng, r: u8, zeta: Sign, lo: u64, hi: u64) -> SlopeFamily {
    let r64 = r as i64;
    let q_lo = (lo as i64 - zeta.value() * r64) / 6 + 1;
    let q_hi = (hi as i64 - zeta.value() * r64) / 6 - 1;
    loop {
        let q = rng.gen_range(q_lo..=q_hi) as u64;
        if let Ok(s) = SlopeFamily::new(q, r, zeta) {
            if s.p > lo && s.p < hi {
                return s;
            }
        }
    }
}

/// Sampled large slopes; every `a` in the windows must be rejected by the
/// progression test, for both signs.
pub fn progression(opts: &VerifyOptions) -> Result<SuiteReport> {
    let mut rep = SuiteReport::new(Suite::Progression);
    let (lo, hi) = (1_000_000u64, 12_000_000u64);
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let families: Vec<(u8, Sign)> = [3u8, 4, 5].into_iter().flat_map(|r| Sign::BOTH.map(|z| (r, z))).collect();
    let slopes: Vec<SlopeFamily> = (0..opts.samples)
        .map(|k| {
            let (r, zeta) = families[k % families.len()];
            sample_slope(&mut rng, r, zeta, lo, hi)
        })
        .collect();
    debug_assert!(slopes.iter().all(|s| s.p > PROGRESSION_MIN_P));

    let work = || -> Result<Vec<(u64, Vec<String>)>> {
        slopes
            .par_iter()
            .map(|s| {
                let mut tested = 0u64;
                let mut survivors = vec![];
                let window = window_union(s.p, s.r);
                for eps in Sign::BOTH {
                    let test = ProgressionTest::new(s, eps, theta_of(s.q, eps, s.r, s.s))?;
                    for &a in &window {
                        tested += 1;
                        if !test.rejects(a) {
                            survivors
                                .push(format!("{}/{} (r={}, zeta={}) eps={eps} a={a} survives", s.p, s.q, s.r, s.zeta));
                        }
                    }
                }
                Ok((tested, survivors))
            })
            .collect()
    };
    let results = match opts.jobs {
        Some(j) => rayon::ThreadPoolBuilder::new()
            .num_threads(j.max(1))
            .build()
            .map_err(|e| crate::Error::Precondition(e.to_string()))?
            .install(work)?,
        None => work()?,
    };
    for (tested, survivors) in results {
        rep.checks += tested;
        rep.failures.extend(survivors);
    }
    let per_family: Vec<String> = families
        .iter()
        .map(|&(r, z)| {
            let n = slopes.iter().filter(|s| s.r == r && s.zeta == z).count();
            format!("r={r} zeta={z}: {n}")
        })
        .collect();
    rep.notes.push(format!(
        "{} slopes with p in ({lo}, {hi}), seed {}; {}",
        slopes.len(),
        opts.seed,
        per_family.join(", ")
    ));
    Ok(rep)
}

pub fn reconcile(opts: &VerifyOptions) -> Result<SuiteReport> {
    let mut rep = SuiteReport::new(Suite::Reconcile);
    let cands = search(&SearchConfig { p_max: opts.p_max, mode: SearchMode::pruned(), jobs: opts.jobs })?;
    let table = verify_tables(opts.catalog(), &cands, opts.p_max);
    rep.checks = (table.table3_rows + table.table4_rows + table.candidates) as u64;
    rep.failures = table.issues.clone();
    rep.notes.extend(table.to_string().lines().skip(1).map(|l| l.trim().to_string()));
    rep.notes.pop();
    Ok(rep)
}
