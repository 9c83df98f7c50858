//! Search for integral surgeries on knots that produce T-, O- or I-type
//! spherical space forms.
//!
//! Every such manifold is `±T(p/q)`, a filling of the trefoil exterior with
//! `p = 6q + ζr`, `r ∈ {3, 4, 5}`. If `S^3_K(p) = ε T(p/q)` then for an affine
//! relabelling `φ(i) = ai + b` of `Z/pZ` the difference
//!
//! ```text
//! Δ(i) = d(L(p,1), i) - ε d(T(p/q), φ(i))
//! ```
//!
//! must equal `2 t_min(i, p-i)` for the torsion coefficients of `K`. The search
//! walks all slopes, signs and admissible maps and keeps every map whose Δ is
//! such a sequence.

mod pruning;

pub use pruning::{
    a_windows, b_for_theta, completeness_bound, lemma42_closed_form, progression_k_max, progression_reject,
    progression_terms, theta_of, theta_params, window_union, AWindow, ProgressionTerms, ProgressionTest, ThetaParams,
    PROGRESSION_MIN_P, THETA_MIN_P,
};

use std::cell::OnceCell;
use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_integer::Integer;
use rayon::prelude::*;
use serde::{Serialize, Serializer};

use crate::correction_terms::{d_lens_table, d_trefoil_filling, DTable, LensCache};
use crate::error::{Error, Result};
use crate::knot_invariants::TSequence;
use crate::rational::Rational;

/// Default `p` above which the pruned search switches to window scanning.
pub const DEFAULT_PRUNE_THRESHOLD: u64 = 10_000;

/// Tables for `p` at or below this are kept in the shared cache.
const CACHE_LIMIT: u64 = 4096;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sign {
    Minus,
    Plus,
}

impl Sign {
    pub const BOTH: [Sign; 2] = [Sign::Plus, Sign::Minus];

    pub fn value(self) -> i64 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }

    pub fn from_value(v: i64) -> Option<Sign> {
        match v {
            1 => Some(Sign::Plus),
            -1 => Some(Sign::Minus),
            _ => None,
        }
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value())
    }
}

impl Serialize for Sign {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_i64(self.value())
    }
}

/// A finite filling slope `p/q` of the trefoil exterior, `p = 6q + ζr`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct SlopeFamily {
    pub p: u64,
    pub q: u64,
    pub r: u8,
    pub zeta: Sign,
    /// `q mod r`
    pub s: u64,
}

impl SlopeFamily {
    pub fn new(q: u64, r: u8, zeta: Sign) -> Result<Self> {
        let forbidden = match r {
            3 => 3,
            4 => 2,
            5 => 5,
            _ => return Err(Error::Precondition(format!("r = {r} is not 3, 4 or 5"))),
        };
        if q == 0 || q.is_multiple_of(forbidden) {
            return Err(Error::Precondition(format!("q = {q} is not allowed for r = {r}")));
        }
        let p = 6 * q as i64 + zeta.value() * r as i64;
        if p < 1 || (p as u64) < q {
            return Err(Error::Precondition(format!("slope {p}/{q} is out of range")));
        }
        let p = p as u64;
        debug_assert_eq!(p.gcd(&q), 1);
        Ok(SlopeFamily { p, q, r, zeta, s: q % r as u64 })
    }

    /// Inverse of `p = 6q + ζr`, if `p/q` is a T-, O- or I-type slope.
    pub fn from_slope(p: u64, q: u64) -> Option<Self> {
        let diff = p as i64 - 6 * q as i64;
        let zeta = Sign::from_value(diff.signum())?;
        let r = u8::try_from(diff.unsigned_abs()).ok()?;
        SlopeFamily::new(q, r, zeta).ok()
    }

    pub fn kind(&self) -> char {
        match self.r {
            3 => 'T',
            4 => 'O',
            _ => 'I',
        }
    }
}

impl fmt::Display for SlopeFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.p, self.q)
    }
}

/// All T/O/I filling slopes with `p <= p_max`, sorted by `(p, q)`.
pub fn enumerate_slopes(p_max: u64) -> Vec<SlopeFamily> {
    let mut out = Vec::new();
    for r in 3u8..=5 {
        for zeta in Sign::BOTH {
            let q_max = (p_max as i64 - zeta.value() * r as i64).div_euclid(6);
            for q in 1..=q_max.max(0) as u64 {
                if let Ok(slope) = SlopeFamily::new(q, r, zeta) {
                    if slope.p <= p_max {
                        out.push(slope);
                    }
                }
            }
        }
    }
    out.sort_by_key(|s| (s.p, s.q));
    out.dedup();
    out
}

/// `φ(i) = ai + b mod p`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct AffineMap {
    pub a: u64,
    pub b: u64,
    pub p: u64,
}

impl AffineMap {
    pub fn apply(&self, i: u64) -> u64 {
        ((self.a as u128 * i as u128 + self.b as u128) % self.p as u128) as u64
    }
}

/// The integral members of `{(q-1)/2, (p+q-1)/2}`.
pub fn candidate_bs(p: u64, q: u64) -> Vec<u64> {
    [q - 1, p + q - 1].into_iter().filter(|v| v % 2 == 0).map(|v| v / 2).collect()
}

/// Largest admissible `a`: `a < p/2`, except that `a = 1` is kept for `p <= 2`
/// where the open range is empty but `Z/pZ` still has the identity.
pub fn a_max(p: u64) -> u64 {
    ((p.saturating_sub(1)) / 2).max(1)
}

/// Units `a` with `0 < a < p/2`.
pub fn a_range(p: u64) -> impl Iterator<Item = u64> {
    (1..=a_max(p)).filter(move |a| a.gcd(&p) == 1)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Candidate {
    pub slope: SlopeFamily,
    pub epsilon: Sign,
    pub map: AffineMap,
    pub t: TSequence,
}

impl Candidate {
    pub fn p(&self) -> u64 {
        self.slope.p
    }

    pub fn q(&self) -> u64 {
        self.slope.q
    }

    pub fn genus(&self) -> usize {
        self.t.genus()
    }

    fn sort_key(&self) -> (u64, u64, i64, &TSequence) {
        (self.slope.p, self.slope.q, self.epsilon.value(), &self.t)
    }
}

/// `d(L(p,1), ·)` and `d(T(p/q), ·)` for one slope.
struct SlopeTables {
    lens1: Arc<DTable>,
    trefoil: Arc<DTable>,
}

impl SlopeTables {
    fn new(slope: &SlopeFamily, cache: &LensCache) -> Result<Self> {
        let (p, q) = (slope.p, slope.q);
        if p <= CACHE_LIMIT {
            Ok(SlopeTables { lens1: cache.lens(p, 1)?, trefoil: cache.trefoil(p, q)? })
        } else {
            Ok(SlopeTables { lens1: Arc::new(d_lens_table(p, 1)?), trefoil: Arc::new(d_trefoil_filling(p, q)?) })
        }
    }

    fn delta(&self, eps: Sign, map: &AffineMap, i: u64) -> Rational {
        let t = self.trefoil.get(map.apply(i));
        let lens = self.lens1.get(i);
        match eps {
            Sign::Plus => lens - t,
            Sign::Minus => lens + t,
        }
    }
}

/// `Δ^ε_{a,b}(i)` for `i` in `[0, p)`.
pub fn delta_sequence(slope: &SlopeFamily, eps: Sign, map: &AffineMap) -> Result<Vec<Rational>> {
    if map.p != slope.p {
        return Err(Error::Precondition(format!("map modulus {} differs from p = {}", map.p, slope.p)));
    }
    let tables = SlopeTables::new(slope, &LensCache::new())?;
    Ok((0..slope.p).map(|i| tables.delta(eps, map, i)).collect())
}

/// Reads a torsion sequence off `Δ(i) = 2 t_min(i, p-i)`.
///
/// `None` unless every value is an even nonnegative integer, Δ is symmetric
/// under `i -> p - i`, the halves descend by steps of 0 or 1, the sequence
/// ends at `p/2` (p even: `t_{p/2} = 0`; p odd: `t_{(p-1)/2} <= 1`, followed
/// by a forced 0), and `p >= 2g - 1`.
pub fn extract_t(delta: &[Rational], p: u64) -> Option<TSequence> {
    if delta.len() as u64 != p || p == 0 {
        return None;
    }
    extract_t_with(p, |i| delta[i as usize])
}

/// [`extract_t`] over a lazily evaluated Δ, stopping at the first failure.
pub(crate) fn extract_t_with(p: u64, delta: impl Fn(u64) -> Rational) -> Option<TSequence> {
    let half = p / 2;
    let mut t: Vec<i64> = Vec::with_capacity(half as usize + 2);
    for j in 0..=half {
        let d = delta(j);
        let tj = d.half_if_even()? as i64;
        if tj < 0 {
            return None;
        }
        if let Some(&prev) = t.last() {
            if !(0..=1).contains(&(prev - tj)) {
                return None;
            }
        }
        if j > 0 && delta(p - j) != d {
            return None;
        }
        t.push(tj);
    }
    let last = *t.last()?;
    if p.is_multiple_of(2) {
        if last != 0 {
            return None;
        }
    } else {
        if last > 1 {
            return None;
        }
        if last == 1 {
            t.push(0);
        }
    }
    let seq = TSequence::new(&t).ok()?;
    ((p as i128) >= 2 * seq.genus() as i128 - 1).then_some(seq)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SearchMode {
    /// Every `a` in `(0, p/2)` and both `b` values.
    FullScan,
    /// One `b` (from θ) once `p > 52`; window scanning and progression
    /// rejection once `p > threshold`.
    Pruned { threshold: u64 },
}

impl SearchMode {
    pub fn pruned() -> Self {
        SearchMode::Pruned { threshold: DEFAULT_PRUNE_THRESHOLD }
    }
}

#[derive(Debug, Clone)]
pub struct SearchConfig {
    pub p_max: u64,
    pub mode: SearchMode,
    /// Worker threads; `None` uses the available parallelism.
    pub jobs: Option<usize>,
}

impl SearchConfig {
    pub fn new(p_max: u64, mode: SearchMode) -> Self {
        SearchConfig { p_max, mode, jobs: None }
    }

    pub fn with_jobs(mut self, jobs: usize) -> Self {
        self.jobs = Some(jobs);
        self
    }
}

/// Candidates over all slopes up to `p_max`, deduplicated by `(p, q, ε, t)`
/// (keeping the smallest `(a, b)`) and sorted by `(p, q, ε, t)`.
pub fn search(config: &SearchConfig) -> Result<Vec<Candidate>> {
    let slopes = enumerate_slopes(config.p_max);
    let cache = LensCache::new();
    let run =
        || -> Result<Vec<Vec<Candidate>>> { slopes.par_iter().map(|s| search_slope(s, config.mode, &cache)).collect() };
    let per_slope = match config.jobs {
        Some(jobs) => rayon::ThreadPoolBuilder::new()
            .num_threads(jobs.max(1))
            .build()
            .map_err(|e| Error::Precondition(e.to_string()))?
            .install(run)?,
        None => run()?,
    };
    let mut out: Vec<Candidate> = per_slope.into_iter().flatten().collect();
    out.sort_by(|x, y| x.sort_key().cmp(&y.sort_key()));
    Ok(out)
}

/// All candidates at one slope.
pub fn search_slope(slope: &SlopeFamily, mode: SearchMode, cache: &LensCache) -> Result<Vec<Candidate>> {
    let p = slope.p;
    // built on first use: above the progression threshold usually no `a` survives
    let tables: OnceCell<SlopeTables> = OnceCell::new();
    let (use_theta, threshold) = match mode {
        SearchMode::FullScan => (false, u64::MAX),
        SearchMode::Pruned { threshold } => (p > THETA_MIN_P, threshold.max(THETA_MIN_P)),
    };
    let windowed = p > threshold;
    let progression = windowed && p > PROGRESSION_MIN_P;

    let mut found: BTreeMap<(Sign, TSequence), AffineMap> = BTreeMap::new();
    for eps in Sign::BOTH {
        let theta = use_theta.then(|| theta_of(slope.q, eps, slope.r, slope.s));
        let bs = match theta {
            Some(th) => vec![b_for_theta(p, slope.q, th)],
            None => candidate_bs(p, slope.q),
        };
        let a_values: Vec<u64> = if windowed {
            window_union(p, slope.r).into_iter().filter(|a| a.gcd(&p) == 1).collect()
        } else {
            a_range(p).collect()
        };
        let tester = match (progression, theta) {
            (true, Some(th)) => Some(ProgressionTest::new(slope, eps, th)?),
            _ => None,
        };
        for a in a_values {
            if tester.as_ref().is_some_and(|t| t.rejects(a)) {
                continue;
            }
            let tables = match tables.get() {
                Some(t) => t,
                None => {
                    let built = SlopeTables::new(slope, cache)?;
                    tables.get_or_init(|| built)
                }
            };
            for &b in &bs {
                let map = AffineMap { a, b, p };
                if let Some(t) = extract_t_with(p, |i| tables.delta(eps, &map, i)) {
                    found.entry((eps, t)).or_insert(map);
                }
            }
        }
    }
    Ok(found.into_iter().map(|((epsilon, t), map)| Candidate { slope: *slope, epsilon, map, t }).collect())
}

/// Recomputes Δ from freshly built tables and checks `Δ(i) = 2 t_min(i, p-i)`.
pub fn verify_candidate(c: &Candidate) -> Result<bool> {
    let delta = delta_sequence(&c.slope, c.epsilon, &c.map)?;
    let p = c.p();
    Ok(delta
        .iter()
        .enumerate()
        .all(|(i, d)| *d == Rational::from_int(2 * c.t.get((i as u64).min(p - i as u64)) as i128)))
}
