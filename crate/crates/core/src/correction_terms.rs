//! Correction terms of lens spaces and of Dehn fillings of the right-handed
//! trefoil exterior.
//!
//! Spin^c structures on a space obtained by `p/q` surgery are labelled by
//! `Z/pZ`. Lens space values come from the two-term continued-fraction
//! recursion
//!
//! ```text
//! d(-L(p,q), i) = 1/4 - (2i + 1 - p - q)^2 / (4pq) - d(-L(q, p mod q), i mod q)
//! ```
//!
//! with `d(S^3, 0) = 0`, and `d(L(p,q), i) = -d(-L(p,q), i)`.

use std::collections::HashMap;
use std::sync::Arc;

use num_integer::Integer;
use parking_lot::RwLock;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::rational::Rational;

/// A lens space `L(p, q)` with `q` reduced into `[1, p)`.
///
/// `p = 1` is the three-sphere and is stored with `q = 0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct LensSpec {
    p: u64,
    q: u64,
}

impl LensSpec {
    pub fn new(p: u64, q: i64) -> Result<Self> {
        if p == 0 {
            return Err(Error::ZeroModulus);
        }
        let q = q.rem_euclid(p as i64) as u64;
        if p == 1 {
            return Ok(LensSpec { p: 1, q: 0 });
        }
        let g = p.gcd(&q);
        if g != 1 {
            return Err(Error::NotCoprime { p: p as i64, q: q as i64, gcd: g as i64 });
        }
        Ok(LensSpec { p, q })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn q(&self) -> u64 {
        self.q
    }
}

/// `d(-L(p,q), i)` for `0 <= i < p + q`, already validated.
fn d_neg_lens(mut p: u64, mut q: u64, mut i: u64) -> Rational {
    let mut acc = Rational::ZERO;
    let mut sign: i128 = 1;
    while p > 1 && q > 0 {
        let (pp, qq, ii) = (p as i128, q as i128, i as i128);
        let c = 2 * ii + 1 - pp - qq;
        let term = Rational::new(1, 4) - Rational::new(c * c, 4 * pp * qq);
        acc = if sign > 0 { acc + term } else { acc - term };
        sign = -sign;
        let r = p % q;
        i %= q;
        p = q;
        q = r;
    }
    acc
}

/// `d(L(p, q), i)`.
///
/// `q` may be any integer coprime to `p`; it is reduced mod `p` first. The
/// index may range over `[0, p + q)` (with `q` reduced), matching the domain on
/// which the recursion is stated.
pub fn d_lens(p: u64, q: i64, i: u64) -> Result<Rational> {
    let spec = LensSpec::new(p, q)?;
    d_lens_spec(spec, i)
}

pub fn d_lens_spec(spec: LensSpec, i: u64) -> Result<Rational> {
    let bound = spec.p + spec.q;
    if i >= bound.max(1) {
        return Err(Error::IndexOutOfRange { i: i as i64, bound: bound as i64 });
    }
    Ok(-d_neg_lens(spec.p, spec.q, i))
}

/// `(p + q - 1 - i) mod p`: the label of the conjugate Spin^c structure.
pub fn conjugate_index(p: u64, q: u64, i: u64) -> u64 {
    let p128 = p as u128;
    let shifted = p128 + (q as u128 % p128) + p128 - 1 - (i as u128 % p128);
    (shifted % p128) as u64
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum TableSource {
    Lens(LensSpec),
    /// `p/q` filling of the right-handed trefoil exterior.
    TrefoilFilling {
        p: u64,
        q: u64,
    },
    /// `p/q` surgery on an L-space knot with a given torsion sequence.
    KnotSurgery {
        p: u64,
        q: u64,
    },
}

/// Correction terms indexed by `i` in `[0, p)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DTable {
    source: TableSource,
    p: u64,
    q: u64,
    values: Vec<Rational>,
}

impl DTable {
    pub(crate) fn from_parts(source: TableSource, p: u64, q: u64, values: Vec<Rational>) -> Self {
        debug_assert_eq!(values.len() as u64, p);
        DTable { source, p, q, values }
    }

    pub fn source(&self) -> TableSource {
        self.source
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    /// The `q` used for the conjugation `i -> p + q - 1 - i`.
    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &[Rational] {
        &self.values
    }

    /// Value at `i mod p`.
    pub fn get(&self, i: u64) -> Rational {
        self.values[(i % self.p) as usize]
    }

    pub fn conjugate(&self, i: u64) -> u64 {
        conjugate_index(self.p, self.q, i)
    }

    /// Checks `d(s) = d(Js)` on every label.
    pub fn is_conjugation_symmetric(&self) -> bool {
        (0..self.p).all(|i| self.get(i) == self.get(self.conjugate(i)))
    }
}

pub fn d_lens_table(p: u64, q: i64) -> Result<DTable> {
    let spec = LensSpec::new(p, q)?;
    Ok(lens_table(spec))
}

fn lens_table(spec: LensSpec) -> DTable {
    let values = (0..spec.p).map(|i| -d_neg_lens(spec.p, spec.q, i)).collect();
    DTable::from_parts(TableSource::Lens(spec), spec.p, spec.q, values)
}

fn check_filling_slope(p: u64, q: u64) -> Result<()> {
    if p == 0 {
        return Err(Error::ZeroModulus);
    }
    if q == 0 || q > p {
        return Err(Error::Precondition(format!("trefoil filling needs p >= q >= 1, got {p}/{q}")));
    }
    let g = p.gcd(&q);
    if g != 1 {
        return Err(Error::NotCoprime { p: p as i64, q: q as i64, gcd: g as i64 });
    }
    Ok(())
}

/// `d(T(p/q), i) = d(L(p,q), i) - 2` for `i < q`, and `d(L(p,q), i)` otherwise.
///
/// Requires `p >= q >= 1`; equality only happens for the `1/1` filling.
pub fn d_trefoil_filling(p: u64, q: u64) -> Result<DTable> {
    check_filling_slope(p, q)?;
    let lens = lens_table(LensSpec::new(p, q as i64)?);
    Ok(trefoil_from_lens(&lens, p, q))
}

fn trefoil_from_lens(lens: &DTable, p: u64, q: u64) -> DTable {
    let values = lens
        .values()
        .iter()
        .enumerate()
        .map(|(i, &d)| if (i as u64) < q { d - Rational::from_int(2) } else { d })
        .collect();
    DTable::from_parts(TableSource::TrefoilFilling { p, q }, p, q % p.max(1), values)
}

/// Single value of the trefoil filling table, without building the table.
pub fn d_trefoil_filling_at(p: u64, q: u64, i: u64) -> Result<Rational> {
    check_filling_slope(p, q)?;
    let i = i % p;
    let d = d_lens(p, q as i64, i)?;
    Ok(if i < q { d - Rational::from_int(2) } else { d })
}

/// Shared memo of lens and trefoil-filling tables.
///
/// Safe to share across worker threads; lookups of existing tables only take a
/// read lock.
#[derive(Default)]
pub struct LensCache {
    lens: RwLock<HashMap<LensSpec, Arc<DTable>>>,
    trefoil: RwLock<HashMap<(u64, u64), Arc<DTable>>>,
}

impl LensCache {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn lens(&self, p: u64, q: i64) -> Result<Arc<DTable>> {
        let spec = LensSpec::new(p, q)?;
        if let Some(t) = self.lens.read().get(&spec) {
            return Ok(Arc::clone(t));
        }
        let table = Arc::new(lens_table(spec));
        Ok(Arc::clone(self.lens.write().entry(spec).or_insert(table)))
    }

    pub fn trefoil(&self, p: u64, q: u64) -> Result<Arc<DTable>> {
        if let Some(t) = self.trefoil.read().get(&(p, q)) {
            return Ok(Arc::clone(t));
        }
        check_filling_slope(p, q)?;
        let lens = self.lens(p, q as i64)?;
        let table = Arc::new(trefoil_from_lens(&lens, p, q));
        Ok(Arc::clone(self.trefoil.write().entry((p, q)).or_insert(table)))
    }

    pub fn len(&self) -> usize {
        self.lens.read().len() + self.trefoil.read().len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q as r;

    #[test]
    fn three_sphere() {
        assert_eq!(d_lens(1, 1, 0).unwrap(), Rational::ZERO);
        assert_eq!(d_lens_table(1, 0).unwrap().values(), &[Rational::ZERO]);
    }

    #[test]
    fn l31_row() {
        let got: Vec<_> = (0..3).map(|i| d_lens(3, 1, i).unwrap()).collect();
        assert_eq!(got, vec![r(1, 2), r(-1, 6), r(-1, 6)]);
    }

    #[test]
    fn l54_row() {
        let t = d_lens_table(5, 4).unwrap();
        assert_eq!(t.values(), &[r(-1, 5), r(1, 5), r(1, 5), r(-1, 5), r(-1, 1)]);
    }

    #[test]
    fn l51_closed_form_point() {
        assert_eq!(d_lens(5, 1, 0).unwrap(), r(1, 1));
    }

    #[test]
    fn q_is_normalized() {
        assert_eq!(d_lens_table(5, -1).unwrap(), d_lens_table(5, 4).unwrap());
        assert_eq!(d_lens_table(7, 9).unwrap(), d_lens_table(7, 2).unwrap());
    }

    #[test]
    fn wide_index_range() {
        // the recursion itself is stated for 0 <= i < p + q
        assert!(d_lens(5, 3, 7).is_ok());
        assert!(matches!(d_lens(5, 3, 8), Err(Error::IndexOutOfRange { .. })));
    }

    #[test]
    fn rejects_non_coprime() {
        assert!(matches!(d_lens(4, 2, 0), Err(Error::NotCoprime { gcd: 2, .. })));
        assert!(matches!(d_lens_table(6, 3), Err(Error::NotCoprime { .. })));
        assert!(matches!(d_lens(0, 1, 0), Err(Error::ZeroModulus)));
    }

    #[test]
    fn conjugation_examples() {
        assert_eq!(conjugate_index(7, 2, 0), 1);
        assert_eq!(conjugate_index(7, 2, 4), 4);
        for p in 1..20 {
            for i in 0..p {
                assert_eq!(conjugate_index(p, 1, i), (p - i) % p);
            }
        }
    }

    #[test]
    fn trefoil_filling_shift() {
        let t = d_trefoil_filling(3, 1).unwrap();
        assert_eq!(t.values(), &[r(-3, 2), r(-1, 6), r(-1, 6)]);

        let lens = d_lens_table(7, 2).unwrap();
        let tref = d_trefoil_filling(7, 2).unwrap();
        for i in 0..7u64 {
            let shift = if i < 2 { Rational::from_int(2) } else { Rational::ZERO };
            assert_eq!(tref.get(i), lens.get(i) - shift);
        }
        assert!(tref.is_conjugation_symmetric());
        assert_eq!(d_trefoil_filling_at(7, 2, 2).unwrap(), d_lens(7, 2, 2).unwrap());
    }

    #[test]
    fn trefoil_filling_preconditions() {
        assert!(d_trefoil_filling(1, 1).is_ok());
        assert!(d_trefoil_filling(2, 3).is_err());
        assert!(d_trefoil_filling(6, 3).is_err());
        assert!(d_trefoil_filling(5, 0).is_err());
    }

    #[test]
    fn cache_matches_direct() {
        let cache = LensCache::new();
        let a = cache.lens(11, 3).unwrap();
        let b = cache.lens(11, 14).unwrap();
        assert!(Arc::ptr_eq(&a, &b));
        assert_eq!(*a, d_lens_table(11, 3).unwrap());
        assert_eq!(*cache.trefoil(11, 3).unwrap(), d_trefoil_filling(11, 3).unwrap());
        assert_eq!(cache.len(), 2);
    }
}
