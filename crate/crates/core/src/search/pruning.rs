//! Analytic pruning for large `p`.
//!
//! With `b = (θp + q - 1)/2` fixed by parity once `p > 52`, the only
//! admissible `a` lie within `sqrt(11rp/6)` of some `mp/6`, and for `p > 767`
//! the consecutive differences `Δ(6k) - Δ(6k+1)` follow an arithmetic
//! progression `Ak + B + C_k` that must stay in `{0, 2}`.

use num_integer::Integer;

use super::{a_max, Sign, SlopeFamily};
use crate::correction_terms::d_lens;
use crate::error::{Error, Result};
use crate::rational::Rational;

/// Below or at this `p` both values of `b` have to be tried.
pub const THETA_MIN_P: u64 = 52;

/// The progression identity needs `p` above this.
pub const PROGRESSION_MIN_P: u64 = 767;

fn parity_complement(n: i64) -> u8 {
    1 - n.rem_euclid(2) as u8
}

/// θ selecting `b = (θp + q - 1)/2` for `p > 52`.
///
/// For `r = 3, 5` this is `1 - (q mod 2)`; for `r = 4` with `q = 4l + s`
/// it is `1 - ((s + ε)/2 mod 2)`.
pub fn theta_of(q: u64, eps: Sign, r: u8, s: u64) -> u8 {
    if r == 4 {
        parity_complement((s as i64 + eps.value()) / 2)
    } else {
        parity_complement(q as i64)
    }
}

pub fn b_for_theta(p: u64, q: u64, theta: u8) -> u64 {
    (theta as u64 * p + q - 1) / 2
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ThetaParams {
    pub theta: u8,
    /// `0 <= a - mq + (θζr + q - 1)/2 < q`
    pub m: u8,
    /// 1 exactly when `3θ + m = 6`.
    pub h: u8,
}

/// `(θζr + q - 1)/2`; integral for every valid slope and its θ.
fn offset(slope: &SlopeFamily, theta: u8) -> i128 {
    let num = theta as i128 * slope.zeta.value() as i128 * slope.r as i128 + slope.q as i128 - 1;
    debug_assert!(num % 2 == 0);
    num / 2
}

pub fn theta_params(slope: &SlopeFamily, theta: u8, a: u64) -> Option<ThetaParams> {
    let m = Integer::div_floor(&(a as i128 + offset(slope, theta)), &(slope.q as i128));
    if !(0..=3).contains(&m) {
        return None;
    }
    let m = m as u8;
    let h = u8::from(3 * theta + m == 6);
    Some(ThetaParams { theta, m, h })
}

/// `a` in `[lo, hi]` with `|a - mp/6| < sqrt(11rp/6)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AWindow {
    pub m: u8,
    pub lo: u64,
    pub hi: u64,
}

impl AWindow {
    pub fn contains(&self, a: u64) -> bool {
        (self.lo..=self.hi).contains(&a)
    }

    pub fn width(&self) -> u64 {
        self.hi + 1 - self.lo
    }
}

/// Largest `x >= 0` with `x^2 < n`, for `n >= 1`.
fn isqrt_strict(n: u128) -> u128 {
    (n - 1).isqrt()
}

/// The four windows around `mp/6`, clipped to `[1, a_max(p)]`; empty windows
/// are dropped.
///
/// `|a - mp/6| < sqrt(11rp/6)` is `(6a - mp)^2 < 66rp`, which is solved
/// exactly in integers.
pub fn a_windows(p: u64, r: u8) -> Vec<AWindow> {
    let bound = 66 * r as u128 * p as u128;
    let x = isqrt_strict(bound) as i128;
    let top = a_max(p) as i128;
    (0u8..=3)
        .filter_map(|m| {
            let centre = m as i128 * p as i128;
            let lo = Integer::div_ceil(&(centre - x), &6).max(1);
            let hi = Integer::div_floor(&(centre + x), &6).min(top);
            (lo <= hi).then_some(AWindow { m, lo: lo as u64, hi: hi as u64 })
        })
        .collect()
}

/// Sorted, deduplicated `a` values covered by any window.
pub fn window_union(p: u64, r: u8) -> Vec<u64> {
    let mut out: Vec<u64> = a_windows(p, r).iter().flat_map(|w| w.lo..=w.hi).collect();
    out.sort_unstable();
    out.dedup();
    out
}

/// `d(L(q, (1-ζ)/2 q + ζr), i) = ζ((2i + 1 - q - ζr)^2/(4qr) - 1/4 - d(L(r, s), i mod r))`
/// for `0 <= i < q`, `q > 2r`, `s = q mod r`.
pub fn lemma42_closed_form(q: u64, zeta: Sign, r: u8, s: u64, i: u64) -> Result<Rational> {
    let r64 = r as u64;
    if !(3..=5).contains(&r) {
        return Err(Error::Precondition(format!("r = {r} is not 3, 4 or 5")));
    }
    if q <= 2 * r64 || q.gcd(&r64) != 1 || s != q % r64 {
        return Err(Error::Precondition(format!("need q > 2r, gcd(q, r) = 1, s = q mod r; got q={q}, r={r}, s={s}")));
    }
    if i >= q {
        return Err(Error::IndexOutOfRange { i: i as i64, bound: q as i64 });
    }
    let z = zeta.value() as i128;
    let (qi, ri, ii) = (q as i128, r as i128, i as i128);
    let c = 2 * ii + 1 - qi - z * ri;
    let small = d_lens(r64, s as i64, i % r64)?;
    let inner = Rational::new(c * c, 4 * qi * ri) - Rational::new(1, 4) - small;
    Ok(inner.scale(z))
}

/// Largest `k <= 6r` with `0 <= k < (sqrt(6) sqrt(p) / (13 sqrt(11r)) - 1)/6`,
/// i.e. `(6k + 1)^2 * 1859 r < 6p`. `None` when not even `k = 0` qualifies.
pub fn progression_k_max(p: u64, r: u8) -> Option<u64> {
    let fits = |k: u64| {
        let lhs = (6 * k as u128 + 1).pow(2) * 169 * 11 * r as u128;
        lhs < 6 * p as u128
    };
    if !fits(0) {
        return None;
    }
    let mut k = 0;
    while k < 6 * r as u64 && fits(k + 1) {
        k += 1;
    }
    Some(k)
}

/// The decomposition `Δ(6k) - Δ(6k+1) = Ak + B + C_k`.
#[derive(Debug, Clone)]
pub struct ProgressionTerms {
    pub params: ThetaParams,
    pub slope_coef: Rational,
    pub intercept: Rational,
    eps_zeta: i128,
    offset: i128,
    a: i128,
    small_table: Vec<Rational>,
}

impl ProgressionTerms {
    /// `C_k = εζ (d(L(r,s), j_k) - d(L(r,s), i_k))`.
    pub fn c_k(&self, slope: &SlopeFamily, k: u64) -> Rational {
        let (p, q, r) = (slope.p as i128, slope.q as i128, slope.r as i128);
        let (k, m) = (k as i128, self.params.m as i128);
        let i_k = (self.offset + 6 * k * self.a - k * m * p).rem_euclid(r);
        let j_k = (self.offset + (6 * k + 1) * self.a - k * m * p - m * q).rem_euclid(r);
        (self.small_table[j_k as usize] - self.small_table[i_k as usize]).scale(self.eps_zeta)
    }

    pub fn value(&self, slope: &SlopeFamily, k: u64) -> Rational {
        self.slope_coef.scale(k as i128) + self.intercept + self.c_k(slope, k)
    }
}

/// Everything in the progression test that depends only on the slope, sign
/// and θ, for testing many `a`.
#[derive(Debug, Clone)]
pub struct ProgressionTest {
    slope: SlopeFamily,
    eps: Sign,
    theta: u8,
    windows: Vec<AWindow>,
    k_max: Option<u64>,
    small_table: Vec<Rational>,
    /// `4r d(L(r,s), i)`, always integral.
    small_scaled: Vec<i128>,
}

impl ProgressionTest {
    pub fn new(slope: &SlopeFamily, eps: Sign, theta: u8) -> Result<Self> {
        if slope.p <= PROGRESSION_MIN_P {
            return Err(Error::Precondition(format!(
                "progression test needs p > {PROGRESSION_MIN_P}, got {}",
                slope.p
            )));
        }
        let r64 = slope.r as u64;
        let small_table = (0..r64).map(|i| d_lens(r64, slope.s as i64, i)).collect::<Result<Vec<_>>>()?;
        let small_scaled = small_table
            .iter()
            .map(|d| {
                let v = d.scale(4 * r64 as i128);
                v.is_integer().then(|| v.numer()).ok_or(Error::Overflow)
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(ProgressionTest {
            slope: *slope,
            eps,
            theta,
            windows: a_windows(slope.p, slope.r),
            k_max: progression_k_max(slope.p, slope.r),
            small_table,
            small_scaled,
        })
    }

    /// `A` and `B` for this `a`; `None` if no `m` in `0..=3` fits `a`.
    pub fn terms(&self, a: u64) -> Option<ProgressionTerms> {
        let slope = &self.slope;
        let params = theta_params(slope, self.theta, a)?;
        let (p, q, r) = (slope.p as i128, slope.q as i128, slope.r as i128);
        let e = self.eps.value() as i128;
        let z = slope.zeta.value() as i128;
        let m = params.m as i128;
        let th = self.theta as i128;

        // (a - mp/6)^2 = (6a - mp)^2 / 36
        let dev = 6 * a as i128 - m * p;
        let sq = Rational::new(dev * dev, 36);
        let slope_coef = (sq * Rational::new(-72 * e * z, p * r)) - Rational::new(12, p);

        let chi = |v: i128| i128::from((0..q).contains(&v));
        let jump = chi(3 * th * q) - chi((3 * th + m - 6 * params.h as i128) * q);
        let intercept =
            (sq * Rational::new(-6 * z, p * r) + Rational::from_int(-m * (1 - th)) + Rational::new(m * m, 6)).scale(e)
                + Rational::from_int(2 * e * jump)
                + Rational::new(p - 1, p);

        Some(ProgressionTerms {
            params,
            slope_coef,
            intercept,
            eps_zeta: e * z,
            offset: offset(slope, self.theta),
            a: a as i128,
            small_table: self.small_table.clone(),
        })
    }

    /// See [`progression_reject`].
    ///
    /// Works with `D (Ak + B + C_k)` for `D = 12pr`, which clears every
    /// denominator, so the comparison with 0 and 2 stays exact in integers.
    pub fn rejects(&self, a: u64) -> bool {
        let slope = &self.slope;
        let Some(params) = theta_params(slope, self.theta, a) else {
            return false;
        };
        let own = self.windows.iter().find(|w| w.m == params.m);
        if !own.is_some_and(|w| w.contains(a)) {
            return true;
        }
        let (p, q, r) = (slope.p as i128, slope.q as i128, slope.r as i128);
        let e = self.eps.value() as i128;
        let z = slope.zeta.value() as i128;
        let m = params.m as i128;
        let th = self.theta as i128;
        let dev = 6 * a as i128 - m * p;
        let dev2 = dev * dev;
        let d = 12 * p * r;

        let a_d = -24 * e * z * dev2 - 144 * r;
        // A = 0 would need |a - mp/6| = sqrt(r/6), which no integer a attains
        if a_d == 0 {
            return true;
        }
        let Some(k_max) = self.k_max else {
            return false;
        };
        let chi = |v: i128| i128::from((0..q).contains(&v));
        let jump = chi(3 * th * q) - chi((3 * th + m - 6 * params.h as i128) * q);
        let b_d = e * (-2 * z * dev2 - 12 * p * r * m * (1 - th) + 2 * p * r * m * m)
            + 24 * p * r * e * jump
            + 12 * r * (p - 1);
        let off = offset(slope, self.theta);
        let a = a as i128;
        (0..=k_max as i128).any(|k| {
            let i_k = (off + 6 * k * a - k * m * p).rem_euclid(r) as usize;
            let j_k = (off + (6 * k + 1) * a - k * m * p - m * q).rem_euclid(r) as usize;
            let c_d = e * z * 3 * p * (self.small_scaled[j_k] - self.small_scaled[i_k]);
            let v = a_d * k + b_d + c_d;
            v != 0 && v != 2 * d
        })
    }

    /// Same decision as [`rejects`](Self::rejects), evaluated in rationals.
    pub fn rejects_rational(&self, a: u64) -> bool {
        let Some(terms) = self.terms(a) else {
            return false;
        };
        let own = self.windows.iter().find(|w| w.m == terms.params.m);
        if !own.is_some_and(|w| w.contains(a)) {
            return true;
        }
        if terms.slope_coef.is_zero() {
            return true;
        }
        let Some(k_max) = self.k_max else {
            return false;
        };
        let zero = Rational::ZERO;
        let two = Rational::from_int(2);
        (0..=k_max).any(|k| {
            let v = terms.value(&self.slope, k);
            v != zero && v != two
        })
    }
}

/// `A` and `B` for a given slope, sign, `a` and θ; `None` if no `m` in
/// `0..=3` fits `a`.
pub fn progression_terms(slope: &SlopeFamily, eps: Sign, a: u64, theta: u8) -> Result<Option<ProgressionTerms>> {
    Ok(ProgressionTest::new(slope, eps, theta)?.terms(a))
}

/// `true` when `a` is ruled out: it lies outside its own window, or some
/// admissible `k <= 6r` has `Ak + B + C_k ∉ {0, 2}`.
///
/// `false` means the map still has to go through the full Δ check. Requires
/// `p > 767`.
pub fn progression_reject(slope: &SlopeFamily, eps: Sign, a: u64, theta: u8) -> Result<bool> {
    Ok(ProgressionTest::new(slope, eps, theta)?.rejects(a))
}

/// `310 r (36r + 1)^2`: above this no T/O/I slope survives.
pub fn completeness_bound(r: u8) -> u64 {
    let r = r as u64;
    310 * r * (36 * r + 1).pow(2)
}
