//! Alexander polynomials and torsion coefficients of L-space knots.
//!
//! A symmetric Alexander polynomial `a_0 + sum_{i>0} a_i (T^i + T^-i)` is
//! stored densely as `[a_0, .., a_g]`. Its torsion coefficients are
//! `t_i = sum_{j>=1} j a_{i+j}`, with inverse `a_i = t_{i-1} - 2 t_i + t_{i+1}`.

use std::fmt;

use num_integer::Integer;
use serde::Serialize;

use crate::correction_terms::{d_lens_spec, DTable, LensSpec, TableSource};
use crate::error::{Error, Result};
use crate::rational::Rational;

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct AlexanderPoly {
    coeffs: Vec<i64>,
}

impl AlexanderPoly {
    /// `coeffs = [a_0, a_1, .., a_g]`.
    pub fn new(coeffs: Vec<i64>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::Precondition("empty coefficient list".into()));
        }
        if coeffs.len() > 1 && *coeffs.last().unwrap() == 0 {
            return Err(Error::ZeroLeadingCoefficient);
        }
        let at_one = coeffs[0] + 2 * coeffs[1..].iter().sum::<i64>();
        if at_one != 1 {
            return Err(Error::NotNormalized(at_one));
        }
        Ok(AlexanderPoly { coeffs })
    }

    pub fn unknot() -> Self {
        AlexanderPoly { coeffs: vec![1] }
    }

    pub fn coeffs(&self) -> &[i64] {
        &self.coeffs
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// Coefficients of `T^-g .. T^g`.
    pub fn laurent(&self) -> Vec<i64> {
        let g = self.degree();
        let mut out = vec![0; 2 * g + 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            out[g + i] = a;
            out[g - i] = a;
        }
        out
    }

    /// From a symmetric Laurent coefficient vector of odd length.
    fn from_laurent(full: &[i64]) -> Result<Self> {
        let mut lo = 0;
        let mut hi = full.len();
        while hi > lo + 1 && full[lo] == 0 && full[hi - 1] == 0 {
            lo += 1;
            hi -= 1;
        }
        let full = &full[lo..hi];
        if full.len().is_multiple_of(2) || full.iter().ne(full.iter().rev()) {
            return Err(Error::Precondition("Laurent polynomial is not symmetric".into()));
        }
        let g = full.len() / 2;
        AlexanderPoly::new(full[g..].to_vec())
    }

    /// `Δ(T^k)`.
    pub fn substitute_power(&self, k: usize) -> Self {
        if k <= 1 || self.degree() == 0 {
            return self.clone();
        }
        let mut coeffs = vec![0; self.degree() * k + 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            coeffs[i * k] = a;
        }
        AlexanderPoly { coeffs }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let a = self.laurent();
        let b = other.laurent();
        let mut out = vec![0i64; a.len() + b.len() - 1];
        for (i, &x) in a.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.iter().enumerate() {
                out[i + j] += x * y;
            }
        }
        // a product of normalized symmetric polynomials is one
        Self::from_laurent(&out).expect("product of Alexander polynomials")
    }
}

impl fmt::Display for AlexanderPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.coeffs.iter().map(|a| a.to_string()).collect();
        f.write_str(&parts.join(","))
    }
}

/// Torsion coefficients `t_0, .., t_g` of an L-space knot, with `t_g = 0`
/// and `t_s > 0` for `s < g`. Reads past `g` return 0.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(transparent)]
pub struct TSequence {
    t: Vec<u32>,
}

impl TSequence {
    /// Validates nonnegativity, steps of 0 or -1, and a terminal zero.
    /// Trailing zeros after the first one are dropped.
    pub fn new(values: &[i64]) -> Result<Self> {
        let bad = |msg: String| Err(Error::NotAdmissible(msg));
        if values.is_empty() {
            return bad("empty t-sequence".into());
        }
        if let Some(s) = values.iter().position(|&t| t < 0) {
            return bad(format!("t_{s} = {} is negative", values[s]));
        }
        for (s, w) in values.windows(2).enumerate() {
            let step = w[0] - w[1];
            if !(0..=1).contains(&step) {
                return bad(format!("t_{s} = {} to t_{} = {} is not a step of 0 or 1", w[0], s + 1, w[1]));
            }
        }
        let Some(g) = values.iter().position(|&t| t == 0) else {
            return bad("t-sequence never reaches 0".into());
        };
        Ok(TSequence { t: values[..=g].iter().map(|&t| t as u32).collect() })
    }

    pub fn unknot() -> Self {
        TSequence { t: vec![0] }
    }

    pub fn trefoil() -> Self {
        TSequence { t: vec![1, 0] }
    }

    pub fn get(&self, s: u64) -> u32 {
        self.t.get(s as usize).copied().unwrap_or(0)
    }

    pub fn as_slice(&self) -> &[u32] {
        &self.t
    }

    pub fn genus(&self) -> usize {
        self.t.len() - 1
    }

    /// Space-separated, as used in CSV output.
    pub fn to_spaced(&self) -> String {
        let parts: Vec<String> = self.t.iter().map(|t| t.to_string()).collect();
        parts.join(" ")
    }
}

impl fmt::Display for TSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.t.iter().map(|t| t.to_string()).collect();
        f.write_str(&parts.join(","))
    }
}

pub trait Genus {
    fn genus(&self) -> usize;
}

impl Genus for AlexanderPoly {
    fn genus(&self) -> usize {
        self.degree()
    }
}

impl Genus for TSequence {
    fn genus(&self) -> usize {
        TSequence::genus(self)
    }
}

pub fn genus<G: Genus>(x: &G) -> usize {
    x.genus()
}

/// `t_i = sum_j j a_{i+j}` for `i = 0..=g`, without any admissibility check.
pub fn torsion_values(delta: &AlexanderPoly) -> Vec<i64> {
    let a = delta.coeffs();
    let g = delta.degree();
    (0..=g).map(|i| (1..=g - i).map(|j| j as i64 * a[i + j]).sum()).collect()
}

pub fn t_from_alexander(delta: &AlexanderPoly) -> Result<TSequence> {
    TSequence::new(&torsion_values(delta))
}

pub fn alexander_from_t(t: &TSequence) -> Result<AlexanderPoly> {
    let g = t.genus() as u64;
    let tv = |s: u64| t.get(s) as i64;
    let mut coeffs: Vec<i64> = vec![0];
    coeffs.extend((1..=g).map(|i| tv(i - 1) - 2 * tv(i) + tv(i + 1)));
    coeffs[0] = 1 - 2 * coeffs[1..].iter().sum::<i64>();
    AlexanderPoly::new(coeffs)
}

fn check_lspace_range(p: u64, q: u64, t: &TSequence) -> Result<()> {
    let g = t.genus();
    if (p as i128) < (2 * g as i128 - 1) * q as i128 {
        return Err(Error::OutsideLSpaceRange { p, q, genus: g });
    }
    Ok(())
}

/// `d(S^3_K(p), i) = ((2i - p)^2 - p) / (4p) - 2 t_min(i, p - i)`.
pub fn d_integral_surgery(p: u64, t: &TSequence) -> Result<DTable> {
    if p == 0 {
        return Err(Error::ZeroModulus);
    }
    check_lspace_range(p, 1, t)?;
    let pi = p as i128;
    let values = (0..p)
        .map(|i| {
            let c = 2 * i as i128 - pi;
            let tor = t.get(i.min(p - i)) as i128;
            Rational::new(c * c - pi, 4 * pi) - Rational::from_int(2 * tor)
        })
        .collect();
    Ok(DTable::from_parts(TableSource::KnotSurgery { p, q: 1 }, p, 1 % p, values))
}

/// `d(S^3_K(p/q), i) = d(L(p,q), i) - 2 max(t_floor(i/q), t_floor((p+q-1-i)/q))`.
pub fn d_rational_surgery(p: u64, q: u64, t: &TSequence) -> Result<DTable> {
    if p == 0 || q == 0 {
        return Err(Error::Precondition(format!("surgery slope {p}/{q} must be positive")));
    }
    let spec = LensSpec::new(p, q as i64)?;
    check_lspace_range(p, q, t)?;
    let values = (0..p)
        .map(|i| {
            let lens = d_lens_spec(spec, i).expect("index below p");
            let tor = t.get(i / q).max(t.get((p + q - 1 - i) / q)) as i128;
            lens - Rational::from_int(2 * tor)
        })
        .collect();
    Ok(DTable::from_parts(TableSource::KnotSurgery { p, q }, p, spec.q(), values))
}

/// Exact division of integer polynomials (ascending coefficients) by a monic divisor.
fn div_monic(num: &[i64], den: &[i64]) -> Vec<i64> {
    debug_assert_eq!(*den.last().unwrap(), 1);
    let mut rem = num.to_vec();
    let dd = den.len() - 1;
    let qlen = num.len() - dd;
    let mut quot = vec![0; qlen];
    for k in (0..qlen).rev() {
        let c = rem[k + dd];
        quot[k] = c;
        if c != 0 {
            for (j, &d) in den.iter().enumerate() {
                rem[k + j] -= c * d;
            }
        }
    }
    debug_assert!(rem.iter().all(|&x| x == 0), "inexact division");
    quot
}

fn poly_mul(a: &[i64], b: &[i64]) -> Vec<i64> {
    let mut out = vec![0; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

/// `T^n - 1`, ascending.
fn xn_minus_one(n: usize) -> Vec<i64> {
    let mut v = vec![0; n + 1];
    v[0] = -1;
    v[n] = 1;
    v
}

/// Alexander polynomial of the torus knot `T(r, s)`, `r, s >= 2` coprime.
pub fn torus_alexander(r: u64, s: u64) -> Result<AlexanderPoly> {
    if r < 2 || s < 2 || r.gcd(&s) != 1 {
        return Err(Error::InvalidTorusKnot(r as i64, s as i64));
    }
    torus_or_unknot(r, s)
}

/// Like [`torus_alexander`], but `T(n, 1)` and `T(1, n)` are the unknot.
fn torus_or_unknot(r: u64, s: u64) -> Result<AlexanderPoly> {
    if r == 0 || s == 0 || r.gcd(&s) != 1 {
        return Err(Error::InvalidTorusKnot(r as i64, s as i64));
    }
    if r == 1 || s == 1 {
        return Ok(AlexanderPoly::unknot());
    }
    let (r, s) = (r as usize, s as usize);
    let num = poly_mul(&xn_minus_one(r * s), &xn_minus_one(1));
    let den = poly_mul(&xn_minus_one(r), &xn_minus_one(s));
    let quot = div_monic(&num, &den);
    let g = (r - 1) * (s - 1) / 2;
    debug_assert_eq!(quot.len(), 2 * g + 1);
    AlexanderPoly::new(quot[g..].to_vec())
}

/// `[p1,q1; p2,q2]`: the `(p1, q1)` cable of `T(p2, q2)`, with `q1` the
/// winding number: `Δ_{T(p2,q2)}(T^q1) · Δ_{T(p1,q1)}(T)`.
///
/// A companion with `p2 = 1` or `q2 = 1` is the unknot.
pub fn cable_alexander(p1: u64, q1: u64, p2: u64, q2: u64) -> Result<AlexanderPoly> {
    let pattern = torus_or_unknot(p1, q1)?;
    let companion = torus_or_unknot(p2, q2)?;
    Ok(companion.substitute_power(q1 as usize).mul(&pattern))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::correction_terms::{d_lens_table, d_trefoil_filling};
    use crate::rational::q as r;

    fn poly(c: &[i64]) -> AlexanderPoly {
        AlexanderPoly::new(c.to_vec()).unwrap()
    }

    fn tseq(c: &[i64]) -> TSequence {
        TSequence::new(c).unwrap()
    }

    #[test]
    fn torsion_examples() {
        assert_eq!(t_from_alexander(&poly(&[-1, 1])).unwrap(), tseq(&[1, 0]));
        assert_eq!(t_from_alexander(&poly(&[1, -1, 1])).unwrap(), tseq(&[1, 1, 0]));
        assert_eq!(t_from_alexander(&AlexanderPoly::unknot()).unwrap(), tseq(&[0]));
    }

    #[test]
    fn inverse_examples() {
        assert_eq!(alexander_from_t(&tseq(&[1, 0])).unwrap(), poly(&[-1, 1]));
        assert_eq!(alexander_from_t(&tseq(&[0])).unwrap(), poly(&[1]));
        assert_eq!(alexander_from_t(&tseq(&[1, 1, 0])).unwrap(), poly(&[1, -1, 1]));
    }

    #[test]
    fn normalization_errors() {
        assert!(matches!(AlexanderPoly::new(vec![1, 1]), Err(Error::NotNormalized(3))));
        assert!(matches!(AlexanderPoly::new(vec![1, 0]), Err(Error::ZeroLeadingCoefficient)));
        // figure eight: -T + 3 - 1/T is normalized but not an L-space knot
        let fig8 = poly(&[3, -1]);
        assert!(matches!(t_from_alexander(&fig8), Err(Error::NotAdmissible(_))));
    }

    #[test]
    fn tsequence_validation() {
        assert!(TSequence::new(&[2, 0]).is_err());
        assert!(TSequence::new(&[1, 2, 0]).is_err());
        assert!(TSequence::new(&[1, 1]).is_err());
        assert!(TSequence::new(&[-1, 0]).is_err());
        assert_eq!(tseq(&[1, 0, 0, 0]).as_slice(), &[1, 0]);
        assert_eq!(tseq(&[2, 1, 0]).get(17), 0);
    }

    #[test]
    fn genus_examples() {
        assert_eq!(genus(&poly(&[-1, 1])), 1);
        assert_eq!(genus(&poly(&[1, -1, 1])), 2);
        assert_eq!(genus(&tseq(&[0])), 0);
    }

    #[test]
    fn torus_examples() {
        assert_eq!(torus_alexander(3, 2).unwrap(), poly(&[-1, 1]));
        assert_eq!(torus_alexander(5, 2).unwrap(), poly(&[1, -1, 1]));
        assert!(torus_alexander(2, 1).is_err());
        assert!(torus_alexander(4, 2).is_err());
        // T(4,3) = T^3 - T^2 + 1 - T^-2 + T^-3 symmetrized
        assert_eq!(torus_alexander(4, 3).unwrap(), poly(&[1, 0, -1, 1]));
    }

    #[test]
    fn cable_of_unknot_is_torus() {
        assert_eq!(cable_alexander(9, 2, 1, 1).unwrap(), torus_alexander(9, 2).unwrap());
        assert_eq!(cable_alexander(7, 3, 2, 1).unwrap(), torus_alexander(7, 3).unwrap());
    }

    #[test]
    fn cable_genus() {
        // g = q1 g(companion) + g(pattern)
        let c = cable_alexander(9, 2, 3, 2).unwrap();
        assert_eq!(c.degree(), 2 + 4);
        assert!(t_from_alexander(&c).is_ok());
    }

    #[test]
    fn integral_surgery_on_unknot_is_lens() {
        for p in 1..30 {
            let t = d_integral_surgery(p, &TSequence::unknot()).unwrap();
            assert_eq!(t.values(), d_lens_table(p, 1).unwrap().values());
        }
    }

    #[test]
    fn integral_surgery_on_trefoil() {
        let t = d_integral_surgery(3, &TSequence::trefoil()).unwrap();
        assert_eq!(t.values(), &[r(-3, 2), r(-1, 6), r(-1, 6)]);
        assert!(t.is_conjugation_symmetric());
    }

    #[test]
    fn lspace_range_guard() {
        let t52 = tseq(&[1, 1, 0]);
        assert!(d_integral_surgery(3, &t52).is_ok());
        assert!(matches!(d_integral_surgery(2, &t52), Err(Error::OutsideLSpaceRange { .. })));
        assert!(d_rational_surgery(5, 2, &t52).is_err());
    }

    #[test]
    fn rational_surgery_examples() {
        let t = d_rational_surgery(5, 1, &TSequence::unknot()).unwrap();
        assert_eq!(t.values(), &[r(1, 1), r(1, 5), r(-1, 5), r(-1, 5), r(1, 5)]);
        assert_eq!(
            d_rational_surgery(7, 2, &TSequence::trefoil()).unwrap().values(),
            d_trefoil_filling(7, 2).unwrap().values()
        );
        let t52 = tseq(&[1, 1, 0]);
        assert_eq!(d_rational_surgery(9, 1, &t52).unwrap().values(), d_integral_surgery(9, &t52).unwrap().values());
    }
}
