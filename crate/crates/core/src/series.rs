//! Truncated formal power series over cyclotomic scalars.
//!
//! A series is known through degree `trunc`; everything above is unknown, and
//! binary operations keep the smaller of the two truncation orders. Storage is
//! a sparse exponent map, while the products and compositions run on dense
//! buffers internally.

use std::collections::BTreeMap;
use std::fmt;

use num_integer::Integer;

use crate::error::{GermError, Result};
use crate::scalar::CycloScalar;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SeriesOp {
    Add,
    Sub,
    Mul,
    Derivative,
}

#[derive(Clone, Debug)]
pub struct TruncatedSeries {
    trunc: usize,
    coeffs: BTreeMap<usize, CycloScalar>,
}

type Dense = Vec<CycloScalar>;

fn zeros(n: usize) -> Dense {
    vec![CycloScalar::zero(); n + 1]
}

/// Product through degree `n`.
fn mul_dense(a: &[CycloScalar], b: &[CycloScalar], n: usize) -> Dense {
    let mut out = zeros(n);
    let nb: Vec<(usize, &CycloScalar)> =
        b.iter().enumerate().take(n + 1).filter(|(_, c)| !c.is_zero()).collect();
    for (i, x) in a.iter().enumerate().take(n + 1) {
        if x.is_zero() {
            continue;
        }
        for &(j, y) in &nb {
            if i + j > n {
                break;
            }
            out[i + j] = &out[i + j] + &(x * y);
        }
    }
    out
}

/// `f(g)` through degree `n` by Horner's rule; `g` must have zero constant term.
fn compose_dense(f: &[CycloScalar], g: &[CycloScalar], n: usize) -> Dense {
    let top = f.iter().take(n + 1).rposition(|c| !c.is_zero());
    let Some(top) = top else { return zeros(n) };
    let mut acc = zeros(n);
    acc[0] = f[top].clone();
    for j in (0..top).rev() {
        acc = mul_dense(&acc, g, n);
        acc[0] = &acc[0] + &f[j];
    }
    acc
}

fn recip_dense(a: &[CycloScalar], n: usize) -> Result<Dense> {
    let inv0 = a[0].inverse().map_err(|_| GermError::NonUnitConstantTerm)?;
    let mut out = zeros(n);
    out[0] = inv0.clone();
    for k in 1..=n {
        let mut s = CycloScalar::zero();
        for j in 1..=k.min(a.len() - 1) {
            if !a[j].is_zero() && !out[k - j].is_zero() {
                s = s + &a[j] * &out[k - j];
            }
        }
        out[k] = -(&s * &inv0);
    }
    Ok(out)
}

fn derivative_dense(a: &[CycloScalar]) -> Dense {
    a.iter()
        .enumerate()
        .skip(1)
        .map(|(k, c)| c * &CycloScalar::from_integer(k as i64))
        .collect()
}

impl TruncatedSeries {
    pub fn new(terms: impl IntoIterator<Item = (usize, CycloScalar)>, trunc: usize) -> Self {
        let mut coeffs: BTreeMap<usize, CycloScalar> = BTreeMap::new();
        for (k, c) in terms {
            if k > trunc {
                continue;
            }
            let entry = coeffs.entry(k).or_insert_with(CycloScalar::zero);
            *entry = &*entry + &c;
        }
        coeffs.retain(|_, c| !c.is_zero());
        let conductor = coeffs.values().fold(1u32, |m, c| m.lcm(&c.conductor()));
        for c in coeffs.values_mut() {
            if c.conductor() != conductor {
                *c = c.lift_conductor_unchecked(conductor);
            }
        }
        TruncatedSeries { trunc, coeffs }
    }

    pub fn from_dense(dense: Vec<CycloScalar>, trunc: usize) -> Self {
        Self::new(dense.into_iter().enumerate(), trunc)
    }

    pub fn zero(trunc: usize) -> Self {
        Self::new([], trunc)
    }

    pub fn constant(c: CycloScalar, trunc: usize) -> Self {
        Self::new([(0, c)], trunc)
    }

    pub fn monomial(c: CycloScalar, k: usize, trunc: usize) -> Self {
        Self::new([(k, c)], trunc)
    }

    /// The series `z`.
    pub fn z(trunc: usize) -> Self {
        Self::monomial(CycloScalar::one(), 1, trunc)
    }

    pub fn trunc(&self) -> usize {
        self.trunc
    }

    /// Coefficient of `z^k`; zero when absent (including above the truncation).
    pub fn coeff(&self, k: usize) -> CycloScalar {
        self.coeffs.get(&k).cloned().unwrap_or_else(CycloScalar::zero)
    }

    /// Nonzero terms in increasing exponent order.
    pub fn terms(&self) -> impl Iterator<Item = (usize, &CycloScalar)> {
        self.coeffs.iter().map(|(k, c)| (*k, c))
    }

    pub fn conductor(&self) -> u32 {
        self.coeffs.values().next().map_or(1, |c| c.conductor())
    }

    /// Lowest exponent with a nonzero coefficient.
    pub fn valuation(&self) -> Option<usize> {
        self.coeffs.keys().next().copied()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn to_dense(&self, n: usize) -> Vec<CycloScalar> {
        let mut out = zeros(n);
        for (&k, c) in self.coeffs.range(..=n) {
            out[k] = c.clone();
        }
        out
    }

    pub fn truncate(&self, n: usize) -> Self {
        let n = n.min(self.trunc);
        TruncatedSeries { trunc: n, coeffs: self.coeffs.range(..=n).map(|(k, c)| (*k, c.clone())).collect() }
    }

    /// Re-declare the truncation order. Callers assert that the zero
    /// coefficients above the current order are genuinely known.
    pub(crate) fn with_trunc(mut self, n: usize) -> Self {
        self.coeffs.retain(|k, _| *k <= n);
        self.trunc = n;
        self
    }

    /// Each coefficient in its smallest conductor, then lifted to their lcm.
    pub fn simplified(&self) -> Self {
        Self::new(self.coeffs.iter().map(|(k, c)| (*k, c.minimal_form())), self.trunc)
    }

    pub fn scale(&self, c: &CycloScalar) -> Self {
        Self::new(self.coeffs.iter().map(|(k, x)| (*k, x * c)), self.trunc)
    }

    pub fn neg(&self) -> Self {
        Self::new(self.coeffs.iter().map(|(k, x)| (*k, -x)), self.trunc)
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.trunc.min(other.trunc);
        Self::new(self.coeffs.iter().chain(other.coeffs.iter()).map(|(k, c)| (*k, c.clone())), n)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        let n = self.trunc.min(other.trunc);
        self.mul_to(other, n)
    }

    /// Product through degree `n`, irrespective of the operands' truncations.
    pub(crate) fn mul_to(&self, other: &Self, n: usize) -> Self {
        Self::from_dense(mul_dense(&self.to_dense(n), &other.to_dense(n), n), n)
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut result = Self::constant(CycloScalar::one(), self.trunc);
        for _ in 0..e {
            result = result.mul(self);
        }
        result
    }

    pub fn derivative(&self) -> Self {
        let n = self.trunc.saturating_sub(1);
        Self::from_dense(derivative_dense(&self.to_dense(self.trunc)), n)
    }

    /// One ring operation chosen at run time; `g` is ignored for the derivative.
    pub fn ring_arith(&self, g: &Self, op: SeriesOp) -> Self {
        match op {
            SeriesOp::Add => self.add(g),
            SeriesOp::Sub => self.sub(g),
            SeriesOp::Mul => self.mul(g),
            SeriesOp::Derivative => self.derivative(),
        }
    }

    pub fn reciprocal(&self) -> Result<Self> {
        let n = self.trunc;
        Ok(Self::from_dense(recip_dense(&self.to_dense(n), n)?, n))
    }

    /// Divide by `z^k`, which must divide the series exactly.
    pub fn shift_down(&self, k: usize) -> Result<Self> {
        if self.coeffs.keys().any(|&e| e < k) {
            return Err(GermError::NonUnitDivision);
        }
        Ok(TruncatedSeries {
            trunc: self.trunc.saturating_sub(k),
            coeffs: self.coeffs.iter().map(|(e, c)| (e - k, c.clone())).collect(),
        })
    }

    /// `self(g)`.
    pub fn compose(&self, g: &Self) -> Result<Self> {
        if !g.coeff(0).is_zero() {
            return Err(GermError::NonzeroConstantTerm);
        }
        let n = self.trunc.min(g.trunc);
        Ok(Self::from_dense(compose_dense(&self.to_dense(n), &g.to_dense(n), n), n))
    }

    /// Compositional inverse by Newton iteration, which doubles the number of
    /// correct coefficients per step.
    pub fn comp_inverse(&self) -> Result<Self> {
        if !self.coeff(0).is_zero() {
            return Err(GermError::NonzeroConstantTerm);
        }
        let lin = self.coeff(1);
        if lin.is_zero() {
            return Err(GermError::NotInvertible);
        }
        let n = self.trunc;
        let f = self.to_dense(n);
        let df = derivative_dense(&f);
        let mut g = zeros(n);
        if n >= 1 {
            g[1] = lin.inverse()?;
        }
        let mut prec = 1;
        while prec < n {
            prec = (2 * prec + 1).min(n);
            let mut err = compose_dense(&f, &g, prec);
            err[1] = &err[1] - &CycloScalar::one();
            let slope = compose_dense(&df, &g, prec);
            let step = mul_dense(&err, &recip_dense(&slope, prec)?, prec);
            for k in 0..=prec {
                g[k] = &g[k] - &step[k];
            }
        }
        Ok(Self::from_dense(g, n))
    }

    /// Highest degree `d` such that both series agree in degrees `0..=d`,
    /// capped at the common truncation. `None` if even the constant terms differ.
    pub fn agreement(&self, other: &Self) -> Option<usize> {
        let n = self.trunc.min(other.trunc);
        let keys = self.coeffs.range(..=n).map(|(k, _)| *k).chain(other.coeffs.range(..=n).map(|(k, _)| *k));
        let first_diff = keys.filter(|&k| self.coeff(k) != other.coeff(k)).min();
        match first_diff {
            None => Some(n),
            Some(0) => None,
            Some(k) => Some(k - 1),
        }
    }
}

/// Equality up to the smaller truncation order.
impl PartialEq for TruncatedSeries {
    fn eq(&self, other: &Self) -> bool {
        self.agreement(other) == Some(self.trunc.min(other.trunc))
    }
}

impl fmt::Display for TruncatedSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&crate::format::series_text(self))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn poly(cs: &[i64], trunc: usize) -> TruncatedSeries {
        TruncatedSeries::new(cs.iter().enumerate().map(|(k, &c)| (k, CycloScalar::from_integer(c))), trunc)
    }

    #[test]
    fn ring_examples() {
        let a = poly(&[0, 1, 1], 4);
        let b = poly(&[0, 1, -1], 4);
        assert_eq!(a.ring_arith(&b, SeriesOp::Mul), poly(&[0, 0, 1, 0, -1], 4));
        let d = poly(&[0, 1, 0, 1], 6).ring_arith(&a, SeriesOp::Derivative);
        assert_eq!(d, poly(&[1, 0, 3], 5));
        assert_eq!(d.trunc(), 5);
        let s = poly(&[1, 1], 6).ring_arith(&poly(&[1, -1], 3), SeriesOp::Add);
        assert_eq!(s, poly(&[2], 3));
        assert_eq!(s.trunc(), 3);
    }

    #[test]
    fn reciprocal_examples() {
        let geo = poly(&[1, -1], 8).reciprocal().unwrap();
        assert_eq!(geo, poly(&[1; 9], 8));
        let sq = poly(&[1, 2, 1], 6).reciprocal().unwrap();
        assert_eq!(sq, poly(&[1, -2, 3, -4, 5, -6, 7], 6));
        assert_eq!(poly(&[0, 1], 4).reciprocal().unwrap_err(), GermError::NonUnitConstantTerm);
        let half = TruncatedSeries::constant(CycloScalar::ratio(1, 2), 3);
        assert_eq!(half.reciprocal().unwrap(), poly(&[2], 3));
    }

    #[test]
    fn composition_examples() {
        let f = poly(&[0, 1, 1], 6);
        assert_eq!(f.compose(&f).unwrap(), poly(&[0, 1, 2, 2, 1], 6));
        assert_eq!(f.compose(&TruncatedSeries::z(6)).unwrap(), f);
        assert_eq!(poly(&[1, 1], 5).compose(&poly(&[0, 2], 5)).unwrap(), poly(&[1, 2], 5));
        assert_eq!(f.compose(&poly(&[1, 1], 5)).unwrap_err(), GermError::NonzeroConstantTerm);
    }

    #[test]
    fn inverse_examples() {
        assert_eq!(poly(&[0, 2], 5).comp_inverse().unwrap(), TruncatedSeries::monomial(CycloScalar::ratio(1, 2), 1, 5));
        let geo = poly(&[0, 1, 1, 1, 1, 1, 1, 1], 7);
        assert_eq!(geo.comp_inverse().unwrap(), poly(&[0, 1, -1, 1, -1, 1, -1, 1], 7));
        assert_eq!(poly(&[0, 0, 1], 4).comp_inverse().unwrap_err(), GermError::NotInvertible);
    }

    #[test]
    fn agreement_degree() {
        let a = poly(&[0, 1, 2, 3], 5);
        let b = poly(&[0, 1, 2, 4], 5);
        assert_eq!(a.agreement(&b), Some(2));
        assert_eq!(a.agreement(&a), Some(5));
        assert_eq!(a.agreement(&poly(&[1], 5)), None);
    }
}
