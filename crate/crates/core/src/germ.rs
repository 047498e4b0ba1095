//! Invertible germs under composition, and the conjugacy solver.

use std::ops::RangeInclusive;

use crate::error::{GermError, Result};
use crate::scalar::CycloScalar;
use crate::series::TruncatedSeries;

/// A truncated series with zero constant term and nonzero linear coefficient.
#[derive(Clone, Debug, PartialEq)]
pub struct Germ {
    series: TruncatedSeries,
}

impl Germ {
    pub fn new(series: TruncatedSeries) -> Result<Self> {
        if series.trunc() < 1 {
            return Err(GermError::NotAGerm("truncation order must be at least 1".into()));
        }
        if !series.coeff(0).is_zero() {
            return Err(GermError::NotAGerm("constant term must be zero".into()));
        }
        if series.coeff(1).is_zero() {
            return Err(GermError::NotAGerm("linear coefficient must be nonzero".into()));
        }
        Ok(Germ { series })
    }

    pub(crate) fn from_series_unchecked(series: TruncatedSeries) -> Self {
        debug_assert!(series.coeff(0).is_zero() && !series.coeff(1).is_zero());
        Germ { series }
    }

    pub fn identity(trunc: usize) -> Self {
        Germ { series: TruncatedSeries::z(trunc.max(1)) }
    }

    /// `z -> c z`.
    pub fn linear(c: CycloScalar, trunc: usize) -> Result<Self> {
        Germ::new(TruncatedSeries::monomial(c, 1, trunc.max(1)))
    }

    pub fn series(&self) -> &TruncatedSeries {
        &self.series
    }

    pub fn into_series(self) -> TruncatedSeries {
        self.series
    }

    pub fn trunc(&self) -> usize {
        self.series.trunc()
    }

    pub fn coeff(&self, k: usize) -> CycloScalar {
        self.series.coeff(k)
    }

    pub fn truncate(&self, n: usize) -> Self {
        Germ { series: self.series.truncate(n.max(1)) }
    }

    /// `f'(0)`.
    pub fn multiplier(&self) -> CycloScalar {
        self.series.coeff(1)
    }

    pub fn is_identity(&self) -> bool {
        self.series == TruncatedSeries::z(self.trunc())
    }

    /// `self o other`.
    pub fn compose(&self, other: &Germ) -> Germ {
        let s = self.series.compose(&other.series).expect("germs vanish at the origin");
        Germ { series: s }
    }

    pub fn inverse(&self) -> Germ {
        Germ { series: self.series.comp_inverse().expect("germs are invertible") }
    }

    /// `n`-fold composition; negative `n` iterates the inverse.
    pub fn iterate(&self, n: i64) -> Germ {
        let mut base = if n < 0 { self.inverse() } else { self.clone() };
        let mut e = n.unsigned_abs();
        let mut result = Germ::identity(self.trunc());
        while e > 0 {
            if e & 1 == 1 {
                result = result.compose(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.compose(&base);
            }
        }
        result
    }

    /// Least `n <= bound` with `self^n` equal to the identity to truncation.
    pub fn order_of(&self, bound: u32) -> Option<u32> {
        let mut cur = self.clone();
        for k in 1..=bound {
            if cur.is_identity() {
                return Some(k);
            }
            cur = cur.compose(self);
        }
        None
    }
}

/// `h^{-1} o f o h`.
pub fn conjugate(h: &Germ, f: &Germ) -> Germ {
    h.inverse().compose(&f.compose(h))
}

/// For `g` of order `delta` to truncation, returns `h` with `h^{-1} g h = m(g) z`.
///
/// The averaged sum `H = (1/delta) sum_j g^j / m(g)^j` satisfies `H o g = m(g) H`,
/// so the conjugator in the `h^{-1} g h` convention is `H^{-1}`.
pub fn averaging_linearizer(g: &Germ, delta: u32) -> Result<Germ> {
    if delta == 0 || !g.iterate(delta as i64).is_identity() {
        return Err(GermError::NotPeriodic(delta));
    }
    let beta = g.multiplier();
    if !beta.pow_u(delta as u64).is_one() {
        return Err(GermError::NotPeriodic(delta));
    }
    let n = g.trunc();
    let beta_inv = beta.inverse()?;
    let mut sum = TruncatedSeries::zero(n);
    let mut power = Germ::identity(n);
    let mut weight = CycloScalar::one();
    for _ in 0..delta {
        sum = sum.add(&power.series.scale(&weight));
        power = power.compose(g);
        weight = &weight * &beta_inv;
    }
    let averaged = Germ::new(sum.scale(&CycloScalar::ratio(1, delta as i64)))?;
    let h = averaged.inverse();
    let target = Germ::linear(beta, n)?;
    if conjugate(&h, g) != target {
        return Err(GermError::Inconsistent("averaged conjugator does not linearize".into()));
    }
    Ok(h)
}

/// A conjugator `h` with `h^{-1} f h = g` through degree `verified_to`.
#[derive(Clone, Debug, PartialEq)]
pub struct ConjugacyWitness {
    pub conjugator: Germ,
    pub verified_to: usize,
    /// Degrees whose coefficient the equations leave free, with the value chosen (always zero).
    pub resonant_choices: Vec<(usize, CycloScalar)>,
}

impl ConjugacyWitness {
    fn trivial(n: usize) -> Self {
        ConjugacyWitness { conjugator: Germ::identity(n), verified_to: n, resonant_choices: Vec::new() }
    }
}

/// Index of the first nonzero coefficient above the linear term, minus one.
pub(crate) fn tangent_order(f: &Germ) -> Option<usize> {
    f.series.terms().map(|(k, _)| k).find(|&k| k >= 2).map(|k| k - 1)
}

struct TermSolve {
    h: Vec<CycloScalar>,
    resonant: Vec<(usize, CycloScalar)>,
    /// First resonant degree where the equation had no solution.
    blocked_at: Option<usize>,
}

/// Solve `f o h = h o g` one coefficient at a time: the degree `k + offset`
/// equation is affine in `h_k` with slope `slope(k)`. Zero slope is a resonance.
fn solve_terms(
    f: &TruncatedSeries,
    g: &TruncatedSeries,
    mut h: Vec<CycloScalar>,
    degrees: RangeInclusive<usize>,
    offset: usize,
    slope: impl Fn(usize) -> CycloScalar,
) -> TermSolve {
    let mut resonant = Vec::new();
    for k in degrees {
        let d = k + offset;
        let partial = TruncatedSeries::from_dense(h[..k].to_vec(), d);
        let lhs = f.truncate(d).compose(&partial).expect("zero constant term");
        let rhs = partial.compose(&g.truncate(d)).expect("zero constant term");
        let residual = &lhs.coeff(d) - &rhs.coeff(d);
        let a = slope(k);
        if a.is_zero() {
            if !residual.is_zero() {
                return TermSolve { h, resonant, blocked_at: Some(k) };
            }
            resonant.push((k, CycloScalar::zero()));
        } else {
            h[k] = -(&residual / &a);
        }
    }
    TermSolve { h, resonant, blocked_at: None }
}

/// Conjugator with linear part `c` between two tangent-to-identity germs of
/// the same order `p`, assuming `f_{p+1} c^p = g_{p+1}`. Free coefficients are zero.
pub(crate) fn solve_tangent(f: &Germ, g: &Germ, c: &CycloScalar) -> Result<Option<ConjugacyWitness>> {
    let n = f.trunc().min(g.trunc());
    let (Some(p), Some(pg)) = (tangent_order(f), tangent_order(g)) else {
        return Err(GermError::IdentityToTruncation);
    };
    if p != pg {
        return Ok(None);
    }
    let lead_g = g.coeff(p + 1);
    if &f.coeff(p + 1) * &c.pow_u(p as u64) != lead_g {
        return Ok(None);
    }
    let mut h = vec![CycloScalar::zero(); n + 1];
    h[1] = c.clone();
    let degrees = 2..=n.saturating_sub(p);
    let solved = solve_terms(f.series(), g.series(), h, degrees, p, |k| {
        &lead_g * &CycloScalar::from_integer(p as i64 + 1 - k as i64)
    });
    if solved.blocked_at.is_some() {
        return Ok(None);
    }
    // Degrees above n - p only influence the equation beyond degree n.
    let conjugator = Germ::from_series_unchecked(TruncatedSeries::from_dense(solved.h, n));
    if f.compose(&conjugator).series() != conjugator.compose(g).series() {
        return Err(GermError::Inconsistent("tangent conjugator fails verification".into()));
    }
    Ok(Some(ConjugacyWitness { conjugator, verified_to: n, resonant_choices: solved.resonant }))
}

fn linear_slope(lambda: &CycloScalar) -> impl Fn(usize) -> CycloScalar + '_ {
    move |k| lambda - &lambda.pow_u(k as u64)
}

/// Find `h` with `h^{-1} f h = g` to truncation, or `None` if the germs are not
/// formally conjugate (as far as the truncation can tell).
pub fn solve_conjugacy(f: &Germ, g: &Germ) -> Result<Option<ConjugacyWitness>> {
    let n = f.trunc().min(g.trunc());
    let (f, g) = (f.truncate(n), g.truncate(n));
    let lambda = f.multiplier();
    if lambda != g.multiplier() {
        return Ok(None);
    }
    if lambda.is_one() {
        return match (tangent_order(&f), tangent_order(&g)) {
            (None, None) => Ok(Some(ConjugacyWitness::trivial(n))),
            (Some(p), Some(q)) if p == q => {
                if n < 2 * p + 1 {
                    return Err(GermError::InsufficientPrecision { needed: 2 * p + 1, have: n });
                }
                let ratio = g.coeff(p + 1).checked_div(&f.coeff(p + 1))?;
                let c = ratio.nth_root(p as u32)?.ok_or_else(|| GermError::ScalarRootUnavailable {
                    value: ratio.to_string(),
                    degree: p as u32,
                })?;
                solve_tangent(&f, &g, &c)
            }
            _ => Ok(None),
        };
    }
    if let Some(root) = lambda.detect_root_of_unity() {
        let s = root.order();
        let (fs, gs) = (f.iterate(s as i64), g.iterate(s as i64));
        return match (fs.is_identity(), gs.is_identity()) {
            (true, true) => {
                let lf = averaging_linearizer(&f, s)?;
                let lg = averaging_linearizer(&g, s)?;
                let h = lf.compose(&lg.inverse());
                Ok(Some(ConjugacyWitness { conjugator: h, verified_to: n, resonant_choices: Vec::new() }))
            }
            (false, false) => power_reduction(&f, &g, &fs, &gs, &lambda),
            _ => Ok(None),
        };
    }
    // Non-resonant multiplier: formal linearization always succeeds.
    let mut h = vec![CycloScalar::zero(); n + 1];
    h[1] = CycloScalar::one();
    let solved = solve_terms(f.series(), g.series(), h, 2..=n, 0, linear_slope(&lambda));
    let conjugator = Germ::from_series_unchecked(TruncatedSeries::from_dense(solved.h, n));
    Ok(Some(ConjugacyWitness { conjugator, verified_to: n, resonant_choices: Vec::new() }))
}

/// Multiplier a primitive `s`-th root of unity with `f^s`, `g^s` not the identity:
/// a conjugator of the `s`-th powers also conjugates `f` to `g`.
fn power_reduction(
    f: &Germ,
    g: &Germ,
    fs: &Germ,
    gs: &Germ,
    lambda: &CycloScalar,
) -> Result<Option<ConjugacyWitness>> {
    let n = f.trunc();
    let Some(witness) = solve_conjugacy(fs, gs)? else {
        return Ok(None);
    };
    let p = tangent_order(fs).expect("not the identity");
    // The conjugator of the powers is pinned down only through degree n - p.
    let exact = n.saturating_sub(p).max(1);
    let prefix = witness.conjugator.truncate(exact);
    if f.compose(&prefix).series().truncate(exact) != prefix.compose(g).series().truncate(exact) {
        return Err(GermError::Inconsistent(
            "conjugator of the powers does not conjugate the germs".into(),
        ));
    }
    let mut h = prefix.series().to_dense(n);
    h.truncate(n + 1);
    let solved = solve_terms(f.series(), g.series(), h, exact + 1..=n, 0, linear_slope(lambda));
    let verified_to = solved.blocked_at.map_or(n, |k| k - 1);
    let conjugator = Germ::from_series_unchecked(TruncatedSeries::from_dense(solved.h, n).truncate(verified_to));
    if f.compose(&conjugator).series() != conjugator.compose(g).series() {
        return Err(GermError::Inconsistent("extended conjugator fails verification".into()));
    }
    let mut resonant_choices = witness.resonant_choices;
    resonant_choices.extend(solved.resonant);
    Ok(Some(ConjugacyWitness { conjugator, verified_to, resonant_choices }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_germ;

    fn germ(text: &str, n: usize) -> Germ {
        parse_germ(text, n).unwrap()
    }

    #[test]
    fn multiplier_examples() {
        assert_eq!(germ("z+z^2", 5).multiplier(), CycloScalar::one());
        assert_eq!(germ("-z+z^3", 5).multiplier(), CycloScalar::from_integer(-1));
        assert_eq!(germ("2*z", 5).multiplier(), CycloScalar::from_integer(2));
    }

    #[test]
    fn iterate_examples() {
        assert_eq!(germ("z+z^2", 8).iterate(2), germ("z+2*z^2+2*z^3+z^4", 8));
        assert!(germ("i*z", 8).iterate(4).is_identity());
        let f = germ("z + 3*z^2 - z^5", 10);
        assert!(f.iterate(-1).compose(&f).is_identity());
        assert!(f.iterate(0).is_identity());
        assert_eq!(f.iterate(-3).compose(&f.iterate(3)), Germ::identity(10));
    }

    #[test]
    fn conjugate_examples() {
        assert_eq!(conjugate(&germ("2*z", 8), &germ("z+z^2", 8)), germ("z+2*z^2", 8));
        let f = germ("z + z^2 - 4*z^3", 8);
        assert_eq!(conjugate(&Germ::identity(8), &f), f);
        assert_eq!(conjugate(&germ("i*z", 8), &germ("z+z^3", 8)), germ("z-z^3", 8));
    }

    #[test]
    fn order_examples() {
        assert_eq!(germ("i*z", 8).order_of(10), Some(4));
        assert_eq!(germ("-z", 8).order_of(10), Some(2));
        assert_eq!(germ("z+z^2", 8).order_of(10), None);
        assert_eq!(Germ::identity(5).order_of(1), Some(1));
    }

    #[test]
    fn linearizer_of_linear_map() {
        let g = germ("zeta(6)*z", 8);
        assert!(averaging_linearizer(&g, 6).unwrap().is_identity());
        assert!(averaging_linearizer(&g, 12).unwrap().is_identity());
        assert_eq!(averaging_linearizer(&g, 4).unwrap_err(), GermError::NotPeriodic(4));
    }

    #[test]
    fn linearizer_of_involution() {
        let g = germ("-z/(1+z)", 12);
        assert!(g.iterate(2).is_identity());
        let h = averaging_linearizer(&g, 2).unwrap();
        assert_eq!(conjugate(&h, &g), germ("-z", 12));
        assert!(averaging_linearizer(&germ("z+z^2", 6), 3).is_err());
    }

    #[test]
    fn linearizer_of_conjugated_rotation() {
        let g = conjugate(&germ("z+z^3", 12), &germ("i*z", 12));
        assert_eq!(g.order_of(8), Some(4));
        let h = averaging_linearizer(&g, 4).unwrap();
        assert_eq!(conjugate(&h, &g), germ("i*z", 12));
    }

    #[test]
    fn conjugacy_examples() {
        let f = germ("z + z^2 - 2*z^4", 12);
        let w = solve_conjugacy(&f, &f).unwrap().unwrap();
        assert!(w.conjugator.is_identity());
        assert_eq!(w.resonant_choices, vec![(2, CycloScalar::zero())]);

        let f = germ("z+z^2", 12);
        let g = conjugate(&germ("z+z^3", 12), &f);
        let w = solve_conjugacy(&f, &g).unwrap().unwrap();
        assert_eq!(conjugate(&w.conjugator, &f), g);
        assert_eq!(w.verified_to, 12);

        assert!(solve_conjugacy(&germ("z+z^2", 12), &germ("z+z^2+z^3", 12)).unwrap().is_none());
        assert!(solve_conjugacy(&germ("z+z^2", 12), &germ("z+z^3", 12)).unwrap().is_none());
        assert!(solve_conjugacy(&germ("z+z^2", 12), &germ("2*z", 12)).unwrap().is_none());
    }

    #[test]
    fn conjugacy_with_linear_part() {
        let f = germ("z + z^3 + 5*z^5", 14);
        let g = conjugate(&germ("3*z - z^2 + z^4", 14), &f);
        let w = solve_conjugacy(&f, &g).unwrap().unwrap();
        assert_eq!(conjugate(&w.conjugator, &f), g);
        // Lead ratio 2 has no rational square root.
        let g2 = germ("z + 2*z^3", 14);
        assert!(matches!(solve_conjugacy(&f, &g2), Err(GermError::ScalarRootUnavailable { .. })));
    }

    #[test]
    fn insufficient_precision() {
        assert_eq!(
            solve_conjugacy(&germ("z+z^3", 4), &germ("z+z^3+z^4", 4)).unwrap_err(),
            GermError::InsufficientPrecision { needed: 5, have: 4 }
        );
    }

    #[test]
    fn non_resonant_linearization() {
        let f = germ("2*z + z^2 - z^3", 10);
        let w = solve_conjugacy(&germ("2*z", 10), &f).unwrap().unwrap();
        assert_eq!(conjugate(&w.conjugator, &germ("2*z", 10)), f);
        assert!(solve_conjugacy(&f, &germ("3*z", 10)).unwrap().is_none());
    }

    #[test]
    fn periodic_pairs() {
        let a = conjugate(&germ("z + z^2", 10), &germ("-z", 10));
        let b = conjugate(&germ("z - 2*z^3", 10), &germ("-z", 10));
        let w = solve_conjugacy(&a, &b).unwrap().unwrap();
        assert_eq!(conjugate(&w.conjugator, &a), b);
        assert!(solve_conjugacy(&germ("-z", 12), &germ("-z+z^2", 12)).unwrap().is_none());
    }

    #[test]
    fn cube_root_of_unity_reduction() {
        let seed = germ("zeta(3)*z + z^2", 16);
        let f = conjugate(&germ("z + z^2", 16), &seed);
        let g = conjugate(&germ("2*z - z^3", 16), &seed);
        let w = solve_conjugacy(&f, &g).unwrap().unwrap();
        assert_eq!(conjugate(&w.conjugator, &f).series().truncate(w.verified_to), g.series().truncate(w.verified_to));
        assert!(w.verified_to >= 16 - tangent_order(&f.iterate(3)).unwrap());
    }
}
