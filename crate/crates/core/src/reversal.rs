//! Formal reversibility: deciding it, building and checking reversers, and
//! the example families of reversible germs.
//!
//! A germ `g` reverses `f` when `g^{-1} f g = f^{-1}`. Verdicts here are
//! formal. A germ can be formally reversible without being reversed by any
//! convergent germ, and nothing in this crate decides the convergent question.

use std::collections::BTreeSet;

use crate::classify::{model_flow, p_invariant, parabolic_invariants, ParabolicInvariants};
use crate::error::{GermError, Result};
use crate::germ::{conjugate, solve_tangent, tangent_order, Germ};
use crate::sample;
use crate::scalar::CycloScalar;
use crate::series::TruncatedSeries;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MultiplierClass {
    PlusOne,
    MinusOneInvolution,
    MinusOneGeneral,
    Other,
}

impl MultiplierClass {
    pub fn name(self) -> &'static str {
        match self {
            MultiplierClass::PlusOne => "plus_one",
            MultiplierClass::MinusOneInvolution => "minus_one_involution",
            MultiplierClass::MinusOneGeneral => "minus_one_general",
            MultiplierClass::Other => "other",
        }
    }
}

#[derive(Clone, Debug)]
pub struct ReversibilityReport {
    pub multiplier_class: MultiplierClass,
    /// For multiplier -1 these describe `f^2`.
    pub p: Option<usize>,
    pub a: Option<CycloScalar>,
    pub formally_reversible: bool,
    pub strongly_reversible: bool,
    pub reverser: Option<Germ>,
    pub order_spectrum: BTreeSet<u32>,
}

impl ReversibilityReport {
    fn not_reversible(class: MultiplierClass) -> Self {
        ReversibilityReport {
            multiplier_class: class,
            p: None,
            a: None,
            formally_reversible: false,
            strongly_reversible: false,
            reverser: None,
            order_spectrum: BTreeSet::new(),
        }
    }
}

fn is_minus_one(c: &CycloScalar) -> bool {
    (c + &CycloScalar::one()).is_zero()
}

fn balanced_a(p: usize) -> CycloScalar {
    CycloScalar::ratio(p as i64 + 1, 2)
}

pub fn is_reversible(f: &Germ) -> Result<ReversibilityReport> {
    let m = f.multiplier();
    let n = f.trunc();
    if m.is_one() {
        if f.is_identity() {
            return Ok(ReversibilityReport {
                multiplier_class: MultiplierClass::PlusOne,
                formally_reversible: true,
                strongly_reversible: true,
                reverser: Some(Germ::identity(n)),
                ..ReversibilityReport::not_reversible(MultiplierClass::PlusOne)
            });
        }
        let inv = parabolic_invariants(f)?;
        let reversible = inv.a == balanced_a(inv.p);
        let reverser = if reversible { Some(tangent_reverser(f, &inv, 1)?) } else { None };
        return Ok(ReversibilityReport {
            multiplier_class: MultiplierClass::PlusOne,
            formally_reversible: reversible,
            strongly_reversible: reversible && inv.p % 2 == 1,
            reverser,
            order_spectrum: if reversible { reverser_orders(inv.p as u32) } else { BTreeSet::new() },
            p: Some(inv.p),
            a: Some(inv.a),
        });
    }
    if !is_minus_one(&m) {
        return Ok(ReversibilityReport::not_reversible(MultiplierClass::Other));
    }
    let square = f.iterate(2);
    if square.is_identity() {
        return Ok(ReversibilityReport {
            multiplier_class: MultiplierClass::MinusOneInvolution,
            formally_reversible: true,
            strongly_reversible: true,
            reverser: Some(Germ::identity(n)),
            ..ReversibilityReport::not_reversible(MultiplierClass::MinusOneInvolution)
        });
    }
    let inner = is_reversible(&square)?;
    let reverser = if inner.formally_reversible { Some(find_reverser(f, None)?) } else { None };
    Ok(ReversibilityReport {
        multiplier_class: MultiplierClass::MinusOneGeneral,
        strongly_reversible: false,
        reverser,
        ..inner
    })
}

/// `g^{-1} f g = f^{-1}` through the common truncation.
pub fn reverser_check(f: &Germ, g: &Germ) -> bool {
    conjugate(g, f) == f.inverse()
}

/// Orders of reversers of a reversible germ with invariant `p`: `{2s : s | p, p/s odd}`.
pub fn reverser_orders(p: u32) -> BTreeSet<u32> {
    (1..=p).filter(|s| p % s == 0 && (p / s) % 2 == 1).map(|s| 2 * s).collect()
}

/// Conjugate `f` to the model flow with the same leading coefficient and
/// transport the rotation `zeta_{2p}^m z`, which reverses every model flow.
///
/// Matching the leading coefficient through the flow time, rather than by a
/// linear rescaling, avoids taking a `p`-th root of `f_{p+1}`.
fn tangent_reverser(f: &Germ, inv: &ParabolicInvariants, m: u32) -> Result<Germ> {
    let n = f.trunc();
    let p = inv.p;
    let t = -(&CycloScalar::from_integer(p as i64) * &inv.lead);
    let model = model_flow(p, &t, n)?;
    let psi = solve_tangent(f, &model, &CycloScalar::one())?
        .ok_or_else(|| GermError::Inconsistent("reversible germ is not conjugate to its model flow".into()))?
        .conjugator;
    let rho = Germ::linear(CycloScalar::primitive_root(2 * p as u32, m as i64)?, n)?;
    let g = psi.compose(&rho).compose(&psi.inverse());
    if !reverser_check(f, &g) {
        return Err(GermError::Inconsistent("constructed reverser fails verification".into()));
    }
    Ok(g)
}

/// A reverser of `f`, of order `target_order` if given, else of the largest
/// available order.
pub fn find_reverser(f: &Germ, target_order: Option<u32>) -> Result<Germ> {
    let m = f.multiplier();
    let n = f.trunc();
    if m.is_one() {
        if f.is_identity() {
            return match target_order {
                None | Some(1) => Ok(Germ::identity(n)),
                Some(k) => Germ::linear(CycloScalar::primitive_root(k, 1)?, n),
            };
        }
        let inv = parabolic_invariants(f)?;
        if inv.a != balanced_a(inv.p) {
            return Err(GermError::NotReversible);
        }
        let p = inv.p as u32;
        let orders = reverser_orders(p);
        let power = match target_order {
            None => 1,
            Some(o) if orders.contains(&o) => p / (o / 2),
            Some(o) => {
                return Err(GermError::UnrealizableOrder { order: o, available: orders.into_iter().collect() })
            }
        };
        return tangent_reverser(f, &inv, power);
    }
    if !is_minus_one(&m) {
        return Err(GermError::NotReversible);
    }
    let square = f.iterate(2);
    if square.is_identity() {
        return match target_order {
            None | Some(1) => Ok(Germ::identity(n)),
            Some(2) => Ok(f.clone()),
            Some(o) => Err(GermError::UnrealizableOrder { order: o, available: vec![1, 2] }),
        };
    }
    let g = find_reverser(&square, target_order)?;
    // The square only pins f down through n - p(f^2); trust the reverser as far as it checks.
    let p2 = tangent_order(&square).expect("square is not the identity");
    let agreed = conjugate(&g, f).series().agreement(f.inverse().series()).unwrap_or(0);
    if agreed + p2 < n {
        return Err(GermError::Inconsistent(format!(
            "reverser of the square reverses f only through degree {agreed}"
        )));
    }
    Ok(g.truncate(agreed))
}

/// For a reverser `g` of `f`, the involution-like factor `h = g o f` with
/// `h^2 = g^2` and `f = g^{-1} o h`.
pub fn reversal_factorization(f: &Germ, g: &Germ) -> Result<Germ> {
    if !reverser_check(f, g) {
        return Err(GermError::NotAReverser);
    }
    let h = g.compose(f);
    if h.compose(&h) != g.compose(g) || g.inverse().compose(&h) != *f {
        return Err(GermError::Inconsistent("factorization identities fail".into()));
    }
    Ok(h)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FamilyKind {
    /// The model flow `z / (1 + z^p)^{1/p}` with reverser `zeta_{2p} z`.
    Model { p: usize, trunc: usize },
    /// `f = mu^{-1} phi^{-1} mu phi` with `mu = zeta_{2s} z`, `phi = z + z^{s+1}`, reversed by `mu`.
    Twisted { s: usize, trunc: usize },
    /// Another family member conjugated by a seeded random germ.
    ConjugatedRandom { base: Box<FamilyKind>, seed: u64 },
}

/// A germ together with a reverser of it.
pub fn example_family(kind: &FamilyKind) -> Result<(Germ, Germ)> {
    match kind {
        FamilyKind::Model { p, trunc } => {
            let f = model_flow(*p, &CycloScalar::one(), *trunc)?;
            let g = Germ::linear(CycloScalar::primitive_root(2 * *p as u32, 1)?, *trunc)?;
            Ok((f, g))
        }
        FamilyKind::Twisted { s, trunc } => twisted(*s, *trunc),
        FamilyKind::ConjugatedRandom { base, seed } => {
            let (f, g) = example_family(base)?;
            let h = sample::random_conjugator(&mut sample::rng(*seed), f.trunc());
            Ok((conjugate(&h, &f), conjugate(&h, &g)))
        }
    }
}

fn twisted(s: usize, n: usize) -> Result<(Germ, Germ)> {
    if s == 0 || s % 2 == 1 {
        return Err(GermError::BadParameters(format!("twisted family needs a positive even s, got {s}")));
    }
    if n < s + 1 {
        return Err(GermError::BadParameters(format!("twisted family needs truncation at least {}", s + 1)));
    }
    let mu = Germ::linear(CycloScalar::primitive_root(2 * s as u32, 1)?, n)?;
    let phi = Germ::new(TruncatedSeries::new([(1, CycloScalar::one()), (s + 1, CycloScalar::one())], n))?;
    let h = phi.inverse().compose(&mu).compose(&phi);
    let f = mu.inverse().compose(&h);
    let order = 2 * s as u32;
    let square = mu.compose(&mu);
    let ok = tangent_order(&f) == Some(s)
        && mu.order_of(order) == Some(order)
        && square == h.compose(&h)
        && square.order_of(s as u32) == Some(s as u32)
        && reverser_check(&f, &mu);
    if !ok {
        return Err(GermError::Inconsistent("twisted family postconditions fail".into()));
    }
    Ok((f, mu))
}

/// One coefficient of `f^{-1}` at a degree `sk + p + 1` of the symmetric pattern.
#[derive(Clone, Debug, PartialEq)]
pub struct InverseTerm {
    pub k: usize,
    pub degree: usize,
    /// `c_k`, the coefficient of `f` at this degree.
    pub coefficient: CycloScalar,
    pub inverse_coefficient: CycloScalar,
    /// Whether the inverse coefficient equals `(-1)^{k+1} c_k`.
    pub sign_matches: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SymmetricFormReport {
    pub passes: bool,
    pub p: usize,
    pub s: usize,
    /// Degrees of the nonzero coefficients of `f`.
    pub support: Vec<usize>,
    /// Whether every such degree is `1` or `sk + p + 1` for some `k >= 0`.
    pub support_in_pattern: bool,
    pub inverse_terms: Vec<InverseTerm>,
}

/// Test whether `zeta_{2s} z` reverses `f`, and report on the shape of `f`
/// and `f^{-1}` that such a reverser forces.
pub fn symmetric_form_check(f: &Germ, s: usize) -> Result<SymmetricFormReport> {
    let p = p_invariant(f)?;
    if s == 0 || p % s != 0 || (p / s) % 2 == 0 {
        return Err(GermError::BadParameters(format!("s = {s} must divide p = {p} with odd quotient")));
    }
    let n = f.trunc();
    let rho = Germ::linear(CycloScalar::primitive_root(2 * s as u32, 1)?, n)?;
    let passes = reverser_check(f, &rho);
    let support: Vec<usize> = f.series().terms().map(|(k, _)| k).collect();
    let in_pattern = |d: usize| d == 1 || (d > p && (d - p - 1) % s == 0);
    let inverse = f.inverse();
    let inverse_terms = (0..)
        .map(|k| (k, s * k + p + 1))
        .take_while(|&(_, d)| d <= n)
        .map(|(k, degree)| {
            let coefficient = f.coeff(degree);
            let inverse_coefficient = inverse.coeff(degree);
            let expected = if k % 2 == 1 { coefficient.clone() } else { -&coefficient };
            InverseTerm { k, degree, sign_matches: inverse_coefficient == expected, coefficient, inverse_coefficient }
        })
        .collect();
    Ok(SymmetricFormReport {
        passes,
        p,
        s,
        support_in_pattern: support.iter().all(|&d| in_pattern(d)),
        support,
        inverse_terms,
    })
}
