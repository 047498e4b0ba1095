//! Formal invariants of tangent-to-identity germs, formal flows and the
//! formal conjugacy decision.

use crate::error::{GermError, Result};
use crate::germ::{solve_tangent, tangent_order, Germ};
use crate::scalar::CycloScalar;
use crate::series::TruncatedSeries;

/// `p(f)`, the leading coefficient `f_{p+1}` and the invariant `a(f)`.
#[derive(Clone, Debug, PartialEq)]
pub struct ParabolicInvariants {
    pub p: usize,
    pub lead: CycloScalar,
    pub a: CycloScalar,
}

fn require_tangent(f: &Germ) -> Result<()> {
    if f.multiplier().is_one() {
        Ok(())
    } else {
        Err(GermError::WrongMultiplier)
    }
}

/// The `p` with `f = z + f_{p+1} z^{p+1} + ...`, `f_{p+1} != 0`.
pub fn p_invariant(f: &Germ) -> Result<usize> {
    require_tangent(f)?;
    tangent_order(f).ok_or(GermError::IdentityToTruncation)
}

/// `a(f) = -res_0 1/(f(z) - z)`.
///
/// On a germ already in the form `z + z^{p+1} + a z^{2p+1} + ...` this is the
/// coefficient `a`; the residue is unchanged by formal conjugation, including
/// by linear maps, so no `p`-th root of `f_{p+1}` is ever needed.
pub fn a_invariant(f: &Germ) -> Result<CycloScalar> {
    let p = p_invariant(f)?;
    let n = f.trunc();
    if n < 2 * p + 2 {
        return Err(GermError::InsufficientPrecision { needed: 2 * p + 2, have: n });
    }
    // f - z = z^{p+1} u(z) with u(0) = f_{p+1} != 0
    let unit = f.series().sub(&TruncatedSeries::z(n)).shift_down(p + 1)?;
    let recip = unit.reciprocal()?;
    Ok(-recip.coeff(p))
}

pub fn parabolic_invariants(f: &Germ) -> Result<ParabolicInvariants> {
    let a = a_invariant(f)?;
    let p = p_invariant(f)?;
    Ok(ParabolicInvariants { p, lead: f.coeff(p + 1), a })
}

/// `z (1 + t z^p)^{-1/p}` through degree `n`, from the binomial series.
/// Time `t = 1` gives the model map `z / (1 + z^p)^{1/p}`.
pub fn model_flow(p: usize, t: &CycloScalar, n: usize) -> Result<Germ> {
    if p == 0 || n < p + 1 {
        return Err(GermError::BadParameters(format!("model flow needs p >= 1 and truncation >= p + 1, got p = {p}, N = {n}")));
    }
    let alpha = CycloScalar::ratio(-1, p as i64);
    let mut binom = CycloScalar::one();
    let mut t_power = CycloScalar::one();
    let mut terms = vec![(1, CycloScalar::one())];
    let mut k = 1;
    while 1 + k * p <= n {
        binom = &binom * &(&alpha - &CycloScalar::from_integer(k as i64 - 1)) / CycloScalar::from_integer(k as i64);
        t_power = &t_power * t;
        terms.push((1 + k * p, &binom * &t_power));
        k += 1;
    }
    Germ::new(TruncatedSeries::new(terms, n))
}

/// Time-`t` map of the formal vector field `v(z) d/dz`: `sum_m t^m/m! D^m(z)`
/// with `D(u) = v u'`. Requires `v` of order at least 2, so the sum is finite
/// modulo `z^{n+1}`.
pub fn exp_vector_field(v: &TruncatedSeries, t: &CycloScalar, n: usize) -> TruncatedSeries {
    assert!(v.valuation().is_none_or(|k| k >= 2), "vector field must vanish to order 2");
    let mut term = TruncatedSeries::z(n);
    let mut total = term.clone();
    for m in 1..=n {
        let factor = t / &CycloScalar::from_integer(m as i64);
        term = v.mul_to(&term.derivative(), n).scale(&factor);
        if term.is_zero() {
            break;
        }
        total = total.add(&term);
    }
    total.with_trunc(n)
}

/// The generator `v` of the unique formal flow through `f`: `exp(v d/dz) z = f`.
pub fn iterative_log(f: &Germ) -> Result<TruncatedSeries> {
    require_tangent(f)?;
    let n = f.trunc();
    let mut v = TruncatedSeries::zero(n);
    let Some(p) = tangent_order(f) else {
        return Ok(v);
    };
    // exp(v) agrees with f below degree k and its degree-k coefficient does
    // not involve v_k, which therefore equals the mismatch there.
    for k in p + 1..=n {
        let current = exp_vector_field(&v, &CycloScalar::one(), k);
        let vk = &f.coeff(k) - &current.coeff(k);
        if !vk.is_zero() {
            v = v.add(&TruncatedSeries::monomial(vk, k, n));
        }
    }
    Ok(v)
}

/// `f^t` for the unique formal flow with `f^1 = f`.
pub fn flow(f: &Germ, t: &CycloScalar) -> Result<Germ> {
    FormalFlow::new(f)?.at(t)
}

/// The flow through a tangent germ, prepared for evaluation at many times:
/// `f^t = sum_m t^m D^m(z)/m!` with the terms `D^m(z)/m!` computed once.
#[derive(Clone, Debug)]
pub struct FormalFlow {
    log: TruncatedSeries,
    terms: Vec<TruncatedSeries>,
}

impl FormalFlow {
    pub fn new(f: &Germ) -> Result<Self> {
        let log = iterative_log(f)?;
        let n = f.trunc();
        let mut term = TruncatedSeries::z(n);
        let mut terms = vec![term.clone()];
        for m in 1..=n {
            let factor = CycloScalar::ratio(1, m as i64);
            term = log.mul_to(&term.derivative(), n).scale(&factor);
            if term.is_zero() {
                break;
            }
            terms.push(term.clone());
        }
        Ok(FormalFlow { log, terms })
    }

    /// The iterative logarithm of the germ.
    pub fn log(&self) -> &TruncatedSeries {
        &self.log
    }

    pub fn at(&self, t: &CycloScalar) -> Result<Germ> {
        let n = self.terms[0].trunc();
        let mut total = TruncatedSeries::zero(n);
        let mut power = CycloScalar::one();
        for term in &self.terms {
            total = total.add(&term.scale(&power));
            power = &power * t;
        }
        Germ::new(total)
    }
}

/// Formal centralizer of a tangent germ: a finite cyclic part of order `p`
/// times the flow generated by the iterative logarithm.
#[derive(Clone, Debug)]
pub struct FormalCentralizer {
    pub torsion_order: usize,
    /// A germ of order `torsion_order` commuting with `f`.
    pub torsion_generator: Option<Germ>,
    pub flow_generator: TruncatedSeries,
}

/// The polynomial `z + f_{p+1} z^{p+1} + a f_{p+1}^2 z^{2p+1}`, which has
/// invariants `(p, f_{p+1}, a)` and commutes with `z -> zeta_p z`.
pub(crate) fn symmetric_normal_form(inv: &ParabolicInvariants, n: usize) -> Result<Germ> {
    let p = inv.p;
    let top = &inv.a * &(&inv.lead * &inv.lead);
    Germ::new(TruncatedSeries::new([(1, CycloScalar::one()), (p + 1, inv.lead.clone()), (2 * p + 1, top)], n))
}

pub fn formal_centralizer(f: &Germ) -> Result<FormalCentralizer> {
    let inv = parabolic_invariants(f)?;
    let n = f.trunc();
    let normal = symmetric_normal_form(&inv, n)?;
    let witness = solve_tangent(f, &normal, &CycloScalar::one())?
        .ok_or_else(|| GermError::Inconsistent("germ not conjugate to its normal form".into()))?;
    let psi = witness.conjugator;
    let rotation = Germ::linear(CycloScalar::primitive_root(inv.p as u32, 1)?, n)?;
    let omega = psi.compose(&rotation).compose(&psi.inverse());
    if omega.compose(f) != f.compose(&omega) {
        return Err(GermError::Inconsistent("torsion generator does not commute".into()));
    }
    Ok(FormalCentralizer {
        torsion_order: inv.p,
        torsion_generator: Some(omega),
        flow_generator: iterative_log(f)?,
    })
}

/// Formal conjugacy in the full group of germs, decided by invariants.
pub fn formally_conjugate(f: &Germ, g: &Germ) -> Result<bool> {
    let n = f.trunc().min(g.trunc());
    let (f, g) = (f.truncate(n), g.truncate(n));
    let lambda = f.multiplier();
    if lambda != g.multiplier() {
        return Ok(false);
    }
    if lambda.is_one() {
        return match (tangent_order(&f), tangent_order(&g)) {
            (None, None) => Ok(true),
            (Some(p), Some(q)) if p == q => Ok(a_invariant(&f)? == a_invariant(&g)?),
            _ => Ok(false),
        };
    }
    match lambda.detect_root_of_unity() {
        Some(root) => {
            let s = root.order() as i64;
            let (fs, gs) = (f.iterate(s), g.iterate(s));
            match (fs.is_identity(), gs.is_identity()) {
                (true, true) => Ok(true),
                (false, false) => formally_conjugate(&fs, &gs),
                _ => Ok(false),
            }
        }
        None => Ok(true),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::germ::conjugate;
    use crate::parse::parse_germ;

    fn germ(text: &str, n: usize) -> Germ {
        parse_germ(text, n).unwrap()
    }

    fn q(num: i64, den: i64) -> CycloScalar {
        CycloScalar::ratio(num, den)
    }

    #[test]
    fn p_examples() {
        assert_eq!(p_invariant(&germ("z+z^4", 10)).unwrap(), 3);
        assert_eq!(p_invariant(&germ("z+2*z^2+z^5", 10)).unwrap(), 1);
        assert_eq!(p_invariant(&Germ::identity(10)).unwrap_err(), GermError::IdentityToTruncation);
        assert_eq!(p_invariant(&germ("2*z+z^2", 10)).unwrap_err(), GermError::WrongMultiplier);
    }

    #[test]
    fn a_examples() {
        assert_eq!(a_invariant(&germ("z+z^3+(7/3)*z^5", 8)).unwrap(), q(7, 3));
        assert_eq!(a_invariant(&germ("z+z^2", 8)).unwrap(), q(0, 1));
        assert_eq!(a_invariant(&germ("z/(1+z)", 8)).unwrap(), q(1, 1));
        assert_eq!(
            a_invariant(&germ("z+z^3", 5)).unwrap_err(),
            GermError::InsufficientPrecision { needed: 6, have: 5 }
        );
    }

    #[test]
    fn model_examples() {
        let one = CycloScalar::one();
        assert_eq!(model_flow(1, &one, 6).unwrap(), germ("z-z^2+z^3-z^4+z^5-z^6", 6));
        assert!(model_flow(4, &CycloScalar::zero(), 12).unwrap().is_identity());
        assert_eq!(model_flow(2, &one, 7).unwrap(), germ("z - (1/2)*z^3 + (3/8)*z^5 - (5/16)*z^7", 7));
        assert!(model_flow(3, &one, 3).is_err());
    }

    #[test]
    fn log_examples() {
        assert!(iterative_log(&Germ::identity(8)).unwrap().is_zero());
        let v = iterative_log(&germ("z/(1+z)", 12)).unwrap();
        assert_eq!(v, TruncatedSeries::monomial(q(-1, 1), 2, 12));
        let f = germ("z+z^2", 12);
        let v = iterative_log(&f).unwrap();
        assert_eq!(v.coeff(2), q(1, 1));
        assert_eq!(v.coeff(3), q(-1, 1));
        assert_eq!(v.coeff(4), q(3, 2));
        assert_eq!(exp_vector_field(&v, &CycloScalar::one(), 12), *f.series());
        assert_eq!(iterative_log(&germ("-z", 4)).unwrap_err(), GermError::WrongMultiplier);
    }

    #[test]
    fn flow_examples() {
        let model = model_flow(1, &CycloScalar::one(), 10).unwrap();
        let t = q(2, 3);
        assert_eq!(flow(&model, &t).unwrap(), model_flow(1, &t, 10).unwrap());
        let f = germ("z + z^2 - 3*z^3", 10);
        assert!(flow(&f, &CycloScalar::zero()).unwrap().is_identity());
        let half = flow(&f, &q(1, 2)).unwrap();
        assert_eq!(half.compose(&half), f);
        assert_eq!(flow(&f, &CycloScalar::one()).unwrap(), f);
    }

    #[test]
    fn centralizer_examples() {
        let model = model_flow(2, &CycloScalar::one(), 11).unwrap();
        let c = formal_centralizer(&model).unwrap();
        assert_eq!(c.torsion_order, 2);
        assert_eq!(c.torsion_generator.unwrap(), germ("-z", 11));

        let c = formal_centralizer(&germ("z+z^2", 10)).unwrap();
        assert_eq!(c.torsion_order, 1);
        assert!(c.torsion_generator.unwrap().is_identity());
        assert_eq!(c.flow_generator, iterative_log(&germ("z+z^2", 10)).unwrap());

        assert_eq!(formal_centralizer(&Germ::identity(6)).unwrap_err(), GermError::IdentityToTruncation);
    }

    #[test]
    fn torsion_of_non_reversible_germ() {
        let f = conjugate(&germ("z - z^2 + 2*z^4", 14), &germ("z + z^4 + z^7", 14));
        let c = formal_centralizer(&f).unwrap();
        let omega = c.torsion_generator.unwrap();
        assert_eq!(omega.order_of(3), Some(3));
        assert_eq!(omega.compose(&f), f.compose(&omega));
    }

    #[test]
    fn conjugacy_examples() {
        assert!(!formally_conjugate(&germ("z+z^2", 10), &germ("z+z^2+z^3", 10)).unwrap());
        let f = germ("z + z^3 - z^4", 12);
        assert!(formally_conjugate(&f, &conjugate(&germ("2*z + z^2", 12), &f)).unwrap());
        assert!(!formally_conjugate(&germ("-z", 10), &germ("-z+z^2", 10)).unwrap());
        assert!(formally_conjugate(&germ("2*z + z^2", 10), &germ("2*z", 10)).unwrap());
        assert!(!formally_conjugate(&germ("2*z", 10), &germ("3*z", 10)).unwrap());
    }
}
