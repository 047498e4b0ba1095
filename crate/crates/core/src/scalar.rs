//! Exact arithmetic in cyclotomic fields `Q(zeta_n)`.
//!
//! An element of `Q(zeta_n)` is stored as its coefficient vector in the power
//! basis `1, zeta_n, ..., zeta_n^(phi(n)-1)`, i.e. reduced modulo the cyclotomic
//! polynomial `Phi_n`. Elements with different conductors are compared and
//! combined by first lifting both to the lcm of their conductors.

use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::sync::atomic::{AtomicU32, Ordering};
use std::sync::{Arc, OnceLock, RwLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{GermError, Result};

pub type Rational = BigRational;

pub const DEFAULT_CONDUCTOR_CAP: u32 = 240;

static CONDUCTOR_CAP: AtomicU32 = AtomicU32::new(DEFAULT_CONDUCTOR_CAP);

/// Largest conductor that constructors and checked arithmetic will produce.
pub fn conductor_cap() -> u32 {
    CONDUCTOR_CAP.load(Ordering::Relaxed)
}

pub fn set_conductor_cap(cap: u32) {
    CONDUCTOR_CAP.store(cap.max(1), Ordering::Relaxed);
}

/// Fail with `ConductorCapExceeded` if `n` is above the configured cap.
pub fn check_cap(n: u64) -> Result<u32> {
    let cap = conductor_cap();
    if n > cap as u64 {
        Err(GermError::ConductorCapExceeded { conductor: n, cap })
    } else {
        Ok(n as u32)
    }
}

pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn euler_phi(n: u32) -> usize {
    let mut n = n as u64;
    let mut result = n;
    let mut q = 2;
    while q * q <= n {
        if n % q == 0 {
            while n % q == 0 {
                n /= q;
            }
            result -= result / q;
        }
        q += 1;
    }
    if n > 1 {
        result -= result / n;
    }
    result as usize
}

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut q = 2;
    while q * q <= n {
        if n % q == 0 {
            out.push(q);
            while n % q == 0 {
                n /= q;
            }
        }
        q += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

fn divisors(n: u32) -> Vec<u32> {
    (1..=n).filter(|d| n % d == 0).collect()
}

type PolyCache = RwLock<HashMap<u32, Arc<Vec<i64>>>>;

fn cache() -> &'static PolyCache {
    static CACHE: OnceLock<PolyCache> = OnceLock::new();
    CACHE.get_or_init(|| RwLock::new(HashMap::new()))
}

/// Coefficients of `Phi_n`, lowest degree first. Computed once per conductor.
pub fn cyclotomic_polynomial(n: u32) -> Arc<Vec<i64>> {
    assert!(n >= 1, "conductor must be positive");
    if let Some(p) = cache().read().expect("cyclotomic cache poisoned").get(&n) {
        return Arc::clone(p);
    }
    // x^n - 1 = prod_{d | n} Phi_d(x)
    let mut num = vec![0i64; n as usize + 1];
    num[0] = -1;
    num[n as usize] = 1;
    for d in divisors(n).into_iter().filter(|&d| d < n) {
        let den = cyclotomic_polynomial(d);
        num = exact_div_monic(&num, &den);
    }
    let poly = Arc::new(num);
    cache()
        .write()
        .expect("cyclotomic cache poisoned")
        .entry(n)
        .or_insert_with(|| Arc::clone(&poly));
    poly
}

fn exact_div_monic(num: &[i64], den: &[i64]) -> Vec<i64> {
    let dd = den.len() - 1;
    let mut rem = num.to_vec();
    let mut quot = vec![0i64; num.len() - dd];
    for k in (0..quot.len()).rev() {
        let c = rem[k + dd];
        quot[k] = c;
        if c != 0 {
            for (j, &dj) in den.iter().enumerate() {
                rem[k + j] -= c * dj;
            }
        }
    }
    debug_assert!(rem.iter().all(|&r| r == 0));
    quot
}

/// Reduce a polynomial in `zeta_n` modulo `Phi_n`, returning exactly `phi(n)` coefficients.
fn reduce(mut poly: Vec<Rational>, n: u32) -> Vec<Rational> {
    let phi_poly = cyclotomic_polynomial(n);
    let deg = phi_poly.len() - 1;
    if poly.len() > deg {
        for top in (deg..poly.len()).rev() {
            if poly[top].is_zero() {
                continue;
            }
            let c = std::mem::replace(&mut poly[top], Rational::zero());
            for (j, &pj) in phi_poly[..deg].iter().enumerate() {
                if pj != 0 {
                    let idx = top - deg + j;
                    poly[idx] -= &c * Rational::from_integer(BigInt::from(pj));
                }
            }
        }
    }
    poly.resize(deg, Rational::zero());
    poly
}

/// Solve `matrix * x = rhs` for a full-column-rank system; `None` if inconsistent.
/// `matrix` is given as rows.
fn solve_linear(mut rows: Vec<Vec<Rational>>, mut rhs: Vec<Rational>) -> Option<Vec<Rational>> {
    let m = rows.len();
    let k = rows.first().map_or(0, |r| r.len());
    let mut pivot_row = 0;
    for col in 0..k {
        let Some(r) = (pivot_row..m).find(|&r| !rows[r][col].is_zero()) else {
            return None;
        };
        rows.swap(pivot_row, r);
        rhs.swap(pivot_row, r);
        let inv = rows[pivot_row][col].recip();
        for v in rows[pivot_row].iter_mut() {
            *v *= &inv;
        }
        rhs[pivot_row] *= &inv;
        for r in 0..m {
            if r != pivot_row && !rows[r][col].is_zero() {
                let factor = rows[r][col].clone();
                for c in col..k {
                    let delta = &factor * &rows[pivot_row][c];
                    rows[r][c] -= delta;
                }
                let delta = &factor * &rhs[pivot_row];
                rhs[r] -= delta;
            }
        }
        pivot_row += 1;
    }
    if rhs[pivot_row..].iter().any(|v| !v.is_zero()) {
        return None;
    }
    Some(rhs[..k].to_vec())
}

/// `zeta_n = exp(2 pi i k / n)`, kept as a (conductor, exponent) pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RootOfUnity {
    pub conductor: u32,
    pub exponent: u32,
}

impl RootOfUnity {
    /// Normalized so that the conductor equals the multiplicative order.
    pub fn new(conductor: u32, exponent: i64) -> Self {
        assert!(conductor >= 1);
        let k = exponent.rem_euclid(conductor as i64) as u32;
        let g = k.gcd(&conductor);
        if k == 0 {
            return RootOfUnity { conductor: 1, exponent: 0 };
        }
        RootOfUnity { conductor: conductor / g, exponent: k / g }
    }

    pub fn order(&self) -> u32 {
        self.conductor / self.exponent.gcd(&self.conductor).max(1)
    }

    pub fn to_scalar(&self) -> CycloScalar {
        CycloScalar::root_unchecked(self.conductor, self.exponent as i64)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FieldOp {
    Add,
    Sub,
    Mul,
    Div,
}

/// Exact element of a cyclotomic field.
#[derive(Clone, Debug)]
pub struct CycloScalar {
    conductor: u32,
    coeffs: Vec<Rational>,
}

impl CycloScalar {
    /// Build from an arbitrary polynomial in `zeta_n`; the result is reduced.
    pub fn from_poly(conductor: u32, poly: Vec<Rational>) -> Result<Self> {
        check_cap(conductor as u64)?;
        Ok(Self::from_poly_unchecked(conductor, poly))
    }

    fn from_poly_unchecked(conductor: u32, poly: Vec<Rational>) -> Self {
        CycloScalar { conductor, coeffs: reduce(poly, conductor) }
    }

    pub fn from_rational(r: Rational) -> Self {
        CycloScalar { conductor: 1, coeffs: vec![r] }
    }

    pub fn from_integer(n: i64) -> Self {
        Self::from_rational(Rational::from_integer(BigInt::from(n)))
    }

    pub fn ratio(num: i64, den: i64) -> Self {
        Self::from_rational(rat(num, den))
    }

    pub fn zero() -> Self {
        Self::from_integer(0)
    }

    pub fn one() -> Self {
        Self::from_integer(1)
    }

    pub fn conductor(&self) -> u32 {
        self.conductor
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    pub fn is_one(&self) -> bool {
        self.coeffs[0].is_one() && self.coeffs[1..].iter().all(Zero::is_zero)
    }

    pub fn is_rational(&self) -> bool {
        self.coeffs[1..].iter().all(Zero::is_zero)
    }

    pub fn as_rational(&self) -> Option<&Rational> {
        self.is_rational().then(|| &self.coeffs[0])
    }

    fn root_unchecked(n: u32, k: i64) -> Self {
        let k = k.rem_euclid(n as i64) as usize;
        let mut poly = vec![Rational::zero(); k + 1];
        poly[k] = Rational::one();
        Self::from_poly_unchecked(n, poly)
    }

    /// `zeta_n^k` with conductor `n`.
    pub fn primitive_root(n: u32, k: i64) -> Result<Self> {
        if n == 0 {
            return Err(GermError::BadParameters("root of unity of order 0".into()));
        }
        check_cap(n as u64)?;
        Ok(Self::root_unchecked(n, k))
    }

    /// `i = zeta_4`.
    pub fn i() -> Self {
        Self::root_unchecked(4, 1)
    }

    pub(crate) fn lift_conductor_unchecked(&self, m: u32) -> Self {
        if m == self.conductor {
            return self.clone();
        }
        if self.is_rational() {
            let mut coeffs = vec![Rational::zero(); euler_phi(m)];
            coeffs[0] = self.coeffs[0].clone();
            return CycloScalar { conductor: m, coeffs };
        }
        let step = (m / self.conductor) as usize;
        let mut poly = vec![Rational::zero(); (self.coeffs.len() - 1) * step + 1];
        for (j, c) in self.coeffs.iter().enumerate() {
            poly[j * step] = c.clone();
        }
        Self::from_poly_unchecked(m, poly)
    }

    /// Represent the same value in `Q(zeta_m)`.
    pub fn lift_conductor(&self, m: u32) -> Result<Self> {
        if m == 0 || m % self.conductor != 0 {
            return Err(GermError::NotAMultiple { from: self.conductor, to: m });
        }
        check_cap(m as u64)?;
        Ok(self.lift_conductor_unchecked(m))
    }

    fn common(&self, other: &Self) -> u32 {
        self.conductor.lcm(&other.conductor)
    }

    fn zip_with(&self, other: &Self, f: impl Fn(&Rational, &Rational) -> Rational) -> Self {
        if self.conductor == other.conductor {
            let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| f(a, b)).collect();
            return CycloScalar { conductor: self.conductor, coeffs };
        }
        if other.is_rational() || self.is_rational() {
            let zero = Rational::zero();
            let n = if other.is_rational() { self.conductor } else { other.conductor };
            let len = euler_phi(n);
            fn get<'a>(s: &'a CycloScalar, n: u32, j: usize, zero: &'a Rational) -> &'a Rational {
                if s.conductor == n {
                    &s.coeffs[j]
                } else if j == 0 {
                    &s.coeffs[0]
                } else {
                    zero
                }
            }
            let coeffs = (0..len).map(|j| f(get(self, n, j, &zero), get(other, n, j, &zero))).collect();
            return CycloScalar { conductor: n, coeffs };
        }
        let m = self.common(other);
        self.lift_conductor_unchecked(m).zip_with(&other.lift_conductor_unchecked(m), f)
    }

    fn scale(&self, r: &Rational) -> Self {
        CycloScalar { conductor: self.conductor, coeffs: self.coeffs.iter().map(|c| c * r).collect() }
    }

    fn mul_ref(&self, other: &Self) -> Self {
        if let Some(r) = other.as_rational() {
            return self.scale(r);
        }
        if let Some(r) = self.as_rational() {
            return other.scale(r);
        }
        if self.conductor != other.conductor {
            let m = self.common(other);
            return self.lift_conductor_unchecked(m).mul_ref(&other.lift_conductor_unchecked(m));
        }
        let len = self.coeffs.len();
        let mut poly = vec![Rational::zero(); 2 * len - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    poly[i + j] += a * b;
                }
            }
        }
        Self::from_poly_unchecked(self.conductor, poly)
    }

    /// Multiplicative inverse; `DivisionByZero` for zero.
    pub fn inverse(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(GermError::DivisionByZero);
        }
        if let Some(r) = self.as_rational() {
            return Ok(CycloScalar { conductor: self.conductor, coeffs: {
                let mut c = vec![Rational::zero(); self.coeffs.len()];
                c[0] = r.recip();
                c
            } });
        }
        // Solve (self * x) = 1 using the multiplication-by-self matrix.
        let n = self.conductor;
        let len = self.coeffs.len();
        let columns: Vec<CycloScalar> =
            (0..len).map(|j| self.mul_ref(&Self::root_unchecked(n, j as i64))).collect();
        let rows = (0..len).map(|r| columns.iter().map(|c| c.coeffs[r].clone()).collect()).collect();
        let mut rhs = vec![Rational::zero(); len];
        rhs[0] = Rational::one();
        let x = solve_linear(rows, rhs).ok_or_else(|| GermError::Inconsistent("singular multiplication matrix".into()))?;
        Ok(CycloScalar { conductor: n, coeffs: x })
    }

    pub fn checked_div(&self, other: &Self) -> Result<Self> {
        Ok(self.mul_ref(&other.inverse()?))
    }

    /// One field operation with conductor-cap enforcement.
    pub fn field_arith(&self, other: &Self, op: FieldOp) -> Result<Self> {
        check_cap(self.common(other) as u64)?;
        match op {
            FieldOp::Add => Ok(self + other),
            FieldOp::Sub => Ok(self - other),
            FieldOp::Mul => Ok(self * other),
            FieldOp::Div => self.checked_div(other),
        }
    }

    pub fn pow(&self, e: i64) -> Result<Self> {
        let base = if e < 0 { self.inverse()? } else { self.clone() };
        Ok(base.pow_u(e.unsigned_abs()))
    }

    pub fn pow_u(&self, mut e: u64) -> Self {
        let mut result = CycloScalar::one();
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                result = result.mul_ref(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul_ref(&base);
            }
        }
        result
    }

    /// Exact root-of-unity test. Every root of unity in `Q(zeta_n)` has order dividing lcm(2, n).
    pub fn detect_root_of_unity(&self) -> Option<RootOfUnity> {
        if self.is_zero() {
            return None;
        }
        if let Some(r) = self.as_rational() {
            return if r.is_one() {
                Some(RootOfUnity::new(1, 0))
            } else if (-r).is_one() {
                Some(RootOfUnity::new(2, 1))
            } else {
                None
            };
        }
        let big = (self.conductor as u64).lcm(&2);
        if !self.pow_u(big).is_one() {
            return None;
        }
        let mut order = big;
        for q in prime_factors(big) {
            while order % q == 0 && self.pow_u(order / q).is_one() {
                order /= q;
            }
        }
        let order = order as u32;
        (0..order)
            .filter(|k| k.gcd(&order) == 1)
            .map(|k| RootOfUnity { conductor: order, exponent: k })
            .find(|r| &r.to_scalar() == self)
    }

    /// Some `c` with `c^degree == self`, searched among rational multiples of roots of unity.
    /// `Ok(None)` when no such root exists in any cyclotomic field reachable that way.
    pub fn nth_root(&self, degree: u32) -> Result<Option<Self>> {
        if degree == 0 {
            return Err(GermError::BadParameters("zeroth root".into()));
        }
        if self.is_zero() {
            return Ok(Some(Self::zero()));
        }
        let big = (self.conductor as u64).lcm(&2) as u32;
        for k in 0..big {
            let unit = Self::root_unchecked(big, -(k as i64));
            let q = self.mul_ref(&unit);
            let Some(r) = q.as_rational() else { continue };
            // self = r * zeta_big^k; push the sign of r into the root of unity.
            let (r, k) = if r.is_negative() { (-r, (k + big / 2) % big) } else { (r.clone(), k) };
            let Some(rational_root) = rational_nth_root(&r, degree) else {
                return Ok(None);
            };
            let lifted = big as u64 * degree as u64;
            let (order, exp) = (0..degree as u64)
                .map(|j| {
                    let e = k as u64 + big as u64 * j;
                    let g = e.gcd(&lifted).max(1);
                    (lifted / g, e / g)
                })
                .min()
                .expect("degree >= 1");
            let order = check_cap(order)?;
            let root = Self::root_unchecked(order, exp as i64);
            return Ok(Some(root.scale(&rational_root)));
        }
        Ok(None)
    }

    /// The same value in the smallest conductor that contains it.
    pub fn minimal_form(&self) -> Self {
        if self.is_rational() {
            return Self::from_rational(self.coeffs[0].clone());
        }
        let n = self.conductor;
        for d in divisors(n) {
            if d == n {
                break;
            }
            if d % 4 == 2 {
                continue;
            }
            let basis: Vec<CycloScalar> =
                (0..euler_phi(d)).map(|j| Self::root_unchecked(d, j as i64).lift_conductor_unchecked(n)).collect();
            let rows = (0..self.coeffs.len())
                .map(|r| basis.iter().map(|b| b.coeffs[r].clone()).collect())
                .collect();
            if let Some(x) = solve_linear(rows, self.coeffs.clone()) {
                return CycloScalar { conductor: d, coeffs: x };
            }
        }
        self.clone()
    }

    pub fn to_complex(&self) -> (f64, f64) {
        let n = self.conductor as f64;
        let mut re = 0.0;
        let mut im = 0.0;
        for (j, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let v = c.to_f64().unwrap_or(f64::NAN);
            let angle = 2.0 * std::f64::consts::PI * j as f64 / n;
            re += v * angle.cos();
            im += v * angle.sin();
        }
        (re, im)
    }

    /// Decimal approximation for display. Limited to double precision.
    pub fn complex_approx(&self, digits: usize) -> (String, String) {
        let (re, im) = self.to_complex();
        (fixed(re, digits), fixed(im, digits))
    }

    /// Sign and magnitude text for embedding in a sum; multi-term values are parenthesized.
    pub(crate) fn signed_parts(&self) -> (bool, String) {
        let v = self.minimal_form();
        let terms: Vec<(usize, &Rational)> =
            v.coeffs.iter().enumerate().filter(|(_, c)| !c.is_zero()).collect();
        if terms.is_empty() {
            return (false, "0".into());
        }
        if terms.len() == 1 {
            let (j, c) = terms[0];
            return (c.is_negative(), monomial(&c.abs(), j, v.conductor));
        }
        let mut out = String::from("(");
        for (idx, (j, c)) in terms.iter().enumerate() {
            let body = monomial(&c.abs(), *j, v.conductor);
            match (idx, c.is_negative()) {
                (0, true) => out.push('-'),
                (0, false) => {}
                (_, true) => out.push_str(" - "),
                (_, false) => out.push_str(" + "),
            }
            out.push_str(&body);
        }
        out.push(')');
        (false, out)
    }
}

fn rational_nth_root(r: &Rational, degree: u32) -> Option<Rational> {
    let root = |x: &BigInt| {
        let y = x.nth_root(degree);
        (num_traits::pow(y.clone(), degree as usize) == *x).then_some(y)
    };
    Some(Rational::new(root(r.numer())?, root(r.denom())?))
}

fn fixed(x: f64, digits: usize) -> String {
    let s = format!("{:.*}", digits, x);
    if s.starts_with('-') && s[1..].chars().all(|c| c == '0' || c == '.') {
        s[1..].to_string()
    } else {
        s
    }
}

fn monomial(c: &Rational, j: usize, n: u32) -> String {
    let basis = match (j, n) {
        (0, _) => return c.to_string(),
        (1, 4) => "i".to_string(),
        (1, _) => format!("zeta({n})"),
        (_, _) => format!("zeta({n})^{j}"),
    };
    if c.is_one() {
        basis
    } else {
        format!("{c}*{basis}")
    }
}

impl PartialEq for CycloScalar {
    fn eq(&self, other: &Self) -> bool {
        if self.conductor == other.conductor {
            return self.coeffs == other.coeffs;
        }
        if self.is_rational() || other.is_rational() {
            return self.is_rational() && other.is_rational() && self.coeffs[0] == other.coeffs[0];
        }
        let m = self.common(other);
        self.lift_conductor_unchecked(m).coeffs == other.lift_conductor_unchecked(m).coeffs
    }
}

impl Eq for CycloScalar {}

impl fmt::Display for CycloScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (neg, body) = self.signed_parts();
        if neg {
            write!(f, "-{body}")
        } else {
            write!(f, "{body}")
        }
    }
}

impl From<i64> for CycloScalar {
    fn from(n: i64) -> Self {
        Self::from_integer(n)
    }
}

impl From<Rational> for CycloScalar {
    fn from(r: Rational) -> Self {
        Self::from_rational(r)
    }
}

macro_rules! binop {
    ($trait:ident, $method:ident, $body:expr) => {
        impl $trait<&CycloScalar> for &CycloScalar {
            type Output = CycloScalar;
            fn $method(self, rhs: &CycloScalar) -> CycloScalar {
                let f: fn(&CycloScalar, &CycloScalar) -> CycloScalar = $body;
                f(self, rhs)
            }
        }
        impl $trait<CycloScalar> for CycloScalar {
            type Output = CycloScalar;
            fn $method(self, rhs: CycloScalar) -> CycloScalar {
                (&self).$method(&rhs)
            }
        }
        impl $trait<&CycloScalar> for CycloScalar {
            type Output = CycloScalar;
            fn $method(self, rhs: &CycloScalar) -> CycloScalar {
                (&self).$method(rhs)
            }
        }
    };
}

binop!(Add, add, |a, b| a.zip_with(b, |x, y| x + y));
binop!(Sub, sub, |a, b| a.zip_with(b, |x, y| x - y));
binop!(Mul, mul, |a, b| a.mul_ref(b));
// Panics on division by zero, like integer division; use `checked_div` otherwise.
binop!(Div, div, |a, b| a.checked_div(b).expect("division by zero"));

impl Neg for &CycloScalar {
    type Output = CycloScalar;
    fn neg(self) -> CycloScalar {
        CycloScalar { conductor: self.conductor, coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }
}

impl Neg for CycloScalar {
    type Output = CycloScalar;
    fn neg(self) -> CycloScalar {
        -&self
    }
}
