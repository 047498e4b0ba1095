//! Reference implementations used as oracles. They work on dense vectors of
//! rationals and share no code with the engine.
#![allow(dead_code)]

use germ_forge::germ::Germ;
use germ_forge::parse::parse_germ;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub type Q = BigRational;
/// Coefficients `c[0..=n]` of a series known through degree `n`.
pub type Poly = Vec<Q>;

pub fn q(num: i64, den: i64) -> Q {
    Q::new(BigInt::from(num), BigInt::from(den))
}

pub fn germ(text: &str, n: usize) -> Germ {
    parse_germ(text, n).unwrap()
}

/// Dense rational coefficients of a germ whose scalars are all rational.
pub fn to_poly(g: &Germ) -> Poly {
    (0..=g.trunc()).map(|k| g.coeff(k).as_rational().expect("rational coefficient").clone()).collect()
}

pub fn poly(coeffs: &[(usize, i64)], n: usize) -> Poly {
    let mut out = vec![Q::zero(); n + 1];
    for &(k, c) in coeffs {
        out[k] += q(c, 1);
    }
    out
}

pub fn mul(a: &[Q], b: &[Q], n: usize) -> Poly {
    let mut out = vec![Q::zero(); n + 1];
    for (i, x) in a.iter().enumerate().take(n + 1) {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate().take(n + 1 - i) {
            out[i + j] += x * y;
        }
    }
    out
}

/// `1/a` for `a[0] != 0`, by the recurrence `sum_j a_j b_{k-j} = [k = 0]`.
pub fn reciprocal(a: &[Q], n: usize) -> Poly {
    let mut b = vec![Q::zero(); n + 1];
    b[0] = Q::one() / &a[0];
    for k in 1..=n {
        let mut s = Q::zero();
        for j in 1..=k.min(a.len() - 1) {
            s += &a[j] * &b[k - j];
        }
        b[k] = -s / &a[0];
    }
    b
}

pub fn pow(a: &[Q], e: usize, n: usize) -> Poly {
    let mut out = vec![Q::zero(); n + 1];
    out[0] = Q::one();
    for _ in 0..e {
        out = mul(&out, a, n);
    }
    out
}

/// `a(b(z))` by summing powers of `b`, with `b[0] = 0`.
pub fn compose(a: &[Q], b: &[Q], n: usize) -> Poly {
    let mut out = vec![Q::zero(); n + 1];
    let mut bp = pow(b, 0, n);
    for c in a.iter().take(n + 1) {
        for (o, x) in out.iter_mut().zip(&bp) {
            *o += c * x;
        }
        bp = mul(&bp, b, n);
    }
    out
}

/// Compositional inverse by Lagrange inversion:
/// `[z^k] f^{-1} = (1/k) [w^{k-1}] (w / f(w))^k`.
pub fn lagrange_inverse(f: &[Q], n: usize) -> Poly {
    let shifted: Poly = f[1..].to_vec();
    let ratio = reciprocal(&shifted, n);
    let mut out = vec![Q::zero(); n + 1];
    for k in 1..=n {
        out[k] = &pow(&ratio, k, n)[k - 1] / q(k as i64, 1);
    }
    out
}

/// `-res_0 1/(f(z) - z)` for `f = z + f_{p+1} z^{p+1} + ...`, from the
/// Laurent expansion `z^{-(p+1)} / u(z)`.
pub fn residue_a(f: &[Q]) -> Q {
    let n = f.len() - 1;
    let p = (2..=n).find(|&k| !f[k].is_zero()).expect("not the identity") - 1;
    assert!(n >= 2 * p + 2, "needs truncation 2p+2");
    let u: Poly = f[p + 1..].to_vec();
    let inv = reciprocal(&u, u.len() - 1);
    -inv[p].clone()
}

/// `(-1)^{n-1} C_{n-1}` with `C` the Catalan numbers: the inverse of `z + z^2`.
pub fn signed_catalan(n: usize) -> Q {
    let m = n - 1;
    let mut c = BigInt::one();
    for k in 0..m {
        c = c * BigInt::from(2 * (2 * k + 1)) / BigInt::from(k + 2);
    }
    let c = Q::from_integer(c);
    if m % 2 == 1 {
        -c
    } else {
        c
    }
}

/// Generalized binomial `binom(alpha, k)`.
pub fn binom(alpha: &Q, k: usize) -> Q {
    let mut out = Q::one();
    for j in 0..k {
        out = out * (alpha - q(j as i64, 1)) / q(j as i64 + 1, 1);
    }
    out
}

pub fn is_negative(x: &Q) -> bool {
    x.is_negative()
}

/// Iterative logarithm from the Julia equation `v(f(z)) = f'(z) v(z)`, solved
/// one coefficient at a time: at degree `k + p` the unknown `v_k` enters with
/// factor `f_{p+1} (k - p - 1)`, and `v_{p+1} = f_{p+1}`. `f` must be known
/// through degree `n + p`.
pub fn julia_log(f: &[Q], n: usize) -> Poly {
    let m = f.len() - 1;
    let p = (2..=m).find(|&k| !f[k].is_zero()).expect("not the identity") - 1;
    assert!(m >= n + p);
    let deriv: Poly = (0..m).map(|k| &f[k + 1] * q(k as i64 + 1, 1)).collect();
    let mut v = vec![Q::zero(); n + 1];
    v[p + 1] = f[p + 1].clone();
    for k in p + 2..=n {
        let d = k + p;
        let vf = compose(&v, f, d);
        let fv = mul(&deriv, &v, d);
        let residual = &vf[d] - &fv[d];
        v[k] = -residual / (&f[p + 1] * q(k as i64 - p as i64 - 1, 1));
    }
    v
}
