//! The built-in acceptance suite behind `germ selftest`.
//!
//! Each check rebuilds its inputs from fixed seeds and reports pass or fail
//! with a one-line detail. Checks are independent and run on separate threads.

use std::fmt;
use std::time::{Duration, Instant};

use crate::classify::{a_invariant, exp_vector_field, model_flow, p_invariant, FormalFlow};
use crate::error::GermError;
use crate::germ::{averaging_linearizer, conjugate, solve_conjugacy, Germ};
use crate::parse::parse_germ;
use crate::reversal::{
    example_family, find_reverser, is_reversible, reversal_factorization, reverser_check, reverser_orders,
    symmetric_form_check, FamilyKind,
};
use crate::sample;
use crate::scalar::CycloScalar;

#[derive(Clone, Debug)]
pub struct Outcome {
    pub id: u8,
    pub title: &'static str,
    pub passed: bool,
    pub detail: String,
    pub elapsed: Duration,
}

impl fmt::Display for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mark = if self.passed { "PASS" } else { "FAIL" };
        write!(f, "[{mark}] {:>2} {} ({:.2}s): {}", self.id, self.title, self.elapsed.as_secs_f64(), self.detail)
    }
}

type Check = std::result::Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> std::result::Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn ok<T>(r: crate::error::Result<T>, what: &str) -> std::result::Result<T, String> {
    r.map_err(|e| format!("{what}: {e}"))
}

fn germ(text: &str, n: usize) -> Germ {
    parse_germ(text, n).expect("built-in expressions parse")
}

fn minus_one() -> CycloScalar {
    CycloScalar::from_integer(-1)
}

pub const TITLES: [&str; 11] = [
    "model reversal",
    "reversibility criterion",
    "reverser order spectrum",
    "multiplier obstruction",
    "reversal factorization",
    "flow laws",
    "squares",
    "twisted family",
    "averaging linearizer",
    "power reduction",
    "symmetric form signs",
];

/// A model flow conjugated by a seeded random germ, with `p = 1 + i mod 3`.
pub fn conjugated_model(i: u64) -> (Germ, usize) {
    let p = 1 + (i % 3) as usize;
    let n = 4 * p + 3;
    let model = model_flow(p, &CycloScalar::one(), n).expect("valid model");
    let h = sample::random_conjugator(&mut sample::rng(1000 + i), n);
    (conjugate(&h, &model), p)
}

fn model_reversal() -> Check {
    for p in 1..=6 {
        let (f, g) = ok(example_family(&FamilyKind::Model { p, trunc: 4 * p + 3 }), "model")?;
        ensure(reverser_check(&f, &g), || format!("zeta_{} z does not reverse the p = {p} model", 2 * p))?;
        let a = ok(a_invariant(&f), "a-invariant")?;
        ensure(a == CycloScalar::ratio(p as i64 + 1, 2), || format!("a = {a} for p = {p}"))?;
    }
    Ok("p = 1..6 reversed by zeta_{2p} z with a = (p+1)/2".into())
}

fn reversibility_criterion() -> Check {
    for i in 0..20 {
        let (f, p) = conjugated_model(i);
        let r = ok(is_reversible(&f), "is_reversible")?;
        ensure(r.formally_reversible && r.p == Some(p), || format!("conjugated model #{i} judged not reversible"))?;
        let g = r.reverser.ok_or("no reverser witness")?;
        ensure(reverser_check(&f, &g), || format!("witness for #{i} fails"))?;
    }
    for (text, a, expected) in [("z+z^2", 0, false), ("z+z^3", 0, false), ("z+z^2+z^3", 1, true)] {
        let f = germ(text, 12);
        let r = ok(is_reversible(&f), "is_reversible")?;
        ensure(r.a == Some(CycloScalar::from_integer(a)), || format!("a({text}) = {:?}", r.a))?;
        ensure(r.formally_reversible == expected, || format!("wrong verdict for {text}"))?;
        if let Some(g) = &r.reverser {
            ensure(reverser_check(&f, g), || format!("witness for {text} fails"))?;
        }
    }
    Ok("20 conjugated models reversible; z+z^2, z+z^3 not; z+z^2+z^3 has a = 1 and a verified reverser".into())
}

fn order_spectrum() -> Check {
    let table: [(u32, &[u32]); 6] = [(1, &[2]), (2, &[4]), (3, &[2, 6]), (4, &[8]), (6, &[4, 12]), (12, &[8, 24])];
    for (p, orders) in table {
        let got: Vec<u32> = reverser_orders(p).into_iter().collect();
        ensure(got == orders, || format!("orders({p}) = {got:?}"))?;
    }
    let mut count = 0;
    for p in [1usize, 2, 3, 6] {
        let f = ok(model_flow(p, &CycloScalar::one(), 4 * p + 3), "model")?;
        for o in reverser_orders(p as u32) {
            let g = ok(find_reverser(&f, Some(o)), "find_reverser")?;
            ensure(g.order_of(2 * p as u32) == Some(o), || format!("p = {p}: reverser of order {o} has wrong order"))?;
            ensure(reverser_check(&f, &g), || format!("p = {p}: order {o} reverser fails"))?;
            count += 1;
        }
    }
    Ok(format!("order table matches; {count} targeted reversers have the requested order"))
}

fn multiplier_obstruction() -> Check {
    let mut checked = 0;
    let mut record = |g: &Germ, p: usize| -> std::result::Result<(), String> {
        checked += 1;
        ensure(g.multiplier().pow_u(p as u64) == minus_one(), || format!("m(g)^{p} != -1 for m(g) = {}", g.multiplier()))
    };
    for p in 1..=6 {
        let f = ok(model_flow(p, &CycloScalar::one(), 4 * p + 3), "model")?;
        record(&ok(find_reverser(&f, None), "find_reverser")?, p)?;
        for o in reverser_orders(p as u32) {
            record(&ok(find_reverser(&f, Some(o)), "find_reverser")?, p)?;
        }
    }
    for i in 0..20 {
        let (f, p) = conjugated_model(i);
        record(&ok(find_reverser(&f, None), "find_reverser")?, p)?;
    }
    let mut rng = sample::rng(4);
    for i in 0..50 {
        let f = sample::random_tangent_germ(&mut rng, 12, 3);
        let g = sample::random_tangent_conjugator(&mut rng, 12);
        ensure(!reverser_check(&f, &g), || format!("tangent pair #{i} passes the reverser check"))?;
    }
    Ok(format!("{checked} reversers satisfy m(g)^p = -1; 50 tangent candidates rejected"))
}

fn factorization() -> Check {
    let mut pairs = Vec::new();
    for p in 1..=4 {
        pairs.push(ok(example_family(&FamilyKind::Model { p, trunc: 4 * p + 3 }), "model")?);
    }
    pairs.push(ok(example_family(&FamilyKind::Twisted { s: 2, trunc: 11 }), "twisted")?);
    for seed in 0..3 {
        let base = Box::new(FamilyKind::Model { p: 1 + seed as usize, trunc: 11 });
        pairs.push(ok(example_family(&FamilyKind::ConjugatedRandom { base, seed }), "conjugated")?);
    }
    for i in 0..5 {
        let (f, _) = conjugated_model(i);
        let g = ok(find_reverser(&f, None), "find_reverser")?;
        pairs.push((f, g));
    }
    for (f, g) in &pairs {
        let h = ok(reversal_factorization(f, g), "factorization")?;
        ensure(h.compose(&h) == g.compose(g) && g.inverse().compose(&h) == *f, || "identities fail".into())?;
    }
    let h = ok(reversal_factorization(&germ("z/(1+z)", 12), &germ("-z", 12)), "factorization")?;
    ensure(h == germ("-z/(1+z)", 12) && h.compose(&h).is_identity(), || format!("h = {}", h.series()))?;
    Ok(format!("{} pairs factor as g^-1 h with h^2 = g^2; z/(1+z) gives h = -z/(1+z)", pairs.len()))
}

fn flow_laws() -> Check {
    let times = [(1, 2), (-1, 2), (1, 3), (-1, 3), (2, 1)];
    let mut rng = sample::rng(6);
    for i in 0..25 {
        let f = sample::random_tangent_germ(&mut rng, 20, 3);
        let n = f.trunc();
        let family = ok(FormalFlow::new(&f), "flow")?;
        let at = |num: i64, den: i64| ok(family.at(&CycloScalar::ratio(num, den)), "flow");
        ensure(at(0, 1)?.is_identity(), || format!("#{i}: flow at 0 is not the identity"))?;
        ensure(at(1, 1)? == f, || format!("#{i}: flow at 1 differs from f"))?;
        let half = at(1, 2)?;
        ensure(half.compose(&half) == f, || format!("#{i}: half flow does not square to f"))?;
        let log = family.log();
        ensure(exp_vector_field(log, &CycloScalar::one(), n) == *f.series(), || format!("#{i}: exp(log f) != f"))?;
        let flows: Vec<Germ> = times.iter().map(|&(a, b)| at(a, b)).collect::<std::result::Result<_, _>>()?;
        for (x, &(a, b)) in times.iter().enumerate() {
            for (y, &(c, d)) in times.iter().enumerate() {
                let sum = at(a * d + c * b, b * d)?;
                ensure(flows[x].compose(&flows[y]) == sum, || format!("#{i}: f^{a}/{b} f^{c}/{d} != f^(sum)"))?;
            }
        }
    }
    Ok("25 germs at truncation 20 satisfy the one-parameter group laws".into())
}

fn squares() -> Check {
    let mut sample: Vec<Germ> = (0..20).map(|i| conjugated_model(i).0).collect();
    for text in ["z+z^2", "z+z^3", "z+z^2+z^3"] {
        sample.push(germ(text, 12));
    }
    for (i, f) in sample.iter().enumerate() {
        let a = ok(is_reversible(f), "is_reversible")?.formally_reversible;
        let b = ok(is_reversible(&f.compose(f)), "is_reversible")?.formally_reversible;
        ensure(a == b, || format!("sample #{i}: verdicts of f and f^2 differ"))?;
    }
    let g = germ("-z+z^2", 12);
    let square = g.compose(&g);
    let rg = ok(is_reversible(&g), "is_reversible")?;
    let rs = ok(is_reversible(&square), "is_reversible")?;
    ensure(rg.formally_reversible == rs.formally_reversible, || "-z+z^2 and its square disagree".into())?;
    ensure(rg.a == Some(CycloScalar::ratio(1, 8)), || format!("a((-z+z^2)^2) = {:?}", rg.a))?;
    // A reversible multiplier -1 germ: -z commutes with the p = 2 model.
    let model = ok(model_flow(2, &CycloScalar::one(), 16), "model")?;
    let f = conjugate(&germ("z+z^2", 16), &germ("-z", 16).compose(&model));
    let square = f.compose(&f);
    let r = ok(is_reversible(&f), "is_reversible")?;
    ensure(r.formally_reversible, || "-(model) judged not reversible".into())?;
    let g2 = ok(find_reverser(&square, None), "find_reverser")?;
    // Data through degree n fixes a reverser of the square only through n - p(f^2).
    let n = f.trunc();
    let q = ok(p_invariant(&square), "p")?;
    let agreed = conjugate(&g2, &f).series().agreement(f.inverse().series()).unwrap_or(0);
    ensure(agreed + q >= n, || format!("reverser of the square reverses f only through degree {agreed}"))?;
    Ok("verdicts agree with squares on 23 germs; -z+z^2 not reversible (a = 1/8); reverser of a square reverses the root through n - p".into())
}

fn twisted_family() -> Check {
    let (f, g) = ok(example_family(&FamilyKind::Twisted { s: 2, trunc: 11 }), "twisted")?;
    ensure(ok(p_invariant(&f), "p")? == 2, || "p(f) != 2".into())?;
    ensure(g.multiplier() == CycloScalar::i() && g.order_of(8) == Some(4), || "mu is not i z of order 4".into())?;
    ensure(g.compose(&g).order_of(4) == Some(2), || "g^2 does not have order 2".into())?;
    ensure(reverser_check(&f, &g), || "mu does not reverse f".into())?;
    let (f, g) = ok(example_family(&FamilyKind::Twisted { s: 4, trunc: 19 }), "twisted")?;
    ensure(ok(p_invariant(&f), "p")? == 4, || "p(f) != 4".into())?;
    ensure(g.order_of(16) == Some(8), || "mu does not have order 8".into())?;
    ensure(reverser_orders(4).into_iter().collect::<Vec<_>>() == [8], || "orders(4) != {8}".into())?;
    for o in [2, 4, 6] {
        let e = find_reverser(&f, Some(o));
        ensure(matches!(e, Err(GermError::UnrealizableOrder { .. })), || format!("order {o} reverser reported"))?;
    }
    Ok("s = 2 gives p = 2 with i z of order 4; s = 4 gives p = 4 with only order 8".into())
}

fn averaging() -> Check {
    let mut rng = sample::rng(9);
    for i in 0..10u32 {
        let order = 2 + i % 7;
        let n = 12;
        let rotation = ok(Germ::linear(ok(CycloScalar::primitive_root(order, 1), "root")?, n), "linear")?;
        let h = sample::random_conjugator(&mut rng, n);
        let g = conjugate(&h, &rotation);
        let lin = ok(averaging_linearizer(&g, order), "averaging")?;
        ensure(conjugate(&lin, &g) == rotation, || format!("#{i}: averaging fails for order {order}"))?;
    }
    Ok("10 conjugated rotations of order 2..8 linearized exactly".into())
}

fn power_reduction() -> Check {
    let n = 12;
    let zeta = ok(CycloScalar::primitive_root(3, 1), "root")?;
    let seed = Germ::new(crate::series::TruncatedSeries::new([(1, zeta), (2, CycloScalar::one())], n))
        .map_err(|e| e.to_string())?;
    for i in 0..4u64 {
        let h1 = sample::random_tangent_conjugator(&mut sample::rng(20 + i), n);
        let h2 = sample::random_conjugator(&mut sample::rng(40 + i), n);
        let (f, g) = (conjugate(&h1, &seed), conjugate(&h2, &seed));
        let w = ok(solve_conjugacy(&f, &g), "solve_conjugacy")?.ok_or_else(|| format!("#{i}: no witness"))?;
        let d = w.verified_to;
        ensure(conjugate(&w.conjugator, &f).truncate(d) == g.truncate(d), || format!("#{i}: witness fails on f"))?;
        let (f3, g3) = (f.iterate(3), g.iterate(3));
        ensure(conjugate(&w.conjugator, &f3).truncate(d) == g3.truncate(d), || format!("#{i}: witness fails on cubes"))?;
    }
    let absent = ok(solve_conjugacy(&germ("-z", n), &germ("-z+z^2", n)), "solve_conjugacy")?;
    ensure(absent.is_none(), || "-z and -z+z^2 reported conjugate".into())?;
    Ok("4 zeta_3 pairs conjugated through their cubes; -z vs -z+z^2 absent".into())
}

fn symmetric_signs() -> Check {
    let r = ok(symmetric_form_check(&germ("z/(1-z)", 12), 1), "symcheck")?;
    ensure(r.passes && r.support_in_pattern, || "z/(1-z) is not symmetric for s = 1".into())?;
    ensure(r.inverse_terms.iter().all(|t| t.sign_matches), || "inverse coefficients break (-1)^(k+1) c_k".into())?;
    let flipped = r.inverse_terms.iter().filter(|t| !t.coefficient.is_zero()).count();
    Ok(format!("inverse coefficients equal (-1)^(k+1) c_k at {flipped} degrees, opposite to (-1)^k c_k"))
}

pub fn run(id: u8) -> Outcome {
    let start = Instant::now();
    let check = match id {
        1 => model_reversal(),
        2 => reversibility_criterion(),
        3 => order_spectrum(),
        4 => multiplier_obstruction(),
        5 => factorization(),
        6 => flow_laws(),
        7 => squares(),
        8 => twisted_family(),
        9 => averaging(),
        10 => power_reduction(),
        11 => symmetric_signs(),
        _ => Err(format!("no check numbered {id}")),
    };
    let title = TITLES.get(id.wrapping_sub(1) as usize).copied().unwrap_or("unknown");
    match check {
        Ok(detail) => Outcome { id, title, passed: true, detail, elapsed: start.elapsed() },
        Err(detail) => Outcome { id, title, passed: false, detail, elapsed: start.elapsed() },
    }
}

pub fn run_all() -> Vec<Outcome> {
    std::thread::scope(|scope| {
        let handles: Vec<_> = (1..=11u8).map(|id| scope.spawn(move || run(id))).collect();
        handles
            .into_iter()
            .zip(1..)
            .map(|(h, id)| {
                h.join().unwrap_or_else(|_| Outcome {
                    id,
                    title: TITLES[id as usize - 1],
                    passed: false,
                    detail: "check panicked".into(),
                    elapsed: Duration::ZERO,
                })
            })
            .collect()
    })
}

#[cfg(test)]
mod tests {
    #[test]
    fn all_checks_pass() {
        for outcome in super::run_all() {
            println!("{outcome}");
            assert!(outcome.passed, "{outcome}");
        }
    }
}
