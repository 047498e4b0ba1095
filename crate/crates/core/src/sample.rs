//! Seeded random germs for property checks and the example families.

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::germ::Germ;
use crate::scalar::CycloScalar;
use crate::series::TruncatedSeries;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn small_terms(rng: &mut impl Rng, degrees: std::ops::RangeInclusive<usize>) -> Vec<(usize, CycloScalar)> {
    degrees
        .filter_map(|k| rng.gen_bool(0.6).then(|| (k, CycloScalar::from_integer(rng.gen_range(-2..=2)))))
        .collect()
}

/// `c z + (small integer terms of degree <= 6)` with `c` drawn from a few
/// rationals, so conjugation changes leading coefficients too.
pub fn random_conjugator(rng: &mut impl Rng, trunc: usize) -> Germ {
    let multipliers = [(1, 1), (1, 1), (2, 1), (-1, 1), (1, 2), (-3, 2)];
    let &(num, den) = multipliers.choose(rng).expect("nonempty");
    let mut terms = vec![(1, CycloScalar::ratio(num, den))];
    terms.extend(small_terms(rng, 2..=trunc.min(6)));
    Germ::new(TruncatedSeries::new(terms, trunc)).expect("linear coefficient is nonzero")
}

/// Like [`random_conjugator`] but tangent to the identity.
pub fn random_tangent_conjugator(rng: &mut impl Rng, trunc: usize) -> Germ {
    let mut terms = vec![(1, CycloScalar::one())];
    terms.extend(small_terms(rng, 2..=trunc.min(6)));
    Germ::new(TruncatedSeries::new(terms, trunc)).expect("linear coefficient is nonzero")
}

/// A tangent-to-identity germ `z + c z^{p+1} + ...`, never the identity,
/// with `p` in `1..=max_p`.
pub fn random_tangent_germ(rng: &mut impl Rng, trunc: usize, max_p: usize) -> Germ {
    let p = rng.gen_range(1..=max_p.max(1)).min(trunc.saturating_sub(1)).max(1);
    let lead = *[-2i64, -1, 1, 2, 3].choose(rng).expect("nonempty");
    let mut terms = vec![(1, CycloScalar::one()), (p + 1, CycloScalar::from_integer(lead))];
    terms.extend(small_terms(rng, p + 2..=trunc.min(p + 6)));
    Germ::new(TruncatedSeries::new(terms, trunc)).expect("linear coefficient is nonzero")
}
