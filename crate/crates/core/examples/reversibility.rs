//! Deciding reversibility and building reversers.

use germ_forge::germ::conjugate;
use germ_forge::parse::parse_germ;
use germ_forge::reversal::{find_reverser, is_reversible, reversal_factorization, reverser_check, reverser_orders};

fn main() -> germ_forge::error::Result<()> {
    let n = 12;
    for text in ["z/(1+z)", "z + z^2", "z + z^3 + 2*z^5", "2*z", "-z + z^2", "-z/(1+z)"] {
        let r = is_reversible(&parse_germ(text, n)?)?;
        println!(
            "{text:<16} {:<22} reversible = {:<5} strongly = {:<5} orders = {:?}",
            r.multiplier_class.name(),
            r.formally_reversible,
            r.strongly_reversible,
            r.order_spectrum
        );
    }

    // Reversers are carried along by conjugation.
    let h = parse_germ("z + z^3", n)?;
    let f = conjugate(&h, &parse_germ("z/(1+z)", n)?);
    let g = find_reverser(&f, None)?;
    println!("f = {}", f.series());
    println!("reverser g = {}", g.series());
    println!("g^-1 f g = f^-1: {}", reverser_check(&f, &g));
    let k = reversal_factorization(&f, &g)?;
    println!("f = g^-1 k with k = g f, k^2 = g^2: {}", k.compose(&k) == g.compose(&g));

    for p in [1, 2, 3, 6, 12] {
        println!("p = {p:>2}: reverser orders {:?}", reverser_orders(p));
    }
    Ok(())
}
