//! Formal conjugacy invariants and explicit conjugators.

use germ_forge::classify::{formally_conjugate, parabolic_invariants};
use germ_forge::germ::{conjugate, solve_conjugacy};
use germ_forge::parse::parse_germ;

fn main() -> germ_forge::error::Result<()> {
    let n = 12;
    for text in ["z + z^2", "z/(1+z)", "z + z^2 + z^3", "z + z^3 - z^5"] {
        let inv = parabolic_invariants(&parse_germ(text, n)?)?;
        println!("{text:<16} p = {}  lead = {}  a = {}", inv.p, inv.lead, inv.a);
    }

    let f = parse_germ("z + z^2", n)?;
    let g = parse_germ("z + 4*z^2", n)?;
    println!("z+z^2 ~ z+4z^2: {}", formally_conjugate(&f, &g)?);
    if let Some(w) = solve_conjugacy(&f, &g)? {
        let h = &w.conjugator;
        println!("h = {}", h.series());
        println!("h^-1 f h = {}", conjugate(h, &f).series());
        println!("free coefficients set to zero at degrees {:?}", w.resonant_choices.iter().map(|(k, _)| k).collect::<Vec<_>>());
    }

    // Rotations are rigid: -z is not conjugate to -z + z^2.
    let absent = solve_conjugacy(&parse_germ("-z", n)?, &parse_germ("-z + z^2", n)?)?;
    println!("-z ~ -z+z^2: {}", absent.is_some());
    Ok(())
}
