//! Periodic germs: averaging linearizers and reduction to powers.

use germ_forge::germ::{averaging_linearizer, conjugate, solve_conjugacy, Germ};
use germ_forge::parse::parse_germ;
use germ_forge::scalar::CycloScalar;

fn main() -> germ_forge::error::Result<()> {
    let n = 10;
    let h = parse_germ("z + z^2 - z^4", n)?;
    let rotation = Germ::linear(CycloScalar::primitive_root(5, 1)?, n)?;
    let g = conjugate(&h, &rotation);
    println!("g = {}", g.truncate(4).series());
    println!("order of g: {:?}", g.order_of(10));
    let lin = averaging_linearizer(&g, 5)?;
    println!("linearized: {}", conjugate(&lin, &g).series());

    // Germs with multiplier zeta_3 conjugate exactly when their cubes do.
    let seed = parse_germ("zeta(3)*z + z^2", n)?;
    let f1 = conjugate(&parse_germ("z + z^2", n)?, &seed);
    let f2 = conjugate(&parse_germ("2*z - z^3", n)?, &seed);
    if let Some(w) = solve_conjugacy(&f1, &f2)? {
        println!("conjugator found, verified through degree {}", w.verified_to);
    }
    Ok(())
}
