//! Rotational symmetry of a germ reversed by `zeta_{2s} z`, and the signs
//! this forces on the inverse.

use germ_forge::parse::parse_germ;
use germ_forge::reversal::symmetric_form_check;

fn main() -> germ_forge::error::Result<()> {
    let f = parse_germ("z/(1-z)", 8)?;
    let r = symmetric_form_check(&f, 1)?;
    println!("z/(1-z) reversed by -z: {}", r.passes);
    for t in &r.inverse_terms {
        println!("  z^{}: c_{} = {}, inverse {}, equals (-1)^(k+1) c_k: {}", t.degree, t.k, t.coefficient, t.inverse_coefficient, t.sign_matches);
    }
    let r = symmetric_form_check(&parse_germ("z + z^2", 8)?, 1)?;
    println!("z + z^2 reversed by -z: {}", r.passes);
    Ok(())
}
