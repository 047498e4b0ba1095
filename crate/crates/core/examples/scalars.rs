//! Exact arithmetic in cyclotomic fields.

use germ_forge::parse::parse_scalar;
use germ_forge::scalar::CycloScalar;

fn main() -> germ_forge::error::Result<()> {
    let i = CycloScalar::i();
    let zeta8 = CycloScalar::primitive_root(8, 1)?;
    println!("i^2 = {}", &i * &i);
    println!("zeta(8)^2 = {}", zeta8.pow(2)?);
    println!("(1+i)/(1-i) = {}", parse_scalar("(1+i)/(1-i)")?);

    // Mixed conductors meet in Q(zeta_lcm).
    let mixed = &CycloScalar::primitive_root(3, 1)? * &zeta8;
    println!("zeta(3)*zeta(8) = {mixed}  (conductor {})", mixed.conductor());
    if let Some(root) = mixed.detect_root_of_unity() {
        println!("  a root of unity of order {}", root.order());
    }

    for (x, d) in [(CycloScalar::from_integer(-1), 4), (CycloScalar::ratio(9, 4), 2), (CycloScalar::from_integer(2), 2)] {
        match x.nth_root(d)? {
            Some(r) => println!("{d}-th root of {x}: {r}"),
            None => println!("{d}-th root of {x}: not in any cyclotomic field"),
        }
    }
    let (re, im) = zeta8.complex_approx(6);
    println!("zeta(8) ~ {re} + {im}i");
    Ok(())
}
