//! Formal centralizer of a tangent germ.

use germ_forge::classify::formal_centralizer;
use germ_forge::parse::parse_germ;

fn main() -> germ_forge::error::Result<()> {
    let f = parse_germ("z + z^3 + z^4", 11)?;
    let c = formal_centralizer(&f)?;
    println!("torsion of order {}", c.torsion_order);
    if let Some(omega) = &c.torsion_generator {
        println!("generator: {}", omega.truncate(6).series());
        println!("commutes with f: {}", omega.compose(&f) == f.compose(omega));
        println!("order: {:?}", omega.order_of(4));
    }
    println!("flow generator: {}", c.flow_generator.truncate(6));
    Ok(())
}
