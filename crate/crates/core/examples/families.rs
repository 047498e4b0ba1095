//! The built-in families of reversible germs.

use germ_forge::classify::p_invariant;
use germ_forge::reversal::{example_family, reverser_check, FamilyKind};

fn main() -> germ_forge::error::Result<()> {
    let kinds = [
        FamilyKind::Model { p: 3, trunc: 15 },
        FamilyKind::Twisted { s: 2, trunc: 11 },
        FamilyKind::Twisted { s: 4, trunc: 19 },
        FamilyKind::ConjugatedRandom { base: Box::new(FamilyKind::Model { p: 2, trunc: 11 }), seed: 42 },
    ];
    for kind in &kinds {
        let (f, g) = example_family(kind)?;
        println!("{kind:?}");
        println!("  f = {}", f.truncate(9).series());
        println!("  g = {}", g.truncate(5).series());
        println!("  p(f) = {}, g reverses f: {}, g^2 has order {:?}", p_invariant(&f)?, reverser_check(&f, &g), g.compose(&g).order_of(16));
    }
    Ok(())
}
