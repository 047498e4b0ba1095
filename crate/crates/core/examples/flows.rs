//! Iterative logarithms and fractional iterates.

use germ_forge::classify::{iterative_log, FormalFlow};
use germ_forge::parse::parse_germ;
use germ_forge::scalar::CycloScalar;

fn main() -> germ_forge::error::Result<()> {
    let f = parse_germ("z + z^2", 10)?;
    println!("log f = {}", iterative_log(&f)?);

    let flow = FormalFlow::new(&f)?;
    let half = flow.at(&CycloScalar::ratio(1, 2))?;
    println!("f^(1/2)        = {}", half.series());
    println!("f^(1/2) twice  = {}", half.compose(&half).series());
    println!("f^(-1)         = {}", flow.at(&CycloScalar::from_integer(-1))?.series());
    println!("f^i            = {}", flow.at(&CycloScalar::i())?.truncate(5).series());
    Ok(())
}
