//! Truncated power series: parsing, arithmetic, composition and reversion.

use germ_forge::format::{format_series, OutputMode};
use germ_forge::parse::{parse_germ, parse_series};

fn main() -> germ_forge::error::Result<()> {
    let n = 8;
    let geometric = parse_series("1/(1-z)", n)?;
    println!("1/(1-z)        = {geometric}");
    println!("  squared      = {}", geometric.mul(&geometric));
    println!("  derivative   = {}", geometric.derivative());

    let f = parse_germ("z + z^2", n)?;
    let g = parse_germ("z/(1-z)", n)?;
    println!("f = {}", f.series());
    println!("f o g          = {}", f.compose(&g).series());
    println!("f^-1           = {}", f.inverse().series());
    println!("g^-1           = {}", g.inverse().series());

    // Explicit order terms cap the truncation.
    println!("{}", parse_series("z - z^2 + O(z^4)", 24)?);
    println!("{}", format_series(g.series(), OutputMode::Json));
    Ok(())
}
