//! Reversers of every admissible order for a model flow.

use germ_forge::classify::model_flow;
use germ_forge::error::GermError;
use germ_forge::reversal::{find_reverser, reverser_orders};
use germ_forge::scalar::CycloScalar;

fn main() -> germ_forge::error::Result<()> {
    let p = 6;
    let f = model_flow(p, &CycloScalar::one(), 4 * p + 3)?;
    println!("model p = {p}: {}", f.truncate(13).series());
    for order in reverser_orders(p as u32) {
        let g = find_reverser(&f, Some(order))?;
        println!("order {order:>2}: multiplier {} , order_of = {:?}", g.multiplier(), g.order_of(2 * p as u32));
    }
    match find_reverser(&f, Some(6)) {
        Err(GermError::UnrealizableOrder { order, available }) => println!("order {order}: impossible, only {available:?}"),
        other => println!("unexpected: {other:?}"),
    }
    Ok(())
}
