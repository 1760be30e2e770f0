//! Absolute invariants of two toric threefolds from tropical counts.

use tropgw::cli::input::point_insertions;
use tropgw::enumerate::EnumBounds;
use tropgw::invariants::{absolute_gw, Fan3};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let order = 6;
    let bounds = EnumBounds::default();

    let lines = absolute_gw(&Fan3::cp3(), &[1, 1, 1, 1], &point_insertions(2), order, 0, &bounds)?;
    println!("CP³, lines through two points: {}", lines.value);
    println!("  from {} tropical types", lines.count.types);

    let p1 = absolute_gw(&Fan3::p1_cubed(), &[1, 1, 0, 0, 0, 0], &point_insertions(1), order, 0, &bounds)?;
    println!("(CP¹)³, class of a ruling line through a point: {}", p1.value);
    println!("  raw tropical count W = {}", p1.count.value);
    Ok(())
}
