//! A four-end count evaluated in two constraint configurations that lie in
//! the same degeneration family; the two totals agree.

use tropgw::cli::suites::four_end_instances;
use tropgw::enumerate::EnumBounds;
use tropgw::invariants::weighted_count;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let order = 8;
    let bounds = EnumBounds::default();
    for input in four_end_instances()?.into_iter().filter(|i| i.name.as_deref().is_some_and(|n| n.starts_with("f2") || n == "f3_n2")) {
        println!("{}", input.name.as_deref().unwrap_or("?"));
        for (k, req) in input.requests(&bounds)?.iter().enumerate() {
            let r = weighted_count(req, order, 0)?;
            println!("  configuration {k}: {} curves contribute, W = {}", r.contributions.len(), r.value);
        }
    }
    Ok(())
}
