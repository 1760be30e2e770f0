//! Enumerate combinatorial types with given ends, then place each one on a
//! cycle fixing the lines of two ends.

use tropgw::enumerate::{enumerate_types, solve_placement, EndConstraint, EnumBounds, TropicalCycle};
use tropgw::tropcurve::build::v;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let ends = [v(1, 0, 0), v(0, 1, 0), v(-1, 0, 3), v(0, -1, -3)];
    let bounds = EnumBounds::default();
    let types = enumerate_types(&ends, &bounds)?;
    println!("{} types with ends {:?}", types.len(), ends.iter().map(|e| e.to_string()).collect::<Vec<_>>());

    let constraints = [
        EndConstraint::Point { point: [0, 0, -1] },
        EndConstraint::Point { point: [0, 0, 1] },
        EndConstraint::Free,
        EndConstraint::Free,
    ];
    let cycle = TropicalCycle::from_end_constraints(&ends, &constraints)?;
    for t in &types {
        let hits = solve_placement(t, &cycle, 7)?;
        if !hits.is_empty() {
            println!("{t}\n  meets the cycle: {} placement(s), m = {}", hits.len(), t.m_gamma()?);
        }
    }
    Ok(())
}
