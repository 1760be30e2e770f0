//! Tropical curve types: deformation spaces, multiplicities, symmetry.

use tropgw::tropcurve::build::{gamma_mu, v};
use tropgw::tropcurve::TropicalType;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let vertex = TropicalType::star(&[v(1, 0, 0), v(0, 2, 0), v(-1, -2, 0)]);
    println!("{vertex}");
    println!("  transverse: {}, m = {}", vertex.is_transverse(), vertex.m_gamma()?);

    for mu in [vec![1], vec![2, 1], vec![1, 1, 1]] {
        let g = gamma_mu(&mu);
        let def = g.deformation_space();
        println!("γ_{mu:?}: genus {}, deformation dimension {}, |Aut| = {}", g.genus()?, def.dimension, g.automorphism_count());
        println!("  transverse: {}", g.is_transverse());
    }

    let flipped = gamma_mu(&[2, 1]).flip_edge(0);
    println!("flipping an edge preserves the type: {}", flipped.is_isomorphic(&gamma_mu(&[2, 1])));
    Ok(())
}
