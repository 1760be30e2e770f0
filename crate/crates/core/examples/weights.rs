//! Curve weights, including types that need δ-deformation, with the
//! derivation tree that produced them.

use tropgw::enumerate::EnumBounds;
use tropgw::invariants::identities::gamma_mu_closed_form;
use tropgw::tropcurve::build::gamma_mu;
use tropgw::weights::{Evaluator, Mode, WeightConfig};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let order = 8;
    let mut eval = Evaluator::new(WeightConfig { order, seed: 0, bounds: EnumBounds::default(), depth_cap: 8 });
    for mu in [vec![1], vec![2], vec![1, 1], vec![3, 1]] {
        let g = gamma_mu(&mu);
        let lam = eval.weight(&g, Mode::Lambda)?;
        let q = eval.weight(&g, Mode::Q)?;
        assert_eq!(lam.as_lambda(), Some(&gamma_mu_closed_form(&mu, order)?));
        println!("F(γ_{mu:?}) = {lam}\n           = {q}");
    }

    let tree = eval.derive(&gamma_mu(&[2, 1]), Mode::Lambda)?;
    println!("{}", serde_json::to_string_pretty(&*tree)?);
    Ok(())
}
