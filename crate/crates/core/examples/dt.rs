//! Reduced DT counts in q^{1/2} and their image under q = e^{iλ}.

use tropgw::cli::input::point_insertions;
use tropgw::enumerate::EnumBounds;
use tropgw::invariants::{absolute_gw, dt_reduced, dt_to_gw, Fan3};
use tropgw::tropcurve::build::v;
use tropgw::tropcurve::TropicalType;
use tropgw::weights::dt_consistency;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let order = 6;
    let bounds = EnumBounds::default();
    let fan = Fan3::cp3();
    let degrees = [1, 1, 1, 1];
    let ins = point_insertions(2);

    let dt = dt_reduced(&fan, &degrees, &ins, 0, &bounds)?;
    let gw = absolute_gw(&fan, &degrees, &ins, order, 0, &bounds)?;
    let img = dt_to_gw(&dt.value, degrees.iter().sum(), ins.len(), order);
    println!("DT  = {}", dt.value);
    println!("GW  = {}", gw.value);
    println!("image of DT = {} (real: {})", img.series, img.real);
    assert!(img.real && img.series == gw.value);

    let vertex = TropicalType::star(&[v(2, 0, 0), v(0, 3, 0), v(-2, -3, 0)]);
    println!("q-weight consistent on {vertex}: {}", dt_consistency(&vertex, order, 0, &bounds)?);
    Ok(())
}
