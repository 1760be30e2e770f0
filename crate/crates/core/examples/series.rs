//! Exact truncated series: the quantum integers `[n]` in both variables.

use tropgw::exactnum::{series_sin_half, QLaurent};
use tropgw::invariants::identities::{closed_form_n_lambda, closed_form_n_q, recursive_brackets};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let order = 9;
    for n in 1..=4 {
        let q: QLaurent = closed_form_n_q(n)?;
        let lam = closed_form_n_lambda(n, order)?;
        println!("[{n}] = {q}");
        println!("    = {lam}");
        assert_eq!(q.substitute_lambda(order).series, lam);
    }

    let rec = recursive_brackets(6, order)?;
    assert_eq!(rec[5], closed_form_n_lambda(6, order)?);
    println!("recursion reproduces [6]");

    // The wedge-n vertex weight [n]/n.
    println!("[3]/3 = {}", series_sin_half(3, order)?);
    Ok(())
}
