// Weak driving (`M < E`): enumerate every structured candidate, keep those
// that reach the excited state, and print the fastest ones.

use qtopt::bloch::SystemParams;
use qtopt::synthesis::{synthesize, DEFAULT_ENDPOINT_TOL};

pub fn run(alpha: f64) -> qtopt::Result<()> {
    let params = SystemParams::from_alpha(alpha)?;
    let result = synthesize(&params, DEFAULT_ENDPOINT_TOL)?;
    println!("alpha = {alpha}");
    println!("switchings in [{:.3}, {:.3}), time in ({:.4}, {:.4})", result.switch_bounds.0, result.switch_bounds.1, result.time_bounds.0, result.time_bounds.1);
    println!("{:<10} {:>5} {:>10} {:>10} {:>4} {:>10} {:>12} {:>9}", "kind", "sign", "s_i", "interior", "n", "s_f", "T_norm", "residual");
    for c in &result.candidates {
        let k = &c.candidate;
        println!(
            "{:<10} {:>5} {:>10.6} {:>10.6} {:>4} {:>10.6} {:>12.8} {:>9.1e}",
            format!("{:?}", k.kind),
            k.first_sign,
            k.s_i,
            k.interior,
            k.n_interior,
            k.s_f,
            k.total_time,
            c.residual
        );
    }
    let best = &result.optima[0];
    println!("optimal: {} switchings, T = {:.8}", best.switchings, result.optimal_time());
    Ok(())
}

#[allow(dead_code)]
fn main() -> qtopt::Result<()> {
    let alpha = std::env::args().nth(1).and_then(|a| a.parse().ok()).unwrap_or(0.13);
    run(alpha)
}
