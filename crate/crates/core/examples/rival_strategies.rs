// For `α ≥ π/4`, compares the single-switch optimum with the rival
// families: two switchings, and bang-singular-bang through the equator.

use std::f64::consts::{FRAC_PI_4, TAU};

use qtopt::bloch::SystemParams;
use qtopt::oracle::{bsb_search, free_switch_search, SearchSpec};
use qtopt::synthesis::reference_rival_times;

pub fn run(alphas: &[f64]) -> qtopt::Result<()> {
    let spec = SearchSpec { allow_singular: true, ..SearchSpec::default() };
    println!("{:>7} {:>10} {:>12} {:>12} {:>12} {:>12}", "alpha", "optimum", "two-switch", "closed form", "bsb", "closed form");
    for &alpha in alphas {
        let params = SystemParams::from_alpha(alpha)?;
        let (bsb_ref, two_ref) = reference_rival_times(alpha)?;
        let two = free_switch_search(&params, 2, &spec)?;
        let bsb = bsb_search(&params, &spec)?;
        println!(
            "{alpha:>7.4} {TAU:>10.6} {:>12.6} {two_ref:>12.6} {:>12.6} {bsb_ref:>12.6}",
            two.best_time, bsb.best_time
        );
        let arcs = bsb.best_law.arcs();
        println!(
            "        bsb law: {:+} for {:.4}, drift for {:.4}, {:+} for {:.4}",
            arcs[0].u, arcs[0].duration, arcs[1].duration, arcs[2].u, arcs[2].duration
        );
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> qtopt::Result<()> {
    run(&[FRAC_PI_4 + 0.05, 1.0, std::f64::consts::FRAC_PI_3, 1.3, 1.45])
}
