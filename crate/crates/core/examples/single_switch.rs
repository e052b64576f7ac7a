// Strong driving (`M ≥ E`): the optimal transfer switches exactly once, on
// the equator, after a normalized time of 2π.
//
// ```text
// cargo run --example single_switch -- 1.0 2.0
// ```

use qtopt::bloch::{arc_endpoints, BlochState, SystemParams};
use qtopt::synthesis::{synthesize, DEFAULT_ENDPOINT_TOL};

pub fn run(energy: f64, amplitude: f64) -> qtopt::Result<()> {
    let params = SystemParams::new(energy, amplitude)?;
    let result = synthesize(&params, DEFAULT_ENDPOINT_TOL)?;
    println!("alpha = {:.6}, k = {:.6}", params.alpha, params.k);
    for opt in &result.optima {
        let arcs = opt.law.arcs();
        let switch = arc_endpoints(&opt.law, &BlochState::north(), &params)[0];
        println!(
            "u0 = {:+}  first bang {:.6}  second bang {:.6}  switch at y = ({:.4}, {:.4}, {:.1e})",
            arcs[0].u,
            arcs[0].duration,
            arcs[1].duration,
            switch.y1(),
            switch.y2(),
            switch.y3(),
        );
    }
    println!(
        "T = {:.12} (normalized), {:.12} (physical)",
        result.optimal_time(),
        result.optimal_time_phys()
    );
    Ok(())
}

#[allow(dead_code)]
fn main() -> qtopt::Result<()> {
    let args: Vec<f64> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    run(args.first().copied().unwrap_or(1.0), args.get(1).copied().unwrap_or(2.0))
}
