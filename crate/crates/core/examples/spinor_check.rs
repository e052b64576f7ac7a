// Replays an optimal law on the Schrödinger equation and compares the
// projected state with the Bloch-sphere trajectory arc by arc.

use qtopt::bloch::{arc_endpoints, hopf_project, propagate_spinor, BlochState, ControlLaw, SpinorState, SystemParams};
use qtopt::synthesis::{synthesize, DEFAULT_ENDPOINT_TOL};

pub fn run(energy: f64, amplitude: f64) -> qtopt::Result<()> {
    let params = SystemParams::new(energy, amplitude)?;
    let law = &synthesize(&params, DEFAULT_ENDPOINT_TOL)?.optima[0].law;
    let bloch = arc_endpoints(law, &BlochState::north(), &params);
    let mut worst = 0.0f64;
    for (j, y) in bloch.iter().enumerate() {
        let prefix = ControlLaw::new(law.arcs()[..=j].to_vec());
        let psi = propagate_spinor(&prefix, &SpinorState::ground(), &params);
        worst = worst.max(hopf_project(&psi).chordal_distance(y));
    }
    let psi = propagate_spinor(law, &SpinorState::ground(), &params);
    println!("{} arcs, t_phys = {:.10}", law.arcs().len(), law.total_time() / params.k);
    println!("excited population {:.15}", psi.excited_population());
    println!("max spinor/Bloch deviation at switches {worst:.2e}");
    Ok(())
}

#[allow(dead_code)]
fn main() -> qtopt::Result<()> {
    run(1.0, 0.25)
}
