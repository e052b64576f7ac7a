// Transfer time against field amplitude at fixed energy, next to the
// rotating-wave benchmark `π/(2M)`. Prints the comparison CSV.

use qtopt::comparison::{rows_to_csv, sweep};

pub fn run(energy: f64, amplitudes: &[f64]) -> qtopt::Result<()> {
    let rows = sweep(energy, amplitudes, true)?;
    print!("{}", rows_to_csv(&rows));
    for r in &rows {
        let exact = r.t_exact_phys.unwrap_or(f64::NAN);
        eprintln!("M = {:>8.3}: T / T_rwa = {:.4}", r.amplitude, exact / r.t_rwa_phys);
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> qtopt::Result<()> {
    let amplitudes: Vec<f64> = (0..25).map(|j| 10f64.powf(-2.0 + 4.0 * j as f64 / 24.0)).collect();
    run(1.0, &amplitudes)
}
