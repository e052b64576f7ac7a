// Certifies a synthesized optimum with the brute-force structured search,
// which integrates trial laws directly and never uses the closed forms.

use std::time::Instant;

use qtopt::bloch::SystemParams;
use qtopt::oracle::{structured_search, SearchSpec};
use qtopt::synthesis::{synthesize, DEFAULT_ENDPOINT_TOL};

pub fn run(alphas: &[f64]) -> qtopt::Result<()> {
    for &alpha in alphas {
        let params = SystemParams::from_alpha(alpha)?;
        let synth = synthesize(&params, DEFAULT_ENDPOINT_TOL)?;
        let spec = SearchSpec { n_max: synth.optima[0].switchings + 1, ..SearchSpec::default() };
        let start = Instant::now();
        let report = structured_search(&params, &spec)?;
        println!(
            "alpha {alpha:.4}: synthesis {:.9} ({} sw), oracle {:.9} ({} sw), gap {:+.2e}, {} laws in {:.2?}",
            synth.optimal_time(),
            synth.optima[0].switchings,
            report.best_time,
            report.switchings,
            report.best_time - synth.optimal_time(),
            report.evaluations,
            start.elapsed()
        );
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> qtopt::Result<()> {
    run(&[0.3, 0.6, 0.7, 1.0, 1.3])
}
