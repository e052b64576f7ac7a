// Tabulates the interior duration `v`, its partner `s'` and the candidate
// functions `F` and `G` on `[0, π]` as CSV, ready for plotting.
//
// ```text
// cargo run --example candidate_functions -- 0.13 > fg.csv
// ```

use std::f64::consts::PI;

use qtopt::synthesis::{f_argmin, f_of, g_of, s_prime, theta_of, v_of};

pub fn run(alpha: f64, points: usize) -> qtopt::Result<()> {
    println!("s,v,s_prime,theta,F,G");
    for j in 0..=points {
        let s = PI * j as f64 / points as f64;
        println!(
            "{s:.6},{:.12},{:.12},{:.12},{:.12},{:.12}",
            v_of(s, alpha)?,
            s_prime(s, alpha)?,
            theta_of(s, alpha)?,
            f_of(s, alpha)?,
            g_of(s, alpha)?
        );
    }
    let s_bar = f_argmin(alpha)?;
    eprintln!("min F = {:.12} at s = {s_bar:.12}; F(0) = G(0) - 1 = {:.12}", f_of(s_bar, alpha)?, PI / (2.0 * alpha));
    Ok(())
}

#[allow(dead_code)]
fn main() -> qtopt::Result<()> {
    let alpha = std::env::args().nth(1).and_then(|a| a.parse().ok()).unwrap_or(0.13);
    run(alpha, 200)
}
