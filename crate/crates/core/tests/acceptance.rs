//! Acceptance suite. Prints one `[PASS]`/`[FAIL]` line per criterion and
//! exits nonzero if any criterion fails or overruns its time budget.

use std::f64::consts::{FRAC_PI_4, PI};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use nalgebra::{Rotation3, Unit};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use qtopt::bloch::{
    arc_endpoints, flow_rotation, hopf_project, propagate, propagate_spinor, schrodinger_rwa_flow, BlochState,
    ControlArc, ControlLaw, SpinorState, SystemParams,
};
use qtopt::comparison::{period_estimate, rwa_time, sweep};
use qtopt::oracle::{bsb_search, free_switch_search, structured_search, SearchSpec};
use qtopt::synthesis::{
    f_of, g_of, reference_rival_times, synthesize, type2_solutions, v_of, z_rotation, DEFAULT_ENDPOINT_TOL,
};

type Check = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn err(e: impl std::fmt::Display) -> String {
    e.to_string()
}

fn ac1() -> Check {
    for (e, m) in [(1.0, 2.0), (1.0, 1.0)] {
        let p = SystemParams::new(e, m).map_err(err)?;
        let r = synthesize(&p, DEFAULT_ENDPOINT_TOL).map_err(err)?;
        ensure(!r.optima.is_empty(), || "no optima".into())?;
        for o in &r.optima {
            let t = o.candidate.total_time;
            ensure(o.switchings == 1, || format!("M={m}: {} switchings", o.switchings))?;
            ensure((t - 2.0 * PI).abs() < 1e-10, || format!("M={m}: T_norm = {t}"))?;
            let ends = arc_endpoints(&o.law, &BlochState::north(), &p);
            let y3 = ends[0].y3();
            ensure(y3.abs() < 1e-9, || format!("M={m}: switch point y3 = {y3:e}"))?;
            ensure(o.residual < 1e-9, || format!("M={m}: residual {:e}", o.residual))?;
            let phys = PI / (m * m + e * e).sqrt();
            ensure((r.optimal_time_phys() - phys).abs() < 1e-10, || {
                format!("M={m}: T_phys {} vs {phys}", r.optimal_time_phys())
            })?;
        }
    }
    Ok("single switch on the equator, T = 2π".into())
}

fn ac2() -> Check {
    let spec = SearchSpec { n_max: 3, grid_steps: 60, refine_iters: 200, target_tol: 1e-8, allow_singular: false };
    let mut worst = 0.0f64;
    for (e, m) in [(1.0, 2.0), (1.0, 1.0)] {
        let rep = structured_search(&SystemParams::new(e, m).map_err(err)?, &spec).map_err(err)?;
        let gap = rep.best_time - 2.0 * PI;
        ensure(gap.abs() < 1e-4, || format!("M={m}: best {} far from 2π", rep.best_time))?;
        ensure(gap > -1e-9, || format!("M={m}: oracle beat 2π by {:e}", -gap))?;
        worst = worst.max(gap.abs());
    }
    Ok(format!("best time within {worst:.1e} of 2π"))
}

fn ac3() -> Check {
    let spec = SearchSpec { allow_singular: true, ..SearchSpec::default() };
    let mut notes = Vec::new();
    let mut failures = Vec::new();
    for alpha in [FRAC_PI_4 + 0.05, PI / 3.0, 1.3] {
        let p = SystemParams::from_alpha(alpha).map_err(err)?;
        let (bsb_ref, two_ref) = reference_rival_times(alpha).map_err(err)?;
        let bsb = bsb_search(&p, &spec).map_err(err)?.best_time;
        let two = free_switch_search(&p, 2, &spec).map_err(err)?.best_time;
        for (name, got, want) in [("bsb", bsb, bsb_ref), ("two-switch", two, two_ref)] {
            if got <= 2.0 * PI - 1e-4 {
                failures.push(format!("α={alpha:.4}: {name} {got} below 2π"));
            }
            if (got - want).abs() >= 1e-3 {
                failures.push(format!("α={alpha:.4}: {name} {got:.6} vs closed form {want:.6}"));
            }
        }
        notes.push(format!("{alpha:.3}: {bsb:.4}/{two:.4}"));
    }
    let summary = format!("rivals (bsb/two-switch) {}", notes.join(", "));
    if failures.is_empty() {
        Ok(summary)
    } else {
        Err(format!("{}; {summary}", failures.join("; ")))
    }
}

fn ac4() -> Check {
    let mut notes = Vec::new();
    for alpha in [0.10, 0.13, 0.26] {
        let p = SystemParams::from_alpha(alpha).map_err(err)?;
        let r = synthesize(&p, DEFAULT_ENDPOINT_TOL).map_err(err)?;
        let ratio = PI / (2.0 * alpha);
        for o in &r.optima {
            let c = &o.candidate;
            let n = o.switchings as f64;
            ensure(n >= ratio - 1.0 && n < ratio + 1.0, || format!("α={alpha}: N = {n}"))?;
            let t = c.total_time;
            ensure(t > PI * ratio - 2.0 * PI && t < PI * ratio + PI, || format!("α={alpha}: T = {t}"))?;
            let (vi, vf) = (v_of(c.s_i, alpha).map_err(err)?, v_of(c.s_f, alpha).map_err(err)?);
            ensure((vi - vf).abs() < 1e-9, || format!("α={alpha}: v(s_i)={vi}, v(s_f)={vf}"))?;
            let arcs = o.law.arcs();
            let interior = &arcs[1..arcs.len() - 1];
            for a in interior {
                ensure((a.duration - interior[0].duration).abs() < 1e-12, || format!("α={alpha}: unequal interior"))?;
                ensure(a.duration >= PI && a.duration < 2.0 * PI, || {
                    format!("α={alpha}: interior {} outside [π, 2π)", a.duration)
                })?;
            }
            ensure(o.residual < 1e-8, || format!("α={alpha}: residual {:e}", o.residual))?;
        }
        notes.push(format!("{alpha}: N={} T={:.5}", r.optima[0].switchings, r.optimal_time()));
    }
    Ok(notes.join(", "))
}

fn ac5() -> Check {
    for alpha in [0.1, 0.13, 0.26, 0.5, 0.6, 0.7] {
        let ratio = PI / (2.0 * alpha);
        let f = |s: f64| f_of(s, alpha).map_err(err);
        let g = |s: f64| g_of(s, alpha).map_err(err);
        ensure((f(0.0)? - ratio).abs() < 1e-12 && (f(PI)? - ratio).abs() < 1e-12, || {
            format!("α={alpha}: F endpoints off")
        })?;
        ensure((g(0.0)? - (ratio + 1.0)).abs() < 1e-12 && (g(PI)? - (ratio - 1.0)).abs() < 1e-12, || {
            format!("α={alpha}: G endpoints off")
        })?;

        let steps = (PI / 1e-4) as usize;
        let (mut best_s, mut best_f) = (0.0, f64::INFINITY);
        for i in 0..=steps {
            let s = i as f64 * 1e-4;
            let v = f(s)?;
            if v < best_f {
                best_s = s;
                best_f = v;
            }
        }
        let expected = PI - (alpha.tan().powi(2)).acos();
        ensure((best_s - expected).abs() < 1e-3, || format!("α={alpha}: argmin F at {best_s}, want {expected}"))?;

        let mut prev = g(0.0)?;
        for i in 1..=(PI / 1e-3) as usize {
            let cur = g(i as f64 * 1e-3)?;
            ensure(cur < prev, || format!("α={alpha}: G not decreasing at s={}", i as f64 * 1e-3))?;
            prev = cur;
        }

        let n = type2_solutions(alpha).map_err(err)?.len();
        ensure(n == 2, || format!("α={alpha}: {n} TYPE-2 solutions"))?;
    }
    Ok("F/G endpoints, argmin of F, G monotone, two TYPE-2 solutions".into())
}

fn ac6() -> Check {
    let mut worst = 0.0f64;
    for i in 0..20 {
        for j in 0..10 {
            let s = 0.05 + (PI - 0.1) * i as f64 / 19.0;
            let alpha = 0.03 + (FRAC_PI_4 - 0.06) * j as f64 / 9.0;
            let (axis, theta) = z_rotation(s, alpha).map_err(err)?;
            let lhs = Rotation3::from_axis_angle(&Unit::new_normalize(axis), theta);
            let v = v_of(s, alpha).map_err(err)?;
            let rhs = flow_rotation(-1.0, v, alpha) * flow_rotation(1.0, v, alpha);
            worst = worst.max((lhs.matrix() - rhs.matrix()).norm());
        }
    }
    ensure(worst < 1e-10, || format!("Frobenius error {worst:e}"))?;
    Ok(format!("200 pairs, max Frobenius error {worst:.1e}"))
}

fn ac7() -> Check {
    let mut rng = StdRng::seed_from_u64(7);
    let mut worst = 0.0f64;
    for _ in 0..100 {
        let p = SystemParams::new(rng.random_range(0.2..3.0), rng.random_range(0.05..5.0)).map_err(err)?;
        let arcs = (0..rng.random_range(1..=5))
            .map(|_| ControlArc::new([-1.0, 0.0, 1.0][rng.random_range(0..3)], rng.random_range(0.0..7.0)))
            .collect::<Result<Vec<_>, _>>()
            .map_err(err)?;
        let law = ControlLaw::new(arcs);
        let y = propagate(&law, &BlochState::north(), &p);
        let psi = propagate_spinor(&law, &SpinorState::ground(), &p);
        worst = worst.max(hopf_project(&psi).chordal_distance(&y));
    }
    ensure(worst < 1e-8, || format!("max deviation {worst:e}"))?;
    Ok(format!("100 laws, max deviation {worst:.1e}"))
}

fn ac8() -> Check {
    for (e, m) in [(1.0, 1.0), (1.0, 0.1), (2.0, 0.5)] {
        let psi = schrodinger_rwa_flow(&SpinorState::ground(), m, e, rwa_time(m));
        let pop = psi.excited_population();
        ensure((pop - 1.0).abs() < 1e-8, || format!("(E,M)=({e},{m}): population {pop}"))?;
    }
    let rows = sweep(1.0, &[0.05, 0.1, 0.2, 0.5, 0.9, 1.0, 2.0, 10.0], true).map_err(err)?;
    for r in &rows {
        let exact = r.t_exact_phys.ok_or("missing exact time")?;
        ensure(r.t_rwa_phys <= exact, || format!("M={}: T_rwa {} > T {exact}", r.amplitude, r.t_rwa_phys))?;
    }
    Ok(format!("resonant transfer at π/(2M); T_rwa ≤ T on {} rows", rows.len()))
}

fn ac9() -> Check {
    let weak = SystemParams::new(1.0, 0.01).map_err(err)?;
    let t = synthesize(&weak, DEFAULT_ENDPOINT_TOL).map_err(err)?.optimal_time_phys();
    let ratio_weak = t / (PI * PI / (4.0 * 0.01));
    ensure((0.9..=1.1).contains(&ratio_weak), || format!("weak ratio {ratio_weak}"))?;
    let period = period_estimate(&weak).map_err(err)?;
    ensure((period - PI).abs() < 0.05 * PI, || format!("period {period}"))?;

    let strong = SystemParams::new(1.0, 1000.0).map_err(err)?;
    let t = synthesize(&strong, DEFAULT_ENDPOINT_TOL).map_err(err)?.optimal_time_phys();
    let ratio_strong = t / (PI / 1000.0);
    ensure((0.9..=1.1).contains(&ratio_strong), || format!("strong ratio {ratio_strong}"))?;
    Ok(format!("T/(π²/4M) = {ratio_weak:.4}, period = {period:.4}, T/(π/M) = {ratio_strong:.6}"))
}

fn ac10() -> Check {
    let mut notes = Vec::new();
    for alpha in [0.6, 0.7] {
        let p = SystemParams::from_alpha(alpha).map_err(err)?;
        let t = synthesize(&p, DEFAULT_ENDPOINT_TOL).map_err(err)?.optimal_time();
        let n_max = (PI / (2.0 * alpha)).ceil() as usize + 1;
        let spec = SearchSpec { n_max, ..SearchSpec::default() };
        let best = structured_search(&p, &spec).map_err(err)?.best_time;
        ensure((best - t).abs() < 1e-3, || format!("α={alpha}: oracle {best} vs synthesis {t}"))?;
        ensure(best > t - 1e-4, || format!("α={alpha}: oracle beats synthesis by {}", t - best))?;
        notes.push(format!("{alpha}: {best:.6} vs {t:.6}"));
    }
    Ok(notes.join(", "))
}

fn main() -> ExitCode {
    let criteria: [(&str, &str, u64, fn() -> Check); 10] = [
        ("AC1", "strong-field exactness", 1, ac1),
        ("AC2", "oracle concordance, strong field", 60, ac2),
        ("AC3", "rival strategies", 120, ac3),
        ("AC4", "weak-field structure", 15, ac4),
        ("AC5", "candidate functions", 5, ac5),
        ("AC6", "composition lemma", 5, ac6),
        ("AC7", "spinor/Bloch consistency", 10, ac7),
        ("AC8", "rotating-wave benchmark", 10, ac8),
        ("AC9", "asymptotics", 30, ac9),
        ("AC10", "oracle concordance, weak field", 300, ac10),
    ];
    let mut failed = 0;
    for (id, name, budget, check) in criteria {
        let start = Instant::now();
        let outcome = check();
        let elapsed = start.elapsed();
        let over = elapsed > Duration::from_secs(budget);
        let (tag, detail) = match (&outcome, over) {
            (Ok(d), false) => ("PASS", d.clone()),
            (Ok(d), true) => ("FAIL", format!("{d}; over the {budget} s budget")),
            (Err(e), _) => ("FAIL", e.clone()),
        };
        if tag == "FAIL" {
            failed += 1;
        }
        println!("[{tag}] {id} {name}: {detail} ({:.2} s)", elapsed.as_secs_f64());
    }
    println!("{} of 10 criteria passed", 10 - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
