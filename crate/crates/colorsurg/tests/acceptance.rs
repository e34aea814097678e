use colorsurg::anyons;
use colorsurg::decoder::{self, SyndromeGraph};
use colorsurg::estimator::{self, AlgorithmSpec};
use colorsurg::lattice::{self, css_distance};
use colorsurg::layout::{SurgeryLayout, Which};
use colorsurg::surgery::{self, DressedLogicals, LogicalPrep, Phase, SurgeryTrace};
use colorsurg::{Pauli, PauliOperator, Result};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use std::time::Instant;

struct Line {
    id: &'static str,
    pass: bool,
    /// Criterion that cannot hold for any decoder; printed as FAIL but not fatal.
    known_unattainable: bool,
    detail: String,
}

fn line(id: &'static str, pass: bool, detail: String) -> Line {
    Line {
        id,
        pass,
        known_unattainable: false,
        detail,
    }
}

fn four_patch(d: usize) -> Result<SurgeryLayout> {
    SurgeryLayout::new(d, &PauliOperator::from_sparse("X1 X3 Z4", 4)?, &PauliOperator::from_sparse("Z1 Z2 Z3 Z4", 4)?)
}

fn prep_for(n: usize, seed: u64) -> LogicalPrep {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(1);
    LogicalPrep::random(n, 3, &mut rng)
}

fn single_window(t: &SurgeryTrace) -> bool {
    let phases: Vec<Phase> = t.records.iter().map(|r| r.phase).collect();
    phases == [Phase::Merge, Phase::Split]
        && t.merge_windows() == 1
        && t.result.outcome(Which::A).is_some()
        && t.result.outcome(Which::B).is_some()
}

fn main() {
    let mut lines = Vec::new();
    let mut windows_ok = true;
    let mut windows_trials = 0usize;

    // 1
    let t = Instant::now();
    let c1 = (|| -> Result<Line> {
        let l = four_patch(3)?;
        let trials = 1000u64;
        let dressed = DressedLogicals::new(&l)?;
        let (a, s, m) = run_oracle(&l, &dressed, 0..trials)?;
        windows_ok &= s;
        windows_trials += trials as usize;
        Ok(line(
            "1",
            a == trials as usize,
            format!(
                "four patches, X1X3Z4 / Z1Z2Z3Z4, d=3: {a}/{trials} seeded trials agree with the reference, outcomes and {} post-measurement expectations{}",
                dressed.pairs.len(),
                m.map(|m| format!("; first mismatch: {m}")).unwrap_or_default()
            ),
        ))
    })();
    lines.push(finish(c1, "1", t));

    // 2
    let t = Instant::now();
    let c2 = (|| -> Result<Line> {
        let pairs = 100u64;
        let seeds = 100u64;
        let results: Vec<(usize, bool, bool, Option<String>)> = (0..pairs)
            .into_par_iter()
            .map(|i| {
                let n = 2 + (i % 3) as usize;
                let mut rng = ChaCha8Rng::seed_from_u64(1000 + i);
                let (la, lb) = surgery::random_commuting_pair(n, &mut rng);
                let l = SurgeryLayout::new(3, &la, &lb)?;
                let leak = surgery::verify_no_leakage(&l)?;
                let dressed = DressedLogicals::new(&l)?;
                let (a, s, m) = run_oracle_serial(&l, &dressed, 0..seeds)?;
                let m = m.map(|m| format!("{} / {}: {m}", la.to_sparse(), lb.to_sparse()));
                Ok((a, s, leak.no_leakage() && l.check().is_empty(), m))
            })
            .collect::<Result<_>>()?;
        let agree = results.iter().filter(|r| r.0 == seeds as usize).count();
        let leak_ok = results.iter().filter(|r| r.2).count();
        windows_ok &= results.iter().all(|r| r.1);
        windows_trials += (pairs * seeds) as usize;
        let first = results.iter().find_map(|r| r.3.clone());
        Ok(line(
            "2",
            agree == pairs as usize && leak_ok == pairs as usize,
            format!(
                "{pairs} random commuting pairs on 2-4 patches x {seeds} seeds: {agree} pairs agree on every seed, {leak_ok} have measured span = <L_A, L_B>{}",
                first.map(|m| format!("; first mismatch: {m}")).unwrap_or_default()
            ),
        ))
    })();
    lines.push(finish(c2, "2", t));

    // 3
    lines.push(line(
        "3",
        windows_ok && windows_trials > 0,
        format!("{windows_trials} traces from criteria 1-2 each hold exactly one merge window then one split, and both outcomes come from it"),
    ));

    // 4
    let t = Instant::now();
    let c4 = (|| -> Result<Vec<Line>> {
        let g3 = SyndromeGraph::new(&four_patch(3)?)?;
        let g5 = SyndromeGraph::new(&four_patch(5)?)?;
        let (m3, m5) = (g3.fault_distance(), g5.fault_distance());
        let mut out = vec![line(
            "4a",
            m3 == Some(3) && m5 == Some(5),
            format!("min-cut fault distance {m3:?} at d=3 and {m5:?} at d=5"),
        )];
        let (tried1, failed1) = decoder::exhaustive_sweep(&g3, 1)?;
        let (tried, failed) = decoder::exhaustive_sweep(&g3, 2)?;
        out.push(Line {
            id: "4b",
            pass: failed == 0,
            known_unattainable: true,
            detail: format!(
                "exhaustive Bell errors of weight <= 2 at d=3: {failed}/{tried} fail after decoding (weight <= 1: {failed1}/{tried1}); a weight-1 and a weight-2 error share a syndrome and differ by a logical, so no decoder reaches zero at fault distance 3"
            ),
        });
        let ps = [0.003, 0.01, 0.03];
        let trials = 200_000;
        let est: Vec<_> = ps
            .iter()
            .enumerate()
            .map(|(i, &p)| decoder::monte_carlo_failure(&g3, 3, p, trials, 77 + i as u64))
            .collect::<Result<_>>()?;
        let xs: Vec<f64> = ps.iter().map(|p| p.ln()).collect();
        let ys: Vec<f64> = est.iter().map(|e| e.rate.max(1e-300).ln()).collect();
        let slope = fit_slope(&xs, &ys);
        out.push(line(
            "4c",
            (slope - 2.0).abs() <= 0.3 && est.iter().all(|e| e.failures > 0),
            format!(
                "Monte Carlo at d=3 ({trials} trials per p): rates {} -> log-log slope {slope:.3} (target 2.0 +/- 0.3)",
                est.iter().map(|e| format!("{:.3e}@{}", e.rate, e.p)).collect::<Vec<_>>().join(", ")
            ),
        ));
        Ok(out)
    })();
    match c4 {
        Ok(ls) => {
            let el = t.elapsed().as_secs_f64();
            for mut l in ls {
                l.detail.push_str(&format!(" [{el:.1}s]"));
                lines.push(l);
            }
        }
        Err(e) => lines.push(line("4", false, format!("error: {e}"))),
    }

    // 5
    let t = Instant::now();
    let b = anyons::enumerate_boundaries();
    let tw = anyons::enumerate_transparent_walls();
    let sw = anyons::enumerate_semitransparent_walls();
    let ow = anyons::enumerate_opaque_walls();
    let bad = b.iter().map(anyons::validate_boundary).chain(tw.iter().chain(&sw).chain(&ow).map(anyons::validate_wall)).filter(|v| !v.is_empty()).count();
    let distinct = (anyons::distinct_walls(&tw), anyons::distinct_walls(&sw), anyons::distinct_walls(&ow));
    let counts = (b.len(), tw.len(), sw.len(), ow.len());
    lines.push(with_time(
        line(
            "5",
            counts == (6, 72, 162, 36) && distinct == (72, 162, 36) && bad == 0,
            format!(
                "boundaries {}, transparent {} ({} distinct), semi-transparent {} ({} distinct), opaque {} ({} distinct); {bad} items fail validation",
                counts.0, counts.1, distinct.0, counts.2, distinct.1, counts.3, distinct.2
            ),
        ),
        t,
    ));

    // 6
    let t1 = estimator::table1(100);
    let r = t1.spacetime_ratio_surface_over_color;
    lines.push(line(
        "6",
        t1.rows[0].spacetime_td3 == 75.0 && (t1.rows[1].spacetime_td3 - 229.28).abs() < 0.005 && (r - 229.2843 / 75.0).abs() < 1e-4 && (r - 3.1).abs() < 0.05,
        format!(
            "N=100 spacetime coefficients: color {} T d^3, surface {:.2} T d^3, ratio {r:.4}",
            t1.rows[0].spacetime_td3, t1.rows[1].spacetime_td3
        ),
    ));

    // 7
    let t = Instant::now();
    let c7 = (|| -> Result<Line> {
        let alg = AlgorithmSpec::new(100, 1e8, 0.01)?;
        let grid = estimator::log_grid(5e-5, 2e-3, 50)?;
        let ts = Instant::now();
        let rows = estimator::compare_sweep(&alg, &grid)?;
        let sweep_s = ts.elapsed().as_secs_f64();
        let r3 = estimator::compare_point(&alg, 1e-3)?;
        let r4 = estimator::compare_point(&alg, 1e-4)?;
        let x = estimator::qubit_crossover(&alg, 5e-5, 2e-3)?;
        let ok = (0.85..=0.95).contains(&r3.spacetime_ratio)
            && r4.spacetime_ratio <= 0.55
            && x.is_some_and(|x| (3e-4..=5e-4).contains(&x))
            && rows.len() == 50
            && sweep_s < 5.0;
        Ok(line(
            "7",
            ok,
            format!(
                "N=100, T=1e8, budget 1%: spacetime ratio {:.3} at p=1e-3 (d_s {:.2}, d_c {:.2}), {:.3} at p=1e-4, qubit crossover at p={}, 50-point sweep in {sweep_s:.4}s; odd-rounded ratios {:.3} / {:.3}",
                r3.spacetime_ratio,
                r3.ds_real,
                r3.dc_real,
                r4.spacetime_ratio,
                x.map(|x| format!("{x:.3e}")).unwrap_or("none".into()),
                r3.spacetime_ratio_odd,
                r4.spacetime_ratio_odd
            ),
        ))
    })();
    lines.push(finish(c7, "7", t));

    // 8
    let t = Instant::now();
    let c8 = (|| -> Result<Line> {
        let thin = lattice::build_thin_code(3, 7)?;
        let k = thin.lattice.num_logical();
        let (dx, _) = css_distance(&thin.lattice, Pauli::X, 7)?;
        let (dz, _) = css_distance(&thin.lattice, Pauli::Z, 7)?;
        let logical_issues = thin.check_logicals().len();
        Ok(line(
            "8",
            k == 2 && dx == Some(3) && dz == Some(7) && logical_issues == 0,
            format!("thin (3,7) code: {} qubits, k={k}, d_x={dx:?}, d_z={dz:?} by exhaustive search", thin.num_qubits()),
        ))
    })();
    lines.push(finish(c8, "8", t));

    // 9
    let c = estimator::distillation_overhead(estimator::Scheme::ColorFastBlock);
    let s = estimator::distillation_overhead(estimator::Scheme::SurfaceFastBlock);
    let (space, time, st) = (c.space_d2 / s.space_d2, s.time_units / c.time_units, s.spacetime / c.spacetime);
    lines.push(line(
        "9",
        (space - 10.5 / 11.0).abs() < 1e-12 && (time - 1.8).abs() < 1e-12 && (st - 1.9).abs() < 0.05,
        format!("15-to-1 distillation: space {}d^2 vs {}d^2 (ratio {space:.4}), time speed-up {time:.2}x, spacetime improvement {st:.3}x", c.space_d2, s.space_d2),
    ));

    let mut unexpected = 0;
    for l in &lines {
        let tag = if l.pass { "PASS" } else { "FAIL" };
        let note = if !l.pass && l.known_unattainable { " (unattainable as stated)" } else { "" };
        println!("{tag} criterion {}{note}: {}", l.id, l.detail);
        if !l.pass && !l.known_unattainable {
            unexpected += 1;
        }
    }
    let passed = lines.iter().filter(|l| l.pass).count();
    println!("acceptance: {passed}/{} lines pass, {unexpected} unexpected failures", lines.len());
    if unexpected > 0 {
        std::process::exit(1);
    }
}

fn run_oracle(l: &SurgeryLayout, dressed: &DressedLogicals, seeds: std::ops::Range<u64>) -> Result<(usize, bool, Option<String>)> {
    let n = l.num_patches();
    let runs: Vec<(bool, bool, Option<String>)> = seeds
        .into_par_iter()
        .map(|s| {
            let (trace, diffs) = surgery::reference_trial(l, dressed, &prep_for(n, s), s)?;
            Ok((diffs.is_empty(), single_window(&trace), diffs.into_iter().next()))
        })
        .collect::<Result<_>>()?;
    Ok(tally(runs))
}

fn run_oracle_serial(l: &SurgeryLayout, dressed: &DressedLogicals, seeds: std::ops::Range<u64>) -> Result<(usize, bool, Option<String>)> {
    let n = l.num_patches();
    let runs: Vec<(bool, bool, Option<String>)> = seeds
        .map(|s| {
            let (trace, diffs) = surgery::reference_trial(l, dressed, &prep_for(n, s), s)?;
            Ok((diffs.is_empty(), single_window(&trace), diffs.into_iter().next()))
        })
        .collect::<Result<_>>()?;
    Ok(tally(runs))
}

fn tally(runs: Vec<(bool, bool, Option<String>)>) -> (usize, bool, Option<String>) {
    let agree = runs.iter().filter(|r| r.0).count();
    let single = runs.iter().all(|r| r.1);
    (agree, single, runs.into_iter().find_map(|r| r.2))
}

fn fit_slope(xs: &[f64], ys: &[f64]) -> f64 {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    sxy / sxx
}

fn with_time(mut l: Line, t: Instant) -> Line {
    l.detail.push_str(&format!(" [{:.1}s]", t.elapsed().as_secs_f64()));
    l
}

fn finish(r: Result<Line>, id: &'static str, t: Instant) -> Line {
    match r {
        Ok(l) => with_time(l, t),
        Err(e) => with_time(line(id, false, format!("error: {e}")), t),
    }
}
