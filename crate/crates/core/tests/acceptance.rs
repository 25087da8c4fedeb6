//! Acceptance gate. Runs every criterion at its stated tolerance and
//! runtime budget, prints one PASS/FAIL line each and exits nonzero if any
//! fails. Built with `harness = false` so the lines show up in plain
//! `cargo test` output.

use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use sphermax::dimension::{beta_estimate, closed_form_profile, nu_sharp_estimate, NuSharpProfile};
use sphermax::entropy::{brute_force_cover_count, check_mainassu, greedy_count};
use sphermax::setgen::DilationSetSpec;
use sphermax::sphere_lab::knapp::default_test_radii;
use sphermax::sphere_lab::{
    build_instance, check_disjoint, geometry_inclusion_test, lower_bound_experiment, pointwise_lower_bounds,
    scaling_invariance_test, BandRule, ExperimentOptions, KRule, KnappCase, KnappConfig, LARGE_K_EPS, SMALL_K_EPS,
};
use sphermax::typeset::{
    builtin_profiles, check_convexity, verify_benchmark, verify_equivalence, Benchmark, BOUNDARY_TOL,
};
use sphermax::Result;

struct Outcome {
    passed: bool,
    detail: String,
}

fn outcome(passed: bool, detail: impl Into<String>) -> Result<Outcome> {
    Ok(Outcome { passed, detail: detail.into() })
}

fn full() -> DilationSetSpec {
    DilationSetSpec::FullInterval { lo: 1.0, hi: 2.0 }
}

fn cantor() -> DilationSetSpec {
    DilationSetSpec::Cantor { ratio: 1.0 / 3.0, lo: 1.0, hi: 2.0 }
}

const JS: [u32; 4] = [6, 8, 10, 12];

/// The slope configurations: d = 2, p = 2, two sets, two weights and the
/// two k rules (k = ⌊j/2⌋ for small k, k = j − 2 for large k).
fn slope_configs() -> Vec<(&'static str, DilationSetSpec, f64, KRule)> {
    let mut out = Vec::new();
    for (name, spec) in [("full", full()), ("cantor", cantor())] {
        for alpha in [0.0, -0.5] {
            for rule in [KRule::Half, KRule::Offset(2)] {
                out.push((name, spec.clone(), alpha, rule));
            }
        }
    }
    out
}

fn c1_cover_oracle() -> Result<Outcome> {
    let mut rng = ChaCha8Rng::seed_from_u64(20240501);
    let mut mismatches = 0;
    for trial in 0..500 {
        let n = rng.gen_range(1..=12);
        // every third set is clustered so that δ straddles the gaps
        let spread = if trial % 3 == 0 { 0.3 } else { 4.0 };
        let mut pts: Vec<f64> = (0..n).map(|_| rng.gen_range(0.0..spread)).collect();
        pts.sort_by(f64::total_cmp);
        let delta = rng.gen_range(0.001..1.5);
        if greedy_count(&pts, delta) != brute_force_cover_count(&pts, delta)? {
            mismatches += 1;
        }
    }
    outcome(mismatches == 0, format!("{mismatches}/500 mismatches"))
}

fn c2_beta() -> Result<Outcome> {
    let cases = [
        ("full", full(), 1.0, 0.02),
        ("lacunary", DilationSetSpec::Lacunary { base: 2.0 }, 0.0, 0.02),
        ("cantor", cantor(), 2f64.ln() / 3f64.ln(), 0.05),
        ("seq0.5", DilationSetSpec::Sequence { a: 0.5 }, 1.0 / 1.5, 0.07),
        ("seq1", DilationSetSpec::Sequence { a: 1.0 }, 0.5, 0.07),
        ("seq2", DilationSetSpec::Sequence { a: 2.0 }, 1.0 / 3.0, 0.07),
    ];
    let mut passed = true;
    let mut parts = Vec::new();
    for (name, spec, want, tol) in cases {
        let b = beta_estimate(&spec, 20)?.beta;
        passed &= (b - want).abs() <= tol;
        parts.push(format!("{name} {b:.3}"));
    }
    outcome(passed, parts.join(", "))
}

fn max_err(profile: &NuSharpProfile, grid: &[f64], exact: impl Fn(f64) -> f64) -> f64 {
    grid.iter().map(|&r| (profile.value(r) - exact(r)).abs()).fold(0.0, f64::max)
}

fn c3_profiles() -> Result<Outcome> {
    let grid: Vec<f64> = (0..=8).map(|i| i as f64 * 0.25).collect();
    let e_full = max_err(&nu_sharp_estimate(&full(), &grid, 20)?, &grid, |r| r.max(1.0));
    let grid: Vec<f64> = (0..=20).map(|i| i as f64 * 0.05).collect();
    let e_seq = max_err(&nu_sharp_estimate(&DilationSetSpec::Sequence { a: 1.0 }, &grid, 20)?, &grid, |r| {
        0.5 * r + 0.5
    });
    outcome(e_full <= 0.1 && e_seq <= 0.1, format!("max error full {e_full:.4}, seq(a=1) {e_seq:.4}"))
}

fn c4_equivalence() -> Result<Outcome> {
    let mut profiles: Vec<(String, NuSharpProfile)> = builtin_profiles()
        .into_iter()
        .filter(|(n, _)| ["full", "lacunary", "cantor(1/3)"].contains(n))
        .map(|(n, p)| (n.to_string(), p))
        .collect();
    assert_eq!(profiles.len(), 3);
    profiles.push(("cf(0.5,1)".into(), closed_form_profile(0.5, 1.0)?));
    profiles.push(("cf(0.25,0.5)".into(), closed_form_profile(0.25, 0.5)?));
    let (mut tested, mut bad) = (0, 0);
    for d in [2, 3] {
        for (_, prof) in &profiles {
            let rep = verify_equivalence(prof, d, 100, BOUNDARY_TOL);
            tested += rep.tested;
            bad += rep.disagreements.len();
        }
    }
    outcome(bad == 0, format!("{tested} points outside the band, {bad} disagreements"))
}

fn c5_benchmarks() -> Result<Outcome> {
    let (mut tested, mut bad) = (0, 0);
    for d in [2, 3] {
        for bench in [Benchmark::Lacunary, Benchmark::Full] {
            let rep = verify_benchmark(bench, d, 100, BOUNDARY_TOL);
            tested += rep.tested;
            bad += rep.disagreements.len();
        }
    }
    outcome(bad == 0, format!("{tested} points, {bad} disagreements"))
}

fn c6_convexity() -> Result<Outcome> {
    let (mut pairs, mut bad) = (0u64, 0u64);
    for d in [2, 3] {
        for (_, prof) in builtin_profiles() {
            let rep = check_convexity(&prof, d, 200);
            pairs += rep.pairs_checked;
            bad += rep.violations;
        }
    }
    outcome(bad == 0, format!("{pairs} member pairs, {bad} violations"))
}

fn c7_inclusion() -> Result<Outcome> {
    let mut failures = 0;
    let mut parts = Vec::new();
    for d in [2, 3] {
        for (k, eps) in [(5, SMALL_K_EPS), (9, LARGE_K_EPS)] {
            let config = KnappConfig::new(d, 12, k, 1.5, eps)?;
            let rep = geometry_inclusion_test(&config, &default_test_radii(&config), 100_000, 7)?;
            failures += rep.failures;
            parts.push(format!("d{d} k{k}: {}", rep.failures));
        }
    }
    outcome(failures == 0, format!("failures {}", parts.join(", ")))
}

fn c8_disjointness() -> Result<Outcome> {
    let (mut configs, mut pieces, mut overlaps, mut hits) = (0, 0, 0, 0);
    for (_, spec, _, rule) in slope_configs().into_iter().filter(|c| c.2 == 0.0) {
        for j in JS {
            let Some(inst) = build_instance(&spec, 2, j, rule.k(j), None)? else { continue };
            let rep = check_disjoint(&inst.pieces, 16, 5);
            configs += 1;
            pieces += rep.pieces;
            overlaps += rep.overlaps;
            hits += rep.sampled_hits;
        }
    }
    outcome(overlaps == 0 && hits == 0, format!("{configs} configs, {pieces} pieces, {overlaps} overlaps, {hits} sampled hits"))
}

fn c9_pointwise() -> Result<Outcome> {
    let mut passed = true;
    let mut parts = Vec::new();
    for d in [2, 3] {
        for case in [KnappCase::SmallK, KnappCase::LargeK] {
            let rep = pointwise_lower_bounds(d, case, &[8, 10, 12], 1.5, 1000, 11, BandRule::default())?;
            passed &= rep.stable;
            parts.push(format!("d{d} {case:?} c∈[{:.3},{:.3}]", rep.c_min, rep.c_max));
        }
    }
    outcome(passed, parts.join(", "))
}

fn c10_slopes() -> Result<Outcome> {
    let opts = ExperimentOptions::default();
    let mut passed = true;
    let mut worst = 0.0f64;
    for (_, spec, alpha, rule) in slope_configs() {
        let rep = lower_bound_experiment(&spec, 2, 2.0, alpha, &JS, rule, &opts)?;
        passed &= rep.passed && rep.skipped.is_empty();
        worst = worst.max((rep.measured_slope - rep.theory_slope).abs());
    }
    outcome(passed, format!("8 configs, worst |measured − theory| = {worst:.3} (tol 0.15)"))
}

fn c11_scaling() -> Result<Outcome> {
    let opts = ExperimentOptions::default();
    let (mut n, mut worst, mut passed) = (0, 0.0f64, true);
    for (_, spec, alpha, rule) in slope_configs() {
        for j in JS {
            let Some(inst) = build_instance(&spec, 2, j, rule.k(j), None)? else { continue };
            for lambda in [0.5, 2.0] {
                let rep = scaling_invariance_test(&inst, lambda, 2.0, alpha, &opts)?;
                n += 1;
                worst = worst.max(rep.rel_diff);
                passed &= rep.rel_diff <= 1e-3;
            }
        }
    }
    outcome(passed, format!("{n} comparisons, worst relative difference {worst:.2e}"))
}

fn c12_window_sup() -> Result<Outcome> {
    let mut passed = true;
    let mut parts = Vec::new();
    for (name, spec, p, alpha, grows) in [
        ("full", full(), 2.5, -0.5, false),
        ("full", full(), 1.5, 0.0, true),
        ("cantor", cantor(), 2.0, -0.5, false),
        ("cantor", cantor(), 1.1, 0.0, true),
    ] {
        let r = check_mainassu(&spec, 2, p, alpha, 0.1, 18)? / check_mainassu(&spec, 2, p, alpha, 0.1, 14)?;
        passed &= if grows { r > 2.0 } else { (r - 1.0).abs() < 0.05 };
        parts.push(format!("{name}(p={p},α={alpha}) ×{r:.2}"));
    }
    outcome(passed, parts.join(", "))
}

fn main() {
    type Criterion = (&'static str, Duration, fn() -> Result<Outcome>);
    let criteria: [Criterion; 12] = [
        ("1 covering oracle", Duration::from_secs(10), c1_cover_oracle),
        ("2 β closed forms", Duration::from_secs(120), c2_beta),
        ("3 ν♯ profiles", Duration::from_secs(300), c3_profiles),
        ("4 region equivalence", Duration::from_secs(30), c4_equivalence),
        ("5 benchmark regions", Duration::from_secs(60), c5_benchmarks),
        ("6 type-set convexity", Duration::from_secs(300), c6_convexity),
        ("7 Knapp inclusion", Duration::from_secs(60), c7_inclusion),
        ("8 disjointness", Duration::from_secs(60), c8_disjointness),
        ("9 pointwise bounds", Duration::from_secs(120), c9_pointwise),
        ("10 lower-bound slope", Duration::from_secs(600), c10_slopes),
        ("11 scaling invariance", Duration::from_secs(300), c11_scaling),
        ("12 window-sup hypothesis", Duration::from_secs(300), c12_window_sup),
    ];
    let mut failed = 0;
    for (name, budget, run) in criteria {
        let start = Instant::now();
        let result = run();
        let elapsed = start.elapsed();
        let (passed, detail) = match result {
            Ok(o) => (o.passed && elapsed <= budget, o.detail),
            Err(e) => (false, format!("error: {e}")),
        };
        failed += usize::from(!passed);
        println!(
            "{}  {name:<26} {detail}  [{:.2} s / {} s]",
            if passed { "PASS" } else { "FAIL" },
            elapsed.as_secs_f64(),
            budget.as_secs()
        );
    }
    println!("acceptance: {} of 12 criteria passed", 12 - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
