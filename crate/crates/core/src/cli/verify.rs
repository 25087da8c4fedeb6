//! `verify` suites. Each suite prints one line per check and the command
//! exits 1 if any check fails.

use std::time::Instant;

use clap::ValueEnum;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::VerifyArgs;
use crate::dimension::{beta_estimate, nu_sharp_estimate};
use crate::entropy::{brute_force_cover_count, check_mainassu, greedy_count};
use crate::setgen::DilationSetSpec;
use crate::sphere_lab::knapp::default_test_radii;
use crate::sphere_lab::{
    build_instance, check_disjoint, geometry_inclusion_test, lower_bound_experiment, pointwise_lower_bounds,
    scaling_invariance_test, BandRule, ExperimentOptions, KRule, KnappCase, KnappConfig, LARGE_K_EPS, SMALL_K_EPS,
};
use crate::typeset::{builtin_profiles, check_convexity, verify_benchmark, verify_equivalence, Benchmark, BOUNDARY_TOL};
use crate::dimension::closed_form_profile;
use crate::Result;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
pub enum Suite {
    Cover,
    Profile,
    Region,
    Geometry,
    Knapp,
    Scaling,
}

#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl Check {
    fn new(name: impl Into<String>, passed: bool, detail: impl Into<String>) -> Self {
        Check { name: name.into(), passed, detail: detail.into() }
    }
}

fn cantor() -> DilationSetSpec {
    DilationSetSpec::Cantor { ratio: 1.0 / 3.0, lo: 1.0, hi: 2.0 }
}

fn full() -> DilationSetSpec {
    DilationSetSpec::FullInterval { lo: 1.0, hi: 2.0 }
}

fn dims(a: &VerifyArgs) -> Vec<usize> {
    a.d.map_or(vec![2, 3], |d| vec![d])
}

pub fn cmd_verify(a: &VerifyArgs) -> Result<i32> {
    let start = Instant::now();
    let checks = run_suite(a)?;
    let width = checks.iter().map(|c| c.name.len()).max().unwrap_or(0);
    for c in &checks {
        println!("{}  {:<width$}  {}", if c.passed { "PASS" } else { "FAIL" }, c.name, c.detail);
    }
    let failed = checks.iter().filter(|c| !c.passed).count();
    println!("{} checks, {} failed, {:.1} s", checks.len(), failed, start.elapsed().as_secs_f64());
    Ok(if failed == 0 { 0 } else { 1 })
}

pub fn run_suite(a: &VerifyArgs) -> Result<Vec<Check>> {
    match a.suite {
        Suite::Cover => cover_suite(a),
        Suite::Profile => profile_suite(a),
        Suite::Region => region_suite(a),
        Suite::Geometry => geometry_suite(a),
        Suite::Knapp => knapp_suite(a),
        Suite::Scaling => scaling_suite(a),
    }
}

fn cover_suite(a: &VerifyArgs) -> Result<Vec<Check>> {
    let mut rng = ChaCha8Rng::seed_from_u64(a.seed);
    let mut mismatches = 0;
    for _ in 0..500 {
        let n = rng.gen_range(1..=12);
        let mut pts: Vec<f64> = (0..n).map(|_| rng.gen_range(0.0..4.0)).collect();
        pts.sort_by(f64::total_cmp);
        let delta = rng.gen_range(0.01..2.0);
        if greedy_count(&pts, delta) != brute_force_cover_count(&pts, delta)? {
            mismatches += 1;
        }
    }
    let mut checks = vec![Check::new("greedy = brute force, 500 sets", mismatches == 0, format!("{mismatches} mismatches"))];
    // Sup over dyadic windows of N·2^{-(j δ_exp + i s_exp)}; in-region bounded, outside grows.
    for (name, spec, p, alpha, grows) in [
        ("full", full(), 2.5, -0.5, false),
        ("full", full(), 1.5, 0.0, true),
        ("cantor", cantor(), 2.0, -0.5, false),
        ("cantor", cantor(), 1.1, 0.0, true),
    ] {
        let lo = check_mainassu(&spec, 2, p, alpha, 0.1, 14)?;
        let hi = check_mainassu(&spec, 2, p, alpha, 0.1, 18)?;
        let r = hi / lo;
        let passed = if grows { r > 2.0 } else { (r - 1.0).abs() < 0.05 };
        checks.push(Check::new(
            format!("window sup {name} p={p} α={alpha} {}", if grows { "grows" } else { "bounded" }),
            passed,
            format!("j_max 14: {lo:.4e}, 18: {hi:.4e}, ratio {r:.3}"),
        ));
    }
    Ok(checks)
}

fn profile_suite(a: &VerifyArgs) -> Result<Vec<Check>> {
    let mut checks = Vec::new();
    let beta_cases: [(&str, DilationSetSpec, f64, f64); 6] = [
        ("full", full(), 1.0, 0.02),
        ("lacunary", DilationSetSpec::Lacunary { base: 2.0 }, 0.0, 0.02),
        ("cantor(1/3)", cantor(), 2f64.ln() / 3f64.ln(), 0.05),
        ("seq(a=0.5)", DilationSetSpec::Sequence { a: 0.5 }, 1.0 / 1.5, 0.07),
        ("seq(a=1)", DilationSetSpec::Sequence { a: 1.0 }, 0.5, 0.07),
        ("seq(a=2)", DilationSetSpec::Sequence { a: 2.0 }, 1.0 / 3.0, 0.07),
    ];
    for (name, spec, want, tol) in beta_cases {
        let b = beta_estimate(&spec, a.jmax)?.beta;
        checks.push(Check::new(format!("β {name}"), (b - want).abs() <= tol, format!("{b:.4} vs {want:.4} ± {tol}")));
    }
    let grid: Vec<f64> = (0..=8).map(|i| i as f64 * 0.25).collect();
    let prof = nu_sharp_estimate(&full(), &grid, a.jmax)?;
    let err = grid.iter().map(|&r| (prof.value(r) - r.max(1.0)).abs()).fold(0.0, f64::max);
    checks.push(Check::new("ν♯ full = max(1, ρ)", err <= 0.1, format!("max error {err:.4}")));
    let grid: Vec<f64> = (0..=8).map(|i| i as f64 * 0.125).collect();
    let prof = nu_sharp_estimate(&DilationSetSpec::Sequence { a: 1.0 }, &grid, a.jmax)?;
    let err = grid.iter().map(|&r| (prof.value(r) - (0.5 * r + 0.5)).abs()).fold(0.0, f64::max);
    checks.push(Check::new("ν♯ seq(a=1) = (1+ρ)/2 on [0,1]", err <= 0.1, format!("max error {err:.4}")));
    Ok(checks)
}

fn region_suite(a: &VerifyArgs) -> Result<Vec<Check>> {
    let mut checks = Vec::new();
    let mut profiles: Vec<(String, _)> = builtin_profiles()
        .into_iter()
        .filter(|(n, _)| ["full", "lacunary", "cantor(1/3)"].contains(n))
        .map(|(n, p)| (n.to_string(), p))
        .collect();
    profiles.push(("cf(0.5,1)".into(), closed_form_profile(0.5, 1.0)?));
    profiles.push(("cf(0.25,0.5)".into(), closed_form_profile(0.25, 0.5)?));
    for d in dims(a) {
        let d = d as u32;
        for (name, prof) in &profiles {
            let rep = verify_equivalence(prof, d, 100, BOUNDARY_TOL);
            checks.push(Check::new(
                format!("(L,U) = Θ {name} d={d}"),
                rep.passed(),
                format!("{} tested, {} disagreements", rep.tested, rep.disagreements.len()),
            ));
        }
        for bench in [Benchmark::Lacunary, Benchmark::Full] {
            let rep = verify_benchmark(bench, d, 100, BOUNDARY_TOL);
            checks.push(Check::new(
                format!("benchmark {bench:?} d={d}"),
                rep.disagreements.is_empty(),
                format!("{} tested, {} disagreements", rep.tested, rep.disagreements.len()),
            ));
        }
        for (name, prof) in builtin_profiles() {
            let rep = check_convexity(&prof, d, 200);
            checks.push(Check::new(
                format!("convex {name} d={d}"),
                rep.passed(),
                format!("{} pairs, {} violations", rep.pairs_checked, rep.violations),
            ));
        }
    }
    Ok(checks)
}

fn geometry_suite(a: &VerifyArgs) -> Result<Vec<Check>> {
    let mut checks = Vec::new();
    let case = KnappCase::for_scales(a.j, a.k);
    let eps = match case {
        KnappCase::SmallK => SMALL_K_EPS,
        KnappCase::LargeK => LARGE_K_EPS,
    };
    for d in dims(a) {
        let config = KnappConfig::new(d, a.j, a.k, 1.5, eps)?;
        let rep = geometry_inclusion_test(&config, &default_test_radii(&config), a.n, a.seed)?;
        checks.push(Check::new(
            format!("inclusion d={d} j={} k={} {case:?}", a.j, a.k),
            rep.passed(),
            format!("{} failures, worst margin {:.3e}", rep.failures, rep.worst_margin),
        ));
        for spec in [full(), cantor()] {
            if let Some(inst) = build_instance(&spec, d, a.j, a.k, None)? {
                let rep = check_disjoint(&inst.pieces, 16, a.seed);
                checks.push(Check::new(
                    format!("disjoint d={d} {}", if spec == full() { "full" } else { "cantor" }),
                    rep.passed(),
                    format!("{} pieces, {} overlaps, {} sampled hits", rep.pieces, rep.overlaps, rep.sampled_hits),
                ));
            }
        }
        if d == 2 || a.d.is_some() {
            for case in [KnappCase::SmallK, KnappCase::LargeK] {
                let rep = pointwise_lower_bounds(d, case, &[8, 10, 12], 1.5, 1000, a.seed, BandRule::default())?;
                checks.push(Check::new(
                    format!("pointwise d={d} {case:?}"),
                    rep.stable,
                    format!("c ∈ [{:.4}, {:.4}]", rep.c_min, rep.c_max),
                ));
            }
        }
    }
    Ok(checks)
}

fn knapp_configs() -> Vec<(&'static str, DilationSetSpec, f64, KRule)> {
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

fn knapp_suite(a: &VerifyArgs) -> Result<Vec<Check>> {
    let opts = ExperimentOptions { seed: a.seed, ..Default::default() };
    let d = a.d.unwrap_or(2);
    let mut checks = Vec::new();
    for (name, spec, alpha, rule) in knapp_configs() {
        let rep = lower_bound_experiment(&spec, d, a.p, alpha, &[6, 8, 10, 12], rule, &opts)?;
        checks.push(Check::new(
            format!("slope {name} α={alpha} {rule:?}"),
            rep.passed,
            format!("{:.3} vs {:.3}", rep.measured_slope, rep.theory_slope),
        ));
    }
    Ok(checks)
}

fn scaling_suite(a: &VerifyArgs) -> Result<Vec<Check>> {
    let opts = ExperimentOptions { seed: a.seed, samples_per_piece: 64, ..Default::default() };
    let d = a.d.unwrap_or(2);
    let mut checks = Vec::new();
    for (name, spec, alpha, rule) in knapp_configs() {
        for j in [6, 8, 10, 12] {
            let Some(inst) = build_instance(&spec, d, j, rule.k(j), None)? else { continue };
            for lambda in [0.5, 2.0] {
                let rep = scaling_invariance_test(&inst, lambda, a.p, alpha, &opts)?;
                if !rep.passed || j == 12 {
                    checks.push(Check::new(
                        format!("scaling {name} α={alpha} j={j} k={} λ={lambda}", rep.k),
                        rep.passed,
                        format!("rel diff {:.2e}", rep.rel_diff),
                    ));
                }
            }
        }
    }
    Ok(checks)
}
