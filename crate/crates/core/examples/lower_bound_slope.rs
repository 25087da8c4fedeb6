//! Growth of `‖M_ℰ f‖/‖f‖` for Knapp-type test functions as the scale
//! `2^{-j}` shrinks, against the exponent predicted from covering numbers.
//!
//! ```bash
//! cargo run --release --example lower_bound_slope
//! ```

use sphermax::setgen::DilationSetSpec;
use sphermax::sphere_lab::{lower_bound_experiment, ExperimentOptions, KRule};

fn main() -> sphermax::Result<()> {
    let sets = [
        ("full [1,2]", DilationSetSpec::FullInterval { lo: 1.0, hi: 2.0 }),
        ("cantor 1/3", DilationSetSpec::Cantor { ratio: 1.0 / 3.0, lo: 1.0, hi: 2.0 }),
    ];
    let js = [6, 8, 10, 12];
    let opts = ExperimentOptions::default();
    for (name, spec) in &sets {
        for alpha in [0.0, -0.5] {
            for (rule, label) in [(KRule::Half, "k = j/2"), (KRule::Offset(2), "k = j-2")] {
                let rep = lower_bound_experiment(spec, 2, 2.0, alpha, &js, rule, &opts)?;
                println!("{name}, α = {alpha}, {label}");
                println!("   j   k    |τ|     N   log2 R   theory");
                for r in &rep.rows {
                    println!(
                        "  {:>2}  {:>2}  {:>5}  {:>4}  {:>7.3}  {:>7.3}",
                        r.j, r.k, r.tau, r.n_cover, r.log2_ratio, r.theory
                    );
                }
                println!(
                    "  slope {:.3} vs theory {:.3}  [{}]\n",
                    rep.measured_slope,
                    rep.theory_slope,
                    if rep.passed { "ok" } else { "off" }
                );
            }
        }
    }
    Ok(())
}
