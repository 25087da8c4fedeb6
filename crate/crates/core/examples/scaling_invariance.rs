//! Dilation invariance of `‖M_ℰ f‖_{L^p(w_α)}/‖f‖_{L^p(w_α)}`: replacing
//! `(ℰ, f)` by `(λℰ, f(·/λ))` leaves the ratio unchanged.
//!
//! ```bash
//! cargo run --release --example scaling_invariance
//! ```

use sphermax::setgen::DilationSetSpec;
use sphermax::sphere_lab::{build_instance, scaling_invariance_test, ExperimentOptions};

fn main() -> sphermax::Result<()> {
    let sets = [
        ("full", DilationSetSpec::FullInterval { lo: 1.0, hi: 2.0 }),
        ("cantor", DilationSetSpec::Cantor { ratio: 1.0 / 3.0, lo: 1.0, hi: 2.0 }),
        ("lacunary", DilationSetSpec::Lacunary { base: 2.0 }),
    ];
    let opts = ExperimentOptions { samples_per_piece: 64, ..Default::default() };
    println!("set        j   k   α      λ     ratio          λ-ratio        rel diff");
    for (name, spec) in &sets {
        for (j, k) in [(10, 5), (10, 8)] {
            let inst = build_instance(spec, 2, j, k, None)?.expect("E ∩ I nonempty");
            for alpha in [0.0, -0.5] {
                for lambda in [0.5, 2.0, 3.0] {
                    let rep = scaling_invariance_test(&inst, lambda, 2.0, alpha, &opts)?;
                    println!(
                        "{name:<9} {j:>2}  {k:>2}  {alpha:>4}  {lambda:>4}  {:.8e}  {:.8e}  {:.1e}",
                        rep.base.ratio, rep.scaled.ratio, rep.rel_diff
                    );
                }
            }
        }
    }
    Ok(())
}
