//! Geometry of the Knapp-type extremizers: landing inclusion, disjointness
//! of the pieces and the pointwise size of `A_t f`.
//!
//! ```bash
//! cargo run --release --example knapp_geometry
//! ```

use sphermax::setgen::DilationSetSpec;
use sphermax::sphere_lab::knapp::default_test_radii;
use sphermax::sphere_lab::{
    build_instance, check_disjoint, geometry_inclusion_test, pointwise_lower_bounds, BandRule, KnappCase,
    KnappConfig, LARGE_K_EPS, SMALL_K_EPS,
};

fn main() -> sphermax::Result<()> {
    println!("inclusion x + tθ ∈ Q(a) (small k) and x + tω ∈ 𝒰(a) (large k), 10^5 samples");
    for d in [2, 3] {
        for (k, eps) in [(5, SMALL_K_EPS), (9, LARGE_K_EPS)] {
            let config = KnappConfig::new(d, 12, k, 1.5, eps)?;
            let rep = geometry_inclusion_test(&config, &default_test_radii(&config), 100_000, 7)?;
            println!(
                "  d={d} j=12 k={k} {:?}: failures {} worst margin {:.3e}{}",
                config.case,
                rep.failures,
                rep.worst_margin,
                rep.center_offset.map(|c| format!(", |x+tθ₀ − a e_d| ≤ {c:.3}·2^-j")).unwrap_or_default()
            );
        }
    }

    println!("\ndisjointness over τ_j(I)");
    let cantor = DilationSetSpec::Cantor { ratio: 1.0 / 3.0, lo: 1.0, hi: 2.0 };
    let full = DilationSetSpec::FullInterval { lo: 1.0, hi: 2.0 };
    for (name, spec) in [("full", &full), ("cantor", &cantor)] {
        for (j, k) in [(10, 5), (12, 6), (12, 10)] {
            let inst = build_instance(spec, 2, j, k, None)?.expect("nonempty");
            let rep = check_disjoint(&inst.pieces, 20, 3);
            println!(
                "  {name:<6} j={j} k={k}: {} pieces, {} pairs, {} overlaps, {} sampled hits",
                rep.pieces, rep.pairs_checked, rep.overlaps, rep.sampled_hits
            );
        }
    }

    println!("\nmin A_t f(x) / 2^((k−j)(d−1)) over 1000 samples");
    for d in [2, 3] {
        for case in [KnappCase::SmallK, KnappCase::LargeK] {
            let rep = pointwise_lower_bounds(d, case, &[8, 10, 12], 1.5, 1000, 11, BandRule::default())?;
            let cs: Vec<String> = rep.rows.iter().map(|r| format!("j={}: {:.4}", r.j, r.c)).collect();
            println!("  d={d} {case:?}: {}  stable={}", cs.join(", "), rep.stable);
        }
    }
    Ok(())
}
