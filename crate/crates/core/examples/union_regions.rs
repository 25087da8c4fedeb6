//! Unions of Assouad-regular pieces: the lower boundary is the maximum of
//! one linear piece per component, so it can bend where two pieces cross.
//!
//! ```bash
//! cargo run --example union_regions
//! ```

use sphermax::dimension::union_profile;
use sphermax::typeset::{lower_l, p_beta, union_crossings, union_l};

fn main() -> sphermax::Result<()> {
    let cases: [&[(f64, f64)]; 3] = [
        &[(0.25, 0.5), (0.4, 1.0)],
        &[(0.1, 0.9), (0.5, 0.6)],
        &[(0.2, 1.0), (0.3, 0.5), (0.05, 0.8)],
    ];
    for parts in cases {
        let d = 2;
        let profile = union_profile(parts)?;
        let pb = p_beta(profile.beta, d);
        println!("pieces {parts:?}: β = {:.3}, γ = {:.3}, p_β = {pb:.3}", profile.beta, profile.gamma);
        for c in union_crossings(parts, d) {
            println!("  pieces {:?} cross at p = {:.4}{}", c.components, c.p, if c.admissible { "" } else { " (below p_β)" });
        }
        println!("      p    L via max    L via ν♯");
        for i in 0..=5 {
            let p = pb + i as f64 * (3.0 - pb) / 5.0;
            println!("  {p:.3}   {:>9.4}   {:>9.4}", union_l(p, parts, d)?, lower_l(p, &profile, d)?);
        }
    }
    Ok(())
}
