//! Estimates β, a few Assouad spectrum values and the ν♯ profile for the
//! standard families and compares them with their closed forms.
//!
//! ```bash
//! cargo run --example dimension_profile -- 20
//! ```

use sphermax::dimension::{known_profile, linspace_step, profile_from_table, spectrum_point, NuSharpOptions};
use sphermax::entropy::cover_table;
use sphermax::setgen::parse_set_spec;

fn main() -> sphermax::Result<()> {
    let j_max: u32 = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(16);
    let grid = linspace_step(0.0, 2.0, 0.25);
    for text in ["interval(lo=1,hi=2)", "lacunary", "cantor(ratio=0.3333333333333333)", "seq(a=0.5)", "seq(a=1)", "seq(a=2)"] {
        let spec = parse_set_spec(text)?;
        let start = std::time::Instant::now();
        let table = cover_table(&spec, j_max, None)?;
        let profile = profile_from_table(&table, &grid, NuSharpOptions::default())?;
        let exact = known_profile(&spec).expect("built-in family");
        println!(
            "{text:<34} beta {:.4} (exact {:.4})  gamma {:.3} (exact {:.3})  rho* {:.3}  [{:.2?}]",
            profile.beta, exact.beta, profile.gamma, exact.gamma, profile.rho_star, start.elapsed()
        );
        for theta in [0.25, 0.5, 0.75] {
            let sp = spectrum_point(&table, theta)?;
            print!("  dim_A,{theta} = {:.3}", sp.dim);
        }
        println!();
        let row: Vec<String> = profile
            .samples
            .iter()
            .map(|s| format!("{:.2}:{:.3}/{:.3}", s.rho, s.value, exact.value(s.rho)))
            .collect();
        println!("  nu#  {}", row.join(" "));
    }
    Ok(())
}
