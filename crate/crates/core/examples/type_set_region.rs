//! Boundary of the type set in `(1/p, α/p)` for the built-in families,
//! with an SVG of one region written to the temp directory.
//!
//! ```bash
//! cargo run --example type_set_region
//! ```

use sphermax::svg::{region_svg, SvgOptions};
use sphermax::typeset::{builtin_profiles, contains, default_p_grid, lower_l, region_boundary, upper_u};

fn main() -> sphermax::Result<()> {
    for d in [2u32, 3] {
        println!("d = {d}");
        for (name, profile) in builtin_profiles() {
            let region = region_boundary(&profile, d, &default_p_grid(&profile, d, 50))?;
            let at = |p: f64| -> sphermax::Result<String> {
                Ok(format!("[{:.3}, {:.3}]", lower_l(p, &profile, d)?, upper_u(p, profile.beta, d)?))
            };
            println!(
                "  {name:<12} p_β = {:.3}  p_γ = {:.3}  α ∈ {} at p = 2, {} at p = 4",
                region.p_beta,
                region.p_gamma,
                at(2.0)?,
                at(4.0)?
            );
        }
    }

    let (_, full) = builtin_profiles().into_iter().find(|(n, _)| *n == "full").expect("built in");
    // 1 − d < α < (d−1)p − d for the full set
    for (p, alpha) in [(2.0, -0.5), (2.0, 0.5), (3.0, 0.5), (1.5, 0.0)] {
        println!("full, d = 2: (p, α) = ({p}, {alpha}) inside: {}", contains(p, alpha, &full, 2));
    }

    let (_, cantor) = builtin_profiles().into_iter().find(|(n, _)| n.starts_with("cantor")).expect("built in");
    let region = region_boundary(&cantor, 2, &default_p_grid(&cantor, 2, 200))?;
    let path = std::env::temp_dir().join("cantor_region.svg");
    let svg = region_svg(&region, &SvgOptions { title: "Cantor(1/3), d = 2".into(), comment: String::new(), zoom_inset: true });
    std::fs::write(&path, svg)?;
    println!("wrote {}", path.display());
    Ok(())
}
