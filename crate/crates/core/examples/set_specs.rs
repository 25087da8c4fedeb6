//! The set-spec grammar: parsing, large-scale structure and sampling in
//! log coordinates `u = log₂ t`.
//!
//! ```bash
//! cargo run --example set_specs
//! ```

use sphermax::setgen::{parse_set_spec, sample, LogInterval};

fn main() -> sphermax::Result<()> {
    let texts = [
        "full",
        "interval(lo=1,hi=2)",
        "lacunary(base=3)",
        "seq(a=1)",
        "cantor(ratio=0.25)",
        "points(1, 1.25, 1.5)",
        "union(cantor(ratio=0.3), seq(a=2))",
        "scale(4, cantor(ratio=0.3))",
        "periodize(interval(lo=1.2,hi=1.4))",
        "window(8, full)",
    ];
    for text in texts {
        let spec = parse_set_spec(text)?;
        let s = sample(&spec, LogInterval::unit(), 8)?;
        let show: Vec<String> = s.radii().iter().take(4).map(|t| format!("{t:.4}")).collect();
        println!("{text:<38} {:?}", spec.extent());
        println!("    {} points in [1,2] at j = 8: {}{}", s.len(), show.join(", "), if s.len() > 4 { ", ..." } else { "" });
    }

    println!("\nrejected inputs:");
    for bad in ["cantor(ratio=0.7)", "seq(a=-1)", "union(full,", "interval(lo=2,hi=1)"] {
        match parse_set_spec(bad) {
            Ok(s) => println!("  {bad:<24} unexpectedly parsed as {s:?}"),
            Err(e) => println!("  {bad:<24} {e}"),
        }
    }
    Ok(())
}
