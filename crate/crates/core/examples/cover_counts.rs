//! Covering numbers `N(E ∩ I, 2^{-j})` in log coordinates: the greedy sweep
//! against the exhaustive oracle, and the window maxima `M(j, i)` behind
//! every dimension estimate.
//!
//! ```bash
//! cargo run --example cover_counts
//! ```

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use sphermax::entropy::{brute_force_cover_count, cover_table, greedy_count, scan_sup};
use sphermax::setgen::DilationSetSpec;

fn main() -> sphermax::Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut agree = 0;
    for _ in 0..200 {
        let mut pts: Vec<f64> = (0..rng.gen_range(1..=12)).map(|_| rng.gen_range(0.0..2.0)).collect();
        pts.sort_by(f64::total_cmp);
        let delta = rng.gen_range(0.05..1.0);
        agree += usize::from(greedy_count(&pts, delta) == brute_force_cover_count(&pts, delta)?);
    }
    println!("greedy = brute force on {agree}/200 random sets");

    let cantor = DilationSetSpec::Cantor { ratio: 1.0 / 3.0, lo: 1.0, hi: 2.0 };
    let table = cover_table(&cantor, 12, None)?;
    println!("\nM(j, i) for the middle-thirds Cantor set on [1,2]");
    print!("  j\\i");
    for i in 0..=12 {
        print!("{i:>6}");
    }
    println!();
    for j in [4, 6, 8, 10, 12] {
        print!("  {j:>3}");
        for i in 0..=j {
            print!("{:>6}", table.max_count(j, i));
        }
        println!();
    }

    let scan = scan_sup(&DilationSetSpec::Sequence { a: 1.0 }, 12, 0.5)?;
    let best = scan.argmax_window();
    println!(
        "\nseq(a=1), j = 12, ρ = 0.5: sup 2^(iρ) N = {:.1} on [{:.5}, {:.5}] over {} windows",
        scan.max_value(),
        best.lo,
        best.hi,
        scan.rows.len()
    );
    Ok(())
}
