//! Least-squares line fits for multi-scale slope estimates.

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LinearFit {
    pub slope: f64,
    pub intercept: f64,
}

/// Ordinary least squares of `ys` against `xs`. Returns `None` with fewer
/// than two points or degenerate abscissae.
pub fn fit(xs: &[f64], ys: &[f64]) -> Option<LinearFit> {
    let n = xs.len().min(ys.len());
    if n < 2 {
        return None;
    }
    let mx = xs[..n].iter().sum::<f64>() / n as f64;
    let my = ys[..n].iter().sum::<f64>() / n as f64;
    let (mut sxy, mut sxx) = (0.0, 0.0);
    for (x, y) in xs[..n].iter().zip(&ys[..n]) {
        sxy += (x - mx) * (y - my);
        sxx += (x - mx) * (x - mx);
    }
    if sxx <= 0.0 {
        return None;
    }
    let slope = sxy / sxx;
    Some(LinearFit { slope, intercept: my - slope * mx })
}

pub fn slope(xs: &[f64], ys: &[f64]) -> Option<f64> {
    fit(xs, ys).map(|f| f.slope)
}

/// The upper half of scales `⌈j_max/2⌉ ..= j_max` used for limsup proxies.
pub fn top_half(j_max: u32) -> std::ops::RangeInclusive<u32> {
    j_max.div_ceil(2)..=j_max
}
