//! Covering numbers `N(E ∩ J, δ)` in the multiplicative metric and the
//! multi-scale window scans built on them.

use std::io::Write;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::setgen::{
    sample_range, DilationSetSpec, LogInterval, SampledSet, ScanDomain, DEFAULT_GUARD_BITS,
};
use crate::{Error, Result};

/// Largest input accepted by [`brute_force_cover_count`].
pub const BRUTE_FORCE_CAP: usize = 16;

/// Greedy sweep: each interval starts at the leftmost uncovered point.
/// Optimal for closed intervals on a line. `points` must be sorted.
pub fn greedy_count(points: &[f64], delta: f64) -> usize {
    let mut count = 0;
    let mut reach = f64::NEG_INFINITY;
    for &u in points {
        if u > reach {
            count += 1;
            reach = u + delta;
        }
    }
    count
}

/// Exact minimum number of closed intervals of length `delta` covering
/// `S.points ∩ I`.
pub fn cover_count(s: &SampledSet, iv: &LogInterval, delta: f64) -> Result<usize> {
    check_resolution(s, delta)?;
    Ok(greedy_count(s.slice_in(iv), delta))
}

fn check_resolution(s: &SampledSet, delta: f64) -> Result<()> {
    if !(delta > 0.0) {
        return Err(Error::Parameter(format!("cover scale must be positive, got {delta}")));
    }
    if s.spacing() > delta / 4.0 {
        return Err(Error::ResolutionTooCoarse { spacing: s.spacing(), limit: delta / 4.0 });
    }
    Ok(())
}

/// Exhaustive minimum cover over all subsets of intervals whose left
/// endpoint is a point of the input. Any cover can be slid right onto
/// such intervals, so this is exact.
pub fn brute_force_cover_count(points: &[f64], delta: f64) -> Result<usize> {
    let n = points.len();
    if n > BRUTE_FORCE_CAP {
        return Err(Error::OracleCap { len: n, cap: BRUTE_FORCE_CAP });
    }
    if n == 0 {
        return Ok(0);
    }
    let full: u32 = if n == 32 { u32::MAX } else { (1u32 << n) - 1 };
    let cover: Vec<u32> = points
        .iter()
        .map(|&start| {
            points
                .iter()
                .enumerate()
                .filter(|(_, &q)| start <= q && q <= start + delta)
                .fold(0u32, |m, (k, _)| m | (1 << k))
        })
        .collect();
    let mut best = n;
    for mask in 1u32..=full {
        let size = mask.count_ones() as usize;
        if size >= best {
            continue;
        }
        let covered = (0..n).filter(|i| mask & (1 << i) != 0).fold(0u32, |m, i| m | cover[i]);
        if covered == full {
            best = size;
        }
    }
    Ok(best)
}

/// Sorted sample with greedy jump pointers for one covering scale; window
/// counts then cost one step per covering interval.
#[derive(Debug, Clone)]
pub struct ScaleIndex {
    points: Vec<f64>,
    next: Vec<u32>,
    delta: f64,
}

impl ScaleIndex {
    pub fn new(points: Vec<f64>, delta: f64) -> Self {
        let n = points.len();
        let mut next = vec![0u32; n];
        let mut k = 0;
        for i in 0..n {
            let reach = points[i] + delta;
            while k < n && points[k] <= reach {
                k += 1;
            }
            next[i] = k as u32;
        }
        ScaleIndex { points, next, delta }
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    pub fn points(&self) -> &[f64] {
        &self.points
    }

    /// Greedy count of the points inside `iv`.
    pub fn count(&self, iv: &LogInterval) -> usize {
        let start = self.points.partition_point(|&u| u < iv.lo);
        let end = self.points.partition_point(|&u| u <= iv.hi);
        let mut idx = start;
        let mut count = 0;
        while idx < end {
            count += 1;
            idx = self.next[idx] as usize;
        }
        count
    }
}

/// Windows of length `2^{-i}` starting at `start_lo + m·2^{-i-1}`.
pub fn dyadic_windows(domain: &ScanDomain, i: u32) -> Vec<LogInterval> {
    let len = (-(i as f64)).exp2();
    let step = len / 2.0;
    let mut out = Vec::new();
    let mut m = 0u64;
    loop {
        let lo = domain.start_lo + m as f64 * step;
        let past = if domain.start_hi_inclusive {
            lo > domain.start_hi + 1e-12
        } else {
            lo >= domain.start_hi - 1e-12
        };
        if past && m > 0 {
            break;
        }
        out.push(LogInterval { lo, hi: lo + len });
        m += 1;
    }
    out
}

fn resolve_domain(spec: &DilationSetSpec, range: Option<LogInterval>) -> Result<ScanDomain> {
    match range {
        Some(r) => Ok(ScanDomain::declared(r)),
        None => spec.scan_domain(),
    }
}

fn scale_index(spec: &DilationSetSpec, domain: &ScanDomain, j: u32) -> Result<ScaleIndex> {
    let s = sample_range(spec, domain.sample, j, DEFAULT_GUARD_BITS)?;
    Ok(ScaleIndex::new(s.points, (-(j as f64)).exp2()))
}

/// Ties go to the lexicographically smallest window.
fn better(value: f64, window: &LogInterval, best: f64, best_window: &LogInterval) -> bool {
    value > best || (value == best && window.lex_cmp(best_window).is_lt())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoverRow {
    pub j: u32,
    pub window: LogInterval,
    pub count: usize,
    /// `|J|^{-ρ}·count`.
    pub value: f64,
}

/// Every window of the two-phase dyadic family at one covering scale.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoverScan {
    pub j: u32,
    pub rho: f64,
    pub rows: Vec<CoverRow>,
    pub argmax: usize,
}

impl CoverScan {
    pub fn max_value(&self) -> f64 {
        self.rows[self.argmax].value
    }

    pub fn argmax_window(&self) -> LogInterval {
        self.rows[self.argmax].window
    }

    /// CSV with columns `j, window_lo, window_hi, count, value`.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["j", "window_lo", "window_hi", "count", "value"])?;
        for r in &self.rows {
            w.write_record([
                r.j.to_string(),
                r.window.lo.to_string(),
                r.window.hi.to_string(),
                r.count.to_string(),
                r.value.to_string(),
            ])?;
        }
        w.flush()?;
        Ok(())
    }
}

/// `|J|^{-ρ}·N(ℰ∩J, 2^{-j})` over the dyadic window family, reduced to one
/// period for periodic sets.
pub fn scan_sup(spec: &DilationSetSpec, j: u32, rho: f64) -> Result<CoverScan> {
    scan_sup_in(spec, j, rho, None)
}

/// [`scan_sup`] over an explicitly declared log-range, needed for sets
/// without bounded or periodic structure.
pub fn scan_sup_in(
    spec: &DilationSetSpec,
    j: u32,
    rho: f64,
    range: Option<LogInterval>,
) -> Result<CoverScan> {
    if j < 1 {
        return Err(Error::Parameter("scan scale j must be at least 1".into()));
    }
    let domain = resolve_domain(spec, range)?;
    let index = scale_index(spec, &domain, j)?;
    let rows: Vec<CoverRow> = (0..=j)
        .into_par_iter()
        .flat_map_iter(|i| {
            let weight = (i as f64 * rho).exp2();
            let index = &index;
            dyadic_windows(&domain, i).into_iter().map(move |window| {
                let count = index.count(&window);
                CoverRow { j, window, count, value: weight * count as f64 }
            })
        })
        .collect();
    let mut argmax = 0;
    for (k, r) in rows.iter().enumerate() {
        if better(r.value, &r.window, rows[argmax].value, &rows[argmax].window) {
            argmax = k;
        }
    }
    Ok(CoverScan { j, rho, rows, argmax })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WindowMax {
    pub count: usize,
    pub window: LogInterval,
}

/// `M(j, i)`: the largest count at scale `2^{-j}` over windows of length
/// `2^{-i}`, for `1 ≤ j ≤ j_max` and `0 ≤ i ≤ j`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoverTable {
    pub j_max: u32,
    rows: Vec<Vec<WindowMax>>,
}

impl CoverTable {
    pub fn get(&self, j: u32, i: u32) -> WindowMax {
        self.rows[(j - 1) as usize][i as usize]
    }

    pub fn max_count(&self, j: u32, i: u32) -> usize {
        self.get(j, i).count
    }

    /// `max_i 2^{iρ} M(j, i)` and its window.
    pub fn sup_value(&self, j: u32, rho: f64) -> (f64, LogInterval) {
        let row = &self.rows[(j - 1) as usize];
        let mut best = (f64::NEG_INFINITY, row[0].window);
        for (i, wm) in row.iter().enumerate() {
            let v = (i as f64 * rho).exp2() * wm.count as f64;
            if better(v, &wm.window, best.0, &best.1) {
                best = (v, wm.window);
            }
        }
        best
    }
}

pub fn cover_table(
    spec: &DilationSetSpec,
    j_max: u32,
    range: Option<LogInterval>,
) -> Result<CoverTable> {
    if j_max < 1 {
        return Err(Error::Parameter("j_max must be at least 1".into()));
    }
    let domain = resolve_domain(spec, range)?;
    let mut rows = Vec::with_capacity(j_max as usize);
    for j in 1..=j_max {
        let index = scale_index(spec, &domain, j)?;
        let row: Vec<WindowMax> = (0..=j)
            .into_par_iter()
            .map(|i| {
                let mut best = WindowMax { count: 0, window: LogInterval { lo: 0.0, hi: 0.0 } };
                let mut first = true;
                for window in dyadic_windows(&domain, i) {
                    let count = index.count(&window);
                    if first || count > best.count {
                        best = WindowMax { count, window };
                        first = false;
                    }
                }
                best
            })
            .collect();
        rows.push(row);
    }
    Ok(CoverTable { j_max, rows })
}

/// Estimated `A^p` in the local boundedness hypothesis: the maximum over
/// `δ = 2^{-j}`, `j ≤ j_max`, and scanned windows `I` of
/// `N(E∩I, δ)·δ^{(d−1)(p−1)−ε}·|I|^{α+(d−1)(2−p)}`.
///
/// The set must lie in `[1, 2]`; apply [`crate::setgen::window_restrict`]
/// first otherwise.
pub fn check_mainassu(
    spec: &DilationSetSpec,
    d: u32,
    p: f64,
    alpha: f64,
    eps: f64,
    j_max: u32,
) -> Result<f64> {
    if d < 2 {
        return Err(Error::Parameter(format!("dimension d must be at least 2, got {d}")));
    }
    if !(p >= 1.0) || !(eps > 0.0) {
        return Err(Error::Parameter(format!("need p ≥ 1 and ε > 0, got p = {p}, ε = {eps}")));
    }
    let unit = LogInterval::unit();
    match spec.extent() {
        crate::setgen::Extent::Bounded(iv)
            if iv.lo >= unit.lo - 1e-12 && iv.hi <= unit.hi + 1e-12 => {}
        _ => {
            return Err(Error::Parameter(
                "set must lie in [1, 2]; restrict it to a window first".into(),
            ))
        }
    }
    let table = cover_table(spec, j_max, Some(unit))?;
    let dm1 = (d - 1) as f64;
    let delta_exp = dm1 * (p - 1.0) - eps;
    let size_exp = alpha + dm1 * (2.0 - p);
    let mut best = 0.0f64;
    for j in 1..=j_max {
        for i in 0..=j {
            let n = table.max_count(j, i) as f64;
            let log_v = n.log2() - j as f64 * delta_exp - i as f64 * size_exp;
            best = best.max(log_v.exp2());
        }
    }
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::setgen::sample;
    use proptest::prelude::*;

    fn sampled(points: Vec<f64>) -> SampledSet {
        SampledSet { points, window: LogInterval::unit(), resolution_j: 10, guard_bits: 3 }
    }

    #[test]
    fn small_examples() {
        let s = sampled(vec![0.0, 0.5, 1.0]);
        assert_eq!(cover_count(&s, &LogInterval::unit(), 0.4).unwrap(), 3);
        assert_eq!(brute_force_cover_count(&[0.0, 0.5, 1.0], 0.4).unwrap(), 3);
        assert_eq!(brute_force_cover_count(&[0.0, 0.5, 1.0], 1.0).unwrap(), 1);
        assert_eq!(brute_force_cover_count(&[0.0], 1.0).unwrap(), 1);
        let single = sampled(vec![0.3]);
        assert_eq!(cover_count(&single, &LogInterval::unit(), 0.01).unwrap(), 1);
        let outside = LogInterval { lo: 0.5, hi: 0.9 };
        assert_eq!(cover_count(&single, &outside, 0.01).unwrap(), 0);
    }

    #[test]
    fn coarse_resolution_is_rejected() {
        let s = sampled(vec![0.0, 0.5]);
        assert!(matches!(
            cover_count(&s, &LogInterval::unit(), 1e-4),
            Err(Error::ResolutionTooCoarse { .. })
        ));
        assert!(matches!(
            brute_force_cover_count(&[0.0; 17], 1.0),
            Err(Error::OracleCap { .. })
        ));
    }

    #[test]
    fn full_interval_scan() {
        let spec = DilationSetSpec::FullInterval { lo: 1.0, hi: 2.0 };
        let scan = scan_sup(&spec, 10, 0.0).unwrap();
        let best = scan.rows[scan.argmax].clone();
        // grid spacing δ/8: each greedy interval swallows nine grid points
        assert_eq!(best.count, (8 * 1024 + 1usize).div_ceil(9));
        assert!((best.count as f64 / 1024.0 - 1.0).abs() < 0.125);
        assert_eq!(best.window, LogInterval::unit());
        assert_eq!(scan.max_value(), best.count as f64);
    }

    #[test]
    fn lacunary_scan_is_one_below_unit_windows() {
        let spec = DilationSetSpec::Lacunary { base: 2.0 };
        let scan = scan_sup(&spec, 10, 0.0).unwrap();
        // the closed unit windows [0,1] and [0.5,1.5] see two or one points
        for r in &scan.rows {
            if r.window.diameter() < 1.0 {
                assert!(r.count <= 1);
            }
        }
        assert_eq!(scan.rows.iter().filter(|r| r.window.diameter() < 1.0).map(|r| r.count).max(), Some(1));
    }

    #[test]
    fn table_matches_scan() {
        let spec = DilationSetSpec::Cantor { ratio: 1.0 / 3.0, lo: 1.0, hi: 2.0 };
        let table = cover_table(&spec, 8, None).unwrap();
        for rho in [0.0, 0.5, 1.3] {
            let scan = scan_sup(&spec, 8, rho).unwrap();
            let (v, w) = table.sup_value(8, rho);
            assert_eq!(v, scan.max_value());
            assert_eq!(w, scan.argmax_window());
        }
    }

    #[test]
    fn rho_zero_value_is_count() {
        let spec = DilationSetSpec::Sequence { a: 1.0 };
        let scan = scan_sup(&spec, 7, 0.0).unwrap();
        assert!(scan.rows.iter().all(|r| r.value == r.count as f64));
    }

    #[test]
    fn csv_header() {
        let scan = scan_sup(&DilationSetSpec::Lacunary { base: 2.0 }, 2, 0.0).unwrap();
        let mut buf = Vec::new();
        scan.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.starts_with("j,window_lo,window_hi,count,value\n"));
    }

    #[test]
    fn mainassu_lacunary_is_bounded() {
        let spec = crate::setgen::window_restrict(DilationSetSpec::Lacunary { base: 2.0 }, 1.0);
        let a = check_mainassu(&spec, 2, 1.5, 0.0, 0.1, 10).unwrap();
        let b = check_mainassu(&spec, 2, 1.5, 0.0, 0.1, 14).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn mainassu_matches_symbolic_full_interval() {
        // N = 2^{j-i} on the grid, so log₂ of each term is j − i − jA − iB
        let spec = DilationSetSpec::FullInterval { lo: 1.0, hi: 2.0 };
        let got = check_mainassu(&spec, 2, 2.0, 0.5, 0.1, 12).unwrap();
        // the maximum sits at i = 0, j = j_max: 0.1·j_max up to the grid factor
        assert!((got.log2() - 1.2).abs() < 0.25, "{got}");
        let bigger = check_mainassu(&spec, 2, 2.0, 0.5, 0.1, 16).unwrap();
        assert!(((bigger / got).log2() - 0.4).abs() < 0.05);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(200))]

        #[test]
        fn greedy_equals_brute_force(
            mut pts in proptest::collection::vec(0.0f64..1.0, 0..=12),
            delta in 0.01f64..0.6,
        ) {
            pts.sort_by(f64::total_cmp);
            prop_assert_eq!(greedy_count(&pts, delta), brute_force_cover_count(&pts, delta).unwrap());
        }

        #[test]
        fn monotone_in_delta_set_and_window(
            mut pts in proptest::collection::vec(0.0f64..1.0, 1..40),
            d1 in 0.005f64..0.3, d2 in 0.005f64..0.3,
            cut in 0.0f64..1.0,
        ) {
            pts.sort_by(f64::total_cmp);
            let (lo, hi) = if d1 <= d2 { (d1, d2) } else { (d2, d1) };
            prop_assert!(greedy_count(&pts, lo) >= greedy_count(&pts, hi));
            let subset: Vec<f64> = pts.iter().copied().step_by(2).collect();
            prop_assert!(greedy_count(&subset, lo) <= greedy_count(&pts, lo));
            let index = ScaleIndex::new(pts.clone(), lo);
            let small = LogInterval { lo: 0.0, hi: cut };
            prop_assert!(index.count(&small) <= index.count(&LogInterval::unit()));
        }

        #[test]
        fn subadditive_and_crude_bounds(
            mut pts in proptest::collection::vec(0.0f64..1.0, 1..60),
            delta in 0.01f64..0.3,
            a in 0.0f64..0.5, b in 0.5f64..1.0, c in 0.2f64..0.8,
        ) {
            pts.sort_by(f64::total_cmp);
            let index = ScaleIndex::new(pts.clone(), delta);
            let i1 = LogInterval { lo: a, hi: c };
            let i2 = LogInterval { lo: c.min(b), hi: b };
            let joint = i1.hull(&i2);
            prop_assert!(index.count(&joint) <= index.count(&i1) + index.count(&i2));
            let n = index.count(&LogInterval::unit());
            prop_assert!(n >= 1);
            prop_assert!(n as f64 <= (1.0 / delta).ceil() + 1.0);
        }

        #[test]
        fn dilation_isometry(
            mut pts in proptest::collection::vec(0.0f64..1.0, 1..40),
            delta in 0.01f64..0.3,
            k in -4i32..4,
        ) {
            pts.sort_by(f64::total_cmp);
            // translation by an integer is exact in floating point
            let shifted: Vec<f64> = pts.iter().map(|u| u + k as f64).collect();
            prop_assert_eq!(greedy_count(&pts, delta), greedy_count(&shifted, delta));
        }
    }

    #[test]
    fn scaled_spec_has_identical_counts() {
        let base = DilationSetSpec::Cantor { ratio: 0.3, lo: 1.0, hi: 2.0 };
        let scaled = DilationSetSpec::Scale { lambda: 4.0, inner: Box::new(base.clone()) };
        let s1 = sample(&base, LogInterval::unit(), 8).unwrap();
        let s2 = sample(&scaled, LogInterval { lo: 2.0, hi: 3.0 }, 8).unwrap();
        let d = 2f64.powi(-8);
        assert_eq!(
            cover_count(&s1, &s1.window, d).unwrap(),
            cover_count(&s2, &s2.window, d).unwrap()
        );
    }
}
