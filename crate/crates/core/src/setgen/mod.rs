//! Dilation sets and their finite samples in log coordinates.
//!
//! All sampling happens in `u = log₂ t`. The multiplicative metric becomes
//! `|u − v|`, so covering is an interval problem on the line and a dilation
//! `t ↦ λt` is the translation `u ↦ u + log₂ λ`.

mod parse;

pub use parse::{parse_points_file, parse_set_spec};

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Default number of extra dyadic bits of sampling resolution beyond the
/// covering scale.
pub const DEFAULT_GUARD_BITS: u32 = 3;

/// Largest number of stored points in one sample (512 MiB of `f64`).
pub const MAX_SAMPLE_POINTS: usize = 1 << 26;

/// Slack allowed on the one-unit window diameter accepted by [`sample`].
pub const WINDOW_TOLERANCE: f64 = 1e-9;

const DEDUP_EPS: f64 = 1e-12;

/// Closed interval `[lo, hi]` in log₂ coordinates.
///
/// Its [`diameter`](LogInterval::diameter) is the multiplicative diameter
/// of `[2^lo, 2^hi]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LogInterval {
    pub lo: f64,
    pub hi: f64,
}

impl LogInterval {
    pub fn new(lo: f64, hi: f64) -> Result<Self> {
        if !(lo.is_finite() && hi.is_finite()) || lo > hi {
            return Err(Error::Parameter(format!("invalid interval [{lo}, {hi}]")));
        }
        Ok(LogInterval { lo, hi })
    }

    /// Log-coordinate interval of the multiplicative interval `[s, t]`.
    pub fn from_multiplicative(s: f64, t: f64) -> Result<Self> {
        if !(s > 0.0 && t > 0.0) {
            return Err(Error::Parameter(format!("[{s}, {t}] is not inside (0, ∞)")));
        }
        LogInterval::new(s.log2(), t.log2())
    }

    pub fn unit() -> Self {
        LogInterval { lo: 0.0, hi: 1.0 }
    }

    pub fn diameter(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn contains(&self, u: f64) -> bool {
        self.lo <= u && u <= self.hi
    }

    pub fn shift(&self, by: f64) -> Self {
        LogInterval { lo: self.lo + by, hi: self.hi + by }
    }

    pub fn intersect(&self, other: &LogInterval) -> Option<LogInterval> {
        let lo = self.lo.max(other.lo);
        let hi = self.hi.min(other.hi);
        (lo <= hi).then_some(LogInterval { lo, hi })
    }

    pub fn hull(&self, other: &LogInterval) -> LogInterval {
        LogInterval { lo: self.lo.min(other.lo), hi: self.hi.max(other.hi) }
    }

    /// Lexicographic order on `(lo, hi)`, used for deterministic tie-breaks.
    pub fn lex_cmp(&self, other: &LogInterval) -> std::cmp::Ordering {
        self.lo.total_cmp(&other.lo).then(self.hi.total_cmp(&other.hi))
    }
}

/// Symbolic description of a dilation set `ℰ ⊂ (0, ∞)`.
///
/// Parameters are in multiplicative coordinates (`t`, not `log₂ t`).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum DilationSetSpec {
    FullRay,
    FullInterval { lo: f64, hi: f64 },
    Lacunary { base: f64 },
    /// `{1 + n^{-a} : n ≥ 1}`.
    Sequence { a: f64 },
    /// Self-similar Cantor set on `[lo, hi]` keeping two outer pieces of
    /// relative length `ratio` at every step.
    Cantor { ratio: f64, lo: f64, hi: f64 },
    ExplicitPoints(Vec<f64>),
    Union(Vec<DilationSetSpec>),
    Scale { lambda: f64, inner: Box<DilationSetSpec> },
    /// `∪_{k∈ℤ} 2^k · (inner ∩ [1, 2])`.
    Periodize(Box<DilationSetSpec>),
    /// `R^{-1} (inner ∩ [R, 2R]) ⊂ [1, 2]`.
    WindowRestrict { r: f64, inner: Box<DilationSetSpec> },
}

/// Large-scale structure of a set in log coordinates.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Extent {
    Bounded(LogInterval),
    /// Invariant under translation by the period.
    Periodic(f64),
    /// A bounded piece plus a periodic background.
    Mixed { hull: LogInterval, period: f64 },
    Unbounded,
}

/// Where a multi-window scan samples the set and where its windows start.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScanDomain {
    pub sample: LogInterval,
    pub start_lo: f64,
    pub start_hi: f64,
    /// Whether a window may start exactly at `start_hi`.
    pub start_hi_inclusive: bool,
}

impl ScanDomain {
    /// Domain for an explicitly declared bounded log-range.
    pub fn declared(range: LogInterval) -> Self {
        ScanDomain {
            sample: range,
            start_lo: range.lo,
            start_hi: range.hi,
            start_hi_inclusive: true,
        }
    }
}

impl DilationSetSpec {
    /// Range-checks every parameter in the tree.
    pub fn validate(&self) -> Result<()> {
        use DilationSetSpec::*;
        let positive = |name: &str, v: f64| {
            if v > 0.0 && v.is_finite() {
                Ok(())
            } else {
                Err(Error::Parameter(format!("{name} must be a positive number, got {v}")))
            }
        };
        match self {
            FullRay => Ok(()),
            FullInterval { lo, hi } => {
                positive("interval lo", *lo)?;
                positive("interval hi", *hi)?;
                if lo > hi {
                    return Err(Error::Parameter(format!("interval lo {lo} exceeds hi {hi}")));
                }
                Ok(())
            }
            Lacunary { base } => {
                if *base > 1.0 && base.is_finite() {
                    Ok(())
                } else {
                    Err(Error::Parameter(format!("lacunary base must exceed 1, got {base}")))
                }
            }
            Sequence { a } => positive("sequence exponent a", *a),
            Cantor { ratio, lo, hi } => {
                if !(*ratio > 0.0 && *ratio <= 0.5) {
                    return Err(Error::Parameter(format!(
                        "cantor ratio must lie in (0, 1/2], got {ratio}"
                    )));
                }
                positive("cantor lo", *lo)?;
                positive("cantor hi", *hi)?;
                if lo >= hi {
                    return Err(Error::Parameter(format!("cantor lo {lo} must be below hi {hi}")));
                }
                Ok(())
            }
            ExplicitPoints(points) => {
                if points.is_empty() {
                    return Err(Error::Parameter("empty point list".into()));
                }
                points.iter().try_for_each(|&t| positive("point", t))
            }
            Union(parts) => {
                if parts.is_empty() {
                    return Err(Error::Parameter("empty union".into()));
                }
                parts.iter().try_for_each(|p| p.validate())
            }
            Scale { lambda, inner } => {
                positive("scale factor", *lambda)?;
                inner.validate()
            }
            Periodize(inner) => inner.validate(),
            WindowRestrict { r, inner } => {
                positive("window radius R", *r)?;
                inner.validate()
            }
        }
    }

    pub fn extent(&self) -> Extent {
        use DilationSetSpec::*;
        match self {
            FullRay => Extent::Periodic(1.0),
            FullInterval { lo, hi } => Extent::Bounded(LogInterval { lo: lo.log2(), hi: hi.log2() }),
            Lacunary { base } => Extent::Periodic(base.log2()),
            Sequence { .. } => Extent::Bounded(LogInterval::unit()),
            Cantor { lo, hi, .. } => Extent::Bounded(LogInterval { lo: lo.log2(), hi: hi.log2() }),
            ExplicitPoints(points) => {
                let lo = points.iter().copied().fold(f64::INFINITY, f64::min).log2();
                let hi = points.iter().copied().fold(f64::NEG_INFINITY, f64::max).log2();
                Extent::Bounded(LogInterval { lo, hi })
            }
            Union(parts) => parts
                .iter()
                .map(DilationSetSpec::extent)
                .reduce(combine_extents)
                .unwrap_or(Extent::Unbounded),
            Scale { lambda, inner } => match inner.extent() {
                Extent::Bounded(iv) => Extent::Bounded(iv.shift(lambda.log2())),
                Extent::Mixed { hull, period } => {
                    Extent::Mixed { hull: hull.shift(lambda.log2()), period }
                }
                other => other,
            },
            Periodize(_) => Extent::Periodic(1.0),
            WindowRestrict { .. } => Extent::Bounded(LogInterval::unit()),
        }
    }

    /// The region a scan over windows of diameter at most one must see.
    ///
    /// Periodic sets reduce to a single period by translation invariance.
    pub fn scan_domain(&self) -> Result<ScanDomain> {
        match self.extent() {
            Extent::Bounded(iv) => Ok(ScanDomain {
                sample: iv,
                start_lo: iv.lo,
                start_hi: iv.hi,
                start_hi_inclusive: true,
            }),
            Extent::Periodic(period) => Ok(ScanDomain {
                sample: LogInterval { lo: 0.0, hi: period + 1.0 },
                start_lo: 0.0,
                start_hi: period,
                start_hi_inclusive: false,
            }),
            Extent::Mixed { hull, period } => Ok(ScanDomain {
                sample: LogInterval { lo: hull.lo - 1.0, hi: hull.hi + period + 2.0 },
                start_lo: hull.lo - 1.0,
                start_hi: hull.hi + period + 1.0,
                start_hi_inclusive: false,
            }),
            Extent::Unbounded => Err(Error::UnboundedScan),
        }
    }
}

fn combine_extents(a: Extent, b: Extent) -> Extent {
    use Extent::*;
    let same = |p: f64, q: f64| (p - q).abs() <= 1e-12 * p.max(q);
    match (a, b) {
        (Bounded(x), Bounded(y)) => Bounded(x.hull(&y)),
        (Periodic(p), Periodic(q)) if same(p, q) => Periodic(p),
        (Bounded(h), Periodic(p)) | (Periodic(p), Bounded(h)) => Mixed { hull: h, period: p },
        (Mixed { hull, period }, Bounded(h)) | (Bounded(h), Mixed { hull, period }) => {
            Mixed { hull: hull.hull(&h), period }
        }
        (Mixed { hull, period }, Periodic(p)) | (Periodic(p), Mixed { hull, period })
            if same(p, period) =>
        {
            Mixed { hull, period }
        }
        (Mixed { hull: h1, period: p }, Mixed { hull: h2, period: q }) if same(p, q) => {
            Mixed { hull: h1.hull(&h2), period: p }
        }
        _ => Unbounded,
    }
}

/// `ℰ_R = R^{-1}(ℰ ∩ [R, 2R])`.
pub fn window_restrict(spec: DilationSetSpec, r: f64) -> DilationSetSpec {
    DilationSetSpec::WindowRestrict { r, inner: Box::new(spec) }
}

/// Finite stand-in for `ℰ ∩ window` in log coordinates.
///
/// Every true point of the set in the window lies within
/// `2^{-resolution_j - guard_bits}` of a stored point and vice versa.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SampledSet {
    pub points: Vec<f64>,
    pub window: LogInterval,
    pub resolution_j: u32,
    pub guard_bits: u32,
}

impl SampledSet {
    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    /// Sampling spacing `2^{-resolution_j - guard_bits}`.
    pub fn spacing(&self) -> f64 {
        (-((self.resolution_j + self.guard_bits) as f64)).exp2()
    }

    /// Points in multiplicative coordinates.
    pub fn radii(&self) -> Vec<f64> {
        self.points.iter().map(|u| u.exp2()).collect()
    }

    /// Stored points inside `iv`, as a subslice.
    pub fn slice_in(&self, iv: &LogInterval) -> &[f64] {
        let start = self.points.partition_point(|&u| u < iv.lo);
        let end = self.points.partition_point(|&u| u <= iv.hi);
        &self.points[start..end.max(start)]
    }
}

/// Samples `spec ∩ window` at covering scale `2^{-j}` with the default
/// guard bits. The window diameter must not exceed one.
pub fn sample(spec: &DilationSetSpec, window: LogInterval, j: u32) -> Result<SampledSet> {
    sample_with_guard(spec, window, j, DEFAULT_GUARD_BITS)
}

pub fn sample_with_guard(
    spec: &DilationSetSpec,
    window: LogInterval,
    j: u32,
    guard_bits: u32,
) -> Result<SampledSet> {
    if window.diameter() > 1.0 + WINDOW_TOLERANCE {
        return Err(Error::Parameter(format!(
            "sampling window diameter {} exceeds 1",
            window.diameter()
        )));
    }
    sample_range(spec, window, j, guard_bits)
}

/// Like [`sample_with_guard`] but without the unit-diameter restriction;
/// used by multi-window scans.
pub fn sample_range(
    spec: &DilationSetSpec,
    window: LogInterval,
    j: u32,
    guard_bits: u32,
) -> Result<SampledSet> {
    if guard_bits < 2 {
        return Err(Error::Parameter(format!("guard_bits must be at least 2, got {guard_bits}")));
    }
    spec.validate()?;
    let h = (-((j + guard_bits) as f64)).exp2();
    let mut points = Vec::new();
    collect(spec, window, h, &mut points)?;
    Ok(SampledSet { points: normalize(points, &window), window, resolution_j: j, guard_bits })
}

fn normalize(mut points: Vec<f64>, window: &LogInterval) -> Vec<f64> {
    points.retain(|&u| u >= window.lo - DEDUP_EPS && u <= window.hi + DEDUP_EPS);
    for u in points.iter_mut() {
        *u = u.clamp(window.lo, window.hi);
    }
    points.sort_by(f64::total_cmp);
    points.dedup_by(|b, a| (*b - *a).abs() <= DEDUP_EPS);
    points
}

/// Uniform grid on `[lo, hi]` with spacing at most `h`, endpoints included.
fn fill_grid(lo: f64, hi: f64, h: f64, out: &mut Vec<f64>) -> Result<()> {
    let len = hi - lo;
    if len <= 0.0 {
        out.push(lo);
        return Ok(());
    }
    let n = (len / h).ceil().max(1.0);
    if out.len() as f64 + n >= MAX_SAMPLE_POINTS as f64 {
        return Err(Error::ResourceCap(format!(
            "sampling [{lo}, {hi}] at spacing {h:e} needs more than {MAX_SAMPLE_POINTS} points"
        )));
    }
    let n = n as usize;
    out.extend((0..=n).map(|i| lo + len * (i as f64) / (n as f64)));
    Ok(())
}

fn collect(spec: &DilationSetSpec, w: LogInterval, h: f64, out: &mut Vec<f64>) -> Result<()> {
    use DilationSetSpec::*;
    match spec {
        FullRay => fill_grid(w.lo, w.hi, h, out)?,
        FullInterval { lo, hi } => {
            if let Some(iv) = w.intersect(&LogInterval { lo: lo.log2(), hi: hi.log2() }) {
                fill_grid(iv.lo, iv.hi, h, out)?;
            }
        }
        Lacunary { base } => {
            let step = base.log2();
            let first = (w.lo / step).ceil() as i64;
            let last = (w.hi / step).floor() as i64;
            out.extend((first..=last).map(|k| k as f64 * step));
        }
        Sequence { a } => collect_sequence(*a, w, h, out)?,
        Cantor { ratio, lo, hi } => collect_cantor(*ratio, *lo, *hi, w, h, out)?,
        ExplicitPoints(points) => {
            out.extend(points.iter().map(|t| t.log2()).filter(|u| w.contains(*u)));
        }
        Union(parts) => {
            for part in parts {
                collect(part, w, h, out)?;
            }
        }
        Scale { lambda, inner } => {
            let shift = lambda.log2();
            let mut tmp = Vec::new();
            collect(inner, w.shift(-shift), h, &mut tmp)?;
            out.extend(tmp.into_iter().map(|u| u + shift));
        }
        Periodize(inner) => {
            let first = w.lo.floor() as i64;
            let last = w.hi.ceil() as i64;
            for k in first..=last {
                let shift = k as f64;
                if let Some(local) = w.shift(-shift).intersect(&LogInterval::unit()) {
                    let mut tmp = Vec::new();
                    collect(inner, local, h, &mut tmp)?;
                    out.extend(tmp.into_iter().map(|u| u + shift));
                }
            }
        }
        WindowRestrict { r, inner } => {
            let shift = r.log2();
            let band = LogInterval { lo: shift, hi: shift + 1.0 };
            if let Some(local) = w.shift(shift).intersect(&band) {
                let mut tmp = Vec::new();
                collect(inner, local, h, &mut tmp)?;
                out.extend(tmp.into_iter().map(|u| u - shift));
            }
        }
    }
    Ok(())
}

fn sequence_point(n: f64, a: f64) -> f64 {
    (n.powf(-a)).ln_1p() / std::f64::consts::LN_2
}

/// Points `log₂(1 + n^{-a})` in the window, enumerated from the largest
/// down until consecutive gaps fall below `h`; the accumulation interval
/// toward 0 is then filled with a grid.
fn collect_sequence(a: f64, w: LogInterval, h: f64, out: &mut Vec<f64>) -> Result<()> {
    if w.hi < 0.0 || w.lo > 1.0 {
        return Ok(());
    }
    // smallest n with u_n ≤ w.hi
    let mut n = if w.hi >= 1.0 {
        1.0
    } else if w.hi <= 0.0 {
        f64::INFINITY
    } else {
        ((w.hi.exp2() - 1.0).powf(-1.0 / a)).ceil().max(1.0)
    };
    if n.is_finite() {
        while n > 1.0 && sequence_point(n - 1.0, a) <= w.hi {
            n -= 1.0;
        }
        while sequence_point(n, a) > w.hi {
            n += 1.0;
        }
    }
    loop {
        if !n.is_finite() || n > 1e15 {
            if w.lo <= 0.0 {
                out.push(0.0);
            }
            return Ok(());
        }
        let u = sequence_point(n, a);
        if u < w.lo {
            return Ok(());
        }
        let next = sequence_point(n + 1.0, a);
        if u - next < h {
            return fill_grid(w.lo.max(0.0), u, h, out);
        }
        out.push(u);
        n += 1.0;
    }
}

/// Left endpoints of the generation-`m` Cantor intervals, where `m` is the
/// first generation whose intervals have log-diameter below `h`.
fn collect_cantor(ratio: f64, lo: f64, hi: f64, w: LogInterval, h: f64, out: &mut Vec<f64>) -> Result<()> {
    let generation = cantor_generation(ratio, lo, hi, h);
    let mut stack = vec![(lo, hi - lo, 0u32)];
    while let Some((left, len, gen)) = stack.pop() {
        let (ul, ur) = (left.log2(), (left + len).log2());
        if ur < w.lo || ul > w.hi {
            continue;
        }
        if gen == generation {
            if w.contains(ul) {
                if out.len() >= MAX_SAMPLE_POINTS {
                    return Err(Error::ResourceCap(format!(
                        "Cantor generation {generation} at spacing {h:e} exceeds {MAX_SAMPLE_POINTS} points"
                    )));
                }
                out.push(ul);
            }
            continue;
        }
        let child = len * ratio;
        stack.push((left + len - child, child, gen + 1));
        stack.push((left, child, gen + 1));
    }
    Ok(())
}

/// First generation `m` with `(hi − lo)·ratio^m / (lo·ln 2) ≤ h`, the
/// log-diameter bound of generation-`m` intervals.
pub fn cantor_generation(ratio: f64, lo: f64, hi: f64, h: f64) -> u32 {
    let mut len = hi - lo;
    let mut m = 0;
    while len / (lo * std::f64::consts::LN_2) > h {
        len *= ratio;
        m += 1;
    }
    m
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn unit_sample(spec: &DilationSetSpec, j: u32) -> SampledSet {
        sample(spec, LogInterval::unit(), j).unwrap()
    }

    #[test]
    fn oversized_samples_hit_the_cap() {
        let full = DilationSetSpec::FullInterval { lo: 1.0, hi: 2.0 };
        assert!(matches!(sample(&full, LogInterval::unit(), 30), Err(Error::ResourceCap(_))));
        let solid = DilationSetSpec::Cantor { ratio: 0.5, lo: 1.0, hi: 2.0 };
        assert!(matches!(sample(&solid, LogInterval::unit(), 30), Err(Error::ResourceCap(_))));
        // the accumulation grid only spans ~2^{-j/2}, so this stays small
        assert!(sample(&DilationSetSpec::Sequence { a: 1.0 }, LogInterval::unit(), 30).is_ok());
        assert!(sample(&full, LogInterval::unit(), 20).is_ok());
    }

    #[test]
    fn lacunary_unit_window_has_two_points() {
        let s = unit_sample(&DilationSetSpec::Lacunary { base: 2.0 }, 10);
        assert_eq!(s.points, vec![0.0, 1.0]);
    }

    #[test]
    fn sequence_matches_direct_enumeration() {
        let s = unit_sample(&DilationSetSpec::Sequence { a: 1.0 }, 4);
        let h = s.spacing();
        // oracle: enumerate 1 + 1/n directly
        let mut expected = Vec::new();
        let mut n = 1u64;
        loop {
            let u = (1.0 + 1.0 / n as f64).log2();
            let next = (1.0 + 1.0 / (n + 1) as f64).log2();
            if u - next < h {
                break;
            }
            expected.push(u);
            n += 1;
        }
        let isolated: Vec<f64> = s.points.iter().rev().take(expected.len()).copied().collect();
        for (got, want) in isolated.iter().zip(&expected) {
            assert!((got - want).abs() < 1e-12, "{got} vs {want}");
        }
        assert_eq!(s.points.last().copied(), Some(1.0));
        assert!((s.points[s.len() - 2] - 1.5f64.log2()).abs() < 1e-12);
        assert_eq!(s.points[0], 0.0);
        // grid-filled tail has spacing at most h
        let tail_end = expected.len();
        let tail = &s.points[..s.len() - tail_end];
        assert!(tail.windows(2).all(|p| p[1] - p[0] <= h + 1e-15));
    }

    #[test]
    fn cantor_count_is_power_of_two() {
        let spec = DilationSetSpec::Cantor { ratio: 1.0 / 3.0, lo: 1.0, hi: 2.0 };
        for j in [4, 8, 12] {
            let s = unit_sample(&spec, j);
            let h = (-((j + DEFAULT_GUARD_BITS) as f64)).exp2();
            // oracle: first m with 3^{-m}/ln 2 ≤ h
            let m = (0..).find(|&m| 3f64.powi(-m) / std::f64::consts::LN_2 <= h).unwrap();
            assert_eq!(s.len(), 1usize << m, "j = {j}");
        }
    }

    #[test]
    fn full_interval_grid_spacing() {
        let s = unit_sample(&DilationSetSpec::FullInterval { lo: 1.0, hi: 2.0 }, 6);
        assert_eq!(s.points.first(), Some(&0.0));
        assert_eq!(s.points.last(), Some(&1.0));
        assert!(s.points.windows(2).all(|p| p[1] - p[0] <= s.spacing() + 1e-15));
    }

    #[test]
    fn window_restrict_of_lacunary() {
        let spec = window_restrict(DilationSetSpec::Lacunary { base: 2.0 }, 4.0);
        assert_eq!(unit_sample(&spec, 8).points, vec![0.0, 1.0]);
    }

    #[test]
    fn window_restrict_of_full_ray_is_unit_interval() {
        for r in [0.3, 1.0, 7.5] {
            let spec = window_restrict(DilationSetSpec::FullRay, r);
            let s = unit_sample(&spec, 5);
            assert!((s.points[0] - 0.0).abs() < 1e-12);
            assert!((s.points[s.len() - 1] - 1.0).abs() < 1e-12);
            assert!(s.points.windows(2).all(|p| p[1] - p[0] <= s.spacing() + 1e-12));
        }
    }

    #[test]
    fn periodized_window_restrict_is_dyadic_invariant() {
        let base = DilationSetSpec::Periodize(Box::new(DilationSetSpec::Sequence { a: 1.0 }));
        let reference = unit_sample(&window_restrict(base.clone(), 1.0), 8);
        for k in [-3, 2, 5] {
            let s = unit_sample(&window_restrict(base.clone(), 2f64.powi(k)), 8);
            assert_eq!(s.len(), reference.len());
            for (x, y) in s.points.iter().zip(&reference.points) {
                assert!((x - y).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn oversized_window_is_rejected() {
        let err = sample(&DilationSetSpec::FullRay, LogInterval { lo: 0.0, hi: 1.5 }, 3);
        assert!(matches!(err, Err(Error::Parameter(_))));
    }

    #[test]
    fn empty_intersection_is_flagged_not_error() {
        let spec = DilationSetSpec::ExplicitPoints(vec![1.5]);
        let s = sample(&spec, LogInterval { lo: 2.0, hi: 3.0 }, 4).unwrap();
        assert!(s.is_empty());
    }

    #[test]
    fn scan_domains() {
        let lac = DilationSetSpec::Lacunary { base: 2.0 };
        assert_eq!(lac.extent(), Extent::Periodic(1.0));
        let mixed = DilationSetSpec::Union(vec![
            lac.clone(),
            DilationSetSpec::Cantor { ratio: 1.0 / 3.0, lo: 1.0, hi: 2.0 },
        ]);
        assert!(matches!(mixed.extent(), Extent::Mixed { .. }));
        let bad = DilationSetSpec::Union(vec![lac, DilationSetSpec::Lacunary { base: 3.0 }]);
        assert!(matches!(bad.scan_domain(), Err(Error::UnboundedScan)));
    }

    fn arb_spec() -> impl Strategy<Value = DilationSetSpec> {
        prop_oneof![
            Just(DilationSetSpec::FullRay),
            (1.0f64..1.5, 1.6f64..3.0).prop_map(|(lo, hi)| DilationSetSpec::FullInterval { lo, hi }),
            (1.1f64..4.0).prop_map(|base| DilationSetSpec::Lacunary { base }),
            (0.5f64..2.5).prop_map(|a| DilationSetSpec::Sequence { a }),
            (0.2f64..0.5).prop_map(|ratio| DilationSetSpec::Cantor { ratio, lo: 1.0, hi: 2.0 }),
            proptest::collection::vec(0.5f64..4.0, 1..8).prop_map(DilationSetSpec::ExplicitPoints),
        ]
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        #[test]
        fn scaling_is_translation(spec in arb_spec(), lambda in 0.3f64..5.0, lo in -0.5f64..0.5) {
            let w = LogInterval { lo, hi: lo + 1.0 };
            let j = 6;
            let plain = sample(&spec, w, j).unwrap();
            let scaled_spec = DilationSetSpec::Scale { lambda, inner: Box::new(spec) };
            let shift = lambda.log2();
            let scaled = sample(&scaled_spec, w.shift(shift), j).unwrap();
            let tol = plain.spacing();
            // both directions of the Hausdorff comparison
            for u in &plain.points {
                let v = u + shift;
                prop_assert!(scaled.points.iter().any(|x| (x - v).abs() <= tol));
            }
            for x in &scaled.points {
                prop_assert!(plain.points.iter().any(|u| (u + shift - x).abs() <= tol));
            }
        }

        #[test]
        fn union_is_merge(a in arb_spec(), b in arb_spec(), lo in -0.5f64..0.5) {
            let w = LogInterval { lo, hi: lo + 1.0 };
            let sa = sample(&a, w, 5).unwrap();
            let sb = sample(&b, w, 5).unwrap();
            let su = sample(&DilationSetSpec::Union(vec![a, b]), w, 5).unwrap();
            let mut merged: Vec<f64> = sa.points.iter().chain(&sb.points).copied().collect();
            merged.sort_by(f64::total_cmp);
            merged.dedup_by(|x, y| (*x - *y).abs() <= 1e-12);
            prop_assert_eq!(su.points, merged);
        }

        #[test]
        fn samples_are_sorted_and_deterministic(spec in arb_spec(), lo in -0.5f64..0.5) {
            let w = LogInterval { lo, hi: lo + 1.0 };
            let s1 = sample(&spec, w, 6).unwrap();
            let s2 = sample(&spec, w, 6).unwrap();
            prop_assert!(s1.points.windows(2).all(|p| p[0] < p[1]));
            prop_assert!(s1.points.iter().all(|u| w.contains(*u)));
            prop_assert_eq!(s1, s2);
        }
    }
}
