//! Lower-bound experiments: ratios `‖M_ℰ f‖_{L^p(w_α)} / ‖f‖_{L^p(w_α)}`
//! for Knapp-type extremizers and for `χ_δ`, their scaling in `j` (or `δ`),
//! and dilation invariance.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::functions::{banded_average, Ball, BandHint, Cylinder, Indicator, Shell, SpatialFunction};
use super::knapp::{
    knapp_large_k, knapp_small_k, mix_seed, separated_net, Branch, KnappCase, KnappConfig,
    Piece, PieceShape, LARGE_K_EPS, SMALL_K_EPS,
};
use super::quadrature::{band_measure, gauss_legendre_on, norm, sphere_area, BandRule, Point};
use crate::entropy::greedy_count;
use crate::regression;
use crate::setgen::{sample, DilationSetSpec, LogInterval};
use crate::{Error, Result};

/// How `k` is chosen from `j`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum KRule {
    /// `k = ⌊j/2⌋`.
    Half,
    /// `k = ⌊num·j/den⌋`.
    Fraction { num: u32, den: u32 },
    /// `k = j − m`.
    Offset(u32),
}

impl KRule {
    pub fn k(&self, j: u32) -> u32 {
        match *self {
            KRule::Half => j / 2,
            KRule::Fraction { num, den } => num * j / den,
            KRule::Offset(m) => j.saturating_sub(m),
        }
    }

    /// Parses `half`, `j-2` or `3/4`.
    pub fn parse(s: &str) -> Result<KRule> {
        let s = s.trim();
        if s == "half" {
            return Ok(KRule::Half);
        }
        if let Some(m) = s.strip_prefix("j-") {
            return m.parse().map(KRule::Offset).map_err(|_| Error::Parameter(format!("bad k rule {s:?}")));
        }
        if let Some((a, b)) = s.split_once('/') {
            if let (Ok(num), Ok(den)) = (a.parse(), b.parse()) {
                if den > 0 {
                    return Ok(KRule::Fraction { num, den });
                }
            }
        }
        Err(Error::Parameter(format!("bad k rule {s:?}; expected half, j-<m> or <num>/<den>")))
    }
}

/// Which radii enter the maximal function.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum RadiiChoice {
    /// The separated net `τ_j(I)`.
    Net,
    /// Every sampled radius of `E ∩ I`.
    FullSample,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExperimentOptions {
    pub samples_per_piece: usize,
    pub seed: u64,
    pub band_rule: BandRule,
    pub radii: RadiiChoice,
    /// `ε` override; by default `2^{-6}` for small `k` and `10^{-2}` for
    /// large `k`.
    pub eps: Option<f64>,
    pub slope_tol: f64,
}

impl Default for ExperimentOptions {
    fn default() -> Self {
        ExperimentOptions {
            samples_per_piece: 128,
            seed: 1,
            band_rule: BandRule::default(),
            radii: RadiiChoice::Net,
            eps: None,
            slope_tol: 0.15,
        }
    }
}

/// The extremizer of either regime.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Target {
    Box(Cylinder),
    Shell(Shell),
}

impl Target {
    pub fn scaled(&self, lambda: f64) -> Target {
        match self {
            Target::Box(c) => Target::Box(c.scaled(lambda)),
            Target::Shell(s) => Target::Shell(s.scaled(lambda)),
        }
    }
}

impl SpatialFunction for Target {
    fn dim(&self) -> usize {
        match self {
            Target::Box(c) => c.d,
            Target::Shell(s) => s.d,
        }
    }
    fn eval(&self, y: &Point) -> f64 {
        match self {
            Target::Box(c) => c.eval(y),
            Target::Shell(s) => s.eval(y),
        }
    }
    fn band_hint(&self, x: &Point, t: f64) -> Option<BandHint> {
        match self {
            Target::Box(c) => c.band_hint(x, t),
            Target::Shell(s) => s.band_hint(x, t),
        }
    }
}

impl Indicator for Target {
    fn weighted_volume(&self, alpha: f64) -> Result<f64> {
        match self {
            Target::Box(c) => c.weighted_volume(alpha),
            Target::Shell(s) => s.weighted_volume(alpha),
        }
    }
}

/// Everything needed to evaluate one ratio `R_j`.
#[derive(Debug, Clone, PartialEq)]
pub struct KnappInstance {
    pub config: KnappConfig,
    /// `I = [lo, lo + 2^{-k}]` in the radial variable.
    pub interval: (f64, f64),
    pub target: Target,
    pub pieces: Vec<Piece>,
    /// `τ_j(I)`.
    pub net: Vec<f64>,
    /// Sampled `E ∩ I`.
    pub sample_radii: Vec<f64>,
    /// `N(E ∩ I, 2^{-j})`.
    pub n_cover: usize,
}

impl KnappInstance {
    /// The same configuration dilated by `λ`: `λE`, `f(·/λ)`, `λ`-scaled
    /// pieces.
    pub fn scaled(&self, lambda: f64) -> KnappInstance {
        KnappInstance {
            config: self.config,
            interval: (self.interval.0 * lambda, self.interval.1 * lambda),
            target: self.target.scaled(lambda),
            pieces: self.pieces.iter().map(|p| p.scaled(lambda)).collect(),
            net: self.net.iter().map(|t| t * lambda).collect(),
            sample_radii: self.sample_radii.iter().map(|t| t * lambda).collect(),
            n_cover: self.n_cover,
        }
    }

    pub fn radii(&self, choice: RadiiChoice) -> &[f64] {
        match choice {
            RadiiChoice::Net => &self.net,
            RadiiChoice::FullSample => &self.sample_radii,
        }
    }
}

fn default_eps(case: KnappCase) -> f64 {
    match case {
        KnappCase::SmallK => SMALL_K_EPS,
        KnappCase::LargeK => LARGE_K_EPS,
    }
}

/// Radii of `E ∩ [1, 2]` sampled at scale `2^{-j}`.
pub fn sampled_radii(spec: &DilationSetSpec, j: u32) -> Result<Vec<f64>> {
    Ok(sample(spec, LogInterval::unit(), j)?.radii())
}

/// Interval of length `2^{-k}` inside `[1, 2]` maximizing
/// `N(E ∩ I, 2^{-j})` over half-overlapping candidates; ties go to the
/// leftmost.
pub fn choose_interval(radii: &[f64], j: u32, k: u32) -> (f64, f64, usize) {
    let len = (-(k as f64)).exp2();
    let delta = (-(j as f64)).exp2();
    let steps = (1u64 << (k + 1)) - 1;
    let mut best = (1.0, 1.0 + len, 0);
    for m in 0..steps {
        let lo = 1.0 + m as f64 * len / 2.0;
        let hi = lo + len;
        let s = radii.partition_point(|&r| r < lo);
        let e = radii.partition_point(|&r| r <= hi);
        let n = greedy_count(&radii[s..e.max(s)], delta);
        if n > best.2 {
            best = (lo, hi, n);
        }
    }
    best
}

/// Builds the extremizer and pieces for `(j, k)`; `None` when `E ∩ I` is
/// empty.
pub fn build_instance(
    spec: &DilationSetSpec,
    d: usize,
    j: u32,
    k: u32,
    eps: Option<f64>,
) -> Result<Option<KnappInstance>> {
    let radii = sampled_radii(spec, j)?;
    build_instance_from(&radii, d, j, k, eps)
}

pub fn build_instance_from(radii: &[f64], d: usize, j: u32, k: u32, eps: Option<f64>) -> Result<Option<KnappInstance>> {
    let (lo, hi, n_cover) = choose_interval(radii, j, k);
    if n_cover == 0 {
        return Ok(None);
    }
    let s = radii.partition_point(|&r| r < lo);
    let e = radii.partition_point(|&r| r <= hi);
    let in_i = radii[s..e].to_vec();
    let centre = (lo + hi) / 2.0;
    let a = in_i.iter().copied().min_by(|x, y| (x - centre).abs().total_cmp(&(y - centre).abs())).unwrap();
    let case = KnappCase::for_scales(j, k);
    let config = KnappConfig::new(d, j, k, a, eps.unwrap_or(default_eps(case)))?;
    let net = separated_net(&in_i, config.delta());
    let (target, pieces) = match case {
        KnappCase::SmallK => {
            let kn = knapp_small_k(config)?;
            let pieces = net.iter().map(|&t| Piece::new(PieceShape::U(kn.piece(t, Branch::Lower)))).collect();
            (Target::Box(kn.target), pieces)
        }
        KnappCase::LargeK => {
            let kn = knapp_large_k(config)?;
            let pieces = net.iter().map(|&t| Piece::new(PieceShape::Q(kn.piece(t)))).collect();
            (Target::Shell(kn.target), pieces)
        }
    };
    Ok(Some(KnappInstance { config, interval: (lo, hi), target, pieces, net, sample_radii: in_i, n_cover }))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RatioEstimate {
    /// `Σ_pieces ∫ (Mf)^p |x|^α`.
    pub numerator: f64,
    /// `∫ |f|^p |x|^α`.
    pub denominator: f64,
    pub ratio: f64,
}

fn maximal_at(target: &Target, radii: &[f64], x: &Point, rule: BandRule) -> f64 {
    radii.iter().map(|&t| banded_average(target, x, t, rule)).fold(0.0, f64::max)
}

/// `R = (Σ vol(P) · mean_P[(Mf)^p |x|^α])^{1/p} / ‖f‖_{L^p(w_α)}`, pieces
/// in parallel with one seeded stream each and a fixed reduction order.
pub fn knapp_ratio(inst: &KnappInstance, p: f64, alpha: f64, opts: &ExperimentOptions) -> Result<RatioEstimate> {
    if !(p >= 1.0) {
        return Err(Error::Parameter(format!("p must be at least 1, got {p}")));
    }
    if opts.samples_per_piece == 0 {
        return Err(Error::Parameter("samples_per_piece must be positive".into()));
    }
    let radii = inst.radii(opts.radii);
    if radii.is_empty() {
        return Err(Error::EmptySet);
    }
    let d = inst.config.d;
    let stream_base = (inst.config.j as u64) << 32;
    let parts: Vec<f64> = inst
        .pieces
        .par_iter()
        .enumerate()
        .map(|(i, piece)| {
            let mut rng = ChaCha8Rng::seed_from_u64(mix_seed(opts.seed, stream_base | i as u64));
            let mut sum = 0.0;
            for _ in 0..opts.samples_per_piece {
                let x = piece.sample(&mut rng);
                let m = maximal_at(&inst.target, radii, &x, opts.band_rule);
                sum += m.powf(p) * norm(&x, d).powf(alpha);
            }
            piece.volume() * sum / opts.samples_per_piece as f64
        })
        .collect();
    let numerator: f64 = parts.iter().sum();
    let denominator = inst.target.weighted_volume(alpha)?;
    Ok(RatioEstimate { numerator, denominator, ratio: (numerator / denominator).powf(1.0 / p) })
}

/// `log₂` of the lower bound for `R_j`:
/// `−j(d−1)(1−1/p) + log₂N/p − k(α/p + (d−1)(2/p−1))`.
pub fn theory_exponent(d: usize, p: f64, alpha: f64, j: u32, k: u32, n_cover: usize) -> f64 {
    let dm1 = (d - 1) as f64;
    -(j as f64) * dm1 * (1.0 - 1.0 / p) + (n_cover as f64).log2() / p
        - k as f64 * (alpha / p + dm1 * (2.0 / p - 1.0))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SlopeRow {
    pub j: u32,
    pub k: u32,
    pub case: KnappCase,
    pub a: f64,
    pub interval_lo: f64,
    pub tau: usize,
    pub n_cover: usize,
    pub log2_ratio: f64,
    pub theory: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SlopeReport {
    pub spec: DilationSetSpec,
    pub d: usize,
    pub p: f64,
    pub alpha: f64,
    pub k_rule: KRule,
    pub options: ExperimentOptions,
    pub rows: Vec<SlopeRow>,
    /// Scales with `E ∩ I` empty.
    pub skipped: Vec<u32>,
    pub measured_slope: f64,
    pub theory_slope: f64,
    pub passed: bool,
}

impl SlopeReport {
    pub fn write_csv<W: std::io::Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        for row in &self.rows {
            w.serialize(row)?;
        }
        w.flush()?;
        Ok(())
    }
}

/// Measures `log₂ R_j` over `j_list` and compares its regression slope in
/// `j` with that of the theoretical exponent built from the measured
/// covering numbers.
pub fn lower_bound_experiment(
    spec: &DilationSetSpec,
    d: usize,
    p: f64,
    alpha: f64,
    j_list: &[u32],
    k_rule: KRule,
    opts: &ExperimentOptions,
) -> Result<SlopeReport> {
    let mut rows = Vec::new();
    let mut skipped = Vec::new();
    for &j in j_list {
        let k = k_rule.k(j);
        let Some(inst) = build_instance(spec, d, j, k, opts.eps)? else {
            skipped.push(j);
            continue;
        };
        let est = knapp_ratio(&inst, p, alpha, opts)?;
        rows.push(SlopeRow {
            j,
            k,
            case: inst.config.case,
            a: inst.config.a,
            interval_lo: inst.interval.0,
            tau: inst.net.len(),
            n_cover: inst.n_cover,
            log2_ratio: est.ratio.log2(),
            theory: theory_exponent(d, p, alpha, j, k, inst.n_cover),
        });
    }
    let js: Vec<f64> = rows.iter().map(|r| r.j as f64).collect();
    let measured = regression::slope(&js, &rows.iter().map(|r| r.log2_ratio).collect::<Vec<_>>());
    let theory = regression::slope(&js, &rows.iter().map(|r| r.theory).collect::<Vec<_>>());
    let (measured_slope, theory_slope) = match (measured, theory) {
        (Some(m), Some(t)) => (m, t),
        _ => return Err(Error::Parameter("need at least two usable scales for a slope".into())),
    };
    Ok(SlopeReport {
        spec: spec.clone(),
        d,
        p,
        alpha,
        k_rule,
        options: *opts,
        rows,
        skipped,
        measured_slope,
        theory_slope,
        passed: (measured_slope - theory_slope).abs() <= opts.slope_tol,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PointwiseRow {
    pub j: u32,
    pub k: u32,
    pub t: f64,
    pub min_average: f64,
    pub mean_average: f64,
    /// `min_average / 2^{(k−j)(d−1)}`.
    pub c: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PointwiseReport {
    pub d: usize,
    pub case: KnappCase,
    pub a: f64,
    pub samples: usize,
    pub rows: Vec<PointwiseRow>,
    pub c_min: f64,
    pub c_max: f64,
    /// `c_min > 0` and `c_max ≤ 2 c_min`.
    pub stable: bool,
}

/// Pointwise certificate `A_t f(x) ≥ c·2^{(k−j)(d−1)}` on sampled `x` from
/// the pieces, with `k = ⌊j/2⌋, t = a` for small `k` and
/// `k = j − 3, t = a + 2^{-k-2}` for large `k`.
pub fn pointwise_lower_bounds(
    d: usize,
    case: KnappCase,
    js: &[u32],
    a: f64,
    samples: usize,
    seed: u64,
    rule: BandRule,
) -> Result<PointwiseReport> {
    let mut rows = Vec::new();
    for &j in js {
        let (k, t_off) = match case {
            KnappCase::SmallK => (j / 2, 0.0),
            KnappCase::LargeK => (j.saturating_sub(3), (-(j as f64 - 3.0) - 2.0).exp2()),
        };
        let config = KnappConfig { d, j, k, a, eps: default_eps(case), case };
        config.validate()?;
        let t = a + t_off;
        let (target, piece) = match case {
            KnappCase::SmallK => {
                let kn = knapp_small_k(config)?;
                (Target::Box(kn.target), Piece::new(PieceShape::U(kn.piece(t, Branch::Both))))
            }
            KnappCase::LargeK => {
                let kn = knapp_large_k(config)?;
                (Target::Shell(kn.target), Piece::new(PieceShape::Q(kn.piece(t))))
            }
        };
        let mut rng = ChaCha8Rng::seed_from_u64(mix_seed(seed, j as u64));
        let xs: Vec<Point> = (0..samples).map(|_| piece.sample(&mut rng)).collect();
        let values: Vec<f64> = xs.par_iter().map(|x| banded_average(&target, x, t, rule)).collect();
        let min = values.iter().copied().fold(f64::INFINITY, f64::min);
        let mean = values.iter().sum::<f64>() / values.len().max(1) as f64;
        rows.push(PointwiseRow { j, k, t, min_average: min, mean_average: mean, c: min / config.average_scale() });
    }
    let c_min = rows.iter().map(|r| r.c).fold(f64::INFINITY, f64::min);
    let c_max = rows.iter().map(|r| r.c).fold(0.0, f64::max);
    Ok(PointwiseReport { d, case, a, samples, rows, c_min, c_max, stable: c_min > 0.0 && c_max <= 2.0 * c_min })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BallRow {
    pub delta: f64,
    pub n_cover: usize,
    pub log2_ratio: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BallReport {
    pub spec: DilationSetSpec,
    pub d: usize,
    pub p: f64,
    pub alpha: f64,
    pub rows: Vec<BallRow>,
    /// Slope of `log₂ N(E, δ)` against `log₂(1/δ)`.
    pub beta_measured: f64,
    /// Slope of `log₂ ratio` against `log₂(1/δ)`.
    pub measured_slope: f64,
    /// `(β + α − (d−1)(p−1))/p`.
    pub predicted_slope: f64,
    /// `(d−1)(p−1) − β`; the ratio grows when `α` exceeds it.
    pub necessity_bound: f64,
}

impl BallReport {
    pub fn grows(&self) -> bool {
        self.measured_slope > 0.0
    }
}

/// `A_tχ_δ` at radius `r`, closed form.
fn ball_average(d: usize, delta: f64, t: f64, r: f64) -> f64 {
    band_measure(d, -1.0, (delta * delta - t * t - r * r) / (2.0 * t * r))
}

/// Tests `M_ℰ` on `χ_δ` for each `δ`: the maximal function is radial, so
/// the norm is a one-dimensional integral over `∪_t [t−δ, t+δ]`.
pub fn ball_test_experiment(spec: &DilationSetSpec, d: usize, p: f64, alpha: f64, deltas: &[f64]) -> Result<BallReport> {
    if !(p >= 1.0) {
        return Err(Error::Parameter(format!("p must be at least 1, got {p}")));
    }
    let mut rows = Vec::new();
    for &delta in deltas {
        if !(delta > 0.0 && delta < 0.5) {
            return Err(Error::Parameter(format!("δ = {delta} must lie in (0, 1/2)")));
        }
        let j = (1.0 / delta).log2().ceil().max(0.0) as u32 + 1;
        let radii = sampled_radii(spec, j)?;
        if radii.is_empty() {
            return Err(Error::EmptySet);
        }
        let n_cover = greedy_count(&radii, delta);
        let mut intervals: Vec<(f64, f64)> = Vec::new();
        for &t in &radii {
            match intervals.last_mut() {
                Some(last) if t - delta <= last.1 => last.1 = t + delta,
                _ => intervals.push((t - delta, t + delta)),
            }
        }
        let mut total = 0.0;
        for (lo, hi) in intervals {
            let panels = ((hi - lo) / (delta / 8.0)).ceil() as usize;
            let w = (hi - lo) / panels as f64;
            for m in 0..panels {
                let a = lo + m as f64 * w;
                for (r, wt) in gauss_legendre_on(8, a, a + w) {
                    let s = radii.partition_point(|&t| t < r - delta);
                    let e = radii.partition_point(|&t| t <= r + delta);
                    let mf = radii[s..e].iter().map(|&t| ball_average(d, delta, t, r)).fold(0.0, f64::max);
                    total += wt * mf.powf(p) * r.powf(alpha + d as f64 - 1.0);
                }
            }
        }
        let num = sphere_area(d) * total;
        let den = Ball { d, radius: delta }.weighted_volume(alpha)?;
        rows.push(BallRow { delta, n_cover, log2_ratio: (num / den).log2() / p });
    }
    let xs: Vec<f64> = rows.iter().map(|r| -r.delta.log2()).collect();
    let beta = regression::slope(&xs, &rows.iter().map(|r| (r.n_cover as f64).log2()).collect::<Vec<_>>());
    let slope = regression::slope(&xs, &rows.iter().map(|r| r.log2_ratio).collect::<Vec<_>>());
    let (Some(beta_measured), Some(measured_slope)) = (beta, slope) else {
        return Err(Error::Parameter("need at least two values of δ".into()));
    };
    let dm1p = (d - 1) as f64 * (p - 1.0);
    Ok(BallReport {
        spec: spec.clone(),
        d,
        p,
        alpha,
        rows,
        beta_measured,
        measured_slope,
        predicted_slope: (beta_measured + alpha - dm1p) / p,
        necessity_bound: dm1p - beta_measured,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScalingReport {
    pub lambda: f64,
    pub j: u32,
    pub k: u32,
    pub base: RatioEstimate,
    pub scaled: RatioEstimate,
    pub rel_diff: f64,
    pub tolerance: f64,
    pub passed: bool,
}

pub const SCALING_TOL: f64 = 1e-3;

/// Ratio for `(E, f)` against `(λE, f(·/λ))` with every geometric quantity
/// rebuilt at scale `λ`.
pub fn scaling_invariance_test(
    inst: &KnappInstance,
    lambda: f64,
    p: f64,
    alpha: f64,
    opts: &ExperimentOptions,
) -> Result<ScalingReport> {
    if !(lambda > 0.0) {
        return Err(Error::Parameter(format!("λ must be positive, got {lambda}")));
    }
    let base = knapp_ratio(inst, p, alpha, opts)?;
    let scaled = knapp_ratio(&inst.scaled(lambda), p, alpha, opts)?;
    let rel_diff = (scaled.ratio - base.ratio).abs() / base.ratio.abs();
    Ok(ScalingReport {
        lambda,
        j: inst.config.j,
        k: inst.config.k,
        base,
        scaled,
        rel_diff,
        tolerance: SCALING_TOL,
        passed: rel_diff <= SCALING_TOL,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cantor() -> DilationSetSpec {
        DilationSetSpec::Cantor { ratio: 1.0 / 3.0, lo: 1.0, hi: 2.0 }
    }

    #[test]
    fn k_rules() {
        assert_eq!(KRule::Half.k(13), 6);
        assert_eq!(KRule::parse("j-2").unwrap().k(10), 8);
        assert_eq!(KRule::parse("3/4").unwrap().k(12), 9);
        assert_eq!(KRule::parse("half").unwrap(), KRule::Half);
        assert!(KRule::parse("j+1").is_err());
        assert!(KRule::parse("1/0").is_err());
    }

    #[test]
    fn theory_exponent_examples() {
        // d = 2, p = 2, α = 0: −j/2 + log₂N/2
        assert!((theory_exponent(2, 2.0, 0.0, 10, 5, 32) - (-5.0 + 2.5)).abs() < 1e-12);
        // the k-term carries −α/p in the plane at p = 2
        assert!((theory_exponent(2, 2.0, -0.5, 10, 5, 1) - (-5.0 + 1.25)).abs() < 1e-12);
        // p = 1: no j-term, k-term −k(α + (d−1))
        assert!((theory_exponent(3, 1.0, 0.0, 10, 2, 1) + 4.0).abs() < 1e-12);
    }

    #[test]
    fn interval_choice_full_interval() {
        let full = DilationSetSpec::FullInterval { lo: 1.0, hi: 2.0 };
        let inst = build_instance(&full, 2, 8, 4, None).unwrap().unwrap();
        assert_eq!(inst.config.case, KnappCase::SmallK);
        assert!((inst.interval.1 - inst.interval.0 - 1.0 / 16.0).abs() < 1e-15);
        // N(I, 2^{-8}) for |I| = 2^{-4} is 16 or 17
        assert!((16..=17).contains(&inst.n_cover), "{}", inst.n_cover);
        assert!(inst.net.len() * 3 >= inst.n_cover && inst.net.len() <= 3 * inst.n_cover);
        assert_eq!(inst.pieces.len(), inst.net.len());
        assert!(inst.sample_radii.contains(&inst.config.a));
    }

    #[test]
    fn empty_intersection_is_reported() {
        let far = DilationSetSpec::ExplicitPoints(vec![3.0]);
        assert!(build_instance(&far, 2, 8, 4, None).unwrap().is_none());
    }

    #[test]
    fn ratio_net_below_full_sample() {
        let inst = build_instance(&cantor(), 2, 8, 6, None).unwrap().unwrap();
        let opts = ExperimentOptions { samples_per_piece: 16, ..Default::default() };
        let net = knapp_ratio(&inst, 2.0, -0.5, &opts).unwrap();
        let full = knapp_ratio(&inst, 2.0, -0.5, &ExperimentOptions { radii: RadiiChoice::FullSample, ..opts }).unwrap();
        assert!(net.ratio > 0.0);
        assert!(net.ratio <= full.ratio);
    }

    #[test]
    fn scaling_identity_is_bitwise() {
        let inst = build_instance(&cantor(), 2, 8, 3, None).unwrap().unwrap();
        let opts = ExperimentOptions { samples_per_piece: 8, ..Default::default() };
        let rep = scaling_invariance_test(&inst, 1.0, 2.0, 0.0, &opts).unwrap();
        assert_eq!(rep.base.ratio.to_bits(), rep.scaled.ratio.to_bits());
        let rep = scaling_invariance_test(&inst, 2.0, 2.0, -0.5, &opts).unwrap();
        assert!(rep.passed, "{rep:?}");
    }

    #[test]
    fn ball_norm_halves_by_power_of_two() {
        let b1 = Ball { d: 3, radius: 0.1 }.weighted_volume(0.0).unwrap();
        let b2 = Ball { d: 3, radius: 0.05 }.weighted_volume(0.0).unwrap();
        assert!((b1 / b2 - 8.0).abs() < 1e-12);
    }

    #[test]
    fn single_radius_ball_test() {
        // E = {1} has β = 0, so the slope should be −((d−1)(p−1) − α)/p
        let one = DilationSetSpec::ExplicitPoints(vec![1.0]);
        let deltas: Vec<f64> = (4..=9).map(|m| (-(m as f64)).exp2()).collect();
        let rep = ball_test_experiment(&one, 2, 2.0, 0.0, &deltas).unwrap();
        assert!(rep.beta_measured.abs() < 1e-12);
        assert!((rep.measured_slope - rep.predicted_slope).abs() < 0.05, "{rep:?}");
    }

    #[test]
    fn ball_test_detects_growth() {
        let full = DilationSetSpec::FullInterval { lo: 1.0, hi: 2.0 };
        let deltas: Vec<f64> = (4..=9).map(|m| (-(m as f64)).exp2()).collect();
        let grows = ball_test_experiment(&full, 2, 2.0, 0.5, &deltas).unwrap();
        assert!(grows.alpha > grows.necessity_bound);
        assert!(grows.grows(), "{grows:?}");
        let bounded = ball_test_experiment(&full, 2, 2.0, -0.5, &deltas).unwrap();
        assert!(!bounded.grows(), "{bounded:?}");
        assert!((grows.measured_slope - grows.predicted_slope).abs() < 0.1, "{grows:?}");
    }
}
