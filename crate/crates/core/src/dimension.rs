//! Dimension estimates from multi-scale covering tables: `β`, the Assouad
//! spectrum, the Legendre–Assouad function `ν♯`, `γ` and `ρ_*`.
//!
//! Limsups are replaced by least-squares slopes over the upper half of
//! scales; the per-scale data is kept for convergence diagnostics.

use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::entropy::{cover_table, CoverTable};
use crate::regression::{fit, top_half};
use crate::setgen::{DilationSetSpec, LogInterval};
use crate::{Error, Result};

pub const DEFAULT_TOL: f64 = 0.05;
pub const DEFAULT_TOL_GAMMA: f64 = 0.05;

/// Top-half slope of `log₂ sup_{|J|=1} N(ℰ∩J, 2^{-j})`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BetaEstimate {
    pub beta: f64,
    /// `(j, s_j, s_j / j)`.
    pub per_scale: Vec<(u32, f64, f64)>,
}

pub fn beta_estimate(spec: &DilationSetSpec, j_max: u32) -> Result<BetaEstimate> {
    beta_estimate_in(spec, j_max, None)
}

pub fn beta_estimate_in(
    spec: &DilationSetSpec,
    j_max: u32,
    range: Option<LogInterval>,
) -> Result<BetaEstimate> {
    if j_max < 8 {
        return Err(Error::Parameter(format!("beta estimate needs j_max ≥ 8, got {j_max}")));
    }
    Ok(beta_from_table(&cover_table(spec, j_max, range)?))
}

pub fn beta_from_table(table: &CoverTable) -> BetaEstimate {
    let per_scale: Vec<(u32, f64, f64)> = (1..=table.j_max)
        .map(|j| {
            let s = log2_count(table.max_count(j, 0));
            (j, s, s / j as f64)
        })
        .collect();
    let (xs, ys): (Vec<f64>, Vec<f64>) = top_half(table.j_max)
        .map(|j| (j as f64, per_scale[(j - 1) as usize].1))
        .unzip();
    let beta = fit(&xs, &ys).map_or(0.0, |f| f.slope);
    BetaEstimate { beta, per_scale }
}

fn log2_count(n: usize) -> f64 {
    (n.max(1) as f64).log2()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectrumPoint {
    pub theta: f64,
    pub dim: f64,
    /// `−(1−θ)·dim`.
    pub nu: f64,
    pub usable_scales: usize,
    /// Fewer than four usable scales.
    pub flagged: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectrumReport {
    pub points: Vec<SpectrumPoint>,
}

impl SpectrumReport {
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["theta", "dim", "nu"])?;
        for p in &self.points {
            w.write_record([p.theta.to_string(), p.dim.to_string(), p.nu.to_string()])?;
        }
        w.flush()?;
        Ok(())
    }
}

pub fn assouad_spectrum_estimate(
    spec: &DilationSetSpec,
    theta: f64,
    j_max: u32,
) -> Result<SpectrumPoint> {
    let table = cover_table(spec, j_max, None)?;
    spectrum_point(&table, theta)
}

pub fn assouad_spectrum(
    spec: &DilationSetSpec,
    thetas: &[f64],
    j_max: u32,
    range: Option<LogInterval>,
) -> Result<SpectrumReport> {
    let table = cover_table(spec, j_max, range)?;
    let points = thetas.iter().map(|&t| spectrum_point(&table, t)).collect::<Result<_>>()?;
    Ok(SpectrumReport { points })
}

/// Windows of length `2^{-⌈θj⌉}` at scale `2^{-j}`, regressed against
/// `(1−θ)j`.
pub fn spectrum_point(table: &CoverTable, theta: f64) -> Result<SpectrumPoint> {
    if !(theta > 0.0 && theta < 1.0) {
        return Err(Error::Parameter(format!("θ must lie in (0, 1), got {theta}")));
    }
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    for j in top_half(table.j_max) {
        let i = (theta * j as f64).ceil() as u32;
        if i >= j {
            continue;
        }
        xs.push((1.0 - theta) * j as f64);
        ys.push(log2_count(table.max_count(j, i)));
    }
    let usable = xs.len();
    let dim = fit(&xs, &ys).map_or(0.0, |f| f.slope).clamp(0.0, 1.0);
    Ok(SpectrumPoint {
        theta,
        dim,
        nu: -(1.0 - theta) * dim,
        usable_scales: usable,
        flagged: usable < 4,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum ProfileKind {
    ClosedForm { beta: f64, gamma: f64 },
    Sampled,
    /// Finite union of Assouad-regular pieces `(β_j, γ_j)`.
    Union(Vec<(f64, f64)>),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProfileSample {
    pub rho: f64,
    pub value: f64,
    pub pre_clamp: f64,
    /// `v_j − v_{j−1}` over the regression scales.
    pub per_scale_slopes: Vec<f64>,
    pub slope_lo_j: u32,
    pub slope_hi_j: u32,
}

impl ProfileSample {
    /// Spread of the per-scale slopes, the convergence diagnostic.
    pub fn spread(&self) -> f64 {
        let max = self.per_scale_slopes.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let min = self.per_scale_slopes.iter().copied().fold(f64::INFINITY, f64::min);
        if max >= min {
            max - min
        } else {
            0.0
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NuSharpProfile {
    pub kind: ProfileKind,
    /// Sorted by `ρ`, strictly increasing.
    pub samples: Vec<ProfileSample>,
    pub beta: f64,
    pub gamma: f64,
    pub rho_star: f64,
    pub tol: f64,
    /// `γ` fell back to 1 because no crossing was found.
    pub gamma_flagged: bool,
    /// Largest discrete convexity defect on the grid (soft diagnostic).
    pub convexity_violation: f64,
}

fn closed_value(beta: f64, gamma: f64, rho: f64) -> f64 {
    if rho <= 0.0 {
        beta
    } else if gamma - beta <= 1e-15 {
        rho.max(beta)
    } else if rho <= gamma {
        (1.0 - beta / gamma) * rho + beta
    } else {
        rho
    }
}

/// `sup{ρ ≥ 0 : ν♯(ρ) ≤ s}` for an Assouad-regular piece.
pub(crate) fn closed_dagger(beta: f64, gamma: f64, s: f64) -> f64 {
    if gamma - beta <= 1e-15 || s >= gamma {
        s
    } else {
        (gamma * (s - beta) / (gamma - beta)).max(0.0)
    }
}

impl NuSharpProfile {
    /// `ν♯(ρ)`: exact for closed forms; for sampled profiles the linear
    /// interpolant anchored at `(0, β)`, continued with slope 1 past the
    /// last grid point.
    pub fn value(&self, rho: f64) -> f64 {
        match &self.kind {
            ProfileKind::ClosedForm { beta, gamma } => closed_value(*beta, *gamma, rho),
            ProfileKind::Union(parts) => parts
                .iter()
                .map(|&(b, g)| closed_value(b, g, rho))
                .fold(f64::NEG_INFINITY, f64::max),
            ProfileKind::Sampled => {
                if rho <= 0.0 {
                    return self.beta;
                }
                let (mut x0, mut y0) = (0.0, self.beta);
                for s in self.samples.iter().filter(|s| s.rho > 0.0) {
                    if rho <= s.rho {
                        let w = (rho - x0) / (s.rho - x0);
                        return y0 + w * (s.value - y0);
                    }
                    x0 = s.rho;
                    y0 = s.value;
                }
                (y0 + rho - x0).max(rho)
            }
        }
    }

    pub fn is_closed_form(&self) -> bool {
        !matches!(self.kind, ProfileKind::Sampled)
    }

    /// Profile CSV: `rho, value, pre_clamp, slope_lo_j, slope_hi_j`.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["rho", "value", "pre_clamp", "slope_lo_j", "slope_hi_j"])?;
        for s in &self.samples {
            w.write_record([
                s.rho.to_string(),
                s.value.to_string(),
                s.pre_clamp.to_string(),
                s.slope_lo_j.to_string(),
                s.slope_hi_j.to_string(),
            ])?;
        }
        w.flush()?;
        Ok(())
    }

    /// Lower and upper profiles obtained by moving every sample by half its
    /// per-scale slope spread, then re-clamping. Used to bracket the region
    /// of a sampled profile.
    pub fn envelope_profiles(&self) -> (NuSharpProfile, NuSharpProfile) {
        if self.is_closed_form() {
            return (self.clone(), self.clone());
        }
        let shifted = |sign: f64| {
            let mut p = self.clone();
            for s in p.samples.iter_mut() {
                s.pre_clamp = s.value + sign * s.spread() / 2.0;
            }
            finish_sampled(p)
        };
        (shifted(-1.0), shifted(1.0))
    }
}

/// Exact piecewise-linear profile of an Assouad-regular set.
pub fn closed_form_profile(beta: f64, gamma: f64) -> Result<NuSharpProfile> {
    check_pair(beta, gamma)?;
    Ok(NuSharpProfile {
        kind: ProfileKind::ClosedForm { beta, gamma },
        samples: closed_samples(|r| closed_value(beta, gamma, r)),
        beta,
        gamma,
        rho_star: closed_dagger(beta, gamma, beta).clamp(0.0, beta),
        tol: 0.0,
        gamma_flagged: false,
        convexity_violation: 0.0,
    })
}

/// Profile of a finite union of Assouad-regular pieces: the pointwise max.
pub fn union_profile(components: &[(f64, f64)]) -> Result<NuSharpProfile> {
    if components.is_empty() {
        return Err(Error::Parameter("union needs at least one component".into()));
    }
    for &(b, g) in components {
        check_pair(b, g)?;
    }
    let beta = components.iter().map(|c| c.0).fold(0.0, f64::max);
    let gamma = components.iter().map(|c| c.1).fold(0.0, f64::max);
    let rho_star = components
        .iter()
        .map(|&(b, g)| closed_dagger(b, g, beta))
        .fold(f64::INFINITY, f64::min)
        .clamp(0.0, beta);
    let parts = components.to_vec();
    let samples = closed_samples(|r| {
        parts.iter().map(|&(b, g)| closed_value(b, g, r)).fold(f64::NEG_INFINITY, f64::max)
    });
    Ok(NuSharpProfile {
        kind: ProfileKind::Union(parts),
        samples,
        beta,
        gamma,
        rho_star,
        tol: 0.0,
        gamma_flagged: false,
        convexity_violation: 0.0,
    })
}

fn check_pair(beta: f64, gamma: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&beta) || !(beta..=1.0).contains(&gamma) {
        return Err(Error::Parameter(format!(
            "need 0 ≤ β ≤ γ ≤ 1, got β = {beta}, γ = {gamma}"
        )));
    }
    Ok(())
}

fn closed_samples(f: impl Fn(f64) -> f64) -> Vec<ProfileSample> {
    (0..=40)
        .map(|k| {
            let rho = k as f64 * 0.05;
            let v = f(rho);
            ProfileSample {
                rho,
                value: v,
                pre_clamp: v,
                per_scale_slopes: Vec::new(),
                slope_lo_j: 0,
                slope_hi_j: 0,
            }
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NuSharpOptions {
    pub tol: f64,
    pub tol_gamma: f64,
    pub range: Option<LogInterval>,
}

impl Default for NuSharpOptions {
    fn default() -> Self {
        NuSharpOptions { tol: DEFAULT_TOL, tol_gamma: DEFAULT_TOL_GAMMA, range: None }
    }
}

pub fn nu_sharp_estimate(
    spec: &DilationSetSpec,
    rho_grid: &[f64],
    j_max: u32,
) -> Result<NuSharpProfile> {
    nu_sharp_estimate_with(spec, rho_grid, j_max, NuSharpOptions::default())
}

pub fn nu_sharp_estimate_with(
    spec: &DilationSetSpec,
    rho_grid: &[f64],
    j_max: u32,
    opts: NuSharpOptions,
) -> Result<NuSharpProfile> {
    if j_max < 10 {
        return Err(Error::Parameter(format!("ν♯ estimate needs j_max ≥ 10, got {j_max}")));
    }
    let table = cover_table(spec, j_max, opts.range)?;
    profile_from_table(&table, rho_grid, opts)
}

/// Builds a sampled profile from a precomputed covering table.
pub fn profile_from_table(
    table: &CoverTable,
    rho_grid: &[f64],
    opts: NuSharpOptions,
) -> Result<NuSharpProfile> {
    if rho_grid.is_empty() || rho_grid.iter().any(|r| !r.is_finite()) {
        return Err(Error::Parameter("ρ grid must be finite and nonempty".into()));
    }
    let mut grid = rho_grid.to_vec();
    grid.sort_by(f64::total_cmp);
    grid.dedup();
    let beta = beta_from_table(table).beta.clamp(0.0, 1.0);
    let scales: Vec<u32> = top_half(table.j_max).collect();
    let samples = grid
        .iter()
        .map(|&rho| {
            let v: Vec<f64> = scales.iter().map(|&j| table.sup_value(j, rho).0.log2()).collect();
            let xs: Vec<f64> = scales.iter().map(|&j| j as f64).collect();
            let slope = fit(&xs, &v).map_or(beta, |f| f.slope);
            ProfileSample {
                rho,
                value: slope,
                pre_clamp: slope,
                per_scale_slopes: v.windows(2).map(|w| w[1] - w[0]).collect(),
                slope_lo_j: scales[0],
                slope_hi_j: *scales.last().unwrap(),
            }
        })
        .collect();
    let profile = NuSharpProfile {
        kind: ProfileKind::Sampled,
        samples,
        beta,
        gamma: 1.0,
        rho_star: 0.0,
        tol: opts.tol,
        gamma_flagged: false,
        convexity_violation: 0.0,
    };
    let mut profile = finish_sampled(profile);
    let (gamma, flagged) = gamma_estimate_with(&profile, opts.tol_gamma);
    profile.gamma = gamma;
    profile.gamma_flagged = flagged;
    profile.rho_star = rho_star(&profile);
    Ok(profile)
}

/// Clamps `pre_clamp` values into the envelope, enforces monotonicity and
/// records the convexity diagnostic.
fn finish_sampled(mut p: NuSharpProfile) -> NuSharpProfile {
    let beta = p.beta;
    let mut running = f64::NEG_INFINITY;
    for s in p.samples.iter_mut() {
        let v = if s.rho <= 0.0 {
            beta
        } else {
            s.pre_clamp.clamp(s.rho.max(beta), s.rho.max(1.0))
        };
        running = running.max(v);
        s.value = running;
    }
    p.convexity_violation = p
        .samples
        .windows(3)
        .map(|w| {
            let t = (w[1].rho - w[0].rho) / (w[2].rho - w[0].rho);
            let chord = w[0].value + t * (w[2].value - w[0].value);
            (w[1].value - chord).max(0.0)
        })
        .fold(0.0, f64::max);
    p
}

/// `γ` with the default tolerance. Returns `(γ, fell_back)`.
pub fn gamma_estimate(profile: &NuSharpProfile) -> (f64, bool) {
    gamma_estimate_with(profile, DEFAULT_TOL_GAMMA)
}

/// First grid point with `ν♯(ρ) − ρ ≤ tol_γ`. The crossing inside the
/// preceding grid cell is located by extending the secant through the last
/// two points still above the diagonal, which is exact when `ν♯` is affine
/// there.
pub fn gamma_estimate_with(profile: &NuSharpProfile, tol_gamma: f64) -> (f64, bool) {
    match &profile.kind {
        ProfileKind::ClosedForm { gamma, .. } => return (*gamma, false),
        ProfileKind::Union(parts) => return (parts.iter().map(|c| c.1).fold(0.0, f64::max), false),
        ProfileKind::Sampled => {}
    }
    let beta = profile.beta;
    let mut pts: Vec<(f64, f64)> = vec![(0.0, beta)];
    pts.extend(profile.samples.iter().filter(|s| s.rho > 0.0).map(|s| (s.rho, s.value - s.rho)));
    let Some(k) = pts.iter().position(|&(_, g)| g <= tol_gamma) else {
        return (1.0f64.max(beta), true);
    };
    let gamma = if k == 0 {
        0.0
    } else {
        let (x1, g1) = pts[k - 1];
        let (x0, g0) = if k >= 2 { pts[k - 2] } else { pts[k] };
        let zero = if (g0 - g1).abs() > 1e-12 { x1 - g1 * (x1 - x0) / (g1 - g0) } else { pts[k].0 };
        zero.clamp(x1, pts[k].0)
    };
    (gamma.clamp(beta, 1.0), false)
}

/// `sup{ρ : ν♯(ρ) = β}` within the profile tolerance, clamped to `[0, β]`.
pub fn rho_star(profile: &NuSharpProfile) -> f64 {
    match &profile.kind {
        ProfileKind::Sampled => profile
            .samples
            .iter()
            .filter(|s| s.rho >= 0.0 && s.value <= profile.beta + profile.tol)
            .map(|s| s.rho)
            .fold(0.0, f64::max)
            .clamp(0.0, profile.beta),
        _ => profile.rho_star,
    }
}

/// Built-in closed forms for the standard families, where known.
pub fn known_profile(spec: &DilationSetSpec) -> Option<NuSharpProfile> {
    use DilationSetSpec::*;
    let (beta, gamma) = match spec {
        FullRay => (1.0, 1.0),
        FullInterval { lo, hi } if hi > lo => (1.0, 1.0),
        Lacunary { .. } | ExplicitPoints(_) => (0.0, 0.0),
        Sequence { a } => (1.0 / (1.0 + a), 1.0),
        Cantor { ratio, .. } => {
            let dim = 2f64.ln() / (1.0 / ratio).ln();
            (dim, dim)
        }
        Scale { inner, .. } | Periodize(inner) | WindowRestrict { inner, .. } => {
            return known_profile(inner)
        }
        _ => return None,
    };
    closed_form_profile(beta, gamma).ok()
}

/// Grid `lo, lo+step, …` up to and including `hi` (within rounding).
pub fn linspace_step(lo: f64, hi: f64, step: f64) -> Vec<f64> {
    let n = ((hi - lo) / step + 1e-9).floor() as usize;
    (0..=n).map(|k| lo + k as f64 * step).collect()
}
