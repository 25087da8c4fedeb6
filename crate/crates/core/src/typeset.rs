//! The closed type set of `M_ℰ` in the `(1/p, α/p)` plane.
//!
//! Two independent descriptions are implemented: the explicit boundary
//! curves `L(p) ≤ α ≤ U(p)` and the implicit predicate
//! `(d−1)(p−1) ≥ Θ(p, α)`. [`verify_equivalence`] compares them.

use std::io::Write;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::dimension::{closed_dagger, known_profile, NuSharpProfile, ProfileKind};
use crate::{Error, Result};

/// Width of the band around the boundary excluded from membership tests.
pub const BOUNDARY_TOL: f64 = 1e-6;
pub const P_MAX: f64 = 4.0;

fn dm1(d: u32) -> f64 {
    (d - 1) as f64
}

fn domain_tol(profile: &NuSharpProfile) -> f64 {
    profile.tol.max(1e-9)
}

/// `(ν♯)†(s) = sup{ρ ≥ 0 : ν♯(ρ) ≤ s}`.
pub fn dagger(profile: &NuSharpProfile, s: f64) -> Result<f64> {
    if s < profile.beta - domain_tol(profile) {
        return Err(Error::Domain { value: s, lower: profile.beta });
    }
    if s < profile.beta {
        return Ok(0.0);
    }
    Ok(match &profile.kind {
        ProfileKind::ClosedForm { beta, gamma } => closed_dagger(*beta, *gamma, s),
        ProfileKind::Union(parts) => parts
            .iter()
            .map(|&(b, g)| closed_dagger(b, g, s))
            .fold(f64::INFINITY, f64::min),
        ProfileKind::Sampled => sampled_dagger(profile, s),
    })
}

fn sampled_dagger(profile: &NuSharpProfile, s: f64) -> f64 {
    let (mut x0, mut y0) = (0.0, profile.beta);
    for sample in profile.samples.iter().filter(|x| x.rho > 0.0) {
        let (x1, y1) = (sample.rho, sample.value);
        if y1 > s {
            if y1 > y0 {
                return x0 + (s - y0) / (y1 - y0) * (x1 - x0);
            }
            return x0;
        }
        x0 = x1;
        y0 = y1;
    }
    x0 + (s - y0)
}

pub fn p_beta(beta: f64, d: u32) -> f64 {
    1.0 + beta / dm1(d)
}

/// `U(p) = (d−1)(p−1) − β`.
pub fn upper_u(p: f64, beta: f64, d: u32) -> Result<f64> {
    if p < p_beta(beta, d) - 1e-12 {
        return Err(Error::Domain { value: p, lower: p_beta(beta, d) });
    }
    Ok(dm1(d) * (p - 1.0) - beta)
}

/// `L(p) = (d−1)(p−2) − (ν♯)†((d−1)(p−1))`.
pub fn lower_l(p: f64, profile: &NuSharpProfile, d: u32) -> Result<f64> {
    let pb = p_beta(profile.beta, d);
    if p < pb - 1e-12 {
        return Err(Error::Domain { value: p, lower: pb });
    }
    let s = (dm1(d) * (p - 1.0)).max(profile.beta);
    Ok(dm1(d) * (p - 2.0) - dagger(profile, s)?)
}

/// `Θ(p, α) = max{α + β, ν♯((d−1)(p−2) − α)}`.
pub fn theta(p: f64, alpha: f64, profile: &NuSharpProfile, d: u32) -> f64 {
    (alpha + profile.beta).max(profile.value(dm1(d) * (p - 2.0) - alpha))
}

fn theta_margin(p: f64, alpha: f64, profile: &NuSharpProfile, d: u32) -> f64 {
    dm1(d) * (p - 1.0) - theta(p, alpha, profile, d)
}

/// Implicit form: `(d−1)(p−1) ≥ Θ(p, α)` up to [`BOUNDARY_TOL`].
pub fn contains(p: f64, alpha: f64, profile: &NuSharpProfile, d: u32) -> bool {
    p >= 1.0 && theta_margin(p, alpha, profile, d) >= -BOUNDARY_TOL
}

fn explicit_margin(p: f64, alpha: f64, profile: &NuSharpProfile, d: u32) -> f64 {
    let pb = p_beta(profile.beta, d);
    if p < pb {
        return dm1(d) * (p - pb);
    }
    let u = upper_u(p, profile.beta, d).expect("p ≥ p_β");
    let l = lower_l(p, profile, d).expect("p ≥ p_β");
    (alpha - l).min(u - alpha)
}

/// Explicit form: `p ≥ p_β` and `L(p) ≤ α ≤ U(p)` up to [`BOUNDARY_TOL`].
pub fn contains_explicit(p: f64, alpha: f64, profile: &NuSharpProfile, d: u32) -> bool {
    p >= 1.0 && explicit_margin(p, alpha, profile, d) >= -BOUNDARY_TOL
}

/// `−(d−1) ≤ α ≤ (d−1)(p−1) − β`.
pub fn necessary_conditions(p: f64, alpha: f64, beta: f64, d: u32) -> bool {
    -dm1(d) <= alpha && alpha <= dm1(d) * (p - 1.0) - beta
}

/// `L(p)` for a finite union of Assouad-regular pieces `(β_j, γ_j)`.
pub fn union_l(p: f64, components: &[(f64, f64)], d: u32) -> Result<f64> {
    if components.is_empty() {
        return Err(Error::Parameter("union needs at least one component".into()));
    }
    for &(b, g) in components {
        if !(0.0..=1.0).contains(&b) || !(b..=1.0).contains(&g) {
            return Err(Error::Parameter(format!("need 0 ≤ β ≤ γ ≤ 1, got ({b}, {g})")));
        }
    }
    let beta = components.iter().map(|c| c.0).fold(0.0, f64::max);
    if p < p_beta(beta, d) - 1e-12 {
        return Err(Error::Domain { value: p, lower: p_beta(beta, d) });
    }
    let s = dm1(d) * (p - 1.0);
    let inner = components
        .iter()
        .filter(|(b, g)| g > b)
        .map(|&(b, g)| b * (g - s) / (g - b))
        .fold(0.0, f64::max);
    Ok(1.0 - d as f64 + inner)
}

/// Where two linear pieces of the union lower boundary meet.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Crossing {
    pub p: f64,
    pub components: (usize, usize),
    /// `p ≥ p_β` for the union's `β`.
    pub admissible: bool,
}

/// Pairwise crossings of the pieces `β_j(γ_j − (d−1)(p−1))/(γ_j − β_j)`.
pub fn union_crossings(components: &[(f64, f64)], d: u32) -> Vec<Crossing> {
    let beta = components.iter().map(|c| c.0).fold(0.0, f64::max);
    let pb = p_beta(beta, d);
    let mut out = Vec::new();
    for a in 0..components.len() {
        for b in a + 1..components.len() {
            let (b1, g1) = components[a];
            let (b2, g2) = components[b];
            if g1 <= b1 || g2 <= b2 {
                continue;
            }
            // piece_j(s) = c_j − m_j s with s = (d−1)(p−1)
            let (m1, c1) = (b1 / (g1 - b1), b1 * g1 / (g1 - b1));
            let (m2, c2) = (b2 / (g2 - b2), b2 * g2 / (g2 - b2));
            if (m1 - m2).abs() < 1e-15 {
                continue;
            }
            let s = (c1 - c2) / (m1 - m2);
            let p = 1.0 + s / dm1(d);
            out.push(Crossing { p, components: (a, b), admissible: p >= pb });
        }
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundaryPoint {
    pub p: f64,
    pub inv_p: f64,
    /// `L(p)/p`.
    pub lower: f64,
    /// `U(p)/p`.
    pub upper: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TypeSetRegion {
    pub d: u32,
    pub profile: NuSharpProfile,
    pub p_beta: f64,
    pub p_gamma: f64,
    pub boundary: Vec<BoundaryPoint>,
}

impl TypeSetRegion {
    pub fn contains(&self, p: f64, alpha: f64) -> bool {
        contains(p, alpha, &self.profile, self.d)
    }

    /// Region CSV: `inv_p, lower, upper`.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["inv_p", "lower", "upper"])?;
        for b in &self.boundary {
            w.write_record([b.inv_p.to_string(), b.lower.to_string(), b.upper.to_string()])?;
        }
        w.flush()?;
        Ok(())
    }
}

/// `n` values of `p` uniform in `1/p` from `1/p_β` down to `1/P_MAX`,
/// with `p_γ` inserted so the kink is sampled exactly.
pub fn default_p_grid(profile: &NuSharpProfile, d: u32, n: usize) -> Vec<f64> {
    let pb = p_beta(profile.beta, d);
    let pg = p_beta(profile.gamma, d);
    let (x_hi, x_lo) = (1.0 / pb, 1.0 / P_MAX);
    let mut grid: Vec<f64> = (0..n.max(2))
        .map(|k| {
            let t = k as f64 / (n.max(2) - 1) as f64;
            1.0 / (x_hi + t * (x_lo - x_hi))
        })
        .collect();
    if pg > pb && pg < P_MAX {
        grid.push(pg);
    }
    grid.sort_by(f64::total_cmp);
    grid.dedup_by(|a, b| (*a - *b).abs() < 1e-12);
    grid
}

pub fn region_boundary(profile: &NuSharpProfile, d: u32, p_grid: &[f64]) -> Result<TypeSetRegion> {
    if d < 2 {
        return Err(Error::Parameter(format!("d must be at least 2, got {d}")));
    }
    let pb = p_beta(profile.beta, d);
    let mut boundary = Vec::with_capacity(p_grid.len());
    for &p in p_grid {
        if p < pb - 1e-12 || p > P_MAX + 1e-12 {
            return Err(Error::Parameter(format!("p = {p} outside [p_β, P_max] = [{pb}, {P_MAX}]")));
        }
        let l = lower_l(p, profile, d)?;
        let u = upper_u(p, profile.beta, d)?;
        boundary.push(BoundaryPoint { p, inv_p: 1.0 / p, lower: l / p, upper: u / p });
    }
    Ok(TypeSetRegion {
        d,
        profile: profile.clone(),
        p_beta: pb,
        p_gamma: p_beta(profile.gamma, d),
        boundary,
    })
}

/// Inner and outer regions for a sampled profile, from the upper and lower
/// per-scale envelopes of `ν♯`. Closed forms return the region twice.
pub fn uncertainty_regions(
    profile: &NuSharpProfile,
    d: u32,
    p_grid: &[f64],
) -> Result<(TypeSetRegion, TypeSetRegion)> {
    let (lower, upper) = profile.envelope_profiles();
    let pb = p_beta(upper.beta, d);
    let inner_grid: Vec<f64> = p_grid.iter().copied().filter(|&p| p >= pb).collect();
    Ok((region_boundary(&upper, d, &inner_grid)?, region_boundary(&lower, d, p_grid)?))
}

/// Points of the `(1/p, α/p)` window used by grid checks.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PlaneGrid {
    pub x_lo: f64,
    pub x_hi: f64,
    pub y_lo: f64,
    pub y_hi: f64,
    pub n: usize,
}

impl PlaneGrid {
    /// `x ∈ [1/P_MAX, 1]`, `y ∈ [−d, d−1]`, which contains every region.
    pub fn standard(d: u32, n: usize) -> Self {
        PlaneGrid { x_lo: 1.0 / P_MAX, x_hi: 1.0, y_lo: -(d as f64), y_hi: dm1(d), n }
    }

    /// The point with half-integer indices `(a/2, b/2)`.
    pub fn half_point(&self, a: usize, b: usize) -> (f64, f64) {
        let steps = 2.0 * (self.n - 1) as f64;
        let x = self.x_lo + (self.x_hi - self.x_lo) * a as f64 / steps;
        let y = self.y_lo + (self.y_hi - self.y_lo) * b as f64 / steps;
        (x, y)
    }

    pub fn point(&self, a: usize, b: usize) -> (f64, f64) {
        self.half_point(2 * a, 2 * b)
    }
}

/// `(1/p, α/p) ↦ (p, α)`.
pub fn to_p_alpha(x: f64, y: f64) -> (f64, f64) {
    (1.0 / x, y / x)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EquivalenceReport {
    pub tested: usize,
    pub skipped_band: usize,
    pub members: usize,
    /// `(p, α)` where the two forms disagree.
    pub disagreements: Vec<(f64, f64)>,
    /// Members violating the necessary conditions.
    pub necessary_failures: Vec<(f64, f64)>,
}

impl EquivalenceReport {
    pub fn passed(&self) -> bool {
        self.disagreements.is_empty() && self.necessary_failures.is_empty()
    }
}

/// Compares the implicit and explicit descriptions on an `n × n` grid,
/// skipping points within `band` of either boundary.
pub fn verify_equivalence(profile: &NuSharpProfile, d: u32, n: usize, band: f64) -> EquivalenceReport {
    let grid = PlaneGrid::standard(d, n);
    let results: Vec<(bool, Option<(bool, bool, f64, f64)>)> = (0..n * n)
        .into_par_iter()
        .map(|idx| {
            let (x, y) = grid.point(idx / n, idx % n);
            let (p, alpha) = to_p_alpha(x, y);
            let tm = theta_margin(p, alpha, profile, d);
            let em = explicit_margin(p, alpha, profile, d);
            if tm.abs() <= band || em.abs() <= band {
                return (true, None);
            }
            (false, Some((tm >= 0.0, em >= 0.0, p, alpha)))
        })
        .collect();
    let mut report = EquivalenceReport {
        tested: 0,
        skipped_band: 0,
        members: 0,
        disagreements: Vec::new(),
        necessary_failures: Vec::new(),
    };
    for (skipped, r) in results {
        if skipped {
            report.skipped_band += 1;
            continue;
        }
        let (implicit, explicit, p, alpha) = r.expect("tested point");
        report.tested += 1;
        if implicit != explicit {
            report.disagreements.push((p, alpha));
        }
        if implicit {
            report.members += 1;
            if !necessary_conditions(p, alpha, profile.beta, d) {
                report.necessary_failures.push((p, alpha));
            }
        }
    }
    report
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConvexityReport {
    pub members: usize,
    pub pairs_checked: u64,
    pub violations: u64,
    pub example: Option<((f64, f64), (f64, f64))>,
}

impl ConvexityReport {
    pub fn passed(&self) -> bool {
        self.violations == 0
    }
}

#[derive(Clone, Copy, PartialEq)]
enum Cell {
    In,
    Out,
    Band,
}

/// Midpoint convexity of the membership set on an `n × n` grid in
/// `(1/p, α/p)`. Midpoints of grid points are exact points of the
/// half-step grid, whose membership is precomputed; midpoints within the
/// boundary band are not adjudicated.
pub fn check_convexity(profile: &NuSharpProfile, d: u32, n: usize) -> ConvexityReport {
    let grid = PlaneGrid::standard(d, n);
    let m = 2 * n - 1;
    let cells: Vec<Cell> = (0..m * m)
        .into_par_iter()
        .map(|idx| {
            let (x, y) = grid.half_point(idx / m, idx % m);
            let (p, alpha) = to_p_alpha(x, y);
            let margin = theta_margin(p, alpha, profile, d);
            if margin.abs() <= BOUNDARY_TOL {
                Cell::Band
            } else if margin > 0.0 {
                Cell::In
            } else {
                Cell::Out
            }
        })
        .collect();
    let members: Vec<(usize, usize)> = (0..n * n)
        .map(|idx| (idx / n, idx % n))
        .filter(|&(a, b)| cells[2 * a * m + 2 * b] == Cell::In)
        .collect();
    let (pairs, violations, example) = members
        .par_iter()
        .enumerate()
        .map(|(k, &(a1, b1))| {
            let mut pairs = 0u64;
            let mut bad = 0u64;
            let mut example = None;
            for &(a2, b2) in &members[k + 1..] {
                pairs += 1;
                if cells[(a1 + a2) * m + (b1 + b2)] == Cell::Out {
                    bad += 1;
                    example.get_or_insert((grid.point(a1, b1), grid.point(a2, b2)));
                }
            }
            (pairs, bad, example)
        })
        .reduce(
            || (0, 0, None),
            |x, y| (x.0 + y.0, x.1 + y.1, x.2.or(y.2)),
        );
    ConvexityReport { members: members.len(), pairs_checked: pairs, violations, example }
}

/// Profiles of the built-in families used by region checks, by name.
pub fn builtin_profiles() -> Vec<(&'static str, NuSharpProfile)> {
    use crate::setgen::DilationSetSpec::*;
    let families = [
        ("full", FullRay),
        ("lacunary", Lacunary { base: 2.0 }),
        ("cantor(1/3)", Cantor { ratio: 1.0 / 3.0, lo: 1.0, hi: 2.0 }),
        ("seq(a=0.5)", Sequence { a: 0.5 }),
        ("seq(a=1)", Sequence { a: 1.0 }),
        ("seq(a=2)", Sequence { a: 2.0 }),
    ];
    families
        .into_iter()
        .map(|(name, spec)| (name, known_profile(&spec).expect("closed form")))
        .collect()
}

/// Sets whose type set is known in closed form, written out directly
/// rather than through `ν♯`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Benchmark {
    /// `1−d ≤ α ≤ (d−1)(p−1)`.
    Lacunary,
    /// `1−d ≤ α ≤ (d−1)p − d`, `p ≥ 1 + 1/(d−1)`.
    Full,
}

impl Benchmark {
    /// Smallest slack of the defining inequalities; positive inside.
    pub fn margin(&self, p: f64, alpha: f64, d: u32) -> f64 {
        let low = alpha - (1.0 - d as f64);
        match self {
            Benchmark::Lacunary => low.min(dm1(d) * (p - 1.0) - alpha),
            Benchmark::Full => low.min(dm1(d) * p - d as f64 - alpha).min(p - 1.0 - 1.0 / dm1(d)),
        }
    }

    pub fn contains(&self, p: f64, alpha: f64, d: u32) -> bool {
        self.margin(p, alpha, d) >= 0.0
    }

    pub fn profile(&self) -> NuSharpProfile {
        let (b, g) = match self {
            Benchmark::Lacunary => (0.0, 0.0),
            Benchmark::Full => (1.0, 1.0),
        };
        crate::dimension::closed_form_profile(b, g).expect("valid pair")
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchmarkReport {
    pub tested: usize,
    pub skipped_band: usize,
    pub disagreements: Vec<(f64, f64)>,
}

/// Compares the computed region of the benchmark profile with its closed
/// form on the standard `n × n` grid.
pub fn verify_benchmark(bench: Benchmark, d: u32, n: usize, band: f64) -> BenchmarkReport {
    let profile = bench.profile();
    let grid = PlaneGrid::standard(d, n);
    let mut rep = BenchmarkReport { tested: 0, skipped_band: 0, disagreements: Vec::new() };
    for idx in 0..n * n {
        let (x, y) = grid.point(idx / n, idx % n);
        let (p, alpha) = to_p_alpha(x, y);
        let m = bench.margin(p, alpha, d);
        if m.abs() <= band || theta_margin(p, alpha, &profile, d).abs() <= band {
            rep.skipped_band += 1;
            continue;
        }
        rep.tested += 1;
        if contains(p, alpha, &profile, d) != (m > 0.0) {
            rep.disagreements.push((p, alpha));
        }
    }
    rep
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dimension::{closed_form_profile, union_profile};
    use proptest::prelude::*;

    fn cf(b: f64, g: f64) -> NuSharpProfile {
        closed_form_profile(b, g).unwrap()
    }

    #[test]
    fn dagger_examples() {
        let reg = cf(0.4, 0.4);
        assert_eq!(dagger(&reg, 0.7).unwrap(), 0.7);
        let p = cf(0.5, 1.0);
        assert!((dagger(&p, 0.75).unwrap() - 0.5).abs() < 1e-15);
        assert_eq!(dagger(&cf(1.0, 1.0), 1.5).unwrap(), 1.5);
        assert!(matches!(dagger(&p, 0.2), Err(Error::Domain { .. })));
    }

    #[test]
    fn sampled_dagger_inverts_interpolant() {
        let mut p = cf(0.5, 1.0);
        p.kind = ProfileKind::Sampled;
        p.tol = 0.05;
        for s in [0.5, 0.6, 0.8, 1.0, 1.7] {
            let r = dagger(&p, s).unwrap();
            assert!((r - closed_dagger(0.5, 1.0, s)).abs() < 1e-12, "s = {s}");
        }
    }

    #[test]
    fn boundary_values() {
        assert_eq!(upper_u(2.0, 0.5, 2).unwrap(), 0.5);
        let p = cf(0.5, 1.0);
        let pb = p_beta(0.5, 2);
        assert!((lower_l(pb, &p, 2).unwrap() - (1.0 - 2.0 + 0.5 - p.rho_star)).abs() < 1e-12);
        for pp in [2.0, 2.5, 4.0] {
            assert!((lower_l(pp, &p, 2).unwrap() + 1.0).abs() < 1e-12);
        }
        assert!(upper_u(1.2, 0.5, 2).is_err());
    }

    #[test]
    fn theta_examples() {
        let full = cf(1.0, 1.0);
        assert_eq!(theta(3.0, 0.0, &full, 2), 1.0);
        assert_eq!(theta(2.0, -0.5, &cf(0.5, 1.0), 2), 0.75);
        assert_eq!(theta(1.0, 0.0, &cf(0.0, 0.0), 2), 0.0);
        assert!(!contains(2.0, upper_u(2.0, 0.5, 2).unwrap() + 1.0, &cf(0.5, 1.0), 2));
    }

    #[test]
    fn union_examples() {
        let comps = [(0.25, 0.5), (0.4, 1.0)];
        let u = union_profile(&comps).unwrap();
        for p in [1.4, 1.6, 1.9, 2.5] {
            let a = union_l(p, &comps, 2).unwrap();
            let b = lower_l(p, &u, 2).unwrap();
            assert!((a - b).abs() < 1e-12, "p = {p}: {a} vs {b}");
        }
        let single = cf(0.3, 0.8);
        for p in [1.3, 1.5, 1.8, 3.0] {
            let a = union_l(p, &[(0.3, 0.8)], 2).unwrap();
            assert!((a - lower_l(p, &single, 2).unwrap()).abs() < 1e-12);
        }
        assert_eq!(union_l(1.7, &[(0.3, 0.3), (0.6, 0.6)], 2).unwrap(), -1.0);
        let c = union_crossings(&comps, 2);
        assert_eq!(c.len(), 1);
        assert!((c[0].p - 0.5).abs() < 1e-12);
        assert!(!c[0].admissible);
    }

    #[test]
    fn necessary_condition_examples() {
        assert!(!necessary_conditions(2.0, -1.01, 0.5, 2));
        assert!(necessary_conditions(2.0, 0.5, 0.5, 2));
    }

    #[test]
    fn region_kink_and_benchmarks() {
        let p = cf(0.5, 1.0);
        let region = region_boundary(&p, 2, &default_p_grid(&p, 2, 50)).unwrap();
        assert_eq!(region.p_gamma, 2.0);
        assert!(region.boundary.iter().any(|b| b.inv_p == 0.5));
        for b in &region.boundary {
            assert!(b.lower <= b.upper + 1e-12);
            assert!(b.lower * b.p >= -1.0 - 1e-12);
        }
        let full = cf(1.0, 1.0);
        for b in &region_boundary(&full, 2, &default_p_grid(&full, 2, 30)).unwrap().boundary {
            assert!((b.lower * b.p + 1.0).abs() < 1e-12);
            assert!((b.upper * b.p - (b.p - 2.0)).abs() < 1e-12);
        }
        assert!(region_boundary(&p, 2, &[1.1]).is_err());
    }

    #[test]
    fn equivalence_small() {
        for (_, profile) in builtin_profiles() {
            for d in [2, 3] {
                let r = verify_equivalence(&profile, d, 60, BOUNDARY_TOL);
                assert!(r.passed(), "{r:?}");
                assert!(r.members > 0);
            }
        }
    }

    #[test]
    fn convexity_small() {
        let r = check_convexity(&cf(0.5, 1.0), 2, 40);
        assert!(r.passed(), "{r:?}");
        assert!(r.members > 10);
    }

    #[test]
    fn convexity_detects_nonconvex_profile() {
        // a concave "profile" breaks convexity of the region
        let mut p = cf(0.2, 0.2);
        p.kind = ProfileKind::Sampled;
        p.tol = 0.05;
        for s in p.samples.iter_mut() {
            s.value = if s.rho <= 0.0 { 0.2 } else { (0.2 + 2.0 * s.rho).min(1.0).max(s.rho) };
        }
        let r = check_convexity(&p, 2, 60);
        assert!(!r.passed());
    }

    #[test]
    fn benchmarks_match_closed_forms() {
        for d in [2, 3] {
            for b in [Benchmark::Lacunary, Benchmark::Full] {
                let rep = verify_benchmark(b, d, 60, BOUNDARY_TOL);
                assert!(rep.tested > 3000);
                assert!(rep.disagreements.is_empty(), "{b:?} d = {d}: {:?}", &rep.disagreements[..3.min(rep.disagreements.len())]);
            }
        }
        assert!(Benchmark::Full.contains(3.0, 0.5, 2));
        assert!(!Benchmark::Full.contains(1.5, -0.5, 2));
        assert!(Benchmark::Lacunary.contains(1.5, 0.5, 2));
    }

    #[test]
    fn csv_header() {
        let p = cf(0.5, 1.0);
        let region = region_boundary(&p, 2, &[2.0]).unwrap();
        let mut buf = Vec::new();
        region.write_csv(&mut buf).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap(), "inv_p,lower,upper\n0.5,-0.5,0.25\n");
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn l_nonincreasing_u_increasing(b in 0.0f64..1.0, frac in 0.0f64..1.0, d in 2u32..4) {
            let g = b + (1.0 - b) * frac;
            let profile = cf(b, g);
            let grid = default_p_grid(&profile, d, 40);
            let mut prev: Option<(f64, f64)> = None;
            for &p in &grid {
                let l = lower_l(p, &profile, d).unwrap();
                let u = upper_u(p, b, d).unwrap();
                prop_assert!(l >= 1.0 - d as f64 - 1e-12);
                if let Some((pl, pu)) = prev {
                    prop_assert!(l <= pl + 1e-12);
                    prop_assert!(u > pu);
                }
                prev = Some((l, u));
            }
        }

        #[test]
        fn unweighted_slice(b in 0.0f64..1.0, frac in 0.0f64..1.0, d in 2u32..4, p in 1.0f64..4.0) {
            let g = b + (1.0 - b) * frac;
            let profile = cf(b, g);
            let pb = p_beta(b, d);
            prop_assume!((p - pb).abs() > 1e-5);
            prop_assert_eq!(contains(p, 0.0, &profile, d), p >= pb);
        }

        #[test]
        fn nesting_under_union(b1 in 0.0f64..0.9, f1 in 0.0f64..1.0, b2 in 0.0f64..0.9, f2 in 0.0f64..1.0,
                               x in 0.25f64..1.0, y in -3.0f64..2.0, d in 2u32..4) {
            let a = (b1, b1 + (1.0 - b1) * f1);
            let b = (b2, b2 + (1.0 - b2) * f2);
            let small = cf(a.0, a.1);
            let big = union_profile(&[a, b]).unwrap();
            let (p, alpha) = to_p_alpha(x, y);
            if contains(p, alpha, &big, d) {
                prop_assert!(contains(p, alpha, &small, d));
            }
        }
    }
}
