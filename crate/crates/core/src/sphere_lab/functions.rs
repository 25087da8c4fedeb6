//! Test functions, spherical averages `A_t f(x)` and the sampled maximal
//! function.
//!
//! Built-in extremizers are exact indicator predicates. Each can report the
//! band of directions `ω` that can possibly land `x + tω` in its support,
//! which lets averages integrate only that band (or skip integration when
//! the band decides membership by itself).

use std::f64::consts::PI;

use super::quadrature::{
    band_measure, check_dim, horizontal_norm, integrate_band, norm, sphere_area, vertical, Band,
    BandRule, Point, QuadratureRule,
};
use crate::setgen::SampledSet;
use crate::{Error, Result};

/// What a function knows about `ω ↦ f(x + tω)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum BandHint {
    /// Zero for every `ω`.
    Empty,
    /// Supported in the band; when `exact`, equal to `value` on the whole
    /// band.
    Band { band: Band, exact: bool, value: f64 },
}

pub trait SpatialFunction: Sync {
    fn dim(&self) -> usize;

    fn eval(&self, y: &Point) -> f64;

    fn band_hint(&self, _x: &Point, _t: f64) -> Option<BandHint> {
        None
    }
}

/// Indicator of a region with a closed-form weighted volume.
pub trait Indicator: SpatialFunction {
    /// `∫_region |y|^α dy`.
    fn weighted_volume(&self, alpha: f64) -> Result<f64>;
}

/// How `A_t` is discretized.
#[derive(Debug, Clone)]
pub enum Averaging {
    /// Plain sum over a full-sphere rule.
    Full(QuadratureRule),
    /// Band-restricted midpoint rule driven by [`SpatialFunction::band_hint`].
    Band(BandRule),
}

impl Averaging {
    pub fn average(&self, f: &dyn SpatialFunction, x: &Point, t: f64) -> f64 {
        match self {
            Averaging::Full(rule) => spherical_average(f, x, t, rule),
            Averaging::Band(rule) => banded_average(f, x, t, *rule),
        }
    }
}

fn shift(x: &Point, t: f64, w: &Point) -> Point {
    [x[0] + t * w[0], x[1] + t * w[1], x[2] + t * w[2]]
}

/// `Σ weights · f(x + tω)` over the full rule.
pub fn spherical_average(f: &dyn SpatialFunction, x: &Point, t: f64, rule: &QuadratureRule) -> f64 {
    rule.integrate(|w| f.eval(&shift(x, t, w)))
}

/// `A_t f(x)` integrating only the band reported by the function. Without
/// a hint the whole sphere is integrated with the band rule.
pub fn banded_average(f: &dyn SpatialFunction, x: &Point, t: f64, rule: BandRule) -> f64 {
    let d = f.dim();
    match f.band_hint(x, t) {
        Some(BandHint::Empty) => 0.0,
        Some(BandHint::Band { band, exact: true, value }) => value * band_measure(d, band.u_lo, band.u_hi),
        Some(BandHint::Band { band, exact: false, .. }) => {
            integrate_band(d, &band, rule, |w| f.eval(&shift(x, t, w)))
        }
        None => {
            let mut axis = [0.0; 3];
            axis[vertical(d)] = 1.0;
            integrate_band(d, &Band::full(axis), rule, |w| f.eval(&shift(x, t, w)))
        }
    }
}

/// `max_{t ∈ radii} |A_t f(x)|`.
pub fn maximal_over(f: &dyn SpatialFunction, radii: &[f64], x: &Point, avg: &Averaging) -> Result<f64> {
    if radii.is_empty() {
        return Err(Error::EmptySet);
    }
    Ok(radii.iter().map(|&t| avg.average(f, x, t).abs()).fold(0.0, f64::max))
}

/// Sampled maximal function `M_ℰ f(x)` over the radii of a sampled set.
pub fn maximal_function(f: &dyn SpatialFunction, set: &SampledSet, x: &Point, avg: &Averaging) -> Result<f64> {
    maximal_over(f, &set.radii(), x, avg)
}

fn unit_or_vertical(x: &Point, d: usize) -> (Point, f64) {
    let r = norm(x, d);
    if r > 0.0 {
        ([x[0] / r, x[1] / r, x[2] / r], r)
    } else {
        let mut e = [0.0; 3];
        e[vertical(d)] = 1.0;
        (e, 0.0)
    }
}

/// Band of `u = ⟨x/|x|, ω⟩` with `lo ≤ |x + tω| ≤ hi`.
fn radial_band(x: &Point, d: usize, t: f64, lo: f64, hi: f64) -> Option<BandHint> {
    let (axis, r) = unit_or_vertical(x, d);
    if r == 0.0 {
        return Some(if t >= lo && t <= hi {
            BandHint::Band { band: Band::full(axis), exact: false, value: 1.0 }
        } else {
            BandHint::Empty
        });
    }
    let base = t * t + r * r;
    let denom = 2.0 * t * r;
    let u_lo = if lo <= 0.0 { -1.0 } else { (lo * lo - base) / denom };
    let u_hi = (hi * hi - base) / denom;
    Some(match Band::clipped(axis, u_lo, u_hi) {
        Some(band) => BandHint::Band { band, exact: false, value: 1.0 },
        None => BandHint::Empty,
    })
}

fn mark_exact(h: Option<BandHint>) -> Option<BandHint> {
    match h {
        Some(BandHint::Band { band, value, .. }) => Some(BandHint::Band { band, exact: true, value }),
        other => other,
    }
}

/// The constant function.
#[derive(Debug, Clone, Copy)]
pub struct Constant {
    pub d: usize,
    pub value: f64,
}

impl SpatialFunction for Constant {
    fn dim(&self) -> usize {
        self.d
    }
    fn eval(&self, _y: &Point) -> f64 {
        self.value
    }
    fn band_hint(&self, x: &Point, _t: f64) -> Option<BandHint> {
        let (axis, _) = unit_or_vertical(x, self.d);
        Some(BandHint::Band { band: Band::full(axis), exact: true, value: self.value })
    }
}

/// `χ_δ`, the indicator of the closed ball `{|y| ≤ radius}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Ball {
    pub d: usize,
    pub radius: f64,
}

impl SpatialFunction for Ball {
    fn dim(&self) -> usize {
        self.d
    }
    fn eval(&self, y: &Point) -> f64 {
        f64::from(norm(y, self.d) <= self.radius)
    }
    fn band_hint(&self, x: &Point, t: f64) -> Option<BandHint> {
        mark_exact(radial_band(x, self.d, t, 0.0, self.radius))
    }
}

impl Indicator for Ball {
    fn weighted_volume(&self, alpha: f64) -> Result<f64> {
        let d = self.d as f64;
        if alpha <= -d {
            return Err(Error::Domain { value: alpha, lower: -d });
        }
        Ok(sphere_area(self.d) * self.radius.powf(alpha + d) / (alpha + d))
    }
}

/// `Q(a) = {|y_d − a| ≤ half_height, |y'| ≤ radius}`, the Knapp box.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Cylinder {
    pub d: usize,
    pub center: f64,
    pub half_height: f64,
    pub radius: f64,
}

impl Cylinder {
    pub fn scaled(&self, lambda: f64) -> Cylinder {
        Cylinder {
            d: self.d,
            center: self.center * lambda,
            half_height: self.half_height * lambda,
            radius: self.radius * lambda,
        }
    }

    /// Signed distance-like margin: positive inside.
    pub fn margin(&self, y: &Point) -> f64 {
        let v = self.half_height - (y[vertical(self.d)] - self.center).abs();
        let h = self.radius - horizontal_norm(y, self.d);
        v.min(h)
    }

    pub fn volume(&self) -> f64 {
        2.0 * self.half_height * ball_volume(self.d - 1, self.radius)
    }
}

/// Volume of the `n`-ball, `n ∈ {1, 2}`.
pub fn ball_volume(n: usize, r: f64) -> f64 {
    match n {
        1 => 2.0 * r,
        2 => PI * r * r,
        _ => unreachable!("only n ∈ {{1, 2}}"),
    }
}

impl SpatialFunction for Cylinder {
    fn dim(&self) -> usize {
        self.d
    }
    fn eval(&self, y: &Point) -> f64 {
        f64::from(self.margin(y) >= 0.0)
    }
    fn band_hint(&self, x: &Point, t: f64) -> Option<BandHint> {
        let d = self.d;
        let vd = vertical(d);
        let mut axis = [0.0; 3];
        axis[vd] = 1.0;
        let xd = x[vd];
        let Some(band) =
            Band::clipped(axis, (self.center - self.half_height - xd) / t, (self.center + self.half_height - xd) / t)
        else {
            return Some(BandHint::Empty);
        };
        // Largest |ω'| on the band bounds the horizontal reach.
        let max_sin = if band.u_lo <= 0.0 && band.u_hi >= 0.0 {
            1.0
        } else {
            let u = band.u_lo.abs().min(band.u_hi.abs());
            (1.0 - u * u).max(0.0).sqrt()
        };
        let exact = horizontal_norm(x, d) + t * max_sin <= self.radius;
        Some(BandHint::Band { band, exact, value: 1.0 })
    }
}

impl Indicator for Cylinder {
    fn weighted_volume(&self, alpha: f64) -> Result<f64> {
        let lo = self.center - self.half_height;
        if alpha != 0.0 && lo <= 0.0 {
            return Err(Error::Parameter("weighted cylinder volume needs the box above the origin".into()));
        }
        if alpha == 0.0 {
            return Ok(self.volume());
        }
        // y_d ∈ [lo, hi] × ρ ∈ [0, R], Gauss–Legendre in both.
        let yd_nodes = super::quadrature::gauss_legendre_on(24, lo, self.center + self.half_height);
        let mut total = 0.0;
        let panels = 8;
        for m in 0..panels {
            let a = self.radius * m as f64 / panels as f64;
            let b = self.radius * (m + 1) as f64 / panels as f64;
            for (rho, wr) in super::quadrature::gauss_legendre_on(24, a, b) {
                let shell = if self.d == 2 { 2.0 } else { 2.0 * PI * rho };
                for &(yd, wy) in &yd_nodes {
                    total += wr * wy * shell * (rho * rho + yd * yd).powf(alpha / 2.0);
                }
            }
        }
        Ok(total)
    }
}

/// `𝒰(a) = {a − δ ≤ |y| ≤ a + δ, |y'| ≤ horizontal}`. With an infinite
/// `horizontal` this is an annulus.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Shell {
    pub d: usize,
    pub radius: f64,
    pub half_width: f64,
    pub horizontal: f64,
}

impl Shell {
    pub fn scaled(&self, lambda: f64) -> Shell {
        Shell {
            d: self.d,
            radius: self.radius * lambda,
            half_width: self.half_width * lambda,
            horizontal: self.horizontal * lambda,
        }
    }

    pub fn margin(&self, y: &Point) -> f64 {
        let r = self.half_width - (norm(y, self.d) - self.radius).abs();
        let h = self.horizontal - horizontal_norm(y, self.d);
        r.min(h)
    }

    /// σ-measure (unnormalized) of directions with `|ω'| ≤ s`, both caps.
    fn cap_area(&self, s: f64) -> f64 {
        if s >= 1.0 {
            return sphere_area(self.d);
        }
        if self.d == 2 {
            4.0 * s.asin()
        } else {
            4.0 * PI * (1.0 - (1.0 - s * s).sqrt())
        }
    }
}

impl SpatialFunction for Shell {
    fn dim(&self) -> usize {
        self.d
    }
    fn eval(&self, y: &Point) -> f64 {
        f64::from(self.margin(y) >= 0.0)
    }
    fn band_hint(&self, x: &Point, t: f64) -> Option<BandHint> {
        let outer = self.radius + self.half_width;
        let h = radial_band(x, self.d, t, (self.radius - self.half_width).max(0.0), outer);
        if self.horizontal >= outer {
            mark_exact(h)
        } else {
            h
        }
    }
}

impl Indicator for Shell {
    fn weighted_volume(&self, alpha: f64) -> Result<f64> {
        let lo = (self.radius - self.half_width).max(0.0);
        let hi = self.radius + self.half_width;
        let d = self.d as f64;
        if lo == 0.0 && alpha <= -d {
            return Err(Error::Domain { value: alpha, lower: -d });
        }
        let mut total = 0.0;
        for (r, w) in super::quadrature::gauss_legendre_on(32, lo, hi) {
            total += w * r.powf(alpha + d - 1.0) * self.cap_area(self.horizontal / r);
        }
        Ok(total)
    }
}

/// Wraps a closure as a function on `ℝ^d`.
pub struct FnFunction<F> {
    pub d: usize,
    pub f: F,
}

impl<F: Fn(&Point) -> f64 + Sync> SpatialFunction for FnFunction<F> {
    fn dim(&self) -> usize {
        self.d
    }
    fn eval(&self, y: &Point) -> f64 {
        (self.f)(y)
    }
}

/// Values on an axis-aligned grid with cell size `h`, piecewise constant,
/// zero outside the box.
#[derive(Debug, Clone, PartialEq)]
pub struct GridFunction {
    pub d: usize,
    pub origin: Point,
    pub h: f64,
    pub shape: [usize; 3],
    pub values: Vec<f64>,
}

impl GridFunction {
    pub fn new(d: usize, origin: Point, h: f64, shape: [usize; 3], values: Vec<f64>) -> Result<Self> {
        check_dim(d)?;
        let n: usize = shape[..d].iter().product();
        if values.len() != n || !(h > 0.0) {
            return Err(Error::Parameter(format!("grid needs {n} values and h > 0")));
        }
        Ok(GridFunction { d, origin, h, shape, values })
    }
}

impl SpatialFunction for GridFunction {
    fn dim(&self) -> usize {
        self.d
    }
    fn eval(&self, y: &Point) -> f64 {
        let mut idx = 0;
        for i in 0..self.d {
            let c = ((y[i] - self.origin[i]) / self.h).floor();
            if c < 0.0 || c >= self.shape[i] as f64 {
                return 0.0;
            }
            idx = idx * self.shape[i] + c as usize;
        }
        self.values[idx]
    }
}
