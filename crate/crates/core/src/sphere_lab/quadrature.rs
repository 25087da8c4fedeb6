//! Quadrature for the normalized surface measure `σ` on `S^{d−1}`,
//! `d ∈ {2, 3}`.
//!
//! Points are stored as `[f64; 3]`; in `d = 2` the third slot is unused and
//! the vertical coordinate is index 1. See [`vertical`].

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

pub type Point = [f64; 3];

pub const MAX_J_D2: u32 = 14;
pub const MAX_J_D3: u32 = 10;

/// Index of the vertical coordinate `x_d`.
pub fn vertical(d: usize) -> usize {
    d - 1
}

/// `|x'|`, the norm of the horizontal coordinates.
pub fn horizontal_norm(x: &Point, d: usize) -> f64 {
    x[..d - 1].iter().map(|v| v * v).sum::<f64>().sqrt()
}

pub fn norm(x: &Point, d: usize) -> f64 {
    x[..d].iter().map(|v| v * v).sum::<f64>().sqrt()
}

pub fn check_dim(d: usize) -> Result<()> {
    if d == 2 || d == 3 {
        Ok(())
    } else {
        Err(Error::Parameter(format!("only d ∈ {{2, 3}} is supported, got {d}")))
    }
}

/// Surface area of `S^{d−1}`.
pub fn sphere_area(d: usize) -> f64 {
    if d == 2 {
        2.0 * PI
    } else {
        4.0 * PI
    }
}

/// Gauss–Legendre nodes and weights on `[−1, 1]`.
pub fn gauss_legendre(n: usize) -> Vec<(f64, f64)> {
    let mut out = vec![(0.0, 0.0); n];
    let m = n.div_ceil(2);
    for i in 0..m {
        let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, x);
            for k in 2..=n {
                let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            if n == 1 {
                p0 = 1.0;
                p1 = x;
            }
            dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
            let dx = p1 / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        out[i] = (-x, w);
        out[n - 1 - i] = (x, w);
    }
    out
}

/// Gauss–Legendre rule mapped to `[a, b]`.
pub fn gauss_legendre_on(n: usize, a: f64, b: f64) -> Vec<(f64, f64)> {
    let half = (b - a) / 2.0;
    let mid = (a + b) / 2.0;
    gauss_legendre(n).into_iter().map(|(x, w)| (mid + half * x, w * half)).collect()
}

/// Product rule for `σ` with node spacing about `2^{-j}`. Nodes are
/// generated on the fly; the `d = 3` rule has `128·4^j` nodes.
#[derive(Debug, Clone)]
pub struct QuadratureRule {
    pub d: usize,
    pub j: u32,
    /// Polar-cosine nodes for `d = 3`, weights already normalized to sum 1.
    polar: Vec<(f64, f64)>,
    n_phi: usize,
}

impl QuadratureRule {
    pub fn new(d: usize, j: u32) -> Result<Self> {
        check_dim(d)?;
        let cap = if d == 2 { MAX_J_D2 } else { MAX_J_D3 };
        if j > cap {
            return Err(Error::ResourceCap(format!("quadrature level j = {j} exceeds cap {cap} for d = {d}")));
        }
        if d == 2 {
            Ok(QuadratureRule { d, j, polar: Vec::new(), n_phi: 64 << j })
        } else {
            let polar = gauss_legendre(8 << j).into_iter().map(|(x, w)| (x, w / 2.0)).collect();
            Ok(QuadratureRule { d, j, polar, n_phi: 16 << j })
        }
    }

    pub fn len(&self) -> usize {
        if self.d == 2 {
            self.n_phi
        } else {
            self.polar.len() * self.n_phi
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Calls `f(ω, weight)` for every node.
    pub fn for_each(&self, mut f: impl FnMut(&Point, f64)) {
        let dphi = 2.0 * PI / self.n_phi as f64;
        if self.d == 2 {
            let w = 1.0 / self.n_phi as f64;
            for k in 0..self.n_phi {
                let (s, c) = (k as f64 * dphi).sin_cos();
                f(&[s, c, 0.0], w);
            }
        } else {
            let trig: Vec<(f64, f64)> = (0..self.n_phi).map(|k| (k as f64 * dphi).sin_cos()).collect();
            for &(u, wu) in &self.polar {
                let r = (1.0 - u * u).max(0.0).sqrt();
                let w = wu / self.n_phi as f64;
                for &(s, c) in &trig {
                    f(&[r * c, r * s, u], w);
                }
            }
        }
    }

    pub fn integrate(&self, f: impl Fn(&Point) -> f64) -> f64 {
        let mut total = 0.0;
        self.for_each(|w, wt| total += wt * f(w));
        total
    }
}

/// The slice `{ω : u_lo ≤ ⟨axis, ω⟩ ≤ u_hi}` of the sphere.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Band {
    pub axis: Point,
    pub u_lo: f64,
    pub u_hi: f64,
}

impl Band {
    pub fn clipped(axis: Point, u_lo: f64, u_hi: f64) -> Option<Band> {
        let (lo, hi) = (u_lo.max(-1.0), u_hi.min(1.0));
        (lo < hi).then_some(Band { axis, u_lo: lo, u_hi: hi })
    }

    pub fn full(axis: Point) -> Band {
        Band { axis, u_lo: -1.0, u_hi: 1.0 }
    }
}

/// `σ` of a band: `(u_hi − u_lo)/2` in `d = 3`, arc length over `π` in
/// `d = 2`.
pub fn band_measure(d: usize, u_lo: f64, u_hi: f64) -> f64 {
    let (lo, hi) = (u_lo.clamp(-1.0, 1.0), u_hi.clamp(-1.0, 1.0));
    if hi <= lo {
        return 0.0;
    }
    if d == 2 {
        (lo.acos() - hi.acos()) / PI
    } else {
        (hi - lo) / 2.0
    }
}

/// Midpoint resolution of a band rule.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BandRule {
    /// Nodes in the axial direction (`d = 3`) or per arc (`d = 2`).
    pub n_u: usize,
    /// Azimuthal nodes (`d = 3` only).
    pub n_phi: usize,
}

impl Default for BandRule {
    fn default() -> Self {
        BandRule { n_u: 512, n_phi: 256 }
    }
}

fn orthonormal_frame(axis: &Point) -> (Point, Point) {
    let a = *axis;
    let helper = if a[0].abs() < 0.9 { [1.0, 0.0, 0.0] } else { [0.0, 1.0, 0.0] };
    let dot = helper[0] * a[0] + helper[1] * a[1] + helper[2] * a[2];
    let mut e1 = [helper[0] - dot * a[0], helper[1] - dot * a[1], helper[2] - dot * a[2]];
    let n1 = (e1[0] * e1[0] + e1[1] * e1[1] + e1[2] * e1[2]).sqrt();
    e1.iter_mut().for_each(|v| *v /= n1);
    let e2 = [
        a[1] * e1[2] - a[2] * e1[1],
        a[2] * e1[0] - a[0] * e1[2],
        a[0] * e1[1] - a[1] * e1[0],
    ];
    (e1, e2)
}

/// `∫_{band} f dσ` by the midpoint rule in coordinates where `σ` is
/// uniform: the arc angle for `d = 2`, `(u, φ)` for `d = 3`.
pub fn integrate_band(d: usize, band: &Band, rule: BandRule, f: impl Fn(&Point) -> f64) -> f64 {
    let a = band.axis;
    if d == 2 {
        let perp = [-a[1], a[0], 0.0];
        let (phi_lo, phi_hi) = (band.u_hi.clamp(-1.0, 1.0).acos(), band.u_lo.clamp(-1.0, 1.0).acos());
        let n = rule.n_u.max(1);
        let dphi = (phi_hi - phi_lo) / n as f64;
        let mut total = 0.0;
        for k in 0..n {
            let phi = phi_lo + (k as f64 + 0.5) * dphi;
            let (s, c) = phi.sin_cos();
            for sign in [1.0, -1.0] {
                let w = [c * a[0] + sign * s * perp[0], c * a[1] + sign * s * perp[1], 0.0];
                total += f(&w);
            }
        }
        total * dphi / (2.0 * PI)
    } else {
        let (e1, e2) = orthonormal_frame(&a);
        let (n_u, n_phi) = (rule.n_u.max(1), rule.n_phi.max(1));
        let du = (band.u_hi - band.u_lo) / n_u as f64;
        let trig: Vec<(f64, f64)> =
            (0..n_phi).map(|k| ((k as f64 + 0.5) * 2.0 * PI / n_phi as f64).sin_cos()).collect();
        let mut total = 0.0;
        for i in 0..n_u {
            let u = band.u_lo + (i as f64 + 0.5) * du;
            let r = (1.0 - u * u).max(0.0).sqrt();
            for &(s, c) in &trig {
                let w = [
                    u * a[0] + r * (c * e1[0] + s * e2[0]),
                    u * a[1] + r * (c * e1[1] + s * e2[1]),
                    u * a[2] + r * (c * e1[2] + s * e2[2]),
                ];
                total += f(&w);
            }
        }
        total * (band.u_hi - band.u_lo) / 2.0 / (n_u * n_phi) as f64
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gauss_legendre_exactness() {
        for n in [1, 2, 5, 16, 33] {
            let rule = gauss_legendre(n);
            let total: f64 = rule.iter().map(|r| r.1).sum();
            assert!((total - 2.0).abs() < 1e-13);
            // exact for degree 2n − 1
            let deg = 2 * n - 2;
            let got: f64 = rule.iter().map(|&(x, w)| w * x.powi(deg as i32)).sum();
            assert!((got - 2.0 / (deg as f64 + 1.0)).abs() < 1e-12, "n = {n}");
        }
        let big = gauss_legendre(8192);
        assert!((big.iter().map(|r| r.1).sum::<f64>() - 2.0).abs() < 1e-11);
    }

    #[test]
    fn rules_are_normalized() {
        let r2 = QuadratureRule::new(2, 0).unwrap();
        assert_eq!(r2.len(), 64);
        r2.for_each(|_, w| assert_eq!(w, 1.0 / 64.0));
        for (d, j) in [(2, 3), (3, 0), (3, 2)] {
            let rule = QuadratureRule::new(d, j).unwrap();
            assert!((rule.integrate(|_| 1.0) - 1.0).abs() < 1e-12);
            rule.for_each(|w, _| assert!((norm(w, d) - 1.0).abs() < 1e-12));
        }
        assert!(matches!(QuadratureRule::new(3, 11), Err(Error::ResourceCap(_))));
        assert!(matches!(QuadratureRule::new(2, 15), Err(Error::ResourceCap(_))));
    }

    #[test]
    fn moments() {
        let r2 = QuadratureRule::new(2, 2).unwrap();
        assert!((r2.integrate(|w| w[0] * w[0]) - 0.5).abs() < 1e-10);
        let r3 = QuadratureRule::new(3, 1).unwrap();
        assert!((r3.integrate(|w| w[2] * w[2]) - 1.0 / 3.0).abs() < 1e-10);
        assert!((r3.integrate(|w| w[0] * w[0] * w[1] * w[1]) - 1.0 / 15.0).abs() < 1e-10);
    }

    #[test]
    fn band_rule_matches_closed_form() {
        for d in [2, 3] {
            let axis = if d == 2 { [0.6, 0.8, 0.0] } else { [0.0, 0.6, 0.8] };
            let band = Band { axis, u_lo: -0.3, u_hi: 0.7 };
            let got = integrate_band(d, &band, BandRule::default(), |_| 1.0);
            assert!((got - band_measure(d, -0.3, 0.7)).abs() < 1e-12);
            // first moment of u over the band
            let m = integrate_band(d, &band, BandRule::default(), |w| {
                w[0] * axis[0] + w[1] * axis[1] + w[2] * axis[2]
            });
            let exact = if d == 3 {
                (0.7f64.powi(2) - 0.3f64.powi(2)) / 4.0
            } else {
                // ∫ cos φ dφ / π over [acos 0.7, acos(−0.3)]
                ((-0.3f64).acos().sin() - 0.7f64.acos().sin()) / PI
            };
            assert!((m - exact).abs() < 1e-6, "d = {d}: {m} vs {exact}");
        }
        assert_eq!(band_measure(3, -1.0, 1.0), 1.0);
        assert_eq!(band_measure(2, -1.0, 1.0), 1.0);
    }

    #[test]
    fn band_agrees_with_full_rule() {
        let rule = QuadratureRule::new(3, 5).unwrap();
        let axis = [0.0, 0.0, 1.0];
        let f = |w: &Point| if w[2] > 0.8 && w[0] > 0.1 { 1.0 } else { 0.0 };
        let full = rule.integrate(f);
        let band = integrate_band(3, &Band { axis, u_lo: 0.8, u_hi: 1.0 }, BandRule { n_u: 256, n_phi: 1024 }, f);
        assert!((full - band).abs() < 2e-3, "{full} vs {band}");
    }
}
