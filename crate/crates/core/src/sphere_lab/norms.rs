//! Power-weighted `L^p` norms in polar coordinates.

use super::quadrature::{check_dim, gauss_legendre_on, sphere_area, Point, QuadratureRule};
use crate::{Error, Result};

const PANEL_NODES: usize = 16;
const SUBPANELS: usize = 4;
/// Geometric panels below the outer radius before the remainder is
/// treated as constant.
const MAX_GEOMETRIC_PANELS: usize = 400;

/// `∫_{r_lo}^{r_hi} h(r) r^{α+d−1} dr` on geometric panels `[r/2, r]`,
/// each split into equal subpanels with 16-point Gauss–Legendre.
///
/// When `r_lo = 0` the panels stop once the remainder is below `1e-16` of
/// the total scale, and the tail is integrated with `h` frozen at the last
/// radius.
pub fn radial_integral(h: impl Fn(f64) -> f64, d: usize, alpha: f64, r_lo: f64, r_hi: f64) -> Result<f64> {
    check_dim(d)?;
    let power = alpha + d as f64 - 1.0;
    if r_lo == 0.0 && alpha <= -(d as f64) {
        return Err(Error::Domain { value: alpha, lower: -(d as f64) });
    }
    if !(r_lo >= 0.0 && r_hi > r_lo && r_hi.is_finite()) {
        return Err(Error::Parameter(format!("radial domain [{r_lo}, {r_hi}] must be bounded and nonempty")));
    }
    let mut total = 0.0;
    let mut hi = r_hi;
    let panels = if r_lo > 0.0 {
        ((r_hi / r_lo).log2().ceil() as usize).max(1)
    } else {
        ((53.0 / (alpha + d as f64)).ceil() as usize).clamp(1, MAX_GEOMETRIC_PANELS)
    };
    for _ in 0..panels {
        let lo = (hi / 2.0).max(r_lo);
        let width = (hi - lo) / SUBPANELS as f64;
        for s in 0..SUBPANELS {
            let a = lo + s as f64 * width;
            for (r, w) in gauss_legendre_on(PANEL_NODES, a, a + width) {
                total += w * h(r) * r.powf(power);
            }
        }
        hi = lo;
        if lo <= r_lo {
            break;
        }
    }
    if r_lo == 0.0 && hi > 0.0 {
        total += h(hi) * hi.powf(alpha + d as f64) / (alpha + d as f64);
    }
    Ok(total)
}

/// `(∫_{r_lo ≤ |x| ≤ r_hi} |g(x)|^p |x|^α dx)^{1/p}`, angular part by the
/// full-sphere rule at level `angular_j`.
pub fn weighted_norm(
    g: impl Fn(&Point) -> f64,
    d: usize,
    p: f64,
    alpha: f64,
    r_lo: f64,
    r_hi: f64,
    angular_j: u32,
) -> Result<f64> {
    if !(p >= 1.0) {
        return Err(Error::Parameter(format!("p must be at least 1, got {p}")));
    }
    if alpha <= -(d as f64) {
        return Err(Error::Domain { value: alpha, lower: -(d as f64) });
    }
    let rule = QuadratureRule::new(d, angular_j)?;
    let angular = |r: f64| rule.integrate(|w| g(&[r * w[0], r * w[1], r * w[2]]).abs().powf(p));
    let integral = radial_integral(angular, d, alpha, r_lo, r_hi)?;
    Ok((sphere_area(d) * integral).powf(1.0 / p))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn disk_area() {
        let v = weighted_norm(|_| 1.0, 2, 1.0, 0.0, 0.0, 1.0, 0).unwrap();
        assert!((v - PI).abs() < 1e-6, "{v}");
    }

    #[test]
    fn singular_weight() {
        // ∫₀¹ r^{−1} r dr · 2π
        let v = weighted_norm(|_| 1.0, 2, 1.0, -1.0, 0.0, 1.0, 0).unwrap();
        assert!((v - 2.0 * PI).abs() < 1e-6, "{v}");
        assert!(matches!(weighted_norm(|_| 1.0, 2, 1.0, -2.0, 0.0, 1.0, 0), Err(Error::Domain { .. })));
        // close to the integrability threshold the tail formula carries the mass
        let v = radial_integral(|_| 1.0, 3, -2.5, 0.0, 1.0).unwrap();
        assert!((v - 2.0).abs() < 1e-9, "{v}");
    }

    #[test]
    fn dyadic_annulus() {
        for (d, alpha) in [(2usize, 0.5), (3, -1.5), (3, 0.0)] {
            for k in [0, 3, 7] {
                let hi = (-(k as f64)).exp2();
                let v = weighted_norm(|_| 1.0, d, 2.0, alpha, hi / 2.0, hi, 1).unwrap();
                let s = alpha + d as f64;
                let exact = sphere_area(d) * (hi.powf(s) - (hi / 2.0).powf(s)) / s;
                assert!((v * v / exact - 1.0).abs() < 1e-10, "d = {d}, k = {k}");
            }
        }
    }

    #[test]
    fn anisotropic_integrand() {
        // ∫_{|x| ≤ 1} x₁² dx = π/4 in the plane
        let v = weighted_norm(|x| x[0], 2, 2.0, 0.0, 0.0, 1.0, 2).unwrap();
        assert!((v * v - PI / 4.0).abs() < 1e-9);
    }
}
