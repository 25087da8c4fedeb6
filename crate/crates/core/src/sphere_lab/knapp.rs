//! Knapp-type extremizers for the two regimes `k ≤ j/2` and `j/2 < k ≤ j`,
//! the pieces `U(a,t)` and `𝒬(a,t)` on which their maximal averages are
//! large, and exact geometric checks on both.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::functions::{Cylinder, Shell};
use super::quadrature::{check_dim, horizontal_norm, norm, vertical, Point};
use crate::{Error, Result};

/// Default `ε` for the small-`k` construction.
pub const SMALL_K_EPS: f64 = 1.0 / 64.0;
/// Largest admissible `ε` for the large-`k` construction.
pub const LARGE_K_EPS: f64 = 1e-2;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum KnappCase {
    SmallK,
    LargeK,
}

impl KnappCase {
    pub fn for_scales(j: u32, k: u32) -> KnappCase {
        if 2 * k <= j {
            KnappCase::SmallK
        } else {
            KnappCase::LargeK
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KnappConfig {
    pub d: usize,
    pub j: u32,
    pub k: u32,
    /// Anchor radius, a point of `E ∩ I`.
    pub a: f64,
    pub eps: f64,
    pub case: KnappCase,
}

impl KnappConfig {
    /// Config with the case inferred from `(j, k)`.
    pub fn new(d: usize, j: u32, k: u32, a: f64, eps: f64) -> Result<Self> {
        let c = KnappConfig { d, j, k, a, eps, case: KnappCase::for_scales(j, k) };
        c.validate()?;
        Ok(c)
    }

    pub fn validate(&self) -> Result<()> {
        check_dim(self.d)?;
        if self.k == 0 || self.k > self.j {
            return Err(Error::Parameter(format!("need 0 < k ≤ j, got j = {}, k = {}", self.j, self.k)));
        }
        if self.case != KnappCase::for_scales(self.j, self.k) {
            return Err(Error::Config(format!(
                "{:?} does not match j = {}, k = {} (small k means k ≤ j/2)",
                self.case, self.j, self.k
            )));
        }
        if !(1.0..=2.0).contains(&self.a) {
            return Err(Error::Parameter(format!("anchor a = {} must lie in [1, 2]", self.a)));
        }
        if !(self.eps > 0.0) {
            return Err(Error::Parameter("ε must be positive".into()));
        }
        if self.case == KnappCase::LargeK && self.eps > LARGE_K_EPS {
            return Err(Error::Parameter(format!("large-k construction needs ε ≤ {LARGE_K_EPS}, got {}", self.eps)));
        }
        Ok(())
    }

    pub fn delta(&self) -> f64 {
        (-(self.j as f64)).exp2()
    }

    /// `|I| = 2^{-k}`.
    pub fn interval_length(&self) -> f64 {
        (-(self.k as f64)).exp2()
    }

    /// The lower bound scale `2^{(k−j)(d−1)}`.
    pub fn average_scale(&self) -> f64 {
        ((self.k as f64 - self.j as f64) * (self.d - 1) as f64).exp2()
    }
}

/// Which cap of `U(a,t)` to use.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Branch {
    /// `x_d < a`: the cap near the origin.
    Lower,
    Upper,
    Both,
}

/// `U(a,t)`: the `ε2^{-j}` shell of radius `t` about `a e_d`, cut to
/// `|x'| ≤ 2^{-k}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UPiece {
    pub d: usize,
    pub a: f64,
    pub t: f64,
    pub half_width: f64,
    pub max_horizontal: f64,
    pub branch: Branch,
}

impl UPiece {
    fn t_lo(&self) -> f64 {
        self.t - self.half_width
    }

    fn t_hi(&self) -> f64 {
        self.t + self.half_width
    }

    /// Vertical thickness of one cap at horizontal radius `rho`.
    fn thickness(&self, rho: f64) -> f64 {
        (self.t_hi().powi(2) - rho * rho).sqrt() - (self.t_lo().powi(2) - rho * rho).sqrt()
    }

    pub fn contains(&self, x: &Point) -> bool {
        let rho = horizontal_norm(x, self.d);
        let xd = x[vertical(self.d)];
        let dist2 = rho * rho + (xd - self.a).powi(2);
        let side = match self.branch {
            Branch::Lower => xd < self.a,
            Branch::Upper => xd > self.a,
            Branch::Both => true,
        };
        side && rho <= self.max_horizontal && dist2 >= self.t_lo().powi(2) && dist2 <= self.t_hi().powi(2)
    }

    /// Exact volume.
    pub fn volume(&self) -> f64 {
        let k = self.max_horizontal;
        let one = if self.d == 2 {
            let f = |t: f64| (k * (t * t - k * k).sqrt() + t * t * (k / t).asin()) / 2.0;
            2.0 * (f(self.t_hi()) - f(self.t_lo()))
        } else {
            let g = |t: f64| (t.powi(3) - (t * t - k * k).powf(1.5)) / 3.0;
            2.0 * std::f64::consts::PI * (g(self.t_hi()) - g(self.t_lo()))
        };
        if self.branch == Branch::Both {
            2.0 * one
        } else {
            one
        }
    }

    /// Uniform sample: `x'` by rejection against the cap thickness, then
    /// `x_d` uniform across the cap.
    pub fn sample(&self, rng: &mut impl Rng) -> Point {
        let kmax = self.max_horizontal;
        let lmax = self.thickness(kmax);
        loop {
            let xp = sample_ball(self.d - 1, kmax, rng);
            let rho = (xp[0] * xp[0] + xp[1] * xp[1]).sqrt();
            let l = self.thickness(rho);
            if rng.gen::<f64>() * lmax > l {
                continue;
            }
            let lower = match self.branch {
                Branch::Lower => true,
                Branch::Upper => false,
                Branch::Both => rng.gen::<bool>(),
            };
            let s = rng.gen::<f64>() * l;
            let xd = if lower {
                self.a - (self.t_hi().powi(2) - rho * rho).sqrt() + s
            } else {
                self.a + (self.t_lo().powi(2) - rho * rho).sqrt() + s
            };
            return embed(self.d, xp, xd);
        }
    }

    /// Distance to `a e_d` over the piece; disjoint ranges certify disjoint
    /// pieces.
    pub fn certificate(&self) -> (f64, f64) {
        (self.t_lo(), self.t_hi())
    }
}

/// `𝒬(a,t) = {ε2^{-k-1} ≤ |x'| ≤ ε2^{-k}, |x_d − a + t| ≤ ε2^{-j}}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QPiece {
    pub d: usize,
    pub a: f64,
    pub t: f64,
    pub half_height: f64,
    pub r_in: f64,
    pub r_out: f64,
}

impl QPiece {
    pub fn contains(&self, x: &Point) -> bool {
        let rho = horizontal_norm(x, self.d);
        rho >= self.r_in && rho <= self.r_out && (x[vertical(self.d)] - self.a + self.t).abs() <= self.half_height
    }

    pub fn volume(&self) -> f64 {
        let base = if self.d == 2 {
            2.0 * (self.r_out - self.r_in)
        } else {
            std::f64::consts::PI * (self.r_out.powi(2) - self.r_in.powi(2))
        };
        2.0 * self.half_height * base
    }

    pub fn sample(&self, rng: &mut impl Rng) -> Point {
        let xp = if self.d == 2 {
            let r = self.r_in + rng.gen::<f64>() * (self.r_out - self.r_in);
            [if rng.gen::<bool>() { r } else { -r }, 0.0]
        } else {
            let r = (self.r_in.powi(2) + rng.gen::<f64>() * (self.r_out.powi(2) - self.r_in.powi(2))).sqrt();
            let phi = rng.gen::<f64>() * std::f64::consts::TAU;
            [r * phi.cos(), r * phi.sin()]
        };
        let xd = self.a - self.t + (2.0 * rng.gen::<f64>() - 1.0) * self.half_height;
        embed(self.d, xp, xd)
    }

    /// Range of `x_d` over the piece.
    pub fn certificate(&self) -> (f64, f64) {
        (self.a - self.t - self.half_height, self.a - self.t + self.half_height)
    }
}

/// A piece, optionally dilated by `scale` about the origin.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Piece {
    pub shape: PieceShape,
    pub scale: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PieceShape {
    U(UPiece),
    Q(QPiece),
}

impl Piece {
    pub fn new(shape: PieceShape) -> Piece {
        Piece { shape, scale: 1.0 }
    }

    pub fn scaled(&self, lambda: f64) -> Piece {
        Piece { shape: self.shape, scale: self.scale * lambda }
    }

    pub fn dim(&self) -> usize {
        match &self.shape {
            PieceShape::U(u) => u.d,
            PieceShape::Q(q) => q.d,
        }
    }

    pub fn contains(&self, x: &Point) -> bool {
        let y = [x[0] / self.scale, x[1] / self.scale, x[2] / self.scale];
        match &self.shape {
            PieceShape::U(u) => u.contains(&y),
            PieceShape::Q(q) => q.contains(&y),
        }
    }

    pub fn volume(&self) -> f64 {
        let v = match &self.shape {
            PieceShape::U(u) => u.volume(),
            PieceShape::Q(q) => q.volume(),
        };
        v * self.scale.powi(self.dim() as i32)
    }

    pub fn sample(&self, rng: &mut impl Rng) -> Point {
        let x = match &self.shape {
            PieceShape::U(u) => u.sample(rng),
            PieceShape::Q(q) => q.sample(rng),
        };
        [x[0] * self.scale, x[1] * self.scale, x[2] * self.scale]
    }

    pub fn certificate(&self) -> (f64, f64) {
        let (lo, hi) = match &self.shape {
            PieceShape::U(u) => u.certificate(),
            PieceShape::Q(q) => q.certificate(),
        };
        (lo * self.scale, hi * self.scale)
    }
}

fn embed(d: usize, xp: [f64; 2], xd: f64) -> Point {
    if d == 2 {
        [xp[0], xd, 0.0]
    } else {
        [xp[0], xp[1], xd]
    }
}

/// Uniform point of the `n`-ball (`n ∈ {1, 2}`), padded to two slots.
pub fn sample_ball(n: usize, r: f64, rng: &mut impl Rng) -> [f64; 2] {
    if n == 1 {
        [r * (2.0 * rng.gen::<f64>() - 1.0), 0.0]
    } else {
        let s = r * rng.gen::<f64>().sqrt();
        let phi = rng.gen::<f64>() * std::f64::consts::TAU;
        [s * phi.cos(), s * phi.sin()]
    }
}

/// The small-`k` construction: `f_Q = 1_{Q(a)}` and the pieces `U(a,t)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SmallK {
    pub config: KnappConfig,
    pub target: Cylinder,
}

impl SmallK {
    pub fn piece(&self, t: f64, branch: Branch) -> UPiece {
        let c = &self.config;
        UPiece {
            d: c.d,
            a: c.a,
            t,
            half_width: c.eps * c.delta(),
            max_horizontal: c.interval_length(),
            branch,
        }
    }
}

pub fn knapp_small_k(config: KnappConfig) -> Result<SmallK> {
    config.validate()?;
    if config.case != KnappCase::SmallK {
        return Err(Error::Config("knapp_small_k needs k ≤ j/2".into()));
    }
    let target = Cylinder {
        d: config.d,
        center: config.a,
        half_height: config.delta() / config.eps,
        radius: ((config.k as f64 - config.j as f64).exp2()) / config.eps,
    };
    Ok(SmallK { config, target })
}

/// The large-`k` construction: `g_𝒰 = 1_{𝒰(a)}` and the pieces `𝒬(a,t)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LargeK {
    pub config: KnappConfig,
    pub target: Shell,
}

impl LargeK {
    pub fn piece(&self, t: f64) -> QPiece {
        let c = &self.config;
        let outer = c.eps * c.interval_length();
        QPiece { d: c.d, a: c.a, t, half_height: c.eps * c.delta(), r_in: outer / 2.0, r_out: outer }
    }
}

pub fn knapp_large_k(config: KnappConfig) -> Result<LargeK> {
    config.validate()?;
    if config.case != KnappCase::LargeK {
        return Err(Error::Config("knapp_large_k needs k > j/2".into()));
    }
    let target = Shell {
        d: config.d,
        radius: config.a,
        half_width: config.delta(),
        horizontal: ((config.k as f64 - config.j as f64).exp2()) / config.eps,
    };
    Ok(LargeK { config, target })
}

/// Greedy maximal `δ`-separated subset of sorted `radii`.
pub fn separated_net(radii: &[f64], delta: f64) -> Vec<f64> {
    let mut net: Vec<f64> = Vec::new();
    for &r in radii {
        if net.last().map_or(true, |&last| r - last >= delta) {
            net.push(r);
        }
    }
    net
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DisjointnessReport {
    pub pieces: usize,
    pub pairs_checked: usize,
    /// Pairs whose certificate ranges intersect.
    pub overlaps: usize,
    /// Sampled points of one piece found inside another.
    pub sampled_hits: usize,
}

impl DisjointnessReport {
    pub fn passed(&self) -> bool {
        self.overlaps == 0 && self.sampled_hits == 0
    }
}

/// Pairwise disjointness through the certificate coordinate (radial
/// distance to `a e_d` for `U`, height for `𝒬`), which is exact for closed
/// pieces sharing an anchor. A sampled cross-check against the neighbouring
/// pieces backs it up.
pub fn check_disjoint(pieces: &[Piece], samples_per_piece: usize, seed: u64) -> DisjointnessReport {
    let certs: Vec<(f64, f64)> = pieces.iter().map(Piece::certificate).collect();
    let mut overlaps = 0;
    let mut pairs = 0;
    for i in 0..certs.len() {
        for j in i + 1..certs.len() {
            pairs += 1;
            if certs[i].0.max(certs[j].0) <= certs[i].1.min(certs[j].1) {
                overlaps += 1;
            }
        }
    }
    let mut hits = 0;
    for (i, piece) in pieces.iter().enumerate() {
        let mut rng = ChaCha8Rng::seed_from_u64(mix_seed(seed, i as u64));
        for _ in 0..samples_per_piece {
            let x = piece.sample(&mut rng);
            for j in [i.wrapping_sub(1), i + 1] {
                if j < pieces.len() && pieces[j].contains(&x) {
                    hits += 1;
                }
            }
        }
    }
    DisjointnessReport { pieces: pieces.len(), pairs_checked: pairs, overlaps, sampled_hits: hits }
}

/// Derives a per-stream seed.
pub fn mix_seed(seed: u64, stream: u64) -> u64 {
    let mut z = seed ^ stream.wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InclusionReport {
    pub config: KnappConfig,
    pub ts: Vec<f64>,
    pub samples: usize,
    pub failures: usize,
    /// Smallest membership margin seen (positive means strictly inside).
    pub worst_margin: f64,
    /// Small-k only: largest `|x + tθ_{x,0} − a e_d| / 2^{-j}`.
    pub center_offset: Option<f64>,
}

impl InclusionReport {
    pub fn passed(&self) -> bool {
        self.failures == 0 && self.center_offset.map_or(true, |c| c <= 1.0)
    }
}

/// Radii `t ∈ {a − 2^{-k}, a, a + 2^{-k}}`, the extremes allowed for
/// `t, a ∈ I`, clipped to `[1, 2]`.
pub fn default_test_radii(config: &KnappConfig) -> Vec<f64> {
    let l = config.interval_length();
    [config.a - l, config.a, config.a + l].into_iter().filter(|t| (1.0..=2.0).contains(t)).collect()
}

/// Samples `x` from `U(a,t)` (both caps) and `w'` from the `2^{k−j}` ball,
/// then checks `x + tθ_{x,w'} ∈ Q(a)`; for large `k` samples `x ∈ 𝒬(a,t)`
/// and `|ω'| ≤ ε2^{k−j}` and checks `x + tω ∈ 𝒰(a)`.
pub fn geometry_inclusion_test(config: &KnappConfig, ts: &[f64], n_samples: usize, seed: u64) -> Result<InclusionReport> {
    config.validate()?;
    if ts.is_empty() || n_samples == 0 {
        return Err(Error::Parameter("need at least one radius and one sample".into()));
    }
    let d = config.d;
    let vd = vertical(d);
    let spread = (config.k as f64 - config.j as f64).exp2();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut failures = 0;
    let mut worst = f64::INFINITY;
    let mut center: Option<f64> = None;
    match config.case {
        KnappCase::SmallK => {
            let kn = knapp_small_k(*config)?;
            let mut max_off: f64 = 0.0;
            for i in 0..n_samples {
                let t = ts[i % ts.len()];
                let x = kn.piece(t, Branch::Both).sample(&mut rng);
                let w = sample_ball(d - 1, spread, &mut rng);
                let y = land(d, &x, t, &theta(d, &x, config.a, w));
                let m = kn.target.margin(&y);
                worst = worst.min(m);
                failures += usize::from(m < 0.0);
                let y0 = land(d, &x, t, &theta(d, &x, config.a, [0.0, 0.0]));
                let mut off = y0;
                off[vd] -= config.a;
                max_off = max_off.max(norm(&off, d) / config.delta());
            }
            center = Some(max_off);
        }
        KnappCase::LargeK => {
            let kn = knapp_large_k(*config)?;
            for i in 0..n_samples {
                let t = ts[i % ts.len()];
                let x = kn.piece(t).sample(&mut rng);
                let wp = sample_ball(d - 1, config.eps * spread, &mut rng);
                let wd = (1.0 - wp[0] * wp[0] - wp[1] * wp[1]).sqrt();
                let y = land(d, &x, t, &embed(d, wp, wd));
                let m = kn.target.margin(&y);
                worst = worst.min(m);
                failures += usize::from(m < 0.0);
            }
        }
    }
    Ok(InclusionReport {
        config: *config,
        ts: ts.to_vec(),
        samples: n_samples,
        failures,
        worst_margin: worst,
        center_offset: center,
    })
}

/// `θ_{x,w'} = (−x' + w', a − x_d) / |(−x' + w', a − x_d)|`.
fn theta(d: usize, x: &Point, a: f64, w: [f64; 2]) -> Point {
    let vd = vertical(d);
    let mut v = [0.0; 3];
    for i in 0..d - 1 {
        v[i] = -x[i] + w[i];
    }
    v[vd] = a - x[vd];
    let n = norm(&v, d);
    [v[0] / n, v[1] / n, v[2] / n]
}

fn land(d: usize, x: &Point, t: f64, w: &Point) -> Point {
    let mut y = [0.0; 3];
    for i in 0..d {
        y[i] = x[i] + t * w[i];
    }
    y
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sphere_lab::functions::{Indicator, SpatialFunction};

    fn small(d: usize) -> SmallK {
        knapp_small_k(KnappConfig::new(d, 12, 5, 1.5, SMALL_K_EPS).unwrap()).unwrap()
    }

    #[test]
    fn config_validation() {
        assert_eq!(KnappConfig::new(2, 12, 6, 1.5, 0.01).unwrap().case, KnappCase::SmallK);
        assert_eq!(KnappConfig::new(2, 12, 7, 1.5, 0.01).unwrap().case, KnappCase::LargeK);
        assert!(KnappConfig::new(2, 12, 9, 1.5, 0.05).is_err());
        assert!(KnappConfig::new(2, 12, 0, 1.5, 0.01).is_err());
        assert!(KnappConfig::new(2, 12, 13, 1.5, 0.01).is_err());
        assert!(KnappConfig::new(2, 12, 5, 2.5, 0.01).is_err());
        assert!(KnappConfig::new(4, 12, 5, 1.5, 0.01).is_err());
        let mut c = KnappConfig::new(2, 12, 5, 1.5, 0.01).unwrap();
        c.case = KnappCase::LargeK;
        assert!(matches!(c.validate(), Err(Error::Config(_))));
        let large = KnappConfig::new(2, 12, 9, 1.5, 0.01).unwrap();
        assert!(matches!(knapp_small_k(large), Err(Error::Config(_))));
    }

    #[test]
    fn knapp_box_volume() {
        for d in [2, 3] {
            let kn = small(d);
            let c = kn.config;
            let h = c.delta() / c.eps;
            let r = (c.k as f64 - c.j as f64).exp2() / c.eps;
            let ball = if d == 2 { 2.0 * r } else { std::f64::consts::PI * r * r };
            assert!((kn.target.weighted_volume(0.0).unwrap() - 2.0 * h * ball).abs() < 1e-15);
        }
    }

    #[test]
    fn on_axis_point_is_in_u() {
        let kn = small(3);
        let piece = kn.piece(1.5, Branch::Both);
        assert!(piece.contains(&[0.0, 0.0, 3.0]));
        assert!(piece.contains(&[0.0, 0.0, 0.0]));
        assert!(!kn.piece(1.5, Branch::Lower).contains(&[0.0, 0.0, 3.0]));
    }

    #[test]
    fn u_volume_matches_sampling() {
        for d in [2, 3] {
            let piece = UPiece { d, a: 1.5, t: 1.4, half_width: 0.05, max_horizontal: 0.5, branch: Branch::Lower };
            // hit-or-miss over the bounding box
            let mut rng = ChaCha8Rng::seed_from_u64(1);
            let (lo, hi) = (1.5 - 1.45, 1.5 - (1.35f64.powi(2) - 0.25).sqrt());
            let n = 400_000;
            let mut hits = 0;
            for _ in 0..n {
                let xp = [rng.gen_range(-0.5..0.5), if d == 3 { rng.gen_range(-0.5..0.5) } else { 0.0 }];
                let xd = rng.gen_range(lo..hi);
                hits += usize::from(piece.contains(&embed(d, xp, xd)));
            }
            // horizontal box has unit measure in both dimensions
            let box_vol = hi - lo;
            let est = box_vol * hits as f64 / n as f64;
            assert!((est / piece.volume() - 1.0).abs() < 0.01, "d = {d}: {est} vs {}", piece.volume());
            // samples stay inside
            for _ in 0..1000 {
                assert!(piece.contains(&piece.sample(&mut rng)));
            }
        }
    }

    #[test]
    fn q_piece_sampling_and_volume() {
        for d in [2, 3] {
            let q = QPiece { d, a: 1.5, t: 1.45, half_height: 0.01, r_in: 0.1, r_out: 0.2 };
            let mut rng = ChaCha8Rng::seed_from_u64(3);
            for _ in 0..1000 {
                assert!(q.contains(&q.sample(&mut rng)));
            }
            let want = if d == 2 { 0.02 * 0.2 } else { 0.02 * std::f64::consts::PI * 0.03 };
            assert!((q.volume() - want).abs() < 1e-15);
        }
    }

    #[test]
    fn scaled_pieces() {
        let p = Piece::new(PieceShape::U(small(2).piece(1.5, Branch::Lower)));
        let s = p.scaled(2.0);
        assert!((s.volume() - 4.0 * p.volume()).abs() < 1e-18);
        let mut r1 = ChaCha8Rng::seed_from_u64(9);
        let mut r2 = ChaCha8Rng::seed_from_u64(9);
        let (x, y) = (p.sample(&mut r1), s.sample(&mut r2));
        assert_eq!([2.0 * x[0], 2.0 * x[1]], [y[0], y[1]]);
        assert!(s.contains(&y));
    }

    #[test]
    fn nets_are_separated_and_maximal() {
        let radii: Vec<f64> = (0..1000).map(|i| 1.0 + i as f64 / 1000.0).collect();
        let net = separated_net(&radii, 0.01);
        assert!(net.windows(2).all(|w| w[1] - w[0] >= 0.01));
        for r in &radii {
            assert!(net.iter().any(|n| (n - r).abs() < 0.01));
        }
    }

    #[test]
    fn pieces_over_a_net_are_disjoint() {
        let kn = small(2);
        let radii: Vec<f64> = (0..512).map(|i| 1.5 + i as f64 * 2f64.powi(-14)).collect();
        let net = separated_net(&radii, kn.config.delta());
        let pieces: Vec<Piece> = net.iter().map(|&t| Piece::new(PieceShape::U(kn.piece(t, Branch::Both)))).collect();
        let rep = check_disjoint(&pieces, 50, 1);
        assert!(rep.passed(), "{rep:?}");
        // radii closer than 2ε2^{-j} do overlap
        let close = [1.5, 1.5 + kn.config.eps * kn.config.delta()];
        let pieces: Vec<Piece> = close.iter().map(|&t| Piece::new(PieceShape::U(kn.piece(t, Branch::Both)))).collect();
        assert_eq!(check_disjoint(&pieces, 0, 1).overlaps, 1);
    }

    #[test]
    fn inclusion_holds_at_desk_scale() {
        for d in [2, 3] {
            let c = KnappConfig::new(d, 12, 5, 1.5, SMALL_K_EPS).unwrap();
            let rep = geometry_inclusion_test(&c, &default_test_radii(&c), 5000, 7).unwrap();
            assert!(rep.passed(), "{rep:?}");
            let c = KnappConfig::new(d, 12, 9, 1.5, LARGE_K_EPS).unwrap();
            let rep = geometry_inclusion_test(&c, &default_test_radii(&c), 5000, 7).unwrap();
            assert!(rep.passed(), "{rep:?}");
        }
    }

    #[test]
    fn inclusion_fails_for_large_eps() {
        // ε = 1 shrinks Q(a) below the landing spread
        let c = KnappConfig::new(2, 12, 5, 1.5, 1.0).unwrap();
        let rep = geometry_inclusion_test(&c, &[1.5], 5000, 7).unwrap();
        assert!(rep.failures > 0);
    }

    #[test]
    fn targets_are_indicators() {
        let kn = small(2);
        assert_eq!(kn.target.eval(&[0.0, 1.5, 0.0]), 1.0);
        assert_eq!(kn.target.eval(&[0.0, 1.6, 0.0]), 0.0);
    }
}
