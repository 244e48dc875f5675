//! Seeded Monte Carlo estimators for Gaussian points.
//!
//! # Streams
//!
//! A run with `workers = W` draws from `W` independent streams. Stream `w` is
//! ChaCha8 keyed by `seed` (expanded to 256 bits by `SeedableRng::seed_from_u64`)
//! with stream id `w`. Uniforms take the top 53 bits of each 64-bit output;
//! normals come from the Marsaglia polar method, which caches the second
//! variate of each accepted pair. Worker `w` handles `samples / W` draws, the
//! first `samples % W` workers one extra, and partial results are merged in
//! worker order. The output for a given `(seed, samples, workers)` is
//! therefore bit-identical across runs and thread schedules; changing `W`
//! changes the stream assignment and hence the exact values.

use std::f64::consts::PI;

use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

use crate::analytic::{median_density_1d, median_reference_density_1d};
use crate::error::{Error, Result};
use crate::geometry::{
    hull4_classify, orient2d, shoelace, sides_iter, tetra_captures, triangle_captures, HullClass,
    Point2, Point3,
};
use crate::stats::{ChiSquare, CoMoments, Histogram, Merge, Moments};

pub const DEFAULT_SEED: u64 = 20_160_119;
pub const DEFAULT_SAMPLES: u64 = 1_000_000;
/// Outer triangles for [`estimate_content_variance_2d`].
pub const DEFAULT_VARIANCE_TRIANGLES: u64 = 10_000;
/// Inner probe points per triangle for [`estimate_content_variance_2d`].
pub const DEFAULT_VARIANCE_PROBES: u32 = 1_000;

/// Histogram layout of [`estimate_median_stats_1d`].
pub const MEDIAN_HIST_BINS: usize = 101;
pub const MEDIAN_HIST_RANGE: (f64, f64) = (-4.0, 4.0);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct RunConfig {
    pub seed: u64,
    pub samples: u64,
    pub workers: usize,
}

impl RunConfig {
    pub fn new(seed: u64, samples: u64, workers: usize) -> Result<Self> {
        let cfg = Self {
            seed,
            samples,
            workers,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    fn validate(&self) -> Result<()> {
        if self.samples == 0 {
            return Err(Error::Config("samples must be at least 1".into()));
        }
        if self.workers == 0 {
            return Err(Error::Config("workers must be at least 1".into()));
        }
        Ok(())
    }
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            seed: DEFAULT_SEED,
            samples: DEFAULT_SAMPLES,
            workers: 1,
        }
    }
}

/// A Monte Carlo estimate. `n` counts the samples the statistic is built
/// from, `n_total` the raw draws; they differ for conditioned estimators.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate {
    pub mean: f64,
    pub stderr: f64,
    pub n: u64,
    pub n_total: u64,
}

impl Estimate {
    /// Proportion `hits / n` with stderr `√(p̂(1 - p̂)/n)`.
    pub fn binomial(hits: u64, n: u64, n_total: u64) -> Self {
        let p = if n == 0 { 0.0 } else { hits as f64 / n as f64 };
        let stderr = if n == 0 {
            0.0
        } else {
            (p * (1.0 - p) / n as f64).sqrt()
        };
        Self {
            mean: p,
            stderr,
            n,
            n_total,
        }
    }

    fn of_mean(m: &Moments, n_total: u64) -> Self {
        Self {
            mean: m.mean(),
            stderr: m.stderr_of_mean(),
            n: m.count(),
            n_total,
        }
    }

    fn of_variance(m: &Moments, n_total: u64) -> Self {
        Self {
            mean: m.variance(),
            stderr: m.stderr_of_variance(),
            n: m.count(),
            n_total,
        }
    }

    /// `(mean - target) / stderr`; infinite when stderr is zero and the
    /// mean misses the target.
    pub fn z_score(&self, target: f64) -> f64 {
        let d = self.mean - target;
        if d == 0.0 {
            0.0
        } else {
            d / self.stderr
        }
    }

    /// Whether the target lies within `k` standard errors.
    pub fn within(&self, target: f64, k: f64) -> bool {
        self.z_score(target).abs() <= k
    }

    /// Accepted fraction `n / n_total` as a binomial estimate.
    pub fn acceptance(&self) -> Estimate {
        Estimate::binomial(self.n, self.n_total, self.n_total)
    }
}

/// One reproducible stream of standard normal variates.
#[derive(Debug, Clone)]
pub struct GaussianStream {
    rng: ChaCha8Rng,
    spare: Option<f64>,
}

impl GaussianStream {
    pub fn new(seed: u64, stream: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(stream);
        Self { rng, spare: None }
    }

    /// Uniform on `[0, 1)` with 53 random bits.
    pub fn uniform(&mut self) -> f64 {
        (self.rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Standard normal by the Marsaglia polar method.
    pub fn normal(&mut self) -> f64 {
        if let Some(z) = self.spare.take() {
            return z;
        }
        loop {
            let u = 2.0 * self.uniform() - 1.0;
            let v = 2.0 * self.uniform() - 1.0;
            let s = u * u + v * v;
            if s > 0.0 && s < 1.0 {
                let f = (-2.0 * s.ln() / s).sqrt();
                self.spare = Some(v * f);
                return u * f;
            }
        }
    }

    pub fn point2(&mut self) -> Point2 {
        let x = self.normal();
        Point2::new(x, self.normal())
    }

    pub fn point3(&mut self) -> Point3 {
        let x = self.normal();
        let y = self.normal();
        Point3::new(x, y, self.normal())
    }
}

/// A Gaussian point in one, two or three dimensions.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum GaussianPoint {
    One(f64),
    Two(Point2),
    Three(Point3),
}

/// Draws a point with i.i.d. standard normal coordinates.
pub fn sample_gaussian(dim: usize, stream: &mut GaussianStream) -> Result<GaussianPoint> {
    match dim {
        1 => Ok(GaussianPoint::One(stream.normal())),
        2 => Ok(GaussianPoint::Two(stream.point2())),
        3 => Ok(GaussianPoint::Three(stream.point3())),
        _ => Err(Error::Config(format!("dimension must be 1, 2 or 3, got {dim}"))),
    }
}

/// Runs `work(stream, count)` on every worker and merges the partial results
/// in worker order.
fn run_workers<A, F>(cfg: &RunConfig, work: F) -> Result<A>
where
    A: Merge + Send,
    F: Fn(&mut GaussianStream, u64) -> A + Sync,
{
    cfg.validate()?;
    let w = cfg.workers as u64;
    let share = |i: u64| cfg.samples / w + u64::from(i < cfg.samples % w);
    let job = |i: u64| {
        let mut stream = GaussianStream::new(cfg.seed, i);
        work(&mut stream, share(i))
    };
    let parts: Vec<A> = if cfg.workers == 1 {
        vec![job(0)]
    } else {
        std::thread::scope(|s| {
            let handles: Vec<_> = (0..w).map(|i| s.spawn(move || job(i))).collect();
            handles
                .into_iter()
                .map(|h| h.join().expect("worker panicked"))
                .collect()
        })
    };
    let mut parts = parts.into_iter();
    let mut acc = parts.next().expect("at least one worker");
    for p in parts {
        acc.merge(p);
    }
    Ok(acc)
}

#[derive(Debug, Clone, Copy, Default)]
struct Counter {
    hits: u64,
    n: u64,
}

impl Merge for Counter {
    fn merge(&mut self, o: Self) {
        self.hits += o.hits;
        self.n += o.n;
    }
}

fn count_hits<F>(cfg: &RunConfig, trial: F) -> Result<Estimate>
where
    F: Fn(&mut GaussianStream) -> bool + Sync,
{
    let c = run_workers(cfg, |s, count| {
        let mut c = Counter::default();
        for _ in 0..count {
            c.hits += u64::from(trial(s));
            c.n += 1;
        }
        c
    })?;
    Ok(Estimate::binomial(c.hits, c.n, c.n))
}

/// Fraction of Gaussian triangles capturing the location `(ξ, η)`.
pub fn estimate_capture(xi: f64, eta: f64, cfg: &RunConfig) -> Result<Estimate> {
    if !(xi.is_finite() && eta.is_finite()) {
        return Err(Error::domain("estimate_capture", "location must be finite"));
    }
    let x = Point2::new(xi, eta);
    count_hits(cfg, |s| {
        let (a, b, c) = (s.point2(), s.point2(), s.point2());
        triangle_captures(a, b, c, x)
    })
}

/// Expected probability content of a Gaussian triangle (`dim = 2`) or
/// tetrahedron (`dim = 3`): the chance that an independent Gaussian point
/// falls inside.
pub fn estimate_expected_content(dim: usize, cfg: &RunConfig) -> Result<Estimate> {
    match dim {
        2 => count_hits(cfg, |s| {
            let (a, b, c, x) = (s.point2(), s.point2(), s.point2(), s.point2());
            triangle_captures(a, b, c, x)
        }),
        3 => count_hits(cfg, |s| {
            let (a, b, c, d, x) = (s.point3(), s.point3(), s.point3(), s.point3(), s.point3());
            tetra_captures(a, b, c, d, x)
        }),
        _ => Err(Error::Config(format!("content dimension must be 2 or 3, got {dim}"))),
    }
}

/// Mean and variance of the probability content of Gaussian triangles.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ContentVarianceReport {
    pub mean_content: Estimate,
    /// Between-triangle variance of the content, corrected for probe noise;
    /// stderr by the jackknife.
    pub variance: Estimate,
    pub probes: u32,
}

/// Estimates the variance of the probability content over Gaussian
/// triangles, one triangle per sample, with `probes` inner Gaussian points
/// per triangle.
///
/// With `k` of `m` probes inside, `p̂ = k/m` has `E[p̂(1-p̂)] = p(1-p)(m-1)/m`,
/// so `Var(p̂) = Var(p) + E[p(1-p)]/m` and the estimator is
/// `s²(p̂) - mean(p̂(1-p̂)) / (m - 1)`.
pub fn estimate_content_variance_2d(cfg: &RunConfig, probes: u32) -> Result<ContentVarianceReport> {
    if probes < 2 {
        return Err(Error::Config("at least two probe points per triangle are needed".into()));
    }
    let hits: Vec<u32> = run_workers(cfg, |s, count| {
        let mut out = ProbeHits(Vec::with_capacity(count as usize));
        for _ in 0..count {
            let (a, b, c) = (s.point2(), s.point2(), s.point2());
            let k = (0..probes).filter(|_| triangle_captures(a, b, c, s.point2())).count();
            out.0.push(k as u32);
        }
        out
    })?
    .0;

    let m = probes as f64;
    let n = hits.len() as f64;
    let p: Vec<f64> = hits.iter().map(|&k| k as f64 / m).collect();
    let mut moments = Moments::default();
    p.iter().for_each(|&x| moments.push(x));

    let s1: f64 = p.iter().sum();
    let s2: f64 = p.iter().map(|x| x * x).sum();
    let sq: f64 = p.iter().map(|x| x * (1.0 - x)).sum();
    let corrected = |s1: f64, s2: f64, sq: f64, n: f64| {
        let mean = s1 / n;
        let var = (s2 - n * mean * mean) / (n - 1.0);
        var - sq / n / (m - 1.0)
    };
    let variance = corrected(s1, s2, sq, n);
    let stderr = if hits.len() > 2 {
        let loo: Vec<f64> = p
            .iter()
            .map(|&x| corrected(s1 - x, s2 - x * x, sq - x * (1.0 - x), n - 1.0))
            .collect();
        let mean_loo = loo.iter().sum::<f64>() / n;
        ((n - 1.0) / n * loo.iter().map(|v| (v - mean_loo).powi(2)).sum::<f64>()).sqrt()
    } else {
        0.0
    };
    let total = hits.len() as u64;
    Ok(ContentVarianceReport {
        mean_content: Estimate::of_mean(&moments, total),
        variance: Estimate {
            mean: variance,
            stderr,
            n: total,
            n_total: total,
        },
        probes,
    })
}

struct ProbeHits(Vec<u32>);

impl Merge for ProbeHits {
    fn merge(&mut self, o: Self) {
        self.0.extend(o.0);
    }
}

/// Median of three standard normals.
#[derive(Debug, Clone, PartialEq)]
pub struct MedianReport {
    pub variance: Estimate,
    pub mean: Estimate,
    /// 101 bins over `[-4, 4)`.
    pub histogram: Histogram,
    /// Fit of the histogram to the exact median density.
    pub fit_true: ChiSquare,
    /// Fit to the normal density with the same variance.
    pub fit_reference: ChiSquare,
}

#[derive(Debug, Clone)]
struct MedianAcc {
    moments: Moments,
    hist: Histogram,
}

impl Merge for MedianAcc {
    fn merge(&mut self, o: Self) {
        self.moments.merge(o.moments);
        self.hist.merge(o.hist);
    }
}

fn median3(a: f64, b: f64, c: f64) -> f64 {
    a.max(b).min(a.min(b).max(c))
}

pub fn estimate_median_stats_1d(cfg: &RunConfig) -> Result<MedianReport> {
    let (lo, hi) = MEDIAN_HIST_RANGE;
    let template = Histogram::new(lo, hi, MEDIAN_HIST_BINS)?;
    let acc = run_workers(cfg, |s, count| {
        let mut acc = MedianAcc {
            moments: Moments::default(),
            hist: template.clone(),
        };
        for _ in 0..count {
            let m = median3(s.normal(), s.normal(), s.normal());
            acc.moments.push(m);
            acc.hist.push(m);
        }
        acc
    })?;
    let n = acc.moments.count();
    Ok(MedianReport {
        variance: Estimate::of_variance(&acc.moments, n),
        mean: Estimate::of_mean(&acc.moments, n),
        fit_true: acc.hist.chi_square(median_density_1d)?,
        fit_reference: acc.hist.chi_square(median_reference_density_1d)?,
        histogram: acc.hist,
    })
}

/// The inner point of four Gaussian points whose hull is a triangle.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InnerPointReport {
    /// Variance of the inner point's first coordinate.
    pub variance: Estimate,
    pub mean: Estimate,
    /// Fraction of draws with a triangular hull.
    pub acceptance: Estimate,
}

/// Draws `cfg.samples` quadruples; whenever one point lies inside the
/// triangle of the others, records that point's first coordinate.
pub fn estimate_inner_point_variance_2d(cfg: &RunConfig) -> Result<InnerPointReport> {
    let m = run_workers(cfg, |s, count| {
        let mut m = Moments::default();
        for _ in 0..count {
            let pts = [s.point2(), s.point2(), s.point2(), s.point2()];
            if let Ok(HullClass::DegenerateTriangle { inner, .. }) =
                hull4_classify(pts[0], pts[1], pts[2], pts[3])
            {
                m.push(pts[inner].x);
            }
        }
        m
    })?;
    let total = cfg.samples;
    Ok(InnerPointReport {
        variance: Estimate::of_variance(&m, total),
        mean: Estimate::of_mean(&m, total),
        acceptance: Estimate::binomial(m.count(), total, total),
    })
}

/// Hull statistics of four Gaussian points.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadStatsReport {
    /// Probability that all four points are hull vertices.
    pub p_quadrilateral: Estimate,
    pub area: Estimate,
    pub perimeter: Estimate,
    /// Mean hull side given a triangular hull.
    pub side_mean_tri: Estimate,
    pub side_sq_tri: Estimate,
    /// Mean hull side given a quadrilateral hull.
    pub side_mean_quad: Estimate,
    pub side_sq_quad: Estimate,
    /// Pearson correlation of sides sharing a vertex (quadrilaterals only).
    pub corr_adjacent: Estimate,
    /// Pearson correlation of opposite sides (quadrilaterals only).
    pub corr_disjoint: Estimate,
    /// `E(side)² / E(side²)` for triangular hulls.
    pub rayleigh_tri: Estimate,
    /// `E(side)² / E(side²)` for quadrilateral hulls.
    pub rayleigh_quad: Estimate,
}

#[derive(Debug, Clone, Default)]
struct QuadAcc {
    draws: u64,
    quads: u64,
    area: Moments,
    perimeter: Moments,
    /// Per-sample (mean side, mean squared side).
    sides_tri: CoMoments,
    sides_quad: CoMoments,
    adjacent: CoMoments,
    disjoint: CoMoments,
}

impl Merge for QuadAcc {
    fn merge(&mut self, o: Self) {
        self.draws += o.draws;
        self.quads += o.quads;
        self.area.merge(o.area);
        self.perimeter.merge(o.perimeter);
        self.sides_tri.merge(o.sides_tri);
        self.sides_quad.merge(o.sides_quad);
        self.adjacent.merge(o.adjacent);
        self.disjoint.merge(o.disjoint);
    }
}

/// Delta-method estimate of `E(X)² / E(Y)` from paired per-sample means.
fn ratio_estimate(c: &CoMoments, n_total: u64) -> Estimate {
    let n = c.count();
    let (m1, m2) = (c.mean_x(), c.mean_y());
    let ratio = m1 * m1 / m2;
    let stderr = if n < 2 {
        0.0
    } else {
        let (gx, gy) = (2.0 * m1 / m2, -m1 * m1 / (m2 * m2));
        let var = gx * gx * c.variance_x() + gy * gy * c.variance_y() + 2.0 * gx * gy * c.covariance();
        (var.max(0.0) / n as f64).sqrt()
    };
    Estimate {
        mean: ratio,
        stderr,
        n,
        n_total,
    }
}

fn side_estimates(c: &CoMoments, n_total: u64) -> (Estimate, Estimate) {
    let n = c.count();
    let se = |v: f64| if n < 2 { 0.0 } else { (v / n as f64).sqrt() };
    (
        Estimate {
            mean: c.mean_x(),
            stderr: se(c.variance_x()),
            n,
            n_total,
        },
        Estimate {
            mean: c.mean_y(),
            stderr: se(c.variance_y()),
            n,
            n_total,
        },
    )
}

/// Approximate stderr `(1 - r²)/√(samples - 1)`, counting whole hulls rather
/// than pooled pairs since pairs within one hull are dependent.
fn correlation_estimate(c: &CoMoments, samples: u64, n_total: u64) -> Estimate {
    let r = c.correlation();
    let stderr = if samples < 2 {
        0.0
    } else {
        (1.0 - r * r) / ((samples - 1) as f64).sqrt()
    };
    Estimate {
        mean: r,
        stderr,
        n: samples,
        n_total,
    }
}

/// One pass over `cfg.samples` valid quadruples (collinear draws are
/// redrawn and counted in `n_total`).
///
/// Side moments are conditioned on the hull's vertex count; each hull
/// contributes the mean of its sides and of their squares, so the stderr
/// accounts for sides of one hull being dependent. Correlations pool, per
/// quadrilateral with sides `s0..s3` in hull order, the four adjacent pairs
/// `(s_i, s_{i+1})` and the two opposite pairs `(s_i, s_{i+2})`.
pub fn estimate_quad_stats(cfg: &RunConfig) -> Result<QuadStatsReport> {
    let acc = run_workers(cfg, |s, count| {
        let mut acc = QuadAcc::default();
        let mut done = 0;
        while done < count {
            acc.draws += 1;
            let pts = [s.point2(), s.point2(), s.point2(), s.point2()];
            let Ok(h) = hull4_classify(pts[0], pts[1], pts[2], pts[3]) else {
                continue;
            };
            done += 1;
            let order = h.order();
            let mut sides = [0.0; 4];
            for (slot, len) in sides.iter_mut().zip(sides_iter(order, &pts)) {
                *slot = len;
            }
            let sides = &sides[..order.len()];
            let k = sides.len() as f64;
            let mean = sides.iter().sum::<f64>() / k;
            let mean_sq = sides.iter().map(|x| x * x).sum::<f64>() / k;
            acc.area.push(shoelace(order, &pts));
            acc.perimeter.push(mean * k);
            if h.is_quadrilateral() {
                acc.quads += 1;
                acc.sides_quad.push(mean, mean_sq);
                for i in 0..4 {
                    acc.adjacent.push(sides[i], sides[(i + 1) % 4]);
                }
                for i in 0..2 {
                    acc.disjoint.push(sides[i], sides[i + 2]);
                }
            } else {
                acc.sides_tri.push(mean, mean_sq);
            }
        }
        acc
    })?;

    let valid = acc.area.count();
    let (side_mean_tri, side_sq_tri) = side_estimates(&acc.sides_tri, valid);
    let (side_mean_quad, side_sq_quad) = side_estimates(&acc.sides_quad, valid);
    Ok(QuadStatsReport {
        p_quadrilateral: Estimate::binomial(acc.quads, valid, acc.draws),
        area: Estimate::of_mean(&acc.area, acc.draws),
        perimeter: Estimate::of_mean(&acc.perimeter, acc.draws),
        side_mean_tri,
        side_sq_tri,
        side_mean_quad,
        side_sq_quad,
        corr_adjacent: correlation_estimate(&acc.adjacent, acc.quads, valid),
        corr_disjoint: correlation_estimate(&acc.disjoint, acc.quads, valid),
        rayleigh_tri: ratio_estimate(&acc.sides_tri, valid),
        rayleigh_quad: ratio_estimate(&acc.sides_quad, valid),
    })
}

/// Ratios `E(side)² / E(side²)` under each conditioning. A Rayleigh-
/// distributed length gives exactly `π/4`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RayleighCheck {
    pub ratio_tri: Estimate,
    pub ratio_quad: Estimate,
}

impl RayleighCheck {
    pub const RAYLEIGH_RATIO: f64 = PI / 4.0;
}

pub fn non_rayleigh_check(report: &QuadStatsReport) -> RayleighCheck {
    RayleighCheck {
        ratio_tri: report.rayleigh_tri,
        ratio_quad: report.rayleigh_quad,
    }
}

/// Area and perimeter of the triangle on three Gaussian points.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TriangleReport {
    pub area: Estimate,
    pub perimeter: Estimate,
}

#[derive(Debug, Clone, Copy, Default)]
struct TriangleAcc {
    area: Moments,
    perimeter: Moments,
}

impl Merge for TriangleAcc {
    fn merge(&mut self, o: Self) {
        self.area.merge(o.area);
        self.perimeter.merge(o.perimeter);
    }
}

pub fn estimate_triangle_stats(cfg: &RunConfig) -> Result<TriangleReport> {
    let acc = run_workers(cfg, |s, count| {
        let mut acc = TriangleAcc::default();
        for _ in 0..count {
            let (a, b, c) = (s.point2(), s.point2(), s.point2());
            acc.area.push(0.5 * orient2d(a, b, c).abs());
            acc.perimeter.push(a.distance(&b) + b.distance(&c) + c.distance(&a));
        }
        acc
    })?;
    let n = acc.area.count();
    Ok(TriangleReport {
        area: Estimate::of_mean(&acc.area, n),
        perimeter: Estimate::of_mean(&acc.perimeter, n),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analytic::constants;

    fn cfg(seed: u64, samples: u64, workers: usize) -> RunConfig {
        RunConfig::new(seed, samples, workers).unwrap()
    }

    #[test]
    fn config_validation() {
        assert!(RunConfig::new(1, 0, 1).is_err());
        assert!(RunConfig::new(1, 10, 0).is_err());
        let bad = RunConfig {
            seed: 1,
            samples: 0,
            workers: 1,
        };
        assert!(estimate_capture(0.0, 0.0, &bad).is_err());
    }

    #[test]
    fn stream_moments() {
        let mut s = GaussianStream::new(DEFAULT_SEED, 0);
        let n = 1_000_000;
        let mut m = [Moments::default(), Moments::default()];
        for _ in 0..n {
            let p = s.point2();
            m[0].push(p.x);
            m[1].push(p.y);
        }
        for c in &m {
            assert!(c.mean().abs() < 4.0 / (n as f64).sqrt(), "mean {}", c.mean());
            assert!((c.variance() - 1.0).abs() < 0.01, "var {}", c.variance());
        }
    }

    #[test]
    fn streams_are_reproducible_and_distinct() {
        let draw = |seed, stream| {
            let mut s = GaussianStream::new(seed, stream);
            (0..10).map(|_| s.point2()).collect::<Vec<_>>()
        };
        assert_eq!(draw(7, 0), draw(7, 0));
        assert_ne!(draw(7, 0), draw(7, 1));
        assert_ne!(draw(7, 0), draw(8, 0));
    }

    #[test]
    fn uniform_range() {
        let mut s = GaussianStream::new(3, 0);
        for _ in 0..10_000 {
            let u = s.uniform();
            assert!((0.0..1.0).contains(&u));
        }
    }

    #[test]
    fn sample_gaussian_dimensions() {
        let mut s = GaussianStream::new(1, 0);
        assert!(matches!(sample_gaussian(1, &mut s), Ok(GaussianPoint::One(_))));
        assert!(matches!(sample_gaussian(2, &mut s), Ok(GaussianPoint::Two(_))));
        assert!(matches!(sample_gaussian(3, &mut s), Ok(GaussianPoint::Three(_))));
        assert!(sample_gaussian(4, &mut s).is_err());
    }

    #[test]
    fn work_split_covers_every_sample() {
        for workers in [1, 2, 3, 7] {
            let c = cfg(5, 1001, workers);
            let e = estimate_capture(0.0, 0.0, &c).unwrap();
            assert_eq!(e.n, 1001);
        }
    }

    #[test]
    fn determinism_across_runs() {
        let c = cfg(11, 20_000, 3);
        assert_eq!(estimate_quad_stats(&c).unwrap(), estimate_quad_stats(&c).unwrap());
        assert_eq!(estimate_capture(0.3, 0.1, &c).unwrap(), estimate_capture(0.3, 0.1, &c).unwrap());
        let a = estimate_median_stats_1d(&c).unwrap();
        let b = estimate_median_stats_1d(&c).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn capture_depends_on_radius_only() {
        let c = cfg(21, 400_000, 2);
        let a = estimate_capture(1.0, 0.0, &c).unwrap();
        let b = estimate_capture(0.6, 0.8, &c).unwrap();
        let se = a.stderr.hypot(b.stderr);
        assert!((a.mean - b.mean).abs() < 3.0 * se);
    }

    #[test]
    fn coupling_identities() {
        let k = constants();
        let c = cfg(31, 300_000, 2);
        let content = estimate_expected_content(2, &c).unwrap();
        let quad = estimate_quad_stats(&c).unwrap();
        let inner = estimate_inner_point_variance_2d(&c).unwrap();

        let via_theta = (1.0 - quad.p_quadrilateral.mean) / 4.0;
        let se = content.stderr.hypot(quad.p_quadrilateral.stderr / 4.0);
        assert!((content.mean - via_theta).abs() < 3.0 * se);

        let se = inner.acceptance.stderr.hypot(quad.p_quadrilateral.stderr);
        assert!((inner.acceptance.mean - (1.0 - quad.p_quadrilateral.mean)).abs() < 3.0 * se);
        assert!(inner.acceptance.within(k.one_minus_theta, 3.0));
        assert!(inner.mean.within(0.0, 3.0));
    }

    #[test]
    fn perimeter_decomposes_over_hull_types() {
        // E(perimeter) = P(4) · 4 E(side | 4) + P(3) · 3 E(side | 3).
        let q = estimate_quad_stats(&cfg(41, 200_000, 1)).unwrap();
        let p4 = q.p_quadrilateral.mean;
        let recombined = p4 * 4.0 * q.side_mean_quad.mean + (1.0 - p4) * 3.0 * q.side_mean_tri.mean;
        assert!((recombined - q.perimeter.mean).abs() < 1e-9 * q.perimeter.mean);
        assert!(q.perimeter.within(constants().expected_perimeter_quad, 4.0));
    }

    #[test]
    fn correlations_are_bounded() {
        let q = estimate_quad_stats(&cfg(51, 50_000, 1)).unwrap();
        for r in [q.corr_adjacent.mean, q.corr_disjoint.mean] {
            assert!(r > -1.0 && r < 1.0);
        }
        assert!((0.0..=1.0).contains(&q.p_quadrilateral.mean));
        assert!(q.p_quadrilateral.n_total >= q.p_quadrilateral.n);
    }

    #[test]
    fn content_variance_sanity() {
        let r = estimate_content_variance_2d(&cfg(61, 2_000, 1), 200).unwrap();
        assert!(r.variance.mean >= 0.0);
        assert!(r.variance.stderr > 0.0);
        assert!(r.mean_content.within(constants().expected_content_2d, 3.0));
        assert!(estimate_content_variance_2d(&cfg(61, 10, 1), 1).is_err());
    }

    #[test]
    fn median3_picks_middle() {
        for (a, b, c) in [(1., 2., 3.), (3., 1., 2.), (2., 3., 1.), (-1., -1., 5.)] {
            let mut v = [a, b, c];
            v.sort_by(f64::total_cmp);
            assert_eq!(median3(a, b, c), v[1]);
        }
    }

    #[test]
    fn triangle_stats_small_run() {
        let k = constants();
        let t = estimate_triangle_stats(&cfg(71, 200_000, 1)).unwrap();
        assert!(t.area.within(k.expected_area_triangle, 4.0));
        assert!(t.perimeter.within(k.expected_perimeter_triangle, 4.0));
    }

    #[test]
    fn binomial_estimate() {
        let e = Estimate::binomial(25, 100, 120);
        assert_eq!(e.mean, 0.25);
        assert!((e.stderr - (0.25f64 * 0.75 / 100.0).sqrt()).abs() < 1e-15);
        assert!((e.acceptance().mean - 100.0 / 120.0).abs() < 1e-15);
        assert_eq!(Estimate::binomial(0, 0, 0).stderr, 0.0);
    }
}
