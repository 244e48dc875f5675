//! Mergeable accumulators and the histogram goodness-of-fit test.
//!
//! Every accumulator supports [`Merge`], so per-worker partial results can be
//! combined in a fixed order.

use statrs::distribution::{ChiSquared, ContinuousCDF};

use crate::error::{Error, Result};
use crate::quadrature;
use crate::special_fn::AccuracySpec;

pub trait Merge {
    fn merge(&mut self, other: Self);
}

/// Running mean and central moments up to the fourth (Pébay's one-pass
/// update and pairwise combination).
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct Moments {
    n: u64,
    mean: f64,
    m2: f64,
    m3: f64,
    m4: f64,
}

impl Moments {
    pub fn push(&mut self, x: f64) {
        let n1 = self.n as f64;
        self.n += 1;
        let n = self.n as f64;
        let delta = x - self.mean;
        let dn = delta / n;
        let dn2 = dn * dn;
        let term1 = delta * dn * n1;
        self.mean += dn;
        self.m4 += term1 * dn2 * (n * n - 3.0 * n + 3.0) + 6.0 * dn2 * self.m2 - 4.0 * dn * self.m3;
        self.m3 += term1 * dn * (n - 2.0) - 3.0 * dn * self.m2;
        self.m2 += term1;
    }

    pub fn count(&self) -> u64 {
        self.n
    }

    pub fn mean(&self) -> f64 {
        self.mean
    }

    /// Unbiased sample variance.
    pub fn variance(&self) -> f64 {
        if self.n < 2 {
            0.0
        } else {
            self.m2 / (self.n - 1) as f64
        }
    }

    pub fn stderr_of_mean(&self) -> f64 {
        if self.n < 2 {
            0.0
        } else {
            (self.variance() / self.n as f64).sqrt()
        }
    }

    /// Large-sample standard error of the sample variance,
    /// `√((μ₄ - σ⁴) / n)`.
    pub fn stderr_of_variance(&self) -> f64 {
        if self.n < 2 {
            return 0.0;
        }
        let n = self.n as f64;
        let mu2 = self.m2 / n;
        let mu4 = self.m4 / n;
        ((mu4 - mu2 * mu2).max(0.0) / n).sqrt()
    }
}

impl Merge for Moments {
    fn merge(&mut self, o: Self) {
        if o.n == 0 {
            return;
        }
        if self.n == 0 {
            *self = o;
            return;
        }
        let (na, nb) = (self.n as f64, o.n as f64);
        let n = na + nb;
        let delta = o.mean - self.mean;
        let d2 = delta * delta;
        let m2 = self.m2 + o.m2 + d2 * na * nb / n;
        let m3 = self.m3
            + o.m3
            + d2 * delta * na * nb * (na - nb) / (n * n)
            + 3.0 * delta * (na * o.m2 - nb * self.m2) / n;
        let m4 = self.m4
            + o.m4
            + d2 * d2 * na * nb * (na * na - na * nb + nb * nb) / (n * n * n)
            + 6.0 * d2 * (na * na * o.m2 + nb * nb * self.m2) / (n * n)
            + 4.0 * delta * (na * o.m3 - nb * self.m3) / n;
        self.n += o.n;
        self.mean += delta * nb / n;
        self.m2 = m2;
        self.m3 = m3;
        self.m4 = m4;
    }
}

/// Running means, variances and covariance of paired observations.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct CoMoments {
    n: u64,
    mean_x: f64,
    mean_y: f64,
    m2_x: f64,
    m2_y: f64,
    c_xy: f64,
}

impl CoMoments {
    pub fn push(&mut self, x: f64, y: f64) {
        self.n += 1;
        let n = self.n as f64;
        let dx = x - self.mean_x;
        self.mean_x += dx / n;
        let dy = y - self.mean_y;
        self.mean_y += dy / n;
        self.m2_x += dx * (x - self.mean_x);
        self.m2_y += dy * (y - self.mean_y);
        self.c_xy += dx * (y - self.mean_y);
    }

    pub fn count(&self) -> u64 {
        self.n
    }

    pub fn mean_x(&self) -> f64 {
        self.mean_x
    }

    pub fn mean_y(&self) -> f64 {
        self.mean_y
    }

    fn denom(&self) -> f64 {
        (self.n.max(2) - 1) as f64
    }

    pub fn variance_x(&self) -> f64 {
        self.m2_x / self.denom()
    }

    pub fn variance_y(&self) -> f64 {
        self.m2_y / self.denom()
    }

    pub fn covariance(&self) -> f64 {
        self.c_xy / self.denom()
    }

    /// Pearson correlation; zero when either margin is constant.
    pub fn correlation(&self) -> f64 {
        let d = (self.m2_x * self.m2_y).sqrt();
        if d > 0.0 {
            self.c_xy / d
        } else {
            0.0
        }
    }
}

impl Merge for CoMoments {
    fn merge(&mut self, o: Self) {
        if o.n == 0 {
            return;
        }
        if self.n == 0 {
            *self = o;
            return;
        }
        let (na, nb) = (self.n as f64, o.n as f64);
        let n = na + nb;
        let dx = o.mean_x - self.mean_x;
        let dy = o.mean_y - self.mean_y;
        let w = na * nb / n;
        self.m2_x += o.m2_x + dx * dx * w;
        self.m2_y += o.m2_y + dy * dy * w;
        self.c_xy += o.c_xy + dx * dy * w;
        self.mean_x += dx * nb / n;
        self.mean_y += dy * nb / n;
        self.n += o.n;
    }
}

/// Equal-width histogram over `[lo, hi)` with under- and overflow counts.
#[derive(Debug, Clone, PartialEq)]
pub struct Histogram {
    lo: f64,
    hi: f64,
    counts: Vec<u64>,
    below: u64,
    above: u64,
}

impl Histogram {
    pub fn new(lo: f64, hi: f64, bins: usize) -> Result<Self> {
        if !(lo.is_finite() && hi.is_finite() && lo < hi) || bins == 0 {
            return Err(Error::Config(format!(
                "histogram needs lo < hi and at least one bin (got [{lo}, {hi}), {bins} bins)"
            )));
        }
        Ok(Self {
            lo,
            hi,
            counts: vec![0; bins],
            below: 0,
            above: 0,
        })
    }

    pub fn push(&mut self, x: f64) {
        if x < self.lo {
            self.below += 1;
        } else if x >= self.hi {
            self.above += 1;
        } else {
            let bins = self.counts.len();
            let i = ((x - self.lo) / self.width()) as usize;
            self.counts[i.min(bins - 1)] += 1;
        }
    }

    pub fn width(&self) -> f64 {
        (self.hi - self.lo) / self.counts.len() as f64
    }

    pub fn range(&self) -> (f64, f64) {
        (self.lo, self.hi)
    }

    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    pub fn below(&self) -> u64 {
        self.below
    }

    pub fn above(&self) -> u64 {
        self.above
    }

    pub fn total(&self) -> u64 {
        self.below + self.above + self.counts.iter().sum::<u64>()
    }

    pub fn centers(&self) -> impl Iterator<Item = f64> + '_ {
        let w = self.width();
        (0..self.counts.len()).map(move |i| self.lo + (i as f64 + 0.5) * w)
    }

    /// Empirical density per bin (count / (total · width)).
    pub fn density(&self) -> Vec<f64> {
        let scale = 1.0 / (self.total().max(1) as f64 * self.width());
        self.counts.iter().map(|&c| c as f64 * scale).collect()
    }

    /// Pearson χ² test of the counts against `density`.
    ///
    /// Cells are the bins plus the two tails; adjacent cells are pooled
    /// left to right until each expects at least [`MIN_EXPECTED`] counts. Tail
    /// masses integrate `density` over 30 units beyond the range, which suits
    /// densities with Gaussian-type tails. No parameters are fitted, so the
    /// degrees of freedom are `cells - 1`.
    pub fn chi_square<F: Fn(f64) -> f64>(&self, density: F) -> Result<ChiSquare> {
        let acc = AccuracySpec::new(1e-13, 1e-10)?;
        let w = self.width();
        let mass = |a: f64, b: f64| quadrature::integrate(&density, a, b, acc).map(|r| r.value);
        let mut cells = Vec::with_capacity(self.counts.len() + 2);
        cells.push((self.below, mass(self.lo - 30.0, self.lo)?));
        for (i, &c) in self.counts.iter().enumerate() {
            let a = self.lo + i as f64 * w;
            cells.push((c, mass(a, a + w)?));
        }
        cells.push((self.above, mass(self.hi, self.hi + 30.0)?));

        let n = self.total() as f64;
        let mut pooled: Vec<(f64, f64)> = Vec::new();
        let (mut obs, mut exp) = (0.0, 0.0);
        for (c, p) in cells {
            obs += c as f64;
            exp += p * n;
            if exp >= MIN_EXPECTED {
                pooled.push((obs, exp));
                obs = 0.0;
                exp = 0.0;
            }
        }
        if obs > 0.0 || exp > 0.0 {
            match pooled.last_mut() {
                Some(last) => {
                    last.0 += obs;
                    last.1 += exp;
                }
                None => pooled.push((obs, exp)),
            }
        }
        if pooled.len() < 2 {
            return Err(Error::Config("too few samples for a chi-square test".into()));
        }
        let statistic: f64 = pooled.iter().map(|(o, e)| (o - e) * (o - e) / e).sum();
        let dof = (pooled.len() - 1) as f64;
        let dist = ChiSquared::new(dof).map_err(|e| Error::Config(e.to_string()))?;
        Ok(ChiSquare {
            statistic,
            dof,
            p_value: dist.sf(statistic),
            cells: pooled.len(),
        })
    }
}

impl Merge for Histogram {
    fn merge(&mut self, o: Self) {
        debug_assert_eq!((self.lo, self.hi, self.counts.len()), (o.lo, o.hi, o.counts.len()));
        for (a, b) in self.counts.iter_mut().zip(o.counts) {
            *a += b;
        }
        self.below += o.below;
        self.above += o.above;
    }
}

/// Minimum expected count per χ² cell after pooling.
pub const MIN_EXPECTED: f64 = 5.0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChiSquare {
    pub statistic: f64,
    pub dof: f64,
    pub p_value: f64,
    pub cells: usize,
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn naive(xs: &[f64]) -> (f64, f64, f64) {
        let n = xs.len() as f64;
        let mean = xs.iter().sum::<f64>() / n;
        let m2 = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / n;
        let m4 = xs.iter().map(|x| (x - mean).powi(4)).sum::<f64>() / n;
        (mean, m2 * n / (n - 1.0), m4)
    }

    proptest! {
        #[test]
        fn moments_match_two_pass_and_merge(
            xs in prop::collection::vec(-50.0f64..50.0, 2..200),
            split in 0usize..200,
        ) {
            let split = split.min(xs.len());
            let mut whole = Moments::default();
            xs.iter().for_each(|&x| whole.push(x));
            let mut left = Moments::default();
            let mut right = Moments::default();
            xs[..split].iter().for_each(|&x| left.push(x));
            xs[split..].iter().for_each(|&x| right.push(x));
            left.merge(right);

            let (mean, var, m4) = naive(&xs);
            let tol = 1e-9 * (1.0 + var * var);
            for m in [whole, left] {
                prop_assert!((m.mean() - mean).abs() < 1e-9);
                prop_assert!((m.variance() - var).abs() < 1e-9 * (1.0 + var));
                prop_assert!((m.m4 / m.count() as f64 - m4).abs() < tol * 1e3);
            }
        }

        #[test]
        fn comoments_merge(
            pairs in prop::collection::vec((-5.0f64..5.0, -5.0f64..5.0), 3..100),
            split in 0usize..100,
        ) {
            let split = split.min(pairs.len());
            let mut whole = CoMoments::default();
            pairs.iter().for_each(|&(x, y)| whole.push(x, y));
            let mut a = CoMoments::default();
            let mut b = CoMoments::default();
            pairs[..split].iter().for_each(|&(x, y)| a.push(x, y));
            pairs[split..].iter().for_each(|&(x, y)| b.push(x, y));
            a.merge(b);
            prop_assert!((a.covariance() - whole.covariance()).abs() < 1e-10);
            prop_assert!((a.correlation() - whole.correlation()).abs() < 1e-10);
            prop_assert!(whole.correlation().abs() <= 1.0 + 1e-12);
        }
    }

    #[test]
    fn perfectly_correlated_pairs() {
        let mut c = CoMoments::default();
        for i in 0..10 {
            c.push(i as f64, 3.0 - 2.0 * i as f64);
        }
        assert!((c.correlation() + 1.0).abs() < 1e-12);
        assert!((c.mean_x() - 4.5).abs() < 1e-12);
    }

    #[test]
    fn histogram_binning() {
        let mut h = Histogram::new(-1.0, 1.0, 4).unwrap();
        for x in [-2.0, -1.0, -0.6, 0.0, 0.49, 0.5, 0.99, 1.0, 3.0] {
            h.push(x);
        }
        assert_eq!(h.counts(), &[2, 0, 2, 2]);
        assert_eq!((h.below(), h.above(), h.total()), (1, 2, 9));
        assert!(Histogram::new(1.0, 1.0, 3).is_err());
        assert!(Histogram::new(0.0, 1.0, 0).is_err());
    }

    #[test]
    fn chi_square_of_exact_expectations_is_zero() {
        // Counts equal to the expectations of a uniform density on [0, 1).
        let mut h = Histogram::new(0.0, 1.0, 10).unwrap();
        for i in 0..10 {
            for _ in 0..100 {
                h.push(i as f64 / 10.0 + 0.05);
            }
        }
        let uniform = |x: f64| if (0.0..1.0).contains(&x) { 1.0 } else { 0.0 };
        let chi = h.chi_square(uniform).unwrap();
        assert!(chi.statistic < 1e-6, "{chi:?}");
        assert!(chi.p_value > 0.999);
        assert_eq!(chi.dof, 9.0);
    }

    #[test]
    fn chi_square_rejects_wrong_density() {
        let mut h = Histogram::new(0.0, 1.0, 10).unwrap();
        for i in 0..1000 {
            h.push((i as f64 / 1000.0).powi(2));
        }
        let uniform = |x: f64| if (0.0..1.0).contains(&x) { 1.0 } else { 0.0 };
        assert!(h.chi_square(uniform).unwrap().p_value < 1e-10);
    }
}
