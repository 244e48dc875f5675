//! Target-independent computations behind the browser exports.

use gausscap::analytic::{capture_probability_detailed, median_density_1d, median_reference_density_1d};
use gausscap::geometry::{hull4_classify, hull_area, hull_perimeter, Point2};
use gausscap::monte_carlo::{
    estimate_capture, estimate_median_stats_1d, estimate_quad_stats, GaussianStream, RunConfig,
};
use gausscap::{AccuracySpec, Result};
use wasm_bindgen::prelude::*;

/// Abscissas with values and one-sigma (or error-estimate) bands.
#[wasm_bindgen]
#[derive(Debug, Clone, PartialEq)]
pub struct Curve {
    xs: Vec<f64>,
    ys: Vec<f64>,
    errors: Vec<f64>,
}

#[wasm_bindgen]
impl Curve {
    #[wasm_bindgen(getter)]
    pub fn xs(&self) -> Vec<f64> {
        self.xs.clone()
    }

    #[wasm_bindgen(getter)]
    pub fn ys(&self) -> Vec<f64> {
        self.ys.clone()
    }

    #[wasm_bindgen(getter)]
    pub fn errors(&self) -> Vec<f64> {
        self.errors.clone()
    }
}

fn grid(max: f64, points: usize) -> Vec<f64> {
    let n = points.max(2);
    (0..n).map(|i| max * i as f64 / (n - 1) as f64).collect()
}

pub fn capture_curve(xi_max: f64, points: usize, tol: f64) -> Result<Curve> {
    let acc = AccuracySpec::new(tol, tol)?;
    let xs = grid(xi_max, points);
    let mut ys = Vec::with_capacity(xs.len());
    let mut errors = Vec::with_capacity(xs.len());
    for &xi in &xs {
        let r = capture_probability_detailed(xi, acc)?;
        ys.push(r.value);
        errors.push(r.error_estimate);
    }
    Ok(Curve { xs, ys, errors })
}

/// Monte Carlo capture estimates on the same grid; each abscissa uses its
/// own stream offset from `seed`.
pub fn capture_curve_mc(xi_max: f64, points: usize, samples: u64, seed: u64) -> Result<Curve> {
    let xs = grid(xi_max, points);
    let mut ys = Vec::with_capacity(xs.len());
    let mut errors = Vec::with_capacity(xs.len());
    for (i, &xi) in xs.iter().enumerate() {
        let e = estimate_capture(xi, 0.0, &RunConfig::new(seed.wrapping_add(i as u64), samples, 1)?)?;
        ys.push(e.mean);
        errors.push(e.stderr);
    }
    Ok(Curve { xs, ys, errors })
}

#[wasm_bindgen]
#[derive(Debug, Clone, PartialEq)]
pub struct MedianPanel {
    centers: Vec<f64>,
    empirical: Vec<f64>,
    exact: Vec<f64>,
    reference: Vec<f64>,
    pub variance: f64,
    pub variance_stderr: f64,
    pub p_exact: f64,
    pub p_reference: f64,
}

#[wasm_bindgen]
impl MedianPanel {
    #[wasm_bindgen(getter)]
    pub fn centers(&self) -> Vec<f64> {
        self.centers.clone()
    }

    #[wasm_bindgen(getter)]
    pub fn empirical(&self) -> Vec<f64> {
        self.empirical.clone()
    }

    #[wasm_bindgen(getter)]
    pub fn exact(&self) -> Vec<f64> {
        self.exact.clone()
    }

    #[wasm_bindgen(getter)]
    pub fn reference(&self) -> Vec<f64> {
        self.reference.clone()
    }
}

/// Histogram of medians of three normals beside the exact density and the
/// normal density with the same variance.
pub fn median_panel(samples: u64, seed: u64) -> Result<MedianPanel> {
    let r = estimate_median_stats_1d(&RunConfig::new(seed, samples, 1)?)?;
    let centers: Vec<f64> = r.histogram.centers().collect();
    Ok(MedianPanel {
        exact: centers.iter().map(|&x| median_density_1d(x)).collect(),
        reference: centers.iter().map(|&x| median_reference_density_1d(x)).collect(),
        empirical: r.histogram.density(),
        centers,
        variance: r.variance.mean,
        variance_stderr: r.variance.stderr,
        p_exact: r.fit_true.p_value,
        p_reference: r.fit_reference.p_value,
    })
}

/// Four Gaussian points and their convex hull.
#[wasm_bindgen]
#[derive(Debug, Clone, PartialEq)]
pub struct FourPoints {
    coords: Vec<f64>,
    order: Vec<u32>,
    /// Index of the point inside the triangle of the others, or -1.
    pub inner: i32,
    pub area: f64,
    pub perimeter: f64,
}

#[wasm_bindgen]
impl FourPoints {
    /// `x0, y0, x1, y1, ...`
    #[wasm_bindgen(getter)]
    pub fn coords(&self) -> Vec<f64> {
        self.coords.clone()
    }

    /// Hull vertices counterclockwise.
    #[wasm_bindgen(getter)]
    pub fn order(&self) -> Vec<u32> {
        self.order.clone()
    }
}

/// Draw number `draw` from the stream of `seed`. Collinear draws are
/// replaced by the next ones on the same stream.
pub fn sample_four(seed: u64, draw: u64) -> Result<FourPoints> {
    let mut s = GaussianStream::new(seed, draw);
    loop {
        let pts = [s.point2(), s.point2(), s.point2(), s.point2()];
        let Ok(class) = hull4_classify(pts[0], pts[1], pts[2], pts[3]) else {
            continue;
        };
        return Ok(FourPoints {
            coords: pts.iter().flat_map(|p: &Point2| [p.x, p.y]).collect(),
            order: class.order().iter().map(|&i| i as u32).collect(),
            inner: class.inner_index().map_or(-1, |i| i as i32),
            area: hull_area(&class, &pts)?,
            perimeter: hull_perimeter(&class, &pts)?,
        });
    }
}

#[wasm_bindgen]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HullSummary {
    pub p_quadrilateral: f64,
    pub area: f64,
    pub perimeter: f64,
    pub ratio_triangle: f64,
    pub ratio_quad: f64,
    pub corr_adjacent: f64,
    pub corr_disjoint: f64,
}

pub fn hull_summary(samples: u64, seed: u64) -> Result<HullSummary> {
    let q = estimate_quad_stats(&RunConfig::new(seed, samples, 1)?)?;
    Ok(HullSummary {
        p_quadrilateral: q.p_quadrilateral.mean,
        area: q.area.mean,
        perimeter: q.perimeter.mean,
        ratio_triangle: q.rayleigh_tri.mean,
        ratio_quad: q.rayleigh_quad.mean,
        corr_adjacent: q.corr_adjacent.mean,
        corr_disjoint: q.corr_disjoint.mean,
    })
}
