//! Monte Carlo estimators against closed forms at 10⁶ samples.

use gausscap::analytic::{capture_probability, constants, default_capture_accuracy};
use gausscap::monte_carlo::{
    estimate_capture, estimate_content_variance_2d, estimate_expected_content,
    estimate_inner_point_variance_2d, estimate_median_stats_1d, estimate_quad_stats,
    estimate_triangle_stats, non_rayleigh_check, RayleighCheck, RunConfig, DEFAULT_SEED,
    MEDIAN_HIST_BINS,
};

fn cfg(samples: u64) -> RunConfig {
    RunConfig::new(DEFAULT_SEED, samples, 4).unwrap()
}

#[test]
fn capture_at_origin_and_unit_radius() {
    let c = cfg(1_000_000);
    assert!(estimate_capture(0.0, 0.0, &c).unwrap().within(0.25, 3.0));
    let quad = capture_probability(1.0, default_capture_accuracy()).unwrap();
    let on_axis = estimate_capture(1.0, 0.0, &c).unwrap();
    assert!(on_axis.within(0.098289, 3.0));
    assert!(on_axis.within(quad, 3.0));
    let off_axis = estimate_capture(0.6, 0.8, &c).unwrap();
    assert!(off_axis.within(quad, 3.0), "{off_axis:?} vs {quad}");
}

#[test]
fn expected_content_in_two_and_three_dimensions() {
    let k = constants();
    let c = cfg(1_000_000);
    let d2 = estimate_expected_content(2, &c).unwrap();
    assert!(d2.within(k.expected_content_2d, 3.0), "{d2:?}");
    assert!(d2.within((1.0 - k.theta) / 4.0, 3.0));
    let d3 = estimate_expected_content(3, &c).unwrap();
    assert!(d3.within(k.gaussian_volume_3d, 3.0), "{d3:?}");
    assert!(estimate_expected_content(4, &c).is_err());
}

#[test]
fn median_of_three() {
    let k = constants();
    let r = estimate_median_stats_1d(&cfg(1_000_000)).unwrap();
    assert!(r.variance.within(k.median_variance_1d, 3.0), "{:?}", r.variance);
    assert!(r.mean.within(0.0, 3.0));
    assert_eq!(r.histogram.counts().len(), MEDIAN_HIST_BINS);
    assert_eq!(r.histogram.total(), 1_000_000);
    assert!(r.fit_true.p_value > 1e-3, "{:?}", r.fit_true);
    // The matched normal is a worse fit than the exact density.
    assert!(r.fit_reference.statistic > r.fit_true.statistic);
}

#[test]
fn inner_point_of_degenerate_quadrilaterals() {
    let k = constants();
    let r = estimate_inner_point_variance_2d(&cfg(1_000_000)).unwrap();
    assert!(r.acceptance.within(k.one_minus_theta, 3.0), "{:?}", r.acceptance);
    assert!(r.mean.within(0.0, 3.0));
    assert_eq!(r.variance.n_total, 1_000_000);
    assert!(r.variance.n < r.variance.n_total);
    assert!(r.variance.mean >= 0.0);
}

#[test]
fn quadrilateral_statistics() {
    let k = constants();
    let q = estimate_quad_stats(&cfg(1_000_000)).unwrap();
    assert!(q.p_quadrilateral.within(k.theta, 3.0), "{:?}", q.p_quadrilateral);
    assert!(q.area.within(k.expected_area_quad, 3.0), "{:?}", q.area);
    assert!(q.perimeter.within(k.expected_perimeter_quad, 3.0), "{:?}", q.perimeter);
    for r in [q.corr_adjacent, q.corr_disjoint] {
        assert!(r.mean > -1.0 && r.mean < 1.0);
    }
    let check = non_rayleigh_check(&q);
    let pi4 = RayleighCheck::RAYLEIGH_RATIO;
    assert!(check.ratio_tri.z_score(pi4).abs() > 5.0);
    assert!((check.ratio_quad.mean - pi4).abs() < 0.05);
}

#[test]
fn triangle_statistics_and_area_ratio() {
    let k = constants();
    let c = cfg(1_000_000);
    let t = estimate_triangle_stats(&c).unwrap();
    assert!(t.area.within(k.expected_area_triangle, 3.0), "{:?}", t.area);
    assert!(t.perimeter.within(k.expected_perimeter_triangle, 3.0), "{:?}", t.perimeter);
    let q = estimate_quad_stats(&c).unwrap();
    let ratio = q.area.mean / t.area.mean;
    let se = ratio * (q.area.stderr / q.area.mean).hypot(t.area.stderr / t.area.mean);
    assert!((ratio - 2.0).abs() < 3.0 * se, "ratio {ratio} ± {se}");
}

#[test]
fn content_variance_is_reproducible() {
    let c = RunConfig::new(DEFAULT_SEED, 3_000, 2).unwrap();
    let a = estimate_content_variance_2d(&c, 300).unwrap();
    let b = estimate_content_variance_2d(&c, 300).unwrap();
    assert_eq!(a, b);
    assert!(a.variance.mean >= 0.0);
    assert!(a.mean_content.within(constants().expected_content_2d, 3.0));
}
