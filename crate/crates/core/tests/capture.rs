use gausscap::analytic::{
    capture_probability, capture_probability_at, capture_probability_detailed,
    default_capture_accuracy, CAPTURE_REFERENCE,
};
use gausscap::AccuracySpec;

#[test]
fn reproduces_published_table() {
    let acc = default_capture_accuracy();
    let mut previous = f64::INFINITY;
    for (xi, want) in CAPTURE_REFERENCE {
        let got = capture_probability(xi, acc).unwrap();
        assert!((got - want).abs() <= 1e-4, "xi = {xi}: {got} vs {want}");
        // Six printed decimals are truncations of the exact value.
        assert!((got - want).abs() <= 1e-6, "xi = {xi}: {got} vs {want}");
        assert!(got < previous);
        previous = got;
    }
}

#[test]
fn origin_is_captured_with_probability_one_quarter() {
    let acc = AccuracySpec::new(1e-9, 1e-9).unwrap();
    let r = capture_probability_detailed(0.0, acc).unwrap();
    assert!((r.value - 0.25).abs() <= r.error_estimate.max(1e-9), "{r:?}");
}

#[test]
fn symmetric_in_xi_and_radial() {
    let acc = default_capture_accuracy();
    let a = capture_probability(0.8, acc).unwrap();
    let b = capture_probability(-0.8, acc).unwrap();
    assert!((a - b).abs() < 2e-7);
    let c = capture_probability_at(0.6, 0.8, acc).unwrap();
    let d = capture_probability(1.0, acc).unwrap();
    assert_eq!(c, d);
    assert!(capture_probability(f64::NAN, acc).is_err());
}

#[test]
fn values_lie_in_range() {
    let acc = default_capture_accuracy();
    for xi in [0.25, 3.0, 5.0] {
        let p = capture_probability(xi, acc).unwrap();
        assert!(p > 0.0 && p <= 0.25);
    }
}
