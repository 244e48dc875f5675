//! The acceptance checks behind `gcap verify`.
//!
//! Each criterion yields the records it computed plus a list of named
//! checks. Records are deterministic for a fixed seed and worker count;
//! wall-clock timings appear only in the check details.

use std::f64::consts::PI;
use std::fmt;
use std::time::Instant;

use gausscap::analytic::{
    capture_probability_detailed, case_probability, case_probability_via_owen_t, constants, Case,
    CAPTURE_REFERENCE,
};
use gausscap::monte_carlo::{
    estimate_capture, estimate_expected_content, estimate_inner_point_variance_2d,
    estimate_median_stats_1d, estimate_quad_stats, non_rayleigh_check, Estimate, GaussianStream,
    RayleighCheck, RunConfig,
};
use gausscap::quadrature::{integrate_octant3, Octant3};
use gausscap::special_fn::{
    erf_product_integral_closed, erf_product_integral_numeric, owen_t, std_normal_cdf,
};
use gausscap::AccuracySpec;

use crate::record::OutputRecord;
use crate::CliError;

/// Worker count used by `verify` unless overridden, so that output does not
/// depend on the machine.
pub const VERIFY_WORKERS: usize = 8;

pub const SAMPLES: u64 = 1_000_000;
pub const INNER_POINT_SAMPLES: u64 = 4_000_000;

/// Constants as published, to 25 digits. Where only a symbolic form is
/// printed, the value is that form evaluated at 40 digits.
pub const PUBLISHED_CONSTANTS: [(&str, f64); 9] = [
    ("theta", 0.649_040_687_816_356_378_974_866_6),
    ("one_minus_theta", 0.350_959_312_183_643_621_025_133_3),
    ("expected_content_2d", 0.087_739_828_045_910_905_256_283_3),
    ("gaussian_volume_3d", 0.019_569_376_744_833_756_229_049_8),
    ("median_variance_1d", 0.448_671_104_578_207_950_488_673_5),
    ("expected_area_quad", 1.732_050_807_568_877_293_527_446_3),
    ("expected_perimeter_quad", 6.467_756_219_231_013_783_966_901_0),
    ("expected_area_triangle", 0.866_025_403_784_438_646_763_723_2),
    ("expected_perimeter_triangle", 5.317_361_552_716_548_081_894_502_5),
];

pub fn published_constant(name: &str) -> Option<f64> {
    PUBLISHED_CONSTANTS.iter().find(|(n, _)| *n == name).map(|&(_, v)| v)
}

/// Two-decimal side moments `(E side, E side²)` for triangular and
/// quadrilateral hulls, with the allowed absolute deviations.
pub const SIDE_MOMENTS_TRIANGLE: [(f64, f64); 2] = [(2.11, 0.01), (5.32, 0.03)];
pub const SIDE_MOMENTS_QUAD: [(f64, f64); 2] = [(1.45, 0.01), (2.78, 0.02)];

pub const INNER_POINT_VARIANCE: (f64, f64) = (0.36, 0.02);

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VerifyConfig {
    pub seed: u64,
    pub workers: usize,
    /// Absolute and relative tolerance of the capture cubature.
    pub tol: f64,
}

impl VerifyConfig {
    fn run(&self, samples: u64) -> Result<RunConfig, CliError> {
        Ok(RunConfig::new(self.seed, samples, self.workers)?)
    }

    fn accuracy(&self) -> Result<AccuracySpec, CliError> {
        Ok(AccuracySpec::new(self.tol, self.tol)?)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub label: String,
    pub passed: bool,
    pub detail: String,
}

impl Check {
    fn new(label: impl Into<String>, passed: bool, detail: impl Into<String>) -> Self {
        Self { label: label.into(), passed, detail: detail.into() }
    }

    fn within_stderr(label: impl Into<String>, e: &Estimate, target: f64, k: f64) -> Self {
        Self::new(
            label,
            e.within(target, k),
            format!("{:.6} ± {:.1e} vs {target:.7} (z = {:+.2})", e.mean, e.stderr, e.z_score(target)),
        )
    }

    fn within_abs(label: impl Into<String>, value: f64, target: f64, tol: f64) -> Self {
        Self::new(
            label,
            (value - target).abs() <= tol,
            format!("{value:.6} vs {target} ± {tol}"),
        )
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub id: u8,
    pub title: &'static str,
    pub checks: Vec<Check>,
    pub records: Vec<OutputRecord>,
}

impl Outcome {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

/// One summary line; failing checks are spelled out.
impl fmt::Display for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let status = if self.passed() { "PASS" } else { "FAIL" };
        let passed = self.checks.iter().filter(|c| c.passed).count();
        write!(f, "criterion {} [{status}] {} ({passed}/{} checks)", self.id, self.title, self.checks.len())?;
        for c in self.checks.iter().filter(|c| !c.passed) {
            write!(f, "; failed {}: {}", c.label, c.detail)?;
        }
        Ok(())
    }
}

pub type Criterion = fn(&VerifyConfig) -> Result<Outcome, CliError>;

/// Criteria evaluated in-process, in order. Byte-identical reruns are
/// checked from outside the process.
pub const CRITERIA: [(u8, Criterion); 8] = [
    (1, capture_table),
    (2, capture_cross_validation),
    (3, published_constants),
    (4, expected_content),
    (5, median_suite),
    (6, quadrilateral_suite),
    (7, non_rayleigh),
    (8, identities),
];

pub fn criterion(id: u8) -> Option<Criterion> {
    CRITERIA.iter().find(|(i, _)| *i == id).map(|&(_, c)| c)
}

pub fn run_all(cfg: &VerifyConfig) -> Result<Vec<Outcome>, CliError> {
    CRITERIA.iter().map(|(_, c)| c(cfg)).collect()
}

fn xi_label(xi: f64) -> String {
    format!("capture_probability(xi={xi})")
}

pub fn capture_table(cfg: &VerifyConfig) -> Result<Outcome, CliError> {
    let acc = cfg.accuracy()?;
    let start = Instant::now();
    let mut records = Vec::new();
    let mut checks = Vec::new();
    for (xi, target) in CAPTURE_REFERENCE {
        let r = capture_probability_detailed(xi, acc)?;
        checks.push(Check::within_abs(format!("xi={xi}"), r.value, target, 1e-4));
        records.push(OutputRecord::quadrature(
            xi_label(xi),
            r.value,
            r.error_estimate,
            r.evaluations as u64,
            Some(target),
        ));
    }
    let secs = start.elapsed().as_secs_f64();
    checks.push(Check::new("runtime", secs <= 300.0, format!("{secs:.2} s of 300 s")));
    Ok(Outcome { id: 1, title: "capture table by quadrature", checks, records })
}

pub fn capture_cross_validation(cfg: &VerifyConfig) -> Result<Outcome, CliError> {
    let acc = cfg.accuracy()?;
    let run = cfg.run(SAMPLES)?;
    let mut records = Vec::new();
    let mut checks = Vec::new();
    for (xi, target) in CAPTURE_REFERENCE {
        let quad = capture_probability_detailed(xi, acc)?.value;
        let mc = estimate_capture(xi, 0.0, &run)?;
        checks.push(Check::within_stderr(format!("xi={xi}"), &mc, quad, 3.0));
        records.push(OutputRecord::monte_carlo(xi_label(xi), &mc, cfg.seed, Some(target)));
    }
    Ok(Outcome { id: 2, title: "capture cross-validation by Monte Carlo", checks, records })
}

pub fn published_constants(_: &VerifyConfig) -> Result<Outcome, CliError> {
    let k = constants();
    let computed = [
        ("theta", k.theta),
        ("one_minus_theta", k.one_minus_theta),
        ("expected_content_2d", k.expected_content_2d),
        ("gaussian_volume_3d", k.gaussian_volume_3d),
        ("median_variance_1d", k.median_variance_1d),
        ("expected_area_quad", k.expected_area_quad),
        ("expected_perimeter_quad", k.expected_perimeter_quad),
    ];
    let mut records = Vec::new();
    let mut checks = Vec::new();
    for (name, value) in computed {
        let target = published_constant(name).expect("listed constant");
        let rel = ((value - target) / target).abs();
        checks.push(Check::new(name, rel <= 1e-12, format!("{value:.17} vs {target:.17} (rel {rel:.1e})")));
        records.push(OutputRecord::closed_form(name, value, Some(target)));
    }
    Ok(Outcome { id: 3, title: "closed-form constants", checks, records })
}

pub fn expected_content(cfg: &VerifyConfig) -> Result<Outcome, CliError> {
    let run = cfg.run(SAMPLES)?;
    let mut records = Vec::new();
    let mut checks = Vec::new();
    for (dim, name) in [(2, "expected_content_2d"), (3, "gaussian_volume_3d")] {
        let target = published_constant(name).expect("listed constant");
        let e = estimate_expected_content(dim, &run)?;
        checks.push(Check::within_stderr(format!("dim={dim}"), &e, target, 3.0));
        records.push(OutputRecord::monte_carlo(name, &e, cfg.seed, Some(target)));
    }
    Ok(Outcome { id: 4, title: "expected probability content", checks, records })
}

pub fn median_suite(cfg: &VerifyConfig) -> Result<Outcome, CliError> {
    let k = constants();
    let median = estimate_median_stats_1d(&cfg.run(SAMPLES)?)?;
    let inner = estimate_inner_point_variance_2d(&cfg.run(INNER_POINT_SAMPLES)?)?;
    let (var_target, var_tol) = INNER_POINT_VARIANCE;
    let fit = median.fit_true;
    let checks = vec![
        Check::within_stderr("median variance", &median.variance, k.median_variance_1d, 3.0),
        Check::new(
            "median density fit",
            fit.p_value > 1e-3,
            format!("chi2 {:.1} on {} dof, p = {:.4}", fit.statistic, fit.dof, fit.p_value),
        ),
        Check::within_abs("inner-point variance", inner.variance.mean, var_target, var_tol),
        Check::within_stderr("inner-point acceptance", &inner.acceptance, k.one_minus_theta, 3.0),
    ];
    let n = median.histogram.total();
    let records = vec![
        OutputRecord::monte_carlo("median_variance_1d", &median.variance, cfg.seed, published_constant("median_variance_1d")),
        chi_square_record("median_fit_p_value", fit.p_value, n, cfg.seed),
        chi_square_record("median_reference_fit_p_value", median.fit_reference.p_value, n, cfg.seed),
        OutputRecord::monte_carlo("inner_point_variance_2d", &inner.variance, cfg.seed, Some(var_target)),
        OutputRecord::monte_carlo("inner_point_acceptance", &inner.acceptance, cfg.seed, published_constant("one_minus_theta")),
    ];
    Ok(Outcome { id: 5, title: "median and inner-point suite", checks, records })
}

pub(crate) fn chi_square_record(quantity: &str, p_value: f64, n: u64, seed: u64) -> OutputRecord {
    let e = Estimate { mean: p_value, stderr: 0.0, n, n_total: n };
    OutputRecord::monte_carlo(quantity, &e, seed, None)
}

pub fn quadrilateral_suite(cfg: &VerifyConfig) -> Result<Outcome, CliError> {
    let k = constants();
    let q = estimate_quad_stats(&cfg.run(SAMPLES)?)?;
    let mut checks = vec![
        Check::within_stderr("p_quadrilateral", &q.p_quadrilateral, k.theta, 3.0),
        Check::within_stderr("area", &q.area, k.expected_area_quad, 3.0),
        Check::within_stderr("perimeter", &q.perimeter, k.expected_perimeter_quad, 3.0),
    ];
    let sides = [
        ("side_mean_triangle", &q.side_mean_tri, SIDE_MOMENTS_TRIANGLE[0]),
        ("side_sq_triangle", &q.side_sq_tri, SIDE_MOMENTS_TRIANGLE[1]),
        ("side_mean_quad", &q.side_mean_quad, SIDE_MOMENTS_QUAD[0]),
        ("side_sq_quad", &q.side_sq_quad, SIDE_MOMENTS_QUAD[1]),
    ];
    for (name, e, (target, tol)) in sides {
        checks.push(Check::within_abs(name, e.mean, target, tol));
    }
    let mut records = vec![
        OutputRecord::monte_carlo("p_quadrilateral", &q.p_quadrilateral, cfg.seed, published_constant("theta")),
        OutputRecord::monte_carlo("expected_area_quad", &q.area, cfg.seed, published_constant("expected_area_quad")),
        OutputRecord::monte_carlo("expected_perimeter_quad", &q.perimeter, cfg.seed, published_constant("expected_perimeter_quad")),
    ];
    for (name, e, (target, _)) in sides {
        records.push(OutputRecord::monte_carlo(name, e, cfg.seed, Some(target)));
    }
    records.push(OutputRecord::monte_carlo("corr_adjacent_sides", &q.corr_adjacent, cfg.seed, None));
    records.push(OutputRecord::monte_carlo("corr_disjoint_sides", &q.corr_disjoint, cfg.seed, None));
    Ok(Outcome { id: 6, title: "quadrilateral suite", checks, records })
}

pub fn non_rayleigh(cfg: &VerifyConfig) -> Result<Outcome, CliError> {
    let q = estimate_quad_stats(&cfg.run(SAMPLES)?)?;
    let r = non_rayleigh_check(&q);
    let pi4 = RayleighCheck::RAYLEIGH_RATIO;
    let z = r.ratio_tri.z_score(pi4);
    let checks = vec![
        Check::new(
            "triangle ratio away from pi/4",
            z.abs() > 5.0,
            format!("{:.4} ± {:.1e}, z = {z:+.1}", r.ratio_tri.mean, r.ratio_tri.stderr),
        ),
        Check::within_abs("quadrilateral ratio near pi/4", r.ratio_quad.mean, pi4, 0.05),
    ];
    let records = vec![
        OutputRecord::monte_carlo("rayleigh_ratio_triangle", &r.ratio_tri, cfg.seed, None),
        OutputRecord::monte_carlo("rayleigh_ratio_quad", &r.ratio_quad, cfg.seed, None),
    ];
    Ok(Outcome { id: 7, title: "non-Rayleigh side lengths", checks, records })
}

fn uniform(s: &mut GaussianStream, lo: f64, hi: f64) -> f64 {
    lo + (hi - lo) * s.uniform()
}

/// Largest deviation over a set of cases, as a single record.
fn worst(name: &str, dev: f64, tol: f64, cases: u64, checks: &mut Vec<Check>) -> OutputRecord {
    checks.push(Check::new(name, dev <= tol, format!("max deviation {dev:.1e} over {cases} cases, limit {tol:.0e}")));
    OutputRecord::quadrature(format!("max_deviation({name})"), dev, tol, cases, None)
}

/// Deterministic identity checks between independent evaluation routes.
/// Inputs come from fixed streams and do not depend on the run seed.
pub fn identities(_: &VerifyConfig) -> Result<Outcome, CliError> {
    let start = Instant::now();
    let mut checks = Vec::new();
    let mut records = Vec::new();

    let mut s = GaussianStream::new(1, 0);
    let (mut sym, mut unit_k, mut zero_h) = (0f64, 0f64, 0f64);
    for _ in 0..1000 {
        let h = uniform(&mut s, -3.0, 3.0);
        let k = uniform(&mut s, -3.0, 3.0);
        let t = owen_t(h, k)?;
        sym = sym.max((owen_t(-h, k)? - t).abs()).max((owen_t(h, -k)? + t).abs());
        let phi = std_normal_cdf(h)?;
        unit_k = unit_k.max((owen_t(h, 1.0)? - 0.5 * phi * (1.0 - phi)).abs());
        zero_h = zero_h.max((owen_t(0.0, k)? - k.atan() / (2.0 * PI)).abs());
    }
    records.push(worst("owen_t_symmetry", sym, 1e-10, 1000, &mut checks));
    records.push(worst("owen_t_unit_k", unit_k, 1e-10, 1000, &mut checks));
    records.push(worst("owen_t_zero_h", zero_h, 1e-10, 1000, &mut checks));

    let acc = AccuracySpec::default();
    let mut s = GaussianStream::new(2, 0);
    let mut dev = 0f64;
    for _ in 0..200 {
        let p = uniform(&mut s, 0.2, 3.0);
        let q = uniform(&mut s, -3.0, 3.0);
        dev = dev.max((erf_product_integral_closed(p, q)? - erf_product_integral_numeric(p, q, acc)?).abs());
    }
    records.push(worst("erf_product_closed_vs_numeric", dev, 1e-8, 200, &mut checks));

    let mut s = GaussianStream::new(3, 0);
    let mut dev = 0f64;
    for i in 0..200 {
        let a = uniform(&mut s, 0.05, 3.0);
        let b = uniform(&mut s, 0.05, 3.0);
        let c = uniform(&mut s, 0.05, 3.0);
        let (case, (a1, b1, c1)) = if i % 2 == 0 {
            (Case::First, (a, b, -c))
        } else {
            (Case::Second, (-a, -b, c))
        };
        let closed = case_probability(a1, b1, c1, case)?;
        dev = dev.max((closed - case_probability_via_owen_t(a1, b1, c1, case, acc)?).abs());
    }
    records.push(worst("case_probability_owen_t_vs_arctan", dev, 1e-8, 200, &mut checks));

    let exact = (2.0 * PI).powf(1.5) / 8.0;
    let acc = AccuracySpec::new(1e-10, 1e-10)?;
    let mut dev = 0f64;
    for oct in Octant3::all() {
        let r = integrate_octant3(|u, v, w| (-(u * u + v * v + w * w) / 2.0).exp(), oct, acc)?;
        dev = dev.max((r.value - exact).abs());
    }
    records.push(worst("gaussian_octant_cubature", dev, 1e-9, 8, &mut checks));

    let secs = start.elapsed().as_secs_f64();
    checks.push(Check::new("runtime", secs < 10.0, format!("{secs:.2} s of 10 s")));
    Ok(Outcome { id: 8, title: "identity suite", checks, records })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn criteria_lookup() {
        assert!(criterion(1).is_some() && criterion(8).is_some());
        assert!(criterion(0).is_none() && criterion(9).is_none());
        let ids: Vec<_> = CRITERIA.iter().map(|(i, _)| *i).collect();
        assert_eq!(ids, (1..=8).collect::<Vec<_>>());
    }

    #[test]
    fn published_constants_agree_with_closed_forms() {
        let k = constants();
        assert_eq!(published_constant("theta"), Some(0.649_040_687_816_356_4));
        assert_eq!(published_constant("nope"), None);
        let t = published_constant("expected_perimeter_triangle").unwrap();
        assert!((t - k.expected_perimeter_triangle).abs() < 1e-15);
    }

    #[test]
    fn outcome_line_lists_failures() {
        let mut o = Outcome {
            id: 4,
            title: "demo",
            checks: vec![Check::new("a", true, "fine"), Check::new("b", false, "off by 2")],
            records: Vec::new(),
        };
        assert_eq!(o.to_string(), "criterion 4 [FAIL] demo (1/2 checks); failed b: off by 2");
        o.checks.pop();
        assert!(o.passed());
        assert_eq!(o.to_string(), "criterion 4 [PASS] demo (1/1 checks)");
    }

    #[test]
    fn closed_form_criteria_pass() {
        let cfg = VerifyConfig { seed: 1, workers: 1, tol: 1e-7 };
        assert!(published_constants(&cfg).unwrap().passed());
        let ids = identities(&cfg).unwrap();
        assert!(ids.passed(), "{ids}");
        assert_eq!(ids.records.len(), 6);
    }
}
