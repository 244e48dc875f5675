//! Closed-form constants, densities and the cubature route to the capture
//! probability of a fixed location by a Gaussian triangle.
//!
//! Translating the location to the origin turns the vertices into
//! `N(-ξ, 1)` points. Conditioning on the first coordinates `(a1, b1, c1)`
//! of the vertices, the three second coordinates integrate out in closed form
//! (see [`case_probability`]), leaving two triple integrals over octants,
//! evaluated by [`crate::quadrature::integrate_octant3`].

use std::f64::consts::{FRAC_1_SQRT_2, PI};

use crate::error::{ensure_finite, Error, Result};
use crate::quadrature::{self, integrate_octant3, Octant3, Sign};
use crate::special_fn::{owen_t_with, AccuracySpec};

/// `arcsec(x) = arccos(1/x)`.
pub fn arcsec(x: f64) -> f64 {
    (1.0 / x).acos()
}

/// Closed-form constants for Gaussian points.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Constants {
    /// Probability that four planar Gaussian points are in convex position,
    /// `3 - 6 arcsec(3) / π`.
    pub theta: f64,
    pub one_minus_theta: f64,
    /// Expected probability content of a Gaussian triangle, `(1 - θ) / 4`.
    pub expected_content_2d: f64,
    /// Expected probability content of a Gaussian tetrahedron,
    /// `-2/5 + arcsec(4) / π`.
    pub gaussian_volume_3d: f64,
    /// Variance of the median of three standard normals, `1 - √3 / π`.
    pub median_variance_1d: f64,
    pub expected_area_quad: f64,
    /// `(3 + θ) √π`.
    pub expected_perimeter_quad: f64,
    pub expected_area_triangle: f64,
    pub expected_perimeter_triangle: f64,
}

pub fn constants() -> Constants {
    let theta = 3.0 - 6.0 * arcsec(3.0) / PI;
    let sqrt_pi = PI.sqrt();
    Constants {
        theta,
        one_minus_theta: 1.0 - theta,
        expected_content_2d: (1.0 - theta) / 4.0,
        gaussian_volume_3d: -0.4 + arcsec(4.0) / PI,
        median_variance_1d: 1.0 - 3f64.sqrt() / PI,
        expected_area_quad: 3f64.sqrt(),
        expected_perimeter_quad: (3.0 + theta) * sqrt_pi,
        expected_area_triangle: 3f64.sqrt() / 2.0,
        expected_perimeter_triangle: 3.0 * sqrt_pi,
    }
}

/// Published capture probabilities `(ξ, P)` of the location `(ξ, 0)`, six decimals.
pub const CAPTURE_REFERENCE: [(f64, f64); 5] = [
    (0.0, 0.250000),
    (0.5, 0.197171),
    (1.0, 0.098289),
    (1.5, 0.032455),
    (2.0, 0.007626),
];

/// Looks up the published capture probability at `xi`, if tabulated.
pub fn capture_reference(xi: f64) -> Option<f64> {
    CAPTURE_REFERENCE
        .iter()
        .find(|(x, _)| (x - xi.abs()).abs() < 1e-12)
        .map(|&(_, p)| p)
}

/// Sign pattern of the first coordinates `(a1, b1, c1)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Case {
    /// `a1 > 0, b1 > 0, c1 < 0`.
    First,
    /// `a1 < 0, b1 < 0, c1 > 0`.
    Second,
}

impl Case {
    fn admits(self, a1: f64, b1: f64, c1: f64) -> bool {
        match self {
            Case::First => a1 > 0.0 && b1 > 0.0 && c1 < 0.0,
            Case::Second => a1 < 0.0 && b1 < 0.0 && c1 > 0.0,
        }
    }

    fn sign(self) -> f64 {
        match self {
            Case::First => 1.0,
            Case::Second => -1.0,
        }
    }
}

/// `arctan(a1 b1 / (c1 √(a1² + b1² + c1²)))`.
fn capture_angle(a1: f64, b1: f64, c1: f64) -> f64 {
    let r = (a1 * a1 + b1 * b1 + c1 * c1).sqrt();
    (a1 * b1 / (c1 * r)).atan()
}

/// Conditional probability, given first coordinates `(a1, b1, c1)` in the
/// octant of `case`, that the second coordinates put the origin inside the
/// triangle with one fixed orientation:
/// `1/4 ± arctan(a1 b1 / (c1 √(a1²+b1²+c1²))) / 2π`.
pub fn case_probability(a1: f64, b1: f64, c1: f64, case: Case) -> Result<f64> {
    ensure_finite("case_probability", &[a1, b1, c1])?;
    if !case.admits(a1, b1, c1) {
        return Err(Error::domain(
            "case_probability",
            format!("({a1}, {b1}, {c1}) violates the sign pattern of {case:?}"),
        ));
    }
    Ok(0.25 + case.sign() * capture_angle(a1, b1, c1) / (2.0 * PI))
}

/// [`case_probability`] by the unsimplified route
/// `1/4 + (1/√π) ∫ exp(-t²) T(t z, w) dt` with `z = √2 c1/a1`, `w = b1/c1`,
/// integrating Owen's T numerically. Used to cross-check the arctan form.
pub fn case_probability_via_owen_t(
    a1: f64,
    b1: f64,
    c1: f64,
    case: Case,
    acc: AccuracySpec,
) -> Result<f64> {
    ensure_finite("case_probability_via_owen_t", &[a1, b1, c1])?;
    if !case.admits(a1, b1, c1) {
        return Err(Error::domain(
            "case_probability_via_owen_t",
            format!("({a1}, {b1}, {c1}) violates the sign pattern of {case:?}"),
        ));
    }
    let z = 2f64.sqrt() * c1 / a1;
    let w = b1 / c1;
    let inner = AccuracySpec::new(acc.abs_tol() * 1e-2, acc.rel_tol() * 1e-2)?;
    // An inner failure surfaces as a non-finite integrand, which the outer
    // integrator reports as an error.
    let r = quadrature::integrate_real_line(
        |t| {
            let e = (-t * t).exp();
            if e == 0.0 {
                return 0.0;
            }
            owen_t_with(t * z, w, inner).map_or(f64::NAN, |v| e * v)
        },
        acc,
    )?;
    Ok(0.25 + r.value / PI.sqrt())
}

/// Branch of the capture integrand.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Branch {
    /// Over `a1 > 0, b1 > 0, c1 < 0`.
    Phi,
    /// Over `a1 < 0, b1 < 0, c1 > 0`.
    Psi,
}

impl Branch {
    pub fn octant(self) -> Octant3 {
        use Sign::*;
        match self {
            Branch::Phi => Octant3::new([Positive, Positive, Negative]),
            Branch::Psi => Octant3::new([Negative, Negative, Positive]),
        }
    }

    fn case(self) -> Case {
        match self {
            Branch::Phi => Case::First,
            Branch::Psi => Case::Second,
        }
    }
}

#[inline]
fn integrand_unchecked(a1: f64, b1: f64, c1: f64, xi: f64, branch: Branch) -> f64 {
    let (a, b, c) = (a1 + xi, b1 + xi, c1 + xi);
    let gauss = (-0.5 * (a * a + b * b + c * c)).exp();
    if gauss == 0.0 {
        return 0.0;
    }
    let bracket = if c1 == 0.0 {
        // One-sided limit: the angle tends to -π/2 (phi) or +π/2 (psi), so
        // the bracket vanishes on both branches.
        0.0
    } else {
        let angle = capture_angle(a1, b1, c1);
        match branch {
            Branch::Phi => PI + 2.0 * angle,
            Branch::Psi => PI - 2.0 * angle,
        }
    };
    gauss * bracket
}

/// `exp(-((a1+ξ)² + (b1+ξ)² + (c1+ξ)²)/2) · [π ± 2 arctan(a1 b1 / (c1 √(a1²+b1²+c1²)))]`,
/// `+` for [`Branch::Phi`], `-` for [`Branch::Psi`].
///
/// On the face `c1 = 0` the bracket is replaced by its one-sided limit,
/// which is `0` on both branches (`a1 b1 > 0` there, so the angle tends to
/// `∓π/2`).
pub fn capture_integrand(a1: f64, b1: f64, c1: f64, xi: f64, branch: Branch) -> Result<f64> {
    ensure_finite("capture_integrand", &[a1, b1, c1, xi])?;
    let ok = match branch.case() {
        Case::First => a1 > 0.0 && b1 > 0.0 && c1 <= 0.0,
        Case::Second => a1 < 0.0 && b1 < 0.0 && c1 >= 0.0,
    };
    if !ok {
        return Err(Error::domain(
            "capture_integrand",
            format!("({a1}, {b1}, {c1}) is outside the {branch:?} octant"),
        ));
    }
    Ok(integrand_unchecked(a1, b1, c1, xi, branch))
}

/// Default absolute tolerance for [`capture_probability`].
pub const CAPTURE_ABS_TOL: f64 = 1e-7;

pub fn default_capture_accuracy() -> AccuracySpec {
    AccuracySpec::new(CAPTURE_ABS_TOL, CAPTURE_ABS_TOL).expect("positive tolerances")
}

/// Normalising factor `3 / (2π)^{5/2}` in front of the two octant integrals.
pub fn capture_prefactor() -> f64 {
    3.0 / (2.0 * PI).powf(2.5)
}

/// A capture probability with its propagated cubature error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CaptureProbability {
    pub xi: f64,
    pub value: f64,
    pub error_estimate: f64,
    pub evaluations: usize,
}

/// Probability that the triangle on three standard Gaussian points captures
/// the location `(ξ, 0)`.
pub fn capture_probability(xi: f64, acc: AccuracySpec) -> Result<f64> {
    capture_probability_detailed(xi, acc).map(|c| c.value)
}

/// [`capture_probability`] with the cubature error estimate and cost.
pub fn capture_probability_detailed(xi: f64, acc: AccuracySpec) -> Result<CaptureProbability> {
    ensure_finite("capture_probability", &[xi])?;
    let scale = capture_prefactor();
    // Split the budget evenly between the two octant integrals.
    let per = AccuracySpec::new(0.5 * acc.abs_tol() / scale, acc.rel_tol())?;
    let mut value = 0.0;
    let mut error_estimate = 0.0;
    let mut evaluations = 0;
    for branch in [Branch::Phi, Branch::Psi] {
        let r = integrate_octant3(
            |a, b, c| integrand_unchecked(a, b, c, xi, branch),
            branch.octant(),
            per,
        )
        .map_err(|e| match e {
            Error::Accuracy {
                value,
                error_estimate,
                evaluations,
            } => Error::Accuracy {
                value: value * scale,
                error_estimate: error_estimate * scale,
                evaluations,
            },
            other => other,
        })?;
        value += r.value;
        error_estimate += r.error_estimate;
        evaluations += r.evaluations;
    }
    Ok(CaptureProbability {
        xi,
        value: value * scale,
        error_estimate: error_estimate * scale,
        evaluations,
    })
}

/// Capture probability of the location `(ξ, η)`; by circular symmetry it
/// depends on the radius `√(ξ² + η²)` only.
pub fn capture_probability_at(xi: f64, eta: f64, acc: AccuracySpec) -> Result<f64> {
    ensure_finite("capture_probability_at", &[xi, eta])?;
    capture_probability(xi.hypot(eta), acc)
}

/// Density of the median of three standard normals:
/// `3/(2√(2π)) · exp(-x²/2) · (1 - erf(x/√2)²)`.
pub fn median_density_1d(x: f64) -> f64 {
    let e = libm::erf(x * FRAC_1_SQRT_2);
    3.0 / (2.0 * (2.0 * PI).sqrt()) * (-0.5 * x * x).exp() * (1.0 - e * e)
}

/// Normal density with mean zero and the median's variance `1 - √3/π`.
pub fn median_reference_density_1d(x: f64) -> f64 {
    let var = constants().median_variance_1d;
    (-0.5 * x * x / var).exp() / (2.0 * PI * var).sqrt()
}

/// Largest gap `|median - reference|` on a uniform grid of `points` nodes
/// over `[lo, hi]`, with the abscissa where it occurs.
pub fn median_density_gap(lo: f64, hi: f64, points: usize) -> (f64, f64) {
    let n = points.max(2);
    (0..n)
        .map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64)
        .map(|x| ((median_density_1d(x) - median_reference_density_1d(x)).abs(), x))
        .fold((0.0, lo), |best, cur| if cur.0 > best.0 { cur } else { best })
}
