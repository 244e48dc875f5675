//! Scalar special functions: the error function, the standard normal
//! distribution, Owen's T function, and the integral
//! `∫ exp(-p²t²) erf(t) erf(qt) dt` over the real line.

use std::f64::consts::{FRAC_1_SQRT_2, PI};

use crate::error::{ensure_finite, Error, Result};
use crate::quadrature;

/// Absolute and relative tolerance pair for numeric evaluation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AccuracySpec {
    abs_tol: f64,
    rel_tol: f64,
}

impl AccuracySpec {
    pub const DEFAULT_ABS_TOL: f64 = 1e-10;
    pub const DEFAULT_REL_TOL: f64 = 1e-10;

    /// Both tolerances must be strictly positive and finite.
    pub fn new(abs_tol: f64, rel_tol: f64) -> Result<Self> {
        let ok = |t: f64| t.is_finite() && t > 0.0;
        if ok(abs_tol) && ok(rel_tol) {
            Ok(Self { abs_tol, rel_tol })
        } else {
            Err(Error::Config(format!(
                "tolerances must be positive and finite (abs {abs_tol}, rel {rel_tol})"
            )))
        }
    }

    pub fn abs_tol(&self) -> f64 {
        self.abs_tol
    }

    pub fn rel_tol(&self) -> f64 {
        self.rel_tol
    }

    /// The error allowed for an estimate of magnitude `value`.
    pub fn tolerance(&self, value: f64) -> f64 {
        self.abs_tol.max(self.rel_tol * value.abs())
    }
}

impl Default for AccuracySpec {
    fn default() -> Self {
        Self {
            abs_tol: Self::DEFAULT_ABS_TOL,
            rel_tol: Self::DEFAULT_REL_TOL,
        }
    }
}

/// Target absolute accuracy of [`owen_t`].
pub const OWEN_T_ABS_TOL: f64 = 1e-12;

/// The error function. Backed by the `libm` port of the FreeBSD routine,
/// which stays within one ulp over the real line.
pub fn erf(x: f64) -> Result<f64> {
    ensure_finite("erf", &[x])?;
    Ok(libm::erf(x))
}

pub fn std_normal_pdf(x: f64) -> Result<f64> {
    ensure_finite("std_normal_pdf", &[x])?;
    Ok(normal_pdf(x))
}

/// `Φ(x) = (1 + erf(x/√2)) / 2`, evaluated through `erfc` in the lower tail.
pub fn std_normal_cdf(x: f64) -> Result<f64> {
    ensure_finite("std_normal_cdf", &[x])?;
    Ok(normal_cdf(x))
}

pub(crate) fn normal_pdf(x: f64) -> f64 {
    (-0.5 * x * x).exp() / (2.0 * PI).sqrt()
}

pub(crate) fn normal_cdf(x: f64) -> f64 {
    0.5 * libm::erfc(-x * FRAC_1_SQRT_2)
}

/// Owen's T function
/// `T(h, k) = (1/2π) ∫₀ᵏ exp(-h²(1+s²)/2) / (1+s²) ds`,
/// to [`OWEN_T_ABS_TOL`].
pub fn owen_t(h: f64, k: f64) -> Result<f64> {
    owen_t_with(h, k, AccuracySpec::new(OWEN_T_ABS_TOL, OWEN_T_ABS_TOL)?)
}

/// Owen's T by adaptive quadrature of the defining integral.
///
/// The substitution `s = tan θ` turns `ds / (1+s²)` into `dθ`, so the range
/// becomes `[0, arctan k] ⊂ (-π/2, π/2)` with integrand
/// `exp(-h² / (2 cos²θ))`, bounded by one for every `k`.
pub fn owen_t_with(h: f64, k: f64, acc: AccuracySpec) -> Result<f64> {
    ensure_finite("owen_t", &[h, k])?;
    if k == 0.0 {
        return Ok(0.0);
    }
    let half_h2 = 0.5 * h * h;
    let scaled = AccuracySpec::new(acc.abs_tol() * 2.0 * PI, acc.rel_tol())?;
    let r = quadrature::integrate(
        |theta: f64| {
            let c = theta.cos();
            (-half_h2 / (c * c)).exp()
        },
        0.0,
        k.atan(),
        scaled,
    )?;
    Ok(r.value / (2.0 * PI))
}

/// Closed form of `∫ exp(-p²t²) erf(t) erf(qt) dt` over the real line:
/// `(2 / (√π p)) · arctan(q / (p √(1+p²+q²)))`.
pub fn erf_product_integral_closed(p: f64, q: f64) -> Result<f64> {
    ensure_finite("erf_product_integral_closed", &[p, q])?;
    if p == 0.0 {
        return Err(Error::domain(
            "erf_product_integral_closed",
            "p = 0: the integral diverges",
        ));
    }
    let root = (1.0 + p * p + q * q).sqrt();
    Ok(2.0 / (PI.sqrt() * p) * (q / (p * root)).atan())
}

/// The same integral evaluated numerically on the compactified real line.
pub fn erf_product_integral_numeric(p: f64, q: f64, acc: AccuracySpec) -> Result<f64> {
    ensure_finite("erf_product_integral_numeric", &[p, q])?;
    if p == 0.0 {
        return Err(Error::domain(
            "erf_product_integral_numeric",
            "p = 0: the integral diverges",
        ));
    }
    let p2 = p * p;
    let r = quadrature::integrate_real_line(
        |t| (-p2 * t * t).exp() * libm::erf(t) * libm::erf(q * t),
        acc,
    )?;
    Ok(r.value)
}
