//! Adaptive quadrature in one dimension and adaptive cubature over sign
//! octants of R³.
//!
//! Both integrators are globally adaptive: the region with the largest error
//! estimate is refined first, and refinement stops once the summed error
//! estimate meets `max(abs_tol, rel_tol * |value|)`. Ties in the work queue are
//! broken by creation order, so results are bit-identical for fixed inputs.

use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::sync::OnceLock;

use crate::error::{Error, Result};
use crate::special_fn::AccuracySpec;

/// Evaluation budget for [`integrate_octant3`].
pub const CUBATURE_MAX_EVALUATIONS: usize = 10_000_000;

/// Evaluation budget for the 1D integrators.
pub const QUAD_MAX_EVALUATIONS: usize = 200_000;

/// Gauss–Legendre order per axis of a cubature panel.
const PANEL_ORDER: usize = 5;

/// Nodes and weights of the `n`-point Gauss–Legendre rule on [-1, 1].
///
/// Roots are found by Newton iteration on the three-term recurrence, seeded
/// with the Chebyshev-like approximation `cos(pi (i + 3/4) / (n + 1/2))`.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 1, "rule needs at least one node");
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let nf = n as f64;
    for i in 0..n.div_ceil(2) {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre_with_derivative(n, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let (_, d) = legendre_with_derivative(n, x);
        if d != 0.0 {
            dp = d;
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    if n % 2 == 1 {
        nodes[n / 2] = 0.0;
    }
    (nodes, weights)
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    if n == 0 {
        return (1.0, 0.0);
    }
    let nf = n as f64;
    (p1, nf * (x * p1 - p0) / (x * x - 1.0))
}

// Gauss–Kronrod 7/15 pair (abscissae on [0, 1), symmetric).
const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.000_000_000_000_000_000_000_000_000_000_000,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

/// Result of a 1D integration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadResult {
    pub value: f64,
    pub error_estimate: f64,
    pub evaluations: usize,
}

fn gk15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> (f64, f64) {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut kronrod = fc * WGK[7];
    let mut gauss = fc * WG[3];
    for j in 0..7 {
        let dx = half * XGK[j];
        let sum = f(center - dx) + f(center + dx);
        kronrod += WGK[j] * sum;
        if j % 2 == 1 {
            gauss += WG[j / 2] * sum;
        }
    }
    let value = kronrod * half;
    (value, ((kronrod - gauss) * half).abs())
}

/// A work item ordered by error estimate, then by creation order.
struct Work<T> {
    err: f64,
    id: usize,
    item: T,
}

impl<T> PartialEq for Work<T> {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}
impl<T> Eq for Work<T> {}
impl<T> PartialOrd for Work<T> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl<T> Ord for Work<T> {
    fn cmp(&self, other: &Self) -> Ordering {
        self.err
            .total_cmp(&other.err)
            .then_with(|| other.id.cmp(&self.id))
    }
}

/// Sums value and error over the work queue in creation order.
fn settle<T>(heap: &BinaryHeap<Work<T>>, value: impl Fn(&T) -> f64) -> (f64, f64) {
    let mut items: Vec<&Work<T>> = heap.iter().collect();
    items.sort_by_key(|w| w.id);
    items
        .iter()
        .fold((0.0, 0.0), |(v, e), w| (v + value(&w.item), e + w.err))
}

/// Adaptive Gauss–Kronrod (7/15) integration of `f` over the finite interval `[a, b]`.
pub fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, acc: AccuracySpec) -> Result<QuadResult> {
    if !(a.is_finite() && b.is_finite()) {
        return Err(Error::domain("integrate", "interval endpoints must be finite"));
    }
    if a == b {
        return Ok(QuadResult {
            value: 0.0,
            error_estimate: 0.0,
            evaluations: 0,
        });
    }
    if a > b {
        return match integrate(f, b, a, acc) {
            Ok(r) => Ok(QuadResult { value: -r.value, ..r }),
            Err(Error::Accuracy {
                value,
                error_estimate,
                evaluations,
            }) => Err(Error::Accuracy {
                value: -value,
                error_estimate,
                evaluations,
            }),
            Err(e) => Err(e),
        };
    }
    let mut heap = BinaryHeap::new();
    let mut next_id = 0;
    let mut evaluations = 0;
    let mut total = 0.0;
    let mut total_err = 0.0;
    let mut push = |heap: &mut BinaryHeap<Work<(f64, f64, f64)>>, lo: f64, hi: f64| {
        let (v, e) = gk15(&f, lo, hi);
        heap.push(Work {
            err: e,
            id: next_id,
            item: (lo, hi, v),
        });
        next_id += 1;
        (v, e)
    };
    let (v, e) = push(&mut heap, a, b);
    evaluations += 15;
    total += v;
    total_err += e;

    loop {
        if !total.is_finite() || !total_err.is_finite() {
            return Err(Error::domain("integrate", "integrand produced a non-finite value"));
        }
        if total_err <= acc.tolerance(total) {
            break;
        }
        let Some(worst) = heap.pop() else { break };
        let (lo, hi, v) = worst.item;
        let mid = 0.5 * (lo + hi);
        if evaluations + 30 > QUAD_MAX_EVALUATIONS || mid <= lo || mid >= hi {
            heap.push(worst);
            let (value, error_estimate) = settle(&heap, |it| it.2);
            return Err(Error::Accuracy {
                value,
                error_estimate,
                evaluations,
            });
        }
        let (v1, e1) = push(&mut heap, lo, mid);
        let (v2, e2) = push(&mut heap, mid, hi);
        evaluations += 30;
        total += v1 + v2 - v;
        total_err += e1 + e2 - worst.err;
    }
    let (value, error_estimate) = settle(&heap, |it| it.2);
    Ok(QuadResult {
        value,
        error_estimate,
        evaluations,
    })
}

/// Integrates `f` over the whole real line via `t = u / (1 - u²)`, `u ∈ (-1, 1)`.
pub fn integrate_real_line<F: Fn(f64) -> f64>(f: F, acc: AccuracySpec) -> Result<QuadResult> {
    integrate(
        |u| {
            let d = 1.0 - u * u;
            let t = u / d;
            let v = f(t);
            if v == 0.0 {
                0.0
            } else {
                v * (1.0 + u * u) / (d * d)
            }
        },
        -1.0,
        1.0,
        acc,
    )
}

/// Sign of one axis of an octant.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Sign {
    Positive,
    Negative,
}

impl Sign {
    fn factor(self) -> f64 {
        match self {
            Sign::Positive => 1.0,
            Sign::Negative => -1.0,
        }
    }
}

/// One of the eight sign-constrained octants of R³.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Octant3 {
    pub signs: [Sign; 3],
}

impl Octant3 {
    pub const fn new(signs: [Sign; 3]) -> Self {
        Self { signs }
    }

    /// All eight octants, `+++` first, in binary order of negative axes.
    pub fn all() -> [Octant3; 8] {
        std::array::from_fn(|bits| {
            Octant3::new(std::array::from_fn(|axis| {
                if bits >> (2 - axis) & 1 == 1 {
                    Sign::Negative
                } else {
                    Sign::Positive
                }
            }))
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CubatureResult {
    pub value: f64,
    pub error_estimate: f64,
    pub evaluations: usize,
}

#[derive(Clone, Copy)]
struct Panel {
    lo: [f64; 3],
    width: [f64; 3],
}

impl Panel {
    fn halves(&self, axis: usize) -> (Panel, Panel) {
        let mut width = self.width;
        width[axis] *= 0.5;
        let mut lo = self.lo;
        let first = Panel { lo, width };
        lo[axis] += width[axis];
        (first, Panel { lo, width })
    }
}

/// A panel whose value is known together with its best bisection.
struct Refined {
    axis: usize,
    halves: [(Panel, f64); 2],
}

fn panel_rule() -> &'static (Vec<f64>, Vec<f64>) {
    static RULE: OnceLock<(Vec<f64>, Vec<f64>)> = OnceLock::new();
    RULE.get_or_init(|| {
        let (x, w) = gauss_legendre(PANEL_ORDER);
        // Map to [0, 1].
        (
            x.iter().map(|x| 0.5 * (x + 1.0)).collect(),
            w.iter().map(|w| 0.5 * w).collect(),
        )
    })
}

/// Integrates `f` over the octant `oct`, meeting
/// `|true - value| <= max(abs_tol, rel_tol * |value|)` for smooth integrands
/// with Gaussian decay.
///
/// Each semi-infinite axis is compactified by `x = s / (1 - s)`, `s ∈ (0, 1)`,
/// negative axes by mirroring. The unit cube is covered by tensor
/// Gauss–Legendre panels; a panel's error is estimated by comparing it with
/// its two halves along each axis, and the worst panel is bisected along the
/// axis where the halves disagree most. Nodes are interior to every panel, so
/// the integrand is never evaluated on the octant's boundary faces.
pub fn integrate_octant3<F>(f: F, oct: Octant3, acc: AccuracySpec) -> Result<CubatureResult>
where
    F: Fn(f64, f64, f64) -> f64,
{
    let sign = oct.signs.map(Sign::factor);
    let (nodes, weights) = panel_rule();
    let evals_per_panel = nodes.len().pow(3);
    let g = |s: [f64; 3]| -> f64 {
        let mut x = [0.0; 3];
        let mut jac = 1.0;
        for k in 0..3 {
            let d = 1.0 - s[k];
            x[k] = sign[k] * s[k] / d;
            jac /= d * d;
        }
        let v = f(x[0], x[1], x[2]);
        if v == 0.0 {
            0.0
        } else {
            v * jac
        }
    };
    let apply = |p: &Panel| -> f64 {
        let mut sum = 0.0;
        for (xi, wi) in nodes.iter().zip(weights) {
            let s0 = p.lo[0] + p.width[0] * xi;
            for (xj, wj) in nodes.iter().zip(weights) {
                let s1 = p.lo[1] + p.width[1] * xj;
                let mut inner = 0.0;
                for (xk, wk) in nodes.iter().zip(weights) {
                    inner += wk * g([s0, s1, p.lo[2] + p.width[2] * xk]);
                }
                sum += wi * wj * inner;
            }
        }
        sum * p.width[0] * p.width[1] * p.width[2]
    };
    let refine = |p: Panel, whole: f64| -> (Refined, f64) {
        let mut best: Option<(Refined, f64)> = None;
        for axis in 0..3 {
            let (a, b) = p.halves(axis);
            let (va, vb) = (apply(&a), apply(&b));
            let diff = (va + vb - whole).abs();
            if best.as_ref().is_none_or(|(_, d)| diff > *d) {
                best = Some((
                    Refined {
                        axis,
                        halves: [(a, va), (b, vb)],
                    },
                    diff,
                ));
            }
        }
        best.expect("three axes tried")
    };

    let refine_cost = 6 * evals_per_panel;
    let mut evaluations = 0usize;
    let mut heap: BinaryHeap<Work<Refined>> = BinaryHeap::new();
    let mut next_id = 0usize;
    let mut total = 0.0;
    let mut total_err = 0.0;

    // Uniform 4x4x4 start so features away from the origin are seen.
    const START: usize = 4;
    let step = 1.0 / START as f64;
    let mut start_evals = 0;
    for i in 0..START {
        for j in 0..START {
            for k in 0..START {
                let p = Panel {
                    lo: [i as f64 * step, j as f64 * step, k as f64 * step],
                    width: [step; 3],
                };
                let whole = apply(&p);
                start_evals += evals_per_panel;
                let (r, err) = refine(p, whole);
                evaluations += refine_cost;
                total += r.halves[0].1 + r.halves[1].1;
                total_err += err;
                heap.push(Work {
                    err,
                    id: next_id,
                    item: r,
                });
                next_id += 1;
            }
        }
    }
    let refined_value = |r: &Refined| r.halves[0].1 + r.halves[1].1;
    let tol = |v: f64| acc.tolerance(v);

    loop {
        if !total.is_finite() || !total_err.is_finite() {
            return Err(Error::domain(
                "integrate_octant3",
                "integrand produced a non-finite value",
            ));
        }
        if total_err <= tol(total) {
            // Guard against drift in the running sums.
            let (v, e) = settle(&heap, refined_value);
            if e <= tol(v) {
                break;
            }
        }
        if evaluations + start_evals + 12 * evals_per_panel > CUBATURE_MAX_EVALUATIONS {
            let (value, error_estimate) = settle(&heap, refined_value);
            return Err(Error::Accuracy {
                value,
                error_estimate,
                evaluations: evaluations + start_evals,
            });
        }
        let Some(worst) = heap.pop() else { break };
        total -= refined_value(&worst.item);
        total_err -= worst.err;
        debug_assert!(worst.item.axis < 3);
        for (panel, whole) in worst.item.halves {
            let (r, err) = refine(panel, whole);
            evaluations += refine_cost;
            total += refined_value(&r);
            total_err += err;
            heap.push(Work {
                err,
                id: next_id,
                item: r,
            });
            next_id += 1;
        }
    }
    let (value, error_estimate) = settle(&heap, refined_value);
    Ok(CubatureResult {
        value,
        error_estimate,
        evaluations: evaluations + start_evals,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn tight() -> AccuracySpec {
        AccuracySpec::new(1e-12, 1e-12).unwrap()
    }

    #[test]
    fn gauss_legendre_integrates_polynomials_exactly() {
        for n in 1..=12 {
            let (x, w) = gauss_legendre(n);
            assert!((w.iter().sum::<f64>() - 2.0).abs() < 1e-14);
            for deg in 0..(2 * n) {
                let approx: f64 = x.iter().zip(&w).map(|(x, w)| w * x.powi(deg as i32)).sum();
                let exact = if deg % 2 == 1 { 0.0 } else { 2.0 / (deg as f64 + 1.0) };
                assert!((approx - exact).abs() < 1e-13, "n={n} deg={deg}");
            }
        }
    }

    #[test]
    fn finite_interval() {
        let r = integrate(|x| x.sin(), 0.0, PI, tight()).unwrap();
        assert!((r.value - 2.0).abs() < 1e-13);
        let r = integrate(|x| 1.0 / (1.0 + x * x), 0.0, 1e3, tight()).unwrap();
        assert!((r.value - 1e3f64.atan()).abs() < 1e-11);
    }

    #[test]
    fn reversed_interval_flips_sign() {
        let f = |x: f64| x.exp();
        let fwd = integrate(f, 0.0, 1.0, tight()).unwrap().value;
        let rev = integrate(f, 1.0, 0.0, tight()).unwrap().value;
        assert_eq!(fwd, -rev);
    }

    #[test]
    fn empty_interval_is_zero() {
        let r = integrate(|x| x, 2.0, 2.0, tight()).unwrap();
        assert_eq!(r.value, 0.0);
    }

    #[test]
    fn real_line_gaussian() {
        let r = integrate_real_line(|t| (-t * t).exp(), tight()).unwrap();
        assert!((r.value - PI.sqrt()).abs() < 1e-12);
        let r = integrate_real_line(|t| t * t * (-0.01 * t * t).exp(), tight()).unwrap();
        // ∫ t² e^{-a t²} = √π / (2 a^{3/2})
        assert!((r.value - PI.sqrt() / (2.0 * 0.001)).abs() < 1e-7);
    }

    #[test]
    fn budget_exhaustion_reports_best_value() {
        let acc = AccuracySpec::new(1e-300, 1e-300).unwrap();
        let err = integrate(|x: f64| x.sqrt().recip(), 0.0, 1.0, acc).unwrap_err();
        let Error::Accuracy { value, .. } = err else {
            panic!("expected an accuracy error, got {err:?}");
        };
        assert!((value - 2.0).abs() < 1e-3);
    }

    #[test]
    fn non_finite_integrand_is_rejected() {
        let acc = AccuracySpec::default();
        assert!(integrate(|_| f64::NAN, 0.0, 1.0, acc).is_err());
    }

    #[test]
    fn octant_listing_covers_every_sign_pattern() {
        let all = Octant3::all();
        for (i, a) in all.iter().enumerate() {
            for b in &all[i + 1..] {
                assert_ne!(a, b);
            }
        }
        assert_eq!(all[0].signs, [Sign::Positive; 3]);
        assert_eq!(all[7].signs, [Sign::Negative; 3]);
    }

    #[test]
    fn gaussian_octant_mass() {
        let acc = AccuracySpec::new(1e-11, 1e-11).unwrap();
        let exact = (2.0 * PI).powf(1.5) / 8.0;
        for oct in Octant3::all() {
            let r = integrate_octant3(
                |u, v, w| (-(u * u + v * v + w * w) / 2.0).exp(),
                oct,
                acc,
            )
            .unwrap();
            assert!((r.value - exact).abs() < 1e-9, "{oct:?}: {}", r.value - exact);
            assert!(r.error_estimate >= 0.0 && r.evaluations >= 1);
        }
    }

    #[test]
    fn octant_moments_against_closed_forms() {
        // ∫₀^∞ u² e^{-u²/2} du = √(π/2); ∫₀^∞ u e^{-u²/2} du = 1.
        let acc = AccuracySpec::new(1e-10, 1e-10).unwrap();
        let half = (PI / 2.0).sqrt();
        let oct = Octant3::new([Sign::Positive, Sign::Negative, Sign::Positive]);
        let r = integrate_octant3(
            |u, v, w| u * u * (-v) * (-(u * u + v * v + w * w) / 2.0).exp(),
            oct,
            acc,
        )
        .unwrap();
        let exact = half * 1.0 * half;
        assert!((r.value - exact).abs() <= r.error_estimate.max(1e-10));
    }

    #[test]
    fn cubature_is_deterministic() {
        let acc = AccuracySpec::new(1e-8, 1e-8).unwrap();
        let f = |u: f64, v: f64, w: f64| (-(u * u + 2.0 * v * v + 0.5 * w * w)).exp() * (u + v).cos();
        let oct = Octant3::new([Sign::Negative, Sign::Positive, Sign::Negative]);
        let a = integrate_octant3(f, oct, acc).unwrap();
        let b = integrate_octant3(f, oct, acc).unwrap();
        assert_eq!(a, b);
    }
}
