//! Command-line front end for `gausscap`.
//!
//! Every subcommand prints [`OutputRecord`]s to standard output as JSON
//! lines or CSV. `verify` additionally writes one status line per
//! acceptance criterion to standard error.

use std::io::{self, Write};
use std::thread;

use clap::{Parser, Subcommand, ValueEnum};
use gausscap::analytic::{
    capture_probability_detailed, capture_reference, constants, median_density_1d,
    median_density_gap, median_reference_density_1d,
};
use gausscap::monte_carlo::{
    estimate_capture, estimate_content_variance_2d, estimate_expected_content,
    estimate_inner_point_variance_2d, estimate_median_stats_1d, estimate_quad_stats,
    estimate_triangle_stats, non_rayleigh_check, Estimate, RunConfig, DEFAULT_SAMPLES,
    DEFAULT_SEED, DEFAULT_VARIANCE_PROBES, DEFAULT_VARIANCE_TRIANGLES, MEDIAN_HIST_BINS,
    MEDIAN_HIST_RANGE,
};
use gausscap::AccuracySpec;
use thiserror::Error;

pub mod record;
pub mod verify;

pub use record::{write_records, Format, Method, OutputRecord};
use verify::{published_constant, VerifyConfig, INNER_POINT_VARIANCE, VERIFY_WORKERS};

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] gausscap::Error),
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Io(#[from] io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Core(gausscap::Error::Accuracy { .. }) => 3,
            CliError::Core(
                gausscap::Error::Domain { .. }
                | gausscap::Error::Config(_)
                | gausscap::Error::DegenerateInput(_),
            )
            | CliError::Usage(_) => 2,
            _ => 1,
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "gcap", version, about = "Gaussian point capture probabilities and hull statistics")]
pub struct Cli {
    /// Base seed of the random streams.
    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    pub seed: u64,

    /// Monte Carlo sample count [default: 1000000; 10000 triangles for content-variance].
    #[arg(long, global = true)]
    pub samples: Option<u64>,

    /// Worker streams [default: available parallelism; 8 for verify].
    #[arg(long, global = true)]
    pub workers: Option<usize>,

    /// Absolute (and relative) tolerance of quadrature.
    #[arg(long, global = true, default_value_t = 1e-7)]
    pub tol: f64,

    #[arg(long, global = true, value_enum, default_value_t)]
    pub format: Format,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Route {
    ClosedForm,
    Quadrature,
    #[value(alias = "monte-carlo")]
    Mc,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Probability that a Gaussian triangle contains the location (xi, eta).
    Capture {
        #[arg(long, allow_negative_numbers = true)]
        xi: f64,
        #[arg(long, allow_negative_numbers = true, default_value_t = 0.0)]
        eta: f64,
        #[arg(long, value_enum, default_value_t = Route::Quadrature)]
        method: Route,
    },
    /// Expected probability content of a Gaussian triangle or tetrahedron.
    Content {
        #[arg(long, value_parser = clap::value_parser!(u8).range(2..=3))]
        dim: u8,
        #[arg(long, value_enum, default_value_t = Route::Mc)]
        method: Route,
    },
    /// Variance of the probability content of a Gaussian triangle.
    ContentVariance {
        /// Probe points per triangle.
        #[arg(long, default_value_t = DEFAULT_VARIANCE_PROBES)]
        probes: u32,
    },
    /// Median of three normals (dim 1) or inner point of four planar points (dim 2).
    Median {
        #[arg(long, value_parser = clap::value_parser!(u8).range(1..=2))]
        dim: u8,
        #[arg(long, value_enum, default_value_t = Route::Mc)]
        method: Route,
    },
    /// Convex hull statistics of four Gaussian points.
    QuadStats {
        #[arg(long, value_enum, default_value_t = Route::Mc)]
        method: Route,
    },
    /// Area and perimeter of a Gaussian triangle.
    TriangleStats {
        #[arg(long, value_enum, default_value_t = Route::Mc)]
        method: Route,
    },
    /// Closed-form constants.
    Constants,
    /// Density of the median of three normals.
    Density {
        #[arg(long, allow_negative_numbers = true, required_unless_present = "grid", conflicts_with = "grid")]
        at: Option<f64>,
        /// Evaluate on the histogram grid over [-4, 4].
        #[arg(long)]
        grid: bool,
        #[arg(long, value_enum, default_value_t = Route::ClosedForm)]
        method: Route,
    },
    /// Run the acceptance checks with fixed sample sizes.
    Verify,
}

impl Cli {
    fn run_config(&self, default_samples: u64) -> Result<RunConfig, CliError> {
        let workers = self.workers.unwrap_or_else(default_workers);
        Ok(RunConfig::new(self.seed, self.samples.unwrap_or(default_samples), workers)?)
    }

    fn accuracy(&self) -> Result<AccuracySpec, CliError> {
        Ok(AccuracySpec::new(self.tol, self.tol)?)
    }
}

pub fn default_workers() -> usize {
    thread::available_parallelism().map_or(1, |n| n.get())
}

fn unsupported(command: &str, route: Route) -> CliError {
    let name = route.to_possible_value().map(|v| v.get_name().to_owned()).unwrap_or_default();
    CliError::Usage(format!("{command} does not support --method {name}"))
}

/// Executes `cli`, writing records to `out` and verify status lines to
/// `status`. Returns whether every check passed.
pub fn run<W: Write, E: Write>(cli: &Cli, out: W, mut status: E) -> Result<bool, CliError> {
    let seed = cli.seed;
    let k = constants();
    let mut passed = true;
    let records = match cli.command {
        Command::Capture { xi, eta, method } => {
            let target = if eta == 0.0 { capture_reference(xi.abs()) } else { None };
            match method {
                Route::Quadrature => {
                    let r = capture_probability_detailed(xi.hypot(eta), cli.accuracy()?)?;
                    vec![OutputRecord::quadrature(
                        "capture_probability",
                        r.value,
                        r.error_estimate,
                        r.evaluations as u64,
                        target,
                    )]
                }
                Route::Mc => {
                    let e = estimate_capture(xi, eta, &cli.run_config(DEFAULT_SAMPLES)?)?;
                    vec![OutputRecord::monte_carlo("capture_probability", &e, seed, target)]
                }
                other => return Err(unsupported("capture", other)),
            }
        }
        Command::Content { dim, method } => {
            let name = if dim == 2 { "expected_content_2d" } else { "gaussian_volume_3d" };
            let exact = if dim == 2 { k.expected_content_2d } else { k.gaussian_volume_3d };
            let target = published_constant(name);
            match method {
                Route::ClosedForm => vec![OutputRecord::closed_form(name, exact, target)],
                Route::Mc => {
                    let e = estimate_expected_content(dim.into(), &cli.run_config(DEFAULT_SAMPLES)?)?;
                    vec![OutputRecord::monte_carlo(name, &e, seed, target)]
                }
                other => return Err(unsupported("content", other)),
            }
        }
        Command::ContentVariance { probes } => {
            let r = estimate_content_variance_2d(&cli.run_config(DEFAULT_VARIANCE_TRIANGLES)?, probes)?;
            vec![
                OutputRecord::monte_carlo("content_mean_2d", &r.mean_content, seed, published_constant("expected_content_2d")),
                OutputRecord::monte_carlo("content_variance_2d", &r.variance, seed, None),
            ]
        }
        Command::Median { dim: 1, method } => match method {
            Route::ClosedForm => vec![OutputRecord::closed_form(
                "median_variance_1d",
                k.median_variance_1d,
                published_constant("median_variance_1d"),
            )],
            Route::Mc => {
                let r = estimate_median_stats_1d(&cli.run_config(DEFAULT_SAMPLES)?)?;
                let n = r.histogram.total();
                vec![
                    OutputRecord::monte_carlo("median_variance_1d", &r.variance, seed, published_constant("median_variance_1d")),
                    OutputRecord::monte_carlo("median_mean_1d", &r.mean, seed, Some(0.0)),
                    verify::chi_square_record("median_fit_p_value", r.fit_true.p_value, n, seed),
                    verify::chi_square_record("median_reference_fit_p_value", r.fit_reference.p_value, n, seed),
                ]
            }
            other => return Err(unsupported("median --dim 1", other)),
        },
        Command::Median { method, .. } => match method {
            Route::Mc => {
                let r = estimate_inner_point_variance_2d(&cli.run_config(DEFAULT_SAMPLES)?)?;
                vec![
                    OutputRecord::monte_carlo("inner_point_variance_2d", &r.variance, seed, Some(INNER_POINT_VARIANCE.0)),
                    OutputRecord::monte_carlo("inner_point_mean_2d", &r.mean, seed, Some(0.0)),
                    OutputRecord::monte_carlo("inner_point_acceptance", &r.acceptance, seed, published_constant("one_minus_theta")),
                ]
            }
            other => return Err(unsupported("median --dim 2", other)),
        },
        Command::QuadStats { method } => match method {
            Route::ClosedForm => vec![
                OutputRecord::closed_form("p_quadrilateral", k.theta, published_constant("theta")),
                OutputRecord::closed_form("expected_area_quad", k.expected_area_quad, published_constant("expected_area_quad")),
                OutputRecord::closed_form(
                    "expected_perimeter_quad",
                    k.expected_perimeter_quad,
                    published_constant("expected_perimeter_quad"),
                ),
            ],
            Route::Mc => quad_stats_records(&cli.run_config(DEFAULT_SAMPLES)?)?,
            other => return Err(unsupported("quad-stats", other)),
        },
        Command::TriangleStats { method } => match method {
            Route::ClosedForm => vec![
                OutputRecord::closed_form("expected_area_triangle", k.expected_area_triangle, published_constant("expected_area_triangle")),
                OutputRecord::closed_form(
                    "expected_perimeter_triangle",
                    k.expected_perimeter_triangle,
                    published_constant("expected_perimeter_triangle"),
                ),
            ],
            Route::Mc => {
                let r = estimate_triangle_stats(&cli.run_config(DEFAULT_SAMPLES)?)?;
                vec![
                    OutputRecord::monte_carlo("expected_area_triangle", &r.area, seed, published_constant("expected_area_triangle")),
                    OutputRecord::monte_carlo("expected_perimeter_triangle", &r.perimeter, seed, published_constant("expected_perimeter_triangle")),
                ]
            }
            other => return Err(unsupported("triangle-stats", other)),
        },
        Command::Constants => constants_records(),
        Command::Density { at, method, .. } => density_records(cli, at, method)?,
        Command::Verify => {
            let cfg = VerifyConfig {
                seed,
                workers: cli.workers.unwrap_or(VERIFY_WORKERS),
                tol: cli.tol,
            };
            let mut records = Vec::new();
            for (_, criterion) in verify::CRITERIA {
                let outcome = criterion(&cfg)?;
                writeln!(status, "{outcome}")?;
                passed &= outcome.passed();
                records.extend(outcome.records);
            }
            records
        }
    };
    write_records(out, &records, cli.format)?;
    Ok(passed)
}

fn constants_records() -> Vec<OutputRecord> {
    let k = constants();
    [
        ("theta", k.theta),
        ("one_minus_theta", k.one_minus_theta),
        ("expected_content_2d", k.expected_content_2d),
        ("gaussian_volume_3d", k.gaussian_volume_3d),
        ("median_variance_1d", k.median_variance_1d),
        ("expected_area_quad", k.expected_area_quad),
        ("expected_perimeter_quad", k.expected_perimeter_quad),
        ("expected_area_triangle", k.expected_area_triangle),
        ("expected_perimeter_triangle", k.expected_perimeter_triangle),
    ]
    .into_iter()
    .map(|(name, v)| OutputRecord::closed_form(name, v, published_constant(name)))
    .collect()
}

fn quad_stats_records(cfg: &RunConfig) -> Result<Vec<OutputRecord>, CliError> {
    let seed = cfg.seed;
    let q = estimate_quad_stats(cfg)?;
    let r = non_rayleigh_check(&q);
    let [tri_mean, tri_sq] = verify::SIDE_MOMENTS_TRIANGLE.map(|(t, _)| Some(t));
    let [quad_mean, quad_sq] = verify::SIDE_MOMENTS_QUAD.map(|(t, _)| Some(t));
    Ok(vec![
        OutputRecord::monte_carlo("p_quadrilateral", &q.p_quadrilateral, seed, published_constant("theta")),
        OutputRecord::monte_carlo("expected_area_quad", &q.area, seed, published_constant("expected_area_quad")),
        OutputRecord::monte_carlo("expected_perimeter_quad", &q.perimeter, seed, published_constant("expected_perimeter_quad")),
        OutputRecord::monte_carlo("side_mean_triangle", &q.side_mean_tri, seed, tri_mean),
        OutputRecord::monte_carlo("side_sq_triangle", &q.side_sq_tri, seed, tri_sq),
        OutputRecord::monte_carlo("side_mean_quad", &q.side_mean_quad, seed, quad_mean),
        OutputRecord::monte_carlo("side_sq_quad", &q.side_sq_quad, seed, quad_sq),
        OutputRecord::monte_carlo("corr_adjacent_sides", &q.corr_adjacent, seed, None),
        OutputRecord::monte_carlo("corr_disjoint_sides", &q.corr_disjoint, seed, None),
        OutputRecord::monte_carlo("rayleigh_ratio_triangle", &r.ratio_tri, seed, None),
        OutputRecord::monte_carlo("rayleigh_ratio_quad", &r.ratio_quad, seed, None),
    ])
}

fn density_records(cli: &Cli, at: Option<f64>, method: Route) -> Result<Vec<OutputRecord>, CliError> {
    let (lo, hi) = MEDIAN_HIST_RANGE;
    let width = (hi - lo) / MEDIAN_HIST_BINS as f64;
    let bin_center = |x: f64| lo + width * (((x - lo) / width).floor() + 0.5);
    match method {
        Route::ClosedForm => {
            let xs = match at {
                Some(x) => vec![x],
                None => (0..MEDIAN_HIST_BINS).map(|i| lo + width * (i as f64 + 0.5)).collect(),
            };
            let mut records = Vec::with_capacity(2 * xs.len() + 1);
            if let Some(x) = at.filter(|x| !x.is_finite()) {
                return Err(CliError::Usage(format!("--at {x} is not finite")));
            }
            for x in xs {
                records.push(OutputRecord::closed_form(format!("median_density(x={x})"), median_density_1d(x), None));
                records.push(OutputRecord::closed_form(
                    format!("median_reference_density(x={x})"),
                    median_reference_density_1d(x),
                    None,
                ));
            }
            if at.is_none() {
                let (gap, _) = median_density_gap(lo, hi, 8001);
                records.push(OutputRecord::closed_form("median_density_sup_gap", gap, None));
            }
            Ok(records)
        }
        Route::Mc => {
            if let Some(x) = at {
                if !(lo..hi).contains(&x) {
                    return Err(CliError::Usage(format!("--at {x} lies outside the histogram range [{lo}, {hi})")));
                }
            }
            let run = cli.run_config(DEFAULT_SAMPLES)?;
            let r = estimate_median_stats_1d(&run)?;
            let h = &r.histogram;
            let total = h.total() as f64;
            let records = h
                .centers()
                .zip(h.counts())
                .filter(|(c, _)| at.is_none_or(|x| (bin_center(x) - c).abs() < 0.5 * width))
                .map(|(c, &count)| {
                    let p = count as f64 / total;
                    let e = Estimate {
                        mean: p / width,
                        stderr: (p * (1.0 - p) / total).sqrt() / width,
                        n: h.total(),
                        n_total: h.total(),
                    };
                    OutputRecord::monte_carlo(format!("median_density(x={c})"), &e, run.seed, None)
                })
                .collect();
            Ok(records)
        }
        other => Err(unsupported("density", other)),
    }
}
