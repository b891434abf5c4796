use std::f64::consts::PI;
use std::fs::File;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use quadcurv::report::{print_report, write_histograms};
use quadcurv::{read_metric_file, write_metric_file, InputError};
use quadcurv_core::conditions::{check_all_labelings, Tolerance};
use quadcurv_core::embedding::embed_any;
use quadcurv_core::experiments::{reproduce_counterexample, run_positivity, run_violation_search, Campaign};
use quadcurv_core::iteration::{run_iteration, verify_recursion, IterationError, RecursionCheck};
use quadcurv_core::metric::{counterexample_f, COUNTEREXAMPLE_STAR_EPS_MAX};
use quadcurv_core::model::{GeometryError, Kappa, ModelPoint, ModelSpace, SampleOptions};

const PASS: u8 = 0;
const FAIL: u8 = 1;
const INPUT_ERROR: u8 = 2;

#[derive(Parser)]
#[command(name = "quadcurv", version, about = "Four-point curvature conditions for finite metric spaces")]
struct Cli {
    /// Residuals above -TOL count as passing.
    #[arg(long, global = true, default_value_t = 1e-9)]
    tol: f64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate every condition on every labeling of a metric file.
    Check {
        path: PathBuf,
        /// Curvature of the comparison angles in the angle-sum condition.
        #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
        kappa: f64,
    },
    /// Embed a 4-point metric file into the plane or a sphere.
    Embed { path: PathBuf },
    /// Run a Monte Carlo campaign on a model space.
    Sample {
        #[command(flatten)]
        space: SpaceArgs,
        #[arg(long, default_value_t = 1000)]
        count: u64,
        #[arg(long, env = "QUADCURV_SEED", default_value_t = 0)]
        seed: u64,
        /// Write residual histograms as CSV.
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Trace the midpoint sequence x_n and the recursion for alpha_n.
    Iterate {
        #[command(flatten)]
        space: SpaceArgs,
        /// Comma-separated coordinates.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true, required = true)]
        p: Vec<f64>,
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true, required = true)]
        q: Vec<f64>,
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true, required = true)]
        x: Vec<f64>,
        #[arg(long, default_value_t = quadcurv_core::iteration::DEFAULT_N_MAX)]
        n_max: usize,
    },
    /// Check the four-point space that satisfies the star inequality but
    /// not the angle condition.
    Counterexample {
        #[arg(long, value_delimiter = ',', default_values_t = [0.01, 0.1])]
        eps: Vec<f64>,
        /// Write the metric file for the single given eps.
        #[arg(long)]
        write: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum SpaceKind {
    Euclidean,
    Sphere,
    Hyperbolic,
    Cone,
}

#[derive(Args)]
struct SpaceArgs {
    #[arg(long, value_enum)]
    space: SpaceKind,
    /// Dimension of a Euclidean space.
    #[arg(long, default_value_t = 2)]
    dim: usize,
    /// Sphere radius for spheres; sampling radius around the base point
    /// otherwise.
    #[arg(long, default_value_t = 1.0)]
    radius: f64,
    /// Curvature of a hyperbolic plane.
    #[arg(long, default_value_t = -1.0, allow_negative_numbers = true)]
    kappa: f64,
    /// Total angle of a cone.
    #[arg(long, default_value_t = 2.0 * PI)]
    angle: f64,
}

impl SpaceArgs {
    fn space(&self) -> Result<ModelSpace, GeometryError> {
        match self.space {
            SpaceKind::Euclidean => ModelSpace::euclidean(self.dim),
            SpaceKind::Sphere => ModelSpace::sphere(self.radius),
            SpaceKind::Hyperbolic => ModelSpace::hyperbolic(self.kappa),
            SpaceKind::Cone => ModelSpace::cone(self.angle),
        }
    }

    fn sample_options(&self) -> SampleOptions {
        match self.space {
            SpaceKind::Sphere => SampleOptions::default(),
            _ => SampleOptions::with_bound(self.radius),
        }
    }

    fn point(&self, space: &ModelSpace, c: &[f64]) -> Result<ModelPoint, String> {
        let point = match (space, c.len()) {
            (ModelSpace::Euclidean { .. }, _) => ModelPoint::Euclidean(c.to_vec()),
            (ModelSpace::Sphere { radius }, 3) => {
                let n = (c[0] * c[0] + c[1] * c[1] + c[2] * c[2]).sqrt();
                if !(n > 0.0 && n.is_finite()) {
                    return Err("sphere coordinates must be a nonzero vector".into());
                }
                ModelPoint::Sphere([c[0] * radius / n, c[1] * radius / n, c[2] * radius / n])
            }
            (ModelSpace::Hyperbolic { kappa }, 2) => {
                ModelPoint::Hyperbolic([(1.0 / kappa.abs() + c[0] * c[0] + c[1] * c[1]).sqrt(), c[0], c[1]])
            }
            (ModelSpace::Hyperbolic { .. }, 3) => ModelPoint::Hyperbolic([c[0], c[1], c[2]]),
            (ModelSpace::Sphere { .. }, n) => return Err(format!("sphere points need 3 coordinates, got {n}")),
            (ModelSpace::Hyperbolic { .. }, n) => {
                return Err(format!("hyperbolic points need 2 (or 3 hyperboloid) coordinates, got {n}"))
            }
            _ => return Err(format!("iteration is not available on {space}")),
        };
        if !space.contains(&point) {
            return Err(format!("{c:?} is not a point of {space}"));
        }
        Ok(point)
    }
}

fn input_error(kind: &str, detail: impl Serialize, message: &str) -> ExitCode {
    eprintln!("quadcurv: {message}");
    print_report(&json!({ "error": { "kind": kind, "detail": detail, "message": message } }));
    ExitCode::from(INPUT_ERROR)
}

fn file_error(e: InputError) -> ExitCode {
    let message = e.to_string();
    eprintln!("quadcurv: {message}");
    print_report(&json!({ "error": e }));
    ExitCode::from(INPUT_ERROR)
}

fn verdict(ok: bool) -> ExitCode {
    ExitCode::from(if ok { PASS } else { FAIL })
}

fn cmd_check(path: &Path, kappa: f64, tol: Tolerance) -> ExitCode {
    let space = match read_metric_file(path) {
        Ok(s) => s,
        Err(e) => return file_error(e),
    };
    let kappa = match Kappa::new(kappa) {
        Ok(k) => k,
        Err(e) => return input_error("geometry", e, &e.to_string()),
    };
    match check_all_labelings(&space, kappa, tol) {
        Ok(report) => {
            print_report(&json!({ "labels": space.labels(), "report": report }));
            verdict(report.all_pass())
        }
        Err(e) => input_error("metric", &e, &e.to_string()),
    }
}

fn cmd_embed(path: &Path) -> ExitCode {
    let space = match read_metric_file(path) {
        Ok(s) => s,
        Err(e) => return file_error(e),
    };
    match embed_any(&space) {
        Ok(result) => {
            print_report(&json!({ "labels": space.labels(), "embedding": result }));
            verdict(result.is_embedded())
        }
        Err(e) => input_error("embedding", e, &e.to_string()),
    }
}

fn cmd_sample(args: &SpaceArgs, count: u64, seed: u64, csv: Option<&PathBuf>, tol: Tolerance) -> ExitCode {
    let space = match args.space() {
        Ok(s) => s,
        Err(e) => return input_error("geometry", e, &e.to_string()),
    };
    let opts = args.sample_options();
    let campaign: Result<Campaign, GeometryError> = if space.is_nonnegatively_curved() {
        run_positivity(&space, opts, count, seed, tol)
    } else {
        run_violation_search(&space, opts, count, seed, tol)
    };
    let campaign = match campaign {
        Ok(c) => c,
        Err(e) => return input_error("geometry", e, &e.to_string()),
    };
    if let Some(path) = csv {
        let written = File::create(path)
            .map_err(|e| e.to_string())
            .and_then(|f| write_histograms(&campaign, f).map_err(|e| e.to_string()));
        if let Err(message) = written {
            return input_error("io", path.display().to_string(), &message);
        }
    }
    print_report(&campaign);
    verdict(!campaign.falsifying)
}

#[derive(Serialize)]
struct IterateReport {
    trace: quadcurv_core::iteration::IterationTrace,
    recursion: Vec<RecursionCheck>,
    max_alpha: f64,
    min_slack: f64,
    schedule_error: f64,
    ceiling_holds: Option<bool>,
}

fn cmd_iterate(args: &SpaceArgs, coords: [&[f64]; 3], n_max: usize, tol: Tolerance) -> ExitCode {
    let space = match args.space() {
        Ok(s) => s,
        Err(e) => return input_error("geometry", e, &e.to_string()),
    };
    let space = match (space, args.space) {
        (ModelSpace::Euclidean { .. }, _) => match ModelSpace::euclidean(coords[0].len()) {
            Ok(s) => s,
            Err(e) => return input_error("geometry", e, &e.to_string()),
        },
        (s, _) => s,
    };
    let mut points = Vec::new();
    for c in coords {
        match args.point(&space, c) {
            Ok(p) => points.push(p),
            Err(message) => return input_error("coordinates", c, &message),
        }
    }
    let trace = match run_iteration(&space, &points[0], &points[1], &points[2], n_max) {
        Ok(t) => t,
        Err(e @ IterationError::XEqualsZ { .. }) => return input_error("x_equals_z", e, &e.to_string()),
        Err(e) => return input_error("iteration", e, &e.to_string()),
    };
    let recursion = verify_recursion(&trace, tol.eps_pass);
    let ceiling_holds = space.is_nonnegatively_curved().then(|| trace.max_alpha() <= 3.0 + tol.eps_pass);
    let ok = recursion.iter().all(|c| c.holds) && ceiling_holds != Some(false);
    print_report(&IterateReport {
        max_alpha: trace.max_alpha(),
        min_slack: trace.min_slack(),
        schedule_error: trace.schedule_error(),
        recursion,
        ceiling_holds,
        trace,
    });
    verdict(ok)
}

fn cmd_counterexample(eps: &[f64], write: Option<&PathBuf>, tol: Tolerance) -> ExitCode {
    if let Some(path) = write {
        let [e] = eps else {
            return input_error("arguments", eps, "--write needs exactly one eps");
        };
        let written = counterexample_f(*e).map_err(InputError::from).and_then(|f| write_metric_file(path, &f));
        if let Err(e) = written {
            return file_error(e);
        }
    }
    match reproduce_counterexample(eps, tol) {
        Ok(rows) => {
            let ok = rows.iter().filter(|r| r.in_contract).all(|r| r.reproduced);
            print_report(&json!({ "eps_max": COUNTEREXAMPLE_STAR_EPS_MAX, "rows": rows }));
            verdict(ok)
        }
        Err(e) => file_error(e.into()),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let tol = match Tolerance::new(cli.tol) {
        Ok(t) => t,
        Err(e) => return input_error("arguments", e, &e.to_string()),
    };
    match &cli.command {
        Command::Check { path, kappa } => cmd_check(path, *kappa, tol),
        Command::Embed { path } => cmd_embed(path),
        Command::Sample { space, count, seed, csv } => cmd_sample(space, *count, *seed, csv.as_ref(), tol),
        Command::Iterate { space, p, q, x, n_max } => cmd_iterate(space, [p, q, x], *n_max, tol),
        Command::Counterexample { eps, write } => cmd_counterexample(eps, write.as_ref(), tol),
    }
}
