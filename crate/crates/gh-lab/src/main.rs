//! Command-line front end: metric evaluation, polytope and potential
//! queries, phase scans, and the verification suites.

use std::collections::BTreeMap;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand};
use gh_lab::metric::{metric_real, FiberPoint};
use gh_lab::phase::{phase_scan, scan_csv, PhaseParameter, ScanGrid};
use gh_lab::symplectic::{
    build_polytope, complex_potential, kahler_potential, metric_symplectic, moment_map,
    HessianPotentials, SymplecticPoint,
};
use gh_lab::verify::{report_json, report_text, run_suite, VerifyContext};
use gh_lab::{atlas, CenterConfig, ChartId, RealPoint};
use serde::Deserialize;
use serde_json::json;

#[derive(Parser)]
#[command(name = "gh-lab", about = "Numerical laboratory for toric Gibbons-Hawking metrics")]
struct Cli {
    /// JSON config file; inline flags win over its fields
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate the metric at a point in a chosen representation
    Eval {
        #[command(flatten)]
        common: Common,
        /// Point as x,y,z or x,y,z,phi
        #[arg(long)]
        point: String,
        /// One of real, symplectic, complex:<patch>
        #[arg(long)]
        rep: String,
    },
    /// Emit the moment polytope (half-planes and vertices)
    Polytope {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value = "json")]
        format: String,
    },
    /// Evaluate the symplectic potential or its Legendre dual
    Potential {
        #[command(flatten)]
        common: Common,
        /// Moment coordinates as m1,m2
        #[arg(long)]
        mu: String,
        /// One of psi, psi-dual
        #[arg(long)]
        kind: String,
        /// Linear-term constant multiplying mu1
        #[arg(long)]
        c1: Option<f64>,
        /// Linear-term constant multiplying mu2
        #[arg(long)]
        c2: Option<f64>,
    },
    /// Scan the complexified single-parameter family over a modulus grid
    PhaseScan {
        #[command(flatten)]
        common: Common,
        /// Imaginary part of the family parameter
        #[arg(long)]
        b: f64,
        /// Real part of the family parameter
        #[arg(long, default_value_t = 0.0)]
        a: f64,
        /// Grid as amin,amax,bmin,bmax,res
        #[arg(long)]
        grid: String,
    },
    /// Run a verification suite and report residuals
    Verify {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value = "all")]
        suite: String,
        #[arg(long)]
        seed: Option<u64>,
        /// Write the JSON report here in addition to stdout
        #[arg(long)]
        report: Option<PathBuf>,
    },
}

#[derive(Args)]
struct Common {
    /// Monopole centers as a comma-separated increasing list
    #[arg(long)]
    centers: Option<String>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RunConfig {
    centers: Option<Vec<f64>>,
    c1: Option<f64>,
    c2: Option<f64>,
    #[serde(default)]
    tolerances: BTreeMap<String, f64>,
    seed: Option<u64>,
    output_path: Option<String>,
}

#[derive(Debug)]
struct CliError(String);

impl<E: std::error::Error> From<E> for CliError {
    fn from(e: E) -> Self {
        CliError(e.to_string())
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // help and version are successful outcomes; everything else is a
            // usage error
            let ok = matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion);
            let _ = e.print();
            return if ok { ExitCode::SUCCESS } else { ExitCode::from(1) };
        }
    };
    match run(cli) {
        Ok(code) => code,
        Err(CliError(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode, CliError> {
    let run_config = load_config(cli.config.as_deref())?;
    match cli.command {
        Command::Eval { common, point, rep } => {
            let config = resolve_centers(&common, &run_config)?;
            let fp = parse_point(&config, &point)?;
            let value = match rep.as_str() {
                "real" => {
                    let g = metric_real(&config, &fp)?;
                    json!({ "rep": "real", "matrix": g.as_array() })
                }
                "symplectic" => {
                    let sp = moment_map(&config, &fp)?;
                    let g = metric_symplectic(&config, &sp)?;
                    json!({ "rep": "symplectic", "matrix": g.as_array() })
                }
                other => {
                    let patch = other
                        .strip_prefix("complex:")
                        .and_then(|s| s.parse::<usize>().ok())
                        .filter(|p| (1..=config.n()).contains(p))
                        .ok_or_else(|| {
                            CliError(format!(
                                "rep must be real, symplectic, or complex:<patch in 1..={}>, got '{other}'",
                                config.n()
                            ))
                        })?;
                    let h = atlas::metric_complex(&config, &fp, patch)?;
                    let entries: Vec<Vec<serde_json::Value>> = h
                        .m
                        .iter()
                        .map(|row| {
                            row.iter().map(|z| json!({ "re": z.re, "im": z.im })).collect()
                        })
                        .collect();
                    json!({ "rep": rep, "patch": patch, "matrix": entries })
                }
            };
            emit(&run_config, &serde_json::to_string_pretty(&value)?)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Polytope { common, format } => {
            let config = resolve_centers(&common, &run_config)?;
            let poly = build_polytope(&config);
            let out = match format.as_str() {
                "json" => {
                    let halfplanes: Vec<_> = poly
                        .halfplanes
                        .iter()
                        .map(|h| json!({ "a": h.a, "b": h.b, "k": h.k }))
                        .collect();
                    serde_json::to_string_pretty(&json!({
                        "halfplanes": halfplanes,
                        "vertices": poly.vertices,
                    }))?
                }
                "csv" => poly.vertices_csv(),
                other => return Err(CliError(format!("format must be json or csv, got '{other}'"))),
            };
            emit(&run_config, &out)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Potential { common, mu, kind, c1, c2 } => {
            let config = resolve_centers(&common, &run_config)?;
            let parts = parse_floats(&mu, "mu")?;
            if parts.len() != 2 {
                return Err(CliError("mu expects exactly m1,m2".into()));
            }
            let sp = SymplecticPoint::actions(parts[0], parts[1]);
            let matched = HessianPotentials::legendre_matched(config.n());
            let pot = HessianPotentials {
                c1: c1.or(run_config.c1).unwrap_or(matched.c1),
                c2: c2.or(run_config.c2).unwrap_or(matched.c2),
            };
            let value = match kind.as_str() {
                "psi" => complex_potential(&config, &pot, &sp)?,
                "psi-dual" => kahler_potential(&config, &pot, &sp)?,
                other => {
                    return Err(CliError(format!("kind must be psi or psi-dual, got '{other}'")))
                }
            };
            emit(&run_config, &format!("{value}"))?;
            Ok(ExitCode::SUCCESS)
        }
        Command::PhaseScan { common: _, b, a, grid } => {
            let parts = parse_floats(&grid, "grid")?;
            if parts.len() != 5 {
                return Err(CliError("grid expects amin,amax,bmin,bmax,res".into()));
            }
            let res = parts[4];
            if res.fract() != 0.0 || res < 2.0 {
                return Err(CliError("grid resolution must be an integer >= 2".into()));
            }
            let g = ScanGrid {
                alpha_min: parts[0],
                alpha_max: parts[1],
                beta_min: parts[2],
                beta_max: parts[3],
                res: res as usize,
            };
            let param = PhaseParameter::new(num_complex::Complex64::new(a, b));
            let cells = phase_scan(&param, &g)?;
            emit(&run_config, &scan_csv(&cells))?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Verify { common, suite, seed, report } => {
            let config = resolve_centers(&common, &run_config)?;
            let seed = seed.or(run_config.seed).unwrap_or(0);
            let ctx = VerifyContext::new(config.centers().to_vec(), seed);
            let mut results = run_suite(&ctx, &suite)?;
            for r in &mut results {
                if let Some(tol) = run_config.tolerances.get(&r.name) {
                    r.tolerance = *tol;
                    r.pass = r.max_residual <= *tol;
                }
            }
            print!("{}", report_text(&results));
            let json_report = report_json(&results);
            if let Some(path) = report
                .or_else(|| run_config.output_path.as_ref().map(PathBuf::from))
            {
                std::fs::write(&path, &json_report)?;
            }
            if results.iter().all(|r| r.pass) {
                Ok(ExitCode::SUCCESS)
            } else {
                Ok(ExitCode::from(2))
            }
        }
    }
}

fn load_config(path: Option<&std::path::Path>) -> Result<RunConfig, CliError> {
    let Some(path) = path else {
        return Ok(RunConfig::default());
    };
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError(format!("cannot read {}: {e}", path.display())))?;
    let config: RunConfig = serde_json::from_str(&text)
        .map_err(|e| CliError(format!("{} line {} column {}: {e}", path.display(), e.line(), e.column())))?;
    if let Some(centers) = &config.centers {
        check_increasing(centers)?;
    }
    Ok(config)
}

fn check_increasing(centers: &[f64]) -> Result<(), CliError> {
    if centers.is_empty() {
        return Err(CliError("centers must be non-empty".into()));
    }
    if centers.windows(2).any(|w| w[0] >= w[1]) {
        return Err(CliError("centers must be strictly increasing".into()));
    }
    Ok(())
}

fn resolve_centers(common: &Common, run_config: &RunConfig) -> Result<CenterConfig, CliError> {
    let centers = match (&common.centers, &run_config.centers) {
        (Some(flag), _) => parse_floats(flag, "centers")?,
        (None, Some(from_file)) => from_file.clone(),
        (None, None) => return Err(CliError("no centers given (flag --centers or config)".into())),
    };
    check_increasing(&centers)?;
    Ok(CenterConfig::new(centers)?)
}

fn parse_floats(s: &str, what: &str) -> Result<Vec<f64>, CliError> {
    s.split(',')
        .map(|p| {
            p.trim()
                .parse::<f64>()
                .map_err(|_| CliError(format!("{what}: cannot parse '{p}' as a number")))
        })
        .collect()
}

fn parse_point(config: &CenterConfig, s: &str) -> Result<FiberPoint, CliError> {
    let parts = parse_floats(s, "point")?;
    let (xyz, phi) = match parts.len() {
        3 => (&parts[..3], 0.0),
        4 => (&parts[..3], parts[3]),
        _ => return Err(CliError("point expects x,y,z or x,y,z,phi".into())),
    };
    let base = RealPoint::new(xyz[0], xyz[1], xyz[2]);
    let chart = [ChartId::South, ChartId::North]
        .into_iter()
        .find(|c| c.admissible(config, &base))
        .ok_or_else(|| CliError("point lies on a monopole center".into()))?;
    Ok(FiberPoint { phi, base, chart })
}

/// Writes to the configured output path when one is set, otherwise stdout.
fn emit(run_config: &RunConfig, text: &str) -> Result<(), CliError> {
    if let Some(path) = &run_config.output_path {
        std::fs::write(path, text)?;
    } else {
        let newline = if text.ends_with('\n') { "" } else { "\n" };
        print!("{text}{newline}");
    }
    Ok(())
}
