//! Command-line harness: phantom rendering and export, basis projection,
//! sinogram sampling, observation simulation, one-shot estimation, the full
//! benchmark sweep, needlet atom rasterization, and the acceptance selftest.

use clap::{Parser, Subcommand, ValueEnum};
use radonlet::bench::{render, BenchConfig, ModelKind};
use radonlet::error::Error;
use radonlet::estimator::{
    radon_sampler_from_coefficients, riemann_svd_coeffs, simulate_regression,
    simulate_white_noise, EstimatorSpec, RegressionObservation,
};
use radonlet::needlet::{cubature_disk, AtomKind, CutoffKind, NeedletLevel};
use radonlet::phantom::{shepp_logan, Phantom, PhantomVariant};
use radonlet::svd::radon_line_integral;
use radonlet::{io, Lp};
use std::f64::consts::PI;
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "radonlet",
    about = "Needlet-smoothed SVD inversion of the Radon transform on the unit disk",
    version
)]
struct Cli {
    /// Worker threads for parallel sections (default: all cores). Results
    /// are independent of this setting.
    #[arg(long, global = true)]
    jobs: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum VariantArg {
    Original,
    Modified,
}

impl From<VariantArg> for PhantomVariant {
    fn from(v: VariantArg) -> Self {
        match v {
            VariantArg::Original => PhantomVariant::Original,
            VariantArg::Modified => PhantomVariant::Modified,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum CutoffArg {
    Smooth,
    Cosine,
    Hard,
}

impl From<CutoffArg> for CutoffKind {
    fn from(v: CutoffArg) -> Self {
        match v {
            CutoffArg::Smooth => CutoffKind::SmoothExp,
            CutoffArg::Cosine => CutoffKind::CosineTaper,
            CutoffArg::Hard => CutoffKind::Hard,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Render the head phantom to a PGM image or export its ellipse table.
    Phantom {
        #[arg(long, value_enum, default_value = "original")]
        variant: VariantArg,
        /// Custom phantom table (cx,cy,a,b,phi,density CSV) instead of the
        /// built-in variant.
        #[arg(long)]
        phantom: Option<PathBuf>,
        #[arg(long, default_value_t = 256)]
        resolution: usize,
        /// Output PGM path.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Export the ellipse table to this CSV path.
        #[arg(long)]
        export: Option<PathBuf>,
    },
    /// Project a phantom onto basis coefficients (quadrature exact to four
    /// times the degree).
    Project {
        #[arg(long, value_enum, default_value = "original")]
        variant: VariantArg,
        #[arg(long)]
        phantom: Option<PathBuf>,
        #[arg(long, default_value_t = 512)]
        max_degree: u32,
        #[arg(long)]
        out: PathBuf,
        /// Write the headered binary format instead of CSV.
        #[arg(long)]
        binary: bool,
    },
    /// Sample the phantom sinogram on a (theta, s) grid.
    Radon {
        #[arg(long, value_enum, default_value = "original")]
        variant: VariantArg,
        #[arg(long)]
        phantom: Option<PathBuf>,
        /// analytic: closed-form ellipse chords; numeric: brute-force line
        /// integration of the pointwise phantom.
        #[arg(long, default_value = "analytic")]
        mode: String,
        #[arg(long, default_value_t = 64)]
        n_theta: usize,
        #[arg(long, default_value_t = 64)]
        n_s: usize,
        /// Quadrature points per line in numeric mode.
        #[arg(long, default_value_t = 65536)]
        n_quad: usize,
        #[arg(long)]
        out: PathBuf,
    },
    /// Simulate a noisy observation of the Radon transform.
    Simulate {
        /// white-noise | regression
        #[arg(long)]
        model: String,
        /// Truth coefficients (CSV) for the white-noise model or the
        /// regression synthesis sampler.
        #[arg(long)]
        coeffs: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "original")]
        variant: VariantArg,
        /// Noise level: epsilon (white noise) or sigma (regression).
        #[arg(long)]
        noise: f64,
        #[arg(long, default_value_t = 256)]
        k0: u32,
        #[arg(long, default_value_t = 64)]
        n1: usize,
        #[arg(long, default_value_t = 64)]
        n2: usize,
        /// Regression sampler: svd (synthesis of --coeffs) or analytic
        /// (closed-form phantom sinogram).
        #[arg(long, default_value = "svd")]
        sampler: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 0)]
        realization: u64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Apply one estimator to an observation.
    Estimate {
        /// white-noise | regression (decides how --obs is read)
        #[arg(long, default_value = "white-noise")]
        model: String,
        #[arg(long)]
        obs: PathBuf,
        /// needlet | svd | naive
        #[arg(long)]
        estimator: String,
        /// Needlet smoothing level J.
        #[arg(long)]
        level: Option<u32>,
        /// SVD truncation degree kS.
        #[arg(long)]
        degree: Option<u32>,
        #[arg(long, value_enum, default_value = "smooth")]
        cutoff: CutoffArg,
        /// Maximum degree recovered from a regression grid.
        #[arg(long, default_value_t = 256)]
        k0: u32,
        #[arg(long)]
        out: PathBuf,
        /// Also rasterize the estimate to this PGM path.
        #[arg(long)]
        render: Option<PathBuf>,
        #[arg(long, default_value_t = 256)]
        resolution: usize,
    },
    /// Run the estimator comparison sweep and write the result CSV.
    Bench {
        /// Key-value config file; command-line flags override its entries.
        #[arg(long)]
        config: Option<PathBuf>,
        /// white-noise | regression
        #[arg(long)]
        model: Option<String>,
        /// Comma-separated noise levels.
        #[arg(long)]
        noise: Option<String>,
        /// Comma-separated norms (numbers or "inf").
        #[arg(long)]
        norm: Option<String>,
        #[arg(long)]
        k0: Option<u32>,
        #[arg(long)]
        truth_degree: Option<u32>,
        #[arg(long)]
        quad_degree: Option<u32>,
        /// Comma-separated needlet level candidates.
        #[arg(long)]
        levels: Option<String>,
        /// Comma-separated SVD degree candidates.
        #[arg(long)]
        svd_degrees: Option<String>,
        #[arg(long)]
        realizations: Option<u32>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long, value_enum)]
        variant: Option<VariantArg>,
        #[arg(long, value_enum)]
        cutoff: Option<CutoffArg>,
        #[arg(long)]
        n1: Option<usize>,
        #[arg(long)]
        n2: Option<usize>,
        /// Output CSV path; a .config.txt sidecar records the settings.
        #[arg(long)]
        out: PathBuf,
    },
    /// Rasterize one needlet atom to a PGM image.
    Atoms {
        #[arg(long)]
        level: u32,
        #[arg(long, value_enum, default_value = "smooth")]
        cutoff: CutoffArg,
        /// father | mother
        #[arg(long, default_value = "mother")]
        kind: String,
        /// Radius of the node to visualize (nearest grid node is used).
        #[arg(long, default_value_t = 0.5)]
        node_radius: f64,
        #[arg(long, default_value_t = 256)]
        resolution: usize,
        #[arg(long)]
        out: PathBuf,
    },
    /// Run the acceptance suite and exit nonzero on any failed criterion.
    Selftest {
        /// Shrink the benchmark criteria for a fast smoke run.
        #[arg(long)]
        quick: bool,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            // help/version requests are successes; everything else is usage
            use clap::error::ErrorKind;
            let _ = err.print();
            return match err.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(1),
            };
        }
    };
    if let Some(jobs) = cli.jobs {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(jobs).build_global() {
            eprintln!("warning: could not configure thread pool: {e}");
        }
    }
    match run(cli.command) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err}");
            match err {
                Error::Validation(_) => ExitCode::from(2),
                _ => ExitCode::from(1),
            }
        }
    }
}

fn load_phantom(variant: VariantArg, custom: &Option<PathBuf>) -> Result<Phantom, Error> {
    match custom {
        Some(path) => io::read_phantom_csv(path),
        None => Ok(shepp_logan(variant.into())),
    }
}

fn run(command: Command) -> Result<ExitCode, Error> {
    match command {
        Command::Phantom { variant, phantom, resolution, out, export } => {
            let ph = load_phantom(variant, &phantom)?;
            if let Some(path) = &export {
                io::write_phantom_csv(path, &ph)?;
                println!("wrote ellipse table to {}", path.display());
            }
            if let Some(path) = &out {
                let n = resolution;
                let mut img = radonlet::bench::ImageGrid {
                    width: n,
                    height: n,
                    values: vec![f64::NAN; n * n],
                };
                for row in 0..n {
                    let y = 1.0 - 2.0 * (row as f64 + 0.5) / n as f64;
                    for col in 0..n {
                        let x = -1.0 + 2.0 * (col as f64 + 0.5) / n as f64;
                        let r = x.hypot(y);
                        if r <= 1.0 {
                            img.values[row * n + col] = ph
                                .eval(radonlet::svd::DiskPoint::new(r, y.atan2(x)).unwrap());
                        }
                    }
                }
                io::write_pgm(path, &img)?;
                println!("wrote phantom image to {}", path.display());
            }
            if out.is_none() && export.is_none() {
                return Err(Error::InvalidParam(
                    "pass --out (PGM) and/or --export (CSV)".into(),
                ));
            }
            Ok(ExitCode::SUCCESS)
        }

        Command::Project { variant, phantom, max_degree, out, binary } => {
            let ph = load_phantom(variant, &phantom)?;
            let rule = cubature_disk(4 * max_degree);
            let c = ph.project_coefficients(max_degree, &rule)?;
            if binary {
                io::write_coefficients_binary(&out, &c)?;
            } else {
                io::write_coefficients_csv(&out, &c)?;
            }
            println!(
                "projected to degree {max_degree} ({} coefficients) -> {}",
                c.len(),
                out.display()
            );
            Ok(ExitCode::SUCCESS)
        }

        Command::Radon { variant, phantom, mode, n_theta, n_s, n_quad, out } => {
            let ph = load_phantom(variant, &phantom)?;
            let mut samples = Vec::with_capacity(n_theta * n_s);
            for i in 0..n_theta {
                let theta = 2.0 * PI * i as f64 / n_theta as f64;
                for j in 0..n_s {
                    let s = -1.0 + 2.0 * (j as f64 + 0.5) / n_s as f64;
                    let value = match mode.as_str() {
                        "analytic" => ph.radon(theta, s),
                        "numeric" => radon_line_integral(|p| ph.eval(p), theta, s, n_quad),
                        other => {
                            return Err(Error::InvalidParam(format!(
                                "unknown radon mode '{other}' (analytic | numeric)"
                            )))
                        }
                    };
                    samples.push((theta, s, value));
                }
            }
            io::write_sinogram_csv(&out, &samples)?;
            println!("wrote {} sinogram samples to {}", samples.len(), out.display());
            Ok(ExitCode::SUCCESS)
        }

        Command::Simulate {
            model,
            coeffs,
            variant,
            noise,
            k0,
            n1,
            n2,
            sampler,
            seed,
            realization,
            out,
        } => {
            match model.as_str() {
                "white-noise" => {
                    let path = coeffs.ok_or_else(|| {
                        Error::InvalidParam("white-noise model needs --coeffs".into())
                    })?;
                    let c = io::read_coefficients_csv(&path)?;
                    let obs = simulate_white_noise(&c, noise, k0, seed, realization)?;
                    io::write_coefficients_csv(&out, &obs.y)?;
                    println!(
                        "white-noise observation (epsilon = {noise}, k0 = {k0}) -> {}",
                        out.display()
                    );
                }
                "regression" => {
                    let obs = match sampler.as_str() {
                        "svd" => {
                            let path = coeffs.ok_or_else(|| {
                                Error::InvalidParam(
                                    "regression sampler 'svd' needs --coeffs".into(),
                                )
                            })?;
                            let c = io::read_coefficients_csv(&path)?;
                            let f = radon_sampler_from_coefficients(&c);
                            simulate_regression(f, n1, n2, noise, seed, realization)
                        }
                        "analytic" => {
                            let ph = load_phantom(variant, &None)?;
                            simulate_regression(
                                |theta, s| ph.radon(theta, s),
                                n1,
                                n2,
                                noise,
                                seed,
                                realization,
                            )
                        }
                        other => {
                            return Err(Error::InvalidParam(format!(
                                "unknown sampler '{other}' (svd | analytic)"
                            )))
                        }
                    };
                    io::write_grid_csv(&out, &obs.grid, obs.n1, obs.n2)?;
                    println!(
                        "regression observation ({n1} x {n2}, sigma = {noise}) -> {}",
                        out.display()
                    );
                }
                other => {
                    return Err(Error::InvalidParam(format!(
                        "unknown model '{other}' (white-noise | regression)"
                    )))
                }
            }
            Ok(ExitCode::SUCCESS)
        }

        Command::Estimate {
            model,
            obs,
            estimator,
            level,
            degree,
            cutoff,
            k0,
            out,
            render: render_path,
            resolution,
        } => {
            let y = match model.as_str() {
                "white-noise" => io::read_coefficients_csv(&obs)?,
                "regression" => {
                    let (grid, n1, n2) = io::read_grid_csv(&obs)?;
                    let observation =
                        RegressionObservation { grid, n1, n2, sigma: 0.0, seed: 0 };
                    riemann_svd_coeffs(&observation, k0)
                }
                other => {
                    return Err(Error::InvalidParam(format!(
                        "unknown model '{other}' (white-noise | regression)"
                    )))
                }
            };
            let spec = match estimator.as_str() {
                "needlet" => EstimatorSpec::Needlet {
                    level: level.ok_or_else(|| {
                        Error::InvalidParam("needlet estimator needs --level".into())
                    })?,
                    cutoff: cutoff.into(),
                },
                "svd" => EstimatorSpec::Svd {
                    max_degree: degree.ok_or_else(|| {
                        Error::InvalidParam("svd estimator needs --degree".into())
                    })?,
                },
                "naive" => EstimatorSpec::Naive,
                other => {
                    return Err(Error::InvalidParam(format!(
                        "unknown estimator '{other}' (needlet | svd | naive)"
                    )))
                }
            };
            let c_hat = radonlet::estimator::estimate(&y, &spec);
            io::write_coefficients_csv(&out, &c_hat)?;
            println!("estimate ({spec}) -> {}", out.display());
            if let Some(path) = render_path {
                let img = render(&c_hat, resolution);
                io::write_pgm(&path, &img)?;
                println!("rendered estimate to {}", path.display());
            }
            Ok(ExitCode::SUCCESS)
        }

        Command::Bench {
            config,
            model,
            noise,
            norm,
            k0,
            truth_degree,
            quad_degree,
            levels,
            svd_degrees,
            realizations,
            seed,
            variant,
            cutoff,
            n1,
            n2,
            out,
        } => {
            let mut cfg = BenchConfig::default();
            let mut grid_n1 = 64usize;
            let mut grid_n2 = 64usize;
            let mut model_name = "white-noise".to_string();
            if let Some(path) = &config {
                let map = io::read_config(path)?;
                apply_config_map(&map, &mut cfg, &mut model_name, &mut grid_n1, &mut grid_n2)?;
            }
            if let Some(v) = model {
                model_name = v;
            }
            if let Some(v) = noise {
                cfg.noise_levels = io::parse_list(&v)?;
            }
            if let Some(v) = norm {
                cfg.norms = v.split(',').map(Lp::parse).collect::<Result<Vec<_>, _>>()?;
            }
            if let Some(v) = k0 {
                cfg.k0 = v;
            }
            if let Some(v) = truth_degree {
                cfg.truth_degree = v;
            }
            if let Some(v) = quad_degree {
                cfg.quad_degree = v;
            }
            if let Some(v) = levels {
                cfg.needlet_levels = io::parse_list(&v)?;
            }
            if let Some(v) = svd_degrees {
                cfg.svd_degrees = io::parse_list(&v)?;
            }
            if let Some(v) = realizations {
                cfg.realizations = v;
            }
            if let Some(v) = seed {
                cfg.seed = v;
            }
            if let Some(v) = variant {
                cfg.variant = v.into();
            }
            if let Some(v) = cutoff {
                cfg.cutoff = v.into();
            }
            if let Some(v) = n1 {
                grid_n1 = v;
            }
            if let Some(v) = n2 {
                grid_n2 = v;
            }
            cfg.model = match model_name.as_str() {
                "white-noise" => ModelKind::WhiteNoise,
                "regression" => ModelKind::Regression { n1: grid_n1, n2: grid_n2 },
                other => {
                    return Err(Error::InvalidParam(format!(
                        "unknown model '{other}' (white-noise | regression)"
                    )))
                }
            };
            let started = std::time::Instant::now();
            let result = radonlet::bench::run_benchmark(&cfg)?;
            io::write_bench_csv(&out, &result)?;
            let sidecar = out.with_extension("config.txt");
            std::fs::write(&sidecar, format!("{cfg:#?}\n"))?;
            println!(
                "benchmark: {} rows in {:.1}s -> {} (config echoed to {})",
                result.rows.len(),
                started.elapsed().as_secs_f64(),
                out.display(),
                sidecar.display()
            );
            Ok(ExitCode::SUCCESS)
        }

        Command::Atoms { level, cutoff, kind, node_radius, resolution, out } => {
            let kind = match kind.as_str() {
                "father" => AtomKind::Father,
                "mother" => AtomKind::Mother,
                other => {
                    return Err(Error::InvalidParam(format!(
                        "unknown atom kind '{other}' (father | mother)"
                    )))
                }
            };
            let lvl = NeedletLevel::new(level, cutoff.into());
            let ring = lvl
                .rule()
                .rings()
                .iter()
                .min_by(|a, b| {
                    (a.radius - node_radius)
                        .abs()
                        .partial_cmp(&(b.radius - node_radius).abs())
                        .unwrap()
                })
                .expect("rule has rings")
                .start;
            let atom = lvl.atom(ring, kind);
            let n = resolution;
            let mut img = radonlet::bench::ImageGrid {
                width: n,
                height: n,
                values: vec![f64::NAN; n * n],
            };
            use rayon::prelude::*;
            img.values.par_chunks_mut(n).enumerate().for_each(|(row, chunk)| {
                let y = 1.0 - 2.0 * (row as f64 + 0.5) / n as f64;
                for (col, v) in chunk.iter_mut().enumerate() {
                    let x = -1.0 + 2.0 * (col as f64 + 0.5) / n as f64;
                    let r = x.hypot(y);
                    if r <= 1.0 {
                        *v = lvl
                            .eval(&atom, radonlet::svd::DiskPoint::new(r, y.atan2(x)).unwrap());
                    }
                }
            });
            io::write_pgm(&out, &img)?;
            println!(
                "rendered level-{level} {:?} atom at r = {:.3} -> {}",
                atom.kind,
                atom.node.r,
                out.display()
            );
            Ok(ExitCode::SUCCESS)
        }

        Command::Selftest { quick } => {
            let reports = radonlet::selftest::run_all(quick);
            let mut all_ok = true;
            for r in &reports {
                println!("{}", r.line());
                all_ok &= r.passed;
            }
            if all_ok {
                println!("all criteria passed");
                Ok(ExitCode::SUCCESS)
            } else {
                Err(Error::Validation("one or more acceptance criteria failed".into()))
            }
        }
    }
}

fn apply_config_map(
    map: &std::collections::BTreeMap<String, String>,
    cfg: &mut BenchConfig,
    model_name: &mut String,
    grid_n1: &mut usize,
    grid_n2: &mut usize,
) -> Result<(), Error> {
    let parse_u32 = |v: &str, what: &str| -> Result<u32, Error> {
        v.parse().map_err(|_| Error::Parse(format!("bad {what} '{v}'")))
    };
    if let Some(v) = map.get("model") {
        *model_name = v.clone();
    }
    if let Some(v) = map.get("noise") {
        cfg.noise_levels = io::parse_list(v)?;
    }
    if let Some(v) = map.get("norms") {
        cfg.norms = v.split(',').map(Lp::parse).collect::<Result<Vec<_>, _>>()?;
    }
    if let Some(v) = map.get("k0") {
        cfg.k0 = parse_u32(v, "k0")?;
    }
    if let Some(v) = map.get("truth_degree") {
        cfg.truth_degree = parse_u32(v, "truth_degree")?;
    }
    if let Some(v) = map.get("quad_degree") {
        cfg.quad_degree = parse_u32(v, "quad_degree")?;
    }
    if let Some(v) = map.get("levels") {
        cfg.needlet_levels = io::parse_list(v)?;
    }
    if let Some(v) = map.get("svd_degrees") {
        cfg.svd_degrees = io::parse_list(v)?;
    }
    if let Some(v) = map.get("realizations") {
        cfg.realizations = parse_u32(v, "realizations")?;
    }
    if let Some(v) = map.get("seed") {
        cfg.seed = v.parse().map_err(|_| Error::Parse(format!("bad seed '{v}'")))?;
    }
    if let Some(v) = map.get("n1") {
        *grid_n1 = v.parse().map_err(|_| Error::Parse(format!("bad n1 '{v}'")))?;
    }
    if let Some(v) = map.get("n2") {
        *grid_n2 = v.parse().map_err(|_| Error::Parse(format!("bad n2 '{v}'")))?;
    }
    if let Some(v) = map.get("variant") {
        cfg.variant = match v.as_str() {
            "original" => PhantomVariant::Original,
            "modified" => PhantomVariant::Modified,
            other => return Err(Error::Parse(format!("bad variant '{other}'"))),
        };
    }
    if let Some(v) = map.get("cutoff") {
        cfg.cutoff = match v.as_str() {
            "smooth" => CutoffKind::SmoothExp,
            "cosine" => CutoffKind::CosineTaper,
            "hard" => CutoffKind::Hard,
            other => return Err(Error::Parse(format!("bad cutoff '{other}'"))),
        };
    }
    Ok(())
}
