//! Thin command-line front end: parses flags, wires the library modules
//! together, and writes plain-text tables plus a resolved-config record next
//! to every output for byte-identical reruns.

use clap::{Args, Parser, Subcommand};
use scatlab::error::{cli_exit_code, Error, Result};
use scatlab::forward::{compute_far_field_table, BoundaryCondition};
use scatlab::geometry::RadialShape;
use scatlab::inverse::{
    distinguishability, reconstruct_shape, synthesize_cross_section_data, NoiseModel,
    ReconstructionConfig,
};
use scatlab::io;
use scatlab::mathcore::SphereGrid;
use scatlab::smatrix::{build_smatrix, cross_section_data, identity_residuals};
use scatlab::trace::{
    heat_trace_and_a0, phase_derivative_det, sphere_phase_derivative, sphere_phase_samples,
    t_window_samples, PhaseMethod, PhaseSamples,
};
use serde::Serialize;
use std::path::{Path, PathBuf};

#[derive(Parser)]
#[command(name = "scatlab", version, about = "Exterior acoustic scattering laboratory")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct CommonArgs {
    /// Shape file (JSON radial-harmonic format).
    #[arg(long)]
    shape: PathBuf,
    /// Wavenumber(s), comma separated.
    #[arg(long, value_delimiter = ',')]
    lambda: Vec<f64>,
    /// Sphere-grid order for the solver.
    #[arg(long, default_value_t = 24)]
    order: usize,
    /// Boundary condition: dirichlet | neumann.
    #[arg(long, default_value = "dirichlet")]
    bc: String,
    /// Output directory.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Subcommand)]
enum Command {
    /// Solve the exterior problem and write the far-field amplitude table.
    Forward(CommonArgs),
    /// Write cross sections C(lambda, theta) for a shape.
    CrossSection(CommonArgs),
    /// Run the amplitude / S-matrix identity suite and write the residuals.
    Verify(CommonArgs),
    /// Write sigma'(lambda) samples (partial-wave for spheres, det-S else).
    Phase(CommonArgs),
    /// Heat-smoothed trace and leading invariant |a0| (volume estimate).
    Heat {
        #[command(flatten)]
        common: CommonArgs,
        /// Fit window as A:B in the heat parameter t.
        #[arg(long, default_value = "0.02:0.08")]
        t_window: String,
    },
    /// Reconstruct a starlike shape from cross-section data.
    Reconstruct {
        /// Cross-section data file (text format).
        #[arg(long)]
        data: PathBuf,
        /// Optional initializer shape file; defaults to a radius heuristic.
        #[arg(long)]
        shape: Option<PathBuf>,
        /// Maximum harmonic degree of the recovered shape.
        #[arg(long, default_value_t = 0)]
        linv: usize,
        /// Tikhonov regularization weight.
        #[arg(long, default_value_t = 0.0)]
        alpha: f64,
        #[arg(long, default_value_t = 12)]
        order: usize,
        #[arg(long, default_value = "dirichlet")]
        bc: String,
        #[arg(long)]
        out: PathBuf,
    },
    /// Max cross-section separation of two shapes near lambda0.
    Distinguish {
        #[arg(long)]
        shape: PathBuf,
        #[arg(long)]
        shape2: PathBuf,
        /// Center frequency lambda0.
        #[arg(long, num_args = 1)]
        lambda: f64,
        #[arg(long, default_value_t = 16)]
        order: usize,
        #[arg(long, default_value = "dirichlet")]
        bc: String,
        #[arg(long)]
        out: PathBuf,
    },
    /// Synthesize cross-section data with optional fixed-seed noise.
    Synthesize {
        #[command(flatten)]
        common: CommonArgs,
        #[arg(long, default_value_t = 0.0)]
        noise_sigma: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Serialize)]
struct ResolvedConfig {
    command: String,
    shape: Option<String>,
    shape2: Option<String>,
    data: Option<String>,
    lambdas: Vec<f64>,
    order: usize,
    bc: String,
    linv: Option<usize>,
    alpha: Option<f64>,
    noise_sigma: Option<f64>,
    seed: Option<u64>,
    t_window: Option<String>,
    out: String,
}

impl ResolvedConfig {
    fn new(command: &str, order: usize, bc: &str, lambdas: &[f64], out: &Path) -> Self {
        Self {
            command: command.to_string(),
            shape: None,
            shape2: None,
            data: None,
            lambdas: lambdas.to_vec(),
            order,
            bc: bc.to_string(),
            linv: None,
            alpha: None,
            noise_sigma: None,
            seed: None,
            t_window: None,
            out: out.display().to_string(),
        }
    }
}

fn prepare_out(out: &Path) -> Result<()> {
    std::fs::create_dir_all(out)?;
    Ok(())
}

fn write_config(out: &Path, config: &ResolvedConfig) -> Result<()> {
    let text = serde_json::to_string_pretty(config)
        .map_err(|e| Error::Parse(format!("config serialization: {e}")))?;
    std::fs::write(out.join("config.json"), text + "\n")?;
    Ok(())
}

fn parse_lambdas(lambdas: &[f64]) -> Result<Vec<f64>> {
    if lambdas.is_empty() {
        return Err(Error::InvalidArgument("at least one --lambda value required".into()));
    }
    for l in lambdas {
        if !(*l > 0.0) {
            return Err(Error::InvalidArgument(format!("lambda must be positive, got {l}")));
        }
    }
    Ok(lambdas.to_vec())
}

fn parse_t_window(spec: &str) -> Result<(f64, f64)> {
    let parts: Vec<&str> = spec.split(':').collect();
    if parts.len() != 2 {
        return Err(Error::InvalidArgument(format!("--t-window expects A:B, got '{spec}'")));
    }
    let a = parts[0]
        .parse::<f64>()
        .map_err(|_| Error::Parse(format!("bad t-window bound '{}'", parts[0])))?;
    let b = parts[1]
        .parse::<f64>()
        .map_err(|_| Error::Parse(format!("bad t-window bound '{}'", parts[1])))?;
    Ok((a, b))
}

/// Sphere radius if the shape is a pure ball, else None.
fn sphere_radius(shape: &RadialShape) -> Option<f64> {
    let c0 = shape.coeffs()[0] / (4.0 * std::f64::consts::PI).sqrt();
    if shape.coeffs().iter().skip(1).all(|c| *c == 0.0) {
        Some(c0)
    } else {
        None
    }
}

fn load_common(
    common: &CommonArgs,
) -> Result<(RadialShape, Vec<f64>, SphereGrid, BoundaryCondition)> {
    let shape = io::read_shape(&common.shape)?;
    let lambdas = parse_lambdas(&common.lambda)?;
    let grid = SphereGrid::build(common.order)?;
    let bc: BoundaryCondition = common.bc.parse()?;
    Ok((shape, lambdas, grid, bc))
}

fn common_config(name: &str, common: &CommonArgs, lambdas: &[f64]) -> ResolvedConfig {
    let mut cfg = ResolvedConfig::new(name, common.order, &common.bc, lambdas, &common.out);
    cfg.shape = Some(common.shape.display().to_string());
    cfg
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Forward(common) => {
            let (shape, lambdas, grid, bc) = load_common(&common)?;
            prepare_out(&common.out)?;
            let table = compute_far_field_table(&shape, &lambdas, &grid, bc)?;
            io::write_far_field(&common.out.join("far_field.txt"), &table)?;
            write_config(&common.out, &common_config("forward", &common, &lambdas))?;
        }
        Command::CrossSection(common) => {
            let (shape, lambdas, grid, bc) = load_common(&common)?;
            prepare_out(&common.out)?;
            let table = compute_far_field_table(&shape, &lambdas, &grid, bc)?;
            let data = cross_section_data(
                &table,
                &format!("shape {}", common.shape.display()),
            )?;
            io::write_cross_section(&common.out.join("cross_section.txt"), &data)?;
            write_config(&common.out, &common_config("cross-section", &common, &lambdas))?;
        }
        Command::Verify(common) => {
            let (shape, lambdas, grid, bc) = load_common(&common)?;
            prepare_out(&common.out)?;
            let table = compute_far_field_table(&shape, &lambdas, &grid, bc)?;
            let mut text = String::new();
            for li in 0..lambdas.len() {
                text.push_str(&identity_residuals(&table, li)?.to_text());
            }
            std::fs::write(common.out.join("residuals.txt"), text)?;
            write_config(&common.out, &common_config("verify", &common, &lambdas))?;
        }
        Command::Phase(common) => {
            let (shape, lambdas, grid, bc) = load_common(&common)?;
            prepare_out(&common.out)?;
            let mut sorted = lambdas.clone();
            sorted.sort_by(|a, b| a.partial_cmp(b).unwrap());
            let phase = if let Some(a) = sphere_radius(&shape) {
                let sigma_prime = sorted
                    .iter()
                    .map(|&l| sphere_phase_derivative(a, l, bc))
                    .collect::<Result<Vec<_>>>()?;
                PhaseSamples { lambdas: sorted, sigma_prime, method: PhaseMethod::PartialWave }
            } else {
                let mut sigma_prime = Vec::with_capacity(sorted.len());
                for &l in &sorted {
                    let h = l * 1e-3;
                    let stencil = [l - h, l, l + h];
                    let table = compute_far_field_table(&shape, &stencil, &grid, bc)?;
                    let sm = build_smatrix(&table, 0)?;
                    let s0 = build_smatrix(&table, 1)?;
                    let sp = build_smatrix(&table, 2)?;
                    sigma_prime.push(phase_derivative_det(&sm, &s0, &sp)?);
                }
                PhaseSamples { lambdas: sorted, sigma_prime, method: PhaseMethod::DetS }
            };
            phase.validate()?;
            io::write_phase_samples(&common.out.join("phase.txt"), &phase)?;
            write_config(&common.out, &common_config("phase", &common, &lambdas))?;
        }
        Command::Heat { common, t_window } => {
            let shape = io::read_shape(&common.shape)?;
            let bc: BoundaryCondition = common.bc.parse()?;
            prepare_out(&common.out)?;
            let (ta, tb) = parse_t_window(&t_window)?;
            let lambda_max = common.lambda.first().copied().unwrap_or(40.0);
            let a = sphere_radius(&shape).ok_or_else(|| {
                Error::InvalidArgument(
                    "heat requires a sphere shape (the partial-wave phase route)".into(),
                )
            })?;
            let n = (lambda_max * 100.0).ceil() as usize;
            let phase = sphere_phase_samples(a, bc, lambda_max, n.max(100))?;
            let ts = t_window_samples(ta, tb, 25)?;
            let fit = heat_trace_and_a0(&phase, &ts)?;
            io::write_phase_samples(&common.out.join("phase.txt"), &phase)?;
            io::write_heat_fit(&common.out.join("heat.txt"), &fit)?;
            let mut cfg = common_config("heat", &common, &[lambda_max]);
            cfg.t_window = Some(t_window);
            write_config(&common.out, &cfg)?;
        }
        Command::Reconstruct { data, shape, linv, alpha, order, bc, out } => {
            let data_set = io::read_cross_section(&data)?;
            let bc_parsed: BoundaryCondition = bc.parse()?;
            prepare_out(&out)?;
            let init = match &shape {
                Some(p) => {
                    let s = io::read_shape(p)?;
                    if s.max_degree() != linv {
                        // pad the coefficient vector up to the requested degree
                        let mut coeffs = vec![0.0; scatlab::mathcore::sh_len(linv)];
                        let n = s.coeffs().len().min(coeffs.len());
                        coeffs[..n].copy_from_slice(&s.coeffs()[..n]);
                        RadialShape::new(linv, coeffs)?
                    } else {
                        s
                    }
                }
                None => {
                    // radius heuristic from the cross-section magnitude
                    let mean: f64 = data_set.values[0].iter().sum::<f64>()
                        / data_set.values[0].len() as f64;
                    let radius = (mean / (4.0 * std::f64::consts::PI)).sqrt().max(0.1);
                    let mut coeffs = vec![0.0; scatlab::mathcore::sh_len(linv)];
                    coeffs[0] = radius * (4.0 * std::f64::consts::PI).sqrt();
                    RadialShape::new(linv, coeffs)?
                }
            };
            let config = ReconstructionConfig {
                max_degree: linv,
                alpha,
                grid_order: order,
                boundary_condition: bc_parsed,
                ..Default::default()
            };
            let result = reconstruct_shape(&data_set, &init, &config)?;
            io::write_shape(&out.join("recovered_shape.json"), &result.shape)?;
            let mut log = String::from("# iteration misfit gradient_norm damping\n");
            for rec in &result.log {
                log.push_str(&format!(
                    "{} {:.16e} {:.16e} {:.16e}\n",
                    rec.iteration, rec.misfit, rec.gradient_norm, rec.damping
                ));
            }
            log.push_str(&format!("# converged {}\n", result.converged));
            std::fs::write(out.join("convergence_log.txt"), log)?;
            let grid = SphereGrid::build(order)?;
            let residual_data = synthesize_cross_section_data(
                &result.shape,
                &data_set.lambdas,
                &grid,
                bc_parsed,
                NoiseModel::None,
            )?;
            io::write_cross_section(&out.join("model_cross_section.txt"), &residual_data)?;
            let mut cfg =
                ResolvedConfig::new("reconstruct", order, &bc, &data_set.lambdas, &out);
            cfg.data = Some(data.display().to_string());
            cfg.shape = shape.map(|p| p.display().to_string());
            cfg.linv = Some(linv);
            cfg.alpha = Some(alpha);
            write_config(&out, &cfg)?;
        }
        Command::Distinguish { shape, shape2, lambda, order, bc, out } => {
            let s1 = io::read_shape(&shape)?;
            let s2 = io::read_shape(&shape2)?;
            let bc_parsed: BoundaryCondition = bc.parse()?;
            let grid = SphereGrid::build(order)?;
            prepare_out(&out)?;
            let sep = distinguishability(&s1, &s2, lambda, &grid, bc_parsed)?;
            std::fs::write(
                out.join("separation.txt"),
                format!("# cross-section separation near lambda0\nseparation {sep:.16e}\n"),
            )?;
            let mut cfg = ResolvedConfig::new("distinguish", order, &bc, &[lambda], &out);
            cfg.shape = Some(shape.display().to_string());
            cfg.shape2 = Some(shape2.display().to_string());
            write_config(&out, &cfg)?;
        }
        Command::Synthesize { common, noise_sigma, seed } => {
            let (shape, lambdas, grid, bc) = load_common(&common)?;
            prepare_out(&common.out)?;
            let noise = if noise_sigma > 0.0 {
                NoiseModel::Gaussian { sigma: noise_sigma, seed }
            } else {
                NoiseModel::None
            };
            let data = synthesize_cross_section_data(&shape, &lambdas, &grid, bc, noise)?;
            io::write_cross_section(&common.out.join("cross_section.txt"), &data)?;
            let mut cfg = common_config("synthesize", &common, &lambdas);
            cfg.noise_sigma = Some(noise_sigma);
            cfg.seed = Some(seed);
            write_config(&common.out, &cfg)?;
        }
    }
    Ok(())
}

fn main() {
    let cli = Cli::parse();
    if let Err(err) = run(cli) {
        eprintln!("{err}");
        std::process::exit(cli_exit_code(&err));
    }
}
