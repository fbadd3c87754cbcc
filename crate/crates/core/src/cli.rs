//! Command-line front end.
//!
//! Exit codes: 0 success, 1 usage, 2 parse or validation failure, 3 runtime
//! failure. A diverging simulation is a result, not a failure.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::analysis::{self, AnalysisError, CriterionReport, NormSpec};
use crate::dynamics::{simulate_continuous, simulate_discrete, MapSpec};
use crate::hypergraph::{Hypergraph, HypergraphError};
use crate::io::{self, IoError, Mode, RunConfig};
use crate::matrix::SymMatrix;
use crate::operators::{build_bm, build_c, build_lw, clique_laplacian};
use crate::presets::{self, PresetError};
use crate::spectra::{self, eig_sym, SpectraError, ZERO_TOL};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_RUNTIME: i32 = 3;

#[derive(Debug)]
enum CliError {
    Usage(String),
    Input(String),
    Runtime(String),
}

impl CliError {
    fn code(&self) -> i32 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Input(_) => EXIT_INPUT,
            CliError::Runtime(_) => EXIT_RUNTIME,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Usage(m) | CliError::Input(m) | CliError::Runtime(m) => m,
        }
    }
}

impl From<IoError> for CliError {
    fn from(e: IoError) -> Self {
        match e {
            IoError::Io(_) => CliError::Runtime(e.to_string()),
            _ => CliError::Input(e.to_string()),
        }
    }
}

impl From<HypergraphError> for CliError {
    fn from(e: HypergraphError) -> Self {
        CliError::Input(e.to_string())
    }
}

impl From<SpectraError> for CliError {
    fn from(e: SpectraError) -> Self {
        match e {
            SpectraError::NotSymmetric { .. } => CliError::Input(e.to_string()),
            _ => CliError::Runtime(e.to_string()),
        }
    }
}

impl From<AnalysisError> for CliError {
    fn from(e: AnalysisError) -> Self {
        match e {
            AnalysisError::Spectra(s) => s.into(),
            AnalysisError::NonFinite | AnalysisError::ZeroDerivative(_) => CliError::Runtime(e.to_string()),
            _ => CliError::Input(e.to_string()),
        }
    }
}

impl From<PresetError> for CliError {
    fn from(e: PresetError) -> Self {
        match e {
            PresetError::Unknown(_) => CliError::Usage(e.to_string()),
            PresetError::Analysis(a) => a.into(),
            PresetError::Spectra(s) => s.into(),
            PresetError::Io(i) => i.into(),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Runtime(e.to_string())
    }
}

#[derive(Parser, Debug)]
#[command(name = "hypersync", version, about = "Hypergraph diffusion operators, spectra and synchronization checks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Write an operator matrix as CSV.
    BuildMatrix {
        /// Edge-list file.
        input: PathBuf,
        #[arg(long, value_enum, default_value_t = OperatorKind::Lw)]
        operator: OperatorKind,
        /// Edge size for `--operator bm`.
        #[arg(long)]
        m: Option<usize>,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Eigenvalues (ascending) of an operator, or of `I + εM` with `--epsilon`.
    Spectrum {
        input: PathBuf,
        #[arg(long, value_enum, default_value_t = OperatorKind::Lw)]
        operator: OperatorKind,
        #[arg(long)]
        m: Option<usize>,
        #[arg(long)]
        epsilon: Option<f64>,
        /// Also print eigenvectors, one per line.
        #[arg(long)]
        vectors: bool,
    },
    /// Run a simulation described by a RunConfig file.
    Simulate(SimulateArgs),
    /// Evaluate synchronization criteria.
    Check(CheckArgs),
    /// Structural bounds: diameter, b_m and the combinatorial coupling window.
    Bounds {
        input: PathBuf,
        #[arg(long)]
        sigma: Option<f64>,
    },
    /// Reproduce a named scenario.
    Preset {
        #[arg(value_parser = clap::builder::PossibleValuesParser::new(presets::PRESET_NAMES))]
        name: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Write a connected random hypergraph as an edge list.
    Generate {
        #[arg(long, default_value_t = io::MATCHED_VERTICES)]
        vertices: usize,
        #[arg(long, default_value_t = io::MATCHED_EDGES)]
        edges: usize,
        #[arg(long, default_value_t = 2)]
        min_size: usize,
        #[arg(long, default_value_t = 6)]
        max_size: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        output: Option<PathBuf>,
    },
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum OperatorKind {
    Lw,
    C,
    Bm,
    Clique,
}

#[derive(Args, Debug)]
struct SimulateArgs {
    #[arg(long)]
    config: PathBuf,
    #[arg(long, conflicts_with = "continuous")]
    discrete: bool,
    #[arg(long)]
    continuous: bool,
    /// Edge-list file; overrides `hypergraph=` in the config.
    #[arg(long)]
    hypergraph: Option<PathBuf>,
    /// Trajectory CSV path; overrides `output=` in the config.
    #[arg(long)]
    output: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = OperatorKind::Lw)]
    operator: OperatorKind,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum CriterionId {
    GlobalDiscrete,
    GlobalDiscreteFeqg,
    EigenvalueInterval,
    CouplingInterval,
    LyapunovDiscrete,
    ContinuousGlobal,
}

#[derive(Args, Debug)]
struct CheckArgs {
    #[arg(long = "criterion", value_enum, required = true)]
    criteria: Vec<CriterionId>,
    /// Edge-list file supplying L_w.
    #[arg(long)]
    hypergraph: Option<PathBuf>,
    /// Use this value for ‖L_w‖ instead of computing it.
    #[arg(long)]
    lw_norm: Option<f64>,
    #[arg(long)]
    epsilon: Option<f64>,
    #[arg(long)]
    kf: Option<f64>,
    #[arg(long)]
    kg: Option<f64>,
    /// Growth exponent; estimated from `--f`, `--g`, `--s0` when absent.
    #[arg(long)]
    sigma: Option<f64>,
    #[arg(long)]
    f: Option<String>,
    #[arg(long)]
    g: Option<String>,
    #[arg(long, default_value_t = 0.5)]
    s0: f64,
    /// Scalar Lyapunov weight `A` (k = 1).
    #[arg(long, default_value_t = 1.0)]
    a: f64,
    #[arg(long, default_value_t = 1)]
    k: usize,
}

/// Parses `argv` (including the program name) and runs the command.
pub fn cli_main<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let rendered = e.render().to_string();
            if code == EXIT_OK {
                let _ = write!(out, "{rendered}");
            } else {
                let _ = write!(err, "{rendered}");
            }
            return code;
        }
    };
    match dispatch(cli.command, out, err) {
        Ok(()) => EXIT_OK,
        Err(e) => {
            let _ = writeln!(err, "error: {}", e.message());
            e.code()
        }
    }
}

fn load(path: &Path) -> Result<Hypergraph, CliError> {
    let text = fs::read_to_string(path).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
    Ok(io::parse_edge_list(&text)?.hypergraph)
}

fn operator(g: &Hypergraph, kind: OperatorKind, m: Option<usize>) -> Result<SymMatrix, CliError> {
    Ok(match kind {
        OperatorKind::Lw => build_lw(g),
        OperatorKind::C => build_c(g),
        OperatorKind::Clique => clique_laplacian(g),
        OperatorKind::Bm => {
            let m = m.or_else(|| g.uniformity()).ok_or_else(|| {
                CliError::Usage("--operator bm needs --m for a non-uniform hypergraph".into())
            })?;
            if m < 2 {
                return Err(CliError::Usage("--m must be at least 2".into()));
            }
            build_bm(g, m)
        }
    })
}

fn join(values: &[f64]) -> String {
    values.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(",")
}

fn dispatch(cmd: Command, out: &mut dyn Write, err: &mut dyn Write) -> Result<(), CliError> {
    match cmd {
        Command::BuildMatrix { input, operator: kind, m, output } => {
            let g = load(&input)?;
            let csv = io::matrix_csv(&operator(&g, kind, m)?);
            match output {
                Some(p) => fs::write(p, csv)?,
                None => out.write_all(csv.as_bytes())?,
            }
        }
        Command::Spectrum { input, operator: kind, m, epsilon, vectors } => {
            let g = load(&input)?;
            let mut mat = operator(&g, kind, m)?;
            if let Some(eps) = epsilon {
                mat = mat.affine(1.0, eps);
            }
            let spec = eig_sym(&mat)?;
            writeln!(out, "eigenvalues={}", join(spec.eigenvalues()))?;
            if vectors {
                for i in 0..spec.len() {
                    writeln!(out, "eigenvector.{i}={}", join(spec.eigenvector(i)))?;
                }
            }
        }
        Command::Simulate(args) => simulate(args, out, err)?,
        Command::Check(args) => check(args, out)?,
        Command::Bounds { input, sigma } => {
            let g = load(&input)?;
            if !g.is_connected() {
                return Err(HypergraphError::DisconnectedHypergraph.into());
            }
            let c = build_c(&g);
            let d = analysis::diameter_bound(&g, &eig_sym(&c)?)?;
            writeln!(out, "diameter={}", d.actual)?;
            writeln!(out, "diameter_bound={}", d.bound)?;
            writeln!(out, "diameter_bound_holds={}", d.holds)?;
            if g.uniformity().is_some() {
                let b = analysis::uniform_upper_bound_bm(&g)?;
                writeln!(out, "b_m={}", b.b_m)?;
                writeln!(out, "lambda_max_abs={}", b.lambda_max_abs)?;
                writeln!(out, "b_m_holds={}", b.holds)?;
                if let Some(s) = sigma {
                    let w = analysis::structural_coupling_window(&g, s)?;
                    writeln!(out, "window_lower={}", w.lower)?;
                    writeln!(out, "window_lower_clamped={}", w.lower_clamped)?;
                    writeln!(out, "window_upper={}", w.upper)?;
                    writeln!(out, "window_empty={}", w.is_empty)?;
                }
            } else {
                writeln!(out, "b_m=not_uniform")?;
            }
        }
        Command::Preset { name, seed } => {
            let report = presets::run_preset(&name, seed)?;
            out.write_all(report.to_key_value().as_bytes())?;
        }
        Command::Generate { vertices, edges, min_size, max_size, seed, output } => {
            let g = io::generate_connected(vertices, edges, min_size, max_size, seed)?;
            let text = io::write_edge_list(&g)?;
            match output {
                Some(p) => fs::write(p, text)?,
                None => out.write_all(text.as_bytes())?,
            }
        }
    }
    Ok(())
}

fn simulate(args: SimulateArgs, out: &mut dyn Write, err: &mut dyn Write) -> Result<(), CliError> {
    let text = fs::read_to_string(&args.config)
        .map_err(|e| CliError::Input(format!("{}: {e}", args.config.display())))?;
    let mut cfg = RunConfig::parse(&text)?;
    if args.discrete {
        cfg.mode = Mode::Discrete;
    }
    if args.continuous {
        cfg.mode = Mode::Continuous;
    }
    let graph_path = match (&args.hypergraph, &cfg.hypergraph) {
        (Some(p), _) => p.clone(),
        // relative to the config file
        (None, Some(p)) => args.config.parent().unwrap_or(Path::new(".")).join(p),
        (None, None) => return Err(CliError::Usage("no hypergraph given (--hypergraph or hypergraph=)".into())),
    };
    let g = load(&graph_path)?;
    let l = operator(&g, args.operator, None)?;
    let x0 = cfg.initial_state(g.n_vertices());
    let traj = match cfg.mode {
        Mode::Discrete => simulate_discrete(&x0, &cfg.discrete(), &l),
        Mode::Continuous => {
            simulate_continuous(&x0, &cfg.continuous(), &l).map_err(|e| CliError::Input(e.to_string()))?
        }
    };
    let output = args.output.or_else(|| cfg.output.as_ref().map(PathBuf::from));
    let summary = format!(
        "scenario={}\ntermination={}\nsteps={}\nfinal_sync_error={}\n",
        cfg.scenario,
        traj.termination,
        traj.steps,
        traj.final_sync_error()
    );
    match output {
        Some(p) => {
            io::export_trajectory_csv(&traj, &p)?;
            out.write_all(summary.as_bytes())?;
        }
        None => {
            out.write_all(io::trajectory_csv(&traj).as_bytes())?;
            err.write_all(summary.as_bytes())?;
        }
    }
    Ok(())
}

fn need<T: Copy>(v: Option<T>, flag: &str) -> Result<T, CliError> {
    v.ok_or_else(|| CliError::Usage(format!("this criterion needs {flag}")))
}

fn parse_map(s: &Option<String>, flag: &str) -> Result<MapSpec, CliError> {
    s.as_deref()
        .ok_or_else(|| CliError::Usage(format!("this criterion needs {flag}")))?
        .parse()
        .map_err(|e: crate::dynamics::DynamicsError| CliError::Input(e.to_string()))
}

fn check(args: CheckArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let lw = match &args.hypergraph {
        Some(p) => Some(build_lw(&load(p)?)),
        None => None,
    };
    let need_lw = || lw.as_ref().ok_or_else(|| CliError::Usage("this criterion needs --hypergraph".into()));
    let eigenvalues = || -> Result<Vec<f64>, CliError> { Ok(eig_sym(need_lw()?)?.eigenvalues().to_vec()) };
    let sigma = || -> Result<f64, CliError> {
        if let Some(s) = args.sigma {
            return Ok(s);
        }
        let f = parse_map(&args.f, "--sigma or --f")?;
        let g = parse_map(&args.g, "--sigma or --g")?;
        Ok(analysis::sigma_estimate(
            &f,
            &g,
            &[args.s0],
            &NormSpec::identity(1),
            analysis::DEFAULT_BURN_IN,
            analysis::DEFAULT_HORIZON,
        )?)
    };
    let mut first = true;
    for id in &args.criteria {
        let report: CriterionReport = match id {
            CriterionId::GlobalDiscrete => {
                let norm = match args.lw_norm {
                    Some(v) => v,
                    None => spectra::operator_norm(need_lw()?)?,
                };
                analysis::global_discrete(need(args.kf, "--kf")?, need(args.kg, "--kg")?, need(args.epsilon, "--epsilon")?, norm)
            }
            CriterionId::GlobalDiscreteFeqg => {
                analysis::global_discrete_feqg(need(args.kf, "--kf")?, need(args.epsilon, "--epsilon")?, need_lw()?)?
            }
            CriterionId::EigenvalueInterval => analysis::eigenvalue_interval_check(
                sigma()?,
                need(args.epsilon, "--epsilon")?,
                &eigenvalues()?,
                ZERO_TOL,
                None,
            )?,
            CriterionId::CouplingInterval => {
                let s = sigma()?;
                let spec = eig_sym(need_lw()?)?;
                let ext = spectra::nonzero_extremes(&spec, ZERO_TOL)?;
                let ci = analysis::coupling_interval(s, ext.lambda_min_abs, ext.lambda_max_abs)?;
                CriterionReport {
                    criterion: "coupling-interval".into(),
                    inputs: vec![("sigma".into(), s)],
                    quantities: vec![
                        ("lambda_min_abs".into(), ext.lambda_min_abs),
                        ("lambda_max_abs".into(), ext.lambda_max_abs),
                        ("lower".into(), ci.lower),
                        ("upper".into(), ci.upper),
                    ],
                    verdict: if ci.is_empty {
                        analysis::Verdict::NotGuaranteed
                    } else {
                        analysis::Verdict::Guaranteed
                    },
                    margin: ci.upper - ci.lower,
                }
            }
            CriterionId::LyapunovDiscrete => {
                let f = parse_map(&args.f, "--f")?;
                let g = parse_map(&args.g, "--g")?;
                let jf = f.jacobian(&[args.s0]);
                let jg = g.jacobian(&[args.s0]);
                let nonzero: Vec<f64> = eigenvalues()?;
                let scale = nonzero.iter().fold(0.0f64, |m, v| m.max(v.abs()));
                let nonzero: Vec<f64> = nonzero.into_iter().filter(|v| v.abs() > ZERO_TOL * scale).collect();
                analysis::lyapunov_discrete_check(
                    &jg,
                    &jf,
                    need(args.epsilon, "--epsilon")?,
                    &nonzero,
                    &crate::matrix::Matrix::scalar(1, args.a),
                )?
            }
            CriterionId::ContinuousGlobal => {
                analysis::continuous_global_check(&parse_map(&args.f, "--f")?, args.k, need_lw()?)?
            }
        };
        if !first {
            writeln!(out)?;
        }
        first = false;
        out.write_all(report.to_key_value().as_bytes())?;
    }
    Ok(())
}
