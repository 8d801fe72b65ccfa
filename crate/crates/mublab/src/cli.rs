//! Command-line front end: runs kernels, sweeps, and checks from config
//! files and writes CSV/JSON artifacts for offline inspection.
//!
//! Exit codes: 0 success, 2 configuration/validation error, 3 numeric domain
//! error (caustic, blow-up, mode caustic). Every artifact records the tool
//! version, a SHA-256 of its inputs, and the seed, so identical runs are
//! byte-identical.

use ndarray::Array1;
use num_complex::Complex64 as C64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use serde_json::json;
use sha2::{Digest, Sha256};
use std::fs;
use std::path::{Path, PathBuf};

use crate::error::Error;
use crate::field::{
    field_short_time_phase, field_transition_phase, rescale_lagrangian_4form, FieldConfig,
    FieldConfigJson,
};
use crate::kernels::{free_kernel, harmonic_kernel};
use crate::mub::{insertion_identity, is_hadamard, random_basis, MatrixJson};
use crate::numerics::grid::{GridSpec, PhysicalUnits};
use crate::numerics::linalg::unitarity_deviation;
use crate::trotter::{composed_kernel, KernelMatrix, PotentialSpec, SpectralOracle, TrotterPlan};
use crate::unbiasedness::{asymptotic_mub_sweep, riccati_solve, scaling_check};

pub const TOOL_NAME: &str = "mublab";
pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

/// Emit the short-time comparison footer in `field-phase` when t is at or
/// below this value.
pub const SHORT_TIME_FOOTER_THRESHOLD: f64 = 1e-2;

/// Error carrying the process exit code.
#[derive(Debug)]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

impl CliError {
    pub fn config(message: impl Into<String>) -> Self {
        Self {
            code: 2,
            message: message.into(),
        }
    }

    pub fn numeric(message: impl Into<String>) -> Self {
        Self {
            code: 3,
            message: message.into(),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::CausticSingularity { .. }
            | Error::NonPositiveTime { .. }
            | Error::NonPositiveSample { .. }
            | Error::NonUnitaryKernel { .. }
            | Error::PhaseUnwrapFailure { .. }
            | Error::BlowUp { .. }
            | Error::ModeCaustic { .. }
            | Error::NotUnbiased { .. } => 3,
            _ => 2,
        };
        Self {
            code,
            message: e.to_string(),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        Self::config(format!("io error: {e}"))
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;

fn fmt_float(x: f64) -> String {
    format!("{x:.16e}")
}

/// Units block of the run configuration.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct UnitsConfig {
    pub hbar: f64,
    pub mass: f64,
}

/// Grid block of the run configuration.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridConfig {
    pub n_points: usize,
    pub x_min: f64,
    pub x_max: f64,
}

/// Kernel generation route for the `kernel` command.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum KernelMethod {
    Oracle,
    Trotter,
    ClosedForm,
}

impl KernelMethod {
    fn label(&self) -> &'static str {
        match self {
            Self::Oracle => "oracle",
            Self::Trotter => "trotter",
            Self::ClosedForm => "closed_form",
        }
    }
}

/// Run configuration consumed by `kernel`, `deficit-sweep`, and
/// `scaling-check`. The published schema lives at
/// schemas/run_config.schema.json; parsing is strict (unknown fields are
/// rejected) and the invariants below are checked before any computation.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub units: UnitsConfig,
    pub grid: GridConfig,
    pub potential: PotentialSpec,
    /// Times to sweep, sorted strictly descending.
    pub sweep: Vec<f64>,
    pub seed: u64,
    /// Central window fraction in (0, 1].
    pub window: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output_path: Option<String>,
    /// Kernel generation route; defaults to the oracle.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub method: Option<KernelMethod>,
    /// Slice count for the trotter method.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n_slices: Option<usize>,
}

impl RunConfig {
    pub fn load(path: &Path) -> CliResult<(Self, String)> {
        let bytes = fs::read(path)
            .map_err(|e| CliError::config(format!("cannot read config {}: {e}", path.display())))?;
        let config: RunConfig = serde_json::from_slice(&bytes)
            .map_err(|e| CliError::config(format!("config does not match the schema: {e}")))?;
        config.validate()?;
        Ok((config, sha256_hex(&bytes)))
    }

    pub fn units(&self) -> CliResult<PhysicalUnits> {
        PhysicalUnits::new(self.units.hbar, self.units.mass).map_err(CliError::from)
    }

    pub fn grid_spec(&self) -> CliResult<GridSpec> {
        GridSpec::new(self.grid.n_points, self.grid.x_min, self.grid.x_max).map_err(CliError::from)
    }

    pub fn validate(&self) -> CliResult<()> {
        self.units()?;
        self.grid_spec()?;
        self.potential.validate()?;
        if !(self.window > 0.0 && self.window <= 1.0) {
            return Err(CliError::config(format!(
                "window must lie in (0, 1], got {}",
                self.window
            )));
        }
        if self.sweep.iter().any(|t| !t.is_finite()) {
            return Err(CliError::config("sweep times must be finite"));
        }
        Ok(())
    }
}

fn sha256_hex(bytes: &[u8]) -> String {
    let mut hasher = Sha256::new();
    hasher.update(bytes);
    let digest = hasher.finalize();
    digest.iter().map(|b| format!("{b:02x}")).collect()
}

fn header_line(config_hash: &str, seed: u64) -> String {
    format!("# {TOOL_NAME} {TOOL_VERSION} config_sha256={config_hash} seed={seed}\n")
}

fn meta_json(config_hash: &str, seed: u64) -> serde_json::Value {
    json!({
        "tool": TOOL_NAME,
        "version": TOOL_VERSION,
        "config_sha256": config_hash,
        "seed": seed,
    })
}

fn write_artifact(output: Option<&Path>, content: &str) -> CliResult<()> {
    match output {
        Some(path) => {
            fs::write(path, content)?;
            Ok(())
        }
        None => {
            print!("{content}");
            Ok(())
        }
    }
}

fn complex_json(z: C64) -> serde_json::Value {
    json!({ "re": z.re, "im": z.im })
}

/// Sampled closed-form kernel matrix for the `closed_form` method.
fn closed_form_kernel(
    grid: &GridSpec,
    v: &PotentialSpec,
    t: f64,
    units: &PhysicalUnits,
) -> CliResult<KernelMatrix> {
    let h = grid.spacing();
    let xs: Vec<f64> = grid.nodes().collect();
    let n = grid.n_points();
    let mut entries = ndarray::Array2::zeros((n, n));
    match v {
        PotentialSpec::Free => {
            for i in 0..n {
                for j in 0..n {
                    entries[[i, j]] =
                        free_kernel(xs[i], xs[j], t, units).map_err(CliError::from)? * h;
                }
            }
        }
        PotentialSpec::Harmonic { omega } => {
            for i in 0..n {
                for j in 0..n {
                    entries[[i, j]] = harmonic_kernel(xs[i], xs[j], t, *omega, units)
                        .map_err(CliError::from)?
                        * h;
                }
            }
        }
        other => {
            return Err(CliError::config(format!(
                "closed_form method needs a free or harmonic potential, got {other}"
            )))
        }
    }
    KernelMatrix::new(*grid, t, entries).map_err(CliError::from)
}

/// `kernel`: write kernel moduli and phases over the central window, one row
/// per (x, y, t): columns x,y,t,abs,phase,method.
pub fn cmd_kernel(config: &RunConfig, config_hash: &str, output: Option<&Path>) -> CliResult<()> {
    if config.sweep.is_empty() {
        return Err(CliError::config(
            "schema violation: sweep (t_list) must be non-empty",
        ));
    }
    for &t in &config.sweep {
        if !(t > 0.0) {
            return Err(CliError::config(format!(
                "sweep times must be positive, got {t}"
            )));
        }
    }
    let units = config.units()?;
    let grid = config.grid_spec()?;
    let method = config.method.unwrap_or(KernelMethod::Oracle);
    let (lo, hi) = grid.window_bounds(config.window).map_err(CliError::from)?;
    let mut out = header_line(config_hash, config.seed);
    out.push_str("x,y,t,abs,phase,method\n");
    let oracle = if method == KernelMethod::Oracle {
        Some(SpectralOracle::new(&grid, &config.potential, &units).map_err(CliError::from)?)
    } else {
        None
    };
    for &t in &config.sweep {
        let kernel = match method {
            KernelMethod::Oracle => oracle.as_ref().expect("built above").kernel(t),
            KernelMethod::Trotter => {
                let n_slices = config.n_slices.ok_or_else(|| {
                    CliError::config("trotter method requires n_slices in the config")
                })?;
                let plan = TrotterPlan::new(t, n_slices).map_err(CliError::from)?;
                composed_kernel(&grid, &config.potential, &plan, &units).map_err(CliError::from)?
            }
            KernelMethod::ClosedForm => closed_form_kernel(&grid, &config.potential, t, &units)?,
        };
        for i in lo..hi {
            for j in lo..hi {
                let value = kernel.kernel_value(i, j);
                out.push_str(&format!(
                    "{},{},{},{},{},{}\n",
                    fmt_float(grid.node(i)),
                    fmt_float(grid.node(j)),
                    fmt_float(t),
                    fmt_float(value.norm()),
                    fmt_float(value.arg()),
                    method.label()
                ));
            }
        }
    }
    write_artifact(output, &out)
}

/// `deficit-sweep`: DeficitCurve CSV (columns t,deficit,window,potential).
pub fn cmd_deficit_sweep(
    config: &RunConfig,
    config_hash: &str,
    output: Option<&Path>,
) -> CliResult<()> {
    let units = config.units()?;
    let grid = config.grid_spec()?;
    if config.sweep.is_empty() {
        return Err(CliError::config(
            "schema violation: sweep (t_list) must be non-empty",
        ));
    }
    let curve = asymptotic_mub_sweep(
        &config.potential,
        &grid,
        &config.sweep,
        config.window,
        &units,
    )
    .map_err(CliError::from)?;
    let mut out = header_line(config_hash, config.seed);
    out.push_str(&curve.to_csv());
    write_artifact(output, &out)
}

/// `scaling-check`: JSON report of both sides of the rescaling identity.
pub fn cmd_scaling_check(
    config: &RunConfig,
    config_hash: &str,
    x: f64,
    y: f64,
    t: f64,
    output: Option<&Path>,
) -> CliResult<()> {
    let units = config.units()?;
    let grid = config.grid_spec()?;
    let check = scaling_check(&config.potential, x, y, t, &units, &grid).map_err(CliError::from)?;
    let report = json!({
        "meta": meta_json(config_hash, config.seed),
        "x": x,
        "y": y,
        "t": t,
        "lhs": complex_json(check.lhs),
        "rhs": complex_json(check.rhs),
        "rel_error": check.rel_error,
    });
    write_artifact(output, &format!("{report:#}\n"))
}

/// `mub-check`: read a JSON matrix and report unitarity, unimodularity,
/// deficit, and the MUB verdict.
pub fn cmd_mub_check(matrix_path: &Path, tol: f64, output: Option<&Path>) -> CliResult<()> {
    let bytes = fs::read(matrix_path).map_err(|e| {
        CliError::config(format!("cannot read matrix {}: {e}", matrix_path.display()))
    })?;
    let parsed: MatrixJson = serde_json::from_slice(&bytes)
        .map_err(|e| CliError::config(format!("malformed matrix JSON: {e}")))?;
    let matrix = parsed.to_matrix().map_err(CliError::from)?;
    let m = matrix.nrows() as f64;
    let unitary = unitarity_deviation(&matrix) <= tol;
    let expected_modulus = 1.0 / m.sqrt();
    let unimodular = matrix
        .iter()
        .all(|z| (z.norm() - expected_modulus).abs() <= tol);
    let deficit = matrix
        .iter()
        .map(|z| (m * z.norm_sqr() - 1.0).abs())
        .fold(0.0f64, f64::max);
    let verdict = if is_hadamard(&matrix, tol) {
        "MUB"
    } else {
        "not-MUB"
    };
    let report = json!({
        "meta": meta_json(&sha256_hex(&bytes), 0),
        "tol": tol,
        "unitary": unitary,
        "unimodular": unimodular,
        "deficit": deficit,
        "verdict": verdict,
    });
    write_artifact(output, &format!("{report:#}\n"))
}

/// `insertion`: evaluate <Phi|Psi> directly and through a chain of seeded
/// random bases; report both and the absolute error.
pub fn cmd_insertion(
    dim: usize,
    num_bases: usize,
    seed: Option<u64>,
    output: Option<&Path>,
) -> CliResult<()> {
    let seed =
        seed.ok_or_else(|| CliError::config("insertion is randomized: --seed is mandatory"))?;
    if dim == 0 {
        return Err(CliError::config("dim must be >= 1"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let phi = Array1::from_shape_fn(dim, |_| {
        C64::new(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5)
    });
    let psi = Array1::from_shape_fn(dim, |_| {
        C64::new(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5)
    });
    let bases: Vec<_> = (0..num_bases)
        .map(|k| random_basis(dim, seed.wrapping_add(1 + k as u64)))
        .collect();
    let direct = phi.mapv(|z| z.conj()).dot(&psi);
    let inserted = insertion_identity(&phi, &psi, &bases).map_err(CliError::from)?;
    let input = format!("insertion dim={dim} bases={num_bases} seed={seed}");
    let report = json!({
        "meta": meta_json(&sha256_hex(input.as_bytes()), seed),
        "dim": dim,
        "num_bases": num_bases,
        "direct": complex_json(direct),
        "inserted": complex_json(inserted),
        "abs_error": (direct - inserted).norm(),
    });
    write_artifact(output, &format!("{report:#}\n"))
}

/// `riccati`: integrate the R/S/P system; CSV columns t,r,s,p.
#[allow(clippy::too_many_arguments)]
pub fn cmd_riccati(
    k1: f64,
    k2: f64,
    k3: f64,
    source: f64,
    t0: f64,
    t_end: f64,
    steps: usize,
    output: Option<&Path>,
) -> CliResult<()> {
    let state = riccati_solve(k1, k2, k3, source, t0, t_end, steps).map_err(CliError::from)?;
    let input = format!(
        "riccati k1={k1} k2={k2} k3={k3} source={source} t0={t0} t_end={t_end} steps={steps}"
    );
    let mut out = header_line(&sha256_hex(input.as_bytes()), 0);
    out.push_str("t,r,s,p\n");
    for i in 0..state.times.len() {
        out.push_str(&format!(
            "{},{},{},{}\n",
            fmt_float(state.times[i]),
            fmt_float(state.r[i]),
            fmt_float(state.s[i]),
            fmt_float(state.p[i])
        ));
    }
    write_artifact(output, &out)
}

/// `field-phase`: per-mode breakdown CSV plus total-phase footer; at small t
/// the short-time comparison is appended. The transition runs from the
/// field file's configuration to `field_to` (the zero configuration when
/// absent).
pub fn cmd_field_phase(
    field_path: &Path,
    field_to_path: Option<&Path>,
    t: f64,
    output: Option<&Path>,
) -> CliResult<()> {
    let mut bytes = fs::read(field_path).map_err(|e| {
        CliError::config(format!(
            "cannot read field config {}: {e}",
            field_path.display()
        ))
    })?;
    let parsed: FieldConfigJson = serde_json::from_slice(&bytes)
        .map_err(|e| CliError::config(format!("malformed field config: {e}")))?;
    let alpha = parsed.to_config().map_err(CliError::from)?;
    let beta = match field_to_path {
        Some(path) => {
            let to_bytes = fs::read(path).map_err(|e| {
                CliError::config(format!("cannot read field config {}: {e}", path.display()))
            })?;
            let parsed: FieldConfigJson = serde_json::from_slice(&to_bytes)
                .map_err(|e| CliError::config(format!("malformed field config: {e}")))?;
            bytes.extend_from_slice(&to_bytes);
            parsed.to_config().map_err(CliError::from)?
        }
        None => FieldConfig::zeros(*alpha.lattice()),
    };
    let breakdown = field_transition_phase(&alpha, &beta, t).map_err(CliError::from)?;
    let mut out = header_line(&sha256_hex(&bytes), 0);
    out.push_str(&breakdown.to_csv());
    out.push_str(&format!(
        "# total_phase={}\n",
        fmt_float(breakdown.total_phase)
    ));
    if t <= SHORT_TIME_FOOTER_THRESHOLD {
        let short = field_short_time_phase(&alpha, &beta, t).map_err(CliError::from)?;
        out.push_str(&format!("# short_time_phase={}\n", fmt_float(short)));
        let denom = if short == 0.0 { 1.0 } else { short.abs() };
        out.push_str(&format!(
            "# short_time_rel_dev={}\n",
            fmt_float((breakdown.total_phase - short).abs() / denom)
        ));
    }
    write_artifact(output, &out)
}

/// `rescale-4form`: JSON report of the rescaled lagrangian coefficients.
pub fn cmd_rescale_4form(
    s: f64,
    grad_coeff: f64,
    mass_coeff: f64,
    potential_json: &str,
    output: Option<&Path>,
) -> CliResult<()> {
    let potential: PotentialSpec = serde_json::from_str(potential_json)
        .map_err(|e| CliError::config(format!("malformed potential JSON: {e}")))?;
    potential.validate().map_err(CliError::from)?;
    let rescaled =
        rescale_lagrangian_4form(s, grad_coeff, mass_coeff, &potential).map_err(CliError::from)?;
    let input = format!(
        "rescale-4form s={s} grad={grad_coeff} mass={mass_coeff} potential={potential_json}"
    );
    let report = json!({
        "meta": meta_json(&sha256_hex(input.as_bytes()), 0),
        "s": s,
        "kinetic_coeff": rescaled.kinetic_coeff,
        "grad_coeff": rescaled.grad_coeff,
        "mass_coeff": rescaled.mass_coeff,
        "potential": rescaled.potential,
    });
    write_artifact(output, &format!("{report:#}\n"))
}

/// Parsed command, ready to run.
#[derive(Debug)]
pub enum Command {
    Kernel,
    DeficitSweep,
    ScalingCheck {
        x: f64,
        y: f64,
        t: f64,
    },
    MubCheck {
        matrix: PathBuf,
    },
    Insertion {
        dim: usize,
        bases: usize,
    },
    Riccati {
        k1: f64,
        k2: f64,
        k3: f64,
        source: f64,
        t0: f64,
        t_end: f64,
        steps: usize,
    },
    FieldPhase {
        field: PathBuf,
        field_to: Option<PathBuf>,
        t: f64,
    },
    Rescale4Form {
        s: f64,
        grad_coeff: f64,
        mass_coeff: f64,
        potential: String,
    },
}

/// Global options shared by every command.
#[derive(Debug, Default)]
pub struct GlobalOpts {
    pub config: Option<PathBuf>,
    pub output: Option<PathBuf>,
    pub seed: Option<u64>,
    pub window: Option<f64>,
    pub tol: Option<f64>,
}

/// Dispatch a command; returns the process exit code.
pub fn execute(command: Command, opts: GlobalOpts) -> i32 {
    match run(command, opts) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("{TOOL_NAME}: {}", e.message);
            e.code
        }
    }
}

fn load_config(opts: &GlobalOpts) -> CliResult<(RunConfig, String)> {
    let path = opts
        .config
        .as_ref()
        .ok_or_else(|| CliError::config("--config <path> is required for this command"))?;
    let (mut config, hash) = RunConfig::load(path)?;
    if let Some(seed) = opts.seed {
        config.seed = seed;
    }
    if let Some(window) = opts.window {
        config.window = window;
        config.validate()?;
    }
    Ok((config, hash))
}

fn run(command: Command, opts: GlobalOpts) -> CliResult<()> {
    let output_override = |config: &RunConfig| -> Option<PathBuf> {
        opts.output
            .clone()
            .or_else(|| config.output_path.as_ref().map(PathBuf::from))
    };
    match command {
        Command::Kernel => {
            let (config, hash) = load_config(&opts)?;
            let out = output_override(&config);
            cmd_kernel(&config, &hash, out.as_deref())
        }
        Command::DeficitSweep => {
            let (config, hash) = load_config(&opts)?;
            let out = output_override(&config);
            cmd_deficit_sweep(&config, &hash, out.as_deref())
        }
        Command::ScalingCheck { x, y, t } => {
            let (config, hash) = load_config(&opts)?;
            let out = output_override(&config);
            cmd_scaling_check(&config, &hash, x, y, t, out.as_deref())
        }
        Command::MubCheck { matrix } => {
            cmd_mub_check(&matrix, opts.tol.unwrap_or(1e-8), opts.output.as_deref())
        }
        Command::Insertion { dim, bases } => {
            cmd_insertion(dim, bases, opts.seed, opts.output.as_deref())
        }
        Command::Riccati {
            k1,
            k2,
            k3,
            source,
            t0,
            t_end,
            steps,
        } => cmd_riccati(k1, k2, k3, source, t0, t_end, steps, opts.output.as_deref()),
        Command::FieldPhase { field, field_to, t } => {
            cmd_field_phase(&field, field_to.as_deref(), t, opts.output.as_deref())
        }
        Command::Rescale4Form {
            s,
            grad_coeff,
            mass_coeff,
            potential,
        } => cmd_rescale_4form(
            s,
            grad_coeff,
            mass_coeff,
            &potential,
            opts.output.as_deref(),
        ),
    }
}
