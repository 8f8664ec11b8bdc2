//! The `hprofile` command line.
//!
//! Every command validates its flags before computing, writes
//! `<command>_<n>.{csv,json}` into the output directory (plus `.dat`/`.gp`
//! with `--plot`) and maps the outcome to an exit code.

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::geometry::{
    geodesic_trace, mean_curvature_check, norm, normal_identity_check, omega_derivative_check,
    profile_geodesic_residual, profile_height, south_pole_state, Hemisphere, ProfileParams,
};
use crate::numerics::quadrature::{profile_rule, DEFAULT_ORDER};
use crate::operators::{verify_identities, PolyTrial};
use crate::report::{
    all_pass, csv_table, format_float, gates_csv, gnuplot_script, json_document, plot_data, Gate,
    PlotSeries, SpectrumReport, SpectrumRow,
};
use crate::spectrum::discrete::{extrapolated_spectrum, BoundaryCondition, MIN_POINTS};
use crate::spectrum::discrete_radial_spectrum;
use crate::spectrum::modes::{mode_eigenpairs, spherical_mean_project, Matching};
use crate::spectrum::radial::{radial_eigenfunction, radial_eigenvalue, Parity};
use crate::spectrum::variational::{
    full_mode_survey, gram_matrix, green_check_polar, green_check_radial, green_check_symmetric,
    poincare_constant_estimate, PolarTrial, RadialTrial,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_GATE: i32 = 1;
pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_IO: i32 = 3;

/// Largest mode grid the dense solver accepts.
const MAX_MODE_GRID: usize = 998;
const MAX_RADIAL_GRID: usize = 100_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ParityArg {
    Even,
    Odd,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum MatchingArg {
    Continuity,
    Antisymmetry,
    Both,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Identities,
    Green,
    Orthogonality,
    Geometry,
}

/// Inclusive range of Fourier indices, written `A..B` or a single `K`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct KRange {
    pub start: i64,
    pub end: i64,
}

impl FromStr for KRange {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        let parse = |t: &str| {
            t.trim()
                .parse::<i64>()
                .map_err(|e| format!("bad index '{t}': {e}"))
        };
        let (start, end) = match s.split_once("..") {
            Some((a, b)) => (parse(a)?, parse(b.trim_start_matches('='))?),
            None => {
                let k = parse(s)?;
                (k, k)
            }
        };
        if start > end {
            return Err(format!("empty range {start}..{end}"));
        }
        Ok(KRange { start, end })
    }
}

impl fmt::Display for KRange {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}..{}", self.start, self.end)
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "hprofile",
    version,
    about = "Spectrum of L_HS on the Heisenberg isoperimetric profile"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// Output directory.
    #[arg(long, global = true, env = "HPROFILE_OUT_DIR", default_value = ".")]
    pub out: PathBuf,

    /// Output format of the primary file.
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    pub format: Format,

    /// Also write a gnuplot script and its data file.
    #[arg(long, global = true)]
    pub plot: bool,
}

#[derive(Debug, Clone, Subcommand, Serialize)]
#[serde(tag = "command", rename_all = "lowercase")]
pub enum Command {
    /// Closed-form and discrete radial eigenvalues for k = 1..=k_max.
    Spectrum {
        #[arg(long, default_value_t = 1)]
        n: usize,
        #[arg(long, default_value_t = 8)]
        k_max: usize,
        /// Coarse grid; the fine grid is twice as large.
        #[arg(long, default_value_t = 1000)]
        grid: usize,
        /// Relative tolerance of the extrapolated eigenvalues.
        #[arg(long, default_value_t = 0.01)]
        tol: f64,
    },
    /// Lowest discrete eigenvalues of one parity.
    Eig {
        #[arg(long, default_value_t = 1)]
        n: usize,
        #[arg(long, value_enum)]
        parity: ParityArg,
        #[arg(long, default_value_t = 1000)]
        grid: usize,
        #[arg(long, default_value_t = 4)]
        count: usize,
        #[arg(long, default_value_t = 0.01)]
        tol: f64,
    },
    /// Fourier-mode eigenvalues in the first Heisenberg group (exploratory for k ≠ 0).
    Modes {
        #[arg(long, default_value_t = 1)]
        n: usize,
        /// Inclusive range such as `0..4`.
        #[arg(long, default_value = "0..4")]
        k: KRange,
        #[arg(long, default_value_t = 400)]
        grid: usize,
        #[arg(long, default_value_t = 4)]
        count: usize,
        #[arg(long, value_enum, default_value_t = MatchingArg::Both)]
        matching: MatchingArg,
        /// Agreement required between k = 0 and the radial solver.
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
    },
    /// Numerical verification suites.
    Verify {
        #[arg(long, default_value_t = 1)]
        n: usize,
        #[arg(long, value_enum)]
        suite: Suite,
        /// Random sample points for the pointwise suites.
        #[arg(long, default_value_t = 40)]
        samples: usize,
    },
    /// Radial Poincaré estimate; with n = 1 also the exploratory mode survey.
    Poincare {
        #[arg(long, default_value_t = 1)]
        n: usize,
        #[arg(long, default_value_t = 1000)]
        grid: usize,
        /// Largest Fourier index of the mode survey.
        #[arg(long, default_value_t = 4)]
        k_max: i64,
        /// Grid of the mode survey.
        #[arg(long, default_value_t = 400)]
        mode_grid: usize,
    },
    /// Geodesic from the south pole with unit horizontal speed.
    Geodesic {
        #[arg(long, default_value_t = 1)]
        n: usize,
        #[arg(long, default_value_t = 2.0)]
        plast: f64,
        #[arg(long, default_value_t = 2000)]
        steps: usize,
    },
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Spectrum { .. } => "spectrum",
            Command::Eig { .. } => "eig",
            Command::Modes { .. } => "modes",
            Command::Verify { .. } => "verify",
            Command::Poincare { .. } => "poincare",
            Command::Geodesic { .. } => "geodesic",
        }
    }

    pub fn n(&self) -> usize {
        match *self {
            Command::Spectrum { n, .. }
            | Command::Eig { n, .. }
            | Command::Modes { n, .. }
            | Command::Verify { n, .. }
            | Command::Poincare { n, .. }
            | Command::Geodesic { n, .. } => n,
        }
    }
}

fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidArgument(msg.into())
}

fn check_grid(grid: usize, max: usize) -> Result<()> {
    if grid < MIN_POINTS || grid > max {
        return Err(invalid(format!(
            "grid = {grid} must lie in {MIN_POINTS}..={max}"
        )));
    }
    Ok(())
}

fn check_tol(tol: f64) -> Result<()> {
    if !(tol > 0.0 && tol.is_finite()) {
        return Err(invalid(format!("tol = {tol} must be positive")));
    }
    Ok(())
}

/// Rejects a configuration before any computation starts.
pub fn validate(cmd: &Command) -> Result<()> {
    let n = cmd.n();
    if n == 0 || n > 16 {
        return Err(invalid(format!("n = {n} must lie in 1..=16")));
    }
    match *cmd {
        Command::Spectrum {
            k_max, grid, tol, ..
        } => {
            check_grid(grid, MAX_RADIAL_GRID)?;
            check_tol(tol)?;
            if k_max == 0 || k_max.div_ceil(2) > grid / 4 {
                return Err(invalid(format!(
                    "k_max = {k_max} must lie in 1..={}",
                    2 * (grid / 4)
                )));
            }
        }
        Command::Eig {
            grid, count, tol, ..
        } => {
            check_grid(grid, MAX_RADIAL_GRID)?;
            check_tol(tol)?;
            if count == 0 || count > grid / 4 {
                return Err(invalid(format!(
                    "count = {count} must lie in 1..={}",
                    grid / 4
                )));
            }
        }
        Command::Modes {
            k,
            grid,
            count,
            tol,
            ..
        } => {
            if n != 1 {
                return Err(invalid("the mode operator is available for n = 1 only"));
            }
            check_grid(grid, MAX_MODE_GRID)?;
            check_tol(tol)?;
            if count == 0 || count > grid / 4 {
                return Err(invalid(format!(
                    "count = {count} must lie in 1..={}",
                    grid / 4
                )));
            }
            if k.end - k.start > 64 {
                return Err(invalid(format!("range {k} holds more than 65 modes")));
            }
        }
        Command::Verify { suite, samples, .. } => {
            if samples == 0 || samples > 100_000 {
                return Err(invalid(format!(
                    "samples = {samples} must lie in 1..=100000"
                )));
            }
            if suite == Suite::Orthogonality && n > 3 {
                return Err(invalid("orthogonality suite supports n ≤ 3"));
            }
        }
        Command::Poincare {
            grid,
            k_max,
            mode_grid,
            ..
        } => {
            check_grid(grid, MAX_RADIAL_GRID)?;
            if n == 1 {
                check_grid(mode_grid, MAX_MODE_GRID)?;
                if !(1..=64).contains(&k_max) {
                    return Err(invalid(format!("k_max = {k_max} must lie in 1..=64")));
                }
            }
        }
        Command::Geodesic { plast, steps, .. } => {
            if !(plast > 0.0 && plast.is_finite()) {
                return Err(invalid(format!("plast = {plast} must be positive")));
            }
            if steps == 0 || steps > 1_000_000 {
                return Err(invalid(format!("steps = {steps} must lie in 1..=1000000")));
            }
        }
    }
    Ok(())
}

/// Files produced by one command, before they are written.
#[derive(Debug, Clone, PartialEq)]
pub struct Output {
    pub stem: String,
    pub csv: String,
    pub json: String,
    pub plot: Option<(String, String)>,
    pub gates: Vec<Gate>,
}

#[derive(Serialize)]
struct Config<'a> {
    #[serde(flatten)]
    command: &'a Command,
    format: Format,
}

fn spectrum_plot(stem: &str, report: &SpectrumReport) -> (String, String) {
    let rows: Vec<Vec<f64>> = report
        .rows
        .iter()
        .map(|r| {
            vec![
                r.k as f64,
                r.lambda_closed.unwrap_or(f64::NAN),
                r.lambda_extrap.or(r.lambda_grid1).unwrap_or(f64::NAN),
            ]
        })
        .collect();
    let data = plot_data(&["k", "lambda_closed", "lambda_discrete"], &rows);
    let script = gnuplot_script(
        &format!("{stem}.dat"),
        "radial eigenvalues",
        "k",
        "lambda",
        &[
            PlotSeries {
                x: 1,
                y: 2,
                title: "k(k+2n)".into(),
                style: "lines",
            },
            PlotSeries {
                x: 1,
                y: 3,
                title: "discrete".into(),
                style: "points pt 7",
            },
        ],
    );
    (data, script)
}

fn boundary_of(parity: Parity) -> BoundaryCondition {
    match parity {
        Parity::Even => BoundaryCondition::Natural,
        Parity::Odd => BoundaryCondition::DirichletAtOne,
    }
}

fn run_spectrum(
    params: &ProfileParams,
    k_max: usize,
    grid: usize,
    tol: f64,
) -> Result<(SpectrumReport, Vec<Gate>)> {
    let even_count = k_max / 2;
    let odd_count = k_max.div_ceil(2);
    let even = if even_count > 0 {
        extrapolated_spectrum(params, BoundaryCondition::Natural, grid, even_count)?
    } else {
        Vec::new()
    };
    let odd = extrapolated_spectrum(params, BoundaryCondition::DirichletAtOne, grid, odd_count)?;
    let mut rows = Vec::with_capacity(k_max);
    for k in 1..=k_max {
        let parity = Parity::of(k);
        let e = match parity {
            Parity::Even => even[k / 2 - 1],
            Parity::Odd => odd[k / 2],
        };
        rows.push(SpectrumRow::with_grids(
            params.n,
            k as i64,
            parity.label(),
            radial_eigenvalue(k, params)?,
            e.grid1,
            e.grid2,
            e.extrapolated,
        ));
    }
    let report = SpectrumReport::new(rows).with_poincare(
        odd[0]
            .extrapolated
            .min(even.first().map_or(f64::INFINITY, |e| e.extrapolated)),
    );
    let gates = vec![Gate::at_most("max_rel_err", report.max_rel_err(), tol)];
    Ok((report, gates))
}

fn run_eig(
    params: &ProfileParams,
    parity: Parity,
    grid: usize,
    count: usize,
    tol: f64,
) -> Result<(SpectrumReport, Vec<Gate>)> {
    let values = extrapolated_spectrum(params, boundary_of(parity), grid, count)?;
    let mut rows = Vec::with_capacity(count);
    for (i, e) in values.iter().enumerate() {
        let k = match parity {
            Parity::Even => 2 * (i + 1),
            Parity::Odd => 2 * i + 1,
        };
        rows.push(SpectrumRow::with_grids(
            params.n,
            k as i64,
            parity.label(),
            radial_eigenvalue(k, params)?,
            e.grid1,
            e.grid2,
            e.extrapolated,
        ));
    }
    let report = SpectrumReport::new(rows);
    let gates = vec![Gate::at_most("max_rel_err", report.max_rel_err(), tol)];
    Ok((report, gates))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
struct ModeRow {
    n: usize,
    k: i64,
    matching: Matching,
    index: usize,
    lambda_re: f64,
    lambda_im: f64,
    radial_lambda: Option<f64>,
    spherical_mean: f64,
}

const MODE_HEADER: [&str; 8] = [
    "n",
    "k",
    "matching",
    "index",
    "lambda_re",
    "lambda_im",
    "radial_lambda",
    "spherical_mean",
];

fn run_modes(
    params: &ProfileParams,
    range: KRange,
    grid: usize,
    count: usize,
    matching: MatchingArg,
    tol: f64,
) -> Result<(Vec<ModeRow>, Vec<Gate>)> {
    let matchings: Vec<Matching> = match matching {
        MatchingArg::Continuity => vec![Matching::Continuity],
        MatchingArg::Antisymmetry => vec![Matching::Antisymmetry],
        MatchingArg::Both => vec![Matching::Continuity, Matching::Antisymmetry],
    };
    let mut rows = Vec::new();
    let mut k0_dev: f64 = 0.0;
    let mut mean_dev: f64 = 0.0;
    let mut has_k0 = false;
    let mut has_nonzero = false;
    for &m in &matchings {
        for k in range.start..=range.end {
            let pairs = mode_eigenpairs(k, grid, count, m)?;
            let radial = if k == 0 {
                has_k0 = true;
                let r = discrete_radial_spectrum(params, m.boundary(), grid, count)?;
                for (p, v) in pairs.iter().zip(&r) {
                    k0_dev = k0_dev.max((p.value.re - v).abs().max(p.value.im.abs()));
                }
                Some(r)
            } else {
                None
            };
            for (i, p) in pairs.iter().enumerate() {
                let mean = spherical_mean_project(&[(k, p.vector.clone())], 64)?;
                let size = mean.iter().map(|v| v.norm()).fold(0.0, f64::max);
                let scale = p.vector.iter().map(|v| v.norm()).fold(0.0, f64::max);
                if k != 0 {
                    has_nonzero = true;
                    mean_dev = mean_dev.max(size / scale.max(f64::MIN_POSITIVE));
                }
                rows.push(ModeRow {
                    n: params.n,
                    k,
                    matching: m,
                    index: i + 1,
                    lambda_re: p.value.re,
                    lambda_im: p.value.im,
                    radial_lambda: radial.as_ref().map(|r| r[i]),
                    spherical_mean: size / scale.max(f64::MIN_POSITIVE),
                });
            }
        }
    }
    let mut gates = Vec::new();
    if has_k0 {
        gates.push(Gate::at_most("k0_matches_radial", k0_dev, tol));
    }
    if has_nonzero {
        gates.push(Gate::at_most("nonzero_k_spherical_mean", mean_dev, 1e-10));
    }
    Ok((rows, gates))
}

fn mode_csv(rows: &[ModeRow]) -> Result<String> {
    let body: Vec<Vec<String>> = rows
        .iter()
        .map(|r| {
            vec![
                r.n.to_string(),
                r.k.to_string(),
                r.matching.label().to_string(),
                r.index.to_string(),
                format_float(r.lambda_re),
                format_float(r.lambda_im),
                r.radial_lambda.map(format_float).unwrap_or_default(),
                format_float(r.spherical_mean),
            ]
        })
        .collect();
    csv_table(&MODE_HEADER, &body)
}

fn mode_plot(stem: &str, rows: &[ModeRow]) -> (String, String) {
    let data_rows: Vec<Vec<f64>> = rows
        .iter()
        .map(|r| {
            vec![
                r.k as f64,
                r.index as f64,
                if r.matching == Matching::Continuity {
                    0.0
                } else {
                    1.0
                },
                r.lambda_re,
            ]
        })
        .collect();
    let data = plot_data(&["k", "index", "antisymmetric", "lambda_re"], &data_rows);
    let script = gnuplot_script(
        &format!("{stem}.dat"),
        "Fourier-mode eigenvalues (exploratory for k != 0)",
        "k",
        "Re lambda",
        &[PlotSeries {
            x: 1,
            y: 4,
            title: "lowest eigenvalues per mode".into(),
            style: "points pt 7",
        }],
    );
    (data, script)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
struct CheckValue {
    name: String,
    value: f64,
}

fn run_verify(params: &ProfileParams, suite: Suite, samples: usize) -> Result<Vec<Gate>> {
    let mut gates = Vec::new();
    match suite {
        Suite::Identities => {
            let report = verify_identities(params, &PolyTrial::standard_set(params), samples)?;
            for c in &report.checks {
                gates.push(Gate::at_most(c.name.clone(), c.max_deviation, 1e-5));
            }
        }
        Suite::Green => {
            let rule = profile_rule(params, DEFAULT_ORDER)?;
            let trials = RadialTrial::standard_set();
            for t in &trials {
                gates.push(Gate::at_most(
                    format!("radial:{}", t.name),
                    green_check_radial(t, params, &rule)?,
                    1e-6,
                ));
            }
            let mut sym: f64 = 0.0;
            for a in &trials {
                for b in &trials {
                    sym = sym.max(green_check_symmetric(a, b, params, &rule)?);
                }
            }
            gates.push(Gate::at_most("symmetric_pairs", sym, 1e-6));
            if params.n == 1 {
                for t in PolarTrial::standard_set() {
                    gates.push(Gate::at_most(
                        format!("polar:{}", t.name),
                        green_check_polar(&t, &rule)?,
                        1e-6,
                    ));
                }
            }
        }
        Suite::Orthogonality => {
            let rule = profile_rule(params, DEFAULT_ORDER)?;
            let modes = (1..=8)
                .map(|k| radial_eigenfunction(k, params))
                .collect::<Result<Vec<_>>>()?;
            let g = gram_matrix(&modes, &rule, params)?;
            let mut off: f64 = 0.0;
            let mut diag: f64 = 0.0;
            for (i, row) in g.iter().enumerate() {
                for (j, v) in row.iter().enumerate() {
                    if i == j {
                        diag = diag.max((v - 1.0).abs());
                    } else {
                        off = off.max(v.abs());
                    }
                }
            }
            gates.push(Gate::at_most("gram_off_diagonal", off, 1e-8));
            gates.push(Gate::at_most("gram_diagonal", diag, 1e-8));
        }
        Suite::Geometry => {
            gates.push(Gate::at_most(
                "mean_curvature",
                mean_curvature_check(params, samples),
                1e-6,
            ));
            gates.push(Gate::at_most(
                "omega_derivative",
                omega_derivative_check(params, samples),
                1e-6,
            ));
            let (unit, support) = normal_identity_check(params, samples);
            gates.push(Gate::at_most("unit_normal", unit, 1e-14));
            gates.push(Gate::at_most("support_function", support, 1e-14));
            gates.push(Gate::at_most(
                "geodesic_meridian",
                profile_geodesic_residual(params, 2000)?,
                1e-6,
            ));
            let (dz, dt) = pole_to_pole_endpoint(params, 2000)?;
            gates.push(Gate::at_most("geodesic_endpoint_z", dz, 1e-8));
            gates.push(Gate::at_most("geodesic_endpoint_t", dt, 1e-8));
        }
    }
    Ok(gates)
}

/// `(|z(π)|, |t(π) − t(0) − π/4|)` for the pole-to-pole geodesic.
pub fn pole_to_pole_endpoint(params: &ProfileParams, steps: usize) -> Result<(f64, f64)> {
    let start = south_pole_state(params);
    let trace = geodesic_trace(2.0, std::f64::consts::PI, steps, &start)?;
    let end = trace.last().expect("steps ≥ 1");
    Ok((
        norm(&end.z),
        (end.t - start.t - std::f64::consts::FRAC_PI_4).abs(),
    ))
}

fn run_geodesic(
    params: &ProfileParams,
    plast: f64,
    steps: usize,
) -> Result<(Vec<String>, Vec<Vec<f64>>, Vec<Gate>)> {
    let mut start = south_pole_state(params);
    start.p_last = plast;
    let s_max = std::f64::consts::TAU / plast;
    let trace = geodesic_trace(plast, s_max, steps, &start)?;
    let dim = params.dim();
    let mut header = vec!["s".to_string()];
    for i in 1..=params.n {
        header.push(format!("x{i}"));
        header.push(format!("y{i}"));
    }
    header.extend(["t".to_string(), "rho".to_string()]);
    let on_profile = plast == 2.0;
    if on_profile {
        header.push("profile_t".to_string());
    }
    let mut rows = Vec::with_capacity(trace.len());
    for (j, st) in trace.iter().enumerate() {
        let mut r = vec![j as f64 * s_max / steps as f64];
        r.extend_from_slice(&st.z[..dim]);
        let rho = norm(&st.z);
        r.extend([st.t, rho]);
        if on_profile {
            let hem = Hemisphere::from_height(st.t);
            r.push(hem.sign() * profile_height(rho.min(1.0), params)?);
        }
        rows.push(r);
    }
    let mut gates = Vec::new();
    if on_profile {
        gates.push(Gate::at_most(
            "geodesic_meridian",
            profile_geodesic_residual(params, steps)?,
            1e-6,
        ));
        let (dz, dt) = pole_to_pole_endpoint(params, steps)?;
        gates.push(Gate::at_most("geodesic_endpoint_z", dz, 1e-8));
        gates.push(Gate::at_most("geodesic_endpoint_t", dt, 1e-8));
    }
    Ok((header, rows, gates))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
struct PoincareResult {
    radial: crate::spectrum::PoincareEstimate,
    survey: Option<crate::spectrum::FullModeSurvey>,
}

/// Computes every file of one validated command.
pub fn execute(cmd: &Command, format: Format, plot: bool) -> Result<Output> {
    validate(cmd)?;
    let params = ProfileParams::new(cmd.n())?;
    let stem = format!("{}_{}", cmd.name(), params.n);
    let config = Config {
        command: cmd,
        format,
    };
    let (csv, json, plot_files, gates) = match *cmd {
        Command::Spectrum {
            k_max, grid, tol, ..
        } => {
            let (report, gates) = run_spectrum(&params, k_max, grid, tol)?;
            let p = plot.then(|| spectrum_plot(&stem, &report));
            (
                report.to_csv()?,
                json_document(&config, &report, &gates)?,
                p,
                gates,
            )
        }
        Command::Eig {
            parity,
            grid,
            count,
            tol,
            ..
        } => {
            let parity = match parity {
                ParityArg::Even => Parity::Even,
                ParityArg::Odd => Parity::Odd,
            };
            let (report, gates) = run_eig(&params, parity, grid, count, tol)?;
            let p = plot.then(|| spectrum_plot(&stem, &report));
            (
                report.to_csv()?,
                json_document(&config, &report, &gates)?,
                p,
                gates,
            )
        }
        Command::Modes {
            k,
            grid,
            count,
            matching,
            tol,
            ..
        } => {
            let (rows, gates) = run_modes(&params, k, grid, count, matching, tol)?;
            let p = plot.then(|| mode_plot(&stem, &rows));
            (
                mode_csv(&rows)?,
                json_document(&config, &rows, &gates)?,
                p,
                gates,
            )
        }
        Command::Verify { suite, samples, .. } => {
            let gates = run_verify(&params, suite, samples)?;
            let values: Vec<CheckValue> = gates
                .iter()
                .map(|g| CheckValue {
                    name: g.name.clone(),
                    value: g.value,
                })
                .collect();
            (
                gates_csv(&gates)?,
                json_document(&config, &values, &gates)?,
                None,
                gates,
            )
        }
        Command::Poincare {
            grid,
            k_max,
            mode_grid,
            ..
        } => {
            let radial = poincare_constant_estimate(&params, grid)?;
            let survey = if params.n == 1 {
                Some(full_mode_survey(mode_grid, k_max)?)
            } else {
                None
            };
            let mut rows = vec![SpectrumRow {
                n: params.n,
                k: 1,
                parity_or_mode: "odd".into(),
                lambda_closed: Some(radial_eigenvalue(1, &params)?),
                lambda_grid1: Some(radial.dirichlet),
                lambda_grid2: None,
                lambda_extrap: None,
                rel_err: None,
            }];
            rows.push(SpectrumRow {
                n: params.n,
                k: 2,
                parity_or_mode: "even".into(),
                lambda_closed: Some(radial_eigenvalue(2, &params)?),
                lambda_grid1: Some(radial.natural),
                lambda_grid2: None,
                lambda_extrap: None,
                rel_err: None,
            });
            if let Some(s) = &survey {
                for m in &s.modes {
                    rows.push(SpectrumRow {
                        n: 1,
                        k: m.k,
                        parity_or_mode: format!("mode-{}-exploratory", m.matching.label()),
                        lambda_closed: None,
                        lambda_grid1: Some(m.lambda_re),
                        lambda_grid2: None,
                        lambda_extrap: None,
                        rel_err: None,
                    });
                }
            }
            for r in rows.iter_mut().take(2) {
                let (c, g) = (r.lambda_closed.unwrap(), r.lambda_grid1.unwrap());
                r.rel_err = Some((g - c).abs() / c);
            }
            let report = SpectrumReport::new(rows).with_poincare(radial.mu);
            let q1 = (params.q - 1) as f64;
            let gates = vec![Gate::at_most(
                "radial_mu_vs_q_minus_1",
                (radial.mu - q1).abs() / q1,
                0.01,
            )];
            let result = PoincareResult { radial, survey };
            let p = plot.then(|| spectrum_plot(&stem, &report));
            (
                report.to_csv()?,
                json_document(&config, &(&report, &result), &gates)?,
                p,
                gates,
            )
        }
        Command::Geodesic { plast, steps, .. } => {
            let (header, rows, gates) = run_geodesic(&params, plast, steps)?;
            let hdr: Vec<&str> = header.iter().map(String::as_str).collect();
            let text: Vec<Vec<String>> = rows
                .iter()
                .map(|r| r.iter().map(|v| format_float(*v)).collect())
                .collect();
            let p = plot.then(|| {
                let t_col = 2 * params.n + 2;
                let rho_col = t_col + 1;
                let mut series = vec![PlotSeries {
                    x: rho_col,
                    y: t_col,
                    title: "geodesic".into(),
                    style: "lines",
                }];
                if plast == 2.0 {
                    series.push(PlotSeries {
                        x: rho_col,
                        y: rho_col + 1,
                        title: "profile meridian".into(),
                        style: "points pt 6 ps 0.3",
                    });
                }
                (
                    plot_data(&hdr, &rows),
                    gnuplot_script(
                        &format!("{stem}.dat"),
                        "geodesic from the south pole",
                        "rho",
                        "t",
                        &series,
                    ),
                )
            });
            let results: Vec<std::collections::BTreeMap<&str, f64>> = rows
                .iter()
                .map(|r| hdr.iter().copied().zip(r.iter().copied()).collect())
                .collect();
            (
                csv_table(&hdr, &text)?,
                json_document(&config, &results, &gates)?,
                p,
                gates,
            )
        }
    };
    Ok(Output {
        stem,
        csv,
        json,
        plot: plot_files,
        gates,
    })
}

/// Writes the primary file (and plot files) into `dir`; returns the paths.
pub fn write_output(out: &Output, dir: &Path, format: Format) -> Result<Vec<PathBuf>> {
    std::fs::create_dir_all(dir)?;
    let mut written = Vec::new();
    let (ext, body) = match format {
        Format::Csv => ("csv", &out.csv),
        Format::Json => ("json", &out.json),
    };
    let primary = dir.join(format!("{}.{ext}", out.stem));
    std::fs::write(&primary, body)?;
    written.push(primary);
    if let Some((data, script)) = &out.plot {
        let d = dir.join(format!("{}.dat", out.stem));
        let g = dir.join(format!("{}.gp", out.stem));
        std::fs::write(&d, data)?;
        std::fs::write(&g, script)?;
        written.extend([d, g]);
    }
    Ok(written)
}

/// Runs a parsed command line and returns the process exit code.
pub fn run(cli: &Cli) -> i32 {
    let out = match execute(&cli.command, cli.format, cli.plot) {
        Ok(o) => o,
        Err(e @ Error::InvalidArgument(_)) => {
            eprintln!("hprofile: configuration error: {e}");
            return EXIT_CONFIG;
        }
        Err(e @ Error::Io(_)) => {
            eprintln!("hprofile: {e}");
            return EXIT_IO;
        }
        Err(e) => {
            eprintln!("hprofile: {e}");
            return EXIT_GATE;
        }
    };
    match write_output(&out, &cli.out, cli.format) {
        Ok(paths) => {
            for p in paths {
                println!("{}", p.display());
            }
        }
        Err(e) => {
            eprintln!("hprofile: {e}");
            return EXIT_IO;
        }
    }
    for g in out.gates.iter().filter(|g| !g.pass) {
        eprintln!(
            "hprofile: gate {} failed: {:e} vs {:e}",
            g.name, g.value, g.threshold
        );
    }
    if all_pass(&out.gates) {
        EXIT_OK
    } else {
        EXIT_GATE
    }
}

/// Parses `args` and runs; parse failures exit with code 2 (help/version with 0).
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    match Cli::try_parse_from(args) {
        Ok(cli) => run(&cli),
        Err(e) => {
            let code = if e.use_stderr() { EXIT_CONFIG } else { EXIT_OK };
            let _ = e.print();
            code
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(args: &[&str]) -> Cli {
        Cli::try_parse_from(std::iter::once("hprofile").chain(args.iter().copied())).unwrap()
    }

    #[test]
    fn k_range_parsing() {
        assert_eq!(
            "0..4".parse::<KRange>().unwrap(),
            KRange { start: 0, end: 4 }
        );
        assert_eq!(
            "-2..=2".parse::<KRange>().unwrap(),
            KRange { start: -2, end: 2 }
        );
        assert_eq!("3".parse::<KRange>().unwrap(), KRange { start: 3, end: 3 });
        assert!("4..1".parse::<KRange>().is_err());
        assert!("a..1".parse::<KRange>().is_err());
    }

    #[test]
    fn spectrum_closed_forms() {
        let cli = parse(&["spectrum", "--n", "1", "--k-max", "5", "--grid", "200"]);
        let out = execute(&cli.command, cli.format, false).unwrap();
        let closed: Vec<f64> = out
            .csv
            .lines()
            .skip(1)
            .map(|l| l.split(',').nth(3).unwrap().parse().unwrap())
            .collect();
        assert_eq!(closed, vec![3.0, 8.0, 15.0, 24.0, 35.0]);
        assert!(all_pass(&out.gates));
    }

    #[test]
    fn validation_precedes_work() {
        for args in [
            vec!["spectrum", "--n", "0"],
            vec!["eig", "--parity", "odd", "--grid", "10"],
            vec!["eig", "--parity", "odd", "--grid", "100", "--count", "26"],
            vec!["modes", "--n", "2"],
            vec!["modes", "--grid", "5000"],
            vec!["geodesic", "--plast=-1"],
            vec!["spectrum", "--tol", "0"],
        ] {
            let cli = parse(&args);
            assert!(
                matches!(validate(&cli.command), Err(Error::InvalidArgument(_))),
                "{args:?}"
            );
        }
    }

    #[test]
    fn exit_codes() {
        assert_eq!(
            main_with_args(["hprofile", "spectrum", "--n", "0"]),
            EXIT_CONFIG
        );
        assert_eq!(main_with_args(["hprofile", "bogus"]), EXIT_CONFIG);
        assert_eq!(
            main_with_args(["hprofile", "eig", "--parity", "sideways"]),
            EXIT_CONFIG
        );
    }

    #[test]
    fn failing_gate_is_reported() {
        let cli = parse(&[
            "eig", "--parity", "odd", "--grid", "60", "--count", "10", "--tol", "1e-12",
        ]);
        let out = execute(&cli.command, cli.format, false).unwrap();
        assert!(!all_pass(&out.gates));
    }

    #[test]
    fn modes_k0_gate() {
        let cli = parse(&["modes", "--k", "0..1", "--grid", "100", "--count", "3"]);
        let out = execute(&cli.command, Format::Json, false).unwrap();
        let v: serde_json::Value = serde_json::from_str(&out.json).unwrap();
        assert_eq!(v["config"]["command"], "modes");
        assert!(all_pass(&out.gates), "{:?}", out.gates);
    }

    #[test]
    fn plot_files_present() {
        let cli = parse(&[
            "eig", "--parity", "even", "--grid", "100", "--count", "3", "--plot",
        ]);
        let out = execute(&cli.command, cli.format, cli.plot).unwrap();
        let (data, script) = out.plot.unwrap();
        assert_eq!(data.lines().count(), 4);
        assert!(script.contains("eig_1.dat"));
    }
}
