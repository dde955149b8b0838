//! Scenario runner behind the `riesz-caps` binary.
//!
//! A scenario is one JSON document naming a kernel, an axis field and a task.
//! Curves are written as CSV (header row, 17 significant digits) and scalar
//! results as JSON, both into the output directory.

use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};

use riesz_caps::axis_field::{
    axis_phi_delta, axis_signed_equilibrium, axis_solve_t, axis_weighted_potential,
};
use riesz_caps::oracle::{
    check_variational, empirical_support_height, height_histogram, minimize_particles, rank_correlation,
    ring_resolved_bins,
};
use riesz_caps::point_field::{gonchar_polynomial, gonchar_root};
use riesz_caps::{AxisMeasure64, CapSolution64, Params64, SignedCapMeasure64, SolvedBy};
use serde::Deserialize;
use serde_json::{json, Value};

/// Failure of a scenario run, mapped to a process exit code.
#[derive(Debug, Clone, PartialEq)]
pub enum CliError {
    /// Malformed or incomplete configuration (exit 2).
    Usage(String),
    /// Domain or convergence failure in the numerics (exit 3).
    Numeric(String),
    /// File system failure (exit 3).
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Numeric(_) | CliError::Io(_) => 3,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "error[usage]: {m}"),
            CliError::Numeric(m) => write!(f, "error[numeric]: {m}"),
            CliError::Io(m) => write!(f, "error[io]: {m}"),
        }
    }
}

impl std::error::Error for CliError {}

impl From<riesz_caps::Error> for CliError {
    fn from(e: riesz_caps::Error) -> Self {
        CliError::Numeric(e.to_string())
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e.to_string())
    }
}

pub type CliResult<V> = std::result::Result<V, CliError>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Task {
    Density,
    Potential,
    PhiCurve,
    SolveSupport,
    Verify,
    Particles,
    NewtonDistance,
    Figure,
}

impl Task {
    fn slug(self) -> &'static str {
        match self {
            Task::Density => "density",
            Task::Potential => "potential",
            Task::PhiCurve => "phi-curve",
            Task::SolveSupport => "solve-support",
            Task::Verify => "verify",
            Task::Particles => "particles",
            Task::NewtonDistance => "newton-distance",
            Task::Figure => "figure",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(tag = "kernel", rename_all = "kebab-case", deny_unknown_fields)]
pub enum ParamsSpec {
    Riesz { d: u32, s: f64 },
    Log { d: u32 },
}

impl ParamsSpec {
    pub fn build(&self) -> CliResult<Params64> {
        let p = match *self {
            ParamsSpec::Riesz { d, s } => Params64::riesz(d, s),
            ParamsSpec::Log { d } => Params64::log(d),
        };
        p.map_err(|e| CliError::Usage(e.to_string()))
    }
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AtomSpec {
    pub height: f64,
    pub mass: f64,
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum FieldSpec {
    Charge { q: f64, height: f64 },
    Axis { atoms: Vec<AtomSpec> },
}

impl FieldSpec {
    pub fn build(&self) -> CliResult<AxisMeasure64> {
        let atoms: Vec<(f64, f64)> = match self {
            FieldSpec::Charge { q, height } => vec![(*height, *q)],
            FieldSpec::Axis { atoms } => atoms.iter().map(|a| (a.height, a.mass)).collect(),
        };
        AxisMeasure64::new(&atoms).map_err(|e| CliError::Usage(e.to_string()))
    }
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ParticleSpec {
    #[serde(default = "default_particles")]
    pub n: usize,
    #[serde(default = "default_iters")]
    pub iters: usize,
    /// Histogram bins; defaults to the ring-resolved count for `n` and `t₀`.
    #[serde(default)]
    pub bins: Option<usize>,
}

impl Default for ParticleSpec {
    fn default() -> Self {
        ParticleSpec { n: default_particles(), iters: default_iters(), bins: None }
    }
}

fn default_particles() -> usize {
    800
}
fn default_iters() -> usize {
    1500
}
fn default_grid() -> usize {
    201
}
fn default_tol() -> f64 {
    1e-5
}

/// One scenario document.
#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    pub name: String,
    pub task: Task,
    #[serde(default)]
    pub params: Option<ParamsSpec>,
    #[serde(default)]
    pub field: Option<FieldSpec>,
    /// Cap height for `density` and `potential`; defaults to `t₀`.
    #[serde(default)]
    pub t: Option<f64>,
    /// Cap heights relative to `t₀` for `figure`.
    #[serde(default)]
    pub t_offsets: Option<Vec<f64>>,
    /// Dimension for `newton-distance`; defaults to the `params` dimension.
    #[serde(default)]
    pub d: Option<u32>,
    #[serde(default = "default_grid")]
    pub grid: usize,
    #[serde(default = "default_tol")]
    pub tol: f64,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub particles: ParticleSpec,
}

/// Command-line overrides applied on top of a scenario file.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Overrides {
    pub grid: Option<usize>,
    pub tol: Option<f64>,
    pub seed: Option<u64>,
}

impl Scenario {
    pub fn from_json(text: &str) -> CliResult<Self> {
        serde_json::from_str(text).map_err(|e| CliError::Usage(format!("invalid scenario: {e}")))
    }

    pub fn load(path: &Path) -> CliResult<Self> {
        let text = fs::read_to_string(path)
            .map_err(|e| CliError::Usage(format!("cannot read {}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    pub fn apply(&mut self, o: &Overrides) {
        if let Some(g) = o.grid {
            self.grid = g;
        }
        if let Some(t) = o.tol {
            self.tol = t;
        }
        if let Some(s) = o.seed {
            self.seed = s;
        }
    }

    /// Checks that every input the task needs is present and sane.
    pub fn validate(&self) -> CliResult<()> {
        let usage = |m: &str| Err(CliError::Usage(m.to_string()));
        if self.name.is_empty() || self.name.contains(['/', '\\']) {
            return usage("name must be a non-empty file stem");
        }
        if self.grid < 2 {
            return usage("grid must be at least 2");
        }
        if self.tol.is_nan() || self.tol <= 0.0 {
            return usage("tol must be positive");
        }
        if self.task == Task::NewtonDistance {
            return match (self.d, &self.params) {
                (Some(d), _) if d >= 2 => Ok(()),
                (None, Some(p)) => p.build().map(|_| ()),
                _ => usage("newton-distance needs d >= 2"),
            };
        }
        let Some(p) = &self.params else {
            return usage("task needs params");
        };
        let params = p.build()?;
        if params.is_log() && params.d != 2 {
            return usage("logarithmic scenarios require d = 2");
        }
        let Some(f) = &self.field else {
            return usage("task needs a field");
        };
        f.build()?;
        if let Some(t) = self.t {
            if !(t > -1.0 && t <= 1.0) {
                return usage("t must lie in (-1, 1]");
            }
        }
        match self.task {
            Task::Figure if self.t_offsets.as_ref().is_none_or(|v| v.is_empty()) => {
                usage("figure needs a non-empty t_offsets list")
            }
            Task::Particles if params.d != 2 => usage("particles require d = 2"),
            Task::Particles if self.particles.n < 50 || self.particles.bins.is_some_and(|b| b < 2) => {
                usage("particles need n >= 50 and bins >= 2")
            }
            _ => Ok(()),
        }
    }
}

/// Files written and the JSON summary of a run.
#[derive(Debug, Clone, PartialEq)]
pub struct RunOutput {
    pub files: Vec<PathBuf>,
    pub summary: Value,
}

/// Formats a float with 17 significant digits.
pub fn fmt_num(x: f64) -> String {
    format!("{x:.16e}")
}

fn write_csv(path: &Path, header: &[&str], rows: &[Vec<f64>]) -> CliResult<()> {
    let mut out = header.join(",");
    out.push('\n');
    for row in rows {
        let cells: Vec<String> = row.iter().map(|&v| fmt_num(v)).collect();
        out.push_str(&cells.join(","));
        out.push('\n');
    }
    fs::write(path, out)?;
    Ok(())
}

/// Reads a CSV written by this crate back into its header and rows.
pub fn read_csv(path: &Path) -> CliResult<(Vec<String>, Vec<Vec<f64>>)> {
    let text = fs::read_to_string(path)?;
    let mut lines = text.lines();
    let header = lines
        .next()
        .ok_or_else(|| CliError::Io(format!("{} is empty", path.display())))?
        .split(',')
        .map(str::to_string)
        .collect();
    let rows = lines
        .map(|l| {
            l.split(',')
                .map(|c| c.parse::<f64>().map_err(|e| CliError::Io(format!("bad cell {c:?}: {e}"))))
                .collect()
        })
        .collect::<CliResult<Vec<Vec<f64>>>>()?;
    Ok((header, rows))
}

fn num(x: f64) -> Value {
    if x.is_finite() {
        json!(x)
    } else {
        Value::Null
    }
}

fn solved_by(s: SolvedBy) -> &'static str {
    match s {
        SolvedBy::InteriorRoot => "interior-root",
        SolvedBy::BoundaryTEqualsOne => "boundary-t-equals-one",
    }
}

struct Context {
    params: Params64,
    field: AxisMeasure64,
}

fn density_rows(m: &SignedCapMeasure64, grid: usize) -> Vec<Vec<f64>> {
    let span = m.t + 1.0;
    (0..grid)
        .map(|j| {
            let gap = span * (grid - j) as f64 / grid as f64;
            let u = m.t - gap;
            vec![u, m.density_with_gap(u, gap)]
        })
        .collect()
}

fn potential_rows(ctx: &Context, t: f64, level: f64, grid: usize) -> CliResult<Vec<Vec<f64>>> {
    (0..grid)
        .map(|j| {
            let xi = -1.0 + 2.0 * j as f64 / (grid - 1) as f64;
            Ok(vec![xi, axis_weighted_potential(xi, t, &ctx.field, &ctx.params)?, level])
        })
        .collect()
}

/// Runs a validated scenario and writes its outputs under `out_dir`.
pub fn run(scenario: &Scenario, out_dir: &Path) -> CliResult<RunOutput> {
    scenario.validate()?;
    fs::create_dir_all(out_dir)?;
    if scenario.task == Task::NewtonDistance {
        let d = match (scenario.d, &scenario.params) {
            (Some(d), _) => d,
            (None, Some(p)) => p.build()?.d,
            _ => unreachable!("validated"),
        };
        let summary = newton_distance(d)?;
        return finish(scenario, out_dir, Vec::new(), summary);
    }
    let ctx = Context {
        params: scenario.params.as_ref().expect("validated").build()?,
        field: scenario.field.as_ref().expect("validated").build()?,
    };
    let stem = |suffix: &str| out_dir.join(format!("{}_{suffix}", scenario.name));
    let mut files = Vec::new();
    let summary = match scenario.task {
        Task::Density => {
            let sol = axis_solve_t(&ctx.field, &ctx.params)?;
            let t = scenario.t.unwrap_or(sol.t0);
            let m = axis_signed_equilibrium(t, &ctx.field, &ctx.params)?;
            let path = stem("density.csv");
            write_csv(&path, &["u", "density"], &density_rows(&m, scenario.grid))?;
            files.push(path);
            json!({
                "t": t, "t0": sol.t0, "boundary_coeff": m.boundary_coeff,
                "mass": m.mass, "level": num(m.level),
            })
        }
        Task::Potential => {
            let sol = axis_solve_t(&ctx.field, &ctx.params)?;
            let t = scenario.t.unwrap_or(sol.t0);
            let m = axis_signed_equilibrium(t, &ctx.field, &ctx.params)?;
            let path = stem("potential.csv");
            write_csv(&path, &["xi", "weighted_potential", "level"], &potential_rows(&ctx, t, m.level, scenario.grid)?)?;
            files.push(path);
            json!({ "t": t, "t0": sol.t0, "level": num(m.level) })
        }
        Task::PhiCurve => {
            let sol = axis_solve_t(&ctx.field, &ctx.params)?;
            let rows = (0..scenario.grid)
                .map(|j| {
                    let t = -1.0 + 2.0 * (j + 1) as f64 / scenario.grid as f64;
                    let (obj, res) = axis_phi_delta(t, &ctx.field, &ctx.params)?;
                    Ok(vec![t, obj, res])
                })
                .collect::<CliResult<Vec<_>>>()?;
            let argmin = rows
                .iter()
                .min_by(|a, b| a[1].partial_cmp(&b[1]).unwrap_or(std::cmp::Ordering::Equal))
                .map(|r| r[0])
                .unwrap_or(f64::NAN);
            let path = stem("phi.csv");
            write_csv(&path, &["t", "objective", "residual"], &rows)?;
            files.push(path);
            json!({ "t0": sol.t0, "grid_argmin": argmin })
        }
        Task::SolveSupport => {
            let sol = axis_solve_t(&ctx.field, &ctx.params)?;
            solution_summary(&sol, scenario.grid)
        }
        Task::Verify => {
            let sol = axis_solve_t(&ctx.field, &ctx.params)?;
            let rep = check_variational(&sol, scenario.grid)?;
            let tol = scenario.tol;
            let constancy = rep.max_violation_on_support <= tol;
            let margin = rep.min_margin_off_support >= -tol;
            let density = rep.min_density_on_support >= -tol;
            json!({
                "t0": sol.t0, "tol": tol, "grid": scenario.grid,
                "f_estimate": rep.f_estimate, "f_closed_form": sol.phi_at_t0,
                "max_violation_on_support": rep.max_violation_on_support,
                "min_margin_off_support": num(rep.min_margin_off_support),
                "min_density_on_support": rep.min_density_on_support,
                "pass_constancy": constancy, "pass_margin": margin, "pass_density": density,
                "pass": constancy && margin && density,
            })
        }
        Task::Particles => {
            let sol = axis_solve_t(&ctx.field, &ctx.params)?;
            let spec = &scenario.particles;
            let sys = minimize_particles(spec.n, &ctx.params, &ctx.field, scenario.seed, spec.iters)?;
            let bins = spec.bins.unwrap_or_else(|| ring_resolved_bins(spec.n, sol.t0));
            let hist = height_histogram(&sys, -1.0, sol.t0, bins);
            let width = (sol.t0 + 1.0) / bins as f64;
            let analytic: Vec<f64> =
                (0..bins).map(|k| sol.equilibrium.density(-1.0 + (k as f64 + 0.5) * width)).collect();
            let path = stem("particles.csv");
            let rows: Vec<Vec<f64>> = sys.points.iter().map(|p| p.to_vec()).collect();
            write_csv(&path, &["x", "y", "z"], &rows)?;
            files.push(path);
            let max_height = sys.heights().into_iter().fold(-1.0, f64::max);
            json!({
                "n": spec.n, "iters": spec.iters, "seed": scenario.seed,
                "iterations": sys.iterations, "energy": sys.energy,
                "t0": sol.t0, "empirical_support_height": empirical_support_height(&sys),
                "max_height": max_height, "bins": bins, "histogram": hist, "analytic_density": analytic,
                "rank_correlation": num(rank_correlation(&hist, &analytic)),
            })
        }
        Task::Figure => {
            let sol = axis_solve_t(&ctx.field, &ctx.params)?;
            let offsets = scenario.t_offsets.as_ref().expect("validated");
            let mut panels = Vec::new();
            let mut panel_rows = Vec::new();
            for (k, off) in offsets.iter().enumerate() {
                let t = (sol.t0 + off).min(1.0);
                let m = axis_signed_equilibrium(t, &ctx.field, &ctx.params)?;
                let pot = potential_rows(&ctx, t, m.level, scenario.grid)?;
                let dens = density_rows(&m, scenario.grid);
                let pot_path = stem(&format!("panel{k}_potential.csv"));
                let dens_path = stem(&format!("panel{k}_density.csv"));
                write_csv(&pot_path, &["xi", "weighted_potential", "level"], &pot)?;
                write_csv(&dens_path, &["u", "density"], &dens)?;
                let off_cap = pot.iter().filter(|r| r[0] > t).map(|r| r[1] - r[2]).fold(f64::INFINITY, f64::min);
                let min_density = dens.iter().map(|r| r[1]).fold(f64::INFINITY, f64::min);
                panels.push(json!({
                    "t": t, "offset": off, "level": m.level, "boundary_coeff": m.boundary_coeff,
                    "min_margin_off_cap": num(off_cap), "min_density": min_density,
                    "potential_csv": pot_path.file_name().map(|s| s.to_string_lossy().into_owned()),
                    "density_csv": dens_path.file_name().map(|s| s.to_string_lossy().into_owned()),
                }));
                panel_rows.push(vec![k as f64, t, *off, m.level, m.boundary_coeff, off_cap, min_density]);
                files.push(pot_path);
                files.push(dens_path);
            }
            let path = stem("panels.csv");
            write_csv(
                &path,
                &["panel", "t", "offset", "level", "boundary_coeff", "min_margin_off_cap", "min_density"],
                &panel_rows,
            )?;
            files.push(path);
            json!({ "t0": sol.t0, "panels": panels })
        }
        Task::NewtonDistance => unreachable!("handled above"),
    };
    finish(scenario, out_dir, files, summary)
}

fn solution_summary(sol: &CapSolution64, grid: usize) -> Value {
    let m = &sol.equilibrium;
    let samples: Vec<[f64; 2]> = density_rows(m, grid).into_iter().map(|r| [r[0], r[1]]).collect();
    json!({
        "t0": sol.t0, "phi_at_t0": sol.phi_at_t0, "delta_at_t0": sol.delta_at_t0,
        "solved_by": solved_by(sol.solved_by), "boundary_coeff": m.boundary_coeff,
        "mass": m.mass, "density_samples": samples,
    })
}

/// `ρ₊(d)` and the polynomial residual there.
pub fn newton_distance(d: u32) -> CliResult<Value> {
    let rho: f64 = gonchar_root(d)?;
    let residual: f64 = gonchar_polynomial(d, rho)?;
    Ok(json!({ "d": d, "rho_plus": rho, "residual": residual }))
}

fn finish(scenario: &Scenario, out_dir: &Path, mut files: Vec<PathBuf>, summary: Value) -> CliResult<RunOutput> {
    let summary = json!({ "scenario": scenario.name, "task": scenario.task.slug(), "result": summary });
    let path = out_dir.join(format!("{}_{}.json", scenario.name, scenario.task.slug()));
    let text = serde_json::to_string_pretty(&summary).map_err(|e| CliError::Io(e.to_string()))?;
    fs::write(&path, text + "\n")?;
    files.push(path);
    Ok(RunOutput { files, summary })
}
