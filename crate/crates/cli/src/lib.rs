//! Front end for the `trigsym` binary: read a polynomial, run the requested
//! relaxations and checks, and assemble a report.

use std::fmt::Write as _;
use std::path::PathBuf;

use serde::{Deserialize, Serialize};
use trigsym::lattice::{matrix_order, weight_set};
use trigsym::oracle::{grid_minimize, Domain, GridSpec};
use trigsym::reptheory::Symmetry;
use trigsym::sdp::{block_size_report, solve, Mode, SdpProblem, SolveResult, SolverConfig, Status};
use trigsym::{TrigPoly, WeylGroup};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RunMode {
    Dense,
    Invariant,
    Block,
    Oracle,
    Sizes,
}

impl RunMode {
    pub const ALL: [RunMode; 5] = [
        RunMode::Dense,
        RunMode::Invariant,
        RunMode::Block,
        RunMode::Oracle,
        RunMode::Sizes,
    ];

    fn sdp_mode(self) -> Option<Mode> {
        match self {
            RunMode::Dense => Some(Mode::Dense),
            RunMode::Invariant => Some(Mode::Invariant),
            RunMode::Block => Some(Mode::Block),
            _ => None,
        }
    }
}

impl std::str::FromStr for RunMode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s.trim() {
            "dense" => Ok(RunMode::Dense),
            "invariant" => Ok(RunMode::Invariant),
            "block" => Ok(RunMode::Block),
            "oracle" => Ok(RunMode::Oracle),
            "sizes" => Ok(RunMode::Sizes),
            other => Err(format!(
                "unknown mode '{other}' (expected dense, invariant, block, oracle or sizes)"
            )),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Text,
    Json,
}

impl std::str::FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "text" => Ok(Format::Text),
            "json" => Ok(Format::Json),
            other => Err(format!("unknown format '{other}' (expected text or json)")),
        }
    }
}

#[derive(Debug, Clone)]
pub struct RunRequest {
    pub input: PathBuf,
    /// Relaxation order; the matrix order of the input when absent.
    pub degree: Option<usize>,
    pub modes: Vec<RunMode>,
    pub format: Format,
    pub solver: SolverConfig,
    pub symmetrize: bool,
    pub parallel: bool,
    pub seed: u64,
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("cannot read {path}: {message}")]
    Io { path: String, message: String },
    #[error("no mode requested")]
    NoModes,
    #[error(transparent)]
    Input(trigsym::Error),
    #[error("solver failed in {mode} mode: {source}")]
    Solver {
        mode: String,
        source: trigsym::Error,
    },
}

impl CliError {
    /// 2 for unusable input, 3 for solver failures.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Solver { .. } => 3,
            _ => 2,
        }
    }
}

impl From<trigsym::Error> for CliError {
    fn from(e: trigsym::Error) -> Self {
        CliError::Input(e)
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Bounds {
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub dense: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub invariant: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub block: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OracleReport {
    pub value: f64,
    pub argmin: Vec<f64>,
    pub resolution: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LayoutEntry {
    pub irrep: usize,
    pub label: String,
    pub dim: usize,
    pub mult: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Sizes {
    pub dense: usize,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub chebyshev: Option<f64>,
    pub sab: usize,
    /// Entries of one representative block per irrep.
    pub sab_distinct: usize,
    pub note: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolverStats {
    pub mode: Mode,
    pub variables: usize,
    pub block_sizes: Vec<usize>,
    pub iterations: usize,
    pub final_mu: f64,
    pub gap_bound: f64,
    pub min_eigenvalue: f64,
    pub status: Status,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub root_system: String,
    pub degree: usize,
    pub weights: usize,
    pub group_order: usize,
    pub symmetrized: bool,
    pub seed: u64,
    pub bounds: Bounds,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub oracle: Option<OracleReport>,
    pub layout: Vec<LayoutEntry>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub sizes: Option<Sizes>,
    pub solver: Vec<SolverStats>,
}

impl Report {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("plain data serializes")
    }

    pub fn from_json(s: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(s)
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(
            out,
            "root system {}, |W| = {}, degree {}, |Omega_d| = {}",
            self.root_system, self.group_order, self.degree, self.weights
        );
        if self.symmetrized {
            let _ = writeln!(out, "input averaged over the group");
        }
        for (name, b) in [
            ("dense", self.bounds.dense),
            ("invariant", self.bounds.invariant),
            ("block", self.bounds.block),
        ] {
            if let Some(v) = b {
                let _ = writeln!(out, "bound {name:<9} {v:.9}");
            }
        }
        if let Some(o) = &self.oracle {
            let _ = writeln!(out, "grid minimum    {:.9} at {:?}", o.value, o.argmin);
        }
        let _ = writeln!(out, "isotypic layout (irrep, dim, mult):");
        for l in &self.layout {
            let _ = writeln!(
                out,
                "  {:>2} {:<10} d={} m={}",
                l.irrep, l.label, l.dim, l.mult
            );
        }
        if let Some(s) = &self.sizes {
            let _ = writeln!(out, "sizes: dense {}, symmetry adapted {}", s.dense, s.sab);
            if let Some(c) = s.chebyshev {
                let _ = writeln!(out, "       chebyshev {c:.3}");
            }
            let _ = writeln!(out, "       {}", s.note);
        }
        for s in &self.solver {
            let _ = writeln!(
                out,
                "solver {:?}: {} vars, blocks {:?}, {} iterations, mu {:.1e}, {:?}",
                s.mode, s.variables, s.block_sizes, s.iterations, s.final_mu, s.status
            );
        }
        out
    }
}

struct Prepared {
    f: TrigPoly,
    f_inv: TrigPoly,
    wg: WeylGroup,
    d: usize,
    sym: Symmetry,
}

fn prepare(req: &RunRequest) -> Result<Prepared, CliError> {
    if req.modes.is_empty() {
        return Err(CliError::NoModes);
    }
    let text = std::fs::read_to_string(&req.input).map_err(|e| CliError::Io {
        path: req.input.display().to_string(),
        message: e.to_string(),
    })?;
    let f = TrigPoly::from_json(&text)?;
    let wg = WeylGroup::generate(&f.rs)?;
    let d = match req.degree {
        Some(d) => d,
        None => matrix_order(&f.rs, &f)?,
    };
    let f_inv = if req.symmetrize {
        f.symmetrize(&wg)
    } else {
        f.clone()
    };
    let ws = weight_set(&f.rs, d);
    let sym = Symmetry::new(&wg, &ws)?;
    Ok(Prepared {
        f,
        f_inv,
        wg,
        d,
        sym,
    })
}

fn run_sdp(
    p: &Prepared,
    mode: Mode,
    cfg: &SolverConfig,
) -> Result<(SolveResult, SolverStats), CliError> {
    let (f, sab) = match mode {
        Mode::Dense => (&p.f, None),
        Mode::Invariant => (&p.f_inv, None),
        Mode::Block => (&p.f_inv, Some(&p.sym.sab)),
    };
    let prob = SdpProblem::build(f, p.d, mode, Some(&p.wg), sab)?;
    let solver_err = |source| CliError::Solver {
        mode: format!("{mode:?}").to_lowercase(),
        source,
    };
    let res = solve(&prob, cfg)
        .and_then(|r| r.converged())
        .map_err(solver_err)?;
    let stats = SolverStats {
        mode,
        variables: prob.n_vars,
        block_sizes: prob.blocks.iter().map(|b| b.base.nrows()).collect(),
        iterations: res.iterations,
        final_mu: res.final_mu,
        gap_bound: res.gap_bound,
        min_eigenvalue: res.primal_feasibility,
        status: res.status,
    };
    Ok((res, stats))
}

fn run_oracle(p: &Prepared) -> OracleReport {
    let spec = GridSpec {
        domain: Domain::UnitCell,
        ..GridSpec::default()
    };
    let (value, u) = grid_minimize(&p.f, &spec);
    OracleReport {
        value,
        argmin: u.0,
        resolution: spec.resolution,
    }
}

fn sizes(p: &Prepared) -> Sizes {
    let r = block_size_report(&p.wg, p.d, &p.sym.sab);
    let note = format!(
        "{} real entries in the symmetry adapted blocks vs {} dense",
        r.distinct_entries, r.dense
    );
    Sizes {
        dense: r.dense,
        chebyshev: r.chebyshev,
        sab: r.sab,
        sab_distinct: r.distinct_entries,
        note,
    }
}

enum Outcome {
    Bound(Mode, SolveResult, SolverStats),
    Oracle(OracleReport),
    Sizes(Sizes),
}

fn run_mode(p: &Prepared, mode: RunMode, cfg: &SolverConfig) -> Result<Outcome, CliError> {
    Ok(match mode.sdp_mode() {
        Some(m) => {
            let (res, stats) = run_sdp(p, m, cfg)?;
            Outcome::Bound(m, res, stats)
        }
        None if mode == RunMode::Oracle => Outcome::Oracle(run_oracle(p)),
        None => Outcome::Sizes(sizes(p)),
    })
}

pub fn run(req: &RunRequest) -> Result<Report, CliError> {
    let p = prepare(req)?;
    let mut modes = req.modes.clone();
    modes.sort();
    modes.dedup();
    let outcomes: Vec<Result<Outcome, CliError>> = if req.parallel {
        std::thread::scope(|s| {
            let handles: Vec<_> = modes
                .iter()
                .map(|&m| {
                    let p = &p;
                    s.spawn(move || run_mode(p, m, &req.solver))
                })
                .collect();
            handles
                .into_iter()
                .map(|h| h.join().expect("mode worker panicked"))
                .collect()
        })
    } else {
        modes
            .iter()
            .map(|&m| run_mode(&p, m, &req.solver))
            .collect()
    };
    let mut report = Report {
        root_system: p.f.rs.id.to_string(),
        degree: p.d,
        weights: p.sym.sab.ws.len(),
        group_order: p.wg.order(),
        symmetrized: req.symmetrize,
        seed: req.seed,
        bounds: Bounds::default(),
        oracle: None,
        layout: p
            .sym
            .sab
            .layout
            .iter()
            .map(|b| LayoutEntry {
                irrep: b.irrep,
                label: b.label.clone(),
                dim: b.dim,
                mult: b.mult,
            })
            .collect(),
        sizes: None,
        solver: Vec::new(),
    };
    for o in outcomes {
        match o? {
            Outcome::Bound(m, res, stats) => {
                let slot = match m {
                    Mode::Dense => &mut report.bounds.dense,
                    Mode::Invariant => &mut report.bounds.invariant,
                    Mode::Block => &mut report.bounds.block,
                };
                *slot = Some(res.bound);
                report.solver.push(stats);
            }
            Outcome::Oracle(o) => report.oracle = Some(o),
            Outcome::Sizes(s) => report.sizes = Some(s),
        }
    }
    Ok(report)
}

pub fn render(report: &Report, format: Format) -> String {
    match format {
        Format::Json => report.to_json(),
        Format::Text => report.to_text(),
    }
}
