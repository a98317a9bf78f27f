//! The Hermitian Toeplitz relaxation `f_d = min tr(mat(f) X)` subject to
//! `X ⪰ 0`, `tr X = 1`, in dense, invariant and block-diagonal form, with a
//! primal log-barrier interior-point solver.

use std::collections::HashSet;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::{self, WeightSet};
use crate::linalg::{c, hermitian_cholesky, hermitian_eigenvalues, CMat};
use crate::reptheory::{block_project, BlockLayout, SymmetryAdaptedBasis};
use crate::rootsys::{RootSystem, Weight, Q};
use crate::trigpoly::{to_toeplitz, ToeplitzMat, TrigPoly};
use crate::weyl::WeylGroup;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Dense,
    Invariant,
    Block,
}

/// One free Toeplitz parameter: `t_eta = x + i y` on `orbit` and
/// `x - i y` on `conj_orbit`. Real parameters have no `y` and an empty
/// `conj_orbit`.
#[derive(Debug, Clone, PartialEq)]
pub struct ParamSpec {
    pub orbit: Vec<Weight>,
    pub conj_orbit: Vec<Weight>,
    pub real: bool,
    /// Index of `x` in the real parameter vector; `y` follows when complex.
    pub var: usize,
}

/// `B(p) = base + sum_k p_k coeffs[k]`, weighted by `weight` in the barrier.
#[derive(Debug, Clone)]
pub struct AffineBlock {
    pub weight: f64,
    pub base: CMat,
    pub coeffs: Vec<CMat>,
    /// Irrep index in block mode.
    pub irrep: Option<usize>,
}

impl AffineBlock {
    pub fn at(&self, p: &[f64]) -> CMat {
        let mut m = self.base.clone();
        for (a, &x) in self.coeffs.iter().zip(p) {
            if x != 0.0 {
                m += a * c(x);
            }
        }
        m
    }
}

#[derive(Debug, Clone)]
pub struct SdpProblem {
    pub mode: Mode,
    pub ws: WeightSet,
    pub params: Vec<ParamSpec>,
    pub n_vars: usize,
    /// Objective `constant + objective · p`.
    pub objective: Vec<f64>,
    pub constant: f64,
    pub blocks: Vec<AffineBlock>,
}

/// Matrix with ones where `mu - nu = eta`.
fn pattern(ws: &WeightSet, eta: &Weight) -> CMat {
    let n = ws.len();
    let mut m = CMat::zeros(n, n);
    for (i, mu) in ws.weights.iter().enumerate() {
        if let Some(j) = ws.position(&(mu - eta)) {
            m[(i, j)] = c(1.0);
        }
    }
    m
}

fn free_params(rs: &RootSystem, ws: &WeightSet, wg: Option<&WeylGroup>) -> (Vec<ParamSpec>, usize) {
    let mut diffs: Vec<(Q, Weight)> = ws
        .difference_counts()
        .into_keys()
        .map(|w| (rs.weight_norm_sq(&w), w))
        .collect();
    diffs.sort();
    let mut seen: HashSet<Weight> = HashSet::new();
    let mut params = Vec::new();
    let mut var = 0;
    let orbit_of = |eta: &Weight| -> Vec<Weight> {
        match wg {
            Some(w) => w.orbit(eta),
            None => vec![eta.clone()],
        }
    };
    for (_, eta) in diffs {
        if eta.is_zero() || seen.contains(&eta) {
            continue;
        }
        let eta = eta.clone().max(-&eta);
        let orbit = orbit_of(&eta);
        let neg = -&eta;
        let real = orbit.contains(&neg);
        let conj_orbit = if real { Vec::new() } else { orbit_of(&neg) };
        seen.extend(orbit.iter().cloned());
        seen.extend(conj_orbit.iter().cloned());
        params.push(ParamSpec {
            orbit,
            conj_orbit,
            real,
            var,
        });
        var += if real { 1 } else { 2 };
    }
    (params, var)
}

/// Hermitian coefficient matrices of the real variables on the full
/// `|Omega_d|` index set.
fn dense_coeffs(ws: &WeightSet, params: &[ParamSpec], n_vars: usize) -> Vec<CMat> {
    let n = ws.len();
    let mut out = vec![CMat::zeros(n, n); n_vars];
    let i = Complex64::new(0.0, 1.0);
    for p in params {
        for eta in &p.orbit {
            let e = pattern(ws, eta);
            out[p.var] += &e;
            if !p.real {
                out[p.var + 1] += e * i;
            }
        }
        for eta in &p.conj_orbit {
            let e = pattern(ws, eta);
            out[p.var] += &e;
            out[p.var + 1] -= e * i;
        }
    }
    out
}

fn check_degree(f: &TrigPoly, d: usize) -> Result<()> {
    if f.is_zero() {
        return Ok(());
    }
    let required = lattice::matrix_order(&f.rs, f)?;
    if d < required {
        return Err(Error::DegreeTooSmall {
            degree: d,
            required,
        });
    }
    Ok(())
}

fn check_invariant(f: &TrigPoly, wg: &WeylGroup) -> Result<()> {
    let residual = f.invariance_residual(wg);
    if residual > 1e-9 * (1.0 + f.max_abs()) {
        return Err(Error::NotInvariant { residual });
    }
    Ok(())
}

impl SdpProblem {
    /// Build the relaxation of order `d`. `wg` is required for the invariant
    /// and block modes, `sab` for the block mode.
    pub fn build(
        f: &TrigPoly,
        d: usize,
        mode: Mode,
        wg: Option<&WeylGroup>,
        sab: Option<&SymmetryAdaptedBasis>,
    ) -> Result<Self> {
        check_degree(f, d)?;
        let ws = match (mode, sab) {
            (Mode::Block, Some(s)) => s.ws.clone(),
            _ => lattice::weight_set(&f.rs, d),
        };
        if ws.d != d {
            return Err(Error::BasisMismatch(format!(
                "basis built for degree {}, problem has degree {d}",
                ws.d
            )));
        }
        let n = ws.len();
        let cmat = to_toeplitz(f, &ws)?;
        let group = match mode {
            Mode::Dense => None,
            Mode::Invariant | Mode::Block => {
                let wg = wg.ok_or_else(|| {
                    Error::BasisMismatch("invariant modes need the Weyl group".into())
                })?;
                check_invariant(f, wg)?;
                Some(wg)
            }
        };
        let (params, n_vars) = free_params(&f.rs, &ws, group);
        let coeffs = dense_coeffs(&ws, &params, n_vars);
        let base = CMat::identity(n, n) * c(1.0 / n as f64);

        match mode {
            Mode::Dense | Mode::Invariant => {
                let objective = dense_objective(&cmat, &params, n_vars);
                let constant = f.coeff(&Weight::zero(f.rs.rank())).re;
                Ok(SdpProblem {
                    mode,
                    ws,
                    params,
                    n_vars,
                    objective,
                    constant,
                    blocks: vec![AffineBlock {
                        weight: 1.0,
                        base,
                        coeffs,
                        irrep: None,
                    }],
                })
            }
            Mode::Block => {
                let sab = sab.ok_or_else(|| {
                    Error::BasisMismatch("block mode needs a symmetry adapted basis".into())
                })?;
                let wg = group.expect("checked above");
                if sab.t.nrows() != n || sab.group_order != wg.order() {
                    return Err(Error::BasisMismatch(format!(
                        "basis of size {} for group of order {}, problem needs {} and {}",
                        sab.t.nrows(),
                        sab.group_order,
                        n,
                        wg.order()
                    )));
                }
                let f_blocks = block_project(sab, &cmat.dense()).map_err(|e| match e {
                    Error::NotInvariant { residual } => Error::BasisMismatch(format!(
                        "T^† mat(f) T is not block diagonal (residual {residual:.3e})"
                    )),
                    other => other,
                })?;
                let mut blocks = Vec::new();
                let mut objective = vec![0.0; n_vars];
                let mut block_constant = 0.0;
                for (i, b) in sab.layout.iter().enumerate() {
                    if b.mult == 0 {
                        continue;
                    }
                    let off = sab.offset(i);
                    let ti = sab.t.columns(off, b.mult).clone_owned();
                    let tih = ti.adjoint();
                    let proj = |a: &CMat| -> CMat { &tih * a * &ti };
                    let bb = proj(&base);
                    let bc: Vec<CMat> = coeffs.iter().map(proj).collect();
                    let fi = &f_blocks[i];
                    let w = b.dim as f64;
                    block_constant += w * (fi * &bb).trace().re;
                    for (k, a) in bc.iter().enumerate() {
                        objective[k] += w * (fi * a).trace().re;
                    }
                    blocks.push(AffineBlock {
                        weight: w,
                        base: bb,
                        coeffs: bc,
                        irrep: Some(i),
                    });
                }
                // tr(C I/N) = f_0; the block sum agrees up to rounding
                let constant = f.coeff(&Weight::zero(f.rs.rank())).re;
                debug_assert!((block_constant - constant).abs() < 1e-9 * (1.0 + f.max_abs()));
                Ok(SdpProblem {
                    mode,
                    ws,
                    params,
                    n_vars,
                    objective,
                    constant,
                    blocks,
                })
            }
        }
    }

    pub fn objective_at(&self, p: &[f64]) -> f64 {
        self.constant
            + self
                .objective
                .iter()
                .zip(p)
                .map(|(a, b)| a * b)
                .sum::<f64>()
    }

    /// Toeplitz matrix `X(p)`.
    pub fn toeplitz(&self, p: &[f64]) -> ToeplitzMat {
        let n = self.ws.len() as f64;
        let mut entries = vec![(Weight::zero(self.ws.weights[0].rank()), c(1.0 / n))];
        for s in &self.params {
            let x = p[s.var];
            let y = if s.real { 0.0 } else { p[s.var + 1] };
            for eta in &s.orbit {
                entries.push((eta.clone(), Complex64::new(x, y)));
            }
            for eta in &s.conj_orbit {
                entries.push((eta.clone(), Complex64::new(x, -y)));
            }
        }
        ToeplitzMat::from_entries(&self.ws, entries)
    }

    /// Barrier parameter scale `sum_b weight_b * size_b`.
    pub fn barrier_degree(&self) -> f64 {
        self.blocks
            .iter()
            .map(|b| b.weight * b.base.nrows() as f64)
            .sum()
    }
}

/// `tr(C X(p)) = N sum_eta f_eta conj(t_eta)`, collected per real variable.
fn dense_objective(cmat: &ToeplitzMat, params: &[ParamSpec], n_vars: usize) -> Vec<f64> {
    let counts = cmat.ws.difference_counts();
    let mut obj = vec![0.0; n_vars];
    let i = Complex64::new(0.0, 1.0);
    for p in params {
        // N_eta c_eta = N f_eta
        let w = |eta: &Weight| cmat.get(eta) * counts[eta] as f64;
        let s_orb: Complex64 = p.orbit.iter().map(w).sum();
        let s_conj: Complex64 = p.conj_orbit.iter().map(w).sum();
        obj[p.var] = (s_orb + s_conj).re;
        if !p.real {
            obj[p.var + 1] = (-i * s_orb + i * s_conj).re;
        }
    }
    obj
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SolverConfig {
    pub tol: f64,
    pub max_iter: usize,
    pub mu0: f64,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            tol: 1e-7,
            max_iter: 500,
            mu0: 1.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Status {
    Converged,
    MaxIterations,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolveResult {
    pub bound: f64,
    pub params: Vec<f64>,
    pub iterations: usize,
    pub final_mu: f64,
    /// Smallest eigenvalue over all blocks at `params`.
    pub primal_feasibility: f64,
    /// Upper bound `mu * nu` on the distance to the optimum at exact centrality.
    pub gap_bound: f64,
    pub status: Status,
    /// Objective after each barrier stage.
    pub history: Vec<f64>,
}

impl SolveResult {
    pub fn converged(self) -> Result<Self> {
        match self.status {
            Status::Converged => Ok(self),
            Status::MaxIterations => Err(Error::MaxIterations(self.iterations)),
        }
    }
}

/// Cholesky factor of every block, or `None` if one is not positive definite.
fn factor_all(prob: &SdpProblem, p: &[f64]) -> Option<Vec<CMat>> {
    prob.blocks
        .iter()
        .map(|b| hermitian_cholesky(&b.at(p)))
        .collect()
}

fn log_det(ls: &[CMat], prob: &SdpProblem) -> f64 {
    ls.iter()
        .zip(&prob.blocks)
        .map(|(l, b)| b.weight * 2.0 * l.diagonal().iter().map(|z| z.re.ln()).sum::<f64>())
        .sum()
}

fn barrier_value(prob: &SdpProblem, p: &[f64], mu: f64) -> Option<f64> {
    let ls = factor_all(prob, p)?;
    Some(prob.objective_at(p) / mu - log_det(&ls, prob))
}

type Sparse = Vec<(usize, usize, Complex64)>;

/// Sparse copies of the coefficient matrices of blocks where that makes the
/// Hessian cheaper (the Toeplitz patterns of the dense modes).
fn sparse_coeffs(prob: &SdpProblem) -> Vec<Option<Vec<Sparse>>> {
    prob.blocks
        .iter()
        .map(|b| {
            let n = b.base.nrows() as f64;
            let k = b.coeffs.len() as f64;
            let lists: Vec<Sparse> = b
                .coeffs
                .iter()
                .map(|a| {
                    let mut v = Vec::new();
                    for j in 0..a.ncols() {
                        for i in 0..a.nrows() {
                            if a[(i, j)] != Complex64::new(0.0, 0.0) {
                                v.push((i, j, a[(i, j)]));
                            }
                        }
                    }
                    v
                })
                .collect();
            let nnz: f64 = lists.iter().map(|l| l.len() as f64).sum();
            let dense_cost = 2.0 * k * n * n * n + 0.5 * k * k * n * n;
            let sparse_cost = nnz * n * n + 0.5 * k * nnz;
            (sparse_cost < dense_cost).then_some(lists)
        })
        .collect()
}

/// Gradient and Hessian of `c·p/mu - sum_b w_b log det B_b(p)`.
fn derivatives(
    prob: &SdpProblem,
    sparse: &[Option<Vec<Sparse>>],
    ls: &[CMat],
    mu: f64,
) -> (DVector<f64>, DMatrix<f64>) {
    let k = prob.n_vars;
    let mut g = DVector::from_iterator(k, prob.objective.iter().map(|x| x / mu));
    let mut h = DMatrix::<f64>::zeros(k, k);
    for ((l, b), sp) in ls.iter().zip(&prob.blocks).zip(sparse) {
        let n = l.nrows();
        let linv = l
            .clone()
            .solve_lower_triangular(&CMat::identity(n, n))
            .expect("Cholesky factor is invertible");
        let linv_h = linv.adjoint();
        match sp {
            Some(lists) => {
                // S = B^{-1}; H_ij = w Re tr(S A_i S A_j)
                let s = &linv_h * &linv;
                let mut m = CMat::zeros(n, n);
                for (i, ai) in lists.iter().enumerate() {
                    g[i] -= b.weight
                        * ai.iter()
                            .map(|&(r, c, v)| v * s[(c, r)])
                            .sum::<Complex64>()
                            .re;
                    m.fill(Complex64::new(0.0, 0.0));
                    for &(r, c, v) in ai {
                        let col = s.column(r);
                        let row = s.row(c);
                        for bb in 0..n {
                            let w = v * row[bb];
                            for a in 0..n {
                                m[(a, bb)] += col[a] * w;
                            }
                        }
                    }
                    for (j, aj) in lists.iter().enumerate().skip(i) {
                        let v: f64 = aj.iter().map(|&(r, c, v)| (v * m[(c, r)]).re).sum();
                        h[(i, j)] += b.weight * v;
                        if i != j {
                            h[(j, i)] += b.weight * v;
                        }
                    }
                }
            }
            None => {
                let ms: Vec<CMat> = b.coeffs.iter().map(|a| &linv * a * &linv_h).collect();
                for (i, mi) in ms.iter().enumerate() {
                    g[i] -= b.weight * mi.trace().re;
                    for (j, mj) in ms.iter().enumerate().skip(i) {
                        let v: f64 = mi
                            .iter()
                            .zip(mj.iter())
                            .map(|(x, y)| (x * y.conj()).re)
                            .sum();
                        h[(i, j)] += b.weight * v;
                        if i != j {
                            h[(j, i)] += b.weight * v;
                        }
                    }
                }
            }
        }
    }
    (g, h)
}

fn newton_direction(g: &DVector<f64>, h: &DMatrix<f64>) -> Result<DVector<f64>> {
    let scale = h
        .diagonal()
        .iter()
        .fold(0.0f64, |a, x| a.max(x.abs()))
        .max(1.0);
    let mut reg = 0.0;
    for _ in 0..12 {
        let hr = h + DMatrix::identity(h.nrows(), h.ncols()) * reg;
        if let Some(ch) = hr.cholesky() {
            return Ok(-ch.solve(g));
        }
        reg = if reg == 0.0 {
            1e-12 * scale
        } else {
            reg * 100.0
        };
    }
    Err(Error::NumericalFailure(
        "Hessian is not positive definite".into(),
    ))
}

pub fn min_eigenvalue(prob: &SdpProblem, p: &[f64]) -> f64 {
    prob.blocks
        .iter()
        .filter(|b| b.base.nrows() > 0)
        .map(|b| hermitian_eigenvalues(&b.at(p))[0])
        .fold(f64::INFINITY, f64::min)
}

/// Primal barrier path following from the centre `X = I / |Omega_d|`.
pub fn solve(prob: &SdpProblem, cfg: &SolverConfig) -> Result<SolveResult> {
    let k = prob.n_vars;
    let mut p = vec![0.0; k];
    let nu = prob.barrier_degree();
    let scale = prob.constant.abs().max(1.0);
    if prob.objective.iter().all(|x| x.abs() <= 1e-13 * scale) {
        return Ok(SolveResult {
            bound: prob.constant,
            params: p.clone(),
            iterations: 0,
            final_mu: 0.0,
            primal_feasibility: min_eigenvalue(prob, &p),
            gap_bound: 0.0,
            status: Status::Converged,
            history: vec![prob.constant],
        });
    }
    let sparse = sparse_coeffs(prob);
    let mut mu = cfg.mu0;
    let mut iterations = 0;
    let mut history = Vec::new();
    let mut status = Status::Converged;
    'outer: loop {
        loop {
            let ls = factor_all(prob, &p)
                .ok_or_else(|| Error::NumericalFailure("iterate left the feasible set".into()))?;
            let (g, h) = derivatives(prob, &sparse, &ls, mu);
            let dir = newton_direction(&g, &h)?;
            let slope = g.dot(&dir);
            if -slope / 2.0 < 1e-10 {
                break;
            }
            if iterations >= cfg.max_iter {
                status = Status::MaxIterations;
                break 'outer;
            }
            iterations += 1;
            let phi0 = prob.objective_at(&p) / mu - log_det(&ls, prob);
            let mut step = 1.0;
            let mut moved = false;
            while step > 1e-14 {
                let trial: Vec<f64> = p
                    .iter()
                    .zip(dir.iter())
                    .map(|(a, b)| a + step * b)
                    .collect();
                if let Some(phi) = barrier_value(prob, &trial, mu) {
                    if phi <= phi0 + 0.25 * step * slope {
                        // progress below rounding of the barrier value ends the stage
                        moved = phi0 - phi > 1e-14 * phi0.abs().max(1.0);
                        p = trial;
                        break;
                    }
                }
                step *= 0.5;
            }
            if !moved {
                break;
            }
        }
        history.push(prob.objective_at(&p));
        if mu * nu <= cfg.tol {
            break;
        }
        mu /= 10.0;
    }
    Ok(SolveResult {
        bound: prob.objective_at(&p),
        primal_feasibility: min_eigenvalue(prob, &p),
        params: p,
        iterations,
        final_mu: mu,
        gap_bound: mu * nu,
        status,
        history,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Certificate {
    /// `tr(mat(f) X(p))` at the certified point.
    pub value: f64,
    pub min_eigenvalue: f64,
}

/// Re-check feasibility of `params` and report the objective there.
pub fn certify(prob: &SdpProblem, params: &[f64]) -> Result<Certificate> {
    let min_eigenvalue = min_eigenvalue(prob, params);
    if min_eigenvalue < -1e-9 {
        return Err(Error::InfeasibleCertificate { min_eigenvalue });
    }
    Ok(Certificate {
        value: prob.objective_at(params),
        min_eigenvalue,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SizeReport {
    /// `|Omega_d|^2`.
    pub dense: usize,
    /// `(|Omega_d|^2 + n^2 |Omega_{d-n}|^2) / |W|^2`, only for `d >= n`.
    pub chebyshev: Option<f64>,
    /// `sum_i d_i m_i^2`.
    pub sab: usize,
    /// `sum_i m_i^2`, the entries of one representative block per irrep.
    pub distinct_entries: usize,
    pub blocks: Vec<BlockLayout>,
}

pub fn block_size_report(wg: &WeylGroup, d: usize, sab: &SymmetryAdaptedBasis) -> SizeReport {
    let n = wg.rank();
    let size = sab.ws.len();
    let chebyshev = (d >= n).then(|| {
        let lower = lattice::weight_set(&wg.rs, d - n).len() as f64;
        let w = wg.order() as f64;
        ((size * size) as f64 + (n * n) as f64 * lower * lower) / (w * w)
    });
    SizeReport {
        dense: size * size,
        chebyshev,
        sab: sab.layout.iter().map(|b| b.dim * b.mult * b.mult).sum(),
        distinct_entries: sab.layout.iter().map(|b| b.mult * b.mult).sum(),
        blocks: sab.layout.clone(),
    }
}

/// Build and solve in one call; the symmetry data is computed as needed.
pub fn lower_bound(
    f: &TrigPoly,
    wg: &WeylGroup,
    d: usize,
    mode: Mode,
    cfg: &SolverConfig,
) -> Result<SolveResult> {
    let prob = match mode {
        Mode::Block => {
            check_degree(f, d)?;
            check_invariant(f, wg)?;
            let ws = lattice::weight_set(&f.rs, d);
            let sym = crate::reptheory::Symmetry::new(wg, &ws)?;
            SdpProblem::build(f, d, mode, Some(wg), Some(&sym.sab))?
        }
        _ => SdpProblem::build(f, d, mode, Some(wg), None)?,
    };
    solve(&prob, cfg)
}
