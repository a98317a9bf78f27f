//! Real-valued trigonometric polynomials `f(u) = sum f_w exp(2 pi i <w, u>)`
//! and their Hermitian Toeplitz encoding over a weight set.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::{self, WeightSet};
use crate::rootsys::{Point, RootSystem, Weight};
use crate::weyl::{GroupElement, WeylGroup};

/// Relative tolerance for the conjugate-symmetry check on input.
const CONJ_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub struct TrigPoly {
    pub rs: RootSystem,
    /// Sparse coefficients; exact zeros are never stored.
    pub coeffs: BTreeMap<Weight, Complex64>,
}

fn close(a: Complex64, b: Complex64) -> bool {
    (a - b).norm() <= CONJ_TOL * (1.0 + a.norm().max(b.norm()))
}

impl TrigPoly {
    pub fn zero(rs: &RootSystem) -> Self {
        TrigPoly {
            rs: rs.clone(),
            coeffs: BTreeMap::new(),
        }
    }

    pub fn constant(rs: &RootSystem, c: f64) -> Self {
        let mut f = Self::zero(rs);
        if c != 0.0 {
            f.coeffs
                .insert(Weight::zero(rs.rank()), Complex64::new(c, 0.0));
        }
        f
    }

    /// Collect terms, summing repeated weights. A weight whose negative is
    /// absent gets the conjugate coefficient filled in; a pair given with
    /// inconsistent values is rejected.
    pub fn from_terms(
        rs: &RootSystem,
        terms: impl IntoIterator<Item = (Weight, Complex64)>,
    ) -> Result<Self> {
        let n = rs.rank();
        let mut given: BTreeMap<Weight, Complex64> = BTreeMap::new();
        for (w, c) in terms {
            if w.rank() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    found: w.rank(),
                });
            }
            *given.entry(w).or_insert(Complex64::new(0.0, 0.0)) += c;
        }
        let mut coeffs = given.clone();
        for (w, c) in &given {
            let neg = -w;
            match given.get(&neg) {
                Some(d) => {
                    if !close(*d, c.conj()) {
                        return Err(Error::NotConjugateSymmetric(w.0.clone()));
                    }
                }
                None => {
                    coeffs.insert(neg, c.conj());
                }
            }
        }
        // the constant term must be real
        if let Some(c) = coeffs.get_mut(&Weight::zero(n)) {
            c.im = 0.0;
        }
        coeffs.retain(|_, c| *c != Complex64::new(0.0, 0.0));
        Ok(TrigPoly {
            rs: rs.clone(),
            coeffs,
        })
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeff(&self, w: &Weight) -> Complex64 {
        self.coeffs.get(w).copied().unwrap_or_default()
    }

    pub fn evaluate(&self, u: &Point) -> f64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for (w, c) in &self.coeffs {
            let p: f64 = w.0.iter().zip(&u.0).map(|(a, b)| *a as f64 * b).sum();
            acc += c * Complex64::from_polar(1.0, 2.0 * PI * p);
        }
        debug_assert!(acc.im.abs() < 1e-8 * (1.0 + acc.re.abs()));
        acc.re
    }

    /// `(g f)_w = f_{g^{-1} w}`.
    pub fn act(&self, g: &GroupElement) -> TrigPoly {
        TrigPoly {
            rs: self.rs.clone(),
            coeffs: self
                .coeffs
                .iter()
                .map(|(w, c)| (g.act_weight(w), *c))
                .collect(),
        }
    }

    /// Largest coefficient change under any group element.
    pub fn invariance_residual(&self, wg: &WeylGroup) -> f64 {
        let mut worst = 0.0f64;
        for g in &wg.elements {
            for (w, c) in &self.coeffs {
                let d = self.coeff(&g.act_weight(w)) - c;
                worst = worst.max(d.norm());
            }
        }
        worst
    }

    pub fn is_invariant(&self, wg: &WeylGroup, tol: f64) -> bool {
        self.invariance_residual(wg) <= tol
    }

    /// Reynolds operator `(1/|W|) sum_g g f`.
    pub fn symmetrize(&self, wg: &WeylGroup) -> TrigPoly {
        let mut coeffs: BTreeMap<Weight, Complex64> = BTreeMap::new();
        let scale = 1.0 / wg.order() as f64;
        for g in &wg.elements {
            for (w, c) in &self.coeffs {
                *coeffs.entry(g.act_weight(w)).or_default() += c * scale;
            }
        }
        coeffs.retain(|_, c| *c != Complex64::new(0.0, 0.0));
        TrigPoly {
            rs: self.rs.clone(),
            coeffs,
        }
    }

    pub fn scale(&self, s: f64) -> TrigPoly {
        let mut out = self.clone();
        for c in out.coeffs.values_mut() {
            *c *= s;
        }
        out.coeffs.retain(|_, c| *c != Complex64::new(0.0, 0.0));
        out
    }

    pub fn add(&self, other: &TrigPoly) -> TrigPoly {
        let mut out = self.clone();
        for (w, c) in &other.coeffs {
            *out.coeffs.entry(w.clone()).or_default() += c;
        }
        out.coeffs.retain(|_, c| *c != Complex64::new(0.0, 0.0));
        out
    }

    /// Largest absolute coefficient.
    pub fn max_abs(&self) -> f64 {
        self.coeffs.values().map(|c| c.norm()).fold(0.0, f64::max)
    }
}

/// `E_d(u)`: the vector of `exp(2 pi i <w, u>) / sqrt(|Omega_d|)`.
///
/// With the indexing `X_{mu nu} = t_{mu - nu}` used here the quadratic form
/// picks up `f` at the reflected point: `f(u) = E_d(-u)^† mat(f) E_d(-u)`.
pub fn exp_vector(ws: &WeightSet, u: &Point) -> DVector<Complex64> {
    let s = 1.0 / (ws.len() as f64).sqrt();
    DVector::from_iterator(
        ws.len(),
        ws.weights.iter().map(|w| {
            let p: f64 = w.0.iter().zip(&u.0).map(|(a, b)| *a as f64 * b).sum();
            Complex64::from_polar(s, 2.0 * PI * p)
        }),
    )
}

/// Hermitian Toeplitz matrix indexed by a weight set; the entry at
/// `(mu, nu)` is `t[mu - nu]`.
#[derive(Debug, Clone, PartialEq)]
pub struct ToeplitzMat {
    pub ws: WeightSet,
    /// Values on the full difference set `Omega_d - Omega_d`.
    pub t: HashMap<Weight, Complex64>,
}

impl ToeplitzMat {
    pub fn get(&self, eta: &Weight) -> Complex64 {
        self.t.get(eta).copied().unwrap_or_default()
    }

    pub fn dense(&self) -> DMatrix<Complex64> {
        let n = self.ws.len();
        DMatrix::from_fn(n, n, |i, j| {
            self.get(&(&self.ws.weights[i] - &self.ws.weights[j]))
        })
    }

    /// Toeplitz matrix with the given entries; differences not listed are zero.
    pub fn from_entries(
        ws: &WeightSet,
        entries: impl IntoIterator<Item = (Weight, Complex64)>,
    ) -> Self {
        let mut t: HashMap<Weight, Complex64> = ws
            .difference_counts()
            .into_keys()
            .map(|eta| (eta, Complex64::new(0.0, 0.0)))
            .collect();
        for (eta, c) in entries {
            if let Some(slot) = t.get_mut(&eta) {
                *slot = c;
            }
        }
        ToeplitzMat { ws: ws.clone(), t }
    }

    /// Largest `|t_{-eta} - conj(t_eta)|`.
    pub fn hermitian_residual(&self) -> f64 {
        self.t
            .iter()
            .map(|(eta, c)| (self.get(&-eta) - c.conj()).norm())
            .fold(0.0, f64::max)
    }
}

/// The unique Toeplitz matrix with `f = E_d^† mat(f) E_d`:
/// `t_eta = |Omega_d| f_eta / N_eta`.
pub fn to_toeplitz(f: &TrigPoly, ws: &WeightSet) -> Result<ToeplitzMat> {
    let counts = ws.difference_counts();
    for w in f.coeffs.keys() {
        if !counts.contains_key(w) {
            let min_degree = lattice::matrix_order(&f.rs, f)?;
            return Err(Error::SupportTooLarge {
                weight: w.0.clone(),
                min_degree,
            });
        }
    }
    let n = ws.len() as f64;
    let t = counts
        .into_iter()
        .map(|(eta, k)| {
            let c = f.coeff(&eta) * (n / k as f64);
            (eta, c)
        })
        .collect();
    Ok(ToeplitzMat { ws: ws.clone(), t })
}

/// Inverse of [`to_toeplitz`]: `f_eta = N_eta t_eta / |Omega_d|`.
pub fn from_toeplitz(rs: &RootSystem, x: &ToeplitzMat) -> TrigPoly {
    let n = x.ws.len() as f64;
    let counts = x.ws.difference_counts();
    let mut coeffs = BTreeMap::new();
    for (eta, k) in counts {
        let c = x.get(&eta) * (k as f64 / n);
        if c != Complex64::new(0.0, 0.0) {
            coeffs.insert(eta, c);
        }
    }
    TrigPoly {
        rs: rs.clone(),
        coeffs,
    }
}

/// `(g ⋆ X)_{mu nu} = X_{g^{-1} mu, g^{-1} nu}`, i.e. `t_eta -> t_{g^{-1} eta}`.
pub fn act_mat(g: &GroupElement, x: &ToeplitzMat) -> ToeplitzMat {
    ToeplitzMat {
        ws: x.ws.clone(),
        t: x.t.iter().map(|(eta, c)| (g.act_weight(eta), *c)).collect(),
    }
}

/// One term of the JSON polynomial format.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TermSpec {
    pub weight: Vec<i64>,
    pub re: f64,
    #[serde(default)]
    pub im: f64,
}

/// `{"root_system": "A2", "terms": [{"weight": [1, 0], "re": 4.0, "im": 0.0}]}`
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PolyFile {
    pub root_system: String,
    pub terms: Vec<TermSpec>,
}

fn parse_err(field: impl Into<String>, message: impl Into<String>) -> Error {
    Error::Parse {
        field: field.into(),
        message: message.into(),
    }
}

impl PolyFile {
    pub fn parse(text: &str) -> Result<Self> {
        if text.trim().is_empty() {
            return Err(parse_err("<input>", "empty polynomial file"));
        }
        serde_json::from_str(text).map_err(|e| {
            parse_err(
                format!("line {} column {}", e.line(), e.column()),
                e.to_string(),
            )
        })
    }

    /// Validate and build the polynomial. Missing conjugate terms are filled
    /// in; a weight listed twice is rejected.
    pub fn to_poly(&self) -> Result<TrigPoly> {
        let rs = RootSystem::parse(&self.root_system)
            .map_err(|e| parse_err("root_system", e.to_string()))?;
        if self.terms.is_empty() {
            return Err(parse_err("terms", "no terms given"));
        }
        let mut seen = HashSet::new();
        let mut terms = Vec::with_capacity(self.terms.len());
        for (k, t) in self.terms.iter().enumerate() {
            let field = format!("terms[{k}]");
            if t.weight.len() != rs.rank() {
                return Err(parse_err(
                    format!("{field}.weight"),
                    format!(
                        "expected {} coordinates, found {}",
                        rs.rank(),
                        t.weight.len()
                    ),
                ));
            }
            if !t.re.is_finite() || !t.im.is_finite() {
                return Err(parse_err(field, "coefficient is not finite"));
            }
            if !seen.insert(t.weight.clone()) {
                return Err(parse_err(
                    format!("{field}.weight"),
                    format!("duplicate weight {:?}", t.weight),
                ));
            }
            terms.push((Weight(t.weight.clone()), Complex64::new(t.re, t.im)));
        }
        TrigPoly::from_terms(&rs, terms).map_err(|e| match e {
            Error::NotConjugateSymmetric(w) => parse_err(
                "terms",
                format!("coefficients at {w:?} and its negative are not conjugate"),
            ),
            other => other,
        })
    }

    pub fn from_poly(f: &TrigPoly) -> Self {
        PolyFile {
            root_system: f.rs.id.to_string(),
            terms: f
                .coeffs
                .iter()
                .map(|(w, c)| TermSpec {
                    weight: w.0.clone(),
                    re: c.re,
                    im: c.im,
                })
                .collect(),
        }
    }
}

impl TrigPoly {
    pub fn from_json(text: &str) -> Result<Self> {
        PolyFile::parse(text)?.to_poly()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&PolyFile::from_poly(self)).expect("plain data serializes")
    }
}
