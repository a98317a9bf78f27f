//! Reference computations used to validate the relaxation: grid search for
//! the global minimum and a brute-force weight-set enumeration that shares
//! no code with the exact Voronoi machinery.

use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use crate::lattice::WeightSet;
use crate::rootsys::{solve_rational, Point, RootSystem, Weight, Q};
use crate::trigpoly::TrigPoly;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Domain {
    /// `[0, 1)^n` in coroot coordinates, one full period.
    UnitCell,
    /// The fundamental alcove of the affine Weyl group; only valid for
    /// invariant polynomials.
    Alcove,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub resolution: usize,
    pub sweeps: usize,
    /// Number of best grid points that get polished.
    pub starts: usize,
    pub domain: Domain,
}

impl Default for GridSpec {
    fn default() -> Self {
        GridSpec {
            resolution: 64,
            sweeps: 20,
            starts: 4,
            domain: Domain::UnitCell,
        }
    }
}

/// Minimal evaluator with the weights flattened to floats.
struct Evaluator {
    terms: Vec<(Vec<f64>, f64, f64)>,
}

impl Evaluator {
    fn new(f: &TrigPoly) -> Self {
        Evaluator {
            terms: f
                .coeffs
                .iter()
                .map(|(w, c)| (w.0.iter().map(|&x| x as f64).collect(), c.re, c.im))
                .collect(),
        }
    }

    fn eval(&self, u: &[f64]) -> f64 {
        let tau = 2.0 * std::f64::consts::PI;
        self.terms
            .iter()
            .map(|(w, re, im)| {
                let p: f64 = w.iter().zip(u).map(|(a, b)| a * b).sum();
                let (s, c) = (tau * p).sin_cos();
                re * c - im * s
            })
            .sum()
    }
}

type Rows = Vec<Vec<f64>>;

/// Rows of the alcove inequalities `<a, u> >= 0` and `<top, u> <= 1`, plus
/// the bounding box of the alcove, all in coroot coordinates.
fn alcove(rs: &RootSystem) -> (Rows, Rows, Vec<(f64, f64)>) {
    let n = rs.rank();
    let simple: Vec<Vec<f64>> = rs
        .cartan
        .iter()
        .map(|row| row.iter().map(|&x| x as f64).collect())
        .collect();
    let mut tops = Vec::new();
    let mut bbox = vec![(0.0f64, 0.0f64); n];
    for (range, top) in rs.component_ranges.iter().zip(&rs.highest_roots) {
        let coords = rs.weight_coords(top);
        tops.push(coords.iter().map(|x| x.to_f64().unwrap()).collect());
        // vertices varpi_i^vee / m_i where top = sum m_i rho_i
        let m = rs.base_expansion(top);
        let a: Vec<Vec<Q>> = range
            .clone()
            .map(|j| {
                range
                    .clone()
                    .map(|k| Q::from_integer(rs.cartan[j][k]))
                    .collect()
            })
            .collect();
        for (li, i) in range.clone().enumerate() {
            let e: Vec<Q> = (0..range.len())
                .map(|k| Q::from_integer(i64::from(k == li)))
                .collect();
            let v = solve_rational(&a, &e).expect("Cartan matrix is invertible");
            for (lk, k) in range.clone().enumerate() {
                let x = (v[lk] / m[i]).to_f64().unwrap();
                bbox[k].0 = bbox[k].0.min(x);
                bbox[k].1 = bbox[k].1.max(x);
            }
        }
    }
    (simple, tops, bbox)
}

fn in_alcove(simple: &[Vec<f64>], tops: &[Vec<f64>], u: &[f64]) -> bool {
    let dot = |a: &Vec<f64>| a.iter().zip(u).map(|(x, y)| x * y).sum::<f64>();
    simple.iter().all(|a| dot(a) >= -1e-12) && tops.iter().all(|t| dot(t) <= 1.0 + 1e-12)
}

fn polish(ev: &Evaluator, start: Vec<f64>, value: f64, h0: f64, sweeps: usize) -> (f64, Vec<f64>) {
    let mut u = start;
    let mut best = value;
    let mut h = h0;
    for _ in 0..sweeps {
        for k in 0..u.len() {
            loop {
                let mut improved = false;
                for dir in [1.0, -1.0] {
                    let mut v = u.clone();
                    v[k] += dir * h;
                    let val = ev.eval(&v);
                    if val < best {
                        best = val;
                        u = v;
                        improved = true;
                        break;
                    }
                }
                if !improved {
                    break;
                }
            }
        }
        h *= 0.5;
    }
    (best, u)
}

/// Grid search with coordinate-descent refinement. Ties are broken towards
/// the lexicographically smaller point so the result is deterministic.
pub fn grid_minimize(f: &TrigPoly, spec: &GridSpec) -> (f64, Point) {
    let n = f.rs.rank();
    let res = spec.resolution.max(8);
    let ev = Evaluator::new(f);
    let (simple, tops, bbox) = alcove(&f.rs);
    let (lo, width): (Vec<f64>, Vec<f64>) = match spec.domain {
        Domain::UnitCell => (vec![0.0; n], vec![1.0; n]),
        Domain::Alcove => bbox.iter().map(|(a, b)| (*a, b - a)).unzip(),
    };
    let mut samples: Vec<(f64, Vec<f64>)> = Vec::new();
    let mut idx = vec![0usize; n];
    'grid: loop {
        let u: Vec<f64> = (0..n)
            .map(|k| lo[k] + width[k] * idx[k] as f64 / res as f64)
            .collect();
        if spec.domain == Domain::UnitCell || in_alcove(&simple, &tops, &u) {
            samples.push((ev.eval(&u), u));
        }
        let last = if spec.domain == Domain::Alcove {
            res
        } else {
            res - 1
        };
        let mut k = 0;
        loop {
            if k == n {
                break 'grid;
            }
            if idx[k] < last {
                idx[k] += 1;
                break;
            }
            idx[k] = 0;
            k += 1;
        }
    }
    samples.sort_by(|a, b| a.0.total_cmp(&b.0).then_with(|| cmp_point(&a.1, &b.1)));
    let h0 = width.iter().cloned().fold(0.0, f64::max) / res as f64;
    let mut best: Option<(f64, Vec<f64>)> = None;
    for (val, u) in samples.into_iter().take(spec.starts.max(1)) {
        let cand = polish(&ev, u, val, h0, spec.sweeps);
        best = match best {
            Some(b) if b.0 < cand.0 || (b.0 == cand.0 && cmp_point(&b.1, &cand.1).is_le()) => {
                Some(b)
            }
            _ => Some(cand),
        };
    }
    let (v, u) = best.unwrap_or_else(|| (ev.eval(&vec![0.0; n]), vec![0.0; n]));
    (v, Point(u))
}

fn cmp_point(a: &[f64], b: &[f64]) -> std::cmp::Ordering {
    for (x, y) in a.iter().zip(b) {
        let o = x.total_cmp(y);
        if o.is_ne() {
            return o;
        }
    }
    std::cmp::Ordering::Equal
}

fn to_f64(v: &[Q]) -> Vec<f64> {
    v.iter().map(|x| x.to_f64().unwrap()).collect()
}

/// `Omega_d` by ball enumeration and floating-point Voronoi inequalities
/// against every coroot-lattice vector with coefficients in `[-6, 6]`.
pub fn weight_set_bruteforce(rs: &RootSystem, d: usize) -> WeightSet {
    let n = rs.rank();
    let fw: Vec<Vec<f64>> = rs.fweights.iter().map(|v| to_f64(v)).collect();
    let co: Vec<Vec<f64>> = rs.coroots.iter().map(|v| to_f64(v)).collect();
    let dim = rs.ambient_dim;
    let norm = |v: &[f64]| v.iter().map(|x| x * x).sum::<f64>().sqrt();
    // covering radius of the coroot lattice is at most half the sum of the
    // basis lengths, so |w_i| = |<w, rho_i^vee>| <= d R |rho_i^vee|
    let radius = 0.5 * co.iter().map(|v| norm(v)).sum::<f64>();
    let bounds: Vec<i64> = co
        .iter()
        .map(|v| (d as f64 * radius * norm(v)).ceil() as i64)
        .collect();
    let combine = |basis: &[Vec<f64>], coef: &[i64]| -> Vec<f64> {
        let mut out = vec![0.0; dim];
        for (b, &k) in basis.iter().zip(coef) {
            for (o, x) in out.iter_mut().zip(b) {
                *o += k as f64 * x;
            }
        }
        out
    };
    let mut lambdas = Vec::new();
    each_in_box(&vec![6; n], |c| {
        if c.iter().any(|&x| x != 0) {
            let v = combine(&co, c);
            let nn: f64 = v.iter().map(|x| x * x).sum();
            lambdas.push((v, nn));
        }
    });
    let mut found = Vec::new();
    each_in_box(&bounds, |c| {
        let w = combine(&fw, c);
        let inside = lambdas.iter().all(|(l, nn)| {
            let p: f64 = w.iter().zip(l).map(|(a, b)| a * b).sum();
            2.0 * p <= d as f64 * nn + 1e-9
        });
        if inside {
            found.push(Weight(c.to_vec()));
        }
    });
    WeightSet::from_weights(rs, d, found)
}

fn each_in_box(bounds: &[i64], mut f: impl FnMut(&[i64])) {
    let mut c: Vec<i64> = bounds.iter().map(|b| -b).collect();
    'outer: loop {
        f(&c);
        for k in 0..c.len() {
            if c[k] < bounds[k] {
                c[k] += 1;
                continue 'outer;
            }
            c[k] = -bounds[k];
        }
        return;
    }
}
