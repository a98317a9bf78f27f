//! Voronoi cell of the coroot lattice and the truncated weight sets
//! `Omega_d = Omega ∩ d Vor(Lambda)`.
//!
//! All membership tests run in exact rational arithmetic.

use std::collections::{BTreeSet, HashMap};

use num_traits::{ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::rootsys::{RootSystem, Weight, Q};
use crate::trigpoly::TrigPoly;

/// Voronoi-relevant vectors of the coroot lattice, with their squared norms.
#[derive(Debug, Clone)]
pub struct Voronoi {
    pub relevant: Vec<(Vec<i64>, Q)>,
}

fn for_each_in_box(bounds: &[i64], mut f: impl FnMut(&[i64])) {
    let n = bounds.len();
    let mut c: Vec<i64> = bounds.iter().map(|b| -b).collect();
    loop {
        f(&c);
        let mut k = 0;
        loop {
            if k == n {
                return;
            }
            if c[k] < bounds[k] {
                c[k] += 1;
                break;
            }
            c[k] = -bounds[k];
            k += 1;
        }
    }
}

/// Diagonal of the inverse of a small rational matrix, as floats.
fn inverse_diagonal(m: &[Vec<Q>]) -> Vec<f64> {
    let n = m.len();
    (0..n)
        .map(|i| {
            let e: Vec<Q> = (0..n)
                .map(|j| {
                    if i == j {
                        Q::from_integer(1)
                    } else {
                        Q::zero()
                    }
                })
                .collect();
            let x = crate::rootsys::solve_rational(m, &e).expect("Gram is invertible");
            x[i].to_f64().unwrap()
        })
        .collect()
}

impl Voronoi {
    /// A vector is Voronoi-relevant iff it is, up to sign, the unique shortest
    /// vector of its class in `Lambda / 2 Lambda`.
    pub fn new(rs: &RootSystem) -> Self {
        let n = rs.rank();
        let mut bound = Q::zero();
        for mask in 1u32..(1 << n) {
            let c: Vec<i64> = (0..n).map(|i| i64::from((mask >> i) & 1)).collect();
            bound = bound.max(rs.coroot_norm_sq(&c));
        }
        let inv = inverse_diagonal(&rs.coroot_gram);
        let b = bound.to_f64().unwrap();
        let bounds: Vec<i64> = inv
            .iter()
            .map(|g| (b * g).sqrt().floor() as i64 + 1)
            .collect();
        // class -> (min norm, vectors attaining it)
        let mut best: HashMap<u32, (Q, Vec<Vec<i64>>)> = HashMap::new();
        for_each_in_box(&bounds, |c| {
            if c.iter().all(|&x| x == 0) {
                return;
            }
            let norm = rs.coroot_norm_sq(c);
            if norm > bound {
                return;
            }
            let class = c
                .iter()
                .enumerate()
                .fold(0u32, |acc, (i, x)| acc | ((x.rem_euclid(2) as u32) << i));
            if class == 0 {
                return;
            }
            let entry = best.entry(class).or_insert_with(|| (norm, Vec::new()));
            if norm < entry.0 {
                *entry = (norm, vec![c.to_vec()]);
            } else if norm == entry.0 {
                entry.1.push(c.to_vec());
            }
        });
        let mut relevant: Vec<(Vec<i64>, Q)> = best
            .into_values()
            .filter(|(_, v)| v.len() == 2)
            .flat_map(|(norm, v)| v.into_iter().map(move |c| (c, norm)))
            .collect();
        relevant.sort();
        Voronoi { relevant }
    }

    /// `w ∈ d Vor(Lambda)`, boundary included.
    pub fn contains(&self, w: &Weight, d: usize) -> bool {
        let d = Q::from_integer(d as i64);
        self.relevant.iter().all(|(c, norm)| {
            let p: i64 = c.iter().zip(&w.0).map(|(a, b)| a * b).sum();
            Q::from_integer(2 * p) <= d * norm
        })
    }

    /// Smallest `d` with `w ∈ d Vor(Lambda)`.
    pub fn min_degree(&self, w: &Weight) -> usize {
        self.relevant
            .iter()
            .map(|(c, norm)| {
                let p: i64 = c.iter().zip(&w.0).map(|(a, b)| a * b).sum();
                (Q::from_integer(2 * p) / norm).ceil().to_integer().max(0) as usize
            })
            .max()
            .unwrap_or(0)
    }
}

pub fn in_scaled_voronoi(rs: &RootSystem, w: &Weight, d: usize) -> bool {
    Voronoi::new(rs).contains(w, d)
}

#[derive(Debug, Clone, PartialEq)]
pub struct WeightSet {
    pub d: usize,
    pub weights: Vec<Weight>,
    pub index: HashMap<Weight, usize>,
}

impl WeightSet {
    /// Build from an arbitrary list; weights are put in canonical order.
    pub fn from_weights(
        rs: &RootSystem,
        d: usize,
        weights: impl IntoIterator<Item = Weight>,
    ) -> Self {
        let mut keyed: Vec<(Q, Weight)> = weights
            .into_iter()
            .collect::<BTreeSet<_>>()
            .into_iter()
            .map(|w| (rs.weight_norm_sq(&w), w))
            .collect();
        keyed.sort();
        let weights: Vec<Weight> = keyed.into_iter().map(|(_, w)| w).collect();
        let index = weights
            .iter()
            .enumerate()
            .map(|(i, w)| (w.clone(), i))
            .collect();
        WeightSet { d, weights, index }
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn position(&self, w: &Weight) -> Option<usize> {
        self.index.get(w).copied()
    }

    /// `N_eta = #{(mu, nu) : mu - nu = eta}` for every difference.
    pub fn difference_counts(&self) -> HashMap<Weight, usize> {
        let mut out = HashMap::new();
        for mu in &self.weights {
            for nu in &self.weights {
                *out.entry(mu - nu).or_insert(0) += 1;
            }
        }
        out
    }
}

/// The lattice points of `d Vor(Lambda)` in canonical order
/// `(norm_sq, coordinates)`.
pub fn weight_set(rs: &RootSystem, d: usize) -> WeightSet {
    let vor = Voronoi::new(rs);
    // lambda = ±rho_i^vee gives 2|w_i| <= d |rho_i^vee|^2.
    let bounds: Vec<i64> = (0..rs.rank())
        .map(|i| {
            (Q::from_integer(d as i64) * rs.coroot_gram[i][i] / Q::from_integer(2))
                .floor()
                .to_integer()
        })
        .collect();
    let mut found = Vec::new();
    for_each_in_box(&bounds, |c| {
        let w = Weight(c.to_vec());
        if vor.contains(&w, d) {
            found.push(w);
        }
    });
    WeightSet::from_weights(rs, d, found)
}

/// Minimal `d` with `supp(f) \ {0} ⊆ Omega_d`.
pub fn degree(rs: &RootSystem, f: &TrigPoly) -> Result<usize> {
    if f.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let vor = Voronoi::new(rs);
    Ok(f.coeffs
        .keys()
        .map(|w| vor.min_degree(w))
        .max()
        .unwrap_or(0))
}

/// Minimal `d` with `supp(f) ⊆ Omega_d + Omega_d`.
pub fn matrix_order(rs: &RootSystem, f: &TrigPoly) -> Result<usize> {
    let deg = degree(rs, f)?;
    for d in 0..deg {
        let ws = weight_set(rs, d);
        let sums = ws.difference_counts();
        if f.coeffs.keys().all(|w| sums.contains_key(w)) {
            return Ok(d);
        }
    }
    Ok(deg)
}
