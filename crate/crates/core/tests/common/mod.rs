#![allow(dead_code)]

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use trigsym::{lattice, RootSystem, TrigPoly, Weight, WeylGroup};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn group(s: &str) -> WeylGroup {
    WeylGroup::generate(&RootSystem::parse(s).unwrap()).unwrap()
}

pub fn a1_example() -> TrigPoly {
    let rs = RootSystem::parse("A1").unwrap();
    TrigPoly::from_terms(
        &rs,
        [(2, 1.0), (1, -2.0), (0, 3.0), (-1, -2.0), (-2, 1.0)]
            .into_iter()
            .map(|(w, x)| (Weight(vec![w]), Complex64::new(x, 0.0))),
    )
    .unwrap()
}

/// The A2 polynomial with constant 6, weight 4 on the orbits of the
/// fundamental weights and 2 on the orbits of their doubles.
pub fn a2_block_example() -> TrigPoly {
    let rs = RootSystem::parse("A2").unwrap();
    let terms = [
        ([0, 0], 6.0),
        ([1, 0], 4.0),
        ([0, 1], 4.0),
        ([-1, 1], 4.0),
        ([1, -1], 4.0),
        ([-1, 0], 4.0),
        ([0, -1], 4.0),
        ([2, 0], 2.0),
        ([0, 2], 2.0),
        ([-2, 2], 2.0),
        ([2, -2], 2.0),
        ([-2, 0], 2.0),
        ([0, -2], 2.0),
    ];
    TrigPoly::from_terms(
        &rs,
        terms
            .into_iter()
            .map(|(w, x)| (Weight(w.to_vec()), Complex64::new(x, 0.0))),
    )
    .unwrap()
}

/// Random real-valued polynomial supported on `Omega_d - Omega_d` with
/// real and imaginary parts in [-1, 1], averaged over the group.
pub fn random_invariant(wg: &WeylGroup, d: usize, rng: &mut impl Rng) -> TrigPoly {
    let ws = lattice::weight_set(&wg.rs, d);
    let mut support: Vec<Weight> = ws.difference_counts().into_keys().collect();
    support.sort();
    let mut terms = Vec::new();
    for w in support {
        let neg = -&w;
        if w < neg {
            continue;
        }
        let re = rng.random_range(-1.0..=1.0);
        let im = if w == neg {
            0.0
        } else {
            rng.random_range(-1.0..=1.0)
        };
        terms.push((w, Complex64::new(re, im)));
    }
    TrigPoly::from_terms(&wg.rs, terms).unwrap().symmetrize(wg)
}

/// Smallest order whose weight set contains a nonzero weight.
pub fn first_nontrivial(wg: &WeylGroup) -> usize {
    (1..)
        .find(|&d| lattice::weight_set(&wg.rs, d).len() > 1)
        .unwrap()
}
