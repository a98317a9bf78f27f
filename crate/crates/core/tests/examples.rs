mod common;

use num_complex::Complex64;
use rand::Rng;
use trigsym::lattice::{matrix_order, weight_set};
use trigsym::linalg::CMat;
use trigsym::oracle::{grid_minimize, Domain, GridSpec};
use trigsym::reptheory::Symmetry;
use trigsym::sdp::{lower_bound, solve, Mode, SdpProblem, SolverConfig};
use trigsym::trigpoly::{act_mat, to_toeplitz};
use trigsym::{Point, Weight};

use common::{a1_example, a2_block_example, group, rng};

fn paper_order() -> Vec<Weight> {
    [[0, 0], [-1, 0], [1, -1], [0, 1], [0, -1], [-1, 1], [1, 0]]
        .iter()
        .map(|w| Weight(w.to_vec()))
        .collect()
}

/// The invariant 7x7 pattern, rows in the order of `paper_order`.
#[allow(clippy::too_many_arguments)]
fn pattern(
    a: Complex64,
    b: Complex64,
    c: Complex64,
    d: Complex64,
    e: Complex64,
    f: Complex64,
    g: Complex64,
    h: Complex64,
    k: Complex64,
) -> [[Complex64; 7]; 7] {
    let (bc, cc, fc, gc) = (b.conj(), c.conj(), f.conj(), g.conj());
    [
        [a, b, b, b, c, c, c],
        [bc, d, e, e, f, f, g],
        [bc, e, d, e, f, g, f],
        [bc, e, e, d, g, f, f],
        [cc, fc, fc, gc, h, k, k],
        [cc, fc, gc, fc, k, h, k],
        [cc, gc, fc, fc, k, k, h],
    ]
}

fn to_canonical(ws: &trigsym::WeightSet, rows: &[[Complex64; 7]; 7]) -> CMat {
    let pos: Vec<usize> = paper_order()
        .iter()
        .map(|w| ws.position(w).unwrap())
        .collect();
    let mut x = CMat::zeros(7, 7);
    for i in 0..7 {
        for j in 0..7 {
            x[(pos[i], pos[j])] = rows[i][j];
        }
    }
    x
}

#[test]
fn a2_example_matrix() {
    let f = a2_block_example();
    assert_eq!(matrix_order(&f.rs, &f).unwrap(), 1);
    let ws = weight_set(&f.rs, 1);
    let x = to_toeplitz(&f, &ws).unwrap().dense();
    let r = |v: f64| Complex64::new(v, 0.0);
    let want = pattern(
        r(6.0),
        r(7.0),
        r(7.0),
        r(6.0),
        r(0.0),
        r(7.0),
        r(14.0),
        r(6.0),
        r(0.0),
    );
    assert_eq!(x, to_canonical(&ws, &want));
}

#[test]
fn a2_example_objective() {
    // tr(mat(f) X) written out in the pattern variables
    let f = a2_block_example();
    let ws = weight_set(&f.rs, 1);
    let cm = to_toeplitz(&f, &ws).unwrap().dense();
    let mut r = rng(7);
    for _ in 0..5 {
        let mut re = || Complex64::new(r.random_range(-1.0..1.0), 0.0);
        let (a, d, e, h, k) = (re(), re(), re(), re(), re());
        let mut cx = || Complex64::new(r.random_range(-1.0..1.0), r.random_range(-1.0..1.0));
        let (b, c, fv, g) = (cx(), cx(), cx(), cx());
        let x = to_canonical(&ws, &pattern(a, b, c, d, e, fv, g, h, k));
        let got = (&cm * &x).trace();
        let s = |v: f64| Complex64::new(v, 0.0);
        let (bc, cc, fc, gc) = (b.conj(), c.conj(), fv.conj(), g.conj());
        let want = s(2.0)
            * (s(6.0) * d - s(6.0) * e - s(7.0) * fv + s(7.0) * g - s(7.0) * fc
                + s(7.0) * gc
                + s(6.0) * h
                - s(6.0) * k)
            + (s(6.0) * a
                + s(21.0) * (b + c + bc + cc)
                + s(6.0) * d
                + s(12.0) * e
                + s(56.0) * (fv + fc)
                + s(28.0) * (g + gc)
                + s(6.0) * h
                + s(12.0) * k);
        assert!((got - want).norm() < 1e-12, "{got} vs {want}");
    }
}

#[test]
fn a2_example_bounds() {
    let f = a2_block_example();
    let wg = group("A2");
    let cfg = SolverConfig::default();
    let ws = weight_set(&f.rs, 1);
    let sym = Symmetry::new(&wg, &ws).unwrap();
    let prob = SdpProblem::build(&f, 1, Mode::Block, Some(&wg), Some(&sym.sab)).unwrap();
    let sizes: Vec<usize> = prob.blocks.iter().map(|b| b.base.nrows()).collect();
    assert_eq!(sizes, vec![2, 3]);
    let block = solve(&prob, &cfg).unwrap().converged().unwrap().bound;
    let dense = lower_bound(&f, &wg, 1, Mode::Dense, &cfg).unwrap().bound;
    let inv = lower_bound(&f, &wg, 1, Mode::Invariant, &cfg)
        .unwrap()
        .bound;
    assert!((dense - block).abs() < 1e-5 && (inv - block).abs() < 1e-5);
    let spec = GridSpec::default();
    let (grid, _) = grid_minimize(&f, &spec);
    assert!(grid >= block - 1e-5, "grid {grid} below bound {block}");
    let alcove = grid_minimize(
        &f,
        &GridSpec {
            domain: Domain::Alcove,
            ..spec
        },
    )
    .0;
    assert!((alcove - grid).abs() < 1e-6);
}

#[test]
fn a1_example_all_modes() {
    let f = a1_example();
    let wg = group("A1");
    let cfg = SolverConfig::default();
    for mode in [Mode::Dense, Mode::Invariant, Mode::Block] {
        let r = lower_bound(&f, &wg, 1, mode, &cfg)
            .unwrap()
            .converged()
            .unwrap();
        assert!(r.bound.abs() < 1e-6, "{mode:?}: {}", r.bound);
    }
    let (v, u) = grid_minimize(&f, &GridSpec::default());
    assert!(v.abs() < 1e-4);
    let u = u.0[0].rem_euclid(1.0);
    assert!(
        (u - 1.0 / 6.0).abs() < 1e-3 || (u - 5.0 / 6.0).abs() < 1e-3,
        "argmin {u}"
    );
    assert!((f.evaluate(&Point(vec![1.0 / 6.0]))).abs() < 1e-12);
}

#[test]
fn a1_reflection_conjugates_parameters() {
    let rs = group("A1").rs;
    let ws = weight_set(&rs, 1);
    let b = Complex64::new(0.1, 0.2);
    let c = Complex64::new(-0.3, 0.05);
    let x = trigsym::ToeplitzMat::from_entries(
        &ws,
        [
            (Weight(vec![0]), Complex64::new(1.0 / 3.0, 0.0)),
            (Weight(vec![1]), b),
            (Weight(vec![-1]), b.conj()),
            (Weight(vec![2]), c),
            (Weight(vec![-2]), c.conj()),
        ],
    );
    let wg = group("A1");
    let y = act_mat(&wg.elements[1], &x);
    assert_eq!(y.get(&Weight(vec![1])), b.conj());
    assert_eq!(y.get(&Weight(vec![2])), c.conj());
    assert_eq!(act_mat(&wg.elements[0], &x), x);
}

#[test]
fn a2_multiplicity_recurrences() {
    use trigsym::reptheory::{build_perm_rep, character_table, multiplicities};
    let wg = group("A2");
    let ct = character_table(&wg).unwrap();
    let m: Vec<Vec<usize>> = (1..=7)
        .map(|d| {
            let rep = build_perm_rep(&wg, &weight_set(&wg.rs, d)).unwrap();
            multiplicities(&rep, &ct).unwrap()
        })
        .collect();
    for d in 1..7 {
        let (a, b) = (&m[d - 1], &m[d]);
        assert_eq!(b[0], a[0] + d);
        assert_eq!(b[1], a[1] + 2 * d + 2);
        assert_eq!(b[2], a[2] + d + 2);
    }
}
