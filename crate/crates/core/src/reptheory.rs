//! Permutation representation on `C^{Omega_d}`, characters and irreducible
//! representations of the supported Weyl groups, isotypic projections and
//! the symmetry adapted basis.
//!
//! Irreducible representations are built per irreducible component from
//! generator images and combined by Kronecker products. Order per component:
//! rank one gives (sign, trivial); a dihedral group of order `2m` gives the
//! non-trivial one-dimensional characters (sign first), then the
//! two-dimensional ones by increasing rotation index, then the trivial one.

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::lattice::WeightSet;
use crate::linalg::{c, kron, max_abs, CMat};
use crate::weyl::WeylGroup;

/// `theta(g) e_k = e_{perm[g][k]}`, i.e. `(theta(g) x)_w = x_{g^{-1} w}`.
#[derive(Debug, Clone, PartialEq)]
pub struct PermRep {
    pub perms: Vec<Vec<usize>>,
}

impl PermRep {
    pub fn dim(&self) -> usize {
        self.perms.first().map_or(0, |p| p.len())
    }

    pub fn matrix(&self, g: usize) -> CMat {
        let n = self.dim();
        let mut m = CMat::zeros(n, n);
        for (k, &img) in self.perms[g].iter().enumerate() {
            m[(img, k)] = c(1.0);
        }
        m
    }

    /// Number of fixed weights.
    pub fn trace(&self, g: usize) -> usize {
        self.perms[g]
            .iter()
            .enumerate()
            .filter(|(k, img)| k == *img)
            .count()
    }

    /// `sum_g coef[g] theta(g)`.
    pub fn combine(&self, coef: &[Complex64]) -> CMat {
        let n = self.dim();
        let mut m = CMat::zeros(n, n);
        for (g, p) in self.perms.iter().enumerate() {
            if coef[g] == c(0.0) {
                continue;
            }
            for (k, &img) in p.iter().enumerate() {
                m[(img, k)] += coef[g];
            }
        }
        m
    }
}

pub fn build_perm_rep(wg: &WeylGroup, ws: &WeightSet) -> Result<PermRep> {
    let mut perms = Vec::with_capacity(wg.order());
    for g in &wg.elements {
        let mut p = Vec::with_capacity(ws.len());
        for w in &ws.weights {
            let img = ws
                .position(&g.act_weight(w))
                .ok_or(Error::WeightSetNotStable)?;
            p.push(img);
        }
        perms.push(p);
    }
    Ok(PermRep { perms })
}

#[derive(Debug, Clone, PartialEq)]
pub struct CharacterTable {
    pub classes: Vec<Vec<usize>>,
    /// Class index of every group element.
    pub class_of: Vec<usize>,
    /// `chars[i][k]` is the value of irrep `i` on class `k`.
    pub chars: Vec<Vec<Complex64>>,
    pub dims: Vec<usize>,
    pub order: usize,
}

impl CharacterTable {
    pub fn num_irreps(&self) -> usize {
        self.chars.len()
    }

    pub fn chi(&self, i: usize, g: usize) -> Complex64 {
        self.chars[i][self.class_of[g]]
    }

    /// `(1/|W|) sum_k |C_k| chi_i(C_k) conj(chi_j(C_k))`.
    pub fn inner(&self, i: usize, j: usize) -> Complex64 {
        self.classes
            .iter()
            .enumerate()
            .map(|(k, cl)| self.chars[i][k] * self.chars[j][k].conj() * cl.len() as f64)
            .sum::<Complex64>()
            / self.order as f64
    }
}

#[derive(Debug, Clone)]
pub struct IrrepMatrices {
    pub dims: Vec<usize>,
    /// Representing matrices as constructed; for the reflection
    /// representation these are the integer weight-basis matrices.
    pub raw: Vec<Vec<CMat>>,
    /// Unitary matrices equivalent to `raw`, used for the adapted basis.
    pub unitary: Vec<Vec<CMat>>,
    /// Short labels such as `sign`, `refl1`, `trivial`, `sign⊗refl1`.
    pub labels: Vec<String>,
}

/// Generator images of one irrep of one irreducible component.
struct ComponentIrrep {
    label: String,
    gens: Vec<CMat>,
}

fn rotation(theta: f64) -> CMat {
    let (s, co) = theta.sin_cos();
    CMat::from_row_slice(2, 2, &[c(co), c(-s), c(s), c(co)])
}

fn one(x: f64) -> CMat {
    CMat::from_element(1, 1, c(x))
}

fn component_irreps(wg: &WeylGroup, range: std::ops::Range<usize>) -> Result<Vec<ComponentIrrep>> {
    let rank = range.len();
    match rank {
        1 => Ok(vec![
            ComponentIrrep {
                label: "sign".into(),
                gens: vec![one(-1.0)],
            },
            ComponentIrrep {
                label: "trivial".into(),
                gens: vec![one(1.0)],
            },
        ]),
        2 => {
            let (i, j) = (range.start, range.start + 1);
            let m = match wg.rs.cartan[i][j] * wg.rs.cartan[j][i] {
                1 => 3,
                2 => 4,
                3 => 6,
                p => {
                    return Err(Error::UnsupportedGroup(format!(
                        "rank-two component with Cartan product {p}"
                    )))
                }
            };
            let mut out = vec![ComponentIrrep {
                label: "sign".into(),
                gens: vec![one(-1.0), one(-1.0)],
            }];
            if m % 2 == 0 {
                out.push(ComponentIrrep {
                    label: "sign1".into(),
                    gens: vec![one(-1.0), one(1.0)],
                });
                out.push(ComponentIrrep {
                    label: "sign2".into(),
                    gens: vec![one(1.0), one(-1.0)],
                });
            }
            // restriction of the weight-basis matrices to this component
            let restrict = |g: usize| -> CMat {
                let mat = &wg.generators[g].mat;
                CMat::from_fn(2, 2, |a, b| c(mat[i + a][i + b] as f64))
            };
            out.push(ComponentIrrep {
                label: "refl1".into(),
                gens: vec![restrict(i), restrict(j)],
            });
            let s = CMat::from_row_slice(2, 2, &[c(1.0), c(0.0), c(0.0), c(-1.0)]);
            for k in 2..=((m - 1) / 2) {
                let r = rotation(2.0 * PI * k as f64 / m as f64);
                out.push(ComponentIrrep {
                    label: format!("refl{k}"),
                    gens: vec![s.clone(), &s * r],
                });
            }
            out.push(ComponentIrrep {
                label: "trivial".into(),
                gens: vec![one(1.0), one(1.0)],
            });
            Ok(out)
        }
        _ => Err(Error::UnsupportedGroup(format!("component of rank {rank}"))),
    }
}

/// `D(g)` for every element, multiplying generator images along the word.
fn along_words(wg: &WeylGroup, gens: &[CMat]) -> Vec<CMat> {
    let d = gens[0].nrows();
    wg.elements
        .iter()
        .map(|g| {
            g.word
                .iter()
                .fold(CMat::identity(d, d), |acc, &s| acc * &gens[s])
        })
        .collect()
}

/// `U(g) = L^† D(g) L^{-†}` with `sum_g D(g)^† D(g) = L L^†`.
fn unitarize(mats: &[CMat]) -> Result<Vec<CMat>> {
    let d = mats[0].nrows();
    let k = mats
        .iter()
        .fold(CMat::zeros(d, d), |acc, m| acc + m.adjoint() * m);
    let chol = k
        .cholesky()
        .ok_or_else(|| Error::NumericalFailure("invariant form is not definite".into()))?;
    let l = chol.l();
    let lh = l.adjoint();
    let lh_inv = lh
        .clone()
        .try_inverse()
        .ok_or_else(|| Error::NumericalFailure("singular Cholesky factor".into()))?;
    Ok(mats.iter().map(|m| &lh * m * &lh_inv).collect())
}

/// Irreducible representations and the character table of a Weyl group.
pub fn irreps_and_characters(wg: &WeylGroup) -> Result<(IrrepMatrices, CharacterTable)> {
    let n = wg.rank();
    let ranges = &wg.rs.component_ranges;
    let per_comp: Vec<Vec<ComponentIrrep>> = ranges
        .iter()
        .map(|r| component_irreps(wg, r.clone()))
        .collect::<Result<_>>()?;

    // lexicographic tuples over components
    let mut combos: Vec<Vec<usize>> = vec![Vec::new()];
    for irr in &per_comp {
        combos = combos
            .into_iter()
            .flat_map(|p| {
                (0..irr.len()).map(move |k| {
                    let mut q = p.clone();
                    q.push(k);
                    q
                })
            })
            .collect();
    }

    let mut raw = Vec::new();
    let mut labels = Vec::new();
    for combo in &combos {
        let dims: Vec<usize> = combo
            .iter()
            .zip(&per_comp)
            .map(|(&k, irr)| irr[k].gens[0].nrows())
            .collect();
        let mut gens = Vec::with_capacity(n);
        for (ci, range) in ranges.iter().enumerate() {
            for local in 0..range.len() {
                let mut m = one(1.0);
                for (cj, (&k, irr)) in combo.iter().zip(&per_comp).enumerate() {
                    let factor = if cj == ci {
                        irr[k].gens[local].clone()
                    } else {
                        CMat::identity(dims[cj], dims[cj])
                    };
                    m = kron(&m, &factor);
                }
                gens.push(m);
            }
        }
        raw.push(along_words(wg, &gens));
        labels.push(
            combo
                .iter()
                .zip(&per_comp)
                .map(|(&k, irr)| irr[k].label.clone())
                .collect::<Vec<_>>()
                .join("⊗"),
        );
    }

    let class_of: Vec<usize> = (0..wg.order()).map(|g| wg.class_of(g)).collect();
    let mut chars = Vec::new();
    for mats in &raw {
        let row: Vec<Complex64> = wg.classes.iter().map(|cl| mats[cl[0]].trace()).collect();
        for (g, m) in mats.iter().enumerate() {
            if (m.trace() - row[class_of[g]]).norm() > 1e-9 {
                return Err(Error::UnsupportedGroup(
                    "character is not a class function".into(),
                ));
            }
        }
        chars.push(row);
    }
    let dims: Vec<usize> = raw.iter().map(|m| m[0].nrows()).collect();
    let ct = CharacterTable {
        classes: wg.classes.clone(),
        class_of,
        chars,
        dims: dims.clone(),
        order: wg.order(),
    };
    if ct.num_irreps() != wg.classes.len() {
        return Err(Error::UnsupportedGroup(format!(
            "{} irreps for {} classes",
            ct.num_irreps(),
            wg.classes.len()
        )));
    }
    if dims.iter().map(|d| d * d).sum::<usize>() != wg.order() {
        return Err(Error::UnsupportedGroup("sum of squared dimensions".into()));
    }
    for i in 0..ct.num_irreps() {
        for j in 0..ct.num_irreps() {
            let want = if i == j { 1.0 } else { 0.0 };
            if (ct.inner(i, j) - c(want)).norm() > 1e-9 {
                return Err(Error::UnsupportedGroup("characters not orthonormal".into()));
            }
        }
    }
    let unitary = raw
        .iter()
        .map(|m| unitarize(m))
        .collect::<Result<Vec<_>>>()?;
    Ok((
        IrrepMatrices {
            dims,
            raw,
            unitary,
            labels,
        },
        ct,
    ))
}

pub fn character_table(wg: &WeylGroup) -> Result<CharacterTable> {
    irreps_and_characters(wg).map(|(_, ct)| ct)
}

pub fn irrep_matrices(wg: &WeylGroup) -> Result<IrrepMatrices> {
    irreps_and_characters(wg).map(|(irr, _)| irr)
}

/// `m_i = (1/|W|) sum_g conj(chi_i(g)) trace(theta(g))`.
pub fn multiplicities(rep: &PermRep, ct: &CharacterTable) -> Result<Vec<usize>> {
    let order = ct.order as f64;
    (0..ct.num_irreps())
        .map(|i| {
            let v: Complex64 = (0..ct.order)
                .map(|g| ct.chi(i, g).conj() * rep.trace(g) as f64)
                .sum::<Complex64>()
                / order;
            let r = v.re.round();
            if (v - c(r)).norm() > 1e-8 || r < 0.0 {
                return Err(Error::NonIntegralMultiplicity {
                    irrep: i,
                    value: v.re,
                });
            }
            Ok(r as usize)
        })
        .collect()
}

/// `P^(i) = (d_i/|W|) sum_g chi_i(g^{-1}) theta(g)`.
pub fn isotypic_projection(wg: &WeylGroup, rep: &PermRep, ct: &CharacterTable, i: usize) -> CMat {
    let s = ct.dims[i] as f64 / ct.order as f64;
    let coef: Vec<Complex64> = (0..ct.order)
        .map(|g| ct.chi(i, wg.inverse[g]) * s)
        .collect();
    rep.combine(&coef)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BlockLayout {
    pub irrep: usize,
    pub label: String,
    pub dim: usize,
    pub mult: usize,
}

#[derive(Debug, Clone)]
pub struct SymmetryAdaptedBasis {
    /// Columns ordered by (irrep, copy index l, submodule j).
    pub t: CMat,
    /// Columns ordered by (irrep, submodule j, copy index l).
    pub t_tilde: CMat,
    pub layout: Vec<BlockLayout>,
    /// Weight set the basis was built for.
    pub ws: WeightSet,
    /// Order of the group the basis was built for.
    pub group_order: usize,
}

impl SymmetryAdaptedBasis {
    /// Column offset of irrep `i` in `t` and `t_tilde`.
    pub fn offset(&self, i: usize) -> usize {
        self.layout[..i].iter().map(|b| b.dim * b.mult).sum()
    }

    /// Column of `t` holding `w^(i)_{l j}` (zero-based `l`, `j`).
    pub fn column(&self, i: usize, l: usize, j: usize) -> usize {
        self.offset(i) + l * self.layout[i].mult + j
    }

    /// Column of `t_tilde` holding `w^(i)_{l j}`.
    pub fn column_tilde(&self, i: usize, l: usize, j: usize) -> usize {
        self.offset(i) + j * self.layout[i].dim + l
    }
}

/// Orthonormal basis of the column space by modified Gram–Schmidt.
fn orthonormal_columns(m: &CMat, rel_tol: f64) -> Vec<nalgebra::DVector<Complex64>> {
    let scale = m.column_iter().map(|col| col.norm()).fold(0.0, f64::max);
    let mut basis: Vec<nalgebra::DVector<Complex64>> = Vec::new();
    if scale == 0.0 {
        return basis;
    }
    for col in m.column_iter() {
        let mut v = col.clone_owned();
        for b in &basis {
            let p = b.dotc(&v);
            v -= b * p;
        }
        let nv = v.norm();
        if nv > rel_tol * scale {
            basis.push(v / c(nv));
        }
    }
    basis
}

/// Serre's construction of a symmetry adapted basis.
pub fn serre_basis(
    wg: &WeylGroup,
    rep: &PermRep,
    ct: &CharacterTable,
    irreps: &IrrepMatrices,
    ws: &WeightSet,
) -> Result<SymmetryAdaptedBasis> {
    let mults = multiplicities(rep, ct)?;
    let n = rep.dim();
    let order = ct.order as f64;
    let mut layout = Vec::new();
    let mut cols_t: Vec<nalgebra::DVector<Complex64>> = Vec::with_capacity(n);
    let mut cols_tt: Vec<nalgebra::DVector<Complex64>> = Vec::with_capacity(n);
    for (i, &m) in mults.iter().enumerate() {
        let d = irreps.dims[i];
        layout.push(BlockLayout {
            irrep: i,
            label: irreps.labels[i].clone(),
            dim: d,
            mult: m,
        });
        if m == 0 {
            continue;
        }
        let u = &irreps.unitary[i];
        // P_l = (d/|W|) sum_g U_{1 l}(g^{-1}) theta(g)
        let p: Vec<CMat> = (0..d)
            .map(|l| {
                let coef: Vec<Complex64> = (0..ct.order)
                    .map(|g| u[wg.inverse[g]][(0, l)] * (d as f64 / order))
                    .collect();
                rep.combine(&coef)
            })
            .collect();
        let first = orthonormal_columns(&p[0], 1e-8);
        if first.len() != m {
            return Err(Error::RankDeficiency {
                irrep: i,
                expected: m,
                found: first.len(),
            });
        }
        // w[l][j]
        let w: Vec<Vec<nalgebra::DVector<Complex64>>> = (0..d)
            .map(|l| first.iter().map(|v| &p[l] * v).collect())
            .collect();
        for row in &w {
            for v in row {
                cols_t.push(v.clone());
            }
        }
        for j in 0..m {
            for row in &w {
                cols_tt.push(row[j].clone());
            }
        }
    }
    if cols_t.len() != n {
        return Err(Error::RankDeficiency {
            irrep: usize::MAX,
            expected: n,
            found: cols_t.len(),
        });
    }
    Ok(SymmetryAdaptedBasis {
        t: CMat::from_columns(&cols_t),
        t_tilde: CMat::from_columns(&cols_tt),
        layout,
        ws: ws.clone(),
        group_order: wg.order(),
    })
}

/// Everything needed to block-diagonalize over one weight set.
#[derive(Debug, Clone)]
pub struct Symmetry {
    pub rep: PermRep,
    pub ct: CharacterTable,
    pub irreps: IrrepMatrices,
    pub sab: SymmetryAdaptedBasis,
}

impl Symmetry {
    pub fn new(wg: &WeylGroup, ws: &WeightSet) -> Result<Self> {
        let rep = build_perm_rep(wg, ws)?;
        let (irreps, ct) = irreps_and_characters(wg)?;
        let sab = serre_basis(wg, &rep, &ct, &irreps, ws)?;
        Ok(Symmetry {
            rep,
            ct,
            irreps,
            sab,
        })
    }
}

/// One representative `m_i x m_i` block per irrep (empty for `m_i = 0`).
pub fn block_project(sab: &SymmetryAdaptedBasis, x: &CMat) -> Result<Vec<CMat>> {
    let y = sab.t.adjoint() * x * &sab.t;
    let tol = 1e-9 * max_abs(x).max(1.0);
    let mut mask = DMatrix::from_element(y.nrows(), y.ncols(), false);
    let mut out = Vec::with_capacity(sab.layout.len());
    let mut worst = 0.0f64;
    for (i, b) in sab.layout.iter().enumerate() {
        let m = b.mult;
        let base = sab.offset(i);
        let first = y.view((base, base), (m, m)).clone_owned();
        for l in 0..b.dim {
            let o = base + l * m;
            for r in 0..m {
                for s in 0..m {
                    mask[(o + r, o + s)] = true;
                }
            }
            let blk = y.view((o, o), (m, m)).clone_owned();
            if m > 0 {
                worst = worst.max(max_abs(&(blk - &first)));
            }
        }
        out.push(first);
    }
    for r in 0..y.nrows() {
        for s in 0..y.ncols() {
            if !mask[(r, s)] {
                worst = worst.max(y[(r, s)].norm());
            }
        }
    }
    if worst > tol {
        return Err(Error::NotInvariant { residual: worst });
    }
    Ok(out)
}
