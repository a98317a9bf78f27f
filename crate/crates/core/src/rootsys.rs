//! Crystallographic root systems of rank at most two and their direct sums.
//!
//! Ambient coordinates are exact rationals. Everything else (coroots, Cartan
//! matrix, Gram matrices, the full root set, highest roots) is derived from the
//! simple roots and fundamental weights, so the stored plate data and the
//! defining relations check each other.

use std::fmt;
use std::ops::{Add, Neg, Range, Sub};
use std::str::FromStr;

use num_rational::Ratio;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Exact rational scalar.
pub type Q = Ratio<i64>;

fn q(n: i64, d: i64) -> Q {
    Q::new(n, d)
}

fn dot(a: &[Q], b: &[Q]) -> Q {
    a.iter().zip(b).fold(Q::zero(), |acc, (x, y)| acc + x * y)
}

fn scale(a: &[Q], s: Q) -> Vec<Q> {
    a.iter().map(|x| x * s).collect()
}

fn axpy(y: &[Q], s: Q, x: &[Q]) -> Vec<Q> {
    y.iter().zip(x).map(|(a, b)| a + s * b).collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Family {
    A,
    B,
    C,
    G,
}

/// One irreducible summand, e.g. `G2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Component {
    pub family: Family,
    pub rank: usize,
}

impl Component {
    fn is_supported(&self) -> bool {
        matches!(
            (self.family, self.rank),
            (Family::A, 1) | (Family::A, 2) | (Family::B, 2) | (Family::C, 2) | (Family::G, 2)
        )
    }
}

impl fmt::Display for Component {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c = match self.family {
            Family::A => 'A',
            Family::B => 'B',
            Family::C => 'C',
            Family::G => 'G',
        };
        write!(f, "{}{}", c, self.rank)
    }
}

/// Type of a (possibly reducible) root system, written `A2`, `A1xA1`, ...
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RootSystemId {
    pub components: Vec<Component>,
}

impl RootSystemId {
    pub fn rank(&self) -> usize {
        self.components.iter().map(|c| c.rank).sum()
    }
}

impl FromStr for RootSystemId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut components = Vec::new();
        for part in s.trim().split(['x', 'X']) {
            let part = part.trim();
            let mut chars = part.chars();
            let family = match chars.next().map(|c| c.to_ascii_uppercase()) {
                Some('A') => Family::A,
                Some('B') => Family::B,
                Some('C') => Family::C,
                Some('G') => Family::G,
                _ => return Err(Error::UnsupportedType(s.to_string())),
            };
            let rank: usize = chars
                .as_str()
                .parse()
                .map_err(|_| Error::UnsupportedType(s.to_string()))?;
            let comp = Component { family, rank };
            if !comp.is_supported() {
                return Err(Error::UnsupportedType(comp.to_string()));
            }
            components.push(comp);
        }
        if components.is_empty() {
            return Err(Error::UnsupportedType(s.to_string()));
        }
        Ok(RootSystemId { components })
    }
}

impl fmt::Display for RootSystemId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, c) in self.components.iter().enumerate() {
            if i > 0 {
                write!(f, "x")?;
            }
            write!(f, "{c}")?;
        }
        Ok(())
    }
}

/// Integer coordinates in the basis of fundamental weights.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Weight(pub Vec<i64>);

impl Weight {
    pub fn zero(rank: usize) -> Self {
        Weight(vec![0; rank])
    }

    pub fn rank(&self) -> usize {
        self.0.len()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&c| c == 0)
    }

    pub fn coords(&self) -> &[i64] {
        &self.0
    }
}

impl Add for &Weight {
    type Output = Weight;
    fn add(self, rhs: &Weight) -> Weight {
        Weight(self.0.iter().zip(&rhs.0).map(|(a, b)| a + b).collect())
    }
}

impl Sub for &Weight {
    type Output = Weight;
    fn sub(self, rhs: &Weight) -> Weight {
        Weight(self.0.iter().zip(&rhs.0).map(|(a, b)| a - b).collect())
    }
}

impl Neg for &Weight {
    type Output = Weight;
    fn neg(self) -> Weight {
        Weight(self.0.iter().map(|a| -a).collect())
    }
}

impl From<Vec<i64>> for Weight {
    fn from(v: Vec<i64>) -> Self {
        Weight(v)
    }
}

/// A point of `V` in coroot coordinates, `u = sum_j c_j rho_j^vee`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Point(pub Vec<f64>);

impl Point {
    pub fn coords(&self) -> &[f64] {
        &self.0
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RootSystem {
    pub id: RootSystemId,
    /// Ambient dimension of the stored coordinates.
    pub ambient_dim: usize,
    pub roots: Vec<Vec<Q>>,
    pub base: Vec<Vec<Q>>,
    pub coroots: Vec<Vec<Q>>,
    pub fweights: Vec<Vec<Q>>,
    /// `cartan[i][j] = <rho_i, rho_j^vee>`.
    pub cartan: Vec<Vec<i64>>,
    /// `gram[i][j] = <varpi_i, varpi_j>`.
    pub gram: Vec<Vec<Q>>,
    /// `coroot_gram[i][j] = <rho_i^vee, rho_j^vee>`.
    pub coroot_gram: Vec<Vec<Q>>,
    /// One highest root per irreducible component.
    pub highest_roots: Vec<Vec<Q>>,
    /// Index range of the simple roots of each irreducible component.
    pub component_ranges: Vec<Range<usize>>,
}

/// Simple roots and fundamental weights as printed on the Bourbaki plates.
/// Types living in a quotient of `R^k` by the all-ones vector are flagged.
fn plate(c: Component) -> (Vec<Vec<Q>>, Vec<Vec<Q>>, bool) {
    let z = |v: &[i64]| v.iter().map(|&x| Q::from_integer(x)).collect::<Vec<_>>();
    match (c.family, c.rank) {
        (Family::A, 1) => (vec![z(&[1, -1])], vec![vec![q(1, 2), q(-1, 2)]], true),
        (Family::A, 2) => (
            vec![z(&[1, -1, 0]), z(&[0, 1, -1])],
            vec![
                vec![q(2, 3), q(-1, 3), q(-1, 3)],
                vec![q(1, 3), q(1, 3), q(-2, 3)],
            ],
            true,
        ),
        (Family::B, 2) => (
            vec![z(&[1, -1]), z(&[0, 1])],
            vec![z(&[1, 0]), vec![q(1, 2), q(1, 2)]],
            false,
        ),
        (Family::C, 2) => (
            vec![z(&[1, -1]), z(&[0, 2])],
            vec![z(&[1, 0]), z(&[1, 1])],
            false,
        ),
        (Family::G, 2) => (
            vec![z(&[1, -1, 0]), z(&[-2, 1, 1])],
            vec![z(&[0, -1, 1]), z(&[-1, -1, 2])],
            true,
        ),
        _ => unreachable!("unsupported component {c}"),
    }
}

/// Orthogonal projection onto the complement of the all-ones vector.
fn project_off_diagonal(v: &[Q]) -> Vec<Q> {
    let mean = v.iter().fold(Q::zero(), |a, x| a + x) / Q::from_integer(v.len() as i64);
    v.iter().map(|x| x - mean).collect()
}

fn coroot(r: &[Q]) -> Vec<Q> {
    scale(r, Q::from_integer(2) / dot(r, r))
}

fn reflect(v: &[Q], root: &[Q], co: &[Q]) -> Vec<Q> {
    axpy(v, -dot(v, co), root)
}

/// Solve `m x = b` over the rationals (m square and invertible).
pub(crate) fn solve_rational(m: &[Vec<Q>], b: &[Q]) -> Option<Vec<Q>> {
    let n = m.len();
    let mut a: Vec<Vec<Q>> = m
        .iter()
        .zip(b)
        .map(|(row, bi)| {
            let mut r = row.clone();
            r.push(*bi);
            r
        })
        .collect();
    for col in 0..n {
        let piv = (col..n).find(|&r| !a[r][col].is_zero())?;
        a.swap(col, piv);
        let p = a[col][col];
        for k in col..=n {
            a[col][k] /= p;
        }
        for r in 0..n {
            if r != col && !a[r][col].is_zero() {
                let f = a[r][col];
                for k in col..=n {
                    let t = a[col][k];
                    a[r][k] -= f * t;
                }
            }
        }
    }
    Some(a.into_iter().map(|r| r[n]).collect())
}

impl RootSystem {
    /// Build the root system of the given type.
    pub fn build(id: &RootSystemId) -> Result<Self> {
        let mut comps = id.components.iter();
        let first = comps
            .next()
            .ok_or_else(|| Error::UnsupportedType(String::from("empty")))?;
        let mut rs = Self::irreducible(*first)?;
        for c in comps {
            rs = rs.direct_sum(&Self::irreducible(*c)?);
        }
        Ok(rs)
    }

    pub fn parse(s: &str) -> Result<Self> {
        Self::build(&s.parse()?)
    }

    fn irreducible(c: Component) -> Result<Self> {
        if !c.is_supported() {
            return Err(Error::UnsupportedType(c.to_string()));
        }
        let (mut base, mut fweights, quotient) = plate(c);
        if quotient {
            base = base.iter().map(|v| project_off_diagonal(v)).collect();
            fweights = fweights.iter().map(|v| project_off_diagonal(v)).collect();
        }
        let n = c.rank;
        let ambient_dim = base[0].len();
        let coroots: Vec<Vec<Q>> = base.iter().map(|r| coroot(r)).collect();
        let cartan = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        let v = dot(&base[i], &coroots[j]);
                        debug_assert!(v.is_integer());
                        v.to_integer()
                    })
                    .collect()
            })
            .collect();
        let gram = (0..n)
            .map(|i| (0..n).map(|j| dot(&fweights[i], &fweights[j])).collect())
            .collect();
        let coroot_gram = (0..n)
            .map(|i| (0..n).map(|j| dot(&coroots[i], &coroots[j])).collect())
            .collect();

        // Close the base under the simple reflections.
        let mut roots: Vec<Vec<Q>> = base.clone();
        let mut frontier = base.clone();
        while !frontier.is_empty() {
            let mut next = Vec::new();
            for v in &frontier {
                for (r, co) in base.iter().zip(&coroots) {
                    let w = reflect(v, r, co);
                    if !roots.contains(&w) {
                        roots.push(w.clone());
                        next.push(w);
                    }
                }
            }
            frontier = next;
        }

        let mut rs = RootSystem {
            id: RootSystemId {
                components: vec![c],
            },
            ambient_dim,
            roots,
            base,
            coroots,
            fweights,
            cartan,
            gram,
            coroot_gram,
            highest_roots: Vec::new(),
            component_ranges: std::iter::once(0..n).collect(),
        };
        let highest = rs
            .roots
            .iter()
            .max_by_key(|r| {
                rs.base_expansion(r)
                    .iter()
                    .fold(Q::zero(), |a, x| a + x)
                    .to_integer()
            })
            .cloned()
            .expect("root system is nonempty");
        rs.highest_roots.push(highest);
        Ok(rs)
    }

    pub fn rank(&self) -> usize {
        self.base.len()
    }

    /// Orthogonal direct sum; the ambient spaces are concatenated.
    pub fn direct_sum(&self, other: &RootSystem) -> RootSystem {
        let (da, db) = (self.ambient_dim, other.ambient_dim);
        let left = |v: &Vec<Q>| {
            let mut w = v.clone();
            w.extend(std::iter::repeat_n(Q::zero(), db));
            w
        };
        let right = |v: &Vec<Q>| {
            let mut w = vec![Q::zero(); da];
            w.extend(v.iter().cloned());
            w
        };
        let na = self.rank();
        let nb = other.rank();
        let block = |a: &Vec<Vec<Q>>, b: &Vec<Vec<Q>>| -> Vec<Vec<Q>> {
            let mut out = vec![vec![Q::zero(); na + nb]; na + nb];
            for i in 0..na {
                for j in 0..na {
                    out[i][j] = a[i][j];
                }
            }
            for i in 0..nb {
                for j in 0..nb {
                    out[na + i][na + j] = b[i][j];
                }
            }
            out
        };
        let mut cartan = vec![vec![0i64; na + nb]; na + nb];
        for i in 0..na {
            for j in 0..na {
                cartan[i][j] = self.cartan[i][j];
            }
        }
        for i in 0..nb {
            for j in 0..nb {
                cartan[na + i][na + j] = other.cartan[i][j];
            }
        }
        let mut components = self.id.components.clone();
        components.extend(other.id.components.iter().cloned());
        let mut component_ranges = self.component_ranges.clone();
        component_ranges.extend(
            other
                .component_ranges
                .iter()
                .map(|r| (r.start + na)..(r.end + na)),
        );
        RootSystem {
            id: RootSystemId { components },
            ambient_dim: da + db,
            roots: self
                .roots
                .iter()
                .map(left)
                .chain(other.roots.iter().map(right))
                .collect(),
            base: self
                .base
                .iter()
                .map(left)
                .chain(other.base.iter().map(right))
                .collect(),
            coroots: self
                .coroots
                .iter()
                .map(left)
                .chain(other.coroots.iter().map(right))
                .collect(),
            fweights: self
                .fweights
                .iter()
                .map(left)
                .chain(other.fweights.iter().map(right))
                .collect(),
            cartan,
            gram: block(&self.gram, &other.gram),
            coroot_gram: block(&self.coroot_gram, &other.coroot_gram),
            highest_roots: self
                .highest_roots
                .iter()
                .map(left)
                .chain(other.highest_roots.iter().map(right))
                .collect(),
            component_ranges,
        }
    }

    /// Coefficients of an ambient vector in the base `rho_1..rho_n`.
    pub fn base_expansion(&self, v: &[Q]) -> Vec<Q> {
        let n = self.rank();
        // <v, rho_k^vee> = sum_i a_i <rho_i, rho_k^vee> = sum_i a_i cartan[i][k]
        let rhs: Vec<Q> = self.coroots.iter().map(|c| dot(v, c)).collect();
        let mt: Vec<Vec<Q>> = (0..n)
            .map(|k| (0..n).map(|i| Q::from_integer(self.cartan[i][k])).collect())
            .collect();
        solve_rational(&mt, &rhs).expect("Cartan matrix is invertible")
    }

    /// Coordinates of an ambient vector in the fundamental-weight basis.
    pub fn weight_coords(&self, v: &[Q]) -> Vec<Q> {
        self.coroots.iter().map(|c| dot(v, c)).collect()
    }

    /// Ambient vector of a weight.
    pub fn weight_ambient(&self, w: &Weight) -> Vec<Q> {
        let mut out = vec![Q::zero(); self.ambient_dim];
        for (c, fw) in w.0.iter().zip(&self.fweights) {
            out = axpy(&out, Q::from_integer(*c), fw);
        }
        out
    }

    /// `<w, u>` for a weight and a point in coroot coordinates.
    pub fn pairing(&self, w: &Weight, u: &Point) -> Result<f64> {
        let n = self.rank();
        if w.rank() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: w.rank(),
            });
        }
        if u.0.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: u.0.len(),
            });
        }
        Ok(w.0.iter().zip(&u.0).map(|(a, b)| *a as f64 * b).sum())
    }

    /// Gram matrix of the fundamental weights as floats.
    pub fn weight_gram(&self) -> Vec<Vec<f64>> {
        self.gram
            .iter()
            .map(|row| row.iter().map(|x| x.to_f64().unwrap()).collect())
            .collect()
    }

    /// Exact `w^T G w`.
    pub fn weight_norm_sq(&self, w: &Weight) -> Q {
        let mut acc = Q::zero();
        for (i, a) in w.0.iter().enumerate() {
            for (j, b) in w.0.iter().enumerate() {
                acc += self.gram[i][j] * (a * b);
            }
        }
        acc
    }

    /// Exact `c^T G' c` for a coroot-lattice vector with integer coordinates.
    pub fn coroot_norm_sq(&self, c: &[i64]) -> Q {
        let mut acc = Q::zero();
        for (i, a) in c.iter().enumerate() {
            for (j, b) in c.iter().enumerate() {
                acc += self.coroot_gram[i][j] * (a * b);
            }
        }
        acc
    }

    /// Check the defining relations; returns a description of the first violation.
    pub fn check_invariants(&self) -> std::result::Result<(), String> {
        let n = self.rank();
        for i in 0..n {
            for j in 0..n {
                let p = dot(&self.fweights[i], &self.coroots[j]);
                let want = if i == j { Q::one() } else { Q::zero() };
                if p != want {
                    return Err(format!("<varpi_{i}, rho_{j}^vee> = {p}"));
                }
                if i == j && self.cartan[i][j] != 2 {
                    return Err(format!("cartan[{i}][{i}] = {}", self.cartan[i][j]));
                }
                if i != j && self.cartan[i][j] > 0 {
                    return Err(format!("cartan[{i}][{j}] positive"));
                }
                if self.gram[i][j] != self.gram[j][i] {
                    return Err("gram not symmetric".into());
                }
            }
        }
        // Sylvester: leading principal minors positive.
        for k in 1..=n {
            let minor: Vec<Vec<Q>> = (0..k).map(|i| self.gram[i][..k].to_vec()).collect();
            if det_rational(&minor) <= Q::zero() {
                return Err(format!("gram minor {k} not positive"));
            }
        }
        for r in &self.roots {
            let a = self.base_expansion(r);
            if a.iter().any(|x| !x.is_integer()) {
                return Err(format!("root {r:?} not integral in the base"));
            }
            let nonneg = a.iter().all(|x| !x.is_negative());
            let nonpos = a.iter().all(|x| !x.is_positive());
            if !(nonneg || nonpos) {
                return Err(format!("root {r:?} has mixed signs in the base"));
            }
        }
        Ok(())
    }
}

pub(crate) fn det_rational(m: &[Vec<Q>]) -> Q {
    let n = m.len();
    let mut a = m.to_vec();
    let mut det = Q::one();
    for col in 0..n {
        let Some(piv) = (col..n).find(|&r| !a[r][col].is_zero()) else {
            return Q::zero();
        };
        if piv != col {
            a.swap(col, piv);
            det = -det;
        }
        let p = a[col][col];
        det *= p;
        for r in (col + 1)..n {
            let f = a[r][col] / p;
            for k in col..n {
                let t = a[col][k];
                a[r][k] -= f * t;
            }
        }
    }
    det
}
