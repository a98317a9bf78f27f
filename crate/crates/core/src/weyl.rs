//! Weyl groups as integer matrices acting on weight coordinates.
//!
//! `mat(g)` has the images of the fundamental weights as rows, so a weight
//! (a row vector) maps as `w -> w * mat(g)`. Composition therefore reverses:
//! `mat(g h) = mat(h) * mat(g)`.

use std::collections::{BTreeSet, HashMap, VecDeque};

use crate::error::{Error, Result};
use crate::rootsys::{Point, RootSystem, Weight};

/// Default bound on the group order.
pub const DEFAULT_GROUP_CAP: usize = 1024;

/// Square integer matrix, row-major.
pub type IMat = Vec<Vec<i64>>;

fn imat_mul(a: &IMat, b: &IMat) -> IMat {
    let n = a.len();
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| (0..n).map(|k| a[i][k] * b[k][j]).sum())
                .collect()
        })
        .collect()
}

fn identity(n: usize) -> IMat {
    (0..n)
        .map(|i| (0..n).map(|j| i64::from(i == j)).collect())
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupElement {
    pub mat: IMat,
    /// Shortlex-minimal word in the simple reflections, applied left to right
    /// as `s_{w[0]} s_{w[1]} ...`.
    pub word: Vec<usize>,
}

impl GroupElement {
    pub fn act_weight(&self, w: &Weight) -> Weight {
        let n = self.mat.len();
        Weight(
            (0..n)
                .map(|k| (0..n).map(|j| w.0[j] * self.mat[j][k]).sum())
                .collect(),
        )
    }

    /// Contragredient action on coroot coordinates, `u -> mat(g)^{-1} u`.
    pub fn act_point(&self, u: &Point) -> Point {
        let inv = integer_inverse(&self.mat);
        let n = inv.len();
        Point(
            (0..n)
                .map(|i| (0..n).map(|j| inv[i][j] as f64 * u.0[j]).sum())
                .collect(),
        )
    }
}

/// Inverse of a unimodular integer matrix (adjugate over the integers).
fn integer_inverse(m: &IMat) -> IMat {
    let n = m.len();
    // Weyl group matrices have finite order, so m^{k-1} is the inverse.
    let id = identity(n);
    let mut p = m.clone();
    let mut prev = id.clone();
    for _ in 0..64 {
        if p == id {
            return prev;
        }
        prev = p.clone();
        p = imat_mul(&p, m);
    }
    panic!("matrix is not of finite order");
}

/// Simple reflection `s_i` in the weight basis.
pub fn simple_reflection(rs: &RootSystem, i: usize) -> GroupElement {
    let n = rs.rank();
    let mut mat = identity(n);
    // rho_i has weight coordinates cartan[i][k]
    for k in 0..n {
        mat[i][k] -= rs.cartan[i][k];
    }
    GroupElement { mat, word: vec![i] }
}

#[derive(Debug, Clone)]
pub struct WeylGroup {
    pub rs: RootSystem,
    pub generators: Vec<GroupElement>,
    /// Identity first, then breadth-first by word length.
    pub elements: Vec<GroupElement>,
    /// Conjugacy classes, ordered by first appearance in `elements`.
    pub classes: Vec<Vec<usize>>,
    pub inverse: Vec<usize>,
    /// `product[a][b]` is the index of `a b` (apply `b` first).
    pub product: Vec<Vec<usize>>,
    lookup: HashMap<IMat, usize>,
}

impl WeylGroup {
    pub fn generate(rs: &RootSystem) -> Result<Self> {
        Self::generate_with_cap(rs, DEFAULT_GROUP_CAP)
    }

    pub fn generate_with_cap(rs: &RootSystem, cap: usize) -> Result<Self> {
        let n = rs.rank();
        let generators: Vec<GroupElement> = (0..n).map(|i| simple_reflection(rs, i)).collect();
        let id = GroupElement {
            mat: identity(n),
            word: Vec::new(),
        };
        let mut lookup = HashMap::new();
        lookup.insert(id.mat.clone(), 0usize);
        let mut elements = vec![id];
        let mut queue = VecDeque::from([0usize]);
        while let Some(a) = queue.pop_front() {
            for (i, s) in generators.iter().enumerate() {
                let mat = imat_mul(&s.mat, &elements[a].mat);
                if lookup.contains_key(&mat) {
                    continue;
                }
                if elements.len() >= cap {
                    return Err(Error::GroupTooLarge {
                        order: elements.len() + 1,
                        cap,
                    });
                }
                let mut word = elements[a].word.clone();
                word.push(i);
                lookup.insert(mat.clone(), elements.len());
                queue.push_back(elements.len());
                elements.push(GroupElement { mat, word });
            }
        }
        let order = elements.len();
        let product: Vec<Vec<usize>> = (0..order)
            .map(|a| {
                (0..order)
                    .map(|b| lookup[&imat_mul(&elements[b].mat, &elements[a].mat)])
                    .collect()
            })
            .collect();
        let inverse: Vec<usize> = (0..order)
            .map(|a| (0..order).find(|&b| product[a][b] == 0).expect("group"))
            .collect();
        let mut class_of = vec![usize::MAX; order];
        let mut classes: Vec<Vec<usize>> = Vec::new();
        for x in 0..order {
            if class_of[x] != usize::MAX {
                continue;
            }
            let members: BTreeSet<usize> = (0..order)
                .map(|g| product[product[g][x]][inverse[g]])
                .collect();
            for &m in &members {
                class_of[m] = classes.len();
            }
            classes.push(members.into_iter().collect());
        }
        Ok(WeylGroup {
            rs: rs.clone(),
            generators,
            elements,
            classes,
            inverse,
            product,
            lookup,
        })
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn rank(&self) -> usize {
        self.rs.rank()
    }

    pub fn index_of(&self, g: &GroupElement) -> Option<usize> {
        self.lookup.get(&g.mat).copied()
    }

    /// Index of the conjugacy class containing element `a`.
    pub fn class_of(&self, a: usize) -> usize {
        self.classes
            .iter()
            .position(|c| c.binary_search(&a).is_ok())
            .expect("classes partition the group")
    }

    pub fn act_weight(&self, a: usize, w: &Weight) -> Weight {
        self.elements[a].act_weight(w)
    }

    /// Orbit of a weight, sorted.
    pub fn orbit(&self, w: &Weight) -> Vec<Weight> {
        let set: BTreeSet<Weight> = self.elements.iter().map(|g| g.act_weight(w)).collect();
        set.into_iter().collect()
    }

    pub fn conjugacy_classes(&self) -> &[Vec<usize>] {
        &self.classes
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn group(s: &str) -> WeylGroup {
        WeylGroup::generate(&RootSystem::parse(s).unwrap()).unwrap()
    }

    #[test]
    fn a2_generators() {
        let w = group("A2");
        assert_eq!(w.generators[0].mat, vec![vec![-1, 1], vec![0, 1]]);
        assert_eq!(w.generators[1].mat, vec![vec![1, 0], vec![1, -1]]);
        let a1 = group("A1");
        assert_eq!(a1.generators[0].mat, vec![vec![-1]]);
    }

    #[test]
    fn orders() {
        for (s, n) in [
            ("A1", 2),
            ("A2", 6),
            ("B2", 8),
            ("C2", 8),
            ("G2", 12),
            ("A1xA1", 4),
            ("A2xA1", 12),
            ("G2xB2", 96),
        ] {
            assert_eq!(group(s).order(), n, "{s}");
        }
    }

    #[test]
    fn cap_is_enforced() {
        let rs = RootSystem::parse("G2").unwrap();
        assert_eq!(
            WeylGroup::generate_with_cap(&rs, 5).unwrap_err(),
            Error::GroupTooLarge { order: 6, cap: 5 }
        );
    }

    #[test]
    fn a2_words_and_classes() {
        let w = group("A2");
        let words: Vec<Vec<usize>> = w.elements.iter().map(|g| g.word.clone()).collect();
        assert_eq!(
            words,
            vec![
                vec![],
                vec![0],
                vec![1],
                vec![0, 1],
                vec![1, 0],
                vec![0, 1, 0]
            ]
        );
        let sizes: Vec<usize> = w.classes.iter().map(|c| c.len()).collect();
        assert_eq!(sizes, vec![1, 3, 2]);
        assert!(w.classes[1].contains(&1));
        assert!(w.classes[2].contains(&3));
    }

    #[test]
    fn class_counts() {
        for (s, h) in [
            ("A1", 2),
            ("A2", 3),
            ("B2", 5),
            ("C2", 5),
            ("G2", 6),
            ("A1xA1", 4),
        ] {
            assert_eq!(group(s).classes.len(), h, "{s}");
        }
    }

    #[test]
    fn a2_orbit_of_varpi1() {
        let w = group("A2");
        let orb = w.orbit(&Weight(vec![1, 0]));
        let want: BTreeSet<Weight> = [vec![1, 0], vec![-1, 1], vec![0, -1]]
            .into_iter()
            .map(Weight)
            .collect();
        assert_eq!(orb.into_iter().collect::<BTreeSet<_>>(), want);
        assert_eq!(w.orbit(&Weight::zero(2)), vec![Weight::zero(2)]);
    }

    #[test]
    fn group_axioms() {
        for s in ["A1", "A2", "B2", "C2", "G2", "A1xA1"] {
            let w = group(s);
            for g in &w.generators {
                assert_eq!(imat_mul(&g.mat, &g.mat), identity(w.rank()));
            }
            for a in 0..w.order() {
                assert_eq!(w.product[a][w.inverse[a]], 0);
                for b in 0..w.order() {
                    let ab = w.product[a][b];
                    assert_eq!(
                        w.elements[ab].mat,
                        imat_mul(&w.elements[b].mat, &w.elements[a].mat)
                    );
                }
            }
            let total: usize = w.classes.iter().map(|c| c.len()).sum();
            assert_eq!(total, w.order());
            let orb = w.orbit(&Weight(vec![1; w.rank()]));
            assert_eq!(w.order() % orb.len(), 0);
        }
    }

    proptest! {
        #[test]
        fn pairing_is_invariant(
            ty in prop::sample::select(vec!["A1", "A2", "B2", "C2", "G2", "A1xA1"]),
            gi in 0usize..1000,
            coords in prop::collection::vec(-5i64..=5, 2),
            pt in prop::collection::vec(-1.0f64..1.0, 2),
        ) {
            let w = group(ty);
            let n = w.rank();
            let g = &w.elements[gi % w.order()];
            let om = Weight(coords[..n].to_vec());
            let u = Point(pt[..n].to_vec());
            let before = w.rs.pairing(&om, &u).unwrap();
            let after = w.rs.pairing(&g.act_weight(&om), &g.act_point(&u)).unwrap();
            prop_assert!((before - after).abs() < 1e-12);
        }

        #[test]
        fn action_preserves_norm(
            ty in prop::sample::select(vec!["A2", "B2", "C2", "G2", "A1xA1"]),
            gi in 0usize..1000,
            coords in prop::collection::vec(-6i64..=6, 2),
        ) {
            let w = group(ty);
            let g = &w.elements[gi % w.order()];
            let om = Weight(coords);
            prop_assert_eq!(w.rs.weight_norm_sq(&om), w.rs.weight_norm_sq(&g.act_weight(&om)));
        }
    }
}
