//! Finite subgroups of SO(4) acting on the three-sphere.
//!
//! Elements are stored as 4×4 orthogonal matrices. Equality and closure use a
//! hash of the entries rounded to a 1e-6 grid; the exact data that the torsion
//! formulas need (class sizes, element orders, rotation angles as rational
//! turns) is recovered from the floating representation by recognition.

use std::collections::{HashMap, VecDeque};
use std::f64::consts::PI;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exactmath::RationalAngle;

pub type Mat4 = [[f64; 4]; 4];

const GRID: f64 = 1e6;
const ORTHO_TOL: f64 = 1e-9;
const ANGLE_TOL: f64 = 1e-6;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GroupError {
    #[error("closure exceeded {limit} elements; generators do not match {spec}")]
    ClosureOverflow { spec: String, limit: usize },
    #[error("generated matrix is not orthogonal (deviation {0:e})")]
    NonOrthogonal(f64),
    #[error("no rational angle with denominator {order} matches cosine {cosine}")]
    AngleRecognitionFailure { order: u32, cosine: f64 },
    #[error("invalid group specification: {0}")]
    InvalidSpec(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum PolytopeSymbol {
    #[serde(rename = "{3,3,3}")]
    P333,
    #[serde(rename = "{3,3,4}")]
    P334,
    #[serde(rename = "{3,4,3}")]
    P343,
    #[serde(rename = "{3,3,5}")]
    P335,
}

impl PolytopeSymbol {
    pub const ALL: [PolytopeSymbol; 4] = [Self::P333, Self::P334, Self::P343, Self::P335];

    /// Coxeter labels of the linear diagram of the reflection group.
    pub fn branches(&self) -> [u32; 3] {
        match self {
            Self::P333 => [3, 3, 3],
            Self::P334 => [3, 3, 4],
            Self::P343 => [3, 4, 3],
            Self::P335 => [3, 3, 5],
        }
    }

    pub fn rotation_order(&self) -> usize {
        match self {
            Self::P333 => 60,
            Self::P334 => 192,
            Self::P343 => 576,
            Self::P335 => 7200,
        }
    }
}

impl fmt::Display for PolytopeSymbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [a, b, c] = self.branches();
        write!(f, "{{{a},{b},{c}}}")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind")]
pub enum GroupSpec {
    Cyclic { q: u32, nu1: u32, nu2: u32 },
    BinaryDihedral { q: u32 },
    BinaryTetrahedral,
    BinaryOctahedral,
    BinaryIcosahedral,
    PolytopeRotation { symbol: PolytopeSymbol },
}

impl GroupSpec {
    /// One-sided lens space group L(q;1,1).
    pub fn lens(q: u32) -> Self {
        GroupSpec::Cyclic { q, nu1: 1, nu2: 1 }
    }

    pub fn expected_order(&self) -> usize {
        match *self {
            GroupSpec::Cyclic { q, .. } => q as usize,
            GroupSpec::BinaryDihedral { q } => 4 * q as usize,
            GroupSpec::BinaryTetrahedral => 24,
            GroupSpec::BinaryOctahedral => 48,
            GroupSpec::BinaryIcosahedral => 120,
            GroupSpec::PolytopeRotation { symbol } => symbol.rotation_order(),
        }
    }

    /// Binary groups contain −1 and act one-sidedly.
    pub fn is_binary(&self) -> bool {
        matches!(
            self,
            GroupSpec::BinaryDihedral { .. }
                | GroupSpec::BinaryTetrahedral
                | GroupSpec::BinaryOctahedral
                | GroupSpec::BinaryIcosahedral
        )
    }

    pub fn validate(&self) -> Result<(), GroupError> {
        use num_integer::Integer;
        match *self {
            GroupSpec::Cyclic { q, nu1, nu2 } => {
                if q == 0 {
                    return Err(GroupError::InvalidSpec("cyclic order must be >= 1".into()));
                }
                if nu1.gcd(&q) != 1 || nu2.gcd(&q) != 1 {
                    return Err(GroupError::InvalidSpec(format!(
                        "rotation numbers ({nu1},{nu2}) must be coprime to {q}"
                    )));
                }
            }
            GroupSpec::BinaryDihedral { q: 0 } => {
                return Err(GroupError::InvalidSpec("dihedral index must be >= 1".into()));
            }
            _ => {}
        }
        Ok(())
    }
}

impl fmt::Display for GroupSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            // named by the inverses l_j = ν_j⁻¹ mod q
            GroupSpec::Cyclic { q, nu1, nu2 } => write!(f, "L({q};{},{})", inverse_mod(*nu1, *q), inverse_mod(*nu2, *q)),
            GroupSpec::BinaryDihedral { q } => write!(f, "D'_{q}"),
            GroupSpec::BinaryTetrahedral => write!(f, "T'"),
            GroupSpec::BinaryOctahedral => write!(f, "O'"),
            GroupSpec::BinaryIcosahedral => write!(f, "Y'"),
            GroupSpec::PolytopeRotation { symbol } => write!(f, "{symbol}"),
        }
    }
}

/// Inverse of `a` modulo `q`, or `a` itself when none exists.
pub fn inverse_mod(a: u32, q: u32) -> u32 {
    if q <= 1 {
        return a % q.max(1);
    }
    (1..q).find(|x| (*x as u64 * a as u64) % q as u64 == 1).unwrap_or(a)
}

#[derive(Debug, Clone, PartialEq)]
pub struct GroupElement {
    pub rep: Mat4,
    pub index: usize,
}

/// One conjugacy class.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ClassDatum {
    pub rep_index: usize,
    pub size: usize,
    /// Smaller of the two rotation angles (turns).
    pub alpha: RationalAngle,
    pub beta: RationalAngle,
    pub order: u32,
}

impl ClassDatum {
    /// Numerators of (α, β) over the element order.
    pub fn angle_numerators(&self) -> (i64, i64) {
        let q = self.order as i64;
        (
            self.alpha.numerator_over(q).expect("angle denominator divides order"),
            self.beta.numerator_over(q).expect("angle denominator divides order"),
        )
    }
}

#[derive(Debug, Clone)]
pub struct FiniteSymmetryGroup {
    pub spec: GroupSpec,
    pub elements: Vec<GroupElement>,
    pub classes: Vec<ClassDatum>,
    class_of: Vec<usize>,
    members: Vec<Vec<usize>>,
    element_order: Vec<u32>,
    lookup: HashMap<[i64; 16], usize>,
    generators: Vec<usize>,
}

type Key = [i64; 16];

fn key(m: &Mat4) -> Key {
    let mut k = [0i64; 16];
    for i in 0..4 {
        for j in 0..4 {
            // adding 0.0 folds -0 into +0
            k[4 * i + j] = (m[i][j] * GRID).round() as i64;
        }
    }
    k
}

pub fn identity() -> Mat4 {
    let mut m = [[0.0; 4]; 4];
    for (i, row) in m.iter_mut().enumerate() {
        row[i] = 1.0;
    }
    m
}

pub fn mat_mul(a: &Mat4, b: &Mat4) -> Mat4 {
    let mut c = [[0.0; 4]; 4];
    for i in 0..4 {
        for j in 0..4 {
            c[i][j] = (0..4).map(|k| a[i][k] * b[k][j]).sum();
        }
    }
    c
}

pub fn transpose(a: &Mat4) -> Mat4 {
    let mut t = [[0.0; 4]; 4];
    for i in 0..4 {
        for j in 0..4 {
            t[i][j] = a[j][i];
        }
    }
    t
}

pub fn trace(a: &Mat4) -> f64 {
    (0..4).map(|i| a[i][i]).sum()
}

fn orthogonality_defect(a: &Mat4) -> f64 {
    let p = mat_mul(&transpose(a), a);
    let id = identity();
    let mut worst: f64 = 0.0;
    for i in 0..4 {
        for j in 0..4 {
            worst = worst.max((p[i][j] - id[i][j]).abs());
        }
    }
    worst
}

pub fn determinant(a: &Mat4) -> f64 {
    // cofactor expansion along the first row
    let minor = |c: usize| -> f64 {
        let cols: Vec<usize> = (0..4).filter(|&j| j != c).collect();
        let m = |r: usize, k: usize| a[r][cols[k]];
        m(1, 0) * (m(2, 1) * m(3, 2) - m(2, 2) * m(3, 1)) - m(1, 1) * (m(2, 0) * m(3, 2) - m(2, 2) * m(3, 0))
            + m(1, 2) * (m(2, 0) * m(3, 1) - m(2, 1) * m(3, 0))
    };
    (0..4)
        .map(|c| if c % 2 == 0 { a[0][c] * minor(c) } else { -a[0][c] * minor(c) })
        .sum()
}

/// Matrix of left multiplication by the quaternion `a0 + a1 i + a2 j + a3 k`.
pub fn quaternion_left(a: [f64; 4]) -> Mat4 {
    let [a0, a1, a2, a3] = a;
    [
        [a0, -a1, -a2, -a3],
        [a1, a0, -a3, a2],
        [a2, a3, a0, -a1],
        [a3, -a2, a1, a0],
    ]
}

/// Quaternion whose left multiplication matrix is `m` (first column).
pub fn quaternion_of(m: &Mat4) -> [f64; 4] {
    [m[0][0], m[1][0], m[2][0], m[3][0]]
}

fn block_rotation(alpha: f64, beta: f64) -> Mat4 {
    let (sa, ca) = alpha.sin_cos();
    let (sb, cb) = beta.sin_cos();
    [
        [ca, -sa, 0.0, 0.0],
        [sa, ca, 0.0, 0.0],
        [0.0, 0.0, cb, -sb],
        [0.0, 0.0, sb, cb],
    ]
}

fn reflection(v: &[f64; 4]) -> Mat4 {
    let mut m = identity();
    for i in 0..4 {
        for j in 0..4 {
            m[i][j] -= 2.0 * v[i] * v[j];
        }
    }
    m
}

/// Unit simple roots with Gram matrix `−cos(π/m_ij)` for a linear Coxeter
/// diagram, by Cholesky factorisation.
fn simple_roots(branches: [u32; 3]) -> [[f64; 4]; 4] {
    let mut gram = [[0.0; 4]; 4];
    for (i, row) in gram.iter_mut().enumerate() {
        row[i] = 1.0;
    }
    for (i, m) in branches.iter().enumerate() {
        let c = -(PI / *m as f64).cos();
        gram[i][i + 1] = c;
        gram[i + 1][i] = c;
    }
    let mut l = [[0.0; 4]; 4];
    for i in 0..4 {
        for j in 0..=i {
            let s: f64 = (0..j).map(|k| l[i][k] * l[j][k]).sum();
            if i == j {
                l[i][i] = (gram[i][i] - s).sqrt();
            } else {
                l[i][j] = (gram[i][j] - s) / l[j][j];
            }
        }
    }
    l
}

fn generators_for(spec: &GroupSpec) -> Vec<Mat4> {
    let phi = (1.0 + 5f64.sqrt()) / 2.0;
    match *spec {
        GroupSpec::Cyclic { q, nu1, nu2 } => {
            let t = 2.0 * PI / q as f64;
            vec![block_rotation(t * nu1 as f64, t * nu2 as f64)]
        }
        GroupSpec::BinaryDihedral { q } => {
            let t = PI / q as f64;
            vec![
                quaternion_left([t.cos(), t.sin(), 0.0, 0.0]),
                quaternion_left([0.0, 0.0, 1.0, 0.0]),
            ]
        }
        GroupSpec::BinaryTetrahedral => vec![
            quaternion_left([0.5, 0.5, 0.5, 0.5]),
            quaternion_left([0.0, 1.0, 0.0, 0.0]),
        ],
        GroupSpec::BinaryOctahedral => {
            let r = std::f64::consts::FRAC_1_SQRT_2;
            vec![quaternion_left([0.5, 0.5, 0.5, 0.5]), quaternion_left([r, r, 0.0, 0.0])]
        }
        GroupSpec::BinaryIcosahedral => vec![
            quaternion_left([0.5, 0.5, 0.5, 0.5]),
            quaternion_left([phi / 2.0, 0.5 / phi, 0.5, 0.0]),
        ],
        GroupSpec::PolytopeRotation { symbol } => {
            let roots = simple_roots(symbol.branches());
            let refl: Vec<Mat4> = roots.iter().map(reflection).collect();
            (1..4).map(|j| mat_mul(&refl[0], &refl[j])).collect()
        }
    }
}

/// Element order `m` and the sorted angle numerators `(a, b)` over `m`
/// recovered from the characteristic polynomial.
fn recognize_angles(m: &Mat4, order: u32) -> Result<(RationalAngle, RationalAngle), GroupError> {
    let e1 = trace(m);
    let e2 = (e1 * e1 - trace(&mat_mul(m, m))) / 2.0;
    // roots of t² − (e1/2) t + (e2 − 2)/4 are cos α, cos β
    let b = e1 / 2.0;
    let c = (e2 - 2.0) / 4.0;
    let disc = (b * b - 4.0 * c).max(0.0).sqrt();
    let roots = [(b - disc) / 2.0, (b + disc) / 2.0];
    let mut nums = [0i64; 2];
    for (slot, cosine) in nums.iter_mut().zip(roots) {
        let found = (0..=order as i64 / 2)
            .find(|a| ((2.0 * PI * *a as f64 / order as f64).cos() - cosine).abs() < ANGLE_TOL);
        *slot = found.ok_or(GroupError::AngleRecognitionFailure { order, cosine })?;
    }
    nums.sort_unstable();
    Ok((
        RationalAngle::new(nums[0], order as i64),
        RationalAngle::new(nums[1], order as i64),
    ))
}

/// Builds the group as a concrete set of matrices with conjugacy classes.
pub fn build_group(spec: GroupSpec) -> Result<FiniteSymmetryGroup, GroupError> {
    spec.validate()?;
    let expected = spec.expected_order();
    let limit = 2 * expected;
    let gens = generators_for(&spec);

    let mut elements = vec![GroupElement { rep: identity(), index: 0 }];
    let mut lookup: HashMap<Key, usize> = HashMap::new();
    lookup.insert(key(&identity()), 0);
    let mut queue = VecDeque::from([0usize]);
    while let Some(i) = queue.pop_front() {
        for g in &gens {
            let prod = mat_mul(g, &elements[i].rep);
            let k = key(&prod);
            if lookup.contains_key(&k) {
                continue;
            }
            let defect = orthogonality_defect(&prod);
            if defect > ORTHO_TOL {
                return Err(GroupError::NonOrthogonal(defect));
            }
            let index = elements.len();
            if index >= limit {
                return Err(GroupError::ClosureOverflow {
                    spec: spec.to_string(),
                    limit,
                });
            }
            lookup.insert(k, index);
            elements.push(GroupElement { rep: prod, index });
            queue.push_back(index);
        }
    }
    if elements.len() != expected {
        return Err(GroupError::InvalidSpec(format!(
            "generators of {spec} closed on {} elements, expected {expected}",
            elements.len()
        )));
    }

    let generators: Vec<usize> = gens.iter().map(|g| lookup[&key(g)]).collect();
    let mut group = FiniteSymmetryGroup {
        spec,
        elements,
        classes: Vec::new(),
        class_of: Vec::new(),
        members: Vec::new(),
        element_order: Vec::new(),
        lookup,
        generators,
    };
    group.element_order = (0..group.order()).map(|i| group.compute_order(i)).collect();
    group.classes = conjugacy_classes_internal(&mut group)?;
    Ok(group)
}

fn conjugacy_classes_internal(g: &mut FiniteSymmetryGroup) -> Result<Vec<ClassDatum>, GroupError> {
    let n = g.order();
    let mut class_id = vec![usize::MAX; n];
    let mut orbits: Vec<Vec<usize>> = Vec::new();
    for start in 0..n {
        if class_id[start] != usize::MAX {
            continue;
        }
        let id = orbits.len();
        let mut orbit = vec![start];
        class_id[start] = id;
        let mut cursor = 0;
        while cursor < orbit.len() {
            let x = orbit[cursor];
            cursor += 1;
            for &s in &g.generators {
                let y = g.conjugate(s, x);
                if class_id[y] == usize::MAX {
                    class_id[y] = id;
                    orbit.push(y);
                }
            }
        }
        orbit.sort_unstable();
        orbits.push(orbit);
    }

    let mut data: Vec<(ClassDatum, Vec<usize>)> = Vec::with_capacity(orbits.len());
    for orbit in orbits {
        let rep = orbit[0];
        let order = g.element_order[rep];
        let (alpha, beta) = recognize_angles(&g.elements[rep].rep, order)?;
        data.push((
            ClassDatum {
                rep_index: rep,
                size: orbit.len(),
                alpha,
                beta,
                order,
            },
            orbit,
        ));
    }
    data.sort_by(|(a, _), (b, _)| {
        (a.order, a.size, a.alpha, a.beta, a.rep_index).cmp(&(b.order, b.size, b.alpha, b.beta, b.rep_index))
    });
    let mut class_of = vec![0; n];
    for (ci, (_, orbit)) in data.iter().enumerate() {
        for &x in orbit {
            class_of[x] = ci;
        }
    }
    g.class_of = class_of;
    let (classes, members): (Vec<_>, Vec<_>) = data.into_iter().unzip();
    g.members = members;
    Ok(classes)
}

impl FiniteSymmetryGroup {
    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn num_classes(&self) -> usize {
        self.classes.len()
    }

    /// Index of the product `a·b`.
    pub fn multiply(&self, a: usize, b: usize) -> usize {
        let prod = mat_mul(&self.elements[a].rep, &self.elements[b].rep);
        self.index_of(&prod).expect("group is closed under multiplication")
    }

    pub fn inverse(&self, a: usize) -> usize {
        self.index_of(&transpose(&self.elements[a].rep)).expect("group is closed under inversion")
    }

    /// `s · x · s⁻¹`.
    pub fn conjugate(&self, s: usize, x: usize) -> usize {
        let m = mat_mul(&mat_mul(&self.elements[s].rep, &self.elements[x].rep), &transpose(&self.elements[s].rep));
        self.index_of(&m).expect("group is closed under conjugation")
    }

    pub fn index_of(&self, m: &Mat4) -> Option<usize> {
        self.lookup.get(&key(m)).copied()
    }

    pub fn power(&self, a: usize, k: u64) -> usize {
        let mut acc = 0;
        let mut base = a;
        let mut e = k;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.multiply(acc, base);
            }
            base = self.multiply(base, base);
            e >>= 1;
        }
        acc
    }

    fn compute_order(&self, a: usize) -> u32 {
        let mut x = a;
        let mut m = 1;
        while x != 0 {
            x = self.multiply(x, a);
            m += 1;
        }
        m
    }

    pub fn element_order(&self, a: usize) -> u32 {
        self.element_order[a]
    }

    pub fn class_of(&self, element: usize) -> usize {
        self.class_of[element]
    }

    pub fn class_members(&self, class: usize) -> &[usize] {
        &self.members[class]
    }

    /// Class containing the `k`-th power of elements of `class`.
    pub fn power_class(&self, class: usize, k: i64) -> usize {
        let rep = self.classes[class].rep_index;
        let m = self.classes[class].order as i64;
        self.class_of(self.power(rep, k.rem_euclid(m) as u64))
    }

    pub fn inverse_class(&self, class: usize) -> usize {
        self.power_class(class, -1)
    }

    /// The central element −1 when the group contains it.
    pub fn minus_one(&self) -> Option<usize> {
        let mut m = identity();
        for (i, row) in m.iter_mut().enumerate() {
            row[i] = -1.0;
        }
        self.index_of(&m)
    }

    /// Full multiplication table; only sensible for small groups.
    pub fn cayley_table(&self) -> Vec<Vec<usize>> {
        (0..self.order())
            .map(|a| (0..self.order()).map(|b| self.multiply(a, b)).collect())
            .collect()
    }

    /// Serialisable summary: spec, order and class data.
    pub fn summary(&self) -> GroupSummary {
        GroupSummary {
            spec: self.spec,
            order: self.order(),
            classes: self
                .classes
                .iter()
                .map(|c| {
                    let (a, b) = c.angle_numerators();
                    ClassSummary {
                        size: c.size,
                        order: c.order,
                        alpha: format!("{a}/{}", c.order),
                        beta: format!("{b}/{}", c.order),
                    }
                })
                .collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassSummary {
    pub size: usize,
    pub order: u32,
    pub alpha: String,
    pub beta: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GroupSummary {
    pub spec: GroupSpec,
    pub order: usize,
    pub classes: Vec<ClassSummary>,
}

/// Conjugacy classes of a built group, ordered by element order, class size
/// and angle pair.
pub fn conjugacy_classes(g: &FiniteSymmetryGroup) -> Vec<ClassDatum> {
    g.classes.clone()
}

/// Rotation angles of a class, recomputed from its representative.
pub fn class_angles(g: &FiniteSymmetryGroup, class: usize) -> Result<(RationalAngle, RationalAngle), GroupError> {
    let c = &g.classes[class];
    recognize_angles(&g.elements[c.rep_index].rep, c.order)
}

/// Angles of an arbitrary element.
pub fn element_angles(g: &FiniteSymmetryGroup, element: usize) -> Result<(RationalAngle, RationalAngle), GroupError> {
    recognize_angles(&g.elements[element].rep, g.element_order(element))
}

/// Maximal cyclic subgroups up to conjugacy, as `(generator, order)`, largest
/// first. Every element is conjugate into one of the returned subgroups.
pub fn cyclic_subgroups(g: &FiniteSymmetryGroup) -> Vec<(usize, u32)> {
    let mut covered = vec![false; g.num_classes()];
    let mut out = Vec::new();
    let mut by_order: Vec<usize> = (0..g.num_classes()).collect();
    by_order.sort_by_key(|&c| (std::cmp::Reverse(g.classes[c].order), c));
    for c in by_order {
        if covered[c] {
            continue;
        }
        let gen = g.classes[c].rep_index;
        let m = g.classes[c].order;
        for k in 0..m {
            covered[g.class_of(g.power(gen, k as u64))] = true;
        }
        out.push((gen, m));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sizes(g: &FiniteSymmetryGroup) -> Vec<usize> {
        let mut s: Vec<usize> = g.classes.iter().map(|c| c.size).collect();
        s.sort_unstable();
        s
    }

    #[test]
    fn orders_of_all_families() {
        for (spec, n) in [
            (GroupSpec::lens(10), 10),
            (GroupSpec::BinaryDihedral { q: 3 }, 12),
            (GroupSpec::BinaryTetrahedral, 24),
            (GroupSpec::BinaryOctahedral, 48),
            (GroupSpec::BinaryIcosahedral, 120),
            (GroupSpec::PolytopeRotation { symbol: PolytopeSymbol::P333 }, 60),
            (GroupSpec::PolytopeRotation { symbol: PolytopeSymbol::P334 }, 192),
            (GroupSpec::PolytopeRotation { symbol: PolytopeSymbol::P343 }, 576),
        ] {
            let g = build_group(spec).unwrap();
            assert_eq!(g.order(), n, "{spec}");
            assert_eq!(g.classes.iter().map(|c| c.size).sum::<usize>(), n);
            assert_eq!(g.classes[0].order, 1);
            assert!(g.classes[0].alpha.is_zero() && g.classes[0].beta.is_zero());
        }
    }

    #[test]
    fn polytope_333_classes() {
        let g = build_group(GroupSpec::PolytopeRotation { symbol: PolytopeSymbol::P333 }).unwrap();
        assert_eq!(sizes(&g), vec![1, 12, 12, 15, 20]);
    }

    #[test]
    fn binary_tetrahedral_has_seven_classes() {
        let g = build_group(GroupSpec::BinaryTetrahedral).unwrap();
        // independent count: conjugation orbits from the full Cayley table
        let table = g.cayley_table();
        let n = g.order();
        let inv: Vec<usize> = (0..n).map(|a| (0..n).find(|&b| table[a][b] == 0).unwrap()).collect();
        let mut seen = vec![false; n];
        let mut count = 0;
        for x in 0..n {
            if seen[x] {
                continue;
            }
            count += 1;
            for y in 0..n {
                seen[table[table[y][x]][inv[y]]] = true;
            }
        }
        assert_eq!(count, 7);
        assert_eq!(g.num_classes(), 7);
    }

    #[test]
    fn cyclic_angles_follow_rotation_numbers() {
        let g = build_group(GroupSpec::Cyclic { q: 10, nu1: 1, nu2: 3 }).unwrap();
        assert_eq!(g.num_classes(), 10);
        let c = g.classes.iter().find(|c| c.rep_index == 1).unwrap();
        assert_eq!(c.alpha, RationalAngle::new(1, 10));
        assert_eq!(c.beta, RationalAngle::new(3, 10));
    }

    #[test]
    fn dihedral_reflections_have_quarter_turn() {
        for q in 2..=6 {
            let g = build_group(GroupSpec::BinaryDihedral { q }).unwrap();
            for c in &g.classes {
                let quat = quaternion_of(&g.elements[c.rep_index].rep);
                if quat[2].abs() + quat[3].abs() > 1e-9 {
                    assert_eq!(c.alpha, RationalAngle::new(1, 4));
                    assert_eq!(c.beta, RationalAngle::new(1, 4));
                }
                assert_eq!(c.alpha, c.beta, "one-sided action");
            }
        }
    }

    #[test]
    fn class_invariants_hold_for_every_member() {
        for spec in [
            GroupSpec::BinaryIcosahedral,
            GroupSpec::Cyclic { q: 12, nu1: 5, nu2: 7 },
            GroupSpec::PolytopeRotation { symbol: PolytopeSymbol::P334 },
        ] {
            let g = build_group(spec).unwrap();
            for (ci, c) in g.classes.iter().enumerate() {
                assert_eq!(g.order() % c.size, 0);
                for &x in g.class_members(ci) {
                    assert_eq!(element_angles(&g, x).unwrap(), (c.alpha, c.beta));
                    let tr = trace(&g.elements[x].rep);
                    let expect = 2.0 * (c.alpha.radians().cos() + c.beta.radians().cos());
                    assert!((tr - expect).abs() < 1e-9);
                    assert!((determinant(&g.elements[x].rep) - 1.0).abs() < 1e-9);
                }
            }
        }
    }

    #[test]
    fn maximal_cyclic_subgroups() {
        let y = build_group(GroupSpec::BinaryIcosahedral).unwrap();
        let mut orders: Vec<u32> = cyclic_subgroups(&y).iter().map(|s| s.1).collect();
        orders.sort_unstable();
        assert_eq!(orders, vec![4, 6, 10]);

        let q8 = build_group(GroupSpec::BinaryDihedral { q: 2 }).unwrap();
        let orders: Vec<u32> = cyclic_subgroups(&q8).iter().map(|s| s.1).collect();
        assert_eq!(orders, vec![4, 4, 4]);

        let c = build_group(GroupSpec::lens(9)).unwrap();
        assert_eq!(cyclic_subgroups(&c).len(), 1);
        assert_eq!(cyclic_subgroups(&c)[0].1, 9);
    }

    #[test]
    fn invalid_specs_are_rejected() {
        assert!(build_group(GroupSpec::Cyclic { q: 6, nu1: 2, nu2: 1 }).is_err());
        assert!(build_group(GroupSpec::BinaryDihedral { q: 0 }).is_err());
    }

    #[test]
    fn summary_uses_unreduced_angles() {
        let g = build_group(GroupSpec::lens(4)).unwrap();
        let s = g.summary();
        assert_eq!(s.order, 4);
        assert_eq!(s.classes[1].alpha, "1/2");
        assert_eq!(s.classes[3].alpha, "1/4");
    }

    #[test]
    fn lens_names_use_inverse_multipliers() {
        assert_eq!(inverse_mod(3, 10), 7);
        assert_eq!(GroupSpec::Cyclic { q: 10, nu1: 1, nu2: 3 }.to_string(), "L(10;1,7)");
        assert_eq!(GroupSpec::lens(5).to_string(), "L(5;1,1)");
    }
}
