//! Characters of the deck groups.
//!
//! Tables for cyclic and binary dihedral groups come from closed formulas;
//! every other table is produced by a tensor-power sieve seeded with the
//! trivial character and a faithful one.

use std::cmp::Ordering;
use std::f64::consts::PI;

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;
use num_integer::Integer;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exactmath::RationalAngle;
use crate::groups::{cyclic_subgroups, quaternion_of, trace, ClassSummary, FiniteSymmetryGroup, GroupSpec};

const ORTHO_TOL: f64 = 1e-8;
const INT_TOL: f64 = 1e-6;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CharacterError {
    #[error("character sieve stalled after {rounds} rounds with {found} of {classes} irreducibles")]
    SieveStall { rounds: usize, found: usize, classes: usize },
    #[error("class function is not a character: {0}")]
    NonCharacter(String),
    #[error("{0} is not a binary dihedral group")]
    NotDihedral(String),
    #[error("class function has {got} values, group has {expected} classes")]
    LengthMismatch { expected: usize, got: usize },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassFunction {
    pub values: Vec<Complex64>,
}

impl ClassFunction {
    pub fn new(values: Vec<Complex64>) -> Self {
        Self { values }
    }

    pub fn constant(n: usize, v: f64) -> Self {
        Self::new(vec![Complex64::new(v, 0.0); n])
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn conj(&self) -> Self {
        Self::new(self.values.iter().map(|v| v.conj()).collect())
    }

    pub fn mul(&self, other: &Self) -> Self {
        Self::new(self.values.iter().zip(&other.values).map(|(a, b)| a * b).collect())
    }

    pub fn add_scaled(&self, other: &Self, f: Complex64) -> Self {
        Self::new(self.values.iter().zip(&other.values).map(|(a, b)| a + f * b).collect())
    }

    pub fn scale(&self, f: f64) -> Self {
        Self::new(self.values.iter().map(|v| v * f).collect())
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// `χ ↦ (g ↦ χ(g^k))` using the class power map.
    pub fn adams(&self, g: &FiniteSymmetryGroup, k: i64) -> Self {
        Self::new((0..self.len()).map(|c| self.values[g.power_class(c, k)]).collect())
    }
}

/// `(1/|G|) Σ_p c_p f(p) conj(g(p))`.
pub fn inner_product(class_sizes: &[usize], order: usize, f: &ClassFunction, g: &ClassFunction) -> Complex64 {
    let s: Complex64 = class_sizes
        .iter()
        .zip(f.values.iter().zip(&g.values))
        .map(|(&c, (a, b))| c as f64 * a * b.conj())
        .sum();
    s / order as f64
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Character {
    #[serde(rename = "values")]
    pub cf: ClassFunction,
    pub dim: u32,
    pub label: String,
    #[serde(rename = "fs")]
    pub fs_indicator: i32,
}

impl Character {
    pub fn is_complex(&self) -> bool {
        self.fs_indicator == 0
    }

    /// True when every value is a rational integer.
    pub fn is_rational(&self) -> bool {
        self.cf
            .values
            .iter()
            .all(|v| v.im.abs() < INT_TOL && (v.re - v.re.round()).abs() < INT_TOL)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CharacterTable {
    pub group_order: usize,
    pub classes: Vec<ClassSummary>,
    pub irreps: Vec<Character>,
}

impl CharacterTable {
    pub fn class_sizes(&self) -> Vec<usize> {
        self.classes.iter().map(|c| c.size).collect()
    }

    pub fn inner(&self, f: &ClassFunction, g: &ClassFunction) -> Complex64 {
        inner_product(&self.class_sizes(), self.group_order, f, g)
    }

    pub fn get(&self, label: &str) -> Option<&Character> {
        self.irreps.iter().find(|c| c.label == label)
    }

    pub fn labels(&self) -> Vec<&str> {
        self.irreps.iter().map(|c| c.label.as_str()).collect()
    }

    /// Largest deviation from row and column orthogonality.
    pub fn orthogonality_defect(&self) -> f64 {
        let sizes = self.class_sizes();
        let mut worst: f64 = 0.0;
        for (i, a) in self.irreps.iter().enumerate() {
            for (j, b) in self.irreps.iter().enumerate() {
                let ip = self.inner(&a.cf, &b.cf);
                let target = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((ip - target).norm());
            }
        }
        let n = sizes.len();
        for p in 0..n {
            for q in 0..n {
                let s: Complex64 = self.irreps.iter().map(|c| c.cf.values[p] * c.cf.values[q].conj()).sum();
                let target = if p == q { self.group_order as f64 / sizes[p] as f64 } else { 0.0 };
                worst = worst.max((s - target).norm() / (self.group_order as f64 / sizes[p] as f64));
            }
        }
        worst
    }

    pub fn sum_dim_squares(&self) -> usize {
        self.irreps.iter().map(|c| (c.dim * c.dim) as usize).sum()
    }
}

/// `χ_n(θ) = sin(nθ)/sin θ` with the limits `n` at θ = 0 and `n(−1)^{n+1}` at
/// θ = π.
pub fn su2_character(n: u32, theta: RationalAngle) -> f64 {
    let t = theta.turns();
    if t == num_rational::Ratio::from_integer(0) {
        return n as f64;
    }
    if t == num_rational::Ratio::new(1, 2) {
        return if n % 2 == 1 { n as f64 } else { -(n as f64) };
    }
    let th = theta.radians();
    (n as f64 * th).sin() / th.sin()
}

fn frobenius_schur(g: &FiniteSymmetryGroup, cf: &ClassFunction) -> f64 {
    let squares = cf.adams(g, 2);
    let s: f64 = g
        .classes
        .iter()
        .zip(&squares.values)
        .map(|(c, v)| c.size as f64 * v.re)
        .sum();
    s / g.order() as f64
}

fn make_character(g: &FiniteSymmetryGroup, cf: ClassFunction, label: String) -> Result<Character, CharacterError> {
    let d = cf.values[0];
    if d.im.abs() > INT_TOL || (d.re - d.re.round()).abs() > INT_TOL || d.re < 0.5 {
        return Err(CharacterError::NonCharacter(format!("dimension {d} is not a positive integer")));
    }
    let fs = frobenius_schur(g, &cf);
    let fs_indicator = fs.round() as i32;
    if (fs - fs_indicator as f64).abs() > INT_TOL || fs_indicator.abs() > 1 {
        return Err(CharacterError::NonCharacter(format!("Frobenius-Schur indicator {fs}")));
    }
    Ok(Character {
        cf,
        dim: d.re.round() as u32,
        label,
        fs_indicator,
    })
}

fn table_from(g: &FiniteSymmetryGroup, irreps: Vec<Character>) -> CharacterTable {
    CharacterTable {
        group_order: g.order(),
        classes: g.summary().classes,
        irreps,
    }
}

/// Closed-form table of a cyclic group: `ω^r(g^p) = exp(2πi rp/q)`.
pub fn cyclic_table(g: &FiniteSymmetryGroup) -> Result<CharacterTable, CharacterError> {
    let GroupSpec::Cyclic { q, .. } = g.spec else {
        return Err(CharacterError::NonCharacter(format!("{} is not cyclic", g.spec)));
    };
    let exps = cyclic_exponents(g, q);
    let mut irreps = Vec::new();
    for r in 0..q as i64 {
        let cf = ClassFunction::new(
            exps.iter()
                .map(|&p| Complex64::from_polar(1.0, 2.0 * PI * (r * p) as f64 / q as f64))
                .collect(),
        );
        let label = if r == 0 { "1".to_string() } else { format!("w^{r}") };
        irreps.push(make_character(g, cf, label)?);
    }
    Ok(table_from(g, irreps))
}

/// Exponent `p` with `class rep = g₁^p`, where `g₁` is element 1 (the
/// generator) of a cyclic group.
pub fn cyclic_exponents(g: &FiniteSymmetryGroup, q: u32) -> Vec<i64> {
    let gen = if q > 1 { 1 } else { 0 };
    let mut exp_of = vec![0i64; g.order()];
    for p in 0..q as u64 {
        exp_of[g.power(gen, p)] = p as i64;
    }
    g.classes.iter().map(|c| exp_of[c.rep_index]).collect()
}

/// Closed-form table of the binary dihedral group `D'_q` from the
/// one-dimensional family `χ(A) = (−1)^a, χ(B) = i^b` and the two-dimensional
/// family with `Tr Aᵖ = 2cos(π(2a+b)p/q)`, `Tr AᵖB = 0`.
pub fn dihedral_table(g: &FiniteSymmetryGroup) -> Result<CharacterTable, CharacterError> {
    let GroupSpec::BinaryDihedral { q } = g.spec else {
        return Err(CharacterError::NotDihedral(g.spec.to_string()));
    };
    let q = q as i64;
    // (p, has_b) for each class representative A^p or A^p B
    let words: Vec<(i64, bool)> = g
        .classes
        .iter()
        .map(|c| {
            let a = quaternion_of(&g.elements[c.rep_index].rep);
            let step = PI / q as f64;
            if a[2].abs() + a[3].abs() < 1e-9 {
                (((a[1].atan2(a[0]) / step).round() as i64).rem_euclid(2 * q), false)
            } else {
                (((a[3].atan2(a[2]) / step).round() as i64).rem_euclid(2 * q), true)
            }
        })
        .collect();
    let one_dim: Vec<(i64, i64)> = if q % 2 == 0 {
        vec![(0, 0), (1, 0), (0, 2), (1, 2)]
    } else {
        vec![(0, 0), (0, 2), (1, 1), (1, 3)]
    };
    let mut two_dim: Vec<(i64, i64)> = Vec::new();
    if q % 2 == 0 {
        two_dim.extend((1..q / 2).map(|a| (a, 0)));
        two_dim.extend((0..q / 2).map(|a| (a, 1)));
    } else {
        two_dim.extend((1..=(q - 1) / 2).map(|a| (a, 0)));
        two_dim.extend((0..=(q - 3) / 2).map(|a| (a, 1)));
    }
    let i_pow = |b: i64| match b.rem_euclid(4) {
        0 => Complex64::new(1.0, 0.0),
        1 => Complex64::new(0.0, 1.0),
        2 => Complex64::new(-1.0, 0.0),
        _ => Complex64::new(0.0, -1.0),
    };
    let mut irreps = Vec::new();
    for (a, b) in one_dim {
        let cf = ClassFunction::new(
            words
                .iter()
                .map(|&(p, has_b)| {
                    let sign = if (a * p) % 2 == 0 { 1.0 } else { -1.0 };
                    if has_b {
                        sign * i_pow(b)
                    } else {
                        Complex64::new(sign, 0.0)
                    }
                })
                .collect(),
        );
        irreps.push(make_character(g, cf, format!("1({a},{b})"))?);
    }
    for (a, b) in two_dim {
        let cf = ClassFunction::new(
            words
                .iter()
                .map(|&(p, has_b)| {
                    if has_b {
                        Complex64::new(0.0, 0.0)
                    } else {
                        Complex64::new(2.0 * (PI * ((2 * a + b) * p) as f64 / q as f64).cos(), 0.0)
                    }
                })
                .collect(),
        );
        irreps.push(make_character(g, cf, format!("2({a},{b})"))?);
    }
    Ok(table_from(g, irreps))
}

/// The faithful character used to seed the sieve: the spin-½ restriction
/// `2cos θ` for one-sided binary groups, the natural `tr R` otherwise.
pub fn faithful_character(g: &FiniteSymmetryGroup) -> ClassFunction {
    let scale = if g.spec.is_binary() { 0.5 } else { 1.0 };
    ClassFunction::new(
        g.classes
            .iter()
            .map(|c| Complex64::new(scale * trace(&g.elements[c.rep_index].rep), 0.0))
            .collect(),
    )
}

struct Sieve<'a> {
    g: &'a FiniteSymmetryGroup,
    sizes: Vec<usize>,
    irreps: Vec<ClassFunction>,
    /// Virtual characters orthogonal to every known irreducible.
    pool: Vec<ClassFunction>,
}

impl Sieve<'_> {
    fn inner(&self, a: &ClassFunction, b: &ClassFunction) -> Complex64 {
        inner_product(&self.sizes, self.g.order(), a, b)
    }

    fn reduce(&self, cf: &ClassFunction) -> Option<ClassFunction> {
        let mut r = cf.clone();
        for chi in &self.irreps {
            let m = self.inner(&r, chi);
            if (m.re - m.re.round()).abs() > 1e-5 || m.im.abs() > 1e-5 {
                return None;
            }
            let m = m.re.round();
            if m != 0.0 {
                r = r.add_scaled(chi, Complex64::new(-m, 0.0));
            }
        }
        Some(r)
    }

    /// Reduces `cf` against the known irreducibles; a norm-one remainder is
    /// ± a new irreducible, anything larger joins the pool.
    fn offer(&mut self, cf: &ClassFunction) {
        let Some(r) = self.reduce(cf) else { return };
        let exact = self.inner(&r, &r).re;
        let n = exact.round();
        if n < 0.5 {
            return;
        }
        if n == 1.0 {
            let d = r.values[0].re.abs();
            if (exact - 1.0).abs() > 1e-8 || (d - d.round()).abs() > 1e-8 {
                return;
            }
            let sign = if r.values[0].re < 0.0 { -1.0 } else { 1.0 };
            self.irreps.push(r.scale(sign));
            return;
        }
        let neg = r.scale(-1.0);
        if !self.pool.iter().any(|p| p.max_abs_diff(&r) < 1e-6 || p.max_abs_diff(&neg) < 1e-6) {
            self.pool.push(r);
        }
    }

    /// Re-offers the pool until no new irreducible appears.
    fn settle_pool(&mut self) {
        loop {
            let old = std::mem::take(&mut self.pool);
            let known = self.irreps.len();
            for p in &old {
                self.offer(p);
            }
            if self.irreps.len() == known {
                return;
            }
        }
    }

    fn derived(&self, chi: &ClassFunction, galois: &[i64]) -> Vec<ClassFunction> {
        let mut cands = vec![chi.conj()];
        cands.extend(galois.iter().map(|&k| chi.adams(self.g, k)));
        let sq = chi.mul(chi);
        let psi2 = chi.adams(self.g, 2);
        cands.push(sq.add_scaled(&psi2, Complex64::new(1.0, 0.0)).scale(0.5));
        cands.push(sq.add_scaled(&psi2, Complex64::new(-1.0, 0.0)).scale(0.5));
        cands
    }

    fn dims_complete(&self) -> bool {
        let s: f64 = self.irreps.iter().map(|c| c.values[0].re * c.values[0].re).sum();
        (s - self.g.order() as f64).abs() < 0.5
    }
}

/// Irreducible characters as eigenvectors of the class-sum operator
/// `T φ(g) = Σ_x w(x) φ(x g)`, whose eigenvalue on `χ` is
/// `Σ_C w(C)|C|χ(C)/χ(1)`. With `w(C⁻¹) = conj w(C)` the operator is
/// self-adjoint for the class-size inner product, so a Hermitian
/// eigensolver separates the characters. Eigenvectors whose eigenvalue is
/// not isolated are dropped.
fn class_sum_eigencharacters(g: &FiniteSymmetryGroup) -> Vec<ClassFunction> {
    let n = g.num_classes();
    let order = g.order() as f64;
    let generic = |j: usize, a: f64| 1.0 + ((j as f64 + 1.0) * a).fract();
    let weight: Vec<Complex64> = (0..n)
        .map(|c| {
            let inv = g.inverse_class(c);
            let lo = c.min(inv);
            let im = match c.cmp(&inv) {
                Ordering::Less => generic(lo, 0.5698402910),
                Ordering::Greater => -generic(lo, 0.5698402910),
                Ordering::Equal => 0.0,
            };
            Complex64::new(generic(lo, 0.7548776662), im) / order
        })
        .collect();
    let mut op = DMatrix::<Complex64>::zeros(n, n);
    for k in 0..n {
        let z = g.classes[k].rep_index;
        for x in 0..g.order() {
            op[(k, g.class_of(g.multiply(x, z)))] += weight[g.class_of(x)];
        }
    }
    // orthonormal coordinates: φ_k √(|C_k|/|G|)
    let root: Vec<f64> = g.classes.iter().map(|c| (c.size as f64 / order).sqrt()).collect();
    let h = DMatrix::from_fn(n, n, |i, j| op[(i, j)] * root[i] / root[j]);
    let h = (&h + h.adjoint()) * Complex64::new(0.5, 0.0);
    let eig = SymmetricEigen::new(h.clone());
    let scale = eig.eigenvalues.iter().fold(1.0f64, |m, v| m.max(v.abs()));
    let mut out = Vec::new();
    for j in 0..n {
        let lam = eig.eigenvalues[j];
        let gap = (0..n)
            .filter(|&i| i != j)
            .map(|i| (eig.eigenvalues[i] - lam).abs())
            .fold(f64::INFINITY, f64::min);
        if gap < 1e-8 * scale {
            continue;
        }
        // polish by inverse iteration with a shift well inside the gap
        let shift = Complex64::new(lam + 1e-3 * gap, 0.0);
        let shifted = &h - DMatrix::<Complex64>::identity(n, n) * shift;
        let lu = shifted.lu();
        let mut u = eig.eigenvectors.column(j).into_owned();
        for _ in 0..2 {
            if let Some(next) = lu.solve(&u) {
                u = next.normalize();
            }
        }
        let mut values: Vec<Complex64> = (0..n).map(|k| u[k] / root[k]).collect();
        let phase = values[0].conj() / values[0].norm();
        for v in values.iter_mut() {
            *v *= phase;
        }
        out.push(ClassFunction::new(values));
    }
    out
}

/// Character table by the tensor-power sieve (closed forms for cyclic groups).
///
/// Besides the trivial and faithful characters, the sieve is seeded with the
/// characters induced from the maximal cyclic subgroups: a faithful character
/// need not separate classes (the three order-4 classes of the quaternion
/// group all have spin-½ trace 0), and induced characters always do.
/// When a round of products yields nothing new, the missing irreducibles are
/// read off the eigenvectors of a class-sum operator.
pub fn character_table(g: &FiniteSymmetryGroup) -> Result<CharacterTable, CharacterError> {
    if matches!(g.spec, GroupSpec::Cyclic { .. }) {
        return cyclic_table(g);
    }
    let n = g.num_classes();
    let mut sieve = Sieve {
        g,
        sizes: g.classes.iter().map(|c| c.size).collect(),
        irreps: vec![ClassFunction::constant(n, 1.0)],
        pool: Vec::new(),
    };
    let exponent = g.classes.iter().fold(1i64, |acc, c| acc.lcm(&(c.order as i64)));
    let galois: Vec<i64> = (2..exponent).filter(|k| k.gcd(&exponent) == 1).collect();

    let faithful = faithful_character(g);
    sieve.offer(&faithful);
    for (gen, m) in cyclic_subgroups(g) {
        for r in 0..m as i64 {
            sieve.offer(&induce(g, gen, m, r));
        }
    }
    let cap = 4 * n;
    let mut products_done = 0usize;
    let mut derived_done = 0usize;
    let mut pool_done: Vec<ClassFunction> = Vec::new();
    let mut eigen_done = false;
    let mut stall = 0;
    let mut rounds = 0;
    while !sieve.dims_complete() {
        rounds += 1;
        let before = sieve.irreps.len();

        let fresh: Vec<ClassFunction> = sieve.irreps[derived_done..].to_vec();
        derived_done = sieve.irreps.len();
        for chi in &fresh {
            for c in sieve.derived(chi, &galois) {
                sieve.offer(&c);
            }
        }
        let total = sieve.irreps.len();
        let snapshot = sieve.irreps.clone();
        'pairs: for j in products_done..total {
            for i in 0..=j {
                sieve.offer(&snapshot[i].mul(&snapshot[j]));
                if sieve.dims_complete() {
                    break 'pairs;
                }
            }
        }
        products_done = total;

        // pool members not seen before: multiply by the faithful character
        let unseen: Vec<ClassFunction> = sieve
            .pool
            .iter()
            .filter(|p| !pool_done.iter().any(|d| d.max_abs_diff(p) < 1e-6))
            .cloned()
            .collect();
        for p in &unseen {
            sieve.offer(&p.mul(&faithful));
            pool_done.push(p.clone());
        }
        sieve.settle_pool();
        if sieve.irreps.len() == before && !eigen_done {
            // products stopped splitting the pool: finish with class sums
            eigen_done = true;
            for chi in class_sum_eigencharacters(g) {
                sieve.offer(&chi);
            }
            sieve.settle_pool();
        }
        let sizes = sieve.sizes.clone();
        let order = g.order();
        sieve
            .pool
            .sort_by(|a, b| inner_product(&sizes, order, a, a).re.total_cmp(&inner_product(&sizes, order, b, b).re));
        sieve.pool.truncate(cap);

        if sieve.irreps.len() == before {
            stall += 1;
            if stall >= 10 * n {
                return Err(CharacterError::SieveStall {
                    rounds,
                    found: sieve.irreps.len(),
                    classes: n,
                });
            }
        } else {
            stall = 0;
        }
    }

    let mut chars = Vec::with_capacity(sieve.irreps.len());
    for cf in sieve.irreps {
        chars.push(make_character(g, cf, String::new())?);
    }
    label_characters(g, &mut chars);
    Ok(table_from(g, chars))
}

/// Descending comparison of class-function values, real part first.
fn compare_values(a: &ClassFunction, b: &ClassFunction) -> Ordering {
    for (x, y) in a.values.iter().zip(&b.values) {
        for (u, v) in [(x.re, y.re), (x.im, y.im)] {
            if (u - v).abs() > 1e-9 {
                return v.total_cmp(&u);
            }
        }
    }
    Ordering::Equal
}

/// Sorts irreducibles and assigns labels: the dimension, an `s` suffix for
/// spinor characters of binary groups (`χ(−1) = −dim`), and primes counting
/// position among equal base labels. Within a base label, real and
/// quaternionic characters precede complex ones, then values descend
/// lexicographically over the class list.
fn label_characters(g: &FiniteSymmetryGroup, chars: &mut [Character]) {
    let minus_one = if g.spec.is_binary() {
        g.minus_one().map(|e| g.class_of(e))
    } else {
        None
    };
    let spinor = |c: &Character| minus_one.is_some_and(|m| c.cf.values[m].re < 0.0);
    chars.sort_by(|a, b| {
        (a.dim, spinor(a), a.fs_indicator == 0)
            .cmp(&(b.dim, spinor(b), b.fs_indicator == 0))
            .then_with(|| compare_values(&a.cf, &b.cf))
    });
    let mut prev = String::new();
    let mut primes = 0;
    for c in chars.iter_mut() {
        let base = format!("{}{}", c.dim, if spinor(c) { "s" } else { "" });
        primes = if base == prev { primes + 1 } else { 0 };
        c.label = format!("{base}{}", "'".repeat(primes));
        prev = base;
    }
}

/// Table used for torsion twists: closed forms for cyclic and binary dihedral
/// groups (with their `(a,b)` labels), the sieve otherwise.
pub fn standard_table(g: &FiniteSymmetryGroup) -> Result<CharacterTable, CharacterError> {
    match g.spec {
        GroupSpec::BinaryDihedral { .. } => dihedral_table(g),
        _ => character_table(g),
    }
}

/// Character of `Ind_H^G ω^r` where `H = ⟨gen⟩` has order `m` and
/// `ω^r(gen^j) = exp(2πi rj/m)`.
pub fn induce(g: &FiniteSymmetryGroup, gen: usize, m: u32, r: i64) -> ClassFunction {
    let mut sums = vec![Complex64::new(0.0, 0.0); g.num_classes()];
    for j in 0..m as u64 {
        let c = g.class_of(g.power(gen, j));
        sums[c] += Complex64::from_polar(1.0, 2.0 * PI * (r * j as i64) as f64 / m as f64);
    }
    let n = g.order() as f64;
    ClassFunction::new(
        sums.into_iter()
            .zip(&g.classes)
            .map(|(s, c)| s * (n / (m as f64 * c.size as f64)))
            .collect(),
    )
}

/// Values of a class function on `gen^j`, `j = 0..m`.
pub fn restrict(g: &FiniteSymmetryGroup, cf: &ClassFunction, gen: usize, m: u32) -> Vec<Complex64> {
    (0..m as u64).map(|j| cf.values[g.class_of(g.power(gen, j))]).collect()
}

/// Multiplicities of the irreducibles in `cf`, in table order, zeros omitted.
pub fn decompose(cf: &ClassFunction, table: &CharacterTable) -> Result<Vec<(String, u32)>, CharacterError> {
    if cf.len() != table.classes.len() {
        return Err(CharacterError::LengthMismatch {
            expected: table.classes.len(),
            got: cf.len(),
        });
    }
    let mut out = Vec::new();
    let mut rebuilt = ClassFunction::constant(cf.len(), 0.0);
    for chi in &table.irreps {
        let m = table.inner(cf, &chi.cf);
        let k = m.re.round();
        if (m.re - k).abs() > INT_TOL || m.im.abs() > INT_TOL || k < 0.0 {
            return Err(CharacterError::NonCharacter(format!(
                "multiplicity of {} is {m}",
                chi.label
            )));
        }
        if k > 0.0 {
            out.push((chi.label.clone(), k as u32));
            rebuilt = rebuilt.add_scaled(&chi.cf, Complex64::new(k, 0.0));
        }
    }
    let scale = cf.values.iter().map(|v| v.norm()).fold(1.0, f64::max);
    if rebuilt.max_abs_diff(cf) > ORTHO_TOL * scale {
        return Err(CharacterError::NonCharacter("reconstruction mismatch".into()));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::{build_group, PolytopeSymbol};

    fn dims(t: &CharacterTable) -> Vec<u32> {
        let mut d: Vec<u32> = t.irreps.iter().map(|c| c.dim).collect();
        d.sort_unstable();
        d
    }

    #[test]
    fn su2_examples() {
        assert_eq!(su2_character(1, RationalAngle::new(3, 7)), 1.0);
        assert!(su2_character(2, RationalAngle::new(1, 8)).abs() > 1.0);
        assert!(su2_character(2, RationalAngle::new(1, 4)).abs() < 1e-15);
        let phi = (1.0 + 5f64.sqrt()) / 2.0;
        assert!((su2_character(3, RationalAngle::new(1, 10)) - phi).abs() < 1e-12);
        assert_eq!(su2_character(4, RationalAngle::zero()), 4.0);
        assert_eq!(su2_character(4, RationalAngle::new(1, 2)), -4.0);
        assert_eq!(su2_character(3, RationalAngle::new(1, 2)), 3.0);
    }

    #[test]
    fn sieve_tables_are_complete_and_orthogonal() {
        for (spec, expected) in [
            (GroupSpec::BinaryDihedral { q: 2 }, vec![1, 1, 1, 1, 2]),
            (GroupSpec::BinaryTetrahedral, vec![1, 1, 1, 2, 2, 2, 3]),
            (GroupSpec::BinaryOctahedral, vec![1, 1, 2, 2, 2, 3, 3, 4]),
            (GroupSpec::BinaryIcosahedral, vec![1, 2, 2, 3, 3, 4, 4, 5, 6]),
            (GroupSpec::PolytopeRotation { symbol: PolytopeSymbol::P333 }, vec![1, 3, 3, 4, 5]),
            (
                GroupSpec::PolytopeRotation { symbol: PolytopeSymbol::P334 },
                vec![1, 1, 2, 3, 3, 3, 3, 3, 3, 4, 4, 6, 8],
            ),
        ] {
            let g = build_group(spec).unwrap();
            let t = character_table(&g).unwrap();
            assert_eq!(dims(&t), expected, "{spec}");
            assert_eq!(t.sum_dim_squares(), g.order());
            assert!(t.orthogonality_defect() < 1e-8);
        }
    }

    #[test]
    fn class_sum_eigenvectors_agree_with_products() {
        for spec in [GroupSpec::BinaryOctahedral, GroupSpec::BinaryIcosahedral] {
            let g = build_group(spec).unwrap();
            let t = character_table(&g).unwrap();
            let eigen = class_sum_eigencharacters(&g);
            assert_eq!(eigen.len(), t.irreps.len());
            for e in &eigen {
                assert!(t.irreps.iter().any(|c| c.cf.max_abs_diff(e) < 1e-9), "{spec}");
            }
        }
    }

    #[test]
    fn icosahedral_labels() {
        let g = build_group(GroupSpec::BinaryIcosahedral).unwrap();
        let t = character_table(&g).unwrap();
        assert_eq!(t.labels(), vec!["1", "2s", "2s'", "3", "3'", "4", "4s", "5", "6s"]);
        // the unprimed spinor doublet is the defining representation
        let natural = faithful_character(&g);
        assert!(t.get("2s").unwrap().cf.max_abs_diff(&natural) < 1e-9);
        assert_eq!(t.get("2s").unwrap().fs_indicator, -1);
        assert_eq!(t.get("3").unwrap().fs_indicator, 1);
    }

    #[test]
    fn dihedral_closed_form_matches_sieve() {
        for q in 1..=8 {
            let g = build_group(GroupSpec::BinaryDihedral { q }).unwrap();
            let closed = dihedral_table(&g).unwrap();
            assert!(closed.orthogonality_defect() < 1e-8, "q={q}");
            assert_eq!(closed.sum_dim_squares(), 4 * q as usize);
            let sieve = character_table(&g).unwrap();
            for chi in &closed.irreps {
                assert!(
                    sieve.irreps.iter().any(|s| s.cf.max_abs_diff(&chi.cf) < 1e-9),
                    "q={q}: {} missing from sieve",
                    chi.label
                );
            }
        }
        let g = build_group(GroupSpec::BinaryDihedral { q: 4 }).unwrap();
        let t = dihedral_table(&g).unwrap();
        let two: Vec<&str> = t.labels().into_iter().filter(|l| l.starts_with('2')).collect();
        assert_eq!(two, vec!["2(1,0)", "2(0,1)", "2(1,1)"]);
    }

    #[test]
    fn dihedral_traces_vanish_off_the_cyclic_part() {
        for q in 2..=6 {
            let g = build_group(GroupSpec::BinaryDihedral { q }).unwrap();
            let t = dihedral_table(&g).unwrap();
            for (ci, c) in g.classes.iter().enumerate() {
                let quat = quaternion_of(&g.elements[c.rep_index].rep);
                if quat[2].abs() + quat[3].abs() > 1e-9 {
                    for chi in t.irreps.iter().filter(|c| c.dim == 2) {
                        assert!(chi.cf.values[ci].norm() < 1e-12);
                    }
                }
            }
        }
    }

    #[test]
    fn frobenius_schur_is_integral() {
        for spec in [GroupSpec::BinaryTetrahedral, GroupSpec::lens(7), GroupSpec::BinaryDihedral { q: 3 }] {
            let g = build_group(spec).unwrap();
            for chi in &standard_table(&g).unwrap().irreps {
                let fs = frobenius_schur(&g, &chi.cf);
                assert!((fs - fs.round()).abs() < 1e-6 && fs.round().abs() <= 1.0);
            }
        }
    }

    #[test]
    fn icosahedral_inductions() {
        let g = build_group(GroupSpec::BinaryIcosahedral).unwrap();
        let t = character_table(&g).unwrap();
        let subs = cyclic_subgroups(&g);
        let z10 = subs.iter().find(|s| s.1 == 10).unwrap().0;
        let z6 = subs.iter().find(|s| s.1 == 6).unwrap().0;
        let dec = |gen, m, r| {
            let mut d = decompose(&induce(&g, gen, m, r), &t).unwrap();
            d.sort();
            d
        };
        let s = |v: &[(&str, u32)]| {
            let mut v: Vec<(String, u32)> = v.iter().map(|(l, m)| (l.to_string(), *m)).collect();
            v.sort();
            v
        };
        assert_eq!(dec(z10, 10, 1), s(&[("2s", 1), ("4s", 1), ("6s", 1)]));
        assert_eq!(dec(z10, 10, 3), s(&[("2s'", 1), ("4s", 1), ("6s", 1)]));
        assert_eq!(dec(z10, 10, 5), s(&[("6s", 2)]));
        assert_eq!(dec(z10, 10, 6), s(&[("3", 1), ("4", 1), ("5", 1)]));
        assert_eq!(dec(z10, 10, 0), s(&[("1", 1), ("3", 1), ("3'", 1), ("5", 1)]));
        assert_eq!(dec(z6, 6, 1), s(&[("2s", 1), ("2s'", 1), ("4s", 1), ("6s", 2)]));
        assert_eq!(induce(&g, z10, 10, 1).values[0].re.round(), 12.0);
    }

    #[test]
    fn decompose_trivial_and_rejects_noncharacters() {
        let g = build_group(GroupSpec::BinaryTetrahedral).unwrap();
        let t = character_table(&g).unwrap();
        let one = ClassFunction::constant(g.num_classes(), 1.0);
        assert_eq!(decompose(&one, &t).unwrap(), vec![("1".to_string(), 1)]);
        let half = ClassFunction::constant(g.num_classes(), 0.5);
        assert!(matches!(decompose(&half, &t), Err(CharacterError::NonCharacter(_))));
    }

    #[test]
    fn cyclic_table_is_roots_of_unity() {
        let g = build_group(GroupSpec::lens(6)).unwrap();
        let t = character_table(&g).unwrap();
        assert_eq!(t.irreps.len(), 6);
        assert!(t.orthogonality_defect() < 1e-12);
        assert_eq!(t.irreps[1].label, "w^1");
    }
}
