//! First homology of the quotient spaces and the U(1) twistings of the
//! triangle groups.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::groups::GroupSpec;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum HomologyError {
    #[error("integer overflow during Smith normal form")]
    Overflow,
    #[error("relator has {got} entries, presentation has {expected} generators")]
    RelatorLength { expected: usize, got: usize },
    #[error("first homology is not available for {0}: the action is not free")]
    HomologyUnavailable(String),
    #[error("triangle exponents must be >= 2, got {0:?}")]
    BadTriangle([i64; 3]),
}

/// Abelianised presentation: one exponent vector per relator.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Presentation {
    pub n_generators: usize,
    pub relators: Vec<Vec<i64>>,
}

impl Presentation {
    pub fn new(n_generators: usize, relators: Vec<Vec<i64>>) -> Result<Self, HomologyError> {
        for r in &relators {
            if r.len() != n_generators {
                return Err(HomologyError::RelatorLength {
                    expected: n_generators,
                    got: r.len(),
                });
            }
        }
        Ok(Self { n_generators, relators })
    }

    /// `(A₁, A₂, A₃ : A_i^{ν_i}, A₁A₂A₃)`.
    pub fn triangle(nu: [i64; 3]) -> Self {
        let mut relators: Vec<Vec<i64>> = (0..3)
            .map(|i| {
                let mut r = vec![0; 3];
                r[i] = nu[i];
                r
            })
            .collect();
        relators.push(vec![1, 1, 1]);
        Self { n_generators: 3, relators }
    }

    /// `(A, B : A^q B^{-2}, B^2 (AB)^{-2}, B^4)` abelianised.
    pub fn binary_dihedral(q: i64) -> Self {
        Self {
            n_generators: 2,
            relators: vec![vec![q, -2], vec![2, 0], vec![0, 4]],
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AbelianStructure {
    /// Torsion invariant factors, each dividing the next, all > 1.
    pub invariant_factors: Vec<i64>,
    pub rank: usize,
}

impl AbelianStructure {
    pub fn torsion_order(&self) -> i64 {
        self.invariant_factors.iter().product()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum H1Order {
    Finite(i64),
    Infinite,
}

/// Invariant factors of the cokernel of the relator matrix (Smith normal
/// form over ℤ).
pub fn abelianize(p: &Presentation) -> Result<AbelianStructure, HomologyError> {
    let mut m: Vec<Vec<i64>> = p.relators.clone();
    let rows = m.len();
    let cols = p.n_generators;
    let mut diag = Vec::new();
    for t in 0..rows.min(cols) {
        if !move_smallest_to(&mut m, t, (t..rows).flat_map(|i| (t..cols).map(move |j| (i, j))).collect()) {
            break;
        }
        loop {
            let mut clean = true;
            for i in t + 1..rows {
                let f = m[i][t] / m[t][t];
                add_row_multiple(&mut m, i, t, -f)?;
                clean &= m[i][t] == 0;
            }
            for j in t + 1..cols {
                let f = m[t][j] / m[t][t];
                add_col_multiple(&mut m, j, t, -f)?;
                clean &= m[t][j] == 0;
            }
            if !clean {
                let line = (t..rows).map(|i| (i, t)).chain((t + 1..cols).map(|j| (t, j))).collect();
                move_smallest_to(&mut m, t, line);
                continue;
            }
            // the pivot must divide the rest of the block
            let offending = (t + 1..rows).find(|&i| (t + 1..cols).any(|j| m[i][j] % m[t][t] != 0));
            match offending {
                Some(i) => add_row_multiple(&mut m, t, i, 1)?,
                None => break,
            }
        }
        diag.push(m[t][t].abs());
    }
    let rank = cols - diag.len();
    let mut invariant_factors: Vec<i64> = diag.into_iter().filter(|&d| d > 1).collect();
    invariant_factors.sort_unstable();
    Ok(AbelianStructure { invariant_factors, rank })
}

/// Swaps the smallest nonzero entry among `cells` into position `(t, t)`.
fn move_smallest_to(m: &mut [Vec<i64>], t: usize, cells: Vec<(usize, usize)>) -> bool {
    let Some((i, j)) = cells
        .into_iter()
        .filter(|&(i, j)| m[i][j] != 0)
        .min_by_key(|&(i, j)| m[i][j].unsigned_abs())
    else {
        return false;
    };
    m.swap(t, i);
    for row in m.iter_mut() {
        row.swap(t, j);
    }
    true
}

/// `row[dst] += f · row[src]`.
fn add_row_multiple(m: &mut [Vec<i64>], dst: usize, src: usize, f: i64) -> Result<(), HomologyError> {
    if f == 0 {
        return Ok(());
    }
    for j in 0..m[dst].len() {
        let add = f.checked_mul(m[src][j]).ok_or(HomologyError::Overflow)?;
        m[dst][j] = m[dst][j].checked_add(add).ok_or(HomologyError::Overflow)?;
    }
    Ok(())
}

/// `col[dst] += f · col[src]`.
fn add_col_multiple(m: &mut [Vec<i64>], dst: usize, src: usize, f: i64) -> Result<(), HomologyError> {
    if f == 0 {
        return Ok(());
    }
    for row in m.iter_mut() {
        let add = f.checked_mul(row[src]).ok_or(HomologyError::Overflow)?;
        row[dst] = row[dst].checked_add(add).ok_or(HomologyError::Overflow)?;
    }
    Ok(())
}

/// Order of H₁(S³/Γ) for the free actions.
pub fn h1_order(spec: &GroupSpec) -> Result<H1Order, HomologyError> {
    let presentation = match *spec {
        GroupSpec::Cyclic { q, .. } => Presentation::new(1, vec![vec![q as i64]])?,
        GroupSpec::BinaryDihedral { q } => Presentation::binary_dihedral(q as i64),
        GroupSpec::BinaryTetrahedral => Presentation::triangle([2, 3, 3]),
        GroupSpec::BinaryOctahedral => Presentation::triangle([2, 3, 4]),
        GroupSpec::BinaryIcosahedral => Presentation::triangle([2, 3, 5]),
        GroupSpec::PolytopeRotation { .. } => {
            return Err(HomologyError::HomologyUnavailable(spec.to_string()));
        }
    };
    let ab = abelianize(&presentation)?;
    Ok(if ab.rank > 0 {
        H1Order::Infinite
    } else {
        H1Order::Finite(ab.torsion_order())
    })
}

/// Phase assignments `(s₁, s₂, s₃)`, `0 <= s_i < ν_i`, with `Σ s_i/ν_i`
/// integral: the trivial triple first, then lexicographic order.
pub fn enumerate_twistings(nu: [i64; 3]) -> Result<Vec<[i64; 3]>, HomologyError> {
    if nu.iter().any(|&n| n < 2) {
        return Err(HomologyError::BadTriangle(nu));
    }
    let l = nu[0] * nu[1] * nu[2];
    let mut out = Vec::new();
    for s1 in 0..nu[0] {
        for s2 in 0..nu[1] {
            for s3 in 0..nu[2] {
                let total = s1 * (l / nu[0]) + s2 * (l / nu[1]) + s3 * (l / nu[2]);
                if total % l == 0 {
                    out.push([s1, s2, s3]);
                }
            }
        }
    }
    Ok(out)
}
