//! Idempotent relations `Σ n_H ε_H ∼ 0`.
//!
//! A combination is killed by every rational character exactly when the
//! virtual permutation character `Σ n_H π_H` vanishes: by Frobenius
//! reciprocity `χ(ε_H) = ⟨χ, π_H⟩`, and a rational class function orthogonal
//! to every rational irreducible character is zero. Relations are therefore
//! the integer kernel of the classes × subgroups matrix `π_H(c)`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::group::{all_subgroups, conjugacy_classes, permutation_character, FiniteGroup, Subgroup};

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum RelationError {
    #[error("relation has {found} coefficients but there are {expected} subgroups")]
    LengthMismatch { expected: usize, found: usize },
    #[error("relation coefficient does not fit in 64 bits")]
    Overflow,
}

/// Integer coefficients `n_H`, aligned with the subgroup list.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct IdempotentRelation {
    pub coefficients: Vec<i64>,
}

impl IdempotentRelation {
    pub fn new(coefficients: Vec<i64>) -> Self {
        IdempotentRelation { coefficients }
    }

    pub fn zero(len: usize) -> Self {
        IdempotentRelation {
            coefficients: vec![0; len],
        }
    }

    pub fn len(&self) -> usize {
        self.coefficients.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coefficients.is_empty()
    }

    pub fn is_trivial(&self) -> bool {
        self.coefficients.iter().all(|&c| c == 0)
    }
}

/// Permutation characters of every subgroup: `matrix[c][h] = π_h(class c)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CharacterMatrix {
    pub classes: Vec<Vec<usize>>,
    pub matrix: Vec<Vec<BigInt>>,
}

impl CharacterMatrix {
    pub fn new(g: &FiniteGroup, subgroups: &[Subgroup]) -> CharacterMatrix {
        let classes = conjugacy_classes(g);
        let mut matrix = vec![Vec::with_capacity(subgroups.len()); classes.len()];
        for h in subgroups {
            let chi = permutation_character(g, &classes, h);
            for (row, v) in matrix.iter_mut().zip(chi.values) {
                debug_assert!(v.is_integer());
                row.push(v.to_integer());
            }
        }
        CharacterMatrix { classes, matrix }
    }

    pub fn columns(&self) -> usize {
        self.matrix.first().map_or(0, Vec::len)
    }

    /// `Σ n_H π_H` at each class.
    pub fn evaluate(&self, relation: &IdempotentRelation) -> Result<Vec<BigInt>, RelationError> {
        let cols = self.columns();
        if relation.len() != cols {
            return Err(RelationError::LengthMismatch {
                expected: cols,
                found: relation.len(),
            });
        }
        Ok(self
            .matrix
            .iter()
            .map(|row| {
                row.iter()
                    .zip(&relation.coefficients)
                    .map(|(a, &n)| a * BigInt::from(n))
                    .sum()
            })
            .collect())
    }

    pub fn check(&self, relation: &IdempotentRelation) -> Result<bool, RelationError> {
        Ok(self.evaluate(relation)?.iter().all(Zero::is_zero))
    }

    pub fn basis(&self) -> Result<Vec<IdempotentRelation>, RelationError> {
        integer_kernel(&self.matrix, self.columns())
            .into_iter()
            .map(|v| {
                v.iter()
                    .map(|x| x.to_i64().ok_or(RelationError::Overflow))
                    .collect::<Result<Vec<_>, _>>()
                    .map(IdempotentRelation::new)
            })
            .collect()
    }
}

/// Whether `Σ n_H ε_H ∼ 0`.
pub fn check_relation(
    g: &FiniteGroup,
    subgroups: &[Subgroup],
    relation: &IdempotentRelation,
) -> Result<bool, RelationError> {
    CharacterMatrix::new(g, subgroups).check(relation)
}

/// Basis of all relations over the given subgroup list.
pub fn relation_basis(
    g: &FiniteGroup,
    subgroups: &[Subgroup],
) -> Result<Vec<IdempotentRelation>, RelationError> {
    CharacterMatrix::new(g, subgroups).basis()
}

/// Convenience: subgroups and relation basis of `g` together.
pub fn subgroups_and_relations(
    g: &FiniteGroup,
) -> Result<(Vec<Subgroup>, Vec<IdempotentRelation>), RelationError> {
    let subs = all_subgroups(g);
    let basis = relation_basis(g, &subs)?;
    Ok((subs, basis))
}

fn row_gcd(row: &[BigInt]) -> BigInt {
    row.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x))
}

fn make_primitive(v: &mut [BigInt]) {
    let g = row_gcd(v);
    if !g.is_zero() && !g.is_one() {
        for x in v.iter_mut() {
            *x = &*x / &g;
        }
    }
    if v.iter().find(|x| !x.is_zero()).is_some_and(|x| x.is_negative()) {
        for x in v.iter_mut() {
            *x = -&*x;
        }
    }
}

/// Basis of `{v ∈ Z^cols : A v = 0}` as primitive vectors whose first
/// nonzero entry is positive, one per free column in increasing order.
///
/// Fraction-free elimination to reduced echelon form: pivots are taken in
/// the leftmost available column from the lowest-index remaining row, and
/// every row is divided by the gcd of its entries after each update.
pub fn integer_kernel(rows: &[Vec<BigInt>], cols: usize) -> Vec<Vec<BigInt>> {
    let mut m: Vec<Vec<BigInt>> = rows.to_vec();
    let mut pivots: Vec<usize> = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        let Some(i) = (r..m.len()).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, i);
        let pivot_row = m[r].clone();
        for (k, row) in m.iter_mut().enumerate() {
            if k == r || row[c].is_zero() {
                continue;
            }
            let factor = row[c].clone();
            for (x, p) in row.iter_mut().zip(&pivot_row) {
                *x = &*x * &pivot_row[c] - p * &factor;
            }
            let g = row_gcd(row);
            if !g.is_zero() && !g.is_one() {
                for x in row.iter_mut() {
                    *x = &*x / &g;
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == m.len() {
            break;
        }
    }

    let mut basis = Vec::new();
    for free in (0..cols).filter(|c| !pivots.contains(c)) {
        // v[free] = L, v[pivot_r] = -m[r][free] * L / m[r][pivot_r]
        let l = pivots
            .iter()
            .enumerate()
            .fold(BigInt::one(), |acc, (row, &pc)| acc.lcm(&m[row][pc]));
        let mut v = vec![BigInt::zero(); cols];
        v[free] = l.clone();
        for (row, &pc) in pivots.iter().enumerate() {
            v[pc] = -(&m[row][free] * &l) / &m[row][pc];
        }
        make_primitive(&mut v);
        basis.push(v);
    }
    basis
}
