//! Exact dense linear algebra over an [`ExactField`].
//!
//! Matrices are stored as `Vec<Vec<T>>` in row-major order. The routines are
//! small and dense: coefficient maps in this crate have at most a few hundred
//! columns.

use crate::scalar::ExactField;

/// Reduced row echelon form together with its pivot columns.
#[derive(Clone, Debug, PartialEq)]
pub struct Echelon<T> {
    pub rows: Vec<Vec<T>>,
    pub pivots: Vec<usize>,
    pub cols: usize,
}

impl<T: ExactField> Echelon<T> {
    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    /// Nullspace basis read off the echelon form: one vector per free column,
    /// with that free variable set to one.
    pub fn nullspace(&self) -> Vec<Vec<T>> {
        let mut is_pivot = vec![false; self.cols];
        for &p in &self.pivots {
            is_pivot[p] = true;
        }
        (0..self.cols)
            .filter(|&c| !is_pivot[c])
            .map(|free| {
                let mut v = vec![T::zero(); self.cols];
                v[free] = T::one();
                for (row, &p) in self.rows.iter().zip(&self.pivots) {
                    v[p] = -row[free].clone();
                }
                v
            })
            .collect()
    }
}

/// Gauss-Jordan elimination to reduced row echelon form. The pivot in each
/// column is the first nonzero entry at or below the current row.
pub fn rref<T: ExactField>(matrix: &[Vec<T>], cols: usize) -> Echelon<T> {
    let mut rows: Vec<Vec<T>> = matrix.to_vec();
    debug_assert!(rows.iter().all(|r| r.len() == cols));
    let mut pivots = Vec::new();
    let mut lead = 0;
    for col in 0..cols {
        if lead == rows.len() {
            break;
        }
        let Some(found) = (lead..rows.len()).find(|&r| !rows[r][col].is_zero()) else {
            continue;
        };
        rows.swap(lead, found);
        let inv = T::one() / rows[lead][col].clone();
        for entry in rows[lead][col..].iter_mut() {
            *entry = entry.clone() * inv.clone();
        }
        let pivot_row = rows[lead].clone();
        for (r, row) in rows.iter_mut().enumerate() {
            if r == lead || row[col].is_zero() {
                continue;
            }
            let factor = row[col].clone();
            for (entry, p) in row[col..].iter_mut().zip(&pivot_row[col..]) {
                if !p.is_zero() {
                    *entry = entry.clone() - factor.clone() * p.clone();
                }
            }
        }
        pivots.push(col);
        lead += 1;
    }
    rows.truncate(pivots.len());
    Echelon { rows, pivots, cols }
}

pub fn rank<T: ExactField>(matrix: &[Vec<T>], cols: usize) -> usize {
    rref(matrix, cols).rank()
}

pub fn nullspace<T: ExactField>(matrix: &[Vec<T>], cols: usize) -> Vec<Vec<T>> {
    rref(matrix, cols).nullspace()
}

/// Scale a vector so that its first nonzero entry equals one.
pub fn normalize_leading<T: ExactField>(v: &mut [T]) {
    if let Some(lead) = v.iter().find(|x| !x.is_zero()).cloned() {
        for x in v.iter_mut() {
            *x = x.clone() / lead.clone();
        }
    }
}

/// Solve `sum_j coeffs[j] * vectors[j] = target` exactly, if possible.
pub fn solve_in_span<T: ExactField>(vectors: &[Vec<T>], target: &[T]) -> Option<Vec<T>> {
    let len = target.len();
    let k = vectors.len();
    // augmented system: rows = coordinates, columns = vectors + rhs
    let system: Vec<Vec<T>> = (0..len)
        .map(|i| {
            let mut row: Vec<T> = vectors.iter().map(|v| v[i].clone()).collect();
            row.push(target[i].clone());
            row
        })
        .collect();
    let ech = rref(&system, k + 1);
    if ech.pivots.contains(&k) {
        return None;
    }
    let mut sol = vec![T::zero(); k];
    for (row, &p) in ech.rows.iter().zip(&ech.pivots) {
        sol[p] = row[k].clone();
    }
    Some(sol)
}

pub fn mat_vec<T: ExactField>(matrix: &[Vec<T>], v: &[T]) -> Vec<T> {
    matrix
        .iter()
        .map(|row| {
            row.iter()
                .zip(v)
                .fold(T::zero(), |acc, (a, b)| acc + a.clone() * b.clone())
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{int, ratio};
    use num_complex::Complex;
    use num_rational::BigRational;
    use num_traits::Zero;

    fn q(rows: &[&[i64]]) -> Vec<Vec<BigRational>> {
        rows.iter().map(|r| r.iter().map(|&x| int(x)).collect()).collect()
    }

    #[test]
    fn rank_and_nullspace_of_small_matrix() {
        let m = q(&[&[1, 2, 3], &[2, 4, 6], &[1, 0, 1]]);
        let ech = rref(&m, 3);
        assert_eq!(ech.rank(), 2);
        let null = ech.nullspace();
        assert_eq!(null.len(), 1);
        assert!(mat_vec(&m, &null[0]).iter().all(Zero::is_zero));
    }

    #[test]
    fn zero_matrix_has_full_nullspace() {
        let m = q(&[&[0, 0], &[0, 0]]);
        assert_eq!(nullspace(&m, 2).len(), 2);
        let empty: Vec<Vec<BigRational>> = Vec::new();
        assert_eq!(nullspace(&empty, 3).len(), 3);
    }

    #[test]
    fn solve_in_span_finds_coefficients() {
        let vs = vec![vec![int(1), int(0), int(1)], vec![int(0), int(1), int(1)]];
        let target = vec![int(2), ratio(1, 2), ratio(5, 2)];
        let sol = solve_in_span(&vs, &target).unwrap();
        assert_eq!(sol, vec![int(2), ratio(1, 2)]);
        assert!(solve_in_span(&vs, &[int(1), int(0), int(0)]).is_none());
    }

    #[test]
    fn complex_rank_detects_isotropic_vector() {
        // [[1, i], [i, -1]] has rank one over C
        let one = Complex::new(int(1), int(0));
        let i = Complex::new(int(0), int(1));
        let m = vec![vec![one.clone(), i.clone()], vec![i.clone(), -one.clone()]];
        assert_eq!(rank(&m, 2), 1);
    }
}
