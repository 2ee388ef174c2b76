//! Gaussian elimination over the rationals.

use num_traits::{One, Zero};

use crate::rational::{Rat, Vector};

/// Reduced row echelon form with zero rows removed. The result is unique for
/// a given row space, which makes it usable as a canonical basis.
pub fn rref(rows: &[Vector]) -> Vec<Vector> {
    let mut m: Vec<Vector> = rows.to_vec();
    let ncols = m.first().map_or(0, Vec::len);
    let mut pivot_row = 0;
    for col in 0..ncols {
        let Some(found) = (pivot_row..m.len()).find(|&r| !m[r][col].is_zero()) else {
            continue;
        };
        m.swap(pivot_row, found);
        let inv = m[pivot_row][col].recip();
        for x in m[pivot_row].iter_mut() {
            *x *= &inv;
        }
        let pivot = m[pivot_row].clone();
        for (r, row) in m.iter_mut().enumerate() {
            if r != pivot_row && !row[col].is_zero() {
                let f = row[col].clone();
                for (x, p) in row.iter_mut().zip(&pivot) {
                    *x -= &f * p;
                }
            }
        }
        pivot_row += 1;
        if pivot_row == m.len() {
            break;
        }
    }
    m.truncate(pivot_row);
    m
}

/// Column index of the leading one in each RREF row.
pub fn pivots(rref_rows: &[Vector]) -> Vec<usize> {
    rref_rows
        .iter()
        .map(|r| {
            r.iter()
                .position(|x| !x.is_zero())
                .expect("rref rows are nonzero")
        })
        .collect()
}

pub fn rank(rows: &[Vector]) -> usize {
    rref(rows).len()
}

/// Basis (in RREF) of `{x : <row, x> = 0 for every row}` in dimension `dim`.
pub fn null_space(rows: &[Vector], dim: usize) -> Vec<Vector> {
    let r = rref(rows);
    let piv = pivots(&r);
    let mut basis = Vec::new();
    for free in (0..dim).filter(|c| !piv.contains(c)) {
        let mut v = vec![Rat::zero(); dim];
        v[free] = Rat::one();
        for (row, &p) in r.iter().zip(&piv) {
            v[p] = -row[free].clone();
        }
        basis.push(v);
    }
    rref(&basis)
}

/// Orthogonal projection of `v` onto the orthogonal complement of the span
/// of `basis` (any basis, not necessarily orthogonal).
pub fn project_out(v: &[Rat], basis: &[Vector]) -> Vector {
    if basis.is_empty() {
        return v.to_vec();
    }
    // Solve the normal equations G c = B v, then v - B^T c.
    let k = basis.len();
    let mut aug: Vec<Vector> = (0..k)
        .map(|i| {
            let mut row: Vector = (0..k)
                .map(|j| crate::rational::dot(&basis[i], &basis[j]))
                .collect();
            row.push(crate::rational::dot(&basis[i], v));
            row
        })
        .collect();
    aug = rref(&aug);
    let mut out = v.to_vec();
    for (i, row) in aug.iter().enumerate() {
        let c = &row[k];
        for (x, b) in out.iter_mut().zip(&basis[i]) {
            *x -= c * b;
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{dot, int, ivec};

    #[test]
    fn rref_is_canonical() {
        let a = rref(&[ivec(&[2, 4, 0]), ivec(&[1, 1, 1])]);
        let b = rref(&[ivec(&[3, 3, 3]), ivec(&[1, 3, -1]), ivec(&[0, 2, -2])]);
        assert_eq!(a, b);
        assert_eq!(rank(&[ivec(&[1, 2]), ivec(&[2, 4])]), 1);
    }

    #[test]
    fn null_space_is_orthogonal() {
        let rows = [ivec(&[1, 1, 0]), ivec(&[0, 1, 1])];
        let ns = null_space(&rows, 3);
        assert_eq!(ns.len(), 1);
        for r in &rows {
            assert_eq!(dot(r, &ns[0]), int(0));
        }
    }

    #[test]
    fn projection_removes_component() {
        let basis = [ivec(&[1, 1])];
        let p = project_out(&ivec(&[3, 1]), &basis);
        assert_eq!(p, ivec(&[1, -1]));
        assert_eq!(dot(&p, &basis[0]), int(0));
    }
}
