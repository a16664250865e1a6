//! Exact dense linear algebra over `Q`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use super::rational::Rational;
use super::vector::QVector;

/// Scales a rational row by the lcm of its denominators.
fn integer_row(row: &[Rational]) -> Vec<BigInt> {
    let lcm = row.iter().fold(BigInt::one(), |acc, q| acc.lcm(q.denom()));
    row.iter().map(|q| q.numer() * (&lcm / q.denom())).collect()
}

/// Exact rank by fraction-free (Bareiss) elimination.
///
/// Rows are first cleared of denominators; every intermediate entry is then
/// a minor of the integer matrix, so divisions are exact.
pub fn rank(rows: &[QVector]) -> usize {
    let mut m: Vec<Vec<BigInt>> = rows.iter().map(|r| integer_row(r.coords())).collect();
    bareiss_rank(&mut m)
}

fn bareiss_rank(m: &mut [Vec<BigInt>]) -> usize {
    let nrows = m.len();
    let ncols = m.first().map_or(0, Vec::len);
    let mut r = 0;
    let mut prev = BigInt::one();
    for col in 0..ncols {
        if r == nrows {
            break;
        }
        let Some(p) = (r..nrows).find(|&i| !m[i][col].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let (top, rest) = m.split_at_mut(r + 1);
        let pivot_row = &top[r];
        for row in rest.iter_mut() {
            let lead = row[col].clone();
            for j in col + 1..ncols {
                let v = &pivot_row[col] * &row[j] - &lead * &pivot_row[j];
                row[j] = v / &prev;
            }
            row[col] = BigInt::zero();
        }
        prev = m[r][col].clone();
        r += 1;
    }
    r
}

/// Reduced row echelon form of a rational matrix.
#[derive(Clone, Debug)]
pub struct Rref {
    /// Nonzero rows only, in echelon order.
    pub rows: Vec<Vec<Rational>>,
    /// `pivots[k]` is the pivot column of `rows[k]`.
    pub pivots: Vec<usize>,
    pub ncols: usize,
}

impl Rref {
    pub fn rank(&self) -> usize {
        self.pivots.len()
    }
}

/// Gauss-Jordan elimination; `ncols` fixes the width when `rows` is empty.
pub fn rref(mut rows: Vec<Vec<Rational>>, ncols: usize) -> Rref {
    let nrows = rows.len();
    let mut pivots = Vec::new();
    let mut r = 0;
    for col in 0..ncols {
        if r == nrows {
            break;
        }
        let Some(p) = (r..nrows).find(|&i| !rows[i][col].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let inv = rows[r][col].recip();
        for v in rows[r][col..].iter_mut() {
            if !v.is_zero() {
                *v *= &inv;
            }
        }
        let pivot_row = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i == r || row[col].is_zero() {
                continue;
            }
            let factor = row[col].clone();
            for (v, p) in row[col..].iter_mut().zip(&pivot_row[col..]) {
                if !p.is_zero() {
                    *v -= &factor * p;
                }
            }
        }
        pivots.push(col);
        r += 1;
    }
    rows.truncate(r);
    Rref {
        rows,
        pivots,
        ncols,
    }
}

/// Basis of `{x : M x = 0}` for the matrix with the given rows.
pub fn nullspace(rows: &[QVector], ncols: usize) -> Vec<QVector> {
    let red = rref(rows.iter().map(|r| r.coords().to_vec()).collect(), ncols);
    nullspace_of_rref(&red)
}

fn nullspace_of_rref(red: &Rref) -> Vec<QVector> {
    let mut is_pivot = vec![false; red.ncols];
    for &p in &red.pivots {
        is_pivot[p] = true;
    }
    (0..red.ncols)
        .filter(|&f| !is_pivot[f])
        .map(|f| {
            let mut v = vec![Rational::zero(); red.ncols];
            v[f] = Rational::one();
            for (row, &p) in red.rows.iter().zip(&red.pivots) {
                v[p] = -row[f].clone();
            }
            QVector::new(v)
        })
        .collect()
}

/// Solution set of `M x = rhs`: a particular solution and a nullspace basis,
/// or `None` when the system is inconsistent.
#[derive(Clone, Debug)]
pub struct AffineSolution {
    pub particular: QVector,
    pub kernel: Vec<QVector>,
}

pub fn solve_affine(rows: &[QVector], rhs: &[Rational], ncols: usize) -> Option<AffineSolution> {
    debug_assert_eq!(rows.len(), rhs.len());
    let augmented = rows
        .iter()
        .zip(rhs)
        .map(|(r, b)| {
            let mut v = r.coords().to_vec();
            v.push(b.clone());
            v
        })
        .collect();
    let red = rref(augmented, ncols + 1);
    if red.pivots.last() == Some(&ncols) {
        return None;
    }
    let mut particular = vec![Rational::zero(); ncols];
    for (row, &p) in red.rows.iter().zip(&red.pivots) {
        particular[p] = row[ncols].clone();
    }
    let coeff = Rref {
        rows: red.rows.iter().map(|r| r[..ncols].to_vec()).collect(),
        pivots: red.pivots.clone(),
        ncols,
    };
    Some(AffineSolution {
        particular: QVector::new(particular),
        kernel: nullspace_of_rref(&coeff),
    })
}

/// Unique solution of a square-or-tall consistent system with full column
/// rank, if one exists.
pub fn solve_unique(rows: &[QVector], rhs: &[Rational], ncols: usize) -> Option<QVector> {
    let sol = solve_affine(rows, rhs, ncols)?;
    sol.kernel.is_empty().then_some(sol.particular)
}

/// Linearly independent rows spanning the same row space (the RREF rows).
pub fn row_basis(rows: &[QVector], ncols: usize) -> Vec<QVector> {
    rref(rows.iter().map(|r| r.coords().to_vec()).collect(), ncols)
        .rows
        .into_iter()
        .map(QVector::new)
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{int, rat};

    fn q(rows: &[&[i64]]) -> Vec<QVector> {
        rows.iter().map(|r| QVector::from_ints(r)).collect()
    }

    #[test]
    fn rank_trivial_cases() {
        assert_eq!(rank(&q(&[&[1, 0], &[0, 1]])), 2);
        assert_eq!(rank(&q(&[&[2, 4], &[1, 2]])), 1);
        assert_eq!(rank(&q(&[&[0, 0, 0]])), 0);
        assert_eq!(rank(&[]), 0);
        // Pivot column skipped in the middle.
        assert_eq!(rank(&q(&[&[1, 2, 3], &[2, 4, 7], &[3, 6, 10]])), 2);
    }

    #[test]
    fn rank_with_fractions() {
        let rows = vec![
            QVector::new(vec![rat(1, 2), rat(1, 3)]),
            QVector::new(vec![rat(3, 2), int(1)]),
        ];
        assert_eq!(rank(&rows), 1);
    }

    #[test]
    fn nullspace_is_orthogonal_to_rows() {
        let rows = q(&[&[1, 1, 0], &[0, 1, -1]]);
        let ns = nullspace(&rows, 3);
        assert_eq!(ns.len(), 1);
        for r in &rows {
            assert!(r.dot(&ns[0]).is_zero());
        }
    }

    #[test]
    fn affine_solve() {
        let rows = q(&[&[1, 1], &[1, -1]]);
        let sol = solve_unique(&rows, &[int(2), int(0)], 2).unwrap();
        assert_eq!(sol, QVector::from_ints(&[1, 1]));
        let inconsistent = q(&[&[1, 1], &[2, 2]]);
        assert!(solve_affine(&inconsistent, &[int(1), int(3)], 2).is_none());
        let under = solve_affine(&q(&[&[1, 1]]), &[int(1)], 2).unwrap();
        assert_eq!(under.kernel.len(), 1);
    }
}
