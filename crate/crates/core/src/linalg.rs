//! Exact Gaussian elimination over ℚ.

use num_traits::Zero;
use thiserror::Error;

use crate::arith::Rational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LinalgError {
    #[error("matrix is singular")]
    Singular,
    #[error("linear system is inconsistent")]
    Inconsistent,
    #[error("dimension mismatch")]
    Dimension,
}

pub type Matrix = Vec<Vec<Rational>>;

/// Reduced row echelon form of [a | b]; returns pivot columns per row.
fn eliminate(a: &[Vec<Rational>], b: &[Rational]) -> Result<(Matrix, Vec<usize>), LinalgError> {
    if a.len() != b.len() {
        return Err(LinalgError::Dimension);
    }
    let cols = a.first().map_or(0, Vec::len);
    if a.iter().any(|r| r.len() != cols) {
        return Err(LinalgError::Dimension);
    }
    let mut m: Matrix = a.iter().zip(b).map(|(r, v)| r.iter().cloned().chain([v.clone()]).collect()).collect();
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..cols {
        let Some(p) = (row..m.len()).find(|&r| !m[r][col].is_zero()) else {
            continue;
        };
        m.swap(row, p);
        let inv = m[row][col].recip();
        for v in m[row].iter_mut() {
            *v *= &inv;
        }
        for r in 0..m.len() {
            if r != row && !m[r][col].is_zero() {
                let f = m[r][col].clone();
                for c in col..=cols {
                    let delta = &f * &m[row][c];
                    m[r][c] -= delta;
                }
            }
        }
        pivots.push(col);
        row += 1;
        if row == m.len() {
            break;
        }
    }
    Ok((m, pivots))
}

/// Solution of a possibly rectangular consistent system; free unknowns are 0.
pub fn solve_consistent(a: &[Vec<Rational>], b: &[Rational], unknowns: usize) -> Result<Vec<Rational>, LinalgError> {
    if a.is_empty() {
        return Ok(vec![Rational::zero(); unknowns]);
    }
    if a[0].len() != unknowns {
        return Err(LinalgError::Dimension);
    }
    let (m, pivots) = eliminate(a, b)?;
    let rank = pivots.len();
    if m[rank..].iter().any(|r| !r[unknowns].is_zero()) {
        return Err(LinalgError::Inconsistent);
    }
    let mut x = vec![Rational::zero(); unknowns];
    for (r, &c) in pivots.iter().enumerate() {
        x[c] = m[r][unknowns].clone();
    }
    Ok(x)
}

/// Unique solution of a square nonsingular system.
pub fn solve(a: &[Vec<Rational>], b: &[Rational]) -> Result<Vec<Rational>, LinalgError> {
    let n = a.len();
    let (m, pivots) = eliminate(a, b)?;
    if pivots.len() < n || a.iter().any(|r| r.len() != n) {
        return Err(LinalgError::Singular);
    }
    Ok(m.into_iter().map(|r| r[n].clone()).collect())
}

pub fn determinant(a: &[Vec<Rational>]) -> Rational {
    let n = a.len();
    let mut m = a.to_vec();
    let mut det: Rational = num_traits::One::one();
    for col in 0..n {
        let Some(p) = (col..n).find(|&r| !m[r][col].is_zero()) else {
            return Rational::zero();
        };
        if p != col {
            m.swap(p, col);
            det = -det;
        }
        det *= &m[col][col];
        for r in col + 1..n {
            if !m[r][col].is_zero() {
                let f = &m[r][col] / &m[col][col];
                for c in col..n {
                    let delta = &f * &m[col][c];
                    m[r][c] -= delta;
                }
            }
        }
    }
    det
}

pub fn inverse(a: &[Vec<Rational>]) -> Result<Matrix, LinalgError> {
    let n = a.len();
    let mut cols = Vec::with_capacity(n);
    for j in 0..n {
        let e: Vec<Rational> = (0..n).map(|i| if i == j { num_traits::One::one() } else { Rational::zero() }).collect();
        cols.push(solve(a, &e)?);
    }
    Ok((0..n).map(|i| (0..n).map(|j| cols[j][i].clone()).collect()).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{int, rat};

    fn m(rows: &[&[i64]]) -> Matrix {
        rows.iter().map(|r| r.iter().map(|&v| int(v)).collect()).collect()
    }

    #[test]
    fn square_solve_and_inverse() {
        let a = vec![vec![rat(6, 5), rat(8, 5)], vec![int(20), int(15)]];
        assert_eq!(determinant(&a), int(-14));
        let inv = inverse(&a).unwrap();
        assert_eq!(inv, vec![vec![rat(-15, 14), rat(4, 35)], vec![rat(10, 7), rat(-3, 35)]]);
        let x = solve(&a, &[rat(12, 25), rat(-6, 5)]).unwrap();
        assert_eq!(x, vec![rat(-114, 175), rat(138, 175)]);
    }

    #[test]
    fn singular_and_inconsistent() {
        let a = m(&[&[1, 2], &[2, 4]]);
        assert_eq!(solve(&a, &[int(1), int(2)]), Err(LinalgError::Singular));
        assert_eq!(solve_consistent(&a, &[int(1), int(3)], 2), Err(LinalgError::Inconsistent));
        assert_eq!(solve_consistent(&a, &[int(1), int(2)], 2).unwrap(), vec![int(1), int(0)]);
    }

    #[test]
    fn overdetermined_consistent() {
        let a = m(&[&[1, 0], &[0, 1], &[1, 1]]);
        assert_eq!(solve_consistent(&a, &[int(2), int(3), int(5)], 2).unwrap(), vec![int(2), int(3)]);
    }
}
