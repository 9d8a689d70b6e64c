//! Small dense exact linear algebra over any [`Scalar`].

use crate::scalar::Scalar;

pub type Matrix<S> = Vec<Vec<S>>;

/// Reduced row echelon form in place; returns the pivot columns.
pub fn row_reduce<S: Scalar>(m: &mut Matrix<S>) -> Vec<usize> {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let inv = m[r][c].checked_inv().expect("nonzero pivot");
        for k in c..cols {
            m[r][k] = m[r][k].clone() * inv.clone();
        }
        for i in 0..rows {
            if i == r || m[i][c].is_zero() {
                continue;
            }
            let factor = m[i][c].clone();
            for k in c..cols {
                let v = m[r][k].clone() * factor.clone();
                m[i][k] = m[i][k].clone() - v;
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub fn rank<S: Scalar>(m: &Matrix<S>) -> usize {
    let mut m = m.clone();
    row_reduce(&mut m).len()
}

pub fn determinant<S: Scalar>(m: &Matrix<S>) -> S {
    crate::mpoly::determinant(m.clone())
}

pub fn inverse<S: Scalar>(m: &Matrix<S>) -> Option<Matrix<S>> {
    let n = m.len();
    let mut aug: Matrix<S> = m
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| if i == j { S::one() } else { S::zero() }));
            r
        })
        .collect();
    let pivots = row_reduce(&mut aug);
    if pivots.len() < n || pivots[n - 1] >= n {
        return None;
    }
    Some(aug.into_iter().map(|r| r[n..].to_vec()).collect())
}

/// Outcome of solving `A x = b` exactly.
#[derive(Clone, Debug, PartialEq)]
pub enum Solution<S> {
    /// Unique solution.
    Unique(Vec<S>),
    /// Consistent with a solution space of the given dimension; `particular`
    /// sets every free variable to zero.
    Underdetermined {
        particular: Vec<S>,
        free_dimension: usize,
    },
    Inconsistent {
        rank: usize,
        augmented_rank: usize,
    },
}

pub fn solve<S: Scalar>(a: &Matrix<S>, b: &[S]) -> Solution<S> {
    let n = a.first().map_or(0, Vec::len);
    let mut aug: Matrix<S> = a
        .iter()
        .zip(b)
        .map(|(row, rhs)| {
            let mut r = row.clone();
            r.push(rhs.clone());
            r
        })
        .collect();
    let pivots = row_reduce(&mut aug);
    if pivots.last() == Some(&n) {
        return Solution::Inconsistent {
            rank: pivots.len() - 1,
            augmented_rank: pivots.len(),
        };
    }
    let mut x = vec![S::zero(); n];
    for (row, &c) in pivots.iter().enumerate() {
        x[c] = aug[row][n].clone();
    }
    if pivots.len() == n {
        Solution::Unique(x)
    } else {
        Solution::Underdetermined {
            particular: x,
            free_dimension: n - pivots.len(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::{rat_int, Rational};

    fn m(rows: &[&[i64]]) -> Matrix<Rational> {
        rows.iter()
            .map(|r| r.iter().map(|&x| rat_int(x)).collect())
            .collect()
    }

    #[test]
    fn rank_and_inverse() {
        let a = m(&[&[1, 2], &[2, 4]]);
        assert_eq!(rank(&a), 1);
        assert!(inverse(&a).is_none());
        let b = m(&[&[2, 1], &[1, 1]]);
        assert_eq!(inverse(&b).unwrap(), m(&[&[1, -1], &[-1, 2]]));
        assert_eq!(determinant(&b), rat_int(1));
    }

    #[test]
    fn solve_cases() {
        let a = m(&[&[1, 0], &[0, 2], &[1, 1]]);
        let b = [rat_int(1), rat_int(4), rat_int(3)];
        assert_eq!(
            solve(&a, &b),
            Solution::Unique(vec![rat_int(1), rat_int(2)])
        );
        let b = [rat_int(1), rat_int(4), rat_int(0)];
        assert!(matches!(
            solve(&a, &b),
            Solution::Inconsistent {
                rank: 2,
                augmented_rank: 3
            }
        ));
        let a = m(&[&[1, 1]]);
        assert!(matches!(
            solve(&a, &[rat_int(2)]),
            Solution::Underdetermined {
                free_dimension: 1,
                ..
            }
        ));
    }
}
