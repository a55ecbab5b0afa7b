use alloc::vec::Vec;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

use super::matrix::IntMatrix;

/// Smith normal form `left * m * right = diag(d_1, ..., d_r, 0...)` with
/// `d_i | d_{i+1}` and unimodular `left`, `right`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SnfResult {
    /// `min(rows, cols)` non-negative entries; trailing zeros for rank-deficient input.
    pub diag: Vec<BigInt>,
    pub left: IntMatrix,
    pub right: IntMatrix,
}

impl SnfResult {
    /// Non-zero invariant factors.
    pub fn invariant_factors(&self) -> impl Iterator<Item = &BigInt> {
        self.diag.iter().filter(|d| !d.is_zero())
    }

    pub fn rank(&self) -> usize {
        self.invariant_factors().count()
    }

    /// Product of the non-zero invariant factors.
    pub fn product(&self) -> BigInt {
        self.invariant_factors().product()
    }
}

/// Smith normal form by integer row/column reduction with tracked transforms.
pub fn smith_normal_form(m: &IntMatrix) -> SnfResult {
    let (rows, cols) = (m.rows(), m.cols());
    let mut a = m.clone();
    let mut left = IntMatrix::identity(rows);
    let mut right = IntMatrix::identity(cols);
    let r = rows.min(cols);

    for t in 0..r {
        // Smallest non-zero entry of the trailing block becomes the pivot.
        let Some((pi, pj)) = min_nonzero(&a, t) else {
            break;
        };
        a.swap_rows(t, pi);
        left.swap_rows(t, pi);
        a.swap_cols(t, pj);
        right.swap_cols(t, pj);

        loop {
            let mut changed = false;

            for i in t + 1..rows {
                if a[(i, t)].is_zero() {
                    continue;
                }
                let q = -a[(i, t)].div_floor(&a[(t, t)]);
                a.add_row_multiple(i, t, &q);
                left.add_row_multiple(i, t, &q);
                if !a[(i, t)].is_zero() {
                    // remainder is smaller than the pivot: promote it
                    a.swap_rows(t, i);
                    left.swap_rows(t, i);
                    changed = true;
                }
            }
            for j in t + 1..cols {
                if a[(t, j)].is_zero() {
                    continue;
                }
                let q = -a[(t, j)].div_floor(&a[(t, t)]);
                a.add_col_multiple(j, t, &q);
                right.add_col_multiple(j, t, &q);
                if !a[(t, j)].is_zero() {
                    a.swap_cols(t, j);
                    right.swap_cols(t, j);
                    changed = true;
                }
            }
            if changed {
                continue;
            }

            // Row and column are clear; enforce divisibility of the remaining block.
            let pivot = a[(t, t)].clone();
            let offender = (t + 1..rows)
                .flat_map(|i| (t + 1..cols).map(move |j| (i, j)))
                .find(|&(i, j)| !a[(i, j)].is_multiple_of(&pivot));
            match offender {
                Some((i, _)) => {
                    let one = BigInt::from(1);
                    a.add_row_multiple(t, i, &one);
                    left.add_row_multiple(t, i, &one);
                }
                None => break,
            }
        }

        if a[(t, t)].is_negative() {
            a.negate_row(t);
            left.negate_row(t);
        }
    }

    let diag = (0..r).map(|i| a[(i, i)].clone()).collect();
    SnfResult { diag, left, right }
}

fn min_nonzero(a: &IntMatrix, t: usize) -> Option<(usize, usize)> {
    let mut best: Option<((usize, usize), BigInt)> = None;
    for i in t..a.rows() {
        for j in t..a.cols() {
            let v = a[(i, j)].abs();
            if v.is_zero() {
                continue;
            }
            if best.as_ref().is_none_or(|(_, b)| v < *b) {
                best = Some(((i, j), v));
            }
        }
    }
    best.map(|(idx, _)| idx)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::matrix::det_exact;
    use num_traits::One;

    fn check(m: &IntMatrix) -> SnfResult {
        let s = smith_normal_form(m);
        let prod = s.left.mul(m).unwrap().mul(&s.right).unwrap();
        assert!(prod.is_diagonal(), "left*M*right not diagonal: {prod:?}");
        for (i, d) in s.diag.iter().enumerate() {
            assert_eq!(&prod[(i, i)], d);
            assert!(!d.is_negative());
        }
        for w in s.diag.windows(2) {
            if !w[1].is_zero() {
                assert!(w[1].is_multiple_of(&w[0]), "divisibility broken: {:?}", s.diag);
            }
        }
        assert_eq!(det_exact(&s.left).unwrap().abs(), BigInt::one());
        assert_eq!(det_exact(&s.right).unwrap().abs(), BigInt::one());
        s
    }

    #[test]
    fn identity() {
        let s = check(&IntMatrix::identity(4));
        assert!(s.diag.iter().all(|d| d.is_one()));
    }

    #[test]
    fn small_example() {
        let s = check(&IntMatrix::from_rows(&[[2, 4], [6, 8]]));
        assert_eq!(s.diag, alloc::vec![BigInt::from(2), BigInt::from(4)]);
    }

    #[test]
    fn kloosterman_facet_is_unimodular() {
        // columns (0,1) and (-1,-1)
        let m = IntMatrix::from_columns(&[[0, 1], [-1, -1]]);
        let s = check(&m);
        assert_eq!(s.diag, alloc::vec![BigInt::one(), BigInt::one()]);
    }

    #[test]
    fn needs_divisibility_fix() {
        // diag(2, 3) is not in Smith form; the answer is diag(1, 6)
        let s = check(&IntMatrix::from_rows(&[[2, 0], [0, 3]]));
        assert_eq!(s.diag, alloc::vec![BigInt::one(), BigInt::from(6)]);
    }

    #[test]
    fn rectangular_and_rank_deficient() {
        let s = check(&IntMatrix::from_rows(&[[1, 0, -1], [0, 1, -1], [0, 0, 1], [0, 0, 0], [0, 0, 0]]));
        assert_eq!(s.rank(), 3);
        let s = check(&IntMatrix::from_rows(&[[2, 4, 6], [4, 8, 12]]));
        assert_eq!(s.diag, alloc::vec![BigInt::from(2), BigInt::zero()]);
    }

    #[test]
    fn zero_matrix() {
        let s = check(&IntMatrix::zeros(2, 3));
        assert!(s.diag.iter().all(|d| d.is_zero()));
    }
}
