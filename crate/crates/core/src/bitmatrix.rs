//! Bit-packed matrices over GF(2): each row is a `u64`, bit `j` holding column `j`.

use alloc::vec::Vec;

use crate::field::{Field, Scalar};
use crate::matrix::Matrix;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BitMatrix {
    rows: Vec<u64>,
    cols: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BitRref {
    pub reduced: BitMatrix,
    pub rank: usize,
    pub pivots: Vec<usize>,
}

impl BitMatrix {
    pub const MAX_COLS: usize = 64;

    pub fn new(rows: Vec<u64>, cols: usize) -> BitMatrix {
        assert!(cols <= Self::MAX_COLS, "at most 64 columns");
        let mask = col_mask(cols);
        debug_assert!(rows.iter().all(|r| r & !mask == 0));
        BitMatrix { rows, cols }
    }

    pub fn zeros(rows: usize, cols: usize) -> BitMatrix {
        BitMatrix::new(alloc::vec![0; rows], cols)
    }

    pub fn identity(n: usize) -> BitMatrix {
        BitMatrix::new((0..n).map(|i| 1u64 << i).collect(), n)
    }

    /// Packs a GF(2) matrix. Panics for other fields or more than 64 columns.
    pub fn from_matrix(m: &Matrix) -> BitMatrix {
        assert_eq!(m.field(), Field::Prime(2), "bit packing needs GF(2)");
        let rows = (0..m.rows())
            .map(|i| {
                m.row(i)
                    .iter()
                    .enumerate()
                    .fold(0u64, |acc, (j, x)| if x.as_residue() == Some(1) { acc | 1 << j } else { acc })
            })
            .collect();
        BitMatrix::new(rows, m.cols())
    }

    pub fn to_matrix(&self) -> Matrix {
        let data = self
            .rows
            .iter()
            .flat_map(|&r| (0..self.cols).map(move |j| Scalar::Residue(((r >> j) & 1) as u32)))
            .collect();
        Matrix::from_data(Field::Prime(2), self.rows.len(), self.cols, data)
    }

    pub fn rows(&self) -> &[u64] {
        &self.rows
    }

    pub fn num_rows(&self) -> usize {
        self.rows.len()
    }

    pub fn num_cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> bool {
        (self.rows[i] >> j) & 1 == 1
    }

    pub fn is_zero(&self) -> bool {
        self.rows.iter().all(|&r| r == 0)
    }

    pub fn rref(&self) -> BitRref {
        let mut rows = self.rows.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            let bit = 1u64 << c;
            let Some(p) = (r..rows.len()).find(|&i| rows[i] & bit != 0) else { continue };
            rows.swap(r, p);
            let pivot_row = rows[r];
            for (i, row) in rows.iter_mut().enumerate() {
                if i != r && *row & bit != 0 {
                    *row ^= pivot_row;
                }
            }
            pivots.push(c);
            r += 1;
            if r == rows.len() {
                break;
            }
        }
        BitRref { reduced: BitMatrix { rows, cols: self.cols }, rank: r, pivots }
    }

    pub fn rank(&self) -> usize {
        self.rref().rank
    }

    /// `self * v` with `v` packed like a row.
    pub fn mul_vec(&self, v: u64) -> u64 {
        self.rows
            .iter()
            .enumerate()
            .fold(0, |acc, (i, &r)| acc | (((r & v).count_ones() as u64) & 1) << i)
    }

    pub fn mul(&self, rhs: &BitMatrix) -> BitMatrix {
        assert_eq!(self.cols, rhs.rows.len(), "shape mismatch in bit matrix product");
        let rows = self
            .rows
            .iter()
            .map(|&r| {
                let mut acc = 0u64;
                let mut bits = r;
                while bits != 0 {
                    let k = bits.trailing_zeros() as usize;
                    acc ^= rhs.rows[k];
                    bits &= bits - 1;
                }
                acc
            })
            .collect();
        BitMatrix { rows, cols: rhs.cols }
    }

    pub fn add(&self, rhs: &BitMatrix) -> BitMatrix {
        assert_eq!((self.rows.len(), self.cols), (rhs.rows.len(), rhs.cols));
        BitMatrix { rows: self.rows.iter().zip(&rhs.rows).map(|(a, b)| a ^ b).collect(), cols: self.cols }
    }
}

fn col_mask(cols: usize) -> u64 {
    if cols == 64 {
        u64::MAX
    } else {
        (1u64 << cols) - 1
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn generic(rows: usize, cols: usize, bits: &[bool]) -> Matrix {
        let data = bits.iter().map(|&b| Scalar::Residue(b as u32)).collect();
        Matrix::from_data(Field::Prime(2), rows, cols, data)
    }

    proptest! {
        #[test]
        fn rref_matches_generic(rows in 1usize..7, cols in 1usize..12, seed in any::<u64>()) {
            let bits: Vec<bool> = (0..rows * cols).map(|k| (seed.rotate_left(k as u32 * 7) ^ (k as u64 * 0x9E37)) & 3 == 1).collect();
            let m = generic(rows, cols, &bits);
            let packed = BitMatrix::from_matrix(&m);
            prop_assert_eq!(packed.to_matrix(), m.clone());
            let fast = packed.rref();
            let slow = m.rref();
            prop_assert_eq!(fast.reduced.to_matrix(), slow.reduced);
            prop_assert_eq!(fast.rank, slow.rank);
            prop_assert_eq!(fast.pivots, slow.pivots);
        }

        #[test]
        fn product_matches_generic(a in prop::collection::vec(any::<bool>(), 9), b in prop::collection::vec(any::<bool>(), 9)) {
            let (ma, mb) = (generic(3, 3, &a), generic(3, 3, &b));
            let fast = BitMatrix::from_matrix(&ma).mul(&BitMatrix::from_matrix(&mb));
            prop_assert_eq!(fast.to_matrix(), &ma * &mb);
        }
    }

    #[test]
    fn mul_vec_and_identity() {
        let m = BitMatrix::new(alloc::vec![0b011, 0b110, 0b100], 3);
        assert_eq!(m.mul_vec(0b001), 0b001);
        assert_eq!(m.mul_vec(0b010), 0b011);
        assert_eq!(BitMatrix::identity(3).mul(&m), m);
        assert_eq!(BitMatrix::zeros(2, 2).rank(), 0);
    }
}
