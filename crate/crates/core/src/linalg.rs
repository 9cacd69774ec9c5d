//! Exact Gaussian elimination over the rationals: rank, nullspace, and
//! membership of a vector in a column span. Dense matrices, desk scale.

use crate::scalar::Scalar;

#[derive(Clone, Debug)]
pub struct Matrix {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<Vec<Scalar>>,
}

impl Matrix {
    pub fn zero(rows: usize, cols: usize) -> Matrix {
        Matrix { rows, cols, data: vec![vec![Scalar::zero(); cols]; rows] }
    }

    pub fn from_rows(data: Vec<Vec<Scalar>>) -> Matrix {
        let rows = data.len();
        let cols = data.first().map(|r| r.len()).unwrap_or(0);
        for r in &data {
            assert_eq!(r.len(), cols, "ragged matrix");
        }
        Matrix { rows, cols, data }
    }

    /// Row echelon form in place; returns the pivot columns.
    fn echelon(&mut self) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..self.cols {
            if row == self.rows {
                break;
            }
            let Some(p) = (row..self.rows).find(|&r| !self.data[r][col].is_zero()) else {
                continue;
            };
            self.data.swap(row, p);
            let inv = self.data[row][col].recip();
            for c in col..self.cols {
                self.data[row][c] = &self.data[row][c] * &inv;
            }
            for r in 0..self.rows {
                if r != row && !self.data[r][col].is_zero() {
                    let factor = self.data[r][col].clone();
                    for c in col..self.cols {
                        let t = &self.data[row][c] * &factor;
                        self.data[r][c] = &self.data[r][c] - &t;
                    }
                }
            }
            pivots.push(col);
            row += 1;
        }
        pivots
    }

    pub fn rank(&self) -> usize {
        let mut m = self.clone();
        m.echelon().len()
    }

    /// A basis of the right nullspace {x : Ax = 0}.
    pub fn nullspace_basis(&self) -> Vec<Vec<Scalar>> {
        let mut m = self.clone();
        let pivots = m.echelon();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        let mut basis = Vec::new();
        for &fc in &free {
            let mut v = vec![Scalar::zero(); self.cols];
            v[fc] = Scalar::one();
            for (r, &pc) in pivots.iter().enumerate() {
                v[pc] = -&m.data[r][fc];
            }
            basis.push(v);
        }
        basis
    }

    /// Does `b` lie in the column span of the matrix?
    pub fn in_column_span(&self, b: &[Scalar]) -> bool {
        assert_eq!(b.len(), self.rows);
        let mut aug = Matrix::zero(self.rows, self.cols + 1);
        for r in 0..self.rows {
            for c in 0..self.cols {
                aug.data[r][c] = self.data[r][c].clone();
            }
            aug.data[r][self.cols] = b[r].clone();
        }
        self.rank() == aug.rank()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(n: i64) -> Scalar {
        Scalar::from_int(n)
    }

    #[test]
    fn rank_and_nullspace() {
        let m = Matrix::from_rows(vec![
            vec![s(1), s(2), s(3)],
            vec![s(2), s(4), s(6)],
            vec![s(0), s(1), s(1)],
        ]);
        assert_eq!(m.rank(), 2);
        let ns = m.nullspace_basis();
        assert_eq!(ns.len(), 1);
        for row in &m.data {
            let dot = row
                .iter()
                .zip(&ns[0])
                .fold(Scalar::zero(), |acc, (a, b)| &acc + &(a * b));
            assert!(dot.is_zero());
        }
    }

    #[test]
    fn column_span_membership() {
        let m = Matrix::from_rows(vec![vec![s(1), s(0)], vec![s(0), s(1)], vec![s(1), s(1)]]);
        assert!(m.in_column_span(&[s(2), s(3), s(5)]));
        assert!(!m.in_column_span(&[s(1), s(1), s(3)]));
    }
}
