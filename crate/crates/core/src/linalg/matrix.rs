use std::fmt;

use num::{BigInt, BigRational, One, Zero};

use crate::error::LinalgError;

/// Dense matrix over the rationals, stored row by row.
#[derive(Clone, PartialEq, Eq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<BigRational>,
}

/// Reduced row echelon form together with its pivot columns.
#[derive(Debug, Clone)]
pub struct Echelon {
    pub reduced: Matrix,
    pub pivots: Vec<usize>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![BigRational::zero(); rows * cols],
        }
    }

    pub fn identity(size: usize) -> Self {
        let mut m = Matrix::zeros(size, size);
        for i in 0..size {
            m.set(i, i, BigRational::one());
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> BigRational) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                data.push(f(r, c));
            }
        }
        Matrix { rows, cols, data }
    }

    /// Integer entries, row by row. Mostly useful in tests.
    pub fn from_int_rows(rows: &[Vec<i64>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        Matrix::from_fn(r, c, |i, j| BigRational::from_integer(BigInt::from(rows[i][j])))
    }

    /// Matrix whose columns are the given vectors (all of length `rows`).
    pub fn from_columns(rows: usize, columns: &[Vec<BigRational>]) -> Self {
        Matrix::from_fn(rows, columns.len(), |r, c| columns[c][r].clone())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &BigRational {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: BigRational) {
        self.data[r * self.cols + c] = v;
    }

    pub fn add_to(&mut self, r: usize, c: usize, v: &BigRational) {
        self.data[r * self.cols + c] += v;
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn column(&self, c: usize) -> Vec<BigRational> {
        (0..self.rows).map(|r| self.get(r, c).clone()).collect()
    }

    pub fn select_columns(&self, idx: &[usize]) -> Matrix {
        Matrix::from_fn(self.rows, idx.len(), |r, c| self.get(r, idx[c]).clone())
    }

    pub fn select_rows(&self, idx: &[usize]) -> Matrix {
        Matrix::from_fn(idx.len(), self.cols, |r, c| self.get(idx[r], c).clone())
    }

    pub fn transpose(&self) -> Matrix {
        Matrix::from_fn(self.cols, self.rows, |r, c| self.get(c, r).clone())
    }

    pub fn mul(&self, rhs: &Matrix) -> Result<Matrix, LinalgError> {
        if self.cols != rhs.rows {
            return Err(LinalgError::ShapeMismatch(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        let mut out = Matrix::zeros(self.rows, rhs.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(r, k);
                if a.is_zero() {
                    continue;
                }
                for c in 0..rhs.cols {
                    let b = rhs.get(k, c);
                    if !b.is_zero() {
                        out.data[r * rhs.cols + c] += a * b;
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn sub(&self, rhs: &Matrix) -> Result<Matrix, LinalgError> {
        if self.rows != rhs.rows || self.cols != rhs.cols {
            return Err(LinalgError::ShapeMismatch(format!(
                "cannot subtract {}x{} from {}x{}",
                rhs.rows, rhs.cols, self.rows, self.cols
            )));
        }
        Ok(Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect(),
        })
    }

    /// Horizontal concatenation; all blocks need the same number of rows.
    pub fn hcat(blocks: &[&Matrix]) -> Result<Matrix, LinalgError> {
        let rows = match blocks.first() {
            Some(b) => b.rows,
            None => return Ok(Matrix::zeros(0, 0)),
        };
        if blocks.iter().any(|b| b.rows != rows) {
            return Err(LinalgError::ShapeMismatch("hcat of blocks with different heights".into()));
        }
        let cols = blocks.iter().map(|b| b.cols).sum();
        let mut out = Matrix::zeros(rows, cols);
        let mut c0 = 0;
        for b in blocks {
            out.set_block(0, c0, b);
            c0 += b.cols;
        }
        Ok(out)
    }

    pub fn block_diag(blocks: &[&Matrix]) -> Matrix {
        let rows = blocks.iter().map(|b| b.rows).sum();
        let cols = blocks.iter().map(|b| b.cols).sum();
        let mut out = Matrix::zeros(rows, cols);
        let (mut r0, mut c0) = (0, 0);
        for b in blocks {
            out.set_block(r0, c0, b);
            r0 += b.rows;
            c0 += b.cols;
        }
        out
    }

    pub fn set_block(&mut self, r0: usize, c0: usize, block: &Matrix) {
        assert!(r0 + block.rows <= self.rows && c0 + block.cols <= self.cols, "block out of bounds");
        for r in 0..block.rows {
            for c in 0..block.cols {
                self.set(r0 + r, c0 + c, block.get(r, c).clone());
            }
        }
    }

    /// Gauss-Jordan elimination; the pivot is the first nonzero entry in each column.
    pub fn echelon(&self) -> Echelon {
        let mut rows: Vec<Vec<BigRational>> = (0..self.rows)
            .map(|r| self.data[r * self.cols..(r + 1) * self.cols].to_vec())
            .collect();
        let mut pivots = Vec::new();
        let mut prow = 0;
        for col in 0..self.cols {
            if prow == rows.len() {
                break;
            }
            let Some(found) = (prow..rows.len()).find(|&r| !rows[r][col].is_zero()) else {
                continue;
            };
            rows.swap(prow, found);
            let inv = rows[prow][col].recip();
            if !inv.is_one() {
                for v in rows[prow][col..].iter_mut() {
                    if !v.is_zero() {
                        *v *= &inv;
                    }
                }
            }
            let (before, rest) = rows.split_at_mut(prow);
            let (pivot_row, after) = rest.split_first_mut().expect("pivot row exists");
            let support: Vec<usize> = (col..self.cols).filter(|&c| !pivot_row[c].is_zero()).collect();
            for row in before.iter_mut().chain(after.iter_mut()) {
                if row[col].is_zero() {
                    continue;
                }
                let factor = row[col].clone();
                for &c in &support {
                    row[c] -= &factor * &pivot_row[c];
                }
            }
            pivots.push(col);
            prow += 1;
        }
        let data = rows.into_iter().flatten().collect();
        Echelon {
            reduced: Matrix {
                rows: self.rows,
                cols: self.cols,
                data,
            },
            pivots,
        }
    }

    pub fn rank(&self) -> usize {
        if self.rows == 0 || self.cols == 0 {
            return 0;
        }
        // Eliminate on whichever orientation has fewer rows.
        if self.rows > self.cols {
            self.transpose().echelon().pivots.len()
        } else {
            self.echelon().pivots.len()
        }
    }

    /// Basis of the right null space, as the columns of the returned matrix.
    pub fn nullspace(&self) -> Matrix {
        let Echelon { reduced, pivots } = self.echelon();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        let mut out = Matrix::zeros(self.cols, free.len());
        for (k, &f) in free.iter().enumerate() {
            out.set(f, k, BigRational::one());
            for (r, &p) in pivots.iter().enumerate() {
                let v = reduced.get(r, f);
                if !v.is_zero() {
                    out.set(p, k, -v.clone());
                }
            }
        }
        out
    }

    /// Indices of the lexicographically first maximal independent set of columns.
    pub fn independent_columns(&self) -> Vec<usize> {
        self.echelon().pivots
    }

    /// The independent columns themselves: a basis of the column space.
    pub fn column_basis(&self) -> Matrix {
        self.select_columns(&self.independent_columns())
    }
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix {}x{} [", self.rows, self.cols)?;
        for r in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|c| self.get(r, c).to_string()).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}
