//! Dense exact matrices over any [`ExactRing`].

use std::fmt;
use std::ops::Mul;

use serde::{Serialize, Serializer};

use crate::scalar::ExactRing;

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct BlockMatrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

impl<T: ExactRing> BlockMatrix<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, data: vec![T::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, T::one());
        }
        m
    }

    /// Builds from row vectors; panics on ragged input.
    pub fn from_rows(rows: Vec<Vec<T>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        Self { rows: r, cols: c, data: rows.into_iter().flatten().collect() }
    }

    pub fn diagonal(entries: &[T]) -> Self {
        let mut m = Self::zeros(entries.len(), entries.len());
        for (i, e) in entries.iter().enumerate() {
            m.set(i, i, e.clone());
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &T {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, value: T) {
        self.data[i * self.cols + j] = value;
    }

    pub fn row(&self, i: usize) -> &[T] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    /// Panics on a shape mismatch.
    pub fn multiply(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "shape mismatch in product");
        let mut p = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let v = p.get(i, j).clone() + a.clone() * other.get(k, j).clone();
                    p.set(i, j, v);
                }
            }
        }
        p
    }

    pub fn scale(&self, c: &T) -> Self {
        Self { rows: self.rows, cols: self.cols, data: self.data.iter().map(|x| c.clone() * x.clone()).collect() }
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols), "shape mismatch in difference");
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a.clone() - b.clone()).collect(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    pub fn is_diagonal(&self) -> bool {
        (0..self.rows).all(|i| (0..self.cols).all(|j| i == j || self.get(i, j).is_zero()))
    }

    pub fn diagonal_entries(&self) -> Vec<T> {
        (0..self.rows.min(self.cols)).map(|i| self.get(i, i).clone()).collect()
    }

    /// Block-diagonal assembly; zero-sized blocks are skipped.
    pub fn block_diag(blocks: &[&Self]) -> Self {
        let rows = blocks.iter().map(|b| b.rows).sum();
        let cols = blocks.iter().map(|b| b.cols).sum();
        let mut m = Self::zeros(rows, cols);
        let (mut r0, mut c0) = (0, 0);
        for b in blocks {
            for i in 0..b.rows {
                for j in 0..b.cols {
                    m.set(r0 + i, c0 + j, b.get(i, j).clone());
                }
            }
            r0 += b.rows;
            c0 += b.cols;
        }
        m
    }

    /// Assembles a square matrix from a grid of blocks; `None` is a zero
    /// block whose size is read off its row and column.
    pub fn from_blocks(grid: &[Vec<Option<&Self>>], sizes: &[usize]) -> Self {
        let n: usize = sizes.iter().sum();
        let mut m = Self::zeros(n, n);
        let offsets: Vec<usize> = sizes.iter().scan(0, |acc, s| {
            let o = *acc;
            *acc += s;
            Some(o)
        }).collect();
        for (bi, row) in grid.iter().enumerate() {
            for (bj, block) in row.iter().enumerate() {
                if let Some(b) = block {
                    assert_eq!((b.rows, b.cols), (sizes[bi], sizes[bj]), "block ({bi},{bj}) has the wrong shape");
                    for i in 0..b.rows {
                        for j in 0..b.cols {
                            m.set(offsets[bi] + i, offsets[bj] + j, b.get(i, j).clone());
                        }
                    }
                }
            }
        }
        m
    }

    /// Determinant by fraction-free (Bareiss) elimination; every division is exact.
    pub fn determinant(&self) -> T {
        assert!(self.is_square(), "determinant of a non-square matrix");
        let n = self.rows;
        if n == 0 {
            return T::one();
        }
        let mut a = self.clone();
        let mut negate = false;
        let mut prev = T::one();
        for k in 0..n - 1 {
            if a.get(k, k).is_zero() {
                match (k + 1..n).find(|&i| !a.get(i, k).is_zero()) {
                    Some(i) => {
                        a.swap_rows(i, k);
                        negate = !negate;
                    }
                    None => return T::zero(),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = (a.get(k, k).clone() * a.get(i, j).clone() - a.get(i, k).clone() * a.get(k, j).clone())
                        / prev.clone();
                    a.set(i, j, v);
                }
            }
            prev = a.get(k, k).clone();
        }
        let det = a.get(n - 1, n - 1).clone();
        if negate {
            -det
        } else {
            det
        }
    }

    fn swap_rows(&mut self, i: usize, j: usize) {
        for c in 0..self.cols {
            self.data.swap(i * self.cols + c, j * self.cols + c);
        }
    }

    pub fn to_rows(&self) -> Vec<Vec<T>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }
}

impl<T: ExactRing> Mul for &BlockMatrix<T> {
    type Output = BlockMatrix<T>;
    fn mul(self, rhs: Self) -> BlockMatrix<T> {
        self.multiply(rhs)
    }
}

impl<T: ExactRing> fmt::Display for BlockMatrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cells: Vec<String> = self.data.iter().map(|x| x.to_string()).collect();
        let width = cells.iter().map(String::len).max().unwrap_or(1);
        for i in 0..self.rows {
            let line: Vec<String> =
                (0..self.cols).map(|j| format!("{:>width$}", cells[i * self.cols + j])).collect();
            writeln!(f, "{}", line.join(" "))?;
        }
        Ok(())
    }
}

/// Serialized as `{"dim": n, "entries": [[..], ..]}`.
impl<T: ExactRing + Serialize> Serialize for BlockMatrix<T> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Repr<'a, T> {
            dim: usize,
            entries: &'a [Vec<T>],
        }
        Repr { dim: self.rows, entries: &self.to_rows() }.serialize(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;
    use num_rational::Ratio;

    type M = BlockMatrix<i64>;

    #[test]
    fn products_and_transpose() {
        let a = M::from_rows(vec![vec![1, 2], vec![3, 4]]);
        let b = M::from_rows(vec![vec![0, 1], vec![1, 0]]);
        assert_eq!(&a * &b, M::from_rows(vec![vec![2, 1], vec![4, 3]]));
        assert_eq!(a.transpose(), M::from_rows(vec![vec![1, 3], vec![2, 4]]));
        assert_eq!(&a * &M::identity(2), a);
    }

    #[test]
    fn determinants() {
        assert_eq!(M::from_rows(vec![vec![1, 2], vec![3, 4]]).determinant(), -2);
        assert_eq!(M::from_rows(vec![vec![0, 1], vec![1, 0]]).determinant(), -1);
        let m = M::from_rows(vec![vec![2, -1, 0], vec![-1, 2, -1], vec![0, -1, 2]]);
        assert_eq!(m.determinant(), 4);
        assert_eq!(M::from_rows(vec![vec![1, 2], vec![2, 4]]).determinant(), 0);
        assert_eq!(M::identity(0).determinant(), 1);
        let big = BlockMatrix::<BigInt>::from_rows(vec![
            vec![BigInt::from(0), BigInt::from(0), BigInt::from(1)],
            vec![BigInt::from(0), BigInt::from(1), BigInt::from(0)],
            vec![BigInt::from(1), BigInt::from(0), BigInt::from(0)],
        ]);
        assert_eq!(big.determinant(), BigInt::from(-1));
        let q = BlockMatrix::<Ratio<i64>>::from_rows(vec![
            vec![Ratio::new(1, 2), Ratio::from_integer(1)],
            vec![Ratio::from_integer(1), Ratio::from_integer(4)],
        ]);
        assert_eq!(q.determinant(), Ratio::from_integer(1));
    }

    #[test]
    fn block_assembly() {
        let s = M::from_rows(vec![vec![0, 1], vec![1, 0]]);
        let d = M::block_diag(&[&M::identity(1), &s, &M::identity(0), &M::identity(1)]);
        assert_eq!(d.rows(), 4);
        assert_eq!(*d.get(1, 2), 1);
        assert_eq!(d.determinant(), -1);
        let i1 = M::identity(1);
        let g = M::from_blocks(&[vec![None, Some(&i1)], vec![Some(&i1), None]], &[1, 1]);
        assert_eq!(g, s);
        assert!(M::diagonal(&[1, -1]).is_diagonal());
        assert!(!s.is_diagonal());
    }

    #[test]
    fn display_and_json() {
        let m = M::from_rows(vec![vec![0, -1], vec![1, 0]]);
        assert_eq!(m.to_string(), " 0 -1\n 1  0\n");
        assert_eq!(serde_json::to_string(&m).unwrap(), r#"{"dim":2,"entries":[[0,-1],[1,0]]}"#);
    }
}
