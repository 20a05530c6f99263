use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::ringkernel::{Poly, PolyRing};

/// A dense matrix of polynomials, stored row-major. Columns are the images
/// of basis vectors (or relations, for presentations).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<Poly>,
}

impl Matrix {
    pub fn zero(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![Poly::zero(); rows * cols] }
    }

    pub fn identity(ring: &PolyRing, n: usize) -> Self {
        let mut m = Matrix::zero(n, n);
        for i in 0..n {
            m.set(i, i, ring.one());
        }
        m
    }

    /// `c * I_n`.
    pub fn scalar(c: &Poly, n: usize) -> Self {
        let mut m = Matrix::zero(n, n);
        for i in 0..n {
            m.set(i, i, c.clone());
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Poly>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        if rows.iter().any(|x| x.len() != c) {
            return Err(Error::Invalid("ragged matrix rows".into()));
        }
        Ok(Matrix { rows: r, cols: c, data: rows.into_iter().flatten().collect() })
    }

    pub fn from_cols(rows: usize, cols: &[Vec<Poly>]) -> Self {
        let mut m = Matrix::zero(rows, cols.len());
        for (j, c) in cols.iter().enumerate() {
            assert_eq!(c.len(), rows, "column length");
            for (i, p) in c.iter().enumerate() {
                m.set(i, j, p.clone());
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Poly {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, p: Poly) {
        self.data[i * self.cols + j] = p;
    }

    pub fn col(&self, j: usize) -> Vec<Poly> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn columns(&self) -> Vec<Vec<Poly>> {
        (0..self.cols).map(|j| self.col(j)).collect()
    }

    pub fn row(&self, i: usize) -> Vec<Poly> {
        self.data[i * self.cols..(i + 1) * self.cols].to_vec()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|p| p.is_zero())
    }

    pub fn transpose(&self) -> Matrix {
        let mut m = Matrix::zero(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                m.set(j, i, self.get(i, j).clone());
            }
        }
        m
    }

    pub fn mul(&self, ring: &PolyRing, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.rows, "matrix product shapes");
        let mut m = Matrix::zero(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if b.is_zero() {
                        continue;
                    }
                    let cur = m.get(i, j).clone();
                    m.set(i, j, ring.add(&cur, &ring.mul(a, b)));
                }
            }
        }
        m
    }

    pub fn apply(&self, ring: &PolyRing, v: &[Poly]) -> Vec<Poly> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| {
                let mut acc = Poly::zero();
                for (j, x) in v.iter().enumerate() {
                    if !x.is_zero() && !self.get(i, j).is_zero() {
                        acc = ring.add(&acc, &ring.mul(self.get(i, j), x));
                    }
                }
                acc
            })
            .collect()
    }

    pub fn add(&self, ring: &PolyRing, other: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| ring.add(a, b)).collect(),
        }
    }

    pub fn sub(&self, ring: &PolyRing, other: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| ring.sub(a, b)).collect(),
        }
    }

    pub fn scale(&self, ring: &PolyRing, c: &Poly) -> Matrix {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(|a| ring.mul(a, c)).collect() }
    }

    pub fn neg(&self, ring: &PolyRing) -> Matrix {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(|a| ring.neg(a)).collect() }
    }

    pub fn hstack(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.rows, other.rows, "hstack rows");
        let mut cols = self.columns();
        cols.extend(other.columns());
        Matrix::from_cols(self.rows, &cols)
    }

    pub fn vstack(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.cols, "vstack cols");
        let mut data = self.data.clone();
        data.extend(other.data.iter().cloned());
        Matrix { rows: self.rows + other.rows, cols: self.cols, data }
    }

    pub fn block_diag(blocks: &[&Matrix]) -> Matrix {
        let r: usize = blocks.iter().map(|b| b.rows).sum();
        let c: usize = blocks.iter().map(|b| b.cols).sum();
        let mut m = Matrix::zero(r, c);
        let (mut ro, mut co) = (0, 0);
        for b in blocks {
            for i in 0..b.rows {
                for j in 0..b.cols {
                    m.set(ro + i, co + j, b.get(i, j).clone());
                }
            }
            ro += b.rows;
            co += b.cols;
        }
        m
    }

    /// `n` copies of `self` down the diagonal.
    pub fn repeat_diag(&self, n: usize) -> Matrix {
        let v: Vec<&Matrix> = std::iter::repeat_n(self, n).collect();
        Matrix::block_diag(&v)
    }

    /// Sub-block of rows `r0..r1`, columns `c0..c1`.
    pub fn block(&self, r0: usize, r1: usize, c0: usize, c1: usize) -> Matrix {
        let mut m = Matrix::zero(r1 - r0, c1 - c0);
        for i in r0..r1 {
            for j in c0..c1 {
                m.set(i - r0, j - c0, self.get(i, j).clone());
            }
        }
        m
    }

    pub fn select_cols(&self, idx: &[usize]) -> Matrix {
        let cols: Vec<Vec<Poly>> = idx.iter().map(|&j| self.col(j)).collect();
        Matrix::from_cols(self.rows, &cols)
    }

    /// Drops zero columns.
    pub fn nonzero_cols(&self) -> Matrix {
        let idx: Vec<usize> = (0..self.cols).filter(|&j| (0..self.rows).any(|i| !self.get(i, j).is_zero())).collect();
        self.select_cols(&idx)
    }

    /// Parses `[[a, b], [c, d]]` (row-major). `rows` fixes the shape of an empty matrix.
    pub fn parse(ring: &PolyRing, s: &str) -> Result<Matrix> {
        let t = s.trim();
        let inner = t.strip_prefix('[').and_then(|x| x.strip_suffix(']')).ok_or_else(|| Error::Parse {
            line: 1,
            col: 1,
            msg: "matrix must be written [[...], ...]".into(),
        })?;
        if inner.trim().is_empty() {
            return Ok(Matrix::zero(0, 0));
        }
        let mut rows = Vec::new();
        for r in crate::ringkernel::split_top_level(inner) {
            let rin = r.trim().strip_prefix('[').and_then(|x| x.strip_suffix(']')).ok_or_else(|| Error::Parse {
                line: 1,
                col: 1,
                msg: format!("bad matrix row `{r}`"),
            })?;
            let entries = if rin.trim().is_empty() {
                Vec::new()
            } else {
                crate::ringkernel::split_top_level(rin).iter().map(|e| ring.parse(e)).collect::<Result<Vec<_>>>()?
            };
            rows.push(entries);
        }
        Matrix::from_rows(rows)
    }

    pub fn fmt(&self, ring: &PolyRing) -> String {
        let mut s = String::from("[");
        for i in 0..self.rows {
            if i > 0 {
                s.push_str(", ");
            }
            s.push('[');
            for j in 0..self.cols {
                if j > 0 {
                    s.push_str(", ");
                }
                let _ = write!(s, "{}", ring.fmt_poly(self.get(i, j)));
            }
            s.push(']');
        }
        s.push(']');
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_format_and_multiply() {
        let r = PolyRing::rational(&["x", "y"]);
        let a = Matrix::parse(&r, "[[x, y], [0, 1]]").unwrap();
        assert_eq!(a.fmt(&r), "[[x, y], [0, 1]]");
        let b = Matrix::parse(&r, "[[y], [-x]]").unwrap();
        let p = a.mul(&r, &b);
        assert_eq!(p.fmt(&r), "[[0], [-x]]");
        assert_eq!(a.transpose().get(1, 0), &r.var(1));
    }
}
