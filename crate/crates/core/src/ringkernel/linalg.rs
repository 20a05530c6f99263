use num_traits::Zero;

use super::field::{BaseField, Scalar};

/// Dense matrix over the coefficient field, row-major.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DenseMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Scalar>,
}

impl DenseMatrix {
    pub fn zero(rows: usize, cols: usize) -> Self {
        DenseMatrix { rows, cols, data: vec![Scalar::zero(); rows * cols] }
    }

    pub fn from_cols(rows: usize, cols: &[Vec<Scalar>]) -> Self {
        let mut m = DenseMatrix::zero(rows, cols.len());
        for (j, c) in cols.iter().enumerate() {
            for (i, v) in c.iter().enumerate() {
                m.set(i, j, v.clone());
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

    pub fn get(&self, i: usize, j: usize) -> &Scalar {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Scalar) {
        self.data[i * self.cols + j] = v;
    }

    pub fn col(&self, j: usize) -> Vec<Scalar> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn mul(&self, f: &BaseField, o: &DenseMatrix) -> DenseMatrix {
        assert_eq!(self.cols, o.rows, "dense mul shape");
        let mut out = DenseMatrix::zero(self.rows, o.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..o.cols {
                    let b = o.get(k, j);
                    if !b.is_zero() {
                        let v = f.add(out.get(i, j), &f.mul(a, b));
                        out.set(i, j, v);
                    }
                }
            }
        }
        out
    }

    pub fn apply(&self, f: &BaseField, v: &[Scalar]) -> Vec<Scalar> {
        let mut out = vec![Scalar::zero(); self.rows];
        for (i, o) in out.iter_mut().enumerate() {
            for (j, x) in v.iter().enumerate() {
                let a = self.get(i, j);
                if !a.is_zero() && !x.is_zero() {
                    *o = f.add(o, &f.mul(a, x));
                }
            }
        }
        out
    }

    /// Reduced row echelon form and pivot columns.
    pub fn rref(&self, f: &BaseField) -> (DenseMatrix, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(p) = (r..m.rows).find(|&i| !m.get(i, c).is_zero()) else { continue };
            if p != r {
                for j in 0..m.cols {
                    m.data.swap(p * m.cols + j, r * m.cols + j);
                }
            }
            let inv = f.inv(m.get(r, c));
            for j in c..m.cols {
                let v = f.mul(m.get(r, j), &inv);
                m.set(r, j, v);
            }
            for i in 0..m.rows {
                if i == r || m.get(i, c).is_zero() {
                    continue;
                }
                let fac = m.get(i, c).clone();
                for j in c..m.cols {
                    let b = m.get(r, j);
                    if !b.is_zero() {
                        let v = f.sub(m.get(i, j), &f.mul(&fac, b));
                        m.set(i, j, v);
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        (m, pivots)
    }

    pub fn rank(&self, f: &BaseField) -> usize {
        self.rref(f).1.len()
    }

    /// Basis of the kernel, as vectors of length `cols`.
    pub fn nullspace(&self, f: &BaseField) -> Vec<Vec<Scalar>> {
        let (m, pivots) = self.rref(f);
        let mut out = Vec::new();
        for free in (0..self.cols).filter(|c| !pivots.contains(c)) {
            let mut v = vec![Scalar::zero(); self.cols];
            v[free] = f.one();
            for (r, &p) in pivots.iter().enumerate() {
                v[p] = f.neg(m.get(r, free));
            }
            out.push(v);
        }
        out
    }

    /// Some `x` with `self * x = b`.
    pub fn solve(&self, f: &BaseField, b: &[Scalar]) -> Option<Vec<Scalar>> {
        let mut cols: Vec<Vec<Scalar>> = (0..self.cols).map(|j| self.col(j)).collect();
        cols.push(b.to_vec());
        let aug = DenseMatrix::from_cols(self.rows, &cols);
        let (m, pivots) = aug.rref(f);
        if pivots.last() == Some(&self.cols) {
            return None;
        }
        let mut x = vec![Scalar::zero(); self.cols];
        for (r, &p) in pivots.iter().enumerate() {
            x[p] = m.get(r, self.cols).clone();
        }
        Some(x)
    }
}

/// Rank of the span of the given vectors of length `n`.
pub fn span_rank(f: &BaseField, n: usize, vecs: &[Vec<Scalar>]) -> usize {
    if vecs.is_empty() || n == 0 {
        return 0;
    }
    DenseMatrix::from_cols(n, vecs).rank(f)
}
