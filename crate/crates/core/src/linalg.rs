//! Minimal dense complex matrices: just enough for determinants of the
//! adjacency-sized operators in this crate.

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Row-major dense complex matrix.
#[derive(Clone, Debug)]
pub struct CMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Complex64>,
}

impl CMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        CMatrix { rows, cols, data: vec![Complex64::new(0.0, 0.0); rows * cols] }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Complex64) {
        self.data[i * self.cols + j] = v;
    }

    pub fn add_assign(&mut self, i: usize, j: usize, v: Complex64) {
        self.data[i * self.cols + j] += v;
    }

    /// Determinant by LU factorization with partial pivoting. O(n³), fine
    /// for the matrix sizes here (a few hundred at most).
    pub fn determinant(&self) -> Result<Complex64> {
        if self.rows != self.cols {
            return Err(Error::NonSquare { rows: self.rows, cols: self.cols });
        }
        let n = self.rows;
        if n == 0 {
            return Ok(Complex64::new(1.0, 0.0));
        }
        let mut a = self.data.clone();
        let mut det = Complex64::new(1.0, 0.0);
        for k in 0..n {
            let mut pivot = k;
            let mut best = a[k * n + k].norm_sqr();
            for i in k + 1..n {
                let cand = a[i * n + k].norm_sqr();
                if cand > best {
                    best = cand;
                    pivot = i;
                }
            }
            if best == 0.0 {
                return Ok(Complex64::new(0.0, 0.0));
            }
            if pivot != k {
                for j in 0..n {
                    a.swap(k * n + j, pivot * n + j);
                }
                det = -det;
            }
            let diag = a[k * n + k];
            det *= diag;
            for i in k + 1..n {
                let factor = a[i * n + k] / diag;
                if factor.norm_sqr() == 0.0 {
                    continue;
                }
                for j in k + 1..n {
                    let sub = factor * a[k * n + j];
                    a[i * n + j] -= sub;
                }
                a[i * n + k] = Complex64::new(0.0, 0.0);
            }
        }
        Ok(det)
    }
}

/// Solve a dense GF(2) linear system `A x = b` by Gaussian elimination with
/// column pivoting in index order. Returns one solution; errors when the
/// system is inconsistent.
pub fn solve_gf2(a: &[Vec<bool>], b: &[bool]) -> Result<Vec<bool>> {
    let rows = a.len();
    let cols = if rows == 0 { 0 } else { a[0].len() };
    let mut m: Vec<Vec<bool>> = a.to_vec();
    let mut rhs = b.to_vec();
    let mut pivot_of_col = vec![usize::MAX; cols];
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..rows).find(|&i| m[i][c]) else { continue };
        m.swap(r, p);
        rhs.swap(r, p);
        for i in 0..rows {
            if i != r && m[i][c] {
                let (head, tail) = if i < r { (i, r) } else { (r, i) };
                let (top, bottom) = m.split_at_mut(tail);
                let (src, dst) =
                    if i < r { (&bottom[0], &mut top[head]) } else { (&top[head], &mut bottom[0]) };
                for j in 0..cols {
                    dst[j] ^= src[j];
                }
                rhs[i] ^= rhs[r];
            }
        }
        pivot_of_col[c] = r;
        r += 1;
        if r == rows {
            break;
        }
    }
    // inconsistent rows: all-zero coefficients with nonzero rhs
    for i in 0..rows {
        if rhs[i] && m[i].iter().all(|&x| !x) {
            return Err(Error::SingularSolve(format!("row {i} is inconsistent")));
        }
    }
    let mut x = vec![false; cols];
    for c in 0..cols {
        if pivot_of_col[c] != usize::MAX {
            x[c] = rhs[pivot_of_col[c]];
        }
    }
    Ok(x)
}
