//! Dense complex matrix storage and the handful of operations the channel
//! pipeline needs: Frobenius norms, inner products, Gram products.
//!
//! Matrices here are small (antenna counts), so everything is plain
//! row-major `Vec<Complex64>` with no blocking or externals.

use num_complex::Complex64;

/// Dense complex matrix, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct CMatrix {
    n_rows: usize,
    n_cols: usize,
    data: Vec<Complex64>,
}

impl CMatrix {
    pub fn zeros(n_rows: usize, n_cols: usize) -> Self {
        CMatrix {
            n_rows,
            n_cols,
            data: vec![Complex64::new(0.0, 0.0); n_rows * n_cols],
        }
    }

    pub fn from_fn(
        n_rows: usize,
        n_cols: usize,
        mut f: impl FnMut(usize, usize) -> Complex64,
    ) -> Self {
        let mut m = CMatrix::zeros(n_rows, n_cols);
        for r in 0..n_rows {
            for c in 0..n_cols {
                m.set(r, c, f(r, c));
            }
        }
        m
    }

    /// Build from rows of (re, im) pairs; rows must be rectangular.
    pub fn from_rows(rows: &[Vec<Complex64>]) -> Self {
        let n_rows = rows.len();
        let n_cols = rows.first().map_or(0, |r| r.len());
        assert!(rows.iter().all(|r| r.len() == n_cols), "ragged rows");
        CMatrix {
            n_rows,
            n_cols,
            data: rows.iter().flatten().copied().collect(),
        }
    }

    pub fn identity(n: usize) -> Self {
        CMatrix::from_fn(n, n, |r, c| {
            if r == c {
                Complex64::new(1.0, 0.0)
            } else {
                Complex64::new(0.0, 0.0)
            }
        })
    }

    pub fn n_rows(&self) -> usize {
        self.n_rows
    }

    pub fn n_cols(&self) -> usize {
        self.n_cols
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> Complex64 {
        self.data[r * self.n_cols + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: Complex64) {
        self.data[r * self.n_cols + c] = v;
    }

    #[inline]
    pub fn add_to(&mut self, r: usize, c: usize, v: Complex64) {
        self.data[r * self.n_cols + c] += v;
    }

    pub fn data(&self) -> &[Complex64] {
        &self.data
    }

    /// Frobenius norm, sqrt of the sum of squared entry magnitudes.
    pub fn fro_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Frobenius inner product `<self, other> = trace(self^H other)`.
    ///
    /// Both matrices must have identical dimensions.
    pub fn fro_inner(&self, other: &CMatrix) -> Complex64 {
        assert_eq!(self.n_rows, other.n_rows);
        assert_eq!(self.n_cols, other.n_cols);
        self.data
            .iter()
            .zip(other.data.iter())
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    pub fn scaled(&self, s: Complex64) -> CMatrix {
        CMatrix {
            n_rows: self.n_rows,
            n_cols: self.n_cols,
            data: self.data.iter().map(|z| z * s).collect(),
        }
    }

    pub fn sub(&self, other: &CMatrix) -> CMatrix {
        assert_eq!(self.n_rows, other.n_rows);
        assert_eq!(self.n_cols, other.n_cols);
        CMatrix {
            n_rows: self.n_rows,
            n_cols: self.n_cols,
            data: self
                .data
                .iter()
                .zip(other.data.iter())
                .map(|(a, b)| a - b)
                .collect(),
        }
    }

    /// Conjugate transpose.
    pub fn hermitian(&self) -> CMatrix {
        CMatrix::from_fn(self.n_cols, self.n_rows, |r, c| self.get(c, r).conj())
    }

    /// Gram matrix `G = self · self^H` (n_rows × n_rows).
    ///
    /// The lower triangle is mirrored from the upper so the result is
    /// Hermitian to the last bit.
    pub fn gram(&self) -> CMatrix {
        let n = self.n_rows;
        let mut g = CMatrix::zeros(n, n);
        for i in 0..n {
            for j in i..n {
                let mut s = Complex64::new(0.0, 0.0);
                for k in 0..self.n_cols {
                    s += self.get(i, k) * self.get(j, k).conj();
                }
                if i == j {
                    g.set(i, i, Complex64::new(s.re, 0.0));
                } else {
                    g.set(i, j, s);
                    g.set(j, i, s.conj());
                }
            }
        }
        g
    }

    /// Largest entry magnitude.
    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }
}
