//! Scalar and small dense linear algebra helpers.
//!
//! Everything transcendental goes through `libm` so that results do not
//! depend on whether the crate is built with `std`.

use alloc::vec;
use alloc::vec::Vec;

pub use core::f64::consts::PI;

#[inline]
pub fn sqrt(x: f64) -> f64 {
    libm::sqrt(x)
}

#[inline]
pub fn abs(x: f64) -> f64 {
    libm::fabs(x)
}

#[inline]
pub fn powf(x: f64, y: f64) -> f64 {
    libm::pow(x, y)
}

#[inline]
pub fn powi(x: f64, n: i32) -> f64 {
    libm::pow(x, n as f64)
}

#[inline]
pub fn exp(x: f64) -> f64 {
    libm::exp(x)
}

#[inline]
pub fn ln(x: f64) -> f64 {
    libm::log(x)
}

#[inline]
pub fn floor(x: f64) -> f64 {
    libm::floor(x)
}

#[inline]
pub fn ceil(x: f64) -> f64 {
    libm::ceil(x)
}

#[inline]
pub fn round(x: f64) -> f64 {
    libm::round(x)
}

#[inline]
pub fn sin(x: f64) -> f64 {
    libm::sin(x)
}

#[inline]
pub fn cos(x: f64) -> f64 {
    libm::cos(x)
}

#[inline]
pub fn tan(x: f64) -> f64 {
    libm::tan(x)
}

#[inline]
pub fn atan(x: f64) -> f64 {
    libm::atan(x)
}

#[inline]
pub fn atan2(y: f64, x: f64) -> f64 {
    libm::atan2(y, x)
}

#[inline]
pub fn asin(x: f64) -> f64 {
    libm::asin(x)
}

/// Volume of the unit ball in ℝᵈ, π^{d/2} / Γ(d/2 + 1).
pub fn unit_ball_volume(d: usize) -> f64 {
    // Small dimensions exactly, so that ω₁ = 2 and ω₂ = π hold bit-for-bit.
    match d {
        0 => 1.0,
        1 => 2.0,
        2 => PI,
        3 => 4.0 * PI / 3.0,
        _ => powf(PI, d as f64 / 2.0) / libm::tgamma(d as f64 / 2.0 + 1.0),
    }
}

#[inline]
pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

#[inline]
pub fn norm(a: &[f64]) -> f64 {
    sqrt(dot(a, a))
}

#[inline]
pub fn dist_sq(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

/// Row-major square matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct Matrix {
    n: usize,
    data: Vec<f64>,
}

impl Matrix {
    pub fn zeros(n: usize) -> Self {
        Matrix {
            n,
            data: vec![0.0; n * n],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Matrix::zeros(n);
        for i in 0..n {
            m[(i, i)] = 1.0;
        }
        m
    }

    /// Builds the matrix whose `j`-th column is `columns[j]`.
    pub fn from_columns(columns: &[&[f64]]) -> Self {
        let n = columns.len();
        let mut m = Matrix::zeros(n);
        for (j, col) in columns.iter().enumerate() {
            for i in 0..n {
                m[(i, j)] = col[i];
            }
        }
        m
    }

    pub fn from_row_major(n: usize, data: Vec<f64>) -> Option<Self> {
        (data.len() == n * n).then_some(Matrix { n, data })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn as_row_major(&self) -> &[f64] {
        &self.data
    }

    pub fn apply(&self, x: &[f64]) -> Vec<f64> {
        (0..self.n)
            .map(|i| dot(&self.data[i * self.n..(i + 1) * self.n], x))
            .collect()
    }

    pub fn mul(&self, other: &Matrix) -> Matrix {
        let n = self.n;
        let mut out = Matrix::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self[(i, k)];
                for j in 0..n {
                    out[(i, j)] += a * other[(k, j)];
                }
            }
        }
        out
    }

    pub fn transpose(&self) -> Matrix {
        let mut out = Matrix::zeros(self.n);
        for i in 0..self.n {
            for j in 0..self.n {
                out[(j, i)] = self[(i, j)];
            }
        }
        out
    }

    /// LU factorisation with partial pivoting. Returns `None` for an exactly
    /// singular matrix.
    fn lu(&self) -> Option<(Vec<f64>, Vec<usize>, f64)> {
        let n = self.n;
        let mut a = self.data.clone();
        let mut perm: Vec<usize> = (0..n).collect();
        let mut sign = 1.0;
        for col in 0..n {
            let pivot = (col..n)
                .max_by(|&r, &s| abs(a[r * n + col]).total_cmp(&abs(a[s * n + col])))
                .unwrap();
            if a[pivot * n + col] == 0.0 {
                return None;
            }
            if pivot != col {
                for k in 0..n {
                    a.swap(pivot * n + k, col * n + k);
                }
                perm.swap(pivot, col);
                sign = -sign;
            }
            let p = a[col * n + col];
            for r in col + 1..n {
                let f = a[r * n + col] / p;
                a[r * n + col] = f;
                for k in col + 1..n {
                    a[r * n + k] -= f * a[col * n + k];
                }
            }
        }
        Some((a, perm, sign))
    }

    pub fn determinant(&self) -> f64 {
        match self.lu() {
            None => 0.0,
            Some((a, _, sign)) => (0..self.n).map(|i| a[i * self.n + i]).product::<f64>() * sign,
        }
    }

    pub fn inverse(&self) -> Option<Matrix> {
        let n = self.n;
        let (a, perm, _) = self.lu()?;
        let mut inv = Matrix::zeros(n);
        for c in 0..n {
            // Solve A x = e_c using P A = L U.
            let mut y: Vec<f64> = (0..n).map(|i| if perm[i] == c { 1.0 } else { 0.0 }).collect();
            for i in 0..n {
                for k in 0..i {
                    y[i] -= a[i * n + k] * y[k];
                }
            }
            for i in (0..n).rev() {
                for k in i + 1..n {
                    y[i] -= a[i * n + k] * y[k];
                }
                y[i] /= a[i * n + i];
            }
            for i in 0..n {
                inv[(i, c)] = y[i];
            }
        }
        Some(inv)
    }

    /// Eigenvalues of a symmetric matrix by cyclic Jacobi rotations,
    /// ascending.
    pub fn symmetric_eigenvalues(&self) -> Vec<f64> {
        let n = self.n;
        let mut a = self.data.clone();
        for _sweep in 0..100 {
            let off: f64 = (0..n)
                .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
                .map(|(i, j)| a[i * n + j] * a[i * n + j])
                .sum();
            let scale: f64 = a.iter().map(|x| x * x).sum();
            if off <= 1e-30 * scale || off == 0.0 {
                break;
            }
            for p in 0..n {
                for q in p + 1..n {
                    let apq = a[p * n + q];
                    if apq == 0.0 {
                        continue;
                    }
                    let theta = (a[q * n + q] - a[p * n + p]) / (2.0 * apq);
                    let t = if theta >= 0.0 {
                        1.0 / (theta + sqrt(1.0 + theta * theta))
                    } else {
                        -1.0 / (-theta + sqrt(1.0 + theta * theta))
                    };
                    let c = 1.0 / sqrt(1.0 + t * t);
                    let s = t * c;
                    for k in 0..n {
                        let akp = a[k * n + p];
                        let akq = a[k * n + q];
                        a[k * n + p] = c * akp - s * akq;
                        a[k * n + q] = s * akp + c * akq;
                    }
                    for k in 0..n {
                        let apk = a[p * n + k];
                        let aqk = a[q * n + k];
                        a[p * n + k] = c * apk - s * aqk;
                        a[q * n + k] = s * apk + c * aqk;
                    }
                }
            }
        }
        let mut ev: Vec<f64> = (0..n).map(|i| a[i * n + i]).collect();
        ev.sort_by(f64::total_cmp);
        ev
    }

    /// Smallest and largest singular value.
    pub fn singular_extremes(&self) -> (f64, f64) {
        let ata = self.transpose().mul(self);
        let ev = ata.symmetric_eigenvalues();
        let lo = sqrt(ev[0].max(0.0));
        let hi = sqrt(ev[ev.len() - 1].max(0.0));
        (lo, hi)
    }
}

impl core::ops::Index<(usize, usize)> for Matrix {
    type Output = f64;
    fn index(&self, (i, j): (usize, usize)) -> &f64 {
        &self.data[i * self.n + j]
    }
}

impl core::ops::IndexMut<(usize, usize)> for Matrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut f64 {
        &mut self.data[i * self.n + j]
    }
}
