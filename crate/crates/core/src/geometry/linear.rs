use alloc::vec::Vec;

use super::Direction;
use crate::error::{Error, Result};
use crate::math::{self, Matrix};

/// Frames with `|det| < SINGULAR_FRAME` are rejected.
pub const SINGULAR_FRAME: f64 = 1e-12;

/// An invertible linear change of coordinates with its distortion data.
///
/// `length_distortion` is (σ_min, σ_max) of the matrix and
/// `volume_distortion` is `|det|`.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearMap {
    matrix: Matrix,
    length_distortion: (f64, f64),
    volume_distortion: f64,
}

impl LinearMap {
    pub fn new(matrix: Matrix) -> Result<Self> {
        let det = math::abs(matrix.determinant());
        if !(det > 0.0) || !det.is_finite() {
            return Err(Error::SingularFrame(det));
        }
        let length_distortion = matrix.singular_extremes();
        Ok(LinearMap {
            matrix,
            length_distortion,
            volume_distortion: det,
        })
    }

    pub fn identity(n: usize) -> Self {
        LinearMap {
            matrix: Matrix::identity(n),
            length_distortion: (1.0, 1.0),
            volume_distortion: 1.0,
        }
    }

    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }

    pub fn matrix(&self) -> &Matrix {
        &self.matrix
    }

    pub fn length_distortion(&self) -> (f64, f64) {
        self.length_distortion
    }

    pub fn volume_distortion(&self) -> f64 {
        self.volume_distortion
    }

    pub fn apply(&self, x: &[f64]) -> Vec<f64> {
        self.matrix.apply(x)
    }

    /// Image of a direction, renormalised.
    pub fn apply_direction(&self, d: &Direction) -> Result<Direction> {
        Direction::new(self.apply(d.as_slice()))
    }

    pub fn inverse(&self) -> Result<LinearMap> {
        let inv = self
            .matrix
            .inverse()
            .ok_or(Error::SingularFrame(self.volume_distortion))?;
        LinearMap::new(inv)
    }

    pub fn compose(&self, inner: &LinearMap) -> Result<LinearMap> {
        LinearMap::new(self.matrix.mul(&inner.matrix))
    }
}

fn frame_matrix(centers: &[Direction]) -> Result<Matrix> {
    let n = centers.len();
    if n < 2 || centers.iter().any(|c| c.dim() != n) {
        return Err(Error::invalid("a frame needs n directions in R^n"));
    }
    let cols: Vec<&[f64]> = centers.iter().map(|c| c.as_slice()).collect();
    Ok(Matrix::from_columns(&cols))
}

/// `|v_1 ∧ … ∧ v_n|`, the absolute determinant of the matrix with columns
/// `v_j`.
pub fn wedge_volume(dirs: &[Direction]) -> Result<f64> {
    Ok(math::abs(frame_matrix(dirs)?.determinant()))
}

/// The linear map sending `v_j ↦ e_j`: the inverse of the matrix whose
/// columns are the `v_j`.
pub fn frame_map(centers: &[Direction]) -> Result<LinearMap> {
    let v = frame_matrix(centers)?;
    let det = math::abs(v.determinant());
    if det < SINGULAR_FRAME {
        return Err(Error::SingularFrame(det));
    }
    let a = v.inverse().ok_or(Error::SingularFrame(det))?;
    LinearMap::new(a)
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn axes(n: usize) -> Vec<Direction> {
        (0..n).map(|j| Direction::axis(n, j)).collect()
    }

    #[test]
    fn identity_frame() {
        let m = frame_map(&axes(3)).unwrap();
        assert_eq!(m.matrix(), &Matrix::identity(3));
        let (lo, hi) = m.length_distortion();
        assert!((lo - 1.0).abs() < 1e-15 && (hi - 1.0).abs() < 1e-15);
        assert!((m.volume_distortion() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn wedge_examples() {
        assert!((wedge_volume(&axes(4)).unwrap() - 1.0).abs() < 1e-15);
        let d = Direction::new(vec![1.0, 1.0]).unwrap();
        assert_eq!(wedge_volume(&[d.clone(), d.clone()]).unwrap(), 0.0);
        let e = Direction::new(vec![1.0, 0.0]).unwrap();
        let w = wedge_volume(&[e, d]).unwrap();
        assert!((w - core::f64::consts::FRAC_1_SQRT_2).abs() < 1e-15);
    }

    #[test]
    fn singular_frame_rejected() {
        let d = Direction::new(vec![1.0, 1.0, 0.0]).unwrap();
        let e = Direction::axis(3, 2);
        assert!(matches!(frame_map(&[d.clone(), d, e]), Err(Error::SingularFrame(_))));
    }

    #[test]
    fn frame_inverse_round_trip() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..200 {
            let n = rng.gen_range(2..5);
            let frame: Vec<Direction> = (0..n)
                .map(|j| {
                    let mut v: Vec<f64> = (0..n).map(|_| rng.gen_range(-0.3..0.3)).collect();
                    v[j] += 1.0;
                    Direction::new(v).unwrap()
                })
                .collect();
            let a = frame_map(&frame).unwrap();
            for (j, v) in frame.iter().enumerate() {
                let img = a.apply(v.as_slice());
                for (i, x) in img.iter().enumerate() {
                    let want = if i == j { 1.0 } else { 0.0 };
                    assert!((x - want).abs() < 1e-9);
                }
            }
            let back = a.inverse().unwrap().inverse().unwrap();
            let id = back.compose(&a.inverse().unwrap()).unwrap();
            for i in 0..n {
                for j in 0..n {
                    let want = if i == j { 1.0 } else { 0.0 };
                    assert!((id.matrix()[(i, j)] - want).abs() < 1e-9);
                }
            }
        }
    }
}
