use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::Point;
use crate::error::{Error, Result};
use crate::linalg;
use crate::Scalar;

/// A proper rotation, stored as a row-major `d x d` matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct Rotation<S> {
    dim: usize,
    m: Vec<S>,
}

impl<S: Scalar> Rotation<S> {
    pub fn identity(dim: usize) -> Self {
        let mut m = vec![S::zero(); dim * dim];
        for i in 0..dim {
            m[i * dim + i] = S::one();
        }
        Rotation { dim, m }
    }

    /// Counter-clockwise rotation of the plane by `theta`.
    pub fn planar(theta: S) -> Self {
        let (s, c) = theta.sin_cos();
        Rotation { dim: 2, m: vec![c, -s, s, c] }
    }

    /// Rotation matrix of the unit quaternion `(w, x, y, z)` (normalized first).
    pub fn from_quaternion(q: [S; 4]) -> Self {
        let n = q.iter().map(|v| *v * *v).sum::<S>().sqrt();
        let [w, x, y, z] = q.map(|v| v / n);
        let two = S::lit(2.0);
        let one = S::one();
        let m = vec![
            one - two * (y * y + z * z),
            two * (x * y - w * z),
            two * (x * z + w * y),
            two * (x * y + w * z),
            one - two * (x * x + z * z),
            two * (y * z - w * x),
            two * (x * z - w * y),
            two * (y * z + w * x),
            one - two * (x * x + y * y),
        ];
        Rotation { dim: 3, m }
    }

    /// Validates orthogonality and `det = +1` to within `1e-10`.
    pub fn from_row_major(dim: usize, m: Vec<S>) -> Result<Self> {
        if m.len() != dim * dim {
            return Err(Error::Malformed(format!("rotation needs {} entries, got {}", dim * dim, m.len())));
        }
        let r = Rotation { dim, m };
        r.check(S::lit(1e-10).max(S::feas_tol()))?;
        Ok(r)
    }

    /// Row-major matrix with dimension inferred from the entry count.
    pub fn from_flat(m: Vec<S>) -> Result<Self> {
        let dim = (m.len() as f64).sqrt().round() as usize;
        Rotation::from_row_major(dim, m)
    }

    pub fn check(&self, tol: S) -> Result<()> {
        let d = self.dim;
        for i in 0..d {
            for j in 0..d {
                let mut acc = S::zero();
                for k in 0..d {
                    acc += self.m[k * d + i] * self.m[k * d + j];
                }
                let want = if i == j { S::one() } else { S::zero() };
                if (acc - want).abs() > tol {
                    return Err(Error::Degenerate("matrix is not orthogonal".into()));
                }
            }
        }
        if (self.det() - S::one()).abs() > tol {
            return Err(Error::Degenerate("rotation must have determinant +1".into()));
        }
        Ok(())
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn entries(&self) -> &[S] {
        &self.m
    }

    #[inline]
    pub fn at(&self, i: usize, j: usize) -> S {
        self.m[i * self.dim + j]
    }

    pub fn det(&self) -> S {
        linalg::det(self.dim, &self.m)
    }

    pub fn apply(&self, v: &Point<S>) -> Point<S> {
        let d = self.dim;
        Point((0..d).map(|i| super::dot(&self.m[i * d..(i + 1) * d], &v.0)).collect())
    }

    /// `self * other`.
    pub fn compose(&self, other: &Self) -> Self {
        let d = self.dim;
        let mut m = vec![S::zero(); d * d];
        for i in 0..d {
            for j in 0..d {
                let mut acc = S::zero();
                for k in 0..d {
                    acc += self.at(i, k) * other.at(k, j);
                }
                m[i * d + j] = acc;
            }
        }
        Rotation { dim: d, m }
    }

    pub fn inverse(&self) -> Self {
        let d = self.dim;
        let mut m = vec![S::zero(); d * d];
        for i in 0..d {
            for j in 0..d {
                m[j * d + i] = self.at(i, j);
            }
        }
        Rotation { dim: d, m }
    }

    /// Angle of a planar rotation in `(-pi, pi]`.
    pub fn angle(&self) -> Option<S> {
        (self.dim == 2).then(|| self.at(1, 0).atan2(self.at(0, 0)))
    }

    pub fn frobenius_distance(&self, other: &Self) -> S {
        self.m.iter().zip(&other.m).map(|(a, b)| (*a - *b) * (*a - *b)).sum::<S>().sqrt()
    }

    /// Spectral norm of `self - other`, by power iteration on `(A-B)^T (A-B)`.
    pub fn op_distance(&self, other: &Self) -> S {
        let d = self.dim;
        let diff: Vec<S> = self.m.iter().zip(&other.m).map(|(a, b)| *a - *b).collect();
        let mut v: Vec<S> = (0..d).map(|i| S::one() + S::lit(0.1) * S::from_usize(i)).collect();
        let mut sigma2 = S::zero();
        for _ in 0..500 {
            let w: Vec<S> = (0..d).map(|i| super::dot(&diff[i * d..(i + 1) * d], &v)).collect();
            let mut u = vec![S::zero(); d];
            for i in 0..d {
                for j in 0..d {
                    u[j] += diff[i * d + j] * w[i];
                }
            }
            let n = u.iter().map(|x| *x * *x).sum::<S>().sqrt();
            if n == S::zero() {
                return S::zero();
            }
            let vn = v.iter().map(|x| *x * *x).sum::<S>().sqrt();
            let next = n / vn;
            v = u.iter().map(|x| *x / n).collect();
            if (next - sigma2).abs() <= S::lit(1e-15) * next {
                sigma2 = next;
                break;
            }
            sigma2 = next;
        }
        sigma2.sqrt()
    }
}

impl<S: Scalar> Serialize for Rotation<S> {
    fn serialize<Ser: Serializer>(&self, s: Ser) -> std::result::Result<Ser::Ok, Ser::Error> {
        self.m.serialize(s)
    }
}

impl<'de, S: Scalar> Deserialize<'de> for Rotation<S> {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let m = Vec::<S>::deserialize(d)?;
        Rotation::from_flat(m).map_err(serde::de::Error::custom)
    }
}

/// Haar-distributed element of SO(d), deterministic in `seed`.
///
/// The plane uses a uniform angle; higher dimensions orthonormalize a Gaussian
/// matrix (QR with positive diagonal) and flip one column when the result is
/// a reflection.
pub fn random_rotation<S: Scalar>(d: usize, seed: u64) -> Result<Rotation<S>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    random_rotation_with(d, &mut rng)
}

pub(crate) fn random_rotation_with<S: Scalar, R: rand::Rng + ?Sized>(d: usize, rng: &mut R) -> Result<Rotation<S>> {
    if d < 2 {
        return Err(Error::UnsupportedDimension { dim: d, reason: "rotations need d >= 2" });
    }
    if d == 2 {
        return Ok(Rotation::planar(S::sample_unit(rng) * S::TAU()));
    }
    loop {
        // columns of a Gaussian matrix
        let mut cols: Vec<Vec<S>> = (0..d).map(|_| (0..d).map(|_| S::sample_normal(rng)).collect()).collect();
        let mut ok = true;
        for j in 0..d {
            for k in 0..j {
                let proj = super::dot(&cols[j], &cols[k]);
                let ck = cols[k].clone();
                for (x, y) in cols[j].iter_mut().zip(&ck) {
                    *x -= proj * *y;
                }
            }
            // Gram-Schmidt norm is the (positive) R diagonal, so no sign fix needed here.
            let n = cols[j].iter().map(|x| *x * *x).sum::<S>().sqrt();
            if n <= S::lit(1e-8) {
                ok = false;
                break;
            }
            cols[j].iter_mut().for_each(|x| *x /= n);
        }
        if !ok {
            continue;
        }
        let mut m = vec![S::zero(); d * d];
        for j in 0..d {
            for i in 0..d {
                m[i * d + j] = cols[j][i];
            }
        }
        if linalg::det(d, &m) < S::zero() {
            for i in 0..d {
                m[i * d] = -m[i * d];
            }
        }
        return Ok(Rotation { dim: d, m });
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn planar_is_orthogonal() {
        let r: Rotation<f64> = random_rotation(2, 1).unwrap();
        r.check(1e-12).unwrap();
    }

    #[test]
    fn three_d_has_unit_determinant() {
        for seed in 0..20 {
            let r: Rotation<f64> = random_rotation(3, seed).unwrap();
            assert!((r.det() - 1.0).abs() < 1e-10);
            r.check(1e-10).unwrap();
        }
    }

    #[test]
    fn rejects_small_dimension() {
        assert!(random_rotation::<f64>(1, 0).is_err());
    }

    #[test]
    fn deterministic_for_seed() {
        let a: Rotation<f64> = random_rotation(4, 9).unwrap();
        let b: Rotation<f64> = random_rotation(4, 9).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn op_distance_of_planar_rotation() {
        // ||R_theta - I|| = 2 sin(theta / 2)
        let t = 0.7f64;
        let r = Rotation::planar(t);
        let got = r.op_distance(&Rotation::identity(2));
        assert!((got - 2.0 * (t / 2.0).sin()).abs() < 1e-12);
    }

    #[test]
    fn from_flat_rejects_reflection() {
        assert!(Rotation::from_flat(vec![1.0f64, 0.0, 0.0, -1.0]).is_err());
        assert!(Rotation::from_flat(vec![0.0f64, -1.0, 1.0, 0.0]).is_ok());
    }
}
