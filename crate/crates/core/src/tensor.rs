//! Dense 3×3 tensor calculus.
//!
//! [`Mat3`] is row-major; `m[(i, j)]` is row `i`, column `j`. The inner
//! product on matrices is the Frobenius one, `⟨X, Y⟩ = tr(Xᵀ Y)`.
//!
//! Cofactors are always built from signed 2×2 minors so that singular and
//! rank-one inputs come out exact; nothing here goes through `det · A⁻ᵀ`.

use std::fmt;
use std::ops::{Add, AddAssign, Index, IndexMut, Mul, Neg, Sub, SubAssign};

use serde::{Deserialize, Serialize};

use crate::eigen::sym_eigenvalues;
use crate::error::{Error, Result};

/// Relative singularity threshold used by [`Mat3::inverse`].
pub const SINGULAR_RTOL: f64 = 1e-12;

/// Relative threshold `σ₂ ≤ RANK_ONE_RTOL · σ₁` accepted as numerical rank ≤ 1.
pub const RANK_ONE_RTOL: f64 = 1e-10;

#[derive(Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Vec3(pub [f64; 3]);

impl Vec3 {
    pub const ZERO: Vec3 = Vec3([0.0; 3]);

    pub const fn new(x: f64, y: f64, z: f64) -> Self {
        Vec3([x, y, z])
    }

    /// Standard basis vector `e_i` (zero-based).
    pub fn unit(i: usize) -> Self {
        let mut v = [0.0; 3];
        v[i] = 1.0;
        Vec3(v)
    }

    pub fn dot(&self, other: &Vec3) -> f64 {
        self.0[0] * other.0[0] + self.0[1] * other.0[1] + self.0[2] * other.0[2]
    }

    pub fn cross(&self, o: &Vec3) -> Vec3 {
        let [a, b, c] = self.0;
        let [x, y, z] = o.0;
        Vec3([b * z - c * y, c * x - a * z, a * y - b * x])
    }

    pub fn norm_squared(&self) -> f64 {
        self.dot(self)
    }

    pub fn norm(&self) -> f64 {
        self.norm_squared().sqrt()
    }

    pub fn scale(&self, s: f64) -> Vec3 {
        Vec3(self.0.map(|x| x * s))
    }

    /// Unit vector in the same direction, or `None` for the zero vector.
    pub fn normalized(&self) -> Option<Vec3> {
        let n = self.norm();
        (n > 0.0 && n.is_finite()).then(|| self.scale(1.0 / n))
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().all(|x| x.is_finite())
    }

    /// Unit vector from polar angle `theta` and azimuth `phi`.
    pub fn from_spherical(theta: f64, phi: f64) -> Vec3 {
        let (st, ct) = theta.sin_cos();
        let (sp, cp) = phi.sin_cos();
        Vec3([st * cp, st * sp, ct])
    }

    /// Inverse of [`Vec3::from_spherical`] for unit vectors.
    pub fn to_spherical(&self) -> (f64, f64) {
        let n = self.norm();
        let theta = (self.0[2] / n).clamp(-1.0, 1.0).acos();
        let phi = self.0[1].atan2(self.0[0]);
        (theta, phi)
    }
}

impl fmt::Debug for Vec3 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}

impl Index<usize> for Vec3 {
    type Output = f64;
    fn index(&self, i: usize) -> &f64 {
        &self.0[i]
    }
}

impl Add for Vec3 {
    type Output = Vec3;
    fn add(self, o: Vec3) -> Vec3 {
        Vec3(std::array::from_fn(|i| self.0[i] + o.0[i]))
    }
}

impl Sub for Vec3 {
    type Output = Vec3;
    fn sub(self, o: Vec3) -> Vec3 {
        Vec3(std::array::from_fn(|i| self.0[i] - o.0[i]))
    }
}

impl Neg for Vec3 {
    type Output = Vec3;
    fn neg(self) -> Vec3 {
        self.scale(-1.0)
    }
}

impl Mul<f64> for Vec3 {
    type Output = Vec3;
    fn mul(self, s: f64) -> Vec3 {
        self.scale(s)
    }
}

#[derive(Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Mat3(pub [[f64; 3]; 3]);

impl Mat3 {
    pub const ZERO: Mat3 = Mat3([[0.0; 3]; 3]);
    pub const IDENTITY: Mat3 = Mat3([[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]]);

    pub const fn from_rows(rows: [[f64; 3]; 3]) -> Self {
        Mat3(rows)
    }

    pub fn from_fn(f: impl Fn(usize, usize) -> f64) -> Self {
        Mat3(std::array::from_fn(|i| std::array::from_fn(|j| f(i, j))))
    }

    pub fn diag(a: f64, b: f64, c: f64) -> Self {
        Mat3([[a, 0.0, 0.0], [0.0, b, 0.0], [0.0, 0.0, c]])
    }

    pub fn scalar(s: f64) -> Self {
        Mat3::diag(s, s, s)
    }

    /// Row-major from a flat slice of nine entries.
    pub fn from_row_slice(v: &[f64]) -> Option<Self> {
        (v.len() == 9).then(|| Mat3::from_fn(|i, j| v[3 * i + j]))
    }

    pub fn to_row_vec(&self) -> Vec<f64> {
        self.0.iter().flatten().copied().collect()
    }

    pub fn row(&self, i: usize) -> Vec3 {
        Vec3(self.0[i])
    }

    pub fn col(&self, j: usize) -> Vec3 {
        Vec3([self.0[0][j], self.0[1][j], self.0[2][j]])
    }

    pub fn transpose(&self) -> Mat3 {
        Mat3::from_fn(|i, j| self.0[j][i])
    }

    pub fn trace(&self) -> f64 {
        self.0[0][0] + self.0[1][1] + self.0[2][2]
    }

    /// Frobenius inner product `⟨self, other⟩`.
    pub fn inner(&self, other: &Mat3) -> f64 {
        let mut s = 0.0;
        for i in 0..3 {
            for j in 0..3 {
                s += self.0[i][j] * other.0[i][j];
            }
        }
        s
    }

    pub fn norm_squared(&self) -> f64 {
        self.inner(self)
    }

    /// Frobenius norm.
    pub fn norm(&self) -> f64 {
        self.norm_squared().sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.0.iter().flatten().fold(0.0_f64, |m, x| m.max(x.abs()))
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().flatten().all(|x| x.is_finite())
    }

    pub fn scale(&self, s: f64) -> Mat3 {
        Mat3::from_fn(|i, j| self.0[i][j] * s)
    }

    pub fn mul_vec(&self, v: &Vec3) -> Vec3 {
        Vec3(std::array::from_fn(|i| self.row(i).dot(v)))
    }

    /// `(A + Aᵀ)/2`.
    pub fn sym(&self) -> Mat3 {
        Mat3::from_fn(|i, j| 0.5 * (self.0[i][j] + self.0[j][i]))
    }

    /// Frobenius norm of `A − Aᵀ`.
    pub fn asymmetry(&self) -> f64 {
        (*self - self.transpose()).norm()
    }

    /// Determinant by cofactor expansion along the first row.
    pub fn det(&self) -> f64 {
        let m = &self.0;
        m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
            + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
    }

    /// Matrix of signed 2×2 minors; satisfies `A (Cof A)ᵀ = det(A) 𝟙`.
    pub fn cofactor(&self) -> Mat3 {
        let m = &self.0;
        Mat3::from_fn(|i, j| {
            let (r0, r1) = ((i + 1) % 3, (i + 2) % 3);
            let (c0, c1) = ((j + 1) % 3, (j + 2) % 3);
            // cyclic index choice absorbs the (-1)^(i+j) sign
            m[r0][c0] * m[r1][c1] - m[r0][c1] * m[r1][c0]
        })
    }

    /// Inverse via the adjugate. Fails when `|det A| ≤ 1e-12 · max(1, ‖A‖³)`.
    pub fn inverse(&self) -> Result<Mat3> {
        let det = self.det();
        let threshold = SINGULAR_RTOL * self.norm().powi(3).max(1.0);
        if !det.is_finite() || det.abs() <= threshold {
            return Err(Error::Singular { det, threshold });
        }
        Ok(self.cofactor().transpose().scale(1.0 / det))
    }

    /// Rotation `exp(W)` for the skew matrix `W` with axial vector `w`
    /// (Rodrigues' formula).
    pub fn rotation(w: &Vec3) -> Mat3 {
        let angle = w.norm();
        if angle == 0.0 {
            return Mat3::IDENTITY;
        }
        let k = w.scale(1.0 / angle);
        let kx = Mat3([[0.0, -k[2], k[1]], [k[2], 0.0, -k[0]], [-k[1], k[0], 0.0]]);
        Mat3::IDENTITY + kx.scale(angle.sin()) + (kx * kx).scale(1.0 - angle.cos())
    }
}

impl fmt::Debug for Mat3 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}

impl Index<(usize, usize)> for Mat3 {
    type Output = f64;
    fn index(&self, (i, j): (usize, usize)) -> &f64 {
        &self.0[i][j]
    }
}

impl IndexMut<(usize, usize)> for Mat3 {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut f64 {
        &mut self.0[i][j]
    }
}

impl Add for Mat3 {
    type Output = Mat3;
    fn add(self, o: Mat3) -> Mat3 {
        Mat3::from_fn(|i, j| self.0[i][j] + o.0[i][j])
    }
}

impl AddAssign for Mat3 {
    fn add_assign(&mut self, o: Mat3) {
        *self = *self + o;
    }
}

impl Sub for Mat3 {
    type Output = Mat3;
    fn sub(self, o: Mat3) -> Mat3 {
        Mat3::from_fn(|i, j| self.0[i][j] - o.0[i][j])
    }
}

impl SubAssign for Mat3 {
    fn sub_assign(&mut self, o: Mat3) {
        *self = *self - o;
    }
}

impl Neg for Mat3 {
    type Output = Mat3;
    fn neg(self) -> Mat3 {
        self.scale(-1.0)
    }
}

impl Mul<f64> for Mat3 {
    type Output = Mat3;
    fn mul(self, s: f64) -> Mat3 {
        self.scale(s)
    }
}

impl Mul for Mat3 {
    type Output = Mat3;
    fn mul(self, o: Mat3) -> Mat3 {
        Mat3::from_fn(|i, j| self.0[i][0] * o.0[0][j] + self.0[i][1] * o.0[1][j] + self.0[i][2] * o.0[2][j])
    }
}

impl Mul<Vec3> for Mat3 {
    type Output = Vec3;
    fn mul(self, v: Vec3) -> Vec3 {
        self.mul_vec(&v)
    }
}

pub fn det(a: &Mat3) -> f64 {
    a.det()
}

pub fn cofactor(a: &Mat3) -> Mat3 {
    a.cofactor()
}

pub fn inverse(a: &Mat3) -> Result<Mat3> {
    a.inverse()
}

/// Dyadic product `a ⊗ b`, entry `(i, j)` equal to `a_i b_j`.
pub fn dyad(a: &Vec3, b: &Vec3) -> Mat3 {
    Mat3::from_fn(|i, j| a[i] * b[j])
}

/// `(a ⊗ b)(c ⊗ d) = ⟨b, c⟩ (a ⊗ d)`.
pub fn dyad_compose(a: &Vec3, b: &Vec3, c: &Vec3, d: &Vec3) -> Mat3 {
    dyad(a, d).scale(b.dot(c))
}

/// Directional derivative of the cofactor map,
/// `D Cof(F).H = (⟨F⁻ᵀ, H⟩ 𝟙 − F⁻ᵀ Hᵀ) Cof F`.
pub fn cof_directional_derivative(f: &Mat3, h: &Mat3) -> Result<Mat3> {
    let f_inv_t = f.inverse()?.transpose();
    let left = Mat3::scalar(f_inv_t.inner(h)) - f_inv_t * h.transpose();
    Ok(left * f.cofactor())
}

/// `Cof(𝟙 + H) = 𝟙 + (⟨𝟙, H⟩ 𝟙 − Hᵀ) + Cof H`. Polynomial identity in `H`.
pub fn cof_rank_one_expansion(h: &Mat3) -> Mat3 {
    Mat3::IDENTITY + Mat3::scalar(h.trace()) - h.transpose() + h.cofactor()
}

/// `det(F + ξ⊗η) = det F + ⟨Cof(F) η, ξ⟩`; valid for singular `F`.
pub fn det_rank_one_update(f: &Mat3, p: &RankOnePerturbation) -> f64 {
    f.det() + f.cofactor().mul_vec(&p.eta).dot(&p.xi)
}

/// Whether `F + t ξ⊗η` stays in GL⁺(3) for every `t ∈ [0, 1]`.
///
/// `t ↦ det(F + t ξ⊗η)` is affine, so the endpoints decide.
pub fn segment_in_gl_plus(f: &Mat3, p: &RankOnePerturbation) -> bool {
    f.det() > 0.0 && det_rank_one_update(f, p) > 0.0
}

/// Factor `A ≈ a ⊗ b` with `‖a‖ = ‖b‖` when `A` has numerical rank ≤ 1.
///
/// Returns the zero pair for `A = 0` and `None` when `σ₂ > 1e-10 σ₁`.
pub fn rank_one_factor(a: &Mat3) -> Option<(Vec3, Vec3)> {
    if a.max_abs() == 0.0 {
        return Some((Vec3::ZERO, Vec3::ZERO));
    }
    if !a.is_finite() {
        return None;
    }
    let s = a.max_abs();
    let a_n = a.scale(1.0 / s);
    let sigma1 = sym_eigenvalues(&(a_n.transpose() * a_n))[2].max(0.0).sqrt();
    // Singular values of Cof A are {σ₂σ₃, σ₁σ₃, σ₁σ₂}; the largest divided by σ₁
    // recovers σ₂ without the √ε floor of the AᵀA eigenvalue route.
    let c = a_n.cofactor();
    let sigma1_sigma2 = sym_eigenvalues(&(c.transpose() * c))[2].max(0.0).sqrt();
    let sigma2 = sigma1_sigma2 / sigma1;
    if sigma2 > RANK_ONE_RTOL * sigma1 {
        return None;
    }
    let r = (0..3)
        .max_by(|&i, &j| a.row(i).norm_squared().total_cmp(&a.row(j).norm_squared()))
        .unwrap_or(0);
    let b = a.row(r).normalized()?;
    let col = a.mul_vec(&b);
    let p = RankOnePerturbation::new(col, b);
    Some((p.xi, p.eta))
}

/// A rank-one increment `ξ ⊗ η`, stored in canonical form `‖ξ‖ = ‖η‖`.
///
/// Only the product is meaningful; `(cξ, η/c)` canonicalizes to the same pair.
#[derive(Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct RankOnePerturbation {
    pub xi: Vec3,
    pub eta: Vec3,
}

impl RankOnePerturbation {
    pub const ZERO: RankOnePerturbation = RankOnePerturbation {
        xi: Vec3::ZERO,
        eta: Vec3::ZERO,
    };

    pub fn new(xi: Vec3, eta: Vec3) -> Self {
        let (nx, ne) = (xi.norm(), eta.norm());
        let amplitude = nx * ne;
        if amplitude == 0.0 || !amplitude.is_finite() {
            return Self::ZERO;
        }
        let r = amplitude.sqrt();
        RankOnePerturbation {
            xi: xi.scale(r / nx),
            eta: eta.scale(r / ne),
        }
    }

    /// `s · (ξ ⊗ η)` for unit directions.
    pub fn from_directions(xi: Vec3, eta: Vec3, s: f64) -> Self {
        Self::new(xi.scale(s), eta)
    }

    pub fn is_zero(&self) -> bool {
        self.amplitude() == 0.0
    }

    /// `‖ξ ⊗ η‖ = ‖ξ‖ ‖η‖`.
    pub fn amplitude(&self) -> f64 {
        self.xi.norm() * self.eta.norm()
    }

    pub fn matrix(&self) -> Mat3 {
        dyad(&self.xi, &self.eta)
    }

    pub fn scaled(&self, s: f64) -> Self {
        Self::new(self.xi.scale(s), self.eta)
    }

    /// Unit directions `(ξ/‖ξ‖, η/‖η‖)`; `None` for the zero perturbation.
    pub fn directions(&self) -> Option<(Vec3, Vec3)> {
        Some((self.xi.normalized()?, self.eta.normalized()?))
    }
}

impl fmt::Debug for RankOnePerturbation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?} ⊗ {:?}", self.xi, self.eta)
    }
}
