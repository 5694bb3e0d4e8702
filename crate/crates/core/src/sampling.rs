//! Seeded sampling of GL⁺(3) and of the unit sphere.
//!
//! Every stream is a pure function of its [`Seed`]. Parallel scans derive one
//! child seed per sample index, so results do not depend on worker count.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::tensor::{Mat3, RankOnePerturbation, Vec3};

/// Minimum determinant accepted by [`sample_gl_plus`].
pub const MIN_SAMPLE_DET: f64 = 0.1;
pub const MAX_REJECTIONS: usize = 1000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Seed(pub u64);

impl Seed {
    /// Child seed for stream `index` (splitmix64 finalizer over both words).
    pub fn derive(self, index: u64) -> Seed {
        let mut z = self
            .0
            .wrapping_add(0x9E37_79B9_7F4A_7C15)
            .wrapping_add(index.wrapping_mul(0xD1B5_4A32_D192_ED03));
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        Seed(z ^ (z >> 31))
    }
}

impl From<u64> for Seed {
    fn from(v: u64) -> Self {
        Seed(v)
    }
}

/// A deterministic stream of samples.
pub struct Sampler {
    rng: ChaCha8Rng,
}

impl Sampler {
    pub fn new(seed: Seed) -> Self {
        Sampler {
            rng: ChaCha8Rng::seed_from_u64(seed.0),
        }
    }

    pub fn uniform(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * self.rng.gen::<f64>()
    }

    pub fn normal(&mut self) -> f64 {
        self.rng.sample(StandardNormal)
    }

    /// Uniform point on S².
    pub fn unit_vec(&mut self) -> Vec3 {
        loop {
            let v = Vec3::new(self.normal(), self.normal(), self.normal());
            if let Some(u) = v.normalized() {
                return u;
            }
        }
    }

    /// Matrix with i.i.d. entries uniform in `[-1, 1]`.
    pub fn uniform_mat(&mut self) -> Mat3 {
        let mut g = Mat3::ZERO;
        for i in 0..3 {
            for j in 0..3 {
                g[(i, j)] = self.uniform(-1.0, 1.0);
            }
        }
        g
    }

    /// `𝟙 + spread·G`, resampled until `det ≥ 0.1`.
    pub fn gl_plus(&mut self, spread: f64) -> Result<Mat3> {
        if !(spread > 0.0 && spread < 1.0) {
            return Err(Error::InvalidArgument(format!(
                "spread must lie in (0, 1), got {spread}"
            )));
        }
        for _ in 0..MAX_REJECTIONS {
            let f = Mat3::IDENTITY + self.uniform_mat().scale(spread);
            if f.det() >= MIN_SAMPLE_DET {
                return Ok(f);
            }
        }
        Err(Error::Sampler {
            rejections: MAX_REJECTIONS,
            spread,
        })
    }

    /// Rotation from a random axis and angle in `[0, π)`.
    pub fn rotation(&mut self) -> Mat3 {
        let axis = self.unit_vec();
        let angle = self.uniform(0.0, std::f64::consts::PI);
        Mat3::rotation(&axis.scale(angle))
    }

    /// `s · ξ⊗η` with unit directions and `s` uniform in `[lo, hi]`.
    pub fn perturbation(&mut self, lo: f64, hi: f64) -> RankOnePerturbation {
        let xi = self.unit_vec();
        let eta = self.unit_vec();
        let s = self.uniform(lo, hi);
        RankOnePerturbation::from_directions(xi, eta, s)
    }

    /// `F` in GL⁺(3) and a perturbation with `F + ξ⊗η` in GL⁺(3) too. Both
    /// determinants are kept above [`MIN_SAMPLE_DET`]; since `det` is affine
    /// along the segment, so is every point in between.
    pub fn admissible_pair(&mut self, spread: f64, lo: f64, hi: f64) -> Result<(Mat3, RankOnePerturbation)> {
        let f = self.gl_plus(spread)?;
        for _ in 0..MAX_REJECTIONS {
            let p = self.perturbation(lo, hi);
            if crate::tensor::det_rank_one_update(&f, &p) >= MIN_SAMPLE_DET {
                return Ok((f, p));
            }
        }
        Err(Error::Sampler {
            rejections: MAX_REJECTIONS,
            spread,
        })
    }
}

pub fn sample_gl_plus(seed: Seed, spread: f64) -> Result<Mat3> {
    Sampler::new(seed).gl_plus(spread)
}

pub fn sample_unit_vec(seed: Seed) -> Vec3 {
    Sampler::new(seed).unit_vec()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn deterministic() {
        assert_eq!(
            sample_gl_plus(Seed(7), 0.4).unwrap(),
            sample_gl_plus(Seed(7), 0.4).unwrap()
        );
        assert_eq!(sample_unit_vec(Seed(7)), sample_unit_vec(Seed(7)));
        assert_ne!(sample_unit_vec(Seed(7)), sample_unit_vec(Seed(8)));
    }

    #[test]
    fn small_spread_tends_to_identity() {
        let f = sample_gl_plus(Seed(3), 1e-9).unwrap();
        assert!((f - Mat3::IDENTITY).max_abs() <= 1e-9);
    }

    #[test]
    fn rejection_guarantee() {
        let mut s = Sampler::new(Seed(11));
        for _ in 0..10_000 {
            assert!(s.gl_plus(0.4).unwrap().det() >= MIN_SAMPLE_DET);
        }
    }

    #[test]
    fn spread_out_of_range() {
        assert!(sample_gl_plus(Seed(1), 0.0).is_err());
        assert!(sample_gl_plus(Seed(1), 1.0).is_err());
    }

    #[test]
    fn unit_vectors_are_unit_and_centered() {
        let mut s = Sampler::new(Seed(5));
        let mut mean = Vec3::ZERO;
        let n = 20_000;
        for _ in 0..n {
            let v = s.unit_vec();
            assert!((v.norm() - 1.0).abs() < 1e-15);
            mean = mean + v;
        }
        assert!(mean.scale(1.0 / n as f64).norm() < 0.03);
    }

    #[test]
    fn derived_seeds_differ() {
        let s = Seed(42);
        assert_ne!(s.derive(0), s.derive(1));
        assert_eq!(s.derive(9), s.derive(9));
    }
}
