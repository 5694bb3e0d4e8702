use serde::{Deserialize, Serialize};

use crate::sampling::Seed;
use crate::tensor::Mat3;

/// Sampling budgets shared by the ellipticity scan and the injectivity search.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScanConfig {
    pub seed: Seed,
    /// Half-width of the entry distribution around `𝟙` for sampled `F`.
    pub spread: f64,
    /// Sampled deformation gradients in the ellipticity scan.
    pub n_f: usize,
    /// Random `(ξ, η)` pairs per deformation gradient.
    pub n_dir: usize,
    /// Lowest grid candidates refined by Nelder-Mead.
    pub refine_k: usize,
    /// Sampled deformation gradients in the injectivity search.
    pub search_n_f: usize,
    /// Multi-starts per deformation gradient in the injectivity search.
    pub n_starts: usize,
    /// Upper end of the amplitude window `[0.1, s_max]`.
    pub s_max: f64,
    /// Explicit deformation gradients scanned before the sampled ones.
    pub probe_f: Vec<Mat3>,
}

impl Default for ScanConfig {
    fn default() -> Self {
        ScanConfig {
            seed: Seed(0),
            spread: 0.4,
            n_f: 1000,
            n_dir: 100,
            refine_k: 8,
            search_n_f: 16,
            n_starts: 64,
            s_max: 2.0,
            probe_f: vec![Mat3::IDENTITY, Mat3::diag(0.4, 1.0, 1.0)],
        }
    }
}
