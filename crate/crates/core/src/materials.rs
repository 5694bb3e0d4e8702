//! Stored-energy models.
//!
//! Each model supplies `W(F)` and a hand-derived first Piola-Kirchhoff stress
//! `S₁ = DW(F)`; the Cauchy stress is always derived as `σ = S₁ (Cof F)⁻¹`.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::eigen::sym_eigenvalues;
use crate::error::{domain, Error, Result};
use crate::tensor::Mat3;

/// Whether a model is expected to be strictly rank-one convex on GL⁺(3).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum EllipticityClass {
    StrictlyElliptic,
    NonElliptic,
}

pub trait MaterialModel: Send + Sync {
    fn name(&self) -> &str;

    /// `W(F)`; `DomainError` unless `det F > 0`.
    fn energy(&self, f: &Mat3) -> Result<f64>;

    /// Analytic `S₁(F) = DW(F)`.
    fn piola(&self, f: &Mat3) -> Result<Mat3>;

    /// Characteristic stress magnitude used to scale tolerances.
    fn stress_scale(&self) -> f64;

    fn is_isotropic(&self) -> bool {
        false
    }

    fn ellipticity_class(&self) -> Option<EllipticityClass> {
        None
    }

    fn parameters(&self) -> Vec<(&'static str, f64)> {
        Vec::new()
    }
}

fn check_gl_plus(f: &Mat3) -> Result<f64> {
    let j = f.det();
    if !(j > 0.0) || !f.is_finite() {
        return Err(domain(format!("det F = {j:e} is not positive")));
    }
    Ok(j)
}

/// `W = μ/2 (‖F‖² + 2/det F − 5)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BlatzKoUniConstant {
    pub mu: f64,
}

impl MaterialModel for BlatzKoUniConstant {
    fn name(&self) -> &str {
        "blatz-ko"
    }

    fn energy(&self, f: &Mat3) -> Result<f64> {
        let j = check_gl_plus(f)?;
        Ok(0.5 * self.mu * (f.norm_squared() + 2.0 / j - 5.0))
    }

    fn piola(&self, f: &Mat3) -> Result<Mat3> {
        let j = check_gl_plus(f)?;
        Ok((*f - f.cofactor().scale(1.0 / (j * j))).scale(self.mu))
    }

    fn stress_scale(&self) -> f64 {
        self.mu.abs()
    }

    fn is_isotropic(&self) -> bool {
        true
    }

    fn ellipticity_class(&self) -> Option<EllipticityClass> {
        Some(EllipticityClass::StrictlyElliptic)
    }

    fn parameters(&self) -> Vec<(&'static str, f64)> {
        vec![("mu", self.mu)]
    }
}

/// `W = μ/2 (‖F‖² − 3) − μ ln J + λ/2 (ln J)²`, `J = det F`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CompressibleNeoHooke {
    pub mu: f64,
    pub lambda: f64,
}

impl MaterialModel for CompressibleNeoHooke {
    fn name(&self) -> &str {
        "neo-hooke"
    }

    fn energy(&self, f: &Mat3) -> Result<f64> {
        let ln_j = check_gl_plus(f)?.ln();
        Ok(0.5 * self.mu * (f.norm_squared() - 3.0) - self.mu * ln_j + 0.5 * self.lambda * ln_j * ln_j)
    }

    fn piola(&self, f: &Mat3) -> Result<Mat3> {
        let j = check_gl_plus(f)?;
        let f_inv_t = f.cofactor().scale(1.0 / j);
        Ok((*f - f_inv_t).scale(self.mu) + f_inv_t.scale(self.lambda * j.ln()))
    }

    fn stress_scale(&self) -> f64 {
        self.mu.abs().max(self.lambda.abs())
    }

    fn is_isotropic(&self) -> bool {
        true
    }

    fn ellipticity_class(&self) -> Option<EllipticityClass> {
        Some(EllipticityClass::StrictlyElliptic)
    }

    fn parameters(&self) -> Vec<(&'static str, f64)> {
        vec![("mu", self.mu), ("lambda", self.lambda)]
    }
}

/// `W = λ/2 (tr E)² + μ ‖E‖²`, `E = (FᵀF − 𝟙)/2`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SaintVenantKirchhoff {
    pub mu: f64,
    pub lambda: f64,
}

impl SaintVenantKirchhoff {
    fn green_strain(f: &Mat3) -> Mat3 {
        (f.transpose() * *f - Mat3::IDENTITY).scale(0.5)
    }
}

impl MaterialModel for SaintVenantKirchhoff {
    fn name(&self) -> &str {
        "svk"
    }

    fn energy(&self, f: &Mat3) -> Result<f64> {
        check_gl_plus(f)?;
        let e = Self::green_strain(f);
        let tr = e.trace();
        Ok(0.5 * self.lambda * tr * tr + self.mu * e.norm_squared())
    }

    fn piola(&self, f: &Mat3) -> Result<Mat3> {
        check_gl_plus(f)?;
        let e = Self::green_strain(f);
        let s2 = Mat3::scalar(self.lambda * e.trace()) + e.scale(2.0 * self.mu);
        Ok(*f * s2)
    }

    fn stress_scale(&self) -> f64 {
        self.mu.abs().max(self.lambda.abs())
    }

    fn is_isotropic(&self) -> bool {
        true
    }

    fn ellipticity_class(&self) -> Option<EllipticityClass> {
        Some(EllipticityClass::NonElliptic)
    }

    fn parameters(&self) -> Vec<(&'static str, f64)> {
        vec![("mu", self.mu), ("lambda", self.lambda)]
    }
}

/// `W = c (det F − 2)³ / 3`, so `σ = c (det F − 2)² 𝟙`.
///
/// `F = 𝟙` and `F = 𝟙 + 2 e₁⊗e₁` carry the same Cauchy stress. Not stress-free
/// at the identity.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct VolumetricCubic {
    pub c: f64,
}

impl MaterialModel for VolumetricCubic {
    fn name(&self) -> &str {
        "volumetric-cubic"
    }

    fn energy(&self, f: &Mat3) -> Result<f64> {
        let j = check_gl_plus(f)?;
        Ok(self.c * (j - 2.0).powi(3) / 3.0)
    }

    fn piola(&self, f: &Mat3) -> Result<Mat3> {
        let j = check_gl_plus(f)?;
        Ok(f.cofactor().scale(self.c * (j - 2.0).powi(2)))
    }

    fn stress_scale(&self) -> f64 {
        self.c.abs()
    }

    fn is_isotropic(&self) -> bool {
        true
    }

    fn ellipticity_class(&self) -> Option<EllipticityClass> {
        Some(EllipticityClass::NonElliptic)
    }

    fn parameters(&self) -> Vec<(&'static str, f64)> {
        vec![("c", self.c)]
    }
}

/// The built-in models, resolvable by name.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "model", rename_all = "kebab-case")]
pub enum Material {
    BlatzKo(BlatzKoUniConstant),
    NeoHooke(CompressibleNeoHooke),
    Svk(SaintVenantKirchhoff),
    VolumetricCubic(VolumetricCubic),
}

impl Material {
    pub const NAMES: [&'static str; 4] = ["blatz-ko", "neo-hooke", "svk", "volumetric-cubic"];

    /// Canonical name for `name`, accepting `_` in place of `-` and a few aliases.
    pub fn canonical_name(name: &str) -> Option<&'static str> {
        match name.to_ascii_lowercase().replace('_', "-").as_str() {
            "blatz-ko" | "blatzko" => Some("blatz-ko"),
            "neo-hooke" | "neohooke" => Some("neo-hooke"),
            "svk" | "saint-venant-kirchhoff" => Some("svk"),
            "volumetric-cubic" => Some("volumetric-cubic"),
            _ => None,
        }
    }

    /// Build a model from its name and parameters. Unset parameters default to 1.
    pub fn from_name(name: &str, params: &BTreeMap<String, f64>) -> Result<Material> {
        let canonical =
            Self::canonical_name(name).ok_or_else(|| Error::InvalidArgument(format!("unknown model `{name}`")))?;
        let allowed: &[&str] = match canonical {
            "blatz-ko" => &["mu"],
            "volumetric-cubic" => &["c"],
            _ => &["mu", "lambda"],
        };
        if let Some(bad) = params.keys().find(|k| !allowed.contains(&k.as_str())) {
            return Err(Error::InvalidArgument(format!(
                "model `{canonical}` has no parameter `{bad}`"
            )));
        }
        let get = |k: &str| params.get(k).copied().unwrap_or(1.0);
        let model = match canonical {
            "blatz-ko" => Material::BlatzKo(BlatzKoUniConstant { mu: get("mu") }),
            "neo-hooke" => Material::NeoHooke(CompressibleNeoHooke {
                mu: get("mu"),
                lambda: get("lambda"),
            }),
            "svk" => Material::Svk(SaintVenantKirchhoff {
                mu: get("mu"),
                lambda: get("lambda"),
            }),
            _ => Material::VolumetricCubic(VolumetricCubic { c: get("c") }),
        };
        if model.parameters().iter().any(|(_, v)| !(v.is_finite() && *v > 0.0)) {
            return Err(Error::InvalidArgument(format!(
                "model `{canonical}` parameters must be positive and finite"
            )));
        }
        Ok(model)
    }

    pub fn with_defaults(name: &str) -> Result<Material> {
        Self::from_name(name, &BTreeMap::new())
    }

    fn inner(&self) -> &dyn MaterialModel {
        match self {
            Material::BlatzKo(m) => m,
            Material::NeoHooke(m) => m,
            Material::Svk(m) => m,
            Material::VolumetricCubic(m) => m,
        }
    }
}

impl MaterialModel for Material {
    fn name(&self) -> &str {
        self.inner().name()
    }
    fn energy(&self, f: &Mat3) -> Result<f64> {
        self.inner().energy(f)
    }
    fn piola(&self, f: &Mat3) -> Result<Mat3> {
        self.inner().piola(f)
    }
    fn stress_scale(&self) -> f64 {
        self.inner().stress_scale()
    }
    fn is_isotropic(&self) -> bool {
        self.inner().is_isotropic()
    }
    fn ellipticity_class(&self) -> Option<EllipticityClass> {
        self.inner().ellipticity_class()
    }
    fn parameters(&self) -> Vec<(&'static str, f64)> {
        self.inner().parameters()
    }
}

pub fn energy(m: &dyn MaterialModel, f: &Mat3) -> Result<f64> {
    m.energy(f)
}

pub fn piola_analytic(m: &dyn MaterialModel, f: &Mat3) -> Result<Mat3> {
    m.piola(f)
}

/// Default first-derivative FD step, `1e-5 (1 + ‖F‖)`.
pub fn default_fd_step(f: &Mat3) -> f64 {
    1e-5 * (1.0 + f.norm())
}

/// Central-difference `S₁`, `(W(F + hE_ij) − W(F − hE_ij)) / 2h` per entry.
pub fn piola_fd(m: &dyn MaterialModel, f: &Mat3, h: f64) -> Result<Mat3> {
    if !(h > 0.0) {
        return Err(Error::InvalidArgument(format!("step must be positive, got {h}")));
    }
    check_gl_plus(f)?;
    let mut out = Mat3::ZERO;
    for i in 0..3 {
        for j in 0..3 {
            let mut plus = *f;
            plus[(i, j)] += h;
            let mut minus = *f;
            minus[(i, j)] -= h;
            out[(i, j)] = (m.energy(&plus)? - m.energy(&minus)?) / (2.0 * h);
        }
    }
    Ok(out)
}

/// `S₁(F) (Cof F)⁻¹` before symmetrization.
pub fn cauchy_unsymmetrized(m: &dyn MaterialModel, f: &Mat3) -> Result<Mat3> {
    check_gl_plus(f)?;
    Ok(m.piola(f)? * f.cofactor().inverse()?)
}

/// Relative asymmetry tolerated by [`cauchy`] before it refuses to symmetrize.
pub const CAUCHY_ASYMMETRY_RTOL: f64 = 1e-8;

/// Cauchy stress `σ = S₁(F) (Cof F)⁻¹`, returned as its symmetric part.
pub fn cauchy(m: &dyn MaterialModel, f: &Mat3) -> Result<Mat3> {
    let sigma = cauchy_unsymmetrized(m, f)?;
    let asymmetry = sigma.asymmetry();
    let tolerance = CAUCHY_ASYMMETRY_RTOL * (sigma.norm() + m.stress_scale());
    if asymmetry > tolerance {
        return Err(Error::AsymmetricStress { asymmetry, tolerance });
    }
    Ok(sigma.sym())
}

/// Isotropic Blatz-Ko response `σ̃(B) = μ/det B (√det B · B − 𝟙)`.
pub fn blatzko_cauchy_from_b(mu: f64, b: &Mat3) -> Result<Mat3> {
    if !b.is_finite() || b.asymmetry() > 1e-12 * b.norm() {
        return Err(domain("B must be symmetric"));
    }
    let ev = sym_eigenvalues(b);
    if !(ev[0] > 0.0) {
        return Err(domain(format!("B is not positive-definite (λ_min = {:e})", ev[0])));
    }
    let d = b.det();
    Ok((b.scale(d.sqrt()) - Mat3::IDENTITY).scale(mu / d))
}

/// Spherical part `tr(σ)/3`.
pub fn spherical_stress(sigma: &Mat3) -> f64 {
    sigma.trace() / 3.0
}
